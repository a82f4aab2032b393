//! Gapped Hamiltonians, their Gibbs states, the feasibility locus of gapped
//! 2×2 summing data, Kronecker-sum closure, gap-preserving channels and
//! words in the localization at those channels.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::linalg::{self, CMatrix};
use crate::quantum::{self, DensityMatrix, QuantumChannel, QuantumError};
use crate::summing::{self, RealizationDescriptor, RealizationKind, RealizationParams};

pub const TOL: f64 = 1e-9;

/// Discriminants of `α(1-α) = c` within this distance of zero are read as
/// the threshold itself, so that `c = 1/4` exactly there.
pub const THRESHOLD_SNAP: f64 = 1e-12;

/// `t* = 7 - 4√3`, the root in `(0, 1)` of `16t = (1+t)²`, i.e. of `c = 1/4`.
pub fn threshold_t() -> f64 {
    7.0 - 4.0 * libm::sqrt(3.0)
}

/// `βΔ* = ln(7 + 4√3) = -ln t*`, using `(7-4√3)(7+4√3) = 1`.
pub fn threshold_beta_delta() -> f64 {
    libm::log(7.0 + 4.0 * libm::sqrt(3.0))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GappedError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("gap must be positive, got {0}")]
    NonpositiveGap(f64),
    #[error("inverse temperature must be positive, got {0}")]
    NonpositiveBeta(f64),
    #[error("lowest eigenvalue {0} is not zero")]
    NoZeroGroundState(f64),
    #[error("eigenvalue {0} lies inside the gap")]
    GapViolated(f64),
    #[error("the gap locus is empty for these parameters")]
    InfeasibleLocus,
    #[error("ill-formed localization word at letter {0}")]
    IllFormedWord(usize),
    #[error("state is singular, no finite Hamiltonian")]
    SingularState,
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GappedHamiltonian {
    matrix: CMatrix,
    delta: f64,
    spectrum: Vec<f64>,
}

/// `Spec(H) ⊂ {0} ∪ [Δ, ∞)` with `0 ∈ Spec(H)`, within [`TOL`].
pub fn validate_gapped(h: &CMatrix, delta: f64) -> Result<GappedHamiltonian, GappedError> {
    if !h.is_square() {
        return Err(GappedError::NotSquare);
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(GappedError::NonpositiveGap(delta));
    }
    let defect = linalg::hermitian_defect(h);
    if defect >= TOL {
        return Err(GappedError::NotHermitian(defect));
    }
    let matrix = linalg::hermitize(h);
    let spectrum = linalg::eigenvalues(&matrix);
    let ground = spectrum[0];
    if ground.abs() >= TOL {
        return Err(GappedError::NoZeroGroundState(ground));
    }
    if let Some(&bad) = spectrum.iter().find(|&&x| x.abs() >= TOL && x < delta - TOL) {
        return Err(GappedError::GapViolated(bad));
    }
    Ok(GappedHamiltonian { matrix, delta, spectrum })
}

impl GappedHamiltonian {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Ascending.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ground_degeneracy(&self) -> usize {
        self.spectrum.iter().filter(|x| x.abs() < TOL).count()
    }
}

/// `e^{-βH} / Tr e^{-βH}`.
pub fn gibbs(h: &GappedHamiltonian, beta: f64) -> Result<DensityMatrix, GappedError> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(GappedError::NonpositiveBeta(beta));
    }
    let w = linalg::hermitian_function(&h.matrix, |x| libm::exp(-beta * x));
    let tr = linalg::trace(&w);
    Ok(quantum::validate_density(&(w / tr))?)
}

/// `H = -(1/β)(log ρ - log λ_max)`, the Hamiltonian with zero ground energy
/// whose Gibbs state at `β` is `ρ`.
pub fn hamiltonian_from_state(rho: &DensityMatrix, beta: f64) -> Result<CMatrix, GappedError> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(GappedError::NonpositiveBeta(beta));
    }
    let eig = rho.eigenvalues();
    if eig[0] <= 0.0 {
        return Err(GappedError::SingularState);
    }
    let top = libm::log(eig[eig.len() - 1]);
    Ok(linalg::hermitian_function(rho.matrix(), |x| -(libm::log(x) - top) / beta))
}

/// The locus of `(α, θ)` allowed for gapped 2×2 summing data, with
/// `t = e^{-βΔ}`, `c = 4t/(1+t)²` and `|θ|² = α(1-α) - c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapLocus {
    pub beta: f64,
    pub delta: f64,
    pub t: f64,
    pub c: f64,
    pub feasible: bool,
    pub interval: Option<(f64, f64)>,
}

impl GapLocus {
    pub fn radius_sq(&self, alpha: f64) -> f64 {
        alpha * (1.0 - alpha) - self.c
    }

    pub fn contains(&self, alpha: f64) -> bool {
        self.interval.is_some_and(|(a, b)| a <= alpha && alpha <= b)
    }
}

pub fn gap_locus(beta: f64, delta: f64) -> Result<GapLocus, GappedError> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(GappedError::NonpositiveBeta(beta));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(GappedError::NonpositiveGap(delta));
    }
    Ok(locus_from_t(beta, delta, libm::exp(-beta * delta)))
}

/// The locus at a given `t = e^{-βΔ}`, recording `β = 1` and `Δ = -ln t`.
pub fn gap_locus_at_t(t: f64) -> Result<GapLocus, GappedError> {
    if !(t > 0.0 && t < 1.0) {
        return Err(GappedError::NonpositiveGap(-libm::log(t)));
    }
    Ok(locus_from_t(1.0, -libm::log(t), t))
}

fn locus_from_t(beta: f64, delta: f64, t: f64) -> GapLocus {
    let s = 1.0 + t;
    // 1 - 4c written without cancellation near the threshold.
    let disc = (t * t - 14.0 * t + 1.0) / (s * s);
    let mut c = 4.0 * t / (s * s);
    let interval = if disc.abs() <= THRESHOLD_SNAP {
        c = 0.25;
        Some((0.5, 0.5))
    } else if disc > 0.0 {
        let r = libm::sqrt(disc);
        Some(((1.0 - r) / 2.0, (1.0 + r) / 2.0))
    } else {
        None
    };
    GapLocus { beta, delta, t, c, feasible: interval.is_some(), interval }
}

/// `|θ|² = α(1-α) - t/(1+t)²`: the relation under which the block really
/// has spectrum `{t/(1+t), 1/(1+t)}`. It is non-empty for every `t`.
pub fn gibbs_radius_sq(t: f64, alpha: f64) -> f64 {
    alpha * (1.0 - alpha) - t / ((1.0 + t) * (1.0 + t))
}

/// `H ⊗ 1 + 1 ⊗ H'`.
pub fn kronecker_sum(h: &CMatrix, h2: &CMatrix) -> CMatrix {
    let (n, m) = (h.nrows(), h2.nrows());
    linalg::kron(h, &CMatrix::identity(m, m)) + linalg::kron(&CMatrix::identity(n, n), h2)
}

/// The Kronecker sum of two `Δ`-gapped Hamiltonians is `Δ`-gapped.
pub fn kronecker_sum_gap(h: &GappedHamiltonian, h2: &GappedHamiltonian) -> Result<GappedHamiltonian, GappedError> {
    validate_gapped(&kronecker_sum(&h.matrix, &h2.matrix), h.delta.min(h2.delta))
}

/// Membership of `Φ` in the gap-preserving class: `Φ(ρ_H) = ρ_{H'}` at `β`.
pub fn is_gap_preserving(
    phi: &QuantumChannel,
    h: &GappedHamiltonian,
    h2: &GappedHamiltonian,
    beta: f64,
) -> Result<bool, GappedError> {
    let (din, dout) = phi.map().dims();
    if din != h.dim() || dout != h2.dim() {
        return Err(QuantumError::DimensionMismatch.into());
    }
    let image = phi.apply(gibbs(h, beta)?.matrix())?;
    Ok(linalg::max_abs(&(image - gibbs(h2, beta)?.matrix())) < TOL)
}

/// A Hamiltonian with eigenvalue 0 and the rest drawn from `[Δ, Δ + spread]`,
/// in a random unitary frame.
pub fn random_gapped<R: Rng>(rng: &mut R, dim: usize, delta: f64, spread: f64) -> GappedHamiltonian {
    let mut values = Vec::with_capacity(dim);
    values.push(0.0);
    for _ in 1..dim {
        values.push(delta + rng.random_range(0.0..=spread));
    }
    let u = quantum::random_unitary(rng, dim);
    let h = &u * linalg::diag(&values) * u.adjoint();
    validate_gapped(&h, delta).expect("spectrum is gapped by construction")
}

/// A letter of a word in the path category: a forward composite of base
/// morphisms (applied left to right) or the formal inverse of one
/// gap-preserving morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Letter {
    pub path: Vec<usize>,
    pub source: usize,
    pub target: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn forward(id: usize, source: usize, target: usize) -> Self {
        Self { path: alloc::vec![id], source, target, inverse: false }
    }

    /// `id : source → target`, traversed backwards.
    pub fn inverse(id: usize, source: usize, target: usize) -> Self {
        Self { path: alloc::vec![id], source, target, inverse: true }
    }

    fn start(&self) -> usize {
        if self.inverse { self.target } else { self.source }
    }

    fn end(&self) -> usize {
        if self.inverse { self.source } else { self.target }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizationWord {
    pub object: usize,
    pub letters: Vec<Letter>,
}

impl LocalizationWord {
    /// Checks composability and that inverted letters are single members of
    /// the inverted class.
    pub fn new(object: usize, letters: Vec<Letter>, invertible: impl Fn(usize) -> bool) -> Result<Self, GappedError> {
        let mut at = object;
        for (k, l) in letters.iter().enumerate() {
            let bad_inverse = l.inverse && (l.path.len() != 1 || !invertible(l.path[0]));
            if l.path.is_empty() || bad_inverse || l.start() != at {
                return Err(GappedError::IllFormedWord(k));
            }
            at = l.end();
        }
        Ok(Self { object, letters })
    }

    pub fn end(&self) -> usize {
        self.letters.last().map_or(self.object, Letter::end)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// Rewrites with `ΦΦ⁻¹ = 1`, `Φ⁻¹Φ = 1` and `Ψ₁Ψ₂ = Ψ₂∘Ψ₁` until nothing
/// applies. Cancellation is tried first, including against the end letter
/// of a forward composite, so that composing never hides a cancellation.
pub fn reduce_word(w: &LocalizationWord) -> LocalizationWord {
    let mut letters = w.letters.clone();
    loop {
        if let Some(k) = (0..letters.len().saturating_sub(1)).find(|&k| cancels(&letters[k], &letters[k + 1])) {
            let fwd_first = !letters[k].inverse;
            let (fwd, inv) = if fwd_first { (k, k + 1) } else { (k + 1, k) };
            if letters[fwd].path.len() == 1 {
                letters.drain(k..=k + 1);
            } else {
                // Peel the cancelled end off the composite; that end moves to
                // the far side of the inverse letter.
                let inverse = letters.remove(inv);
                let f = &mut letters[k];
                if fwd_first {
                    f.path.pop();
                    f.target = inverse.end();
                } else {
                    f.path.remove(0);
                    f.source = inverse.start();
                }
            }
            continue;
        }
        if let Some(k) = (0..letters.len().saturating_sub(1)).find(|&k| !letters[k].inverse && !letters[k + 1].inverse) {
            let next = letters.remove(k + 1);
            letters[k].path.extend(next.path);
            letters[k].target = next.target;
            continue;
        }
        break;
    }
    LocalizationWord { object: w.object, letters }
}

fn cancels(x: &Letter, y: &Letter) -> bool {
    match (x.inverse, y.inverse) {
        (false, true) => x.path.last() == Some(&y.path[0]),
        (true, false) => y.path.first() == Some(&x.path[0]),
        _ => false,
    }
}

/// Parameter cube `[a, b]^N` with circles of squared radius `α(1-α) - c`.
pub fn gapped_realization_descriptor(n: usize, locus: &GapLocus) -> Result<RealizationDescriptor, GappedError> {
    let (a, b) = locus.interval.ok_or(GappedError::InfeasibleLocus)?;
    let range = format!("[{a:.12}, {b:.12}]");
    Ok(RealizationDescriptor {
        kind: RealizationKind::GappedTorus,
        n,
        params: RealizationParams::GappedTorus { beta: locus.beta, delta: locus.delta, t: locus.t, c: locus.c, a, b },
        strata: summing::half_strata(n, |j| summing::unitary_stabilizer(n, j), &range),
    })
}
