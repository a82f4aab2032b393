//! Density matrices, quantum channels, quantum probabilistic objects and
//! the quantum summing functors on pointed sets.
//!
//! A linear map `M_{din} → M_{dout}` is stored as its Choi matrix
//! `J_{(i,a),(j,b)} = S_{ab→ij}`, where `(ρ')_{ij} = Σ_{ab} S_{ab→ij} ρ_{ab}`
//! and the composite index `(i,a)` is `i·din + a`. With this reshuffle the
//! map is completely positive iff `J` is positive semidefinite, and trace
//! preserving iff `Σ_i J_{(i,a),(i,b)} = δ_{ab}`.

use alloc::vec::Vec;

use num_complex::{Complex, Complex64};
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::linalg::{self, c, CMatrix};
use crate::pointed::{self, PointedSet};
use crate::rational::{self, Rational};
use crate::summing::{self, RealizationDescriptor, RealizationKind, RealizationParams};

/// Tolerance for spectral and trace checks.
pub const TOL: f64 = 1e-9;

/// Target entries with modulus below this take the additive copair branch.
pub const ZERO_ENTRY: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not positive semidefinite (minimum eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("trace {0} differs from 1")]
    TraceNotOne(f64),
    #[error("map is not completely positive (Choi eigenvalue {0:e})")]
    NotCp(f64),
    #[error("map is not trace preserving (deviation {0:e})")]
    NotTp(f64),
    #[error("dimensions do not match")]
    DimensionMismatch,
    #[error("coordinate {coordinate} violates |θ|² ≤ α(1-α)")]
    AnnulusViolated { coordinate: usize },
    #[error("α at coordinate {0} lies outside [0, 1]")]
    AlphaOutOfRange(usize),
    #[error("operator is not unitary")]
    NotUnitary,
    #[error("projective coordinates are all zero")]
    ZeroVector,
    #[error("subset is not contained in the base set")]
    NotSubset,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    eigenvalues: Vec<f64>,
    hermitization: f64,
}

/// Hermitian, positive semidefinite and trace one, all within [`TOL`].
pub fn validate_density(m: &CMatrix) -> Result<DensityMatrix, QuantumError> {
    if !m.is_square() {
        return Err(QuantumError::NotSquare);
    }
    let defect = linalg::hermitian_defect(m);
    if defect >= TOL {
        return Err(QuantumError::NotHermitian(defect));
    }
    let matrix = linalg::hermitize(m);
    let eigenvalues = linalg::eigenvalues(&matrix);
    let min = eigenvalues.first().copied().unwrap_or(0.0);
    if min <= -TOL {
        return Err(QuantumError::NotPsd(min));
    }
    let tr = linalg::trace(&matrix).re;
    if (tr - 1.0).abs() >= TOL {
        return Err(QuantumError::TraceNotOne(tr));
    }
    Ok(DensityMatrix { matrix, eigenvalues, hermitization: defect })
}

impl DensityMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Size of the correction `(ρ + ρ†)/2` applied before the eigen-solve.
    pub fn hermitization(&self) -> f64 {
        self.hermitization
    }

    pub fn is_pure(&self) -> bool {
        let n = self.eigenvalues.len();
        self.eigenvalues[..n - 1].iter().all(|x| x.abs() < TOL) && (self.eigenvalues[n - 1] - 1.0).abs() < TOL
    }

    pub fn unit() -> Self {
        validate_density(&linalg::diag(&[1.0])).expect("one-dimensional state")
    }
}

/// A linear map between matrix algebras, possibly neither positive nor
/// trace preserving.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    din: usize,
    dout: usize,
    choi: CMatrix,
}

impl LinearMap {
    pub fn from_choi(din: usize, dout: usize, choi: CMatrix) -> Result<Self, QuantumError> {
        if choi.nrows() != din * dout || choi.ncols() != din * dout {
            return Err(QuantumError::DimensionMismatch);
        }
        Ok(Self { din, dout, choi })
    }

    /// Builds `J` from `S(a, b, i, j) = S_{ab→ij}`.
    pub fn from_transfer(din: usize, dout: usize, s: impl Fn(usize, usize, usize, usize) -> Complex64) -> Self {
        let choi = CMatrix::from_fn(din * dout, din * dout, |r, col| {
            let (i, a) = (r / din, r % din);
            let (j, b) = (col / din, col % din);
            s(a, b, i, j)
        });
        Self { din, dout, choi }
    }

    /// `ρ ↦ Σ_k A_k ρ A_k†`.
    pub fn from_kraus(kraus: &[CMatrix]) -> Result<Self, QuantumError> {
        let first = kraus.first().ok_or(QuantumError::DimensionMismatch)?;
        let (dout, din) = first.shape();
        if kraus.iter().any(|a| a.shape() != (dout, din)) {
            return Err(QuantumError::DimensionMismatch);
        }
        Ok(Self::from_transfer(din, dout, |a, b, i, j| {
            kraus.iter().map(|k| k[(i, a)] * k[(j, b)].conj()).sum()
        }))
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.din, self.dout)
    }

    pub fn choi(&self) -> &CMatrix {
        &self.choi
    }

    pub fn transfer(&self, a: usize, b: usize, i: usize, j: usize) -> Complex64 {
        self.choi[(i * self.din + a, j * self.din + b)]
    }

    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix, QuantumError> {
        if rho.shape() != (self.din, self.din) {
            return Err(QuantumError::DimensionMismatch);
        }
        Ok(CMatrix::from_fn(self.dout, self.dout, |i, j| {
            let mut acc = Complex64::zero();
            for a in 0..self.din {
                for b in 0..self.din {
                    acc += self.transfer(a, b, i, j) * rho[(a, b)];
                }
            }
            acc
        }))
    }

    /// `second ∘ self`.
    pub fn then(&self, second: &LinearMap) -> Result<LinearMap, QuantumError> {
        if self.dout != second.din {
            return Err(QuantumError::DimensionMismatch);
        }
        let mid = self.dout;
        Ok(Self::from_transfer(self.din, second.dout, |a, b, u, v| {
            let mut acc = Complex64::zero();
            for i in 0..mid {
                for j in 0..mid {
                    acc += self.transfer(a, b, i, j) * second.transfer(i, j, u, v);
                }
            }
            acc
        }))
    }

    pub fn min_choi_eigenvalue(&self) -> f64 {
        linalg::eigenvalues(&self.choi).first().copied().unwrap_or(0.0)
    }

    /// `max_{a,b} |Σ_i J_{(i,a),(i,b)} - δ_{ab}|`.
    pub fn tp_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in 0..self.din {
            for b in 0..self.din {
                let s: Complex64 = (0..self.dout).map(|i| self.transfer(a, b, i, i)).sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((s - c(target, 0.0)).norm());
            }
        }
        worst
    }

    pub fn distance(&self, other: &LinearMap) -> f64 {
        if self.dims() != other.dims() {
            return f64::INFINITY;
        }
        linalg::max_abs(&(&self.choi - &other.choi))
    }
}

/// A completely positive trace preserving map.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    map: LinearMap,
    kraus: Option<Vec<CMatrix>>,
}

impl QuantumChannel {
    pub fn new(map: LinearMap) -> Result<Self, QuantumError> {
        let defect = linalg::hermitian_defect(&map.choi);
        if defect >= TOL {
            return Err(QuantumError::NotCp(-defect));
        }
        let min = map.min_choi_eigenvalue();
        if min <= -TOL {
            return Err(QuantumError::NotCp(min));
        }
        let tp = map.tp_defect();
        if tp >= TOL {
            return Err(QuantumError::NotTp(tp));
        }
        Ok(Self { map, kraus: None })
    }

    pub fn from_kraus(kraus: Vec<CMatrix>) -> Result<Self, QuantumError> {
        let map = LinearMap::from_kraus(&kraus)?;
        let mut ch = Self::new(map)?;
        ch.kraus = Some(kraus);
        Ok(ch)
    }

    pub fn identity(d: usize) -> Self {
        Self::from_kraus(alloc::vec![CMatrix::identity(d, d)]).expect("identity channel")
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn kraus(&self) -> Option<&[CMatrix]> {
        self.kraus.as_deref()
    }

    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix, QuantumError> {
        self.map.apply(rho)
    }

    /// Kraus operators `√λ_k` times the reshaped eigenvectors of `J`,
    /// dropping eigenvalues below [`TOL`].
    pub fn kraus_from_choi(&self) -> Vec<CMatrix> {
        let (din, dout) = self.map.dims();
        let (values, vectors) = linalg::hermitian_eigen(&self.map.choi);
        values
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > TOL)
            .map(|(k, &l)| {
                let s = libm::sqrt(l);
                CMatrix::from_fn(dout, din, |i, a| vectors[(i * din + a, k)] * s)
            })
            .collect()
    }

    /// `Σ A_k† A_k = 1` within tolerance for the stored Kraus set.
    pub fn kraus_complete(&self) -> Option<bool> {
        let kraus = self.kraus.as_ref()?;
        let din = self.map.din;
        let sum = kraus.iter().fold(CMatrix::zeros(din, din), |acc, a| acc + a.adjoint() * a);
        Some(linalg::max_abs(&(sum - CMatrix::identity(din, din))) < TOL)
    }
}

/// Kraus → Choi → Kraus, returning the rebuilt channel and the largest
/// transfer discrepancy.
pub fn channel_roundtrip(kraus: Vec<CMatrix>) -> Result<(QuantumChannel, f64), QuantumError> {
    let ch = QuantumChannel::from_kraus(kraus)?;
    let rebuilt = QuantumChannel::from_kraus(ch.kraus_from_choi())?;
    let err = ch.map.distance(&rebuilt.map);
    Ok((rebuilt, err))
}

/// The transpose map, positive but not completely positive.
pub fn transpose_map(d: usize) -> LinearMap {
    LinearMap::from_transfer(d, d, |a, b, i, j| if i == b && j == a { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

/// Normalized random Kraus set: `A_k = G_k S^{-1/2}` with `S = Σ G_k† G_k`.
/// `S` is only invertible when `count·dout ≥ din`, so `count` is raised to
/// that minimum.
pub fn random_kraus<R: Rng>(rng: &mut R, din: usize, dout: usize, count: usize) -> Vec<CMatrix> {
    let count = count.max(din.div_ceil(dout));
    let gs: Vec<CMatrix> = (0..count)
        .map(|_| CMatrix::from_fn(dout, din, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
        .collect();
    let s = gs.iter().fold(CMatrix::zeros(din, din), |acc, g| acc + g.adjoint() * g);
    let inv_sqrt = linalg::hermitian_function(&s, |x| 1.0 / libm::sqrt(x));
    gs.into_iter().map(|g| g * &inv_sqrt).collect()
}

pub fn random_unitary<R: Rng>(rng: &mut R, d: usize) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let h = linalg::hermitize(&g);
    // exp(iH) is unitary for Hermitian H.
    let (values, vectors) = linalg::hermitian_eigen(&h);
    let d_mat = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        d,
        values.iter().map(|&x| c(libm::cos(x), libm::sin(x))),
    ));
    &vectors * d_mat * vectors.adjoint()
}

/// A random density matrix `G G† / Tr`.
pub fn random_density<R: Rng>(rng: &mut R, d: usize) -> CMatrix {
    let g = CMatrix::from_fn(d, d, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let m = &g * g.adjoint();
    let tr = linalg::trace(&m);
    m / tr
}

/// An object of the quantum probabilistic category: pairs of objects of an
/// underlying category weighted by a density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QcObject<O> {
    pub pairs: Vec<Vec<(O, O)>>,
    pub rho: DensityMatrix,
}

impl<O: Clone> QcObject<O> {
    pub fn new(pairs: Vec<Vec<(O, O)>>, rho: DensityMatrix) -> Result<Self, QuantumError> {
        let n = rho.dim();
        if pairs.len() != n || pairs.iter().any(|r| r.len() != n) {
            return Err(QuantumError::DimensionMismatch);
        }
        Ok(Self { pairs, rho })
    }

    pub fn zero(zero: O) -> Self {
        Self { pairs: alloc::vec![alloc::vec![(zero.clone(), zero)]], rho: DensityMatrix::unit() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QcCoproduct<O> {
    pub object: QcObject<O>,
    /// `ρ ↦ ρ ⊗ ρ'`.
    pub left: LinearMap,
    /// `ρ' ↦ ρ ⊗ ρ'`.
    pub right: LinearMap,
}

/// `(C_i ⨿ C'_j, ρ ⊗ ρ')` with composite index `i·M + j`.
pub fn qc_coproduct<O: Clone>(x: &QcObject<O>, y: &QcObject<O>, sum: impl Fn(&O, &O) -> O) -> QcCoproduct<O> {
    let (n, m) = (x.rho.dim(), y.rho.dim());
    let pairs = (0..n * m)
        .map(|r| {
            (0..n * m)
                .map(|col| {
                    let (xa, xb) = &x.pairs[r / m][col / m];
                    let (ya, yb) = &y.pairs[r % m][col % m];
                    (sum(xa, ya), sum(xb, yb))
                })
                .collect()
        })
        .collect();
    let rho_x = x.rho.matrix().clone();
    let rho_y = y.rho.matrix().clone();
    let rho = validate_density(&linalg::kron(&rho_x, &rho_y)).expect("tensor product of states");
    let left = LinearMap::from_transfer(n, n * m, |i, j, p, q| {
        if p / m == i && q / m == j {
            rho_y[(p % m, q % m)]
        } else {
            Complex64::zero()
        }
    });
    let right = LinearMap::from_transfer(m, n * m, |a, b, p, q| {
        if p % m == a && q % m == b {
            rho_x[(p / m, q / m)]
        } else {
            Complex64::zero()
        }
    });
    QcCoproduct { object: QcObject { pairs, rho }, left, right }
}

/// The copairing out of `ρ ⊗ ρ'` into a state `ρ̃`: entry
/// `ρ̃_{us}⁻¹ (Φ₁)_{ij→us} (Φ₂)_{ab→us}` when `ρ̃_{us} ≠ 0`, and
/// `(Φ₁)_{ij→us} δ_{ab} + (Φ₂)_{ab→us} δ_{ij}` otherwise. The result need
/// not be completely positive.
pub fn qc_copair(phi1: &LinearMap, phi2: &LinearMap, target: &CMatrix) -> Result<LinearMap, QuantumError> {
    let (n, k) = phi1.dims();
    let (m, k2) = phi2.dims();
    if k != k2 || target.shape() != (k, k) {
        return Err(QuantumError::DimensionMismatch);
    }
    Ok(LinearMap::from_transfer(n * m, k, |p, q, u, s| {
        let (i, a) = (p / m, p % m);
        let (j, b) = (q / m, q % m);
        let t = target[(u, s)];
        if t.norm() < ZERO_ENTRY {
            let mut acc = Complex64::zero();
            if a == b {
                acc += phi1.transfer(i, j, u, s);
            }
            if i == j {
                acc += phi2.transfer(a, b, u, s);
            }
            acc
        } else {
            phi1.transfer(i, j, u, s) * phi2.transfer(a, b, u, s) / t
        }
    }))
}

/// `[[α, θ], [θ̄, 1-α]]`.
pub fn rho_single(alpha: f64, theta: Complex64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(alpha, 0.0), theta, theta.conj(), c(1.0 - alpha, 0.0)])
}

/// Bisects `|θ|` along the direction `e^{iφ}` for the point where the 2×2
/// block stops being positive semidefinite, judged by its computed minimum
/// eigenvalue with no tolerance. Returns the squared modulus at the flip.
pub fn psd_flip_radius_sq(alpha: f64, phase: f64, iterations: usize) -> f64 {
    let dir = c(libm::cos(phase), libm::sin(phase));
    let psd = |r: f64| linalg::eigenvalues(&rho_single(alpha, dir * r))[0] >= 0.0;
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..iterations {
        let mid = 0.5 * (lo + hi);
        if psd(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo * lo
}

pub type ExactComplex = Complex<Rational>;
pub type ExactMatrix = Vec<Vec<ExactComplex>>;

fn exact_kron(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let (n, m) = (a.len(), b.len());
    (0..n * m).map(|r| (0..n * m).map(|col| &a[r / m][col / m] * &b[r % m][col % m]).collect()).collect()
}

fn to_c64(z: &ExactComplex) -> Complex64 {
    c(rational::to_f64(&z.re), rational::to_f64(&z.im))
}

/// Quantum summing functor data: per point a diagonal `α_x` and an
/// off-diagonal `θ_x`, with exact Gaussian-rational entries.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumSummingFunctor {
    alpha: Vec<Rational>,
    theta: Vec<ExactComplex>,
}

impl QuantumSummingFunctor {
    /// Enforces `α_x ∈ [0,1]` and `|θ_x|² ≤ α_x(1-α_x)`, which is exactly
    /// positivity of each 2×2 block.
    pub fn new(alpha: Vec<Rational>, theta: Vec<ExactComplex>) -> Result<Self, QuantumError> {
        if alpha.len() != theta.len() {
            return Err(QuantumError::DimensionMismatch);
        }
        for (k, (a, t)) in alpha.iter().zip(&theta).enumerate() {
            if a.is_negative() || *a > Rational::one() {
                return Err(QuantumError::AlphaOutOfRange(k));
            }
            if t.norm_sqr() > a * (Rational::one() - a) {
                return Err(QuantumError::AnnulusViolated { coordinate: k });
            }
        }
        Ok(Self { alpha, theta })
    }

    pub fn points(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[Rational] {
        &self.alpha
    }

    pub fn theta(&self) -> &[ExactComplex] {
        &self.theta
    }

    pub fn block(&self, x: usize) -> ExactMatrix {
        let a = ExactComplex::new(self.alpha[x].clone(), Rational::zero());
        let b = ExactComplex::new(Rational::one() - &self.alpha[x], Rational::zero());
        alloc::vec![alloc::vec![a, self.theta[x].clone()], alloc::vec![self.theta[x].conj(), b]]
    }

    /// `ρ_A = ⊗_{a ∈ A} ρ^{(a)}`, points in ascending order.
    pub fn exact_rho(&self, mask: u32) -> Result<ExactMatrix, QuantumError> {
        if self.points() < 32 && mask >> self.points() != 0 {
            return Err(QuantumError::NotSubset);
        }
        let one = alloc::vec![alloc::vec![ExactComplex::new(Rational::one(), Rational::zero())]];
        Ok((0..self.points()).filter(|k| mask >> k & 1 == 1).fold(one, |acc, x| exact_kron(&acc, &self.block(x))))
    }

    /// `Θ(A)`: the tensor product state with pairs of base-pattern wedges.
    pub fn evaluate(&self, mask: u32) -> Result<QcObject<PointedSet>, QuantumError> {
        let exact = self.exact_rho(mask)?;
        let k = mask.count_ones() as usize;
        let d = exact.len();
        let rho = validate_density(&CMatrix::from_fn(d, d, |r, col| to_c64(&exact[r][col])))?;
        let set = |p: usize| {
            if k == 0 {
                PointedSet::point()
            } else {
                PointedSet::new(k + 1, p >> (k - 1) & 1).expect("base within the wedge")
            }
        };
        let pairs = (0..d).map(|p| (0..d).map(|q| (set(p), set(q))).collect()).collect();
        QcObject::new(pairs, rho)
    }

    /// The diagonal of `ρ_A`, exact.
    pub fn diagonal(&self, mask: u32) -> Result<Vec<Rational>, QuantumError> {
        let rho = self.exact_rho(mask)?;
        Ok(rho.iter().enumerate().map(|(i, row)| row[i].re.clone()).collect())
    }

    /// Forgets the off-diagonal data.
    pub fn classical(&self) -> summing::ClassicalSummingFunctor {
        let x = PointedSet::new(self.points() + 1, 0).expect("non-empty");
        summing::ClassicalSummingFunctor::new(x, self.alpha.clone()).expect("α validated")
    }
}

/// Conjugates each block by its unitary and reads back `(α', θ')`.
pub fn local_unitary_act(
    unitaries: &[CMatrix],
    alpha: &[f64],
    theta: &[Complex64],
) -> Result<(Vec<f64>, Vec<Complex64>), QuantumError> {
    if unitaries.len() != alpha.len() || alpha.len() != theta.len() {
        return Err(QuantumError::DimensionMismatch);
    }
    let mut a2 = Vec::with_capacity(alpha.len());
    let mut t2 = Vec::with_capacity(alpha.len());
    for ((u, &a), &t) in unitaries.iter().zip(alpha).zip(theta) {
        if u.shape() != (2, 2) || !linalg::is_unitary(u, TOL) {
            return Err(QuantumError::NotUnitary);
        }
        let r = u * rho_single(a, t) * u.adjoint();
        a2.push(r[(0, 0)].re);
        t2.push(r[(0, 1)]);
    }
    Ok((a2, t2))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    Disk { radius_sq: f64 },
    Annulus { inner_sq: f64, outer_sq: f64 },
}

/// The stated region `α(1-α) - 1/4 ≤ |θ|² ≤ α(1-α)`; the inner bound is
/// never positive on `[0, 1]`, so this is always a disk.
pub fn theta_region(alpha: f64) -> Region {
    let outer = alpha * (1.0 - alpha);
    let inner = outer - 0.25;
    if inner > 0.0 {
        Region::Annulus { inner_sq: inner, outer_sq: outer }
    } else {
        Region::Disk { radius_sq: outer }
    }
}

pub fn quantum_strata_descriptor(n: usize) -> RealizationDescriptor {
    RealizationDescriptor {
        kind: RealizationKind::QuantumAnnulus,
        n,
        params: RealizationParams::QuantumAnnulus,
        strata: summing::half_strata(n, |j| summing::unitary_stabilizer(n, j), "[0,1]"),
    }
}

/// Objects with projective weights, the decoherent part of the quantum
/// construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveObject<O> {
    pub objects: Vec<O>,
    pub z: Vec<Complex64>,
}

impl<O> ProjectiveObject<O> {
    pub fn new(objects: Vec<O>, z: Vec<Complex64>) -> Result<Self, QuantumError> {
        if objects.len() != z.len() {
            return Err(QuantumError::DimensionMismatch);
        }
        if z.iter().all(|w| w.norm() == 0.0) {
            return Err(QuantumError::ZeroVector);
        }
        Ok(Self { objects, z })
    }

    /// `|z_i|² / ‖z‖²`.
    pub fn probabilities(&self) -> Vec<f64> {
        let total: f64 = self.z.iter().map(|w| w.norm_sqr()).sum();
        self.z.iter().map(|w| w.norm_sqr() / total).collect()
    }
}

/// Segre product `z_i z'_j` over componentwise sums, index `i·m + j`.
pub fn segre_coproduct<O: Clone>(
    x: &ProjectiveObject<O>,
    y: &ProjectiveObject<O>,
    sum: impl Fn(&O, &O) -> O,
) -> ProjectiveObject<O> {
    let mut objects = Vec::with_capacity(x.z.len() * y.z.len());
    let mut z = Vec::with_capacity(x.z.len() * y.z.len());
    for (oa, za) in x.objects.iter().zip(&x.z) {
        for (ob, zb) in y.objects.iter().zip(&y.z) {
            objects.push(sum(oa, ob));
            z.push(za * zb);
        }
    }
    ProjectiveObject { objects, z }
}

/// Wedge of pointed sets, the default underlying sum.
pub fn wedge_sum(a: &PointedSet, b: &PointedSet) -> PointedSet {
    pointed::wedge(*a, *b).object
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::sample;
    use alloc::vec;

    fn r(a: i64, b: i64) -> ExactComplex {
        ExactComplex::new(rat(a, b), Rational::zero())
    }

    #[test]
    fn density_examples() {
        let d = validate_density(&linalg::diag(&[0.5, 0.5])).unwrap();
        assert!((d.eigenvalues()[0] - 0.5).abs() < 1e-12);
        let pure = validate_density(&linalg::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5])).unwrap();
        assert!(pure.is_pure());
        assert!(matches!(
            validate_density(&linalg::from_real(2, 2, &[0.75, 0.5, 0.5, 0.25])),
            Err(QuantumError::NotPsd(_))
        ));
        assert!(matches!(validate_density(&linalg::diag(&[0.5, 0.6])), Err(QuantumError::TraceNotOne(_))));
        let skew = linalg::from_real(2, 2, &[0.5, 0.1, 0.0, 0.5]);
        assert!(matches!(validate_density(&skew), Err(QuantumError::NotHermitian(_))));
    }

    #[test]
    fn identity_and_dephasing_channels() {
        let id = QuantumChannel::identity(3);
        let max_ent = CMatrix::from_fn(9, 9, |r, col| if r % 4 == 0 && col % 4 == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert!(linalg::max_abs(&(id.map().choi() - max_ent)) < 1e-12);
        let deph = QuantumChannel::from_kraus(vec![linalg::diag(&[1.0, 0.0]), linalg::diag(&[0.0, 1.0])]).unwrap();
        let eig = linalg::eigenvalues(deph.map().choi());
        let expected = [0.0, 0.0, 1.0, 1.0];
        assert!(eig.iter().zip(expected).all(|(a, b)| (a - b).abs() < 1e-12));
        let out = deph.apply(&linalg::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5])).unwrap();
        assert!(linalg::max_abs(&(out - linalg::diag(&[0.5, 0.5]))) < 1e-12);
        assert_eq!(deph.kraus_complete(), Some(true));
    }

    #[test]
    fn transpose_is_not_cp() {
        let t = transpose_map(2);
        assert!(t.tp_defect() < 1e-12);
        assert!(matches!(QuantumChannel::new(t), Err(QuantumError::NotCp(v)) if v < -0.5));
    }

    #[test]
    fn random_roundtrips() {
        let mut rng = sample::rng(3);
        for _ in 0..50 {
            let (din, dout) = (rng.random_range(1..=4), rng.random_range(1..=4));
            let k = rng.random_range(1..=3);
            let (ch, err) = channel_roundtrip(random_kraus(&mut rng, din, dout, k)).unwrap();
            assert!(err < 1e-9, "{err}");
            assert!(ch.map().min_choi_eigenvalue() > -1e-9);
        }
    }

    #[test]
    fn perturbing_choi_flips_cp() {
        let mut rng = sample::rng(8);
        let ch = QuantumChannel::from_kraus(random_kraus(&mut rng, 2, 2, 1)).unwrap();
        let (values, vectors) = linalg::hermitian_eigen(ch.map().choi());
        assert!(values[0].abs() < 1e-9);
        let v = vectors.column(0).into_owned();
        let bumped = ch.map().choi() - (&v * v.adjoint()).scale(1e-6);
        let map = LinearMap::from_choi(2, 2, bumped).unwrap();
        assert!(matches!(QuantumChannel::new(map), Err(QuantumError::NotCp(_)) | Err(QuantumError::NotTp(_))));
    }

    fn pointed_state(rho: CMatrix) -> QcObject<PointedSet> {
        let d = rho.nrows();
        let two = PointedSet::two_point();
        QcObject::new(vec![vec![(two, two); d]; d], validate_density(&rho).unwrap()).unwrap()
    }

    #[test]
    fn coproduct_states() {
        let plus = linalg::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        let x = pointed_state(plus.clone());
        let s = qc_coproduct(&x, &x, wedge_sum);
        assert!(s.object.rho.matrix().iter().all(|z| (z - c(0.25, 0.0)).norm() < 1e-12));
        assert!((linalg::trace(s.object.rho.matrix()).re - 1.0).abs() < 1e-12);
        assert_eq!(s.object.pairs[0][3].0.size(), 3);
        let zero = QcObject::zero(PointedSet::point());
        let z = qc_coproduct(&x, &zero, wedge_sum);
        assert_eq!(z.object.pairs, x.pairs);
        assert!(linalg::max_abs(&(z.object.rho.matrix() - &plus)) < 1e-12);
        let img = s.left.apply(&plus).unwrap();
        assert!(linalg::max_abs(&(img - s.object.rho.matrix())) < 1e-12);
        assert!(QuantumChannel::new(s.left.clone()).is_ok());
    }

    #[test]
    fn copair_triangles_both_branches() {
        let mut rng = sample::rng(21);
        for _ in 0..30 {
            let (n, m, k) = (rng.random_range(1..=3), rng.random_range(1..=3), rng.random_range(1..=3));
            let rho = random_density(&mut rng, n);
            let phi1 = QuantumChannel::from_kraus(random_kraus(&mut rng, n, k, 2)).unwrap();
            let target = phi1.apply(&rho).unwrap();
            let rho2 = random_density(&mut rng, m);
            // A replacement channel sending everything to `target`.
            let phi2 = LinearMap::from_transfer(m, k, |a, b, u, s| if a == b { target[(u, s)] } else { c(0.0, 0.0) });
            let x = QcObject::new(vec![vec![(PointedSet::point(), PointedSet::point()); n]; n], validate_density(&rho).unwrap()).unwrap();
            let y = QcObject::new(vec![vec![(PointedSet::point(), PointedSet::point()); m]; m], validate_density(&rho2).unwrap()).unwrap();
            let s = qc_coproduct(&x, &y, wedge_sum);
            let cp = qc_copair(phi1.map(), &phi2, &target).unwrap();
            assert!(s.left.then(&cp).unwrap().distance(phi1.map()) < 1e-9);
            assert!(s.right.then(&cp).unwrap().distance(&phi2) < 1e-9);
        }
    }

    #[test]
    fn copair_zero_entry_branch() {
        // Dephasing onto a diagonal target: off-diagonal target entries vanish.
        let rho = linalg::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5]);
        let deph = QuantumChannel::from_kraus(vec![linalg::diag(&[1.0, 0.0]), linalg::diag(&[0.0, 1.0])]).unwrap();
        let target = deph.apply(&rho).unwrap();
        assert!(target[(0, 1)].norm() < ZERO_ENTRY);
        let cp = qc_copair(deph.map(), deph.map(), &target).unwrap();
        // Φ₂ applied to ρ' vanishes at the zero entry, as the additive branch needs.
        let img = deph.apply(&rho).unwrap();
        assert!(img[(0, 1)].norm() < 1e-12);
        let expected = deph.map().transfer(0, 1, 0, 1) * c(1.0, 0.0) + deph.map().transfer(1, 1, 0, 1);
        assert!((cp.transfer(0, 2, 0, 1) - expected).norm() < 1e-12);
        let x = pointed_state(rho);
        let s = qc_coproduct(&x, &x, wedge_sum);
        assert!(s.left.then(&cp).unwrap().distance(deph.map()) < 1e-9);
    }

    #[test]
    fn summing_functor_examples() {
        let diag_only = QuantumSummingFunctor::new(vec![rat(1, 3), rat(1, 4)], vec![r(0, 1), r(0, 1)]).unwrap();
        let classical = diag_only.classical();
        assert_eq!(diag_only.diagonal(0b11).unwrap(), classical.evaluate(0b11).unwrap().weights());
        let theta = QuantumSummingFunctor::new(vec![rat(1, 2), rat(1, 2)], vec![r(1, 2), r(1, 2)]).unwrap();
        let one = theta.evaluate(0b1).unwrap();
        assert!(one.rho.is_pure());
        let two = theta.evaluate(0b11).unwrap();
        let e = two.rho.eigenvalues();
        assert!(e[..3].iter().all(|x| x.abs() < 1e-9) && (e[3] - 1.0).abs() < 1e-9);
        assert_eq!(
            QuantumSummingFunctor::new(vec![rat(1, 2)], vec![r(3, 5)]),
            Err(QuantumError::AnnulusViolated { coordinate: 0 })
        );
        let zero = theta.evaluate(0).unwrap();
        assert_eq!(zero.rho.dim(), 1);
        assert_eq!(two.pairs[1][2], (PointedSet::new(3, 0).unwrap(), PointedSet::new(3, 1).unwrap()));
    }

    #[test]
    fn local_unitaries() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let h = linalg::from_real(2, 2, &[s, s, s, -s]);
        let (a, t) = local_unitary_act(&[h], &[0.75], &[c(0.0, 0.0)]).unwrap();
        assert!((a[0] - 0.5).abs() < 1e-12 && (t[0] - c(0.25, 0.0)).norm() < 1e-12);
        let phi = 0.7;
        let u = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(libm::cos(phi), libm::sin(phi))]);
        let theta = c(0.1, 0.2);
        let (a, t) = local_unitary_act(&[u], &[0.3], &[theta]).unwrap();
        assert!((a[0] - 0.3).abs() < 1e-12);
        assert!((t[0] - c(libm::cos(phi), -libm::sin(phi)) * theta).norm() < 1e-12);
        let not_u = linalg::diag(&[1.0, 2.0]);
        assert_eq!(local_unitary_act(&[not_u], &[0.3], &[theta]), Err(QuantumError::NotUnitary));
        let (a, t) = local_unitary_act(&[CMatrix::identity(2, 2)], &[0.3], &[theta]).unwrap();
        assert_eq!((a[0], t[0]), (0.3, theta));
    }

    #[test]
    fn spectrum_invariance() {
        let mut rng = sample::rng(4);
        for _ in 0..50 {
            let alpha: f64 = rng.random_range(0.0..1.0);
            let rmax = libm::sqrt(alpha * (1.0 - alpha));
            let theta = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * (rmax * 0.7);
            let u = random_unitary(&mut rng, 2);
            let (a2, t2) = local_unitary_act(&[u], &[alpha], &[theta]).unwrap();
            let before = linalg::eigenvalues(&rho_single(alpha, theta));
            let after = linalg::eigenvalues(&rho_single(a2[0], t2[0]));
            assert!(before.iter().zip(&after).all(|(x, y)| (x - y).abs() < 1e-9));
            assert!(t2[0].norm_sqr() <= a2[0] * (1.0 - a2[0]) + 1e-12);
        }
    }

    #[test]
    fn psd_boundary_bisection() {
        for alpha in [0.1, 0.3, 0.5, 0.77] {
            let flip = psd_flip_radius_sq(alpha, 0.4, 80);
            assert!((flip - alpha * (1.0 - alpha)).abs() < 1e-9, "{alpha}: {flip}");
        }
    }

    #[test]
    fn strata() {
        let d = quantum_strata_descriptor(1);
        assert_eq!(d.strata[0].stabilizer, "(U(1)×U(1))");
        assert_eq!(d.strata[1].stabilizer, "U(2)");
        let d2 = quantum_strata_descriptor(2);
        assert_eq!(d2.strata[1].stabilizer, "U(2) ⊗ (U(1)×U(1))");
        assert_eq!(d2.stratum_of(&[0.5, 1.0 / 3.0]), Some(1));
        assert_eq!(theta_region(0.5), Region::Disk { radius_sq: 0.25 });
        assert!(matches!(theta_region(0.2), Region::Disk { .. }));
    }

    #[test]
    fn segre() {
        let two = PointedSet::two_point();
        let x = ProjectiveObject::new(vec![two, two], vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let y = ProjectiveObject::new(vec![two, two], vec![c(0.3, 0.0), c(0.0, 2.0)]).unwrap();
        let s = segre_coproduct(&x, &y, wedge_sum);
        assert_eq!(&s.z[..2], &y.z[..]);
        assert!(s.z[2..].iter().all(|w| w.norm() == 0.0));
        let ones = ProjectiveObject::new(vec![two, two], vec![c(1.0, 0.0); 2]).unwrap();
        let u = segre_coproduct(&ones, &ones, wedge_sum);
        assert!(u.probabilities().iter().all(|p| (p - 0.25).abs() < 1e-12));
        let a = ProjectiveObject::new(vec![two, two], vec![c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let b = ProjectiveObject::new(vec![two, two], vec![c(1.0, 0.0), c(3.0, 0.0)]).unwrap();
        let ab = segre_coproduct(&a, &b, wedge_sum);
        let expected = [1.0, 9.0, 4.0, 36.0].map(|v| v / 50.0);
        assert!(ab.probabilities().iter().zip(expected).all(|(p, e)| (p - e).abs() < 1e-12));
        let (pa, pb) = (a.probabilities(), b.probabilities());
        for (k, p) in ab.probabilities().iter().enumerate() {
            assert!((p - pa[k / 2] * pb[k % 2]).abs() < 1e-12);
        }
        assert_eq!(ProjectiveObject::new(vec![two], vec![c(0.0, 0.0)]).unwrap_err(), QuantumError::ZeroVector);
        assert_eq!(s.objects[0].size(), 3);
    }
}
