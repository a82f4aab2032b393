//! Probabilistic pointed sets: formal convex combinations of pointed sets,
//! with morphisms given by a stochastic matrix on the weights together with
//! weighted families of pointed maps.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::finprob::{self, FinProbError, FiniteProbability, StochasticMorphism, Transport};
use crate::pointed::{self, PointedMap, PointedSet};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbCatError {
    #[error("term weights must be non-negative and sum to 1")]
    InvalidWeights,
    #[error("a probabilistic pointed set needs at least one term")]
    NoTerms,
    #[error("family ({j},{i}) has weights summing to {found}, matrix entry is {expected}")]
    WeightSumMismatch { j: usize, i: usize, found: alloc::string::String, expected: alloc::string::String },
    #[error("family ({j},{i}) contains a negative weight")]
    NegativeWeight { j: usize, i: usize },
    #[error("family ({j},{i}) contains a map with the wrong source or target")]
    MapMismatch { j: usize, i: usize },
    #[error("family ({k},{a}) is empty although its matrix entry is positive")]
    EmptyFamily { k: usize, a: usize },
    #[error("family index ({j},{i}) is out of range")]
    IndexOutOfRange { j: usize, i: usize },
    #[error("source and target of the composed morphisms do not match")]
    Mismatch,
    #[error("morphisms do not share a target")]
    TargetMismatch,
    #[error(transparent)]
    Stochastic(#[from] FinProbError),
}

/// Maps with their probabilities. Keyed by map so that repeated maps merge;
/// zero weights are never stored.
pub type Family = BTreeMap<PointedMap, Rational>;

/// Families indexed by `(target term, source term)`. Empty families are not stored.
pub type Families = BTreeMap<(usize, usize), Family>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProbPointedSet {
    terms: Vec<(Rational, PointedSet)>,
}

impl ProbPointedSet {
    pub fn new(terms: Vec<(Rational, PointedSet)>) -> Result<Self, ProbCatError> {
        if terms.is_empty() {
            return Err(ProbCatError::NoTerms);
        }
        if terms.iter().any(|(w, _)| w.is_negative()) || !rational::sum(terms.iter().map(|(w, _)| w)).is_one() {
            return Err(ProbCatError::InvalidWeights);
        }
        Ok(Self { terms })
    }

    /// The zero object: one point with weight one.
    pub fn zero() -> Self {
        Self { terms: alloc::vec![(Rational::one(), PointedSet::point())] }
    }

    pub fn single(x: PointedSet) -> Self {
        Self { terms: alloc::vec![(Rational::one(), x)] }
    }

    pub fn terms(&self) -> &[(Rational, PointedSet)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn weights(&self) -> Vec<Rational> {
        self.terms.iter().map(|(w, _)| w.clone()).collect()
    }

    pub fn set(&self, i: usize) -> PointedSet {
        self.terms[i].1
    }

    pub fn is_zero_object(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.size() == 1
    }
}

/// The underlying finite probability of a probabilistic pointed set.
pub fn forget(x: &ProbPointedSet) -> FiniteProbability {
    FiniteProbability::from_probs(x.weights()).expect("weights validated on construction")
}

/// A finite probability as a combination of one-point sets.
pub fn embed_fp(p: &FiniteProbability) -> ProbPointedSet {
    ProbPointedSet { terms: p.probs().iter().map(|w| (w.clone(), PointedSet::point())).collect() }
}

pub(crate) fn add_weight<K: Ord>(family: &mut BTreeMap<K, Rational>, key: K, w: Rational) {
    if w.is_zero() {
        return;
    }
    let entry = family.entry(key).or_insert_with(Rational::zero);
    *entry += w;
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProbMorphism {
    source: ProbPointedSet,
    target: ProbPointedSet,
    stoch: StochasticMorphism,
    families: Families,
}

fn check_families(
    source: &ProbPointedSet,
    target: &ProbPointedSet,
    matrix: &[Vec<Rational>],
    families: &Families,
) -> Result<(), ProbCatError> {
    for (&(j, i), family) in families {
        if j >= target.len() || i >= source.len() {
            return Err(ProbCatError::IndexOutOfRange { j, i });
        }
        for (map, w) in family {
            if w.is_negative() {
                return Err(ProbCatError::NegativeWeight { j, i });
            }
            if map.source() != source.set(i) || map.target() != target.set(j) {
                return Err(ProbCatError::MapMismatch { j, i });
            }
        }
    }
    for (j, row) in matrix.iter().enumerate() {
        for (i, entry) in row.iter().enumerate() {
            let found = families.get(&(j, i)).map_or_else(Rational::zero, |f| rational::sum(f.values()));
            if !entry.is_zero() && found.is_zero() {
                return Err(ProbCatError::EmptyFamily { k: j, a: i });
            }
            if &found != entry {
                return Err(ProbCatError::WeightSumMismatch {
                    j,
                    i,
                    found: rational::format_rational(&found),
                    expected: rational::format_rational(entry),
                });
            }
        }
    }
    Ok(())
}

fn canonical(families: Families) -> Families {
    families
        .into_iter()
        .map(|(k, f)| (k, f.into_iter().filter(|(_, w)| !w.is_zero()).collect::<Family>()))
        .filter(|(_, f)| !f.is_empty())
        .collect()
}

impl ProbMorphism {
    /// Validates the stochastic matrix against the term weights and every
    /// family against its matrix entry.
    pub fn new(
        source: ProbPointedSet,
        target: ProbPointedSet,
        matrix: Vec<Vec<Rational>>,
        families: Families,
    ) -> Result<Self, ProbCatError> {
        let stoch = finprob::validate(matrix, forget(&source), forget(&target))?;
        let families = canonical(families);
        check_families(&source, &target, stoch.matrix(), &families)?;
        Ok(Self { source, target, stoch, families })
    }

    pub fn identity(x: &ProbPointedSet) -> Self {
        let families = (0..x.len())
            .map(|i| {
                let mut f = Family::new();
                f.insert(PointedMap::identity(x.set(i)), Rational::one());
                ((i, i), f)
            })
            .collect();
        Self { source: x.clone(), target: x.clone(), stoch: StochasticMorphism::identity(&forget(x)), families }
    }

    /// A deterministic morphism between single-term objects.
    pub fn deterministic(f: PointedMap) -> Self {
        let source = ProbPointedSet::single(f.source());
        let target = ProbPointedSet::single(f.target());
        let mut fam = Family::new();
        fam.insert(f, Rational::one());
        let mut families = Families::new();
        families.insert((0, 0), fam);
        Self::new(source, target, alloc::vec![alloc::vec![Rational::one()]], families)
            .expect("single map with probability one")
    }

    /// The unique morphism to the zero object.
    pub fn to_zero(x: &ProbPointedSet) -> Self {
        let zero = ProbPointedSet::zero();
        let families = (0..x.len())
            .map(|i| {
                let mut f = Family::new();
                f.insert(PointedMap::constant(x.set(i), PointedSet::point()), Rational::one());
                ((0, i), f)
            })
            .collect();
        let stoch = finprob::to_point(&forget(x));
        Self { source: x.clone(), target: zero, stoch, families }
    }

    /// The unique morphism from the zero object.
    pub fn from_zero(x: &ProbPointedSet) -> Self {
        let zero = ProbPointedSet::zero();
        let families = canonical(
            x.terms()
                .iter()
                .enumerate()
                .map(|(j, (w, set))| {
                    let mut f = Family::new();
                    f.insert(PointedMap::constant(PointedSet::point(), *set), w.clone());
                    ((j, 0), f)
                })
                .collect(),
        );
        let stoch = finprob::from_point(&forget(x));
        Self { source: zero, target: x.clone(), stoch, families }
    }

    pub fn source(&self) -> &ProbPointedSet {
        &self.source
    }

    pub fn target(&self) -> &ProbPointedSet {
        &self.target
    }

    pub fn stoch(&self) -> &StochasticMorphism {
        &self.stoch
    }

    pub fn families(&self) -> &Families {
        &self.families
    }

    pub fn family(&self, j: usize, i: usize) -> Option<&Family> {
        self.families.get(&(j, i))
    }

    /// Permutation matrix with bijective maps throughout.
    pub fn is_isomorphism(&self) -> bool {
        self.stoch.is_isomorphism() && self.families.values().flat_map(|f| f.keys()).all(PointedMap::is_bijective)
    }
}

/// The image of a morphism under the forgetful functor.
pub fn forget_morphism(phi: &ProbMorphism) -> StochasticMorphism {
    phi.stoch.clone()
}

/// `second ∘ first`: stochastic matrices multiply and families compose
/// pairwise with multiplied weights.
pub fn compose_prob(second: &ProbMorphism, first: &ProbMorphism) -> Result<ProbMorphism, ProbCatError> {
    if first.target != second.source {
        return Err(ProbCatError::Mismatch);
    }
    let stoch = finprob::compose(&second.stoch, &first.stoch)?;
    let mut families = Families::new();
    for (&(k, j), outer) in &second.families {
        for (&(j2, i), inner) in first.families.range((j, 0)..(j + 1, 0)) {
            debug_assert_eq!(j, j2);
            let slot = families.entry((k, i)).or_default();
            for (g, wg) in outer {
                for (f, wf) in inner {
                    add_weight(slot, g.after(f).expect("families typed by terms"), wg * wf);
                }
            }
        }
    }
    let families = canonical(families);
    check_families(&first.source, &second.target, stoch.matrix(), &families)?;
    Ok(ProbMorphism { source: first.source.clone(), target: second.target.clone(), stoch, families })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbCoproduct {
    pub object: ProbPointedSet,
    pub left: ProbMorphism,
    pub right: ProbMorphism,
}

/// `ΛX ⨿ Λ'X'`: terms `(i, j)` in row-major order with weight `λ_i λ'_j`
/// and set `X_i ∨ X'_j`, plus the two coprojections.
pub fn coproduct_ps(x: &ProbPointedSet, y: &ProbPointedSet) -> ProbCoproduct {
    let (n, m) = (x.len(), y.len());
    let mut terms = Vec::with_capacity(n * m);
    let mut wedges = Vec::with_capacity(n * m);
    for (wx, sx) in x.terms() {
        for (wy, sy) in y.terms() {
            let w = pointed::wedge(*sx, *sy);
            terms.push((wx * wy, w.object));
            wedges.push(w);
        }
    }
    let object = ProbPointedSet { terms };
    let (inj_l, inj_r) = finprob::injections(&forget(x), &forget(y));
    let mut fam_l = Families::new();
    let mut fam_r = Families::new();
    for b in 0..n {
        for bp in 0..m {
            let row = finprob::pair_index(b, bp, m);
            let w = &wedges[row];
            let mut f = Family::new();
            add_weight(&mut f, w.left.clone(), y.terms[bp].0.clone());
            fam_l.insert((row, b), f);
            let mut g = Family::new();
            add_weight(&mut g, w.right.clone(), x.terms[b].0.clone());
            fam_r.insert((row, bp), g);
        }
    }
    let left = ProbMorphism {
        source: x.clone(),
        target: object.clone(),
        stoch: retarget(inj_l),
        families: canonical(fam_l),
    };
    let right = ProbMorphism {
        source: y.clone(),
        target: object.clone(),
        stoch: retarget(inj_r),
        families: canonical(fam_r),
    };
    ProbCoproduct { object, left, right }
}

// Coprojection matrices carry "a|b" labels; the probabilistic side uses
// positional labels throughout.
fn retarget(s: StochasticMorphism) -> StochasticMorphism {
    let source = FiniteProbability::from_probs(s.source().probs().to_vec()).expect("valid");
    let target = FiniteProbability::from_probs(s.target().probs().to_vec()).expect("valid");
    finprob::validate(s.matrix().clone(), source, target).expect("coprojection is stochastic")
}

/// The copairing `Φ ⨿ Φ'` out of `ΛX ⨿ Λ'X'`. Its matrix need not be
/// column-stochastic, so it is kept apart from [`ProbMorphism`]; composing
/// with a coprojection yields a validated morphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbCopair {
    source: ProbPointedSet,
    target: ProbPointedSet,
    transport: Transport,
    families: Families,
}

impl ProbCopair {
    pub fn source(&self) -> &ProbPointedSet {
        &self.source
    }

    pub fn target(&self) -> &ProbPointedSet {
        &self.target
    }

    pub fn transport(&self) -> &Transport {
        &self.transport
    }

    pub fn families(&self) -> &Families {
        &self.families
    }

    /// `self ∘ first`, validated.
    pub fn compose_after(&self, first: &ProbMorphism) -> Result<ProbMorphism, ProbCatError> {
        if first.target != self.source {
            return Err(ProbCatError::Mismatch);
        }
        let stoch = retarget(self.transport.compose_after(&first.stoch)?);
        let mut families = Families::new();
        for (&(k, j), outer) in &self.families {
            for (&(_, i), inner) in first.families.range((j, 0)..(j + 1, 0)) {
                let slot = families.entry((k, i)).or_default();
                for (g, wg) in outer {
                    for (f, wf) in inner {
                        add_weight(slot, g.after(f).expect("families typed by terms"), wg * wf);
                    }
                }
            }
        }
        let families = canonical(families);
        check_families(&first.source, &self.target, stoch.matrix(), &families)?;
        Ok(ProbMorphism { source: first.source.clone(), target: self.target.clone(), stoch, families })
    }

    /// True when the copairing happens to be an honest morphism.
    pub fn into_morphism(self) -> Result<ProbMorphism, ProbCatError> {
        ProbMorphism::new(self.source, self.target, self.transport.matrix().clone(), self.families)
    }
}

/// Family at `(k, a)`, or the constant map with weight zero when empty, so
/// that the `σ = 0` branch still pairs every map of the other side.
fn family_or_placeholder(phi: &ProbMorphism, k: usize, a: usize) -> Vec<(PointedMap, Rational)> {
    match phi.families.get(&(k, a)) {
        Some(f) => f.iter().map(|(m, w)| (m.clone(), w.clone())).collect(),
        None => alloc::vec![(PointedMap::constant(phi.source.set(a), phi.target.set(k)), Rational::zero())],
    }
}

/// Copairing of two morphisms into a common target. Families are the wedge
/// maps `f ∨ f'` weighted `σ⁻¹ μ ν` when `σ_k ≠ 0` and `μ/M + ν/N` when
/// `σ_k = 0`, with `N`, `M` the sizes of the two families at that slot.
pub fn copair_ps(phi: &ProbMorphism, phi_prime: &ProbMorphism) -> Result<ProbCopair, ProbCatError> {
    if phi.target != phi_prime.target {
        return Err(ProbCatError::TargetMismatch);
    }
    let diagram = finprob::coproduct_morphisms(&phi.stoch, &phi_prime.stoch)?;
    let coproduct = coproduct_ps(&phi.source, &phi_prime.source);
    let (n, m) = (phi.source.len(), phi_prime.source.len());
    let sigma = phi.target.weights();
    let mut families = Families::new();
    for (k, sigma_k) in sigma.iter().enumerate() {
        for a in 0..n {
            let fam = family_or_placeholder(phi, k, a);
            for ap in 0..m {
                let fam_p = family_or_placeholder(phi_prime, k, ap);
                let size_n = Rational::from_integer((fam.len() as i64).into());
                let size_m = Rational::from_integer((fam_p.len() as i64).into());
                let slot = families.entry((k, finprob::pair_index(a, ap, m))).or_default();
                for (f, mu) in &fam {
                    for (g, nu) in &fam_p {
                        let w = if sigma_k.is_zero() { mu / &size_m + nu / &size_n } else { mu * nu / sigma_k };
                        add_weight(slot, pointed::copair(f, g).expect("shared target"), w);
                    }
                }
            }
        }
    }
    let families = canonical(families);
    // Positional labels, matching the object side.
    let transport =
        finprob::transport_unchecked(diagram.copair.matrix().clone(), forget(&coproduct.object), forget(&phi.target));
    for (&(k, c), family) in &families {
        let expected = &transport.matrix()[k][c];
        let found = rational::sum(family.values());
        if &found != expected {
            return Err(ProbCatError::WeightSumMismatch {
                j: k,
                i: c,
                found: rational::format_rational(&found),
                expected: rational::format_rational(expected),
            });
        }
    }
    Ok(ProbCopair { source: coproduct.object, target: phi.target.clone(), transport, families })
}

/// Termwise smash with weights `λ_i λ'_j`, row-major.
pub fn smash_ps(x: &ProbPointedSet, y: &ProbPointedSet) -> ProbPointedSet {
    let terms = x
        .terms()
        .iter()
        .flat_map(|(wx, sx)| y.terms().iter().map(move |(wy, sy)| (wx * wy, pointed::smash(*sx, *sy))))
        .collect();
    ProbPointedSet { terms }
}
