//! Entropy, relative entropy and information-loss functionals, with a seeded
//! checker for the axioms an information-loss functional must satisfy.
//!
//! Logarithms are natural; `0 ln 0 = 0`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::Rng;
use thiserror::Error;

use crate::cubical::TruncatedCubicalSet;
use crate::finprob::{self, FiniteProbability, StochasticMorphism};
use crate::pointed::PointedSet;
use crate::probcat::{ProbMorphism, ProbPointedSet};
use crate::rational::{self, Rational};
use crate::sample;
use crate::wreath::PcObject;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InfoLossError {
    #[error("probabilities live on different label sets")]
    LabelMismatch,
    #[error("invariant undefined at N = {n}")]
    UndefinedInvariant { n: i64 },
    #[error("reduced Euler characteristic {value} is not positive, its logarithm is undefined")]
    NonpositiveEuler { value: i64 },
    #[error("this functional is not defined on finite probabilities")]
    NotApplicable,
}

fn xlnx(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * libm::log(p)
    }
}

pub fn shannon(p: &FiniteProbability) -> f64 {
    let s: f64 = p.probs().iter().map(|x| -xlnx(rational::to_f64(x))).sum();
    // Rounding can leave a tiny negative value on points.
    s.max(0.0)
}

/// Binary entropy `H(λ, 1-λ)`.
pub fn binary_entropy(lambda: &Rational) -> f64 {
    let l = rational::to_f64(lambda);
    -xlnx(l) - xlnx(1.0 - l)
}

/// `-Σ P_i ln(Q_i / P_i)`, infinite when `P` charges a point `Q` does not.
pub fn kl(p: &FiniteProbability, q: &FiniteProbability) -> Result<f64, InfoLossError> {
    if p.labels() != q.labels() {
        return Err(InfoLossError::LabelMismatch);
    }
    let mut total = 0.0;
    for (a, b) in p.probs().iter().zip(q.probs()) {
        if num_traits::Zero::is_zero(a) {
            continue;
        }
        if num_traits::Zero::is_zero(b) {
            return Ok(f64::INFINITY);
        }
        // The ratio is exact, so equal vectors give exactly zero.
        total += rational::to_f64(a) * libm::log(rational::to_f64(&(a / b)));
    }
    Ok(total.max(0.0))
}

pub fn loss_fp(s: &StochasticMorphism, c: f64) -> f64 {
    c * (shannon(s.target()) - shannon(s.source()))
}

/// Object invariants `ρ(N)` of a pointed set with `N = #X - 1` non-base
/// points. Multiplicative families are semigroup maps given on primes.
#[derive(Debug, Clone, PartialEq)]
pub enum InvariantFamily {
    Linear { kappa: f64 },
    ReducedEuler,
    Multiplicative { primes: BTreeMap<u64, f64> },
    LogSemigroup { kappa: f64, primes: BTreeMap<u64, f64> },
    Exponential { lambda: f64 },
}

fn semigroup(primes: &BTreeMap<u64, f64>, n: i64) -> Result<f64, InfoLossError> {
    if n <= 0 {
        return Err(InfoLossError::UndefinedInvariant { n });
    }
    let mut rest = n as u64;
    let mut value = 1.0;
    let mut p = 2;
    while rest > 1 {
        if p * p > rest {
            p = rest;
        }
        while rest.is_multiple_of(p) {
            value *= primes.get(&p).copied().ok_or(InfoLossError::UndefinedInvariant { n })?;
            rest /= p;
        }
        p += 1;
    }
    Ok(value)
}

impl InvariantFamily {
    pub fn rho(&self, n: i64) -> Result<f64, InfoLossError> {
        match self {
            InvariantFamily::Linear { kappa } => Ok(kappa * n as f64),
            InvariantFamily::ReducedEuler => Ok(n as f64),
            InvariantFamily::Multiplicative { primes } => semigroup(primes, n),
            InvariantFamily::LogSemigroup { kappa, primes } => Ok(kappa * libm::log(semigroup(primes, n)?)),
            InvariantFamily::Exponential { lambda } => Ok(libm::pow(*lambda, n as f64)),
        }
    }

    /// Whether the parameters lie in their admissible ranges.
    pub fn is_admissible(&self) -> bool {
        match self {
            InvariantFamily::Linear { kappa } => kappa.is_finite(),
            InvariantFamily::ReducedEuler => true,
            InvariantFamily::Multiplicative { primes } => primes.values().all(|v| *v > 0.0 && v.is_finite()),
            InvariantFamily::LogSemigroup { kappa, primes } => {
                kappa.is_finite() && primes.values().all(|v| *v > 0.0 && v.is_finite())
            }
            InvariantFamily::Exponential { lambda } => *lambda > 0.0 && lambda.is_finite(),
        }
    }

    pub fn eval_pointed(&self, x: PointedSet) -> Result<f64, InfoLossError> {
        self.rho(x.reduced_size() as i64)
    }

    /// Evaluates at `N = χ̃(K)` of the truncation.
    pub fn eval_cubical(&self, k: &TruncatedCubicalSet) -> Result<f64, InfoLossError> {
        self.rho(k.reduced_euler())
    }
}

/// `H̃(ΛX) = κ H(Λ) + Σ λ_i ρ(X_i)` for a formal convex combination.
pub fn extended_entropy<O>(
    weights: &[Rational],
    objects: &[O],
    rho: impl Fn(&O) -> Result<f64, InfoLossError>,
    kappa: f64,
) -> Result<f64, InfoLossError> {
    let lambda = FiniteProbability::from_probs(weights.to_vec()).map_err(|_| InfoLossError::LabelMismatch)?;
    let mut total = kappa * shannon(&lambda);
    for (w, x) in weights.iter().zip(objects) {
        if !num_traits::Zero::is_zero(w) {
            total += rational::to_f64(w) * rho(x)?;
        }
    }
    Ok(total)
}

pub fn extended_entropy_ps(x: &ProbPointedSet, base: &InvariantFamily, kappa: f64) -> Result<f64, InfoLossError> {
    let sets: Vec<PointedSet> = x.terms().iter().map(|(_, s)| *s).collect();
    extended_entropy(&x.weights(), &sets, |s| base.eval_pointed(*s), kappa)
}

pub fn extended_entropy_pc<O: Clone>(
    x: &PcObject<O>,
    rho: impl Fn(&O) -> Result<f64, InfoLossError>,
    kappa: f64,
) -> Result<f64, InfoLossError> {
    let objects: Vec<O> = x.terms.iter().map(|(_, o)| o.clone()).collect();
    extended_entropy(&x.weights(), &objects, rho, kappa)
}

pub fn loss_pc(phi: &ProbMorphism, base: &InvariantFamily, kappa: f64) -> Result<f64, InfoLossError> {
    Ok(extended_entropy_ps(phi.target(), base, kappa)? - extended_entropy_ps(phi.source(), base, kappa)?)
}

/// `ln χ̃(K') - ln χ̃(K)`.
pub fn loss_logchi(k: &TruncatedCubicalSet, k_prime: &TruncatedCubicalSet) -> Result<f64, InfoLossError> {
    Ok(log_euler(k_prime)? - log_euler(k)?)
}

pub fn log_euler(k: &TruncatedCubicalSet) -> Result<f64, InfoLossError> {
    let value = k.reduced_euler();
    if value <= 0 {
        return Err(InfoLossError::NonpositiveEuler { value });
    }
    Ok(libm::log(value as f64))
}

#[derive(Debug, Clone, Copy)]
pub enum LossKind {
    ShannonDifference,
    /// Restricted to finite probabilities, the extensive functional is `κ H`.
    PcExtensive,
    LogEuler,
    /// Difference of an arbitrary object potential, such as `H²`.
    CustomInvariant(fn(&FiniteProbability) -> f64),
}

#[derive(Debug, Clone)]
pub struct LossFunctional {
    pub kind: LossKind,
    pub scale: f64,
    pub base_invariant: Option<InvariantFamily>,
}

impl LossFunctional {
    pub fn shannon(scale: f64) -> Self {
        Self { kind: LossKind::ShannonDifference, scale, base_invariant: None }
    }

    pub fn custom(f: fn(&FiniteProbability) -> f64) -> Self {
        Self { kind: LossKind::CustomInvariant(f), scale: 1.0, base_invariant: None }
    }

    /// `H(P)²`, a potential whose difference is not an information loss.
    pub fn squared_entropy() -> Self {
        Self::custom(|p| {
            let h = shannon(p);
            h * h
        })
    }

    pub fn potential(&self, p: &FiniteProbability) -> Result<f64, InfoLossError> {
        match self.kind {
            LossKind::ShannonDifference | LossKind::PcExtensive => Ok(self.scale * shannon(p)),
            LossKind::CustomInvariant(f) => Ok(self.scale * f(p)),
            LossKind::LogEuler => Err(InfoLossError::NotApplicable),
        }
    }

    pub fn between(&self, source: &FiniteProbability, target: &FiniteProbability) -> Result<f64, InfoLossError> {
        Ok(self.potential(target)? - self.potential(source)?)
    }

    pub fn eval(&self, s: &StochasticMorphism) -> Result<f64, InfoLossError> {
        self.between(s.source(), s.target())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub axiom: &'static str,
    pub max_residual: f64,
    pub instances: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub instances: usize,
    pub tolerance: f64,
    pub max_len: usize,
    pub max_den: i64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { seed: 0, instances: 500, tolerance: 1e-12, max_len: 4, max_den: 12 }
    }
}

pub const AXIOMS: [&str; 7] = ["iso", "compose", "combine", "coproduct", "mix-source", "mix-target", "mix-both"];

/// Runs every axiom on `instances` seeded random rational instances and
/// records the worst absolute residual.
pub fn axiom_suite(loss: &LossFunctional, config: &SuiteConfig) -> Result<Vec<AxiomReport>, InfoLossError> {
    let mut out = Vec::with_capacity(AXIOMS.len());
    for (k, axiom) in AXIOMS.iter().enumerate() {
        let mut rng = sample::rng(config.seed.wrapping_mul(0x9e37_79b9).wrapping_add(k as u64));
        let mut worst: f64 = 0.0;
        for _ in 0..config.instances {
            let r = residual(loss, axiom, &mut rng, config)?;
            // NaN must not hide behind max.
            worst = if r.is_nan() || worst.is_nan() { f64::NAN } else { worst.max(r) };
        }
        out.push(AxiomReport {
            axiom,
            max_residual: worst,
            instances: config.instances,
            pass: worst <= config.tolerance,
        });
    }
    Ok(out)
}

fn random_lambda<R: Rng>(rng: &mut R, max_den: i64) -> Rational {
    let d = rng.random_range(1..=max_den);
    rational::rat(rng.random_range(0..=d), d)
}

/// Splits `0..len` into two non-empty disjoint random parts.
fn split<R: Rng>(rng: &mut R, len: usize) -> (Vec<usize>, Vec<usize>) {
    loop {
        let mask: u32 = rng.random_range(1..(1u32 << len) - 1);
        let a: Vec<usize> = (0..len).filter(|i| mask >> i & 1 == 1).collect();
        let b: Vec<usize> = (0..len).filter(|i| mask >> i & 1 == 0).collect();
        if !a.is_empty() && !b.is_empty() {
            return (a, b);
        }
    }
}

fn residual<R: Rng>(loss: &LossFunctional, axiom: &str, rng: &mut R, c: &SuiteConfig) -> Result<f64, InfoLossError> {
    let len = |rng: &mut R| rng.random_range(1..=c.max_len);
    let len2 = |rng: &mut R| rng.random_range(2..=c.max_len.max(2));
    let d = c.max_den;
    let h = |s: &StochasticMorphism| loss.eval(s);
    let bang = |lambda: &Rational| -> Result<f64, InfoLossError> {
        let two = FiniteProbability::from_probs(alloc::vec![lambda.clone(), Rational::from_integer(1.into()) - lambda])
            .expect("binary weights");
        h(&finprob::to_point(&two))
    };
    Ok(match axiom {
        "iso" => {
            let n = len(rng);
            let p = sample::probability(rng, n, d);
            h(&sample::permutation(rng, &p))?.abs()
        }
        "compose" => {
            let n = len(rng);
            let p = sample::probability(rng, n, d);
            let m = len(rng);
            let s = sample::morphism_from(rng, &p, m, d);
            let k = len(rng);
            let t = sample::morphism_from(rng, s.target(), k, d);
            let ts = finprob::compose(&t, &s).expect("composable");
            (h(&ts)? - h(&t)? - h(&s)?).abs()
        }
        "combine" => {
            let lambda = random_lambda(rng, d);
            let n = len(rng);
            let p = sample::probability(rng, n, d);
            let m = len(rng);
            let s = sample::morphism_from(rng, &p, m, d);
            let n2 = len(rng);
            let p2 = sample::probability(rng, n2, d);
            let s2 = sample::coupling(rng, &p2, s.target());
            let sum = finprob::weighted_direct_sum(&lambda, &s, &s2).expect("shared target");
            let l = rational::to_f64(&lambda);
            (h(&sum)? - l * h(&s)? - (1.0 - l) * h(&s2)? - bang(&lambda)?).abs()
        }
        "coproduct" => {
            let n = len(rng);
            let p = sample::probability(rng, n, d);
            let m = len(rng);
            let s = sample::morphism_from(rng, &p, m, d);
            let n2 = len(rng);
            let p2 = sample::probability(rng, n2, d);
            let s2 = sample::coupling(rng, &p2, s.target());
            let diagram = finprob::coproduct_morphisms(&s, &s2).expect("shared target");
            let copair = loss.between(diagram.copair.source(), diagram.copair.target())?;
            let q_hat = h(&finprob::from_point(s.target()))?;
            (copair - h(&s)? - h(&s2)? + q_hat).abs()
        }
        "mix-source" => {
            let lambda = random_lambda(rng, d);
            let n = len2(rng);
            let (a, b) = split(rng, n);
            let p = sample::probability_on(rng, n, &a, d);
            let p2 = sample::probability_on(rng, n, &b, d);
            let m = len(rng);
            let s = sample::morphism_from(rng, &p, m, d);
            let s2 = sample::coupling(rng, &p2, s.target());
            let mix = finprob::convex_mixture(&lambda, &s, &s2).expect("shared sets");
            let l = rational::to_f64(&lambda);
            (h(&mix)? - l * h(&s)? - (1.0 - l) * h(&s2)? - bang(&lambda)?).abs()
        }
        "mix-target" => {
            let lambda = random_lambda(rng, d);
            let n = len(rng);
            let p = sample::probability(rng, n, d);
            let m = len2(rng);
            let (a, b) = split(rng, m);
            let s = sample::morphism_from_on(rng, &p, m, &a, d);
            let s2 = sample::morphism_from_on(rng, &p, m, &b, d);
            let mix = finprob::convex_mixture(&lambda, &s, &s2).expect("shared sets");
            let l = rational::to_f64(&lambda);
            (h(&mix)? - l * h(&s)? - (1.0 - l) * h(&s2)? + bang(&lambda)?).abs()
        }
        "mix-both" => {
            let lambda = random_lambda(rng, d);
            let n = len2(rng);
            let (a, b) = split(rng, n);
            let p = sample::probability_on(rng, n, &a, d);
            let p2 = sample::probability_on(rng, n, &b, d);
            let m = len2(rng);
            let (ya, yb) = split(rng, m);
            let s = sample::morphism_from_on(rng, &p, m, &ya, d);
            let s2 = sample::morphism_from_on(rng, &p2, m, &yb, d);
            let mix = finprob::convex_mixture(&lambda, &s, &s2).expect("shared sets");
            let l = rational::to_f64(&lambda);
            (h(&mix)? - l * h(&s)? - (1.0 - l) * h(&s2)?).abs()
        }
        _ => unreachable!("unknown axiom"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::{smash_cubical, Subcomplex};
    use crate::pointed::PointedMap;
    use crate::probcat::embed_fp;
    use crate::rational::rat;
    use alloc::vec;

    const LN2: f64 = core::f64::consts::LN_2;

    fn fp(ps: &[(i64, i64)]) -> FiniteProbability {
        FiniteProbability::from_probs(ps.iter().map(|&(a, b)| rat(a, b)).collect()).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn entropy_values() {
        assert_eq!(shannon(&fp(&[(1, 1)])), 0.0);
        assert!(close(shannon(&fp(&[(1, 2), (1, 2)])), LN2));
        assert!(close(shannon(&fp(&[(1, 2), (1, 4), (1, 4)])), 1.5 * LN2));
    }

    #[test]
    fn kl_values() {
        let half = fp(&[(1, 2), (1, 2)]);
        assert_eq!(kl(&half, &half).unwrap(), 0.0);
        assert!(close(kl(&half, &fp(&[(1, 4), (3, 4)])).unwrap(), 0.5 * libm::log(4.0 / 3.0)));
        assert_eq!(kl(&fp(&[(1, 1), (0, 1)]), &fp(&[(0, 1), (1, 1)])).unwrap(), f64::INFINITY);
        let other = FiniteProbability::new(vec!["u".into(), "v".into()], vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(kl(&half, &other), Err(InfoLossError::LabelMismatch));
    }

    #[test]
    fn kl_nonnegative_on_samples() {
        let mut rng = sample::rng(5);
        for _ in 0..200 {
            let n = rng.random_range(1..=4);
            let p = sample::probability(&mut rng, n, 12);
            let q = sample::probability(&mut rng, n, 12);
            assert!(kl(&p, &q).unwrap() >= 0.0);
            assert_eq!(kl(&p, &p).unwrap(), 0.0);
        }
    }

    #[test]
    fn loss_examples() {
        let half = fp(&[(1, 2), (1, 2)]);
        assert_eq!(loss_fp(&StochasticMorphism::identity(&half), 1.0), 0.0);
        assert!(close(loss_fp(&finprob::to_point(&half), 1.0), -LN2));
        let id = StochasticMorphism::identity(&half);
        let diagram = finprob::coproduct_morphisms(&id, &id).unwrap();
        let lhs = shannon(diagram.copair.target()) - shannon(diagram.copair.source());
        let q_hat = loss_fp(&finprob::from_point(&half), 1.0);
        assert!(close(lhs, -LN2));
        assert!(close(lhs, 0.0 + 0.0 - q_hat));
    }

    #[test]
    fn extended_entropy_example() {
        let two = PointedSet::two_point();
        let x = ProbPointedSet::new(vec![(rat(1, 2), two), (rat(1, 2), two)]).unwrap();
        let h = extended_entropy_ps(&x, &InvariantFamily::ReducedEuler, 1.0).unwrap();
        assert!(close(h, LN2 + 1.0));
        let phi = ProbMorphism::to_zero(&x);
        assert!(close(loss_pc(&phi, &InvariantFamily::ReducedEuler, 1.0).unwrap(), -(LN2 + 1.0)));
        let perm = ProbMorphism::identity(&x);
        assert_eq!(loss_pc(&perm, &InvariantFamily::Linear { kappa: 3.0 }, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn extended_loss_restricts_to_shannon() {
        let mut rng = sample::rng(11);
        for _ in 0..100 {
            let n = rng.random_range(1..=4);
            let p = sample::probability(&mut rng, n, 12);
            let m = rng.random_range(1..=4);
            let s = sample::morphism_from(&mut rng, &p, m, 12);
            let point = PointedSet::point();
            let mut families = crate::probcat::Families::new();
            for (j, row) in s.matrix().iter().enumerate() {
                for (i, w) in row.iter().enumerate() {
                    if !num_traits::Zero::is_zero(w) {
                        families.insert((j, i), BTreeMap::from([(PointedMap::identity(point), w.clone())]));
                    }
                }
            }
            let phi = ProbMorphism::new(embed_fp(s.source()), embed_fp(s.target()), s.matrix().clone(), families).unwrap();
            for base in [InvariantFamily::ReducedEuler, InvariantFamily::Exponential { lambda: 2.0 }] {
                assert!(close(loss_pc(&phi, &base, 1.0).unwrap(), loss_fp(&s, 1.0)));
            }
        }
    }

    #[test]
    fn invariant_families() {
        let four = PointedSet::new(4, 0).unwrap();
        assert_eq!(InvariantFamily::Linear { kappa: 2.0 }.eval_pointed(four).unwrap(), 6.0);
        let exp = InvariantFamily::Exponential { lambda: 2.0 };
        assert_eq!(exp.rho(5).unwrap(), exp.rho(2).unwrap() * exp.rho(3).unwrap());
        let ident = BTreeMap::from([(2, 2.0), (3, 3.0), (5, 5.0)]);
        let log = InvariantFamily::LogSemigroup { kappa: 1.0, primes: ident.clone() };
        assert!(close(log.rho(6).unwrap(), log.rho(2).unwrap() + log.rho(3).unwrap()));
        assert!(close(log.rho(6).unwrap(), libm::log(6.0)));
        let mult = InvariantFamily::Multiplicative { primes: ident };
        assert_eq!(mult.rho(12).unwrap(), 12.0);
        assert_eq!(mult.rho(7), Err(InfoLossError::UndefinedInvariant { n: 7 }));
        assert_eq!(mult.rho(0), Err(InfoLossError::UndefinedInvariant { n: 0 }));
        assert!(!InvariantFamily::Exponential { lambda: 0.0 }.is_admissible());
    }

    #[test]
    fn linear_inclusion_exclusion_on_subsets() {
        // Pointed subsets of a 6-point set, as masks always containing 0.
        let rho = InvariantFamily::Linear { kappa: 1.5 };
        let size = |mask: u32| PointedSet::new(mask.count_ones() as usize, 0).unwrap();
        for a in (1u32..64).filter(|m| m & 1 == 1) {
            for b in (1u32..64).filter(|m| m & 1 == 1) {
                let e = |m| rho.eval_pointed(size(m)).unwrap();
                assert_eq!(e(a | b) + e(a & b), e(a) + e(b));
            }
        }
    }

    #[test]
    fn log_euler_losses() {
        let k3 = TruncatedCubicalSet::discrete(3, 2);
        let k4 = TruncatedCubicalSet::discrete(4, 2);
        assert_eq!(loss_logchi(&k3, &k3).unwrap(), 0.0);
        assert!(close(loss_logchi(&k3, &k4).unwrap(), libm::log(1.5)));
        let smash = smash_cubical(&k3, &k4);
        assert!(close(log_euler(&smash).unwrap(), log_euler(&k3).unwrap() + log_euler(&k4).unwrap()));
        let circle = TruncatedCubicalSet::sphere(1, 2);
        assert_eq!(log_euler(&circle), Err(InfoLossError::NonpositiveEuler { value: -1 }));
        let cube = TruncatedCubicalSet::standard_cube(2, 2);
        assert_eq!(InvariantFamily::ReducedEuler.eval_cubical(&cube).unwrap(), 0.0);
    }

    #[test]
    fn cubical_inclusion_exclusion() {
        let s2 = TruncatedCubicalSet::sphere(2, 2);
        let cube = TruncatedCubicalSet::standard_cube(2, 2);
        let flags = cube.degenerate_flags();
        let edges: Vec<usize> = (0..cube.sizes()[1]).filter(|&x| !flags[1][x]).collect();
        for &e1 in &edges {
            for &e2 in &edges {
                let a = Subcomplex::generated(&cube, &[(1, e1)]);
                let b = Subcomplex::generated(&cube, &[(1, e2)]);
                let lhs = a.union(&b).reduced_euler(&cube) + a.intersection(&b).reduced_euler(&cube);
                assert_eq!(lhs, a.reduced_euler(&cube) + b.reduced_euler(&cube));
            }
        }
        assert_eq!(s2.reduced_euler(), 1);
    }

    #[test]
    fn combine_hand_instance() {
        let half = fp(&[(1, 2), (1, 2)]);
        let bang = finprob::to_point(&half);
        let sum = finprob::weighted_direct_sum(&rat(1, 2), &bang, &bang).unwrap();
        let l = LossFunctional::shannon(1.0);
        assert!(close(l.eval(&sum).unwrap(), -2.0 * LN2));
        assert!(close(l.eval(&sum).unwrap(), 0.5 * -LN2 + 0.5 * -LN2 - LN2));
    }

    #[test]
    fn shannon_passes_every_axiom() {
        let config = SuiteConfig { instances: 200, ..Default::default() };
        for report in axiom_suite(&LossFunctional::shannon(1.0), &config).unwrap() {
            assert!(report.pass, "{report:?}");
        }
    }

    #[test]
    fn squared_entropy_breaks_combine() {
        let config = SuiteConfig { instances: 200, ..Default::default() };
        let reports = axiom_suite(&LossFunctional::squared_entropy(), &config).unwrap();
        let combine = reports.iter().find(|r| r.axiom == "combine").unwrap();
        assert!(!combine.pass && combine.max_residual > 1e-3);
        assert!(reports.iter().find(|r| r.axiom == "compose").unwrap().pass);
    }

    #[test]
    fn mixing_sign_flip_on_one_instance() {
        // Shared source, targets on disjoint points: the binary term enters with a minus sign.
        let half = fp(&[(1, 2), (1, 2)]);
        let mk = |row: usize| {
            let mut m = vec![vec![rat(0, 1); 2]; 2];
            m[row] = vec![rat(1, 1), rat(1, 1)];
            let mut q = vec![rat(0, 1); 2];
            q[row] = rat(1, 1);
            finprob::validate(m, half.clone(), FiniteProbability::from_probs(q).unwrap()).unwrap()
        };
        let (s, s2) = (mk(0), mk(1));
        let mix = finprob::convex_mixture(&rat(1, 2), &s, &s2).unwrap();
        let l = LossFunctional::shannon(1.0);
        let bang = l.eval(&finprob::to_point(&half)).unwrap();
        let lhs = l.eval(&mix).unwrap();
        assert!(close(lhs, 0.5 * l.eval(&s).unwrap() + 0.5 * l.eval(&s2).unwrap() - bang));
        assert!(!close(lhs, 0.5 * l.eval(&s).unwrap() + 0.5 * l.eval(&s2).unwrap() + bang));
    }

    #[test]
    fn log_euler_not_on_probabilities() {
        let l = LossFunctional { kind: LossKind::LogEuler, scale: 1.0, base_invariant: None };
        assert_eq!(axiom_suite(&l, &SuiteConfig::default()), Err(InfoLossError::NotApplicable));
    }
}
