//! Summing functors `P(X) → C` and the Γ-space they assemble into.
//!
//! Pointed subsets of `X` are bitmasks over the non-base points of `X`,
//! taken in ascending order: bit `k` is the `k`-th non-base point. Pattern
//! indices put the first point of a subset in the most significant bit, so
//! tables agree with the row-major order of iterated coproducts.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::category::ZeroSum;
use crate::cubical::{self, CubicalError, Nerve, ProbCubicalSet, TruncatedCubicalSet};
use crate::fincat::{FinCatError, FiniteCategory, MorphismSpec};
use crate::pointed::{PointedMap, PointedSet};
use crate::probcat::{ProbMorphism, ProbPointedSet};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SummingError {
    #[error("subset is not contained in the base set")]
    NotSubset,
    #[error("λ for point {0} lies outside [0, 1]")]
    LambdaOutOfRange(usize),
    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("some λ vanishes, the multiplicative relation divides by it")]
    ZeroLambda,
    #[error("enumeration needs more than {bound} candidates")]
    ExplosionGuard { bound: u64 },
    #[error("no nerve supplied for term {term}")]
    MissingTermNerve { term: usize },
    #[error("the sum of two assigned objects is not available")]
    UndefinedSum,
    #[error("pushed-forward functor is not among the enumerated ones")]
    NotEnumerated,
    #[error(transparent)]
    Cubical(#[from] CubicalError),
    #[error(transparent)]
    FinCat(#[from] FinCatError),
}

fn in_unit(x: &Rational) -> bool {
    !x.is_negative() && *x <= Rational::one()
}

/// Non-base elements of `x` in ascending order.
pub fn non_base(x: PointedSet) -> Vec<usize> {
    (0..x.size()).filter(|&e| e != x.base()).collect()
}

/// Bitmask of a set of elements of `x`; the basepoint may be listed or not.
pub fn subset_mask(x: PointedSet, elements: &[usize]) -> Result<u32, SummingError> {
    let points = non_base(x);
    let mut mask = 0;
    for &e in elements {
        if e == x.base() {
            continue;
        }
        let k = points.iter().position(|&p| p == e).ok_or(SummingError::NotSubset)?;
        mask |= 1 << k;
    }
    Ok(mask)
}

fn members(mask: u32) -> Vec<usize> {
    (0..32).filter(|k| mask >> k & 1 == 1).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalSummingFunctor {
    base_set: PointedSet,
    lambda: Vec<Rational>,
}

impl ClassicalSummingFunctor {
    pub fn new(base_set: PointedSet, lambda: Vec<Rational>) -> Result<Self, SummingError> {
        if lambda.len() != base_set.reduced_size() {
            return Err(SummingError::LengthMismatch { expected: base_set.reduced_size(), found: lambda.len() });
        }
        if let Some(k) = lambda.iter().position(|l| !in_unit(l)) {
            return Err(SummingError::LambdaOutOfRange(k));
        }
        Ok(Self { base_set, lambda })
    }

    pub fn base_set(&self) -> PointedSet {
        self.base_set
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    pub fn points(&self) -> usize {
        self.lambda.len()
    }

    fn check(&self, mask: u32) -> Result<(), SummingError> {
        if self.points() < 32 && mask >> self.points() != 0 {
            return Err(SummingError::NotSubset);
        }
        Ok(())
    }

    /// `Λ_A X_A`: one term per pattern, the pattern bit of a point choosing
    /// `λ_x` (bit 0, based at `⋆`) or `1 - λ_x` (bit 1, based at `x`).
    pub fn evaluate(&self, mask: u32) -> Result<ProbPointedSet, SummingError> {
        self.check(mask)?;
        Ok(ProbPointedSet::new(self.terms(mask)).expect("pattern weights sum to one"))
    }

    fn terms(&self, mask: u32) -> Vec<(Rational, PointedSet)> {
        let pts = members(mask);
        let k = pts.len();
        if k == 0 {
            return alloc::vec![(Rational::one(), PointedSet::point())];
        }
        (0..1usize << k)
            .map(|p| {
                let mut w = Rational::one();
                for (pos, &x) in pts.iter().enumerate() {
                    let bit = p >> (k - 1 - pos) & 1;
                    w *= if bit == 0 { self.lambda[x].clone() } else { Rational::one() - &self.lambda[x] };
                }
                let first = p >> (k - 1) & 1;
                (w, PointedSet::new(k + 1, first).expect("base within the wedge"))
            })
            .collect()
    }

    /// `λ_A = Π_{a ∈ A} λ_a`, the weight of the all-`⋆` pattern.
    pub fn lambda_of(&self, mask: u32) -> Result<Rational, SummingError> {
        self.check(mask)?;
        Ok(members(mask).iter().fold(Rational::one(), |acc, &x| acc * &self.lambda[x]))
    }

    /// Every subset's terms, indexed by mask.
    pub fn table(&self) -> SummingTable {
        SummingTable { points: self.points(), values: (0..1u32 << self.points()).map(|m| self.terms(m)).collect() }
    }
}

/// `λ_{A∪B} = λ_A λ_B / λ_{A∩B}` for every pair of subsets.
pub fn ainex_holds(phi: &ClassicalSummingFunctor) -> Result<bool, SummingError> {
    if phi.lambda.iter().any(Zero::is_zero) {
        return Err(SummingError::ZeroLambda);
    }
    let all = 1u32 << phi.points();
    for a in 0..all {
        for b in 0..all {
            let lhs = phi.lambda_of(a | b)?;
            let rhs = phi.lambda_of(a)? * phi.lambda_of(b)? / phi.lambda_of(a & b)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A functor table on `P(X)` with unvalidated weights, indexed by mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummingTable {
    pub points: usize,
    pub values: Vec<Vec<(Rational, PointedSet)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummingFailure {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SummingReport {
    pub pairs_checked: usize,
    pub zero_ok: bool,
    pub failures: Vec<SummingFailure>,
}

impl SummingReport {
    pub fn pass(&self) -> bool {
        self.zero_ok && self.failures.is_empty()
    }
}

/// Checks `Φ(⋆)` is the zero object and `Φ(A ∪ B) ≅ Φ(A) ⨿ Φ(B)` for all
/// disjoint non-empty `A`, `B`. The coproduct has weights `w_A w_B` and
/// wedges of size `#A + #B - 1`; terms are matched by splitting each
/// pattern of `A ∪ B` into its `A` and `B` parts.
pub fn verify_summing(table: &SummingTable) -> SummingReport {
    let zero = &table.values[0];
    let mut report = SummingReport {
        zero_ok: zero.len() == 1 && zero[0].0.is_one() && zero[0].1.size() == 1,
        ..Default::default()
    };
    let all = 1u32 << table.points;
    for a in 1..all {
        for b in 1..all {
            if a & b != 0 {
                continue;
            }
            report.pairs_checked += 1;
            if let Some(reason) = summing_violation(table, a, b) {
                report.failures.push(SummingFailure { a: members(a), b: members(b), reason });
            }
        }
    }
    report
}

fn summing_violation(table: &SummingTable, a: u32, b: u32) -> Option<String> {
    let u = a | b;
    let pts = members(u);
    let (ta, tb, tu) = (&table.values[a as usize], &table.values[b as usize], &table.values[u as usize]);
    let (ka, kb) = (a.count_ones() as usize, b.count_ones() as usize);
    if ta.len() != 1 << ka || tb.len() != 1 << kb || tu.len() != 1 << pts.len() {
        return Some(String::from("term count differs from the pattern count"));
    }
    for (p, (w, set)) in tu.iter().enumerate() {
        let (mut pa, mut pb) = (0usize, 0usize);
        for (pos, &x) in pts.iter().enumerate() {
            let bit = p >> (pts.len() - 1 - pos) & 1;
            if a >> x & 1 == 1 {
                pa = pa << 1 | bit;
            } else {
                pb = pb << 1 | bit;
            }
        }
        let (wa, sa) = &ta[pa];
        let (wb, sb) = &tb[pb];
        if *w != wa * wb {
            return Some(format!("weight of pattern {p} is {}, the coproduct gives {}", rational::format_rational(w), rational::format_rational(&(wa * wb))));
        }
        if set.size() != sa.size() + sb.size() - 1 {
            return Some(format!("pattern {p} carries a set of size {}, expected {}", set.size(), sa.size() + sb.size() - 1));
        }
    }
    None
}

/// A pointed polytope with `2^n` vertices listed in pattern order, possibly
/// with repetitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    pub vertices: Vec<Vec<Rational>>,
    pub base: Vec<Rational>,
}

impl Polytope {
    pub fn distinct_vertices(&self) -> Vec<Vec<Rational>> {
        let mut v = self.vertices.clone();
        v.sort();
        v.dedup();
        v
    }
}

/// Vertices `(t_1, .., t_n)` with `t_i ∈ {z_i, 1 - z_i}`, based at `z`.
pub fn cube_vertices(z: &[Rational]) -> Polytope {
    let n = z.len();
    let vertices = (0..1usize << n)
        .map(|p| {
            z.iter()
                .enumerate()
                .map(|(i, zi)| if p >> (n - 1 - i) & 1 == 0 { zi.clone() } else { Rational::one() - zi })
                .collect()
        })
        .collect();
    Polytope { vertices, base: z.to_vec() }
}

/// Level-`n` cells of the nerve of classical summing functors on a set with
/// `points` non-base points: a point `Λ` of the parameter cube and the
/// polytope spanned by `{λ_{x_i}, 1 - λ_{x_i}}` over chosen points `x_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassicalNerveDescriptor {
    pub points: usize,
    pub n: usize,
}

pub fn classical_nerve_descriptor(x: PointedSet, n: usize) -> ClassicalNerveDescriptor {
    ClassicalNerveDescriptor { points: x.reduced_size(), n }
}

impl ClassicalNerveDescriptor {
    pub fn vertex_count(&self) -> usize {
        1 << self.n
    }

    pub fn sample(&self, lambda: &[Rational], xs: &[usize]) -> Result<Polytope, SummingError> {
        if lambda.len() != self.points {
            return Err(SummingError::LengthMismatch { expected: self.points, found: lambda.len() });
        }
        if xs.len() != self.n {
            return Err(SummingError::LengthMismatch { expected: self.n, found: xs.len() });
        }
        if let Some(k) = lambda.iter().position(|l| !in_unit(l)) {
            return Err(SummingError::LambdaOutOfRange(k));
        }
        let z: Vec<Rational> =
            xs.iter().map(|&x| lambda.get(x).cloned().ok_or(SummingError::NotSubset)).collect::<Result<_, _>>()?;
        Ok(cube_vertices(&z))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum RealizationKind {
    ClassicalCube,
    QuantumAnnulus,
    GappedTorus,
}

impl RealizationKind {
    pub fn name(self) -> &'static str {
        match self {
            RealizationKind::ClassicalCube => "classical-cube",
            RealizationKind::QuantumAnnulus => "quantum-annulus",
            RealizationKind::GappedTorus => "gapped-torus",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RealizationParams {
    /// `Z ↦` the cube with vertices `{z_i, 1 - z_i}`.
    ClassicalCube,
    /// Off-diagonal entries range over the disk `|θ|² ≤ α(1-α)`.
    QuantumAnnulus,
    /// Parameters restricted to `[a, b]^N`, off-diagonals on circles of
    /// squared radius `α(1-α) - c`.
    GappedTorus { beta: f64, delta: f64, t: f64, c: f64, a: f64, b: f64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub j: usize,
    pub stabilizer: String,
    pub base_set: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealizationDescriptor {
    pub kind: RealizationKind,
    pub n: usize,
    pub params: RealizationParams,
    pub strata: Vec<Stratum>,
}

fn power_label(factor: &str, k: usize) -> Option<String> {
    match k {
        0 => None,
        1 => Some(String::from(factor)),
        _ => Some(format!("{factor}^⊗{k}")),
    }
}

/// `U(2)^⊗j ⊗ (U(1)×U(1))^⊗(n-j)`.
pub fn unitary_stabilizer(n: usize, j: usize) -> String {
    [power_label("U(2)", j), power_label("(U(1)×U(1))", n - j)].into_iter().flatten().collect::<Vec<_>>().join(" ⊗ ")
}

/// Strata by the number `j` of coordinates equal to `1/2`.
pub fn half_strata(n: usize, stabilizer: impl Fn(usize) -> String, range: &str) -> Vec<Stratum> {
    (0..=n)
        .map(|j| Stratum {
            j,
            stabilizer: stabilizer(j),
            base_set: format!("sequences in {range}^{n} with {j} coordinates equal to 1/2"),
        })
        .collect()
}

/// The classical cube family. The coordinate flips `t ↔ 1 - t` act on the
/// vertices; at `z_i = 1/2` the `i`-th flip fixes the cube.
pub fn classical_realization_descriptor(x: PointedSet) -> RealizationDescriptor {
    let n = x.reduced_size();
    let flips = |j: usize| if j == 0 { String::from("1") } else { format!("(Z/2)^{j}") };
    RealizationDescriptor {
        kind: RealizationKind::ClassicalCube,
        n,
        params: RealizationParams::ClassicalCube,
        strata: half_strata(n, flips, "[0,1]"),
    }
}

impl RealizationDescriptor {
    /// Index `j` of the stratum containing the parameter point.
    pub fn stratum_of(&self, alpha: &[f64]) -> Option<usize> {
        if alpha.len() != self.n {
            return None;
        }
        let inside = |a: f64| match self.params {
            RealizationParams::GappedTorus { a: lo, b: hi, .. } => lo <= a && a <= hi,
            _ => (0.0..=1.0).contains(&a),
        };
        alpha.iter().all(|&a| inside(a)).then(|| alpha.iter().filter(|&&a| a == 0.5).count())
    }

    /// Squared radius of the off-diagonal circle or disk at `α`.
    pub fn radius_sq(&self, alpha: f64) -> f64 {
        match self.params {
            RealizationParams::ClassicalCube => 0.0,
            RealizationParams::QuantumAnnulus => alpha * (1.0 - alpha),
            RealizationParams::GappedTorus { c, .. } => alpha * (1.0 - alpha) - c,
        }
    }
}

/// Summing functors `P(X) → C` determined by their values on singletons,
/// with natural isomorphisms between them, presented as a finite category.
#[derive(Debug, Clone)]
pub struct SummingCategory<O, M> {
    pub category: FiniteCategory,
    pub assignments: Vec<Vec<O>>,
    pub transformations: Vec<Vec<M>>,
}

impl<O: Ord + Clone, M: Ord + Clone> SummingCategory<O, M> {
    pub fn object_index(&self, assignment: &[O]) -> Option<usize> {
        self.assignments.iter().position(|a| a == assignment)
    }

    pub fn morphism_index(&self, components: &[M]) -> Option<usize> {
        self.transformations.iter().position(|t| t == components)
    }
}

/// `Φ(A)`: the left-associated iterated sum of the assigned objects, the
/// zero object when `A` is empty.
pub fn iterated_sum<C: ZeroSum>(c: &C, objects: &[C::Object]) -> Option<C::Object> {
    let mut it = objects.iter();
    let Some(first) = it.next() else { return Some(c.zero()) };
    it.try_fold(first.clone(), |acc, o| c.sum(&acc, o).map(|s| s.object))
}

/// The induced map `⊕ f_i` between iterated sums.
pub fn iterated_sum_map<C: ZeroSum>(c: &C, maps: &[C::Morphism]) -> Option<C::Morphism> {
    let Some((first, rest)) = maps.split_first() else {
        let z = c.zero();
        return Some(c.identity(&z));
    };
    let mut acc = first.clone();
    for f in rest {
        let tgt = c.sum(&c.target(&acc), &c.target(f))?;
        let l = c.compose(&tgt.left, &acc)?;
        let r = c.compose(&tgt.right, f)?;
        acc = c.copair(&l, &r)?;
    }
    Some(acc)
}

/// Enumerates summing functors on a set with `points` non-base points whose
/// singleton values range over `candidates`, keeping those for which every
/// `Φ(A)` exists. Morphisms are tuples of isomorphisms, one per point, as a
/// natural isomorphism out of a sum is fixed by its components. The all-zero
/// assignment, when available, is object 0.
pub fn generic_summing_enumerate<C: ZeroSum>(
    c: &C,
    candidates: &[C::Object],
    points: usize,
    isos: impl Fn(&C::Object, &C::Object) -> Vec<C::Morphism>,
    bound: u64,
) -> Result<SummingCategory<C::Object, C::Morphism>, SummingError> {
    let mut cands: Vec<C::Object> = candidates.to_vec();
    cands.sort();
    cands.dedup();
    let zero = c.zero();
    if let Some(z) = cands.iter().position(|o| *o == zero) {
        let z = cands.remove(z);
        cands.insert(0, z);
    }
    let total = (cands.len() as u64).checked_pow(points as u32).unwrap_or(u64::MAX);
    if total > bound {
        return Err(SummingError::ExplosionGuard { bound });
    }
    let mut assignments = Vec::new();
    let mut idx = alloc::vec![0usize; points];
    'outer: loop {
        if !cands.is_empty() || points == 0 {
            let a: Vec<C::Object> = idx.iter().map(|&i| cands[i].clone()).collect();
            let ok = (1u32..1 << points).all(|m| {
                let objs: Vec<C::Object> = members(m).iter().map(|&k| a[k].clone()).collect();
                iterated_sum(c, &objs).is_some()
            });
            if ok {
                assignments.push(a);
            }
        }
        for pos in (0..points).rev() {
            idx[pos] += 1;
            if idx[pos] < cands.len() {
                continue 'outer;
            }
            idx[pos] = 0;
        }
        break;
    }
    let mut transformations: Vec<Vec<C::Morphism>> = Vec::new();
    let mut specs = Vec::new();
    let mut budget = bound;
    for (s, from) in assignments.iter().enumerate() {
        for (t, to) in assignments.iter().enumerate() {
            let per: Vec<Vec<C::Morphism>> = from.iter().zip(to).map(|(a, b)| isos(a, b)).collect();
            let count: u64 = per.iter().map(|v| v.len() as u64).product();
            budget = budget.checked_sub(count).ok_or(SummingError::ExplosionGuard { bound })?;
            for combo in cartesian(&per) {
                specs.push(MorphismSpec { name: format!("{combo:?}"), source: s, target: t });
                transformations.push(combo);
            }
        }
    }
    let index: BTreeMap<&Vec<C::Morphism>, usize> = transformations.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let compose: Vec<Vec<Option<usize>>> = (0..transformations.len())
        .map(|g| {
            (0..transformations.len())
                .map(|f| {
                    if specs[f].target != specs[g].source {
                        return None;
                    }
                    let comp: Option<Vec<C::Morphism>> =
                        transformations[g].iter().zip(&transformations[f]).map(|(x, y)| c.compose(x, y)).collect();
                    comp.and_then(|v| index.get(&v).copied())
                })
                .collect()
        })
        .collect();
    let identities: Option<Vec<usize>> = assignments
        .iter()
        .map(|a| index.get(&a.iter().map(|o| c.identity(o)).collect::<Vec<_>>()).copied())
        .collect();
    let identities = identities.ok_or(FinCatError::TableShape)?;
    let objects = assignments.iter().map(|a| format!("{a:?}")).collect();
    let category = FiniteCategory::new(objects, specs, identities, compose)?;
    Ok(SummingCategory { category, assignments, transformations })
}

fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    lists.iter().fold(alloc::vec![Vec::new()], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect()
    })
}

/// Isomorphisms of a finite category between two objects.
pub fn fincat_isos(c: &FiniteCategory) -> impl Fn(&usize, &usize) -> Vec<usize> + '_ {
    move |a, b| c.hom(*a, *b).into_iter().filter(|&f| c.is_iso(f)).collect()
}

/// The functor `Σ(X) → Σ(Y)` induced by a pointed map `f : X → Y`, sending
/// `Φ` to `B ↦ Φ(f⁻¹B)`, as object and morphism tables.
pub fn pushforward<C: ZeroSum>(
    c: &C,
    f: &PointedMap,
    source: &SummingCategory<C::Object, C::Morphism>,
    target: &SummingCategory<C::Object, C::Morphism>,
) -> Result<(Vec<usize>, Vec<usize>), SummingError> {
    let (xs, ys) = (non_base(f.source()), non_base(f.target()));
    let fibres: Vec<Vec<usize>> = ys
        .iter()
        .map(|&y| (0..xs.len()).filter(|&k| f.apply(xs[k]) == y).collect())
        .collect();
    let on_objects = source
        .assignments
        .iter()
        .map(|a| {
            let pushed: Option<Vec<C::Object>> = fibres
                .iter()
                .map(|fib| iterated_sum(c, &fib.iter().map(|&k| a[k].clone()).collect::<Vec<_>>()))
                .collect();
            target.object_index(&pushed.ok_or(SummingError::UndefinedSum)?).ok_or(SummingError::NotEnumerated)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let on_morphisms = source
        .transformations
        .iter()
        .map(|t| {
            let pushed: Option<Vec<C::Morphism>> = fibres
                .iter()
                .map(|fib| iterated_sum_map(c, &fib.iter().map(|&k| t[k].clone()).collect::<Vec<_>>()))
                .collect();
            target.morphism_index(&pushed.ok_or(SummingError::UndefinedSum)?).ok_or(SummingError::NotEnumerated)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((on_objects, on_morphisms))
}

/// Value of the Γ-space of a finite category at a pointed set.
#[derive(Debug, Clone)]
pub struct GammaValue {
    pub summing: SummingCategory<usize, usize>,
    pub nerve: Nerve,
}

pub fn gamma_value(c: &FiniteCategory, x: PointedSet, top: usize, bound: u64) -> Result<GammaValue, SummingError> {
    let objects: Vec<usize> = (0..c.objects().len()).collect();
    let summing = generic_summing_enumerate(c, &objects, x.reduced_size(), fincat_isos(c), bound)?;
    let nerve = cubical::cubical_nerve(&summing.category, top, bound)?;
    Ok(GammaValue { summing, nerve })
}

/// Cell maps between nerves induced by a pointed map.
pub fn gamma_map(
    c: &FiniteCategory,
    f: &PointedMap,
    source: &GammaValue,
    target: &GammaValue,
) -> Result<Vec<Vec<usize>>, SummingError> {
    let (on_objects, on_morphisms) = pushforward(c, f, &source.summing, &target.summing)?;
    cubical::nerve_map(&source.nerve, &target.nerve, &on_objects, &on_morphisms).ok_or(SummingError::NotEnumerated)
}

/// `Σ λ_i F(X_i)`, looking each term's cubical set up by its pointed set.
pub fn prob_gamma_eval(
    x: &ProbPointedSet,
    nerves: &BTreeMap<PointedSet, TruncatedCubicalSet>,
) -> Result<ProbCubicalSet, SummingError> {
    let terms = x
        .terms()
        .iter()
        .enumerate()
        .map(|(i, (w, s))| nerves.get(s).cloned().map(|k| (w.clone(), k)).ok_or(SummingError::MissingTermNerve { term: i }))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProbCubicalSet::new(terms)?)
}

/// Image of a morphism of probabilistic pointed sets: the same matrix, with
/// each weighted pointed map replaced by its induced cell maps.
pub type CellMapFamilies = BTreeMap<(usize, usize), Vec<(Vec<Vec<usize>>, Rational)>>;

pub fn prob_gamma_morphism(
    c: &FiniteCategory,
    phi: &ProbMorphism,
    values: &BTreeMap<PointedSet, GammaValue>,
) -> Result<CellMapFamilies, SummingError> {
    let mut out = CellMapFamilies::new();
    for (&(j, i), family) in phi.families() {
        let src = values.get(&phi.source().set(i)).ok_or(SummingError::MissingTermNerve { term: i })?;
        let tgt = values.get(&phi.target().set(j)).ok_or(SummingError::MissingTermNerve { term: j })?;
        let maps = family
            .iter()
            .map(|(f, w)| Ok((gamma_map(c, f, src, tgt)?, w.clone())))
            .collect::<Result<Vec<_>, SummingError>>()?;
        out.insert((j, i), maps);
    }
    Ok(out)
}

/// Levelwise composite `second ∘ first` of cell maps.
pub fn compose_cell_maps(second: &[Vec<usize>], first: &[Vec<usize>]) -> Vec<Vec<usize>> {
    first.iter().zip(second).map(|(f, g)| f.iter().map(|&x| g[x]).collect()).collect()
}
