//! Finite probability spaces with stochastic matrices as morphisms.
//!
//! Matrices are column-stochastic with shape `(#target, #source)`: entry
//! `[y][x]` is the probability of landing on target point `y` from source
//! point `x`. All arithmetic is exact, so every commuting diagram below is
//! checked with zero tolerance.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{self, mat_mul, mat_vec, RatMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinProbError {
    #[error("probability entry {index} is negative")]
    NegativeProbability { index: usize },
    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: String },
    #[error("label `{label}` appears more than once")]
    DuplicateLabel { label: String },
    #[error("{labels} labels for {probs} probabilities")]
    LengthMismatch { labels: usize, probs: usize },
    #[error("matrix has shape {found:?}, expected {expected:?}")]
    ShapeMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("matrix entry ({row}, {col}) is negative")]
    NegativeEntry { row: usize, col: usize },
    #[error("column {col} sums to {sum}, expected 1")]
    ColumnNotStochastic { col: usize, sum: String },
    #[error("row {row} of S*P is {found}, target probability is {expected}")]
    MeasureNotPreserved { row: usize, found: String, expected: String },
    #[error("target of the first morphism differs from the source of the second")]
    SourceTargetMismatch,
    #[error("morphisms do not share a target")]
    TargetMismatch,
    #[error("morphisms do not share a source")]
    SourceMismatch,
    #[error("mixing weight must lie in [0, 1]")]
    WeightOutOfRange,
}

/// A finite set of labelled points carrying an exact probability measure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteProbability {
    labels: Vec<String>,
    probs: Vec<Rational>,
}

impl FiniteProbability {
    pub fn new(labels: Vec<String>, probs: Vec<Rational>) -> Result<Self, FinProbError> {
        if labels.len() != probs.len() {
            return Err(FinProbError::LengthMismatch { labels: labels.len(), probs: probs.len() });
        }
        let mut seen = BTreeSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(FinProbError::DuplicateLabel { label: label.clone() });
            }
        }
        if let Some(index) = probs.iter().position(Signed::is_negative) {
            return Err(FinProbError::NegativeProbability { index });
        }
        let total = rational::sum(&probs);
        if !total.is_one() {
            return Err(FinProbError::NotNormalized { sum: rational::format_rational(&total) });
        }
        Ok(Self { labels, probs })
    }

    /// Points labelled `"0"`, `"1"`, ...
    pub fn from_probs(probs: Vec<Rational>) -> Result<Self, FinProbError> {
        let labels = (0..probs.len()).map(|i| format!("{i}")).collect();
        Self::new(labels, probs)
    }

    /// The zero object: a single point with mass one.
    pub fn point() -> Self {
        Self { labels: alloc::vec![String::from("*")], probs: alloc::vec![Rational::one()] }
    }

    pub fn uniform(n: usize) -> Self {
        let p = Rational::new(1.into(), (n as i64).into());
        Self::from_probs(alloc::vec![p; n]).expect("uniform measure is normalized")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn is_point(&self) -> bool {
        self.probs.len() == 1
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.probs[i].is_zero()).collect()
    }
}

/// A morphism of finite probabilities: a column-stochastic matrix carrying
/// the source measure onto the target measure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StochasticMorphism {
    source: FiniteProbability,
    target: FiniteProbability,
    matrix: RatMatrix,
}

fn check_shape(m: &RatMatrix, rows: usize, cols: usize) -> Result<(), FinProbError> {
    let found = (m.len(), m.first().map_or(0, Vec::len));
    if m.len() != rows || m.iter().any(|r| r.len() != cols) {
        return Err(FinProbError::ShapeMismatch { expected: (rows, cols), found });
    }
    Ok(())
}

fn check_transport(
    m: &RatMatrix,
    source: &FiniteProbability,
    target: &FiniteProbability,
) -> Result<(), FinProbError> {
    let pushed = mat_vec(m, source.probs());
    for (row, (found, expected)) in pushed.iter().zip(target.probs()).enumerate() {
        if found != expected {
            return Err(FinProbError::MeasureNotPreserved {
                row,
                found: rational::format_rational(found),
                expected: rational::format_rational(expected),
            });
        }
    }
    Ok(())
}

/// Checks the three defining conditions in order: non-negativity, column
/// sums, and `S P = Q`.
pub fn validate(
    matrix: RatMatrix,
    source: FiniteProbability,
    target: FiniteProbability,
) -> Result<StochasticMorphism, FinProbError> {
    check_shape(&matrix, target.len(), source.len())?;
    for (row, entries) in matrix.iter().enumerate() {
        if let Some(col) = entries.iter().position(Signed::is_negative) {
            return Err(FinProbError::NegativeEntry { row, col });
        }
    }
    for col in 0..source.len() {
        let s = matrix.iter().fold(Rational::zero(), |acc, r| acc + &r[col]);
        if !s.is_one() {
            return Err(FinProbError::ColumnNotStochastic { col, sum: rational::format_rational(&s) });
        }
    }
    check_transport(&matrix, &source, &target)?;
    Ok(StochasticMorphism { source, target, matrix })
}

impl StochasticMorphism {
    pub fn source(&self) -> &FiniteProbability {
        &self.source
    }

    pub fn target(&self) -> &FiniteProbability {
        &self.target
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> &Rational {
        &self.matrix[row][col]
    }

    pub fn identity(p: &FiniteProbability) -> Self {
        Self { source: p.clone(), target: p.clone(), matrix: rational::identity_matrix(p.len()) }
    }

    /// A permutation matrix sends exactly one unit to every row and column.
    pub fn is_isomorphism(&self) -> bool {
        if self.source.len() != self.target.len() {
            return false;
        }
        let unit_pattern = |line: &mut dyn Iterator<Item = &Rational>| {
            let mut ones = 0;
            for x in line {
                if x.is_one() {
                    ones += 1;
                } else if !x.is_zero() {
                    return false;
                }
            }
            ones == 1
        };
        let rows_ok = self.matrix.iter().all(|r| unit_pattern(&mut r.iter()));
        let cols_ok =
            (0..self.source.len()).all(|c| unit_pattern(&mut self.matrix.iter().map(|r| &r[c])));
        rows_ok && cols_ok
    }
}

/// `second ∘ first`.
pub fn compose(
    second: &StochasticMorphism,
    first: &StochasticMorphism,
) -> Result<StochasticMorphism, FinProbError> {
    if first.target != second.source {
        return Err(FinProbError::SourceTargetMismatch);
    }
    Ok(StochasticMorphism {
        source: first.source.clone(),
        target: second.target.clone(),
        matrix: mat_mul(&second.matrix, &first.matrix),
    })
}

/// The morphism whose every column is the target measure. From the zero
/// object it is the unique morphism; into the zero object it is `1̂`.
pub fn target_morphism(source: &FiniteProbability, target: &FiniteProbability) -> StochasticMorphism {
    let matrix = target.probs().iter().map(|q| alloc::vec![q.clone(); source.len()]).collect();
    StochasticMorphism { source: source.clone(), target: target.clone(), matrix }
}

/// The unique morphism to the zero object.
pub fn to_point(p: &FiniteProbability) -> StochasticMorphism {
    target_morphism(p, &FiniteProbability::point())
}

/// The unique morphism out of the zero object.
pub fn from_point(q: &FiniteProbability) -> StochasticMorphism {
    target_morphism(&FiniteProbability::point(), q)
}

pub(crate) fn pair_label(a: &str, b: &str) -> String {
    format!("{a}|{b}")
}

/// The independent product, which plays the role of the coproduct. Points
/// are ordered row-major and labelled `"a|b"`.
pub fn coproduct_objects(p: &FiniteProbability, q: &FiniteProbability) -> FiniteProbability {
    let mut labels = Vec::with_capacity(p.len() * q.len());
    let mut probs = Vec::with_capacity(p.len() * q.len());
    for (la, pa) in p.labels.iter().zip(&p.probs) {
        for (lb, qb) in q.labels.iter().zip(&q.probs) {
            labels.push(pair_label(la, lb));
            probs.push(pa * qb);
        }
    }
    FiniteProbability { labels, probs }
}

/// Index of `(a, b)` in the row-major product.
pub fn pair_index(a: usize, b: usize, right_len: usize) -> usize {
    a * right_len + b
}

/// The coprojections into `Λ·Λ'`: `I[(b,b'),a] = δ_ab λ'_b'` and
/// `I'[(b,b'),a'] = δ_a'b' λ_b`.
#[allow(clippy::needless_range_loop)]
pub fn injections(
    left: &FiniteProbability,
    right: &FiniteProbability,
) -> (StochasticMorphism, StochasticMorphism) {
    let product = coproduct_objects(left, right);
    let (n, m) = (left.len(), right.len());
    let mut inj_left = alloc::vec![alloc::vec![Rational::zero(); n]; n * m];
    let mut inj_right = alloc::vec![alloc::vec![Rational::zero(); m]; n * m];
    for b in 0..n {
        for bp in 0..m {
            let row = pair_index(b, bp, m);
            inj_left[row][b] = right.probs[bp].clone();
            inj_right[row][bp] = left.probs[b].clone();
        }
    }
    (
        StochasticMorphism { source: left.clone(), target: product.clone(), matrix: inj_left },
        StochasticMorphism { source: right.clone(), target: product, matrix: inj_right },
    )
}

/// A non-negative matrix that carries one measure onto another but need not
/// be column-stochastic. The copairing formula produces these: composing
/// with a coprojection always lands back in stochastic morphisms, while the
/// copairing itself can have column sums other than one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Transport {
    source: FiniteProbability,
    target: FiniteProbability,
    matrix: RatMatrix,
}

impl Transport {
    pub fn source(&self) -> &FiniteProbability {
        &self.source
    }

    pub fn target(&self) -> &FiniteProbability {
        &self.target
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn column_sums(&self) -> Vec<Rational> {
        (0..self.source.len())
            .map(|c| self.matrix.iter().fold(Rational::zero(), |acc, r| acc + &r[c]))
            .collect()
    }

    pub fn is_stochastic(&self) -> bool {
        self.column_sums().iter().all(One::is_one)
    }

    pub fn transports_measure(&self) -> bool {
        mat_vec(&self.matrix, self.source.probs()) == self.target.probs()
    }

    /// `self ∘ first`, validated as a stochastic morphism.
    pub fn compose_after(&self, first: &StochasticMorphism) -> Result<StochasticMorphism, FinProbError> {
        if first.target != self.source {
            return Err(FinProbError::SourceTargetMismatch);
        }
        validate(mat_mul(&self.matrix, &first.matrix), first.source.clone(), self.target.clone())
    }

    pub fn into_stochastic(self) -> Result<StochasticMorphism, FinProbError> {
        validate(self.matrix, self.source, self.target)
    }
}

pub(crate) fn transport_unchecked(
    matrix: RatMatrix,
    source: FiniteProbability,
    target: FiniteProbability,
) -> Transport {
    Transport { source, target, matrix }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoproductDiagram {
    pub object: FiniteProbability,
    pub left: StochasticMorphism,
    pub right: StochasticMorphism,
    pub copair: Transport,
}

/// Entry of the copairing: `σ⁻¹ s s'` when `σ ≠ 0`, `s + s'` when `σ = 0`.
pub fn copair_entry(sigma: &Rational, s: &Rational, s_prime: &Rational) -> Rational {
    if sigma.is_zero() {
        s + s_prime
    } else {
        s * s_prime / sigma
    }
}

/// Coproduct of the sources of two morphisms sharing a target, with both
/// coprojections and the copairing built from the two-branch formula.
pub fn coproduct_morphisms(
    s: &StochasticMorphism,
    s_prime: &StochasticMorphism,
) -> Result<CoproductDiagram, FinProbError> {
    if s.target != s_prime.target {
        return Err(FinProbError::TargetMismatch);
    }
    let (left, right) = injections(&s.source, &s_prime.source);
    let object = left.target.clone();
    let (n, m) = (s.source.len(), s_prime.source.len());
    let matrix = s
        .target
        .probs()
        .iter()
        .enumerate()
        .map(|(k, sigma)| {
            let mut row = Vec::with_capacity(n * m);
            for a in 0..n {
                for ap in 0..m {
                    row.push(copair_entry(sigma, &s.matrix[k][a], &s_prime.matrix[k][ap]));
                }
            }
            row
        })
        .collect();
    let copair = Transport { source: object.clone(), target: s.target.clone(), matrix };
    Ok(CoproductDiagram { object, left, right, copair })
}

/// Every column-stochastic matrix with entries in `{0, 1/d, ..., 1}` that
/// makes both coproduct triangles commute. Meant for tiny instances only:
/// the search is `O((d+1)^(#Y·#X·#X'))`.
pub fn copair_grid_search(
    s: &StochasticMorphism,
    s_prime: &StochasticMorphism,
    denominator: u32,
) -> Result<Vec<RatMatrix>, FinProbError> {
    if s.target != s_prime.target {
        return Err(FinProbError::TargetMismatch);
    }
    let (left, right) = injections(&s.source, &s_prime.source);
    let rows = s.target.len();
    let cols = left.target.len();
    // Each column is a point of the discrete simplex with `rows` coordinates.
    let columns = simplex_points(rows, denominator);
    let mut found = Vec::new();
    let mut choice = alloc::vec![0usize; cols];
    loop {
        let matrix: RatMatrix = (0..rows)
            .map(|r| (0..cols).map(|c| columns[choice[c]][r].clone()).collect())
            .collect();
        if mat_mul(&matrix, &left.matrix) == s.matrix && mat_mul(&matrix, &right.matrix) == s_prime.matrix {
            found.push(matrix);
        }
        let mut pos = 0;
        loop {
            if pos == cols {
                return Ok(found);
            }
            choice[pos] += 1;
            if choice[pos] < columns.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn simplex_points(dim: usize, denominator: u32) -> Vec<Vec<Rational>> {
    fn rec(dim: usize, left: u32, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<Rational>>) {
        if prefix.len() + 1 == dim {
            prefix.push(left);
            out.push(prefix.iter().map(|&k| rational::rat(k as i64, d as i64)).collect());
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            rec(dim, left - k, d, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if dim > 0 {
        rec(dim, denominator, denominator, &mut Vec::new(), &mut out);
    }
    out
}

fn check_weight(lambda: &Rational) -> Result<(), FinProbError> {
    if lambda.is_negative() || *lambda > Rational::one() {
        return Err(FinProbError::WeightOutOfRange);
    }
    Ok(())
}

/// `λP ⊕ (1-λ)P'` on the disjoint union `X ⊔ X'`, with labels tagged
/// `"0:x"` and `"1:x'"`. This is not the coproduct.
pub fn weighted_disjoint_union(
    lambda: &Rational,
    p: &FiniteProbability,
    q: &FiniteProbability,
) -> Result<FiniteProbability, FinProbError> {
    check_weight(lambda)?;
    let mu = Rational::one() - lambda;
    let labels = p
        .labels
        .iter()
        .map(|l| format!("0:{l}"))
        .chain(q.labels.iter().map(|l| format!("1:{l}")))
        .collect();
    let probs = p.probs.iter().map(|x| x * lambda).chain(q.probs.iter().map(|x| x * &mu)).collect();
    FiniteProbability::new(labels, probs)
}

/// `λS ⊕ (1-λ)S'` for morphisms sharing a target: the matrix `[S | S']`
/// out of the weighted disjoint union of the sources.
pub fn weighted_direct_sum(
    lambda: &Rational,
    s: &StochasticMorphism,
    s_prime: &StochasticMorphism,
) -> Result<StochasticMorphism, FinProbError> {
    if s.target != s_prime.target {
        return Err(FinProbError::TargetMismatch);
    }
    let source = weighted_disjoint_union(lambda, &s.source, &s_prime.source)?;
    let matrix = s
        .matrix
        .iter()
        .zip(&s_prime.matrix)
        .map(|(a, b)| a.iter().chain(b).cloned().collect())
        .collect();
    validate(matrix, source, s.target.clone())
}

fn mix_probs(lambda: &Rational, p: &[Rational], q: &[Rational]) -> Vec<Rational> {
    let mu = Rational::one() - lambda;
    p.iter().zip(q).map(|(a, b)| a * lambda + b * &mu).collect()
}

/// Convex mixture of two morphisms on a common source set. Each column is
/// the posterior-weighted mixture `(λP_x S_x + (1-λ)P'_x S'_x) / (λP_x + (1-λ)P'_x)`,
/// falling back to `λS_x + (1-λ)S'_x` on null columns, so the result always
/// carries `λP + (1-λ)P'` to `λQ + (1-λ)Q'`.
pub fn convex_mixture(
    lambda: &Rational,
    s: &StochasticMorphism,
    s_prime: &StochasticMorphism,
) -> Result<StochasticMorphism, FinProbError> {
    check_weight(lambda)?;
    if s.source.labels != s_prime.source.labels {
        return Err(FinProbError::SourceMismatch);
    }
    if s.target.labels != s_prime.target.labels {
        return Err(FinProbError::TargetMismatch);
    }
    let mu = Rational::one() - lambda;
    let src = mix_probs(lambda, s.source.probs(), s_prime.source.probs());
    let tgt = mix_probs(lambda, s.target.probs(), s_prime.target.probs());
    let rows = s.target.len();
    let mut matrix = alloc::vec![alloc::vec![Rational::zero(); src.len()]; rows];
    for x in 0..src.len() {
        let wa = lambda * &s.source.probs[x];
        let wb = &mu * &s_prime.source.probs[x];
        for (y, row) in matrix.iter_mut().enumerate() {
            row[x] = if src[x].is_zero() {
                lambda * &s.matrix[y][x] + &mu * &s_prime.matrix[y][x]
            } else {
                (&wa * &s.matrix[y][x] + &wb * &s_prime.matrix[y][x]) / &src[x]
            };
        }
    }
    let source = FiniteProbability::new(s.source.labels.clone(), src)?;
    let target = FiniteProbability::new(s.target.labels.clone(), tgt)?;
    validate(matrix, source, target)
}
