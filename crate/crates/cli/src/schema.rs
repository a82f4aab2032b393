//! Strict JSON input formats. Rationals are strings `"p/q"` or `"p"`;
//! JSON numbers are refused wherever a rational is expected. Complex
//! entries are `{"re": .., "im": ..}`. Unknown fields are rejected.

use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;
use stochgamma_core::cubical::{self, TruncatedCubicalSet};
use stochgamma_core::fincat::{FinCatError, FiniteCategory, MorphismSpec};
use stochgamma_core::finprob::{self, FinProbError, FiniteProbability, StochasticMorphism};
use stochgamma_core::linalg::{self, CMatrix};
use stochgamma_core::quantum::{ExactComplex, LinearMap, QuantumError};
use stochgamma_core::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct Rat(pub Rational);

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct RatVisitor;

        impl Visitor<'_> for RatVisitor {
            type Value = Rat;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational as a string \"p/q\"")
            }

            fn visit_str<E: de::Error>(self, s: &str) -> Result<Rat, E> {
                rational::parse_rational(s)
                    .map(Rat)
                    .ok_or_else(|| E::invalid_value(de::Unexpected::Str(s), &self))
            }
        }

        d.deserialize_str(RatVisitor)
    }
}

pub fn rats(v: Vec<Rat>) -> Vec<Rational> {
    v.into_iter().map(|r| r.0).collect()
}

pub fn rat_matrix(m: Vec<Vec<Rat>>) -> Vec<Vec<Rational>> {
    m.into_iter().map(rats).collect()
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CNum {
    pub re: f64,
    pub im: f64,
}

pub fn cmatrix(rows: &[Vec<CNum>]) -> Result<CMatrix, QuantumError> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(QuantumError::DimensionMismatch);
    }
    Ok(CMatrix::from_fn(n, m, |i, j| linalg::c(rows[i][j].re, rows[i][j].im)))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactCNum {
    pub re: Rat,
    pub im: Rat,
}

impl ExactCNum {
    pub fn value(&self) -> ExactComplex {
        ExactComplex::new(self.re.0.clone(), self.im.0.clone())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FpInput {
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    pub probs: Vec<Rat>,
}

impl FpInput {
    pub fn build(self) -> Result<FiniteProbability, FinProbError> {
        let probs = rats(self.probs);
        match self.labels {
            Some(labels) => FiniteProbability::new(labels, probs),
            None => FiniteProbability::from_probs(probs),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismInput {
    pub source: FpInput,
    pub target: FpInput,
    pub matrix: Vec<Vec<Rat>>,
}

impl MorphismInput {
    pub fn build(self) -> Result<StochasticMorphism, FinProbError> {
        finprob::validate(rat_matrix(self.matrix), self.source.build()?, self.target.build()?)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepInput {
    pub target: FpInput,
    pub matrix: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineInput {
    pub source: FpInput,
    pub steps: Vec<StepInput>,
}

impl PipelineInput {
    pub fn build(self) -> Result<Vec<StochasticMorphism>, FinProbError> {
        let mut at = self.source.build()?;
        let mut out = Vec::with_capacity(self.steps.len());
        for step in self.steps {
            let target = step.target.build()?;
            let s = finprob::validate(rat_matrix(step.matrix), at, target)?;
            at = s.target().clone();
            out.push(s);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoproductInput {
    pub left: MorphismInput,
    pub right: MorphismInput,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpecInput {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SumInput {
    pub a: usize,
    pub b: usize,
    pub object: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryInput {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismSpecInput>,
    pub identities: Vec<usize>,
    /// `compose[g][f]` is `g ∘ f`, or null when not composable.
    pub compose: Vec<Vec<Option<usize>>>,
    #[serde(default)]
    pub zero: Option<usize>,
    #[serde(default)]
    pub sums: Vec<SumInput>,
}

impl CategoryInput {
    pub fn build(self) -> Result<FiniteCategory, FinCatError> {
        let morphisms =
            self.morphisms.into_iter().map(|m| MorphismSpec { name: m.name, source: m.source, target: m.target }).collect();
        let mut c = FiniteCategory::new(self.objects, morphisms, self.identities, self.compose)?;
        if let Some(z) = self.zero {
            c = c.with_zero(z)?;
        }
        for s in self.sums {
            c = c.with_sum(s.a, s.b, (s.object, s.left, s.right))?;
        }
        Ok(c)
    }
}

/// Built-in categories: `terminal`, `discrete:N`, `cyclic:N`, `pointed:N`.
pub fn builtin_category(name: &str) -> Option<FiniteCategory> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a.parse::<usize>().ok()?)),
        None => (name, None),
    };
    match (head, arg) {
        ("terminal", None) => Some(FiniteCategory::terminal()),
        ("discrete", Some(n)) if n > 0 => Some(FiniteCategory::discrete(n)),
        ("cyclic", Some(n)) if n > 0 => Some(FiniteCategory::cyclic_group(n)),
        ("pointed", Some(n)) if (1..=3).contains(&n) => Some(FiniteCategory::pointed_sets(n)),
        _ => None,
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelInput {
    #[serde(default)]
    pub dims: Option<[usize; 2]>,
    #[serde(default)]
    pub choi: Option<Vec<Vec<CNum>>>,
    #[serde(default)]
    pub kraus: Option<Vec<Vec<Vec<CNum>>>>,
}

impl ChannelInput {
    /// Exactly one of `choi` (with `dims`) and `kraus` must be present.
    pub fn build(&self) -> Result<LinearMap, QuantumError> {
        match (&self.choi, &self.kraus) {
            (Some(choi), None) => {
                let [din, dout] = self.dims.ok_or(QuantumError::DimensionMismatch)?;
                LinearMap::from_choi(din, dout, cmatrix(choi)?)
            }
            (None, Some(kraus)) => {
                let ops = kraus.iter().map(|k| cmatrix(k)).collect::<Result<Vec<_>, _>>()?;
                let map = LinearMap::from_kraus(&ops)?;
                match self.dims {
                    Some(d) if d != [map.dims().0, map.dims().1] => Err(QuantumError::DimensionMismatch),
                    _ => Ok(map),
                }
            }
            _ => Err(QuantumError::DimensionMismatch),
        }
    }
}

/// The `kind` tag of a `validate` input, read before the full parse so that
/// parse errors keep their line and column.
#[derive(Debug, Clone, Deserialize)]
pub struct KindTag {
    pub kind: String,
}

// One struct per kind, each carrying the tag itself, because serde's
// internally tagged enums and `flatten` both buffer the input and lose
// error positions.

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FpKind {
    pub kind: String,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    pub probs: Vec<Rat>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismKind {
    pub kind: String,
    pub source: FpInput,
    pub target: FpInput,
    pub matrix: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityKind {
    pub kind: String,
    pub matrix: Vec<Vec<CNum>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelKind {
    pub kind: String,
    #[serde(default)]
    pub dims: Option<[usize; 2]>,
    #[serde(default)]
    pub choi: Option<Vec<Vec<CNum>>>,
    #[serde(default)]
    pub kraus: Option<Vec<Vec<Vec<CNum>>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianKind {
    pub kind: String,
    pub matrix: Vec<Vec<CNum>>,
    pub delta: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryKind {
    pub kind: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismSpecInput>,
    pub identities: Vec<usize>,
    pub compose: Vec<Vec<Option<usize>>>,
    #[serde(default)]
    pub zero: Option<usize>,
    #[serde(default)]
    pub sums: Vec<SumInput>,
}

impl From<CategoryKind> for CategoryInput {
    fn from(c: CategoryKind) -> Self {
        Self {
            objects: c.objects,
            morphisms: c.morphisms,
            identities: c.identities,
            compose: c.compose,
            zero: c.zero,
            sums: c.sums,
        }
    }
}

pub const KINDS: [&str; 6] = ["finite-probability", "morphism", "density", "channel", "hamiltonian", "category"];

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummingInput {
    #[serde(default)]
    pub lambda: Option<Vec<Rat>>,
    #[serde(default)]
    pub alpha: Option<Vec<Rat>>,
    #[serde(default)]
    pub theta: Option<Vec<ExactCNum>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapCheckInput {
    pub channel: ChannelInput,
    pub h: Vec<Vec<CNum>>,
    pub h_prime: Vec<Vec<CNum>>,
    pub beta: f64,
    pub delta: f64,
}

/// Level-by-level nerve data for a category.
pub fn nerve_of(c: &FiniteCategory, nmax: usize, bound: u64) -> Result<TruncatedCubicalSet, cubical::CubicalError> {
    cubical::cubical_nerve(c, nmax, bound).map(|n| n.complex)
}
