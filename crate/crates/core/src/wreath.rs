//! The wreath construction: formal convex combinations of objects of a
//! category with a zero object and sums, with morphisms given by a
//! stochastic matrix and weighted families of underlying morphisms.
//!
//! Instantiated at [`PointedSets`](crate::category::PointedSets) it
//! reproduces [`probcat`](crate::probcat); at [`Trivial`](crate::category::Trivial)
//! it reproduces finite probabilities.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::category::{Category, Sum, ZeroSum};
use crate::finprob::{self, FiniteProbability};
use crate::probcat::add_weight;
use crate::rational::{self, RatMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("interface violation: {0}")]
pub struct InterfaceViolation(pub String);

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PcObject<O> {
    pub terms: Vec<(Rational, O)>,
}

impl<O> PcObject<O> {
    /// `None` unless weights are non-negative and sum to one.
    pub fn new(terms: Vec<(Rational, O)>) -> Option<Self> {
        let ok = !terms.is_empty()
            && terms.iter().all(|(w, _)| !w.is_negative())
            && rational::sum(terms.iter().map(|(w, _)| w)).is_one();
        ok.then_some(Self { terms })
    }

    pub fn weights(&self) -> Vec<Rational> {
        self.terms.iter().map(|(w, _)| w.clone()).collect()
    }

    pub fn forget(&self) -> FiniteProbability {
        FiniteProbability::from_probs(self.weights()).expect("weights validated on construction")
    }
}

/// Families are keyed `(target term, source term)`; zero weights and empty
/// families are never stored. The matrix is column-stochastic for every
/// morphism except copairings, see [`PcMorphism::is_stochastic`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PcMorphism<O: Ord, M: Ord> {
    pub source: PcObject<O>,
    pub target: PcObject<O>,
    pub matrix: RatMatrix,
    pub families: BTreeMap<(usize, usize), BTreeMap<M, Rational>>,
}

impl<O: Ord + Clone, M: Ord + Clone> PcMorphism<O, M> {
    pub fn is_stochastic(&self) -> bool {
        finprob::validate(self.matrix.clone(), self.source.forget(), self.target.forget()).is_ok()
    }

    /// Every family sums to its matrix entry.
    pub fn weights_consistent(&self) -> bool {
        self.matrix.iter().enumerate().all(|(j, row)| {
            row.iter().enumerate().all(|(i, s)| {
                let found = self.families.get(&(j, i)).map_or_else(Rational::zero, |f| rational::sum(f.values()));
                &found == s
            })
        })
    }
}

fn canonical<M: Ord>(
    families: BTreeMap<(usize, usize), BTreeMap<M, Rational>>,
) -> BTreeMap<(usize, usize), BTreeMap<M, Rational>> {
    families
        .into_iter()
        .map(|(k, f)| (k, f.into_iter().filter(|(_, w)| !w.is_zero()).collect::<BTreeMap<_, _>>()))
        .filter(|(_, f)| !f.is_empty())
        .collect()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Wreath<C> {
    pub base: C,
}

/// Builds the wreath category after probing the sum identities of `base`
/// on every ordered pair of `probes`.
pub fn wreath_pc<C: ZeroSum>(base: C, probes: &[C::Object]) -> Result<Wreath<C>, InterfaceViolation> {
    let zero = base.zero();
    let zid = base.identity(&zero);
    if base.compose(&base.to_zero(&zero), &base.from_zero(&zero)).as_ref() != Some(&zid) {
        return Err(InterfaceViolation("zero object endomorphism is not the identity".into()));
    }
    for a in probes {
        for b in probes {
            let s = base
                .sum(a, b)
                .ok_or_else(|| InterfaceViolation(alloc::format!("no sum for {a:?}, {b:?}")))?;
            let id = base.identity(&s.object);
            let cp = base
                .copair(&s.left, &s.right)
                .ok_or_else(|| InterfaceViolation(alloc::format!("no copairing out of {:?}", s.object)))?;
            if cp != id {
                return Err(InterfaceViolation(alloc::format!("copair of coprojections is not 1 on {:?}", s.object)));
            }
            let fz = base.compose(&base.from_zero(&s.object), &base.to_zero(a)).expect("typed");
            let gz = base.compose(&base.from_zero(&s.object), &base.to_zero(b)).expect("typed");
            let cz = base
                .copair(&fz, &gz)
                .ok_or_else(|| InterfaceViolation(alloc::format!("no copairing of zero maps on {a:?}, {b:?}")))?;
            if base.compose(&cz, &s.left).as_ref() != Some(&fz) || base.compose(&cz, &s.right).as_ref() != Some(&gz) {
                return Err(InterfaceViolation(alloc::format!("copair triangles fail on {a:?}, {b:?}")));
            }
        }
    }
    Ok(Wreath { base })
}

impl<C: ZeroSum> Wreath<C> {
    fn zero_map(&self, from: &C::Object, to: &C::Object) -> C::Morphism {
        self.base.compose(&self.base.from_zero(to), &self.base.to_zero(from)).expect("zero maps compose")
    }

    fn family_or_placeholder(
        &self,
        phi: &PcMorphism<C::Object, C::Morphism>,
        k: usize,
        a: usize,
    ) -> Vec<(C::Morphism, Rational)> {
        match phi.families.get(&(k, a)) {
            Some(f) => f.iter().map(|(m, w)| (m.clone(), w.clone())).collect(),
            None => alloc::vec![(self.zero_map(&phi.source.terms[a].1, &phi.target.terms[k].1), Rational::zero())],
        }
    }

    /// A single object with weight one, and single maps with weight one.
    pub fn single(&self, x: C::Object) -> PcObject<C::Object> {
        PcObject { terms: alloc::vec![(Rational::one(), x)] }
    }

    pub fn deterministic(&self, f: C::Morphism) -> PcMorphism<C::Object, C::Morphism> {
        let mut fam = BTreeMap::new();
        fam.insert(f.clone(), Rational::one());
        let mut families = BTreeMap::new();
        families.insert((0, 0), fam);
        PcMorphism {
            source: self.single(self.base.source(&f)),
            target: self.single(self.base.target(&f)),
            matrix: alloc::vec![alloc::vec![Rational::one()]],
            families,
        }
    }
}

impl<C: ZeroSum> Category for Wreath<C> {
    type Object = PcObject<C::Object>;
    type Morphism = PcMorphism<C::Object, C::Morphism>;

    fn source(&self, f: &Self::Morphism) -> Self::Object {
        f.source.clone()
    }

    fn target(&self, f: &Self::Morphism) -> Self::Object {
        f.target.clone()
    }

    fn identity(&self, x: &Self::Object) -> Self::Morphism {
        let families = x
            .terms
            .iter()
            .enumerate()
            .map(|(i, (_, o))| {
                let mut f = BTreeMap::new();
                f.insert(self.base.identity(o), Rational::one());
                ((i, i), f)
            })
            .collect();
        PcMorphism { source: x.clone(), target: x.clone(), matrix: rational::identity_matrix(x.terms.len()), families }
    }

    fn compose(&self, g: &Self::Morphism, f: &Self::Morphism) -> Option<Self::Morphism> {
        if f.target != g.source {
            return None;
        }
        let mut families: BTreeMap<(usize, usize), BTreeMap<C::Morphism, Rational>> = BTreeMap::new();
        for (&(k, j), outer) in &g.families {
            for (&(_, i), inner) in f.families.range((j, 0)..(j + 1, 0)) {
                let slot = families.entry((k, i)).or_default();
                for (gm, wg) in outer {
                    for (fm, wf) in inner {
                        add_weight(slot, self.base.compose(gm, fm)?, wg * wf);
                    }
                }
            }
        }
        Some(PcMorphism {
            source: f.source.clone(),
            target: g.target.clone(),
            matrix: rational::mat_mul(&g.matrix, &f.matrix),
            families: canonical(families),
        })
    }
}

impl<C: ZeroSum> ZeroSum for Wreath<C> {
    fn zero(&self) -> Self::Object {
        self.single(self.base.zero())
    }

    fn to_zero(&self, x: &Self::Object) -> Self::Morphism {
        let z = self.base.zero();
        let families = x
            .terms
            .iter()
            .enumerate()
            .map(|(i, (_, o))| {
                let mut f = BTreeMap::new();
                f.insert(self.base.to_zero(o), Rational::one());
                ((0, i), f)
            })
            .collect();
        PcMorphism {
            source: x.clone(),
            target: self.single(z),
            matrix: alloc::vec![alloc::vec![Rational::one(); x.terms.len()]],
            families,
        }
    }

    fn from_zero(&self, x: &Self::Object) -> Self::Morphism {
        let families = x
            .terms
            .iter()
            .enumerate()
            .map(|(j, (w, o))| {
                let mut f = BTreeMap::new();
                f.insert(self.base.from_zero(o), w.clone());
                ((j, 0), f)
            })
            .collect();
        PcMorphism {
            source: self.zero(),
            target: x.clone(),
            matrix: x.terms.iter().map(|(w, _)| alloc::vec![w.clone()]).collect(),
            families: canonical(families),
        }
    }

    fn sum(&self, a: &Self::Object, b: &Self::Object) -> Option<Sum<Self::Object, Self::Morphism>> {
        let (n, m) = (a.terms.len(), b.terms.len());
        let mut terms = Vec::with_capacity(n * m);
        let mut left = BTreeMap::new();
        let mut right = BTreeMap::new();
        for (i, (wa, oa)) in a.terms.iter().enumerate() {
            for (j, (wb, ob)) in b.terms.iter().enumerate() {
                let s = self.base.sum(oa, ob)?;
                let row = finprob::pair_index(i, j, m);
                terms.push((wa * wb, s.object));
                let mut fl = BTreeMap::new();
                add_weight(&mut fl, s.left, wb.clone());
                left.insert((row, i), fl);
                let mut fr = BTreeMap::new();
                add_weight(&mut fr, s.right, wa.clone());
                right.insert((row, j), fr);
            }
        }
        let object = PcObject { terms };
        let (inj_l, inj_r) = finprob::injections(&a.forget(), &b.forget());
        Some(Sum {
            left: PcMorphism {
                source: a.clone(),
                target: object.clone(),
                matrix: inj_l.matrix().clone(),
                families: canonical(left),
            },
            right: PcMorphism {
                source: b.clone(),
                target: object.clone(),
                matrix: inj_r.matrix().clone(),
                families: canonical(right),
            },
            object,
        })
    }

    /// Two-branch copairing. The matrix need not be column-stochastic.
    fn copair(&self, f: &Self::Morphism, g: &Self::Morphism) -> Option<Self::Morphism> {
        if f.target != g.target {
            return None;
        }
        let sum = self.sum(&f.source, &g.source)?;
        let (n, m) = (f.source.terms.len(), g.source.terms.len());
        let mut matrix = Vec::with_capacity(f.target.terms.len());
        let mut families = BTreeMap::new();
        for (k, (sigma, _)) in f.target.terms.iter().enumerate() {
            let mut row = Vec::with_capacity(n * m);
            for a in 0..n {
                let fam = self.family_or_placeholder(f, k, a);
                for ap in 0..m {
                    row.push(finprob::copair_entry(sigma, &f.matrix[k][a], &g.matrix[k][ap]));
                    let fam_p = self.family_or_placeholder(g, k, ap);
                    let size_n = Rational::from_integer((fam.len() as i64).into());
                    let size_m = Rational::from_integer((fam_p.len() as i64).into());
                    let slot: &mut BTreeMap<C::Morphism, Rational> =
                        families.entry((k, finprob::pair_index(a, ap, m))).or_default();
                    for (fm, mu) in &fam {
                        for (gm, nu) in &fam_p {
                            let w = if sigma.is_zero() { mu / &size_m + nu / &size_n } else { mu * nu / sigma };
                            add_weight(slot, self.base.copair(fm, gm)?, w);
                        }
                    }
                }
            }
            matrix.push(row);
        }
        Some(PcMorphism { source: sum.object, target: f.target.clone(), matrix, families: canonical(families) })
    }
}
