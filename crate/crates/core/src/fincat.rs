//! Finite categories given by explicit composition tables.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::category::{Category, Sum, ZeroSum};
use crate::pointed::{self, PointedMap, PointedSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinCatError {
    #[error("object index {0} out of range")]
    UnknownObject(usize),
    #[error("morphism index {0} out of range")]
    UnknownMorphism(usize),
    #[error("composition table has the wrong shape")]
    TableShape,
    #[error("identity of object {0} is not an endomorphism of it")]
    BadIdentity(usize),
    #[error("composite {g}∘{f} is defined exactly when composable, with the right ends")]
    BadComposite { g: usize, f: usize },
    #[error("identity law fails for morphism {0}")]
    IdentityLaw(usize),
    #[error("associativity fails on ({h}, {g}, {f})")]
    Associativity { h: usize, g: usize, f: usize },
    #[error("zero object {0} does not have exactly one morphism to and from every object")]
    NotZero(usize),
    #[error("sum of objects {a} and {b} has ill-typed coprojections")]
    BadSum { a: usize, b: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismSpec {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// Sum of two objects: the object and its two coprojections.
pub type SumEntry = (usize, usize, usize);

/// Objects and morphisms are indices. `compose[g][f]` is `g ∘ f` when
/// `target f = source g`, otherwise `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<MorphismSpec>,
    identities: Vec<usize>,
    compose: Vec<Vec<Option<usize>>>,
    zero: Option<usize>,
    sums: BTreeMap<(usize, usize), SumEntry>,
}

impl FiniteCategory {
    /// Checks the identity and associativity laws on the whole table.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<MorphismSpec>,
        identities: Vec<usize>,
        compose: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, FinCatError> {
        let (no, nm) = (objects.len(), morphisms.len());
        for m in &morphisms {
            for o in [m.source, m.target] {
                if o >= no {
                    return Err(FinCatError::UnknownObject(o));
                }
            }
        }
        if identities.len() != no || compose.len() != nm || compose.iter().any(|r| r.len() != nm) {
            return Err(FinCatError::TableShape);
        }
        for (o, &id) in identities.iter().enumerate() {
            if id >= nm {
                return Err(FinCatError::UnknownMorphism(id));
            }
            if morphisms[id].source != o || morphisms[id].target != o {
                return Err(FinCatError::BadIdentity(o));
            }
        }
        for g in 0..nm {
            for f in 0..nm {
                let composable = morphisms[f].target == morphisms[g].source;
                match compose[g][f] {
                    Some(h) if h >= nm => return Err(FinCatError::UnknownMorphism(h)),
                    Some(h)
                        if composable
                            && morphisms[h].source == morphisms[f].source
                            && morphisms[h].target == morphisms[g].target => {}
                    None if !composable => {}
                    _ => return Err(FinCatError::BadComposite { g, f }),
                }
            }
        }
        let cat = Self { objects, morphisms, identities, compose, zero: None, sums: BTreeMap::new() };
        for f in 0..nm {
            let (s, t) = (cat.morphisms[f].source, cat.morphisms[f].target);
            if cat.compose[f][cat.identities[s]] != Some(f) || cat.compose[cat.identities[t]][f] != Some(f) {
                return Err(FinCatError::IdentityLaw(f));
            }
        }
        for h in 0..nm {
            for g in 0..nm {
                let Some(hg) = cat.compose[h][g] else { continue };
                for f in 0..nm {
                    let Some(gf) = cat.compose[g][f] else { continue };
                    if cat.compose[hg][f] != cat.compose[h][gf] {
                        return Err(FinCatError::Associativity { h, g, f });
                    }
                }
            }
        }
        Ok(cat)
    }

    /// Declares a zero object after checking that hom-sets to and from it
    /// are singletons.
    pub fn with_zero(mut self, zero: usize) -> Result<Self, FinCatError> {
        if zero >= self.objects.len() {
            return Err(FinCatError::UnknownObject(zero));
        }
        for o in 0..self.objects.len() {
            if self.hom(o, zero).len() != 1 || self.hom(zero, o).len() != 1 {
                return Err(FinCatError::NotZero(zero));
            }
        }
        self.zero = Some(zero);
        Ok(self)
    }

    /// Declares the sum of `a` and `b`. Only typing is checked here; the
    /// universal property is probed by [`crate::wreath::wreath_pc`] and
    /// recovered by [`ZeroSum::copair`].
    pub fn with_sum(mut self, a: usize, b: usize, entry: SumEntry) -> Result<Self, FinCatError> {
        let (s, l, r) = entry;
        let ok = s < self.objects.len()
            && l < self.morphisms.len()
            && r < self.morphisms.len()
            && self.morphisms[l].source == a
            && self.morphisms[l].target == s
            && self.morphisms[r].source == b
            && self.morphisms[r].target == s;
        if !ok {
            return Err(FinCatError::BadSum { a, b });
        }
        self.sums.insert((a, b), entry);
        Ok(self)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[MorphismSpec] {
        &self.morphisms
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    pub fn zero_object(&self) -> Option<usize> {
        self.zero
    }

    pub fn sums(&self) -> &BTreeMap<(usize, usize), SumEntry> {
        &self.sums
    }

    pub fn composite(&self, g: usize, f: usize) -> Option<usize> {
        self.compose[g][f]
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&m| self.morphisms[m].source == a && self.morphisms[m].target == b).collect()
    }

    pub fn is_iso(&self, f: usize) -> bool {
        let m = &self.morphisms[f];
        self.hom(m.target, m.source).into_iter().any(|g| {
            self.compose[g][f] == Some(self.identities[m.source]) && self.compose[f][g] == Some(self.identities[m.target])
        })
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let m = &self.morphisms[f];
        self.hom(m.target, m.source).into_iter().find(|&g| {
            self.compose[g][f] == Some(self.identities[m.source]) && self.compose[f][g] == Some(self.identities[m.target])
        })
    }

    /// One object, one morphism.
    pub fn terminal() -> Self {
        Self::discrete(1).with_zero(0).expect("one object").with_sum(0, 0, (0, 0, 0)).expect("typed")
    }

    /// `n` objects with identities only.
    pub fn discrete(n: usize) -> Self {
        let objects = (0..n).map(|i| format!("o{i}")).collect();
        let morphisms = (0..n).map(|i| MorphismSpec { name: format!("id{i}"), source: i, target: i }).collect();
        let compose = (0..n).map(|g| (0..n).map(|f| (g == f).then_some(g)).collect()).collect();
        Self::new(objects, morphisms, (0..n).collect(), compose).expect("discrete category")
    }

    /// The cyclic group of order `n` as a one-object category.
    pub fn cyclic_group(n: usize) -> Self {
        let morphisms = (0..n).map(|k| MorphismSpec { name: format!("g{k}"), source: 0, target: 0 }).collect();
        let compose = (0..n).map(|g| (0..n).map(|f| Some((g + f) % n)).collect()).collect();
        Self::new(alloc::vec![String::from("*")], morphisms, alloc::vec![0], compose).expect("group table")
    }

    /// Pointed sets `{0, .., k-1}` based at 0 for `1 ≤ k ≤ max_size`, with
    /// every pointed map, the one-point set as zero and wedges as sums where
    /// they fit.
    pub fn pointed_sets(max_size: usize) -> Self {
        let sets: Vec<PointedSet> = (1..=max_size).map(|k| PointedSet::new(k, 0).expect("k ≥ 1")).collect();
        let mut maps: Vec<PointedMap> = Vec::new();
        let mut specs = Vec::new();
        for (i, &a) in sets.iter().enumerate() {
            for (j, &b) in sets.iter().enumerate() {
                for m in pointed::all_maps(a, b) {
                    specs.push(MorphismSpec { name: format!("{:?}", m.table()), source: i, target: j });
                    maps.push(m);
                }
            }
        }
        let index: BTreeMap<PointedMap, usize> = maps.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let compose = maps
            .iter()
            .map(|g| maps.iter().map(|f| g.after(f).ok().map(|h| index[&h])).collect())
            .collect();
        let identities = sets.iter().map(|&x| index[&PointedMap::identity(x)]).collect();
        let objects = sets.iter().map(|x| format!("{}", x.size())).collect();
        let mut cat = Self::new(objects, specs, identities, compose).expect("pointed maps form a category");
        cat = cat.with_zero(0).expect("one-point set is zero");
        for (i, &a) in sets.iter().enumerate() {
            for (j, &b) in sets.iter().enumerate() {
                let w = pointed::wedge(a, b);
                if w.object.size() <= max_size {
                    let s = w.object.size() - 1;
                    cat = cat.with_sum(i, j, (s, index[&w.left], index[&w.right])).expect("typed");
                }
            }
        }
        cat
    }

    /// Structure-preserving check of an assignment `C → D` on objects and
    /// morphisms.
    pub fn is_functor(&self, target: &FiniteCategory, on_objects: &[usize], on_morphisms: &[usize]) -> bool {
        let typed = self.morphisms.iter().zip(on_morphisms).all(|(m, &fm)| {
            target.morphisms[fm].source == on_objects[m.source] && target.morphisms[fm].target == on_objects[m.target]
        });
        let ids = (0..self.objects.len()).all(|o| on_morphisms[self.identities[o]] == target.identities[on_objects[o]]);
        let comp = (0..self.morphisms.len()).all(|g| {
            (0..self.morphisms.len()).all(|f| match self.compose[g][f] {
                Some(h) => target.compose[on_morphisms[g]][on_morphisms[f]] == Some(on_morphisms[h]),
                None => true,
            })
        });
        typed && ids && comp
    }
}

impl Category for FiniteCategory {
    type Object = usize;
    type Morphism = usize;

    fn source(&self, f: &usize) -> usize {
        self.morphisms[*f].source
    }

    fn target(&self, f: &usize) -> usize {
        self.morphisms[*f].target
    }

    fn identity(&self, x: &usize) -> usize {
        self.identities[*x]
    }

    fn compose(&self, g: &usize, f: &usize) -> Option<usize> {
        self.compose[*g][*f]
    }
}

/// Panics when no zero object was declared.
impl ZeroSum for FiniteCategory {
    fn zero(&self) -> usize {
        self.zero.expect("category has no declared zero object")
    }

    fn to_zero(&self, x: &usize) -> usize {
        self.hom(*x, self.zero())[0]
    }

    fn from_zero(&self, x: &usize) -> usize {
        self.hom(self.zero(), *x)[0]
    }

    fn sum(&self, a: &usize, b: &usize) -> Option<Sum<usize, usize>> {
        self.sums.get(&(*a, *b)).map(|&(object, left, right)| Sum { object, left, right })
    }

    /// Unique morphism out of the sum restricting to `f` and `g`, found by
    /// search over the hom-set.
    fn copair(&self, f: &usize, g: &usize) -> Option<usize> {
        let t = self.target(f);
        if self.target(g) != t {
            return None;
        }
        let s = self.sum(&self.source(f), &self.source(g))?;
        let mut hits = self
            .hom(s.object, t)
            .into_iter()
            .filter(|&h| self.compose[h][s.left] == Some(*f) && self.compose[h][s.right] == Some(*g));
        let h = hits.next()?;
        hits.next().is_none().then_some(h)
    }
}
