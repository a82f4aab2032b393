//! A minimal interface for categories with a zero object and binary sums.
//!
//! This is the surface the wreath construction and the summing-functor
//! enumerator are generic over.

use core::fmt::Debug;

use crate::pointed::{self, PointedMap, PointedSet};

pub trait Category {
    type Object: Clone + Ord + Debug;
    type Morphism: Clone + Ord + Debug;

    fn source(&self, f: &Self::Morphism) -> Self::Object;
    fn target(&self, f: &Self::Morphism) -> Self::Object;
    fn identity(&self, x: &Self::Object) -> Self::Morphism;
    /// `g ∘ f`, or `None` when the pair is not composable.
    fn compose(&self, g: &Self::Morphism, f: &Self::Morphism) -> Option<Self::Morphism>;
}

/// Coproduct object with its two coprojections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sum<O, M> {
    pub object: O,
    pub left: M,
    pub right: M,
}

pub trait ZeroSum: Category {
    fn zero(&self) -> Self::Object;
    fn to_zero(&self, x: &Self::Object) -> Self::Morphism;
    #[allow(clippy::wrong_self_convention)]
    fn from_zero(&self, x: &Self::Object) -> Self::Morphism;
    /// `None` when the sum falls outside a truncated category.
    fn sum(&self, a: &Self::Object, b: &Self::Object) -> Option<Sum<Self::Object, Self::Morphism>>;
    /// The morphism out of `sum(source f, source g)` restricting to `f` and `g`.
    fn copair(&self, f: &Self::Morphism, g: &Self::Morphism) -> Option<Self::Morphism>;
}

/// Finite pointed sets with wedge as the sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct PointedSets;

impl Category for PointedSets {
    type Object = PointedSet;
    type Morphism = PointedMap;

    fn source(&self, f: &PointedMap) -> PointedSet {
        f.source()
    }

    fn target(&self, f: &PointedMap) -> PointedSet {
        f.target()
    }

    fn identity(&self, x: &PointedSet) -> PointedMap {
        PointedMap::identity(*x)
    }

    fn compose(&self, g: &PointedMap, f: &PointedMap) -> Option<PointedMap> {
        g.after(f).ok()
    }
}

impl ZeroSum for PointedSets {
    fn zero(&self) -> PointedSet {
        PointedSet::point()
    }

    fn to_zero(&self, x: &PointedSet) -> PointedMap {
        PointedMap::constant(*x, PointedSet::point())
    }

    fn from_zero(&self, x: &PointedSet) -> PointedMap {
        PointedMap::constant(PointedSet::point(), *x)
    }

    fn sum(&self, a: &PointedSet, b: &PointedSet) -> Option<Sum<PointedSet, PointedMap>> {
        let w = pointed::wedge(*a, *b);
        Some(Sum { object: w.object, left: w.left, right: w.right })
    }

    fn copair(&self, f: &PointedMap, g: &PointedMap) -> Option<PointedMap> {
        pointed::copair(f, g).ok()
    }
}

/// The category with one object and one morphism.
#[derive(Debug, Clone, Copy, Default)]
pub struct Trivial;

impl Category for Trivial {
    type Object = ();
    type Morphism = ();

    fn source(&self, _: &()) {}
    fn target(&self, _: &()) {}
    fn identity(&self, _: &()) {}
    fn compose(&self, _: &(), _: &()) -> Option<()> {
        Some(())
    }
}

impl ZeroSum for Trivial {
    fn zero(&self) {}
    fn to_zero(&self, _: &()) {}
    fn from_zero(&self, _: &()) {}
    fn sum(&self, _: &(), _: &()) -> Option<Sum<(), ()>> {
        Some(Sum { object: (), left: (), right: () })
    }
    fn copair(&self, _: &(), _: &()) -> Option<()> {
        Some(())
    }
}
