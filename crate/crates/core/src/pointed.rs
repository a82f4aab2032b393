//! Finite pointed sets and pointed maps.
//!
//! A pointed set is identified with `{0, .., size-1}` and a basepoint index.
//! Wedges keep the left summand's elements in place and append the
//! non-base elements of the right summand; smashes put the basepoint at 0
//! followed by non-base pairs in row-major order.

use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointedError {
    #[error("pointed set must be non-empty with basepoint in range (size {size}, base {base})")]
    InvalidSet { size: usize, base: usize },
    #[error("map table has {found} entries for a source of size {expected}")]
    TableLength { expected: usize, found: usize },
    #[error("map entry {index} = {value} is out of range")]
    EntryOutOfRange { index: usize, value: usize },
    #[error("map does not send basepoint to basepoint")]
    BasepointNotPreserved,
    #[error("maps are not composable")]
    NotComposable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointedSet {
    size: usize,
    base: usize,
}

impl PointedSet {
    pub fn new(size: usize, base: usize) -> Result<Self, PointedError> {
        if size == 0 || base >= size {
            return Err(PointedError::InvalidSet { size, base });
        }
        Ok(Self { size, base })
    }

    /// The one-point set, the zero object.
    pub fn point() -> Self {
        Self { size: 1, base: 0 }
    }

    /// `S⁰`, the unit for the smash product.
    pub fn two_point() -> Self {
        Self { size: 2, base: 0 }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// Number of non-base points.
    pub fn reduced_size(&self) -> usize {
        self.size - 1
    }

    fn non_base(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&x| x != self.base)
    }

    fn rank_non_base(&self, x: usize) -> usize {
        if x > self.base {
            x - 1
        } else {
            x
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointedMap {
    source: PointedSet,
    target: PointedSet,
    table: Vec<usize>,
}

impl PointedMap {
    pub fn new(source: PointedSet, target: PointedSet, table: Vec<usize>) -> Result<Self, PointedError> {
        if table.len() != source.size {
            return Err(PointedError::TableLength { expected: source.size, found: table.len() });
        }
        if let Some((index, &value)) = table.iter().enumerate().find(|(_, &v)| v >= target.size) {
            return Err(PointedError::EntryOutOfRange { index, value });
        }
        if table[source.base] != target.base {
            return Err(PointedError::BasepointNotPreserved);
        }
        Ok(Self { source, target, table })
    }

    pub fn identity(x: PointedSet) -> Self {
        Self { source: x, target: x, table: (0..x.size).collect() }
    }

    /// Sends everything to the basepoint.
    pub fn constant(source: PointedSet, target: PointedSet) -> Self {
        Self { source, target, table: alloc::vec![target.base; source.size] }
    }

    pub fn source(&self) -> PointedSet {
        self.source
    }

    pub fn target(&self) -> PointedSet {
        self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &PointedMap) -> Result<PointedMap, PointedError> {
        if first.target != self.source {
            return Err(PointedError::NotComposable);
        }
        Ok(PointedMap {
            source: first.source,
            target: self.target,
            table: first.table.iter().map(|&x| self.table[x]).collect(),
        })
    }

    pub fn is_bijective(&self) -> bool {
        if self.source.size != self.target.size {
            return false;
        }
        let mut hit = alloc::vec![false; self.target.size];
        for &y in &self.table {
            if core::mem::replace(&mut hit[y], true) {
                return false;
            }
        }
        true
    }
}

/// All pointed maps between two pointed sets, in lexicographic table order.
pub fn all_maps(source: PointedSet, target: PointedSet) -> Vec<PointedMap> {
    let free: Vec<usize> = source.non_base().collect();
    let mut out = Vec::new();
    let mut digits = alloc::vec![0usize; free.len()];
    loop {
        let mut table = alloc::vec![target.base; source.size];
        for (slot, &x) in free.iter().enumerate() {
            table[x] = digits[slot];
        }
        out.push(PointedMap { source, target, table });
        let mut pos = free.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < target.size {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// `X ∨ Y` together with the two inclusions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wedge {
    pub object: PointedSet,
    pub left: PointedMap,
    pub right: PointedMap,
}

pub fn wedge(x: PointedSet, y: PointedSet) -> Wedge {
    let object = PointedSet { size: x.size + y.size - 1, base: x.base };
    let left = PointedMap { source: x, target: object, table: (0..x.size).collect() };
    let right_table = (0..y.size)
        .map(|e| if e == y.base { x.base } else { x.size + y.rank_non_base(e) })
        .collect();
    let right = PointedMap { source: y, target: object, table: right_table };
    Wedge { object, left, right }
}

/// The unique map `X ∨ Y → Z` restricting to `f` and `g`.
pub fn copair(f: &PointedMap, g: &PointedMap) -> Result<PointedMap, PointedError> {
    if f.target != g.target {
        return Err(PointedError::NotComposable);
    }
    let w = wedge(f.source, g.source);
    let mut table = f.table.clone();
    table.extend(g.source.non_base().map(|e| g.table[e]));
    Ok(PointedMap { source: w.object, target: f.target, table })
}

/// `f ∨ g : X ∨ Y → X' ∨ Y'`.
pub fn wedge_maps(f: &PointedMap, g: &PointedMap) -> PointedMap {
    let w = wedge(f.target, g.target);
    let left = w.left.after(f).expect("wedge inclusion composes");
    let right = w.right.after(g).expect("wedge inclusion composes");
    copair(&left, &right).expect("shared target")
}

/// `X ∧ Y`: size `(#X-1)(#Y-1)+1`, basepoint 0.
pub fn smash(x: PointedSet, y: PointedSet) -> PointedSet {
    PointedSet { size: x.reduced_size() * y.reduced_size() + 1, base: 0 }
}

/// Index of the class of `(a, b)` in `X ∧ Y`.
pub fn smash_index(x: PointedSet, y: PointedSet, a: usize, b: usize) -> usize {
    if a == x.base || b == y.base {
        0
    } else {
        1 + x.rank_non_base(a) * y.reduced_size() + y.rank_non_base(b)
    }
}
