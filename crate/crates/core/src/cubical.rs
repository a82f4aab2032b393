//! Pointed cubical sets with connections, truncated at a top dimension.
//!
//! Cube maps `I^m → I^n` are stored in normal form: each output coordinate
//! is a constant or the max of a block of input coordinates, blocks ordered
//! and disjoint. A cubical set is contravariant, so a cube map `f` acts on
//! cells by a table `K_n → K_m`. Indices `i` of faces, degeneracies and
//! connections are 1-based as in the usual presentation:
//!
//! * `δ^a_i : I^m → I^{m+1}` inserts `a` at position `i`, acting as the face
//!   `K_{m+1} → K_m`;
//! * `s_i : I^m → I^{m-1}` deletes coordinate `i`, acting as `K_{m-1} → K_m`;
//! * `γ_i : I^m → I^{m-1}` takes `max(t_i, t_{i+1})`, acting as `K_{m-1} → K_m`.
//!
//! Relations are not hard-coded: every pair of words of length at most two
//! with the same composite cube map yields one, so validation checks exactly
//! the identities that hold in the cube category.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::fincat::FiniteCategory;
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubicalError {
    #[error("table shape mismatch: {0}")]
    Shape(String),
    #[error("relation `{relation}` fails on cell {cell} of level {level}: {lhs} ≠ {rhs}")]
    RelationViolated { relation: String, level: usize, cell: usize, lhs: String, rhs: String },
    #[error("structure map {map} does not fix the basepoint at level {level}")]
    BasepointMoved { map: String, level: usize },
    #[error("level {level} needs more than {bound} candidate functors")]
    ExplosionGuard { level: usize, bound: u64 },
    #[error("category has no objects")]
    EmptyCategory,
    #[error("weights must be non-negative and sum to 1")]
    InvalidWeights,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    Face { i: usize, a: u8 },
    Degen { i: usize },
    Conn { i: usize },
}

impl Gen {
    /// Codomain dimension of the cube map with domain `m`.
    fn codomain(self, m: usize) -> usize {
        match self {
            Gen::Face { .. } => m + 1,
            Gen::Degen { .. } | Gen::Conn { .. } => m - 1,
        }
    }

    fn kind(self) -> &'static str {
        match self {
            Gen::Face { .. } => "face",
            Gen::Degen { .. } => "degeneracy",
            Gen::Conn { .. } => "connection",
        }
    }

    /// Generators with domain `I^m`.
    fn with_domain(m: usize) -> Vec<Gen> {
        let mut out = Vec::new();
        for i in 1..=m + 1 {
            out.push(Gen::Face { i, a: 0 });
            out.push(Gen::Face { i, a: 1 });
        }
        out.extend((1..=m).map(|i| Gen::Degen { i }));
        out.extend((1..m).map(|i| Gen::Conn { i }));
        out
    }

    pub fn cube_map(self, m: usize) -> CubeMap {
        let coords = match self {
            Gen::Face { i, a } => (0..=m)
                .map(|k| match k.cmp(&(i - 1)) {
                    core::cmp::Ordering::Less => Coord::Max(alloc::vec![k]),
                    core::cmp::Ordering::Equal => Coord::Const(a == 1),
                    core::cmp::Ordering::Greater => Coord::Max(alloc::vec![k - 1]),
                })
                .collect(),
            Gen::Degen { i } => (0..m - 1)
                .map(|k| if k < i - 1 { Coord::Max(alloc::vec![k]) } else { Coord::Max(alloc::vec![k + 1]) })
                .collect(),
            Gen::Conn { i } => (0..m - 1)
                .map(|k| match k.cmp(&(i - 1)) {
                    core::cmp::Ordering::Less => Coord::Max(alloc::vec![k]),
                    core::cmp::Ordering::Equal => Coord::Max(alloc::vec![k, k + 1]),
                    core::cmp::Ordering::Greater => Coord::Max(alloc::vec![k + 1]),
                })
                .collect(),
        };
        CubeMap { dom: m, coords }
    }
}

impl core::fmt::Display for Gen {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Gen::Face { i, a } => write!(f, "δ^{a}_{i}"),
            Gen::Degen { i } => write!(f, "s_{i}"),
            Gen::Conn { i } => write!(f, "γ_{i}"),
        }
    }
}

/// One output coordinate of a cube map; blocks hold 0-based input indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Const(bool),
    Max(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeMap {
    pub dom: usize,
    pub coords: Vec<Coord>,
}

impl CubeMap {
    pub fn identity(n: usize) -> Self {
        Self { dom: n, coords: (0..n).map(|k| Coord::Max(alloc::vec![k])).collect() }
    }

    pub fn codomain(&self) -> usize {
        self.coords.len()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &CubeMap) -> CubeMap {
        debug_assert_eq!(first.codomain(), self.dom);
        let coords = self
            .coords
            .iter()
            .map(|c| match c {
                Coord::Const(b) => Coord::Const(*b),
                Coord::Max(block) => {
                    let mut acc = BTreeSet::new();
                    for &j in block {
                        match &first.coords[j] {
                            Coord::Const(true) => return Coord::Const(true),
                            Coord::Const(false) => {}
                            Coord::Max(inner) => acc.extend(inner.iter().copied()),
                        }
                    }
                    if acc.is_empty() {
                        Coord::Const(false)
                    } else {
                        Coord::Max(acc.into_iter().collect())
                    }
                }
            })
            .collect();
        CubeMap { dom: first.dom, coords }
    }

    /// Evaluates on any totally ordered coordinates with `lo`, `hi` as the
    /// two endpoints.
    pub fn apply<T: Copy + Ord>(&self, t: &[T], lo: T, hi: T) -> Vec<T> {
        self.coords
            .iter()
            .map(|c| match c {
                Coord::Const(b) => {
                    if *b {
                        hi
                    } else {
                        lo
                    }
                }
                Coord::Max(block) => block.iter().map(|&j| t[j]).max().expect("blocks are non-empty"),
            })
            .collect()
    }

    /// Action on vertices of `{0,1}^dom`, encoded as bitmasks with bit `k`
    /// for coordinate `k`.
    pub fn on_vertex(&self, v: usize) -> usize {
        self.coords.iter().enumerate().fold(0, |acc, (k, c)| {
            let bit = match c {
                Coord::Const(b) => *b,
                Coord::Max(block) => block.iter().any(|&j| v >> j & 1 == 1),
            };
            acc | (usize::from(bit) << k)
        })
    }

    pub fn has_constant(&self) -> bool {
        self.coords.iter().any(|c| matches!(c, Coord::Const(_)))
    }

    pub fn is_constant_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == Coord::Const(false))
    }

    /// Every cube map `I^m → I^n` in a fixed order.
    pub fn all(m: usize, n: usize) -> Vec<CubeMap> {
        fn rec(m: usize, n: usize, next: usize, coords: &mut Vec<Coord>, out: &mut Vec<CubeMap>) {
            if coords.len() == n {
                out.push(CubeMap { dom: m, coords: coords.clone() });
                return;
            }
            for b in [false, true] {
                coords.push(Coord::Const(b));
                rec(m, n, next, coords, out);
                coords.pop();
            }
            let free = m - next;
            for mask in 1u32..(1 << free) {
                let block: Vec<usize> = (0..free).filter(|j| mask >> j & 1 == 1).map(|j| next + j).collect();
                let after = block[block.len() - 1] + 1;
                coords.push(Coord::Max(block));
                rec(m, n, after, coords, out);
                coords.pop();
            }
        }
        let mut out = Vec::new();
        rec(m, n, 0, &mut Vec::new(), &mut out);
        out
    }
}

/// A word `g_1 ∘ … ∘ g_k` of generators with domain `dom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    pub dom: usize,
    pub letters: Vec<Gen>,
}

impl Word {
    pub fn codomain(&self) -> usize {
        self.letters.iter().rev().fold(self.dom, |m, g| g.codomain(m))
    }

    pub fn cube_map(&self) -> CubeMap {
        let mut m = self.dom;
        let mut acc = CubeMap::identity(m);
        for g in self.letters.iter().rev() {
            acc = g.cube_map(m).after(&acc);
            m = g.codomain(m);
        }
        acc
    }
}

impl core::fmt::Display for Word {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, g) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, "∘")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub id: String,
    pub lhs: Word,
    pub rhs: Word,
}

const KIND_ORDER: [&str; 6] = [
    "face/face",
    "degeneracy/degeneracy",
    "degeneracy/face",
    "connection/connection",
    "connection/degeneracy",
    "connection/face",
];

fn relation_id(lhs: &Word, rhs: &Word) -> String {
    let kinds: BTreeSet<&str> = lhs.letters.iter().chain(&rhs.letters).map(|g| g.kind()).collect();
    let has = |k| kinds.contains(k);
    let id = if has("connection") {
        if has("face") {
            "connection/face"
        } else if has("degeneracy") {
            "connection/degeneracy"
        } else {
            "connection/connection"
        }
    } else if has("face") && has("degeneracy") {
        "degeneracy/face"
    } else if has("face") {
        "face/face"
    } else {
        "degeneracy/degeneracy"
    };
    String::from(id)
}

/// All identities between words of length at most two whose intermediate
/// dimensions stay within `0..=top`, ordered by relation kind.
pub fn relations(top: usize) -> Vec<Relation> {
    let mut words = Vec::new();
    for p in 0..=top {
        words.push(Word { dom: p, letters: Vec::new() });
        for g2 in Gen::with_domain(p) {
            let mid = g2.codomain(p);
            if mid > top {
                continue;
            }
            for g1 in Gen::with_domain(mid) {
                if g1.codomain(mid) <= top {
                    words.push(Word { dom: p, letters: alloc::vec![g1, g2] });
                }
            }
        }
    }
    let mut classes: BTreeMap<CubeMap, Vec<Word>> = BTreeMap::new();
    for w in words {
        classes.entry(w.cube_map()).or_default().push(w);
    }
    let mut out = Vec::new();
    for (_, class) in classes {
        for other in &class[1..] {
            out.push(Relation { id: relation_id(&class[0], other), lhs: class[0].clone(), rhs: other.clone() });
        }
    }
    out.sort_by_key(|r| KIND_ORDER.iter().position(|k| *k == r.id).unwrap_or(KIND_ORDER.len()));
    out
}

/// Raw structure tables. `faces[n][i-1][a]` is `K_n → K_{n-1}` for
/// `1 ≤ i ≤ n`; `degens[n][i-1]` is `K_{n-1} → K_n` for `1 ≤ i ≤ n`;
/// `conns[n][i-1]` is `K_{n-1} → K_n` for `1 ≤ i ≤ n-1`. Entry `0` of each
/// outer vector is empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RawCubical {
    pub sizes: Vec<usize>,
    pub base: Vec<usize>,
    pub faces: Vec<Vec<[Vec<usize>; 2]>>,
    pub degens: Vec<Vec<Vec<usize>>>,
    pub conns: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedCubicalSet {
    raw: RawCubical,
}

impl TruncatedCubicalSet {
    /// Accepts the tables iff shapes fit, basepoints are fixed and every
    /// relation holds on every cell.
    pub fn from_raw(raw: RawCubical) -> Result<Self, CubicalError> {
        check_shapes(&raw)?;
        let k = Self { raw };
        k.check_basepoints()?;
        k.check_relations()?;
        Ok(k)
    }

    pub fn raw(&self) -> &RawCubical {
        &self.raw
    }

    pub fn into_raw(self) -> RawCubical {
        self.raw
    }

    pub fn top_dim(&self) -> usize {
        self.raw.sizes.len() - 1
    }

    pub fn sizes(&self) -> &[usize] {
        &self.raw.sizes
    }

    pub fn base(&self, level: usize) -> usize {
        self.raw.base[level]
    }

    /// Table of the generator acting on cells, from level `from` on.
    fn table(&self, g: Gen, from: usize) -> &[usize] {
        match g {
            Gen::Face { i, a } => &self.raw.faces[from][i - 1][a as usize],
            Gen::Degen { i } => &self.raw.degens[from + 1][i - 1],
            Gen::Conn { i } => &self.raw.conns[from + 1][i - 1],
        }
    }

    /// Applies the word to a cell of level `word.codomain()`.
    pub fn act(&self, word: &Word, cell: usize) -> usize {
        let mut dims = Vec::with_capacity(word.letters.len() + 1);
        let mut m = word.dom;
        dims.push(m);
        for g in word.letters.iter().rev() {
            m = g.codomain(m);
            dims.push(m);
        }
        // Letters act left to right on cells.
        let mut x = cell;
        for (pos, g) in word.letters.iter().enumerate() {
            let level = dims[word.letters.len() - pos];
            x = self.table(*g, level)[x];
        }
        x
    }

    fn check_basepoints(&self) -> Result<(), CubicalError> {
        for n in 1..=self.top_dim() {
            for g in Gen::with_domain(n - 1) {
                let (from, to) = match g {
                    Gen::Face { .. } => (n, n - 1),
                    _ => (n - 1, n),
                };
                let table = match g {
                    Gen::Face { .. } => self.table(g, n),
                    _ => self.table(g, n - 1),
                };
                if table[self.raw.base[from]] != self.raw.base[to] {
                    return Err(CubicalError::BasepointMoved { map: format!("{g}"), level: from });
                }
            }
        }
        Ok(())
    }

    fn check_relations(&self) -> Result<(), CubicalError> {
        for rel in relations(self.top_dim()) {
            let level = rel.lhs.codomain();
            for cell in 0..self.raw.sizes[level] {
                if self.act(&rel.lhs, cell) != self.act(&rel.rhs, cell) {
                    return Err(CubicalError::RelationViolated {
                        relation: rel.id,
                        level,
                        cell,
                        lhs: format!("{}", rel.lhs),
                        rhs: format!("{}", rel.rhs),
                    });
                }
            }
        }
        Ok(())
    }

    /// Degeneracy flags per level: a cell is degenerate iff it is in the
    /// image of some `s_i` or `γ_i`.
    pub fn degenerate_flags(&self) -> Vec<Vec<bool>> {
        (0..=self.top_dim())
            .map(|n| {
                let mut flags = alloc::vec![false; self.raw.sizes[n]];
                if n > 0 {
                    for table in self.raw.degens[n].iter().chain(&self.raw.conns[n]) {
                        for &x in table {
                            flags[x] = true;
                        }
                    }
                }
                flags
            })
            .collect()
    }

    pub fn nondegenerate_count(&self) -> Vec<usize> {
        self.degenerate_flags().iter().map(|f| f.iter().filter(|d| !**d).count()).collect()
    }

    /// Alternating sum of nondegenerate cells up to the top dimension, minus one.
    pub fn reduced_euler(&self) -> i64 {
        alternating(&self.nondegenerate_count()) - 1
    }

    /// True when the top level carries no nondegenerate cells, the case in
    /// which the truncated value is reported as exact.
    pub fn euler_is_stable(&self) -> bool {
        self.top_dim() > 0 && self.nondegenerate_count()[self.top_dim()] == 0
    }

    /// The same cubical set cut at a lower dimension.
    pub fn truncate(&self, top: usize) -> Self {
        let top = top.min(self.top_dim());
        let r = &self.raw;
        Self {
            raw: RawCubical {
                sizes: r.sizes[..=top].to_vec(),
                base: r.base[..=top].to_vec(),
                faces: r.faces[..=top].to_vec(),
                degens: r.degens[..=top].to_vec(),
                conns: r.conns[..=top].to_vec(),
            },
        }
    }

    /// A discrete pointed set of `points` elements, all higher cells degenerate.
    pub fn discrete(points: usize, top: usize) -> Self {
        assert!(points > 0);
        let id: Vec<usize> = (0..points).collect();
        let raw = RawCubical {
            sizes: alloc::vec![points; top + 1],
            base: alloc::vec![0; top + 1],
            faces: (0..=top).map(|n| alloc::vec![[id.clone(), id.clone()]; n]).collect(),
            degens: (0..=top).map(|n| alloc::vec![id.clone(); n]).collect(),
            conns: (0..=top).map(|n| alloc::vec![id.clone(); n.saturating_sub(1)]).collect(),
        };
        Self::from_raw(raw).expect("discrete sets satisfy every relation")
    }

    /// The standard `n`-cube, pointed at the origin vertex.
    pub fn standard_cube(n: usize, top: usize) -> Self {
        let levels: Vec<Vec<CubeMap>> = (0..=top).map(|m| CubeMap::all(m, n)).collect();
        from_cube_maps(&levels, |f| f, |f| f.is_constant_zero())
    }

    /// `I^n / ∂I^n`: cells touching the boundary collapse to the basepoint.
    pub fn sphere(n: usize, top: usize) -> Self {
        let levels: Vec<Vec<CubeMap>> = (0..=top)
            .map(|m| {
                let mut cells: Vec<CubeMap> = CubeMap::all(m, n).into_iter().filter(|f| !f.has_constant()).collect();
                cells.insert(0, collapsed(m, n));
                cells
            })
            .collect();
        from_cube_maps(&levels, |f| if f.has_constant() { collapsed(f.dom, f.codomain()) } else { f }, |f| {
            f.is_constant_zero()
        })
    }
}

fn alternating(counts: &[usize]) -> i64 {
    counts.iter().enumerate().map(|(n, &c)| if n % 2 == 0 { c as i64 } else { -(c as i64) }).sum()
}

fn collapsed(m: usize, n: usize) -> CubeMap {
    CubeMap { dom: m, coords: alloc::vec![Coord::Const(false); n] }
}

/// Builds a cubical set whose level-`m` cells are the given cube maps into a
/// fixed cube, acting by precomposition followed by `normalize`.
fn from_cube_maps(
    levels: &[Vec<CubeMap>],
    normalize: impl Fn(CubeMap) -> CubeMap,
    is_base: impl Fn(&CubeMap) -> bool,
) -> TruncatedCubicalSet {
    let top = levels.len() - 1;
    let index: Vec<BTreeMap<&CubeMap, usize>> =
        levels.iter().map(|l| l.iter().enumerate().map(|(i, f)| (f, i)).collect()).collect();
    let act = |g: Gen, from: usize, dom: usize| -> Vec<usize> {
        let gm = g.cube_map(dom);
        levels[from].iter().map(|x| index[dom][&normalize(x.after(&gm))]).collect()
    };
    let raw = RawCubical {
        sizes: levels.iter().map(Vec::len).collect(),
        base: levels.iter().map(|l| l.iter().position(&is_base).expect("basepoint cell")).collect(),
        faces: (0..=top)
            .map(|n| (1..=n).map(|i| [act(Gen::Face { i, a: 0 }, n, n - 1), act(Gen::Face { i, a: 1 }, n, n - 1)]).collect())
            .collect(),
        degens: (0..=top).map(|n| (1..=n).map(|i| act(Gen::Degen { i }, n - 1, n)).collect()).collect(),
        conns: (0..=top).map(|n| (1..n).map(|i| act(Gen::Conn { i }, n - 1, n)).collect()).collect(),
    };
    TruncatedCubicalSet::from_raw(raw).expect("cube maps form a cubical set")
}

fn check_shapes(raw: &RawCubical) -> Result<(), CubicalError> {
    let levels = raw.sizes.len();
    let bad = |what: String| Err(CubicalError::Shape(what));
    if levels == 0 || raw.base.len() != levels || raw.faces.len() != levels || raw.degens.len() != levels || raw.conns.len() != levels
    {
        return bad(String::from("every table needs one entry per level"));
    }
    for n in 0..levels {
        if raw.sizes[n] == 0 || raw.base[n] >= raw.sizes[n] {
            return bad(format!("level {n} is empty or has its basepoint out of range"));
        }
        if raw.faces[n].len() != n || raw.degens[n].len() != n || raw.conns[n].len() != n.saturating_sub(1) {
            return bad(format!("level {n} has the wrong number of structure maps"));
        }
        let fits = |t: &Vec<usize>, len: usize, range: usize| t.len() == len && t.iter().all(|&x| x < range);
        if n == 0 {
            continue;
        }
        for pair in &raw.faces[n] {
            if !pair.iter().all(|t| fits(t, raw.sizes[n], raw.sizes[n - 1])) {
                return bad(format!("a face table at level {n} is malformed"));
            }
        }
        if !raw.degens[n].iter().chain(&raw.conns[n]).all(|t| fits(t, raw.sizes[n - 1], raw.sizes[n])) {
            return bad(format!("a degeneracy or connection table into level {n} is malformed"));
        }
    }
    Ok(())
}

/// Levelwise smash: pairs of non-base cells plus one basepoint, structure
/// maps componentwise with anything touching a basepoint collapsed.
pub fn smash_cubical(k: &TruncatedCubicalSet, l: &TruncatedCubicalSet) -> TruncatedCubicalSet {
    let top = k.top_dim().min(l.top_dim());
    let rank = |x: usize, base: usize| if x > base { x - 1 } else { x };
    let idx = |n: usize, x: usize, y: usize| -> usize {
        if x == k.base(n) || y == l.base(n) {
            0
        } else {
            1 + rank(x, k.base(n)) * (l.sizes()[n] - 1) + rank(y, l.base(n))
        }
    };
    let cells = |n: usize| -> Vec<(usize, usize)> {
        let mut v = alloc::vec![(k.base(n), l.base(n))];
        for x in (0..k.sizes()[n]).filter(|&x| x != k.base(n)) {
            for y in (0..l.sizes()[n]).filter(|&y| y != l.base(n)) {
                v.push((x, y));
            }
        }
        v
    };
    let map = |tk: &[usize], tl: &[usize], from: usize, to: usize| -> Vec<usize> {
        cells(from).into_iter().map(|(x, y)| idx(to, tk[x], tl[y])).collect()
    };
    let raw = RawCubical {
        sizes: (0..=top).map(|n| (k.sizes()[n] - 1) * (l.sizes()[n] - 1) + 1).collect(),
        base: alloc::vec![0; top + 1],
        faces: (0..=top)
            .map(|n| {
                (0..n)
                    .map(|i| {
                        let f = |a: usize| map(&k.raw.faces[n][i][a], &l.raw.faces[n][i][a], n, n - 1);
                        [f(0), f(1)]
                    })
                    .collect()
            })
            .collect(),
        degens: (0..=top)
            .map(|n| (0..n).map(|i| map(&k.raw.degens[n][i], &l.raw.degens[n][i], n - 1, n)).collect())
            .collect(),
        conns: (0..=top)
            .map(|n| (0..n.saturating_sub(1)).map(|i| map(&k.raw.conns[n][i], &l.raw.conns[n][i], n - 1, n)).collect())
            .collect(),
    };
    TruncatedCubicalSet::from_raw(raw).expect("smash of cubical sets is cubical")
}

/// Checks that per-level maps commute with every structure map.
pub fn is_cubical_map(k: &TruncatedCubicalSet, l: &TruncatedCubicalSet, maps: &[Vec<usize>]) -> bool {
    let top = k.top_dim().min(l.top_dim()).min(maps.len().saturating_sub(1));
    (1..=top).all(|n| {
        Gen::with_domain(n - 1).into_iter().all(|g| match g {
            Gen::Face { .. } => {
                (0..k.sizes()[n]).all(|x| maps[n - 1][k.table(g, n)[x]] == l.table(g, n)[maps[n][x]])
            }
            _ => (0..k.sizes()[n - 1]).all(|x| maps[n][k.table(g, n - 1)[x]] == l.table(g, n - 1)[maps[n - 1][x]]),
        })
    })
}

/// A levelwise set of cells of an ambient cubical set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subcomplex {
    pub cells: Vec<BTreeSet<usize>>,
}

impl Subcomplex {
    /// Smallest subcomplex containing the basepoint and `seeds`, given as
    /// `(level, cell)` pairs.
    pub fn generated(k: &TruncatedCubicalSet, seeds: &[(usize, usize)]) -> Self {
        let mut cells: Vec<BTreeSet<usize>> = (0..=k.top_dim()).map(|n| BTreeSet::from([k.base(n)])).collect();
        let mut stack: Vec<(usize, usize)> = seeds.to_vec();
        stack.extend((0..=k.top_dim()).map(|n| (n, k.base(n))));
        while let Some((n, x)) = stack.pop() {
            cells[n].insert(x);
            for (m, y) in neighbours(k, n, x) {
                if cells[m].insert(y) {
                    stack.push((m, y));
                }
            }
        }
        Self { cells }
    }

    pub fn is_closed(&self, k: &TruncatedCubicalSet) -> bool {
        self.cells
            .iter()
            .enumerate()
            .all(|(n, set)| set.iter().all(|&x| neighbours(k, n, x).into_iter().all(|(m, y)| self.cells[m].contains(&y))))
    }

    pub fn union(&self, other: &Self) -> Self {
        Self { cells: self.cells.iter().zip(&other.cells).map(|(a, b)| a | b).collect() }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self { cells: self.cells.iter().zip(&other.cells).map(|(a, b)| a & b).collect() }
    }

    /// Reduced Euler characteristic counting nondegenerate cells of the
    /// ambient set. Degeneracy is intrinsic for closed subcomplexes, since
    /// `x = s_i y` forces `y = δ_i x` into the subcomplex.
    pub fn reduced_euler(&self, k: &TruncatedCubicalSet) -> i64 {
        let flags = k.degenerate_flags();
        let counts: Vec<usize> =
            self.cells.iter().enumerate().map(|(n, s)| s.iter().filter(|&&x| !flags[n][x]).count()).collect();
        alternating(&counts) - 1
    }
}

fn neighbours(k: &TruncatedCubicalSet, n: usize, x: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if n > 0 {
        for pair in &k.raw.faces[n] {
            out.push((n - 1, pair[0][x]));
            out.push((n - 1, pair[1][x]));
        }
    }
    if n < k.top_dim() {
        for t in k.raw.degens[n + 1].iter().chain(&k.raw.conns[n + 1]) {
            out.push((n + 1, t[x]));
        }
    }
    out
}

/// A cell of the cubical nerve: a functor from the `n`-cube poset. Vertex
/// `v` carries `objects[v]`; the edge from `v` along coordinate `k` (bit `k`
/// of `v` clear) carries `edges[k * 2^n + v]`, other slots hold `usize::MAX`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NerveCell {
    pub dim: usize,
    pub objects: Vec<usize>,
    pub edges: Vec<usize>,
}

const NO_EDGE: usize = usize::MAX;

impl NerveCell {
    pub fn edge(&self, v: usize, k: usize) -> usize {
        self.edges[k * (1 << self.dim) + v]
    }

    /// The morphism `F(v → w)` for `v ≤ w`.
    pub fn path(&self, c: &FiniteCategory, v: usize, w: usize) -> usize {
        let mut m = c.identities()[self.objects[v]];
        let mut cur = v;
        for k in 0..self.dim {
            if (w >> k & 1 == 1) && (v >> k & 1 == 0) {
                m = c.composite(self.edge(cur, k), m).expect("consecutive edges compose");
                cur |= 1 << k;
            }
        }
        m
    }

    /// `F ∘ f` for a cube map `f` into the cube of this cell.
    pub fn precompose(&self, c: &FiniteCategory, f: &CubeMap) -> NerveCell {
        let m = f.dom;
        let objects: Vec<usize> = (0..1usize << m).map(|u| self.objects[f.on_vertex(u)]).collect();
        let mut edges = alloc::vec![NO_EDGE; m << m];
        for k in 0..m {
            for u in (0..1usize << m).filter(|u| u >> k & 1 == 0) {
                edges[k * (1 << m) + u] = self.path(c, f.on_vertex(u), f.on_vertex(u | 1 << k));
            }
        }
        NerveCell { dim: m, objects, edges }
    }

    /// Image under a functor given on objects and morphisms.
    pub fn map(&self, on_objects: &[usize], on_morphisms: &[usize]) -> NerveCell {
        NerveCell {
            dim: self.dim,
            objects: self.objects.iter().map(|&o| on_objects[o]).collect(),
            edges: self.edges.iter().map(|&e| if e == NO_EDGE { NO_EDGE } else { on_morphisms[e] }).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nerve {
    pub complex: TruncatedCubicalSet,
    pub cells: Vec<Vec<NerveCell>>,
}

impl Nerve {
    pub fn index_of(&self, cell: &NerveCell) -> Option<usize> {
        self.cells.get(cell.dim)?.binary_search(cell).ok()
    }
}

pub const DEFAULT_EXPLOSION_BOUND: u64 = 1_000_000;

/// Enumerates all functors `I^n → C` for `n ≤ top`. The basepoint is the
/// constant functor at the zero object, or at object 0 when none is declared.
pub fn cubical_nerve(c: &FiniteCategory, top: usize, bound: u64) -> Result<Nerve, CubicalError> {
    if c.objects().is_empty() {
        return Err(CubicalError::EmptyCategory);
    }
    let mut cells = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut level = enumerate_functors(c, n, bound)?;
        level.sort();
        cells.push(level);
    }
    let base_obj = c.zero_object().unwrap_or(0);
    let nerve_index = |n: usize, cell: &NerveCell| cells[n].binary_search(cell).expect("closed under structure maps");
    let constant = |n: usize| NerveCell {
        dim: n,
        objects: alloc::vec![base_obj; 1 << n],
        edges: (0..n << n)
            .map(|e| if (e % (1 << n)) >> (e >> n) & 1 == 0 { c.identities()[base_obj] } else { NO_EDGE })
            .collect(),
    };
    let act = |g: Gen, from: usize, dom: usize| -> Vec<usize> {
        let gm = g.cube_map(dom);
        cells[from].iter().map(|x| nerve_index(dom, &x.precompose(c, &gm))).collect()
    };
    let raw = RawCubical {
        sizes: cells.iter().map(Vec::len).collect(),
        base: (0..=top).map(|n| nerve_index(n, &constant(n))).collect(),
        faces: (0..=top)
            .map(|n| (1..=n).map(|i| [act(Gen::Face { i, a: 0 }, n, n - 1), act(Gen::Face { i, a: 1 }, n, n - 1)]).collect())
            .collect(),
        degens: (0..=top).map(|n| (1..=n).map(|i| act(Gen::Degen { i }, n - 1, n)).collect()).collect(),
        conns: (0..=top).map(|n| (1..n).map(|i| act(Gen::Conn { i }, n - 1, n)).collect()).collect(),
    };
    let complex = TruncatedCubicalSet::from_raw(raw)?;
    Ok(Nerve { complex, cells })
}

fn enumerate_functors(c: &FiniteCategory, n: usize, bound: u64) -> Result<Vec<NerveCell>, CubicalError> {
    let verts = 1usize << n;
    let edge_slots: Vec<(usize, usize)> =
        (0..n).flat_map(|k| (0..verts).filter(move |v| v >> k & 1 == 0).map(move |v| (k, v))).collect();
    struct Search<'a> {
        c: &'a FiniteCategory,
        n: usize,
        slots: Vec<(usize, usize)>,
        objects: Vec<usize>,
        edges: Vec<usize>,
        out: Vec<NerveCell>,
        visited: u64,
        bound: u64,
    }
    impl Search<'_> {
        fn tick(&mut self) -> Result<(), CubicalError> {
            self.visited += 1;
            if self.visited > self.bound {
                return Err(CubicalError::ExplosionGuard { level: self.n, bound: self.bound });
            }
            Ok(())
        }

        fn objects(&mut self, v: usize) -> Result<(), CubicalError> {
            if v == self.objects.len() {
                return self.edges(0);
            }
            for o in 0..self.c.objects().len() {
                self.tick()?;
                self.objects[v] = o;
                self.objects(v + 1)?;
            }
            Ok(())
        }

        // Squares are checked as soon as their last edge is placed.
        fn square_ok(&self, k: usize, v: usize) -> bool {
            let verts = 1usize << self.n;
            let e = |k: usize, v: usize| self.edges[k * verts + v];
            for l in 0..self.n {
                if l == k {
                    continue;
                }
                let base = v & !(1 << l);
                let (lo, hi) = if k < l { (k, l) } else { (l, k) };
                if base >> lo & 1 == 1 {
                    continue;
                }
                let edges = [e(lo, base), e(hi, base | 1 << lo), e(hi, base), e(lo, base | 1 << hi)];
                if edges.contains(&NO_EDGE) {
                    continue;
                }
                let a = self.c.composite(edges[1], edges[0]);
                let b = self.c.composite(edges[3], edges[2]);
                if a != b {
                    return false;
                }
            }
            true
        }

        fn edges(&mut self, pos: usize) -> Result<(), CubicalError> {
            if pos == self.slots.len() {
                self.out.push(NerveCell { dim: self.n, objects: self.objects.clone(), edges: self.edges.clone() });
                return Ok(());
            }
            let (k, v) = self.slots[pos];
            let verts = 1usize << self.n;
            for m in self.c.hom(self.objects[v], self.objects[v | 1 << k]) {
                self.tick()?;
                self.edges[k * verts + v] = m;
                if self.square_ok(k, v) {
                    self.edges(pos + 1)?;
                }
            }
            self.edges[k * verts + v] = NO_EDGE;
            Ok(())
        }
    }
    let mut s = Search {
        c,
        n,
        slots: edge_slots,
        objects: alloc::vec![0; verts],
        edges: alloc::vec![NO_EDGE; n * verts],
        out: Vec::new(),
        visited: 0,
        bound,
    };
    s.objects(0)?;
    Ok(s.out)
}

/// The cell map induced by a functor between finite categories.
pub fn nerve_map(source: &Nerve, target: &Nerve, on_objects: &[usize], on_morphisms: &[usize]) -> Option<Vec<Vec<usize>>> {
    source
        .cells
        .iter()
        .map(|level| level.iter().map(|x| target.index_of(&x.map(on_objects, on_morphisms))).collect())
        .collect()
}

/// Formal convex combination of cubical sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbCubicalSet {
    terms: Vec<(Rational, TruncatedCubicalSet)>,
}

impl ProbCubicalSet {
    pub fn new(terms: Vec<(Rational, TruncatedCubicalSet)>) -> Result<Self, CubicalError> {
        if terms.is_empty()
            || terms.iter().any(|(w, _)| w.is_negative())
            || !rational::sum(terms.iter().map(|(w, _)| w)).is_one()
        {
            return Err(CubicalError::InvalidWeights);
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(Rational, TruncatedCubicalSet)] {
        &self.terms
    }

    pub fn weights(&self) -> Vec<Rational> {
        self.terms.iter().map(|(w, _)| w.clone()).collect()
    }
}

/// Bilinear smash, terms in row-major order.
pub fn prob_smash(k: &ProbCubicalSet, l: &ProbCubicalSet) -> ProbCubicalSet {
    let terms = k
        .terms
        .iter()
        .flat_map(|(wk, kk)| l.terms.iter().map(move |(wl, ll)| (wk * wl, smash_cubical(kk, ll))))
        .collect();
    ProbCubicalSet { terms }
}
