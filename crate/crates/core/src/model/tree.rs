//! The rooted binary tree whose edge into level `n` has length `2^-n`,
//! truncated at depth `D`, optionally with its boundary.
//!
//! Nodes at level `n` are the residues `Z / 2^n` (the coset model): the parent
//! of `a` at level `n` is `a mod 2^(n-1)`. A boundary point is stored as a
//! virtual node at level `D + 1` carrying a `D`-bit address; its edge has
//! length `2^-D`, the closed-form tail sum of all deeper edge lengths.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::rational::{fmt_q, pow2_neg, qi, Q};

use super::GeometryError;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeSpace {
    pub depth: u32,
    pub compactified: bool,
}

/// A point of the truncated tree: it lies on the edge above the node
/// `(level, addr)`, at distance `up` from that node towards the parent.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreePoint {
    pub level: u32,
    pub addr: u64,
    pub up: Q,
}

impl fmt::Debug for TreePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[{}:{}", self.level, self.addr)?;
        if !self.up.is_zero() {
            write!(f, "^{}", fmt_q(&self.up))?;
        }
        write!(f, "]")
    }
}

impl TreePoint {
    pub fn root() -> Self {
        TreePoint { level: 0, addr: 0, up: Q::zero() }
    }

    pub fn node(level: u32, addr: u64) -> Self {
        TreePoint { level, addr, up: Q::zero() }
    }

    pub fn is_node(&self) -> bool {
        self.up.is_zero()
    }
}

impl TreeSpace {
    pub const DEFAULT_DEPTH: u32 = 12;

    pub fn new(depth: u32, compactified: bool) -> Self {
        assert!(depth >= 1 && depth <= 40, "tree depth must lie in 1..=40");
        TreeSpace { depth, compactified }
    }

    pub fn boundary_level(&self) -> u32 {
        self.depth + 1
    }

    /// Number of address bits carried by a point at `level`.
    pub fn addr_bits(&self, level: u32) -> u32 {
        level.min(self.depth)
    }

    pub fn is_boundary(&self, p: &TreePoint) -> bool {
        p.level == self.boundary_level()
    }

    /// Length of the edge into `level` (`level >= 1`).
    pub fn edge_weight(&self, level: u32) -> Q {
        debug_assert!(level >= 1);
        if level <= self.depth {
            pow2_neg(level)
        } else {
            pow2_neg(self.depth)
        }
    }

    /// Distance from the root to a node at `level`.
    pub fn node_depth(&self, level: u32) -> Q {
        if level > self.depth {
            Q::one()
        } else {
            Q::one() - pow2_neg(level)
        }
    }

    pub fn point_depth(&self, p: &TreePoint) -> Q {
        self.node_depth(p.level) - &p.up
    }

    pub fn boundary_point(&self, addr: u64) -> TreePoint {
        TreePoint::node(self.boundary_level(), addr)
    }

    pub fn validate(&self, p: &TreePoint) -> Result<(), GeometryError> {
        let bad = |why: &str| Err(GeometryError::InvalidPoint(format!("{p:?}: {why}")));
        if p.level > self.boundary_level() {
            return bad("level exceeds truncation depth");
        }
        if p.level == self.boundary_level() && !self.compactified {
            return bad("boundary point in a non-compactified tree");
        }
        if p.addr >> self.addr_bits(p.level) != 0 {
            return bad("address out of range for its level");
        }
        if p.up.is_negative() {
            return bad("negative edge offset");
        }
        if p.level == 0 {
            if !p.up.is_zero() {
                return bad("root carries no edge offset");
            }
        } else if p.up >= self.edge_weight(p.level) {
            return bad("edge offset must be below the edge length");
        }
        Ok(())
    }

    pub fn prefix(&self, addr: u64, k: u32) -> u64 {
        let bits = k.min(self.depth);
        if bits >= 64 {
            addr
        } else {
            addr & ((1u64 << bits) - 1)
        }
    }

    /// Length of the longest common address prefix, counted in levels.
    pub fn common_level(&self, p: &TreePoint, q: &TreePoint) -> u32 {
        let m = p.level.min(q.level);
        let bits = m.min(self.depth);
        let diff = p.addr ^ q.addr;
        let agree = if diff == 0 { 64 } else { diff.trailing_zeros() };
        let k = agree.min(bits);
        if k == self.depth && m == self.boundary_level() {
            self.boundary_level()
        } else {
            k
        }
    }

    /// Depth of the last common point of the root paths of `p` and `q`.
    pub fn meet_depth(&self, p: &TreePoint, q: &TreePoint) -> Q {
        let k = self.common_level(p, q);
        let dp = self.point_depth(p);
        let dq = self.point_depth(q);
        let dk = self.node_depth(k);
        dp.min(dq).min(dk)
    }

    pub fn distance(&self, p: &TreePoint, q: &TreePoint) -> Q {
        let dp = self.point_depth(p);
        let dq = self.point_depth(q);
        let m = self.meet_depth(p, q);
        dp + dq - m.clone() - m
    }

    /// The point on the segment from the root to `x` at distance `h` from the root.
    pub fn on_root_path(&self, x: &TreePoint, h: &Q) -> TreePoint {
        debug_assert!(!h.is_negative() && *h <= self.point_depth(x));
        let mut level = 0;
        while self.node_depth(level) < *h {
            level += 1;
        }
        let level = level.min(x.level);
        TreePoint { level, addr: self.prefix(x.addr, level), up: self.node_depth(level) - h }
    }

    pub fn geodesic_point(&self, p: &TreePoint, q: &TreePoint, t: &Q) -> TreePoint {
        let d = self.distance(p, q);
        if d.is_zero() {
            return p.clone();
        }
        let s = t * &d;
        let dp = self.point_depth(p);
        let m = self.meet_depth(p, q);
        let up_leg = &dp - &m;
        if s <= up_leg {
            self.on_root_path(p, &(dp - s))
        } else {
            self.on_root_path(q, &(m + (s - up_leg)))
        }
    }

    /// The median of three points (the unique point on all three geodesics).
    pub fn median(&self, a: &TreePoint, b: &TreePoint, c: &TreePoint) -> TreePoint {
        let ab = self.distance(a, b);
        if ab.is_zero() {
            return a.clone();
        }
        let along = (&ab + self.distance(a, c) - self.distance(b, c)) / qi(2);
        self.geodesic_point(a, b, &(along / ab))
    }

    /// All nodes of the truncated tree up to `max_level` (inclusive), root first.
    pub fn nodes_up_to(&self, max_level: u32) -> Vec<TreePoint> {
        let max_level = max_level.min(self.depth);
        let mut out = Vec::new();
        for level in 0..=max_level {
            for addr in 0..(1u64 << level) {
                out.push(TreePoint::node(level, addr));
            }
        }
        out
    }
}

/// An automorphism of the truncated tree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum TreeAutomorphism {
    /// Addition of a constant in the coset model at every level.
    Odometer(i64),
    /// Explicit permutation of each level `1..=D`; `tables[n-1][a]` is the image of node `a` at level `n`.
    Table(Arc<Vec<Vec<u64>>>),
}

impl fmt::Debug for TreeAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeAutomorphism::Odometer(k) => write!(f, "phi^{k}"),
            TreeAutomorphism::Table(t) => write!(f, "table(depth {})", t.len()),
        }
    }
}

impl TreeAutomorphism {
    pub fn identity() -> Self {
        TreeAutomorphism::Odometer(0)
    }

    /// Builds a table automorphism, checking that every level is a permutation
    /// compatible with the parent map.
    pub fn from_tables(space: &TreeSpace, tables: Vec<Vec<u64>>) -> Result<Self, GeometryError> {
        if tables.len() != space.depth as usize {
            return Err(GeometryError::InvalidIsometry(format!(
                "expected {} level tables, got {}",
                space.depth,
                tables.len()
            )));
        }
        for (i, t) in tables.iter().enumerate() {
            let level = i as u32 + 1;
            let size = 1usize << level;
            if t.len() != size {
                return Err(GeometryError::InvalidIsometry(format!("level {level} table has wrong size")));
            }
            let mut seen = vec![false; size];
            for &img in t {
                if img as usize >= size || std::mem::replace(&mut seen[img as usize], true) {
                    return Err(GeometryError::InvalidIsometry(format!("level {level} table is not a permutation")));
                }
            }
            let half = (size / 2) as u64;
            for (a, &img) in t.iter().enumerate() {
                let parent_img = if level == 1 { 0 } else { tables[i - 1][a % half as usize] };
                if img % half.max(1) != parent_img % half.max(1) && level > 1 {
                    return Err(GeometryError::InvalidIsometry(format!(
                        "level {level} table does not commute with the parent map"
                    )));
                }
            }
        }
        Ok(TreeAutomorphism::Table(Arc::new(tables)))
    }

    pub fn to_tables(&self, space: &TreeSpace) -> Vec<Vec<u64>> {
        (1..=space.depth)
            .map(|level| (0..(1u64 << level)).map(|a| self.apply_node(space, level, a)).collect())
            .collect()
    }

    fn apply_node(&self, space: &TreeSpace, level: u32, addr: u64) -> u64 {
        let bits = space.addr_bits(level);
        if bits == 0 {
            return 0;
        }
        match self {
            TreeAutomorphism::Odometer(k) => {
                let m = 1i128 << bits;
                ((addr as i128 + *k as i128).rem_euclid(m)) as u64
            }
            TreeAutomorphism::Table(t) => t[bits as usize - 1][addr as usize],
        }
    }

    pub fn apply(&self, space: &TreeSpace, p: &TreePoint) -> TreePoint {
        TreePoint { level: p.level, addr: self.apply_node(space, p.level, p.addr), up: p.up.clone() }
    }

    pub fn compose(&self, space: &TreeSpace, other: &TreeAutomorphism) -> TreeAutomorphism {
        match (self, other) {
            (TreeAutomorphism::Odometer(a), TreeAutomorphism::Odometer(b)) => TreeAutomorphism::Odometer(a + b),
            _ => {
                let tables = (1..=space.depth)
                    .map(|level| {
                        (0..(1u64 << level))
                            .map(|a| self.apply_node(space, level, other.apply_node(space, level, a)))
                            .collect()
                    })
                    .collect();
                TreeAutomorphism::Table(Arc::new(tables))
            }
        }
    }

    pub fn inverse(&self, space: &TreeSpace) -> TreeAutomorphism {
        match self {
            TreeAutomorphism::Odometer(a) => TreeAutomorphism::Odometer(-a),
            TreeAutomorphism::Table(t) => {
                let inv = t
                    .iter()
                    .map(|perm| {
                        let mut out = vec![0u64; perm.len()];
                        for (a, &img) in perm.iter().enumerate() {
                            out[img as usize] = a as u64;
                        }
                        out
                    })
                    .collect();
                let _ = space;
                TreeAutomorphism::Table(Arc::new(inv))
            }
        }
    }

    /// Whether the automorphism acts trivially on the truncated tree.
    pub fn is_identity(&self, space: &TreeSpace) -> bool {
        match self {
            TreeAutomorphism::Odometer(k) => k.rem_euclid(1i64 << space.depth.min(62)) == 0,
            TreeAutomorphism::Table(t) => t.iter().all(|perm| perm.iter().enumerate().all(|(a, &b)| a as u64 == b)),
        }
    }

    /// Deepest level (capped at `D`) whose nodes are all fixed; the fixed set
    /// of an odometer power is exactly the closed subtree down to this level.
    pub fn fixed_levels(&self, space: &TreeSpace) -> Option<u32> {
        match self {
            TreeAutomorphism::Odometer(k) => {
                if self.is_identity(space) {
                    None
                } else {
                    Some(k.trailing_zeros().min(space.depth))
                }
            }
            TreeAutomorphism::Table(_) => None,
        }
    }

    pub fn fixes(&self, space: &TreeSpace, p: &TreePoint) -> bool {
        self.apply(space, p) == *p
    }

    /// Nearest fixed point to `p`. Fixed sets of automorphisms are subtrees
    /// containing the root, so it lies on the root path of `p`.
    pub fn nearest_fixed(&self, space: &TreeSpace, p: &TreePoint) -> TreePoint {
        if self.fixes(space, p) {
            return p.clone();
        }
        let mut level = p.level;
        loop {
            level -= 1;
            let node = TreePoint::node(level, space.prefix(p.addr, level));
            if self.fixes(space, &node) {
                return node;
            }
        }
    }
}
