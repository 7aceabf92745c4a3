//! The quotient `K = (N(DV) × S^N) / (x, p) ~ (i x, a p)` of the product of the
//! doubled axes nerve with the truncated sphere, as a cell complex with
//! product cells and explicit boundary data.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::covers::{AxesCover, VertexAction};
use crate::group::Isometry;
use crate::homology::{analyze, ChainComplex, HomologyResult, Simplex, SimplicialComplex, SparseMatrix};

use super::sphere::SphereModel;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KError {
    #[error("the sheet swap fixes vertex {0}")]
    SwapFixesVertex(u32),
    #[error("the sheet swap does not map simplex {0:?} to a simplex")]
    SwapNotSimplicial(Simplex),
}

/// Vertex `2v` is ball `v` on the sheet of canonically oriented lines, `2v + 1` the other sheet.
pub fn sheet_swap(v: u32) -> u32 {
    v ^ 1
}

/// The nerve of the doubled cover: two copies of the axes nerve.
pub fn doubled_nerve(nerve_v: &SimplicialComplex) -> SimplicialComplex {
    let labels = nerve_v.labels.iter().flat_map(|l| [format!("+:{l}"), format!("-:{l}")]).collect();
    let facets = nerve_v.facets().into_iter().flat_map(|f| {
        let plus: Simplex = f.iter().map(|v| 2 * v).collect();
        let minus: Simplex = f.iter().map(|v| 2 * v + 1).collect();
        [plus, minus]
    });
    SimplicialComplex::from_simplices(labels, facets)
}

/// The action on the doubled cover: a ball moves with `g`, and changes sheet
/// when `g` reverses the orientation of its lines.
pub fn doubled_action(cover: &AxesCover, elements: &[Isometry]) -> VertexAction {
    let base = cover.action(elements);
    let perms = elements
        .iter()
        .zip(&base.perms)
        .map(|(g, p)| {
            (0..2 * cover.len() as u32)
                .map(|d| {
                    let v = d / 2;
                    p[v as usize].map(|w| 2 * w + ((d & 1) ^ cover.reverses(g, v) as u32))
                })
                .collect()
        })
        .collect();
    VertexAction { elements: elements.to_vec(), perms }
}

/// A product cell `sigma × tau`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProductCell {
    pub sigma: Simplex,
    pub tau: Simplex,
}

impl ProductCell {
    pub fn dim(&self) -> usize {
        self.sigma.len() + self.tau.len() - 2
    }
}

/// Sorts a vertex list, returning the sign of the sorting permutation.
fn sort_signed(mut v: Vec<u32>) -> (Vec<u32>, i64) {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    (v, sign)
}

/// Audit of a group action on `K`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct KActionCheck {
    /// Vertices where an element fails to commute with the sheet swap.
    pub swap_failures: usize,
    /// Cells whose image depends on the chosen representative.
    pub ill_defined: usize,
    /// Cell images leaving the window.
    pub undefined_images: usize,
    pub invariant_cells: usize,
    pub not_pointwise: usize,
}

impl KActionCheck {
    pub fn passed(&self) -> bool {
        self.swap_failures == 0 && self.ill_defined == 0 && self.not_pointwise == 0
    }
}

#[derive(Debug, Clone)]
pub struct QuotientK {
    pub double: SimplicialComplex,
    pub sphere: SphereModel,
    /// Canonical representatives by dimension.
    pub cells: Vec<Vec<ProductCell>>,
    index: HashMap<ProductCell, (usize, usize)>,
    /// Product cells whose class has exactly two members.
    pub two_preimages: usize,
    /// Product cells identified with themselves.
    pub self_identified: usize,
    /// Simplices of the doubled nerve meeting their sheet-swapped image.
    pub swap_overlaps: usize,
}

impl QuotientK {
    /// The canonical representative of the class of `(sigma, tau)` and the
    /// orientation sign relating the two.
    pub fn canonical(sigma: &[u32], tau: &[u32]) -> (ProductCell, i64) {
        let (is, s1) = sort_signed(sigma.iter().map(|&v| sheet_swap(v)).collect());
        let (at, s2) = sort_signed(tau.iter().map(|&v| SphereModel::antipode(v)).collect());
        let (ps, s0) = sort_signed(sigma.to_vec());
        let (pt, t0) = sort_signed(tau.to_vec());
        let here = ProductCell { sigma: ps, tau: pt };
        let there = ProductCell { sigma: is, tau: at };
        if here <= there {
            (here, s0 * t0)
        } else {
            (there, s0 * t0 * s1 * s2)
        }
    }

    pub fn cell_count(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn position(&self, c: &ProductCell) -> Option<(usize, usize)> {
        self.index.get(c).copied()
    }

    /// Signed faces of a canonical cell, as canonical cells.
    pub fn boundary(&self, c: &ProductCell) -> Vec<(ProductCell, i64)> {
        let mut out = Vec::new();
        if c.sigma.len() > 1 {
            for k in 0..c.sigma.len() {
                let mut s = c.sigma.clone();
                s.remove(k);
                let (f, sign) = Self::canonical(&s, &c.tau);
                out.push((f, if k % 2 == 0 { sign } else { -sign }));
            }
        }
        if c.tau.len() > 1 {
            let p = c.sigma.len() - 1;
            for k in 0..c.tau.len() {
                let mut t = c.tau.clone();
                t.remove(k);
                let (f, sign) = Self::canonical(&c.sigma, &t);
                let e = if (p + k) % 2 == 0 { 1 } else { -1 };
                out.push((f, e * sign));
            }
        }
        out
    }

    /// Cellular chain complex of the cells accepted by `keep`; `None` when they
    /// do not form a subcomplex.
    pub fn chain_complex_of(&self, keep: impl Fn(&ProductCell) -> bool) -> Option<ChainComplex> {
        let mut local: Vec<HashMap<&ProductCell, u32>> = Vec::new();
        let mut kept: Vec<Vec<&ProductCell>> = Vec::new();
        for layer in &self.cells {
            let cells: Vec<&ProductCell> = layer.iter().filter(|c| keep(c)).collect();
            local.push(cells.iter().enumerate().map(|(i, c)| (*c, i as u32)).collect());
            kept.push(cells);
        }
        while kept.last().map_or(false, Vec::is_empty) {
            kept.pop();
        }
        let ranks: Vec<usize> = kept.iter().map(Vec::len).collect();
        let mut boundaries = vec![SparseMatrix::new(0, vec![Vec::new(); ranks.first().copied().unwrap_or(0)])];
        for d in 1..kept.len() {
            let mut cols = Vec::with_capacity(kept[d].len());
            for c in &kept[d] {
                let mut col: BTreeMap<u32, i64> = BTreeMap::new();
                for (f, s) in self.boundary(c) {
                    let row = *local[d - 1].get(&f)?;
                    *col.entry(row).or_insert(0) += s;
                }
                cols.push(col.into_iter().filter(|(_, v)| *v != 0).collect());
            }
            boundaries.push(SparseMatrix::new(ranks[d - 1], cols));
        }
        Some(ChainComplex { ranks, boundaries })
    }

    pub fn chain_complex(&self) -> ChainComplex {
        self.chain_complex_of(|_| true).expect("K is closed under faces")
    }

    /// Image of a cell under one element, given the element's doubled vertex permutation.
    pub fn image(perm: &[Option<u32>], c: &ProductCell) -> Option<ProductCell> {
        let moved: Vec<u32> = c.sigma.iter().map(|&v| perm.get(v as usize).copied().flatten()).collect::<Option<_>>()?;
        Some(Self::canonical(&moved, &c.tau).0)
    }

    /// `Fix_K(H)`: cells invariant under every generator.
    pub fn fixed_cells(&self, action: &VertexAction) -> Vec<&ProductCell> {
        self.cells
            .iter()
            .flatten()
            .filter(|c| action.perms.iter().all(|p| Self::image(p, c).as_ref() == Some(*c)))
            .collect()
    }

    pub fn analyze_fixed(&self, action: &VertexAction) -> Option<HomologyResult> {
        let fixed: std::collections::HashSet<&ProductCell> = self.fixed_cells(action).into_iter().collect();
        self.chain_complex_of(|c| fixed.contains(c)).map(|cc| analyze(&cc))
    }

    /// Well-definedness and fixed-cell audits of an action on the doubled vertices.
    pub fn check_action(&self, action: &VertexAction) -> KActionCheck {
        let n = self.double.vertex_count() as u32;
        let mut out = KActionCheck::default();
        for p in &action.perms {
            out.swap_failures += (0..n)
                .filter(|&v| p[v as usize].map(sheet_swap) != p[sheet_swap(v) as usize])
                .count();
        }
        for c in self.cells.iter().flatten() {
            let other: Vec<u32> = c.sigma.iter().map(|&v| sheet_swap(v)).collect();
            let at = SphereModel::antipodal(&c.tau);
            let mut invariant = true;
            for p in &action.perms {
                let a = Self::image(p, c);
                let moved: Option<Vec<u32>> = other.iter().map(|&v| p.get(v as usize).copied().flatten()).collect();
                let b = moved.map(|m| Self::canonical(&m, &at).0);
                if a != b {
                    out.ill_defined += 1;
                }
                match a {
                    None => {
                        out.undefined_images += 1;
                        invariant = false;
                    }
                    Some(a) => invariant &= a == *c,
                }
            }
            if invariant {
                out.invariant_cells += 1;
                if !action.perms.iter().all(|p| c.sigma.iter().all(|&v| p[v as usize] == Some(v))) {
                    out.not_pointwise += 1;
                }
            }
        }
        out
    }

    /// Renders `K` in the complex text format, extended with product cells:
    /// `p <cell-id> <sigma>x<tau> <signed boundary cell ids>`.
    pub fn to_text(&self, header: &BTreeMap<String, String>) -> String {
        let mut out = String::new();
        for (k, v) in header {
            let _ = writeln!(out, "# {k} {v}");
        }
        let o = self.double.vertex_count() as u32;
        for (i, l) in self.double.labels.iter().enumerate() {
            let _ = writeln!(out, "v {i} {l}");
        }
        for (i, l) in self.sphere.complex.labels.iter().enumerate() {
            let _ = writeln!(out, "v {} S:{l}", i as u32 + o);
        }
        for f in self.double.facets() {
            let _ = writeln!(out, "s {}", join_ids(&f, 0, " "));
        }
        for f in self.sphere.complex.facets() {
            let _ = writeln!(out, "s {}", join_ids(&f, o, " "));
        }
        let ids: Vec<usize> = self.cells.iter().scan(0, |acc, l| {
            let s = *acc;
            *acc += l.len();
            Some(s)
        })
        .collect();
        for (d, layer) in self.cells.iter().enumerate() {
            for (i, c) in layer.iter().enumerate() {
                let mut faces: Vec<(usize, i64)> = self
                    .boundary(c)
                    .into_iter()
                    .map(|(f, s)| {
                        let (fd, fi) = self.index[&f];
                        (ids[fd] + fi, s)
                    })
                    .collect();
                faces.sort_unstable();
                let signed = if faces.is_empty() {
                    "-".to_string()
                } else {
                    faces.iter().map(|(f, s)| format!("{}{f}", if *s > 0 { "+" } else { "-" })).collect::<Vec<_>>().join(",")
                };
                let _ = writeln!(out, "p {} {}x{} {}", ids[d] + i, join_ids(&c.sigma, 0, ","), join_ids(&c.tau, o, ","), signed);
            }
        }
        out
    }
}

fn join_ids(s: &[u32], offset: u32, sep: &str) -> String {
    s.iter().map(|v| (v + offset).to_string()).collect::<Vec<_>>().join(sep)
}

/// Builds `K` from a doubled nerve (closed under the sheet swap) and the `n`-sphere.
pub fn quotient_k(double: &SimplicialComplex, n: usize) -> Result<QuotientK, KError> {
    for s in double.simplices() {
        let swapped: Simplex = {
            let mut t: Simplex = s.iter().map(|&v| sheet_swap(v)).collect();
            t.sort_unstable();
            t
        };
        if !double.contains(&swapped) {
            return Err(KError::SwapNotSimplicial(s.clone()));
        }
    }
    if let Some(v) = double.vertices().into_iter().find(|&v| sheet_swap(v) == v) {
        return Err(KError::SwapFixesVertex(v));
    }
    let sphere = SphereModel::new(n);
    let sigmas: Vec<&Simplex> = double.simplices().collect();
    let taus: Vec<&Simplex> = sphere.complex.simplices().collect();
    let swap_overlaps = sigmas.iter().filter(|s| s.iter().any(|&v| s.binary_search(&sheet_swap(v)).is_ok())).count();
    let classes: Vec<ProductCell> = sigmas
        .par_iter()
        .flat_map_iter(|s| taus.iter().map(move |t| QuotientK::canonical(s, t).0))
        .collect();
    let mut members: HashMap<ProductCell, usize> = HashMap::new();
    for c in classes {
        *members.entry(c).or_insert(0) += 1;
    }
    let self_identified = sigmas
        .iter()
        .flat_map(|s| taus.iter().map(move |t| (s, t)))
        .filter(|(s, t)| {
            let (a, _) = sort_signed(s.iter().map(|&v| sheet_swap(v)).collect());
            let (b, _) = sort_signed(SphereModel::antipodal(t));
            a == ***s && b == ***t
        })
        .count();
    let two_preimages = members.values().filter(|&&m| m == 2).count() * 2;
    let mut cells: Vec<Vec<ProductCell>> = Vec::new();
    let mut reps: Vec<ProductCell> = members.into_keys().collect();
    reps.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
    for c in reps {
        let d = c.dim();
        if cells.len() <= d {
            cells.resize(d + 1, Vec::new());
        }
        cells[d].push(c);
    }
    let index = cells.iter().enumerate().flat_map(|(d, l)| l.iter().enumerate().map(move |(i, c)| (c.clone(), (d, i)))).collect();
    Ok(QuotientK { double: double.clone(), sphere, cells, index, two_preimages, self_identified, swap_overlaps })
}
