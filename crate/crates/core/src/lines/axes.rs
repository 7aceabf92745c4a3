//! Spaces of axes, their well-behavedness, and the directed double cover.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use rand::Rng;
use serde::Serialize;

use crate::group::{classify, enumerate_elements, GroupError, GroupSpec, Isometry, IsometryClass};
use crate::linalg::{canonical_sign, int_vec, primitive_direction};
use crate::model::{ModelSpace, Point, TreePoint, TreeSpace};
use crate::rational::{pow2_neg, q, Length, Q};

use super::{flat_strip_distance, parallel_class, ClassSpace, Line};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxesChoice {
    /// Every axis found in the window.
    Full,
    /// Only the line through the root of the tree (tree example only).
    Root,
}

impl std::str::FromStr for AxesChoice {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full" => Ok(AxesChoice::Full),
            "root" => Ok(AxesChoice::Root),
            other => Err(format!("unknown axes choice `{other}` (expected full or root)")),
        }
    }
}

/// One parallel class of Euclidean axes. Every line of the class is an axis
/// (of a lattice translation), so the class is stored by its base space and a
/// list of the axes actually observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisClass {
    pub class: ClassSpace,
    pub observed: Vec<Line>,
    pub witnesses: Vec<Isometry>,
}

impl AxisClass {
    pub fn dir(&self) -> &[i64] {
        match &self.class {
            ClassSpace::Euclidean(f) => &f.dir,
            ClassSpace::Tree(_) => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxesKind {
    Euclidean { classes: Vec<AxisClass> },
    /// Vertical lines over the closed subtree of nodes up to `max_level`
    /// (never containing boundary points); `None` when empty.
    Tree { tree: TreeSpace, max_level: Option<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxesSpace {
    pub space: ModelSpace,
    pub bound: Q,
    pub kind: AxesKind,
}

impl AxesSpace {
    pub fn is_empty(&self) -> bool {
        match &self.kind {
            AxesKind::Euclidean { classes } => classes.is_empty(),
            AxesKind::Tree { max_level, .. } => max_level.is_none(),
        }
    }

    pub fn class_count(&self) -> usize {
        match &self.kind {
            AxesKind::Euclidean { classes } => classes.len(),
            AxesKind::Tree { max_level, .. } => max_level.is_some() as usize,
        }
    }

    pub fn contains(&self, line: &Line) -> bool {
        match (&self.kind, line) {
            (AxesKind::Euclidean { classes }, Line::Euclidean { dir, .. }) => classes.iter().any(|c| c.dir() == dir.as_slice()),
            (AxesKind::Tree { tree, max_level }, Line::Vertical(x)) => {
                max_level.map_or(false, |m| x.level <= m && !tree.is_boundary(x))
            }
            _ => false,
        }
    }

    /// The tree axes: every axis in the window is `{x} × R` for `x` fixed by an odometer power.
    pub fn tree_levels(&self) -> Option<u32> {
        match &self.kind {
            AxesKind::Tree { max_level, .. } => *max_level,
            _ => None,
        }
    }
}

/// Classifies every window element and collects the axes of the hyperbolic ones.
pub fn enumerate_axes(group: &GroupSpec, bound: &Q) -> Result<AxesSpace, GroupError> {
    match &group.space {
        ModelSpace::Euclidean(_) => {
            let elements = enumerate_elements(group, bound, &group.space.origin())?;
            let mut by_dir: BTreeMap<Vec<i64>, AxisClass> = BTreeMap::new();
            for g in elements {
                if let IsometryClass::Hyperbolic { axis, .. } = classify(group, &g)? {
                    let entry = by_dir.entry(axis_dir(&axis)).or_insert_with(|| AxisClass {
                        class: parallel_class(&group.space, &axis),
                        observed: Vec::new(),
                        witnesses: Vec::new(),
                    });
                    if !entry.observed.contains(&axis) {
                        entry.observed.push(axis);
                    }
                    entry.witnesses.push(g);
                }
            }
            let classes = by_dir
                .into_values()
                .map(|mut c| {
                    c.observed.sort();
                    c
                })
                .collect();
            Ok(AxesSpace { space: group.space.clone(), bound: bound.clone(), kind: AxesKind::Euclidean { classes } })
        }
        ModelSpace::TreeLine(t) => {
            // gamma^k fixes exactly the nodes of level <= v2(k)
            let kmax = bound.floor().to_integer().to_u64().unwrap_or(u64::MAX);
            let max_level = (kmax >= 1).then(|| (63 - kmax.leading_zeros()).min(t.depth));
            Ok(AxesSpace { space: group.space.clone(), bound: bound.clone(), kind: AxesKind::Tree { tree: t.clone(), max_level } })
        }
        // a tree automorphism fixes the root, so nothing is hyperbolic
        ModelSpace::Tree(t) => {
            Ok(AxesSpace { space: group.space.clone(), bound: bound.clone(), kind: AxesKind::Tree { tree: t.clone(), max_level: None } })
        }
    }
}

fn axis_dir(line: &Line) -> Vec<i64> {
    match line {
        Line::Euclidean { dir, .. } => dir.clone(),
        Line::Vertical(_) => Vec::new(),
    }
}

/// Restricts the enumerated axes to the requested choice.
pub fn choose_axes(full: &AxesSpace, choice: AxesChoice) -> Result<AxesSpace, String> {
    match (choice, &full.kind) {
        (AxesChoice::Full, _) => Ok(full.clone()),
        (AxesChoice::Root, AxesKind::Tree { tree, .. }) => {
            Ok(AxesSpace { kind: AxesKind::Tree { tree: tree.clone(), max_level: Some(0) }, ..full.clone() })
        }
        (AxesChoice::Root, _) => Err("the root axes choice only applies to the tree example".into()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WellBehaved {
    pub closed_at_scale: bool,
    pub componentwise_convex: bool,
    pub invariant: bool,
    pub meets_components: bool,
    /// Resolution of the closure test.
    pub resolution: String,
    /// Human-readable evidence for any failing flag.
    pub evidence: Vec<String>,
}

impl WellBehaved {
    pub fn all(&self) -> bool {
        self.closed_at_scale && self.componentwise_convex && self.invariant && self.meets_components
    }

    pub fn first_failure(&self) -> Option<&'static str> {
        [
            (self.closed_at_scale, "closed_at_scale"),
            (self.componentwise_convex, "componentwise_convex"),
            (self.invariant, "invariant"),
            (self.meets_components, "meets_components"),
        ]
        .into_iter()
        .find(|(ok, _)| !ok)
        .map(|(_, name)| name)
    }
}

fn random_tree_point<R: Rng>(t: &TreeSpace, max_level: u32, rng: &mut R) -> TreePoint {
    let level = rng.gen_range(0..=max_level.min(t.depth));
    let addr = if level == 0 { 0 } else { rng.gen_range(0..(1u64 << level)) };
    let up = if level == 0 { Q::from_integer(0.into()) } else { t.edge_weight(level) * q(rng.gen_range(0..8), 8) };
    TreePoint { level, addr, up }
}

/// Checks the four well-behavedness conditions within the window, using
/// `samples` random probes for the sampled ones.
pub fn well_behaved_check<R: Rng>(
    axes: &AxesSpace,
    group: &GroupSpec,
    samples: usize,
    rng: &mut R,
) -> Result<WellBehaved, GroupError> {
    let mut evidence = Vec::new();
    match &axes.kind {
        AxesKind::Euclidean { classes } => {
            let resolution = "exact (full parallel classes)".to_string();
            let mut invariant = true;
            for g in &group.generators {
                let lin = g.lin().expect("Euclidean");
                for c in classes {
                    let img = primitive_direction(&lin.mul_vec(&int_vec(c.dir()))).expect("non-zero");
                    let (img, _) = canonical_sign(&img);
                    if !classes.iter().any(|d| d.dir() == img.as_slice()) {
                        invariant = false;
                        evidence.push(format!("{g} maps class {:?} to missing class {img:?}", c.dir()));
                    }
                }
            }
            // Each stored class is a whole parallel class, so geodesics between
            // class points stay inside; probe a few anyway.
            let mut convex = true;
            for c in classes {
                let m = c.class.model();
                for _ in 0..samples {
                    let rnd = |rng: &mut R| -> Point {
                        let ModelSpace::Euclidean(e) = &m else { unreachable!() };
                        Point::Euclidean((0..e.dim()).map(|_| q(rng.gen_range(-64..=64), 16)).collect())
                    };
                    let (a, b) = (rnd(rng), rnd(rng));
                    let mid = m.geodesic_point(&a, &b, &q(rng.gen_range(0..=16), 16))?;
                    if !axes.contains(&c.class.line_at(&mid)) {
                        convex = false;
                    }
                }
            }
            let witnesses = enumerate_elements(group, &axes.bound, &group.space.origin())?;
            let mut meets = true;
            for g in witnesses {
                if let IsometryClass::Hyperbolic { axis, .. } = classify(group, &g)? {
                    if !axes.contains(&axis) {
                        meets = false;
                        evidence.push(format!("class of {axis} holds no chosen axis"));
                    }
                }
            }
            Ok(WellBehaved {
                closed_at_scale: true,
                componentwise_convex: convex,
                invariant,
                meets_components: meets,
                resolution,
                evidence,
            })
        }
        AxesKind::Tree { tree, max_level } => {
            let resolution = format!("2^-{}", tree.depth);
            let Some(m) = *max_level else {
                evidence.push("no axes".into());
                return Ok(WellBehaved {
                    closed_at_scale: true,
                    componentwise_convex: true,
                    invariant: true,
                    meets_components: false,
                    resolution,
                    evidence,
                });
            };
            // A non-axis line the truncation cannot separate from the axes: a
            // boundary line whose depth-D ancestor carries an axis.
            let mut closed = true;
            if m >= tree.depth {
                let b = tree.boundary_point(0);
                let a = TreePoint::node(tree.depth, 0);
                let d = flat_strip_distance(&axes.space, &Line::Vertical(a.clone()), &Line::Vertical(b.clone()))?
                    .expect("vertical lines are parallel");
                debug_assert_eq!(d, Length::from_rational(&pow2_neg(tree.depth)));
                closed = false;
                evidence.push(format!(
                    "axis {} lies at distance 2^-{} from the non-axis line {}",
                    Line::Vertical(a),
                    tree.depth,
                    Line::Vertical(b)
                ));
            }
            let mut convex = true;
            let mut invariant = true;
            for _ in 0..samples {
                let x = random_tree_point(tree, m, rng);
                let y = random_tree_point(tree, m, rng);
                let s = q(rng.gen_range(0..=16), 16);
                let z = tree.geodesic_point(&x, &y, &s);
                if !axes.contains(&Line::Vertical(z.clone())) {
                    convex = false;
                    evidence.push(format!("geodesic point {z:?} between axes leaves the axes"));
                }
                for g in &group.generators {
                    let img = Line::Vertical(x.clone()).map(&axes.space, g);
                    if !axes.contains(&img) {
                        invariant = false;
                    }
                }
            }
            // one parallel class; it meets the chosen axes when they are non-empty
            let meets = axes.contains(&Line::Vertical(TreePoint::root()));
            Ok(WellBehaved { closed_at_scale: closed, componentwise_convex: convex, invariant, meets_components: meets, resolution, evidence })
        }
    }
}

/// A line with one of its two orientations; `+1` is the canonical orientation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedLine {
    pub line: Line,
    pub sign: i8,
}

/// The double cover `DA -> A` by orientations, with its sheet-swap involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedAxes {
    pub base: AxesSpace,
}

pub fn directed_double(axes: &AxesSpace) -> DirectedAxes {
    DirectedAxes { base: axes.clone() }
}

impl DirectedAxes {
    pub fn lift(&self, line: &Line, sign: i8) -> DirectedLine {
        DirectedLine { line: line.clone(), sign }
    }

    pub fn involution(&self, d: &DirectedLine) -> DirectedLine {
        DirectedLine { line: d.line.clone(), sign: -d.sign }
    }

    pub fn projection(&self, d: &DirectedLine) -> Line {
        d.line.clone()
    }

    pub fn act(&self, g: &Isometry, d: &DirectedLine) -> DirectedLine {
        let s = d.line.orientation_sign(g) as i8;
        DirectedLine { line: d.line.map(&self.base.space, g), sign: d.sign * s }
    }

    /// Distance in `DA`: the flat-strip distance on one sheet, infinite across sheets.
    pub fn distance(&self, a: &DirectedLine, b: &DirectedLine) -> Result<Option<Length>, crate::model::GeometryError> {
        if a.sign != b.sign {
            return Ok(None);
        }
        flat_strip_distance(&self.base.space, &a.line, &b.line)
    }
}

/// Whether `g` swaps the sheets over `line` (reverses its canonical orientation).
pub fn swaps_sheets(line: &Line, g: &Isometry) -> bool {
    line.orientation_sign(g) == -1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn p1_unit_axes() {
        let g = GroupSpec::preset("p1", 6).unwrap();
        let a = enumerate_axes(&g, &qi(1)).unwrap();
        assert_eq!(a.class_count(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let wb = well_behaved_check(&a, &g, 20, &mut rng).unwrap();
        assert!(wb.all(), "{wb:?}");
    }

    #[test]
    fn pg_glide_axis_present() {
        let g = GroupSpec::preset("pg", 6).unwrap();
        let a = enumerate_axes(&g, &qi(1)).unwrap();
        let AxesKind::Euclidean { classes } = &a.kind else { panic!() };
        let glide_axis = Line::through(&g.space, &[qi(0), qi(0)], &[qi(1), qi(0)]).unwrap();
        assert!(classes.iter().any(|c| c.observed.contains(&glide_axis)));
    }

    #[test]
    fn tree_axes_and_closure() {
        let g = GroupSpec::preset("tree-odometer", 12).unwrap();
        let a = enumerate_axes(&g, &qi(2)).unwrap();
        assert_eq!(a.tree_levels(), Some(1));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let full = enumerate_axes(&g, &qi(1 << 12)).unwrap();
        let wb = well_behaved_check(&full, &g, 50, &mut rng).unwrap();
        assert!(!wb.closed_at_scale);
        let root = choose_axes(&full, AxesChoice::Root).unwrap();
        let wb = well_behaved_check(&root, &g, 50, &mut rng).unwrap();
        assert!(wb.all(), "{wb:?}");
    }

    #[test]
    fn directed_double_covering_identities() {
        let g = GroupSpec::preset("pmm", 6).unwrap();
        let a = enumerate_axes(&g, &qi(1)).unwrap();
        let da = directed_double(&a);
        let axis = Line::through(&g.space, &[qi(0), qi(0)], &[qi(1), qi(0)]).unwrap();
        let up = da.lift(&axis, 1);
        assert_eq!(da.projection(&da.involution(&up)), da.projection(&up));
        assert_eq!(da.involution(&da.involution(&up)), up);
        assert_eq!(da.distance(&up, &da.involution(&up)).unwrap(), None);
        // the mirror x -> -x is perpendicular to the axis and swaps its sheets
        let perp = Isometry::linear(crate::linalg::QMat::from_i64(&[&[-1, 0], &[0, 1]]));
        assert!(swaps_sheets(&axis, &perp));
        let moved = da.act(&perp, &up);
        assert_eq!(moved, da.involution(&up));
    }
}
