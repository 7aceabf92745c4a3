use num_traits::Zero;

use crate::lines::Line;
use crate::model::Point;
use crate::rational::Q;

use super::{enumerate_elements, GroupError, GroupSpec, Isometry};

/// Image of a line stabiliser in the isometry group of the line, as seen in a window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LineImage {
    /// No element of the window moves the line's points.
    TrivialAtScale,
    /// A single reflection of the line and nothing else.
    Reflection,
    InfiniteCyclic,
    InfiniteDihedral,
}

/// How one element acts on a line: `s -> sign * s + shift` in the line's own coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineAction {
    pub element: Isometry,
    pub sign: i64,
    pub shift: Q,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerReport {
    pub image: LineImage,
    pub actions: Vec<LineAction>,
    pub kernel: Vec<Isometry>,
    /// Kernel at twice the bound has the same size.
    pub kernel_stable: bool,
}

/// The 1-D action of `g` on a line it preserves.
pub fn line_action(group: &GroupSpec, line: &Line, g: &Isometry) -> LineAction {
    let space = &group.space;
    let a = line.anchor(space);
    let ga = g.apply(space, &a);
    let shift = match (line, &a, &ga) {
        (Line::Euclidean { .. }, Point::Euclidean(x), Point::Euclidean(y)) => {
            let f = line.frame(space).expect("Euclidean line");
            f.along(y) - f.along(x)
        }
        (Line::Vertical(_), Point::TreeLine(_, s), Point::TreeLine(_, t)) => t - s,
        _ => unreachable!(),
    };
    LineAction { element: g.clone(), sign: line.orientation_sign(g), shift }
}

fn stabilizer_actions(group: &GroupSpec, line: &Line, bound: &Q) -> Result<Vec<LineAction>, GroupError> {
    let space = &group.space;
    let base = line.anchor(space);
    Ok(enumerate_elements(group, bound, &base)?
        .into_iter()
        .filter(|g| line.map(space, g) == *line)
        .map(|g| line_action(group, line, &g))
        .collect())
}

fn kernel_of(actions: &[LineAction]) -> Vec<Isometry> {
    actions.iter().filter(|a| a.sign == 1 && a.shift.is_zero()).map(|a| a.element.clone()).collect()
}

/// Classifies the image of the stabiliser of `line` from the elements with
/// displacement at most `bound` at the line's anchor.
pub fn line_stabilizer_image(group: &GroupSpec, line: &Line, bound: &Q) -> Result<StabilizerReport, GroupError> {
    let actions = stabilizer_actions(group, line, bound)?;
    let kernel = kernel_of(&actions);
    let wider = stabilizer_actions(group, line, &(bound + bound))?;
    let kernel_stable = kernel_of(&wider).len() == kernel.len();
    let translates = actions.iter().any(|a| a.sign == 1 && !a.shift.is_zero());
    let mut reflection_centres: Vec<Q> = actions.iter().filter(|a| a.sign == -1).map(|a| a.shift.clone()).collect();
    reflection_centres.sort();
    reflection_centres.dedup();
    let image = match (translates, reflection_centres.len()) {
        (false, 0) => LineImage::TrivialAtScale,
        (false, 1) => LineImage::Reflection,
        (true, 0) => LineImage::InfiniteCyclic,
        _ => LineImage::InfiniteDihedral,
    };
    Ok(StabilizerReport { image, actions, kernel, kernel_stable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int_vec;
    use crate::model::TreePoint;
    use crate::rational::qi;

    fn x_axis(g: &GroupSpec) -> Line {
        Line::through(&g.space, &int_vec(&[0, 0]), &int_vec(&[1, 0])).unwrap()
    }

    #[test]
    fn p1_translation_axis_is_cyclic() {
        let g = GroupSpec::preset("p1", 6).unwrap();
        let r = line_stabilizer_image(&g, &x_axis(&g), &qi(2)).unwrap();
        assert_eq!(r.image, LineImage::InfiniteCyclic);
        assert_eq!(r.kernel.len(), 1);
        assert!(r.kernel_stable);
    }

    #[test]
    fn pmm_mirror_axis_is_dihedral() {
        let g = GroupSpec::preset("pmm", 6).unwrap();
        let r = line_stabilizer_image(&g, &x_axis(&g), &qi(2)).unwrap();
        assert_eq!(r.image, LineImage::InfiniteDihedral);
        // the reflection in the axis itself fixes it pointwise
        assert_eq!(r.kernel.len(), 2);
    }

    #[test]
    fn tree_root_line_is_cyclic() {
        let g = GroupSpec::preset("tree-odometer", 8).unwrap();
        let r = line_stabilizer_image(&g, &Line::Vertical(TreePoint::root()), &qi(2)).unwrap();
        assert_eq!(r.image, LineImage::InfiniteCyclic);
        assert_eq!(r.kernel.len(), 1);
    }

    #[test]
    fn tiny_window_is_reported_at_scale() {
        let g = GroupSpec::preset("p1", 6).unwrap();
        let r = line_stabilizer_image(&g, &x_axis(&g), &crate::rational::q(1, 2)).unwrap();
        assert_eq!(r.image, LineImage::TrivialAtScale);
    }
}
