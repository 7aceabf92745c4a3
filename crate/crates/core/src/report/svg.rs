//! Planar figures: window, cover balls coloured by orbit, axes coloured by
//! parallel class.

use std::fmt::Write as _;

use crate::covers::GoodCover;
use crate::linalg::{int_vec, QMat};
use crate::lines::{AxesKind, AxesSpace, Line};
use crate::model::{ModelSpace, Point};
use crate::rational::{to_f64, Q};

const PALETTE: [&str; 12] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac", "#86bcb6", "#d37295",
];

/// Image of the lattice basis in the plane (lower-triangular factor of the Gram matrix).
fn embedding(gram: &QMat) -> [[f64; 2]; 2] {
    let g = |i, j| to_f64(gram.get(i, j));
    let a = g(0, 0).sqrt();
    let b = g(0, 1) / a;
    let c = (g(1, 1) - b * b).max(0.0).sqrt();
    [[a, 0.0], [b, c]]
}

fn to_plane(e: &[[f64; 2]; 2], x: &[Q]) -> (f64, f64) {
    let (u, v) = (to_f64(&x[0]), to_f64(&x[1]));
    (u * e[0][0] + v * e[1][0], u * e[0][1] + v * e[1][1])
}

fn num(x: f64) -> String {
    let s = format!("{:.4}", x);
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FigureCounts {
    pub balls: usize,
    pub axis_lines: usize,
    pub axis_classes: usize,
}

/// Renders the figure; `None` when the space is not the plane.
pub fn render(space: &ModelSpace, window: &Q, cover: Option<&GoodCover>, axes: Option<&AxesSpace>) -> Option<(String, FigureCounts)> {
    let ModelSpace::Euclidean(e) = space else { return None };
    if e.dim() != 2 {
        return None;
    }
    let emb = embedding(&e.gram);
    let r = to_f64(window);
    let half = r * 1.25 + 0.5;
    let scale = 400.0 / (2.0 * half);
    let mut counts = FigureCounts::default();
    let mut out = String::new();
    let _ = writeln!(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"{} {} {} {}\">", num(-half), num(-half), num(2.0 * half), num(2.0 * half));
    let _ = writeln!(out, "<defs><clipPath id=\"view\"><rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/></clipPath></defs>", num(-half), num(-half), num(2.0 * half), num(2.0 * half));
    let _ = writeln!(out, "<g transform=\"scale(1,-1)\" clip-path=\"url(#view)\">");
    let stroke = num(1.0 / scale);
    if let Some(c) = cover {
        let _ = writeln!(out, "<g id=\"cover\" fill-opacity=\"0.15\" stroke-width=\"{stroke}\">");
        for (b, o) in c.balls.iter().zip(&c.orbit) {
            let Point::Euclidean(x) = &b.center else { continue };
            let (px, py) = to_plane(&emb, x);
            let col = PALETTE[o % PALETTE.len()];
            let _ = writeln!(out, "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{col}\" stroke=\"{col}\"/>", num(px), num(py), num(to_f64(&b.radius)));
            counts.balls += 1;
        }
        let _ = writeln!(out, "</g>");
    }
    if let Some(AxesSpace { kind: AxesKind::Euclidean { classes }, .. }) = axes {
        let _ = writeln!(out, "<g id=\"axes\" stroke-width=\"{}\">", num(2.0 / scale));
        for (k, class) in classes.iter().enumerate() {
            let col = PALETTE[(k + 6) % PALETTE.len()];
            let dir = to_plane(&emb, &int_vec(class.dir()));
            let len = (dir.0 * dir.0 + dir.1 * dir.1).sqrt();
            let (dx, dy) = (dir.0 / len * 2.0 * half, dir.1 / len * 2.0 * half);
            let _ = writeln!(out, "<g class=\"axis-class\" stroke=\"{col}\">");
            for line in &class.observed {
                let Point::Euclidean(p) = line.anchor(space) else { continue };
                let (px, py) = to_plane(&emb, &p);
                let _ = writeln!(out, "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>", num(px - dx), num(py - dy), num(px + dx), num(py + dy));
                counts.axis_lines += 1;
            }
            let _ = writeln!(out, "</g>");
            counts.axis_classes += 1;
        }
        let _ = writeln!(out, "</g>");
    }
    let _ = writeln!(out, "<circle id=\"window\" cx=\"0\" cy=\"0\" r=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"{}\"/>", num(r), num(2.0 / scale));
    let _ = writeln!(out, "</g>\n</svg>");
    Some((out, counts))
}

/// Keeps the observed axes that pass within `radius` of the origin.
pub fn axes_near_origin(space: &ModelSpace, axes: &AxesSpace, radius: &Q) -> AxesSpace {
    let mut out = axes.clone();
    if let AxesKind::Euclidean { classes } = &mut out.kind {
        for c in classes.iter_mut() {
            c.observed.retain(|l: &Line| {
                let Line::Euclidean { class, .. } = l else { return true };
                let Some(f) = l.frame(space) else { return true };
                let d2 = crate::linalg::gnorm2(&f.class_gram, class);
                d2 <= radius * radius
            });
        }
    }
    out
}
