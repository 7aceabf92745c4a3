//! Named test subgroups for each preset group.

use serde::Serialize;

use crate::group::{GroupSpec, Isometry};
use crate::linalg::QMat;
use crate::model::TreeAutomorphism;
use crate::rational::{q, qi, Q};

/// A subgroup given by generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subgroup {
    pub name: String,
    #[serde(serialize_with = "ser_isometries")]
    pub generators: Vec<Isometry>,
}

fn ser_isometries<S: serde::Serializer>(gens: &[Isometry], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(gens.iter().map(|g| g.to_string()))
}

fn sub(name: &str, generators: Vec<Isometry>) -> Subgroup {
    Subgroup { name: name.to_string(), generators }
}

fn m(rows: [[i64; 2]; 2]) -> QMat {
    QMat::from_rows(rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect())
}

fn aff(rows: [[i64; 2]; 2], t: [Q; 2]) -> Isometry {
    Isometry::affine(m(rows), t.to_vec())
}

fn lin(rows: [[i64; 2]; 2]) -> Isometry {
    Isometry::linear(m(rows))
}

fn tr(x: i64, y: i64) -> Isometry {
    Isometry::translation(vec![qi(x), qi(y)])
}

const MIRROR: [[i64; 2]; 2] = [[1, 0], [0, -1]];
const MIRROR_V: [[i64; 2]; 2] = [[-1, 0], [0, 1]];
const HALF_TURN: [[i64; 2]; 2] = [[-1, 0], [0, -1]];

/// The default battery of a preset, in a fixed order.
pub fn default_battery(group: &GroupSpec) -> Vec<Subgroup> {
    let trivial = sub("trivial", vec![]);
    let translation = sub("translation", vec![tr(1, 0)]);
    let z2 = sub("Z2", vec![tr(1, 0), tr(0, 1)]);
    let name = group.name.as_str();
    match name {
        "p1" => vec![trivial, translation, z2],
        "p2" => vec![
            trivial,
            sub("C2", vec![lin(HALF_TURN)]),
            translation,
            sub("Dinf", vec![lin(HALF_TURN), aff(HALF_TURN, [qi(1), qi(0)])]),
            z2,
        ],
        "pm" => vec![
            trivial,
            sub("mirror", vec![lin(MIRROR)]),
            translation,
            sub("glide", vec![aff(MIRROR, [qi(1), qi(0)])]),
            sub("Dinf", vec![lin(MIRROR), aff(MIRROR, [qi(0), qi(1)])]),
            z2,
        ],
        "pg" => vec![trivial, translation, sub("glide", vec![aff(MIRROR, [q(1, 2), qi(0)])]), z2],
        "pmm" => vec![
            trivial,
            sub("C2", vec![lin(HALF_TURN)]),
            sub("mirror", vec![lin(MIRROR)]),
            sub("D2", vec![lin(MIRROR), lin(MIRROR_V)]),
            translation,
            sub("glide", vec![aff(MIRROR, [qi(1), qi(0)])]),
            sub("Dinf", vec![lin(MIRROR_V), aff(MIRROR_V, [qi(1), qi(0)])]),
            z2,
        ],
        "cm" => vec![trivial, sub("mirror", vec![lin([[-1, 0], [1, 1]])]), translation, z2],
        "p4" => vec![trivial, sub("C2", vec![lin(HALF_TURN)]), sub("C4", vec![lin([[0, -1], [1, 0]])]), translation, z2],
        "p3" => vec![trivial, sub("C3", vec![lin([[0, -1], [1, -1]])]), translation, z2],
        "p6" => vec![
            trivial,
            sub("C2", vec![lin(HALF_TURN)]),
            sub("C3", vec![lin([[0, -1], [1, -1]])]),
            sub("C6", vec![lin([[1, -1], [1, 0]])]),
            translation,
            z2,
        ],
        "tree-odometer" => {
            let gamma = |k: i64| Isometry::TreeLine { aut: TreeAutomorphism::Odometer(k), shift: qi(k) };
            vec![trivial, sub("translation", vec![gamma(1)]), sub("translation2", vec![gamma(2)])]
        }
        _ => vec![trivial],
    }
}

/// `default` or a comma-separated list of names from the default battery.
pub fn select_battery(group: &GroupSpec, spec: &str) -> Result<Vec<Subgroup>, String> {
    let all = default_battery(group);
    if spec == "default" {
        return Ok(all);
    }
    spec.split(',')
        .map(str::trim)
        .map(|n| {
            all.iter().find(|s| s.name == n).cloned().ok_or_else(|| {
                let known: Vec<&str> = all.iter().map(|s| s.name.as_str()).collect();
                format!("no subgroup `{n}` in the battery of {} (known: {})", group.name, known.join(", "))
            })
        })
        .collect()
}
