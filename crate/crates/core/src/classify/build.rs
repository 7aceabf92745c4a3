//! Assembly of the three models: `N(U)`, `N(U) * N(V)` and `N(U) * K`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::covers::{
    axes_nerve, build_axes_cover, check_axes_cover, check_good_cover, cover_window, multiplicity, nerve, AxesCover, CoverCheck,
    CoverError, CoverPolicy, GoodCover,
};
use crate::group::{GroupError, GroupSpec};
use crate::homology::{analyze, analyze_simplicial, HomologyResult, SimplicialComplex};
use crate::lines::{choose_axes, enumerate_axes, well_behaved_check, AxesChoice, AxesSpace, WellBehaved};
use crate::rational::Q;

use super::quotient::{doubled_nerve, quotient_k, KError, QuotientK};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Quotient(#[from] KError),
    #[error("construction refused: {0}")]
    Refused(String),
}

impl From<crate::model::GeometryError> for BuildError {
    fn from(e: crate::model::GeometryError) -> Self {
        BuildError::Cover(e.into())
    }
}

#[derive(Debug, Clone)]
pub struct BuildConfig {
    pub group: GroupSpec,
    pub window: Q,
    pub axes_bound: Q,
    pub axes_choice: AxesChoice,
    pub sphere_dim: usize,
    pub policy: CoverPolicy,
    /// Probes per sampled well-behavedness condition.
    pub samples: usize,
    pub seed: u64,
    /// Largest admissible local finiteness constant.
    pub max_multiplicity: usize,
}

impl BuildConfig {
    pub fn new(group: GroupSpec, window: Q) -> Self {
        BuildConfig {
            group,
            axes_bound: window.clone(),
            window,
            axes_choice: AxesChoice::Full,
            sphere_dim: 3,
            policy: CoverPolicy::default(),
            samples: 64,
            seed: 0,
            max_multiplicity: 64,
        }
    }
}

/// The cover of the window of `X` and its nerve.
#[derive(Debug, Clone)]
pub struct UPart {
    pub cover: GoodCover,
    pub nerve: SimplicialComplex,
    pub check: CoverCheck,
    pub multiplicity: usize,
    pub analysis: HomologyResult,
}

/// The cover of the space of axes and its nerve.
#[derive(Debug, Clone)]
pub struct VPart {
    pub axes: AxesSpace,
    pub well_behaved: WellBehaved,
    pub cover: AxesCover,
    pub nerve: SimplicialComplex,
    pub class_checks: Vec<CoverCheck>,
    pub analysis: HomologyResult,
}

#[derive(Debug, Clone)]
pub struct KPart {
    pub quotient: QuotientK,
    pub analysis: HomologyResult,
}

#[derive(Debug, Clone)]
pub enum Construction {
    Fin { u: UPart },
    Vc { u: UPart, v: VPart },
    Fbc { u: UPart, v: VPart, k: KPart },
}

impl Construction {
    pub fn u(&self) -> &UPart {
        match self {
            Construction::Fin { u } | Construction::Vc { u, .. } | Construction::Fbc { u, .. } => u,
        }
    }

    pub fn v(&self) -> Option<&VPart> {
        match self {
            Construction::Fin { .. } => None,
            Construction::Vc { v, .. } | Construction::Fbc { v, .. } => Some(v),
        }
    }

    pub fn k(&self) -> Option<&KPart> {
        match self {
            Construction::Fbc { k, .. } => Some(k),
            _ => None,
        }
    }
}

/// Size summary of a construction, for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionSummary {
    pub u_balls: usize,
    pub u_orbits: usize,
    pub u_counts: Vec<usize>,
    pub u_multiplicity: usize,
    pub u_cover_ok: bool,
    pub u_elements_checked: usize,
    pub v_classes: Option<usize>,
    pub v_counts: Option<Vec<usize>>,
    pub v_cover_ok: Option<bool>,
    pub well_behaved: Option<WellBehaved>,
    pub k_counts: Option<Vec<usize>>,
    pub k_two_preimages: Option<bool>,
    pub k_self_identified: Option<usize>,
    pub sphere_dim: Option<usize>,
}

pub fn summarize(c: &Construction) -> ConstructionSummary {
    let u = c.u();
    let v = c.v();
    let k = c.k();
    ConstructionSummary {
        u_balls: u.cover.len(),
        u_orbits: u.cover.reps.len(),
        u_counts: u.nerve.counts(),
        u_multiplicity: u.multiplicity,
        u_cover_ok: u.check.passed(),
        u_elements_checked: u.check.elements_checked,
        v_classes: v.map(|v| v.cover.classes.len()),
        v_counts: v.map(|v| v.nerve.counts()),
        v_cover_ok: v.map(|v| v.class_checks.iter().all(CoverCheck::passed)),
        well_behaved: v.map(|v| v.well_behaved.clone()),
        k_counts: k.map(|k| k.quotient.counts()),
        k_two_preimages: k.map(|k| k.quotient.two_preimages == 2 * k.quotient.cell_count()),
        k_self_identified: k.map(|k| k.quotient.self_identified),
        sphere_dim: k.map(|k| k.quotient.sphere.dim),
    }
}

pub fn build_u(cfg: &BuildConfig) -> Result<UPart, BuildError> {
    let cover = cover_window(&cfg.group, &cfg.window, &cfg.policy)?;
    let check = check_good_cover(&cover)?;
    let nerve = nerve(&cover)?;
    let m = multiplicity(&nerve);
    if m > cfg.max_multiplicity {
        return Err(CoverError::TooManyOverlaps { found: m, cap: cfg.max_multiplicity }.into());
    }
    let analysis = analyze_simplicial(&nerve);
    Ok(UPart { cover, nerve, check, multiplicity: m, analysis })
}

/// Enumerates the axes, refusing a choice that is not well behaved at scale.
pub fn build_v(cfg: &BuildConfig) -> Result<VPart, BuildError> {
    let full = enumerate_axes(&cfg.group, &cfg.axes_bound)?;
    let axes = choose_axes(&full, cfg.axes_choice).map_err(BuildError::Refused)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let well_behaved = well_behaved_check(&axes, &cfg.group, cfg.samples, &mut rng)?;
    if let Some(flag) = well_behaved.first_failure() {
        let evidence = well_behaved.evidence.first().map(|e| format!(" ({e})")).unwrap_or_default();
        return Err(BuildError::Refused(format!("the axes choice is not well behaved: {flag} fails{evidence}")));
    }
    let cover = build_axes_cover(&cfg.group, &axes, &cfg.window, &cfg.policy)?;
    let class_checks = check_axes_cover(&cover)?;
    let nerve = axes_nerve(&cover)?;
    let analysis = analyze_simplicial(&nerve);
    Ok(VPart { axes, well_behaved, cover, nerve, class_checks, analysis })
}

pub fn build_k(v: &VPart, n: usize) -> Result<KPart, BuildError> {
    if n == 0 {
        return Err(BuildError::Refused("the sphere dimension must be at least 1".into()));
    }
    let quotient = quotient_k(&doubled_nerve(&v.nerve), n)?;
    let analysis = analyze(&quotient.chain_complex());
    Ok(KPart { quotient, analysis })
}

pub fn build_efin(cfg: &BuildConfig) -> Result<Construction, BuildError> {
    Ok(Construction::Fin { u: build_u(cfg)? })
}

pub fn build_evc(cfg: &BuildConfig) -> Result<Construction, BuildError> {
    let v = build_v(cfg)?;
    Ok(Construction::Vc { u: build_u(cfg)?, v })
}

pub fn build_efbc(cfg: &BuildConfig) -> Result<Construction, BuildError> {
    let v = build_v(cfg)?;
    let k = build_k(&v, cfg.sphere_dim)?;
    Ok(Construction::Fbc { u: build_u(cfg)?, v, k })
}
