//! Family membership of subgroups, joins with the diagonal action, and the
//! quotient complex built from the doubled axes nerve.

mod battery;
mod build;
mod family;
mod join;
mod quotient;
mod sphere;
mod verify;

pub use build::{build_efbc, build_efin, build_evc, build_k, build_u, build_v, summarize, BuildConfig, BuildError, Construction, ConstructionSummary, KPart, UPart, VPart};
pub use battery::{default_battery, select_battery, Subgroup};
pub use family::{classify_family, Family, FamilyTag};
pub use join::{analyze_join, fix_join_identity, join_action, join_status, JoinComplex, JoinIdentity, JoinStatus};
pub use quotient::{doubled_action, doubled_nerve, quotient_k, sheet_swap, KActionCheck, KError, ProductCell, QuotientK};
pub use sphere::SphereModel;
pub use verify::{
    audit_action, audit_construction, audit_cover_action, verify, verify_row, ActionAudit, EquivarianceAudit, Expectation, Row, RowStatus, RestrictionSummary, Target, Verification,
};

#[cfg(test)]
mod tests;
