//! Claim audit, certificates, text formats and figures.

mod certificate;
mod format;
mod render;
mod report;

pub use certificate::{
    Certificate, ConnectingPaths, LocalChart, LoopClassRecord, PointContraction, RegularLocus,
    SeparationRecord,
};
pub use format::{parse_plfield, parse_plpath, write_plfield, write_plpath};
pub use render::{render_figure, write_figure, SvgScene};
pub use report::{
    run_audit, AuditFlags, ClaimRecord, ModelVerdict, ReportDocument, Verdict, AUDIT_MAX_K,
    AUDIT_MIN_K, CLAIM_IDS, SCHEMA_VERSION,
};
