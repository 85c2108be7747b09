//! Piecewise-linear paths and homotopies in `Y` and their lifts to `L`.

mod field;
mod homotopy;
mod lift;
mod path;
mod zero_set;

pub use field::{make_merging_field, HomotopyField};
pub use homotopy::{
    attempt_homotopy_lift, Constraint, LiftCertificate, LiftOutcome, NoLiftScope,
};
pub use lift::{
    enumerate_lifts, monodromy_verdict, verify_lift_continuity, ContinuityFailure,
    ContinuityVerdict, LiftNode, LiftedPath, SegmentModulus, UndefinedMonodromy,
};
pub use path::{double_dip_path, make_gamma, PLPathY};
pub use zero_set::{extract_zero_set, ZeroComponent, ZeroSegment, ZeroSetComplex};
