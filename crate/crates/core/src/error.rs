use thiserror::Error;

use crate::rational::Q;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("k = {k} is outside the supported range {}", range_text(*.min, *.max))]
    KOutOfRange { k: usize, min: usize, max: usize },
    #[error("branch {branch} is outside 1..={k}")]
    BranchOutOfRange { branch: usize, k: usize },
    #[error("origin index {index} is outside 1..={k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("radius must be positive, got {0}")]
    NonpositiveRadius(Q),
    #[error("the two points are identical")]
    IdenticalPoints,
    #[error("sequence form not supported: {0}")]
    UnsupportedSequenceForm(String),
    #[error("the embedding is undefined at coordinate 0")]
    ZeroCoordinate,
    #[error("the spiral embedding has no exact rational form")]
    InexactSpiral,
    #[error("z has {0} preimages; no regular inverse")]
    SingularPoint(usize),
    #[error("section indices must differ")]
    EqualIndices,
    #[error("basepoint must be positive, got {0}")]
    NonpositiveBasepoint(Q),
    #[error("path rests at z on [{start}, {end}]")]
    ZPlateau { start: Box<Q>, end: Box<Q> },
    #[error("homotopy field vanishes identically on triangle {triangle}")]
    ZPlateau2D { triangle: usize },
    #[error("start point does not lie over the path's initial point: {0}")]
    StartMismatch(String),
    #[error("bottom assignment does not match the bottom z-times: {0}")]
    AssignmentDomainMismatch(String),
    #[error("z-time {0} carries no origin label")]
    UnlabeledZTime(Q),
    #[error("loop is not null-homotopic in this model (reduced word {0})")]
    NotNullhomotopic(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("invalid homotopy field: {0}")]
    InvalidField(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid loop: {0}")]
    InvalidLoop(String),
    #[error("grid size {0} is below the minimum of 8")]
    GridTooCoarse(usize),
    #[error("tube parameter {0} must lie in [0, 1)")]
    TubeParameterOutOfRange(Q),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("certificate re-check failed: {0}")]
    Recheck(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn range_text(min: usize, max: usize) -> String {
    if max == usize::MAX {
        format!("k >= {min}")
    } else {
        format!("{min}..={max}")
    }
}

impl Error {
    /// Whether the error reports a failed certificate re-check rather than bad input.
    pub fn is_recheck(&self) -> bool {
        matches!(self, Error::Recheck(_))
    }
}

pub(crate) fn recheck(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Recheck(msg()))
    }
}
