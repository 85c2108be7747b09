//! Exact model of the line with k inseparable origins, its projection onto a
//! curve accumulating at one point, and machine-checkable certificates for
//! the covering-space properties that fail there.

pub mod audit;
pub mod embedding;
pub mod error;
pub mod lifting;
pub mod projection;
pub mod rational;
pub mod space;
pub mod symmetry;
pub mod thickened;

pub use error::{Error, Result};
pub use rational::{q, Q};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/space.md")]
    mod space {}
    #[doc = include_str!("../../../book/src/projection.md")]
    mod projection {}
    #[doc = include_str!("../../../book/src/lifting.md")]
    mod lifting {}
    #[doc = include_str!("../../../book/src/homotopy.md")]
    mod homotopy {}
    #[doc = include_str!("../../../book/src/symmetry.md")]
    mod symmetry {}
    #[doc = include_str!("../../../book/src/thickened.md")]
    mod thickened {}
    #[doc = include_str!("../../../book/src/audit.md")]
    mod audit {}
}
