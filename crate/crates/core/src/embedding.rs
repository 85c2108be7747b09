//! The base space `Y`: a curve in the unit disk accumulating at `z = (0, 0)`.
//!
//! `Y` is handled through its global coordinate ([`YPoint`]); the planar
//! picture comes from [`iota`]. The main curve
//! `x ↦ (x/(1+x²), x²/(1+x²))` is rational on rational input, injective, and
//! tends to `z` from both sides.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, JsonSchema)]
pub struct PlanePoint {
    pub u: Q,
    pub v: Q,
}

impl PlanePoint {
    pub fn norm_sq(&self) -> Q {
        &self.u * &self.u + &self.v * &self.v
    }
}

/// A point of `Y` by coordinate; `x = 0` is the accumulation point `z`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, JsonSchema)]
pub struct YPoint {
    pub x: Q,
}

impl YPoint {
    pub fn new(x: Q) -> Self {
        YPoint { x }
    }

    pub fn z() -> Self {
        YPoint { x: Q::zero() }
    }

    pub fn is_z(&self) -> bool {
        self.x.is_zero()
    }
}

impl fmt::Display for YPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_z() {
            f.write_str("z")
        } else {
            write!(f, "ι({})", self.x)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema, Default)]
#[serde(rename_all = "snake_case")]
pub enum EmbeddingSpec {
    /// `(x/(1+x²), x²/(1+x²))`
    #[default]
    MainCurve,
    /// `ρ(x)·(cos(1/x), sin(1/x))` with `ρ(x) = |x|/(1+|x|)`; floating point only.
    Spiral,
}

impl FromStr for EmbeddingSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "main" | "main_curve" => Ok(EmbeddingSpec::MainCurve),
            "spiral" => Ok(EmbeddingSpec::Spiral),
            other => Err(format!("unknown embedding {other:?}")),
        }
    }
}

impl fmt::Display for EmbeddingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmbeddingSpec::MainCurve => "main",
            EmbeddingSpec::Spiral => "spiral",
        })
    }
}

impl EmbeddingSpec {
    /// Floating-point evaluation, defined for both curves.
    pub fn eval_f64(&self, x: f64) -> (f64, f64) {
        match self {
            EmbeddingSpec::MainCurve => {
                let d = 1.0 + x * x;
                (x / d, x * x / d)
            }
            EmbeddingSpec::Spiral => {
                let rho = x.abs() / (1.0 + x.abs());
                let a = 1.0 / x;
                (rho * a.cos(), rho * a.sin())
            }
        }
    }
}

/// Exact image of a nonzero coordinate under the main curve.
pub fn iota(x: &Q, spec: EmbeddingSpec) -> Result<PlanePoint> {
    if spec == EmbeddingSpec::Spiral {
        return Err(Error::InexactSpiral);
    }
    if x.is_zero() {
        return Err(Error::ZeroCoordinate);
    }
    let x2 = x * x;
    let d = Q::one() + &x2;
    Ok(PlanePoint {
        u: x / &d,
        v: x2 / d,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct EmbeddingReport {
    pub sample_count: usize,
    /// No two distinct samples share an image.
    pub injective: bool,
    pub collisions: Vec<(Q, Q)>,
    /// `‖ι(x)‖² ≤ x²` on every sample.
    pub accumulation: bool,
    /// `‖ι(x)‖² < 1` on every sample.
    pub bounded: bool,
    /// `‖ι(x)‖²·(1 + x²) = x²` on every sample.
    pub norm_identity: bool,
    pub injectivity_argument: String,
}

impl EmbeddingReport {
    pub fn all_pass(&self) -> bool {
        self.injective && self.accumulation && self.bounded && self.norm_identity
    }
}

const INJECTIVITY_ARGUMENT: &str = "if x²/(1+x²) = y²/(1+y²) then x² = y², so y = ±x; \
     then x/(1+x²) = y/(1+x²) forces y = x";

/// Deterministic nonzero samples `±j/(j mod 11 + 1)` and `±1/j`.
pub fn default_samples(count: usize) -> Vec<Q> {
    (1..=count as i64)
        .map(|j| {
            let sign = if j % 2 == 0 { -1 } else { 1 };
            if j % 3 == 0 {
                Q::new(sign, j)
            } else {
                Q::new(sign * j, j % 11 + 1)
            }
        })
        .collect()
}

pub fn embedding_checks(sample_count: usize) -> Result<EmbeddingReport> {
    if sample_count == 0 {
        return Err(Error::InvalidPath("sample_count must be at least 1".into()));
    }
    embedding_checks_on(&default_samples(sample_count))
}

/// Runs the exact checks on caller-supplied samples.
pub fn embedding_checks_on(samples: &[Q]) -> Result<EmbeddingReport> {
    let distinct: BTreeSet<&Q> = samples.iter().collect();
    let mut seen = std::collections::BTreeMap::new();
    let mut collisions = Vec::new();
    let mut accumulation = true;
    let mut bounded = true;
    let mut norm_identity = true;
    let one = Q::one();
    for x in distinct {
        let p = iota(x, EmbeddingSpec::MainCurve)?;
        let n2 = p.norm_sq();
        let x2 = x * x;
        accumulation &= n2 <= x2;
        bounded &= n2 < one;
        norm_identity &= &n2 * &(&one + &x2) == x2;
        if let Some(prev) = seen.insert(p, x.clone()) {
            collisions.push((prev, x.clone()));
        }
    }
    Ok(EmbeddingReport {
        sample_count: samples.len(),
        injective: collisions.is_empty(),
        collisions,
        accumulation,
        bounded,
        norm_identity,
        injectivity_argument: INJECTIVITY_ARGUMENT.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn iota_examples() {
        let m = EmbeddingSpec::MainCurve;
        assert_eq!(iota(&q(1, 1), m).unwrap(), PlanePoint { u: q(1, 2), v: q(1, 2) });
        assert_eq!(iota(&q(-1, 1), m).unwrap(), PlanePoint { u: q(-1, 2), v: q(1, 2) });
        assert_eq!(iota(&q(2, 1), m).unwrap(), PlanePoint { u: q(2, 5), v: q(4, 5) });
        assert!(matches!(iota(&Q::zero(), m), Err(Error::ZeroCoordinate)));
        assert!(matches!(iota(&q(1, 1), EmbeddingSpec::Spiral), Err(Error::InexactSpiral)));
    }

    #[test]
    fn norm_examples() {
        let n2 = iota(&q(1, 10), EmbeddingSpec::MainCurve).unwrap().norm_sq();
        assert_eq!(n2, q(1, 101));
        assert!(n2 <= q(1, 100));
        assert_eq!(iota(&q(1, 1), EmbeddingSpec::MainCurve).unwrap().norm_sq(), q(1, 2));
    }

    #[test]
    fn small_sample_report() {
        let samples = [q(1, 1), q(-1, 1), q(1, 2), q(-1, 2), q(2, 1)];
        let r = embedding_checks_on(&samples).unwrap();
        assert!(r.all_pass());
        assert_eq!(r.sample_count, 5);
        assert!(embedding_checks(0).is_err());
        assert!(embedding_checks(50).unwrap().all_pass());
    }

    #[test]
    fn float_agrees_with_exact() {
        for x in [q(1, 3), q(-5, 2), q(7, 1)] {
            let p = iota(&x, EmbeddingSpec::MainCurve).unwrap();
            let (u, v) = EmbeddingSpec::MainCurve.eval_f64(x.to_f64());
            assert!((u - p.u.to_f64()).abs() < 1e-15 && (v - p.v.to_f64()).abs() < 1e-15);
        }
    }
}
