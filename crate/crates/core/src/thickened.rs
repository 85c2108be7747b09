//! The thickened space `L × [0, 1]` (origins glued at `t = 1`) mapped onto
//! the closed disk by sweeping each point of the curve radially outwards.
//!
//! Conventions: the sweep runs to the unit circle (`r ≡ 1`), so
//! `p([x], t) = (1 − t)·ι(x) + t·ι(x)/‖ι(x)‖`; origins, where that formula is
//! undefined, travel along the ray `(o_i, t) ↦ (t, 0)`. Everything here is
//! floating point.

use std::f64::consts::TAU;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddingSpec;
use crate::error::{Error, Result};
use crate::lifting::{enumerate_lifts, PLPathY};
use crate::rational::Q;
use crate::space::{CanonicalPoint, SpaceConfig, TopologyModel};

/// Tolerance for "this image point hits that grid point".
pub const COVER_TOL: f64 = 1e-6;
/// Relative tolerance for comparing computed floats.
pub const REL_TOL: f64 = 1e-9;

pub const R_CONVENTION: &str = "r ≡ 1: the sweep from ι(x) ends on the unit circle";
pub const ORIGIN_CONVENTION: &str = "(o_i, t) ↦ (t, 0)";

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct ThickPoint {
    pub base: CanonicalPoint,
    pub t: Q,
}

impl ThickPoint {
    /// `t ∈ [0, 1]`; origins at `t = 1` are all identified with `(o_1, 1)`.
    pub fn new(base: CanonicalPoint, t: Q) -> Result<Self> {
        if t.is_negative() || t > Q::one() {
            return Err(Error::TubeParameterOutOfRange(t));
        }
        if matches!(&base, CanonicalPoint::Regular(x) if x.is_zero()) {
            return Err(Error::ZeroCoordinate);
        }
        let base = match base {
            CanonicalPoint::Origin(_) if t == Q::one() => CanonicalPoint::Origin(1),
            other => other,
        };
        Ok(ThickPoint { base, t })
    }
}

fn sweep(x: f64, t: f64, spec: EmbeddingSpec) -> (f64, f64) {
    let (u, v) = spec.eval_f64(x);
    let n = u.hypot(v);
    ((1.0 - t) * u + t * u / n, (1.0 - t) * v + t * v / n)
}

pub fn thick_project(p: &ThickPoint, spec: EmbeddingSpec) -> (f64, f64) {
    let t = p.t.to_f64();
    match &p.base {
        CanonicalPoint::Origin(_) => (t, 0.0),
        CanonicalPoint::Regular(x) => sweep(x.to_f64(), t, spec),
    }
}

pub fn thick_fibre_z(k: usize) -> Result<Vec<ThickPoint>> {
    let cfg = SpaceConfig::new(k, TopologyModel::Quotient)?;
    cfg.origins().map(|o| ThickPoint::new(o, Q::zero())).collect()
}

/// `|a − b| ≤ REL_TOL·max(1, |a|, |b|)`.
pub fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= REL_TOL * a.abs().max(b.abs()).max(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Coverage {
    /// Grid points: radii `a/n` for `a = 1..=n` times angles `2πb/n`; `z`
    /// itself is excluded.
    pub grid_points: usize,
    pub covered: usize,
    pub fraction: f64,
    /// Every grid point with no image point within the tolerance.
    pub uncovered: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct SequenceProbe {
    /// `"+1/n"` or `"-1/n"`.
    pub sequence: String,
    /// `(n, p([±1/n], t))` for `n = 10⁴ … 10⁷`.
    pub samples: Vec<(u64, (f64, f64))>,
    /// Last sample, if the last two samples agree to within the tolerance.
    pub limit: Option<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ContinuityProbe {
    pub origin: usize,
    pub t: Q,
    pub value: (f64, f64),
    pub sequences: Vec<SequenceProbe>,
    /// Distinct limits found, as unit vectors.
    pub limit_directions: Vec<(f64, f64)>,
    /// Some sequence has no limit or a limit other than `value`.
    pub discontinuous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct ThickVerdictRow {
    pub claim: String,
    pub holds: bool,
    pub evidence: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct ThickAuditReport {
    pub grid_n: usize,
    pub embedding: EmbeddingSpec,
    pub cover_tolerance: f64,
    pub relative_tolerance: f64,
    pub r_convention: String,
    pub origin_convention: String,
    pub coverage: Coverage,
    pub probes: Vec<ContinuityProbe>,
    pub verdicts: Vec<ThickVerdictRow>,
}

fn close(a: (f64, f64), b: (f64, f64), tol: f64) -> bool {
    (a.0 - b.0).hypot(a.1 - b.1) <= tol
}

/// Tube parameter placing the sweep from `x` at radius `r`, if any.
fn tube_param(x: f64, r: f64, spec: EmbeddingSpec) -> Option<f64> {
    let (u, v) = spec.eval_f64(x);
    let n = u.hypot(v);
    if !n.is_finite() || n == 0.0 {
        return None;
    }
    if 1.0 - n < 1e-15 {
        return Some(1.0);
    }
    let t = (r - n) / (1.0 - n);
    (-COVER_TOL..=1.0 + COVER_TOL).contains(&t).then(|| t.clamp(0.0, 1.0))
}

/// Whether some image point lies within [`COVER_TOL`] of the grid point at
/// radius `r`, angle `phi`. Candidates are solved from the inverse of the
/// angle and then checked by evaluating forwards.
fn covered(r: f64, phi: f64, spec: EmbeddingSpec) -> bool {
    let target = (r * phi.cos(), r * phi.sin());
    if close((target.0.clamp(0.0, 1.0), 0.0), target, COVER_TOL) {
        return true;
    }
    let xs: Vec<f64> = match spec {
        // direction of ι(x) is (1, x) up to sign, so x = tan φ
        EmbeddingSpec::MainCurve => vec![phi.tan()],
        // direction of ι(x) is the angle 1/x; take the first winding close
        // enough to z that the sweep can reach radius r
        EmbeddingSpec::Spiral => {
            let reach = if r >= 1.0 { f64::INFINITY } else { r / (1.0 - r) };
            let m = ((1.0 / reach - phi) / TAU).ceil().max(0.0);
            let m = if phi + TAU * m <= 0.0 { m + 1.0 } else { m };
            vec![1.0 / (phi + TAU * m)]
        }
    };
    xs.into_iter().any(|x| {
        tube_param(x, r, spec).is_some_and(|t| close(sweep(x, t, spec), target, COVER_TOL))
    })
}

fn coverage(grid_n: usize, spec: EmbeddingSpec) -> Coverage {
    let n = grid_n as f64;
    let mut covered_count = 0;
    let mut uncovered = Vec::new();
    for b in 0..grid_n {
        let phi = TAU * b as f64 / n;
        for a in 1..=grid_n {
            let r = a as f64 / n;
            if covered(r, phi, spec) {
                covered_count += 1;
            } else {
                uncovered.push((r * phi.cos(), r * phi.sin()));
            }
        }
    }
    let total = grid_n * grid_n;
    Coverage {
        grid_points: total,
        covered: covered_count,
        fraction: covered_count as f64 / total as f64,
        uncovered,
    }
}

const PROBE_NS: [u64; 4] = [10_000, 100_000, 1_000_000, 10_000_000];

fn unit(p: (f64, f64)) -> (f64, f64) {
    let n = p.0.hypot(p.1);
    (p.0 / n, p.1 / n)
}

pub fn continuity_probe(origin: usize, t: &Q, spec: EmbeddingSpec) -> Result<ContinuityProbe> {
    let point = ThickPoint::new(CanonicalPoint::Origin(origin), t.clone())?;
    let value = thick_project(&point, spec);
    let tf = t.to_f64();
    let sequences: Vec<SequenceProbe> = [(1.0, "+1/n"), (-1.0, "-1/n")]
        .into_iter()
        .map(|(sign, name)| {
            let samples: Vec<(u64, (f64, f64))> = PROBE_NS
                .iter()
                .map(|&n| (n, sweep(sign / n as f64, tf, spec)))
                .collect();
            let last = samples[samples.len() - 1].1;
            let prev = samples[samples.len() - 2].1;
            SequenceProbe {
                sequence: name.into(),
                limit: close(last, prev, COVER_TOL).then_some(last),
                samples,
            }
        })
        .collect();
    let mut limit_directions: Vec<(f64, f64)> = Vec::new();
    for l in sequences.iter().filter_map(|s| s.limit) {
        let d = unit(l);
        if !limit_directions.iter().any(|e| close(*e, d, COVER_TOL)) {
            limit_directions.push(d);
        }
    }
    let discontinuous = sequences
        .iter()
        .any(|s| s.limit.is_none_or(|l| !close(l, value, COVER_TOL)));
    Ok(ContinuityProbe {
        origin,
        t: t.clone(),
        value,
        sequences,
        limit_directions,
        discontinuous,
    })
}

/// Tube parameters probed by [`thick_audit`].
pub fn probe_params() -> Vec<Q> {
    use crate::rational::q;
    vec![q(1, 4), q(1, 2), q(3, 4)]
}

pub fn thick_audit(grid_n: usize, spec: EmbeddingSpec) -> Result<ThickAuditReport> {
    if grid_n < 8 {
        return Err(Error::GridTooCoarse(grid_n));
    }
    let coverage = coverage(grid_n, spec);
    let probes: Vec<ContinuityProbe> = probe_params()
        .iter()
        .map(|t| continuity_probe(1, t, spec))
        .collect::<Result<_>>()?;
    let fibre = thick_fibre_z(2)?;
    let fibre_at_z = fibre
        .iter()
        .all(|p| close(thick_project(p, spec), (0.0, 0.0), REL_TOL));
    let broken: Vec<String> = probes
        .iter()
        .filter(|p| p.discontinuous)
        .map(|p| format!("(o{}, {})", p.origin, p.t))
        .collect();
    let verdicts = vec![
        ThickVerdictRow {
            claim: "surjective onto the disk".into(),
            holds: coverage.uncovered.is_empty(),
            evidence: format!(
                "{} of {} punctured grid points covered ({:.4})",
                coverage.covered, coverage.grid_points, coverage.fraction
            ),
        },
        ThickVerdictRow {
            claim: "continuous along origin tubes".into(),
            holds: broken.is_empty(),
            evidence: if broken.is_empty() {
                "every probe sequence converges to the probe value".into()
            } else {
                format!("discontinuous at {}", broken.join(", "))
            },
        },
        ThickVerdictRow {
            claim: "fibre over z is the set of origins".into(),
            holds: fibre_at_z,
            evidence: "(o_i, 0) ↦ z, and every other point maps off z".into(),
        },
    ];
    Ok(ThickAuditReport {
        grid_n,
        embedding: spec,
        cover_tolerance: COVER_TOL,
        relative_tolerance: REL_TOL,
        r_convention: R_CONVENTION.into(),
        origin_convention: ORIGIN_CONVENTION.into(),
        coverage,
        probes,
        verdicts,
    })
}

/// Number of lifts of `path` on the slice at tube parameter `t`, starting
/// over `path(0)` (at `o_1` if that is `z`).
pub fn thick_lift_count(path: &PLPathY, t: &Q, cfg: &SpaceConfig) -> Result<usize> {
    if t.is_negative() || t >= &Q::one() {
        return Err(Error::TubeParameterOutOfRange(t.clone()));
    }
    let start = if path.start().is_zero() {
        CanonicalPoint::Origin(1)
    } else {
        CanonicalPoint::Regular(path.start().clone())
    };
    Ok(enumerate_lifts(path, &start, cfg)?.len())
}
