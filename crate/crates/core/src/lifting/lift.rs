use std::collections::BTreeSet;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::path::{make_gamma, PLPathY};
use crate::error::{recheck, Error, Result};
use crate::projection::project;
use crate::rational::{q, Q};
use crate::space::{coord, pseudo_dist, CanonicalPoint, SpaceConfig, TopologyModel};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct LiftNode {
    pub t: Q,
    pub point: CanonicalPoint,
}

/// A candidate lift of a PL path.
///
/// `nodes` is the lift itself: its values at increasing parameters, with the
/// coordinate interpolated linearly in between. `start` and `origin_choice`
/// (the origin taken at each z-time, in order) summarize it and are checked
/// against `nodes` by [`verify_lift_continuity`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct LiftedPath {
    pub base: PLPathY,
    pub start: CanonicalPoint,
    pub origin_choice: Vec<usize>,
    pub nodes: Vec<LiftNode>,
}

impl LiftedPath {
    /// The lift whose regular part is forced by the base and which sits at
    /// `Origin(choice[m])` at the `m`-th z-time.
    pub fn from_choice(base: &PLPathY, choice: Vec<usize>) -> Result<Self> {
        let zs = base.z_indices()?;
        if zs.len() != choice.len() {
            return Err(Error::AssignmentDomainMismatch(format!(
                "{} z-times but {} origin choices",
                zs.len(),
                choice.len()
            )));
        }
        let mut next = choice.iter();
        let nodes: Vec<LiftNode> = base
            .breakpoints()
            .iter()
            .map(|(t, x)| LiftNode {
                t: t.clone(),
                point: if x.is_zero() {
                    CanonicalPoint::Origin(*next.next().expect("counted above"))
                } else {
                    CanonicalPoint::Regular(x.clone())
                },
            })
            .collect();
        Ok(LiftedPath {
            base: base.clone(),
            start: nodes[0].point.clone(),
            origin_choice: choice,
            nodes,
        })
    }

    fn coord_at(&self, t: &Q) -> Q {
        let nodes = &self.nodes;
        let idx = nodes.partition_point(|n| &n.t <= t);
        if idx == 0 {
            return coord(&nodes[0].point);
        }
        let a = &nodes[idx - 1];
        if &a.t == t || idx == nodes.len() {
            return coord(&a.point);
        }
        let b = &nodes[idx];
        let (ca, cb) = (coord(&a.point), coord(&b.point));
        &ca + &((&cb - &ca) * (t - &a.t) / (&b.t - &a.t))
    }

    /// Value at `t`; `None` where the interpolated coordinate vanishes away
    /// from a node, so no origin is specified.
    pub fn eval(&self, t: &Q) -> Option<CanonicalPoint> {
        if let Some(n) = self.nodes.iter().find(|n| &n.t == t) {
            return Some(n.point.clone());
        }
        let c = self.coord_at(t);
        (!c.is_zero()).then_some(CanonicalPoint::Regular(c))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct SegmentModulus {
    pub t0: Q,
    pub t1: Q,
    /// `|slope|` of the coordinate on the segment; `pseudo_dist` grows exactly
    /// at this rate.
    pub lipschitz: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum ContinuityFailure {
    MalformedNodes(String),
    InvalidPoint { t: Q, point: CanonicalPoint },
    StartMismatch { recorded: CanonicalPoint, actual: CanonicalPoint },
    ProjectionMismatch { t: Q, expected: Q, found: Q },
    UnlabeledZTime { t: Q },
    OriginChoiceMismatch { index: usize, recorded: Option<usize>, actual: usize },
    ModulusViolation { t0: Q, t1: Q },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct ContinuityVerdict {
    pub model: TopologyModel,
    pub continuous: bool,
    pub segments: Vec<SegmentModulus>,
    /// Largest per-segment Lipschitz constant.
    pub lipschitz: Q,
    /// `(z-time, origin)` pairs; each z-time is isolated, so every basic open
    /// about the chosen origin contains the nearby regular values.
    pub z_passages: Vec<(Q, usize)>,
    pub failure: Option<ContinuityFailure>,
}

impl ContinuityVerdict {
    fn failed(model: TopologyModel, failure: ContinuityFailure) -> Self {
        ContinuityVerdict {
            model,
            continuous: false,
            segments: Vec::new(),
            lipschitz: Q::zero(),
            z_passages: Vec::new(),
            failure: Some(failure),
        }
    }
}

/// Checks that `lift` projects onto its base and is continuous in the model.
///
/// A malformed lift yields `continuous = false` with a witness; only a base
/// path that rests at `z` is an error.
pub fn verify_lift_continuity(lift: &LiftedPath, cfg: &SpaceConfig) -> Result<ContinuityVerdict> {
    let model = cfg.model();
    let base = &lift.base;
    let zs = base.z_indices()?;
    let fail = |f| Ok(ContinuityVerdict::failed(model, f));

    let nodes = &lift.nodes;
    if nodes.is_empty()
        || !nodes[0].t.is_zero()
        || nodes[nodes.len() - 1].t != Q::one()
        || nodes.windows(2).any(|w| w[0].t >= w[1].t)
    {
        return fail(ContinuityFailure::MalformedNodes(
            "node parameters must increase from 0 to 1".into(),
        ));
    }
    if let Some(n) = nodes.iter().find(|n| cfg.check_point(&n.point).is_err()) {
        return fail(ContinuityFailure::InvalidPoint {
            t: n.t.clone(),
            point: n.point.clone(),
        });
    }
    if lift.start != nodes[0].point {
        return fail(ContinuityFailure::StartMismatch {
            recorded: lift.start.clone(),
            actual: nodes[0].point.clone(),
        });
    }

    // Two PL functions agree everywhere iff they agree on the union of their
    // breakpoints.
    let params: BTreeSet<&Q> = base.params().chain(nodes.iter().map(|n| &n.t)).collect();
    for t in &params {
        let expected = base.eval(t);
        let found = lift.coord_at(t);
        if expected != found {
            return fail(ContinuityFailure::ProjectionMismatch {
                t: (*t).clone(),
                expected,
                found,
            });
        }
    }

    let mut z_passages = Vec::with_capacity(zs.len());
    for (m, &zi) in zs.iter().enumerate() {
        let t = &base.breakpoints()[zi].0;
        let origin = match nodes.iter().find(|n| &n.t == t).map(|n| &n.point) {
            Some(CanonicalPoint::Origin(i)) => *i,
            _ => return fail(ContinuityFailure::UnlabeledZTime { t: t.clone() }),
        };
        if lift.origin_choice.get(m) != Some(&origin) {
            return fail(ContinuityFailure::OriginChoiceMismatch {
                index: m,
                recorded: lift.origin_choice.get(m).copied(),
                actual: origin,
            });
        }
        z_passages.push((t.clone(), origin));
    }
    if lift.origin_choice.len() != zs.len() {
        return fail(ContinuityFailure::OriginChoiceMismatch {
            index: zs.len(),
            recorded: lift.origin_choice.get(zs.len()).copied(),
            actual: 0,
        });
    }

    let params: Vec<&Q> = params.into_iter().collect();
    let mut segments = Vec::with_capacity(params.len() - 1);
    for w in params.windows(2) {
        let (t0, t1) = (w[0], w[1]);
        let (c0, c1) = (base.eval(t0), base.eval(t1));
        let dt = t1 - t0;
        let lipschitz = ((&c1 - &c0) / &dt).abs();
        let p0 = lift.eval(t0).expect("node or nonzero");
        let p1 = lift.eval(t1).expect("node or nonzero");
        if pseudo_dist(&p0, &p1) != &lipschitz * &dt {
            return fail(ContinuityFailure::ModulusViolation {
                t0: t0.clone(),
                t1: t1.clone(),
            });
        }
        segments.push(SegmentModulus {
            t0: t0.clone(),
            t1: t1.clone(),
            lipschitz,
        });
    }
    let lipschitz = segments
        .iter()
        .map(|s| s.lipschitz.clone())
        .max()
        .unwrap_or_else(Q::zero);
    Ok(ContinuityVerdict {
        model,
        continuous: true,
        segments,
        lipschitz,
        z_passages,
        failure: None,
    })
}

/// Every lift of `path` from `start`, in lexicographic order of origin choices.
pub fn enumerate_lifts(path: &PLPathY, start: &CanonicalPoint, cfg: &SpaceConfig) -> Result<Vec<LiftedPath>> {
    let zs = path.z_indices()?;
    cfg.check_point(start)
        .map_err(|e| Error::StartMismatch(e.to_string()))?;
    if project(start).x != *path.start() {
        return Err(Error::StartMismatch(format!(
            "{start} lies over {}, path starts at {}",
            coord(start),
            path.start()
        )));
    }
    let fixed = match start {
        CanonicalPoint::Origin(i) => Some(*i),
        CanonicalPoint::Regular(_) => None,
    };
    let free = zs.len() - usize::from(fixed.is_some());

    let k = cfg.k();
    let mut lifts = Vec::with_capacity(k.pow(free as u32));
    let mut odometer = vec![1usize; free];
    loop {
        let choice: Vec<usize> = fixed.into_iter().chain(odometer.iter().copied()).collect();
        let lift = LiftedPath::from_choice(path, choice)?;
        let verdict = verify_lift_continuity(&lift, cfg)?;
        recheck(verdict.continuous, || {
            format!("enumerated lift failed continuity: {:?}", verdict.failure)
        })?;
        lifts.push(lift);

        let Some(pos) = odometer.iter().rposition(|&c| c < k) else {
            break;
        };
        odometer[pos] += 1;
        odometer[pos + 1..].iter_mut().for_each(|c| *c = 1);
    }
    Ok(lifts)
}

/// Record showing that lifting from a point over the basepoint is not unique,
/// so no monodromy action on the fibre can be defined.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct UndefinedMonodromy {
    pub k: usize,
    pub x0: Q,
    pub gamma: PLPathY,
    pub start: CanonicalPoint,
    pub z_time: Q,
    pub lifts: Vec<LiftedPath>,
    pub statement: String,
}

pub fn monodromy_verdict(x0: &Q, cfg: &SpaceConfig) -> Result<UndefinedMonodromy> {
    let gamma = make_gamma(x0)?;
    let start = CanonicalPoint::Regular(x0.clone());
    let lifts = enumerate_lifts(&gamma, &start, cfg)?;
    Ok(UndefinedMonodromy {
        k: cfg.k(),
        x0: x0.clone(),
        statement: format!(
            "the loop through z at t = 1/2 has {} distinct lifts from {start}; \
             unique path lifting fails, so no monodromy action on the fibre over ι({x0}) exists",
            lifts.len()
        ),
        gamma,
        start,
        z_time: q(1, 2),
        lifts,
    })
}

impl UndefinedMonodromy {
    /// At least two lifts from one start, pairwise distinct at the z-time,
    /// each continuous in both models.
    pub fn recheck(&self) -> Result<()> {
        let cfg = SpaceConfig::new(self.k, TopologyModel::Quotient)?;
        recheck(self.gamma == make_gamma(&self.x0)?, || "gamma does not match x0".into())?;
        recheck(self.lifts.len() == self.k && self.k >= 2, || {
            format!("expected {} lifts, found {}", self.k, self.lifts.len())
        })?;
        let mut at_z = BTreeSet::new();
        for lift in &self.lifts {
            recheck(lift.base == self.gamma && lift.start == self.start, || {
                "lift does not start at the recorded point".into()
            })?;
            for model in TopologyModel::ALL {
                let v = verify_lift_continuity(lift, &cfg.with_model(model))?;
                recheck(v.continuous, || format!("lift discontinuous in {model}: {:?}", v.failure))?;
            }
            at_z.insert(lift.eval(&self.z_time));
        }
        recheck(at_z.len() == self.lifts.len(), || "lifts are not pairwise distinct at z".into())
    }
}
