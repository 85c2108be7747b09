use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::embedding::YPoint;
use crate::error::{recheck, Result};
use crate::lifting::{verify_lift_continuity, LiftCertificate, LiftedPath, UndefinedMonodromy};
use crate::projection::{
    even_cover_certificate, fibre, preimage_connected_certificate, project, regular_inverse,
    EvenCoverFailure, SectionWitness,
};
use crate::rational::{q, Q};
use crate::space::{
    basic_open, coord, open_contains, pseudo_dist, separation_report, BasicOpen, CanonicalPoint,
    SeparationVerdict, SpaceConfig, TopologyModel,
};
use crate::symmetry::{
    crossing_word, deck_group, loop_class, ContractionCertificate, DeckGroupSummary, PLLoopL,
    ReducedWord, Word,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct ConnectingPaths {
    pub k: usize,
    pub model: TopologyModel,
    pub radius: Q,
    pub paths: Vec<LiftedPath>,
}

/// The identity-coordinate chart on a basic open about an origin; a chart
/// onto an interval exists only if the open holds a single origin.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct LocalChart {
    pub k: usize,
    pub model: TopologyModel,
    pub origin: usize,
    pub open: BasicOpen,
    pub origins_inside: Vec<usize>,
    pub chart_injective: bool,
}

impl LocalChart {
    pub fn build(cfg: &SpaceConfig, origin: usize, radius: &Q) -> Result<Self> {
        let open = basic_open(&CanonicalPoint::Origin(origin), radius, cfg)?;
        let origins_inside: Vec<usize> = (1..=cfg.k())
            .filter(|&j| open_contains(&open, &CanonicalPoint::Origin(j)))
            .collect();
        Ok(LocalChart {
            k: cfg.k(),
            model: cfg.model(),
            origin,
            chart_injective: origins_inside.len() == 1,
            open,
            origins_inside,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct LoopClassRecord {
    pub k: usize,
    pub model: TopologyModel,
    #[serde(rename = "loop")]
    pub loop_: PLLoopL,
    pub word: Word,
    pub reduced: ReducedWord,
}

impl LoopClassRecord {
    pub fn build(l: &PLLoopL, cfg: &SpaceConfig) -> Result<Self> {
        Ok(LoopClassRecord {
            k: cfg.k(),
            model: cfg.model(),
            loop_: l.clone(),
            word: crossing_word(l)?,
            reduced: loop_class(l, cfg)?,
        })
    }
}

/// `H([x], s) = [(1 − s)x]`, `H(o_i, s) = o_i` for `s < 1`, `H(·, 1) = o_1`,
/// checked to be 1-Lipschitz in each variable for the pseudometric on
/// samples.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct PointContraction {
    pub k: usize,
    pub homotopy: String,
    pub samples: Vec<CanonicalPoint>,
    pub params: Vec<Q>,
    pub bound_holds: bool,
}

fn shrink(p: &CanonicalPoint, s: &Q) -> CanonicalPoint {
    if s == &Q::one() {
        return CanonicalPoint::Origin(1);
    }
    match p {
        CanonicalPoint::Regular(x) => CanonicalPoint::Regular(x * &(Q::one() - s)),
        o => o.clone(),
    }
}

impl PointContraction {
    pub fn build(k: usize) -> Self {
        let samples: Vec<CanonicalPoint> = (1..=k)
            .map(CanonicalPoint::Origin)
            .chain([q(1, 1), q(-2, 1), q(1, 3), q(-1, 7)].into_iter().map(CanonicalPoint::Regular))
            .collect();
        let params: Vec<Q> = (0..=4).map(|n| q(n, 4)).collect();
        let bound_holds = Self::check(&samples, &params);
        PointContraction {
            k,
            homotopy: "H([x], s) = [(1 - s)x]; H(o_i, s) = o_i for s < 1; H(p, 1) = o_1".into(),
            samples,
            params,
            bound_holds,
        }
    }

    /// `d(H(p, s), H(p', s')) ≤ d(p, p') + |s − s'|·max(|p|, |p'|)`.
    fn check(samples: &[CanonicalPoint], params: &[Q]) -> bool {
        samples.iter().all(|p| {
            samples.iter().all(|p2| {
                params.iter().all(|s| {
                    params.iter().all(|s2| {
                        let lhs = pseudo_dist(&shrink(p, s), &shrink(p2, s2));
                        let scale = coord(p).abs().max(coord(p2).abs());
                        lhs <= pseudo_dist(p, p2) + (s - s2).abs() * scale
                    })
                })
            })
        })
    }
}

/// `π` over sampled regular coordinates: singleton fibres, exact inverse,
/// and basic opens that are intervals avoiding 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct RegularLocus {
    pub k: usize,
    pub samples: Vec<Q>,
    pub singleton_fibres: bool,
    pub round_trip: bool,
    pub interval_opens: bool,
}

impl RegularLocus {
    pub fn build(cfg: &SpaceConfig) -> Result<Self> {
        let samples = vec![q(1, 1), q(-1, 1), q(1, 10), q(-5, 3), q(7, 1)];
        let mut singleton_fibres = true;
        let mut round_trip = true;
        let mut interval_opens = true;
        for x in &samples {
            let y = YPoint::new(x.clone());
            singleton_fibres &= fibre(&y, cfg).len() == 1;
            round_trip &= project(&regular_inverse(&y, cfg)?) == y;
            interval_opens &= match basic_open(&CanonicalPoint::Regular(x.clone()), &Q::one(), cfg)? {
                BasicOpen::RegularInterval { a, b } => a.signum() == b.signum() && !a.is_zero(),
                _ => false,
            };
        }
        Ok(RegularLocus {
            k: cfg.k(),
            samples,
            singleton_fibres,
            round_trip,
            interval_opens,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct SeparationRecord {
    pub k: usize,
    pub verdict: SeparationVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Certificate {
    EvenCover(EvenCoverFailure),
    ConnectingPaths(ConnectingPaths),
    Sections(SectionWitness),
    Monodromy(UndefinedMonodromy),
    DeckGroup(DeckGroupSummary),
    Separation(SeparationRecord),
    LocalChart(LocalChart),
    HomotopyLift(LiftCertificate),
    LoopClass(LoopClassRecord),
    Contraction(ContractionCertificate),
    PointContraction(PointContraction),
    RegularLocus(RegularLocus),
}

impl Certificate {
    /// Independently re-derives the certificate's content.
    pub fn recheck(&self) -> Result<()> {
        match self {
            Certificate::EvenCover(c) => {
                c.recheck()?;
                let cfg = SpaceConfig::new(c.k, c.model)?;
                recheck(*c == even_cover_certificate(&c.radius, &cfg)?, || "even-cover record differs".into())
            }
            Certificate::ConnectingPaths(c) => {
                let cfg = SpaceConfig::new(c.k, c.model)?;
                for p in &c.paths {
                    let v = verify_lift_continuity(p, &cfg)?;
                    recheck(v.continuous, || "connecting path is not continuous".into())?;
                }
                recheck(c.paths == preimage_connected_certificate(&c.radius, &cfg)?, || {
                    "connecting paths differ".into()
                })
            }
            Certificate::Sections(w) => w.recheck(),
            Certificate::Monodromy(m) => m.recheck(),
            Certificate::DeckGroup(d) => {
                recheck(*d == deck_group(d.k)?.summary(), || "deck group summary differs".into())
            }
            Certificate::Separation(s) => {
                let cfg = SpaceConfig::new(s.k, s.verdict.model)?;
                recheck(s.verdict.verify(&cfg), || "separation witness fails".into())?;
                let fresh = separation_report(&cfg)?;
                recheck(fresh.contains(&s.verdict), || "separation verdict differs".into())
            }
            Certificate::LocalChart(c) => {
                let cfg = SpaceConfig::new(c.k, c.model)?;
                let radius = match &c.open {
                    BasicOpen::OriginChart { radius, .. } | BasicOpen::Ball { radius, .. } => radius,
                    BasicOpen::RegularInterval { .. } => {
                        return recheck(false, || "chart open is not about an origin".into())
                    }
                };
                recheck(*c == LocalChart::build(&cfg, c.origin, radius)?, || "chart record differs".into())
            }
            Certificate::HomotopyLift(c) => c.recheck(),
            Certificate::LoopClass(r) => {
                let cfg = SpaceConfig::new(r.k, r.model)?;
                recheck(*r == LoopClassRecord::build(&r.loop_, &cfg)?, || "loop class differs".into())
            }
            Certificate::Contraction(c) => c.recheck(),
            Certificate::PointContraction(p) => {
                recheck(*p == PointContraction::build(p.k) && p.bound_holds, || {
                    "contraction bound fails".into()
                })
            }
            Certificate::RegularLocus(r) => {
                let cfg = SpaceConfig::new(r.k, TopologyModel::Quotient)?;
                recheck(*r == RegularLocus::build(&cfg)?, || "regular-locus record differs".into())?;
                recheck(r.singleton_fibres && r.round_trip && r.interval_opens, || {
                    "regular-locus checks fail".into()
                })
            }
        }
    }
}
