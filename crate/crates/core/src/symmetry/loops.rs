use std::collections::BTreeMap;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::word::{reduce_with, Letter, ReducedWord, ReductionRule, Sign, Word};
use crate::error::{recheck, Error, Result};
use crate::lifting::{attempt_homotopy_lift, HomotopyField, LiftCertificate, PLPathY};
use crate::rational::{q, Q};
use crate::space::{SpaceConfig, TopologyModel};

/// A PL loop in `L`: a coordinate loop based away from `z`, with the origin
/// it passes through at each z-time.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(try_from = "LoopRepr", into = "LoopRepr")]
pub struct PLLoopL {
    path: PLPathY,
    labels: BTreeMap<Q, usize>,
}

#[derive(Serialize, Deserialize, JsonSchema)]
struct LoopRepr {
    path: PLPathY,
    labels: BTreeMap<Q, usize>,
}

impl TryFrom<LoopRepr> for PLLoopL {
    type Error = Error;

    fn try_from(r: LoopRepr) -> Result<Self> {
        PLLoopL::new(r.path, r.labels)
    }
}

impl From<PLLoopL> for LoopRepr {
    fn from(l: PLLoopL) -> Self {
        LoopRepr {
            path: l.path,
            labels: l.labels,
        }
    }
}

impl PLLoopL {
    /// Labels may omit z-times (reported by [`crossing_word`]) but may not
    /// name parameters that are not z-times.
    pub fn new(path: PLPathY, labels: BTreeMap<Q, usize>) -> Result<Self> {
        if path.start() != path.end() || path.start().is_zero() {
            return Err(Error::InvalidLoop(format!(
                "loop must start and end at the same nonzero coordinate, got {} and {}",
                path.start(),
                path.end()
            )));
        }
        let zs = path.z_times()?;
        if let Some(t) = labels.keys().find(|t| !zs.contains(t)) {
            return Err(Error::InvalidLoop(format!("label at {t}, which is not a z-time")));
        }
        Ok(PLLoopL { path, labels })
    }

    pub fn path(&self) -> &PLPathY {
        &self.path
    }

    pub fn labels(&self) -> &BTreeMap<Q, usize> {
        &self.labels
    }

    pub fn basepoint(&self) -> &Q {
        self.path.start()
    }
}

/// `(0, 1), (1/4, 0), (1/2, −1), (3/4, 0), (1, 1)`, through `o_a` going down
/// and `o_b` coming back up.
pub fn probe_loop(a: usize, b: usize) -> PLLoopL {
    let path = PLPathY::from_pairs(&[
        ((0, 1), (1, 1)),
        ((1, 4), (0, 1)),
        ((1, 2), (-1, 1)),
        ((3, 4), (0, 1)),
        ((1, 1), (1, 1)),
    ])
    .expect("fixture is valid");
    PLLoopL::new(path, BTreeMap::from([(q(1, 4), a), (q(3, 4), b)])).expect("fixture is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum PassageKind {
    Crossing(Sign),
    /// Returns to the side it came from; `positive` gives that side.
    Touch { positive: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct Passage {
    pub t: Q,
    pub origin: usize,
    pub kind: PassageKind,
}

fn passages_of(path: &PLPathY, labels: &BTreeMap<Q, usize>) -> Result<Vec<Passage>> {
    let bp = path.breakpoints();
    path.z_indices()?
        .into_iter()
        .map(|i| {
            let t = &bp[i].0;
            let origin = *labels.get(t).ok_or_else(|| Error::UnlabeledZTime(t.clone()))?;
            let before = bp[i - 1].1.is_positive();
            let after = bp[i + 1].1.is_positive();
            let kind = match (before, after) {
                (true, false) => PassageKind::Crossing(Sign::Down),
                (false, true) => PassageKind::Crossing(Sign::Up),
                (side, _) => PassageKind::Touch { positive: side },
            };
            Ok(Passage {
                t: t.clone(),
                origin,
                kind,
            })
        })
        .collect()
}

pub fn passages(l: &PLLoopL) -> Result<Vec<Passage>> {
    passages_of(&l.path, &l.labels)
}

/// One letter per crossing of 0, in parameter order; touches emit nothing.
pub fn crossing_word(l: &PLLoopL) -> Result<Word> {
    Ok(passages(l)?
        .into_iter()
        .filter_map(|p| match p.kind {
            PassageKind::Crossing(sign) => Some(Letter::new(p.origin, sign)),
            PassageKind::Touch { .. } => None,
        })
        .collect())
}

fn rule_for(model: TopologyModel) -> ReductionRule {
    match model {
        TopologyModel::Quotient => ReductionRule::SameOrigin,
        TopologyModel::Pseudometric => ReductionRule::AnyOrigin,
    }
}

fn check_labels(l: &PLLoopL, cfg: &SpaceConfig) -> Result<()> {
    l.labels.values().try_for_each(|&i| cfg.check_index(i))
}

/// Reduced crossing word of the loop's class in the configured model.
///
/// Under the pseudometric every reduction is by [`ReductionRule::AnyOrigin`],
/// and crossings alternate in direction, so the class is always empty.
pub fn loop_class(l: &PLLoopL, cfg: &SpaceConfig) -> Result<ReducedWord> {
    check_labels(l, cfg)?;
    let w = crossing_word(l)?;
    Ok(reduce_with(&w, rule_for(cfg.model())).word)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum StageKind {
    /// Lifts a touch of 0 off the axis.
    TouchRemoval { t: Q, origin: usize },
    /// Lifts the excursion between two cancelling crossings off the axis.
    ExcursionRemoval { t1: Q, t2: Q, origins: (usize, usize) },
    /// Straight-line homotopy to the constant loop.
    StraightLine,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct ContractionStage {
    pub kind: StageKind,
    pub lift: LiftCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct ContractionCertificate {
    pub k: usize,
    pub model: TopologyModel,
    pub rule: ReductionRule,
    #[serde(rename = "loop")]
    pub loop_: PLLoopL,
    pub word: Word,
    pub stages: Vec<ContractionStage>,
}

impl ContractionCertificate {
    pub fn all_accepted(&self) -> bool {
        self.stages.iter().all(|s| s.lift.accepts())
    }

    /// Re-derives every stage and checks that the stages chain from the loop
    /// to the constant loop, each accepted by the homotopy-lift engine.
    pub fn recheck(&self) -> Result<()> {
        let cfg = SpaceConfig::new(self.k, self.model)?;
        let rebuilt = build(&self.loop_, &cfg, self.rule)?;
        recheck(rebuilt == *self, || "stages differ from a fresh construction".into())?;
        recheck(self.all_accepted(), || "a stage is rejected".into())?;
        let mut path = self.loop_.path().clone();
        let mut labels = self.loop_.labels().clone();
        for (n, stage) in self.stages.iter().enumerate() {
            stage.lift.recheck()?;
            recheck(stage.lift.field.bottom()? == path, || format!("stage {n} does not start where the previous ended"))?;
            recheck(stage.lift.bottom_assignment == labels, || format!("stage {n} assignment does not chain"))?;
            let top = stage.lift.field.top()?;
            let next: BTreeMap<Q, usize> = labels
                .into_iter()
                .filter(|(t, _)| top.eval(t).is_zero())
                .collect();
            if let Some(induced) = stage.lift.top_assignment() {
                recheck(induced == next, || format!("stage {n} carries labels inconsistently"))?;
            }
            path = top;
            labels = next;
        }
        let x0 = self.loop_.basepoint();
        recheck(path.values().all(|v| v == x0) && labels.is_empty(), || {
            "last stage does not end at the constant loop".into()
        })
    }
}

/// `δ` at each breakpoint: 1 on `[lo, hi]`, 0 outside `(prev, next)`, where
/// `prev` and `next` are the breakpoints adjacent to `lo` and `hi`.
fn plateau_bump(ts: &[Q], lo: usize, hi: usize) -> Vec<Q> {
    (0..ts.len())
        .map(|i| if (lo..=hi).contains(&i) { Q::one() } else { Q::zero() })
        .collect()
}

fn stage_field(path: &PLPathY, top: Vec<Q>) -> Result<HomotopyField> {
    let s: Vec<Q> = path.params().cloned().collect();
    let bottom: Vec<Q> = path.values().cloned().collect();
    HomotopyField::new(s, vec![Q::zero(), Q::one()], vec![bottom, top])
}

fn build(l: &PLLoopL, cfg: &SpaceConfig, rule: ReductionRule) -> Result<ContractionCertificate> {
    check_labels(l, cfg)?;
    let word = crossing_word(l)?;
    let mut path = l.path().clone();
    let mut labels = l.labels().clone();
    let mut stages = Vec::new();
    let mut push = |kind, field: HomotopyField, labels: &BTreeMap<Q, usize>| -> Result<PLPathY> {
        let lift = attempt_homotopy_lift(&field, labels, cfg, false)?;
        let top = field.top()?;
        stages.push(ContractionStage { kind, lift });
        Ok(top)
    };

    for p in passages(l)? {
        let PassageKind::Touch { positive } = p.kind else { continue };
        let ts: Vec<Q> = path.params().cloned().collect();
        let i = ts.iter().position(|t| *t == p.t).expect("z-time is a breakpoint");
        let vals: Vec<&Q> = path.values().collect();
        let h = vals[i - 1].abs().min(vals[i + 1].abs());
        let h = if positive { h } else { -h };
        let top = plateau_bump(&ts, i, i)
            .iter()
            .zip(&vals)
            .map(|(d, v)| *v + &(d * &h))
            .collect();
        let field = stage_field(&path, top)?;
        path = push(StageKind::TouchRemoval { t: p.t.clone(), origin: p.origin }, field, &labels)?;
        labels.remove(&p.t);
    }

    let crossings: Vec<Passage> = passages(l)?
        .into_iter()
        .filter(|p| matches!(p.kind, PassageKind::Crossing(_)))
        .collect();
    for c in reduce_with(&word, rule).trace {
        let (a, b) = (&crossings[c.left], &crossings[c.right]);
        let ts: Vec<Q> = path.params().cloned().collect();
        let lo = ts.iter().position(|t| *t == a.t).expect("z-time is a breakpoint");
        let hi = ts.iter().position(|t| *t == b.t).expect("z-time is a breakpoint");
        let vals: Vec<&Q> = path.values().collect();
        let outside = vals[lo - 1].signum();
        let depth = vals[lo..=hi].iter().map(|v| v.abs()).max().expect("nonempty");
        let lift = Q::int(2 * i64::from(outside)) * depth;
        let top = plateau_bump(&ts, lo, hi)
            .iter()
            .zip(&vals)
            .map(|(d, v)| *v + &(d * &lift))
            .collect();
        let field = stage_field(&path, top)?;
        let kind = StageKind::ExcursionRemoval {
            t1: a.t.clone(),
            t2: b.t.clone(),
            origins: (a.origin, b.origin),
        };
        path = push(kind, field, &labels)?;
        labels.remove(&a.t);
        labels.remove(&b.t);
    }

    if !labels.is_empty() {
        return Err(Error::NotNullhomotopic(reduce_with(&word, rule).word.to_string()));
    }
    let x0 = l.basepoint().clone();
    let field = stage_field(&path, vec![x0; path.breakpoints().len()])?;
    push(StageKind::StraightLine, field, &labels)?;

    Ok(ContractionCertificate {
        k: cfg.k(),
        model: cfg.model(),
        rule,
        loop_: l.clone(),
        word,
        stages,
    })
}

/// Staged null-homotopy of `l`, each stage accepted in the configured model.
pub fn contract_loop(l: &PLLoopL, cfg: &SpaceConfig) -> Result<ContractionCertificate> {
    let class = loop_class(l, cfg)?;
    if !class.is_empty() {
        return Err(Error::NotNullhomotopic(class.to_string()));
    }
    let cert = build(l, cfg, rule_for(cfg.model()))?;
    cert.recheck()?;
    Ok(cert)
}

/// Stages built by cancelling every adjacent opposite pair regardless of
/// origin, judged in the configured model. Under the quotient topology a
/// stage merging two different origins is rejected.
pub fn forced_contraction(l: &PLLoopL, cfg: &SpaceConfig) -> Result<ContractionCertificate> {
    build(l, cfg, ReductionRule::AnyOrigin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::{LiftOutcome, NoLiftScope};

    fn cfg(model: TopologyModel) -> SpaceConfig {
        SpaceConfig::new(2, model).unwrap()
    }

    #[test]
    fn words() {
        assert_eq!(crossing_word(&probe_loop(1, 1)).unwrap().0, vec![Letter::down(1), Letter::up(1)]);
        assert_eq!(crossing_word(&probe_loop(1, 2)).unwrap().0, vec![Letter::down(1), Letter::up(2)]);
        let flat = PLLoopL::new(PLPathY::from_pairs(&[((0, 1), (1, 1)), ((1, 1), (1, 1))]).unwrap(), BTreeMap::new()).unwrap();
        assert!(crossing_word(&flat).unwrap().is_empty());
    }

    #[test]
    fn unlabeled_and_invalid() {
        let p = probe_loop(1, 1).path().clone();
        let l = PLLoopL::new(p.clone(), BTreeMap::from([(q(1, 4), 1)])).unwrap();
        assert!(matches!(crossing_word(&l), Err(Error::UnlabeledZTime(_))));
        assert!(PLLoopL::new(p.clone(), BTreeMap::from([(q(1, 3), 1)])).is_err());
        let open = PLPathY::from_pairs(&[((0, 1), (1, 1)), ((1, 1), (2, 1))]).unwrap();
        assert!(matches!(PLLoopL::new(open, BTreeMap::new()), Err(Error::InvalidLoop(_))));
    }

    #[test]
    fn classes_split_by_model() {
        let q12 = probe_loop(1, 2);
        assert_eq!(loop_class(&q12, &cfg(TopologyModel::Quotient)).unwrap().len(), 2);
        assert!(loop_class(&q12, &cfg(TopologyModel::Pseudometric)).unwrap().is_empty());
        assert!(loop_class(&probe_loop(1, 1), &cfg(TopologyModel::Quotient)).unwrap().is_empty());
        assert!(loop_class(&probe_loop(1, 3), &cfg(TopologyModel::Quotient)).is_err());
    }

    #[test]
    fn contract_same_origin_probe() {
        let c = contract_loop(&probe_loop(1, 1), &cfg(TopologyModel::Quotient)).unwrap();
        assert_eq!(c.stages.len(), 2);
        let LiftOutcome::LiftsEnumerated { assignments, .. } = &c.stages[0].lift.outcome else {
            panic!("first stage rejected");
        };
        assert_eq!(assignments, &vec![Some(1)]);
        assert!(matches!(c.stages[1].kind, StageKind::StraightLine));
        assert!(c.stages[1].lift.zero_set.is_empty());
    }

    #[test]
    fn contract_rejects_mixed_probe() {
        let l = probe_loop(1, 2);
        assert!(matches!(contract_loop(&l, &cfg(TopologyModel::Quotient)), Err(Error::NotNullhomotopic(_))));
        let forced = forced_contraction(&l, &cfg(TopologyModel::Quotient)).unwrap();
        assert!(!forced.all_accepted());
        assert!(matches!(
            forced.stages[0].lift.outcome,
            LiftOutcome::NoLift { scope: NoLiftScope::Component(_), .. }
        ));
        let c = contract_loop(&l, &cfg(TopologyModel::Pseudometric)).unwrap();
        assert!(c.all_accepted());
    }

    #[test]
    fn contract_avoiding_loop() {
        let flat = PLLoopL::new(
            PLPathY::from_pairs(&[((0, 1), (1, 1)), ((1, 2), (3, 1)), ((1, 1), (1, 1))]).unwrap(),
            BTreeMap::new(),
        )
        .unwrap();
        for model in TopologyModel::ALL {
            let c = contract_loop(&flat, &cfg(model)).unwrap();
            assert_eq!(c.stages.len(), 1);
            assert!(c.stages[0].lift.zero_set.is_empty());
        }
    }

    #[test]
    fn contract_with_touches_and_nesting() {
        // down o1, touch o2 from below, up o2, down o2, up o1
        let vals = [2, 0, -1, 0, -1, 0, 1, 0, -1, 0, 2];
        let pairs: Vec<_> = vals.iter().enumerate().map(|(i, &v)| ((i as i64, 10), (v, 1))).collect();
        let path = PLPathY::from_pairs(&pairs).unwrap();
        let labels = BTreeMap::from([(q(1, 10), 1), (q(3, 10), 2), (q(5, 10), 2), (q(7, 10), 2), (q(9, 10), 1)]);
        let l = PLLoopL::new(path, labels).unwrap();
        assert_eq!(crossing_word(&l).unwrap().len(), 4);
        let c = contract_loop(&l, &cfg(TopologyModel::Quotient)).unwrap();
        // one touch, two cancellations, one straight line
        assert_eq!(c.stages.len(), 4);
        c.recheck().unwrap();
    }
}
