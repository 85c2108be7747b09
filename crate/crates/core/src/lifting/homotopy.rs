use std::collections::{BTreeMap, BTreeSet};

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::field::HomotopyField;
use super::zero_set::{extract_zero_set, ZeroSetComplex};
use crate::error::{recheck, Error, Result};
use crate::rational::Q;
use crate::space::{SpaceConfig, TopologyModel};

/// A bottom-edge z-time and the origin the boundary lift puts there.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, JsonSchema)]
pub struct Constraint {
    pub z_time: Q,
    pub origin: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum NoLiftScope {
    Component(usize),
    /// Constancy imposed across the whole zero set.
    AllZeroPoints,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum LiftOutcome {
    /// `assignments[c]` is the origin on component `c`, `None` where it is a
    /// free choice. `lift_count` lifts extend the boundary data.
    LiftsEnumerated {
        assignments: Vec<Option<usize>>,
        lift_count: u64,
    },
    NoLift {
        scope: NoLiftScope,
        constraints: Vec<Constraint>,
    },
    NonUniqueExistence {
        schema: String,
        count_formula: String,
        free_components: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct LiftCertificate {
    pub k: usize,
    pub model: TopologyModel,
    pub paper_constancy: bool,
    pub field: HomotopyField,
    pub bottom_assignment: BTreeMap<Q, usize>,
    pub zero_set: ZeroSetComplex,
    pub justification: String,
    pub outcome: LiftOutcome,
}

const QUOTIENT_RULE: &str = "the regular part of a lift is forced because π is injective off z; \
     OriginChart(i, ε) contains no other origin, so the origin chosen along the zero set is \
     locally constant and hence constant on each connected component";
const PSEUDOMETRIC_FREE: &str = "the regular part of a lift is forced because π is injective off z; \
     the origins have pseudometric diameter 0, so every ball about a zero point contains all \
     origins and any pointwise choice of origins on the zero set is continuous";
const PSEUDOMETRIC_CONSTANT: &str = "the regular part of a lift is forced because π is injective off z; \
     following the constancy rule, a map from the zero set to the origins is taken to be constant \
     on the whole zero set (this is imposed as a rule: in the ball topology every such map is \
     continuous)";

fn constraints_of(bottom: &BTreeMap<Q, usize>, touches: &[Q]) -> Vec<Constraint> {
    touches
        .iter()
        .filter_map(|s| {
            bottom.get(s).map(|&origin| Constraint {
                z_time: s.clone(),
                origin,
            })
        })
        .collect()
}

fn distinct_origins(cs: &[Constraint]) -> usize {
    cs.iter().map(|c| c.origin).collect::<BTreeSet<_>>().len()
}

fn power(k: usize, m: usize) -> u64 {
    (k as u64).saturating_pow(m as u32)
}

/// Decides whether the lift of the bottom edge given by `bottom_assignment`
/// extends over `field`.
pub fn attempt_homotopy_lift(
    field: &HomotopyField,
    bottom_assignment: &BTreeMap<Q, usize>,
    cfg: &SpaceConfig,
    paper_constancy: bool,
) -> Result<LiftCertificate> {
    let zero_set = extract_zero_set(field)?;
    let z_times = field.bottom()?.z_times()?;
    if !bottom_assignment.keys().eq(z_times.iter()) {
        let keys: Vec<String> = bottom_assignment.keys().map(Q::to_string).collect();
        let want: Vec<String> = z_times.iter().map(Q::to_string).collect();
        return Err(Error::AssignmentDomainMismatch(format!(
            "assigned {{{}}}, bottom z-times {{{}}}",
            keys.join(", "),
            want.join(", ")
        )));
    }
    for &i in bottom_assignment.values() {
        cfg.check_index(i)?;
    }

    let k = cfg.k();
    let n = zero_set.components.len();
    let (justification, outcome) = match (cfg.model(), paper_constancy) {
        (TopologyModel::Quotient, _) => {
            let mut assignments = Vec::with_capacity(n);
            let mut conflict = None;
            for (id, c) in zero_set.components.iter().enumerate() {
                let cs = constraints_of(bottom_assignment, &c.bottom_touches);
                if distinct_origins(&cs) > 1 {
                    conflict = Some(LiftOutcome::NoLift {
                        scope: NoLiftScope::Component(id),
                        constraints: cs,
                    });
                    break;
                }
                assignments.push(cs.first().map(|c| c.origin));
            }
            let outcome = conflict.unwrap_or_else(|| {
                let free = assignments.iter().filter(|a| a.is_none()).count();
                LiftOutcome::LiftsEnumerated {
                    assignments,
                    lift_count: power(k, free),
                }
            });
            (QUOTIENT_RULE, outcome)
        }
        (TopologyModel::Pseudometric, false) => {
            let free = zero_set
                .components
                .iter()
                .filter(|c| c.bottom_touches.is_empty())
                .count();
            (
                PSEUDOMETRIC_FREE,
                LiftOutcome::NonUniqueExistence {
                    schema: "any map from the zero set to the origins that agrees with the \
                             bottom assignment at the bottom z-times"
                        .into(),
                    count_formula: format!(
                        "at least {k}^{free} (one constant per free component); uncountably many \
                         when the zero set contains a segment"
                    ),
                    free_components: free,
                },
            )
        }
        (TopologyModel::Pseudometric, true) => {
            let all: Vec<Constraint> = bottom_assignment
                .iter()
                .map(|(s, &origin)| Constraint {
                    z_time: s.clone(),
                    origin,
                })
                .collect();
            let outcome = if distinct_origins(&all) > 1 {
                LiftOutcome::NoLift {
                    scope: NoLiftScope::AllZeroPoints,
                    constraints: all,
                }
            } else {
                let origin = all.first().map(|c| c.origin);
                LiftOutcome::LiftsEnumerated {
                    assignments: vec![origin; n],
                    lift_count: if origin.is_none() && n > 0 { k as u64 } else { 1 },
                }
            };
            (PSEUDOMETRIC_CONSTANT, outcome)
        }
    };
    Ok(LiftCertificate {
        k,
        model: cfg.model(),
        paper_constancy,
        field: field.clone(),
        bottom_assignment: bottom_assignment.clone(),
        zero_set,
        justification: justification.into(),
        outcome,
    })
}

impl LiftCertificate {
    pub fn accepts(&self) -> bool {
        !matches!(self.outcome, LiftOutcome::NoLift { .. })
    }

    /// Origins carried by the top-edge z-times when every component touching
    /// the top is assigned. `None` for a rejected or non-unique outcome.
    pub fn top_assignment(&self) -> Option<BTreeMap<Q, usize>> {
        let LiftOutcome::LiftsEnumerated { assignments, .. } = &self.outcome else {
            return None;
        };
        let mut top = BTreeMap::new();
        for (c, origin) in self.zero_set.components.iter().zip(assignments) {
            for s in &c.top_touches {
                top.insert(s.clone(), (*origin)?);
            }
        }
        Some(top)
    }

    /// Recomputes the certificate from its field and assignment and checks
    /// the conflict it reports.
    pub fn recheck(&self) -> Result<()> {
        let cfg = SpaceConfig::new(self.k, self.model)?;
        let again = attempt_homotopy_lift(&self.field, &self.bottom_assignment, &cfg, self.paper_constancy)?;
        recheck(&again == self, || "certificate differs from a fresh computation".into())?;
        if let LiftOutcome::NoLift { scope, constraints } = &self.outcome {
            recheck(constraints.len() >= 2 && distinct_origins(constraints) >= 2, || {
                "conflict needs two constraints with distinct origins".into()
            })?;
            for c in constraints {
                recheck(self.bottom_assignment.get(&c.z_time) == Some(&c.origin), || {
                    format!("constraint at {} does not match the assignment", c.z_time)
                })?;
                if let NoLiftScope::Component(id) = scope {
                    recheck(self.zero_set.component_at_bottom(&c.z_time) == Some(*id), || {
                        format!("z-time {} is not on component {id}", c.z_time)
                    })?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifting::field::make_merging_field;
    use crate::rational::q;

    fn assign(a: usize, b: usize) -> BTreeMap<Q, usize> {
        BTreeMap::from([(q(1, 4), a), (q(3, 4), b)])
    }

    fn cfg(model: TopologyModel) -> SpaceConfig {
        SpaceConfig::new(2, model).unwrap()
    }

    #[test]
    fn quotient_conflict() {
        let c = attempt_homotopy_lift(&make_merging_field(), &assign(1, 2), &cfg(TopologyModel::Quotient), false).unwrap();
        assert_eq!(
            c.outcome,
            LiftOutcome::NoLift {
                scope: NoLiftScope::Component(0),
                constraints: vec![
                    Constraint { z_time: q(1, 4), origin: 1 },
                    Constraint { z_time: q(3, 4), origin: 2 }
                ],
            }
        );
        c.recheck().unwrap();
    }

    #[test]
    fn quotient_constant_assignment_lifts() {
        let c = attempt_homotopy_lift(&make_merging_field(), &assign(1, 1), &cfg(TopologyModel::Quotient), false).unwrap();
        assert_eq!(c.outcome, LiftOutcome::LiftsEnumerated { assignments: vec![Some(1)], lift_count: 1 });
        assert!(c.accepts());
        assert_eq!(c.top_assignment(), Some(BTreeMap::new()));
    }

    #[test]
    fn pseudometric_split() {
        let f = make_merging_field();
        let free = attempt_homotopy_lift(&f, &assign(1, 2), &cfg(TopologyModel::Pseudometric), false).unwrap();
        assert!(matches!(free.outcome, LiftOutcome::NonUniqueExistence { .. }));
        let strict = attempt_homotopy_lift(&f, &assign(1, 2), &cfg(TopologyModel::Pseudometric), true).unwrap();
        assert!(matches!(strict.outcome, LiftOutcome::NoLift { scope: NoLiftScope::AllZeroPoints, .. }));
        strict.recheck().unwrap();
    }

    #[test]
    fn domain_mismatch() {
        let f = make_merging_field();
        let bad = BTreeMap::from([(q(1, 4), 1)]);
        assert!(matches!(
            attempt_homotopy_lift(&f, &bad, &cfg(TopologyModel::Quotient), false),
            Err(Error::AssignmentDomainMismatch(_))
        ));
        assert!(attempt_homotopy_lift(&f, &assign(1, 3), &cfg(TopologyModel::Quotient), false).is_err());
    }

    #[test]
    fn tampered_conflict_fails_recheck() {
        let mut c = attempt_homotopy_lift(&make_merging_field(), &assign(1, 2), &cfg(TopologyModel::Quotient), false).unwrap();
        c.outcome = LiftOutcome::LiftsEnumerated { assignments: vec![Some(1)], lift_count: 1 };
        assert!(c.recheck().unwrap_err().is_recheck());
    }
}
