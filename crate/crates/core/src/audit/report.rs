use std::collections::BTreeMap;
use std::fmt::Write as _;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::certificate::{
    Certificate, ConnectingPaths, LocalChart, LoopClassRecord, PointContraction, RegularLocus,
    SeparationRecord,
};
use crate::error::{recheck, Error, Result};
use crate::lifting::{attempt_homotopy_lift, make_merging_field, monodromy_verdict, LiftOutcome};
use crate::projection::{even_cover_certificate, etale_separatedness_witness, preimage_connected_certificate};
use crate::rational::{q, Q};
use crate::space::{separation_report, SeparationAxiom, SpaceConfig, TopologyModel};
use crate::symmetry::{contract_loop, deck_group, probe_loop, DECK_GROUP_MAX_K};

pub const SCHEMA_VERSION: u32 = 1;
pub const AUDIT_MIN_K: usize = 2;
pub const AUDIT_MAX_K: usize = DECK_GROUP_MAX_K;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Holds,
    HoldsNonUniquely,
    Fails,
    NotMachineChecked,
    OutOfScope,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::HoldsNonUniquely => "holds-non-uniquely",
            Verdict::Fails => "fails",
            Verdict::NotMachineChecked => "not-machine-checked",
            Verdict::OutOfScope => "out-of-scope",
        }
    }

    pub fn is_static(self) -> bool {
        matches!(self, Verdict::NotMachineChecked | Verdict::OutOfScope)
    }

    /// Agreement with an asserted truth value; `None` for static rows.
    pub fn agrees_with(self, asserted: bool) -> Option<bool> {
        match self {
            Verdict::Holds | Verdict::HoldsNonUniquely => Some(asserted),
            Verdict::Fails => Some(!asserted),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct ModelVerdict {
    pub verdict: Verdict,
    /// Key into [`ReportDocument::certificates`].
    pub certificate: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct ClaimRecord {
    pub id: String,
    pub reference: String,
    /// The property; every verdict says whether it holds.
    pub statement: String,
    /// Truth value the source text gives the property.
    pub asserted: bool,
    pub quotient: ModelVerdict,
    pub pseudometric: ModelVerdict,
}

impl ClaimRecord {
    pub fn for_model(&self, model: TopologyModel) -> &ModelVerdict {
        match model {
            TopologyModel::Quotient => &self.quotient,
            TopologyModel::Pseudometric => &self.pseudometric,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct AuditFlags {
    pub x0: Q,
    pub paper_constancy: bool,
}

impl Default for AuditFlags {
    fn default() -> Self {
        AuditFlags {
            x0: Q::one(),
            paper_constancy: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct ReportDocument {
    pub schema_version: u32,
    /// `config.model` is the model shown first in text output.
    pub config: SpaceConfig,
    pub x0: Q,
    pub paper_constancy: bool,
    pub claims: Vec<ClaimRecord>,
    pub certificates: BTreeMap<String, Certificate>,
}

/// Row ids in report order.
pub const CLAIM_IDS: [&str; 18] = [
    "covering-map",
    "branched-cover",
    "separated-etale",
    "semicovering",
    "stacky-cover",
    "subgroup-correspondence",
    "groupoid-covering",
    "unique-path-lifting",
    "monodromy-defined",
    "homotopy-lifting-existence",
    "deck-group-symmetric",
    "t1",
    "hausdorff",
    "locally-euclidean-at-origins",
    "origin-filters-coincide",
    "simply-connected",
    "contractible",
    "one-sheeted-regular-locus",
];

struct Builder {
    claims: Vec<ClaimRecord>,
    certificates: BTreeMap<String, Certificate>,
}

fn model_key(m: TopologyModel) -> &'static str {
    m.name()
}

impl Builder {
    fn cert(&mut self, key: String, c: Certificate) -> Option<String> {
        self.certificates.insert(key.clone(), c);
        Some(key)
    }

    fn row(&mut self, id: &str, reference: &str, statement: &str, asserted: bool, verdicts: [ModelVerdict; 2]) {
        let [quotient, pseudometric] = verdicts;
        self.claims.push(ClaimRecord {
            id: id.into(),
            reference: reference.into(),
            statement: statement.into(),
            asserted,
            quotient,
            pseudometric,
        });
    }

    fn fixed(v: Verdict) -> [ModelVerdict; 2] {
        let m = ModelVerdict {
            verdict: v,
            certificate: None,
        };
        [m.clone(), m]
    }
}

fn mv(verdict: Verdict, certificate: Option<String>) -> ModelVerdict {
    ModelVerdict { verdict, certificate }
}

fn holds_if(b: bool) -> Verdict {
    if b {
        Verdict::Holds
    } else {
        Verdict::Fails
    }
}

/// Runs every claim check for `k` origins in both topology models.
pub fn run_audit(cfg: &SpaceConfig, flags: &AuditFlags) -> Result<ReportDocument> {
    let k = cfg.k();
    if !(AUDIT_MIN_K..=AUDIT_MAX_K).contains(&k) {
        return Err(Error::KOutOfRange {
            k,
            min: AUDIT_MIN_K,
            max: AUDIT_MAX_K,
        });
    }
    let x0 = &flags.x0;
    let eps = Q::one();
    let mut b = Builder {
        claims: Vec::with_capacity(CLAIM_IDS.len()),
        certificates: BTreeMap::new(),
    };
    let cfgs = TopologyModel::ALL.map(|m| cfg.with_model(m));

    let mut v = Vec::new();
    for c in &cfgs {
        let cert = even_cover_certificate(&eps, c)?;
        let key = b.cert(format!("even-cover/{}", model_key(c.model())), Certificate::EvenCover(cert));
        v.push(mv(Verdict::Fails, key));
    }
    b.row(
        "covering-map",
        "Prop. 3.3",
        "some neighbourhood of z is evenly covered, so π is a covering map near z",
        false,
        [v[0].clone(), v[1].clone()],
    );

    let mut v = Vec::new();
    for c in &cfgs {
        let paths = preimage_connected_certificate(&eps, c)?;
        let key = b.cert(
            format!("connecting-paths/{}", model_key(c.model())),
            Certificate::ConnectingPaths(ConnectingPaths {
                k,
                model: c.model(),
                radius: eps.clone(),
                paths,
            }),
        );
        v.push(mv(Verdict::Fails, key));
    }
    b.row(
        "branched-cover",
        "Prop. 6.2",
        "π⁻¹(W) over a neighbourhood W of z splits into disjoint sheets, so π is a branched cover",
        false,
        [v[0].clone(), v[1].clone()],
    );

    let w = etale_separatedness_witness(&eps, 1, 2, cfg)?;
    let key = b.cert("sections".into(), Certificate::Sections(w));
    b.row(
        "separated-etale",
        "Prop. 6.3",
        "π is the étalé space of a sheaf whose sections agreeing off z agree at z",
        false,
        [mv(Verdict::Fails, key.clone()), mv(Verdict::Fails, key)],
    );

    let m = monodromy_verdict(x0, cfg)?;
    let mono = b.cert("monodromy".into(), Certificate::Monodromy(m));
    b.row(
        "semicovering",
        "Thm. 5.3",
        "π is a semicovering (continuous lifts of paths are unique)",
        false,
        [mv(Verdict::Fails, mono.clone()), mv(Verdict::Fails, mono.clone())],
    );

    b.row(
        "stacky-cover",
        "Sec. 6.4",
        "π is a covering in the sense of stacks over Y",
        false,
        Builder::fixed(Verdict::OutOfScope),
    );

    let deck = deck_group(k)?.summary();
    let trivial_quotient = deck.order == 1;
    let dk = b.cert("deck-group".into(), Certificate::DeckGroup(deck));
    b.row(
        "subgroup-correspondence",
        "Thm. 5.1",
        "π arises from a subgroup of π₁(Y, z) = 1, so its deck group is trivial",
        false,
        [
            mv(holds_if(trivial_quotient), dk.clone()),
            mv(holds_if(trivial_quotient), dk.clone()),
        ],
    );

    b.row(
        "groupoid-covering",
        "Prop. 5.2",
        "π induces a covering of fundamental groupoids",
        false,
        Builder::fixed(Verdict::NotMachineChecked),
    );

    b.row(
        "unique-path-lifting",
        "Prop. 4.1",
        "every path in Y has at most one lift from a given start point",
        false,
        [mv(Verdict::Fails, mono.clone()), mv(Verdict::Fails, mono.clone())],
    );
    b.row(
        "monodromy-defined",
        "Cor. 4.2",
        "a monodromy action of π₁(Y, ι(x0)) on the fibre is defined",
        false,
        [mv(Verdict::Fails, mono.clone()), mv(Verdict::Fails, mono)],
    );

    let field = make_merging_field();
    let bottom = BTreeMap::from([(q(1, 4), 1), (q(3, 4), 2)]);
    let mut v = Vec::new();
    for c in &cfgs {
        let cert = attempt_homotopy_lift(&field, &bottom, c, flags.paper_constancy)?;
        let verdict = match cert.outcome {
            LiftOutcome::NoLift { .. } => Verdict::Fails,
            LiftOutcome::NonUniqueExistence { .. } => Verdict::HoldsNonUniquely,
            LiftOutcome::LiftsEnumerated { lift_count: 1, .. } => Verdict::Holds,
            LiftOutcome::LiftsEnumerated { lift_count, .. } if lift_count > 1 => Verdict::HoldsNonUniquely,
            LiftOutcome::LiftsEnumerated { .. } => Verdict::Fails,
        };
        let key = b.cert(format!("homotopy-lift/{}", model_key(c.model())), Certificate::HomotopyLift(cert));
        v.push(mv(verdict, key));
    }
    b.row(
        "homotopy-lifting-existence",
        "Prop. 4.3",
        "a homotopy of paths in Y lifts continuously, given a lift of its initial path",
        false,
        [v[0].clone(), v[1].clone()],
    );

    b.row(
        "deck-group-symmetric",
        "Prop. 4.4",
        "Deck(π) ≅ S_k, acting by permuting origins",
        true,
        [
            mv(holds_if(deck_is_symmetric(&b, k)), dk.clone()),
            mv(holds_if(deck_is_symmetric(&b, k)), dk),
        ],
    );

    let reports: Vec<_> = cfgs
        .iter()
        .map(separation_report)
        .collect::<Result<_>>()?;
    let sep_row = |b: &mut Builder, axiom: SeparationAxiom| -> [ModelVerdict; 2] {
        let mut out = Vec::new();
        for rep in &reports {
            let verdict = rep.iter().find(|r| r.axiom == axiom).expect("axiom present").clone();
            let holds = verdict.holds;
            let key = b.cert(
                format!("separation-{}/{}", axiom_name(axiom), model_key(verdict.model)),
                Certificate::Separation(SeparationRecord { k, verdict }),
            );
            out.push((holds, key));
        }
        [
            mv(holds_if(out[0].0), out[0].1.clone()),
            mv(holds_if(out[1].0), out[1].1.clone()),
        ]
    };
    let t1 = sep_row(&mut b, SeparationAxiom::T1);
    b.row("t1", "Prop. 2.2", "every point is closed", true, t1);
    let t2 = sep_row(&mut b, SeparationAxiom::T2);
    b.row("hausdorff", "Prop. 2.2", "distinct points have disjoint neighbourhoods", false, t2);

    let mut v = Vec::new();
    for c in &cfgs {
        let chart = LocalChart::build(c, 1, &eps)?;
        let ok = chart.chart_injective;
        let key = b.cert(format!("local-chart/{}", model_key(c.model())), Certificate::LocalChart(chart));
        v.push(mv(holds_if(ok), key));
    }
    b.row(
        "locally-euclidean-at-origins",
        "Prop. 2.2",
        "each origin has a neighbourhood mapped injectively onto an interval by the coordinate",
        true,
        [v[0].clone(), v[1].clone()],
    );

    // The filters coincide exactly when T0 fails on origin pairs.
    let mut v = Vec::new();
    for rep in &reports {
        let verdict = rep.iter().find(|r| r.axiom == SeparationAxiom::T0).expect("T0 present").clone();
        let coincide = !verdict.holds;
        let key = b.cert(
            format!("separation-t0/{}", model_key(verdict.model)),
            Certificate::Separation(SeparationRecord { k, verdict }),
        );
        v.push(mv(holds_if(coincide), key));
    }
    b.row(
        "origin-filters-coincide",
        "Lemma A.2",
        "distinct origins have the same neighbourhood filter",
        true,
        [v[0].clone(), v[1].clone()],
    );

    let probe = probe_loop(1, 2);
    let mut v = Vec::new();
    let mut quotient_class = None;
    for c in &cfgs {
        let record = LoopClassRecord::build(&probe, c)?;
        if record.reduced.is_empty() {
            let cert = contract_loop(&probe, c)?;
            let ok = cert.all_accepted();
            let key = b.cert(format!("loop/{}", model_key(c.model())), Certificate::Contraction(cert));
            v.push(mv(holds_if(ok), key));
        } else {
            let key = b.cert(format!("loop/{}", model_key(c.model())), Certificate::LoopClass(record));
            if c.model() == TopologyModel::Quotient {
                quotient_class = key.clone();
            }
            v.push(mv(Verdict::Fails, key));
        }
    }
    b.row(
        "simply-connected",
        "Thm. 2.3",
        "every loop is null-homotopic",
        true,
        [v[0].clone(), v[1].clone()],
    );

    let pc = PointContraction::build(k);
    let ok = pc.bound_holds;
    let pkey = b.cert("point-contraction/pseudometric".into(), Certificate::PointContraction(pc));
    let quotient = match quotient_class {
        Some(key) => mv(Verdict::Fails, Some(key)),
        None => mv(Verdict::NotMachineChecked, None),
    };
    b.row(
        "contractible",
        "Prop. 2.2(iv)",
        "the space deformation-retracts to a point",
        false,
        [quotient, mv(holds_if(ok), pkey)],
    );

    let locus = RegularLocus::build(cfg)?;
    let ok = locus.singleton_fibres && locus.round_trip && locus.interval_opens;
    let key = b.cert("regular-locus".into(), Certificate::RegularLocus(locus));
    b.row(
        "one-sheeted-regular-locus",
        "Prop. 3.2",
        "π restricts to a one-sheeted local homeomorphism over Y ∖ {z}",
        true,
        [mv(holds_if(ok), key.clone()), mv(holds_if(ok), key)],
    );

    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION,
        config: *cfg,
        x0: x0.clone(),
        paper_constancy: flags.paper_constancy,
        claims: b.claims,
        certificates: b.certificates,
    })
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

fn deck_is_symmetric(b: &Builder, k: usize) -> bool {
    match b.certificates.get("deck-group") {
        Some(Certificate::DeckGroup(d)) => {
            d.order == factorial(k) && d.homomorphism && d.faithful && (k < 3 || !d.abelian)
        }
        _ => false,
    }
}

fn axiom_name(a: SeparationAxiom) -> &'static str {
    match a {
        SeparationAxiom::T0 => "t0",
        SeparationAxiom::T1 => "t1",
        SeparationAxiom::T2 => "t2",
    }
}

impl ReportDocument {
    pub fn claim(&self, id: &str) -> Option<&ClaimRecord> {
        self.claims.iter().find(|c| c.id == id)
    }

    pub fn verdict(&self, id: &str, model: TopologyModel) -> Option<Verdict> {
        self.claim(id).map(|c| c.for_model(model).verdict)
    }

    /// Rechecks every certificate, the row layout, and agreement with a
    /// fresh audit of the same configuration.
    pub fn recheck(&self) -> Result<()> {
        recheck(self.schema_version == SCHEMA_VERSION, || {
            format!("unsupported schema version {}", self.schema_version)
        })?;
        recheck(self.claims.iter().map(|c| c.id.as_str()).eq(CLAIM_IDS), || {
            "claim rows are missing or out of order".into()
        })?;
        for c in &self.claims {
            for m in TopologyModel::ALL {
                let v = c.for_model(m);
                match (&v.certificate, v.verdict.is_static()) {
                    (None, true) => {}
                    (Some(key), false) => {
                        recheck(self.certificates.contains_key(key), || {
                            format!("{}: certificate {key} is missing", c.id)
                        })?;
                    }
                    (None, false) => {
                        return recheck(false, || format!("{}: verdict without certificate", c.id))
                    }
                    (Some(_), true) => {
                        return recheck(false, || format!("{}: static row carries a certificate", c.id))
                    }
                }
            }
        }
        for (key, cert) in &self.certificates {
            cert.recheck().map_err(|e| match e {
                Error::Recheck(msg) => Error::Recheck(format!("{key}: {msg}")),
                other => other,
            })?;
        }
        let fresh = run_audit(
            &self.config,
            &AuditFlags {
                x0: self.x0.clone(),
                paper_constancy: self.paper_constancy,
            },
        )?;
        recheck(fresh == *self, || "report differs from a fresh audit".into())
    }

    /// Fixed-width text table, selected model first.
    pub fn render_table(&self) -> String {
        let first = self.config.model();
        let second = match first {
            TopologyModel::Quotient => TopologyModel::Pseudometric,
            TopologyModel::Pseudometric => TopologyModel::Quotient,
        };
        let mut out = String::new();
        let _ = writeln!(
            out,
            "k = {}, x0 = {}, paper_constancy = {}",
            self.config.k(),
            self.x0,
            self.paper_constancy
        );
        let _ = writeln!(
            out,
            "{:<30} {:<14} {:<9} {:<20} {}",
            "claim",
            "reference",
            "asserted",
            first.name(),
            second.name()
        );
        for c in &self.claims {
            let _ = writeln!(
                out,
                "{:<30} {:<14} {:<9} {:<20} {}",
                c.id,
                c.reference,
                c.asserted,
                c.for_model(first).verdict.label(),
                c.for_model(second).verdict.label()
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn audit(k: usize, pc: bool) -> ReportDocument {
        let cfg = SpaceConfig::new(k, TopologyModel::Quotient).unwrap();
        run_audit(
            &cfg,
            &AuditFlags {
                x0: Q::one(),
                paper_constancy: pc,
            },
        )
        .unwrap()
    }

    #[test]
    fn row_layout() {
        let doc = audit(2, false);
        assert!(doc.claims.iter().map(|c| c.id.as_str()).eq(CLAIM_IDS));
    }

    #[test]
    fn verdicts_k3() {
        use TopologyModel::*;
        let doc = audit(3, false);
        let v = |id, m| doc.verdict(id, m).unwrap();
        assert_eq!(v("t1", Quotient), Verdict::Holds);
        assert_eq!(v("t1", Pseudometric), Verdict::Fails);
        assert_eq!(v("hausdorff", Quotient), Verdict::Fails);
        assert_eq!(v("deck-group-symmetric", Quotient), Verdict::Holds);
        assert_eq!(v("homotopy-lifting-existence", Quotient), Verdict::Fails);
        assert_eq!(v("homotopy-lifting-existence", Pseudometric), Verdict::HoldsNonUniquely);
        assert_eq!(v("simply-connected", Quotient), Verdict::Fails);
        assert_eq!(v("simply-connected", Pseudometric), Verdict::Holds);
        assert_eq!(v("contractible", Pseudometric), Verdict::Holds);
        assert_eq!(v("origin-filters-coincide", Pseudometric), Verdict::Holds);
        assert_eq!(v("stacky-cover", Quotient), Verdict::OutOfScope);
    }

    #[test]
    fn constancy_flag_changes_one_row() {
        let doc = audit(2, true);
        assert_eq!(
            doc.verdict("homotopy-lifting-existence", TopologyModel::Pseudometric),
            Some(Verdict::Fails)
        );
    }

    #[test]
    fn recheck_and_tamper() {
        let doc = audit(2, false);
        doc.recheck().unwrap();
        let mut bad = doc.clone();
        bad.claims[11].quotient.verdict = Verdict::Fails;
        assert!(bad.recheck().unwrap_err().is_recheck());
    }

    #[test]
    fn k_range() {
        let cfg = SpaceConfig::new(7, TopologyModel::Quotient).unwrap();
        assert!(matches!(
            run_audit(&cfg, &AuditFlags::default()),
            Err(Error::KOutOfRange { k: 7, min: 2, max: 6 })
        ));
    }
}
