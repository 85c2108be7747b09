//! Points, topologies and separation queries for the line with `k`
//! inseparable origins.
//!
//! The space is `k` copies of the rational line glued along every nonzero
//! coordinate. A point is therefore either one of the `k` origins or a
//! single label-free nonzero coordinate ([`CanonicalPoint`]).
//!
//! Two topologies are modelled side by side ([`TopologyModel`]):
//!
//! * **Quotient**: basic opens around an origin are the charts
//!   `U_i(ε) = {o_i} ∪ {x : 0 < |x| < ε}`. Origins are distinguishable
//!   (the space is T1) but no two of them can be separated by disjoint opens.
//! * **Pseudometric**: basic opens are balls of the pseudometric
//!   `d(p, q) = |coord(p) - coord(q)|`. Every ball around an origin contains
//!   all origins, so the origins share one neighbourhood filter.
//!
//! Every topological verdict in this crate is tagged with the model it was
//! computed in.

use std::fmt;
use std::str::FromStr;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, JsonSchema,
)]
#[serde(rename_all = "snake_case")]
pub enum TopologyModel {
    Quotient,
    Pseudometric,
}

impl TopologyModel {
    pub const ALL: [TopologyModel; 2] = [TopologyModel::Quotient, TopologyModel::Pseudometric];

    pub fn name(self) -> &'static str {
        match self {
            TopologyModel::Quotient => "quotient",
            TopologyModel::Pseudometric => "pseudometric",
        }
    }
}

impl fmt::Display for TopologyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TopologyModel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "quotient" => Ok(TopologyModel::Quotient),
            "pseudometric" => Ok(TopologyModel::Pseudometric),
            other => Err(format!("unknown topology model {other:?}")),
        }
    }
}

/// Number of origins together with the topology in force.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(try_from = "SpaceConfigRepr")]
pub struct SpaceConfig {
    k: usize,
    model: TopologyModel,
}

#[derive(Deserialize)]
struct SpaceConfigRepr {
    k: usize,
    model: TopologyModel,
}

impl TryFrom<SpaceConfigRepr> for SpaceConfig {
    type Error = Error;

    fn try_from(r: SpaceConfigRepr) -> Result<Self> {
        SpaceConfig::new(r.k, r.model)
    }
}

impl SpaceConfig {
    pub fn new(k: usize, model: TopologyModel) -> Result<Self> {
        if k < 2 {
            return Err(Error::KOutOfRange {
                k,
                min: 2,
                max: usize::MAX,
            });
        }
        Ok(SpaceConfig { k, model })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn model(&self) -> TopologyModel {
        self.model
    }

    /// The same `k` under another topology.
    pub fn with_model(&self, model: TopologyModel) -> SpaceConfig {
        SpaceConfig { k: self.k, model }
    }

    pub fn check_branch(&self, branch: usize) -> Result<()> {
        if (1..=self.k).contains(&branch) {
            Ok(())
        } else {
            Err(Error::BranchOutOfRange { branch, k: self.k })
        }
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if (1..=self.k).contains(&index) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, k: self.k })
        }
    }

    /// Rejects origins outside `1..=k` and regular points with coordinate 0.
    pub fn check_point(&self, p: &CanonicalPoint) -> Result<()> {
        match p {
            CanonicalPoint::Origin(i) => self.check_index(*i),
            CanonicalPoint::Regular(x) if x.is_zero() => Err(Error::ZeroCoordinate),
            CanonicalPoint::Regular(_) => Ok(()),
        }
    }

    pub fn origins(&self) -> impl Iterator<Item = CanonicalPoint> {
        (1..=self.k).map(CanonicalPoint::Origin)
    }
}

/// A pre-quotient pair `(x, branch)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct LabeledRep {
    pub x: Q,
    pub branch: usize,
}

impl LabeledRep {
    pub fn new(x: Q, branch: usize) -> Self {
        LabeledRep { x, branch }
    }
}

/// A point of the glued space: an indexed origin or a nonzero coordinate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum CanonicalPoint {
    Origin(usize),
    Regular(Q),
}

impl CanonicalPoint {
    /// Checked constructor for a regular point.
    pub fn regular(x: Q) -> Result<Self> {
        if x.is_zero() {
            Err(Error::ZeroCoordinate)
        } else {
            Ok(CanonicalPoint::Regular(x))
        }
    }

    pub fn is_origin(&self) -> bool {
        matches!(self, CanonicalPoint::Origin(_))
    }
}

impl fmt::Display for CanonicalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonicalPoint::Origin(i) => write!(f, "o{i}"),
            CanonicalPoint::Regular(x) => write!(f, "[{x}]"),
        }
    }
}

impl FromStr for CanonicalPoint {
    type Err = String;

    /// `o3` for an origin, a rational literal such as `-2/3` for a regular point.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(idx) = s.strip_prefix('o') {
            let i: usize = idx.parse().map_err(|_| format!("bad origin {s:?}"))?;
            return Ok(CanonicalPoint::Origin(i));
        }
        let x: Q = s
            .trim_start_matches('[')
            .trim_end_matches(']')
            .parse()
            .map_err(|e| format!("{e}"))?;
        CanonicalPoint::regular(x).map_err(|e| e.to_string())
    }
}

pub fn canonicalize(rep: &LabeledRep, cfg: &SpaceConfig) -> Result<CanonicalPoint> {
    cfg.check_branch(rep.branch)?;
    if rep.x.is_zero() {
        Ok(CanonicalPoint::Origin(rep.branch))
    } else {
        Ok(CanonicalPoint::Regular(rep.x.clone()))
    }
}

/// Coordinate collapse: origins go to 0.
pub fn coord(p: &CanonicalPoint) -> Q {
    match p {
        CanonicalPoint::Origin(_) => Q::zero(),
        CanonicalPoint::Regular(x) => x.clone(),
    }
}

/// The pseudometric on canonical points, `|coord(p) - coord(q)|`.
pub fn pseudo_dist(p: &CanonicalPoint, q: &CanonicalPoint) -> Q {
    (coord(p) - coord(q)).abs()
}

/// The two-case distance on labelled representatives: `|x - y|` on one
/// branch, `|x| + |y|` across branches. It is not invariant under relabelling
/// nonzero points; [`pseudo_dist`] is its minimum over labels.
pub fn labeled_dist(a: &LabeledRep, b: &LabeledRep, cfg: &SpaceConfig) -> Result<Q> {
    cfg.check_branch(a.branch)?;
    cfg.check_branch(b.branch)?;
    if a.branch == b.branch {
        Ok((&a.x - &b.x).abs())
    } else {
        Ok(a.x.abs() + b.x.abs())
    }
}

/// A basic open set of one of the two topologies.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum BasicOpen {
    /// `{[x] : a < x < b}` with `0 ∉ [a, b]`.
    RegularInterval { a: Q, b: Q },
    /// `{o_i} ∪ {[x] : 0 < |x| < radius}`.
    OriginChart { origin: usize, radius: Q },
    /// `{q : pseudo_dist(center, q) < radius}`.
    Ball { center: CanonicalPoint, radius: Q },
}

impl BasicOpen {
    pub fn regular_interval(a: Q, b: Q) -> Result<Self> {
        let zero = Q::zero();
        if a >= b || (a <= zero && zero <= b) {
            return Err(Error::InvalidPath(format!(
                "regular interval ({a}, {b}) must be nonempty and avoid 0"
            )));
        }
        Ok(BasicOpen::RegularInterval { a, b })
    }

    /// Coordinates of regular members: the open interval `(lo, hi)` minus 0.
    fn regular_span(&self) -> (Q, Q) {
        match self {
            BasicOpen::RegularInterval { a, b } => (a.clone(), b.clone()),
            BasicOpen::OriginChart { radius, .. } => (-radius, radius.clone()),
            BasicOpen::Ball { center, radius } => {
                let c = coord(center);
                (&c - radius, &c + radius)
            }
        }
    }

    /// Indices of the origins in the set.
    fn origin_members(&self, k: usize) -> Vec<usize> {
        (1..=k)
            .filter(|&j| open_contains(self, &CanonicalPoint::Origin(j)))
            .collect()
    }
}

impl fmt::Display for BasicOpen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicOpen::RegularInterval { a, b } => write!(f, "({a}, {b})"),
            BasicOpen::OriginChart { origin, radius } => write!(f, "U_{origin}({radius})"),
            BasicOpen::Ball { center, radius } => write!(f, "B({center}, {radius})"),
        }
    }
}

fn check_radius(eps: &Q) -> Result<()> {
    if eps.is_positive() {
        Ok(())
    } else {
        Err(Error::NonpositiveRadius(eps.clone()))
    }
}

/// Basic open of radius `eps` about `p` in the configured model. Intervals
/// about regular points are clipped to radius `|x|/2` so that their closure
/// stays away from 0.
pub fn basic_open(p: &CanonicalPoint, eps: &Q, cfg: &SpaceConfig) -> Result<BasicOpen> {
    check_radius(eps)?;
    cfg.check_point(p)?;
    Ok(match p {
        CanonicalPoint::Regular(x) => {
            let r = eps.clone().min(x.abs().half());
            BasicOpen::RegularInterval {
                a: x - &r,
                b: x + &r,
            }
        }
        CanonicalPoint::Origin(i) => match cfg.model() {
            TopologyModel::Quotient => BasicOpen::OriginChart {
                origin: *i,
                radius: eps.clone(),
            },
            TopologyModel::Pseudometric => BasicOpen::Ball {
                center: p.clone(),
                radius: eps.clone(),
            },
        },
    })
}

pub fn open_contains(o: &BasicOpen, q: &CanonicalPoint) -> bool {
    match (o, q) {
        (BasicOpen::RegularInterval { a, b }, CanonicalPoint::Regular(x)) => a < x && x < b,
        (BasicOpen::RegularInterval { .. }, CanonicalPoint::Origin(_)) => false,
        (BasicOpen::OriginChart { radius, .. }, CanonicalPoint::Regular(x)) => {
            !x.is_zero() && &x.abs() < radius
        }
        (BasicOpen::OriginChart { origin, .. }, CanonicalPoint::Origin(j)) => origin == j,
        (BasicOpen::Ball { center, radius }, q) => &pseudo_dist(center, q) < radius,
    }
}

/// Exact emptiness test for the intersection of two basic opens.
pub fn opens_disjoint(a: &BasicOpen, b: &BasicOpen, k: usize) -> bool {
    let shared_origin = a
        .origin_members(k)
        .iter()
        .any(|j| open_contains(b, &CanonicalPoint::Origin(*j)));
    if shared_origin {
        return false;
    }
    let (lo_a, hi_a) = a.regular_span();
    let (lo_b, hi_b) = b.regular_span();
    // A nonempty open interval minus {0} is still nonempty.
    lo_a.max(lo_b) >= hi_a.min(hi_b)
}

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, JsonSchema,
)]
pub enum SeparationAxiom {
    T0,
    T1,
    T2,
}

/// Map from a pair of radii to a point lying in both basic opens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum RadiusRule {
    /// `(ε, ε') ↦ Regular(min(ε, ε')/2)`.
    HalfMinRadius,
}

impl RadiusRule {
    pub fn evaluate(&self, eps: &Q, eps2: &Q) -> CanonicalPoint {
        match self {
            RadiusRule::HalfMinRadius => {
                CanonicalPoint::Regular(eps.clone().min(eps2.clone()).half())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum SeparationWitness {
    /// Disjoint opens, one about each point.
    Disjoint {
        around_p: BasicOpen,
        around_q: BasicOpen,
    },
    /// An open about each point that misses the other point.
    Avoiding {
        around_p: BasicOpen,
        around_q: BasicOpen,
    },
    /// Any two basic opens about the points share `rule(ε, ε')`.
    CommonPoint { rule: RadiusRule },
    /// Every basic open about either point contains the other.
    Indistinguishable,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct PairWitness {
    pub p: CanonicalPoint,
    pub q: CanonicalPoint,
    pub witness: SeparationWitness,
}

/// Radii at which negative witnesses are re-evaluated.
pub fn probe_radii() -> Vec<Q> {
    use crate::rational::q;
    vec![q(1, 1), q(1, 2), q(1, 3), q(1, 10), q(7, 1), q(1, 1000), q(22, 7)]
}

impl PairWitness {
    /// Is this a positive (separating) witness?
    pub fn separates(&self) -> bool {
        matches!(
            self.witness,
            SeparationWitness::Disjoint { .. } | SeparationWitness::Avoiding { .. }
        )
    }

    /// Evaluates a negative witness at one pair of radii.
    pub fn check_at(&self, eps: &Q, eps2: &Q, cfg: &SpaceConfig) -> Result<bool> {
        let u = basic_open(&self.p, eps, cfg)?;
        let v = basic_open(&self.q, eps2, cfg)?;
        Ok(match &self.witness {
            SeparationWitness::CommonPoint { rule } => {
                let c = rule.evaluate(eps, eps2);
                open_contains(&u, &c) && open_contains(&v, &c)
            }
            SeparationWitness::Indistinguishable => {
                open_contains(&u, &self.q) && open_contains(&v, &self.p)
            }
            _ => false,
        })
    }

    /// Re-verifies the witness by membership tests.
    pub fn verify(&self, cfg: &SpaceConfig) -> bool {
        match &self.witness {
            SeparationWitness::Disjoint { around_p, around_q } => {
                open_contains(around_p, &self.p)
                    && open_contains(around_q, &self.q)
                    && opens_disjoint(around_p, around_q, cfg.k())
            }
            SeparationWitness::Avoiding { around_p, around_q } => {
                open_contains(around_p, &self.p)
                    && !open_contains(around_p, &self.q)
                    && open_contains(around_q, &self.q)
                    && !open_contains(around_q, &self.p)
            }
            SeparationWitness::CommonPoint { .. } | SeparationWitness::Indistinguishable => {
                let radii = probe_radii();
                radii.iter().all(|e| {
                    radii
                        .iter()
                        .all(|e2| self.check_at(e, e2, cfg).unwrap_or(false))
                })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct SeparationVerdict {
    pub axiom: SeparationAxiom,
    pub model: TopologyModel,
    pub holds: bool,
    /// Separating witnesses for every category when `holds`, otherwise the
    /// failing pairs.
    pub pairs: Vec<PairWitness>,
}

impl SeparationVerdict {
    pub fn verify(&self, cfg: &SpaceConfig) -> bool {
        let cfg = cfg.with_model(self.model);
        !self.pairs.is_empty()
            && self
                .pairs
                .iter()
                .all(|w| w.separates() == self.holds && w.verify(&cfg))
    }
}

/// Disjoint basic opens for two distinct points that are not both origins.
fn disjoint_opens(p: &CanonicalPoint, q: &CanonicalPoint, cfg: &SpaceConfig) -> Result<Option<(BasicOpen, BasicOpen)>> {
    use CanonicalPoint::*;
    Ok(match (p, q) {
        (Origin(_), Origin(_)) => None,
        (Origin(_), Regular(x)) => {
            let r = x.abs();
            Some((
                basic_open(p, &r.half(), cfg)?,
                basic_open(q, &r.half().half(), cfg)?,
            ))
        }
        (Regular(_), Origin(_)) => disjoint_opens(q, p, cfg)?.map(|(a, b)| (b, a)),
        (Regular(x), Regular(y)) => {
            let r = (x - y).abs().half();
            Some((basic_open(p, &r, cfg)?, basic_open(q, &r, cfg)?))
        }
    })
}

fn pair_witness(
    axiom: SeparationAxiom,
    p: &CanonicalPoint,
    q: &CanonicalPoint,
    cfg: &SpaceConfig,
) -> Result<PairWitness> {
    let witness = match disjoint_opens(p, q, cfg)? {
        Some((around_p, around_q)) => match axiom {
            SeparationAxiom::T2 => SeparationWitness::Disjoint { around_p, around_q },
            _ => SeparationWitness::Avoiding { around_p, around_q },
        },
        None => match (axiom, cfg.model()) {
            (SeparationAxiom::T2, _) => SeparationWitness::CommonPoint {
                rule: RadiusRule::HalfMinRadius,
            },
            (_, TopologyModel::Quotient) => {
                let one = Q::one();
                SeparationWitness::Avoiding {
                    around_p: basic_open(p, &one, cfg)?,
                    around_q: basic_open(q, &one, cfg)?,
                }
            }
            (_, TopologyModel::Pseudometric) => SeparationWitness::Indistinguishable,
        },
    };
    Ok(PairWitness {
        p: p.clone(),
        q: q.clone(),
        witness,
    })
}

/// Hausdorff query for two distinct points.
pub fn separable(p: &CanonicalPoint, q: &CanonicalPoint, cfg: &SpaceConfig) -> Result<SeparationVerdict> {
    cfg.check_point(p)?;
    cfg.check_point(q)?;
    if p == q {
        return Err(Error::IdenticalPoints);
    }
    let w = pair_witness(SeparationAxiom::T2, p, q, cfg)?;
    Ok(SeparationVerdict {
        axiom: SeparationAxiom::T2,
        model: cfg.model(),
        holds: w.separates(),
        pairs: vec![w],
    })
}

/// One representative pair per point category: two origins, origin against
/// a positive and a negative point, two points of one sign, two of opposite
/// signs. Every pair of distinct points is carried to one of these by an
/// origin relabelling and a positive rescaling, both of which preserve the
/// basic opens of either model.
pub fn representative_pairs() -> Vec<(CanonicalPoint, CanonicalPoint)> {
    use crate::rational::q;
    use CanonicalPoint::*;
    vec![
        (Origin(1), Origin(2)),
        (Origin(1), Regular(q(1, 1))),
        (Origin(1), Regular(q(-1, 1))),
        (Regular(q(1, 1)), Regular(q(2, 1))),
        (Regular(q(-1, 1)), Regular(q(1, 1))),
    ]
}

/// T0, T1 and T2 verdicts for the configured model.
pub fn separation_report(cfg: &SpaceConfig) -> Result<Vec<SeparationVerdict>> {
    [SeparationAxiom::T0, SeparationAxiom::T1, SeparationAxiom::T2]
        .into_iter()
        .map(|axiom| {
            let all: Vec<PairWitness> = representative_pairs()
                .iter()
                .map(|(p, q)| pair_witness(axiom, p, q, cfg))
                .collect::<Result<_>>()?;
            let holds = all.iter().all(PairWitness::separates);
            let pairs = if holds {
                all
            } else {
                all.into_iter().filter(|w| !w.separates()).collect()
            };
            Ok(SeparationVerdict {
                axiom,
                model: cfg.model(),
                holds,
                pairs,
            })
        })
        .collect()
}

/// Closed-form sequences of regular points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum SequenceSpec {
    /// `1/n`
    Reciprocal,
    /// `c + 1/n`
    Shifted { c: Q },
    /// `(-1)^n / n`
    Alternating,
}

impl SequenceSpec {
    /// The `n`-th term, `n >= 1`.
    pub fn term(&self, n: u64) -> Q {
        let inv = Q::new(1, n as i64);
        match self {
            SequenceSpec::Reciprocal => inv,
            SequenceSpec::Shifted { c } => c + &inv,
            SequenceSpec::Alternating if n.is_multiple_of(2) => inv,
            SequenceSpec::Alternating => -inv,
        }
    }

    pub fn limit(&self) -> Q {
        match self {
            SequenceSpec::Shifted { c } => c.clone(),
            _ => Q::zero(),
        }
    }

    fn validate(&self) -> Result<()> {
        if let SequenceSpec::Shifted { c } = self {
            // c + 1/n = 0 exactly when c = -1/n.
            if c.is_negative() && c.numer().magnitude() == &num_bigint::BigUint::from(1u8) {
                return Err(Error::UnsupportedSequenceForm(format!(
                    "{c} + 1/n passes through 0"
                )));
            }
        }
        Ok(())
    }
}

/// Whether every basic open about `p` eventually contains the sequence.
///
/// All terms are regular. Basic opens about an origin (charts or balls)
/// contain every regular point with `0 < |x| < ε`, and basic opens about
/// `Regular(x)` are intervals about `x`, so convergence reduces to the limit
/// of the coordinates.
pub fn converges_to(seq: &SequenceSpec, p: &CanonicalPoint, cfg: &SpaceConfig) -> Result<bool> {
    seq.validate()?;
    cfg.check_point(p)?;
    Ok(seq.limit() == coord(p))
}
