//! The projection `π : L → Y`, its fibres, and the certificates that only
//! depend on `π` and the singular fibre over `z`.

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::embedding::YPoint;
use crate::error::{recheck, Error, Result};
use crate::lifting::{LiftedPath, PLPathY};
use crate::rational::{q, Q};
use crate::space::{
    basic_open, coord, open_contains, BasicOpen, CanonicalPoint, SpaceConfig, TopologyModel,
};

pub fn project(p: &CanonicalPoint) -> YPoint {
    YPoint::new(coord(p))
}

pub fn fibre(y: &YPoint, cfg: &SpaceConfig) -> Vec<CanonicalPoint> {
    if y.is_z() {
        cfg.origins().collect()
    } else {
        vec![CanonicalPoint::Regular(y.x.clone())]
    }
}

/// Inverse of `π` over `Y ∖ {z}`.
pub fn regular_inverse(y: &YPoint, cfg: &SpaceConfig) -> Result<CanonicalPoint> {
    if y.is_z() {
        return Err(Error::SingularPoint(cfg.k()));
    }
    Ok(CanonicalPoint::Regular(y.x.clone()))
}

/// Two origins and a point lying in both of their basic opens of radius `ε`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct OriginPairWitness {
    pub i: usize,
    pub j: usize,
    pub open_i: BasicOpen,
    pub open_j: BasicOpen,
    pub common: CanonicalPoint,
}

/// Why `W = (-ε, ε)` is not evenly covered.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct EvenCoverFailure {
    pub k: usize,
    pub model: TopologyModel,
    pub radius: Q,
    pub fibre: Vec<CanonicalPoint>,
    pub witnesses: Vec<OriginPairWitness>,
    pub conclusion: Vec<String>,
}

fn check_radius(eps: &Q) -> Result<()> {
    if eps.is_positive() {
        Ok(())
    } else {
        Err(Error::NonpositiveRadius(eps.clone()))
    }
}

pub fn even_cover_certificate(eps: &Q, cfg: &SpaceConfig) -> Result<EvenCoverFailure> {
    check_radius(eps)?;
    let k = cfg.k();
    let mut witnesses = Vec::with_capacity(k * (k - 1) / 2);
    for i in 1..=k {
        for j in i + 1..=k {
            witnesses.push(OriginPairWitness {
                i,
                j,
                open_i: basic_open(&CanonicalPoint::Origin(i), eps, cfg)?,
                open_j: basic_open(&CanonicalPoint::Origin(j), eps, cfg)?,
                common: CanonicalPoint::Regular(eps.half()),
            });
        }
    }
    let cert = EvenCoverFailure {
        k,
        model: cfg.model(),
        radius: eps.clone(),
        fibre: fibre(&YPoint::z(), cfg),
        witnesses,
        conclusion: vec![
            format!("π⁻¹(W) contains the fibre over z, which has {k} points"),
            "every two origins have intersecting neighbourhoods inside π⁻¹(W), so a family of \
             pairwise disjoint opens covering π⁻¹(W) puts all origins in one member"
                .into(),
            format!(
                "that member contains {k} preimages of z, so π restricted to it is not injective \
                 and it is not a sheet over W"
            ),
        ],
    };
    cert.recheck()?;
    Ok(cert)
}

impl EvenCoverFailure {
    pub fn recheck(&self) -> Result<()> {
        let cfg = SpaceConfig::new(self.k, self.model)?;
        check_radius(&self.radius)?;
        recheck(self.fibre == fibre(&YPoint::z(), &cfg), || "fibre record does not match the fibre over z".into())?;
        recheck(self.witnesses.len() == self.k * (self.k - 1) / 2, || {
            format!("{} pair witnesses for k = {}", self.witnesses.len(), self.k)
        })?;
        let mut pairs = Vec::new();
        for w in &self.witnesses {
            recheck(w.i < w.j && w.j <= self.k, || format!("bad pair ({}, {})", w.i, w.j))?;
            pairs.push((w.i, w.j));
            let oi = CanonicalPoint::Origin(w.i);
            let oj = CanonicalPoint::Origin(w.j);
            recheck(
                w.open_i == basic_open(&oi, &self.radius, &cfg)?
                    && w.open_j == basic_open(&oj, &self.radius, &cfg)?,
                || format!("opens for ({}, {}) are not the radius-{} basic opens", w.i, w.j, self.radius),
            )?;
            let c = coord(&w.common);
            recheck(
                open_contains(&w.open_i, &w.common)
                    && open_contains(&w.open_j, &w.common)
                    && c.abs() < self.radius
                    && !c.is_zero(),
                || format!("common point {} is not in both opens inside π⁻¹(W)", w.common),
            )?;
        }
        pairs.sort_unstable();
        pairs.dedup();
        recheck(pairs.len() == self.witnesses.len(), || "duplicate origin pairs".into())
    }
}

/// Paths `o_i → [ε/2] → o_{i+1}` inside `π⁻¹(W)`, one for each `i < k`.
pub fn preimage_connected_certificate(eps: &Q, cfg: &SpaceConfig) -> Result<Vec<LiftedPath>> {
    check_radius(eps)?;
    let base = PLPathY::new(vec![
        (Q::zero(), Q::zero()),
        (q(1, 2), eps.half()),
        (Q::one(), Q::zero()),
    ])?;
    let mut paths = Vec::with_capacity(cfg.k() - 1);
    for i in 1..cfg.k() {
        let path = LiftedPath::from_choice(&base, vec![i, i + 1])?;
        let v = crate::lifting::verify_lift_continuity(&path, cfg)?;
        recheck(v.continuous, || format!("connecting path {i} is not continuous"))?;
        recheck(path.base.values().all(|c| &c.abs() < eps), || {
            format!("connecting path {i} leaves π⁻¹(W)")
        })?;
        paths.push(path);
    }
    Ok(paths)
}

/// Two sections of `π` over `(-ε, ε)` that agree off `z` and differ at `z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct SectionWitness {
    pub radius: Q,
    pub i: usize,
    pub j: usize,
    /// `(x, s_i(x), s_j(x))` at the sampled coordinates.
    pub samples: Vec<(Q, CanonicalPoint, CanonicalPoint)>,
    pub agreement: String,
    pub at_z: (CanonicalPoint, CanonicalPoint),
}

fn section(x: &Q, origin: usize) -> CanonicalPoint {
    if x.is_zero() {
        CanonicalPoint::Origin(origin)
    } else {
        CanonicalPoint::Regular(x.clone())
    }
}

pub fn etale_separatedness_witness(eps: &Q, i: usize, j: usize, cfg: &SpaceConfig) -> Result<SectionWitness> {
    check_radius(eps)?;
    cfg.check_index(i)?;
    cfg.check_index(j)?;
    if i == j {
        return Err(Error::EqualIndices);
    }
    let half = eps.half();
    let quarter = half.half();
    let samples = [half.clone(), -&half, quarter.clone(), -&quarter]
        .into_iter()
        .map(|x| (x.clone(), section(&x, i), section(&x, j)))
        .collect();
    let w = SectionWitness {
        radius: eps.clone(),
        i,
        j,
        samples,
        agreement: "W ∖ {z}".into(),
        at_z: (CanonicalPoint::Origin(i), CanonicalPoint::Origin(j)),
    };
    w.recheck()?;
    Ok(w)
}

impl SectionWitness {
    pub fn recheck(&self) -> Result<()> {
        recheck(self.i != self.j, || "sections use the same origin".into())?;
        recheck(self.at_z.0 != self.at_z.1, || "sections agree at z".into())?;
        recheck(
            self.at_z == (section(&Q::zero(), self.i), section(&Q::zero(), self.j)),
            || "values at z do not match the section indices".into(),
        )?;
        recheck(project(&self.at_z.0).is_z() && project(&self.at_z.1).is_z(), || "sections do not lie over z".into())?;
        recheck(!self.samples.is_empty(), || "no samples".into())?;
        for (x, a, b) in &self.samples {
            recheck(!x.is_zero() && x.abs() < self.radius, || format!("sample {x} is not in W ∖ {{z}}"))?;
            recheck(a == b, || format!("sections differ at {x}"))?;
            recheck(project(a).x == *x && project(b).x == *x, || format!("π ∘ s ≠ id at {x}"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{canonicalize, LabeledRep};

    fn cfg(k: usize) -> SpaceConfig {
        SpaceConfig::new(k, TopologyModel::Quotient).unwrap()
    }

    #[test]
    fn project_and_fibres() {
        assert_eq!(project(&CanonicalPoint::Regular(Q::one())), YPoint::new(Q::one()));
        assert!(project(&CanonicalPoint::Origin(3)).is_z());
        assert_eq!(fibre(&YPoint::z(), &cfg(3)).len(), 3);
        assert_eq!(fibre(&YPoint::new(Q::one()), &cfg(3)), vec![CanonicalPoint::Regular(Q::one())]);
        assert!(matches!(regular_inverse(&YPoint::z(), &cfg(2)), Err(Error::SingularPoint(2))));
        let y = YPoint::new(q(-1, 3));
        assert_eq!(project(&regular_inverse(&y, &cfg(2)).unwrap()), y);
    }

    #[test]
    fn projection_ignores_labels() {
        let c = cfg(4);
        for x in [q(0, 1), q(1, 2), q(-7, 3)] {
            let ys: Vec<_> = (1..=4)
                .map(|i| project(&canonicalize(&LabeledRep::new(x.clone(), i), &c).unwrap()))
                .collect();
            assert!(ys.windows(2).all(|w| w[0] == w[1]));
        }
    }

    #[test]
    fn even_cover_examples() {
        let c = even_cover_certificate(&Q::one(), &cfg(2)).unwrap();
        assert_eq!(c.witnesses[0].common, CanonicalPoint::Regular(q(1, 2)));
        let c = even_cover_certificate(&q(1, 10), &cfg(5).with_model(TopologyModel::Pseudometric)).unwrap();
        assert_eq!(c.fibre.len(), 5);
        assert_eq!(c.witnesses.len(), 10);
        assert!(c.witnesses.iter().all(|w| w.common == CanonicalPoint::Regular(q(1, 20))));
        assert!(even_cover_certificate(&Q::zero(), &cfg(2)).is_err());
    }

    #[test]
    fn tampered_even_cover_fails_recheck() {
        let mut c = even_cover_certificate(&Q::one(), &cfg(3)).unwrap();
        c.witnesses[1].common = CanonicalPoint::Regular(q(2, 1));
        assert!(c.recheck().unwrap_err().is_recheck());
        let mut c = even_cover_certificate(&Q::one(), &cfg(3)).unwrap();
        c.fibre.pop();
        assert!(c.recheck().is_err());
    }

    #[test]
    fn connecting_paths() {
        let ps = preimage_connected_certificate(&Q::one(), &cfg(2)).unwrap();
        assert_eq!(ps.len(), 1);
        let p = &ps[0];
        assert_eq!(p.eval(&Q::zero()), Some(CanonicalPoint::Origin(1)));
        assert_eq!(p.eval(&q(1, 2)), Some(CanonicalPoint::Regular(q(1, 2))));
        assert_eq!(p.eval(&Q::one()), Some(CanonicalPoint::Origin(2)));
        assert_eq!(preimage_connected_certificate(&Q::one(), &cfg(3)).unwrap().len(), 2);
        assert!(preimage_connected_certificate(&q(-1, 1), &cfg(2)).is_err());
    }

    #[test]
    fn section_witness() {
        let w = etale_separatedness_witness(&Q::one(), 1, 2, &cfg(2)).unwrap();
        let xs: Vec<_> = w.samples.iter().map(|s| s.0.clone()).collect();
        assert_eq!(xs, vec![q(1, 2), q(-1, 2), q(1, 4), q(-1, 4)]);
        assert!(etale_separatedness_witness(&q(2, 1), 1, 3, &cfg(3)).is_ok());
        assert!(matches!(etale_separatedness_witness(&Q::one(), 2, 2, &cfg(3)), Err(Error::EqualIndices)));
        assert!(matches!(
            etale_separatedness_witness(&Q::one(), 1, 4, &cfg(3)),
            Err(Error::IndexOutOfRange { .. })
        ));
    }
}
