use std::collections::HashMap;
use std::fmt;

use itertools::Itertools;
use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projection::project;
use crate::rational::{q, Q};
use crate::space::{coord, pseudo_dist, CanonicalPoint};

/// A permutation `σ` of `{1, …, k}`, acting by `h_σ(o_i) = o_σ(i)` and
/// fixing regular points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DeckElement {
    /// `perm[i - 1] = σ(i)`.
    perm: Vec<usize>,
}

impl TryFrom<Vec<usize>> for DeckElement {
    type Error = Error;

    fn try_from(perm: Vec<usize>) -> Result<Self> {
        DeckElement::new(perm)
    }
}

impl From<DeckElement> for Vec<usize> {
    fn from(g: DeckElement) -> Self {
        g.perm
    }
}

impl DeckElement {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let k = perm.len();
        let mut seen = vec![false; k];
        for &i in &perm {
            if i == 0 || i > k || std::mem::replace(&mut seen[i - 1], true) {
                return Err(Error::InvalidPermutation(format!(
                    "{perm:?} is not a bijection of 1..={k}"
                )));
            }
        }
        Ok(DeckElement { perm })
    }

    pub fn identity(k: usize) -> Self {
        DeckElement {
            perm: (1..=k).collect(),
        }
    }

    /// The transposition `(i j)` in `S_k`.
    pub fn transposition(k: usize, i: usize, j: usize) -> Result<Self> {
        let mut perm: Vec<usize> = (1..=k).collect();
        if i == 0 || j == 0 || i > k || j > k || i == j {
            return Err(Error::InvalidPermutation(format!("({i} {j}) in S_{k}")));
        }
        perm.swap(i - 1, j - 1);
        Ok(DeckElement { perm })
    }

    pub fn degree(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// `σ(i)`; indices beyond the degree are fixed.
    pub fn image(&self, i: usize) -> usize {
        self.perm.get(i.wrapping_sub(1)).copied().unwrap_or(i)
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(n, &i)| i == n + 1)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &DeckElement) -> DeckElement {
        let k = self.degree().max(other.degree());
        DeckElement {
            perm: (1..=k).map(|i| self.image(other.image(i))).collect(),
        }
    }

    pub fn inverse(&self) -> DeckElement {
        let mut perm = vec![0; self.degree()];
        for (n, &i) in self.perm.iter().enumerate() {
            perm[i - 1] = n + 1;
        }
        DeckElement { perm }
    }
}

impl fmt::Display for DeckElement {
    /// Cycle notation without fixed points; `id` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut done = vec![false; self.degree()];
        let mut any = false;
        for start in 1..=self.degree() {
            if done[start - 1] || self.image(start) == start {
                continue;
            }
            any = true;
            let mut cycle = vec![start];
            done[start - 1] = true;
            let mut i = self.image(start);
            while i != start {
                done[i - 1] = true;
                cycle.push(i);
                i = self.image(i);
            }
            write!(f, "({})", cycle.iter().join(" "))?;
        }
        if !any {
            f.write_str("id")?;
        }
        Ok(())
    }
}

pub fn deck_apply(g: &DeckElement, p: &CanonicalPoint) -> CanonicalPoint {
    match p {
        CanonicalPoint::Origin(i) => CanonicalPoint::Origin(g.image(*i)),
        CanonicalPoint::Regular(_) => p.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct DeckReport {
    pub element: DeckElement,
    pub sample_count: usize,
    /// `π ∘ h_σ = π` on every sample.
    pub equivariant: bool,
    /// `h_σ` preserves `pseudo_dist` on every pair of samples.
    pub isometry: bool,
    /// `h_σ ∘ h_σ⁻¹` fixes every sample.
    pub inverse: bool,
    pub failures: Vec<String>,
}

impl DeckReport {
    pub fn all_pass(&self) -> bool {
        self.equivariant && self.isometry && self.inverse
    }
}

pub fn deck_verify(g: &DeckElement, samples: &[CanonicalPoint]) -> DeckReport {
    let inv = g.inverse();
    let mut failures = Vec::new();
    let mut equivariant = true;
    let mut inverse = true;
    for p in samples {
        let hp = deck_apply(g, p);
        if project(&hp) != project(p) {
            equivariant = false;
            failures.push(format!("π(h({p})) ≠ π({p})"));
        }
        if deck_apply(g, &deck_apply(&inv, p)) != *p {
            inverse = false;
            failures.push(format!("h ∘ h⁻¹ moves {p}"));
        }
    }
    let mut isometry = true;
    for (a, b) in samples.iter().tuple_combinations() {
        if pseudo_dist(&deck_apply(g, a), &deck_apply(g, b)) != pseudo_dist(a, b) {
            isometry = false;
            failures.push(format!("distance between {a} and {b} changes"));
        }
    }
    DeckReport {
        element: g.clone(),
        sample_count: samples.len(),
        equivariant,
        isometry,
        inverse,
        failures,
    }
}

/// Every origin and a few regular points of both signs.
pub fn deck_samples(k: usize) -> Vec<CanonicalPoint> {
    (1..=k)
        .map(CanonicalPoint::Origin)
        .chain([q(1, 1), q(-1, 1), q(1, 2), q(-7, 3)].into_iter().map(CanonicalPoint::Regular))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct NonCommutingWitness {
    pub sigma: DeckElement,
    pub tau: DeckElement,
    pub point: CanonicalPoint,
    /// `h_σ(h_τ(point))`
    pub sigma_tau: CanonicalPoint,
    /// `h_τ(h_σ(point))`
    pub tau_sigma: CanonicalPoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct DeckGroupTable {
    pub k: usize,
    /// Lexicographic order of the image lists.
    pub elements: Vec<DeckElement>,
    /// `composition[a][b]` is the index of `elements[a] ∘ elements[b]`.
    pub composition: Vec<Vec<usize>>,
    /// `h_σ ∘ h_τ = h_{στ}` on the sample points, for all pairs.
    pub homomorphism: bool,
    /// Distinct elements move some origin differently.
    pub faithful: bool,
    pub abelian: bool,
    pub non_commuting: Option<NonCommutingWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct DeckGroupSummary {
    pub k: usize,
    pub order: usize,
    pub homomorphism: bool,
    pub faithful: bool,
    pub abelian: bool,
    pub non_commuting: Option<NonCommutingWitness>,
}

impl DeckGroupTable {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn summary(&self) -> DeckGroupSummary {
        DeckGroupSummary {
            k: self.k,
            order: self.order(),
            homomorphism: self.homomorphism,
            faithful: self.faithful,
            abelian: self.abelian,
            non_commuting: self.non_commuting.clone(),
        }
    }
}

pub const DECK_GROUP_MAX_K: usize = 6;

pub fn deck_group(k: usize) -> Result<DeckGroupTable> {
    if !(2..=DECK_GROUP_MAX_K).contains(&k) {
        return Err(Error::KOutOfRange {
            k,
            min: 2,
            max: DECK_GROUP_MAX_K,
        });
    }
    let elements: Vec<DeckElement> = (1..=k)
        .permutations(k)
        .map(|perm| DeckElement { perm })
        .collect();
    let index: HashMap<&DeckElement, usize> =
        elements.iter().enumerate().map(|(n, g)| (g, n)).collect();
    let samples = deck_samples(k);
    // Actions of each element on the samples, so the homomorphism check
    // compares tables rather than recomputing products pointwise.
    let action: Vec<Vec<CanonicalPoint>> = elements
        .iter()
        .map(|g| samples.iter().map(|p| deck_apply(g, p)).collect())
        .collect();

    let mut composition = Vec::with_capacity(elements.len());
    let mut homomorphism = true;
    for sigma in &elements {
        let mut row = Vec::with_capacity(elements.len());
        for tau in &elements {
            let st = sigma.compose(tau);
            let c = index[&st];
            homomorphism &= action[c]
                .iter()
                .zip(&samples)
                .all(|(hp, p)| *hp == deck_apply(sigma, &deck_apply(tau, p)));
            row.push(c);
        }
        composition.push(row);
    }
    let faithful = action
        .iter()
        .map(|row| &row[..k])
        .all_unique();
    let n = elements.len();
    let abelian = (0..n).all(|a| (0..a).all(|b| composition[a][b] == composition[b][a]));
    let non_commuting = if k >= 3 {
        let sigma = DeckElement::transposition(k, 1, 2)?;
        let tau = DeckElement::transposition(k, 1, 3)?;
        let point = CanonicalPoint::Origin(1);
        Some(NonCommutingWitness {
            sigma_tau: deck_apply(&sigma, &deck_apply(&tau, &point)),
            tau_sigma: deck_apply(&tau, &deck_apply(&sigma, &point)),
            sigma,
            tau,
            point,
        })
    } else {
        None
    };
    Ok(DeckGroupTable {
        k,
        elements,
        composition,
        homomorphism,
        faithful,
        abelian,
        non_commuting,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "snake_case")]
pub enum RegularPart {
    Identity,
    /// Regular points `x ↦ y`.
    Moved(Vec<(Q, Q)>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct DeckCandidate {
    pub origins: DeckElement,
    pub regular: RegularPart,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct RigidityVerdict {
    pub accepted: bool,
    /// `(x, y)` with `π(x) ≠ π(y)` for a moved regular point `x ↦ y`.
    pub witness: Option<(Q, Q)>,
    pub conclusion: String,
}

/// A map commuting with `π` fixes every regular point, since `π` is
/// injective there; so a deck candidate is accepted iff its regular part is
/// the identity, and it is then `h_σ` for the unique `σ` it induces on the
/// origins.
pub fn deck_rigidity(candidate: &DeckCandidate) -> RigidityVerdict {
    let moved = match &candidate.regular {
        RegularPart::Identity => None,
        RegularPart::Moved(pairs) => pairs
            .iter()
            .find(|(x, y)| {
                coord(&CanonicalPoint::Regular(x.clone())) != coord(&CanonicalPoint::Regular(y.clone()))
            })
            .cloned(),
    };
    let conclusion = match &moved {
        Some((x, y)) => format!(
            "rejected: the candidate sends [{x}] to [{y}] but π([{x}]) = {x} ≠ {y} = π([{y}])"
        ),
        None => format!(
            "accepted: the candidate is h_σ for σ = {}, determined by its action on the origins",
            candidate.origins
        ),
    };
    RigidityVerdict {
        accepted: moved.is_none(),
        witness: moved,
        conclusion,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_examples() {
        let s = DeckElement::transposition(2, 1, 2).unwrap();
        assert_eq!(deck_apply(&s, &CanonicalPoint::Origin(1)), CanonicalPoint::Origin(2));
        let five = CanonicalPoint::Regular(q(5, 1));
        assert_eq!(deck_apply(&s, &five), five);
        let id = DeckElement::identity(3);
        assert!(deck_samples(3).iter().all(|p| deck_apply(&id, p) == *p));
    }

    #[test]
    fn verify_examples() {
        let s = DeckElement::transposition(2, 1, 2).unwrap();
        assert!(deck_verify(&s, &deck_samples(2)).all_pass());
        let c = DeckElement::new(vec![2, 3, 1]).unwrap();
        assert!(deck_verify(&c, &deck_samples(3)).all_pass());
        let c3 = c.compose(&c).compose(&c);
        assert!(c3.is_identity());
        assert!(DeckElement::new(vec![1, 1, 3]).is_err());
        assert!(DeckElement::new(vec![0, 1]).is_err());
        assert!(serde_json::from_str::<DeckElement>("[2,2]").is_err());
    }

    #[test]
    fn cycle_notation() {
        assert_eq!(DeckElement::new(vec![2, 3, 1]).unwrap().to_string(), "(1 2 3)");
        assert_eq!(DeckElement::new(vec![2, 1, 4, 3]).unwrap().to_string(), "(1 2)(3 4)");
        assert_eq!(DeckElement::identity(3).to_string(), "id");
    }

    #[test]
    fn group_orders() {
        let g2 = deck_group(2).unwrap();
        assert_eq!(g2.order(), 2);
        assert!(g2.abelian && g2.non_commuting.is_none());
        let g3 = deck_group(3).unwrap();
        assert_eq!(g3.order(), 6);
        assert!(g3.homomorphism && g3.faithful && !g3.abelian);
        let w = g3.non_commuting.unwrap();
        assert_ne!(w.sigma_tau, w.tau_sigma);
        assert_eq!(w.sigma.to_string(), "(1 2)");
        assert_eq!(w.tau.to_string(), "(1 3)");
        assert!(matches!(deck_group(1), Err(Error::KOutOfRange { .. })));
        assert!(deck_group(7).is_err());
    }

    #[test]
    fn table_identity_and_inverses() {
        let g = deck_group(4).unwrap();
        let e = g.elements.iter().position(DeckElement::is_identity).unwrap();
        assert_eq!(e, 0);
        for (a, row) in g.composition.iter().enumerate() {
            assert_eq!(row[e], a);
            assert_eq!(row.iter().filter(|&&c| c == e).count(), 1);
        }
    }

    #[test]
    fn rigidity() {
        let moved = DeckCandidate {
            origins: DeckElement::identity(2),
            regular: RegularPart::Moved(vec![(q(1, 1), q(2, 1))]),
        };
        let v = deck_rigidity(&moved);
        assert!(!v.accepted);
        assert_eq!(v.witness, Some((q(1, 1), q(2, 1))));
        for origins in [DeckElement::transposition(2, 1, 2).unwrap(), DeckElement::identity(2)] {
            assert!(deck_rigidity(&DeckCandidate { origins, regular: RegularPart::Identity }).accepted);
        }
    }
}
