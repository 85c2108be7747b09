use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q, Q};

/// `(numerator, denominator)`.
pub type Frac = (i64, i64);

/// A piecewise-linear coordinate function `c : [0, 1] → ℚ`, read as a path in
/// `Y` (parameters with `c(t) = 0` are passages through `z`).
///
/// Construction splits every segment whose endpoints have opposite signs at
/// its root, so zeros of `c` only ever occur at breakpoints. Plateaus at 0 are
/// representable but rejected by every operation that needs isolated zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(try_from = "PathRepr", into = "PathRepr")]
pub struct PLPathY {
    breakpoints: Vec<(Q, Q)>,
}

#[derive(Serialize, Deserialize, JsonSchema)]
struct PathRepr {
    /// `(t, x)` pairs, `t` strictly increasing from 0 to 1.
    breakpoints: Vec<(Q, Q)>,
}

impl TryFrom<PathRepr> for PLPathY {
    type Error = Error;

    fn try_from(r: PathRepr) -> Result<Self> {
        PLPathY::new(r.breakpoints)
    }
}

impl From<PLPathY> for PathRepr {
    fn from(p: PLPathY) -> Self {
        PathRepr {
            breakpoints: p.breakpoints,
        }
    }
}

pub(crate) fn check_unit_grid(ts: &[&Q], what: &str) -> Result<()> {
    if ts.len() < 2 {
        return Err(Error::InvalidPath(format!("{what}: need at least two breakpoints")));
    }
    if !ts[0].is_zero() || *ts[ts.len() - 1] != Q::one() {
        return Err(Error::InvalidPath(format!("{what}: parameters must run from 0 to 1")));
    }
    if ts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidPath(format!(
            "{what}: parameters must be strictly increasing"
        )));
    }
    Ok(())
}

impl PLPathY {
    pub fn new(points: Vec<(Q, Q)>) -> Result<Self> {
        check_unit_grid(&points.iter().map(|p| &p.0).collect::<Vec<_>>(), "path")?;
        let mut breakpoints = Vec::with_capacity(points.len());
        for (i, p) in points.iter().enumerate() {
            if i > 0 {
                let (t0, x0) = &points[i - 1];
                let (t1, x1) = p;
                if x0.signum() * x1.signum() < 0 {
                    let root = t0 + &((t1 - t0) * x0 / (x0 - x1));
                    breakpoints.push((root, Q::zero()));
                }
            }
            breakpoints.push(p.clone());
        }
        Ok(PLPathY { breakpoints })
    }

    /// Path through the given `(t, x)` integer-ratio literals, for fixtures.
    pub fn from_pairs(pairs: &[(Frac, Frac)]) -> Result<Self> {
        PLPathY::new(
            pairs
                .iter()
                .map(|&((tn, td), (xn, xd))| (q(tn, td), q(xn, xd)))
                .collect(),
        )
    }

    pub fn breakpoints(&self) -> &[(Q, Q)] {
        &self.breakpoints
    }

    pub fn params(&self) -> impl Iterator<Item = &Q> {
        self.breakpoints.iter().map(|b| &b.0)
    }

    pub fn values(&self) -> impl Iterator<Item = &Q> {
        self.breakpoints.iter().map(|b| &b.1)
    }

    pub fn start(&self) -> &Q {
        &self.breakpoints[0].1
    }

    pub fn end(&self) -> &Q {
        &self.breakpoints[self.breakpoints.len() - 1].1
    }

    /// `c(t)`; parameters outside `[0, 1]` are clamped.
    pub fn eval(&self, t: &Q) -> Q {
        let bp = &self.breakpoints;
        if t <= &bp[0].0 {
            return bp[0].1.clone();
        }
        let idx = bp.partition_point(|(s, _)| s <= t);
        if idx >= bp.len() {
            return bp[bp.len() - 1].1.clone();
        }
        let (t0, x0) = &bp[idx - 1];
        if t0 == t {
            return x0.clone();
        }
        let (t1, x1) = &bp[idx];
        x0 + &((x1 - x0) * (t - t0) / (t1 - t0))
    }

    /// Breakpoint indices where the path sits at `z`.
    pub fn z_indices(&self) -> Result<Vec<usize>> {
        if let Some(w) = self
            .breakpoints
            .windows(2)
            .find(|w| w[0].1.is_zero() && w[1].1.is_zero())
        {
            return Err(Error::ZPlateau {
                start: Box::new(w[0].0.clone()),
                end: Box::new(w[1].0.clone()),
            });
        }
        Ok(self
            .breakpoints
            .iter()
            .enumerate()
            .filter(|(_, b)| b.1.is_zero())
            .map(|(i, _)| i)
            .collect())
    }

    pub fn z_times(&self) -> Result<Vec<Q>> {
        Ok(self
            .z_indices()?
            .into_iter()
            .map(|i| self.breakpoints[i].0.clone())
            .collect())
    }

    /// Largest `|slope|` over all segments.
    pub fn max_slope(&self) -> Q {
        self.breakpoints
            .windows(2)
            .map(|w| ((&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0)).abs())
            .max()
            .unwrap_or_else(Q::zero)
    }
}

/// The loop `c(t) = x0(1 - 2t)` on `[0, 1/2]`, `x0(2t - 1)` on `[1/2, 1]`,
/// which passes through `z` once, at `t = 1/2`.
pub fn make_gamma(x0: &Q) -> Result<PLPathY> {
    if !x0.is_positive() {
        return Err(Error::NonpositiveBasepoint(x0.clone()));
    }
    PLPathY::new(vec![
        (Q::zero(), x0.clone()),
        (q(1, 2), Q::zero()),
        (Q::one(), x0.clone()),
    ])
}

/// Crosses `z` downwards at `t = 1/4` and upwards at `t = 3/4`.
pub fn double_dip_path() -> PLPathY {
    PLPathY::from_pairs(&[
        ((0, 1), (3, 16)),
        ((1, 4), (0, 1)),
        ((1, 2), (-1, 16)),
        ((3, 4), (0, 1)),
        ((1, 1), (3, 16)),
    ])
    .expect("fixture is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        let g = make_gamma(&Q::one()).unwrap();
        assert_eq!(g.eval(&q(1, 4)), q(1, 2));
        assert_eq!(g.eval(&q(1, 2)), Q::zero());
        assert_eq!(g.eval(&q(3, 4)), q(1, 2));
        assert_eq!(g.z_times().unwrap(), vec![q(1, 2)]);
        assert!(matches!(make_gamma(&Q::zero()), Err(Error::NonpositiveBasepoint(_))));
        assert_eq!(g.max_slope(), q(2, 1));
    }

    #[test]
    fn gamma_matches_affine_pieces() {
        let x0 = q(3, 2);
        let g = make_gamma(&x0).unwrap();
        for n in 0..=32 {
            let t = q(n, 32);
            let want = if t <= q(1, 2) {
                &x0 * &(Q::one() - q(2, 1) * &t)
            } else {
                &x0 * &(q(2, 1) * &t - Q::one())
            };
            assert_eq!(g.eval(&t), want);
        }
    }

    #[test]
    fn double_dip_z_times() {
        assert_eq!(double_dip_path().z_times().unwrap(), vec![q(1, 4), q(3, 4)]);
    }

    #[test]
    fn plateau_is_rejected() {
        let p = PLPathY::from_pairs(&[((0, 1), (0, 1)), ((1, 2), (0, 1)), ((1, 1), (1, 1))]).unwrap();
        assert!(matches!(p.z_times(), Err(Error::ZPlateau { .. })));
    }

    #[test]
    fn crossings_are_split() {
        let p = PLPathY::from_pairs(&[((0, 1), (1, 1)), ((1, 1), (-3, 1))]).unwrap();
        assert_eq!(p.z_times().unwrap(), vec![q(1, 4)]);
        assert_eq!(p.breakpoints().len(), 3);
        assert_eq!(p.eval(&q(1, 2)), q(-1, 1));
    }

    #[test]
    fn bad_parameters() {
        assert!(PLPathY::from_pairs(&[((0, 1), (1, 1))]).is_err());
        assert!(PLPathY::from_pairs(&[((1, 4), (1, 1)), ((1, 1), (1, 1))]).is_err());
        assert!(PLPathY::from_pairs(&[((0, 1), (1, 1)), ((1, 2), (1, 1)), ((1, 2), (1, 1)), ((1, 1), (1, 1))]).is_err());
    }

    #[test]
    fn json_validates() {
        let bad = r#"{"breakpoints":[["0","1"],["1/2","1"]]}"#;
        assert!(serde_json::from_str::<PLPathY>(bad).is_err());
        let g = make_gamma(&Q::one()).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"breakpoints":[["0","1"],["1/2","0"],["1","1"]]}"#);
        assert_eq!(serde_json::from_str::<PLPathY>(&s).unwrap(), g);
    }
}
