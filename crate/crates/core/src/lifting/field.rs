use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::path::{check_unit_grid, double_dip_path, PLPathY};
use crate::error::{Error, Result};
use crate::rational::{q, Q};

/// A PL coordinate field `F : [0, 1]² → ℚ`, read as a homotopy in `Y`.
///
/// `values[b][a] = F(s[a], t[b])`. Each grid cell is split along the diagonal
/// from `(s[a], t[b])` to `(s[a+1], t[b+1])` and `F` is affine on both
/// triangles. Triangle ids are `2·(b·(ns−1) + a)` for the lower triangle and
/// one more for the upper.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(try_from = "FieldRepr", into = "FieldRepr")]
pub struct HomotopyField {
    s: Vec<Q>,
    t: Vec<Q>,
    values: Vec<Vec<Q>>,
}

#[derive(Serialize, Deserialize, JsonSchema)]
struct FieldRepr {
    s: Vec<Q>,
    t: Vec<Q>,
    /// One row per `t` breakpoint, one entry per `s` breakpoint.
    values: Vec<Vec<Q>>,
}

impl TryFrom<FieldRepr> for HomotopyField {
    type Error = Error;

    fn try_from(r: FieldRepr) -> Result<Self> {
        HomotopyField::new(r.s, r.t, r.values)
    }
}

impl From<HomotopyField> for FieldRepr {
    fn from(f: HomotopyField) -> Self {
        FieldRepr {
            s: f.s,
            t: f.t,
            values: f.values,
        }
    }
}

pub type Vertex = (Q, Q, Q);

impl HomotopyField {
    pub fn new(s: Vec<Q>, t: Vec<Q>, values: Vec<Vec<Q>>) -> Result<Self> {
        let grid = |v: &[Q], what| {
            check_unit_grid(&v.iter().collect::<Vec<_>>(), what)
                .map_err(|e| Error::InvalidField(e.to_string()))
        };
        grid(&s, "s grid")?;
        grid(&t, "t grid")?;
        if values.len() != t.len() || values.iter().any(|row| row.len() != s.len()) {
            return Err(Error::InvalidField(format!(
                "expected {} rows of {} values",
                t.len(),
                s.len()
            )));
        }
        let field = HomotopyField { s, t, values };
        for (id, tri) in field.triangles() {
            if tri.iter().all(|v| v.2.is_zero()) {
                return Err(Error::ZPlateau2D { triangle: id });
            }
        }
        Ok(field)
    }

    /// Field sampling `f(s, t)` on the given grids.
    pub fn from_fn(s: Vec<Q>, t: Vec<Q>, f: impl Fn(&Q, &Q) -> Q) -> Result<Self> {
        let values = t.iter().map(|tb| s.iter().map(|sa| f(sa, tb)).collect()).collect();
        HomotopyField::new(s, t, values)
    }

    pub fn s_grid(&self) -> &[Q] {
        &self.s
    }

    pub fn t_grid(&self) -> &[Q] {
        &self.t
    }

    pub fn values(&self) -> &[Vec<Q>] {
        &self.values
    }

    fn vertex(&self, a: usize, b: usize) -> Vertex {
        (self.s[a].clone(), self.t[b].clone(), self.values[b][a].clone())
    }

    /// All triangles with their ids, in id order.
    pub fn triangles(&self) -> impl Iterator<Item = (usize, [Vertex; 3])> + '_ {
        let ns = self.s.len();
        (0..self.t.len() - 1).flat_map(move |b| {
            (0..ns - 1).flat_map(move |a| {
                let id = 2 * (b * (ns - 1) + a);
                let p00 = self.vertex(a, b);
                let p10 = self.vertex(a + 1, b);
                let p11 = self.vertex(a + 1, b + 1);
                let p01 = self.vertex(a, b + 1);
                [
                    (id, [p00.clone(), p10, p11.clone()]),
                    (id + 1, [p00, p11, p01]),
                ]
            })
        })
    }

    /// `F(s, t)`, with both arguments clamped to `[0, 1]`.
    pub fn eval(&self, s: &Q, t: &Q) -> Q {
        let cell = |grid: &[Q], x: &Q| -> usize {
            grid.partition_point(|g| g <= x).clamp(1, grid.len() - 1) - 1
        };
        let clamp = |x: &Q| x.clone().max(Q::zero()).min(Q::one());
        let (s, t) = (clamp(s), clamp(t));
        let a = cell(&self.s, &s);
        let b = cell(&self.t, &t);
        let u = (&s - &self.s[a]) / (&self.s[a + 1] - &self.s[a]);
        let v = (&t - &self.t[b]) / (&self.t[b + 1] - &self.t[b]);
        let f = |da: usize, db: usize| &self.values[b + db][a + da];
        if u >= v {
            f(0, 0) + &(&u * &(f(1, 0) - f(0, 0))) + &v * &(f(1, 1) - f(1, 0))
        } else {
            f(0, 0) + &(&v * &(f(0, 1) - f(0, 0))) + &u * &(f(1, 1) - f(0, 1))
        }
    }

    fn edge(grid: &[Q], vals: impl Iterator<Item = Q>) -> Result<PLPathY> {
        PLPathY::new(grid.iter().cloned().zip(vals).collect())
    }

    /// `s ↦ F(s, 0)`.
    pub fn bottom(&self) -> Result<PLPathY> {
        Self::edge(&self.s, self.values[0].iter().cloned())
    }

    /// `s ↦ F(s, 1)`.
    pub fn top(&self) -> Result<PLPathY> {
        Self::edge(&self.s, self.values[self.t.len() - 1].iter().cloned())
    }

    /// `t ↦ F(0, t)`.
    pub fn left(&self) -> Result<PLPathY> {
        Self::edge(&self.t, self.values.iter().map(|r| r[0].clone()))
    }

    /// `t ↦ F(1, t)`.
    pub fn right(&self) -> Result<PLPathY> {
        Self::edge(&self.t, self.values.iter().map(|r| r[r.len() - 1].clone()))
    }
}

/// `F(s, t) = f0(s) + t/8` where `f0` is the double-dip path: the two
/// crossings of the bottom edge are joined by a single arc of zeros with apex
/// `(1/2, 1/2)`, and the top edge stays positive.
pub fn make_merging_field() -> HomotopyField {
    let f0 = double_dip_path();
    let grid: Vec<Q> = (0..=4).map(|n| q(n, 4)).collect();
    HomotopyField::from_fn(grid.clone(), grid, |s, t| f0.eval(s) + t / &q(8, 1))
        .expect("fixture is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merging_field_values() {
        let f = make_merging_field();
        assert_eq!(f.eval(&q(1, 2), &Q::zero()), q(-1, 16));
        assert_eq!(f.bottom().unwrap(), double_dip_path());
        let top_min = f.top().unwrap().values().min().unwrap().clone();
        assert_eq!(top_min, q(1, 16));
        for n in 0..=8 {
            let t = q(n, 8);
            assert_eq!(f.eval(&Q::zero(), &t), q(3, 16) + &t / &q(8, 1));
        }
    }

    #[test]
    fn eval_is_exact_off_grid() {
        // f0 + t/8 is affine on every cell, so interpolation reproduces it.
        let f = make_merging_field();
        let f0 = double_dip_path();
        for i in 0..=12 {
            for j in 0..=12 {
                let (s, t) = (q(i, 12), q(j, 12));
                assert_eq!(f.eval(&s, &t), f0.eval(&s) + &t / &q(8, 1));
            }
        }
    }

    #[test]
    fn eval_uses_the_diagonal() {
        let g = vec![Q::zero(), Q::one()];
        let f = HomotopyField::new(g.clone(), g, vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]).unwrap();
        assert_eq!(f.eval(&q(1, 2), &q(1, 2)), Q::zero());
        assert_eq!(f.eval(&q(3, 4), &q(1, 4)), q(1, 2));
        assert_eq!(f.eval(&q(1, 4), &q(3, 4)), q(1, 2));
    }

    #[test]
    fn zero_triangle_rejected() {
        let g = vec![Q::zero(), q(1, 2), Q::one()];
        let z = Q::zero;
        let rows = vec![vec![z(), z(), Q::one()], vec![z(), z(), Q::one()], vec![Q::one(), Q::one(), Q::one()]];
        assert!(matches!(HomotopyField::new(g.clone(), g, rows), Err(Error::ZPlateau2D { triangle: 0 })));
    }

    #[test]
    fn shape_checks() {
        let g = vec![Q::zero(), Q::one()];
        assert!(HomotopyField::new(g.clone(), g.clone(), vec![vec![Q::one(); 2]]).is_err());
        assert!(HomotopyField::new(vec![Q::one(), Q::zero()], g, vec![vec![Q::one(); 2]; 2]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = make_merging_field();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<HomotopyField>(&s).unwrap(), f);
    }
}
