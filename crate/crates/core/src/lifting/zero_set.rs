use std::collections::{BTreeMap, BTreeSet};

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

use super::field::{HomotopyField, Vertex};
use crate::error::{Error, Result};
use crate::rational::Q;

pub type Point2 = (Q, Q);

/// Piece of the zero set inside one triangle; `a == b` for an isolated zero
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct ZeroSegment {
    pub triangle: usize,
    pub a: Point2,
    pub b: Point2,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct ZeroComponent {
    /// Indices into [`ZeroSetComplex::segments`].
    pub segments: Vec<usize>,
    /// `s` values where the component meets `t = 0`.
    pub bottom_touches: Vec<Q>,
    /// `s` values where the component meets `t = 1`.
    pub top_touches: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, JsonSchema)]
pub struct ZeroSetComplex {
    pub segments: Vec<ZeroSegment>,
    pub components: Vec<ZeroComponent>,
}

impl ZeroSetComplex {
    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Component containing the bottom-edge point `(s, 0)`.
    pub fn component_at_bottom(&self, s: &Q) -> Option<usize> {
        self.components.iter().position(|c| c.bottom_touches.contains(s))
    }

    pub fn component_at_top(&self, s: &Q) -> Option<usize> {
        self.components.iter().position(|c| c.top_touches.contains(s))
    }
}

fn point(v: &Vertex) -> Point2 {
    (v.0.clone(), v.1.clone())
}

fn crossing(p: &Vertex, r: &Vertex) -> Point2 {
    let lambda = &p.2 / &(&p.2 - &r.2);
    (
        &p.0 + &(&lambda * &(&r.0 - &p.0)),
        &p.1 + &(&lambda * &(&r.1 - &p.1)),
    )
}

/// Zero locus of the affine interpolant on one triangle.
fn triangle_zeros(tri: &[Vertex; 3]) -> Option<(Point2, Point2)> {
    let zero: Vec<usize> = (0..3).filter(|&i| tri[i].2.is_zero()).collect();
    match zero.len() {
        3 => unreachable!("rejected when the field is built"),
        2 => Some((point(&tri[zero[0]]), point(&tri[zero[1]]))),
        1 => {
            let z = zero[0];
            let (p, r) = (&tri[(z + 1) % 3], &tri[(z + 2) % 3]);
            let here = point(&tri[z]);
            if p.2.signum() != r.2.signum() {
                Some((here, crossing(p, r)))
            } else {
                Some((here.clone(), here))
            }
        }
        _ => {
            let ends: Vec<Point2> = [(0, 1), (1, 2), (2, 0)]
                .iter()
                .filter(|&&(i, j)| tri[i].2.signum() != tri[j].2.signum())
                .map(|&(i, j)| crossing(&tri[i], &tri[j]))
                .collect();
            (ends.len() == 2).then(|| (ends[0].clone(), ends[1].clone()))
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Exact zero set of `field`, with components identified through shared
/// endpoints.
///
/// Segments are listed by triangle id. A segment on an edge shared by two
/// triangles is kept once, under the lower id, and a zero vertex is listed as
/// a point only if no segment ends there. Components are ordered by their
/// least point in `(t, s)` order.
pub fn extract_zero_set(field: &HomotopyField) -> Result<ZeroSetComplex> {
    let mut seen = BTreeSet::new();
    let mut raw = Vec::new();
    for (triangle, tri) in field.triangles() {
        if tri.iter().all(|v| v.2.is_zero()) {
            return Err(Error::ZPlateau2D { triangle });
        }
        if let Some((a, b)) = triangle_zeros(&tri) {
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            if seen.insert((a.clone(), b.clone())) {
                raw.push(ZeroSegment { triangle, a, b });
            }
        }
    }
    let endpoints: BTreeSet<&Point2> = raw
        .iter()
        .filter(|s| s.a != s.b)
        .flat_map(|s| [&s.a, &s.b])
        .collect();
    let segments: Vec<ZeroSegment> = raw
        .iter()
        .filter(|s| s.a != s.b || !endpoints.contains(&s.a))
        .cloned()
        .collect();

    let mut ids: BTreeMap<(&Q, &Q), usize> = BTreeMap::new();
    for s in &segments {
        for p in [&s.a, &s.b] {
            let n = ids.len();
            ids.entry((&p.1, &p.0)).or_insert(n);
        }
    }
    let mut uf = UnionFind((0..ids.len()).collect());
    for s in &segments {
        uf.union(ids[&(&s.a.1, &s.a.0)], ids[&(&s.b.1, &s.b.0)]);
    }

    // `ids` iterates in (t, s) order, so the first point seen of each root is
    // its least point.
    let mut order: BTreeMap<usize, usize> = BTreeMap::new();
    let mut touches: Vec<(BTreeSet<Q>, BTreeSet<Q>)> = Vec::new();
    let keys: Vec<((Q, Q), usize)> = ids.iter().map(|((t, s), &i)| (((*t).clone(), (*s).clone()), i)).collect();
    for ((t, s), i) in keys {
        let root = uf.find(i);
        let n = order.len();
        let c = *order.entry(root).or_insert(n);
        if c == touches.len() {
            touches.push(Default::default());
        }
        if t.is_zero() {
            touches[c].0.insert(s.clone());
        }
        if t == Q::one() {
            touches[c].1.insert(s);
        }
    }
    let mut components: Vec<ZeroComponent> = touches
        .into_iter()
        .map(|(bottom, top)| ZeroComponent {
            segments: Vec::new(),
            bottom_touches: bottom.into_iter().collect(),
            top_touches: top.into_iter().collect(),
        })
        .collect();
    for (n, s) in segments.iter().enumerate() {
        let root = uf.find(ids[&(&s.a.1, &s.a.0)]);
        components[order[&root]].segments.push(n);
    }
    Ok(ZeroSetComplex {
        segments,
        components,
    })
}
