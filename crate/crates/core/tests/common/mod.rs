//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use nonhaus::lifting::{verify_lift_continuity, HomotopyField, LiftedPath, PLPathY};
use nonhaus::space::{CanonicalPoint, SpaceConfig};
use nonhaus::{q, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rational with numerator in `±1..=num_max` and denominator in `1..=den_max`.
pub fn rand_q(r: &mut ChaCha8Rng, num_max: i64, den_max: i64) -> Q {
    let n = r.gen_range(1..=num_max) * if r.gen_bool(0.5) { 1 } else { -1 };
    q(n, r.gen_range(1..=den_max))
}

pub fn rand_point(r: &mut ChaCha8Rng, k: usize) -> CanonicalPoint {
    if r.gen_bool(0.25) {
        CanonicalPoint::Origin(r.gen_range(1..=k))
    } else {
        CanonicalPoint::Regular(rand_q(r, 50, 20))
    }
}

/// Path through 0 `m` times, alternating sides, starting and ending at `±1`.
pub fn multi_dip(m: usize) -> PLPathY {
    let n = 2 * m as i64;
    let pts = (0..=n)
        .map(|j| {
            let x = match j % 4 {
                0 => Q::one(),
                2 => -Q::one(),
                _ => Q::zero(),
            };
            (q(j, n), x)
        })
        .collect();
    PLPathY::new(pts).unwrap()
}

/// Counts continuous lifts by trying every origin word over the z-times.
pub fn brute_force_lift_count(path: &PLPathY, cfg: &SpaceConfig) -> usize {
    let m = path.z_times().unwrap().len();
    let k = cfg.k();
    let total = k.pow(m as u32);
    (0..total)
        .filter(|&code| {
            let mut c = code;
            let choice: Vec<usize> = (0..m)
                .map(|_| {
                    let d = c % k;
                    c /= k;
                    d + 1
                })
                .collect();
            let lift = LiftedPath::from_choice(path, choice).unwrap();
            verify_lift_continuity(&lift, cfg).unwrap().continuous
        })
        .count()
}

type Pt = (Q, Q);

fn zero_points(tri: &[(Q, Q, Q); 3]) -> Vec<Pt> {
    let mut out = Vec::new();
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        let (a, b) = (&tri[i], &tri[j]);
        if a.2.is_zero() {
            out.push((a.0.clone(), a.1.clone()));
        }
        if a.2.signum() * b.2.signum() < 0 {
            let lambda = &a.2 / &(&a.2 - &b.2);
            out.push((
                &a.0 + &((&b.0 - &a.0) * lambda.clone()),
                &a.1 + &((&b.1 - &a.1) * lambda),
            ));
        }
    }
    out
}

/// Connected components of `F = 0` by breadth-first search over the
/// zero points of each triangle, keyed by `(s, t)`.
pub fn zero_components(field: &HomotopyField) -> Vec<BTreeSet<Pt>> {
    let mut adj: BTreeMap<Pt, BTreeSet<Pt>> = BTreeMap::new();
    for (_, tri) in field.triangles() {
        let pts = zero_points(&tri);
        for p in &pts {
            let e = adj.entry(p.clone()).or_default();
            e.extend(pts.iter().cloned());
        }
    }
    let mut seen = BTreeSet::new();
    let mut comps = Vec::new();
    for start in adj.keys() {
        if seen.contains(start) {
            continue;
        }
        let mut comp = BTreeSet::new();
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start.clone());
        while let Some(p) = queue.pop_front() {
            for n in &adj[&p] {
                if seen.insert(n.clone()) {
                    queue.push_back(n.clone());
                }
            }
            comp.insert(p);
        }
        comps.push(comp);
    }
    comps
}

/// Number of origin assignments to the zero set that extend `bottom`:
/// constant on components, or constant on the whole zero set when `global`.
pub fn homotopy_assignment_count(
    field: &HomotopyField,
    bottom: &BTreeMap<Q, usize>,
    k: usize,
    global: bool,
) -> usize {
    let comps = zero_components(field);
    let comp_of = |s: &Q| {
        comps
            .iter()
            .position(|c| c.contains(&(s.clone(), Q::zero())))
            .expect("bottom z-time lies on the zero set")
    };
    let c = if global { 1 } else { comps.len() };
    (0..k.pow(c as u32))
        .filter(|&code| {
            let digit = |i: usize| (code / k.pow(i as u32)) % k + 1;
            bottom.iter().all(|(s, &o)| {
                let comp = if global { 0 } else { comp_of(s) };
                digit(comp) == o
            })
        })
        .count()
}
