use proptest::prelude::*;

use nonhaus::space::{labeled_dist, pseudo_dist, CanonicalPoint, LabeledRep, SpaceConfig, TopologyModel};
use nonhaus::symmetry::{deck_apply, reduce_with, DeckElement, Letter, ReductionRule, Sign, Word};
use nonhaus::{q, Q};

const K: usize = 4;

fn rational() -> impl Strategy<Value = Q> {
    (-60i64..=60, 1i64..=12).prop_map(|(n, d)| q(n, d))
}

fn point() -> impl Strategy<Value = CanonicalPoint> {
    prop_oneof![
        (1..=K).prop_map(CanonicalPoint::Origin),
        rational()
            .prop_filter("nonzero", |x| !x.is_zero())
            .prop_map(CanonicalPoint::Regular),
    ]
}

fn labels(p: &CanonicalPoint) -> Vec<LabeledRep> {
    match p {
        CanonicalPoint::Origin(i) => vec![LabeledRep::new(Q::zero(), *i)],
        CanonicalPoint::Regular(x) => (1..=K).map(|i| LabeledRep::new(x.clone(), i)).collect(),
    }
}

fn letter() -> impl Strategy<Value = Letter> {
    (1usize..=3, any::<bool>()).prop_map(|(o, d)| Letter::new(o, if d { Sign::Down } else { Sign::Up }))
}

/// Repeatedly cancels the leftmost cancellable pair.
fn naive_reduce(w: &[Letter], rule: ReductionRule) -> Vec<Letter> {
    let mut w = w.to_vec();
    while let Some(i) = (0..w.len().saturating_sub(1)).find(|&i| rule.cancels(w[i], w[i + 1])) {
        w.drain(i..i + 2);
    }
    w
}

fn perm() -> impl Strategy<Value = DeckElement> {
    Just((1..=K).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|p| DeckElement::new(p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn triangle_inequality(a in point(), b in point(), c in point()) {
        prop_assert!(pseudo_dist(&a, &c) <= pseudo_dist(&a, &b) + pseudo_dist(&b, &c));
        prop_assert_eq!(pseudo_dist(&a, &b), pseudo_dist(&b, &a));
    }

    #[test]
    fn labeled_minimum_is_pseudo_dist(a in point(), b in point()) {
        let cfg = SpaceConfig::new(K, TopologyModel::Pseudometric).unwrap();
        let min = labels(&a)
            .iter()
            .flat_map(|x| labels(&b).into_iter().map(move |y| (x.clone(), y)))
            .map(|(x, y)| labeled_dist(&x, &y, &cfg).unwrap())
            .min()
            .unwrap();
        prop_assert_eq!(min, pseudo_dist(&a, &b));
    }

    #[test]
    fn reduction_is_confluent(w in prop::collection::vec(letter(), 0..24)) {
        for rule in [ReductionRule::SameOrigin, ReductionRule::AnyOrigin] {
            let fast = reduce_with(&Word(w.clone()), rule);
            prop_assert_eq!(&fast.word.0, &naive_reduce(&w, rule));
            prop_assert_eq!(fast.trace.len() * 2 + fast.word.len(), w.len());
        }
    }

    #[test]
    fn deck_action_is_homomorphic(s in perm(), t in perm(), p in point()) {
        let st = s.compose(&t);
        prop_assert_eq!(deck_apply(&st, &p), deck_apply(&s, &deck_apply(&t, &p)));
        prop_assert_eq!(deck_apply(&s.inverse(), &deck_apply(&s, &p)), p.clone());
        prop_assert_eq!(pseudo_dist(&deck_apply(&s, &p), &p), Q::zero());
    }

    #[test]
    fn rational_json_round_trip(x in rational()) {
        let text = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<Q>(&text).unwrap(), x);
    }
}
