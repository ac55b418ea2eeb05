mod support;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use conebound::engine::{explain, saturate, saturate_with, verify_tree, Options, Status};
use conebound::ext::{ExtNat, Fin, Inf};
use conebound::interval::Interval;
use conebound::key::Side;
use conebound::scene::{elaborate, parse_scene, Elaborated};
use conebound::store::{BoundStore, Justification};

fn ext() -> impl Strategy<Value = ExtNat> {
    prop_oneof![9 => (0u64..50).prop_map(Fin), 1 => Just(Inf)]
}

fn interval() -> impl Strategy<Value = Interval> {
    (ext(), ext()).prop_map(|(a, b)| Interval::new(a.min(b), a.max(b)).unwrap())
}

fn elab(seed: u64) -> Elaborated {
    elaborate(&parse_scene(&support::random_scene(seed)).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn add_is_monotone_and_commutative(a in ext(), b in ext(), c in ext()) {
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!((a + b) + c, a + (b + c));
        if a <= b {
            prop_assert!(a + c <= b + c);
            prop_assert!(a * c <= b * c);
        }
    }

    #[test]
    fn monus_is_residual_of_add(a in ext(), b in (0u64..50).prop_map(Fin), c in ext()) {
        // a ∸ b ≤ c exactly when a ≤ b + c, for finite b.
        prop_assert_eq!(a.monus(b) <= c, a <= b + c);
    }

    #[test]
    fn ceil_div_is_least_quotient(n in ext(), d in ext(), q in ext()) {
        prop_assume!(d != Fin(0));
        prop_assert_eq!(n.ceil_div(d) <= q, n <= q * d);
    }

    #[test]
    fn meet_is_a_semilattice(x in interval(), y in interval(), z in interval()) {
        prop_assert_eq!(x.meet(x), Ok(x));
        prop_assert_eq!(x.meet(y).ok(), y.meet(x).ok());
        let left = x.meet(y).and_then(|xy| xy.meet(z)).ok();
        let right = y.meet(z).and_then(|yz| x.meet(yz)).ok();
        prop_assert_eq!(left, right);
        if let Ok(m) = x.meet(y) {
            prop_assert!(m.lo() >= x.lo() && m.hi() <= x.hi());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_logged_tightening_is_strict(seed in any::<u64>()) {
        let e = elab(seed);
        let result = saturate(&e);
        for key in result.store.keys() {
            let mut lo = Fin(0);
            let mut hi = Inf;
            for &id in result.store.history(key) {
                let j = result.store.justification(id);
                match j.side {
                    Side::Lo => { prop_assert!(j.value > lo); lo = j.value; }
                    Side::Hi => { prop_assert!(j.value < hi); hi = j.value; }
                }
            }
            prop_assert_eq!(result.store.bounds(key), (lo, hi));
        }
    }

    #[test]
    fn saturated_store_is_stable(seed in any::<u64>()) {
        let result = saturate(&elab(seed));
        if !matches!(result.status, Status::BudgetExhausted(_)) {
            prop_assert!(result.is_stable());
        }
    }

    #[test]
    fn processing_order_does_not_matter(seed in any::<u64>(), shuffle in any::<u64>()) {
        let e = elab(seed);
        let base = saturate(&e);
        let mut order: Vec<usize> = (0..base.instances.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(shuffle));
        let permuted = saturate_with(&e, &Options { order: Some(order), ..Options::default() });
        prop_assert_eq!(base.store.snapshot(), permuted.store.snapshot());
        prop_assert_eq!(base.status.name(), permuted.status.name());
    }

    #[test]
    fn log_replays_to_the_same_store(seed in any::<u64>()) {
        let e = elab(seed);
        let result = saturate(&e);
        let json = serde_json::to_string(result.store.log()).unwrap();
        let log: Vec<Justification> = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(BoundStore::replay(e.maps().len(), &log), result.store);
    }

    #[test]
    fn derivation_trees_replay(seed in any::<u64>()) {
        let e = elab(seed);
        let result = saturate(&e);
        prop_assume!(!matches!(result.status, Status::BudgetExhausted(_)));
        for key in result.store.keys() {
            for side in [Side::Lo, Side::Hi] {
                let tree = explain(&result, key, side).unwrap();
                let (lo, hi) = result.store.bounds(key);
                let expected = if side == Side::Lo { lo } else { hi };
                prop_assert_eq!(tree.value().map(|(_, _, v)| v), Some(expected));
                if let Err(msg) = verify_tree(&result, &tree) {
                    return Err(TestCaseError::fail(msg));
                }
            }
        }
    }
}
