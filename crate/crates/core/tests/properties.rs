//! Property tests for the core invariants: canonical form stability,
//! indexing bijections, the permutation group action, and trade
//! reversibility.

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fourcycle::decompose::enumerate_keys;
use fourcycle::model::{cycle_count, pair_count, CycleSystem, Edge, FourCycle, Permutation, Relabel};
use fourcycle::tables;
use fourcycle::trades::{find_trades, TradeVolume};

fn assert_send_sync<T: Send + Sync>() {}

#[test]
fn model_values_are_shareable() {
    assert_send_sync::<FourCycle>();
    assert_send_sync::<CycleSystem>();
    assert_send_sync::<Permutation>();
    assert_send_sync::<fourcycle::Bitrade>();
    assert_send_sync::<fourcycle::TradePath>();
}

/// Four distinct labels in 1..=30.
fn distinct_quad() -> impl Strategy<Value = [u8; 4]> {
    proptest::sample::subsequence((1u8..=30).collect::<Vec<_>>(), 4).prop_flat_map(|subset| {
        // subset is ascending; shuffle it into a traversal order
        (Just(subset), 0..24usize).prop_map(|(s, k)| {
            let mut arr = [s[0], s[1], s[2], s[3]];
            // k-th permutation of 4 elements, factorial number system
            let mut rest: Vec<u8> = arr.to_vec();
            let mut k = k;
            for (i, slot) in arr.iter_mut().enumerate() {
                let f = [6, 2, 1, 1][i];
                let pick = (k / f) % rest.len();
                k %= f;
                *slot = rest.remove(pick);
            }
            arr
        })
    })
}

fn permutation_of_9() -> impl Strategy<Value = Permutation> {
    any::<u64>().prop_map(|seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut images: Vec<u8> = (1..=9).collect();
        images.shuffle(&mut rng);
        Permutation::from_images(images).unwrap()
    })
}

proptest! {
    #[test]
    fn canonical_form_constant_over_dihedral_orbit(quad in distinct_quad()) {
        let canon = FourCycle::from_array(quad).unwrap();
        for r in 0..4 {
            let rot = [quad[r], quad[(r + 1) % 4], quad[(r + 2) % 4], quad[(r + 3) % 4]];
            let refl = [rot[0], rot[3], rot[2], rot[1]];
            prop_assert_eq!(FourCycle::from_array(rot).unwrap(), canon);
            prop_assert_eq!(FourCycle::from_array(refl).unwrap(), canon);
        }
        // idempotent
        prop_assert_eq!(FourCycle::from_array(canon.vertices()).unwrap(), canon);
    }

    #[test]
    fn cycle_index_roundtrip(n in 5u8..=12, frac in 0.0f64..1.0) {
        let total = cycle_count(n);
        let idx = ((total as f64 * frac) as usize).min(total - 1);
        let c = FourCycle::from_index(idx, n).unwrap();
        prop_assert_eq!(c.index(n).unwrap(), idx);
    }

    #[test]
    fn edge_index_roundtrip(n in 2u8..=49, frac in 0.0f64..1.0) {
        let total = pair_count(n);
        let idx = ((total as f64 * frac) as usize).min(total - 1);
        let e = Edge::from_index(idx, n).unwrap();
        prop_assert_eq!(e.index(n).unwrap(), idx);
    }

    #[test]
    fn group_action_composes(sigma in permutation_of_9(), tau in permutation_of_9(), quad in distinct_quad()) {
        let quad = quad.map(|v| (v - 1) % 9 + 1);
        if quad[0] != quad[1] && quad[0] != quad[2] && quad[0] != quad[3]
            && quad[1] != quad[2] && quad[1] != quad[3] && quad[2] != quad[3] {
            let c = FourCycle::from_array(quad).unwrap();
            prop_assert_eq!(c.relabel(&sigma).relabel(&tau), c.relabel(&sigma.then(&tau)));
            prop_assert_eq!(c.relabel(&Permutation::identity(9)), c);
        }
    }

    #[test]
    fn system_action_composes(sigma in permutation_of_9(), tau in permutation_of_9(), row in 1usize..=8) {
        let s = tables::table4_row(row);
        prop_assert_eq!(s.relabel(&sigma).relabel(&tau), s.relabel(&sigma.then(&tau)));
    }

    #[test]
    fn relabeled_systems_stay_valid_partitions(sigma in permutation_of_9(), row in 1usize..=8) {
        let moved = tables::table4_row(row).relabel(&sigma);
        // full incidence scan through the validating constructor
        prop_assert!(CycleSystem::from_cycles(9, moved.cycles().to_vec()).is_ok());
        prop_assert_eq!(4 * moved.len(), pair_count(9));
    }

    #[test]
    fn trades_invert_cleanly(sigma in permutation_of_9(), row in 1usize..=8) {
        let s = tables::table4_row(row).relabel(&sigma);
        for t in find_trades(&s, TradeVolume::Both).into_iter().take(6) {
            let moved = s.apply_trade(t.t1(), t.t2()).unwrap();
            let back = moved.apply_trade(t.t2(), t.t1()).unwrap();
            prop_assert_eq!(&back, &s);
        }
    }
}

#[test]
fn enumeration_is_closed_under_relabeling() {
    let keys = enumerate_keys(9);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let mut images: Vec<u8> = (1..=9).collect();
        images.shuffle(&mut rng);
        let sigma = Permutation::from_images(images).unwrap();
        let pick = keys[(rng.next_u64() % keys.len() as u64) as usize];
        let moved = CycleSystem::from_key(pick, 9).relabel(&sigma);
        assert!(keys.binary_search(&moved.key()).is_ok());
    }
}
