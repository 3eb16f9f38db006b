//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its measured values (visible with `--nocapture`); the test result
//! line itself is the pass/fail verdict.
//!
//! Criterion 3 contains one deliberately red sub-check: the volume-3
//! census at foundation 8 exhaustively finds TWO isomorphism classes where
//! the classical count expected one. The test prints the witness bitrade
//! of the second class and fails honestly rather than weakening the check.

use std::sync::OnceLock;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fourcycle::algebra;
use fourcycle::connectivity::{
    bfs_closure_keys, bfs_connectivity, path_engine, seed_path, spanning_tree, BfsOptions,
};
use fourcycle::decompose::{
    canonical_label, develop_cyclic, enumerate_keys, table4_orbits, CyclicStarter, SLabel,
};
use fourcycle::io::{parse_certificate, path_certificate, verify_certificate};
use fourcycle::model::{pair_count, CycleSystem, Permutation, Relabel};
use fourcycle::tables;
use fourcycle::trades::{
    bitrade_from_parts, exhaustive_trade_census, extend_muway, find_trades, TradeVolume,
};
use fourcycle::TradeConfig;

fn all_system_keys() -> &'static Vec<u128> {
    static KEYS: OnceLock<Vec<u128>> = OnceLock::new();
    KEYS.get_or_init(|| enumerate_keys(9))
}

fn random_permutation(rng: &mut ChaCha8Rng) -> Permutation {
    let mut images: Vec<u8> = (1..=9).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

#[test]
fn criterion_01_table_fidelity() {
    let t = Instant::now();
    let rows = tables::table4_checked().expect("all 8 stored rows validate as 4-CS(9)");
    assert_eq!(rows.len(), 8);
    let mut canon = Vec::new();
    for row in rows {
        assert_eq!(row.order(), 9);
        assert_eq!(row.len(), 9);
        // 36 edges covered exactly once is enforced by construction;
        // rebuild from raw cycles to exercise the validator end to end
        CycleSystem::from_cycles(9, row.cycles().to_vec()).unwrap();
        canon.push(canonical_label(row).canonical_system);
    }
    let mut distinct = canon.clone();
    distinct.sort_by_key(|s| s.key());
    distinct.dedup();
    assert_eq!(distinct.len(), 8, "the 8 rows are pairwise non-isomorphic");
    let elapsed = t.elapsed();
    assert!(elapsed.as_secs() < 10, "criterion budget is 10 seconds");
    println!("criterion 1 PASS: 8 valid rows, 8 distinct classes ({elapsed:?})");
}

#[test]
fn criterion_02_completeness() {
    let t = Instant::now();
    let keys = all_system_keys();
    let orbits = table4_orbits();

    // orbit-stabilizer self-consistency, with the automorphism counts
    // derived twice (orbit size vs direct stabilizer count)
    let mut expected_total = 0u64;
    for (i, label) in SLabel::all().iter().enumerate() {
        let aut_direct = canonical_label(label.system()).automorphism_count;
        assert_eq!(
            aut_direct, orbits.automorphisms[i],
            "automorphism count of {label} agrees between routes"
        );
        assert_eq!(orbits.keys[i].len() as u64 * aut_direct, 362_880);
        expected_total += orbits.keys[i].len() as u64;
    }
    assert_eq!(
        keys.len() as u64,
        expected_total,
        "N9 equals the sum of 9!/|Aut(S_i)|"
    );

    // exact set equality: the enumeration is precisely the union of the
    // eight labeled orbits (so classification yields exactly 8 classes)
    let mut merged: Vec<u128> = orbits.keys.iter().flatten().copied().collect();
    merged.sort_unstable();
    let before_dedup = merged.len();
    merged.dedup();
    assert_eq!(before_dedup, merged.len(), "orbits are pairwise disjoint");
    assert_eq!(&merged, keys, "enumeration equals the union of the orbits");

    // spot agreement between orbit classification and canonical labeling
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..5 {
        let key = keys[(rng.next_u64() % keys.len() as u64) as usize];
        let sys = CycleSystem::from_key(key, 9);
        let via_orbit = orbits.classify_key(key).unwrap();
        let via_canon = canonical_label(&sys).label.unwrap();
        assert_eq!(via_orbit, via_canon);
    }
    let elapsed = t.elapsed();
    assert!(elapsed.as_secs() < 600, "criterion budget is 10 minutes");
    println!(
        "criterion 2 PASS: N9 = {} systems in exactly 8 classes, aut counts {:?} ({elapsed:?})",
        keys.len(),
        orbits.automorphisms,
    );
}

#[test]
fn criterion_03_trade_census() {
    let t = Instant::now();

    // the F6 trade has exactly two non-isomorphic 3-way extensions
    let f6 = bitrade_from_parts(&tables::table2()[0], &tables::table2()[1]).unwrap();
    let exts = extend_muway(&f6).unwrap();
    assert_eq!(exts.len(), 2, "F6: two non-isomorphic extensions");
    assert!(exts.iter().all(|e| e.mu() == 3));

    // the F8 trade extends to a 5-way reproducing Table 6 exactly
    let t6 = tables::table6();
    let f8 = bitrade_from_parts(&t6[0], &t6[1]).unwrap();
    let exts = extend_muway(&f8).unwrap();
    let five = exts.iter().find(|e| e.mu() == 5).expect("5-way extension");
    let mut expected: Vec<Vec<fourcycle::FourCycle>> = t6
        .iter()
        .map(|p| {
            let mut v = p.clone();
            v.sort_unstable();
            v
        })
        .collect();
    expected.sort();
    assert_eq!(five.parts(), expected.as_slice());

    // census by foundation
    let entries = exhaustive_trade_census(6..=10);
    let counts: Vec<(u8, usize)> = entries.iter().map(|e| (e.foundation, e.classes)).collect();
    let elapsed = t.elapsed();
    assert!(elapsed.as_secs() < 60, "criterion budget is 1 minute");
    println!(
        "criterion 3: census = {counts:?}, F6 extensions = 2, F8 5-way matches ({elapsed:?})"
    );
    let stated = vec![(6u8, 1usize), (7, 3), (8, 1), (9, 0), (10, 0)];
    if counts != stated {
        println!("criterion 3 ERRATUM: expected {stated:?}, found {counts:?}.");
        println!(
            "  The foundation-8 count is 2: besides K_2,6 there is a second class on the \
             graph made of a 4-cycle (1-2-3-4) with leaves 5,6 joined to 1,3 and leaves \
             7,8 joined to 2,4. Witness bitrade:"
        );
        println!("    t1 = (1,2,3,5) (1,4,3,6) (2,7,4,8)");
        println!("    t2 = (1,2,8,4) (1,5,3,6) (2,3,4,7)");
        println!(
            "  The classical uniqueness argument covers only the 5-way case (where K_2,6 \
             is indeed the unique graph, verified above). This check fails honestly."
        );
    }
    assert_eq!(
        counts, stated,
        "volume-3 census by foundation (see printed erratum: foundation 8 \
         genuinely has a second class; run with --nocapture for the witness)"
    );
}

#[test]
fn criterion_04_spanning_tree() {
    let t = Instant::now();
    let tree = spanning_tree();
    assert_eq!(tree.witnesses.len(), 7, "seven tree edges");

    // stated assignment: e16,e34,e46,e56,e68 -> T', e25 (+ substitute) -> T''
    for (i, j, cfg) in [
        (1, 6, TradeConfig::F7Tprime),
        (3, 4, TradeConfig::F7Tprime),
        (4, 6, TradeConfig::F7Tprime),
        (5, 6, TradeConfig::F7Tprime),
        (6, 8, TradeConfig::F7Tprime),
        (2, 5, TradeConfig::F7Tdoubleprime),
    ] {
        let w = tree
            .witnesses
            .iter()
            .find(|w| (w.i, w.j) == (i, j))
            .unwrap_or_else(|| panic!("edge ({i},{j}) verified"));
        assert_eq!(w.bitrade.volume(), 3);
        assert_eq!(w.config, cfg);
        assert!(!w.substituted);
    }

    // the stated e27 fails (its symmetric difference has volume 5) and the
    // flagged substitute e57 with the same T'' configuration restores the
    // spanning tree
    assert_eq!(tree.errata.len(), 1, "exactly one erratum");
    let err = &tree.errata[0];
    assert_eq!(err.stated, (2, 7));
    assert_eq!(err.expected_config, TradeConfig::F7Tdoubleprime);
    assert_eq!(err.substitute, Some((5, 7)));
    let sub = tree
        .witnesses
        .iter()
        .find(|w| (w.i, w.j) == (5, 7))
        .expect("substitute witness present");
    assert!(sub.substituted);
    assert_eq!(sub.config, TradeConfig::F7Tdoubleprime);

    // each witness carries S_i onto S_j exactly
    for w in &tree.witnesses {
        let moved = tables::table4_row(w.i)
            .apply_trade(w.bitrade.t1(), w.bitrade.t2())
            .unwrap();
        assert_eq!(&moved, tables::table4_row(w.j));
    }
    println!(
        "criterion 4 PASS: 5x T' + 2x T'' spanning tree; erratum (2,7) -> substitute (5,7) flagged ({:?})",
        t.elapsed()
    );
}

#[test]
fn criterion_05_connectivity_fallback() {
    // fallback bound: all 8 classes and at least 1e5 labeled systems
    let t = Instant::now();
    let stats = bfs_connectivity(
        tables::table4_row(1),
        BfsOptions {
            max_states: 150_000,
            expected_total: None,
            stop_on_full_coverage: false,
        },
    );
    assert_eq!(stats.class_coverage.len(), 8, "all 8 classes reached");
    assert!(stats.vertex_count >= 100_000);
    let elapsed = t.elapsed();
    assert!(
        elapsed.as_secs() < 120,
        "fallback bound must finish within 2 minutes, took {elapsed:?}"
    );
    println!(
        "criterion 5 (fallback) PASS: {} states, 8 classes in {elapsed:?}",
        stats.vertex_count
    );
}

#[test]
fn criterion_05_connectivity_full() {
    let t = Instant::now();
    let keys = all_system_keys();
    let closure =
        bfs_closure_keys(tables::table4_row(1), 2_000_000).expect("closure within budget");
    assert_eq!(
        &closure, keys,
        "the move-graph closure of S1 is exactly the set of all labeled systems"
    );
    // component count = 1 against the known total
    let stats = bfs_connectivity(
        tables::table4_row(1),
        BfsOptions {
            max_states: 2_000_000,
            expected_total: Some(keys.len() as u64),
            stop_on_full_coverage: false,
        },
    );
    assert!(stats.complete);
    assert_eq!(stats.component_count, 1);
    assert_eq!(stats.vertex_count, keys.len() as u64);
    println!(
        "criterion 5 (full) PASS: closure = {} states = N9, one component, depth {} ({:?})",
        stats.vertex_count,
        stats.max_bfs_depth,
        t.elapsed()
    );
}

#[test]
fn criterion_06_constructive_engine() {
    let t = Instant::now();

    // the fixed-point claim S8 = S8^(1 3 6 8 2 5 7 9 4), checked directly
    let s8 = tables::table4_row(8);
    assert_eq!(&s8.relabel(&tables::sigma9()), s8, "fixed-point claim");

    // the seed path S1 -> S1^(7 9): length 2, matching the displayed moves
    let seed = seed_path();
    assert_eq!(seed.len(), 2);
    let moves = tables::seed_moves();
    for (step, (removed, added)) in seed.steps().iter().zip(moves.iter()) {
        let mut r = removed.clone();
        let mut a = added.clone();
        r.sort_unstable();
        a.sort_unstable();
        assert_eq!(step.removed, r);
        assert_eq!(step.added, a);
    }
    let swap79 = Permutation::transposition(9, 7, 9).unwrap();
    assert_eq!(seed.end(), &tables::table4_row(1).relabel(&swap79));

    // 100 random (i, j, sigma, gamma): valid, replay-verified paths
    let engine = path_engine().expect("engine builds");
    assert!(engine.sigma_fixed_point);
    let mut rng = ChaCha8Rng::seed_from_u64(20_260_810);
    let mut total_len = 0usize;
    for trial in 0..100 {
        let i = rng.gen_range(1..=8usize);
        let j = rng.gen_range(1..=8usize);
        let sigma = random_permutation(&mut rng);
        let gamma = random_permutation(&mut rng);
        let a = tables::table4_row(i).relabel(&sigma);
        let b = tables::table4_row(j).relabel(&gamma);
        let path = engine
            .constructive_path(&a, &b)
            .unwrap_or_else(|e| panic!("trial {trial}: {e}"));
        assert_eq!(path.start(), &a);
        assert_eq!(path.end(), &b);
        path.validate().unwrap();
        total_len += path.len();
        // full certificate replay every tenth trial
        if trial % 10 == 0 {
            let cert = parse_certificate(&path_certificate(&path, "acceptance")).unwrap();
            let verdict = verify_certificate(&cert).unwrap();
            assert!(verdict.ok, "trial {trial}: {}", verdict.detail);
        }
    }
    let elapsed = t.elapsed();
    assert!(elapsed.as_secs() < 60, "criterion budget is 1 minute");
    println!(
        "criterion 6 PASS: seed length 2, fixed point holds, 100 paths (mean length {}) in {elapsed:?}",
        total_len / 100
    );
}

#[test]
fn criterion_07_counterexample_systems() {
    let t = Instant::now();
    let s25 = develop_cyclic(&CyclicStarter {
        order: 25,
        base_cycles: tables::starter25(),
    })
    .expect("cyclic 4-CS(25)");
    assert_eq!(s25.len(), 75);
    let s49 = develop_cyclic(&CyclicStarter {
        order: 49,
        base_cycles: tables::starter49(),
    })
    .expect("cyclic 4-CS(49)");
    assert_eq!(s49.len(), 294);

    for (name, sys, budget_secs) in [("4-CS(25)", &s25, 60u64), ("4-CS(49)", &s49, 1800)] {
        let t_sys = Instant::now();
        let dd = find_trades(sys, TradeVolume::Two);
        assert!(dd.is_empty(), "{name}: zero volume-2 trades");
        let v3 = find_trades(sys, TradeVolume::Three);
        let mut by_config = std::collections::BTreeMap::new();
        for tr in &v3 {
            *by_config.entry(tr.config()).or_insert(0usize) += 1;
        }
        assert_eq!(
            by_config.get(&TradeConfig::F7Tprime).copied().unwrap_or(0),
            0,
            "{name}: no T' structure"
        );
        assert_eq!(
            by_config
                .get(&TradeConfig::F7Tdoubleprime)
                .copied()
                .unwrap_or(0),
            0,
            "{name}: no T'' structure"
        );
        let elapsed = t_sys.elapsed();
        assert!(elapsed.as_secs() < budget_secs, "{name} scan took {elapsed:?}");
        // T* presence is reported, not asserted either way
        println!(
            "criterion 7 [{name}]: 0 volume-2, volume-3 configs {by_config:?} in {elapsed:?}"
        );
    }
    println!("criterion 7 PASS ({:?})", t.elapsed());
}

#[test]
fn criterion_08_rank_theorem() {
    let t = Instant::now();
    for n in 5..=10u8 {
        let m = algebra::build_matrix(n).unwrap();
        let rank = algebra::exact_rank(&m);
        assert_eq!(rank, pair_count(n), "full rank at n={n}");
        assert_eq!(algebra::nullity(&m), m.cols() - pair_count(n));
    }
    let elapsed = t.elapsed();
    assert!(elapsed.as_secs() < 60);
    println!("criterion 8 PASS: full rank and nullity for n=5..10 ({elapsed:?})");
}

#[test]
fn criterion_09_kernel_membership() {
    let t = Instant::now();
    let mut checked = 0usize;
    // every trade the suite produces: all volume-2/3 trades of the eight
    // rows, the tree witnesses, and the embedded reference trades
    for label in SLabel::all() {
        for tr in find_trades(label.system(), TradeVolume::Both) {
            algebra::trade_vector(&tr, 9).unwrap();
            checked += 1;
        }
    }
    for w in &spanning_tree().witnesses {
        algebra::trade_vector(&w.bitrade, 9).unwrap();
        checked += 1;
    }
    let refs = [
        bitrade_from_parts(&tables::table1()[0], &tables::table1()[1]).unwrap(),
        bitrade_from_parts(&tables::table2()[0], &tables::table2()[1]).unwrap(),
        bitrade_from_parts(&tables::tprime()[0], &tables::tprime()[1]).unwrap(),
        bitrade_from_parts(&tables::tdoubleprime()[0], &tables::tdoubleprime()[1]).unwrap(),
        bitrade_from_parts(&tables::tstar()[0], &tables::tstar()[1]).unwrap(),
        bitrade_from_parts(&tables::table6()[0], &tables::table6()[1]).unwrap(),
    ];
    for tr in &refs {
        for n in [9u8, 10, 12] {
            algebra::trade_vector(tr, n).unwrap();
            checked += 1;
        }
    }
    println!("criterion 9 PASS: {checked} trade vectors lie in ker M ({:?})", t.elapsed());
}

#[test]
fn criterion_10_kernel_span_experiment() {
    let t = Instant::now();
    let mut lines = Vec::new();
    for n in 6..=9u8 {
        let r = algebra::double_diamond_span(n).unwrap();
        assert!(r.generated_rank <= r.nullity, "kernel vectors cannot exceed ker M");
        lines.push(format!(
            "n={} dd_vectors={} generated_rank={} nullity={} spans={}",
            r.n, r.vector_count, r.generated_rank, r.nullity, r.spans
        ));
    }
    let elapsed = t.elapsed();
    assert!(elapsed.as_secs() < 300);
    println!("criterion 10 PASS (verdicts reported, not asserted) in {elapsed:?}:");
    for l in lines {
        println!("  {l}");
    }
}
