//! Acceptance suite: one test per criterion, each pinning its tolerances and
//! printing a PASS line (visible with `--nocapture`).
//!
//! Criteria 1-6 and 8 are hard: any discrepancy fails the test. Criterion 7
//! gathers evidence for the two open conjectures; a counterexample there is
//! written to a case file and reported, but does not fail the suite.

use std::cell::Cell;
use std::collections::BTreeSet;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use arrlab::central::{
    central_arrangement, construction_edges_complete, duplicate_witness, find_condition_triples,
    is_injective, label_multiset, out_neighborhoods_pairwise_adjacent,
};
use arrlab::geometry::{rat, Rat};
use arrlab::random::{random_arrangement, random_increasing_dag, random_system};
use arrlab::{Arrangement, Dag, Edge, Label, Reorientation};

/// All simple acyclic digraphs on `n` vertices up to increasing
/// normalization, i.e. every subset of the increasing pairs.
fn for_each_increasing_dag(n: usize, mut f: impl FnMut(&Dag)) {
    let pairs: Vec<Edge> = (1..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .collect();
    for mask in 0u64..(1 << pairs.len()) {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, &e)| e);
        let g = Dag::new(n, edges).expect("increasing edges are simple and acyclic");
        f(&g);
    }
}

fn labels(raw: &[&[usize]]) -> BTreeSet<Label> {
    raw.iter().map(|v| Label::new(v.to_vec())).collect()
}

fn sorted_labels(multiset: &[Label]) -> Vec<Label> {
    let mut sorted = multiset.to_vec();
    sorted.sort();
    sorted
}

#[test]
fn criterion_1_figure_one_reproduction() {
    let started = Instant::now();
    let g = Dag::new(3, [(1, 2), (1, 3), (2, 3)]).unwrap();
    let arr = central_arrangement(&g).unwrap();
    let regions = arr.regions();
    assert_eq!(regions.len(), 6, "criterion 1: region count");

    let region_labels: Vec<Label> = regions.iter().map(|r| arr.region_label(r)).collect();
    let distinct: BTreeSet<Label> = region_labels.iter().cloned().collect();
    assert_eq!(
        distinct.len(),
        region_labels.len(),
        "criterion 1: labels must be duplicate-free"
    );
    let expected = labels(&[
        &[0, 0, 0],
        &[1, 0, 0],
        &[2, 0, 0],
        &[2, 1, 0],
        &[1, 1, 0],
        &[0, 1, 0],
    ]);
    assert_eq!(distinct, expected, "criterion 1: exact label set");

    let all_near: Vec<_> = regions.iter().filter(|r| r.is_all_near()).collect();
    assert_eq!(all_near.len(), 1, "criterion 1: unique all-near region");
    assert_eq!(
        arr.region_label(all_near[0]),
        Label::zeros(3),
        "criterion 1: fundamental region label"
    );
    let reor = arr.reorientation_of_region(all_near[0]).unwrap();
    assert!(
        reor.switched().is_empty(),
        "criterion 1: fundamental region carries the original orientation"
    );

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "criterion 1: runtime budget 1 s");
    println!(
        "ACCEPTANCE criterion 1: PASS — figure-one arrangement reproduced exactly ({:.3} s)",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_2_example_reproduction() {
    let started = Instant::now();
    let g = Dag::new(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)]).unwrap();
    assert!(!is_injective(&g), "criterion 2: labeling must duplicate");

    let triples = find_condition_triples(&g).unwrap();
    let as_tuples: Vec<(usize, usize, usize)> =
        triples.iter().map(|t| (t.k, t.i, t.j)).collect();
    assert!(
        as_tuples.contains(&(1, 3, 4)) && as_tuples.contains(&(2, 3, 4)),
        "criterion 2: triples include (1,3,4) and (2,3,4), got {as_tuples:?}"
    );

    let w1 = duplicate_witness(&g, &triples[0]).unwrap();
    assert_eq!(
        (triples[0].k, triples[0].i, triples[0].j),
        (1, 3, 4),
        "criterion 2: first triple in lexicographic order"
    );
    assert_eq!(
        w1.tau,
        Label::new(vec![2, 0, 0, 0]),
        "criterion 2: tau of (1,3,4)"
    );
    let w2 = duplicate_witness(&g, &triples[1]).unwrap();
    assert_eq!(
        w2.tau,
        Label::new(vec![0, 1, 0, 0]),
        "criterion 2: tau of (2,3,4)"
    );

    let duplicated: BTreeSet<Label> = label_multiset(&g).duplicated().into_iter().collect();
    let expected = labels(&[
        &[2, 0, 0, 0],
        &[0, 1, 0, 0],
        &[1, 1, 0, 0],
        &[2, 1, 0, 0],
        &[1, 2, 0, 0],
        &[3, 1, 0, 0],
    ]);
    assert_eq!(duplicated, expected, "criterion 2: exact duplicated set");

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "criterion 2: runtime budget 1 s");
    println!(
        "ACCEPTANCE criterion 2: PASS — four-vertex example reproduced exactly ({:.3} s)",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_3_theorem_main_equivalence_sweep() {
    let started = Instant::now();
    let checked = Cell::new(0usize);
    let check = |g: &Dag| {
        let by_criterion = is_injective(g);
        let by_multiset = !label_multiset(g).has_duplicates();
        assert_eq!(
            by_criterion, by_multiset,
            "criterion 3: equivalence failed on {g:?}"
        );
        // Order-free cross-check of the same criterion.
        assert_eq!(
            by_criterion,
            out_neighborhoods_pairwise_adjacent(g),
            "criterion 3: neighborhood formulation disagrees on {g:?}"
        );
        checked.set(checked.get() + 1);
    };
    for n in 1..=5 {
        for_each_increasing_dag(n, check);
    }
    let exhaustive = checked.get();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE3);
    for n in [6usize, 7] {
        for _ in 0..300 {
            check(&random_increasing_dag(n, &mut rng));
        }
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "criterion 3: runtime budget 2 min"
    );
    println!(
        "ACCEPTANCE criterion 3: PASS — equivalence on {exhaustive} exhaustive (n <= 5) and {} random (n = 6, 7) digraphs, zero discrepancies ({:.3} s)",
        checked.get() - exhaustive,
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_4_geometry_combinatorics_cross_oracle() {
    let started = Instant::now();
    let checked = Cell::new(0usize);
    let check = |g: &Dag| {
        let arr = central_arrangement(g).expect("graphs are normalized");
        let regions = arr.regions();
        let reorientations = g.acyclic_reorientations();
        assert_eq!(
            regions.len(),
            reorientations.len(),
            "criterion 4: cardinality mismatch on {g:?}"
        );
        let geometric: Vec<Label> = regions.iter().map(|r| arr.region_label(r)).collect();
        let combinatorial: Vec<Label> =
            reorientations.iter().map(Reorientation::label).collect();
        assert_eq!(
            sorted_labels(&geometric),
            sorted_labels(&combinatorial),
            "criterion 4: label multiset mismatch on {g:?}"
        );
        // The region -> reorientation map is a bijection commuting with the
        // two label maps.
        let mut switched_sets = BTreeSet::new();
        for (region, label) in regions.iter().zip(&geometric) {
            let reor = arr.reorientation_of_region(region).unwrap();
            assert_eq!(&reor.label(), label, "criterion 4: labels must commute");
            assert!(
                switched_sets.insert(reor.switched().clone()),
                "criterion 4: region map must be injective"
            );
        }
        let expected: BTreeSet<_> = reorientations
            .iter()
            .map(|r| r.switched().clone())
            .collect();
        assert_eq!(switched_sets, expected, "criterion 4: region map onto");
        checked.set(checked.get() + 1);
    };
    for n in 1..=4 {
        for_each_increasing_dag(n, check);
    }
    let exhaustive = checked.get();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE4);
    for _ in 0..100 {
        check(&random_increasing_dag(5, &mut rng));
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 120.0,
        "criterion 4: runtime budget 2 min"
    );
    println!(
        "ACCEPTANCE criterion 4: PASS — cross-oracle on {exhaustive} exhaustive (n <= 4) and {} random (n = 5) digraphs, zero discrepancies ({:.3} s)",
        checked.get() - exhaustive,
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_5_cited_theorem_verification() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE5);
    let mut checked = 0usize;
    for _ in 0..200 {
        let n = 2 + (checked % 3); // n in 2..=4
        let count = 1 + (checked % 6); // 1..=6 hyperplanes
        let arr = random_arrangement(n, count, &mut rng);
        let verdict = arr.verify_parking_theorems();
        assert!(
            verdict.passed(),
            "criterion 5: parking theorems failed on {arr:?}: non-parking {:?}, unattained {:?}",
            verdict.non_parking,
            verdict.unattained
        );
        checked += 1;
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 300.0,
        "criterion 5: runtime budget 5 min"
    );
    println!(
        "ACCEPTANCE criterion 5: PASS — parking and surjectivity theorems on {checked} random arrangements, zero failures ({:.3} s)",
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_6_witness_validity() {
    let started = Instant::now();
    let triples_checked = Cell::new(0usize);
    let fallbacks = Cell::new(0usize);
    let complete_constructions = Cell::new(0usize);
    let check = |g: &Dag| {
        for t in find_condition_triples(g).expect("graphs are normalized") {
            let w = duplicate_witness(g, &t).expect("a condition triple has a witness");
            assert_ne!(w.first, w.second, "criterion 6: witness pair must differ");
            assert_eq!(
                w.first.label(),
                w.second.label(),
                "criterion 6: witness labels must agree"
            );
            assert_eq!(w.tau, w.first.label(), "criterion 6: tau is the label");
            if construction_edges_complete(g, &t) {
                complete_constructions.set(complete_constructions.get() + 1);
                assert!(
                    w.constructed,
                    "criterion 6: fallback fired on a complete construction ({g:?}, {t})"
                );
                assert_eq!(
                    w.tau,
                    t.predicted_label(g.n()),
                    "criterion 6: complete construction must match the predicted label"
                );
            }
            if !w.constructed {
                fallbacks.set(fallbacks.get() + 1);
                println!("criterion 6: fallback used on {g:?} for {t}");
            }
            triples_checked.set(triples_checked.get() + 1);
        }
    };
    // The example graph of criterion 2.
    check(&Dag::new(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)]).unwrap());
    assert_eq!(
        fallbacks.get(),
        0,
        "criterion 6: no fallback on the example graph"
    );
    // The sweep of criterion 3.
    for n in 1..=5 {
        for_each_increasing_dag(n, check);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE3);
    for n in [6usize, 7] {
        for _ in 0..300 {
            check(&random_increasing_dag(n, &mut rng));
        }
    }
    let elapsed = started.elapsed();
    println!(
        "ACCEPTANCE criterion 6: PASS — {} witnesses validated ({} complete constructions), {} fallback invocations ({:.3} s)",
        triples_checked.get(),
        complete_constructions.get(),
        fallbacks.get(),
        elapsed.as_secs_f64()
    );
}

/// Conjecture evidence: never fails on a counterexample, only on internal
/// inconsistencies. Counterexamples are dumped as standalone case files.
#[test]
fn criterion_7_conjecture_harness_evidence() {
    let started = Instant::now();
    let dump_dir = std::path::Path::new(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(dump_dir).expect("tmp dir exists");
    let mut checked = 0usize;
    let mut with_duplicates = 0usize;
    let mut counterexamples: Vec<String> = Vec::new();

    let mut harness = |arr: &Arrangement, origin: &str| {
        let report = arr.duplicate_closure_report();
        let scan = arr.local_injectivity_scan();
        assert!(
            scan.anomalies.is_empty(),
            "criterion 7: scan anomalies on {origin}: {:?}",
            scan.anomalies
        );
        let mut reasons: Vec<String> = Vec::new();
        if !report.all_connected() {
            reasons.push("a duplicated-label class is disconnected".into());
        }
        if report.has_duplicates() {
            with_duplicates += 1;
            if scan.non_injective.is_empty() {
                reasons.push("global duplicates but no non-injective flat".into());
            }
            if !report.boundary_pair_exists() {
                reasons.push("global duplicates but no touching equal-labeled pair".into());
            }
        }
        if !reasons.is_empty() {
            let path = dump_dir.join(format!(
                "conjecture_counterexample_{}.json",
                counterexamples.len()
            ));
            std::fs::write(&path, serde_json::to_string_pretty(arr).unwrap())
                .expect("counterexample case file written");
            println!(
                "criterion 7: counterexample found ({origin}: {}) -> {}",
                reasons.join("; "),
                path.display()
            );
            counterexamples.push(path.display().to_string());
        }
        checked += 1;
    };

    // The sweep of criterion 5.
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE5);
    for k in 0..200 {
        let n = 2 + (k % 3);
        let count = 1 + (k % 6);
        let arr = random_arrangement(n, count, &mut rng);
        harness(&arr, &format!("random arrangement #{k}"));
    }
    // The central arrangements of criterion 3's exhaustive family. The
    // random n = 6, 7 digraphs exceed the documented hyperplane guard for
    // the exponential geometry paths and stay combinatorial-only.
    for n in 1..=5 {
        for_each_increasing_dag(n, |g| {
            let arr = central_arrangement(g).expect("normalized");
            harness(&arr, &format!("central arrangement of {g:?}"));
        });
    }

    let elapsed = started.elapsed();
    if counterexamples.is_empty() {
        println!(
            "ACCEPTANCE criterion 7: PASS — {checked} arrangements ({with_duplicates} with duplicate labels): every duplicated class connected, every duplicate-bearing arrangement locally non-injective ({:.3} s)",
            elapsed.as_secs_f64()
        );
    } else {
        println!(
            "ACCEPTANCE criterion 7: PASS — counterexample found: {} case file(s) written ({:.3} s)",
            counterexamples.len(),
            elapsed.as_secs_f64()
        );
    }
}

#[test]
fn criterion_8_feasibility_kernel_property_suite() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE8);
    let mut feasible = 0usize;
    let mut infeasible = 0usize;
    for round in 0..1000 {
        let vars = 1 + (round % 4);
        let system = random_system(vars, 8, &mut rng);
        match system.feasible_point() {
            Some(witness) => {
                assert!(
                    system.is_satisfied_by(&witness),
                    "criterion 8: witness violates its system {system:?}"
                );
                feasible += 1;
            }
            None => {
                // Sampling oracle: direct substitution on a dense rational
                // grid. Any satisfying grid point would contradict the
                // kernel, so none may exist. Half steps keep the grid dense
                // for low dimensions.
                let steps: Vec<Rat> = if vars <= 2 {
                    (-6..=6).map(|v| Rat::new(v.into(), 2.into())).collect()
                } else {
                    (-3..=3).map(rat).collect()
                };
                let mut index = vec![0usize; vars];
                'grid: loop {
                    let point: Vec<Rat> =
                        index.iter().map(|&s| steps[s].clone()).collect();
                    assert!(
                        !system.is_satisfied_by(&point),
                        "criterion 8: kernel called {system:?} infeasible but {point:?} satisfies it"
                    );
                    let mut k = 0;
                    loop {
                        if k == vars {
                            break 'grid;
                        }
                        index[k] += 1;
                        if index[k] < steps.len() {
                            break;
                        }
                        index[k] = 0;
                        k += 1;
                    }
                }
                infeasible += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    println!(
        "ACCEPTANCE criterion 8: PASS — 1000 random systems ({feasible} feasible with exact witnesses, {infeasible} infeasible confirmed against the sampling oracle) ({:.3} s)",
        elapsed.as_secs_f64()
    );
}
