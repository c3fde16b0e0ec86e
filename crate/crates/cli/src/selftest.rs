//! Golden self-test: replays the worked examples end to end (the three-vertex
//! arrangement with six regions, the four-vertex graph with six duplicate
//! labels) and the invariant suite at desk scale. Exits nonzero on any
//! mismatch.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::Serialize;

use arrlab::central::{
    central_arrangement, common_point, construction_edges_complete, duplicate_witness,
    find_condition_triples, is_injective, label_multiset, out_neighborhoods_pairwise_adjacent,
};
use arrlab::geometry::{rat, ratio, Constraint, LinearSystem, Relation};
use arrlab::parking::{g_parking_set, is_g_parking};
use arrlab::{Arrangement, Dag, Edge, Hyperplane, Label, Reorientation, Side};

#[derive(Debug, Serialize)]
pub struct CaseResult {
    pub id: &'static str,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct SelftestReport {
    pub passed: usize,
    pub failed: usize,
    pub cases: Vec<CaseResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for case in &self.cases {
            match (&case.ok, &case.detail) {
                (true, _) => {
                    let _ = writeln!(out, "ok   {}", case.id);
                }
                (false, Some(detail)) => {
                    let _ = writeln!(out, "FAIL {}: {detail}", case.id);
                }
                (false, None) => {
                    let _ = writeln!(out, "FAIL {}", case.id);
                }
            }
        }
        let _ = writeln!(out, "selftest: {} passed, {} failed", self.passed, self.failed);
        out
    }
}

type Check = fn() -> Result<(), String>;

pub fn run_selftest() -> SelftestReport {
    run_cases(golden_cases())
}

pub(crate) fn run_cases(cases: Vec<(&'static str, Check)>) -> SelftestReport {
    let mut results = Vec::new();
    let mut passed = 0;
    let mut failed = 0;
    for (id, check) in cases {
        match check() {
            Ok(()) => {
                passed += 1;
                results.push(CaseResult {
                    id,
                    ok: true,
                    detail: None,
                });
            }
            Err(detail) => {
                failed += 1;
                results.push(CaseResult {
                    id,
                    ok: false,
                    detail: Some(detail),
                });
            }
        }
    }
    SelftestReport {
        passed,
        failed,
        cases: results,
    }
}

fn ensure(cond: bool, detail: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail.to_string())
    }
}

fn ensure_eq<T: PartialEq + std::fmt::Debug>(got: T, want: T, what: &str) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

fn fig1_graph() -> Dag {
    Dag::new(3, [(1, 2), (1, 3), (2, 3)]).unwrap()
}

fn example_graph() -> Dag {
    Dag::new(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)]).unwrap()
}

fn labels(raw: &[&[usize]]) -> BTreeSet<Label> {
    raw.iter().map(|v| Label::new(v.to_vec())).collect()
}

fn golden_cases() -> Vec<(&'static str, Check)> {
    vec![
        ("fig1-acyclic", || {
            ensure(fig1_graph().to_multidigraph().is_acyclic(), "graph must be acyclic")
        }),
        ("fig1-reorientations", || {
            let rs = fig1_graph().acyclic_reorientations();
            ensure_eq(rs.len(), 6, "reorientation count")?;
            ensure(rs[0].switched().is_empty(), "original orientation comes first")
        }),
        ("fig1-label-multiset", || {
            let ms = label_multiset(&fig1_graph());
            ensure_eq(ms.len(), 6, "multiset size")?;
            ensure(!ms.has_duplicates(), "no duplicates")?;
            ensure_eq(
                ms.distinct(),
                labels(&[
                    &[0, 0, 0],
                    &[1, 0, 0],
                    &[2, 0, 0],
                    &[2, 1, 0],
                    &[1, 1, 0],
                    &[0, 1, 0],
                ]),
                "label set",
            )
        }),
        ("fig1-parking-set", || {
            let set: BTreeSet<Label> = g_parking_set(&fig1_graph().to_multidigraph())
                .into_iter()
                .collect();
            ensure_eq(set, label_multiset(&fig1_graph()).distinct(), "set equality")
        }),
        ("fig1-reorientation-labels", || {
            let g = fig1_graph();
            let single = Reorientation::new(g.clone(), [(1, 2)]).map_err(|e| e.to_string())?;
            ensure_eq(single.label(), Label::new(vec![1, 0, 0]), "switch {1->2}")?;
            let all =
                Reorientation::new(g.clone(), [(1, 2), (1, 3), (2, 3)]).map_err(|e| e.to_string())?;
            ensure_eq(all.label(), Label::new(vec![2, 1, 0]), "switch all")?;
            let none = Reorientation::new(g, []).map_err(|e| e.to_string())?;
            ensure_eq(none.label(), Label::zeros(3), "empty switch")
        }),
        ("fig1-injective", || {
            ensure(is_injective(&fig1_graph()), "labeling is injective")?;
            ensure(
                find_condition_triples(&fig1_graph())
                    .map_err(|e| e.to_string())?
                    .is_empty(),
                "no condition triple",
            )
        }),
        ("fig1-central-arrangement", || {
            let arr = central_arrangement(&fig1_graph()).map_err(|e| e.to_string())?;
            ensure_eq(arr.hyperplane_count(), 3, "hyperplane count")?;
            ensure_eq(
                arr.common_point_witness(),
                Some(vec![rat(1), rat(0), rat(-1)]),
                "common point",
            )?;
            ensure_eq(
                Dag::try_from(arr.graph()).map_err(|e| e.to_string())?,
                fig1_graph(),
                "derived graph round-trip",
            )
        }),
        ("fig1-regions", || {
            let arr = central_arrangement(&fig1_graph()).map_err(|e| e.to_string())?;
            let regions = arr.regions();
            ensure_eq(regions.len(), 6, "region count")?;
            let all_near = regions
                .iter()
                .find(|r| r.is_all_near())
                .ok_or("missing all-near region")?;
            ensure_eq(arr.region_label(all_near), Label::zeros(3), "fundamental label")?;
            let reor = arr.reorientation_of_region(all_near).map_err(|e| e.to_string())?;
            ensure(reor.switched().is_empty(), "fundamental region is unswitched")?;
            let far_first = regions
                .iter()
                .find(|r| r.signs() == [Side::Far, Side::Near, Side::Near])
                .ok_or("missing region beyond the first hyperplane")?;
            ensure_eq(arr.region_label(far_first), Label::new(vec![1, 0, 0]), "label")?;
            let reor = arr.reorientation_of_region(far_first).map_err(|e| e.to_string())?;
            ensure_eq(
                reor.switched().iter().copied().collect::<Vec<_>>(),
                vec![(1, 2)],
                "switched set",
            )
        }),
        ("common-point-values", || {
            ensure_eq(common_point(3), vec![rat(1), rat(0), rat(-1)], "n = 3")?;
            ensure_eq(
                common_point(4),
                vec![ratio(3, 2), ratio(1, 2), ratio(-1, 2), ratio(-3, 2)],
                "n = 4",
            )?;
            ensure_eq(common_point(1), vec![rat(0)], "n = 1")
        }),
        ("example4-triples", || {
            let triples = find_condition_triples(&example_graph()).map_err(|e| e.to_string())?;
            let tuples: Vec<(usize, usize, usize)> =
                triples.iter().map(|t| (t.k, t.i, t.j)).collect();
            ensure_eq(tuples, vec![(1, 3, 4), (2, 3, 4)], "triples")?;
            ensure(!is_injective(&example_graph()), "labeling duplicates")
        }),
        ("example4-witnesses", || {
            let g = example_graph();
            let triples = find_condition_triples(&g).map_err(|e| e.to_string())?;
            let w1 = duplicate_witness(&g, &triples[0]).map_err(|e| e.to_string())?;
            ensure(w1.constructed, "first witness constructed")?;
            ensure_eq(w1.tau, Label::new(vec![2, 0, 0, 0]), "tau of (1,3,4)")?;
            ensure_eq(
                w1.first.switched().iter().copied().collect::<Vec<Edge>>(),
                vec![(1, 2), (1, 3)],
                "first switch set",
            )?;
            ensure_eq(
                w1.second.switched().iter().copied().collect::<Vec<Edge>>(),
                vec![(1, 2), (1, 4)],
                "second switch set",
            )?;
            let w2 = duplicate_witness(&g, &triples[1]).map_err(|e| e.to_string())?;
            ensure(w2.constructed, "second witness constructed")?;
            ensure_eq(w2.tau, Label::new(vec![0, 1, 0, 0]), "tau of (2,3,4)")
        }),
        ("example4-duplicates", || {
            let ms = label_multiset(&example_graph());
            ensure_eq(ms.len(), 18, "multiset size")?;
            ensure_eq(
                ms.duplicated().into_iter().collect::<BTreeSet<_>>(),
                labels(&[
                    &[2, 0, 0, 0],
                    &[0, 1, 0, 0],
                    &[1, 1, 0, 0],
                    &[2, 1, 0, 0],
                    &[1, 2, 0, 0],
                    &[3, 1, 0, 0],
                ]),
                "duplicated labels",
            )
        }),
        ("example4-regions", || {
            let arr = central_arrangement(&example_graph()).map_err(|e| e.to_string())?;
            ensure_eq(arr.regions().len(), 18, "region count")
        }),
        ("example4-parking-set", || {
            let set = g_parking_set(&example_graph().to_multidigraph());
            ensure_eq(set.len(), 12, "parking set size")?;
            let attained = label_multiset(&example_graph()).distinct();
            ensure_eq(
                set.into_iter().collect::<BTreeSet<_>>(),
                attained,
                "surjectivity onto parking set",
            )
        }),
        ("example4-local-scan", || {
            let arr = central_arrangement(&example_graph()).map_err(|e| e.to_string())?;
            let scan = arr.local_injectivity_scan();
            ensure(scan.anomalies.is_empty(), "no anomalies")?;
            let common = scan
                .non_injective
                .iter()
                .find(|f| f.flat.dim == 0)
                .ok_or("common-point flat not flagged")?;
            ensure_eq(
                common.flat.hyperplanes.clone(),
                vec![0, 1, 2, 3, 4],
                "common-point subarrangement",
            )
        }),
        ("parking-predicate", || {
            let g = fig1_graph().to_multidigraph();
            ensure(
                is_g_parking(&g, &Label::new(vec![2, 1, 0])).map_err(|e| e.to_string())?,
                "<2,1,0> parks",
            )?;
            ensure(
                !is_g_parking(&g, &Label::new(vec![0, 0, 1])).map_err(|e| e.to_string())?,
                "<0,0,1> does not park",
            )?;
            ensure(
                is_g_parking(&g, &Label::zeros(3)).map_err(|e| e.to_string())?,
                "zero label parks",
            )
        }),
        ("derived-multigraph-multiplicities", || {
            let arr = Arrangement::new(
                2,
                vec![
                    Hyperplane::new(1, 2, rat(1)).map_err(|e| e.to_string())?,
                    Hyperplane::new(1, 2, rat(2)).map_err(|e| e.to_string())?,
                    Hyperplane::new(2, 1, rat(1)).map_err(|e| e.to_string())?,
                ],
            )
            .map_err(|e| e.to_string())?;
            let g = arr.graph();
            ensure_eq(g.multiplicity(1, 2), 2, "m_12")?;
            ensure_eq(g.multiplicity(2, 1), 1, "m_21")
        }),
        ("kernel-forced-point", || {
            let system = LinearSystem::with_constraints(
                3,
                vec![
                    Constraint::from_ints(&[1, 1, 1], Relation::Eq, 0),
                    Constraint::from_ints(&[1, -1, 0], Relation::Eq, 1),
                    Constraint::from_ints(&[1, 0, -1], Relation::Eq, 2),
                    Constraint::from_ints(&[0, 1, -1], Relation::Eq, 1),
                ],
            );
            ensure_eq(
                system.feasible_point(),
                Some(vec![rat(1), rat(0), rat(-1)]),
                "unique solution",
            )
        }),
        ("closures-at-common-point", || {
            let arr = central_arrangement(&fig1_graph()).map_err(|e| e.to_string())?;
            let regions = arr.regions();
            let zero = regions.iter().find(|r| r.is_all_near()).ok_or("no all-near")?;
            let full = regions
                .iter()
                .find(|r| r.signs().iter().all(|&s| s == Side::Far))
                .ok_or("no all-far")?;
            ensure(
                arr.closures_intersect(zero, full).map_err(|e| e.to_string())?,
                "closures meet at the common point",
            )
        }),
        ("closures-of-parallel-pair", || {
            let arr = Arrangement::new(
                2,
                vec![
                    Hyperplane::new(1, 2, rat(1)).map_err(|e| e.to_string())?,
                    Hyperplane::new(1, 2, rat(2)).map_err(|e| e.to_string())?,
                ],
            )
            .map_err(|e| e.to_string())?;
            let regions = arr.regions();
            let near = regions
                .iter()
                .find(|r| r.signs() == [Side::Near, Side::Near])
                .ok_or("missing near-near region")?;
            let far = regions
                .iter()
                .find(|r| r.signs() == [Side::Far, Side::Far])
                .ok_or("missing far-far region")?;
            ensure(
                !arr.closures_intersect(near, far).map_err(|e| e.to_string())?,
                "strip closures are disjoint",
            )
        }),
        ("invariants-desk-scale", || {
            // Every increasing digraph on up to 4 vertices: criterion
            // equivalence, geometric cross-oracle, and parking surjectivity.
            for n in 1..=4usize {
                let pairs: Vec<Edge> = (1..=n)
                    .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
                    .collect();
                for mask in 0u32..(1 << pairs.len()) {
                    let edges = pairs
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| mask & (1 << k) != 0)
                        .map(|(_, &e)| e);
                    let g = Dag::new(n, edges).map_err(|e| e.to_string())?;
                    let ms = label_multiset(&g);
                    ensure_eq(
                        is_injective(&g),
                        !ms.has_duplicates(),
                        &format!("equivalence on {g:?}"),
                    )?;
                    ensure_eq(
                        is_injective(&g),
                        out_neighborhoods_pairwise_adjacent(&g),
                        &format!("neighborhood criterion on {g:?}"),
                    )?;
                    let arr = central_arrangement(&g).map_err(|e| e.to_string())?;
                    let regions = arr.regions();
                    ensure_eq(regions.len(), ms.len(), &format!("region count on {g:?}"))?;
                    let mut geometric: Vec<Label> =
                        regions.iter().map(|r| arr.region_label(r)).collect();
                    let mut combinatorial = ms.labels().to_vec();
                    geometric.sort();
                    combinatorial.sort();
                    ensure_eq(geometric, combinatorial, &format!("label multiset on {g:?}"))?;
                    let parking: BTreeSet<Label> = g_parking_set(&g.to_multidigraph())
                        .into_iter()
                        .collect();
                    ensure_eq(ms.distinct(), parking, &format!("surjectivity on {g:?}"))?;
                }
            }
            Ok(())
        }),
        ("invariants-witnesses", || {
            for n in 1..=4usize {
                let pairs: Vec<Edge> = (1..=n)
                    .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
                    .collect();
                for mask in 0u32..(1 << pairs.len()) {
                    let edges = pairs
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| mask & (1 << k) != 0)
                        .map(|(_, &e)| e);
                    let g = Dag::new(n, edges).map_err(|e| e.to_string())?;
                    for t in find_condition_triples(&g).map_err(|e| e.to_string())? {
                        let w = duplicate_witness(&g, &t).map_err(|e| e.to_string())?;
                        ensure(w.first != w.second, "witness pair differs")?;
                        ensure_eq(w.first.label(), w.second.label(), "witness labels agree")?;
                        if construction_edges_complete(&g, &t) {
                            ensure(w.constructed, "no fallback on complete constructions")?;
                            ensure_eq(
                                w.tau.clone(),
                                t.predicted_label(g.n()),
                                "predicted label on complete constructions",
                            )?;
                        }
                    }
                }
            }
            Ok(())
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_suite_is_green() {
        let report = run_selftest();
        assert!(report.passed(), "failures:\n{}", report.render());
        assert!(report.passed >= 20);
    }

    #[test]
    fn failures_are_reported_with_ids() {
        let report = run_cases(vec![
            ("always-green", || Ok(())),
            ("always-red", || Err("expected 6 regions, got 5".into())),
        ]);
        assert!(!report.passed());
        assert_eq!(report.failed, 1);
        let rendered = report.render();
        assert!(rendered.contains("FAIL always-red: expected 6 regions, got 5"));
        assert!(rendered.contains("ok   always-green"));
    }
}
