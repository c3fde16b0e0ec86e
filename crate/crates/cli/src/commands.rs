//! One function per subcommand; each returns a human rendering plus a JSON
//! value so `main` can pick the output format.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand_chacha::rand_core::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};

use arrlab::central::{
    central_arrangement, duplicate_witness, find_condition_triples, label_multiset,
    ConditionTriple,
};
use arrlab::geometry::{DuplicateClosureReport, LocalInjectivityReport};
use arrlab::parking::g_parking_set;
use arrlab::random::random_arrangement;
use arrlab::{Arrangement, Dag, Edge, Label, Permutation, Region};

use crate::case::{CaseFile, CasePayload};
use crate::{CliError, CommandOutput};

pub const DEFAULT_MAX_HYPERPLANES: usize = 12;

/// The `ARRLAB_MAX_HYPERPLANES` guard for the exponential geometry paths.
fn max_hyperplanes() -> Result<usize, CliError> {
    match std::env::var("ARRLAB_MAX_HYPERPLANES") {
        Err(_) => Ok(DEFAULT_MAX_HYPERPLANES),
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::Input(format!(
                "ARRLAB_MAX_HYPERPLANES must be an integer, got {text:?}"
            ))
        }),
    }
}

fn guard_hyperplanes(count: usize) -> Result<(), CliError> {
    let limit = max_hyperplanes()?;
    if count > limit {
        return Err(CliError::Input(format!(
            "{count} hyperplanes exceed the guard for exponential geometry paths \
             (ARRLAB_MAX_HYPERPLANES = {limit})"
        )));
    }
    Ok(())
}

fn case_dag(case: &CaseFile) -> Result<Dag, CliError> {
    Ok(Dag::try_from(case.digraph()?.clone())?)
}

/// An arrangement for geometry commands: arrangement cases directly, digraph
/// cases through the central arrangement of their increasing normalization.
/// Returns the normalizing permutation when it is not the identity.
fn case_arrangement(case: &CaseFile) -> Result<(Arrangement, Option<Permutation>), CliError> {
    match &case.payload {
        CasePayload::Arrangement(a) => Ok((a.clone(), None)),
        CasePayload::Digraph(_) => {
            let dag = case_dag(case)?;
            let (normalized, perm) = dag.normalize_increasing();
            let arr = central_arrangement(&normalized)?;
            let perm = (!perm.is_identity()).then_some(perm);
            Ok((arr, perm))
        }
    }
}

fn permutation_note(perm: &Option<Permutation>) -> String {
    match perm {
        None => String::new(),
        Some(p) => format!("vertices relabeled along a topological order: {p}\n"),
    }
}

pub fn injective(case: &CaseFile) -> Result<CommandOutput, CliError> {
    let dag = case_dag(case)?;
    let (normalized, perm) = dag.normalize_increasing();
    let triples = find_condition_triples(&normalized).expect("normalized graph");
    let inv = perm.inverse();
    let mapped: Vec<(usize, usize, usize)> = triples
        .iter()
        .map(|t| (inv.image(t.k), inv.image(t.i), inv.image(t.j)))
        .collect();
    let injective = triples.is_empty();

    let mut human = format!(
        "graph: {} vertices, {} edges\ninjective: {}\n",
        dag.n(),
        dag.edge_count(),
        if injective { "yes" } else { "no" }
    );
    if !injective {
        let rendered: Vec<String> = mapped
            .iter()
            .map(|(k, i, j)| format!("({k}, {i}, {j})"))
            .collect();
        let _ = writeln!(human, "condition triples: {}", rendered.join(", "));
    }
    let json = json!({
        "n": dag.n(),
        "injective": injective,
        "triples": mapped.iter().map(|&(k, i, j)| vec![k, i, j]).collect::<Vec<_>>(),
    });
    Ok(CommandOutput::ok(human, json))
}

pub fn labels(case: &CaseFile) -> Result<CommandOutput, CliError> {
    let dag = case_dag(case)?;
    let multiset = label_multiset(&dag);
    let counts = multiset.counts();
    let duplicated = multiset.duplicated();

    let mut human = format!(
        "{} acyclic reorientations, {} distinct labels\n",
        multiset.len(),
        counts.len()
    );
    for (label, count) in &counts {
        if *count > 1 {
            let _ = writeln!(human, "{label} x{count} (duplicate)");
        } else {
            let _ = writeln!(human, "{label}");
        }
    }
    if duplicated.is_empty() {
        human.push_str("labeling is injective\n");
    } else {
        let _ = writeln!(human, "{} duplicated labels", duplicated.len());
    }

    let json = json!({
        "count": multiset.len(),
        "labels": counts
            .iter()
            .map(|(label, count)| json!({"label": label, "count": count}))
            .collect::<Vec<_>>(),
        "duplicated": duplicated,
    });
    Ok(CommandOutput::ok(human, json))
}

#[derive(Serialize)]
struct WitnessJson {
    triple: (usize, usize, usize),
    first_switched: Vec<Edge>,
    second_switched: Vec<Edge>,
    tau: Vec<usize>,
    constructed: bool,
}

pub fn witness(case: &CaseFile, triple: Option<(usize, usize, usize)>) -> Result<CommandOutput, CliError> {
    let dag = case_dag(case)?;
    let (normalized, perm) = dag.normalize_increasing();
    let inv = perm.inverse();

    let chosen = match triple {
        Some((k, i, j)) => {
            for v in [k, i, j] {
                if v < 1 || v > dag.n() {
                    return Err(CliError::Input(format!(
                        "triple vertex {v} out of range 1..={}",
                        dag.n()
                    )));
                }
            }
            ConditionTriple::new(perm.image(k), perm.image(i), perm.image(j))
        }
        None => *find_condition_triples(&normalized)
            .expect("normalized graph")
            .first()
            .ok_or_else(|| {
                CliError::Input("graph has no condition triple: the labeling is injective".into())
            })?,
    };
    let w = duplicate_witness(&normalized, &chosen)?;

    let map_edges = |reor: &arrlab::Reorientation| -> Vec<Edge> {
        let mut edges: Vec<Edge> = reor
            .switched()
            .iter()
            .map(|&(a, b)| (inv.image(a), inv.image(b)))
            .collect();
        edges.sort_unstable();
        edges
    };
    let first_switched = map_edges(&w.first);
    let second_switched = map_edges(&w.second);
    let tau: Vec<usize> = (1..=dag.n()).map(|v| w.tau.get(perm.image(v))).collect();
    let original_triple = (
        inv.image(w.triple.k),
        inv.image(w.triple.i),
        inv.image(w.triple.j),
    );

    let mut human = permutation_note(&(!perm.is_identity()).then(|| perm.clone()));
    let _ = writeln!(
        human,
        "condition triple: ({}, {}, {})",
        original_triple.0, original_triple.1, original_triple.2
    );
    let _ = writeln!(human, "first reorientation switches:  {first_switched:?}");
    let _ = writeln!(human, "second reorientation switches: {second_switched:?}");
    let _ = writeln!(human, "shared label tau: {}", Label::new(tau.clone()));
    let _ = writeln!(
        human,
        "path: {}",
        if w.constructed {
            "explicit construction (validated)"
        } else {
            "brute-force fallback over the label multiset"
        }
    );

    let json = serde_json::to_value(WitnessJson {
        triple: original_triple,
        first_switched,
        second_switched,
        tau,
        constructed: w.constructed,
    })
    .expect("witness serialization");
    Ok(CommandOutput::ok(human, json))
}

fn region_json(arr: &Arrangement, region: &Region) -> Value {
    json!({
        "signs": region.signs(),
        "label": arr.region_label(region),
        "witness": region
            .witness()
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>(),
    })
}

pub fn regions(case: &CaseFile) -> Result<CommandOutput, CliError> {
    let (arr, perm) = case_arrangement(case)?;
    guard_hyperplanes(arr.hyperplane_count())?;
    let regions = arr.regions();

    let mut human = permutation_note(&perm);
    let _ = writeln!(
        human,
        "arrangement: n = {}, {} hyperplanes, {} regions",
        arr.n(),
        arr.hyperplane_count(),
        regions.len()
    );
    for (idx, r) in regions.iter().enumerate() {
        let signs: Vec<&str> = r
            .signs()
            .iter()
            .map(|s| match s {
                arrlab::Side::Near => "near",
                arrlab::Side::Far => "far",
            })
            .collect();
        let witness: Vec<String> = r.witness().iter().map(|x| x.to_string()).collect();
        let _ = writeln!(
            human,
            "#{idx:<3} {} [{}] at ({})",
            arr.region_label(r),
            signs.join(" "),
            witness.join(", ")
        );
    }

    let json = json!({
        "n": arr.n(),
        "hyperplane_count": arr.hyperplane_count(),
        "region_count": regions.len(),
        "permutation": perm.as_ref().map(|p| p.as_slice().to_vec()),
        "regions": regions.iter().map(|r| region_json(&arr, r)).collect::<Vec<_>>(),
    });
    Ok(CommandOutput::ok(human, json))
}

pub fn parking(case: &CaseFile) -> Result<CommandOutput, CliError> {
    let graph = match &case.payload {
        CasePayload::Digraph(g) => g.clone(),
        CasePayload::Arrangement(a) => a.graph(),
    };
    let set = g_parking_set(&graph);
    let mut human = format!(
        "{} G-parking functions on {} vertices\n",
        set.len(),
        graph.n()
    );
    for label in &set {
        let _ = writeln!(human, "{label}");
    }
    let json = json!({
        "n": graph.n(),
        "count": set.len(),
        "labels": set,
    });
    Ok(CommandOutput::ok(human, json))
}

pub fn verify(case: &CaseFile) -> Result<CommandOutput, CliError> {
    let (arr, perm) = case_arrangement(case)?;
    guard_hyperplanes(arr.hyperplane_count())?;
    let check = arr.verify_parking_theorems();
    let passed = check.passed();

    let mut human = permutation_note(&perm);
    let _ = writeln!(
        human,
        "regions: {}, G-parking functions: {}",
        check.region_count, check.parking_count
    );
    let _ = writeln!(
        human,
        "every region label is G-parking: {}",
        if check.non_parking.is_empty() { "yes" } else { "NO" }
    );
    for (region, label) in &check.non_parking {
        let _ = writeln!(human, "  region #{region} carries non-parking label {label}");
    }
    let _ = writeln!(
        human,
        "every G-parking function is attained: {}",
        if check.unattained.is_empty() { "yes" } else { "NO" }
    );
    for label in &check.unattained {
        let _ = writeln!(human, "  {label} is not the label of any region");
    }
    let _ = writeln!(human, "verdict: {}", if passed { "PASS" } else { "FAIL" });

    let mut json = serde_json::to_value(&check).expect("report serialization");
    json["passed"] = Value::Bool(passed);
    Ok(CommandOutput {
        human,
        json,
        verification_failed: !passed,
    })
}

/// Shared conjecture evaluation for `conjectures` and `scan-random`.
struct ConjectureOutcome {
    report: DuplicateClosureReport,
    scan: LocalInjectivityReport,
    reasons: Vec<String>,
}

impl ConjectureOutcome {
    fn evaluate(arr: &Arrangement) -> Result<Self, CliError> {
        let report = arr.duplicate_closure_report();
        let scan = arr.local_injectivity_scan();
        if !scan.anomalies.is_empty() {
            return Err(CliError::Verification(format!(
                "local injectivity scan anomalies: {:?}",
                scan.anomalies
            )));
        }
        let mut reasons = Vec::new();
        if !report.all_connected() {
            reasons.push("a duplicated-label class has a disconnected closure union".to_string());
        }
        if report.has_duplicates() {
            if scan.non_injective.is_empty() {
                reasons.push(
                    "labels duplicate globally but no flat is locally non-injective".to_string(),
                );
            }
            if !report.boundary_pair_exists() {
                reasons.push(
                    "labels duplicate globally but no equal-labeled closures intersect"
                        .to_string(),
                );
            }
        }
        Ok(ConjectureOutcome {
            report,
            scan,
            reasons,
        })
    }

    fn is_counterexample(&self) -> bool {
        !self.reasons.is_empty()
    }

    fn json(&self) -> Value {
        json!({
            "region_count": self.report.region_count,
            "duplicate_classes": self.report.classes,
            "flats_examined": self.scan.flats_examined,
            "non_injective_flats": self.scan.non_injective,
            "conjecture1": {
                "duplicates_exist": self.report.has_duplicates(),
                "boundary_pair_exists": self.report.boundary_pair_exists(),
                "non_injective_flat_found": !self.scan.non_injective.is_empty(),
            },
            "conjecture2": {
                "all_classes_connected": self.report.all_connected(),
            },
            "counterexample": self.is_counterexample(),
            "counterexample_reasons": self.reasons,
        })
    }

    fn render(&self, human: &mut String) {
        let _ = writeln!(
            human,
            "regions: {}, duplicated labels: {}",
            self.report.region_count,
            self.report.classes.len()
        );
        for class in &self.report.classes {
            let _ = writeln!(
                human,
                "  {} on regions {:?}: closure union {}",
                class.label,
                class.regions,
                if class.connected {
                    "connected"
                } else {
                    "DISCONNECTED"
                }
            );
        }
        let _ = writeln!(
            human,
            "flats examined: {}, locally non-injective: {}",
            self.scan.flats_examined,
            self.scan.non_injective.len()
        );
        for flat in &self.scan.non_injective {
            let _ = writeln!(
                human,
                "  flat of dimension {} through hyperplanes {:?} (triples {})",
                flat.flat.dim,
                flat.flat.hyperplanes,
                flat.triples
                    .iter()
                    .map(|t| t.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            );
        }
        if self.is_counterexample() {
            let _ = writeln!(human, "counterexample found: {}", self.reasons.join("; "));
        } else {
            let _ = writeln!(human, "conjecture evidence: consistent");
        }
    }
}

pub fn conjectures(case: &CaseFile) -> Result<CommandOutput, CliError> {
    let (arr, perm) = case_arrangement(case)?;
    guard_hyperplanes(arr.hyperplane_count())?;
    let outcome = ConjectureOutcome::evaluate(&arr)?;
    let mut human = permutation_note(&perm);
    outcome.render(&mut human);
    Ok(CommandOutput::ok(human, outcome.json()))
}

pub fn scan_random(
    n: usize,
    hyperplanes: usize,
    seed: u64,
    count: usize,
    out_dir: Option<PathBuf>,
) -> Result<CommandOutput, CliError> {
    if n < 2 {
        return Err(CliError::Input("--n must be at least 2".into()));
    }
    let distinct = n * (n - 1);
    if hyperplanes > 8 * distinct {
        return Err(CliError::Input(format!(
            "--hyperplanes {hyperplanes} cannot be distinct over {n} vertices"
        )));
    }
    guard_hyperplanes(hyperplanes)?;
    let out_dir = out_dir.unwrap_or_else(|| PathBuf::from("."));
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut human = String::new();
    let mut dumped: Vec<Value> = Vec::new();
    for index in 0..count {
        let arr = random_arrangement(n, hyperplanes, &mut rng);
        let outcome = ConjectureOutcome::evaluate(&arr)?;
        if outcome.is_counterexample() {
            let path = out_dir.join(format!(
                "counterexample-n{n}-m{hyperplanes}-seed{seed}-{index}.json"
            ));
            let case = CaseFile {
                payload: CasePayload::Arrangement(arr),
                description: Some(format!(
                    "conjecture counterexample (scan --n {n} --hyperplanes {hyperplanes} \
                     --seed {seed}, case {index}): {}",
                    outcome.reasons.join("; ")
                )),
            };
            write_case_file(&path, &case)?;
            let _ = writeln!(
                human,
                "case {index}: counterexample found ({}) -> {}",
                outcome.reasons.join("; "),
                path.display()
            );
            dumped.push(json!({
                "index": index,
                "file": path.display().to_string(),
                "reasons": outcome.reasons,
            }));
        }
    }
    let _ = writeln!(
        human,
        "checked {count} random arrangements (n = {n}, {hyperplanes} hyperplanes, seed {seed}): \
         {} counterexample(s)",
        dumped.len()
    );
    let json = json!({
        "n": n,
        "hyperplanes": hyperplanes,
        "seed": seed,
        "count": count,
        "counterexamples": dumped,
    });
    Ok(CommandOutput::ok(human, json))
}

fn write_case_file(path: &Path, case: &CaseFile) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&case.to_json())
        .expect("case serialization is infallible");
    std::fs::write(path, text)
        .map_err(|e| CliError::Input(format!("writing {}: {e}", path.display())))
}

pub fn selftest() -> Result<CommandOutput, CliError> {
    let report = crate::selftest::run_selftest();
    let human = report.render();
    let json = serde_json::to_value(&report).expect("report serialization");
    Ok(CommandOutput {
        human,
        json,
        verification_failed: !report.passed(),
    })
}
