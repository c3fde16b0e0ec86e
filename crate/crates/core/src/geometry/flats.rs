//! Flats of an arrangement and the local-injectivity harness.
//!
//! A flat is a nonempty intersection of a subset of hyperplanes inside the
//! sum-zero subspace. Subsets are enumerated exhaustively and deduplicated by
//! the reduced row echelon form of their equality system, which is canonical
//! per affine subspace. Labels near a point depend only on the hyperplanes
//! through that point, so each flat's subarrangement is central and its
//! injectivity is decided combinatorially through the condition-triple
//! criterion.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Serialize, Serializer};

use super::system::{Constraint, LinearSystem, Rat, Relation};
use super::Arrangement;
use crate::central::{find_condition_triples, ConditionTriple};
use crate::graph::{Dag, MultiDigraph};

/// Affine equality system in reduced row echelon form: pivot entries are 1,
/// pivot columns are cleared everywhere else, rows sorted by pivot column.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Echelon {
    n: usize,
    rows: Vec<(Vec<Rat>, Rat)>,
}

impl Echelon {
    fn new(n: usize) -> Self {
        Echelon { n, rows: Vec::new() }
    }

    fn pivot_col(row: &[Rat]) -> Option<usize> {
        row.iter().position(|c| !c.is_zero())
    }

    fn reduce(&self, coeffs: &mut [Rat], rhs: &mut Rat) {
        for (row, row_rhs) in &self.rows {
            let col = Self::pivot_col(row).expect("echelon rows are nonzero");
            if coeffs[col].is_zero() {
                continue;
            }
            let factor = coeffs[col].clone();
            for m in 0..self.n {
                let delta = &factor * &row[m];
                coeffs[m] = &coeffs[m] - &delta;
            }
            *rhs = &*rhs - &(&factor * row_rhs);
        }
    }

    /// Adds one equality. `Ok(true)` means the rank grew, `Ok(false)` that
    /// the equality was already implied, `Err(())` that it contradicts the
    /// system (the intersection is empty).
    fn insert(&mut self, mut coeffs: Vec<Rat>, mut rhs: Rat) -> Result<bool, ()> {
        self.reduce(&mut coeffs, &mut rhs);
        let Some(col) = Self::pivot_col(&coeffs) else {
            return if rhs.is_zero() { Ok(false) } else { Err(()) };
        };
        let scale = coeffs[col].clone();
        for c in coeffs.iter_mut() {
            *c = &*c / &scale;
        }
        rhs = &rhs / &scale;
        // Clear the new pivot column from the existing rows to stay reduced.
        for (row, row_rhs) in self.rows.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for m in 0..self.n {
                let delta = &factor * &coeffs[m];
                row[m] = &row[m] - &delta;
            }
            *row_rhs = &*row_rhs - &(&factor * &rhs);
        }
        let pos = self
            .rows
            .partition_point(|(row, _)| Self::pivot_col(row).unwrap() < col);
        self.rows.insert(pos, (coeffs, rhs));
        Ok(true)
    }

    /// True iff the equality `coeffs · x = rhs` holds on the whole subspace.
    fn implies(&self, coeffs: &[Rat], rhs: &Rat) -> bool {
        let mut c = coeffs.to_vec();
        let mut r = rhs.clone();
        self.reduce(&mut c, &mut r);
        c.iter().all(|v| v.is_zero()) && r.is_zero()
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// A nonempty intersection of hyperplanes within the sum-zero subspace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flat {
    /// Indices (into the arrangement's hyperplane list) of every hyperplane
    /// containing the flat, not just the subset that generated it.
    pub hyperplanes: Vec<usize>,
    /// Dimension inside the ambient space `V` of dimension `n - 1`.
    pub dim: usize,
    /// A point of the flat.
    pub point: Vec<Rat>,
}

impl Serialize for Flat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            hyperplanes: &'a [usize],
            dim: usize,
            point: Vec<String>,
        }
        Repr {
            hyperplanes: &self.hyperplanes,
            dim: self.dim,
            point: self.point.iter().map(|r| r.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

pub(crate) fn enumerate_flats(arr: &Arrangement) -> Vec<Flat> {
    let n = arr.n();
    let m = arr.hyperplane_count();
    assert!(m < 64, "flat enumeration supports at most 63 hyperplanes");
    let rows: Vec<(Vec<Rat>, Rat)> = arr
        .hyperplanes()
        .iter()
        .map(|h| {
            let mut coeffs = vec![Rat::zero(); n];
            coeffs[h.i() - 1] = Rat::from_integer(1.into());
            coeffs[h.j() - 1] = Rat::from_integer((-1).into());
            (coeffs, h.a().clone())
        })
        .collect();
    let mut ambient = Echelon::new(n);
    ambient
        .insert(vec![Rat::from_integer(1.into()); n], Rat::zero())
        .expect("sum-zero row is consistent");

    let mut seen: BTreeSet<Vec<(Vec<Rat>, Rat)>> = BTreeSet::new();
    let mut flats = Vec::new();
    'subsets: for mask in 1u64..(1 << m) {
        let mut echelon = ambient.clone();
        for (k, (coeffs, rhs)) in rows.iter().enumerate() {
            if mask & (1 << k) == 0 {
                continue;
            }
            if echelon.insert(coeffs.clone(), rhs.clone()).is_err() {
                continue 'subsets; // empty intersection
            }
        }
        if !seen.insert(echelon.rows.clone()) {
            continue;
        }
        let closure: Vec<usize> = (0..m)
            .filter(|&k| echelon.implies(&rows[k].0, &rows[k].1))
            .collect();
        let mut system = LinearSystem::new(n);
        system.push(Constraint::new(
            vec![Rat::from_integer(1.into()); n],
            Relation::Eq,
            Rat::zero(),
        ));
        for &k in &closure {
            system.push(Constraint::new(
                rows[k].0.clone(),
                Relation::Eq,
                rows[k].1.clone(),
            ));
        }
        let point = system
            .feasible_point()
            .expect("a consistent equality system has a solution");
        flats.push(Flat {
            hyperplanes: closure,
            dim: n - echelon.rank(),
            point,
        });
    }
    flats
}

/// A flat whose subarrangement labels regions non-injectively.
#[derive(Debug, Clone, Serialize)]
pub struct NonInjectiveFlat {
    pub flat: Flat,
    /// Derived multigraph of the hyperplanes through the flat.
    pub graph: MultiDigraph,
    /// Condition triples of the increasing normalization of that digraph.
    pub triples: Vec<ConditionTriple>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LocalInjectivityReport {
    pub flats_examined: usize,
    pub non_injective: Vec<NonInjectiveFlat>,
    /// Flats whose subarrangement failed to yield a simple acyclic digraph.
    /// Hyperplanes through a common point always do, so anything here points
    /// at an internal inconsistency.
    pub anomalies: Vec<String>,
}

impl LocalInjectivityReport {
    pub fn locally_injective(&self) -> bool {
        self.non_injective.is_empty() && self.anomalies.is_empty()
    }
}

pub(crate) fn local_injectivity_scan(arr: &Arrangement) -> LocalInjectivityReport {
    let flats = enumerate_flats(arr);
    let mut non_injective = Vec::new();
    let mut anomalies = Vec::new();
    for flat in &flats {
        let sub = Arrangement::new(
            arr.n(),
            flat.hyperplanes
                .iter()
                .map(|&k| arr.hyperplanes()[k].clone())
                .collect(),
        )
        .expect("subset of a valid arrangement");
        let graph = sub.graph();
        match Dag::try_from(graph.clone()) {
            Err(e) => anomalies.push(format!(
                "flat through hyperplanes {:?}: {e}",
                flat.hyperplanes
            )),
            Ok(dag) => {
                let (normalized, _) = dag.normalize_increasing();
                let triples =
                    find_condition_triples(&normalized).expect("normalized graph is increasing");
                if !triples.is_empty() {
                    non_injective.push(NonInjectiveFlat {
                        flat: flat.clone(),
                        graph,
                        triples,
                    });
                }
            }
        }
    }
    LocalInjectivityReport {
        flats_examined: flats.len(),
        non_injective,
        anomalies,
    }
}
