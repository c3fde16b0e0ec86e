//! Seeded generators for randomized sweeps.

use rand::Rng;

use crate::geometry::{Arrangement, Constraint, Hyperplane, LinearSystem, Rat, Relation};
use crate::graph::{Dag, Edge};

/// A random normalized simple acyclic digraph: each increasing pair `(i, j)`
/// is an edge with probability 1/2.
pub fn random_increasing_dag(n: usize, rng: &mut impl Rng) -> Dag {
    let edges: Vec<Edge> = (1..=n)
        .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
        .filter(|_| rng.random_bool(0.5))
        .collect();
    Dag::new(n, edges).expect("increasing edges are simple and acyclic")
}

/// A random multigraphical arrangement with exactly `hyperplanes` distinct
/// hyperplanes: ordered pairs `i != j` and constants `p/q` with small
/// positive numerators and denominators.
pub fn random_arrangement(n: usize, hyperplanes: usize, rng: &mut impl Rng) -> Arrangement {
    assert!(n >= 2, "an arrangement needs at least two indices");
    let mut chosen: Vec<Hyperplane> = Vec::with_capacity(hyperplanes);
    while chosen.len() < hyperplanes {
        let i = rng.random_range(1..=n);
        let mut j = rng.random_range(1..=n);
        while j == i {
            j = rng.random_range(1..=n);
        }
        let a = Rat::new(
            rng.random_range(1i64..=8).into(),
            rng.random_range(1i64..=4).into(),
        );
        if chosen.iter().any(|h| h.i() == i && h.j() == j && *h.a() == a) {
            continue;
        }
        chosen.push(Hyperplane::new(i, j, a).expect("constant is positive"));
    }
    Arrangement::new(n, chosen).expect("duplicates were filtered")
}

/// A random small system mixing equalities with strict and weak
/// inequalities; integer coefficients in `-3..=3`, right-hand sides in
/// `-4..=4`.
pub fn random_system(vars: usize, max_constraints: usize, rng: &mut impl Rng) -> LinearSystem {
    let count = rng.random_range(0..=max_constraints);
    let mut system = LinearSystem::new(vars);
    for _ in 0..count {
        let coeffs: Vec<i64> = (0..vars).map(|_| rng.random_range(-3..=3)).collect();
        let rel = match rng.random_range(0..6) {
            0 => Relation::Eq,
            1 | 2 => Relation::Le,
            _ => Relation::Lt,
        };
        let rhs = rng.random_range(-4..=4);
        system.push(Constraint::from_ints(&coeffs, rel, rhs));
    }
    system
}
