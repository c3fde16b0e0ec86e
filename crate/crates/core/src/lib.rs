//! Pak-Stanley labelings of multigraphical hyperplane arrangements.
//!
//! A multigraphical arrangement is a finite set of hyperplanes
//! `x_i - x_j = a` (with `a > 0`) inside the sum-zero subspace of R^n.
//! Each region gets a label counting, per index `i`, the hyperplanes of
//! the form `x_i - x_j = a` separating it from the origin. This crate
//! provides two independent engines for working with those labels:
//!
//! * [`graph`] / [`central`] — the combinatorial route. Central
//!   arrangements correspond to simple acyclic digraphs; regions are
//!   acyclic reorientations, labels count switched out-edges, and label
//!   injectivity is decided by a local edge condition.
//! * [`geometry`] — the geometric route. Regions are enumerated as
//!   feasible sign vectors over an exact rational feasibility kernel,
//!   with closure intersections and flats for the locality harnesses.
//!
//! [`parking`] supplies the G-parking predicate both engines are checked
//! against, and [`random`] generates seeded inputs for randomized sweeps.

pub mod central;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod parking;
pub mod random;

pub use central::{
    central_arrangement, common_point, duplicate_witness, find_condition_triples, is_injective,
    label_multiset, ConditionTriple, DuplicateWitness, LabelMultiset,
};
pub use error::{Error, Result};
pub use geometry::{Arrangement, Hyperplane, LinearSystem, Rat, Region, Side};
pub use graph::{Dag, Edge, MultiDigraph, Permutation, Reorientation, Vertex};
pub use parking::{g_parking_set, is_g_parking, Label};
