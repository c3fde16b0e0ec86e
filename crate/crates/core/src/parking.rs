//! The G-parking predicate and exhaustive enumeration of G-parking functions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MultiDigraph;

/// A length-n tuple of non-negative integers, written `⟨λ(1), ..., λ(n)⟩`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Label {
    values: Vec<usize>,
}

impl Label {
    pub fn new(values: Vec<usize>) -> Self {
        Label { values }
    }

    pub fn zeros(n: usize) -> Self {
        Label {
            values: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at vertex `i` (1-based).
    pub fn get(&self, i: usize) -> usize {
        self.values[i - 1]
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }
}

impl From<Vec<usize>> for Label {
    fn from(values: Vec<usize>) -> Self {
        Label::new(values)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "\u{27e8}{}\u{27e9}", parts.join(","))
    }
}

/// Decides whether `label` is a G-parking function of `g`: for every
/// non-empty `I ⊆ {1, ..., n}` some vertex `i ∈ I` must have at least
/// `label(i)` edge multiplicity leaving `I`. Checked directly over all
/// `2^n - 1` subsets.
pub fn is_g_parking(g: &MultiDigraph, label: &Label) -> Result<bool> {
    if label.len() != g.n() {
        return Err(Error::LabelLength {
            got: label.len(),
            expected: g.n(),
        });
    }
    Ok(is_g_parking_unchecked(g, label.values()))
}

fn is_g_parking_unchecked(g: &MultiDigraph, values: &[usize]) -> bool {
    let n = g.n();
    let edges: Vec<((usize, usize), usize)> = g.edges().collect();
    'subsets: for mask in 1u64..(1 << n) {
        for i in 1..=n {
            if mask & (1 << (i - 1)) == 0 {
                continue;
            }
            let leaving: usize = edges
                .iter()
                .filter(|&&((s, t), _)| s == i && mask & (1 << (t - 1)) == 0)
                .map(|&(_, m)| m)
                .sum();
            if leaving >= values[i - 1] {
                continue 'subsets;
            }
        }
        return false;
    }
    true
}

/// Enumerates every G-parking function of `g`, in lexicographic order.
///
/// The singleton subset `I = {i}` forces `λ(i) <= out_multiplicity(i)`, so
/// the search box is the product of those intervals.
pub fn g_parking_set(g: &MultiDigraph) -> Vec<Label> {
    let n = g.n();
    let bounds: Vec<usize> = (1..=n).map(|i| g.out_multiplicity(i)).collect();
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    loop {
        if is_g_parking_unchecked(g, &current) {
            out.push(Label::new(current.clone()));
        }
        // Odometer step in lexicographic order: bump the last coordinate.
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if current[k] < bounds[k] {
                current[k] += 1;
                break;
            }
            current[k] = 0;
        }
    }
}
