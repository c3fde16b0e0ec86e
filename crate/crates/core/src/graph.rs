//! Directed multigraphs and simple acyclic digraphs on vertices `1..=n`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Vertices are 1-based throughout.
pub type Vertex = usize;
/// An ordered pair `(i, j)` standing for the edge `i -> j`.
pub type Edge = (Vertex, Vertex);

fn check_endpoints(n: usize, (i, j): Edge) -> Result<()> {
    for v in [i, j] {
        if v < 1 || v > n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
    }
    if i == j {
        return Err(Error::SelfLoop(i));
    }
    Ok(())
}

/// Kahn's algorithm over a fixed edge list, with edge `k` reversed when bit
/// `m-1-k` of `flip_mask` is set. Buffers are reused by the subset
/// enumeration, which calls this once per candidate mask.
fn kahn_is_acyclic(
    n: usize,
    edges: &[Edge],
    flip_mask: u64,
    out: &mut [Vec<usize>],
    indeg: &mut [usize],
    stack: &mut Vec<usize>,
) -> bool {
    for v in 0..n {
        out[v].clear();
        indeg[v] = 0;
    }
    let m = edges.len();
    for (k, &(i, j)) in edges.iter().enumerate() {
        let (s, t) = if flip_mask & (1u64 << (m - 1 - k)) != 0 {
            (j, i)
        } else {
            (i, j)
        };
        out[s - 1].push(t - 1);
        indeg[t - 1] += 1;
    }
    stack.clear();
    for v in 0..n {
        if indeg[v] == 0 {
            stack.push(v);
        }
    }
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for &w in &out[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    seen == n
}

fn edges_are_acyclic(n: usize, edges: &[Edge]) -> bool {
    let mut out = vec![Vec::new(); n];
    let mut indeg = vec![0; n];
    let mut stack = Vec::new();
    kahn_is_acyclic(n, edges, 0, &mut out, &mut indeg, &mut stack)
}

/// A directed multigraph: each ordered pair `(i, j)` with `i != j` carries a
/// strictly positive multiplicity; absent pairs have multiplicity 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiDigraph {
    n: usize,
    edges: BTreeMap<Edge, usize>,
}

impl MultiDigraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Edge, usize)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (e, mult) in edges {
            check_endpoints(n, e)?;
            if mult == 0 {
                return Err(Error::ZeroMultiplicity(e.0, e.1));
            }
            if map.insert(e, mult).is_some() {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
        }
        Ok(MultiDigraph { n, edges: map })
    }

    /// Builds a multigraph with multiplicity 1 on each listed edge.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        Self::new(n, edges.into_iter().map(|e| (e, 1)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<Vertex> {
        1..=self.n
    }

    /// Multiplicity of `i -> j` (0 when absent).
    pub fn multiplicity(&self, i: Vertex, j: Vertex) -> usize {
        self.edges.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn edges(&self) -> impl Iterator<Item = (Edge, usize)> + '_ {
        self.edges.iter().map(|(&e, &m)| (e, m))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Total multiplicity of edges leaving `i`.
    pub fn out_multiplicity(&self, i: Vertex) -> usize {
        self.edges
            .range((i, 0)..(i + 1, 0))
            .map(|(_, &m)| m)
            .sum()
    }

    /// True iff the support digraph has no directed cycle. Multiplicities are
    /// irrelevant and self-loops are excluded by construction.
    pub fn is_acyclic(&self) -> bool {
        let edges: Vec<Edge> = self.edges.keys().copied().collect();
        edges_are_acyclic(self.n, &edges)
    }

    /// DOT export; parallel edges are repeated per multiplicity.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph {\n");
        for v in self.vertices() {
            s.push_str(&format!("  {v};\n"));
        }
        for (&(i, j), &m) in &self.edges {
            for _ in 0..m {
                s.push_str(&format!("  {i} -> {j};\n"));
            }
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Serialize, Deserialize)]
struct DigraphRepr {
    n: usize,
    edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mult: Option<Vec<usize>>,
}

impl Serialize for MultiDigraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let edges: Vec<Edge> = self.edges.keys().copied().collect();
        let mults: Vec<usize> = self.edges.values().copied().collect();
        let mult = if mults.iter().all(|&m| m == 1) {
            None
        } else {
            Some(mults)
        };
        DigraphRepr {
            n: self.n,
            edges,
            mult,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MultiDigraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = DigraphRepr::deserialize(deserializer)?;
        let mults = match repr.mult {
            Some(m) if m.len() != repr.edges.len() => {
                return Err(D::Error::custom(format!(
                    "mult has {} entries but edges has {}",
                    m.len(),
                    repr.edges.len()
                )))
            }
            Some(m) => m,
            None => vec![1; repr.edges.len()],
        };
        MultiDigraph::new(repr.n, repr.edges.into_iter().zip(mults))
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// A simple acyclic digraph: at most one direction per vertex pair, no
/// directed cycle. Both invariants are enforced at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dag {
    n: usize,
    edges: BTreeSet<Edge>,
}

impl Dag {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for e in edges {
            check_endpoints(n, e)?;
            if set.contains(&(e.1, e.0)) {
                return Err(Error::NotSimple { i: e.1, j: e.0 });
            }
            set.insert(e);
        }
        let list: Vec<Edge> = set.iter().copied().collect();
        if !edges_are_acyclic(n, &list) {
            return Err(Error::Cyclic);
        }
        Ok(Dag { n, edges: set })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> std::ops::RangeInclusive<Vertex> {
        1..=self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, i: Vertex, j: Vertex) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn out_neighbors(&self, i: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.edges.range((i, 0)..(i + 1, 0)).map(|&(_, j)| j)
    }

    /// True iff every edge `(i, j)` satisfies `i < j`.
    pub fn is_increasing(&self) -> bool {
        self.edges.iter().all(|&(i, j)| i < j)
    }

    /// Relabels each vertex `v` as `perm.image(v)`.
    pub fn relabel(&self, perm: &Permutation) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::PermutationLength {
                got: perm.len(),
                expected: self.n,
            });
        }
        Dag::new(
            self.n,
            self.edges
                .iter()
                .map(|&(i, j)| (perm.image(i), perm.image(j))),
        )
    }

    /// Relabels the vertices along a topological order so that every edge
    /// points from a smaller to a larger vertex, and returns the permutation
    /// (old label -> new label) that was applied. Ties are broken by smallest
    /// original vertex first, so an already increasing graph maps to itself
    /// under the identity.
    pub fn normalize_increasing(&self) -> (Dag, Permutation) {
        let mut indeg = vec![0usize; self.n];
        for &(_, j) in &self.edges {
            indeg[j - 1] += 1;
        }
        let mut ready: BTreeSet<Vertex> = (1..=self.n).filter(|&v| indeg[v - 1] == 0).collect();
        let mut new_label = vec![0usize; self.n];
        let mut next = 1;
        while let Some(&v) = ready.iter().next() {
            ready.remove(&v);
            new_label[v - 1] = next;
            next += 1;
            for w in self.out_neighbors(v) {
                indeg[w - 1] -= 1;
                if indeg[w - 1] == 0 {
                    ready.insert(w);
                }
            }
        }
        debug_assert_eq!(next, self.n + 1);
        let perm = Permutation::new(new_label).expect("topological order yields a permutation");
        let relabeled = self.relabel(&perm).expect("relabeling preserves validity");
        debug_assert!(relabeled.is_increasing());
        (relabeled, perm)
    }

    /// Edges in sorted order; the subset enumeration and the central
    /// arrangement construction both index edges by position in this list.
    pub fn sorted_edges(&self) -> Vec<Edge> {
        self.edges.iter().copied().collect()
    }

    /// Flip masks (over `sorted_edges`, bit `m-1-k` for edge `k`) whose flip
    /// leaves the graph acyclic, in lexicographic order of the subset
    /// indicator vector. Brute force over all `2^m` subsets.
    pub(crate) fn acyclic_flip_masks(&self) -> Vec<u64> {
        let edges = self.sorted_edges();
        let m = edges.len();
        assert!(m < 64, "subset enumeration supports at most 63 edges");
        let mut out = vec![Vec::new(); self.n];
        let mut indeg = vec![0usize; self.n];
        let mut stack = Vec::new();
        let mut masks = Vec::new();
        for mask in 0..1u64 << m {
            if kahn_is_acyclic(self.n, &edges, mask, &mut out, &mut indeg, &mut stack) {
                masks.push(mask);
            }
        }
        masks
    }

    /// All subsets of the edge set whose flip yields an acyclic digraph, each
    /// exactly once, in lexicographic order of the subset indicator. The empty
    /// subset (the original orientation) always comes first.
    pub fn acyclic_reorientations(&self) -> Vec<Reorientation> {
        let edges = self.sorted_edges();
        let m = edges.len();
        let base = Arc::new(self.clone());
        self.acyclic_flip_masks()
            .into_iter()
            .map(|mask| {
                let switched = (0..m)
                    .filter(|k| mask & (1u64 << (m - 1 - k)) != 0)
                    .map(|k| edges[k])
                    .collect();
                Reorientation {
                    base: Arc::clone(&base),
                    switched,
                }
            })
            .collect()
    }

    pub fn to_multidigraph(&self) -> MultiDigraph {
        MultiDigraph::new(self.n, self.edges.iter().map(|&e| (e, 1)))
            .expect("a valid dag is a valid multigraph")
    }

    pub fn to_dot(&self) -> String {
        self.to_multidigraph().to_dot()
    }
}

impl TryFrom<MultiDigraph> for Dag {
    type Error = Error;

    fn try_from(g: MultiDigraph) -> Result<Self> {
        for ((i, j), m) in g.edges() {
            if m > 1 {
                return Err(Error::NotSimpleMultiplicity(i, j));
            }
        }
        Dag::new(g.n(), g.edges().map(|(e, _)| e))
    }
}

impl Serialize for Dag {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_multidigraph().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Dag {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let g = MultiDigraph::deserialize(deserializer)?;
        Dag::try_from(g).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// A bijection of `{1, ..., n}`, stored as `map[old - 1] = new`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<Vertex>,
}

impl Permutation {
    pub fn new(map: Vec<Vertex>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &v in &map {
            if v < 1 || v > n || seen[v - 1] {
                return Err(Error::NotAPermutation(map.clone()));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (1..=n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    pub fn image(&self, v: Vertex) -> Vertex {
        self.map[v - 1]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (k, &v) in self.map.iter().enumerate() {
            inv[v - 1] = k + 1;
        }
        Permutation { map: inv }
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.map
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .map
            .iter()
            .enumerate()
            .map(|(k, &v)| format!("{}->{}", k + 1, v))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A subset of base edges whose direction is reversed, constrained so the
/// reoriented graph is still acyclic. The empty subset is the original
/// orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reorientation {
    base: Arc<Dag>,
    switched: BTreeSet<Edge>,
}

impl Reorientation {
    pub fn new(base: Dag, switched: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let switched: BTreeSet<Edge> = switched.into_iter().collect();
        for &(i, j) in &switched {
            if !base.contains_edge(i, j) {
                return Err(Error::NotABaseEdge(i, j));
            }
        }
        let oriented: Vec<Edge> = base
            .edges()
            .map(|(i, j)| {
                if switched.contains(&(i, j)) {
                    (j, i)
                } else {
                    (i, j)
                }
            })
            .collect();
        if !edges_are_acyclic(base.n(), &oriented) {
            return Err(Error::Cyclic);
        }
        Ok(Reorientation {
            base: Arc::new(base),
            switched,
        })
    }

    pub fn base(&self) -> &Dag {
        &self.base
    }

    pub fn switched(&self) -> &BTreeSet<Edge> {
        &self.switched
    }

    pub fn is_switched(&self, e: Edge) -> bool {
        self.switched.contains(&e)
    }

    /// Base edges with the switched ones reversed.
    pub fn oriented_edges(&self) -> Vec<Edge> {
        self.base
            .edges()
            .map(|e| if self.is_switched(e) { (e.1, e.0) } else { e })
            .collect()
    }
}


#[cfg(test)]
mod prop_tests {
    use super::*;
    use proptest::prelude::*;

    /// Every subset of `{(i, j) : i < j}` is a simple acyclic digraph, which
    /// makes increasing-pair subsets a convenient generator.
    fn arb_dag(max_n: usize) -> impl Strategy<Value = Dag> {
        (1..=max_n).prop_flat_map(|n| {
            let pairs: Vec<Edge> = (1..=n)
                .flat_map(|i| ((i + 1)..=n).map(move |j| (i, j)))
                .collect();
            let len = pairs.len();
            proptest::collection::vec(proptest::bool::ANY, len).prop_map(move |include| {
                let edges = pairs
                    .iter()
                    .zip(&include)
                    .filter(|(_, &keep)| keep)
                    .map(|(&e, _)| e);
                Dag::new(n, edges).unwrap()
            })
        })
    }

    /// Fisher-Yates from a splitmix-style seed; deterministic per test case.
    fn seeded_permutation(n: usize, mut seed: u64) -> Permutation {
        let mut next = move || {
            seed = seed.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = seed;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            z ^ (z >> 31)
        };
        let mut map: Vec<usize> = (1..=n).collect();
        for k in (1..n).rev() {
            let pick = (next() as usize) % (k + 1);
            map.swap(k, pick);
        }
        Permutation::new(map).unwrap()
    }

    /// Independent oracle: depth-first search for a back edge.
    fn dfs_has_cycle(n: usize, edges: &[Edge]) -> bool {
        fn visit(v: usize, adj: &[Vec<usize>], state: &mut [u8]) -> bool {
            state[v] = 1;
            for &w in &adj[v] {
                if state[w] == 1 || (state[w] == 0 && visit(w, adj, state)) {
                    return true;
                }
            }
            state[v] = 2;
            false
        }
        let mut adj = vec![Vec::new(); n];
        for &(i, j) in edges {
            adj[i - 1].push(j - 1);
        }
        let mut state = vec![0u8; n];
        (0..n).any(|v| state[v] == 0 && visit(v, &adj, &mut state))
    }

    proptest! {
        #[test]
        fn acyclicity_matches_dfs_oracle(n in 1usize..6, raw in proptest::collection::vec((1usize..6, 1usize..6), 0..10)) {
            let edges: Vec<Edge> = raw
                .into_iter()
                .filter(|&(i, j)| i != j && i <= n && j <= n)
                .collect();
            let mut dedup = edges.clone();
            dedup.sort_unstable();
            dedup.dedup();
            let g = MultiDigraph::from_edges(n, dedup.iter().copied()).unwrap();
            prop_assert_eq!(g.is_acyclic(), !dfs_has_cycle(n, &dedup));
        }

        #[test]
        fn normalized_graphs_are_increasing_and_isomorphic(g in arb_dag(6), seed in proptest::num::u64::ANY) {
            // Scramble first so normalization sees non-trivial inputs.
            let scrambled = g.relabel(&seeded_permutation(g.n(), seed)).unwrap();
            let (norm, perm) = scrambled.normalize_increasing();
            prop_assert!(norm.is_increasing());
            prop_assert_eq!(norm.edge_count(), scrambled.edge_count());
            prop_assert_eq!(norm.relabel(&perm.inverse()).unwrap(), scrambled);
        }

        #[test]
        fn reorientations_contain_identity_and_stay_acyclic(g in arb_dag(5)) {
            let rs = g.acyclic_reorientations();
            prop_assert!(rs[0].switched().is_empty());
            for r in &rs {
                let oriented = r.oriented_edges();
                prop_assert!(edges_are_acyclic(g.n(), &oriented));
            }
        }

        #[test]
        fn reorientation_count_is_relabeling_invariant(g in arb_dag(5), seed in proptest::num::u64::ANY) {
            let count = g.acyclic_reorientations().len();
            let h = g.relabel(&seeded_permutation(g.n(), seed)).unwrap();
            prop_assert_eq!(h.acyclic_reorientations().len(), count);
        }
    }
}
