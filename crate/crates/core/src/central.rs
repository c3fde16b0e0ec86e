//! Central multigraphical arrangements through their simple acyclic digraphs.
//!
//! A central arrangement (all hyperplanes through one point) corresponds to a
//! simple acyclic digraph: edge `i -> j` (with `i < j` after normalization)
//! becomes the hyperplane `x_i - x_j = j - i`, and all of them pass through
//! an explicit common point. Regions correspond to acyclic reorientations,
//! the label of a region counts the switched out-edges per vertex, and the
//! labeling is injective exactly when no vertex has two out-neighbors that
//! are themselves non-adjacent (the condition-triple criterion).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{rat, Arrangement, Hyperplane, Rat};
use crate::graph::{Dag, Edge, Reorientation, Vertex};
use crate::parking::Label;

/// The common point of the canonical central arrangement on `n` vertices:
/// coordinates `(n + 1 - 2i) / 2`, i.e. `(k - 1/2, ..., -(k - 1/2))` for
/// `n = 2k` and `(k, ..., 1, 0, -1, ..., -k)` for `n = 2k + 1`. Coordinates
/// sum to zero and satisfy `c_i - c_j = j - i`.
pub fn common_point(n: usize) -> Vec<Rat> {
    (1..=n)
        .map(|i| Rat::new((n as i64 + 1 - 2 * i as i64).into(), 2.into()))
        .collect()
}

/// Builds the central arrangement of a normalized simple acyclic digraph:
/// one hyperplane `x_i - x_j = j - i` per edge `i -> j`. Every hyperplane
/// contains [`common_point`]`(n)` and the derived multigraph is the input.
pub fn central_arrangement(g: &Dag) -> Result<Arrangement> {
    let mut hyperplanes = Vec::with_capacity(g.edge_count());
    for (i, j) in g.edges() {
        if i > j {
            return Err(Error::NotIncreasing(i, j));
        }
        hyperplanes.push(Hyperplane::new(i, j, rat((j - i) as i64))?);
    }
    Arrangement::new(g.n(), hyperplanes)
}

impl Reorientation {
    /// The Pak-Stanley label of the region corresponding to this
    /// reorientation: `λ(i)` counts the base edges leaving `i` that are
    /// switched.
    pub fn label(&self) -> Label {
        let mut values = vec![0usize; self.base().n()];
        for &(i, _) in self.switched() {
            values[i - 1] += 1;
        }
        Label::new(values)
    }
}

/// The labels of all acyclic reorientations of `g`, in enumeration order.
/// Its cardinality is the number of regions of the central arrangement.
pub fn label_multiset(g: &Dag) -> LabelMultiset {
    let edges = g.sorted_edges();
    let m = edges.len();
    let labels = g
        .acyclic_flip_masks()
        .into_iter()
        .map(|mask| {
            let mut values = vec![0usize; g.n()];
            for (k, &(i, _)) in edges.iter().enumerate() {
                if mask & (1u64 << (m - 1 - k)) != 0 {
                    values[i - 1] += 1;
                }
            }
            Label::new(values)
        })
        .collect();
    LabelMultiset { labels }
}

/// A multiset of labels, one per acyclic reorientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMultiset {
    labels: Vec<Label>,
}

impl LabelMultiset {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn counts(&self) -> BTreeMap<Label, usize> {
        let mut counts = BTreeMap::new();
        for label in &self.labels {
            *counts.entry(label.clone()).or_insert(0) += 1;
        }
        counts
    }

    /// Labels occurring at least twice, each listed once, sorted.
    pub fn duplicated(&self) -> Vec<Label> {
        self.counts()
            .into_iter()
            .filter(|(_, count)| *count > 1)
            .map(|(label, _)| label)
            .collect()
    }

    pub fn has_duplicates(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.labels.iter().any(|label| !seen.insert(label))
    }

    pub fn distinct(&self) -> BTreeSet<Label> {
        self.labels.iter().cloned().collect()
    }
}

impl<'a> IntoIterator for &'a LabelMultiset {
    type Item = &'a Label;
    type IntoIter = std::slice::Iter<'a, Label>;

    fn into_iter(self) -> Self::IntoIter {
        self.labels.iter()
    }
}

/// Vertices `k < i < j` (in increasing normalization) with `k -> i` and
/// `k -> j` present but `i -> j` absent. The labeling of the central
/// arrangement has duplicates exactly when such a triple exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConditionTriple {
    pub k: Vertex,
    pub i: Vertex,
    pub j: Vertex,
}

impl ConditionTriple {
    pub fn new(k: Vertex, i: Vertex, j: Vertex) -> Self {
        ConditionTriple { k, i, j }
    }

    /// The duplicate label produced by the witness construction when every
    /// edge it reverses is present: `j - k - 1` at position `k`, `j - i - 1`
    /// at position `i`, zero elsewhere.
    pub fn predicted_label(&self, n: usize) -> Label {
        let mut values = vec![0usize; n];
        values[self.k - 1] = self.j - self.k - 1;
        values[self.i - 1] = self.j - self.i - 1;
        Label::new(values)
    }
}

impl fmt::Display for ConditionTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.k, self.i, self.j)
    }
}

impl Serialize for ConditionTriple {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        (self.k, self.i, self.j).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ConditionTriple {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let (k, i, j) = <(Vertex, Vertex, Vertex)>::deserialize(deserializer)?;
        Ok(ConditionTriple { k, i, j })
    }
}

/// All condition triples of a normalized graph, in lexicographic order. The
/// list is empty exactly when the labeling is injective.
pub fn find_condition_triples(g: &Dag) -> Result<Vec<ConditionTriple>> {
    for (i, j) in g.edges() {
        if i > j {
            return Err(Error::NotIncreasing(i, j));
        }
    }
    let n = g.n();
    let mut triples = Vec::new();
    for k in 1..=n {
        for i in (k + 1)..=n {
            if !g.contains_edge(k, i) {
                continue;
            }
            for j in (i + 1)..=n {
                if g.contains_edge(k, j) && !g.contains_edge(i, j) {
                    triples.push(ConditionTriple { k, i, j });
                }
            }
        }
    }
    Ok(triples)
}

/// Decides label injectivity for any simple acyclic digraph by normalizing
/// and searching for a condition triple.
pub fn is_injective(g: &Dag) -> bool {
    let (normalized, _) = g.normalize_increasing();
    find_condition_triples(&normalized)
        .expect("normalized graph is increasing")
        .is_empty()
}

/// Order-free formulation of the same criterion: every vertex's
/// out-neighborhood is pairwise joined by direct edges (in either
/// direction). Kept as an independent cross-check of [`is_injective`].
pub fn out_neighborhoods_pairwise_adjacent(g: &Dag) -> bool {
    for k in g.vertices() {
        let out: Vec<Vertex> = g.out_neighbors(k).collect();
        for (p, &u) in out.iter().enumerate() {
            for &v in &out[(p + 1)..] {
                if !g.contains_edge(u, v) && !g.contains_edge(v, u) {
                    return false;
                }
            }
        }
    }
    true
}

/// Two distinct acyclic reorientations carrying the same label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DuplicateWitness {
    pub triple: ConditionTriple,
    pub first: Reorientation,
    pub second: Reorientation,
    pub tau: Label,
    /// True when the explicit construction yielded the witness; false when
    /// it failed validation and the pair was found by brute force over the
    /// label multiset instead.
    pub constructed: bool,
}

impl Serialize for DuplicateWitness {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut state = serializer.serialize_struct("DuplicateWitness", 5)?;
        state.serialize_field("triple", &self.triple)?;
        let first: Vec<Edge> = self.first.switched().iter().copied().collect();
        let second: Vec<Edge> = self.second.switched().iter().copied().collect();
        state.serialize_field("first_switched", &first)?;
        state.serialize_field("second_switched", &second)?;
        state.serialize_field("tau", &self.tau)?;
        state.serialize_field("constructed", &self.constructed)?;
        state.end()
    }
}

fn validate_triple(g: &Dag, t: &ConditionTriple) -> Result<()> {
    let bad = |reason: &str| Error::InvalidTriple {
        k: t.k,
        i: t.i,
        j: t.j,
        reason: reason.to_string(),
    };
    if !(t.k < t.i && t.i < t.j && t.j <= g.n()) {
        return Err(bad("indices must satisfy k < i < j <= n"));
    }
    if !g.contains_edge(t.k, t.i) {
        return Err(bad("edge k -> i is missing"));
    }
    if !g.contains_edge(t.k, t.j) {
        return Err(bad("edge k -> j is missing"));
    }
    if g.contains_edge(t.i, t.j) {
        return Err(bad("edge i -> j is present"));
    }
    Ok(())
}

/// The switched sets of the explicit witness construction: besides `k -> i`
/// (first) or `k -> j` (second), reverse every present edge from `k` to
/// `{k+1, ..., j-1} \ {i}` and from `i` to `{i+1, ..., j-1}`.
fn construction_switch_sets(g: &Dag, t: &ConditionTriple) -> (Vec<Edge>, Vec<Edge>) {
    let mut shared: Vec<Edge> = Vec::new();
    for v in (t.k + 1)..t.j {
        if v != t.i && g.contains_edge(t.k, v) {
            shared.push((t.k, v));
        }
    }
    for w in (t.i + 1)..t.j {
        if g.contains_edge(t.i, w) {
            shared.push((t.i, w));
        }
    }
    let mut first = shared.clone();
    first.push((t.k, t.i));
    let mut second = shared;
    second.push((t.k, t.j));
    (first, second)
}

/// True when every edge the construction wants to reverse is present in `g`,
/// in which case the witness label matches
/// [`ConditionTriple::predicted_label`].
pub fn construction_edges_complete(g: &Dag, t: &ConditionTriple) -> bool {
    ((t.k + 1)..t.j).all(|v| v == t.i || g.contains_edge(t.k, v))
        && ((t.i + 1)..t.j).all(|w| g.contains_edge(t.i, w))
}

/// Produces two distinct acyclic reorientations of `g` with equal labels for
/// the given condition triple. The explicit construction is validated
/// (acyclicity of both flips, equal labels); if validation fails, the
/// witness falls back to scanning the label multiset for the first repeated
/// label, and the result records which path produced it.
pub fn duplicate_witness(g: &Dag, t: &ConditionTriple) -> Result<DuplicateWitness> {
    for (i, j) in g.edges() {
        if i > j {
            return Err(Error::NotIncreasing(i, j));
        }
    }
    validate_triple(g, t)?;
    let (first_switch, second_switch) = construction_switch_sets(g, t);
    if let (Ok(first), Ok(second)) = (
        Reorientation::new(g.clone(), first_switch),
        Reorientation::new(g.clone(), second_switch),
    ) {
        let tau = first.label();
        if first != second && tau == second.label() {
            return Ok(DuplicateWitness {
                triple: *t,
                first,
                second,
                tau,
                constructed: true,
            });
        }
    }
    brute_force_witness(g, t)
}

fn brute_force_witness(g: &Dag, t: &ConditionTriple) -> Result<DuplicateWitness> {
    let reorientations = g.acyclic_reorientations();
    let labels: Vec<Label> = reorientations.iter().map(Reorientation::label).collect();
    let mut first_of: BTreeMap<&Label, usize> = BTreeMap::new();
    for (q, label) in labels.iter().enumerate() {
        if let Some(&p) = first_of.get(label) {
            return Ok(DuplicateWitness {
                triple: *t,
                first: reorientations[p].clone(),
                second: reorientations[q].clone(),
                tau: label.clone(),
                constructed: false,
            });
        }
        first_of.insert(label, q);
    }
    Err(Error::NoDuplicateLabel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ratio;

    fn dag(n: usize, edges: &[Edge]) -> Dag {
        Dag::new(n, edges.iter().copied()).unwrap()
    }

    fn label(values: &[usize]) -> Label {
        Label::new(values.to_vec())
    }

    fn example_graph() -> Dag {
        dag(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)])
    }

    #[test]
    fn common_point_small_cases() {
        assert_eq!(common_point(3), vec![rat(1), rat(0), rat(-1)]);
        assert_eq!(
            common_point(4),
            vec![ratio(3, 2), ratio(1, 2), ratio(-1, 2), ratio(-3, 2)]
        );
        assert_eq!(common_point(1), vec![rat(0)]);
    }

    #[test]
    fn common_point_sums_to_zero_with_unit_gaps() {
        for n in 1..=9 {
            let c = common_point(n);
            let total: Rat = c.iter().sum();
            assert_eq!(total, rat(0));
            for i in 0..n {
                for j in (i + 1)..n {
                    assert_eq!(&c[i] - &c[j], rat((j - i) as i64));
                }
            }
        }
    }

    #[test]
    fn central_arrangement_passes_through_common_point() {
        let g = dag(3, &[(1, 2), (1, 3), (2, 3)]);
        let arr = central_arrangement(&g).unwrap();
        assert_eq!(arr.hyperplane_count(), 3);
        assert_eq!(
            arr.common_point_witness(),
            Some(vec![rat(1), rat(0), rat(-1)])
        );
        let c = common_point(3);
        for h in arr.hyperplanes() {
            assert_eq!(&c[h.i() - 1] - &c[h.j() - 1], h.a().clone());
        }
        assert_eq!(Dag::try_from(arr.graph()).unwrap(), g);
    }

    #[test]
    fn central_arrangement_of_example_graph_is_concurrent() {
        let arr = central_arrangement(&example_graph()).unwrap();
        assert_eq!(arr.hyperplane_count(), 5);
        let c = arr.common_point_witness().unwrap();
        assert_eq!(
            c,
            vec![ratio(3, 2), ratio(1, 2), ratio(-1, 2), ratio(-3, 2)]
        );
    }

    #[test]
    fn central_arrangement_requires_increasing_edges() {
        let g = dag(3, &[(3, 1)]);
        assert_eq!(central_arrangement(&g), Err(Error::NotIncreasing(3, 1)));
        let empty = dag(2, &[]);
        assert!(central_arrangement(&empty).unwrap().is_empty());
    }

    #[test]
    fn labels_of_figure_one_reorientations() {
        let g = dag(3, &[(1, 2), (1, 3), (2, 3)]);
        let r = Reorientation::new(g.clone(), [(1, 2)]).unwrap();
        assert_eq!(r.label(), label(&[1, 0, 0]));
        let all = Reorientation::new(g.clone(), [(1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(all.label(), label(&[2, 1, 0]));
        let none = Reorientation::new(g, []).unwrap();
        assert_eq!(none.label(), label(&[0, 0, 0]));
    }

    #[test]
    fn figure_one_label_multiset_is_injective() {
        let g = dag(3, &[(1, 2), (1, 3), (2, 3)]);
        let ms = label_multiset(&g);
        assert_eq!(ms.len(), 6);
        assert!(!ms.has_duplicates());
        let expected: BTreeSet<Label> = [
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![2, 0, 0],
            vec![2, 1, 0],
            vec![1, 1, 0],
            vec![0, 1, 0],
        ]
        .into_iter()
        .map(Label::new)
        .collect();
        assert_eq!(ms.distinct(), expected);
    }

    #[test]
    fn example_label_multiset_has_exactly_six_duplicates() {
        let ms = label_multiset(&example_graph());
        assert_eq!(ms.len(), 18);
        let expected: Vec<Label> = [
            vec![0, 1, 0, 0],
            vec![1, 1, 0, 0],
            vec![1, 2, 0, 0],
            vec![2, 0, 0, 0],
            vec![2, 1, 0, 0],
            vec![3, 1, 0, 0],
        ]
        .into_iter()
        .map(Label::new)
        .collect();
        assert_eq!(ms.duplicated(), expected);
        // Each duplicate occurs exactly twice.
        for (label, count) in ms.counts() {
            assert!(count <= 2, "label {label} occurs {count} times");
        }
    }

    #[test]
    fn label_multiset_of_edgeless_graph() {
        let g = dag(3, &[]);
        let ms = label_multiset(&g);
        assert_eq!(ms.labels(), &[label(&[0, 0, 0])]);
    }

    #[test]
    fn multiset_agrees_with_reorientation_labels() {
        let g = example_graph();
        let from_masks = label_multiset(&g);
        let from_reorientations: Vec<Label> = g
            .acyclic_reorientations()
            .iter()
            .map(Reorientation::label)
            .collect();
        assert_eq!(from_masks.labels(), &from_reorientations[..]);
    }

    #[test]
    fn condition_triples_of_the_paper_graphs() {
        let fig1 = dag(3, &[(1, 2), (1, 3), (2, 3)]);
        assert!(find_condition_triples(&fig1).unwrap().is_empty());
        assert!(is_injective(&fig1));

        let ex = example_graph();
        assert_eq!(
            find_condition_triples(&ex).unwrap(),
            vec![ConditionTriple::new(1, 3, 4), ConditionTriple::new(2, 3, 4)]
        );
        assert!(!is_injective(&ex));

        let edgeless = dag(4, &[]);
        assert!(find_condition_triples(&edgeless).unwrap().is_empty());
        assert!(is_injective(&edgeless));
    }

    #[test]
    fn triple_search_requires_increasing_edges() {
        let g = dag(3, &[(2, 1)]);
        assert_eq!(
            find_condition_triples(&g),
            Err(Error::NotIncreasing(2, 1))
        );
        // is_injective normalizes internally instead.
        assert!(is_injective(&g));
    }

    #[test]
    fn witness_for_first_example_triple() {
        let g = example_graph();
        let w = duplicate_witness(&g, &ConditionTriple::new(1, 3, 4)).unwrap();
        assert!(w.constructed);
        assert_eq!(
            w.first.switched().iter().copied().collect::<Vec<_>>(),
            vec![(1, 2), (1, 3)]
        );
        assert_eq!(
            w.second.switched().iter().copied().collect::<Vec<_>>(),
            vec![(1, 2), (1, 4)]
        );
        assert_eq!(w.tau, label(&[2, 0, 0, 0]));
        assert_eq!(w.tau, ConditionTriple::new(1, 3, 4).predicted_label(4));
    }

    #[test]
    fn witness_for_second_example_triple() {
        let g = example_graph();
        let w = duplicate_witness(&g, &ConditionTriple::new(2, 3, 4)).unwrap();
        assert!(w.constructed);
        assert_eq!(
            w.first.switched().iter().copied().collect::<Vec<_>>(),
            vec![(2, 3)]
        );
        assert_eq!(
            w.second.switched().iter().copied().collect::<Vec<_>>(),
            vec![(2, 4)]
        );
        assert_eq!(w.tau, label(&[0, 1, 0, 0]));
    }

    #[test]
    fn witness_with_empty_shared_set() {
        // {k+1, ..., j-1} \ {i} is empty here, so only k -> i / k -> j flip.
        let g = dag(3, &[(1, 2), (1, 3)]);
        let t = ConditionTriple::new(1, 2, 3);
        let w = duplicate_witness(&g, &t).unwrap();
        assert!(w.constructed);
        assert_eq!(
            w.first.switched().iter().copied().collect::<Vec<_>>(),
            vec![(1, 2)]
        );
        assert_eq!(
            w.second.switched().iter().copied().collect::<Vec<_>>(),
            vec![(1, 3)]
        );
        assert_eq!(w.tau, label(&[1, 0, 0]));
        // Cross-check against the four reorientations directly.
        let ms = label_multiset(&g);
        assert_eq!(ms.len(), 4);
        assert_eq!(ms.duplicated(), vec![label(&[1, 0, 0])]);
    }

    #[test]
    fn witness_rejects_invalid_triples() {
        let g = example_graph();
        assert!(matches!(
            duplicate_witness(&g, &ConditionTriple::new(1, 2, 3)),
            Err(Error::InvalidTriple { .. })
        ));
        assert!(matches!(
            duplicate_witness(&g, &ConditionTriple::new(3, 1, 4)),
            Err(Error::InvalidTriple { .. })
        ));
    }

    #[test]
    fn witness_json_matches_interface() {
        let g = example_graph();
        let w = duplicate_witness(&g, &ConditionTriple::new(1, 3, 4)).unwrap();
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(
            text,
            r#"{"triple":[1,3,4],"first_switched":[[1,2],[1,3]],"second_switched":[[1,2],[1,4]],"tau":[2,0,0,0],"constructed":true}"#
        );
    }

    #[test]
    fn injectivity_formulations_agree_exhaustively() {
        // All increasing-edge digraphs on up to 4 vertices.
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
                let g = Dag::new(n, edges).unwrap();
                let by_triples = is_injective(&g);
                let by_multiset = !label_multiset(&g).has_duplicates();
                let by_neighborhoods = out_neighborhoods_pairwise_adjacent(&g);
                assert_eq!(by_triples, by_multiset, "graph {g:?}");
                assert_eq!(by_triples, by_neighborhoods, "graph {g:?}");
            }
        }
    }
}
