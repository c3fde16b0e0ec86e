//! Multigraphical arrangements as exact rational geometry.
//!
//! Every hyperplane has the form `x_i - x_j = a` with `a > 0`, living in the
//! sum-zero subspace `V` of R^n. Regions are enumerated as feasible sign
//! vectors (each hyperplane seen from the origin side, `Near`, or the far
//! side, `Far`) over the feasibility kernel in [`system`].

mod flats;
pub mod system;

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use flats::{Flat, LocalInjectivityReport, NonInjectiveFlat};
pub use system::{parse_rat, rat, ratio, Constraint, LinearSystem, Rat, Relation};

use crate::error::{Error, Result};
use crate::graph::{Dag, Edge, MultiDigraph, Reorientation};
use crate::parking::{g_parking_set, is_g_parking, Label};

/// The hyperplane `{x in V : x_i - x_j = a}` with `a > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperplane {
    i: usize,
    j: usize,
    a: Rat,
}

impl Hyperplane {
    pub fn new(i: usize, j: usize, a: Rat) -> Result<Self> {
        if i == j {
            return Err(Error::SelfLoop(i));
        }
        if !a.is_positive() {
            return Err(Error::NonPositiveConstant(a.to_string()));
        }
        Ok(Hyperplane { i, j, a })
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    /// The corresponding edge `i -> j` of the derived multigraph.
    pub fn edge(&self) -> Edge {
        (self.i, self.j)
    }

    /// Value of `x_i - x_j` at `point`.
    fn eval(&self, point: &[Rat]) -> Rat {
        &point[self.i - 1] - &point[self.j - 1]
    }

    /// Coefficient row of `x_i - x_j` over n variables.
    fn row(&self, n: usize) -> Vec<Rat> {
        let mut coeffs = vec![Rat::zero(); n];
        coeffs[self.i - 1] = rat(1);
        coeffs[self.j - 1] = rat(-1);
        coeffs
    }
}

#[derive(Serialize, Deserialize)]
struct HyperplaneRepr {
    i: usize,
    j: usize,
    a: RatRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RatRepr {
    Text(String),
    Int(i64),
}

impl Serialize for Hyperplane {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        HyperplaneRepr {
            i: self.i,
            j: self.j,
            a: RatRepr::Text(self.a.to_string()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Hyperplane {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = HyperplaneRepr::deserialize(deserializer)?;
        let a = match repr.a {
            RatRepr::Text(s) => parse_rat(&s).map_err(D::Error::custom)?,
            RatRepr::Int(v) => rat(v),
        };
        Hyperplane::new(repr.i, repr.j, a).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Which side of a hyperplane a region lies on, relative to the origin.
/// `Near` is the origin side (`x_i - x_j < a`), `Far` the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Near,
    Far,
}

/// A region of an arrangement: one side per hyperplane, together with an
/// interior witness point found during enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Region {
    signs: Vec<Side>,
    witness: Vec<Rat>,
}

impl Region {
    pub fn signs(&self) -> &[Side] {
        &self.signs
    }

    pub fn side(&self, k: usize) -> Side {
        self.signs[k]
    }

    pub fn witness(&self) -> &[Rat] {
        &self.witness
    }

    pub fn is_all_near(&self) -> bool {
        self.signs.iter().all(|&s| s == Side::Near)
    }
}

impl Serialize for Region {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            signs: &'a [Side],
            witness: Vec<String>,
        }
        Repr {
            signs: &self.signs,
            witness: self.witness.iter().map(|r| r.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

/// A finite set of hyperplanes `x_i - x_j = a` in the sum-zero subspace of
/// R^n. Hyperplanes keep their input order; `(i, j, a)` must be distinct,
/// while `(i, j, a)` and `(j, i, a)` may coexist (opposite sides of the
/// origin).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    n: usize,
    hyperplanes: Vec<Hyperplane>,
}

impl Arrangement {
    pub fn new(n: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for h in &hyperplanes {
            for v in [h.i, h.j] {
                if v < 1 || v > n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
            }
            if !seen.insert((h.i, h.j, h.a.clone())) {
                return Err(Error::DuplicateHyperplane {
                    i: h.i,
                    j: h.j,
                    a: h.a.to_string(),
                });
            }
        }
        Ok(Arrangement { n, hyperplanes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn hyperplane_count(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    fn sum_zero(&self) -> Constraint {
        Constraint::new(vec![rat(1); self.n], Relation::Eq, Rat::zero())
    }

    /// Constraint putting `x` on the given side of hyperplane `k`.
    fn side_constraint(&self, k: usize, side: Side, strict: bool) -> Constraint {
        let h = &self.hyperplanes[k];
        let rel = if strict { Relation::Lt } else { Relation::Le };
        match side {
            // x_i - x_j < a
            Side::Near => Constraint::new(h.row(self.n), rel, h.a.clone()),
            // x_i - x_j > a  <=>  -(x_i - x_j) < -a
            Side::Far => {
                let coeffs = h.row(self.n).into_iter().map(|c| -c).collect();
                Constraint::new(coeffs, rel, -&h.a)
            }
        }
    }

    /// Strict system of the first `signs.len()` hyperplanes inside `V`.
    fn open_system(&self, signs: &[Side]) -> LinearSystem {
        let mut system = LinearSystem::new(self.n);
        system.push(self.sum_zero());
        for (k, &side) in signs.iter().enumerate() {
            system.push(self.side_constraint(k, side, true));
        }
        system
    }

    fn check_region(&self, r: &Region) -> Result<()> {
        if r.signs.len() != self.hyperplanes.len() {
            return Err(Error::RegionMismatch {
                got: r.signs.len(),
                expected: self.hyperplanes.len(),
            });
        }
        Ok(())
    }

    /// Enumerates every region as a feasible sign vector, by incremental
    /// insertion: each new hyperplane splits the regions whose open system
    /// stays feasible on both sides. Regions inherit the insertion order,
    /// with the `Near` child before the `Far` child, so the output is
    /// deterministic. The witness point of the side already containing a
    /// region's witness is reused; only the opposite side costs a kernel
    /// call.
    pub fn regions(&self) -> Vec<Region> {
        let mut regions = vec![Region {
            signs: Vec::new(),
            witness: vec![Rat::zero(); self.n],
        }];
        for k in 0..self.hyperplanes.len() {
            let h = &self.hyperplanes[k];
            let mut next = Vec::with_capacity(regions.len() * 2);
            for r in &regions {
                let value = h.eval(&r.witness);
                let free = if value < h.a {
                    Some(Side::Near)
                } else if value > h.a {
                    Some(Side::Far)
                } else {
                    None
                };
                for side in [Side::Near, Side::Far] {
                    let mut signs = r.signs.clone();
                    signs.push(side);
                    if free == Some(side) {
                        next.push(Region {
                            signs,
                            witness: r.witness.clone(),
                        });
                    } else if let Some(witness) = self.open_system(&signs).feasible_point() {
                        next.push(Region { signs, witness });
                    }
                }
            }
            regions = next;
        }
        regions
    }

    /// The Pak-Stanley label of a region: `λ(i)` counts hyperplanes of the
    /// form `x_i - x_j = a` separating the region from the origin, i.e. the
    /// `Far` signs grouped by first index.
    pub fn region_label(&self, r: &Region) -> Label {
        assert_eq!(
            r.signs.len(),
            self.hyperplanes.len(),
            "region does not belong to this arrangement"
        );
        let mut values = vec![0usize; self.n];
        for (h, &side) in self.hyperplanes.iter().zip(&r.signs) {
            if side == Side::Far {
                values[h.i - 1] += 1;
            }
        }
        Label::new(values)
    }

    /// The derived multigraph: `m_ij` counts the distinct constants `a` with
    /// `x_i - x_j = a` in the arrangement.
    pub fn graph(&self) -> MultiDigraph {
        let mut mult: BTreeMap<Edge, usize> = BTreeMap::new();
        for h in &self.hyperplanes {
            *mult.entry(h.edge()).or_insert(0) += 1;
        }
        MultiDigraph::new(self.n, mult).expect("hyperplane endpoints were validated")
    }

    /// A point lying on every hyperplane (within `V`), when one exists.
    pub fn common_point_witness(&self) -> Option<Vec<Rat>> {
        let mut system = LinearSystem::new(self.n);
        system.push(self.sum_zero());
        for h in &self.hyperplanes {
            system.push(Constraint::new(h.row(self.n), Relation::Eq, h.a.clone()));
        }
        system.feasible_point()
    }

    pub fn is_central(&self) -> bool {
        self.common_point_witness().is_some()
    }

    /// For a central arrangement built from a simple acyclic digraph, maps a
    /// region to the acyclic reorientation switching exactly the edges whose
    /// hyperplane has sign `Far`; the all-`Near` region maps to the original
    /// orientation.
    pub fn reorientation_of_region(&self, r: &Region) -> Result<Reorientation> {
        self.check_region(r)?;
        if !self.is_central() {
            return Err(Error::NotCentral(
                "the hyperplanes have no common point".into(),
            ));
        }
        let dag = Dag::try_from(self.graph())
            .map_err(|e| Error::NotCentral(format!("derived multigraph: {e}")))?;
        let switched: Vec<Edge> = self
            .hyperplanes
            .iter()
            .zip(&r.signs)
            .filter(|(_, &side)| side == Side::Far)
            .map(|(h, _)| h.edge())
            .collect();
        Reorientation::new(dag, switched)
    }

    /// True iff the closed regions share a point: both sign systems with all
    /// strict inequalities weakened, jointly feasible inside `V`.
    pub fn closures_intersect(&self, r1: &Region, r2: &Region) -> Result<bool> {
        self.check_region(r1)?;
        self.check_region(r2)?;
        let mut system = LinearSystem::new(self.n);
        system.push(self.sum_zero());
        for (k, &side) in r1.signs.iter().enumerate() {
            system.push(self.side_constraint(k, side, false));
        }
        for (k, &side) in r2.signs.iter().enumerate() {
            system.push(self.side_constraint(k, side, false));
        }
        Ok(system.is_feasible())
    }

    /// Checks the two parking-function theorems on this arrangement: every
    /// region label is a G-parking function of the derived multigraph, and
    /// every G-parking function is attained by some region.
    pub fn verify_parking_theorems(&self) -> ParkingCheck {
        let graph = self.graph();
        let regions = self.regions();
        let labels: Vec<Label> = regions.iter().map(|r| self.region_label(r)).collect();
        let parking = g_parking_set(&graph);
        let non_parking: Vec<(usize, Label)> = labels
            .iter()
            .enumerate()
            .filter(|(_, label)| !is_g_parking(&graph, label).expect("label length matches"))
            .map(|(k, label)| (k, label.clone()))
            .collect();
        let attained: std::collections::BTreeSet<&Label> = labels.iter().collect();
        let unattained: Vec<Label> = parking
            .iter()
            .filter(|label| !attained.contains(label))
            .cloned()
            .collect();
        ParkingCheck {
            region_count: regions.len(),
            parking_count: parking.len(),
            non_parking,
            unattained,
        }
    }

    /// Groups regions by label and, for each label borne by at least two
    /// regions, reports whether the closures of the class form a connected
    /// graph under pairwise intersection. The closure of the union of closed
    /// convex regions is connected exactly when that graph is.
    pub fn duplicate_closure_report(&self) -> DuplicateClosureReport {
        let regions = self.regions();
        let mut by_label: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
        for (k, r) in regions.iter().enumerate() {
            by_label.entry(self.region_label(r)).or_default().push(k);
        }
        let mut classes = Vec::new();
        for (label, members) in by_label {
            if members.len() < 2 {
                continue;
            }
            let size = members.len();
            let mut touching_pair = false;
            let mut dsu: Vec<usize> = (0..size).collect();
            fn root(dsu: &mut Vec<usize>, mut x: usize) -> usize {
                while dsu[x] != x {
                    dsu[x] = dsu[dsu[x]];
                    x = dsu[x];
                }
                x
            }
            for p in 0..size {
                for q in (p + 1)..size {
                    let meet = self
                        .closures_intersect(&regions[members[p]], &regions[members[q]])
                        .expect("regions come from this arrangement");
                    if meet {
                        touching_pair = true;
                        let (a, b) = (root(&mut dsu, p), root(&mut dsu, q));
                        dsu[a] = b;
                    }
                }
            }
            let first = root(&mut dsu, 0);
            let connected = (0..size).all(|x| root(&mut dsu, x) == first);
            classes.push(DuplicateClass {
                label,
                regions: members,
                connected,
                touching_pair,
            });
        }
        DuplicateClosureReport {
            region_count: regions.len(),
            classes,
        }
    }

    /// Enumerates the nonempty flats of the arrangement and reports every
    /// flat whose subarrangement (the hyperplanes containing it) has a
    /// non-injective labeling, decided through the condition-triple
    /// criterion on its derived digraph.
    pub fn local_injectivity_scan(&self) -> LocalInjectivityReport {
        flats::local_injectivity_scan(self)
    }

    /// The distinct nonempty intersections of hyperplane subsets inside `V`.
    pub fn flats(&self) -> Vec<Flat> {
        flats::enumerate_flats(self)
    }
}

#[derive(Serialize, Deserialize)]
struct ArrangementRepr {
    n: usize,
    hyperplanes: Vec<Hyperplane>,
}

impl Serialize for Arrangement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ArrangementRepr {
            n: self.n,
            hyperplanes: self.hyperplanes.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Arrangement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ArrangementRepr::deserialize(deserializer)?;
        Arrangement::new(repr.n, repr.hyperplanes).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Outcome of checking the parking-function theorems on one arrangement.
#[derive(Debug, Clone, Serialize)]
pub struct ParkingCheck {
    pub region_count: usize,
    pub parking_count: usize,
    /// Regions whose label is not a G-parking function (theorem violation).
    pub non_parking: Vec<(usize, Label)>,
    /// G-parking functions not attained by any region (theorem violation).
    pub unattained: Vec<Label>,
}

impl ParkingCheck {
    pub fn passed(&self) -> bool {
        self.non_parking.is_empty() && self.unattained.is_empty()
    }
}

/// One label carried by two or more regions.
#[derive(Debug, Clone, Serialize)]
pub struct DuplicateClass {
    pub label: Label,
    /// Indices into the region enumeration order.
    pub regions: Vec<usize>,
    /// Whether the closures of the class regions form one connected piece.
    pub connected: bool,
    /// Whether at least one pair in the class has intersecting closures.
    pub touching_pair: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DuplicateClosureReport {
    pub region_count: usize,
    pub classes: Vec<DuplicateClass>,
}

impl DuplicateClosureReport {
    pub fn has_duplicates(&self) -> bool {
        !self.classes.is_empty()
    }

    pub fn all_connected(&self) -> bool {
        self.classes.iter().all(|c| c.connected)
    }

    /// Some pair of equal-labeled regions shares a boundary point.
    pub fn boundary_pair_exists(&self) -> bool {
        self.classes.iter().any(|c| c.touching_pair)
    }
}
