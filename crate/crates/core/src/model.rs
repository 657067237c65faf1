//! Instance and tour representations, distance semantics, cost accounting and
//! feasibility validation.
//!
//! Costs are 64-bit integers throughout: `Euc2d` rounds the Euclidean
//! distance to the nearest integer (half up), `Ceil2d` takes the ceiling.
//! Forced edges carry an explicit stored cost that overrides geometry; this is
//! what makes compressed instances cost-equivalent to their parents.

use std::fmt;

use crate::error::{Error, Result};

/// Vertex identifier, dense in `[0, n)`.
pub type VertexId = usize;

/// Smallest meaningful instance: a cycle needs three vertices.
pub const MIN_VERTICES: usize = 3;

/// Undirected edge stored canonically with `u() < v()`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    a: VertexId,
    b: VertexId,
}

impl Edge {
    /// Canonicalizes the endpoint order. Panics on a self-loop, which no code
    /// path constructs.
    pub fn new(u: VertexId, v: VertexId) -> Edge {
        assert!(u != v, "self-loop edge ({u}, {v})");
        if u < v {
            Edge { a: u, b: v }
        } else {
            Edge { a: v, b: u }
        }
    }

    pub fn u(&self) -> VertexId {
        self.a
    }

    pub fn v(&self) -> VertexId {
        self.b
    }

    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.a {
            self.b
        } else {
            self.a
        }
    }

    pub fn touches(&self, w: VertexId) -> bool {
        self.a == w || self.b == w
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// TSPLIB integer distance conventions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Metric {
    /// Nearest-integer rounding, half away from zero: `floor(d + 0.5)`.
    Euc2d,
    /// Ceiling of the Euclidean distance.
    Ceil2d,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::Euc2d => "EUC_2D",
            Metric::Ceil2d => "CEIL_2D",
        }
    }

    /// Integer cost between two points.
    #[inline]
    pub fn cost(&self, a: (f64, f64), b: (f64, f64)) -> i64 {
        let dx = a.0 - b.0;
        let dy = a.1 - b.1;
        let d = (dx * dx + dy * dy).sqrt();
        match self {
            Metric::Euc2d => (d + 0.5).floor() as i64,
            Metric::Ceil2d => d.ceil() as i64,
        }
    }
}

/// Up to two forced neighbors (and edge costs) per vertex.
type ForcedAdjacency = Vec<[Option<(VertexId, i64)>; 2]>;

/// A TSP instance: vertex coordinates, a distance convention and a set of
/// forced edges with explicit costs.
///
/// Forced edges must form vertex-disjoint simple paths. They appear at
/// hierarchy levels deeper than zero, where each one stands for a compressed
/// segment of the parent instance; `level` records that depth.
#[derive(Clone, Debug)]
pub struct Instance {
    coords: Vec<(f64, f64)>,
    metric: Metric,
    /// Sorted by edge; binary-searched on lookup, iterated in canonical order.
    forced: Vec<(Edge, i64)>,
    /// Per-vertex forced neighbors, at most two. Empty when `forced` is empty.
    forced_adj: ForcedAdjacency,
    level: u32,
}

impl Instance {
    /// A level-0 instance with no forced edges.
    pub fn new(coords: Vec<(f64, f64)>, metric: Metric) -> Result<Instance> {
        Instance::with_forced(coords, metric, Vec::new(), 0)
    }

    /// An instance with forced edges, typically produced by compression.
    pub fn with_forced(
        coords: Vec<(f64, f64)>,
        metric: Metric,
        mut forced: Vec<(Edge, i64)>,
        level: u32,
    ) -> Result<Instance> {
        let n = coords.len();
        if n < MIN_VERTICES {
            return Err(Error::invalid_instance(format!(
                "need at least {MIN_VERTICES} vertices, got {n}"
            )));
        }
        for (i, &(x, y)) in coords.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::invalid_instance(format!(
                    "vertex {i} has non-finite coordinates ({x}, {y})"
                )));
            }
        }
        forced.sort_unstable_by_key(|&(e, _)| e);
        let forced_adj = Instance::check_forced(n, &forced)?;
        Ok(Instance {
            coords,
            metric,
            forced,
            forced_adj,
            level,
        })
    }

    /// Validates that forced edges form vertex-disjoint simple paths and
    /// builds the adjacency table.
    fn check_forced(n: usize, forced: &[(Edge, i64)]) -> Result<ForcedAdjacency> {
        if forced.is_empty() {
            return Ok(Vec::new());
        }
        let mut adj: ForcedAdjacency = vec![[None, None]; n];
        for w in forced.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::invalid_instance(format!(
                    "duplicate forced edge {:?}",
                    w[0].0
                )));
            }
        }
        for &(e, cost) in forced {
            if e.v() >= n {
                return Err(Error::invalid_instance(format!(
                    "forced edge {e:?} out of range for n={n}"
                )));
            }
            if cost < 0 {
                return Err(Error::invalid_instance(format!(
                    "forced edge {e:?} has negative cost {cost}"
                )));
            }
            for (w, o) in [(e.u(), e.v()), (e.v(), e.u())] {
                let slots = &mut adj[w];
                let free = if slots[0].is_none() {
                    0
                } else if slots[1].is_none() {
                    1
                } else {
                    return Err(Error::invalid_instance(format!(
                        "vertex {w} has more than two forced edges"
                    )));
                };
                slots[free] = Some((o, cost));
            }
        }
        // Cycle check: paths only. Union-find over forced endpoints.
        let mut parent: Vec<VertexId> = (0..n).collect();
        fn find(parent: &mut [VertexId], mut x: VertexId) -> VertexId {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(e, _) in forced {
            let (ru, rv) = (find(&mut parent, e.u()), find(&mut parent, e.v()));
            if ru == rv {
                return Err(Error::invalid_instance(format!(
                    "forced edges contain a cycle through {:?}",
                    e
                )));
            }
            parent[ru] = rv;
        }
        Ok(adj)
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coord(&self, v: VertexId) -> (f64, f64) {
        self.coords[v]
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }

    /// Forced edges in canonical order.
    pub fn forced_edges(&self) -> &[(Edge, i64)] {
        &self.forced
    }

    pub fn has_forced_edges(&self) -> bool {
        !self.forced.is_empty()
    }

    /// Stored cost of a forced edge, if `(u, v)` is forced.
    #[inline]
    pub fn forced_cost(&self, u: VertexId, v: VertexId) -> Option<i64> {
        if self.forced.is_empty() {
            return None;
        }
        let e = Edge::new(u, v);
        self.forced
            .binary_search_by_key(&e, |&(fe, _)| fe)
            .ok()
            .map(|i| self.forced[i].1)
    }

    pub fn is_forced(&self, u: VertexId, v: VertexId) -> bool {
        self.forced_cost(u, v).is_some()
    }

    /// Forced neighbors of `v` with their edge costs (zero, one or two).
    pub fn forced_neighbors(&self, v: VertexId) -> impl Iterator<Item = (VertexId, i64)> + '_ {
        let slots = if self.forced_adj.is_empty() {
            &[None, None]
        } else {
            &self.forced_adj[v]
        };
        slots.iter().flatten().copied()
    }

    pub fn forced_degree(&self, v: VertexId) -> usize {
        if self.forced_adj.is_empty() {
            0
        } else {
            self.forced_adj[v].iter().flatten().count()
        }
    }

    /// Squared Euclidean distance on raw coordinates, no rounding.
    #[inline]
    pub fn squared_dist(&self, u: VertexId, v: VertexId) -> f64 {
        let (ax, ay) = self.coords[u];
        let (bx, by) = self.coords[v];
        let dx = ax - bx;
        let dy = ay - by;
        dx * dx + dy * dy
    }

    /// Integer edge cost: the stored cost for forced edges, the metric
    /// distance otherwise. Callers must pass distinct in-range vertices; use
    /// [`Instance::try_edge_cost`] for checked access.
    #[inline]
    pub fn edge_cost(&self, u: VertexId, v: VertexId) -> i64 {
        debug_assert!(u != v && u < self.n() && v < self.n());
        if let Some(cost) = self.forced_cost(u, v) {
            return cost;
        }
        self.metric.cost(self.coords[u], self.coords[v])
    }

    /// Checked variant of [`Instance::edge_cost`].
    pub fn try_edge_cost(&self, u: VertexId, v: VertexId) -> Result<i64> {
        if u >= self.n() || v >= self.n() {
            return Err(Error::contract(format!(
                "edge_cost: vertex out of range ({u}, {v}) for n={}",
                self.n()
            )));
        }
        if u == v {
            return Err(Error::contract(format!("edge_cost: self-loop ({u}, {u})")));
        }
        Ok(self.edge_cost(u, v))
    }
}

/// A Hamiltonian cycle with O(1) successor/predecessor and position lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tour {
    order: Vec<VertexId>,
    pos: Vec<usize>,
    cost: i64,
}

impl Tour {
    /// Builds a tour from a visiting order, validating that it is a
    /// permutation of `[0, n)` and computing its cost.
    pub fn new(inst: &Instance, order: Vec<VertexId>) -> Result<Tour> {
        let cost = tour_cost(inst, &order)?;
        let mut pos = vec![0; order.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        Ok(Tour { order, pos, cost })
    }

    /// Assembles a tour without any validation. Intended for tests that need
    /// deliberately inconsistent tours; regular construction goes through
    /// [`Tour::new`].
    pub fn from_raw_parts(order: Vec<VertexId>, pos: Vec<usize>, cost: i64) -> Tour {
        Tour { order, pos, cost }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn cost(&self) -> i64 {
        self.cost
    }

    pub fn order(&self) -> &[VertexId] {
        &self.order
    }

    /// Vertex at cyclic position `i` (callers pass `i < n`).
    #[inline]
    pub fn at(&self, i: usize) -> VertexId {
        self.order[i]
    }

    #[inline]
    pub fn position(&self, v: VertexId) -> usize {
        self.pos[v]
    }

    #[inline]
    pub fn successor(&self, v: VertexId) -> VertexId {
        let i = self.pos[v];
        self.order[if i + 1 == self.order.len() { 0 } else { i + 1 }]
    }

    #[inline]
    pub fn predecessor(&self, v: VertexId) -> VertexId {
        let i = self.pos[v];
        self.order[if i == 0 { self.order.len() - 1 } else { i - 1 }]
    }

    /// The tour edge leaving cyclic position `i`.
    #[inline]
    pub fn edge_at(&self, i: usize) -> Edge {
        let j = if i + 1 == self.order.len() { 0 } else { i + 1 };
        Edge::new(self.order[i], self.order[j])
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.order.len()).map(move |i| self.edge_at(i))
    }

    /// Whether `u` and `v` are adjacent in the cycle.
    #[inline]
    pub fn are_adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.successor(u) == v || self.predecessor(u) == v
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.are_adjacent(e.u(), e.v())
    }

    /// Recomputes the stored cost from scratch.
    pub fn recompute_cost(&self, inst: &Instance) -> i64 {
        cycle_cost(inst, &self.order)
    }

    /// Reverses the cyclic span `from..=to` (positions) in place and adjusts
    /// the stored cost by `delta`. Callers are responsible for `delta`
    /// matching the edge exchange they performed.
    pub(crate) fn reverse_span(&mut self, from: usize, to: usize, delta: i64) {
        let n = self.order.len();
        let span = if to >= from {
            to - from + 1
        } else {
            n - from + to + 1
        };
        let mut i = from;
        let mut j = to;
        for _ in 0..span / 2 {
            self.order.swap(i, j);
            self.pos[self.order[i]] = i;
            self.pos[self.order[j]] = j;
            i = if i + 1 == n { 0 } else { i + 1 };
            j = if j == 0 { n - 1 } else { j - 1 };
        }
        if span % 2 == 1 {
            self.pos[self.order[i]] = i;
        }
        self.cost += delta;
    }
}

/// Sum of edge costs around the cycle; assumes `order` is a valid permutation.
fn cycle_cost(inst: &Instance, order: &[VertexId]) -> i64 {
    let n = order.len();
    let mut cost = 0i64;
    for i in 0..n {
        let j = if i + 1 == n { 0 } else { i + 1 };
        cost += inst.edge_cost(order[i], order[j]);
    }
    cost
}

/// Cost of a visiting order, checking that it is a permutation of `[0, n)`.
pub fn tour_cost(inst: &Instance, order: &[VertexId]) -> Result<i64> {
    if order.len() != inst.n() {
        return Err(Error::contract(format!(
            "tour has {} vertices, instance has {}",
            order.len(),
            inst.n()
        )));
    }
    let mut seen = vec![false; inst.n()];
    for &v in order {
        if v >= inst.n() || seen[v] {
            return Err(Error::contract(format!(
                "order is not a permutation (offender: vertex {v})"
            )));
        }
        seen[v] = true;
    }
    Ok(cycle_cost(inst, order))
}

/// One violated tour condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValidationFlag {
    /// `order` is not a permutation of `[0, n)`.
    NotAPermutation,
    /// `pos[order[i]] != i` for some position.
    PositionMismatch,
    /// Stored cost differs from a fresh recompute.
    CostMismatch { stored: i64, recomputed: i64 },
    /// A forced edge is not an adjacency of the cycle.
    MissingForcedEdge(Edge),
}

impl fmt::Display for ValidationFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationFlag::NotAPermutation => write!(f, "order is not a permutation"),
            ValidationFlag::PositionMismatch => write!(f, "pos/order arrays disagree"),
            ValidationFlag::CostMismatch { stored, recomputed } => {
                write!(f, "stored cost {stored} != recomputed {recomputed}")
            }
            ValidationFlag::MissingForcedEdge(e) => {
                write!(f, "forced edge {e:?} missing from the cycle")
            }
        }
    }
}

/// Outcome of [`validate_tour`]; empty flag set means feasible.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub flags: Vec<ValidationFlag>,
}

impl ValidationReport {
    pub fn is_feasible(&self) -> bool {
        self.flags.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.flags.is_empty() {
            write!(f, "feasible")
        } else {
            for (i, flag) in self.flags.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "{flag}")?;
            }
            Ok(())
        }
    }
}

/// Checks a tour against its instance and reports every violated condition.
pub fn validate_tour(inst: &Instance, tour: &Tour) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = inst.n();
    let order = tour.order();

    let mut seen = vec![false; n];
    let mut permutation = order.len() == n;
    if permutation {
        for &v in order {
            if v >= n || seen[v] {
                permutation = false;
                break;
            }
            seen[v] = true;
        }
    }
    if !permutation {
        report.flags.push(ValidationFlag::NotAPermutation);
        // Remaining checks index by vertex id and would be meaningless.
        return report;
    }

    if order
        .iter()
        .enumerate()
        .any(|(i, &v)| tour.position(v) != i)
    {
        report.flags.push(ValidationFlag::PositionMismatch);
    }

    let recomputed = tour.recompute_cost(inst);
    if recomputed != tour.cost() {
        report.flags.push(ValidationFlag::CostMismatch {
            stored: tour.cost(),
            recomputed,
        });
    }

    for &(e, _) in inst.forced_edges() {
        let pu = tour.position(e.u());
        let pv = tour.position(e.v());
        let diff = pu.abs_diff(pv);
        if diff != 1 && diff != n - 1 {
            report.flags.push(ValidationFlag::MissingForcedEdge(e));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> Instance {
        Instance::new(
            vec![(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)],
            Metric::Euc2d,
        )
        .unwrap()
    }

    #[test]
    fn euc2d_rounds_half_up() {
        let inst = Instance::new(vec![(0.0, 0.0), (3.0, 4.0), (7.0, 7.0)], Metric::Euc2d).unwrap();
        assert_eq!(inst.edge_cost(0, 1), 5);
        let inst =
            Instance::new(vec![(1.0, 1.0), (2.0, 3.0), (9.0, 9.0)], Metric::Euc2d).unwrap();
        // nint(sqrt(5)) = nint(2.236) = 2
        assert_eq!(inst.edge_cost(0, 1), 2);
        // Exact half rounds up.
        let inst =
            Instance::new(vec![(0.0, 0.0), (0.0, 2.5), (5.0, 5.0)], Metric::Euc2d).unwrap();
        assert_eq!(inst.edge_cost(0, 1), 3);
    }

    #[test]
    fn ceil2d_takes_ceiling() {
        let inst =
            Instance::new(vec![(1.0, 1.0), (2.0, 3.0), (9.0, 9.0)], Metric::Ceil2d).unwrap();
        assert_eq!(inst.edge_cost(0, 1), 3);
        let inst = Instance::new(vec![(0.0, 0.0), (3.0, 4.0), (9.0, 9.0)], Metric::Ceil2d).unwrap();
        assert_eq!(inst.edge_cost(0, 1), 5);
    }

    #[test]
    fn forced_cost_overrides_geometry() {
        let coords: Vec<(f64, f64)> = (0..10).map(|i| (i as f64, 0.0)).collect();
        let inst =
            Instance::with_forced(coords, Metric::Euc2d, vec![(Edge::new(7, 9), 123)], 1).unwrap();
        assert_eq!(inst.edge_cost(7, 9), 123);
        assert_eq!(inst.edge_cost(9, 7), 123);
        assert_eq!(inst.edge_cost(6, 7), 1);
    }

    #[test]
    fn edge_cost_contract_errors() {
        let inst = unit_square();
        assert!(matches!(
            inst.try_edge_cost(0, 9),
            Err(Error::ContractViolation(_))
        ));
        assert!(matches!(
            inst.try_edge_cost(2, 2),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn metric_symmetry() {
        let inst = unit_square();
        for u in 0..4 {
            for v in 0..4 {
                if u != v {
                    assert_eq!(inst.edge_cost(u, v), inst.edge_cost(v, u));
                }
            }
        }
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(Instance::new(vec![(0.0, 0.0), (1.0, 1.0)], Metric::Euc2d).is_err());
        assert!(Instance::new(
            vec![(0.0, 0.0), (f64::NAN, 1.0), (2.0, 2.0)],
            Metric::Euc2d
        )
        .is_err());
    }

    #[test]
    fn rejects_forced_structure_violations() {
        let coords: Vec<(f64, f64)> = (0..6).map(|i| (i as f64, 0.0)).collect();
        // Degree three at vertex 1.
        let forced = vec![
            (Edge::new(0, 1), 1),
            (Edge::new(1, 2), 1),
            (Edge::new(1, 3), 1),
        ];
        assert!(Instance::with_forced(coords.clone(), Metric::Euc2d, forced, 1).is_err());
        // Forced cycle 0-1-2-0.
        let forced = vec![
            (Edge::new(0, 1), 1),
            (Edge::new(1, 2), 1),
            (Edge::new(0, 2), 1),
        ];
        assert!(Instance::with_forced(coords.clone(), Metric::Euc2d, forced, 1).is_err());
        // Negative cost.
        let forced = vec![(Edge::new(0, 1), -4)];
        assert!(Instance::with_forced(coords.clone(), Metric::Euc2d, forced, 1).is_err());
        // Duplicate edge.
        let forced = vec![(Edge::new(0, 1), 1), (Edge::new(1, 0), 2)];
        assert!(Instance::with_forced(coords, Metric::Euc2d, forced, 1).is_err());
    }

    #[test]
    fn square_perimeter_cost() {
        let inst = unit_square();
        let t = Tour::new(&inst, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(t.cost(), 4);
    }

    #[test]
    fn crossing_square_costs_four_under_rounding() {
        // Edges 1 + 1 + nint(sqrt 2) + nint(sqrt 2) = 1 + 1 + 1 + 1.
        let inst = unit_square();
        let t = Tour::new(&inst, vec![0, 2, 1, 3]).unwrap();
        assert_eq!(t.cost(), 4);
    }

    #[test]
    fn triangle_cost_is_orientation_independent() {
        let inst =
            Instance::new(vec![(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)], Metric::Euc2d).unwrap();
        let a = Tour::new(&inst, vec![0, 1, 2]).unwrap();
        let b = Tour::new(&inst, vec![0, 2, 1]).unwrap();
        assert_eq!(a.cost(), b.cost());
        assert_eq!(a.cost(), 3 + 5 + 4);
    }

    #[test]
    fn tour_cost_rejects_non_permutation() {
        let inst = unit_square();
        assert!(tour_cost(&inst, &[0, 1, 2, 2]).is_err());
        assert!(tour_cost(&inst, &[0, 1, 2]).is_err());
        assert!(tour_cost(&inst, &[0, 1, 2, 7]).is_err());
    }

    #[test]
    fn rotation_and_reversal_preserve_cost() {
        let coords: Vec<(f64, f64)> = vec![
            (0.0, 0.0),
            (13.0, 4.0),
            (7.0, 19.0),
            (2.0, 11.0),
            (17.0, 9.0),
            (5.0, 3.0),
        ];
        let inst = Instance::new(coords, Metric::Euc2d).unwrap();
        let order = vec![3, 0, 5, 1, 4, 2];
        let base = Tour::new(&inst, order.clone()).unwrap().cost();
        let mut rotated = order.clone();
        rotated.rotate_left(2);
        assert_eq!(Tour::new(&inst, rotated).unwrap().cost(), base);
        let mut reversed = order;
        reversed.reverse();
        assert_eq!(Tour::new(&inst, reversed).unwrap().cost(), base);
    }

    #[test]
    fn validate_accepts_valid_tour() {
        let inst = unit_square();
        let t = Tour::new(&inst, vec![0, 1, 2, 3]).unwrap();
        assert!(validate_tour(&inst, &t).is_feasible());
    }

    #[test]
    fn validate_flags_duplicate_vertex() {
        let inst = unit_square();
        let t = Tour::from_raw_parts(vec![0, 1, 1, 3], vec![0, 1, 2, 3], 4);
        let report = validate_tour(&inst, &t);
        assert_eq!(report.flags, vec![ValidationFlag::NotAPermutation]);
    }

    #[test]
    fn validate_flags_cost_and_position_tampering() {
        let inst = unit_square();
        let good = Tour::new(&inst, vec![0, 1, 2, 3]).unwrap();
        let bad = Tour::from_raw_parts(good.order().to_vec(), vec![0, 1, 3, 2], good.cost() + 1);
        let report = validate_tour(&inst, &bad);
        assert!(report
            .flags
            .iter()
            .any(|f| matches!(f, ValidationFlag::PositionMismatch)));
        assert!(report
            .flags
            .iter()
            .any(|f| matches!(f, ValidationFlag::CostMismatch { .. })));
    }

    #[test]
    fn validate_flags_missing_forced_edge() {
        let coords: Vec<(f64, f64)> = (0..6).map(|i| (i as f64, 0.0)).collect();
        let inst =
            Instance::with_forced(coords, Metric::Euc2d, vec![(Edge::new(2, 5), 3)], 1).unwrap();
        let t = Tour::new(&inst, vec![0, 1, 2, 3, 4, 5]).unwrap();
        let report = validate_tour(&inst, &t);
        assert_eq!(
            report.flags,
            vec![ValidationFlag::MissingForcedEdge(Edge::new(2, 5))]
        );
        let t = Tour::new(&inst, vec![0, 1, 3, 4, 2, 5]).unwrap();
        assert!(validate_tour(&inst, &t).is_feasible());
    }
}
