//! The destroy operator: pick a rarely-selected central vertex, delete the
//! `m` nearest non-fixed tour edges around it, and compress what remains into
//! a bounded sub-problem.
//!
//! Deleting `m` edges splits the cycle into at most `m` maximal segments.
//! Each multi-vertex segment is replaced by one temporarily fixed edge
//! between its endpoints whose cost equals the segment's total cost, so the
//! sub-problem has at most `2m` vertices and is exactly cost-equivalent.

use rand::Rng;

use crate::error::{Error, Result};
use crate::grid::GridIndex;
use crate::model::{Edge, Instance, Tour, VertexId};
use crate::rng::SolverRng;

/// Per-vertex selection counts; only ever incremented.
#[derive(Clone, Debug)]
pub struct SelectionCounters {
    counts: Vec<u64>,
}

impl SelectionCounters {
    pub fn new(n: usize) -> SelectionCounters {
        SelectionCounters {
            counts: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn count(&self, v: VertexId) -> u64 {
        self.counts[v]
    }

    pub fn increment(&mut self, v: VertexId) {
        self.counts[v] += 1;
    }
}

/// Uniformly random vertex among those with the minimum selection count.
pub fn pick_center(counters: &SelectionCounters, rng: &mut SolverRng) -> VertexId {
    assert!(!counters.is_empty(), "counters for an empty vertex set");
    let min = *counters.counts.iter().min().unwrap();
    let total = counters.counts.iter().filter(|&&c| c == min).count();
    let pick = rng.gen_range(0..total);
    counters
        .counts
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c == min)
        .nth(pick)
        .map(|(v, _)| v)
        .unwrap()
}

/// Selects up to `m` non-fixed tour edges nearest to `center`.
///
/// Vertices are enumerated by nondecreasing distance to the center (the
/// center itself first, then the index stream); each vertex contributes its
/// incident tour edges, predecessor side first. An edge's rank is therefore
/// the rank of its endpoint nearer to the center. If fewer than `m` non-fixed
/// edges exist they are all returned, but fewer than two is an error: the
/// level is saturated and cannot be destroyed.
pub fn select_edges_to_delete(
    inst: &Instance,
    tour: &Tour,
    center: VertexId,
    m: usize,
    idx: &GridIndex<'_>,
) -> Result<Vec<Edge>> {
    if m < 2 {
        return Err(Error::contract(format!("m must be at least 2, got {m}")));
    }
    let n = inst.n();
    let deletable = n - inst.forced_edges().len();
    if deletable < 2 {
        return Err(Error::DestroyInfeasible);
    }
    let target = m.min(deletable);

    let mut selected = Vec::with_capacity(target);
    let mut taken = vec![false; n]; // indexed by tour position of the edge
    let mut push_edges_of = |v: VertexId, out: &mut Vec<Edge>| {
        let p = tour.position(v);
        let pred_pos = if p == 0 { n - 1 } else { p - 1 };
        for pos in [pred_pos, p] {
            if out.len() >= target || taken[pos] {
                continue;
            }
            let e = tour.edge_at(pos);
            if inst.is_forced(e.u(), e.v()) {
                continue;
            }
            taken[pos] = true;
            out.push(e);
        }
    };

    push_edges_of(center, &mut selected);
    if selected.len() < target {
        for (v, _) in idx.nearest_iter(center) {
            push_edges_of(v, &mut selected);
            if selected.len() >= target {
                break;
            }
        }
    }
    Ok(selected)
}

/// Span of parent-tour positions covered by one compressed segment.
#[derive(Clone, Copy, Debug)]
pub(crate) struct SegSpan {
    /// Position of the segment head in the parent tour.
    pub start: usize,
    /// Number of vertices in the segment (at least 2).
    pub len: usize,
}

/// A compressed sub-problem with its mapping back to the parent tour.
#[derive(Clone, Debug)]
pub struct SubProblem {
    pub(crate) instance: Instance,
    pub(crate) to_parent: Vec<VertexId>,
    /// Temp-fixed sub-edge to the parent span it compresses, sorted by edge.
    pub(crate) spans: Vec<(Edge, SegSpan)>,
    pub(crate) warm_order: Vec<VertexId>,
    pub(crate) parent_cost: i64,
    pub(crate) deleted_cost: i64,
    pub(crate) deleted_count: usize,
}

impl SubProblem {
    pub fn n(&self) -> usize {
        self.instance.n()
    }

    /// The sub-instance; its forced edges are exactly the temp-fixed edges.
    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn temp_fixed(&self) -> &[(Edge, i64)] {
        self.instance.forced_edges()
    }

    pub fn to_parent(&self) -> &[VertexId] {
        &self.to_parent
    }

    pub fn deleted_count(&self) -> usize {
        self.deleted_count
    }

    pub fn parent_cost(&self) -> i64 {
        self.parent_cost
    }

    /// Total cost of the deleted parent edges.
    pub fn deleted_cost(&self) -> i64 {
        self.deleted_cost
    }

    /// Cost of the warm-start tour: temp-fixed costs plus deleted edges.
    pub fn warm_cost(&self) -> i64 {
        let fixed: i64 = self.temp_fixed().iter().map(|&(_, c)| c).sum();
        fixed + self.deleted_cost
    }

    /// The sub-tour inherited from the parent incumbent.
    pub fn warm_start(&self) -> Tour {
        Tour::new(&self.instance, self.warm_order.clone())
            .expect("warm order is a permutation by construction")
    }

    /// Parent vertex path compressed by temp-fixed edge `e`, ordered from
    /// `to_parent[e.u()]` to `to_parent[e.v()]`. Requires the same parent
    /// tour the sub-problem was built from.
    pub fn segment_path(&self, e: Edge, parent: &Tour) -> Option<Vec<VertexId>> {
        let span = self
            .spans
            .binary_search_by_key(&e, |&(se, _)| se)
            .ok()
            .map(|i| self.spans[i].1)?;
        let n = parent.len();
        let mut path = Vec::with_capacity(span.len);
        for k in 0..span.len {
            path.push(parent.at((span.start + k) % n));
        }
        if path[0] != self.to_parent[e.u()] {
            path.reverse();
        }
        debug_assert_eq!(path[0], self.to_parent[e.u()]);
        debug_assert_eq!(*path.last().unwrap(), self.to_parent[e.v()]);
        Some(path)
    }

    /// Wraps a whole instance as its own sub-problem (identity mapping), used
    /// to drive the repair engine over a full hierarchy level.
    pub fn synthetic(instance: Instance, warm_order: Vec<VertexId>) -> Result<SubProblem> {
        let warm = Tour::new(&instance, warm_order.clone())?;
        for &(e, _) in instance.forced_edges() {
            if !warm.contains_edge(e) {
                return Err(Error::contract(format!(
                    "warm start misses fixed edge {e:?}"
                )));
            }
        }
        let n = instance.n();
        let parent_cost = warm.cost();
        let fixed: i64 = instance.forced_edges().iter().map(|&(_, c)| c).sum();
        Ok(SubProblem {
            instance,
            to_parent: (0..n).collect(),
            spans: Vec::new(),
            warm_order,
            parent_cost,
            deleted_cost: parent_cost - fixed,
            deleted_count: n,
        })
    }
}

/// Splits the cycle along `deleted` and compresses the remaining segments.
pub fn build_subproblem(inst: &Instance, tour: &Tour, deleted: &[Edge]) -> Result<SubProblem> {
    let n = inst.n();
    if deleted.len() < 2 {
        return Err(Error::contract(
            "need at least two deleted edges to form a sub-problem",
        ));
    }

    // Locate each deleted edge as a tour position and reject non-tour or
    // fixed edges.
    let mut positions = Vec::with_capacity(deleted.len());
    for &e in deleted {
        if inst.is_forced(e.u(), e.v()) {
            return Err(Error::contract(format!("deleted edge {e:?} is fixed")));
        }
        let pu = tour.position(e.u());
        let pos = if tour.at((pu + 1) % n) == e.v() {
            pu
        } else {
            let pv = tour.position(e.v());
            if tour.at((pv + 1) % n) == e.u() {
                pv
            } else {
                return Err(Error::contract(format!("edge {e:?} is not in the tour")));
            }
        };
        positions.push(pos);
    }
    positions.sort_unstable();
    if positions.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::contract("duplicate edge in deletion set"));
    }

    let d = positions.len();
    let mut deleted_cost = 0i64;
    for &p in &positions {
        deleted_cost += inst.edge_cost(tour.at(p), tour.at((p + 1) % n));
    }

    // Walk the gaps between consecutive deleted positions. Sub-vertex ids are
    // assigned in parent cyclic order, so the inherited warm tour is the
    // identity permutation.
    let mut to_parent = Vec::new();
    let mut sub_coords = Vec::new();
    let mut temp_edges = Vec::new();
    let mut spans = Vec::new();
    let push_vertex = |v: VertexId, to_parent: &mut Vec<VertexId>,
                           coords: &mut Vec<(f64, f64)>| {
        let id = to_parent.len();
        to_parent.push(v);
        coords.push(inst.coord(v));
        id
    };
    for i in 0..d {
        let gap_start = (positions[i] + 1) % n;
        let gap_end = positions[(i + 1) % d];
        let len = (gap_end + n - positions[i]) % n;
        debug_assert!(len >= 1);
        if len == 1 {
            push_vertex(tour.at(gap_start), &mut to_parent, &mut sub_coords);
            continue;
        }
        let head = tour.at(gap_start);
        let tail = tour.at(gap_end);
        let mut seg_cost = 0i64;
        for k in 0..len - 1 {
            let a = tour.at((gap_start + k) % n);
            let b = tour.at((gap_start + k + 1) % n);
            seg_cost += inst.edge_cost(a, b);
        }
        let head_id = push_vertex(head, &mut to_parent, &mut sub_coords);
        let tail_id = push_vertex(tail, &mut to_parent, &mut sub_coords);
        let e = Edge::new(head_id, tail_id);
        temp_edges.push((e, seg_cost));
        spans.push((
            e,
            SegSpan {
                start: gap_start,
                len,
            },
        ));
    }
    spans.sort_unstable_by_key(|&(e, _)| e);

    let sub_n = to_parent.len();
    debug_assert!(sub_n <= 2 * d);
    let instance = Instance::with_forced(sub_coords, inst.metric(), temp_edges, inst.level())?;
    let warm_order: Vec<VertexId> = (0..sub_n).collect();
    Ok(SubProblem {
        instance,
        to_parent,
        spans,
        warm_order,
        parent_cost: tour.cost(),
        deleted_cost,
        deleted_count: d,
    })
}

/// Increments the counter of every parent vertex retained in the sub-problem.
pub fn update_counters(counters: &mut SelectionCounters, sub: &SubProblem) {
    for &v in &sub.to_parent {
        counters.increment(v);
    }
}
