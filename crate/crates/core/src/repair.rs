//! The repair operator: solve a bounded sub-problem without ever breaking a
//! temporarily fixed edge, then expand the sub-solution back into the parent
//! tour.
//!
//! The reference engine is an iterated local search over the contracted
//! cycle: each fixed path is a rigid unit with two ports, moves (2-opt,
//! Or-opt of one to three units, unit flips) are generated between units
//! only, and a double-bridge kick perturbs the unit order. Constraint
//! violation is impossible by construction rather than by rejection. Any
//! engine honoring the same contract can be slotted in behind
//! [`RepairEngine`].

use std::collections::VecDeque;

use rand::Rng;

use crate::destroy::SubProblem;
use crate::error::{Error, Result};
use crate::grid::GridIndex;
use crate::model::{Instance, Metric, Tour};
use crate::rng::SolverRng;
use crate::units::{build_units, unit_tour_of, vertex_tour_of, UnitTour, Units};

/// Pluggable repair engine selector (`--repair-engine`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RepairEngine {
    /// Reference iterated local search on the contracted cycle.
    Ils,
}

impl RepairEngine {
    pub fn parse(s: &str) -> Result<RepairEngine> {
        match s.to_ascii_lowercase().as_str() {
            "ils" => Ok(RepairEngine::Ils),
            other => Err(Error::contract(format!(
                "unknown repair engine '{other}' (expected: ils)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RepairEngine::Ils => "ils",
        }
    }

    /// Solves a sub-problem with this engine. All engines share the same
    /// contract: result contains every temp-fixed edge, costs no more than
    /// the warm start, deterministic per `(sub, budget, seed)`.
    pub fn solve(
        &self,
        sub: &SubProblem,
        budget: u64,
        rng: &mut SolverRng,
        warm_start: &Tour,
    ) -> Result<Tour> {
        match self {
            RepairEngine::Ils => solve_subproblem(sub, budget, rng, warm_start),
        }
    }
}

/// Repair parameters.
#[derive(Clone, Debug)]
pub struct RepairConfig {
    pub engine: RepairEngine,
    /// Move-evaluation quota per call, scaled by sub-problem size.
    pub budget_per_vertex: u64,
    /// Quota floor so tiny sub-problems still get a few restarts.
    pub min_budget: u64,
}

impl Default for RepairConfig {
    fn default() -> Self {
        RepairConfig {
            engine: RepairEngine::Ils,
            budget_per_vertex: 400,
            min_budget: 4_000,
        }
    }
}

impl RepairConfig {
    pub fn budget_for(&self, sub_n: usize) -> u64 {
        (self.budget_per_vertex * sub_n as u64).max(self.min_budget)
    }
}

/// Near-optimally solves a sub-problem. The result contains every temp-fixed
/// edge, never costs more than `warm_start`, and is a pure function of
/// `(sub, budget, seed)`.
pub fn solve_subproblem(
    sub: &SubProblem,
    budget: u64,
    rng: &mut SolverRng,
    warm_start: &Tour,
) -> Result<Tour> {
    let inst = sub.instance();
    if warm_start.len() != inst.n() {
        return Err(Error::contract(format!(
            "warm start has {} vertices, sub-problem has {}",
            warm_start.len(),
            inst.n()
        )));
    }
    let units = build_units(inst);
    // Also proves the warm start honors every temp-fixed edge.
    let warm_ut = unit_tour_of(&units, warm_start)?;

    if units.len() <= 3 {
        return best_orientation(inst, &units, &warm_ut);
    }

    let mut ils = Ils::new(inst, &units, &warm_ut, budget);
    debug_assert_eq!(ils.total_cost(), warm_start.cost());
    ils.run(rng);
    let tour = vertex_tour_of(inst, &units, &ils.best_unit_tour())?;
    debug_assert!(tour.cost() <= warm_start.cost());
    Ok(tour)
}

/// With at most three units the cyclic order is unique; enumerate unit
/// orientations directly.
fn best_orientation(inst: &Instance, units: &Units, warm: &UnitTour) -> Result<Tour> {
    let u = units.len();
    let mut best: Option<(i64, UnitTour)> = None;
    for combo in 0..(1u32 << u) {
        let mut ut = warm.clone();
        for (bit, unit) in ut.seq.clone().into_iter().enumerate() {
            ut.flipped[unit] = combo & (1 << bit) != 0;
        }
        let tour = vertex_tour_of(inst, units, &ut)?;
        let better = match &best {
            None => true,
            Some((c, _)) => tour.cost() < *c,
        };
        if better {
            best = Some((tour.cost(), ut));
        }
    }
    let (_, ut) = best.unwrap();
    vertex_tour_of(inst, units, &ut)
}

/// Expands a sub-solution into the parent tour by substituting every
/// temp-fixed edge with the parent segment it compresses. The returned cost
/// satisfies `cost(result) - cost(parent) = cost(sub_tour) - warm cost`
/// exactly.
pub fn expand_solution(sub: &SubProblem, sub_tour: &Tour, parent: &Tour) -> Result<Tour> {
    let inst = sub.instance();
    let n = parent.len();
    if sub_tour.len() != inst.n() {
        return Err(Error::contract("sub-tour size mismatch"));
    }
    if parent.cost() != sub.parent_cost {
        return Err(Error::contract(
            "parent tour differs from the one the sub-problem was built from",
        ));
    }
    for &(e, _) in sub.temp_fixed() {
        if !sub_tour.contains_edge(e) {
            return Err(Error::contract(format!(
                "sub-tour misses temp-fixed edge {e:?}"
            )));
        }
    }

    let sub_n = sub_tour.len();
    let mut order = Vec::with_capacity(n);
    for i in 0..sub_n {
        let a = sub_tour.at(i);
        let b = sub_tour.at(if i + 1 == sub_n { 0 } else { i + 1 });
        let e = crate::model::Edge::new(a, b);
        match sub.spans.binary_search_by_key(&e, |&(se, _)| se) {
            Ok(slot) => {
                let span = sub.spans[slot].1;
                let pa = sub.to_parent[a];
                // Emit the segment from a's side, excluding the b endpoint.
                if parent.at(span.start) == pa {
                    for k in 0..span.len - 1 {
                        order.push(parent.at((span.start + k) % n));
                    }
                } else {
                    debug_assert_eq!(parent.at((span.start + span.len - 1) % n), pa);
                    for k in (1..span.len).rev() {
                        order.push(parent.at((span.start + k) % n));
                    }
                }
            }
            Err(_) => order.push(sub.to_parent[a]),
        }
    }
    if order.len() != n {
        return Err(Error::contract(format!(
            "expansion produced {} vertices, expected {n}",
            order.len()
        )));
    }

    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    // Exact by the sub-problem cost model: segments keep their parent cost,
    // so the only difference is the sub-tour improvement.
    let cost = parent.cost() + (sub_tour.cost() - sub.warm_cost());
    Ok(Tour::from_raw_parts(order, pos, cost))
}

/// Contracted-cycle iterated local search.
struct Ils<'a> {
    metric: Metric,
    units: &'a Units,
    u: usize,
    head: Vec<(f64, f64)>,
    tail: Vec<(f64, f64)>,
    internal_total: i64,
    cand: Vec<Vec<u32>>,

    seq: Vec<u32>,
    upos: Vec<u32>,
    flip: Vec<bool>,
    conn_total: i64,

    best_seq: Vec<u32>,
    best_flip: Vec<bool>,
    best_conn: i64,

    queue: VecDeque<u32>,
    in_queue: Vec<bool>,
    evals: u64,
    budget: u64,
}

const CANDIDATES: usize = 8;
const ORRUN_MAX: usize = 3;

impl<'a> Ils<'a> {
    fn new(inst: &'a Instance, units: &'a Units, warm: &UnitTour, budget: u64) -> Ils<'a> {
        let u = units.len();
        let head: Vec<(f64, f64)> = units.units.iter().map(|x| inst.coord(x.head())).collect();
        let tail: Vec<(f64, f64)> = units.units.iter().map(|x| inst.coord(x.tail())).collect();
        let internal_total: i64 = units.units.iter().map(|x| x.internal_cost).sum();
        let cand = build_candidates(inst, units);

        let seq: Vec<u32> = warm.seq.iter().map(|&x| x as u32).collect();
        let mut upos = vec![0u32; u];
        for (i, &s) in seq.iter().enumerate() {
            upos[s as usize] = i as u32;
        }
        let flip = warm.flipped.clone();

        let mut ils = Ils {
            metric: inst.metric(),
            units,
            u,
            head,
            tail,
            internal_total,
            cand,
            seq,
            upos,
            flip,
            conn_total: 0,
            best_seq: Vec::new(),
            best_flip: Vec::new(),
            best_conn: 0,
            queue: VecDeque::with_capacity(u),
            in_queue: vec![false; u],
            evals: 0,
            budget,
        };
        ils.conn_total = ils.recompute_conn();
        ils.best_seq = ils.seq.clone();
        ils.best_flip = ils.flip.clone();
        ils.best_conn = ils.conn_total;
        ils
    }

    #[inline]
    fn entry(&self, unit: usize) -> (f64, f64) {
        if self.flip[unit] {
            self.tail[unit]
        } else {
            self.head[unit]
        }
    }

    #[inline]
    fn exit(&self, unit: usize) -> (f64, f64) {
        if self.flip[unit] {
            self.head[unit]
        } else {
            self.tail[unit]
        }
    }

    #[inline]
    fn port_cost(&self, a: (f64, f64), b: (f64, f64)) -> i64 {
        self.metric.cost(a, b)
    }

    /// Connection cost from the unit at position `p` to the next one.
    #[inline]
    fn conn_at(&self, p: usize) -> i64 {
        let a = self.seq[p] as usize;
        let b = self.seq[self.next_pos(p)] as usize;
        self.port_cost(self.exit(a), self.entry(b))
    }

    #[inline]
    fn next_pos(&self, p: usize) -> usize {
        if p + 1 == self.u {
            0
        } else {
            p + 1
        }
    }

    #[inline]
    fn prev_pos(&self, p: usize) -> usize {
        if p == 0 {
            self.u - 1
        } else {
            p - 1
        }
    }

    fn recompute_conn(&self) -> i64 {
        (0..self.u).map(|p| self.conn_at(p)).sum()
    }

    fn total_cost(&self) -> i64 {
        self.conn_total + self.internal_total
    }

    fn spent(&self) -> bool {
        self.evals >= self.budget
    }

    #[inline]
    fn charge(&mut self) {
        self.evals += 1;
    }

    fn enqueue(&mut self, unit: usize) {
        if !self.in_queue[unit] {
            self.in_queue[unit] = true;
            self.queue.push_back(unit as u32);
        }
    }

    fn enqueue_all(&mut self) {
        self.queue.clear();
        self.in_queue.iter_mut().for_each(|x| *x = false);
        for unit in 0..self.u {
            self.enqueue(unit);
        }
    }

    fn enqueue_around(&mut self, pos: usize) {
        let prev = self.prev_pos(pos);
        let next = self.next_pos(pos);
        for p in [prev, pos, next] {
            self.enqueue(self.seq[p] as usize);
        }
    }

    /// Reverses the cyclic arc of positions `from..=to`, flipping every unit
    /// inside it.
    fn reverse_arc(&mut self, from: usize, to: usize) {
        let len = (to + self.u - from) % self.u + 1;
        let mut i = from;
        let mut j = to;
        for _ in 0..len / 2 {
            self.seq.swap(i, j);
            let a = self.seq[i] as usize;
            let b = self.seq[j] as usize;
            self.upos[a] = i as u32;
            self.upos[b] = j as u32;
            self.flip[a] = !self.flip[a];
            self.flip[b] = !self.flip[b];
            i = self.next_pos(i);
            j = self.prev_pos(j);
        }
        if len % 2 == 1 {
            let mid = self.seq[i] as usize;
            self.flip[mid] = !self.flip[mid];
        }
    }

    /// 2-opt removing the edges that leave positions `p` and `q`.
    fn two_opt_gain(&mut self, p: usize, q: usize) -> i64 {
        self.charge();
        let a = self.seq[p] as usize;
        let b = self.seq[self.next_pos(p)] as usize;
        let c = self.seq[q] as usize;
        let d = self.seq[self.next_pos(q)] as usize;
        let old = self.port_cost(self.exit(a), self.entry(b))
            + self.port_cost(self.exit(c), self.entry(d));
        let new = self.port_cost(self.exit(a), self.exit(c))
            + self.port_cost(self.entry(b), self.entry(d));
        old - new
    }

    fn apply_two_opt(&mut self, p: usize, q: usize, gain: i64) {
        let span = (q + self.u - p) % self.u; // arc p+1..=q length
        if span * 2 <= self.u {
            self.reverse_arc(self.next_pos(p), q);
        } else {
            self.reverse_arc(self.next_pos(q), p);
        }
        self.conn_total -= gain;
        for pos in [p, self.next_pos(p), q, self.next_pos(q)] {
            self.enqueue_around(pos);
        }
    }

    /// One improving move involving `unit`, first-improvement. Returns true
    /// if a move was applied.
    fn try_improve(&mut self, unit: usize) -> bool {
        if self.spent() {
            return false;
        }
        let i = self.upos[unit] as usize;

        // Unit flip in place.
        if !self.units.units[unit].is_singleton() {
            self.charge();
            let prev = self.seq[self.prev_pos(i)] as usize;
            let next = self.seq[self.next_pos(i)] as usize;
            let old = self.port_cost(self.exit(prev), self.entry(unit))
                + self.port_cost(self.exit(unit), self.entry(next));
            let new = self.port_cost(self.exit(prev), self.exit(unit))
                + self.port_cost(self.entry(unit), self.entry(next));
            let gain = old - new;
            if gain > 0 {
                self.flip[unit] = !self.flip[unit];
                self.conn_total -= gain;
                self.enqueue_around(i);
                return true;
            }
        }

        // 2-opt, successor and predecessor families.
        for c in 0..self.cand[unit].len() {
            if self.spent() {
                return false;
            }
            let w = self.cand[unit][c] as usize;
            let j = self.upos[w] as usize;
            if i != j {
                let gain = self.two_opt_gain(i, j);
                if gain > 0 {
                    self.apply_two_opt(i, j, gain);
                    return true;
                }
            }
            let pi = self.prev_pos(i);
            let pj = self.prev_pos(j);
            if pi != pj {
                let gain = self.two_opt_gain(pi, pj);
                if gain > 0 {
                    self.apply_two_opt(pi, pj, gain);
                    return true;
                }
            }
        }

        // Or-opt: relocate the run of 1..=3 units starting at `unit`,
        // forward or reversed.
        if self.u >= 5 {
            for run in 1..=ORRUN_MAX.min(self.u - 3) {
                if self.try_or_opt(unit, run) {
                    return true;
                }
                if self.spent() {
                    return false;
                }
            }
        }

        // Reverse a short run in place (flips multi-vertex units).
        for run in 2..=ORRUN_MAX.min(self.u.saturating_sub(2)) {
            if self.try_reverse_run(unit, run) {
                return true;
            }
            if self.spent() {
                return false;
            }
        }

        false
    }

    fn try_or_opt(&mut self, unit: usize, run: usize) -> bool {
        let i = self.upos[unit] as usize;
        let i_last = (i + run - 1) % self.u;
        let before = self.prev_pos(i);
        let after = self.next_pos(i_last);
        let first = self.seq[i] as usize;
        let last = self.seq[i_last] as usize;
        let before_u = self.seq[before] as usize;
        let after_u = self.seq[after] as usize;

        let removed = self.port_cost(self.exit(before_u), self.entry(first))
            + self.port_cost(self.exit(last), self.entry(after_u));
        let closed = self.port_cost(self.exit(before_u), self.entry(after_u));

        for c in 0..self.cand[unit].len() {
            if self.spent() {
                return false;
            }
            let w = self.cand[unit][c] as usize;
            let j = self.upos[w] as usize;
            // Target edge (j, j+1) must lie outside the run and not be one of
            // the two edges already touching it.
            let offset = (j + self.u - i) % self.u;
            if offset < run || j == before {
                continue;
            }
            let jn = self.seq[self.next_pos(j)] as usize;
            for reversed in [false, true] {
                self.charge();
                let (en, ex) = if reversed {
                    (self.exit(last), self.entry(first))
                } else {
                    (self.entry(first), self.exit(last))
                };
                let added = self.port_cost(self.exit(w), en) + self.port_cost(ex, self.entry(jn));
                let old_target = self.port_cost(self.exit(w), self.entry(jn));
                let gain = removed + old_target - closed - added;
                if gain > 0 {
                    self.apply_or_opt(i, run, j, reversed);
                    self.conn_total -= gain;
                    return true;
                }
            }
        }
        false
    }

    fn apply_or_opt(&mut self, i: usize, run: usize, j: usize, reversed: bool) {
        // Materialize the new sequence; relocations are rare relative to
        // evaluations, so O(U) here is fine.
        let u = self.u;
        let mut chain = Vec::with_capacity(run);
        for k in 0..run {
            chain.push(self.seq[(i + k) % u]);
        }
        if reversed {
            chain.reverse();
            for &x in &chain {
                let x = x as usize;
                self.flip[x] = !self.flip[x];
            }
        }
        let mut rest = Vec::with_capacity(u - run);
        let mut p = (i + run) % u;
        while p != i {
            rest.push(self.seq[p]);
            p = self.next_pos(p);
        }
        // rest starts at the unit after the removed run; the target unit at
        // old position j sits somewhere inside.
        let jw = self.seq[j];
        let at = rest.iter().position(|&x| x == jw).unwrap();
        let mut new_seq = Vec::with_capacity(u);
        new_seq.extend_from_slice(&rest[..=at]);
        new_seq.extend_from_slice(&chain);
        new_seq.extend_from_slice(&rest[at + 1..]);
        self.seq = new_seq;
        for (p2, &x) in self.seq.iter().enumerate() {
            self.upos[x as usize] = p2 as u32;
        }
        for &x in &chain {
            self.enqueue(x as usize);
        }
        self.enqueue(jw as usize);
        self.enqueue(rest[0] as usize); // unit after the closed gap
        let back = self.upos[chain[0] as usize] as usize;
        self.enqueue_around(back);
        let gap = self.prev_pos(self.upos[rest[0] as usize] as usize);
        self.enqueue(self.seq[gap] as usize); // unit before the closed gap
    }

    fn try_reverse_run(&mut self, unit: usize, run: usize) -> bool {
        if self.u < run + 2 {
            return false;
        }
        self.charge();
        let i = self.upos[unit] as usize;
        let i_last = (i + run - 1) % self.u;
        let before = self.seq[self.prev_pos(i)] as usize;
        let after = self.seq[self.next_pos(i_last)] as usize;
        let first = self.seq[i] as usize;
        let last = self.seq[i_last] as usize;
        let old = self.port_cost(self.exit(before), self.entry(first))
            + self.port_cost(self.exit(last), self.entry(after));
        let new = self.port_cost(self.exit(before), self.exit(last))
            + self.port_cost(self.entry(first), self.entry(after));
        let gain = old - new;
        if gain > 0 {
            self.reverse_arc(i, i_last);
            self.conn_total -= gain;
            self.enqueue_around(i);
            self.enqueue_around(i_last);
            return true;
        }
        false
    }

    fn local_search(&mut self) {
        while let Some(unit) = self.queue.pop_front() {
            let unit = unit as usize;
            self.in_queue[unit] = false;
            while self.try_improve(unit) {
                if self.spent() {
                    return;
                }
            }
            if self.spent() {
                return;
            }
        }
    }

    fn double_bridge(&mut self, rng: &mut SolverRng) {
        debug_assert!(self.u >= 4);
        let mut cuts = [0usize; 3];
        loop {
            for c in &mut cuts {
                *c = rng.gen_range(1..self.u);
            }
            cuts.sort_unstable();
            if cuts[0] != cuts[1] && cuts[1] != cuts[2] {
                break;
            }
        }
        let (a, b, c) = (cuts[0], cuts[1], cuts[2]);
        let mut new_seq = Vec::with_capacity(self.u);
        new_seq.extend_from_slice(&self.seq[..a]);
        new_seq.extend_from_slice(&self.seq[b..c]);
        new_seq.extend_from_slice(&self.seq[a..b]);
        new_seq.extend_from_slice(&self.seq[c..]);
        self.seq = new_seq;
        for (p, &x) in self.seq.iter().enumerate() {
            self.upos[x as usize] = p as u32;
        }
        self.conn_total = self.recompute_conn();
        self.evals += self.u as u64;
    }

    fn snapshot_if_better(&mut self) {
        if self.conn_total < self.best_conn {
            self.best_conn = self.conn_total;
            self.best_seq.clone_from(&self.seq);
            self.best_flip.clone_from(&self.flip);
        }
    }

    fn restore_best(&mut self) {
        self.seq.clone_from(&self.best_seq);
        self.flip.clone_from(&self.best_flip);
        self.conn_total = self.best_conn;
        for (p, &x) in self.seq.iter().enumerate() {
            self.upos[x as usize] = p as u32;
        }
    }

    fn run(&mut self, rng: &mut SolverRng) {
        self.enqueue_all();
        self.local_search();
        self.snapshot_if_better();
        while !self.spent() {
            if self.conn_total > self.best_conn {
                self.restore_best();
            }
            self.double_bridge(rng);
            self.enqueue_all();
            self.local_search();
            self.snapshot_if_better();
        }
    }

    fn best_unit_tour(&self) -> UnitTour {
        UnitTour {
            seq: self.best_seq.iter().map(|&x| x as usize).collect(),
            flipped: self.best_flip.clone(),
        }
    }
}

/// Per-unit candidate lists: nearest units by port distance, ties by id.
fn build_candidates(inst: &Instance, units: &Units) -> Vec<Vec<u32>> {
    let u = units.len();
    let k = CANDIDATES.min(u.saturating_sub(1));
    let mut cand = Vec::with_capacity(u);
    if u <= 64 {
        for a in 0..u {
            let mut all: Vec<(f64, u32)> = (0..u)
                .filter(|&b| b != a)
                .map(|b| (unit_port_dist2(inst, units, a, b), b as u32))
                .collect();
            all.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            cand.push(all.into_iter().take(k).map(|(_, b)| b).collect());
        }
        return cand;
    }

    let idx = GridIndex::build_all(inst);
    for a in 0..u {
        let mut found: Vec<(f64, u32)> = Vec::new();
        let mut seen = vec![false; u];
        seen[a] = true;
        let unit = &units.units[a];
        let head = unit.head();
        let tail = unit.tail();
        for &port in &[head, tail] {
            let mut taken = 0;
            for (v, d2) in idx.nearest_iter(port) {
                let b = units.unit_of[v];
                if !seen[b] {
                    seen[b] = true;
                    found.push((d2, b as u32));
                }
                taken += 1;
                if taken >= 4 * k || found.len() >= 3 * k {
                    break;
                }
            }
            if head == tail {
                break;
            }
        }
        found.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        found.truncate(k);
        cand.push(found.into_iter().map(|(_, b)| b).collect());
    }
    cand
}

fn unit_port_dist2(inst: &Instance, units: &Units, a: usize, b: usize) -> f64 {
    let pa = [units.units[a].head(), units.units[a].tail()];
    let pb = [units.units[b].head(), units.units[b].tail()];
    let mut best = f64::INFINITY;
    for &x in &pa {
        for &y in &pb {
            best = best.min(inst.squared_dist(x, y));
        }
    }
    best
}
