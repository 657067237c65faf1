//! Initial tour construction.
//!
//! Three steps, all sub-quadratic: pick a subset of cities as samples, insert
//! every remaining city after its closest sample, then run a windowed 2-opt
//! pass over spans of consecutive sample-to-sample sub-paths. At hierarchy
//! levels with forced edges, each forced path is treated as an atomic unit
//! throughout.

use rand::Rng;

use crate::error::{Error, Result};
use crate::grid::{GridIndex, MutableGrid};
use crate::model::{Instance, Tour, VertexId};
use crate::rng::SolverRng;
use crate::units::build_units;

/// Construction parameters, exposed as `--init-samples-exponent` and
/// `--init-window-subpaths` on the command line.
#[derive(Clone, Copy, Debug)]
pub struct InitConfig {
    /// Sample count is `ceil(U^samples_exponent)` over `U` atomic units.
    pub samples_exponent: f64,
    /// Each 2-opt window spans this many consecutive sub-paths.
    pub window_subpaths: usize,
}

impl Default for InitConfig {
    fn default() -> Self {
        InitConfig {
            samples_exponent: 2.0 / 3.0,
            window_subpaths: 3,
        }
    }
}

impl InitConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.samples_exponent > 0.0 && self.samples_exponent <= 1.0) {
            return Err(Error::contract(format!(
                "samples exponent must lie in (0, 1], got {}",
                self.samples_exponent
            )));
        }
        if self.window_subpaths < 1 {
            return Err(Error::contract("window must span at least one sub-path"));
        }
        Ok(())
    }
}

/// Builds a feasible tour containing every forced edge.
pub fn build_initial_tour(
    inst: &Instance,
    cfg: &InitConfig,
    rng: &mut SolverRng,
) -> Result<Tour> {
    cfg.validate()?;
    let units = build_units(inst);
    let u = units.len();

    if u <= 3 {
        let mut order = Vec::with_capacity(inst.n());
        for unit in &units.units {
            order.extend(unit.verts.iter().copied());
        }
        return Tour::new(inst, order);
    }

    // Step 1: sample ceil(U^e) distinct units.
    let sample_count = (u as f64)
        .powf(cfg.samples_exponent)
        .ceil()
        .min(u as f64) as usize;
    let sample_count = sample_count.max(1);
    let mut ids: Vec<usize> = (0..u).collect();
    for i in 0..sample_count {
        let j = rng.gen_range(i..u);
        ids.swap(i, j);
    }
    let samples = &ids[..sample_count];
    let mut is_sample = vec![false; u];
    for &s in samples {
        is_sample[s] = true;
    }

    // Order samples into a chain by repeated nearest-neighbor over heads.
    let heads: Vec<VertexId> = samples.iter().map(|&s| units.units[s].head()).collect();
    let sample_order: Vec<usize> = if sample_count == 1 {
        vec![samples[0]]
    } else {
        let mut grid = MutableGrid::build(inst, &heads);
        let mut order = Vec::with_capacity(sample_count);
        let start = units.units[samples[0]].head();
        let (sx, sy) = inst.coord(start);
        let first = grid.pop_nearest(inst, sx, sy).expect("nonempty grid");
        order.push(units.unit_of[first]);
        while grid.len() > 0 {
            let cur_head = units.units[*order.last().unwrap()].head();
            let (cx, cy) = inst.coord(cur_head);
            let next = grid.pop_nearest(inst, cx, cy).expect("members remain");
            order.push(units.unit_of[next]);
        }
        order
    };

    // Step 2: append every non-sample unit after its closest sample.
    let sample_index = GridIndex::build(inst, &heads)?;
    let mut slot_of_sample = vec![usize::MAX; u];
    for (slot, &s) in sample_order.iter().enumerate() {
        slot_of_sample[s] = slot;
    }
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); sample_count];
    for (unit_id, _) in is_sample.iter().enumerate().filter(|&(_, &s)| !s) {
        let head = units.units[unit_id].head();
        let nearest_head = sample_index
            .query_knn(head, 1)
            .into_iter()
            .next()
            .expect("sample set nonempty");
        let slot = slot_of_sample[units.unit_of[nearest_head]];
        buckets[slot].push(unit_id);
    }

    let mut order = Vec::with_capacity(inst.n());
    let mut boundaries = Vec::with_capacity(sample_count);
    for (slot, &s) in sample_order.iter().enumerate() {
        boundaries.push(order.len());
        order.extend(units.units[s].verts.iter().copied());
        for &unit_id in &buckets[slot] {
            order.extend(units.units[unit_id].verts.iter().copied());
        }
    }
    let mut tour = Tour::new(inst, order)?;

    // Step 3: one sweep of 2-opt windows, each spanning `window_subpaths`
    // consecutive sub-paths, stepped by one sub-path.
    let n = inst.n();
    let w = cfg.window_subpaths;
    if sample_count >= 2 {
        for i in 0..sample_count {
            let start = boundaries[i];
            let end = boundaries[(i + w) % sample_count];
            let len = if end > start {
                end - start + 1
            } else {
                n - start + end + 1
            };
            let len = len.min(n);
            if len >= 4 {
                two_opt_window(inst, &mut tour, start, len);
            }
        }
    }

    Ok(tour)
}

/// First-improvement 2-opt restricted to edge pairs inside the cyclic window
/// `[window_start, window_start + window_len)`, repeated until no improving
/// exchange remains in-window. Forced edges are never removed; the cost never
/// increases.
pub fn two_opt_window(inst: &Instance, tour: &mut Tour, window_start: usize, window_len: usize) {
    let n = tour.len();
    assert!(window_len >= 4 && window_len <= n, "window_len {window_len}");
    let has_forced = inst.has_forced_edges();
    fn at(tour: &Tour, window_start: usize, n: usize, t: usize) -> VertexId {
        let p = window_start + t;
        tour.at(if p >= n { p - n } else { p })
    }

    let edge_count = window_len - 1;
    let mut improved = true;
    while improved {
        improved = false;
        let mut i = 0;
        while i + 2 < edge_count {
            let mut a = at(tour, window_start, n, i);
            let mut b = at(tour, window_start, n, i + 1);
            let mut skip_i = has_forced && inst.is_forced(a, b);
            let mut d_ab = if skip_i { 0 } else { inst.edge_cost(a, b) };
            let mut j = i + 2;
            while !skip_i && j < edge_count {
                let c = at(tour, window_start, n, j);
                let d = at(tour, window_start, n, j + 1);
                if has_forced && inst.is_forced(c, d) {
                    j += 1;
                    continue;
                }
                let gain = d_ab + inst.edge_cost(c, d)
                    - inst.edge_cost(a, c)
                    - inst.edge_cost(b, d);
                if gain > 0 {
                    let from = window_start + i + 1;
                    let to = window_start + j;
                    tour.reverse_span(
                        if from >= n { from - n } else { from },
                        if to >= n { to - n } else { to },
                        -gain,
                    );
                    improved = true;
                    // Edge i changed; rescan its exchanges in place.
                    a = at(tour, window_start, n, i);
                    b = at(tour, window_start, n, i + 1);
                    skip_i = has_forced && inst.is_forced(a, b);
                    d_ab = if skip_i { 0 } else { inst.edge_cost(a, b) };
                    j = i + 2;
                    continue;
                }
                j += 1;
            }
            i += 1;
        }
    }
}

/// Number of atomic units, exposed for sizing decisions in callers.
pub fn unit_count(inst: &Instance) -> usize {
    build_units(inst).len()
}

#[allow(unused_imports)]
use crate::units::Unit as _UnitDoc; // keep rustdoc links resolvable
