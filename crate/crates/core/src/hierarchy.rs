//! The hierarchical search loop.
//!
//! Per level: run `k` independent destroy-and-repair local optimizations from
//! the level's initial tour, intersect their edge sets, permanently fix the
//! common edges, compress each fixed path to a single edge of equivalent
//! cost, and recurse on the smaller instance. Levels below the direct-solve
//! threshold are finished exactly (subset DP) or by one generous repair call.
//! Every compression is cost-exact, so a tour found at any level expands to a
//! level-0 tour of identical cost.

use std::time::{Duration, Instant};

use crate::destroy::{
    build_subproblem, pick_center, select_edges_to_delete, update_counters, SelectionCounters,
};
use crate::error::{Error, Result};
use crate::exact::{held_karp_instance, HELD_KARP_MAX};
use crate::grid::GridIndex;
use crate::init::{build_initial_tour, InitConfig};
use crate::model::{Edge, Instance, Tour, VertexId};
use crate::repair::{expand_solution, RepairConfig};
use crate::rng::{derive_rng, stream, SolverRng};

/// Solver hyperparameters. Defaults: `m` = 500 deleted edges, `k` = 10 local
/// optima per level, `l = n / 90` rounds per local optimization, direct solve
/// below 500 vertices.
#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Edges deleted per destroy operation.
    pub m: usize,
    /// Local optima per hierarchy level.
    pub k: usize,
    /// Rounds per local optimization are `max(1, ceil(n / l_divisor))`.
    pub l_divisor: usize,
    /// Levels smaller than this are solved directly.
    pub direct_solve_threshold: usize,
    /// Wall-clock budget in seconds; `None` runs to convergence.
    pub time_limit: Option<f64>,
    pub seed: u64,
    /// Worker threads for the `k` level runs (results are merge-order
    /// deterministic regardless).
    pub threads: usize,
    /// `false` gives the flat ablation variant: no edge is ever fixed, the
    /// batches restart from the best incumbent instead.
    pub hierarchy_enabled: bool,
    pub repair: RepairConfig,
    pub init: InitConfig,
    /// Per-vertex evaluation budget for the final direct solve of a level.
    pub direct_budget_per_vertex: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            m: 500,
            k: 10,
            l_divisor: 90,
            direct_solve_threshold: 500,
            time_limit: None,
            seed: 1,
            threads: 1,
            hierarchy_enabled: true,
            repair: RepairConfig::default(),
            init: InitConfig::default(),
            direct_budget_per_vertex: 2_000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::contract("m must be at least 2"));
        }
        if self.k < 1 {
            return Err(Error::contract("k must be at least 1"));
        }
        if self.l_divisor < 1 {
            return Err(Error::contract("l-divisor must be at least 1"));
        }
        if self.direct_solve_threshold < 4 {
            return Err(Error::contract("direct-solve threshold must be at least 4"));
        }
        if self.threads < 1 {
            return Err(Error::contract("threads must be at least 1"));
        }
        if let Some(t) = self.time_limit {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::contract("time limit must be a nonnegative number"));
            }
        }
        self.init.validate()
    }

    fn rounds_for(&self, n: usize) -> u64 {
        ((n.div_ceil(self.l_divisor)) as u64).max(1)
    }
}

/// Maps one compression level back to its parent.
#[derive(Clone, Debug)]
pub struct CompressionMap {
    to_parent: Vec<VertexId>,
    child_of: Vec<Option<VertexId>>,
    /// Child forced edge to the parent path it replaces (endpoints included,
    /// ordered from the edge's `u` side), sorted by edge.
    paths: Vec<(Edge, Vec<VertexId>)>,
}

impl CompressionMap {
    pub fn identity(n: usize) -> CompressionMap {
        CompressionMap {
            to_parent: (0..n).collect(),
            child_of: (0..n).map(Some).collect(),
            paths: Vec::new(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.paths.is_empty() && self.to_parent.len() == self.child_of.len()
    }

    pub fn child_n(&self) -> usize {
        self.to_parent.len()
    }

    pub fn parent_n(&self) -> usize {
        self.child_of.len()
    }

    pub fn to_parent(&self, child: VertexId) -> VertexId {
        self.to_parent[child]
    }

    pub fn child_of(&self, parent: VertexId) -> Option<VertexId> {
        self.child_of[parent]
    }

    pub fn path_for(&self, e: Edge) -> Option<&[VertexId]> {
        self.paths
            .binary_search_by_key(&e, |&(pe, _)| pe)
            .ok()
            .map(|i| self.paths[i].1.as_slice())
    }

    pub fn paths(&self) -> impl Iterator<Item = (Edge, &[VertexId])> {
        self.paths.iter().map(|(e, p)| (*e, p.as_slice()))
    }
}

/// Progress counters for one hierarchy level (or one flat batch).
#[derive(Clone, Debug)]
pub struct LevelStats {
    pub level: usize,
    pub n: usize,
    pub rounds: u64,
    pub improvements: u64,
    pub fixed_edges: usize,
    pub best_cost: i64,
    pub seconds: f64,
}

/// Whole-run statistics.
#[derive(Clone, Debug, Default)]
pub struct RunStats {
    pub levels: Vec<LevelStats>,
    pub init_cost: i64,
    pub init_seconds: f64,
    /// Total destroy-and-repair rounds across all levels and runs.
    pub total_rounds: u64,
    pub total_improvements: u64,
    pub best_cost: i64,
    /// `(seconds, cost)` at each global-best improvement; costs are strictly
    /// decreasing. Timestamps are taken at deterministic merge points.
    pub trajectory: Vec<(f64, i64)>,
    pub timed_out: bool,
    pub total_seconds: f64,
}

impl RunStats {
    pub fn levels_run(&self) -> usize {
        self.levels.len()
    }
}

/// Outcome of one local optimization run.
#[derive(Clone, Debug)]
pub struct LocalOptOutcome {
    pub tour: Tour,
    pub rounds: u64,
    pub improvements: u64,
    /// The level had fewer than two deletable edges left.
    pub saturated: bool,
    /// `(round, cost)` per accepted improvement, in round order.
    pub events: Vec<(u64, i64)>,
}

/// Runs `l` destroy-and-repair rounds (or until the deadline), accepting a
/// candidate only when strictly cheaper. The incumbent never worsens.
pub fn run_local_opt(
    inst: &Instance,
    idx: &GridIndex<'_>,
    start: &Tour,
    l: u64,
    cfg: &SolverConfig,
    rng: &mut SolverRng,
    deadline: Option<Instant>,
) -> Result<LocalOptOutcome> {
    let mut incumbent = start.clone();
    let mut counters = SelectionCounters::new(inst.n());
    let mut outcome = LocalOptOutcome {
        tour: start.clone(),
        rounds: 0,
        improvements: 0,
        saturated: false,
        events: Vec::new(),
    };

    for round in 0..l {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        let center = pick_center(&counters, rng);
        let deleted = match select_edges_to_delete(inst, &incumbent, center, cfg.m, idx) {
            Ok(edges) => edges,
            Err(Error::DestroyInfeasible) => {
                outcome.saturated = true;
                break;
            }
            Err(e) => return Err(e),
        };
        let sub = build_subproblem(inst, &incumbent, &deleted)?;
        update_counters(&mut counters, &sub);
        let warm = sub.warm_start();
        let budget = cfg.repair.budget_for(sub.n());
        let candidate = cfg.repair.engine.solve(&sub, budget, rng, &warm)?;
        outcome.rounds += 1;
        if candidate.cost() < warm.cost() {
            incumbent = expand_solution(&sub, &candidate, &incumbent)?;
            outcome.improvements += 1;
            outcome.events.push((round, incumbent.cost()));
        }
    }
    outcome.tour = incumbent;
    Ok(outcome)
}

/// Intersection of the edge sets of `tours` (canonical edges, sorted). When
/// all tours are identical the full cycle would be returned; the
/// lexicographically largest edge is dropped so the result stays a set of
/// paths.
pub fn fix_common_edges(inst: &Instance, tours: &[Tour]) -> Result<Vec<Edge>> {
    if tours.is_empty() {
        return Err(Error::contract("need at least one tour to intersect"));
    }
    let n = inst.n();
    for t in tours {
        if t.len() != n {
            return Err(Error::contract(format!(
                "tour size {} does not match instance size {n}",
                t.len()
            )));
        }
    }
    let mut common: Vec<Edge> = tours[0]
        .edges()
        .filter(|e| tours[1..].iter().all(|t| t.contains_edge(*e)))
        .collect();
    common.sort_unstable();
    if common.len() == n {
        common.pop();
    }
    Ok(common)
}

/// Compresses every maximal path of `fixed` into a single forced edge of
/// equivalent cost, dropping path interiors. Returns the child instance and
/// the map back to the parent.
pub fn compress_instance(
    inst: &Instance,
    fixed: &[Edge],
    representative: &Tour,
) -> Result<(Instance, CompressionMap)> {
    let n = inst.n();
    if fixed.is_empty() {
        return Ok((inst.clone(), CompressionMap::identity(n)));
    }
    if fixed.len() >= n {
        return Err(Error::contract("fixed set cannot cover the whole cycle"));
    }
    for &(e, _) in inst.forced_edges() {
        if fixed.binary_search(&e).is_err() {
            return Err(Error::contract(format!(
                "fixed set misses already-forced edge {e:?}"
            )));
        }
    }

    // Mark which tour positions carry fixed edges.
    let mut fixed_pos = vec![false; n];
    for &e in fixed {
        let pu = representative.position(e.u());
        let pos = if representative.at((pu + 1) % n) == e.v() {
            pu
        } else {
            let pv = representative.position(e.v());
            if representative.at((pv + 1) % n) == e.u() {
                pv
            } else {
                return Err(Error::contract(format!(
                    "fixed edge {e:?} is not in the representative tour"
                )));
            }
        };
        fixed_pos[pos] = true;
    }

    // Interior vertices (both incident edges fixed) disappear.
    let mut survives = vec![true; n];
    for p in 0..n {
        let prev = if p == 0 { n - 1 } else { p - 1 };
        if fixed_pos[prev] && fixed_pos[p] {
            survives[representative.at(p)] = false;
        }
    }
    let mut child_of: Vec<Option<VertexId>> = vec![None; n];
    let mut to_parent = Vec::new();
    let mut coords = Vec::new();
    for v in 0..n {
        if survives[v] {
            child_of[v] = Some(to_parent.len());
            to_parent.push(v);
            coords.push(inst.coord(v));
        }
    }

    // Walk maximal runs of fixed positions to produce child forced edges.
    let mut forced = Vec::new();
    let mut paths = Vec::new();
    let mut p = 0;
    while p < n {
        if !fixed_pos[p] {
            p += 1;
            continue;
        }
        let prev = if p == 0 { n - 1 } else { p - 1 };
        if fixed_pos[prev] && p == 0 {
            // Run wraps around position 0; handled when reaching its start.
            p += 1;
            continue;
        }
        if fixed_pos[prev] {
            p += 1;
            continue;
        }
        // Run starts at p; extend while fixed.
        let mut len = 1;
        while fixed_pos[(p + len) % n] && len < n {
            len += 1;
        }
        let head = representative.at(p);
        let tail = representative.at((p + len) % n);
        let mut cost = 0i64;
        let mut path = Vec::with_capacity(len + 1);
        for k in 0..len {
            let a = representative.at((p + k) % n);
            let b = representative.at((p + k + 1) % n);
            cost += inst.edge_cost(a, b);
            path.push(a);
        }
        path.push(tail);
        let (cu, cv) = (child_of[head].unwrap(), child_of[tail].unwrap());
        let e = Edge::new(cu, cv);
        if path[0] != to_parent[e.u()] {
            path.reverse();
        }
        forced.push((e, cost));
        paths.push((e, path));
        p += len;
    }
    paths.sort_unstable_by_key(|&(e, _)| e);

    let child = Instance::with_forced(coords, inst.metric(), forced, inst.level() + 1)?;
    Ok((
        child,
        CompressionMap {
            to_parent,
            child_of,
            paths,
        },
    ))
}

/// Image of a parent tour in the child instance: surviving vertices in
/// parent order. The parent tour must contain every fixed path contiguously
/// (true for any tour sharing the intersection that produced the child).
pub fn project_tour(child: &Instance, map: &CompressionMap, parent_tour: &Tour) -> Result<Tour> {
    let mut order = Vec::with_capacity(child.n());
    for i in 0..parent_tour.len() {
        if let Some(c) = map.child_of(parent_tour.at(i)) {
            order.push(c);
        }
    }
    Tour::new(child, order)
}

/// Substitutes every child forced edge by its parent path; the parent cost
/// equals the child cost exactly.
pub fn expand_to_parent(
    child_tour: &Tour,
    map: &CompressionMap,
    parent_inst: &Instance,
) -> Result<Tour> {
    if map.is_identity() {
        return Ok(child_tour.clone());
    }
    let cn = child_tour.len();
    let mut order = Vec::with_capacity(parent_inst.n());
    for i in 0..cn {
        let a = child_tour.at(i);
        let b = child_tour.at(if i + 1 == cn { 0 } else { i + 1 });
        match map.path_for(Edge::new(a, b)) {
            Some(path) => {
                if path[0] == map.to_parent(a) {
                    order.extend_from_slice(&path[..path.len() - 1]);
                } else {
                    debug_assert_eq!(*path.last().unwrap(), map.to_parent(a));
                    order.extend(path[1..].iter().rev().copied());
                }
            }
            None => order.push(map.to_parent(a)),
        }
    }
    if order.len() != parent_inst.n() {
        return Err(Error::contract(format!(
            "expansion produced {} vertices, parent has {}",
            order.len(),
            parent_inst.n()
        )));
    }
    let tour = Tour::new(parent_inst, order)?;
    debug_assert_eq!(tour.cost(), child_tour.cost());
    Ok(tour)
}

struct Frame {
    map: CompressionMap,
    inst: Instance,
}

struct PassCtx<'a> {
    inst: &'a Instance,
    cfg: &'a SolverConfig,
    t0: Instant,
    deadline: Option<Instant>,
    /// Feeds the per-level stream tags; distinct per hierarchical pass.
    pass: usize,
    /// Monotone level counter across passes, for stats readability.
    level_counter: usize,
}

struct PassResult {
    /// Best tour of the pass, expanded to level 0.
    best: Tour,
    timed_out: bool,
}

/// Full pipeline: initial tour, then hierarchical destroy-and-repair passes
/// until the deadline elapses (or one pass, when no deadline is given).
pub fn hdr_solve(inst: &Instance, cfg: &SolverConfig) -> Result<(Tour, RunStats)> {
    cfg.validate()?;
    if inst.level() != 0 {
        return Err(Error::contract("hdr_solve expects a level-0 instance"));
    }
    let t0 = Instant::now();
    let deadline = cfg.time_limit.map(|s| t0 + Duration::from_secs_f64(s));
    let over = || deadline.is_some_and(|d| Instant::now() >= d);

    let mut stats = RunStats::default();
    let mut rng_init = derive_rng(cfg.seed, &[stream::INIT]);
    let init_tour = build_initial_tour(inst, &cfg.init, &mut rng_init)?;
    stats.init_cost = init_tour.cost();
    stats.init_seconds = t0.elapsed().as_secs_f64();
    stats.trajectory.push((stats.init_seconds, init_tour.cost()));

    let mut global_best = init_tour;
    let mut timed_out = over();
    let mut ctx = PassCtx {
        inst,
        cfg,
        t0,
        deadline,
        pass: 0,
        level_counter: 0,
    };

    while !timed_out {
        let result = run_pass(&mut ctx, &global_best, &mut stats)?;
        if result.best.cost() < global_best.cost() {
            global_best = result.best;
        }
        timed_out = result.timed_out || over();
        if timed_out {
            break;
        }
        if deadline.is_none() || !cfg.hierarchy_enabled {
            // Converged with no budget left to spend: a single pass without a
            // deadline, and the flat variant burns its budget internally.
            break;
        }
        ctx.pass += 1;
    }

    stats.best_cost = global_best.cost();
    stats.timed_out = timed_out;
    stats.total_seconds = t0.elapsed().as_secs_f64();
    debug_assert_eq!(stats.best_cost, stats.trajectory.last().unwrap().1);
    Ok((global_best, stats))
}

/// One hierarchical descent (or, for the flat variant, batches until the
/// deadline), starting from `start` at level 0.
fn run_pass(ctx: &mut PassCtx<'_>, start: &Tour, stats: &mut RunStats) -> Result<PassResult> {
    let cfg = ctx.cfg;
    let inst = ctx.inst;
    let over = || ctx.deadline.is_some_and(|d| Instant::now() >= d);

    let mut frames: Vec<Frame> = Vec::new();
    let mut best_level = 0usize;
    let mut best_tour = start.clone();
    let mut best_cost = start.cost();
    let mut global_best_cost = stats
        .trajectory
        .last()
        .map(|&(_, c)| c)
        .unwrap_or(best_cost);
    let mut cur_start = start.clone();
    let mut level_in_pass = 0usize;
    let mut timed_out = false;

    loop {
        if over() {
            timed_out = true;
            break;
        }
        let cinst: &Instance = frames.last().map(|f| &f.inst).unwrap_or(inst);
        let n_i = cinst.n();
        let level_begin = Instant::now();

        if n_i < cfg.direct_solve_threshold {
            let solved = direct_solve(cinst, &cur_start, cfg, ctx.pass, level_in_pass)?;
            let cost = solved.cost();
            if cost < best_cost {
                best_cost = cost;
                best_tour = solved.clone();
                best_level = frames.len();
            }
            if cost < global_best_cost {
                // The pass ends after a direct solve; no later reader of
                // global_best_cost exists on this path.
                stats
                    .trajectory
                    .push((ctx.t0.elapsed().as_secs_f64(), cost));
            }
            stats.levels.push(LevelStats {
                level: ctx.level_counter,
                n: n_i,
                rounds: 0,
                improvements: 0,
                fixed_edges: cinst.forced_edges().len(),
                best_cost: cost,
                seconds: level_begin.elapsed().as_secs_f64(),
            });
            ctx.level_counter += 1;
            break;
        }

        let l = cfg.rounds_for(n_i);
        let idx = GridIndex::build_all(cinst);
        let outcomes = run_level(
            cinst,
            &idx,
            &cur_start,
            l,
            cfg,
            ctx.pass,
            level_in_pass,
            ctx.deadline,
        )?;

        // Deterministic merge in run-index order.
        let mut level_best_idx = 0usize;
        for (i, o) in outcomes.iter().enumerate() {
            stats.total_rounds += o.rounds;
            stats.total_improvements += o.improvements;
            if o.tour.cost() < outcomes[level_best_idx].tour.cost() {
                level_best_idx = i;
            }
        }
        let now_secs = ctx.t0.elapsed().as_secs_f64();
        for o in &outcomes {
            for &(_, cost) in &o.events {
                if cost < global_best_cost {
                    global_best_cost = cost;
                    stats.trajectory.push((now_secs, cost));
                }
            }
        }
        let level_best = &outcomes[level_best_idx].tour;
        if level_best.cost() < best_cost {
            best_cost = level_best.cost();
            best_tour = level_best.clone();
            best_level = frames.len();
        } else if level_best.cost() == best_cost && best_level != frames.len() {
            // Prefer the deepest copy of an equal best; expansion is exact
            // either way.
            best_tour = level_best.clone();
            best_level = frames.len();
        }
        let level_rounds: u64 = outcomes.iter().map(|o| o.rounds).sum();
        let level_improvements: u64 = outcomes.iter().map(|o| o.improvements).sum();
        let saturated = outcomes.iter().all(|o| o.saturated);

        let mut fixed_count = 0usize;
        timed_out = over();
        let mut stop = timed_out || saturated;

        if !stop {
            if cfg.hierarchy_enabled {
                let tours: Vec<Tour> = outcomes.iter().map(|o| o.tour.clone()).collect();
                let fixed = fix_common_edges(cinst, &tours)?;
                fixed_count = fixed.len();
                if fixed.is_empty() || fixed.len() >= n_i - 1 {
                    // Nothing to compress, or the level is fully determined.
                    stop = true;
                } else {
                    let (child, map) = compress_instance(cinst, &fixed, level_best)?;
                    if child.n() >= n_i {
                        stop = true;
                    } else {
                        let image = project_tour(&child, &map, level_best)?;
                        stats.levels.push(LevelStats {
                            level: ctx.level_counter,
                            n: n_i,
                            rounds: level_rounds,
                            improvements: level_improvements,
                            fixed_edges: fixed_count,
                            best_cost: level_best.cost(),
                            seconds: level_begin.elapsed().as_secs_f64(),
                        });
                        ctx.level_counter += 1;
                        frames.push(Frame { map, inst: child });
                        cur_start = image;
                        level_in_pass += 1;
                        continue;
                    }
                }
            } else {
                // Flat variant: restart the next batch from the incumbent.
                stats.levels.push(LevelStats {
                    level: ctx.level_counter,
                    n: n_i,
                    rounds: level_rounds,
                    improvements: level_improvements,
                    fixed_edges: 0,
                    best_cost: level_best.cost(),
                    seconds: level_begin.elapsed().as_secs_f64(),
                });
                ctx.level_counter += 1;
                let improved = level_best.cost() < cur_start.cost();
                if improved {
                    cur_start = level_best.clone();
                } else if ctx.deadline.is_none() {
                    // Converged batch and no time budget to burn.
                    break;
                }
                level_in_pass += 1;
                continue;
            }
        }

        stats.levels.push(LevelStats {
            level: ctx.level_counter,
            n: n_i,
            rounds: level_rounds,
            improvements: level_improvements,
            fixed_edges: fixed_count,
            best_cost: level_best.cost(),
            seconds: level_begin.elapsed().as_secs_f64(),
        });
        ctx.level_counter += 1;
        if stop {
            break;
        }
    }

    // Expand the pass best down to level 0.
    let mut tour = best_tour;
    for j in (0..best_level).rev() {
        let parent_inst: &Instance = if j == 0 { inst } else { &frames[j - 1].inst };
        tour = expand_to_parent(&tour, &frames[j].map, parent_inst)?;
    }
    debug_assert_eq!(tour.cost(), best_cost);
    Ok(PassResult {
        best: tour,
        timed_out,
    })
}

/// Finishes a small level: exact DP when possible, otherwise one generous
/// repair call over the whole level.
fn direct_solve(
    cinst: &Instance,
    cur_start: &Tour,
    cfg: &SolverConfig,
    pass: usize,
    level_in_pass: usize,
) -> Result<Tour> {
    if cinst.n() <= HELD_KARP_MAX {
        let exact = held_karp_instance(cinst)?;
        return Ok(if exact.cost() <= cur_start.cost() {
            exact
        } else {
            cur_start.clone()
        });
    }
    let sub = crate::destroy::SubProblem::synthetic(cinst.clone(), cur_start.order().to_vec())?;
    let warm = sub.warm_start();
    let budget = cfg.direct_budget_per_vertex * cinst.n() as u64;
    let mut rng = derive_rng(
        cfg.seed,
        &[stream::DIRECT_SOLVE, pass as u64, level_in_pass as u64],
    );
    cfg.repair.engine.solve(&sub, budget, &mut rng, &warm)
}

/// Runs the `k` local optimizations of one level, optionally across threads.
/// Results are identical regardless of thread count: each run has its own
/// seed stream derived from `(seed, pass, level, run)` and outcomes are
/// collected by run index.
#[allow(clippy::too_many_arguments)]
fn run_level(
    cinst: &Instance,
    idx: &GridIndex<'_>,
    start: &Tour,
    l: u64,
    cfg: &SolverConfig,
    pass: usize,
    level_in_pass: usize,
    deadline: Option<Instant>,
) -> Result<Vec<LocalOptOutcome>> {
    let k = cfg.k;
    let run_one = |run: usize| -> Result<LocalOptOutcome> {
        let mut rng = derive_rng(
            cfg.seed,
            &[
                stream::LOCAL_OPT,
                pass as u64,
                level_in_pass as u64,
                run as u64,
            ],
        );
        run_local_opt(cinst, idx, start, l, cfg, &mut rng, deadline)
    };

    if cfg.threads <= 1 || k == 1 {
        return (0..k).map(run_one).collect();
    }

    let workers = cfg.threads.min(k);
    let mut slots: Vec<Option<Result<LocalOptOutcome>>> = (0..k).map(|_| None).collect();
    std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for w in 0..workers {
            let run_one = &run_one;
            handles.push(scope.spawn(move || {
                let mut mine = Vec::new();
                let mut run = w;
                while run < k {
                    mine.push((run, run_one(run)));
                    run += workers;
                }
                mine
            }));
        }
        for h in handles {
            for (run, res) in h.join().expect("level worker panicked") {
                slots[run] = Some(res);
            }
        }
    });
    slots
        .into_iter()
        .map(|s| s.expect("every run index is covered"))
        .collect()
}
