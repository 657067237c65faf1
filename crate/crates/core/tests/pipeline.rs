//! End-to-end pipeline properties: multi-level compression chains, solver
//! feasibility, and construction quality.

use hdr_core::exact::held_karp_instance;
use hdr_core::grid::GridIndex;
use hdr_core::hierarchy::{
    compress_instance, expand_to_parent, fix_common_edges, hdr_solve, project_tour,
    run_local_opt, SolverConfig,
};
use hdr_core::init::build_initial_tour;
use hdr_core::io::{generate_instance, InstanceKind};
use hdr_core::model::{validate_tour, Instance, Tour};
use hdr_core::rng::{derive_rng, stream};

fn uniform(n: usize, seed: u64) -> Instance {
    generate_instance(InstanceKind::Uniform, n, 100_000, seed).unwrap()
}

#[test]
fn three_stacked_compressions_preserve_cost() {
    let cfg = SolverConfig {
        m: 12,
        k: 3,
        l_divisor: 12,
        seed: 4,
        ..SolverConfig::default()
    };
    for seed in 0..5u64 {
        let inst = uniform(240, 50 + seed);
        let mut rng = derive_rng(seed, &[stream::INIT]);
        let start = build_initial_tour(&inst, &cfg.init, &mut rng).unwrap();

        // Manually run three levels, keeping the frame stack.
        let mut stack: Vec<(hdr_core::hierarchy::CompressionMap, Instance)> = Vec::new();
        let mut cur: Tour = start;
        for _level in 0..3 {
            let cinst = stack.last().map(|f| &f.1).unwrap_or(&inst);
            let idx = GridIndex::build_all(cinst);
            let mut tours = Vec::new();
            for run in 0..cfg.k {
                let mut r = derive_rng(seed, &[stream::LOCAL_OPT, run as u64]);
                let out = run_local_opt(cinst, &idx, &cur, 10, &cfg, &mut r, None).unwrap();
                tours.push(out.tour);
            }
            let fixed = fix_common_edges(cinst, &tours).unwrap();
            if fixed.is_empty() || fixed.len() >= cinst.n() - 1 {
                break;
            }
            let best = tours.iter().min_by_key(|t| t.cost()).unwrap().clone();
            let (child, map) = compress_instance(cinst, &fixed, &best).unwrap();
            if child.n() >= cinst.n() {
                break;
            }
            let image = project_tour(&child, &map, &best).unwrap();
            assert_eq!(image.cost(), best.cost());
            stack.push((map, child));
            cur = image;
        }

        // Expand back through the whole stack; cost must be preserved at
        // every step.
        let mut tour = cur;
        for j in (0..stack.len()).rev() {
            let parent: &Instance = if j == 0 { &inst } else { &stack[j - 1].1 };
            let expanded = expand_to_parent(&tour, &stack[j].0, parent).unwrap();
            assert_eq!(expanded.cost(), tour.cost(), "seed {seed} level {j}");
            tour = expanded;
        }
        let report = validate_tour(&inst, &tour);
        assert!(report.is_feasible(), "seed {seed}: {report}");
    }
}

#[test]
fn solver_output_is_feasible_across_kinds_and_sizes() {
    for (i, &(kind, n)) in [
        (InstanceKind::Uniform, 60),
        (InstanceKind::Clustered, 150),
        (InstanceKind::Uniform, 400),
        (InstanceKind::Clustered, 800),
    ]
    .iter()
    .enumerate()
    {
        let inst = generate_instance(kind, n, 1_000_000, 900 + i as u64).unwrap();
        let cfg = SolverConfig {
            m: 14,
            k: 3,
            l_divisor: 15,
            direct_solve_threshold: 12,
            seed: i as u64,
            ..SolverConfig::default()
        };
        let (tour, stats) = hdr_solve(&inst, &cfg).unwrap();
        let report = validate_tour(&inst, &tour);
        assert!(report.is_feasible(), "case {i}: {report}");
        assert!(tour.cost() <= stats.init_cost);
        assert_eq!(stats.best_cost, tour.cost());
    }
}

#[test]
fn small_instances_match_the_exact_optimum_through_the_pipeline() {
    // Force the full destroy/repair/fix/compress machinery (threshold below
    // n) and still demand the exact optimum on solvable sizes.
    let mut optimal = 0;
    let total = 25;
    for seed in 0..total {
        let inst = uniform(11, 300 + seed);
        let cfg = SolverConfig {
            m: 6,
            k: 8,
            l_divisor: 1,
            direct_solve_threshold: 4,
            seed,
            ..SolverConfig::default()
        };
        let (tour, _) = hdr_solve(&inst, &cfg).unwrap();
        let exact = held_karp_instance(&inst).unwrap();
        assert!(tour.cost() >= exact.cost(), "seed {seed}: below optimum");
        assert!(validate_tour(&inst, &tour).is_feasible());
        if tour.cost() == exact.cost() {
            optimal += 1;
        }
    }
    assert!(optimal >= 23, "only {optimal}/{total} optimal");
}

#[test]
fn local_opt_improves_sampled_insertion_starts() {
    // Sampled-insertion starts are far from locally optimal; a short run of
    // destroy-and-repair should strictly improve essentially always.
    let cfg = SolverConfig {
        m: 20,
        k: 1,
        seed: 0,
        ..SolverConfig::default()
    };
    let mut improved = 0;
    let total = 100;
    for seed in 0..total {
        let inst = uniform(1000, 1000 + seed);
        let idx = GridIndex::build_all(&inst);
        let mut rng = derive_rng(seed, &[stream::INIT]);
        let start = build_initial_tour(&inst, &cfg.init, &mut rng).unwrap();
        let mut r = derive_rng(seed, &[stream::LOCAL_OPT]);
        let out = run_local_opt(&inst, &idx, &start, 100, &cfg, &mut r, None).unwrap();
        assert!(out.tour.cost() <= start.cost());
        if out.tour.cost() < start.cost() {
            improved += 1;
        }
    }
    assert!(improved >= 99, "{improved}/{total} improved");
}

#[test]
fn initial_tour_lands_within_reach_of_the_solver() {
    // Construction quality check at a desk scale: the sampled-insertion +
    // windowed 2-opt tour is within 1.35x of what the full solver reaches on
    // the same instance with a modest budget.
    let inst = uniform(10_000, 77);
    let cfg = SolverConfig {
        time_limit: Some(30.0),
        seed: 7,
        ..SolverConfig::default()
    };
    let (tour, stats) = hdr_solve(&inst, &cfg).unwrap();
    assert!(validate_tour(&inst, &tour).is_feasible());
    let ratio = stats.init_cost as f64 / tour.cost() as f64;
    assert!(
        ratio <= 1.35,
        "init {} vs solved {} (ratio {ratio:.3})",
        stats.init_cost,
        tour.cost()
    );
}
