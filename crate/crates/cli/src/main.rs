//! `hdr` — solve, generate, validate, oracle and bench subcommands around the
//! hierarchical destroy-and-repair TSP solver.

use std::env;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use hdr_core::error::Error;
use hdr_core::hierarchy::{hdr_solve, SolverConfig};
use hdr_core::io::report::{gap_percent, report_results, stats_text, RunRecord};
use hdr_core::io::{
    generate_instance, parse_tour, parse_tsplib, write_tour, write_tsplib, InstanceKind,
};
use hdr_core::model::validate_tour;
use hdr_core::repair::RepairEngine;

mod flags;
use flags::Flags;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_FILE: u8 = 3;
pub const EXIT_VALIDATION: u8 = 4;
pub const EXIT_SIZE_LIMIT: u8 = 5;
pub const EXIT_INTERNAL: u8 = 6;

const USAGE: &str = "\
Usage: hdr <command> [options]

Commands:
  solve     --instance <path> [--time-limit <s>] [--m <n>] [--k <n>]
            [--l-divisor <n>] [--direct-threshold <n>] [--seed <n>]
            [--threads <n>] [--no-hierarchy] [--repair-engine <ils>]
            [--repair-budget <n>] [--repair-min-budget <n>]
            [--direct-budget <n>] [--init-samples-exponent <f>]
            [--init-window-subpaths <n>] [--out <path>] [--stats <path>]
            [--reference <cost>]
  generate  --kind <uniform|clustered> --n <count> [--square <side>]
            [--seed <n>] --out <path>
  validate  --instance <path> --tour <path>
  oracle    --instance <path> [--out <path>]   (at most 16 vertices)
  bench     --instance <path> [--runs <n>] [--time-limit <s>] [--seed <n>]
            [--reference <cost>] [--ablation] [--threads <n>]
            [solver options as for solve]

The default seed is 1, or the value of the HDR_SEED environment variable
when set. Exit codes: 0 ok, 2 usage, 3 file, 4 validation, 5 size limit,
6 internal.
";

fn main() -> ExitCode {
    let args: Vec<String> = env::args().skip(1).collect();
    match run(&args) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::MalformedFile(_) | Error::UnsupportedFormat(_) => EXIT_FILE,
        Error::SizeLimit(_) => EXIT_SIZE_LIMIT,
        Error::ContractViolation(_) | Error::InvalidInstance(_) => EXIT_USAGE,
        Error::DestroyInfeasible => EXIT_INTERNAL,
    }
}

fn run(args: &[String]) -> hdr_core::Result<u8> {
    let Some(cmd) = args.first() else {
        eprint!("{USAGE}");
        return Ok(EXIT_USAGE);
    };
    match cmd.as_str() {
        "solve" => cmd_solve(&args[1..]),
        "generate" => cmd_generate(&args[1..]),
        "validate" => cmd_validate(&args[1..]),
        "oracle" => cmd_oracle(&args[1..]),
        "bench" => cmd_bench(&args[1..]),
        "help" | "--help" | "-h" => {
            print!("{USAGE}");
            Ok(0)
        }
        other => {
            eprintln!("error: unknown command '{other}'\n");
            eprint!("{USAGE}");
            Ok(EXIT_USAGE)
        }
    }
}

fn default_seed() -> u64 {
    env::var("HDR_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1)
}

/// Solver options shared by `solve` and `bench`.
fn solver_config(f: &mut Flags) -> hdr_core::Result<SolverConfig> {
    let mut cfg = SolverConfig {
        seed: default_seed(),
        ..SolverConfig::default()
    };
    if let Some(v) = f.take_value("m")? {
        cfg.m = flags::parse(&v, "--m")?;
    }
    if let Some(v) = f.take_value("k")? {
        cfg.k = flags::parse(&v, "--k")?;
    }
    if let Some(v) = f.take_value("l-divisor")? {
        cfg.l_divisor = flags::parse(&v, "--l-divisor")?;
    }
    if let Some(v) = f.take_value("direct-threshold")? {
        cfg.direct_solve_threshold = flags::parse(&v, "--direct-threshold")?;
    }
    if let Some(v) = f.take_value("time-limit")? {
        cfg.time_limit = Some(flags::parse(&v, "--time-limit")?);
    }
    if let Some(v) = f.take_value("seed")? {
        cfg.seed = flags::parse(&v, "--seed")?;
    }
    if let Some(v) = f.take_value("threads")? {
        cfg.threads = flags::parse(&v, "--threads")?;
    }
    if f.take_switch("no-hierarchy") {
        cfg.hierarchy_enabled = false;
    }
    if let Some(v) = f.take_value("repair-engine")? {
        cfg.repair.engine = RepairEngine::parse(&v)?;
    }
    if let Some(v) = f.take_value("repair-budget")? {
        cfg.repair.budget_per_vertex = flags::parse(&v, "--repair-budget")?;
    }
    if let Some(v) = f.take_value("repair-min-budget")? {
        cfg.repair.min_budget = flags::parse(&v, "--repair-min-budget")?;
    }
    if let Some(v) = f.take_value("direct-budget")? {
        cfg.direct_budget_per_vertex = flags::parse(&v, "--direct-budget")?;
    }
    if let Some(v) = f.take_value("init-samples-exponent")? {
        cfg.init.samples_exponent = flags::parse(&v, "--init-samples-exponent")?;
    }
    if let Some(v) = f.take_value("init-window-subpaths")? {
        cfg.init.window_subpaths = flags::parse(&v, "--init-window-subpaths")?;
    }
    Ok(cfg)
}

fn instance_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".to_string())
}

fn cmd_solve(args: &[String]) -> hdr_core::Result<u8> {
    let mut f = Flags::new(args);
    let instance_path = PathBuf::from(f.require_value("instance")?);
    let cfg = solver_config(&mut f)?;
    let out_path = f
        .take_value("out")?
        .map(PathBuf::from)
        .unwrap_or_else(|| instance_path.with_extension("tour"));
    let stats_path = f
        .take_value("stats")?
        .map(PathBuf::from)
        .unwrap_or_else(|| instance_path.with_extension("stats"));
    let reference: Option<i64> = match f.take_value("reference")? {
        Some(v) => Some(flags::parse(&v, "--reference")?),
        None => None,
    };
    f.finish()?;
    cfg.validate()?;

    let inst = parse_tsplib(&instance_path)?;
    let name = instance_stem(&instance_path);
    println!("instance {} n={} metric={}", name, inst.n(), inst.metric().name());

    let (tour, stats) = hdr_solve(&inst, &cfg)?;

    // A solver bug would be the only way to get here with a bad tour; check
    // anyway and fail loudly rather than write a broken file.
    let report = validate_tour(&inst, &tour);
    if !report.is_feasible() {
        eprintln!("internal error: produced an infeasible tour:\n{report}");
        return Ok(EXIT_INTERNAL);
    }

    write_tour(&out_path, &tour, &name)?;
    std::fs::write(&stats_path, stats_text(&name, cfg.seed, &stats, reference))?;

    println!("cost {}", tour.cost());
    if let Some(r) = reference {
        println!("gap {:.4}%", gap_percent(tour.cost() as f64, r));
    }
    if stats.timed_out {
        println!("timed_out true");
    }
    println!("tour {}", out_path.display());
    println!("stats {}", stats_path.display());
    Ok(0)
}

fn cmd_generate(args: &[String]) -> hdr_core::Result<u8> {
    let mut f = Flags::new(args);
    let kind = InstanceKind::parse(&f.require_value("kind")?)?;
    let n: usize = flags::parse(&f.require_value("n")?, "--n")?;
    let square: u64 = match f.take_value("square")? {
        Some(v) => flags::parse(&v, "--square")?,
        None => 1_000_000,
    };
    let seed: u64 = match f.take_value("seed")? {
        Some(v) => flags::parse(&v, "--seed")?,
        None => default_seed(),
    };
    let out = PathBuf::from(f.require_value("out")?);
    f.finish()?;

    let inst = generate_instance(kind, n, square, seed)?;
    let name = format!("{}-n{}-s{}", kind.name(), n, seed);
    write_tsplib(&inst, &name, &out)?;
    println!("generated {} n={} square={} seed={}", out.display(), n, square, seed);
    Ok(0)
}

fn cmd_validate(args: &[String]) -> hdr_core::Result<u8> {
    let mut f = Flags::new(args);
    let instance_path = PathBuf::from(f.require_value("instance")?);
    let tour_path = PathBuf::from(f.require_value("tour")?);
    f.finish()?;

    let inst = parse_tsplib(&instance_path)?;
    let tour = parse_tour(&tour_path, &inst)?;
    let report = validate_tour(&inst, &tour);
    if report.is_feasible() {
        println!("feasible cost={}", tour.cost());
        Ok(0)
    } else {
        println!("infeasible:\n{report}");
        Ok(EXIT_VALIDATION)
    }
}

fn cmd_oracle(args: &[String]) -> hdr_core::Result<u8> {
    let mut f = Flags::new(args);
    let instance_path = PathBuf::from(f.require_value("instance")?);
    let out = f.take_value("out")?.map(PathBuf::from);
    f.finish()?;

    let inst = parse_tsplib(&instance_path)?;
    let tour = hdr_core::exact::held_karp_instance(&inst)?;
    println!("optimal {}", tour.cost());
    if let Some(path) = out {
        write_tour(&path, &tour, &instance_stem(&instance_path))?;
        println!("tour {}", path.display());
    }
    Ok(0)
}

fn cmd_bench(args: &[String]) -> hdr_core::Result<u8> {
    let mut f = Flags::new(args);
    let instance_path = PathBuf::from(f.require_value("instance")?);
    let runs: usize = match f.take_value("runs")? {
        Some(v) => flags::parse(&v, "--runs")?,
        None => 10,
    };
    let ablation = f.take_switch("ablation");
    let reference_flag: Option<i64> = match f.take_value("reference")? {
        Some(v) => Some(flags::parse(&v, "--reference")?),
        None => None,
    };
    let cfg = solver_config(&mut f)?;
    f.finish()?;
    cfg.validate()?;
    if runs == 0 {
        return Err(Error::contract("--runs must be at least 1"));
    }

    let inst = parse_tsplib(&instance_path)?;
    let name = instance_stem(&instance_path);
    println!(
        "bench instance={} n={} runs={} time_limit={:?} ablation={}",
        name,
        inst.n(),
        runs,
        cfg.time_limit,
        ablation
    );

    let run_batch = |hierarchy: bool| -> hdr_core::Result<Vec<RunRecord>> {
        let mut records = Vec::with_capacity(runs);
        for r in 0..runs {
            let mut run_cfg = cfg.clone();
            run_cfg.seed = cfg.seed + r as u64;
            run_cfg.hierarchy_enabled = hierarchy && cfg.hierarchy_enabled;
            let started = Instant::now();
            let (tour, stats) = hdr_solve(&inst, &run_cfg)?;
            records.push(RunRecord {
                instance: name.clone(),
                seed: run_cfg.seed,
                cost: tour.cost(),
                seconds: started.elapsed().as_secs_f64(),
                rounds: stats.total_rounds,
                levels: stats.levels_run(),
            });
        }
        Ok(records)
    };

    let standard = run_batch(true)?;
    if !ablation {
        let reference = reference_flag;
        let report = report_results(&standard, reference);
        print!("{}", report.table_text());
        print!("{}", report.machine_text());
        return Ok(0);
    }

    let flat = run_batch(false)?;
    // Reference for gaps: the explicit flag, else the best cost either
    // variant found.
    let best_seen = standard
        .iter()
        .chain(&flat)
        .map(|r| r.cost)
        .min()
        .expect("runs requested");
    let reference = reference_flag.or(Some(best_seen));
    let std_report = report_results(&standard, reference);
    let flat_report = report_results(&flat, reference);
    println!("standard:");
    print!("{}", std_report.table_text());
    print!("{}", std_report.machine_text());
    println!("no-hierarchy:");
    print!("{}", flat_report.table_text());
    print!("{}", flat_report.machine_text());

    let ratio = |flat_gap: Option<f64>, std_gap: Option<f64>| -> String {
        match (flat_gap, std_gap) {
            (Some(fg), Some(sg)) if sg > 0.0 => format!("{:.2}", fg / sg),
            (Some(fg), Some(_)) if fg > 0.0 => "inf".to_string(),
            (Some(_), Some(_)) => "1.00".to_string(),
            _ => "-".to_string(),
        }
    };
    println!(
        "ablation_ratio best={} average={}",
        ratio(flat_report.best_gap(), std_report.best_gap()),
        ratio(flat_report.average_gap(), std_report.average_gap()),
    );
    Ok(0)
}
