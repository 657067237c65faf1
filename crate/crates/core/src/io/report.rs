//! Result reporting: per-run records, best/average summaries with gaps
//! against a reference cost, in machine-readable and aligned-table form.

use crate::hierarchy::RunStats;

/// One solver run.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub instance: String,
    pub seed: u64,
    pub cost: i64,
    pub seconds: f64,
    pub rounds: u64,
    pub levels: usize,
}

/// Gap against a reference, as a percentage: `(value - reference) / reference`.
pub fn gap_percent(value: f64, reference: i64) -> f64 {
    (value - reference as f64) / reference as f64 * 100.0
}

fn fmt_gap(g: Option<f64>) -> String {
    match g {
        Some(g) => format!("{g:.4}%"),
        None => "-".to_string(),
    }
}

/// Aggregated report over one or more runs.
#[derive(Clone, Debug)]
pub struct Report {
    pub records: Vec<RunRecord>,
    pub reference: Option<i64>,
    pub best_cost: i64,
    pub average_cost: f64,
    pub total_seconds: f64,
}

impl Report {
    pub fn best_gap(&self) -> Option<f64> {
        self.reference.map(|r| gap_percent(self.best_cost as f64, r))
    }

    pub fn average_gap(&self) -> Option<f64> {
        self.reference.map(|r| gap_percent(self.average_cost, r))
    }

    /// One `run ...` line per record plus a `summary ...` line, key=value.
    pub fn machine_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let gap = self.reference.map(|rf| gap_percent(r.cost as f64, rf));
            out.push_str(&format!(
                "run instance={} seed={} cost={} gap={} seconds={:.3} rounds={} levels={}\n",
                r.instance,
                r.seed,
                r.cost,
                fmt_gap(gap),
                r.seconds,
                r.rounds,
                r.levels
            ));
        }
        out.push_str(&format!(
            "summary runs={} best={} best_gap={} average={:.1} average_gap={} total_seconds={:.3}\n",
            self.records.len(),
            self.best_cost,
            fmt_gap(self.best_gap()),
            self.average_cost,
            fmt_gap(self.average_gap()),
            self.total_seconds
        ));
        out
    }

    /// Human-readable table: per-run rows, then Best / Average / Gap / Time.
    pub fn table_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<16} {:>6} {:>14} {:>10} {:>10} {:>8} {:>7}\n",
            "Instance", "Seed", "Cost", "Gap", "Time(s)", "Rounds", "Levels"
        ));
        for r in &self.records {
            let gap = self.reference.map(|rf| gap_percent(r.cost as f64, rf));
            out.push_str(&format!(
                "{:<16} {:>6} {:>14} {:>10} {:>10.1} {:>8} {:>7}\n",
                r.instance,
                r.seed,
                r.cost,
                fmt_gap(gap),
                r.seconds,
                r.rounds,
                r.levels
            ));
        }
        out.push_str(&format!(
            "Best {} (gap {}), Average {:.1} (gap {}), Total time {:.1}s\n",
            self.best_cost,
            fmt_gap(self.best_gap()),
            self.average_cost,
            fmt_gap(self.average_gap()),
            self.total_seconds
        ));
        out
    }
}

/// Builds the report; `reference` enables gap columns.
pub fn report_results(records: &[RunRecord], reference: Option<i64>) -> Report {
    assert!(!records.is_empty(), "report over zero runs");
    let best_cost = records.iter().map(|r| r.cost).min().unwrap();
    let average_cost = records.iter().map(|r| r.cost as f64).sum::<f64>() / records.len() as f64;
    let total_seconds = records.iter().map(|r| r.seconds).sum();
    Report {
        records: records.to_vec(),
        reference,
        best_cost,
        average_cost,
        total_seconds,
    }
}

/// Key=value rendering of one run's statistics, one line per level.
pub fn stats_text(
    instance: &str,
    seed: u64,
    stats: &RunStats,
    reference: Option<i64>,
) -> String {
    let mut out = String::new();
    let gap = reference.map(|r| gap_percent(stats.best_cost as f64, r));
    out.push_str(&format!(
        "solve instance={} seed={} cost={} gap={} seconds={:.3} rounds={} improvements={} \
         levels={} init_cost={} init_seconds={:.3} timed_out={}\n",
        instance,
        seed,
        stats.best_cost,
        fmt_gap(gap),
        stats.total_seconds,
        stats.total_rounds,
        stats.total_improvements,
        stats.levels_run(),
        stats.init_cost,
        stats.init_seconds,
        stats.timed_out
    ));
    for l in &stats.levels {
        out.push_str(&format!(
            "level index={} n={} rounds={} improvements={} fixed_edges={} best_cost={} seconds={:.3}\n",
            l.level, l.n, l.rounds, l.improvements, l.fixed_edges, l.best_cost, l.seconds
        ));
    }
    for &(secs, cost) in &stats.trajectory {
        out.push_str(&format!("best_at seconds={secs:.3} cost={cost}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(cost: i64) -> RunRecord {
        RunRecord {
            instance: "t".into(),
            seed: 1,
            cost,
            seconds: 1.0,
            rounds: 10,
            levels: 2,
        }
    }

    #[test]
    fn best_and_average_gaps() {
        let report = report_results(&[rec(100), rec(102)], Some(100));
        assert_eq!(report.best_cost, 100);
        assert_eq!(format!("{:.4}%", report.best_gap().unwrap()), "0.0000%");
        assert_eq!(format!("{:.4}%", report.average_gap().unwrap()), "1.0000%");
    }

    #[test]
    fn gaps_omitted_without_reference() {
        let report = report_results(&[rec(100)], None);
        assert!(report.best_gap().is_none());
        assert!(report.machine_text().contains("gap=-"));
    }

    #[test]
    fn benchmark_scale_gap_rounds_to_four_decimals() {
        let report = report_results(&[rec(71_868_057)], Some(71_865_826));
        assert_eq!(fmt_gap(report.best_gap()), "0.0031%");
    }

    #[test]
    fn table_has_one_row_per_run() {
        let report = report_results(&[rec(10), rec(11), rec(12)], None);
        let table = report.table_text();
        assert_eq!(table.lines().count(), 1 + 3 + 1);
    }
}
