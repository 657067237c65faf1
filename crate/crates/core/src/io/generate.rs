//! Benchmark-style instance generation: points uniform on a square, or
//! clustered around random centers.
//!
//! Coordinates are generated as integers so EUC_2D costs reproduce exactly
//! across platforms. The clustered generator is an approximation of the
//! classic clustered benchmark family (centers count and spread are not
//! standardized); exact benchmark comparisons must use downloaded files.

use crate::error::Result;
use crate::model::{Instance, Metric};
use crate::rng::{derive_rng, sample_standard_normal, stream};
use rand::Rng;

/// Point layout of a generated instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    /// i.i.d. uniform integer coordinates on `[0, square]^2`.
    Uniform,
    /// `ceil(n / 100)` uniform cluster centers; points assigned round-robin
    /// with isotropic Gaussian offsets of standard deviation `square / 100`,
    /// clamped to the square.
    Clustered,
}

impl InstanceKind {
    pub fn parse(s: &str) -> Result<InstanceKind> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" => Ok(InstanceKind::Uniform),
            "clustered" => Ok(InstanceKind::Clustered),
            other => Err(crate::error::Error::contract(format!(
                "unknown instance kind '{other}' (expected: uniform, clustered)"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            InstanceKind::Uniform => "uniform",
            InstanceKind::Clustered => "clustered",
        }
    }
}

/// Deterministic instance generation from `(kind, n, square, seed)`.
pub fn generate_instance(kind: InstanceKind, n: usize, square: u64, seed: u64) -> Result<Instance> {
    match kind {
        InstanceKind::Uniform => generate_uniform(n, square, seed),
        InstanceKind::Clustered => Ok(generate_clustered_detailed(n, square, seed)?.0),
    }
}

fn generate_uniform(n: usize, square: u64, seed: u64) -> Result<Instance> {
    let mut rng = derive_rng(seed, &[stream::GENERATE, 0]);
    let coords: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            (
                rng.gen_range(0..=square) as f64,
                rng.gen_range(0..=square) as f64,
            )
        })
        .collect();
    Instance::new(coords, Metric::Euc2d)
}

/// Instance plus per-point cluster assignment and the cluster centers.
pub type ClusteredInstance = (Instance, Vec<usize>, Vec<(f64, f64)>);

/// Clustered generation, also returning each point's cluster assignment and
/// the cluster centers (used by tests; the CLI only needs the instance).
pub fn generate_clustered_detailed(n: usize, square: u64, seed: u64) -> Result<ClusteredInstance> {
    let mut rng = derive_rng(seed, &[stream::GENERATE, 1]);
    let side = square as f64;
    let c = n.div_ceil(100).max(1);
    let centers: Vec<(f64, f64)> = (0..c)
        .map(|_| (rng.gen::<f64>() * side, rng.gen::<f64>() * side))
        .collect();
    let sigma = side / 100.0;
    let mut coords = Vec::with_capacity(n);
    let mut assignment = Vec::with_capacity(n);
    for i in 0..n {
        let center = centers[i % c];
        let dx = sigma * sample_standard_normal(&mut rng);
        let dy = sigma * sample_standard_normal(&mut rng);
        let x = (center.0 + dx).clamp(0.0, side).round();
        let y = (center.1 + dy).clamp(0.0, side).round();
        coords.push((x, y));
        assignment.push(i % c);
    }
    let inst = Instance::new(coords, Metric::Euc2d)?;
    Ok((inst, assignment, centers))
}
