//! Monte Carlo averages of spin-boson concurrence over random couplings and
//! frequencies, plus the first entanglement death time for identical modes.
//!
//! Sample `k` draws from its own ChaCha8 stream (`seed`, stream `k`).
//! Samples are accumulated in fixed blocks and the blocks are merged
//! pairwise in index order, so results are bit-identical for any thread
//! count. A first pass records the per-point sample maximum, which the
//! second pass divides out before accumulating.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::measures::sb_concurrence_law;
use crate::models::validate_grid;
use crate::states::WernerParams;
use crate::{Error, Result};

const BLOCK: usize = 256;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    /// Number of modes `M`.
    #[serde(rename = "M")]
    pub modes: usize,
    pub samples: usize,
    pub seed: u64,
    pub grid: Vec<f64>,
    pub werner: WernerParams,
    /// Interval both `g_j` and `ω_j` are drawn from.
    #[serde(default = "unit_interval")]
    pub coupling_range: (f64, f64),
}

fn unit_interval() -> (f64, f64) {
    (0.0, 1.0)
}

impl EnsembleConfig {
    pub fn new(modes: usize, samples: usize, seed: u64, grid: Vec<f64>, werner: WernerParams) -> Self {
        Self {
            modes,
            samples,
            seed,
            grid,
            werner,
            coupling_range: unit_interval(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes == 0 || self.samples == 0 {
            return Err(Error::Config("need at least one mode and one sample".into()));
        }
        let (lo, hi) = self.coupling_range;
        if !(lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi) {
            return Err(Error::Config(format!(
                "coupling range [{lo}, {hi}] must be a nonempty interval in [0, inf)"
            )));
        }
        validate_grid(&self.grid)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsemblePoint {
    pub t: f64,
    pub mean_c: f64,
    /// Standard error of the mean.
    pub std_err: f64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub points: Vec<EnsemblePoint>,
}

#[derive(Clone, Copy, Default)]
struct Welford {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, v: f64) {
        self.n += 1;
        let delta = v - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (v - self.mean);
    }

    fn merge(a: Welford, b: Welford) -> Welford {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let delta = b.mean - a.mean;
        Welford {
            n,
            mean: a.mean + delta * b.n as f64 / n as f64,
            m2: a.m2 + b.m2 + delta * delta * (a.n as f64 * b.n as f64) / n as f64,
        }
    }
}

fn merge_pairwise(mut layer: Vec<Vec<Welford>>) -> Vec<Welford> {
    while layer.len() > 1 {
        layer = layer
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => a.iter().zip(b).map(|(x, y)| Welford::merge(*x, *y)).collect(),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    layer.pop().unwrap_or_default()
}

/// Couplings and frequencies of sample `index`; zero frequencies are
/// redrawn.
pub fn draw_sample(cfg: &EnsembleConfig, index: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let (lo, hi) = cfg.coupling_range;
    let mut g = Vec::with_capacity(cfg.modes);
    let mut omega = Vec::with_capacity(cfg.modes);
    for _ in 0..cfg.modes {
        g.push(rng.random_range(lo..hi));
        let w = loop {
            let w = rng.random_range(lo..hi);
            if w != 0.0 {
                break w;
            }
        };
        omega.push(w);
    }
    (g, omega)
}

fn sample_values(cfg: &EnsembleConfig, k: usize) -> impl Iterator<Item = f64> + '_ {
    let (g, omega) = draw_sample(cfg, k as u64);
    cfg.grid.iter().map(move |&t| {
        let gamma: f64 = g
            .iter()
            .zip(&omega)
            .map(|(g, w)| {
                let s = (0.5 * w * t).sin() / w;
                8.0 * g * g * s * s
            })
            .sum();
        sb_concurrence_law(&cfg.werner, gamma)
    })
}

fn block_range(cfg: &EnsembleConfig, block: usize) -> std::ops::Range<usize> {
    block * BLOCK..((block + 1) * BLOCK).min(cfg.samples)
}

fn block_max(cfg: &EnsembleConfig, block: usize) -> Vec<f64> {
    let mut acc = vec![0.0; cfg.grid.len()];
    for k in block_range(cfg, block) {
        for (slot, v) in acc.iter_mut().zip(sample_values(cfg, k)) {
            *slot = f64::max(*slot, v);
        }
    }
    acc
}

fn run_block(cfg: &EnsembleConfig, block: usize, scale: &[f64]) -> Vec<Welford> {
    let mut acc = vec![Welford::default(); cfg.grid.len()];
    for k in block_range(cfg, block) {
        for ((slot, v), s) in acc.iter_mut().zip(sample_values(cfg, k)).zip(scale) {
            slot.push(v / s);
        }
    }
    acc
}

/// Ensemble mean of the concurrence on the grid, on the global rayon pool.
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleResult> {
    cfg.validate()?;
    let blocks = cfg.samples.div_ceil(BLOCK);
    // Values are accumulated relative to the per-point sample maximum so
    // squared deviations of strongly decayed concurrences do not underflow.
    let scale: Vec<f64> = (0..blocks)
        .into_par_iter()
        .map(|b| block_max(cfg, b))
        .reduce(
            || vec![0.0; cfg.grid.len()],
            |a, b| a.iter().zip(&b).map(|(x, y)| x.max(*y)).collect(),
        )
        .into_iter()
        .map(|m| if m > 0.0 { m } else { 1.0 })
        .collect();
    let partial: Vec<Vec<Welford>> = (0..blocks).into_par_iter().map(|b| run_block(cfg, b, &scale)).collect();
    let merged = merge_pairwise(partial);
    Ok(EnsembleResult {
        points: cfg
            .grid
            .iter()
            .zip(merged)
            .zip(&scale)
            .map(|((&t, w), &s)| EnsemblePoint {
                t,
                mean_c: (s * w.mean).clamp(0.0, 1.0),
                std_err: if w.n > 1 {
                    s * (w.m2.max(0.0) / (w.n - 1) as f64 / w.n as f64).sqrt()
                } else {
                    0.0
                },
                count: w.n,
            })
            .collect(),
    })
}

/// As [`run_ensemble`] on a dedicated pool of `threads` workers.
pub fn run_ensemble_with_threads(cfg: &EnsembleConfig, threads: usize) -> Result<EnsembleResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_ensemble(cfg))
}

/// First time at which `M` identical modes `(g, ω)` drive the concurrence
/// to zero: `t_d = arccos(arg)/ω` with
/// `arg = 1 + (ω²/(4Mg²)) ln((1 − x)/(2x sin 2φ))`.
///
/// Returns `Some(0.0)` if the state starts separable (`arg ≥ 1`) and
/// `None` if the threshold is never reached (`x = 1` or `arg < −1`).
pub fn death_time(p: &WernerParams, modes: usize, g: f64, omega: f64) -> Result<Option<f64>> {
    if modes == 0 || !(g.is_finite() && g != 0.0) || !(omega.is_finite() && omega > 0.0) {
        return Err(Error::Domain(format!(
            "need M >= 1, g != 0 and omega > 0 (got {modes}, {g}, {omega})"
        )));
    }
    let x = p.x();
    if x >= 1.0 {
        return Ok(None);
    }
    let drive = 2.0 * x * (2.0 * p.phi()).sin();
    if drive <= 0.0 {
        return Ok(Some(0.0));
    }
    let arg = 1.0 + omega * omega / (4.0 * modes as f64 * g * g) * ((1.0 - x) / drive).ln();
    Ok(if arg >= 1.0 {
        Some(0.0)
    } else if arg < -1.0 {
        None
    } else {
        Some(arg.acos() / omega)
    })
}
