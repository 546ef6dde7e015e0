use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use rfc_core::codec::is_decodable;
use rfc_core::rng::{sample_distinct, uniform_unit};
use rfc_core::{Code, CodeConfig, Column, ColumnId};

use super::stats::{wilson_interval, Interval, Z95};
use super::{ceil_tolerant, encoded_count, stream, SimError};

/// How the decoding set is drawn in each trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Each encoded symbol is erased independently; the grid value is P_e.
    IidErasure,
    /// A uniform subset of `ceil((1 + eps) k)` symbols; the grid value is eps.
    FixedSubset,
}

impl SweepMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::IidErasure => "erasure",
            Self::FixedSubset => "overhead",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ErasureExperiment {
    /// Code parameters; the master seed is replaced per instance.
    pub cfg: CodeConfig,
    pub rate: f64,
    pub mode: SweepMode,
    pub instances: usize,
    pub trials_per_instance: usize,
    pub sweep_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub grid_value: f64,
    pub failures: u64,
    pub trials: u64,
    pub failure_rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

impl Interval for GridPoint {
    fn estimate(&self) -> f64 {
        self.failure_rate
    }
    fn lo(&self) -> f64 {
        self.ci_lo
    }
    fn hi(&self) -> f64 {
        self.ci_hi
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub experiment: ErasureExperiment,
    pub points: Vec<GridPoint>,
    pub wall_time: Duration,
}

pub const CSV_HEADER: &str = "grid_value,k,c,q,rate,mode,instances,trials,failures,rate_est,ci_lo,ci_hi";

impl ExperimentResult {
    /// CSV rows (no header); wall time is deliberately left out.
    pub fn csv_rows(&self) -> String {
        let e = &self.experiment;
        let mut out = String::new();
        for p in &self.points {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{:.6},{:.6},{:.6}",
                fmt_grid(p.grid_value),
                e.cfg.k(),
                e.cfg.c(),
                e.cfg.field().q(),
                e.rate,
                e.mode.as_str(),
                e.instances,
                e.trials_per_instance,
                p.failures,
                p.failure_rate,
                p.ci_lo,
                p.ci_hi
            )
            .expect("writing to a String");
        }
        out
    }

    pub fn to_csv(&self) -> String {
        format!("{CSV_HEADER}\n{}", self.csv_rows())
    }
}

fn fmt_grid(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() { "0".into() } else { s.to_string() }
}

impl ErasureExperiment {
    fn validate(&self, grid: &[f64]) -> Result<usize, SimError> {
        let bad = |m: String| Err(SimError::ConfigInvalid(m));
        if grid.is_empty() {
            return bad("empty grid".into());
        }
        if !(self.rate > 0.0 && self.rate <= 1.0) {
            return bad(format!("rate {} outside (0, 1]", self.rate));
        }
        if self.instances == 0 || self.trials_per_instance == 0 {
            return bad("instance and trial counts must be at least 1".into());
        }
        let n = encoded_count(self.cfg.k(), self.rate);
        for &g in grid {
            match self.mode {
                SweepMode::IidErasure if !(0.0..1.0).contains(&g) => {
                    return bad(format!("erasure probability {g} outside [0, 1)"))
                }
                SweepMode::FixedSubset if !(g >= 0.0) => return bad(format!("overhead {g} is negative")),
                SweepMode::FixedSubset if ceil_tolerant((1.0 + g) * f64::from(self.cfg.k())) > n => {
                    return bad(format!("overhead {g} needs more than the {n} encoded symbols"))
                }
                _ => {}
            }
        }
        Ok(n)
    }
}

/// Failure probability of decoding at each grid value.
pub fn run_erasure_sweep(exp: &ErasureExperiment, grid: &[f64]) -> Result<ExperimentResult, SimError> {
    let n = exp.validate(grid)?;
    let start = Instant::now();
    let base = Code::new(exp.cfg);
    let points = grid
        .iter()
        .enumerate()
        .map(|(g, &value)| {
            let failures: u64 = (0..exp.instances)
                .into_par_iter()
                .map(|instance| instance_failures(exp, &base, n, g as u64, instance as u64, value))
                .sum();
            let trials = (exp.instances * exp.trials_per_instance) as u64;
            let (ci_lo, ci_hi) = wilson_interval(failures, trials, Z95);
            GridPoint {
                grid_value: value,
                failures,
                trials,
                failure_rate: failures as f64 / trials as f64,
                ci_lo,
                ci_hi,
            }
        })
        .collect();
    Ok(ExperimentResult {
        experiment: exp.clone(),
        points,
        wall_time: start.elapsed(),
    })
}

fn instance_failures(exp: &ErasureExperiment, base: &Code, n: usize, grid: u64, instance: u64, value: f64) -> u64 {
    use rand_core::RngCore;
    let seed = stream(&[exp.sweep_seed, grid, instance]).next_u64();
    let code = base.reseeded(seed);
    let k = code.k();
    let columns: Vec<Column> = (0..n as u64).map(|j| code.column(ColumnId(j))).collect();
    let mut failures = 0;
    let mut chosen: Vec<&Column> = Vec::with_capacity(n);
    for trial in 0..exp.trials_per_instance as u64 {
        let mut rng = stream(&[exp.sweep_seed, grid, instance, trial]);
        chosen.clear();
        match exp.mode {
            SweepMode::IidErasure => {
                chosen.extend(columns.iter().filter(|_| uniform_unit(&mut rng) >= value));
            }
            SweepMode::FixedSubset => {
                let want = ceil_tolerant((1.0 + value) * f64::from(k));
                let mut picks = sample_distinct(&mut rng, n as u32, want);
                picks.sort_unstable();
                chosen.extend(picks.into_iter().map(|j| &columns[j as usize]));
            }
        }
        if chosen.len() < k as usize || !is_decodable(code.field(), k, &chosen) {
            failures += 1;
        }
    }
    failures
}
