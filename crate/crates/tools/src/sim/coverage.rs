use rayon::prelude::*;
use rand_core::RngCore;
use rfc_core::{Code, CodeConfig, ColumnId};

use super::stream;

/// Distribution of |P_u|, the number of parities covering each row.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageStats {
    pub k: u32,
    pub parities: usize,
    /// Per seed: (mean, min) coverage over rows.
    pub per_seed: Vec<(f64, usize)>,
    /// Every |P_u| observed, seed-major.
    pub values: Vec<usize>,
    pub mean: f64,
    pub std_dev: f64,
    /// `rc log k - rc log^2 k / k` and `rc log k` in the config's log base.
    pub bound_lo: f64,
    pub bound_hi: f64,
}

impl CoverageStats {
    pub fn min(&self) -> usize {
        self.values.iter().copied().min().unwrap_or(0)
    }

    /// Standard error of the mean, treating rows as independent.
    pub fn std_error(&self) -> f64 {
        self.std_dev / (self.values.len() as f64).sqrt()
    }

    /// Mean inside the bounds widened by `sigmas` standard errors.
    pub fn mean_within_bounds(&self, sigmas: f64) -> bool {
        let slack = sigmas * self.std_error();
        self.mean >= self.bound_lo - slack && self.mean <= self.bound_hi + slack
    }

    /// Fraction of seeds in which some row has coverage at most `(1 - eps) * expected`.
    pub fn fraction_seeds_below(&self, eps: f64, expected: f64) -> f64 {
        let rows = self.k as usize;
        let threshold = (1.0 - eps) * expected;
        let hits = self
            .values
            .chunks(rows)
            .filter(|seed| seed.iter().any(|&v| v as f64 <= threshold))
            .count();
        hits as f64 / self.per_seed.len().max(1) as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("seed,k,parities,mean_coverage,min_coverage,bound_lo,bound_hi\n");
        for (i, (mean, min)) in self.per_seed.iter().enumerate() {
            out += &format!(
                "{i},{},{},{mean:.6},{min},{:.6},{:.6}\n",
                self.k, self.parities, self.bound_lo, self.bound_hi
            );
        }
        out
    }
}

/// Exact E|P_u| for `round(r k)` parities: a parity covers u when u is drawn
/// at least once and the summed coefficient is nonzero.
pub fn expected_coverage(cfg: &CodeConfig, r: f64) -> f64 {
    let k = f64::from(cfg.k());
    let q = f64::from(cfg.field().q());
    let parities = (r * k).round();
    let drawn = 1.0 - (1.0 - 1.0 / k).powi(cfg.degree() as i32);
    parities * drawn * (q - 1.0) / q
}

/// Coverage of every row over `seeds` independent codes with `round(r k)` parities.
pub fn coverage_stats(cfg: &CodeConfig, r: f64, seeds: usize, sweep_seed: u64) -> CoverageStats {
    assert!(r > 0.0, "parity ratio must be positive");
    let k = cfg.k();
    let parities = (r * f64::from(k)).round() as usize;
    let base = Code::new(*cfg);
    let per_seed_values: Vec<Vec<usize>> = (0..seeds as u64)
        .into_par_iter()
        .map(|s| {
            let code = base.reseeded(stream(&[sweep_seed, s]).next_u64());
            let mut counts = vec![0usize; k as usize];
            for j in 0..parities as u64 {
                for row in code.parity_column(ColumnId(u64::from(k) + j)).rows() {
                    counts[row as usize] += 1;
                }
            }
            counts
        })
        .collect();
    let per_seed = per_seed_values
        .iter()
        .map(|v| (v.iter().sum::<usize>() as f64 / v.len() as f64, *v.iter().min().unwrap()))
        .collect();
    let values: Vec<usize> = per_seed_values.into_iter().flatten().collect();
    let n = values.len() as f64;
    let mean = values.iter().sum::<usize>() as f64 / n;
    let var = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    let rc = (parities as f64 / f64::from(k)) * cfg.c().to_f64();
    let log_k = cfg.log_base().log(f64::from(k));
    CoverageStats {
        k,
        parities,
        per_seed,
        values,
        mean,
        std_dev: var.sqrt(),
        bound_lo: rc * log_k - rc * log_k * log_k / f64::from(k),
        bound_hi: rc * log_k,
    }
}
