use rayon::prelude::*;
use rfc_core::codec::is_decodable;
use rfc_core::code::sample_parity;
use rfc_core::{Column, Field};

use super::{ceil_tolerant, stream};

#[derive(Debug, Clone, PartialEq)]
pub struct ConverseReport {
    pub k: u32,
    pub degree: u32,
    pub k_prime: usize,
    pub trials: usize,
    /// Trials in which some input row is covered by no received parity.
    pub uncovered: usize,
    pub failures: usize,
    /// Trials where a row was uncovered yet decoding succeeded; always 0.
    pub uncovered_but_decoded: usize,
    /// Poissonized Pr(all rows covered).
    pub analytic_all_covered: f64,
}

impl ConverseReport {
    pub fn uncovered_rate(&self) -> f64 {
        self.uncovered as f64 / self.trials as f64
    }

    pub fn failure_rate(&self) -> f64 {
        self.failures as f64 / self.trials as f64
    }

    pub fn to_csv(&self) -> String {
        format!(
            "k,degree,k_prime,trials,uncovered,failures,uncovered_rate,failure_rate,analytic_uncovered\n{},{},{},{},{},{},{:.6},{:.6},{:.6}\n",
            self.k,
            self.degree,
            self.k_prime,
            self.trials,
            self.uncovered,
            self.failures,
            self.uncovered_rate(),
            self.failure_rate(),
            1.0 - self.analytic_all_covered
        )
    }
}

/// `exp(-k (1 - 1/k)^(k' d))`: k' d balls in k bins, none empty.
pub fn poisson_all_covered(k: u32, k_prime: usize, degree: u32) -> f64 {
    let k = f64::from(k);
    (-k * (1.0 - 1.0 / k).powf(k_prime as f64 * f64::from(degree))).exp()
}

/// Decoding from `ceil((1 + eps) k)` parities of constant degree `degree`.
pub fn converse_check(field: &Field, k: u32, degree: u32, epsilon: f64, trials: usize, seed: u64) -> ConverseReport {
    assert!(degree >= 1, "degree must be at least 1");
    let k_prime = ceil_tolerant((1.0 + epsilon) * f64::from(k));
    let outcomes: Vec<(bool, bool)> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(&[seed, t]);
            let columns: Vec<Column> = (0..k_prime)
                .map(|_| Column::Parity(sample_parity(field, &mut rng, k, degree)))
                .collect();
            let mut covered = vec![false; k as usize];
            for col in &columns {
                if let Column::Parity(p) = col {
                    p.rows().for_each(|r| covered[r as usize] = true);
                }
            }
            let all_covered = covered.iter().all(|&c| c);
            (all_covered, is_decodable(field, k, &columns))
        })
        .collect();
    ConverseReport {
        k,
        degree,
        k_prime,
        trials,
        uncovered: outcomes.iter().filter(|o| !o.0).count(),
        failures: outcomes.iter().filter(|o| !o.1).count(),
        uncovered_but_decoded: outcomes.iter().filter(|o| !o.0 && o.1).count(),
        analytic_all_covered: poisson_all_covered(k, k_prime, degree),
    }
}
