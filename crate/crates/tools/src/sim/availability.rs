use rayon::prelude::*;
use rand_core::RngCore;
use rfc_core::repair::{AvailabilityReport, SearchMethod};
use rfc_core::{Code, CodeConfig, ColumnId};

use super::stream;

#[derive(Debug, Clone, PartialEq)]
pub struct SeedAvailability {
    pub master_seed: u64,
    pub min_availability: usize,
    pub mean_availability: f64,
    pub min_coverage: usize,
    pub mean_coverage: f64,
    /// Rows covered by some parity but with availability 0; always 0.
    pub violations: usize,
    pub exact_rows: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AvailabilityStudy {
    pub k: u32,
    pub parities: usize,
    pub seeds: Vec<SeedAvailability>,
    /// histogram[a] = number of (seed, row) pairs with availability a.
    pub histogram: Vec<usize>,
}

impl AvailabilityStudy {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "seed,k,parities,min_availability,mean_availability,min_coverage,mean_coverage,exact_rows\n",
        );
        for s in &self.seeds {
            out += &format!(
                "{:#018x},{},{},{},{:.4},{},{:.4},{}\n",
                s.master_seed, self.k, self.parities, s.min_availability, s.mean_availability, s.min_coverage, s.mean_coverage, s.exact_rows
            );
        }
        out
    }

    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("availability,count\n");
        for (a, n) in self.histogram.iter().enumerate() {
            out += &format!("{a},{n}\n");
        }
        out
    }
}

/// Availability of every row over `seeds` codes with `round(r k)` parities.
pub fn availability_study(cfg: &CodeConfig, r: f64, seeds: usize, sweep_seed: u64) -> (AvailabilityStudy, Vec<AvailabilityReport>) {
    let k = cfg.k();
    let parities = (r * f64::from(k)).round() as u64;
    let base = Code::new(*cfg);
    let reports: Vec<(u64, AvailabilityReport)> = (0..seeds as u64)
        .into_par_iter()
        .map(|s| {
            let seed = stream(&[sweep_seed, s]).next_u64();
            let code = base.reseeded(seed);
            let ids: Vec<ColumnId> = (0..parities).map(|j| ColumnId(u64::from(k) + j)).collect();
            (seed, AvailabilityReport::compute(&code, &ids))
        })
        .collect();
    let mut histogram = Vec::new();
    let seeds_summary = reports
        .iter()
        .map(|(seed, rep)| {
            for row in &rep.rows {
                if histogram.len() <= row.availability {
                    histogram.resize(row.availability + 1, 0);
                }
                histogram[row.availability] += 1;
            }
            SeedAvailability {
                master_seed: *seed,
                min_availability: rep.min_availability(),
                mean_availability: rep.mean_availability(),
                min_coverage: rep.min_coverage(),
                mean_coverage: rep.mean_coverage(),
                violations: rep.rows.iter().filter(|r| r.coverage >= 1 && r.availability == 0).count(),
                exact_rows: rep.rows.iter().filter(|r| r.method == SearchMethod::Exact).count(),
            }
        })
        .collect();
    (
        AvailabilityStudy {
            k,
            parities: parities as usize,
            seeds: seeds_summary,
            histogram,
        },
        reports.into_iter().map(|(_, r)| r).collect(),
    )
}
