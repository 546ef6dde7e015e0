use rayon::prelude::*;
use rand_core::RngCore;
use rfc_core::code::sample_parity;
use rfc_core::linalg::{rank, GfMatrix};
use rfc_core::rng::{sample_distinct, uniform_below};
use rfc_core::{BipartiteGraph, Field, FieldElement};

use super::stats::binomial_sigma;
use super::{ceil_tolerant, stream};

/// 2x2 table of (perfect matching?) x (full rank?).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Contingency {
    pub matching_full_rank: usize,
    pub matching_rank_deficient: usize,
    pub no_matching_full_rank: usize,
    pub no_matching_rank_deficient: usize,
}

impl Contingency {
    pub fn total(&self) -> usize {
        self.matching_full_rank + self.matching_rank_deficient + self.no_matching_full_rank + self.no_matching_rank_deficient
    }

    pub fn with_matching(&self) -> usize {
        self.matching_full_rank + self.matching_rank_deficient
    }

    fn record(&mut self, matching: bool, full_rank: bool) {
        match (matching, full_rank) {
            (true, true) => self.matching_full_rank += 1,
            (true, false) => self.matching_rank_deficient += 1,
            (false, true) => self.no_matching_full_rank += 1,
            (false, false) => self.no_matching_rank_deficient += 1,
        }
    }

    fn merge(mut self, o: Self) -> Self {
        self.matching_full_rank += o.matching_full_rank;
        self.matching_rank_deficient += o.matching_rank_deficient;
        self.no_matching_full_rank += o.no_matching_full_rank;
        self.no_matching_rank_deficient += o.no_matching_rank_deficient;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrosscheckCell {
    pub s: usize,
    pub table: Contingency,
}

/// Support of a decoding set: `s` distinct systematic rows and parity row sets.
struct Support {
    systematic: Vec<u32>,
    parities: Vec<Vec<(u32, FieldElement)>>,
}

impl Support {
    fn sample(field: &Field, rng: &mut impl RngCore, k: u32, degree: u32, s: usize, total: usize) -> Self {
        let systematic = sample_distinct(rng, k, s);
        let parities = (s..total)
            .map(|_| sample_parity(field, rng, k, degree).entries().to_vec())
            .collect();
        Self { systematic, parities }
    }

    fn graph(&self, k: u32) -> BipartiteGraph {
        let mut g = BipartiteGraph::new(k as usize);
        for &row in &self.systematic {
            g.add_right([row]).expect("row in range");
        }
        for p in &self.parities {
            g.add_right(p.iter().map(|&(r, _)| r)).expect("row in range");
        }
        g
    }

    /// k x |columns| matrix; parity coefficients come from `coeff`.
    fn matrix(&self, k: u32, mut coeff: impl FnMut(FieldElement) -> FieldElement) -> GfMatrix {
        let cols = self.systematic.len() + self.parities.len();
        let mut m = GfMatrix::zeros(k as usize, cols);
        for (j, &row) in self.systematic.iter().enumerate() {
            m.set(row as usize, j, FieldElement::ONE);
        }
        for (j, p) in self.parities.iter().enumerate() {
            for &(row, w) in p {
                m.set(row as usize, self.systematic.len() + j, coeff(w));
            }
        }
        m
    }
}

/// Tabulates matching existence against full rank for decoding sets with
/// `s` systematic columns and `ceil((1 + eps) k) - s` parities.
pub fn matching_rank_crosscheck(
    field: &Field,
    k: u32,
    degree: u32,
    epsilon: f64,
    s_values: &[usize],
    trials: usize,
    seed: u64,
) -> Vec<CrosscheckCell> {
    let total = ceil_tolerant((1.0 + epsilon) * f64::from(k));
    s_values
        .iter()
        .enumerate()
        .map(|(si, &s)| {
            assert!(s <= k as usize && s <= total, "s = {s} too large");
            let table = (0..trials as u64)
                .into_par_iter()
                .map(|t| {
                    let mut rng = stream(&[seed, si as u64, t]);
                    let support = Support::sample(field, &mut rng, k, degree, s, total);
                    let matching = support.graph(k).has_left_perfect_matching();
                    let full_rank = rank(field, &support.matrix(k, |w| w)) == k as usize;
                    let mut c = Contingency::default();
                    c.record(matching, full_rank);
                    c
                })
                .reduce(Contingency::default, Contingency::merge);
            CrosscheckCell { s, table }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchwartzZippelReport {
    pub k: u32,
    pub q: u32,
    pub supports: usize,
    pub samples: usize,
    pub singular: usize,
}

impl SchwartzZippelReport {
    pub fn singular_fraction(&self) -> f64 {
        self.singular as f64 / self.samples as f64
    }

    pub fn bound(&self) -> f64 {
        f64::from(self.k) / f64::from(self.q)
    }

    /// Binomial standard error at the bound.
    pub fn sigma(&self) -> f64 {
        binomial_sigma(self.bound(), self.samples as u64)
    }

    pub fn within_bound(&self, sigmas: f64) -> bool {
        self.singular_fraction() <= self.bound() + sigmas * self.sigma()
    }
}

/// Fixes square supports (`s` systematic columns, `k - s` parities) that admit
/// a perfect matching, then redraws every parity coefficient uniformly from
/// the field `assignments` times per support and counts singular matrices.
pub fn schwartz_zippel_check(
    field: &Field,
    k: u32,
    degree: u32,
    s: usize,
    supports: usize,
    assignments: usize,
    seed: u64,
) -> SchwartzZippelReport {
    let q = field.q();
    let singular: usize = (0..supports as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(&[seed, i]);
            let support = loop {
                let candidate = Support::sample(field, &mut rng, k, degree, s, k as usize);
                if candidate.graph(k).has_left_perfect_matching() {
                    break candidate;
                }
            };
            (0..assignments)
                .filter(|_| {
                    let m = support.matrix(k, |_| field.element_wrapping(uniform_below(&mut rng, q)));
                    rank(field, &m) < k as usize
                })
                .count()
        })
        .sum();
    SchwartzZippelReport {
        k,
        q,
        supports,
        samples: supports * assignments,
        singular,
    }
}
