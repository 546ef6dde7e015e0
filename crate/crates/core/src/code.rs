//! The randomized generator matrix `G = [I | P]`.
//!
//! Column `j < k` is the unit vector `e_j`. Column `j >= k` is a parity: d(k)
//! rows drawn uniformly with replacement, each with a coefficient drawn
//! uniformly from the whole field (zero included). Repeated rows are summed,
//! and rows whose coefficient ends up zero are dropped.

use alloc::vec::Vec;
use core::fmt;

use crate::galois::{Field, FieldElement, FieldSpec};
use crate::rng::{column_rng, uniform_below};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("k must be at least 1")]
    EmptyBlock,
    #[error("sparsity constant must be positive with nonzero denominator, got {0}")]
    BadConstant(Ratio),
}

/// Non-fatal observations about a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigWarning {
    /// q <= k: outside the regime where full rank is guaranteed w.h.p.
    FieldNotLargerThanK { q: u32, k: u32 },
    /// d(k) > k: parities are denser than the block.
    DegreeExceedsK { degree: u32, k: u32 },
}

impl fmt::Display for ConfigWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::FieldNotLargerThanK { q, k } => {
                write!(f, "field size q = {q} is not larger than k = {k}; decoding failure is no longer bounded by k/q")
            }
            Self::DegreeExceedsK { degree, k } => write!(f, "parity degree {degree} exceeds k = {k}"),
        }
    }
}

/// Exact positive rational, used for the sparsity constant `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ratio {
    pub numerator: u32,
    pub denominator: u32,
}

impl Ratio {
    pub const fn new(numerator: u32, denominator: u32) -> Self {
        Self {
            numerator,
            denominator,
        }
    }

    pub const fn integer(n: u32) -> Self {
        Self::new(n, 1)
    }

    pub fn to_f64(self) -> f64 {
        f64::from(self.numerator) / f64::from(self.denominator)
    }

    /// Lowest terms.
    pub fn reduced(self) -> Self {
        fn gcd(a: u32, b: u32) -> u32 {
            if b == 0 { a } else { gcd(b, a % b) }
        }
        let g = gcd(self.numerator, self.denominator).max(1);
        Self::new(self.numerator / g, self.denominator / g)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == 1 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LogBase {
    #[default]
    Natural,
    Base2,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            Self::Natural => libm::log(x),
            Self::Base2 => libm::log2(x),
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Self::Natural => 0,
            Self::Base2 => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(Self::Natural),
            1 => Some(Self::Base2),
            _ => None,
        }
    }
}

/// `ceil(c * log(k))`, at least 1.
pub fn degree_for(k: u32, c: Ratio, base: LogBase) -> u32 {
    let raw = libm::ceil(c.to_f64() * base.log(f64::from(k)));
    if raw < 1.0 { 1 } else { raw as u32 }
}

/// Everything needed to regenerate any column of the code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeConfig {
    k: u32,
    c: Ratio,
    field: FieldSpec,
    master_seed: u64,
    log_base: LogBase,
}

impl CodeConfig {
    pub fn new(k: u32, c: Ratio, field: FieldSpec, master_seed: u64, log_base: LogBase) -> Result<Self, ConfigError> {
        if k == 0 {
            return Err(ConfigError::EmptyBlock);
        }
        if c.numerator == 0 || c.denominator == 0 {
            return Err(ConfigError::BadConstant(c));
        }
        Ok(Self {
            k,
            c,
            field,
            master_seed,
            log_base,
        })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn c(&self) -> Ratio {
        self.c
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn log_base(&self) -> LogBase {
        self.log_base
    }

    pub fn with_seed(self, master_seed: u64) -> Self {
        Self { master_seed, ..self }
    }

    /// Parity degree d(k).
    pub fn degree(&self) -> u32 {
        degree_for(self.k, self.c, self.log_base)
    }

    pub fn warnings(&self) -> Vec<ConfigWarning> {
        let mut w = Vec::new();
        if self.field.q() <= self.k {
            w.push(ConfigWarning::FieldNotLargerThanK {
                q: self.field.q(),
                k: self.k,
            });
        }
        if self.degree() > self.k {
            w.push(ConfigWarning::DegreeExceedsK {
                degree: self.degree(),
                k: self.k,
            });
        }
        w
    }
}

/// Index of an encoded symbol: `[0, k)` systematic, `>= k` parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColumnId(pub u64);

impl ColumnId {
    pub fn index(self) -> u64 {
        self.0
    }
}

impl fmt::Display for ColumnId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sparse parity column: sorted distinct rows with nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParityColumn {
    entries: Vec<(u32, FieldElement)>,
}

impl ParityColumn {
    /// Sums coefficients of repeated rows and drops zeros.
    pub fn from_draws(field: &Field, mut draws: Vec<(u32, FieldElement)>) -> Self {
        draws.sort_by_key(|&(row, _)| row);
        let mut entries: Vec<(u32, FieldElement)> = Vec::with_capacity(draws.len());
        for (row, coeff) in draws {
            match entries.last_mut() {
                Some(last) if last.0 == row => last.1 = field.add(last.1, coeff),
                _ => entries.push((row, coeff)),
            }
        }
        entries.retain(|(_, c)| !c.is_zero());
        Self { entries }
    }

    pub fn entries(&self) -> &[(u32, FieldElement)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|&(r, _)| r)
    }

    pub fn coefficient(&self, row: u32) -> Option<FieldElement> {
        self.entries
            .binary_search_by_key(&row, |&(r, _)| r)
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// True iff `row` has a nonzero coefficient.
    pub fn covers(&self, row: u32) -> bool {
        self.coefficient(row).is_some()
    }
}

/// A column of `G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Column {
    Systematic(u32),
    Parity(ParityColumn),
}

impl Column {
    pub fn covers(&self, row: u32) -> bool {
        match self {
            Self::Systematic(r) => *r == row,
            Self::Parity(p) => p.covers(row),
        }
    }

    /// Nonzero entries as (row, coefficient).
    pub fn entries(&self) -> Vec<(u32, FieldElement)> {
        match self {
            Self::Systematic(r) => alloc::vec![(*r, FieldElement::ONE)],
            Self::Parity(p) => p.entries().to_vec(),
        }
    }
}

/// `degree` draws of (row ~ U[0,k), coeff ~ U[0,q)) from `rng`.
pub fn sample_parity<R: rand_core::RngCore + ?Sized>(field: &Field, rng: &mut R, k: u32, degree: u32) -> ParityColumn {
    let q = field.q();
    let draws = (0..degree)
        .map(|_| {
            let row = uniform_below(rng, k);
            let coeff = field.element_wrapping(uniform_below(rng, q));
            (row, coeff)
        })
        .collect();
    ParityColumn::from_draws(field, draws)
}

/// A [`CodeConfig`] with its field tables built.
#[derive(Debug, Clone)]
pub struct Code {
    cfg: CodeConfig,
    field: Field,
    degree: u32,
}

impl Code {
    pub fn new(cfg: CodeConfig) -> Self {
        Self {
            field: Field::new(cfg.field),
            degree: cfg.degree(),
            cfg,
        }
    }

    /// Reuses already built field tables; `field` must match `cfg`.
    pub fn with_field(cfg: CodeConfig, field: Field) -> Self {
        assert_eq!(field.spec(), cfg.field, "field tables do not match config");
        Self {
            field,
            degree: cfg.degree(),
            cfg,
        }
    }

    /// Same field and parameters under a different master seed.
    pub fn reseeded(&self, master_seed: u64) -> Self {
        Self {
            cfg: self.cfg.with_seed(master_seed),
            field: self.field.clone(),
            degree: self.degree,
        }
    }

    pub fn config(&self) -> &CodeConfig {
        &self.cfg
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn k(&self) -> u32 {
        self.cfg.k
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_systematic(&self, id: ColumnId) -> bool {
        id.0 < u64::from(self.cfg.k)
    }

    /// Column `id` of `G`; a pure function of (config, id).
    pub fn column(&self, id: ColumnId) -> Column {
        if self.is_systematic(id) {
            Column::Systematic(id.0 as u32)
        } else {
            Column::Parity(self.parity_column(id))
        }
    }

    /// Draws the parity column for `id` regardless of whether `id < k`.
    pub fn parity_column(&self, id: ColumnId) -> ParityColumn {
        let mut rng = column_rng(self.cfg.master_seed, id.0);
        sample_parity(&self.field, &mut rng, self.cfg.k, self.degree)
    }

    /// Columns for the ids, in order.
    pub fn columns(&self, ids: &[ColumnId]) -> Vec<Column> {
        ids.iter().map(|&id| self.column(id)).collect()
    }
}
