//! Dense linear algebra over GF(2^m): rank, solve and an incremental
//! row-echelon builder shared with the decoder.

use alloc::vec;
use alloc::vec::Vec;

use crate::galois::{Field, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix has column rank {rank}, need {cols}")]
    RankDeficient { rank: usize, cols: usize },
    #[error("right-hand side is not in the column span")]
    InconsistentSystem,
    #[error("dimension mismatch: {0}")]
    Shape(&'static str),
}

/// Row-major dense matrix of field elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u16>,
}

impl GfMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major values, checking every entry is below `q`.
    pub fn from_rows(field: &Field, rows: usize, cols: usize, data: Vec<u16>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape("data length is not rows * cols"));
        }
        if data.iter().any(|&v| u32::from(v) >= field.q()) {
            return Err(LinalgError::Shape("entry outside the field"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        // Entries are only ever written through `set`, which takes a FieldElement.
        crate::galois::Field::raw_element(self.data[r * self.cols + c])
    }

    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v.value();
    }

    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, field: &Field, x: &[FieldElement]) -> Result<Vec<FieldElement>, LinalgError> {
        if x.len() != self.cols {
            return Err(LinalgError::Shape("vector length is not cols"));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(FieldElement::ZERO, |acc, (&a, &b)| {
                        field.add(acc, field.mul(Field::raw_element(a), b))
                    })
            })
            .collect())
    }
}

/// Rank by Gaussian elimination; the pivot for each column is the first
/// remaining row with a nonzero entry.
pub fn rank(field: &Field, m: &GfMatrix) -> usize {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.data.clone();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(found) = (pivot_row..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if found != pivot_row {
            for c in 0..cols {
                a.swap(found * cols + c, pivot_row * cols + c);
            }
        }
        let inv = field
            .inv(Field::raw_element(a[pivot_row * cols + col]))
            .expect("pivot is nonzero");
        let (head, tail) = a.split_at_mut((pivot_row + 1) * cols);
        let pivot = &mut head[pivot_row * cols..];
        field.scale_slice(&mut pivot[col..], inv);
        for r in tail.chunks_exact_mut(cols) {
            let factor = r[col];
            if factor != 0 {
                field.mul_add_slice(&mut r[col..], &pivot[col..], Field::raw_element(factor));
            }
        }
        pivot_row += 1;
    }
    pivot_row
}

/// Solves `m * x = rhs` for `m` with at least as many rows as columns.
pub fn solve(field: &Field, m: &GfMatrix, rhs: &[FieldElement]) -> Result<Vec<FieldElement>, LinalgError> {
    if m.rows < m.cols {
        return Err(LinalgError::Shape("solve needs rows >= cols"));
    }
    if rhs.len() != m.rows {
        return Err(LinalgError::Shape("rhs length is not rows"));
    }
    let mut echelon = RowEchelon::new(m.cols, 1);
    let mut inconsistent = false;
    let mut buf = vec![0u16; m.cols + 1];
    for r in 0..m.rows {
        buf[..m.cols].copy_from_slice(m.row(r));
        buf[m.cols] = rhs[r].value();
        if echelon.insert(field, &mut buf) == Insert::Inconsistent {
            inconsistent = true;
        }
    }
    if echelon.rank() < m.cols {
        return Err(LinalgError::RankDeficient {
            rank: echelon.rank(),
            cols: m.cols,
        });
    }
    if inconsistent {
        return Err(LinalgError::InconsistentSystem);
    }
    let x = echelon.back_substitute(field).expect("full rank");
    Ok(x.into_iter().map(Field::raw_element).collect())
}

/// What happened to a row offered to [`RowEchelon::insert`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Insert {
    /// The row became a new pivot.
    Pivot(usize),
    /// The row reduced to zero, right-hand side included.
    Redundant,
    /// The coefficient part reduced to zero but the right-hand side did not.
    Inconsistent,
}

/// Incrementally built row-echelon form of `[A | B]`, where `A` has `width`
/// columns and `B` holds `rhs_width` right-hand-side columns.
///
/// Pivot rows are normalized to a leading one and are zero left of their pivot.
#[derive(Debug, Clone)]
pub struct RowEchelon {
    width: usize,
    rhs_width: usize,
    rows: Vec<Vec<u16>>,
    pivot_of_col: Vec<Option<u32>>,
}

impl RowEchelon {
    pub fn new(width: usize, rhs_width: usize) -> Self {
        Self {
            width,
            rhs_width,
            rows: Vec::new(),
            pivot_of_col: vec![None; width],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Columns of `A` that have no pivot.
    pub fn free_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_of_col
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_none())
            .map(|(c, _)| c)
    }

    /// Reduces `row` (length `width + rhs_width`) against the current pivots
    /// and keeps it if it is independent. `row` is clobbered.
    pub fn insert(&mut self, field: &Field, row: &mut [u16]) -> Insert {
        assert_eq!(row.len(), self.width + self.rhs_width);
        for col in 0..self.width {
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            match self.pivot_of_col[col] {
                Some(p) => {
                    let pivot = &self.rows[p as usize];
                    field.mul_add_slice(&mut row[col..], &pivot[col..], Field::raw_element(factor));
                }
                None => {
                    let inv = field.inv(Field::raw_element(factor)).expect("nonzero");
                    field.scale_slice(&mut row[col..], inv);
                    let idx = self.rows.len();
                    self.pivot_of_col[col] = Some(idx as u32);
                    self.rows.push(row.to_vec());
                    return Insert::Pivot(col);
                }
            }
        }
        if row[self.width..].iter().all(|&v| v == 0) {
            Insert::Redundant
        } else {
            Insert::Inconsistent
        }
    }

    /// With full rank, returns the solution as `width` rows of `rhs_width`
    /// values each, flattened row-major.
    pub fn back_substitute(&self, field: &Field) -> Option<Vec<u16>> {
        if !self.is_full() {
            return None;
        }
        let (w, l) = (self.width, self.rhs_width);
        let mut x = vec![0u16; w * l];
        for col in (0..w).rev() {
            let pivot = &self.rows[self.pivot_of_col[col].expect("full rank") as usize];
            let mut acc = pivot[w..].to_vec();
            for (j, &coef) in pivot.iter().enumerate().take(w).skip(col + 1) {
                if coef != 0 {
                    field.mul_add_slice(&mut acc, &x[j * l..(j + 1) * l], Field::raw_element(coef));
                }
            }
            x[col * l..(col + 1) * l].copy_from_slice(&acc);
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;
    use rand_core::{RngCore, SeedableRng};

    fn random_matrix(field: &Field, rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> GfMatrix {
        let data = (0..rows * cols)
            .map(|_| (rng.next_u32() % field.q()) as u16)
            .collect();
        GfMatrix::from_rows(field, rows, cols, data).unwrap()
    }

    #[test]
    fn rank_examples() {
        let f = Field::gf256();
        assert_eq!(rank(&f, &GfMatrix::identity(7)), 7);
        assert_eq!(rank(&f, &GfMatrix::zeros(5, 4)), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut m = random_matrix(&f, &mut rng, 6, 6);
        for r in 0..6 {
            let v = m.get(r, 1);
            m.set(r, 4, v);
        }
        assert!(rank(&f, &m) <= 5);
    }

    #[test]
    fn solve_examples() {
        let f = Field::gf256();
        let rhs: Vec<FieldElement> = (1..=5).map(|v| f.element(v).unwrap()).collect();
        assert_eq!(solve(&f, &GfMatrix::identity(5), &rhs).unwrap(), rhs);

        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut solved = 0;
        for _ in 0..50 {
            let m = random_matrix(&f, &mut rng, 8, 8);
            let x: Vec<FieldElement> = (0..8).map(|_| f.element_wrapping(rng.next_u32())).collect();
            let b = m.mul_vec(&f, &x).unwrap();
            match solve(&f, &m, &b) {
                Ok(got) => {
                    assert_eq!(rank(&f, &m), 8);
                    assert_eq!(got, x);
                    solved += 1;
                }
                Err(LinalgError::RankDeficient { rank: r, .. }) => assert_eq!(r, rank(&f, &m)),
                Err(e) => panic!("{e}"),
            }
        }
        assert!(solved > 40);

        let mut dup = random_matrix(&f, &mut rng, 6, 4);
        for r in 0..6 {
            let v = dup.get(r, 0);
            dup.set(r, 3, v);
        }
        let b = vec![FieldElement::ZERO; 6];
        assert!(matches!(solve(&f, &dup, &b), Err(LinalgError::RankDeficient { .. })));
    }

    #[test]
    fn solve_detects_inconsistency() {
        let f = Field::gf256();
        // Two identical rows with different right-hand sides.
        let m = GfMatrix::from_rows(&f, 3, 2, vec![1, 0, 0, 1, 1, 0]).unwrap();
        let rhs = [1, 2, 3].map(|v| f.element(v).unwrap());
        assert_eq!(solve(&f, &m, &rhs), Err(LinalgError::InconsistentSystem));
    }

    #[test]
    fn solve_succeeds_iff_full_rank() {
        for f in [Field::gf256(), Field::gf65536()] {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            for _ in 0..200 {
                let rows = 3 + (rng.next_u32() % 4) as usize;
                let cols = 1 + (rng.next_u32() % rows as u32) as usize;
                // Sparse entries make singular instances common.
                let data = (0..rows * cols)
                    .map(|_| if rng.next_u32() % 3 == 0 { (rng.next_u32() % 3) as u16 } else { 0 })
                    .collect();
                let m = GfMatrix::from_rows(&f, rows, cols, data).unwrap();
                let x: Vec<FieldElement> = (0..cols).map(|_| f.element_wrapping(rng.next_u32())).collect();
                let b = m.mul_vec(&f, &x).unwrap();
                let r = rank(&f, &m);
                assert!(r <= rows.min(cols));
                assert_eq!(solve(&f, &m, &b).is_ok(), r == cols);
                assert_eq!(rank(&f, &m.transpose()), r);
            }
        }
    }
}
