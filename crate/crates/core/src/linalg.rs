//! Dense exact linear algebra over 𝔽_p.

use crate::error::{Error, Result};
use crate::field::PrimeField;

/// Row-major dense matrix with entries reduced mod p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from signed integer rows; entries are reduced mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| field.reduce(v)))
            .collect();
        Ok(FpMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.field.characteristic());
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[u32]) -> Result<Vec<u32>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }
}

/// A consistent system's solution set: `particular + span(nullspace)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<u32>,
    pub nullspace: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved(Solution),
    Inconsistent,
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            SolveOutcome::Solved(s) => Some(s),
            SolveOutcome::Inconsistent => None,
        }
    }
}

/// Solves `A·x = b` by Gauss–Jordan elimination on the augmented matrix.
///
/// Free variables are set to zero in the particular solution; the nullspace
/// basis has one vector per free column, with a 1 in that column.
pub fn solve_linear(a: &FpMatrix, b: &[u32]) -> Result<SolveOutcome> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} against {} rows",
            b.len(),
            a.rows
        )));
    }
    let f = a.field;
    let p = f.characteristic();
    if b.iter().any(|&v| v >= p) {
        return Err(Error::DimensionMismatch("right-hand side not reduced".into()));
    }
    let width = a.cols + 1;
    let mut rows: Vec<Vec<u32>> = (0..a.rows)
        .map(|r| {
            let mut row = Vec::with_capacity(width);
            row.extend_from_slice(a.row(r));
            row.push(b[r]);
            row
        })
        .filter(|row| row.iter().any(|&v| v != 0))
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..a.cols {
        let Some(found) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = f.inv(rows[rank][col]);
        if inv != 1 {
            for v in rows[rank][col..].iter_mut() {
                *v = f.mul(*v, inv);
            }
        }
        let pivot_row = std::mem::take(&mut rows[rank]);
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank {
                continue;
            }
            let factor = row[col];
            if factor == 0 {
                continue;
            }
            for (dst, &src) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if src != 0 {
                    *dst = f.sub(*dst, f.mul(factor, src));
                }
            }
        }
        rows[rank] = pivot_row;
        pivots.push(col);
        rank += 1;
    }

    if rows[rank..].iter().any(|row| row[a.cols] != 0) {
        return Ok(SolveOutcome::Inconsistent);
    }

    let mut particular = vec![0; a.cols];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = rows[r][a.cols];
    }

    let mut is_pivot = vec![false; a.cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let nullspace = (0..a.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0; a.cols];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = f.neg(rows[r][free]);
            }
            v
        })
        .collect();

    Ok(SolveOutcome::Solved(Solution {
        particular,
        nullspace,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn identity_returns_rhs() {
        let f = gf(7);
        let b = vec![3, 0, 6];
        let out = solve_linear(&FpMatrix::identity(f, 3), &b).unwrap();
        let sol = out.solution().unwrap();
        assert_eq!(sol.particular, b);
        assert!(sol.nullspace.is_empty());
    }

    #[test]
    fn zero_matrix_nonzero_rhs_is_inconsistent() {
        let f = gf(3);
        let out = solve_linear(&FpMatrix::zeros(f, 2, 2), &[0, 1]).unwrap();
        assert_eq!(out, SolveOutcome::Inconsistent);
    }

    #[test]
    fn one_by_two_over_f2_matches_enumeration() {
        let f = gf(2);
        let a = FpMatrix::from_rows(f, &[vec![1, 1]]).unwrap();
        // Brute force: the solutions of x + y = 1 over F_2.
        let mut sols = vec![];
        for x in 0..2u32 {
            for y in 0..2u32 {
                if (x + y) % 2 == 1 {
                    sols.push(vec![x, y]);
                }
            }
        }
        assert_eq!(sols, vec![vec![0, 1], vec![1, 0]]);
        let sol = solve_linear(&a, &[1]).unwrap().solution().cloned().unwrap();
        assert_eq!(sol.particular, vec![1, 0]);
        assert_eq!(sol.nullspace, vec![vec![1, 1]]);
    }

    #[test]
    fn dimension_errors() {
        let f = gf(5);
        let a = FpMatrix::zeros(f, 2, 3);
        assert!(matches!(solve_linear(&a, &[0]), Err(Error::DimensionMismatch(_))));
        assert!(FpMatrix::from_rows(f, &[vec![1], vec![1, 2]]).is_err());
    }

    proptest! {
        #[test]
        fn solutions_verify(
            p in prop::sample::select(vec![2u64, 3, 5, 7]),
            rows in 1usize..6,
            cols in 1usize..6,
            seed in prop::collection::vec(-20i64..20, 36),
            rhs in prop::collection::vec(-20i64..20, 6),
        ) {
            let f = gf(p);
            let m: Vec<Vec<i64>> = (0..rows).map(|r| seed[r * 6..r * 6 + cols].to_vec()).collect();
            let a = FpMatrix::from_rows(f, &m).unwrap();
            let b: Vec<u32> = rhs[..rows].iter().map(|&v| f.reduce(v)).collect();
            match solve_linear(&a, &b).unwrap() {
                SolveOutcome::Solved(sol) => {
                    prop_assert_eq!(a.apply(&sol.particular).unwrap(), b);
                    for v in &sol.nullspace {
                        prop_assert!(a.apply(v).unwrap().iter().all(|&x| x == 0));
                    }
                }
                SolveOutcome::Inconsistent => {
                    // Confirm by brute force when the search space is small.
                    if p.pow(cols as u32) <= 4096 {
                        let mut x = vec![0u32; cols];
                        loop {
                            prop_assert_ne!(a.apply(&x).unwrap(), b.clone());
                            let mut i = 0;
                            while i < cols {
                                x[i] += 1;
                                if x[i] < p as u32 { break; }
                                x[i] = 0;
                                i += 1;
                            }
                            if i == cols { break; }
                        }
                    }
                }
            }
        }
    }
}
