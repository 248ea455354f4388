//! Dense exact matrices over the Gaussian rationals.
//!
//! Small and allocation-happy; everything in this crate is dim <= 16, so the
//! only thing that matters is exactness.

use crate::gauss::GaussRat;
use std::ops::{Add, Mul, Sub};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussMat {
    rows: usize,
    cols: usize,
    data: Vec<GaussRat>,
}

impl GaussMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        GaussMat { rows, cols, data: vec![GaussRat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = GaussMat::zeros(n, n);
        for k in 0..n {
            m.set(k, k, GaussRat::one());
        }
        m
    }

    /// Builds from integer entries, row major.
    pub fn from_ints(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        GaussMat {
            rows,
            cols,
            data: entries.iter().map(|&n| GaussRat::from_int(n)).collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> GaussRat) -> Self {
        let mut m = GaussMat::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, f(r, c));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussRat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussRat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn scale(&self, c: &GaussRat) -> Self {
        GaussMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Column-stacked entries, row major.
    pub fn flatten(&self) -> &[GaussRat] {
        &self.data
    }
}

impl Add for &GaussMat {
    type Output = GaussMat;
    fn add(self, rhs: &GaussMat) -> GaussMat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        GaussMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &GaussMat {
    type Output = GaussMat;
    fn sub(self, rhs: &GaussMat) -> GaussMat {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols);
        GaussMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &GaussMat {
    type Output = GaussMat;
    fn mul(self, rhs: &GaussMat) -> GaussMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = GaussMat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for c in 0..rhs.cols {
                let mut acc = GaussRat::zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.get(r, k) * rhs.get(k, c));
                }
                out.set(r, c, acc);
            }
        }
        out
    }
}

/// Least-squares-free exact solver: reduces `a` to RREF carrying `rhs` along.
/// Returns per-column solutions, or `None` for any inconsistent column.
/// `rank_deficient` is set when `a`'s columns are linearly dependent.
pub struct SolveOutcome {
    pub solutions: Vec<Option<Vec<GaussRat>>>,
    pub rank: usize,
}

pub fn solve_columns(a: &GaussMat, rhs: &GaussMat) -> SolveOutcome {
    assert_eq!(a.rows, rhs.rows);
    let m = a.rows;
    let n = a.cols;
    let k = rhs.cols;
    // Augmented working copy.
    let mut w = GaussMat::zeros(m, n + k);
    for r in 0..m {
        for c in 0..n {
            w.set(r, c, a.get(r, c).clone());
        }
        for c in 0..k {
            w.set(r, n + c, rhs.get(r, c).clone());
        }
    }
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..m).find(|&r| !w.get(r, col).is_zero()) else {
            continue;
        };
        // Swap rows.
        for c in 0..n + k {
            let tmp = w.get(row, c).clone();
            w.set(row, c, w.get(pr, c).clone());
            w.set(pr, c, tmp);
        }
        let inv = w.get(row, col).inv().expect("pivot nonzero");
        for c in 0..n + k {
            w.set(row, c, &(w.get(row, c).clone()) * &inv);
        }
        for r in 0..m {
            if r != row && !w.get(r, col).is_zero() {
                let f = w.get(r, col).clone();
                for c in 0..n + k {
                    let v = w.get(r, c) - &(&f * w.get(row, c));
                    w.set(r, c, v);
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == m {
            break;
        }
    }
    let rank = pivot_cols.len();
    let mut solutions = Vec::with_capacity(k);
    for j in 0..k {
        // Inconsistent iff some zero-row of the reduced system has a nonzero rhs.
        let inconsistent = (rank..m).any(|r| !w.get(r, n + j).is_zero());
        if inconsistent {
            solutions.push(None);
            continue;
        }
        let mut x = vec![GaussRat::zero(); n];
        for (r, &pc) in pivot_cols.iter().enumerate() {
            x[pc] = w.get(r, n + j).clone();
        }
        solutions.push(Some(x));
    }
    SolveOutcome { solutions, rank }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiply_identity() {
        let a = GaussMat::from_ints(2, 2, &[1, 2, 3, 4]);
        let i = GaussMat::identity(2);
        assert_eq!(&a * &i, a);
    }

    #[test]
    fn exact_solve() {
        // [[2, 0], [1, 3]] x = [4, 5] -> x = [2, 1]
        let a = GaussMat::from_ints(2, 2, &[2, 0, 1, 3]);
        let rhs = GaussMat::from_ints(2, 1, &[4, 5]);
        let out = solve_columns(&a, &rhs);
        assert_eq!(out.rank, 2);
        let x = out.solutions[0].as_ref().unwrap();
        assert_eq!(x[0], GaussRat::from_int(2));
        assert_eq!(x[1], GaussRat::from_int(1));
    }

    #[test]
    fn inconsistent_detected() {
        // x + y = 1 and x + y = 2 has no solution.
        let a = GaussMat::from_ints(2, 2, &[1, 1, 1, 1]);
        let rhs = GaussMat::from_ints(2, 1, &[1, 2]);
        let out = solve_columns(&a, &rhs);
        assert_eq!(out.rank, 1);
        assert!(out.solutions[0].is_none());
    }
}
