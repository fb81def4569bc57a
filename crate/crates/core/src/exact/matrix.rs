//! Dense matrices and fraction-free elimination.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{clear_denominators, Field, Ring};

/// A dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Every solution of `A x = b`: `particular + span(nullspace)`.
///
/// `particular` is zero in every non-pivot coordinate, and each nullspace
/// vector has a single 1 in its free coordinate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Solution<F> {
    pub particular: Vec<F>,
    pub nullspace: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(F::zero(), |acc, (a, x)| acc + a.clone() * x.clone())
            })
            .collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(F::zero(), |acc, k| {
                acc + self[(i, k)].clone() * other[(k, j)].clone()
            })
        })
    }

    /// Exact determinant by fraction-free elimination. Panics unless square.
    pub fn determinant(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return F::one();
        }
        let mut scale = F::one();
        let mut grid = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let (ints, s) = clear_denominators(self.row(i));
            scale = scale * F::from_int(s);
            grid.push(ints);
        }
        let mut e = Echelon::new(grid, self.cols);
        e.run();
        if e.pivots.len() < self.rows {
            return F::zero();
        }
        let det = e.rows[self.rows - 1][self.cols - 1].clone();
        let det = if e.swaps % 2 == 1 { -det } else { det };
        F::from_int(det) / scale
    }

    pub fn rank(&self) -> usize {
        let grid = (0..self.rows)
            .map(|i| clear_denominators(self.row(i)).0)
            .collect();
        let mut e = Echelon::new(grid, self.cols);
        e.run();
        e.pivots.len()
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut b = vec![F::zero(); n];
            b[j] = F::one();
            let sol = self.solve_general(&b).ok()?;
            if !sol.nullspace.is_empty() {
                return None;
            }
            cols.push(sol.particular);
        }
        Some(Self::from_fn(n, n, |i, j| cols[j][i].clone()))
    }

    /// Solves `A x = b`, returning the particular solution with free
    /// variables set to zero and a basis of the nullspace.
    ///
    /// Rows are scaled to integers and reduced fraction-free (Bareiss);
    /// back-substitution to reduced echelon form then runs over the field.
    /// An inconsistent system yields [`Error::Inconsistent`] carrying the
    /// original index of a row whose equation cannot hold.
    pub fn solve_general(&self, b: &[F]) -> Result<Solution<F>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let width = self.cols + 1;
        let grid = (0..self.rows)
            .map(|i| {
                let mut aug = self.row(i).to_vec();
                aug.push(b[i].clone());
                clear_denominators(&aug).0
            })
            .collect();
        let mut e = Echelon::new(grid, self.cols);
        e.run();
        for i in e.pivots.len()..self.rows {
            if !e.rows[i][self.cols].is_zero() {
                return Err(Error::Inconsistent { row: e.origin[i] });
            }
        }

        let rank = e.pivots.len();
        let mut red: Vec<Vec<F>> = e.rows[..rank]
            .iter()
            .map(|r| r.iter().cloned().map(F::from_int).collect())
            .collect();
        for i in (0..rank).rev() {
            let pc = e.pivots[i];
            let inv = red[i][pc].inv();
            for v in red[i].iter_mut() {
                *v = v.clone() * inv.clone();
            }
            for k in 0..i {
                let factor = red[k][pc].clone();
                if factor.is_zero() {
                    continue;
                }
                for j in pc..width {
                    let delta = factor.clone() * red[i][j].clone();
                    red[k][j] = red[k][j].clone() - delta;
                }
            }
        }

        let mut particular = vec![F::zero(); self.cols];
        for (i, &pc) in e.pivots.iter().enumerate() {
            particular[pc] = red[i][self.cols].clone();
        }
        let mut is_pivot = vec![false; self.cols];
        for &pc in &e.pivots {
            is_pivot[pc] = true;
        }
        let nullspace = (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![F::zero(); self.cols];
                v[free] = F::one();
                for (i, &pc) in e.pivots.iter().enumerate() {
                    v[pc] = -red[i][free].clone();
                }
                v
            })
            .collect();
        Ok(Solution {
            particular,
            nullspace,
            pivots: e.pivots,
        })
    }

    /// Confluent Vandermonde matrix for points `x_i` of multiplicity `a_i`.
    ///
    /// Column `j` ranges over `0..Σa_i`; point `x` contributes the rows
    /// `ρ(x, k)` for `k < a`, with `ρ(x, k)_j = j!/(j-k)! · x^(j-k)`, the
    /// `k`-th derivative of `x^j`.
    pub fn confluent_vandermonde(points: &[(F, usize)]) -> Self {
        let n: usize = points.iter().map(|(_, a)| a).sum();
        let mut rows = Vec::with_capacity(n);
        for (x, a) in points {
            for k in 0..*a {
                let row = (0..n)
                    .map(|j| {
                        if j < k {
                            return F::zero();
                        }
                        let falling = ((j - k + 1)..=j).fold(F::one(), |acc, t| acc * F::of(t as i64));
                        falling * x.pow_i((j - k) as i64)
                    })
                    .collect();
                rows.push(row);
            }
        }
        Self::from_rows(rows)
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Fraction-free row echelon reduction over an integer ring.
///
/// Only the first `cols` columns are searched for pivots; any further
/// columns (an augmented right-hand side) are carried along.
struct Echelon<I> {
    rows: Vec<Vec<I>>,
    origin: Vec<usize>,
    cols: usize,
    pivots: Vec<usize>,
    swaps: usize,
}

impl<I: Ring> Echelon<I> {
    fn new(rows: Vec<Vec<I>>, cols: usize) -> Self {
        let origin = (0..rows.len()).collect();
        Echelon {
            rows,
            origin,
            cols,
            pivots: Vec::new(),
            swaps: 0,
        }
    }

    fn run(&mut self) {
        let n = self.rows.len();
        let width = self.rows.first().map_or(0, Vec::len);
        let mut prev = I::one();
        let mut k = 0;
        for c in 0..self.cols {
            if k == n {
                break;
            }
            let Some(p) = (k..n).find(|&r| !self.rows[r][c].is_zero()) else {
                continue;
            };
            if p != k {
                self.rows.swap(p, k);
                self.origin.swap(p, k);
                self.swaps += 1;
            }
            let (head, tail) = self.rows.split_at_mut(k + 1);
            let pivot_row = &head[k];
            let pivot = pivot_row[c].clone();
            for row in tail.iter_mut() {
                let lead = row[c].clone();
                for j in (c + 1)..width {
                    let num = pivot.clone() * row[j].clone() - lead.clone() * pivot_row[j].clone();
                    debug_assert!((num.clone() % prev.clone()).is_zero());
                    row[j] = num / prev.clone();
                }
                row[c] = I::zero();
            }
            prev = pivot;
            self.pivots.push(c);
            k += 1;
        }
    }
}
