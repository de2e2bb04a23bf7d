//! Exact linear algebra over Q.
//!
//! [`rank_bareiss`] and [`kernel_basis`] run fraction-free elimination over
//! big integers; [`rank_naive_oracle`] is a deliberately separate rational
//! Gaussian elimination used to cross-check them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix entries have length {got}, expected {rows}×{cols}")]
    Shape { rows: usize, cols: usize, got: usize },
    #[error("matrix of size {rows}×{cols} exceeds the oracle size guard")]
    SizeGuardExceeded { rows: usize, cols: usize },
}

/// Largest `rows·cols` accepted by the naive oracle.
pub const ORACLE_SIZE_GUARD: usize = 1_000_000;

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}×{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::Shape { rows, cols, got: entries.len() });
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, entries: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigRational::one();
        }
        m
    }

    /// Builds from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigRational>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let got: usize = rows.iter().map(Vec::len).sum();
        if rows.iter().any(|row| row.len() != cols) {
            return Err(LinalgError::Shape { rows: r, cols, got });
        }
        Ok(RationalMatrix { rows: r, cols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        Self::from_rows(cols, data).expect("ragged integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        RationalMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Stacks the rows of `other` below `self`.
    pub fn vstack(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        RationalMatrix { rows: self.rows + other.rows, cols: self.cols, entries }
    }
}

/// Rows scaled to integers (each row multiplied by the lcm of its denominators).
fn integer_rows(m: &RationalMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows)
        .map(|r| {
            let row = m.row(r);
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

/// Fraction-free row echelon form. Pivot: first nonzero entry in the column,
/// scanning rows top-down. Returns the echelon rows and pivot columns.
fn bareiss_echelon(m: &RationalMatrix) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut a = integer_rows(m);
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Exact rank over Q via Bareiss elimination.
pub fn rank_bareiss(m: &RationalMatrix) -> usize {
    bareiss_echelon(m).1.len()
}

/// Clears denominators, divides by the content and makes the first nonzero entry positive.
pub fn normalize_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    let g = g * sign;
    ints.iter().map(|x| x / &g).collect()
}

/// A Q-basis of the right kernel, one integer vector per non-pivot column.
///
/// Vector `k` has a 1 (before scaling) at the `k`-th free column and zeros at
/// the other free columns; vectors are normalized by
/// [`normalize_integer_vector`].
pub fn kernel_basis(m: &RationalMatrix) -> Vec<Vec<BigInt>> {
    let (echelon, pivots) = bareiss_echelon(m);
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut x = vec![BigRational::zero(); cols];
        x[free] = BigRational::one();
        for (i, &pc) in pivots.iter().enumerate().rev() {
            let row = &echelon[i];
            let mut s = BigRational::zero();
            for j in pc + 1..cols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    s += BigRational::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[pc] = -s / BigRational::from_integer(row[pc].clone());
        }
        basis.push(normalize_integer_vector(&x));
    }
    basis
}

fn height(q: &BigRational) -> u64 {
    q.numer().bits() + q.denom().bits()
}

/// Rank by plain rational Gaussian elimination, pivoting on the entry of
/// smallest numerator/denominator size. Independent of [`rank_bareiss`].
pub fn rank_naive_oracle(m: &RationalMatrix) -> Result<usize, LinalgError> {
    if m.rows.saturating_mul(m.cols) > ORACLE_SIZE_GUARD {
        return Err(LinalgError::SizeGuardExceeded { rows: m.rows, cols: m.cols });
    }
    let mut a: Vec<Vec<BigRational>> = (0..m.rows).map(|r| m.row(r).to_vec()).collect();
    let mut rank = 0;
    for c in 0..m.cols {
        if rank == m.rows {
            break;
        }
        let Some(p) = (rank..m.rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| (height(&a[i][c]), i))
        else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        for i in rank + 1..m.rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            for j in c..m.cols {
                let t = &f * &a[rank][j];
                a[i][j] -= t;
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// Exact determinant of a square matrix (rational elimination).
pub fn determinant(m: &RationalMatrix) -> BigRational {
    assert_eq!(m.rows, m.cols, "determinant of non-square matrix");
    let n = m.rows;
    let mut a: Vec<Vec<BigRational>> = (0..n).map(|r| m.row(r).to_vec()).collect();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

/// Incrementally maintained Q-span of rational vectors, kept in reduced
/// echelon form.
#[derive(Clone, Debug)]
pub struct QSpan {
    dim: usize,
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl QSpan {
    pub fn new(dim: usize) -> Self {
        QSpan { dim, rows: Vec::new() }
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[BigRational]) -> Vec<BigRational> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns true when the dimension grew.
    pub fn insert(&mut self, v: &[BigRational]) -> bool {
        assert_eq!(v.len(), self.dim, "span vector length");
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = BigRational::one() / &v[p];
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.rows.push((p, v));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn empty_system_has_rank_zero_and_full_kernel() {
        let m = RationalMatrix::zeros(0, 6);
        assert_eq!(rank_bareiss(&m), 0);
        assert_eq!(rank_naive_oracle(&m).unwrap(), 0);
        let k = kernel_basis(&RationalMatrix::zeros(0, 4));
        assert_eq!(k.len(), 4);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x, BigInt::from((i == j) as i64));
            }
        }
    }

    #[test]
    fn gaussian_square_t_matrix() {
        let m = RationalMatrix::from_i64(&[vec![1, 0, -1, 0, 0, 0], vec![0, -1, 0, 0, 1, 0]]);
        assert_eq!(rank_bareiss(&m), 2);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 4);
        for v in &k {
            let vq: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            assert!(m.mul_vec(&vq).iter().all(Zero::is_zero));
        }
        let stacked = RationalMatrix::from_rows(
            6,
            k.iter().map(|v| v.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect(),
        )
        .unwrap();
        assert_eq!(rank_bareiss(&stacked), 4);
    }

    #[test]
    fn identity_rank_and_trivial_kernel() {
        assert_eq!(rank_bareiss(&RationalMatrix::identity(5)), 5);
        assert!(kernel_basis(&RationalMatrix::identity(3)).is_empty());
    }

    #[test]
    fn outer_product_has_rank_one() {
        let u = [1, -2, 3, 0, 5, 7];
        let v = [2, 1, -1, 4, 0, 3];
        let rows: Vec<Vec<i64>> = u.iter().map(|a| v.iter().map(|b| a * b).collect()).collect();
        let m = RationalMatrix::from_i64(&rows);
        assert_eq!(rank_bareiss(&m), 1);
        assert_eq!(rank_naive_oracle(&m).unwrap(), 1);
    }

    #[test]
    fn kernel_vectors_are_normalized() {
        let m = RationalMatrix::new(1, 3, vec![q(2), BigRational::new(4.into(), 3.into()), q(0)]).unwrap();
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        // 2x + 4/3 y = 0 with y = 1 gives x = −2/3, scaled to (−2, 3, 0) then sign-flipped.
        assert_eq!(k[0], vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]);
        assert_eq!(k[1], vec![BigInt::from(0), BigInt::from(0), BigInt::from(1)]);
    }

    #[test]
    fn oracle_guard() {
        let m = RationalMatrix::zeros(1001, 1000);
        assert_eq!(
            rank_naive_oracle(&m),
            Err(LinalgError::SizeGuardExceeded { rows: 1001, cols: 1000 })
        );
    }

    #[test]
    fn shape_checked() {
        assert!(RationalMatrix::new(2, 2, vec![q(1)]).is_err());
    }

    #[test]
    fn determinant_small() {
        let m = RationalMatrix::from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(determinant(&m), q(-1));
        let m = RationalMatrix::from_i64(&[vec![2, 3, 1], vec![4, 1, 0], vec![0, 5, 3]]);
        assert_eq!(determinant(&m), q(-10));
    }

    #[test]
    fn span_tracks_dimension() {
        let mut s = QSpan::new(3);
        assert!(s.insert(&[q(1), q(2), q(0)]));
        assert!(!s.insert(&[q(2), q(4), q(0)]));
        assert!(s.insert(&[q(0), q(1), q(1)]));
        assert!(s.contains(&[q(1), q(3), q(1)]));
        assert!(!s.contains(&[q(0), q(0), q(1)]));
        assert_eq!(s.dimension(), 2);
    }
}
