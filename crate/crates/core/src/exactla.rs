//! Exact rational scalars and deterministic dense linear algebra.
//!
//! Everything downstream (axiom checkers, cohomology ranks, deformation
//! conditions) reduces to exact zero tests, so scalars are arbitrary-precision
//! rationals and elimination uses a fixed pivot rule: scan columns left to
//! right, take the first nonzero entry from the top. Re-running any routine on
//! equal inputs yields bit-identical output.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. `num_rational` keeps the canonical form invariant
/// for us: gcd(|numerator|, denominator) = 1 and denominator > 0 after every
/// operation. Serializes as `"p/q"`, or `"p"` when the denominator is 1.
pub type Rational = num_rational::BigRational;

/// Rational from an integer pair. Panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn rat_int(num: i64) -> Rational {
    Rational::from_integer(BigInt::from(num))
}

/// Parse `"p/q"` or `"p"`; the result is canonical.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::ShapeMismatch(format!("bad rational numerator in {s:?}")))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::ShapeMismatch(format!("bad rational denominator in {s:?}")))?;
        if den.is_zero() {
            return Err(Error::ShapeMismatch(format!("zero denominator in {s:?}")));
        }
        Ok(Rational::new(num, den))
    } else {
        let num: BigInt = s
            .parse()
            .map_err(|_| Error::ShapeMismatch(format!("bad rational literal {s:?}")))?;
        Ok(Rational::from_integer(num))
    }
}

/// Render in the canonical `"p/q"` / `"p"` form used by every file format.
pub fn rational_to_string(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Column vector over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector {
    entries: Vec<Rational>,
}

impl Vector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Vector { entries }
    }

    pub fn zero(len: usize) -> Self {
        Vector {
            entries: vec![Rational::zero(); len],
        }
    }

    /// Standard basis vector e_i.
    pub fn unit(len: usize, i: usize) -> Self {
        assert!(i < len, "unit index out of range");
        let mut v = Vector::zero(len);
        v.entries[i] = Rational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.entries[i]
    }

    pub fn set(&mut self, i: usize, value: Rational) {
        self.entries[i] = value;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Indices of nonzero coordinates, ascending. Multilinear evaluation
    /// loops use this to skip zero terms.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.entries[i].is_zero()).collect()
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        Vector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        Vector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> Vector {
        Vector::new(self.entries.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, c: &Rational) -> Vector {
        Vector::new(self.entries.iter().map(|a| a * c).collect())
    }

    pub fn add_assign(&mut self, other: &Vector) {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
    }

    /// self += c * other
    pub fn add_scaled(&mut self, c: &Rational, other: &Vector) {
        assert_eq!(self.len(), other.len(), "vector length mismatch");
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += c * b;
        }
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.entries.iter().map(rational_to_string).collect()
    }
}

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        for r in &rows {
            assert_eq!(r.len(), ncols, "ragged rows");
        }
        Mat {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Mat { rows, cols, entries }
    }

    /// Columns are the given vectors.
    pub fn from_cols(cols: &[Vector]) -> Self {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, |c| c.len());
        for c in cols {
            assert_eq!(c.len(), nrows, "ragged columns");
        }
        Mat::from_fn(nrows, ncols, |r, c| cols[c].get(r).clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn col(&self, c: usize) -> Vector {
        Vector::new((0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn row(&self, r: usize) -> Vector {
        Vector::new((0..self.cols).map(|c| self.get(r, c).clone()).collect())
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        Mat::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = Rational::zero();
            for k in 0..self.cols {
                acc += self.get(r, k) * other.get(k, c);
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let mut out = Vector::zero(self.rows);
        for r in 0..self.rows {
            let mut acc = Rational::zero();
            for c in 0..self.cols {
                acc += self.get(r, c) * v.get(c);
            }
            out.set(r, acc);
        }
        out
    }

    /// Reduced row echelon form plus the pivot columns, computed with the
    /// fixed pivot rule (first nonzero in column order).
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            let found = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero());
            let Some(r0) = found else { continue };
            if r0 != pivot_row {
                for c in 0..m.cols {
                    let a = m.get(pivot_row, c).clone();
                    let b = m.get(r0, c).clone();
                    m.set(pivot_row, c, b);
                    m.set(r0, c, a);
                }
            }
            let inv = m.get(pivot_row, col).recip();
            for c in 0..m.cols {
                let v = m.get(pivot_row, c) * &inv;
                m.set(pivot_row, c, v);
            }
            for r in 0..m.rows {
                if r == pivot_row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in 0..m.cols {
                    let v = m.get(r, c) - &factor * m.get(pivot_row, c);
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    /// Rank by exact elimination.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per free column, ordered by
    /// free-column index. Entries come straight off the reduced echelon form.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = Vector::zero(self.cols);
            v.set(free, Rational::one());
            for (row, &col) in pivots.iter().enumerate() {
                v.set(col, -r.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Exact inverse; `NotInvertible` when singular.
    pub fn inverse(&self) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(Error::NotInvertible(format!(
                "matrix is {}x{}, not square",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        // Eliminate on [self | I].
        let mut aug = Mat::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let (reduced, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return Err(Error::NotInvertible(format!("rank {} < {}", pivots.len(), n)));
        }
        aug = reduced;
        Ok(Mat::from_fn(n, n, |r, c| aug.get(r, c + n).clone()))
    }
}

/// Row-echelon basis of the span of `vectors`: nonzero rows of the RREF of
/// the stacked matrix, with their pivot columns. Canonical for the span.
pub fn echelon_basis(vectors: &[Vector]) -> (Vec<Vector>, Vec<usize>) {
    if vectors.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let stacked = Mat::from_rows(vectors.iter().map(|v| v.entries.clone()).collect());
    let (r, pivots) = stacked.rref();
    let rows = (0..pivots.len()).map(|i| r.row(i)).collect();
    (rows, pivots)
}

/// Reduce `v` modulo the span of an echelon basis (as produced by
/// [`echelon_basis`]). The result is the canonical coset representative.
pub fn reduce_mod_echelon(basis: &[Vector], pivots: &[usize], v: &Vector) -> Vector {
    let mut out = v.clone();
    for (row, &col) in basis.iter().zip(pivots) {
        let c = out.get(col).clone();
        if !c.is_zero() {
            out.add_scaled(&-c, row);
        }
    }
    out
}

/// Dimension of span(cocycles) / span(coboundaries).
///
/// Errors with `ContainmentViolation` if some coboundary lies outside the
/// cocycle span, which signals an inconsistent differential upstream.
pub fn quotient_dim(cocycles: &[Vector], coboundaries: &[Vector]) -> Result<usize> {
    let (z_basis, z_pivots) = echelon_basis(cocycles);
    for (i, b) in coboundaries.iter().enumerate() {
        let reduced = reduce_mod_echelon(&z_basis, &z_pivots, b);
        if !reduced.is_zero() {
            return Err(Error::ContainmentViolation(format!(
                "coboundary #{i} is not in the cocycle span"
            )));
        }
    }
    let (b_basis, _) = echelon_basis(coboundaries);
    Ok(z_basis.len() - b_basis.len())
}
