//! Exact integer and rational linear algebra.
//!
//! Every other module sits on top of this one: primitive vectors, saturated
//! integer kernels (through a column Hermite reduction), unimodular inverses
//! and the small amount of rational elimination the polyhedral code needs.
//! All arithmetic is arbitrary precision.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type IntVector = Vec<BigInt>;
pub type Rational = BigRational;
pub type RationalVector = Vec<Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("the zero vector has no primitive part")]
    ZeroVector,
    #[error("rows are linearly dependent (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },
    #[error("matrix is not unimodular (determinant {det})")]
    NotUnimodular { det: BigInt },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn int_vec(v: &[i64]) -> IntVector {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

pub fn rat_vec(v: &[i64]) -> RationalVector {
    v.iter()
        .map(|&x| Rational::from_integer(BigInt::from(x)))
        .collect()
}

pub fn to_rational(v: &[BigInt]) -> RationalVector {
    v.iter().map(rat_int).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_int_rat(a: &[BigInt], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + y * x)
}

pub fn rat_sub(a: &[Rational], b: &[Rational]) -> RationalVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `base^exp` for a rational base and an integer exponent (`0^0 = 1`).
///
/// Panics on a zero base with a negative exponent.
pub fn rat_pow(base: &Rational, exp: &BigInt) -> Rational {
    let e = exp.to_i32().expect("exponent out of range");
    if e == 0 {
        return Rational::one();
    }
    assert!(
        !(base.is_zero() && e < 0),
        "zero raised to a negative power"
    );
    num_traits::pow::Pow::pow(base, e)
}

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.to_rows())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, LatticeError> {
        if data.len() != rows * cols {
            return Err(LatticeError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed for the empty case.
    pub fn from_rows(rows: &[IntVector], cols: usize) -> Result<Self, LatticeError> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LatticeError::Shape(format!(
                "row of length {} in a matrix with {cols} columns",
                bad.len()
            )));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().collect(),
        })
    }

    pub fn from_columns(columns: &[IntVector], rows: usize) -> Result<Self, LatticeError> {
        Ok(Self::from_rows(columns, rows)?.transpose())
    }

    /// Convenience constructor from small literals.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows: Vec<IntVector> = rows.iter().map(|r| int_vec(r)).collect();
        Self::from_rows(&rows, cols).expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> IntVector {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<IntVector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn to_columns(&self) -> Vec<IntVector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += &self[(r, k)] * &other[(k, c)];
                }
                out[(r, c)] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> IntVector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    pub fn mul_rat_vec(&self, v: &[Rational]) -> RationalVector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|r| dot_int_rat(self.row(r), v))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    fn to_rational_rows(&self) -> Vec<RationalVector> {
        (0..self.rows).map(|r| to_rational(self.row(r))).collect()
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> Result<BigInt, LatticeError> {
        if self.rows != self.cols {
            return Err(LatticeError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !a[(r, k)].is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    pub fn rank(&self) -> usize {
        rational_rank(&self.to_rational_rows())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// column[dst] += factor * column[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self[(r, src)] * factor;
            self[(r, dst)] += v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self[(src, c)] * factor;
            self[(dst, c)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

/// Divides `v` by the gcd of its entries.
pub fn primitive_part(v: &[BigInt]) -> Result<IntVector, LatticeError> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x)).is_one()
}

/// Scales a nonzero rational vector to the primitive integer vector pointing
/// the same way.
pub fn primitive_direction(v: &[Rational]) -> Result<IntVector, LatticeError> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let scaled: IntVector = v.iter().map(|x| (x * &l).to_integer()).collect();
    primitive_part(&scaled)
}

/// Column echelon reduction: returns `(h, u)` with `m * u = h`, `u`
/// unimodular, and the first `rank` columns of `h` in echelon form while the
/// remaining columns are zero.
pub fn column_echelon(m: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.cols());
    let mut pivot_col = 0;
    for r in 0..m.rows() {
        if pivot_col == m.cols() {
            break;
        }
        // Euclid across the row: leave gcd in pivot_col, zeros to its right.
        loop {
            let nonzero: Vec<usize> = (pivot_col..m.cols())
                .filter(|&c| !h[(r, c)].is_zero())
                .collect();
            if nonzero.is_empty() {
                break;
            }
            let smallest = *nonzero
                .iter()
                .min_by_key(|&&c| h[(r, c)].abs())
                .expect("nonempty");
            h.swap_cols(pivot_col, smallest);
            u.swap_cols(pivot_col, smallest);
            let mut done = true;
            for c in pivot_col + 1..m.cols() {
                if h[(r, c)].is_zero() {
                    continue;
                }
                let q = h[(r, c)].div_floor(&h[(r, pivot_col)]);
                let neg_q = -q;
                h.add_col_multiple(c, pivot_col, &neg_q);
                u.add_col_multiple(c, pivot_col, &neg_q);
                if !h[(r, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !h[(r, pivot_col)].is_zero() {
            if h[(r, pivot_col)].is_negative() {
                h.negate_col(pivot_col);
                u.negate_col(pivot_col);
            }
            pivot_col += 1;
        }
    }
    (h, u, pivot_col)
}

/// Row-style Hermite normal form of the lattice spanned by `rows`; zero rows
/// are dropped. Pivots are positive and entries above a pivot are reduced
/// into `[0, pivot)`.
pub fn row_hermite(rows: &[IntVector], cols: usize) -> Vec<IntVector> {
    let mut a = IntMatrix::from_rows(rows, cols).expect("consistent row lengths");
    let mut pivot_row = 0;
    for c in 0..cols {
        if pivot_row == a.rows() {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (pivot_row..a.rows())
                .filter(|&r| !a[(r, c)].is_zero())
                .collect();
            if nonzero.is_empty() {
                break;
            }
            let smallest = *nonzero
                .iter()
                .min_by_key(|&&r| a[(r, c)].abs())
                .expect("nonempty");
            a.swap_rows(pivot_row, smallest);
            let mut done = true;
            for r in pivot_row + 1..a.rows() {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let q = -a[(r, c)].div_floor(&a[(pivot_row, c)]);
                a.add_row_multiple(r, pivot_row, &q);
                if !a[(r, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[(pivot_row, c)].is_zero() {
            continue;
        }
        if a[(pivot_row, c)].is_negative() {
            a.negate_row(pivot_row);
        }
        for r in 0..pivot_row {
            let q = -a[(r, c)].div_floor(&a[(pivot_row, c)]);
            a.add_row_multiple(r, pivot_row, &q);
        }
        pivot_row += 1;
    }
    a.to_rows().into_iter().take(pivot_row).collect()
}

/// A Z-basis of the saturated lattice `{x in Z^n : m x = 0}` for a matrix of
/// any rank, in row Hermite form.
pub fn integer_kernel(m: &IntMatrix) -> Vec<IntVector> {
    let (_, u, rank) = column_echelon(m);
    let basis: Vec<IntVector> = (rank..m.cols()).map(|c| u.column(c)).collect();
    row_hermite(&basis, m.cols())
}

/// Primitive basis of the saturated kernel of a full-row-rank matrix.
///
/// The basis is in row Hermite form, so every vector has a positive first
/// nonzero entry.
pub fn integer_kernel_basis(m: &IntMatrix) -> Result<Vec<IntVector>, LatticeError> {
    let rank = m.rank();
    if rank < m.rows() {
        return Err(LatticeError::RankDeficient {
            rank,
            rows: m.rows(),
        });
    }
    Ok(integer_kernel(m))
}

/// Exact integer inverse of a matrix with determinant +-1.
pub fn unimodular_inverse(q: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    let det = q.determinant()?;
    if !det.abs().is_one() {
        return Err(LatticeError::NotUnimodular { det });
    }
    let n = q.rows();
    let inv = rational_inverse(&q.to_rational_rows()).expect("unimodular matrix is invertible");
    let mut out = IntMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            debug_assert!(inv[r][c].is_integer());
            out[(r, c)] = inv[r][c].to_integer();
        }
    }
    Ok(out)
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rational_rref(a: &mut [RationalVector]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
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
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rational_rank(rows: &[RationalVector]) -> usize {
    let mut a = rows.to_vec();
    rational_rref(&mut a).len()
}

pub fn rational_inverse(a: &[RationalVector]) -> Option<Vec<RationalVector>> {
    let n = a.len();
    let mut aug: Vec<RationalVector> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = rational_rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `a x = b` over Q, returning one solution if any exists.
pub fn rational_solve(a: &[RationalVector], b: &[Rational]) -> Option<RationalVector> {
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<RationalVector> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rational_rref(&mut aug);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_part_divides_by_gcd() {
        assert_eq!(primitive_part(&int_vec(&[2, 4])).unwrap(), int_vec(&[1, 2]));
        assert_eq!(
            primitive_part(&int_vec(&[3, -6, 3])).unwrap(),
            int_vec(&[1, -2, 1])
        );
        assert_eq!(
            primitive_part(&int_vec(&[0, 0])),
            Err(LatticeError::ZeroVector)
        );
        assert_eq!(primitive_part(&int_vec(&[-4])).unwrap(), int_vec(&[-1]));
    }

    #[test]
    fn kernel_examples() {
        let k = integer_kernel_basis(&IntMatrix::from_i64_rows(&[&[1, 1]])).unwrap();
        assert_eq!(k, vec![int_vec(&[1, -1])]);
        let k =
            integer_kernel_basis(&IntMatrix::from_i64_rows(&[&[1, 0, -1], &[0, 1, 0]])).unwrap();
        assert_eq!(k, vec![int_vec(&[1, 0, 1])]);
        let k = integer_kernel_basis(&IntMatrix::from_i64_rows(&[&[1, 2]])).unwrap();
        assert_eq!(k, vec![int_vec(&[2, -1])]);
    }

    #[test]
    fn kernel_is_saturated_not_scaled() {
        // Q-kernel of [2 4] is spanned by (2,-1); a naive integer scaling of
        // a rational basis could return (4,-2).
        let k = integer_kernel_basis(&IntMatrix::from_i64_rows(&[&[2, 4]])).unwrap();
        assert_eq!(k, vec![int_vec(&[2, -1])]);
        let k = integer_kernel_basis(&IntMatrix::from_i64_rows(&[&[6, 10, 15]])).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(is_primitive(v));
        }
    }

    #[test]
    fn kernel_of_empty_matrix_is_standard_basis() {
        let m = IntMatrix::from_rows(&[], 3).unwrap();
        let k = integer_kernel_basis(&m).unwrap();
        assert_eq!(k, IntMatrix::identity(3).to_rows());
    }

    #[test]
    fn kernel_rejects_dependent_rows() {
        let m = IntMatrix::from_i64_rows(&[&[1, 0], &[2, 0]]);
        assert_eq!(
            integer_kernel_basis(&m),
            Err(LatticeError::RankDeficient { rank: 1, rows: 2 })
        );
    }

    #[test]
    fn unimodular_inverse_examples() {
        assert_eq!(
            unimodular_inverse(&IntMatrix::identity(3)).unwrap(),
            IntMatrix::identity(3)
        );
        assert_eq!(
            unimodular_inverse(&IntMatrix::from_i64_rows(&[&[1, 1], &[0, 1]])).unwrap(),
            IntMatrix::from_i64_rows(&[&[1, -1], &[0, 1]])
        );
        assert_eq!(
            unimodular_inverse(&IntMatrix::from_i64_rows(&[&[2, 0], &[0, 1]])),
            Err(LatticeError::NotUnimodular { det: int(2) })
        );
        let q = IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(unimodular_inverse(&q).unwrap(), q);
    }

    #[test]
    fn determinant_small_cases() {
        let m = IntMatrix::from_i64_rows(&[&[0, 1, 2], &[3, 4, 5], &[6, 7, 9]]);
        assert_eq!(m.determinant().unwrap(), int(-3));
        let m = IntMatrix::from_i64_rows(&[&[-1, -1], &[0, 1]]);
        assert_eq!(m.determinant().unwrap(), int(-1));
    }

    #[test]
    fn primitive_direction_clears_denominators() {
        let v = vec![rat(-1, 2), rat(3, 4)];
        assert_eq!(primitive_direction(&v).unwrap(), int_vec(&[-2, 3]));
    }

    #[test]
    fn row_hermite_is_canonical() {
        let a = vec![int_vec(&[2, 3]), int_vec(&[4, 5])];
        let b = vec![int_vec(&[2, 1]), int_vec(&[0, 1])];
        // both bases span the index-2 lattice {(x,y): x even}
        assert_eq!(row_hermite(&a, 2), row_hermite(&b, 2));
        assert_eq!(row_hermite(&a, 2), vec![int_vec(&[2, 0]), int_vec(&[0, 1])]);
    }
}
