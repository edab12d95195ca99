//! Affine subtori `V = Rp_1 + ... + Rp_k + a` and their chartwise binomial
//! equations.
//!
//! The offset `a` is carried as `E = e^a`, a vector of positive rationals, so
//! every coefficient that appears is an exact rational monomial in `E`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::charts::{int_pow, monomial, ChartAtlas, ChartError, Scalar};
use crate::lattice::{
    dot, integer_kernel_basis, is_primitive, rat_pow, IntMatrix, IntVector, LatticeError, Rational,
    RationalVector,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubtorusError {
    #[error("p_{} is not primitive", .0 + 1)]
    NotPrimitive(usize),
    #[error("the spanning vectors are linearly dependent")]
    Dependent,
    #[error("offset entry E_{} must be positive", .0 + 1)]
    NonPositiveOffset(usize),
    #[error("expected vectors of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("more spanning vectors ({k}) than the dimension ({n})")]
    TooManyVectors { k: usize, n: usize },
}

/// A validated affine subspace with rational slopes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSubtorus {
    n: usize,
    p: Vec<IntVector>,
    offset_exp: RationalVector,
    q: Vec<IntVector>,
}

pub fn validate_subspace(
    p: &[IntVector],
    offset_exp: &[Rational],
) -> Result<AffineSubtorus, SubtorusError> {
    let n = offset_exp.len();
    if p.len() > n {
        return Err(SubtorusError::TooManyVectors { k: p.len(), n });
    }
    for pl in p {
        if pl.len() != n {
            return Err(SubtorusError::DimensionMismatch {
                expected: n,
                got: pl.len(),
            });
        }
    }
    let m = IntMatrix::from_rows(p, n).expect("lengths checked");
    let q = integer_kernel_basis(&m).map_err(|e| match e {
        LatticeError::RankDeficient { .. } => SubtorusError::Dependent,
        other => unreachable!("kernel of a well-shaped matrix: {other}"),
    })?;
    if let Some(l) = p.iter().position(|pl| !is_primitive(pl)) {
        return Err(SubtorusError::NotPrimitive(l));
    }
    if let Some(i) = offset_exp.iter().position(|e| !e.is_positive()) {
        return Err(SubtorusError::NonPositiveOffset(i));
    }
    Ok(AffineSubtorus {
        n,
        p: p.to_vec(),
        offset_exp: offset_exp.to_vec(),
        q,
    })
}

impl AffineSubtorus {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.p.len()
    }

    pub fn p(&self) -> &[IntVector] {
        &self.p
    }

    pub fn q(&self) -> &[IntVector] {
        &self.q
    }

    pub fn offset_exp(&self) -> &[Rational] {
        &self.offset_exp
    }

    /// `e^{<a, x>}` as the exact monomial `Π E_m^{x_m}`.
    pub fn exp_pairing(&self, x: &[BigInt]) -> Rational {
        self.offset_exp
            .iter()
            .zip(x)
            .fold(Rational::from_integer(1.into()), |acc, (e, xi)| {
                acc * rat_pow(e, xi)
            })
    }

    /// The same subspace with the orthogonal basis replaced, for checking
    /// that nothing depends on the particular choice of `q`.
    pub fn with_q(&self, q: Vec<IntVector>) -> Self {
        Self { q, ..self.clone() }
    }
}

/// Rows are the `p_l`, so applying it to `ξ` gives `i_V^*(ξ)`.
pub fn pullback_matrix(v: &AffineSubtorus) -> IntMatrix {
    IntMatrix::from_rows(&v.p, v.n).expect("validated shape")
}

/// Splits of `{0..n}` by the sign of the pairings `s_i = <u_i, q_j>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignSplit {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
    pub zero: Vec<usize>,
}

impl SignSplit {
    pub fn of(s: &[BigInt]) -> Self {
        let pick = |f: &dyn Fn(&BigInt) -> bool| (0..s.len()).filter(|&i| f(&s[i])).collect();
        Self {
            plus: pick(&|x| !x.is_negative()),
            minus: pick(&|x| !x.is_positive()),
            zero: pick(&|x| x.is_zero()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexProfile {
    pub label: usize,
    /// Coordinates `i` with `<p_l, v_i> = 0` for all `l` (0-based).
    pub j_set: Vec<usize>,
    pub splits: Vec<SignSplit>,
}

/// `<p_l, v^λ_i>` for all `l` (rows) and `i` (columns).
pub fn weight_matrix(
    atlas: &ChartAtlas,
    v: &AffineSubtorus,
    label: usize,
) -> Result<IntMatrix, ChartError> {
    let q = &atlas.chart(label)?.q;
    Ok(pullback_matrix(v).mul(q))
}

/// `<u^λ_i, q_j>` for all `j` (rows) and `i` (columns).
pub fn pairing_matrix(
    atlas: &ChartAtlas,
    v: &AffineSubtorus,
    label: usize,
) -> Result<IntMatrix, ChartError> {
    let q_inv = &atlas.chart(label)?.q_inv;
    let rows: Vec<IntVector> = v.q.iter().map(|qj| q_inv.mul_vec(qj)).collect();
    Ok(IntMatrix::from_rows(&rows, v.n).expect("validated shape"))
}

pub fn index_profile(
    atlas: &ChartAtlas,
    v: &AffineSubtorus,
    label: usize,
) -> Result<IndexProfile, ChartError> {
    let w = weight_matrix(atlas, v, label)?;
    let j_set = (0..v.n)
        .filter(|&i| (0..v.k()).all(|l| w[(l, i)].is_zero()))
        .collect();
    let pairings = pairing_matrix(atlas, v, label)?;
    let splits = (0..pairings.rows())
        .map(|j| SignSplit::of(pairings.row(j)))
        .collect();
    Ok(IndexProfile {
        label,
        j_set,
        splits,
    })
}

/// `f(z) = Π_{s_i>0} z_i^{s_i} - c Π_{s_i<0} z_i^{-s_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialEquation {
    pub label: usize,
    /// Index of `q_j` in the subtorus' orthogonal basis (0-based).
    pub j: usize,
    pub exponents: IntVector,
    pub coefficient: Rational,
}

impl BinomialEquation {
    pub fn split(&self) -> SignSplit {
        SignSplit::of(&self.exponents)
    }

    /// Exponent vector of the first monomial.
    pub fn positive_part(&self) -> IntVector {
        self.exponents
            .iter()
            .map(|s| {
                if s.is_positive() {
                    s.clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect()
    }

    /// Exponent vector of the second monomial (the one carrying `c`).
    pub fn negative_part(&self) -> IntVector {
        self.exponents
            .iter()
            .map(|s| if s.is_negative() { -s } else { BigInt::zero() })
            .collect()
    }

    /// Gradient of `f` at `z`.
    pub fn gradient<T: Scalar>(&self, z: &[T]) -> Vec<T> {
        let c = T::from_rational(&self.coefficient);
        let pos = self.positive_part();
        let neg = self.negative_part();
        (0..z.len())
            .map(|i| monomial_derivative(z, &pos, i) - c.clone() * monomial_derivative(z, &neg, i))
            .collect()
    }
}

/// `∂/∂z_i` of `z^e` for a nonnegative exponent vector `e`.
fn monomial_derivative<T: Scalar>(z: &[T], e: &[BigInt], i: usize) -> T {
    if e[i].is_zero() {
        return T::zero();
    }
    let mut reduced = e.to_vec();
    reduced[i] -= 1;
    let factor = T::from_rational(&Rational::from_integer(e[i].clone()));
    factor * monomial(z, &reduced).expect("nonnegative exponents")
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &[BigInt]) -> fmt::Result {
    let mut first = true;
    for (i, x) in e.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "z{}", i + 1)?;
        if !x.to_i64().is_some_and(|v| v == 1) {
            write!(f, "^{x}")?;
        }
    }
    if first {
        write!(f, "1")?;
    }
    Ok(())
}

impl fmt::Display for BinomialEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_monomial(f, &self.positive_part())?;
        write!(f, " - ")?;
        let neg = self.negative_part();
        let one = Rational::from_integer(1.into());
        if self.coefficient != one {
            write!(f, "{}", self.coefficient)?;
            if neg.iter().any(|x| !x.is_zero()) {
                write!(f, "*")?;
                write_monomial(f, &neg)?;
            }
            Ok(())
        } else {
            write_monomial(f, &neg)
        }
    }
}

pub fn defining_equations(
    atlas: &ChartAtlas,
    v: &AffineSubtorus,
    label: usize,
) -> Result<Vec<BinomialEquation>, ChartError> {
    let pairings = pairing_matrix(atlas, v, label)?;
    Ok(v.q
        .iter()
        .enumerate()
        .map(|(j, qj)| BinomialEquation {
            label,
            j,
            exponents: pairings.row(j).to_vec(),
            coefficient: v.exp_pairing(qj),
        })
        .collect())
}

pub fn evaluate_equation<T: Scalar>(f: &BinomialEquation, z: &[T]) -> T {
    let c = T::from_rational(&f.coefficient);
    let lhs = monomial(z, &f.positive_part()).expect("nonnegative exponents");
    let rhs = monomial(z, &f.negative_part()).expect("nonnegative exponents");
    lhs - c * rhs
}

/// `|f(z)|` divided by the size of its two terms, so that a point on the
/// zero locus scores near machine precision regardless of scale.
pub fn relative_residual(f: &BinomialEquation, z: &[Complex64]) -> f64 {
    let c = Complex64::from_rational(&f.coefficient);
    let lhs = monomial(z, &f.positive_part()).expect("nonnegative exponents");
    let rhs = c * monomial(z, &f.negative_part()).expect("nonnegative exponents");
    let scale = lhs.norm().max(rhs.norm());
    if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).norm() / scale
    }
}

/// The point of `C(V)` with real parameters `u` and imaginary parameters
/// `v`: `w_i = E_i exp(Σ_l p_{l,i} (u_l + i v_l))`.
pub fn parametrize(sub: &AffineSubtorus, u: &[f64], v: &[f64]) -> Vec<Complex64> {
    assert_eq!(u.len(), sub.k());
    assert_eq!(v.len(), sub.k());
    (0..sub.n)
        .map(|i| {
            let mut exponent = Complex64::new(0.0, 0.0);
            for (l, pl) in sub.p.iter().enumerate() {
                let c = pl[i].to_f64().expect("small integer");
                exponent += Complex64::new(c * u[l], c * v[l]);
            }
            Complex64::from_rational(&sub.offset_exp[i]) * exponent.exp()
        })
        .collect()
}

/// An element of `T^k` as unit complex numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusElement {
    pub components: Vec<Complex64>,
}

impl TorusElement {
    pub fn from_angles(theta: &[f64]) -> Self {
        Self {
            components: theta
                .iter()
                .map(|&t| Complex64::from_polar(1.0, t))
                .collect(),
        }
    }

    pub fn identity(k: usize) -> Self {
        Self {
            components: vec![Complex64::new(1.0, 0.0); k],
        }
    }

    pub fn is_unitary(&self) -> bool {
        self.components
            .iter()
            .all(|c| (c.norm() - 1.0).abs() <= 1e-12)
    }
}

/// `(t·z)_i = Π_l t_l^{<p_l, v^λ_i>} z_i`.
pub fn act(
    sub: &AffineSubtorus,
    t: &TorusElement,
    atlas: &ChartAtlas,
    label: usize,
    z: &[Complex64],
) -> Result<Vec<Complex64>, ChartError> {
    let w = weight_matrix(atlas, sub, label)?;
    Ok((0..sub.n)
        .map(|i| {
            (0..sub.k()).fold(z[i], |acc, l| {
                acc * int_pow(&t.components[l], &w[(l, i)]).expect("unit components")
            })
        })
        .collect())
}

/// `Σ_i <p_l, v_i><u_i, q_j>` for all `l, j`; identically zero.
pub fn pvuq_residual(
    atlas: &ChartAtlas,
    sub: &AffineSubtorus,
    label: usize,
) -> Result<IntMatrix, ChartError> {
    let w = weight_matrix(atlas, sub, label)?;
    let s = pairing_matrix(atlas, sub, label)?;
    Ok(w.mul(&s.transpose()))
}

/// `<p_l, q_j>` for all `l, j`.
pub fn orthogonality_residual(sub: &AffineSubtorus) -> Vec<Vec<BigInt>> {
    sub.p
        .iter()
        .map(|pl| sub.q.iter().map(|qj| dot(pl, qj)).collect())
        .collect()
}
