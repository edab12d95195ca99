//! The coordinate atlas of a toric manifold.
//!
//! Chart `λ` is `C^n` with coordinates `z^λ`. Its matrix `Q^λ` has the edge
//! directions at `λ` as columns, and two charts are glued by the monomial map
//! with exponent matrix `D^{λμ} = (Q^λ)^{-1} Q^μ`:
//! `z^μ_i = Π_j (z^λ_j)^{d_ji}`.
//! The open torus `(C*)^n` sits in every chart through `w ↦ w^{Q^λ}`.
//!
//! Points are generic over [`Scalar`], so the same code evaluates exactly on
//! rationals and approximately on complex floats. Integer powers are always
//! computed by repeated multiplication.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Num, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::lattice::{IntMatrix, Rational};
use crate::polytope::DelzantPolytope;

/// Coordinate field for chart points.
pub trait Scalar: Num + Clone + std::fmt::Debug {
    fn from_rational(r: &Rational) -> Self;
}

impl Scalar for Rational {
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Scalar for Complex64 {
    fn from_rational(r: &Rational) -> Self {
        Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

/// `x^e` with `0^0 = 1`; `None` for zero to a negative power.
pub fn int_pow<T: Scalar>(x: &T, e: &BigInt) -> Option<T> {
    if e.is_zero() {
        return Some(T::one());
    }
    let mag = e.abs().to_usize().expect("exponent out of range");
    if e.is_negative() {
        if x.is_zero() {
            return None;
        }
        Some(T::one() / num_traits::pow(x.clone(), mag))
    } else {
        Some(num_traits::pow(x.clone(), mag))
    }
}

/// `Π_j z_j^{e_j}`; `None` if a zero coordinate carries a negative exponent.
pub fn monomial<T: Scalar>(z: &[T], exponents: &[BigInt]) -> Option<T> {
    debug_assert_eq!(z.len(), exponents.len());
    z.iter()
        .zip(exponents)
        .try_fold(T::one(), |acc, (x, e)| Some(acc * int_pow(x, e)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error("unknown chart label {0}")]
    UnknownLabel(usize),
    #[error("point is outside the transition domain (coordinate {0} must be nonzero)")]
    DomainViolation(usize),
    #[error("coordinate {0} is zero")]
    ZeroCoordinate(usize),
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point lives in chart {got}, expected chart {expected}")]
    WrongChart { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint<T> {
    pub label: usize,
    pub coords: Vec<T>,
}

impl<T> ChartPoint<T> {
    pub fn new(label: usize, coords: Vec<T>) -> Self {
        Self { label, coords }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chart {
    pub q: IntMatrix,
    pub q_inv: IntMatrix,
}

/// One chart per vertex, labeled by the vertex index of the polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartAtlas {
    dim: usize,
    charts: Vec<Chart>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub source: usize,
    pub target: usize,
    pub d: IntMatrix,
}

pub fn build_atlas(delzant: &DelzantPolytope) -> ChartAtlas {
    let charts = (0..delzant.num_vertices())
        .map(|l| {
            let data = delzant.vertex_data(l);
            Chart {
                q: data.chart.clone(),
                q_inv: data.chart_inverse.clone(),
            }
        })
        .collect();
    ChartAtlas {
        dim: delzant.dim(),
        charts,
    }
}

impl ChartAtlas {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.charts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charts.is_empty()
    }

    pub fn labels(&self) -> std::ops::Range<usize> {
        0..self.charts.len()
    }

    pub fn chart(&self, label: usize) -> Result<&Chart, ChartError> {
        self.charts
            .get(label)
            .ok_or(ChartError::UnknownLabel(label))
    }

    fn check_len(&self, got: usize) -> Result<(), ChartError> {
        if got != self.dim {
            return Err(ChartError::DimensionMismatch {
                expected: self.dim,
                got,
            });
        }
        Ok(())
    }
}

pub fn transition(
    atlas: &ChartAtlas,
    source: usize,
    target: usize,
) -> Result<TransitionMatrix, ChartError> {
    let a = atlas.chart(source)?;
    let b = atlas.chart(target)?;
    Ok(TransitionMatrix {
        source,
        target,
        d: a.q_inv.mul(&b.q),
    })
}

/// Rows of `D` holding a negative entry; those coordinates must be nonzero.
fn constrained_rows(d: &IntMatrix) -> impl Iterator<Item = usize> + '_ {
    (0..d.rows()).filter(move |&j| d.row(j).iter().any(Signed::is_negative))
}

pub fn in_transition_domain<T: Scalar>(d: &TransitionMatrix, z: &ChartPoint<T>) -> bool {
    z.coords.len() == d.d.rows() && constrained_rows(&d.d).all(|j| !z.coords[j].is_zero())
}

pub fn transform_point<T: Scalar>(
    d: &TransitionMatrix,
    z: &ChartPoint<T>,
) -> Result<ChartPoint<T>, ChartError> {
    if z.coords.len() != d.d.rows() {
        return Err(ChartError::DimensionMismatch {
            expected: d.d.rows(),
            got: z.coords.len(),
        });
    }
    if z.label != d.source {
        return Err(ChartError::WrongChart {
            expected: d.source,
            got: z.label,
        });
    }
    if let Some(j) = constrained_rows(&d.d).find(|&j| z.coords[j].is_zero()) {
        return Err(ChartError::DomainViolation(j));
    }
    let coords = (0..d.d.cols())
        .map(|i| monomial(&z.coords, &d.d.column(i)).expect("domain checked"))
        .collect();
    Ok(ChartPoint::new(d.target, coords))
}

/// `w_i = Π_j z_j^{Q̂_ji}` where `Q̂ = (Q^λ)^{-1}`.
pub fn chart_to_torus<T: Scalar>(
    atlas: &ChartAtlas,
    z: &ChartPoint<T>,
) -> Result<Vec<T>, ChartError> {
    let chart = atlas.chart(z.label)?;
    atlas.check_len(z.coords.len())?;
    if let Some(j) = z.coords.iter().position(Zero::is_zero) {
        return Err(ChartError::ZeroCoordinate(j));
    }
    Ok((0..atlas.dim)
        .map(|i| monomial(&z.coords, &chart.q_inv.column(i)).expect("nonzero coordinates"))
        .collect())
}

/// `z_i = Π_j w_j^{Q_ji}`.
pub fn torus_to_chart<T: Scalar>(
    atlas: &ChartAtlas,
    label: usize,
    w: &[T],
) -> Result<ChartPoint<T>, ChartError> {
    let chart = atlas.chart(label)?;
    atlas.check_len(w.len())?;
    if let Some(j) = w.iter().position(Zero::is_zero) {
        return Err(ChartError::ZeroCoordinate(j));
    }
    let coords = (0..atlas.dim)
        .map(|i| monomial(w, &chart.q.column(i)).expect("nonzero coordinates"))
        .collect();
    Ok(ChartPoint::new(label, coords))
}

/// Largest componentwise relative error `|a_i - b_i| / |b_i|`, falling back
/// to the absolute error where `b_i = 0`.
pub fn max_relative_error(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let scale = y.norm();
            let err = (x - y).norm();
            if scale > 0.0 {
                err / scale
            } else {
                err
            }
        })
        .fold(0.0, f64::max)
}
