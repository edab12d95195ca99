//! Exact rational feasibility for `{x >= 0, A x = b}`.
//!
//! Phase-one simplex over `BigRational` with Bland's rule, so it always
//! terminates. The polyhedral queries here are tiny (a few dozen columns), so
//! a dense tableau is plenty.

use num_traits::{One, Signed, Zero};

use crate::lattice::{Rational, RationalVector};

/// Returns a point of `{x >= 0 : a x = b}` or `None` if the set is empty.
pub fn feasible_point(a: &[RationalVector], b: &[Rational]) -> Option<RationalVector> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    assert_eq!(b.len(), m, "right-hand side length mismatch");
    if m == 0 {
        return Some(vec![Rational::zero(); n]);
    }

    // Columns: n structural, m artificial, then the rhs.
    let width = n + m + 1;
    let mut t: Vec<RationalVector> = Vec::with_capacity(m);
    for (i, (row, rhs)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), n, "ragged constraint matrix");
        let flip = rhs.is_negative();
        let mut r = vec![Rational::zero(); width];
        for j in 0..n {
            r[j] = if flip { -&row[j] } else { row[j].clone() };
        }
        r[n + i] = Rational::one();
        r[width - 1] = if flip { -rhs } else { rhs.clone() };
        t.push(r);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs of minimizing the artificial sum.
    let mut cost = vec![Rational::zero(); width];
    for r in &t {
        for j in 0..n {
            cost[j] -= &r[j];
        }
        cost[width - 1] -= &r[width - 1];
    }

    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, r) in t.iter().enumerate() {
            if !r[enter].is_positive() {
                continue;
            }
            let ratio = &r[width - 1] / &r[enter];
            leave = match leave {
                None => Some((i, ratio)),
                Some((li, lr)) => {
                    if ratio < lr || (ratio == lr && basis[i] < basis[li]) {
                        Some((i, ratio))
                    } else {
                        Some((li, lr))
                    }
                }
            };
        }
        // Phase one is bounded below by zero, so a leaving row always exists.
        let (row, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut t, &mut cost, row, enter);
        basis[row] = enter;
    }

    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [RationalVector], cost: &mut RationalVector, row: usize, col: usize) {
    let inv = t[row][col].recip();
    for x in t[row].iter_mut() {
        *x *= &inv;
    }
    let pivot_row = t[row].clone();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for (x, p) in r.iter_mut().zip(&pivot_row) {
            *x -= &f * p;
        }
    }
    if !cost[col].is_zero() {
        let f = cost[col].clone();
        for (x, p) in cost.iter_mut().zip(&pivot_row) {
            *x -= &f * p;
        }
    }
}

/// Whether `target` lies in the convex hull of `points`.
pub fn in_convex_hull(points: &[RationalVector], target: &[Rational]) -> bool {
    if points.is_empty() {
        return false;
    }
    let dim = target.len();
    let mut a: Vec<RationalVector> = (0..dim)
        .map(|d| points.iter().map(|p| p[d].clone()).collect())
        .collect();
    a.push(vec![Rational::one(); points.len()]);
    let mut b: RationalVector = target.to_vec();
    b.push(Rational::one());
    feasible_point(&a, &b).is_some()
}
