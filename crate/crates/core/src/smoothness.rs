//! Exact smoothness test for the chartwise zero locus of the binomials.
//!
//! Each chart `C^n` is split into strata by coordinate support `S` (the set of
//! coordinates allowed to be nonzero). On the points of the locus whose
//! support is exactly `S`:
//!
//! * an equation whose two monomials only involve `S`-variables ("alive")
//!   becomes the torus equation `z^s = c`, and its gradient is
//!   `(monomial) * s_i / z_i`, so these rows have the rank of their integer
//!   exponent vectors;
//! * an equation whose two monomials both contain a variable outside `S`
//!   ("dead") vanishes identically, and its gradient can only be nonzero in a
//!   column `i` outside `S` for which the monomial is `z_i` times an
//!   `S`-monomial. Such a row has at most two entries, so the dead rows form
//!   a graph on the columns outside `S`, with a rank given by its components;
//! * if exactly one monomial survives, the stratum misses the locus.
//!
//! The two blocks occupy disjoint columns, so the Jacobian rank is the sum.
//! A component of the dead-row graph loses one unit of rank exactly when it
//! has no single-entry row and each of its cycles is balanced, a binomial
//! condition `z^M = γ` on the stratum. The minimum rank therefore comes from
//! the largest family of components that can be balanced simultaneously,
//! which is decided by exact consistency of binomial systems over the torus.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::charts::{monomial, torus_to_chart, ChartAtlas, Scalar};
use crate::lattice::{
    column_echelon, integer_kernel, rat_pow, rational_rank, IntMatrix, IntVector, Rational,
    RationalVector,
};
use crate::lp;
use crate::subtorus::{defining_equations, weight_matrix, AffineSubtorus, BinomialEquation};

/// A coordinate stratum of chart `label`: coordinates in `support` are
/// nonzero, all others vanish.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub label: usize,
    pub support: Vec<usize>,
}

/// One equation after forcing the coordinates outside the support to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RestrictedEquation {
    IdenticallyZero,
    /// `coefficient * z^exponents`, all variables in the support.
    Monomial {
        coefficient: Rational,
        exponents: IntVector,
    },
    Binomial(BinomialEquation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedSystem {
    pub support: Vec<usize>,
    pub equations: Vec<RestrictedEquation>,
}

fn touches_outside(e: &[BigInt], inside: &[bool]) -> bool {
    e.iter()
        .zip(inside)
        .any(|(x, &ins)| !ins && x.is_positive())
}

fn mask(n: usize, support: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &i in support {
        m[i] = true;
    }
    m
}

pub fn restrict_to_stratum(eqs: &[BinomialEquation], support: &[usize]) -> RestrictedSystem {
    let equations = eqs
        .iter()
        .map(|f| {
            let inside = mask(f.exponents.len(), support);
            let pos = f.positive_part();
            let neg = f.negative_part();
            match (
                touches_outside(&pos, &inside),
                touches_outside(&neg, &inside),
            ) {
                (true, true) => RestrictedEquation::IdenticallyZero,
                (false, false) => RestrictedEquation::Binomial(f.clone()),
                (false, true) => RestrictedEquation::Monomial {
                    coefficient: Rational::one(),
                    exponents: pos,
                },
                (true, false) => RestrictedEquation::Monomial {
                    coefficient: -f.coefficient.clone(),
                    exponents: neg,
                },
            }
        })
        .collect();
    RestrictedSystem {
        support: support.to_vec(),
        equations,
    }
}

/// Whether some point with support exactly `S` solves the system.
///
/// A surviving single monomial is nonzero there. Without one, the surviving
/// binomials are satisfied by the open-orbit point with its coordinates off
/// `S` set to zero, so the stratum is met.
pub fn stratum_intersects_locus(system: &RestrictedSystem) -> bool {
    !system
        .equations
        .iter()
        .any(|e| matches!(e, RestrictedEquation::Monomial { .. }))
}

/// A point of a stratum, exact when the binomial constraints allowed it.
#[derive(Debug, Clone, PartialEq)]
pub enum WitnessPoint {
    Exact(RationalVector),
    Approximate(Vec<Complex64>),
}

impl WitnessPoint {
    pub fn is_exact(&self) -> bool {
        matches!(self, WitnessPoint::Exact(_))
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        match self {
            WitnessPoint::Exact(z) => z.iter().map(Complex64::from_rational).collect(),
            WitnessPoint::Approximate(z) => z.clone(),
        }
    }
}

/// `z^exponents = value`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct TorusEquation {
    exponents: IntVector,
    value: Rational,
}

/// One nonzero entry of a dead row: `coefficient * z^exponents` in `column`.
#[derive(Debug, Clone)]
struct Entry {
    column: usize,
    coefficient: Rational,
    exponents: IntVector,
}

#[derive(Debug, Clone)]
struct Component {
    vertices: Vec<usize>,
    has_half_edge: bool,
    /// Conditions for every cycle to be balanced.
    cycle_conditions: Vec<TorusEquation>,
}

/// The structure of the Jacobian on one stratum.
#[derive(Debug, Clone)]
struct StratumStructure {
    n: usize,
    support: Vec<usize>,
    alive: Vec<TorusEquation>,
    alive_rank: usize,
    components: Vec<Component>,
}

fn dead_entry(part: &[BigInt], inside: &[bool], coefficient: Rational) -> Option<Entry> {
    let outside: Vec<usize> = (0..part.len())
        .filter(|&i| !inside[i] && part[i].is_positive())
        .collect();
    match outside.as_slice() {
        [i] if part[*i].is_one() => {
            let mut exponents = part.to_vec();
            exponents[*i] = BigInt::zero();
            Some(Entry {
                column: *i,
                coefficient,
                exponents,
            })
        }
        _ => None,
    }
}

fn sub_vec(a: &[BigInt], b: &[BigInt]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn add_vec(a: &[BigInt], b: &[BigInt]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

impl StratumStructure {
    /// `None` when the stratum misses the locus.
    fn new(eqs: &[BinomialEquation], n: usize, support: &[usize]) -> Option<Self> {
        let inside = mask(n, support);
        let mut alive = Vec::new();
        let mut rows: Vec<Vec<Entry>> = Vec::new();
        for f in eqs {
            let pos = f.positive_part();
            let neg = f.negative_part();
            match (
                touches_outside(&pos, &inside),
                touches_outside(&neg, &inside),
            ) {
                (false, false) => alive.push(TorusEquation {
                    exponents: f.exponents.clone(),
                    value: f.coefficient.clone(),
                }),
                (true, true) => {
                    let entries: Vec<Entry> = [
                        dead_entry(&pos, &inside, Rational::one()),
                        dead_entry(&neg, &inside, -f.coefficient.clone()),
                    ]
                    .into_iter()
                    .flatten()
                    .collect();
                    if !entries.is_empty() {
                        rows.push(entries);
                    }
                }
                _ => return None,
            }
        }
        let alive_rows: Vec<IntVector> = alive.iter().map(|e| e.exponents.clone()).collect();
        let alive_rank = if alive_rows.is_empty() {
            0
        } else {
            IntMatrix::from_rows(&alive_rows, n).expect("shape").rank()
        };
        Some(Self {
            n,
            support: support.to_vec(),
            alive,
            alive_rank,
            components: components_of(n, &rows),
        })
    }

    fn dead_columns(&self) -> usize {
        self.components.iter().map(|c| c.vertices.len()).sum()
    }

    /// Rank when the components in `balanced` are balanced and no others.
    fn rank_with(&self, balanced: usize) -> usize {
        self.alive_rank + self.dead_columns() - balanced
    }

    fn always_balanced(&self) -> usize {
        self.components
            .iter()
            .filter(|c| !c.has_half_edge && c.cycle_conditions.is_empty())
            .count()
    }

    fn conditional(&self) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&i| {
                !self.components[i].has_half_edge && !self.components[i].cycle_conditions.is_empty()
            })
            .collect()
    }

    fn system_for(&self, chosen: &[usize]) -> Vec<TorusEquation> {
        let mut sys = self.alive.clone();
        for &c in chosen {
            sys.extend(self.components[c].cycle_conditions.iter().cloned());
        }
        sys
    }

    /// The largest simultaneously balanceable family of components, with
    /// ties broken by the first subset in a fixed order.
    fn best_balanced_family(&self) -> Vec<usize> {
        let cond = self.conditional();
        let mut subsets: Vec<Vec<usize>> = (0u64..1 << cond.len())
            .map(|bits| {
                (0..cond.len())
                    .filter(|&b| bits >> b & 1 == 1)
                    .map(|b| cond[b])
                    .collect()
            })
            .collect();
        subsets.sort_by_key(|s: &Vec<usize>| std::cmp::Reverse(s.len()));
        subsets
            .into_iter()
            .find(|s| torus_system_consistent(&self.system_for(s), &self.support))
            .expect("the alive system alone is consistent")
    }

    /// Exact rank at a point of the stratum lying on the locus.
    fn rank_at(&self, z: &[Rational]) -> usize {
        let balanced = self
            .components
            .iter()
            .filter(|c| {
                !c.has_half_edge
                    && c.cycle_conditions.iter().all(|cond| {
                        monomial(z, &cond.exponents).expect("support coordinates nonzero")
                            == cond.value
                    })
            })
            .count();
        self.rank_with(balanced)
    }
}

/// Connected components of the dead-row graph with their cycle conditions.
///
/// Along a spanning tree each column gets a potential `x_v = κ_v z^{m_v}`
/// solving the tree rows; every other row then yields one condition.
fn components_of(n: usize, rows: &[Vec<Entry>]) -> Vec<Component> {
    let mut incident: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (r, row) in rows.iter().enumerate() {
        for e in row {
            incident.entry(e.column).or_default().push(r);
        }
    }
    let mut potential: BTreeMap<usize, (Rational, IntVector)> = BTreeMap::new();
    let mut used_row = vec![false; rows.len()];
    let mut out = Vec::new();
    let columns: Vec<usize> = incident.keys().copied().collect();
    for root in columns {
        if potential.contains_key(&root) {
            continue;
        }
        potential.insert(root, (Rational::one(), vec![BigInt::zero(); n]));
        let mut comp = Component {
            vertices: vec![root],
            has_half_edge: false,
            cycle_conditions: Vec::new(),
        };
        let mut queue = vec![root];
        while let Some(v) = queue.pop() {
            for &r in &incident[&v] {
                if used_row[r] {
                    continue;
                }
                used_row[r] = true;
                let row = &rows[r];
                if row.len() == 1 {
                    comp.has_half_edge = true;
                    continue;
                }
                let (here, there) = if row[0].column == v {
                    (&row[0], &row[1])
                } else {
                    (&row[1], &row[0])
                };
                let (kv, mv) = potential[&v].clone();
                if let Some((kt, mt)) = potential.get(&there.column).cloned() {
                    // here.c z^{here.e} x_v + there.c z^{there.e} x_t = 0
                    let exponents = sub_vec(
                        &add_vec(&here.exponents, &mv),
                        &add_vec(&there.exponents, &mt),
                    );
                    let value = -(&there.coefficient * &kt) / (&here.coefficient * &kv);
                    comp.cycle_conditions
                        .push(TorusEquation { exponents, value });
                } else {
                    let kt = -(&here.coefficient * &kv) / &there.coefficient;
                    let mt = sub_vec(&add_vec(&here.exponents, &mv), &there.exponents);
                    potential.insert(there.column, (kt, mt));
                    comp.vertices.push(there.column);
                    queue.push(there.column);
                }
            }
        }
        comp.vertices.sort();
        comp.cycle_conditions
            .retain(|c| !(c.exponents.iter().all(Zero::is_zero) && c.value.is_one()));
        if comp
            .cycle_conditions
            .iter()
            .any(|c| c.exponents.iter().all(Zero::is_zero))
        {
            // A constant condition other than 1 = 1 can never hold.
            comp.has_half_edge = true;
        }
        out.push(comp);
    }
    out
}

fn restrict_columns(v: &[BigInt], support: &[usize]) -> IntVector {
    support.iter().map(|&i| v[i].clone()).collect()
}

/// Whether `z^{N_r} = b_r` for all rows has a solution with the support
/// coordinates in `C*`: every integer relation among the rows must map the
/// right-hand sides to 1.
fn torus_system_consistent(sys: &[TorusEquation], support: &[usize]) -> bool {
    if sys.is_empty() {
        return true;
    }
    let rows: Vec<IntVector> = sys
        .iter()
        .map(|e| restrict_columns(&e.exponents, support))
        .collect();
    let nt = IntMatrix::from_rows(&rows, support.len())
        .expect("shape")
        .transpose();
    integer_kernel(&nt).iter().all(|rel| {
        sys.iter()
            .zip(rel)
            .fold(Rational::one(), |acc, (e, r)| acc * rat_pow(&e.value, r))
            .is_one()
    })
}

/// Exact rational `h`-th root, if one exists.
fn rational_root(x: &Rational, h: &BigInt) -> Option<Rational> {
    let h = h.to_u32()?;
    if h == 1 {
        return Some(x.clone());
    }
    if x.is_negative() && h % 2 == 0 {
        return None;
    }
    let root_int = |v: &BigInt| {
        let r = v.abs().nth_root(h);
        (num_traits::pow(r.clone(), h as usize) == v.abs()).then_some(r)
    };
    let num = root_int(x.numer())?;
    let den = root_int(x.denom())?;
    let r = Rational::new(num, den);
    Some(if x.is_negative() { -r } else { r })
}

fn complex_monomial(t: &[Complex64], e: &[BigInt]) -> Complex64 {
    monomial(t, e).expect("nonzero torus coordinates")
}

/// Solves a consistent torus system on the support through a column echelon
/// form `N U = H`: with `z = t^{U^T}` it reads `t^H = b`, which is triangular.
/// Free parameters are set to 1. Coordinates off the support are zero.
fn solve_torus_system(sys: &[TorusEquation], support: &[usize], n: usize) -> WitnessPoint {
    let s = support.len();
    let rows: Vec<IntVector> = sys
        .iter()
        .map(|e| restrict_columns(&e.exponents, support))
        .collect();
    let nmat = IntMatrix::from_rows(&rows, s).expect("shape");
    let (h, u, rank) = column_echelon(&nmat);
    // pivot_of[col] = row holding that column's pivot
    let mut pivots = Vec::new();
    let mut next = 0;
    for r in 0..h.rows() {
        if next < rank && !h[(r, next)].is_zero() {
            pivots.push(r);
            next += 1;
        }
    }

    let exact = (|| {
        let mut t = vec![Rational::one(); s];
        for (col, &r) in pivots.iter().enumerate() {
            let mut rest = h.row(r).to_vec();
            let hp = rest[col].clone();
            rest[col] = BigInt::zero();
            let known = monomial(&t, &rest).expect("nonzero");
            t[col] = rational_root(&(&sys[r].value / known), &hp)?;
        }
        Some(t)
    })();

    let assemble = |t_at: &dyn Fn(&IntVector) -> WitnessCoord| -> Vec<WitnessCoord> {
        let mut z = vec![WitnessCoord::Zero; n];
        for (idx, &i) in support.iter().enumerate() {
            z[i] = t_at(&u.row(idx).to_vec());
        }
        z
    };

    if let Some(t) = exact {
        let z = assemble(&|e| WitnessCoord::Rat(monomial(&t, e).expect("nonzero")));
        return WitnessPoint::Exact(z.into_iter().map(WitnessCoord::into_rational).collect());
    }
    let mut t = vec![Complex64::new(1.0, 0.0); s];
    for (col, &r) in pivots.iter().enumerate() {
        let mut rest = h.row(r).to_vec();
        let hp = rest[col].to_f64().expect("small exponent");
        rest[col] = BigInt::zero();
        let known = complex_monomial(&t, &rest);
        let target = Complex64::from_rational(&sys[r].value) / known;
        t[col] = target.powf(1.0 / hp);
    }
    let z = assemble(&|e| WitnessCoord::Cpx(complex_monomial(&t, e)));
    WitnessPoint::Approximate(z.into_iter().map(WitnessCoord::into_complex).collect())
}

#[derive(Clone)]
enum WitnessCoord {
    Zero,
    Rat(Rational),
    Cpx(Complex64),
}

impl WitnessCoord {
    fn into_rational(self) -> Rational {
        match self {
            WitnessCoord::Zero => Rational::zero(),
            WitnessCoord::Rat(r) => r,
            WitnessCoord::Cpx(_) => unreachable!("exact path"),
        }
    }

    fn into_complex(self) -> Complex64 {
        match self {
            WitnessCoord::Zero => Complex64::new(0.0, 0.0),
            WitnessCoord::Rat(r) => Complex64::from_rational(&r),
            WitnessCoord::Cpx(c) => c,
        }
    }
}

/// Rank data for one stratum that meets the locus.
#[derive(Debug, Clone, PartialEq)]
pub struct StratumRank {
    /// Minimum Jacobian rank over the locus points with exactly this support.
    pub min_rank: usize,
    /// A locus point attaining it.
    pub witness: WitnessPoint,
    /// Rank of the alive (torus) block alone.
    pub alive_rank: usize,
    /// Number of columns outside the support carrying dead-row entries.
    pub dead_columns: usize,
}

/// `None` when the stratum misses the locus.
pub fn stratum_jacobian_rank(
    eqs: &[BinomialEquation],
    n: usize,
    support: &[usize],
) -> Option<StratumRank> {
    let st = StratumStructure::new(eqs, n, support)?;
    let family = st.best_balanced_family();
    let min_rank = st.rank_with(st.always_balanced() + family.len());
    let witness = solve_torus_system(&st.system_for(&family), support, st.n);
    Some(StratumRank {
        min_rank,
        witness,
        alive_rank: st.alive_rank,
        dead_columns: st.dead_columns(),
    })
}

/// Combinatorial rank at an exact point whose support is exactly `support`
/// and which lies on the locus.
pub fn stratum_rank_at(
    eqs: &[BinomialEquation],
    support: &[usize],
    z: &[Rational],
) -> Option<usize> {
    StratumStructure::new(eqs, z.len(), support).map(|st| st.rank_at(z))
}

/// Rank of the Jacobian of `eqs` at an exact point, by rational elimination.
pub fn exact_jacobian_rank(eqs: &[BinomialEquation], z: &[Rational]) -> usize {
    let rows: Vec<RationalVector> = eqs.iter().map(|f| f.gradient(z)).collect();
    rational_rank(&rows)
}

/// Number of free parameters of [`locus_sample`] on this stratum.
pub fn locus_sample_dimension(eqs: &[BinomialEquation], n: usize, support: &[usize]) -> usize {
    sample_directions(eqs, n, support).len()
}

fn sample_directions(eqs: &[BinomialEquation], n: usize, support: &[usize]) -> Vec<IntVector> {
    let Some(st) = StratumStructure::new(eqs, n, support) else {
        return Vec::new();
    };
    let rows: Vec<IntVector> = st
        .alive
        .iter()
        .map(|e| restrict_columns(&e.exponents, support))
        .collect();
    let m = IntMatrix::from_rows(&rows, support.len()).expect("shape");
    integer_kernel(&m)
}

/// The locus point `base_i * Π_l τ_l^{K_il}` on the stratum, where `base`
/// is a full-support locus point and `K` spans the integer kernel of the
/// alive exponents. `τ` must have [`locus_sample_dimension`] nonzero entries.
pub fn locus_sample(
    eqs: &[BinomialEquation],
    support: &[usize],
    base: &[Rational],
    tau: &[Rational],
) -> RationalVector {
    let k = sample_directions(eqs, base.len(), support);
    assert_eq!(k.len(), tau.len(), "wrong number of sample parameters");
    let mut z = vec![Rational::zero(); base.len()];
    for (idx, &i) in support.iter().enumerate() {
        z[i] = k
            .iter()
            .zip(tau)
            .fold(base[i].clone(), |acc, (dir, t)| acc * rat_pow(t, &dir[idx]));
    }
    z
}

/// Whether some one-parameter subgroup of `T^k` drives the open orbit to the
/// stratum: `β` with `<β, W_i> = 0` on the support and `>= 1` off it, where
/// `W_i` are the columns of the weight matrix.
pub fn stratum_reached_by_orbit(weights: &IntMatrix, support: &[usize]) -> bool {
    let k = weights.rows();
    let n = weights.cols();
    let inside = mask(n, support);
    let outside: Vec<usize> = (0..n).filter(|&i| !inside[i]).collect();
    // variables: β⁺ (k), β⁻ (k), slack per outside column
    let width = 2 * k + outside.len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..n {
        let mut row = vec![Rational::zero(); width];
        for l in 0..k {
            let w = Rational::from_integer(weights[(l, i)].clone());
            row[l] = w.clone();
            row[k + l] = -w;
        }
        if let Some(pos) = outside.iter().position(|&o| o == i) {
            row[2 * k + pos] = -Rational::one();
            b.push(Rational::one());
        } else {
            b.push(Rational::zero());
        }
        a.push(row);
    }
    lp::feasible_point(&a, &b).is_some()
}

/// Numerical rank of the Jacobian at a complex point, by Gaussian
/// elimination with complete pivoting; pivots below `tol` times the largest
/// one count as zero.
pub fn numeric_rank_probe(eqs: &[BinomialEquation], point: &[Complex64], tol: f64) -> usize {
    assert!(tol > 0.0);
    let mut m: Vec<Vec<Complex64>> = eqs.iter().map(|f| f.gradient(point)).collect();
    let rows = m.len();
    let cols = point.len();
    let mut rank = 0;
    let mut first_pivot = 0.0;
    while rank < rows.min(cols) {
        let mut best = (0.0, rank, 0);
        for (r, row) in m.iter().enumerate().skip(rank) {
            for (c, x) in row.iter().enumerate() {
                if x.norm() > best.0 {
                    best = (x.norm(), r, c);
                }
            }
        }
        let (mag, pr, pc) = best;
        if rank == 0 {
            first_pivot = mag;
        }
        if mag == 0.0 || mag <= tol * first_pivot {
            break;
        }
        m.swap(rank, pr);
        let pivot_row = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            let f = row[pc] / pivot_row[pc];
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= f * p;
            }
            row[pc] = Complex64::new(0.0, 0.0);
        }
        for x in m[rank].iter_mut() {
            *x = Complex64::new(0.0, 0.0);
        }
        rank += 1;
    }
    rank
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Smooth,
    Singular,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Smooth => "SMOOTH",
            Verdict::Singular => "SINGULAR",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StratumReport {
    pub stratum: Stratum,
    /// `None` when the stratum misses the locus.
    pub rank: Option<StratumRank>,
    /// Whether a one-parameter subgroup limit of the open orbit lands here.
    /// Locus strata that are not reached are flagged, not excluded.
    pub reached_by_orbit: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularWitness {
    pub stratum: Stratum,
    pub point: WitnessPoint,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothnessReport {
    pub verdict: Verdict,
    pub expected_rank: usize,
    pub witnesses: Vec<SingularWitness>,
    pub strata: Vec<StratumReport>,
}

impl SmoothnessReport {
    /// Locus strata that no orbit limit reaches.
    pub fn unreached_strata(&self) -> impl Iterator<Item = &StratumReport> {
        self.strata
            .iter()
            .filter(|s| s.rank.is_some() && !s.reached_by_orbit)
    }
}

/// All supports of `{0..n}`, largest first, then lexicographically.
pub fn supports(n: usize) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (0u64..1 << n)
        .map(|bits| (0..n).filter(|&i| bits >> i & 1 == 1).collect())
        .collect();
    all.sort_by(|a: &Vec<usize>, b: &Vec<usize>| b.len().cmp(&a.len()).then(a.cmp(b)));
    all
}

pub fn classify(atlas: &ChartAtlas, sub: &AffineSubtorus) -> SmoothnessReport {
    let n = atlas.dim();
    let expected_rank = n - sub.k();
    let mut strata = Vec::new();
    let mut witnesses = Vec::new();
    for label in atlas.labels() {
        let eqs = defining_equations(atlas, sub, label).expect("label from atlas");
        let weights = weight_matrix(atlas, sub, label).expect("label from atlas");
        for support in supports(n) {
            let rank = stratum_jacobian_rank(&eqs, n, &support);
            let stratum = Stratum {
                label,
                support: support.clone(),
            };
            if let Some(r) = &rank {
                if r.min_rank < expected_rank {
                    witnesses.push(SingularWitness {
                        stratum: stratum.clone(),
                        point: r.witness.clone(),
                        rank: r.min_rank,
                    });
                }
            }
            strata.push(StratumReport {
                reached_by_orbit: stratum_reached_by_orbit(&weights, &support),
                stratum,
                rank,
            });
        }
    }
    SmoothnessReport {
        verdict: if witnesses.is_empty() {
            Verdict::Smooth
        } else {
            Verdict::Singular
        },
        expected_rank,
        witnesses,
        strata,
    }
}

/// The open-orbit point of chart `label` at the offset, `z = E^{Q^λ}`.
pub fn base_point(atlas: &ChartAtlas, sub: &AffineSubtorus, label: usize) -> RationalVector {
    torus_to_chart(atlas, label, sub.offset_exp())
        .expect("positive offset")
        .coords
}
