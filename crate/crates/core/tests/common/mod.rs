//! Fixtures shared by the integration tests: the polytopes and subspaces of
//! the worked examples, their known equations, and random generators.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use toric_embed::lattice::{int_vec, rat, rat_vec, IntMatrix, IntVector, Rational, RationalVector};
use toric_embed::polytope::{verify_delzant, DelzantPolytope};
use toric_embed::subtorus::{validate_subspace, AffineSubtorus, BinomialEquation};

pub fn cp2_points() -> Vec<RationalVector> {
    vec![rat_vec(&[0, 0]), rat_vec(&[2, 0]), rat_vec(&[0, 2])]
}

pub fn f1_points() -> Vec<RationalVector> {
    vec![
        rat_vec(&[0, 0]),
        rat_vec(&[2, 0]),
        rat_vec(&[1, 1]),
        rat_vec(&[0, 1]),
    ]
}

pub fn cp3_blowup_points() -> Vec<RationalVector> {
    vec![
        rat_vec(&[0, 0, 0]),
        rat_vec(&[2, 0, 0]),
        rat_vec(&[0, 0, 2]),
        rat_vec(&[1, 1, 0]),
        rat_vec(&[0, 1, 0]),
        rat_vec(&[0, 1, 1]),
    ]
}

pub fn cp3_points() -> Vec<RationalVector> {
    vec![
        rat_vec(&[0, 0, 0]),
        rat_vec(&[2, 0, 0]),
        rat_vec(&[0, 0, 2]),
        rat_vec(&[0, 2, 0]),
    ]
}

pub fn delzant(points: &[RationalVector]) -> DelzantPolytope {
    verify_delzant(points).expect("fixture is Delzant")
}

/// A binomial as listed: `z^lhs - c * z^rhs`, where `c = e^{<a, coef>}`.
#[derive(Debug, Clone)]
pub struct ListedBinomial {
    pub lhs: Vec<i64>,
    pub rhs: Vec<i64>,
}

fn pb(lhs: &[i64], rhs: &[i64]) -> ListedBinomial {
    ListedBinomial {
        lhs: lhs.to_vec(),
        rhs: rhs.to_vec(),
    }
}

#[derive(Debug, Clone)]
pub struct WorkedExample {
    pub name: String,
    pub polytope: Vec<RationalVector>,
    pub p: Vec<IntVector>,
    /// One equation per chart, in the order the charts are listed.
    pub equations: Vec<ListedBinomial>,
    /// Exponent `w` of the listed coefficient `e^{<a, w>}`, which always
    /// multiplies the right-hand monomial. `None` where the listed
    /// coefficients are unusable.
    pub coefficient: Option<Vec<i64>>,
    pub smooth: bool,
    /// Whether the known classification covers this instance.
    pub classified: bool,
}

fn cp2_example(
    name: &str,
    p: [i64; 2],
    eqs: [ListedBinomial; 3],
    coefficient: Option<[i64; 2]>,
    smooth: bool,
    classified: bool,
) -> WorkedExample {
    WorkedExample {
        name: name.to_string(),
        polytope: cp2_points(),
        p: vec![int_vec(&p)],
        equations: eqs.to_vec(),
        coefficient: coefficient.map(|c| c.to_vec()),
        smooth,
        classified,
    }
}

/// The worked examples with their known binomials (at `a = 0` every
/// coefficient is one). Parametric families are instantiated at
/// `alpha = 2..=5`, and `smooth` is only meaningful where `classified` holds.
pub fn worked_examples() -> Vec<WorkedExample> {
    let mut out = vec![
        cp2_example(
            "CP2 p=(1,1)",
            [1, 1],
            [
                pb(&[1, 0], &[0, 1]),
                pb(&[0, 1], &[0, 0]),
                pb(&[0, 0], &[1, 0]),
            ],
            None,
            true,
            true,
        ),
        cp2_example(
            "CP2 p=(3,1)",
            [3, 1],
            [
                pb(&[1, 0], &[0, 3]),
                pb(&[2, 1], &[0, 0]),
                pb(&[3, 0], &[0, 2]),
            ],
            None,
            false,
            true,
        ),
        cp2_example(
            "CP2 p=(1,0)",
            [1, 0],
            [
                pb(&[0, 1], &[0, 0]),
                pb(&[0, 0], &[1, 0]),
                pb(&[1, 0], &[0, 1]),
            ],
            Some([0, 1]),
            true,
            true,
        ),
        cp2_example(
            "CP2 p=(0,1)",
            [0, 1],
            [
                pb(&[1, 0], &[0, 0]),
                pb(&[0, 1], &[1, 0]),
                pb(&[0, 0], &[0, 1]),
            ],
            Some([1, 0]),
            true,
            true,
        ),
        // at a = 0 the sigma-chart binomial reads z1 - z2^2
        cp2_example(
            "CP2 p=(1,-1)",
            [1, -1],
            [
                pb(&[1, 1], &[0, 0]),
                pb(&[0, 1], &[2, 0]),
                pb(&[1, 0], &[0, 2]),
            ],
            None,
            true,
            true,
        ),
        cp2_example(
            "CP2 p=(1,2)",
            [1, 2],
            [
                pb(&[2, 0], &[0, 1]),
                pb(&[0, 2], &[1, 0]),
                pb(&[0, 0], &[1, 1]),
            ],
            Some([2, -1]),
            true,
            true,
        ),
        cp2_example(
            "CP2 p=(2,1)",
            [2, 1],
            [
                pb(&[1, 0], &[0, 2]),
                pb(&[1, 1], &[0, 0]),
                pb(&[0, 1], &[2, 0]),
            ],
            Some([1, -2]),
            true,
            true,
        ),
    ];
    for a in 2..=5i64 {
        out.push(cp2_example(
            &format!("CP2 p=(1,{a})"),
            [1, a],
            [
                pb(&[a, 0], &[0, 1]),
                pb(&[0, a], &[a - 1, 0]),
                pb(&[0, 0], &[1, a - 1]),
            ],
            Some([a, -1]),
            a < 3,
            a >= 3,
        ));
        out.push(cp2_example(
            &format!("CP2 p=({a},1)"),
            [a, 1],
            [
                pb(&[1, 0], &[0, a]),
                pb(&[a - 1, 1], &[0, 0]),
                pb(&[0, a - 1], &[a, 0]),
            ],
            Some([1, -a]),
            a < 3,
            a >= 3,
        ));
        out.push(cp2_example(
            &format!("CP2 p=(1,-{a})"),
            [1, -a],
            [
                pb(&[a, 1], &[0, 0]),
                pb(&[0, a], &[a + 1, 0]),
                pb(&[1, 0], &[0, a + 1]),
            ],
            Some([a, 1]),
            false,
            a <= 4,
        ));
        out.push(cp2_example(
            &format!("CP2 p=({a},-1)"),
            [a, -1],
            [
                pb(&[1, a], &[0, 0]),
                pb(&[0, 1], &[a + 1, 0]),
                pb(&[a, 0], &[0, a + 1]),
            ],
            Some([1, a]),
            false,
            a >= 3,
        ));
    }
    out.push(WorkedExample {
        name: "F1 p=(1,0)".into(),
        polytope: f1_points(),
        p: vec![int_vec(&[1, 0])],
        equations: vec![
            pb(&[1, 0], &[0, 0]),
            pb(&[1, 0], &[0, 1]),
            pb(&[0, 0], &[1, 1]),
            pb(&[0, 0], &[1, 0]),
        ],
        coefficient: None,
        smooth: true,
        classified: true,
    });
    out.push(WorkedExample {
        name: "blown-up CP3 p1=(1,0,-1) p2=(0,1,0)".into(),
        polytope: cp3_blowup_points(),
        p: vec![int_vec(&[1, 0, -1]), int_vec(&[0, 1, 0])],
        equations: vec![
            pb(&[1, 0, 1], &[0, 0, 0]),
            pb(&[0, 0, 1], &[0, 2, 0]),
            pb(&[0, 1, 0], &[0, 0, 2]),
            pb(&[0, 1, 0], &[0, 0, 2]),
            pb(&[1, 1, 0], &[0, 0, 0]),
            pb(&[1, 0, 0], &[0, 0, 2]),
        ],
        coefficient: None,
        smooth: true,
        classified: true,
    });
    out
}

/// The examples whose classification is known.
pub fn classified_examples() -> Vec<WorkedExample> {
    worked_examples()
        .into_iter()
        .filter(|e| e.classified)
        .collect()
}

pub fn subtorus(example: &WorkedExample, offset: &[Rational]) -> AffineSubtorus {
    validate_subspace(&example.p, offset).expect("valid subspace")
}

pub fn ones(n: usize) -> RationalVector {
    vec![Rational::one(); n]
}

/// `(lo, hi, c)` with `lo <= hi` lexicographically, describing the binomial
/// `z^lo - c z^hi` up to an overall scalar.
pub type CanonicalBinomial = (Vec<BigInt>, Vec<BigInt>, Rational);

pub fn canonical(lhs: Vec<BigInt>, rhs: Vec<BigInt>, c: Rational) -> CanonicalBinomial {
    if lhs <= rhs {
        (lhs, rhs, c)
    } else {
        (rhs, lhs, c.recip())
    }
}

pub fn canonical_ours(f: &BinomialEquation) -> CanonicalBinomial {
    canonical(f.positive_part(), f.negative_part(), f.coefficient.clone())
}

pub fn canonical_listed(f: &ListedBinomial, c: Rational) -> CanonicalBinomial {
    canonical(int_vec(&f.lhs), int_vec(&f.rhs), c)
}

fn permute(b: &CanonicalBinomial, perm: &[usize]) -> CanonicalBinomial {
    let apply = |v: &Vec<BigInt>| perm.iter().map(|&i| v[i].clone()).collect::<Vec<_>>();
    canonical(apply(&b.0), apply(&b.1), b.2.clone())
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for pos in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out
}

fn same_up_to_coordinates(
    ours: &[CanonicalBinomial],
    theirs: &[CanonicalBinomial],
    n: usize,
) -> bool {
    let mut t = theirs.to_vec();
    t.sort();
    permutations(n).iter().any(|perm| {
        let mut o: Vec<CanonicalBinomial> = ours.iter().map(|b| permute(b, perm)).collect();
        o.sort();
        o == t
    })
}

/// Whether the chartwise systems agree after relabeling the charts and
/// permuting coordinates inside each chart.
pub fn systems_match(
    ours: &[Vec<CanonicalBinomial>],
    theirs: &[Vec<CanonicalBinomial>],
    n: usize,
) -> bool {
    if ours.len() != theirs.len() {
        return false;
    }
    let compatible: Vec<Vec<bool>> = ours
        .iter()
        .map(|o| {
            theirs
                .iter()
                .map(|t| same_up_to_coordinates(o, t, n))
                .collect()
        })
        .collect();
    fn assign(i: usize, used: &mut Vec<bool>, c: &[Vec<bool>]) -> bool {
        if i == c.len() {
            return true;
        }
        for j in 0..c.len() {
            if c[i][j] && !used[j] {
                used[j] = true;
                if assign(i + 1, used, c) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    assign(0, &mut vec![false; ours.len()], &compatible)
}

// ---- random generators ----

/// Cartesian product of vertex lists.
pub fn product(a: &[RationalVector], b: &[RationalVector]) -> Vec<RationalVector> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x.iter().chain(y).cloned().collect()))
        .collect()
}

pub fn simplex(dim: usize, size: i64) -> Vec<RationalVector> {
    let mut out = vec![vec![Rational::zero(); dim]];
    for i in 0..dim {
        let mut v = vec![Rational::zero(); dim];
        v[i] = rat(size, 1);
        out.push(v);
    }
    out
}

/// A random unimodular matrix, as a product of elementary row operations.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n < 2 {
        return m;
    }
    for _ in 0..n * 2 {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(rng.gen_range(-2i64..=2));
        let mut e = IntMatrix::identity(n);
        e[(i, j)] = c;
        m = e.mul(&m);
    }
    m
}

/// A product of intervals and simplices of dimension at most `max_dim`,
/// moved by a random unimodular map and a random rational translation.
pub fn random_delzant<R: Rng>(rng: &mut R, max_dim: usize) -> Vec<RationalVector> {
    let mut pts: Vec<RationalVector> = vec![vec![]];
    let mut dim = 0;
    while dim == 0 || (dim < max_dim && rng.gen_bool(0.5)) {
        let d = rng.gen_range(1..=(max_dim - dim).min(3));
        let size = rng.gen_range(1..=3);
        pts = product(&pts, &simplex(d, size));
        dim += d;
    }
    let g = random_unimodular(rng, dim);
    let shift: RationalVector = (0..dim)
        .map(|_| rat(rng.gen_range(-3..=3), rng.gen_range(1..=3)))
        .collect();
    pts.iter()
        .map(|v| {
            g.mul_rat_vec(v)
                .into_iter()
                .zip(&shift)
                .map(|(x, s)| x + s)
                .collect()
        })
        .collect()
}

/// `k` independent primitive integer vectors in dimension `n`.
pub fn random_subspace<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<IntVector> {
    loop {
        let p: Vec<IntVector> = (0..k)
            .map(|_| {
                (0..n)
                    .map(|_| BigInt::from(rng.gen_range(-3i64..=3)))
                    .collect::<IntVector>()
            })
            .map(|v| toric_embed::lattice::primitive_part(&v).unwrap_or(v))
            .collect();
        if validate_subspace(&p, &ones(n)).is_ok() {
            return p;
        }
    }
}

pub fn random_offset<R: Rng>(rng: &mut R, n: usize) -> RationalVector {
    (0..n)
        .map(|_| rat(rng.gen_range(1..=5), rng.gen_range(1..=5)))
        .collect()
}

/// A point of `(C*)^n` with moduli in `[1/4, 4]`.
pub fn random_torus_point<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let r = 4f64.powf(rng.gen_range(-1.0..1.0));
            Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

pub fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    let n = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
    rat(n, rng.gen_range(1..=4))
}

pub fn is_nonnegative(v: &[BigInt]) -> bool {
    v.iter().all(|x| !x.is_negative())
}
