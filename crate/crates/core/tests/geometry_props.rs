mod common;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use toric_embed::charts::{
    build_atlas, chart_to_torus, torus_to_chart, transform_point, transition, ChartPoint,
};
use toric_embed::lattice::{dot, rat, IntMatrix, IntVector, Rational, RationalVector};
use toric_embed::lp::in_convex_hull;
use toric_embed::polytope::{cone_is_pointed, lattice_points, project_polytope, verify_delzant};

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Pointedness of a planar cone: some generator `g` has every other
/// generator strictly to its left or on its own ray.
fn planar_pointed(gens: &[IntVector]) -> bool {
    let gens: Vec<&IntVector> = gens
        .iter()
        .filter(|g| g.iter().any(|x| !x.is_zero()))
        .collect();
    if gens.is_empty() {
        return true;
    }
    gens.iter().any(|g| {
        gens.iter().all(|x| {
            let cross = &g[0] * &x[1] - &g[1] * &x[0];
            cross.is_positive() || (cross.is_zero() && dot(g, x).is_positive())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_of_simplices_are_delzant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_delzant(&mut rng, 4);
        let d = verify_delzant(&pts).unwrap();
        prop_assert_eq!(d.num_vertices(), pts.len());
        for l in 0..d.num_vertices() {
            let data = d.vertex_data(l);
            // in dimension one the single edge fixes the sign of the determinant
            let det = data.chart.determinant().unwrap();
            prop_assert!(det.is_one() || (d.dim() == 1 && det.abs().is_one()));
            prop_assert!(data.chart.mul(&data.chart_inverse).is_identity());
            // every edge direction leads to another vertex
            for e in &data.edges {
                let hits = d.vertices().iter().filter(|w| {
                    let diff: Vec<Rational> = w.iter().zip(d.vertex(l)).map(|(a, b)| a - b).collect();
                    let t = diff.iter().zip(e).find(|(_, ei)| !ei.is_zero()).map(|(x, ei)| x / Rational::from_integer(ei.clone()));
                    t.is_some_and(|t| t.is_positive() && diff.iter().zip(e).all(|(x, ei)| *x == &t * Rational::from_integer(ei.clone())))
                }).count();
                prop_assert_eq!(hits, 1);
            }
        }
    }

    #[test]
    fn lattice_point_count_of_products(sizes in prop::collection::vec((1usize..=2, 1i64..=3), 1..=2), seed in 0u64..64) {
        let mut pts: Vec<RationalVector> = vec![vec![]];
        let mut expected = 1;
        for (d, s) in &sizes {
            pts = product(&pts, &simplex(*d, *s));
            expected *= binomial(s + *d as i64, *d as i64);
        }
        // integer shifts and shears preserve the count
        let n = pts[0].len();
        let mut g = IntMatrix::identity(n);
        if n > 1 {
            let i = (seed % n as u64) as usize;
            g[(i, (i + 1) % n)] = BigInt::from(if seed % 2 == 0 { 1 } else { -1 });
        }
        let moved: Vec<RationalVector> = pts.iter().map(|v| g.mul_rat_vec(v).into_iter().map(|x| x + rat(3, 1)).collect()).collect();
        let d = verify_delzant(&moved).unwrap();
        prop_assert_eq!(lattice_points(d.polytope()).len() as i64, expected);
    }

    #[test]
    fn pointedness_matches_planar_oracle(gens in prop::collection::vec(prop::collection::vec(-3i64..=3, 2), 0..5)) {
        let gens: Vec<IntVector> = gens.into_iter().map(|g| g.into_iter().map(BigInt::from).collect()).collect();
        let nonzero: Vec<IntVector> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).cloned().collect();
        prop_assert_eq!(cone_is_pointed(&nonzero), planar_pointed(&gens));
    }

    #[test]
    fn projection_hull_is_consistent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_delzant(&mut rng, 3);
        let n = pts[0].len();
        let k = rand::Rng::gen_range(&mut rng, 1..=n);
        let p = random_subspace(&mut rng, n, k);
        let d = verify_delzant(&pts).unwrap();
        let map = IntMatrix::from_rows(&p, n).unwrap();
        let proj = project_polytope(&d, &map).unwrap();
        for v in &proj.hull_vertices {
            prop_assert!(proj.point_images.contains(v));
            let others: Vec<RationalVector> = proj.hull_vertices.iter().filter(|w| *w != v).cloned().collect();
            prop_assert!(others.is_empty() || !in_convex_hull(&others, v));
        }
        for img in &proj.point_images {
            prop_assert!(in_convex_hull(&proj.hull_vertices, img));
        }
        if k == 1 {
            let min = proj.point_images.iter().min().unwrap();
            let max = proj.point_images.iter().max().unwrap();
            let mut expected = vec![min.clone(), max.clone()];
            expected.dedup();
            prop_assert_eq!(&proj.hull_vertices, &expected);
        }
    }

    #[test]
    fn exact_chart_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_delzant(&mut rng, 3);
        let d = verify_delzant(&pts).unwrap();
        let atlas = build_atlas(&d);
        let w: Vec<Rational> = (0..d.dim()).map(|_| nonzero_rational(&mut rng)).collect();
        for a in atlas.labels() {
            let za = torus_to_chart(&atlas, a, &w).unwrap();
            prop_assert_eq!(chart_to_torus(&atlas, &za).unwrap(), w.clone());
            for b in atlas.labels() {
                let zb = transform_point(&transition(&atlas, a, b).unwrap(), &za).unwrap();
                prop_assert_eq!(&zb.coords, &torus_to_chart(&atlas, b, &w).unwrap().coords);
            }
        }
    }

    #[test]
    fn transitions_extend_across_vanishing_coordinates(seed in any::<u64>()) {
        // a point with zeros maps through D^{ab} whenever the rows of D
        // with negative entries avoid the zero coordinates, and then agrees
        // with the limit of torus points
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = verify_delzant(&random_delzant(&mut rng, 3)).unwrap();
        let atlas = build_atlas(&d);
        let n = d.dim();
        for a in atlas.labels() {
            for b in atlas.labels() {
                let t = transition(&atlas, a, b).unwrap();
                let free: Vec<usize> = (0..n).filter(|&j| t.d.row(j).iter().all(|x| !x.is_negative())).collect();
                let mut z: Vec<Complex64> = random_torus_point(&mut rng, n);
                for &j in &free {
                    z[j] = Complex64::zero();
                }
                let image = transform_point(&t, &ChartPoint::new(a, z.clone())).unwrap();
                let mut eps_z = z.clone();
                for &j in &free {
                    eps_z[j] = Complex64::new(1e-9, 0.0);
                }
                let near = transform_point(&t, &ChartPoint::new(a, eps_z)).unwrap();
                for (x, y) in image.coords.iter().zip(&near.coords) {
                    prop_assert!((x - y).norm() <= 1e-6 * (1.0 + y.norm()));
                }
            }
        }
    }
}

#[test]
fn cp2_chart_matrices() {
    let d = delzant(&cp2_points());
    let atlas = build_atlas(&d);
    let vertex = |x: i64, y: i64| d.polytope().vertex_index(&[rat(x, 1), rat(y, 1)]).unwrap();
    let normals = |l: usize| d.vertex_data(l).normals.clone();
    assert_eq!(
        normals(vertex(0, 0)),
        vec![int_vec(&[1, 0]), int_vec(&[0, 1])]
    );
    // the two far vertices carry (-1,-1) together with a coordinate axis
    for (x, y) in [(2, 0), (0, 2)] {
        let u = normals(vertex(x, y));
        assert!(u.contains(&int_vec(&[-1, -1])));
    }
    let _ = atlas;
    let _ = BigInt::one();
}

fn int_vec(v: &[i64]) -> IntVector {
    toric_embed::lattice::int_vec(v)
}
