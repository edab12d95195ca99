//! Fixed points of the `T^k`-action and the projected moment polytope.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::charts::ChartAtlas;
use crate::lattice::{IntMatrix, IntVector, Rational, RationalVector};
use crate::polytope::{cone_is_pointed, project_polytope, DelzantPolytope, ProjectedPolytope};
use crate::smoothness::{classify, Stratum, Verdict};
use crate::subtorus::{
    defining_equations, evaluate_equation, index_profile, pairing_matrix, pullback_matrix,
    pvuq_residual, weight_matrix, AffineSubtorus, BinomialEquation, IndexProfile,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MomentError {
    #[error("the image of vertex {0} is not a vertex of the projected polytope")]
    NotAVertexImage(usize),
    #[error("the subtorus closure is not smooth; rerun in unchecked mode to explore")]
    NotSmooth,
}

/// `{z : z_i = 0 for i outside J_λ}`.
pub fn fixed_stratum(profile: &IndexProfile) -> Stratum {
    Stratum {
        label: profile.label,
        support: profile.j_set.clone(),
    }
}

/// True when some equation has all its exponents strictly of one sign, which
/// rules out any zero coordinate on the locus.
pub fn no_fixed_point_check(eqs: &[BinomialEquation]) -> bool {
    eqs.iter().any(|f| {
        f.exponents.iter().all(Signed::is_positive) || f.exponents.iter().all(Signed::is_negative)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StarTag {
    /// All pairings off `J_λ` vanish.
    Cond1,
    /// Two pairings off `J_λ` of opposite sign, at these coordinates.
    Cond2 {
        i: usize,
        i_prime: usize,
    },
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarClassification {
    pub label: usize,
    pub tags: Vec<StarTag>,
}

pub fn star_classification(
    atlas: &ChartAtlas,
    sub: &AffineSubtorus,
    label: usize,
) -> StarClassification {
    let profile = index_profile(atlas, sub, label).expect("label from atlas");
    let pairings = pairing_matrix(atlas, sub, label).expect("label from atlas");
    let off: Vec<usize> = (0..sub.n())
        .filter(|i| !profile.j_set.contains(i))
        .collect();
    let tags = (0..pairings.rows())
        .map(|j| {
            let s = pairings.row(j);
            if off.iter().all(|&i| s[i].is_zero()) {
                return StarTag::Cond1;
            }
            for (a, &i) in off.iter().enumerate() {
                for &i2 in &off[a + 1..] {
                    if (&s[i] * &s[i2]).is_negative() {
                        return StarTag::Cond2 { i, i_prime: i2 };
                    }
                }
            }
            StarTag::Neither
        })
        .collect();
    StarClassification { label, tags }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexStatus {
    Vertex,
    NonVertex,
}

/// Whether `i_V^*(λ)` is a vertex of `i_V^*(Δ)`: the nonzero images of the
/// edge directions at `λ` must generate a pointed cone.
pub fn vertex_status(atlas: &ChartAtlas, sub: &AffineSubtorus, label: usize) -> VertexStatus {
    let w = weight_matrix(atlas, sub, label).expect("label from atlas");
    let gens: Vec<IntVector> = w
        .to_columns()
        .into_iter()
        .filter(|c| c.iter().any(|x| !x.is_zero()))
        .collect();
    if cone_is_pointed(&gens) {
        VertexStatus::Vertex
    } else {
        VertexStatus::NonVertex
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointCertificate {
    pub label: usize,
    pub point: RationalVector,
    /// Every `f^λ_j` vanishes at the point, checked exactly.
    pub equations_vanish: bool,
    /// The point has no nonzero coordinate outside `J_λ`.
    pub in_fixed_stratum: bool,
}

impl FixedPointCertificate {
    pub fn verified(&self) -> bool {
        self.equations_vanish && self.in_fixed_stratum
    }
}

/// `z̃_i = e^{<a, v^λ_i>}` on `J_λ` and `0` elsewhere, with both properties
/// checked exactly.
pub fn canonical_fixed_point(
    atlas: &ChartAtlas,
    sub: &AffineSubtorus,
    label: usize,
) -> Result<FixedPointCertificate, MomentError> {
    if vertex_status(atlas, sub, label) == VertexStatus::NonVertex {
        return Err(MomentError::NotAVertexImage(label));
    }
    let profile = index_profile(atlas, sub, label).expect("label from atlas");
    let q = &atlas.chart(label).expect("label from atlas").q;
    let point: RationalVector = (0..sub.n())
        .map(|i| {
            if profile.j_set.contains(&i) {
                sub.exp_pairing(&q.column(i))
            } else {
                Rational::zero()
            }
        })
        .collect();
    let eqs = defining_equations(atlas, sub, label).expect("label from atlas");
    Ok(FixedPointCertificate {
        label,
        equations_vanish: eqs.iter().all(|f| evaluate_equation(f, &point).is_zero()),
        in_fixed_stratum: (0..sub.n()).all(|i| profile.j_set.contains(&i) || point[i].is_zero()),
        point,
    })
}

/// True when `i_V^*` is constant on the face of `Δ` at `λ` spanned by the
/// edges in `J_λ`.
pub fn face_collapse_check(
    delzant: &DelzantPolytope,
    atlas: &ChartAtlas,
    sub: &AffineSubtorus,
    label: usize,
) -> bool {
    let profile = index_profile(atlas, sub, label).expect("label from atlas");
    let l = pullback_matrix(sub);
    let here = l.mul_rat_vec(delzant.vertex(label));
    delzant
        .face_vertices(label, &profile.j_set)
        .into_iter()
        .all(|nu| l.mul_rat_vec(delzant.vertex(nu)) == here)
}

/// `P Q^λ (Q^λ)^{-1} [q]` for every chart; all entries are zero.
pub fn orthogonality_check(atlas: &ChartAtlas, sub: &AffineSubtorus) -> Vec<IntMatrix> {
    atlas
        .labels()
        .map(|l| pvuq_residual(atlas, sub, l).expect("label from atlas"))
        .collect()
}

/// `Σ_{i ∉ J_λ} <u^λ_i, q_j> i_V^*(v^λ_i)` for every `j`; all zero.
pub fn kernel_identity_residual(
    atlas: &ChartAtlas,
    sub: &AffineSubtorus,
    label: usize,
) -> Vec<IntVector> {
    let profile = index_profile(atlas, sub, label).expect("label from atlas");
    let w = weight_matrix(atlas, sub, label).expect("label from atlas");
    let s = pairing_matrix(atlas, sub, label).expect("label from atlas");
    (0..s.rows())
        .map(|j| {
            (0..sub.k())
                .map(|l| {
                    (0..sub.n())
                        .filter(|i| !profile.j_set.contains(i))
                        .map(|i| &s[(j, i)] * &w[(l, i)])
                        .sum::<BigInt>()
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Requires a smooth closure, the hypothesis of the moment theorem.
    Checked,
    /// Runs regardless; results are outside the theorem's hypotheses when
    /// the closure is singular.
    Unchecked,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentImage {
    pub projected: ProjectedPolytope,
    pub statuses: Vec<VertexStatus>,
    pub certificates: Vec<Option<FixedPointCertificate>>,
    /// Smoothness verdict of the closure.
    pub verdict: Verdict,
    /// Hull vertices of the image equal the images of the vertices carrying
    /// verified certificates.
    pub theorem_holds: bool,
}

impl MomentImage {
    pub fn within_hypotheses(&self) -> bool {
        self.verdict == Verdict::Smooth
    }

    /// Distinct images of the certified vertices, sorted.
    pub fn certified_images(&self) -> Vec<RationalVector> {
        let mut out: Vec<RationalVector> = self
            .certificates
            .iter()
            .enumerate()
            .filter(|(_, c)| c.as_ref().is_some_and(FixedPointCertificate::verified))
            .map(|(l, _)| self.projected.point_images[l].clone())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

pub fn moment_image(
    delzant: &DelzantPolytope,
    atlas: &ChartAtlas,
    sub: &AffineSubtorus,
    mode: Mode,
) -> Result<MomentImage, MomentError> {
    let verdict = classify(atlas, sub).verdict;
    if mode == Mode::Checked && verdict != Verdict::Smooth {
        return Err(MomentError::NotSmooth);
    }
    let projected =
        project_polytope(delzant, &pullback_matrix(sub)).expect("p validated independent");
    let statuses: Vec<VertexStatus> = atlas
        .labels()
        .map(|l| vertex_status(atlas, sub, l))
        .collect();
    let certificates: Vec<Option<FixedPointCertificate>> = atlas
        .labels()
        .map(|l| canonical_fixed_point(atlas, sub, l).ok())
        .collect();
    let mut image = MomentImage {
        projected,
        statuses,
        certificates,
        verdict,
        theorem_holds: false,
    };
    image.theorem_holds = image.certified_images() == image.projected.hull_vertices;
    Ok(image)
}
