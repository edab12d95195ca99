//! Exact convex polytopes and cones.
//!
//! Extreme points and edges are decided by exact rational feasibility
//! problems (see [`crate::lp`]), which keeps everything dimension-generic.
//! A [`DelzantPolytope`] additionally carries, for every vertex, the
//! primitive edge directions ordered to determinant +1 and the inward facet
//! normals dual to them.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{
    self, dot_int_rat, primitive_direction, rat_sub, unimodular_inverse, IntMatrix, IntVector,
    LatticeError, Rational, RationalVector,
};
use crate::lp;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("empty point set")]
    Empty,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point set spans an affine space of dimension {affine_dim} < {ambient_dim}")]
    NotFullDimensional {
        affine_dim: usize,
        ambient_dim: usize,
    },
    #[error("{point} is not a vertex of the polytope")]
    NotAVertex { point: String },
    #[error("not a Delzant polytope: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    NotDelzant(Vec<DelzantViolation>),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Which defining property of a Delzant polytope failed at a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DelzantCondition {
    /// The vertex does not have exactly `n` incident edges.
    Simple { edges: usize },
    /// The primitive edge directions do not form a basis of `Z^n`.
    Smooth { det: BigInt },
}

impl DelzantCondition {
    pub fn name(&self) -> &'static str {
        match self {
            DelzantCondition::Simple { .. } => "simple",
            DelzantCondition::Smooth { .. } => "smooth",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelzantViolation {
    pub vertex: RationalVector,
    pub condition: DelzantCondition,
}

impl fmt::Display for DelzantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let detail = match &self.condition {
            DelzantCondition::Simple { edges } => format!("{edges} incident edges"),
            DelzantCondition::Smooth { det } => format!("edge determinant {det}"),
        };
        write!(
            f,
            "\"{}\" fails at vertex {} ({detail})",
            self.condition.name(),
            format_point(&self.vertex)
        )
    }
}

pub fn format_point(p: &[Rational]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn check_dims(points: &[RationalVector]) -> Result<usize, PolytopeError> {
    let dim = points.first().ok_or(PolytopeError::Empty)?.len();
    if let Some(bad) = points.iter().find(|p| p.len() != dim) {
        return Err(PolytopeError::DimensionMismatch {
            expected: dim,
            got: bad.len(),
        });
    }
    Ok(dim)
}

/// The extreme points of `conv(points)`, deduplicated, in lexicographic order.
pub fn hull_vertices(points: &[RationalVector]) -> Result<Vec<RationalVector>, PolytopeError> {
    check_dims(points)?;
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    let extreme = (0..pts.len())
        .filter(|&i| {
            let others: Vec<RationalVector> = pts
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, p)| p.clone())
                .collect();
            !lp::in_convex_hull(&others, &pts[i])
        })
        .map(|i| pts[i].clone())
        .collect();
    Ok(extreme)
}

/// `[a, b]` is an edge iff its midpoint cannot be written as a convex
/// combination putting positive weight on some other vertex.
fn is_edge(vertices: &[RationalVector], a: usize, b: usize) -> bool {
    let dim = vertices[a].len();
    let two = Rational::from_integer(BigInt::from(2));
    let mid: RationalVector = vertices[a]
        .iter()
        .zip(&vertices[b])
        .map(|(x, y)| (x + y) / &two)
        .collect();
    let mut rows: Vec<RationalVector> = (0..dim)
        .map(|d| vertices.iter().map(|w| &w[d] - &mid[d]).collect())
        .collect();
    rows.push(
        (0..vertices.len())
            .map(|w| {
                if w == a || w == b {
                    Rational::zero()
                } else {
                    Rational::one()
                }
            })
            .collect(),
    );
    let mut rhs = vec![Rational::zero(); dim];
    rhs.push(Rational::one());
    lp::feasible_point(&rows, &rhs).is_none()
}

fn affine_dimension(vertices: &[RationalVector]) -> usize {
    let base = &vertices[0];
    let diffs: Vec<RationalVector> = vertices[1..].iter().map(|v| rat_sub(v, base)).collect();
    lattice::rational_rank(&diffs)
}

/// A convex polytope stored by its vertices, with edge adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    affine_dim: usize,
    vertices: Vec<RationalVector>,
    neighbors: Vec<Vec<usize>>,
}

impl Polytope {
    pub fn from_points(points: &[RationalVector]) -> Result<Self, PolytopeError> {
        let dim = check_dims(points)?;
        let vertices = hull_vertices(points)?;
        let neighbors = (0..vertices.len())
            .map(|i| {
                (0..vertices.len())
                    .filter(|&j| j != i && is_edge(&vertices, i, j))
                    .collect()
            })
            .collect();
        Ok(Self {
            dim,
            affine_dim: affine_dimension(&vertices),
            vertices,
            neighbors,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn vertex_index(&self, point: &[Rational]) -> Result<usize, PolytopeError> {
        self.vertices
            .iter()
            .position(|v| v.as_slice() == point)
            .ok_or_else(|| PolytopeError::NotAVertex {
                point: format_point(point),
            })
    }

    /// Indices of the vertices joined to vertex `i` by an edge.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.neighbors[i]
    }

    /// Primitive integral directions of the edges at vertex `i`, ordered as
    /// the neighbor indices.
    pub fn edge_directions_at(&self, i: usize) -> Vec<IntVector> {
        self.neighbors[i]
            .iter()
            .map(|&j| {
                primitive_direction(&rat_sub(&self.vertices[j], &self.vertices[i]))
                    .expect("distinct vertices")
            })
            .collect()
    }

    pub fn contains(&self, point: &[Rational]) -> bool {
        point.len() == self.dim && lp::in_convex_hull(&self.vertices, point)
    }
}

/// Primitive integral directions of the edges of `polytope` incident to the
/// vertex `vertex`.
pub fn vertex_edge_directions(
    polytope: &Polytope,
    vertex: &[Rational],
) -> Result<Vec<IntVector>, PolytopeError> {
    let i = polytope.vertex_index(vertex)?;
    Ok(polytope.edge_directions_at(i))
}

/// The inward facet normals at a vertex: the rows of the inverse of the
/// edge-direction matrix (columns are edge directions).
pub fn facet_normals_at_vertex(chart: &IntMatrix) -> Result<Vec<IntVector>, LatticeError> {
    Ok(unimodular_inverse(chart)?.to_rows())
}

/// Per-vertex data of a Delzant polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexData {
    /// `v_1..v_n`, sorted lexicographically with the last two swapped when
    /// that is needed for determinant +1.
    pub edges: Vec<IntVector>,
    /// `u_1..u_n` with `<u_i, v_j> = delta_ij`.
    pub normals: Vec<IntVector>,
    /// Matrix with columns `v_1..v_n`.
    pub chart: IntMatrix,
    /// Its inverse; rows are the normals.
    pub chart_inverse: IntMatrix,
}

/// A verified Delzant polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelzantPolytope {
    polytope: Polytope,
    data: Vec<VertexData>,
    /// Facet inequalities `<u, x> >= b`.
    halfspaces: Vec<(IntVector, Rational)>,
}

/// Sorts edge directions and fixes the orientation to determinant +1.
///
/// In dimension one the orientation cannot be changed by renumbering, so the
/// single direction is kept as is.
pub fn canonical_edge_order(
    mut edges: Vec<IntVector>,
) -> Result<(Vec<IntVector>, BigInt), LatticeError> {
    let n = edges.len();
    edges.sort();
    let mut det = IntMatrix::from_columns(&edges, n)?.determinant()?;
    if det.is_negative() && n >= 2 {
        edges.swap(n - 2, n - 1);
        det = -det;
    }
    Ok((edges, det))
}

/// Checks the simple / smooth conditions (rationality is automatic for
/// rational vertex data) and builds the per-vertex data.
pub fn verify_delzant(points: &[RationalVector]) -> Result<DelzantPolytope, PolytopeError> {
    let polytope = Polytope::from_points(points)?;
    let n = polytope.dim();
    if polytope.affine_dim() < n || polytope.vertices().len() < n + 1 {
        return Err(PolytopeError::NotFullDimensional {
            affine_dim: polytope.affine_dim(),
            ambient_dim: n,
        });
    }
    let mut violations = Vec::new();
    let mut data = Vec::new();
    for (i, vertex) in polytope.vertices().iter().enumerate() {
        let edges = polytope.edge_directions_at(i);
        if edges.len() != n {
            violations.push(DelzantViolation {
                vertex: vertex.clone(),
                condition: DelzantCondition::Simple { edges: edges.len() },
            });
            continue;
        }
        let (edges, det) = canonical_edge_order(edges)?;
        if !det.abs().is_one() {
            violations.push(DelzantViolation {
                vertex: vertex.clone(),
                condition: DelzantCondition::Smooth { det },
            });
            continue;
        }
        let chart = IntMatrix::from_columns(&edges, n)?;
        let chart_inverse = unimodular_inverse(&chart)?;
        data.push(VertexData {
            normals: chart_inverse.to_rows(),
            edges,
            chart,
            chart_inverse,
        });
    }
    if !violations.is_empty() {
        return Err(PolytopeError::NotDelzant(violations));
    }

    let mut halfspaces: Vec<(IntVector, Rational)> = Vec::new();
    for (vertex, d) in polytope.vertices().iter().zip(&data) {
        for u in &d.normals {
            let h = (u.clone(), dot_int_rat(u, vertex));
            if !halfspaces.contains(&h) {
                halfspaces.push(h);
            }
        }
    }
    halfspaces.sort();
    Ok(DelzantPolytope {
        polytope,
        data,
        halfspaces,
    })
}

impl DelzantPolytope {
    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    pub fn polytope(&self) -> &Polytope {
        &self.polytope
    }

    pub fn vertices(&self) -> &[RationalVector] {
        self.polytope.vertices()
    }

    pub fn num_vertices(&self) -> usize {
        self.data.len()
    }

    pub fn vertex(&self, label: usize) -> &RationalVector {
        &self.polytope.vertices()[label]
    }

    pub fn vertex_data(&self, label: usize) -> &VertexData {
        &self.data[label]
    }

    pub fn halfspaces(&self) -> &[(IntVector, Rational)] {
        &self.halfspaces
    }

    /// Exact membership through the facet inequalities.
    pub fn contains(&self, point: &[Rational]) -> bool {
        point.len() == self.dim()
            && self
                .halfspaces
                .iter()
                .all(|(u, b)| &dot_int_rat(u, point) >= b)
    }

    /// Vertices of the face through `label` spanned by the edges with the
    /// given indices (the intersection of the facets `u_i`, `i` not in
    /// `edge_indices`).
    pub fn face_vertices(&self, label: usize, edge_indices: &[usize]) -> Vec<usize> {
        let lambda = self.vertex(label);
        let d = &self.data[label];
        let tight: Vec<&IntVector> = (0..self.dim())
            .filter(|i| !edge_indices.contains(i))
            .map(|i| &d.normals[i])
            .collect();
        (0..self.num_vertices())
            .filter(|&w| {
                let diff = rat_sub(self.vertex(w), lambda);
                tight.iter().all(|u| dot_int_rat(u, &diff).is_zero())
            })
            .collect()
    }
}

/// A cone `R>=0 g_1 + ... + R>=0 g_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    generators: Vec<IntVector>,
}

impl Cone {
    pub fn new(generators: Vec<IntVector>) -> Self {
        Self { generators }
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    pub fn is_pointed(&self) -> bool {
        cone_is_pointed(&self.generators)
    }
}

/// Whether the only nonnegative combination of the generators equal to zero
/// is the trivial one, decided by infeasibility of
/// `{r >= 0, sum r_i g_i = 0, sum r_i = 1}`.
pub fn cone_is_pointed(generators: &[IntVector]) -> bool {
    let Some(first) = generators.first() else {
        return true;
    };
    let dim = first.len();
    let mut rows: Vec<RationalVector> = (0..dim)
        .map(|d| {
            generators
                .iter()
                .map(|g| Rational::from_integer(g[d].clone()))
                .collect()
        })
        .collect();
    rows.push(vec![Rational::one(); generators.len()]);
    let mut rhs = vec![Rational::zero(); dim];
    rhs.push(Rational::one());
    lp::feasible_point(&rows, &rhs).is_none()
}

/// The image of a polytope under an integer linear map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedPolytope {
    pub dim: usize,
    /// Image of each vertex, indexed by vertex label.
    pub point_images: Vec<RationalVector>,
    /// Extreme points among the images, lexicographically ordered.
    pub hull_vertices: Vec<RationalVector>,
}

impl ProjectedPolytope {
    pub fn is_hull_vertex(&self, point: &[Rational]) -> bool {
        self.hull_vertices.iter().any(|v| v.as_slice() == point)
    }
}

pub fn project_polytope(
    delzant: &DelzantPolytope,
    map: &IntMatrix,
) -> Result<ProjectedPolytope, PolytopeError> {
    if map.cols() != delzant.dim() {
        return Err(PolytopeError::DimensionMismatch {
            expected: delzant.dim(),
            got: map.cols(),
        });
    }
    let rank = map.rank();
    if rank < map.rows() {
        return Err(LatticeError::RankDeficient {
            rank,
            rows: map.rows(),
        }
        .into());
    }
    let point_images: Vec<RationalVector> = delzant
        .vertices()
        .iter()
        .map(|v| map.mul_rat_vec(v))
        .collect();
    let hull_vertices = hull_vertices(&point_images)?;
    Ok(ProjectedPolytope {
        dim: map.rows(),
        point_images,
        hull_vertices,
    })
}

/// All integer points of the polytope, by a bounding-box scan.
pub fn lattice_points(polytope: &Polytope) -> Vec<IntVector> {
    let dim = polytope.dim();
    let lo: Vec<BigInt> = (0..dim)
        .map(|d| {
            polytope
                .vertices()
                .iter()
                .map(|v| v[d].floor().to_integer())
                .min()
                .expect("nonempty polytope")
        })
        .collect();
    let hi: Vec<BigInt> = (0..dim)
        .map(|d| {
            polytope
                .vertices()
                .iter()
                .map(|v| v[d].ceil().to_integer())
                .max()
                .expect("nonempty polytope")
        })
        .collect();
    let mut out = Vec::new();
    let mut cur = lo.clone();
    loop {
        let as_rat = lattice::to_rational(&cur);
        if polytope.contains(&as_rat) {
            out.push(cur.clone());
        }
        // odometer increment, last coordinate fastest
        let mut d = dim;
        loop {
            if d == 0 {
                out.sort();
                return out;
            }
            d -= 1;
            if cur[d] < hi[d] {
                cur[d] += 1;
                cur[d + 1..dim].clone_from_slice(&lo[d + 1..dim]);
                break;
            }
        }
    }
}
