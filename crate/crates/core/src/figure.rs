//! Planar pictures of the moment image of the subtorus closure.
//!
//! No closed formula for the symplectic moment map is available, so the
//! curve is drawn with the algebraic moment map
//! `μ(w) = Σ_m m |w^m|^2 / Σ_m |w^m|^2` over the lattice points `m` of the
//! polytope. It is torus-invariant and maps into the polytope, with fixed
//! points going to vertices. Since `|w|` does not depend on the imaginary
//! parameters, only the real parameters are sampled.

use std::fmt::Write as _;
use std::path::Path;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::lattice::{IntVector, Rational};
use crate::polytope::{lattice_points, DelzantPolytope};
use crate::subtorus::AffineSubtorus;

#[derive(Debug, Error)]
pub enum FigureError {
    #[error("figures are only drawn for planar polytopes (dimension {0})")]
    DimensionUnsupported(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `μ` at `log|w| = log E + Σ_l u_l p_l`, by a stable log-sum-exp.
pub fn algebraic_moment(lattice: &[IntVector], log_abs_w: &[f64]) -> Vec<f64> {
    let logs: Vec<f64> = lattice
        .iter()
        .map(|m| {
            2.0 * m
                .iter()
                .zip(log_abs_w)
                .map(|(mi, l)| mi.to_f64().expect("small") * l)
                .sum::<f64>()
        })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = weights.iter().sum();
    (0..log_abs_w.len())
        .map(|d| {
            lattice
                .iter()
                .zip(&weights)
                .map(|(m, w)| m[d].to_f64().expect("small") * w)
                .sum::<f64>()
                / total
        })
        .collect()
}

fn log_abs_w(sub: &AffineSubtorus, u: &[f64]) -> Vec<f64> {
    (0..sub.n())
        .map(|i| {
            let base = sub.offset_exp()[i].to_f64().expect("finite").ln();
            base + sub
                .p()
                .iter()
                .zip(u)
                .map(|(pl, ul)| pl[i].to_f64().expect("small") * ul)
                .sum::<f64>()
        })
        .collect()
}

/// Parameter range `[-R, R]` beyond which the image no longer moves: the
/// smallest power of two for which doubling changes the images of the
/// extreme parameters by less than `1e-12`.
fn stable_radius(sub: &AffineSubtorus, lattice: &[IntVector]) -> f64 {
    let k = sub.k();
    let corners: Vec<Vec<f64>> = (0u32..1 << k)
        .map(|bits| {
            (0..k)
                .map(|l| if bits >> l & 1 == 1 { 1.0 } else { -1.0 })
                .collect()
        })
        .collect();
    let at = |r: f64, c: &[f64]| {
        let u: Vec<f64> = c.iter().map(|s| s * r).collect();
        algebraic_moment(lattice, &log_abs_w(sub, &u))
    };
    let mut r = 1.0;
    while r < 64.0 {
        let moved = corners.iter().any(|c| {
            let a = at(r, c);
            let b = at(2.0 * r, c);
            a.iter().zip(&b).any(|(x, y)| (x - y).abs() > 1e-12)
        });
        if !moved {
            break;
        }
        r *= 2.0;
    }
    r
}

/// Images of an evenly spaced parameter grid with about `samples` points
/// (a single point when `k = 0`).
pub fn sample_moment_curve(
    delzant: &DelzantPolytope,
    sub: &AffineSubtorus,
    samples: usize,
) -> Result<Vec<[f64; 2]>, FigureError> {
    if delzant.dim() != 2 {
        return Err(FigureError::DimensionUnsupported(delzant.dim()));
    }
    let lattice = lattice_points(delzant.polytope());
    let k = sub.k();
    let radius = stable_radius(sub, &lattice);
    let per_axis = match k {
        0 => 1,
        1 => samples.max(2),
        _ => ((samples as f64).sqrt().ceil() as usize).max(2),
    };
    let axis = |i: usize| -> f64 {
        if per_axis == 1 {
            0.0
        } else {
            -radius + 2.0 * radius * i as f64 / (per_axis - 1) as f64
        }
    };
    let total = per_axis.pow(k as u32);
    let out = (0..total)
        .map(|idx| {
            let mut rest = idx;
            let u: Vec<f64> = (0..k)
                .map(|_| {
                    let i = rest % per_axis;
                    rest /= per_axis;
                    axis(i)
                })
                .collect();
            let m = algebraic_moment(&lattice, &log_abs_w(sub, &u));
            [m[0], m[1]]
        })
        .collect();
    Ok(out)
}

/// Membership in the polytope after converting the floats to exact
/// rationals, each facet inequality relaxed by `tol`.
pub fn within_polytope(delzant: &DelzantPolytope, point: &[f64], tol: f64) -> bool {
    let exact: Option<Vec<Rational>> = point.iter().map(|&x| Rational::from_float(x)).collect();
    let Some(exact) = exact else {
        return false;
    };
    let slack = Rational::from_float(tol).expect("finite tolerance");
    delzant.halfspaces().iter().all(|(u, b)| {
        let lhs = u
            .iter()
            .zip(&exact)
            .fold(Rational::from_integer(0.into()), |acc, (ui, x)| {
                acc + x * ui
            });
        lhs - b >= -slack.clone()
    })
}

/// Vertices of a planar polytope in boundary order, following edges.
fn boundary_cycle(delzant: &DelzantPolytope) -> Vec<usize> {
    let p = delzant.polytope();
    let mut cycle = vec![0];
    let mut prev = usize::MAX;
    let mut cur = 0;
    loop {
        let next = *p
            .neighbors(cur)
            .iter()
            .find(|&&v| v != prev)
            .expect("every vertex of a polygon has two neighbors");
        if next == 0 {
            return cycle;
        }
        cycle.push(next);
        prev = cur;
        cur = next;
    }
}

fn fmt3(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

/// A standalone SVG drawing: the polygon, then the samples as a polyline when
/// they form a curve (`k = 1`) or as dots otherwise.
pub fn render_svg(
    delzant: &DelzantPolytope,
    samples: &[[f64; 2]],
    as_curve: bool,
) -> Result<String, FigureError> {
    if delzant.dim() != 2 {
        return Err(FigureError::DimensionUnsupported(delzant.dim()));
    }
    let verts: Vec<[f64; 2]> = delzant
        .vertices()
        .iter()
        .map(|v| {
            [
                v[0].to_f64().expect("finite"),
                v[1].to_f64().expect("finite"),
            ]
        })
        .collect();
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for v in &verts {
        for d in 0..2 {
            lo[d] = lo[d].min(v[d]);
            hi[d] = hi[d].max(v[d]);
        }
    }
    let size = 500.0;
    let margin = 0.05 * size;
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let scale = (size - 2.0 * margin) / span;
    let map = |p: &[f64; 2]| -> (String, String) {
        let x = margin + (p[0] - lo[0]) * scale;
        let y = size - margin - (p[1] - lo[1]) * scale;
        (fmt3(x), fmt3(y))
    };

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"500\" height=\"500\" viewBox=\"0 0 500 500\">\n",
    );
    svg.push_str("<rect x=\"0\" y=\"0\" width=\"500\" height=\"500\" fill=\"white\"/>\n");
    let poly: Vec<String> = boundary_cycle(delzant)
        .into_iter()
        .map(|i| {
            let (x, y) = map(&verts[i]);
            format!("{x},{y}")
        })
        .collect();
    let _ = writeln!(
        svg,
        "<polygon points=\"{}\" fill=\"#eef3fb\" stroke=\"black\" stroke-width=\"2\"/>",
        poly.join(" ")
    );
    if as_curve && samples.len() > 1 {
        let pts: Vec<String> = samples
            .iter()
            .map(|p| {
                let (x, y) = map(p);
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"3\"/>",
            pts.join(" ")
        );
    } else {
        for p in samples {
            let (x, y) = map(p);
            let _ = writeln!(
                svg,
                "<circle cx=\"{x}\" cy=\"{y}\" r=\"2.5\" fill=\"#c0392b\"/>"
            );
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_svg(
    delzant: &DelzantPolytope,
    samples: &[[f64; 2]],
    as_curve: bool,
    path: &Path,
) -> Result<(), FigureError> {
    let svg = render_svg(delzant, samples, as_curve)?;
    std::fs::write(path, svg)?;
    Ok(())
}
