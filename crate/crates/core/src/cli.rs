//! Command-line front end. [`run`] does all the work and returns the text to
//! print, so the binary is a thin wrapper and tests can drive every command.
//!
//! Exit codes: 0 on success, 1 when the closure is singular (for
//! `smoothness` and checked `moment`), 2 on invalid input.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::json;

use crate::charts::build_atlas;
use crate::figure::{emit_svg, sample_moment_curve};
use crate::lattice::IntVector;
use crate::moment::{moment_image, Mode, MomentError};
use crate::polytope::{verify_delzant, DelzantPolytope};
use crate::report;
use crate::scene::{parse_scene, SceneDocument};
use crate::smoothness::{classify, Verdict};
use crate::subtorus::{validate_subspace, AffineSubtorus};

#[derive(Debug, Parser)]
#[command(
    name = "toric-embed",
    version,
    about = "Closures of affine subtori in Delzant toric manifolds"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the Delzant conditions and list edge directions and normals.
    Verify {
        scene: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the binomial equations of the closure in every chart.
    Equations {
        scene: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether the closure is smooth, with witnesses if it is not.
    Smoothness {
        scene: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compute the moment image and certify its vertices.
    Moment {
        scene: PathBuf,
        /// Run even when the closure is singular.
        #[arg(long)]
        unchecked: bool,
        #[arg(long)]
        json: bool,
    },
    /// Draw the polygon and the image of the subtorus as SVG (planar only).
    Figure {
        scene: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Overrides the sample count from the scene options.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Classify every primitive direction p (up to sign) with entries in
    /// [-B, B], using the scene's polytope and offset.
    ClassifyDirections {
        scene: PathBuf,
        #[arg(long = "box", value_name = "B")]
        bound: u32,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            stderr: String::new(),
            code: 0,
        }
    }

    fn input_error(msg: impl std::fmt::Display) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: 2,
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code: 2,
                }
            } else {
                Outcome::ok(text)
            };
        }
    };
    match execute(cli.command) {
        Ok(o) => o,
        Err(msg) => Outcome::input_error(msg),
    }
}

struct Loaded {
    scene: SceneDocument,
    delzant: DelzantPolytope,
}

fn load(path: &PathBuf) -> Result<Loaded, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let scene = parse_scene(&text).map_err(|e| e.to_string())?;
    let delzant = verify_delzant(&scene.polytope).map_err(|e| e.to_string())?;
    Ok(Loaded { scene, delzant })
}

fn subtorus(scene: &SceneDocument) -> Result<AffineSubtorus, String> {
    validate_subspace(&scene.subspace, &scene.offset_exp).map_err(|e| e.to_string())
}

fn render(json: bool, value: serde_json::Value, text: String) -> String {
    if json {
        report::to_pretty(&value)
    } else {
        text
    }
}

fn execute(cmd: Command) -> Result<Outcome, String> {
    match cmd {
        Command::Verify { scene, json } => {
            let l = load(&scene)?;
            Ok(Outcome::ok(render(
                json,
                report::verify_json(&l.delzant),
                report::verify_text(&l.delzant),
            )))
        }
        Command::Equations { scene, json } => {
            let l = load(&scene)?;
            let v = subtorus(&l.scene)?;
            let atlas = build_atlas(&l.delzant);
            Ok(Outcome::ok(render(
                json,
                report::equations_json(&l.delzant, &atlas, &v),
                report::equations_text(&l.delzant, &atlas, &v),
            )))
        }
        Command::Smoothness { scene, json } => {
            let l = load(&scene)?;
            let v = subtorus(&l.scene)?;
            let atlas = build_atlas(&l.delzant);
            let rep = classify(&atlas, &v);
            let mut out = Outcome::ok(render(
                json,
                report::smoothness_json(&l.delzant, &rep),
                report::smoothness_text(&l.delzant, &rep),
            ));
            if rep.verdict == Verdict::Singular {
                out.code = 1;
            }
            Ok(out)
        }
        Command::Moment {
            scene,
            unchecked,
            json,
        } => {
            let l = load(&scene)?;
            let v = subtorus(&l.scene)?;
            let atlas = build_atlas(&l.delzant);
            let mode = if unchecked {
                Mode::Unchecked
            } else {
                Mode::Checked
            };
            match moment_image(&l.delzant, &atlas, &v, mode) {
                Ok(m) => Ok(Outcome::ok(render(
                    json,
                    report::moment_json(&l.delzant, &atlas, &m),
                    report::moment_text(&l.delzant, &atlas, &v, &m),
                ))),
                Err(MomentError::NotSmooth) => Ok(Outcome {
                    stdout: String::new(),
                    stderr:
                        "error: the closure is SINGULAR, so the moment theorem does not apply; \
                             pass --unchecked to compute the image anyway\n"
                            .into(),
                    code: 1,
                }),
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Figure {
            scene,
            output,
            samples,
        } => {
            let l = load(&scene)?;
            let v = subtorus(&l.scene)?;
            let n = samples.unwrap_or(l.scene.options.samples);
            if n == 0 {
                return Err("--samples must be positive".into());
            }
            let pts = sample_moment_curve(&l.delzant, &v, n).map_err(|e| e.to_string())?;
            emit_svg(&l.delzant, &pts, v.k() == 1, &output).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(format!(
                "wrote {} ({} samples)\n",
                output.display(),
                pts.len()
            )))
        }
        Command::ClassifyDirections { scene, bound, json } => {
            let l = load(&scene)?;
            let atlas = build_atlas(&l.delzant);
            let mut rows = Vec::new();
            for p in directions(l.scene.dimension, bound) {
                let v = validate_subspace(std::slice::from_ref(&p), &l.scene.offset_exp)
                    .map_err(|e| e.to_string())?;
                let rep = classify(&atlas, &v);
                rows.push((p, rep.verdict, rep.unreached_strata().count()));
            }
            let smooth = rows.iter().filter(|r| r.1 == Verdict::Smooth).count();
            let text = if json {
                report::to_pretty(&json!({
                    "bound": bound,
                    "directions": rows.iter().map(|(p, verdict, unreached)| json!({
                        "p": report::int_json(p),
                        "verdict": verdict.to_string(),
                        "unreached_strata": unreached,
                    })).collect::<Vec<_>>(),
                    "smooth": smooth,
                    "total": rows.len(),
                }))
            } else {
                let mut t = String::new();
                for (p, verdict, unreached) in &rows {
                    t.push_str(&format!("p = {}: {verdict}", report::format_int_vec(p)));
                    if *unreached > 0 {
                        t.push_str(&format!(
                            " ({unreached} locus strata not reached from the open orbit)"
                        ));
                    }
                    t.push('\n');
                }
                t.push_str(&format!("{smooth} of {} directions SMOOTH\n", rows.len()));
                t
            };
            Ok(Outcome::ok(text))
        }
    }
}

/// Primitive integer vectors in `[-bound, bound]^n` whose first nonzero
/// entry is positive, in lexicographic order.
pub fn directions(n: usize, bound: u32) -> Vec<IntVector> {
    let b = i64::from(bound);
    let width = (2 * b + 1) as usize;
    let mut out = Vec::new();
    let total = width.checked_pow(n as u32).unwrap_or(usize::MAX);
    for idx in 0..total {
        let mut rest = idx;
        let mut p = vec![BigInt::zero(); n];
        for slot in p.iter_mut().rev() {
            *slot = BigInt::from((rest % width) as i64 - b);
            rest /= width;
        }
        let first = p.iter().find(|x| !x.is_zero());
        let Some(first) = first else { continue };
        if first.is_negative() {
            continue;
        }
        let g = p.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g == BigInt::from(1) {
            out.push(p);
        }
    }
    out
}
