//! Batch front end: parses a command line, runs one pipeline step and returns an exit
//! code with a JSON report.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails (the report
//! carries witnesses), 2 on unusable input.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::birat::{extension_diagnostic, orbit_consistency, reconstruct_from_pq, RationalMap, RationalMapQP};
use crate::error::Error;
use crate::exact::{GaussRational, Matrix};
use crate::holsolver::{check_property_p, complexify, solve_hol, stabilization, Ground, LieAlgebraBasis};
use crate::liestruct::{grade_by_euler, killing_inertia, structure_constants, PushforwardMatrix};
use crate::manifolds::ManifoldSpec;
use crate::regularizer::{plucker_point, regular_samples, verify_intertwining, verify_intertwining_with};

#[derive(Parser, Debug)]
#[command(name = "crbirat", about = "Exact CR-automorphism algebras, birational maps and their regularization")]
pub struct Cli {
    /// Seed for every sampling step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Group,
}

#[derive(Subcommand, Debug)]
pub enum Group {
    /// Infinitesimal automorphisms.
    #[command(subcommand)]
    Hol(HolCmd),
    /// Lie-algebraic structure of a basis.
    #[command(subcommand)]
    Lie(LieCmd),
    /// Plücker regularization.
    #[command(subcommand)]
    Reg(RegCmd),
    /// Birational maps in q⁻¹p form.
    #[command(subcommand)]
    Bir(BirCmd),
    /// Standalone condition checks.
    #[command(subcommand)]
    Check(CheckCmd),
}

#[derive(Subcommand, Debug)]
pub enum HolCmd {
    Solve {
        #[arg(long)]
        manifold: PathBuf,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Re-solve at degree + 1 and report whether the dimension grew.
        #[arg(long)]
        stabilize: bool,
    },
}

#[derive(Args, Debug)]
pub struct BasisArg {
    #[arg(long)]
    pub basis: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum LieCmd {
    Grade(BasisArg),
    Constants(BasisArg),
}

#[derive(Subcommand, Debug)]
pub enum RegCmd {
    Phi {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long)]
        point: PathBuf,
    },
    Verify {
        #[arg(long)]
        basis: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Use this pushforward matrix instead of computing it from the map.
        #[arg(long)]
        nu: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum BirCmd {
    Extract {
        #[arg(long)]
        map: PathBuf,
    },
    Reconstruct {
        #[arg(long)]
        pq: PathBuf,
    },
    Orbit {
        #[arg(long)]
        manifold: PathBuf,
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum CheckCmd {
    /// Non-degeneracy of the Hermitian forms of a quadric.
    Form {
        #[arg(long)]
        manifold: PathBuf,
    },
    /// Base conditions of a tube.
    Tube {
        #[arg(long)]
        manifold: PathBuf,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Constants and the Euler field in the complex span of a basis.
    PropertyP(BasisArg),
    /// Holomorphic non-degeneracy: the solved algebra is totally real.
    Nondegenerate {
        #[arg(long)]
        manifold: PathBuf,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
}

/// A failure carrying the exit code and a message for the report.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotClosed { .. }
            | Error::EulerMissing
            | Error::EscapesSpan { .. }
            | Error::CodimensionMismatch { .. }
            | Error::NotPreserved { .. }
            | Error::NonPolynomial { .. }
            | Error::DerivativeMismatch { .. } => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_error(msg: impl Into<String>) -> Failure {
    Failure { code: 2, message: msg.into() }
}

struct Ctx {
    seed: u64,
    inputs: BTreeMap<String, String>,
}

impl Ctx {
    fn read<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T, Failure> {
        let bytes = std::fs::read(path).map_err(|e| input_error(format!("{}: {e}", path.display())))?;
        self.inputs.insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
        serde_json::from_slice(&bytes).map_err(|e| input_error(format!("{}: {e}", path.display())))
    }

    /// A map file holds either the `(p, q)` form or symbolic components.
    fn read_map(&mut self, path: &Path) -> Result<RationalMapQP, Failure> {
        let v: Value = self.read(path)?;
        parse_map(v).map_err(|e| match e {
            Failure { code: 2, message } => input_error(format!("{}: {message}", path.display())),
            f => f,
        })
    }

    fn read_complex_basis(&mut self, path: &Path) -> Result<LieAlgebraBasis, Failure> {
        let b: LieAlgebraBasis = self.read(path)?;
        for f in &b.elements {
            if f.dim() != b.ambient_dim {
                return Err(input_error("basis element dimension differs from ambient_dim"));
            }
        }
        match b.ground {
            Ground::Complex => Ok(b),
            Ground::Real => Ok(complexify(&b)?.0),
        }
    }
}

#[derive(Deserialize)]
struct SymbolicMapFile {
    #[serde(flatten)]
    map: RationalMap,
    inverse: Option<RationalMap>,
}

fn parse_map(v: Value) -> Result<RationalMapQP, Failure> {
    if v.get("components").is_some() {
        let f: SymbolicMapFile = serde_json::from_value(v).map_err(|e| input_error(e.to_string()))?;
        Ok(RationalMapQP::from_map(&f.map, f.inverse.as_ref())?)
    } else {
        serde_json::from_value(v).map_err(|e| input_error(e.to_string()))
    }
}

fn pass_fail(ok: bool) -> i32 {
    if ok {
        0
    } else {
        1
    }
}

fn execute(cmd: &Group, ctx: &mut Ctx) -> Result<(i32, Value), Failure> {
    let seed = ctx.seed;
    match cmd {
        Group::Hol(HolCmd::Solve { manifold, degree, stabilize }) => {
            let m: ManifoldSpec = ctx.read(manifold)?;
            let sol = solve_hol(&m, *degree)?;
            let mut res = json!({
                "dim_real": sol.basis.len(),
                "closed": sol.closed,
                "basis": sol.basis,
            });
            if !sol.basis.is_empty() {
                let (l, tr) = complexify(&sol.basis)?;
                res["dim_complex"] = json!(l.len());
                res["totally_real"] = json!(tr);
                if sol.closed {
                    res["killing_inertia"] = serde_json::to_value(killing_inertia(&sol.basis)?).unwrap();
                }
            }
            if *stabilize {
                res["stabilization"] = serde_json::to_value(stabilization(&m, *degree)?).unwrap();
            }
            Ok((0, res))
        }
        Group::Lie(LieCmd::Grade(BasisArg { basis })) => {
            let l = ctx.read_complex_basis(basis)?;
            let g = grade_by_euler(&l)?;
            let dims: BTreeMap<String, usize> = g.dims().into_iter().map(|(m, d)| (m.to_string(), d)).collect();
            let no_low = g.parts.keys().all(|&m| m >= -1);
            Ok((0, json!({ "dims": dims, "total": g.total_dim(), "no_weight_below_minus_one": no_low, "parts": g })))
        }
        Group::Lie(LieCmd::Constants(BasisArg { basis })) => {
            let l = ctx.read_complex_basis(basis)?;
            let sc = structure_constants(&l)?;
            let anti = sc.is_antisymmetric();
            let jacobi = sc.satisfies_jacobi();
            Ok((pass_fail(anti && jacobi), json!({ "antisymmetric": anti, "jacobi": jacobi, "constants": sc })))
        }
        Group::Reg(RegCmd::Phi { basis, point }) => {
            let l = ctx.read_complex_basis(basis)?;
            let a: Vec<GaussRational> = ctx.read(point)?;
            let p = plucker_point(&l, &a)?;
            let rel = p.relations_hold(50, seed);
            Ok((pass_fail(rel), json!({ "projective_dim": p.projective_dim(), "plucker_relations": rel, "point": p })))
        }
        Group::Reg(RegCmd::Verify { basis, map, samples, nu }) => {
            let l = ctx.read_complex_basis(basis)?;
            let g = ctx.read_map(map)?;
            let pts = regular_samples(&g, *samples, seed)?;
            let report = match nu {
                Some(path) => {
                    let rows: Vec<Vec<GaussRational>> = ctx.read(path)?;
                    if rows.len() != l.len() || rows.iter().any(|r| r.len() != l.len()) {
                        return Err(input_error(format!("pushforward matrix must be {0}x{0}", l.len())));
                    }
                    let nu = PushforwardMatrix { matrix: Matrix::from_rows(l.len(), rows), map_ref: "supplied".into() };
                    verify_intertwining_with(&l, &g, &nu, &pts)?
                }
                None => verify_intertwining(&l, &g, &pts, seed)?,
            };
            Ok((pass_fail(report.all_equal), serde_json::to_value(report).unwrap()))
        }
        Group::Bir(BirCmd::Extract { map }) => {
            let g = ctx.read_map(map)?;
            let extension = match g.inverse() {
                Some(inv) => serde_json::to_value(extension_diagnostic(&g.map()?, &inv.map()?)?).unwrap(),
                None => Value::Null,
            };
            Ok((
                0,
                json!({
                    "extension": extension,
                    "det_q": g.regular_set(),
                    "exact_denominator": g.exact_denominator()?,
                    "map": g,
                }),
            ))
        }
        Group::Bir(BirCmd::Reconstruct { pq }) => {
            let g: RationalMapQP = ctx.read_map(pq)?;
            let r = reconstruct_from_pq(g.p().to_vec(), g.q().clone(), seed)?;
            Ok((
                0,
                json!({
                    "derivative_identity_points": crate::birat::DERIVATIVE_CHECKS,
                    "det_q": r.regular_set(),
                    "map": r.map()?,
                }),
            ))
        }
        Group::Bir(BirCmd::Orbit { manifold, map, samples }) => {
            let m: ManifoldSpec = ctx.read(manifold)?;
            let g = ctx.read_map(map)?;
            let rep = orbit_consistency(&m, &g, *samples, seed)?;
            Ok((pass_fail(rep.passed), serde_json::to_value(rep).unwrap()))
        }
        Group::Check(CheckCmd::Form { manifold }) => match ctx.read::<ManifoldSpec>(manifold)? {
            ManifoldSpec::Quadric(q) => {
                let r = q.form.check_nondegenerate();
                Ok((pass_fail(r.passes()), serde_json::to_value(r).unwrap()))
            }
            ManifoldSpec::Tube(_) => Err(input_error("check form needs a quadric")),
        },
        Group::Check(CheckCmd::Tube { manifold, samples }) => match ctx.read::<ManifoldSpec>(manifold)? {
            ManifoldSpec::Tube(t) => {
                let r = t.check_conditions(samples.unwrap_or(t.n() + 5), seed)?;
                Ok((pass_fail(r.not_in_hyperplane && r.no_tangent_constant), serde_json::to_value(r).unwrap()))
            }
            ManifoldSpec::Quadric(_) => Err(input_error("check tube needs a tube manifold")),
        },
        Group::Check(CheckCmd::PropertyP(BasisArg { basis })) => {
            let l = ctx.read_complex_basis(basis)?;
            let w = check_property_p(&l);
            Ok((pass_fail(w.passes()), serde_json::to_value(w).unwrap()))
        }
        Group::Check(CheckCmd::Nondegenerate { manifold, degree }) => {
            let m: ManifoldSpec = ctx.read(manifold)?;
            let sol = solve_hol(&m, *degree)?;
            if sol.basis.is_empty() {
                return Ok((1, json!({ "dim_real": 0, "totally_real": false })));
            }
            let (l, tr) = complexify(&sol.basis)?;
            Ok((pass_fail(tr), json!({ "dim_real": sol.basis.len(), "dim_complex": l.len(), "totally_real": tr })))
        }
    }
}

/// Runs one command. `args` includes the program name, as in `std::env::args_os`.
pub fn run<I, T>(args: I) -> (i32, Value)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return (code, json!({ "command": echo, "status": "error", "exit_code": code, "error": e.to_string() }));
        }
    };
    let start = Instant::now();
    let mut ctx = Ctx { seed: cli.seed, inputs: BTreeMap::new() };
    let outcome = execute(&cli.command, &mut ctx);
    let elapsed = start.elapsed().as_secs_f64();
    let (code, mut report) = match outcome {
        Ok((code, results)) => (code, json!({ "results": results })),
        Err(f) => (f.code, json!({ "error": f.message })),
    };
    report["command"] = json!(echo);
    report["seed"] = json!(cli.seed);
    report["inputs"] = json!(ctx.inputs);
    report["status"] = json!(match code {
        0 => "pass",
        1 => "fail",
        _ => "error",
    });
    report["exit_code"] = json!(code);
    report["timing"] = json!({ "seconds": elapsed });
    if let Some(path) = &cli.out {
        let text = serde_json::to_string_pretty(&report).unwrap();
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return (2, report);
        }
    }
    (code, report)
}
