//! Command-line front end of the `rcgc-kit` binary.
//!
//! Every subcommand prints one JSON object
//! `{command, inputs, value: {re, im}, branch-info?, oracle?: {value, abs_err}, report?}`
//! on stdout. `inputs` echoes the arguments as given, so feeding
//! `{"command": .., "params": inputs}` back in batch mode reproduces the value.
//!
//! Exit codes: 0 success, 1 parse error, 2 domain error, 3 numeric error (a
//! failed `verify` suite also exits with 3).
//!
//! `--batch` reads newline-delimited requests `{"command": "...", "params": {...}}`
//! from stdin and writes one result per line in input order. The environment
//! variable `RCGC_KIT_THREADS` caps the worker threads.

pub mod parse;
pub mod verify;

use std::io::{BufRead, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::geometry::{
    all_branches, euler_from_points, mat_vec, omega1_solution, partial_solutions,
    rotation_matrix_zxz,
};
use crate::halfint_algebra::{cgc, CNum, HalfInt};
use crate::integrals::{eta_sphere_integral, s_integral};
use crate::oracle::{
    cgc_exact, coulomb_oracle, reduced_element_oracle, s_integral_oracle, QuadratureSpec,
};
use crate::rcgc::{
    coulomb_2e_angular, coulomb_2e_angular_as_printed, rcgc1, rcgc2, reduced_matrix_element,
};
use crate::sphfun::{family_branch, sphfun_named, Family};
use crate::wigner::{c_harmonic_vector, wigner_d, wigner_d_hyp, EulerAngles};
use crate::SpherePoint;

use parse::{angle, halfint, integer, point, real, weights};
pub use parse::{CliError, Text};
use verify::{run_suite, Suite, SuiteOptions};

/// Output encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    /// One JSON object per result.
    #[default]
    Json,
    /// Whitespace-separated numbers.
    Plain,
}

/// Top-level arguments.
#[derive(Parser, Debug)]
#[command(
    name = "rcgc-kit",
    version,
    about = "Wigner D-functions on coordinate pairs, sphere integrals and rotated Clebsch-Gordan coefficients"
)]
pub struct Cli {
    /// Output encoding.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json, global = true)]
    pub output: OutputFormat,
    /// Read newline-delimited JSON requests from stdin.
    #[arg(long)]
    pub batch: bool,
    /// The evaluation to run.
    #[command(subcommand)]
    pub command: Option<Command>,
}

/// One evaluation request.
#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "params")]
pub enum Command {
    /// `D^k_{qq'}(Phi, Theta, Psi)`.
    #[serde(rename = "wigner-d")]
    #[command(name = "wigner-d")]
    WignerD(WignerDArgs),
    /// Euler-angle solutions for a coordinate pair.
    #[serde(rename = "euler")]
    Euler(EulerArgs),
    /// A named spherical-function family at a coordinate pair.
    #[serde(rename = "sphfun")]
    Sphfun(SphfunArgs),
    /// A Clebsch-Gordan coefficient.
    #[serde(rename = "cgc")]
    Cgc(CgcArgs),
    /// Rotated Clebsch-Gordan coefficient of the first type.
    #[serde(rename = "rcgc1")]
    #[command(name = "rcgc1")]
    Rcgc1(Rcgc1Args),
    /// Rotated Clebsch-Gordan coefficient of the second type.
    #[serde(rename = "rcgc2")]
    #[command(name = "rcgc2")]
    Rcgc2(Rcgc2Args),
    /// Closed-form sphere integral of the piecewise spherical function.
    #[serde(rename = "s-integral")]
    #[command(name = "s-integral")]
    SIntegral(SIntegralArgs),
    /// Reduced matrix element `[l||C^k||lbar]`.
    #[serde(rename = "redmat")]
    Redmat(RedmatArgs),
    /// Two-electron Coulomb angular matrix element.
    #[serde(rename = "coulomb2e")]
    #[command(name = "coulomb2e")]
    Coulomb2e(CoulombArgs),
    /// Run a named property suite.
    #[serde(rename = "verify")]
    Verify(VerifyArgs),
}

impl Command {
    /// Subcommand name.
    pub fn name(&self) -> &'static str {
        match self {
            Command::WignerD(_) => "wigner-d",
            Command::Euler(_) => "euler",
            Command::Sphfun(_) => "sphfun",
            Command::Cgc(_) => "cgc",
            Command::Rcgc1(_) => "rcgc1",
            Command::Rcgc2(_) => "rcgc2",
            Command::SIntegral(_) => "s-integral",
            Command::Redmat(_) => "redmat",
            Command::Coulomb2e(_) => "coulomb2e",
            Command::Verify(_) => "verify",
        }
    }

    fn inputs(&self) -> Value {
        let v = serde_json::to_value(self).unwrap_or(Value::Null);
        v.get("params").cloned().unwrap_or(Value::Null)
    }
}

/// Arguments of `wigner-d`.
#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct WignerDArgs {
    /// Rank, e.g. `5/2`.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Text,
    /// Row projection.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Text,
    /// Column projection.
    #[arg(long, allow_hyphen_values = true)]
    pub qp: Text,
    /// `Phi`, e.g. `3pi/2`.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Text,
    /// `Theta`.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Text,
    /// `Psi`.
    #[arg(long, allow_hyphen_values = true)]
    pub psi: Text,
    /// `sum` (default) or `hyp` for the single-2F1 form.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Text>,
    /// Also evaluate the other method and report the difference.
    #[arg(long)]
    #[serde(default)]
    pub oracle: bool,
}

/// Arguments of `euler`.
#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct EulerArgs {
    /// First point `theta,phi`.
    #[arg(long, allow_hyphen_values = true)]
    pub x1: Text,
    /// Second point `theta,phi`.
    #[arg(long, allow_hyphen_values = true)]
    pub x2: Text,
    /// List the branches whose domain condition fails too.
    #[arg(long)]
    #[serde(default)]
    pub all: bool,
    /// Also report the partial solutions obtained after a first rotation by this `Psi`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub psi: Option<Text>,
    /// Check `R(Omega) r1 = r2` for every listed solution.
    #[arg(long)]
    #[serde(default)]
    pub oracle: bool,
}

/// Arguments of `sphfun`.
#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SphfunArgs {
    /// `xi_p`, `xi_m`, `theta_p`, `theta_m`, `zeta_p`, `zeta_m` or `eta`.
    #[arg(long, default_value = "eta")]
    #[serde(default = "default_family")]
    pub family: Text,
    /// Rank.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Text,
    /// Row projection.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Text,
    /// Column projection.
    #[arg(long, allow_hyphen_values = true)]
    pub qp: Text,
    /// First point `theta,phi`.
    #[arg(long, allow_hyphen_values = true)]
    pub x1: Text,
    /// Second point `theta,phi`.
    #[arg(long, allow_hyphen_values = true)]
    pub x2: Text,
    /// Compare with `D` at the family's Euler angles.
    #[arg(long)]
    #[serde(default)]
    pub oracle: bool,
}

fn default_family() -> Text {
    Text("eta".into())
}

/// Arguments of `cgc`.
#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CgcArgs {
    /// `j1`.
    #[arg(long, allow_hyphen_values = true)]
    pub j1: Text,
    /// `m1`.
    #[arg(long, allow_hyphen_values = true)]
    pub m1: Text,
    /// `j2`.
    #[arg(long, allow_hyphen_values = true)]
    pub j2: Text,
    /// `m2`.
    #[arg(long, allow_hyphen_values = true)]
    pub m2: Text,
    /// `j`.
    #[arg(long, allow_hyphen_values = true)]
    pub j: Text,
    /// `m`.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Text,
    /// Compare with exact big-integer evaluation.
    #[arg(long)]
    #[serde(default)]
    pub oracle: bool,
}

/// Arguments of `rcgc1`.
#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Rcgc1Args {
    /// `l1`.
    #[arg(long, allow_hyphen_values = true)]
    pub l1: Text,
    /// `l2`.
    #[arg(long, allow_hyphen_values = true)]
    pub l2: Text,
    /// `l`.
    #[arg(long, allow_hyphen_values = true)]
    pub l: Text,
    /// `m1`.
    #[arg(long, allow_hyphen_values = true)]
    pub m1: Text,
    /// `m2`.
    #[arg(long, allow_hyphen_values = true)]
    pub m2: Text,
    /// `m`.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Text,
    /// First point `theta,phi`.
    #[arg(long, allow_hyphen_values = true)]
    pub x1: Text,
    /// Second point `theta,phi`.
    #[arg(long, allow_hyphen_values = true)]
    pub x2: Text,
    /// Compare with `D` at explicit Euler angles and exact coupling coefficients.
    #[arg(long)]
    #[serde(default)]
    pub oracle: bool,
}

/// Arguments of `rcgc2`.
#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Rcgc2Args {
    /// `l1`.
    #[arg(long, allow_hyphen_values = true)]
    pub l1: Text,
    /// `l2`.
    #[arg(long, allow_hyphen_values = true)]
    pub l2: Text,
    /// `l'`.
    #[arg(long, allow_hyphen_values = true)]
    pub lp: Text,
    /// `l`.
    #[arg(long, allow_hyphen_values = true)]
    pub l: Text,
    /// `m'`.
    #[arg(long, allow_hyphen_values = true)]
    pub mp: Text,
    /// `m`.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Text,
    /// First point `theta,phi`.
    #[arg(long, allow_hyphen_values = true)]
    pub x1: Text,
    /// Second point `theta,phi`.
    #[arg(long, allow_hyphen_values = true)]
    pub x2: Text,
    /// Compare with `D` at explicit Euler angles and exact coupling coefficients.
    #[arg(long)]
    #[serde(default)]
    pub oracle: bool,
}

/// Arguments of `s-integral`.
#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SIntegralArgs {
    /// Rank.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Text,
    /// Row projection.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Text,
    /// Column projection.
    #[arg(long, allow_hyphen_values = true)]
    pub qp: Text,
    /// Fixed point `theta,phi`.
    #[arg(long, allow_hyphen_values = true)]
    pub x1: Text,
    /// Integrate `eta` over the sphere instead (integer rank only).
    #[arg(long)]
    #[serde(default)]
    pub eta: bool,
    /// Compare with 2-D quadrature.
    #[arg(long)]
    #[serde(default)]
    pub oracle: bool,
}

/// Arguments of `redmat`.
#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RedmatArgs {
    /// Bra rank.
    #[arg(long, allow_hyphen_values = true)]
    pub l: Text,
    /// Operator rank of `C^k`.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Text,
    /// Ket rank.
    #[arg(long, allow_hyphen_values = true)]
    pub lbar: Text,
    /// Compare with Gaunt quadrature.
    #[arg(long)]
    #[serde(default)]
    pub oracle: bool,
}

/// Arguments of `coulomb2e`.
#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct CoulombArgs {
    /// Bra rank.
    #[arg(long, allow_hyphen_values = true)]
    pub l: Text,
    /// Bra projection.
    #[arg(long, allow_hyphen_values = true)]
    pub m: Text,
    /// Ket rank.
    #[arg(long, allow_hyphen_values = true)]
    pub lp: Text,
    /// Ket projection.
    #[arg(long, allow_hyphen_values = true)]
    pub mp: Text,
    /// Bra weights: `delta0` (default), `ones` or `2l+1` complex numbers.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Text>,
    /// Ket weights, same forms as `--g`.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gp: Option<Text>,
    /// `r<` (default 1).
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_less: Option<Text>,
    /// `r>` (default 1).
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_greater: Option<Text>,
    /// Highest multipole (default `l + l'`).
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_max: Option<Text>,
    /// Use the alternative literal contraction instead.
    #[arg(long)]
    #[serde(default)]
    pub as_printed: bool,
    /// Compare with 4-D quadrature.
    #[arg(long)]
    #[serde(default)]
    pub oracle: bool,
}

/// Arguments of `verify`.
#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct VerifyArgs {
    /// Suite name, e.g. `unitarity`, `geometry`, `s-integral`, `coulomb`.
    #[arg(long, allow_hyphen_values = true)]
    pub suite: Text,
    /// Random draws (suite default when absent).
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub draws: Option<Text>,
    /// Grid points per axis for grid suites.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<Text>,
    /// Random seed.
    #[arg(long, allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<Text>,
}

/// A complex number as `{re, im}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReIm {
    /// Real part.
    pub re: f64,
    /// Imaginary part.
    pub im: f64,
}

impl From<CNum> for ReIm {
    fn from(c: CNum) -> Self {
        ReIm { re: c.re, im: c.im }
    }
}

impl From<f64> for ReIm {
    fn from(x: f64) -> Self {
        ReIm { re: x, im: 0.0 }
    }
}

/// Reference value and its distance from the main result.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    /// The reference value.
    pub value: ReIm,
    /// `|value - reference|`.
    pub abs_err: f64,
}

impl OracleReport {
    fn new(value: CNum, reference: CNum) -> Self {
        OracleReport {
            value: reference.into(),
            abs_err: (value - reference).norm(),
        }
    }
}

/// The result object of one command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Response {
    /// Subcommand name.
    pub command: String,
    /// The arguments as given.
    pub inputs: Value,
    /// The main result.
    pub value: ReIm,
    /// Branch and winding details.
    #[serde(
        rename = "branch-info",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub branch_info: Option<Value>,
    /// Reference comparison.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    /// Full suite report of `verify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<verify::SuiteReport>,
}

impl Response {
    fn new(cmd: &Command, value: impl Into<ReIm>) -> Self {
        Response {
            command: cmd.name().to_string(),
            inputs: cmd.inputs(),
            value: value.into(),
            branch_info: None,
            oracle: None,
            report: None,
        }
    }

    fn with_oracle(
        mut self,
        on: bool,
        reference: impl FnOnce() -> crate::Result<CNum>,
    ) -> Result<Self, CliError> {
        if on {
            let v = CNum::new(self.value.re, self.value.im);
            self.oracle = Some(OracleReport::new(v, reference()?));
        }
        Ok(self)
    }

    /// Renders the response in the requested format (without a trailing newline).
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => {
                serde_json::to_string(self).unwrap_or_else(|e| format!("{{\"error\":\"{e}\"}}"))
            }
            OutputFormat::Plain => self.plain(),
        }
    }

    fn plain(&self) -> String {
        let mut lines = vec![format!("{} {}", self.value.re, self.value.im)];
        if let Some(o) = &self.oracle {
            lines.push(format!(
                "oracle {} {} abs_err {}",
                o.value.re, o.value.im, o.abs_err
            ));
        }
        if let Some(Value::Array(sols)) = self.branch_info.as_ref().and_then(|b| b.get("solutions"))
        {
            for s in sols {
                lines.push(format!(
                    "{} {} {} {}",
                    s["label"].as_str().unwrap_or("?"),
                    s["phi"],
                    s["theta"],
                    s["psi"]
                ));
            }
        }
        if let Some(r) = &self.report {
            for c in &r.checks {
                let verdict = match (c.informational, c.passed) {
                    (true, _) => "INFO",
                    (false, true) => "PASS",
                    (false, false) => "FAIL",
                };
                lines.push(format!(
                    "{verdict} {} {:e} {:e}",
                    c.name, c.max_error, c.tolerance
                ));
            }
        }
        lines.join("\n")
    }
}

/// Evaluates one command. The second element is the exit code (non-zero only for a failed suite).
pub fn execute(cmd: &Command) -> Result<(Response, i32), CliError> {
    let resp = match cmd {
        Command::WignerD(a) => {
            let (k, q, qp) = (
                halfint("k", &a.k)?,
                halfint("q", &a.q)?,
                halfint("qp", &a.qp)?,
            );
            let om = EulerAngles::new(
                angle("phi", &a.phi)?,
                angle("theta", &a.theta)?,
                angle("psi", &a.psi)?,
            );
            let hyp = match a.method.as_ref().map(|m| m.0.trim()) {
                None | Some("sum") => false,
                Some("hyp") => true,
                Some(other) => {
                    return Err(CliError::parse(format!(
                        "--method: expected sum or hyp, got {other:?}"
                    )))
                }
            };
            type DFn = fn(HalfInt, HalfInt, HalfInt, EulerAngles) -> crate::Result<CNum>;
            let (main, other): (DFn, DFn) = if hyp {
                (wigner_d_hyp, wigner_d)
            } else {
                (wigner_d, wigner_d_hyp)
            };
            Response::new(cmd, main(k, q, qp, om)?).with_oracle(a.oracle, || other(k, q, qp, om))?
        }
        Command::Euler(a) => euler(cmd, a)?,
        Command::Sphfun(a) => {
            let family: Family = a.family.0.parse().map_err(|_| {
                CliError::parse(format!("--family: unknown family {:?}", a.family.0))
            })?;
            let (k, q, qp) = (
                halfint("k", &a.k)?,
                halfint("q", &a.q)?,
                halfint("qp", &a.qp)?,
            );
            let (x1, x2) = (point("x1", &a.x1)?, point("x2", &a.x2)?);
            let branch = family_branch(family, x1, x2);
            let omega = branch.euler(x1, x2);
            let mut r = Response::new(cmd, sphfun_named(family, k, q, qp, x1, x2)?)
                .with_oracle(a.oracle, || wigner_d(k, q, qp, omega))?;
            r.branch_info = Some(json!({
                "family": family.resolve(x2).name(),
                "branch": branch,
                "euler": omega,
            }));
            r
        }
        Command::Cgc(a) => {
            let ix = [
                halfint("j1", &a.j1)?,
                halfint("m1", &a.m1)?,
                halfint("j2", &a.j2)?,
                halfint("m2", &a.m2)?,
                halfint("j", &a.j)?,
                halfint("m", &a.m)?,
            ];
            Response::new(cmd, cgc(ix[0], ix[1], ix[2], ix[3], ix[4], ix[5])?).with_oracle(
                a.oracle,
                || {
                    Ok(CNum::new(
                        cgc_exact(ix[0], ix[1], ix[2], ix[3], ix[4], ix[5]).to_f64(),
                        0.0,
                    ))
                },
            )?
        }
        Command::Rcgc1(a) => {
            let (l1, l2, l) = (
                halfint("l1", &a.l1)?,
                halfint("l2", &a.l2)?,
                halfint("l", &a.l)?,
            );
            let (m1, m2, m) = (
                halfint("m1", &a.m1)?,
                halfint("m2", &a.m2)?,
                halfint("m", &a.m)?,
            );
            let (x1, x2) = (point("x1", &a.x1)?, point("x2", &a.x2)?);
            Response::new(cmd, rcgc1(l1, l2, l, m1, m2, m, x1, x2)?)
                .with_oracle(a.oracle, || rcgc1_reference(l1, l2, l, m1, m2, m, x1, x2))?
        }
        Command::Rcgc2(a) => {
            let (l1, l2) = (halfint("l1", &a.l1)?, halfint("l2", &a.l2)?);
            let (lp, l) = (halfint("lp", &a.lp)?, halfint("l", &a.l)?);
            let (mp, m) = (halfint("mp", &a.mp)?, halfint("m", &a.m)?);
            let (x1, x2) = (point("x1", &a.x1)?, point("x2", &a.x2)?);
            Response::new(cmd, rcgc2(l1, l2, lp, l, mp, m, x1, x2)?).with_oracle(
                a.oracle,
                || {
                    let mut total = CNum::new(0.0, 0.0);
                    for m1 in l1.projections() {
                        let m2 = m - m1;
                        if m2.twice.abs() <= l2.twice {
                            let c = cgc_exact(l1, m1, l2, m2, l, m).to_f64();
                            if c != 0.0 {
                                total += rcgc1_reference(l1, l2, lp, m1, m2, mp, x1, x2)? * c;
                            }
                        }
                    }
                    Ok(total)
                },
            )?
        }
        Command::SIntegral(a) => {
            let (k, q, qp) = (
                halfint("k", &a.k)?,
                halfint("q", &a.q)?,
                halfint("qp", &a.qp)?,
            );
            let x1 = point("x1", &a.x1)?;
            let spec = verify::s_integral_quadrature();
            if a.eta {
                Response::new(cmd, eta_sphere_integral(k, q, qp, x1)?)
                    .with_oracle(a.oracle, || {
                        crate::oracle::eta_integral_oracle(k, q, qp, x1, &spec)
                    })?
            } else {
                Response::new(cmd, s_integral(k, q, qp, x1)?)
                    .with_oracle(a.oracle, || s_integral_oracle(k, q, qp, x1, &spec))?
            }
        }
        Command::Redmat(a) => {
            let (l, k, lb) = (
                halfint("l", &a.l)?,
                halfint("k", &a.k)?,
                halfint("lbar", &a.lbar)?,
            );
            let north = SpherePoint {
                theta: 0.0,
                phi: 0.0,
            };
            let t0 = c_harmonic_vector(k, north)?;
            Response::new(cmd, reduced_matrix_element(l, k, lb, &t0)?)
                .with_oracle(a.oracle, || {
                    reduced_element_oracle(l, k, lb, &QuadratureSpec::default())
                })?
        }
        Command::Coulomb2e(a) => coulomb(cmd, a)?,
        Command::Verify(a) => {
            let suite: Suite = a
                .suite
                .0
                .parse()
                .map_err(|e: crate::Error| CliError::parse(e.to_string()))?;
            let count = |key: &str, t: &Option<Text>| -> Result<Option<usize>, CliError> {
                t.as_ref()
                    .map(|t| {
                        t.0.trim()
                            .parse::<usize>()
                            .map_err(|_| CliError::parse(format!("--{key}: expected a count")))
                    })
                    .transpose()
            };
            let mut opts = SuiteOptions {
                draws: count("draws", &a.draws)?,
                grid: count("grid", &a.grid)?,
                ..SuiteOptions::default()
            };
            if let Some(s) = &a.seed {
                opts.seed =
                    s.0.trim()
                        .parse()
                        .map_err(|_| CliError::parse("--seed: expected an unsigned integer"))?;
            }
            let report = run_suite(suite, &opts);
            let code = if report.passed() { 0 } else { 3 };
            let mut r = Response::new(cmd, report.max_error());
            r.report = Some(report);
            return Ok((r, code));
        }
    };
    Ok((resp, 0))
}

#[allow(clippy::too_many_arguments)]
fn rcgc1_reference(
    l1: HalfInt,
    l2: HalfInt,
    l: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m: HalfInt,
    x1: SpherePoint,
    x2: SpherePoint,
) -> crate::Result<CNum> {
    let m2p = m - m1;
    if m2p.twice.abs() > l2.twice || m2.twice.abs() > l2.twice {
        return Ok(CNum::new(0.0, 0.0));
    }
    let omega = omega1_solution(x1, x2)?.omega;
    Ok(wigner_d(l2, m2, m2p, omega)? * cgc_exact(l1, m1, l2, m2p, l, m).to_f64())
}

fn euler(cmd: &Command, a: &EulerArgs) -> Result<Response, CliError> {
    let (x1, x2) = (point("x1", &a.x1)?, point("x2", &a.x2)?);
    let sols = if a.all {
        all_branches(x1, x2)?
    } else {
        euler_from_points(x1, x2)?
    };
    let (r1, r2) = (x1.unit_vector(), x2.unit_vector());
    let mut worst: f64 = 0.0;
    let list: Vec<Value> = sols
        .iter()
        .map(|s| {
            let v = mat_vec(&rotation_matrix_zxz(s.omega), r1);
            let residual = (0..3).map(|i| (v[i] - r2[i]).abs()).fold(0.0, f64::max);
            if s.applicable {
                worst = worst.max(residual);
            }
            json!({
                "label": format!("{:?}", s.branch.label),
                "applicable": s.applicable,
                "phi": s.omega.phi,
                "theta": s.omega.theta,
                "psi": s.omega.psi,
                "branch": s.branch,
                "residual": residual,
            })
        })
        .collect();
    let count = sols.iter().filter(|s| s.applicable).count() as f64;
    let mut info = json!({ "solutions": list });
    if let Some(psi) = &a.psi {
        let psi = angle("psi", psi)?;
        info["partial"] =
            serde_json::to_value(partial_solutions(x1, x2, psi)).unwrap_or(Value::Null);
    }
    let mut r = Response::new(cmd, count);
    r.branch_info = Some(info);
    if a.oracle {
        r.oracle = Some(OracleReport {
            value: ReIm::from(count),
            abs_err: worst,
        });
    }
    Ok(r)
}

fn coulomb(cmd: &Command, a: &CoulombArgs) -> Result<Response, CliError> {
    let (l, m, lp, mp) = (
        halfint("l", &a.l)?,
        halfint("m", &a.m)?,
        halfint("lp", &a.lp)?,
        halfint("mp", &a.mp)?,
    );
    let r_less = a
        .r_less
        .as_ref()
        .map(|t| real("r-less", t))
        .transpose()?
        .unwrap_or(1.0);
    let r_greater = a
        .r_greater
        .as_ref()
        .map(|t| real("r-greater", t))
        .transpose()?
        .unwrap_or(1.0);
    let delta = Text("delta0".into());
    let g = weights("g", l, a.g.as_ref().unwrap_or(&delta))?.with_radii(r_less, r_greater);
    let gp = weights("gp", lp, a.gp.as_ref().unwrap_or(&delta))?.with_radii(r_less, r_greater);
    let k_max = match &a.k_max {
        Some(t) => integer("k-max", t)?,
        None => ((l + lp).twice / 2).max(0),
    };
    let value = if a.as_printed {
        coulomb_2e_angular_as_printed(l, m, lp, mp, &g, &gp, k_max)?
    } else {
        coulomb_2e_angular(l, m, lp, mp, &g, &gp, k_max)?
    };
    let mut r = Response::new(cmd, value).with_oracle(a.oracle, || {
        coulomb_oracle(
            l,
            m,
            lp,
            mp,
            &g,
            &gp,
            k_max.max(0) as u32,
            &verify::coulomb_quadrature(),
        )
    })?;
    r.branch_info = Some(json!({ "k_max": k_max, "as_printed": a.as_printed }));
    Ok(r)
}

/// Applies `RCGC_KIT_THREADS` to the global worker pool.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("RCGC_KIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::parse(format!(
            "RCGC_KIT_THREADS: expected a positive integer, got {raw:?}"
        ))
    })?;
    // A pool that was already built keeps its size.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

/// Parses one batch line `{"command": .., "params": {..}}`.
pub fn parse_request(line: &str) -> Result<Command, CliError> {
    let v: Value =
        serde_json::from_str(line).map_err(|e| CliError::parse(format!("invalid JSON: {e}")))?;
    let Value::Object(obj) = v else {
        return Err(CliError::parse("a request must be a JSON object"));
    };
    if let Some(key) = obj
        .keys()
        .find(|k| !matches!(k.as_str(), "command" | "params"))
    {
        return Err(CliError::parse(format!("unknown request key {key:?}")));
    }
    let request = json!({
        "command": obj.get("command").cloned().unwrap_or(Value::Null),
        "params": obj.get("params").cloned().unwrap_or_else(|| json!({})),
    });
    serde_json::from_value(request).map_err(|e| CliError::parse(format!("invalid request: {e}")))
}

fn error_line(command: Option<&str>, e: &CliError) -> String {
    json!({ "command": command, "error": { "code": e.code, "message": e.message } }).to_string()
}

/// Runs one batch line; returns the output line and its exit code.
pub fn run_line(line: &str, format: OutputFormat) -> (String, i32) {
    match parse_request(line) {
        Err(e) => (error_line(None, &e), e.code),
        Ok(cmd) => match execute(&cmd) {
            Ok((r, code)) => (r.render(format), code),
            Err(e) => (error_line(Some(cmd.name()), &e), e.code),
        },
    }
}

/// Runs batch mode over `input`, writing one line per non-blank request. Returns the largest exit code.
pub fn run_batch(input: impl BufRead, mut out: impl Write, format: OutputFormat) -> i32 {
    let lines: Vec<String> = match input.lines().collect() {
        Ok(l) => l,
        Err(e) => {
            eprintln!("rcgc-kit: cannot read stdin: {e}");
            return 1;
        }
    };
    let results: Vec<(String, i32)> = lines
        .par_iter()
        .filter(|l| !l.trim().is_empty())
        .map(|l| run_line(l, format))
        .collect();
    let mut code = 0;
    for (text, c) in results {
        if c != 0 {
            eprintln!("rcgc-kit: request failed with exit code {c}");
        }
        code = code.max(c);
        if writeln!(out, "{text}").is_err() {
            return 1;
        }
    }
    code
}

/// Entry point of the binary. Returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("rcgc-kit: {e}");
        return e.code;
    }
    if cli.batch && cli.command.is_some() {
        eprintln!("rcgc-kit: --batch reads requests from stdin and takes no subcommand");
        return 1;
    }
    if cli.batch {
        let stdin = std::io::stdin();
        return run_batch(stdin.lock(), std::io::stdout().lock(), cli.output);
    }
    let Some(cmd) = cli.command else {
        eprintln!("rcgc-kit: a subcommand or --batch is required (see --help)");
        return 1;
    };
    match execute(&cmd) {
        Ok((r, code)) => {
            println!("{}", r.render(cli.output));
            if code != 0 {
                let failed = r
                    .report
                    .as_ref()
                    .map(|rep| rep.failures().join(", "))
                    .unwrap_or_default();
                eprintln!("rcgc-kit: suite failed: {failed}");
            }
            code
        }
        Err(e) => {
            eprintln!("rcgc-kit: {e}");
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn batch_excludes_subcommands() {
        assert_eq!(
            main_with_args(["rcgc-kit", "--batch", "verify", "--suite", "cgc"]),
            1
        );
    }

    #[test]
    fn negative_values_and_global_output() {
        let cli = Cli::try_parse_from([
            "rcgc-kit",
            "--output",
            "plain",
            "coulomb2e",
            "--l",
            "1",
            "--m",
            "-1",
            "--lp",
            "1",
            "--mp",
            "-1",
            "--k-max",
            "-1",
        ])
        .unwrap();
        assert_eq!(cli.output, OutputFormat::Plain);
        assert_eq!(execute(&cli.command.unwrap()).unwrap_err().code, 2);
    }

    #[test]
    fn request_round_trip() {
        let line = r#"{"command":"wigner-d","params":{"k":"5/2","q":"-1/2","qp":"3/2","phi":"3pi/2","theta":"pi/6","psi":"5pi/4"}}"#;
        let cmd = parse_request(line).unwrap();
        let (r, code) = execute(&cmd).unwrap();
        assert_eq!(code, 0);
        let again =
            parse_request(&json!({"command": r.command, "params": r.inputs}).to_string()).unwrap();
        let (r2, _) = execute(&again).unwrap();
        assert_eq!(r.value.re.to_bits(), r2.value.re.to_bits());
        assert_eq!(r.value.im.to_bits(), r2.value.im.to_bits());
    }

    #[test]
    fn unknown_keys_are_parse_errors() {
        let e = parse_request(r#"{"command":"cgc","params":{"j1":1,"bogus":2}}"#).unwrap_err();
        assert_eq!(e.code, 1);
        let e = parse_request(r#"{"command":"cgc","extra":1}"#).unwrap_err();
        assert_eq!(e.code, 1);
    }

    #[test]
    fn numbers_are_accepted_as_params() {
        let cmd = parse_request(
            r#"{"command":"s-integral","params":{"k":0,"q":0,"qp":0,"x1":"1.0,2.0"}}"#,
        )
        .unwrap();
        let (r, _) = execute(&cmd).unwrap();
        assert!((r.value.re - 4.0 * std::f64::consts::PI).abs() < 1e-12);
    }
}
