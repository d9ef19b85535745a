//! File formats shared by the CLI and the Python bindings.
//!
//! An instance is one JSON document: `n`, `x_domain` (`D` rows, `e`),
//! `scenarios` as objects `{id, A, b, c}`, optional `rhs_only`, optional
//! `norm` (`kind`, `generators`). Hyperplane scenario lists live in their own
//! document type under a top-level `"type": "hyperplane"` discriminator.
//! Standard JSON only: NaN/Infinity tokens fail the parse, and every number
//! is re-checked for finiteness after parsing. Front CSVs print floats with
//! 12 significant digits so identical inputs give bit-identical files.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BlockNorm, Polyhedron, Radius, RecoverableSolution, Scenario, UncertainProblem};
use crate::pareto::ParetoPoint;
use crate::portfolio::PortfolioFrontEntry;
use crate::scalarization::HyperplaneScenario;

/// The on-disk instance document. The optional `norm` lets a file pin the
/// distance it is meant to be solved under; commands still accept `--norm`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub x_domain: Polyhedron,
    pub scenarios: Vec<Scenario>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub rhs_only: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norm: Option<BlockNorm>,
}

impl InstanceFile {
    pub fn from_problem(problem: &UncertainProblem, norm: Option<BlockNorm>) -> Self {
        InstanceFile {
            n: problem.n,
            x_domain: problem.x_domain.clone(),
            scenarios: problem.scenarios.clone(),
            rhs_only: problem.rhs_only,
            norm,
        }
    }

    pub fn into_problem(self) -> (UncertainProblem, Option<BlockNorm>) {
        let InstanceFile { n, x_domain, scenarios, rhs_only, norm } = self;
        let mut problem = UncertainProblem::new(n, scenarios, x_domain);
        problem.rhs_only = rhs_only;
        (problem, norm)
    }
}

/// A hyperplane/halfspace scenario list, discriminated so the two document
/// kinds cannot be confused.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperplaneFile {
    #[serde(rename = "type")]
    pub doc_type: String,
    pub scenarios: Vec<HyperplaneScenario>,
}

/// Solution output of the solve subcommands; `radius` is a number or the
/// string "infinity".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub x: Vec<f64>,
    pub radius: Radius,
    pub worst_objective: f64,
    pub recoveries: Vec<Vec<f64>>,
}

impl From<&RecoverableSolution> for SolutionFile {
    fn from(sol: &RecoverableSolution) -> Self {
        SolutionFile {
            x: sol.x.clone(),
            radius: sol.radius,
            worst_objective: sol.worst_objective,
            recoveries: sol.recoveries.clone(),
        }
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let file: InstanceFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("instance: {e}")))?;
    for (i, row) in file.x_domain.d_matrix.iter().enumerate() {
        ensure_finite(&format!("x_domain.D[{i}]"), row)?;
    }
    ensure_finite("x_domain.e", &file.x_domain.e_vector)?;
    for sc in &file.scenarios {
        for (i, row) in sc.a_matrix.iter().enumerate() {
            ensure_finite(&format!("scenario {:?} A[{i}]", sc.id), row)?;
        }
        ensure_finite(&format!("scenario {:?} b", sc.id), &sc.rhs)?;
        ensure_finite(&format!("scenario {:?} c", sc.id), &sc.cost)?;
    }
    if let Some(norm) = &file.norm {
        for (i, g) in norm.generators().iter().enumerate() {
            ensure_finite(&format!("norm.generators[{i}]"), g)?;
        }
    }
    Ok(file)
}

pub fn parse_hyperplanes(text: &str) -> Result<Vec<HyperplaneScenario>> {
    let file: HyperplaneFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("hyperplane file: {e}")))?;
    if file.doc_type != "hyperplane" {
        return Err(Error::Parse(format!(
            "expected document type \"hyperplane\", got {:?}",
            file.doc_type
        )));
    }
    for (i, sc) in file.scenarios.iter().enumerate() {
        ensure_finite(&format!("scenarios[{i}].a"), &sc.a)?;
        ensure_finite(&format!("scenarios[{i}].b"), &[sc.b])?;
    }
    Ok(file.scenarios)
}

pub fn read_instance(path: &Path) -> Result<InstanceFile> {
    parse_instance(&read_text(path)?)
}

pub fn read_hyperplanes(path: &Path) -> Result<Vec<HyperplaneScenario>> {
    parse_hyperplanes(&read_text(path)?)
}

pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| Error::Parse(format!("serialize: {e}")))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = to_json_string(value)?;
    fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn ensure_finite(label: &str, values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteData(label.to_string()))
    }
}

/// `v` with 12 significant digits in plain decimal; the fixed width makes
/// CSV output reproducible bit for bit.
pub fn fmt_sig12(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".to_string()
        } else if v > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        };
    }
    let exponent = v.abs().log10().floor() as i32;
    let decimals = (11 - exponent).max(0) as usize;
    format!("{v:.decimals$}")
}

/// CSV for a sweep front: header `bound,objective,radius`.
pub fn front_csv(points: &[ParetoPoint]) -> String {
    let mut out = String::from("bound,objective,radius\n");
    for p in points {
        out.push_str(&fmt_sig12(p.bound));
        out.push(',');
        out.push_str(&fmt_sig12(p.objective_value));
        out.push(',');
        out.push_str(&fmt_sig12(p.radius));
        out.push('\n');
    }
    out
}

/// CSV for the portfolio benchmark: adds the solver diagnostics columns,
/// header `bound,objective,radius,iterations,method`.
pub fn portfolio_csv(entries: &[PortfolioFrontEntry]) -> String {
    let mut out = String::from("bound,objective,radius,iterations,method\n");
    for e in entries {
        out.push_str(&fmt_sig12(e.point.bound));
        out.push(',');
        out.push_str(&fmt_sig12(e.point.objective_value));
        out.push(',');
        out.push_str(&fmt_sig12(e.point.radius));
        out.push(',');
        out.push_str(&e.iterations.to_string());
        out.push(',');
        out.push_str(&e.method.to_string());
        out.push('\n');
    }
    out
}
