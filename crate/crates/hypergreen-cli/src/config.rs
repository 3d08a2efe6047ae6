//! Run configuration: a single TOML file describing the problem
//! parameters, the work items per mode, and the output shape. Unknown
//! keys are rejected so that typos fail loudly before any computation.

use serde::Deserialize;

use hypergreen::hyperfun::SeriesControl;
use hypergreen::kernel::EllipticParams;

use crate::runner::RunError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub params: Option<ParamsConfig>,
    pub domain: Option<DomainConfig>,
    pub series: Option<SeriesConfig>,
    pub boundary: Option<BoundaryConfig>,
    pub solve: Option<SolveConfig>,
    #[serde(default)]
    pub eval_fa: Vec<EvalFaItem>,
    #[serde(default)]
    pub eval_q: Vec<EvalQItem>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub m: usize,
    pub n: usize,
    pub alpha: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub radius: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    pub rel_tol: Option<f64>,
    pub max_terms_per_axis: Option<usize>,
    pub max_total_terms: Option<usize>,
}

/// Built-in boundary-data families.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryConfig {
    /// One of `constant`, `polynomial`, `exterior-pole`.
    pub family: String,
    /// `constant`: the value on every boundary piece.
    pub value: Option<f64>,
    /// `polynomial`: terms over the non-singular coordinates.
    pub terms: Option<Vec<PolyTerm>>,
    /// `exterior-pole`: pole location of the manufactured solution
    /// `q_n(·; pole)`; must lie outside the closed half-ball with all
    /// singular coordinates positive.
    pub pole: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTerm {
    pub coeff: f64,
    /// Exponents over the `m − n` non-singular coordinates, in order.
    pub powers: Vec<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub level: usize,
    pub probes: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalFaItem {
    pub a: f64,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub z: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalQItem {
    /// One of `q` (fundamental solution), `green`, `dgdn` (normal
    /// derivative of the Green's function on the sphere), `gk`
    /// (boundary kernel; requires `k`).
    pub kind: String,
    pub x: Vec<f64>,
    pub xi: Vec<f64>,
    pub k: Option<usize>,
}

impl RunConfig {
    pub fn load(path: &str) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| RunError::Parse(format!("cannot read config {path}: {e}")))?;
        toml::from_str(&text).map_err(|e| RunError::Parse(format!("config {path}: {e}")))
    }

    pub fn elliptic_params(&self) -> Result<EllipticParams, RunError> {
        let p = self
            .params
            .as_ref()
            .ok_or_else(|| RunError::Parse("missing [params] section".into()))?;
        EllipticParams::new(p.m, p.n, p.alpha.clone())
            .map_err(|e| RunError::Parse(format!("[params]: {e}")))
    }

    pub fn radius(&self) -> Result<f64, RunError> {
        let d = self
            .domain
            .as_ref()
            .ok_or_else(|| RunError::Parse("missing [domain] section".into()))?;
        if !(d.radius > 0.0 && d.radius.is_finite()) {
            return Err(RunError::Parse(format!(
                "[domain]: radius must be positive, got {}",
                d.radius
            )));
        }
        Ok(d.radius)
    }

    /// Series control from the config with optional CLI override.
    pub fn series_control(&self, rel_tol_override: Option<f64>) -> Result<SeriesControl, RunError> {
        let mut ctl = SeriesControl::default();
        if let Some(s) = &self.series {
            if let Some(v) = s.rel_tol {
                ctl.rel_tol = v;
            }
            if let Some(v) = s.max_terms_per_axis {
                ctl.max_terms_per_axis = v;
            }
            if let Some(v) = s.max_total_terms {
                ctl.max_total_terms = v;
            }
        }
        if let Some(v) = rel_tol_override {
            ctl.rel_tol = v;
        }
        ctl.validate()
            .map_err(|e| RunError::Parse(format!("[series]: {e}")))?;
        Ok(ctl)
    }
}
