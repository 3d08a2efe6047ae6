//! Mode runners: each consumes a validated config and produces a
//! deterministic text artifact (CSV table or flat report).

use hypergreen::domain::HalfBallDomain;
use hypergreen::hyperfun::{gauss_2f1, lauricella_fa_decomposed, GaussParams, LauricellaParams};
use hypergreen::kernel::{
    boundary_kernel, fundamental_solution, green, green_normal_derivative,
};
use hypergreen::solver::{solve_at, DirichletProblem};

use crate::boundary;
use crate::config::RunConfig;

/// Failure classes mapped to process exit codes: parse/validation
/// problems exit 2, numeric failures exit 1.
#[derive(Debug)]
pub enum RunError {
    Parse(String),
    Numeric(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Parse(_) => 2,
            RunError::Numeric(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            RunError::Parse(m) => m,
            RunError::Numeric(m) => m,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Report,
}

/// 17-significant-digit float serialization used by every artifact.
pub fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

fn fmt_vec(v: &[f64]) -> String {
    v.iter().map(|&x| fmt_f(x)).collect::<Vec<_>>().join(";")
}

/// One output table: a header and rows of equal arity.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn render(&self, format: OutputFormat) -> String {
        let mut out = String::new();
        match format {
            OutputFormat::Csv => {
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
            }
            OutputFormat::Report => {
                for (i, row) in self.rows.iter().enumerate() {
                    out.push_str(&format!("row {i}\n"));
                    for (c, v) in self.columns.iter().zip(row) {
                        out.push_str(&format!("  {c} = {v}\n"));
                    }
                }
            }
        }
        out
    }
}

/// `eval-fa`: one row per requested (params, z) evaluation.
pub fn run_eval_fa(cfg: &RunConfig, rel_tol: Option<f64>) -> Result<Table, RunError> {
    if cfg.eval_fa.is_empty() {
        return Err(RunError::Parse("eval-fa mode needs at least one [[eval_fa]] item".into()));
    }
    let ctl = cfg.series_control(rel_tol)?;
    let mut rows = Vec::new();
    for item in &cfg.eval_fa {
        let value = if item.b.len() == 1 {
            gauss_2f1(
                &GaussParams {
                    a: item.a,
                    b: item.b[0],
                    c: item.c[0],
                    x: item.z[0],
                },
                &ctl,
            )
        } else {
            let p = LauricellaParams::new(item.a, item.b.clone(), item.c.clone())
                .map_err(|e| RunError::Parse(format!("eval_fa params: {e}")))?;
            lauricella_fa_decomposed(&p, &item.z, &ctl)
        }
        .map_err(|e| {
            RunError::Numeric(format!(
                "eval-fa a={} b={:?} c={:?} z={:?}: {e}",
                item.a, item.b, item.c, item.z
            ))
        })?;
        if !value.converged {
            return Err(RunError::Numeric(format!(
                "eval-fa a={} b={:?} c={:?} z={:?}: series did not reach rel_tol = {} \
                 within the term budget (error estimate {:.3e})",
                item.a, item.b, item.c, item.z, ctl.rel_tol, value.abs_error_estimate
            )));
        }
        rows.push(vec![
            fmt_f(item.a),
            fmt_vec(&item.b),
            fmt_vec(&item.c),
            fmt_vec(&item.z),
            fmt_f(ctl.rel_tol),
            fmt_f(value.value),
            fmt_f(value.abs_error_estimate),
            value.terms_used.to_string(),
            value.converged.to_string(),
        ]);
    }
    Ok(Table {
        columns: vec![
            "a",
            "b",
            "c",
            "z",
            "rel_tol",
            "value",
            "abs_error_estimate",
            "terms_used",
            "converged",
        ],
        rows,
    })
}

/// `eval-q`: fundamental solution / Green's function / boundary-kernel
/// values per configured (x, ξ) pair.
pub fn run_eval_q(cfg: &RunConfig, rel_tol: Option<f64>) -> Result<Table, RunError> {
    if cfg.eval_q.is_empty() {
        return Err(RunError::Parse("eval-q mode needs at least one [[eval_q]] item".into()));
    }
    let ep = cfg.elliptic_params()?;
    let radius = cfg.radius()?;
    let ctl = cfg.series_control(rel_tol)?;
    let mut rows = Vec::new();
    for item in &cfg.eval_q {
        let value = match item.kind.as_str() {
            "q" => fundamental_solution(&ep, &item.x, &item.xi, &ctl),
            "green" => green(&ep, &item.x, &item.xi, radius, &ctl),
            "dgdn" => green_normal_derivative(&ep, &item.x, &item.xi, radius, &ctl),
            "gk" => {
                let k = item
                    .k
                    .ok_or_else(|| RunError::Parse("eval_q kind `gk` needs `k`".into()))?;
                boundary_kernel(&ep, k, &item.x, &item.xi, radius, &ctl)
            }
            other => {
                return Err(RunError::Parse(format!(
                    "unknown eval_q kind `{other}` (expected q, green, dgdn, gk)"
                )))
            }
        }
        .map_err(|e| {
            RunError::Numeric(format!(
                "eval-q kind={} x={:?} xi={:?}: {e}",
                item.kind, item.x, item.xi
            ))
        })?;
        rows.push(vec![
            item.kind.clone(),
            item.k.map(|k| k.to_string()).unwrap_or_default(),
            fmt_vec(&item.x),
            fmt_vec(&item.xi),
            fmt_f(radius),
            fmt_f(ctl.rel_tol),
            fmt_f(value),
        ]);
    }
    Ok(Table {
        columns: vec!["kind", "k", "x", "xi", "radius", "rel_tol", "value"],
        rows,
    })
}

/// `solve`: evaluates the Dirichlet solution at each probe.
pub fn run_solve(
    cfg: &RunConfig,
    level_override: Option<usize>,
    rel_tol: Option<f64>,
) -> Result<Table, RunError> {
    let ep = cfg.elliptic_params()?;
    let radius = cfg.radius()?;
    let ctl = cfg.series_control(rel_tol)?;
    let bcfg = cfg
        .boundary
        .as_ref()
        .ok_or_else(|| RunError::Parse("solve mode needs a [boundary] section".into()))?;
    let scfg = cfg
        .solve
        .as_ref()
        .ok_or_else(|| RunError::Parse("solve mode needs a [solve] section".into()))?;
    let level = level_override.unwrap_or(scfg.level);
    let f = boundary::global_fn(bcfg, &ep, radius, &ctl)?;
    let data = boundary::boundary_data(f, ep.n);
    let dom = HalfBallDomain::new(ep.clone(), radius)
        .map_err(|e| RunError::Parse(format!("[domain]: {e}")))?;
    let problem = DirichletProblem::new(dom, data, level, ctl.clone())
        .map_err(|e| RunError::Parse(format!("solve setup: {e}")))?;
    let mut rows = Vec::new();
    for probe in &scfg.probes {
        let u = solve_at(&problem, probe)
            .map_err(|e| RunError::Numeric(format!("solve at probe {probe:?}: {e}")))?;
        rows.push(vec![
            ep.m.to_string(),
            ep.n.to_string(),
            fmt_vec(&ep.alpha),
            fmt_f(radius),
            level.to_string(),
            fmt_f(ctl.rel_tol),
            fmt_vec(probe),
            fmt_f(u),
        ]);
    }
    Ok(Table {
        columns: vec!["m", "n", "alpha", "radius", "level", "rel_tol", "probe", "u"],
        rows,
    })
}
