//! Built-in boundary-data families: enough to express every
//! verification scenario without a plugin mechanism.

use std::sync::Arc;

use hypergreen::hyperfun::SeriesControl;
use hypergreen::kernel::{fundamental_solution, EllipticParams};
use hypergreen::solver::BoundaryData;

use crate::config::BoundaryConfig;
use crate::runner::RunError;

/// A boundary function applicable on any boundary piece; clonable so
/// one definition serves all faces and the cap.
pub type GlobalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Builds the global data function of a family.
pub fn global_fn(
    cfg: &BoundaryConfig,
    ep: &EllipticParams,
    radius: f64,
    ctl: &SeriesControl,
) -> Result<GlobalFn, RunError> {
    match cfg.family.as_str() {
        "constant" => {
            let v = cfg
                .value
                .ok_or_else(|| RunError::Parse("constant family needs `value`".into()))?;
            Ok(Arc::new(move |_: &[f64]| v))
        }
        "polynomial" => {
            let terms = cfg
                .terms
                .clone()
                .ok_or_else(|| RunError::Parse("polynomial family needs `terms`".into()))?;
            let free = ep.m - ep.n;
            for t in &terms {
                if t.powers.len() != free {
                    return Err(RunError::Parse(format!(
                        "polynomial term has {} exponents, expected {} (one per non-singular coordinate)",
                        t.powers.len(),
                        free
                    )));
                }
            }
            let n = ep.n;
            Ok(Arc::new(move |x: &[f64]| {
                terms
                    .iter()
                    .map(|t| {
                        t.coeff
                            * t.powers
                                .iter()
                                .enumerate()
                                .map(|(j, &p)| x[n + j].powi(p as i32))
                                .product::<f64>()
                    })
                    .sum()
            }))
        }
        "exterior-pole" => {
            let pole = cfg
                .pole
                .clone()
                .ok_or_else(|| RunError::Parse("exterior-pole family needs `pole`".into()))?;
            if pole.len() != ep.m {
                return Err(RunError::Parse(format!(
                    "pole has dimension {}, expected {}",
                    pole.len(),
                    ep.m
                )));
            }
            let norm: f64 = pole.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm <= radius {
                return Err(RunError::Parse(format!(
                    "exterior pole must satisfy |pole| > R, got |pole| = {norm}, R = {radius}"
                )));
            }
            if pole.iter().take(ep.n).any(|&v| v <= 0.0) {
                return Err(RunError::Parse(
                    "exterior pole needs positive singular coordinates".into(),
                ));
            }
            let ep = ep.clone();
            let ctl = ctl.clone();
            Ok(Arc::new(move |x: &[f64]| {
                fundamental_solution(&ep, x, &pole, &ctl).expect("exterior pole is regular inside")
            }))
        }
        other => Err(RunError::Parse(format!(
            "unknown boundary family `{other}` (expected constant, polynomial, exterior-pole)"
        ))),
    }
}

/// Wraps a global function as per-piece boundary data.
pub fn boundary_data(f: GlobalFn, n: usize) -> BoundaryData {
    let mut tau: Vec<hypergreen::solver::BoundaryFn> = Vec::with_capacity(n);
    for _ in 0..n {
        let g = f.clone();
        tau.push(Box::new(move |x: &[f64]| g(x)));
    }
    let g = f.clone();
    BoundaryData::new(tau, Box::new(move |x: &[f64]| g(x)))
}
