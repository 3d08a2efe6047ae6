//! Hyper-hemisphere geometry and surface quadrature.
//!
//! The domain is `{ |x| < R, x_1 > 0, ..., x_n > 0 }`. Its boundary
//! splits into the spherical cap `S` and the `n` flat faces
//! `S_k = { x_k = 0 }`. Both pieces are meshed with tensor-product
//! Gauss–Legendre rules in a generalized spherical chart; positivity
//! constraints become exact angular sub-boxes, so no node clipping is
//! ever needed.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::kernel::{EllipticParams, Point};
use crate::math::Real;
use crate::{Error, Result};

/// The hyper-hemisphere `{ |x| < R, x_1,…,x_n > 0 }`.
#[derive(Debug, Clone)]
pub struct HalfBallDomain {
    pub ep: EllipticParams,
    pub radius: f64,
}

impl HalfBallDomain {
    pub fn new(ep: EllipticParams, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Domain(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { ep, radius })
    }
}

/// One quadrature node of a boundary piece.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceNode {
    pub point: Point,
    /// Surface measure × quadrature weight (no singular factors).
    pub weight: f64,
    /// Outward unit normal of the domain at the node.
    pub normal: Point,
}

/// Nodes and weights of the `level`-point Gauss–Legendre rule on
/// `[-1, 1]`, by Newton iteration on the Legendre polynomial.
pub fn gauss_legendre(level: usize) -> (Vec<f64>, Vec<f64>) {
    let n = level;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Chebyshev-based initial guess for the i-th positive root.
        let mut x = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and P_n' by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
fn gauss_on(a: f64, b: f64, level: usize) -> (Vec<f64>, Vec<f64>) {
    let (t, w) = gauss_legendre(level);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    (
        t.iter().map(|v| mid + half * v).collect(),
        w.iter().map(|v| half * v).collect(),
    )
}

/// Quadrature on the unit sphere `S^{d-1} ⊂ R^d` restricted to the
/// sub-manifold with the first `constrained` coordinates positive.
///
/// Uses the generalized spherical chart
/// `y_1 = cos φ_1, y_2 = sin φ_1 cos φ_2, …, y_d = sin φ_1 … sin φ_{d−1}`
/// with surface measure `Π_j sin^{d−1−j} φ_j dφ`. The positivity of
/// `y_j` for `j ≤ d−2` is exactly `φ_j < π/2`; the last two coordinates
/// restrict the final angle's box.
fn unit_sphere_chart(d: usize, constrained: usize, level: usize) -> Vec<(Vec<f64>, f64)> {
    debug_assert!(constrained <= d);
    if d == 1 {
        // S^0 = {+1, -1} with counting measure.
        let mut pts = vec![(vec![1.0], 1.0)];
        if constrained == 0 {
            pts.push((vec![-1.0], 1.0));
        }
        return pts;
    }
    // Angle boxes.
    let mut boxes: Vec<(f64, f64)> = Vec::with_capacity(d - 1);
    for j in 1..=d - 2 {
        let hi = if j <= constrained {
            core::f64::consts::FRAC_PI_2
        } else {
            core::f64::consts::PI
        };
        boxes.push((0.0, hi));
    }
    // Last angle φ_{d−1}: y_{d−1} = … cos φ, y_d = … sin φ.
    let last = if constrained >= d {
        (0.0, core::f64::consts::FRAC_PI_2)
    } else if constrained == d - 1 {
        (-core::f64::consts::FRAC_PI_2, core::f64::consts::FRAC_PI_2)
    } else {
        (0.0, 2.0 * core::f64::consts::PI)
    };
    boxes.push(last);

    let rules: Vec<(Vec<f64>, Vec<f64>)> = boxes
        .iter()
        .map(|&(a, b)| gauss_on(a, b, level))
        .collect();

    let mut out = Vec::new();
    let mut idx = vec![0usize; d - 1];
    loop {
        let mut y = vec![0.0; d];
        let mut sin_prod = 1.0;
        let mut w = 1.0;
        for j in 0..d - 1 {
            let phi = rules[j].0[idx[j]];
            w *= rules[j].1[idx[j]];
            // Metric factor sin^{d−1−(j+1)} φ_{j+1}.
            let pw = (d - 2 - j) as i32;
            if pw > 0 {
                w *= phi.sin().powf(pw as f64);
            }
            y[j] = sin_prod * phi.cos();
            sin_prod *= phi.sin();
        }
        y[d - 1] = sin_prod;
        out.push((y, w));
        // Odometer.
        let mut j = 0;
        loop {
            idx[j] += 1;
            if idx[j] < level {
                break;
            }
            idx[j] = 0;
            j += 1;
            if j == d - 1 {
                return out;
            }
        }
    }
}

/// Gauss–Legendre nodes on the spherical cap
/// `{ |x| = R, x_1,…,x_n > 0 }`, with outward normals `x/R`.
///
/// Node count grows as `level^{m−1}`.
pub fn sphere_nodes(dom: &HalfBallDomain, level: usize) -> Result<Vec<SurfaceNode>> {
    if level < 1 {
        return Err(Error::Domain("level must be >= 1".into()));
    }
    let m = dom.ep.m;
    let r = dom.radius;
    let scale = r.powf((m - 1) as f64);
    Ok(unit_sphere_chart(m, dom.ep.n, level)
        .into_iter()
        .map(|(y, w)| SurfaceNode {
            point: y.iter().map(|v| r * v).collect(),
            weight: scale * w,
            normal: y,
        })
        .collect())
}

/// Gauss–Legendre nodes on the flat face
/// `S_k = { x_k = 0, |x| < R, x_i > 0 for i ≤ n, i ≠ k }`
/// (one-based `k`), with normal `−e_k` and `x_k = 0` exactly.
///
/// Weights carry only the Euclidean surface measure; the singular
/// weight `Π_{i≠k} x_i^{2α_i}` is applied by the solver.
pub fn face_nodes(dom: &HalfBallDomain, k: usize, level: usize) -> Result<Vec<SurfaceNode>> {
    let m = dom.ep.m;
    let n = dom.ep.n;
    if k < 1 || k > n {
        return Err(Error::Domain(format!("face index k = {k} out of 1..={n}")));
    }
    if level < 1 {
        return Err(Error::Domain("level must be >= 1".into()));
    }
    let k0 = k - 1;
    let d = m - 1;
    // Axis order inside the face chart: constrained singular axes
    // first, then the unconstrained ones, skipping axis k.
    let mut axes: Vec<usize> = (0..m).filter(|&i| i != k0 && i < n).collect();
    axes.extend((0..m).filter(|&i| i != k0 && i >= n));
    let (rho, w_rho) = gauss_on(0.0, dom.radius, level);
    let chart = unit_sphere_chart(d, n - 1, level);
    let mut normal = vec![0.0; m];
    normal[k0] = -1.0;
    let mut out = Vec::with_capacity(rho.len() * chart.len());
    for (i, &rr) in rho.iter().enumerate() {
        let radial_w = w_rho[i] * rr.powf((d - 1) as f64);
        for (y, wy) in &chart {
            let mut point = vec![0.0; m];
            for (j, &axis) in axes.iter().enumerate() {
                point[axis] = rr * y[j];
            }
            out.push(SurfaceNode {
                point,
                weight: radial_w * wy,
                normal: normal.clone(),
            });
        }
    }
    Ok(out)
}

/// True iff `x` lies strictly inside the half-ball (boundary excluded).
pub fn contains(dom: &HalfBallDomain, x: &[f64]) -> bool {
    if x.len() != dom.ep.m {
        return false;
    }
    let norm_sq: f64 = x.iter().map(|v| v * v).sum();
    if norm_sq >= dom.radius * dom.radius {
        return false;
    }
    x.iter().take(dom.ep.n).all(|&v| v > 0.0)
}
