//! Independent verification tools: finite-difference residuals of the
//! singular elliptic operator, a direct finite-difference Dirichlet
//! solver for `m ∈ {2, 3}`, and a deliberately naive Lauricella series
//! reference.
//!
//! Nothing here shares series machinery with [`crate::hyperfun`]; these
//! are the oracles the fast paths are judged against.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::domain::HalfBallDomain;
use crate::hyperfun::LauricellaParams;
use crate::kernel::EllipticParams;
use crate::math::Real;
use crate::solver::BoundaryData;
use crate::{Error, Result};

/// Central-difference approximation of the singular elliptic operator
/// `Σ_i u_{x_i x_i} + Σ_{k≤n} (2α_k/x_k) u_{x_k}` applied to a field.
///
/// `O(h²)` accurate for `C⁴` fields; requires `x_k > h` on the singular
/// axes so that no sample touches a singular plane.
pub fn pde_residual<F>(u: F, ep: &EllipticParams, x: &[f64], h: f64) -> Result<f64>
where
    F: Fn(&[f64]) -> f64,
{
    if x.len() != ep.m {
        return Err(Error::Domain(format!(
            "point has dimension {}, expected {}",
            x.len(),
            ep.m
        )));
    }
    if !(h > 0.0) {
        return Err(Error::Domain(format!("step must be positive, got {h}")));
    }
    for k in 0..ep.n {
        if x[k] <= h {
            return Err(Error::Domain(format!(
                "need x_k > h on singular axes, got x_{} = {} with h = {h}",
                k + 1,
                x[k]
            )));
        }
    }
    let u0 = u(x);
    let mut res = 0.0;
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    for i in 0..ep.m {
        xp[i] = x[i] + h;
        xm[i] = x[i] - h;
        let (up, um) = (u(&xp), u(&xm));
        res += (up - 2.0 * u0 + um) / (h * h);
        if i < ep.n {
            res += 2.0 * ep.alpha[i] / x[i] * (up - um) / (2.0 * h);
        }
        xp[i] = x[i];
        xm[i] = x[i];
    }
    Ok(res)
}

/// A solved Cartesian grid over the half-ball.
///
/// Every lattice node in the bounding box carries a value: interior
/// nodes hold the relaxation solution, face nodes hold `τ_k`, and nodes
/// on or beyond the sphere hold `φ` at the radial projection, so
/// multilinear interpolation works throughout the closed domain.
pub struct FdGrid {
    pub h: f64,
    /// Lattice index of the first node per axis (`0` on singular axes).
    pub mins: Vec<i64>,
    /// Node count per axis.
    pub dims: Vec<usize>,
    /// Row-major values over the full box.
    pub values: Vec<f64>,
    /// Relaxation sweeps used.
    pub iterations: usize,
}

impl FdGrid {
    fn flat(&self, idx: &[i64]) -> usize {
        let mut f = 0usize;
        for (d, &i) in idx.iter().enumerate() {
            f = f * self.dims[d] + (i - self.mins[d]) as usize;
        }
        f
    }

    /// Multilinear interpolation at an arbitrary point of the closure.
    pub fn value_at(&self, x: &[f64]) -> Result<f64> {
        let m = self.dims.len();
        if x.len() != m {
            return Err(Error::Domain(format!(
                "point has dimension {}, expected {m}",
                x.len()
            )));
        }
        let mut base = vec![0i64; m];
        let mut frac = vec![0.0; m];
        for d in 0..m {
            let t = x[d] / self.h;
            let mut b = t.floor() as i64;
            // Clamp to the last cell so boundary points interpolate.
            let hi = self.mins[d] + self.dims[d] as i64 - 2;
            if b < self.mins[d] || b > hi {
                if b == hi + 1 && (t - b as f64).abs() < 1e-9 {
                    b = hi;
                } else if b == self.mins[d] - 1 && (t - (b + 1) as f64).abs() < 1e-9 {
                    b = self.mins[d];
                } else if b < self.mins[d] || b > hi + 1 {
                    return Err(Error::Domain(format!("point {x:?} outside the grid box")));
                } else {
                    b = b.min(hi).max(self.mins[d]);
                }
            }
            base[d] = b;
            frac[d] = t - b as f64;
        }
        let mut acc = 0.0;
        for corner in 0..(1usize << m) {
            let mut idx = base.clone();
            let mut w = 1.0;
            for d in 0..m {
                if corner & (1 << d) != 0 {
                    idx[d] += 1;
                    w *= frac[d];
                } else {
                    w *= 1.0 - frac[d];
                }
            }
            acc += w * self.values[self.flat(&idx)];
        }
        Ok(acc)
    }
}

/// One stencil source: another unknown or a known boundary value.
enum Arm {
    Var(usize),
    Known(f64),
}

struct Row {
    diag: f64,
    entries: Vec<(usize, f64)>,
    rhs: f64,
}

impl Row {
    fn push(&mut self, arm: &Arm, coef: f64) {
        match arm {
            Arm::Var(j) => self.entries.push((*j, coef)),
            Arm::Known(v) => self.rhs -= coef * v,
        }
    }
}

/// Direct finite-difference solution of the Dirichlet problem on a
/// uniform Cartesian lattice of spacing `h`, for `m ∈ {2, 3}`.
///
/// Interior stencils: standard 5/7-point second differences on the
/// regular axes, with Shortley–Weller shortened arms where an arm
/// crosses the sphere. On the singular axes the second derivative and
/// the transport term `(2α_k/x_k) u_{x_k}` are discretized together in
/// the conservative form `x^{−2α}(x^{2α}u')'` with exact two-point flux
/// coefficients, which never samples the `x_k = 0` plane and stays
/// second-order accurate despite the `x_k^{1−2α_k}` solution component.
/// The system is relaxed by SOR with a fixed sweep ordering until the
/// scaled residual drops below `1e−10`.
pub fn fd_solve(dom: &HalfBallDomain, data: &BoundaryData, h: f64) -> Result<FdGrid> {
    let ep = &dom.ep;
    let m = ep.m;
    let n = ep.n;
    let r = dom.radius;
    if m != 2 && m != 3 {
        return Err(Error::Domain(format!("fd_solve supports m in {{2,3}}, got {m}")));
    }
    if data.tau.len() != n {
        return Err(Error::Domain(format!(
            "expected {n} face functions, got {}",
            data.tau.len()
        )));
    }
    let nodes_per_axis = (r / h).floor() as i64;
    if nodes_per_axis < 20 {
        return Err(Error::Domain(format!(
            "spacing h = {h} gives only {nodes_per_axis} nodes per axis; need >= 20"
        )));
    }
    let top = nodes_per_axis;
    let mut mins = vec![0i64; m];
    let mut dims = vec![0usize; m];
    for d in 0..m {
        mins[d] = if d < n { 0 } else { -top };
        dims[d] = (top - mins[d] + 1) as usize;
    }
    let total: usize = dims.iter().product();

    let coords = |idx: &[i64]| -> Vec<f64> { idx.iter().map(|&i| i as f64 * h).collect() };
    let flat = |idx: &[i64]| -> usize {
        let mut f = 0usize;
        for d in 0..m {
            f = f * dims[d] + (idx[d] - mins[d]) as usize;
        }
        f
    };

    // Classify and preset boundary values.
    const INTERIOR: u8 = 0;
    const FACE: u8 = 1;
    const SPHERE: u8 = 2;
    let mut kind = vec![SPHERE; total];
    let mut values = vec![0.0; total];
    let mut unknown_of = vec![usize::MAX; total];
    let mut unknown_idx: Vec<Vec<i64>> = Vec::new();
    let r2 = r * r;

    let mut idx = mins.clone();
    loop {
        let f = flat(&idx);
        let x = coords(&idx);
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        let on_face = (0..n).find(|&k| idx[k] == 0);
        if norm2 >= r2 * (1.0 - 1e-14) {
            // On or beyond the sphere: hold φ at the radial projection.
            kind[f] = SPHERE;
            let scale = if norm2 > 0.0 { r / norm2.sqrt() } else { 1.0 };
            let proj: Vec<f64> = x.iter().map(|v| v * scale).collect();
            values[f] = (data.phi)(&proj);
        } else if let Some(k) = on_face {
            kind[f] = FACE;
            values[f] = (data.tau[k])(&x);
        } else {
            kind[f] = INTERIOR;
            unknown_of[f] = unknown_idx.len();
            unknown_idx.push(idx.clone());
        }
        // Odometer.
        let mut d = m;
        loop {
            if d == 0 {
                break;
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] <= top {
                break;
            }
            idx[d] = mins[d];
            if d == 0 {
                idx = mins.clone();
            }
        }
        if idx == mins {
            break;
        }
    }

    // Assemble one row per unknown.
    let arm_of = |nb: &[i64]| -> Arm {
        let f = flat(nb);
        if kind[f] == INTERIOR {
            Arm::Var(unknown_of[f])
        } else {
            Arm::Known(values[f])
        }
    };
    let mut rows: Vec<Row> = Vec::with_capacity(unknown_idx.len());
    for idx in &unknown_idx {
        let x = coords(idx);
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        let mut row = Row {
            diag: 0.0,
            entries: Vec::with_capacity(2 * m + 1),
            rhs: 0.0,
        };
        for d in 0..m {
            let rest = norm2 - x[d] * x[d];
            let cross = (r2 - rest).sqrt(); // sphere crossing coordinate
            // Right and left arms with Shortley–Weller shortening.
            let arm_dir = |s: f64| -> (f64, Arm) {
                let mut nb = idx.clone();
                nb[d] += s as i64;
                let nb_coord = x[d] + s * h;
                let inside_box = nb[d] >= mins[d] && nb[d] <= top;
                let crosses = nb_coord * nb_coord + rest >= r2 * (1.0 - 1e-14);
                if inside_box && !crosses {
                    (1.0, arm_of(&nb))
                } else {
                    // Shortened arm to the sphere crossing.
                    let target = s * cross;
                    let theta = ((target - x[d]) / (s * h)).max(1e-6).min(1.0);
                    let mut bp = x.clone();
                    bp[d] = target;
                    (theta, Arm::Known((data.phi)(&bp)))
                }
            };
            let (tl, left) = arm_dir(-1.0);
            let (tr, right) = arm_dir(1.0);
            if d < n {
                // Singular axis: conservative exact-flux form of
                // u'' + (2α/x)u' = x^{−2α}(x^{2α}u')'. The arm
                // coefficients a_± = (1−2α)/(x_r^{1−2α} − x_l^{1−2α})
                // are the exact two-point flux factors of the 1-D
                // operator, so the scheme is exact on both local
                // homogeneous solutions 1 and x^{1−2α}; this keeps
                // second-order global accuracy despite the x^{1−2α}
                // solution component near the face.
                let beta = 1.0 - 2.0 * ep.alpha[d];
                let xl = x[d] - tl * h;
                let xr = x[d] + tr * h;
                let a_minus = beta / (x[d].powf(beta) - xl.powf(beta));
                let a_plus = beta / (xr.powf(beta) - x[d].powf(beta));
                let cell = x[d].powf(2.0 * ep.alpha[d]) * 0.5 * (xr - xl);
                row.push(&left, a_minus / cell);
                row.push(&right, a_plus / cell);
                row.diag += -(a_minus + a_plus) / cell;
            } else {
                // Regular axis: unequal-arm second difference.
                let h2 = h * h;
                row.push(&left, 2.0 / (tl * (tl + tr) * h2));
                row.push(&right, 2.0 / (tr * (tl + tr) * h2));
                row.diag += -2.0 / (tl * tr * h2);
            }
        }
        rows.push(row);
    }

    // SOR with fixed sweep ordering.
    let mut u = vec![0.0; rows.len()];
    let omega = 2.0 / (1.0 + (core::f64::consts::PI * h / (2.0 * r)).sin());
    let scale = values
        .iter()
        .fold(1.0f64, |acc, v| acc.max(v.abs()));
    let tol = 1e-10 * scale;
    let max_sweeps = 200_000usize;
    let mut sweeps = 0;
    loop {
        sweeps += 1;
        for (i, row) in rows.iter().enumerate() {
            let mut s = row.rhs;
            for &(j, c) in &row.entries {
                s -= c * u[j];
            }
            let gs = s / row.diag;
            u[i] += omega * (gs - u[i]);
        }
        // Scaled residual in the max norm.
        let mut res = 0.0f64;
        for (i, row) in rows.iter().enumerate() {
            let mut s = row.diag * u[i] - row.rhs;
            for &(j, c) in &row.entries {
                s += c * u[j];
            }
            res = res.max(s.abs() * h * h); // diag ~ 1/h², rescale
        }
        if res < tol {
            break;
        }
        if sweeps >= max_sweeps {
            return Err(Error::Convergence(format!(
                "SOR residual {res:.3e} after {sweeps} sweeps (tol {tol:.3e})"
            )));
        }
    }
    for (i, idx) in unknown_idx.iter().enumerate() {
        values[flat(idx)] = u[i];
    }
    Ok(FdGrid {
        h,
        mins,
        dims,
        values,
        iterations: sweeps,
    })
}

/// Brute-force Lauricella `F_A` reference: exhaustive summation of all
/// multi-indices with total degree ≤ `degree_cap`, each term computed
/// from scratch by direct products — no recurrences, no caches, no
/// shared state with the production engines.
pub fn series_reference_fa(p: &LauricellaParams, z: &[f64], degree_cap: usize) -> Result<f64> {
    let n = p.b.len();
    if z.len() != n {
        return Err(Error::Domain(format!(
            "expected {n} arguments, got {}",
            z.len()
        )));
    }
    let abs_sum: f64 = z.iter().map(|v| v.abs()).sum();
    if abs_sum >= 1.0 {
        return Err(Error::Domain(format!(
            "series reference requires Σ|z_k| < 1, got {abs_sum}"
        )));
    }
    let mut total = 0.0;
    let mut mi = vec![0usize; n];
    loop {
        let degree: usize = mi.iter().sum();
        if degree <= degree_cap {
            // Axis factors (b_k)_{m_k}/(c_k)_{m_k} · z_k^{m_k}/m_k!.
            let mut term = 1.0;
            for k in 0..n {
                for i in 0..mi[k] {
                    term *= (p.b[k] + i as f64) * z[k] / ((p.c[k] + i as f64) * (i as f64 + 1.0));
                }
            }
            // Leading Pochhammer (a)_{|m|}.
            for j in 0..degree {
                term *= p.a + j as f64;
            }
            total += term;
        }
        // Odometer bounded by the total-degree cap.
        let mut k = 0;
        loop {
            mi[k] += 1;
            if mi.iter().sum::<usize>() <= degree_cap {
                break;
            }
            mi[k] = 0;
            k += 1;
            if k == n {
                return Ok(total);
            }
        }
    }
}
