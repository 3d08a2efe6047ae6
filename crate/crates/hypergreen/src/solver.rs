//! Boundary-quadrature evaluation of the explicit Dirichlet solution
//!
//! ```text
//!   u(ξ) = Σ_k ∫_{S_k} x̃_k^{(2α)} G_k* τ_k dS_k
//!          − ∫_S x^{(2α)} (∂G/∂n) φ dS,
//! ```
//!
//! where `x̃_k^{(2α)} = Π_{i≤n, i≠k} x_i^{2α_i}` on the face `S_k` and
//! `x^{(2α)} = Π_{k≤n} x_k^{2α_k}` on the spherical cap, with the
//! outward normal on `S`.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;

use crate::domain::{contains, face_nodes, sphere_nodes, HalfBallDomain};
use crate::hyperfun::SeriesControl;
use crate::kernel::{boundary_kernel, green_normal_derivative, Point};
use crate::math::Real;
use crate::{Error, Result};

/// A scalar boundary-data function, callable on boundary points.
pub type BoundaryFn = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Dirichlet data: one function per flat face plus one on the cap.
pub struct BoundaryData {
    /// `τ_k` on the faces `S_k`, `k = 1..n` (index `k−1`).
    pub tau: Vec<BoundaryFn>,
    /// `φ` on the spherical cap `S`.
    pub phi: BoundaryFn,
}

impl BoundaryData {
    pub fn new(tau: Vec<BoundaryFn>, phi: BoundaryFn) -> Self {
        Self { tau, phi }
    }

    /// The same constant on every boundary piece.
    pub fn constant(n: usize, value: f64) -> Self {
        let mut tau: Vec<BoundaryFn> = Vec::with_capacity(n);
        for _ in 0..n {
            tau.push(Box::new(move |_: &[f64]| value));
        }
        Self {
            tau,
            phi: Box::new(move |_: &[f64]| value),
        }
    }

    /// Restriction of one global function to every boundary piece.
    pub fn from_global<F>(n: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + Clone + 'static,
    {
        let mut tau: Vec<BoundaryFn> = Vec::with_capacity(n);
        for _ in 0..n {
            let g = f.clone();
            tau.push(Box::new(move |x: &[f64]| g(x)));
        }
        Self {
            tau,
            phi: Box::new(move |x: &[f64]| f(x)),
        }
    }
}

/// A fully specified Dirichlet problem with its discretization knobs.
///
/// Sensible `level` defaults are 16 for `m = 2` and 12 for `m = 3`.
pub struct DirichletProblem {
    pub dom: HalfBallDomain,
    pub data: BoundaryData,
    pub level: usize,
    pub ctl: SeriesControl,
}

impl DirichletProblem {
    pub fn new(dom: HalfBallDomain, data: BoundaryData, level: usize, ctl: SeriesControl) -> Result<Self> {
        if data.tau.len() != dom.ep.n {
            return Err(Error::Domain(format!(
                "expected {} face functions, got {}",
                dom.ep.n,
                data.tau.len()
            )));
        }
        if level < 1 {
            return Err(Error::Domain("level must be >= 1".into()));
        }
        ctl.validate()?;
        Ok(Self { dom, data, level, ctl })
    }
}

/// Maximum boundary-data mismatches found by [`check_matching`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingReport {
    /// `max |τ_i − τ_j|` over sampled corner points (all singular
    /// coordinates zero). Zero when `n = 1`.
    pub corner_max: f64,
    /// `max_k max |τ_k − φ|` over sampled rim points of the curves
    /// `χ_k = { x_k = 0, |x| = R }`.
    pub rim_max: f64,
}

/// Rejects probes closer to a boundary piece than twice the local node
/// spacing: the kernels blow up at the boundary, so accuracy there is
/// not covered by the quadrature contract.
fn check_clearance(dom: &HalfBallDomain, level: usize, xi: &[f64]) -> Result<()> {
    if !contains(dom, xi) {
        return Err(Error::Domain(format!("probe {xi:?} is outside the domain")));
    }
    let r = dom.radius;
    // Cap: angular spacing ≈ πR/level.
    let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    let sphere_clear = 2.0 * core::f64::consts::PI * r / level as f64;
    if r - norm < sphere_clear {
        return Err(Error::Domain(format!(
            "probe {xi:?} too close to the sphere (clearance {} < {sphere_clear})",
            r - norm
        )));
    }
    // Faces: radial spacing ≈ 2R/level.
    let face_clear = 4.0 * r / level as f64;
    for k in 0..dom.ep.n {
        if xi[k] < face_clear {
            return Err(Error::Domain(format!(
                "probe {xi:?} too close to face S_{} (clearance {} < {face_clear})",
                k + 1,
                xi[k]
            )));
        }
    }
    Ok(())
}

/// Evaluates the Dirichlet solution at one interior probe `ξ`.
///
/// Node loops accumulate in fixed node order for bit-reproducibility.
pub fn solve_at(p: &DirichletProblem, xi: &[f64]) -> Result<f64> {
    check_clearance(&p.dom, p.level, xi)?;
    let ep = &p.dom.ep;
    let r = p.dom.radius;
    let mut u = 0.0;
    // Face integrals, with the singular weight applied at evaluation
    // time so one node set serves every α.
    for k in 1..=ep.n {
        let nodes = face_nodes(&p.dom, k, p.level)?;
        let tau = &p.data.tau[k - 1];
        let mut acc = 0.0;
        for node in &nodes {
            let mut weight = node.weight;
            for i in 0..ep.n {
                if i == k - 1 {
                    continue;
                }
                weight *= node.point[i].powf(2.0 * ep.alpha[i]);
            }
            let kernel =
                boundary_kernel(ep, k, &node.point, xi, r, &p.ctl).map_err(|e| {
                    Error::Convergence(format!("face {k} node {:?}: {e}", node.point))
                })?;
            acc += weight * kernel * tau(&node.point);
        }
        u += acc;
    }
    // Cap integral (outward normal; the reflected part makes the
    // combination the interior representation, hence the minus sign).
    let nodes = sphere_nodes(&p.dom, p.level)?;
    let mut acc = 0.0;
    for node in &nodes {
        let mut weight = node.weight;
        for k in 0..ep.n {
            weight *= node.point[k].powf(2.0 * ep.alpha[k]);
        }
        let dn = green_normal_derivative(ep, &node.point, xi, r, &p.ctl)
            .map_err(|e| Error::Convergence(format!("cap node {:?}: {e}", node.point)))?;
        acc += weight * dn * (p.data.phi)(&node.point);
    }
    Ok(u - acc)
}

/// Element-wise [`solve_at`] over a probe list.
pub fn solve_grid(p: &DirichletProblem, probes: &[Point]) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(probes.len());
    for (i, xi) in probes.iter().enumerate() {
        out.push(solve_at(p, xi).map_err(|e| Error::Domain(format!("probe {i}: {e}")))?);
    }
    Ok(out)
}

/// Splitmix64 stream mapped to uniform `f64` in `[0, 1)`; deterministic
/// sampling backend for [`check_matching`].
struct Sampler(u64);

impl Sampler {
    fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Samples the continuity ("matching") conditions of the boundary data:
/// face functions must agree pairwise on the common corner set
/// `{ x_1 = … = x_n = 0 }`, and each `τ_k` must agree with `φ` on the
/// rim `χ_k = { x_k = 0, |x| = R }`.
pub fn check_matching(p: &DirichletProblem, samples: usize) -> Result<MatchingReport> {
    if samples < 1 {
        return Err(Error::Domain("samples must be >= 1".into()));
    }
    let ep = &p.dom.ep;
    let r = p.dom.radius;
    let mut rng = Sampler(0x5eed_1234_abcd_ef01);
    let mut corner_max = 0.0f64;
    for _ in 0..samples {
        // Corner point: singular coordinates zero, the rest uniform in
        // the ball of radius R.
        let mut x = alloc::vec![0.0; ep.m];
        loop {
            let mut s = 0.0;
            for item in x.iter_mut().skip(ep.n) {
                let v = (2.0 * rng.next_f64() - 1.0) * r;
                *item = v;
                s += v * v;
            }
            if s < r * r {
                break;
            }
        }
        for i in 0..ep.n {
            for j in i + 1..ep.n {
                let d = ((p.data.tau[i])(&x) - (p.data.tau[j])(&x)).abs();
                corner_max = corner_max.max(d);
            }
        }
    }
    let mut rim_max = 0.0f64;
    for k in 0..ep.n {
        for _ in 0..samples {
            // Rim point: x_k = 0, the remaining coordinates on the
            // sphere of radius R with the other singular ones positive.
            let mut x = alloc::vec![0.0; ep.m];
            let mut s = 0.0;
            for i in 0..ep.m {
                if i == k {
                    continue;
                }
                let mut v = rng.next_f64();
                if i >= ep.n {
                    v = 2.0 * v - 1.0;
                }
                x[i] = v;
                s += v * v;
            }
            if s == 0.0 {
                continue;
            }
            let scale = r / s.sqrt();
            for item in x.iter_mut() {
                *item *= scale;
            }
            let d = ((p.data.tau[k])(&x) - (p.data.phi)(&x)).abs();
            rim_max = rim_max.max(d);
        }
    }
    Ok(MatchingReport { corner_max, rim_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::EllipticParams;
    use alloc::vec;

    fn problem_21(level: usize) -> DirichletProblem {
        let ep = EllipticParams::new(2, 1, vec![0.25]).unwrap();
        let dom = HalfBallDomain::new(ep, 1.0).unwrap();
        DirichletProblem::new(dom, BoundaryData::constant(1, 1.0), level, SeriesControl::default())
            .unwrap()
    }

    #[test]
    fn constant_data_reproduced() {
        let p = problem_21(16);
        for xi in [vec![0.3, 0.1], vec![0.4, -0.2], vec![0.5, 0.0]] {
            let u = solve_at(&p, &xi).unwrap();
            assert!((u - 1.0).abs() < 1e-3, "u({xi:?}) = {u}");
        }
    }

    #[test]
    fn clearance_enforced() {
        let p = problem_21(16);
        assert!(solve_at(&p, &[0.1, 0.0]).is_err()); // face too close
        assert!(solve_at(&p, &[0.8, 0.0]).is_err()); // sphere too close
        assert!(solve_at(&p, &[-0.3, 0.0]).is_err()); // outside
    }

    #[test]
    fn linearity_in_data() {
        let ep = EllipticParams::new(2, 1, vec![0.25]).unwrap();
        let make = |a: f64, b: f64| {
            let dom = HalfBallDomain::new(ep.clone(), 1.0).unwrap();
            let data = BoundaryData::new(
                vec![Box::new(move |x: &[f64]| a + b * x[1])],
                Box::new(move |x: &[f64]| a + b * x[1]),
            );
            DirichletProblem::new(dom, data, 12, SeriesControl::default()).unwrap()
        };
        let xi = [0.4, 0.1];
        let u1 = solve_at(&make(1.0, 0.0), &xi).unwrap();
        let u2 = solve_at(&make(0.0, 1.0), &xi).unwrap();
        let u = solve_at(&make(2.0, -3.0), &xi).unwrap();
        assert!((u - (2.0 * u1 - 3.0 * u2)).abs() < 1e-12 * u.abs().max(1.0));
    }

    #[test]
    fn grid_matches_pointwise() {
        let p = problem_21(16);
        let probes = vec![vec![0.3, 0.1], vec![0.45, -0.15]];
        let grid = solve_grid(&p, &probes).unwrap();
        assert_eq!(grid.len(), 2);
        for (g, probe) in grid.iter().zip(&probes) {
            assert_eq!(*g, solve_at(&p, probe).unwrap());
        }
        assert!(solve_grid(&p, &[]).unwrap().is_empty());
    }

    #[test]
    fn matching_report() {
        // Constant data: everything matches.
        let p = problem_21(8);
        let rep = check_matching(&p, 20).unwrap();
        assert_eq!(rep.corner_max, 0.0);
        assert_eq!(rep.rim_max, 0.0);
        // Constructed rim violation τ₁ = 1, φ = 2.
        let ep = EllipticParams::new(2, 1, vec![0.25]).unwrap();
        let dom = HalfBallDomain::new(ep, 1.0).unwrap();
        let data = BoundaryData::new(
            vec![Box::new(|_: &[f64]| 1.0)],
            Box::new(|_: &[f64]| 2.0),
        );
        let p = DirichletProblem::new(dom, data, 8, SeriesControl::default()).unwrap();
        let rep = check_matching(&p, 10).unwrap();
        assert!((rep.rim_max - 1.0).abs() < 1e-15);
        // Global restriction: mismatches vanish.
        let ep = EllipticParams::new(3, 2, vec![0.25, 0.3]).unwrap();
        let dom = HalfBallDomain::new(ep, 1.0).unwrap();
        let data = BoundaryData::from_global(2, |x: &[f64]| x[2] * x[2] + 0.5 * x[0] - x[1]);
        let p = DirichletProblem::new(dom, data, 8, SeriesControl::default()).unwrap();
        let rep = check_matching(&p, 25).unwrap();
        assert!(rep.corner_max <= 1e-12 && rep.rim_max <= 1e-12);
    }
}
