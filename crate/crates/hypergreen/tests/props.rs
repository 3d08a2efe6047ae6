//! Property-based invariants of the core engines.

use proptest::prelude::*;

use hypergreen::domain::{gauss_legendre, sphere_nodes, HalfBallDomain};
use hypergreen::hyperfun::{
    gauss_2f1, index_maps, lauricella_fa_decomposed, lauricella_fa_direct, log_gamma, pochhammer,
    surface_constant, GaussParams, IndexAssignment, LauricellaParams, SeriesControl,
};
use hypergreen::kernel::{fundamental_solution, green, EllipticParams};

fn ctl() -> SeriesControl {
    SeriesControl::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// ln Γ(x+1) = ln Γ(x) + ln x.
    #[test]
    fn log_gamma_recurrence(x in 0.1f64..20.0) {
        let lhs = log_gamma(x + 1.0).unwrap();
        let rhs = log_gamma(x).unwrap() + x.ln();
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (1.0 + lhs.abs()));
    }

    /// (a)_{p+q} = (a)_p (a+p)_q.
    #[test]
    fn pochhammer_addition(a in 0.05f64..5.0, p in 0usize..20, q in 0usize..20) {
        let lhs = pochhammer(a, p + q);
        let rhs = pochhammer(a, p) * pochhammer(a + p as f64, q);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
    }

    /// Σ_k M(k,n) is even for every index table.
    #[test]
    fn index_map_parity(n in 2usize..6, seed in any::<u64>()) {
        let slots = IndexAssignment::slot_count(n);
        let mut state = seed;
        let mut values = Vec::with_capacity(slots);
        for _ in 0..slots {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            values.push(state >> 60); // entries 0..=15
        }
        let asg = IndexAssignment::new(n, values).unwrap();
        let m_sum: u64 = (1..=n).map(|k| index_maps(&asg, k, n).unwrap().0).sum();
        prop_assert_eq!(m_sum % 2, 0);
    }

    /// F(a,b;c;x) is symmetric in a and b even though the negative-x
    /// path transforms asymmetrically.
    #[test]
    fn gauss_parameter_symmetry(
        a in 0.1f64..1.5,
        b in 0.1f64..1.5,
        cs in 0.3f64..2.0,
        x in -8.0f64..0.9,
    ) {
        let c = a.max(b) + cs;
        let f1 = gauss_2f1(&GaussParams { a, b, c, x }, &ctl()).unwrap().value;
        let f2 = gauss_2f1(&GaussParams { a: b, b: a, c, x }, &ctl()).unwrap().value;
        prop_assert!((f1 - f2).abs() <= 1e-8 * f1.abs().max(1e-30));
    }

    /// Table decomposition agrees with direct rectangular summation
    /// inside the joint convergence region.
    #[test]
    fn decomposition_matches_direct(
        a in 0.3f64..2.0,
        b1 in 0.2f64..1.0,
        b2 in 0.2f64..1.0,
        t1 in -0.25f64..0.25,
        t2 in -0.25f64..0.25,
    ) {
        let p = LauricellaParams::new(a, vec![b1, b2], vec![b1 + 0.6, b2 + 0.7]).unwrap();
        let z = [t1, t2];
        let d = lauricella_fa_decomposed(&p, &z, &ctl()).unwrap().value;
        let r = lauricella_fa_direct(&p, &z, &ctl()).unwrap().value;
        prop_assert!((d - r).abs() <= 1e-8 * d.abs().max(1e-30));
    }

    /// Symmetry of the fundamental solution in its two arguments.
    #[test]
    fn fundamental_solution_symmetry(
        x1 in 0.05f64..0.6, x2 in -0.6f64..0.6,
        y1 in 0.05f64..0.6, y2 in -0.6f64..0.6,
    ) {
        let ep = EllipticParams::new(2, 1, vec![0.25]).unwrap();
        let x = [x1, x2];
        let xi = [y1, y2];
        prop_assume!((x1 - y1).abs() + (x2 - y2).abs() > 1e-3);
        let a = fundamental_solution(&ep, &x, &xi, &ctl()).unwrap();
        let b = fundamental_solution(&ep, &xi, &x, &ctl()).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a.abs().max(1e-30));
    }

    /// Joint homogeneity: q(λx; λξ) = λ^(2−m−2Σα) q(x; ξ).
    #[test]
    fn fundamental_solution_homogeneity(
        x1 in 0.1f64..0.5, x2 in 0.1f64..0.5, x3 in -0.5f64..0.0,
        y1 in 0.1f64..0.5, y2 in 0.1f64..0.5, dy in 0.35f64..0.6,
        lambda in 0.5f64..2.0,
    ) {
        let alpha = [0.25, 1.0 / 3.0];
        let ep = EllipticParams::new(3, 2, alpha.to_vec()).unwrap();
        // Keep the pair separated so the series arguments σ_k stay in
        // the band the default per-axis budget resolves.
        let x = [x1, x2, x3];
        let xi = [y1, y2, x3 + dy];
        let xs: Vec<f64> = x.iter().map(|v| v * lambda).collect();
        let xis: Vec<f64> = xi.iter().map(|v| v * lambda).collect();
        let q = fundamental_solution(&ep, &x, &xi, &ctl()).unwrap();
        let qs = fundamental_solution(&ep, &xs, &xis, &ctl()).unwrap();
        let degree = 2.0 - 3.0 - 2.0 * (alpha[0] + alpha[1]);
        prop_assert!((qs - lambda.powf(degree) * q).abs() <= 1e-9 * q.abs());
    }

    /// Green's function vanishes on the spherical cap.
    #[test]
    fn green_vanishes_on_cap(
        theta in 0.05f64..3.09,
        y1 in 0.1f64..0.5, y2 in -0.5f64..0.5,
    ) {
        let ep = EllipticParams::new(2, 1, vec![0.25]).unwrap();
        let x = [theta.sin(), theta.cos()];
        let xi = [y1, y2];
        prop_assume!(y1 * y1 + y2 * y2 < 0.6);
        let g = green(&ep, &x, &xi, 1.0, &ctl()).unwrap();
        let scale = fundamental_solution(&ep, &[0.4, 0.0], &xi, &ctl()).unwrap().abs();
        prop_assert!(g.abs() <= 1e-9 * scale.max(1e-30));
    }

    /// Gauss–Legendre rules integrate monomials up to degree 2·level−1
    /// exactly.
    #[test]
    fn gauss_legendre_exactness(level in 2usize..20, d in 0usize..10) {
        prop_assume!(d <= 2 * level - 1);
        let (nodes, weights) = gauss_legendre(level);
        let got: f64 = nodes.iter().zip(&weights).map(|(x, w)| w * x.powi(d as i32)).sum();
        let want = if d % 2 == 0 { 2.0 / (d as f64 + 1.0) } else { 0.0 };
        prop_assert!((got - want).abs() <= 1e-12);
    }

    /// Cap quadrature weights are positive and nodes lie on the sphere.
    #[test]
    fn cap_nodes_on_sphere(level in 2usize..10, r in 0.5f64..2.0) {
        let ep = EllipticParams::new(3, 2, vec![0.25, 0.3]).unwrap();
        let dom = HalfBallDomain::new(ep, r).unwrap();
        for node in sphere_nodes(&dom, level).unwrap() {
            let norm: f64 = node.point.iter().map(|v| v * v).sum::<f64>().sqrt();
            prop_assert!((norm - r).abs() <= 1e-12 * r);
            prop_assert!(node.weight > 0.0);
        }
    }
}

/// L_m = 2π/(m−2) · L_{m−2}: the surface constants satisfy the
/// dimensional recurrence.
#[test]
fn surface_constant_recurrence() {
    for m in 4..=12usize {
        let lhs = surface_constant(m).unwrap();
        let rhs = 2.0 * core::f64::consts::PI / (m as f64 - 2.0) * surface_constant(m - 2).unwrap();
        assert!((lhs - rhs).abs() <= 1e-12 * lhs, "m = {m}");
    }
}
