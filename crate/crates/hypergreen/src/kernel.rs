//! Fundamental solution `q_n`, its gradient and normal derivative, the
//! Kelvin-reflected image term, the Green's function `G` of the
//! hyper-hemisphere, and the flat-face boundary kernel `G_k*`.

use alloc::format;
use alloc::vec::Vec;

use crate::hyperfun::{lauricella_fa_decomposed, LauricellaParams, SeriesControl};
use crate::math::{ln_gamma, Real};
use crate::{Error, Result};

/// A point of `R^m`, stored as its coordinate vector.
pub type Point = Vec<f64>;

/// Relative squared-distance threshold below which kernel evaluations
/// refuse to proceed (see the near-singularity guard).
const SINGULARITY_GUARD: f64 = 1e-12;

/// The governing parameter tuple `(m, n, α_1..α_n)` with the derived
/// exponent `ᾱ_n = (m−2)/2 + n − Σα_k` and normalisation `γ_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticParams {
    pub m: usize,
    pub n: usize,
    pub alpha: Vec<f64>,
    /// Derived exponent `ᾱ_n`.
    pub alpha_tilde: f64,
    /// Derived normalisation constant `γ_n` (always positive).
    pub gamma_n: f64,
}

impl EllipticParams {
    /// Validates `m >= 2`, `1 <= n <= m`, `0 < 2α_k < 1`, and computes
    /// the derived fields.
    pub fn new(m: usize, n: usize, alpha: Vec<f64>) -> Result<Self> {
        if m < 2 {
            return Err(Error::Domain(format!("need m >= 2, got {m}")));
        }
        if n < 1 || n > m {
            return Err(Error::Domain(format!("need 1 <= n <= m, got n = {n}, m = {m}")));
        }
        if alpha.len() != n {
            return Err(Error::Domain(format!(
                "expected {n} singular exponents, got {}",
                alpha.len()
            )));
        }
        for &a in &alpha {
            if !(a > 0.0 && 2.0 * a < 1.0) {
                return Err(Error::Domain(format!(
                    "each α_k must satisfy 0 < 2α_k < 1, got {a}"
                )));
            }
        }
        let alpha_sum: f64 = alpha.iter().sum();
        let alpha_tilde = (m as f64 - 2.0) / 2.0 + n as f64 - alpha_sum;
        let mut params = Self {
            m,
            n,
            alpha,
            alpha_tilde,
            gamma_n: 0.0,
        };
        params.gamma_n = normalization(&params);
        Ok(params)
    }

    /// The Lauricella parameter set `(ᾱ_n + shift; 1−α; 2−2α)` used by
    /// the kernel formulas; `bump` optionally raises one `(b_k, c_k)`
    /// pair by one.
    fn fa_params(&self, a_shift: f64, bump: Option<usize>) -> LauricellaParams {
        let mut b: Vec<f64> = self.alpha.iter().map(|a| 1.0 - a).collect();
        let mut c: Vec<f64> = self.alpha.iter().map(|a| 2.0 - 2.0 * a).collect();
        if let Some(k) = bump {
            b[k] += 1.0;
            c[k] += 1.0;
        }
        LauricellaParams::new(self.alpha_tilde + a_shift, b, c).expect("validated parameters")
    }

    fn check_dim(&self, x: &[f64], what: &str) -> Result<()> {
        if x.len() != self.m {
            return Err(Error::Domain(format!(
                "{what} has dimension {}, expected m = {}",
                x.len(),
                self.m
            )));
        }
        Ok(())
    }
}

/// Squared distances and Lauricella arguments for a point pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairGeometry {
    /// `r² = Σ (x_i − ξ_i)²`.
    pub r_sq: f64,
    /// `r_k² = r² + 4 x_k ξ_k` for the n singular axes.
    pub r_k_sq: Vec<f64>,
    /// `σ_k = 1 − r_k²/r² = −4 x_k ξ_k / r²`.
    pub sigma: Vec<f64>,
}

/// The Kelvin image of an interior pole.
#[derive(Debug, Clone, PartialEq)]
pub struct Reflection {
    /// `R₀² = Σ ξ_i²`.
    pub r0_sq: f64,
    /// `ξ̄ = (R²/R₀²) ξ`.
    pub xi_bar: Point,
    /// Kelvin factor `(R/R₀)^{m−2+2Σα}` multiplying the image term —
    /// exactly the power that makes `q_n(x;ξ) − scale·q_n(x;ξ̄)` vanish
    /// for `|x| = R`.
    pub scale: f64,
}

/// Arguments of the two `F_A^{(n−1)}` factors of the boundary kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryKernelArgs {
    /// `σ_s⁰ = −4 x_s ξ_s / D`, `s ≠ k`.
    pub sigma0: Vec<f64>,
    /// `σ̄_s⁰ = −4 x_s ξ_s / B`, `s ≠ k`.
    pub sigma0_bar: Vec<f64>,
}

/// Distance data of a point pair.
///
/// The identity `σ_k = 1 − r_k²/r² = −4 x_k ξ_k / r²` holds by
/// construction (the second form is used, being exact for tiny `x_k`).
pub fn pair_geometry(ep: &EllipticParams, x: &[f64], xi: &[f64]) -> Result<PairGeometry> {
    ep.check_dim(x, "x")?;
    ep.check_dim(xi, "xi")?;
    let r_sq: f64 = x.iter().zip(xi).map(|(a, b)| (a - b) * (a - b)).sum();
    if r_sq == 0.0 {
        return Err(Error::Singularity(format!("x = ξ = {x:?}")));
    }
    let mut r_k_sq = Vec::with_capacity(ep.n);
    let mut sigma = Vec::with_capacity(ep.n);
    for k in 0..ep.n {
        r_k_sq.push(r_sq + 4.0 * x[k] * xi[k]);
        sigma.push(-4.0 * x[k] * xi[k] / r_sq);
    }
    Ok(PairGeometry { r_sq, r_k_sq, sigma })
}

/// Normalisation constant
/// `γ_n = 2^{2ᾱ_n − m} Γ(ᾱ_n) / π^{m/2} · Π_j Γ(1−α_j)/Γ(2−2α_j)`,
/// computed in the log domain.
pub fn normalization(ep: &EllipticParams) -> f64 {
    let at = ep.alpha_tilde;
    let mut lg = (2.0 * at - ep.m as f64) * core::f64::consts::LN_2 + ln_gamma(at)
        - ep.m as f64 / 2.0 * core::f64::consts::PI.ln();
    for &a in &ep.alpha {
        lg += ln_gamma(1.0 - a) - ln_gamma(2.0 - 2.0 * a);
    }
    lg.exp()
}

/// The weight `Π_{k<=n} (x_k ξ_k)^{1−2α_k}`, via exp/log of the positive
/// factors; exactly zero when any `x_k ξ_k = 0`.
fn singular_prefactor(ep: &EllipticParams, x: &[f64], xi: &[f64]) -> f64 {
    let mut lp = 0.0;
    for k in 0..ep.n {
        let prod = x[k] * xi[k];
        if prod == 0.0 {
            return 0.0;
        }
        lp += (1.0 - 2.0 * ep.alpha[k]) * prod.ln();
    }
    lp.exp()
}

fn check_pole_interior(ep: &EllipticParams, xi: &[f64]) -> Result<()> {
    for k in 0..ep.n {
        if !(xi[k] > 0.0) {
            return Err(Error::Domain(format!(
                "pole must have ξ_k > 0 on the singular axes, got ξ_{} = {}",
                k + 1,
                xi[k]
            )));
        }
    }
    Ok(())
}

/// Fundamental solution
/// `q_n(x;ξ) = γ_n Π (x_kξ_k)^{1−2α_k} · r^{−2ᾱ_n}
///             · F_A^(n)(ᾱ_n; 1−α; 2−2α; σ)`.
pub fn fundamental_solution(
    ep: &EllipticParams,
    x: &[f64],
    xi: &[f64],
    ctl: &SeriesControl,
) -> Result<f64> {
    check_pole_interior(ep, xi)?;
    let geo = pair_geometry(ep, x, xi)?;
    let pref = singular_prefactor(ep, x, xi);
    if pref == 0.0 {
        return Ok(0.0);
    }
    let fa = lauricella_fa_decomposed(&ep.fa_params(0.0, None), &geo.sigma, ctl)?;
    if !fa.converged {
        return Err(Error::Convergence(format!(
            "F_A series for q_n at σ = {:?} used {} terms",
            geo.sigma, fa.terms_used
        )));
    }
    Ok(ep.gamma_n * pref * geo.r_sq.powf(-ep.alpha_tilde) * fa.value)
}

/// Gradient of `q_n` with respect to `x`.
///
/// Components `k <= n` use the three-term differentiation formula (the
/// adjacent relation already applied); components `i > n` reduce to a
/// single shifted `F_A` value. Requires `x_k > 0` on the singular axes.
pub fn fundamental_gradient(
    ep: &EllipticParams,
    x: &[f64],
    xi: &[f64],
    ctl: &SeriesControl,
) -> Result<Vec<f64>> {
    check_pole_interior(ep, xi)?;
    for k in 0..ep.n {
        if !(x[k] > 0.0) {
            return Err(Error::Domain(format!(
                "gradient needs x_k > 0 on singular axes, got x_{} = {}",
                k + 1,
                x[k]
            )));
        }
    }
    let geo = pair_geometry(ep, x, xi)?;
    let at = ep.alpha_tilde;
    let pref = singular_prefactor(ep, x, xi);
    let radial = geo.r_sq.powf(-at);
    let f0 = lauricella_fa_decomposed(&ep.fa_params(0.0, None), &geo.sigma, ctl)?.value;
    let f1 = lauricella_fa_decomposed(&ep.fa_params(1.0, None), &geo.sigma, ctl)?.value;
    let mut grad = Vec::with_capacity(ep.m);
    for k in 0..ep.n {
        let f2k = lauricella_fa_decomposed(&ep.fa_params(1.0, Some(k)), &geo.sigma, ctl)?.value;
        let ak = ep.alpha[k];
        let val = ep.gamma_n
            * pref
            * radial
            * ((1.0 - 2.0 * ak) / x[k] * f0
                + 2.0 * at * (xi[k] - x[k]) / geo.r_sq * f1
                - 2.0 * at * xi[k] / geo.r_sq * f2k);
        grad.push(val);
    }
    for i in ep.n..ep.m {
        grad.push(ep.gamma_n * pref * radial * 2.0 * at * (xi[i] - x[i]) / geo.r_sq * f1);
    }
    Ok(grad)
}

/// Kelvin reflection of the pole in the sphere of radius `R`.
pub fn reflect(ep: &EllipticParams, xi: &[f64], r: f64) -> Result<Reflection> {
    ep.check_dim(xi, "xi")?;
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    let r0_sq: f64 = xi.iter().map(|v| v * v).sum();
    if r0_sq == 0.0 {
        return Err(Error::Domain("cannot reflect the origin".into()));
    }
    let lambda = r * r / r0_sq;
    let alpha_sum: f64 = ep.alpha.iter().sum();
    Ok(Reflection {
        r0_sq,
        xi_bar: xi.iter().map(|v| lambda * v).collect(),
        scale: lambda.powf(0.5 * (ep.m as f64 - 2.0) + alpha_sum),
    })
}

/// Green's function of the half-ball:
/// `G(x;ξ) = q_n(x;ξ) − (R/R₀)^{m−2+2Σα} q_n(x; ξ̄)`,
/// vanishing on the spherical cap and on every face.
pub fn green(ep: &EllipticParams, x: &[f64], xi: &[f64], r: f64, ctl: &SeriesControl) -> Result<f64> {
    let refl = reflect(ep, xi, r)?;
    if refl.r0_sq >= r * r {
        return Err(Error::Domain(format!(
            "pole must be strictly inside the sphere: |ξ|² = {} >= R² = {}",
            refl.r0_sq,
            r * r
        )));
    }
    check_pole_interior(ep, xi)?;
    let r_sq: f64 = x.iter().zip(xi).map(|(a, b)| (a - b) * (a - b)).sum();
    if r_sq < SINGULARITY_GUARD * r * r {
        return Err(Error::Singularity(format!(
            "evaluation point within guard distance of the pole (r² = {r_sq})"
        )));
    }
    let direct = fundamental_solution(ep, x, xi, ctl)?;
    let image = fundamental_solution(ep, x, &refl.xi_bar, ctl)?;
    Ok(direct - refl.scale * image)
}

/// Outward normal derivative of `G` at a sphere point `|x| = R`:
/// `Σ_i ∂G/∂x_i · x_i/R`.
pub fn green_normal_derivative(
    ep: &EllipticParams,
    x: &[f64],
    xi: &[f64],
    r: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    ep.check_dim(x, "x")?;
    let norm_sq: f64 = x.iter().map(|v| v * v).sum();
    if (norm_sq.sqrt() - r).abs() > 1e-9 * r {
        return Err(Error::Domain(format!(
            "normal derivative requires |x| = R, got |x| = {}",
            norm_sq.sqrt()
        )));
    }
    let refl = reflect(ep, xi, r)?;
    let g_direct = fundamental_gradient(ep, x, xi, ctl)?;
    let g_image = fundamental_gradient(ep, x, &refl.xi_bar, ctl)?;
    let mut dn = 0.0;
    for i in 0..ep.m {
        dn += (g_direct[i] - refl.scale * g_image[i]) * x[i] / r;
    }
    Ok(dn)
}

/// The two denominators of the boundary kernel at a face point
/// (`x_k = 0`): the direct one `D = ξ_k² + Σ_{i≠k}(ξ_i−x_i)²` and the
/// reflected one `B = R² − 2⟨x,ξ⟩ + R₀²|x|²/R²` (the inversion distance
/// `r̄₀²` equals `(R²/R₀²)·B`).
fn face_denominators(x: &[f64], xi: &[f64], k: usize, r: f64, r0_sq: f64) -> (f64, f64) {
    let mut d = xi[k] * xi[k];
    let mut dot = 0.0;
    let mut x_sq = 0.0;
    for i in 0..x.len() {
        if i == k {
            continue;
        }
        d += (xi[i] - x[i]) * (xi[i] - x[i]);
        dot += x[i] * xi[i];
        x_sq += x[i] * x[i];
    }
    let b = r * r - 2.0 * dot + r0_sq * x_sq / (r * r);
    (d, b)
}

/// Arguments `σ₀`, `σ̄₀` of the boundary-kernel Lauricella factors.
/// `k` is a one-based singular-axis index.
pub fn boundary_kernel_args(
    ep: &EllipticParams,
    k: usize,
    x_face: &[f64],
    xi: &[f64],
    r: f64,
) -> Result<BoundaryKernelArgs> {
    let k0 = k - 1;
    let r0_sq: f64 = xi.iter().map(|v| v * v).sum();
    let (d, b) = face_denominators(x_face, xi, k0, r, r0_sq);
    let mut sigma0 = Vec::with_capacity(ep.n - 1);
    let mut sigma0_bar = Vec::with_capacity(ep.n - 1);
    for s in 0..ep.n {
        if s == k0 {
            continue;
        }
        sigma0.push(-4.0 * x_face[s] * xi[s] / d);
        sigma0_bar.push(-4.0 * x_face[s] * xi[s] / b);
    }
    Ok(BoundaryKernelArgs { sigma0, sigma0_bar })
}

/// Boundary kernel `G_k*` on the face `x_k = 0` (one-based `k`):
///
/// `G_k* = (1−2α_k) γ_n ξ_k^{1−2α_k} Π_{i≤n, i≠k}(x_iξ_i)^{1−2α_i}
///   · { F_A^{(n−1)}(σ₀)/D^{ᾱ} − F_A^{(n−1)}(σ̄₀)/B^{ᾱ} }`,
///
/// equal to the trace `lim_{x_k→0} x_k^{2α_k} ∂G/∂x_k`. The Kelvin
/// factor of the image term cancels exactly against the rescaling of
/// the image prefactor and denominator, leaving none here.
pub fn boundary_kernel(
    ep: &EllipticParams,
    k: usize,
    x_face: &[f64],
    xi: &[f64],
    r: f64,
    ctl: &SeriesControl,
) -> Result<f64> {
    ep.check_dim(x_face, "x_face")?;
    ep.check_dim(xi, "xi")?;
    if k < 1 || k > ep.n {
        return Err(Error::Domain(format!("face index k = {k} out of 1..={}", ep.n)));
    }
    let k0 = k - 1;
    if x_face[k0] != 0.0 {
        return Err(Error::Domain(format!(
            "face point must have x_{k} = 0, got {}",
            x_face[k0]
        )));
    }
    check_pole_interior(ep, xi)?;
    let at = ep.alpha_tilde;
    let r0_sq: f64 = xi.iter().map(|v| v * v).sum();
    let (d, b) = face_denominators(x_face, xi, k0, r, r0_sq);
    if d < SINGULARITY_GUARD * r * r || b < SINGULARITY_GUARD * r * r {
        return Err(Error::Singularity(format!(
            "degenerate boundary-kernel denominators D = {d}, B = {b}"
        )));
    }
    let args = boundary_kernel_args(ep, k, x_face, xi, r)?;
    // Prefactor (1−2α_k) γ_n ξ_k^{1−2α_k} Π_{i≠k}(x_iξ_i)^{1−2α_i}.
    let ak = ep.alpha[k0];
    let mut pref = (1.0 - 2.0 * ak) * ep.gamma_n * xi[k0].powf(1.0 - 2.0 * ak);
    for i in 0..ep.n {
        if i == k0 {
            continue;
        }
        let prod = x_face[i] * xi[i];
        if prod == 0.0 {
            return Ok(0.0);
        }
        pref *= prod.powf(1.0 - 2.0 * ep.alpha[i]);
    }
    // F_A^{(n−1)} factors (empty product = 1 for n = 1).
    let (fa_direct, fa_image) = if ep.n == 1 {
        (1.0, 1.0)
    } else {
        let mut bpar = Vec::with_capacity(ep.n - 1);
        let mut cpar = Vec::with_capacity(ep.n - 1);
        for i in 0..ep.n {
            if i == k0 {
                continue;
            }
            bpar.push(1.0 - ep.alpha[i]);
            cpar.push(2.0 - 2.0 * ep.alpha[i]);
        }
        let p = LauricellaParams::new(at, bpar, cpar)?;
        (
            lauricella_fa_decomposed(&p, &args.sigma0, ctl)?.value,
            lauricella_fa_decomposed(&p, &args.sigma0_bar, ctl)?.value,
        )
    };
    Ok(pref * (fa_direct / d.powf(at) - fa_image / b.powf(at)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    fn ep21() -> EllipticParams {
        EllipticParams::new(2, 1, vec![0.25]).unwrap()
    }

    fn ep32() -> EllipticParams {
        EllipticParams::new(3, 2, vec![0.25, 1.0 / 3.0]).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(EllipticParams::new(1, 1, vec![0.25]).is_err());
        assert!(EllipticParams::new(3, 4, vec![0.1; 4]).is_err());
        assert!(EllipticParams::new(3, 2, vec![0.25]).is_err());
        assert!(EllipticParams::new(2, 1, vec![0.5]).is_err());
        assert!(EllipticParams::new(2, 1, vec![0.0]).is_err());
        let ep = ep21();
        assert!((ep.alpha_tilde - 0.75).abs() < 1e-15);
        assert!(ep.gamma_n > 0.0);
    }

    #[test]
    fn normalization_example() {
        // m=2, n=1, α=1/4: γ₁ = 2^{−1/2} Γ(3/4)/π · Γ(3/4)/Γ(3/2).
        let ep = ep21();
        let expect = (-0.5 * core::f64::consts::LN_2 + ln_gamma(0.75)
            - core::f64::consts::PI.ln()
            + ln_gamma(0.75)
            - ln_gamma(1.5))
        .exp();
        assert!((ep.gamma_n - expect).abs() < 1e-13 * expect);
        // m=3, n=2, α=(1/4,1/4): ᾱ = 2, γ₂ = 2 Γ(2)/π^{3/2} (Γ(3/4)/Γ(3/2))².
        let ep = EllipticParams::new(3, 2, vec![0.25, 0.25]).unwrap();
        assert!((ep.alpha_tilde - 2.0).abs() < 1e-15);
        let ratio = (ln_gamma(0.75) - ln_gamma(1.5)).exp();
        let expect = 2.0 / core::f64::consts::PI.powf(1.5) * ratio * ratio;
        assert!((ep.gamma_n - expect).abs() < 1e-13 * expect);
    }

    #[test]
    fn pair_geometry_example() {
        // m=2, n=1, x=(1,2), ξ=(3,2): r²=4, r₁²=16, σ₁=−3.
        let geo = pair_geometry(&ep21(), &[1.0, 2.0], &[3.0, 2.0]).unwrap();
        assert_eq!(geo.r_sq, 4.0);
        assert_eq!(geo.r_k_sq[0], 16.0);
        assert_eq!(geo.sigma[0], -3.0);
        // σ identity and symmetry.
        let a = pair_geometry(&ep32(), &[0.3, 0.4, -0.1], &[0.2, 0.5, 0.3]).unwrap();
        let b = pair_geometry(&ep32(), &[0.2, 0.5, 0.3], &[0.3, 0.4, -0.1]).unwrap();
        assert_eq!(a, b);
        for k in 0..2 {
            let ident = 1.0 - a.r_k_sq[k] / a.r_sq;
            assert!((a.sigma[k] - ident).abs() <= 1e-12 * ident.abs().max(1.0));
        }
        assert!(pair_geometry(&ep21(), &[1.0, 2.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn fundamental_solution_properties() {
        let ep = ep21();
        // Vanishing trace on x₁ = 0.
        let v = fundamental_solution(&ep, &[0.0, 0.4], &[0.3, 0.2], &ctl()).unwrap();
        assert_eq!(v, 0.0);
        // Symmetry.
        let a = fundamental_solution(&ep, &[0.5, -0.2], &[0.3, 0.2], &ctl()).unwrap();
        let b = fundamental_solution(&ep, &[0.3, 0.2], &[0.5, -0.2], &ctl()).unwrap();
        assert!((a - b).abs() < 1e-10 * a.abs());
        // n=1 reduction: q₁ = γ₁ (x₁ξ₁)^{1/2} r^{−3/2} F(3/4,3/4;3/2;σ)
        // at x=(1,2), ξ=(3,2): γ₁ 3^{1/2} 4^{−3/4} F(…;−3).
        let q = fundamental_solution(&ep, &[1.0, 2.0], &[3.0, 2.0], &ctl()).unwrap();
        let f = crate::hyperfun::gauss_2f1(
            &crate::hyperfun::GaussParams {
                a: 0.75,
                b: 0.75,
                c: 1.5,
                x: -3.0,
            },
            &ctl(),
        )
        .unwrap()
        .value;
        let expect = ep.gamma_n * (3.0f64).sqrt() * 4.0f64.powf(-0.75) * f;
        assert!((q - expect).abs() < 1e-12 * expect.abs());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        for (ep, x, xi) in [
            (ep21(), vec![0.5, -0.2], vec![0.3, 0.2]),
            (ep32(), vec![0.35, 0.42, -0.1], vec![0.2, 0.3, 0.25]),
        ] {
            let g = fundamental_gradient(&ep, &x, &xi, &ctl()).unwrap();
            for i in 0..ep.m {
                let h = 1e-6;
                let mut xp = x.clone();
                xp[i] += h;
                let mut xm = x.clone();
                xm[i] -= h;
                let fd = (fundamental_solution(&ep, &xp, &xi, &ctl()).unwrap()
                    - fundamental_solution(&ep, &xm, &xi, &ctl()).unwrap())
                    / (2.0 * h);
                assert!(
                    (g[i] - fd).abs() <= 2e-5 * fd.abs().max(1e-3),
                    "m={} axis {i}: analytic {} vs fd {fd}",
                    ep.m,
                    g[i]
                );
            }
        }
        // i > n with x_i = ξ_i → component zero.
        let ep = ep21();
        let g = fundamental_gradient(&ep, &[0.5, 0.2], &[0.3, 0.2], &ctl()).unwrap();
        assert_eq!(g[1], 0.0);
    }

    #[test]
    fn reflection_laws() {
        let ep = ep21();
        let xi = vec![0.3, 0.4]; // |ξ| = 0.5
        let refl = reflect(&ep, &xi, 1.0).unwrap();
        let norm: f64 = refl.xi_bar.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!((norm - 2.0).abs() < 1e-14);
        // Involution.
        let back = reflect(&ep, &refl.xi_bar, 1.0).unwrap();
        for (a, b) in back.xi_bar.iter().zip(&xi) {
            assert!((a - b).abs() < 1e-14);
        }
        // Fixed sphere.
        let on = reflect(&ep, &[0.6, 0.8], 1.0).unwrap();
        assert!((on.xi_bar[0] - 0.6).abs() < 1e-14 && (on.scale - 1.0).abs() < 1e-14);
        assert!(reflect(&ep, &[0.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn green_vanishes_on_boundary() {
        let ep = ep21();
        let xi = vec![0.4, 0.1];
        let q_scale = fundamental_solution(&ep, &[0.5, 0.1], &xi, &ctl())
            .unwrap()
            .abs();
        // Face x₁ = 0.
        let g = green(&ep, &[0.0, 0.7], &xi, 1.0, &ctl()).unwrap();
        assert!(g.abs() <= 1e-8 * q_scale);
        // Sphere |x| = 1.
        for t in [0.2f64, 0.9, 1.4] {
            let x = vec![t.cos(), t.sin()];
            let g = green(&ep, &x, &xi, 1.0, &ctl()).unwrap();
            assert!(g.abs() <= 1e-8 * q_scale, "at angle {t}: G = {g}");
        }
        assert!(green(&ep, &[0.1, 0.1], &[2.0, 0.0], 1.0, &ctl()).is_err());
    }

    #[test]
    fn normal_derivative_matches_radial_fd() {
        let ep = ep21();
        let xi = vec![0.4, 0.1];
        let x = vec![(0.7f64).cos(), (0.7f64).sin()];
        let dn = green_normal_derivative(&ep, &x, &xi, 1.0, &ctl()).unwrap();
        let h = 1e-6;
        let xp: Vec<f64> = x.iter().map(|v| v * (1.0 + h)).collect();
        let xm: Vec<f64> = x.iter().map(|v| v * (1.0 - h)).collect();
        let fd = (green(&ep, &xp, &xi, 1.0, &ctl()).unwrap()
            - green(&ep, &xm, &xi, 1.0, &ctl()).unwrap())
            / (2.0 * h);
        assert!((dn - fd).abs() <= 1e-4 * fd.abs(), "dn {dn} vs fd {fd}");
    }

    #[test]
    fn boundary_kernel_matches_limit_definition() {
        // Compare against x_k^{2α_k} ∂G/∂x_k at small x_k, Richardson
        // extrapolated in x_k (the non-constant remainder is O(x_k^{2−2α})).
        for (ep, k, x, xi) in [
            (ep21(), 1usize, vec![0.0, 0.55], vec![0.3, 0.35]),
            (ep32(), 1, vec![0.0, 0.25, 0.3], vec![0.2, 0.3, 0.25]),
            (ep32(), 2, vec![0.31, 0.0, -0.22], vec![0.2, 0.3, 0.25]),
        ] {
            let cf = boundary_kernel(&ep, k, &x, &xi, 1.0, &ctl()).unwrap();
            let w = |t: f64| -> f64 {
                let h = t * 1e-3;
                let mut xp = x.clone();
                xp[k - 1] = t + h;
                let mut xm = x.clone();
                xm[k - 1] = t - h;
                let d = (green(&ep, &xp, &xi, 1.0, &ctl()).unwrap()
                    - green(&ep, &xm, &xi, 1.0, &ctl()).unwrap())
                    / (2.0 * h);
                t.powf(2.0 * ep.alpha[k - 1]) * d
            };
            let (w1, w2) = (w(1e-3), w(2e-3));
            let p = 2.0 - 2.0 * ep.alpha[k - 1];
            let lim = (w1 - w2 * 0.5f64.powf(p)) / (1.0 - 0.5f64.powf(p));
            assert!(
                (cf - lim).abs() <= 1e-3 * cf.abs(),
                "k={k}: closed {cf} vs limit {lim}"
            );
        }
    }

    #[test]
    fn boundary_kernel_positive_near_face_center() {
        let ep = ep21();
        let v = boundary_kernel(&ep, 1, &[0.0, 0.05], &[0.4, 0.05], 1.0, &ctl()).unwrap();
        assert!(v > 0.0);
    }
}
