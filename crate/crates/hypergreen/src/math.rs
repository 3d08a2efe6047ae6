//! `no_std` floating-point support: libm-backed transcendentals and a
//! Lanczos-type log-gamma used by every series engine in the crate.

/// Extension trait routing `f64` transcendentals through `libm` so the
/// crate builds without `std`.
pub(crate) trait Real {
    fn exp(self) -> f64;
    fn ln(self) -> f64;
    fn powf(self, p: f64) -> f64;
    fn sqrt(self) -> f64;
    fn sin(self) -> f64;
    fn cos(self) -> f64;
    fn floor(self) -> f64;
}

impl Real for f64 {
    #[inline]
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    #[inline]
    fn ln(self) -> f64 {
        libm::log(self)
    }
    #[inline]
    fn powf(self, p: f64) -> f64 {
        libm::pow(self, p)
    }
    #[inline]
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
    #[inline]
    fn sin(self) -> f64 {
        libm::sin(self)
    }
    #[inline]
    fn cos(self) -> f64 {
        libm::cos(self)
    }
    #[inline]
    fn floor(self) -> f64 {
        libm::floor(self)
    }
}

use core::f64::consts::PI;

/// Lanczos-type rational stage, `g = 10.900511`, 11 coefficients.
///
/// This parameter set gives better than 1e-14 relative accuracy for
/// `ln Γ` across the positive axis, comfortably inside the 1e-13
/// contract of [`crate::hyperfun::log_gamma`].
const GAMMA_R: f64 = 10.900511;
const GAMMA_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

/// ln(2 √(e/π))
const LN_2_SQRT_E_OVER_PI: f64 = 0.62078223763524522234551844578164721225;

/// Natural log of the gamma function for `x > 0`.
///
/// Callers validate positivity; this inner routine assumes it.
pub(crate) fn ln_gamma(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 0.5 {
        // Reflection keeps the rational stage on its accurate branch.
        let mut s = GAMMA_DK[0];
        for (i, dk) in GAMMA_DK.iter().enumerate().skip(1) {
            s += dk / (i as f64 - x);
        }
        PI.ln() - (PI * x).sin().ln()
            - (s.ln() + LN_2_SQRT_E_OVER_PI + (0.5 - x) * ((0.5 - x + GAMMA_R) / core::f64::consts::E).ln())
    } else {
        let mut s = GAMMA_DK[0];
        for (i, dk) in GAMMA_DK.iter().enumerate().skip(1) {
            s += dk / (x - 1.0 + i as f64);
        }
        s.ln() + LN_2_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + GAMMA_R) / core::f64::consts::E).ln()
    }
}

/// `(ln |Γ(x)|, sign of Γ(x))` for any non-pole `x`.
///
/// Returns `None` at the poles (non-positive integers). Negative
/// arguments go through the reflection formula
/// `Γ(x) Γ(1−x) = π / sin(πx)`.
pub(crate) fn ln_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if x > 0.0 {
        return Some((ln_gamma(x), 1.0));
    }
    if x == x.floor() {
        return None; // pole
    }
    let s = (PI * x).sin();
    Some((PI.ln() - s.abs().ln() - ln_gamma(1.0 - x), if s > 0.0 { 1.0 } else { -1.0 }))
}
