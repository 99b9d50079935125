//! Closed forms for round spheres.
//!
//! For `Sⁿ(r) ⊂ ℝⁿ⁺¹` the pointwise beta function is the one-dimensional
//! integral
//!
//! ```text
//! B^u(s) = ∫₀^π (2r sin(θ/2))^s ω_{n−1} (r sin θ)^{n−1} r dθ
//!        = 2^{s+n−1} ω_{n−1} r^{s+n} B((s+n)/2, n/2),
//! ```
//!
//! `ω_m` the area of the unit `m`-sphere. A variant with prefactor
//! `2^{s+n}` is also evaluated so the two can be compared against the
//! integral.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::direct::real_pow;
use super::BetaError;
use crate::quadrature::{geometric_breakpoints, integrate_adaptive, AdaptiveOptions};
use crate::special::{euler_beta, unit_sphere_area, SpecialError};

/// `(B^u(s), B_M(s))` for the 2-sphere of radius `r`.
pub fn sphere2(r: f64, s: Complex64) -> Result<(Complex64, Complex64), BetaError> {
    crate::special::check_finite(s)?;
    if (s + 2.0).norm() == 0.0 {
        return Err(BetaError::Special(SpecialError::BetaPoleA(0.0)));
    }
    let point = real_pow(2.0, s + 3.0) * PI * real_pow(r, s + 2.0) / (s + 2.0);
    let global = real_pow(2.0, s + 5.0) * PI * PI * real_pow(r, s + 4.0) / (s + 2.0);
    Ok((point, global))
}

/// Both prefactor variants for `Sⁿ(r)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereVariants {
    /// Prefactor `2^{s+n}`.
    pub power_n: Complex64,
    /// Prefactor `2^{s+n−1}`.
    pub power_n_minus_1: Complex64,
}

impl SphereVariants {
    /// Multiply both by `ω_n rⁿ` to get the global values.
    pub fn global(&self, n: u32, r: f64) -> Self {
        let f = unit_sphere_area(n) * r.powi(n as i32);
        Self { power_n: self.power_n * f, power_n_minus_1: self.power_n_minus_1 * f }
    }
}

/// Signature of an Euler beta implementation.
pub type BetaFn = fn(Complex64, Complex64) -> Result<Complex64, SpecialError>;

pub fn sphere_n_variants(n: u32, r: f64, s: Complex64) -> Result<SphereVariants, BetaError> {
    sphere_n_variants_with(n, r, s, euler_beta)
}

/// [`sphere_n_variants`] with a caller-supplied Euler beta function.
pub fn sphere_n_variants_with(n: u32, r: f64, s: Complex64, beta: BetaFn) -> Result<SphereVariants, BetaError> {
    if n == 0 {
        return Err(BetaError::InvalidOption("sphere dimension must be at least 1".into()));
    }
    let nf = n as f64;
    let b = beta((s + nf) / 2.0, Complex64::new(nf / 2.0, 0.0))?;
    let common = unit_sphere_area(n - 1) * real_pow(r, s + nf) * b;
    Ok(SphereVariants {
        power_n: real_pow(2.0, s + nf) * common,
        power_n_minus_1: real_pow(2.0, s + nf - 1.0) * common,
    })
}

/// The defining one-dimensional integral, for `Re s > −n`.
pub fn sphere_n_quadrature(n: u32, r: f64, s: Complex64, tol: f64) -> Result<Complex64, BetaError> {
    let nf = n as f64;
    if n == 0 || s.re <= -nf {
        return Err(BetaError::OutsideConvergence { s, boundary: -nf });
    }
    let omega = unit_sphere_area(n - 1);
    let f = |theta: f64| {
        let chord = 2.0 * r * (0.5 * theta).sin();
        real_pow(chord, s) * (omega * (r * theta.sin()).powi(n as i32 - 1) * r)
    };
    // θ^{s+n−1} behaviour at 0: graded panels plus the leading-order sliver.
    let bps = geometric_breakpoints(PI, 60);
    let res = integrate_adaptive(f, &bps, AdaptiveOptions { abs_tol: 1e-300, rel_tol: tol, max_panels: 2000 });
    if !res.converged {
        return Err(BetaError::ToleranceNotReached { requested: tol, achieved: res.error / res.value.norm() });
    }
    let eps = bps[0];
    let lead = real_pow(r, s) * (omega * r.powi(n as i32)) * real_pow(eps, s + nf) / (s + nf);
    Ok(res.value + lead)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn two_sphere_values() {
        let (p, g) = sphere2(1.0, c(0.0)).unwrap();
        assert!((p - 4.0 * PI).norm() < 1e-14 && (g - 16.0 * PI * PI).norm() < 1e-12);
        let (p, _) = sphere2(1.0, c(-1.5)).unwrap();
        assert!((p.re - 17.771_531_752_633_464).abs() < 1e-12);
        let (_, g) = sphere2(2.0, c(-1.0)).unwrap();
        assert!((g - 128.0 * PI * PI).norm() < 1e-10);
        assert!(sphere2(1.0, c(-2.0)).is_err());
    }

    #[test]
    fn three_sphere_adjudicates_power() {
        let q = sphere_n_quadrature(3, 1.0, c(0.0), 1e-13).unwrap();
        assert!((q.re - 2.0 * PI * PI).abs() < 1e-10);
        let v = sphere_n_variants(3, 1.0, c(0.0)).unwrap();
        assert!((v.power_n_minus_1 - q).norm() < 1e-10);
        assert!((v.power_n - q).norm() > 1.0);
    }

    #[test]
    fn n_equals_two_reduces_to_two_sphere() {
        for s in [c(0.3), Complex64::new(-1.7, 2.0), c(-5.5), Complex64::new(3.0, -1.0)] {
            let v = sphere_n_variants(2, 1.3, s).unwrap();
            let (p, _) = sphere2(1.3, s).unwrap();
            assert!((v.power_n_minus_1 - p).norm() < 1e-12 * p.norm());
        }
    }

    #[test]
    fn quadrature_matches_closed_form_off_axis() {
        for (n, s) in [(1, c(-0.5)), (2, Complex64::new(-1.2, 0.7)), (4, c(1.5))] {
            let q = sphere_n_quadrature(n, 0.8, s, 1e-12).unwrap();
            let v = sphere_n_variants(n, 0.8, s).unwrap();
            assert!((q - v.power_n_minus_1).norm() < 1e-9 * q.norm(), "n={n}");
        }
    }
}
