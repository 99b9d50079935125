//! Complex log-gamma and Euler's beta function.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

/// Complex parameter type used throughout the crate.
pub type ComplexValue = Complex64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("Γ has a pole at z = {0}")]
    GammaPole(f64),
    #[error("B(a, b) undefined: first argument {0} is a pole of Γ")]
    BetaPoleA(f64),
    #[error("B(a, b) undefined: second argument {0} is a pole of Γ")]
    BetaPoleB(f64),
    #[error("B(a, b) undefined: a + b = {0} is a pole of Γ")]
    BetaPoleSum(f64),
    #[error("non-finite complex argument {0}")]
    NonFinite(Complex64),
}

/// Reject NaN/Inf components at API boundaries.
pub fn check_finite(z: ComplexValue) -> Result<ComplexValue, SpecialError> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(SpecialError::NonFinite(z))
    }
}

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn pole_location(z: ComplexValue) -> Option<f64> {
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        Some(z.re)
    } else {
        None
    }
}

/// Principal branch of `log Γ(z)`: analytic on ℂ minus the non-positive real
/// axis, real on the positive axis, with the cut approached from above.
pub fn log_gamma(z: ComplexValue) -> Result<ComplexValue, SpecialError> {
    check_finite(z)?;
    if let Some(p) = pole_location(z) {
        return Err(SpecialError::GammaPole(p));
    }
    if z.im < 0.0 {
        return log_gamma(z.conj()).map(|w| w.conj());
    }
    if z.re < 0.5 {
        // log Γ(z) = log π − log sin(πz) − log Γ(1 − z), using the branch of
        // log sin(πz) that is continuous on the closed upper half-plane.
        let one_minus = log_gamma(Complex64::new(1.0, 0.0) - z)?;
        return Ok(Complex64::new(PI.ln(), 0.0) - log_sin_pi_upper(z) - one_minus);
    }
    Ok(lanczos_log_gamma(z))
}

fn lanczos_log_gamma(z: ComplexValue) -> ComplexValue {
    let w = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (k, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (w + k as f64);
    }
    let t = w + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (w + 0.5) * t.ln() - t + acc.ln()
}

/// `log sin(πz)` for `Im z >= 0`, continuous on the upper half-plane and equal
/// to the real log on `(0, 1)`.
fn log_sin_pi_upper(z: ComplexValue) -> ComplexValue {
    // sin(πz) = (i/2) e^{-iπz} (1 − e^{2πiz}); |e^{2πiz}| <= 1 here.
    let i = Complex64::i();
    let e = (2.0 * PI * i * z).exp();
    Complex64::new(0.5_f64.ln(), PI / 2.0) - i * PI * z + (Complex64::new(1.0, 0.0) - e).ln()
}

/// Γ(z) via `exp(log_gamma(z))`.
pub fn gamma(z: ComplexValue) -> Result<ComplexValue, SpecialError> {
    log_gamma(z).map(|l| l.exp())
}

/// Euler's beta function `B(a, b) = Γ(a) Γ(b) / Γ(a + b)`.
pub fn euler_beta(a: ComplexValue, b: ComplexValue) -> Result<ComplexValue, SpecialError> {
    let la = log_gamma(a).map_err(|e| match e {
        SpecialError::GammaPole(p) => SpecialError::BetaPoleA(p),
        other => other,
    })?;
    let lb = log_gamma(b).map_err(|e| match e {
        SpecialError::GammaPole(p) => SpecialError::BetaPoleB(p),
        other => other,
    })?;
    let lab = log_gamma(a + b).map_err(|e| match e {
        SpecialError::GammaPole(p) => SpecialError::BetaPoleSum(p),
        other => other,
    })?;
    Ok((la + lb - lab).exp())
}

/// `n`-dimensional area of the unit sphere `Sⁿ ⊂ ℝⁿ⁺¹`.
pub fn unit_sphere_area(n: u32) -> f64 {
    let half = (n as f64 + 1.0) / 2.0;
    let lg = log_gamma(Complex64::new(half, 0.0)).expect("positive argument").re;
    2.0 * PI.powf(half) / lg.exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        Complex64::new(re, im)
    }

    fn rel(a: ComplexValue, b: ComplexValue) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn log_gamma_examples() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!((log_gamma(c(5.0, 0.0)).unwrap() - c(24f64.ln(), 0.0)).norm() < 1e-13);
        assert!((log_gamma(c(0.5, 0.0)).unwrap() - c(0.5 * PI.ln(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn log_gamma_reference_values() {
        // mpmath.loggamma
        let cases = [
            (c(-0.5, 0.0), c(1.265_512_123_484_645_4, -PI)),
            (c(2.5, 3.0), c(-1.470_954_610_348_841_7, 2.822_615_638_260_799_5)),
            (c(-2.3, 1.7), c(-4.005_547_700_452_267, -6.945_026_776_596_145)),
            (c(30.0, -12.0), c(68.879_774_444_118_54, -40.928_868_955_918_06)),
        ];
        for (z, want) in cases {
            let got = log_gamma(z).unwrap();
            assert!((got - want).norm() < 1e-11 * want.norm().max(1.0), "z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn log_gamma_poles() {
        assert_eq!(log_gamma(c(0.0, 0.0)), Err(SpecialError::GammaPole(0.0)));
        assert_eq!(log_gamma(c(-3.0, 0.0)), Err(SpecialError::GammaPole(-3.0)));
        assert!(log_gamma(c(-3.0, 1e-9)).is_ok());
        assert!(matches!(log_gamma(c(f64::NAN, 0.0)), Err(SpecialError::NonFinite(_))));
    }

    #[test]
    fn euler_beta_examples() {
        assert!((euler_beta(c(1.0, 0.0), c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!((euler_beta(c(0.5, 0.0), c(0.5, 0.0)).unwrap() - PI).norm() < 1e-13);
        let s = -1.0;
        let got = euler_beta(c((s + 2.0) / 2.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((got - 2.0).norm() < 1e-14);
    }

    #[test]
    fn euler_beta_pole_kinds() {
        assert_eq!(euler_beta(c(-1.0, 0.0), c(0.5, 0.0)), Err(SpecialError::BetaPoleA(-1.0)));
        assert_eq!(euler_beta(c(0.5, 0.0), c(0.0, 0.0)), Err(SpecialError::BetaPoleB(0.0)));
        assert_eq!(euler_beta(c(-0.5, 0.0), c(-0.5, 0.0)), Err(SpecialError::BetaPoleSum(-1.0)));
    }

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(1) - 2.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(2) - 4.0 * PI).abs() < 1e-13);
        assert!((unit_sphere_area(3) - 2.0 * PI * PI).abs() < 1e-13);
    }

    fn arb_z() -> impl Strategy<Value = ComplexValue> {
        (-6.0f64..8.0, -6.0f64..6.0).prop_map(|(re, im)| c(re, im))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn beta_symmetry(a in arb_z(), b in arb_z()) {
            prop_assume!((a.re - a.re.round()).abs() > 1e-3 || a.im.abs() > 1e-3);
            prop_assume!((b.re - b.re.round()).abs() > 1e-3 || b.im.abs() > 1e-3);
            let ab = a + b;
            prop_assume!((ab.re - ab.re.round()).abs() > 1e-3 || ab.im.abs() > 1e-3);
            let x = euler_beta(a, b).unwrap();
            let y = euler_beta(b, a).unwrap();
            prop_assert!(rel(x, y) < 1e-13);
        }

        #[test]
        fn beta_recurrence(a in arb_z(), b in arb_z()) {
            for z in [a, b, a + b, a + 1.0, a + b + 1.0] {
                prop_assume!((z.re - z.re.round()).abs() > 1e-3 || z.im.abs() > 1e-3);
            }
            let lhs = euler_beta(a + 1.0, b).unwrap();
            let rhs = euler_beta(a, b).unwrap() * a / (a + b);
            prop_assert!(rel(lhs, rhs) < 1e-12);
        }

        #[test]
        fn reflection(z in arb_z()) {
            prop_assume!((z.re - z.re.round()).abs() > 0.05 || z.im.abs() > 0.05);
            let one = c(1.0, 0.0);
            let prod = log_gamma(z).unwrap().exp() * log_gamma(one - z).unwrap().exp();
            let want = PI / (z * PI).sin();
            prop_assert!(rel(prod, want) < 1e-10);
        }

        #[test]
        fn log_gamma_recurrence_keeps_branch(z in arb_z()) {
            prop_assume!(!(z.im == 0.0 && z.re <= 0.0));
            prop_assume!(z.norm() > 1e-3 && ((z.re - z.re.round()).abs() > 1e-3 || z.im.abs() > 1e-3));
            let lhs = log_gamma(z + 1.0).unwrap();
            let rhs = log_gamma(z).unwrap() + z.ln();
            prop_assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1.0));
        }
    }
}
