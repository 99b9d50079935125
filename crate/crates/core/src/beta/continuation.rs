//! Meromorphic continuation of `B^u(s)` through the spherical mean.
//!
//! With `S_j(s) = (1/j!) ∂ʲS/∂rʲ(0, s)` and any even depth `k`,
//!
//! ```text
//! B^u(s) = ∫₀^{r0} r^{s+1} (S(r,s) − Σ_{j<k} S_j r^j) dr
//!        + Σ_{j<k} S_j r0^{s+2+j} / (s+2+j)
//!        + ∫_M (1 − χ(‖v−u‖)) ‖v−u‖^s dA(v),
//! ```
//!
//! valid for `Re s > −2 − k`; only even `j` contribute because `S` is even.

use num_complex::Complex64;

use super::cutoff::CutoffSpec;
use super::direct::{outer_converged, real_pow, weighted_point_integral, RadialWeight};
use super::spherical_mean::{SphericalMean, MEAN_NOISE};
use super::{BetaError, ContinuationOptions, Estimate, MeromorphicResult, POLE_GUARD};
use crate::jet::{extract_jet, pointwise_residues_closed_form};
use crate::quadrature::{integrate_adaptive, AdaptiveOptions, RichardsonTable};
use crate::surface::{quadrature_nodes, Surface, SurfacePoint};

/// Deepest subtraction supported: the Taylor coefficients are available up
/// to `r⁴`, which covers `Re s > −8`.
pub const MAX_DEPTH: usize = 6;

/// Smallest even `k` with `Re s > −2 − k`.
pub fn default_depth(s: Complex64) -> usize {
    let x = -2.0 - s.re;
    if x < 0.0 {
        0
    } else {
        2 * ((x / 2.0).floor() as usize + 1)
    }
}

/// Nearest point of `{−2, −4, −6, …}` and the distance to it.
pub fn nearest_pole(s: Complex64) -> (f64, f64) {
    let p = (2.0 * (s.re / 2.0).round()).min(-2.0);
    (p, (s - p).norm())
}

/// Pieces of the near part at one `s`.
#[derive(Debug, Clone)]
struct NearPart {
    /// `∫_{r_min}^{r0} r^{s+1}(S − Σ S_j r^j) dr` plus the closed-form sliver
    /// below `r_min`.
    remainder: Estimate,
    /// `(j, S_j, S_j r0^{s+2+j}/(s+2+j))` for the subtracted orders.
    pole_terms: Vec<(usize, Estimate, Complex64)>,
}

fn coefficients(mean: &SphericalMean, k: usize, s: Complex64) -> Result<Vec<Estimate>, BetaError> {
    (0..k.min(4) + 1).step_by(2).map(|j| mean.taylor_coefficient(j, s)).collect()
}

fn near_part(mean: &SphericalMean, s: Complex64, k: usize, tol: f64) -> Result<NearPart, BetaError> {
    if k > MAX_DEPTH || k % 2 == 1 {
        return Err(BetaError::InvalidOption(format!(
            "subtraction depth must be even and at most {MAX_DEPTH}, got {k}"
        )));
    }
    let r0 = mean.cutoff().radius;
    let sigma = s.re;
    let coef = coefficients(mean, k, s)?;
    let sub: Vec<(usize, Estimate)> = (0..k).step_by(2).map(|j| (j, coef[j / 2])).collect();
    let tail_coef = (k <= 4).then(|| coef[k / 2]);

    // Lower limit of the numerical integral: balance evaluation noise, which
    // the kernel r^{s+1} amplifies at small r, against the neglected higher
    // Taylor orders. Height rounding adds noise of order (δ/r)² to S.
    let kappa = mean.curvature_scale() * (0.5 * s.norm()).max(1.0);
    let next = if tail_coef.is_some() { k + 2 } else { k };
    let height_noise = std::f64::consts::PI * s.norm() * mean.height_noise().powi(2);
    let model = |r: f64| {
        let noise_exp = sigma + 2.0;
        let mut e = MEAN_NOISE * r.powf(noise_exp) / noise_exp.abs().max(0.5);
        e += height_noise * r.powf(sigma) / sigma.abs().max(0.5);
        for (j, c) in &sub {
            let ex = sigma + 2.0 + *j as f64;
            e += c.error * r.powf(ex) / ex.abs().max(0.5);
        }
        let ex = sigma + 2.0 + next as f64;
        e + std::f64::consts::TAU * kappa.powi(next as i32) * r.powf(ex) / ex.abs().max(0.5)
    };
    let r_min = (3..=44)
        .map(|m| r0 * 0.5f64.powi(m))
        .min_by(|a, b| model(*a).total_cmp(&model(*b)))
        .expect("non-empty candidate set");

    let mut failure = None;
    let integrand = |r: f64| {
        let mut v = match mean.eval(r, s) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                return Complex64::new(0.0, 0.0);
            }
        };
        for (j, c) in &sub {
            v -= c.value * r.powi(*j as i32);
        }
        v * real_pow(r, s + 1.0)
    };
    let mut bps = Vec::new();
    let mut r = r_min;
    while r < r0 {
        bps.push(r);
        r *= 2.0;
    }
    bps.push(r0);
    let pole_scale: f64 = sub
        .iter()
        .map(|(j, c)| (c.value * real_pow(r0, s + 2.0 + *j as f64) / (s + 2.0 + *j as f64)).norm())
        .sum::<f64>()
        .max(1.0);
    let opts = AdaptiveOptions { abs_tol: 1e-3 * tol * pole_scale, rel_tol: 1e-3 * tol, max_panels: 600 };
    let quad = integrate_adaptive(integrand, &bps, opts);
    if let Some(e) = failure {
        return Err(e);
    }
    // Without subtraction the integral itself carries the value.
    let scale = pole_scale.max(quad.value.norm());
    if !quad.converged && quad.error > tol * scale {
        return Err(BetaError::ToleranceNotReached { requested: tol, achieved: quad.error / scale });
    }
    let mut remainder = Estimate { value: quad.value, error: quad.error + model(r_min) };
    if let Some(c) = tail_coef {
        let ex = s + 2.0 + k as f64;
        remainder.value += c.value * real_pow(r_min, ex) / ex;
        remainder.error += c.error * real_pow(r_min, ex).norm() / ex.norm();
    }
    let pole_terms = sub
        .into_iter()
        .map(|(j, c)| {
            let ex = s + 2.0 + j as f64;
            (j, c, c.value * real_pow(r0, ex) / ex)
        })
        .collect();
    Ok(NearPart { remainder, pole_terms })
}

/// Combined error of the remainder and pole terms: an error `δ` in `S_j`
/// cancels between the two except for `δ·r_min^{s+2+j}/(s+2+j)`, which the
/// remainder estimate already carries.
fn near_total(n: &NearPart) -> Estimate {
    let mut v = n.remainder.value;
    for (_, _, t) in &n.pole_terms {
        v += *t;
    }
    Estimate { value: v, error: n.remainder.error }
}

fn far_part(
    surface: &Surface,
    u: SurfacePoint,
    mean: &SphericalMean,
    s: Complex64,
    tol: f64,
) -> Result<Estimate, BetaError> {
    weighted_point_integral(surface, u, s, RadialWeight::OutsideCutoff(mean.cutoff()), tol)
}

/// Continued `B^u(s)` with explicit subtraction depth (`None` = minimal).
pub fn beta_point_continued(
    surface: &Surface,
    u: SurfacePoint,
    s: Complex64,
    depth: Option<usize>,
    opts: &ContinuationOptions,
) -> Result<MeromorphicResult, BetaError> {
    crate::special::check_finite(s)?;
    let k = depth.unwrap_or_else(|| default_depth(s));
    if s.re <= -2.0 - k as f64 {
        return Err(BetaError::DepthTooShallow { depth: k, s });
    }
    let (pole, dist) = nearest_pole(s);
    let mut result = MeromorphicResult {
        value: None,
        error_estimate: f64::NAN,
        nearest_pole: Some(pole),
        distance_to_pole: dist,
        is_finite_part: false,
        depth: k,
        cutoff_radius: f64::NAN,
    };
    let mean = SphericalMean::new(surface, u, opts.cutoff_radius, opts.circle_nodes)?;
    result.cutoff_radius = mean.cutoff().radius;
    if dist < POLE_GUARD {
        return Ok(result);
    }
    let near = near_total(&near_part(&mean, s, k, opts.tol)?);
    // The far part is of the size of the pole terms; ask for enough digits
    // that it does not dominate the final error.
    let far = far_part(surface, u, &mean, s, (1e-3 * opts.tol).max(1e-12))?;
    let total = near + far;
    result.value = Some(total.value);
    result.error_estimate = total.error;
    Ok(result)
}

fn continued_estimate(
    surface: &Surface,
    u: SurfacePoint,
    s: Complex64,
    opts: &ContinuationOptions,
) -> Result<Estimate, BetaError> {
    let r = beta_point_continued(surface, u, s, None, opts)?;
    match r.value {
        Some(value) => Ok(Estimate { value, error: r.error_estimate }),
        None => Err(BetaError::NearPole { s, pole: r.nearest_pole.unwrap_or(f64::NAN) }),
    }
}

fn check_pole_guard(s: Complex64) -> Result<(), BetaError> {
    let (pole, dist) = nearest_pole(s);
    if dist < POLE_GUARD {
        return Err(BetaError::NearPole { s, pole });
    }
    Ok(())
}

/// Continued `B_M(s)` of a closed surface, refining the outer quadrature
/// from `opts.outer_level` until two levels agree to `opts.tol`.
pub fn beta_global_continued(
    surface: &Surface,
    s: Complex64,
    opts: &ContinuationOptions,
) -> Result<Estimate, BetaError> {
    if !surface.closed {
        return Err(BetaError::NotClosed);
    }
    check_pole_guard(s)?;
    outer_converged(surface, opts.tol, opts.outer_level, opts.outer_level + 3, |u| {
        continued_estimate(surface, u, s, opts)
    })
    .map(|(e, _)| e)
}

/// Continued `B_M(s)` at one fixed outer level; also valid with boundary.
pub fn beta_global_continued_at_level(
    surface: &Surface,
    s: Complex64,
    opts: &ContinuationOptions,
    level: u32,
) -> Result<Estimate, BetaError> {
    check_pole_guard(s)?;
    super::direct::outer_sum(surface, level, |u| continued_estimate(surface, u, s, opts))
}

/// `Res_{s=pole} B^u = S_j(pole)`, `j = −2 − pole`.
pub fn residue_numeric(
    surface: &Surface,
    u: SurfacePoint,
    pole: i32,
    opts: &ContinuationOptions,
) -> Result<Estimate, BetaError> {
    let j = pole_order(pole)?;
    if j == 0 {
        return Ok(Estimate::exact(Complex64::new(std::f64::consts::TAU, 0.0)));
    }
    let mean = SphericalMean::new(surface, u, opts.cutoff_radius, opts.circle_nodes)?;
    mean.taylor_coefficient(j, Complex64::new(pole as f64, 0.0))
}

pub(crate) fn pole_order(pole: i32) -> Result<usize, BetaError> {
    match pole {
        -2 | -4 | -6 => Ok((-2 - pole) as usize),
        _ => Err(BetaError::InvalidOption(format!("pole must be one of -2, -4, -6, got {pole}"))),
    }
}

/// Finite part and residue of `B^u` at a pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FinitePart {
    pub value: Estimate,
    pub residue: Estimate,
}

/// `lim_{s→pole} (B^u(s) − res/(s − pole))`.
///
/// Every piece of the continuation formula is regular at the pole except
/// `S_j(s) r0^{s−pole}/(s − pole)`, whose finite part is
/// `S_j'(pole) + S_j(pole)·ln r0`.
pub fn finite_part_at_pole(
    surface: &Surface,
    u: SurfacePoint,
    pole: i32,
    opts: &ContinuationOptions,
) -> Result<FinitePart, BetaError> {
    let j0 = pole_order(pole)?;
    let s = Complex64::new(pole as f64, 0.0);
    let mean = SphericalMean::new(surface, u, opts.cutoff_radius, opts.circle_nodes)?;
    let r0 = mean.cutoff().radius;
    let near = near_part(&mean, s, j0 + 2, opts.tol)?;
    let mut value = near.remainder;
    let mut residue = Estimate::exact(Complex64::new(0.0, 0.0));
    for (j, c, term) in &near.pole_terms {
        if *j == j0 {
            residue = *c;
            let deriv = s_derivative(&mean, j0, s)?;
            value.value += deriv.value + c.value * r0.ln();
            value.error += deriv.error + c.error * r0.ln().abs();
        } else {
            value.value += *term;
        }
    }
    let far = far_part(surface, u, &mean, s, (1e-3 * opts.tol).max(1e-12))?;
    Ok(FinitePart { value: value + far, residue })
}

/// `d/ds S_j(s)` by central differences with steps `δ`, `δ/2` and one
/// Richardson level.
fn s_derivative(mean: &SphericalMean, j: usize, s: Complex64) -> Result<Estimate, BetaError> {
    if j == 0 {
        return Ok(Estimate::exact(Complex64::new(0.0, 0.0)));
    }
    let delta = 1e-3;
    let mut samples = Vec::new();
    let mut noise = 0.0;
    for h in [delta, 0.5 * delta] {
        let a = mean.taylor_coefficient(j, s + h)?;
        let b = mean.taylor_coefficient(j, s - h)?;
        samples.push((a.value - b.value) / (2.0 * h));
        noise = (a.error + b.error) / (2.0 * h);
    }
    let t = RichardsonTable::new(&samples, 2);
    Ok(Estimate { value: t.best(), error: t.error_estimate() + noise })
}

/// Global residue `∫_M Res B^u dA` from the closed-form pointwise residues.
pub fn global_residue(surface: &Surface, pole: i32, tol: f64) -> Result<Estimate, BetaError> {
    pole_order(pole)?;
    if !surface.closed {
        return Err(BetaError::NotClosed);
    }
    let at_level = |level: u32| -> Result<f64, BetaError> {
        let mut terms = Vec::new();
        for n in quadrature_nodes(surface, level) {
            let (view, q) = surface.evaluation_view(n.point())?;
            let (_, jet) = extract_jet(&view, q)?;
            let r = pointwise_residues_closed_form(&jet).at_pole(pole).expect("validated pole");
            terms.push(Complex64::new(r * n.weight, 0.0));
        }
        Ok(crate::quadrature::compensated_sum(terms).re)
    };
    let mut prev = at_level(2)?;
    for level in 3..=6 {
        let cur = at_level(level)?;
        let diff = (cur - prev).abs();
        if diff <= tol * cur.abs().max(1.0) {
            return Ok(Estimate { value: Complex64::new(cur, 0.0), error: diff });
        }
        prev = cur;
    }
    Err(BetaError::ToleranceNotReached { requested: tol, achieved: f64::NAN })
}

/// Base-point weight for the Möbius energy.
///
/// On a surface with boundary the finite part at `u` grows like the inverse
/// square of the distance `d` to the edge, so the unweighted outer integral
/// diverges. There each base point carries the smooth cutoff `χ(ρ − d)` of
/// radius `ρ` = half the domain size: 1 where `d ≥ ρ/2`, vanishing to
/// infinite order at the edge. Closed surfaces get weight 1.
pub fn base_point_weight(surface: &Surface, u: SurfacePoint) -> Result<f64, BetaError> {
    if surface.closed {
        return Ok(1.0);
    }
    let domain = surface.chart(u.chart)?.domain();
    let edge = domain.distance_to_edge(u.param);
    if !edge.is_finite() {
        return Ok(1.0);
    }
    let rho = 0.5 * domain.scale();
    Ok(CutoffSpec::new(rho).weight((rho - edge).max(0.0)))
}

/// Weights below this are dropped: the finite part grows only like an
/// inverse power of the edge distance while the weight decays like
/// `exp(−ρ/d)`.
const NEGLIGIBLE_WEIGHT: f64 = 1e-20;

fn weighted_finite_part(surface: &Surface, u: SurfacePoint, opts: &ContinuationOptions) -> Result<Estimate, BetaError> {
    let w = base_point_weight(surface, u)?;
    if w < NEGLIGIBLE_WEIGHT {
        return Ok(Estimate::exact(Complex64::new(0.0, 0.0)));
    }
    let fp = finite_part_at_pole(surface, u, -4, opts)?.value;
    Ok(Estimate { value: fp.value * w, error: fp.error * w })
}

/// Renormalized Möbius energy `∫_M w(u) FP_{s=−4} B^u dA(u)`, with
/// `w` from [`base_point_weight`], refining the outer quadrature until two
/// levels agree to `opts.tol`.
pub fn mobius_energy(surface: &Surface, opts: &ContinuationOptions) -> Result<Estimate, BetaError> {
    outer_converged(surface, opts.tol, opts.outer_level.saturating_sub(1), opts.outer_level + 2, |u| {
        weighted_finite_part(surface, u, opts)
    })
    .map(|(e, _)| e)
}

/// [`mobius_energy`] at one fixed outer level.
pub fn mobius_energy_at_level(
    surface: &Surface,
    opts: &ContinuationOptions,
    level: u32,
) -> Result<Estimate, BetaError> {
    super::direct::outer_sum(surface, level, |u| weighted_finite_part(surface, u, opts))
}
