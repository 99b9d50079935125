//! The acceptance suite: fifteen numbered checks against closed forms,
//! structural identities and self-convergence.
//!
//! Two checks settle coefficient questions numerically and record the
//! outcome in [`Verdicts`]: the normalisation of the `s = −4` residue
//! polynomial (check 6) and the power of two in the `Sⁿ` closed form
//! (check 13). The residue polynomial and the Euler beta function enter
//! through [`Probes`] so that deliberately broken versions can be swapped in.

use std::error::Error;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::beta::oracle::{sphere2, sphere_n_quadrature, sphere_n_variants_with, BetaFn};
use crate::beta::{
    beta_global_direct, beta_point_continued, beta_point_direct, mobius_energy, residue_numeric, ContinuationOptions,
};
use crate::jet::{
    curvature_invariants, extract_jet, extract_jet_in_frame, pointwise_residues_closed_form, res4_invariant_form,
    res4_polynomial, res6_bracket, JetCoefficients,
};
use crate::special::euler_beta;
use crate::surface::{make_builtin, spherical_point, torus_outer_equator, Surface, SurfaceKind, SurfacePoint};

pub type Res4Fn = fn(&JetCoefficients) -> f64;

/// Replaceable ingredients of the suite.
#[derive(Clone, Copy)]
pub struct Probes {
    pub res4: Res4Fn,
    pub euler_beta: BetaFn,
}

impl Default for Probes {
    fn default() -> Self {
        Self { res4: res4_polynomial, euler_beta }
    }
}

/// Numbered checks with one-line titles.
pub const CHECKS: [(u32, &str); 15] = [
    (1, "sphere global direct at s = 0"),
    (2, "sphere pointwise direct at s = -1.5"),
    (3, "sphere continuation at s = -3 and s = -5"),
    (4, "residue at -2 on sphere, torus, ellipsoid"),
    (5, "residue at -4 vanishes on spheres"),
    (6, "normalisation of the -4 residue polynomial"),
    (7, "-6 residue bracket cancels on sphere jets"),
    (8, "no pole at s = -3 on the torus"),
    (9, "scaling law on the torus at s = -1"),
    (10, "jet round trip on random graph patches"),
    (11, "flip and rotation invariance of residues"),
    (12, "continuation independent of cutoff radius"),
    (13, "power of two in the S^n closed form"),
    (14, "Moebius energy of spheres"),
    (15, "Euler beta values and identities"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub id: u32,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// Outcomes of the two adjudicating checks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Verdicts {
    pub residue_normalisation: Option<String>,
    pub sphere_power: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    pub verdicts: Verdicts,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

type Outcome = Result<(bool, String), Box<dyn Error>>;

/// Run the listed checks in order.
pub fn run_checks(ids: &[u32], probes: &Probes) -> VerifyReport {
    let mut report = VerifyReport::default();
    for &id in ids {
        let check = run_check(id, probes, &mut report.verdicts);
        report.checks.push(check);
    }
    report
}

pub fn run_all(probes: &Probes) -> VerifyReport {
    let ids: Vec<u32> = CHECKS.iter().map(|c| c.0).collect();
    run_checks(&ids, probes)
}

/// Run one check; errors from the evaluators count as failures.
pub fn run_check(id: u32, probes: &Probes, verdicts: &mut Verdicts) -> CheckResult {
    let title = CHECKS.iter().find(|c| c.0 == id).map_or("unknown check", |c| c.1);
    let start = Instant::now();
    let outcome: Outcome = match id {
        1 => sphere_global_direct(),
        2 => sphere_point_direct(),
        3 => sphere_continuation(start),
        4 => residue_minus_two(),
        5 => residue_minus_four_sphere(),
        6 => residue_normalisation(probes, verdicts),
        7 => bracket_cancels_on_spheres(),
        8 => odd_regularity(),
        9 => scaling_law(),
        10 => jet_round_trip(),
        11 => frame_invariance(),
        12 => cutoff_independence(),
        13 => sphere_power(probes, verdicts),
        14 => mobius_spheres(),
        15 => beta_identities(probes),
        _ => Err(format!("no check numbered {id}").into()),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CheckResult { id, title, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn sphere(r: f64) -> Result<Surface, Box<dyn Error>> {
    Ok(make_builtin(&SurfaceKind::Sphere { radius: r })?)
}

fn torus() -> Result<Surface, Box<dyn Error>> {
    Ok(make_builtin(&SurfaceKind::Torus { major: 2.0, minor: 1.0 })?)
}

fn ellipsoid() -> Result<Surface, Box<dyn Error>> {
    Ok(make_builtin(&SurfaceKind::Ellipsoid { a: 1.0, b: 1.2, c: 0.8 })?)
}

fn continued_value(
    surface: &Surface,
    u: SurfacePoint,
    s: f64,
    opts: &ContinuationOptions,
) -> Result<(Complex64, f64), Box<dyn Error>> {
    let r = beta_point_continued(surface, u, real(s), None, opts)?;
    let v = r.value.ok_or_else(|| format!("s = {s} falls inside the pole guard"))?;
    Ok((v, r.error_estimate))
}

fn sphere_global_direct() -> Outcome {
    let got = beta_global_direct(&sphere(1.0)?, real(0.0), 1e-8)?;
    let want = 16.0 * PI * PI;
    let e = rel(got.value, real(want));
    Ok((e < 1e-6, format!("B = {:.12}, expected 16 pi^2 = {want:.12}, rel err {e:.2e}", got.value.re)))
}

fn sphere_point_direct() -> Outcome {
    let got = beta_point_direct(&sphere(1.0)?, spherical_point(1.1, 0.4), real(-1.5), 1e-9)?;
    let want = 2f64.powf(1.5) * PI / 0.5;
    let e = rel(got.value, real(want));
    Ok((e < 1e-6, format!("B^u = {:.12}, expected {want:.12}, rel err {e:.2e}", got.value.re)))
}

fn sphere_continuation(start: Instant) -> Outcome {
    let s1 = sphere(1.0)?;
    let u = spherical_point(1.3, 0.8);
    let opts = ContinuationOptions::default();
    let (v3, _) = continued_value(&s1, u, -3.0, &opts)?;
    let (v5, _) = continued_value(&s1, u, -5.0, &opts)?;
    let (e3, e5) = (rel(v3, real(-PI)), rel(v5, real(-PI / 12.0)));
    let secs = start.elapsed().as_secs_f64();
    let ok = e3 < 1e-3 && e5 < 5e-3 && secs <= 300.0;
    Ok((ok, format!("s=-3: {:.10} (rel {e3:.2e}); s=-5: {:.10} (rel {e5:.2e}); {secs:.1}s", v3.re, v5.re)))
}

fn residue_minus_two() -> Outcome {
    let cases = [
        (sphere(1.0)?, [spherical_point(0.7, 0.2), spherical_point(1.6, 2.5), spherical_point(2.4, 5.0)]),
        (torus()?, [torus_outer_equator(0.0), SurfacePoint::new(0, 1.3, 2.0), SurfacePoint::new(0, 3.0, 4.5)]),
        (ellipsoid()?, [spherical_point(0.5, 0.3), spherical_point(1.4, 1.9), spherical_point(2.6, 4.1)]),
    ];
    let opts = ContinuationOptions::default();
    let limit_opts = ContinuationOptions { tol: 1e-7, ..opts };
    let delta = 2e-3;
    let mut worst_direct: f64 = 0.0;
    let mut worst_limit: f64 = 0.0;
    for (surface, points) in &cases {
        for &u in points {
            let r = residue_numeric(surface, u, -2, &opts)?;
            worst_direct = worst_direct.max(rel(r.value, real(TAU)));
            // (s + 2) B^u(s) averaged over s = −2 ± δ approaches the residue
            // with an O(δ²) error.
            let above = beta_point_continued(surface, u, real(-2.0 + delta), Some(2), &limit_opts)?;
            let below = beta_point_continued(surface, u, real(-2.0 - delta), Some(2), &limit_opts)?;
            let (a, b) = (above.value.ok_or("guard")?, below.value.ok_or("guard")?);
            let limit = 0.5 * (a * delta - b * delta);
            worst_limit = worst_limit.max(rel(limit, real(TAU)));
        }
    }
    Ok((
        worst_direct < 1e-4 && worst_limit < 1e-4,
        format!("9 points: max rel err of S(0,-2) {worst_direct:.2e}, of (s+2)B^u near -2 {worst_limit:.2e}"),
    ))
}

fn residue_minus_four_sphere() -> Outcome {
    let opts = ContinuationOptions::default();
    let mut worst: f64 = 0.0;
    for r in [1.0, 2.0] {
        let s = sphere(r)?;
        for u in [spherical_point(0.9, 1.0), spherical_point(2.0, 3.7)] {
            worst = worst.max(residue_numeric(&s, u, -4, &opts)?.value.norm());
        }
    }
    Ok((worst < 1e-5, format!("max |Res_-4| over r in {{1, 2}}: {worst:.2e}")))
}

fn residue_normalisation(probes: &Probes, verdicts: &mut Verdicts) -> Outcome {
    let t = torus()?;
    let ell = ellipsoid()?;
    let opts = ContinuationOptions::default();
    let u = torus_outer_equator(0.0);
    let (_, jet) = extract_jet(&t, u)?;
    let numeric = residue_numeric(&t, u, -4, &opts)?.value.re;
    let poly = (probes.res4)(&jet);
    let invariant = res4_invariant_form(&curvature_invariants(&jet));
    let matches = |candidate: f64| ((numeric - candidate) / candidate).abs() < 1e-3;
    let (factor, label) = match (matches(poly), matches(4.0 * poly)) {
        (true, false) => (1.0, "(pi/2)(b1^2+b2^2+b3^2-2 b1 b3) = (pi/8)(k1-k2)^2"),
        (false, true) => (4.0, "4 x (pi/2)(b1^2+b2^2+b3^2-2 b1 b3), the invariant form"),
        _ => return Ok((false, format!("numeric {numeric:.10} matches neither {poly:.10} nor {:.10}", 4.0 * poly))),
    };
    verdicts.residue_normalisation = Some(format!(
        "Res_-4 B^u = {label}; measured {numeric:.10} vs polynomial {poly:.10} (ratio {:.6}); \
         invariant form gives {invariant:.10} (ratio {:.6})",
        numeric / poly,
        numeric / invariant
    ));
    let further = [
        (&t, SurfacePoint::new(0, 0.6, 1.0)),
        (&t, SurfacePoint::new(0, 1.9, 2.7)),
        (&t, SurfacePoint::new(0, PI, 5.5)),
        (&ell, spherical_point(0.8, 0.4)),
        (&ell, spherical_point(2.2, 2.0)),
    ];
    let mut worst: f64 = 0.0;
    for (surface, p) in further {
        let (_, j) = extract_jet(surface, p)?;
        let h = curvature_invariants(&j);
        if (h.kappa1 - h.kappa2).abs() < 0.05 {
            return Err(format!("test point {p:?} is too close to an umbilic").into());
        }
        let numeric = residue_numeric(surface, p, -4, &opts)?.value.re;
        let closed = factor * (probes.res4)(&j);
        worst = worst.max(((numeric - closed) / closed).abs());
    }
    Ok((
        worst < 1e-3,
        format!("outer equator Res_-4 = {numeric:.10} (factor {factor}); 5 further points max rel err {worst:.2e}"),
    ))
}

fn bracket_cancels_on_spheres() -> Outcome {
    let mut worst: f64 = 0.0;
    for r in [1.0, 2.0] {
        let j = JetCoefficients::sphere(r);
        worst = worst.max(res6_bracket(&j).abs()).max(res6_bracket(&j.negated()).abs());
    }
    Ok((worst < 1e-10, format!("max |bracket| on sphere jets: {worst:.2e}")))
}

fn odd_regularity() -> Outcome {
    let t = torus()?;
    let u = torus_outer_equator(0.0);
    let opts = ContinuationOptions::default();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for eps in [1e-3, -1e-3] {
        let (v, _) = continued_value(&t, u, -3.0 + eps, &opts)?;
        let scaled = (v * eps).norm();
        worst = worst.max(scaled);
        parts.push(format!("s=-3{eps:+e}: B^u={:.8}, |(s+3)B^u|={scaled:.2e}", v.re));
    }
    Ok((worst <= 1e-3, parts.join("; ")))
}

fn scaling_law() -> Outcome {
    let t = torus()?;
    let doubled = t.transformed(2.0, nalgebra::Matrix3::identity(), nalgebra::Vector3::zeros());
    let a = beta_global_direct(&t, real(-1.0), 1e-8)?;
    let b = beta_global_direct(&doubled, real(-1.0), 1e-8)?;
    let e = rel(a.value * 8.0, b.value);
    Ok((e < 1e-6, format!("B_M(-1) = {:.10}, B_2M(-1) = {:.10}, rel err {e:.2e}", a.value.re, b.value.re)))
}

fn jet_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6a65_7431);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let want = JetCoefficients::from_array(std::array::from_fn(|_| rng.gen_range(-1.0..=1.0)));
        let patch = make_builtin(&SurfaceKind::GraphPatch { poly: want.to_series(), radius: 1.0 })?;
        let (_, got) = extract_jet(&patch, SurfacePoint::new(0, 0.0, 0.0))?;
        for (a, b) in got.to_array().iter().zip(want.to_array()) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok((worst < 1e-10, format!("100 random patches, max coefficient error {worst:.2e}")))
}

fn frame_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x726f_7461);
    let t = torus()?;
    let ell = ellipsoid()?;
    let mut flips_exact = true;
    let mut worst_flip_frame: f64 = 0.0;
    let mut worst_rot: f64 = 0.0;
    for (surface, p) in [(&t, SurfacePoint::new(0, 0.8, 1.9)), (&ell, spherical_point(1.2, 0.7))] {
        let (frame, j) = extract_jet(surface, p)?;
        let base = pointwise_residues_closed_form(&j);
        flips_exact &= base == pointwise_residues_closed_form(&j.negated());
        let flipped = pointwise_residues_closed_form(&extract_jet_in_frame(surface, p, &frame.flipped())?);
        worst_flip_frame = worst_flip_frame.max((flipped.res4 - base.res4).abs()).max((flipped.res6 - base.res6).abs());
        for _ in 0..20 {
            let rotated = frame.rotated(rng.gen_range(0.0..TAU));
            let r = pointwise_residues_closed_form(&extract_jet_in_frame(surface, p, &rotated)?);
            worst_rot = worst_rot.max((r.res4 - base.res4).abs()).max((r.res6 - base.res6).abs());
        }
    }
    Ok((
        flips_exact && worst_flip_frame < 1e-12 && worst_rot < 1e-10,
        format!(
            "jet negation bit-exact: {flips_exact}; flipped-frame extraction diff {worst_flip_frame:.2e}; \
             40 rotations max diff {worst_rot:.2e}"
        ),
    ))
}

fn cutoff_independence() -> Outcome {
    let t = torus()?;
    let u = SurfacePoint::new(0, 0.9, 1.3);
    let opts = ContinuationOptions::default();
    let base = beta_point_continued(&t, u, real(-3.0), None, &opts)?;
    let r0 = base.cutoff_radius;
    let half =
        beta_point_continued(&t, u, real(-3.0), None, &ContinuationOptions { cutoff_radius: Some(0.5 * r0), ..opts })?;
    let (a, b) = (base.value.ok_or("guard")?, half.value.ok_or("guard")?);
    let bound = 2.0 * (base.error_estimate + half.error_estimate);
    let diff = (a - b).norm();
    Ok((
        diff <= bound,
        format!("r0 = {r0:.4}: {:.12}; r0/2: {:.12}; |diff| {diff:.2e} vs bound {bound:.2e}", a.re, b.re),
    ))
}

fn sphere_power(probes: &Probes, verdicts: &mut Verdicts) -> Outcome {
    let q = sphere_n_quadrature(3, 1.0, real(0.0), 1e-13)?;
    let want = 2.0 * PI * PI;
    let quad_ok = (q.re - want).abs() < 1e-8;
    let v = sphere_n_variants_with(3, 1.0, real(0.0), probes.euler_beta)?;
    let close = |x: Complex64| (x - q).norm() < 1e-8;
    let (use_minus_one, label) = match (close(v.power_n), close(v.power_n_minus_1)) {
        (true, false) => (false, "2^(s+n)"),
        (false, true) => (true, "2^(s+n-1)"),
        _ => {
            return Ok((
                false,
                format!(
                    "quadrature {:.12} matches neither {:.12} nor {:.12}",
                    q.re, v.power_n.re, v.power_n_minus_1.re
                ),
            ))
        }
    };
    verdicts.sphere_power = Some(format!(
        "S^n closed form carries {label}; at n=3, s=0: integral {:.14}, 2^(s+n) gives {:.14}, 2^(s+n-1) gives {:.14}",
        q.re, v.power_n.re, v.power_n_minus_1.re
    ));
    // The selected variant at n = 2 must coincide with the 2-sphere formula.
    let mut rng = ChaCha8Rng::seed_from_u64(0x7332);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let s = Complex64::new(rng.gen_range(-1.9..3.0), rng.gen_range(-3.0..3.0));
        let r = rng.gen_range(0.5..2.0);
        let v2 = sphere_n_variants_with(2, r, s, probes.euler_beta)?;
        let chosen = if use_minus_one { v2.power_n_minus_1 } else { v2.power_n };
        worst = worst.max(rel(chosen, sphere2(r, s)?.0));
    }
    Ok((
        quad_ok && worst < 1e-12,
        format!("integral - 2 pi^2 = {:.2e}; {label} selected; n=2 reduction max rel err {worst:.2e}", q.re - want),
    ))
}

fn mobius_spheres() -> Outcome {
    let opts = ContinuationOptions { tol: 1e-4, ..Default::default() };
    let want = real(-PI * PI);
    let mut parts = Vec::new();
    let mut ok = true;
    for r in [1.0, 2.0] {
        let e = mobius_energy(&sphere(r)?, &opts)?;
        let err = rel(e.value, want);
        ok &= err < 1e-3;
        parts.push(format!("r={r}: {:.8} (rel {err:.2e})", e.value.re));
    }
    Ok((ok, parts.join("; ")))
}

fn near_pole(z: Complex64) -> bool {
    z.re <= 0.0 && (z.re - z.re.round()).abs() < 1e-3 && z.im.abs() < 1e-3
}

fn beta_identities(probes: &Probes) -> Outcome {
    let beta = probes.euler_beta;
    let e11 = (beta(real(1.0), real(1.0))? - 1.0).norm();
    let ehalf = (beta(real(0.5), real(0.5))? - PI).norm();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6265_7461);
    let mut worst_sym: f64 = 0.0;
    let mut worst_rec: f64 = 0.0;
    let mut trials = 0;
    while trials < 100 {
        let a = Complex64::new(rng.gen_range(-6.0..8.0), rng.gen_range(-6.0..6.0));
        let b = Complex64::new(rng.gen_range(-6.0..8.0), rng.gen_range(-6.0..6.0));
        if [a, b, a + b, a + 1.0, a + b + 1.0].into_iter().any(near_pole) {
            continue;
        }
        trials += 1;
        let ab = beta(a, b)?;
        worst_sym = worst_sym.max(rel(beta(b, a)?, ab));
        worst_rec = worst_rec.max(rel(beta(a + 1.0, b)?, ab * a / (a + b)));
    }
    Ok((
        e11 < 1e-12 && ehalf < 1e-12 && worst_sym < 1e-12 && worst_rec < 1e-12,
        format!(
            "|B(1,1)-1| {e11:.1e}; |B(1/2,1/2)-pi| {ehalf:.1e}; 100 pairs: symmetry {worst_sym:.1e}, recurrence {worst_rec:.1e}"
        ),
    ))
}
