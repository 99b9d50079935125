//! Structural properties of the beta evaluators beyond the numbered
//! acceptance checks.

use std::f64::consts::PI;

use nalgebra::{Rotation3, Vector3};
use num_complex::Complex64;
use surface_beta::beta::oracle::sphere2;
use surface_beta::beta::{
    beta_global_continued_at_level, beta_point_continued, beta_point_direct, finite_part_at_pole, mobius_energy,
    residue_numeric, ContinuationOptions,
};
use surface_beta::surface::{
    make_builtin, polynomial, spherical_point, torus_outer_equator, Surface, SurfaceKind, SurfacePoint,
};

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn torus() -> Surface {
    make_builtin(&SurfaceKind::Torus { major: 2.0, minor: 1.0 }).unwrap()
}

fn sphere(r: f64) -> Surface {
    make_builtin(&SurfaceKind::Sphere { radius: r }).unwrap()
}

fn continued(surface: &Surface, u: SurfacePoint, s: Complex64) -> Complex64 {
    beta_point_continued(surface, u, s, None, &ContinuationOptions::default()).unwrap().value.unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn rigid_motions_leave_values_unchanged() {
    let t = torus();
    let rot = *Rotation3::from_euler_angles(0.3, -1.1, 2.0).matrix();
    let moved = t.transformed(1.0, rot, Vector3::new(0.5, -2.0, 3.0));
    let u = SurfacePoint::new(0, 0.7, 2.2);
    let tol = 1e-10;
    for s in [c(-1.0), Complex64::new(-0.5, 1.5)] {
        let a = beta_point_direct(&t, u, s, tol).unwrap().value;
        let b = beta_point_direct(&moved, u, s, tol).unwrap().value;
        assert!(rel(a, b) < 1e-8, "{s}: {a} vs {b}");
    }
    let a = continued(&t, u, c(-3.0));
    let b = continued(&moved, u, c(-3.0));
    assert!(rel(a, b) < 1e-8, "-3: {a} vs {b}");
    // four subtracted orders carry a looser, but reported, error
    let opts = ContinuationOptions::default();
    let a = beta_point_continued(&t, u, c(-4.5), None, &opts).unwrap();
    let b = beta_point_continued(&moved, u, c(-4.5), None, &opts).unwrap();
    let gap = (a.value.unwrap() - b.value.unwrap()).norm();
    assert!(gap <= a.error_estimate + b.error_estimate, "-4.5: gap {gap}, estimates {a:?} {b:?}");
    let (a, b) = (residue_numeric(&t, u, -4, &opts).unwrap(), residue_numeric(&moved, u, -4, &opts).unwrap());
    assert!(rel(a.value, b.value) < 1e-8);
}

#[test]
fn direct_and_continued_agree_where_both_apply() {
    let cases = [(sphere(1.0), spherical_point(1.2, 0.3)), (torus(), SurfacePoint::new(0, 2.0, 0.5))];
    for (surface, u) in &cases {
        for s in [c(-1.89), c(-1.8), c(-1.2), c(-0.5), Complex64::new(-1.0, 2.0)] {
            let tol = 1e-8;
            let d = beta_point_direct(surface, *u, s, tol).unwrap().value;
            let k = continued(surface, *u, s);
            assert!(rel(d, k) < tol.max(1e-5), "{} at {s}: {d} vs {k}", surface.label);
        }
    }
}

#[test]
fn continued_sphere_matches_closed_form_off_the_real_axis() {
    let s1 = sphere(1.0);
    let u = spherical_point(0.9, 4.0);
    for s in [Complex64::new(-3.0, 1.0), Complex64::new(-2.5, -0.7)] {
        let want = sphere2(1.0, s).unwrap().0;
        assert!(rel(continued(&s1, u, s), want) < 1e-5, "{s}");
    }
    let s = Complex64::new(-5.5, 0.3);
    let want = sphere2(1.0, s).unwrap().0;
    let got = beta_point_continued(&s1, u, s, None, &ContinuationOptions::default()).unwrap();
    let gap = (got.value.unwrap() - want).norm();
    assert!(gap <= got.error_estimate && gap < 5e-3 * want.norm(), "{s}: gap {gap}, {got:?}");
}

#[test]
fn no_pole_at_minus_three() {
    let t = torus();
    let u = torus_outer_equator(0.0);
    let centre = continued(&t, u, c(-3.0));
    for m in 2..=4 {
        let eps = 10f64.powi(-m);
        for side in [eps, -eps] {
            let v = continued(&t, u, c(-3.0 + side));
            // bounded near -3 and continuous through it
            assert!((v - centre).norm() < 5.0 * eps, "m={m}: {v} vs {centre}");
            if m >= 3 {
                assert!((v * side).norm() <= 1e-3);
            }
        }
    }
}

#[test]
fn poles_are_simple_with_the_numeric_residue() {
    let t = torus();
    let u = torus_outer_equator(0.0);
    let opts = ContinuationOptions::default();
    for pole in [-4, -6] {
        let res = residue_numeric(&t, u, pole, &opts).unwrap();
        let p = pole as f64;
        let mut previous = f64::INFINITY;
        for delta in [2e-2, 5e-3] {
            let above = continued(&t, u, c(p + delta)) * delta;
            let below = continued(&t, u, c(p - delta)) * (-delta);
            let limit = 0.5 * (above + below);
            let gap = (limit - res.value).norm();
            assert!(gap < previous, "pole {pole}: no convergence at delta {delta}");
            previous = gap;
        }
        assert!(previous < 1e-3 * res.value.norm() + 2.0 * res.error, "pole {pole}: gap {previous}");
    }
}

#[test]
fn finite_part_of_flat_disk_centre() {
    // B^u(s) = −∫_{|v| > R} |v|^s dA for the flat disk, so FP at −4 is −π/R².
    let radius = 0.5;
    let flat = make_builtin(&SurfaceKind::GraphPatch { poly: polynomial(&[]).unwrap(), radius }).unwrap();
    let fp = finite_part_at_pole(&flat, SurfacePoint::new(0, 0.0, 0.0), -4, &ContinuationOptions::default()).unwrap();
    // the residue vanishes up to difference-quotient noise
    assert!(fp.residue.value.norm() < 1e-9, "{:?}", fp.residue);
    assert!((fp.value.value.re + PI / (radius * radius)).abs() < 1e-7, "{:?}", fp.value);
}

#[test]
fn finite_part_on_the_torus_is_cutoff_independent() {
    let t = torus();
    let u = SurfacePoint::new(0, 1.1, 0.4);
    let base = ContinuationOptions::default();
    let a = finite_part_at_pole(&t, u, -4, &base).unwrap();
    let b = finite_part_at_pole(&t, u, -4, &ContinuationOptions { cutoff_radius: Some(0.04), ..base }).unwrap();
    let bound = 2.0 * (a.value.error + b.value.error);
    assert!((a.value.value - b.value.value).norm() <= bound.max(1e-6), "{:?} vs {:?}", a.value, b.value);
}

#[test]
fn global_continued_sphere() {
    // the pointwise value is constant, so level 1 integrates it exactly
    let s1 = sphere(1.0);
    let got = beta_global_continued_at_level(&s1, c(-3.0), &ContinuationOptions::default(), 1).unwrap();
    let want = sphere2(1.0, c(-3.0)).unwrap().1;
    assert!(rel(got.value, want) < 1e-8, "{got:?} vs {want}");
}

#[test]
fn weighted_moebius_energy_of_flat_disk_converges() {
    let flat = make_builtin(&SurfaceKind::GraphPatch { poly: polynomial(&[]).unwrap(), radius: 0.5 }).unwrap();
    let tol = 1e-3;
    let opts = ContinuationOptions { tol, outer_level: 2, ..Default::default() };
    let e = mobius_energy(&flat, &opts).unwrap();
    assert!(e.value.re.is_finite() && e.value.im == 0.0);
    assert!(e.error <= 2.0 * tol * e.value.norm(), "{e:?}");
}
