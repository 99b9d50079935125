//! Convergent region: B^u(s) and B_M(s) by polar quadrature, compared with
//! the closed forms on the round sphere.

use num_complex::Complex64;
use surface_beta::beta::oracle::sphere2;
use surface_beta::beta::{beta_global_direct, beta_point_direct};
use surface_beta::surface::{make_builtin, spherical_point, SurfaceKind, SurfacePoint};

fn main() {
    let sphere = make_builtin(&SurfaceKind::Sphere { radius: 1.0 }).unwrap();
    let u = spherical_point(1.1, 0.4);
    for s in [Complex64::new(1.0, 0.0), Complex64::new(-1.5, 0.0), Complex64::new(-0.5, 3.0)] {
        let got = beta_point_direct(&sphere, u, s, 1e-10).unwrap();
        let want = sphere2(1.0, s).unwrap().0;
        println!("sphere B^u({s}) = {:.12} +- {:.1e}, closed form {:.12}", got.value, got.error, want);
    }

    let got = beta_global_direct(&sphere, Complex64::new(0.0, 0.0), 1e-8).unwrap();
    println!("sphere B_M(0) = {:.10}, 16 pi^2 = {:.10}", got.value.re, 16.0 * std::f64::consts::PI.powi(2));

    let torus = make_builtin(&SurfaceKind::Torus { major: 2.0, minor: 1.0 }).unwrap();
    let got = beta_point_direct(&torus, SurfacePoint::new(0, 0.0, 0.0), Complex64::new(-1.0, 0.0), 1e-10).unwrap();
    println!("torus B^u(-1) on the outer equator = {:.12} +- {:.1e}", got.value.re, got.error);
}
