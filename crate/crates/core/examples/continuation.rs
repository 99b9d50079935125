//! Meromorphic continuation of B^u past Re s = -2.

use num_complex::Complex64;
use surface_beta::beta::oracle::sphere2;
use surface_beta::beta::{beta_point_continued, ContinuationOptions};
use surface_beta::surface::{make_builtin, spherical_point, torus_outer_equator, SurfaceKind};

fn main() {
    let opts = ContinuationOptions::default();

    let sphere = make_builtin(&SurfaceKind::Sphere { radius: 1.0 }).unwrap();
    let u = spherical_point(1.3, 0.8);
    for s in [-2.5, -3.0, -3.7, -5.0] {
        let s = Complex64::new(s, 0.0);
        let r = beta_point_continued(&sphere, u, s, None, &opts).unwrap();
        println!(
            "sphere  s = {:5}: {:+.10} (est {:.1e}, depth {}), closed form {:+.10}",
            s.re,
            r.value.unwrap().re,
            r.error_estimate,
            r.depth,
            sphere2(1.0, s).unwrap().0.re
        );
    }

    // On the torus the continued function is regular at -3 and has simple
    // poles at -2, -4 and -6.
    let torus = make_builtin(&SurfaceKind::Torus { major: 2.0, minor: 1.0 }).unwrap();
    let u = torus_outer_equator(0.0);
    for s in [-2.9, -3.0, -3.1, -3.95, -4.0005, -4.0] {
        let s = Complex64::new(s, 0.0);
        let r = beta_point_continued(&torus, u, s, None, &opts).unwrap();
        match r.value {
            Some(v) => println!(
                "torus   s = {:7}: {:+.10} (nearest pole {:?} at {:.4})",
                s.re, v.re, r.nearest_pole, r.distance_to_pole
            ),
            None => println!("torus   s = {:7}: inside the pole guard of {:?}", s.re, r.nearest_pole),
        }
    }
}
