//! Renormalised Moebius energy of closed surfaces and of a flat disk.

use surface_beta::beta::{mobius_energy, mobius_energy_at_level, ContinuationOptions};
use surface_beta::surface::{make_builtin, polynomial, SurfaceKind};

fn main() {
    let opts = ContinuationOptions { tol: 1e-4, ..Default::default() };
    for radius in [1.0, 2.0] {
        let sphere = make_builtin(&SurfaceKind::Sphere { radius }).unwrap();
        let e = mobius_energy(&sphere, &opts).unwrap();
        println!(
            "sphere r={radius}: {:.8} (+- {:.1e}); -pi^2 = {:.8}",
            e.value.re,
            e.error,
            -std::f64::consts::PI.powi(2)
        );
    }

    let ellipsoid = make_builtin(&SurfaceKind::Ellipsoid { a: 1.0, b: 1.2, c: 0.9 }).unwrap();
    let e = mobius_energy(&ellipsoid, &opts).unwrap();
    println!("ellipsoid (1, 1.2, 0.9): {:.8} (+- {:.1e})", e.value.re, e.error);

    // Patches use a base-point weight that fades out towards the edge.
    let disk = make_builtin(&SurfaceKind::GraphPatch { poly: polynomial(&[]).unwrap(), radius: 0.5 }).unwrap();
    for level in 0..=2 {
        let e = mobius_energy_at_level(&disk, &opts, level).unwrap();
        println!("flat disk, outer level {level}: {:.8}", e.value.re);
    }
}
