//! Numerical residues against the jet formulas, and finite parts at -4.

use surface_beta::beta::{finite_part_at_pole, residue_numeric, ContinuationOptions};
use surface_beta::jet::{extract_jet, pointwise_residues_closed_form};
use surface_beta::surface::{make_builtin, SurfaceKind, SurfacePoint};

fn main() {
    let opts = ContinuationOptions::default();
    let ellipsoid = make_builtin(&SurfaceKind::Ellipsoid { a: 1.0, b: 1.3, c: 0.7 }).unwrap();
    let u = SurfacePoint::new(0, 1.0, 0.6);

    let (_, jet) = extract_jet(&ellipsoid, u).unwrap();
    let closed = pointwise_residues_closed_form(&jet);
    for pole in [-2, -4, -6] {
        let numeric = residue_numeric(&ellipsoid, u, pole, &opts).unwrap();
        println!(
            "Res_{pole}: numeric {:+.10} (+- {:.1e}), from the jet {:+.10}",
            numeric.value.re,
            numeric.error,
            closed.at_pole(pole).unwrap()
        );
    }

    // The finite part does not depend on the cutoff used to compute it.
    for radius in [None, Some(0.05)] {
        let fp =
            finite_part_at_pole(&ellipsoid, u, -4, &ContinuationOptions { cutoff_radius: radius, ..opts }).unwrap();
        println!("FP_-4 with cutoff {radius:?}: {:.10} (+- {:.1e})", fp.value.value.re, fp.value.error);
    }
}
