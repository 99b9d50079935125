//! Fourth-order jets of a surface over its tangent plane, their curvature
//! invariants, and the pointwise residues built from them.

use surface_beta::jet::{curvature_invariants, extract_jet, pointwise_residues_closed_form, residue_cross_check};
use surface_beta::surface::{make_builtin, torus_outer_equator, SurfaceKind, SurfacePoint};

fn main() {
    let torus = make_builtin(&SurfaceKind::Torus { major: 2.0, minor: 1.0 }).unwrap();
    for (name, pt) in [("outer equator", torus_outer_equator(0.0)), ("generic point", SurfacePoint::new(0, 0.7, 2.2))] {
        let (frame, jet) = extract_jet(&torus, pt).unwrap();
        println!("{name}");
        println!("  frame origin {:?}, normal {:?}", frame.origin.as_slice(), frame.normal.as_slice());
        println!("  jet b c d = {:?}", jet.to_array());

        let h = curvature_invariants(&jet);
        println!("  kappa1 {:.9} kappa2 {:.9} K {:.9}", h.kappa1, h.kappa2, h.gauss);

        let res = pointwise_residues_closed_form(&jet);
        println!("  residues at -2, -4, -6: {:.12} {:.12} {:.12}", res.res2, res.res4, res.res6);

        let cc = residue_cross_check(&jet);
        println!("  -4 residue vs invariant form: {:.12} vs {:.12} (ratio {:?})", cc.res4_bcd, cc.res4_h, cc.ratio4);
    }
}
