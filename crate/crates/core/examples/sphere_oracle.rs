//! Closed forms on round spheres of any dimension.

use num_complex::Complex64;
use surface_beta::beta::oracle::{sphere2, sphere_n_quadrature, sphere_n_variants};

fn main() {
    for s in [0.0, -1.0, -2.5, -3.0] {
        let (point, global) = sphere2(1.0, Complex64::new(s, 0.0)).unwrap();
        println!("S^2, s = {s:4}: B^u = {:+.12}, B_M = {:+.12}", point.re, global.re);
    }

    // For n-spheres the closed form is checked against the defining integral.
    for n in 1..=4 {
        let s = Complex64::new(0.3, 0.0);
        let v = sphere_n_variants(n, 1.0, s).unwrap();
        let q = sphere_n_quadrature(n, 1.0, s, 1e-12).unwrap();
        println!(
            "S^{n}, s = 0.3: quadrature {:.12}, 2^(s+n) form {:.12}, 2^(s+n-1) form {:.12}",
            q.re, v.power_n.re, v.power_n_minus_1.re
        );
    }
}
