//! Truncated bivariate power series: products, composition, real powers
//! and inversion of a local diffeomorphism.

use surface_beta::series::{invert_map, TruncatedSeries2};

fn main() {
    let x = TruncatedSeries2::x();
    let y = TruncatedSeries2::y();

    // a graph height with a bit of everything up to degree four
    let f = x * x * 0.5 + x * y * 0.2 - y * y * 0.3 + x * x * x * 0.1 + y * y * y * y * 0.05;
    println!("f        = {f:?}");
    println!("f(0.1, -0.2) = {:.12}", f.eval(0.1, -0.2));

    // (1 + f)^{-1/2} truncated at degree four
    let inv_sqrt = (TruncatedSeries2::constant(1.0) + f).powf(-0.5);
    println!("(1+f)^(-1/2) = {inv_sqrt:?}");

    // compose with a near-identity map and invert that map
    let u = x + y * y * 0.3 - x * y * 0.1;
    let v = y - x * x * 0.2;
    let composed = f.compose2(&u, &v).expect("no constant term");
    println!("f(u(x,y), v(x,y)) = {composed:?}");

    let (ui, vi) = invert_map(&u, &v).expect("invertible linear part");
    let round_x = u.compose2(&ui, &vi).expect("composable");
    let round_y = v.compose2(&ui, &vi).expect("composable");
    let defect = (round_x - x).max_abs().max((round_y - y).max_abs());
    println!("inverse round trip defect = {defect:.2e}");
}
