use num_complex::Complex64;
use surface_beta::special::{euler_beta, gamma, log_gamma, unit_sphere_area};

fn main() {
    let z = |re: f64, im: f64| Complex64::new(re, im);

    println!("Gamma(5)         = {}", gamma(z(5.0, 0.0)).unwrap());
    println!("Gamma(1/2)^2     = {} (pi = {})", gamma(z(0.5, 0.0)).unwrap().powi(2), std::f64::consts::PI);
    println!("Gamma(-2.5)      = {}", gamma(z(-2.5, 0.0)).unwrap());
    println!("ln Gamma(3+40i)  = {}", log_gamma(z(3.0, 40.0)).unwrap());
    println!("B(1/2, 1/2)      = {}", euler_beta(z(0.5, 0.0), z(0.5, 0.0)).unwrap());
    println!("B(-1.5+2i, 1)    = {}", euler_beta(z(-1.5, 2.0), z(1.0, 0.0)).unwrap());

    // Poles are reported rather than returned as infinities.
    match gamma(z(-3.0, 0.0)) {
        Ok(v) => println!("Gamma(-3) = {v}"),
        Err(e) => println!("Gamma(-3): {e}"),
    }

    for n in 0..=4 {
        println!("area of the unit {n}-sphere = {:.12}", unit_sphere_area(n));
    }
}
