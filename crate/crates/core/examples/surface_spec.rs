//! Reading a surface specification and evaluating through the CLI layer.

use num_complex::Complex64;
use surface_beta::cli::{cmd_eval, cmd_residues, parse_point, Mode, ResidueMethod, RunSettings, SurfaceSpec};

const SPEC: &str = r#"
[surface]
kind = "graph_patch"
radius = 0.5

[polynomial]
c20 = 0.8
c02 = -0.3
c11 = 0.1
c30 = 0.2

[quadrature]
tol = 1e-8

[cutoff]
circle_nodes = 64
"#;

fn main() {
    let spec = SurfaceSpec::parse(SPEC).expect("valid specification");
    let settings = RunSettings::resolve(&spec, None, None).unwrap();
    let centre = parse_point("0,0").unwrap();

    let report = cmd_eval(&spec, Complex64::new(-3.5, 0.0), Some(centre), Mode::Auto, &settings).unwrap();
    println!("{report}\n");
    let report = cmd_residues(&spec, centre, ResidueMethod::Both, &settings).unwrap();
    println!("{report}\n");

    match SurfaceSpec::parse("[surface]\nkind = \"torus\"\nmajor = 2\nminr = 1\n") {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
}
