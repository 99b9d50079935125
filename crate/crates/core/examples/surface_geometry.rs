//! Built-in surfaces: charts, areas and principal curvatures.

use surface_beta::surface::{fundamental_forms, make_builtin, polynomial, SurfaceKind, SurfacePoint};

fn main() {
    let kinds = [
        SurfaceKind::Sphere { radius: 1.5 },
        SurfaceKind::Ellipsoid { a: 1.0, b: 1.3, c: 0.7 },
        SurfaceKind::Torus { major: 2.0, minor: 1.0 },
        SurfaceKind::GraphPatch { poly: polynomial(&[(2, 0, 0.5), (0, 2, -0.25), (2, 1, 0.1)]).unwrap(), radius: 0.4 },
    ];
    for kind in &kinds {
        let surface = make_builtin(kind).expect("valid parameters");
        println!("{} ({} chart(s), closed: {})", surface.label, surface.charts.len(), surface.closed);
        println!("  area at levels 2 and 4: {:.12} {:.12}", surface.area(2), surface.area(4));

        let pt = SurfacePoint::new(0, 0.3, 0.2);
        let chart = surface.chart(pt.chart).unwrap();
        let forms = fundamental_forms(chart, pt.param).unwrap();
        let (k1, k2) = forms.principal_curvatures();
        println!("  at {:?}: position {:?}", pt.param, surface.position(pt).unwrap().as_slice());
        println!("  principal curvatures {k1:.9} {k2:.9}, Gauss {:.9}", k1 * k2);
    }
}
