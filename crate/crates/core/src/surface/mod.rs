//! Parametric surfaces: charts with order-4 derivative access, area
//! densities, fundamental forms and tensor-product quadrature.

mod builtin;
mod chart;

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix2, Matrix3};
use thiserror::Error;

pub use builtin::{GraphChart, PolarAxis, SphericalChart, TorusChart};
pub use chart::{Chart, ChartMap, Domain, EmbeddingJet, FnChart, Vec3};

use crate::quadrature::gauss_legendre_on;
use crate::series::{TruncatedSeries2, MAX_DEGREE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurfaceError {
    #[error("invalid surface parameters: {0}")]
    InvalidParameters(String),
    #[error("immersion fails at {point:?}: coordinate tangents are parallel (|Xu × Xv| = {density:e})")]
    NotImmersed { point: [f64; 2], density: f64 },
    #[error("chart index {0} out of range")]
    NoSuchChart(usize),
    #[error("parameter point {0:?} lies outside its chart domain")]
    OutsideDomain([f64; 2]),
}

/// Built-in surface families.
#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceKind {
    Sphere {
        radius: f64,
    },
    Ellipsoid {
        a: f64,
        b: f64,
        c: f64,
    },
    Torus {
        major: f64,
        minor: f64,
    },
    /// Graph of a polynomial of total degree ≤ 4 over the disk of the given
    /// radius centred at the origin.
    GraphPatch {
        poly: TruncatedSeries2,
        radius: f64,
    },
}

/// A point on a surface, addressed by chart index and chart parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub chart: usize,
    pub param: [f64; 2],
}

impl SurfacePoint {
    pub fn new(chart: usize, u: f64, v: f64) -> Self {
        Self { chart, param: [u, v] }
    }
}

/// A surface covered (up to measure zero) by non-overlapping charts.
#[derive(Debug, Clone)]
pub struct Surface {
    pub label: String,
    pub closed: bool,
    pub charts: Vec<Chart>,
    /// Characteristic length (radius, minor radius, …) used for default step
    /// sizes; transforms rescale it.
    pub length_scale: f64,
}

fn positive(name: &str, x: f64) -> Result<f64, SurfaceError> {
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(SurfaceError::InvalidParameters(format!("{name} must be positive and finite, got {x}")))
    }
}

pub fn make_builtin(kind: &SurfaceKind) -> Result<Surface, SurfaceError> {
    match *kind {
        SurfaceKind::Sphere { radius } => {
            let r = positive("radius", radius)?;
            Ok(Surface {
                label: format!("sphere(r={r})"),
                closed: true,
                charts: vec![Chart::new(SphericalChart { semi_axes: [r; 3], axis: PolarAxis::Z })],
                length_scale: r,
            })
        }
        SurfaceKind::Ellipsoid { a, b, c } => {
            let semi = [positive("a", a)?, positive("b", b)?, positive("c", c)?];
            Ok(Surface {
                label: format!("ellipsoid(a={a}, b={b}, c={c})"),
                closed: true,
                charts: vec![Chart::new(SphericalChart { semi_axes: semi, axis: PolarAxis::Z })],
                length_scale: semi.iter().cloned().fold(f64::INFINITY, f64::min),
            })
        }
        SurfaceKind::Torus { major, minor } => {
            let (big, small) = (positive("major radius", major)?, positive("minor radius", minor)?);
            if small >= big {
                return Err(SurfaceError::InvalidParameters(format!(
                    "torus needs major > minor, got R = {big}, rho = {small}"
                )));
            }
            Ok(Surface {
                label: format!("torus(R={big}, rho={small})"),
                closed: true,
                charts: vec![Chart::new(TorusChart { major: big, minor: small })],
                length_scale: small,
            })
        }
        SurfaceKind::GraphPatch { poly, radius } => {
            let r = positive("cutoff radius", radius)?;
            if poly.coeffs().iter().any(|c| !c.is_finite()) {
                return Err(SurfaceError::InvalidParameters("non-finite polynomial coefficient".into()));
            }
            Ok(Surface {
                label: format!("graph_patch(f = {poly:?}, radius={r})"),
                closed: false,
                charts: vec![Chart::new(GraphChart { poly, radius: r })],
                length_scale: r,
            })
        }
    }
}

impl Surface {
    /// Surface from user charts; derivatives of [`FnChart`]s are numerical.
    pub fn from_charts(label: impl Into<String>, closed: bool, charts: Vec<Chart>, length_scale: f64) -> Self {
        Self { label: label.into(), closed, charts, length_scale }
    }

    pub fn chart(&self, idx: usize) -> Result<&Chart, SurfaceError> {
        self.charts.get(idx).ok_or(SurfaceError::NoSuchChart(idx))
    }

    pub fn position(&self, pt: SurfacePoint) -> Result<Vec3, SurfaceError> {
        Ok(self.chart(pt.chart)?.position(pt.param))
    }

    /// Image under `X ↦ λ Q X + t`.
    pub fn transformed(&self, scale: f64, rotation: Matrix3<f64>, translation: Vec3) -> Surface {
        Surface {
            label: format!("{} (transformed)", self.label),
            closed: self.closed,
            charts: self.charts.iter().map(|c| c.transformed(scale, rotation, translation)).collect(),
            length_scale: self.length_scale * scale.abs(),
        }
    }

    /// Same surface, with the chart containing `pt` replaced by an equivalent
    /// parametrization in which `pt` is well away from coordinate
    /// singularities (when the chart offers one).
    pub fn evaluation_view(&self, pt: SurfacePoint) -> Result<(Surface, SurfacePoint), SurfaceError> {
        let chart = self.chart(pt.chart)?;
        if !chart.domain().contains(pt.param) {
            return Err(SurfaceError::OutsideDomain(pt.param));
        }
        match chart.recentred(pt.param) {
            Some((alt, q)) => {
                let mut s = self.clone();
                s.charts[pt.chart] = alt;
                Ok((s, SurfacePoint { chart: pt.chart, param: q }))
            }
            None => Ok((self.clone(), pt)),
        }
    }

    /// Total area from the level-`level` nodes.
    pub fn area(&self, level: u32) -> f64 {
        quadrature_nodes(self, level).iter().map(|n| n.weight).sum()
    }
}

/// `√(EG − F²)`: area per unit parameter area.
pub fn area_element(chart: &Chart, p: [f64; 2]) -> Result<f64, SurfaceError> {
    let (_, xu, xv) = chart.first_order(p);
    let density = xu.cross(&xv).norm();
    let scale = xu.norm() * xv.norm();
    if !(density > 1e-14 * scale) {
        return Err(SurfaceError::NotImmersed { point: p, density });
    }
    Ok(density)
}

/// First and second fundamental forms in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FundamentalForms {
    pub first: Matrix2<f64>,
    pub second: Matrix2<f64>,
    pub normal: Vec3,
}

impl FundamentalForms {
    /// Same forms with the opposite normal: `II ↦ −II`, `I` fixed.
    pub fn flipped(&self) -> Self {
        Self { first: self.first, second: -self.second, normal: -self.normal }
    }

    /// Eigenvalues of the shape operator `I⁻¹ II`, largest first.
    pub fn principal_curvatures(&self) -> (f64, f64) {
        // Symmetrize through the Cholesky factor I = L Lᵀ so the eigenvalue
        // gap is computed directly rather than as a square root of a
        // cancelling difference.
        let l00 = self.first[(0, 0)].sqrt();
        let l10 = self.first[(0, 1)] / l00;
        let l11 = (self.first[(1, 1)] - l10 * l10).sqrt();
        let (a, b, c) = (self.second[(0, 0)], self.second[(0, 1)], self.second[(1, 1)]);
        let p = a / (l00 * l00);
        let q = (b - l10 * p * l00) / (l00 * l11);
        let r = (c - 2.0 * l10 * (b / l00) + l10 * l10 * p) / (l11 * l11);
        let mean = 0.5 * (p + r);
        let gap = (0.5 * (p - r)).hypot(q);
        (mean + gap, mean - gap)
    }
}

pub fn fundamental_forms(chart: &Chart, p: [f64; 2]) -> Result<FundamentalForms, SurfaceError> {
    let jet = chart.taylor(p);
    let (xu, xv) = jet.tangents();
    let cross = xu.cross(&xv);
    let density = cross.norm();
    if !(density > 1e-14 * xu.norm() * xv.norm()) {
        return Err(SurfaceError::NotImmersed { point: p, density });
    }
    let normal = cross / density;
    let (xuu, xuv, xvv) = (jet.derivative(2, 0), jet.derivative(1, 1), jet.derivative(0, 2));
    let first = Matrix2::new(xu.dot(&xu), xu.dot(&xv), xu.dot(&xv), xv.dot(&xv));
    let m = xuv.dot(&normal);
    let second = Matrix2::new(xuu.dot(&normal), m, m, xvv.dot(&normal));
    Ok(FundamentalForms { first, second, normal })
}

/// A weighted surface sample: `Σ weight · g(X(param)) ≈ ∫_M g dA`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadNode {
    pub chart: usize,
    pub param: [f64; 2],
    pub weight: f64,
}

impl QuadNode {
    pub fn point(&self) -> SurfacePoint {
        SurfacePoint { chart: self.chart, param: self.param }
    }
}

/// Gauss–Legendre points per non-periodic axis at `level`.
pub fn gauss_points(level: u32) -> usize {
    4 << level
}

/// Equispaced points per periodic axis at `level`.
pub fn periodic_points(level: u32) -> usize {
    8 << level
}

fn axis_rule(lo: f64, hi: f64, periodic: bool, level: u32) -> Vec<(f64, f64)> {
    if periodic {
        let m = periodic_points(level);
        let h = (hi - lo) / m as f64;
        (0..m).map(|k| (lo + (k as f64 + 0.5) * h, h)).collect()
    } else {
        gauss_legendre_on(gauss_points(level), lo, hi)
    }
}

/// Tensor-product nodes over every chart, weights including the area element.
///
/// Nodes are strictly interior, so coordinate seams and poles are never
/// sampled. Disk domains use polar coordinates (Gauss in radius,
/// equispaced in angle).
pub fn quadrature_nodes(surface: &Surface, level: u32) -> Vec<QuadNode> {
    let mut out = Vec::new();
    for (ci, chart) in surface.charts.iter().enumerate() {
        match chart.domain() {
            Domain::Rect { lo, hi, periodic } => {
                let ru = axis_rule(lo[0], hi[0], periodic[0], level);
                let rv = axis_rule(lo[1], hi[1], periodic[1], level);
                for &(u, wu) in &ru {
                    for &(v, wv) in &rv {
                        let (_, xu, xv) = chart.first_order([u, v]);
                        out.push(QuadNode { chart: ci, param: [u, v], weight: wu * wv * xu.cross(&xv).norm() });
                    }
                }
            }
            Domain::Disk { center, radius } => {
                let rr = gauss_legendre_on(gauss_points(level), 0.0, radius);
                let ra = axis_rule(0.0, TAU, true, level);
                for &(t, wt) in &rr {
                    for &(a, wa) in &ra {
                        let p = [center[0] + t * a.cos(), center[1] + t * a.sin()];
                        let (_, xu, xv) = chart.first_order(p);
                        out.push(QuadNode { chart: ci, param: p, weight: wt * wa * t * xu.cross(&xv).norm() });
                    }
                }
            }
        }
    }
    out
}

/// Degree-4 polynomial from `(i, j, coefficient)` triples.
pub fn polynomial(terms: &[(usize, usize, f64)]) -> Result<TruncatedSeries2, SurfaceError> {
    let mut p = TruncatedSeries2::zero();
    for &(i, j, c) in terms {
        if i + j > MAX_DEGREE {
            return Err(SurfaceError::InvalidParameters(format!(
                "monomial x^{i} y^{j} exceeds total degree {MAX_DEGREE}"
            )));
        }
        p[(i, j)] += c;
    }
    Ok(p)
}

/// Parameter point on the outer equator (`θ = 0`) of a torus chart.
pub fn torus_outer_equator(phi: f64) -> SurfacePoint {
    SurfacePoint::new(0, 0.0, phi)
}

/// Parameter point at polar angle `theta` of a spherical chart.
pub fn spherical_point(theta: f64, phi: f64) -> SurfacePoint {
    debug_assert!((0.0..=PI).contains(&theta));
    SurfacePoint::new(0, theta, phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Rotation3;

    fn sphere(r: f64) -> Surface {
        make_builtin(&SurfaceKind::Sphere { radius: r }).unwrap()
    }

    fn torus() -> Surface {
        make_builtin(&SurfaceKind::Torus { major: 2.0, minor: 1.0 }).unwrap()
    }

    fn patch(terms: &[(usize, usize, f64)], r: f64) -> Surface {
        make_builtin(&SurfaceKind::GraphPatch { poly: polynomial(terms).unwrap(), radius: r }).unwrap()
    }

    #[test]
    fn builtin_parameter_validation() {
        assert!(make_builtin(&SurfaceKind::Sphere { radius: 0.0 }).is_err());
        assert!(make_builtin(&SurfaceKind::Sphere { radius: -1.0 }).is_err());
        assert!(make_builtin(&SurfaceKind::Torus { major: 1.0, minor: 1.0 }).is_err());
        assert!(make_builtin(&SurfaceKind::Ellipsoid { a: 1.0, b: f64::NAN, c: 1.0 }).is_err());
        assert!(polynomial(&[(3, 2, 1.0)]).is_err());
    }

    #[test]
    fn builtin_areas() {
        assert!((sphere(1.0).area(3) - 4.0 * PI).abs() < 1e-10);
        assert!((torus().area(3) - 8.0 * PI * PI).abs() < 1e-10);
        assert!((sphere(2.5).area(4) - 4.0 * PI * 6.25).abs() < 1e-9);
    }

    #[test]
    fn graph_patch_area_self_converges() {
        // ∫∫_{disk(1)} (1 + 4x²)^{1/2} for f = x²
        let s = patch(&[(2, 0, 1.0)], 1.0);
        let a4 = s.area(4);
        let a5 = s.area(5);
        assert!((a4 - a5).abs() < 1e-10, "{a4} vs {a5}");
        assert!(a4 > PI);
    }

    #[test]
    fn area_convergence_is_monotone_or_exhausted() {
        for s in [
            sphere(1.0),
            torus(),
            patch(&[(2, 0, 1.0), (0, 3, 0.5)], 0.8),
            make_builtin(&SurfaceKind::Ellipsoid { a: 1.0, b: 1.2, c: 0.8 }).unwrap(),
        ] {
            let areas: Vec<f64> = (3..=6).map(|l| s.area(l)).collect();
            let diffs: Vec<f64> = areas.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
            for w in diffs.windows(2) {
                assert!(w[1] <= w[0] || w[1] < 1e-11 * areas[0], "{}: {diffs:?}", s.label);
            }
        }
    }

    #[test]
    fn area_element_examples() {
        let s = sphere(1.0);
        for theta in [0.3, 1.0, 2.5] {
            let d = area_element(&s.charts[0], [theta, 0.7]).unwrap();
            assert!((d - theta.sin()).abs() < 1e-15);
        }
        let flat = patch(&[], 1.0);
        assert_eq!(area_element(&flat.charts[0], [0.2, -0.3]).unwrap(), 1.0);
        let g = patch(&[(2, 0, 1.0)], 1.0);
        let x: f64 = 0.6;
        assert!((area_element(&g.charts[0], [x, 0.0]).unwrap() - (1.0 + 4.0 * x * x).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn area_element_rejects_degenerate_points() {
        let s = sphere(1.0);
        assert!(matches!(area_element(&s.charts[0], [0.0, 1.0]), Err(SurfaceError::NotImmersed { .. })));
    }

    #[test]
    fn fundamental_form_examples() {
        let s = sphere(1.0);
        let ff = fundamental_forms(&s.charts[0], [1.1, 2.0]).unwrap();
        let (k1, k2) = ff.principal_curvatures();
        assert!((k1.abs() - 1.0).abs() < 1e-12 && (k1 - k2).abs() < 1e-12);
        // II = ±I on the unit sphere
        assert!((ff.second + ff.first).norm() < 1e-12 || (ff.second - ff.first).norm() < 1e-12);

        let g = patch(&[(2, 0, 1.0)], 1.0);
        let ff = fundamental_forms(&g.charts[0], [0.0, 0.0]).unwrap();
        assert_eq!(ff.first, Matrix2::identity());
        assert_eq!(ff.second, Matrix2::new(2.0, 0.0, 0.0, 0.0));

        let t = torus();
        let ff = fundamental_forms(&t.charts[0], [0.0, 0.4]).unwrap();
        let (k1, k2) = ff.principal_curvatures();
        let mut ks = [k1.abs(), k2.abs()];
        ks.sort_by(f64::total_cmp);
        assert!((ks[0] - 1.0 / 3.0).abs() < 1e-12 && (ks[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn normal_flip_negates_second_form() {
        let t = torus();
        let ff = fundamental_forms(&t.charts[0], [0.7, 1.3]).unwrap();
        let fl = ff.flipped();
        assert_eq!(fl.first, ff.first);
        assert_eq!(fl.second, -ff.second);
        assert_eq!(fl.flipped(), ff);
    }

    #[test]
    fn sphere_is_umbilic_everywhere() {
        let s = sphere(1.7);
        for i in 1..12 {
            for j in 0..8 {
                let p = [PI * i as f64 / 12.0, TAU * j as f64 / 8.0];
                let ff = fundamental_forms(&s.charts[0], p).unwrap();
                // shape operator is a multiple of the identity: II = k I
                let k = ff.second[(0, 0)] / ff.first[(0, 0)];
                assert!((ff.second - ff.first * k).norm() < 1e-12);
                assert!((k.abs() - 1.0 / 1.7).abs() < 1e-12);
                let (k1, k2) = ff.principal_curvatures();
                assert!((k1 - k2).abs() < 1e-12, "{p:?}: {k1} {k2}");
            }
        }
    }

    #[test]
    fn analytic_first_derivatives_match_finite_differences() {
        let surfaces = [
            sphere(1.3),
            torus(),
            patch(&[(2, 0, 1.0), (1, 2, -0.4), (0, 4, 0.3)], 1.0),
            make_builtin(&SurfaceKind::Ellipsoid { a: 1.0, b: 1.2, c: 0.8 }).unwrap(),
        ];
        for s in &surfaces {
            let c = &s.charts[0];
            let p = [0.4, 0.3];
            let (_, xu, xv) = c.first_order(p);
            let mut prev_err = f64::INFINITY;
            for h in [1e-2, 5e-3] {
                let du = (c.position([p[0] + h, p[1]]) - c.position([p[0] - h, p[1]])) / (2.0 * h);
                let dv = (c.position([p[0], p[1] + h]) - c.position([p[0], p[1] - h])) / (2.0 * h);
                let err = (du - xu).norm() + (dv - xv).norm();
                // O(h²): halving h cuts the error by ~4
                assert!(err < 1e-3 && err < prev_err / 3.0, "{}: {err}", s.label);
                prev_err = err;
            }
            // Taylor data agrees with the first-order evaluator.
            let jet = c.taylor(p);
            let (ju, jv) = jet.tangents();
            assert!((ju - xu).norm() < 1e-13 && (jv - xv).norm() < 1e-13);
            assert!((jet.position() - c.position(p)).norm() < 1e-13);
        }
    }

    #[test]
    fn taylor_data_predicts_nearby_positions() {
        let t = torus();
        let c = &t.charts[0];
        let p = [0.9, -0.2];
        let jet = c.taylor(p);
        let err = |h: f64| {
            let (du, dv) = (h, -2.0 * h);
            let pred = Vec3::from_fn(|k, _| jet.components[k].eval(du, dv));
            (pred - c.position([p[0] + du, p[1] + dv])).norm()
        };
        // remainder is fifth order in the offset: halving h divides it by ~32
        let (e1, e2) = (err(0.04), err(0.02));
        assert!(e1 < 1e-6 && e1 / e2 > 25.0 && e1 / e2 < 40.0, "{e1} {e2}");
    }

    #[test]
    fn finite_difference_chart_matches_analytic() {
        let t = TorusChart { major: 2.0, minor: 1.0 };
        let fd = FnChart::new(t.domain(), move |p| t.position(p));
        let p = [0.5, 1.0];
        let (ja, jf) = (t.taylor(p), fd.taylor(p));
        for k in 0..3 {
            for (i, (a, b)) in ja.components[k].coeffs().iter().zip(jf.components[k].coeffs()).enumerate() {
                let tol = if i < 6 { 1e-8 } else { 1e-4 };
                assert!((a - b).abs() < tol, "coefficient {i}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn recentred_sphere_chart_covers_same_point() {
        let s = make_builtin(&SurfaceKind::Ellipsoid { a: 1.0, b: 1.2, c: 0.8 }).unwrap();
        let pt = SurfacePoint::new(0, 0.2, 1.0);
        let (view, q) = s.evaluation_view(pt).unwrap();
        assert!((view.position(q).unwrap() - s.position(pt).unwrap()).norm() < 1e-14);
        assert!(q.param[0].sin() > 0.9);
        // same total area
        assert!((view.area(4) - s.area(4)).abs() < 1e-10);
        // orientation preserved
        let n0 = fundamental_forms(&s.charts[0], pt.param).unwrap().normal;
        let n1 = fundamental_forms(&view.charts[0], q.param).unwrap().normal;
        assert!((n0 - n1).norm() < 1e-12);
    }

    #[test]
    fn rigid_motion_preserves_area_and_curvature() {
        let t = torus();
        let rot = *Rotation3::from_euler_angles(0.3, -1.1, 2.0).matrix();
        let moved = t.transformed(1.0, rot, Vec3::new(1.0, -2.0, 0.5));
        assert!((moved.area(3) - t.area(3)).abs() < 1e-10);
        let a = fundamental_forms(&t.charts[0], [0.4, 0.9]).unwrap().principal_curvatures();
        let b = fundamental_forms(&moved.charts[0], [0.4, 0.9]).unwrap().principal_curvatures();
        assert!((a.0 - b.0).abs() < 1e-12 && (a.1 - b.1).abs() < 1e-12);
        let big = t.transformed(2.0, Matrix3::identity(), Vec3::zeros());
        assert!((big.area(3) - 4.0 * t.area(3)).abs() < 1e-9);
    }
}
