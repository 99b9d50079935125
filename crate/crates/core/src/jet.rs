//! Fourth-order local graph jets, curvature invariants H0..H5 and the
//! closed-form pointwise residues at s = -2, -4, -6.
//!
//! At a point of the surface we pick an orthonormal frame `(e1, e2, n)` and
//! write the surface near the point as the graph `z = f(x, y)` over the
//! tangent plane, with
//!
//! ```text
//! f = b1 x² + b2 xy + b3 y²
//!   + c1 x³ + c2 x²y + c3 xy² + c4 y³
//!   + d1 x⁴ + d2 x³y + d3 x²y² + d4 xy³ + d5 y⁴ + O(|w|⁵).
//! ```

use std::f64::consts::PI;

use thiserror::Error;

use crate::series::{invert_map, SeriesError, TruncatedSeries2};
use crate::surface::{Surface, SurfaceError, SurfacePoint, Vec3};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error(transparent)]
    Surface(#[from] SurfaceError),
    #[error("jet inversion failed: {0}")]
    Inversion(#[from] SeriesError),
    #[error("frame is not orthonormal or not tangent at the point (defect {0:e})")]
    BadFrame(f64),
    #[error("local graph has non-vanishing {order}-order term {value:e}; frame or series data inconsistent")]
    NotTangent { order: &'static str, value: f64 },
}

/// Right-handed orthonormal frame at a surface point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFrame {
    pub origin: Vec3,
    pub e1: Vec3,
    pub e2: Vec3,
    pub normal: Vec3,
}

impl LocalFrame {
    /// Frame from the coordinate tangents: `e1 ∥ Xu`, `e2` from Gram–Schmidt
    /// on `Xv`, `normal = e1 × e2`.
    pub fn from_tangents(origin: Vec3, xu: Vec3, xv: Vec3) -> Result<Self, JetError> {
        let e1 = xu.normalize();
        let w = xv - e1 * e1.dot(&xv);
        let wn = w.norm();
        if !(wn > 1e-12 * xv.norm()) || !e1.iter().all(|c| c.is_finite()) {
            return Err(JetError::Surface(SurfaceError::NotImmersed { point: [f64::NAN; 2], density: wn }));
        }
        let e2 = w / wn;
        Ok(Self { origin, e1, e2, normal: e1.cross(&e2) })
    }

    /// In-plane rotation of the tangent vectors by `angle`.
    pub fn rotated(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self { origin: self.origin, e1: self.e1 * c + self.e2 * s, e2: self.e2 * c - self.e1 * s, normal: self.normal }
    }

    /// Frame with the opposite normal (`e2` is reversed to stay right-handed).
    pub fn flipped(&self) -> Self {
        Self { origin: self.origin, e1: self.e1, e2: -self.e2, normal: -self.normal }
    }

    /// Largest deviation from orthonormality and right-handedness.
    pub fn defect(&self) -> f64 {
        [
            (self.e1.norm() - 1.0).abs(),
            (self.e2.norm() - 1.0).abs(),
            (self.normal.norm() - 1.0).abs(),
            self.e1.dot(&self.e2).abs(),
            self.e1.dot(&self.normal).abs(),
            self.e2.dot(&self.normal).abs(),
            (self.e1.cross(&self.e2) - self.normal).norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Coordinates `(x, y, z)` of an ambient point relative to the frame.
    pub fn local_coords(&self, x: &Vec3) -> Vec3 {
        let d = x - self.origin;
        Vec3::new(d.dot(&self.e1), d.dot(&self.e2), d.dot(&self.normal))
    }
}

/// Taylor coefficients of the local graph, orders 2 through 4.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JetCoefficients {
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub d5: f64,
}

impl JetCoefficients {
    pub fn from_array(a: [f64; 12]) -> Self {
        let [b1, b2, b3, c1, c2, c3, c4, d1, d2, d3, d4, d5] = a;
        Self { b1, b2, b3, c1, c2, c3, c4, d1, d2, d3, d4, d5 }
    }

    pub fn to_array(&self) -> [f64; 12] {
        [self.b1, self.b2, self.b3, self.c1, self.c2, self.c3, self.c4, self.d1, self.d2, self.d3, self.d4, self.d5]
    }

    /// Read orders 2..4 off a series (lower orders are ignored).
    pub fn from_series(f: &TruncatedSeries2) -> Self {
        Self {
            b1: f.coeff(2, 0),
            b2: f.coeff(1, 1),
            b3: f.coeff(0, 2),
            c1: f.coeff(3, 0),
            c2: f.coeff(2, 1),
            c3: f.coeff(1, 2),
            c4: f.coeff(0, 3),
            d1: f.coeff(4, 0),
            d2: f.coeff(3, 1),
            d3: f.coeff(2, 2),
            d4: f.coeff(1, 3),
            d5: f.coeff(0, 4),
        }
    }

    pub fn to_series(&self) -> TruncatedSeries2 {
        let mut f = TruncatedSeries2::zero();
        let terms = [
            (2, 0, self.b1),
            (1, 1, self.b2),
            (0, 2, self.b3),
            (3, 0, self.c1),
            (2, 1, self.c2),
            (1, 2, self.c3),
            (0, 3, self.c4),
            (4, 0, self.d1),
            (3, 1, self.d2),
            (2, 2, self.d3),
            (1, 3, self.d4),
            (0, 4, self.d5),
        ];
        for (i, j, c) in terms {
            f[(i, j)] = c;
        }
        f
    }

    /// Coefficients for the reversed normal: every one changes sign.
    pub fn negated(&self) -> Self {
        Self::from_array(self.to_array().map(|c| -c))
    }

    /// The round sphere of radius `r` seen from its inward normal
    /// (`f = r − √(r² − x² − y²)`).
    pub fn sphere(r: f64) -> Self {
        Self {
            b1: 1.0 / (2.0 * r),
            b3: 1.0 / (2.0 * r),
            d1: 1.0 / (8.0 * r.powi(3)),
            d3: 1.0 / (4.0 * r.powi(3)),
            d5: 1.0 / (8.0 * r.powi(3)),
            ..Self::default()
        }
    }
}

/// Project the embedding's Taylor data at `pt` into `frame` and solve for the
/// local graph.
pub fn extract_jet_in_frame(
    surface: &Surface,
    pt: SurfacePoint,
    frame: &LocalFrame,
) -> Result<JetCoefficients, JetError> {
    let chart = surface.chart(pt.chart)?;
    let jet = chart.taylor(pt.param);
    let defect = frame.defect().max((jet.position() - frame.origin).norm() / surface.length_scale);
    if defect > 1e-12 {
        return Err(JetError::BadFrame(defect));
    }
    let project = |axis: &Vec3| {
        let mut s = TruncatedSeries2::zero();
        for k in 0..3 {
            s = s + jet.components[k].scale(axis[k]);
        }
        s[(0, 0)] = 0.0;
        s
    };
    let (xs, ys, zs) = (project(&frame.e1), project(&frame.e2), project(&frame.normal));
    let (du, dv) = invert_map(&xs, &ys)?;
    let f = zs.compose2(&du, &dv)?;
    let [fx, fy] = f.linear_part();
    let slope = fx.abs().max(fy.abs());
    if slope > 1e-10 {
        return Err(JetError::NotTangent { order: "first", value: slope });
    }
    Ok(JetCoefficients::from_series(&f))
}

/// Default frame at `pt` and the jet in it.
pub fn extract_jet(surface: &Surface, pt: SurfacePoint) -> Result<(LocalFrame, JetCoefficients), JetError> {
    let frame = default_frame(surface, pt)?;
    let jet = extract_jet_in_frame(surface, pt, &frame)?;
    Ok((frame, jet))
}

pub fn default_frame(surface: &Surface, pt: SurfacePoint) -> Result<LocalFrame, JetError> {
    let chart = surface.chart(pt.chart)?;
    let density = crate::surface::area_element(chart, pt.param)?;
    debug_assert!(density > 0.0);
    let (x, xu, xv) = chart.first_order(pt.param);
    LocalFrame::from_tangents(x, xu, xv)
}

/// Complete contractions of II and its first two covariant derivatives,
/// evaluated at the base point in terms of the jet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureInvariants {
    pub h0: f64,
    pub h1: f64,
    pub h2: f64,
    pub h3: f64,
    pub h4: f64,
    pub h5: f64,
    pub gauss: f64,
    pub kappa1: f64,
    pub kappa2: f64,
}

pub fn curvature_invariants(j: &JetCoefficients) -> CurvatureInvariants {
    let JetCoefficients { b1, b2, b3, c1, c2, c3, c4, d1, d2, d3, d4, d5 } = *j;
    let h0 = 2.0 * b3 + 2.0 * b1;
    let h1 = 4.0 * b3 * b3 + 2.0 * b2 * b2 + 4.0 * b1 * b1;
    let h2 = 36.0 * c4 * c4 + 12.0 * c3 * c3 + 12.0 * c2 * c2 + 36.0 * c1 * c1;
    // The cubic b3 term appears twice in this polynomial; it is kept that way
    // on purpose and only feeds the cross-check below.
    let h3 = 24.0 * d5 + 8.0 * d3
        - 24.0 * b3.powi(3)
        - 8.0 * b1 * b3 * b3
        - 16.0 * b2 * b2 * b3
        - 8.0 * b1 * b1 * b3
        - 16.0 * b1 * b2 * b2
        + 24.0 * d1
        - 24.0 * b3.powi(3);
    let h4 = 48.0 * b3 * d5 + 12.0 * b2 * d4 + 8.0 * b3 * d3 + 8.0 * b1 * d3
        - 48.0 * b3.powi(4)
        - 48.0 * b2 * b2 * b3 * b3
        - 32.0 * b1 * b1 * b3 * b3
        - 32.0 * b1 * b2 * b2 * b3
        + 12.0 * b2 * d2
        - 8.0 * b2.powi(4)
        - 48.0 * b1 * b1 * b2 * b2
        + 48.0 * b1 * d1
        - 48.0 * b1.powi(4);
    let h5 = 48.0 * b3 * d5 + 12.0 * b2 * d4 + 8.0 * b3 * d3 + 8.0 * b1 * d3
        - 48.0 * b3.powi(4)
        - 16.0 * b1 * b3.powi(3)
        - 44.0 * b2 * b2 * b3 * b3
        - 56.0 * b1 * b2 * b2 * b3
        - 16.0 * b1.powi(3) * b3
        + 12.0 * b2 * d2
        - 4.0 * b2.powi(4)
        - 44.0 * b1 * b1 * b2 * b2
        + 48.0 * b1 * d1
        - 48.0 * b1.powi(4);
    // II = [[2b1, b2], [b2, 2b3]] in the orthonormal frame.
    let mean = b1 + b3;
    let gap = (b1 - b3).hypot(b2);
    CurvatureInvariants {
        h0,
        h1,
        h2,
        h3,
        h4,
        h5,
        gauss: 4.0 * b1 * b3 - b2 * b2,
        kappa1: mean + gap,
        kappa2: mean - gap,
    }
}

/// Pointwise residues of `B^u` at s = -2, -4, -6.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResidues {
    pub res2: f64,
    pub res4: f64,
    pub res6: f64,
}

impl PointResidues {
    pub fn at_pole(&self, pole: i32) -> Option<f64> {
        match pole {
            -2 => Some(self.res2),
            -4 => Some(self.res4),
            -6 => Some(self.res6),
            _ => None,
        }
    }
}

/// Residue at -4 from the jet.
pub fn res4_polynomial(j: &JetCoefficients) -> f64 {
    let JetCoefficients { b1, b2, b3, .. } = *j;
    PI / 2.0 * (b3 * b3 - 2.0 * b1 * b3 + b2 * b2 + b1 * b1)
}

/// The polynomial whose multiple `π/32` is the residue at -6.
pub fn res6_bracket(j: &JetCoefficients) -> f64 {
    let JetCoefficients { b1, b2, b3, c1, c2, c3, c4, d1, d2, d3, d4, d5 } = *j;
    let terms = [
        72.0 * b3 * d5,
        -24.0 * b1 * d5,
        24.0 * b2 * d4,
        48.0 * c4 * c4,
        8.0 * b3 * d3,
        8.0 * b1 * d3,
        16.0 * c3 * c3,
        -63.0 * b3.powi(4),
        12.0 * b1 * b3.powi(3),
        -66.0 * b2 * b2 * b3 * b3,
        -26.0 * b1 * b1 * b3 * b3,
        -44.0 * b1 * b2 * b2 * b3,
        -24.0 * d1 * b3,
        12.0 * b1.powi(3) * b3,
        24.0 * b2 * d2,
        16.0 * c2 * c2,
        -11.0 * b2.powi(4),
        -66.0 * b1 * b1 * b2 * b2,
        72.0 * b1 * d1,
        48.0 * c1 * c1,
        -63.0 * b1.powi(4),
    ];
    crate::quadrature::compensated_sum(terms.map(|t| t.into())).re
}

pub fn pointwise_residues_closed_form(j: &JetCoefficients) -> PointResidues {
    PointResidues { res2: 2.0 * PI, res4: res4_polynomial(j), res6: PI / 32.0 * res6_bracket(j) }
}

/// Side-by-side evaluation of the jet residue polynomials and the
/// curvature-invariant forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueCrossCheck {
    pub res4_bcd: f64,
    pub res4_h: f64,
    pub res6_bcd: f64,
    pub res6_h: f64,
    /// `res4_h / res4_bcd`; `None` when both vanish.
    pub ratio4: Option<f64>,
    /// `res6_h / res6_bcd`; `None` when the denominator vanishes.
    pub ratio6: Option<f64>,
}

pub fn res4_invariant_form(h: &CurvatureInvariants) -> f64 {
    PI / 2.0 * (2.0 * h.h1 - h.h0 * h.h0)
}

pub fn res6_invariant_form(h: &CurvatureInvariants) -> f64 {
    PI / 32.0
        * (-3.0 / 16.0 * h.h0.powi(4) + 0.75 * h.h1 * h.h1 + 4.0 / 3.0 * h.h2 - 0.5 * h.h0 * h.h3
            + 1.5 * h.h4
            + 0.5 * h.h5)
}

pub fn residue_cross_check(j: &JetCoefficients) -> ResidueCrossCheck {
    let h = curvature_invariants(j);
    let res4_bcd = res4_polynomial(j);
    let res6_bcd = PI / 32.0 * res6_bracket(j);
    let res4_h = res4_invariant_form(&h);
    let res6_h = res6_invariant_form(&h);
    let scale4 = PI * j.to_array()[..3].iter().map(|c| c * c).sum::<f64>();
    let scale6 = PI * j.to_array().iter().map(|c| c.abs()).fold(0.0, f64::max).powi(2).max(1e-300);
    let ratio = |num: f64, den: f64, scale: f64| (den.abs() > 1e-12 * scale).then(|| num / den);
    ResidueCrossCheck {
        res4_bcd,
        res4_h,
        res6_bcd,
        res6_h,
        ratio4: ratio(res4_h, res4_bcd, scale4),
        ratio6: ratio(res6_h, res6_bcd, scale6),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{fundamental_forms, make_builtin, polynomial, SurfaceKind};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn patch(terms: &[(usize, usize, f64)]) -> Surface {
        make_builtin(&SurfaceKind::GraphPatch { poly: polynomial(terms).unwrap(), radius: 1.0 }).unwrap()
    }

    fn torus() -> Surface {
        make_builtin(&SurfaceKind::Torus { major: 2.0, minor: 1.0 }).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn sphere_jet_matches_expansion() {
        for r in [1.0, 2.0, 0.7] {
            let s = make_builtin(&SurfaceKind::Sphere { radius: r }).unwrap();
            for pt in [SurfacePoint::new(0, 1.0, 0.3), SurfacePoint::new(0, 2.2, 4.0)] {
                let (frame, j) = extract_jet(&s, pt).unwrap();
                assert!(frame.defect() < 1e-13);
                // outward normal: the graph bends away, all coefficients negative of the inward case
                let want = JetCoefficients::sphere(r).negated();
                for (a, b) in j.to_array().iter().zip(want.to_array()) {
                    assert!(close(*a, b, 1e-10), "{j:?}");
                }
            }
        }
    }

    #[test]
    fn graph_patch_examples() {
        let (_, j) = extract_jet(&patch(&[(2, 0, 1.0)]), SurfacePoint::new(0, 0.0, 0.0)).unwrap();
        assert_eq!(j, JetCoefficients { b1: 1.0, ..Default::default() });
        let (_, j) = extract_jet(&patch(&[(3, 0, 1.0), (1, 2, -3.0)]), SurfacePoint::new(0, 0.0, 0.0)).unwrap();
        assert_eq!(j, JetCoefficients { c1: 1.0, c3: -3.0, ..Default::default() });
    }

    #[test]
    fn invariants_examples() {
        let h = curvature_invariants(&JetCoefficients::sphere(1.0));
        assert!(close(h.h0, 2.0, 1e-15) && close(h.h1, 2.0, 1e-15));
        assert!(close(2.0 * h.h1 - h.h0 * h.h0, 0.0, 1e-15));
        let h = curvature_invariants(&JetCoefficients { b1: 1.0, ..Default::default() });
        assert_eq!((h.h0, h.h1, 2.0 * h.h1 - h.h0 * h.h0), (2.0, 4.0, 4.0));
        let h = curvature_invariants(&JetCoefficients { c1: 1.0, c3: -3.0, ..Default::default() });
        assert_eq!(h.h2, 144.0);
    }

    #[test]
    fn residue_examples() {
        for r in [1.0, 2.0] {
            let res = pointwise_residues_closed_form(&JetCoefficients::sphere(r));
            assert_eq!(res.res2, 2.0 * PI);
            assert!(res.res4.abs() < 1e-15 && res6_bracket(&JetCoefficients::sphere(r)).abs() < 1e-10);
        }
        let res = pointwise_residues_closed_form(&JetCoefficients { b1: 1.0, ..Default::default() });
        assert!(close(res.res4, PI / 2.0, 1e-15) && close(res.res6, -63.0 * PI / 32.0, 1e-14));
        let flat = pointwise_residues_closed_form(&JetCoefficients::default());
        assert_eq!((flat.res2, flat.res4, flat.res6), (2.0 * PI, 0.0, 0.0));
    }

    #[test]
    fn cross_check_reports_factor_four() {
        let cc = residue_cross_check(&JetCoefficients::sphere(1.0));
        assert!(cc.ratio4.is_none());
        assert!(cc.res4_bcd.abs() < 1e-15 && cc.res4_h.abs() < 1e-14);
        let cc = residue_cross_check(&JetCoefficients { b1: 1.0, ..Default::default() });
        assert!(close(cc.res4_bcd, PI / 2.0, 1e-15) && close(cc.res4_h, 2.0 * PI, 1e-14));
        assert!(close(cc.ratio4.unwrap(), 4.0, 1e-14));
    }

    #[test]
    fn frame_rotation_invariance_on_torus() {
        let t = torus();
        let pt = SurfacePoint::new(0, 0.8, 1.9);
        let base_frame = default_frame(&t, pt).unwrap();
        let base = pointwise_residues_closed_form(&extract_jet_in_frame(&t, pt, &base_frame).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let frame = base_frame.rotated(rng.gen_range(0.0..std::f64::consts::TAU));
            let r = pointwise_residues_closed_form(&extract_jet_in_frame(&t, pt, &frame).unwrap());
            assert!(close(r.res4, base.res4, 1e-10) && close(r.res6, base.res6, 1e-10));
        }
    }

    #[test]
    fn normal_flip_is_exact() {
        let t = torus();
        let pt = SurfacePoint::new(0, 2.1, 0.4);
        let (frame, j) = extract_jet(&t, pt).unwrap();
        let jf = extract_jet_in_frame(&t, pt, &frame.flipped()).unwrap();
        let (a, b) = (pointwise_residues_closed_form(&j), pointwise_residues_closed_form(&j.negated()));
        assert_eq!(a, b);
        let c = pointwise_residues_closed_form(&jf);
        assert!(close(a.res4, c.res4, 1e-12) && close(a.res6, c.res6, 1e-12));
        // b coefficients change sign with the normal
        assert!(close(jf.b1, -j.b1, 1e-12) && close(jf.b3, -j.b3, 1e-12));
    }

    #[test]
    fn b_coefficients_reproduce_second_form() {
        let s = make_builtin(&SurfaceKind::Ellipsoid { a: 1.0, b: 1.2, c: 0.8 }).unwrap();
        for pt in [SurfacePoint::new(0, 0.9, 0.3), SurfacePoint::new(0, 1.7, 5.0)] {
            let (frame, j) = extract_jet(&s, pt).unwrap();
            let chart = &s.charts[0];
            let ff = fundamental_forms(chart, pt.param).unwrap();
            // express II in the extraction frame
            let (_, xu, xv) = chart.first_order(pt.param);
            let m = nalgebra::Matrix2::new(xu.dot(&frame.e1), xv.dot(&frame.e1), xu.dot(&frame.e2), xv.dot(&frame.e2));
            let inv = m.try_inverse().unwrap();
            let second = inv.transpose() * ff.second * inv;
            assert!(close(2.0 * j.b1, second[(0, 0)], 1e-10));
            assert!(close(j.b2, second[(0, 1)], 1e-10));
            assert!(close(2.0 * j.b3, second[(1, 1)], 1e-10));
            let h = curvature_invariants(&j);
            let (k1, k2) = ff.principal_curvatures();
            assert!(close(h.kappa1, k1, 1e-10) && close(h.kappa2, k2, 1e-10));
        }
    }

    #[test]
    fn torus_outer_equator_invariants() {
        let (_, j) = extract_jet(&torus(), SurfacePoint::new(0, 0.0, 0.0)).unwrap();
        let h = curvature_invariants(&j);
        let mut k = [h.kappa1.abs(), h.kappa2.abs()];
        k.sort_by(f64::total_cmp);
        assert!(close(k[0], 1.0 / 3.0, 1e-12) && close(k[1], 1.0, 1e-12));
        assert!(close(res4_polynomial(&j), PI / 18.0, 1e-12));
    }

    fn arb_jet() -> impl Strategy<Value = JetCoefficients> {
        prop::array::uniform12(-1.0f64..1.0).prop_map(JetCoefficients::from_array)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn graph_round_trip(j in arb_jet()) {
            let s = make_builtin(&SurfaceKind::GraphPatch { poly: j.to_series(), radius: 1.0 }).unwrap();
            let (_, got) = extract_jet(&s, SurfacePoint::new(0, 0.0, 0.0)).unwrap();
            for (a, b) in got.to_array().iter().zip(j.to_array()) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }

        #[test]
        fn invariant_identities(j in arb_jet()) {
            let h = curvature_invariants(&j);
            let gap = 2.0 * h.h1 - h.h0 * h.h0;
            prop_assert!((h.h0 - (h.kappa1 + h.kappa2)).abs() < 1e-12);
            prop_assert!((h.h1 - (h.kappa1.powi(2) + h.kappa2.powi(2))).abs() < 1e-12);
            prop_assert!((gap - (h.kappa1 - h.kappa2).powi(2)).abs() < 1e-12 && gap >= -1e-15);
            let r4 = res4_polynomial(&j);
            prop_assert!((r4 - PI / 8.0 * (h.kappa1 - h.kappa2).powi(2)).abs() < 1e-12);
            let cc = residue_cross_check(&j);
            prop_assert!((cc.ratio4.unwrap() - 4.0).abs() < 1e-10);
        }

        #[test]
        fn umbilic_iff_res4_vanishes(b in -1.0f64..1.0, eps in prop_oneof![Just(0.0), -1e-3f64..1e-3]) {
            let j = JetCoefficients { b1: b, b3: b + eps, ..Default::default() };
            let h = curvature_invariants(&j);
            let umbilic = (h.kappa1 - h.kappa2).abs() < 1e-12;
            prop_assert_eq!(umbilic, res4_polynomial(&j).abs() < 1e-24);
        }

        #[test]
        fn flip_leaves_residues_unchanged(j in arb_jet()) {
            prop_assert_eq!(pointwise_residues_closed_form(&j), pointwise_residues_closed_form(&j.negated()));
        }
    }
}
