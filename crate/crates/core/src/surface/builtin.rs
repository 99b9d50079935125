//! Closed-form charts for the built-in surfaces.

use std::f64::consts::{PI, TAU};

use super::chart::{Chart, ChartMap, Domain, EmbeddingJet, Vec3};
use crate::series::TruncatedSeries2;

/// Taylor coefficients of `sin(t0 + h)` and `cos(t0 + h)` in `h` to order 4.
fn sin_cos_series(t0: f64) -> ([f64; 5], [f64; 5]) {
    let (s, c) = t0.sin_cos();
    ([s, c, -s / 2.0, -c / 6.0, s / 24.0], [c, -s, -c / 2.0, s / 6.0, c / 24.0])
}

/// Which ambient axis plays the role of the polar axis in a spherical chart.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolarAxis {
    Z,
    X,
}

impl PolarAxis {
    /// Cyclic permutation taking `(d₁, d₂, d₃)` in chart order to ambient
    /// coordinates; cyclic so orientation is preserved.
    fn to_ambient<T: Copy>(self, d: [T; 3]) -> [T; 3] {
        match self {
            PolarAxis::Z => d,
            PolarAxis::X => [d[2], d[0], d[1]],
        }
    }

    fn ambient_to_chart<T: Copy>(self, a: [T; 3]) -> [T; 3] {
        match self {
            PolarAxis::Z => a,
            PolarAxis::X => [a[1], a[2], a[0]],
        }
    }

    fn other(self) -> Self {
        match self {
            PolarAxis::Z => PolarAxis::X,
            PolarAxis::X => PolarAxis::Z,
        }
    }
}

/// `(θ, φ) ↦ diag(a, b, c) · P (sin θ cos φ, sin θ sin φ, cos θ)` on
/// `[0, π] × [0, 2π)`, `P` a cyclic axis permutation.
#[derive(Debug, Clone, Copy)]
pub struct SphericalChart {
    pub semi_axes: [f64; 3],
    pub axis: PolarAxis,
}

impl SphericalChart {
    fn scale(&self, d: [f64; 3]) -> Vec3 {
        let a = self.axis.to_ambient(d);
        Vec3::new(self.semi_axes[0] * a[0], self.semi_axes[1] * a[1], self.semi_axes[2] * a[2])
    }
}

impl ChartMap for SphericalChart {
    fn domain(&self) -> Domain {
        Domain::Rect { lo: [0.0, 0.0], hi: [PI, TAU], periodic: [false, true] }
    }

    fn position(&self, p: [f64; 2]) -> Vec3 {
        let (st, ct) = p[0].sin_cos();
        let (sp, cp) = p[1].sin_cos();
        self.scale([st * cp, st * sp, ct])
    }

    fn first_order(&self, p: [f64; 2]) -> (Vec3, Vec3, Vec3) {
        let (st, ct) = p[0].sin_cos();
        let (sp, cp) = p[1].sin_cos();
        (self.scale([st * cp, st * sp, ct]), self.scale([ct * cp, ct * sp, -st]), self.scale([-st * sp, st * cp, 0.0]))
    }

    fn taylor(&self, p: [f64; 2]) -> EmbeddingJet {
        let (s_th, c_th) = sin_cos_series(p[0]);
        let (s_ph, c_ph) = sin_cos_series(p[1]);
        let st = TruncatedSeries2::univariate_x(&s_th);
        let ct = TruncatedSeries2::univariate_x(&c_th);
        let sp = TruncatedSeries2::univariate_y(&s_ph);
        let cp = TruncatedSeries2::univariate_y(&c_ph);
        let d = self.axis.to_ambient([st * cp, st * sp, ct]);
        EmbeddingJet { components: [0, 1, 2].map(|k| d[k].scale(self.semi_axes[k])) }
    }

    fn recentred(&self, p: [f64; 2]) -> Option<(Chart, [f64; 2])> {
        // Within ~41° of a pole the φ-tangent degenerates; swap the polar axis.
        if p[0].cos().abs() < 0.75 {
            return None;
        }
        let other = SphericalChart { semi_axes: self.semi_axes, axis: self.axis.other() };
        let (st, ct) = p[0].sin_cos();
        let (sp, cp) = p[1].sin_cos();
        let ambient = self.axis.to_ambient([st * cp, st * sp, ct]);
        let d = other.axis.ambient_to_chart(ambient);
        let theta = d[2].clamp(-1.0, 1.0).acos();
        let phi = d[1].atan2(d[0]).rem_euclid(TAU);
        Some((Chart::new(other), [theta, phi]))
    }
}

/// Torus of revolution about the z-axis,
/// `(θ, φ) ↦ ((R + ρ cos θ) cos φ, (R + ρ cos θ) sin φ, ρ sin θ)`.
#[derive(Debug, Clone, Copy)]
pub struct TorusChart {
    pub major: f64,
    pub minor: f64,
}

impl ChartMap for TorusChart {
    fn domain(&self) -> Domain {
        Domain::Rect { lo: [0.0, 0.0], hi: [TAU, TAU], periodic: [true, true] }
    }

    fn position(&self, p: [f64; 2]) -> Vec3 {
        let (st, ct) = p[0].sin_cos();
        let (sp, cp) = p[1].sin_cos();
        let w = self.major + self.minor * ct;
        Vec3::new(w * cp, w * sp, self.minor * st)
    }

    fn first_order(&self, p: [f64; 2]) -> (Vec3, Vec3, Vec3) {
        let (st, ct) = p[0].sin_cos();
        let (sp, cp) = p[1].sin_cos();
        let w = self.major + self.minor * ct;
        (
            Vec3::new(w * cp, w * sp, self.minor * st),
            Vec3::new(-self.minor * st * cp, -self.minor * st * sp, self.minor * ct),
            Vec3::new(-w * sp, w * cp, 0.0),
        )
    }

    fn taylor(&self, p: [f64; 2]) -> EmbeddingJet {
        let (s_th, c_th) = sin_cos_series(p[0]);
        let (s_ph, c_ph) = sin_cos_series(p[1]);
        let w = TruncatedSeries2::constant(self.major) + TruncatedSeries2::univariate_x(&c_th).scale(self.minor);
        let sp = TruncatedSeries2::univariate_y(&s_ph);
        let cp = TruncatedSeries2::univariate_y(&c_ph);
        EmbeddingJet { components: [w * cp, w * sp, TruncatedSeries2::univariate_x(&s_th).scale(self.minor)] }
    }
}

/// Graph `(x, y) ↦ (x, y, f(x, y))` of a polynomial over a disk.
#[derive(Debug, Clone, Copy)]
pub struct GraphChart {
    pub poly: TruncatedSeries2,
    pub radius: f64,
}

impl GraphChart {
    fn grad(&self, x: f64, y: f64) -> (f64, f64) {
        let mut fx = 0.0;
        let mut fy = 0.0;
        for (idx, &c) in self.poly.coeffs().iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let (i, j) = crate::series::exponents_of(idx);
            if i > 0 {
                fx += c * i as f64 * x.powi(i as i32 - 1) * y.powi(j as i32);
            }
            if j > 0 {
                fy += c * j as f64 * x.powi(i as i32) * y.powi(j as i32 - 1);
            }
        }
        (fx, fy)
    }
}

impl ChartMap for GraphChart {
    fn domain(&self) -> Domain {
        Domain::Disk { center: [0.0, 0.0], radius: self.radius }
    }

    fn position(&self, p: [f64; 2]) -> Vec3 {
        Vec3::new(p[0], p[1], self.poly.eval(p[0], p[1]))
    }

    fn first_order(&self, p: [f64; 2]) -> (Vec3, Vec3, Vec3) {
        let (fx, fy) = self.grad(p[0], p[1]);
        (self.position(p), Vec3::new(1.0, 0.0, fx), Vec3::new(0.0, 1.0, fy))
    }

    fn taylor(&self, p: [f64; 2]) -> EmbeddingJet {
        let u = TruncatedSeries2::constant(p[0]) + TruncatedSeries2::x();
        let v = TruncatedSeries2::constant(p[1]) + TruncatedSeries2::y();
        EmbeddingJet { components: [u, v, self.poly.substitute_polynomial(&u, &v)] }
    }
}
