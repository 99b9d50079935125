//! The circle average
//!
//! ```text
//! S(r, s) = ∫_{S¹} (1 + f(rw)²/r²)^{s/2} χ(‖v − u‖) A(rw) dσ(w)
//! ```
//!
//! where `f` is the local graph over the tangent plane at the base point and
//! `A = (1 + |∇f|²)^{1/2}` its area density. The graph is evaluated exactly:
//! for each circle node a 2-D Newton solve finds the chart parameter whose
//! tangential projection is `r·w`.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;

use super::cutoff::CutoffSpec;
use super::{BetaError, Estimate};
use crate::jet::{extract_jet, JetCoefficients, LocalFrame};
use crate::quadrature::RichardsonTable;
use crate::series::{invert_map, TruncatedSeries2};
use crate::surface::{Chart, Surface, SurfacePoint};

/// Absolute noise level assumed for one evaluation of `S`.
pub(crate) const MEAN_NOISE: f64 = 1e-14 * TAU;

/// Geometry of one circle of radius `r`, independent of `s`.
#[derive(Debug)]
struct Ring {
    /// `f²/r²` per node.
    ratio: Vec<f64>,
    /// Trapezoid weight × `χ` × `A` per node.
    weight: Vec<f64>,
}

#[derive(Debug)]
pub struct SphericalMean {
    chart: Chart,
    base: [f64; 2],
    frame: LocalFrame,
    jet: JetCoefficients,
    seed: (TruncatedSeries2, TruncatedSeries2),
    cutoff: CutoffSpec,
    nodes: usize,
    /// Size of the largest principal curvature (1/length), floored.
    curvature_scale: f64,
    cache: Mutex<HashMap<u64, Arc<Ring>>>,
}

/// Default cutoff: a tenth of the smallest curvature radius at the point,
/// capped by the surface's length scale and, on surfaces with boundary, by
/// the distance to the chart edge.
pub fn default_cutoff_radius(surface: &Surface, pt: SurfacePoint, jet: &JetCoefficients) -> Result<f64, BetaError> {
    let h = crate::jet::curvature_invariants(jet);
    let kappa = h.kappa1.abs().max(h.kappa2.abs());
    let mut r0 = 0.25 * surface.length_scale;
    if kappa > 0.0 {
        r0 = r0.min(0.1 / kappa);
    }
    if !surface.closed {
        let chart = surface.chart(pt.chart)?;
        let (_, xu, xv) = chart.first_order(pt.param);
        // smallest stretch of the tangent map bounds parameter distance by
        // ambient distance
        let (e, f, g) = (xu.dot(&xu), xu.dot(&xv), xv.dot(&xv));
        let tr = 0.5 * (e + g);
        let min_stretch = (tr - ((0.5 * (e - g)).hypot(f))).max(0.0).sqrt();
        let edge = chart.domain().distance_to_edge(pt.param);
        r0 = r0.min(0.5 * edge * min_stretch.min(1.0));
    }
    Ok(r0)
}

impl SphericalMean {
    /// Mean at `pt`; `cutoff_radius = None` picks the default.
    pub fn new(
        surface: &Surface,
        pt: SurfacePoint,
        cutoff_radius: Option<f64>,
        nodes: usize,
    ) -> Result<Self, BetaError> {
        if nodes < 16 || nodes % 2 == 1 {
            return Err(BetaError::InvalidOption(format!(
                "circle quadrature needs an even node count ≥ 16, got {nodes}"
            )));
        }
        let (view, q) = surface.evaluation_view(pt)?;
        let (frame, jet) = extract_jet(&view, q)?;
        let r0 = match cutoff_radius {
            Some(r) if r.is_finite() && r > 0.0 => r,
            Some(r) => return Err(BetaError::InvalidOption(format!("cutoff radius must be positive, got {r}"))),
            None => default_cutoff_radius(&view, q, &jet)?,
        };
        let chart = view.chart(q.chart)?.clone();
        let taylor = chart.taylor(q.param);
        let project = |axis: &crate::surface::Vec3| {
            let mut s = TruncatedSeries2::zero();
            for k in 0..3 {
                s = s + taylor.components[k].scale(axis[k]);
            }
            s[(0, 0)] = 0.0;
            s
        };
        let seed = invert_map(&project(&frame.e1), &project(&frame.e2)).map_err(crate::jet::JetError::from)?;
        let h = crate::jet::curvature_invariants(&jet);
        let kappa = h.kappa1.abs().max(h.kappa2.abs()).max(0.1 / r0);
        Ok(Self {
            chart,
            base: q.param,
            frame,
            jet,
            seed,
            cutoff: CutoffSpec::new(r0),
            nodes,
            curvature_scale: kappa,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn cutoff(&self) -> CutoffSpec {
        self.cutoff
    }

    pub fn frame(&self) -> &LocalFrame {
        &self.frame
    }

    pub fn jet(&self) -> &JetCoefficients {
        &self.jet
    }

    pub(crate) fn curvature_scale(&self) -> f64 {
        self.curvature_scale
    }

    /// Absolute rounding error in the normal height of a ring point. The
    /// ratio `(height/r)²` inherits a positive bias of about the square of
    /// this over `r²`, which dominates `S` on very small circles.
    pub(crate) fn height_noise(&self) -> f64 {
        4.0 * f64::EPSILON * self.frame.origin.norm().max(self.cutoff.radius)
    }

    pub fn in_support(&self, r: f64) -> bool {
        r.abs() < self.cutoff.radius
    }

    /// Chart parameter whose tangential projection is `(x, y)`.
    fn solve_graph_point(&self, x: f64, y: f64) -> Result<[f64; 2], BetaError> {
        let mut p = [self.base[0] + self.seed.0.eval(x, y), self.base[1] + self.seed.1.eval(x, y)];
        let scale = self.frame.origin.norm() + self.cutoff.radius;
        for _ in 0..30 {
            let (pos, xu, xv) = self.chart.first_order(p);
            let d = pos - self.frame.origin;
            let g = [d.dot(&self.frame.e1) - x, d.dot(&self.frame.e2) - y];
            let (a, b, c, e) =
                (xu.dot(&self.frame.e1), xv.dot(&self.frame.e1), xu.dot(&self.frame.e2), xv.dot(&self.frame.e2));
            let det = a * e - b * c;
            let du = (e * g[0] - b * g[1]) / det;
            let dv = (a * g[1] - c * g[0]) / det;
            p = [p[0] - du, p[1] - dv];
            if g[0].hypot(g[1]) <= 4.0 * f64::EPSILON * scale {
                return Ok(p);
            }
        }
        Err(BetaError::GraphSolve { x, y })
    }

    fn ring(&self, r: f64) -> Result<Arc<Ring>, BetaError> {
        let key = r.to_bits();
        if let Some(ring) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(ring.clone());
        }
        let w = TAU / self.nodes as f64;
        let mut ratio = Vec::with_capacity(self.nodes);
        let mut weight = Vec::with_capacity(self.nodes);
        for i in 0..self.nodes {
            let theta = TAU * i as f64 / self.nodes as f64;
            let (x, y) = (r * theta.cos(), r * theta.sin());
            let p = self.solve_graph_point(x, y)?;
            let (pos, xu, xv) = self.chart.first_order(p);
            let d = pos - self.frame.origin;
            let height = d.dot(&self.frame.normal);
            let jac = xu.dot(&self.frame.e1) * xv.dot(&self.frame.e2) - xv.dot(&self.frame.e1) * xu.dot(&self.frame.e2);
            let density = xu.cross(&xv).norm() / jac.abs();
            let dist = r.hypot(height);
            ratio.push((height / r).powi(2));
            weight.push(w * self.cutoff.weight(dist) * density);
        }
        let ring = Arc::new(Ring { ratio, weight });
        self.cache.lock().expect("cache lock").insert(key, ring.clone());
        Ok(ring)
    }

    /// `S(r, s)`; zero outside the cutoff support.
    pub fn eval(&self, r: f64, s: Complex64) -> Result<Complex64, BetaError> {
        if r == 0.0 {
            return Ok(Complex64::new(TAU, 0.0));
        }
        if !self.in_support(r) {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let ring = self.ring(r)?;
        let half = 0.5 * s;
        let mut acc = Complex64::new(0.0, 0.0);
        for (q, w) in ring.ratio.iter().zip(&ring.weight) {
            if *w != 0.0 {
                acc += (half * q.ln_1p()).exp() * *w;
            }
        }
        Ok(acc)
    }

    /// Base step for radial finite differences.
    pub fn radial_step(&self) -> f64 {
        self.cutoff.radius / 8.0
    }

    /// `(1/j!) ∂ʲS/∂rʲ(0, s)` for even `j ≤ 4`, from even difference
    /// quotients at `h, h/2, h/4` and Richardson extrapolation in `h²`.
    pub fn taylor_coefficient(&self, j: usize, s: Complex64) -> Result<Estimate, BetaError> {
        let s0 = Complex64::new(TAU, 0.0);
        let h0 = self.radial_step();
        let steps = [h0, 0.5 * h0, 0.25 * h0];
        let mut samples = Vec::with_capacity(3);
        for &h in &steps {
            let v = match j {
                0 => return Ok(Estimate::exact(s0)),
                // S(h) = S0 + S2 h² + S4 h⁴ + …
                2 => (self.eval(h, s)? - s0) / (h * h),
                // S(2h) − 4S(h) + 3S0 = 12 S4 h⁴ + 60 S6 h⁶ + …
                4 => (self.eval(2.0 * h, s)? - self.eval(h, s)? * 4.0 + s0 * 3.0) / (12.0 * h.powi(4)),
                _ => {
                    return Err(BetaError::InvalidOption(format!(
                        "radial derivative order {j} not supported (0, 2, 4)"
                    )))
                }
            };
            samples.push(v);
        }
        let table = RichardsonTable::new(&samples, 2);
        let h_min = steps[2];
        let noise = match j {
            2 => 2.0 * MEAN_NOISE / (h_min * h_min),
            _ => 8.0 * MEAN_NOISE / (12.0 * h_min.powi(4)),
        };
        let diffs = table.raw_differences();
        // In the asymptotic regime each raw difference drops by about 4.
        if diffs[1] > diffs[0] && diffs[1] > 10.0 * noise {
            return Err(BetaError::Richardson(format!(
                "order-{j} difference quotients at s = {s} do not settle: raw steps {diffs:?}, noise floor {noise:e}"
            )));
        }
        Ok(Estimate { value: table.best(), error: table.error_estimate() + noise })
    }

    /// `∂ʲS/∂rʲ(0, s)`.
    pub fn radial_derivative_at_zero(&self, j: usize, s: Complex64) -> Result<Estimate, BetaError> {
        let f = crate::series::factorial(j);
        self.taylor_coefficient(j, s).map(|e| Estimate { value: e.value * f, error: e.error * f })
    }
}
