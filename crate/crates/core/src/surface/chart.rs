use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};

use crate::series::{factorial, TruncatedSeries2, MAX_DEGREE};

pub type Vec3 = Vector3<f64>;

/// Parameter domain of a chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// `[lo₀, hi₀] × [lo₁, hi₁]`; periodic axes wrap with period `hi − lo`.
    Rect { lo: [f64; 2], hi: [f64; 2], periodic: [bool; 2] },
    /// Closed disk in the parameter plane.
    Disk { center: [f64; 2], radius: f64 },
}

impl Domain {
    pub fn contains(&self, p: [f64; 2]) -> bool {
        match *self {
            Domain::Rect { lo, hi, periodic } => (0..2).all(|k| periodic[k] || (p[k] >= lo[k] && p[k] <= hi[k])),
            Domain::Disk { center, radius } => (p[0] - center[0]).hypot(p[1] - center[1]) <= radius,
        }
    }

    /// Parameter distance from `p` to the nearest non-periodic edge.
    pub fn distance_to_edge(&self, p: [f64; 2]) -> f64 {
        match *self {
            Domain::Rect { lo, hi, periodic } => {
                (0..2).filter(|&k| !periodic[k]).map(|k| (p[k] - lo[k]).min(hi[k] - p[k])).fold(f64::INFINITY, f64::min)
            }
            Domain::Disk { center, radius } => radius - (p[0] - center[0]).hypot(p[1] - center[1]),
        }
    }

    /// Typical parameter extent (used to scale finite-difference steps).
    pub fn scale(&self) -> f64 {
        match *self {
            Domain::Rect { lo, hi, .. } => (hi[0] - lo[0]).max(hi[1] - lo[1]),
            Domain::Disk { radius, .. } => 2.0 * radius,
        }
    }
}

/// Taylor expansion of the three embedding coordinates at a parameter point,
/// in the parameter offsets `(du, dv)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingJet {
    pub components: [TruncatedSeries2; 3],
}

impl EmbeddingJet {
    /// `∂^{i+j} X / ∂u^i ∂v^j` at the expansion point.
    pub fn derivative(&self, i: usize, j: usize) -> Vec3 {
        Vec3::from_fn(|k, _| self.components[k].derivative_at_origin(i, j))
    }

    pub fn position(&self) -> Vec3 {
        self.derivative(0, 0)
    }

    pub fn tangents(&self) -> (Vec3, Vec3) {
        (self.derivative(1, 0), self.derivative(0, 1))
    }

    /// Apply `X ↦ A X + t` coefficientwise.
    pub fn affine(&self, a: &Matrix3<f64>, t: &Vec3) -> Self {
        let mut out = [TruncatedSeries2::zero(); 3];
        for (r, o) in out.iter_mut().enumerate() {
            for c in 0..3 {
                *o = *o + self.components[c].scale(a[(r, c)]);
            }
            *o = *o + TruncatedSeries2::constant(t[r]);
        }
        Self { components: out }
    }
}

/// A parametrization `(u, v) ↦ ℝ³` with derivative access up to order four.
pub trait ChartMap: Send + Sync + fmt::Debug {
    fn domain(&self) -> Domain;

    fn position(&self, p: [f64; 2]) -> Vec3;

    /// Position and the two coordinate tangents.
    fn first_order(&self, p: [f64; 2]) -> (Vec3, Vec3, Vec3);

    /// Full order-4 Taylor data at `p`.
    fn taylor(&self, p: [f64; 2]) -> EmbeddingJet;

    /// Another parametrization of the same image in which `p` sits far from
    /// any coordinate singularity, with the corresponding parameters.
    fn recentred(&self, _p: [f64; 2]) -> Option<(Chart, [f64; 2])> {
        None
    }

    /// True when derivatives are exact rather than finite-difference estimates.
    fn analytic_derivatives(&self) -> bool {
        true
    }
}

#[derive(Clone)]
pub struct Chart {
    map: Arc<dyn ChartMap>,
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.map.fmt(f)
    }
}

impl Chart {
    pub fn new<M: ChartMap + 'static>(map: M) -> Self {
        Self { map: Arc::new(map) }
    }

    pub fn from_arc(map: Arc<dyn ChartMap>) -> Self {
        Self { map }
    }

    pub fn map(&self) -> &Arc<dyn ChartMap> {
        &self.map
    }

    pub fn domain(&self) -> Domain {
        self.map.domain()
    }

    pub fn position(&self, p: [f64; 2]) -> Vec3 {
        self.map.position(p)
    }

    pub fn first_order(&self, p: [f64; 2]) -> (Vec3, Vec3, Vec3) {
        self.map.first_order(p)
    }

    pub fn taylor(&self, p: [f64; 2]) -> EmbeddingJet {
        self.map.taylor(p)
    }

    pub fn recentred(&self, p: [f64; 2]) -> Option<(Chart, [f64; 2])> {
        self.map.recentred(p)
    }

    /// Image under `X ↦ λ Q X + t` (a similarity when `Q` is orthogonal).
    pub fn transformed(&self, scale: f64, rotation: Matrix3<f64>, translation: Vec3) -> Chart {
        Chart::new(TransformedChart { inner: self.clone(), linear: rotation * scale, translation })
    }
}

#[derive(Debug)]
struct TransformedChart {
    inner: Chart,
    linear: Matrix3<f64>,
    translation: Vec3,
}

impl ChartMap for TransformedChart {
    fn domain(&self) -> Domain {
        self.inner.domain()
    }

    fn position(&self, p: [f64; 2]) -> Vec3 {
        self.linear * self.inner.position(p) + self.translation
    }

    fn first_order(&self, p: [f64; 2]) -> (Vec3, Vec3, Vec3) {
        let (x, xu, xv) = self.inner.first_order(p);
        (self.linear * x + self.translation, self.linear * xu, self.linear * xv)
    }

    fn taylor(&self, p: [f64; 2]) -> EmbeddingJet {
        self.inner.taylor(p).affine(&self.linear, &self.translation)
    }

    fn recentred(&self, p: [f64; 2]) -> Option<(Chart, [f64; 2])> {
        self.inner.recentred(p).map(|(c, q)| {
            (Chart::new(TransformedChart { inner: c, linear: self.linear, translation: self.translation }), q)
        })
    }

    fn analytic_derivatives(&self) -> bool {
        self.inner.map().analytic_derivatives()
    }
}

type PositionFn = dyn Fn([f64; 2]) -> Vec3 + Send + Sync;

/// Chart defined by positions only; derivatives come from
/// Richardson-extrapolated central differences with step
/// `ε^{1/6} × domain scale`. Expect roughly 1e-6 relative accuracy on the
/// fourth derivatives and 1e-10 on the first.
pub struct FnChart {
    domain: Domain,
    f: Box<PositionFn>,
    step: f64,
}

impl fmt::Debug for FnChart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnChart").field("domain", &self.domain).field("step", &self.step).finish()
    }
}

impl FnChart {
    pub fn new<F>(domain: Domain, f: F) -> Self
    where
        F: Fn([f64; 2]) -> Vec3 + Send + Sync + 'static,
    {
        let step = f64::EPSILON.powf(1.0 / 6.0) * domain.scale();
        Self { domain, f: Box::new(f), step }
    }

    fn partial(&self, p: [f64; 2], i: usize, j: usize, h: f64) -> Vec3 {
        let wu = central_weights(i);
        let wv = central_weights(j);
        let (ou, ov) = (wu.len() as i32 / 2, wv.len() as i32 / 2);
        let mut acc = Vec3::zeros();
        for (a, &ca) in wu.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            for (b, &cb) in wv.iter().enumerate() {
                if cb == 0.0 {
                    continue;
                }
                let q = [p[0] + (a as i32 - ou) as f64 * h, p[1] + (b as i32 - ov) as f64 * h];
                acc += (self.f)(q) * (ca * cb);
            }
        }
        acc / h.powi((i + j) as i32)
    }

    fn richardson_partial(&self, p: [f64; 2], i: usize, j: usize) -> Vec3 {
        if i + j == 0 {
            return (self.f)(p);
        }
        let h = self.step;
        let d1 = self.partial(p, i, j, h);
        let d2 = self.partial(p, i, j, h / 2.0);
        (d2 * 4.0 - d1) / 3.0
    }
}

/// Second-order-accurate central difference weights for the `m`-th derivative.
fn central_weights(m: usize) -> &'static [f64] {
    match m {
        0 => &[1.0],
        1 => &[-0.5, 0.0, 0.5],
        2 => &[1.0, -2.0, 1.0],
        3 => &[-0.5, 1.0, 0.0, -1.0, 0.5],
        4 => &[1.0, -4.0, 6.0, -4.0, 1.0],
        _ => unreachable!("derivative order above four"),
    }
}

impl ChartMap for FnChart {
    fn domain(&self) -> Domain {
        self.domain
    }

    fn position(&self, p: [f64; 2]) -> Vec3 {
        (self.f)(p)
    }

    fn first_order(&self, p: [f64; 2]) -> (Vec3, Vec3, Vec3) {
        (self.position(p), self.richardson_partial(p, 1, 0), self.richardson_partial(p, 0, 1))
    }

    fn taylor(&self, p: [f64; 2]) -> EmbeddingJet {
        let mut comps = [TruncatedSeries2::zero(); 3];
        for d in 0..=MAX_DEGREE {
            for j in 0..=d {
                let i = d - j;
                let der = self.richardson_partial(p, i, j) / (factorial(i) * factorial(j));
                for k in 0..3 {
                    comps[k].set_coeff(i, j, der[k]);
                }
            }
        }
        EmbeddingJet { components: comps }
    }

    fn analytic_derivatives(&self) -> bool {
        false
    }
}
