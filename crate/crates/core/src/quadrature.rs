//! One-dimensional rules shared by the surface and beta evaluators:
//! Gauss–Legendre nodes, adaptive Gauss–Kronrod integration of complex
//! integrands, and Richardson extrapolation tables.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter().zip(&w).map(|(&xi, &wi)| (mid + half * xi, half * wi)).collect()
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15),
// digits as published.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One Gauss–Kronrod 7/15 panel: `(K15 value, error estimate)`.
///
/// The estimate rescales `|K15 − G7|` the way QUADPACK's QK15 does, which
/// tracks the (much smaller) error of the Kronrod value rather than that of
/// the embedded Gauss rule.
pub fn gauss_kronrod15<F>(f: &mut F, a: f64, b: f64) -> (Complex64, f64)
where
    F: FnMut(f64) -> Complex64,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut vals = [Complex64::new(0.0, 0.0); 15];
    vals[7] = f(mid);
    for j in 0..7 {
        let dx = half * XGK[j];
        vals[j] = f(mid - dx);
        vals[14 - j] = f(mid + dx);
    }
    let mut kron = vals[7] * WGK[7];
    let mut gauss = vals[7] * WG[3];
    for j in 0..7 {
        let pair = vals[j] + vals[14 - j];
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut res_abs = WGK[7] * vals[7].norm();
    let mut res_asc = WGK[7] * (vals[7] - mean).norm();
    for j in 0..7 {
        res_abs += WGK[j] * (vals[j].norm() + vals[14 - j].norm());
        res_asc += WGK[j] * ((vals[j] - mean).norm() + (vals[14 - j] - mean).norm());
    }
    let scale = half.abs();
    let (kron, gauss) = (kron * half, gauss * half);
    let (res_abs, res_asc) = (res_abs * scale, res_asc * scale);
    let mut err = (kron - gauss).norm();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (kron, err)
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-14, rel_tol: 1e-10, max_panels: 400 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

/// Globally adaptive Gauss–Kronrod integration over consecutive breakpoints.
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate falls below `max(abs_tol, rel_tol·|I|)` or the panel budget runs
/// out. The final sum runs left to right so the result does not depend on
/// refinement order.
pub fn integrate_adaptive<F>(mut f: F, breakpoints: &[f64], opts: AdaptiveOptions) -> QuadResult
where
    F: FnMut(f64) -> Complex64,
{
    assert!(breakpoints.len() >= 2, "need at least one panel");
    let mut panels: Vec<Panel> = breakpoints
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let (value, error) = gauss_kronrod15(&mut f, w[0], w[1]);
            Panel { a: w[0], b: w[1], value, error }
        })
        .collect();
    let mut evaluations = 15 * panels.len();
    let mut converged = false;
    loop {
        let total: Complex64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
            converged = true;
            break;
        }
        if panels.len() >= opts.max_panels {
            break;
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bi, be), (i, p)| if p.error > be { (i, p.error) } else { (bi, be) });
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if !(mid > p.a && mid < p.b) {
            break;
        }
        let (v1, e1) = gauss_kronrod15(&mut f, p.a, mid);
        let (v2, e2) = gauss_kronrod15(&mut f, mid, p.b);
        evaluations += 30;
        panels[worst] = Panel { a: p.a, b: mid, value: v1, error: e1 };
        panels.push(Panel { a: mid, b: p.b, value: v2, error: e2 });
    }
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    QuadResult {
        value: panels.iter().map(|p| p.value).sum(),
        error: panels.iter().map(|p| p.error).sum(),
        evaluations,
        converged,
    }
}

/// Breakpoints `t_max·2^{-m}`, `m = levels..=0`, in increasing order.
pub fn geometric_breakpoints(t_max: f64, levels: usize) -> Vec<f64> {
    (0..=levels).rev().map(|m| t_max * 0.5f64.powi(m as i32)).collect()
}

/// Richardson extrapolation for a sequence computed at steps `h, h/2, h/4, …`
/// whose error expands in powers `h^{p}, h^{2p}, …`.
///
/// Returns the fully extrapolated value and `|T_final − T_previous|` (the
/// difference between the last two entries of the final row).
#[derive(Debug, Clone)]
pub struct RichardsonTable {
    pub rows: Vec<Vec<Complex64>>,
}

impl RichardsonTable {
    pub fn new(samples: &[Complex64], power: u32) -> Self {
        let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(samples.len());
        for (i, &s) in samples.iter().enumerate() {
            let mut row = vec![s];
            for k in 1..=i {
                let factor = 2f64.powi((power * k as u32) as i32);
                let prev_same = row[k - 1];
                let prev_row = rows[i - 1][k - 1];
                row.push((prev_same * factor - prev_row) / (factor - 1.0));
            }
            rows.push(row);
        }
        Self { rows }
    }

    pub fn best(&self) -> Complex64 {
        *self.rows.last().and_then(|r| r.last()).expect("non-empty table")
    }

    /// Difference between the two most extrapolated entries of the last row.
    pub fn error_estimate(&self) -> f64 {
        let last = self.rows.last().expect("non-empty table");
        if last.len() < 2 {
            return f64::INFINITY;
        }
        (last[last.len() - 1] - last[last.len() - 2]).norm()
    }

    /// Successive raw differences shrink (the table is in its asymptotic regime)?
    pub fn raw_differences(&self) -> Vec<f64> {
        self.rows.windows(2).map(|w| (w[1][0] - w[0][0]).norm()).collect()
    }
}

/// Neumaier-compensated sum of complex values in the given order.
pub fn compensated_sum<I: IntoIterator<Item = Complex64>>(it: I) -> Complex64 {
    let (mut sr, mut cr, mut si, mut ci) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for z in it {
        neumaier(&mut sr, &mut cr, z.re);
        neumaier(&mut si, &mut ci, z.im);
    }
    Complex64::new(sr + cr, si + ci)
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}
