//! Truncated bivariate power series of total degree at most four.
//!
//! Coefficients are stored densely in graded-lexicographic order:
//! `1, x, y, x², xy, y², x³, x²y, xy², y³, x⁴, x³y, x²y², xy³, y⁴`.
//! Every product discards monomials of total degree above [`MAX_DEGREE`].

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use thiserror::Error;

/// Highest total degree kept by the truncated ring.
pub const MAX_DEGREE: usize = 4;
/// Number of monomials `x^i y^j` with `i + j <= MAX_DEGREE`.
pub const N_COEFFS: usize = (MAX_DEGREE + 1) * (MAX_DEGREE + 2) / 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("substituted series has nonzero constant term {0:e}; composition is undefined")]
    NonzeroConstant(f64),
    #[error("linear part is singular (det = {det:e}); map cannot be inverted")]
    SingularLinearPart { det: f64 },
}

/// Position of `x^i y^j` in the coefficient array.
#[inline]
pub const fn index_of(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

/// Exponents `(i, j)` of the monomial stored at `idx`.
pub const fn exponents_of(idx: usize) -> (usize, usize) {
    let mut d = 0;
    while (d + 1) * (d + 2) / 2 <= idx {
        d += 1;
    }
    let j = idx - d * (d + 1) / 2;
    (d - j, j)
}

#[derive(Clone, Copy, PartialEq, Default)]
pub struct TruncatedSeries2 {
    coeffs: [f64; N_COEFFS],
}

impl TruncatedSeries2 {
    pub const fn zero() -> Self {
        Self { coeffs: [0.0; N_COEFFS] }
    }

    pub fn constant(c: f64) -> Self {
        let mut s = Self::zero();
        s.coeffs[0] = c;
        s
    }

    /// The series `x`.
    pub fn x() -> Self {
        Self::monomial(1, 0, 1.0)
    }

    /// The series `y`.
    pub fn y() -> Self {
        Self::monomial(0, 1, 1.0)
    }

    pub fn monomial(i: usize, j: usize, c: f64) -> Self {
        let mut s = Self::zero();
        if i + j <= MAX_DEGREE {
            s.coeffs[index_of(i, j)] = c;
        }
        s
    }

    pub fn from_coeffs(coeffs: [f64; N_COEFFS]) -> Self {
        Self { coeffs }
    }

    /// Series of a univariate function of `x` given its Taylor coefficients
    /// `c[k]` (coefficient of `x^k`).
    pub fn univariate_x(c: &[f64]) -> Self {
        let mut s = Self::zero();
        for (k, &ck) in c.iter().take(MAX_DEGREE + 1).enumerate() {
            s.coeffs[index_of(k, 0)] = ck;
        }
        s
    }

    /// Same as [`univariate_x`](Self::univariate_x) in the variable `y`.
    pub fn univariate_y(c: &[f64]) -> Self {
        let mut s = Self::zero();
        for (k, &ck) in c.iter().take(MAX_DEGREE + 1).enumerate() {
            s.coeffs[index_of(0, k)] = ck;
        }
        s
    }

    pub fn coeffs(&self) -> &[f64; N_COEFFS] {
        &self.coeffs
    }

    /// Coefficient of `x^i y^j`; zero beyond the truncation degree.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > MAX_DEGREE {
            0.0
        } else {
            self.coeffs[index_of(i, j)]
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: f64) {
        assert!(i + j <= MAX_DEGREE, "monomial x^{i} y^{j} exceeds truncation degree");
        self.coeffs[index_of(i, j)] = c;
    }

    pub fn constant_term(&self) -> f64 {
        self.coeffs[0]
    }

    /// Linear coefficients `(∂/∂x, ∂/∂y)` at the origin.
    pub fn linear_part(&self) -> [f64; 2] {
        [self.coeffs[1], self.coeffs[2]]
    }

    /// Drop every monomial of total degree above `degree`.
    pub fn truncate(&self, degree: usize) -> Self {
        let mut s = *self;
        for (idx, c) in s.coeffs.iter_mut().enumerate() {
            let (i, j) = exponents_of(idx);
            if i + j > degree {
                *c = 0.0;
            }
        }
        s
    }

    /// Homogeneous part of the given total degree.
    pub fn homogeneous(&self, degree: usize) -> Self {
        let mut s = Self::zero();
        if degree <= MAX_DEGREE {
            for j in 0..=degree {
                let idx = index_of(degree - j, j);
                s.coeffs[idx] = self.coeffs[idx];
            }
        }
        s
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut s = *self;
        s.coeffs.iter_mut().for_each(|c| *c *= k);
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Evaluate the truncated polynomial at a point.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for (idx, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                let (i, j) = exponents_of(idx);
                acc += c * x.powi(i as i32) * y.powi(j as i32);
            }
        }
        acc
    }

    /// Partial derivative `∂^{i+j} / ∂x^i ∂y^j` at the origin.
    pub fn derivative_at_origin(&self, i: usize, j: usize) -> f64 {
        self.coeff(i, j) * factorial(i) * factorial(j)
    }

    /// Substitute arbitrary series (constant terms allowed) into a polynomial.
    ///
    /// Exact for polynomial `outer` because nothing beyond degree four of the
    /// result depends on the discarded terms.
    pub fn substitute_polynomial(&self, u: &Self, v: &Self) -> Self {
        let mut upow = [Self::constant(1.0); MAX_DEGREE + 1];
        let mut vpow = [Self::constant(1.0); MAX_DEGREE + 1];
        for k in 1..=MAX_DEGREE {
            upow[k] = upow[k - 1] * *u;
            vpow[k] = vpow[k - 1] * *v;
        }
        let mut out = Self::zero();
        for (idx, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                let (i, j) = exponents_of(idx);
                out = out + (upow[i] * vpow[j]).scale(c);
            }
        }
        out
    }

    /// `self ∘ (u, v)`; both inner series must have zero constant term.
    pub fn compose2(&self, u: &Self, v: &Self) -> Result<Self, SeriesError> {
        for inner in [u, v] {
            let c = inner.constant_term();
            if c != 0.0 {
                return Err(SeriesError::NonzeroConstant(c));
            }
        }
        Ok(self.substitute_polynomial(u, v))
    }

    /// `self^p` for a series with positive constant term (binomial expansion
    /// of the nilpotent remainder).
    pub fn powf(&self, p: f64) -> Self {
        let c0 = self.constant_term();
        assert!(c0 > 0.0, "powf needs a positive constant term");
        let mut nil = *self;
        nil.coeffs[0] = 0.0;
        let nil = nil.scale(1.0 / c0);
        let mut term = Self::constant(1.0);
        let mut out = Self::constant(1.0);
        let mut binom = 1.0;
        for k in 1..=MAX_DEGREE {
            binom *= (p - (k as f64 - 1.0)) / k as f64;
            term = term * nil;
            out = out + term.scale(binom);
        }
        out.scale(c0.powf(p))
    }

    /// Multiplicative inverse (constant term must be nonzero).
    pub fn recip(&self) -> Self {
        let c0 = self.constant_term();
        assert!(c0 != 0.0, "recip needs a nonzero constant term");
        let mut nil = *self;
        nil.coeffs[0] = 0.0;
        let nil = nil.scale(-1.0 / c0);
        let mut term = Self::constant(1.0);
        let mut out = Self::constant(1.0);
        for _ in 1..=MAX_DEGREE {
            term = term * nil;
            out = out + term;
        }
        out.scale(1.0 / c0)
    }
}

/// Invert the map `(x, y) ↦ (u(x, y), v(x, y))` modulo degree > 4.
///
/// Fixed-point iteration `G ← L⁻¹ (id − N ∘ G)` seeded with `L⁻¹`, where `L`
/// is the linear part and `N` the nonlinear remainder; each sweep fixes one
/// more degree.
pub fn invert_map(
    u: &TruncatedSeries2,
    v: &TruncatedSeries2,
) -> Result<(TruncatedSeries2, TruncatedSeries2), SeriesError> {
    for inner in [u, v] {
        let c = inner.constant_term();
        if c != 0.0 {
            return Err(SeriesError::NonzeroConstant(c));
        }
    }
    let [a, b] = u.linear_part();
    let [c, d] = v.linear_part();
    let det = a * d - b * c;
    let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
    if !(det.abs() > 1e-13 * scale * scale) || !det.is_finite() {
        return Err(SeriesError::SingularLinearPart { det });
    }
    let (ia, ib, ic, id) = (d / det, -b / det, -c / det, a / det);
    let apply_inv = |p: &TruncatedSeries2, q: &TruncatedSeries2| (p.scale(ia) + q.scale(ib), p.scale(ic) + q.scale(id));
    let nu = *u - (TruncatedSeries2::x().scale(a) + TruncatedSeries2::y().scale(b));
    let nv = *v - (TruncatedSeries2::x().scale(c) + TruncatedSeries2::y().scale(d));

    let (x, y) = (TruncatedSeries2::x(), TruncatedSeries2::y());
    let (mut p, mut q) = apply_inv(&x, &y);
    for _ in 0..MAX_DEGREE {
        let rp = x - nu.compose2(&p, &q)?;
        let rq = y - nv.compose2(&p, &q)?;
        (p, q) = apply_inv(&rp, &rq);
    }
    Ok((p, q))
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

impl Index<(usize, usize)> for TruncatedSeries2 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.coeffs[index_of(i, j)]
    }
}

impl IndexMut<(usize, usize)> for TruncatedSeries2 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.coeffs[index_of(i, j)]
    }
}

impl Add for TruncatedSeries2 {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a += b;
        }
        self
    }
}

impl Sub for TruncatedSeries2 {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs) {
            *a -= b;
        }
        self
    }
}

impl Neg for TruncatedSeries2 {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl Mul for TruncatedSeries2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = [0.0; N_COEFFS];
        for (ia, &ca) in self.coeffs.iter().enumerate() {
            if ca == 0.0 {
                continue;
            }
            let (i1, j1) = exponents_of(ia);
            for (ib, &cb) in rhs.coeffs.iter().enumerate() {
                let (i2, j2) = exponents_of(ib);
                if i1 + j1 + i2 + j2 <= MAX_DEGREE {
                    out[index_of(i1 + i2, j1 + j2)] += ca * cb;
                }
            }
        }
        Self { coeffs: out }
    }
}

impl Mul<f64> for TruncatedSeries2 {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl fmt::Debug for TruncatedSeries2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (idx, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let (i, j) = exponents_of(idx);
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            if i > 0 {
                write!(f, "·x^{i}")?;
            }
            if j > 0 {
                write!(f, "·y^{j}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
