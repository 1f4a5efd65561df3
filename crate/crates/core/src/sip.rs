//! Finite-dimensional `l^p` spaces with their duality map and semi-inner product.
//!
//! For `1 < p < inf` the dual `l^q` is strictly convex, so the duality map is
//! single-valued and the semi-inner product compatible with the norm is
//! unique:
//!
//! ```text
//! J(x)_i = ||x||^(2-p) |x_i|^(p-2) conj(x_i)      [y, x] = <J(x), y> = sum_i J(x)_i y_i
//! ```
//!
//! With `p = 2` this is the Euclidean inner product `sum_i y_i conj(x_i)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{CVec, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LpSpace {
    n: usize,
    p: f64,
    q: f64,
}

impl LpSpace {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidExponent(p));
        }
        Ok(Self { n, p, q: p / (p - 1.0) })
    }

    pub fn euclidean(n: usize) -> Self {
        Self { n, p: 2.0, q: 2.0 }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Conjugate exponent, `1/p + 1/q = 1`.
    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn is_euclidean(&self) -> bool {
        self.p == 2.0
    }

    pub fn norm(&self, x: &CVec) -> f64 {
        lp_norm(x, self)
    }

    /// Rescales `x` to unit norm; `None` for the zero vector.
    pub fn normalize(&self, x: &CVec) -> Option<CVec> {
        let norm = self.norm(x);
        (norm > 0.0).then(|| x.unscale(norm))
    }

    fn check_dim(&self, x: &CVec) {
        assert_eq!(x.len(), self.n, "vector length does not match the space dimension");
    }
}

/// A bounded linear functional on `l^p`, acting by `<f, y> = sum_i f_i y_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Functional {
    coefficients: CVec,
}

impl Functional {
    pub fn new(coefficients: CVec) -> Self {
        Self { coefficients }
    }

    pub fn coefficients(&self) -> &CVec {
        &self.coefficients
    }

    pub fn apply(&self, y: &CVec) -> Complex64 {
        self.coefficients.iter().zip(y.iter()).map(|(f, v)| f * v).sum()
    }

    /// Dual norm, i.e. the `l^q` norm of the coefficients.
    pub fn dual_norm(&self, space: &LpSpace) -> f64 {
        norm_with_exponent(self.coefficients.as_slice(), space.q)
    }
}

fn norm_with_exponent(x: &[Complex64], p: f64) -> f64 {
    let scale = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    if p == 2.0 {
        let s: f64 = x.iter().map(|z| (z.norm() / scale).powi(2)).sum();
        return scale * s.sqrt();
    }
    let s: f64 = x.iter().map(|z| (z.norm() / scale).powf(p)).sum();
    scale * s.powf(1.0 / p)
}

/// `(sum |x_i|^p)^(1/p)`, evaluated with scaling to avoid overflow.
pub fn lp_norm(x: &CVec, space: &LpSpace) -> f64 {
    space.check_dim(x);
    norm_with_exponent(x.as_slice(), space.p)
}

/// The duality map `J(x)`; coordinates with `x_i = 0` map to 0 and so does `x = 0`.
pub fn duality_map(x: &CVec, space: &LpSpace) -> Functional {
    space.check_dim(x);
    if space.is_euclidean() {
        return Functional::new(x.map(|z| z.conj()));
    }
    let norm = lp_norm(x, space);
    if norm == 0.0 {
        return Functional::new(CVec::zeros(x.len()));
    }
    // ||x||^(2-p) |x_i|^(p-1) conj(phase_i) = ||x|| (|x_i|/||x||)^(p-1) conj(phase_i)
    let coeffs = x.map(|z| {
        let r = z.norm();
        if r == 0.0 {
            ZERO
        } else {
            z.conj() * (norm * (r / norm).powf(space.p - 1.0) / r)
        }
    });
    Functional::new(coeffs)
}

/// Semi-inner product `[y, x] = <J(x), y>`.
pub fn sip(y: &CVec, x: &CVec, space: &LpSpace) -> Complex64 {
    space.check_dim(y);
    if space.is_euclidean() {
        return y.dotc(x).conj();
    }
    duality_map(x, space).apply(y)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SipLimitReport {
    /// `[x, x_k]` for every supplied `x_k`.
    pub values: Vec<Complex64>,
    /// Index of the last `x_k` within `1e-4` of `x`, if any.
    pub last_close_index: Option<usize>,
    pub converged: bool,
}

const UNIT_TOL: f64 = 1e-8;

/// Evaluates `[x, x_k]` along a sequence of unit vectors converging to the unit
/// vector `x`; the limit must be 1. The verdict looks at the last `x_K` with
/// `||x_K - x|| < 1e-4` and requires `|[x, x_K] - 1| < 1e-6`.
pub fn sip_limit_check(x: &CVec, sequence: &[CVec], space: &LpSpace) -> Result<SipLimitReport> {
    let check_unit = |v: &CVec| -> Result<()> {
        let norm = lp_norm(v, space);
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { norm });
        }
        Ok(())
    };
    check_unit(x)?;
    for v in sequence {
        check_unit(v)?;
    }
    let values: Vec<Complex64> = sequence.iter().map(|xk| sip(x, xk, space)).collect();
    let last_close_index = sequence.iter().rposition(|xk| lp_norm(&(xk - x), space) < 1e-4);
    let converged = last_close_index.is_some_and(|k| (values[k] - 1.0).norm() < 1e-6);
    Ok(SipLimitReport { values, last_close_index, converged })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityReport {
    /// `[x, y]`.
    pub sip_value: Complex64,
    /// `||x|| ||y||`.
    pub norm_product: f64,
    pub equality: bool,
    /// Best `lambda` with `y ~ lambda x` (reported when equality holds).
    pub lambda: Option<Complex64>,
    /// `||y - lambda x||` in the space norm.
    pub residual: Option<f64>,
}

/// Equality case of Cauchy-Schwarz in a strictly convex space: when
/// `|[x, y]| = ||x|| ||y||` the vectors must be collinear.
pub fn strict_convexity_equality_check(x: &CVec, y: &CVec, space: &LpSpace) -> Result<EqualityReport> {
    let nx = lp_norm(x, space);
    let ny = lp_norm(y, space);
    if nx == 0.0 || ny == 0.0 {
        return Err(Error::ZeroVector);
    }
    let sip_value = sip(x, y, space);
    let norm_product = nx * ny;
    let equality = sip_value.norm() >= (1.0 - 1e-10) * norm_product;
    let (lambda, residual) = if equality {
        let lambda = x.dotc(y) / x.norm_squared();
        let residual = lp_norm(&(y - x * lambda), space);
        (Some(lambda), Some(residual))
    } else {
        (None, None)
    };
    Ok(EqualityReport { sip_value, norm_product, equality, lambda, residual })
}
