//! Range-kernel algebra of a square matrix: ascent and descent, Drazin index
//! and inverse, the group inverse, range-kernel complementarity, the gap
//! between subspaces and the quantities `c_A` and `rho_A`.
//!
//! Rank and nullity chains are computed on orthonormal bases rather than on
//! explicit powers `A^k`, with the absolute threshold
//! `rank_rel_tol * sigma_max(A)` at every step.

use log::warn;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numkernel::{
    c, kernel_basis, pinv_with_rank, range_basis, singular_values, svd_rect, CMat, ComplexMatrix, Subspace,
    ToleranceConfig,
};

/// Principal angles whose sine falls below this are treated as zero, i.e. the
/// corresponding directions belong to `M ∩ N`.
pub const INTERSECTION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StructureReport {
    pub rank: usize,
    pub rank_of_square: usize,
    pub ascent: usize,
    pub descent: usize,
    pub drazin_index: usize,
    pub invertible: bool,
    pub complementary: bool,
    /// Projection onto `R(A)` along `N(A)` when the two are complementary.
    pub projector: Option<ComplexMatrix>,
    /// `gamma(R(A), N(A))`; `None` when undefined (overlap or zero matrix).
    pub gap_range_kernel: Option<f64>,
    pub c_a: Option<f64>,
    pub rho_a: Option<f64>,
}

/// Orthonormal basis for the column span of `m`, keeping singular values above `threshold`.
fn span_above(m: &CMat, threshold: f64) -> Result<CMat> {
    if m.ncols() == 0 {
        return Ok(CMat::zeros(m.nrows(), 0));
    }
    let dec = svd_rect(m)?;
    let r = dec.singular_values.iter().filter(|&&s| s > threshold).count();
    Ok(dec.u.columns(0, r).into_owned())
}

/// Orthonormal basis for the kernel of `m` (square), singular values at or below `threshold`.
fn kernel_at_or_below(m: &CMat, threshold: f64) -> Result<CMat> {
    let n = m.ncols();
    let dec = svd_rect(m)?;
    let r = dec.singular_values.iter().filter(|&&s| s > threshold).count();
    Ok(dec.v.columns(r, n - r).into_owned())
}

fn threshold(a: &ComplexMatrix, tol: &ToleranceConfig) -> f64 {
    tol.rank_rel_tol * a.spectral_norm()
}

/// `rank(A^k)` for `k = 0, 1, ...` until two consecutive entries agree.
pub fn rank_chain(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Vec<usize>> {
    let n = a.order();
    let thr = threshold(a, tol);
    let mut q = CMat::identity(n, n);
    let mut ranks = vec![n];
    loop {
        if thr == 0.0 {
            q = CMat::zeros(n, 0);
        } else {
            q = span_above(&(a.as_matrix() * &q), thr)?;
        }
        let r = q.ncols();
        let prev = *ranks.last().expect("chain starts non-empty");
        ranks.push(r);
        if r == prev && ranks.len() > 2 {
            return Ok(ranks);
        }
    }
}

/// `nullity(A^k)` for `k = 0, 1, ...` until two consecutive entries agree,
/// via `N(A^{k+1}) = N((I - P_k) A)` with `P_k` the projector onto `N(A^k)`.
pub fn nullity_chain(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Vec<usize>> {
    let n = a.order();
    let thr = threshold(a, tol);
    let mut k = CMat::zeros(n, 0);
    let mut nullities = vec![0usize];
    loop {
        let next = if thr == 0.0 {
            CMat::identity(n, n)
        } else {
            let proj = &k * k.adjoint();
            let m = (CMat::identity(n, n) - proj) * a.as_matrix();
            kernel_at_or_below(&m, thr)?
        };
        let nu = next.ncols();
        let prev = *nullities.last().expect("chain starts non-empty");
        nullities.push(nu);
        if nu == prev && nullities.len() > 2 {
            return Ok(nullities);
        }
        k = next;
    }
}

/// Smallest `k >= 1` at which a chain stops changing.
fn stabilization_index(chain: &[usize]) -> usize {
    (1..chain.len() - 1).find(|&k| chain[k] == chain[k + 1]).unwrap_or(chain.len() - 2)
}

/// Smallest `k >= 1` with `N(A^k) = N(A^{k+1})`.
pub fn ascent(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<usize> {
    Ok(stabilization_index(&nullity_chain(a, tol)?))
}

/// Smallest `k >= 1` with `R(A^k) = R(A^{k+1})`.
pub fn descent(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<usize> {
    Ok(stabilization_index(&rank_chain(a, tol)?))
}

/// `max(ascent, descent)`; 1 for invertible matrices.
pub fn drazin_index(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<usize> {
    Ok(ascent(a, tol)?.max(descent(a, tol)?))
}

/// Drazin inverse `A^d = A^k pinv(A^{2k+1}) A^k` with `k` the Drazin index;
/// the pseudo-inverse keeps exactly `rank(A^k)` singular triplets.
pub fn drazin_inverse(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    let ranks = rank_chain(a, tol)?;
    let k = drazin_index(a, tol)?;
    let r = ranks[k.min(ranks.len() - 1)];
    if r == 0 {
        return Ok(ComplexMatrix::zeros(a.order()));
    }
    let ak = a.pow(k as u32).into_inner();
    let big = a.pow(2 * k as u32 + 1).into_inner();
    let ad = &ak * pinv_with_rank(&big, r)? * &ak;
    ComplexMatrix::new(ad)
}

/// Relative residuals of the three Drazin axioms at index `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DrazinResiduals {
    /// `||A^{k+1} A^d - A^k|| / (||A||^k + ||A||^{k+1} ||A^d||)`
    pub power: f64,
    /// `||A^d A A^d - A^d|| / (||A^d|| + ||A|| ||A^d||^2)`
    pub outer: f64,
    /// `||A A^d - A^d A|| / (2 ||A|| ||A^d||)`
    pub commute: f64,
}

impl DrazinResiduals {
    pub fn max(&self) -> f64 {
        self.power.max(self.outer).max(self.commute)
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

pub fn drazin_residuals(a: &ComplexMatrix, ad: &ComplexMatrix, k: usize) -> DrazinResiduals {
    let a_m = a.as_matrix();
    let d = ad.as_matrix();
    let na = a_m.norm();
    let nd = d.norm();
    let ak = a.pow(k as u32).into_inner();
    let ak1 = &ak * a_m;
    let power = ratio((&ak1 * d - &ak).norm(), na.powi(k as i32) + na.powi(k as i32 + 1) * nd);
    let outer = ratio((d * a_m * d - d).norm(), nd + na * nd * nd);
    let commute = ratio((a_m * d - d * a_m).norm(), 2.0 * na * nd);
    DrazinResiduals { power, outer, commute }
}

/// Group inverse `A^#`, which exists iff the Drazin index is at most 1.
pub fn group_inverse(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Option<ComplexMatrix>> {
    if drazin_index(a, tol)? > 1 {
        return Ok(None);
    }
    drazin_inverse(a, tol).map(Some)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Complementarity {
    pub complementary: bool,
    /// `P = A A^#`, the projection onto `R(A)` along `N(A)`.
    pub projector: Option<ComplexMatrix>,
}

/// `C^n = R(A) ⊕ N(A)` iff `rank(A) = rank(A^2)`.
pub fn complementarity_check(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Complementarity> {
    let ranks = rank_chain(a, tol)?;
    if ranks[1] != ranks[2] {
        return Ok(Complementarity { complementary: false, projector: None });
    }
    let ag = drazin_inverse(a, tol)?;
    let p = ComplexMatrix::new(a.as_matrix() * ag.as_matrix())?;
    Ok(Complementarity { complementary: true, projector: Some(p) })
}

/// Kato's gap `gamma(M, N) = inf dist(x, N) / dist(x, M ∩ N)` over `x ∈ M \ N`.
///
/// Computed from the singular values of `P_{N^⊥} Q_M`, which are the sines of
/// the principal angles between `M` and `N`. Directions with sine below
/// [`INTERSECTION_TOL`] span `M ∩ N` and are deflated; the gap is the smallest
/// remaining sine.
pub fn gap(m: &Subspace, n: &Subspace) -> Result<f64> {
    if m.ambient_dim() != n.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: m.ambient_dim(), actual: n.ambient_dim() });
    }
    if m.dim() == 0 {
        return Err(Error::SubspaceContained);
    }
    if n.dim() == 0 {
        return Ok(1.0);
    }
    let qm = m.basis();
    let qn = n.basis();
    let residual = qm - qn * (qn.adjoint() * qm);
    let sines = singular_values(&residual);
    sines
        .iter()
        .copied()
        .filter(|&s| s >= INTERSECTION_TOL)
        .fold(None, |acc: Option<f64>, s| Some(acc.map_or(s, |a| a.min(s))))
        .map(|s| s.min(1.0))
        .ok_or(Error::SubspaceContained)
}

/// `c_A`: the smallest singular value above the rank threshold.
pub fn reduced_min_modulus(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<f64> {
    let sv = singular_values(a.as_matrix());
    let smax = sv[0];
    if smax == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok(sv.iter().copied().filter(|&s| s > tol.rank_rel_tol * smax).fold(f64::INFINITY, f64::min))
}

/// `rho_A = c_A * gamma(R(A), N(A))`. Requires `R(A) ∩ N(A) = {0}`. For
/// invertible `A` the kernel is trivial and the gap is taken as 1.
pub fn rho(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<f64> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let ranks = rank_chain(a, tol)?;
    if ranks[1] != ranks[2] {
        return Err(Error::RangeKernelOverlap { rank: ranks[1], rank_of_square: ranks[2] });
    }
    let c_a = reduced_min_modulus(a, tol)?;
    Ok(c_a * range_kernel_gap(a, tol)?)
}

fn range_kernel_gap(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<f64> {
    let kernel = kernel_basis(a, tol)?;
    if kernel.dim() == 0 {
        warn!("N(A) = {{0}}: the range-kernel gap is taken as 1");
        return Ok(1.0);
    }
    gap(&range_basis(a, tol)?, &kernel)
}

/// Full structural summary of `A`.
pub fn analyze(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<StructureReport> {
    let ranks = rank_chain(a, tol)?;
    let asc = ascent(a, tol)?;
    let desc = stabilization_index(&ranks);
    let comp = complementarity_check(a, tol)?;
    let (gap_range_kernel, c_a, rho_a) = if comp.complementary && !a.is_zero() {
        let g = range_kernel_gap(a, tol)?;
        let c_a = reduced_min_modulus(a, tol)?;
        (Some(g), Some(c_a), Some(c_a * g))
    } else {
        (None, None, None)
    };
    Ok(StructureReport {
        rank: ranks[1],
        rank_of_square: ranks[2],
        ascent: asc,
        descent: desc,
        drazin_index: asc.max(desc),
        invertible: ranks[1] == a.order(),
        complementary: comp.complementary,
        projector: comp.projector,
        gap_range_kernel,
        c_a,
        rho_a,
    })
}

/// Line through the origin spanned by `(cos t, sin t)` in the real plane.
pub fn real_line(t: f64) -> Subspace {
    Subspace::from_orthonormal(CMat::from_column_slice(2, 1, &[c(t.cos(), 0.0), c(t.sin(), 0.0)]), 1e-12)
        .expect("unit vector")
}
