//! Numerical range `W(A) = {<Ax, x> : ||x|| = 1}` traced through its support
//! function `h(theta) = lambda_max((e^{i theta} A + e^{-i theta} A^H) / 2)`,
//! the sampled spatial range in `l^p`, and the boundary theorem checks.

mod export;
mod geometry;

pub use export::{to_csv, to_svg};
pub use geometry::{convex_hull, hausdorff, is_convex, point_polyline_distance};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{c, hermitian_top, CMat, CVec, ComplexMatrix, ToleranceConfig};
use crate::rng::{complex_normal_vector, derive_seed, rng_from_seed};
use crate::sip::{sip, LpSpace};
use crate::structure::{drazin_index, rank_chain, rho};

pub const DEFAULT_POINTS: usize = 720;
pub const MIN_POINTS: usize = 16;
const SAMPLE_CHUNK: usize = 1024;
const TAG_SPATIAL: u64 = 5;
const REFINE_ITERS: usize = 100;
const HAUSDORFF_EDGE_SAMPLES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OriginLocation {
    Outside,
    Boundary,
    Interior,
}

impl std::fmt::Display for OriginLocation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            OriginLocation::Outside => "OUTSIDE",
            OriginLocation::Boundary => "BOUNDARY",
            OriginLocation::Interior => "INTERIOR",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumRangeBoundary {
    pub thetas: Vec<f64>,
    pub support_values: Vec<f64>,
    pub boundary_points: Vec<Complex64>,
    pub origin_location: OriginLocation,
    pub origin_distance: f64,
    /// `min h` refined between grid angles. `|min_support|` is the distance
    /// from the origin to the boundary.
    pub min_support: f64,
    pub origin_tol: f64,
}

impl NumRangeBoundary {
    /// Boundary points with consecutive repeats (flat spots of the support
    /// function) collapsed.
    pub fn polyline(&self) -> Vec<Complex64> {
        let scale = self.boundary_points.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let eps = 1e-12 * (1.0 + scale);
        let mut out: Vec<Complex64> = Vec::with_capacity(self.boundary_points.len());
        for &p in &self.boundary_points {
            if out.last().is_none_or(|&q: &Complex64| (p - q).norm() > eps) {
                out.push(p);
            }
        }
        while out.len() > 1 && (out[0] - out[out.len() - 1]).norm() <= eps {
            out.pop();
        }
        out
    }
}

fn rotated_hermitian(a: &CMat, theta: f64) -> CMat {
    let e = Complex64::from_polar(1.0, theta);
    (a * e + a.adjoint() * e.conj()) * c(0.5, 0.0)
}

/// `h(theta)` and the boundary point `v^H A v` for the top eigenvector.
fn support(a: &CMat, theta: f64) -> Result<(f64, Complex64)> {
    let (h, v) = hermitian_top(&rotated_hermitian(a, theta))?;
    Ok((h, v.dotc(&(a * &v))))
}

/// Absolute tolerance used to place the origin on the boundary.
pub fn origin_tol(a: &ComplexMatrix, tol: &ToleranceConfig) -> f64 {
    tol.residual_tol * a.spectral_norm().max(1.0)
}

/// Traces the boundary on a uniform grid of `m` angles in `[0, 2 pi)` and
/// locates the origin with the default tolerances.
pub fn trace_boundary(a: &ComplexMatrix, m: usize) -> Result<NumRangeBoundary> {
    trace_boundary_with(a, m, &ToleranceConfig::default())
}

pub fn trace_boundary_with(a: &ComplexMatrix, m: usize, tol: &ToleranceConfig) -> Result<NumRangeBoundary> {
    if m < MIN_POINTS {
        return Err(Error::InvalidConfig(format!("grid size {m} is below {MIN_POINTS}")));
    }
    let am = a.as_matrix();
    let two_pi = 2.0 * std::f64::consts::PI;
    let thetas: Vec<f64> = (0..m).map(|i| two_pi * i as f64 / m as f64).collect();
    let vals: Vec<(f64, Complex64)> = thetas.par_iter().map(|&t| support(am, t)).collect::<Result<_>>()?;
    let support_values: Vec<f64> = vals.iter().map(|v| v.0).collect();
    let boundary_points: Vec<Complex64> = vals.iter().map(|v| v.1).collect();

    let (imin, &hmin) = support_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("non-empty grid");
    let step = two_pi / m as f64;
    let min_support = refine_min(am, thetas[imin] - step, thetas[imin] + step)?.min(hmin);

    let otol = origin_tol(a, tol);
    let mut boundary = NumRangeBoundary {
        thetas,
        support_values,
        boundary_points,
        origin_location: OriginLocation::Boundary,
        origin_distance: 0.0,
        min_support,
        origin_tol: otol,
    };
    let (loc, dist) = origin_report(&boundary, otol);
    boundary.origin_location = loc;
    boundary.origin_distance = dist;
    Ok(boundary)
}

/// Golden-section minimum of `h` on `[lo, hi]`.
fn refine_min(a: &CMat, mut lo: f64, mut hi: f64) -> Result<f64> {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let h = |t: f64| -> Result<f64> { Ok(hermitian_top(&rotated_hermitian(a, t))?.0) };
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = h(x1)?;
    let mut f2 = h(x2)?;
    for _ in 0..REFINE_ITERS {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = h(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = h(x2)?;
        }
    }
    Ok(f1.min(f2))
}

/// Origin location and its distance to the boundary of `W(A)`.
pub fn origin_report(boundary: &NumRangeBoundary, tol: f64) -> (OriginLocation, f64) {
    let hmin = boundary.min_support;
    if hmin.abs() <= tol {
        (OriginLocation::Boundary, 0.0)
    } else if hmin > 0.0 {
        (OriginLocation::Interior, hmin)
    } else {
        (OriginLocation::Outside, -hmin)
    }
}

/// `[Ax, x] = <J(x), Ax>` for `count` random unit vectors of `space`.
pub fn spatial_range_samples(a: &ComplexMatrix, space: &LpSpace, count: usize, seed: u64) -> Result<Vec<Complex64>> {
    if count == 0 {
        return Err(Error::InvalidConfig("sample count must be positive".into()));
    }
    let n = a.order();
    if space.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: space.dim() });
    }
    let am = a.as_matrix();
    let chunks = count.div_ceil(SAMPLE_CHUNK);
    let per_chunk: Vec<Vec<Complex64>> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut rng = rng_from_seed(derive_seed(seed, &[TAG_SPATIAL, ci as u64]));
            let len = SAMPLE_CHUNK.min(count - ci * SAMPLE_CHUNK);
            let mut out = Vec::with_capacity(len);
            while out.len() < len {
                let x: CVec = complex_normal_vector(&mut rng, n);
                if let Some(x) = space.normalize(&x) {
                    out.push(sip(&(am * &x), &x, space));
                }
            }
            out
        })
        .collect();
    Ok(per_chunk.into_iter().flatten().collect())
}

/// Hausdorff distance between the hull boundary of `count` samples of the
/// spatial range in `space` and the traced boundary of the Euclidean `W(A)`.
pub fn hull_boundary_compare(a: &ComplexMatrix, space: &LpSpace, count: usize, m: usize, seed: u64) -> Result<f64> {
    let samples = spatial_range_samples(a, space, count, seed)?;
    let hull = convex_hull(&samples);
    let traced = trace_boundary(a, m)?.polyline();
    Ok(hausdorff(&hull, &traced, HAUSDORFF_EDGE_SAMPLES))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryEigenReport {
    /// The origin lies on the boundary of the (closed convex) numerical range.
    pub ns_hypothesis: bool,
    /// `nullity(A) = nullity(A^2)`, evaluated only under the hypothesis.
    pub ns_conclusion: Option<bool>,
    /// Drazin index at most 1, evaluated only under the hypothesis.
    pub sinclair_conclusion: Option<bool>,
    pub counterexample: bool,
}

pub fn boundary_eigen_checks(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<BoundaryEigenReport> {
    let boundary = trace_boundary_with(a, DEFAULT_POINTS, tol)?;
    let hyp = boundary.origin_location == OriginLocation::Boundary;
    if !hyp {
        return Ok(BoundaryEigenReport {
            ns_hypothesis: false,
            ns_conclusion: None,
            sinclair_conclusion: None,
            counterexample: false,
        });
    }
    let ranks = rank_chain(a, tol)?;
    let ns = ranks[1] == ranks[2];
    let sinclair = drazin_index(a, tol)? <= 1;
    Ok(BoundaryEigenReport {
        ns_hypothesis: true,
        ns_conclusion: Some(ns),
        sinclair_conclusion: Some(sinclair),
        counterexample: !(ns && sinclair),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SufficiencyReport {
    /// `c_A * gamma(R(A), N(A))`, absent when range and kernel overlap.
    pub rho: Option<f64>,
    /// Distance from the origin to the boundary of `W(A)`.
    pub min_boundary_distance: f64,
    pub boundary_hits_ball: bool,
    pub hypothesis_ok: bool,
    pub complementary: bool,
}

/// Checks that a boundary point of `W(A)` strictly inside `B(0, rho_A)`
/// comes with `R(A) ⊕ N(A) = C^n`.
pub fn numrange_sufficiency_check(a: &ComplexMatrix, m: usize, tol: &ToleranceConfig) -> Result<SufficiencyReport> {
    let boundary = trace_boundary_with(a, m, tol)?;
    let dist = boundary.min_support.abs();
    let ranks = rank_chain(a, tol)?;
    let complementary = ranks[1] == ranks[2];
    if !complementary {
        return Ok(SufficiencyReport {
            rho: None,
            min_boundary_distance: dist,
            boundary_hits_ball: false,
            hypothesis_ok: false,
            complementary,
        });
    }
    let r = rho(a, tol)?;
    let hits = dist < r;
    Ok(SufficiencyReport {
        rho: Some(r),
        min_boundary_distance: dist,
        boundary_hits_ball: hits,
        hypothesis_ok: hits,
        complementary,
    })
}
