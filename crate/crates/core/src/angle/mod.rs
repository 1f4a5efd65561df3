//! Operator cosine `cos A = inf Re[Ax, x] / (||Ax|| ||x||)` over `x` off the
//! kernel, the angle `arccos(cos A)`, its restriction to a subspace, and the
//! spectral rotation and ray tests.
//!
//! The estimate is the smallest ratio value found by sampling plus
//! multi-start descent, so it is an upper bound on the infimum. Approaches
//! to the kernel are covered by the kernel limit
//! `kappa = -sup |<J(k), r>| / (||k|| ||r||)` over `k` in `N(A)`, `r` in
//! `R(A)`, which the ratio tends to along `x = k + eps y`, `Ay = r`.
//! A `BELOW_PI` verdict needs a certificate: the pencil lower bound in the
//! Euclidean case, a local no-descent check otherwise.

mod optimize;
mod pencil;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{
    c, eigenvalues, rank_from_singular_values, svd_rect, CMat, CVec, ComplexMatrix, Subspace, ToleranceConfig,
};
use crate::rng::derive_seed;
use crate::sip::{lp_norm, sip, LpSpace};
use crate::structure::rank_chain;

use optimize::{canonical, candidate_cmp, quasi_newton, kernel_limit_lp, kernel_probe, local_check, normalize, preimage, Ratio};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    BelowPi,
    AtPi,
    Undetermined,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::BelowPi => "BELOW_PI",
            Classification::AtPi => "AT_PI",
            Classification::Undetermined => "UNDETERMINED",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub starts: usize,
    pub random_samples: usize,
    pub max_iters: usize,
    pub step_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { starts: 64, random_samples: 100_000, max_iters: 500, step_tol: 1e-12, seed: 0 }
    }
}

impl OptimizerConfig {
    /// Reduced effort for bulk use (property suites).
    pub fn light(seed: u64) -> Self {
        Self { starts: 8, random_samples: 2000, max_iters: 200, step_tol: 1e-12, seed }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 || self.random_samples == 0 || self.max_iters == 0 {
            return Err(Error::InvalidConfig("starts, random_samples and max_iters must be positive".into()));
        }
        if !(self.step_tol > 0.0 && self.step_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!("step_tol = {} must be positive", self.step_tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleReport {
    pub cos_estimate: f64,
    pub angle: f64,
    /// Unit vector (in the space norm) attaining `cos_estimate`.
    pub minimizer: Vec<Complex64>,
    pub classification: Classification,
    pub margin_used: f64,
    pub starts: usize,
    pub samples: usize,
    pub seed: u64,
    /// Certified lower bound on the cosine, when one is available.
    pub lower_bound: Option<f64>,
    /// Limit of the ratio along the best approach to the kernel.
    pub kernel_limit: Option<f64>,
}

/// `Re[Ax, x] / (||Ax|| ||x||)`.
pub fn rayleigh_ratio(a: &ComplexMatrix, x: &CVec, space: &LpSpace, tol: &ToleranceConfig) -> Result<f64> {
    if x.len() != a.order() || space.dim() != a.order() {
        return Err(Error::DimensionMismatch { expected: a.order(), actual: x.len() });
    }
    if x.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::ZeroVector);
    }
    let ax = a.as_matrix() * x;
    if ax.norm() <= tol.rank_rel_tol * a.spectral_norm() * x.norm() {
        return Err(Error::NearKernel);
    }
    let v = sip(&ax, x, space).re / (lp_norm(&ax, space) * lp_norm(x, space));
    Ok(v.clamp(-1.0, 1.0))
}

pub fn cosine_estimate(
    a: &ComplexMatrix,
    space: &LpSpace,
    cfg: &OptimizerConfig,
    tol: &ToleranceConfig,
) -> Result<AngleReport> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    estimate(a, None, space, cfg, tol)
}

/// Cosine of `A` restricted to `domain` (`A` still maps into the whole space).
pub fn restricted_cosine(
    a: &ComplexMatrix,
    domain: &Subspace,
    space: &LpSpace,
    cfg: &OptimizerConfig,
    tol: &ToleranceConfig,
) -> Result<AngleReport> {
    if domain.ambient_dim() != a.order() {
        return Err(Error::DimensionMismatch { expected: a.order(), actual: domain.ambient_dim() });
    }
    if domain.dim() == 0 {
        return Err(Error::VanishesOnDomain);
    }
    estimate(a, Some(domain.basis()), space, cfg, tol)
}

fn estimate(
    a: &ComplexMatrix,
    q: Option<&CMat>,
    space: &LpSpace,
    cfg: &OptimizerConfig,
    tol: &ToleranceConfig,
) -> Result<AngleReport> {
    cfg.validate()?;
    tol.validate()?;
    let n = a.order();
    if space.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: space.dim() });
    }
    let b = match q {
        Some(q) => a.as_matrix() * q,
        None => a.as_matrix().clone(),
    };
    let svd_b = svd_rect(&b)?;
    let smax = svd_b.sigma_max();
    if smax == 0.0 {
        return Err(if q.is_some() { Error::VanishesOnDomain } else { Error::ZeroMatrix });
    }
    let rank = rank_from_singular_values(&svd_b.singular_values, tol.rank_rel_tol);
    let d = b.ncols();
    let ratio = Ratio::new(a.as_matrix(), q, *space, smax, tol.rank_rel_tol);
    let embed = |m: &CMat| -> CMat {
        match q {
            Some(q) => q * m,
            None => m.clone(),
        }
    };
    let kernel = svd_b.v.columns(rank, d - rank).into_owned();
    let range = svd_b.u.columns(0, rank).into_owned();

    let mut extra: Vec<CVec> = Vec::new();
    let mut probes: Vec<(CVec, f64)> = Vec::new();
    let mut lower_bound = None;
    let mut kernel_limit = None;
    let mut kernel_certified = false;

    if space.is_euclidean() {
        let pb = pencil::pencil_bound(ratio.h(), &svd_b, rank, embed)?;
        lower_bound = Some(pb.lower_bound);
        extra.push(pb.minimizer.clone());
        if let Some(kp) = pb.kernel_limit {
            kernel_limit = Some(kp.value);
            let y = preimage(&svd_b.u, &svd_b.singular_values, &svd_b.v, rank, &kp.r);
            let w = ratio.embed(&kp.k).dotc(&kp.r);
            if let Some(p) = kernel_probe(&ratio, &kp.k, &y, w) {
                probes.push(p);
            }
        }
    } else if rank < d {
        let kernel_amb = embed(&kernel);
        // Euclidean optimum of the same problem as a start.
        let cross = range.adjoint() * &kernel_amb;
        let dec = svd_rect(&cross)?;
        let mut w0 = CVec::zeros((d - rank) + rank);
        w0.rows_mut(0, d - rank).copy_from(&dec.v.column(0));
        w0.rows_mut(d - rank, rank).copy_from(&dec.u.column(0));
        let seed = derive_seed(cfg.seed, &[optimize::TAG_KAPPA]);
        if let Some(kl) = kernel_limit_lp(&kernel_amb, &range, space, &[w0], 7, cfg.max_iters, seed) {
            kernel_limit = Some(kl.value);
            kernel_certified = kl.locally_optimal;
            let k_dom = &kernel * &kl.k_coeffs;
            let y = preimage(&svd_b.u, &svd_b.singular_values, &svd_b.v, rank, &kl.r);
            let w = sip(&kl.r, &ratio.embed(&k_dom), space);
            if let Some(p) = kernel_probe(&ratio, &k_dom, &y, w) {
                probes.push(p);
            }
        }
    }
    extra.extend(probes.iter().map(|(z, _)| z.clone()));

    let found = optimize::minimize_ratio(&ratio, cfg.starts, cfg.random_samples, cfg.max_iters, cfg.step_tol, cfg.seed, extra);
    let mut best = found.into_iter().chain(probes).min_by(candidate_cmp).ok_or(Error::NoConvergence {
        routine: "cosine optimizer",
        iterations: cfg.max_iters,
        order: n,
        fingerprint: a.fingerprint(),
    })?;

    let margin = tol.angle_margin;
    let mut certified = false;
    if space.is_euclidean() {
        certified = lower_bound.is_some_and(|lb| lb > -1.0 + margin);
    } else {
        let per_radius = 40 * d;
        for round in 0..3u64 {
            let seed = derive_seed(cfg.seed, &[optimize::TAG_CHECK, round]);
            match local_check(&best.0, best.1, |z| ratio.admissible(z), normalize, per_radius, seed) {
                Ok(()) => {
                    certified = true;
                    break;
                }
                Err((z, _)) => {
                    let refined = quasi_newton(z, |z| ratio.admissible(z), |z| ratio.gradient(z), normalize, cfg.max_iters, cfg.step_tol);
                    if let Some((z, f)) = refined {
                        best = canonical(z, f);
                    }
                }
            }
        }
        if !certified {
            let near_kernel = (ratio.b() * &best.0).norm() < 1e-3 * smax * best.0.norm();
            certified = near_kernel && kernel_certified && kernel_limit.is_some_and(|k| best.1 >= k - 1e-6);
        }
    }

    // Report the minimizer at unit norm in the space and the ratio value there.
    let x = ratio.embed(&best.0);
    let x = x.unscale(lp_norm(&x, space));
    let z_unit = best.0.unscale(lp_norm(&ratio.embed(&best.0), space));
    let cos = ratio.value(&z_unit).unwrap_or(best.1);
    let classification = if cos <= -1.0 + margin {
        Classification::AtPi
    } else if certified {
        Classification::BelowPi
    } else {
        Classification::Undetermined
    };
    Ok(AngleReport {
        cos_estimate: cos,
        angle: cos.acos(),
        minimizer: x.iter().copied().collect(),
        classification,
        margin_used: margin,
        starts: cfg.starts,
        samples: cfg.random_samples,
        seed: cfg.seed,
        lower_bound,
        kernel_limit,
    })
}

fn wrap_angle(t: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut r = t.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r -= two_pi;
    }
    r
}

/// Eigenvalues with the `nullity(A^n)` smallest-modulus ones (the numerical
/// zero eigenvalues) removed.
fn nonzero_eigenvalues(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Vec<Complex64>> {
    let chain = rank_chain(a, tol)?;
    let zeros = a.order() - chain[chain.len() - 1];
    let mut eig = eigenvalues(a)?;
    eig.sort_by(|x, y| x.norm().total_cmp(&y.norm()).then(x.re.total_cmp(&y.re)).then(x.im.total_cmp(&y.im)));
    Ok(eig.split_off(zeros))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rotation {
    /// Unit-modulus scalar.
    pub t: Complex64,
    pub feasible: bool,
    /// Smallest angular distance from `arg(t lambda)` to `pi` over nonzero eigenvalues.
    pub clearance: f64,
}

/// Rotation `t` that moves the nonzero spectrum as far as possible from the
/// negative real axis: the largest gap between consecutive eigenvalue
/// arguments is centred on `pi`. Equal gaps are broken by the smallest
/// `|arg t|`, positive first.
pub fn scalar_rotation_search(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Rotation> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let eig = nonzero_eigenvalues(a, tol)?;
    if eig.is_empty() {
        return Ok(Rotation { t: c(1.0, 0.0), feasible: true, clearance: std::f64::consts::PI });
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut args: Vec<f64> = eig.iter().map(|z| z.arg().rem_euclid(two_pi)).collect();
    args.sort_by(f64::total_cmp);
    let m = args.len();
    let gaps: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let start = args[i];
            let end = if i + 1 < m { args[i + 1] } else { args[0] + two_pi };
            (end - start, start + (end - start) / 2.0)
        })
        .collect();
    let widest = gaps.iter().map(|g| g.0).fold(0.0, f64::max);
    let theta = gaps
        .iter()
        .filter(|g| g.0 >= widest - 1e-12)
        .map(|g| {
            let th = wrap_angle(std::f64::consts::PI - g.1);
            if (th + std::f64::consts::PI).abs() < 1e-15 { std::f64::consts::PI } else { th }
        })
        .fold(None, |best: Option<f64>, th| match best {
            None => Some(th),
            Some(b) if th.abs() < b.abs() - 1e-12 => Some(th),
            Some(b) if (th.abs() - b.abs()).abs() <= 1e-12 && th > b => Some(th),
            keep => keep,
        })
        .expect("at least one gap");
    let clearance = widest / 2.0;
    Ok(Rotation { t: Complex64::from_polar(1.0, theta), feasible: clearance > tol.angle_margin, clearance })
}

/// True iff no nonzero eigenvalue has argument within `angle_tol` of `omega`.
pub fn ray_clearance(a: &ComplexMatrix, omega: f64, angle_tol: f64, tol: &ToleranceConfig) -> Result<bool> {
    if a.is_zero() {
        return Ok(true);
    }
    let eig = nonzero_eigenvalues(a, tol)?;
    Ok(eig.iter().all(|z| wrap_angle(z.arg() - omega).abs() > angle_tol))
}

#[cfg(test)]
mod tests;
