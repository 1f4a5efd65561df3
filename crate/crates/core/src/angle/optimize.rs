//! The cosine ratio as an objective over domain coordinates, plus the
//! sampling, descent and local-check machinery used to minimize it.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::numkernel::{c, CMat, CVec};
use crate::rng::{complex_normal_vector, derive_seed, rng_from_seed, unit_sphere_vector};
use crate::sip::{lp_norm, sip, LpSpace};

type RVec = DVector<f64>;
type RMat = DMatrix<f64>;

/// Samples (and descent iterates) with `||Bz|| <= COLLAR * kernel_thr * ||z||` are skipped.
pub(crate) const COLLAR: f64 = 10.0;
const SAMPLE_CHUNK: usize = 1024;
const NUMERIC_STEP: f64 = 1e-6;
const ARMIJO: f64 = 1e-4;

pub(crate) const TAG_SAMPLE: u64 = 1;
pub(crate) const TAG_START: u64 = 2;
pub(crate) const TAG_CHECK: u64 = 3;
pub(crate) const TAG_KAPPA: u64 = 4;

/// `f(z) = Re[Bz, Qz] / (||Bz|| ||Qz||)` with `B = AQ`, `Q` an orthonormal
/// domain basis (the identity for the unrestricted problem).
pub(crate) struct Ratio {
    b: CMat,
    q: Option<CMat>,
    space: LpSpace,
    sigma_max: f64,
    kernel_thr: f64,
    /// `Herm(Q^H A Q)` and `B^H B`, used by the Euclidean fast path.
    h: CMat,
    g: CMat,
}

impl Ratio {
    /// `sigma_max` is the largest singular value of `AQ`; the numerical
    /// kernel is `||AQz|| <= rank_rel_tol * sigma_max * ||z||`.
    pub(crate) fn new(a: &CMat, q: Option<&CMat>, space: LpSpace, sigma_max: f64, rank_rel_tol: f64) -> Self {
        let b = match q {
            Some(q) => a * q,
            None => a.clone(),
        };
        let qab = match q {
            Some(q) => q.adjoint() * &b,
            None => b.clone(),
        };
        let h = (&qab + qab.adjoint()) * c(0.5, 0.0);
        let g = b.adjoint() * &b;
        Self { b, q: q.cloned(), space, sigma_max, kernel_thr: rank_rel_tol * sigma_max, h, g }
    }

    pub(crate) fn dim(&self) -> usize {
        self.b.ncols()
    }

    pub(crate) fn b(&self) -> &CMat {
        &self.b
    }

    pub(crate) fn h(&self) -> &CMat {
        &self.h
    }


    pub(crate) fn kernel_thr(&self) -> f64 {
        self.kernel_thr
    }

    pub(crate) fn embed(&self, z: &CVec) -> CVec {
        match &self.q {
            Some(q) => q * z,
            None => z.clone(),
        }
    }

    fn eval_outside(&self, z: &CVec, band: f64) -> Option<f64> {
        let bz = &self.b * z;
        let nb = bz.norm();
        let nz = z.norm();
        if nz == 0.0 || nb <= band * nz {
            return None;
        }
        let v = if self.space.is_euclidean() {
            z.dotc(&(&self.h * z)).re / (nb * nz)
        } else {
            let x = self.embed(z);
            sip(&bz, &x, &self.space).re / (lp_norm(&bz, &self.space) * lp_norm(&x, &self.space))
        };
        Some(v.clamp(-1.0, 1.0))
    }

    /// Ratio value, `None` on the numerical kernel.
    pub(crate) fn value(&self, z: &CVec) -> Option<f64> {
        self.eval_outside(z, self.kernel_thr)
    }

    /// Ratio value, `None` inside the kernel collar.
    pub(crate) fn admissible(&self, z: &CVec) -> Option<f64> {
        self.eval_outside(z, COLLAR * self.kernel_thr)
    }

    /// Gradient with respect to `(Re z, Im z)` packed as `d/dRe + i d/dIm`.
    pub(crate) fn gradient(&self, z: &CVec) -> Option<CVec> {
        if self.space.is_euclidean() {
            let hz = &self.h * z;
            let a = z.dotc(&hz).re;
            let b = z.dotc(&(&self.g * z)).re;
            let cc = z.norm_squared();
            let bc = b * cc;
            if bc <= 0.0 {
                return None;
            }
            let gz = &self.g * z;
            let coef = a / (2.0 * bc.powf(1.5));
            Some((hz * c(1.0 / bc.sqrt(), 0.0) - (gz * c(cc, 0.0) + z * c(b, 0.0)) * c(coef, 0.0)) * c(2.0, 0.0))
        } else {
            Some(numeric_gradient(z, |w| self.value(w)))
        }
    }
}

/// Central differences on each real coordinate; a stencil that leaves the
/// domain of `f` contributes a zero component.
pub(crate) fn numeric_gradient<F: Fn(&CVec) -> Option<f64>>(z: &CVec, f: F) -> CVec {
    let mut grad = CVec::zeros(z.len());
    let mut w = z.clone();
    for j in 0..z.len() {
        let orig = w[j];
        let mut parts = [0.0; 2];
        for (slot, dir) in [c(1.0, 0.0), c(0.0, 1.0)].into_iter().enumerate() {
            w[j] = orig + dir * NUMERIC_STEP;
            let plus = f(&w);
            w[j] = orig - dir * NUMERIC_STEP;
            let minus = f(&w);
            w[j] = orig;
            if let (Some(p), Some(m)) = (plus, minus) {
                parts[slot] = (p - m) / (2.0 * NUMERIC_STEP);
            }
        }
        grad[j] = c(parts[0], parts[1]);
    }
    grad
}

pub(crate) fn normalize(z: CVec) -> CVec {
    let n = z.norm();
    if n > 0.0 {
        z.unscale(n)
    } else {
        z
    }
}

/// Projected gradient descent with Armijo backtracking. Returns the last
/// accepted point and its value.
pub(crate) fn descend<F, G, P>(start: CVec, value: F, grad: G, project: P, max_iters: usize, step_tol: f64) -> Option<(CVec, f64)>
where
    F: Fn(&CVec) -> Option<f64>,
    G: Fn(&CVec) -> Option<CVec>,
    P: Fn(CVec) -> CVec,
{
    let mut z = project(start);
    let mut f = value(&z)?;
    let mut t: f64 = 1.0;
    for _ in 0..max_iters {
        let Some(g) = grad(&z) else { break };
        let gn2 = g.norm_squared();
        if gn2 <= 1e-28 {
            break;
        }
        let gn = gn2.sqrt();
        t = t.min(1.0 / gn);
        let mut accepted = false;
        while t * gn >= step_tol {
            let cand = project(&z - &g * c(t, 0.0));
            if let Some(fc) = value(&cand) {
                if fc <= f - ARMIJO * t * gn2 {
                    z = cand;
                    f = fc;
                    accepted = true;
                    t *= 2.0;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Some((z, f))
}

/// BFGS on the real coordinates of `z` with Armijo backtracking. The inverse
/// Hessian estimate restarts from a scaled identity whenever the step is not
/// a descent direction.
pub(crate) fn quasi_newton<F, G, P>(start: CVec, value: F, grad: G, project: P, max_iters: usize, step_tol: f64) -> Option<(CVec, f64)>
where
    F: Fn(&CVec) -> Option<f64>,
    G: Fn(&CVec) -> Option<CVec>,
    P: Fn(CVec) -> CVec,
{
    let to_real = |v: &CVec| RVec::from_iterator(2 * v.len(), v.iter().flat_map(|z| [z.re, z.im]));
    let to_complex = |v: &RVec| CVec::from_iterator(v.len() / 2, (0..v.len() / 2).map(|i| c(v[2 * i], v[2 * i + 1])));
    let mut z = project(start);
    let mut f = value(&z)?;
    let Some(g0) = grad(&z) else { return Some((z, f)) };
    let mut g = to_real(&g0);
    let m = g.len();
    let mut hinv = RMat::identity(m, m);
    let mut scaled = false;
    for _ in 0..max_iters {
        let gn = g.norm();
        if gn <= 1e-14 {
            break;
        }
        let mut p = -(&hinv * &g);
        if p.dot(&g) >= 0.0 {
            hinv = RMat::identity(m, m);
            scaled = false;
            p = -g.clone();
        }
        let pn = p.norm();
        let mut t = if scaled { 1.0 } else { (1.0 / pn).min(1.0) };
        let slope = p.dot(&g);
        let mut next = None;
        while t * pn >= step_tol {
            let cand = project(&z + to_complex(&(&p * t)));
            if let Some(fc) = value(&cand) {
                if fc <= f + ARMIJO * t * slope {
                    next = Some((cand, fc));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((zn, fnew)) = next else { break };
        let Some(gz) = grad(&zn) else { break };
        let gnew = to_real(&gz);
        let s = to_real(&(&zn - &z));
        let y = &gnew - &g;
        let sy = s.dot(&y);
        if sy > 1e-12 * s.norm() * y.norm() {
            if !scaled {
                hinv = RMat::identity(m, m) * (sy / y.dot(&y));
                scaled = true;
            }
            let rho = 1.0 / sy;
            let hy = &hinv * &y;
            let yhy = y.dot(&hy);
            hinv += (&s * s.transpose()) * (rho * (1.0 + rho * yhy)) - (&hy * s.transpose() + &s * hy.transpose()) * rho;
        }
        let done = f - fnew <= 1e-16 * f.abs().max(1.0) && t * pn < 1e-10;
        z = zn;
        f = fnew;
        g = gnew;
        if done {
            break;
        }
    }
    Some((z, f))
}

/// True when no random perturbation at radii `1e-2 .. 1e-5` lowers the
/// value by more than `1e-9`; otherwise returns the improving point.
pub(crate) fn local_check<F, P>(z: &CVec, f0: f64, value: F, project: P, per_radius: usize, seed: u64) -> Result<(), (CVec, f64)>
where
    F: Fn(&CVec) -> Option<f64>,
    P: Fn(CVec) -> CVec,
{
    let mut rng = rng_from_seed(seed);
    let mut best: Option<(CVec, f64)> = None;
    for r in [1e-2, 1e-3, 1e-4, 1e-5] {
        for _ in 0..per_radius {
            let u = unit_sphere_vector(&mut rng, z.len());
            let cand = project(z + u * c(r, 0.0));
            if let Some(v) = value(&cand) {
                if v < f0 - 1e-9 && best.as_ref().is_none_or(|(_, b)| v < *b) {
                    best = Some((cand, v));
                }
            }
        }
    }
    match best {
        None => Ok(()),
        Some(p) => Err(p),
    }
}

/// Orders candidates by value, then lexicographically by coordinates.
pub(crate) fn candidate_cmp(a: &(CVec, f64), b: &(CVec, f64)) -> std::cmp::Ordering {
    a.1.total_cmp(&b.1).then_with(|| {
        for (x, y) in a.0.iter().zip(b.0.iter()) {
            let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
            if o.is_ne() {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    })
}

/// The `keep` lowest admissible values among `count` uniform unit-sphere samples.
pub(crate) fn best_samples(ratio: &Ratio, count: usize, keep: usize, seed: u64) -> Vec<(CVec, f64)> {
    let d = ratio.dim();
    let chunks = count.div_ceil(SAMPLE_CHUNK);
    let per_chunk: Vec<Vec<(CVec, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut rng = rng_from_seed(derive_seed(seed, &[TAG_SAMPLE, ci as u64]));
            let len = SAMPLE_CHUNK.min(count - ci * SAMPLE_CHUNK);
            let mut local: Vec<(CVec, f64)> = Vec::with_capacity(keep + 1);
            for _ in 0..len {
                let z = unit_sphere_vector(&mut rng, d);
                if let Some(v) = ratio.admissible(&z) {
                    if local.len() < keep || v < local[local.len() - 1].1 {
                        local.push((z, v));
                        local.sort_by(candidate_cmp);
                        local.truncate(keep);
                    }
                }
            }
            local
        })
        .collect();
    let mut all: Vec<(CVec, f64)> = per_chunk.into_iter().flatten().collect();
    all.sort_by(candidate_cmp);
    all.truncate(keep);
    all
}

/// Multi-start minimization of the ratio: the best samples, fresh random
/// starts and any `extra` starts are refined in parallel; the overall best is
/// returned with `z` normalized to unit Euclidean length.
pub(crate) fn minimize_ratio(
    ratio: &Ratio,
    starts: usize,
    samples: usize,
    max_iters: usize,
    step_tol: f64,
    seed: u64,
    extra: Vec<CVec>,
) -> Option<(CVec, f64)> {
    let d = ratio.dim();
    let from_samples = starts.div_ceil(2);
    let mut initial: Vec<CVec> = best_samples(ratio, samples, from_samples, seed).into_iter().map(|(z, _)| z).collect();
    for i in 0..starts - from_samples.min(starts) {
        let mut rng = rng_from_seed(derive_seed(seed, &[TAG_START, i as u64]));
        initial.push(unit_sphere_vector(&mut rng, d));
    }
    initial.extend(extra);
    let refined: Vec<Option<(CVec, f64)>> = initial
        .into_par_iter()
        .map(|z0| {
            quasi_newton(z0, |z| ratio.admissible(z), |z| ratio.gradient(z), normalize, max_iters, step_tol)
                .map(|(z, f)| canonical(z, f))
        })
        .collect();
    refined.into_iter().flatten().min_by(candidate_cmp)
}

/// Removes the phase ambiguity (first entry of largest modulus made real
/// positive) so ties between equivalent minimizers break deterministically.
pub(crate) fn canonical(z: CVec, f: f64) -> (CVec, f64) {
    let z = normalize(z);
    let mut idx = 0;
    for (i, v) in z.iter().enumerate() {
        if v.norm() > z[idx].norm() * (1.0 + 1e-12) {
            idx = i;
        }
    }
    let pivot = z[idx];
    let z = if pivot.norm() > 0.0 { z * (pivot.conj() / pivot.norm()) } else { z };
    (z, f)
}

/// Minimizes `-|<J(k), r>| / (||k|| ||r||)` over `k` in the span of
/// `kernel` and `r` in the span of `range` (both ambient bases) in the
/// given `l^p` norm. Returns the minimum together with `(k, r)` in ambient
/// coordinates and whether the final point passed its local check.
pub(crate) struct KernelLimit {
    pub value: f64,
    pub k_coeffs: CVec,
    pub r: CVec,
    pub locally_optimal: bool,
}

pub(crate) fn kernel_limit_lp(
    kernel: &CMat,
    range: &CMat,
    space: &LpSpace,
    starts: &[CVec],
    random_starts: usize,
    max_iters: usize,
    seed: u64,
) -> Option<KernelLimit> {
    let m = kernel.ncols();
    let r = range.ncols();
    if m == 0 || r == 0 {
        return None;
    }
    let objective = |w: &CVec| -> Option<f64> {
        let k = kernel * w.rows(0, m);
        let rv = range * w.rows(m, r);
        let nk = lp_norm(&k, space);
        let nr = lp_norm(&rv, space);
        if nk <= 1e-300 || nr <= 1e-300 {
            return None;
        }
        Some(-(sip(&rv, &k, space).norm() / (nk * nr)).min(1.0))
    };
    let project = |w: CVec| -> CVec {
        let mut out = w;
        let nk = out.rows(0, m).norm();
        let nr = out.rows(m, r).norm();
        if nk > 0.0 {
            out.rows_mut(0, m).unscale_mut(nk);
        }
        if nr > 0.0 {
            out.rows_mut(m, r).unscale_mut(nr);
        }
        out
    };
    let mut initial: Vec<CVec> = starts.to_vec();
    for i in 0..random_starts {
        let mut rng = rng_from_seed(derive_seed(seed, &[TAG_KAPPA, i as u64]));
        initial.push(complex_normal_vector(&mut rng, m + r));
    }
    let refined: Vec<Option<(CVec, f64)>> = initial
        .into_par_iter()
        .map(|w0| {
            descend(w0, objective, |w| Some(numeric_gradient(w, objective)), project, max_iters, 1e-12)
        })
        .collect();
    let (mut w, mut v) = refined.into_iter().flatten().min_by(candidate_cmp)?;
    let mut locally_optimal = false;
    for round in 0..3u64 {
        match local_check(&w, v, objective, project, 40 * (m + r), derive_seed(seed, &[TAG_CHECK, round])) {
            Ok(()) => {
                locally_optimal = true;
                break;
            }
            Err((w2, _)) => {
                let (w3, v3) = descend(w2, objective, |w| Some(numeric_gradient(w, objective)), project, max_iters, 1e-12)?;
                w = w3;
                v = v3;
            }
        }
    }
    let k_coeffs = w.rows(0, m).into_owned();
    let rv = range * w.rows(m, r);
    Some(KernelLimit { value: v, k_coeffs, r: rv, locally_optimal })
}

/// Points `k - eps * phase * y` approaching the kernel vector `k` along a
/// preimage `y` of `r` (`B y = r`), the phase chosen so that the leading
/// term of the ratio is `-|<J(k), r>|`. The best admissible point over a
/// logarithmic sweep of `eps` is returned.
pub(crate) fn kernel_probe(ratio: &Ratio, k: &CVec, y: &CVec, w: Complex64) -> Option<(CVec, f64)> {
    let phase = if w.norm() > 0.0 { w.conj() / w.norm() } else { c(1.0, 0.0) };
    let by_norm = (ratio.b() * y).norm();
    if by_norm == 0.0 {
        return None;
    }
    let hi = (1e-2 * ratio.sigma_max).ln();
    let lo = (2.0 * COLLAR * ratio.kernel_thr()).ln();
    if hi.is_nan() || lo.is_nan() || hi <= lo {
        return None;
    }
    let steps = 40;
    (0..=steps)
        .filter_map(|i| {
            let target = (hi + (lo - hi) * i as f64 / steps as f64).exp();
            let eps = target / by_norm;
            let z = k - y * (phase * eps);
            ratio.admissible(&z).map(|v| canonical(z, v))
        })
        .min_by(candidate_cmp)
}

/// Minimum-norm preimage `B^+ r` via the thin SVD factors of `B`.
pub(crate) fn preimage(u: &CMat, sigma: &[f64], v: &CMat, rank: usize, r: &CVec) -> CVec {
    let coeffs = u.columns(0, rank).adjoint() * r;
    let scaled = CVec::from_iterator(rank, coeffs.iter().zip(sigma).map(|(x, s)| x / *s));
    v.columns(0, rank) * scaled
}
