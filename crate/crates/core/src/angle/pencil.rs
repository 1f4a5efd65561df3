//! Euclidean lower bound for the cosine ratio.
//!
//! With `N(z) = z^H H z`, `g = ||Bz||^2`, `c = ||z||^2` and the AM-GM bound
//! `sqrt(g c) <= (s g + c / s) / 2`, every admissible `z` satisfies
//! `N / sqrt(g c) >= mu(s)` for some `s > 0`, where `mu(s)` is the smallest
//! eigenvalue of the pencil `(H, D(s))`, `D(s) = (s B^H B + I / s) / 2`.
//! Hence `inf_s mu(s)` bounds the cosine from below, and it is exact when
//! it is not positive. In the right singular basis of `B` the pencil is
//! diagonal in `D`, so each `mu(s)` is one small Hermitian eigenproblem.

use crate::error::Result;
use crate::numkernel::{c, hermitian_eig_unchecked, CMat, CVec, Svd};

const GRID: usize = 400;
const LOG_PAD: f64 = 12.0;
const GOLDEN_ITERS: usize = 80;

pub(crate) struct PencilBound {
    /// `inf_s mu(s)`, further capped by the kernel limit when a kernel exists.
    pub lower_bound: f64,
    /// Domain vector attaining `mu` at the best `s`.
    pub minimizer: CVec,
    pub kernel_limit: Option<KernelPair>,
}

/// `-sigma_max(U_r^H K)`: the limit of the ratio along the best approach to
/// the kernel, with the realizing unit vectors.
pub(crate) struct KernelPair {
    pub value: f64,
    /// Kernel vector in domain coordinates.
    pub k: CVec,
    /// Range vector in ambient coordinates.
    pub r: CVec,
}

struct Reduced {
    k: CMat,
    sigma: Vec<f64>,
    rank: usize,
}

impl Reduced {
    fn weights(&self, log_s: f64) -> Vec<f64> {
        let s = log_s.exp();
        (0..self.sigma.len())
            .map(|i| {
                let sg = if i < self.rank { self.sigma[i] } else { 0.0 };
                (s * sg * sg + 1.0 / s) / 2.0
            })
            .collect()
    }

    fn scaled(&self, log_s: f64) -> CMat {
        let w = self.weights(log_s);
        let d = w.len();
        let mut m = self.k.clone();
        for j in 0..d {
            for i in 0..d {
                m[(i, j)] /= (w[i] * w[j]).sqrt();
            }
        }
        (&m + m.adjoint()) * c(0.5, 0.0)
    }

    fn mu(&self, log_s: f64) -> Result<f64> {
        Ok(hermitian_eig_unchecked(&self.scaled(log_s))?.0[0])
    }
}

/// `h` is `Herm(Q^H A Q)` (`d x d`), `svd_b` the thin SVD of `B = AQ`,
/// `embed` maps domain coordinates into the ambient space.
pub(crate) fn pencil_bound(h: &CMat, svd_b: &Svd, rank: usize, embed: impl Fn(&CMat) -> CMat) -> Result<PencilBound> {
    let w = &svd_b.v;
    let d = w.ncols();
    let mut k = w.adjoint() * h * w;
    for i in rank..d {
        for j in rank..d {
            k[(i, j)] = c(0.0, 0.0);
        }
    }
    let red = Reduced { k, sigma: svd_b.singular_values.clone(), rank };

    let smax = svd_b.sigma_max();
    let smin = svd_b.singular_values[rank - 1];
    let lo = -smax.ln() - LOG_PAD;
    let hi = -smin.ln() + LOG_PAD;
    let xs: Vec<f64> = (0..GRID).map(|i| lo + (hi - lo) * i as f64 / (GRID - 1) as f64).collect();
    let mut vals = Vec::with_capacity(GRID);
    for &x in &xs {
        vals.push(red.mu(x)?);
    }
    let (imin, _) = vals.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    let (mut a, mut b) = (xs[imin.saturating_sub(1)], xs[(imin + 1).min(GRID - 1)]);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - phi * (b - a);
    let mut x2 = a + phi * (b - a);
    let mut f1 = red.mu(x1)?;
    let mut f2 = red.mu(x2)?;
    for _ in 0..GOLDEN_ITERS {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = red.mu(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = red.mu(x2)?;
        }
    }
    let mut best_x = xs[imin];
    let mut best = vals[imin];
    for (x, f) in [(x1, f1), (x2, f2)] {
        if f < best {
            best = f;
            best_x = x;
        }
    }

    let (_, vecs) = hermitian_eig_unchecked(&red.scaled(best_x))?;
    let weights = red.weights(best_x);
    let y = CVec::from_iterator(d, (0..d).map(|i| vecs[(i, 0)] / weights[i].sqrt()));
    let minimizer = w * y;

    let kernel_limit = if rank < d {
        let kernel = w.columns(rank, d - rank).into_owned();
        let range = svd_b.u.columns(0, rank).into_owned();
        let cross = range.adjoint() * embed(&kernel);
        let dec = crate::numkernel::svd_rect(&cross)?;
        let value = -dec.sigma_max().min(1.0);
        let r = &range * dec.u.column(0);
        let k = &kernel * dec.v.column(0);
        Some(KernelPair { value, k, r })
    } else {
        None
    };
    let lower_bound = match &kernel_limit {
        Some(kp) => best.min(kp.value),
        None => best,
    };
    Ok(PencilBound { lower_bound: lower_bound.max(-1.0), minimizer, kernel_limit })
}
