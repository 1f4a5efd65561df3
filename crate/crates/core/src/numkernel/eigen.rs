//! General complex eigenvalues: Hessenberg reduction followed by explicitly
//! shifted QR sweeps with Givens rotations, Wilkinson shifts and periodic
//! exceptional shifts (permutation-like matrices stall the plain Wilkinson
//! iteration).

use num_complex::Complex64;

use super::{c, fingerprint, CMat, ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// All `n` eigenvalues of `a`, with multiplicity. The iteration cap is
/// `100 * n` QR sweeps.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = a.order();
    if n == 1 {
        return Ok(vec![a[(0, 0)]]);
    }
    let mut h = a.as_matrix().clone().hessenberg().h();
    for j in 0..n {
        for i in (j + 2)..n {
            h[(i, j)] = ZERO;
        }
    }
    let norm = h.norm();
    if norm == 0.0 {
        return Ok(vec![ZERO; n]);
    }

    let cap = 100 * n;
    let mut sweeps = 0usize;
    let mut since_deflation = 0usize;
    let mut values = Vec::with_capacity(n);
    // `hi` is one past the last row of the active block.
    let mut hi = n;
    while hi > 0 {
        if hi == 1 {
            values.push(h[(0, 0)]);
            break;
        }
        let last = hi - 1;
        let mut l = last;
        while l > 0 {
            let mut s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if s == 0.0 {
                s = norm;
            }
            if h[(l, l - 1)].norm() <= f64::EPSILON * s {
                h[(l, l - 1)] = ZERO;
                break;
            }
            l -= 1;
        }
        if l == last {
            values.push(h[(last, last)]);
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if l + 1 == last {
            let (x, y) = eig2(h[(l, l)], h[(l, last)], h[(last, l)], h[(last, last)]);
            values.push(x);
            values.push(y);
            hi -= 2;
            since_deflation = 0;
            continue;
        }

        sweeps += 1;
        since_deflation += 1;
        if sweeps > cap {
            return Err(Error::NoConvergence {
                routine: "general eigensolver",
                iterations: cap,
                order: n,
                fingerprint: fingerprint(a.as_matrix()),
            });
        }

        let shift = if since_deflation % 11 == 10 {
            let mag = h[(last, last - 1)].norm() + h[(last - 1, last - 2)].norm();
            h[(last, last)] + c(0.75, 0.437) * mag.max(f64::EPSILON * norm)
        } else {
            wilkinson(h[(last - 1, last - 1)], h[(last - 1, last)], h[(last, last - 1)], h[(last, last)])
        };
        qr_sweep(&mut h, l, last, shift);
    }
    Ok(values)
}

fn eig2(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powi(2) + b * cc;
    let root = disc.sqrt();
    let x = half_tr + root;
    let y = half_tr - root;
    // Recover the smaller root from the determinant to avoid cancellation.
    let det = a * d - b * cc;
    if x.norm() >= y.norm() {
        let y2 = if x.norm() > 0.0 { det / x } else { y };
        (x, y2)
    } else {
        let x2 = if y.norm() > 0.0 { det / y } else { x };
        (x2, y)
    }
}

fn wilkinson(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> Complex64 {
    let (x, y) = eig2(a, b, cc, d);
    if (x - d).norm() <= (y - d).norm() {
        x
    } else {
        y
    }
}

/// One shifted QR step `H - mu I = QR`, `H <- RQ + mu I` on rows/columns `l..=last`.
fn qr_sweep(h: &mut CMat, l: usize, last: usize, shift: Complex64) {
    for i in l..=last {
        h[(i, i)] -= shift;
    }
    let mut rotations = Vec::with_capacity(last - l);
    for k in l..last {
        let a = h[(k, k)];
        let b = h[(k + 1, k)];
        let r = a.norm().hypot(b.norm());
        let (cs, sn) = if r == 0.0 { (c(1.0, 0.0), ZERO) } else { (a / r, b / r) };
        for j in k..=last {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = cs.conj() * x + sn.conj() * y;
            h[(k + 1, j)] = -sn * x + cs * y;
        }
        rotations.push((cs, sn));
    }
    for (offset, &(cs, sn)) in rotations.iter().enumerate() {
        let k = l + offset;
        for i in l..=(k + 1).min(last) {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * cs + y * sn;
            h[(i, k + 1)] = -x * sn.conj() + y * cs.conj();
        }
    }
    for i in l..=last {
        h[(i, i)] += shift;
    }
}
