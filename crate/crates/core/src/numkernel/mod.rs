//! Dense complex linear-algebra substrate.
//!
//! The square operator type [`ComplexMatrix`], orthonormal [`Subspace`]s and
//! the decompositions everything else is built on: general eigenvalues,
//! Hermitian eigensystems, SVD, numerical rank and range/kernel bases.
//!
//! Rank decisions use a relative threshold `rank_rel_tol * sigma_max`; the
//! zero matrix has rank 0.

mod eigen;

use std::ops::Deref;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rng::derive_seed;

pub use eigen::eigenvalues;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Square, finite, dense complex matrix: the operator under study.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(CMat);

impl ComplexMatrix {
    pub fn new(m: CMat) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(Error::Empty);
        }
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
        }
        check_finite(&m)?;
        Ok(Self(m))
    }

    /// Builds an `n x n` matrix from row-major entries.
    pub fn from_row_major(n: usize, data: &[Complex64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, actual: data.len() });
        }
        Self::new(DMatrix::from_row_slice(n, n, data))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        let data: Vec<Complex64> = rows.iter().flat_map(|r| r.iter().map(|&x| c(x, 0.0))).collect();
        Self::from_row_major(n, &data)
    }

    pub fn identity(n: usize) -> Self {
        Self(CMat::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(CMat::zeros(n, n))
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        Self(CMat::from_diagonal(&CVec::from_column_slice(diag)))
    }

    pub fn order(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_inner(self) -> CMat {
        self.0
    }

    pub fn row_major(&self) -> Vec<Complex64> {
        let n = self.order();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|ij| self.0[ij]).collect()
    }

    pub fn scaled(&self, t: Complex64) -> Self {
        Self(&self.0 * t)
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn hermitian_part(&self) -> CMat {
        (&self.0 + self.0.adjoint()) * c(0.5, 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| *z == ZERO)
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        singular_values(&self.0).first().copied().unwrap_or(0.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = CMat::identity(self.order(), self.order());
        for _ in 0..k {
            acc = &acc * &self.0;
        }
        Self(acc)
    }

    /// Stable 64-bit digest of the entry bits, used to name a matrix in diagnostics.
    pub fn fingerprint(&self) -> u64 {
        fingerprint(&self.0)
    }
}

impl Deref for ComplexMatrix {
    type Target = CMat;

    fn deref(&self) -> &CMat {
        &self.0
    }
}

impl TryFrom<CMat> for ComplexMatrix {
    type Error = Error;

    fn try_from(m: CMat) -> Result<Self> {
        Self::new(m)
    }
}

pub(crate) fn fingerprint(m: &CMat) -> u64 {
    let tags: Vec<u64> = m.iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]).collect();
    derive_seed(m.nrows() as u64 ^ ((m.ncols() as u64) << 32), &tags)
}

fn check_finite(m: &CMat) -> Result<()> {
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    Ok(())
}

/// Wire form: `{"n": n, "data": [[re, im], ...]}`, row-major.
#[derive(Serialize, Deserialize)]
struct MatrixWire {
    n: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        MatrixWire {
            n: self.order(),
            data: self.row_major().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = MatrixWire::deserialize(deserializer)?;
        let data: Vec<Complex64> = wire.data.iter().map(|[re, im]| c(*re, *im)).collect();
        ComplexMatrix::from_row_major(wire.n, &data).map_err(D::Error::custom)
    }
}

/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub rank_rel_tol: f64,
    pub residual_tol: f64,
    pub angle_margin: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { rank_rel_tol: 1e-10, residual_tol: 1e-8, angle_margin: 1e-6 }
    }
}

impl ToleranceConfig {
    pub fn new(rank_rel_tol: f64, residual_tol: f64, angle_margin: f64) -> Result<Self> {
        let cfg = Self { rank_rel_tol, residual_tol, angle_margin };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_rel_tol", self.rank_rel_tol),
            ("residual_tol", self.residual_tol),
            ("angle_margin", self.angle_margin),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidConfig(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        Ok(())
    }
}

/// Subspace of `C^n` carried by an orthonormal basis (`n x dim`).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    basis: CMat,
}

impl Subspace {
    /// Wraps a basis that is already orthonormal; fails if `basis^H basis` is not the identity.
    pub fn from_orthonormal(basis: CMat, tol: f64) -> Result<Self> {
        check_finite(&basis)?;
        let k = basis.ncols();
        let gram = basis.adjoint() * &basis;
        let err = (gram - CMat::identity(k, k)).norm();
        if err > tol {
            return Err(Error::InvalidConfig(format!(
                "basis is not orthonormal (Gram residual {err:.3e})"
            )));
        }
        Ok(Self { basis })
    }

    /// Orthonormalizes the column span of `spanning` (rank-revealing, via SVD).
    pub fn span_of(spanning: &CMat, tol: &ToleranceConfig) -> Result<Self> {
        check_finite(spanning)?;
        let n = spanning.nrows();
        if spanning.ncols() == 0 {
            return Ok(Self::zero(n));
        }
        let svd = svd_rect(spanning)?;
        let rank = rank_from_singular_values(&svd.singular_values, tol.rank_rel_tol);
        Ok(Self { basis: svd.u.columns(0, rank).into_owned() })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self { basis: CMat::zeros(ambient_dim, 0) }
    }

    pub fn whole(ambient_dim: usize) -> Self {
        Self { basis: CMat::identity(ambient_dim, ambient_dim) }
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    /// Orthogonal projector onto the subspace.
    pub fn projector(&self) -> CMat {
        &self.basis * self.basis.adjoint()
    }

    /// Orthogonal complement in the ambient space.
    pub fn orthogonal_complement(&self) -> Subspace {
        let n = self.ambient_dim();
        if self.dim() == 0 {
            return Subspace::whole(n);
        }
        let residual = CMat::identity(n, n) - self.projector();
        let svd = svd_rect(&residual).expect("projector SVD converges");
        let k = n - self.dim();
        Subspace { basis: svd.u.columns(0, k).into_owned() }
    }

    /// Euclidean distance from `x` to the subspace.
    pub fn distance(&self, x: &CVec) -> f64 {
        let coeffs = self.basis.adjoint() * x;
        (x - &self.basis * coeffs).norm()
    }

    /// Applies a unitary (or any) map to the basis; the result is re-orthonormalized.
    pub fn mapped(&self, q: &CMat, tol: &ToleranceConfig) -> Result<Subspace> {
        Subspace::span_of(&(q * &self.basis), tol)
    }
}

/// Singular value decomposition `A = U diag(sigma) V^H`, sigma descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMat,
    pub singular_values: Vec<f64>,
    pub v: CMat,
}

impl Svd {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    pub fn reconstruct(&self) -> CMat {
        let k = self.singular_values.len();
        let mut us = self.u.columns(0, k).into_owned();
        for (j, s) in self.singular_values.iter().enumerate() {
            us.column_mut(j).scale_mut(*s);
        }
        us * self.v.columns(0, k).adjoint()
    }
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    svd_rect(a.as_matrix())
}

/// Thin SVD of a possibly rectangular `m x n` matrix: `u` is `m x k`, `v` is
/// `n x k` with `k = min(m, n)`. For square input both factors are unitary.
pub(crate) fn svd_rect(a: &CMat) -> Result<Svd> {
    let (m, n) = a.shape();
    if m < n {
        let t = svd_rect(&a.adjoint())?;
        return Ok(Svd { u: t.v, singular_values: t.singular_values, v: t.u });
    }
    if n == 0 {
        return Ok(Svd { u: CMat::zeros(m, 0), singular_values: Vec::new(), v: CMat::zeros(0, 0) });
    }
    let max_iter = 1000 + 100 * m;
    let dec = SVD_EPS_FACTORS
        .iter()
        .filter_map(|&f| a.clone().try_svd(true, true, f * f64::EPSILON, max_iter))
        .find(|d| svd_is_accurate(a, d))
        .ok_or(Error::NoConvergence { routine: "svd", iterations: max_iter, order: m, fingerprint: fingerprint(a) })?;
    let u_thin = dec.u.expect("u requested");
    let v_thin = dec.v_t.expect("v_t requested").adjoint();
    let k = n;
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&i, &j| dec.singular_values[j].total_cmp(&dec.singular_values[i]).then(i.cmp(&j)));
    let mut u = CMat::zeros(m, k);
    let mut v = CMat::zeros(n, k);
    let mut sv = Vec::with_capacity(k);
    for (dst, &src) in idx.iter().enumerate() {
        u.set_column(dst, &u_thin.column(src));
        v.set_column(dst, &v_thin.column(src));
        sv.push(dec.singular_values[src]);
    }
    Ok(Svd { u, singular_values: sv, v })
}

/// Convergence thresholds tried in turn. nalgebra's complex SVD occasionally
/// returns inconsistent factors at the tightest threshold, so every result is
/// checked by reconstruction before it is accepted.
const SVD_EPS_FACTORS: [f64; 4] = [5.0, 50.0, 1.0, 500.0];

fn svd_is_accurate(a: &CMat, d: &nalgebra::SVD<Complex64, nalgebra::Dyn, nalgebra::Dyn>) -> bool {
    let (Some(u), Some(vt)) = (d.u.as_ref(), d.v_t.as_ref()) else {
        return false;
    };
    let k = d.singular_values.len();
    let mut us = u.clone();
    for j in 0..k {
        us.column_mut(j).scale_mut(d.singular_values[j]);
    }
    let scale = a.norm().max(f64::MIN_POSITIVE);
    let size = a.nrows().max(a.ncols()) as f64;
    let recon = (us * vt - a).norm() <= 1e3 * size * f64::EPSILON * scale;
    let ortho_u = (u.adjoint() * u - CMat::identity(k, k)).norm() <= 1e3 * size * f64::EPSILON;
    let ortho_v = (vt * vt.adjoint() - CMat::identity(k, k)).norm() <= 1e3 * size * f64::EPSILON;
    recon && ortho_u && ortho_v
}

pub(crate) fn singular_values(a: &CMat) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    match svd_rect(a) {
        Ok(d) => d.singular_values,
        Err(_) => {
            let mut sv: Vec<f64> = a.singular_values().iter().copied().collect();
            sv.sort_by(|x, y| y.total_cmp(x));
            sv
        }
    }
}

pub(crate) fn rank_from_singular_values(sv: &[f64], rank_rel_tol: f64) -> usize {
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rank_rel_tol * smax).count()
}

/// Number of singular values above `rank_rel_tol * sigma_max`.
pub fn numerical_rank(a: &ComplexMatrix, tol: &ToleranceConfig) -> usize {
    rank_from_singular_values(&singular_values(a.as_matrix()), tol.rank_rel_tol)
}

/// Orthonormal basis of `R(A)`: the leading left singular vectors.
pub fn range_basis(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Subspace> {
    let dec = svd(a)?;
    let r = rank_from_singular_values(&dec.singular_values, tol.rank_rel_tol);
    Ok(Subspace { basis: dec.u.columns(0, r).into_owned() })
}

/// Orthonormal basis of `N(A)`: the trailing right singular vectors.
pub fn kernel_basis(a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<Subspace> {
    let dec = svd(a)?;
    let n = a.order();
    let r = rank_from_singular_values(&dec.singular_values, tol.rank_rel_tol);
    Ok(Subspace { basis: dec.v.columns(r, n - r).into_owned() })
}

/// Moore-Penrose inverse keeping exactly the `rank` leading singular triplets.
pub(crate) fn pinv_with_rank(a: &CMat, rank: usize) -> Result<CMat> {
    let dec = svd_rect(a)?;
    let (m, n) = a.shape();
    let mut out = CMat::zeros(n, m);
    for k in 0..rank.min(dec.singular_values.len()) {
        let s = dec.singular_values[k];
        if s == 0.0 {
            break;
        }
        out += (dec.v.column(k) * dec.u.column(k).adjoint()) * c(1.0 / s, 0.0);
    }
    Ok(out)
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors (as columns).
pub fn hermitian_eigensystem(h: &ComplexMatrix, tol: &ToleranceConfig) -> Result<(Vec<f64>, CMat)> {
    let m = h.as_matrix();
    let scale = m.norm();
    let asym = (m - m.adjoint()).norm();
    if asym > tol.residual_tol * scale {
        return Err(Error::NotHermitian { asymmetry: if scale > 0.0 { asym / scale } else { asym } });
    }
    hermitian_eig_unchecked(&((m + m.adjoint()) * c(0.5, 0.0)))
}

pub(crate) fn hermitian_eig_unchecked(h: &CMat) -> Result<(Vec<f64>, CMat)> {
    let n = h.nrows();
    let max_iter = 1000 + 100 * n;
    let scale = h.norm().max(f64::MIN_POSITIVE);
    let dec = SVD_EPS_FACTORS
        .iter()
        .filter_map(|&f| nalgebra::SymmetricEigen::try_new(h.clone(), f * f64::EPSILON, max_iter))
        .find(|d| {
            let mut vl = d.eigenvectors.clone();
            for j in 0..n {
                vl.column_mut(j).scale_mut(d.eigenvalues[j]);
            }
            (h * &d.eigenvectors - vl).norm() <= 1e3 * n as f64 * f64::EPSILON * scale
        })
        .ok_or(Error::NoConvergence {
            routine: "hermitian eigensolver",
            iterations: max_iter,
            order: n,
            fingerprint: fingerprint(h),
        })?;
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| dec.eigenvalues[i].total_cmp(&dec.eigenvalues[j]).then(i.cmp(&j)));
    let values = idx.iter().map(|&i| dec.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in idx.iter().enumerate() {
        vectors.set_column(dst, &dec.eigenvectors.column(src));
    }
    Ok((values, vectors))
}

/// Largest eigenvalue of a Hermitian matrix together with a unit eigenvector.
pub(crate) fn hermitian_top(h: &CMat) -> Result<(f64, CVec)> {
    let (vals, vecs) = hermitian_eig_unchecked(h)?;
    let n = vals.len();
    Ok((vals[n - 1], vecs.column(n - 1).into_owned()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{ginibre, random_unitary, rng_from_seed};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn rejects_non_square_and_non_finite() {
        assert!(matches!(ComplexMatrix::new(CMat::zeros(2, 3)), Err(Error::NotSquare { .. })));
        let mut m = CMat::zeros(2, 2);
        m[(1, 0)] = c(f64::NAN, 0.0);
        assert_eq!(ComplexMatrix::new(m), Err(Error::NonFinite { row: 1, col: 0 }));
        assert!(ComplexMatrix::from_row_major(2, &[ONE; 3]).is_err());
    }

    #[test]
    fn tolerance_defaults_and_validation() {
        let t = ToleranceConfig::default();
        assert_eq!((t.rank_rel_tol, t.residual_tol, t.angle_margin), (1e-10, 1e-8, 1e-6));
        assert!(ToleranceConfig::new(0.0, 1e-8, 1e-6).is_err());
        assert!(ToleranceConfig::new(1e-10, 1.0, 1e-6).is_err());
    }

    #[test]
    fn hermitian_examples() {
        let (vals, vecs) =
            hermitian_eigensystem(&ComplexMatrix::from_real_rows(&[&[-1.0, 0.0], &[0.0, 5.0]]).unwrap(), &tol())
                .unwrap();
        assert_eq!(vals, vec![-1.0, 5.0]);
        assert!((vecs[(0, 0)].norm() - 1.0).abs() < 1e-14 && (vecs[(1, 1)].norm() - 1.0).abs() < 1e-14);

        let (vals, _) =
            hermitian_eigensystem(&ComplexMatrix::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]).unwrap(), &tol())
                .unwrap();
        assert!((vals[0] + 0.5).abs() < 1e-14 && (vals[1] - 0.5).abs() < 1e-14);

        let (vals, _) = hermitian_eigensystem(&ComplexMatrix::identity(4), &tol()).unwrap();
        assert!(vals.iter().all(|v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn hermitian_rejects_non_hermitian() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eigensystem(&a, &tol()), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn hermitian_residuals_on_random_input() {
        let mut rng = rng_from_seed(11);
        for n in 1..=10 {
            let g = ginibre(&mut rng, n, n);
            let h = ComplexMatrix::new((&g + g.adjoint()) * c(0.5, 0.0)).unwrap();
            let (vals, vecs) = hermitian_eigensystem(&h, &tol()).unwrap();
            let scale = h.spectral_norm();
            for (i, lam) in vals.iter().enumerate() {
                let v = vecs.column(i);
                assert!((h.as_matrix() * v - v * c(*lam, 0.0)).norm() <= 1e-8 * scale);
            }
            assert!((vecs.adjoint() * &vecs - CMat::identity(n, n)).norm() < 1e-8);
            assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn svd_examples() {
        let d = svd(&ComplexMatrix::from_real_rows(&[&[3.0, 0.0], &[0.0, 0.0]]).unwrap()).unwrap();
        assert_eq!(d.singular_values, vec![3.0, 0.0]);
        let d = svd(&ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[1.0, 0.0]]).unwrap()).unwrap();
        assert!((d.singular_values[0] - 2f64.sqrt()).abs() < 1e-14 && d.singular_values[1].abs() < 1e-14);
        let mut rng = rng_from_seed(5);
        let q = ComplexMatrix::new(random_unitary(&mut rng, 5)).unwrap();
        assert!(svd(&q).unwrap().singular_values.iter().all(|s| (s - 1.0).abs() < 1e-12));
    }

    #[test]
    fn svd_rectangular_factors() {
        let mut rng = rng_from_seed(9);
        for (m, n) in [(5, 2), (2, 5), (4, 4), (3, 0)] {
            let a = ginibre(&mut rng, m, n);
            let d = svd_rect(&a).unwrap();
            let k = m.min(n);
            assert_eq!((d.u.shape(), d.v.shape()), ((m, k), (n, k)));
            assert!((d.reconstruct() - &a).norm() < 1e-12);
            assert!((d.u.adjoint() * &d.u - CMat::identity(k, k)).norm() < 1e-12);
            assert!((d.v.adjoint() * &d.v - CMat::identity(k, k)).norm() < 1e-12);
        }
    }

    #[test]
    fn rank_examples() {
        let t = tol();
        let j2 = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert_eq!(numerical_rank(&j2, &t), 1);
        assert_eq!(numerical_rank(&ComplexMatrix::zeros(3), &t), 0);
        let b = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(numerical_rank(&b, &t), 1);
    }

    #[test]
    fn range_and_kernel_examples() {
        let t = tol();
        let j2 = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let r = range_basis(&j2, &t).unwrap();
        let k = kernel_basis(&j2, &t).unwrap();
        let e1 = CVec::from_vec(vec![ONE, ZERO]);
        assert_eq!((r.dim(), k.dim()), (1, 1));
        assert!(r.distance(&e1) < 1e-14 && k.distance(&e1) < 1e-14);

        let id = ComplexMatrix::identity(3);
        assert_eq!((range_basis(&id, &t).unwrap().dim(), kernel_basis(&id, &t).unwrap().dim()), (3, 0));

        let b = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[1.0, 0.0]]).unwrap();
        let r = range_basis(&b, &t).unwrap();
        let k = kernel_basis(&b, &t).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(r.distance(&CVec::from_vec(vec![c(s, 0.0), c(s, 0.0)])) < 1e-14);
        assert!(k.distance(&CVec::from_vec(vec![ZERO, ONE])) < 1e-14);
    }

    #[test]
    fn subspace_complement_and_span() {
        let t = tol();
        let spanning = CMat::from_row_slice(3, 2, &[ONE, ONE, ZERO, ZERO, ZERO, ZERO]);
        let s = Subspace::span_of(&spanning, &t).unwrap();
        assert_eq!(s.dim(), 1);
        let comp = s.orthogonal_complement();
        assert_eq!(comp.dim(), 2);
        assert!((s.basis().adjoint() * comp.basis()).norm() < 1e-14);
        assert!(Subspace::from_orthonormal(spanning, 1e-10).is_err());
    }

    #[test]
    fn serde_round_trip_is_bit_exact() {
        let mut rng = rng_from_seed(1);
        let a = ComplexMatrix::new(ginibre(&mut rng, 4, 4)).unwrap();
        let text = serde_json::to_string(&a).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(a, back);
        assert!(serde_json::from_str::<ComplexMatrix>(r#"{"n":2,"data":[[1,0]]}"#).is_err());
    }
}
