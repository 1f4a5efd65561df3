//! Seeded matrix families. Each generated matrix is checked against its
//! family predicate and regenerated from a derived seed when the check fails.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{c, kernel_basis, range_basis, singular_values, CMat, ComplexMatrix, ToleranceConfig, ONE};
use crate::numrange::{trace_boundary_with, OriginLocation, DEFAULT_POINTS};
use crate::rng::{complex_normal, derive_seed, ginibre, random_unitary, rng_from_seed, Rng};
use crate::structure::{drazin_index, gap, rank_chain};

use rand::Rng as _;

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 12;
const MAX_ATTEMPTS: u64 = 10;
const MAX_SIMILARITY_COND: f64 = 50.0;
/// Invertible blocks keep their smallest singular value above this.
const MIN_BLOCK_SIGMA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Family {
    Ginibre,
    Normal,
    /// `R(A) ∩ N(A) != {0}`.
    Overlap,
    /// Singular with `rank A = rank A^2`.
    Complementary,
    /// Singular with `R(A) ⟂ N(A)`.
    OrthoRk,
    /// Origin on the boundary of the numerical range.
    BoundaryZero,
    /// Positive semidefinite Hermitian part.
    Accretive,
    /// Nilpotent Jordan part of index 1 to 3 plus an invertible part.
    NilpotentMix,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Ginibre,
        Family::Normal,
        Family::Overlap,
        Family::Complementary,
        Family::OrthoRk,
        Family::BoundaryZero,
        Family::Accretive,
        Family::NilpotentMix,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Ginibre => "GINIBRE",
            Family::Normal => "NORMAL",
            Family::Overlap => "OVERLAP",
            Family::Complementary => "COMPLEMENTARY",
            Family::OrthoRk => "ORTHO_RK",
            Family::BoundaryZero => "BOUNDARY_ZERO",
            Family::Accretive => "ACCRETIVE",
            Family::NilpotentMix => "NILPOTENT_MIX",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown family {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub family: Family,
    pub order: usize,
    pub seed: u64,
}

impl CaseSpec {
    pub fn new(family: Family, order: usize, seed: u64) -> Self {
        Self { family, order, seed }
    }
}

/// Draws a matrix of the requested family, regenerating up to ten times
/// from derived seeds until the family predicate holds.
pub fn generate(spec: &CaseSpec) -> Result<ComplexMatrix> {
    generate_with(spec, &ToleranceConfig::default())
}

pub fn generate_with(spec: &CaseSpec, tol: &ToleranceConfig) -> Result<ComplexMatrix> {
    generate_indexed(spec, tol).map(|(a, _)| a)
}

/// Like [`generate_with`], also returning the Drazin index the matrix was
/// built with for [`Family::NilpotentMix`].
pub fn generate_indexed(spec: &CaseSpec, tol: &ToleranceConfig) -> Result<(ComplexMatrix, Option<usize>)> {
    let n = spec.order;
    if !(MIN_ORDER..=MAX_ORDER).contains(&n) {
        return Err(Error::OrderOutOfRange(n));
    }
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = rng_from_seed(derive_seed(spec.seed, &[attempt]));
        let Some((a, index)) = draw(spec.family, n, &mut rng) else { continue };
        let a = ComplexMatrix::new(a)?;
        if !satisfies(spec.family, &a, tol)? {
            continue;
        }
        if let Some(k) = index {
            if drazin_index(&a, tol)? != k {
                continue;
            }
        }
        return Ok((a, index));
    }
    Err(Error::GenerationFailed { family: spec.family.name(), attempts: MAX_ATTEMPTS as usize, seed: spec.seed })
}

/// True when `a` meets the defining predicate of `family`.
pub fn satisfies(family: Family, a: &ComplexMatrix, tol: &ToleranceConfig) -> Result<bool> {
    let n = a.order();
    if a.is_zero() {
        return Ok(false);
    }
    let ranks = || rank_chain(a, tol);
    Ok(match family {
        Family::Ginibre => true,
        Family::Normal => {
            let m = a.as_matrix();
            (m * m.adjoint() - m.adjoint() * m).norm() <= 1e-10 * m.norm_squared()
        }
        Family::Overlap => {
            let r = ranks()?;
            r[1] != r[2]
        }
        Family::Complementary => {
            let r = ranks()?;
            r[1] == r[2] && r[1] < n
        }
        Family::OrthoRk => {
            let r = ranks()?;
            r[1] == r[2] && r[1] < n && gap(&range_basis(a, tol)?, &kernel_basis(a, tol)?)? >= 1.0 - 1e-8
        }
        Family::BoundaryZero => {
            trace_boundary_with(a, DEFAULT_POINTS, tol)?.origin_location == OriginLocation::Boundary
        }
        Family::Accretive => {
            let herm = a.hermitian_part();
            let (vals, _) = crate::numkernel::hermitian_eig_unchecked(&herm)?;
            vals[0] >= -1e-10 * a.spectral_norm()
        }
        Family::NilpotentMix => drazin_index(a, tol)? <= 3,
    })
}

fn is_well_conditioned(m: &CMat, max_cond: f64) -> bool {
    let sv = singular_values(m);
    let smin = *sv.last().expect("non-empty");
    smin > 0.0 && sv[0] / smin <= max_cond
}

fn similarity(rng: &mut Rng, n: usize) -> Option<CMat> {
    let s = CMat::identity(n, n) + ginibre(rng, n, n);
    if !is_well_conditioned(&s, MAX_SIMILARITY_COND) {
        return None;
    }
    Some(s)
}

/// Random `m x m` block with singular values bounded away from 0.
fn invertible_block(rng: &mut Rng, m: usize) -> Option<CMat> {
    let b = ginibre(rng, m, m) + CMat::identity(m, m) * complex_normal(rng);
    (singular_values(&b).last().copied().unwrap_or(1.0) >= MIN_BLOCK_SIGMA).then_some(b)
}

fn block_diag(top: &CMat, bottom: &CMat) -> CMat {
    let (p, q) = (top.nrows(), bottom.nrows());
    let mut m = CMat::zeros(p + q, p + q);
    m.view_mut((0, 0), (p, p)).copy_from(top);
    m.view_mut((p, p), (q, q)).copy_from(bottom);
    m
}

fn conjugate(s: &CMat, core: &CMat) -> Option<CMat> {
    Some(s * core * s.clone().try_inverse()?)
}

/// Nilpotent matrix in Jordan form whose largest block has size `index`.
fn jordan_nilpotent(rng: &mut Rng, size: usize, index: usize) -> CMat {
    let mut blocks = vec![index];
    let mut used = index;
    while used < size {
        let b = rng.gen_range(1..=index.min(size - used));
        blocks.push(b);
        used += b;
    }
    let mut m = CMat::zeros(size, size);
    let mut start = 0;
    for b in blocks {
        for i in 0..b.saturating_sub(1) {
            m[(start + i, start + i + 1)] = ONE;
        }
        start += b;
    }
    m
}

/// `S (J_2 ⊕ B) S^{-1}` for the given similarity and invertible block.
pub fn overlap_from(s: &CMat, b: &CMat) -> Option<CMat> {
    let j2 = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), ONE, c(0.0, 0.0), c(0.0, 0.0)]);
    conjugate(s, &block_diag(&j2, b))
}

fn draw(family: Family, n: usize, rng: &mut Rng) -> Option<(CMat, Option<usize>)> {
    let m = match family {
        Family::Ginibre => Some(ginibre(rng, n, n)),
        Family::Normal => {
            let u = random_unitary(rng, n);
            let d = CMat::from_fn(n, n, |i, j| if i == j { complex_normal(rng) } else { c(0.0, 0.0) });
            Some(&u * d * u.adjoint())
        }
        Family::Overlap => {
            let b = invertible_block(rng, n - 2)?;
            overlap_from(&similarity(rng, n)?, &b)
        }
        Family::Complementary => {
            let r = rng.gen_range(1..n);
            let b = invertible_block(rng, r)?;
            conjugate(&similarity(rng, n)?, &block_diag(&b, &CMat::zeros(n - r, n - r)))
        }
        Family::OrthoRk => {
            let r = rng.gen_range(1..n);
            let b = invertible_block(rng, r)?;
            let q = random_unitary(rng, n);
            Some(&q * block_diag(&b, &CMat::zeros(n - r, n - r)) * q.adjoint())
        }
        Family::BoundaryZero => {
            // Accretive block with positive definite Hermitian part, then a
            // zero block: the origin is a boundary point of W.
            let r = rng.gen_range(1..n);
            let g = ginibre(rng, r, r);
            let h = &g * g.adjoint() + CMat::identity(r, r) * c(0.1, 0.0);
            let k = ginibre(rng, r, r);
            let k = (&k + k.adjoint()) * c(0.5, 0.0);
            let block = h + k * c(0.0, 1.0);
            let q = random_unitary(rng, n);
            Some(&q * block_diag(&block, &CMat::zeros(n - r, n - r)) * q.adjoint())
        }
        Family::Accretive => {
            // H = G G^H of random rank; when H is singular the skew part is
            // compressed to R(H), so A keeps a kernel.
            let r = rng.gen_range(1..=n);
            let g = ginibre(rng, n, r);
            let h = &g * g.adjoint();
            let k = ginibre(rng, n, n);
            let mut k = (&k + k.adjoint()) * c(0.5, 0.0);
            if r < n {
                let p = &g * (g.adjoint() * &g).try_inverse()? * g.adjoint();
                k = &p * k * &p;
            }
            Some(h + k * c(0.0, 1.0))
        }
        Family::NilpotentMix => {
            let index = rng.gen_range(1..=3.min(n));
            let invertible = if index == 1 { rng.gen_range(1..n) } else { rng.gen_range(0..=n - index) };
            let nil = jordan_nilpotent(rng, n - invertible, index);
            let b = invertible_block(rng, invertible)?;
            return Some((conjugate(&similarity(rng, n)?, &block_diag(&nil, &b))?, Some(index)));
        }
    };
    m.map(|m| (m, None))
}
