//! One trial of each property. A trial draws its matrix from a derived seed,
//! evaluates the hypothesis and, when it holds, the conclusion.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng as _;

use super::generate::{generate_indexed, satisfies, CaseSpec, Family, MIN_ORDER};
use super::{Measured, PropertyId, SuiteConfig, Verdict};
use crate::angle::{cosine_estimate, ray_clearance, restricted_cosine, scalar_rotation_search, AngleReport, Classification};
use crate::error::Result;
use crate::numkernel::{c, kernel_basis, ComplexMatrix};
use crate::rng::{derive_seed, rng_from_seed};
use crate::sip::LpSpace;
use crate::structure::{drazin_index, rank_chain};

const TAG_ORDER: u64 = 1;
const TAG_GENERATE: u64 = 2;
const TAG_OPTIMIZE: u64 = 3;

/// Agreement required between the full and restricted cosines.
pub const RESTRICTION_TOL: f64 = 2e-3;
/// Angular clearance from a ray for the spectral hypotheses.
pub const RAY_TOL: f64 = 0.05;
/// Directions tried when searching for a ray free of eigenvalues.
pub const RAY_GRID: usize = 64;
/// Exponents checked alongside the Euclidean case for the rotation property.
pub const ROTATION_EXPONENTS: [f64; 2] = [2.0, 3.0];

pub(crate) enum Outcome {
    Pass,
    Vacuous,
    Fail(BTreeMap<String, Measured>),
}

pub(crate) struct Trial {
    pub family: Option<Family>,
    pub order: usize,
    pub matrix: Option<ComplexMatrix>,
    pub outcome: Outcome,
}

struct Ctx<'a> {
    cfg: &'a SuiteConfig,
    seed: u64,
    order: usize,
    measured: BTreeMap<String, Measured>,
}

impl Ctx<'_> {
    fn record(&mut self, key: &str, value: impl Into<Measured>) {
        self.measured.insert(key.to_string(), value.into());
    }

    fn record_angle(&mut self, prefix: &str, r: &AngleReport) {
        self.record(&format!("{prefix}cos_estimate"), r.cos_estimate);
        self.record(&format!("{prefix}classification"), r.classification.to_string());
        if let Some(lb) = r.lower_bound {
            self.record(&format!("{prefix}lower_bound"), lb);
        }
    }

    fn estimate(&self, a: &ComplexMatrix, p: f64) -> Result<AngleReport> {
        let opt = self.cfg.optimizer.with_seed(derive_seed(self.seed, &[TAG_OPTIMIZE, p.to_bits()]));
        cosine_estimate(a, &LpSpace::new(a.order(), p)?, &opt, &self.cfg.tol)
    }

    fn complementary(&mut self, a: &ComplexMatrix) -> Result<bool> {
        let r = rank_chain(a, &self.cfg.tol)?;
        self.record("rank", r[1] as f64);
        self.record("rank_of_square", r[2] as f64);
        Ok(r[1] == r[2])
    }

    fn verdict(&mut self, holds: bool) -> Outcome {
        if holds {
            Outcome::Pass
        } else {
            Outcome::Fail(std::mem::take(&mut self.measured))
        }
    }
}

pub(crate) fn family_for(id: PropertyId, trial: usize) -> Option<Family> {
    Some(match id {
        PropertyId::P1 => Family::Overlap,
        PropertyId::P2 => Family::Accretive,
        PropertyId::P3 => Family::Ginibre,
        PropertyId::P4 => {
            [Family::Complementary, Family::Overlap, Family::NilpotentMix, Family::Ginibre][trial % 4]
        }
        PropertyId::P5 => Family::Complementary,
        PropertyId::P6 | PropertyId::P7 => Family::BoundaryZero,
        PropertyId::P8 | PropertyId::P9 | PropertyId::P10 => Family::OrthoRk,
        PropertyId::Converse => return None,
    })
}

pub(crate) fn run_trial(id: PropertyId, trial: usize, seed: u64, cfg: &SuiteConfig) -> Trial {
    let mut rng = rng_from_seed(derive_seed(seed, &[TAG_ORDER]));
    let order = rng.gen_range(MIN_ORDER..=cfg.n_max);
    let family = family_for(id, trial);
    let mut ctx = Ctx { cfg, seed, order, measured: BTreeMap::new() };
    let matrix = match family {
        Some(f) => generate_indexed(&CaseSpec::new(f, order, derive_seed(seed, &[TAG_GENERATE])), &cfg.tol).map(|x| x.0),
        None => Ok(ComplexMatrix::identity(order).scaled(c(-1.0, 0.0))),
    };
    let matrix = match matrix {
        Ok(m) => m,
        Err(e) => {
            ctx.record("error", e.to_string());
            return Trial { family, order, matrix: None, outcome: Outcome::Fail(ctx.measured) };
        }
    };
    let outcome = match evaluate(id, &matrix, &mut ctx) {
        Ok(o) => o,
        Err(e) => {
            ctx.record("error", e.to_string());
            Outcome::Fail(std::mem::take(&mut ctx.measured))
        }
    };
    Trial { family, order: ctx.order, matrix: Some(matrix), outcome }
}

fn evaluate(id: PropertyId, a: &ComplexMatrix, ctx: &mut Ctx) -> Result<Outcome> {
    let tol = ctx.cfg.tol;
    match id {
        // Range-kernel overlap forces the angle to pi.
        PropertyId::P1 => {
            let r = ctx.estimate(a, 2.0)?;
            ctx.record_angle("", &r);
            Ok(ctx.verdict(r.classification == Classification::AtPi))
        }
        // Accretive operators have ascent at most 1.
        PropertyId::P2 => {
            let ok = ctx.complementary(a)?;
            Ok(ctx.verdict(ok))
        }
        // An angle below pi gives R(A) ⊕ N(A).
        PropertyId::P3 => {
            let r = ctx.estimate(a, 2.0)?;
            ctx.record_angle("", &r);
            if r.classification != Classification::BelowPi {
                return Ok(Outcome::Vacuous);
            }
            let ok = ctx.complementary(a)?;
            Ok(ctx.verdict(ok))
        }
        // Same for a rotated multiple tA.
        PropertyId::P4 => {
            let rot = scalar_rotation_search(a, &tol)?;
            ctx.record("t_re", rot.t.re);
            ctx.record("t_im", rot.t.im);
            let r = ctx.estimate(&a.scaled(rot.t), 2.0)?;
            ctx.record_angle("", &r);
            if r.classification != Classification::BelowPi {
                return Ok(Outcome::Vacuous);
            }
            let ok = ctx.complementary(a)?;
            Ok(ctx.verdict(ok))
        }
        // Complementary range and kernel admit t with angle(tA) < pi.
        PropertyId::P5 => {
            let rot = scalar_rotation_search(a, &tol)?;
            ctx.record("t_re", rot.t.re);
            ctx.record("t_im", rot.t.im);
            ctx.record("feasible", rot.feasible);
            ctx.record("clearance", rot.clearance);
            if !rot.feasible {
                return Ok(ctx.verdict(false));
            }
            let ta = a.scaled(rot.t);
            let mut undetermined = false;
            for p in ROTATION_EXPONENTS {
                let r = ctx.estimate(&ta, p)?;
                ctx.record_angle(&format!("p{p}_"), &r);
                match r.classification {
                    Classification::AtPi => return Ok(ctx.verdict(false)),
                    Classification::Undetermined => undetermined = true,
                    Classification::BelowPi => {}
                }
            }
            Ok(if undetermined { Outcome::Vacuous } else { Outcome::Pass })
        }
        // Origin on the boundary of W(A): ascent at most 1, index 1.
        PropertyId::P6 => {
            let ok = ctx.complementary(a)?;
            Ok(ctx.verdict(ok))
        }
        PropertyId::P7 => {
            let k = drazin_index(a, &tol)?;
            ctx.record("drazin_index", k as f64);
            Ok(ctx.verdict(k == 1))
        }
        // With R(A) ⟂ N(A) and an obtuse angle, restricting to N(A)^⊥ keeps it.
        PropertyId::P8 => {
            let full = ctx.estimate(a, 2.0)?;
            ctx.record_angle("", &full);
            if full.cos_estimate >= -tol.angle_margin {
                return Ok(Outcome::Vacuous);
            }
            let dom = kernel_basis(a, &tol)?.orthogonal_complement();
            let opt = ctx.cfg.optimizer.with_seed(derive_seed(ctx.seed, &[TAG_OPTIMIZE, 1]));
            let restricted = restricted_cosine(a, &dom, &LpSpace::euclidean(a.order()), &opt, &tol)?;
            ctx.record_angle("restricted_", &restricted);
            Ok(ctx.verdict((full.cos_estimate - restricted.cos_estimate).abs() <= RESTRICTION_TOL))
        }
        // No eigenvalue near the negative axis: the angle stays below pi.
        PropertyId::P9 => {
            if !ray_clearance(a, PI, RAY_TOL, &tol)? {
                return Ok(Outcome::Vacuous);
            }
            let r = ctx.estimate(a, 2.0)?;
            ctx.record_angle("", &r);
            Ok(ctx.verdict(r.classification != Classification::AtPi))
        }
        // Some eigenvalue-free ray: range and kernel are complementary.
        PropertyId::P10 => {
            let clear = (0..RAY_GRID)
                .map(|i| -PI + 2.0 * PI * i as f64 / RAY_GRID as f64)
                .map(|w| ray_clearance(a, w, RAY_TOL, &tol))
                .collect::<Result<Vec<bool>>>()?;
            let Some(i) = clear.iter().position(|&b| b) else { return Ok(Outcome::Vacuous) };
            ctx.record("omega", -PI + 2.0 * PI * i as f64 / RAY_GRID as f64);
            let ok = ctx.complementary(a)?;
            Ok(ctx.verdict(ok))
        }
        // The false converse: complementary, yet the angle is pi for -I.
        PropertyId::Converse => {
            if !ctx.complementary(a)? {
                return Ok(Outcome::Vacuous);
            }
            let r = ctx.estimate(a, 2.0)?;
            ctx.record_angle("", &r);
            Ok(ctx.verdict(r.classification == Classification::BelowPi))
        }
    }
}

/// Evaluates one property on a given matrix. For properties tied to a
/// family, a matrix outside the family does not meet the hypothesis.
pub fn check_matrix(id: PropertyId, a: &ComplexMatrix, seed: u64, cfg: &SuiteConfig) -> Result<Verdict> {
    let family = match id {
        PropertyId::P4 | PropertyId::Converse => None,
        _ => family_for(id, 0),
    };
    if let Some(f) = family {
        if !satisfies(f, a, &cfg.tol)? {
            return Ok(Verdict::Vacuous);
        }
    }
    let mut ctx = Ctx { cfg, seed, order: a.order(), measured: BTreeMap::new() };
    Ok(match evaluate(id, a, &mut ctx)? {
        Outcome::Pass => Verdict::Pass,
        Outcome::Vacuous => Verdict::Vacuous,
        Outcome::Fail(_) => Verdict::Fail,
    })
}

pub(crate) fn matrix_bits(a: &ComplexMatrix) -> Vec<[f64; 2]> {
    a.row_major().iter().map(|z: &Complex64| [z.re, z.im]).collect()
}
