use super::*;
use crate::numkernel::{range_basis, ONE, ZERO};
use crate::rng::{ginibre, random_unitary, rng_from_seed, unit_sphere_vector, Rng};
use std::f64::consts::{FRAC_PI_2, PI};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn cfg() -> OptimizerConfig {
    OptimizerConfig { starts: 16, random_samples: 20_000, ..OptimizerConfig::default() }
}

fn real(rows: &[&[f64]]) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(rows).unwrap()
}

fn vec2(a: f64, b: f64) -> CVec {
    CVec::from_vec(vec![c(a, 0.0), c(b, 0.0)])
}

fn minus_identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n).scaled(c(-1.0, 0.0))
}

/// Minimum of the Euclidean ratio over the Bloch grid
/// `x = (cos a, sin a e^{ib})`, `a` in `[0, pi/2]`, `b` in `[0, 2 pi)`.
fn bloch_grid_min(a: &CMat, steps: usize) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..=steps {
        let al = FRAC_PI_2 * i as f64 / steps as f64;
        for j in 0..steps {
            let be = 2.0 * PI * j as f64 / steps as f64;
            let x = CVec::from_vec(vec![c(al.cos(), 0.0), Complex64::from_polar(al.sin(), be)]);
            let ax = a * &x;
            let nax = ax.norm();
            if nax > 1e-9 {
                best = best.min(x.dotc(&ax).re / nax);
            }
        }
    }
    best
}

/// Independent oracle for n = 3: dense random sampling followed by a
/// shrinking random local search from the best samples.
fn sampled_polished_min(a: &CMat, rng: &mut Rng) -> f64 {
    let f = |x: &CVec| {
        let ax = a * x;
        let nax = ax.norm();
        if nax > 1e-9 * x.norm() {
            x.dotc(&ax).re / (nax * x.norm())
        } else {
            f64::INFINITY
        }
    };
    let mut pts: Vec<(f64, CVec)> = (0..200_000)
        .map(|_| {
            let x = unit_sphere_vector(rng, 3);
            (f(&x), x)
        })
        .collect();
    pts.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut best = f64::INFINITY;
    for (mut v, mut x) in pts.into_iter().take(10) {
        let mut r = 0.05;
        while r > 1e-9 {
            let mut improved = false;
            for _ in 0..40 {
                let y = &x + unit_sphere_vector(rng, 3) * c(r, 0.0);
                let fy = f(&y);
                if fy < v {
                    v = fy;
                    x = y;
                    improved = true;
                }
            }
            if !improved {
                r *= 0.5;
            }
        }
        best = best.min(v);
    }
    best
}

#[test]
fn rayleigh_ratio_examples() {
    let t = tol();
    let s2 = LpSpace::euclidean(2);
    let x = vec2(0.3, -1.7);
    assert!((rayleigh_ratio(&ComplexMatrix::identity(2), &x, &s2, &t).unwrap() - 1.0).abs() < 1e-15);
    assert!((rayleigh_ratio(&minus_identity(2), &x, &s2, &t).unwrap() + 1.0).abs() < 1e-15);
    let d = real(&[&[1.0, 0.0], &[0.0, 4.0]]);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = rayleigh_ratio(&d, &vec2(h, h), &s2, &t).unwrap();
    assert!((v - 5.0 / 34f64.sqrt()).abs() < 1e-14);

    let p = real(&[&[1.0, 0.0], &[0.0, 0.0]]);
    assert_eq!(rayleigh_ratio(&p, &vec2(0.0, 1.0), &s2, &t), Err(Error::NearKernel));
    assert_eq!(rayleigh_ratio(&p, &vec2(0.0, 0.0), &s2, &t), Err(Error::ZeroVector));
}

#[test]
fn minus_identity_is_at_pi() {
    for n in 2..=6 {
        for p in [2.0, 3.0] {
            let r = cosine_estimate(&minus_identity(n), &LpSpace::new(n, p).unwrap(), &cfg(), &tol()).unwrap();
            assert!((r.cos_estimate + 1.0).abs() <= 1e-6, "n={n} p={p}");
            assert_eq!(r.classification, Classification::AtPi);
            assert!((r.angle - r.cos_estimate.acos()).abs() < 1e-12);
        }
    }
}

#[test]
fn orthogonal_projection_has_right_angle() {
    for n in 2..=4 {
        let mut diag = vec![ZERO; n];
        diag[0] = ONE;
        let a = ComplexMatrix::from_diagonal(&diag);
        let r = cosine_estimate(&a, &LpSpace::euclidean(n), &cfg(), &tol()).unwrap();
        assert!(r.cos_estimate.abs() <= 1e-6, "{}", r.cos_estimate);
        assert!((r.angle - FRAC_PI_2).abs() <= 1e-6);
        assert_eq!(r.classification, Classification::BelowPi);
        let dom = range_basis(&a, &tol()).unwrap();
        let rr = restricted_cosine(&a, &dom, &LpSpace::euclidean(n), &cfg(), &tol()).unwrap();
        assert!((rr.cos_estimate - 1.0).abs() <= 1e-6);
    }
}

#[test]
fn positive_diagonal_matches_grid_oracle() {
    let a = real(&[&[1.0, 0.0], &[0.0, 4.0]]);
    let r = cosine_estimate(&a, &LpSpace::euclidean(2), &cfg(), &tol()).unwrap();
    let grid = bloch_grid_min(a.as_matrix(), 1000);
    assert!((r.cos_estimate - grid).abs() <= 1e-4, "{} vs {grid}", r.cos_estimate);
    assert!((r.cos_estimate - 0.8).abs() <= 1e-9);
    assert_eq!(r.classification, Classification::BelowPi);
}

#[test]
fn nilpotent_is_at_pi() {
    let j2 = real(&[&[0.0, 1.0], &[0.0, 0.0]]);
    for p in [2.0, 1.5, 3.0] {
        let r = cosine_estimate(&j2, &LpSpace::new(2, p).unwrap(), &cfg(), &tol()).unwrap();
        assert_eq!(r.classification, Classification::AtPi, "p={p} cos={}", r.cos_estimate);
        let x = CVec::from_vec(r.minimizer.clone());
        assert!((j2.as_matrix() * &x).norm() > 1e-10 * x.norm());
    }
}

#[test]
fn report_invariants_hold() {
    let mut rng = rng_from_seed(3);
    let t = tol();
    for n in 2..=4 {
        let a = ComplexMatrix::new(ginibre(&mut rng, n, n)).unwrap();
        for p in [2.0, 3.0] {
            let space = LpSpace::new(n, p).unwrap();
            let r = cosine_estimate(&a, &space, &cfg(), &t).unwrap();
            let x = CVec::from_vec(r.minimizer.clone());
            assert!((lp_norm(&x, &space) - 1.0).abs() < 1e-12);
            let f = rayleigh_ratio(&a, &x, &space, &t).unwrap();
            assert!((f - r.cos_estimate).abs() <= 1e-10);
            assert!((r.angle - r.cos_estimate.acos()).abs() <= 1e-12);
            for _ in 0..500 {
                let probe = unit_sphere_vector(&mut rng, n);
                assert!(r.cos_estimate <= rayleigh_ratio(&a, &probe, &space, &t).unwrap() + 1e-12);
            }
        }
    }
}

#[test]
fn restricted_cosine_examples() {
    let t = tol();
    let s2 = LpSpace::euclidean(2);
    let e1 = Subspace::from_orthonormal(CMat::from_column_slice(2, 1, &[ONE, ZERO]), 1e-12).unwrap();
    let r = restricted_cosine(&real(&[&[1.0, 0.0], &[0.0, 0.0]]), &e1, &s2, &cfg(), &t).unwrap();
    assert!((r.cos_estimate - 1.0).abs() < 1e-12 && r.angle.abs() < 1e-6);
    let a = real(&[&[-1.0, 0.0], &[0.0, 0.0]]);
    let r = restricted_cosine(&a, &e1, &s2, &cfg(), &t).unwrap();
    assert!((r.cos_estimate + 1.0).abs() < 1e-12);
    let full = cosine_estimate(&a, &s2, &cfg(), &t).unwrap();
    assert_eq!(full.classification, Classification::AtPi);
    let line = crate::structure::real_line(0.8);
    let r = restricted_cosine(&ComplexMatrix::identity(2), &line, &s2, &cfg(), &t).unwrap();
    assert!((r.cos_estimate - 1.0).abs() < 1e-12);
    let e2 = Subspace::from_orthonormal(CMat::from_column_slice(2, 1, &[ZERO, ONE]), 1e-12).unwrap();
    assert_eq!(
        restricted_cosine(&real(&[&[1.0, 0.0], &[0.0, 0.0]]), &e2, &s2, &cfg(), &t),
        Err(Error::VanishesOnDomain)
    );
}

#[test]
fn zero_matrix_is_rejected() {
    let z = ComplexMatrix::zeros(2);
    assert_eq!(cosine_estimate(&z, &LpSpace::euclidean(2), &cfg(), &tol()), Err(Error::ZeroMatrix));
    assert_eq!(scalar_rotation_search(&z, &tol()), Err(Error::ZeroMatrix));
}

#[test]
fn scale_and_unitary_invariance() {
    let mut rng = rng_from_seed(19);
    let t = tol();
    let s3 = LpSpace::euclidean(3);
    for _ in 0..50 {
        let a = ComplexMatrix::new(ginibre(&mut rng, 3, 3)).unwrap();
        let base = cosine_estimate(&a, &s3, &OptimizerConfig::light(1), &t).unwrap().cos_estimate;
        let scaled = cosine_estimate(&a.scaled(c(7.5, 0.0)), &s3, &OptimizerConfig::light(1), &t).unwrap().cos_estimate;
        assert!((base - scaled).abs() <= 1e-8);
        let q = random_unitary(&mut rng, 3);
        let rot = ComplexMatrix::new(&q * a.as_matrix() * q.adjoint()).unwrap();
        let rotated = cosine_estimate(&rot, &s3, &OptimizerConfig::light(2), &t).unwrap().cos_estimate;
        assert!((base - rotated).abs() <= 2e-3, "{base} vs {rotated}");
    }
}

#[test]
fn matches_brute_force_oracle_for_small_orders() {
    let mut rng = rng_from_seed(23);
    let t = tol();
    for trial in 0..50 {
        let a = ComplexMatrix::new(ginibre(&mut rng, 2, 2)).unwrap();
        let est = cosine_estimate(&a, &LpSpace::euclidean(2), &OptimizerConfig::light(trial), &t).unwrap();
        let grid = bloch_grid_min(a.as_matrix(), 1000);
        assert!((est.cos_estimate - grid).abs() <= 1e-3, "trial {trial}: {} vs {grid}", est.cos_estimate);
        assert!(est.cos_estimate <= grid + 1e-12);
    }
    for trial in 0..10 {
        let a = ComplexMatrix::new(ginibre(&mut rng, 3, 3)).unwrap();
        let est = cosine_estimate(&a, &LpSpace::euclidean(3), &OptimizerConfig::light(trial), &t).unwrap();
        let oracle = sampled_polished_min(a.as_matrix(), &mut rng);
        assert!((est.cos_estimate - oracle).abs() <= 1e-3, "trial {trial}: {} vs {oracle}", est.cos_estimate);
    }
}

/// `S (J2 ⊕ B) S^{-1}`: range and kernel share a direction.
fn overlap(rng: &mut Rng, n: usize) -> ComplexMatrix {
    let mut core = CMat::zeros(n, n);
    core[(0, 1)] = ONE;
    let m = n - 2;
    let b = ginibre(rng, m, m) + CMat::identity(m, m) * c(1.5, 0.0);
    core.view_mut((2, 2), (m, m)).copy_from(&b);
    let s = CMat::identity(n, n) + ginibre(rng, n, n) * c(0.3, 0.0);
    ComplexMatrix::new(&s * core * s.clone().try_inverse().unwrap()).unwrap()
}

#[test]
fn range_kernel_overlap_is_at_pi() {
    let mut rng = rng_from_seed(29);
    for n in 2..=6 {
        for p in [2.0, 3.0] {
            let a = overlap(&mut rng, n);
            let r = cosine_estimate(&a, &LpSpace::new(n, p).unwrap(), &OptimizerConfig::light(n as u64), &tol()).unwrap();
            assert_eq!(r.classification, Classification::AtPi, "n={n} p={p}: {}", r.cos_estimate);
        }
    }
}

#[test]
fn below_pi_implies_complementary() {
    let mut rng = rng_from_seed(31);
    let t = tol();
    for trial in 0..40 {
        let n = 2 + trial % 4;
        let a = if trial % 2 == 0 { overlap(&mut rng, n) } else { ComplexMatrix::new(ginibre(&mut rng, n, n)).unwrap() };
        let rot = scalar_rotation_search(&a, &t).unwrap();
        let r = cosine_estimate(&a.scaled(rot.t), &LpSpace::euclidean(n), &OptimizerConfig::light(trial as u64), &t).unwrap();
        if r.classification == Classification::BelowPi {
            let chain = rank_chain(&a, &t).unwrap();
            assert_eq!(chain[1], chain[2], "trial {trial}");
        }
    }
}

#[test]
fn lp_estimates_certify_simple_cases() {
    for p in [1.5, 3.0] {
        let space = LpSpace::new(2, p).unwrap();
        let r = cosine_estimate(&ComplexMatrix::identity(2), &space, &cfg(), &tol()).unwrap();
        assert!((r.cos_estimate - 1.0).abs() < 1e-12);
        assert_eq!(r.classification, Classification::BelowPi);
        let r = cosine_estimate(&real(&[&[1.0, 0.0], &[0.0, 4.0]]), &space, &cfg(), &tol()).unwrap();
        assert_eq!(r.classification, Classification::BelowPi);
        assert!(r.cos_estimate > 0.0 && r.cos_estimate < 1.0);
    }
}

#[test]
fn estimate_is_independent_of_thread_count() {
    let mut rng = rng_from_seed(37);
    let a = ComplexMatrix::new(ginibre(&mut rng, 4, 4)).unwrap();
    for p in [2.0, 3.0] {
        let space = LpSpace::new(4, p).unwrap();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| cosine_estimate(&a, &space, &OptimizerConfig::light(5), &tol()).unwrap())
        };
        assert_eq!(run(1), run(3));
    }
}

#[test]
fn rotation_search_examples() {
    let t = tol();
    let r = scalar_rotation_search(&minus_identity(3), &t).unwrap();
    assert!((r.t - c(-1.0, 0.0)).norm() < 1e-15 && r.feasible);
    let r = scalar_rotation_search(&real(&[&[1.0, 0.0], &[0.0, -1.0]]), &t).unwrap();
    assert!((r.t - c(0.0, 1.0)).norm() < 1e-15 && r.feasible);
    for lam in [c(1.0, 0.0), c(-1.0, 0.0)] {
        assert!(wrap_angle((r.t * lam).arg() - PI).abs() > 1.0);
    }

    let mut shift = CMat::zeros(8, 8);
    for i in 0..8 {
        shift[((i + 1) % 8, i)] = ONE;
    }
    let r = scalar_rotation_search(&ComplexMatrix::new(shift).unwrap(), &t).unwrap();
    assert!((r.t - Complex64::from_polar(1.0, PI / 8.0)).norm() < 1e-9, "{}", r.t);
    assert!((r.clearance - PI / 8.0).abs() < 1e-9);
}

#[test]
fn rotation_ignores_zero_eigenvalues() {
    let t = tol();
    let a = real(&[&[-2.0, 0.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]]);
    let r = scalar_rotation_search(&a, &t).unwrap();
    assert!((r.t - c(-1.0, 0.0)).norm() < 1e-12 && (r.clearance - PI).abs() < 1e-12);
}

#[test]
fn ray_clearance_examples() {
    let t = tol();
    let a = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(0.0, 1.0)]);
    assert!(ray_clearance(&a, PI, 1e-6, &t).unwrap());
    assert!(!ray_clearance(&real(&[&[-2.0, 0.0], &[0.0, 1.0]]), PI, 1e-6, &t).unwrap());
    assert!(ray_clearance(&real(&[&[0.0, 0.0], &[0.0, 1.0]]), PI, 1e-6, &t).unwrap());
    assert!(!ray_clearance(&a, FRAC_PI_2, 1e-6, &t).unwrap());
}
