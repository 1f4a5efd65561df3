use num_complex::Complex64;
use opangle_core::angle::{cosine_estimate, Classification, OptimizerConfig};
use opangle_core::numkernel::{kernel_basis, CMat};
use opangle_core::numrange::{numrange_sufficiency_check, trace_boundary, OriginLocation};
use opangle_core::rng::{ginibre, rng_from_seed};
use opangle_core::sip::LpSpace;
use opangle_core::structure::{complementarity_check, drazin_index, drazin_inverse, drazin_residuals, gap, group_inverse};
use opangle_core::verify::{check_matrix, run_property, PropertyId, SuiteConfig, Verdict};
use opangle_core::{ComplexMatrix, Subspace, ToleranceConfig};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

#[test]
fn drazin_of_random_similarity_of_jordan_form() {
    let mut rng = rng_from_seed(5);
    for k in 1..=3usize {
        let n = k + 3;
        let mut core = CMat::zeros(n, n);
        for i in 0..k - 1 {
            core[(i, i + 1)] = Complex64::new(1.0, 0.0);
        }
        for i in k..n {
            core[(i, i)] = Complex64::new(1.0 + i as f64, 0.5);
        }
        let s = CMat::identity(n, n) + ginibre(&mut rng, n, n) * Complex64::new(0.2, 0.0);
        let a = ComplexMatrix::new(&s * core * s.try_inverse().unwrap()).unwrap();
        assert_eq!(drazin_index(&a, &tol()).unwrap(), k);
        let ad = drazin_inverse(&a, &tol()).unwrap();
        assert!(drazin_residuals(&a, &ad, k).max() < 1e-8);
        assert_eq!(group_inverse(&a, &tol()).unwrap().is_some(), k == 1);
        assert_eq!(complementarity_check(&a, &tol()).unwrap().complementary, k == 1);
    }
}

#[test]
fn gap_between_kernel_and_its_complement_is_one() {
    let a = ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0], &[0.0, 0.0, 2.0]]).unwrap();
    let k = kernel_basis(&a, &tol()).unwrap();
    assert_eq!(k.dim(), 1);
    assert!((gap(&k, &k.orthogonal_complement()).unwrap() - 1.0).abs() < 1e-12);
    assert!(gap(&k, &k).is_err());
    assert!((gap(&k, &Subspace::zero(3)).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn angle_and_numerical_range_agree_on_nilpotent() {
    let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
    let r = cosine_estimate(&a, &LpSpace::euclidean(2), &OptimizerConfig::default(), &tol()).unwrap();
    assert_eq!(r.classification, Classification::AtPi);
    let b = trace_boundary(&a, 360).unwrap();
    assert_eq!(b.origin_location, OriginLocation::Interior);
    let s = numrange_sufficiency_check(&a, 360, &tol()).unwrap();
    assert!(!s.complementary && s.rho.is_none() && !s.hypothesis_ok);
}

#[test]
fn suite_reports_partition_trials() {
    let cfg = SuiteConfig { trials: 12, seed: 3, ..SuiteConfig::default() };
    for id in [PropertyId::P2, PropertyId::P8, PropertyId::P10] {
        let r = run_property(id, &cfg).unwrap();
        assert_eq!(r.passes + r.failures + r.vacuous, 12);
        assert!(r.ok(), "{id}: {:?}", r.counterexamples);
    }
}

#[test]
fn converse_rejects_minus_identity() {
    let a = ComplexMatrix::identity(3).scaled(Complex64::new(-1.0, 0.0));
    let v = check_matrix(PropertyId::Converse, &a, 0, &SuiteConfig::default()).unwrap();
    assert_eq!(v, Verdict::Fail);
}
