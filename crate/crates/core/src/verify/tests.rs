use super::*;
use crate::numkernel::{c, kernel_basis, range_basis, ComplexMatrix, ONE, ZERO};
use crate::numrange::trace_boundary;
use crate::structure::{drazin_index, gap, rank_chain};

fn cfg(trials: usize, seed: u64) -> SuiteConfig {
    SuiteConfig { trials, seed, ..SuiteConfig::default() }
}

#[test]
fn every_family_meets_its_predicate() {
    let tol = ToleranceConfig::default();
    for family in Family::ALL {
        for n in [2, 3, 5, 8, 12] {
            for seed in 0..3 {
                let a = generate(&CaseSpec::new(family, n, seed)).unwrap();
                assert_eq!(a.order(), n);
                assert!(satisfies(family, &a, &tol).unwrap(), "{family} n={n} seed={seed}");
            }
        }
    }
}

#[test]
fn generation_is_deterministic() {
    for family in Family::ALL {
        let s = CaseSpec::new(family, 4, 99);
        assert_eq!(generate(&s).unwrap(), generate(&s).unwrap());
    }
}

#[test]
fn rejects_orders_out_of_range() {
    assert_eq!(generate(&CaseSpec::new(Family::Ginibre, 1, 0)), Err(Error::OrderOutOfRange(1)));
    assert_eq!(generate(&CaseSpec::new(Family::Ginibre, 13, 0)), Err(Error::OrderOutOfRange(13)));
}

#[test]
fn overlap_with_identity_similarity_is_j2() {
    let s = crate::numkernel::CMat::identity(2, 2);
    let a = ComplexMatrix::new(overlap_from(&s, &crate::numkernel::CMat::zeros(0, 0)).unwrap()).unwrap();
    assert_eq!(a, ComplexMatrix::from_row_major(2, &[ZERO, ONE, ZERO, ZERO]).unwrap());
    let r = rank_chain(&a, &ToleranceConfig::default()).unwrap();
    assert_eq!((r[1], r[2]), (1, 0));
}

#[test]
fn family_examples() {
    let tol = ToleranceConfig::default();
    let a = generate(&CaseSpec::new(Family::OrthoRk, 3, 5)).unwrap();
    let g = gap(&range_basis(&a, &tol).unwrap(), &kernel_basis(&a, &tol).unwrap()).unwrap();
    assert!((g - 1.0).abs() < 1e-9);

    let a = generate(&CaseSpec::new(Family::Accretive, 4, 5)).unwrap();
    let b = trace_boundary(&a, 720).unwrap();
    // h(pi) = lambda_max(-Herm A) = -lambda_min(Herm A).
    assert!(-b.support_values[360] >= -1e-10);

    for seed in 0..20 {
        let spec = CaseSpec::new(Family::NilpotentMix, 2 + seed as usize % 7, seed);
        let (a, k) = generate_indexed(&spec, &tol).unwrap();
        assert_eq!(drazin_index(&a, &tol).unwrap(), k.unwrap());
        assert!((1..=3).contains(&k.unwrap()));
    }
}

#[test]
fn property_ids_round_trip() {
    for id in PropertyId::ALL.into_iter().chain([PropertyId::Converse]) {
        assert_eq!(id.name().parse::<PropertyId>().unwrap(), id);
        assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{}\"", id.name()));
    }
    assert!("P11".parse::<PropertyId>().is_err());
    assert_eq!("p3".parse::<PropertyId>().unwrap(), PropertyId::P3);
}

#[test]
fn reports_partition_trials_and_are_deterministic() {
    for id in PropertyId::ALL {
        let s = cfg(6, 11);
        let r = run_property(id, &s).unwrap();
        assert_eq!(r.passes + r.failures + r.vacuous, r.trials, "{id}");
        assert_eq!(r.failures, r.counterexamples.len());
        assert!(r.elapsed_ms.is_none());
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        assert_eq!(pool.install(|| run_property(id, &s).unwrap()), r);
    }
}

#[test]
fn overlap_trials_are_at_pi() {
    let r = run_property(PropertyId::P1, &cfg(30, 42)).unwrap();
    assert_eq!((r.passes, r.failures, r.vacuous), (30, 0, 0), "{:?}", r.counterexamples);
}

#[test]
fn boundary_zero_trials_hold() {
    for id in [PropertyId::P6, PropertyId::P7] {
        let r = run_property(id, &cfg(30, 3)).unwrap();
        assert_eq!((r.passes, r.vacuous), (30, 0), "{id}");
    }
}

#[test]
fn false_converse_is_caught_on_minus_identity() {
    let r = run_property(PropertyId::Converse, &cfg(5, 0)).unwrap();
    assert_eq!(r.failures, 5);
    for ce in &r.counterexamples {
        let a = ComplexMatrix::from_row_major(ce.n, &ce.data.iter().map(|p| c(p[0], p[1])).collect::<Vec<_>>()).unwrap();
        assert_eq!(a, ComplexMatrix::identity(ce.n).scaled(c(-1.0, 0.0)));
        assert_eq!(ce.measured["classification"], Measured::Text("AT_PI".into()));
    }
}

#[test]
fn check_matrix_respects_hypotheses() {
    let s = cfg(1, 0);
    let j2 = ComplexMatrix::from_row_major(2, &[ZERO, ONE, ZERO, ZERO]).unwrap();
    assert_eq!(check_matrix(PropertyId::P8, &j2, 0, &s).unwrap(), Verdict::Vacuous);
    assert_eq!(check_matrix(PropertyId::P1, &j2, 0, &s).unwrap(), Verdict::Pass);
    let minus = ComplexMatrix::identity(3).scaled(c(-1.0, 0.0));
    assert_eq!(check_matrix(PropertyId::Converse, &minus, 0, &s).unwrap(), Verdict::Fail);
}

#[test]
fn counterexamples_replay_exactly() {
    let s = cfg(3, 5);
    let r = run_property(PropertyId::Converse, &s).unwrap();
    let json = serde_json::to_string(&r).unwrap();
    let back: VerificationReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, r);
    assert_eq!(r.counterexamples[1].seed, trial_seed(PropertyId::Converse, 5, 1));
}
