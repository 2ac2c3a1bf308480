//! Certified-negative pairs stay visibly short of transfer under a bounded
//! search. A sanity check against the certificates, not a proof: the
//! certificate is the witness, the scan just has to agree with it at the
//! budget used here (t_max = 1000, default evaluation cap).

use pgst_core::certificates::{check_certificate, generate_certificate};
use pgst_core::classifier::{classify, Verdict};
use pgst_core::dynamics::search_best_time;

#[test]
fn every_negative_pair_certifies_to_three_hundred() {
    for n in 2..=300u64 {
        for a in 1..=n / 2 {
            let c = classify(n, a, n + 1 - a).unwrap();
            if c.verdict != Verdict::NoPgst {
                continue;
            }
            let cert = generate_certificate(n, a)
                .unwrap_or_else(|e| panic!("generate failed at (n={n}, a={a}): {e}"));
            let report = check_certificate(&cert).unwrap();
            assert!(report.all_passed(), "check failed at (n={n}, a={a}): {report:?}");
        }
    }
}

#[test]
fn certified_pairs_stay_below_near_transfer() {
    for n in 2..=24u64 {
        for a in 1..=n / 2 {
            let c = classify(n, a, n + 1 - a).unwrap();
            if c.verdict != Verdict::NoPgst {
                continue;
            }
            let cert = generate_certificate(n, a).unwrap();
            assert!(check_certificate(&cert).unwrap().all_passed());
            let trace = search_best_time(n, a, n + 1 - a, 1e-3, 1000.0).unwrap();
            assert!(
                !trace.achieved && trace.best_fidelity < 1.0 - 1e-3,
                "certified pair (n={n}, a={a}) reached fidelity {}",
                trace.best_fidelity
            );
        }
    }
}

#[test]
fn positive_pairs_do_approach_transfer() {
    // The contrast case: the certified construction never applies to these,
    // and a modest budget already gets close. (11, 4) is the second inner
    // pair of P_11, the family where end vertices fail but inner multiples
    // of 2^(t-1) succeed.
    for (n, a, eps, tmax) in [
        (2u64, 1u64, 1e-6, 50.0),
        (3, 1, 1e-6, 50.0),
        (4, 1, 0.01, 10_000.0),
        (11, 4, 0.05, 100_000.0),
    ] {
        assert_eq!(classify(n, a, n + 1 - a).unwrap().verdict, Verdict::Pgst);
        assert!(generate_certificate(n, a).is_err());
        let trace = search_best_time(n, a, n + 1 - a, eps, tmax).unwrap();
        assert!(trace.achieved, "(n={n}, a={a}) best {}", trace.best_fidelity);
    }
}
