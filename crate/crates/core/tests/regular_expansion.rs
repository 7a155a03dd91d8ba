use factorx::exact::exact_regular_count;
use factorx::regular::{corrections, rg_log_expansion, stirling_xi};

const EXACT_37_18: f64 = 1.6237815782;

#[test]
fn conjectural_rows() {
    for (k, expected) in [(8, 1.6237815817), (9, 1.6237815788)] {
        assert!(rg_log_expansion(37, 18, k, false).is_err());
        let r = rg_log_expansion(37, 18, k, true).unwrap();
        assert!(r.conjectural);
        let s = r.scientific();
        assert_eq!(s.exponent, 168);
        assert!(
            (s.mantissa / expected - 1.0).abs() < 5e-11,
            "k={k}: {}",
            s.mantissa_string(12)
        );
    }
}

#[test]
fn relative_error_contracts_with_k() {
    let mut last = f64::INFINITY;
    for k in 1..=9 {
        let s = rg_log_expansion(37, 18, k, true).unwrap().scientific();
        let err = (s.mantissa / EXACT_37_18 - 1.0).abs();
        assert!(err < last, "k={k}");
        last = err;
    }
}

#[test]
fn eps2_matches_direct_xi_evaluation() {
    let n = 101;
    let d = 50;
    let nf = n as f64;
    let direct = nf * stirling_xi(100.0).unwrap()
        - 2.0 * nf * stirling_xi(50.0).unwrap()
        - 0.5 * nf * (1.0 - 1.0 / nf).ln();
    assert!((corrections(n, d).unwrap().eps2 - direct).abs() < 1e-12);
}

#[test]
fn k7_gap_to_exact_shrinks_with_n() {
    let mut last = f64::INFINITY;
    for n in [8usize, 10, 12, 14] {
        let d = n / 2;
        let d = if (n * d) % 2 == 1 { d - 1 } else { d };
        let exact = exact_regular_count(n, d).unwrap().ln();
        let r = rg_log_expansion(n, d, 7, false).unwrap();
        let gap = (exact - r.log_value).abs();
        assert!(gap < last, "n={n}");
        last = gap;
    }
}

#[test]
fn expansion_is_close_to_exact_for_moderate_n() {
    for n in 10..=14usize {
        for d in 1..=n - 2 {
            if (n * d) % 2 == 1 {
                continue;
            }
            let exact = exact_regular_count(n, d).unwrap().ln();
            let r = rg_log_expansion(n, d, 7, false).unwrap();
            assert!((exact - r.log_value).abs() < 2e-3, "({n},{d})");
        }
    }
}
