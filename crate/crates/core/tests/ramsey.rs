mod common;

use num_bigint::BigUint;
use proptest::prelude::*;
use starmap::ramsey::{
    check_certificate, find_brauer, find_exp_witness, find_homothetic, find_mono_ramsey,
    find_schur, Builtin, Certificate, ColoringSpec, ExpKind, RamseyError, Threads, VerifyError,
    Witness,
};

fn points(n: u64, bits: u32) -> ColoringSpec {
    ColoringSpec::table_from_fn(1, 1, 2, n, |t| (bits >> t[0]) & 1).unwrap()
}

/// Colors `1..=n` by bits `0..n`; 0 gets color 0.
fn shifted(n: u64, bits: u32) -> ColoringSpec {
    ColoringSpec::table_from_fn(1, 1, 2, n + 1, |t| {
        if t[0] == 0 {
            0
        } else {
            (bits >> (t[0] - 1)) & 1
        }
    })
    .unwrap()
}

#[test]
fn triangle_search_matches_the_oracle_on_k5() {
    let edge = common::edge_indexer(5);
    for bits in 0..1u32 << 10 {
        let c = ColoringSpec::table_from_fn(2, 1, 2, 5, |t| {
            (bits >> edge(t[0] as usize, t[1] as usize)) & 1
        })
        .unwrap();
        let found = find_mono_ramsey(&c, 5, 3, Threads(1)).unwrap();
        assert_eq!(
            found.is_some(),
            common::has_mono_triangle(5, bits),
            "{bits:#x}"
        );
        if let Some(cert) = found {
            check_certificate(&cert, &c, None).unwrap();
        }
    }
}

#[test]
fn progression_search_matches_the_oracle() {
    let shape = [vec![0], vec![1], vec![2]];
    for n in 3..=9u64 {
        for bits in 0..1u32 << n {
            let c = points(n, bits);
            let found = find_homothetic(&shape, &c, n, Threads(1)).unwrap();
            assert_eq!(
                found.is_some(),
                common::has_mono_ap3(n, bits),
                "n={n} {bits:#b}"
            );
            if let Some(cert) = found {
                check_certificate(&cert, &c, Some(&shape)).unwrap();
            }
        }
    }
}

#[test]
fn corner_search_matches_the_oracle() {
    let shape = [vec![0, 0], vec![1, 0], vec![0, 1]];
    let n = 3u64;
    for bits in 0..1u64 << (n * n) {
        let c =
            ColoringSpec::table_from_fn(1, 2, 2, n, |t| ((bits >> (t[0] * n + t[1])) & 1) as u32)
                .unwrap();
        let found = find_homothetic(&shape, &c, n, Threads(1)).unwrap();
        assert_eq!(
            found.is_some(),
            common::has_mono_corner(n, bits),
            "{bits:#b}"
        );
        if let Some(cert) = found {
            check_certificate(&cert, &c, Some(&shape)).unwrap();
        }
    }
}

#[test]
fn schur_search_returns_the_least_pair() {
    for n in 1..=9u64 {
        for bits in 0..1u32 << n {
            let c = shifted(n, bits);
            for strict in [true, false] {
                let found = find_schur(&c, n, strict, Threads(1)).unwrap();
                let expected = common::least_schur(n, bits, strict);
                let got = found.as_ref().map(|cert| match cert.witness {
                    Witness::SchurTriple { a, b } => (a, b),
                    _ => panic!("wrong witness kind"),
                });
                assert_eq!(got, expected, "n={n} {bits:#b} strict={strict}");
            }
        }
    }
}

#[test]
fn schur_thresholds() {
    assert_eq!(common::schur_threshold(9, false), Some(5));
    assert_eq!(common::schur_threshold(9, true), Some(9));
}

#[test]
fn brauer_search_matches_the_oracle() {
    for l in 1..=2u64 {
        for n in 1..=8u64 {
            for bits in 0..1u32 << n {
                let c = shifted(n, bits);
                let found = find_brauer(&c, n, l, Threads(1)).unwrap();
                assert_eq!(
                    found.is_some(),
                    common::has_brauer(n, l, bits),
                    "l={l} n={n} {bits:#b}"
                );
                if let Some(cert) = found {
                    check_certificate(&cert, &c, None).unwrap();
                }
            }
        }
    }
}

#[test]
fn exponential_witnesses() {
    let constant = ColoringSpec::builtin(Builtin::Constant, 1, 1, 1).unwrap();
    let cert = find_exp_witness(&constant, 4, ExpKind::Mul2, Threads(1))
        .unwrap()
        .unwrap();
    assert_eq!(
        cert.witness,
        Witness::ExpWitness {
            kind: ExpKind::Mul2,
            a: BigUint::from(1u32),
            b: BigUint::from(2u32)
        }
    );
    let parity = ColoringSpec::builtin(Builtin::BitLengthParity, 1, 1, 2).unwrap();
    for kind in [ExpKind::Mul2, ExpKind::Exp] {
        let cert = find_exp_witness(&parity, 64, kind, Threads(1))
            .unwrap()
            .unwrap();
        check_certificate(&cert, &parity, None).unwrap();
    }
    let residue = ColoringSpec::builtin(Builtin::Residue(3), 1, 1, 3).unwrap();
    let cert = find_exp_witness(&residue, 64, ExpKind::Exp, Threads(4))
        .unwrap()
        .unwrap();
    check_certificate(&cert, &residue, None).unwrap();
}

#[test]
fn oversized_requests_are_refused() {
    let c = points(4, 0);
    assert_eq!(
        find_mono_ramsey(&c, 4, 5, Threads(1)),
        Err(RamseyError::BoxTooSmall { h: 5, n: 4 })
    );
    assert!(matches!(
        find_schur(&c, 4, true, Threads(1)),
        Err(RamseyError::InvalidParameter(_))
    ));
    assert!(matches!(
        find_exp_witness(&c, 4, ExpKind::Exp, Threads(1)),
        Err(RamseyError::Unsupported(_))
    ));
}

#[test]
fn table_files_report_lines() {
    let ok = "# two colors on [0,3)\n1 1 2 3\n0 0\n1 1\n2 0\n";
    let c = ColoringSpec::parse_table(ok).unwrap();
    assert_eq!(c.color_of(1), Some(1));
    assert_eq!(ColoringSpec::parse_table(&c.canonical_text()).unwrap(), c);
    let missing = "1 1 2 3\n0 0\n2 0\n";
    assert!(matches!(
        ColoringSpec::parse_table(missing),
        Err(RamseyError::TableFormat { .. })
    ));
    let bad = "1 1 2 3\n0 0\n1 x\n2 0\n";
    assert_eq!(
        ColoringSpec::parse_table(bad).unwrap_err(),
        RamseyError::TableFormat {
            line: 3,
            message: "`x` is not a natural number".into()
        }
    );
}

#[test]
fn certificates_survive_json_and_reject_tampering() {
    let c = shifted(9, 0b1_0110_1001);
    let cert = find_brauer(&c, 9, 1, Threads(1)).unwrap().unwrap();
    let back = Certificate::from_json(&cert.to_json()).unwrap();
    assert_eq!(back, cert);
    check_certificate(&back, &c, None).unwrap();
    let mut forged = back.clone();
    forged.color = forged.color.map(|x| 1 - x);
    assert!(matches!(
        check_certificate(&forged, &c, None),
        Err(VerifyError::WrongColor(..))
    ));
    let other = shifted(9, 0b0_0110_1001);
    assert_eq!(
        check_certificate(&back, &other, None),
        Err(VerifyError::DigestMismatch)
    );
}

fn table(colors: u32, n: u64) -> impl Strategy<Value = ColoringSpec> {
    prop::collection::vec(0..colors, n as usize).prop_map(move |cells| {
        ColoringSpec::table_from_fn(1, 1, colors, n, |t| cells[t[0] as usize]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn threads_do_not_change_results(c in table(3, 60), l in 1u64..=3) {
        let one = find_brauer(&c, 59, l, Threads(1)).unwrap();
        prop_assert_eq!(&find_brauer(&c, 59, l, Threads(8)).unwrap(), &one);
        let shape = [vec![0], vec![1], vec![3]];
        let one = find_homothetic(&shape, &c, 60, Threads(1)).unwrap();
        prop_assert_eq!(find_homothetic(&shape, &c, 60, Threads(6)).unwrap(), one);
        let one = find_schur(&c, 59, true, Threads(1)).unwrap();
        prop_assert_eq!(find_schur(&c, 59, true, Threads(3)).unwrap(), one);
    }

    #[test]
    fn witnesses_persist_in_larger_boxes(c in table(2, 40), n in 5u64..30) {
        let key = |cert: &Certificate| match cert.witness {
            Witness::SchurTriple { a, b } => (a, b),
            _ => unreachable!(),
        };
        if let Some(small) = find_schur(&c, n, true, Threads(1)).unwrap() {
            let big = find_schur(&c, 39, true, Threads(1)).unwrap();
            prop_assert!(big.is_some());
            prop_assert!(key(&big.unwrap()) <= key(&small));
        }
    }

    #[test]
    fn every_found_certificate_verifies(c in table(2, 24), h in 3usize..=4) {
        let pairs = ColoringSpec::table_from_fn(2, 1, 2, 12, |t| c.color_of(t[0] + t[1]).unwrap()).unwrap();
        if let Some(cert) = find_mono_ramsey(&pairs, 12, h, Threads(2)).unwrap() {
            prop_assert!(check_certificate(&cert, &pairs, None).is_ok());
        }
        if let Some(cert) = find_brauer(&c, 23, 2, Threads(2)).unwrap() {
            prop_assert!(check_certificate(&cert, &c, None).is_ok());
        }
    }
}

#[test]
fn point_colorings_give_monochromatic_sets() {
    for bits in 0..1u32 << 6 {
        let c = points(6, bits);
        let color = |x: u64| (bits >> x) & 1;
        let least = (0..6u64)
            .flat_map(|a| (a + 1..6).flat_map(move |b| (b + 1..6).map(move |d| [a, b, d])))
            .find(|t| t.iter().all(|&x| color(x) == color(t[0])));
        let cert = find_mono_ramsey(&c, 6, 3, Threads(1)).unwrap();
        match (&cert, least) {
            (Some(cert), Some(t)) => {
                assert_eq!(
                    cert.witness,
                    Witness::MonoSet { set: t.to_vec() },
                    "{bits:06b}"
                );
                check_certificate(cert, &c, None).unwrap();
            }
            (None, None) => {}
            _ => panic!("{bits:06b}: {cert:?} vs {least:?}"),
        }
    }
}
