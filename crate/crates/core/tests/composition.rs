mod common;

use proptest::prelude::*;
use starmap::{
    enumerate_compositions, parse, pretty, Composition, DomainMode, MapAtom, NormalForm,
};

fn word() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..=6, 0..=10)
}

#[test]
fn mixed_word_has_one_sink() {
    let c = Composition::from_indices([2, 1, 0, 3]);
    let sinks = common::sinks(&c.indices());
    assert_eq!(sinks.len(), 1);
    assert_eq!(
        sinks.into_iter().next().unwrap(),
        c.normalize().to_composition().indices()
    );
    assert_eq!(c.normalize(), NormalForm::new(3, vec![(3, 1)]).unwrap());
}

#[test]
fn closure_sinks_match_both_normalizers() {
    for c in enumerate_compositions(4, 5) {
        let expected = c.normalize();
        assert_eq!(c.normalize_by_rewriting(), expected, "{c}");
        let sinks = common::sinks(&c.indices());
        assert_eq!(sinks.len(), 1, "{c}");
        assert_eq!(
            sinks.first(),
            Some(&expected.to_composition().indices()),
            "{c}"
        );
    }
}

#[test]
fn a_step_can_raise_the_rank() {
    let c = Composition::from_indices([3, 2, 0, 0]);
    let next = c.rewrite_step(1).unwrap();
    assert_eq!(next.indices(), [3, 0, 1, 0]);
    assert_eq!((c.rank(), next.rank()), (3, 4));
}

#[test]
fn identity_families() {
    for m in 0..=5u32 {
        for n in 1..=5u32 {
            let mut w = vec![n];
            w.extend(std::iter::repeat_n(0, m as usize));
            let nf = Composition::from_indices(w).normalize();
            if n <= m {
                assert_eq!(nf, NormalForm::star_power_of(m + 1));
            } else {
                assert_eq!(nf, NormalForm::new(m, vec![(n - m, 1)]).unwrap());
            }
        }
    }
    for k in 1..=5u32 {
        for m in 1..=5u32 {
            for n in 1..=m {
                let mut w = vec![k + n];
                w.extend(std::iter::repeat_n(k, m as usize));
                let nf = Composition::from_indices(w).normalize();
                assert_eq!(nf, NormalForm::new(0, vec![(k, m + 1)]).unwrap());
            }
        }
    }
}

#[test]
fn powers_of_one_map_stay_one_block() {
    for n in 1..=5u32 {
        for m in 1..=5usize {
            let nf = Composition::new(vec![MapAtom::new(n); m]).normalize();
            assert_eq!(nf.blocks(), &[(n, m as u32)]);
            assert_eq!(nf.star_power(), 0);
        }
    }
}

#[test]
fn pretty_round_trips() {
    for c in enumerate_compositions(4, 6) {
        let text = pretty(&c);
        assert_eq!(parse(&text).unwrap(), c, "{text}");
        let nf = c.normalize();
        assert_eq!(parse(&nf.to_string()).unwrap().normalize(), nf);
    }
}

#[test]
fn transport_oracle_agrees_on_every_word() {
    for c in enumerate_compositions(4, 5) {
        let w = c.indices();
        for p in 0..=12 {
            assert_eq!(c.level_transport(p), common::transport(&w, p), "{c} at {p}");
        }
    }
}

proptest! {
    #[test]
    fn rewriting_lowers_the_index_word(w in word()) {
        let c = Composition::from_indices(w);
        for pos in c.redexes() {
            let next = c.rewrite_step(pos).unwrap();
            prop_assert!(next.indices() < c.indices());
            prop_assert!(next.max_index() <= c.max_index());
        }
        prop_assert_eq!(Composition::from(&c.normalize()).rank(), 0);
        prop_assert_eq!(c.rank() == 0, c.indices().windows(2).all(|p| p[0] <= p[1]));
    }

    #[test]
    fn normalize_is_idempotent_and_agrees(w in word()) {
        let c = Composition::from_indices(w);
        let nf = c.normalize();
        prop_assert_eq!(nf.to_composition().normalize(), nf.clone());
        prop_assert_eq!(c.normalize_by_rewriting(), nf);
    }

    #[test]
    fn transport_survives_normalization(w in word()) {
        let c = Composition::from_indices(w);
        let nf = c.normalize();
        let profile = c.level_profile(20);
        prop_assert_eq!(profile[0], 0);
        for p in 0..=20u32 {
            prop_assert_eq!(nf.level_transport(p), profile[p as usize]);
            prop_assert!(profile[p as usize] >= p);
            if p > 0 {
                prop_assert!(profile[p as usize] >= profile[p as usize - 1]);
            }
        }
    }

    #[test]
    fn natural_compose_is_concatenation(a in word(), b in word()) {
        let (x, y) = (Composition::from_indices(a.clone()), Composition::from_indices(b.clone()));
        let joined = x.compose(&y, DomainMode::Natural).unwrap();
        prop_assert_eq!(joined.indices(), [a, b].concat());
    }

    #[test]
    fn compose_is_associative_on_normal_forms(a in word(), b in word(), c in word()) {
        let (x, y, z) = (Composition::from_indices(a), Composition::from_indices(b), Composition::from_indices(c));
        let left = x.compose(&y, DomainMode::Natural).unwrap().compose(&z, DomainMode::Natural).unwrap();
        let right = x.compose(&y.compose(&z, DomainMode::Natural).unwrap(), DomainMode::Natural).unwrap();
        prop_assert_eq!(left.normalize(), right.normalize());
    }

    #[test]
    fn parser_never_panics(text in "[ si_0-9.^*()∘id\\t]{0,24}") {
        let _ = parse(&text);
    }

    #[test]
    fn single_corruptions_are_rejected_or_valid(w in prop::collection::vec(0u32..=4, 1..=6), at in any::<prop::sample::Index>(), ch in "[ si_0-9.^*x]") {
        let text = pretty(&Composition::from_indices(w));
        let chars: Vec<char> = text.chars().collect();
        let i = at.index(chars.len());
        let mut corrupted = chars.clone();
        corrupted[i] = ch.chars().next().unwrap();
        let corrupted: String = corrupted.into_iter().collect();
        match parse(&corrupted) {
            Ok(c) => prop_assert_eq!(parse(&pretty(&c)).unwrap(), c),
            Err(e) => prop_assert!(e.position <= corrupted.len()),
        }
    }
}
