use proptest::prelude::*;

use irw_core::encoders::{decode_config, encode_config, pickn_trs, tm_to_trs};
use irw_core::laws::{check_srs_bisim, check_two_sided_random, fixtures, random};
use irw_core::omega::parse_word;
use irw_core::turing::{parse_config, tm_step};
use irw_core::{
    agreement_depth, bisim_equal, canonical_key, parse_term, print_term, Signature, Term,
};

const SYMS: [(&str, usize); 4] = [("f", 2), ("g", 1), ("a", 0), ("b", 0)];

fn sig() -> Signature {
    Signature::new()
        .with("f", 2)
        .with("g", 1)
        .with("a", 0)
        .with("b", 0)
}

fn random_term(seed: u64, nodes: usize) -> Term {
    random::term(&mut random::rng(seed), &SYMS, nodes)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_terms_parse_back(seed in any::<u64>(), nodes in 1usize..20) {
        let t = random_term(seed, nodes);
        let back = parse_term(&print_term(&t), &sig()).unwrap();
        prop_assert!(bisim_equal(&t, &back));
    }

    #[test]
    fn keys_agree_with_bisimulation(a in any::<u64>(), b in any::<u64>(), nodes in 1usize..8) {
        let (s, t) = (random_term(a, nodes), random_term(b, nodes));
        prop_assert_eq!(canonical_key(&s) == canonical_key(&t), bisim_equal(&s, &t));
        prop_assert_eq!(agreement_depth(&s, &t).is_none(), bisim_equal(&s, &t));
    }

    #[test]
    fn unfolding_keeps_the_key(seed in any::<u64>(), nodes in 1usize..20, pick in any::<usize>()) {
        let t = random_term(seed, nodes);
        let positions = t.positions(6);
        let p = &positions[pick % positions.len()];
        let u = t.replace_at(p, &t.subterm_at(p).unwrap()).unwrap();
        prop_assert!(bisim_equal(&t, &u));
        prop_assert_eq!(canonical_key(&t), canonical_key(&u));
    }

    #[test]
    fn truncation_agrees_up_to_its_depth(seed in any::<u64>(), nodes in 1usize..20, d in 0usize..6) {
        let t = random_term(seed, nodes);
        let cut = t.truncate(d);
        prop_assert!(cut.is_finite());
        if let Some(k) = agreement_depth(&t, &cut) {
            prop_assert!(k >= d);
        }
    }

    #[test]
    fn redexes_match_brute_force(seed in any::<u64>()) {
        let m = fixtures::det("m_acc");
        let trs = tm_to_trs(&m);
        let c = random::tm_config(&mut random::rng(seed), &m);
        let t = encode_config(&c);
        let found: Vec<_> = trs
            .find_redexes(&t, 16)
            .into_iter()
            .map(|r| (r.position, r.rule))
            .collect();
        let mut brute = Vec::new();
        for p in t.positions(16) {
            for (i, rule) in trs.rules().iter().enumerate() {
                if trs.match_at(&t, &p, &rule.id).unwrap().is_some() {
                    brute.push((p.clone(), i));
                }
            }
        }
        prop_assert_eq!(found, brute);
    }

    #[test]
    fn encoding_round_trips_and_commutes(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let m = random::det_machine(&mut rng, 0);
        let c = random::tm_config(&mut rng, &m);
        prop_assert_eq!(decode_config(&m, &encode_config(&c)).unwrap(), c.clone());
        prop_assert_eq!(parse_config(&m, &c.to_string()).unwrap(), c.clone());
        if let Some(next) = tm_step(&m, &c) {
            let trs = tm_to_trs(&m);
            let steps = irw_core::rewrite::successors(&trs, &encode_config(&c), 2);
            prop_assert_eq!(steps.len(), 1);
            prop_assert_eq!(decode_config(&m, &steps[0].1).unwrap(), next);
        }
    }

    #[test]
    fn two_sided_bisimulation_on_random_machines(seed in any::<u64>()) {
        let r = check_two_sided_random(2, 2, 20, seed);
        prop_assert!(r.holds(), "{}", r.render());
    }

    #[test]
    fn srs_bisimulation_on_random_machines(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let m = random::nd_machine(&mut rng, 0);
        let w = random::omega_word(&mut rng, &m.alphabet);
        let r = check_srs_bisim(&m, &[w], 12);
        prop_assert!(r.holds(), "{}", r.render());
    }

    #[test]
    fn word_suffixes_shift_cells(seed in any::<u64>(), k in 0usize..10) {
        let mut rng = random::rng(seed);
        let m = random::nd_machine(&mut rng, 0);
        let w = random::omega_word(&mut rng, &m.alphabet);
        let s = w.suffix(k);
        for i in 0..12 {
            prop_assert_eq!(s.at(i), w.at(i + k));
        }
        prop_assert_eq!(parse_word(&w.to_string()).unwrap(), w);
    }
}

#[test]
fn pickn_reducts_stay_finite() {
    let trs = pickn_trs();
    let r = irw_core::rewrite::enumerate_reducts(&trs, &Term::constant("pickn"), 500, 64);
    assert!(r.terms.iter().all(|(t, _)| t.is_finite()));
}

#[test]
fn acyclic_prefix_merges_with_its_cycle() {
    let s = sig();
    let cases = [
        ("g(g(rec X. g(X)))", "rec Y. g(Y)", true),
        (
            "f(g(rec X. g(X)), rec Z. g(Z))",
            "f(rec Y. g(Y), g(rec W. g(W)))",
            true,
        ),
        ("g(rec X. g(g(X)))", "rec Y. g(Y)", true),
        ("g(a)", "rec Y. g(Y)", false),
        ("f(a, rec X. f(a, X))", "rec Y. f(a, f(a, Y))", true),
        ("f(b, rec X. f(a, X))", "rec Y. f(a, f(a, Y))", false),
    ];
    for (a, b, eq) in cases {
        let (x, y) = (parse_term(a, &s).unwrap(), parse_term(b, &s).unwrap());
        assert_eq!(bisim_equal(&x, &y), eq, "{a} vs {b}");
        assert_eq!(canonical_key(&x) == canonical_key(&y), eq, "{a} vs {b}");
    }
}
