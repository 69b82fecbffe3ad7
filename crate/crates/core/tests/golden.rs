mod common;

use common::*;
use corevote::constructive::*;
use corevote::games::*;
use corevote::io::*;
use corevote::scoring::*;
use corevote::shapley::shapley_value;
use corevote::simplex::*;
use corevote::*;

fn g() -> EnumerationGuard {
    EnumerationGuard::default()
}

fn committee(c: &[usize]) -> Committee {
    Committee::new(c.iter().copied())
}

fn coalition(v: &[usize]) -> Coalition {
    Coalition::new(v.iter().copied())
}

#[test]
fn profile_formats() {
    let json = r#"{"alternatives":["c1","c2","c3","c4","c5"],"voters":[
        {"id":"v1","approves":["c1","c2","c3"]},{"id":"v2","approves":["c1","c2","c3"]},
        {"id":"v3","approves":["c1","c2","c3"]},{"id":"v4","approves":["c1","c2","c3"]},
        {"id":"v5","approves":["c4","c5"]},{"id":"v6","approves":["c4","c5"]}],"k":3}"#;
    let i = parse_profile_json(json).unwrap();
    assert_eq!((i.m(), i.n(), i.k()), (5, 6, 3));
    assert_eq!(i, ex1());

    let empty = r#"{"alternatives":["a"],"voters":[{"id":"x","approves":[]}],"k":1}"#;
    assert!(parse_profile_json(empty).unwrap().profile().approvals(0).is_empty());
    let k0 = r#"{"alternatives":["a"],"voters":[],"k":0}"#;
    assert!(matches!(parse_profile_json(k0), Err(Error::KOutOfRange { .. })));

    assert_eq!(parse_profile_text("3 4 2\n1\n1\n1 2\n2 3").unwrap(), ex2());
    assert!(parse_profile_text("1 1 1\n-").unwrap().profile().approvals(0).is_empty());
    assert!(parse_profile_text("2 1 2\n3").is_err());
}

#[test]
fn utility_vector_io() {
    let a = vector(&[(4, 3), (4, 3), (4, 3), (1, 1)]);
    assert_eq!(serialize_utility_vector(&a), r#"["4/3","4/3","4/3","1"]"#);
    assert_eq!(serialize_utility_vector(&UtilityVector::zeros(3)), r#"["0","0","0"]"#);
    assert!(matches!(parse_utility_vector(r#"["1/0"]"#, 1), Err(Error::ZeroDenominator)));
}

#[test]
fn voter_and_coalition_scores() {
    let p1 = ex1();
    assert_eq!(voter_score(Rule::Av, p1.profile(), 0, &committee(&[0, 1, 2])).unwrap(), q(3, 1));
    let p2 = ex2();
    let w = committee(&[0, 1]);
    assert_eq!(voter_score(Rule::Sav, p2.profile(), 2, &w).unwrap(), q(1, 1));
    assert_eq!(voter_score(Rule::Pav, p2.profile(), 2, &w).unwrap(), q(3, 2));
    assert_eq!(voter_score(Rule::Pav, p2.profile(), 0, &committee(&[1])).unwrap(), q(0, 1));
    let all = Coalition::grand(4);
    assert_eq!(coalition_score(Rule::Av, p2.profile(), &all, &w).unwrap(), q(5, 1));
    assert_eq!(coalition_score(Rule::Cc, p2.profile(), &all, &committee(&[0, 2])).unwrap(), q(4, 1));
    for rule in Rule::ALL {
        assert!(coalition_score(rule, p2.profile(), &Coalition::empty(), &w).unwrap().is_zero());
    }
}

#[test]
fn seat_caps_and_values() {
    let i3 = ex3();
    assert_eq!(seat_cap(&i3, &coalition(&[0, 1])), 0);
    assert_eq!(seat_cap(&i3, &coalition(&[0, 1, 2])), 1);
    assert_eq!(seat_cap(&i3, &Coalition::grand(6)), 2);

    let v = coalition_value(&ex2(), Rule::Av, &coalition(&[2, 3]), &g()).unwrap();
    assert_eq!((v.score, v.committee), (q(2, 1), committee(&[1])));
    for rule in Rule::ALL {
        let v = coalition_value(&i3, rule, &coalition(&[4, 5]), &g()).unwrap();
        assert!(v.score.is_zero() && v.committee.is_empty());
    }
    let v = coalition_value(&empty_core(), Rule::Cc, &coalition(&[0, 1, 2]), &g()).unwrap();
    assert_eq!((v.score, v.committee), (q(3, 1), committee(&[0])));
}

#[test]
fn example2_winners() {
    let i = ex2();
    let cases = [
        (Rule::Av, q(5, 1), vec![committee(&[0, 1])]),
        (Rule::Sav, q(7, 2), vec![committee(&[0, 1])]),
        (Rule::Cc, q(4, 1), vec![committee(&[0, 1]), committee(&[0, 2])]),
        (Rule::Pav, q(9, 2), vec![committee(&[0, 1])]),
    ];
    for (rule, value, winners) in cases {
        assert_eq!(winning_committees(&i, rule, &g()).unwrap(), (value, winners), "{rule}");
    }
    for rule in [Rule::Av, Rule::Cc, Rule::Pav] {
        let v = coalition_value(&i, rule, &coalition(&[2, 3]), &g()).unwrap();
        assert_eq!(v.score, q(2, 1));
    }
}

#[test]
fn example1_blocking() {
    let i = ex1();
    let a = UtilityVector::from_integers(&[3, 3, 3, 3, 0, 0]);
    let w = find_tu_blocking(&i, Rule::Av, &a, &g()).unwrap().unwrap();
    assert_eq!((w.coalition.members(), w.committee.members()), (&[4, 5][..], &[3][..]));
    assert!(w.verify(&i, Rule::Av, &a));
    let w = find_ntu_blocking(&i, Rule::Av, &a, &g()).unwrap().unwrap();
    assert_eq!(w.coalition, coalition(&[4, 5]));
    assert!(w.committee == committee(&[3]) || w.committee == committee(&[4]));
    assert!(w.verify(&i, Rule::Av, &a));

    let twos = UtilityVector::from_integers(&[2; 6]);
    assert!(find_tu_blocking(&i, Rule::Av, &twos, &g()).unwrap().is_none());
    assert!(tu_core_membership(&i, Rule::Av, &twos, &g()).unwrap().is_member());
    let thirds = vector(&[(2, 3); 6]);
    assert!(tu_core_membership(&i, Rule::Sav, &thirds, &g()).unwrap().is_member());
    let pav = vector(&[(3, 2), (3, 2), (3, 2), (3, 2), (1, 1), (1, 1)]);
    assert!(tu_core_membership(&i, Rule::Pav, &pav, &g()).unwrap().is_member());
    let ones = UtilityVector::from_integers(&[1; 6]);
    assert!(tu_core_membership(&i, Rule::Cc, &ones, &g()).unwrap().is_member());

    // every voter receiving the grand value cannot be blocked
    for rule in Rule::ALL {
        let (value, _) = winning_committees(&i, rule, &g()).unwrap();
        let rich = UtilityVector::new(vec![value; 6]).unwrap();
        assert!(find_tu_blocking(&i, rule, &rich, &g()).unwrap().is_none());
    }
}

#[test]
fn example2_blocked_by_pair() {
    let i = ex2();
    let a = UtilityVector::from_integers(&[5, 0, 0, 0]);
    match tu_core_membership(&i, Rule::Av, &a, &g()).unwrap() {
        CoreVerdict::Blocked(w) => {
            assert_eq!(w.coalition, coalition(&[1, 2]));
            assert_eq!(w.achieved, Achieved::Total(q(2, 1)));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn ntu_examples() {
    let i3 = ex3();
    let a5 = UtilityVector::from_integers(&[1, 1, 1, 0, 1, 1]);
    assert!(find_ntu_blocking(&i3, Rule::Cc, &a5, &g()).unwrap().is_none());
    // the lexicographically first inducing committee; {c1,c4} induces it too
    let w = ntu_feasibility_witness(&i3, Rule::Cc, &a5, &g()).unwrap();
    assert_eq!(w, Some(committee(&[0, 2])));
    assert_eq!(
        induced_scores(Rule::Cc, i3.profile(), &committee(&[0, 3])).unwrap(),
        a5.values()
    );
    let zero = UtilityVector::zeros(6);
    assert_eq!(ntu_feasibility_witness(&i3, Rule::Av, &zero, &g()).unwrap(), Some(Committee::empty()));
    // all ones is induced by a committee smaller than k, never by one of size k
    let ones = UtilityVector::from_integers(&[1; 6]);
    assert_eq!(
        ntu_feasibility_witness(&ex1(), Rule::Av, &ones, &g()).unwrap(),
        Some(committee(&[0, 3]))
    );
    let oracle = Oracle::new(&ex1(), Rule::Av);
    assert!((0..32usize).filter(|w| w.count_ones() == 3).all(|w| oracle.induced(w) != ones));

    // each voter's best possible score leaves no room for strict improvement
    for rule in Rule::ALL {
        let best: Vec<Rational> = (0..6)
            .map(|v| {
                let top: Vec<usize> = i3.profile().approvals(v).iter().copied().take(2).collect();
                voter_score(rule, i3.profile(), v, &committee(&top)).unwrap()
            })
            .collect();
        let best = UtilityVector::new(best).unwrap();
        assert!(find_ntu_blocking(&i3, rule, &best, &g()).unwrap().is_none());
    }

    let induced = |c: &[usize]| {
        UtilityVector::new(induced_scores(Rule::Av, i3.profile(), &committee(c)).unwrap()).unwrap()
    };
    assert!(ntu_core_membership(&i3, Rule::Av, &induced(&[0, 1]), &g()).unwrap().is_member());
    match ntu_core_membership(&i3, Rule::Av, &induced(&[1, 2]), &g()).unwrap() {
        CoreVerdict::Blocked(w) => {
            assert_eq!(w.coalition, coalition(&[0, 1, 2]));
            assert_eq!(w.committee, committee(&[0]));
        }
        other => panic!("{other:?}"),
    }
    let sevens = UtilityVector::from_integers(&[7; 6]);
    assert!(matches!(
        ntu_core_membership(&i3, Rule::Av, &sevens, &g()).unwrap(),
        CoreVerdict::Infeasible(InfeasibleReason::NotInducible)
    ));
}

#[test]
fn example3_ntu_core() {
    let expected = [[0, 1], [0, 2], [0, 3], [1, 3], [2, 3]];
    for rule in Rule::ALL {
        let core = enumerate_ntu_core(&ex3(), rule, &g()).unwrap();
        let got: Vec<&[usize]> = core.iter().map(|(c, _)| c.members()).collect();
        let want: Vec<&[usize]> = expected.iter().map(|c| &c[..]).collect();
        assert_eq!(got, want, "{rule}");
    }
    let single = inst(1, &[&[0]], 1);
    let core = enumerate_ntu_core(&single, Rule::Av, &g()).unwrap();
    assert_eq!(core, vec![(committee(&[0]), UtilityVector::from_integers(&[1]))]);
}

#[test]
fn tu_core_nonemptiness() {
    let i = empty_core();
    for rule in [Rule::Cc, Rule::Pav] {
        match tu_core_nonempty(&i, rule, &g()).unwrap() {
            TuCoreOutcome::Empty { system, certificate, .. } => {
                assert!(verify_certificate(&system, &certificate).unwrap());
            }
            other => panic!("{rule}: {other:?}"),
        }
    }
    for rule in [Rule::Av, Rule::Sav] {
        match tu_core_nonempty(&i, rule, &g()).unwrap() {
            TuCoreOutcome::NonEmpty(a) => {
                assert!(tu_core_membership(&i, rule, &a, &g()).unwrap().is_member());
            }
            other => panic!("{rule}: {other:?}"),
        }
    }
    let ones = UtilityVector::from_integers(&[1; 4]);
    assert!(tu_core_membership(&ex2(), Rule::Cc, &ones, &g()).unwrap().is_member());
    assert!(matches!(
        tu_core_nonempty(&ex2(), Rule::Cc, &g()).unwrap(),
        TuCoreOutcome::NonEmpty(_)
    ));
    // any efficient vector on the empty-core instance is blocked
    let a = vector(&[(5, 6); 6]);
    assert!(matches!(
        tu_core_membership(&i, Rule::Cc, &a, &g()).unwrap(),
        CoreVerdict::Blocked(_)
    ));
}

#[test]
fn simplex_examples() {
    let mut s = LinearSystem::new(1, true);
    s.add_equality(vec![q(1, 1)], q(1, 1)).unwrap();
    assert_eq!(solve_feasibility(&s).unwrap(), Feasibility::Feasible(vec![q(1, 1)]));
    s.add_inequality(vec![q(1, 1)], q(2, 1)).unwrap();
    let cert = match solve_feasibility(&s).unwrap() {
        Feasibility::Infeasible(c) => c,
        other => panic!("{other:?}"),
    };
    assert!(verify_certificate(&s, &cert).unwrap());
    let zero = FarkasCertificate {
        equality_multipliers: vec![q(0, 1)],
        inequality_multipliers: vec![q(0, 1)],
        bound_multipliers: vec![q(0, 1)],
    };
    assert!(!verify_certificate(&s, &zero).unwrap());

    // the four triple rows against an efficiency total of five
    let mut s = LinearSystem::new(6, true);
    s.add_equality(vec![q(1, 1); 6], q(5, 1)).unwrap();
    for triple in [[0, 1, 2], [0, 3, 4], [2, 3, 5], [1, 4, 5]] {
        let row = (0..6).map(|v| q(triple.contains(&v) as i64, 1)).collect();
        s.add_inequality(row, q(3, 1)).unwrap();
    }
    match solve_feasibility(&s).unwrap() {
        Feasibility::Infeasible(c) => assert!(verify_certificate(&s, &c).unwrap()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn algorithm1_examples() {
    let i = ex2();
    assert_eq!(
        algorithm1_totsep(&i, Rule::Av).unwrap(),
        vector(&[(4, 3), (4, 3), (4, 3), (1, 1)])
    );
    assert_eq!(
        algorithm1_totsep(&i, Rule::Sav).unwrap(),
        vector(&[(11, 10), (11, 10), (4, 5), (1, 2)])
    );
    assert_eq!(algorithm1_totsep(&ex1(), Rule::Av).unwrap(), UtilityVector::from_integers(&[2; 6]));
    assert!(matches!(
        algorithm1_totsep(&i, Rule::Cc),
        Err(Error::UnsupportedRule(Rule::Cc, _))
    ));
}

#[test]
fn algorithm2_examples() {
    let (a, w) = algorithm2_greedy_cc(&ex3());
    assert_eq!(a, UtilityVector::from_integers(&[1, 1, 1, 0, 1, 1]));
    assert_eq!(w, committee(&[0, 3]));
    let (_, w) = algorithm2_greedy_cc_with(&ex3(), TieBreak::HighestIndex);
    assert_eq!(
        induced_scores(Rule::Cc, ex3().profile(), &w).unwrap(),
        UtilityVector::from_integers(&[0, 1, 1, 1, 1, 1]).values()
    );
    let all = inst(3, &[&[0], &[0], &[0, 2]], 1);
    assert_eq!(algorithm2_greedy_cc(&all), (UtilityVector::from_integers(&[1; 3]), committee(&[0])));
}

#[test]
fn jr_examples() {
    assert_eq!(jr_check(&ex3(), &committee(&[0, 3])).unwrap(), None);
    let v = jr_check(&ex1(), &committee(&[0, 1, 2])).unwrap().unwrap();
    assert_eq!((v.cohesive_group, v.common_alternative), (coalition(&[4, 5]), 3));
    assert_eq!(jr_check(&inst(2, &[&[1]], 1), &committee(&[1])).unwrap(), None);
    assert!(matches!(
        jr_check(&ex3(), &committee(&[0])),
        Err(Error::WrongCommitteeSize { expected: 2, actual: 1 })
    ));
}

#[test]
fn utility_maps() {
    let a = UtilityVector::from_integers(&[2, 0]);
    assert_eq!(map_av_to_pav(&a, 3).unwrap(), vector(&[(3, 2), (0, 1)]));
    let p = ApprovalProfile::from_approvals(3, vec![vec![0, 1, 2], vec![]]).unwrap();
    assert_eq!(map_av_to_sav(&a, &p).unwrap(), vector(&[(2, 3), (0, 1)]));
    assert!(map_av_to_pav(&vector(&[(1, 2)]), 3).is_err());
}

#[test]
fn shapley_examples() {
    let cases = [
        (shapley_av(), Rule::Av, q(19, 10), vec![0, 1, 2]),
        (shapley_sav(), Rule::Sav, q(13, 20), vec![0, 1]),
        (shapley_cc_pav(), Rule::Cc, q(5, 6), vec![0, 1]),
        (shapley_cc_pav(), Rule::Pav, q(23, 24), vec![0, 1]),
    ];
    for (i, rule, phi1, blocker) in cases {
        let phi = shapley_value(&i, rule, &g()).unwrap();
        assert_eq!(phi.get(0), &phi1, "{rule}");
        match tu_core_membership(&i, rule, &phi, &g()).unwrap() {
            CoreVerdict::Blocked(w) => {
                assert_eq!(w.coalition.members(), &blocker[..], "{rule}");
                assert!(w.verify(&i, rule, &phi));
            }
            other => panic!("{rule}: {other:?}"),
        }
    }
    let phi = shapley_value(&shapley_sav(), Rule::Sav, &g()).unwrap();
    assert_eq!(phi.get(1), &q(95, 300));
    let w = match tu_core_membership(&shapley_av(), Rule::Av, &shapley_value(&shapley_av(), Rule::Av, &g()).unwrap(), &g()).unwrap() {
        CoreVerdict::Blocked(w) => w,
        other => panic!("{other:?}"),
    };
    assert_eq!(w.committee, committee(&[0, 1]));
    assert_eq!(w.achieved, Achieved::Total(q(6, 1)));
}
