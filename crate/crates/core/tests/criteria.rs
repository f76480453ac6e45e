use agw_core::fixtures;
use agw_core::{
    clustered_scheduling_check, clusterize, directed_acyclicity_check, innocence_check, parse_formula,
    restrict_to_switching, scheduling_check, Error, Label, Strategy, Switching,
};

fn lift(name: &str) -> (Strategy, agw_core::Formula) {
    let f = fixtures::lift_corpus().into_iter().find(|f| f.strategy.name() == name.trim_end_matches(".str")).unwrap();
    (f.strategy, f.formula)
}

#[test]
fn sigma_schedules_left_first_only() {
    let s = fixtures::sigma();
    for r in [scheduling_check(&s), clustered_scheduling_check(&s)] {
        assert!(!r.passed);
        assert!(r.verdict("left-first").unwrap().passed);
        let bad = r.verdict("right-first").unwrap();
        assert!(!bad.passed);
        assert_eq!(bad.witness.as_deref(), Some("L.q·L.true·R.q·R.false"));
        assert_eq!(bad.position.as_deref(), Some("{L.q, L.true, R.false, R.q}"));
    }
}

#[test]
fn independent_answers_pass_both_switchings() {
    let s = fixtures::independent();
    for r in [scheduling_check(&s), clustered_scheduling_check(&s)] {
        assert!(r.passed);
        assert_eq!(r.switchings.len(), 2);
    }
}

#[test]
fn conjunction_has_no_tensor_to_switch() {
    let r = scheduling_check(&fixtures::and_p());
    assert!(r.passed);
    assert_eq!(r.switchings.len(), 1);
    assert_eq!(r.switchings[0].switching, "none");
}

#[test]
fn innocence_verdicts_of_the_boolean_fixtures() {
    let bb = parse_formula("B * B").unwrap();
    let and = parse_formula("(B * B) -o B").unwrap();
    let r = innocence_check(&fixtures::sigma(), &bb).unwrap();
    assert!(!r.innocent && !r.asynchronous);
    assert!(r.directed_acyclicity.is_none());
    for s in [fixtures::and_l(), fixtures::and_r(), fixtures::and_p()] {
        assert!(innocence_check(&s, &and).unwrap().innocent, "{}", s.name());
    }
    assert!(innocence_check(&fixtures::independent(), &bb).unwrap().innocent);
}

#[test]
fn the_empty_strategy_is_not_innocent() {
    let b = parse_formula("B").unwrap();
    let s = Strategy::empty("none", fixtures::boolean_game().into());
    let r = innocence_check(&s, &b).unwrap();
    assert!(!r.receptive.holds);
    assert!(!r.innocent);
    assert!(r.clustered.passed);
}

#[test]
fn lift_corpus_verdicts() {
    let expected = [
        ("cross", false),
        ("separate", true),
        ("silent", true),
        ("mutual_par", true),
        ("mutual_tensor", false),
        ("over_par", true),
        ("under_tensor", false),
        ("crossed_pars", false),
        ("down_first", false),
        ("relay", true),
    ];
    for (name, passes) in expected {
        let (s, f) = lift(name);
        assert_eq!(scheduling_check(&s).passed, passes, "{name}");
        assert_eq!(directed_acyclicity_check(&s, &f).unwrap().passed, passes, "{name}");
        let r = innocence_check(&s, &f).unwrap();
        // silent refuses every Opponent move, so it is never innocent
        assert_eq!(r.innocent, passes && name != "silent", "{name}");
    }
}

#[test]
fn scheduling_and_acyclicity_agree_on_the_lift_corpus() {
    let corpus = fixtures::lift_corpus();
    assert!(corpus.len() >= 6);
    for f in corpus {
        let plain = scheduling_check(&f.strategy).passed;
        let acyclic = directed_acyclicity_check(&f.strategy, &f.formula).unwrap().passed;
        assert_eq!(plain, acyclic, "{}", f.strategy.name());
    }
}

#[test]
fn acyclicity_needs_a_formula_of_lifts() {
    let bb = parse_formula("B * B").unwrap();
    assert!(matches!(directed_acyclicity_check(&fixtures::sigma(), &bb), Err(Error::NotMllLift(_))));
}

#[test]
fn empty_strategies_have_no_jumps() {
    for f in fixtures::lift_corpus() {
        let s = Strategy::empty("none", f.strategy.game_arc().clone());
        assert!(directed_acyclicity_check(&s, &f.formula).unwrap().passed);
    }
}

#[test]
fn clustered_implies_scheduled() {
    for (name, f) in fixtures::all_strategy_files() {
        let clustered = clustered_scheduling_check(&f.strategy);
        let plain = scheduling_check(&f.strategy);
        if clustered.passed {
            assert!(plain.passed, "{name}");
        }
        for v in &clustered.switchings {
            if v.passed {
                assert!(plain.verdict(&v.switching).unwrap().passed, "{name} {}", v.switching);
            }
        }
    }
}

#[test]
fn sigma_plays_form_one_cluster() {
    let s = fixtures::sigma();
    let g = s.game();
    let play = g.play_from_addresses(&["L.q", "L.true", "R.q", "R.false"]).unwrap();
    let c = clusterize(&s, &play).unwrap();
    assert_eq!(c.blocks.len(), 1);
    assert_eq!(c.blocks[0].len(), 4);
}

#[test]
fn parallel_conjunction_plays_form_question_and_answer_clusters() {
    let s = fixtures::and_p();
    let g = s.game();
    let play = g.play_from_addresses(&["R.q", "L.L.q", "L.L.true", "L.R.q", "L.R.false", "R.false"]).unwrap();
    let c = clusterize(&s, &play).unwrap();
    assert_eq!(c.show(g), "[R.q·L.L.q·L.R.q] [L.L.true·L.R.false·R.false]");
}

#[test]
fn clusters_do_not_depend_on_the_representative() {
    for (name, f) in fixtures::all_strategy_files() {
        let s = &f.strategy;
        if s.plays().len() > 2000 {
            continue;
        }
        for &x in s.reached() {
            let plays = s.plays_reaching(x);
            let first = clusterize(s, plays[0]).unwrap();
            for p in &plays[1..] {
                let c = clusterize(s, p).unwrap();
                assert!(c.equivalent(&first), "{name}: {} vs {}", c.show(s.game()), first.show(s.game()));
                assert_eq!(c.moves().len(), p.len());
            }
        }
    }
}

#[test]
fn restriction_never_adds_plays() {
    for (name, g) in fixtures::all_games() {
        let all = g.plays();
        for sw in Switching::all(&g, Label::Tensor) {
            let r = restrict_to_switching(&g, &sw).unwrap();
            let mut n = 0;
            for p in r.plays() {
                let addrs: Vec<&str> = p.iter().map(|&m| r.address(m)).collect();
                let back = g.play_from_addresses(&addrs).unwrap();
                assert!(all.contains(&back), "{name} {}", sw.display());
                n += 1;
            }
            assert!(n <= all.len());
        }
    }
}

#[test]
fn restricting_the_square_sequentializes_it() {
    let g = fixtures::bb_game();
    let sws = Switching::all(&g, Label::Tensor);
    assert_eq!(sws.iter().map(|s| s.display()).collect::<Vec<_>>(), ["left-first", "right-first"]);
    for sw in &sws {
        // once the second side moves the first is frozen: one of the 4 plays
        // of the first side followed by one of the 4 plays of the second
        assert_eq!(restrict_to_switching(&g, sw).unwrap().plays().len(), 4 * 4);
    }
}

#[test]
fn passing_switchings_reach_every_maximal_position() {
    for (name, f) in fixtures::all_strategy_files() {
        let s = &f.strategy;
        let g = s.game();
        let r = scheduling_check(s);
        for sw in Switching::all(g, Label::Tensor) {
            if !r.verdict(&sw.display()).is_some_and(|v| v.passed) {
                continue;
            }
            for x in s.maximal_positions() {
                let scheduled = s.plays_reaching(x).iter().any(|p| {
                    let mut y = agw_core::Position::EMPTY;
                    p.iter().all(|&m| {
                        let ok = sw.allows(g, y, m);
                        y = y.with(m);
                        ok
                    })
                });
                assert!(scheduled, "{name} {} {}", sw.display(), g.show_position(x));
            }
        }
    }
}
