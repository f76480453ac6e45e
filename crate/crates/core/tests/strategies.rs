use std::collections::BTreeSet;

use agw_core::fixtures;
use agw_core::{copycat, Game, MoveId, Polarity, Strategy};

fn addrs(g: &Game, play: &[&str]) -> Vec<MoveId> {
    g.play_from_addresses(play).unwrap()
}

#[test]
fn every_fixture_is_ingenuous_and_positional() {
    for (name, f) in fixtures::all_strategy_files() {
        let r = f.strategy.check_ingenuous();
        assert!(r.ingenuous(), "{name}: {r:?}");
        assert!(f.strategy.satisfies_play_characterization(), "{name}");
    }
}

#[test]
fn only_the_silent_strategy_is_not_receptive() {
    let refusing: Vec<&str> = fixtures::all_strategy_files()
        .into_iter()
        .filter(|(_, f)| !f.strategy.is_receptive().holds)
        .map(|(n, _)| n)
        .collect();
    assert_eq!(refusing, ["silent.str"]);
}

#[test]
fn parallel_conjunction_has_three_false_events() {
    let s = fixtures::and_p();
    let ev = s.induced_events().unwrap();
    let out = s.game().move_by_address("R.false").unwrap();
    assert_eq!(ev.events_labelled(out).len(), 3);
    assert_eq!(ev.structure.len(), 11);
}

#[test]
fn plain_product_orders_the_sequential_play() {
    // q·q_L·true_L·q_R·false_R·false in the conjunction game: the interface
    // adds no justification between the two sides of the implication
    let g = fixtures::and_game();
    let play = addrs(&g, &["R.q", "L.L.q", "L.L.true", "L.R.q", "L.R.false", "R.false"]);
    let order = g.graph().path_order(&g.path_of(&play).unwrap()).unwrap();
    // occurrence labels read `move@{source}`
    let bare = |l: String| l.split('@').next().unwrap().to_string();
    let covers: BTreeSet<(String, String)> =
        order.cover_labels().into_iter().map(|(a, b)| (bare(a), bare(b))).collect();
    let expected: BTreeSet<(String, String)> = [("L.L.q", "L.L.true"), ("L.R.q", "L.R.false"), ("R.q", "R.false")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    assert_eq!(covers, expected);
}

#[test]
fn parallel_conjunction_interleaves_two_chains() {
    let s = fixtures::and_p();
    for x in s.maximal_positions() {
        assert_eq!(s.plays_reaching(x).len(), 6, "{}", s.game().show_position(x));
        assert_eq!(s.causality_order(x).unwrap().count_linearizations(), 6);
    }
    assert_eq!(s.maximal_positions().len(), 4);
}

#[test]
fn causality_only_adds_opponent_to_proponent_links() {
    for (name, f) in fixtures::all_strategy_files() {
        let g = f.strategy.game();
        for (a, b) in f.strategy.added_causality().unwrap() {
            assert_eq!((g.polarity(a), g.polarity(b)), (Polarity::Opponent, Polarity::Proponent), "{name}");
        }
    }
}

#[test]
fn sigma_answers_right_only_after_both_questions() {
    let s = fixtures::sigma();
    let g = s.game();
    assert!(s.contains(&addrs(g, &["L.q", "R.q", "R.false"])));
    assert!(!s.contains(&addrs(g, &["R.q", "R.false"])));
    assert_eq!(s.plays().len(), 16);
}

#[test]
fn copycat_is_ingenuous_and_receptive() {
    for g in [fixtures::boolean_game(), fixtures::bb_game()] {
        let cc = copycat(&g).unwrap();
        assert!(cc.check_ingenuous().ingenuous());
        assert!(cc.is_receptive().holds);
        assert!(cc.satisfies_play_characterization());
    }
}

#[test]
fn copycat_on_the_boolean_game() {
    let cc = copycat(&fixtures::boolean_game()).unwrap();
    let g = cc.game();
    let plays: BTreeSet<String> = cc.plays().iter().map(|p| g.show_play(p)).collect();
    let expected: BTreeSet<String> = [
        "ε",
        "R.q",
        "R.q·L.q",
        "R.q·L.q·L.true",
        "R.q·L.q·L.true·R.true",
        "R.q·L.q·L.false",
        "R.q·L.q·L.false·R.false",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    assert_eq!(plays, expected);
}

#[test]
fn empty_strategy_holds_only_the_empty_play() {
    let s = Strategy::empty("none", fixtures::boolean_game().into());
    assert_eq!(s.plays().len(), 1);
    assert!(s.check_ingenuous().ingenuous());
    assert!(!s.is_receptive().holds);
}

#[test]
fn induced_events_present_the_same_plays() {
    for (name, f) in fixtures::all_strategy_files() {
        let ev = f.strategy.induced_events().unwrap();
        let back = Strategy::from_presentation("back", f.strategy.game_arc().clone(), ev.presentation()).unwrap();
        assert!(back.same_plays(&f.strategy), "{name}");
    }
}
