use std::collections::BTreeSet;

use agw_core::syntax::{parse_event_structure, print_event_structure};
use agw_core::{EventStructure, Game, MoveId, Path, Polarity};
use proptest::prelude::*;

/// Up to seven polarized events; causes only go from lower to higher index,
/// so the order is acyclic by construction.
fn event_structure() -> impl Strategy<Value = EventStructure> {
    (1usize..=7)
        .prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            (
                Just(n),
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec(prop::bool::weighted(0.3), pairs),
                prop::collection::vec(prop::bool::weighted(0.15), pairs),
            )
        })
        .prop_filter_map("conflict must stay irreflexive", |(n, pols, cause, conflict)| {
            let mut causes = Vec::new();
            let mut conflicts = Vec::new();
            let mut k = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if cause[k] {
                        causes.push((a, b));
                    } else if conflict[k] {
                        conflicts.push((a, b));
                    }
                    k += 1;
                }
            }
            let events = (0..n)
                .map(|i| (format!("e{i}"), Some(if pols[i] { Polarity::Proponent } else { Polarity::Opponent })))
                .collect();
            EventStructure::new(events, &causes, &conflicts).ok()
        })
}

fn play_moves(game: &Game, edges: &[usize]) -> Vec<MoveId> {
    edges.iter().map(|&e| game.edge_move(e)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn event_games_satisfy_the_structural_checks(es in event_structure()) {
        let g = es.game_of().unwrap();
        let r = g.graph().structural_report(g.root());
        prop_assert!(r.passed(), "{:?}", r);
    }

    #[test]
    fn homotopy_classes_are_linearizations(es in event_structure(), pick in any::<prop::sample::Index>()) {
        let g = es.game_of().unwrap();
        let plays: Vec<Vec<MoveId>> = g.plays().into_iter().filter(|p| p.len() <= 6).collect();
        let play = pick.get(&plays);
        let path = g.path_of(play).unwrap();
        let class: BTreeSet<Vec<MoveId>> =
            g.graph().homotopy_class(&path).iter().map(|edges| play_moves(&g, edges)).collect();
        let order = g.graph().path_order(&path).unwrap();
        let lins: BTreeSet<Vec<MoveId>> =
            order.linearizations().iter().map(|l| l.iter().map(|&i| play[i]).collect()).collect();
        prop_assert_eq!(class, lins);
    }

    #[test]
    fn homotopy_is_equality_of_targets(es in event_structure()) {
        let g = es.game_of().unwrap();
        let plays: Vec<Vec<MoveId>> = g.plays().into_iter().filter(|p| p.len() <= 4).take(40).collect();
        for s in &plays {
            let ps = g.path_of(s).unwrap();
            let class = g.graph().homotopy_class(&ps);
            for t in &plays {
                let pt = g.path_of(t).unwrap();
                let same = g.play_target(s) == g.play_target(t);
                prop_assert_eq!(class.contains(&pt.edges), same);
                if same {
                    prop_assert!(g.graph().homotopic(&ps, &pt).unwrap());
                }
            }
        }
    }

    #[test]
    fn event_structure_text_round_trips(es in event_structure()) {
        let text = print_event_structure(&es);
        let back = parse_event_structure(&text, "generated.es").unwrap();
        prop_assert_eq!(&back, &es);
        prop_assert_eq!(print_event_structure(&back), text);
    }

    #[test]
    fn configurations_are_the_game_positions(es in event_structure()) {
        let g = es.game_of().unwrap();
        let mut positions = g.positions().to_vec();
        positions.sort_by_key(|p| (p.len(), p.0));
        prop_assert_eq!(positions, es.configurations());
    }

    #[test]
    fn paths_start_at_the_root(es in event_structure()) {
        let g = es.game_of().unwrap();
        for p in g.plays().iter().take(20) {
            let path = g.path_of(p).unwrap();
            prop_assert_eq!(path.start, g.root());
            prop_assert_eq!(g.play_of(&Path { start: path.start, edges: path.edges.clone() }), p.clone());
        }
    }
}
