//! Finite event structures with binary hereditary conflict.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::games::{Game, Polarity, Position};
use crate::order::MovePartialOrder;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event {
    pub name: String,
    pub polarity: Option<Polarity>,
}

/// Events with a causality partial order and a conflict relation.
///
/// Causality is stored transitively closed; conflict is closed under
/// heredity (`e # e'` and `e' ⪯ e''` give `e # e''`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventStructure {
    events: Vec<Event>,
    causes: Vec<u64>,
    conflict: Vec<u64>,
}

/// A downward-closed, conflict-free set of events.
pub type Configuration = Position;

impl EventStructure {
    /// `causes` are pairs `(a, b)` meaning `a ⪯ b`; `conflicts` are unordered.
    pub fn new(
        events: Vec<(String, Option<Polarity>)>,
        causes: &[(usize, usize)],
        conflicts: &[(usize, usize)],
    ) -> Result<Self> {
        let n = events.len();
        if n > 64 {
            return Err(Error::TooLarge(n));
        }
        let names: Vec<String> = events.iter().map(|(n, _)| n.clone()).collect();
        let order = MovePartialOrder::from_pairs(names, causes)?;
        let causes: Vec<u64> = (0..n).map(|i| order.predecessors(i)).collect();
        let mut conflict = vec![0u64; n];
        for &(a, b) in conflicts {
            if a == b {
                return Err(Error::HeredityViolation(events[a].0.clone()));
            }
            conflict[a] |= 1 << b;
            conflict[b] |= 1 << a;
        }
        // e # e' and e' ⪯ e'' implies e # e''
        loop {
            let mut changed = false;
            for e2 in 0..n {
                let mut inherited = 0u64;
                let mut below = causes[e2];
                while below != 0 {
                    let e1 = below.trailing_zeros() as usize;
                    below &= below - 1;
                    inherited |= conflict[e1];
                }
                let new = conflict[e2] | inherited;
                if new != conflict[e2] {
                    conflict[e2] = new;
                    let mut rest = inherited;
                    while rest != 0 {
                        let e = rest.trailing_zeros() as usize;
                        rest &= rest - 1;
                        conflict[e] |= 1 << e2;
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for e in 0..n {
            if conflict[e] & ((1 << e) | causes[e]) != 0 {
                return Err(Error::HeredityViolation(events[e].0.clone()));
            }
        }
        let events = events.into_iter().map(|(name, polarity)| Event { name, polarity }).collect();
        Ok(EventStructure { events, causes, conflict })
    }

    pub fn empty() -> Self {
        EventStructure { events: Vec::new(), causes: Vec::new(), conflict: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event_by_name(&self, name: &str) -> Option<usize> {
        self.events.iter().position(|e| e.name == name)
    }

    /// Strict causal history of `e`.
    pub fn causes(&self, e: usize) -> Position {
        Position(self.causes[e])
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.causes[b] & (1 << a) != 0
    }

    pub fn in_conflict(&self, a: usize, b: usize) -> bool {
        self.conflict[a] & (1 << b) != 0
    }

    pub fn conflicts_of(&self, e: usize) -> Position {
        Position(self.conflict[e])
    }

    /// Causality restricted to the events of `x`, as a labelled order.
    pub fn order_on(&self, x: Position) -> MovePartialOrder {
        let ids: Vec<usize> = x.iter().collect();
        let labels = ids.iter().map(|&e| self.events[e].name.clone()).collect();
        let mut pairs = Vec::new();
        for (i, &a) in ids.iter().enumerate() {
            for (j, &b) in ids.iter().enumerate() {
                if a != b && self.leq(a, b) {
                    pairs.push((i, j));
                }
            }
        }
        MovePartialOrder::from_pairs(labels, &pairs).expect("sub-order of a partial order")
    }

    pub fn is_configuration(&self, x: Position) -> bool {
        x.iter().all(|e| self.causes[e] & !x.0 == 0 && self.conflict[e] & x.0 == 0)
    }

    /// Events that can be added to `x`.
    pub fn enabled(&self, x: Position) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&e| !x.contains(e) && self.causes[e] & !x.0 == 0 && self.conflict[e] & x.0 == 0)
    }

    /// Every configuration, ordered by size then bitmask.
    pub fn configurations(&self) -> Vec<Configuration> {
        let mut seen = BTreeSet::from([Position::EMPTY]);
        let mut stack = vec![Position::EMPTY];
        while let Some(x) = stack.pop() {
            for e in self.enabled(x) {
                let y = x.with(e);
                if seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        let mut v: Vec<Configuration> = seen.into_iter().collect();
        v.sort_by_key(|p| (p.len(), p.0));
        v
    }

    /// Side-by-side union; names are prefixed `L.` and `R.`.
    pub fn disjoint_union(a: &EventStructure, b: &EventStructure) -> EventStructure {
        let na = a.len();
        let mut events: Vec<Event> =
            a.events.iter().map(|e| Event { name: format!("L.{}", e.name), polarity: e.polarity }).collect();
        events.extend(b.events.iter().map(|e| Event { name: format!("R.{}", e.name), polarity: e.polarity }));
        let mut causes = a.causes.clone();
        causes.extend(b.causes.iter().map(|c| c << na));
        let mut conflict = a.conflict.clone();
        conflict.extend(b.conflict.iter().map(|c| c << na));
        EventStructure { events, causes, conflict }
    }

    /// The asynchronous game of configurations, rooted at `∅`.
    pub fn game_of(&self) -> Result<Game> {
        let mut moves = Vec::with_capacity(self.len());
        for e in &self.events {
            let polarity =
                e.polarity.ok_or_else(|| Error::Precondition(format!("event `{}` has no polarity", e.name)))?;
            moves.push(crate::games::Move { address: e.name.clone(), polarity });
        }
        let cands: BTreeSet<Position> = self.configurations().into_iter().collect();
        Game::build(moves, Vec::new(), &cands, &|_, _| true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn named(n: &[&str]) -> Vec<(String, Option<Polarity>)> {
        n.iter().map(|s| (s.to_string(), Some(Polarity::Opponent))).collect()
    }

    #[test]
    fn boolean_configurations() {
        let es = fixtures::boolean_events();
        let names: Vec<Vec<String>> = es
            .configurations()
            .into_iter()
            .map(|c| {
                let mut v: Vec<String> = c.iter().map(|e| es.events()[e].name.clone()).collect();
                v.sort();
                v
            })
            .collect();
        assert_eq!(
            names,
            vec![vec![], vec!["q".to_string()], vec!["q".into(), "true".into()], vec!["false".into(), "q".into()]]
        );
    }

    #[test]
    fn empty_structure_has_only_the_empty_configuration() {
        assert_eq!(EventStructure::empty().configurations(), vec![Position::EMPTY]);
        let g = EventStructure::empty().game_of().unwrap();
        assert_eq!(g.positions().len(), 1);
    }

    #[test]
    fn conflict_forbids_union() {
        let es = EventStructure::new(named(&["a", "b"]), &[], &[(0, 1)]).unwrap();
        assert_eq!(es.configurations(), vec![Position(0), Position(1), Position(2)]);
    }

    #[test]
    fn conflict_is_inherited_along_causality() {
        let es = EventStructure::new(named(&["a", "b", "c"]), &[(1, 2)], &[(0, 1)]).unwrap();
        assert!(es.in_conflict(0, 2));
        assert!(es.in_conflict(2, 0));
    }

    #[test]
    fn self_conflict_through_history_is_rejected() {
        let err = EventStructure::new(named(&["a", "b"]), &[(0, 1)], &[(0, 1)]).unwrap_err();
        assert!(matches!(err, Error::HeredityViolation(_)));
        let err = EventStructure::new(named(&["a", "b"]), &[(0, 1), (1, 0)], &[]).unwrap_err();
        assert!(matches!(err, Error::CausalityCycle(_)));
    }

    #[test]
    fn boolean_game_is_the_decision_tree() {
        let g = fixtures::boolean_events().game_of().unwrap();
        assert_eq!(g.positions().len(), 4);
        assert_eq!(g.graph().edges().len(), 3);
        assert_eq!(g.graph().tiles().len(), 0);
    }

    #[test]
    fn union_generates_the_tensor_product() {
        let b = fixtures::boolean_events();
        let u = EventStructure::disjoint_union(&b, &b).game_of().unwrap();
        let bb = fixtures::bb_game();
        let (mut s, mut t) = (u.shape(), bb.shape());
        assert_eq!(s.positions, t.positions);
        assert_eq!(s.edges, t.edges);
        // labels differ: the union carries no product node
        s.tiles = s.tiles.into_iter().map(|(p, m, _)| (p, m, None)).collect();
        t.tiles = t.tiles.into_iter().map(|(p, m, _)| (p, m, None)).collect();
        assert_eq!(s.tiles, t.tiles);
    }
}
