//! Strategies as prefix-closed sets of plays.
//!
//! A strategy is usually presented by an event structure whose events are
//! labelled by moves of the game; several events may carry the same move.
//! Its plays are the label sequences of the linearizations of
//! configurations that are plays of the game.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::asyncgraph::UnionFind;
use crate::error::{Error, Result};
use crate::events::EventStructure;
use crate::games::{self, Game, MoveId, Polarity, Position, Side};
use crate::order::MovePartialOrder;

/// Event structure with one game move per event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub events: EventStructure,
    pub labels: Vec<MoveId>,
}

#[derive(Clone, Debug)]
pub struct Strategy {
    name: String,
    game: Arc<Game>,
    presentation: Option<Presentation>,
    plays: BTreeSet<Vec<MoveId>>,
    children: HashMap<Vec<MoveId>, Vec<MoveId>>,
    reached: BTreeSet<Position>,
    edges: BTreeSet<(Position, MoveId)>,
}

/// A counterexample attached to a failed check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub position: String,
    pub plays: Vec<String>,
    pub moves: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Check {
    fn pass() -> Self {
        Check { holds: true, witness: None }
    }

    fn fail(position: String, plays: Vec<String>, moves: Vec<String>) -> Self {
        Check { holds: false, witness: Some(Witness { position, plays, moves }) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IngenuityReport {
    pub positional: Check,
    pub forward_preservation: Check,
    pub backward_preservation: Check,
    pub deterministic: Check,
    pub courteous: Check,
}

impl IngenuityReport {
    pub fn ingenuous(&self) -> bool {
        [
            &self.positional,
            &self.forward_preservation,
            &self.backward_preservation,
            &self.deterministic,
            &self.courteous,
        ]
        .iter()
        .all(|c| c.holds)
    }
}

/// Events read off the strategy subgraph.
#[derive(Clone, Debug)]
pub struct InducedEvents {
    pub structure: EventStructure,
    pub labels: Vec<MoveId>,
    /// Event of each edge of [`Strategy::subgame`], indexed by edge id.
    pub edge_event: Vec<usize>,
}

impl InducedEvents {
    pub fn presentation(&self) -> Presentation {
        Presentation { events: self.structure.clone(), labels: self.labels.clone() }
    }

    /// Events labelled by the given move.
    pub fn events_labelled(&self, m: MoveId) -> Vec<usize> {
        (0..self.labels.len()).filter(|&e| self.labels[e] == m).collect()
    }
}

impl Strategy {
    /// The strategy generated by a labelled event structure.
    pub fn from_presentation(name: &str, game: Arc<Game>, presentation: Presentation) -> Result<Strategy> {
        let Presentation { events, labels } = &presentation;
        if labels.len() != events.len() {
            return Err(Error::InvalidStrategy("one label per event required".into()));
        }
        for (e, &m) in labels.iter().enumerate() {
            if m >= game.move_count() {
                return Err(Error::UnknownMove(events.events()[e].name.clone()));
            }
        }
        let mut plays = BTreeSet::new();
        let mut seen = BTreeSet::new();
        let mut stack = vec![(Position::EMPTY, Position::EMPTY, Vec::new())];
        while let Some((config, pos, play)) = stack.pop() {
            if !seen.insert((config, play.clone())) {
                continue;
            }
            for e in events.enabled(config) {
                let m = labels[e];
                if !pos.contains(m) && game.has_edge(pos, m) {
                    let mut next = play.clone();
                    next.push(m);
                    stack.push((config.with(e), pos.with(m), next));
                }
            }
            plays.insert(play);
        }
        let mut s = Strategy::assemble(name, game, plays);
        s.presentation = Some(presentation);
        Ok(s)
    }

    /// Convenience constructor: events as `(name, move address)`, causes as
    /// `(a, b)` meaning `a ⪯ b`, and unordered conflicts.
    pub fn from_events(
        name: &str,
        game: Arc<Game>,
        events: &[(&str, &str)],
        causes: &[(usize, usize)],
        conflicts: &[(usize, usize)],
    ) -> Result<Strategy> {
        let mut labels = Vec::new();
        let mut evs = Vec::new();
        for &(n, addr) in events {
            let m = game.move_by_address(addr).ok_or_else(|| Error::UnknownMove(addr.to_string()))?;
            labels.push(m);
            evs.push((n.to_string(), Some(game.polarity(m))));
        }
        let es = EventStructure::new(evs, causes, conflicts)?;
        Strategy::from_presentation(name, game, Presentation { events: es, labels })
    }

    /// The prefix closure of a set of plays.
    pub fn from_plays(name: &str, game: Arc<Game>, plays: impl IntoIterator<Item = Vec<MoveId>>) -> Result<Strategy> {
        let mut all = BTreeSet::new();
        all.insert(Vec::new());
        for p in plays {
            if !game.is_play(&p) {
                let shown =
                    p.iter().map(|&m| game.moves().get(m).map_or("?", |mv| mv.address.as_str())).collect::<Vec<_>>();
                return Err(Error::InvalidStrategy(format!("not a play of the game: {}", shown.join("·"))));
            }
            for k in 0..p.len() {
                all.insert(p[..k].to_vec());
            }
            all.insert(p);
        }
        Ok(Strategy::assemble(name, game, all))
    }

    /// Only the empty play.
    pub fn empty(name: &str, game: Arc<Game>) -> Strategy {
        Strategy::assemble(name, game, BTreeSet::from([Vec::new()]))
    }

    fn assemble(name: &str, game: Arc<Game>, plays: BTreeSet<Vec<MoveId>>) -> Strategy {
        let mut children: HashMap<Vec<MoveId>, Vec<MoveId>> = HashMap::new();
        let mut reached = BTreeSet::new();
        let mut edges = BTreeSet::new();
        for p in &plays {
            children.entry(p.clone()).or_default();
            let target = game.play_target(p).expect("plays of the game");
            reached.insert(target);
            if let Some((&m, prefix)) = p.split_last() {
                children.entry(prefix.to_vec()).or_default().push(m);
                edges.insert((target.without(m), m));
            }
        }
        for c in children.values_mut() {
            c.sort_unstable();
        }
        Strategy { name: name.to_string(), game, presentation: None, plays, children, reached, edges }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: &str) -> Strategy {
        self.name = name.to_string();
        self
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn game_arc(&self) -> &Arc<Game> {
        &self.game
    }

    pub fn presentation(&self) -> Option<&Presentation> {
        self.presentation.as_ref()
    }

    pub fn plays(&self) -> &BTreeSet<Vec<MoveId>> {
        &self.plays
    }

    pub fn contains(&self, play: &[MoveId]) -> bool {
        self.plays.contains(play)
    }

    /// Moves extending `play` inside the strategy, sorted.
    pub fn next_moves(&self, play: &[MoveId]) -> &[MoveId] {
        self.children.get(play).map_or(&[], |v| v.as_slice())
    }

    pub fn reached(&self) -> &BTreeSet<Position> {
        &self.reached
    }

    pub fn reaches(&self, x: Position) -> bool {
        self.reached.contains(&x)
    }

    /// Edges of the strategy subgraph as `(source position, move)`.
    pub fn edges(&self) -> &BTreeSet<(Position, MoveId)> {
        &self.edges
    }

    pub fn has_edge(&self, x: Position, m: MoveId) -> bool {
        self.edges.contains(&(x, m))
    }

    pub fn plays_reaching(&self, x: Position) -> Vec<&Vec<MoveId>> {
        self.plays.iter().filter(|p| p.len() == x.len() && self.game.play_target(p) == Some(x)).collect()
    }

    /// Maximal plays (no extension in the strategy).
    pub fn maximal_plays(&self) -> Vec<&Vec<MoveId>> {
        self.plays.iter().filter(|p| self.next_moves(p).is_empty()).collect()
    }

    /// The subgraph of positions and edges traversed, with every ambient
    /// tile whose four edges it contains.
    pub fn subgame(&self) -> Game {
        self.game.restrict(&|x, m| self.has_edge(x, m)).expect("subgraph of a valid game")
    }

    fn show(&self, play: &[MoveId]) -> String {
        self.game.show_play(play)
    }

    fn addr(&self, m: MoveId) -> String {
        self.game.address(m).to_string()
    }

    fn pos(&self, x: Position) -> String {
        self.game.show_position(x)
    }

    /// Ambient tiles as `(x, m, n)`: both orders of `m`, `n` from `x` exist.
    fn ambient_squares(&self) -> Vec<(Position, MoveId, MoveId)> {
        let g = &self.game;
        let mut out = Vec::new();
        for t in g.graph().tiles() {
            let x = g.position(g.graph().edge(t.left.0).src);
            out.push((x, g.edge_move(t.left.0), g.edge_move(t.right.0)));
        }
        out
    }

    fn square_inside(&self, x: Position, m: MoveId, n: MoveId) -> bool {
        self.has_edge(x, m) && self.has_edge(x, n) && self.has_edge(x.with(m), n) && self.has_edge(x.with(n), m)
    }

    pub fn check_ingenuous(&self) -> IngenuityReport {
        IngenuityReport {
            positional: self.check_positional(),
            forward_preservation: self.check_forward(),
            backward_preservation: self.check_backward(),
            deterministic: self.check_deterministic(),
            courteous: self.check_courteous(),
        }
    }

    /// `s, t : ∗ ↠ x` and `s·u ∈ σ`, `t ∈ σ` give `t·u ∈ σ`. By induction
    /// on `u` it suffices that plays with a common target have the same
    /// one-move extensions.
    pub fn check_positional(&self) -> Check {
        let mut by_target: BTreeMap<Position, &Vec<MoveId>> = BTreeMap::new();
        for p in &self.plays {
            let x = self.game.play_target(p).expect("plays of the game");
            match by_target.get(&x) {
                None => {
                    by_target.insert(x, p);
                }
                Some(&first) => {
                    let (a, b) = (self.next_moves(first), self.next_moves(p));
                    if a != b {
                        let (s, t, m) = match a.iter().find(|m| !b.contains(m)) {
                            Some(&m) => (first, p, m),
                            None => (p, first, *b.iter().find(|m| !a.contains(m)).expect("sets differ")),
                        };
                        return Check::fail(self.pos(x), vec![self.show(s), self.show(t)], vec![self.addr(m)]);
                    }
                }
            }
        }
        Check::pass()
    }

    pub fn check_forward(&self) -> Check {
        for (x, m, n) in self.ambient_squares() {
            if self.has_edge(x, m) && self.has_edge(x, n) && !self.square_inside(x, m, n) {
                return Check::fail(self.pos(x), vec![], vec![self.addr(m), self.addr(n)]);
            }
        }
        Check::pass()
    }

    pub fn check_backward(&self) -> Check {
        for (x, m, n) in self.ambient_squares() {
            if self.has_edge(x.with(m), n) && self.has_edge(x.with(n), m) && !self.square_inside(x, m, n) {
                return Check::fail(self.pos(x), vec![], vec![self.addr(m), self.addr(n)]);
            }
        }
        Check::pass()
    }

    /// Coinitial edges `m`, `n` with `m` Proponent close into a tile of the
    /// strategy subgraph.
    pub fn check_deterministic(&self) -> Check {
        for &x in &self.reached {
            let out: Vec<MoveId> = self.edges.range((x, 0)..=(x, usize::MAX)).map(|&(_, m)| m).collect();
            for &m in &out {
                if self.game.polarity(m) != Polarity::Proponent {
                    continue;
                }
                for &n in &out {
                    if n != m && !self.square_inside(x, m, n) {
                        return Check::fail(self.pos(x), vec![], vec![self.addr(m), self.addr(n)]);
                    }
                }
            }
        }
        Check::pass()
    }

    /// An ambient tile with `m` (Proponent) then `p` in the strategy lies in
    /// the strategy. Both halves of each tile are tried as `(m, p)`.
    pub fn check_courteous(&self) -> Check {
        for (x, a, b) in self.ambient_squares() {
            for (m, p) in [(a, b), (b, a)] {
                if self.game.polarity(m) == Polarity::Proponent
                    && self.has_edge(x, m)
                    && self.has_edge(x.with(m), p)
                    && !self.square_inside(x, m, p)
                {
                    return Check::fail(self.pos(x), vec![], vec![self.addr(m), self.addr(p)]);
                }
            }
        }
        Check::pass()
    }

    /// Every Opponent move available after a play of the strategy extends it.
    pub fn is_receptive(&self) -> Check {
        for p in &self.plays {
            let x = self.game.play_target(p).expect("plays of the game");
            for m in self.game.enabled(x) {
                if self.game.polarity(m) == Polarity::Opponent && !self.next_moves(p).contains(&m) {
                    return Check::fail(self.pos(x), vec![self.show(p)], vec![self.addr(m)]);
                }
            }
        }
        Check::pass()
    }

    /// Position-free formulation on plays: positional, and for each tile
    /// `(m,p) ~ (n,q)` from the target of `s`, `s·m, s·n ∈ σ` gives
    /// `s·m·p, s·n·q ∈ σ`, and `s·m·p ∈ σ`, `t·n·q ∈ σ` with `t ∼ s` cofinal
    /// gives `s·n ∈ σ`.
    pub fn satisfies_play_characterization(&self) -> bool {
        let g = &self.game;
        let tiles = self.ambient_squares();
        let mut from: HashMap<Position, Vec<(MoveId, MoveId)>> = HashMap::new();
        for &(x, m, n) in &tiles {
            from.entry(x).or_default().push((m, n));
        }
        let mut by_target: HashMap<Position, Vec<&Vec<MoveId>>> = HashMap::new();
        for p in &self.plays {
            by_target.entry(g.play_target(p).expect("plays of the game")).or_default().push(p);
        }
        let ext = |s: &[MoveId], m: MoveId| {
            let mut v = s.to_vec();
            v.push(m);
            v
        };
        for group in by_target.values() {
            let kids = self.next_moves(group[0]);
            if group.iter().any(|s| self.next_moves(s) != kids) {
                return false;
            }
        }
        for (x, group) in &by_target {
            let Some(squares) = from.get(x) else { continue };
            for s in group {
                for &(m, n) in squares {
                    let (sm, sn) = (ext(s, m), ext(s, n));
                    if self.contains(&sm)
                        && self.contains(&sn)
                        && !(self.contains(&ext(&sm, n)) && self.contains(&ext(&sn, m)))
                    {
                        return false;
                    }
                    // backward: both two-step routes to x ∪ {m, n} are taken by
                    // some play, then both first steps are taken from s
                    let route = |a: MoveId, b: MoveId| {
                        by_target.get(&x.with(a)).is_some_and(|ss| ss.iter().any(|t| self.contains(&ext(t, b))))
                    };
                    if route(m, n) && route(n, m) && !(self.contains(&sm) && self.contains(&sn)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The order on the moves of `x` whose linearizations are exactly the
    /// plays of the strategy reaching `x`.
    pub fn causality_order(&self, x: Position) -> Result<MovePartialOrder> {
        if !self.reaches(x) {
            return Err(Error::Precondition(format!("position {} not reached by {}", self.pos(x), self.name)));
        }
        let moves: Vec<MoveId> = x.iter().collect();
        let index: HashMap<MoveId, usize> = moves.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let plays = self.plays_reaching(x);
        let n = moves.len();
        let mut before = vec![vec![true; n]; n];
        for p in &plays {
            let rank: Vec<usize> = {
                let mut r = vec![0; n];
                for (k, m) in p.iter().enumerate() {
                    r[index[m]] = k;
                }
                r
            };
            for a in 0..n {
                for b in 0..n {
                    if rank[a] >= rank[b] {
                        before[a][b] = false;
                    }
                }
            }
        }
        let mut pairs = Vec::new();
        for (a, row) in before.iter().enumerate() {
            for (b, &yes) in row.iter().enumerate() {
                if yes {
                    pairs.push((a, b));
                }
            }
        }
        let labels = moves.iter().map(|&m| self.addr(m)).collect();
        let order = MovePartialOrder::from_pairs(labels, &pairs)?;
        if order.count_linearizations() != plays.len() as u64 {
            return Err(Error::NoPartialOrder(format!(
                "{} plays of {} reach {} but the common order has {} linearizations",
                plays.len(),
                self.name,
                self.pos(x),
                order.count_linearizations()
            )));
        }
        Ok(order)
    }

    /// Causality orders at every maximal reached position.
    pub fn maximal_positions(&self) -> Vec<Position> {
        self.reached.iter().copied().filter(|&x| self.edges.range((x, 0)..=(x, usize::MAX)).next().is_none()).collect()
    }

    /// Edges of the subgraph identified across its tiles, with the order
    /// and conflict they inherit from the reached positions.
    pub fn induced_events(&self) -> Result<InducedEvents> {
        let sub = self.subgame();
        let graph = sub.graph();
        let mut uf = UnionFind::new(graph.edges().len());
        for t in graph.tiles() {
            uf.union(t.left.0, t.right.1);
            uf.union(t.right.0, t.left.1);
        }
        let mut class_of = vec![usize::MAX; graph.edges().len()];
        let mut reps: Vec<usize> = Vec::new();
        for (e, slot) in class_of.iter_mut().enumerate() {
            let r = uf.find(e);
            if let Some(k) = reps.iter().position(|&x| x == r) {
                *slot = k;
            } else {
                *slot = reps.len();
                reps.push(r);
            }
        }
        let k = reps.len();
        if k > 64 {
            return Err(Error::TooLarge(k));
        }
        let order = graph.topological_order().expect("acyclic");
        let mut held = vec![None::<u64>; graph.vertex_count()];
        held[sub.root()] = Some(0);
        for v in order {
            let Some(h) = held[v] else { continue };
            for &e in graph.out_edges(v) {
                let d = graph.edge(e).dst;
                if held[d].is_none() {
                    held[d] = Some(h | 1 << class_of[e]);
                }
            }
        }
        let sets: Vec<u64> = held.into_iter().flatten().collect();
        let labels: Vec<MoveId> = reps.iter().map(|&r| sub.edge_move(r)).collect();
        let mut causes = Vec::new();
        let mut conflicts = Vec::new();
        for b in 0..k {
            for a in 0..k {
                if a == b {
                    continue;
                }
                let holding_b = sets.iter().filter(|s| *s & (1 << b) != 0);
                if holding_b.clone().all(|s| s & (1 << a) != 0) {
                    causes.push((a, b));
                }
                if a < b && !sets.iter().any(|s| s & (1 << a) != 0 && s & (1 << b) != 0) {
                    conflicts.push((a, b));
                }
            }
        }
        let mut count: HashMap<MoveId, usize> = HashMap::new();
        for &m in &labels {
            *count.entry(m).or_default() += 1;
        }
        let mut seen: HashMap<MoveId, usize> = HashMap::new();
        let events = labels
            .iter()
            .map(|&m| {
                let addr = sub.address(m);
                let name = if count[&m] > 1 {
                    let i = seen.entry(m).or_default();
                    *i += 1;
                    format!("{addr}/{i}")
                } else {
                    addr.to_string()
                };
                (name, Some(sub.polarity(m)))
            })
            .collect();
        let structure = EventStructure::new(events, &causes, &conflicts)?;
        Ok(InducedEvents { structure, labels, edge_event: class_of })
    }

    /// Pairs `m ⪯ n` at reached maximal positions that the game does not
    /// already impose.
    pub fn added_causality(&self) -> Result<Vec<(MoveId, MoveId)>> {
        let ambient = self.game.event_structure()?;
        let mut out = BTreeSet::new();
        for x in self.maximal_positions() {
            let order = self.causality_order(x)?;
            let moves: Vec<MoveId> = x.iter().collect();
            for (a, b) in order.covers() {
                let (m, n) = (moves[a], moves[b]);
                if !ambient.leq(m, n) {
                    out.insert((m, n));
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Same set of plays on games with the same moves.
    pub fn same_plays(&self, other: &Strategy) -> bool {
        let key = |s: &Strategy| -> BTreeSet<Vec<String>> {
            s.plays.iter().map(|p| p.iter().map(|&m| s.addr(m)).collect()).collect()
        };
        key(self) == key(other)
    }
}

/// The copycat strategy on `A ⊸ A`: each Opponent move on one side is
/// answered by the same move on the other side.
pub fn copycat(a: &Game) -> Result<Strategy> {
    let game = Arc::new(games::linear_implication(a, a)?);
    let es = a.event_structure()?;
    let n = es.len();
    let mut events = Vec::with_capacity(2 * n);
    let mut labels = Vec::with_capacity(2 * n);
    for side in [Side::Left, Side::Right] {
        for e in es.events() {
            let addr = format!("{}{}", side.prefix(), e.name);
            let m = game.move_by_address(&addr).ok_or_else(|| Error::UnknownMove(addr.clone()))?;
            labels.push(m);
            events.push((addr, Some(game.polarity(m))));
        }
    }
    let mut causes = Vec::new();
    let mut conflicts = Vec::new();
    for b in 0..n {
        for a in 0..n {
            if a != b && es.leq(a, b) {
                causes.push((a, b));
                causes.push((n + a, n + b));
            }
            if a < b && es.in_conflict(a, b) {
                conflicts.push((a, b));
                conflicts.push((n + a, n + b));
            }
        }
        match a.polarity(b) {
            Polarity::Opponent => causes.push((n + b, b)),
            Polarity::Proponent => causes.push((b, n + b)),
        }
    }
    let structure = EventStructure::new(events, &causes, &conflicts)?;
    Strategy::from_presentation("copycat", game, Presentation { events: structure, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn nondeterministic_boolean_answer() {
        let b = Arc::new(fixtures::boolean_game());
        let plays =
            vec![b.play_from_addresses(&["q", "true"]).unwrap(), b.play_from_addresses(&["q", "false"]).unwrap()];
        let s = Strategy::from_plays("both", b, plays).unwrap();
        let r = s.check_ingenuous();
        assert!(!r.deterministic.holds);
        let w = r.deterministic.witness.unwrap();
        let mut moves = w.moves.clone();
        moves.sort();
        assert_eq!(moves, ["false", "true"]);
    }

    #[test]
    fn silent_strategy_refuses_the_question() {
        let s = Strategy::empty("silent", Arc::new(fixtures::boolean_game()));
        let r = s.is_receptive();
        assert!(!r.holds);
        let w = r.witness.unwrap();
        assert_eq!(w.plays, ["ε"]);
        assert_eq!(w.moves, ["q"]);
        assert!(s.check_ingenuous().ingenuous());
    }

    #[test]
    fn single_play_gives_one_event_per_edge() {
        let b = Arc::new(fixtures::boolean_game());
        let s = Strategy::from_plays("yes", b.clone(), vec![b.play_from_addresses(&["q", "true"]).unwrap()]).unwrap();
        let ev = s.induced_events().unwrap();
        assert_eq!(ev.structure.len(), 2);
        assert!(ev.structure.leq(0, 1));
    }

    #[test]
    fn causality_order_at_root_is_empty() {
        let s = fixtures::sigma();
        assert!(s.causality_order(Position::EMPTY).unwrap().is_empty());
    }

    #[test]
    fn from_plays_rejects_non_plays() {
        let b = Arc::new(fixtures::boolean_game());
        let t = b.move_by_address("true").unwrap();
        assert!(matches!(Strategy::from_plays("bad", b, vec![vec![t]]), Err(Error::InvalidStrategy(_))));
    }

    #[test]
    fn copycat_on_booleans_is_ingenuous_and_receptive() {
        let cc = copycat(&fixtures::boolean_game()).unwrap();
        assert!(cc.check_ingenuous().ingenuous());
        assert!(cc.is_receptive().holds);
        let g = cc.game();
        let play = g.play_from_addresses(&["R.q", "L.q", "L.true", "R.true"]).unwrap();
        assert!(cc.contains(&play));
        let bad = g.play_from_addresses(&["R.q", "L.q", "L.true", "R.false"]).unwrap();
        assert!(!g.is_play(&bad) || !cc.contains(&bad));
    }
}
