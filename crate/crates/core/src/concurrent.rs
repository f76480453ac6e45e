//! Closure operators on the position lattice with an adjoined top.
//!
//! Elements of a [`PositionLattice`] are indices: `0..n` are the positions
//! of the game in its canonical order and `n` is `⊤`.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::games::{Game, MoveId, Polarity, Position};
use crate::strategies::Strategy;

pub type Elem = usize;

#[derive(Debug)]
pub struct PositionLattice {
    game: Arc<Game>,
    leq: Vec<Vec<bool>>,
    leq_p: Vec<Vec<bool>>,
    meet: Vec<Vec<Elem>>,
    join: Vec<Vec<Elem>>,
}

impl PositionLattice {
    /// Orders positions by reachability and adds `⊤` above them. Fails if
    /// some pair has no meet or no least upper bound.
    pub fn new(game: Arc<Game>) -> Result<PositionLattice> {
        let n = game.positions().len();
        let graph = game.graph();
        let reach = graph.reachability();
        let mut leq = vec![vec![false; n + 1]; n + 1];
        for a in 0..n {
            for b in 0..n {
                leq[a][b] = reach[a][b];
            }
            leq[a][n] = true;
        }
        leq[n][n] = true;
        let mut leq_p = vec![vec![false; n]; n];
        for (a, row) in leq_p.iter_mut().enumerate() {
            let mut queue = VecDeque::from([a]);
            row[a] = true;
            while let Some(v) = queue.pop_front() {
                for &e in graph.out_edges(v) {
                    let d = graph.edge(e).dst;
                    if game.polarity(game.edge_move(e)) == Polarity::Proponent && !row[d] {
                        row[d] = true;
                        queue.push_back(d);
                    }
                }
            }
        }
        let mut meet = vec![vec![n; n + 1]; n + 1];
        let mut join = vec![vec![n; n + 1]; n + 1];
        for a in 0..=n {
            for b in 0..=n {
                let lower: Vec<Elem> = (0..=n).filter(|&z| leq[z][a] && leq[z][b]).collect();
                meet[a][b] = *lower
                    .iter()
                    .find(|&&z| lower.iter().all(|&w| leq[w][z]))
                    .ok_or_else(|| Error::Precondition("positions without a meet".into()))?;
                let upper: Vec<Elem> = (0..=n).filter(|&z| leq[a][z] && leq[b][z]).collect();
                join[a][b] = *upper
                    .iter()
                    .find(|&&z| upper.iter().all(|&w| leq[z][w]))
                    .ok_or_else(|| Error::Precondition("positions without a least upper bound".into()))?;
            }
        }
        Ok(PositionLattice { game, leq, leq_p, meet, join })
    }

    pub fn game(&self) -> &Arc<Game> {
        &self.game
    }

    /// Number of elements, `⊤` included.
    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn top(&self) -> Elem {
        self.leq.len() - 1
    }

    /// `None` for `⊤`.
    pub fn position(&self, x: Elem) -> Option<Position> {
        (x != self.top()).then(|| self.game.positions()[x])
    }

    pub fn elem(&self, p: Position) -> Option<Elem> {
        self.game.vertex(p)
    }

    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        self.leq[a][b]
    }

    /// Reachable using Proponent moves only; `⊤` is related to itself only.
    pub fn leq_p(&self, a: Elem, b: Elem) -> bool {
        let t = self.top();
        match (a == t, b == t) {
            (false, false) => self.leq_p[a][b],
            (true, true) => true,
            _ => false,
        }
    }

    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        self.meet[a][b]
    }

    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        self.join[a][b]
    }

    pub fn show(&self, x: Elem) -> String {
        match self.position(x) {
            Some(p) => self.game.show_position(p),
            None => "⊤".into(),
        }
    }

    /// The least superset of `set` closed under binary meets, with `⊤`.
    pub fn meet_closure(&self, set: impl IntoIterator<Item = Elem>) -> BTreeSet<Elem> {
        let mut out: BTreeSet<Elem> = set.into_iter().collect();
        out.insert(self.top());
        loop {
            let items: Vec<Elem> = out.iter().copied().collect();
            let before = out.len();
            for &a in &items {
                for &b in &items {
                    out.insert(self.meet(a, b));
                }
            }
            if out.len() == before {
                return out;
            }
        }
    }

    pub fn is_meet_closed(&self, set: &BTreeSet<Elem>) -> bool {
        set.contains(&self.top()) && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.meet(a, b))))
    }
}

/// A self-map of a position lattice together with its fixpoints.
#[derive(Clone, Debug)]
pub struct ClosureOp {
    lattice: Arc<PositionLattice>,
    fixpoints: BTreeSet<Elem>,
    map: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawCheck {
    pub holds: bool,
    pub witness: Option<Vec<String>>,
}

impl LawCheck {
    fn from(witness: Option<Vec<String>>) -> Self {
        LawCheck { holds: witness.is_none(), witness }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub increasing: LawCheck,
    pub idempotent: LawCheck,
    pub monotone: LawCheck,
    /// The domain is closed under compatible joins.
    pub compatible_joins: LawCheck,
    /// Growth between comparable domain elements starts with an Opponent move.
    pub opponent_steps: LawCheck,
}

impl ClosureReport {
    pub fn closure_laws(&self) -> bool {
        self.increasing.holds && self.idempotent.holds && self.monotone.holds
    }

    pub fn all(&self) -> bool {
        self.closure_laws() && self.compatible_joins.holds && self.opponent_steps.holds
    }
}

impl ClosureOp {
    /// `x ↦ ⋀ { y ∈ X | x ≤ y }` for the meet closure `X` of `fixpoints`.
    pub fn from_fixpoints(lattice: Arc<PositionLattice>, fixpoints: impl IntoIterator<Item = Elem>) -> ClosureOp {
        let fixpoints = lattice.meet_closure(fixpoints);
        let map = (0..lattice.len())
            .map(|x| {
                fixpoints
                    .iter()
                    .copied()
                    .filter(|&y| lattice.leq(x, y))
                    .fold(lattice.top(), |acc, y| lattice.meet(acc, y))
            })
            .collect();
        ClosureOp { lattice, fixpoints, map }
    }

    /// An arbitrary map, not necessarily a closure.
    pub fn from_map(lattice: Arc<PositionLattice>, map: Vec<Elem>) -> Result<ClosureOp> {
        if map.len() != lattice.len() || map.iter().any(|&y| y >= lattice.len()) {
            return Err(Error::Precondition("map must send each lattice element to one".into()));
        }
        let fixpoints = (0..map.len()).filter(|&x| map[x] == x).collect();
        Ok(ClosureOp { lattice, fixpoints, map })
    }

    pub fn identity(lattice: Arc<PositionLattice>) -> ClosureOp {
        let all: Vec<Elem> = (0..lattice.len()).collect();
        ClosureOp::from_fixpoints(lattice, all)
    }

    pub fn lattice(&self) -> &Arc<PositionLattice> {
        &self.lattice
    }

    pub fn apply(&self, x: Elem) -> Elem {
        self.map[x]
    }

    pub fn map(&self) -> &[Elem] {
        &self.map
    }

    pub fn fixpoints(&self) -> &BTreeSet<Elem> {
        &self.fixpoints
    }

    /// Fixpoint positions (`⊤` left out), sorted by size then mask.
    pub fn fixpoint_positions(&self) -> Vec<Position> {
        let mut v: Vec<Position> = self.fixpoints.iter().filter_map(|&x| self.lattice.position(x)).collect();
        v.sort_by_key(|p| (p.len(), p.0));
        v
    }

    /// Elements not sent to `⊤`.
    pub fn domain(&self) -> Vec<Elem> {
        let t = self.lattice.top();
        (0..t).filter(|&x| self.map[x] != t).collect()
    }

    pub fn dynamic_domain(&self) -> Vec<Elem> {
        self.domain().into_iter().filter(|&x| self.lattice.leq_p(x, self.map[x])).collect()
    }

    pub fn check_properties(&self) -> ClosureReport {
        let l = &self.lattice;
        let n = l.len();
        let show = |xs: &[Elem]| xs.iter().map(|&x| l.show(x)).collect::<Vec<_>>();
        let increasing = (0..n).find(|&x| !l.leq(x, self.map[x])).map(|x| show(&[x, self.map[x]]));
        let idempotent = (0..n).find(|&x| self.map[self.map[x]] != self.map[x]).map(|x| show(&[x, self.map[x]]));
        let mut monotone = None;
        'm: for x in 0..n {
            for y in 0..n {
                if l.leq(x, y) && !l.leq(self.map[x], self.map[y]) {
                    monotone = Some(show(&[x, y]));
                    break 'm;
                }
            }
        }
        let dom = self.domain();
        let mut compatible_joins = None;
        'j: for &x in &dom {
            for &y in &dom {
                let j = l.join(x, y);
                if j != l.top() && self.map[j] == l.top() {
                    compatible_joins = Some(show(&[x, y, j]));
                    break 'j;
                }
            }
        }
        let mut opponent_steps = None;
        'o: for &x in &dom {
            for &y in &dom {
                if !l.leq(x, y) || self.map[x] == self.map[y] {
                    continue;
                }
                if !self.opponent_step(self.map[x], self.map[y]) {
                    opponent_steps = Some(show(&[x, y]));
                    break 'o;
                }
            }
        }
        ClosureReport {
            increasing: LawCheck::from(increasing),
            idempotent: LawCheck::from(idempotent),
            monotone: LawCheck::from(monotone),
            compatible_joins: LawCheck::from(compatible_joins),
            opponent_steps: LawCheck::from(opponent_steps),
        }
    }

    /// Some Opponent move `m : from → z` with `z ≤_P τ(z) ≤ bound`.
    fn opponent_step(&self, from: Elem, bound: Elem) -> bool {
        let l = &self.lattice;
        let Some(x) = l.position(from) else { return false };
        let g = l.game();
        g.enabled(x).into_iter().any(|m: MoveId| {
            if g.polarity(m) != Polarity::Opponent {
                return false;
            }
            let z = l.elem(x.with(m)).expect("edge target is a position");
            l.leq_p(z, self.map[z]) && l.leq(self.map[z], bound)
        })
    }
}

/// Reached positions with no Proponent move of the strategy.
pub fn halting(sigma: &Strategy) -> Vec<Position> {
    let g = sigma.game();
    sigma
        .reached()
        .iter()
        .copied()
        .filter(|&x| !sigma.edges().range((x, 0)..=(x, usize::MAX)).any(|&(_, m)| g.polarity(m) == Polarity::Proponent))
        .collect()
}

/// The closure whose fixpoints are the meets of halting positions.
pub fn closure_of(sigma: &Strategy) -> Result<ClosureOp> {
    let lattice = Arc::new(PositionLattice::new(sigma.game_arc().clone())?);
    closure_on(lattice, sigma)
}

/// As [`closure_of`], reusing an existing lattice of the strategy's game.
pub fn closure_on(lattice: Arc<PositionLattice>, sigma: &Strategy) -> Result<ClosureOp> {
    let fix: Vec<Elem> = halting(sigma)
        .into_iter()
        .map(|p| lattice.elem(p).ok_or_else(|| Error::AddressMismatch("lattice of another game".into())))
        .collect::<Result<_>>()?;
    Ok(ClosureOp::from_fixpoints(lattice, fix))
}

/// Plays whose positions all lie in the dynamic domain. The empty play is
/// always included.
pub fn strategy_of(tau: &ClosureOp, name: &str) -> Result<Strategy> {
    let l = tau.lattice();
    let game = l.game().clone();
    let allowed: BTreeSet<Position> = tau.dynamic_domain().into_iter().filter_map(|x| l.position(x)).collect();
    let mut plays = Vec::new();
    let mut stack = vec![(Position::EMPTY, Vec::new())];
    if allowed.contains(&Position::EMPTY) {
        while let Some((x, play)) = stack.pop() {
            for m in game.enabled(x) {
                let y = x.with(m);
                if allowed.contains(&y) {
                    let mut next: Vec<MoveId> = play.clone();
                    next.push(m);
                    stack.push((y, next));
                }
            }
            plays.push(play);
        }
    }
    Strategy::from_plays(name, game, plays)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn b_lattice() -> Arc<PositionLattice> {
        Arc::new(PositionLattice::new(Arc::new(fixtures::boolean_game())).unwrap())
    }

    #[test]
    fn lattice_sizes() {
        assert_eq!(b_lattice().len(), 5);
        assert_eq!(PositionLattice::new(Arc::new(fixtures::bb_game())).unwrap().len(), 17);
        assert_eq!(PositionLattice::new(Arc::new(Game::empty())).unwrap().len(), 2);
    }

    #[test]
    fn incompatible_answers_join_at_top() {
        let l = b_lattice();
        let g = l.game().clone();
        let t = l.elem(g.position_from_addresses(&["q", "true"]).unwrap()).unwrap();
        let f = l.elem(g.position_from_addresses(&["q", "false"]).unwrap()).unwrap();
        assert_eq!(l.join(t, f), l.top());
        assert_eq!(l.show(l.meet(t, f)), "{q}");
    }

    #[test]
    fn identity_is_a_closure_and_yields_every_play() {
        let l = b_lattice();
        let id = ClosureOp::identity(l.clone());
        assert!(id.check_properties().closure_laws());
        let s = strategy_of(&id, "all").unwrap();
        assert_eq!(s.plays().len(), l.game().plays().len());
    }

    #[test]
    fn swapped_images_break_monotonicity() {
        let l = b_lattice();
        let g = l.game().clone();
        let q = l.elem(g.position_from_addresses(&["q"]).unwrap()).unwrap();
        let t = l.elem(g.position_from_addresses(&["q", "true"]).unwrap()).unwrap();
        let f = l.elem(g.position_from_addresses(&["q", "false"]).unwrap()).unwrap();
        let mut map: Vec<Elem> = (0..l.len()).collect();
        map[q] = t;
        map[t] = f;
        map[f] = t;
        let op = ClosureOp::from_map(l, map).unwrap();
        let r = op.check_properties();
        assert!(!r.monotone.holds);
        assert!(r.monotone.witness.is_some());
    }

    #[test]
    fn only_the_root_fixed_gives_the_empty_play() {
        let l = b_lattice();
        let op = ClosureOp::from_fixpoints(l, [0]);
        let s = strategy_of(&op, "nothing").unwrap();
        assert_eq!(s.plays().len(), 1);
    }
}
