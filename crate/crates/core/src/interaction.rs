//! Interaction of two strategies over a shared interface, composition by
//! hiding, and relational composition of closure operators.
//!
//! The left strategy plays on `A ⊸ B` or on a bare `B` (read as `1 ⊸ B`);
//! the right strategy plays on `B ⊸ C`. Interface moves are matched by
//! address: `R.b` (or `b` when bare) on the left against `L.b` on the
//! right, with opposite polarities.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::concurrent::{closure_of, closure_on, ClosureOp, Elem, PositionLattice};
use crate::error::{Error, Result};
use crate::games::{self, Game, Label, MoveId, Polarity, Position, Side};
use crate::strategies::Strategy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum JointMove {
    /// A move of the left strategy outside the interface.
    Outer(MoveId),
    /// An interface move: left strategy's id, right strategy's id.
    Shared(MoveId, MoveId),
    /// A move of the right strategy outside the interface.
    Inner(MoveId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    Complete,
    /// A move offered by one side is refused by the other.
    Refused,
    /// Both sides wait for an interface move from the other.
    Waiting,
}

impl Status {
    pub fn is_deadlock(&self) -> bool {
        !matches!(self, Status::Complete)
    }
}

/// A maximal interaction, up to the choice of interleaving.
#[derive(Clone, Debug, Serialize)]
pub struct InteractionClass {
    pub status: Status,
    /// Final joint position, moves sorted by display name.
    pub position: Vec<String>,
    /// One joint play reaching it.
    pub play: Vec<String>,
    /// Interface moves each side still offers or expects at the end.
    pub left_pending: Vec<String>,
    pub right_pending: Vec<String>,
    /// Number of maximal joint plays in the class.
    pub plays: usize,
}

impl InteractionClass {
    pub fn describe(&self) -> String {
        let at = format!("{{{}}}", self.position.join(", "));
        match self.status {
            Status::Complete => format!("COMPLETE at {at}"),
            Status::Refused => format!("DEADLOCK at {at} (refused)"),
            Status::Waiting => format!("DEADLOCK at {at} (both waiting)"),
        }
    }
}

/// The two strategies wired along their common interface.
pub struct Wiring<'a> {
    sigma: &'a Strategy,
    tau: &'a Strategy,
    bare: bool,
    to_tau: HashMap<MoveId, MoveId>,
    composite: Arc<Game>,
    outer_to_composite: HashMap<MoveId, MoveId>,
    inner_to_composite: HashMap<MoveId, MoveId>,
}

struct Explored {
    /// Maximal joint plays with the strategy plays they project to.
    maximal: Vec<(Vec<JointMove>, Vec<MoveId>, Vec<MoveId>)>,
    /// Projections to the composite game, prefix closed.
    visible: BTreeSet<Vec<MoveId>>,
}

impl<'a> Wiring<'a> {
    pub fn new(sigma: &'a Strategy, tau: &'a Strategy) -> Result<Wiring<'a>> {
        let (sg, tg) = (sigma.game(), tau.game());
        let tau_left = tg
            .component(Side::Left)
            .map_err(|_| Error::AddressMismatch(format!("{} is not played on an implication", tau.name())))?;
        let expected = games::dual(&tau_left).shape();
        let bare = if sg.shape() == expected {
            true
        } else if sg.node("").is_some() && sg.component(Side::Right)?.shape() == expected {
            false
        } else {
            return Err(Error::AddressMismatch(format!(
                "the game of {} does not match the antecedent of the game of {}",
                sigma.name(),
                tau.name()
            )));
        };
        let mut to_tau = HashMap::new();
        for m in 0..sg.move_count() {
            let addr = sg.address(m);
            let b = if bare { Some(addr) } else { addr.strip_prefix("R.") };
            if let Some(b) = b {
                let t = tg.move_by_address(&format!("L.{b}")).ok_or_else(|| Error::AddressMismatch(b.to_string()))?;
                if tg.polarity(t) != sg.polarity(m).flip() {
                    return Err(Error::AddressMismatch(format!("polarity of interface move {b}")));
                }
                to_tau.insert(m, t);
            }
        }
        let tau_right = tg.component(Side::Right)?;
        let composite =
            if bare { tau_right } else { games::product(&sg.component(Side::Left)?, &tau_right, Label::Par)? };
        let mut outer_to_composite = HashMap::new();
        let mut inner_to_composite = HashMap::new();
        for m in 0..sg.move_count() {
            if !to_tau.contains_key(&m) {
                let c = composite.move_by_address(sg.address(m)).expect("outer move in composite");
                outer_to_composite.insert(m, c);
            }
        }
        for t in 0..tg.move_count() {
            if let Some(y) = tg.address(t).strip_prefix("R.") {
                let addr = if bare { y.to_string() } else { format!("R.{y}") };
                inner_to_composite.insert(t, composite.move_by_address(&addr).expect("inner move in composite"));
            }
        }
        Ok(Wiring { sigma, tau, bare, to_tau, composite: Arc::new(composite), outer_to_composite, inner_to_composite })
    }

    pub fn is_bare(&self) -> bool {
        self.bare
    }

    pub fn composite(&self) -> &Arc<Game> {
        &self.composite
    }

    fn successors(&self, sp: &[MoveId], tp: &[MoveId]) -> Vec<JointMove> {
        let mut out = Vec::new();
        let tau_next = self.tau.next_moves(tp);
        for &m in self.sigma.next_moves(sp) {
            match self.to_tau.get(&m) {
                Some(&t) if tau_next.contains(&t) => out.push(JointMove::Shared(m, t)),
                Some(_) => {}
                None => out.push(JointMove::Outer(m)),
            }
        }
        for &t in tau_next {
            if self.inner_to_composite.contains_key(&t) {
                out.push(JointMove::Inner(t));
            }
        }
        out
    }

    fn explore(&self) -> Explored {
        let mut maximal = Vec::new();
        let mut visible = BTreeSet::new();
        let mut seen: HashSet<(Vec<MoveId>, Vec<MoveId>, Vec<MoveId>)> = HashSet::new();
        let mut stack = vec![(Vec::new(), Vec::new(), Vec::new(), Vec::new())];
        while let Some((joint, sp, tp, vis)) = stack.pop() {
            if !seen.insert((sp.clone(), tp.clone(), vis.clone())) {
                continue;
            }
            let next = self.successors(&sp, &tp);
            if next.is_empty() {
                maximal.push((joint.clone(), sp.clone(), tp.clone()));
            }
            for jm in next.into_iter().rev() {
                let (mut j2, mut s2, mut t2, mut v2) = (joint.clone(), sp.clone(), tp.clone(), vis.clone());
                j2.push(jm);
                match jm {
                    JointMove::Outer(m) => {
                        s2.push(m);
                        v2.push(self.outer_to_composite[&m]);
                    }
                    JointMove::Shared(m, t) => {
                        s2.push(m);
                        t2.push(t);
                    }
                    JointMove::Inner(t) => {
                        t2.push(t);
                        v2.push(self.inner_to_composite[&t]);
                    }
                }
                stack.push((j2, s2, t2, v2));
            }
            visible.insert(vis);
        }
        Explored { maximal, visible }
    }

    /// Display name of a joint move; tagged by component unless the left
    /// strategy is bare.
    pub fn show_move(&self, jm: JointMove) -> String {
        let (sg, tg) = (self.sigma.game(), self.tau.game());
        let tag = |t: &str, s: String| if self.bare { s } else { format!("{t}:{s}") };
        match jm {
            JointMove::Outer(m) => tag("A", subscripted(&sg.address(m)[2..])),
            JointMove::Shared(m, _) => {
                let a = sg.address(m);
                tag("B", subscripted(if self.bare { a } else { &a[2..] }))
            }
            JointMove::Inner(t) => tag("C", subscripted(&tg.address(t)[2..])),
        }
    }

    fn pending(
        &self,
        ours: &Strategy,
        play: &[MoveId],
        theirs_next: &[MoveId],
        map: &dyn Fn(MoveId) -> Option<MoveId>,
    ) -> (Vec<String>, bool, bool) {
        let g = ours.game();
        let mut names = Vec::new();
        let (mut refused, mut waiting) = (false, false);
        for &m in ours.next_moves(play) {
            let Some(other) = map(m) else { continue };
            if theirs_next.contains(&other) {
                continue;
            }
            names.push(g.address(m).to_string());
            match g.polarity(m) {
                Polarity::Proponent => refused = true,
                Polarity::Opponent => waiting = true,
            }
        }
        (names, refused, waiting)
    }

    fn classify(&self, sp: &[MoveId], tp: &[MoveId]) -> (Status, Vec<String>, Vec<String>) {
        let to_sigma: HashMap<MoveId, MoveId> = self.to_tau.iter().map(|(&a, &b)| (b, a)).collect();
        let (lp, l_ref, l_wait) =
            self.pending(self.sigma, sp, self.tau.next_moves(tp), &|m| self.to_tau.get(&m).copied());
        let (rp, r_ref, r_wait) = self.pending(self.tau, tp, self.sigma.next_moves(sp), &|t| to_sigma.get(&t).copied());
        let status = if l_ref || r_ref {
            Status::Refused
        } else if l_wait && r_wait {
            Status::Waiting
        } else {
            Status::Complete
        };
        (status, lp, rp)
    }
}

/// Converts component prefixes into a subscript: `R.q` becomes `q_R`,
/// `L.R.true` becomes `true_LR`.
pub fn subscripted(address: &str) -> String {
    let parts: Vec<&str> = address.split('.').collect();
    let sides: String = parts.iter().filter(|p| matches!(**p, "L" | "R")).copied().collect();
    let rest: Vec<&str> = parts.iter().filter(|p| !matches!(**p, "L" | "R")).copied().collect();
    if sides.is_empty() {
        rest.join(".")
    } else {
        format!("{}_{sides}", rest.join("."))
    }
}

/// Least joint play of a class with its two sides, and the number of
/// joint plays in the class.
type ClassSeed = (Vec<JointMove>, Vec<MoveId>, Vec<MoveId>, usize);

/// All maximal interactions, grouped by final joint position, sorted by
/// position.
pub fn interact(sigma: &Strategy, tau: &Strategy) -> Result<Vec<InteractionClass>> {
    let w = Wiring::new(sigma, tau)?;
    let ex = w.explore();
    let mut classes: BTreeMap<(Position, Position), ClassSeed> = BTreeMap::new();
    for (joint, sp, tp) in ex.maximal {
        let key = (sigma.game().play_target(&sp).expect("play"), tau.game().play_target(&tp).expect("play"));
        let entry = classes.entry(key).or_insert_with(|| (joint.clone(), sp.clone(), tp.clone(), 0));
        if joint < entry.0 {
            *entry = (joint, sp, tp, entry.3);
        }
        entry.3 += 1;
    }
    let mut out: Vec<InteractionClass> = classes
        .into_values()
        .map(|(joint, sp, tp, count)| {
            let (status, left_pending, right_pending) = w.classify(&sp, &tp);
            let mut position: Vec<String> = joint.iter().map(|&j| w.show_move(j)).collect();
            position.sort();
            InteractionClass {
                status,
                position,
                play: joint.iter().map(|&j| w.show_move(j)).collect(),
                left_pending,
                right_pending,
                plays: count,
            }
        })
        .collect();
    out.sort_by(|a, b| a.position.cmp(&b.position));
    Ok(out)
}

/// Parallel composition followed by hiding of the interface.
pub fn compose(sigma: &Strategy, tau: &Strategy) -> Result<Strategy> {
    let w = Wiring::new(sigma, tau)?;
    let ex = w.explore();
    Strategy::from_plays(&format!("{}_{}", sigma.name(), tau.name()), w.composite.clone(), ex.visible)
}

/// Relational composite of two closures, on the lattice of the composite
/// game.
#[derive(Clone, Debug)]
pub struct ComposedClosure {
    pub op: ClosureOp,
    /// Composite positions related through some interface position, before
    /// meet closure; each with one interface witness (left strategy's
    /// interface moves).
    pub relational: BTreeMap<Position, Position>,
    /// Whether the relational set (with `⊤`) was already meet-closed.
    pub was_meet_closed: bool,
}

/// `{ (a, c) | (a, b) ∈ fix f, (b, c) ∈ fix g }`, meet-closed, on the
/// lattice of the composite game. The strategies supply the games and the
/// wiring; `f` and `g` must live on their games.
pub fn compose_closures(
    sigma: &Strategy,
    f: &ClosureOp,
    tau: &Strategy,
    g: &ClosureOp,
    lattice: Arc<PositionLattice>,
) -> Result<ComposedClosure> {
    let w = Wiring::new(sigma, tau)?;
    if f.lattice().game().shape() != sigma.game().shape() || g.lattice().game().shape() != tau.game().shape() {
        return Err(Error::AddressMismatch("closure is not on the game of its strategy".into()));
    }
    if lattice.game().shape() != w.composite.shape() {
        return Err(Error::AddressMismatch("target lattice is not on the composite game".into()));
    }
    let mut right_by_iface: HashMap<Position, Vec<Position>> = HashMap::new();
    for p in g.fixpoint_positions() {
        let (mut inner, mut iface) = (Position::EMPTY, Position::EMPTY);
        for t in p.iter() {
            match w.inner_to_composite.get(&t) {
                Some(&c) => inner = inner.with(c),
                None => iface = iface.with(t),
            }
        }
        right_by_iface.entry(iface).or_default().push(inner);
    }
    let mut relational = BTreeMap::new();
    for p in f.fixpoint_positions() {
        let (mut outer, mut iface) = (Position::EMPTY, Position::EMPTY);
        for m in p.iter() {
            match w.to_tau.get(&m) {
                Some(&t) => iface = iface.with(t),
                None => outer = outer.with(w.outer_to_composite[&m]),
            }
        }
        for &inner in right_by_iface.get(&iface).into_iter().flatten() {
            let c = outer.union(inner);
            if lattice.game().is_position(c) {
                relational.entry(c).or_insert(p);
            }
        }
    }
    let elems: BTreeSet<Elem> =
        relational.keys().map(|&p| lattice.elem(p).expect("composite position")).chain([lattice.top()]).collect();
    let was_meet_closed = lattice.is_meet_closed(&elems);
    let op = ClosureOp::from_fixpoints(lattice, elems);
    Ok(ComposedClosure { op, relational, was_meet_closed })
}

#[derive(Clone, Debug, Serialize)]
pub struct Functoriality {
    pub lax: bool,
    pub strong: bool,
    /// Relational fixpoints that are not fixpoints of the composite strategy.
    pub only_relational: Vec<String>,
    /// Fixpoints of the composite strategy missing from the relational side.
    pub only_composite: Vec<String>,
    /// For each relational-only fixpoint, the joint position it comes from:
    /// its own moves together with the interface moves of the witness.
    pub joint_witnesses: Vec<String>,
}

/// Compares `fix(σ°; τ°)` with `fix((σ; τ)°)`.
pub fn functoriality_check(sigma: &Strategy, tau: &Strategy) -> Result<Functoriality> {
    let w = Wiring::new(sigma, tau)?;
    let composite = compose(sigma, tau)?;
    let lattice = Arc::new(PositionLattice::new(composite.game_arc().clone())?);
    let rel = compose_closures(sigma, &closure_of(sigma)?, tau, &closure_of(tau)?, lattice.clone())?;
    let comp = closure_on(lattice.clone(), &composite)?;
    let (a, b) = (rel.op.fixpoints(), comp.fixpoints());
    let only_relational: Vec<Elem> = a.difference(b).copied().collect();
    let only_composite: Vec<Elem> = b.difference(a).copied().collect();
    let joint_witnesses = only_relational
        .iter()
        .filter_map(|&x| {
            let p = lattice.position(x)?;
            let left = rel.relational.get(&p)?;
            let mut names: Vec<String> = p
                .iter()
                .map(|c| {
                    let a = composite.game().address(c);
                    match (w.bare, a.strip_prefix("L."), a.strip_prefix("R.")) {
                        (true, _, _) => subscripted(a),
                        (false, Some(x), _) => format!("A:{}", subscripted(x)),
                        (false, _, y) => format!("C:{}", subscripted(y.unwrap_or(a))),
                    }
                })
                .collect();
            names.extend(
                left.iter()
                    .filter(|m| w.to_tau.contains_key(m))
                    .map(|m| w.show_move(JointMove::Shared(m, w.to_tau[&m]))),
            );
            names.sort();
            Some(format!("{{{}}}", names.join(", ")))
        })
        .collect();
    Ok(Functoriality {
        lax: only_relational.is_empty(),
        strong: only_relational.is_empty() && only_composite.is_empty(),
        only_relational: only_relational.into_iter().map(|x| lattice.show(x)).collect(),
        only_composite: only_composite.into_iter().map(|x| lattice.show(x)).collect(),
        joint_witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subscripts_follow_component_paths() {
        assert_eq!(subscripted("R.q"), "q_R");
        assert_eq!(subscripted("L.R.true"), "true_LR");
        assert_eq!(subscripted("q"), "q");
        assert_eq!(subscripted("L.up.dn"), "up.dn_L");
    }
}
