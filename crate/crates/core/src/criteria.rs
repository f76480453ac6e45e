//! Correctness criteria on top of ingenuity: scheduling over tensor
//! switchings, directed acyclicity over par switchings with causality
//! jumps, and the clustered form of scheduling behind innocence.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::games::{Game, Label, MoveId, Polarity, Position, ProductNode, Side};
use crate::strategies::{Check, IngenuityReport, Strategy};

/// A choice of side for every product node of one label.
///
/// For tensors the side is the one played first; for pars it is the
/// premise kept in the skeleton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Switching {
    pub label: Label,
    pub choices: Vec<(String, Side)>,
}

impl Switching {
    /// All `2^k` switchings of the nodes labelled `label`, in binary order
    /// with `Left` before `Right`.
    pub fn all(game: &Game, label: Label) -> Vec<Switching> {
        let paths: Vec<String> = game.nodes().iter().filter(|n| n.label == label).map(|n| n.path.clone()).collect();
        (0..1u64 << paths.len())
            .map(|bits| Switching {
                label,
                choices: paths
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        (p.clone(), if bits >> (paths.len() - 1 - i) & 1 == 0 { Side::Left } else { Side::Right })
                    })
                    .collect(),
            })
            .collect()
    }

    pub fn side(&self, path: &str) -> Option<Side> {
        self.choices.iter().find(|(p, _)| p == path).map(|&(_, s)| s)
    }

    pub fn display(&self) -> String {
        if self.choices.is_empty() {
            return "none".into();
        }
        let word = |s: Side| match (self.label, s) {
            (Label::Tensor, Side::Left) => "left-first",
            (Label::Tensor, Side::Right) => "right-first",
            (Label::Par, Side::Left) => "left",
            (Label::Par, Side::Right) => "right",
        };
        self.choices
            .iter()
            .map(|(p, s)| {
                let node = ProductNode { path: p.clone(), label: self.label };
                if p.is_empty() {
                    word(*s).to_string()
                } else {
                    format!("{}={}", node.display_path(), word(*s))
                }
            })
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Whether playing `m` at `x` respects the tensor ordering.
    pub fn allows(&self, game: &Game, x: Position, m: MoveId) -> bool {
        self.choices.iter().all(|(path, first)| {
            let node = ProductNode { path: path.clone(), label: Label::Tensor };
            match node.side_of(game.address(m)) {
                Some(side) if side == *first => {
                    !x.iter().any(|n| node.side_of(game.address(n)).is_some_and(|s| s != side))
                }
                _ => true,
            }
        })
    }
}

/// The subgame in which every switched tensor is played sequentially.
pub fn restrict_to_switching(game: &Game, sw: &Switching) -> Result<Game> {
    if sw.label != Label::Tensor {
        return Err(Error::Precondition("restriction needs a tensor switching".into()));
    }
    game.restrict(&|x, m| sw.allows(game, x, m))
}

#[derive(Clone, Debug, Serialize)]
pub struct SwitchVerdict {
    pub switching: String,
    pub passed: bool,
    /// Offending position, when failing.
    pub position: Option<String>,
    /// A play or cycle showing the failure.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub passed: bool,
    pub switchings: Vec<SwitchVerdict>,
}

impl CriterionReport {
    fn from(switchings: Vec<SwitchVerdict>) -> CriterionReport {
        CriterionReport { passed: switchings.iter().all(|v| v.passed), switchings }
    }

    pub fn verdict(&self, switching: &str) -> Option<&SwitchVerdict> {
        self.switchings.iter().find(|v| v.switching == switching)
    }
}

fn respects(game: &Game, sw: &Switching, play: &[MoveId]) -> bool {
    let mut x = Position::EMPTY;
    play.iter().all(|&m| {
        let ok = sw.allows(game, x, m);
        x = x.with(m);
        ok
    })
}

fn smallest_play(sigma: &Strategy, x: Position) -> String {
    let plays = sigma.plays_reaching(x);
    sigma.game().show_play(plays.into_iter().min().map(|p| p.as_slice()).unwrap_or(&[]))
}

/// Every play of `σ` must be homotopic to one of `σ` that follows the
/// switching. In an event game homotopy is equality of targets, so this is
/// a check per reached position.
pub fn scheduling_check(sigma: &Strategy) -> CriterionReport {
    per_switching(sigma, |_, _, _| true)
}

fn per_switching(sigma: &Strategy, extra: impl Fn(Position, &[MoveId], &Clusters) -> bool) -> CriterionReport {
    let game = sigma.game();
    let clusters: BTreeMap<Position, Clusters> =
        sigma.reached().iter().map(|&x| (x, Clusters::at(sigma, x).expect("reached position"))).collect();
    let verdicts = Switching::all(game, Label::Tensor)
        .into_iter()
        .map(|sw| {
            // report the largest failing position
            let failing = sigma
                .reached()
                .iter()
                .copied()
                .filter(|&x| {
                    !sigma.plays_reaching(x).into_iter().any(|p| respects(game, &sw, p) && extra(x, p, &clusters[&x]))
                })
                .min_by_key(|x| (std::cmp::Reverse(x.len()), *x));
            SwitchVerdict {
                switching: sw.display(),
                passed: failing.is_none(),
                position: failing.map(|x| game.show_position(x)),
                witness: failing.map(|x| smallest_play(sigma, x)),
            }
        })
        .collect();
    CriterionReport::from(verdicts)
}

/// Synchronisation classes at one position: the equivalence generated by
/// the covering pairs `m ⪯ n` with `m` Opponent and `n` Proponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clusters {
    /// Class index of each move of the position.
    class: HashMap<MoveId, usize>,
    count: usize,
}

impl Clusters {
    pub fn at(sigma: &Strategy, x: Position) -> Result<Clusters> {
        let game = sigma.game();
        let order = sigma.causality_order(x)?;
        let moves: Vec<MoveId> = x.iter().collect();
        let mut parent: Vec<usize> = (0..moves.len()).collect();
        fn find(p: &mut [usize], i: usize) -> usize {
            if p[i] != i {
                let r = find(p, p[i]);
                p[i] = r;
            }
            p[i]
        }
        for (a, b) in order.covers() {
            if game.polarity(moves[a]) == Polarity::Opponent && game.polarity(moves[b]) == Polarity::Proponent {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
        let mut index = HashMap::new();
        let mut class = HashMap::new();
        for (i, &m) in moves.iter().enumerate() {
            let r = find(&mut parent, i);
            let next = index.len();
            class.insert(m, *index.entry(r).or_insert(next));
        }
        Ok(Clusters { class, count: index.len() })
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn same(&self, a: MoveId, b: MoveId) -> bool {
        self.class.get(&a) == self.class.get(&b)
    }

    /// Every class occupies a contiguous segment of the play.
    pub fn contiguous(&self, play: &[MoveId]) -> bool {
        let mut closed = BTreeSet::new();
        for w in play.windows(2) {
            let (a, b) = (self.class[&w[0]], self.class[&w[1]]);
            if a != b {
                closed.insert(a);
                if closed.contains(&b) {
                    return false;
                }
            }
        }
        true
    }
}

/// A play cut into contiguous synchronised blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusteredPlay {
    pub blocks: Vec<Vec<MoveId>>,
}

impl ClusteredPlay {
    pub fn moves(&self) -> Vec<MoveId> {
        self.blocks.concat()
    }

    /// Equality up to a permutation of whole blocks.
    pub fn equivalent(&self, other: &ClusteredPlay) -> bool {
        let key = |c: &ClusteredPlay| -> BTreeSet<BTreeSet<MoveId>> {
            c.blocks.iter().map(|b| b.iter().copied().collect()).collect()
        };
        key(self) == key(other)
    }

    pub fn show(&self, game: &Game) -> String {
        self.blocks.iter().map(|b| format!("[{}]", game.show_play(b))).collect::<Vec<_>>().join(" ")
    }
}

/// Regroups `s` into maximal clusters: the least play of `σ` with the same
/// target in which every synchronisation class is contiguous, cut at class
/// boundaries.
pub fn clusterize(sigma: &Strategy, play: &[MoveId]) -> Result<ClusteredPlay> {
    if !sigma.contains(play) {
        return Err(Error::Precondition(format!("{} is not a play of {}", sigma.game().show_play(play), sigma.name())));
    }
    let x = sigma.game().play_target(play).expect("play of the game");
    let cl = Clusters::at(sigma, x)?;
    let best =
        sigma.plays_reaching(x).into_iter().filter(|p| cl.contiguous(p)).min().ok_or_else(|| {
            Error::Precondition(format!("no clustered play reaches {}", sigma.game().show_position(x)))
        })?;
    let mut blocks: Vec<Vec<MoveId>> = Vec::new();
    for &m in best {
        match blocks.last_mut() {
            Some(b) if cl.same(b[0], m) => b.push(m),
            _ => blocks.push(vec![m]),
        }
    }
    Ok(ClusteredPlay { blocks })
}

/// Scheduling where only whole clusters may be permuted: some play reaching
/// each position must both follow the switching and keep every cluster
/// contiguous.
pub fn clustered_scheduling_check(sigma: &Strategy) -> CriterionReport {
    per_switching(sigma, |_, p, cl| cl.contiguous(p))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Key {
    Node(String),
    Move(MoveId),
}

/// The formula forest of a game built from units, multiplicatives and
/// lifts, with causality jumps between modalities.
#[derive(Clone, Debug)]
pub struct JumpGraph {
    keys: Vec<Key>,
    /// Parent index and the side taken at a product parent.
    parent: Vec<Option<(usize, Option<Side>)>>,
    labels: Vec<Option<Label>>,
    jumps: Vec<(usize, usize)>,
    names: Vec<String>,
}

impl JumpGraph {
    pub fn new(game: &Game) -> JumpGraph {
        let mut keys: Vec<Key> = game.nodes().iter().map(|n| Key::Node(n.path.clone())).collect();
        keys.extend((0..game.move_count()).map(Key::Move));
        let index: HashMap<Key, usize> = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        // the key whose subtree directly contains `prefix`
        let container = |t: &str| -> Option<(usize, Option<Side>)> {
            if t.is_empty() {
                return None;
            }
            if let Some(m) = game.move_by_address(t) {
                return Some((index[&Key::Move(m)], None));
            }
            let (rest, last) = match t.rsplit_once('.') {
                Some((r, l)) => (format!("{r}."), l),
                None => (String::new(), t),
            };
            let side = match last {
                "L" => Side::Left,
                "R" => Side::Right,
                _ => return None,
            };
            index.get(&Key::Node(rest)).map(|&i| (i, Some(side)))
        };
        let parent = keys
            .iter()
            .map(|k| match k {
                Key::Node(p) => container(p.trim_end_matches('.')),
                Key::Move(m) => container(game.address(*m).rsplit_once('.').map_or("", |(r, _)| r)),
            })
            .collect();
        let labels = keys
            .iter()
            .map(|k| match k {
                Key::Node(p) => game.node(p).map(|n| n.label),
                Key::Move(_) => None,
            })
            .collect();
        let names = keys
            .iter()
            .map(|k| match k {
                Key::Node(p) => ProductNode { path: p.clone(), label: Label::Par }.display_path(),
                Key::Move(m) => game.address(*m).to_string(),
            })
            .collect();
        JumpGraph { keys, parent, labels, jumps: Vec::new(), names }
    }

    /// The forest of `σ`'s game with one jump per covering pair of the
    /// causality order at `x`.
    pub fn at(sigma: &Strategy, x: Position) -> Result<JumpGraph> {
        let order = sigma.causality_order(x)?;
        let moves: Vec<MoveId> = x.iter().collect();
        let mut g = JumpGraph::new(sigma.game());
        for (a, b) in order.covers() {
            g.add_jump(moves[a], moves[b]);
        }
        Ok(g)
    }

    /// Skeleton edges plain (dotted when cut by the switching), jumps bold
    /// and directed.
    pub fn to_dot(&self, sw: Option<&Switching>) -> String {
        let kept = sw.map(|s| self.skeleton(s));
        let mut out = String::from("digraph jumps {\n  node [shape=plaintext];\n");
        for (i, k) in self.keys.iter().enumerate() {
            let label = match (k, self.labels[i]) {
                (Key::Node(_), Some(Label::Tensor)) => format!("⊗ {}", self.names[i]),
                (Key::Node(_), Some(Label::Par)) => format!("⅋ {}", self.names[i]),
                _ => self.names[i].clone(),
            };
            out.push_str(&format!("  n{i} [label=\"{}\"];\n", label));
        }
        for (child, p) in self.parent.iter().enumerate() {
            let Some((par, _)) = *p else { continue };
            let cut = kept.as_ref().is_some_and(|k| !k.contains(&(par, child)));
            let style = if cut { "dotted" } else { "solid" };
            out.push_str(&format!("  n{par} -> n{child} [dir=none, style={style}];\n"));
        }
        for &(a, b) in &self.jumps {
            out.push_str(&format!("  n{a} -> n{b} [style=bold, color=red];\n"));
        }
        out.push_str("}\n");
        out
    }

    fn move_index(&self, m: MoveId) -> usize {
        self.keys.iter().position(|k| *k == Key::Move(m)).expect("move node")
    }

    /// Adds `m → n`.
    pub fn add_jump(&mut self, m: MoveId, n: MoveId) {
        let e = (self.move_index(m), self.move_index(n));
        if !self.jumps.contains(&e) {
            self.jumps.push(e);
        }
    }

    pub fn jump_count(&self) -> usize {
        self.jumps.len()
    }

    fn ancestor_related(&self, a: usize, b: usize) -> bool {
        let above = |mut x: usize, y: usize| loop {
            if x == y {
                return true;
            }
            match self.parent[x] {
                Some((p, _)) => x = p,
                None => return false,
            }
        };
        above(a, b) || above(b, a)
    }

    fn skeleton(&self, sw: &Switching) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (child, p) in self.parent.iter().enumerate() {
            let Some((par, side)) = *p else { continue };
            let keep = match (self.labels[par], side) {
                (Some(Label::Par), Some(s)) => {
                    let Key::Node(path) = &self.keys[par] else { unreachable!() };
                    sw.side(path) == Some(s)
                }
                _ => true,
            };
            if keep {
                out.push((par, child));
            }
        }
        out
    }

    /// A simple cycle with at least one jump, every jump taken forward, and
    /// a maximal skeleton stretch between modalities neither of which lies
    /// above the other.
    pub fn forbidden_cycle(&self, sw: &Switching) -> Option<Vec<String>> {
        let n = self.keys.len();
        // (target, is_jump)
        let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
        for (a, b) in self.skeleton(sw) {
            adj[a].push((b, false));
            adj[b].push((a, false));
        }
        for &(a, b) in &self.jumps {
            adj[a].push((b, true));
        }
        for start in 0..n {
            let mut path = vec![(start, false)];
            let mut on = vec![false; n];
            on[start] = true;
            if let Some(c) = self.search(start, &adj, &mut path, &mut on) {
                return Some(c);
            }
        }
        None
    }

    fn search(
        &self,
        start: usize,
        adj: &[Vec<(usize, bool)>],
        path: &mut Vec<(usize, bool)>,
        on: &mut [bool],
    ) -> Option<Vec<String>> {
        let (here, _) = *path.last().expect("nonempty");
        for &(next, jump) in &adj[here] {
            // each cycle is found from its least node
            if next < start {
                continue;
            }
            if next == start && path.len() >= 3 {
                let mut cycle = path.clone();
                cycle.push((start, jump));
                if self.is_forbidden(&cycle) {
                    return Some(self.show_cycle(&cycle));
                }
                continue;
            }
            if on[next] {
                continue;
            }
            on[next] = true;
            path.push((next, jump));
            if let Some(c) = self.search(start, adj, path, on) {
                return Some(c);
            }
            path.pop();
            on[next] = false;
        }
        None
    }

    /// `cycle[i].1` tells whether the step into `cycle[i].0` is a jump.
    fn is_forbidden(&self, cycle: &[(usize, bool)]) -> bool {
        let steps: Vec<(usize, usize, bool)> = cycle.windows(2).map(|w| (w[0].0, w[1].0, w[1].1)).collect();
        let k = steps.len();
        let Some(first) = steps.iter().position(|s| s.2) else { return false };
        let mut run_start = None;
        for off in 1..=k {
            let (from, _, jump) = steps[(first + off) % k];
            if jump {
                if let Some(s) = run_start.take() {
                    if !self.ancestor_related(s, from) {
                        return true;
                    }
                }
            } else if run_start.is_none() {
                run_start = Some(from);
            }
        }
        false
    }

    fn show_cycle(&self, cycle: &[(usize, bool)]) -> Vec<String> {
        let mut out = vec![self.names[cycle[0].0].clone()];
        for &(n, jump) in &cycle[1..] {
            out.push(format!("{} {}", if jump { "->" } else { "--" }, self.names[n]));
        }
        out
    }
}

/// Jumps at each maximal position; a switching passes when no position
/// yields a forbidden cycle.
pub fn directed_acyclicity_check(sigma: &Strategy, formula: &Formula) -> Result<CriterionReport> {
    if !formula.is_mll_lift() {
        return Err(Error::NotMllLift(formula.to_string()));
    }
    let game = sigma.game();
    let mut graphs = Vec::new();
    for x in sigma.maximal_positions() {
        graphs.push((x, JumpGraph::at(sigma, x)?));
    }
    let verdicts = Switching::all(game, Label::Par)
        .into_iter()
        .map(|sw| {
            let failing = graphs.iter().find_map(|(x, g)| g.forbidden_cycle(&sw).map(|c| (*x, c)));
            SwitchVerdict {
                switching: sw.display(),
                passed: failing.is_none(),
                position: failing.as_ref().map(|(x, _)| game.show_position(*x)),
                witness: failing.map(|(_, c)| c.join(" ")),
            }
        })
        .collect();
    Ok(CriterionReport::from(verdicts))
}

#[derive(Clone, Debug, Serialize)]
pub struct InnocenceReport {
    pub ingenuous: IngenuityReport,
    pub receptive: Check,
    pub scheduling: CriterionReport,
    /// Absent when the formula mentions a game identifier.
    pub directed_acyclicity: Option<CriterionReport>,
    pub clustered: CriterionReport,
    /// Ingenuous, receptive and scheduling.
    pub asynchronous: bool,
    /// Ingenuous, receptive and clustered scheduling.
    pub innocent: bool,
}

pub fn innocence_check(sigma: &Strategy, formula: &Formula) -> Result<InnocenceReport> {
    let ingenuous = sigma.check_ingenuous();
    let receptive = sigma.is_receptive();
    let scheduling = scheduling_check(sigma);
    let directed_acyclicity =
        if formula.is_mll_lift() { Some(directed_acyclicity_check(sigma, formula)?) } else { None };
    let clustered = clustered_scheduling_check(sigma);
    let base = ingenuous.ingenuous() && receptive.holds;
    Ok(InnocenceReport {
        asynchronous: base && scheduling.passed,
        innocent: base && clustered.passed,
        ingenuous,
        receptive,
        scheduling,
        directed_acyclicity,
        clustered,
    })
}
