//! Polarized asynchronous games whose positions are finite sets of moves.
//!
//! Every game built here has positions that are sets of moves (bitmasks),
//! edges `x → x ∪ {m}`, and one tile per complete square
//! `x, x∪{m}, x∪{n}, x∪{m,n}`. Products record the component split as a
//! [`ProductNode`]; cross-component tiles carry that node's label.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::asyncgraph::{AsyncGraph, Edge, EdgeId, Path, Tile, VertexId};
use crate::error::{Error, Result};
use crate::events::EventStructure;

pub type MoveId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Polarity {
    /// Environment, `λ = -1`.
    Opponent,
    /// Program, `λ = +1`.
    Proponent,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Opponent => Polarity::Proponent,
            Polarity::Proponent => Polarity::Opponent,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Polarity::Opponent => -1,
            Polarity::Proponent => 1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Polarity::Opponent => '-',
            Polarity::Proponent => '+',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Label {
    Tensor,
    Par,
}

impl Label {
    pub fn dual(self) -> Self {
        match self {
            Label::Tensor => Label::Par,
            Label::Par => Label::Tensor,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Tensor => "tensor",
            Label::Par => "par",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn prefix(self) -> &'static str {
        match self {
            Side::Left => "L.",
            Side::Right => "R.",
        }
    }
}

/// A finite set of moves, as a bitmask over [`MoveId`]s.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Position(pub u64);

impl Position {
    pub const EMPTY: Position = Position(0);

    pub fn contains(self, m: MoveId) -> bool {
        self.0 & (1 << m) != 0
    }

    pub fn with(self, m: MoveId) -> Position {
        Position(self.0 | (1 << m))
    }

    pub fn is_subset(self, other: Position) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn without(self, m: MoveId) -> Position {
        Position(self.0 & !(1u64 << m))
    }

    pub fn meet(self, other: Position) -> Position {
        Position(self.0 & other.0)
    }

    pub fn union(self, other: Position) -> Position {
        Position(self.0 | other.0)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = MoveId> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            (rest != 0).then(|| {
                let m = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                m
            })
        })
    }

    pub fn from_moves(moves: impl IntoIterator<Item = MoveId>) -> Position {
        moves.into_iter().fold(Position::EMPTY, Position::with)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Move {
    /// Component path, e.g. `L.R.q`.
    pub address: String,
    pub polarity: Polarity,
}

/// A binary product inside a game: moves under `path` + `L.` are on the
/// left, under `path` + `R.` on the right.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ProductNode {
    pub path: String,
    pub label: Label,
}

impl ProductNode {
    pub fn side_of(&self, address: &str) -> Option<Side> {
        let rest = address.strip_prefix(self.path.as_str())?;
        if rest.starts_with("L.") {
            Some(Side::Left)
        } else if rest.starts_with("R.") {
            Some(Side::Right)
        } else {
            None
        }
    }

    pub fn display_path(&self) -> String {
        if self.path.is_empty() {
            "root".into()
        } else {
            self.path.trim_end_matches('.').to_string()
        }
    }
}

/// A rooted polarized asynchronous game.
#[derive(Clone, Debug)]
pub struct Game {
    moves: Vec<Move>,
    nodes: Vec<ProductNode>,
    graph: AsyncGraph,
    positions: Vec<Position>,
    vertex_of: HashMap<Position, VertexId>,
    edge_move: Vec<MoveId>,
    edge_at: HashMap<(VertexId, MoveId), EdgeId>,
    tile_labels: Vec<Option<Label>>,
}

impl Game {
    /// Builds the game whose positions are the members of `candidates`
    /// reachable from `∅` through edges accepted by `edge_ok`.
    pub fn build(
        moves: Vec<Move>,
        nodes: Vec<ProductNode>,
        candidates: &BTreeSet<Position>,
        edge_ok: &dyn Fn(Position, MoveId) -> bool,
    ) -> Result<Game> {
        if moves.len() > 64 {
            return Err(Error::TooLarge(moves.len()));
        }
        let mut reached = BTreeSet::new();
        let mut stack = vec![Position::EMPTY];
        reached.insert(Position::EMPTY);
        let mut raw_edges = Vec::new();
        while let Some(x) = stack.pop() {
            for m in 0..moves.len() {
                if x.contains(m) {
                    continue;
                }
                let y = x.with(m);
                if candidates.contains(&y) && edge_ok(x, m) {
                    raw_edges.push((x, m));
                    if reached.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
        let mut positions: Vec<Position> = reached.into_iter().collect();
        positions.sort_by_key(|p| (p.len(), p.0));
        let vertex_of: HashMap<Position, VertexId> = positions.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        raw_edges.sort_by_key(|&(x, m)| (vertex_of[&x], m));
        let names: Vec<String> = positions.iter().map(|&p| compact_set(&moves, p)).collect();
        let mut edges = Vec::with_capacity(raw_edges.len());
        let mut edge_move = Vec::with_capacity(raw_edges.len());
        let mut edge_at = HashMap::new();
        for &(x, m) in &raw_edges {
            let (src, dst) = (vertex_of[&x], vertex_of[&x.with(m)]);
            edge_at.insert((src, m), edges.len());
            edge_move.push(m);
            edges.push(Edge { name: format!("{}@{}", moves[m].address, names[src]), src, dst });
        }
        let mut tiles = Vec::new();
        let mut tile_labels = Vec::new();
        for (v, &x) in positions.iter().enumerate() {
            for a in 0..moves.len() {
                for b in (a + 1)..moves.len() {
                    let (Some(&ea), Some(&eb)) = (edge_at.get(&(v, a)), edge_at.get(&(v, b))) else {
                        continue;
                    };
                    let (ya, yb) = (vertex_of[&x.with(a)], vertex_of[&x.with(b)]);
                    let (Some(&eab), Some(&eba)) = (edge_at.get(&(ya, b)), edge_at.get(&(yb, a))) else {
                        continue;
                    };
                    tiles.push(Tile::new((ea, eab), (eb, eba)));
                    tile_labels.push(cross_label(&nodes, &moves[a].address, &moves[b].address));
                }
            }
        }
        let graph = AsyncGraph::new(names, edges, tiles)?;
        Ok(Game { moves, nodes, graph, positions, vertex_of, edge_move, edge_at, tile_labels })
    }

    /// The game with no moves.
    pub fn empty() -> Game {
        let cands = BTreeSet::from([Position::EMPTY]);
        Game::build(Vec::new(), Vec::new(), &cands, &|_, _| true).expect("empty game")
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn move_count(&self) -> usize {
        self.moves.len()
    }

    pub fn polarity(&self, m: MoveId) -> Polarity {
        self.moves[m].polarity
    }

    pub fn address(&self, m: MoveId) -> &str {
        &self.moves[m].address
    }

    pub fn move_by_address(&self, address: &str) -> Option<MoveId> {
        self.moves.iter().position(|m| m.address == address)
    }

    pub fn nodes(&self) -> &[ProductNode] {
        &self.nodes
    }

    pub fn node(&self, path: &str) -> Option<&ProductNode> {
        self.nodes.iter().find(|n| n.path == path)
    }

    pub fn graph(&self) -> &AsyncGraph {
        &self.graph
    }

    pub fn root(&self) -> VertexId {
        self.vertex_of[&Position::EMPTY]
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn position(&self, v: VertexId) -> Position {
        self.positions[v]
    }

    pub fn vertex(&self, p: Position) -> Option<VertexId> {
        self.vertex_of.get(&p).copied()
    }

    pub fn is_position(&self, p: Position) -> bool {
        self.vertex_of.contains_key(&p)
    }

    pub fn edge_move(&self, e: EdgeId) -> MoveId {
        self.edge_move[e]
    }

    pub fn edge(&self, from: Position, m: MoveId) -> Option<EdgeId> {
        let v = self.vertex(from)?;
        self.edge_at.get(&(v, m)).copied()
    }

    pub fn has_edge(&self, from: Position, m: MoveId) -> bool {
        self.edge(from, m).is_some()
    }

    /// Moves enabled at `from`.
    pub fn enabled(&self, from: Position) -> Vec<MoveId> {
        match self.vertex(from) {
            Some(v) => self.graph.out_edges(v).iter().map(|&e| self.edge_move[e]).collect(),
            None => Vec::new(),
        }
    }

    pub fn tile_label(&self, tile: usize) -> Option<Label> {
        self.tile_labels[tile]
    }

    pub fn tile_labels(&self) -> &[Option<Label>] {
        &self.tile_labels
    }

    /// Label of the independence between two moves, if they sit on
    /// opposite sides of a product node.
    pub fn label_between(&self, a: MoveId, b: MoveId) -> Option<Label> {
        cross_label(&self.nodes, &self.moves[a].address, &self.moves[b].address)
    }

    /// Target position of a move sequence if it is a play.
    pub fn play_target(&self, play: &[MoveId]) -> Option<Position> {
        let mut at = Position::EMPTY;
        for &m in play {
            if !self.has_edge(at, m) {
                return None;
            }
            at = at.with(m);
        }
        Some(at)
    }

    pub fn is_play(&self, play: &[MoveId]) -> bool {
        self.play_target(play).is_some()
    }

    /// The graph path of a play.
    pub fn path_of(&self, play: &[MoveId]) -> Option<Path> {
        let mut at = Position::EMPTY;
        let mut edges = Vec::with_capacity(play.len());
        for &m in play {
            edges.push(self.edge(at, m)?);
            at = at.with(m);
        }
        Some(Path::new(self.root(), edges))
    }

    pub fn play_of(&self, path: &Path) -> Vec<MoveId> {
        path.edges.iter().map(|&e| self.edge_move[e]).collect()
    }

    /// All plays, shortest first.
    pub fn plays(&self) -> Vec<Vec<MoveId>> {
        self.graph.paths_from(self.root()).iter().map(|p| p.iter().map(|&e| self.edge_move[e]).collect()).collect()
    }

    /// Maximal positions (no outgoing edges).
    pub fn maximal_positions(&self) -> Vec<Position> {
        (0..self.positions.len()).filter(|&v| self.graph.out_edges(v).is_empty()).map(|v| self.positions[v]).collect()
    }

    /// `{a, b}` with addresses sorted lexicographically.
    pub fn show_position(&self, p: Position) -> String {
        format!("{{{}}}", self.sorted_addresses(p).join(", "))
    }

    pub fn sorted_addresses(&self, p: Position) -> Vec<String> {
        let mut v: Vec<String> = p.iter().map(|m| self.moves[m].address.clone()).collect();
        v.sort();
        v
    }

    pub fn show_play(&self, play: &[MoveId]) -> String {
        if play.is_empty() {
            return "ε".into();
        }
        play.iter().map(|&m| self.moves[m].address.as_str()).collect::<Vec<_>>().join("·")
    }

    pub fn position_from_addresses<S: AsRef<str>>(&self, addrs: &[S]) -> Result<Position> {
        let mut p = Position::EMPTY;
        for a in addrs {
            let m = self.move_by_address(a.as_ref()).ok_or_else(|| Error::UnknownMove(a.as_ref().to_string()))?;
            p = p.with(m);
        }
        Ok(p)
    }

    pub fn play_from_addresses<S: AsRef<str>>(&self, addrs: &[S]) -> Result<Vec<MoveId>> {
        addrs
            .iter()
            .map(|a| self.move_by_address(a.as_ref()).ok_or_else(|| Error::UnknownMove(a.as_ref().to_string())))
            .collect()
    }

    /// Game restricted to the edges accepted by `edge_ok`, pruned to what
    /// stays reachable from the root.
    pub fn restrict(&self, edge_ok: &dyn Fn(Position, MoveId) -> bool) -> Result<Game> {
        let cands: BTreeSet<Position> = self.positions.iter().copied().collect();
        Game::build(self.moves.clone(), self.nodes.clone(), &cands, &|x, m| self.has_edge(x, m) && edge_ok(x, m))
    }

    /// Checks `λ(m) = λ(q)` and `λ(n) = λ(p)` on every tile.
    pub fn polarity_tile_condition(&self) -> bool {
        self.graph.tiles().iter().all(|t| {
            let pol = |e: EdgeId| self.polarity(self.edge_move[e]);
            pol(t.left.0) == pol(t.right.1) && pol(t.right.0) == pol(t.left.1)
        })
    }

    /// The sub-game of the moves under `side` of the root product, with
    /// that prefix stripped from addresses and node paths.
    pub fn component(&self, side: Side) -> Result<Game> {
        let prefix = side.prefix();
        if self.node("").is_none() {
            return Err(Error::AddressMismatch("game has no root product".into()));
        }
        let kept: Vec<MoveId> = (0..self.moves.len()).filter(|&m| self.moves[m].address.starts_with(prefix)).collect();
        let moves: Vec<Move> = kept
            .iter()
            .map(|&m| Move {
                address: self.moves[m].address[prefix.len()..].to_string(),
                polarity: self.moves[m].polarity,
            })
            .collect();
        let nodes: Vec<ProductNode> = self
            .nodes
            .iter()
            .filter_map(|n| n.path.strip_prefix(prefix).map(|p| ProductNode { path: p.to_string(), label: n.label }))
            .collect();
        let embed = |p: Position| Position::from_moves(p.iter().map(|i| kept[i]));
        let project =
            |p: Position| Position::from_moves(kept.iter().enumerate().filter(|(_, &m)| p.contains(m)).map(|(i, _)| i));
        let cands: BTreeSet<Position> = self.positions.iter().map(|&p| project(p)).collect();
        Game::build(moves, nodes, &cands, &|x, m| self.has_edge(embed(x), kept[m]))
    }

    /// Renames every address through `f`; node paths are renamed through `g`.
    pub fn readdress(&self, f: &dyn Fn(&str) -> String, g: &dyn Fn(&str) -> String) -> Game {
        let mut out = self.clone();
        for m in &mut out.moves {
            m.address = f(&m.address);
        }
        for n in &mut out.nodes {
            n.path = g(&n.path);
        }
        out
    }

    /// Canonical description up to move numbering: moves with polarity,
    /// positions and edges as address sets. Two games built here are
    /// isomorphic as polarized graphs (with matching addresses) iff their
    /// shapes are equal.
    pub fn shape(&self) -> GameShape {
        let moves = self.moves.iter().map(|m| (m.address.clone(), m.polarity)).collect();
        let positions = self.positions.iter().map(|&p| self.sorted_addresses(p)).collect();
        let edges = self
            .graph
            .edges()
            .iter()
            .enumerate()
            .map(|(i, e)| (self.sorted_addresses(self.positions[e.src]), self.moves[self.edge_move[i]].address.clone()))
            .collect();
        let tiles = self
            .graph
            .tiles()
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let e = self.graph.edge(t.left.0);
                let mut pair = [
                    self.address(self.edge_move[t.left.0]).to_string(),
                    self.address(self.edge_move[t.right.0]).to_string(),
                ];
                pair.sort();
                (self.sorted_addresses(self.positions[e.src]), pair, self.tile_labels[i])
            })
            .collect();
        GameShape { moves, positions, edges, tiles }
    }

    /// Event structure read off the positions: `m ⪯ n` iff every position
    /// holding `n` holds `m`; `m # n` iff no position holds both.
    pub fn event_structure(&self) -> Result<EventStructure> {
        let n = self.moves.len();
        let mut causes = Vec::new();
        let mut conflicts = Vec::new();
        for b in 0..n {
            let holding: Vec<Position> = self.positions.iter().copied().filter(|p| p.contains(b)).collect();
            for a in 0..n {
                if a == b {
                    continue;
                }
                if !holding.is_empty() && holding.iter().all(|p| p.contains(a)) {
                    causes.push((a, b));
                }
                if a < b && holding.iter().all(|p| !p.contains(a)) {
                    conflicts.push((a, b));
                }
            }
        }
        let events = self.moves.iter().map(|m| (m.address.clone(), Some(m.polarity))).collect();
        EventStructure::new(events, &causes, &conflicts)
    }
}

/// See [`Game::shape`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameShape {
    pub moves: BTreeSet<(String, Polarity)>,
    pub positions: BTreeSet<Vec<String>>,
    pub edges: BTreeSet<(Vec<String>, String)>,
    pub tiles: BTreeSet<(Vec<String>, [String; 2], Option<Label>)>,
}

fn cross_label(nodes: &[ProductNode], a: &str, b: &str) -> Option<Label> {
    nodes.iter().find_map(|n| match (n.side_of(a), n.side_of(b)) {
        (Some(x), Some(y)) if x != y => Some(n.label),
        _ => None,
    })
}

fn compact_set(moves: &[Move], p: Position) -> String {
    let mut v: Vec<&str> = p.iter().map(|m| moves[m].address.as_str()).collect();
    v.sort_unstable();
    format!("{{{}}}", v.join(","))
}

fn prefixed(prefix: &str, game: &Game) -> (Vec<Move>, Vec<ProductNode>) {
    let moves =
        game.moves.iter().map(|m| Move { address: format!("{prefix}{}", m.address), polarity: m.polarity }).collect();
    let nodes =
        game.nodes.iter().map(|n| ProductNode { path: format!("{prefix}{}", n.path), label: n.label }).collect();
    (moves, nodes)
}

/// Opponent and Proponent interchanged; tile labels swapped.
pub fn dual(a: &Game) -> Game {
    let mut out = a.clone();
    for m in &mut out.moves {
        m.polarity = m.polarity.flip();
    }
    for n in &mut out.nodes {
        n.label = n.label.dual();
    }
    for l in out.tile_labels.iter_mut().flatten() {
        *l = l.dual();
    }
    out
}

/// Asynchronous product; the cross tiles carry `label`.
pub fn product(a: &Game, b: &Game, label: Label) -> Result<Game> {
    product_with(a, b, label, None)
}

fn product_with(a: &Game, b: &Game, label: Label, first: Option<Side>) -> Result<Game> {
    let na = a.move_count();
    if na + b.move_count() > 64 {
        return Err(Error::TooLarge(na + b.move_count()));
    }
    let (mut moves, mut nodes) = prefixed("L.", a);
    let (mb, nb) = prefixed("R.", b);
    moves.extend(mb);
    nodes.insert(0, ProductNode { path: String::new(), label });
    nodes.extend(nb);
    let mask_a = if na == 64 { u64::MAX } else { (1u64 << na) - 1 };
    let split = |p: Position| (Position(p.0 & mask_a), Position(p.0 >> na));
    let mut cands = BTreeSet::new();
    for &pa in a.positions() {
        for &pb in b.positions() {
            cands.insert(Position(pa.0 | (pb.0 << na)));
        }
    }
    let edge_ok = |x: Position, m: MoveId| {
        let (xa, xb) = split(x);
        if m < na {
            a.has_edge(xa, m) && (first != Some(Side::Left) || xb.is_empty())
        } else {
            b.has_edge(xb, m - na) && (first != Some(Side::Right) || xa.is_empty())
        }
    };
    Game::build(moves, nodes, &cands, &edge_ok)
}

/// `A ⊘ B` (`first = Left`): the tensor game restricted to plays where no
/// right move precedes a left move. `first = Right` gives `A ⊙ B`.
pub fn sequentialize(a: &Game, b: &Game, first: Side) -> Result<Game> {
    product_with(a, b, Label::Tensor, Some(first))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Modality {
    /// `↑`: initial Opponent move.
    Up,
    /// `↓`: initial Proponent move.
    Down,
}

impl Modality {
    pub fn polarity(self) -> Polarity {
        match self {
            Modality::Up => Polarity::Opponent,
            Modality::Down => Polarity::Proponent,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Modality::Up => "up",
            Modality::Down => "dn",
        }
    }
}

/// Adds one fresh initial move below the whole game.
pub fn lift(a: &Game, modality: Modality) -> Result<Game> {
    let kw = modality.keyword();
    let mut moves = vec![Move { address: kw.to_string(), polarity: modality.polarity() }];
    let (inner, nodes) = prefixed(&format!("{kw}."), a);
    moves.extend(inner);
    if moves.len() > 64 {
        return Err(Error::TooLarge(moves.len()));
    }
    let mut cands = BTreeSet::from([Position::EMPTY]);
    for &p in a.positions() {
        cands.insert(Position((p.0 << 1) | 1));
    }
    let edge_ok = |x: Position, m: MoveId| {
        if m == 0 {
            x.is_empty()
        } else {
            x.contains(0) && a.has_edge(Position(x.0 >> 1), m - 1)
        }
    };
    Game::build(moves, nodes, &cands, &edge_ok)
}

/// `A ⊸ B = A* ⅋ B`.
pub fn linear_implication(a: &Game, b: &Game) -> Result<Game> {
    product(&dual(a), b, Label::Par)
}

/// Environment binding identifiers to games.
#[derive(Clone, Debug, Default)]
pub struct Env {
    games: BTreeMap<String, Arc<Game>>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn bind(&mut self, name: impl Into<String>, game: Game) {
        self.games.insert(name.into(), Arc::new(game));
    }

    pub fn get(&self, name: &str) -> Option<&Arc<Game>> {
        self.games.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.games.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Arc<Game>)> {
        self.games.iter()
    }

    pub fn extend(&mut self, other: &Env) {
        for (k, v) in &other.games {
            self.games.insert(k.clone(), v.clone());
        }
    }
}
