//! Asynchronous graphs: transition graphs with 2-dimensional tiles.
//!
//! A tile `{(m, p), (n, q)}` declares the two coinitial and cofinal paths
//! `m·p` and `n·q` interchangeable; `q` is the residual of `m` after `n`.
//! Homotopy is the congruence on paths generated by tile permutations.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::order::MovePartialOrder;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub name: String,
    pub src: VertexId,
    pub dst: VertexId,
}

/// An unordered pair of length-2 paths; `left = (m, p)`, `right = (n, q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Tile {
    pub left: (EdgeId, EdgeId),
    pub right: (EdgeId, EdgeId),
}

impl Tile {
    pub fn new(left: (EdgeId, EdgeId), right: (EdgeId, EdgeId)) -> Self {
        Tile { left, right }
    }

    /// Both orientations `(this half, other half)`.
    pub fn halves(&self) -> [((EdgeId, EdgeId), (EdgeId, EdgeId)); 2] {
        [(self.left, self.right), (self.right, self.left)]
    }
}

/// A path: a start vertex and a composable chain of edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Path {
    pub start: VertexId,
    pub edges: Vec<EdgeId>,
}

impl Path {
    pub fn empty(start: VertexId) -> Self {
        Path { start, edges: Vec::new() }
    }

    pub fn new(start: VertexId, edges: Vec<EdgeId>) -> Self {
        Path { start, edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TileViolation {
    /// The two halves are not coinitial/cofinal composable 2-paths.
    Malformed { tile: usize, reason: String },
    /// `m = n` or `p = q`.
    DegenerateTile { tile: usize },
    /// The same half is paired with two different halves.
    NonDeterministicResidual { tile: usize, other: usize },
}

impl TileViolation {
    pub fn describe(&self) -> String {
        match self {
            TileViolation::Malformed { tile, reason } => format!("tile #{tile}: malformed ({reason})"),
            TileViolation::DegenerateTile { tile } => format!("tile #{tile}: degenerate tile"),
            TileViolation::NonDeterministicResidual { tile, other } => {
                format!("tile #{tile}: non-deterministic residual (shared half with tile #{other})")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HexagonSide {
    Left,
    Right,
}

/// Two coinitial and cofinal 3-paths `m·n·o` and `p·q·r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hexagon {
    pub upper: [EdgeId; 3],
    pub lower: [EdgeId; 3],
    /// The side that could be filled; the other one could not.
    pub filled: HexagonSide,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CubeVerdict {
    Pass,
    Fail { witness: Hexagon },
}

impl CubeVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, CubeVerdict::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ContractVerdict {
    Pass,
    Fail { first: Path, second: Path },
}

impl ContractVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, ContractVerdict::Pass)
    }
}

/// For an edge pair `(e, f)` forming one side of a tile: the opposite
/// side and the tile index.
type Residuals = HashMap<(EdgeId, EdgeId), Vec<(EdgeId, EdgeId, usize)>>;

/// A finite acyclic asynchronous graph.
#[derive(Clone, Debug)]
pub struct AsyncGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    tiles: Vec<Tile>,
    out_edges: Vec<Vec<EdgeId>>,
    in_edges: Vec<Vec<EdgeId>>,
    residual: Residuals,
}

impl AsyncGraph {
    /// Builds a graph. Edge endpoints and tile edge ids must be in range and
    /// the graph must be acyclic; tile axioms are checked by [`validate_tiles`].
    ///
    /// [`validate_tiles`]: AsyncGraph::validate_tiles
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>, tiles: Vec<Tile>) -> Result<Self> {
        let nv = vertices.len();
        for e in &edges {
            if e.src >= nv || e.dst >= nv {
                return Err(Error::Precondition(format!("edge `{}` has an unknown endpoint", e.name)));
            }
        }
        for (i, t) in tiles.iter().enumerate() {
            for e in [t.left.0, t.left.1, t.right.0, t.right.1] {
                if e >= edges.len() {
                    return Err(Error::Precondition(format!("tile #{i} uses an unknown edge")));
                }
            }
        }
        let mut out_edges = vec![Vec::new(); nv];
        let mut in_edges = vec![Vec::new(); nv];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.src].push(i);
            in_edges[e.dst].push(i);
        }
        let mut residual: Residuals = HashMap::new();
        for (i, t) in tiles.iter().enumerate() {
            for (this, other) in t.halves() {
                residual.entry(this).or_default().push((other.0, other.1, i));
            }
        }
        let g = AsyncGraph { vertices, edges, tiles, out_edges, in_edges, residual };
        if g.topological_order().is_none() {
            return Err(Error::Precondition("graph has a directed cycle".into()));
        }
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: VertexId) -> &[EdgeId] {
        &self.in_edges[v]
    }

    /// Other halves of tiles containing the 2-path `(a, b)`.
    pub fn residuals(&self, a: EdgeId, b: EdgeId) -> impl Iterator<Item = (EdgeId, EdgeId)> + '_ {
        self.residual.get(&(a, b)).into_iter().flatten().map(|&(c, d, _)| (c, d))
    }

    fn residual_of(&self, a: EdgeId, b: EdgeId) -> Option<(EdgeId, EdgeId)> {
        self.residuals(a, b).next()
    }

    pub fn topological_order(&self) -> Option<Vec<VertexId>> {
        let n = self.vertices.len();
        let mut indeg: Vec<usize> = (0..n).map(|v| self.in_edges[v].len()).collect();
        let mut queue: VecDeque<VertexId> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &e in &self.out_edges[v] {
                let w = self.edges[e].dst;
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// End vertex of a path, or an error if its edges do not compose.
    pub fn target(&self, path: &Path) -> Result<VertexId> {
        let mut at = path.start;
        for &e in &path.edges {
            let edge = self.edges.get(e).ok_or_else(|| Error::Precondition(format!("unknown edge #{e}")))?;
            if edge.src != at {
                return Err(Error::Precondition(format!("edge `{}` does not compose", edge.name)));
            }
            at = edge.dst;
        }
        Ok(at)
    }

    pub fn validate_tiles(&self) -> Vec<TileViolation> {
        let mut report = Vec::new();
        for (i, t) in self.tiles.iter().enumerate() {
            let (m, p) = t.left;
            let (n, q) = t.right;
            let (em, ep, en, eq) = (&self.edges[m], &self.edges[p], &self.edges[n], &self.edges[q]);
            let reason = if em.dst != ep.src || en.dst != eq.src {
                Some("halves are not composable")
            } else if em.src != en.src {
                Some("halves are not coinitial")
            } else if ep.dst != eq.dst {
                Some("halves are not cofinal")
            } else {
                None
            };
            if let Some(r) = reason {
                report.push(TileViolation::Malformed { tile: i, reason: r.into() });
            }
            if m == n || p == q {
                report.push(TileViolation::DegenerateTile { tile: i });
            }
        }
        for (i, t) in self.tiles.iter().enumerate() {
            for (this, other) in t.halves() {
                for &(c, d, j) in &self.residual[&this] {
                    if j > i && (c, d) != other {
                        report.push(TileViolation::NonDeterministicResidual { tile: i, other: j });
                    }
                }
            }
        }
        report.dedup();
        report
    }

    /// Paths obtained from `edges` by one tile permutation.
    fn neighbours<'a>(&'a self, edges: &'a [EdgeId]) -> impl Iterator<Item = Vec<EdgeId>> + 'a {
        (0..edges.len().saturating_sub(1)).flat_map(move |i| {
            self.residuals(edges[i], edges[i + 1]).map(move |(c, d)| {
                let mut next = edges.to_vec();
                next[i] = c;
                next[i + 1] = d;
                next
            })
        })
    }

    /// The homotopy class of `path`, by breadth-first search over tile permutations.
    pub fn homotopy_class(&self, path: &Path) -> BTreeSet<Vec<EdgeId>> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(path.edges.clone());
        queue.push_back(path.edges.clone());
        while let Some(cur) = queue.pop_front() {
            for next in self.neighbours(&cur) {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        seen
    }

    pub fn homotopic(&self, s: &Path, t: &Path) -> Result<bool> {
        let (ts, tt) = (self.target(s)?, self.target(t)?);
        if s.start != t.start {
            return Err(Error::Precondition("paths are not coinitial".into()));
        }
        if ts != tt {
            return Err(Error::Precondition("paths are not cofinal".into()));
        }
        if s.len() != t.len() {
            return Ok(false);
        }
        Ok(self.homotopy_class(s).contains(&t.edges))
    }

    fn paths3(&self) -> HashMap<(VertexId, VertexId), Vec<[EdgeId; 3]>> {
        let mut by_ends: HashMap<(VertexId, VertexId), Vec<[EdgeId; 3]>> = HashMap::new();
        for (a, ea) in self.edges.iter().enumerate() {
            for &b in &self.out_edges[ea.dst] {
                for &c in &self.out_edges[self.edges[b].dst] {
                    by_ends.entry((ea.src, self.edges[c].dst)).or_default().push([a, b, c]);
                }
            }
        }
        by_ends
    }

    /// Left filling: a centre reached by one edge `u` from the source.
    fn left_fillable(&self, upper: [EdgeId; 3], lower: [EdgeId; 3]) -> bool {
        let [m, n, o] = upper;
        let [p, q, r] = lower;
        let Some((u, u1)) = self.residual_of(m, n) else { return false };
        let Some((u_, u2)) = self.residual_of(p, q) else { return false };
        if u != u_ {
            return false;
        }
        self.residual_of(u1, o) == Some((u2, r))
    }

    /// Right filling: a centre from which one edge `v` reaches the target.
    fn right_fillable(&self, upper: [EdgeId; 3], lower: [EdgeId; 3]) -> bool {
        let [m, n, o] = upper;
        let [p, q, r] = lower;
        for &v1 in &self.out_edges[self.edges[m].dst] {
            let Some((p_, v2)) = self.residual_of(m, v1) else { continue };
            if p_ != p {
                continue;
            }
            let Some((v1_, v)) = self.residual_of(n, o) else { continue };
            if v1_ != v1 {
                continue;
            }
            if self.residual_of(q, r) == Some((v2, v)) {
                return true;
            }
        }
        false
    }

    /// Checks the cube property on every hexagon (pair of distinct coinitial,
    /// cofinal 3-paths with distinct first and last edges). Requires valid tiles.
    pub fn check_cube(&self) -> CubeVerdict {
        let by_ends = self.paths3();
        let mut keys: Vec<_> = by_ends.keys().copied().collect();
        keys.sort_unstable();
        for key in keys {
            let paths = &by_ends[&key];
            for upper in paths {
                for lower in paths {
                    if upper[0] == lower[0] || upper[2] == lower[2] {
                        continue;
                    }
                    let l = self.left_fillable(*upper, *lower);
                    let r = self.right_fillable(*upper, *lower);
                    if l != r {
                        let filled = if l { HexagonSide::Left } else { HexagonSide::Right };
                        return CubeVerdict::Fail { witness: Hexagon { upper: *upper, lower: *lower, filled } };
                    }
                }
            }
        }
        CubeVerdict::Pass
    }

    pub fn reachable_from(&self, root: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.vertices.len()];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            for &e in &self.out_edges[v] {
                let w = self.edges[e].dst;
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    fn unreachable_names(&self, root: VertexId) -> Vec<String> {
        let seen = self.reachable_from(root);
        (0..self.vertices.len()).filter(|&v| !seen[v]).map(|v| self.vertices[v].clone()).collect()
    }

    /// All paths starting at `root`, shortest first.
    pub fn paths_from(&self, root: VertexId) -> Vec<Vec<EdgeId>> {
        let mut out = vec![Vec::new()];
        let mut frontier = vec![(root, Vec::new())];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (v, path) in frontier {
                for &e in &self.out_edges[v] {
                    let mut p: Vec<EdgeId> = path.clone();
                    p.push(e);
                    out.push(p.clone());
                    next.push((self.edges[e].dst, p));
                }
            }
            frontier = next;
        }
        out
    }

    /// Partition of all paths from `root` into homotopy classes.
    fn homotopy_partition(&self, root: VertexId) -> (Vec<Vec<EdgeId>>, Vec<usize>) {
        let paths = self.paths_from(root);
        let index: HashMap<&[EdgeId], usize> = paths.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let mut uf = UnionFind::new(paths.len());
        for (i, p) in paths.iter().enumerate() {
            for next in self.neighbours(p) {
                if let Some(&j) = index.get(next.as_slice()) {
                    uf.union(i, j);
                }
            }
        }
        let classes = (0..paths.len()).map(|i| uf.find(i)).collect();
        (paths, classes)
    }

    pub fn check_contractible(&self, root: VertexId) -> Result<ContractVerdict> {
        let unreachable = self.unreachable_names(root);
        if !unreachable.is_empty() {
            return Err(Error::Unreachable(unreachable));
        }
        let (paths, classes) = self.homotopy_partition(root);
        let mut first_at: HashMap<VertexId, usize> = HashMap::new();
        for (i, p) in paths.iter().enumerate() {
            let end = self.target(&Path::new(root, p.clone()))?;
            match first_at.get(&end) {
                None => {
                    first_at.insert(end, i);
                }
                Some(&j) if classes[j] != classes[i] => {
                    return Ok(ContractVerdict::Fail {
                        first: Path::new(root, paths[j].clone()),
                        second: Path::new(root, p.clone()),
                    });
                }
                Some(_) => {}
            }
        }
        Ok(ContractVerdict::Pass)
    }

    /// The partial order on the edge occurrences of `path` whose
    /// linearizations are its homotopy class. Labels are edge names.
    pub fn path_order(&self, path: &Path) -> Result<MovePartialOrder> {
        self.target(path)?;
        let k = path.len();
        // BFS over occurrence-tagged paths; in a tile q is the residual of m.
        let start: Vec<(EdgeId, usize)> = path.edges.iter().copied().zip(0..k).collect();
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);
        while let Some(cur) = queue.pop_front() {
            for i in 0..k.saturating_sub(1) {
                let (a, oa) = cur[i];
                let (b, ob) = cur[i + 1];
                for (c, d) in self.residuals(a, b) {
                    let mut next = cur.clone();
                    next[i] = (c, ob);
                    next[i + 1] = (d, oa);
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }
        let labels: Vec<String> = path.edges.iter().map(|&e| self.edges[e].name.clone()).collect();
        let occurrence_seqs: BTreeSet<Vec<usize>> = seen.iter().map(|p| p.iter().map(|&(_, o)| o).collect()).collect();
        let edge_seqs: BTreeSet<Vec<EdgeId>> = seen.iter().map(|p| p.iter().map(|&(e, _)| e).collect()).collect();
        if occurrence_seqs.len() != edge_seqs.len() {
            return Err(Error::NoPartialOrder("an edge sequence carries two occurrence orders".into()));
        }
        let mut pairs = Vec::new();
        for a in 0..k {
            for b in 0..k {
                if a != b && occurrence_seqs.iter().all(|s| pos(s, a) < pos(s, b)) {
                    pairs.push((a, b));
                }
            }
        }
        let order = MovePartialOrder::from_pairs(labels, &pairs)?;
        if order.count_linearizations() != occurrence_seqs.len() as u64 {
            return Err(Error::NoPartialOrder(
                "homotopy class is not the set of linearizations of an order (cube property fails)".into(),
            ));
        }
        Ok(order)
    }

    /// Builds the quotient graph `[G]` of homotopy classes of paths from `root`.
    pub fn position_order(&self, root: VertexId) -> Result<HomotopyQuotient> {
        let unreachable = self.unreachable_names(root);
        if !unreachable.is_empty() {
            return Err(Error::Unreachable(unreachable));
        }
        let (paths, classes) = self.homotopy_partition(root);
        let mut class_id: HashMap<usize, usize> = HashMap::new();
        let mut representatives: Vec<Vec<EdgeId>> = Vec::new();
        let mut of_path: HashMap<&[EdgeId], usize> = HashMap::new();
        for (i, p) in paths.iter().enumerate() {
            let next_id = class_id.len();
            let id = *class_id.entry(classes[i]).or_insert_with(|| {
                representatives.push(p.clone());
                next_id
            });
            of_path.insert(p.as_slice(), id);
        }
        let nclass = representatives.len();
        let ends: Vec<VertexId> =
            representatives.iter().map(|p| self.target(&Path::new(root, p.clone()))).collect::<Result<_>>()?;
        let names: Vec<String> =
            (0..nclass).map(|c| format!("[{}]", self.path_label(root, &representatives[c]))).collect();
        let mut edges = Vec::new();
        let mut edge_index: HashMap<(usize, EdgeId), EdgeId> = HashMap::new();
        for c in 0..nclass {
            for &e in &self.out_edges[ends[c]] {
                let mut ext = representatives[c].clone();
                ext.push(e);
                let d = of_path[ext.as_slice()];
                edge_index.insert((c, e), edges.len());
                edges.push(Edge { name: format!("{}@{}", self.edges[e].name, c), src: c, dst: d });
            }
        }
        let mut tiles = Vec::new();
        for c in 0..nclass {
            for t in &self.tiles {
                let (m, p) = t.left;
                let (n, q) = t.right;
                if self.edges[m].src != ends[c] || self.edges[n].src != ends[c] {
                    continue;
                }
                let cm = edges[edge_index[&(c, m)]].dst;
                let cn = edges[edge_index[&(c, n)]].dst;
                tiles.push(Tile::new(
                    (edge_index[&(c, m)], edge_index[&(cm, p)]),
                    (edge_index[&(c, n)], edge_index[&(cn, q)]),
                ));
            }
        }
        let graph = AsyncGraph::new(names, edges, tiles)?;
        let root_class = of_path[[].as_slice()];
        let leq = graph.reachability();
        Ok(HomotopyQuotient { graph, root: root_class, representatives, ends, leq })
    }

    fn path_label(&self, _root: VertexId, edges: &[EdgeId]) -> String {
        edges.iter().map(|&e| self.edges[e].name.as_str()).collect::<Vec<_>>().join("·")
    }

    /// Reflexive reachability matrix.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.vertices.len();
        let order = self.topological_order().expect("acyclic");
        let mut reach = vec![vec![false; n]; n];
        for &v in order.iter().rev() {
            reach[v][v] = true;
            for &e in &self.out_edges[v] {
                let w = self.edges[e].dst;
                let below = reach[w].clone();
                for (slot, r) in reach[v].iter_mut().zip(below) {
                    *slot |= r;
                }
            }
        }
        reach
    }
}

fn pos(seq: &[usize], x: usize) -> usize {
    seq.iter().position(|&y| y == x).unwrap_or(usize::MAX)
}

/// The structural checks of a rooted graph, in one place.
#[derive(Clone, Debug, Serialize)]
pub struct StructuralReport {
    pub tile_violations: Vec<String>,
    pub cube: CubeVerdict,
    /// Hexagon failing the cube property, by edge names.
    pub cube_witness: Option<String>,
    pub contractible: Option<ContractVerdict>,
    pub distributive: Option<LatticeFailure>,
    /// Set when some vertex cannot be reached from the root.
    pub unreachable: Vec<String>,
}

impl StructuralReport {
    pub fn passed(&self) -> bool {
        self.tile_violations.is_empty()
            && self.cube.passed()
            && self.contractible.as_ref().is_some_and(ContractVerdict::passed)
            && self.distributive.is_none()
            && self.unreachable.is_empty()
    }
}

impl AsyncGraph {
    pub fn structural_report(&self, root: VertexId) -> StructuralReport {
        let tile_violations: Vec<String> = self.validate_tiles().iter().map(TileViolation::describe).collect();
        let cube = if tile_violations.is_empty() { self.check_cube() } else { CubeVerdict::Pass };
        let cube_witness = match &cube {
            CubeVerdict::Fail { witness } => Some(self.describe_hexagon(witness)),
            CubeVerdict::Pass => None,
        };
        let (contractible, distributive, unreachable) = match (self.check_contractible(root), self.position_order(root))
        {
            (Ok(c), Ok(q)) => (Some(c), q.check_distributive().err(), Vec::new()),
            (Err(Error::Unreachable(names)), _) | (_, Err(Error::Unreachable(names))) => (None, None, names),
            _ => (None, None, Vec::new()),
        };
        StructuralReport { tile_violations, cube, cube_witness, contractible, distributive, unreachable }
    }

    pub fn describe_hexagon(&self, h: &Hexagon) -> String {
        let path = |p: &[EdgeId; 3]| p.iter().map(|&e| self.edges[e].name.as_str()).collect::<Vec<_>>().join("·");
        let side = match h.filled {
            HexagonSide::Left => "left",
            HexagonSide::Right => "right",
        };
        format!("{} vs {} (only the {side} side fills)", path(&h.upper), path(&h.lower))
    }
}

/// The asynchronous graph `[G]` together with its reachability order.
#[derive(Clone, Debug)]
pub struct HomotopyQuotient {
    pub graph: AsyncGraph,
    pub root: VertexId,
    /// One path of `G` per class.
    pub representatives: Vec<Vec<EdgeId>>,
    /// Vertex of `G` reached by each class.
    pub ends: Vec<VertexId>,
    leq: Vec<Vec<bool>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum LatticeFailure {
    NoMeet { below: usize, a: usize, b: usize },
    NoJoin { below: usize, a: usize, b: usize },
    NotDistributive { below: usize, a: usize, b: usize, c: usize },
}

impl HomotopyQuotient {
    pub fn len(&self) -> usize {
        self.ends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ends.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn down_set(&self, x: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.leq[y][x]).collect()
    }

    /// Checks that the down-set of every position is a distributive lattice.
    pub fn check_distributive(&self) -> std::result::Result<(), LatticeFailure> {
        let n = self.len();
        // Meets are global (lower bounds of elements below x stay below x);
        // joins below x are the minimal upper bounds that lie below x.
        let mut meet = vec![vec![None; n]; n];
        let mut mubs: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&c| self.leq[c][a] && self.leq[c][b]).collect();
                meet[a][b] = lower.iter().copied().find(|&m| lower.iter().all(|&c| self.leq[c][m]));
                let upper: Vec<usize> = (0..n).filter(|&c| self.leq[a][c] && self.leq[b][c]).collect();
                mubs[a][b] =
                    upper.iter().copied().filter(|&m| upper.iter().all(|&c| c == m || !self.leq[c][m])).collect();
            }
        }
        for x in 0..n {
            let down = self.down_set(x);
            let join = |a: usize, b: usize| -> Option<usize> {
                let below: Vec<usize> = mubs[a][b].iter().copied().filter(|&m| self.leq[m][x]).collect();
                (below.len() == 1).then(|| below[0])
            };
            for &a in &down {
                for &b in &down {
                    if meet[a][b].is_none() {
                        return Err(LatticeFailure::NoMeet { below: x, a, b });
                    }
                    if join(a, b).is_none() {
                        return Err(LatticeFailure::NoJoin { below: x, a, b });
                    }
                }
            }
            for &a in &down {
                for &b in &down {
                    for &c in &down {
                        let lhs = meet[a][join(b, c).unwrap()].unwrap();
                        let rhs = join(meet[a][b].unwrap(), meet[a][c].unwrap()).unwrap();
                        if lhs != rhs {
                            return Err(LatticeFailure::NotDistributive { below: x, a, b, c });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}
