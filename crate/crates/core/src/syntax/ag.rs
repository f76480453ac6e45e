use std::collections::HashMap;

use super::{at_end, content_lines, expect, is_identifier, word};
use crate::asyncgraph::{AsyncGraph, Edge, Tile, VertexId};
use crate::error::{Error, Result, SourceSpan};

#[derive(Clone, Debug)]
pub struct AgFile {
    pub graph: AsyncGraph,
    /// The unique vertex without incoming edges.
    pub root: VertexId,
}

/// ```text
/// vertex <id>
/// edge <id> <src> <dst>
/// tile <e1>.<e2> ~ <e3>.<e4>
/// ```
pub fn parse_async_graph(text: &str, file: &str) -> Result<AgFile> {
    let mut vertices: Vec<String> = Vec::new();
    let mut vindex: HashMap<String, usize> = HashMap::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut eindex: HashMap<String, usize> = HashMap::new();
    let mut tiles = Vec::new();
    let mut last_line = 0;
    for line in content_lines(text, file) {
        last_line = line.number;
        let ws = line.words();
        let head = word(&line, &ws, 0, "a declaration")?;
        match head.text {
            "vertex" => {
                let v = word(&line, &ws, 1, "a vertex name")?;
                at_end(&line, &ws, 2)?;
                if !is_identifier(v.text) || vindex.contains_key(v.text) {
                    return Err(line.error(Some(&v), format!("invalid or duplicate vertex `{}`", v.text)));
                }
                vindex.insert(v.text.to_string(), vertices.len());
                vertices.push(v.text.to_string());
            }
            "edge" => {
                let e = word(&line, &ws, 1, "an edge name")?;
                if e.text.contains('.') || !is_identifier(e.text) || eindex.contains_key(e.text) {
                    return Err(line.error(Some(&e), format!("invalid or duplicate edge `{}`", e.text)));
                }
                let mut ends = [0; 2];
                for (k, slot) in ends.iter_mut().enumerate() {
                    let w = word(&line, &ws, 2 + k, "a vertex")?;
                    *slot = *vindex
                        .get(w.text)
                        .ok_or_else(|| line.error(Some(&w), format!("unknown vertex `{}`", w.text)))?;
                }
                at_end(&line, &ws, 4)?;
                eindex.insert(e.text.to_string(), edges.len());
                edges.push(Edge { name: e.text.to_string(), src: ends[0], dst: ends[1] });
            }
            "tile" => {
                let mut halves = [(0, 0); 2];
                for (k, i) in [1, 3].into_iter().enumerate() {
                    let w = word(&line, &ws, i, "a two-edge path `a.b`")?;
                    let Some((a, b)) = w.text.split_once('.') else {
                        return Err(line.error(Some(&w), "expected a two-edge path `a.b`"));
                    };
                    let find = |n: &str| {
                        eindex.get(n).copied().ok_or_else(|| line.error(Some(&w), format!("unknown edge `{n}`")))
                    };
                    halves[k] = (find(a)?, find(b)?);
                }
                expect(&line, &ws, 2, "~")?;
                at_end(&line, &ws, 4)?;
                tiles.push(Tile::new(halves[0], halves[1]));
            }
            other => return Err(line.error(Some(&head), format!("unknown declaration `{other}`"))),
        }
    }
    let at = |length: usize| SourceSpan { file: file.to_string(), line: last_line.max(1), column: 1, length };
    let mut has_in = vec![false; vertices.len()];
    for e in &edges {
        has_in[e.dst] = true;
    }
    let roots: Vec<usize> = (0..vertices.len()).filter(|&v| !has_in[v]).collect();
    let graph = AsyncGraph::new(vertices, edges, tiles).map_err(|e| e.at(at(0)))?;
    match roots.as_slice() {
        [root] => Ok(AgFile { graph, root: *root }),
        _ => Err(Error::Precondition(format!(
            "expected exactly one vertex without incoming edges, found {}",
            roots.len()
        ))
        .at(at(0))),
    }
}

pub fn print_async_graph(g: &AsyncGraph) -> String {
    let mut out = Vec::new();
    for v in g.vertex_names() {
        out.push(format!("vertex {v}"));
    }
    for e in g.edges() {
        out.push(format!("edge {} {} {}", e.name, g.vertex_name(e.src), g.vertex_name(e.dst)));
    }
    for t in g.tiles() {
        let n = |e: usize| &g.edge(e).name;
        out.push(format!("tile {}.{} ~ {}.{}", n(t.left.0), n(t.left.1), n(t.right.0), n(t.right.1)));
    }
    let mut s = out.join("\n");
    s.push('\n');
    s
}
