//! Graphviz output. Proponent edges are solid, Opponent edges dashed; in
//! tile mode every tile is drawn as a shaded square joined to its corners.

use std::fmt::Write;

use crate::asyncgraph::AsyncGraph;
use crate::games::{Game, Polarity};
use crate::order::MovePartialOrder;
use crate::strategies::Strategy;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn tiles_dot(out: &mut String, graph: &AsyncGraph, keep: &dyn Fn(usize) -> bool) {
    for (i, t) in graph.tiles().iter().enumerate() {
        let (m, p) = t.left;
        let (n, _) = t.right;
        if !(keep(m) && keep(p) && keep(n)) {
            continue;
        }
        let src = graph.edge(m).src;
        let dst = graph.edge(p).dst;
        let _ = writeln!(out, "  tile{i} [shape=square, style=filled, fillcolor=gray85, label=\"\", width=0.2];");
        let _ = writeln!(out, "  v{src} -> tile{i} [dir=none, style=dotted];");
        let _ = writeln!(out, "  tile{i} -> v{dst} [dir=none, style=dotted];");
    }
}

fn game_body(
    out: &mut String,
    game: &Game,
    tiles: bool,
    keep_edge: &dyn Fn(usize) -> bool,
    keep_vertex: &dyn Fn(usize) -> bool,
) {
    let graph = game.graph();
    for v in 0..graph.vertex_count() {
        if keep_vertex(v) {
            let _ = writeln!(out, "  v{v} [label={}];", quote(&game.show_position(game.position(v))));
        }
    }
    for (e, edge) in graph.edges().iter().enumerate() {
        if !keep_edge(e) {
            continue;
        }
        let m = game.edge_move(e);
        let style = match game.polarity(m) {
            Polarity::Proponent => "solid",
            Polarity::Opponent => "dashed",
        };
        let _ = writeln!(out, "  v{} -> v{} [label={}, style={style}];", edge.src, edge.dst, quote(game.address(m)));
    }
    if tiles {
        tiles_dot(out, graph, keep_edge);
    }
}

pub fn game_to_dot(game: &Game, tiles: bool) -> String {
    let mut out = String::from("digraph game {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    game_body(&mut out, game, tiles, &|_| true, &|_| true);
    out.push_str("}\n");
    out
}

/// The subgraph of positions and moves the strategy plays.
pub fn strategy_to_dot(sigma: &Strategy, tiles: bool) -> String {
    let game = sigma.game();
    let mut out = format!("digraph {} {{\n  rankdir=BT;\n  node [shape=plaintext];\n", quote(sigma.name()));
    let keep_edge = |e: usize| {
        let src = game.position(game.graph().edge(e).src);
        let m = game.edge_move(e);
        sigma.reaches(src) && sigma.has_edge(src, m)
    };
    let keep_vertex = |v: usize| sigma.reaches(game.position(v));
    game_body(&mut out, game, tiles, &keep_edge, &keep_vertex);
    out.push_str("}\n");
    out
}

/// Hasse diagram.
pub fn order_to_dot(order: &MovePartialOrder) -> String {
    let mut out = String::from("digraph order {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for i in 0..order.len() {
        let _ = writeln!(out, "  m{i} [label={}];", quote(order.label(i)));
    }
    for (a, b) in order.covers() {
        let _ = writeln!(out, "  m{a} -> m{b};");
    }
    out.push_str("}\n");
    out
}

/// A bare asynchronous graph; tiles as shaded squares when asked.
pub fn graph_to_dot(graph: &AsyncGraph, tiles: bool) -> String {
    let mut out = String::from("digraph graph_ {\n  rankdir=BT;\n  node [shape=plaintext];\n");
    for v in 0..graph.vertex_count() {
        let _ = writeln!(out, "  v{v} [label={}];", quote(graph.vertex_name(v)));
    }
    for edge in graph.edges() {
        let _ = writeln!(out, "  v{} -> v{} [label={}];", edge.src, edge.dst, quote(&edge.name));
    }
    if tiles {
        tiles_dot(&mut out, graph, &|_| true);
    }
    out.push_str("}\n");
    out
}
