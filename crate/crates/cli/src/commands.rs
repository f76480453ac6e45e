use std::fmt::Write;
use std::sync::Arc;

use agw_core::concurrent::{closure_of, halting, strategy_of, LawCheck};
use agw_core::criteria::{self, CriterionReport, JumpGraph, Switching};
use agw_core::interaction::{self, Wiring};
use agw_core::strategies::Witness;
use agw_core::syntax::{self, StrategyFile};
use agw_core::{dot, interpret, parse_formula, Check, Formula, Game, Label, Position, StructuralReport};
use anyhow::{anyhow, bail, Result};
use serde::Serialize;
use serde_json::json;

use crate::inputs::{load, Inputs};
use crate::{Cli, Command, DotKind};

pub struct Output {
    pub ok: bool,
    pub text: String,
}

fn emit<T: Serialize>(cli: &Cli, ok: bool, value: &T, text: String) -> Result<Output> {
    let text = if cli.json { serde_json::to_string_pretty(value)? + "\n" } else { text };
    Ok(Output { ok, text })
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::CheckGame { files, formula } => check_game(cli, &load(&cli.envs, files)?, formula),
        Command::CheckStrategy { files } => check_strategy(cli, &load(&cli.envs, files)?),
        Command::Innocence { files, switching } => innocence(cli, &load(&cli.envs, files)?, switching.as_deref()),
        Command::Interact { files } => interact(cli, &load(&cli.envs, files)?),
        Command::Compose { files, output } => {
            let out = compose(cli, &load(&cli.envs, files)?)?;
            match output {
                Some(path) => {
                    std::fs::write(path, &out.text)?;
                    Ok(Output { ok: out.ok, text: String::new() })
                }
                None => Ok(out),
            }
        }
        Command::Fixpoints { files } => fixpoints(cli, &load(&cli.envs, files)?),
        Command::ExportDot { files, kind, tiles, position, switching, name } => export_dot(
            &load(&cli.envs, files)?,
            *kind,
            *tiles,
            position.as_deref(),
            switching.as_deref(),
            name.as_deref(),
        ),
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

#[derive(Serialize)]
struct GameEntry {
    name: String,
    positions: usize,
    moves: usize,
    tiles: usize,
    passed: bool,
    report: StructuralReport,
}

fn game_entry(name: String, graph: &agw_core::AsyncGraph, root: usize, moves: usize) -> GameEntry {
    let report = graph.structural_report(root);
    GameEntry {
        name,
        positions: graph.vertex_count(),
        moves,
        tiles: graph.tiles().len(),
        passed: report.passed(),
        report,
    }
}

fn check_game(cli: &Cli, inputs: &Inputs, formulas: &[String]) -> Result<Output> {
    let mut entries = Vec::new();
    for (_, file) in &inputs.envs {
        for (name, _) in &file.items {
            let g = inputs.env.get(name).expect("bound by its file");
            entries.push(game_entry(name.clone(), g.graph(), g.root(), g.move_count()));
        }
    }
    for (name, es) in &inputs.event_structures {
        let g = es.game_of()?;
        entries.push(game_entry(name.clone(), g.graph(), g.root(), g.move_count()));
    }
    for (name, ag) in &inputs.graphs {
        entries.push(game_entry(name.clone(), &ag.graph, ag.root, ag.graph.edges().len()));
    }
    for text in formulas {
        let g = interpret(&parse_formula(text)?, &inputs.env)?;
        entries.push(game_entry(text.clone(), g.graph(), g.root(), g.move_count()));
    }
    if entries.is_empty() {
        bail!("check-game needs a game: an .env, .es or .ag file, or --formula");
    }
    let ok = entries.iter().all(|e| e.passed);
    let mut text = String::new();
    for e in &entries {
        let _ = writeln!(
            text,
            "{}: {} ({} positions, {} moves, {} tiles)",
            e.name,
            mark(e.passed),
            e.positions,
            e.moves,
            e.tiles
        );
        let r = &e.report;
        for v in &r.tile_violations {
            let _ = writeln!(text, "  tiles: {v}");
        }
        if let Some(w) = &r.cube_witness {
            let _ = writeln!(text, "  cube: hexagon {w}");
        }
        if !r.unreachable.is_empty() {
            let _ = writeln!(text, "  unreachable: {}", r.unreachable.join(", "));
        }
        if r.contractible.as_ref().is_some_and(|c| !c.passed()) {
            let _ = writeln!(text, "  contractible: FAIL");
        }
        if let Some(f) = &r.distributive {
            let _ = writeln!(text, "  lattice: {f:?}");
        }
    }
    emit(cli, ok, &entries, text)
}

fn show_witness(w: &Option<Witness>) -> String {
    match w {
        None => String::new(),
        Some(w) => {
            let mut s = format!(" at {}", w.position);
            if !w.plays.is_empty() {
                let _ = write!(s, "; plays {}", w.plays.join(", "));
            }
            if !w.moves.is_empty() {
                let _ = write!(s, "; moves {}", w.moves.join(", "));
            }
            s
        }
    }
}

fn check_line(text: &mut String, name: &str, c: &Check) {
    let _ = writeln!(text, "{name}: {}{}", mark(c.holds), show_witness(&c.witness));
}

fn header(f: &StrategyFile) -> String {
    format!("strategy {} on {}\n", f.name, f.formula)
}

fn check_strategy(cli: &Cli, inputs: &Inputs) -> Result<Output> {
    let f = inputs.strategies(1, "check-strategy")?[0];
    let s = &f.strategy;
    let ing = s.check_ingenuous();
    let receptive = s.is_receptive();
    let characterized = s.satisfies_play_characterization();
    let ok = ing.ingenuous() && receptive.holds && characterized;
    let mut text = header(f);
    let _ = writeln!(text, "plays: {}, positions: {}", s.plays().len(), s.reached().len());
    check_line(&mut text, "positional", &ing.positional);
    check_line(&mut text, "forward preservation", &ing.forward_preservation);
    check_line(&mut text, "backward preservation", &ing.backward_preservation);
    check_line(&mut text, "deterministic", &ing.deterministic);
    check_line(&mut text, "courteous", &ing.courteous);
    check_line(&mut text, "receptive", &receptive);
    let _ = writeln!(text, "play characterization: {}", mark(characterized));
    let value = json!({
        "strategy": f.name, "formula": f.formula.to_string(), "plays": s.plays().len(),
        "positions": s.reached().len(), "ingenuity": ing, "ingenuous": ing.ingenuous(),
        "receptive": receptive, "play_characterization": characterized,
    });
    emit(cli, ok, &value, text)
}

fn innocence(cli: &Cli, inputs: &Inputs, only: Option<&str>) -> Result<Output> {
    let f = inputs.strategies(1, "innocence")?[0];
    let mut r = criteria::innocence_check(&f.strategy, &f.formula)?;
    if let Some(sw) = only {
        let keep = |c: &mut CriterionReport| {
            c.switchings.retain(|v| v.switching == sw);
            c.passed = c.switchings.iter().all(|v| v.passed);
        };
        keep(&mut r.scheduling);
        keep(&mut r.clustered);
        if let Some(a) = r.directed_acyclicity.as_mut() {
            keep(a);
        }
        if r.scheduling.switchings.is_empty() && r.directed_acyclicity.as_ref().is_none_or(|a| a.switchings.is_empty())
        {
            bail!("no switching named `{sw}`");
        }
    }
    let mut text = header(f);
    let _ = writeln!(text, "ingenuous: {}", mark(r.ingenuous.ingenuous()));
    check_line(&mut text, "receptive", &r.receptive);
    let rows_w = r
        .scheduling
        .switchings
        .iter()
        .chain(r.directed_acyclicity.iter().flat_map(|a| a.switchings.iter()))
        .map(|v| v.switching.chars().count() + 2)
        .max()
        .unwrap_or(0)
        .max(9);
    let row = |text: &mut String, a: &str, b: &str, c: &str, d: &str| {
        let pad = rows_w - a.chars().count();
        let _ = writeln!(text, "{a}{}  {b:<11} {c:<11} {d}", " ".repeat(pad));
    };
    row(&mut text, "switching", "scheduling", "acyclicity", "clustered");
    let word = |p: bool| if p { "pass" } else { "FAIL" };
    for (s, c) in r.scheduling.switchings.iter().zip(&r.clustered.switchings) {
        row(&mut text, &format!("⊗ {}", s.switching), word(s.passed), "-", word(c.passed));
    }
    match &r.directed_acyclicity {
        Some(a) => {
            for v in &a.switchings {
                row(&mut text, &format!("⅋ {}", v.switching), "-", word(v.passed), "-");
            }
        }
        None => {
            let _ = writeln!(text, "acyclicity: n/a (formula names a game)");
        }
    }
    let failures = r
        .scheduling
        .switchings
        .iter()
        .map(|v| ("scheduling", v))
        .chain(r.clustered.switchings.iter().map(|v| ("clustered", v)))
        .chain(r.directed_acyclicity.iter().flat_map(|a| a.switchings.iter().map(|v| ("acyclicity", v))));
    for (what, v) in failures.filter(|(_, v)| !v.passed) {
        let _ = writeln!(
            text,
            "{what} fails for {} at {}: {}",
            v.switching,
            v.position.as_deref().unwrap_or("?"),
            v.witness.as_deref().unwrap_or("")
        );
    }
    let base = r.ingenuous.ingenuous() && r.receptive.holds;
    let innocent = base && r.clustered.passed;
    r.innocent = innocent;
    r.asynchronous = base && r.scheduling.passed;
    let _ = writeln!(text, "verdict: {}", if innocent { "innocent" } else { "not innocent" });
    emit(cli, innocent, &r, text)
}

fn interact(cli: &Cli, inputs: &Inputs) -> Result<Output> {
    let [l, r] = inputs.strategies(2, "interact")?[..] else { unreachable!() };
    let classes = interaction::interact(&l.strategy, &r.strategy)?;
    let ok = classes.iter().all(|c| !c.status.is_deadlock());
    let mut text = String::new();
    for c in &classes {
        let _ = writeln!(text, "{}", c.describe());
        let _ = writeln!(text, "  play: {}", if c.play.is_empty() { "ε".to_string() } else { c.play.join("·") });
        if c.status.is_deadlock() {
            let _ = writeln!(text, "  {} expects: {}", l.name, c.left_pending.join(", "));
            let _ = writeln!(text, "  {} expects: {}", r.name, c.right_pending.join(", "));
        }
    }
    let deadlocks = classes.iter().filter(|c| c.status.is_deadlock()).count();
    let _ = writeln!(text, "{} maximal class(es), {} deadlock(s)", classes.len(), deadlocks);
    emit(cli, ok, &classes, text)
}

/// `A ⊸ C` from `A ⊸ B` (or bare `B`) and `B ⊸ C`.
fn composite_formula(left: &Formula, right: &Formula, bare: bool) -> Result<Formula> {
    let split = |f: &Formula| match f {
        Formula::Limp(a, b) => Some(((**a).clone(), (**b).clone())),
        Formula::Par(a, b) => match &**a {
            Formula::Dual(a) => Some(((**a).clone(), (**b).clone())),
            _ => None,
        },
        _ => None,
    };
    let (_, c) = split(right).ok_or_else(|| anyhow!("{right} is not an implication"))?;
    if bare {
        return Ok(c);
    }
    let (a, _) = split(left).ok_or_else(|| anyhow!("{left} is not an implication"))?;
    Ok(Formula::limp(a, c))
}

fn compose(cli: &Cli, inputs: &Inputs) -> Result<Output> {
    let [l, r] = inputs.strategies(2, "compose")?[..] else { unreachable!() };
    let bare = Wiring::new(&l.strategy, &r.strategy)?.is_bare();
    let s = interaction::compose(&l.strategy, &r.strategy)?;
    let formula = composite_formula(&l.formula, &r.formula, bare)?;
    let text = syntax::print_strategy(s.name(), &formula, &s)?;
    let plays: Vec<String> = s.plays().iter().map(|p| s.game().show_play(p)).collect();
    let value = json!({ "strategy": s.name(), "formula": formula.to_string(), "plays": plays, "file": text });
    emit(cli, true, &value, text)
}

fn law_line(text: &mut String, name: &str, c: &LawCheck) {
    let w = c.witness.as_ref().map(|w| format!(" at {}", w.join(", "))).unwrap_or_default();
    let _ = writeln!(text, "{name}: {}{w}", mark(c.holds));
}

fn fixpoints(cli: &Cli, inputs: &Inputs) -> Result<Output> {
    let f = inputs.strategies(1, "fixpoints")?[0];
    let s = &f.strategy;
    let g = s.game();
    let tau = closure_of(s)?;
    let report = tau.check_properties();
    let back = strategy_of(&tau, s.name())?;
    let round_trip = back.same_plays(s);
    let halting: Vec<String> = halting(s).into_iter().map(|p| g.show_position(p)).collect();
    let fix: Vec<String> = tau.fixpoints().iter().map(|&x| tau.lattice().show(x)).collect();
    let ok = report.all() && round_trip;
    let mut text = header(f);
    let _ = writeln!(text, "halting: {}", halting.join(" "));
    let _ = writeln!(text, "fixpoints: {}", fix.join(" "));
    law_line(&mut text, "increasing", &report.increasing);
    law_line(&mut text, "idempotent", &report.idempotent);
    law_line(&mut text, "monotone", &report.monotone);
    law_line(&mut text, "compatible joins", &report.compatible_joins);
    law_line(&mut text, "opponent steps", &report.opponent_steps);
    let _ = writeln!(text, "round trip: {}", mark(round_trip));
    let value =
        json!({ "strategy": f.name, "halting": halting, "fixpoints": fix, "laws": report, "round_trip": round_trip });
    emit(cli, ok, &value, text)
}

fn parse_position(g: &Game, text: &str) -> Result<Position> {
    let addrs: Vec<&str> = text.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
    Ok(g.position_from_addresses(&addrs)?)
}

fn export_dot(
    inputs: &Inputs,
    kind: Option<DotKind>,
    tiles: bool,
    position: Option<&str>,
    switching: Option<&str>,
    name: Option<&str>,
) -> Result<Output> {
    let done = |text: String| Ok(Output { ok: true, text });
    if let Some((_, f)) = inputs.strategies.first() {
        let s = &f.strategy;
        let at = || -> Result<Position> {
            match position {
                Some(p) => parse_position(s.game(), p),
                None => match s.maximal_positions()[..] {
                    [x] => Ok(x),
                    _ => bail!("{} has several maximal positions; pick one with --position", s.name()),
                },
            }
        };
        return match kind.unwrap_or(DotKind::Strategy) {
            DotKind::Strategy => done(dot::strategy_to_dot(s, tiles)),
            DotKind::Game => done(dot::game_to_dot(s.game(), tiles)),
            DotKind::Order => done(dot::order_to_dot(&s.causality_order(at()?)?)),
            DotKind::Jumps => {
                if !f.formula.is_mll_lift() {
                    bail!("jump graphs need a formula without game identifiers");
                }
                let graph = JumpGraph::at(s, at()?)?;
                let sw = match switching {
                    None => None,
                    Some(wanted) => Some(
                        Switching::all(s.game(), Label::Par)
                            .into_iter()
                            .find(|w| w.display() == wanted)
                            .ok_or_else(|| anyhow!("no par switching named `{wanted}`"))?,
                    ),
                };
                done(graph.to_dot(sw.as_ref()))
            }
        };
    }
    if matches!(kind, Some(DotKind::Order | DotKind::Jumps | DotKind::Strategy)) {
        bail!("this kind of export needs a strategy file");
    }
    if let Some((_, ag)) = inputs.graphs.first() {
        return done(dot::graph_to_dot(&ag.graph, tiles));
    }
    if let Some((_, es)) = inputs.event_structures.first() {
        return done(dot::game_to_dot(&es.game_of()?, tiles));
    }
    let game: Arc<Game> = match name {
        Some(n) => inputs.env.get(n).cloned().ok_or_else(|| anyhow!("no game named `{n}`"))?,
        None => {
            let (_, file) = inputs.envs.last().ok_or_else(|| anyhow!("export-dot needs an input file"))?;
            let (n, _) = file.items.last().ok_or_else(|| anyhow!("the environment defines nothing"))?;
            inputs.env.get(n).cloned().expect("bound by its file")
        }
    };
    done(dot::game_to_dot(&game, tiles))
}
