//! Acceptance gates. Each criterion runs in isolation and prints one
//! PASS/FAIL line; the process fails if any criterion fails.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;

use agw_core::fixtures;
use agw_core::{
    closure_of, directed_acyclicity_check, functoriality_check, halting, innocence_check, interact, parse_formula,
    scheduling_check, strategy_of, ClosureOp, Game, MoveId, PositionLattice, Status, Strategy,
};
use anyhow::{bail, ensure, Context, Result};

mod tooling;

type Criterion = fn() -> Result<()>;

fn deadlock_reproduction() -> Result<()> {
    let classes = interact(&fixtures::sigma(), &fixtures::and_r())?;
    ensure!(classes.len() == 1, "expected one maximal class, got {}", classes.len());
    let c = &classes[0];
    ensure!(c.status.is_deadlock(), "expected a deadlock, got {}", c.describe());
    ensure!(c.position == ["q", "q_R"], "deadlock at {:?}", c.position);
    Ok(())
}

fn complete_interactions() -> Result<()> {
    for tau in [fixtures::and_l(), fixtures::and_p()] {
        let classes = interact(&fixtures::sigma(), &tau)?;
        ensure!(!classes.is_empty(), "{}: no interaction", tau.name());
        for c in &classes {
            ensure!(c.status == Status::Complete, "{}: {}", tau.name(), c.describe());
            ensure!(c.position.iter().any(|m| m == "false"), "{}: output not answered", tau.name());
        }
    }
    Ok(())
}

fn fixpoint_mismatch() -> Result<()> {
    let f = functoriality_check(&fixtures::sigma(), &fixtures::and_r())?;
    ensure!(!f.strong, "strong functoriality should fail");
    ensure!(f.only_relational == ["{false, q}"], "relational-only fixpoints {:?}", f.only_relational);
    // the joint position carries false_R: sigma answers false on the right
    ensure!(
        f.joint_witnesses == ["{false, false_R, q, q_L, q_R, true_L}"],
        "never-reached witness {:?}",
        f.joint_witnesses
    );
    Ok(())
}

fn stability() -> Result<()> {
    let s = fixtures::and_p();
    let ev = s.induced_events()?;
    let out = s.game().move_by_address("R.false").expect("output move");
    let n = ev.events_labelled(out).len();
    ensure!(n == 3, "{n} events labelled by the output false");
    Ok(())
}

fn moves_of(game: &Game, edges: &[usize]) -> Vec<MoveId> {
    edges.iter().map(|&e| game.edge_move(e)).collect()
}

fn linearization_homotopy() -> Result<()> {
    for (name, g) in fixtures::all_games() {
        for play in g.plays().into_iter().filter(|p| p.len() <= 6) {
            let path = g.path_of(&play).context("play is not a path")?;
            let class: BTreeSet<Vec<MoveId>> =
                g.graph().homotopy_class(&path).iter().map(|edges| moves_of(&g, edges)).collect();
            let order = g.graph().path_order(&path)?;
            let lins: BTreeSet<Vec<MoveId>> =
                order.linearizations().iter().map(|l| l.iter().map(|&i| play[i]).collect()).collect();
            ensure!(class == lins, "{name}: class and linearizations differ at {}", g.show_play(&play));
        }
    }
    let s = fixtures::and_p();
    for x in s.maximal_positions() {
        let plays: BTreeSet<Vec<MoveId>> = s.plays_reaching(x).into_iter().cloned().collect();
        let order = s.causality_order(x)?;
        let moves: Vec<MoveId> = x.iter().collect();
        let lins: BTreeSet<Vec<MoveId>> =
            order.linearizations().iter().map(|l| l.iter().map(|&i| moves[i]).collect()).collect();
        ensure!(lins.len() == 6, "{} linearizations at {}", lins.len(), s.game().show_position(x));
        ensure!(plays == lins, "plays and linearizations differ at {}", s.game().show_position(x));
    }
    Ok(())
}

fn criterion_verdicts() -> Result<()> {
    let bb = parse_formula("B * B")?;
    let and = parse_formula("(B * B) -o B")?;
    let sigma = fixtures::sigma();
    let r = innocence_check(&sigma, &bb)?;
    ensure!(!r.innocent, "sigma should not be innocent");
    for (level, report) in [("plain", &r.scheduling), ("clustered", &r.clustered)] {
        let pass = |sw: &str| report.verdict(sw).map(|v| v.passed);
        ensure!(pass("left-first") == Some(true), "{level}: left-first should pass");
        ensure!(pass("right-first") == Some(false), "{level}: right-first should fail");
    }
    for s in [fixtures::and_p(), fixtures::and_l(), fixtures::and_r()] {
        ensure!(innocence_check(&s, &and)?.innocent, "{} should be innocent", s.name());
    }
    Ok(())
}

fn equivalent_formulations() -> Result<()> {
    let corpus = fixtures::lift_corpus();
    ensure!(corpus.len() >= 6, "corpus has {} fixtures", corpus.len());
    let names: Vec<&str> = corpus.iter().map(|f| f.strategy.name()).collect();
    ensure!(names.contains(&"cross") && names.contains(&"separate"), "missing the sigma analogue or its variant");
    let mut disagreements = Vec::new();
    for f in &corpus {
        let plain = scheduling_check(&f.strategy).passed;
        let acyclic = directed_acyclicity_check(&f.strategy, &f.formula)?.passed;
        if plain != acyclic {
            disagreements.push(f.strategy.name().to_string());
        }
    }
    ensure!(disagreements.is_empty(), "disagreements on {disagreements:?}");
    Ok(())
}

fn closure_correspondence() -> Result<()> {
    let mut failures = Vec::new();
    for (name, f) in fixtures::all_strategy_files() {
        let s: &Strategy = &f.strategy;
        if !s.check_ingenuous().ingenuous() || !s.is_receptive().holds {
            continue;
        }
        let tau = closure_of(s)?;
        let r = tau.check_properties();
        if !r.all() {
            let mut broken = Vec::new();
            for (law, check) in [
                ("increasing", &r.increasing),
                ("idempotent", &r.idempotent),
                ("monotone", &r.monotone),
                ("compatible joins", &r.compatible_joins),
                ("opponent steps", &r.opponent_steps),
            ] {
                if !check.holds {
                    broken.push(format!("{law} {:?}", check.witness.clone().unwrap_or_default()));
                }
            }
            failures.push(format!("{name}: {}", broken.join("; ")));
        }
        if !strategy_of(&tau, "back")?.same_plays(s) {
            let l = tau.lattice();
            let h: BTreeSet<usize> = halting(s).into_iter().filter_map(|p| l.elem(p)).chain([l.top()]).collect();
            let note = if l.is_meet_closed(&h) { "" } else { " (halting positions not meet-closed)" };
            failures.push(format!("{name}: round trip changes the plays{note}"));
        }
    }
    let l = std::sync::Arc::new(PositionLattice::new(std::sync::Arc::new(fixtures::boolean_game()))?);
    let n = l.len();
    for bits in 0u32..(1 << n) {
        let set: BTreeSet<usize> = (0..n).filter(|&i| bits & (1 << i) != 0).collect();
        if !l.is_meet_closed(&set) {
            continue;
        }
        let op = ClosureOp::from_fixpoints(l.clone(), set.iter().copied());
        let back = ClosureOp::from_map(l.clone(), op.map().to_vec())?;
        if op.fixpoints() != &set || back.fixpoints() != &set {
            failures.push(format!("boolean lattice: subset {bits:#b} does not round trip"));
        }
    }
    if !failures.is_empty() {
        bail!("{}", failures.join("\n      "));
    }
    Ok(())
}

fn structural_gates() -> Result<()> {
    let mut games: Vec<(String, Game)> = fixtures::all_games();
    for (name, f) in fixtures::all_strategy_files() {
        games.push((name.to_string(), f.strategy.game().clone()));
    }
    for (name, g) in &games {
        let r = g.graph().structural_report(g.root());
        ensure!(r.passed(), "{name}: {r:?}");
    }
    let cube = fixtures::cube();
    ensure!(cube.check_cube().passed(), "cube.ag should pass the cube check");
    let no_cube = fixtures::no_cube();
    let r = no_cube.graph.structural_report(no_cube.root);
    ensure!(!r.cube.passed(), "no-cube.ag passes the cube check");
    ensure!(r.cube_witness.is_some(), "no hexagon witness");
    Ok(())
}

fn tooling_gates() -> Result<()> {
    tooling::parser_round_trips()?;
    tooling::exit_codes()?;
    tooling::determinism()?;
    tooling::json_reports()?;
    tooling::compose_output_reparses()?;
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 10] = [
        ("deadlock reproduction", deadlock_reproduction),
        ("complete interactions", complete_interactions),
        ("fixpoint mismatch", fixpoint_mismatch),
        ("stability of the output events", stability),
        ("linearizations and homotopy", linearization_homotopy),
        ("criterion verdicts", criterion_verdicts),
        ("equivalence of formulations", equivalent_formulations),
        ("closure correspondence", closure_correspondence),
        ("structural gates", structural_gates),
        ("tooling gates", tooling_gates),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let outcome = match panic::catch_unwind(AssertUnwindSafe(check)) {
            Ok(r) => r,
            Err(p) => Err(anyhow::anyhow!(
                "panicked: {}",
                p.downcast_ref::<String>()
                    .cloned()
                    .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default()
            )),
        };
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({secs:.2}s)\n      {e:#}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
