use std::path::PathBuf;
use std::process::Command;

use agw_core::fixtures::{self, AND_ENV, BB_ENV, BUILTIN_ENV, B_ES, CUBE_AG, LIFT_STRS, NO_CUBE_AG};
use agw_core::syntax::{
    parse_async_graph, parse_env, parse_event_structure, parse_strategy, print_async_graph, print_env,
    print_event_structure, print_strategy,
};
use agw_core::{parse_formula, Env};
use anyhow::{ensure, Context, Result};

fn fixture(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures");
    dir.join(name).display().to_string()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn agw(args: &[&str]) -> Result<Run> {
    let out = Command::new(env!("CARGO_BIN_EXE_agw")).args(args).output().context("cannot start agw")?;
    Ok(Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout)?,
        stderr: String::from_utf8(out.stderr)?,
    })
}

/// Replaces `@name` by the fixture path.
fn expand(args: &[&str]) -> Vec<String> {
    args.iter().map(|a| a.strip_prefix('@').map(fixture).unwrap_or_else(|| a.to_string())).collect()
}

fn agw_with(args: &[&str]) -> Result<Run> {
    let owned = expand(args);
    let refs: Vec<&str> = owned.iter().map(String::as_str).collect();
    agw(&refs)
}

fn normalized(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

pub fn parser_round_trips() -> Result<()> {
    let env = fixtures::builtin_env();
    let mut strs = vec![
        ("sigma.str", fixtures::SIGMA_STR),
        ("independent.str", fixtures::INDEPENDENT_STR),
        ("and_l.str", fixtures::AND_L_STR),
        ("and_r.str", fixtures::AND_R_STR),
        ("and_p.str", fixtures::AND_P_STR),
    ];
    strs.extend_from_slice(LIFT_STRS);
    for (name, text) in strs {
        let f = parse_strategy(text, name, &env)?;
        let printed = print_strategy(&f.name, &f.formula, &f.strategy)?;
        ensure!(normalized(&printed) == normalized(text), "{name} prints differently");
        let again = parse_strategy(&printed, name, &env)?;
        ensure!(print_strategy(&again.name, &again.formula, &again.strategy)? == printed, "{name} is not byte-stable");
        let formula = parse_formula(&f.formula.to_string())?;
        ensure!(formula == f.formula && formula.to_string() == f.formula.to_string(), "{name}: formula");
    }
    let es = print_event_structure(&parse_event_structure(B_ES, "b.es")?);
    ensure!(normalized(&es) == normalized(B_ES), "b.es prints differently");
    ensure!(print_event_structure(&parse_event_structure(&es, "b.es")?) == es, "b.es is not byte-stable");
    for (name, text) in [("builtin.env", BUILTIN_ENV), ("bb.env", BB_ENV), ("and.env", AND_ENV)] {
        let base = if name == "builtin.env" { Env::default() } else { env.clone() };
        let printed = print_env(&parse_env(text, name, &base)?.items);
        ensure!(normalized(&printed) == normalized(text), "{name} prints differently");
        ensure!(print_env(&parse_env(&printed, name, &base)?.items) == printed, "{name} is not byte-stable");
    }
    for (name, text) in [("cube.ag", CUBE_AG), ("no-cube.ag", NO_CUBE_AG)] {
        let printed = print_async_graph(&parse_async_graph(text, name)?.graph);
        ensure!(normalized(&printed) == normalized(text), "{name} prints differently");
        ensure!(print_async_graph(&parse_async_graph(&printed, name)?.graph) == printed, "{name} is not byte-stable");
    }
    Ok(())
}

/// Arguments and expected exit status; `@` marks a fixture file.
const MATRIX: &[(&[&str], i32)] = &[
    (&["check-game", "@bb.env"], 0),
    (&["check-game", "@and.env"], 0),
    (&["check-game", "@b.es"], 0),
    (&["check-game", "@cube.ag"], 0),
    (&["check-game", "--formula", "up dn one * up dn one"], 0),
    (&["check-game", "@no-cube.ag"], 1),
    (&["check-strategy", "@sigma.str"], 0),
    (&["check-strategy", "@and_p.str"], 0),
    (&["check-strategy", "@lift/silent.str"], 1),
    (&["innocence", "@and_p.str"], 0),
    (&["innocence", "@lift/over_par.str"], 0),
    (&["innocence", "--switching", "left-first", "@sigma.str"], 0),
    (&["innocence", "@bb.env", "@sigma.str"], 1),
    (&["innocence", "@lift/cross.str"], 1),
    (&["interact", "@sigma.str", "@and_l.str"], 0),
    (&["interact", "@sigma.str", "@and_p.str"], 0),
    (&["interact", "@sigma.str", "@and_r.str"], 1),
    (&["compose", "@sigma.str", "@and_l.str"], 0),
    (&["compose", "@sigma.str", "@and_r.str"], 0),
    (&["fixpoints", "@sigma.str"], 0),
    (&["fixpoints", "@lift/relay.str"], 0),
    (&["fixpoints", "@and_p.str"], 1),
    (&["export-dot", "@bb.env"], 0),
    (&["export-dot", "--kind", "strategy", "--tiles", "@sigma.str"], 0),
    (&["export-dot", "--kind", "jumps", "@lift/cross.str"], 0),
    (&["interact", "@sigma.str"], 2),
    (&["interact", "@and_l.str", "@and_r.str"], 2),
    (&["check-game", "@missing.env"], 2),
    (&["check-game", "@lift"], 2),
    (&["check-game"], 2),
    (&["innocence", "--switching", "bogus", "@sigma.str"], 2),
    (&["frobnicate"], 2),
];

pub fn exit_codes() -> Result<()> {
    let mut wrong = Vec::new();
    for &(args, expected) in MATRIX {
        let r = agw_with(args)?;
        if r.code != expected {
            wrong.push(format!("agw {} exited {} (expected {expected}): {}", args.join(" "), r.code, r.stderr.trim()));
        }
        if expected == 2 && r.stderr.is_empty() {
            wrong.push(format!("agw {}: no error message", args.join(" ")));
        }
    }
    let bad = tempfile::Builder::new().suffix(".str").tempfile()?;
    std::fs::write(bad.path(), "strategy s on B\nevent e1 = nonexistent.move\n")?;
    let r = agw(&["check-strategy", &bad.path().display().to_string()])?;
    if r.code != 2 || !r.stderr.contains("nonexistent.move") {
        wrong.push(format!("unknown address: exit {}, {}", r.code, r.stderr.trim()));
    }
    ensure!(wrong.is_empty(), "{}", wrong.join("\n      "));
    let deadlock = agw_with(&["interact", "@sigma.str", "@and_r.str"])?;
    ensure!(deadlock.stdout.contains("DEADLOCK at {q, q_R}"), "interact report: {}", deadlock.stdout);
    let inn = agw_with(&["innocence", "@bb.env", "@sigma.str"])?;
    ensure!(inn.stdout.contains("right-first"), "innocence report: {}", inn.stdout);
    Ok(())
}

pub fn determinism() -> Result<()> {
    for &(args, _) in MATRIX {
        for json in [false, true] {
            let mut full: Vec<&str> = args.to_vec();
            if json {
                full.insert(0, "--json");
            }
            let a = agw_with(&full)?;
            let b = agw_with(&full)?;
            ensure!(a.stdout == b.stdout && a.stderr == b.stderr, "agw {} differs between runs", full.join(" "));
        }
    }
    Ok(())
}

pub fn json_reports() -> Result<()> {
    for &(args, expected) in MATRIX.iter().filter(|(a, c)| *c != 2 && a[0] != "export-dot") {
        let mut full = vec!["--json"];
        full.extend_from_slice(args);
        let r = agw_with(&full)?;
        ensure!(r.code == expected, "agw {} exited {}", full.join(" "), r.code);
        serde_json::from_str::<serde_json::Value>(&r.stdout)
            .with_context(|| format!("agw {} is not JSON", full.join(" ")))?;
    }
    Ok(())
}

pub fn compose_output_reparses() -> Result<()> {
    let dir = tempfile::tempdir()?;
    let out = dir.path().join("composed.str");
    let out_s = out.display().to_string();
    let r = agw_with(&["compose", "@sigma.str", "@and_l.str", "-o", &out_s])?;
    ensure!(r.code == 0, "compose exited {}: {}", r.code, r.stderr);
    let text = std::fs::read_to_string(&out)?;
    let f = parse_strategy(&text, "composed.str", &fixtures::builtin_env())?;
    let plays: Vec<String> = f.strategy.plays().iter().map(|p| f.strategy.game().show_play(p)).collect();
    ensure!(plays.len() == 3 && plays.contains(&"q·false".to_string()), "composed plays {plays:?}");
    let check = agw(&["check-strategy", &out_s])?;
    ensure!(check.code == 0, "composed strategy fails its checks: {}", check.stdout);
    Ok(())
}
