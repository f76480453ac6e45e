//! The shipped fixture corpus: the boolean game, its tensor square, the
//! conjunction game and the strategies on them, plus a family of
//! strategies on formulas built from units, multiplicatives and lifts.

use crate::asyncgraph::AsyncGraph;
use crate::events::EventStructure;
use crate::formula::{interpret, parse_formula};
use crate::games::{Env, Game};
use crate::strategies::Strategy;
use crate::syntax::{self, AgFile, StrategyFile};

pub const B_ES: &str = include_str!("../fixtures/b.es");
pub const BUILTIN_ENV: &str = include_str!("../fixtures/builtin.env");
pub const BB_ENV: &str = include_str!("../fixtures/bb.env");
pub const AND_ENV: &str = include_str!("../fixtures/and.env");
pub const SIGMA_STR: &str = include_str!("../fixtures/sigma.str");
pub const INDEPENDENT_STR: &str = include_str!("../fixtures/independent.str");
pub const AND_L_STR: &str = include_str!("../fixtures/and_l.str");
pub const AND_R_STR: &str = include_str!("../fixtures/and_r.str");
pub const AND_P_STR: &str = include_str!("../fixtures/and_p.str");
pub const NO_CUBE_AG: &str = include_str!("../fixtures/no-cube.ag");
pub const CUBE_AG: &str = include_str!("../fixtures/cube.ag");

/// Strategies on formulas without identifiers, by file name.
pub const LIFT_STRS: &[(&str, &str)] = &[
    ("cross.str", include_str!("../fixtures/lift/cross.str")),
    ("separate.str", include_str!("../fixtures/lift/separate.str")),
    ("silent.str", include_str!("../fixtures/lift/silent.str")),
    ("mutual_par.str", include_str!("../fixtures/lift/mutual_par.str")),
    ("mutual_tensor.str", include_str!("../fixtures/lift/mutual_tensor.str")),
    ("over_par.str", include_str!("../fixtures/lift/over_par.str")),
    ("under_tensor.str", include_str!("../fixtures/lift/under_tensor.str")),
    ("crossed_pars.str", include_str!("../fixtures/lift/crossed_pars.str")),
    ("down_first.str", include_str!("../fixtures/lift/down_first.str")),
    ("relay.str", include_str!("../fixtures/lift/relay.str")),
];

/// Question `q` (Opponent) answered by `true` or `false` (Proponent).
pub fn boolean_events() -> EventStructure {
    syntax::parse_event_structure(B_ES, "b.es").expect("b.es")
}

pub fn boolean_game() -> Game {
    boolean_events().game_of().expect("boolean game")
}

/// Binds `B` to the boolean game.
pub fn builtin_env() -> Env {
    syntax::parse_env(BUILTIN_ENV, "builtin.env", &Env::new()).expect("builtin.env").env
}

fn formula_game(text: &str) -> Game {
    interpret(&parse_formula(text).expect("fixture formula"), &builtin_env()).expect("fixture game")
}

pub fn bb_game() -> Game {
    formula_game("B * B")
}

/// `(B * B) -o B`.
pub fn and_game() -> Game {
    formula_game("(B * B) -o B")
}

pub fn strategy_file(text: &str, file: &str) -> StrategyFile {
    syntax::parse_strategy(text, file, &builtin_env()).unwrap_or_else(|e| panic!("{file}: {e}"))
}

/// Answers `true` on the left at once, and `false` on the right only once
/// both questions have been asked.
pub fn sigma() -> Strategy {
    strategy_file(SIGMA_STR, "sigma.str").strategy
}

/// Each side of `B * B` answered as soon as it is asked.
pub fn independent() -> Strategy {
    strategy_file(INDEPENDENT_STR, "independent.str").strategy
}

/// Strict conjunction evaluating its left argument first.
pub fn and_l() -> Strategy {
    strategy_file(AND_L_STR, "and_l.str").strategy
}

/// Strict conjunction evaluating its right argument first.
pub fn and_r() -> Strategy {
    strategy_file(AND_R_STR, "and_r.str").strategy
}

/// Strict conjunction asking both arguments at once.
pub fn and_p() -> Strategy {
    strategy_file(AND_P_STR, "and_p.str").strategy
}

pub fn lift_corpus() -> Vec<StrategyFile> {
    LIFT_STRS.iter().map(|(name, text)| strategy_file(text, name)).collect()
}

/// Every strategy fixture with its file name.
pub fn all_strategy_files() -> Vec<(&'static str, StrategyFile)> {
    let mut out = vec![
        ("sigma.str", strategy_file(SIGMA_STR, "sigma.str")),
        ("independent.str", strategy_file(INDEPENDENT_STR, "independent.str")),
        ("and_l.str", strategy_file(AND_L_STR, "and_l.str")),
        ("and_r.str", strategy_file(AND_R_STR, "and_r.str")),
        ("and_p.str", strategy_file(AND_P_STR, "and_p.str")),
    ];
    for (name, text) in LIFT_STRS {
        out.push((name, strategy_file(text, name)));
    }
    out
}

/// Every fixture game: the boolean game, its square, the conjunction game
/// and the games of the lift corpus.
pub fn all_games() -> Vec<(String, Game)> {
    let mut out = vec![
        ("B".to_string(), boolean_game()),
        ("B * B".to_string(), bb_game()),
        ("(B * B) -o B".to_string(), and_game()),
    ];
    for f in lift_corpus() {
        let key = f.formula.to_string();
        if !out.iter().any(|(k, _)| *k == key) {
            out.push((key, f.strategy.game().clone()));
        }
    }
    out
}

pub fn no_cube() -> AgFile {
    syntax::parse_async_graph(NO_CUBE_AG, "no-cube.ag").expect("no-cube.ag")
}

pub fn cube() -> AsyncGraph {
    syntax::parse_async_graph(CUBE_AG, "cube.ag").expect("cube.ag").graph
}
