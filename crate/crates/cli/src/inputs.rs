use std::path::{Path, PathBuf};

use agw_core::fixtures;
use agw_core::syntax::{self, AgFile, EnvFile, StrategyFile};
use agw_core::{Env, EventStructure};
use anyhow::{bail, Context, Result};

/// Every file named on the command line, parsed. Environments are read
/// first, on top of the built-in binding of `B`.
pub struct Inputs {
    pub env: Env,
    pub envs: Vec<(String, EnvFile)>,
    pub strategies: Vec<(String, StrategyFile)>,
    pub event_structures: Vec<(String, EventStructure)>,
    pub graphs: Vec<(String, AgFile)>,
}

fn extension(p: &Path) -> &str {
    p.extension().and_then(|e| e.to_str()).unwrap_or("")
}

fn read(p: &Path) -> Result<(String, String)> {
    let name = p.display().to_string();
    let text = std::fs::read_to_string(p).with_context(|| format!("cannot read {name}"))?;
    Ok((name, text))
}

pub fn load(extra_envs: &[PathBuf], files: &[PathBuf]) -> Result<Inputs> {
    let mut env = fixtures::builtin_env();
    let mut envs = Vec::new();
    let env_paths = extra_envs.iter().chain(files.iter().filter(|p| extension(p) == "env"));
    for p in env_paths {
        let (name, text) = read(p)?;
        let file = syntax::parse_env(&text, &name, &env)?;
        env.extend(&file.env);
        envs.push((name, file));
    }
    let mut inputs = Inputs { env, envs, strategies: Vec::new(), event_structures: Vec::new(), graphs: Vec::new() };
    for p in files {
        match extension(p) {
            "env" => {}
            "str" => {
                let (name, text) = read(p)?;
                let s = syntax::parse_strategy(&text, &name, &inputs.env)?;
                inputs.strategies.push((name, s));
            }
            "es" => {
                let (name, text) = read(p)?;
                inputs.event_structures.push((name.clone(), syntax::parse_event_structure(&text, &name)?));
            }
            "ag" => {
                let (name, text) = read(p)?;
                inputs.graphs.push((name.clone(), syntax::parse_async_graph(&text, &name)?));
            }
            _ => bail!("{}: unknown file type (expected .env, .es, .str or .ag)", p.display()),
        }
    }
    Ok(inputs)
}

impl Inputs {
    pub fn strategies(&self, n: usize, command: &str) -> Result<Vec<&StrategyFile>> {
        if self.strategies.len() != n {
            bail!("{command} expects {n} strategy file(s), got {}", self.strategies.len());
        }
        Ok(self.strategies.iter().map(|(_, s)| s).collect())
    }
}
