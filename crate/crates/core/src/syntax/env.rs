use super::es::{es_lines, EsBuilder};
use super::{at_end, content_lines, expect, is_identifier, word};
use crate::error::Result;
use crate::events::EventStructure;
use crate::formula::{interpret, parse_formula_at, Formula};
use crate::games::Env;

#[derive(Clone, Debug)]
pub enum EnvDef {
    Events(EventStructure),
    Formula(Formula),
}

/// Parsed environment: the resulting bindings and the definitions in
/// file order.
#[derive(Clone, Debug)]
pub struct EnvFile {
    pub env: Env,
    pub items: Vec<(String, EnvDef)>,
}

/// ```text
/// game <name> {
///   <event-structure lines>
/// }
/// let <name> = <formula>
/// ```
/// Definitions see `base` and every earlier definition.
pub fn parse_env(text: &str, file: &str, base: &Env) -> Result<EnvFile> {
    let mut env = base.clone();
    let mut items = Vec::new();
    let mut open: Option<(String, EsBuilder)> = None;
    for line in content_lines(text, file) {
        let ws = line.words();
        if let Some((name, builder)) = open.as_mut() {
            if ws.len() == 1 && ws[0].text == "}" {
                let (name, builder) = (std::mem::take(name), std::mem::take(builder));
                let es = builder.finish()?;
                let game = es.game_of().map_err(|e| e.at(line.span(1, 0)))?;
                env.bind(name.clone(), game);
                items.push((name, EnvDef::Events(es)));
                open = None;
            } else {
                builder.line(&line)?;
            }
            continue;
        }
        let head = word(&line, &ws, 0, "a definition")?;
        match head.text {
            "game" => {
                let name = word(&line, &ws, 1, "a game name")?;
                if !is_identifier(name.text) {
                    return Err(line.error(Some(&name), format!("invalid name `{}`", name.text)));
                }
                expect(&line, &ws, 2, "{")?;
                at_end(&line, &ws, 3)?;
                open = Some((name.text.to_string(), EsBuilder::default()));
            }
            "let" => {
                let name = word(&line, &ws, 1, "a name")?;
                if !is_identifier(name.text) {
                    return Err(line.error(Some(&name), format!("invalid name `{}`", name.text)));
                }
                let eq = word(&line, &ws, 2, "`=`")?;
                expect(&line, &ws, 2, "=")?;
                let offset = eq.column; // formula text starts after `=`
                let start = line.text.char_indices().nth(offset).map_or(line.text.len(), |(i, _)| i);
                let formula = parse_formula_at(&line.text[start..], line.file, line.number, offset)?;
                let game = interpret(&formula, &env).map_err(|e| e.at(line.span(offset + 1, 0)))?;
                env.bind(name.text.to_string(), game);
                items.push((name.text.to_string(), EnvDef::Formula(formula)));
            }
            other => return Err(line.error(Some(&head), format!("unknown definition `{other}`"))),
        }
    }
    if let Some((name, _)) = open {
        return Err(crate::error::Error::Syntax {
            span: crate::error::SourceSpan { file: file.to_string(), line: text.lines().count(), column: 1, length: 0 },
            message: format!("unterminated game `{name}`"),
        });
    }
    Ok(EnvFile { env, items })
}

pub fn print_env(items: &[(String, EnvDef)]) -> String {
    let mut out = Vec::new();
    for (name, def) in items {
        match def {
            EnvDef::Events(es) => {
                out.push(format!("game {name} {{"));
                out.extend(es_lines(es, "  "));
                out.push("}".to_string());
            }
            EnvDef::Formula(f) => out.push(format!("let {name} = {f}")),
        }
    }
    let mut s = out.join("\n");
    s.push('\n');
    s
}
