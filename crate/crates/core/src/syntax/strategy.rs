use std::collections::HashMap;
use std::sync::Arc;

use super::es::minimal_relations;
use super::{content_lines, expect, is_identifier, word, Line};
use crate::error::{Error, Result};
use crate::events::EventStructure;
use crate::formula::{interpret, parse_formula_at, Formula};
use crate::games::{Env, Game};
use crate::strategies::{Presentation, Strategy};

#[derive(Clone, Debug)]
pub struct StrategyFile {
    pub name: String,
    pub formula: Formula,
    pub strategy: Strategy,
}

struct PendingEvent {
    name: String,
    address: String,
    deps: Vec<(String, usize, usize)>,
    line: usize,
    address_column: usize,
}

/// ```text
/// strategy <name> on <formula>
/// event <id> = <move address> [; deps <id>,<id>,...]
/// conflict <id> # <id>
/// ```
pub fn parse_strategy(text: &str, file: &str, env: &Env) -> Result<StrategyFile> {
    let mut lines = content_lines(text, file);
    let header = lines.next().ok_or_else(|| Error::Syntax {
        span: crate::error::SourceSpan { file: file.to_string(), line: 1, column: 1, length: 0 },
        message: "expected `strategy <name> on <formula>`".into(),
    })?;
    let ws = header.words();
    expect(&header, &ws, 0, "strategy")?;
    let name = word(&header, &ws, 1, "a strategy name")?;
    if !is_identifier(name.text) {
        return Err(header.error(Some(&name), format!("invalid strategy name `{}`", name.text)));
    }
    let on = word(&header, &ws, 2, "`on`")?;
    expect(&header, &ws, 2, "on")?;
    let offset = on.column + 1;
    let start = header.text.char_indices().nth(offset).map_or(header.text.len(), |(i, _)| i);
    let formula = parse_formula_at(&header.text[start..], file, header.number, offset)?;
    let game = Arc::new(interpret(&formula, env).map_err(|e| e.at(header.span(offset + 1, 0)))?);

    let mut events: Vec<PendingEvent> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut conflicts: Vec<[(String, usize, usize); 2]> = Vec::new();
    for line in lines {
        let ws = line.words();
        let head = word(&line, &ws, 0, "a declaration")?;
        match head.text {
            "event" => {
                let ev = parse_event_line(&line)?;
                if index.contains_key(&ev.name) {
                    return Err(line.error(ws.get(1), format!("duplicate event `{}`", ev.name)));
                }
                index.insert(ev.name.clone(), events.len());
                events.push(ev);
            }
            "conflict" => {
                let a = word(&line, &ws, 1, "an event")?;
                expect(&line, &ws, 2, "#")?;
                let b = word(&line, &ws, 3, "an event")?;
                super::at_end(&line, &ws, 4)?;
                conflicts
                    .push([(a.text.to_string(), line.number, a.column), (b.text.to_string(), line.number, b.column)]);
            }
            other => return Err(line.error(Some(&head), format!("unknown declaration `{other}`"))),
        }
    }
    let span = |line: usize, col: usize, len: usize| crate::error::SourceSpan {
        file: file.to_string(),
        line,
        column: col,
        length: len,
    };
    let mut labels = Vec::new();
    let mut evs = Vec::new();
    let mut causes = Vec::new();
    for (i, ev) in events.iter().enumerate() {
        let m = game.move_by_address(&ev.address).ok_or_else(|| {
            Error::UnknownMove(ev.address.clone()).at(span(ev.line, ev.address_column, ev.address.chars().count()))
        })?;
        labels.push(m);
        evs.push((ev.name.clone(), Some(game.polarity(m))));
        for (d, col, len) in &ev.deps {
            let j = *index.get(d).ok_or_else(|| Error::UnknownEvent(d.clone()).at(span(ev.line, *col, *len)))?;
            causes.push((j, i));
        }
    }
    let mut pairs = Vec::new();
    for [a, b] in &conflicts {
        let find = |(n, line, col): &(String, usize, usize)| {
            index.get(n).copied().ok_or_else(|| Error::UnknownEvent(n.clone()).at(span(*line, *col, n.chars().count())))
        };
        pairs.push((find(a)?, find(b)?));
    }
    let structure = EventStructure::new(evs, &causes, &pairs).map_err(|e| e.at(span(header.number, 1, 0)))?;
    let strategy = Strategy::from_presentation(name.text, game, Presentation { events: structure, labels })?;
    Ok(StrategyFile { name: name.text.to_string(), formula, strategy })
}

fn parse_event_line(line: &Line) -> Result<PendingEvent> {
    let (decl, deps_part) = match line.text.find(';') {
        Some(i) => (&line.text[..i], Some(i + 1)),
        None => (line.text, None),
    };
    let decl_line = Line { file: line.file, number: line.number, text: decl };
    let ws = decl_line.words();
    let id = word(&decl_line, &ws, 1, "an event name")?;
    if !is_identifier(id.text) {
        return Err(line.error(Some(&id), format!("invalid event name `{}`", id.text)));
    }
    expect(&decl_line, &ws, 2, "=")?;
    let addr = word(&decl_line, &ws, 3, "a move address")?;
    super::at_end(&decl_line, &ws, 4)?;
    let mut deps = Vec::new();
    if let Some(start) = deps_part {
        let rest = &line.text[start..];
        let trimmed = rest.trim_start();
        let kw_at = start + (rest.len() - trimmed.len());
        if !trimmed.starts_with("deps") {
            let col = line.column_at(kw_at);
            return Err(Error::Syntax { span: line.span(col, 1), message: "expected `deps`".into() });
        }
        let mut at = kw_at + 4;
        for piece in line.text[at..].split(',') {
            let t = piece.trim();
            let lead = piece.len() - piece.trim_start().len();
            let col = line.column_at(at + lead);
            if !is_identifier(t) {
                return Err(Error::Syntax {
                    span: line.span(col, t.chars().count().max(1)),
                    message: "expected an event name".into(),
                });
            }
            deps.push((t.to_string(), col, t.chars().count()));
            at += piece.len() + 1;
        }
    }
    Ok(PendingEvent {
        name: id.text.to_string(),
        address: addr.text.to_string(),
        deps,
        line: line.number,
        address_column: addr.column,
    })
}

/// Canonical text of a presented strategy: immediate dependencies only,
/// minimal conflicts only. Strategies given by plays are printed through
/// their induced events.
pub fn print_strategy(name: &str, formula: &Formula, strategy: &Strategy) -> Result<String> {
    let owned;
    let p = match strategy.presentation() {
        Some(p) => p,
        None => {
            owned = strategy.induced_events()?.presentation();
            &owned
        }
    };
    Ok(print_presentation(name, formula, strategy.game(), p))
}

fn print_presentation(name: &str, formula: &Formula, game: &Game, p: &Presentation) -> String {
    let es = &p.events;
    let (covers, conflicts) = minimal_relations(es);
    let mut out = vec![format!("strategy {name} on {formula}")];
    for (i, e) in es.events().iter().enumerate() {
        let deps: Vec<&str> =
            covers.iter().filter(|&&(_, b)| b == i).map(|&(a, _)| es.events()[a].name.as_str()).collect();
        let mut l = format!("event {} = {}", e.name, game.address(p.labels[i]));
        if !deps.is_empty() {
            l.push_str(&format!(" ; deps {}", deps.join(",")));
        }
        out.push(l);
    }
    for (a, b) in conflicts {
        out.push(format!("conflict {} # {}", es.events()[a].name, es.events()[b].name));
    }
    let mut s = out.join("\n");
    s.push('\n');
    s
}
