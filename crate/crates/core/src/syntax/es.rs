use std::collections::HashMap;

use super::{at_end, content_lines, expect, is_identifier, word, Line};
use crate::error::Result;
use crate::events::EventStructure;
use crate::games::Polarity;

/// Accumulates `event`, `cause` and `conflict` lines.
#[derive(Default)]
pub(crate) struct EsBuilder {
    events: Vec<(String, Option<Polarity>)>,
    index: HashMap<String, usize>,
    causes: Vec<(usize, usize)>,
    conflicts: Vec<(usize, usize)>,
    first_line: Option<(String, usize)>,
}

impl EsBuilder {
    pub fn line(&mut self, line: &Line) -> Result<()> {
        if self.first_line.is_none() {
            self.first_line = Some((line.file.to_string(), line.number));
        }
        let ws = line.words();
        let head = word(line, &ws, 0, "a declaration")?;
        match head.text {
            "event" => {
                let name = word(line, &ws, 1, "an event name")?;
                if !is_identifier(name.text) {
                    return Err(line.error(Some(&name), format!("invalid event name `{}`", name.text)));
                }
                if self.index.contains_key(name.text) {
                    return Err(line.error(Some(&name), format!("duplicate event `{}`", name.text)));
                }
                let polarity = match ws.get(2) {
                    None => None,
                    Some(w) if w.text == "+" => Some(Polarity::Proponent),
                    Some(w) if w.text == "-" => Some(Polarity::Opponent),
                    Some(w) => return Err(line.error(Some(w), "expected polarity `+` or `-`")),
                };
                at_end(line, &ws, 3)?;
                self.index.insert(name.text.to_string(), self.events.len());
                self.events.push((name.text.to_string(), polarity));
            }
            "cause" => {
                let a = self.lookup(line, &word(line, &ws, 1, "an event")?)?;
                expect(line, &ws, 2, "<")?;
                let b = self.lookup(line, &word(line, &ws, 3, "an event")?)?;
                at_end(line, &ws, 4)?;
                self.causes.push((a, b));
            }
            "conflict" => {
                let a = self.lookup(line, &word(line, &ws, 1, "an event")?)?;
                expect(line, &ws, 2, "#")?;
                let b = self.lookup(line, &word(line, &ws, 3, "an event")?)?;
                at_end(line, &ws, 4)?;
                self.conflicts.push((a, b));
            }
            other => return Err(line.error(Some(&head), format!("unknown declaration `{other}`"))),
        }
        Ok(())
    }

    fn lookup(&self, line: &Line, w: &super::Word) -> Result<usize> {
        self.index.get(w.text).copied().ok_or_else(|| line.error(Some(w), format!("unknown event `{}`", w.text)))
    }

    pub fn finish(self) -> Result<EventStructure> {
        let span = self.first_line.clone();
        EventStructure::new(self.events, &self.causes, &self.conflicts).map_err(|e| match span {
            Some((file, line)) => e.at(crate::error::SourceSpan { file, line, column: 1, length: 0 }),
            None => e,
        })
    }
}

pub fn parse_event_structure(text: &str, file: &str) -> Result<EventStructure> {
    let mut b = EsBuilder::default();
    for line in content_lines(text, file) {
        b.line(&line)?;
    }
    b.finish()
}

type Pairs = Vec<(usize, usize)>;

/// Immediate causes and conflicts not inherited through causality.
pub(crate) fn minimal_relations(es: &EventStructure) -> (Pairs, Pairs) {
    let n = es.len();
    let lt = |a: usize, b: usize| a != b && es.leq(a, b);
    let mut covers = Vec::new();
    for b in 0..n {
        for a in 0..n {
            if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                covers.push((a, b));
            }
        }
    }
    let mut conflicts = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if !es.in_conflict(a, b) {
                continue;
            }
            let inherited = (0..n).any(|c| (lt(c, a) && es.in_conflict(c, b)) || (lt(c, b) && es.in_conflict(a, c)));
            if !inherited {
                conflicts.push((a, b));
            }
        }
    }
    (covers, conflicts)
}

pub(crate) fn es_lines(es: &EventStructure, indent: &str) -> Vec<String> {
    let mut out = Vec::new();
    for e in es.events() {
        let pol = match e.polarity {
            Some(Polarity::Proponent) => " +",
            Some(Polarity::Opponent) => " -",
            None => "",
        };
        out.push(format!("{indent}event {}{pol}", e.name));
    }
    let (covers, conflicts) = minimal_relations(es);
    let name = |i: usize| &es.events()[i].name;
    for (a, b) in covers {
        out.push(format!("{indent}cause {} < {}", name(a), name(b)));
    }
    for (a, b) in conflicts {
        out.push(format!("{indent}conflict {} # {}", name(a), name(b)));
    }
    out
}

/// Canonical text: events in order, then immediate causes, then minimal
/// conflicts.
pub fn print_event_structure(es: &EventStructure) -> String {
    let mut s = es_lines(es, "").join("\n");
    s.push('\n');
    s
}
