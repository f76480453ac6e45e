//! Line-oriented text formats: event structures (`.es`), environments
//! (`.env`), strategies (`.str`) and raw asynchronous graphs (`.ag`).
//!
//! Blank lines and lines whose first non-blank character is `#` are
//! ignored everywhere.

mod ag;
mod env;
mod es;
mod strategy;

pub use ag::{parse_async_graph, print_async_graph, AgFile};
pub use env::{parse_env, print_env, EnvDef, EnvFile};
pub use es::{parse_event_structure, print_event_structure};
pub use strategy::{parse_strategy, print_strategy, StrategyFile};

use crate::error::{Error, SourceSpan};

#[derive(Clone, Copy, Debug)]
pub(crate) struct Word<'a> {
    pub text: &'a str,
    /// 1-based, in characters.
    pub column: usize,
}

pub(crate) struct Line<'a> {
    pub file: &'a str,
    pub number: usize,
    pub text: &'a str,
}

impl<'a> Line<'a> {
    pub fn words(&self) -> Vec<Word<'a>> {
        let mut out = Vec::new();
        let mut start = None;
        let mut col = 0;
        let mut start_col = 0;
        for (i, c) in self.text.char_indices() {
            col += 1;
            if c.is_whitespace() {
                if let Some(s) = start.take() {
                    out.push(Word { text: &self.text[s..i], column: start_col });
                }
            } else if start.is_none() {
                start = Some(i);
                start_col = col;
            }
        }
        if let Some(s) = start {
            out.push(Word { text: &self.text[s..], column: start_col });
        }
        out
    }

    pub fn span(&self, column: usize, length: usize) -> SourceSpan {
        SourceSpan { file: self.file.to_string(), line: self.number, column, length }
    }

    pub fn span_of(&self, w: &Word) -> SourceSpan {
        self.span(w.column, w.text.chars().count())
    }

    pub fn error(&self, w: Option<&Word>, message: impl Into<String>) -> Error {
        let span = match w {
            Some(w) => self.span_of(w),
            None => self.span(self.text.chars().count() + 1, 0),
        };
        Error::Syntax { span, message: message.into() }
    }

    /// Column (1-based, characters) of byte offset `i`.
    pub fn column_at(&self, i: usize) -> usize {
        self.text[..i].chars().count() + 1
    }
}

/// Non-blank, non-comment lines with their 1-based numbers.
pub(crate) fn content_lines<'a>(text: &'a str, file: &'a str) -> impl Iterator<Item = Line<'a>> {
    text.lines().enumerate().filter_map(move |(i, l)| {
        let t = l.trim_start();
        (!t.is_empty() && !t.starts_with('#')).then_some(Line { file, number: i + 1, text: l })
    })
}

/// Checks that `w` is exactly `expected`.
pub(crate) fn expect(line: &Line, words: &[Word], i: usize, expected: &str) -> Result<(), Error> {
    match words.get(i) {
        Some(w) if w.text == expected => Ok(()),
        Some(w) => Err(line.error(Some(w), format!("expected `{expected}`, found `{}`", w.text))),
        None => Err(line.error(None, format!("expected `{expected}`"))),
    }
}

pub(crate) fn word<'a>(line: &Line, words: &[Word<'a>], i: usize, what: &str) -> Result<Word<'a>, Error> {
    words.get(i).copied().ok_or_else(|| line.error(None, format!("expected {what}")))
}

pub(crate) fn at_end(line: &Line, words: &[Word], i: usize) -> Result<(), Error> {
    match words.get(i) {
        None => Ok(()),
        Some(w) => Err(line.error(Some(w), format!("unexpected `{}`", w.text))),
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || matches!(c, '_' | '.' | '\'' | '/'))
}
