//! Formulas of multiplicative linear logic with the two lifting modalities.
//!
//! Surface syntax: atoms `one`, `bot` and identifiers; prefix `up`, `dn`;
//! postfix `^` (dual); infix `*` (tensor), `|` (par), `-o` (linear
//! implication, right-associative). Precedence: unary > `*` > `|` > `-o`.

use std::fmt;

use crate::error::{Error, Result, SourceSpan};
use crate::games::{self, Env, Game, Label, Modality};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    One,
    Bot,
    Var(String),
    Dual(Box<Formula>),
    Tensor(Box<Formula>, Box<Formula>),
    Par(Box<Formula>, Box<Formula>),
    Limp(Box<Formula>, Box<Formula>),
    Up(Box<Formula>),
    Down(Box<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Tensor(Box::new(a), Box::new(b))
    }

    pub fn par(a: Formula, b: Formula) -> Formula {
        Formula::Par(Box::new(a), Box::new(b))
    }

    pub fn limp(a: Formula, b: Formula) -> Formula {
        Formula::Limp(Box::new(a), Box::new(b))
    }

    pub fn up(a: Formula) -> Formula {
        Formula::Up(Box::new(a))
    }

    pub fn down(a: Formula) -> Formula {
        Formula::Down(Box::new(a))
    }

    pub fn dual(a: Formula) -> Formula {
        Formula::Dual(Box::new(a))
    }

    /// True if no identifier occurs (every move comes from a modality).
    pub fn is_mll_lift(&self) -> bool {
        match self {
            Formula::One | Formula::Bot => true,
            Formula::Var(_) => false,
            Formula::Dual(a) | Formula::Up(a) | Formula::Down(a) => a.is_mll_lift(),
            Formula::Tensor(a, b) | Formula::Par(a, b) | Formula::Limp(a, b) => a.is_mll_lift() && b.is_mll_lift(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Limp(..) => 1,
            Formula::Par(..) => 2,
            Formula::Tensor(..) => 3,
            Formula::Up(_) | Formula::Down(_) => 4,
            Formula::Dual(_) => 5,
            _ => 6,
        }
    }
}

impl fmt::Display for Formula {
    /// Canonical form: a binary subformula under a different binary
    /// connective is always parenthesized, even where precedence would
    /// make the parentheses redundant.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(f: &mut fmt::Formatter<'_>, g: &Formula, parens: bool) -> fmt::Result {
            if parens {
                write!(f, "({g})")
            } else {
                write!(f, "{g}")
            }
        }
        let binary = |g: &Formula| matches!(g, Formula::Tensor(..) | Formula::Par(..) | Formula::Limp(..));
        let same = |a: &Formula, b: &Formula| std::mem::discriminant(a) == std::mem::discriminant(b);
        match self {
            Formula::One => f.write_str("one"),
            Formula::Bot => f.write_str("bot"),
            Formula::Var(v) => f.write_str(v),
            Formula::Dual(a) => {
                wrap(f, a, a.precedence() < self.precedence())?;
                f.write_str("^")
            }
            Formula::Up(a) | Formula::Down(a) => {
                f.write_str(if matches!(self, Formula::Up(_)) { "up " } else { "dn " })?;
                wrap(f, a, binary(a))
            }
            Formula::Tensor(a, b) | Formula::Par(a, b) => {
                wrap(f, a, binary(a) && !same(a, self))?;
                f.write_str(if matches!(self, Formula::Tensor(..)) { " * " } else { " | " })?;
                wrap(f, b, binary(b))
            }
            Formula::Limp(a, b) => {
                wrap(f, a, binary(a))?;
                f.write_str(" -o ")?;
                wrap(f, b, binary(b) && !same(b, self))
            }
        }
    }
}

/// Structural interpretation of a formula as a game.
pub fn interpret(formula: &Formula, env: &Env) -> Result<Game> {
    Ok(match formula {
        Formula::One | Formula::Bot => Game::empty(),
        Formula::Var(v) => env.get(v).ok_or_else(|| Error::Unbound(v.clone()))?.as_ref().clone(),
        Formula::Dual(a) => games::dual(&interpret(a, env)?),
        Formula::Tensor(a, b) => games::product(&interpret(a, env)?, &interpret(b, env)?, Label::Tensor)?,
        Formula::Par(a, b) => games::product(&interpret(a, env)?, &interpret(b, env)?, Label::Par)?,
        Formula::Limp(a, b) => games::linear_implication(&interpret(a, env)?, &interpret(b, env)?)?,
        Formula::Up(a) => games::lift(&interpret(a, env)?, Modality::Up)?,
        Formula::Down(a) => games::lift(&interpret(a, env)?, Modality::Down)?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Star,
    Bar,
    Lolli,
    Caret,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    file: &'a str,
    line: usize,
    column_offset: usize,
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &str, file: &'a str, line: usize, column_offset: usize) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    i += 1;
                    continue;
                }
                '*' => toks.push((Tok::Star, col, 1)),
                '|' => toks.push((Tok::Bar, col, 1)),
                '^' => toks.push((Tok::Caret, col, 1)),
                '(' => toks.push((Tok::LParen, col, 1)),
                ')' => toks.push((Tok::RParen, col, 1)),
                '-' if chars.get(i + 1) == Some(&'o') => {
                    toks.push((Tok::Lolli, col, 2));
                    i += 2;
                    continue;
                }
                c if c.is_alphanumeric() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    toks.push((Tok::Ident(word), col, i - start));
                    continue;
                }
                other => {
                    return Err(Error::Syntax {
                        span: SourceSpan { file: file.to_string(), line, column: col + column_offset, length: 1 },
                        message: format!("unexpected character `{other}`"),
                    })
                }
            }
            i += 1;
        }
        toks.push((Tok::End, chars.len() + 1, 0));
        Ok(Lexer { file, line, column_offset, toks, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: &str) -> Error {
        let (tok, col, len) = &self.toks[self.pos];
        let found = match tok {
            Tok::End => "end of input".to_string(),
            Tok::Ident(s) => format!("`{s}`"),
            other => format!("{other:?}"),
        };
        Error::Syntax {
            span: SourceSpan {
                file: self.file.to_string(),
                line: self.line,
                column: col + self.column_offset,
                length: *len,
            },
            message: format!("{message}, found {found}"),
        }
    }

    fn limp(&mut self) -> Result<Formula> {
        let lhs = self.par()?;
        if *self.peek() == Tok::Lolli {
            self.bump();
            let rhs = self.limp()?;
            return Ok(Formula::limp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn par(&mut self) -> Result<Formula> {
        let mut lhs = self.tensor()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            lhs = Formula::par(lhs, self.tensor()?);
        }
        Ok(lhs)
    }

    fn tensor(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            lhs = Formula::tensor(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Ident(w) if w == "up" => {
                self.bump();
                Ok(Formula::up(self.unary()?))
            }
            Tok::Ident(w) if w == "dn" => {
                self.bump();
                Ok(Formula::down(self.unary()?))
            }
            _ => self.postfix(),
        }
    }

    fn postfix(&mut self) -> Result<Formula> {
        let mut f = self.atom()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            f = Formula::dual(f);
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Ident(w) => {
                self.bump();
                Ok(match w.as_str() {
                    "one" => Formula::One,
                    "bot" => Formula::Bot,
                    _ => Formula::Var(w),
                })
            }
            Tok::LParen => {
                self.bump();
                let f = self.limp()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("expected `)`"));
                }
                self.bump();
                Ok(f)
            }
            _ => Err(self.error("expected a formula")),
        }
    }
}

/// Parses a formula. Spans are reported relative to `line`/`column_offset`
/// so embedded formulas point into their enclosing file.
pub fn parse_formula_at(text: &str, file: &str, line: usize, column_offset: usize) -> Result<Formula> {
    let mut lx = Lexer::new(text, file, line, column_offset)?;
    let f = lx.limp()?;
    if *lx.peek() != Tok::End {
        return Err(lx.error("unexpected trailing input"));
    }
    Ok(f)
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    parse_formula_at(text, "<formula>", 1, 0)
}
