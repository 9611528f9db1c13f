//! Formula text: parser and printer.
//!
//! ```text
//! formula := impl
//! impl    := or ("->" impl)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "~" unary | "[" pattern "]" unary
//!          | "alive" "(" pattern ")" | "dead" "(" pattern ")"
//!          | "true" | "false" | ident | "(" formula ")"
//! pattern := group ("," group)* | <empty>
//! group   := agentword | "{" ident ("," ident)* "}"
//! ```
//!
//! An agent word is one agent name, or, when every agent name is a single
//! character, a juxtaposition of names (`ab` is `{a,b}`).

use std::fmt;

use thiserror::Error;

use crate::agents::{AgentPattern, AgentSet, Universe};
use crate::formula::{Formula, Prop};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at offset {pos}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken { found: String, expected: &'static str },
    UnexpectedEnd { expected: &'static str },
    EmptyGroup,
    UnknownAgent(String),
    Keyword(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "expected {expected}, found {found:?}")
            }
            ParseErrorKind::UnexpectedEnd { expected } => {
                write!(f, "expected {expected}, found end of input")
            }
            ParseErrorKind::EmptyGroup => write!(f, "empty group in agent pattern"),
            ParseErrorKind::UnknownAgent(a) => write!(f, "unknown agent {a:?}"),
            ParseErrorKind::Keyword(k) => write!(f, "{k:?} is a keyword"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
}

impl Tok {
    fn show(&self) -> String {
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::Not => "~".into(),
            Tok::And => "&".into(),
            Tok::Or => "|".into(),
            Tok::Arrow => "->".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::LBracket => "[".into(),
            Tok::RBracket => "]".into(),
            Tok::LBrace => "{".into(),
            Tok::RBrace => "}".into(),
            Tok::Comma => ",".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((pos, c)) = chars.next() {
        let tok = match c {
            c if c.is_whitespace() => continue,
            '~' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            '-' if matches!(chars.peek(), Some((_, '>'))) => {
                chars.next();
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = pos + c.len_utf8();
                while let Some(&(p, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' || d == '\'' {
                        end = p + d.len_utf8();
                        chars.next();
                    } else {
                        break;
                    }
                }
                Tok::Ident(text[pos..end].to_string())
            }
            c => {
                return Err(ParseError {
                    pos,
                    kind: ParseErrorKind::UnexpectedChar(c),
                })
            }
        };
        out.push((pos, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    universe: &'a Universe,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn fail<T>(&self, expected: &'static str) -> Result<T, ParseError> {
        let kind = match self.peek() {
            None => ParseErrorKind::UnexpectedEnd { expected },
            Some(t) => ParseErrorKind::UnexpectedToken {
                found: t.show(),
                expected,
            },
        };
        Err(ParseError {
            pos: self.pos(),
            kind,
        })
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> Result<(), ParseError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            self.fail(expected)
        }
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Or) {
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut f = self.unary()?;
        while self.eat(&Tok::And) {
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Not) => {
                self.at += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::LBracket) => {
                self.at += 1;
                let g = self.pattern(Tok::RBracket)?;
                Ok(Formula::know(g, self.unary()?))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let f = self.implication()?;
                self.expect(Tok::RParen, "\")\"")?;
                Ok(f)
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                match name.as_str() {
                    "true" => Ok(Formula::top()),
                    "false" => Ok(Formula::bot()),
                    "alive" | "dead" => {
                        if !self.eat(&Tok::LParen) {
                            return Err(ParseError {
                                pos,
                                kind: ParseErrorKind::Keyword(name),
                            });
                        }
                        let g = self.pattern(Tok::RParen)?;
                        Ok(if name == "alive" {
                            Formula::alive(g)
                        } else {
                            Formula::dead(&g)
                        })
                    }
                    _ => Ok(Formula::Atom(Prop::new(&name).map_err(|_| ParseError {
                        pos,
                        kind: ParseErrorKind::Keyword(name.clone()),
                    })?)),
                }
            }
            _ => self.fail("a formula"),
        }
    }

    /// Parses groups up to and including `close`.
    fn pattern(&mut self, close: Tok) -> Result<AgentPattern, ParseError> {
        if self.eat(&close) {
            return Ok(AgentPattern::empty());
        }
        let mut groups = Vec::new();
        loop {
            groups.push(self.group(&close)?);
            if self.eat(&close) {
                return Ok(AgentPattern::new(groups));
            }
            self.expect(Tok::Comma, "\",\" or end of pattern")?;
        }
    }

    fn group(&mut self, close: &Tok) -> Result<AgentSet, ParseError> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Ident(word)) => {
                self.at += 1;
                self.agent_word(&word, pos)
            }
            Some(Tok::LBrace) => {
                self.at += 1;
                if self.peek() == Some(&Tok::RBrace) {
                    return Err(ParseError {
                        pos: self.pos(),
                        kind: ParseErrorKind::EmptyGroup,
                    });
                }
                let mut set = AgentSet::EMPTY;
                loop {
                    let pos = self.pos();
                    match self.peek().cloned() {
                        Some(Tok::Ident(name)) => {
                            self.at += 1;
                            let i = self.universe.index(&name).ok_or(ParseError {
                                pos,
                                kind: ParseErrorKind::UnknownAgent(name),
                            })?;
                            set = set.union(AgentSet::single(i));
                        }
                        _ => return self.fail("an agent name"),
                    }
                    if self.eat(&Tok::RBrace) {
                        return Ok(set);
                    }
                    self.expect(Tok::Comma, "\",\" or \"}\"")?;
                }
            }
            Some(t) if t == Tok::Comma || &t == close => Err(ParseError {
                pos,
                kind: ParseErrorKind::EmptyGroup,
            }),
            _ => self.fail("an agent group"),
        }
    }

    fn agent_word(&self, word: &str, pos: usize) -> Result<AgentSet, ParseError> {
        if let Some(i) = self.universe.index(word) {
            return Ok(AgentSet::single(i));
        }
        if !self.universe.single_char() {
            return Err(ParseError {
                pos,
                kind: ParseErrorKind::UnknownAgent(word.to_string()),
            });
        }
        let mut set = AgentSet::EMPTY;
        for (off, c) in word.char_indices() {
            let i = self.universe.index(&c.to_string()).ok_or(ParseError {
                pos: pos + off,
                kind: ParseErrorKind::UnknownAgent(c.to_string()),
            })?;
            set = set.union(AgentSet::single(i));
        }
        Ok(set)
    }
}

/// Parses formula text over the given agents.
pub fn parse_formula(text: &str, universe: &Universe) -> Result<Formula, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: text.len(),
        universe,
    };
    let f = p.implication()?;
    if p.at < p.toks.len() {
        return p.fail("end of input");
    }
    Ok(f)
}

/// Prints a formula, re-sugaring `true`, `false`, `alive`, `|` and `->`.
///
/// The output parses back to the same AST.
pub fn print_formula(f: &Formula, universe: &Universe) -> String {
    let mut out = String::new();
    write_formula(&mut out, f, 0, universe);
    out
}

// Precedence levels: 0 implication, 1 disjunction, 2 conjunction, 3 unary.
fn write_formula(out: &mut String, f: &Formula, level: u8, u: &Universe) {
    let open = |out: &mut String, own: u8| {
        if own < level {
            out.push('(');
        }
    };
    let close = |out: &mut String, own: u8| {
        if own < level {
            out.push(')');
        }
    };
    match f {
        Formula::Atom(p) => out.push_str(p.as_str()),
        f if f.is_bot() => out.push_str("false"),
        Formula::And(a, b) => {
            open(out, 2);
            write_formula(out, a, 2, u);
            out.push_str(" & ");
            write_formula(out, b, 3, u);
            close(out, 2);
        }
        Formula::Know(g, a) => {
            out.push_str(&u.fmt_pattern(g));
            write_formula(out, a, 3, u);
        }
        Formula::Not(inner) => match inner.as_ref() {
            x if x.is_bot() => out.push_str("true"),
            Formula::Know(g, x) if x.is_bot() => {
                out.push_str("alive(");
                out.push_str(&u.fmt_groups(g));
                out.push(')');
            }
            Formula::And(l, r) => match (l.as_ref(), r.as_ref()) {
                // An implication whose antecedent is itself an implication
                // or a disjunction reads better as `->` than as `|`.
                (Formula::Not(a), Formula::Not(b)) if !matches!(a.as_ref(), Formula::And(..)) => {
                    open(out, 1);
                    write_formula(out, a, 1, u);
                    out.push_str(" | ");
                    write_formula(out, b, 2, u);
                    close(out, 1);
                }
                (a, Formula::Not(b)) => {
                    open(out, 0);
                    write_formula(out, a, 1, u);
                    out.push_str(" -> ");
                    write_formula(out, b, 0, u);
                    close(out, 0);
                }
                _ => {
                    out.push('~');
                    write_formula(out, inner, 3, u);
                }
            },
            _ => {
                out.push('~');
                write_formula(out, inner, 3, u);
            }
        },
    }
}

/// Display adapter pairing a formula with its agent universe.
pub struct Shown<'a>(pub &'a Formula, pub &'a Universe);

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self.0, self.1))
    }
}
