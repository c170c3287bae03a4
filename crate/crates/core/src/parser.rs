//! Line-oriented KB text format.
//!
//! ```text
//! concept := IDENT | top | bot | not concept | ( concept and concept )
//!          | ( concept or concept ) | exists IDENT . concept | forall IDENT . concept
//! axiom   := concept => concept | T( concept ) => concept
//! abox    := concept ( IDENT ) | T( concept ) ( IDENT ) | IDENT ( IDENT , IDENT )
//! ```
//!
//! `#` starts a comment. Inside parentheses, `and`/`or` chains without extra
//! grouping are accepted (`and` binds tighter), and the symbols `¬ ⊓ ⊔ ⊤ ⊥ ⊑`
//! may stand in for their keywords.

use thiserror::Error;

use crate::concept::{Concept, Name};
use crate::kb::{Assertion, Axiom, KnowledgeBase};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Top,
    Bot,
    Not,
    And,
    Or,
    Exists,
    Forall,
    /// `T(`: the typicality operator with its opening parenthesis.
    Typical,
    LParen,
    RParen,
    Dot,
    Comma,
    Arrow,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Top => "`top`".into(),
            Tok::Bot => "`bot`".into(),
            Tok::Not => "`not`".into(),
            Tok::And => "`and`".into(),
            Tok::Or => "`or`".into(),
            Tok::Exists => "`exists`".into(),
            Tok::Forall => "`forall`".into(),
            Tok::Typical => "`T(`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Arrow => "`=>`".into(),
        }
    }
}

struct Lexer<'a> {
    line: usize,
    chars: std::iter::Peekable<std::iter::Enumerate<std::str::Chars<'a>>>,
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

impl<'a> Lexer<'a> {
    fn tokenize(line: usize, text: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer {
            line,
            chars: text.chars().enumerate().peekable(),
        };
        let mut out = Vec::new();
        while let Some((i, c)) = lx.chars.next() {
            let col = i + 1;
            let tok = match c {
                '#' => break,
                c if c.is_whitespace() => continue,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '.' => Tok::Dot,
                ',' => Tok::Comma,
                '¬' => Tok::Not,
                '⊓' => Tok::And,
                '⊔' => Tok::Or,
                '⊤' => Tok::Top,
                '⊥' => Tok::Bot,
                '⊑' => Tok::Arrow,
                '∃' => Tok::Exists,
                '∀' => Tok::Forall,
                '=' => match lx.chars.next() {
                    Some((_, '>')) => Tok::Arrow,
                    _ => return Err(lx.error(col, "expected `=>`")),
                },
                c if is_ident_char(c) => {
                    let mut word = String::from(c);
                    while let Some(&(_, n)) = lx.chars.peek() {
                        if !is_ident_char(n) {
                            break;
                        }
                        word.push(n);
                        lx.chars.next();
                    }
                    match word.as_str() {
                        "top" => Tok::Top,
                        "bot" => Tok::Bot,
                        "not" => Tok::Not,
                        "and" => Tok::And,
                        "or" => Tok::Or,
                        "exists" => Tok::Exists,
                        "forall" => Tok::Forall,
                        "T" if matches!(lx.chars.peek(), Some((_, '('))) => {
                            lx.chars.next();
                            Tok::Typical
                        }
                        _ => Tok::Ident(word),
                    }
                }
                other => return Err(lx.error(col, &format!("unexpected character `{other}`"))),
            };
            out.push((tok, col));
        }
        Ok(out)
    }

    fn error(&self, column: usize, message: &str) -> ParseError {
        ParseError {
            line: self.line,
            column,
            message: message.to_string(),
        }
    }
}

enum Statement {
    Axiom(Axiom),
    Assertion(Assertion),
}

struct LineParser {
    line: usize,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl LineParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.col(),
            message: message.into(),
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error(format!("expected {expected}, found {}", t.describe())),
            None => self.error(format!("expected {expected}, found end of line")),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&want.describe()))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn unary(&mut self) -> Result<Concept, ParseError> {
        match self.peek() {
            Some(Tok::Ident(_)) => Ok(Concept::atom(&self.ident()?)),
            Some(Tok::Top) => {
                self.bump();
                Ok(Concept::Top)
            }
            Some(Tok::Bot) => {
                self.bump();
                Ok(Concept::Bottom)
            }
            Some(Tok::Not) => {
                self.bump();
                Ok(Concept::not(self.unary()?))
            }
            Some(Tok::Exists) | Some(Tok::Forall) => {
                let universal = self.bump() == Some(Tok::Forall);
                let role = self.ident()?;
                self.expect(Tok::Dot)?;
                let filler = self.unary()?;
                Ok(if universal {
                    Concept::forall(&role, filler)
                } else {
                    Concept::exists(&role, filler)
                })
            }
            Some(Tok::LParen) => {
                self.bump();
                let c = self.or_chain()?;
                self.expect(Tok::RParen)?;
                Ok(c)
            }
            Some(Tok::Typical) => Err(self.error(
                "typicality operator `T` may only wrap a whole axiom left-hand side or assertion head",
            )),
            _ => Err(self.unexpected("a concept")),
        }
    }

    fn and_chain(&mut self) -> Result<Concept, ParseError> {
        let mut c = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.bump();
            c = Concept::and(c, self.unary()?);
        }
        Ok(c)
    }

    fn or_chain(&mut self) -> Result<Concept, ParseError> {
        let mut c = self.and_chain()?;
        while self.peek() == Some(&Tok::Or) {
            self.bump();
            c = Concept::or(c, self.and_chain()?);
        }
        Ok(c)
    }

    /// A top-level concept: a single unary form, so that `A(x)` stays an
    /// assertion and binary connectives need their grouping parentheses.
    fn concept(&mut self) -> Result<Concept, ParseError> {
        let c = self.unary()?;
        if matches!(self.peek(), Some(Tok::And) | Some(Tok::Or)) {
            return Err(self.error("binary `and`/`or` must be parenthesized"));
        }
        Ok(c)
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let (head, typical) = if self.peek() == Some(&Tok::Typical) {
            self.bump();
            let c = self.or_chain()?;
            self.expect(Tok::RParen)?;
            (c, true)
        } else {
            (self.concept()?, false)
        };
        let stmt = match self.peek() {
            Some(Tok::Arrow) => {
                self.bump();
                let rhs = self.concept()?;
                Statement::Axiom(if typical {
                    Axiom::defeasible(head, rhs)
                } else {
                    Axiom::strict(head, rhs)
                })
            }
            Some(Tok::LParen) => {
                self.bump();
                let first = self.ident()?;
                if self.peek() == Some(&Tok::Comma) {
                    let role = match (&head, typical) {
                        (Concept::Atom(r), false) => r.clone(),
                        _ => return Err(self.error("role assertion needs a role name")),
                    };
                    self.bump();
                    let second = self.ident()?;
                    self.expect(Tok::RParen)?;
                    Statement::Assertion(Assertion::Role {
                        role,
                        subject: Name::from(first.as_str()),
                        object: Name::from(second.as_str()),
                    })
                } else {
                    self.expect(Tok::RParen)?;
                    Statement::Assertion(Assertion::Concept {
                        concept: head,
                        individual: Name::from(first.as_str()),
                        typical,
                    })
                }
            }
            _ => return Err(self.unexpected("`=>` or `(`")),
        };
        if !self.at_end() {
            return Err(self.unexpected("end of line"));
        }
        Ok(stmt)
    }
}

fn parse_line(line_no: usize, text: &str) -> Result<Option<Statement>, ParseError> {
    let toks = Lexer::tokenize(line_no, text)?;
    if toks.is_empty() {
        return Ok(None);
    }
    let mut p = LineParser {
        line: line_no,
        toks,
        pos: 0,
        end_col: text.chars().count() + 1,
    };
    p.statement().map(Some)
}

pub fn parse_kb(text: &str) -> Result<KnowledgeBase, ParseError> {
    let mut kb = KnowledgeBase::new();
    for (i, line) in text.lines().enumerate() {
        match parse_line(i + 1, line)? {
            None => {}
            Some(Statement::Axiom(a)) => kb.push(a),
            Some(Statement::Assertion(a)) => kb.abox.push(a),
        }
    }
    Ok(kb)
}

/// Parses a single query line (strict or `T(..)` inclusion).
pub fn parse_axiom(text: &str) -> Result<Axiom, ParseError> {
    parse_axiom_at(1, text)
}

pub(crate) fn parse_axiom_at(line: usize, text: &str) -> Result<Axiom, ParseError> {
    match parse_line(line, text)? {
        Some(Statement::Axiom(a)) => Ok(a),
        Some(Statement::Assertion(_)) => Err(ParseError {
            line,
            column: 1,
            message: "expected an inclusion, found an assertion".into(),
        }),
        None => Err(ParseError {
            line,
            column: 1,
            message: "empty query".into(),
        }),
    }
}

/// Parses a query file: one inclusion per non-blank, non-comment line.
/// Each entry keeps its line number and source text; failures are per line.
pub fn parse_queries(text: &str) -> Vec<(usize, String, Result<Axiom, ParseError>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let src = line.split('#').next().unwrap_or("").trim();
            if src.is_empty() {
                None
            } else {
                Some((i + 1, src.to_string(), parse_axiom_at(i + 1, line)))
            }
        })
        .collect()
}
