//! Recursive-descent parser for LTL bodies and quantifier prefixes.
//!
//! Precedence, loosest first: `<->`, `->`, `|`, `&`, `U`/`R`, then the
//! prefix operators `!`, `X`, `F`, `G`. `->`, `U` and `R` associate to the
//! right, the rest to the left.

use std::collections::HashMap;

use super::Ltl;
use crate::error::{Error, ParseError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    /// A name written directly before `[`.
    AtomName(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Dot,
    Comma,
    Not,
    And,
    Or,
    Implies,
    Iff,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) | Tok::AtomName(w) => format!("`{w}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Not => "`!`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::Implies => "`->`".into(),
            Tok::Iff => "`<->`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let chars: Vec<char> = raw.chars().collect();
        let mut j = 0;
        while j < chars.len() {
            let c = chars[j];
            let column = j + 1;
            let rest: String = chars[j..].iter().take(3).collect();
            let (tok, width) = match c {
                '#' => break,
                c if c.is_whitespace() => {
                    j += 1;
                    continue;
                }
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '[' => (Tok::LBrack, 1),
                ']' => (Tok::RBrack, 1),
                '.' => (Tok::Dot, 1),
                ',' => (Tok::Comma, 1),
                '!' | '¬' => (Tok::Not, 1),
                '&' | '∧' => (Tok::And, 1),
                '|' | '∨' => (Tok::Or, 1),
                '→' => (Tok::Implies, 1),
                '↔' => (Tok::Iff, 1),
                '-' if rest.starts_with("->") => (Tok::Implies, 2),
                '<' if rest.starts_with("<->") => (Tok::Iff, 3),
                c if is_word_char(c) => {
                    let end = (j..chars.len()).find(|&e| !is_word_char(chars[e])).unwrap_or(chars.len());
                    let word: String = chars[j..end].iter().collect();
                    let tok = if chars.get(end) == Some(&'[') {
                        Tok::AtomName(word)
                    } else {
                        Tok::Word(word)
                    };
                    (tok, end - j)
                }
                other => {
                    return Err(ParseError {
                        line,
                        column,
                        expected: vec![],
                        found: format!("character `{other}`"),
                    })
                }
            };
            out.push(Spanned { tok, line, column });
            j += width;
        }
    }
    let (line, column) = match out.last() {
        Some(s) => (s.line, s.column + 1),
        None => (1, 1),
    };
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

const KEYWORDS: [&str; 9] = ["X", "U", "R", "G", "F", "true", "false", "forall", "exists"];

fn expected_formula() -> Vec<String> {
    ["`!`", "`(`", "`F`", "`G`", "`X`", "`false`", "`true`", "atom"]
        .map(String::from)
        .to_vec()
}

/// Maps a trace-variable name to its index.
pub(crate) type Resolver<'a> = dyn FnMut(&str) -> Result<usize> + 'a;

pub(crate) struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Parser> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<String>) -> Error {
        let s = &self.toks[self.pos];
        Error::Parse(ParseError {
            line: s.line,
            column: s.column,
            expected,
            found: s.tok.describe(),
        })
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Word(x) if x == w)
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(vec![tok.describe()]))
        }
    }

    fn name(&mut self, what: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Word(w) if !KEYWORDS.contains(&w.as_str()) => {
                self.bump();
                Ok(w)
            }
            _ => Err(self.error(vec![what.to_string()])),
        }
    }

    /// Reads `forall p.` / `exists p.` groups (a group may list several
    /// comma-separated variables). Returns `(is_forall, name)` pairs.
    pub(crate) fn quantifiers(&mut self) -> Result<Vec<(bool, String)>> {
        let mut out = Vec::new();
        loop {
            let forall = if self.is_word("forall") {
                true
            } else if self.is_word("exists") {
                false
            } else {
                return Ok(out);
            };
            self.bump();
            loop {
                out.push((forall, self.name("trace variable")?));
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(Tok::Dot)?;
        }
    }

    /// Parses a complete formula followed by end of input.
    pub(crate) fn formula(&mut self, resolve: &mut Resolver<'_>) -> Result<Ltl> {
        let f = self.iff(resolve)?;
        if *self.peek() != Tok::End {
            let mut expected: Vec<String> = ["`&`", "`->`", "`<->`", "`R`", "`U`", "`|`", "end of input"]
                .map(String::from)
                .to_vec();
            expected.sort();
            return Err(self.error(expected));
        }
        Ok(f)
    }

    fn iff(&mut self, r: &mut Resolver<'_>) -> Result<Ltl> {
        let mut lhs = self.implies(r)?;
        while *self.peek() == Tok::Iff {
            self.bump();
            lhs = Ltl::iff(lhs, self.implies(r)?);
        }
        Ok(lhs)
    }

    fn implies(&mut self, r: &mut Resolver<'_>) -> Result<Ltl> {
        let lhs = self.or(r)?;
        if *self.peek() == Tok::Implies {
            self.bump();
            return Ok(Ltl::implies(lhs, self.implies(r)?));
        }
        Ok(lhs)
    }

    fn or(&mut self, r: &mut Resolver<'_>) -> Result<Ltl> {
        let mut lhs = self.and(r)?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = Ltl::or(lhs, self.and(r)?);
        }
        Ok(lhs)
    }

    fn and(&mut self, r: &mut Resolver<'_>) -> Result<Ltl> {
        let mut lhs = self.binary_temporal(r)?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = Ltl::and(lhs, self.binary_temporal(r)?);
        }
        Ok(lhs)
    }

    fn binary_temporal(&mut self, r: &mut Resolver<'_>) -> Result<Ltl> {
        let lhs = self.unary(r)?;
        if self.is_word("U") {
            self.bump();
            return Ok(Ltl::until(lhs, self.binary_temporal(r)?));
        }
        if self.is_word("R") {
            self.bump();
            return Ok(Ltl::release(lhs, self.binary_temporal(r)?));
        }
        Ok(lhs)
    }

    fn unary(&mut self, r: &mut Resolver<'_>) -> Result<Ltl> {
        match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Ok(Ltl::not(self.unary(r)?))
            }
            Tok::Word(w) if w == "X" => {
                self.bump();
                Ok(Ltl::next(self.unary(r)?))
            }
            Tok::Word(w) if w == "G" => {
                self.bump();
                Ok(Ltl::globally(self.unary(r)?))
            }
            Tok::Word(w) if w == "F" => {
                self.bump();
                Ok(Ltl::finally(self.unary(r)?))
            }
            _ => self.primary(r),
        }
    }

    fn primary(&mut self, r: &mut Resolver<'_>) -> Result<Ltl> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.iff(r)?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Word(w) if w == "true" => {
                self.bump();
                Ok(Ltl::True)
            }
            Tok::Word(w) if w == "false" => {
                self.bump();
                Ok(Ltl::False)
            }
            Tok::AtomName(prop) => {
                self.bump();
                self.expect(Tok::LBrack)?;
                let var = match self.peek().clone() {
                    Tok::Word(v) => {
                        self.bump();
                        v
                    }
                    _ => return Err(self.error(vec!["trace variable".into()])),
                };
                self.expect(Tok::RBrack)?;
                Ok(Ltl::atom(prop, r(&var)?))
            }
            _ => Err(self.error(expected_formula())),
        }
    }
}

/// Parses a standalone LTL body. Numeric trace variables denote their
/// index; other names are numbered by first appearance.
pub fn parse_ltl(text: &str) -> Result<Ltl> {
    let mut named: HashMap<String, usize> = HashMap::new();
    let mut numeric_seen = false;
    let mut resolve = |v: &str| -> Result<usize> {
        if let Ok(i) = v.parse::<usize>() {
            numeric_seen = true;
            return Ok(i);
        }
        let next = named.len();
        Ok(*named.entry(v.to_string()).or_insert(next))
    };
    let f = Parser::new(text)?.formula(&mut resolve)?;
    if numeric_seen && !named.is_empty() {
        return Err(Error::Format(
            "trace variables mix numeric indices and names".into(),
        ));
    }
    Ok(f)
}
