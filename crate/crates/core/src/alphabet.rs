//! Product alphabets `(2^AP)^k` and the letters and words over them.
//!
//! A component of a letter is an AP subset stored as a bitmask, bit `j`
//! standing for `aps[j]`. Letters are numbered in the canonical order:
//! positions compared left to right, each position compared as an unsigned
//! bitvector. Every tie-break in the crate goes through this numbering.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported letter universe.
pub const MAX_UNIVERSE: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    aps: Arc<[String]>,
    arity: usize,
}

/// One letter of a product alphabet: `arity` many AP subsets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(pub Vec<u32>);

/// A finite word over a product alphabet.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

pub(crate) fn valid_ap_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(aps: &[S], arity: usize) -> Result<Self> {
        let aps: Vec<String> = aps.iter().map(|s| s.as_ref().to_string()).collect();
        Self::from_shared(aps.into(), arity)
    }

    pub fn from_shared(aps: Arc<[String]>, arity: usize) -> Result<Self> {
        if arity == 0 {
            return Err(Error::AlphabetMismatch("arity must be positive".into()));
        }
        for (i, ap) in aps.iter().enumerate() {
            if !valid_ap_name(ap) {
                return Err(Error::AlphabetMismatch(format!("invalid proposition name `{ap}`")));
            }
            if aps[..i].contains(ap) {
                return Err(Error::AlphabetMismatch(format!("duplicate proposition `{ap}`")));
            }
        }
        let bits = aps.len() * arity;
        if bits > 16 || (1usize << bits) > MAX_UNIVERSE {
            return Err(Error::AlphabetMismatch(format!(
                "letter universe 2^{bits} is too large"
            )));
        }
        Ok(Alphabet { aps, arity })
    }

    pub fn aps(&self) -> &[String] {
        &self.aps
    }

    pub fn shared_aps(&self) -> &Arc<[String]> {
        &self.aps
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Same propositions, different arity.
    pub fn with_arity(&self, arity: usize) -> Result<Alphabet> {
        Alphabet::from_shared(self.aps.clone(), arity)
    }

    /// Number of distinct AP subsets, i.e. `2^|aps|`.
    pub fn base(&self) -> usize {
        1 << self.aps.len()
    }

    /// Number of letters, `(2^|aps|)^arity`.
    pub fn size(&self) -> usize {
        self.base().pow(self.arity as u32)
    }

    pub fn same_signature(&self, other: &Alphabet) -> bool {
        self.aps == other.aps
    }

    pub fn index(&self, letter: &Letter) -> Result<usize> {
        if letter.0.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: letter.0.len(),
            });
        }
        let base = self.base();
        let mut idx = 0;
        for &c in &letter.0 {
            if c as usize >= base {
                return Err(Error::AlphabetMismatch(format!(
                    "letter component {c:#b} mentions an undeclared proposition"
                )));
            }
            idx = idx * base + c as usize;
        }
        Ok(idx)
    }

    pub fn letter(&self, index: usize) -> Letter {
        debug_assert!(index < self.size());
        Letter(self.components(index))
    }

    pub(crate) fn components(&self, mut index: usize) -> Vec<u32> {
        let base = self.base();
        let mut parts = vec![0u32; self.arity];
        for slot in parts.iter_mut().rev() {
            *slot = (index % base) as u32;
            index /= base;
        }
        parts
    }

    pub(crate) fn index_of_components(&self, parts: &[u32]) -> usize {
        let base = self.base();
        parts.iter().fold(0, |acc, &c| acc * base + c as usize)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.size()).map(|i| self.letter(i))
    }

    pub fn word_indices(&self, word: &Word) -> Result<Vec<usize>> {
        word.0.iter().map(|l| self.index(l)).collect()
    }

    pub fn word_from_indices(&self, indices: &[usize]) -> Word {
        Word(indices.iter().map(|&i| self.letter(i)).collect())
    }

    pub fn format_set(&self, mask: u32) -> String {
        format_set(&self.aps, mask)
    }

    pub fn format_letter(&self, letter: &Letter) -> String {
        let parts: Vec<String> = letter.0.iter().map(|&m| self.format_set(m)).collect();
        format!("({})", parts.join(","))
    }

    pub fn format_word(&self, word: &Word) -> String {
        if word.0.is_empty() {
            return "ε".to_string();
        }
        word.0.iter().map(|l| self.format_letter(l)).collect()
    }

    /// Parses `({a},{})`-style letters.
    pub fn parse_letter(&self, text: &str) -> Result<Letter> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| Error::Format(format!("letter `{text}` must be parenthesized")))?;
        let groups = split_groups(inner)?;
        if groups.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                got: groups.len(),
            });
        }
        let parts = groups
            .iter()
            .map(|g| parse_set_body(&self.aps, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(Letter(parts))
    }

    /// Parses a concatenation of letters such as `({a},{a})({},{a})`; `ε` or
    /// an empty string is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() || compact == "ε" || compact == "eps" {
            return Ok(Word::default());
        }
        let mut letters = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let end = rest
                .find(')')
                .ok_or_else(|| Error::Format(format!("unterminated letter in `{text}`")))?;
            letters.push(self.parse_letter(&rest[..=end])?);
            rest = &rest[end + 1..];
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(2^{{{}}})^{}", self.aps.join(","), self.arity)
    }
}

impl Letter {
    pub fn arity(&self) -> usize {
        self.0.len()
    }
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Arity of the letters, `None` for the empty word.
    pub fn arity(&self) -> Option<usize> {
        self.0.first().map(Letter::arity)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend(other.0.iter().cloned());
        Word(letters)
    }
}

pub(crate) fn format_set(aps: &[String], mask: u32) -> String {
    let names: Vec<&str> = aps
        .iter()
        .enumerate()
        .filter(|(j, _)| mask & (1 << j) != 0)
        .map(|(_, n)| n.as_str())
        .collect();
    format!("{{{}}}", names.join(","))
}

/// Splits `{a},{b,c}` into the brace bodies `a` and `b,c`.
fn split_groups(inner: &str) -> Result<Vec<&str>> {
    let mut groups = Vec::new();
    let mut rest = inner;
    loop {
        let body = rest
            .strip_prefix('{')
            .ok_or_else(|| Error::Format(format!("expected `{{` in `{inner}`")))?;
        let close = body
            .find('}')
            .ok_or_else(|| Error::Format(format!("unterminated `{{` in `{inner}`")))?;
        groups.push(&body[..close]);
        rest = &body[close + 1..];
        if rest.is_empty() {
            return Ok(groups);
        }
        rest = rest
            .strip_prefix(',')
            .ok_or_else(|| Error::Format(format!("expected `,` between groups in `{inner}`")))?;
    }
}

pub(crate) fn parse_set_body(aps: &[String], body: &str) -> Result<u32> {
    let mut mask = 0u32;
    for name in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let j = aps
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::AlphabetMismatch(format!("unknown proposition `{name}`")))?;
        mask |= 1 << j;
    }
    Ok(mask)
}

/// Parses a run of brace groups `{a}{}{a,b}` into bitmasks.
pub(crate) fn parse_set_sequence(aps: &[String], text: &str) -> Result<Vec<u32>> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact == "ε" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('{')
            .ok_or_else(|| Error::Format(format!("expected `{{` in `{text}`")))?;
        let close = body
            .find('}')
            .ok_or_else(|| Error::Format(format!("unterminated `{{` in `{text}`")))?;
        out.push(parse_set_body(aps, &body[..close])?);
        rest = &body[close + 1..];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_letter_order() {
        let sigma = Alphabet::new(&["a"], 2).unwrap();
        let order: Vec<String> = sigma.letters().map(|l| sigma.format_letter(&l)).collect();
        assert_eq!(order, ["({},{})", "({},{a})", "({a},{})", "({a},{a})"]);
    }

    #[test]
    fn index_roundtrip() {
        let sigma = Alphabet::new(&["a", "b"], 3).unwrap();
        for i in 0..sigma.size() {
            assert_eq!(sigma.index(&sigma.letter(i)).unwrap(), i);
        }
    }

    #[test]
    fn parse_letters_and_words() {
        let sigma = Alphabet::new(&["a", "b"], 2).unwrap();
        let l = sigma.parse_letter("( {a, b} , {} )").unwrap();
        assert_eq!(l, Letter(vec![3, 0]));
        let w = sigma.parse_word("({a},{b})({},{})").unwrap();
        assert_eq!(w.len(), 2);
        assert_eq!(sigma.format_word(&w), "({a},{b})({},{})");
        assert!(sigma.parse_letter("({a})").is_err());
        assert!(sigma.parse_letter("({c},{})").is_err());
        assert_eq!(sigma.parse_word("ε").unwrap(), Word::default());
    }

    #[test]
    fn rejects_bad_alphabets() {
        assert!(Alphabet::new(&["a", "a"], 1).is_err());
        assert!(Alphabet::new(&["1a"], 1).is_err());
        assert!(Alphabet::new(&["a"], 0).is_err());
        assert!(Alphabet::new(&["a", "b", "c", "d", "e"], 4).is_err());
    }
}
