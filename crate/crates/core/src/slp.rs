//! Straight-line programs: a grammar where every symbol is either a single
//! character or the concatenation of two earlier symbols.
//!
//! Symbols are addressed by 0-based index internally. The text file format
//! uses 1-based ids:
//!
//! ```text
//! # Fibonacci word "abaababa"
//! 1 = 'b'
//! 2 = 'a'
//! 3 = 2 1
//! 4 = 3 2
//! 5 = 4 3
//! 6 = 5 4
//! root 6
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use thiserror::Error;

/// Index of a statement in an [`Slp`] (0-based).
pub type SymbolId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statement {
    Terminal(char),
    Concat(SymbolId, SymbolId),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SlpError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: statement {id} refers to {target}, which is not an earlier statement")]
    ForwardReference { line: usize, id: u64, target: u64 },
    #[error("line {line}: duplicate statement id {id}")]
    DuplicateId { line: usize, id: u64 },
    #[error("line {line}: statement id {id} is not greater than the previous id {prev}")]
    NonIncreasingId { line: usize, id: u64, prev: u64 },
    #[error("root symbol {0} is not declared")]
    MissingRoot(u64),
    #[error("program has no statements")]
    Empty,
    #[error("text is empty")]
    EmptyText,
    #[error("symbol index {0} out of range")]
    SymbolOutOfRange(SymbolId),
    #[error("expansion has length {0}, over the limit")]
    TooLong(BigUint),
}

/// A validated straight-line program.
///
/// Immutable after construction; the per-symbol lengths are exact
/// arbitrary-precision values since they may grow exponentially with the
/// number of statements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slp {
    statements: Vec<Statement>,
    lengths: Vec<BigUint>,
    root: SymbolId,
}

impl Slp {
    /// Validates `statements` and computes the symbol lengths bottom-up.
    /// `root` defaults to the last statement.
    pub fn new(statements: Vec<Statement>, root: Option<SymbolId>) -> Result<Self, SlpError> {
        if statements.is_empty() {
            return Err(SlpError::Empty);
        }
        let mut lengths: Vec<BigUint> = Vec::with_capacity(statements.len());
        for (r, st) in statements.iter().enumerate() {
            let len = match *st {
                Statement::Terminal(_) => BigUint::one(),
                Statement::Concat(s, t) => {
                    if s >= r || t >= r {
                        return Err(SlpError::ForwardReference {
                            line: r + 1,
                            id: r as u64 + 1,
                            target: s.max(t) as u64 + 1,
                        });
                    }
                    &lengths[s] + &lengths[t]
                }
            };
            lengths.push(len);
        }
        let root = root.unwrap_or(statements.len() - 1);
        if root >= statements.len() {
            return Err(SlpError::MissingRoot(root as u64 + 1));
        }
        Ok(Slp { statements, lengths, root })
    }

    pub fn statements(&self) -> &[Statement] {
        &self.statements
    }

    pub fn statement(&self, sym: SymbolId) -> Statement {
        self.statements[sym]
    }

    /// Number of statements (the compressed size).
    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    pub fn root(&self) -> SymbolId {
        self.root
    }

    /// Uncompressed length of the string derived by `sym`.
    pub fn symbol_length(&self, sym: SymbolId) -> &BigUint {
        &self.lengths[sym]
    }

    /// Uncompressed length of the whole text.
    pub fn text_length(&self) -> &BigUint {
        &self.lengths[self.root]
    }

    /// Symbols that are neither the root nor referenced by any statement.
    pub fn unreferenced_symbols(&self) -> Vec<SymbolId> {
        let mut used = vec![false; self.statements.len()];
        used[self.root] = true;
        for st in &self.statements {
            if let Statement::Concat(s, t) = *st {
                used[s] = true;
                used[t] = true;
            }
        }
        used.iter().enumerate().filter(|(_, &u)| !u).map(|(i, _)| i).collect()
    }

    /// Expands `sym` into its string, refusing when it would be longer than
    /// `max_len` characters.
    pub fn expand(&self, sym: SymbolId, max_len: usize) -> Result<String, SlpError> {
        if sym >= self.statements.len() {
            return Err(SlpError::SymbolOutOfRange(sym));
        }
        let len = &self.lengths[sym];
        if len.to_usize().is_none_or(|l| l > max_len) {
            return Err(SlpError::TooLong(len.clone()));
        }
        let mut out = String::with_capacity(len.to_usize().unwrap_or(0));
        let mut stack = vec![sym];
        while let Some(r) = stack.pop() {
            match self.statements[r] {
                Statement::Terminal(c) => out.push(c),
                Statement::Concat(s, t) => {
                    stack.push(t);
                    stack.push(s);
                }
            }
        }
        Ok(out)
    }

    /// Builds an SLP for `text` by balanced pairing: one terminal per
    /// distinct character, then adjacent symbols are paired level by level
    /// (an odd trailing symbol is carried up). Identical pairs share a
    /// statement.
    pub fn from_text(text: &str) -> Result<Self, SlpError> {
        let mut statements = Vec::new();
        let mut terminals: HashMap<char, SymbolId> = HashMap::new();
        let mut level: Vec<SymbolId> = text
            .chars()
            .map(|c| {
                *terminals.entry(c).or_insert_with(|| {
                    statements.push(Statement::Terminal(c));
                    statements.len() - 1
                })
            })
            .collect();
        if level.is_empty() {
            return Err(SlpError::EmptyText);
        }
        let mut pairs: HashMap<(SymbolId, SymbolId), SymbolId> = HashMap::new();
        while level.len() > 1 {
            let next = level
                .chunks(2)
                .map(|ch| match *ch {
                    [s, t] => *pairs.entry((s, t)).or_insert_with(|| {
                        statements.push(Statement::Concat(s, t));
                        statements.len() - 1
                    }),
                    [s] => s,
                    _ => unreachable!(),
                })
                .collect();
            level = next;
        }
        Slp::new(statements, Some(level[0]))
    }

    /// Parses the line-oriented text format. See the module docs.
    pub fn parse(src: &str) -> Result<Self, SlpError> {
        let mut statements = Vec::new();
        let mut ids: HashMap<u64, SymbolId> = HashMap::new();
        let mut prev_id: Option<u64> = None;
        let mut root_id: Option<u64> = None;

        for (lineno, raw) in src.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let malformed = |msg: &str| SlpError::Malformed { line: line_no, msg: msg.to_string() };
            if root_id.is_some() {
                return Err(malformed("statement after root declaration"));
            }
            if let Some(rest) = line.strip_prefix("root") {
                if rest.starts_with(|c: char| c.is_whitespace()) {
                    root_id = Some(parse_id(rest.trim()).ok_or_else(|| malformed("bad root id"))?);
                    continue;
                }
            }
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| malformed("expected '<id> = ...'"))?;
            let id = parse_id(lhs.trim()).ok_or_else(|| malformed("bad statement id"))?;
            if ids.contains_key(&id) {
                return Err(SlpError::DuplicateId { line: line_no, id });
            }
            if let Some(prev) = prev_id {
                if id <= prev {
                    return Err(SlpError::NonIncreasingId { line: line_no, id, prev });
                }
            }
            let rhs = rhs.trim();
            let st = if rhs.starts_with('\'') {
                Statement::Terminal(parse_char_literal(rhs).ok_or_else(|| malformed("bad character literal"))?)
            } else {
                let mut parts = rhs.split_whitespace();
                let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(malformed("expected two symbol ids or a quoted character"));
                };
                let a = parse_id(a).ok_or_else(|| malformed("bad symbol id"))?;
                let b = parse_id(b).ok_or_else(|| malformed("bad symbol id"))?;
                let lookup =
                    |x: u64| ids.get(&x).copied().ok_or(SlpError::ForwardReference { line: line_no, id, target: x });
                Statement::Concat(lookup(a)?, lookup(b)?)
            };
            ids.insert(id, statements.len());
            statements.push(st);
            prev_id = Some(id);
        }

        if statements.is_empty() {
            return Err(SlpError::Empty);
        }
        let root = match root_id {
            Some(r) => Some(*ids.get(&r).ok_or(SlpError::MissingRoot(r))?),
            None => None,
        };
        let slp = Slp::new(statements, root)?;
        let unused = slp.unreferenced_symbols();
        if !unused.is_empty() {
            log::warn!("{} unreferenced statement(s), first is {}", unused.len(), unused[0] + 1);
        }
        Ok(slp)
    }

    /// Canonical text form: ids `1..=len`, one statement per line, explicit
    /// root line.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (r, st) in self.statements.iter().enumerate() {
            match *st {
                Statement::Terminal(c) => {
                    let _ = writeln!(out, "{} = '{}'", r + 1, escape_char(c));
                }
                Statement::Concat(s, t) => {
                    let _ = writeln!(out, "{} = {} {}", r + 1, s + 1, t + 1);
                }
            }
        }
        let _ = writeln!(out, "root {}", self.root + 1);
        out
    }
}

fn parse_id(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok().filter(|&v| v > 0)
}

fn parse_char_literal(s: &str) -> Option<char> {
    let inner = s.strip_prefix('\'')?.strip_suffix('\'')?;
    let mut chars = inner.chars();
    let c = match chars.next()? {
        '\\' => match chars.next()? {
            'n' => '\n',
            't' => '\t',
            'r' => '\r',
            '\\' => '\\',
            '\'' => '\'',
            'u' => {
                let rest: String = chars.by_ref().collect();
                let hex = rest.strip_prefix('{')?.strip_suffix('}')?;
                return char::from_u32(u32::from_str_radix(hex, 16).ok()?);
            }
            _ => return None,
        },
        c => c,
    };
    if chars.next().is_some() {
        return None;
    }
    Some(c)
}

fn escape_char(c: char) -> String {
    match c {
        '\n' => "\\n".into(),
        '\t' => "\\t".into(),
        '\r' => "\\r".into(),
        '\\' => "\\\\".into(),
        '\'' => "\\'".into(),
        c if c.is_control() => format!("\\u{{{:x}}}", c as u32),
        c => c.to_string(),
    }
}
