//! Equivalence-preserving string encodings.
//!
//! A matching relation ≈ is *substring consistent* when X ≈ Y implies
//! |X| = |Y| and X[i..j] ≈ Y[i..j] for every window. Each such relation
//! supported here is represented by an encoding `f` with three properties:
//!
//! 1. |f(X)| = |X| and f(X)[i] depends only on X[..=i] (prefix consistency),
//! 2. f(X) = f(Y) exactly when X ≈ Y,
//! 3. the encoding of any suffix X[s..] is recoverable *per element* from
//!    f(X) in constant time (`Scheme::reencode`), without rescanning.
//!
//! Property 3 is what the matching engine leans on: dueling and sweeping
//! probe single positions of many shifted windows, and each probe costs one
//! table lookup instead of an O(n) re-encode.
//!
//! Indexing is 0-based throughout: `reencode(e, s, i)` equals
//! `encode(&src[s..]).code(i)`. The classic formulas are written 1-based
//! with suffix start x and offset i; translate with s = x − 1, i = i − 1.

use std::fmt;

/// One input symbol. `Byte` and `Int` always compare literally; `Param`
/// symbols are the renameable class used by parameterized matching.
/// The derived order (variant, then value) is total, which is all the
/// parent-distance encoding needs; numeric input uses `Int`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// A fixed (constant-class) byte.
    Byte(u8),
    /// A parameter-class byte: matches any other parameter under a bijection.
    Param(u8),
    /// A signed integer, for order-based (cartesian-tree) comparisons.
    Int(i64),
}

impl Symbol {
    /// True for symbols of the renameable class.
    pub fn is_param(self) -> bool {
        matches!(self, Symbol::Param(_))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Byte(b) => write!(f, "{}", *b as char),
            Symbol::Param(b) => write!(f, "{}", *b as char),
            Symbol::Int(v) => write!(f, "{v}"),
        }
    }
}

/// Every byte becomes a constant symbol.
pub fn byte_symbols(text: &[u8]) -> Vec<Symbol> {
    text.iter().map(|&b| Symbol::Byte(b)).collect()
}

/// Every byte becomes a parameter symbol.
pub fn param_symbols(text: &[u8]) -> Vec<Symbol> {
    text.iter().map(|&b| Symbol::Param(b)).collect()
}

/// Bytes listed in `constants` stay fixed, the rest are parameters.
pub fn param_symbols_with_constants(text: &[u8], constants: &[u8]) -> Vec<Symbol> {
    text.iter()
        .map(|&b| {
            if constants.contains(&b) {
                Symbol::Byte(b)
            } else {
                Symbol::Param(b)
            }
        })
        .collect()
}

/// Every integer becomes an ordered numeric symbol.
pub fn int_symbols(values: &[i64]) -> Vec<Symbol> {
    values.iter().map(|&v| Symbol::Int(v)).collect()
}

/// One encoded element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Code {
    /// The symbol itself, used where equality is literal.
    Literal(Symbol),
    /// Backward distance to an earlier related position (previous occurrence
    /// of the same parameter, or the nearest smaller-or-equal value).
    /// Always at least 1 and at most the position index.
    Distance(usize),
    /// A parameter with no earlier occurrence.
    Infinity,
    /// A value with no smaller-or-equal value to its left.
    Zero,
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Code::Literal(s) => write!(f, "{s}"),
            Code::Distance(d) => write!(f, "{d}"),
            Code::Infinity => write!(f, "inf"),
            Code::Zero => write!(f, "0"),
        }
    }
}

/// A code sequence plus the source it was computed from. The source is
/// retained because suffix re-encoding must consult the symbol class at the
/// probed position. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedString {
    codes: Vec<Code>,
    source: Vec<Symbol>,
}

impl EncodedString {
    fn new(codes: Vec<Code>, source: Vec<Symbol>) -> Self {
        debug_assert_eq!(codes.len(), source.len());
        EncodedString { codes, source }
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Stored code of the whole string at `i`.
    pub fn code(&self, i: usize) -> Code {
        self.codes[i]
    }

    pub fn codes(&self) -> &[Code] {
        &self.codes
    }

    pub fn source(&self) -> &[Symbol] {
        &self.source
    }
}

/// The supported substring-consistent relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Literal symbol equality.
    Exact,
    /// Equality up to a bijection on parameter symbols; constants fixed.
    Parameterized,
    /// Equal cartesian-tree shape of the value sequences.
    CartesianTree,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Exact, Scheme::Parameterized, Scheme::CartesianTree];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Exact => "exact",
            Scheme::Parameterized => "param",
            Scheme::CartesianTree => "cartesian",
        }
    }

    /// Encode a whole string. Linear scan; cost is charged by the caller as
    /// one parallel step of |src| work, matching how the engine accounts it.
    pub fn encode(self, src: &[Symbol]) -> EncodedString {
        match self {
            Scheme::Exact => encode_exact(src),
            Scheme::Parameterized => prev_encode(src),
            Scheme::CartesianTree => pd_encode(src),
        }
    }

    /// Element `idx` of the encoding of the suffix starting at `start`,
    /// recovered from the stored codes in constant time. Equals
    /// `self.encode(&e.source()[start..]).code(idx)`.
    ///
    /// Callers that account work charge one re-encode per call; see
    /// `StepLedger`. Panics when `start` or `idx` is out of range.
    pub fn reencode(self, e: &EncodedString, start: usize, idx: usize) -> Code {
        self.reencode_probed(e, start, idx).0
    }

    /// `reencode` plus the number of stored codes it inspected, so tests can
    /// pin the constant-time claim.
    pub fn reencode_probed(self, e: &EncodedString, start: usize, idx: usize) -> (Code, u32) {
        let n = e.len();
        assert!(
            start < n && idx < n - start,
            "suffix re-encode out of range: start={start} idx={idx} len={n}"
        );
        match self {
            Scheme::Exact => exact_reencode(e, start, idx),
            Scheme::Parameterized => prev_reencode(e, start, idx),
            Scheme::CartesianTree => pd_reencode(e, start, idx),
        }
    }
}

/// Identity encoding: every position keeps its symbol.
pub fn encode_exact(src: &[Symbol]) -> EncodedString {
    let codes = src.iter().map(|&s| Code::Literal(s)).collect();
    EncodedString::new(codes, src.to_vec())
}

fn exact_reencode(e: &EncodedString, start: usize, idx: usize) -> (Code, u32) {
    // Literal codes are position-independent.
    (e.codes[start + idx], 1)
}

/// Previous-occurrence encoding for parameterized strings: constants stay
/// literal, the first occurrence of a parameter becomes `Infinity`, repeats
/// become the distance to the previous occurrence of the same parameter.
pub fn prev_encode(src: &[Symbol]) -> EncodedString {
    let mut last: std::collections::HashMap<Symbol, usize> = std::collections::HashMap::new();
    let mut codes = Vec::with_capacity(src.len());
    for (i, &s) in src.iter().enumerate() {
        if s.is_param() {
            let code = match last.insert(s, i) {
                Some(j) => Code::Distance(i - j),
                None => Code::Infinity,
            };
            codes.push(code);
        } else {
            codes.push(Code::Literal(s));
        }
    }
    EncodedString::new(codes, src.to_vec())
}

fn prev_reencode(e: &EncodedString, start: usize, idx: usize) -> (Code, u32) {
    let stored = e.codes[start + idx];
    if !e.source[start + idx].is_param() {
        return (stored, 1);
    }
    // A stored distance reaching left of the suffix start means the suffix
    // sees this position as a first occurrence.
    match stored {
        Code::Infinity => (Code::Infinity, 1),
        Code::Distance(d) if d > idx => (Code::Infinity, 1),
        other => (other, 1),
    }
}

/// Parent-distance encoding for cartesian-tree comparisons: distance to the
/// nearest position to the left holding a smaller-or-equal symbol, or `Zero`
/// when there is none. Two sequences share this encoding exactly when their
/// cartesian trees (leftmost minimum at the root) have the same shape.
///
/// Built with a single all-nearest-smaller-values stack scan: linear work,
/// accounted by the engine as one logical parallel step.
pub fn pd_encode(src: &[Symbol]) -> EncodedString {
    let mut stack: Vec<usize> = Vec::new();
    let mut codes = Vec::with_capacity(src.len());
    for (i, &s) in src.iter().enumerate() {
        while let Some(&j) = stack.last() {
            if src[j] > s {
                stack.pop();
            } else {
                break;
            }
        }
        codes.push(match stack.last() {
            Some(&j) => Code::Distance(i - j),
            None => Code::Zero,
        });
        stack.push(i);
    }
    EncodedString::new(codes, src.to_vec())
}

fn pd_reencode(e: &EncodedString, start: usize, idx: usize) -> (Code, u32) {
    // A stored distance reaching left of the suffix start means the suffix
    // sees no smaller-or-equal value before this position.
    match e.codes[start + idx] {
        Code::Distance(d) if d > idx => (Code::Zero, 1),
        other => (other, 1),
    }
}
