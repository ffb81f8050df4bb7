//! Brute-force reference implementations.
//!
//! Everything here trades speed for obviousness: matches are decided by
//! encoding windows from scratch, witness tables by comparing every shifted
//! overlap element by element. The fast engine is tested against these, so
//! they deliberately share no machinery with it beyond `Scheme::encode`.
//! The relation checkers at the bottom don't even share that: they decide
//! equivalence straight from the definitions (literal equality, parameter
//! bijection, cartesian-tree shape), which pins the encodings themselves.

use crate::encoding::{Scheme, Symbol};

/// Whole-string match decided by encoding both sides from scratch.
pub fn naive_match(x: &[Symbol], y: &[Symbol], scheme: Scheme) -> bool {
    x.len() == y.len() && scheme.encode(x).codes() == scheme.encode(y).codes()
}

/// All 0-based occurrence positions of `pattern` in `text`, each window
/// encoded from scratch.
pub fn naive_occurrences(text: &[Symbol], pattern: &[Symbol], scheme: Scheme) -> Vec<usize> {
    let (n, m) = (text.len(), pattern.len());
    if m == 0 || m > n {
        return Vec::new();
    }
    let p = scheme.encode(pattern);
    (0..=n - m)
        .filter(|&x| scheme.encode(&text[x..x + m]).codes() == p.codes())
        .collect()
}

/// Length of the longest equivalent prefix of `x` and `y`, each prefix pair
/// encoded from scratch.
pub fn naive_lcp(x: &[Symbol], y: &[Symbol], scheme: Scheme) -> usize {
    let max = x.len().min(y.len());
    let mut l = 0;
    while l < max && scheme.encode(&x[..l + 1]).codes() == scheme.encode(&y[..l + 1]).codes() {
        l += 1;
    }
    l
}

/// Tight witness table: entry `a` is 0 when the length-(m−a) prefix and the
/// suffix starting at `a` are equivalent (offset `a` is a period), otherwise
/// the 1-based position of the first differing encoded element. Entry 0 is
/// always 0.
pub fn naive_witness_table(pattern: &[Symbol], scheme: Scheme) -> Vec<usize> {
    let m = pattern.len();
    let mut table = vec![0usize; m];
    for a in 1..m {
        let head = scheme.encode(&pattern[..m - a]);
        let tail = scheme.encode(&pattern[a..]);
        table[a] = head
            .codes()
            .iter()
            .zip(tail.codes())
            .position(|(h, t)| h != t)
            .map_or(0, |i| i + 1);
    }
    table
}

/// Offsets `a` in 1..m whose shifted overlap matches: the period set.
pub fn naive_periods(pattern: &[Symbol], scheme: Scheme) -> Vec<usize> {
    naive_witness_table(pattern, scheme)
        .iter()
        .enumerate()
        .skip(1)
        .filter(|&(_, &w)| w == 0)
        .map(|(a, _)| a)
        .collect()
}

/// Offsets (including 0) where the witness table reports no mismatch.
pub fn naive_zero_offsets(pattern: &[Symbol], scheme: Scheme) -> Vec<usize> {
    naive_witness_table(pattern, scheme)
        .iter()
        .enumerate()
        .filter(|&(_, &w)| w == 0)
        .map(|(a, _)| a)
        .collect()
}

/// Check one witness-table entry without using suffix re-encoding: a nonzero
/// `w` at offset `a` must point at a position where the from-scratch encoding
/// of the suffix differs from the pattern's own encoding, and must lie inside
/// the overlap.
pub fn witness_is_valid(pattern: &[Symbol], scheme: Scheme, a: usize, w: usize) -> bool {
    let m = pattern.len();
    if a == 0 || a >= m || w == 0 || w > m - a {
        return false;
    }
    let head = scheme.encode(pattern);
    let tail = scheme.encode(&pattern[a..]);
    head.code(w - 1) != tail.code(w - 1)
}

/// Literal equality: the relation behind `Scheme::Exact`.
pub fn exact_equal(x: &[Symbol], y: &[Symbol]) -> bool {
    x == y
}

/// Parameterized equality straight from the definition: constants must agree
/// literally, and some bijection on parameter symbols must map one string
/// onto the other.
pub fn param_bijection_match(x: &[Symbol], y: &[Symbol]) -> bool {
    if x.len() != y.len() {
        return false;
    }
    let mut fwd: std::collections::HashMap<Symbol, Symbol> = std::collections::HashMap::new();
    let mut bwd: std::collections::HashMap<Symbol, Symbol> = std::collections::HashMap::new();
    for (&a, &b) in x.iter().zip(y) {
        match (a.is_param(), b.is_param()) {
            (true, true) => {
                if *fwd.entry(a).or_insert(b) != b || *bwd.entry(b).or_insert(a) != a {
                    return false;
                }
            }
            (false, false) => {
                if a != b {
                    return false;
                }
            }
            _ => return false,
        }
    }
    true
}

/// Shape of the cartesian tree over a value sequence: the root is the
/// leftmost minimum, children are the trees of the two remaining sides.
#[derive(Debug, PartialEq, Eq)]
pub enum TreeShape {
    Leaf,
    Node(Box<TreeShape>, Box<TreeShape>),
}

/// Build the cartesian-tree shape by repeatedly splitting at the leftmost
/// minimum. Quadratic and proud of it.
pub fn cartesian_tree_shape(values: &[Symbol]) -> TreeShape {
    if values.is_empty() {
        return TreeShape::Leaf;
    }
    let root = values
        .iter()
        .enumerate()
        .min_by_key(|&(i, v)| (v, i))
        .map(|(i, _)| i)
        .unwrap();
    TreeShape::Node(
        Box::new(cartesian_tree_shape(&values[..root])),
        Box::new(cartesian_tree_shape(&values[root + 1..])),
    )
}

/// Cartesian-tree equality straight from the definition.
pub fn cartesian_tree_match(x: &[Symbol], y: &[Symbol]) -> bool {
    x.len() == y.len() && cartesian_tree_shape(x) == cartesian_tree_shape(y)
}
