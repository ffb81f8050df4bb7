//! Text search: candidate elimination by dueling, then verification by
//! sweeping, over overlapping text pieces.
//!
//! A piece of length at most 2m−1 carries up to m candidate positions.
//! The dueling stage repeatedly merges adjacent candidate blocks, using the
//! witness table to eliminate one of any two inconsistent candidates without
//! reading more than one re-encoded element, until the survivors are
//! pairwise consistent and still include every true occurrence. The sweeping
//! stage then verifies the survivors against the pattern, sharing verified-
//! prefix information between consistent candidates so that every text
//! position is re-encoded at most once per round.
//!
//! Merging two consistent candidate runs A (all positions below B) works on
//! an implicit grid: cell (i, j) is 0 when A[i] and B[j] are consistent, −1
//! when A[i] wins their duel, +1 when B[j] wins. Zero cells form an
//! upper-right staircase region, every row of −1s lies above every +1, and
//! occurrences force their whole row (column) non-positive (non-negative).
//! Nested binary searches find a row/column split whose prefix of A and
//! suffix of B are mutually consistent and lose no occurrence; each probe
//! costs one witness lookup or one duel.

use std::fmt;

use crate::checks::InvariantChecks;
use crate::encoding::{EncodedString, Scheme, Symbol};
use crate::oracle;
use crate::pram::{LedgerReport, Pram};
use crate::witness::{preprocess, WitnessTable};

/// ⌈log₂ n⌉ for n ≥ 1.
pub fn ceil_log2(n: usize) -> u32 {
    assert!(n >= 1, "ceil_log2 of 0");
    n.next_power_of_two().trailing_zeros()
}

/// Duel between candidate text positions `x < y` that are known to be
/// inconsistent. Probes one re-encoded text element against the pattern;
/// exactly one of the two positions can still be an occurrence, and that one
/// is returned.
pub fn duel(
    pram: &Pram,
    scheme: Scheme,
    text: &EncodedString,
    pattern: &EncodedString,
    table: &WitnessTable,
    x: usize,
    y: usize,
) -> usize {
    let w = table.get(y - x);
    debug_assert!(w != 0, "dueling positions must be inconsistent");
    pram.ledger().charge_serial(1);
    if pram.reencode_serial(scheme, text, y, w - 1) == pattern.code(w - 1) {
        y
    } else {
        x
    }
}

/// Merge consistent candidate runs `a` and `b` (positions ascending, all of
/// `a` below all of `b`). Returns `(keep_a, b_from)`: the merged run is
/// `a[..keep_a]` followed by `b[b_from..]`, pairwise consistent, containing
/// every occurrence present in either input.
fn merge(
    pram: &Pram,
    scheme: Scheme,
    piece: &EncodedString,
    pattern: &EncodedString,
    table: &WitnessTable,
    a: &[usize],
    b: &[usize],
) -> (usize, usize) {
    let (la, lb) = (a.len(), b.len());
    // Rows 1..=la are elements of `a`; virtual row 0 is all-consistent and
    // virtual row la+1 all-losing, so the search brackets stay valid at the
    // edges (an empty side falls out naturally).
    let mut l1 = 0usize;
    let mut r1 = la + 1;
    while r1 - l1 > 1 {
        let m1 = (l1 + r1) / 2;
        let mut observed_b_win = false;
        let (mut l2, mut r2) = (0usize, lb + 1);
        while r2 - l2 > 1 {
            let m2 = (l2 + r2) / 2;
            pram.ledger().charge_serial(1);
            if table.get(b[m2 - 1] - a[m1 - 1]) == 0 {
                r2 = m2;
            } else if duel(pram, scheme, piece, pattern, table, a[m1 - 1], b[m2 - 1]) == a[m1 - 1] {
                l2 = m2;
            } else {
                // A row that loses even once cannot end below an occurrence
                // of `a`'s side; discard it and everything above.
                observed_b_win = true;
                break;
            }
        }
        if observed_b_win {
            r1 = m1;
        } else {
            l1 = m1;
        }
    }
    // First column consistent with row l1; row 0 is consistent with all of
    // `b`, and the virtual column lb+1 with every row.
    let mut lo = 1usize;
    let mut hi = lb + 1;
    while lo < hi {
        let mid = (lo + hi) / 2;
        pram.ledger().charge_serial(1);
        if l1 == 0 || table.get(b[mid - 1] - a[l1 - 1]) == 0 {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    (l1, lo - 1)
}

/// Result of the dueling stage for one piece.
#[derive(Debug)]
pub struct DuelOutcome {
    /// Surviving candidate positions, ascending, pairwise consistent.
    pub survivors: Vec<usize>,
    /// Rounds executed: exactly ⌈log₂ q⌉ for q candidates.
    pub rounds: u32,
}

/// Eliminate inconsistent candidates of one piece. Starts from singleton
/// blocks, then each round merges adjacent blocks (serially per pair, one
/// parallel copy step for the round) and halves the block count.
pub fn dueling_stage(
    pram: &mut Pram,
    checks: &InvariantChecks,
    scheme: Scheme,
    piece: &EncodedString,
    pattern: &EncodedString,
    table: &WitnessTable,
) -> DuelOutcome {
    let m = pattern.len();
    let q = piece.len() - m + 1;
    let mut cur = pram.alloc(q, -1);
    pram.pfor(q, |_, i, out| out.write(cur, i, i as i64));
    let mut lens = vec![1usize; q];
    let mut rounds = 0u32;
    for r in 1..=ceil_log2(q) {
        let bs = 1usize << r;
        let half = bs >> 1;
        let nnew = (q - 1) / bs + 1;
        let next = pram.alloc(q, -1);
        let mut new_lens = vec![0usize; nnew];
        let mut plan: Vec<(usize, usize)> = Vec::new();
        for j in 0..nnew {
            let a_base = j * bs;
            let b_base = a_base + half;
            let la = lens[2 * j];
            let lb = if 2 * j + 1 < lens.len() { lens[2 * j + 1] } else { 0 };
            let a_vals: Vec<usize> = (0..la).map(|t| pram.get(cur, a_base + t) as usize).collect();
            let b_vals: Vec<usize> = (0..lb).map(|t| pram.get(cur, b_base + t) as usize).collect();
            let (keep_a, b_from) = merge(pram, scheme, piece, pattern, table, &a_vals, &b_vals);
            let mut t = 0usize;
            for s in 0..keep_a {
                plan.push((a_base + t, a_base + s));
                t += 1;
            }
            for s in b_from..lb {
                plan.push((a_base + t, b_base + s));
                t += 1;
            }
            new_lens[j] = t;
        }
        pram.pfor(plan.len(), |ctx, t, out| {
            let (dst, src) = plan[t];
            out.write(next, dst, ctx.get(cur, src));
        });
        rounds += 1;
        if checks.is_enabled() {
            let blocks: Vec<Vec<usize>> = (0..nnew)
                .map(|j| (0..new_lens[j]).map(|t| pram.get(next, j * bs + t) as usize).collect())
                .collect();
            checks.dueling_round(r, &blocks, table);
        }
        cur = next;
        lens = new_lens;
    }
    let survivors = (0..lens[0]).map(|t| pram.get(cur, t) as usize).collect();
    DuelOutcome { survivors, rounds }
}

/// Result of the sweeping stage for one piece.
#[derive(Debug)]
pub struct SweepOutcome {
    /// Piece-local occurrence positions, ascending.
    pub occurrences: Vec<usize>,
    /// Rounds executed: exactly ⌈log₂ m⌉ + 1.
    pub rounds: u32,
}

/// Verify pairwise-consistent survivors against the pattern. Block sizes
/// shrink from 2^⌈log₂ m⌉ to 1; each round verifies one leader per block
/// from its recorded prefix onward and shares the outcome with the block's
/// other candidates, so the scanned text regions are pairwise disjoint.
pub fn sweeping_stage(
    pram: &mut Pram,
    checks: &InvariantChecks,
    scheme: Scheme,
    piece: &EncodedString,
    pattern: &EncodedString,
    survivors: &[usize],
) -> SweepOutcome {
    let m = pattern.len();
    let q = piece.len() - m + 1;
    let flags = pram.alloc(q, 0);
    let surv = survivors.to_vec();
    pram.pfor(surv.len(), |_, t, out| out.write(flags, surv[t], 1));
    // verified[i]: the window at i is known to match the pattern's first
    // verified[i] elements (only meaningful while flags[i] is set).
    let verified = pram.alloc(q, 0);
    let mut rounds = 0u32;
    for k in (0..=ceil_log2(m)).rev() {
        let bs = 1usize << k;
        let half = bs >> 1;
        let nblocks = (q - 1) / bs + 1;
        let cand = pram.alloc(nblocks, -1);
        // Leader: the smallest surviving candidate in the block's upper
        // half (at block size 1, every survivor leads its own block).
        pram.pfor(q, |ctx, i, out| {
            if ctx.get(flags, i) == 1 && (k == 0 || (i & (bs - 1)) >= half) {
                out.write(cand, i / bs, i as i64);
            }
        });
        let scan: Vec<(usize, usize, usize)> = (0..nblocks)
            .filter_map(|bidx| {
                let x = pram.get(cand, bidx);
                if x < 0 {
                    return None;
                }
                let x = x as usize;
                let rx = pram.get(verified, x) as usize;
                (rx < m).then_some((bidx, x, rx))
            })
            .collect();
        if checks.is_enabled() {
            let regions: Vec<(usize, usize)> = scan.iter().map(|&(_, x, rx)| (x + rx, x + m)).collect();
            checks.sweep_regions(k, &regions);
        }
        // One flat parallel step scans every leader's unverified window
        // remainder; per block, the earliest mismatching offset wins.
        let mis = pram.alloc(nblocks, 0);
        let mut base = vec![0usize; scan.len() + 1];
        for (t, &(_, _, rx)) in scan.iter().enumerate() {
            base[t + 1] = base[t] + (m - rx);
        }
        let jobs = *base.last().unwrap();
        pram.pfor(jobs, |ctx, flat, out| {
            let t = match base.binary_search(&flat) {
                Ok(i) => i,
                Err(i) => i - 1,
            };
            let (bidx, x, rx) = scan[t];
            let off = rx + (flat - base[t]);
            if ctx.reencode(scheme, piece, x, off) != pattern.code(off) {
                out.write(mis, bidx, (off - rx + 1) as i64);
            }
        });
        pram.pfor(nblocks, |ctx, bidx, out| {
            let x = ctx.get(cand, bidx);
            if x >= 0 {
                let x = x as usize;
                let w = ctx.get(mis, bidx);
                let v = if w == 0 { m as i64 } else { ctx.get(verified, x) + w - 1 };
                out.write(verified, x, v);
            }
        });
        // Candidates covering the leader's mismatch cannot match; candidates
        // past the leader inherit what its verified prefix implies for them.
        pram.pfor(q, |ctx, i, out| {
            let x = ctx.get(cand, i / bs);
            if x < 0 {
                return;
            }
            let x = x as usize;
            let vx = ctx.get(verified, x);
            if i <= x && vx + (x - i) as i64 + 1 <= m as i64 {
                out.write(flags, i, 0);
            }
            if i >= x && ctx.get(flags, i) == 1 {
                let nv = (vx - (i - x) as i64).max(0);
                if nv > ctx.get(verified, i) {
                    out.write(verified, i, nv);
                }
            }
        });
        rounds += 1;
    }
    let occurrences = pram
        .read_all(flags)
        .iter()
        .enumerate()
        .filter(|&(_, &f)| f == 1)
        .map(|(i, _)| i)
        .collect();
    SweepOutcome { occurrences, rounds }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchError {
    EmptyPattern,
    PatternLongerThanText { pattern: usize, text: usize },
}

impl fmt::Display for MatchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchError::EmptyPattern => write!(f, "pattern must not be empty"),
            MatchError::PatternLongerThanText { pattern, text } => {
                write!(f, "pattern length {pattern} exceeds text length {text}")
            }
        }
    }
}

impl std::error::Error for MatchError {}

/// Half-open text intervals `[start, end)` of the pieces searched for a
/// text of length `n` and pattern of length `m`: pieces start at multiples
/// of m and span at most 2m−1 positions, so piece-local candidates cover
/// every text position exactly once.
pub fn piece_bounds(n: usize, m: usize) -> Vec<(usize, usize)> {
    assert!(m >= 1 && m <= n);
    let mut out = Vec::new();
    let mut start = 0;
    while start + m <= n {
        out.push((start, (start + 2 * m - 1).min(n)));
        start += m;
    }
    out
}

/// Per-piece search statistics.
#[derive(Debug, Clone)]
pub struct PieceReport {
    pub start: usize,
    pub len: usize,
    pub candidates: usize,
    pub dueling_rounds: u32,
    pub sweeping_rounds: u32,
    pub ledger: LedgerReport,
}

/// Full search result.
#[derive(Debug, Clone)]
pub struct MatchOutcome {
    /// Occurrence positions in the text, ascending.
    pub occurrences: Vec<usize>,
    pub table: WitnessTable,
    pub preprocess_rounds: u32,
    pub preprocess_ledger: LedgerReport,
    pub pieces: Vec<PieceReport>,
    /// Total machine cost of preprocessing plus all pieces.
    pub ledger: LedgerReport,
}

/// Pattern-matching engine: owns the simulated machine and an invariant
/// monitor, and runs preprocess → duel → sweep per piece.
pub struct Searcher {
    scheme: Scheme,
    pram: Pram,
    checks: InvariantChecks,
}

impl Searcher {
    pub fn new(scheme: Scheme) -> Self {
        Searcher::with_parts(scheme, Pram::new(), InvariantChecks::disabled())
    }

    pub fn with_parts(scheme: Scheme, pram: Pram, checks: InvariantChecks) -> Self {
        Searcher { scheme, pram, checks }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn checks(&self) -> &InvariantChecks {
        &self.checks
    }

    pub fn pram(&self) -> &Pram {
        &self.pram
    }

    /// Find every position of `text` whose m-length window is equivalent to
    /// `pattern`. With checks enabled, dueling rounds additionally verify
    /// survivors against ground truth computed by the quadratic oracle.
    pub fn find_all(&mut self, pattern: &[Symbol], text: &[Symbol]) -> Result<MatchOutcome, MatchError> {
        let m = pattern.len();
        let n = text.len();
        if m == 0 {
            return Err(MatchError::EmptyPattern);
        }
        if m > n {
            return Err(MatchError::PatternLongerThanText { pattern: m, text: n });
        }
        self.pram.reset_memory();
        let at_start = self.pram.ledger().report();
        let p_enc = self.scheme.encode(pattern);
        let pre = preprocess(&mut self.pram, &self.checks, self.scheme, &p_enc);
        let preprocess_ledger = self.pram.ledger().report() - at_start;
        let mut occurrences = Vec::new();
        let mut pieces = Vec::new();
        for (start, end) in piece_bounds(n, m) {
            let before = self.pram.ledger().report();
            let piece_src = &text[start..end];
            let piece_enc = self.scheme.encode(piece_src);
            if self.checks.is_enabled() {
                self.checks
                    .begin_piece(Some(oracle::naive_occurrences(piece_src, pattern, self.scheme)));
            }
            let dueled = dueling_stage(&mut self.pram, &self.checks, self.scheme, &piece_enc, &p_enc, &pre.table);
            let swept = sweeping_stage(
                &mut self.pram,
                &self.checks,
                self.scheme,
                &piece_enc,
                &p_enc,
                &dueled.survivors,
            );
            occurrences.extend(swept.occurrences.iter().map(|&i| start + i));
            pieces.push(PieceReport {
                start,
                len: end - start,
                candidates: end - start - m + 1,
                dueling_rounds: dueled.rounds,
                sweeping_rounds: swept.rounds,
                ledger: self.pram.ledger().report() - before,
            });
        }
        if self.checks.is_enabled() {
            self.checks.begin_piece(None);
        }
        Ok(MatchOutcome {
            occurrences,
            table: pre.table,
            preprocess_rounds: pre.rounds,
            preprocess_ledger,
            pieces,
            ledger: self.pram.ledger().report() - at_start,
        })
    }
}
