//! Witness-table construction over the PRAM substrate.
//!
//! For a pattern P of length m, entry `a` of the table settles how P relates
//! to its own copy shifted `a` positions right: 0 means the overlap matches
//! (offset `a` is a period of P under the scheme's relation), a nonzero `w`
//! is a 1-based position where the suffix starting at `a`, re-encoded,
//! differs from P's encoding — proof the overlap cannot match. Witnesses
//! here are always valid but not necessarily the smallest such position.
//!
//! Construction maintains a split of the table into an unfinalized *head*
//! `w[..tail]` and a finalized *tail* `w[tail..]`. Round k keeps the head
//! sparse at granularity 2^k (at most one unresolved zero per 2^k-block,
//! exactly one per full block), settles the single suspected period in the
//! second block exactly, and finalizes every offset the tail grows by —
//! either directly, or by propagating witnesses along residue classes of
//! the suspected period and binary-searching each class's period boundary.
//! The tail grows by at least 2^k per round, so there are at most
//! ⌈log₂ m⌉ + 1 rounds.

use crate::checks::InvariantChecks;
use crate::encoding::{Code, EncodedString, Scheme};
use crate::pram::{Handle, Pram, StepLedger};

/// Finished witness table. Entry 0 is always 0; nonzero entries are 1-based
/// mismatch positions within the shifted overlap. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTable {
    w: Vec<usize>,
}

impl WitnessTable {
    pub fn from_entries(w: Vec<usize>) -> Self {
        let m = w.len();
        assert!(m >= 1 && w[0] == 0, "entry 0 must be 0");
        for (a, &v) in w.iter().enumerate() {
            assert!(v <= m - a, "witness {v} at offset {a} exceeds the overlap");
        }
        WitnessTable { w }
    }

    /// Pattern length.
    pub fn len(&self) -> usize {
        self.w.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a table always covers offset 0
    }

    pub fn get(&self, a: usize) -> usize {
        self.w[a]
    }

    pub fn entries(&self) -> &[usize] {
        &self.w
    }

    /// True when the overlap at offset `a` matches (no witness).
    pub fn is_period(&self, a: usize) -> bool {
        self.w[a] == 0
    }

    /// Offsets with no witness, including 0.
    pub fn zero_offsets(&self) -> Vec<usize> {
        self.w
            .iter()
            .enumerate()
            .filter(|&(_, &v)| v == 0)
            .map(|(a, _)| a)
            .collect()
    }

    /// One `offset<TAB>value` line per entry.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (a, &v) in self.w.iter().enumerate() {
            out.push_str(&format!("{a}\t{v}\n"));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "m": self.w.len(), "w": self.w })
    }
}

/// A read-only window over encoded elements, fed to the comparison step.
/// `stored` views read the precomputed codes for free; `suffix` views
/// recover each element with one charged re-encode.
#[derive(Clone, Copy)]
pub struct CodesView<'a> {
    enc: &'a EncodedString,
    scheme: Scheme,
    start: Option<usize>,
    from: usize,
    len: usize,
}

impl<'a> CodesView<'a> {
    /// Elements `from..from+len` of the string's own encoding.
    pub fn stored(scheme: Scheme, enc: &'a EncodedString, from: usize, len: usize) -> Self {
        assert!(from + len <= enc.len());
        CodesView {
            enc,
            scheme,
            start: None,
            from,
            len,
        }
    }

    /// Elements `from..from+len` of the encoding of the suffix beginning at
    /// `start`, materialized lazily.
    pub fn suffix(scheme: Scheme, enc: &'a EncodedString, start: usize, from: usize, len: usize) -> Self {
        assert!(start <= enc.len() && from + len <= enc.len() - start);
        CodesView {
            enc,
            scheme,
            start: Some(start),
            from,
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn at(&self, ledger: &StepLedger, i: usize) -> Code {
        debug_assert!(i < self.len);
        match self.start {
            None => self.enc.code(self.from + i),
            Some(s) => {
                ledger.charge_reencode();
                self.scheme.reencode(self.enc, s, self.from + i)
            }
        }
    }
}

/// Compare two equal-length element windows in one parallel step. Returns 0
/// when they are equal, otherwise the 1-based position of the first
/// difference — first, because every differing position writes the shared
/// cell and the smallest index wins.
pub fn check_parallel(pram: &mut Pram, x: CodesView<'_>, y: CodesView<'_>) -> usize {
    assert_eq!(x.len(), y.len(), "windows must have equal lengths");
    let out = pram.alloc(1, 0);
    pram.pfor(x.len(), |ctx, i, w| {
        if x.at(ctx.ledger, i) != y.at(ctx.ledger, i) {
            w.write(out, 0, (i + 1) as i64);
        }
    });
    pram.get(out, 0) as usize
}

/// Positions of zero entries of `w` within `lo..=hi`, bucketed by 2^k-block:
/// slot `⌊i/2^k⌋ − ⌊lo/2^k⌋` holds the smallest zero position of its block,
/// or −1. An inverted range yields no slots.
pub struct ZeroSlots {
    h: Handle,
    len: usize,
}

impl ZeroSlots {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, pram: &Pram, slot: usize) -> Option<usize> {
        match pram.get(self.h, slot) {
            v if v >= 0 => Some(v as usize),
            _ => None,
        }
    }

    fn handle(&self) -> Handle {
        self.h
    }
}

/// One parallel step over `lo..=hi`: every zero entry writes its position to
/// its block's slot, smallest position winning. With `expect_sparse`, debug
/// builds verify no block held two zeros; the suspected-period probe cannot
/// promise that (its block may straddle into the finalized tail, where
/// several periods can share a block) and passes `false`.
pub fn get_zeros(pram: &mut Pram, w: Handle, lo: usize, hi: usize, k: u32, expect_sparse: bool) -> ZeroSlots {
    if hi < lo {
        return ZeroSlots {
            h: pram.alloc(0, -1),
            len: 0,
        };
    }
    let bs = 1usize << k;
    let slots = hi / bs - lo / bs + 1;
    let a = pram.alloc(slots, -1);
    let base_slot = lo / bs;
    pram.pfor(hi - lo + 1, |ctx, off, out| {
        let i = lo + off;
        if ctx.get(w, i) == 0 {
            out.write(a, i / bs - base_slot, i as i64);
        }
    });
    if expect_sparse && cfg!(debug_assertions) {
        for slot in 0..slots {
            let s_lo = (base_slot + slot) * bs;
            let zeros = (s_lo.max(lo)..=(s_lo + bs - 1).min(hi))
                .filter(|&i| pram.get(w, i) == 0)
                .count();
            assert!(zeros <= 1, "block at {s_lo} holds {zeros} unresolved zeros");
        }
    }
    ZeroSlots { h: a, len: slots }
}

/// Result of witness preprocessing.
#[derive(Debug)]
pub struct PreprocessOutcome {
    pub table: WitnessTable,
    /// Rounds executed; at most ⌈log₂ m⌉ + 1.
    pub rounds: u32,
}

/// Build the full witness table for `pattern`.
pub fn preprocess(
    pram: &mut Pram,
    checks: &InvariantChecks,
    scheme: Scheme,
    pattern: &EncodedString,
) -> PreprocessOutcome {
    let m = pattern.len();
    assert!(m >= 1, "pattern must be non-empty");
    let w = pram.alloc(m, 0);
    let mut rounds = 0;
    if m > 1 {
        let mut tail = m;
        let mut k = 0u32;
        while (1usize << k) <= tail {
            if checks.is_enabled() {
                checks.preprocess_round(&pram.read_all(w), tail, k, m);
            }
            round(pram, checks, scheme, pattern, w, &mut tail, k);
            k += 1;
            rounds += 1;
        }
    }
    let entries = pram.read_all(w).iter().map(|&v| v as usize).collect();
    PreprocessOutcome {
        table: WitnessTable::from_entries(entries),
        rounds,
    }
}

/// One preprocessing round at block size 2^k.
fn round(
    pram: &mut Pram,
    checks: &InvariantChecks,
    scheme: Scheme,
    pattern: &EncodedString,
    w: Handle,
    tail: &mut usize,
    k: u32,
) {
    let m = pattern.len();
    let bs = 1usize << k;

    // The lone unresolved zero of the second 2^k-block, if any, is the
    // suspected period. The block is clamped to the table and may straddle
    // into the finalized tail; the priority write picks the smallest zero
    // either way, and an already-final period just gets re-derived.
    let probe = get_zeros(pram, w, bs, (2 * bs - 1).min(m - 1), k, false);
    let suspected = probe.get(pram, 0);

    let lcp = match suspected {
        Some(p) => {
            let wit = finalize_offset(pram, scheme, pattern, w, p);
            if wit == 0 {
                m - p
            } else {
                wit - 1
            }
        }
        // No zero to settle: the head still shrinks by one block.
        None => m - (*tail - bs),
    };

    let old_tail = *tail;
    *tail = (old_tail - bs).min(m - lcp);

    satisfy_head_sparsity(pram, checks, scheme, pattern, w, *tail, k);
    finalize_tail(pram, scheme, pattern, w, *tail, old_tail, suspected, k);
}

/// Settle one offset exactly: compare the pattern against its own suffix and
/// store the tight mismatch (or 0).
fn finalize_offset(pram: &mut Pram, scheme: Scheme, pattern: &EncodedString, w: Handle, z: usize) -> usize {
    let m = pattern.len();
    let wit = check_parallel(
        pram,
        CodesView::stored(scheme, pattern, 0, m - z),
        CodesView::suffix(scheme, pattern, z, 0, m - z),
    );
    pram.write_serial(w, z, wit as i64);
    wit
}

/// Re-establish head sparsity at granularity 2^(k+1): pair up the zeros of
/// adjacent 2^k-blocks past the first 2^(k+1)-block and duel each pair. The
/// loser inherits a witness from the winner's settled offset difference.
fn satisfy_head_sparsity(
    pram: &mut Pram,
    checks: &InvariantChecks,
    scheme: Scheme,
    pattern: &EncodedString,
    w: Handle,
    tail: usize,
    k: u32,
) {
    let lo = 1usize << (k + 1);
    if tail == 0 || tail - 1 < lo {
        return;
    }
    let zeros = get_zeros(pram, w, lo, tail - 1, k, true);
    let pairs = zeros.len() / 2;
    if pairs == 0 {
        return;
    }
    let m = pattern.len();
    let zh = zeros.handle();
    // Run duel checks before the step so violations carry positions; the
    // step itself re-reads the same pre-step state.
    if checks.is_enabled() {
        for i in 0..pairs {
            if let (Some(j1), Some(j2)) = (zeros.get(pram, 2 * i), zeros.get(pram, 2 * i + 1)) {
                checks.head_duel(j2, pram.get(w, j2 - j1) as usize, m);
            }
        }
    }
    pram.pfor(pairs, |ctx, i, out| {
        let j1 = ctx.get(zh, 2 * i);
        let j2 = ctx.get(zh, 2 * i + 1);
        if j1 < 0 || j2 < 0 {
            return;
        }
        let (j1, j2) = (j1 as usize, j2 as usize);
        let a = j2 - j1;
        let wa = ctx.get(w, a) as usize;
        debug_assert!(wa != 0, "paired zeros must be inconsistent offsets");
        // Probe the suffix at the farther offset; whichever offset survives
        // hands the other a witness.
        if ctx.reencode(scheme, pattern, j2, wa - 1) == pattern.code(wa - 1) {
            out.write(w, j1, (wa + a) as i64);
        } else {
            out.write(w, j2, wa as i64);
        }
    });
}

/// Finalize every offset the tail just grew by. When the head shrank by
/// exactly one block, at most two zeros remain in the strip and each is
/// settled directly. Otherwise the strip is longer than a block because the
/// suspected period p has a long matching overlap, and witnesses transfer
/// along residue classes mod p: each class copies from its last
/// representative, and classes whose representative is itself a period are
/// settled by a binary search for their period boundary.
fn finalize_tail(
    pram: &mut Pram,
    scheme: Scheme,
    pattern: &EncodedString,
    w: Handle,
    tail: usize,
    old_tail: usize,
    suspected: Option<usize>,
    k: u32,
) {
    let bs = 1usize << k;
    if old_tail - tail == bs {
        let zeros = get_zeros(pram, w, tail, old_tail - 1, k, true);
        for slot in 0..zeros.len() {
            if let Some(z) = zeros.get(pram, slot) {
                finalize_offset(pram, scheme, pattern, w, z);
            }
        }
        return;
    }

    let p = suspected.expect("a tail extended past one block implies a settled suspect");
    // Copy witnesses down each residue class from its representative in the
    // last p positions of the strip. Representatives below the new tail
    // start belong to classes with no member in the strip at all.
    pram.pfor(old_tail - tail, |ctx, off, out| {
        let i = tail + off;
        let q = old_tail - 1 - ((old_tail - 1 - i) % p);
        let wq = ctx.get(w, q);
        if ctx.get(w, i) == 0 && wq != 0 {
            out.write(w, i, wq + (q - i) as i64);
        }
    });
    // Classes whose representative is a period (at most three, by sparsity)
    // still hold zeros; settle each class around its period boundary.
    let zeros = get_zeros(pram, w, old_tail - p, old_tail - 1, k, true);
    for slot in 0..zeros.len() {
        if let Some(z) = zeros.get(pram, slot) {
            finalize_residue(pram, scheme, pattern, w, tail, old_tail, p, z % p);
        }
    }
}

/// Settle the residue class `rem` (mod `p`) within `tail..old_tail`. Within
/// a class, offsets at or below some boundary have witnesses and offsets
/// above it are periods, so the boundary is binary-searchable; offsets at or
/// below it inherit shifted copies of the boundary's tight witness.
fn finalize_residue(
    pram: &mut Pram,
    scheme: Scheme,
    pattern: &EncodedString,
    w: Handle,
    tail: usize,
    old_tail: usize,
    p: usize,
    rem: usize,
) {
    let m = pattern.len();
    let pi = p as i64;
    // Bracket [l, r]: class members at index ≤ l are known-witnessed (none
    // initially), members at index ≥ r are known periods.
    let mut l = (tail as i64 - rem as i64 + pi - 1).div_euclid(pi) - 1;
    let mut r = (old_tail as i64 - 1 - rem as i64).div_euclid(pi) + 1;
    while r - l > 1 {
        pram.ledger().charge_serial(1);
        let mid = (l + r) / 2;
        let j = mid as usize * p + rem;
        let wit = check_parallel(
            pram,
            CodesView::stored(scheme, pattern, 0, m - j),
            CodesView::suffix(scheme, pattern, j, 0, m - j),
        );
        if wit == 0 {
            r = mid;
        } else {
            l = mid;
        }
    }
    let b = l * pi + rem as i64;
    if b < tail as i64 {
        return; // the whole class is periodic (or empty): nothing to settle
    }
    let b = b as usize;
    let wit = check_parallel(
        pram,
        CodesView::stored(scheme, pattern, 0, m - b),
        CodesView::suffix(scheme, pattern, b, 0, m - b),
    );
    debug_assert!(wit != 0, "boundary {b} was probed inconsistent");
    pram.pfor(b - tail + 1, |ctx, off, out| {
        let i = tail + off;
        if i % p == rem && ctx.get(w, i) == 0 {
            out.write(w, i, (wit + b - i) as i64);
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{byte_symbols, int_symbols, param_symbols};
    use crate::oracle;

    fn build(scheme: Scheme, src: &[crate::encoding::Symbol]) -> PreprocessOutcome {
        let mut pram = Pram::new();
        let checks = InvariantChecks::enabled();
        let enc = scheme.encode(src);
        let out = preprocess(&mut pram, &checks, scheme, &enc);
        assert!(checks.is_clean(), "{:?}", checks.violations());
        out
    }

    #[test]
    fn check_parallel_returns_first_difference() {
        let mut pram = Pram::new();
        let scheme = Scheme::Exact;
        let a = scheme.encode(&byte_symbols(b"abaab"));
        // Pattern prefix vs suffix starting at offset 1: differ at once.
        let wit = check_parallel(
            &mut pram,
            CodesView::stored(scheme, &a, 0, 4),
            CodesView::suffix(scheme, &a, 1, 0, 4),
        );
        assert_eq!(wit, 1);
        // Offset 3 is a period: equal windows give zero.
        let wit = check_parallel(
            &mut pram,
            CodesView::stored(scheme, &a, 0, 2),
            CodesView::suffix(scheme, &a, 3, 0, 2),
        );
        assert_eq!(wit, 0);
    }

    #[test]
    fn check_parallel_charges_one_reencode_per_lazy_element() {
        let mut pram = Pram::new();
        let scheme = Scheme::Exact;
        let a = scheme.encode(&byte_symbols(b"abab"));
        check_parallel(
            &mut pram,
            CodesView::stored(scheme, &a, 0, 3),
            CodesView::suffix(scheme, &a, 1, 0, 3),
        );
        assert_eq!(pram.ledger().reencodes(), 3);
    }

    #[test]
    fn get_zeros_buckets_by_block() {
        let mut pram = Pram::new();
        let w = pram.alloc(4, 0);
        for (i, v) in [0i64, 1, 0, 1].into_iter().enumerate() {
            pram.write_serial(w, i, v);
        }
        // Blocks of two over positions 2..=3: the zero at 2 fills slot 0.
        let zs = get_zeros(&mut pram, w, 2, 3, 1, true);
        assert_eq!(zs.len(), 1);
        assert_eq!(zs.get(&pram, 0), Some(2));
        // A zero-free range leaves the slot empty.
        let zs = get_zeros(&mut pram, w, 3, 3, 0, true);
        assert_eq!(zs.get(&pram, 0), None);
        // An inverted range has no slots.
        let zs = get_zeros(&mut pram, w, 2, 1, 0, true);
        assert!(zs.is_empty());
    }

    #[test]
    fn get_zeros_prefers_the_smallest_zero_in_a_block() {
        let mut pram = Pram::new();
        let w = pram.alloc(4, 0);
        let zs = get_zeros(&mut pram, w, 0, 3, 2, false);
        assert_eq!(zs.get(&pram, 0), Some(0));
    }

    #[test]
    fn single_symbol_pattern_preprocesses_trivially() {
        let out = build(Scheme::Exact, &byte_symbols(b"a"));
        assert_eq!(out.table.entries(), &[0]);
        assert_eq!(out.rounds, 0);
    }

    #[test]
    fn exact_table_for_abaab() {
        let out = build(Scheme::Exact, &byte_symbols(b"abaab"));
        assert_eq!(out.table.zero_offsets(), vec![0, 3]);
        for (a, &v) in out.table.entries().iter().enumerate().skip(1) {
            if v != 0 {
                assert!(oracle::witness_is_valid(&byte_symbols(b"abaab"), Scheme::Exact, a, v));
            }
        }
    }

    #[test]
    fn unary_pattern_is_entirely_periodic() {
        let out = build(Scheme::Exact, &byte_symbols(b"aaaa"));
        assert_eq!(out.table.entries(), &[0, 0, 0, 0]);
    }

    #[test]
    fn alternating_params_are_entirely_periodic() {
        // Under renaming, every shift of x y x y matches itself.
        let out = build(Scheme::Parameterized, &param_symbols(b"xyxy"));
        assert_eq!(out.table.entries(), &[0, 0, 0, 0]);
    }

    #[test]
    fn zero_offsets_agree_with_the_oracle_on_small_patterns() {
        let cases: Vec<(Scheme, Vec<crate::encoding::Symbol>)> = vec![
            (Scheme::Exact, byte_symbols(b"ab")),
            (Scheme::Exact, byte_symbols(b"aabaab")),
            (Scheme::Exact, byte_symbols(b"abcabcab")),
            (Scheme::Parameterized, param_symbols(b"xxyy")),
            (Scheme::Parameterized, param_symbols(b"xyxxy")),
            (Scheme::CartesianTree, int_symbols(&[3, 1, 4, 1, 5, 9, 2, 6])),
            (Scheme::CartesianTree, int_symbols(&[2, 2, 2, 2, 2])),
            (Scheme::CartesianTree, int_symbols(&[5, 4, 3, 2, 1])),
        ];
        for (scheme, src) in cases {
            let out = build(scheme, &src);
            assert_eq!(
                out.table.zero_offsets(),
                oracle::naive_zero_offsets(&src, scheme),
                "zero set mismatch for {} {:?}",
                scheme.name(),
                src
            );
            for (a, &v) in out.table.entries().iter().enumerate().skip(1) {
                if v != 0 {
                    assert!(
                        oracle::witness_is_valid(&src, scheme, a, v),
                        "invalid witness {v} at offset {a} for {}",
                        scheme.name()
                    );
                }
            }
        }
    }

    #[test]
    fn round_count_stays_within_the_logarithmic_bound() {
        for m in [1usize, 2, 3, 5, 64, 100, 256] {
            let src: Vec<_> = byte_symbols(&(0..m).map(|i| b'a' + (i % 3) as u8).collect::<Vec<_>>());
            let out = build(Scheme::Exact, &src);
            let bound = if m == 1 { 1 } else { m.next_power_of_two().trailing_zeros() + 1 };
            assert!(out.rounds <= bound, "m={m}: {} rounds > {bound}", out.rounds);
        }
    }

    #[test]
    fn table_serialization_forms() {
        let out = build(Scheme::Exact, &byte_symbols(b"aba"));
        assert_eq!(out.table.to_tsv(), "0\t0\n1\t1\n2\t0\n");
        assert_eq!(out.table.to_json().to_string(), r#"{"m":3,"w":[0,1,0]}"#);
    }
}
