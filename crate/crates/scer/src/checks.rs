//! Optional runtime verification of the structural invariants the
//! algorithms rely on. Hooks record violations instead of panicking so a
//! whole randomized campaign can run and then assert the log is empty.
//!
//! What gets checked, when enabled:
//! - at every preprocessing round: the unfinalized head of the witness table
//!   is block-sparse (one zero per full block, at most one in the last), and
//!   every head entry is bounded by the finalized tail length plus the block
//!   size (the first block by tail length + 1);
//! - at every head duel: the probe position stays inside the pattern;
//! - after every dueling-stage round: surviving candidate blocks are
//!   pairwise consistent and still contain every true occurrence;
//! - at every sweeping round: the text regions scanned by the per-block
//!   comparisons are pairwise disjoint.

use std::cell::{Cell, RefCell};

use crate::witness::WitnessTable;

#[derive(Debug, Default)]
pub struct InvariantChecks {
    enabled: bool,
    violations: RefCell<Vec<String>>,
    performed: Cell<u64>,
    expected_occurrences: RefCell<Option<Vec<usize>>>,
}

impl InvariantChecks {
    pub fn enabled() -> Self {
        InvariantChecks {
            enabled: true,
            ..Default::default()
        }
    }

    pub fn disabled() -> Self {
        InvariantChecks::default()
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    /// Number of individual checks evaluated so far. A campaign that ends
    /// with zero violations *and* zero performed checks tested nothing.
    pub fn performed(&self) -> u64 {
        self.performed.get()
    }

    pub fn violations(&self) -> Vec<String> {
        self.violations.borrow().clone()
    }

    pub fn is_clean(&self) -> bool {
        self.violations.borrow().is_empty()
    }

    fn note(&self, n: u64) {
        self.performed.set(self.performed.get() + n);
    }

    fn fail(&self, msg: String) {
        self.violations.borrow_mut().push(msg);
    }

    /// Install the ground-truth occurrence set for the piece about to be
    /// searched, so dueling rounds can prove they never drop a real match.
    pub fn begin_piece(&self, expected: Option<Vec<usize>>) {
        *self.expected_occurrences.borrow_mut() = expected;
    }

    /// Head sparsity and witness bounds at the start of a preprocessing
    /// round: `w` is the current table, `tail` the start of the finalized
    /// region, `k` the round (blocks have size 2^k).
    pub fn preprocess_round(&self, w: &[i64], tail: usize, k: u32, m: usize) {
        if !self.enabled {
            return;
        }
        let bs = 1usize << k;
        let tail_len = m - tail;
        // Sparsity over the head, block by block.
        let mut block = 0;
        while block * bs < tail {
            let lo = block * bs;
            let hi = ((block + 1) * bs).min(tail);
            let zeros = w[lo..hi].iter().filter(|&&v| v == 0).count();
            let is_last = hi == tail;
            self.note(1);
            if zeros > 1 || (!is_last && zeros != 1) {
                self.fail(format!(
                    "round {k}: head block {lo}..{hi} holds {zeros} zeros (tail starts at {tail})"
                ));
            }
            block += 1;
        }
        // Value bounds: first block by tail length + 1, the rest by tail
        // length + block size.
        for (i, &v) in w.iter().enumerate().take(tail) {
            let limit = if i < bs { tail_len + 1 } else { tail_len + bs };
            self.note(1);
            if v as usize > limit {
                self.fail(format!(
                    "round {k}: head witness w[{i}]={v} exceeds bound {limit} (tail length {tail_len})"
                ));
            }
        }
    }

    /// A duel between head offsets probes position `j + w` of the pattern;
    /// it must not run off the end.
    pub fn head_duel(&self, j: usize, w: usize, m: usize) {
        if !self.enabled {
            return;
        }
        self.note(1);
        if j + w > m {
            self.fail(format!("head duel at offset {j} probes {} past pattern length {m}", j + w));
        }
    }

    /// Survivor blocks after one dueling round: adjacent pairs in a block
    /// must be consistent (all pairs when the block is small), and the union
    /// must still cover the expected occurrences.
    pub fn dueling_round(&self, round: u32, blocks: &[Vec<usize>], table: &WitnessTable) {
        if !self.enabled {
            return;
        }
        for set in blocks {
            let pairs: Vec<(usize, usize)> = if set.len() <= 8 {
                (0..set.len())
                    .flat_map(|i| (i + 1..set.len()).map(move |j| (i, j)))
                    .collect()
            } else {
                (1..set.len()).map(|i| (i - 1, i)).collect()
            };
            for (i, j) in pairs {
                self.note(1);
                if table.get(set[j] - set[i]) != 0 {
                    self.fail(format!(
                        "dueling round {round}: survivors {} and {} are inconsistent",
                        set[i], set[j]
                    ));
                }
            }
        }
        if let Some(expected) = self.expected_occurrences.borrow().as_ref() {
            let mut survivors: Vec<usize> = blocks.iter().flatten().copied().collect();
            survivors.sort_unstable();
            for &occ in expected {
                self.note(1);
                if survivors.binary_search(&occ).is_err() {
                    self.fail(format!(
                        "dueling round {round}: true occurrence {occ} was eliminated"
                    ));
                }
            }
        }
    }

    /// Text regions `[start, end)` scanned by one sweeping round must be
    /// pairwise disjoint.
    pub fn sweep_regions(&self, round: u32, regions: &[(usize, usize)]) {
        if !self.enabled {
            return;
        }
        self.note(1);
        let mut sorted: Vec<(usize, usize)> = regions.iter().copied().filter(|r| r.1 > r.0).collect();
        sorted.sort_unstable();
        for pair in sorted.windows(2) {
            if pair[1].0 < pair[0].1 {
                self.fail(format!(
                    "sweeping round {round}: scan regions {:?} and {:?} overlap",
                    pair[0], pair[1]
                ));
            }
        }
    }
}
