//! A sequential simulation of a priority concurrent-read concurrent-write
//! PRAM, plus the operation ledger the complexity checks read.
//!
//! Memory is a flat arena of `i64` cells carved into arrays by `alloc`.
//! A parallel step (`pfor`) evaluates one body per index against a frozen
//! pre-step snapshot, then commits the returned writes. When several bodies
//! write the same cell in the same step, the smallest body index wins —
//! that single rule is what makes "first mismatch" and "smallest candidate"
//! selections deterministic.
//!
//! Two details exist purely for verification:
//! - the evaluation order of bodies can be shuffled (`EvalOrder::Shuffled`);
//!   committed state must not change, because bodies only see the snapshot;
//! - a recorder can capture the raw write multiset of early steps so tests
//!   can re-resolve them under random permutations.
//!
//! Ledger charging rules, used consistently by every algorithm here:
//! one `pfor` costs 1 time and `n` work; one `alloc` costs 1 time and `len`
//! work (it models a parallel fill); serial regions charge 1 time and 1 work
//! per primitive operation via `charge_serial`; every suffix re-encode adds
//! 1 to the separate `reencodes` counter. Orchestration reads (setting up
//! the next step) are free.

use std::cell::Cell;
use std::ops::Sub;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::encoding::{Code, EncodedString, Scheme};

/// Running operation counts for one engine run.
#[derive(Debug, Default)]
pub struct StepLedger {
    time: Cell<u64>,
    work: Cell<u64>,
    reencodes: Cell<u64>,
}

impl StepLedger {
    pub fn new() -> Self {
        StepLedger::default()
    }

    pub fn time(&self) -> u64 {
        self.time.get()
    }

    pub fn work(&self) -> u64 {
        self.work.get()
    }

    pub fn reencodes(&self) -> u64 {
        self.reencodes.get()
    }

    /// One parallel step over `n` bodies.
    pub fn charge_parallel_step(&self, n: u64) {
        self.time.set(self.time.get() + 1);
        self.work.set(self.work.get() + n);
    }

    /// `n` primitive operations executed serially.
    pub fn charge_serial(&self, n: u64) {
        self.time.set(self.time.get() + n);
        self.work.set(self.work.get() + n);
    }

    pub fn charge_reencode(&self) {
        self.reencodes.set(self.reencodes.get() + 1);
    }

    pub fn reset(&self) {
        self.time.set(0);
        self.work.set(0);
        self.reencodes.set(0);
    }

    pub fn report(&self) -> LedgerReport {
        LedgerReport {
            time: self.time(),
            work: self.work(),
            reencodes: self.reencodes(),
        }
    }

    /// Fold another ledger in, summing all counters. Used when independent
    /// pieces of a text are processed with their own ledgers.
    pub fn absorb(&self, other: &StepLedger) {
        self.time.set(self.time.get() + other.time());
        self.work.set(self.work.get() + other.work());
        self.reencodes.set(self.reencodes.get() + other.reencodes());
    }
}

/// A ledger snapshot; subtraction gives per-phase deltas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LedgerReport {
    pub time: u64,
    pub work: u64,
    pub reencodes: u64,
}

impl Sub for LedgerReport {
    type Output = LedgerReport;
    fn sub(self, rhs: LedgerReport) -> LedgerReport {
        LedgerReport {
            time: self.time - rhs.time,
            work: self.work - rhs.work,
            reencodes: self.reencodes - rhs.reencodes,
        }
    }
}

/// Order in which step bodies are evaluated. Committed memory must be
/// identical either way; `Shuffled` exists so tests can prove that.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalOrder {
    Ascending,
    Shuffled { seed: u64 },
}

/// One write requested during a step, tagged with the body that issued it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PendingWrite {
    pub writer: usize,
    pub cell: usize,
    pub value: i64,
}

/// Resolve a step's write multiset: per cell, the smallest writer index
/// wins. The input order is irrelevant. Returns (cell, value) sorted by cell.
pub fn resolve_priority(pending: &[PendingWrite]) -> Vec<(usize, i64)> {
    let mut sorted: Vec<PendingWrite> = pending.to_vec();
    sorted.sort_unstable_by_key(|w| (w.cell, w.writer));
    let mut out: Vec<(usize, i64)> = Vec::with_capacity(sorted.len());
    for w in sorted {
        if out.last().map(|&(c, _)| c) != Some(w.cell) {
            out.push((w.cell, w.value));
        }
    }
    out
}

/// A region of the arena. Handles stay valid until `reset_memory`.
#[derive(Debug, Clone, Copy)]
pub struct Handle {
    base: usize,
    len: usize,
}

impl Handle {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn cell(&self, i: usize) -> usize {
        assert!(i < self.len, "index {i} outside array of length {}", self.len);
        self.base + i
    }
}

/// Read-only view of pre-step memory handed to step bodies, with the ledger
/// so bodies can charge the re-encodes they perform.
pub struct StepCtx<'a> {
    mem: &'a [i64],
    pub ledger: &'a StepLedger,
}

impl StepCtx<'_> {
    pub fn get(&self, h: Handle, i: usize) -> i64 {
        self.mem[h.cell(i)]
    }

    /// Charged suffix re-encode of one element.
    pub fn reencode(&self, scheme: Scheme, e: &EncodedString, start: usize, idx: usize) -> Code {
        self.ledger.charge_reencode();
        scheme.reencode(e, start, idx)
    }
}

/// Write collector handed to step bodies. Writes land after every body of
/// the step has run; a body never observes its own or its peers' writes.
pub struct StepWrites<'a> {
    pending: &'a mut Vec<PendingWrite>,
    writer: usize,
}

impl StepWrites<'_> {
    pub fn write(&mut self, h: Handle, i: usize, value: i64) {
        let cell = h.cell(i); // panics outside the declared array: contract violation
        self.pending.push(PendingWrite {
            writer: self.writer,
            cell,
            value,
        });
    }
}

/// Raw capture of one committed step, for permutation replay in tests.
#[derive(Debug, Clone)]
pub struct RecordedStep {
    pub pending: Vec<PendingWrite>,
    pub resolved: Vec<(usize, i64)>,
}

/// The machine: arena, ledger, and step bookkeeping.
pub struct Pram {
    mem: Vec<i64>,
    ledger: StepLedger,
    order: EvalOrder,
    steps_run: u64,
    pending: Vec<PendingWrite>,
    record_limit: usize,
    recorded: Vec<RecordedStep>,
}

impl Pram {
    pub fn new() -> Self {
        Pram::with_order(EvalOrder::Ascending)
    }

    pub fn with_order(order: EvalOrder) -> Self {
        Pram {
            mem: Vec::new(),
            ledger: StepLedger::new(),
            order,
            steps_run: 0,
            pending: Vec::new(),
            record_limit: 0,
            recorded: Vec::new(),
        }
    }

    pub fn ledger(&self) -> &StepLedger {
        &self.ledger
    }

    pub fn order(&self) -> EvalOrder {
        self.order
    }

    /// Capture the write multisets of the next `limit` steps that write.
    pub fn record_steps(&mut self, limit: usize) {
        self.record_limit = limit;
        self.recorded.clear();
    }

    pub fn recorded_steps(&self) -> &[RecordedStep] {
        &self.recorded
    }

    /// Allocate `len` cells filled with `fill`: one parallel step.
    pub fn alloc(&mut self, len: usize, fill: i64) -> Handle {
        let base = self.mem.len();
        self.mem.resize(base + len, fill);
        self.ledger.charge_parallel_step(len as u64);
        Handle { base, len }
    }

    /// Drop every array. Outstanding handles become invalid; the ledger is
    /// untouched.
    pub fn reset_memory(&mut self) {
        self.mem.clear();
    }

    /// Uncharged read, for orchestration between steps and for extraction.
    pub fn get(&self, h: Handle, i: usize) -> i64 {
        self.mem[h.cell(i)]
    }

    /// Uncharged snapshot of a whole array.
    pub fn read_all(&self, h: Handle) -> Vec<i64> {
        self.mem[h.base..h.base + h.len].to_vec()
    }

    /// Single-processor assignment: one serial operation.
    pub fn write_serial(&mut self, h: Handle, i: usize, value: i64) {
        let cell = h.cell(i);
        self.ledger.charge_serial(1);
        self.mem[cell] = value;
    }

    /// Charged suffix re-encode performed by serial code.
    pub fn reencode_serial(&self, scheme: Scheme, e: &EncodedString, start: usize, idx: usize) -> Code {
        self.ledger.charge_reencode();
        scheme.reencode(e, start, idx)
    }

    /// One parallel step: run `body` for every index in `0..n` against the
    /// pre-step snapshot, then commit the collected writes with
    /// smallest-writer priority. Charges 1 time and `n` work.
    pub fn pfor<F>(&mut self, n: usize, mut body: F)
    where
        F: FnMut(&StepCtx<'_>, usize, &mut StepWrites<'_>),
    {
        let mut pending = std::mem::take(&mut self.pending);
        pending.clear();
        {
            let ctx = StepCtx {
                mem: &self.mem,
                ledger: &self.ledger,
            };
            match self.order {
                EvalOrder::Ascending => {
                    for i in 0..n {
                        let mut w = StepWrites {
                            pending: &mut pending,
                            writer: i,
                        };
                        body(&ctx, i, &mut w);
                    }
                }
                EvalOrder::Shuffled { seed } => {
                    let mut idx: Vec<usize> = (0..n).collect();
                    let mut rng =
                        ChaCha8Rng::seed_from_u64(seed ^ self.steps_run.wrapping_mul(0x9e37_79b9_7f4a_7c15));
                    idx.shuffle(&mut rng);
                    for i in idx {
                        let mut w = StepWrites {
                            pending: &mut pending,
                            writer: i,
                        };
                        body(&ctx, i, &mut w);
                    }
                }
            }
        }
        self.ledger.charge_parallel_step(n as u64);
        self.steps_run += 1;

        let resolved = resolve_priority(&pending);
        if self.recorded.len() < self.record_limit && !pending.is_empty() {
            self.recorded.push(RecordedStep {
                pending: pending.clone(),
                resolved: resolved.clone(),
            });
        }
        for (cell, value) in resolved {
            self.mem[cell] = value;
        }
        self.pending = pending;
    }
}

impl Default for Pram {
    fn default() -> Self {
        Pram::new()
    }
}
