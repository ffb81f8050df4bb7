//! Randomized self-verification: drives the engine against the quadratic
//! reference implementations on seeded instances and reports per-suite
//! outcomes. Used by the command-line `selftest` command and the test
//! suites.

use rand::Rng;

use crate::checks::InvariantChecks;
use crate::encoding::Scheme;
use crate::instances::{self, InstanceConfig};
use crate::oracle;
use crate::pram::{EvalOrder, Pram};
use crate::search::Searcher;
use crate::witness::preprocess;

#[derive(Debug, Clone)]
pub struct SelftestConfig {
    pub instances_per_scheme: usize,
    pub max_pattern_len: usize,
    pub max_text_len: usize,
    pub seed: u64,
    /// Corrupt the first engine result on purpose, to prove the comparison
    /// actually detects disagreements.
    pub inject_fault: bool,
    /// Restrict all suites to one scheme; `None` runs every scheme.
    pub scheme_filter: Option<Scheme>,
    /// Constant symbols used when generating parameterized instances.
    pub param_constants: Vec<u8>,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            instances_per_scheme: 150,
            max_pattern_len: 24,
            max_text_len: 140,
            seed: 0x5ced_5eed,
            inject_fault: false,
            scheme_filter: None,
            param_constants: vec![b'0', b'1'],
        }
    }
}

impl SelftestConfig {
    fn schemes(&self) -> Vec<Scheme> {
        match self.scheme_filter {
            Some(s) => vec![s],
            None => Scheme::ALL.to_vec(),
        }
    }
}

#[derive(Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug)]
pub struct SelftestReport {
    pub suites: Vec<SuiteReport>,
    /// Invariant checks evaluated across all instrumented runs; a passing
    /// report with zero checks would have verified nothing.
    pub checks_performed: u64,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks_performed > 0 && self.suites.iter().all(|s| s.passed())
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            if s.passed() {
                out.push_str(&format!("{}: PASS ({} cases)\n", s.name, s.cases));
            } else {
                out.push_str(&format!(
                    "{}: FAIL ({} cases, {} failures)\n",
                    s.name,
                    s.cases,
                    s.failures.len()
                ));
                for f in s.failures.iter().take(8) {
                    out.push_str(&format!("  {f}\n"));
                }
                if s.failures.len() > 8 {
                    out.push_str(&format!("  ... and {} more\n", s.failures.len() - 8));
                }
            }
        }
        out.push_str(&format!("invariant checks performed: {}\n", self.checks_performed));
        out.push_str(if self.passed() { "selftest: PASS\n" } else { "selftest: FAIL\n" });
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "suites": self.suites.iter().map(|s| serde_json::json!({
                "name": s.name,
                "cases": s.cases,
                "failures": s.failures,
                "passed": s.passed(),
            })).collect::<Vec<_>>(),
            "checks_performed": self.checks_performed,
            "passed": self.passed(),
        })
    }
}

pub fn run_selftest(cfg: &SelftestConfig) -> SelftestReport {
    let mut checks_performed = 0;
    let suites = vec![
        suite_encoding(cfg),
        suite_witness(cfg, &mut checks_performed),
        suite_engine(cfg, &mut checks_performed),
        suite_determinism(cfg),
    ];
    SelftestReport {
        suites,
        checks_performed,
    }
}

/// Suffix re-encodings must agree with encoding the suffix from scratch,
/// and encodings must equate exactly the strings the scheme's independent
/// definition equates (literal equality, renaming bijection, tree shape).
fn suite_encoding(cfg: &SelftestConfig) -> SuiteReport {
    let mut rng = instances::rng(cfg.seed ^ 0xe1c0);
    let mut cases = 0;
    let mut failures = Vec::new();
    for round in 0..cfg.instances_per_scheme {
        for scheme in cfg.schemes() {
            let len = rng.gen_range(1..=cfg.max_pattern_len.max(2));
            let alphabet = rng.gen_range(1..=4);
            let src = instances::random_symbols_with(&mut rng, scheme, len, alphabet, &cfg.param_constants);
            let enc = scheme.encode(&src);
            for start in 0..len {
                let suffix = scheme.encode(&src[start..]);
                for idx in 0..len - start {
                    cases += 1;
                    let got = scheme.reencode(&enc, start, idx);
                    if got != suffix.code(idx) {
                        failures.push(format!(
                            "{} round {round}: re-encode({start},{idx}) = {got} but scratch = {}",
                            scheme.name(),
                            suffix.code(idx)
                        ));
                    }
                }
            }
            // Pairwise equivalence against the independent definition.
            let short = rng.gen_range(1..=6);
            let x = instances::random_symbols_with(&mut rng, scheme, short, 2, &cfg.param_constants);
            let y = instances::random_symbols_with(&mut rng, scheme, short, 2, &cfg.param_constants);
            let by_code = scheme.encode(&x).codes() == scheme.encode(&y).codes();
            let by_definition = match scheme {
                Scheme::Exact => oracle::exact_equal(&x, &y),
                Scheme::Parameterized => oracle::param_bijection_match(&x, &y),
                Scheme::CartesianTree => oracle::cartesian_tree_match(&x, &y),
            };
            cases += 1;
            if by_code != by_definition {
                failures.push(format!(
                    "{} round {round}: encode-equality {by_code} but definition says {by_definition} for {x:?} / {y:?}",
                    scheme.name()
                ));
            }
        }
    }
    SuiteReport {
        name: "encoding-reencode",
        cases,
        failures,
    }
}

/// Witness tables must have the oracle's exact zero set and only valid
/// witnesses elsewhere, with no invariant violations along the way.
fn suite_witness(cfg: &SelftestConfig, checks_performed: &mut u64) -> SuiteReport {
    let mut rng = instances::rng(cfg.seed ^ 0x317e55);
    let mut cases = 0;
    let mut failures = Vec::new();
    for round in 0..cfg.instances_per_scheme {
        for scheme in cfg.schemes() {
            let len = rng.gen_range(1..=cfg.max_pattern_len);
            let alphabet = rng.gen_range(1..=3);
            let src = instances::random_symbols_with(&mut rng, scheme, len, alphabet, &cfg.param_constants);
            let mut pram = Pram::new();
            let checks = InvariantChecks::enabled();
            let out = preprocess(&mut pram, &checks, scheme, &scheme.encode(&src));
            cases += 1;
            if out.table.zero_offsets() != oracle::naive_zero_offsets(&src, scheme) {
                failures.push(format!(
                    "{} round {round}: zero offsets {:?} differ from oracle {:?} for {src:?}",
                    scheme.name(),
                    out.table.zero_offsets(),
                    oracle::naive_zero_offsets(&src, scheme)
                ));
            }
            for (a, &v) in out.table.entries().iter().enumerate().skip(1) {
                if v != 0 && !oracle::witness_is_valid(&src, scheme, a, v) {
                    failures.push(format!(
                        "{} round {round}: witness {v} at offset {a} is invalid for {src:?}",
                        scheme.name()
                    ));
                }
            }
            for v in checks.violations() {
                failures.push(format!("{} round {round}: {v}", scheme.name()));
            }
            *checks_performed += checks.performed();
        }
    }
    SuiteReport {
        name: "witness-tables",
        cases,
        failures,
    }
}

/// The engine must report exactly the oracle's occurrence set on every
/// instance, instrumented runs staying violation-free.
fn suite_engine(cfg: &SelftestConfig, checks_performed: &mut u64) -> SuiteReport {
    let mut rng = instances::rng(cfg.seed ^ 0x1e6e);
    let mut cases = 0;
    let mut failures = Vec::new();
    let mut fault_pending = cfg.inject_fault;
    for round in 0..cfg.instances_per_scheme {
        for scheme in cfg.schemes() {
            let pattern_len = rng.gen_range(1..=cfg.max_pattern_len);
            let text_len = rng.gen_range(pattern_len..=cfg.max_text_len.max(pattern_len));
            let icfg = InstanceConfig {
                scheme,
                pattern_len,
                text_len,
                alphabet: rng.gen_range(1..=4),
                plant: rng.gen_bool(0.5),
                param_constants: cfg.param_constants.clone(),
            };
            let (pattern, text) = instances::generate(&icfg, rng.gen());
            let mut searcher = Searcher::with_parts(scheme, Pram::new(), InvariantChecks::enabled());
            let mut got = searcher.find_all(&pattern, &text).expect("valid instance").occurrences;
            if fault_pending {
                // Toggle one position so the comparison below must trip.
                fault_pending = false;
                match got.iter().position(|&p| p == 0) {
                    Some(i) => {
                        got.remove(i);
                    }
                    None => got.insert(0, 0),
                }
            }
            cases += 1;
            let want = oracle::naive_occurrences(&text, &pattern, scheme);
            if got != want {
                failures.push(format!(
                    "{} round {round}: engine found {got:?} but oracle found {want:?} (m={pattern_len}, n={text_len})",
                    scheme.name()
                ));
            }
            for v in searcher.checks().violations() {
                failures.push(format!("{} round {round}: {v}", scheme.name()));
            }
            *checks_performed += searcher.checks().performed();
        }
    }
    SuiteReport {
        name: "oracle-engine-equivalence",
        cases,
        failures,
    }
}

fn suite_determinism(cfg: &SelftestConfig) -> SuiteReport {
    let mut cases = 0;
    let mut failures = Vec::new();
    for scheme in cfg.schemes() {
        let icfg = InstanceConfig {
            scheme,
            pattern_len: 6,
            text_len: 90,
            alphabet: 2,
            plant: true,
            param_constants: cfg.param_constants.clone(),
        };
        let (pattern, text) = instances::generate(&icfg, cfg.seed ^ 0xd37);
        let mut reference = None;
        for order in [
            EvalOrder::Ascending,
            EvalOrder::Shuffled { seed: 11 },
            EvalOrder::Shuffled { seed: 1_000_003 },
        ] {
            let mut searcher = Searcher::with_parts(scheme, Pram::with_order(order), InvariantChecks::disabled());
            let out = searcher.find_all(&pattern, &text).expect("valid instance");
            let signature = (out.occurrences.clone(), out.ledger);
            cases += 1;
            match &reference {
                None => reference = Some(signature),
                Some(r) => {
                    if *r != signature {
                        failures.push(format!(
                            "{}: evaluation order {order:?} changed the outcome: {signature:?} != {r:?}",
                            scheme.name()
                        ));
                    }
                }
            }
        }
    }
    SuiteReport {
        name: "pram-determinism",
        cases,
        failures,
    }
}
