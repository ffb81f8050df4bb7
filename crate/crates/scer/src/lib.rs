//! Generalized pattern matching for equivalence relations that are
//! consistent under taking substrings: exact matching, parameterized
//! matching (equality up to a bijective renaming of parameter symbols), and
//! order-isomorphism of Cartesian tree shapes all fit one engine.
//!
//! Each relation is captured by an encoding that maps a string to a code
//! sequence such that two strings are equivalent exactly when their
//! encodings are equal, the encoding of a prefix is a prefix of the
//! encoding, and any element of a suffix's encoding can be recovered from
//! the whole string's encoding in constant time. On top of that interface,
//! the engine runs the duel-and-sweep paradigm on a simulated
//! priority-concurrent-write parallel machine: pattern preprocessing builds
//! a witness table in logarithmically many rounds, the dueling stage prunes
//! text candidates to a pairwise-consistent set, and the sweeping stage
//! verifies the rest while sharing every verified prefix.
//!
//! Modules:
//! - [`encoding`]: symbols, code alphabets, the three schemes, suffix
//!   re-encoding;
//! - [`pram`]: the simulated machine — flat memory, parallel steps with
//!   smallest-writer conflict resolution, time/work/re-encode ledger;
//! - [`witness`]: parallel witness-table construction;
//! - [`search`]: dueling and sweeping over text pieces;
//! - [`oracle`]: deliberately simple quadratic reference implementations;
//! - [`checks`]: optional runtime invariant monitoring;
//! - [`instances`], [`selftest`]: seeded generators and the randomized
//!   self-verification harness.

pub mod checks;
pub mod encoding;
pub mod instances;
pub mod oracle;
pub mod pram;
pub mod search;
pub mod selftest;
pub mod witness;

pub use checks::InvariantChecks;
pub use encoding::{Code, EncodedString, Scheme, Symbol};
pub use pram::{EvalOrder, LedgerReport, Pram, StepLedger};
pub use search::{ceil_log2, MatchError, MatchOutcome, PieceReport, Searcher};
pub use selftest::{run_selftest, SelftestConfig, SelftestReport};
pub use witness::{preprocess, PreprocessOutcome, WitnessTable};
