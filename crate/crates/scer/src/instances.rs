//! Reproducible random instances for the test suites and the self-test
//! harness. All generation is seeded; the same seed yields the same
//! pattern/text pair.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::encoding::{Scheme, Symbol};

/// Shape of one generated pattern/text pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceConfig {
    pub scheme: Scheme,
    pub pattern_len: usize,
    pub text_len: usize,
    /// Number of distinct symbol values to draw from. Small alphabets make
    /// accidental matches and long periods likely.
    pub alphabet: usize,
    /// Take the pattern verbatim from a random text window, guaranteeing at
    /// least one occurrence; otherwise the pattern is drawn independently.
    pub plant: bool,
    /// Constant symbols sprinkled into parameterized strings (renamings must
    /// fix them). Ignored by the other schemes; empty means all-parameter.
    pub param_constants: Vec<u8>,
}

impl Default for InstanceConfig {
    fn default() -> Self {
        InstanceConfig {
            scheme: Scheme::Exact,
            pattern_len: 4,
            text_len: 40,
            alphabet: 3,
            plant: false,
            param_constants: vec![b'0', b'1'],
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random symbol sequence appropriate for the scheme: bytes for exact
/// matching, a mix of parameters and constants from `param_constants` for
/// parameterized matching, integers for order-shape matching.
pub fn random_symbols_with(
    rng: &mut ChaCha8Rng,
    scheme: Scheme,
    len: usize,
    alphabet: usize,
    param_constants: &[u8],
) -> Vec<Symbol> {
    let alphabet = alphabet.max(1);
    (0..len)
        .map(|_| match scheme {
            Scheme::Exact => Symbol::Byte(b'a' + rng.gen_range(0..alphabet.min(26)) as u8),
            Scheme::Parameterized => {
                // One position in four is a constant so renamings have
                // fixed points to respect.
                if !param_constants.is_empty() && rng.gen_ratio(1, 4) {
                    Symbol::Byte(param_constants[rng.gen_range(0..param_constants.len())])
                } else {
                    Symbol::Param(b'a' + rng.gen_range(0..alphabet.min(26)) as u8)
                }
            }
            Scheme::CartesianTree => Symbol::Int(rng.gen_range(0..alphabet as i64)),
        })
        .collect()
}

/// [`random_symbols_with`] using the default constant set `{'0', '1'}`.
pub fn random_symbols(rng: &mut ChaCha8Rng, scheme: Scheme, len: usize, alphabet: usize) -> Vec<Symbol> {
    random_symbols_with(rng, scheme, len, alphabet, &[b'0', b'1'])
}

/// Generate one pattern/text pair.
pub fn generate(cfg: &InstanceConfig, seed: u64) -> (Vec<Symbol>, Vec<Symbol>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let text = random_symbols_with(&mut rng, cfg.scheme, cfg.text_len, cfg.alphabet, &cfg.param_constants);
    let pattern = if cfg.plant && cfg.text_len >= cfg.pattern_len && cfg.pattern_len > 0 {
        let at = rng.gen_range(0..=cfg.text_len - cfg.pattern_len);
        text[at..at + cfg.pattern_len].to_vec()
    } else {
        random_symbols_with(&mut rng, cfg.scheme, cfg.pattern_len, cfg.alphabet, &cfg.param_constants)
    };
    (pattern, text)
}
