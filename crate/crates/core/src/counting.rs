//! Counting `n_d(f)`, the number of length-`d` binary strings that avoid `f`.

use crate::error::{Error, Result};
use crate::words::{contains_factor, Word};

pub const MAX_COUNT_DIM: usize = 62;
pub const MAX_BRUTE_DIM: usize = 24;

/// Failure-function automaton recognising an occurrence of a fixed factor.
///
/// State `s < k` means the longest suffix of the text read so far that is a
/// prefix of the factor has length `s`; state `k` is absorbing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorAutomaton {
    factor: Word,
    delta: Vec<[usize; 2]>,
}

impl FactorAutomaton {
    pub fn factor(&self) -> &Word {
        &self.factor
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn absorbing(&self) -> usize {
        self.factor.len()
    }

    pub fn next(&self, state: usize, bit: u8) -> usize {
        self.delta[state][bit as usize]
    }

    /// State reached from 0 after reading `w`.
    pub fn run(&self, w: &Word) -> usize {
        w.digits().fold(0, |s, b| self.next(s, b))
    }

    /// True iff `w` contains the factor.
    pub fn accepts(&self, w: &Word) -> bool {
        self.run(w) == self.absorbing()
    }
}

pub fn build_automaton(f: &Word) -> FactorAutomaton {
    let k = f.len();
    let digits: Vec<u8> = f.digits().collect();
    // KMP failure links
    let mut fail = vec![0usize; k + 1];
    let mut j = 0;
    for i in 1..k {
        while j > 0 && digits[i] != digits[j] {
            j = fail[j];
        }
        if digits[i] == digits[j] {
            j += 1;
        }
        fail[i + 1] = j;
    }
    let mut delta = vec![[0usize; 2]; k + 1];
    for s in 0..k {
        for b in 0..2u8 {
            delta[s][b as usize] = if digits[s] == b {
                s + 1
            } else if s == 0 {
                0
            } else {
                delta[fail[s]][b as usize]
            };
        }
    }
    delta[k] = [k, k];
    FactorAutomaton { factor: *f, delta }
}

/// `n_d(f)` by dynamic programming over automaton states.
pub fn count_avoiders(d: usize, f: &Word) -> Result<u64> {
    if d > MAX_COUNT_DIM {
        return Err(Error::DimensionOutOfRange {
            d,
            min: 0,
            max: MAX_COUNT_DIM,
        });
    }
    let aut = build_automaton(f);
    let k = aut.absorbing();
    let mut ways = vec![0u64; k];
    ways[0] = 1;
    for _ in 0..d {
        let mut next = vec![0u64; k];
        for (s, &n) in ways.iter().enumerate() {
            if n == 0 {
                continue;
            }
            for b in 0..2 {
                let t = aut.next(s, b);
                if t < k {
                    next[t] = next[t].checked_add(n).ok_or(Error::Overflow)?;
                }
            }
        }
        ways = next;
    }
    ways.iter()
        .try_fold(0u64, |acc, &n| acc.checked_add(n))
        .ok_or(Error::Overflow)
}

/// `n_d(f)` by enumerating all `2^d` strings.
pub fn brute_count(d: usize, f: &Word) -> Result<u64> {
    if d > MAX_BRUTE_DIM {
        return Err(Error::DimensionOutOfRange {
            d,
            min: 0,
            max: MAX_BRUTE_DIM,
        });
    }
    if d == 0 {
        return Ok(1);
    }
    let mut n = 0;
    for code in 0..1u32 << d {
        if !contains_factor(&Word::from_code(code, d)?, f) {
            n += 1;
        }
    }
    Ok(n)
}

/// Checks `n_d(0^{k-1}1) <= n_d(f) <= n_d(0^k)` for every `f` of length `k`,
/// and `n_d(0^k) < n_d(0^k 1)` when `k < d`.
pub fn verify_count_chain(d: usize, k: usize) -> Result<bool> {
    if k == 0 || k > d {
        return Err(Error::Precondition(format!(
            "need 1 <= k <= d, got k = {k}, d = {d}"
        )));
    }
    let zeros = Word::zeros(k)?;
    let prime = match k {
        1 => Word::ones(1)?,
        _ => Word::zeros(k - 1)?.push(1)?,
    };
    let lo = count_avoiders(d, &prime)?;
    let hi = count_avoiders(d, &zeros)?;
    for code in 0..1u64 << k {
        let n = count_avoiders(d, &Word::from_code(code as u32, k)?)?;
        if n < lo || n > hi {
            return Ok(false);
        }
    }
    if k < d && hi >= count_avoiders(d, &zeros.push(1)?)? {
        return Ok(false);
    }
    Ok(true)
}
