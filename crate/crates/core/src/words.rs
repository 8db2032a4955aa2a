//! Binary words: the forbidden factors and the vertex labels of the cubes.
//!
//! A [`Word`] packs up to [`MAX_LEN`] digits into a `u32`, most significant
//! bit first, so that numeric order on equal-length words is lexicographic
//! order. Positions are 1-indexed throughout: `f.bit(1)` is the first digit.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MAX_LEN: usize = 32;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    bits: u32,
    len: u8,
}

impl Word {
    /// Builds a word from the low `len` bits of `code`, first digit in the
    /// most significant of those bits.
    pub fn from_code(code: u32, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::EmptyWord);
        }
        if len > MAX_LEN {
            return Err(Error::WordTooLong(len));
        }
        Ok(Word {
            bits: code & mask(len),
            len: len as u8,
        })
    }

    pub fn from_digits(digits: &[u8]) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::EmptyWord);
        }
        if digits.len() > MAX_LEN {
            return Err(Error::WordTooLong(digits.len()));
        }
        let mut bits = 0u32;
        for &b in digits {
            match b {
                0 | 1 => bits = (bits << 1) | b as u32,
                other => return Err(Error::InvalidDigit(char::from(b'0'.wrapping_add(other)))),
            }
        }
        Ok(Word {
            bits,
            len: digits.len() as u8,
        })
    }

    /// `0^k`
    pub fn zeros(k: usize) -> Result<Self> {
        Word::from_code(0, k)
    }

    /// `1^k`
    pub fn ones(k: usize) -> Result<Self> {
        Word::from_code(u32::MAX, k)
    }

    /// The unit string `e_i` of length `d`: a single 1 at position `i`.
    pub fn unit(d: usize, i: usize) -> Result<Self> {
        let w = Word::zeros(d)?;
        w.flip(i)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    /// Always false; words have at least one digit.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The packed digits, first digit most significant.
    pub fn code(&self) -> u32 {
        self.bits
    }

    /// Digit at 1-indexed position `i`.
    ///
    /// Panics if `i` is outside `1..=len`.
    pub fn bit(&self, i: usize) -> u8 {
        assert!(
            i >= 1 && i <= self.len(),
            "bit index {i} out of range 1..={}",
            self.len
        );
        ((self.bits >> (self.len() - i)) & 1) as u8
    }

    pub fn first(&self) -> u8 {
        self.bit(1)
    }

    pub fn last(&self) -> u8 {
        self.bit(self.len())
    }

    pub fn digits(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=self.len()).map(move |i| self.bit(i))
    }

    /// Adds the unit string `e_i` modulo 2.
    pub fn flip(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            });
        }
        Ok(Word {
            bits: self.bits ^ (1 << (self.len() - i)),
            len: self.len,
        })
    }

    pub fn concat(&self, other: &Word) -> Result<Self> {
        let len = self.len() + other.len();
        if len > MAX_LEN {
            return Err(Error::WordTooLong(len));
        }
        let bits = ((self.bits as u64) << other.len()) as u32 | other.bits;
        Ok(Word {
            bits,
            len: len as u8,
        })
    }

    /// Appends a single digit.
    pub fn push(&self, b: u8) -> Result<Self> {
        self.concat(&Word::from_code(b as u32, 1)?)
    }

    /// Prepends a single digit.
    pub fn prepend(&self, b: u8) -> Result<Self> {
        Word::from_code(b as u32, 1)?.concat(self)
    }

    /// Digits `i..=j` (1-indexed, inclusive).
    pub fn slice(&self, i: usize, j: usize) -> Result<Self> {
        if i == 0 || j > self.len() || i > j {
            return Err(Error::IndexOutOfRange {
                index: if i == 0 { 0 } else { j },
                len: self.len(),
            });
        }
        Word::from_code(self.bits >> (self.len() - j), j - i + 1)
    }

    pub fn hamming(&self, other: &Word) -> u32 {
        (self.bits ^ other.bits).count_ones()
    }
}

fn mask(len: usize) -> u32 {
    if len >= 32 {
        u32::MAX
    } else {
        (1u32 << len) - 1
    }
}

impl Ord for Word {
    /// Lexicographic order on digit strings; a proper prefix sorts first.
    fn cmp(&self, other: &Self) -> Ordering {
        let m = self.len().min(other.len());
        let a = self.bits >> (self.len() - m);
        let b = other.bits >> (other.len() - m);
        a.cmp(&b).then(self.len.cmp(&other.len))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.digits() {
            f.write_str(if b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::EmptyWord);
        }
        let n = s.chars().count();
        if n > MAX_LEN {
            return Err(Error::WordTooLong(n));
        }
        let mut bits = 0u32;
        for c in s.chars() {
            let b = match c {
                '0' => 0,
                '1' => 1,
                other => return Err(Error::InvalidDigit(other)),
            };
            bits = (bits << 1) | b;
        }
        Ok(Word { bits, len: n as u8 })
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn complement(f: &Word) -> Word {
    Word {
        bits: !f.bits & mask(f.len()),
        len: f.len,
    }
}

pub fn reverse(f: &Word) -> Word {
    Word {
        bits: f.bits.reverse_bits() >> (32 - f.len()),
        len: f.len,
    }
}

/// The images of `f` under reversal, complementation and both, sorted and
/// deduplicated. Always of size 1, 2 or 4.
pub fn orbit(f: &Word) -> Vec<Word> {
    let r = reverse(f);
    let mut out = vec![*f, r, complement(f), complement(&r)];
    out.sort();
    out.dedup();
    out
}

/// Lexicographically least member of the orbit of `f`.
pub fn canonical_rep(f: &Word) -> Word {
    let r = reverse(f);
    [*f, r, complement(f), complement(&r)]
        .into_iter()
        .min()
        .unwrap()
}

/// True when `g` is `f` up to reversal and complementation.
pub fn is_trivial_pair(f: &Word, g: &Word) -> bool {
    f.len() == g.len() && canonical_rep(f) == canonical_rep(g)
}

/// Number of maximal constant runs minus one.
pub fn bit_changes(f: &Word) -> usize {
    let k = f.len();
    if k < 2 {
        return 0;
    }
    // bit j of x is set iff digits at adjacent positions differ
    let x = (f.bits ^ (f.bits >> 1)) & mask(k - 1);
    x.count_ones() as usize
}

/// Positions `τ ≥ 2` with `f_{τ-1} ≠ f_τ`, ascending.
pub fn bit_change_indices(f: &Word) -> Vec<usize> {
    (2..=f.len())
        .filter(|&t| f.bit(t - 1) != f.bit(t))
        .collect()
}

/// True iff `f` occurs in `w` as a contiguous block.
pub fn contains_factor(w: &Word, f: &Word) -> bool {
    let (n, k) = (w.len(), f.len());
    if k > n {
        return false;
    }
    let m = mask(k);
    (0..=n - k).any(|shift| (w.bits >> shift) & m == f.bits)
}

/// Coefficients `c_0..c_{k-1}` of the autocorrelation polynomial; index is
/// the exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CorrelationPolynomial {
    coeffs: Vec<u8>,
}

impl CorrelationPolynomial {
    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c == 1).unwrap_or(0)
    }

    pub fn eval_at_two(&self) -> u64 {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 1)
            .map(|(i, _)| 1u64 << i)
            .sum()
    }

    /// The coefficients read as a binary number with `c_0` most significant.
    /// Larger values never have fewer avoiders in any dimension at least as
    /// large as both words.
    pub fn binary_value(&self) -> u64 {
        self.coeffs
            .iter()
            .fold(0u64, |acc, &c| (acc << 1) | c as u64)
    }

    /// Value at an arbitrary integer point, `None` on overflow.
    pub fn eval_at(&self, z: i64) -> Option<i128> {
        let z = z as i128;
        self.coeffs
            .iter()
            .rev()
            .try_fold(0i128, |acc, &c| acc.checked_mul(z)?.checked_add(c as i128))
    }
}

/// `c_i = 1` iff the length `k-i` suffix of `f` equals its length `k-i` prefix.
pub fn autocorrelation(f: &Word) -> CorrelationPolynomial {
    let k = f.len();
    let coeffs = (0..k)
        .map(|i| {
            let m = mask(k - i);
            let suffix = f.bits & m;
            let prefix = f.bits >> i;
            (suffix == prefix) as u8
        })
        .collect();
    CorrelationPolynomial { coeffs }
}

pub fn eval_at_two(p: &CorrelationPolynomial) -> u64 {
    p.eval_at_two()
}

/// No proper suffix equals the prefix of the same length.
pub fn is_prime_word(f: &Word) -> bool {
    autocorrelation(f).coeffs.iter().skip(1).all(|&c| c == 0)
}

/// One word per orbit of `{0,1}^k` under reversal and complementation, each
/// its own canonical representative, in lexicographic order.
pub fn representatives(k: usize) -> Result<Vec<Word>> {
    if k == 0 {
        return Err(Error::EmptyWord);
    }
    if k > MAX_LEN {
        return Err(Error::WordTooLong(k));
    }
    // a representative starts with 0, so only the lower half needs scanning
    let half = 1u64 << (k - 1);
    Ok((0..half)
        .map(|c| Word {
            bits: c as u32,
            len: k as u8,
        })
        .filter(|w| canonical_rep(w) == *w)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(w("0110").to_string(), "0110");
        assert_eq!(w("0110").code(), 0b0110);
        assert_eq!("".parse::<Word>(), Err(Error::EmptyWord));
        assert_eq!("012".parse::<Word>(), Err(Error::InvalidDigit('2')));
        assert_eq!("0".repeat(33).parse::<Word>(), Err(Error::WordTooLong(33)));
        assert_eq!(w(&"1".repeat(32)).to_string(), "1".repeat(32));
    }

    #[test]
    fn complement_and_reverse() {
        assert_eq!(complement(&w("0110")), w("1001"));
        assert_eq!(complement(&Word::zeros(5).unwrap()), Word::ones(5).unwrap());
        assert_eq!(reverse(&w("0010")), w("0100"));
        assert_eq!(reverse(&w("010")), w("010"));
        let long = w("10110011100011110000111110000011");
        assert_eq!(reverse(&reverse(&long)), long);
    }

    #[test]
    fn orbits() {
        assert_eq!(orbit(&w("01")), vec![w("01"), w("10")]);
        assert_eq!(
            orbit(&w("001")),
            vec![w("001"), w("011"), w("100"), w("110")]
        );
        assert_eq!(orbit(&w("11")), vec![w("00"), w("11")]);
        assert_eq!(canonical_rep(&w("11")), w("00"));
        assert_eq!(canonical_rep(&w("100")), w("001"));
        // orbit of 0110 is {0110, 1001}
        assert_eq!(canonical_rep(&w("0110")), w("0110"));
    }

    #[test]
    fn trivial_pairs() {
        assert!(is_trivial_pair(&w("0011"), &w("1100")));
        assert!(is_trivial_pair(&w("0011"), &w("0011")));
        assert!(!is_trivial_pair(&w("0011"), &w("0001")));
        assert!(!is_trivial_pair(&w("001"), &w("0011")));
    }

    #[test]
    fn blocks() {
        assert_eq!(bit_changes(&w("0110")), 2);
        assert_eq!(bit_changes(&Word::zeros(7).unwrap()), 0);
        assert_eq!(bit_changes(&w("0100")), 2);
        assert_eq!(bit_changes(&w("0")), 0);
        assert_eq!(bit_change_indices(&w("0110")), vec![2, 4]);
        assert_eq!(
            bit_change_indices(&Word::zeros(4).unwrap()),
            Vec::<usize>::new()
        );
        assert_eq!(bit_change_indices(&w("01")), vec![2]);
    }

    #[test]
    fn autocorrelation_examples() {
        for k in 1..=8 {
            let z = Word::zeros(k).unwrap();
            assert_eq!(autocorrelation(&z).coeffs(), vec![1; k].as_slice());
            assert_eq!(autocorrelation(&z).eval_at_two(), (1 << k) - 1);
            let p = Word::zeros(k - 1).map_or(w("1"), |z| z.push(1).unwrap());
            let mut expect = vec![0; k];
            expect[0] = 1;
            assert_eq!(autocorrelation(&p).coeffs(), expect.as_slice());
            assert_eq!(autocorrelation(&p).eval_at_two(), 1);
            assert!(is_prime_word(&p));
            if k >= 2 {
                assert!(!is_prime_word(&z));
            }
        }
        let p = autocorrelation(&w("0110"));
        assert_eq!(p.coeffs(), &[1, 0, 0, 1]);
        assert_eq!(eval_at_two(&p), 9);
        assert_eq!(p.eval_at(3), Some(28));
        assert_eq!(p.degree(), 3);
        assert!(!is_prime_word(&w("0110")));
    }

    #[test]
    fn representative_lists() {
        assert_eq!(representatives(2).unwrap(), vec![w("00"), w("01")]);
        assert_eq!(
            representatives(3).unwrap(),
            vec![w("000"), w("001"), w("010")]
        );
        assert_eq!(representatives(4).unwrap().len(), 6);
        assert_eq!(representatives(1).unwrap(), vec![w("0")]);
    }

    #[test]
    fn factor_search() {
        assert!(contains_factor(&w("00110"), &w("0011")));
        assert!(!contains_factor(&w("0101"), &w("11")));
        assert!(!contains_factor(&w("010"), &w("0101")));
        assert!(contains_factor(&w("0110"), &w("0110")));
    }

    #[test]
    fn word_ops() {
        assert_eq!(w("000").flip(2).unwrap(), w("010"));
        assert_eq!(w("0110").flip(1).unwrap(), w("1110"));
        assert!(w("0110").flip(5).is_err());
        assert_eq!(Word::unit(4, 1).unwrap(), w("1000"));
        assert_eq!(w("01").concat(&w("10")).unwrap(), w("0110"));
        assert_eq!(w("0110").slice(2, 3).unwrap(), w("11"));
        assert!(w("01") < w("010"));
        assert!(w("010") < w("011"));
        assert!(w("1") > w("0111"));
    }

    #[test]
    fn serde_as_text() {
        let f = w("0110");
        assert_eq!(serde_json::to_string(&f).unwrap(), "\"0110\"");
        assert_eq!(serde_json::from_str::<Word>("\"0110\"").unwrap(), f);
        let p = autocorrelation(&f);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[1,0,0,1]");
    }
}
