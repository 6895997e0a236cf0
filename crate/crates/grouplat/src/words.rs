//! Alphabets, signed letters and free-group words.
//!
//! A [`Word`] is a sequence of [`Letter`]s over a shared [`Alphabet`]. The
//! empty word represents the identity everywhere; there is no separate
//! identity value. All values are immutable once built.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::Error;

/// Largest exponent accepted by the word parser. Tokens such as `a^k`
/// materialize `|k|` letters, so unbounded exponents would let a small
/// input allocate arbitrary memory.
const MAX_PARSE_EXPONENT: i64 = 1_000_000;

/// An ordered list of distinct generator names. Letter `i` stands for the
/// `i`-th name, with a sign distinguishing the generator from its inverse.
#[derive(Debug)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, u32>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names
    }
}
impl Eq for Alphabet {}

impl Alphabet {
    /// Builds an alphabet from generator names. Names must be distinct,
    /// nonempty, and free of whitespace and `^` (the reserved exponent
    /// marker).
    pub fn new<I, S>(names: I) -> Result<Arc<Alphabet>, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must have rank >= 1".into()));
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidAlphabet("empty generator name".into()));
            }
            if name.chars().any(|c| c.is_whitespace()) || name.contains('^') {
                return Err(Error::InvalidAlphabet(format!(
                    "generator name `{name}` contains whitespace or `^`"
                )));
            }
            if index.insert(name.clone(), i as u32).is_some() {
                return Err(Error::InvalidAlphabet(format!(
                    "duplicate generator name `{name}`"
                )));
            }
        }
        Ok(Arc::new(Alphabet { names, index }))
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).map(|&i| i as usize)
    }

    /// Number of distinct signed letters, `2 * rank`.
    pub fn slot_count(&self) -> usize {
        2 * self.rank()
    }

    /// True when every name is a single lowercase ASCII letter, which is
    /// what compact word syntax requires.
    pub fn is_compact(&self) -> bool {
        self.names
            .iter()
            .all(|n| n.len() == 1 && n.chars().all(|c| c.is_ascii_lowercase()))
    }
}

/// One symbol of `X ∪ X⁻¹`: a generator index plus a sign. The derived
/// order is `x1 < x1⁻¹ < x2 < x2⁻¹ < …`, which every breadth-first search
/// in the crate uses as its tie-break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    index: u32,
    inverse: bool,
}

impl Letter {
    pub fn new(index: usize, inverse: bool) -> Letter {
        Letter {
            index: index as u32,
            inverse,
        }
    }

    pub fn positive(index: usize) -> Letter {
        Letter::new(index, false)
    }

    pub fn negative(index: usize) -> Letter {
        Letter::new(index, true)
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    pub fn inv(self) -> Letter {
        Letter {
            index: self.index,
            inverse: !self.inverse,
        }
    }

    /// Dense encoding `2 * index + sign`, aligned with the derived order.
    pub fn slot(self) -> usize {
        2 * self.index as usize + self.inverse as usize
    }

    pub fn from_slot(slot: usize) -> Letter {
        Letter {
            index: (slot / 2) as u32,
            inverse: slot % 2 == 1,
        }
    }
}

/// A sequence of signed letters over a fixed alphabet. The `reduced` flag
/// is computed at construction and records whether the sequence is free of
/// adjacent `x x⁻¹` pairs.
#[derive(Debug, Clone)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    letters: Vec<Letter>,
    reduced: bool,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters && self.alphabet == other.alphabet
    }
}
impl Eq for Word {}

fn scan_reduced(letters: &[Letter]) -> bool {
    letters.windows(2).all(|w| w[1] != w[0].inv())
}

impl Word {
    pub fn empty(alphabet: &Arc<Alphabet>) -> Word {
        Word {
            alphabet: Arc::clone(alphabet),
            letters: Vec::new(),
            reduced: true,
        }
    }

    pub fn from_letters(alphabet: &Arc<Alphabet>, letters: Vec<Letter>) -> Result<Word, Error> {
        let rank = alphabet.rank();
        for l in &letters {
            if l.index() >= rank {
                return Err(Error::LetterOutOfRange {
                    index: l.index(),
                    rank,
                });
            }
        }
        let reduced = scan_reduced(&letters);
        Ok(Word {
            alphabet: Arc::clone(alphabet),
            letters,
            reduced,
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn same_alphabet(&self, other: &Word) -> bool {
        Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet
    }

    /// The unique freely reduced word equal to this one in the free group,
    /// computed by a single left-to-right stack pass.
    pub fn reduce(&self) -> Word {
        if self.reduced {
            return self.clone();
        }
        let mut stack: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if stack.last() == Some(&l.inv()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        Word {
            alphabet: Arc::clone(&self.alphabet),
            letters: stack,
            reduced: true,
        }
    }

    /// Formal inverse: letters reversed with signs flipped.
    pub fn invert(&self) -> Word {
        let letters = self.letters.iter().rev().map(|l| l.inv()).collect();
        Word {
            alphabet: Arc::clone(&self.alphabet),
            letters,
            reduced: self.reduced,
        }
    }

    /// Concatenation followed by free reduction.
    pub fn concat_reduce(&self, other: &Word) -> Result<Word, Error> {
        if !self.same_alphabet(other) {
            return Err(Error::AlphabetMismatch);
        }
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(Word {
            alphabet: Arc::clone(&self.alphabet),
            letters,
            reduced: false,
        }
        .reduce())
    }

    /// Plain concatenation, no reduction.
    pub fn concat(&self, other: &Word) -> Result<Word, Error> {
        if !self.same_alphabet(other) {
            return Err(Error::AlphabetMismatch);
        }
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        let reduced = scan_reduced(&letters);
        Ok(Word {
            alphabet: Arc::clone(&self.alphabet),
            letters,
            reduced,
        })
    }

    /// Parses word syntax: whitespace-separated tokens `name` or `name^k`
    /// with `k` a nonzero decimal integer; negative `k` means the inverse
    /// repeated `|k|` times. Does not reduce.
    pub fn parse(alphabet: &Arc<Alphabet>, text: &str) -> Result<Word, Error> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            let (name, exp) = match token.split_once('^') {
                None => (token, 1i64),
                Some((name, exp_str)) => {
                    let exp: i64 = exp_str
                        .parse()
                        .map_err(|_| Error::MalformedExponent(token.to_string()))?;
                    if exp == 0 || exp.unsigned_abs() > MAX_PARSE_EXPONENT as u64 {
                        return Err(Error::MalformedExponent(token.to_string()));
                    }
                    (name, exp)
                }
            };
            let index = alphabet
                .index_of(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            let letter = Letter::new(index, exp < 0);
            for _ in 0..exp.unsigned_abs() {
                letters.push(letter);
            }
        }
        Word::from_letters(alphabet, letters)
    }

    /// Parses compact syntax over a single-letter lowercase alphabet:
    /// each lowercase character is a generator and each uppercase character
    /// the corresponding inverse, e.g. `abA` = `a·b·a⁻¹`.
    pub fn parse_compact(alphabet: &Arc<Alphabet>, text: &str) -> Result<Word, Error> {
        if !alphabet.is_compact() {
            return Err(Error::InvalidAlphabet(
                "compact syntax needs a single-letter lowercase alphabet".into(),
            ));
        }
        let mut letters = Vec::new();
        for c in text.chars() {
            if c.is_whitespace() {
                continue;
            }
            let (lower, inverse) = if c.is_ascii_lowercase() {
                (c, false)
            } else if c.is_ascii_uppercase() {
                (c.to_ascii_lowercase(), true)
            } else {
                return Err(Error::UnknownGenerator(c.to_string()));
            };
            let index = alphabet
                .index_of(&lower.to_string())
                .ok_or_else(|| Error::UnknownGenerator(c.to_string()))?;
            letters.push(Letter::new(index, inverse));
        }
        Word::from_letters(alphabet, letters)
    }

    /// Compact rendering; requires a compact alphabet.
    pub fn format_compact(&self) -> Result<String, Error> {
        if !self.alphabet.is_compact() {
            return Err(Error::InvalidAlphabet(
                "compact syntax needs a single-letter lowercase alphabet".into(),
            ));
        }
        let mut out = String::with_capacity(self.len());
        for l in &self.letters {
            let c = self.alphabet.name(l.index()).chars().next().unwrap();
            out.push(if l.is_inverse() {
                c.to_ascii_uppercase()
            } else {
                c
            });
        }
        Ok(out)
    }
}

impl fmt::Display for Word {
    /// Word syntax with runs of equal letters grouped, e.g. `a^3 b^-1`.
    /// Round-trips letter-for-letter through [`Word::parse`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        let mut first = true;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            let name = self.alphabet.name(l.index());
            let signed = if l.is_inverse() { -(run as i64) } else { run as i64 };
            if signed == 1 {
                write!(f, "{name}")?;
            } else {
                write!(f, "{name}^{signed}")?;
            }
            i += run;
        }
        Ok(())
    }
}
