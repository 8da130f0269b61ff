//! Words over a symmetric generating alphabet.
//!
//! A word is a sequence of nonzero signed letters; letter `i` and `-i` are
//! mutual inverses and `|i|` must lie in `1..=rank`. Words are plain syntax:
//! every group-specific interpretation (free, abelian, braid) lives in
//! [`crate::group`]. The only rewriting done here is free reduction, which is
//! valid in every quotient of the free group.

use crate::{Error, Result};
use std::fmt;

/// Symmetric alphabet `{±1, ..., ±rank}` shared by the words of one context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    rank: u32,
}

impl Alphabet {
    pub fn new(rank: u32) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Config("alphabet rank must be at least 1".into()));
        }
        Ok(Alphabet { rank })
    }

    pub fn rank(self) -> u32 {
        self.rank
    }

    pub fn contains(self, letter: i32) -> bool {
        letter != 0 && letter.unsigned_abs() <= self.rank
    }

    /// All signed letters in tie-break order: `-rank < ... < -1 < 1 < ... < rank`.
    pub fn letters(self) -> impl Iterator<Item = i32> {
        let rank = self.rank as i32;
        (-rank..=rank).filter(|&x| x != 0)
    }

    fn check(self, letter: i32) -> Result<()> {
        if self.contains(letter) {
            Ok(())
        } else {
            Err(Error::LetterOutOfRange {
                letter: letter as i64,
                rank: self.rank,
            })
        }
    }
}

/// An unreduced word. Equality is letter-by-letter; use a group context to
/// compare elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<i32>,
}

impl Word {
    pub fn identity(alphabet: Alphabet) -> Self {
        Word {
            alphabet,
            letters: Vec::new(),
        }
    }

    pub fn new(alphabet: Alphabet, letters: Vec<i32>) -> Result<Self> {
        for &x in &letters {
            alphabet.check(x)?;
        }
        Ok(Word { alphabet, letters })
    }

    /// Single-letter word.
    pub fn letter(alphabet: Alphabet, letter: i32) -> Result<Self> {
        alphabet.check(letter)?;
        Ok(Word {
            alphabet,
            letters: vec![letter],
        })
    }

    pub(crate) fn from_reduced(alphabet: Alphabet, letters: Vec<i32>) -> Self {
        debug_assert!(letters.iter().all(|&x| alphabet.contains(x)));
        Word { alphabet, letters }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    /// Letter count of the word as written (not a group length).
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Formal inverse: reverse the letters and negate each.
    pub fn inverse(&self) -> Word {
        Word {
            alphabet: self.alphabet,
            letters: self.letters.iter().rev().map(|&x| -x).collect(),
        }
    }

    /// Literal concatenation; performs no reduction.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.rank,
                right: other.alphabet.rank,
            });
        }
        let mut letters = Vec::with_capacity(self.letters.len() + other.letters.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(Word {
            alphabet: self.alphabet,
            letters,
        })
    }

    /// Cancel adjacent inverse pairs until none remain. The result is unique
    /// regardless of cancellation order.
    pub fn free_reduce(&self) -> Word {
        let mut letters = self.letters.clone();
        free_reduce_in_place(&mut letters);
        Word {
            alphabet: self.alphabet,
            letters,
        }
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.letters.windows(2).all(|p| p[0] != -p[1])
    }

    /// Net exponent of each generator, indexed by `letter - 1`.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0i64; self.alphabet.rank as usize];
        for &x in &self.letters {
            sums[(x.unsigned_abs() - 1) as usize] += x.signum() as i64;
        }
        sums
    }

    /// Comma-separated signed letters; the identity serializes to "".
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (i, &x) in self.letters.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(itoa(x).as_str());
        }
        out
    }

    /// Inverse of [`Word::serialize`]. Rejects zero, out-of-range letters, and
    /// anything that is not a comma-separated integer list.
    pub fn parse(alphabet: Alphabet, input: &str) -> Result<Word> {
        if input.is_empty() {
            return Ok(Word::identity(alphabet));
        }
        let mut letters = Vec::new();
        for part in input.split(',') {
            let n: i64 = part.trim().parse().map_err(|e| Error::WordParse {
                input: input.to_string(),
                reason: format!("bad letter {part:?}: {e}"),
            })?;
            if n == 0 || n.unsigned_abs() > alphabet.rank as u64 {
                return Err(Error::LetterOutOfRange {
                    letter: n,
                    rank: alphabet.rank,
                });
            }
            letters.push(n as i32);
        }
        Ok(Word { alphabet, letters })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[{}]", self.serialize())
    }
}

fn itoa(x: i32) -> String {
    x.to_string()
}

/// In-place free reduction via a stack pass; the input vector doubles as the
/// stack so this is O(n) time and O(1) extra space.
pub(crate) fn free_reduce_in_place(letters: &mut Vec<i32>) {
    let mut top = 0usize;
    for i in 0..letters.len() {
        let x = letters[i];
        if top > 0 && letters[top - 1] == -x {
            top -= 1;
        } else {
            letters[top] = x;
            top += 1;
        }
    }
    letters.truncate(top);
}

/// Push one letter onto a freely-reduced buffer, keeping it reduced.
pub(crate) fn push_reduced(buf: &mut Vec<i32>, letter: i32) {
    if buf.last() == Some(&-letter) {
        buf.pop();
    } else {
        buf.push(letter);
    }
}

/// Visit every freely reduced word of length <= `max_len`, breadth-first by
/// length and lexicographic within a length (letter order -m < ... < -1 < 1 <
/// ... < m). The visitor returns `Break` to stop early.
pub(crate) fn for_each_reduced_word<F>(alphabet: Alphabet, max_len: u32, mut visit: F)
where
    F: FnMut(&[i32]) -> std::ops::ControlFlow<()>,
{
    use std::ops::ControlFlow;
    if visit(&[]).is_break() {
        return;
    }
    let letters: Vec<i32> = alphabet.letters().collect();
    let mut frontier: Vec<Vec<i32>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * letters.len());
        for prefix in &frontier {
            for &x in &letters {
                if prefix.last() == Some(&-x) {
                    continue;
                }
                let mut word = Vec::with_capacity(prefix.len() + 1);
                word.extend_from_slice(prefix);
                word.push(x);
                if let ControlFlow::Break(()) = visit(&word) {
                    return;
                }
                next.push(word);
            }
        }
        frontier = next;
    }
}

/// Freely-reduced letters of `u^-1 v`, the geodesic difference used by
/// distance computations.
pub(crate) fn reduced_quotient(u: &Word, v: &Word) -> Vec<i32> {
    let mut buf = Vec::with_capacity(u.len() + v.len());
    for &x in u.letters.iter().rev() {
        push_reduced(&mut buf, -x);
    }
    for &x in &v.letters {
        push_reduced(&mut buf, x);
    }
    buf
}
