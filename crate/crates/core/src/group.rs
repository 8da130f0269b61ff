//! Platform groups: free groups, free-abelian groups, and braid groups.
//!
//! A [`GroupContext`] interprets words (see [`crate::word`]) as elements of a
//! concrete group and provides the operations the statistical machinery
//! needs: a length function, the induced left-invariant distance, an equality
//! test, and the set of descent directions.
//!
//! Free and free-abelian lengths are exact geodesic lengths. Braid length is
//! an upper bound computed by Dehornoy handle reduction: it is exact at 0
//! (empty reduced form iff the braid is trivial) and a heuristic otherwise,
//! which is all the attack requires.

use crate::word::{free_reduce_in_place, reduced_quotient, Alphabet, Word};
use crate::{Error, Result};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    /// Free group F_m: length = freely reduced word length.
    Free,
    /// Free abelian group Z^m: length = L1 norm of the exponent vector.
    FreeAbelian,
    /// Braid group B_n on n strands (alphabet rank n-1).
    Braid,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupContext {
    kind: GroupKind,
    alphabet: Alphabet,
    strands: u32,
    delta_directions: bool,
    conjugation_passes: u32,
    settle_points: bool,
}

impl GroupContext {
    pub fn free(rank: u32) -> Result<Self> {
        Ok(GroupContext {
            kind: GroupKind::Free,
            alphabet: Alphabet::new(rank)?,
            strands: 0,
            delta_directions: false,
            conjugation_passes: 0,
            settle_points: false,
        })
    }

    pub fn free_abelian(rank: u32) -> Result<Self> {
        Ok(GroupContext {
            kind: GroupKind::FreeAbelian,
            alphabet: Alphabet::new(rank)?,
            strands: 0,
            delta_directions: false,
            conjugation_passes: 0,
            settle_points: false,
        })
    }

    pub fn braid(strands: u32) -> Result<Self> {
        if strands < 2 {
            return Err(Error::Config("braid group needs at least 2 strands".into()));
        }
        Ok(GroupContext {
            kind: GroupKind::Braid,
            alphabet: Alphabet::new(strands - 1)?,
            strands,
            delta_directions: false,
            conjugation_passes: 0,
            settle_points: false,
        })
    }

    pub fn from_kind(kind: GroupKind, n: u32) -> Result<Self> {
        match kind {
            GroupKind::Free => Self::free(n),
            GroupKind::FreeAbelian => Self::free_abelian(n),
            GroupKind::Braid => Self::braid(n),
        }
    }

    /// Enable the half-twist directions `Δ, Δ^-1` for braid descent.
    pub fn with_delta_directions(mut self, on: bool) -> Self {
        self.delta_directions = on && self.kind == GroupKind::Braid;
        self
    }

    /// Extra conjugate-and-reduce passes in the braid length approximation.
    pub fn with_conjugation_passes(mut self, passes: u32) -> Self {
        self.conjugation_passes = passes;
        self
    }

    /// Replace accepted descent points by shorter representatives. Off by
    /// default: literal concatenation words preserve exact cancellations
    /// against unshortened samples, which measurably sharpens the braid
    /// weight landscape.
    pub fn with_settle_points(mut self, on: bool) -> Self {
        self.settle_points = on;
        self
    }

    pub fn settle_points(&self) -> bool {
        self.settle_points
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn rank(&self) -> u32 {
        self.alphabet.rank()
    }

    /// Strand count for braid contexts.
    pub fn strands(&self) -> Option<u32> {
        (self.kind == GroupKind::Braid).then_some(self.strands)
    }

    /// The "n" a user supplies on the command line: strand count for braids,
    /// rank otherwise.
    pub fn parameter_n(&self) -> u32 {
        match self.kind {
            GroupKind::Braid => self.strands,
            _ => self.alphabet.rank(),
        }
    }

    pub fn identity(&self) -> Word {
        Word::identity(self.alphabet)
    }

    /// Group length of the element represented by `w`. Exact for free and
    /// free-abelian groups; an upper bound on geodesic length for braids.
    pub fn length(&self, w: &Word) -> Result<u64> {
        self.check_word(w)?;
        self.length_of_letters(w.letters())
    }

    fn length_of_letters(&self, letters: &[i32]) -> Result<u64> {
        match self.kind {
            GroupKind::Free => Ok(reduced_len(letters) as u64),
            GroupKind::FreeAbelian => Ok(abelian_len(self.alphabet, letters)),
            GroupKind::Braid => braid_length_approx(letters, self.conjugation_passes),
        }
    }

    /// Left-invariant distance `d(u, v) = |u^-1 v|`.
    pub fn distance(&self, u: &Word, v: &Word) -> Result<u64> {
        self.check_word(u)?;
        self.check_word(v)?;
        if self.kind == GroupKind::FreeAbelian {
            // exponent arithmetic avoids materializing u^-1 v
            let eu = u.exponent_sums();
            let ev = v.exponent_sums();
            return Ok(eu
                .iter()
                .zip(&ev)
                .map(|(a, b)| a.abs_diff(*b))
                .sum());
        }
        let q = reduced_quotient(u, v);
        self.length_of_letters(&q)
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool> {
        self.check_word(u)?;
        self.check_word(v)?;
        match self.kind {
            GroupKind::Free => Ok(reduced_quotient(u, v).is_empty()),
            GroupKind::FreeAbelian => Ok(u.exponent_sums() == v.exponent_sums()),
            GroupKind::Braid => {
                let q = reduced_quotient(v, u); // v^-1 u, trivial iff u v^-1 is
                Ok(handle_reduce_letters(&q)?.is_empty())
            }
        }
    }

    pub fn is_identity(&self, w: &Word) -> Result<bool> {
        self.equal(w, &self.identity())
    }

    /// A short representative of the same element. Exact geodesic for free
    /// and free-abelian words; for braids the shorter of the freely reduced
    /// and handle-reduced forms.
    pub fn shorten(&self, w: &Word) -> Result<Word> {
        self.check_word(w)?;
        match self.kind {
            GroupKind::Free => Ok(w.free_reduce()),
            GroupKind::FreeAbelian => Ok(abelian_canonical(self.alphabet, w)),
            GroupKind::Braid => {
                let fr = w.free_reduce();
                let hr = handle_reduce_letters(fr.letters())?;
                if hr.len() < fr.len() {
                    Ok(Word::from_reduced(self.alphabet, hr))
                } else {
                    Ok(fr)
                }
            }
        }
    }

    /// Right-multiplication directions probed by direct descent, in tie-break
    /// order: generators `-m < ... < -1 < 1 < ... < m`, then `Δ, Δ^-1` when
    /// half-twist directions are enabled.
    pub fn descent_directions(&self) -> Vec<Word> {
        let mut dirs: Vec<Word> = self
            .alphabet
            .letters()
            .map(|x| Word::from_reduced(self.alphabet, vec![x]))
            .collect();
        if self.delta_directions {
            let delta = braid_half_twist(self.strands);
            dirs.push(delta.inverse());
            dirs.insert(dirs.len() - 1, delta);
        }
        dirs
    }

    /// Candidate point one step from `p` in direction `dir` (free reduction
    /// only; call [`GroupContext::shorten`] on accepted points).
    pub fn descent_step(&self, p: &Word, dir: &Word) -> Result<Word> {
        let stepped = p.concat(dir)?;
        match self.kind {
            GroupKind::FreeAbelian => Ok(abelian_canonical(self.alphabet, &stepped)),
            _ => Ok(stepped.free_reduce()),
        }
    }

    /// Word of `len` letters drawn uniformly from the signed alphabet.
    pub fn random_uniform_word(&self, len: u32, rng: &mut impl Rng) -> Word {
        let letters: Vec<i32> = (0..len).map(|_| self.random_letter(rng)).collect();
        Word::from_reduced(self.alphabet, letters)
    }

    /// Freely reduced word of exactly `len` letters: uniform first letter,
    /// each subsequent letter uniform among the 2m-1 non-cancelling choices.
    pub fn random_reduced_word(&self, len: u32, rng: &mut impl Rng) -> Word {
        let mut letters: Vec<i32> = Vec::with_capacity(len as usize);
        for _ in 0..len {
            loop {
                let x = self.random_letter(rng);
                if letters.last() != Some(&-x) {
                    letters.push(x);
                    break;
                }
            }
        }
        Word::from_reduced(self.alphabet, letters)
    }

    fn random_letter(&self, rng: &mut impl Rng) -> i32 {
        let m = self.alphabet.rank() as i32;
        let idx = rng.random_range(0..2 * m);
        if idx < m {
            idx - m // -m..=-1
        } else {
            idx - m + 1 // 1..=m
        }
    }

    /// Half-twist word Δ for braid contexts.
    pub fn half_twist(&self) -> Option<Word> {
        (self.kind == GroupKind::Braid).then(|| braid_half_twist(self.strands))
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        if w.alphabet() != self.alphabet {
            return Err(Error::AlphabetMismatch {
                left: self.alphabet.rank(),
                right: w.alphabet().rank(),
            });
        }
        Ok(())
    }
}

fn reduced_len(letters: &[i32]) -> usize {
    let mut stack: Vec<i32> = Vec::with_capacity(letters.len());
    for &x in letters {
        if stack.last() == Some(&-x) {
            stack.pop();
        } else {
            stack.push(x);
        }
    }
    stack.len()
}

fn abelian_len(alphabet: Alphabet, letters: &[i32]) -> u64 {
    let mut sums = vec![0i64; alphabet.rank() as usize];
    for &x in letters {
        sums[(x.unsigned_abs() - 1) as usize] += x.signum() as i64;
    }
    sums.iter().map(|s| s.unsigned_abs()).sum()
}

/// Geodesic normal form in Z^m: generators in ascending index order.
fn abelian_canonical(alphabet: Alphabet, w: &Word) -> Word {
    let sums = w.exponent_sums();
    let mut letters = Vec::new();
    for (i, &e) in sums.iter().enumerate() {
        let letter = if e >= 0 { i as i32 + 1 } else { -(i as i32 + 1) };
        for _ in 0..e.unsigned_abs() {
            letters.push(letter);
        }
    }
    Word::from_reduced(alphabet, letters)
}

// ---------------------------------------------------------------------------
// Dehornoy handle reduction
// ---------------------------------------------------------------------------

/// Rewrite budget for handle reduction: generous enough that legitimate
/// inputs at workbench scale never trip it, small enough to stop a runaway.
pub fn default_reduction_budget(len: usize) -> u64 {
    let l = len as u64;
    4096 + 32 * l * l
}

/// Dehornoy handle reduction. Returns a freely reduced, handle-free word
/// representing the same braid; the result is empty iff the braid is trivial.
pub fn handle_reduce(w: &Word) -> Result<Word> {
    let letters = handle_reduce_letters(w.letters())?;
    Ok(Word::from_reduced(w.alphabet(), letters))
}

/// As [`handle_reduce`] with an explicit rewrite budget.
pub fn handle_reduce_with_budget(w: &Word, budget: u64) -> Result<Word> {
    let mut letters = w.letters().to_vec();
    free_reduce_in_place(&mut letters);
    let mut left = budget;
    let input_len = w.len();
    reduce_region(&mut letters, &mut left).map_err(|_| Error::ReductionBudget {
        budget,
        len: input_len,
    })?;
    Ok(Word::from_reduced(w.alphabet(), letters))
}

pub(crate) fn handle_reduce_letters(letters: &[i32]) -> Result<Vec<i32>> {
    let mut work = letters.to_vec();
    free_reduce_in_place(&mut work);
    let budget = default_reduction_budget(work.len());
    let mut left = budget;
    reduce_region(&mut work, &mut left).map_err(|_| Error::ReductionBudget {
        budget,
        len: letters.len(),
    })?;
    Ok(work)
}

struct BudgetExhausted;

/// Reduce a freely reduced word to a handle-free word.
///
/// Strategy: repeatedly reduce the earliest-closing handle, i.e. the handle
/// `sigma_i^e v sigma_i^-e` (v free of indices <= i) whose final letter comes
/// first in the word. Such a handle can contain no nested handle (a nested
/// one would close earlier), which is the side condition Dehornoy's
/// termination theorem needs; reducing an outer handle across a nested
/// opposite pair of the next index can cycle forever.
fn reduce_region(w: &mut Vec<i32>, budget: &mut u64) -> std::result::Result<(), BudgetExhausted> {
    // rewrites never introduce an index above the current maximum
    let max_index = w.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as usize;
    let mut last = vec![usize::MAX; max_index + 1];
    loop {
        let Some((p, q)) = first_closing_handle(w, &mut last) else {
            return Ok(());
        };
        if *budget == 0 {
            return Err(BudgetExhausted);
        }
        *budget -= 1;
        let e = w[p].signum();
        let i = w[p].abs();
        // sigma_i^e v sigma_i^-e -> v with each sigma_{i+1}^d rewritten as
        // sigma_{i+1}^-e sigma_i^d sigma_{i+1}^e
        let mut repl: Vec<i32> = Vec::with_capacity(3 * (q - p));
        for &x in &w[p + 1..q] {
            if x.abs() == i + 1 {
                repl.push(-e * (i + 1));
                repl.push(x.signum() * i);
                repl.push(e * (i + 1));
            } else {
                repl.push(x);
            }
        }
        w.splice(p..=q, repl);
        free_reduce_in_place(w);
    }
}

/// Position pair `(p, q)` of the earliest-closing handle, if any: the
/// smallest q such that the most recent letter of index <= |w[q]| is exactly
/// the inverse letter (so the interior contains no index <= |w[q]|).
fn first_closing_handle(w: &[i32], last: &mut [usize]) -> Option<(usize, usize)> {
    last.fill(usize::MAX);
    for (q, &x) in w.iter().enumerate() {
        let i = x.unsigned_abs() as usize;
        let mut recent = usize::MAX;
        for slot in &last[1..=i] {
            if *slot != usize::MAX && (recent == usize::MAX || *slot > recent) {
                recent = *slot;
            }
        }
        if recent != usize::MAX && w[recent] == -x {
            return Some((recent, q));
        }
        last[i] = q;
    }
    None
}

/// Upper bound on braid geodesic length: the shorter of the freely reduced
/// and handle-reduced forms, optionally improved by deterministic
/// conjugate-and-reduce passes (`|w| <= 2j + |HR(u_j...u_1 w u_1^-1...u_j^-1)|`).
pub fn braid_length_approx(letters: &[i32], conjugation_passes: u32) -> Result<u64> {
    let mut reduced = letters.to_vec();
    free_reduce_in_place(&mut reduced);
    let fr_len = reduced.len() as u64;
    let mut cur = {
        let budget = default_reduction_budget(reduced.len());
        let mut left = budget;
        let mut work = reduced.clone();
        reduce_region(&mut work, &mut left).map_err(|_| Error::ReductionBudget {
            budget,
            len: letters.len(),
        })?;
        work
    };
    let mut best = (cur.len() as u64).min(fr_len);
    if best == 0 {
        return Ok(0);
    }
    let max_index = reduced.iter().map(|x| x.abs()).max().unwrap_or(1);
    for j in 1..=conjugation_passes {
        // cycle the conjugating generator through the indices in play
        let g = 1 + ((j - 1) as i32 % max_index);
        let mut conj = Vec::with_capacity(cur.len() + 2);
        conj.push(g);
        conj.extend_from_slice(&cur);
        conj.push(-g);
        free_reduce_in_place(&mut conj);
        let budget = default_reduction_budget(conj.len());
        let mut left = budget;
        reduce_region(&mut conj, &mut left).map_err(|_| Error::ReductionBudget {
            budget,
            len: letters.len(),
        })?;
        cur = conj;
        best = best.min(cur.len() as u64 + 2 * j as u64);
    }
    Ok(best)
}

/// Candidate ball for brute-force mean-sets: representatives of every element
/// within distance `radius` of `center`. Exact and duplicate-free for free
/// and free-abelian contexts; for braids a covering set of words `center·u`
/// with `|u| <= radius` (distinct words may repeat elements).
pub fn ball(ctx: &GroupContext, center: &Word, radius: u32) -> Result<Vec<Word>> {
    ctx.check_word(center)?;
    let mut out = Vec::new();
    match ctx.kind() {
        GroupKind::FreeAbelian => {
            let center_sums = center.exponent_sums();
            let rank = ctx.rank() as usize;
            let mut delta = vec![0i64; rank];
            fn rec(
                ctx: &GroupContext,
                center: &[i64],
                delta: &mut Vec<i64>,
                dim: usize,
                left: i64,
                out: &mut Vec<Word>,
            ) {
                if dim == delta.len() {
                    let alphabet = ctx.alphabet();
                    let mut letters = Vec::new();
                    for (i, (&c, &d)) in center.iter().zip(delta.iter()).enumerate() {
                        let e = c + d;
                        let letter = if e >= 0 { i as i32 + 1 } else { -(i as i32 + 1) };
                        for _ in 0..e.unsigned_abs() {
                            letters.push(letter);
                        }
                    }
                    out.push(Word::from_reduced(alphabet, letters));
                    return;
                }
                for d in -left..=left {
                    delta[dim] = d;
                    rec(ctx, center, delta, dim + 1, left - d.abs(), out);
                }
                delta[dim] = 0;
            }
            rec(ctx, &center_sums, &mut delta, 0, radius as i64, &mut out);
        }
        _ => {
            crate::word::for_each_reduced_word(ctx.alphabet(), radius, |letters| {
                let suffix = Word::from_reduced(ctx.alphabet(), letters.to_vec());
                out.push(center.concat(&suffix).unwrap().free_reduce());
                std::ops::ControlFlow::Continue(())
            });
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Permutation braids and the half twist
// ---------------------------------------------------------------------------

/// Half twist Δ in B_n: (σ1)(σ2 σ1)...(σ_{n-1}...σ1), n(n-1)/2 letters.
pub fn braid_half_twist(strands: u32) -> Word {
    let alphabet = Alphabet::new(strands.saturating_sub(1).max(1)).unwrap();
    let mut letters = Vec::with_capacity((strands * (strands - 1) / 2) as usize);
    for k in 1..strands as i32 {
        for i in (1..=k).rev() {
            letters.push(i);
        }
    }
    Word::from_reduced(alphabet, letters)
}

/// Positive braid word for a permutation of `0..n`: an insertion-sort
/// transcript, so the letter count equals the inversion count and the
/// identity permutation yields the empty word.
pub fn permutation_braid(strands: u32, perm: &[usize]) -> Result<Word> {
    let n = strands as usize;
    if perm.len() != n {
        return Err(Error::Config(format!(
            "permutation length {} does not match {} strands",
            perm.len(),
            n
        )));
    }
    let mut seen = vec![false; n];
    for &v in perm {
        if v >= n || seen[v] {
            return Err(Error::Config("not a permutation of 0..n".into()));
        }
        seen[v] = true;
    }
    let alphabet = Alphabet::new(strands.saturating_sub(1).max(1)).unwrap();
    let mut p = perm.to_vec();
    let mut letters: Vec<i32> = Vec::new();
    for i in 1..p.len() {
        let mut j = i;
        while j > 0 && p[j - 1] > p[j] {
            p.swap(j - 1, j);
            letters.push(j as i32); // crossing of strands j, j+1
            j -= 1;
        }
    }
    letters.reverse();
    Ok(Word::from_reduced(alphabet, letters))
}

/// Uniformly random permutation braid on `strands` strands.
pub fn random_permutation_braid(strands: u32, rng: &mut impl Rng) -> Word {
    let mut perm: Vec<usize> = (0..strands as usize).collect();
    perm.shuffle(rng);
    permutation_braid(strands, &perm).expect("shuffled permutation is valid")
}

pub fn inversion_count(perm: &[usize]) -> u64 {
    let mut count = 0u64;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                count += 1;
            }
        }
    }
    count
}
