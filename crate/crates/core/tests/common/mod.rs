//! Independent oracles for the integration tests. Everything here is
//! deliberately naive: different algorithms, different representations, no
//! shared code with the library internals.
#![allow(dead_code)] // each test binary uses a different subset

use std::collections::{HashMap, HashSet, VecDeque};

// ---------------------------------------------------------------------------
// Laurent polynomials over Z, sparse in one variable
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Laurent {
    /// exponent -> coefficient, no zero coefficients stored
    terms: HashMap<i32, i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn term(coeff: i64, exp: i32) -> Self {
        let mut p = Laurent::default();
        if coeff != 0 {
            p.terms.insert(exp, coeff);
        }
        p
    }

    pub fn one() -> Self {
        Laurent::term(1, 0)
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (&e, &c) in &other.terms {
            let entry = out.terms.entry(e).or_insert(0);
            *entry += c;
            if *entry == 0 {
                out.terms.remove(&e);
            }
        }
        out
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::default();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &other.terms {
                let entry = out.terms.entry(e1 + e2).or_insert(0);
                *entry += c1 * c2;
                if *entry == 0 {
                    out.terms.remove(&(e1 + e2));
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Unreduced Burau representation of B_3 (faithful for three strands)
// ---------------------------------------------------------------------------

pub type Mat3 = [[Laurent; 3]; 3];

pub fn mat3_identity() -> Mat3 {
    let mut m: Mat3 = Default::default();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Laurent::one();
    }
    m
}

pub fn mat3_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out: Mat3 = Default::default();
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = Laurent::zero();
            for (k, b_row) in b.iter().enumerate() {
                acc = acc.add(&a[i][k].mul(&b_row[j]));
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Burau matrix of the generator σ_i (i = 1 or 2) or its inverse.
fn burau_generator(letter: i32) -> Mat3 {
    let i = (letter.unsigned_abs() - 1) as usize; // block starts at row i
    let mut m = mat3_identity();
    if letter > 0 {
        // [[1-t, t], [1, 0]]
        m[i][i] = Laurent::term(1, 0).add(&Laurent::term(-1, 1));
        m[i][i + 1] = Laurent::term(1, 1);
        m[i + 1][i] = Laurent::one();
        m[i + 1][i + 1] = Laurent::zero();
    } else {
        // [[0, 1], [t^-1, 1 - t^-1]]
        m[i][i] = Laurent::zero();
        m[i][i + 1] = Laurent::one();
        m[i + 1][i] = Laurent::term(1, -1);
        m[i + 1][i + 1] = Laurent::term(1, 0).add(&Laurent::term(-1, -1));
    }
    m
}

/// Burau image of a B_3 word over letters ±1, ±2.
pub fn burau_b3(letters: &[i32]) -> Mat3 {
    let mut m = mat3_identity();
    for &x in letters {
        assert!((1..=2).contains(&x.unsigned_abs()), "B3 letter {x}");
        m = mat3_mul(&m, &burau_generator(x));
    }
    m
}

pub fn burau_equal(u: &[i32], v: &[i32]) -> bool {
    burau_b3(u) == burau_b3(v)
}

// ---------------------------------------------------------------------------
// Bounded rewriting closure for B_3 words (exhaustive word-problem oracle)
// ---------------------------------------------------------------------------

fn free_reduce_naive(word: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for &x in word {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

/// Single-step rewrites of `w` staying within `cap` letters: free insertion
/// and deletion of inverse pairs, and the two positive braid-relation swaps
/// (σ1σ2σ1 <-> σ2σ1σ2 and the fully inverted form). Mixed-sign consequences
/// of the relation arise from chains of these moves.
fn rewrite_neighbors(w: &[i32], cap: usize, out: &mut Vec<Vec<i32>>) {
    out.clear();
    // deletions
    for i in 0..w.len().saturating_sub(1) {
        if w[i] == -w[i + 1] {
            let mut next = Vec::with_capacity(w.len() - 2);
            next.extend_from_slice(&w[..i]);
            next.extend_from_slice(&w[i + 2..]);
            out.push(next);
        }
    }
    // insertions
    if w.len() + 2 <= cap {
        for i in 0..=w.len() {
            for x in [1i32, -1, 2, -2] {
                let mut next = Vec::with_capacity(w.len() + 2);
                next.extend_from_slice(&w[..i]);
                next.push(x);
                next.push(-x);
                next.extend_from_slice(&w[i..]);
                out.push(next);
            }
        }
    }
    // braid relation swaps on length-3 windows
    for i in 0..w.len().saturating_sub(2) {
        let window = [w[i], w[i + 1], w[i + 2]];
        let swapped = match window {
            [1, 2, 1] => Some([2, 1, 2]),
            [2, 1, 2] => Some([1, 2, 1]),
            [-1, -2, -1] => Some([-2, -1, -2]),
            [-2, -1, -2] => Some([-1, -2, -1]),
            _ => None,
        };
        if let Some(s) = swapped {
            let mut next = w.to_vec();
            next[i..i + 3].copy_from_slice(&s);
            out.push(next);
        }
    }
}

/// Equivalence classes, by exhaustive closure within `cap` letters, of every
/// B_3 word of length ≤ `max_len`. Returns word -> class id. Words that are
/// equal in B_3 but only connectable through longer intermediates would end
/// up in different classes — callers cross-check against the Burau oracle to
/// confirm the cap suffices.
pub fn b3_rewriting_classes(max_len: usize, cap: usize) -> HashMap<Vec<i32>, usize> {
    let mut seeds: Vec<Vec<i32>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<i32>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for x in [1i32, -1, 2, -2] {
                let mut longer = w.clone();
                longer.push(x);
                next.push(longer);
            }
        }
        seeds.extend(next.iter().cloned());
        frontier = next;
    }

    let mut class_of: HashMap<Vec<i32>, usize> = HashMap::new();
    let mut next_class = 0usize;
    let mut neighbors = Vec::new();
    for seed in seeds {
        if class_of.contains_key(&seed) {
            continue;
        }
        // flood the whole component within the cap
        let id = next_class;
        next_class += 1;
        let mut visited: HashSet<Vec<i32>> = HashSet::new();
        let mut queue: VecDeque<Vec<i32>> = VecDeque::new();
        visited.insert(seed.clone());
        queue.push_back(seed);
        while let Some(w) = queue.pop_front() {
            rewrite_neighbors(&w, cap, &mut neighbors);
            for n in neighbors.drain(..) {
                if visited.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
            class_of.insert(w, id);
        }
    }
    class_of
}

/// All B_3 words (not necessarily reduced) of length ≤ max_len.
pub fn b3_words_up_to(max_len: usize) -> Vec<Vec<i32>> {
    let mut all: Vec<Vec<i32>> = vec![Vec::new()];
    let mut frontier: Vec<Vec<i32>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for x in [1i32, -1, 2, -2] {
                let mut longer = w.clone();
                longer.push(x);
                next.push(longer);
            }
        }
        all.extend(next.iter().cloned());
        frontier = next;
    }
    all
}

#[allow(dead_code)]
pub fn naive_free_reduce(word: &[i32]) -> Vec<i32> {
    free_reduce_naive(word)
}

// self-checks for the oracle itself
#[allow(dead_code)]
pub fn burau_sanity() {
    // braid relation
    assert!(burau_equal(&[1, 2, 1], &[2, 1, 2]));
    // inverses
    assert_eq!(burau_b3(&[1, -1]), mat3_identity());
    assert_eq!(burau_b3(&[-2, 2]), mat3_identity());
    // distinct generators differ
    assert!(!burau_equal(&[1], &[2]));
    assert!(!burau_equal(&[1], &[]));
}
