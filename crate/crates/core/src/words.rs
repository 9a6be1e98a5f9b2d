//! Words over the positive integers, compositions, and shuffle
//! combinatorics.
//!
//! A word (i_1, ..., i_k) indexes one basic iterated integral; its order
//! is i_1 + ... + i_k. The empty word indexes the order-0 integral,
//! which equals 1 by convention.

use std::fmt;

use crate::error::WordError;

/// A finite sequence of positive integer indices; may be empty.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(indices: Vec<u32>) -> Result<Self, WordError> {
        if indices.iter().any(|&i| i == 0) {
            return Err(WordError::BadIndex);
        }
        Ok(Word(indices))
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(i: u32) -> Self {
        Word(vec![i])
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sum of the indices.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// The word with one index appended.
    pub fn push(&self, i: u32) -> Word {
        let mut v = self.0.clone();
        v.push(i);
        Word(v)
    }

    /// The prefix of the first m indices.
    pub fn prefix(&self, m: usize) -> Word {
        Word(self.0[..m].to_vec())
    }

    pub fn reversed(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    /// All splittings w = u . v, including the trivial ones; there are
    /// len + 1 of them.
    pub fn splittings(&self) -> impl Iterator<Item = (Word, Word)> + '_ {
        (0..=self.0.len()).map(|m| (Word(self.0[..m].to_vec()), Word(self.0[m..].to_vec())))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

/// All ordered compositions of n, in lexicographic order; there are
/// exactly 2^{n-1}.
pub fn compositions(n: u32) -> Result<Vec<Word>, WordError> {
    if n == 0 {
        return Err(WordError::ZeroOrder);
    }
    let mut out = Vec::with_capacity(1 << (n - 1).min(24));
    let mut current = Vec::new();
    extend_compositions(n, &mut current, &mut out);
    Ok(out)
}

fn extend_compositions(remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Word>) {
    if remaining == 0 {
        out.push(Word(current.clone()));
        return;
    }
    for first in 1..=remaining {
        current.push(first);
        extend_compositions(remaining - first, current, out);
        current.pop();
    }
}

/// All words of order 1..=n, grouped by ascending order, lexicographic
/// within each order.
pub fn words_up_to(n: u32) -> Vec<Word> {
    let mut out = Vec::new();
    for order in 1..=n {
        out.extend(compositions(order).expect("order >= 1"));
    }
    out
}

/// The shuffle product of two words: every interleaving preserving the
/// internal order of each factor, with multiplicity. The result has
/// binomial(|u| + |v|, |u|) entries, repeats included.
pub fn shuffle(u: &Word, v: &Word) -> Vec<Word> {
    fn go(u: &[u32], v: &[u32], acc: &mut Vec<u32>, out: &mut Vec<Word>) {
        if u.is_empty() {
            let mut w = acc.clone();
            w.extend_from_slice(v);
            out.push(Word(w));
            return;
        }
        if v.is_empty() {
            let mut w = acc.clone();
            w.extend_from_slice(u);
            out.push(Word(w));
            return;
        }
        acc.push(u[0]);
        go(&u[1..], v, acc, out);
        acc.pop();
        acc.push(v[0]);
        go(u, &v[1..], acc, out);
        acc.pop();
    }
    let mut out = Vec::new();
    let mut acc = Vec::new();
    go(&u.0, &v.0, &mut acc, &mut out);
    out
}

/// Specification of one moment: base indices i_1, ..., i_{k+1} and
/// exponents n_1, ..., n_k, denoting
/// int_0^T (tilde a_{i_1})^{n_1} ... (tilde a_{i_k})^{n_k} a_{i_{k+1}}.
/// k = 0 is the plain integral of a_{i_1}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentSpec {
    bases: Vec<u32>,
    exps: Vec<u32>,
}

impl MomentSpec {
    pub fn new(bases: Vec<u32>, exps: Vec<u32>) -> Result<Self, WordError> {
        if bases.len() != exps.len() + 1 {
            return Err(WordError::BadIndex);
        }
        if bases.iter().any(|&i| i == 0) || exps.iter().any(|&n| n == 0) {
            return Err(WordError::BadIndex);
        }
        Ok(MomentSpec { bases, exps })
    }

    /// Base indices (i_1, ..., i_{k+1}).
    pub fn bases(&self) -> &[u32] {
        &self.bases
    }

    /// Exponents (n_1, ..., n_k).
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    /// The trailing index i_{k+1}.
    pub fn last_index(&self) -> u32 {
        *self.bases.last().expect("bases nonempty")
    }

    /// Sum of exponents plus one, the number of letters in the expanded
    /// words.
    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum::<u32>() + 1
    }
}

impl fmt::Display for MomentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m^(")?;
        for (k, n) in self.exps.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ")_(")?;
        for (k, i) in self.bases.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

/// Expands a moment into the multiset of basic-integral words whose plain
/// sum reproduces it: all interleavings of n_1 copies of (i_1), ...,
/// n_k copies of (i_k), each followed by the trailing index. An n-fold
/// power contributes its n! orderings, so no extra scaling is needed.
pub fn moment_shuffle_expand(spec: &MomentSpec) -> Vec<Word> {
    let mut words = vec![Word::empty()];
    for (idx, &n) in spec.exps.iter().enumerate() {
        let letter = Word::single(spec.bases[idx]);
        for _ in 0..n {
            let mut next = Vec::new();
            for w in &words {
                next.extend(shuffle(w, &letter));
            }
            words = next;
        }
    }
    words
        .into_iter()
        .map(|w| w.push(spec.last_index()))
        .collect()
}
