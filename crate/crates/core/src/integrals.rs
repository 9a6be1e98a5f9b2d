//! Exact evaluation of basic iterated integrals and moments.
//!
//! The basic iterated integral of a word (i_1, ..., i_k) is the simplex
//! integral of a_{i_k}(s_k) ... a_{i_1}(s_1) over
//! 0 <= s_1 <= ... <= s_k <= T. It is computed by the cumulative
//! recursion
//!
//!   N_0 = 1,   N_m(x) = int_0^x a_{i_m}(s) N_{m-1}(s) ds,
//!
//! which processes i_1 first: i_1 tags the innermost integration
//! variable, so (1,2) integrates a_2 against the antiderivative of a_1,
//! not the other way round. Index-order mistakes are the classic bug
//! here, so both the evaluator and its tests pin this convention.

use std::collections::HashMap;

use crate::coeffseq::CoeffSeq;
use crate::piecewise::PiecewiseCoeff;
use crate::scalar::Scalar;
use crate::words::{moment_shuffle_expand, MomentSpec, Word};

/// Memoizing evaluator bound to one coefficient sequence.
///
/// Return-map computation reuses word prefixes heavily, so the cumulative
/// functions N_m are cached per prefix. Construction of the underlying
/// sequence has already validated that every evaluation stays exact, so
/// the evaluator's API is infallible.
pub struct IntegralEvaluator<'a> {
    seq: &'a CoeffSeq,
    chains: HashMap<Word, PiecewiseCoeff>,
    tildes: HashMap<u32, PiecewiseCoeff>,
}

impl<'a> IntegralEvaluator<'a> {
    pub fn new(seq: &'a CoeffSeq) -> Self {
        let mut chains = HashMap::new();
        chains.insert(Word::empty(), PiecewiseCoeff::constant(Scalar::one()));
        IntegralEvaluator {
            seq,
            chains,
            tildes: HashMap::new(),
        }
    }

    pub fn sequence(&self) -> &CoeffSeq {
        self.seq
    }

    /// The cumulative function N_m for the given word, built bottom-up
    /// along its prefixes.
    pub fn cumulative(&mut self, w: &Word) -> PiecewiseCoeff {
        for m in 1..=w.len() {
            let prefix = w.prefix(m);
            if self.chains.contains_key(&prefix) {
                continue;
            }
            let index = prefix.indices()[m - 1];
            let prev = self.chains[&w.prefix(m - 1)].clone();
            let next = match self.seq.entry(index) {
                // missing coefficient: the zero function kills the chain
                None => PiecewiseCoeff::zero(),
                Some(_) if prev.is_zero() => PiecewiseCoeff::zero(),
                Some(a) => a
                    .mul(&prev)
                    .tilde()
                    .expect("validated sequence evaluates exactly"),
            };
            self.chains.insert(prefix, next);
        }
        self.chains[w].clone()
    }

    /// The basic iterated integral I_w(a), exact. The empty word gives 1;
    /// words touching unsupported indices give 0.
    pub fn iterated(&mut self, w: &Word) -> Scalar {
        self.cumulative(w)
            .end_value()
            .expect("validated sequence evaluates exactly")
    }

    /// The cumulative antiderivative of a_i (zero function if absent).
    pub fn tilde(&mut self, index: u32) -> PiecewiseCoeff {
        if let Some(t) = self.tildes.get(&index) {
            return t.clone();
        }
        let t = match self.seq.entry(index) {
            None => PiecewiseCoeff::zero(),
            Some(a) => a.tilde().expect("validated sequence evaluates exactly"),
        };
        self.tildes.insert(index, t.clone());
        t
    }

    /// The moment int_0^T (tilde a_{i_1})^{n_1} ... (tilde a_{i_k})^{n_k}
    /// a_{i_{k+1}} ds, exact.
    pub fn moment(&mut self, spec: &MomentSpec) -> Scalar {
        let last = match self.seq.entry(spec.last_index()) {
            None => return Scalar::zero(),
            Some(a) => a.clone(),
        };
        let mut integrand = last;
        for (idx, &n) in spec.exps().iter().enumerate() {
            let t = self.tilde(spec.bases()[idx]);
            for _ in 0..n {
                integrand = integrand.mul(&t);
            }
        }
        integrand
            .integral()
            .expect("validated sequence evaluates exactly")
    }
}

/// One-shot exact iterated integral.
pub fn iterated_integral(w: &Word, a: &CoeffSeq) -> Scalar {
    IntegralEvaluator::new(a).iterated(w)
}

/// One-shot exact moment.
pub fn moment(spec: &MomentSpec, a: &CoeffSeq) -> Scalar {
    IntegralEvaluator::new(a).moment(spec)
}

/// Evaluates a moment through its shuffle expansion into basic
/// integrals; used as a cross-check of the direct route.
pub fn moment_via_words(spec: &MomentSpec, ev: &mut IntegralEvaluator) -> Scalar {
    let mut acc = Scalar::zero();
    for w in moment_shuffle_expand(spec) {
        acc = &acc + &ev.iterated(&w);
    }
    acc
}
