//! Group operations on coefficient sequences: concatenation, inversion,
//! finite-order equivalence, and zero-mean membership.
//!
//! Concatenation squeezes a into the first half of the period and b into
//! the second half, doubling amplitudes; inversion is negated time
//! reversal. Under the return map these realize composition and inverse
//! of series: P(a*b) = P(b) o P(a).

use std::collections::BTreeMap;

use crate::coeffseq::CoeffSeq;
use crate::dyadic::Dyadic;
use crate::error::GroupError;
use crate::exppoly::ExpPoly;
use crate::integrals::IntegralEvaluator;
use crate::piecewise::PiecewiseCoeff;
use crate::returnmap::VERDICT_FLOAT_TOL;
use crate::scalar::{rat, Scalar};
use crate::words::{words_up_to, Word};

/// Maximum dyadic lattice depth reachable by chained concatenations.
/// Each concatenation halves breakpoints; the limit guards pathological
/// chains.
pub const CONCAT_DEPTH_LIMIT: u32 = 16;

/// The concatenation a*b: per index, 2 a_i(2t) on (0, T/2] and
/// 2 b_i(2t - T) on (T/2, T]. Support is the union of supports; the
/// result is validated against the joint dyadic lattice.
pub fn concat(a: &CoeffSeq, b: &CoeffSeq) -> Result<CoeffSeq, GroupError> {
    let depth = a.depth().max(b.depth()) + 1;
    if depth > CONCAT_DEPTH_LIMIT {
        return Err(GroupError::DepthLimit {
            depth,
            limit: CONCAT_DEPTH_LIMIT,
        });
    }
    let two = Scalar::from_int(2);
    let mut entries = BTreeMap::new();
    let support: std::collections::BTreeSet<u32> = a.support().chain(b.support()).collect();
    for i in support {
        let mut pieces = Vec::new();
        match a.entry(i) {
            None => pieces.push((Dyadic::half(), ExpPoly::zero())),
            Some(coeff) => {
                for (upper, f) in coeff.pieces() {
                    let squeezed = f
                        .affine(&rat(2, 1), &rat(0, 1))
                        .expect("integer scale keeps frequencies integral")
                        .scale(&two);
                    pieces.push((upper.halve(), squeezed));
                }
            }
        }
        match b.entry(i) {
            None => pieces.push((Dyadic::one(), ExpPoly::zero())),
            Some(coeff) => {
                for (upper, f) in coeff.pieces() {
                    // 2 b(2t - T): scale 2, shift -T = -2 pi
                    let squeezed = f
                        .affine(&rat(2, 1), &rat(-2, 1))
                        .expect("integer scale and full-period shift stay exact")
                        .scale(&two);
                    pieces.push((upper.shift_half(), squeezed));
                }
            }
        }
        let coeff = PiecewiseCoeff::from_pieces(pieces).map_err(GroupError::Coeff)?;
        entries.insert(i, coeff);
    }
    CoeffSeq::new(entries).map_err(GroupError::Coeff)
}

/// The inverse a^{-1}: per index, -a_i(T - t), with breakpoints
/// reflected. Involutive and always exact.
pub fn inverse(a: &CoeffSeq) -> CoeffSeq {
    let mut entries = BTreeMap::new();
    for (i, coeff) in a.iter() {
        let pieces = coeff.pieces();
        let mut reflected = Vec::with_capacity(pieces.len());
        for (j, (_, f)) in pieces.iter().enumerate().rev() {
            let lower = if j == 0 { Dyadic::zero() } else { pieces[j - 1].0 };
            let reversed = f
                .affine(&rat(-1, 1), &rat(2, 1))
                .expect("reflection keeps frequencies integral")
                .neg();
            reflected.push((lower.reflect(), reversed));
        }
        entries.insert(
            i,
            PiecewiseCoeff::from_pieces(reflected).expect("reflection preserves the layout"),
        );
    }
    CoeffSeq::new(entries).expect("reflection preserves lattice compatibility")
}

/// Outcome of a finite-order equivalence test.
#[derive(Clone, Debug)]
pub struct EquivVerdict {
    pub order_checked: u32,
    pub equivalent_up_to: bool,
    /// First word whose basic integral fails to vanish on a * b^{-1}.
    pub witness: Option<(Word, Scalar)>,
}

/// Tests a ~ b up to the given order: all basic iterated integrals of
/// a * b^{-1} with order <= N must vanish. A certificate, not a proof;
/// the underlying separation statements are not effective.
pub fn equivalent_up_to(a: &CoeffSeq, b: &CoeffSeq, order: u32) -> Result<EquivVerdict, GroupError> {
    let quotient = concat(a, &inverse(b))?;
    let mut ev = IntegralEvaluator::new(&quotient);
    for w in words_up_to(order) {
        let value = ev.iterated(&w);
        if !value.is_zero_for_verdict(VERDICT_FLOAT_TOL) {
            return Ok(EquivVerdict {
                order_checked: order,
                equivalent_up_to: false,
                witness: Some((w, value)),
            });
        }
    }
    Ok(EquivVerdict {
        order_checked: order,
        equivalent_up_to: true,
        witness: None,
    })
}

/// Membership in the zero-mean domain: every supported coefficient
/// integrates to zero over the period. Moments are additive exactly
/// there.
pub fn in_xstar(a: &CoeffSeq) -> bool {
    a.support().all(|i| {
        a.entry(i)
            .expect("supported index")
            .integral()
            .map(|v| v.is_zero_for_verdict(VERDICT_FLOAT_TOL))
            .unwrap_or(false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrals::iterated_integral;
    use crate::returnmap::{return_coeffs_iterated, ReturnSeries};

    fn const_at(index: u32, value: i64) -> CoeffSeq {
        CoeffSeq::single(index, PiecewiseCoeff::constant(Scalar::from_int(value))).unwrap()
    }

    fn w(v: &[u32]) -> Word {
        Word::new(v.to_vec()).unwrap()
    }

    #[test]
    fn concat_of_constants() {
        // a_1 = 1, b_1 = 1: (a*b)_1 = 2 on (0, T], and the integral
        // doubles to 2T = 4 pi
        let c = concat(&const_at(1, 1), &const_at(1, 1)).unwrap();
        let entry = c.entry(1).unwrap();
        assert_eq!(*entry, PiecewiseCoeff::constant(Scalar::from_int(2)));
        assert_eq!(
            entry.integral().unwrap(),
            &Scalar::from_int(4) * &Scalar::pi_pow(1)
        );
    }

    #[test]
    fn concat_with_zero_is_right_unit_under_integrals() {
        let a = CoeffSeq::single(1, PiecewiseCoeff::from_poly(ExpPoly::cos(1))).unwrap();
        let padded = concat(&a, &CoeffSeq::zero()).unwrap();
        for word in words_up_to(4) {
            assert_eq!(
                iterated_integral(&word, &padded),
                iterated_integral(&word, &a),
                "{word}"
            );
        }
    }

    #[test]
    fn concat_squeezes_cosine() {
        // a_1 = cos x, b = 0: 2 cos(2t) on (0, T/2], 0 after
        let a = CoeffSeq::single(1, PiecewiseCoeff::from_poly(ExpPoly::cos(1))).unwrap();
        let c = concat(&a, &CoeffSeq::zero()).unwrap();
        let expected = PiecewiseCoeff::from_pieces(vec![
            (Dyadic::half(), ExpPoly::cos(2).scale(&Scalar::from_int(2))),
            (Dyadic::one(), ExpPoly::zero()),
        ])
        .unwrap();
        assert_eq!(*c.entry(1).unwrap(), expected);
    }

    #[test]
    fn inverse_examples() {
        // constant 1 negates
        let inv = inverse(&const_at(1, 1));
        assert_eq!(
            *inv.entry(1).unwrap(),
            PiecewiseCoeff::constant(Scalar::from_int(-1))
        );

        // e^{ix} -> -e^{-ix}
        let h = CoeffSeq::single(2, PiecewiseCoeff::from_poly(ExpPoly::harmonic(1))).unwrap();
        assert_eq!(
            *inverse(&h).entry(2).unwrap(),
            PiecewiseCoeff::from_poly(ExpPoly::harmonic(-1).neg())
        );
    }

    #[test]
    fn inverse_is_involutive() {
        let mut m = BTreeMap::new();
        m.insert(
            1,
            PiecewiseCoeff::from_pieces(vec![
                (Dyadic::half(), ExpPoly::x()),
                (Dyadic::one(), ExpPoly::harmonic(2)),
            ])
            .unwrap(),
        );
        m.insert(3, PiecewiseCoeff::from_poly(ExpPoly::cos(1)));
        let a = CoeffSeq::new(m).unwrap();
        assert_eq!(inverse(&inverse(&a)), a);
    }

    #[test]
    fn concat_then_inverse_is_trivial_up_to_order() {
        let mut m = BTreeMap::new();
        m.insert(1, PiecewiseCoeff::from_poly(ExpPoly::cos(1).add(&ExpPoly::one())));
        m.insert(2, PiecewiseCoeff::from_poly(ExpPoly::sin(1)));
        let a = CoeffSeq::new(m).unwrap();
        let verdict = equivalent_up_to(&a, &a, 5).unwrap();
        assert!(verdict.equivalent_up_to);

        // and the return series of a * a^{-1} is the identity
        let trivial = concat(&a, &inverse(&a)).unwrap();
        let series = return_coeffs_iterated(&trivial, 5);
        assert_eq!(series, ReturnSeries::identity(5));
    }

    #[test]
    fn inequivalent_pair_has_witness() {
        // a_2 = 1 vs 0: witness (2) with value 2T... the doubled
        // half-period contribution is I_(2)(a) = 2 pi
        let a = const_at(2, 1);
        let verdict = equivalent_up_to(&a, &CoeffSeq::zero(), 4).unwrap();
        assert!(!verdict.equivalent_up_to);
        let (word, value) = verdict.witness.unwrap();
        assert_eq!(word, w(&[2]));
        assert_eq!(value, &Scalar::from_int(2) * &Scalar::pi_pow(1));
    }

    #[test]
    fn xstar_membership() {
        let cosx = CoeffSeq::single(1, PiecewiseCoeff::from_poly(ExpPoly::cos(1))).unwrap();
        assert!(in_xstar(&cosx));
        assert!(!in_xstar(&const_at(1, 1)));
        let mut m = BTreeMap::new();
        m.insert(1, PiecewiseCoeff::from_poly(ExpPoly::harmonic(1)));
        m.insert(2, PiecewiseCoeff::from_poly(ExpPoly::harmonic(-2)));
        assert!(in_xstar(&CoeffSeq::new(m).unwrap()));
    }

    #[test]
    fn depth_limit_guards_long_chains() {
        // distinct values per level keep adjacent pieces from merging,
        // so each concatenation genuinely deepens the lattice
        let mut acc = const_at(1, 1);
        for step in 0..=CONCAT_DEPTH_LIMIT {
            acc = match concat(&acc, &const_at(1, i64::from(step) + 2)) {
                Ok(next) => next,
                Err(GroupError::DepthLimit { .. }) => return,
                Err(e) => panic!("unexpected error {e}"),
            };
        }
        panic!("depth limit never triggered");
    }
}
