//! First-return-map coefficients and center certification.
//!
//! The return map P(a)(r) = v(T; r) of dv/dx = sum_i a_i(x) v^{i+1} is a
//! series r + sum_n c_n r^{n+1}. Two independent exact routes compute
//! the c_n:
//!
//! * the combinatorial route: c_n as a weighted sum of basic iterated
//!   integrals over all compositions of n;
//! * the transport route: plugging an undetermined series into the ODE
//!   and integrating the triangular system of coefficient equations.
//!
//! A verdict is only ever issued when both routes agree; disagreement is
//! a defect of the implementation, not data.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::One;

use crate::coeffseq::CoeffSeq;
use crate::error::{CrossCheckError, WordError};
use crate::integrals::IntegralEvaluator;
use crate::piecewise::PiecewiseCoeff;
use crate::scalar::Scalar;
use crate::words::{compositions, Word};

/// Absolute tolerance used for zero tests and pipeline comparison when
/// the input carries float scalars. Exact inputs are always tested
/// exactly.
pub const VERDICT_FLOAT_TOL: f64 = 1e-9;

/// A truncated return-map series r + c_1 r^2 + ... + c_N r^{N+1}, an
/// element of the series group under composition, known up to order
/// N + 1.
#[derive(Clone, PartialEq, Debug)]
pub struct ReturnSeries {
    coeffs: Vec<Scalar>,
}

/// Composition of two series truncated at different orders is rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderMismatch {
    pub left: u32,
    pub right: u32,
}

impl fmt::Display for OrderMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "series truncation orders differ: {} vs {}",
            self.left, self.right
        )
    }
}

impl std::error::Error for OrderMismatch {}

impl ReturnSeries {
    /// The identity series r, truncated at the given order.
    pub fn identity(order: u32) -> Self {
        ReturnSeries {
            coeffs: vec![Scalar::zero(); order as usize],
        }
    }

    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Self {
        ReturnSeries { coeffs }
    }

    /// Truncation order N: coefficients c_1 ... c_N are known.
    pub fn order(&self) -> u32 {
        self.coeffs.len() as u32
    }

    /// c_n, 1-based; n must be within the truncation order.
    pub fn coeff(&self, n: u32) -> &Scalar {
        &self.coeffs[(n - 1) as usize]
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// Numeric evaluation r + sum c_n r^{n+1}.
    pub fn eval(&self, r: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = (acc + c.to_complex()) * r;
        }
        (acc + Complex64::new(1.0, 0.0)) * r
    }

    /// Composition self(other(r)), truncation-stable because both series
    /// fix r to first order.
    pub fn compose(&self, other: &ReturnSeries) -> Result<ReturnSeries, OrderMismatch> {
        if self.order() != other.order() {
            return Err(OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        let n = self.coeffs.len();
        // power vectors over r^1 .. r^{n+1}; index k holds the
        // coefficient of r^{k+1}
        let mut g = vec![Scalar::one()];
        g.extend(other.coeffs.iter().cloned());
        let mut result = g.clone();
        let mut gpow = g.clone();
        for c in &self.coeffs {
            gpow = trunc_mul(&gpow, &g, n + 1);
            if c.is_zero() {
                continue;
            }
            for (slot, term) in result.iter_mut().zip(&gpow) {
                *slot = &*slot + &(c * term);
            }
        }
        Ok(ReturnSeries {
            coeffs: result[1..].to_vec(),
        })
    }

    /// Compositional inverse up to the truncation order, by triangular
    /// back-substitution.
    pub fn inverse(&self) -> ReturnSeries {
        let n = self.order();
        let mut inv = ReturnSeries::identity(n);
        for k in 1..=n {
            let residual = self
                .compose(&inv)
                .expect("orders match by construction")
                .coeff(k)
                .clone();
            inv.coeffs[(k - 1) as usize] = -&residual;
        }
        inv
    }

    /// Coefficient-wise agreement; exact where both sides are exact.
    pub fn agrees_with(&self, other: &ReturnSeries, float_tol: f64) -> bool {
        self.order() == other.order()
            && self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .all(|(x, y)| x.agrees_with(y, float_tol))
    }
}

/// Product of two series given as coefficient vectors over r^1..r^{cap},
/// truncated at r^{cap}.
fn trunc_mul(a: &[Scalar], b: &[Scalar], cap: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); cap];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let idx = i + j + 1; // power (i+1) + (j+1) lands at index i+j+1
            if idx >= cap {
                break;
            }
            if y.is_zero() {
                continue;
            }
            out[idx] = &out[idx] + &(x * y);
        }
    }
    out
}

/// The integer weight of one word in the return-map formula:
/// (n - i_1 + 1)(n - i_1 - i_2 + 1) ... 1 with n the word's order.
pub fn comb_coefficient(w: &Word) -> Result<BigInt, WordError> {
    if w.is_empty() {
        return Err(WordError::EmptyWord);
    }
    let n = i64::from(w.order());
    let mut partial = 0i64;
    let mut product = BigInt::one();
    for &i in w.indices() {
        partial += i64::from(i);
        product *= BigInt::from(n - partial + 1);
    }
    Ok(product)
}

/// Return-map coefficients via the weighted-integral formula:
/// c_n = sum over compositions of n of comb_coefficient(w) * I_w(a).
pub fn return_coeffs_iterated(a: &CoeffSeq, order: u32) -> ReturnSeries {
    assert!(order >= 1, "truncation order must be >= 1");
    let mut ev = IntegralEvaluator::new(a);
    let mut coeffs = Vec::with_capacity(order as usize);
    for n in 1..=order {
        let mut c = Scalar::zero();
        for w in compositions(n).expect("n >= 1") {
            // skip words that touch unsupported indices; their chains
            // vanish identically
            if w.indices().iter().any(|&i| a.entry(i).is_none()) {
                continue;
            }
            let weight = comb_coefficient(&w).expect("nonempty word");
            c = &c + &(&Scalar::from_bigint(weight) * &ev.iterated(&w));
        }
        coeffs.push(c);
    }
    ReturnSeries { coeffs }
}

/// Return-map coefficients via series transport: substitute
/// v = r + sum c_n(x) r^{n+1} into the ODE, match powers of r, and
/// integrate the triangular system c_n'(x) = (known in a, c_{m<n})
/// exactly; c_n = c_n(T).
pub fn return_coeffs_transport(a: &CoeffSeq, order: u32) -> ReturnSeries {
    assert!(order >= 1, "truncation order must be >= 1");
    let cap = order as usize + 1;
    // coefficient functions of v over powers r^1..r^{cap}; index k holds
    // the function multiplying r^{k+1}
    let mut v: Vec<PiecewiseCoeff> = vec![PiecewiseCoeff::zero(); cap];
    v[0] = PiecewiseCoeff::constant(Scalar::one());
    let mut coeffs = Vec::with_capacity(order as usize);
    for n in 1..=order as usize {
        // r^{n+1} coefficient of sum_i a_i v^{i+1}; only c_{m<n} enter
        let mut rhs = PiecewiseCoeff::zero();
        let mut vpow = v.clone(); // v^1
        let mut power = 1u32;
        for i in a.support() {
            while power < i + 1 {
                vpow = trunc_mul_pw(&vpow, &v, cap);
                power += 1;
            }
            let coeff_fn = a.entry(i).expect("supported index");
            // vpow holds v^{i+1}; its index n is the r^{n+1} coefficient,
            // which only involves c_{m<n} because v^{i+1} has >= 2 factors
            if !vpow[n].is_zero() {
                rhs = rhs.add(&coeff_fn.mul(&vpow[n]));
            }
        }
        let cn = rhs.tilde().expect("validated sequence evaluates exactly");
        coeffs.push(cn.end_value().expect("validated sequence evaluates exactly"));
        v[n] = cn;
    }
    ReturnSeries { coeffs }
}

/// Truncated product of two power series with piecewise-function
/// coefficients, both supported on r^1..r^{cap}.
fn trunc_mul_pw(a: &[PiecewiseCoeff], b: &[PiecewiseCoeff], cap: usize) -> Vec<PiecewiseCoeff> {
    let mut out = vec![PiecewiseCoeff::zero(); cap];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let idx = i + j + 1;
            if idx >= cap {
                break;
            }
            if y.is_zero() {
                continue;
            }
            out[idx] = out[idx].add(&x.mul(y));
        }
    }
    out
}

/// One entry of the evidence trail behind a verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct EvidenceItem {
    pub quantity: String,
    pub value: String,
    pub vanishes: bool,
}

/// Outcome of a finite-order center check. Every claim is an order-N
/// certificate: the underlying system of equations is infinite, so
/// "center up to N" is never a proof of center.
#[derive(Clone, Debug)]
pub struct CenterVerdict {
    pub order_checked: u32,
    pub is_center_up_to: bool,
    /// Present exactly when the verdict is negative: the first n with
    /// c_n != 0 and its value.
    pub first_nonzero: Option<(u32, Scalar)>,
    pub is_universal_up_to: bool,
    /// First word (order <= N) whose basic integral does not vanish,
    /// when the data is not a universal center.
    pub first_nonvanishing_word: Option<(Word, Scalar)>,
    /// The quantities that were checked, with rendered values.
    pub evidence: Vec<EvidenceItem>,
    /// The agreed return series (kept for reporting and evaluation).
    pub series: ReturnSeries,
}

/// Exact center check through both pipelines.
///
/// The two exact routes must agree coefficient-by-coefficient; any
/// disagreement aborts with an internal error instead of producing a
/// verdict. Universality is decided by testing every basic iterated
/// integral of order <= N.
pub fn center_check(a: &CoeffSeq, order: u32) -> Result<CenterVerdict, CrossCheckError> {
    assert!(order >= 1, "truncation order must be >= 1");
    let via_integrals = return_coeffs_iterated(a, order);
    let via_transport = return_coeffs_transport(a, order);
    for n in 1..=order {
        let (x, y) = (via_integrals.coeff(n), via_transport.coeff(n));
        if !x.agrees_with(y, VERDICT_FLOAT_TOL) {
            return Err(CrossCheckError {
                order: n,
                detail: format!(
                    "return-map pipelines disagree at c_{n}: {} vs {}",
                    x.render(),
                    y.render()
                ),
            });
        }
    }

    let mut evidence = Vec::new();
    let mut first_nonzero = None;
    for n in 1..=order {
        let c = via_integrals.coeff(n);
        let vanishes = c.is_zero_for_verdict(VERDICT_FLOAT_TOL);
        evidence.push(EvidenceItem {
            quantity: format!("c_{n}"),
            value: c.render(),
            vanishes,
        });
        if !vanishes && first_nonzero.is_none() {
            first_nonzero = Some((n, c.clone()));
        }
    }

    let mut ev = IntegralEvaluator::new(a);
    let mut first_word = None;
    for n in 1..=order {
        let words = compositions(n).expect("n >= 1");
        let total = words.len();
        let mut vanishing = 0usize;
        for w in words {
            let value = ev.iterated(&w);
            if value.is_zero_for_verdict(VERDICT_FLOAT_TOL) {
                vanishing += 1;
            } else if first_word.is_none() {
                first_word = Some((w, value));
            }
        }
        evidence.push(EvidenceItem {
            quantity: format!("I_w for the {total} words of order {n}"),
            value: format!("{vanishing}/{total} vanish"),
            vanishes: vanishing == total,
        });
    }

    Ok(CenterVerdict {
        order_checked: order,
        is_center_up_to: first_nonzero.is_none(),
        first_nonzero,
        is_universal_up_to: first_word.is_none(),
        first_nonvanishing_word: first_word,
        evidence,
        series: via_integrals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exppoly::ExpPoly;
    use crate::scalar::rat;

    fn w(v: &[u32]) -> Word {
        Word::new(v.to_vec()).unwrap()
    }

    fn const_at(index: u32) -> CoeffSeq {
        CoeffSeq::single(index, PiecewiseCoeff::constant(Scalar::one())).unwrap()
    }

    fn two_pi_pow(k: u32) -> Scalar {
        // (2 pi)^k
        &Scalar::from_int(1 << k) * &Scalar::pi_pow(k as usize)
    }

    #[test]
    fn comb_coefficient_examples() {
        assert_eq!(comb_coefficient(&w(&[2])).unwrap(), BigInt::from(1));
        assert_eq!(comb_coefficient(&w(&[1, 1])).unwrap(), BigInt::from(2));
        assert_eq!(comb_coefficient(&w(&[1, 1, 1])).unwrap(), BigInt::from(6));
        assert!(comb_coefficient(&Word::empty()).is_err());
    }

    #[test]
    fn zero_sequence_gives_identity() {
        let s = return_coeffs_iterated(&CoeffSeq::zero(), 5);
        assert!(s.is_identity());
        let t = return_coeffs_transport(&CoeffSeq::zero(), 5);
        assert!(t.is_identity());
    }

    #[test]
    fn geometric_return_map() {
        // a_1 = 1: v(T) = r/(1 - T r), so c_n = T^n
        let a = const_at(1);
        let s = return_coeffs_iterated(&a, 6);
        let t = return_coeffs_transport(&a, 6);
        for n in 1..=6 {
            assert_eq!(*s.coeff(n), two_pi_pow(n), "c_{n}");
            assert_eq!(*t.coeff(n), two_pi_pow(n), "transport c_{n}");
        }
    }

    #[test]
    fn odd_equation_return_map() {
        // a_2 = 1: v(T) = r (1 - 2 T r^2)^{-1/2}:
        // c_1 = 0, c_2 = T, c_3 = 0, c_4 = 3 T^2 / 2 = 6 pi^2
        let a = const_at(2);
        let s = return_coeffs_iterated(&a, 4);
        assert!(s.coeff(1).is_zero());
        assert_eq!(*s.coeff(2), two_pi_pow(1));
        assert!(s.coeff(3).is_zero());
        assert_eq!(*s.coeff(4), &Scalar::from_int(6) * &Scalar::pi_pow(2));
        assert!(s.agrees_with(&return_coeffs_transport(&a, 4), 0.0));
    }

    #[test]
    fn hand_identities_for_low_coefficients() {
        // c_1 = I_(1); c_2 = I_(2) + 2 I_(1,1)
        let mut m = std::collections::BTreeMap::new();
        m.insert(1, PiecewiseCoeff::from_poly(ExpPoly::cos(1).add(&ExpPoly::one())));
        m.insert(
            2,
            PiecewiseCoeff::from_poly(ExpPoly::sin(1).scale(&Scalar::from_rat(rat(2, 3)))),
        );
        let a = CoeffSeq::new(m).unwrap();
        let s = return_coeffs_iterated(&a, 2);
        let mut ev = IntegralEvaluator::new(&a);
        assert_eq!(*s.coeff(1), ev.iterated(&w(&[1])));
        let expected =
            &ev.iterated(&w(&[2])) + &ev.iterated(&w(&[1, 1])).mul_int(2);
        assert_eq!(*s.coeff(2), expected);
    }

    #[test]
    fn compose_examples() {
        // f o identity = f
        let f = ReturnSeries::from_coeffs(vec![
            Scalar::from_int(1),
            Scalar::from_int(-2),
            Scalar::from_rat(rat(1, 3)),
            Scalar::zero(),
        ]);
        let id = ReturnSeries::identity(4);
        assert_eq!(f.compose(&id).unwrap(), f);
        assert_eq!(id.compose(&f).unwrap(), f);

        // (r + r^2) o (r + r^2) = r + 2r^2 + 2r^3 + r^4
        let g = ReturnSeries::from_coeffs(vec![
            Scalar::one(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
        ]);
        let gg = g.compose(&g).unwrap();
        assert_eq!(
            gg.coeffs().to_vec(),
            vec![
                Scalar::from_int(2),
                Scalar::from_int(2),
                Scalar::from_int(1),
                Scalar::zero()
            ]
        );

        // order mismatch is rejected
        assert!(f.compose(&ReturnSeries::identity(3)).is_err());
    }

    #[test]
    fn inverse_examples() {
        // identity is its own inverse
        let id = ReturnSeries::identity(4);
        assert_eq!(id.inverse(), id);

        // inverse of r + r^2 is r - r^2 + 2r^3 - 5r^4
        let g = ReturnSeries::from_coeffs(vec![
            Scalar::one(),
            Scalar::zero(),
            Scalar::zero(),
            Scalar::zero(),
        ]);
        let inv = g.inverse();
        assert_eq!(
            inv.coeffs().to_vec(),
            vec![
                Scalar::from_int(-1),
                Scalar::from_int(2),
                Scalar::from_int(-5),
                Scalar::from_int(14)
            ]
        );
        assert!(g.compose(&inv).unwrap().is_identity());
        assert!(inv.compose(&g).unwrap().is_identity());
        assert_eq!(inv.inverse(), g);
    }

    #[test]
    fn center_check_examples() {
        // zero data: center and universal at any order
        let verdict = center_check(&CoeffSeq::zero(), 4).unwrap();
        assert!(verdict.is_center_up_to);
        assert!(verdict.is_universal_up_to);
        assert!(verdict.first_nonzero.is_none());

        // a_2 = 1: not a center; witness (2, 2 pi)
        let verdict = center_check(&const_at(2), 4).unwrap();
        assert!(!verdict.is_center_up_to);
        let (n, value) = verdict.first_nonzero.unwrap();
        assert_eq!(n, 2);
        assert_eq!(value, two_pi_pow(1));
        assert!(!verdict.is_universal_up_to);
    }

    #[test]
    fn composition_condition_data_is_universal() {
        // a_i = q_i'(sin x) cos x with q_1 = u, q_2 = u^2: every tilde
        // factors through sin, so all basic integrals vanish
        let mut m = std::collections::BTreeMap::new();
        m.insert(1, PiecewiseCoeff::from_poly(ExpPoly::cos(1)));
        m.insert(
            2,
            PiecewiseCoeff::from_poly(
                ExpPoly::sin(1).mul(&ExpPoly::cos(1)).scale(&Scalar::from_int(2)),
            ),
        );
        let a = CoeffSeq::new(m).unwrap();
        let verdict = center_check(&a, 6).unwrap();
        assert!(verdict.is_universal_up_to, "{:?}", verdict.first_nonvanishing_word);
        assert!(verdict.is_center_up_to);
    }
}
