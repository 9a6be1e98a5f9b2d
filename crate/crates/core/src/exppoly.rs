//! Exponential polynomials: finite sums c * x^p * e^{i m x} with exact
//! scalar coefficients, integer frequencies, and the canonical period
//! T = 2*pi.
//!
//! The class is closed under addition, multiplication, affine
//! substitution x -> ax + b (rational a, b a rational multiple of pi),
//! differentiation and antidifferentiation, which is exactly what the
//! iterated-integral recursion consumes.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive};

use crate::dyadic::Dyadic;
use crate::error::ExactError;
use crate::scalar::{GaussRat, Rat, Scalar};

/// One monomial c * x^xpow * e^{i freq x}.
#[derive(Clone, PartialEq, Debug)]
pub struct Term {
    pub coeff: Scalar,
    pub xpow: u32,
    pub freq: i64,
}

impl Term {
    pub fn new(coeff: Scalar, xpow: u32, freq: i64) -> Self {
        Term { coeff, xpow, freq }
    }
}

/// An exponential polynomial in canonical form: terms sorted by
/// (xpow, freq), no duplicate keys, no zero coefficients. The empty term
/// list is the zero function.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct ExpPoly {
    terms: Vec<Term>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        ExpPoly::from_terms(vec![Term::new(c, 0, 0)])
    }

    pub fn one() -> Self {
        ExpPoly::constant(Scalar::one())
    }

    /// The identity function x.
    pub fn x() -> Self {
        ExpPoly::from_terms(vec![Term::new(Scalar::one(), 1, 0)])
    }

    /// e^{i m x}.
    pub fn harmonic(m: i64) -> Self {
        ExpPoly::from_terms(vec![Term::new(Scalar::one(), 0, m)])
    }

    /// cos(m x) = (e^{imx} + e^{-imx}) / 2.
    pub fn cos(m: i64) -> Self {
        let half = Scalar::one().div_int(2);
        ExpPoly::from_terms(vec![
            Term::new(half.clone(), 0, m),
            Term::new(half, 0, -m),
        ])
    }

    /// sin(m x) = (e^{imx} - e^{-imx}) / 2i.
    pub fn sin(m: i64) -> Self {
        let half_over_i = Scalar::one().div_int(2).mul_i_pow(-1);
        ExpPoly::from_terms(vec![
            Term::new(half_over_i.clone(), 0, m),
            Term::new(-&half_over_i, 0, -m),
        ])
    }

    /// Builds the canonical form from arbitrary terms (merging duplicates,
    /// dropping zeros).
    pub fn from_terms(terms: Vec<Term>) -> Self {
        let mut terms = terms;
        terms.sort_by_key(|t| (t.xpow, t.freq));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.xpow == t.xpow && last.freq == t.freq {
                    last.coeff = &last.coeff + &t.coeff;
                    continue;
                }
            }
            out.push(t);
        }
        out.retain(|t| !t.coeff.is_zero());
        ExpPoly { terms: out }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> ExpPoly {
        if c.is_zero() {
            return ExpPoly::zero();
        }
        ExpPoly::from_terms(
            self.terms
                .iter()
                .map(|t| Term::new(&t.coeff * c, t.xpow, t.freq))
                .collect(),
        )
    }

    pub fn neg(&self) -> ExpPoly {
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(-&t.coeff, t.xpow, t.freq))
                .collect(),
        }
    }

    pub fn add(&self, other: &ExpPoly) -> ExpPoly {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        ExpPoly::from_terms(terms)
    }

    pub fn sub(&self, other: &ExpPoly) -> ExpPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &ExpPoly) -> ExpPoly {
        if self.is_zero() || other.is_zero() {
            return ExpPoly::zero();
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term::new(&a.coeff * &b.coeff, a.xpow + b.xpow, a.freq + b.freq));
            }
        }
        ExpPoly::from_terms(terms)
    }

    /// The antiderivative F with F' = self and F(0) = 0.
    ///
    /// Pure powers integrate to x^{p+1}/(p+1); terms with nonzero
    /// frequency integrate by parts, introducing 1/(im) factors that stay
    /// inside the scalar ring.
    pub fn antiderivative(&self) -> ExpPoly {
        let mut out = Vec::new();
        for t in &self.terms {
            if t.freq == 0 {
                out.push(Term::new(
                    t.coeff.div_int(i64::from(t.xpow) + 1),
                    t.xpow + 1,
                    0,
                ));
            } else {
                // int x^p e^{imx} dx
                //   = e^{imx} * sum_{j=0..p} (-1)^j p!/(p-j)! x^{p-j} / (im)^{j+1}
                let m = t.freq;
                let mut falling = BigInt::one(); // p! / (p-j)!
                let mut constant_at_zero = Scalar::zero();
                for j in 0..=t.xpow {
                    if j > 0 {
                        falling *= BigInt::from(i64::from(t.xpow) - i64::from(j) + 1);
                    }
                    // 1/(im)^{j+1} = i^{-(j+1)} / m^{j+1}
                    let mut c = &t.coeff * &Scalar::from_bigint(falling.clone());
                    if j % 2 == 1 {
                        c = -&c;
                    }
                    let m_pow = BigInt::from(m).pow(j + 1);
                    c = c
                        .div_gauss(&GaussRat::from_rat(Rat::from_integer(m_pow)))
                        .mul_i_pow(-(i64::from(j) + 1));
                    if j == t.xpow {
                        constant_at_zero = c.clone();
                    }
                    out.push(Term::new(c, t.xpow - j, m));
                }
                // enforce F(0) = 0
                out.push(Term::new(-&constant_at_zero, 0, 0));
            }
        }
        ExpPoly::from_terms(out)
    }

    /// Symbolic derivative.
    pub fn derivative(&self) -> ExpPoly {
        let mut out = Vec::new();
        for t in &self.terms {
            if t.xpow > 0 {
                out.push(Term::new(
                    t.coeff.mul_int(i64::from(t.xpow)),
                    t.xpow - 1,
                    t.freq,
                ));
            }
            if t.freq != 0 {
                out.push(Term::new(
                    t.coeff.mul_int(t.freq).mul_i_pow(1),
                    t.xpow,
                    t.freq,
                ));
            }
        }
        ExpPoly::from_terms(out)
    }

    /// Substitution x -> alpha x + beta with beta = beta_over_pi * pi.
    ///
    /// Requires alpha * m integral for every frequency m present, and the
    /// unit-circle factor e^{i m beta} to be a fourth root of unity
    /// (m * beta_over_pi a half-integer); inputs outside that class are
    /// rejected.
    pub fn affine(&self, alpha: &Rat, beta_over_pi: &Rat) -> Result<ExpPoly, ExactError> {
        let mut out = Vec::new();
        for t in &self.terms {
            let new_freq_rat = alpha * Rat::from_integer(BigInt::from(t.freq));
            if !new_freq_rat.is_integer() {
                return Err(ExactError::NonIntegralFrequency {
                    freq: t.freq,
                    alpha: alpha.clone(),
                });
            }
            let new_freq = new_freq_rat.to_integer().to_i64().ok_or(
                ExactError::NonIntegralFrequency {
                    freq: t.freq,
                    alpha: alpha.clone(),
                },
            )?;
            // e^{i m beta} with m*beta = (m*beta_over_pi) * pi: quarter
            // turns count is 2 * m * beta_over_pi.
            let quarter_turns = Rat::from_integer(BigInt::from(2 * t.freq)) * beta_over_pi;
            if !quarter_turns.is_integer() {
                return Err(ExactError::UnrepresentablePhase {
                    freq: t.freq,
                    at: format!("{}*pi", beta_over_pi),
                });
            }
            let phase_quarters = quarter_turns.to_integer().to_i64().unwrap_or(0).rem_euclid(4);
            let phased = t.coeff.mul_i_pow(phase_quarters);

            // (alpha x + beta)^p expanded binomially; beta^j carries pi^j.
            let p = t.xpow;
            let mut binom = BigInt::one();
            for j in 0..=p {
                if j > 0 {
                    binom = binom * BigInt::from(i64::from(p) - i64::from(j) + 1)
                        / BigInt::from(i64::from(j));
                }
                // coefficient of x^{p-j}: C(p,j) alpha^{p-j} beta^{j}
                let apow = pow_rat(alpha, p - j);
                let bpow = pow_rat(beta_over_pi, j);
                let factor = Scalar::gauss_pi_pow(
                    GaussRat::from_rat(Rat::from_integer(binom.clone()) * apow * bpow),
                    j as usize,
                );
                out.push(Term::new(&phased * &factor, p - j, new_freq));
            }
        }
        Ok(ExpPoly::from_terms(out))
    }

    /// Numeric evaluation at x.
    pub fn eval(&self, x: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let rot = Complex64::new(0.0, t.freq as f64 * x).exp();
            acc += t.coeff.to_complex() * x.powi(t.xpow as i32) * rot;
        }
        acc
    }

    /// Exact evaluation at a dyadic multiple of the period.
    ///
    /// With T = 2*pi the point is x = q*pi for rational q, so x^p stays a
    /// rational multiple of pi^p and e^{imx} must be a fourth root of
    /// unity; frequencies for which it is not are reported as errors.
    /// Terms with float coefficients evaluate numerically.
    pub fn eval_dyadic(&self, t: &Dyadic) -> Result<Scalar, ExactError> {
        let mut acc = Scalar::zero();
        for term in &self.terms {
            if !term.coeff.is_exact() {
                acc = &acc + &Scalar::float(
                    term.coeff.to_complex()
                        * t.to_f64().powi(term.xpow as i32)
                        * Complex64::new(0.0, term.freq as f64 * t.to_f64()).exp(),
                );
                continue;
            }
            // quarter turns: m * num * 2^{2-k}
            let k = t.depth();
            let raw = (term.freq as i128) * (t.numerator() as i128) * 4;
            let den = 1i128 << k;
            if raw % den != 0 {
                return Err(ExactError::UnrepresentablePhase {
                    freq: term.freq,
                    at: t.to_string(),
                });
            }
            let quarters = (raw / den).rem_euclid(4) as i64;
            // x^p = (2 num / 2^k)^p * pi^p
            let frac = t.times_period_over_pi();
            let xpow_part = Scalar::gauss_pi_pow(
                GaussRat::from_rat(pow_rat(&frac, term.xpow)),
                term.xpow as usize,
            );
            acc = &acc + &(&term.coeff.mul_i_pow(quarters) * &xpow_part);
        }
        Ok(acc)
    }

    /// Largest |frequency| present (0 for constants and zero).
    pub fn max_abs_freq(&self) -> i64 {
        self.terms.iter().map(|t| t.freq.abs()).max().unwrap_or(0)
    }

    pub fn max_xpow(&self) -> u32 {
        self.terms.iter().map(|t| t.xpow).max().unwrap_or(0)
    }

    /// Iterator over frequencies of exactly-represented terms, used for
    /// lattice validation.
    pub fn exact_freqs(&self) -> impl Iterator<Item = i64> + '_ {
        self.terms
            .iter()
            .filter(|t| t.coeff.is_exact())
            .map(|t| t.freq)
    }

    /// Crude numeric bound on sup |f| over [0, T] by the triangle
    /// inequality.
    pub fn sup_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.to_complex().norm() * std::f64::consts::TAU.powi(t.xpow as i32))
            .sum()
    }

    /// True when the function is real-valued: the coefficient of
    /// (p, -m) is the conjugate of that of (p, m).
    pub fn is_conj_symmetric(&self) -> bool {
        self.terms.iter().all(|t| {
            let mirror = self
                .terms
                .iter()
                .find(|u| u.xpow == t.xpow && u.freq == -t.freq)
                .map(|u| u.coeff.clone())
                .unwrap_or_else(Scalar::zero);
            mirror == t.coeff.conj()
        })
    }
}

fn pow_rat(r: &Rat, p: u32) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..p {
        acc *= r;
    }
    acc
}
