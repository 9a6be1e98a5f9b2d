//! Reduction of planar polynomial systems
//!
//!   dx/dt = -y + F(x, y),   dy/dt = x + G(x, y)
//!
//! (F, G without constant or linear terms) to the radial equation
//! dr/dphi = sum_i a_i(phi) r^{i+1} with trigonometric-polynomial
//! coefficients, plus weighted-homogeneity utilities.
//!
//! In polar coordinates x = r cos(phi), y = r sin(phi):
//!
//!   dr/dt   = (x F + y G) / r          = sum_{d>=2} r^d P_d(phi),
//!   dphi/dt = 1 + (x G - y F) / r^2    = 1 + sum_{d>=2} r^{d-1} Q_d(phi),
//!
//! and dividing the two expands as a truncated geometric series in r.
//! The angular speed is 1 + O(r), so the orientation convention here is
//! counterclockwise with period T = 2 pi.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::Zero;

use crate::coeffseq::CoeffSeq;
use crate::error::{NumericError, PolarError};
use crate::exppoly::ExpPoly;
use crate::numeric::dopri5;
use crate::piecewise::PiecewiseCoeff;
use crate::scalar::{GaussRat, Scalar};

/// A bivariate polynomial with Gaussian-rational coefficients, indexed
/// by monomial exponents (xpow, ypow).
#[derive(Clone, PartialEq, Debug, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<(u32, u32), GaussRat>,
}

impl BivariatePoly {
    pub fn new(terms: BTreeMap<(u32, u32), GaussRat>) -> Self {
        BivariatePoly {
            terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn zero() -> Self {
        BivariatePoly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), GaussRat> {
        &self.terms
    }

    /// Largest total degree present (None when zero).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(p, q)| p + q).max()
    }

    /// The homogeneous part of the given total degree.
    pub fn homogeneous_part(&self, d: u32) -> BivariatePoly {
        BivariatePoly {
            terms: self
                .terms
                .iter()
                .filter(|((p, q), _)| p + q == d)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Multiplies by a single monomial c * x^p y^q.
    fn mul_monomial(&self, c: &GaussRat, p: u32, q: u32) -> BivariatePoly {
        BivariatePoly {
            terms: self
                .terms
                .iter()
                .map(|((a, b), v)| ((a + p, b + q), v * c))
                .collect(),
        }
    }

    pub fn add(&self, other: &BivariatePoly) -> BivariatePoly {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let entry = terms.entry(*k).or_insert_with(GaussRat::zero);
            *entry = &*entry + v;
        }
        BivariatePoly::new(terms)
    }

    pub fn neg(&self) -> BivariatePoly {
        BivariatePoly {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }

    /// True when every coefficient is real.
    pub fn is_real(&self) -> bool {
        self.terms.values().all(|c| c.im.is_zero())
    }

    /// Numeric evaluation at a real point (real part of coefficients
    /// must carry all the information; use only on real polynomials).
    pub fn eval_real(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for ((p, q), c) in &self.terms {
            acc += c.to_complex().re * x.powi(*p as i32) * y.powi(*q as i32);
        }
        acc
    }
}

/// A planar polynomial field in the normal form dx/dt = -y + F,
/// dy/dt = x + G, where F and G carry only monomials of total degree
/// 2..=degree. Complex coefficients are admitted; realness is a checked
/// property, not a requirement.
#[derive(Clone, PartialEq, Debug)]
pub struct PlanarField {
    degree: u32,
    f: BivariatePoly,
    g: BivariatePoly,
}

impl PlanarField {
    pub fn new(f: BivariatePoly, g: BivariatePoly) -> Result<Self, PolarError> {
        for poly in [&f, &g] {
            if let Some(((p, q), _)) = poly.terms.iter().find(|((p, q), _)| p + q < 2) {
                return Err(PolarError::ForbiddenMonomial { xpow: *p, ypow: *q });
            }
        }
        let degree = f.degree().unwrap_or(2).max(g.degree().unwrap_or(2));
        Ok(PlanarField { degree, f, g })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn f(&self) -> &BivariatePoly {
        &self.f
    }

    pub fn g(&self) -> &BivariatePoly {
        &self.g
    }

    pub fn is_real(&self) -> bool {
        self.f.is_real() && self.g.is_real()
    }

    /// Number of nonzero monomials across F and G.
    pub fn monomial_count(&self) -> usize {
        self.f.terms.len() + self.g.terms.len()
    }
}

/// The trigonometric restriction of a homogeneous polynomial h of degree
/// d: the exponential polynomial f with h(r cos phi, r sin phi) =
/// r^d f(phi). Frequencies lie in {-d, ..., d} with the parity of d.
pub fn trig_restrict(h: &BivariatePoly) -> Result<ExpPoly, PolarError> {
    let degrees: Vec<u32> = {
        let mut ds: Vec<u32> = h.terms.keys().map(|(p, q)| p + q).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    };
    if degrees.len() > 1 {
        return Err(PolarError::NotHomogeneous { degrees });
    }
    let cos = ExpPoly::cos(1);
    let sin = ExpPoly::sin(1);
    let mut acc = ExpPoly::zero();
    for ((p, q), c) in &h.terms {
        let mut term = ExpPoly::constant(Scalar::from_gauss(c.clone()));
        for _ in 0..*p {
            term = term.mul(&cos);
        }
        for _ in 0..*q {
            term = term.mul(&sin);
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// Reduces a planar field to the radial series equation, truncated at
/// order N: returns the coefficient sequence a_1..a_N with
/// dr/dphi = p / (1 + q) = sum_i a_i(phi) r^{i+1}, each a_i a
/// single-piece trigonometric polynomial on [0, 2 pi].
pub fn polar_reduce(field: &PlanarField, order: u32) -> Result<CoeffSeq, PolarError> {
    if order == 0 {
        return Err(PolarError::BadOrder);
    }
    let cap = order as usize + 2; // powers of r up to r^{order+1}
    let mut radial = vec![ExpPoly::zero(); cap]; // p(phi, r)
    let mut angular = vec![ExpPoly::zero(); cap]; // q(phi, r)
    for d in 2..=field.degree() {
        let fd = field.f.homogeneous_part(d);
        let gd = field.g.homogeneous_part(d);
        if fd.is_zero() && gd.is_zero() {
            continue;
        }
        // x F_d + y G_d and x G_d - y F_d are homogeneous of degree d+1
        let p_num = fd
            .mul_monomial(&GaussRat::one(), 1, 0)
            .add(&gd.mul_monomial(&GaussRat::one(), 0, 1));
        let q_num = gd
            .mul_monomial(&GaussRat::one(), 1, 0)
            .add(&fd.mul_monomial(&GaussRat::one(), 0, 1).neg());
        if (d as usize) < cap {
            radial[d as usize] = radial[d as usize].add(&trig_restrict(&p_num)?);
        }
        if (d as usize - 1) < cap {
            angular[d as usize - 1] = angular[d as usize - 1].add(&trig_restrict(&q_num)?);
        }
    }

    // p * (1 + q)^{-1} by truncated geometric expansion: q has no
    // constant term, so powers past the truncation vanish.
    let mut geom = vec![ExpPoly::zero(); cap];
    geom[0] = ExpPoly::one();
    let neg_q: Vec<ExpPoly> = angular.iter().map(ExpPoly::neg).collect();
    let mut q_pow = geom.clone(); // (-q)^0
    for _ in 1..cap {
        q_pow = series_mul(&q_pow, &neg_q, cap);
        if q_pow.iter().all(ExpPoly::is_zero) {
            break;
        }
        for (slot, term) in geom.iter_mut().zip(&q_pow) {
            *slot = slot.add(term);
        }
    }
    let dr = series_mul(&radial, &geom, cap);

    let mut entries = BTreeMap::new();
    for i in 1..=order {
        let coeff = &dr[i as usize + 1];
        if !coeff.is_zero() {
            entries.insert(i, PiecewiseCoeff::from_poly(coeff.clone()));
        }
    }
    Ok(CoeffSeq::new(entries).expect("single-piece trig polynomials always validate"))
}

/// Truncated product of polynomial series in r with exponential-poly
/// coefficients (index = power of r).
fn series_mul(a: &[ExpPoly], b: &[ExpPoly], cap: usize) -> Vec<ExpPoly> {
    let mut out = vec![ExpPoly::zero(); cap];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if i + j >= cap {
                break;
            }
            if y.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// Number of coefficients of F and G for a degree-d field:
/// d^2 + 3d - 4.
pub fn param_count(degree: u32) -> Result<u64, PolarError> {
    if degree < 2 {
        return Err(PolarError::BadDegree { degree });
    }
    let d = u64::from(degree);
    Ok(d * d + 3 * d - 4)
}

/// A positive integer weight per variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlphaWeight(Vec<u32>);

impl AlphaWeight {
    pub fn new(weights: Vec<u32>) -> Result<Self, PolarError> {
        if weights.is_empty() || weights.iter().any(|&w| w == 0) {
            return Err(PolarError::BadWeight);
        }
        Ok(AlphaWeight(weights))
    }

    pub fn weights(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A sparse multivariate polynomial used by the weighted-homogeneity
/// check.
#[derive(Clone, PartialEq, Debug)]
pub struct MultiPoly {
    arity: usize,
    terms: Vec<(GaussRat, Vec<u32>)>,
}

impl MultiPoly {
    pub fn new(arity: usize, terms: Vec<(GaussRat, Vec<u32>)>) -> Result<Self, PolarError> {
        for (_, exps) in &terms {
            if exps.len() != arity {
                return Err(PolarError::ArityMismatch {
                    arity: exps.len(),
                    weights: arity,
                });
            }
        }
        Ok(MultiPoly {
            arity,
            terms: terms.into_iter().filter(|(c, _)| !c.is_zero()).collect(),
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

/// Result of a weighted-homogeneity check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlphaCheck {
    pub homogeneous: bool,
    /// The common weighted degree when homogeneous (None for the zero
    /// polynomial, which is vacuously homogeneous).
    pub weighted_degree: Option<u64>,
}

/// Checks whether p becomes homogeneous after the substitution
/// w_j -> w_j^{alpha_j}: every monomial must have the same weighted
/// degree sum_j alpha_j beta_j.
pub fn check_alpha_homogeneous(
    p: &MultiPoly,
    alpha: &AlphaWeight,
) -> Result<AlphaCheck, PolarError> {
    if p.arity != alpha.len() {
        return Err(PolarError::ArityMismatch {
            arity: p.arity,
            weights: alpha.len(),
        });
    }
    let mut degree: Option<u64> = None;
    for (_, exps) in &p.terms {
        let d: u64 = exps
            .iter()
            .zip(alpha.weights())
            .map(|(&b, &a)| u64::from(b) * u64::from(a))
            .sum();
        match degree {
            None => degree = Some(d),
            Some(seen) if seen != d => {
                return Ok(AlphaCheck {
                    homogeneous: false,
                    weighted_degree: None,
                })
            }
            Some(_) => {}
        }
    }
    Ok(AlphaCheck {
        homogeneous: true,
        weighted_degree: degree,
    })
}

/// Integrates the planar field itself (in the angle parametrization)
/// for one full turn from (x0, 0) and returns the distance between the
/// end point and the start. Requires a real field; the angular speed
/// must stay positive along the orbit, which holds for small x0.
pub fn planar_orbit_gap(field: &PlanarField, x0: f64) -> Result<f64, NumericError> {
    assert!(field.is_real(), "orbit integration needs a real field");
    let rhs = |_phi: f64, z: Complex64| -> Complex64 {
        let (x, y) = (z.re, z.im);
        let fx = field.f.eval_real(x, y);
        let gy = field.g.eval_real(x, y);
        let xdot = -y + fx;
        let ydot = x + gy;
        let r2 = x * x + y * y;
        let phidot = (x * ydot - y * xdot) / r2;
        Complex64::new(xdot / phidot, ydot / phidot)
    };
    let start = Complex64::new(x0, 0.0);
    let end = dopri5(&rhs, 0.0, std::f64::consts::TAU, start, 1e-13)?;
    Ok((end - start).norm())
}

/// Final radius after one turn, for checking spiral direction against
/// the sign of the leading return-map coefficient.
pub fn planar_orbit_radius_change(field: &PlanarField, x0: f64) -> Result<f64, NumericError> {
    assert!(field.is_real(), "orbit integration needs a real field");
    let rhs = |_phi: f64, z: Complex64| -> Complex64 {
        let (x, y) = (z.re, z.im);
        let xdot = -y + field.f.eval_real(x, y);
        let ydot = x + field.g.eval_real(x, y);
        let r2 = x * x + y * y;
        let phidot = (x * ydot - y * xdot) / r2;
        Complex64::new(xdot / phidot, ydot / phidot)
    };
    let start = Complex64::new(x0, 0.0);
    let end = dopri5(&rhs, 0.0, std::f64::consts::TAU, start, 1e-13)?;
    Ok(end.norm() - start.norm())
}
