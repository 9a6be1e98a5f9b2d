//! Exact scalars: polynomials in the transcendental constant pi with
//! Gaussian-rational coefficients, plus a complex-double fallback for
//! float mode.
//!
//! Every quantity the library certifies (integrals, moments, return-map
//! coefficients) lives in this ring. Treating pi as transcendental makes
//! equality decidable coefficient-wise, which is what makes exact zero
//! testing possible.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational, arbitrary precision.
pub type Rat = BigRational;

/// Builds a rational from an integer pair; panics on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// An element of Q(i): a complex number with rational real and imaginary
/// parts.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn zero() -> Self {
        GaussRat::default()
    }

    pub fn one() -> Self {
        GaussRat::new(Rat::one(), Rat::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRat::new(Rat::zero(), Rat::one())
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat::new(rat(n, 1), Rat::zero())
    }

    pub fn from_rat(re: Rat) -> Self {
        GaussRat::new(re, Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Self {
        let norm = &self.re * &self.re + &self.im * &self.im;
        assert!(!norm.is_zero(), "division by zero GaussRat");
        GaussRat::new(&self.re / &norm, -&self.im / &norm)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Multiplies by i^k (k taken mod 4).
    pub fn mul_i_pow(&self, k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => GaussRat::new(-self.im.clone(), self.re.clone()),
            2 => GaussRat::new(-self.re.clone(), -self.im.clone()),
            _ => GaussRat::new(self.im.clone(), -self.re.clone()),
        }
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

#[derive(Clone, Debug)]
enum Repr {
    /// coeffs[k] multiplies pi^k; trailing zeros trimmed, so the
    /// representation is canonical and equality is coefficient-wise.
    Exact(Vec<GaussRat>),
    Float(Complex64),
}

/// A scalar value: exact element of Q(i)[pi], or a complex double in
/// float mode. Arithmetic is contagious — any operation touching a float
/// operand yields a float.
#[derive(Clone, Debug)]
pub struct Scalar(Repr);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Repr::Exact(Vec::new()))
    }

    pub fn one() -> Self {
        Scalar::from_gauss(GaussRat::one())
    }

    pub fn i() -> Self {
        Scalar::from_gauss(GaussRat::i())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_gauss(GaussRat::from_int(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::from_gauss(GaussRat::from_rat(Rat::from_integer(n)))
    }

    pub fn from_rat(r: Rat) -> Self {
        Scalar::from_gauss(GaussRat::from_rat(r))
    }

    pub fn from_gauss(g: GaussRat) -> Self {
        if g.is_zero() {
            Scalar::zero()
        } else {
            Scalar(Repr::Exact(vec![g]))
        }
    }

    /// g * pi^k as an exact scalar.
    pub fn gauss_pi_pow(g: GaussRat, k: usize) -> Self {
        if g.is_zero() {
            return Scalar::zero();
        }
        let mut coeffs = vec![GaussRat::zero(); k + 1];
        coeffs[k] = g;
        Scalar(Repr::Exact(coeffs))
    }

    /// pi^k as an exact scalar.
    pub fn pi_pow(k: usize) -> Self {
        Scalar::gauss_pi_pow(GaussRat::one(), k)
    }

    /// A float-mode scalar.
    pub fn float(z: Complex64) -> Self {
        Scalar(Repr::Float(z))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.0, Repr::Exact(_))
    }

    /// Exact zero test in exact mode; bitwise zero in float mode.
    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Exact(c) => c.is_empty(),
            Repr::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    /// Zero test appropriate for verdicts: exact scalars are tested
    /// exactly, float scalars against an absolute tolerance.
    pub fn is_zero_for_verdict(&self, float_tol: f64) -> bool {
        match &self.0 {
            Repr::Exact(c) => c.is_empty(),
            Repr::Float(z) => z.norm() <= float_tol,
        }
    }

    /// The Gaussian-rational part of pi^k, if exact.
    pub fn exact_coeff(&self, k: usize) -> Option<GaussRat> {
        match &self.0 {
            Repr::Exact(c) => Some(c.get(k).cloned().unwrap_or_else(GaussRat::zero)),
            Repr::Float(_) => None,
        }
    }

    /// Degree in pi of an exact scalar (None for 0 or float).
    pub fn pi_degree(&self) -> Option<usize> {
        match &self.0 {
            Repr::Exact(c) if !c.is_empty() => Some(c.len() - 1),
            _ => None,
        }
    }

    /// Numeric value, evaluating pi to double precision.
    pub fn to_complex(&self) -> Complex64 {
        match &self.0 {
            Repr::Exact(c) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for g in c.iter().rev() {
                    acc = acc * std::f64::consts::PI + g.to_complex();
                }
                acc
            }
            Repr::Float(z) => *z,
        }
    }

    pub fn conj(&self) -> Scalar {
        match &self.0 {
            Repr::Exact(c) => Scalar(Repr::Exact(c.iter().map(|g| g.conj()).collect())),
            Repr::Float(z) => Scalar(Repr::Float(z.conj())),
        }
    }

    /// Division by a Gaussian rational. The only divisions the algebra
    /// ever needs (1/(p+1) from power integration, 1/(im) from harmonic
    /// integration) are of this shape.
    pub fn div_gauss(&self, d: &GaussRat) -> Scalar {
        match &self.0 {
            Repr::Exact(c) => {
                let inv = d.inv();
                Scalar::trim(c.iter().map(|g| g * &inv).collect())
            }
            Repr::Float(z) => Scalar(Repr::Float(z / d.to_complex())),
        }
    }

    pub fn div_int(&self, n: i64) -> Scalar {
        self.div_gauss(&GaussRat::from_int(n))
    }

    pub fn mul_int(&self, n: i64) -> Scalar {
        self * &Scalar::from_int(n)
    }

    /// Multiplies by i^k without allocating a second scalar.
    pub fn mul_i_pow(&self, k: i64) -> Scalar {
        match &self.0 {
            Repr::Exact(c) => Scalar(Repr::Exact(c.iter().map(|g| g.mul_i_pow(k)).collect())),
            Repr::Float(z) => {
                let f = match k.rem_euclid(4) {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                };
                Scalar(Repr::Float(z * f))
            }
        }
    }

    fn trim(mut coeffs: Vec<GaussRat>) -> Scalar {
        while coeffs.last().is_some_and(GaussRat::is_zero) {
            coeffs.pop();
        }
        Scalar(Repr::Exact(coeffs))
    }

    /// True when both values agree: exactly for exact pairs, within
    /// `float_tol` (absolute, scaled by magnitude) otherwise.
    pub fn agrees_with(&self, other: &Scalar, float_tol: f64) -> bool {
        match (&self.0, &other.0) {
            (Repr::Exact(_), Repr::Exact(_)) => self == other,
            _ => {
                let (x, y) = (self.to_complex(), other.to_complex());
                let scale = x.norm().max(y.norm()).max(1.0);
                (x - y).norm() <= float_tol * scale
            }
        }
    }

    /// Renders the exact pi-polynomial form, e.g. `2*pi^2 + (0+1i)*pi`.
    /// Float scalars render as a bare decimal pair.
    pub fn render(&self) -> String {
        match &self.0 {
            Repr::Exact(c) => render_exact(c),
            Repr::Float(z) => format!("({:e}{}{}i)", z.re, if z.im < 0.0 { "" } else { "+" }, z.im),
        }
    }

    /// Parses the exact rendering produced by [`Scalar::render`].
    pub fn parse(text: &str) -> Result<Scalar, ScalarParseError> {
        parse_exact(text)
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Exact(a), Repr::Exact(b)) => a == b,
            _ => self.to_complex() == other.to_complex(),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Exact(a), Repr::Exact(b)) => {
                let n = a.len().max(b.len());
                let mut out = Vec::with_capacity(n);
                for k in 0..n {
                    let x = a.get(k).cloned().unwrap_or_else(GaussRat::zero);
                    let y = b.get(k).cloned().unwrap_or_else(GaussRat::zero);
                    out.push(&x + &y);
                }
                Scalar::trim(out)
            }
            _ => Scalar(Repr::Float(self.to_complex() + rhs.to_complex())),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Exact(a), Repr::Exact(b)) => {
                if a.is_empty() || b.is_empty() {
                    return Scalar::zero();
                }
                let mut out = vec![GaussRat::zero(); a.len() + b.len() - 1];
                for (j, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (k, y) in b.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        out[j + k] = &out[j + k] + &(x * y);
                    }
                }
                Scalar::trim(out)
            }
            _ => Scalar(Repr::Float(self.to_complex() * rhs.to_complex())),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Exact(c) => Scalar(Repr::Exact(c.iter().map(|g| -g).collect())),
            Repr::Float(z) => Scalar(Repr::Float(-z)),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarParseError {
    pub message: String,
}

impl fmt::Display for ScalarParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid scalar literal: {}", self.message)
    }
}

impl std::error::Error for ScalarParseError {}

fn render_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn render_gauss(g: &GaussRat) -> String {
    if g.im.is_zero() {
        render_rat(&g.re)
    } else {
        format!(
            "({}{}{}i)",
            render_rat(&g.re),
            if g.im.is_negative() { "" } else { "+" },
            render_rat(&g.im)
        )
    }
}

fn render_exact(coeffs: &[GaussRat]) -> String {
    if coeffs.is_empty() {
        return "0".to_owned();
    }
    let mut parts = Vec::new();
    for (k, g) in coeffs.iter().enumerate().rev() {
        if g.is_zero() {
            continue;
        }
        let head = render_gauss(g);
        let part = match k {
            0 => head,
            1 => format!("{head}*pi"),
            _ => format!("{head}*pi^{k}"),
        };
        parts.push(part);
    }
    parts.join(" + ")
}

fn parse_rat(text: &str) -> Result<Rat, ScalarParseError> {
    let err = || ScalarParseError {
        message: format!("bad rational {text:?}"),
    };
    match text.split_once('/') {
        Some((n, d)) => {
            let num: BigInt = n.trim().parse().map_err(|_| err())?;
            let den: BigInt = d.trim().parse().map_err(|_| err())?;
            if den.is_zero() {
                return Err(err());
            }
            Ok(Rat::new(num, den))
        }
        None => {
            let num: BigInt = text.trim().parse().map_err(|_| err())?;
            Ok(Rat::from_integer(num))
        }
    }
}

fn parse_gauss(text: &str) -> Result<GaussRat, ScalarParseError> {
    let t = text.trim();
    if let Some(inner) = t.strip_prefix('(').and_then(|s| s.strip_suffix("i)")) {
        // Split re and im at the sign that follows the real part.
        let bytes = inner.as_bytes();
        let mut split = None;
        for (pos, &b) in bytes.iter().enumerate().skip(1) {
            if (b == b'+' || b == b'-') && bytes[pos - 1] != b'/' && bytes[pos - 1].is_ascii_digit()
            {
                split = Some(pos);
            }
        }
        let pos = split.ok_or_else(|| ScalarParseError {
            message: format!("bad complex part {text:?}"),
        })?;
        let re = parse_rat(&inner[..pos])?;
        let im_text = &inner[pos..];
        let im = parse_rat(im_text.strip_prefix('+').unwrap_or(im_text))?;
        Ok(GaussRat::new(re, im))
    } else {
        Ok(GaussRat::from_rat(parse_rat(t)?))
    }
}

fn parse_exact(text: &str) -> Result<Scalar, ScalarParseError> {
    let t = text.trim();
    if t == "0" {
        return Ok(Scalar::zero());
    }
    let mut acc = Scalar::zero();
    for part in t.split(" + ") {
        let (coeff_text, power) = match part.split_once("*pi") {
            None => (part, 0usize),
            Some((c, rest)) => {
                let k = if rest.is_empty() {
                    1
                } else {
                    let digits = rest.strip_prefix('^').ok_or_else(|| ScalarParseError {
                        message: format!("bad pi power {part:?}"),
                    })?;
                    digits.parse().map_err(|_| ScalarParseError {
                        message: format!("bad pi power {part:?}"),
                    })?
                };
                (c, k)
            }
        };
        let g = parse_gauss(coeff_text)?;
        acc = &acc + &Scalar::gauss_pi_pow(g, power);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi2() -> Scalar {
        Scalar::pi_pow(2)
    }

    #[test]
    fn arithmetic_stays_canonical() {
        let a = &Scalar::from_int(2) * &pi2();
        let b = &Scalar::from_int(-2) * &pi2();
        assert!((&a + &b).is_zero());
        assert_eq!(&a + &Scalar::zero(), a);
    }

    #[test]
    fn gaussian_division() {
        // 1 / i = -i
        let inv = Scalar::one().div_gauss(&GaussRat::i());
        assert_eq!(inv, -&Scalar::i());
        // (3 + 0i) / 3 = 1
        assert_eq!(Scalar::from_int(3).div_int(3), Scalar::one());
    }

    #[test]
    fn i_power_cycle() {
        let s = Scalar::from_int(2);
        assert_eq!(s.mul_i_pow(0), Scalar::from_int(2));
        assert_eq!(s.mul_i_pow(1), &Scalar::from_int(2) * &Scalar::i());
        assert_eq!(s.mul_i_pow(2), Scalar::from_int(-2));
        assert_eq!(s.mul_i_pow(4), s.mul_i_pow(-4));
        assert_eq!(s.mul_i_pow(3), s.mul_i_pow(-1));
    }

    #[test]
    fn float_contagion() {
        let x = &Scalar::float(Complex64::new(1.5, 0.0)) + &Scalar::one();
        assert!(!x.is_exact());
        assert_eq!(x.to_complex(), Complex64::new(2.5, 0.0));
    }

    #[test]
    fn render_matches_expected_shape() {
        let s = &(&Scalar::from_int(2) * &pi2()) + &(&Scalar::i() * &Scalar::pi_pow(1));
        assert_eq!(s.render(), "2*pi^2 + (0+1i)*pi");
        assert_eq!(Scalar::zero().render(), "0");
        assert_eq!(Scalar::from_rat(rat(-3, 2)).render(), "-3/2");
    }

    #[test]
    fn parse_round_trip() {
        let samples = [
            Scalar::zero(),
            Scalar::one(),
            Scalar::from_rat(rat(-7, 3)),
            Scalar::gauss_pi_pow(GaussRat::new(rat(1, 2), rat(-3, 4)), 3),
            &(&Scalar::from_int(2) * &pi2()) + &(&Scalar::i() * &Scalar::pi_pow(1)),
            &Scalar::pi_pow(1) - &Scalar::from_int(4),
        ];
        for s in samples {
            assert_eq!(Scalar::parse(&s.render()).unwrap(), s, "{}", s.render());
        }
    }

    #[test]
    fn complex_evaluation() {
        let s = &Scalar::from_int(2) * &pi2();
        let expect = 2.0 * std::f64::consts::PI * std::f64::consts::PI;
        assert!((s.to_complex().re - expect).abs() < 1e-12);
        assert_eq!(s.to_complex().im, 0.0);
    }
}
