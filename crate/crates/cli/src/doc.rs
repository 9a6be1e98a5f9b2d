//! JSON document schemas for equations and planar fields, and their
//! validation into core types.
//!
//! Exact values travel as strings ("3/2", "2*pi^2 + 1") so no float
//! contamination can happen in exact mode; plain decimals are accepted
//! only in float mode. Breakpoints are fractions of the period written
//! as "0", "T", "T/2", "3T/4", ...; non-dyadic fractions are rejected.

use std::collections::BTreeMap;
use std::fmt;

use centerflow::coeffseq::CoeffSeq;
use centerflow::dyadic::Dyadic;
use centerflow::error::CoeffError;
use centerflow::exppoly::{ExpPoly, Term};
use centerflow::piecewise::PiecewiseCoeff;
use centerflow::polar::{BivariatePoly, PlanarField};
use centerflow::scalar::{GaussRat, Rat, Scalar};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Schema tag emitted on every document.
pub const SCHEMA: &str = "cfl-1";

/// Largest planar-field degree the parser accepts.
pub const MAX_FIELD_DEGREE: u32 = 12;

/// Computation mode: exact scalars or complex doubles.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

/// A path-qualified input diagnostic.
#[derive(Debug, Clone)]
pub struct DocError {
    pub path: String,
    pub message: String,
}

impl DocError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        DocError {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for DocError {}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EquationDoc {
    #[serde(default = "default_schema")]
    pub schema: String,
    pub period: String,
    pub coefficients: Vec<CoeffEntryDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_field: Option<String>,
}

fn default_schema() -> String {
    SCHEMA.to_owned()
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CoeffEntryDoc {
    pub index: u32,
    pub pieces: Vec<PieceDoc>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PieceDoc {
    pub from: String,
    pub to: String,
    pub terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    #[serde(default = "zero_string")]
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
    #[serde(default)]
    pub xpow: u32,
    #[serde(default)]
    pub freq: i64,
}

fn zero_string() -> String {
    "0".to_owned()
}

/// Record of a period normalization performed on ingestion.
#[derive(Serialize, Clone, Debug, PartialEq)]
pub struct RescaleNote {
    pub original_period: String,
    /// T / (2 pi), the ratio applied as (ratio)^{xpow+1} per term.
    pub ratio_to_canonical: String,
}

/// Parses a period descriptor into the ratio T / (2 pi).
///
/// Exact mode accepts rational multiples of pi ("2pi", "pi", "pi/2",
/// "3pi/2"); float mode additionally accepts decimals.
fn parse_period(text: &str, mode: Mode) -> Result<Rat, DocError> {
    let t = text.trim();
    let err = |msg: &str| DocError::new("period", format!("{msg}: {t:?}"));
    if let Some(pos) = t.find("pi") {
        let (head, tail) = (&t[..pos], &t[pos + 2..]);
        let head = head.trim_end_matches('*').trim();
        let num: BigInt = if head.is_empty() {
            BigInt::one()
        } else {
            head.parse()
                .map_err(|_| err("bad multiplier in period"))?
        };
        let den: BigInt = if tail.is_empty() {
            BigInt::one()
        } else {
            let digits = tail
                .strip_prefix('/')
                .ok_or_else(|| err("bad divisor in period"))?;
            digits.parse().map_err(|_| err("bad divisor in period"))?
        };
        if den.is_zero() || !num.is_positive() {
            return Err(err("period must be positive"));
        }
        // T = (num/den) pi, so T / (2 pi) = num / (2 den)
        return Ok(Rat::new(num, den * BigInt::from(2)));
    }
    if mode == Mode::Float {
        if let Ok(v) = t.parse::<f64>() {
            if v > 0.0 {
                return Ok(Rat::from_float(v / std::f64::consts::TAU)
                    .ok_or_else(|| err("period not finite"))?);
            }
        }
    }
    Err(err(
        "expected a rational multiple of pi such as \"2pi\" or \"3pi/2\"",
    ))
}

/// Parses a breakpoint written as a fraction of the period.
fn parse_breakpoint(text: &str, path: &str) -> Result<Dyadic, DocError> {
    let t = text.trim().replace(' ', "");
    let err = |msg: &str| DocError::new(path, format!("{msg}: {text:?}"));
    if t == "0" {
        return Ok(Dyadic::zero());
    }
    let (num_text, den_text) = match t.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (t.as_str(), None),
    };
    let num: u64 = {
        let n = num_text.trim_end_matches('T').trim_end_matches('*');
        if num_text.ends_with('T') || num_text == "T" {
            if n.is_empty() {
                1
            } else {
                n.parse().map_err(|_| err("bad breakpoint numerator"))?
            }
        } else if den_text.is_none() {
            return Err(err("breakpoint must reference T or be 0"));
        } else {
            n.parse().map_err(|_| err("bad breakpoint numerator"))?
        }
    };
    let den: u64 = match den_text {
        None => 1,
        Some(d) => d.parse().map_err(|_| err("bad breakpoint denominator"))?,
    };
    if den == 0 || num > den {
        return Err(err("breakpoint outside [0, T]"));
    }
    let g = gcd(num, den);
    let (num, den) = (num / g, den / g);
    if !den.is_power_of_two() {
        return Err(err("non-dyadic breakpoint"));
    }
    Ok(Dyadic::new(num, den.trailing_zeros()))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a.max(1)
    } else {
        gcd(b, a % b)
    }
}

fn render_breakpoint(d: &Dyadic) -> String {
    d.to_string()
}

/// Parses one real component: an exact rational or real pi-polynomial,
/// or (float mode only) a decimal.
fn parse_component(text: &str, mode: Mode, path: &str) -> Result<RealValue, DocError> {
    let t = text.trim();
    if let Ok(s) = Scalar::parse(t) {
        let degree = s.pi_degree().unwrap_or(0);
        let mut coeffs = Vec::with_capacity(degree + 1);
        for k in 0..=degree {
            let g = s.exact_coeff(k).expect("parsed scalar is exact");
            if !g.im.is_zero() {
                return Err(DocError::new(
                    path,
                    format!("component must be real; split re/im instead: {text:?}"),
                ));
            }
            coeffs.push(g.re);
        }
        return Ok(RealValue::Exact(coeffs));
    }
    if mode == Mode::Float {
        if let Ok(v) = t.parse::<f64>() {
            return Ok(RealValue::Float(v));
        }
    }
    let hint = if t.contains('.') || t.contains('e') || t.contains('E') {
        "decimal literals require float mode"
    } else {
        "expected a rational like \"3/2\" or a real pi-polynomial like \"2*pi\""
    };
    Err(DocError::new(path, format!("{hint}: {text:?}")))
}

enum RealValue {
    /// Coefficients of pi^k, all real.
    Exact(Vec<Rat>),
    Float(f64),
}

fn combine_re_im(re: RealValue, im: RealValue, mode: Mode) -> Scalar {
    match mode {
        Mode::Float => {
            let re = match re {
                RealValue::Float(v) => v,
                RealValue::Exact(c) => real_poly_to_f64(&c),
            };
            let im = match im {
                RealValue::Float(v) => v,
                RealValue::Exact(c) => real_poly_to_f64(&c),
            };
            Scalar::float(Complex64::new(re, im))
        }
        Mode::Exact => {
            let re = match re {
                RealValue::Exact(c) => c,
                RealValue::Float(_) => unreachable!("floats rejected in exact mode"),
            };
            let im = match im {
                RealValue::Exact(c) => c,
                RealValue::Float(_) => unreachable!("floats rejected in exact mode"),
            };
            let mut acc = Scalar::zero();
            for (k, r) in re.into_iter().enumerate() {
                acc = &acc + &Scalar::gauss_pi_pow(GaussRat::from_rat(r), k);
            }
            for (k, i) in im.into_iter().enumerate() {
                acc = &acc + &Scalar::gauss_pi_pow(GaussRat::new(Rat::zero(), i), k);
            }
            acc
        }
    }
}

fn real_poly_to_f64(coeffs: &[Rat]) -> f64 {
    let mut acc = 0.0;
    for c in coeffs.iter().rev() {
        acc = acc * std::f64::consts::PI + c.to_f64().unwrap_or(f64::NAN);
    }
    acc
}

/// Renders one real pi-polynomial component.
fn render_real_component(coeffs: &[Rat]) -> String {
    let mut acc = Scalar::zero();
    for (k, r) in coeffs.iter().enumerate() {
        acc = &acc + &Scalar::gauss_pi_pow(GaussRat::from_rat(r.clone()), k);
    }
    acc.render()
}

/// Validated equation document: the sequence plus the normalization
/// note when the period differed from 2 pi.
#[derive(Debug)]
pub struct ParsedEquation {
    pub seq: CoeffSeq,
    pub rescale: Option<RescaleNote>,
    pub doc: EquationDoc,
}

/// Parses and validates an equation document against the schema,
/// normalizing the period to 2 pi.
pub fn parse_equation(text: &str, mode: Mode) -> Result<ParsedEquation, DocError> {
    let doc: EquationDoc = serde_json::from_str(text)
        .map_err(|e| DocError::new("", format!("invalid equation document: {e}")))?;
    if doc.schema != SCHEMA {
        return Err(DocError::new(
            "schema",
            format!("unsupported schema {:?}, expected {SCHEMA:?}", doc.schema),
        ));
    }
    let ratio = parse_period(&doc.period, mode)?;
    let rescale = if ratio.is_one() {
        None
    } else {
        Some(RescaleNote {
            original_period: doc.period.trim().to_owned(),
            ratio_to_canonical: format!("{}/{}", ratio.numer(), ratio.denom()),
        })
    };

    let mut entries: BTreeMap<u32, PiecewiseCoeff> = BTreeMap::new();
    for (ci, entry) in doc.coefficients.iter().enumerate() {
        let at = |suffix: String| format!("coefficients[{ci}]{suffix}");
        if entry.index == 0 {
            return Err(DocError::new(at(".index".into()), "index must be >= 1"));
        }
        if entries.contains_key(&entry.index) {
            return Err(DocError::new(
                at(".index".into()),
                format!("duplicate index {}", entry.index),
            ));
        }
        if entry.pieces.is_empty() {
            return Err(DocError::new(at(".pieces".into()), "no pieces"));
        }
        let mut pieces = Vec::with_capacity(entry.pieces.len());
        let mut cursor = Dyadic::zero();
        for (pi, piece) in entry.pieces.iter().enumerate() {
            let from = parse_breakpoint(&piece.from, &at(format!(".pieces[{pi}].from")))?;
            let to = parse_breakpoint(&piece.to, &at(format!(".pieces[{pi}].to")))?;
            if from != cursor {
                return Err(DocError::new(
                    at(format!(".pieces[{pi}].from")),
                    format!("expected {cursor}, got {from} (pieces must tile (0, T])"),
                ));
            }
            if to <= from {
                return Err(DocError::new(
                    at(format!(".pieces[{pi}].to")),
                    "zero-length pieces are forbidden",
                ));
            }
            cursor = to;
            let mut terms = Vec::with_capacity(piece.terms.len());
            for (ti, term) in piece.terms.iter().enumerate() {
                let tpath = at(format!(".pieces[{pi}].terms[{ti}]"));
                let re = parse_component(&term.re, mode, &format!("{tpath}.re"))?;
                let im = parse_component(&term.im, mode, &format!("{tpath}.im"))?;
                let mut coeff = combine_re_im(re, im, mode);
                if !ratio.is_one() {
                    // x -> (T/2pi) u: each term picks up ratio^{xpow+1}
                    coeff = &coeff * &ratio_power(&ratio, term.xpow + 1, mode);
                }
                terms.push(Term::new(coeff, term.xpow, term.freq));
            }
            pieces.push((to, ExpPoly::from_terms(terms)));
        }
        if !cursor.is_one() {
            return Err(DocError::new(
                at(".pieces".into()),
                format!("pieces stop at {cursor}, not T"),
            ));
        }
        let coeff = PiecewiseCoeff::from_pieces(pieces)
            .map_err(|e| DocError::new(at(".pieces".into()), e.to_string()))?;
        entries.insert(entry.index, coeff);
    }
    let seq = CoeffSeq::new(entries).map_err(|e| match e {
        CoeffError::IncompatibleLattice { freq, breakpoint } => DocError::new(
            "coefficients",
            format!(
                "unsupported frequency {freq} for breakpoint {breakpoint} after period normalization"
            ),
        ),
        other => DocError::new("coefficients", other.to_string()),
    })?;
    Ok(ParsedEquation { seq, rescale, doc })
}

fn ratio_power(ratio: &Rat, power: u32, mode: Mode) -> Scalar {
    match mode {
        Mode::Exact => {
            let mut acc = Rat::one();
            for _ in 0..power {
                acc *= ratio;
            }
            Scalar::from_rat(acc)
        }
        Mode::Float => Scalar::float(Complex64::new(
            ratio.to_f64().unwrap_or(f64::NAN).powi(power as i32),
            0.0,
        )),
    }
}

/// Renders a coefficient sequence back into an equation document
/// (canonical period "2pi"). Exact scalars round-trip bit-for-bit.
pub fn render_equation(
    seq: &CoeffSeq,
    label: Option<String>,
    source_field: Option<String>,
) -> EquationDoc {
    let mut coefficients = Vec::new();
    for (index, coeff) in seq.iter() {
        let mut pieces = Vec::new();
        let mut lower = Dyadic::zero();
        for (upper, f) in coeff.pieces() {
            let terms = f
                .terms()
                .iter()
                .map(|t| {
                    let (re, im) = render_coeff_components(&t.coeff);
                    TermDoc {
                        re,
                        im,
                        xpow: t.xpow,
                        freq: t.freq,
                    }
                })
                .collect();
            pieces.push(PieceDoc {
                from: render_breakpoint(&lower),
                to: render_breakpoint(upper),
                terms,
            });
            lower = *upper;
        }
        coefficients.push(CoeffEntryDoc { index, pieces });
    }
    EquationDoc {
        schema: SCHEMA.to_owned(),
        period: "2pi".to_owned(),
        coefficients,
        label,
        source_field,
    }
}

fn render_coeff_components(s: &Scalar) -> (String, String) {
    if s.is_exact() {
        let degree = s.pi_degree().unwrap_or(0);
        let mut re = Vec::with_capacity(degree + 1);
        let mut im = Vec::with_capacity(degree + 1);
        for k in 0..=degree {
            let g = s.exact_coeff(k).expect("exact scalar");
            re.push(g.re);
            im.push(g.im);
        }
        (render_real_component(&re), render_real_component(&im))
    } else {
        let z = s.to_complex();
        (format!("{}", z.re), format!("{}", z.im))
    }
}

#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    #[serde(default = "default_schema")]
    pub schema: String,
    #[serde(rename = "F")]
    pub f: BTreeMap<String, CoeffValue>,
    #[serde(rename = "G")]
    pub g: BTreeMap<String, CoeffValue>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// A field coefficient: a rational string or an explicit re/im pair.
#[derive(Serialize, Deserialize, Clone, Debug)]
#[serde(untagged)]
pub enum CoeffValue {
    Single(String),
    Pair { re: String, im: String },
}

/// Parses a monomial key like "x^2", "x y^2", "x^1 y^2", "y^3".
fn parse_monomial(key: &str, path: &str) -> Result<(u32, u32), DocError> {
    let mut xpow = 0u32;
    let mut ypow = 0u32;
    let mut seen_x = false;
    let mut seen_y = false;
    for factor in key.split_whitespace() {
        let (var, exp) = match factor.split_once('^') {
            None => (factor, 1u32),
            Some((v, e)) => (
                v,
                e.parse().map_err(|_| {
                    DocError::new(path, format!("bad exponent in monomial {key:?}"))
                })?,
            ),
        };
        match var {
            "x" if !seen_x => {
                seen_x = true;
                xpow = exp;
            }
            "y" if !seen_y => {
                seen_y = true;
                ypow = exp;
            }
            _ => {
                return Err(DocError::new(
                    path,
                    format!("bad monomial {key:?}; expected forms like \"x^2\" or \"x y^2\""),
                ))
            }
        }
    }
    if !seen_x && !seen_y {
        return Err(DocError::new(path, format!("empty monomial {key:?}")));
    }
    Ok((xpow, ypow))
}

fn parse_field_coeff(value: &CoeffValue, mode: Mode, path: &str) -> Result<GaussRat, DocError> {
    let to_rat = |text: &str, p: &str| -> Result<Rat, DocError> {
        match parse_component(text, mode, p)? {
            RealValue::Exact(coeffs) => {
                if coeffs.len() > 1 {
                    return Err(DocError::new(
                        p,
                        format!("field coefficients must be rational, got {text:?}"),
                    ));
                }
                Ok(coeffs.into_iter().next().unwrap_or_else(Rat::zero))
            }
            // decimals are representable exactly as binary rationals, so
            // the reduction stays exact even in float mode
            RealValue::Float(v) => Rat::from_float(v)
                .ok_or_else(|| DocError::new(p, format!("non-finite value {text:?}"))),
        }
    };
    match value {
        CoeffValue::Single(s) => Ok(GaussRat::from_rat(to_rat(s, path)?)),
        CoeffValue::Pair { re, im } => Ok(GaussRat::new(
            to_rat(re, &format!("{path}.re"))?,
            to_rat(im, &format!("{path}.im"))?,
        )),
    }
}

/// Validated field document.
#[derive(Debug)]
pub struct ParsedField {
    pub field: PlanarField,
    pub doc: FieldDoc,
}

/// Parses and validates a planar-field document: monomials of total
/// degree 2..=MAX_FIELD_DEGREE only.
pub fn parse_field(text: &str, mode: Mode) -> Result<ParsedField, DocError> {
    let doc: FieldDoc = serde_json::from_str(text)
        .map_err(|e| DocError::new("", format!("invalid field document: {e}")))?;
    if doc.schema != SCHEMA {
        return Err(DocError::new(
            "schema",
            format!("unsupported schema {:?}, expected {SCHEMA:?}", doc.schema),
        ));
    }
    let parse_side = |side: &BTreeMap<String, CoeffValue>,
                          name: &str|
     -> Result<BivariatePoly, DocError> {
        let mut terms = BTreeMap::new();
        for (key, value) in side {
            let path = format!("{name}[{key:?}]");
            let (p, q) = parse_monomial(key, &path)?;
            if p + q < 2 {
                return Err(DocError::new(
                    path,
                    "constant and linear monomials are not allowed in the normal form",
                ));
            }
            if p + q > MAX_FIELD_DEGREE {
                return Err(DocError::new(
                    path,
                    format!("degree {} exceeds the cap of {MAX_FIELD_DEGREE}", p + q),
                ));
            }
            let coeff = parse_field_coeff(value, mode, &path)?;
            if terms.insert((p, q), coeff).is_some() {
                return Err(DocError::new(path, "duplicate monomial"));
            }
        }
        Ok(BivariatePoly::new(terms))
    };
    let f = parse_side(&doc.f, "F")?;
    let g = parse_side(&doc.g, "G")?;
    let field = PlanarField::new(f, g)
        .map_err(|e| DocError::new("", e.to_string()))?;
    Ok(ParsedField { field, doc })
}

#[cfg(test)]
mod tests {
    use super::*;
    use centerflow::scalar::rat;

    #[test]
    fn parses_the_minimal_example() {
        let text = r#"{"period":"2pi","coefficients":[{"index":2,"pieces":[{"from":"0","to":"T","terms":[{"re":"1","im":"0","xpow":0,"freq":0}]}]}]}"#;
        let parsed = parse_equation(text, Mode::Exact).unwrap();
        assert!(parsed.rescale.is_none());
        assert_eq!(
            *parsed.seq.entry(2).unwrap(),
            PiecewiseCoeff::constant(Scalar::one())
        );
    }

    #[test]
    fn empty_coefficient_list_is_the_zero_sequence() {
        let parsed =
            parse_equation(r#"{"period":"2pi","coefficients":[]}"#, Mode::Exact).unwrap();
        assert!(parsed.seq.is_zero());
    }

    #[test]
    fn rejects_non_dyadic_breakpoints() {
        let text = r#"{"period":"2pi","coefficients":[{"index":1,"pieces":[{"from":"0","to":"T/3","terms":[]},{"from":"T/3","to":"T","terms":[]}]}]}"#;
        let err = parse_equation(text, Mode::Exact).unwrap_err();
        assert!(err.message.contains("non-dyadic"), "{err}");
        assert!(err.path.contains("pieces[0].to"), "{err}");
    }

    #[test]
    fn rejects_decimals_in_exact_mode() {
        let text = r#"{"period":"2pi","coefficients":[{"index":1,"pieces":[{"from":"0","to":"T","terms":[{"re":"0.5"}]}]}]}"#;
        let err = parse_equation(text, Mode::Exact).unwrap_err();
        assert!(err.message.contains("float mode"), "{err}");
        assert!(parse_equation(text, Mode::Float).is_ok());
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = r#"{"period":"2pi","coefficients":[],"extra":1}"#;
        assert!(parse_equation(text, Mode::Exact).is_err());
    }

    #[test]
    fn period_normalization_rescales_coefficients() {
        // period pi: ratio 1/2; constant terms scale by 1/2, x terms by 1/4
        let text = r#"{"period":"pi","coefficients":[{"index":1,"pieces":[{"from":"0","to":"T","terms":[{"re":"1","xpow":0,"freq":0},{"re":"1","xpow":1,"freq":0}]}]}]}"#;
        let parsed = parse_equation(text, Mode::Exact).unwrap();
        let note = parsed.rescale.unwrap();
        assert_eq!(note.ratio_to_canonical, "1/2");
        let expected = ExpPoly::from_terms(vec![
            Term::new(Scalar::from_rat(rat(1, 2)), 0, 0),
            Term::new(Scalar::from_rat(rat(1, 4)), 1, 0),
        ]);
        assert_eq!(*parsed.seq.entry(1).unwrap(), PiecewiseCoeff::from_poly(expected));
    }

    #[test]
    fn render_parse_round_trip_is_identity_on_sequences() {
        // include pi-valued constants, harmonics and a two-piece layout
        let two_pi = &Scalar::from_int(2) * &Scalar::pi_pow(1);
        let poly1 = ExpPoly::from_terms(vec![
            Term::new(two_pi, 0, 0),
            Term::new(Scalar::from_rat(rat(-3, 2)), 1, 2),
            Term::new(Scalar::i(), 0, -1),
        ]);
        let pieces = PiecewiseCoeff::from_pieces(vec![
            (Dyadic::half(), poly1),
            (Dyadic::one(), ExpPoly::cos(1)),
        ])
        .unwrap();
        let mut m = BTreeMap::new();
        m.insert(1, pieces);
        m.insert(3, PiecewiseCoeff::from_poly(ExpPoly::x()));
        let seq = CoeffSeq::new(m).unwrap();

        let doc = render_equation(&seq, Some("sample".into()), None);
        let text = serde_json::to_string(&doc).unwrap();
        let parsed = parse_equation(&text, Mode::Exact).unwrap();
        assert_eq!(parsed.seq, seq);
    }

    #[test]
    fn parses_field_examples() {
        // Hamiltonian example field
        let parsed = parse_field(r#"{"F":{},"G":{"x^2":"1"}}"#, Mode::Exact).unwrap();
        assert_eq!(parsed.field.degree(), 2);
        assert_eq!(parsed.field.monomial_count(), 1);

        // linear term rejected
        let err = parse_field(r#"{"F":{"x^1":"1"},"G":{}}"#, Mode::Exact).unwrap_err();
        assert!(err.message.contains("linear"), "{err}");

        // degree-3 field with 2 nonzero coefficients
        let parsed =
            parse_field(r#"{"F":{"x^1 y^2":"1"},"G":{"y^3":"-2/3"}}"#, Mode::Exact).unwrap();
        assert_eq!(parsed.field.degree(), 3);
        assert_eq!(parsed.field.monomial_count(), 2);
        assert_eq!(
            parsed.field.g().terms()[&(0, 3)],
            GaussRat::from_rat(rat(-2, 3))
        );
    }

    #[test]
    fn breakpoint_grammar() {
        assert_eq!(parse_breakpoint("0", "p").unwrap(), Dyadic::zero());
        assert_eq!(parse_breakpoint("T", "p").unwrap(), Dyadic::one());
        assert_eq!(parse_breakpoint("T/2", "p").unwrap(), Dyadic::half());
        assert_eq!(parse_breakpoint("3T/4", "p").unwrap(), Dyadic::new(3, 2));
        assert_eq!(parse_breakpoint("3/4", "p").unwrap(), Dyadic::new(3, 2));
        assert_eq!(parse_breakpoint("2/4", "p").unwrap(), Dyadic::half());
        assert!(parse_breakpoint("T/3", "p").is_err());
        assert!(parse_breakpoint("5T/4", "p").is_err());
    }

    #[test]
    fn period_grammar() {
        assert!(parse_period("2pi", Mode::Exact).unwrap().is_one());
        assert_eq!(parse_period("pi", Mode::Exact).unwrap(), rat(1, 2));
        assert_eq!(parse_period("3pi/2", Mode::Exact).unwrap(), rat(3, 4));
        assert_eq!(parse_period("4pi", Mode::Exact).unwrap(), rat(2, 1));
        assert!(parse_period("6.28", Mode::Exact).is_err());
        assert!(parse_period("6.283185307179586", Mode::Float).is_ok());
    }
}
