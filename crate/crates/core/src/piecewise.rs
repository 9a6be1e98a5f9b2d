//! Piecewise exponential-polynomial coefficient functions on (0, T].
//!
//! A coefficient is a list of pieces over half-open intervals
//! (t_{j-1}, t_j] with dyadic-rational breakpoints. Pieces store the
//! function in global coordinates, so products, cumulative
//! antiderivatives and endpoint evaluations compose directly.

use num_complex::Complex64;

use crate::dyadic::Dyadic;
use crate::error::CoeffError;
use crate::exppoly::ExpPoly;
use crate::scalar::Scalar;

/// One coefficient a_i: piecewise exponential polynomial over a dyadic
/// breakpoint lattice spanning (0, T].
#[derive(Clone, PartialEq, Debug)]
pub struct PiecewiseCoeff {
    /// (upper breakpoint, function on (previous, upper]); the first piece
    /// starts at 0 and the last upper breakpoint is exactly T.
    pieces: Vec<(Dyadic, ExpPoly)>,
}

impl PiecewiseCoeff {
    /// A single piece covering all of (0, T].
    pub fn from_poly(f: ExpPoly) -> Self {
        PiecewiseCoeff {
            pieces: vec![(Dyadic::one(), f)],
        }
    }

    pub fn constant(c: Scalar) -> Self {
        PiecewiseCoeff::from_poly(ExpPoly::constant(c))
    }

    pub fn zero() -> Self {
        PiecewiseCoeff::from_poly(ExpPoly::zero())
    }

    /// Builds from explicit pieces; validates strictly increasing
    /// breakpoints ending at T, then merges adjacent equal pieces into
    /// canonical form.
    pub fn from_pieces(pieces: Vec<(Dyadic, ExpPoly)>) -> Result<Self, CoeffError> {
        if pieces.is_empty() {
            return Err(CoeffError::BadPieceLayout {
                detail: "no pieces".into(),
            });
        }
        let mut prev = Dyadic::zero();
        for (upper, _) in &pieces {
            if *upper <= prev {
                return Err(CoeffError::BadPieceLayout {
                    detail: format!("breakpoint {upper} does not increase past {prev}"),
                });
            }
            prev = *upper;
        }
        if !prev.is_one() {
            return Err(CoeffError::BadPieceLayout {
                detail: format!("pieces stop at {prev}, not T"),
            });
        }
        Ok(PiecewiseCoeff::canonical(pieces))
    }

    fn canonical(pieces: Vec<(Dyadic, ExpPoly)>) -> Self {
        let mut out: Vec<(Dyadic, ExpPoly)> = Vec::with_capacity(pieces.len());
        for (upper, f) in pieces {
            if let Some((last_upper, last_f)) = out.last_mut() {
                if *last_f == f {
                    *last_upper = upper;
                    continue;
                }
            }
            out.push((upper, f));
        }
        PiecewiseCoeff { pieces: out }
    }

    pub fn pieces(&self) -> &[(Dyadic, ExpPoly)] {
        &self.pieces
    }

    /// All breakpoints, including 0 and T.
    pub fn breakpoints(&self) -> Vec<Dyadic> {
        let mut v = vec![Dyadic::zero()];
        v.extend(self.pieces.iter().map(|(u, _)| *u));
        v
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(|(_, f)| f.is_zero())
    }

    /// Deepest dyadic denominator among the breakpoints.
    pub fn depth(&self) -> u32 {
        self.pieces.iter().map(|(u, _)| u.depth()).max().unwrap_or(0)
    }

    pub fn max_abs_freq(&self) -> i64 {
        self.pieces
            .iter()
            .map(|(_, f)| f.max_abs_freq())
            .max()
            .unwrap_or(0)
    }

    /// Applies a function piece-by-piece on the merged breakpoint
    /// lattice of the two operands.
    fn zip_with(&self, other: &Self, op: impl Fn(&ExpPoly, &ExpPoly) -> ExpPoly) -> Self {
        let mut out = Vec::new();
        let mut i = 0;
        let mut j = 0;
        loop {
            let (ua, fa) = &self.pieces[i];
            let (ub, fb) = &other.pieces[j];
            let upper = (*ua).min(*ub);
            out.push((upper, op(fa, fb)));
            if upper == *ua {
                i += 1;
            }
            if upper == *ub {
                j += 1;
            }
            if i == self.pieces.len() || j == other.pieces.len() {
                break;
            }
        }
        PiecewiseCoeff::canonical(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.sub(b))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.mul(b))
    }

    pub fn neg(&self) -> Self {
        PiecewiseCoeff {
            pieces: self.pieces.iter().map(|(u, f)| (*u, f.neg())).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        PiecewiseCoeff::canonical(self.pieces.iter().map(|(u, f)| (*u, f.scale(c))).collect())
    }

    /// The cumulative antiderivative x -> int_0^x a(s) ds: continuous,
    /// zero at 0, exponential-polynomial on each piece.
    pub fn tilde(&self) -> Result<Self, CoeffError> {
        let mut out = Vec::with_capacity(self.pieces.len());
        let mut lower = Dyadic::zero();
        let mut running = Scalar::zero(); // value at `lower`
        for (upper, f) in &self.pieces {
            let anti = f.antiderivative();
            let at_lower = eval_dyadic(&anti, &lower)?;
            // piece antiderivative shifted so it continues `running`
            let shift = &running - &at_lower;
            let piece = anti.add(&ExpPoly::constant(shift));
            running = eval_dyadic(&piece, upper)?;
            out.push((*upper, piece));
            lower = *upper;
        }
        Ok(PiecewiseCoeff { pieces: out })
    }

    /// int_0^T a(s) ds, exact.
    pub fn integral(&self) -> Result<Scalar, CoeffError> {
        let mut total = Scalar::zero();
        let mut lower = Dyadic::zero();
        for (upper, f) in &self.pieces {
            let anti = f.antiderivative();
            let hi = eval_dyadic(&anti, upper)?;
            let lo = eval_dyadic(&anti, &lower)?;
            total = &total + &(&hi - &lo);
            lower = *upper;
        }
        Ok(total)
    }

    /// Numeric value at x in [0, T]; at a breakpoint the left piece wins
    /// (pieces are half-open on the left).
    pub fn eval(&self, x: f64) -> Complex64 {
        let t = std::f64::consts::TAU;
        assert!((-1e-12..=t + 1e-12).contains(&x), "x = {x} outside [0, T]");
        for (upper, f) in &self.pieces {
            if x <= upper.to_f64() {
                return f.eval(x);
            }
        }
        let (_, last) = self.pieces.last().expect("pieces nonempty");
        last.eval(x)
    }

    /// Exact value at a dyadic breakpoint, using the left-piece
    /// convention (the first piece serves x = 0).
    pub fn value_at(&self, t: &Dyadic) -> Result<Scalar, CoeffError> {
        for (upper, f) in &self.pieces {
            if t <= upper {
                return eval_dyadic(f, t);
            }
        }
        let (_, last) = self.pieces.last().expect("pieces nonempty");
        eval_dyadic(last, t)
    }

    /// Exact value at T.
    pub fn end_value(&self) -> Result<Scalar, CoeffError> {
        self.value_at(&Dyadic::one())
    }

    /// Numeric bound on sup |a| over the period.
    pub fn sup_bound(&self) -> f64 {
        self.pieces
            .iter()
            .map(|(_, f)| f.sup_bound())
            .fold(0.0, f64::max)
    }

    pub fn is_conj_symmetric(&self) -> bool {
        self.pieces.iter().all(|(_, f)| f.is_conj_symmetric())
    }
}

fn eval_dyadic(f: &ExpPoly, t: &Dyadic) -> Result<Scalar, CoeffError> {
    f.eval_dyadic(t).map_err(|e| match e {
        crate::error::ExactError::UnrepresentablePhase { freq, .. } => {
            CoeffError::IncompatibleLattice {
                freq,
                breakpoint: *t,
            }
        }
        other => CoeffError::BadPieceLayout {
            detail: other.to_string(),
        },
    })
}
