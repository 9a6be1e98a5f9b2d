//! Error types shared across the crate.

use std::fmt;

use crate::dyadic::Dyadic;
use crate::scalar::Rat;

/// Failures of exactness: an operation would need a value outside
/// Q(i)[pi].
#[derive(Debug, Clone, PartialEq)]
pub enum ExactError {
    /// Affine substitution x -> ax + b would map an integer frequency to
    /// a non-integer one.
    NonIntegralFrequency { freq: i64, alpha: Rat },
    /// A unit-circle factor e^{i m b} is not a fourth root of unity, so
    /// it has no exact representation here.
    UnrepresentablePhase { freq: i64, at: String },
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::NonIntegralFrequency { freq, alpha } => write!(
                f,
                "substitution with scale {alpha} maps frequency {freq} outside the integers"
            ),
            ExactError::UnrepresentablePhase { freq, at } => write!(
                f,
                "phase of frequency {freq} at {at} is not a quarter turn; value leaves Q(i)[pi]"
            ),
        }
    }
}

impl std::error::Error for ExactError {}

/// Rejected coefficient-sequence data.
#[derive(Debug, Clone, PartialEq)]
pub enum CoeffError {
    /// Piece list does not cover (0, T] with strictly increasing
    /// breakpoints.
    BadPieceLayout { detail: String },
    /// An exact term frequency is incompatible with a breakpoint of the
    /// sequence's lattice (its endpoint phase leaves Q(i)[pi]).
    IncompatibleLattice { freq: i64, breakpoint: Dyadic },
    /// Index must be >= 1.
    BadIndex { index: u32 },
}

impl fmt::Display for CoeffError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffError::BadPieceLayout { detail } => write!(f, "bad piece layout: {detail}"),
            CoeffError::IncompatibleLattice { freq, breakpoint } => write!(
                f,
                "frequency {freq} cannot be evaluated exactly at breakpoint {breakpoint}"
            ),
            CoeffError::BadIndex { index } => {
                write!(f, "coefficient index {index} out of range (must be >= 1)")
            }
        }
    }
}

impl std::error::Error for CoeffError {}

/// Errors from the group operations on coefficient sequences.
#[derive(Debug, Clone, PartialEq)]
pub enum GroupError {
    /// Concatenation would push the dyadic breakpoint lattice past the
    /// halving depth limit.
    DepthLimit { depth: u32, limit: u32 },
    /// The combined sequence fails lattice/frequency validation.
    Coeff(CoeffError),
}

impl fmt::Display for GroupError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupError::DepthLimit { depth, limit } => write!(
                f,
                "concatenation needs lattice depth {depth}, past the limit of {limit} halvings"
            ),
            GroupError::Coeff(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for GroupError {}

impl From<CoeffError> for GroupError {
    fn from(e: CoeffError) -> Self {
        GroupError::Coeff(e)
    }
}

/// Word-level input errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordError {
    /// compositions(0) is rejected; the empty word is the caller's
    /// convention for order zero.
    ZeroOrder,
    /// The combinatorial weight of the empty word is undefined.
    EmptyWord,
    /// Word indices must be positive.
    BadIndex,
}

impl fmt::Display for WordError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordError::ZeroOrder => write!(f, "order must be >= 1"),
            WordError::EmptyWord => write!(f, "empty word has no combinatorial weight"),
            WordError::BadIndex => write!(f, "word indices must be positive integers"),
        }
    }
}

impl std::error::Error for WordError {}

/// The two exact return-map pipelines disagreed; a defect, never a
/// verdict.
#[derive(Debug, Clone)]
pub struct CrossCheckError {
    pub order: u32,
    pub detail: String,
}

impl fmt::Display for CrossCheckError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "internal cross-check failure at order {}: {}",
            self.order, self.detail
        )
    }
}

impl std::error::Error for CrossCheckError {}

/// Numeric integration failures.
#[derive(Debug, Clone, PartialEq)]
pub enum NumericError {
    /// Adaptive step size underflowed; the solution likely blows up at
    /// this initial value.
    StepUnderflow { at: f64 },
    /// A state value became non-finite.
    NonFinite { at: f64 },
    /// Iteration failed to converge.
    NoConvergence { detail: String },
}

impl fmt::Display for NumericError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericError::StepUnderflow { at } => {
                write!(f, "step size underflow at x = {at}; solution may blow up")
            }
            NumericError::NonFinite { at } => write!(f, "non-finite state at x = {at}"),
            NumericError::NoConvergence { detail } => write!(f, "no convergence: {detail}"),
        }
    }
}

impl std::error::Error for NumericError {}

/// Errors from the planar-field reduction utilities.
#[derive(Debug, Clone, PartialEq)]
pub enum PolarError {
    /// trig_restrict needs a homogeneous input.
    NotHomogeneous { degrees: Vec<u32> },
    /// Planar fields must not contain constant or linear monomials.
    ForbiddenMonomial { xpow: u32, ypow: u32 },
    /// Degree outside the supported range.
    BadDegree { degree: u32 },
    /// Polynomial arity differs from the weight vector length.
    ArityMismatch { arity: usize, weights: usize },
    /// Weights must be positive.
    BadWeight,
    /// Series order must be >= 1.
    BadOrder,
}

impl fmt::Display for PolarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolarError::NotHomogeneous { degrees } => {
                write!(f, "polynomial mixes total degrees {degrees:?}")
            }
            PolarError::ForbiddenMonomial { xpow, ypow } => write!(
                f,
                "monomial x^{xpow} y^{ypow} of degree < 2 is not allowed in the normal form"
            ),
            PolarError::BadDegree { degree } => write!(f, "unsupported field degree {degree}"),
            PolarError::ArityMismatch { arity, weights } => write!(
                f,
                "polynomial arity {arity} does not match weight vector length {weights}"
            ),
            PolarError::BadWeight => write!(f, "weights must be positive integers"),
            PolarError::BadOrder => write!(f, "truncation order must be >= 1"),
        }
    }
}

impl std::error::Error for PolarError {}
