//! Exact computation of the objects governing the center problem for
//! periodic ODEs dv/dx = sum_i a_i(x) v^{i+1}: basic iterated integrals,
//! moments, first-return-map coefficients, group operations on
//! coefficient sequences, and the polar reduction of planar polynomial
//! vector fields.
//!
//! All core arithmetic is exact — scalars are polynomials in pi over the
//! Gaussian rationals — so zero tests behind center verdicts are
//! decisions, not tolerances. Every major pipeline has an independent
//! route (combinatorial vs. symbolic series transport vs. floating-point
//! integration) and the crate cross-validates them.

pub mod coeffseq;
pub mod dyadic;
pub mod error;
pub mod exppoly;
pub mod groupops;
pub mod integrals;
pub mod numeric;
pub mod piecewise;
pub mod polar;
pub mod returnmap;
pub mod scalar;
pub mod verify;
pub mod words;

pub use coeffseq::{CoeffSeq, PERIOD};
pub use dyadic::Dyadic;
pub use exppoly::{ExpPoly, Term};
pub use groupops::{concat, equivalent_up_to, in_xstar, inverse, EquivVerdict};
pub use integrals::{iterated_integral, moment, IntegralEvaluator};
pub use numeric::{picard_radius, return_map_numeric};
pub use piecewise::PiecewiseCoeff;
pub use polar::{check_alpha_homogeneous, param_count, polar_reduce, trig_restrict, AlphaWeight, BivariatePoly, MultiPoly, PlanarField};
pub use returnmap::{center_check, comb_coefficient, return_coeffs_iterated, return_coeffs_transport, CenterVerdict, ReturnSeries};
pub use scalar::{GaussRat, Rat, Scalar};
pub use verify::{run_suites, SuiteReport, SUITE_NAMES};
pub use words::{compositions, moment_shuffle_expand, shuffle, MomentSpec, Word};
