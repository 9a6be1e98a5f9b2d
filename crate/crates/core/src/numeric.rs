//! Floating-point evaluation of the return map, the third and fully
//! independent route next to the two exact pipelines.
//!
//! The truncated ODE v' = sum_{i in supp a} a_i(x) v^{i+1} is integrated
//! with an adaptive Dormand-Prince 5(4) scheme, restarted at every
//! breakpoint so the right-hand side is smooth on each step. A slow
//! Picard-iteration route is kept as a debug mode.

use num_complex::Complex64;

use crate::coeffseq::{CoeffSeq, PERIOD};
use crate::error::NumericError;
use crate::exppoly::ExpPoly;

/// Default tolerance of the adaptive integrator.
pub const ODE_TOL: f64 = 1e-12;

/// Conservative initial-value radius 1 / (2 (1 + max_i sup|a_i|^{1/i}) T)
/// inside which the iteration characterizing solutions contracts. The
/// integrator does not enforce it; callers that stay well inside it (the
/// cross-validation suites use radius/4) are guaranteed smooth behaviour.
pub fn picard_radius(a: &CoeffSeq) -> f64 {
    let mut m: f64 = 0.0;
    for (i, coeff) in a.iter() {
        m = m.max(coeff.sup_bound().powf(1.0 / f64::from(i)));
    }
    1.0 / (2.0 * (1.0 + m) * PERIOD)
}

/// Dormand-Prince 5(4) adaptive step integrator for a scalar complex
/// ODE y' = f(x, y) from x0 to x1.
pub fn dopri5(
    f: &dyn Fn(f64, Complex64) -> Complex64,
    x0: f64,
    x1: f64,
    y0: Complex64,
    tol: f64,
) -> Result<Complex64, NumericError> {
    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    // 5th order solution weights
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    // embedded 4th order weights
    const E1: f64 = 5179.0 / 57600.0;
    const E3: f64 = 7571.0 / 16695.0;
    const E4: f64 = 393.0 / 640.0;
    const E5: f64 = -92097.0 / 339200.0;
    const E6: f64 = 187.0 / 2100.0;
    const E7: f64 = 1.0 / 40.0;
    const C2: f64 = 1.0 / 5.0;
    const C3: f64 = 3.0 / 10.0;
    const C4: f64 = 4.0 / 5.0;
    const C5: f64 = 8.0 / 9.0;

    let span = x1 - x0;
    if span <= 0.0 {
        return Ok(y0);
    }
    let mut x = x0;
    let mut y = y0;
    let mut h = span / 16.0;
    let h_min = span * 1e-14;
    let mut k1 = f(x, y);
    while x < x1 {
        if x + h > x1 {
            h = x1 - x;
        }
        let k2 = f(x + C2 * h, y + h * A21 * k1);
        let k3 = f(x + C3 * h, y + h * (A31 * k1 + A32 * k2));
        let k4 = f(x + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3));
        let k5 = f(
            x + C5 * h,
            y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4),
        );
        let k6 = f(
            x + h,
            y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
        );
        let y5 = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
        let k7 = f(x + h, y5);
        let y4 = y + h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        if !y5.re.is_finite() || !y5.im.is_finite() {
            return Err(NumericError::NonFinite { at: x });
        }
        let scale = tol * (1.0 + y.norm().max(y5.norm()));
        let err = (y5 - y4).norm() / scale;
        if err <= 1.0 {
            x += h;
            y = y5;
            k1 = k7; // first-same-as-last
        }
        let factor = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= factor;
        if h < h_min && x < x1 {
            return Err(NumericError::StepUnderflow { at: x });
        }
    }
    Ok(y)
}

/// Per-segment right-hand sides of the truncated equation: on each
/// interval between adjacent breakpoints of the joint lattice the
/// coefficients are single exponential polynomials.
fn segments(a: &CoeffSeq) -> Vec<(f64, f64, Vec<(u32, ExpPoly)>)> {
    let mut cuts: Vec<crate::dyadic::Dyadic> = vec![crate::dyadic::Dyadic::zero()];
    for (_, coeff) in a.iter() {
        cuts.extend(coeff.breakpoints());
    }
    cuts.sort();
    cuts.dedup();
    if cuts.len() == 1 {
        cuts.push(crate::dyadic::Dyadic::one());
    }
    let mut out = Vec::new();
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let mut active = Vec::new();
        for (i, coeff) in a.iter() {
            // the piece containing (lo, hi]; hi is within the joint
            // lattice so exactly one piece covers the open interval
            for (upper, f) in coeff.pieces() {
                if hi <= *upper {
                    if !f.is_zero() {
                        active.push((i, f.clone()));
                    }
                    break;
                }
            }
        }
        out.push((lo.to_f64(), hi.to_f64(), active));
    }
    out
}

fn rhs_value(active: &[(u32, ExpPoly)], x: f64, v: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, f) in active {
        let mut power = v; // v^{i+1}
        for _ in 0..*i {
            power *= v;
        }
        acc += f.eval(x) * power;
    }
    acc
}

/// The return map v(T; r) by adaptive integration of the truncated ODE.
///
/// Accuracy target 1e-10 for initial values within the contraction
/// radius; outside it the integration may fail with a step-size
/// underflow when the solution blows up, which is reported as an error
/// rather than a value.
pub fn return_map_numeric(a: &CoeffSeq, r: Complex64) -> Result<Complex64, NumericError> {
    let mut v = r;
    for (lo, hi, active) in segments(a) {
        v = dopri5(&|x, y| rhs_value(&active, x, y), lo, hi, v, ODE_TOL)?;
    }
    Ok(v)
}

/// Adaptive Simpson quadrature of a complex-valued function, used as an
/// integration oracle independent of the symbolic antiderivative path.
pub fn adaptive_quadrature(
    f: &dyn Fn(f64) -> Complex64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Complex64 {
    fn simpson(fl: Complex64, fm: Complex64, fr: Complex64, h: f64) -> Complex64 {
        (fl + 4.0 * fm + fr) * (h / 6.0)
    }
    fn go(
        f: &dyn Fn(f64) -> Complex64,
        lo: f64,
        hi: f64,
        fl: Complex64,
        fm: Complex64,
        fr: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Complex64 {
        let mid = 0.5 * (lo + hi);
        let lm = f(0.5 * (lo + mid));
        let rm = f(0.5 * (mid + hi));
        let left = simpson(fl, lm, fm, mid - lo);
        let right = simpson(fm, rm, fr, hi - mid);
        let delta = left + right - whole;
        if depth == 0 || delta.norm() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        go(f, lo, mid, fl, lm, fm, left, tol * 0.5, depth - 1)
            + go(f, mid, hi, fm, rm, fr, right, tol * 0.5, depth - 1)
    }
    if hi <= lo {
        return Complex64::new(0.0, 0.0);
    }
    let fl = f(lo);
    let fm = f(0.5 * (lo + hi));
    let fr = f(hi);
    let whole = simpson(fl, fm, fr, hi - lo);
    go(f, lo, hi, fl, fm, fr, whole, tol, 40)
}

/// Debug route: Picard iteration v_{k+1}(x) = r + int_0^x F(s, v_k(s)) ds
/// on a fine uniform grid with trapezoid quadrature. Much slower and less
/// accurate than the adaptive integrator (grid-limited, about 1e-8 with
/// the default grid); kept because it mirrors the construction that
/// defines the solutions.
pub fn return_map_picard(
    a: &CoeffSeq,
    r: Complex64,
    grid_per_segment: usize,
    max_iterations: usize,
) -> Result<Complex64, NumericError> {
    let segs = segments(a);
    let mut nodes: Vec<(f64, usize)> = Vec::new(); // (x, segment index)
    for (s, (lo, hi, _)) in segs.iter().enumerate() {
        for j in 0..grid_per_segment {
            let x = lo + (hi - lo) * (j as f64) / (grid_per_segment as f64);
            nodes.push((x, s));
        }
    }
    nodes.push((PERIOD, segs.len() - 1));

    let mut v = vec![r; nodes.len()];
    for _ in 0..max_iterations {
        // integrate F(s, v_k(s)) cumulatively
        let f: Vec<Complex64> = nodes
            .iter()
            .zip(&v)
            .map(|(&(x, s), &y)| rhs_value(&segs[s].2, x, y))
            .collect();
        let mut next = Vec::with_capacity(v.len());
        let mut acc = r;
        next.push(acc);
        for j in 1..nodes.len() {
            let h = nodes[j].0 - nodes[j - 1].0;
            acc += (f[j] + f[j - 1]) * 0.5 * h;
            if !acc.re.is_finite() || !acc.im.is_finite() {
                return Err(NumericError::NonFinite { at: nodes[j].0 });
            }
            next.push(acc);
        }
        let delta = v
            .iter()
            .zip(&next)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max);
        v = next;
        if delta < 1e-14 {
            return Ok(*v.last().expect("nonempty grid"));
        }
    }
    Err(NumericError::NoConvergence {
        detail: format!("Picard iteration not settled after {max_iterations} rounds"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::PiecewiseCoeff;
    use crate::scalar::Scalar;

    fn const_at(index: u32) -> CoeffSeq {
        CoeffSeq::single(index, PiecewiseCoeff::constant(Scalar::one())).unwrap()
    }

    #[test]
    fn zero_data_returns_initial_value() {
        let r = Complex64::new(0.02, 0.01);
        assert_eq!(return_map_numeric(&CoeffSeq::zero(), r).unwrap(), r);
    }

    #[test]
    fn geometric_closed_form() {
        // a_1 = 1 on [0, T]: v(T) = r / (1 - T r)
        let a = const_at(1);
        let r = 0.01;
        let v = return_map_numeric(&a, Complex64::new(r, 0.0)).unwrap();
        let expected = r / (1.0 - PERIOD * r);
        assert!((v.re - expected).abs() < 1e-10, "{v} vs {expected}");
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn square_root_closed_form() {
        // a_2 = 1: v(T) = r (1 - 2 T r^2)^{-1/2}
        let a = const_at(2);
        let r = 0.05;
        let v = return_map_numeric(&a, Complex64::new(r, 0.0)).unwrap();
        let expected = r / (1.0 - 2.0 * PERIOD * r * r).sqrt();
        assert!((v.re - expected).abs() < 1e-10, "{v} vs {expected}");
    }

    #[test]
    fn radius_is_conservative() {
        let a = const_at(1);
        // sup |a_1| = 1 -> radius = 1/(4 T)
        let r = picard_radius(&a);
        assert!((r - 1.0 / (4.0 * PERIOD)).abs() < 1e-12);
    }

    #[test]
    fn picard_agrees_with_adaptive_route() {
        let a = const_at(1);
        let r = Complex64::new(0.01, 0.0);
        let fast = return_map_numeric(&a, r).unwrap();
        let slow = return_map_picard(&a, r, 4096, 60).unwrap();
        assert!((fast - slow).norm() < 1e-6, "{fast} vs {slow}");
    }

    #[test]
    fn blow_up_is_an_error_not_a_value() {
        // a_1 = 1 with r far outside the radius: the solution has a pole
        // inside [0, T]
        let a = const_at(1);
        let res = return_map_numeric(&a, Complex64::new(0.5, 0.0));
        assert!(res.is_err());
    }
}
