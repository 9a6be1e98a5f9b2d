//! Module-level invariants with independent numeric oracles.

use std::collections::BTreeMap;

use centerflow::coeffseq::{CoeffSeq, PERIOD};
use centerflow::exppoly::{ExpPoly, Term};
use centerflow::integrals::iterated_integral;
use centerflow::piecewise::PiecewiseCoeff;
use centerflow::returnmap::center_check;
use centerflow::scalar::{rat, Scalar};
use centerflow::verify::run_suites;
use centerflow::words::{words_up_to, Word};
use num_complex::Complex64;

/// Direct numeric evaluation of the simplex integral by cumulative
/// Simpson integration, one level per letter: F_0 = 1,
/// F_m(x) = int_0^x a_{i_m} F_{m-1}. Entirely independent of the exact
/// antiderivative machinery. Level m lives on a grid of step 2^m * delta,
/// so three levels keep fourth-order accuracy with piece boundaries on
/// grid nodes.
fn simplex_numeric(word: &Word, seq: &CoeffSeq) -> Complex64 {
    let k = word.len() as u32;
    assert!(k >= 1 && k <= 3, "oracle built for words of length 1..=3");
    let base: usize = 1 << 14;
    let delta = PERIOD / base as f64;

    // F_0 = 1 on the finest grid
    let mut current: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); base + 1];
    let mut step = delta;
    for &index in word.indices() {
        let n = current.len() - 1; // intervals at this level
        let mut next: Vec<Complex64> = Vec::with_capacity(n / 2 + 1);
        let mut acc = Complex64::new(0.0, 0.0);
        next.push(acc);
        // pick the piece by the interval midpoint, then evaluate its
        // polynomial at all three Simpson nodes: breakpoints sit on grid
        // nodes, so every interval lies inside one smooth piece and no
        // sample lands on the wrong side of a jump
        let piece_at = |x: f64| -> Option<&ExpPoly> {
            let coeff = seq.entry(index)?;
            for (upper, f) in coeff.pieces() {
                if x <= upper.to_f64() {
                    return Some(f);
                }
            }
            Some(&coeff.pieces().last().expect("nonempty").1)
        };
        for j in 0..n / 2 {
            let lo = 2.0 * j as f64 * step;
            let mid = lo + step;
            let hi = mid + step;
            let (a_lo, a_mid, a_hi) = match piece_at(mid) {
                None => (
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                    Complex64::new(0.0, 0.0),
                ),
                Some(f) => (f.eval(lo), f.eval(mid), f.eval(hi)),
            };
            let g_lo = a_lo * current[2 * j];
            let g_mid = a_mid * current[2 * j + 1];
            let g_hi = a_hi * current[2 * j + 2];
            acc += (g_lo + 4.0 * g_mid + g_hi) * (step / 3.0);
            next.push(acc);
        }
        current = next;
        step *= 2.0;
    }
    *current.last().expect("nonempty grid")
}

fn interesting_sequence() -> CoeffSeq {
    let mut m = BTreeMap::new();
    m.insert(
        1,
        PiecewiseCoeff::from_poly(ExpPoly::from_terms(vec![
            Term::new(Scalar::from_rat(rat(1, 2)), 1, 0),
            Term::new(Scalar::i(), 0, 1),
        ])),
    );
    m.insert(
        2,
        PiecewiseCoeff::from_poly(ExpPoly::cos(1).add(&ExpPoly::constant(Scalar::from_rat(rat(
            -1, 3,
        ))))),
    );
    m.insert(3, PiecewiseCoeff::from_poly(ExpPoly::sin(2)));
    CoeffSeq::new(m).unwrap()
}

#[test]
fn recursion_matches_direct_simplex_integration() {
    let seq = interesting_sequence();
    for word in words_up_to(5) {
        if word.len() > 3 {
            continue;
        }
        let exact = iterated_integral(&word, &seq).to_complex();
        let oracle = simplex_numeric(&word, &seq);
        let scale = exact.norm().max(1.0);
        assert!(
            (exact - oracle).norm() <= 1e-6 * scale,
            "{word}: exact {exact} vs simplex {oracle}"
        );
    }
}

#[test]
fn recursion_matches_simplex_on_two_piece_data() {
    // breakpoints sit on the oracle's grid, so the piece-aware
    // evaluation stays fourth-order
    let mut m = BTreeMap::new();
    m.insert(
        1,
        PiecewiseCoeff::from_pieces(vec![
            (centerflow::dyadic::Dyadic::half(), ExpPoly::one()),
            (centerflow::dyadic::Dyadic::one(), ExpPoly::x().neg()),
        ])
        .unwrap(),
    );
    m.insert(2, PiecewiseCoeff::from_poly(ExpPoly::harmonic(-1)));
    let seq = CoeffSeq::new(m).unwrap();
    for word in [
        Word::new(vec![1]).unwrap(),
        Word::new(vec![2, 1]).unwrap(),
        Word::new(vec![1, 1, 2]).unwrap(),
    ] {
        let exact = iterated_integral(&word, &seq).to_complex();
        let oracle = simplex_numeric(&word, &seq);
        let scale = exact.norm().max(1.0);
        assert!(
            (exact - oracle).norm() <= 1e-6 * scale,
            "{word}: exact {exact} vs simplex {oracle}"
        );
    }
}

#[test]
fn exact_antiderivatives_track_quadrature_on_100_inputs() {
    for report in run_suites("quadrature", 4, 100, 2024).unwrap() {
        for check in &report.checks {
            assert_eq!(check.trials, 100);
            assert!(check.passed(), "{:?}", check.first_failure);
        }
    }
}

#[test]
fn universal_implies_center() {
    // composition-condition data: all integrals vanish, hence all
    // return-map coefficients vanish through the weighted formula
    let mut m = BTreeMap::new();
    m.insert(1, PiecewiseCoeff::from_poly(ExpPoly::cos(1)));
    m.insert(
        2,
        PiecewiseCoeff::from_poly(ExpPoly::sin(1).mul(&ExpPoly::cos(1)).scale(&Scalar::from_int(2))),
    );
    let seq = CoeffSeq::new(m).unwrap();
    for order in [2, 4, 6] {
        let verdict = center_check(&seq, order).unwrap();
        assert!(verdict.is_universal_up_to);
        assert!(
            verdict.is_center_up_to,
            "universal data must certify as a center at order {order}"
        );
        assert!(verdict.series.is_identity());
    }
}
