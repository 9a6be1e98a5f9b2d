//! Property tests for the exact algebra: randomized inputs, exact
//! equalities.

use centerflow::dyadic::Dyadic;
use centerflow::exppoly::{ExpPoly, Term};
use centerflow::piecewise::PiecewiseCoeff;
use centerflow::returnmap::ReturnSeries;
use centerflow::scalar::{rat, GaussRat, Rat, Scalar};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rat> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

fn gauss() -> impl Strategy<Value = GaussRat> {
    (rational(), rational()).prop_map(|(re, im)| GaussRat::new(re, im))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop::collection::vec(gauss(), 0..3).prop_map(|coeffs| {
        let mut acc = Scalar::zero();
        for (k, g) in coeffs.into_iter().enumerate() {
            acc = &acc + &Scalar::gauss_pi_pow(g, k);
        }
        acc
    })
}

fn exppoly() -> impl Strategy<Value = ExpPoly> {
    prop::collection::vec((gauss(), 0u32..=2, -2i64..=2), 0..4).prop_map(|terms| {
        ExpPoly::from_terms(
            terms
                .into_iter()
                .map(|(g, p, m)| Term::new(Scalar::from_gauss(g), p, m))
                .collect(),
        )
    })
}

fn piecewise() -> impl Strategy<Value = PiecewiseCoeff> {
    (exppoly(), exppoly(), 0usize..=2).prop_map(|(f, g, layout)| match layout {
        0 => PiecewiseCoeff::from_poly(f),
        1 => PiecewiseCoeff::from_pieces(vec![(Dyadic::half(), f), (Dyadic::one(), g)])
            .expect("valid layout"),
        _ => PiecewiseCoeff::from_pieces(vec![
            (Dyadic::new(1, 2), f),
            (Dyadic::one(), g),
        ])
        .expect("valid layout"),
    })
}

fn series(order: u32) -> impl Strategy<Value = ReturnSeries> {
    prop::collection::vec(gauss(), order as usize..=order as usize)
        .prop_map(|v| ReturnSeries::from_coeffs(v.into_iter().map(Scalar::from_gauss).collect()))
}

/// Scales such that frequencies stay integral, shifts that keep phases
/// at quarter turns.
fn affine_scale() -> impl Strategy<Value = Rat> {
    prop_oneof![
        Just(rat(1, 1)),
        Just(rat(-1, 1)),
        Just(rat(2, 1)),
        Just(rat(-2, 1)),
    ]
}

fn affine_shift() -> impl Strategy<Value = Rat> {
    (-4i64..=4).prop_map(|n| rat(n, 2))
}

proptest! {
    #[test]
    fn differentiation_inverts_antidifferentiation(f in exppoly()) {
        let anti = f.antiderivative();
        prop_assert_eq!(anti.derivative(), f);
        prop_assert!(anti.eval_dyadic(&Dyadic::zero()).unwrap().is_zero());
    }

    #[test]
    fn affine_composition_law(
        f in exppoly(),
        a1 in affine_scale(),
        b1 in affine_shift(),
        a2 in affine_scale(),
        b2 in affine_shift(),
    ) {
        let step = f.affine(&a1, &b1).unwrap().affine(&a2, &b2).unwrap();
        let direct = f.affine(&(&a1 * &a2), &(&a1 * &b2 + &b1)).unwrap();
        prop_assert_eq!(step, direct);
    }

    #[test]
    fn multiplication_is_commutative_and_distributes(
        f in exppoly(),
        g in exppoly(),
        h in exppoly(),
    ) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
    }

    #[test]
    fn scalar_render_parse_round_trip(s in scalar()) {
        prop_assert_eq!(Scalar::parse(&s.render()).unwrap(), s);
    }

    #[test]
    fn scalar_ring_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &(-&a), Scalar::zero());
    }

    #[test]
    fn tilde_is_continuous_and_anchored(p in piecewise()) {
        let tilde = p.tilde().unwrap();
        prop_assert!(tilde.value_at(&Dyadic::zero()).unwrap().is_zero());
        // continuity: at every interior breakpoint the left piece's value
        // equals the right piece's value
        let pieces = tilde.pieces();
        for window in pieces.windows(2) {
            let (cut, left) = (&window[0].0, &window[0].1);
            let right = &window[1].1;
            prop_assert_eq!(
                left.eval_dyadic(cut).unwrap(),
                right.eval_dyadic(cut).unwrap()
            );
        }
    }

    #[test]
    fn series_composition_is_associative(
        f in series(5),
        g in series(5),
        h in series(5),
    ) {
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn series_inverse_is_two_sided(f in series(5)) {
        let inv = f.inverse();
        prop_assert!(f.compose(&inv).unwrap().is_identity());
        prop_assert!(inv.compose(&f).unwrap().is_identity());
        prop_assert_eq!(inv.inverse(), f);
    }
}
