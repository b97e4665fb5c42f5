//! Strategies shared by the property tests.
#![allow(dead_code)]

use num::BigRational;
use proptest::prelude::*;
use zetaspec::mpoly::{rat, Exponent, MultiPoly};

pub fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

pub fn positive_rational() -> impl Strategy<Value = BigRational> {
    (1i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Arbitrary polynomial in `p` variables with partial degrees ≤ `max_exp`.
pub fn any_poly(p: usize, max_exp: u32) -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec((proptest::collection::vec(0..=max_exp, p), rational()), 0..6)
        .prop_map(move |terms| MultiPoly::from_terms(p, terms))
}

/// Degree-`m` polynomial with non-negative coefficients, positive constant
/// term and every pure power `x_i^m`: positive on the octant with a top
/// part positive off the origin.
pub fn mahler_poly(p: usize, m: u32) -> impl Strategy<Value = MultiPoly> {
    let pure = proptest::collection::vec(positive_rational(), p);
    let extra = proptest::collection::vec((proptest::collection::vec(0..=m, p), positive_rational()), 0..4);
    (positive_rational(), pure, extra).prop_map(move |(c0, pure, extra)| {
        let mut f = MultiPoly::constant(p, c0);
        for (i, c) in pure.into_iter().enumerate() {
            f = &f + &MultiPoly::monomial(p, Exponent::unit(p, i, m), c);
        }
        for (e, c) in extra {
            if e.iter().sum::<u32>() <= m {
                f = &f + &MultiPoly::monomial(p, Exponent::new(e), c);
            }
        }
        f
    })
}
