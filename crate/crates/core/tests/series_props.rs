mod common;

use common::mahler_poly;
use num::complex::Complex64;
use proptest::prelude::*;
use zetaspec::mpoly::{parse_poly, rat, rat_from_f64};
use zetaspec::series::{self, direct_sum, shift_value_poly, zeta_shift, zeta_special, Kind};
use zetaspec::values::{z_special, Settings};

fn st() -> Settings {
    Settings::new(24)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn interpolant_matches_fresh_values(f in mahler_poly(2, 1), a in proptest::collection::vec(0.0f64..=1.0, 2), n in 0u32..2) {
        let g = parse_poly("x1+1", 2).unwrap();
        let r = shift_value_poly(&f, &g, n, Kind::Integral, &st()).unwrap();
        prop_assert!(r.dropped_mass < 1e-8);
        let a_exact: Vec<_> = a.iter().map(|x| rat_from_f64(*x)).collect();
        let fresh = z_special(&f.shift(&a_exact).unwrap(), &g.shift(&a_exact).unwrap(), n, &st()).unwrap();
        let (interp, _) = r.table.eval_f64(&a);
        prop_assert!((interp - fresh.re()).abs() < 1e-6, "{} vs {}", interp, fresh.re());
    }

    #[test]
    fn shifted_series_matches_shifted_input(f in mahler_poly(2, 2), a in proptest::collection::vec(0i64..=4, 2)) {
        let g = parse_poly("1", 2).unwrap();
        let a: Vec<_> = a.iter().map(|&k| rat(k, 4)).collect();
        let v = zeta_shift(&f, &g, 0, &a, &st()).unwrap();
        let w = zeta_special(&f.shift(&a).unwrap(), &g.shift(&a).unwrap(), 0, &st()).unwrap();
        prop_assert!((v.value.re - w.value.re).abs() < 1e-6 * w.value.re.abs().max(1.0));
    }

    #[test]
    fn scaling_at_negative_integers(f in mahler_poly(2, 1), n in 0u32..3) {
        let g = parse_poly("1", 2).unwrap();
        let a = zeta_special(&f, &g, n, &st()).unwrap().value.re;
        let b = zeta_special(&f.scale(&rat(3, 1)), &g, n, &st()).unwrap().value.re;
        prop_assert!((b - 3f64.powi(n as i32) * a).abs() <= 1e-8 * b.abs().max(1.0));
    }
}

#[test]
fn equal_degree_factors_give_the_mean() {
    let fs = [parse_poly("x1+x2+1", 2).unwrap(), parse_poly("2*x1+x2+3", 2).unwrap()];
    let g = parse_poly("1", 2).unwrap();
    let r = series::product_rule_zeta(&fs, &g, &st()).unwrap();
    let mean = r.factor_values.iter().map(|e| e.value).sum::<f64>() / 2.0;
    assert!((r.product_value.value - mean).abs() <= r.combined_error, "{r:?}");
    assert!(r.consistent);
}

#[test]
fn series_and_integral_kinds_are_bernoulli_related() {
    // Σ c_L a^L for the series kind equals inverse transform of the integral kind.
    let f = parse_poly("x1^2+x1*x2+x2^2+2*x2+1", 2).unwrap();
    let g = parse_poly("1", 2).unwrap();
    let integral = shift_value_poly(&f, &g, 0, Kind::Integral, &st()).unwrap();
    let series_kind = shift_value_poly(&f, &g, 0, Kind::Series, &st()).unwrap();
    for a in [[0.0, 0.0], [0.3, 0.9], [1.0, 0.5]] {
        let (b, _) = zetaspec::bernoulli::bernoulli_basis_eval(&integral.table, &a);
        let (s, _) = series_kind.table.eval_f64(&a);
        assert!((b - s).abs() < 1e-6, "a={a:?}: {b} vs {s}");
    }
}

#[test]
fn direct_sum_scales_with_f() {
    let f = parse_poly("x1+x2+1", 2).unwrap();
    let g = parse_poly("1", 2).unwrap();
    let s = Complex64::new(4.5, 1.0);
    let a = direct_sum(&f, &g, s, 1e-10).unwrap();
    let b = direct_sum(&f.scale(&rat(2, 1)), &g, s, 1e-10).unwrap();
    let factor = (-s * 2f64.ln()).exp();
    assert!((b.value - factor * a.value).norm() < 1e-9);
}
