mod common;

use common::mahler_poly;
use proptest::prelude::*;
use zetaspec::cubical::{FacePoint, QuadratureRule};
use zetaspec::expand::{coeff_a, coeff_c, log_coeff, split_radius, tail_series};
use zetaspec::mpoly::parse_poly;

fn face_point(p: usize) -> impl Strategy<Value = FacePoint> {
    (0..p, proptest::collection::vec(0.0f64..=1.0, p - 1)).prop_map(|(face, coords)| FacePoint { face, coords })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn factorization_along_rays(f in mahler_poly(2, 3), sigma in face_point(2)) {
        let t = tail_series(&f, &sigma).unwrap();
        let m = f.degree().unwrap() as i32;
        for rho in [2.0, 5.0, 10.0] {
            let x: Vec<f64> = sigma.embed().iter().map(|s| s * rho).collect();
            let direct = f.eval_f64(&x);
            let factored = rho.powi(m) * t.ftop_value * (1.0 + t.eval(rho));
            prop_assert!((direct - factored).abs() <= 1e-12 * direct.abs());
        }
    }

    #[test]
    fn c_is_a_at_shifted_index(f in mahler_poly(2, 2), sigma in face_point(2), n in 0usize..3) {
        let g = parse_poly("x1*x2+x2+3", 2).unwrap();
        let (p, q, m): (usize, usize, usize) = (2, 2, f.degree().unwrap() as usize);
        let lo = n + p.div_ceil(m);
        for lambda in lo..=q + p + n * m {
            let c = coeff_c(&f, &g, lambda, n, &sigma).unwrap();
            let a = coeff_a(&f, &g, lambda, q + p + n * m - lambda, &sigma).unwrap();
            prop_assert_eq!(c, a);
        }
        prop_assert_eq!(coeff_a(&f, &g, 2, q + (m - 1) * 2 + 1, &sigma).unwrap(), 0.0);
    }

    #[test]
    fn log_coefficient_is_additive(f in mahler_poly(2, 1), h in mahler_poly(2, 2), sigma in face_point(2)) {
        let g = parse_poly("x1+1", 2).unwrap();
        let fh = &f * &h;
        let lhs = log_coeff(&fh, &g, &sigma).unwrap();
        let rhs = log_coeff(&f, &g, &sigma).unwrap() + log_coeff(&h, &g, &sigma).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0), "{} vs {}", lhs, rhs);
    }
}

#[test]
fn tail_is_small_beyond_split_radius() {
    let rule = QuadratureRule::new(16);
    for (text, p) in [("x+1", 1), ("x^2+10*x+1", 1), ("x1^2+3*x1*x2+x2^2+5*x1+1", 2), ("x1+x2+x3+7", 3)] {
        let f = parse_poly(text, p).unwrap();
        let w = split_radius(&f, &rule).unwrap();
        let faces: Vec<FacePoint> = if p == 1 {
            vec![FacePoint { face: 0, coords: vec![] }]
        } else {
            (0..p)
                .flat_map(|face| {
                    rule.nodes().iter().map(move |&t| FacePoint {
                        face,
                        coords: vec![t; p - 1],
                    })
                })
                .collect()
        };
        for sigma in faces {
            let t = tail_series(&f, &sigma).unwrap();
            for scale in [1.0, 1.5, 4.0, 100.0] {
                assert!(t.eval(w * scale).abs() <= 0.5, "{text} at {sigma:?}");
            }
        }
    }
}
