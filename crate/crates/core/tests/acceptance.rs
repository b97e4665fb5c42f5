//! End-to-end acceptance suite. Runs every criterion, prints one PASS/FAIL
//! line each and exits non-zero if any failed.

use std::process::ExitCode;
use std::time::Instant;

use num::complex::Complex64;
use num::BigRational;
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

use zetaspec::bernoulli::{bernoulli_poly, inverse_raabe, raabe_transform, CoeffTable};
use zetaspec::mpoly::{int, parse_poly, rat, Exponent, MultiPoly};
use zetaspec::series::{self, Kind};
use zetaspec::values::{self, Settings};

type Check = Result<(), String>;
type Criterion = (&'static str, fn() -> Check);

fn poly(text: &str, p: usize) -> MultiPoly {
    parse_poly(text, p).expect("valid polynomial")
}

fn close(label: &str, got: f64, want: f64, tol: f64) -> Check {
    if (got - want).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{label}: got {got:.15e}, want {want:.15e} (tol {tol:e})"))
    }
}

fn ok<T>(r: zetaspec::Result<T>, label: &str) -> Result<T, String> {
    r.map_err(|e| format!("{label}: {e}"))
}

fn settings() -> Settings {
    Settings::default()
}

// Independent closed forms.
const RIEMANN: [f64; 6] = [-0.5, -1.0 / 12.0, 0.0, 1.0 / 120.0, 0.0, -1.0 / 252.0];

fn bernoulli_poly_closed(n: usize, x: f64) -> f64 {
    match n {
        1 => x - 0.5,
        2 => x * x - x + 1.0 / 6.0,
        3 => x * x * x - 1.5 * x * x + 0.5 * x,
        _ => unreachable!(),
    }
}

const ZETA3: f64 = 1.202_056_903_159_594_3;

fn criterion_1() -> Check {
    let st = settings();
    for (n, want) in RIEMANN.iter().enumerate() {
        let v = ok(series::zeta_special(&poly("x+1", 1), &poly("1", 1), n as u32, &st), "zeta_special")?;
        close(&format!("N={n}"), v.value.re, *want, 1e-10)?;
    }
    Ok(())
}

const SHIFTS: [(&str, f64); 3] = [("x+1/2", 0.5), ("x+1", 1.0), ("x+2", 2.0)];

fn criterion_2() -> Check {
    let st = settings();
    for (text, c) in SHIFTS {
        for n in 0..3usize {
            let v = ok(series::zeta_special(&poly(text, 1), &poly("1", 1), n as u32, &st), text)?;
            let want = -bernoulli_poly_closed(n + 1, c) / (n + 1) as f64;
            close(&format!("{text} N={n}"), v.value.re, want, 1e-10)?;
        }
    }
    // the same shifts summed directly at s = 3: ζ(3,1/2) = 7ζ(3), ζ(3,2) = ζ(3) - 1
    for ((text, _), want) in SHIFTS.iter().zip([7.0 * ZETA3, ZETA3, ZETA3 - 1.0]) {
        let v = ok(series::direct_sum(&poly(text, 1), &poly("1", 1), Complex64::new(3.0, 0.0), 1e-12), text)?;
        close(&format!("direct sum {text} s=3"), v.value.re, want, 1e-9)?;
    }
    Ok(())
}

fn criterion_3() -> Check {
    let st = settings();
    for (text, c) in SHIFTS {
        for n in 0..3i32 {
            let v = ok(values::z_special(&poly(text, 1), &poly("1", 1), n as u32, &st), text)?;
            let want = -c.powi(n + 1) / (n + 1) as f64;
            close(&format!("{text} N={n}"), v.re(), want, 1e-12)?;
        }
    }
    Ok(())
}

fn criterion_4() -> Check {
    let v = ok(series::zeta_special(&poly("x1+x2+1", 2), &poly("1", 2), 0, &settings()), "zeta_special")?;
    close("ζ(0; x1+x2+1)", v.value.re, -1.0 / 12.0, 1e-6)
}

fn criterion_5() -> Check {
    let st = settings();
    let f = poly("x1+x2+1", 2);
    let g = poly("1", 2);
    let a = ok(values::z_special(&f, &g, 0, &st), "Z_special")?;
    let b = ok(values::z_zero_log(&f, &g, &st), "Z_zero_log")?;
    close("valorZ", a.re(), 0.5, 1e-8)?;
    close("log form", b.re(), 0.5, 1e-8)
}

fn product_rule_holds(factors: &[MultiPoly], g: &MultiPoly, label: &str) -> Result<f64, String> {
    let st = settings();
    let z = ok(series::product_rule_zeta(factors, g, &st), label)?;
    if !z.consistent {
        return Err(format!(
            "{label}: series lhs {} rhs {} differ by {:e} > {:e}",
            z.lhs.value, z.rhs.value, z.discrepancy, z.combined_error
        ));
    }
    let i = ok(values::product_rule_z(factors, g, &st), label)?;
    if !i.consistent {
        return Err(format!(
            "{label}: integral lhs {} rhs {} differ by {:e} > {:e}",
            i.lhs.value, i.rhs.value, i.discrepancy, i.combined_error
        ));
    }
    Ok(z.product_value.value)
}

fn criterion_6() -> Check {
    let v = product_rule_holds(&[poly("x+1", 1), poly("x+2", 1)], &poly("1", 1), "p=1")?;
    close("ζ(0; (x+1)(x+2))", v, -1.0, 1e-8)?;
    product_rule_holds(&[poly("x1+x2+1", 2), poly("x1+2*x2+2", 2)], &poly("1", 2), "p=2")?;
    Ok(())
}

fn criterion_7() -> Check {
    product_rule_holds(&[poly("x+1", 1), poly("x^2+1", 1)], &poly("1", 1), "mixed degrees").map(|_| ())
}

fn criterion_8() -> Check {
    let st = settings();
    let r = ok(series::raabe_check(&poly("x+1", 1), &poly("1", 1), Complex64::new(3.0, 0.0), &st, 1e-6), "p=1")?;
    close("p=1 integral", r.integral.value.re, 0.5, 1e-6)?;
    close("p=1 average", r.average.re, 0.5, 1e-6)?;
    let r = ok(
        series::raabe_check(&poly("x1+x2+1", 2), &poly("1", 2), Complex64::new(4.0, 0.0), &st, 1e-5),
        "p=2",
    )?;
    close("p=2 integral", r.integral.value.re, 1.0 / 6.0, 1e-5)?;
    close("p=2 average", r.average.re, 1.0 / 6.0, 1e-5)
}

fn criterion_9() -> Check {
    let st = settings();
    let f = poly("x+1", 1);
    let g = poly("1", 1);
    for s in [3.0, 0.5, -0.5] {
        let (v, _) = ok(values::z_general(&f, &g, Complex64::new(s, 0.0), &st), "Z_general")?;
        let want = 1.0 / (s - 1.0);
        if (v.value - want).norm() > 1e-7 {
            return Err(format!("s={s}: got {}, want {want}", v.value));
        }
    }
    let r = ok(values::residue(&f, &g, &int(1), &st), "residue")?;
    close("res at 1 (x+1)", r.value, 1.0, 1e-6)?;
    let f2 = poly("x1+x2+1", 2);
    let g2 = poly("1", 2);
    let r = ok(values::residue(&f2, &g2, &int(2), &st), "residue")?;
    close("res at 2 (x1+x2+1)", r.value, 1.0, 1e-6)?;
    let r = ok(values::residue(&f2, &g2, &int(1), &st), "residue")?;
    close("res at 1 (x1+x2+1)", r.value, -1.0, 1e-6)
}

fn exponents(p: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..p {
        out = out
            .into_iter()
            .flat_map(|e: Vec<u32>| {
                let used: u32 = e.iter().sum();
                (0..=max_degree - used).map(move |k| {
                    let mut e = e.clone();
                    e.push(k);
                    e
                })
            })
            .collect();
    }
    out
}

fn criterion_10() -> Check {
    for p in 1..=3 {
        for l in exponents(p, 6) {
            let mut b = MultiPoly::one(p);
            for (i, &k) in l.iter().enumerate() {
                b = &b * &bernoulli_poly(k as usize).to_multi(p, i);
            }
            let mono = MultiPoly::monomial(p, Exponent::new(l.clone()), int(1));
            if raabe_transform(&b) != mono {
                return Err(format!("p={p} L={l:?}: transform of B_L is not a^L"));
            }
        }
    }
    let mut runner = TestRunner::deterministic();
    let coeff = (-50i64..=50, 1i64..=12).prop_map(|(n, d)| rat(n, d));
    let strategy = (1usize..=3).prop_flat_map(move |p| {
        proptest::collection::vec((proptest::collection::vec(0u32..=3, p), coeff.clone()), 1..8)
            .prop_map(move |terms| MultiPoly::from_terms(p, terms))
    });
    for case in 0..50 {
        let q = strategy
            .new_tree(&mut runner)
            .map_err(|e| e.to_string())?
            .current();
        let back = inverse_raabe(&CoeffTable::from_poly(&raabe_transform(&q)));
        if back != q {
            return Err(format!("case {case}: inverse_raabe(raabe_transform({q})) = {back}"));
        }
    }
    Ok(())
}

fn criterion_11() -> Check {
    let st = settings();
    let f = poly("x+1", 1);
    let g = poly("1", 1);
    // -(1+a)^{N+1}/(N+1)
    for (n, want) in [(0u32, vec![-1.0, -1.0]), (1, vec![-0.5, -1.0, -0.5])] {
        let r = ok(series::shift_value_poly(&f, &g, n, Kind::Integral, &st), "shift poly")?;
        for (l, w) in want.iter().enumerate() {
            let got = r.table.get(&[l as u32]).map(|c| c.value_f64()).unwrap_or(0.0);
            close(&format!("N={n} a^{l}"), got, *w, 1e-10)?;
        }
        for (e, c) in r.table.iter() {
            if e.degree() as usize >= want.len() {
                close(&format!("N={n} a^{:?}", e.as_slice()), c.value_f64(), 0.0, 1e-10)?;
            }
        }
    }
    let r = ok(
        series::shift_value_poly(&poly("x1+x2+1", 2), &poly("1", 2), 0, Kind::Integral, &st),
        "shift poly p=2",
    )?;
    if !(r.residual < 1e-6 && r.dropped_mass < 1e-8) {
        return Err(format!("residual {:e}, dropped mass {:e}", r.residual, r.dropped_mass));
    }
    Ok(())
}

/// The polynomial pairs used for invariance checks.
fn shipped() -> Vec<(MultiPoly, MultiPoly)> {
    [
        ("x+1", "1", 1),
        ("x^2+3*x+1", "x+2", 1),
        ("x1+x2+1", "1", 2),
        ("x1^2+x1*x2+2*x2^2+x1+1", "x2+1", 2),
        ("(x1+x2+1)*(x1+2*x2+2)", "1", 2),
        ("x1+2*x2+x3+1", "1", 3),
    ]
    .iter()
    .map(|&(f, g, p)| (poly(f, p), poly(g, p)))
    .collect()
}

fn rel_close(label: &str, got: f64, want: f64, tol: f64) -> Check {
    close(label, got, want, tol * want.abs().max(1.0))
}

fn criterion_12() -> Check {
    let st = settings();
    let c: BigRational = rat(3, 2);
    for (f, g) in shipped() {
        let p = f.num_vars();
        let scaled = f.scale(&c);
        let perm: Vec<usize> = (0..p).rev().collect();
        let (fp, gp) = (f.permute(&perm).unwrap(), g.permute(&perm).unwrap());
        for n in 0..2u32 {
            let factor = 1.5f64.powi(n as i32);
            let label = format!("f={f} g={g} N={n}");
            let zeta = ok(series::zeta_special(&f, &g, n, &st), &label)?.value.re;
            let z = ok(values::z_special(&f, &g, n, &st), &label)?.re();
            let zeta_c = ok(series::zeta_special(&scaled, &g, n, &st), &label)?.value.re;
            let z_c = ok(values::z_special(&scaled, &g, n, &st), &label)?.re();
            rel_close(&format!("{label} ζ scaling"), zeta_c, factor * zeta, 1e-8)?;
            rel_close(&format!("{label} Z scaling"), z_c, factor * z, 1e-8)?;
            let zeta_p = ok(series::zeta_special(&fp, &gp, n, &st), &label)?.value.re;
            let z_p = ok(values::z_special(&fp, &gp, n, &st), &label)?.re();
            rel_close(&format!("{label} ζ permutation"), zeta_p, zeta, 1e-8)?;
            rel_close(&format!("{label} Z permutation"), z_p, z, 1e-8)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("Riemann values", criterion_1),
        ("Hurwitz values", criterion_2),
        ("integral closed forms", criterion_3),
        ("two-variable lattice identity", criterion_4),
        ("two-variable integral", criterion_5),
        ("product rule", criterion_6),
        ("mixed-degree product rule", criterion_7),
        ("averaged-shift identity", criterion_8),
        ("general-s continuation and residues", criterion_9),
        ("Bernoulli transform exactness", criterion_10),
        ("shift-polynomial suite", criterion_11),
        ("scaling and permutation invariance", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {:>2} {name}: PASS ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({secs:.2}s) {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
