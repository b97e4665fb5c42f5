//! Dirichlet series `ζ(s; f, g) = Σ_{n ∈ ℕ^p} g(n) f(n)^{-s}`: the shift
//! polynomial `a ↦ Z(-N; f_a, g_a)`, special values by Bernoulli
//! substitution, a direct-summation oracle and the averaged-shift check.

use num::complex::Complex64;
use num::{BigRational, One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bernoulli::{bernoulli_basis_eval, bernoulli_substitute, Coeff, CoeffTable};
use crate::cubical::{box_integral_many, Estimate, QuadratureRule};
use crate::error::{Error, Result};
use crate::expand::RayContext;
use crate::mpoly::{rat_from_f64, rat_to_f64, require_mahler, MultiPoly};
use crate::values::{
    check_dims, degree_of, prepare_factors, z_general, z_special_ctx, FirstError, Method, Params,
    ProductRuleReport, Settings, SpecialValue,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Kind {
    /// `a ↦ Z(-N; f_a, g_a)`.
    Integral,
    /// `a ↦ ζ(-N; f_a, g_a)`; only used to cross-check.
    Series,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftPolyResult {
    pub table: CoeffTable,
    /// Largest defect at the held-out points.
    pub residual: f64,
    /// Largest coefficient of total degree above the bound.
    pub dropped_mass: f64,
    /// `dropped_mass` exceeded the tolerance of the settings.
    pub flagged: bool,
    pub kind: Kind,
    pub n: u32,
}

const HELD_OUT: usize = 5;

/// Chebyshev nodes of the first kind mapped to `[0, 1]`, made exact.
fn chebyshev_nodes(count: usize) -> Vec<BigRational> {
    (0..count)
        .map(|j| {
            let t = (2 * j + 1) as f64 * std::f64::consts::PI / (2 * count) as f64;
            rat_from_f64((1.0 - t.cos()) / 2.0)
        })
        .collect()
}

/// `mat[L][j]`: coefficient of `x^L` in the interpolant of the `j`-th unit
/// data vector, by Newton divided differences.
fn interpolation_matrix(nodes: &[BigRational]) -> Vec<Vec<f64>> {
    let k = nodes.len();
    let mut mat = vec![vec![0.0; k]; k];
    #[allow(clippy::needless_range_loop)]
    for j in 0..k {
        let mut dd: Vec<BigRational> = (0..k)
            .map(|i| if i == j { BigRational::one() } else { BigRational::zero() })
            .collect();
        for level in 1..k {
            for i in (level..k).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&nodes[i] - &nodes[i - level]);
            }
        }
        // Horner on the Newton form.
        let mut poly = vec![dd[k - 1].clone()];
        for i in (0..k - 1).rev() {
            let mut next = vec![BigRational::zero(); poly.len() + 1];
            for (d, c) in poly.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * &nodes[i];
            }
            next[0] += &dd[i];
            poly = next;
        }
        for (l, c) in poly.iter().enumerate() {
            mat[l][j] = rat_to_f64(c);
        }
    }
    mat
}

/// Contracts `data` (shape `k^p`, axis 0 fastest) with `mat` along `axis`.
fn apply_axis(data: &[f64], k: usize, axis: usize, mat: &[Vec<f64>]) -> Vec<f64> {
    let stride = k.pow(axis as u32);
    let mut out = vec![0.0; data.len()];
    for (flat, slot) in out.iter_mut().enumerate() {
        let l = (flat / stride) % k;
        let base = flat - l * stride;
        *slot = (0..k).map(|j| mat[l][j] * data[base + j * stride]).sum();
    }
    out
}

fn multi_index(mut flat: usize, k: usize, p: usize) -> Vec<u32> {
    (0..p)
        .map(|_| {
            let d = flat % k;
            flat /= k;
            d as u32
        })
        .collect()
}

/// Deterministic off-grid points of `[0, 1]^p`.
fn held_out_points(p: usize) -> Vec<Vec<BigRational>> {
    const STEPS: [f64; 3] = [0.414_213_562_373_095, 0.732_050_807_568_877, 0.236_067_977_499_79];
    (0..HELD_OUT)
        .map(|t| {
            (0..p)
                .map(|i| rat_from_f64(((t + 1) as f64 * STEPS[i % 3] + 0.1 * i as f64).fract()))
                .collect()
        })
        .collect()
}

fn point_value(f: &MultiPoly, g: &MultiPoly, n: u32, kind: Kind, a: &[BigRational], settings: &Settings) -> Result<Estimate> {
    let fa = f.shift(a)?;
    let ga = g.shift(a)?;
    match kind {
        Kind::Integral => z_special_ctx(&RayContext::new(&fa, &ga)?, n as usize, &settings.rule),
        Kind::Series => {
            let (v, _) = zeta_special_unchecked(&fa, &ga, n, settings)?;
            Ok(Estimate {
                value: v.value.re,
                error: v.error_estimate,
            })
        }
    }
}

pub(crate) fn shift_value_poly_unchecked(
    f: &MultiPoly,
    g: &MultiPoly,
    n: u32,
    kind: Kind,
    settings: &Settings,
) -> Result<ShiftPolyResult> {
    let p = f.num_vars();
    let m = degree_of(f)?;
    let q = g.degree().unwrap_or(0) as usize;
    let bound = n as usize * m + q + p;
    let k = bound + 1;
    let nodes = chebyshev_nodes(k);
    let mat = interpolation_matrix(&nodes);
    let abs_mat: Vec<Vec<f64>> = mat.iter().map(|r| r.iter().map(|x| x.abs()).collect()).collect();

    let total = k.pow(p as u32);
    let samples: Vec<Estimate> = (0..total)
        .into_par_iter()
        .map(|flat| {
            let a: Vec<BigRational> = multi_index(flat, k, p).iter().map(|&i| nodes[i as usize].clone()).collect();
            point_value(f, g, n, kind, &a, settings)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut coeffs: Vec<f64> = samples.iter().map(|e| e.value).collect();
    let mut errs: Vec<f64> = samples.iter().map(|e| e.error).collect();
    let mut mags: Vec<f64> = samples.iter().map(|e| e.value.abs()).collect();
    for axis in 0..p {
        coeffs = apply_axis(&coeffs, k, axis, &mat);
        errs = apply_axis(&errs, k, axis, &abs_mat);
        mags = apply_axis(&mags, k, axis, &abs_mat);
    }

    let mut table = CoeffTable::new(p, bound as u32);
    let mut dropped_mass: f64 = 0.0;
    for flat in 0..total {
        let error = errs[flat] + 4.0 * k as f64 * f64::EPSILON * mags[flat];
        let c = Coeff::Approx {
            value: coeffs[flat],
            error,
        };
        if let Some(c) = table.insert(multi_index(flat, k, p), c) {
            dropped_mass = dropped_mass.max(c.value_f64().abs());
        }
    }

    let mut residual: f64 = 0.0;
    for a in held_out_points(p) {
        let fresh = point_value(f, g, n, kind, &a, settings)?;
        let af: Vec<f64> = a.iter().map(rat_to_f64).collect();
        let (interp, _) = table.eval_f64(&af);
        let defect = (interp - fresh.value).abs();
        if defect.is_nan() || defect > residual {
            residual = defect;
        }
    }
    if residual.is_nan() || residual > settings.interpolation_threshold {
        return Err(Error::InterpolationIllConditioned {
            residual,
            threshold: settings.interpolation_threshold,
        });
    }
    Ok(ShiftPolyResult {
        table,
        residual,
        dropped_mass,
        flagged: dropped_mass > settings.dropped_tolerance,
        kind,
        n,
    })
}

/// Coefficients of the shift polynomial `a ↦ Z(-N; f_a, g_a)` (or its
/// series analogue) by tensor Chebyshev interpolation on `[0, 1]^p`.
pub fn shift_value_poly(f: &MultiPoly, g: &MultiPoly, n: u32, kind: Kind, settings: &Settings) -> Result<ShiftPolyResult> {
    check_dims(f, g)?;
    require_mahler(f, settings.assume_mahler, None)?;
    shift_value_poly_unchecked(f, g, n, kind, settings)
}

fn substitution_value(table: &CoeffTable, n: u32, settings: &Settings) -> SpecialValue {
    let c = bernoulli_substitute(table);
    SpecialValue {
        value: Complex64::new(c.value_f64(), 0.0),
        error_estimate: c.error(),
        method: Method::BernoulliSubstitution,
        params: Params {
            n: Some(n),
            order: Some(settings.rule.order()),
            ..Params::default()
        },
    }
}

pub(crate) fn zeta_special_unchecked(
    f: &MultiPoly,
    g: &MultiPoly,
    n: u32,
    settings: &Settings,
) -> Result<(SpecialValue, ShiftPolyResult)> {
    let shift = shift_value_poly_unchecked(f, g, n, Kind::Integral, settings)?;
    Ok((substitution_value(&shift.table, n, settings), shift))
}

/// `ζ(-N; f, g)` together with the shift polynomial it was derived from.
pub fn zeta_special_report(f: &MultiPoly, g: &MultiPoly, n: u32, settings: &Settings) -> Result<(SpecialValue, ShiftPolyResult)> {
    check_dims(f, g)?;
    require_mahler(f, settings.assume_mahler, None)?;
    zeta_special_unchecked(f, g, n, settings)
}

/// `ζ(-N; f, g) = Σ_L c_L B_L` where `Σ_L c_L a^L = Z(-N; f_a, g_a)`.
pub fn zeta_special(f: &MultiPoly, g: &MultiPoly, n: u32, settings: &Settings) -> Result<SpecialValue> {
    zeta_special_report(f, g, n, settings).map(|(v, _)| v)
}

/// `ζ(-N; f_a, g_a)` for a shift `a ∈ [0, 1]^p`.
pub fn zeta_shift(f: &MultiPoly, g: &MultiPoly, n: u32, a: &[BigRational], settings: &Settings) -> Result<SpecialValue> {
    check_dims(f, g)?;
    if a.len() != f.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: f.num_vars(),
            found: a.len(),
        });
    }
    for (index, ai) in a.iter().enumerate() {
        if ai.is_negative() || ai > &BigRational::one() {
            return Err(Error::ShiftOutOfRange {
                index,
                value: ai.to_string(),
            });
        }
    }
    require_mahler(f, settings.assume_mahler, None)?;
    let shift = shift_value_poly_unchecked(f, g, n, Kind::Integral, settings)?;
    let af: Vec<f64> = a.iter().map(rat_to_f64).collect();
    let (value, error) = bernoulli_basis_eval(&shift.table, &af);
    Ok(SpecialValue {
        value: Complex64::new(value, 0.0),
        error_estimate: error,
        method: Method::BernoulliSubstitution,
        params: Params {
            n: Some(n),
            order: Some(settings.rule.order()),
            ..Params::default()
        },
    })
}

/// Polynomial with float coefficients for fast lattice evaluation.
struct FloatPoly {
    terms: Vec<(Vec<u32>, f64)>,
}

impl FloatPoly {
    fn new(poly: &MultiPoly) -> Self {
        FloatPoly {
            terms: poly
                .terms()
                .map(|(e, c)| (e.as_slice().to_vec(), rat_to_f64(c)))
                .collect(),
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(x).fold(*c, |acc, (&k, xi)| acc * xi.powi(k as i32)))
            .sum()
    }
}

/// Absolute-convergence bound `(q + p)/m` plus the safety margin.
fn convergence_bound(f: &MultiPoly, g: &MultiPoly) -> Result<f64> {
    let m = degree_of(f)? as f64;
    let q = g.degree().unwrap_or(0) as f64;
    Ok((q + f.num_vars() as f64) / m)
}

const CONVERGENCE_MARGIN: f64 = 0.1;
const MAX_LATTICE_POINTS: usize = 1 << 22;
const FIRST_SHELL: usize = 4;
const MAX_LEVELS: usize = 14;
const CHUNKS: usize = 256;

/// Sum of `g(n + t) f(n + t)^{-s}` over lattice points `n` with max-norm in
/// `[lo, hi)`.
fn shell_block(f: &FloatPoly, g: &FloatPoly, p: usize, t: &[f64], s: Complex64, lo: usize, hi: usize) -> Complex64 {
    let total = hi.pow(p as u32);
    let chunk = total.div_ceil(CHUNKS).max(1);
    let parts: Vec<Complex64> = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut acc = Complex64::zero();
            let mut x = vec![0.0; p];
            for flat in c * chunk..((c + 1) * chunk).min(total) {
                let mut rest = flat;
                let mut max = 0;
                for xi in x.iter_mut().zip(t) {
                    let d = rest % hi;
                    rest /= hi;
                    max = max.max(d);
                    *xi.0 = d as f64 + xi.1;
                }
                if max < lo {
                    continue;
                }
                let fv = f.eval(&x);
                let gv = g.eval(&x);
                acc += (-s * fv.ln()).exp() * gv;
            }
            acc
        })
        .collect();
    parts.into_iter().sum()
}

/// Lattice sum of `g(n + t) f(n + t)^{-s}`: partial sums over max-norm boxes
/// of side `M = 4·2^j`, accelerated by Richardson extrapolation on the tail
/// exponents `q + p - m s - i`.
fn lattice_sum(f: &MultiPoly, g: &MultiPoly, t: &[f64], s: Complex64, tol: f64) -> Estimate2 {
    let p = f.num_vars();
    let m = f.degree().unwrap_or(1) as f64;
    let q = g.degree().unwrap_or(0) as f64;
    let fp = FloatPoly::new(f);
    let gp = FloatPoly::new(g);
    let lead = Complex64::new(q + p as f64, 0.0) - s * m;

    let mut table: Vec<Vec<Complex64>> = Vec::new();
    let mut partial = Complex64::zero();
    let mut lo = 0;
    let mut best = Estimate2 {
        value: Complex64::zero(),
        error: f64::INFINITY,
    };
    for level in 0..MAX_LEVELS {
        let hi = FIRST_SHELL << level;
        if level > 0 && hi.pow(p as u32) > MAX_LATTICE_POINTS {
            break;
        }
        partial += shell_block(&fp, &gp, p, t, s, lo, hi);
        lo = hi;
        let mut row = vec![partial];
        for i in 0..level {
            // P(M) = Z + Σ_i a_i M^{e_i}: eliminate M^{e_i} with e_i = lead - i.
            let ratio = (Complex64::new(std::f64::consts::LN_2, 0.0) * (lead - i as f64)).exp();
            let prev = &table[level - 1];
            let v = (row[i] - ratio * prev[i]) / (Complex64::one() - ratio);
            row.push(v);
        }
        if level > 0 {
            let prev = &table[level - 1];
            let err = (row[level] - prev[level - 1]).norm();
            if err < best.error {
                best = Estimate2 {
                    value: row[level],
                    error: err,
                };
            }
        }
        table.push(row);
        if level >= 2 && best.error < tol {
            break;
        }
    }
    best
}

#[derive(Clone, Copy, Debug)]
struct Estimate2 {
    value: Complex64,
    error: f64,
}

fn check_convergent(f: &MultiPoly, g: &MultiPoly, s: Complex64) -> Result<()> {
    let bound = convergence_bound(f, g)?;
    if s.re.is_nan() || s.re <= bound + CONVERGENCE_MARGIN {
        return Err(Error::NotConvergent {
            s: format_complex(s),
            bound: bound + CONVERGENCE_MARGIN,
        });
    }
    Ok(())
}

fn format_complex(s: Complex64) -> String {
    if s.im == 0.0 {
        format!("{}", s.re)
    } else {
        format!("{}{:+}i", s.re, s.im)
    }
}

/// `ζ(s; f, g)` by direct summation in the half-plane of absolute
/// convergence. The error estimate is heuristic.
pub fn direct_sum(f: &MultiPoly, g: &MultiPoly, s: Complex64, tol: f64) -> Result<SpecialValue> {
    check_dims(f, g)?;
    check_convergent(f, g, s)?;
    require_mahler(f, true, None)?;
    let est = lattice_sum(f, g, &vec![0.0; f.num_vars()], s, tol);
    Ok(SpecialValue {
        value: est.value,
        error_estimate: est.error,
        method: Method::Oracle,
        params: Params {
            s: Some(s.into()),
            ..Params::default()
        },
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct RaabeReport {
    /// `Z(s; f, g)` by continuation.
    pub integral: SpecialValue,
    /// `∫_{[0,1]^p} ζ(s; f_t, g_t) dt`.
    pub average: Complex64,
    pub average_error: f64,
    pub discrepancy: f64,
    pub tol: f64,
    pub consistent: bool,
}

pub const RAABE_ORDER: usize = 8;

/// Compares `Z(s; f, g)` with the average over `t ∈ [0, 1]^p` of
/// `ζ(s; f_t, g_t)`, the latter by box quadrature of direct sums.
pub fn raabe_check(f: &MultiPoly, g: &MultiPoly, s: Complex64, settings: &Settings, tol: f64) -> Result<RaabeReport> {
    check_dims(f, g)?;
    check_convergent(f, g, s)?;
    let (integral, _) = z_general(f, g, s, settings)?;
    let p = f.num_vars();
    let rule = QuadratureRule::new(RAABE_ORDER.min(settings.rule.order()).max(2));
    let inner_tol = tol / 10.0;
    let errors = FirstError::new();
    let est = box_integral_many(&vec![0.0; p], &vec![1.0; p], &rule, 3, |t| {
        let v = lattice_sum(f, g, t, s, inner_tol);
        if !v.value.re.is_finite() {
            errors.record(Error::NotConvergent {
                s: format_complex(s),
                bound: f64::NAN,
            });
        }
        vec![v.value.re, v.value.im, v.error]
    })?;
    errors.into_result()?;
    let average = Complex64::new(est[0].value, est[1].value);
    let average_error = est[0].error + est[1].error + est[2].value.abs();
    let discrepancy = (average - integral.value).norm();
    Ok(RaabeReport {
        integral,
        average,
        average_error,
        discrepancy,
        tol,
        consistent: discrepancy <= tol,
    })
}

/// Product rule for Dirichlet series at `s = 0`, every side by Bernoulli
/// substitution.
pub fn product_rule_zeta(f_list: &[MultiPoly], g: &MultiPoly, settings: &Settings) -> Result<ProductRuleReport> {
    let (degrees, product, d) = prepare_factors(f_list, g, settings)?;
    let as_estimate = |v: SpecialValue| Estimate {
        value: v.value.re,
        error: v.error_estimate,
    };
    let product_value = as_estimate(zeta_special_unchecked(&product, g, 0, settings)?.0);
    let factor_values = f_list
        .iter()
        .map(|fj| zeta_special_unchecked(fj, g, 0, settings).map(|(v, _)| as_estimate(v)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductRuleReport::assemble(&degrees, d, product_value, factor_values))
}
