//! Zeta integrals `Z(s; f, g) = ∫_{[0,∞)^p} g f^{-s} dx`: special values at
//! `s = -N`, the logarithmic form at `s = 0`, continuation to general `s`,
//! pole candidates, residues and the product rule at `s = 0`.

use std::sync::Mutex;

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::cubical::{face_integral_many, Estimate, FacePoint, QuadratureRule};
use crate::error::{Error, Result};
use crate::expand::{log_coeff_at, split_radius, RayContext, RayPoint};
use crate::mpoly::{rat_to_f64, require_mahler, MultiPoly};

const ROUNDOFF: f64 = 64.0 * f64::EPSILON;

/// Computation knobs shared by the value engines.
#[derive(Clone, Debug)]
pub struct Settings {
    pub rule: QuadratureRule,
    /// Proceed when Mahler's hypothesis is only likely (not proven).
    pub assume_mahler: bool,
    /// Distance in `s` under which a pole candidate is reported as a pole.
    pub pole_tolerance: f64,
    /// Largest accepted held-out defect of shift-polynomial interpolation.
    pub interpolation_threshold: f64,
    /// Coefficients beyond the degree bound larger than this flag the result.
    pub dropped_tolerance: f64,
}

impl Settings {
    pub fn new(order: usize) -> Self {
        Settings {
            rule: QuadratureRule::new(order),
            assume_mahler: false,
            pole_tolerance: 1e-9,
            interpolation_threshold: 1e-6,
            dropped_tolerance: 1e-8,
        }
    }
}

impl Default for Settings {
    fn default() -> Self {
        Settings::new(crate::cubical::DEFAULT_ORDER)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    ValorZ,
    LogForm,
    GeneralS,
    Oracle,
    BernoulliSubstitution,
}

impl Method {
    pub fn tag(&self) -> &'static str {
        match self {
            Method::ValorZ => "VALOR_Z",
            Method::LogForm => "LOG_FORM",
            Method::GeneralS => "GENERAL_S",
            Method::Oracle => "ORACLE",
            Method::BernoulliSubstitution => "BERNOULLI_SUBSTITUTION",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexValue {
    fn from(z: Complex64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<ComplexValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub taylor_order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpecialValue {
    pub value: Complex64,
    pub error_estimate: f64,
    pub method: Method,
    pub params: Params,
}

impl SpecialValue {
    pub fn real(est: Estimate, method: Method, params: Params) -> Self {
        SpecialValue {
            value: Complex64::new(est.value, 0.0),
            error_estimate: est.error,
            method,
            params,
        }
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }
}

/// One `λ` of the tail sum: `M_λ(s, w)` (absent when it has a pole at `s`)
/// and its weighted contribution `binom(-s, λ) M_λ(s, w)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MTerm {
    pub lambda: usize,
    pub m_value: Option<Complex64>,
    pub weighted: Complex64,
}

/// Pieces of `Z(s) = Z_1 + k binom(-s,k) N_k + Σ_λ binom(-s,λ) M_λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuationBreakdown {
    pub z1: Complex64,
    pub m_terms: Vec<MTerm>,
    pub nk: Complex64,
    /// `k binom(-s, k)`.
    pub nk_weight: Complex64,
    pub w: f64,
    pub k: usize,
    pub n: usize,
}

impl ContinuationBreakdown {
    pub fn recombine(&self) -> Complex64 {
        self.z1 + self.nk_weight * self.nk + self.m_terms.iter().map(|t| t.weighted).sum::<Complex64>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleCandidate {
    pub s0: BigRational,
    pub ell: usize,
    /// Non-positive integers, where the continuation is regular.
    pub excluded: bool,
}

/// Records the first error raised inside a parallel integrand.
pub(crate) struct FirstError(Mutex<Option<Error>>);

impl FirstError {
    pub(crate) fn new() -> Self {
        FirstError(Mutex::new(None))
    }

    pub(crate) fn record(&self, e: Error) {
        let mut slot = self.0.lock().expect("error slot");
        if slot.is_none() {
            *slot = Some(e);
        }
    }

    pub(crate) fn into_result(self) -> Result<()> {
        match self.0.into_inner().expect("error slot") {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }
}

pub(crate) fn check_dims(f: &MultiPoly, g: &MultiPoly) -> Result<()> {
    if f.num_vars() != g.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: f.num_vars(),
            found: g.num_vars(),
        });
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `binom(-s, λ) = Π_{j<λ} (-s - j) / λ!`.
fn binom_neg(s: Complex64, lambda: usize) -> Complex64 {
    (0..lambda).fold(Complex64::one(), |acc, j| acc * (-s - j as f64) / (j + 1) as f64)
}

/// `lim_{s→-N} binom(-s, λ)/(s + N)` for `λ > N`.
pub(crate) fn binom_limit(lambda: usize, n: usize) -> f64 {
    let sign = if (lambda - n).is_multiple_of(2) { 1.0 } else { -1.0 };
    sign / ((lambda - n) as f64 * binomial(lambda, n))
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Face integral of `Σ_λ c_λ C_{λ,N}(σ) f_top(σ)^N` divided by `m`.
pub(crate) fn z_special_ctx(ctx: &RayContext, n: usize, rule: &QuadratureRule) -> Result<Estimate> {
    let (p, m, q) = (ctx.p(), ctx.m(), ctx.q());
    let lo = n + ceil_div(p, m);
    let hi = q + p + n * m;
    assert!(lo <= hi, "valorZ range is never empty for m ≥ 1");
    let weights: Vec<(usize, f64)> = (lo..=hi).map(|l| (l, binom_limit(l, n))).collect();
    let errors = FirstError::new();
    let est = face_integral_many(p, rule, 2, |sigma| match ctx.at(sigma) {
        Ok(pt) => {
            let powers = pt.r_powers(hi, hi);
            let ftop_n = pt.ftop().powi(n as i32);
            let mut v = 0.0;
            let mut a = 0.0;
            for &(l, c) in &weights {
                let t = c * pt.g_times_coeff(&powers[l], hi) * ftop_n;
                v += t;
                a += t.abs();
            }
            vec![v, a]
        }
        Err(e) => {
            errors.record(e);
            vec![f64::NAN, f64::NAN]
        }
    });
    errors.into_result()?;
    let mf = m as f64;
    Ok(Estimate {
        value: est[0].value / mf,
        error: (est[0].error + ROUNDOFF * est[1].value.abs()) / mf,
    })
}

pub(crate) fn degree_of(f: &MultiPoly) -> Result<usize> {
    match f.degree() {
        Some(m) if m > 0 => Ok(m as usize),
        _ => Err(Error::ConstantPolynomial),
    }
}

/// `Z(-N; f, g)` as a finite sum of face integrals of expansion coefficients.
pub fn z_special(f: &MultiPoly, g: &MultiPoly, n: u32, settings: &Settings) -> Result<SpecialValue> {
    check_dims(f, g)?;
    require_mahler(f, settings.assume_mahler, None)?;
    let ctx = RayContext::new(f, g)?;
    let est = z_special_ctx(&ctx, n as usize, &settings.rule)?;
    Ok(SpecialValue::real(
        est,
        Method::ValorZ,
        Params {
            n: Some(n),
            order: Some(settings.rule.order()),
            ..Params::default()
        },
    ))
}

pub(crate) fn z_zero_log_ctx(ctx: &RayContext, rule: &QuadratureRule) -> Result<Estimate> {
    let (p, q) = (ctx.p(), ctx.q());
    let errors = FirstError::new();
    let est = face_integral_many(p, rule, 1, |sigma| match ctx.at(sigma) {
        Ok(pt) => vec![log_coeff_at(&pt, q, p)],
        Err(e) => {
            errors.record(e);
            vec![f64::NAN]
        }
    });
    errors.into_result()?;
    let mf = ctx.m() as f64;
    Ok(Estimate {
        value: est[0].value / mf,
        error: (est[0].error + ROUNDOFF * est[0].value.abs()) / mf,
    })
}

/// `Z(0; f, g)` from the coefficient of `ρ^{-p}` in `-g log(f/f_top)`.
pub fn z_zero_log(f: &MultiPoly, g: &MultiPoly, settings: &Settings) -> Result<SpecialValue> {
    check_dims(f, g)?;
    require_mahler(f, settings.assume_mahler, None)?;
    let ctx = RayContext::new(f, g)?;
    let est = z_zero_log_ctx(&ctx, &settings.rule)?;
    Ok(SpecialValue::real(
        est,
        Method::LogForm,
        Params {
            n: Some(0),
            order: Some(settings.rule.order()),
            ..Params::default()
        },
    ))
}

pub fn pole_candidates(f: &MultiPoly, g: &MultiPoly, ell_max: usize) -> Vec<PoleCandidate> {
    let m = match f.degree() {
        Some(m) if m > 0 => m as i64,
        _ => return Vec::new(),
    };
    let qp = g.degree().unwrap_or(0) as i64 + f.num_vars() as i64;
    (0..=ell_max)
        .map(|ell| {
            let s0 = BigRational::new(BigInt::from(qp - ell as i64), BigInt::from(m));
            let excluded = s0.is_integer() && !s0.is_positive();
            PoleCandidate { s0, ell, excluded }
        })
        .collect()
}

/// Geometric panels `[0,1], [1,2], [2,4], ...` covering `[0, w]`.
fn radial_panels(w: f64) -> Vec<(f64, f64)> {
    if w <= 1.0 {
        return vec![(0.0, w)];
    }
    let mut panels = vec![(0.0, 1.0)];
    let mut a = 1.0;
    while a < w {
        let b = (2.0 * a).min(w);
        panels.push((a, b));
        a = b;
    }
    panels
}

/// Panels in `u ∈ (0, 1]` refined geometrically towards 0.
fn graded_panels(levels: usize) -> Vec<(f64, f64)> {
    let mut panels: Vec<(f64, f64)> = (0..levels)
        .map(|j| (0.5f64.powi(j as i32 + 1), 0.5f64.powi(j as i32)))
        .collect();
    panels.push((0.0, 0.5f64.powi(levels as i32)));
    panels
}

const GRADED_LEVELS: usize = 16;

fn cpow(base: f64, s: Complex64) -> Complex64 {
    // principal power of a positive real
    (s * base.ln()).exp()
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

struct GeneralPlan {
    s: Complex64,
    n: usize,
    k: usize,
    w: f64,
    /// `(λ, h)` pairs of the `M_λ` expansion, in order.
    ah_index: Vec<(usize, usize)>,
}

/// Picks `N`, snaps `s` onto a nearby non-positive integer and rejects
/// unexcluded pole candidates.
fn plan_general(ctx: &RayContext, s: Complex64, settings: &Settings, w: f64) -> Result<GeneralPlan> {
    let (p, m, q) = (ctx.p(), ctx.m(), ctx.q());
    let tol = settings.pole_tolerance;
    let mut s = s;
    let nearest = s.re.round();
    if nearest <= 0.0 && (s - Complex64::new(nearest, 0.0)).norm() < tol {
        s = Complex64::new(nearest, 0.0);
    }
    let n = (-s.re).ceil().max(0.0) as usize;
    for cand in pole_candidates_raw(m, q + p, q + p + m * n) {
        if cand.excluded {
            continue;
        }
        if (s - Complex64::new(rat_to_f64(&cand.s0), 0.0)).norm() < tol {
            return Err(Error::PoleAt(cand.s0));
        }
    }
    let k = n * m + q + p + 1;
    let ah_index = (0..k)
        .flat_map(|l| (0..=q + (m - 1) * l).map(move |h| (l, h)))
        .collect();
    Ok(GeneralPlan { s, n, k, w, ah_index })
}

fn pole_candidates_raw(m: usize, qp: usize, ell_max: usize) -> Vec<PoleCandidate> {
    (0..=ell_max)
        .map(|ell| {
            let s0 = BigRational::new(BigInt::from(qp as i64 - ell as i64), BigInt::from(m as i64));
            let excluded = s0.is_integer() && !s0.is_positive();
            PoleCandidate { s0, ell, excluded }
        })
        .collect()
}

/// `∫_0^w ρ^{p-1} g(ρσ) f(ρσ)^{-s} dρ` at full and half order.
fn z1_radial(ctx: &RayContext, sigma: &FacePoint, s: Complex64, w: f64, rule: &QuadratureRule) -> (Complex64, f64) {
    let x = sigma.embed();
    let fpart: Vec<f64> = (0..=ctx.m()).map(|j| ctx.f_parts().eval(j, &x)).collect();
    let gpart: Vec<f64> = (0..=ctx.q()).map(|j| ctx.g_parts().eval(j, &x)).collect();
    let p = ctx.p() as i32;
    let h = |rho: f64| -> Complex64 {
        let fv = horner(&fpart, rho);
        let gv = horner(&gpart, rho);
        cpow(fv, -s) * (gv * rho.powi(p - 1))
    };
    let mut full = Complex64::zero();
    let mut half = Complex64::zero();
    for (a, b) in radial_panels(w) {
        full += rule.mapped(a, b).map(|(r, wt)| h(r) * wt).sum::<Complex64>();
        half += rule.mapped_half(a, b).map(|(r, wt)| h(r) * wt).sum::<Complex64>();
    }
    (full, (full - half).norm())
}

/// `∫_0^1 (1-t)^{k-1} (1 + t r)^{-(s+k)} dt` at full and half order.
fn taylor_remainder(r: f64, s: Complex64, k: usize, rule: &QuadratureRule) -> (Complex64, Complex64) {
    let h = |t: f64| cpow(1.0 + t * r, -(s + k as f64)) * (1.0 - t).powi(k as i32 - 1);
    let full = rule.mapped(0.0, 1.0).map(|(t, wt)| h(t) * wt).sum();
    let half = rule.mapped_half(0.0, 1.0).map(|(t, wt)| h(t) * wt).sum();
    (full, half)
}

/// Radial part of `N_k` at σ, with `ρ = w/u`, `u ∈ (0, 1]`.
fn nk_radial(pt: &RayPoint, ctx: &RayContext, sigma: &FacePoint, plan: &GeneralPlan, rule: &QuadratureRule) -> (Complex64, f64) {
    let x = sigma.embed();
    let gpart: Vec<f64> = (0..=ctx.q()).map(|j| ctx.g_parts().eval(j, &x)).collect();
    let r_coeffs: Vec<f64> = std::iter::once(0.0).chain(pt.tail.u_coeffs.iter().copied()).collect();
    let (p, m) = (ctx.p() as f64, ctx.m() as f64);
    let (s, k, w) = (plan.s, plan.k, plan.w);
    let ftop_s = cpow(pt.ftop(), -s);
    let h = |u: f64, half_inner: bool| -> (Complex64, Complex64) {
        let rho = w / u;
        let v = 1.0 / rho;
        let r = horner(&r_coeffs, v);
        let g = horner(&gpart, rho);
        let outer = cpow(rho, Complex64::new(p - 1.0, 0.0) - s * m) * (g * r.powi(k as i32) * w / (u * u));
        let (tf, th) = taylor_remainder(r, s, k, rule);
        let _ = half_inner;
        (outer * tf, outer * th)
    };
    let mut full = Complex64::zero();
    let mut half = Complex64::zero();
    let mut inner_err = 0.0;
    for (a, b) in graded_panels(GRADED_LEVELS) {
        for (u, wt) in rule.mapped(a, b) {
            let (vf, vh) = h(u, false);
            full += vf * wt;
            inner_err += ((vf - vh) * wt).norm();
        }
        for (u, wt) in rule.mapped_half(a, b) {
            half += h(u, true).0 * wt;
        }
    }
    (full * ftop_s, ((full - half).norm() + inner_err) * ftop_s.norm())
}

/// `Z(s; f, g)` for general complex `s` via the compact/tail split at the
/// radius `w`, the Taylor remainder `N_k` and the closed-form `M_λ`.
pub fn z_general(
    f: &MultiPoly,
    g: &MultiPoly,
    s: Complex64,
    settings: &Settings,
) -> Result<(SpecialValue, ContinuationBreakdown)> {
    check_dims(f, g)?;
    require_mahler(f, settings.assume_mahler, None)?;
    let w = split_radius(f, &settings.rule)?;
    z_general_with_radius(f, g, s, w, settings)
}

/// As [`z_general`] with an explicit split radius `w` (which must keep
/// `|r| ≤ 1/2` beyond it).
pub fn z_general_with_radius(
    f: &MultiPoly,
    g: &MultiPoly,
    s: Complex64,
    w: f64,
    settings: &Settings,
) -> Result<(SpecialValue, ContinuationBreakdown)> {
    check_dims(f, g)?;
    degree_of(f)?;
    let ctx = RayContext::new(f, g)?;
    let plan = plan_general(&ctx, s, settings, w)?;
    let (p, m, q) = (ctx.p(), ctx.m(), ctx.q());
    let s = plan.s;
    let rule = &settings.rule;
    let trunc = q + m * (plan.k - 1);
    let count = plan.ah_index.len();

    // Components: [Z1 re, Z1 im, Z1 inner err, Nk re, Nk im, Nk inner err,
    //              I_{λ,h} re/im pairs...]
    let len = 6 + 2 * count;
    let errors = FirstError::new();
    let est = face_integral_many(p, rule, len, |sigma| {
        let pt = match ctx.at(sigma) {
            Ok(pt) => pt,
            Err(e) => {
                errors.record(e);
                return vec![f64::NAN; len];
            }
        };
        let mut out = Vec::with_capacity(len);
        let (z1, z1_err) = z1_radial(&ctx, sigma, s, plan.w, rule);
        out.extend([z1.re, z1.im, z1_err]);
        let (nk, nk_err) = nk_radial(&pt, &ctx, sigma, &plan, rule);
        out.extend([nk.re, nk.im, nk_err]);
        let ftop_s = cpow(pt.ftop(), -s);
        let powers = pt.r_powers(plan.k - 1, trunc);
        for &(l, h) in &plan.ah_index {
            let a = pt.g_times_coeff(&powers[l], l + h);
            let v = ftop_s * a;
            out.extend([v.re, v.im]);
        }
        out
    });
    errors.into_result()?;

    let z1 = Complex64::new(est[0].value, est[1].value);
    let z1_err = est[0].error + est[1].error + est[2].value.abs();
    let nk = Complex64::new(est[3].value, est[4].value);
    let nk_err = est[3].error + est[4].error + est[5].value.abs();
    let nk_weight = binom_neg(s, plan.k) * plan.k as f64;

    let mf = m as f64;
    let qp = (q + p) as f64;
    let mut m_terms: Vec<MTerm> = Vec::with_capacity(plan.k);
    let mut error = z1_err + nk_weight.norm() * nk_err;
    let mut idx = 0;
    for lambda in 0..plan.k {
        let binom = binom_neg(s, lambda);
        let mut m_value = Some(Complex64::zero());
        let mut weighted = Complex64::zero();
        while idx < count && plan.ah_index[idx].0 == lambda {
            let h = plan.ah_index[idx].1;
            let integral = Complex64::new(est[6 + 2 * idx].value, est[7 + 2 * idx].value);
            let integral_err = est[6 + 2 * idx].error + est[7 + 2 * idx].error;
            let ell = (lambda + h) as f64;
            let denom = s * mf + ell - qp;
            if denom == Complex64::zero() {
                // s = -N exactly and ℓ = q + p + mN: binom(-s, λ) has the
                // zero factor j = N, and binom(-s,λ)/(m(s+N)) → -(Π_{j≠N}(N-j)/λ!)/m.
                let n = plan.n;
                let rest: f64 = (0..lambda)
                    .filter(|&j| j != n)
                    .fold(1.0, |acc, j| acc * (n as f64 - j as f64) / (j + 1) as f64)
                    / (n + 1) as f64;
                let c = -rest / mf;
                weighted += integral * c;
                error += c.abs() * integral_err;
                m_value = None;
            } else {
                let factor = cpow(plan.w, Complex64::new(qp - ell, 0.0) - s * mf) / denom;
                if let Some(mv) = m_value.as_mut() {
                    *mv += factor * integral;
                }
                weighted += binom * factor * integral;
                error += (binom * factor).norm() * integral_err;
            }
            idx += 1;
        }
        m_terms.push(MTerm {
            lambda,
            m_value,
            weighted,
        });
    }
    let breakdown = ContinuationBreakdown {
        z1,
        m_terms,
        nk,
        nk_weight,
        w: plan.w,
        k: plan.k,
        n: plan.n,
    };
    let value = breakdown.recombine();
    error += ROUNDOFF * (z1.norm() + (nk_weight * nk).norm() + breakdown.m_terms.iter().map(|t| t.weighted.norm()).sum::<f64>());
    let sv = SpecialValue {
        value,
        error_estimate: error,
        method: Method::GeneralS,
        params: Params {
            s: Some(s.into()),
            order: Some(rule.order()),
            split_radius: Some(plan.w),
            taylor_order: Some(plan.k),
            n: None,
        },
    };
    Ok((sv, breakdown))
}

/// Residue of `Z(s; f, g)` at an unexcluded pole candidate `s0`.
pub fn residue(f: &MultiPoly, g: &MultiPoly, s0: &BigRational, settings: &Settings) -> Result<Estimate> {
    check_dims(f, g)?;
    require_mahler(f, settings.assume_mahler, None)?;
    let ctx = RayContext::new(f, g)?;
    let (p, m, q) = (ctx.p(), ctx.m(), ctx.q());
    let ell_rat = BigRational::from_integer(BigInt::from((q + p) as i64)) - s0 * BigInt::from(m as i64);
    let excluded = s0.is_integer() && !s0.is_positive();
    if !ell_rat.is_integer() || ell_rat.is_negative() || excluded {
        return Err(Error::NotACandidate(s0.clone()));
    }
    let ell = ell_rat.to_integer().to_usize().ok_or_else(|| Error::NotACandidate(s0.clone()))?;
    let s0f = rat_to_f64(s0);
    let n = (-s0f).ceil().max(0.0) as usize;
    let k = n * m + q + p + 1;
    let terms: Vec<(usize, usize, f64)> = (0..k.min(ell + 1))
        .filter_map(|l| {
            let h = ell - l;
            (h <= q + (m - 1) * l).then(|| (l, h, binom_neg(Complex64::new(s0f, 0.0), l).re))
        })
        .collect();
    if terms.is_empty() {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let errors = FirstError::new();
    let est = face_integral_many(p, &settings.rule, 1, |sigma| match ctx.at(sigma) {
        Ok(pt) => {
            let powers = pt.r_powers(ell, ell);
            let fs = pt.ftop().powf(-s0f);
            let v = terms
                .iter()
                .map(|&(l, h, b)| b * pt.g_times_coeff(&powers[l], l + h) * fs)
                .sum();
            vec![v]
        }
        Err(e) => {
            errors.record(e);
            vec![f64::NAN]
        }
    });
    errors.into_result()?;
    let mf = m as f64;
    Ok(Estimate {
        value: est[0].value / mf,
        error: (est[0].error + ROUNDOFF * est[0].value.abs()) / mf,
    })
}

/// Both sides of `deg(Π f_j)·V(Π f_j) = Σ_j deg(f_j)·V(f_j)` for a value
/// functional `V` at `s = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductRuleReport {
    pub lhs: Estimate,
    pub rhs: Estimate,
    pub factor_values: Vec<Estimate>,
    pub product_value: Estimate,
    pub discrepancy: f64,
    pub combined_error: f64,
    pub consistent: bool,
}

impl ProductRuleReport {
    pub(crate) fn assemble(degrees: &[usize], product_degree: usize, product_value: Estimate, factor_values: Vec<Estimate>) -> Self {
        let lhs = Estimate {
            value: product_degree as f64 * product_value.value,
            error: product_degree as f64 * product_value.error,
        };
        let rhs = degrees.iter().zip(&factor_values).fold(
            Estimate { value: 0.0, error: 0.0 },
            |acc, (&d, v)| Estimate {
                value: acc.value + d as f64 * v.value,
                error: acc.error + d as f64 * v.error,
            },
        );
        let discrepancy = (lhs.value - rhs.value).abs();
        let combined_error = lhs.error + rhs.error + ROUNDOFF * (lhs.value.abs() + rhs.value.abs());
        ProductRuleReport {
            lhs,
            rhs,
            factor_values,
            product_value,
            discrepancy,
            combined_error,
            consistent: discrepancy <= combined_error,
        }
    }
}

/// Validates factors and returns `(degrees, product, product degree)`.
pub(crate) fn prepare_factors(f_list: &[MultiPoly], g: &MultiPoly, settings: &Settings) -> Result<(Vec<usize>, MultiPoly, usize)> {
    let first = f_list.first().ok_or(Error::DimensionMismatch { expected: 1, found: 0 })?;
    let p = first.num_vars();
    let mut degrees = Vec::with_capacity(f_list.len());
    let mut product = MultiPoly::one(p);
    for (i, fj) in f_list.iter().enumerate() {
        check_dims(fj, g)?;
        require_mahler(fj, settings.assume_mahler, Some(i))?;
        degrees.push(degree_of(fj)?);
        product = &product * fj;
    }
    let d = degree_of(&product)?;
    Ok((degrees, product, d))
}

/// Product rule for zeta integrals at `s = 0`; both sides are computed
/// independently with [`z_special`].
pub fn product_rule_z(f_list: &[MultiPoly], g: &MultiPoly, settings: &Settings) -> Result<ProductRuleReport> {
    let (degrees, product, d) = prepare_factors(f_list, g, settings)?;
    let product_value = z_special_ctx(&RayContext::new(&product, g)?, 0, &settings.rule)?;
    let factor_values = f_list
        .iter()
        .map(|fj| z_special_ctx(&RayContext::new(fj, g)?, 0, &settings.rule))
        .collect::<Result<Vec<_>>>()?;
    Ok(ProductRuleReport::assemble(&degrees, d, product_value, factor_values))
}
