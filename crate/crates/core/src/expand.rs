//! Pointwise series along a ray `ρσ`.
//!
//! With `u = 1/ρ`, a polynomial `g` of degree `q` satisfies
//! `g(ρσ) = ρ^q G(u)` with `G(u) = Σ_i g_(q-i)(σ) u^i`, and the tail
//! `r = (f - f_top)/f_top` is the polynomial `R(u) = Σ_{j=1}^m f_(m-j)(σ)/f_top(σ) u^j`.
//! The coefficient of `ρ^{q-λ-h}` in `g·r^λ` is therefore `[u^{λ+h}] G R^λ`.

use crate::cubical::{FacePoint, QuadratureRule};
use crate::error::{Error, Result};
use crate::mpoly::{rat_to_f64, MultiPoly};

/// Homogeneous components of a polynomial, compiled to floats.
#[derive(Clone, Debug)]
pub struct HomogeneousParts {
    num_vars: usize,
    degree: usize,
    parts: Vec<Vec<(f64, Vec<u32>)>>,
}

impl HomogeneousParts {
    pub fn new(poly: &MultiPoly) -> Self {
        let degree = poly.degree().unwrap_or(0) as usize;
        let mut parts = vec![Vec::new(); degree + 1];
        for (e, c) in poly.terms() {
            parts[e.degree() as usize].push((rat_to_f64(c), e.as_slice().to_vec()));
        }
        HomogeneousParts {
            num_vars: poly.num_vars(),
            degree,
            parts,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `f_(j)(x)`; zero for `j` above the degree.
    pub fn eval(&self, j: usize, x: &[f64]) -> f64 {
        self.parts.get(j).map_or(0.0, |terms| {
            terms
                .iter()
                .map(|(c, e)| {
                    e.iter()
                        .zip(x)
                        .fold(*c, |acc, (&k, xi)| if k == 0 { acc } else { acc * xi.powi(k as i32) })
                })
                .sum()
        })
    }

    /// Full polynomial value.
    pub fn eval_all(&self, x: &[f64]) -> f64 {
        (0..=self.degree).map(|j| self.eval(j, x)).sum()
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }
}

/// The tail `r(ρσ)` at a fixed face point, as a polynomial in `u = 1/ρ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailSeries {
    pub sigma: FacePoint,
    pub ftop_value: f64,
    /// Entry `j - 1` is the coefficient of `u^j`, `1 ≤ j ≤ m`.
    pub u_coeffs: Vec<f64>,
}

impl TailSeries {
    /// `r(ρσ)` summed directly.
    pub fn eval(&self, rho: f64) -> f64 {
        let u = 1.0 / rho;
        self.u_coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| (acc + c) * u)
    }
}

fn tail_from_parts(f: &HomogeneousParts, sigma: &FacePoint) -> Result<TailSeries> {
    let x = sigma.embed();
    let m = f.degree();
    let ftop = f.eval(m, &x);
    if ftop == 0.0 || !ftop.is_finite() {
        return Err(Error::TopVanishes { sigma: x });
    }
    let u_coeffs = (1..=m).map(|j| f.eval(m - j, &x) / ftop).collect();
    Ok(TailSeries {
        sigma: sigma.clone(),
        ftop_value: ftop,
        u_coeffs,
    })
}

pub fn tail_series(f: &MultiPoly, sigma: &FacePoint) -> Result<TailSeries> {
    check_vars(f, sigma)?;
    tail_from_parts(&HomogeneousParts::new(f), sigma)
}

fn check_vars(poly: &MultiPoly, sigma: &FacePoint) -> Result<()> {
    if poly.num_vars() != sigma.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: poly.num_vars(),
            found: sigma.num_vars(),
        });
    }
    Ok(())
}

/// Product of two `u`-polynomials truncated after `u^trunc`.
fn mul_trunc(a: &[f64], b: &[f64], trunc: usize) -> Vec<f64> {
    let mut out = vec![0.0; trunc + 1];
    for (i, ai) in a.iter().enumerate().take(trunc + 1) {
        if *ai == 0.0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(trunc + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Compiled `(f, g)` pair shared by all face points of a computation.
#[derive(Clone, Debug)]
pub struct RayContext {
    f: HomogeneousParts,
    g: HomogeneousParts,
    g_is_zero: bool,
}

impl RayContext {
    pub fn new(f: &MultiPoly, g: &MultiPoly) -> Result<Self> {
        if f.num_vars() != g.num_vars() {
            return Err(Error::DimensionMismatch {
                expected: f.num_vars(),
                found: g.num_vars(),
            });
        }
        Ok(RayContext {
            f: HomogeneousParts::new(f),
            g: HomogeneousParts::new(g),
            g_is_zero: g.is_zero(),
        })
    }

    pub fn p(&self) -> usize {
        self.f.num_vars()
    }

    pub fn m(&self) -> usize {
        self.f.degree()
    }

    pub fn q(&self) -> usize {
        self.g.degree()
    }

    pub fn f_parts(&self) -> &HomogeneousParts {
        &self.f
    }

    pub fn g_parts(&self) -> &HomogeneousParts {
        &self.g
    }

    pub fn at(&self, sigma: &FacePoint) -> Result<RayPoint> {
        let tail = tail_from_parts(&self.f, sigma)?;
        let x = sigma.embed();
        let q = self.q();
        let g_coeffs = if self.g_is_zero {
            vec![0.0]
        } else {
            (0..=q).map(|i| self.g.eval(q - i, &x)).collect()
        };
        let mut r = vec![0.0];
        r.extend_from_slice(&tail.u_coeffs);
        Ok(RayPoint {
            tail,
            g_coeffs,
            r_coeffs: r,
        })
    }
}

/// `G(u)` and `R(u)` at one face point.
#[derive(Clone, Debug)]
pub struct RayPoint {
    pub tail: TailSeries,
    g_coeffs: Vec<f64>,
    r_coeffs: Vec<f64>,
}

impl RayPoint {
    pub fn ftop(&self) -> f64 {
        self.tail.ftop_value
    }

    /// `R(u)^λ` truncated after `u^trunc`, for `λ = 0..=max_lambda`.
    pub fn r_powers(&self, max_lambda: usize, trunc: usize) -> Vec<Vec<f64>> {
        let mut one = vec![0.0; trunc + 1];
        one[0] = 1.0;
        let mut out = vec![one];
        for l in 1..=max_lambda {
            let next = mul_trunc(&out[l - 1], &self.r_coeffs, trunc);
            out.push(next);
        }
        out
    }

    /// `[u^power] G(u)·S(u)` for a truncated series `S`.
    pub fn g_times_coeff(&self, series: &[f64], power: usize) -> f64 {
        self.g_coeffs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i <= power && power - i < series.len())
            .map(|(i, gi)| gi * series[power - i])
            .sum()
    }

    /// `[u^{λ+h}] G R^λ`, i.e. `A_{λ,h}(σ)`.
    pub fn coeff_a(&self, lambda: usize, h: usize, q: usize, m: usize) -> f64 {
        if h > q + (m.saturating_sub(1)) * lambda {
            return 0.0;
        }
        let power = lambda + h;
        let pw = self.r_powers(lambda, power);
        self.g_times_coeff(&pw[lambda], power)
    }
}

/// Coefficient of `ρ^{q-λ-h}` in `g(ρσ) r(ρσ)^λ`.
pub fn coeff_a(f: &MultiPoly, g: &MultiPoly, lambda: usize, h: usize, sigma: &FacePoint) -> Result<f64> {
    check_vars(f, sigma)?;
    let ctx = RayContext::new(f, g)?;
    let pt = ctx.at(sigma)?;
    Ok(pt.coeff_a(lambda, h, ctx.q(), ctx.m()))
}

/// Coefficient of `ρ^{-p-mN}` in `g(ρσ) r(ρσ)^λ`.
pub fn coeff_c(f: &MultiPoly, g: &MultiPoly, lambda: usize, n: usize, sigma: &FacePoint) -> Result<f64> {
    check_vars(f, sigma)?;
    let ctx = RayContext::new(f, g)?;
    let pt = ctx.at(sigma)?;
    let power = ctx.q() + ctx.p() + ctx.m() * n;
    let pw = pt.r_powers(lambda, power);
    Ok(pt.g_times_coeff(&pw[lambda], power))
}

/// Coefficient of `u^{q+p}` in `G(u)·Σ_{λ=1}^{q+p} (-1)^λ R^λ/λ`, the
/// expansion of `-g·log(1 + r)`. Higher `λ` start beyond `u^{q+p}`.
pub(crate) fn log_coeff_at(pt: &RayPoint, q: usize, p: usize) -> f64 {
    let power = q + p;
    let pw = pt.r_powers(power, power);
    let mut series = vec![0.0; power + 1];
    for (lambda, rl) in pw.iter().enumerate().skip(1) {
        let c = if lambda % 2 == 0 { 1.0 } else { -1.0 } / lambda as f64;
        for (s, v) in series.iter_mut().zip(rl) {
            *s += c * v;
        }
    }
    pt.g_times_coeff(&series, power)
}

/// The integrand of the logarithmic form of `deg(f)·Z(0; f, g)`, sign
/// included: the coefficient of `ρ^{-p}` in `-g(ρσ) log(1 + r(ρσ))`.
pub fn log_coeff(f: &MultiPoly, g: &MultiPoly, sigma: &FacePoint) -> Result<f64> {
    check_vars(f, sigma)?;
    let ctx = RayContext::new(f, g)?;
    let pt = ctx.at(sigma)?;
    Ok(log_coeff_at(&pt, ctx.q(), ctx.p()))
}

/// Face points of the full-order tensor rule (`σ = 1` when `p = 1`).
pub(crate) fn sample_face_nodes(p: usize, rule: &QuadratureRule) -> Vec<FacePoint> {
    let mut grid: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 1..p {
        grid = grid
            .into_iter()
            .flat_map(|pt| {
                rule.nodes().iter().map(move |&x| {
                    let mut q = pt.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    (0..p)
        .flat_map(|face| grid.iter().map(move |c| FacePoint { face, coords: c.clone() }))
        .collect()
}

/// Radius `w` past which `|r(ρσ)| ≤ 1/2` at every sampled face node: the
/// root of `Σ_j c_j / w^j = 1/2` with `c_j = max |f_(m-j)(σ)/f_top(σ)|`,
/// doubled, and at least 1.
pub fn split_radius(f: &MultiPoly, rule: &QuadratureRule) -> Result<f64> {
    let parts = HomogeneousParts::new(f);
    let m = parts.degree();
    let mut bounds = vec![0.0f64; m];
    for sigma in sample_face_nodes(f.num_vars(), rule) {
        let tail = tail_from_parts(&parts, &sigma)?;
        for (b, c) in bounds.iter_mut().zip(&tail.u_coeffs) {
            *b = b.max(c.abs());
        }
    }
    Ok(radius_from_bounds(&bounds))
}

pub(crate) fn radius_from_bounds(bounds: &[f64]) -> f64 {
    if bounds.iter().all(|&c| c == 0.0) {
        return 1.0;
    }
    let excess = |w: f64| -> f64 {
        bounds
            .iter()
            .enumerate()
            .map(|(j, c)| c / w.powi(j as i32 + 1))
            .sum::<f64>()
            - 0.5
    };
    let mut hi = 1.0;
    while excess(hi) > 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (2.0 * hi).max(1.0)
}
