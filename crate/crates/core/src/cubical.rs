//! Cubical coordinates `x = ρσ` (ρ the max-norm, σ on the face domain
//! `{x ≥ 0 : max_i x_i = 1}`) and tensor Gauss–Legendre quadrature over
//! faces and boxes.

use num::{One, Signed};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// A point of the face domain: coordinate `face` (0-based) equals 1 and
/// `coords` holds the remaining `p - 1` coordinates in `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FacePoint<T = f64> {
    pub face: usize,
    pub coords: Vec<T>,
}

impl<T: Clone + One> FacePoint<T> {
    pub fn num_vars(&self) -> usize {
        self.coords.len() + 1
    }

    /// The point σ as a `p`-vector.
    pub fn embed(&self) -> Vec<T> {
        let mut v = Vec::with_capacity(self.coords.len() + 1);
        v.extend_from_slice(&self.coords[..self.face]);
        v.push(T::one());
        v.extend_from_slice(&self.coords[self.face..]);
        v
    }
}

/// Splits a non-zero octant point into `(ρ, σ)`. Ties in the max-norm go to
/// the smallest index.
pub fn decompose<T>(x: &[T]) -> Result<(T, FacePoint<T>)>
where
    T: Clone + PartialOrd + Signed,
{
    let mut face = 0;
    let mut rho = T::zero();
    for (i, xi) in x.iter().enumerate() {
        let a = xi.abs();
        if a > rho {
            rho = a;
            face = i;
        }
    }
    if rho.is_zero() {
        return Err(Error::ZeroPoint);
    }
    let coords = x
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != face)
        .map(|(_, xi)| xi.clone() / rho.clone())
        .collect();
    Ok((rho, FacePoint { face, coords }))
}

/// A value with a heuristic error estimate.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

/// Gauss–Legendre rule on `[0, 1]`, together with the half-order rule used
/// for error estimates.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    half_nodes: Vec<f64>,
    half_weights: Vec<f64>,
}

pub const DEFAULT_ORDER: usize = 32;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = nf * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        // recompute the derivative at the converged node
        let (mut p0, mut p1) = (1.0, 0.0);
        for j in 0..n {
            let p2 = p1;
            p1 = p0;
            p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
        }
        if (z * z - 1.0).abs() > 0.0 {
            dp = nf * (z * p0 - p1) / (z * z - 1.0);
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn unit_interval_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    (
        x.iter().map(|t| 0.5 * (t + 1.0)).collect(),
        w.iter().map(|v| 0.5 * v).collect(),
    )
}

impl QuadratureRule {
    pub fn new(order: usize) -> Self {
        let order = order.max(1);
        let (nodes, weights) = unit_interval_rule(order);
        let (half_nodes, half_weights) = unit_interval_rule((order / 2).max(1));
        QuadratureRule {
            order,
            nodes,
            weights,
            half_nodes,
            half_weights,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn half_nodes(&self) -> &[f64] {
        &self.half_nodes
    }

    pub fn half_weights(&self) -> &[f64] {
        &self.half_weights
    }

    /// Nodes and weights for `∫_a^b` at full order.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let len = b - a;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(t, w)| (a + len * t, len * w))
    }

    /// Nodes and weights for `∫_a^b` at half order.
    pub fn mapped_half(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let len = b - a;
        self.half_nodes
            .iter()
            .zip(&self.half_weights)
            .map(move |(t, w)| (a + len * t, len * w))
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule::new(DEFAULT_ORDER)
    }
}

/// Tensor grid of `dims`-dimensional points and weights in `[0,1]^dims`.
fn tensor_grid(nodes: &[f64], weights: &[f64], dims: usize) -> Vec<(Vec<f64>, f64)> {
    let mut grid = vec![(Vec::with_capacity(dims), 1.0)];
    for _ in 0..dims {
        let mut next = Vec::with_capacity(grid.len() * nodes.len());
        for (pt, w) in &grid {
            for (x, wx) in nodes.iter().zip(weights) {
                let mut q = pt.clone();
                q.push(*x);
                next.push((q, w * wx));
            }
        }
        grid = next;
    }
    grid
}

const ROUNDOFF: f64 = 64.0 * f64::EPSILON;

/// Weighted sum of a vector-valued integrand over a list of nodes.
/// Returns the sums and the sums of absolute contributions.
fn weighted_sum<P, H>(points: &[(P, f64)], len: usize, h: &H) -> (Vec<f64>, Vec<f64>)
where
    P: Sync,
    H: Fn(&P) -> Vec<f64> + Sync,
{
    let evals: Vec<Vec<f64>> = points.par_iter().map(|(pt, _)| h(pt)).collect();
    let mut sum = vec![0.0; len];
    let mut abs = vec![0.0; len];
    for ((_, w), v) in points.iter().zip(&evals) {
        debug_assert_eq!(v.len(), len);
        for k in 0..len {
            let c = w * v[k];
            sum[k] += c;
            abs[k] += c.abs();
        }
    }
    (sum, abs)
}

fn combine(full: (Vec<f64>, Vec<f64>), half: (Vec<f64>, Vec<f64>)) -> Vec<Estimate> {
    full.0
        .iter()
        .zip(&full.1)
        .zip(&half.0)
        .map(|((v, a), hv)| Estimate {
            value: *v,
            error: (v - hv).abs() + ROUNDOFF * a,
        })
        .collect()
}

fn face_points(p: usize, nodes: &[f64], weights: &[f64]) -> Vec<(FacePoint, f64)> {
    let grid = tensor_grid(nodes, weights, p - 1);
    (0..p)
        .flat_map(|face| {
            grid.iter().map(move |(coords, w)| {
                (
                    FacePoint {
                        face,
                        coords: coords.clone(),
                    },
                    *w,
                )
            })
        })
        .collect()
}

/// Integrates a vector-valued `h` (every call returns `len` components)
/// over the face domain in `p` variables. Faces are integrated
/// independently and summed. For `p = 1` the domain is the single point
/// `σ = 1` and the result is exact.
pub fn face_integral_many<H>(p: usize, rule: &QuadratureRule, len: usize, h: H) -> Vec<Estimate>
where
    H: Fn(&FacePoint) -> Vec<f64> + Sync,
{
    assert!(p >= 1);
    if p == 1 {
        let v = h(&FacePoint {
            face: 0,
            coords: vec![],
        });
        return v.into_iter().map(|value| Estimate { value, error: 0.0 }).collect();
    }
    let full = face_points(p, rule.nodes(), rule.weights());
    let half = face_points(p, rule.half_nodes(), rule.half_weights());
    combine(weighted_sum(&full, len, &h), weighted_sum(&half, len, &h))
}

/// Scalar face integral; error is the full/half-order difference.
pub fn face_integral<H>(h: H, p: usize, rule: &QuadratureRule) -> Estimate
where
    H: Fn(&FacePoint) -> f64 + Sync,
{
    face_integral_many(p, rule, 1, |s| vec![h(s)])[0]
}

/// Tensor quadrature of a vector-valued `h` over the box `[lower, upper]`.
pub fn box_integral_many<H>(
    lower: &[f64],
    upper: &[f64],
    rule: &QuadratureRule,
    len: usize,
    h: H,
) -> Result<Vec<Estimate>>
where
    H: Fn(&[f64]) -> Vec<f64> + Sync,
{
    if lower.len() != upper.len() {
        return Err(Error::DimensionMismatch {
            expected: lower.len(),
            found: upper.len(),
        });
    }
    let dims = lower.len();
    let to_box = |grid: Vec<(Vec<f64>, f64)>| -> Vec<(Vec<f64>, f64)> {
        grid.into_iter()
            .map(|(pt, w)| {
                let mut vol = w;
                let x = pt
                    .iter()
                    .enumerate()
                    .map(|(i, t)| {
                        let len = upper[i] - lower[i];
                        vol *= len;
                        lower[i] + len * t
                    })
                    .collect();
                (x, vol)
            })
            .collect()
    };
    let full = to_box(tensor_grid(rule.nodes(), rule.weights(), dims));
    let half = to_box(tensor_grid(rule.half_nodes(), rule.half_weights(), dims));
    let hv = |x: &Vec<f64>| h(x);
    Ok(combine(weighted_sum(&full, len, &hv), weighted_sum(&half, len, &hv)))
}

pub fn box_integral<H>(h: H, lower: &[f64], upper: &[f64], rule: &QuadratureRule) -> Result<Estimate>
where
    H: Fn(&[f64]) -> f64 + Sync,
{
    Ok(box_integral_many(lower, upper, rule, 1, |x| vec![h(x)])?[0])
}
