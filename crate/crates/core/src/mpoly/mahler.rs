//! Three-tier check of Mahler's hypothesis for real polynomials that are
//! required to be positive on the closed octant.

use num::{BigRational, One, Signed};
use serde::Serialize;

use super::{int, rat, rat_to_f64, Exponent, MultiPoly};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MahlerVerdict {
    Proven,
    Likely,
    Violated,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MahlerReport {
    pub verdict: MahlerVerdict,
    /// Rational point where `f` (on the octant) or `f_top` (on the face
    /// domain) is non-positive.
    pub witness: Option<Vec<BigRational>>,
    /// Smallest sampled `|f|` on the octant grid.
    pub min_abs_f: f64,
    /// Smallest sampled `|f_top|` on the face grid.
    pub min_abs_top: f64,
}

impl MahlerReport {
    pub fn passes(&self, assume_mahler: bool) -> bool {
        match self.verdict {
            MahlerVerdict::Proven => true,
            MahlerVerdict::Likely => assume_mahler,
            MahlerVerdict::Violated => false,
        }
    }
}

/// All coefficients non-negative, positive constant term and every pure
/// power `x_i^m` present in `f_top` with a positive coefficient.
fn sufficient_condition(f: &MultiPoly, m: u32) -> bool {
    let p = f.num_vars();
    f.terms().all(|(_, c)| !c.is_negative())
        && f.constant_term().is_positive()
        && (0..p).all(|i| f.coeff(&Exponent::unit(p, i, m)).is_positive())
}

/// Visits every point of `{0, 1/(d-1), ..., 1}^dims`.
fn for_each_grid_point(dims: usize, density: usize, mut visit: impl FnMut(&[BigRational]) -> bool) {
    let steps = density - 1;
    let mut idx = vec![0usize; dims];
    loop {
        let pt: Vec<BigRational> = idx.iter().map(|&k| rat(k as i64, steps as i64)).collect();
        if !visit(&pt) {
            return;
        }
        let mut d = 0;
        loop {
            if d == dims {
                return;
            }
            idx[d] += 1;
            if idx[d] <= steps {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

pub fn check_mahler(f: &MultiPoly, grid_density: usize) -> Result<MahlerReport> {
    let m = match f.degree() {
        Some(m) if m > 0 => m,
        _ => return Err(Error::ConstantPolynomial),
    };
    let density = grid_density.max(2);
    let p = f.num_vars();
    let top = f.top_part();

    let mut witness: Option<Vec<BigRational>> = None;
    let mut min_abs_top = f64::INFINITY;
    // f_top on each face {x_i = 1}.
    for face in 0..p {
        for_each_grid_point(p - 1, density, |coords| {
            let mut pt = Vec::with_capacity(p);
            pt.extend_from_slice(&coords[..face]);
            pt.push(BigRational::one());
            pt.extend_from_slice(&coords[face..]);
            let v = top.eval(&pt).expect("dimension");
            min_abs_top = min_abs_top.min(rat_to_f64(&v.abs()));
            if !v.is_positive() && witness.is_none() {
                witness = Some(pt);
            }
            witness.is_none()
        });
        if witness.is_some() {
            break;
        }
    }

    let mut min_abs_f = f64::INFINITY;
    // f on the octant: unit-cube grids scaled by a few radii.
    if witness.is_none() {
        for radius in [int(1), int(4), int(16)] {
            for_each_grid_point(p, density, |pt| {
                let scaled: Vec<BigRational> = pt.iter().map(|x| x * &radius).collect();
                let v = f.eval(&scaled).expect("dimension");
                min_abs_f = min_abs_f.min(rat_to_f64(&v.abs()));
                if !v.is_positive() && witness.is_none() {
                    witness = Some(scaled);
                }
                witness.is_none()
            });
            if witness.is_some() {
                break;
            }
        }
    }

    let verdict = if witness.is_some() {
        MahlerVerdict::Violated
    } else if sufficient_condition(f, m) {
        MahlerVerdict::Proven
    } else {
        MahlerVerdict::Likely
    };
    Ok(MahlerReport {
        verdict,
        witness,
        min_abs_f,
        min_abs_top,
    })
}

/// Default sampling density used when an operation validates its input.
pub const DEFAULT_MAHLER_DENSITY: usize = 9;

/// Runs [`check_mahler`] and turns a failing report into an error.
pub fn require_mahler(f: &MultiPoly, assume_mahler: bool, factor: Option<usize>) -> Result<MahlerReport> {
    let report = check_mahler(f, DEFAULT_MAHLER_DENSITY)?;
    if report.passes(assume_mahler) {
        return Ok(report);
    }
    let reason = match (&report.verdict, &report.witness) {
        (MahlerVerdict::Violated, Some(w)) => {
            let pt: Vec<String> = w.iter().map(|x| x.to_string()).collect();
            format!("non-positive value at ({})", pt.join(", "))
        }
        _ => "positivity not proven (pass assume_mahler to proceed)".to_string(),
    };
    Err(Error::MahlerViolation { factor, reason })
}
