//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Exponent`], whose ordering is
//! graded lexicographic. Zero coefficients are never stored, so structural
//! equality is polynomial equality.

mod mahler;
mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use mahler::{check_mahler, require_mahler, MahlerReport, MahlerVerdict, DEFAULT_MAHLER_DENSITY};
pub use parse::parse_poly;

/// Exponent multi-index of a monomial.
///
/// Ordered graded-lexicographically: total degree first, then
/// lexicographically with `x1 > x2 > ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(exps: Vec<u32>) -> Self {
        Exponent(exps)
    }

    pub fn zero(num_vars: usize) -> Self {
        Exponent(vec![0; num_vars])
    }

    /// `x_var^power` in `num_vars` variables (`var` is 0-based).
    pub fn unit(num_vars: usize, var: usize, power: u32) -> Self {
        let mut e = vec![0; num_vars];
        e[var] = power;
        Exponent(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact sparse polynomial in `num_vars` variables over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Exponent, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact rational value of a finite `f64`.
pub fn rat_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

pub fn rat_to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        MultiPoly {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: BigRational) -> Self {
        Self::monomial(num_vars, Exponent::zero(num_vars), c)
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, BigRational::one())
    }

    /// The coordinate function `x_{var+1}`.
    pub fn var(num_vars: usize, var: usize) -> Self {
        Self::monomial(num_vars, Exponent::unit(num_vars, var, 1), BigRational::one())
    }

    pub fn monomial(num_vars: usize, exp: Exponent, c: BigRational) -> Self {
        assert_eq!(exp.num_vars(), num_vars, "exponent length must equal num_vars");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        MultiPoly { num_vars, terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, merging
    /// repeated exponents and dropping zeros.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigRational)>,
    {
        let mut p = MultiPoly::zero(num_vars);
        for (e, c) in terms {
            assert_eq!(e.len(), num_vars, "exponent length must equal num_vars");
            p.add_term(Exponent(e), c);
        }
        p
    }

    fn add_term(&mut self, exp: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&exp);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &Exponent) -> BigRational {
        self.terms.get(exp).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&Exponent::zero(self.num_vars))
    }

    /// Total degree; `None` stands for the degree of the zero polynomial
    /// (minus infinity).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Exponent::degree)
    }

    /// Sum of the terms of total degree exactly `j`.
    pub fn homogeneous_part(&self, j: u32) -> MultiPoly {
        MultiPoly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() == j)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Top-degree homogeneous part (zero for the zero polynomial).
    pub fn top_part(&self) -> MultiPoly {
        match self.degree() {
            Some(m) => self.homogeneous_part(m),
            None => self.clone(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Exponent::degree);
        match degs.next() {
            Some(d) => degs.all(|e| e == d),
            None => true,
        }
    }

    pub fn scale(&self, c: &BigRational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.num_vars);
        }
        MultiPoly {
            num_vars: self.num_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut result = MultiPoly::one(self.num_vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: len,
            });
        }
        Ok(())
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &[BigRational]) -> Result<BigRational> {
        self.check_dim(x.len())?;
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e.as_slice()) {
                if k > 0 {
                    t *= num::pow(xi.clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Floating-point evaluation. Panics on a length mismatch.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.num_vars);
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut t = rat_to_f64(c);
                for (xi, &k) in x.iter().zip(e.as_slice()) {
                    if k > 0 {
                        t *= xi.powi(k as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// The shifted polynomial `x -> f(x + a)`.
    pub fn shift(&self, a: &[BigRational]) -> Result<MultiPoly> {
        self.check_dim(a.len())?;
        if a.iter().all(Zero::is_zero) {
            return Ok(self.clone());
        }
        let p = self.num_vars;
        // powers[i][k] = (x_i + a_i)^k
        let max_deg: Vec<u32> = (0..p)
            .map(|i| self.terms.keys().map(|e| e.0[i]).max().unwrap_or(0))
            .collect();
        let powers: Vec<Vec<MultiPoly>> = (0..p)
            .map(|i| {
                let lin = &MultiPoly::var(p, i) + &MultiPoly::constant(p, a[i].clone());
                let mut v = vec![MultiPoly::one(p)];
                for k in 1..=max_deg[i] as usize {
                    let next = &v[k - 1] * &lin;
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = MultiPoly::zero(p);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(p, c.clone());
            for (i, &k) in e.as_slice().iter().enumerate() {
                if k > 0 {
                    t = &t * &powers[i][k as usize];
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Relabels variables: variable `i` of `self` becomes variable `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Result<MultiPoly> {
        self.check_dim(perm.len())?;
        let mut seen = vec![false; perm.len()];
        for &j in perm {
            if j >= perm.len() || seen[j] {
                return Err(Error::DimensionMismatch {
                    expected: perm.len(),
                    found: j,
                });
            }
            seen[j] = true;
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = vec![0; perm.len()];
            for (i, &k) in e.as_slice().iter().enumerate() {
                ne[perm[i]] = k;
            }
            (ne, c.clone())
        });
        Ok(MultiPoly::from_terms(self.num_vars, terms))
    }

    /// Largest exponent of each variable among the stored terms.
    pub fn partial_degrees(&self) -> Vec<u32> {
        (0..self.num_vars)
            .map(|i| self.terms.keys().map(|e| e.0[i]).max().unwrap_or(0))
            .collect()
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = MultiPoly::zero(self.num_vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn fmt_monomial(e: &Exponent) -> String {
    e.as_slice()
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, k)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Canonical form: terms in descending graded-lex order, e.g.
/// `x1^2 - 3/2*x1*x2 + 2`.
impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = fmt_monomial(e);
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}
