//! Bernoulli numbers and polynomials, the Raabe transform
//! `P(a) = ∫_{[0,1]^p} Q(a + t) dt` and its inverse in the Bernoulli basis.

use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

use num::{BigRational, One, Zero};

use crate::mpoly::{int, rat_from_f64, rat_to_f64, Exponent, MultiPoly};

/// Dense univariate polynomial, coefficients from the constant term up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly(Vec<BigRational>);

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.0.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * t + c)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.0
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t + rat_to_f64(c))
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    /// The polynomial in variable `var` of a `num_vars`-variate ring.
    pub fn to_multi(&self, num_vars: usize, var: usize) -> MultiPoly {
        MultiPoly::from_terms(
            num_vars,
            self.0.iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; num_vars];
                e[var] = k as u32;
                (e, c.clone())
            }),
        )
    }
}

/// Append-only cache of `B_j(t)`.
#[derive(Debug, Default)]
pub struct BernoulliTable {
    polys: RwLock<Vec<UniPoly>>,
}

impl BernoulliTable {
    pub fn new() -> Self {
        BernoulliTable {
            polys: RwLock::new(vec![UniPoly::new(vec![BigRational::one()])]),
        }
    }

    /// Process-wide shared table.
    pub fn global() -> &'static BernoulliTable {
        static TABLE: OnceLock<BernoulliTable> = OnceLock::new();
        TABLE.get_or_init(BernoulliTable::new)
    }

    pub fn poly(&self, j: usize) -> UniPoly {
        if let Some(p) = self.polys.read().expect("bernoulli table lock").get(j) {
            return p.clone();
        }
        let mut polys = self.polys.write().expect("bernoulli table lock");
        while polys.len() <= j {
            let next = next_bernoulli(polys.len(), polys.last().expect("B_0 present"));
            polys.push(next);
        }
        polys[j].clone()
    }

    pub fn number(&self, j: usize) -> BigRational {
        self.poly(j).coeff(0)
    }
}

/// `B_j(t) = j ∫_0^t B_{j-1} + c`, with `c` fixed by `∫_0^1 B_j = 0`.
fn next_bernoulli(j: usize, prev: &UniPoly) -> UniPoly {
    let jr = int(j as i64);
    let mut coeffs = vec![BigRational::zero()];
    for (k, c) in prev.coeffs().iter().enumerate() {
        coeffs.push(c * &jr / int(k as i64 + 1));
    }
    let integral_01: BigRational = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c / int(k as i64 + 1))
        .fold(BigRational::zero(), |a, b| a + b);
    coeffs[0] = -integral_01;
    UniPoly::new(coeffs)
}

/// `B_j`, with the convention `B_1 = -1/2`.
pub fn bernoulli_number(j: usize) -> BigRational {
    BernoulliTable::global().number(j)
}

pub fn bernoulli_poly(j: usize) -> UniPoly {
    BernoulliTable::global().poly(j)
}

/// `∫_0^1 (a + t)^n dt = ((a+1)^{n+1} - a^{n+1}) / (n+1)` as coefficients in `a`.
fn raabe_monomial(n: u32) -> Vec<BigRational> {
    // (a+1)^{n+1} - a^{n+1} = Σ_{k=0}^{n} C(n+1, k) a^k
    let n1 = n as usize + 1;
    let mut binom = BigRational::one();
    let mut out = Vec::with_capacity(n1);
    for k in 0..n1 {
        out.push(&binom / int(n1 as i64));
        binom = binom * int((n1 - k) as i64) / int(k as i64 + 1);
    }
    out
}

/// `P(a) = ∫_{[0,1]^p} Q(a + t) dt`, exactly.
pub fn raabe_transform(q: &MultiPoly) -> MultiPoly {
    let p = q.num_vars();
    let mut cache: BTreeMap<u32, Vec<BigRational>> = BTreeMap::new();
    let mut out = MultiPoly::zero(p);
    for (e, c) in q.terms() {
        let factors: Vec<Vec<BigRational>> = e
            .as_slice()
            .iter()
            .map(|&k| cache.entry(k).or_insert_with(|| raabe_monomial(k)).clone())
            .collect();
        // Expand the product of univariate factors.
        let mut partial: Vec<(Vec<u32>, BigRational)> = vec![(Vec::with_capacity(p), c.clone())];
        for f in &factors {
            let mut next = Vec::with_capacity(partial.len() * f.len());
            for (exps, coef) in &partial {
                for (k, fc) in f.iter().enumerate() {
                    let mut ne = exps.clone();
                    ne.push(k as u32);
                    next.push((ne, coef * fc));
                }
            }
            partial = next;
        }
        out = &out + &MultiPoly::from_terms(p, partial);
    }
    out
}

/// A coefficient of a [`CoeffTable`]: exact, or a float with an error estimate.
#[derive(Clone, Debug, PartialEq)]
pub enum Coeff {
    Exact(BigRational),
    Approx { value: f64, error: f64 },
}

impl Coeff {
    pub fn value_f64(&self) -> f64 {
        match self {
            Coeff::Exact(r) => rat_to_f64(r),
            Coeff::Approx { value, .. } => *value,
        }
    }

    pub fn error(&self) -> f64 {
        match self {
            Coeff::Exact(_) => 0.0,
            Coeff::Approx { error, .. } => *error,
        }
    }

    /// Exact rational value; a float is taken at its exact binary value.
    pub fn to_rational(&self) -> BigRational {
        match self {
            Coeff::Exact(r) => r.clone(),
            Coeff::Approx { value, .. } => rat_from_f64(*value),
        }
    }
}

/// Finite map `L -> c_L` for a polynomial `Σ c_L a^L` in `num_vars`
/// variables with total degree bounded by `degree_bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffTable {
    num_vars: usize,
    degree_bound: u32,
    entries: BTreeMap<Exponent, Coeff>,
}

impl CoeffTable {
    pub fn new(num_vars: usize, degree_bound: u32) -> Self {
        CoeffTable {
            num_vars,
            degree_bound,
            entries: BTreeMap::new(),
        }
    }

    /// Exact table of `poly`; the bound is its degree.
    pub fn from_poly(poly: &MultiPoly) -> Self {
        let mut t = CoeffTable::new(poly.num_vars(), poly.degree().unwrap_or(0));
        for (e, c) in poly.terms() {
            t.entries.insert(e.clone(), Coeff::Exact(c.clone()));
        }
        t
    }

    /// Inserts `c_L`. Entries above the degree bound are refused and
    /// returned so the caller can report them.
    pub fn insert(&mut self, index: Vec<u32>, c: Coeff) -> Option<Coeff> {
        assert_eq!(index.len(), self.num_vars);
        let e = Exponent::new(index);
        if e.degree() > self.degree_bound {
            return Some(c);
        }
        self.entries.insert(e, c);
        None
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree_bound(&self) -> u32 {
        self.degree_bound
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: &[u32]) -> Option<&Coeff> {
        self.entries.get(&Exponent::new(index.to_vec()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, &Coeff)> {
        self.entries.iter()
    }

    /// The table read as a polynomial in `a` (floats taken exactly).
    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::from_terms(
            self.num_vars,
            self.entries
                .iter()
                .map(|(e, c)| (e.as_slice().to_vec(), c.to_rational())),
        )
    }

    /// `Σ c_L a^L` in floating point, with linearly propagated error.
    pub fn eval_f64(&self, a: &[f64]) -> (f64, f64) {
        let mut value = 0.0;
        let mut error = 0.0;
        for (e, c) in &self.entries {
            let mono: f64 = e
                .as_slice()
                .iter()
                .zip(a)
                .map(|(&k, x)| x.powi(k as i32))
                .product();
            value += c.value_f64() * mono;
            error += c.error() * mono.abs();
        }
        (value, error)
    }
}

/// `Q(a) = Σ d_L Π_i B_{L_i}(a_i)`, the preimage of `P = Σ d_L a^L` under
/// [`raabe_transform`].
pub fn inverse_raabe(table: &CoeffTable) -> MultiPoly {
    let p = table.num_vars();
    let mut out = MultiPoly::zero(p);
    for (e, c) in table.iter() {
        let mut term = MultiPoly::constant(p, c.to_rational());
        for (i, &k) in e.as_slice().iter().enumerate() {
            if k > 0 {
                term = &term * &bernoulli_poly(k as usize).to_multi(p, i);
            }
        }
        out = &out + &term;
    }
    out
}

/// `Σ c_L Π_i B_{L_i}(a_i)` at a floating point `a`, with the error
/// propagated linearly from the per-coefficient estimates.
pub fn bernoulli_basis_eval(table: &CoeffTable, a: &[f64]) -> (f64, f64) {
    assert_eq!(a.len(), table.num_vars());
    let mut value = 0.0;
    let mut error = 0.0;
    for (e, c) in table.iter() {
        let weight: f64 = e
            .as_slice()
            .iter()
            .zip(a)
            .map(|(&k, &x)| bernoulli_poly(k as usize).eval_f64(x))
            .product();
        value += c.value_f64() * weight;
        error += c.error() * weight.abs();
    }
    (value, error)
}

/// `Σ c_L B_L` with `B_L = Π_i B_{L_i}`. Exact when every entry is exact.
pub fn bernoulli_substitute(table: &CoeffTable) -> Coeff {
    let all_exact = table.iter().all(|(_, c)| matches!(c, Coeff::Exact(_)));
    if all_exact {
        let mut acc = BigRational::zero();
        for (e, c) in table.iter() {
            let b: BigRational = e
                .as_slice()
                .iter()
                .map(|&k| bernoulli_number(k as usize))
                .fold(BigRational::one(), |x, y| x * y);
            acc += c.to_rational() * b;
        }
        return Coeff::Exact(acc);
    }
    let mut value = 0.0;
    let mut error = 0.0;
    for (e, c) in table.iter() {
        let b: f64 = e
            .as_slice()
            .iter()
            .map(|&k| rat_to_f64(&bernoulli_number(k as usize)))
            .product();
        value += c.value_f64() * b;
        error += c.error() * b.abs();
    }
    Coeff::Approx { value, error }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mpoly::{parse_poly, rat};

    #[test]
    fn first_numbers() {
        assert_eq!(bernoulli_number(0), int(1));
        assert_eq!(bernoulli_number(1), rat(-1, 2));
        assert_eq!(bernoulli_number(2), rat(1, 6));
        assert_eq!(bernoulli_number(3), int(0));
        assert_eq!(bernoulli_number(4), rat(-1, 30));
        assert_eq!(bernoulli_number(12), rat(-691, 2730));
    }

    #[test]
    fn first_polynomials() {
        assert_eq!(bernoulli_poly(0), UniPoly::new(vec![int(1)]));
        assert_eq!(bernoulli_poly(1), UniPoly::new(vec![rat(-1, 2), int(1)]));
        assert_eq!(
            bernoulli_poly(2),
            UniPoly::new(vec![rat(1, 6), int(-1), int(1)])
        );
    }

    #[test]
    fn defining_relations() {
        for j in 1..=14 {
            let bj = bernoulli_poly(j);
            assert_eq!(bj.derivative().coeffs(), bernoulli_poly(j - 1).coeffs().iter().map(|c| c * int(j as i64)).collect::<Vec<_>>().as_slice());
            let integral: BigRational = bj
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| c / int(k as i64 + 1))
                .fold(BigRational::zero(), |a, b| a + b);
            assert!(integral.is_zero());
        }
    }

    #[test]
    fn difference_identity() {
        // B_j(x+1) - B_j(x) = j x^{j-1}
        for j in 1..=12usize {
            let bj = bernoulli_poly(j).to_multi(1, 0);
            let diff = &bj.shift(&[int(1)]).unwrap() - &bj;
            let expected = MultiPoly::from_terms(1, [(vec![j as u32 - 1], int(j as i64))]);
            assert_eq!(diff, expected, "j = {j}");
        }
    }

    #[test]
    fn raabe_examples() {
        let b2 = bernoulli_poly(2).to_multi(1, 0);
        assert_eq!(raabe_transform(&b2), parse_poly("x^2", 1).unwrap());
        assert_eq!(raabe_transform(&MultiPoly::one(2)), MultiPoly::one(2));
        assert_eq!(
            raabe_transform(&parse_poly("x", 1).unwrap()),
            parse_poly("x + 1/2", 1).unwrap()
        );
    }

    #[test]
    fn inverse_raabe_examples() {
        let t = CoeffTable::from_poly(&parse_poly("-1 - x", 1).unwrap());
        assert_eq!(inverse_raabe(&t), parse_poly("-x - 1/2", 1).unwrap());
        let t = CoeffTable::from_poly(&parse_poly("x^2", 1).unwrap());
        assert_eq!(inverse_raabe(&t), bernoulli_poly(2).to_multi(1, 0));
        let t = CoeffTable::from_poly(&parse_poly("7/3", 2).unwrap());
        assert_eq!(inverse_raabe(&t), parse_poly("7/3", 2).unwrap());
    }

    #[test]
    fn substitute_examples() {
        let mut t = CoeffTable::new(1, 1);
        t.insert(vec![0], Coeff::Exact(int(-1)));
        t.insert(vec![1], Coeff::Exact(int(-1)));
        assert_eq!(bernoulli_substitute(&t), Coeff::Exact(rat(-1, 2)));

        let mut t = CoeffTable::new(1, 2);
        t.insert(vec![0], Coeff::Exact(rat(-1, 2)));
        t.insert(vec![1], Coeff::Exact(int(-1)));
        t.insert(vec![2], Coeff::Exact(rat(-1, 2)));
        assert_eq!(bernoulli_substitute(&t), Coeff::Exact(rat(-1, 12)));

        let mut t = CoeffTable::new(2, 0);
        t.insert(vec![0, 0], Coeff::Exact(rat(5, 7)));
        assert_eq!(bernoulli_substitute(&t), Coeff::Exact(rat(5, 7)));
    }

    #[test]
    fn substitute_propagates_float_error() {
        let mut t = CoeffTable::new(1, 1);
        t.insert(vec![0], Coeff::Approx { value: -1.0, error: 1e-9 });
        t.insert(vec![1], Coeff::Approx { value: -1.0, error: 2e-9 });
        match bernoulli_substitute(&t) {
            Coeff::Approx { value, error } => {
                assert!((value + 0.5).abs() < 1e-15);
                assert!((error - 2e-9).abs() < 1e-20);
            }
            other => panic!("expected approximate result, got {other:?}"),
        }
    }

    #[test]
    fn table_refuses_entries_above_bound() {
        let mut t = CoeffTable::new(2, 1);
        assert!(t.insert(vec![1, 1], Coeff::Exact(int(1))).is_some());
        assert!(t.insert(vec![0, 1], Coeff::Exact(int(1))).is_none());
        assert_eq!(t.len(), 1);
    }

    #[test]
    fn basis_eval_matches_exact_inverse() {
        let poly = parse_poly("3*x1^2*x2 - x2 + 1/5", 2).unwrap();
        let t = CoeffTable::from_poly(&poly);
        let q = inverse_raabe(&t);
        let a = [0.3, 0.7];
        let (v, _) = bernoulli_basis_eval(&t, &a);
        assert!((v - q.eval_f64(&a)).abs() < 1e-14);
    }
}
