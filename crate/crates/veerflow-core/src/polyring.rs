//! Sparse multivariate Laurent polynomials and a division-free determinant.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Exponent vector, ordered by total degree and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<i64>);

impl Exponent {
    pub fn zero(nvars: usize) -> Self {
        Exponent(vec![0; nvars])
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn dot(&self, x: &[i64]) -> i64 {
        self.0.iter().zip(x).map(|(a, b)| a * b).sum()
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

/// Laurent polynomial in `nvars` variables over the coefficient ring `C`.
/// No zero coefficient is ever stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly<C> {
    nvars: usize,
    terms: BTreeMap<Exponent, C>,
}

/// Laurent polynomials with arbitrary-precision integer coefficients.
pub type IntPoly = LaurentPoly<BigInt>;

/// Coefficient rings usable in [`LaurentPoly`].
pub trait Coefficient: Clone + PartialEq + Zero + One + Neg<Output = Self> {}
impl<T: Clone + PartialEq + Zero + One + Neg<Output = T>> Coefficient for T {}

impl<C: Coefficient> LaurentPoly<C> {
    pub fn zero_in(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: C) -> Self {
        Self::monomial(Exponent::zero(nvars), c)
    }

    pub fn one_in(nvars: usize) -> Self {
        Self::constant(nvars, C::one())
    }

    pub fn monomial(exp: Exponent, c: C) -> Self {
        let nvars = exp.0.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { nvars, terms }
    }

    /// Builds from a term list, summing repeated exponents.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<i64>, C)>) -> Self {
        let mut p = Self::zero_in(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(Exponent(e), c);
        }
        p
    }

    pub fn num_vars(&self) -> usize {
        self.nvars
    }

    pub fn add_term(&mut self, exp: Exponent, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(old) => {
                let s = old.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &Exponent) -> C {
        self.terms.get(exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&Exponent::zero(self.nvars))
    }

    /// Exponents with nonzero coefficient.
    pub fn support(&self) -> Vec<Exponent> {
        self.terms.keys().cloned().collect()
    }

    /// Multiplies by the monomial `x^shift`.
    pub fn shift(&self, shift: &Exponent) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.add(shift), c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut p = Self::zero_in(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c.clone() * k.clone());
        }
        p
    }

    /// Keeps only the terms whose exponent satisfies `keep`.
    pub fn filter_terms(&self, mut keep: impl FnMut(&Exponent) -> bool) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Maps exponents through `f`, summing coefficients that collide.
    pub fn map_exponents(&self, nvars: usize, mut f: impl FnMut(&Exponent) -> Exponent) -> Self {
        let mut p = Self::zero_in(nvars);
        for (e, c) in &self.terms {
            p.add_term(f(e), c.clone());
        }
        p
    }

    /// Gives a polynomial built without a variable count (from `Zero`/`One`) `nvars` variables.
    fn lifted(&self, nvars: usize) -> std::borrow::Cow<'_, Self> {
        if self.nvars == nvars {
            return std::borrow::Cow::Borrowed(self);
        }
        assert_eq!(self.nvars, 0, "variable count");
        std::borrow::Cow::Owned(LaurentPoly {
            nvars,
            terms: self
                .terms.values().map(|c| (Exponent::zero(nvars), c.clone()))
                .collect(),
        })
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let nvars = self.nvars.max(other.nvars);
        let other = other.lifted(nvars);
        let mut p = self.lifted(nvars).into_owned();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), if negate { -c.clone() } else { c.clone() });
        }
        p
    }

    fn product(&self, other: &Self) -> Self {
        let nvars = self.nvars.max(other.nvars);
        let (a, other) = (self.lifted(nvars), other.lifted(nvars));
        let mut p = Self::zero_in(nvars);
        for (e1, c1) in &a.terms {
            for (e2, c2) in &other.terms {
                p.add_term(e1.add(e2), c1.clone() * c2.clone());
            }
        }
        p
    }
}

impl<C: Coefficient + PartialOrd> LaurentPoly<C> {
    /// Canonical representative up to units: the least term (in graded-lex order)
    /// is moved to exponent 0 and given a positive coefficient.
    pub fn normalized(&self) -> Self {
        let Some((e0, c0)) = self.terms.iter().next() else {
            return self.clone();
        };
        let shift = Exponent(e0.0.iter().map(|a| -a).collect());
        let p = self.shift(&shift);
        if *c0 < C::zero() {
            -p
        } else {
            p
        }
    }
}

impl<C: Coefficient> Add for LaurentPoly<C> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.combine(&rhs, false)
    }
}

impl<C: Coefficient> Sub for LaurentPoly<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.combine(&rhs, true)
    }
}

impl<C: Coefficient> Mul for LaurentPoly<C> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.product(&rhs)
    }
}

impl<'a, C: Coefficient> Add<&'a LaurentPoly<C>> for &'a LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: Self) -> LaurentPoly<C> {
        self.combine(rhs, false)
    }
}

impl<'a, C: Coefficient> Sub<&'a LaurentPoly<C>> for &'a LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: Self) -> LaurentPoly<C> {
        self.combine(rhs, true)
    }
}

impl<'a, C: Coefficient> Mul<&'a LaurentPoly<C>> for &'a LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: Self) -> LaurentPoly<C> {
        self.product(rhs)
    }
}

impl<C: Coefficient> Neg for LaurentPoly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

// `Zero` and `One` need a variable count; polynomials built this way have none and
// adopt the count of the first operand they meet.
impl<C: Coefficient> Zero for LaurentPoly<C> {
    fn zero() -> Self {
        Self::zero_in(0)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coefficient> One for LaurentPoly<C> {
    fn one() -> Self {
        Self::one_in(0)
    }
}

impl<C: Coefficient + fmt::Display + PartialOrd> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = *c < C::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let vars: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(k, &a)| {
                    if a == 1 {
                        format!("t{}", k + 1)
                    } else {
                        format!("t{}^{}", k + 1, a)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl IntPoly {
    /// JSON term list `[{coeff, exponent}]` in canonical order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| {
                    let coeff = match i64::try_from(c) {
                        Ok(x) => serde_json::Value::from(x),
                        Err(_) => serde_json::Value::from(c.to_string()),
                    };
                    serde_json::json!({ "coeff": coeff, "exponent": e.0 })
                })
                .collect(),
        )
    }
}

/// Default bound on determinant dimension.
pub const MAX_DET_DIM: usize = 64;

/// Determinant by Berkowitz's division-free algorithm.
pub fn det<R>(m: &[Vec<R>]) -> Result<R>
where
    R: Clone + Zero + One + Neg<Output = R> + Sub<Output = R>,
{
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    if n > MAX_DET_DIM {
        return Err(Error::TooLarge(format!("determinant of dimension {n}")));
    }
    if n == 0 {
        return Ok(R::one());
    }
    // coefficients of det(λI - A_r), highest degree first
    let mut vect: Vec<R> = vec![R::one(), -m[0][0].clone()];
    for r in 1..n {
        let col: Vec<R> = (0..r).map(|i| m[i][r].clone()).collect();
        let row: Vec<R> = (0..r).map(|j| m[r][j].clone()).collect();
        let mut t: Vec<R> = vec![R::one(), -m[r][r].clone()];
        let mut power = col;
        for _ in 0..r {
            let mut s = R::zero();
            for k in 0..r {
                s = s + row[k].clone() * power[k].clone();
            }
            t.push(-s);
            power = (0..r)
                .map(|i| {
                    let mut acc = R::zero();
                    for k in 0..r {
                        acc = acc + m[i][k].clone() * power[k].clone();
                    }
                    acc
                })
                .collect();
        }
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = R::zero();
            for j in 0..=i.min(r) {
                acc = acc + t[i - j].clone() * vect[j].clone();
            }
            next.push(acc);
        }
        vect = next;
    }
    let c = vect[n].clone();
    Ok(if n.is_multiple_of(2) { c } else { -c })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(&[i64], i64)]) -> IntPoly {
        IntPoly::from_terms(2, terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))))
    }

    #[test]
    fn product_of_binomials() {
        let a = p(&[(&[0, 0], 1), (&[1, 0], -1)]);
        let b = p(&[(&[0, 0], 1), (&[0, 1], -1)]);
        assert_eq!(&a * &b, p(&[(&[0, 0], 1), (&[1, 0], -1), (&[0, 1], -1), (&[1, 1], 1)]));
        assert!((&a * &IntPoly::zero_in(2)).is_zero());
        assert_eq!((&a * &b).to_string(), "1 - t2 - t1 + t1*t2");
    }

    #[test]
    fn integer_determinants() {
        assert_eq!(det::<i64>(&[]).unwrap(), 1);
        assert_eq!(det(&[vec![3i64]]).unwrap(), 3);
        assert_eq!(det(&[vec![1i64, 2], vec![3, 4]]).unwrap(), -2);
        let m = vec![vec![2i64, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]];
        assert_eq!(det(&m).unwrap(), 4);
        assert!(det(&[vec![1i64, 2]]).is_err());
    }

    #[test]
    fn diagonal_polynomial_determinant() {
        let one = IntPoly::one_in(2);
        let g = p(&[(&[1, 0], 1)]);
        let h = p(&[(&[0, 1], 1)]);
        let m = vec![
            vec![&one - &g, IntPoly::zero_in(2)],
            vec![IntPoly::zero_in(2), &one - &h],
        ];
        assert_eq!(det(&m).unwrap(), &(&one - &g) * &(&one - &h));
    }

    #[test]
    fn normalization() {
        let q = p(&[(&[-1, 0], -2), (&[0, 0], 1)]);
        assert_eq!(q.normalized(), p(&[(&[0, 0], 2), (&[1, 0], -1)]));
    }
}
