//! Dense univariate polynomials over an ordered field and Sturm sequences.

use num_traits::{Num, Signed};

/// Ordered fields usable for exact or floating root isolation.
pub trait OrderedField: Clone + Num + Signed + PartialOrd {}
impl<T: Clone + Num + Signed + PartialOrd> OrderedField for T {}

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly<F> {
    coeffs: Vec<F>,
}

impl<F: OrderedField> UniPoly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::new();
        let mut k = F::zero();
        for c in self.coeffs.iter() {
            if !out.is_empty() || !k.is_zero() {
                out.push(c.clone() * k.clone());
            }
            k = k + F::one();
        }
        UniPoly::new(out)
    }

    /// Remainder of division by a nonzero polynomial.
    pub fn rem(&self, divisor: &Self) -> Self {
        let dd = divisor.degree().expect("nonzero divisor");
        let lead = divisor.coeffs[dd].clone();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let q = r[k].clone() / lead.clone();
            for i in 0..=dd {
                let x = q.clone() * divisor.coeffs[i].clone();
                r[k - dd + i] = r[k - dd + i].clone() - x;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        UniPoly::new(r)
    }

    /// Divides every coefficient by the absolute value of the leading one.
    fn monic_abs(self) -> Self {
        match self.coeffs.last() {
            Some(l) => {
                let l = l.abs();
                UniPoly::new(self.coeffs.iter().map(|c| c.clone() / l.clone()).collect())
            }
            None => self,
        }
    }
}

/// Sturm sequence `p, p', -rem(p, p'), ...`, each term scaled by a positive constant.
pub fn sturm_sequence<F: OrderedField>(p: &UniPoly<F>) -> Vec<UniPoly<F>> {
    let mut seq = vec![p.clone()];
    let d = p.derivative();
    if d.is_zero() {
        return seq;
    }
    seq.push(d.monic_abs());
    loop {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        let neg = UniPoly::new(r.coeffs.iter().map(|c| -c.clone()).collect());
        seq.push(neg.monic_abs());
    }
    seq
}

/// Sign changes of the sequence evaluated at `x`, zeros skipped.
pub fn sign_changes<F: OrderedField>(seq: &[UniPoly<F>], x: &F) -> usize {
    let mut last = 0i8;
    let mut changes = 0;
    for p in seq {
        let v = p.eval(x);
        let s = if v > F::zero() {
            1
        } else if v < F::zero() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_roots<F: OrderedField>(seq: &[UniPoly<F>], a: &F, b: &F) -> usize {
    sign_changes(seq, a).saturating_sub(sign_changes(seq, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn counts_roots_of_cubic() {
        // (u - 1)(u - 2)(u + 3)
        let p = UniPoly::new(vec![q(6), q(-7), q(0), q(1)]);
        let s = sturm_sequence(&p);
        assert_eq!(count_roots(&s, &q(-10), &q(10)), 3);
        assert_eq!(count_roots(&s, &q(0), &q(1)), 1);
        assert_eq!(count_roots(&s, &q(1), &q(2)), 1);
        assert_eq!(count_roots(&s, &q(-2), &q(0)), 0);
    }

    #[test]
    fn double_root_counted_once() {
        // (u - 1)^2
        let p = UniPoly::new(vec![q(1), q(-2), q(1)]);
        let s = sturm_sequence(&p);
        assert_eq!(count_roots(&s, &q(0), &q(2)), 1);
    }

    #[test]
    fn float_instance() {
        let p = UniPoly::new(vec![-2.0f64, 0.0, 1.0]);
        let s = sturm_sequence(&p);
        assert_eq!(count_roots(&s, &0.0, &2.0), 1);
    }
}
