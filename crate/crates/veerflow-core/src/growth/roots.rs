//! Smallest positive root of an integer polynomial in `(0, 1]`.
//!
//! Low degrees use a Sturm sequence over the rationals; high degrees use Descartes'
//! rule of signs with dyadic subdivision of `(0, 1)`. Both refine by exact bisection
//! at dyadic points, so the returned value is within the tolerance of a true root.

use super::univariate::{count_roots, sturm_sequence, UniPoly};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Largest degree isolated with a Sturm sequence.
pub const STURM_MAX_DEGREE: usize = 48;
/// Deepest dyadic subdivision used by the Descartes search.
const MAX_DEPTH: u32 = 200;

/// Which isolation method produced a root.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Isolation {
    Sturm,
    Descartes,
}

/// A root enclosed in the dyadic interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootBracket {
    pub lo: BigRational,
    pub hi: BigRational,
    pub method: Isolation,
}

impl RootBracket {
    pub fn midpoint(&self) -> f64 {
        let m = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        m.to_f64().expect("finite")
    }
}

fn dyadic(num: &BigInt, k: u32) -> BigRational {
    BigRational::new(num.clone(), BigInt::one() << k)
}

/// Sign of `p(num / 2^k)` computed exactly.
pub fn sign_at_dyadic(p: &[BigInt], num: &BigInt, k: u32) -> i32 {
    let Some(d) = p.len().checked_sub(1) else {
        return 0;
    };
    // Σ c_i num^i 2^{k(d-i)} by Horner
    let mut acc = p[d].clone();
    let mut scale = BigInt::one();
    for i in (0..d).rev() {
        scale <<= k;
        acc = acc * num + &p[i] * &scale;
    }
    if acc.is_positive() {
        1
    } else if acc.is_negative() {
        -1
    } else {
        0
    }
}

fn taylor_shift_one(a: &mut [BigInt]) {
    let n = a.len();
    for k in 0..n.saturating_sub(1) {
        for j in (k..n - 1).rev() {
            let next = a[j + 1].clone();
            a[j] += next;
        }
    }
}

fn sign_variations(a: &[BigInt]) -> usize {
    let mut last = 0;
    let mut v = 0;
    for c in a {
        let s = if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            continue;
        };
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

/// Descartes bound on the number of roots of `p` in `(0, 1)`.
fn descartes_unit(p: &[BigInt]) -> usize {
    let mut r: Vec<BigInt> = p.iter().rev().cloned().collect();
    taylor_shift_one(&mut r);
    sign_variations(&r)
}

fn remove_content(p: &mut [BigInt]) {
    let g = p.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for c in p.iter_mut() {
            *c = &*c / &g;
        }
    }
}

/// `2^d p(x/2)`: roots in `(0, 1/2)` become roots in `(0, 1)`.
fn left_half(p: &[BigInt]) -> Vec<BigInt> {
    let d = p.len() - 1;
    let mut out: Vec<BigInt> = p.iter().enumerate().map(|(i, c)| c << (d - i)).collect();
    remove_content(&mut out);
    out
}

enum Found {
    Isolated(BigInt, u32),
    Exact(BigInt, u32),
    Cluster(BigInt, u32),
}

/// Leftmost root of `p` in `(c/2^k, (c+1)/2^k)`, where `p` has been transformed so that
/// this interval corresponds to `(0, 1)`.
fn leftmost(p: Vec<BigInt>, c: BigInt, k: u32) -> Option<Found> {
    let v = descartes_unit(&p);
    if v == 0 {
        return None;
    }
    if v == 1 {
        return Some(Found::Isolated(c, k));
    }
    if k >= MAX_DEPTH {
        return Some(Found::Cluster(c, k));
    }
    let left = left_half(&p);
    let mid_is_root = left.iter().fold(BigInt::zero(), |s, x| s + x).is_zero();
    if let Some(f) = leftmost(left.clone(), &c << 1, k + 1) {
        return Some(f);
    }
    if mid_is_root {
        return Some(Found::Exact((&c << 1) + 1, k + 1));
    }
    let mut right = left;
    taylor_shift_one(&mut right);
    remove_content(&mut right);
    leftmost(right, (c << 1) + 1, k + 1)
}

fn tolerance_exponent(tol: f64) -> u32 {
    let mut k = 0;
    while 2f64.powi(-(k as i32)) >= tol && k < 1000 {
        k += 1;
    }
    k
}

/// Refines a simple root isolated in `(lo/2^k, (lo+1)/2^k)` by sign bisection. The sign
/// at the left endpoint is nonzero.
fn refine_simple(p: &[BigInt], mut lo: BigInt, mut k: u32, target: u32) -> RootBracket {
    let s_lo = sign_at_dyadic(p, &lo, k);
    debug_assert!(s_lo != 0);
    while k < target {
        lo <<= 1;
        k += 1;
        let mid = &lo + 1;
        match sign_at_dyadic(p, &mid, k) {
            0 => {
                let m = dyadic(&mid, k);
                return RootBracket {
                    lo: m.clone(),
                    hi: m,
                    method: Isolation::Descartes,
                };
            }
            s if s == s_lo => lo = mid,
            _ => {}
        }
    }
    RootBracket {
        lo: dyadic(&lo, k),
        hi: dyadic(&(&lo + 1), k),
        method: Isolation::Descartes,
    }
}

fn descartes_root(p: &[BigInt], tol: f64) -> Option<RootBracket> {
    let target = tolerance_exponent(tol);
    let mut q = p.to_vec();
    remove_content(&mut q);
    match leftmost(q, BigInt::zero(), 0) {
        Some(Found::Isolated(c, k)) => Some(refine_simple(p, c, k, target.max(k))),
        Some(Found::Exact(c, k)) => {
            let m = dyadic(&c, k);
            Some(RootBracket {
                lo: m.clone(),
                hi: m,
                method: Isolation::Descartes,
            })
        }
        Some(Found::Cluster(c, k)) => Some(RootBracket {
            lo: dyadic(&c, k),
            hi: dyadic(&(c + 1), k),
            method: Isolation::Descartes,
        }),
        None => {
            let one: BigInt = p.iter().sum();
            one.is_zero().then(|| RootBracket {
                lo: BigRational::one(),
                hi: BigRational::one(),
                method: Isolation::Descartes,
            })
        }
    }
}

fn sturm_root(p: &[BigInt], tol: f64) -> Option<RootBracket> {
    let poly = UniPoly::new(p.iter().map(|c| BigRational::from_integer(c.clone())).collect());
    let seq = sturm_sequence(&poly);
    let zero = BigRational::zero();
    let mut hi = BigRational::one();
    if count_roots(&seq, &zero, &hi) == 0 {
        return None;
    }
    let tol_q = BigRational::new(BigInt::one(), BigInt::one() << tolerance_exponent(tol));
    let two = BigRational::from_integer(2.into());
    let mut lo = zero;
    while &hi - &lo >= tol_q {
        let mid = (&lo + &hi) / &two;
        if count_roots(&seq, &lo, &mid) > 0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if poly.eval(&hi).is_zero() {
        lo = hi.clone();
    }
    Some(RootBracket {
        lo,
        hi,
        method: Isolation::Sturm,
    })
}

/// Smallest root in `(0, 1]` of the polynomial with ascending coefficients `p`, enclosed
/// in an interval of width below `tol`. Requires `p(0) != 0`.
pub fn smallest_root_in_unit_interval(p: &[BigInt], tol: f64) -> Option<RootBracket> {
    let mut p = p.to_vec();
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    if p.len() <= 1 {
        return None;
    }
    assert!(!p[0].is_zero(), "polynomial vanishes at 0");
    if p.len() - 1 <= STURM_MAX_DEGREE {
        sturm_root(&p, tol)
    } else {
        descartes_root(&p, tol)
    }
}

/// Forces one isolation method, for cross-checking the two.
pub fn smallest_root_with(p: &[BigInt], tol: f64, method: Isolation) -> Option<RootBracket> {
    let mut p = p.to_vec();
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    if p.len() <= 1 {
        return None;
    }
    match method {
        Isolation::Sturm => sturm_root(&p, tol),
        Isolation::Descartes => descartes_root(&p, tol),
    }
}
