//! Smith normal form over a Euclidean ring of integers, with unimodular transforms.

use num_integer::Integer;
use num_traits::Signed;

/// Dense row-major matrix.
pub type Matrix<T> = Vec<Vec<T>>;

/// `u * a * v = d` with `d` diagonal, each diagonal entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith<T> {
    pub diagonal: Vec<T>,
    pub u: Matrix<T>,
    pub v: Matrix<T>,
    pub rank: usize,
}

pub fn identity<T: Integer + Clone>(n: usize) -> Matrix<T> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

pub fn mat_mul<T: Integer + Clone>(a: &Matrix<T>, b: &Matrix<T>, inner: usize, cols: usize) -> Matrix<T> {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = T::zero();
                    for k in 0..inner {
                        s = s + row[k].clone() * b[k][j].clone();
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn add_row<T: Integer + Clone>(m: &mut Matrix<T>, dst: usize, src: usize, k: &T) {
    for j in 0..m[dst].len() {
        let x = m[src][j].clone() * k.clone();
        m[dst][j] = m[dst][j].clone() + x;
    }
}

fn add_col<T: Integer + Clone>(m: &mut Matrix<T>, dst: usize, src: usize, k: &T) {
    for row in m.iter_mut() {
        let x = row[src].clone() * k.clone();
        row[dst] = row[dst].clone() + x;
    }
}

fn negate_row<T: Integer + Signed + Clone>(m: &mut Matrix<T>, r: usize) {
    for x in m[r].iter_mut() {
        *x = -x.clone();
    }
}

/// Smith normal form of an `rows x cols` matrix. Pivots are chosen by least absolute value.
pub fn smith_normal_form<T: Integer + Signed + Clone>(a: &Matrix<T>, rows: usize, cols: usize) -> Smith<T> {
    let mut d = a.clone();
    let mut u = identity::<T>(rows);
    let mut v = identity::<T>(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // least nonzero entry of the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| d[i][j].abs() < d[pi][pj].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..rows {
                if !d[i][t].is_zero() {
                    let q = d[i][t].div_floor(&d[t][t]);
                    let nq = -q;
                    add_row(&mut d, i, t, &nq);
                    add_row(&mut u, i, t, &nq);
                    if !d[i][t].is_zero() {
                        d.swap(t, i);
                        u.swap(t, i);
                        changed = true;
                    }
                }
            }
            for j in t + 1..cols {
                if !d[t][j].is_zero() {
                    let q = d[t][j].div_floor(&d[t][t]);
                    let nq = -q;
                    add_col(&mut d, j, t, &nq);
                    add_col(&mut v, j, t, &nq);
                    if !d[t][j].is_zero() {
                        for row in d.iter_mut() {
                            row.swap(t, j);
                        }
                        for row in v.iter_mut() {
                            row.swap(t, j);
                        }
                        changed = true;
                    }
                }
            }
            if changed {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let mut fix = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !d[i][j].is_multiple_of(&d[t][t]) {
                        fix = Some(i);
                        break 'scan;
                    }
                }
            }
            match fix {
                Some(i) => {
                    let one = T::one();
                    add_row(&mut d, t, i, &one);
                    add_row(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
        t += 1;
    }
    let diagonal: Vec<T> = (0..rows.min(cols)).map(|i| d[i][i].clone()).collect();
    let rank = diagonal.iter().filter(|x| !x.is_zero()).count();
    Smith {
        diagonal,
        u,
        v,
        rank,
    }
}

/// A Z-basis of the integer kernel `{x : a x = 0}`, as vectors of length `cols`.
pub fn integer_kernel<T: Integer + Signed + Clone>(a: &Matrix<T>, rows: usize, cols: usize) -> Vec<Vec<T>> {
    let s = smith_normal_form(a, rows, cols);
    (s.rank..cols)
        .map(|j| (0..cols).map(|i| s.v[i][j].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn big(m: &[&[i64]]) -> Matrix<BigInt> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn known_smith_form() {
        let a = big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_normal_form(&a, 3, 3);
        let d: Vec<i64> = s.diagonal.iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);
        let uav = mat_mul(&mat_mul(&s.u, &a, 3, 3), &s.v, 3, 3);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.diagonal[i].clone() } else { BigInt::from(0) };
                assert_eq!(uav[i][j], want);
            }
        }
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = big(&[&[1, 2, 3]]);
        let k = integer_kernel(&a, 1, 3);
        assert_eq!(k.len(), 2);
        for v in k {
            let s: BigInt = v.iter().zip([1, 2, 3]).map(|(x, c)| x * BigInt::from(c)).sum();
            assert_eq!(s, BigInt::from(0));
        }
    }
}
