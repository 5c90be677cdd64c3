//! Dense two-phase simplex method with Bland's rule, exact over any ordered field.

use crate::growth::univariate::OrderedField;

/// Result of `min c·x subject to A x = b, x >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome<F> {
    Optimal { x: Vec<F>, value: F },
    Infeasible,
    Unbounded,
}

struct Tableau<F> {
    rows: Vec<Vec<F>>,
    rhs: Vec<F>,
    basis: Vec<usize>,
}

impl<F: OrderedField> Tableau<F> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.clone() / p.clone();
        }
        self.rhs[r] = self.rhs[r].clone() / p;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for j in 0..self.rows[i].len() {
                let d = f.clone() * self.rows[r][j].clone();
                self.rows[i][j] = self.rows[i][j].clone() - d;
            }
            let d = f * self.rhs[r].clone();
            self.rhs[i] = self.rhs[i].clone() - d;
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost · x` over the current basic feasible solution, using only the
    /// columns allowed by `usable`. Returns false if unbounded.
    fn optimize(&mut self, cost: &[F], usable: &dyn Fn(usize) -> bool) -> bool {
        let ncols = cost.len();
        loop {
            // reduced costs c_j - c_B B^{-1} A_j; Bland: least improving column
            let entering = (0..ncols).filter(|&j| usable(j) && !self.basis.contains(&j)).find(|&j| {
                let mut r = cost[j].clone();
                for (i, &bi) in self.basis.iter().enumerate() {
                    r = r - cost[bi].clone() * self.rows[i][j].clone();
                }
                r < F::zero()
            });
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, F)> = None;
            for i in 0..self.rows.len() {
                if self.rows[i][c] > F::zero() {
                    let ratio = self.rhs[i].clone() / self.rows[i][c].clone();
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Solves `min c·x` subject to `A x = b`, `x >= 0`.
pub fn solve<F: OrderedField>(a: &[Vec<F>], b: &[F], c: &[F]) -> LpOutcome<F> {
    let m = a.len();
    let n = c.len();
    // phase 1: artificial variables n..n+m with b made nonnegative
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let neg = b[i] < F::zero();
        let mut row: Vec<F> = a[i].iter().map(|x| if neg { -x.clone() } else { x.clone() }).collect();
        row.extend((0..m).map(|k| if k == i { F::one() } else { F::zero() }));
        rows.push(row);
        rhs.push(if neg { -b[i].clone() } else { b[i].clone() });
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis: (n..n + m).collect(),
    };
    let mut cost1 = vec![F::zero(); n + m];
    for x in cost1.iter_mut().skip(n) {
        *x = F::one();
    }
    t.optimize(&cost1, &|_| true);
    let infeasibility = t
        .basis
        .iter()
        .zip(&t.rhs)
        .filter(|(&bi, _)| bi >= n)
        .fold(F::zero(), |s, (_, r)| s + r.clone());
    if infeasibility > F::zero() {
        return LpOutcome::Infeasible;
    }
    // drive artificial variables out of the basis, dropping redundant rows
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => t.pivot(i, j),
                None => {
                    t.rows.remove(i);
                    t.rhs.remove(i);
                    t.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }
    let mut cost2 = c.to_vec();
    cost2.extend((0..m).map(|_| F::zero()));
    if !t.optimize(&cost2, &|j| j < n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![F::zero(); n];
    for (i, &bi) in t.basis.iter().enumerate() {
        x[bi] = t.rhs[i].clone();
    }
    let value = x.iter().zip(c).fold(F::zero(), |s, (xi, ci)| s + xi.clone() * ci.clone());
    LpOutcome::Optimal { x, value }
}

/// Some `x >= 0` with `A x = b`, if one exists.
pub fn feasible_point<F: OrderedField>(a: &[Vec<F>], b: &[F], num_vars: usize) -> Option<Vec<F>> {
    match solve(a, b, &vec![F::zero(); num_vars]) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}
