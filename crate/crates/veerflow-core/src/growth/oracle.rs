//! Independent growth-rate routes: cycle counting by weight and power iteration on the
//! subdivided graph.

use crate::error::{Error, Result};
use crate::graphs::strongly_connected_components;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

/// Largest weight bound accepted by the cycle-count oracle.
pub const MAX_COUNT_WEIGHT: i64 = 400;
/// Largest number of states of the subdivided graph used by power iteration.
pub const MAX_SUBDIVIDED_STATES: usize = 200_000;

/// A directed edge with an integer weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightedEdge {
    pub tail: usize,
    pub head: usize,
    pub weight: i64,
}

/// Some directed cycle (as edge indices) of total weight `<= 0`, if one exists.
pub fn nonpositive_cycle(num_vertices: usize, edges: &[WeightedEdge]) -> Option<Vec<usize>> {
    // with w' = N·w - 1, a simple cycle is negative iff its weight is <= 0
    let big = num_vertices as i64 + 1;
    let w: Vec<i64> = edges.iter().map(|e| big * e.weight - 1).collect();
    let mut dist = vec![0i64; num_vertices];
    let mut pred = vec![usize::MAX; num_vertices];
    let mut last = usize::MAX;
    for _ in 0..=num_vertices {
        last = usize::MAX;
        for (i, e) in edges.iter().enumerate() {
            if dist[e.tail] + w[i] < dist[e.head] {
                dist[e.head] = dist[e.tail] + w[i];
                pred[e.head] = i;
                last = e.head;
            }
        }
        if last == usize::MAX {
            return None;
        }
    }
    let mut v = last;
    for _ in 0..num_vertices {
        v = edges[pred[v]].tail;
    }
    let start = v;
    let mut cycle = Vec::new();
    loop {
        let i = pred[v];
        cycle.push(i);
        v = edges[i].tail;
        if v == start {
            break;
        }
    }
    cycle.reverse();
    Some(cycle)
}

/// Weights shifted by a potential so that all are nonnegative; cycle weights unchanged.
/// Requires every cycle to have positive weight.
pub fn shifted_weights(num_vertices: usize, edges: &[WeightedEdge]) -> Result<Vec<i64>> {
    if let Some(c) = nonpositive_cycle(num_vertices, edges) {
        return Err(Error::NotPositive(format!("cycle through edges {c:?} has weight <= 0")));
    }
    let mut dist = vec![0i64; num_vertices];
    for _ in 0..num_vertices {
        let mut changed = false;
        for e in edges {
            if dist[e.tail] + e.weight < dist[e.head] {
                dist[e.head] = dist[e.tail] + e.weight;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ok(edges.iter().map(|e| e.weight + dist[e.tail] - dist[e.head]).collect())
}

/// Exact cycle counts by weight `0..=max_weight`.
///
/// `closed_walks[w]` counts closed walks with a marked starting edge (edge sequences
/// `e_1 ... e_k` with `head(e_k) = tail(e_1)`); `necklaces[w]` counts them up to
/// rotation, by Burnside's lemma over the length. Growth rates are estimated from
/// `closed_walks`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCounts {
    pub closed_walks: Vec<BigUint>,
    pub necklaces: Vec<BigUint>,
}

fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

pub fn cycle_count_oracle(num_vertices: usize, edges: &[WeightedEdge], max_weight: i64) -> Result<CycleCounts> {
    if !(0..=MAX_COUNT_WEIGHT).contains(&max_weight) {
        return Err(Error::TooLarge(format!("weight bound {max_weight}")));
    }
    let w = shifted_weights(num_vertices, edges)?;
    let lmax = max_weight as usize;
    // zero-weight edges form an acyclic graph, so a walk of weight <= L has fewer than
    // (L + 1)·V edges
    let max_len = (lmax + 1) * num_vertices.max(1);
    // by_len[k][x] = closed walks of length k and weight x
    let mut by_len = vec![vec![BigUint::zero(); lmax + 1]; max_len + 1];
    for s in 0..num_vertices {
        // f[v][x]: walks from s to v of current length and weight x
        let mut f = vec![vec![BigUint::zero(); lmax + 1]; num_vertices];
        f[s][0] = BigUint::from(1u8);
        for k in 1..=max_len {
            let mut g = vec![vec![BigUint::zero(); lmax + 1]; num_vertices];
            let mut any = false;
            for (i, e) in edges.iter().enumerate() {
                let d = w[i] as usize;
                if d > lmax {
                    continue;
                }
                for x in 0..=lmax - d {
                    if !f[e.tail][x].is_zero() {
                        let add = f[e.tail][x].clone();
                        g[e.head][x + d] += add;
                        any = true;
                    }
                }
            }
            for x in 0..=lmax {
                if !g[s][x].is_zero() {
                    by_len[k][x] += &g[s][x];
                }
            }
            f = g;
            if !any {
                break;
            }
        }
    }
    let mut closed_walks = vec![BigUint::zero(); lmax + 1];
    let mut necklaces = vec![BigUint::zero(); lmax + 1];
    for k in 1..=max_len {
        for x in 0..=lmax {
            closed_walks[x] += &by_len[k][x];
            let mut sum = BigUint::zero();
            for d in (1..=k).filter(|d| k % d == 0) {
                let r = k / d;
                if x % r == 0 {
                    sum += &by_len[d][x / r] * BigUint::from(euler_phi(r));
                }
            }
            necklaces[x] += sum / BigUint::from(k);
        }
    }
    Ok(CycleCounts {
        closed_walks,
        necklaces,
    })
}

/// Growth estimate from closed-walk counts up to weight `L`:
/// `(C(L) / C(L - p))^{1/p}` with `C` cumulative and `p` the gcd of the weights that occur.
/// Returns `None` when fewer than two weights occur below `L`.
pub fn estimate_growth(counts: &CycleCounts) -> Option<f64> {
    let l = counts.closed_walks.len().checked_sub(1)?;
    let p = (1..=l)
        .filter(|&x| !counts.closed_walks[x].is_zero())
        .fold(0usize, |g, x| g.gcd(&x));
    if p == 0 || p > l {
        return None;
    }
    let cum = |upto: usize| -> BigUint { counts.closed_walks[..=upto].iter().sum() };
    let a = cum(l);
    let b = cum(l - p);
    if b.is_zero() {
        return None;
    }
    let ratio = big_ln(&a) - big_ln(&b);
    Some((ratio / p as f64).exp())
}

fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return x.to_f64().expect("finite").ln();
    }
    let shift = bits - 60;
    (x >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Spectral radius of the graph subdivided according to the weights, where a weight-k
/// edge becomes k unit steps. Equals the growth rate of the weight-graded cycle count.
///
/// Works per strongly connected component with power iteration on `T + I`, bracketing the
/// Perron root between Collatz–Wielandt bounds until they differ by less than `tol`.
pub fn subdivided_spectral_radius(num_vertices: usize, edges: &[WeightedEdge], tol: f64) -> Result<f64> {
    let w = shifted_weights(num_vertices, edges)?;
    // zero-weight closure K = (I - Z)^{-1}, Z nilpotent
    let mut order = Vec::new();
    {
        let mut indeg = vec![0usize; num_vertices];
        for (i, e) in edges.iter().enumerate() {
            if w[i] == 0 {
                indeg[e.head] += 1;
            }
        }
        let mut stack: Vec<usize> = (0..num_vertices).filter(|&v| indeg[v] == 0).collect();
        while let Some(v) = stack.pop() {
            order.push(v);
            for (i, e) in edges.iter().enumerate() {
                if w[i] == 0 && e.tail == v {
                    indeg[e.head] -= 1;
                    if indeg[e.head] == 0 {
                        stack.push(e.head);
                    }
                }
            }
        }
    }
    let mut reach = vec![vec![0f64; num_vertices]; num_vertices];
    for v in order.iter().rev() {
        let v = *v;
        reach[v][v] = 1.0;
        for (i, e) in edges.iter().enumerate() {
            if w[i] == 0 && e.tail == v {
                let row = reach[e.head].clone();
                for (a, b) in reach[v].iter_mut().zip(row) {
                    *a += b;
                }
            }
        }
    }
    // states: original vertices, then intermediate points of subdivided edges
    let mut trans: Vec<(usize, usize, f64)> = Vec::new();
    let mut states = num_vertices;
    for (i, e) in edges.iter().enumerate() {
        if w[i] == 0 {
            continue;
        }
        let k = w[i] as usize;
        if states + k > MAX_SUBDIVIDED_STATES {
            return Err(Error::TooLarge(format!("more than {MAX_SUBDIVIDED_STATES} subdivided states")));
        }
        let first = if k == 1 { e.head } else { states };
        for v in 0..num_vertices {
            if reach[v][e.tail] > 0.0 {
                trans.push((v, first, reach[v][e.tail]));
            }
        }
        for j in 0..k.saturating_sub(1) {
            let from = states + j;
            let to = if j + 2 == k { e.head } else { states + j + 1 };
            trans.push((from, to, 1.0));
        }
        states += k - 1;
    }
    let pairs: Vec<(usize, usize)> = trans.iter().map(|&(a, b, _)| (a, b)).collect();
    let sccs = strongly_connected_components(states, &pairs);
    let mut comp_of = vec![0usize; states];
    for (c, comp) in sccs.iter().enumerate() {
        for &v in comp {
            comp_of[v] = c;
        }
    }
    let mut best = 0f64;
    for (c, comp) in sccs.iter().enumerate() {
        let local: Vec<(usize, usize, f64)> = trans
            .iter()
            .filter(|&&(a, b, _)| comp_of[a] == c && comp_of[b] == c)
            .map(|&(a, b, x)| {
                (
                    comp.binary_search(&a).expect("member"),
                    comp.binary_search(&b).expect("member"),
                    x,
                )
            })
            .collect();
        if local.is_empty() {
            continue;
        }
        best = best.max(perron_root(comp.len(), &local, tol)?);
    }
    Ok(best)
}

fn perron_root(n: usize, trans: &[(usize, usize, f64)], tol: f64) -> Result<f64> {
    let mut x = vec![1f64; n];
    for _ in 0..5_000_000 {
        let mut y = x.clone();
        for &(a, b, m) in trans {
            y[a] += m * x[b];
        }
        let mut lo = f64::INFINITY;
        let mut hi = 0f64;
        for i in 0..n {
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        if hi - lo < tol {
            return Ok((lo + hi) / 2.0 - 1.0);
        }
        let norm = y.iter().cloned().fold(0f64, f64::max);
        x = y.into_iter().map(|v| v / norm).collect();
    }
    Err(Error::Internal("power iteration did not converge".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(tail: usize, head: usize, weight: i64) -> WeightedEdge {
        WeightedEdge { tail, head, weight }
    }

    #[test]
    fn single_loop_counts() {
        let c = cycle_count_oracle(1, &[e(0, 0, 3)], 9).unwrap();
        let got: Vec<u32> = c.necklaces.iter().map(|x| x.to_u32().unwrap()).collect();
        assert_eq!(got, vec![0, 0, 0, 1, 0, 0, 1, 0, 0, 1]);
    }

    #[test]
    fn disjoint_loops_add() {
        let a = cycle_count_oracle(1, &[e(0, 0, 2)], 12).unwrap();
        let b = cycle_count_oracle(1, &[e(0, 0, 3)], 12).unwrap();
        let ab = cycle_count_oracle(2, &[e(0, 0, 2), e(1, 1, 3)], 12).unwrap();
        for x in 0..=12 {
            assert_eq!(ab.necklaces[x], &a.necklaces[x] + &b.necklaces[x]);
            assert_eq!(ab.closed_walks[x], &a.closed_walks[x] + &b.closed_walks[x]);
        }
    }

    #[test]
    fn necklaces_of_two_loops() {
        // loops a, b of weight 1 at one vertex: binary necklaces
        let c = cycle_count_oracle(1, &[e(0, 0, 1), e(0, 0, 1)], 6).unwrap();
        let got: Vec<u32> = c.necklaces.iter().map(|x| x.to_u32().unwrap()).collect();
        assert_eq!(got, vec![0, 2, 3, 4, 6, 8, 14]);
        let est = estimate_growth(&cycle_count_oracle(1, &[e(0, 0, 1), e(0, 0, 1)], 40).unwrap()).unwrap();
        assert!((est - 2.0).abs() < 1e-6);
    }

    #[test]
    fn negative_edges_shifted() {
        // cycle 0 -> 1 -> 0 of weight 1 split as (-2, 3), plus a loop of weight 1 at 1
        let edges = [e(0, 1, -2), e(1, 0, 3), e(1, 1, 1)];
        let c = cycle_count_oracle(2, &edges, 30).unwrap();
        let est = estimate_growth(&c).unwrap();
        let rho = subdivided_spectral_radius(2, &edges, 1e-12).unwrap();
        // 1 - u - u = 0 → gr = 2
        assert!((rho - 2.0).abs() < 1e-9);
        assert!((est - 2.0).abs() < 0.02);
    }

    #[test]
    fn nonpositive_cycle_detected() {
        let edges = [e(0, 1, 1), e(1, 0, -1)];
        assert!(nonpositive_cycle(2, &edges).is_some());
        assert!(matches!(cycle_count_oracle(2, &edges, 5), Err(Error::NotPositive(_))));
        assert!(nonpositive_cycle(2, &[e(0, 1, 0), e(1, 0, 0)]).is_some());
        assert!(nonpositive_cycle(2, &[e(0, 1, 1), e(1, 0, 1)]).is_none());
    }
}
