//! Specializations, growth rates, entropy scans and accumulation experiments.

pub mod oracle;
pub mod roots;
pub mod univariate;

use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::homology::Cocycle;
use crate::polyring::IntPoly;
use crate::restriction::{perron_of_edges, recurrent_components, restricted_flow_graph, RecurrentComponent};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use oracle::{nonpositive_cycle, WeightedEdge};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Default width of the final root bracket.
pub const ROOT_TOLERANCE: f64 = 1e-12;

/// A one-variable integer Laurent polynomial `Σ a_k u^k`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Specialization {
    terms: BTreeMap<i64, BigInt>,
}

impl Specialization {
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut s = Specialization::default();
        for (k, c) in terms {
            s.add(k, c);
        }
        s
    }

    fn add(&mut self, k: i64, c: BigInt) {
        let slot = self.terms.entry(k).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    /// `P^ξ(u) = Σ a_g u^{g · coords}`.
    pub fn of(p: &IntPoly, coords: &[i64]) -> Self {
        Specialization::from_terms(p.terms().map(|(e, c)| (e.dot(coords), c.clone())))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Substitutes `u^n` for `u`.
    pub fn power(&self, n: i64) -> Self {
        Specialization::from_terms(self.terms.iter().map(|(&k, c)| (k * n, c.clone())))
    }

    /// Value at `u = 1`.
    pub fn value_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Ascending dense coefficients after multiplying by `u^{-min exponent}`.
    pub fn dense(&self) -> Vec<BigInt> {
        let Some(&lo) = self.terms.keys().next() else {
            return Vec::new();
        };
        let hi = *self.terms.keys().next_back().expect("nonempty");
        let mut out = vec![BigInt::zero(); (hi - lo) as usize + 1];
        for (&k, c) in &self.terms {
            out[(k - lo) as usize] = c.clone();
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.terms
                .iter()
                .map(|(k, c)| serde_json::json!({"coeff": c.to_string(), "exponent": k}))
                .collect(),
        )
    }
}

impl fmt::Display for Specialization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&k, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "u")?,
                (1, false) => write!(f, "{mag}*u")?,
                (_, true) => write!(f, "u^{k}")?,
                (_, false) => write!(f, "{mag}*u^{k}")?,
            }
        }
        Ok(())
    }
}

/// Smallest root of `s` in `(0, 1]`, to within `tol`.
pub fn smallest_positive_root(s: &Specialization, tol: f64) -> Option<f64> {
    roots::smallest_root_in_unit_interval(&s.dense(), tol).map(|b| b.midpoint())
}

/// `1 / smallest root in (0, 1]`, or 1 when there is none.
pub fn rate_of(s: &Specialization) -> f64 {
    smallest_positive_root(s, ROOT_TOLERANCE).map_or(1.0, |r| 1.0 / r)
}

/// Growth data for one class on Φ or on a restricted flow graph.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub rate: f64,
    pub root: Option<f64>,
    pub specialization: Specialization,
    pub components: Vec<RecurrentComponent>,
    pub component_rates: Vec<f64>,
}

impl GrowthReport {
    pub fn entropy(&self) -> f64 {
        self.rate.ln()
    }

    pub fn max_component_rate(&self) -> f64 {
        self.component_rates.iter().cloned().fold(1.0, f64::max)
    }
}

/// Edges of Φ, or of Φ|η when η is given.
pub fn working_edges(an: &Analysis, eta: Option<&Cocycle>) -> Result<(Vec<usize>, Vec<RecurrentComponent>)> {
    match eta {
        Some(eta) => {
            let r = restricted_flow_graph(an.phi(), eta)?;
            Ok((r.edges, r.components))
        }
        None => {
            let all: Vec<usize> = (0..an.phi().edges.len()).collect();
            let comps = recurrent_components(an.phi(), &all);
            Ok((all, comps))
        }
    }
}

/// Φ-edges with their weights under the class with the given coordinates.
pub fn weighted_edges(an: &Analysis, edges: &[usize], coords: &[i64]) -> Vec<WeightedEdge> {
    edges
        .iter()
        .map(|&i| {
            let e = &an.phi().edges[i];
            let class = an.model.project(&e.chain);
            WeightedEdge {
                tail: e.tail,
                head: e.head,
                weight: class.iter().zip(coords).map(|(a, b)| a * b).sum(),
            }
        })
        .collect()
}

/// Fails with `NotPositive` if some cycle on `edges` has weight `<= 0` under `coords`.
pub fn check_positive(an: &Analysis, edges: &[usize], coords: &[i64]) -> Result<()> {
    let weighted = weighted_edges(an, edges, coords);
    match nonpositive_cycle(an.phi().num_vertices, &weighted) {
        Some(c) => {
            let witness: Vec<usize> = c.iter().map(|&i| edges[i]).collect();
            Err(Error::NotPositive(format!("Φ-cycle through edges {witness:?} has weight <= 0")))
        }
        None => Ok(()),
    }
}

/// Growth rate of ξ on Φ (or on Φ|η): the reciprocal of the smallest positive root of
/// the specialized Perron polynomial, with per-component rates.
pub fn growth_rate(an: &Analysis, eta: Option<&Cocycle>, xi: &Cocycle) -> Result<GrowthReport> {
    let coords = an.coordinates(xi);
    growth_rate_at(an, eta, &coords)
}

/// As [`growth_rate`], with ξ given by its coordinates in `Z^b`.
pub fn growth_rate_at(an: &Analysis, eta: Option<&Cocycle>, coords: &[i64]) -> Result<GrowthReport> {
    if coords.len() != an.betti() {
        return Err(Error::DimensionMismatch(format!("{} coordinates for b = {}", coords.len(), an.betti())));
    }
    let (edges, components) = working_edges(an, eta)?;
    check_positive(an, &edges, coords)?;
    let p = if eta.is_some() {
        perron_of_edges(an.phi(), &an.model, &edges)?
    } else {
        an.perron_phi.clone()
    };
    let specialization = Specialization::of(&p, coords);
    let root = smallest_positive_root(&specialization, ROOT_TOLERANCE);
    let component_rates = components
        .iter()
        .map(|c| Ok(rate_of(&Specialization::of(&perron_of_edges(an.phi(), &an.model, &c.edges)?, coords))))
        .collect::<Result<Vec<f64>>>()?;
    Ok(GrowthReport {
        rate: root.map_or(1.0, |r| 1.0 / r),
        root,
        specialization,
        components,
        component_rates,
    })
}

/// One row of an entropy scan.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub index: i64,
    pub coords: Vec<i64>,
    pub rate: f64,
    pub entropy: f64,
}

/// An entropy scan with its convexity check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyScan {
    pub rows: Vec<ScanRow>,
    /// Largest `ent(mid) - (ent(a) + ent(b)) / 2` over sampled symmetric triples.
    pub max_convexity_defect: f64,
    pub convex: bool,
}

/// Tolerance of the midpoint convexity check.
pub const CONVEXITY_TOLERANCE: f64 = 1e-9;

/// Entropy along the segment from ξ₁ to ξ₂: row `t` is the class `(N - t)ξ₁ + tξ₂`
/// and its entropy is rescaled by `N` to the point `((N - t)ξ₁ + tξ₂) / N`.
pub fn entropy_scan_segment(an: &Analysis, eta: Option<&Cocycle>, a: &[i64], b: &[i64], samples: i64) -> Result<EntropyScan> {
    if samples < 1 {
        return Err(Error::DimensionMismatch("at least one subdivision step is required".into()));
    }
    let rows = (0..=samples)
        .map(|t| {
            let coords: Vec<i64> = a.iter().zip(b).map(|(x, y)| (samples - t) * x + t * y).collect();
            let g = growth_rate_at(an, eta, &coords)?;
            Ok(ScanRow {
                index: t,
                entropy: g.entropy() * samples as f64,
                rate: g.rate,
                coords,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(with_convexity(rows))
}

/// Entropy at the multiples `nξ`, `n = 1..=samples`; it scales as `1/n`.
pub fn entropy_scan_ray(an: &Analysis, eta: Option<&Cocycle>, xi: &[i64], samples: i64) -> Result<EntropyScan> {
    let rows = (1..=samples)
        .map(|n| {
            let coords: Vec<i64> = xi.iter().map(|x| n * x).collect();
            let g = growth_rate_at(an, eta, &coords)?;
            Ok(ScanRow {
                index: n,
                entropy: g.entropy(),
                rate: g.rate,
                coords,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyScan {
        rows,
        max_convexity_defect: 0.0,
        convex: true,
    })
}

fn with_convexity(rows: Vec<ScanRow>) -> EntropyScan {
    let mut defect = f64::NEG_INFINITY;
    for m in 0..rows.len() {
        for k in 1..=m.min(rows.len() - 1 - m) {
            let d = rows[m].entropy - (rows[m - k].entropy + rows[m + k].entropy) / 2.0;
            defect = defect.max(d);
        }
    }
    let defect = if defect.is_finite() { defect } else { 0.0 };
    EntropyScan {
        rows,
        max_convexity_defect: defect,
        convex: defect <= CONVEXITY_TOLERANCE,
    }
}

/// Rates `gr(α + iη)` on Φ against the limit `gr(α; Φ|η)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Accumulation {
    pub rates: Vec<f64>,
    pub limit: f64,
    /// Least `i₀` with `rates[i] >= limit` for all `i >= i₀`, if any.
    pub monotone_from: Option<usize>,
    pub final_gap: f64,
}

/// Slack allowed when comparing `rates[i] >= limit`, covering root-refinement error.
pub const ACCUMULATION_SLACK: f64 = 1e-9;

pub fn accumulation_experiment(an: &Analysis, alpha: &Cocycle, eta: &Cocycle, i_max: usize) -> Result<Accumulation> {
    let a = an.coordinates(alpha);
    let h = an.coordinates(eta);
    let limit = growth_rate_at(an, Some(eta), &a)?.rate;
    let p = &an.perron_phi;
    check_positive(an, &(0..an.phi().edges.len()).collect::<Vec<_>>(), &a)?;
    let rates: Vec<f64> = (0..=i_max)
        .map(|i| {
            let coords: Vec<i64> = a.iter().zip(&h).map(|(x, y)| x + i as i64 * y).collect();
            rate_of(&Specialization::of(p, &coords))
        })
        .collect();
    let mut monotone_from = None;
    for i in (0..rates.len()).rev() {
        if rates[i] + ACCUMULATION_SLACK >= limit {
            monotone_from = Some(i);
        } else {
            break;
        }
    }
    Ok(Accumulation {
        final_gap: (rates[i_max] - limit).abs(),
        rates,
        limit,
        monotone_from,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(t: &[(i64, i64)]) -> Specialization {
        Specialization::from_terms(t.iter().map(|&(k, c)| (k, BigInt::from(c))))
    }

    #[test]
    fn trivial_roots() {
        assert_eq!(smallest_positive_root(&sp(&[(0, 1), (1, -1)]), 1e-12), Some(1.0));
        let r = smallest_positive_root(&sp(&[(0, 1), (1, -2)]), 1e-12).unwrap();
        assert!((r - 0.5).abs() < 1e-12);
        assert_eq!(rate_of(&sp(&[(0, 1)])), 1.0);
        assert_eq!(rate_of(&sp(&[(0, 1), (3, -1)])), 1.0);
    }

    #[test]
    fn power_substitution() {
        let s = sp(&[(0, 1), (1, -3), (2, 1)]);
        let r1 = rate_of(&s);
        let r3 = rate_of(&s.power(3));
        assert!((r3 - r1.powf(1.0 / 3.0)).abs() < 1e-9);
        assert_eq!(s.to_string(), "1 - 3*u + u^2");
    }
}
