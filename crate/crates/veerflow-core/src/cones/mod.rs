//! The cone of homology directions, its dual, layeredness and carried representatives.

pub mod simplex;

use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::graphs::{simple_cycles, LabeledDigraph};
use crate::homology::Cocycle;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use simplex::feasible_point;
use std::collections::BTreeMap;

/// Largest number of simple cycles enumerated when building generators.
pub const MAX_SIMPLE_CYCLES: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GeneratorSource {
    /// A simple cycle of Φ.
    PhiCycle,
    /// A simple cycle of Γ.
    GammaCycle,
}

/// A generator class with a witness cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Generator {
    pub class: Vec<i64>,
    pub source: GeneratorSource,
    /// Edge lists of the cycles in the witness family.
    pub witness_cycles: Vec<Vec<usize>>,
    /// Face chain of the witness, a 1-cycle of the dual complex.
    pub witness_chain: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeModel {
    pub betti: usize,
    pub generators: Vec<Generator>,
}

fn simple_cycle_data(g: &LabeledDigraph) -> Result<Vec<(u64, Vec<usize>)>> {
    if g.num_vertices > 64 {
        return Err(Error::TooLarge(format!("{} vertices", g.num_vertices)));
    }
    let cycles = simple_cycles(g, g.num_vertices, MAX_SIMPLE_CYCLES)?;
    Ok(cycles
        .into_iter()
        .map(|c| (c.iter().fold(0u64, |m, &i| m | 1 << g.edges[i].tail), c))
        .collect())
}

/// Generators from the support of `P_Φ` in `Z[H₁(Φ)]`: the simple multicycles of Φ.
/// Multicycles are sums of simple cycles, so one generator per distinct class of a simple
/// Φ-cycle suffices; each keeps its first cycle as witness.
pub fn cone_generators(an: &Analysis) -> Result<ConeModel> {
    let phi = an.phi();
    let cycles = simple_cycle_data(phi)?;
    let mut seen = BTreeMap::new();
    for (_, c) in cycles {
        let chain = phi.chain_of(&c);
        let class = an.model.class_of_chain(&chain)?;
        seen.entry(class.clone()).or_insert_with(|| Generator {
            class,
            source: GeneratorSource::PhiCycle,
            witness_cycles: vec![c],
            witness_chain: chain,
        });
    }
    Ok(ConeModel {
        betti: an.betti(),
        generators: seen.into_values().collect(),
    })
}

/// Generators from all simple Γ-cycles, one per cycle.
pub fn gamma_cycle_generators(an: &Analysis) -> Result<ConeModel> {
    let cycles = simple_cycle_data(&an.gamma)?;
    let generators = cycles
        .into_iter()
        .map(|(_, c)| {
            let chain = an.gamma.chain_of(&c);
            Ok(Generator {
                class: an.model.class_of_chain(&chain)?,
                source: GeneratorSource::GammaCycle,
                witness_cycles: vec![c],
                witness_chain: chain,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConeModel {
        betti: an.betti(),
        generators,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Interior,
    Boundary,
    Outside,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualConeTest {
    pub verdict: Verdict,
    pub pairings: Vec<i64>,
    /// A generator with negative pairing, when outside.
    pub violated: Option<usize>,
    /// Generators with zero pairing.
    pub annihilated: Vec<usize>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sign pattern of a class (given by coordinates) on the generators.
pub fn classify_coordinates(model: &ConeModel, coords: &[i64]) -> DualConeTest {
    let pairings: Vec<i64> = model.generators.iter().map(|g| dot(&g.class, coords)).collect();
    let violated = pairings.iter().position(|&p| p < 0);
    let annihilated: Vec<usize> = (0..pairings.len()).filter(|&i| pairings[i] == 0).collect();
    let verdict = if violated.is_some() {
        Verdict::Outside
    } else if annihilated.is_empty() {
        Verdict::Interior
    } else {
        Verdict::Boundary
    };
    DualConeTest {
        verdict,
        pairings,
        violated,
        annihilated,
    }
}

/// Where a cocycle lies relative to the dual of the cone of homology directions.
pub fn in_dual_cone(an: &Analysis, model: &ConeModel, cocycle: &Cocycle) -> Result<DualConeTest> {
    let checked = Cocycle::new(&an.model, cocycle.weights.clone())?;
    Ok(classify_coordinates(model, &an.coordinates(&checked)))
}

/// Generators annihilated by η; fails with `NotInCone` if η is outside the dual cone.
pub fn face_of(an: &Analysis, model: &ConeModel, eta: &Cocycle) -> Result<Vec<usize>> {
    let t = in_dual_cone(an, model, eta)?;
    if t.verdict == Verdict::Outside {
        return Err(Error::NotInCone);
    }
    Ok(t.annihilated)
}

/// Answer to the layeredness question, with a certificate either way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Layeredness {
    /// Coordinates of an integral class pairing to at least 1 with every generator.
    Layered { coords: Vec<i64>, cocycle: Cocycle },
    /// Nonnegative integer multipliers of the generators, not all zero, summing to 0.
    NotLayered { multipliers: Vec<i64> },
}

fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn integral_scaling(x: &[BigRational]) -> Vec<i64> {
    let l = x.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    x.iter()
        .map(|v| (v * BigRational::from_integer(l.clone())).to_integer().to_i64().expect("fits in i64"))
        .collect()
}

/// Decides whether some class is strictly positive on the cone, by two independent linear
/// programs: `G x >= 1` and the Gordan alternative `λ >= 0, Σλ = 1, λᵀG = 0`.
pub fn is_layered(an: &Analysis, model: &ConeModel) -> Result<Layeredness> {
    let b = model.betti;
    let gens = &model.generators;
    // variables p (b), r (b), s (m): G(p - r) - s = 1
    let m = gens.len();
    let a1: Vec<Vec<BigRational>> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut row: Vec<BigRational> = g.class.iter().map(|&c| q(c)).collect();
            row.extend(g.class.iter().map(|&c| q(-c)));
            row.extend((0..m).map(|k| if k == i { q(-1) } else { q(0) }));
            row
        })
        .collect();
    let primal = feasible_point(&a1, &vec![q(1); m], 2 * b + m);
    // λ >= 0: Σ_i λ_i g_i = 0 (b rows), Σ λ_i = 1
    let mut a2: Vec<Vec<BigRational>> = (0..b).map(|j| gens.iter().map(|g| q(g.class[j])).collect()).collect();
    a2.push(vec![q(1); m]);
    let mut rhs2 = vec![q(0); b];
    rhs2.push(q(1));
    let dual = feasible_point(&a2, &rhs2, m);
    match (primal, dual) {
        (Some(x), None) => {
            let xs: Vec<BigRational> = (0..b).map(|j| &x[j] - &x[b + j]).collect();
            let coords = integral_scaling(&xs);
            if gens.iter().any(|g| dot(&g.class, &coords) < 1) {
                return Err(Error::Internal("layering certificate does not pair positively".into()));
            }
            Ok(Layeredness::Layered {
                cocycle: an.cocycle(&coords),
                coords,
            })
        }
        (None, Some(lambda)) => {
            let multipliers = integral_scaling(&lambda);
            let sum: Vec<i64> = (0..b)
                .map(|j| gens.iter().zip(&multipliers).map(|(g, l)| g.class[j] * l).sum())
                .collect();
            if sum.iter().any(|&s| s != 0) || multipliers.iter().all(|&l| l == 0) {
                return Err(Error::Internal("obstruction does not sum to zero".into()));
            }
            Ok(Layeredness::NotLayered { multipliers })
        }
        _ => Err(Error::Internal("layering LP and its alternative disagree".into())),
    }
}

/// Nonnegative rational multipliers writing `class` as a combination of generators.
pub fn cone_membership(model: &ConeModel, class: &[i64]) -> Option<Vec<BigRational>> {
    let a: Vec<Vec<BigRational>> = (0..model.betti)
        .map(|j| model.generators.iter().map(|g| q(g.class[j])).collect())
        .collect();
    let rhs: Vec<BigRational> = class.iter().map(|&c| q(c)).collect();
    feasible_point(&a, &rhs, model.generators.len())
}

/// A carried (nonnegative) representative of `m · coords` with the least positive integer
/// `m` that makes the chosen LP vertex integral.
pub fn carried_representative(an: &Analysis, coords: &[i64]) -> Result<Option<(i64, Cocycle)>> {
    if coords.len() != an.betti() {
        return Err(Error::DimensionMismatch(format!("{} coordinates for b = {}", coords.len(), an.betti())));
    }
    let nf = an.model.num_faces;
    let ns = an.model.d2.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<BigRational>> = (0..ns).map(|s| (0..nf).map(|f| q(an.model.d2[f][s])).collect()).collect();
    let mut rhs = vec![q(0); ns];
    for (j, z) in an.model.section.iter().enumerate() {
        a.push(z.iter().map(|&x| q(x)).collect());
        rhs.push(q(coords[j]));
    }
    let Some(w) = feasible_point(&a, &rhs, nf) else {
        return Ok(None);
    };
    let l = w.iter().fold(BigInt::one(), |l, v| l.lcm(v.denom()));
    let mult = l.to_i64().ok_or_else(|| Error::TooLarge("representative denominator".into()))?;
    let weights = integral_scaling(&w);
    let cocycle = Cocycle::new(&an.model, weights)?;
    let scaled: Vec<i64> = coords.iter().map(|c| c * mult).collect();
    if an.coordinates(&cocycle) != scaled || !cocycle.is_nonnegative() {
        return Err(Error::Internal("carried representative has the wrong class".into()));
    }
    Ok(Some((mult, cocycle)))
}

/// Whether a vector of rationals is entrywise nonnegative.
pub fn is_nonnegative(x: &[BigRational]) -> bool {
    x.iter().all(|v| !v.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{infer_veers, parse_taut_isosig};

    fn analysis(sig: &str) -> Analysis {
        Analysis::new(infer_veers(&parse_taut_isosig(sig).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn verdicts_from_sign_patterns() {
        let model = ConeModel {
            betti: 2,
            generators: [[1, 0], [1, 1]]
                .iter()
                .map(|c| Generator {
                    class: c.to_vec(),
                    source: GeneratorSource::PhiCycle,
                    witness_cycles: vec![],
                    witness_chain: vec![],
                })
                .collect(),
        };
        assert_eq!(classify_coordinates(&model, &[1, 0]).verdict, Verdict::Interior);
        let b = classify_coordinates(&model, &[1, -1]);
        assert_eq!((b.verdict, b.annihilated), (Verdict::Boundary, vec![1]));
        let o = classify_coordinates(&model, &[-1, 0]);
        assert_eq!((o.verdict, o.violated), (Verdict::Outside, Some(0)));
        assert!(cone_membership(&model, &[3, 1]).is_some());
        assert!(cone_membership(&model, &[0, 1]).is_none());
    }

    #[test]
    fn layered_fixture_has_positive_certificate() {
        let an = analysis("cPcbbbiht_12");
        let model = cone_generators(&an).unwrap();
        match is_layered(&an, &model).unwrap() {
            Layeredness::Layered { coords, cocycle } => {
                assert_eq!(an.coordinates(&cocycle), coords);
                assert_eq!(in_dual_cone(&an, &model, &cocycle).unwrap().verdict, Verdict::Interior);
            }
            other => panic!("{other:?}"),
        }
        let (mult, rep) = carried_representative(&an, &[1]).unwrap().unwrap();
        assert!(rep.is_nonnegative());
        assert_eq!(an.coordinates(&rep), vec![mult]);
    }

    #[test]
    fn non_layered_fixture_has_obstruction() {
        let an = analysis("fLAMcaccdeejsnaxk_20010");
        let model = cone_generators(&an).unwrap();
        assert!(matches!(is_layered(&an, &model).unwrap(), Layeredness::NotLayered { .. }));
        let outside = an.cocycle(&[1]);
        let inside = an.cocycle(&[-1]);
        let verdicts = [&outside, &inside].map(|c| in_dual_cone(&an, &model, c).unwrap().verdict);
        assert!(!verdicts.contains(&Verdict::Interior));
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        let an = analysis("cPcbbbiht_12");
        assert!(matches!(carried_representative(&an, &[1, 0]), Err(Error::DimensionMismatch(_))));
    }
}
