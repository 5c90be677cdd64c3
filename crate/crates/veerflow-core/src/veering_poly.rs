//! Perron polynomials of labeled digraphs, the clique-polynomial oracle and the
//! veering polynomial.

use crate::error::{Error, Result};
use crate::graphs::{flow_graph, simple_cycles, LabeledDigraph};
use crate::homology::{build_homology, HomologyModel};
use crate::ingest::VeeringTriangulation;
use crate::polyring::{det, Exponent, IntPoly};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::HashMap;

/// Largest vertex count accepted by the clique oracle.
pub const CLIQUE_MAX_VERTICES: usize = 20;
/// Largest number of simple cycles the clique oracle enumerates.
pub const CLIQUE_MAX_CYCLES: usize = 200_000;

/// An edge given directly by its endpoints and its class in `Z^b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEdge {
    pub tail: usize,
    pub head: usize,
    pub class: Vec<i64>,
}

/// `det(I - A)` where `A[a][b]` sums the monomials of the edges from `a` to `b`.
pub fn perron_from_classes(num_vertices: usize, nvars: usize, edges: &[ClassEdge]) -> Result<IntPoly> {
    let mut m = vec![vec![IntPoly::zero_in(nvars); num_vertices]; num_vertices];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = IntPoly::one_in(nvars);
    }
    for e in edges {
        let entry = &mut m[e.tail][e.head];
        entry.add_term(Exponent(e.class.clone()), -BigInt::one());
    }
    det(&m)
}

/// Edge labels in `Z^b`: the cocycle basis evaluated on each edge chain.
///
/// The basis vanishes on a spanning tree of Γ, so this is the tree-gauged label: every
/// chain is closed up by tree paths from and to the base point, which leaves the classes
/// of cycles unchanged.
pub fn gauged_classes(graph: &LabeledDigraph, model: &HomologyModel) -> Vec<ClassEdge> {
    graph
        .edges
        .iter()
        .map(|e| ClassEdge {
            tail: e.tail,
            head: e.head,
            class: model.project(&e.chain),
        })
        .collect()
}

/// Perron polynomial `det(I - A)` with entries in `Z[Z^b]`.
pub fn perron(graph: &LabeledDigraph, model: &HomologyModel) -> Result<IntPoly> {
    perron_from_classes(graph.num_vertices, model.betti, &gauged_classes(graph, model))
}

/// `1 + Σ (-1)^|C| x^{class C}` over nonempty families `C` of pairwise vertex-disjoint
/// simple cycles, given each simple cycle's vertex mask and class.
pub fn clique_from_cycles(num_vertices: usize, nvars: usize, cycles: &[(u64, Vec<i64>)]) -> IntPoly {
    let mut by_min: Vec<Vec<usize>> = vec![Vec::new(); num_vertices];
    for (i, (mask, _)) in cycles.iter().enumerate() {
        by_min[mask.trailing_zeros() as usize].push(i);
    }
    let mut memo: HashMap<u64, IntPoly> = HashMap::new();
    fn families(
        avail: u64,
        nvars: usize,
        cycles: &[(u64, Vec<i64>)],
        by_min: &[Vec<usize>],
        memo: &mut HashMap<u64, IntPoly>,
    ) -> IntPoly {
        if avail == 0 {
            return IntPoly::one_in(nvars);
        }
        if let Some(p) = memo.get(&avail) {
            return p.clone();
        }
        let v = avail.trailing_zeros() as usize;
        let mut total = families(avail & !(1u64 << v), nvars, cycles, by_min, memo);
        for &i in &by_min[v] {
            let (mask, class) = &cycles[i];
            if mask & !avail == 0 {
                let rest = families(avail & !mask, nvars, cycles, by_min, memo);
                let term = IntPoly::monomial(Exponent(class.clone()), -BigInt::one());
                total = &total + &(&term * &rest);
            }
        }
        memo.insert(avail, total.clone());
        total
    }
    let all = if num_vertices == 64 { u64::MAX } else { (1u64 << num_vertices) - 1 };
    families(all, nvars, cycles, &by_min, &mut memo)
}

fn cycle_mask(graph: &LabeledDigraph, cycle: &[usize]) -> u64 {
    cycle.iter().fold(0u64, |m, &i| m | 1u64 << graph.edges[i].tail)
}

/// Clique polynomial of a graph whose edges carry classes directly.
pub fn clique_oracle_classes(num_vertices: usize, nvars: usize, edges: &[ClassEdge]) -> Result<IntPoly> {
    if num_vertices > CLIQUE_MAX_VERTICES {
        return Err(Error::TooLarge(format!("{num_vertices} vertices")));
    }
    let g = LabeledDigraph {
        num_vertices,
        edges: edges
            .iter()
            .map(|e| crate::graphs::LabeledEdge {
                tail: e.tail,
                head: e.head,
                chain: Vec::new(),
            })
            .collect(),
        anchors: vec![0; num_vertices],
    };
    let cycles = simple_cycles(&g, num_vertices, CLIQUE_MAX_CYCLES)?;
    let data: Vec<(u64, Vec<i64>)> = cycles
        .iter()
        .map(|c| {
            let mut class = vec![0i64; nvars];
            for &i in c {
                for (a, b) in class.iter_mut().zip(&edges[i].class) {
                    *a += b;
                }
            }
            (cycle_mask(&g, c), class)
        })
        .collect();
    Ok(clique_from_cycles(num_vertices, nvars, &data))
}

/// Clique polynomial of a chain-labeled graph: each simple cycle's chain is summed and its
/// homology class taken directly, without any gauge.
pub fn clique_oracle(graph: &LabeledDigraph, model: &HomologyModel) -> Result<IntPoly> {
    if graph.num_vertices > CLIQUE_MAX_VERTICES {
        return Err(Error::TooLarge(format!("{} vertices", graph.num_vertices)));
    }
    let cycles = simple_cycles(graph, graph.num_vertices, CLIQUE_MAX_CYCLES)?;
    let data: Vec<(u64, Vec<i64>)> = cycles
        .iter()
        .map(|c| Ok((cycle_mask(graph, c), model.class_of_chain(&graph.chain_of(c))?)))
        .collect::<Result<_>>()?;
    Ok(clique_from_cycles(graph.num_vertices, model.betti, &data))
}

/// The veering polynomial: Perron polynomial of Φ in `Z[H₁/torsion]`, unit-normalized.
pub fn veering_polynomial(vt: &VeeringTriangulation) -> Result<IntPoly> {
    let model = build_homology(vt)?;
    let phi = flow_graph(vt)?;
    Ok(perron(&phi.graph, &model)?.normalized())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(tail: usize, head: usize, class: &[i64]) -> ClassEdge {
        ClassEdge {
            tail,
            head,
            class: class.to_vec(),
        }
    }

    fn poly(terms: &[(&[i64], i64)]) -> IntPoly {
        IntPoly::from_terms(2, terms.iter().map(|(x, c)| (x.to_vec(), BigInt::from(*c))))
    }

    #[test]
    fn acyclic_graph_gives_one() {
        let edges = [e(0, 1, &[1, 0]), e(1, 2, &[0, 1])];
        assert_eq!(perron_from_classes(3, 2, &edges).unwrap(), IntPoly::one_in(2));
    }

    #[test]
    fn two_disjoint_loops() {
        let edges = [e(0, 0, &[1, 0]), e(1, 1, &[0, 1])];
        let want = poly(&[(&[0, 0], 1), (&[1, 0], -1), (&[0, 1], -1), (&[1, 1], 1)]);
        assert_eq!(perron_from_classes(2, 2, &edges).unwrap(), want);
        assert_eq!(clique_oracle_classes(2, 2, &edges).unwrap(), want);
    }

    #[test]
    fn loops_sharing_a_vertex() {
        let edges = [e(0, 0, &[1, 0]), e(0, 0, &[0, 1])];
        let want = poly(&[(&[0, 0], 1), (&[1, 0], -1), (&[0, 1], -1)]);
        assert_eq!(perron_from_classes(1, 2, &edges).unwrap(), want);
        assert_eq!(clique_oracle_classes(1, 2, &edges).unwrap(), want);
    }
}
