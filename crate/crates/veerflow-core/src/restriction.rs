//! Cutting the flow graph along a carried class η: the restricted flow graph Φ|η and the
//! two descriptions of its Perron polynomial.

use crate::analysis::Analysis;
use crate::error::{Error, Result};
use crate::graphs::{strongly_connected_components, LabeledDigraph};
use crate::homology::{pair, Cocycle, HomologyModel};
use crate::polyring::IntPoly;
use crate::veering_poly::{gauged_classes, perron_from_classes, ClassEdge};
use serde::Serialize;

/// Pairing of η with the chain of every edge. η must have nonnegative face weights.
pub fn edge_weights(graph: &LabeledDigraph, eta: &Cocycle) -> Result<Vec<i64>> {
    if let Some((face, &weight)) = eta.weights.iter().enumerate().find(|(_, &w)| w < 0) {
        return Err(Error::NegativeWeight { face, weight });
    }
    Ok(graph.edges.iter().map(|e| pair(eta, &e.chain)).collect())
}

/// A strongly connected component containing at least one cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrentComponent {
    pub vertices: Vec<usize>,
    /// Indices of the edges inside the component.
    pub edges: Vec<usize>,
    /// True when the component is a single directed cycle.
    pub cyclic: bool,
}

/// Recurrent components of the subgraph formed by `keep`.
pub fn recurrent_components(graph: &LabeledDigraph, keep: &[usize]) -> Vec<RecurrentComponent> {
    let pairs: Vec<(usize, usize)> = keep.iter().map(|&i| (graph.edges[i].tail, graph.edges[i].head)).collect();
    let sccs = strongly_connected_components(graph.num_vertices, &pairs);
    let mut comp_of = vec![usize::MAX; graph.num_vertices];
    for (c, comp) in sccs.iter().enumerate() {
        for &v in comp {
            comp_of[v] = c;
        }
    }
    let mut inner: Vec<Vec<usize>> = vec![Vec::new(); sccs.len()];
    for &i in keep {
        let e = &graph.edges[i];
        if comp_of[e.tail] == comp_of[e.head] {
            inner[comp_of[e.tail]].push(i);
        }
    }
    sccs.into_iter()
        .zip(inner)
        .filter(|(_, edges)| !edges.is_empty())
        .map(|(vertices, mut edges)| {
            edges.sort();
            RecurrentComponent {
                cyclic: edges.len() == vertices.len(),
                vertices,
                edges,
            }
        })
        .collect()
}

/// Φ|η: the zero-weight edges lying on cycles of zero-weight edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestrictedGraph {
    pub weights: Vec<i64>,
    pub edges: Vec<usize>,
    pub components: Vec<RecurrentComponent>,
}

impl RestrictedGraph {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn has_noncyclic_component(&self) -> bool {
        self.components.iter().any(|c| !c.cyclic)
    }
}

pub fn restricted_flow_graph(graph: &LabeledDigraph, eta: &Cocycle) -> Result<RestrictedGraph> {
    let weights = edge_weights(graph, eta)?;
    let zero: Vec<usize> = (0..graph.edges.len()).filter(|&i| weights[i] == 0).collect();
    let components = recurrent_components(graph, &zero);
    let mut edges: Vec<usize> = components.iter().flat_map(|c| c.edges.iter().copied()).collect();
    edges.sort();
    Ok(RestrictedGraph {
        weights,
        edges,
        components,
    })
}

/// Perron polynomial (constant term 1, not normalized) of the subgraph on `edges`,
/// with tree-gauged labels from the full graph.
pub fn perron_of_edges(graph: &LabeledDigraph, model: &HomologyModel, edges: &[usize]) -> Result<IntPoly> {
    let classes = gauged_classes(graph, model);
    let sub: Vec<ClassEdge> = edges.iter().map(|&i| classes[i].clone()).collect();
    perron_from_classes(graph.num_vertices, model.betti, &sub)
}

/// Both descriptions of the restricted polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedPolynomials {
    pub restricted: RestrictedGraph,
    /// Perron polynomial of Φ|η, unit-normalized.
    pub perron_restricted: IntPoly,
    /// V_τ with every term `g` such that `η(g) != 0` deleted, unit-normalized.
    pub deleted: IntPoly,
    /// Perron polynomials of the components, unit-normalized.
    pub component_polys: Vec<IntPoly>,
    /// Whether the product of the component polynomials equals the restricted polynomial.
    pub product_matches: bool,
}

/// Deletes from `p` every term whose exponent pairs nontrivially with `coords`.
pub fn delete_terms(p: &IntPoly, coords: &[i64]) -> IntPoly {
    p.filter_terms(|e| e.dot(coords) == 0)
}

/// Computes Φ|η, its Perron polynomial and the term deletion of V_τ, and checks that they
/// agree.
pub fn restricted_polynomials(an: &Analysis, eta: &Cocycle) -> Result<RestrictedPolynomials> {
    let phi = an.phi();
    let restricted = restricted_flow_graph(phi, eta)?;
    let raw = perron_of_edges(phi, &an.model, &restricted.edges)?;
    let coords = an.coordinates(eta);
    let deleted = delete_terms(&an.perron_phi, &coords).normalized();
    let perron_restricted = raw.normalized();
    if perron_restricted != deleted {
        return Err(Error::Internal(format!(
            "restricted Perron polynomial {perron_restricted} differs from term deletion {deleted}"
        )));
    }
    let raw_components = restricted
        .components
        .iter()
        .map(|c| perron_of_edges(phi, &an.model, &c.edges))
        .collect::<Result<Vec<_>>>()?;
    let product = raw_components
        .iter()
        .fold(IntPoly::one_in(an.betti()), |acc, p| &acc * p);
    let product_matches = product == raw;
    if !product_matches {
        return Err(Error::Internal("restricted polynomial is not the product over components".into()));
    }
    Ok(RestrictedPolynomials {
        restricted,
        perron_restricted,
        deleted,
        component_polys: raw_components.iter().map(|p| p.normalized()).collect(),
        product_matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::LabeledEdge;
    use crate::ingest::{infer_veers, parse_taut_isosig};
    use num_bigint::BigInt;

    fn analysis(sig: &str) -> Analysis {
        Analysis::new(infer_veers(&parse_taut_isosig(sig).unwrap()).unwrap()).unwrap()
    }

    fn digraph(n: usize, edges: &[(usize, usize)]) -> LabeledDigraph {
        LabeledDigraph {
            num_vertices: n,
            edges: edges.iter().map(|&(tail, head)| LabeledEdge { tail, head, chain: vec![] }).collect(),
            anchors: (0..n).collect(),
        }
    }

    #[test]
    fn components_distinguish_cycles_from_richer_pieces() {
        // a 2-cycle, a vertex with two loops, and a bridge between them
        let g = digraph(4, &[(0, 1), (1, 0), (1, 2), (2, 2), (2, 2), (3, 3)]);
        let all: Vec<usize> = (0..6).collect();
        let comps = recurrent_components(&g, &all);
        assert_eq!(comps.len(), 3);
        let by_vertex = |v: usize| comps.iter().find(|c| c.vertices.contains(&v)).unwrap();
        assert!(by_vertex(0).cyclic);
        assert!(!by_vertex(2).cyclic);
        assert!(by_vertex(3).cyclic);
        assert!(recurrent_components(&g, &[2]).is_empty());
    }

    #[test]
    fn term_deletion() {
        let p = IntPoly::from_terms(2, [(vec![0, 0], 1), (vec![1, 0], -2), (vec![0, 1], 3), (vec![1, 1], 1)]
            .into_iter()
            .map(|(e, c)| (e, BigInt::from(c))));
        let kept = delete_terms(&p, &[0, 1]);
        assert_eq!(kept.num_terms(), 2);
        assert_eq!(delete_terms(&p, &[0, 0]), p);
    }

    #[test]
    fn zero_class_keeps_the_recurrent_part() {
        let an = analysis("cPcbbbiht_12");
        let zero = Cocycle::zero(&an.model);
        let r = restricted_flow_graph(an.phi(), &zero).unwrap();
        assert_eq!(r.edges.len(), an.phi().edges.len());
        assert!(r.has_noncyclic_component());
        let polys = restricted_polynomials(&an, &zero).unwrap();
        assert_eq!(polys.perron_restricted, an.veering_polynomial());
    }

    #[test]
    fn negative_weights_are_rejected() {
        let an = analysis("cPcbbbiht_12");
        let mut eta = Cocycle::zero(&an.model);
        eta.weights[0] = -1;
        assert!(matches!(edge_weights(an.phi(), &eta), Err(Error::NegativeWeight { face: 0, weight: -1 })));
    }
}
