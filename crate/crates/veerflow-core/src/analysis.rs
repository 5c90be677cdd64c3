//! Everything derived from one veering triangulation, built once and shared.

use crate::error::Result;
use crate::graphs::{classify_turns, dual_graph, flow_graph, sectors, FlowGraph, LabeledDigraph, Sector, TurnTable};
use crate::homology::{build_homology, Cocycle, HomologyModel};
use crate::ingest::VeeringTriangulation;
use crate::polyring::IntPoly;
use crate::veering_poly::perron;

/// A validated triangulation with its graphs, homology and Perron polynomial of Φ.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub vt: VeeringTriangulation,
    pub gamma: LabeledDigraph,
    pub sectors: Vec<Sector>,
    pub turns: TurnTable,
    pub flow: FlowGraph,
    pub model: HomologyModel,
    /// `det(I - A)` of Φ before unit normalization; its constant term is 1.
    pub perron_phi: IntPoly,
}

impl Analysis {
    pub fn new(vt: VeeringTriangulation) -> Result<Self> {
        let gamma = dual_graph(&vt);
        let sectors = sectors(&vt);
        let turns = classify_turns(&vt)?;
        let flow = flow_graph(&vt)?;
        let model = build_homology(&vt)?;
        let perron_phi = perron(&flow.graph, &model)?;
        Ok(Analysis {
            vt,
            gamma,
            sectors,
            turns,
            flow,
            model,
            perron_phi,
        })
    }

    pub fn phi(&self) -> &LabeledDigraph {
        &self.flow.graph
    }

    pub fn betti(&self) -> usize {
        self.model.betti
    }

    /// The veering polynomial, unit-normalized.
    pub fn veering_polynomial(&self) -> IntPoly {
        self.perron_phi.normalized()
    }

    /// Coordinates of a cocycle in `Z^b`; a class `g` pairs to `g · coords`.
    pub fn coordinates(&self, cocycle: &Cocycle) -> Vec<i64> {
        self.model.cocycle_coordinates(cocycle)
    }

    pub fn cocycle(&self, coords: &[i64]) -> Cocycle {
        self.model.cocycle_from_coordinates(coords)
    }
}
