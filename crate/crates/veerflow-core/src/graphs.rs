//! The dual graph Γ, sectors of the stable branched surface, the turn table and the
//! flow graph Φ.

use crate::error::{Error, Result};
use crate::ingest::VeeringTriangulation;
use serde::Serialize;
use std::collections::BTreeMap;

/// A directed edge carrying an integer 1-chain over the face classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabeledEdge {
    pub tail: usize,
    pub head: usize,
    pub chain: Vec<i64>,
}

/// A directed multigraph whose edges carry face chains.
///
/// `anchors[v]` is the Γ-vertex (tetrahedron) standing for vertex `v`; every edge chain
/// runs from the anchor of its tail to the anchor of its head.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabeledDigraph {
    pub num_vertices: usize,
    pub edges: Vec<LabeledEdge>,
    pub anchors: Vec<usize>,
}

impl LabeledDigraph {
    pub fn out_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, e)| e.tail == v)
            .map(|(i, _)| i)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.tail == v).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.head == v).count()
    }

    /// Sum of the chains of a list of edges.
    pub fn chain_of(&self, edges: &[usize]) -> Vec<i64> {
        let len = self.edges.first().map_or(0, |e| e.chain.len());
        let mut c = vec![0i64; len];
        for &i in edges {
            for (a, b) in c.iter_mut().zip(&self.edges[i].chain) {
                *a += b;
            }
        }
        c
    }

    /// Subgraph on the given edges, keeping all vertices.
    pub fn edge_subgraph(&self, keep: &[usize]) -> LabeledDigraph {
        LabeledDigraph {
            num_vertices: self.num_vertices,
            edges: keep.iter().map(|&i| self.edges[i].clone()).collect(),
            anchors: self.anchors.clone(),
        }
    }

    /// Whether `edges` is a closed directed walk.
    pub fn is_closed_walk(&self, edges: &[usize]) -> bool {
        !edges.is_empty()
            && (0..edges.len()).all(|i| {
                self.edges[edges[i]].head == self.edges[edges[(i + 1) % edges.len()]].tail
            })
    }
}

fn unit(len: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0i64; len];
    v[i] = 1;
    v
}

/// Γ: one vertex per tetrahedron and, for each face class, an edge from the tetrahedron
/// below the face to the one above it. Edge `i` is face class `i`.
pub fn dual_graph(vt: &VeeringTriangulation) -> LabeledDigraph {
    let nf = vt.num_faces();
    let mut tail = vec![usize::MAX; nf];
    let mut head = vec![usize::MAX; nf];
    for t in 0..vt.num_tetrahedra() {
        for f in vt.top_faces(t) {
            tail[vt.face_class(t, f)] = t;
        }
        for f in vt.bottom_faces(t) {
            head[vt.face_class(t, f)] = t;
        }
    }
    LabeledDigraph {
        num_vertices: vt.num_tetrahedra(),
        edges: (0..nf)
            .map(|f| LabeledEdge {
                tail: tail[f],
                head: head[f],
                chain: unit(nf, f),
            })
            .collect(),
        anchors: (0..vt.num_tetrahedra()).collect(),
    }
}

/// A sector of the stable branched surface, pierced by one edge class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sector {
    pub edge: usize,
    /// Tetrahedron whose bottom edge is `edge`.
    pub top: usize,
    /// Tetrahedron whose top edge is `edge`.
    pub bottom: usize,
    /// Γ-edges (face classes) along each side, bottom to top.
    pub sides: [Vec<usize>; 2],
    /// Γ-vertices along each side, bottom to top.
    pub side_vertices: [Vec<usize>; 2],
    /// Penultimate vertex of each side.
    pub corners: [usize; 2],
}

pub fn sectors(vt: &VeeringTriangulation) -> Vec<Sector> {
    vt.stars()
        .iter()
        .map(|s| {
            let sv = [s.side_vertices(0), s.side_vertices(1)];
            Sector {
                edge: s.edge,
                top: s.top_tet,
                bottom: s.bottom_tet,
                sides: s.side_faces.clone(),
                corners: [sv[0][sv[0].len() - 2], sv[1][sv[1].len() - 2]],
                side_vertices: sv,
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum TurnKind {
    Branching,
    AB,
}

/// Classification of every turn (incoming Γ-edge, outgoing Γ-edge) at a Γ-vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TurnTable {
    pub kinds: BTreeMap<(usize, usize), TurnKind>,
    /// Successor of each Γ-edge under its branching turn.
    pub branching_successor: Vec<usize>,
    /// Successor of each Γ-edge under its AB turn.
    pub ab_successor: Vec<usize>,
}

impl TurnTable {
    pub fn kind(&self, incoming: usize, outgoing: usize) -> Option<TurnKind> {
        self.kinds.get(&(incoming, outgoing)).copied()
    }
}

/// Classifies turns from sector sides: the last turn of every side is AB, earlier
/// turns are branching. Fails if the result is not a valid turn table.
pub fn classify_turns(vt: &VeeringTriangulation) -> Result<TurnTable> {
    let gamma = dual_graph(vt);
    let mut kinds = BTreeMap::new();
    for sector in sectors(vt) {
        for side in &sector.sides {
            for i in 1..side.len() {
                let kind = if i + 1 == side.len() {
                    TurnKind::AB
                } else {
                    TurnKind::Branching
                };
                if let Some(old) = kinds.insert((side[i - 1], side[i]), kind) {
                    if old != kind {
                        return Err(Error::Internal(format!(
                            "inconsistent classification of turn ({}, {})",
                            side[i - 1], side[i]
                        )));
                    }
                }
            }
        }
    }
    let nf = gamma.edges.len();
    let mut branching = vec![usize::MAX; nf];
    let mut ab = vec![usize::MAX; nf];
    for f in 0..nf {
        let v = gamma.edges[f].head;
        for g in gamma.out_edges(v) {
            let slot = match kinds.get(&(f, g)) {
                Some(TurnKind::Branching) => &mut branching[f],
                Some(TurnKind::AB) => &mut ab[f],
                None => {
                    return Err(Error::Internal(format!("turn ({f}, {g}) is not on any sector side")))
                }
            };
            if *slot != usize::MAX {
                return Err(Error::Internal(format!("Γ-edge {f} has two continuations of one kind")));
            }
            *slot = g;
        }
        if branching[f] == usize::MAX || ab[f] == usize::MAX {
            return Err(Error::Internal(format!("Γ-edge {f} lacks a branching or AB continuation")));
        }
    }
    Ok(TurnTable {
        kinds,
        branching_successor: branching,
        ab_successor: ab,
    })
}

/// Where a flow-graph edge comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FlowEdgeOrigin {
    pub tet: usize,
    /// Tetrahedron edge index (`0..6`) of the target: the top edge or an equatorial edge.
    pub target_edge: usize,
    /// Side of the target sector whose path gives the chain.
    pub side: usize,
    /// Index on that side (0 = bottom vertex) of the vertex of `tet`.
    pub position: usize,
}

/// Φ together with the origin of each edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlowGraph {
    pub graph: LabeledDigraph,
    pub origins: Vec<FlowEdgeOrigin>,
}

/// Φ: one vertex per edge class; per tetrahedron, edges from its bottom edge to its top
/// edge and to the two equatorial edges whose veer differs from the top edge's. Each edge
/// carries the Γ-path along a side of the target sector from the tetrahedron to the
/// sector's top vertex.
pub fn flow_graph(vt: &VeeringTriangulation) -> Result<FlowGraph> {
    let nf = vt.num_faces();
    let secs = sectors(vt);
    let mut edges = Vec::new();
    let mut origins = Vec::new();
    for t in 0..vt.num_tetrahedra() {
        let tail = vt.bottom_class(t);
        let roles = crate::kernel::tet_roles(vt, t);
        let mut targets = vec![(vt.top_edge(t), 0usize, 0usize)];
        for &e in &roles.opposite_veer {
            let c = vt.edge_class(t, e);
            let star = vt.star(c);
            let (side, idx) = (0..2)
                .find_map(|s| {
                    star.fans[s]
                        .iter()
                        .position(|ft| ft.tet == t && ft.edge == e)
                        .map(|i| (s, i))
                })
                .ok_or_else(|| Error::Internal(format!("tetrahedron {t} edge {e} not in its fan")))?;
            if idx + 1 == star.fans[side].len() {
                return Err(Error::Internal(format!(
                    "tetrahedron {t} is a corner of sector {c}"
                )));
            }
            targets.push((e, side, idx + 1));
        }
        for (e, side, pos) in targets {
            let c = vt.edge_class(t, e);
            let mut chain = vec![0i64; nf];
            for &f in &secs[c].sides[side][pos..] {
                chain[f] += 1;
            }
            edges.push(LabeledEdge {
                tail,
                head: c,
                chain,
            });
            origins.push(FlowEdgeOrigin {
                tet: t,
                target_edge: e,
                side,
                position: pos,
            });
        }
    }
    Ok(FlowGraph {
        graph: LabeledDigraph {
            num_vertices: vt.num_edges(),
            edges,
            anchors: (0..vt.num_edges()).map(|c| vt.tet_above(c)).collect(),
        },
        origins,
    })
}

/// A cycle of one of the successor maps, as a list of Γ-edges, with its AB-turn parity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialCycle {
    pub edges: Vec<usize>,
    pub ab_turns: usize,
}

fn functional_cycles(succ: &[usize]) -> Vec<Vec<usize>> {
    let n = succ.len();
    let mut state = vec![0u8; n];
    let mut cycles = Vec::new();
    for s in 0..n {
        let mut path = Vec::new();
        let mut x = s;
        while state[x] == 0 {
            state[x] = 1;
            path.push(x);
            x = succ[x];
        }
        if state[x] == 1 {
            let start = path.iter().position(|&p| p == x).expect("on path");
            let mut cyc = path[start..].to_vec();
            let m = cyc.iter().enumerate().min_by_key(|(_, &v)| v).map(|(i, _)| i).unwrap();
            cyc.rotate_left(m);
            cycles.push(cyc);
        }
        for p in path {
            state[p] = 2;
        }
    }
    cycles.sort();
    cycles
}

/// Branch cycles and AB cycles: the cycles of the two successor maps on Γ-edges.
pub fn special_cycles(
    vt: &VeeringTriangulation,
    turns: &TurnTable,
) -> Result<(Vec<SpecialCycle>, Vec<SpecialCycle>)> {
    let wrap = |cycles: Vec<Vec<usize>>| -> Result<Vec<SpecialCycle>> {
        cycles
            .into_iter()
            .map(|c| {
                let ab_turns = ab_turn_count(vt, turns, &c)?;
                Ok(SpecialCycle { edges: c, ab_turns })
            })
            .collect()
    };
    Ok((
        wrap(functional_cycles(&turns.branching_successor))?,
        wrap(functional_cycles(&turns.ab_successor))?,
    ))
}

/// Number of AB turns along a closed Γ-walk given by its face classes.
pub fn ab_turn_count(vt: &VeeringTriangulation, turns: &TurnTable, cycle: &[usize]) -> Result<usize> {
    let gamma = dual_graph(vt);
    if !gamma.is_closed_walk(cycle) {
        return Err(Error::NotACycle);
    }
    Ok((0..cycle.len())
        .filter(|&i| turns.kind(cycle[i], cycle[(i + 1) % cycle.len()]) == Some(TurnKind::AB))
        .count())
}

/// Parity (0 even, 1 odd) of the number of AB turns along a Γ-cycle.
pub fn ab_parity(vt: &VeeringTriangulation, turns: &TurnTable, cycle: &[usize]) -> Result<usize> {
    Ok(ab_turn_count(vt, turns, cycle)? % 2)
}

/// Simple directed cycles (no repeated vertex) as edge lists, each rotated to start at its
/// least vertex. Stops with `TooLarge` past `cap` cycles.
pub fn simple_cycles(g: &LabeledDigraph, max_len: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
    let mut adj = vec![Vec::new(); g.num_vertices];
    for (i, e) in g.edges.iter().enumerate() {
        adj[e.tail].push(i);
    }
    let mut out = Vec::new();
    let mut on_path = vec![false; g.num_vertices];
    let mut path = Vec::new();
    fn dfs(
        g: &LabeledDigraph,
        adj: &[Vec<usize>],
        root: usize,
        v: usize,
        max_len: usize,
        cap: usize,
        on_path: &mut [bool],
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        for &i in &adj[v] {
            let w = g.edges[i].head;
            if w == root {
                path.push(i);
                out.push(path.clone());
                path.pop();
                if out.len() > cap {
                    return Err(Error::TooLarge(format!("more than {cap} simple cycles")));
                }
            } else if w > root && !on_path[w] && path.len() + 1 < max_len {
                on_path[w] = true;
                path.push(i);
                dfs(g, adj, root, w, max_len, cap, on_path, path, out)?;
                path.pop();
                on_path[w] = false;
            }
        }
        Ok(())
    }
    for root in 0..g.num_vertices {
        on_path[root] = true;
        dfs(g, &adj, root, root, max_len, cap, &mut on_path, &mut path, &mut out)?;
        on_path[root] = false;
    }
    Ok(out)
}

/// Strongly connected components (Tarjan), each sorted, listed by least vertex.
pub fn strongly_connected_components(num_vertices: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); num_vertices];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    let mut index = vec![usize::MAX; num_vertices];
    let mut low = vec![0usize; num_vertices];
    let mut on_stack = vec![false; num_vertices];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for s in 0..num_vertices {
        if index[s] != usize::MAX {
            continue;
        }
        let mut work = vec![(s, 0usize)];
        index[s] = counter;
        low[s] = counter;
        counter += 1;
        stack.push(s);
        on_stack[s] = true;
        while let Some(&mut (v, ref mut k)) = work.last_mut() {
            if *k < adj[v].len() {
                let w = adj[v][*k];
                *k += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some(&(u, _)) = work.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("nonempty");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort();
                    comps.push(comp);
                }
            }
        }
    }
    comps.sort();
    comps
}
