//! Edge stars, fans and per-tetrahedron edge roles.

use crate::error::{Error, Result};
use crate::ingest::{Veer, VeeringTriangulation};
use crate::perm::{edge_between, EDGE_VERTICES};
use serde::Serialize;

/// One occurrence of an edge class inside a fan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FanTet {
    pub tet: usize,
    /// Tetrahedron edge index (`0..6`) of the occurrence.
    pub edge: usize,
}

/// The tetrahedra around an edge class, split into its two fans.
///
/// Both fans are listed from the bottom tetrahedron (where the edge is the top edge)
/// upward to the top tetrahedron (where it is the bottom edge). Side 0 leaves the bottom
/// tetrahedron through the lower-numbered of its two top faces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeStar {
    pub edge: usize,
    pub bottom_tet: usize,
    pub top_tet: usize,
    pub fans: [Vec<FanTet>; 2],
    /// Face classes crossed along each side, bottom to top; one more than the fan length.
    pub side_faces: [Vec<usize>; 2],
}

impl EdgeStar {
    pub fn fan_lengths(&self) -> (usize, usize) {
        (self.fans[0].len(), self.fans[1].len())
    }

    pub fn degree(&self) -> usize {
        self.fans[0].len() + self.fans[1].len() + 2
    }

    /// Tetrahedra along side `s` including the bottom and top tetrahedra.
    pub fn side_vertices(&self, s: usize) -> Vec<usize> {
        let mut v = vec![self.bottom_tet];
        v.extend(self.fans[s].iter().map(|f| f.tet));
        v.push(self.top_tet);
        v
    }
}

pub(crate) fn compute_stars(vt: &VeeringTriangulation) -> Result<Vec<EdgeStar>> {
    let n = vt.num_tetrahedra();
    let ne = vt.num_edges();
    let mut below: Vec<Option<usize>> = vec![None; ne];
    let mut above: Vec<Option<usize>> = vec![None; ne];
    for t in 0..n {
        let c = vt.top_class(t);
        if below[c].replace(t).is_some() {
            return Err(Error::NotTaut(format!("edge class {c} is the top edge of two tetrahedra")));
        }
        let c = vt.bottom_class(t);
        if above[c].replace(t).is_some() {
            return Err(Error::NotTaut(format!(
                "edge class {c} is the bottom edge of two tetrahedra"
            )));
        }
    }
    let mut stars = Vec::with_capacity(ne);
    for e in 0..ne {
        let b = below[e].ok_or_else(|| Error::NotTaut(format!("edge class {e} is never a top edge")))?;
        let top_t = above[e]
            .ok_or_else(|| Error::NotTaut(format!("edge class {e} is never a bottom edge")))?;
        let (a, bv) = EDGE_VERTICES[vt.top_edge(b)];
        let [c, d] = vt.top_faces(b);
        let mut fans: [Vec<FanTet>; 2] = [Vec::new(), Vec::new()];
        let mut side_faces: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for (s, (exit, other)) in [(c, d), (d, c)].into_iter().enumerate() {
            let mut state = (b, a, bv, exit, other);
            let mut steps = 0;
            loop {
                let (t, a1, b1, x, y) = state;
                side_faces[s].push(vt.face_class(t, x));
                let g = vt.raw().gluing(t, x);
                let p = |v: usize| g.perm.apply(v);
                state = (g.tet, p(a1), p(b1), p(y), p(x));
                let edge = edge_between(state.1, state.2);
                if edge == vt.bottom_edge(g.tet) {
                    if g.tet != top_t {
                        return Err(Error::Internal(format!("fan walk of edge {e} ended off its top")));
                    }
                    break;
                }
                if vt.is_pi_edge(g.tet, edge) {
                    return Err(Error::NotTaut(format!(
                        "fan of edge class {e} meets a second top position"
                    )));
                }
                fans[s].push(FanTet { tet: g.tet, edge });
                steps += 1;
                if steps > 6 * n {
                    return Err(Error::Internal(format!("fan walk of edge {e} does not close")));
                }
            }
        }
        stars.push(EdgeStar {
            edge: e,
            bottom_tet: b,
            top_tet: top_t,
            fans,
            side_faces,
        });
    }
    Ok(stars)
}

/// Edge stars of a veering triangulation.
pub fn edge_stars(vt: &VeeringTriangulation) -> &[EdgeStar] {
    vt.stars()
}

/// Length of the longest fan.
pub fn delta_tau(vt: &VeeringTriangulation) -> usize {
    vt.stars()
        .iter()
        .map(|s| s.fans[0].len().max(s.fans[1].len()))
        .max()
        .unwrap_or(0)
}

/// Edge roles of one tetrahedron.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TetRoles {
    pub tet: usize,
    pub top: usize,
    pub bottom: usize,
    /// Equatorial tetrahedron edges (`0..6`) with their classes and veers.
    pub sides: Vec<(usize, usize, Veer)>,
    /// The two equatorial tetrahedron edges whose veer differs from the top edge's.
    pub opposite_veer: [usize; 2],
}

pub fn tet_roles(vt: &VeeringTriangulation, tet: usize) -> TetRoles {
    let top_veer = vt.veer(vt.top_class(tet));
    let sides: Vec<(usize, usize, Veer)> = (0..6)
        .filter(|&e| !vt.is_pi_edge(tet, e))
        .map(|e| {
            let c = vt.edge_class(tet, e);
            (e, c, vt.veer(c))
        })
        .collect();
    let opp: Vec<usize> = sides.iter().filter(|s| s.2 != top_veer).map(|s| s.0).collect();
    TetRoles {
        tet,
        top: vt.top_class(tet),
        bottom: vt.bottom_class(tet),
        sides,
        opposite_veer: [opp[0], opp[1]],
    }
}

/// Histogram of fan lengths: entry `k` counts fans of length `k`.
pub fn fan_histogram(vt: &VeeringTriangulation) -> Vec<usize> {
    let mut h = vec![0usize; delta_tau(vt) + 1];
    for s in vt.stars() {
        h[s.fans[0].len()] += 1;
        h[s.fans[1].len()] += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{infer_veers, parse_taut_isosig};

    fn vt(sig: &str) -> VeeringTriangulation {
        infer_veers(&parse_taut_isosig(sig).unwrap()).unwrap()
    }

    #[test]
    fn stars_cover_every_edge_occurrence() {
        for sig in ["cPcbbbiht_12", "dLQacccjsnk_200", "gLALQbcbeeffxxnskaj_011002"] {
            let vt = vt(sig);
            let stars = edge_stars(&vt);
            assert_eq!(stars.len(), vt.num_edges());
            let total: usize = stars.iter().map(EdgeStar::degree).sum();
            assert_eq!(total, 6 * vt.num_tetrahedra(), "{sig}");
            for s in stars {
                assert_eq!(s.degree(), vt.degree(s.edge));
                for side in 0..2 {
                    assert_eq!(s.side_faces[side].len(), s.fans[side].len() + 1);
                    assert_eq!(s.side_vertices(side).len(), s.fans[side].len() + 2);
                }
                assert_eq!(vt.top_class(s.bottom_tet), s.edge);
                assert_eq!(vt.bottom_class(s.top_tet), s.edge);
            }
        }
    }

    #[test]
    fn fan_statistics() {
        let v = vt("cPcbbbiht_12");
        assert_eq!(delta_tau(&v), 2);
        assert_eq!(fan_histogram(&v), vec![0, 0, 4]);
        let v = vt("dLQacccjsnk_200");
        assert_eq!(delta_tau(&v), 4);
        assert_eq!(fan_histogram(&v).iter().sum::<usize>(), 2 * v.num_edges());
    }

    #[test]
    fn roles_split_equatorial_edges() {
        let v = vt("dLQacccjsnk_200");
        for t in 0..v.num_tetrahedra() {
            let r = tet_roles(&v, t);
            assert_eq!(r.sides.len(), 4);
            let top = v.veer(r.top);
            for e in r.opposite_veer {
                assert_ne!(v.veer(v.edge_class(t, e)), top);
            }
            let same = r.sides.iter().filter(|s| s.2 == top).count();
            assert_eq!(same, 2);
        }
    }
}
