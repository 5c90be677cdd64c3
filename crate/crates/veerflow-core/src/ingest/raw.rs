use crate::error::{Error, Result};
use crate::perm::{edge_between, pair_edges, Perm4, EDGE_VERTICES};
use serde::Serialize;
use std::fmt;

/// Veer label of an edge class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Veer {
    Left,
    Right,
}

impl Veer {
    pub fn flip(self) -> Veer {
        match self {
            Veer::Left => Veer::Right,
            Veer::Right => Veer::Left,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Veer::Left => 'L',
            Veer::Right => 'R',
        }
    }
}

impl fmt::Display for Veer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Face `face` of one tetrahedron is glued to face `perm(face)` of `tet`,
/// vertex `v` going to vertex `perm(v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm4,
}

/// Ideal triangulation with a taut angle choice per tetrahedron.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTriangulation {
    gluings: Vec<[Gluing; 4]>,
    taut: Vec<u8>,
    declared_veers: Option<Vec<Veer>>,
}

impl RawTriangulation {
    /// Checks ranges, the involution property and the absence of faces glued to themselves.
    pub fn new(gluings: Vec<[Gluing; 4]>, taut: Vec<u8>) -> Result<Self> {
        let n = gluings.len();
        if n == 0 {
            return Err(Error::IndexOutOfRange("triangulation has no tetrahedra".into()));
        }
        if taut.len() != n {
            return Err(Error::DigitCount {
                expected: n,
                found: taut.len(),
            });
        }
        if let Some(t) = taut.iter().position(|&d| d > 2) {
            return Err(Error::IndexOutOfRange(format!(
                "taut digit {} of tetrahedron {t} is not in 0..=2",
                taut[t]
            )));
        }
        for (t, row) in gluings.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                if g.tet >= n {
                    return Err(Error::IndexOutOfRange(format!(
                        "tetrahedron {t} face {f} is glued to tetrahedron {} of {n}",
                        g.tet
                    )));
                }
                if g.tet == t && g.perm.apply(f) == f {
                    return Err(Error::Involution { tet: t, face: f });
                }
                let back = gluings[g.tet][g.perm.apply(f)];
                if back.tet != t || back.perm != g.perm.inverse() {
                    return Err(Error::Involution { tet: t, face: f });
                }
            }
        }
        Ok(RawTriangulation {
            gluings,
            taut,
            declared_veers: None,
        })
    }

    /// Attaches veer labels indexed by edge class, to be checked against inference.
    pub fn with_declared_veers(mut self, veers: Vec<Veer>) -> Self {
        self.declared_veers = Some(veers);
        self
    }

    pub fn num_tetrahedra(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: usize) -> Gluing {
        self.gluings[tet][face]
    }

    pub fn gluings(&self) -> &[[Gluing; 4]] {
        &self.gluings
    }

    /// Index in `0..3` of the pair of opposite edges carrying angle π.
    pub fn taut(&self, tet: usize) -> usize {
        self.taut[tet] as usize
    }

    pub fn taut_data(&self) -> &[u8] {
        &self.taut
    }

    pub fn declared_veers(&self) -> Option<&[Veer]> {
        self.declared_veers.as_deref()
    }

    /// Relabels tetrahedron `t` as `tet_map[t]` and its vertex `v` as `vertex_maps[t](v)`.
    pub fn relabel(&self, tet_map: &[usize], vertex_maps: &[Perm4]) -> Result<Self> {
        let n = self.num_tetrahedra();
        let mut gluings = vec![[Gluing { tet: 0, perm: Perm4::IDENTITY }; 4]; n];
        let mut taut = vec![0u8; n];
        for t in 0..n {
            let nt = tet_map[t];
            let vm = vertex_maps[t];
            for f in 0..4 {
                let g = self.gluings[t][f];
                let perm = vertex_maps[g.tet].compose(g.perm).compose(vm.inverse());
                gluings[nt][vm.apply(f)] = Gluing {
                    tet: tet_map[g.tet],
                    perm,
                };
            }
            let (a, b) = EDGE_VERTICES[pair_edges(self.taut(t)).0];
            taut[nt] = crate::perm::pair_of_edge(edge_between(vm.apply(a), vm.apply(b))) as u8;
        }
        RawTriangulation::new(gluings, taut)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(tet: usize, perm: &str) -> Gluing {
        Gluing { tet, perm: Perm4::parse(perm).unwrap() }
    }

    #[test]
    fn gluing_checks() {
        assert!(matches!(RawTriangulation::new(vec![], vec![]), Err(Error::IndexOutOfRange(_))));
        let row = [g(0, "1023"), g(0, "1023"), g(0, "0132"), g(0, "0132")];
        assert!(RawTriangulation::new(vec![row], vec![0]).is_ok());
        assert!(matches!(RawTriangulation::new(vec![row], vec![3]), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(RawTriangulation::new(vec![row], vec![0, 0]), Err(Error::DigitCount { expected: 1, found: 2 })));
        let fixed = [g(0, "0123"), g(0, "1023"), g(0, "1023"), g(0, "0132")];
        assert!(matches!(RawTriangulation::new(vec![fixed], vec![0]), Err(Error::Involution { tet: 0, face: 0 })));
        let one_way = [g(0, "1023"), g(0, "1023"), g(0, "0132"), g(0, "0123")];
        assert!(matches!(RawTriangulation::new(vec![one_way], vec![0]), Err(Error::Involution { .. })));
    }

    #[test]
    fn veer_letters() {
        assert_eq!(Veer::Left.flip(), Veer::Right);
        assert_eq!((Veer::Left.letter(), Veer::Right.letter()), ('L', 'R'));
    }
}
