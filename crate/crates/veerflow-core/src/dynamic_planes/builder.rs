//! Congruence closure over sector copies of the stable branched surface.
//!
//! Vertices and sectors live in a union-find whose links carry an integer offset: a node
//! `x` with parent `p` and offset `k` stands for `g^k · p`, where `g` is a fixed deck
//! translation. Patches of a plane use no translation and every offset stays zero;
//! quotient strips of a dual cycle identify the end of one period with `g` times its start.

use super::{Corner, PatchEdge, PatchSector, PatchVertex, PlanePatch};
use crate::error::{Error, Result};
use crate::Analysis;
use std::collections::{BTreeMap, BTreeSet};

/// A node shifted by a power of the translation.
pub(crate) type Ref = (usize, i64);

#[derive(Clone, Copy, Debug)]
enum Merge {
    Vertex(Ref, Ref),
    Sector(Ref, Ref),
}

/// The three ways a plane can pass through a Γ-vertex.
pub(crate) fn local_planes(an: &Analysis, tet: usize) -> Result<[BTreeSet<Corner>; 3]> {
    let vt = &an.vt;
    let ins: Vec<usize> = vt.bottom_faces(tet).iter().map(|&f| vt.face_class(tet, f)).collect();
    let outs: Vec<usize> = vt.top_faces(tet).iter().map(|&f| vt.face_class(tet, f)).collect();
    let ab = |f: usize| an.turns.ab_successor[f];
    let br = |f: usize| an.turns.branching_successor[f];
    if ab(ins[0]) == ab(ins[1]) || br(ins[0]) == br(ins[1]) {
        return Err(Error::Internal(format!("turns at tetrahedron {tet} are not a matching")));
    }
    let full: BTreeSet<Corner> = [
        Corner::SectorTop,
        Corner::SectorBottom,
        Corner::Side(ins[0], ab(ins[0])),
        Corner::Side(ins[1], ab(ins[1])),
    ]
    .into_iter()
    .collect();
    let partial = |o: usize| -> BTreeSet<Corner> {
        let b = *ins.iter().find(|&&i| br(i) == o).expect("matching");
        let a = *ins.iter().find(|&&i| ab(i) == o).expect("matching");
        [Corner::SectorTop, Corner::Side(b, o), Corner::Side(a, o)].into_iter().collect()
    };
    Ok([full, partial(outs[0]), partial(outs[1])])
}

/// Slot layout of a sector copy: 0 bottom, 1 top, then interior vertices of side 0 and side 1.
pub(crate) fn slot_index(an: &Analysis, class: usize, side: usize, pos: usize) -> usize {
    let sec = &an.sectors[class];
    let len = sec.sides[side].len();
    if pos == 0 {
        0
    } else if pos == len {
        1
    } else if side == 0 {
        1 + pos
    } else {
        sec.sides[0].len() + pos
    }
}

pub(crate) fn slot_count(an: &Analysis, class: usize) -> usize {
    let sec = &an.sectors[class];
    sec.sides[0].len() + sec.sides[1].len()
}

/// Corner key that a sector occupies at the vertex in the given slot.
fn corner_of(an: &Analysis, class: usize, side: usize, pos: usize) -> Corner {
    let sec = &an.sectors[class];
    let len = sec.sides[side].len();
    if pos == 0 {
        Corner::SectorBottom
    } else if pos == len {
        Corner::SectorTop
    } else {
        Corner::Side(sec.sides[side][pos - 1], sec.sides[side][pos])
    }
}

pub(crate) struct Builder<'a> {
    an: &'a Analysis,
    planes: Vec<[BTreeSet<Corner>; 3]>,
    vparent: Vec<usize>,
    voff: Vec<i64>,
    vtet: Vec<usize>,
    out: Vec<BTreeMap<usize, Ref>>,
    inn: Vec<BTreeMap<usize, Ref>>,
    corners: Vec<BTreeMap<Corner, (usize, i64, usize)>>,
    sparent: Vec<usize>,
    soff: Vec<i64>,
    sclass: Vec<usize>,
    slots: Vec<Vec<Ref>>,
    level: Vec<usize>,
    queue: Vec<Merge>,
    max_sectors: usize,
}

impl<'a> Builder<'a> {
    pub(crate) fn new(an: &'a Analysis, max_sectors: usize) -> Result<Self> {
        let planes = (0..an.vt.num_tetrahedra())
            .map(|t| local_planes(an, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Builder {
            an,
            planes,
            vparent: Vec::new(),
            voff: Vec::new(),
            vtet: Vec::new(),
            out: Vec::new(),
            inn: Vec::new(),
            corners: Vec::new(),
            sparent: Vec::new(),
            soff: Vec::new(),
            sclass: Vec::new(),
            slots: Vec::new(),
            level: Vec::new(),
            queue: Vec::new(),
            max_sectors,
        })
    }

    pub(crate) fn new_vertex(&mut self, tet: usize) -> usize {
        let id = self.vparent.len();
        self.vparent.push(id);
        self.voff.push(0);
        self.vtet.push(tet);
        self.out.push(BTreeMap::new());
        self.inn.push(BTreeMap::new());
        self.corners.push(BTreeMap::new());
        id
    }

    pub(crate) fn find_vertex(&mut self, r: Ref) -> Ref {
        let (mut x, mut off) = r;
        let mut path = Vec::new();
        while self.vparent[x] != x {
            path.push(x);
            off += self.voff[x];
            x = self.vparent[x];
        }
        let root = x;
        let mut acc = off - r.1;
        for p in path {
            let step = self.voff[p];
            self.vparent[p] = root;
            self.voff[p] = acc;
            acc -= step;
        }
        (root, off)
    }

    pub(crate) fn find_sector(&mut self, r: Ref) -> Ref {
        let (mut x, mut off) = r;
        let mut path = Vec::new();
        while self.sparent[x] != x {
            path.push(x);
            off += self.soff[x];
            x = self.sparent[x];
        }
        let root = x;
        let mut acc = off - r.1;
        for p in path {
            let step = self.soff[p];
            self.sparent[p] = root;
            self.soff[p] = acc;
            acc -= step;
        }
        (root, off)
    }

    /// Records a Γ-edge with face class `face` from `tail` to `head`.
    pub(crate) fn link(&mut self, tail: Ref, face: usize, head: Ref) {
        let (x, a) = self.find_vertex(tail);
        let (y, b) = self.find_vertex(head);
        match self.out[x].get(&face).copied() {
            Some(old) => self.queue.push(Merge::Vertex((y, b - a), old)),
            None => {
                self.out[x].insert(face, (y, b - a));
            }
        }
        match self.inn[y].get(&face).copied() {
            Some(old) => self.queue.push(Merge::Vertex((x, a - b), old)),
            None => {
                self.inn[y].insert(face, (x, a - b));
            }
        }
    }

    fn check_plane(&self, v: usize) -> Result<()> {
        let keys: Vec<&Corner> = self.corners[v].keys().collect();
        if self.planes[self.vtet[v]].iter().any(|p| keys.iter().all(|k| p.contains(k))) {
            Ok(())
        } else {
            Err(Error::GluingConflict(format!(
                "corners {:?} at a copy of tetrahedron {} fit no local plane",
                keys, self.vtet[v]
            )))
        }
    }

    fn occupy(&mut self, sector: usize, slot: usize, key: Corner) -> Result<()> {
        let (s, _) = self.find_sector((sector, 0));
        let sref = self.slots[s][slot];
        let (v, a) = self.find_vertex(sref);
        let entry = (s, -a, slot);
        match self.corners[v].get(&key).copied() {
            Some((t, to, _)) => self.queue.push(Merge::Sector((s, -a), (t, to))),
            None => {
                self.corners[v].insert(key, entry);
                self.check_plane(v)?;
            }
        }
        Ok(())
    }

    /// Adds a sector copy of `class` with the given slots pinned, fresh vertices elsewhere.
    pub(crate) fn add_sector(&mut self, class: usize, level: usize, pinned: &[(usize, Ref)]) -> Result<usize> {
        if self.sparent.len() >= self.max_sectors {
            return Err(Error::TooLarge(format!("patch exceeds {} sector copies", self.max_sectors)));
        }
        let an = self.an;
        let sec = &an.sectors[class];
        let mut slots = vec![(usize::MAX, 0i64); slot_count(an, class)];
        for side in 0..2 {
            for (pos, &tet) in sec.side_vertices[side].iter().enumerate() {
                let k = slot_index(an, class, side, pos);
                if slots[k].0 == usize::MAX {
                    slots[k] = (self.new_vertex(tet), 0);
                }
            }
        }
        let id = self.sparent.len();
        self.sparent.push(id);
        self.soff.push(0);
        self.sclass.push(class);
        self.slots.push(slots.clone());
        self.level.push(level);
        for &(k, r) in pinned {
            self.queue.push(Merge::Vertex(slots[k], r));
        }
        self.close()?;
        for side in 0..2 {
            let len = sec.sides[side].len();
            for pos in 0..len {
                let (s, so) = self.find_sector((id, 0));
                let t = self.slots[s][slot_index(an, class, side, pos)];
                let h = self.slots[s][slot_index(an, class, side, pos + 1)];
                self.link((t.0, t.1 + so), sec.sides[side][pos], (h.0, h.1 + so));
            }
            self.close()?;
        }
        for side in 0..2 {
            for pos in 0..=sec.sides[side].len() {
                if side == 1 && (pos == 0 || pos == sec.sides[1].len()) {
                    continue;
                }
                self.occupy(id, slot_index(an, class, side, pos), corner_of(an, class, side, pos))?;
                self.close()?;
            }
        }
        Ok(id)
    }

    fn merge_vertices(&mut self, a: Ref, b: Ref) -> Result<()> {
        let (x, p) = self.find_vertex(a);
        let (y, q) = self.find_vertex(b);
        if x == y {
            if p != q {
                return Err(Error::GluingConflict(format!(
                    "a copy of tetrahedron {} is identified with its own translate",
                    self.vtet[x]
                )));
            }
            return Ok(());
        }
        if self.vtet[x] != self.vtet[y] {
            return Err(Error::GluingConflict(format!(
                "copies of tetrahedra {} and {} identified",
                self.vtet[x], self.vtet[y]
            )));
        }
        // g^p x = g^q y, so x = g^k y.
        let k = q - p;
        self.vparent[x] = y;
        self.voff[x] = k;
        for (f, (z, e)) in std::mem::take(&mut self.out[x]) {
            match self.out[y].get(&f).copied() {
                Some(old) => self.queue.push(Merge::Vertex((z, e - k), old)),
                None => {
                    self.out[y].insert(f, (z, e - k));
                }
            }
        }
        for (f, (z, e)) in std::mem::take(&mut self.inn[x]) {
            match self.inn[y].get(&f).copied() {
                Some(old) => self.queue.push(Merge::Vertex((z, e - k), old)),
                None => {
                    self.inn[y].insert(f, (z, e - k));
                }
            }
        }
        for (key, (s, e, slot)) in std::mem::take(&mut self.corners[x]) {
            match self.corners[y].get(&key).copied() {
                Some((t, to, _)) => self.queue.push(Merge::Sector((s, e - k), (t, to))),
                None => {
                    self.corners[y].insert(key, (s, e - k, slot));
                }
            }
        }
        self.check_plane(y)
    }

    fn merge_sectors(&mut self, a: Ref, b: Ref) -> Result<()> {
        let (x, p) = self.find_sector(a);
        let (y, q) = self.find_sector(b);
        if x == y {
            if p != q {
                return Err(Error::GluingConflict(format!(
                    "a copy of sector {} is identified with its own translate",
                    self.sclass[x]
                )));
            }
            return Ok(());
        }
        if self.sclass[x] != self.sclass[y] {
            return Err(Error::GluingConflict(format!(
                "copies of sectors {} and {} share a corner",
                self.sclass[x], self.sclass[y]
            )));
        }
        let k = q - p;
        self.sparent[x] = y;
        self.soff[x] = k;
        self.level[y] = self.level[y].min(self.level[x]);
        let (sx, sy) = (self.slots[x].clone(), self.slots[y].clone());
        for (u, w) in sx.into_iter().zip(sy) {
            self.queue.push(Merge::Vertex(u, (w.0, w.1 + k)));
        }
        Ok(())
    }

    pub(crate) fn close(&mut self) -> Result<()> {
        while let Some(m) = self.queue.pop() {
            match m {
                Merge::Vertex(a, b) => self.merge_vertices(a, b)?,
                Merge::Sector(a, b) => self.merge_sectors(a, b)?,
            }
        }
        Ok(())
    }

    pub(crate) fn sector_roots(&mut self) -> Vec<usize> {
        let mut roots: Vec<usize> = (0..self.sparent.len()).filter(|&s| self.sparent[s] == s).collect();
        roots.sort();
        roots
    }

    /// Attaches the sector on the 1-sheeted side of every non-final side edge of `sector`.
    pub(crate) fn descend(&mut self, sector: usize, level: usize) -> Result<()> {
        let an = self.an;
        let class = self.sclass[sector];
        let sec = &an.sectors[class];
        for side in 0..2 {
            let len = sec.sides[side].len();
            for pos in 0..len - 1 {
                let (s, so) = self.find_sector((sector, 0));
                let h = self.slots[s][slot_index(an, class, side, pos + 1)];
                let (v, a) = self.find_vertex((h.0, h.1 + so));
                if let Some(&(t, _, _)) = self.corners[v].get(&Corner::SectorTop) {
                    let (t, _) = self.find_sector((t, 0));
                    self.level[t] = self.level[t].min(level + 1);
                    continue;
                }
                let c = an.vt.bottom_class(self.vtet[v]);
                self.add_sector(c, level + 1, &[(1, (v, a))])?;
            }
        }
        Ok(())
    }

    pub(crate) fn top_slot(&self, sector: usize) -> Ref {
        self.slots[sector][1]
    }

    pub(crate) fn tet_of(&self, vertex: usize) -> usize {
        self.vtet[vertex]
    }

    pub(crate) fn level_of(&self, s: usize) -> usize {
        self.level[s]
    }

    /// Compacts the union-find into an immutable patch.
    pub(crate) fn finish(mut self, depth: usize, periodic: bool, seeds: Vec<Ref>) -> Result<PlanePatch> {
        let an = self.an;
        let nv = self.vparent.len();
        let vroots: Vec<usize> = (0..nv).filter(|&v| self.vparent[v] == v).collect();
        let vindex: BTreeMap<usize, usize> = vroots.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let sroots = self.sector_roots();
        let sindex: BTreeMap<usize, usize> = sroots.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut vertices = Vec::with_capacity(vroots.len());
        for &v in &vroots {
            let mut corners = BTreeMap::new();
            for (k, (s, e, slot)) in self.corners[v].clone() {
                let (r, o) = self.find_sector((s, e));
                corners.insert(k, (sindex[&r], o, slot));
            }
            let tet = self.vtet[v];
            let compatible: Vec<usize> = (0..3)
                .filter(|&i| corners.keys().all(|k| self.planes[tet][i].contains(k)))
                .collect();
            let interior = compatible
                .iter()
                .find(|&&i| self.planes[tet][i].iter().all(|k| corners.contains_key(k)))
                .copied();
            vertices.push(PatchVertex {
                tet,
                veer: an.vt.veer(an.vt.top_class(tet)),
                corners,
                local_plane: interior.or(if compatible.len() == 1 { Some(compatible[0]) } else { None }),
                interior: interior.is_some(),
            });
        }
        let mut edges = Vec::new();
        for &v in &vroots {
            for (&f, &(h, e)) in &self.out[v].clone() {
                let (hr, ho) = self.find_vertex((h, e));
                edges.push(PatchEdge {
                    tail: vindex[&v],
                    face: f,
                    head: vindex[&hr],
                    offset: ho,
                });
            }
        }
        let mut sectors = Vec::with_capacity(sroots.len());
        for &s in &sroots {
            let slots = self.slots[s]
                .clone()
                .into_iter()
                .map(|r| {
                    let (v, o) = self.find_vertex(r);
                    (vindex[&v], o)
                })
                .collect();
            sectors.push(PatchSector {
                class: self.sclass[s],
                level: self.level[s],
                slots,
            });
        }
        let seeds = seeds
            .into_iter()
            .map(|r| {
                let (v, o) = self.find_vertex(r);
                (vindex[&v], o)
            })
            .collect();
        let patch = PlanePatch {
            depth,
            periodic,
            seeds,
            vertices,
            edges,
            sectors,
        };
        Ok(patch)
    }
}
