//! Bounded patches of dynamic planes: descending sets of sectors, chains, and quotient
//! strips of dual cycles with their periodic flow lines and AB lines.

mod builder;

use crate::error::{Error, Result};
use crate::graphs::TurnKind;
use crate::ingest::{check, Check, Veer};
use crate::kernel::delta_tau;
use crate::Analysis;
use builder::{local_planes, slot_index, Builder, Ref};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Largest descending depth accepted by default.
pub const DEFAULT_DEPTH_BOUND: usize = 12;
/// Cap on sector copies in one patch.
pub const MAX_PATCH_SECTORS: usize = 200_000;

/// Position of a sector corner at a Γ-vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Corner {
    /// The vertex is the top of the sector.
    SectorTop,
    /// The vertex is the bottom of the sector.
    SectorBottom,
    /// The vertex lies on a side of the sector between the given Γ-edges.
    Side(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchVertex {
    pub tet: usize,
    /// Veer of the top edge of the vertex's tetrahedron.
    pub veer: Veer,
    /// Occupied corners: sector index, translation offset of that sector copy, slot.
    pub corners: BTreeMap<Corner, (usize, i64, usize)>,
    /// Index into the vertex's three local planes, when determined.
    pub local_plane: Option<usize>,
    /// Whether every corner of the local plane is present.
    pub interior: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PatchEdge {
    pub tail: usize,
    pub face: usize,
    pub head: usize,
    /// The head is `g^offset` times the listed head vertex.
    pub offset: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatchSector {
    pub class: usize,
    /// Least number of sectors on a descending path from a seed.
    pub level: usize,
    /// Vertex and offset of each slot: bottom, top, then side 0 and side 1 interiors.
    pub slots: Vec<(usize, i64)>,
}

/// A finite disc of sector copies in a dynamic plane, or a finite piece of the quotient of
/// a dynamic plane by a deck translation (`periodic`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanePatch {
    pub depth: usize,
    pub periodic: bool,
    pub seeds: Vec<(usize, i64)>,
    pub vertices: Vec<PatchVertex>,
    pub edges: Vec<PatchEdge>,
    pub sectors: Vec<PatchSector>,
}

impl PlanePatch {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.sectors.len() as i64
    }

    pub fn interior_count(&self) -> usize {
        self.vertices.iter().filter(|v| v.interior).count()
    }

    /// Slot of a sector in its own frame.
    pub fn slot(&self, an: &Analysis, sector: usize, side: usize, pos: usize) -> (usize, i64) {
        let s = &self.sectors[sector];
        self.sectors[sector].slots[slot_index(an, s.class, side, pos)]
    }

    /// Sector whose top is the given vertex, with its offset.
    pub fn sector_below(&self, v: usize) -> Option<(usize, i64)> {
        self.vertices[v].corners.get(&Corner::SectorTop).map(|&(s, o, _)| (s, o))
    }

    fn out_map(&self) -> BTreeMap<(usize, usize), (usize, i64, usize)> {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| ((e.tail, e.face), (e.head, e.offset, i)))
            .collect()
    }

    fn in_map(&self) -> BTreeMap<(usize, usize), (usize, i64)> {
        self.edges.iter().map(|e| ((e.head, e.face), (e.tail, -e.offset))).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "depth": self.depth,
            "periodic": self.periodic,
            "seeds": self.seeds,
            "euler_characteristic": self.euler_characteristic(),
            "vertices": self.vertices.iter().map(|v| json!({
                "tet": v.tet,
                "veer": v.veer.to_string(),
                "interior": v.interior,
                "local_plane": v.local_plane,
                "corners": v.corners.iter().map(|(k, &(s, o, slot))| json!({
                    "corner": corner_json(k),
                    "sector": s,
                    "offset": o,
                    "slot": slot,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "edges": self.edges,
            "sectors": self.sectors,
        })
    }
}

fn corner_json(c: &Corner) -> Value {
    match c {
        Corner::SectorTop => json!("top"),
        Corner::SectorBottom => json!("bottom"),
        Corner::Side(a, b) => json!([a, b]),
    }
}

fn build_levels(b: &mut Builder, depth: usize) -> Result<()> {
    for n in 1..depth {
        let current: Vec<usize> = b.sector_roots().into_iter().filter(|&s| b.level_of(s) == n).collect();
        for s in current {
            let (r, _) = b.find_sector((s, 0));
            b.descend(r, n)?;
        }
    }
    Ok(())
}

/// The sectors reachable from a seed sector by descending paths through at most `depth`
/// sectors.
pub fn descending_patch(an: &Analysis, seed: usize, depth: usize) -> Result<PlanePatch> {
    descending_patch_bounded(an, seed, depth, DEFAULT_DEPTH_BOUND)
}

pub fn descending_patch_bounded(an: &Analysis, seed: usize, depth: usize, bound: usize) -> Result<PlanePatch> {
    if seed >= an.sectors.len() {
        return Err(Error::IndexOutOfRange(format!("sector {seed}")));
    }
    if depth == 0 || depth > bound {
        return Err(Error::TooLarge(format!("depth {depth} outside 1..={bound}")));
    }
    let mut b = Builder::new(an, MAX_PATCH_SECTORS)?;
    let s = b.add_sector(seed, 1, &[])?;
    build_levels(&mut b, depth)?;
    let top = seed_top(&mut b, s);
    b.finish(depth, false, vec![top])
}

fn seed_top(b: &mut Builder, s: usize) -> Ref {
    let (r, o) = b.find_sector((s, 0));
    let t = b.top_slot(r);
    (t.0, t.1 + o)
}

/// A finite piece of the quotient of the dynamic plane of a lifted Γ-cycle by the deck
/// translation along it: the union of the depth-bounded descending sets of the sectors at
/// the top of each vertex of the cycle.
pub fn dual_cycle_patch(an: &Analysis, cycle: &[usize], depth: usize) -> Result<PlanePatch> {
    if !an.gamma.is_closed_walk(cycle) {
        return Err(Error::NotACycle);
    }
    if depth == 0 {
        return Err(Error::TooLarge("depth 0".into()));
    }
    let m = cycle.len();
    let mut b = Builder::new(an, MAX_PATCH_SECTORS)?;
    let vs: Vec<usize> = cycle.iter().map(|&f| b.new_vertex(an.gamma.edges[f].tail)).collect();
    for j in 0..m {
        let next = if j + 1 == m { (vs[0], 1) } else { (vs[j + 1], 0) };
        b.link((vs[j], 0), cycle[j], next);
    }
    b.close()?;
    for &v in &vs {
        let (r, o) = b.find_vertex((v, 0));
        let tet = b.tet_of(r);
        b.add_sector(an.vt.bottom_class(tet), 1, &[(1, (r, o))])?;
    }
    build_levels(&mut b, depth)?;
    b.finish(depth, true, vs.into_iter().map(|v| (v, 0)).collect())
}

/// One outgoing flow edge at a patch vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PhiStep {
    pub head: usize,
    pub offset: i64,
    pub flow_edge: usize,
    pub sector: usize,
}

fn side_pos(an: &Analysis, class: usize, slot: usize) -> Option<(usize, usize)> {
    let sec = &an.sectors[class];
    let len0 = sec.sides[0].len();
    match slot {
        0 => Some((0, 0)),
        1 => None,
        k if k - 1 < len0 => Some((0, k - 1)),
        k => Some((1, k - len0)),
    }
}

/// Flow edges leaving each patch vertex inside the patch, read off the flow graph's own
/// record of which sector and side each edge crosses.
pub fn phi_steps(an: &Analysis, patch: &PlanePatch) -> Result<Vec<Vec<PhiStep>>> {
    let mut origin = BTreeMap::new();
    for (i, o) in an.flow.origins.iter().enumerate() {
        origin.insert((o.tet, an.vt.edge_class(o.tet, o.target_edge), o.side, o.position), i);
    }
    let mut steps = vec![Vec::new(); patch.vertices.len()];
    for (v, pv) in patch.vertices.iter().enumerate() {
        for (&key, &(s, e, slot)) in &pv.corners {
            let class = patch.sectors[s].class;
            let len = |side: usize| an.sectors[class].sides[side].len();
            let Some((side, pos)) = side_pos(an, class, slot) else { continue };
            if key != Corner::SectorBottom && pos + 1 >= len(side) {
                continue;
            }
            let flow_edge = *origin.get(&(pv.tet, class, side, pos)).ok_or_else(|| {
                Error::Internal(format!(
                    "no flow edge from tetrahedron {} through sector {class} side {side} position {pos}",
                    pv.tet
                ))
            })?;
            let (h, ho) = patch.sectors[s].slots[1];
            steps[v].push(PhiStep {
                head: h,
                offset: e + ho,
                flow_edge,
                sector: s,
            });
        }
    }
    Ok(steps)
}

fn vertex_veer(an: &Analysis, tet: usize) -> Veer {
    an.vt.veer(an.vt.top_class(tet))
}

/// Veer pattern of one sector: bottom and both corners share a veer, every other side
/// vertex below the top has the opposite veer.
pub fn sector_veer_violation(an: &Analysis, class: usize) -> Option<String> {
    let sec = &an.sectors[class];
    let base = vertex_veer(an, sec.bottom);
    for side in 0..2 {
        let sv = &sec.side_vertices[side];
        let corner = sv.len() - 2;
        for (pos, &t) in sv.iter().enumerate().take(sv.len() - 1).skip(1) {
            let v = vertex_veer(an, t);
            if (pos == corner) != (v == base) {
                return Some(format!("sector {class} side {side} vertex {pos} (tetrahedron {t})"));
            }
        }
    }
    None
}

pub fn sector_veer_check(an: &Analysis) -> Check {
    check(
        "sector_veer",
        (0..an.sectors.len()).find_map(|c| sector_veer_violation(an, c)),
    )
}

/// Turn pattern of every sector side: branching turns, then one AB turn into the top.
pub fn last_turn_check(an: &Analysis) -> Check {
    let mut witness = None;
    'outer: for (c, sec) in an.sectors.iter().enumerate() {
        for side in 0..2 {
            let s = &sec.sides[side];
            for pos in 1..s.len() {
                let want = if pos + 1 == s.len() {
                    TurnKind::AB
                } else {
                    TurnKind::Branching
                };
                if an.turns.kind(s[pos - 1], s[pos]) != Some(want) {
                    witness = Some(format!("sector {c} side {side} turn {pos}"));
                    break 'outer;
                }
            }
        }
    }
    check("last_turn_ab", witness)
}

/// Incidences of sectors along each patch edge, keyed by (tail vertex, face): sector, offset
/// of the edge in the sector frame, side, position.
fn incidences(an: &Analysis, patch: &PlanePatch) -> BTreeMap<(usize, usize), Vec<(usize, i64, usize, usize)>> {
    let mut inc: BTreeMap<(usize, usize), Vec<(usize, i64, usize, usize)>> = BTreeMap::new();
    for (s, ps) in patch.sectors.iter().enumerate() {
        let sec = &an.sectors[ps.class];
        for side in 0..2 {
            for pos in 0..sec.sides[side].len() {
                let (v, o) = ps.slots[slot_index(an, ps.class, side, pos)];
                inc.entry((v, sec.sides[side][pos])).or_default().push((s, o, side, pos));
            }
        }
    }
    inc
}

/// Structural checks on a patch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatchReport {
    pub vertices: usize,
    pub edges: usize,
    pub sectors: usize,
    pub interior_vertices: usize,
    pub euler_characteristic: i64,
    pub checks: Vec<Check>,
}

impl PatchReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn check_patch(an: &Analysis, patch: &PlanePatch) -> Result<PatchReport> {
    let steps = phi_steps(an, patch)?;
    let mut checks = vec![last_turn_check(an), sector_veer_check(an)];
    checks.push(check(
        "phi_out_degree",
        patch
            .vertices
            .iter()
            .enumerate()
            .find(|(v, pv)| pv.interior && steps[*v].len() != 1)
            .map(|(v, _)| format!("vertex {v} has {} outgoing flow edges", steps[v].len())),
    ));
    checks.push(check("ray_collision", ray_collision_violation(an, patch, &steps)));
    let inc = incidences(an, patch);
    checks.push(check(
        "edge_sheets",
        inc.iter()
            .find(|(_, l)| l.len() > 2 || l.iter().filter(|x| x.3 + 1 == an.sectors[patch.sectors[x.0].class].sides[x.2].len()).count() > 1)
            .map(|(k, _)| format!("edge {k:?} has more than two sectors or two 1-sheeted sides")),
    ));
    if !patch.periodic {
        checks.push(check(
            "euler_characteristic",
            (patch.euler_characteristic() != 1).then(|| format!("V - E + F = {}", patch.euler_characteristic())),
        ));
        let rays = branch_rays(an, patch);
        checks.push(check("descending_boundary", boundary_violation(an, patch, &rays)?));
        checks.push(check(
            "branch_rays_on_boundary",
            rays.1.iter().find(|k| inc.get(k).map_or(0, |l| l.len()) != 1).map(|k| format!("edge {k:?}")),
        ));
    }
    Ok(PatchReport {
        vertices: patch.vertices.len(),
        edges: patch.edges.len(),
        sectors: patch.sectors.len(),
        interior_vertices: patch.interior_count(),
        euler_characteristic: patch.euler_characteristic(),
        checks,
    })
}

/// Flow rays from the ends of a non-final side edge either both enter the sector's top or
/// the second end is the sector's corner and the edge turns AB into the top.
fn ray_collision_violation(an: &Analysis, patch: &PlanePatch, steps: &[Vec<PhiStep>]) -> Option<String> {
    for (s, ps) in patch.sectors.iter().enumerate() {
        let sec = &an.sectors[ps.class];
        let top = ps.slots[1];
        for side in 0..2 {
            let len = sec.sides[side].len();
            for pos in 0..len - 1 {
                let (q, qo) = ps.slots[slot_index(an, ps.class, side, pos)];
                let (r, ro) = ps.slots[slot_index(an, ps.class, side, pos + 1)];
                if !patch.vertices[q].interior || !patch.vertices[r].interior {
                    continue;
                }
                let lands = |v: usize, o: i64| {
                    let st = steps[v][0];
                    (st.head, st.offset + o) == top
                };
                let corner = pos + 2 == len;
                let ok = lands(q, qo)
                    && if corner {
                        !lands(r, ro) && an.turns.kind(sec.sides[side][pos], sec.sides[side][pos + 1]) == Some(TurnKind::AB)
                    } else {
                        lands(r, ro)
                    };
                if !ok {
                    return Some(format!("sector copy {s} side {side} edge {pos}"));
                }
            }
        }
    }
    None
}

/// Vertices and edges (tail, face) on the negative branch rays through the top of the
/// first seed.
fn branch_rays(an: &Analysis, patch: &PlanePatch) -> (BTreeSet<usize>, Vec<(usize, usize)>) {
    let inm = patch.in_map();
    let top = patch.seeds[0].0;
    let mut verts = BTreeSet::from([top]);
    let mut edges = Vec::new();
    let vt = &an.vt;
    for f0 in vt.bottom_faces(patch.vertices[top].tet).map(|f| vt.face_class(patch.vertices[top].tet, f)) {
        let (mut cur, mut f) = (top, f0);
        while let Some(&(tail, _)) = inm.get(&(cur, f)) {
            edges.push((tail, f));
            verts.insert(tail);
            let t = patch.vertices[tail].tet;
            let Some(h) = vt
                .bottom_faces(t)
                .map(|x| vt.face_class(t, x))
                .into_iter()
                .find(|&h| an.turns.branching_successor[h] == f)
            else {
                break;
            };
            cur = tail;
            f = h;
        }
    }
    (verts, edges)
}

fn boundary_violation(
    an: &Analysis,
    patch: &PlanePatch,
    rays: &(BTreeSet<usize>, Vec<(usize, usize)>),
) -> Result<Option<String>> {
    let planes = (0..an.vt.num_tetrahedra())
        .map(|t| local_planes(an, t))
        .collect::<Result<Vec<_>>>()?;
    let occupied = |v: usize, n: usize| -> BTreeSet<Corner> {
        patch.vertices[v]
            .corners
            .iter()
            .filter(|(_, &(s, _, _))| patch.sectors[s].level <= n)
            .map(|(&k, _)| k)
            .collect()
    };
    let interior = |v: usize, n: usize| {
        let occ = occupied(v, n);
        planes[patch.vertices[v].tet].iter().any(|p| p.is_subset(&occ))
    };
    for n in 1..patch.depth.saturating_sub(1) {
        for v in 0..patch.vertices.len() {
            if occupied(v, n).is_empty() || interior(v, n) {
                continue;
            }
            if !interior(v, n + 2) && !rays.0.contains(&v) {
                return Ok(Some(format!("vertex {v} stays on the boundary of level {} off the branch rays", n + 2)));
            }
        }
    }
    Ok(None)
}

/// Descending sets of vertices reached by Γ-paths of length at most `max_distance` into the
/// seed's top embed into the patch: each is rebuilt on its own and matched sector by sector.
pub fn pushdown_check(an: &Analysis, patch: &PlanePatch, max_distance: usize) -> Result<Check> {
    if patch.periodic {
        return Err(Error::Internal("pushdown check needs a plane patch".into()));
    }
    let inm = patch.in_map();
    let top = patch.seeds[0].0;
    let mut dist = BTreeMap::from([(top, 0usize)]);
    let mut queue = VecDeque::from([top]);
    while let Some(v) = queue.pop_front() {
        let d = dist[&v];
        if d == max_distance {
            continue;
        }
        for (&(h, _), &(t, _)) in inm.range((v, 0)..(v + 1, 0)) {
            debug_assert_eq!(h, v);
            if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(t) {
                e.insert(d + 1);
                queue.push_back(t);
            }
        }
    }
    for (&u, &d) in &dist {
        if d == 0 || d + 1 >= patch.depth {
            continue;
        }
        let Some((start, _)) = patch.sector_below(u) else {
            return Ok(check("pushdown", Some(format!("vertex {u} has no sector below it"))));
        };
        let fresh = descending_patch_bounded(an, patch.sectors[start].class, patch.depth - d, patch.depth)?;
        if let Some(w) = embed_violation(an, &fresh, patch, start) {
            return Ok(check("pushdown", Some(format!("from vertex {u}: {w}"))));
        }
    }
    Ok(check("pushdown", None))
}

fn embed_violation(an: &Analysis, small: &PlanePatch, big: &PlanePatch, start: usize) -> Option<String> {
    let seed = small.sector_below(small.seeds[0].0)?.0;
    let mut map = BTreeMap::from([(seed, start)]);
    let mut queue = VecDeque::from([seed]);
    while let Some(f) = queue.pop_front() {
        let p = map[&f];
        let class = small.sectors[f].class;
        if big.sectors[p].class != class {
            return Some(format!("sector classes {} and {} differ", class, big.sectors[p].class));
        }
        let sec = &an.sectors[class];
        for side in 0..2 {
            for pos in 0..sec.sides[side].len() - 1 {
                let (fv, _) = small.slot(an, f, side, pos + 1);
                let Some((fn_, _)) = small.sector_below(fv) else { continue };
                let (pv, _) = big.slot(an, p, side, pos + 1);
                let Some((pn, _)) = big.sector_below(pv) else {
                    return Some(format!("sector copy {p} lacks the sector below side {side} edge {pos}"));
                };
                match map.get(&fn_) {
                    Some(&q) if q != pn => return Some(format!("sector copy {fn_} maps to {q} and {pn}")),
                    Some(_) => {}
                    None => {
                        map.insert(fn_, pn);
                        queue.push_back(fn_);
                    }
                }
            }
        }
    }
    (map.len() != small.sectors.len()).then(|| format!("{} of {} sectors reached", map.len(), small.sectors.len()))
}

/// A maximal chain of stacked sectors, top first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub sectors: Vec<usize>,
    /// Side of each sector through which the chain continues downward.
    pub exit_sides: Vec<usize>,
    /// Whether the top and bottom vertices of every sector below the first share one veer.
    pub uniform_veer: bool,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.sectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sectors.is_empty()
    }
}

fn chain_step(an: &Analysis, patch: &PlanePatch, s: usize, exit: usize) -> Result<Option<(usize, usize)>> {
    let ps = &patch.sectors[s];
    let sec = &an.sectors[ps.class];
    if sec.sides[exit].len() != 2 {
        return Ok(None);
    }
    let (v, o) = patch.slot(an, s, exit, 1);
    let Some((t, e)) = patch.sector_below(v) else { return Ok(None) };
    let face = sec.sides[exit][0];
    let bottom = ps.slots[0];
    let tsec = &an.sectors[patch.sectors[t].class];
    for ts in 0..2 {
        let len = tsec.sides[ts].len();
        let (w, wo) = patch.slot(an, t, ts, len - 1);
        if tsec.sides[ts][len - 1] == face && (w, wo + o + e) == bottom {
            return Ok(Some((t, 1 - ts)));
        }
    }
    Err(Error::Internal(format!("sector copy {t} is not glued along the bottom of sector copy {s}")))
}

/// Maximal chains of the patch; each sector lies in two of them.
pub fn chains(an: &Analysis, patch: &PlanePatch) -> Result<Vec<Chain>> {
    let ns = patch.sectors.len();
    let mut next = BTreeMap::new();
    for s in 0..ns {
        for exit in 0..2 {
            if let Some(n) = chain_step(an, patch, s, exit)? {
                next.insert((s, exit), n);
            }
        }
    }
    let targets: BTreeSet<(usize, usize)> = next.values().copied().collect();
    let mut seen = 0usize;
    let mut out = Vec::new();
    for s in 0..ns {
        for exit in 0..2 {
            if targets.contains(&(s, exit)) {
                continue;
            }
            let mut cur = (s, exit);
            let mut chain = Chain {
                sectors: vec![s],
                exit_sides: vec![exit],
                uniform_veer: true,
            };
            seen += 1;
            while let Some(&n) = next.get(&cur) {
                chain.sectors.push(n.0);
                chain.exit_sides.push(n.1);
                seen += 1;
                cur = n;
                if chain.sectors.len() > ns + 1 {
                    return Err(Error::Internal("chain does not terminate".into()));
                }
            }
            let veers: BTreeSet<Veer> = chain.sectors[1..]
                .iter()
                .flat_map(|&c| [patch.sectors[c].slots[0].0, patch.sectors[c].slots[1].0])
                .map(|v| patch.vertices[v].veer)
                .collect();
            chain.uniform_veer = veers.len() <= 1;
            out.push(chain);
        }
    }
    if seen != 2 * ns {
        return Err(Error::Internal("a chain closes up on itself".into()));
    }
    Ok(out)
}

/// A closed curve in a quotient strip: flow edges or Γ-edges, with its winding degree
/// around the strip.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodicCycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub degree: i64,
}

/// Periodic flow lines, AB lines and orientability of a quotient strip.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StripAnalysis {
    pub depth: usize,
    pub phi_cycles: Vec<PeriodicCycle>,
    pub ab_cycles: Vec<PeriodicCycle>,
    /// `None` until the patch contains a loop around the strip.
    pub orientable: Option<bool>,
}

impl StripAnalysis {
    /// Number of asymptotic classes of flow rays in the plane, counted by the periodic
    /// flow lines.
    pub fn flow_width(&self) -> i64 {
        self.phi_cycles.iter().map(|c| c.degree).sum()
    }

    /// Number of bi-infinite AB strips.
    pub fn strip_count(&self) -> i64 {
        self.ab_cycles.iter().map(|c| c.degree).sum()
    }

    /// Whether the two counts agree and orientability is known.
    pub fn settled(&self) -> bool {
        self.flow_width() >= 1 && self.flow_width() == 1 + self.strip_count() && self.orientable.is_some()
    }
}

/// Cycles of a partial function given as `succ[i] = Some((j, offset))`.
fn functional_cycles(succ: &[Option<(usize, i64)>]) -> Vec<(Vec<usize>, i64)> {
    let n = succ.len();
    let mut state = vec![0u8; n];
    let mut out = Vec::new();
    for s in 0..n {
        let mut path = Vec::new();
        let mut x = s;
        loop {
            if state[x] != 0 {
                break;
            }
            state[x] = 1;
            path.push(x);
            match succ[x] {
                Some((y, _)) => x = y,
                None => break,
            }
        }
        if state[x] == 1 && succ[x].is_some() {
            if let Some(start) = path.iter().position(|&p| p == x) {
                let mut cyc = path[start..].to_vec();
                let m = cyc.iter().enumerate().min_by_key(|(_, &v)| v).map(|(i, _)| i).unwrap_or(0);
                cyc.rotate_left(m);
                let deg = cyc.iter().map(|&c| succ[c].map_or(0, |s| s.1)).sum();
                out.push((cyc, deg));
            }
        }
        for p in path {
            state[p] = 2;
        }
    }
    out.sort();
    out
}

pub fn analyze_strip(an: &Analysis, patch: &PlanePatch) -> Result<StripAnalysis> {
    let steps = phi_steps(an, patch)?;
    let succ: Vec<Option<(usize, i64)>> = steps
        .iter()
        .map(|s| (s.len() == 1).then(|| (s[0].head, s[0].offset)))
        .collect();
    let phi_cycles = functional_cycles(&succ)
        .into_iter()
        .map(|(vs, degree)| PeriodicCycle {
            edges: vs.iter().map(|&v| steps[v][0].flow_edge).collect(),
            vertices: vs,
            degree,
        })
        .collect();
    let out = patch.out_map();
    let esucc: Vec<Option<(usize, i64)>> = patch
        .edges
        .iter()
        .map(|e| {
            out.get(&(e.head, an.turns.ab_successor[e.face]))
                .map(|&(_, _, j)| (j, e.offset))
        })
        .collect();
    let ab_cycles = functional_cycles(&esucc)
        .into_iter()
        .map(|(es, degree)| PeriodicCycle {
            vertices: es.iter().map(|&i| patch.edges[i].tail).collect(),
            edges: es.iter().map(|&i| patch.edges[i].face).collect(),
            degree,
        })
        .collect();
    Ok(StripAnalysis {
        depth: patch.depth,
        phi_cycles,
        ab_cycles,
        orientable: orientability(an, patch)?,
    })
}

/// Orientation character of the translation, from a consistent choice of sector
/// orientations on lifts.
fn orientability(an: &Analysis, patch: &PlanePatch) -> Result<Option<bool>> {
    let inc = incidences(an, patch);
    let mut adj: Vec<Vec<(usize, i64, i8)>> = vec![Vec::new(); patch.sectors.len()];
    for list in inc.values() {
        if list.len() != 2 {
            continue;
        }
        let (a, ao, aside, _) = list[0];
        let (b, bo, bside, _) = list[1];
        let dir = |s: usize| if s == 0 { 1i8 } else { -1 };
        let sign = -dir(aside) * dir(bside);
        adj[a].push((b, ao - bo, sign));
        adj[b].push((a, bo - ao, sign));
    }
    let mut lift: Vec<Option<(i64, i8)>> = vec![None; patch.sectors.len()];
    let mut result = None;
    for root in 0..patch.sectors.len() {
        if lift[root].is_some() {
            continue;
        }
        lift[root] = Some((0, 1));
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            let (la, ea) = lift[a].expect("assigned");
            for &(b, shift, sign) in &adj[a] {
                let cand = (la + shift, ea * sign);
                match lift[b] {
                    None => {
                        lift[b] = Some(cand);
                        queue.push_back(b);
                    }
                    Some((lb, eb)) => {
                        let d = cand.0 - lb;
                        let same = cand.1 == eb;
                        if d % 2 == 0 {
                            if !same {
                                return Err(Error::GluingConflict("sector orientations disagree on a lift".into()));
                            }
                        } else {
                            let o = same;
                            if result.is_some_and(|r| r != o) {
                                return Err(Error::GluingConflict("orientation character is not well defined".into()));
                            }
                            result = Some(o);
                        }
                    }
                }
            }
        }
    }
    Ok(result)
}

/// Outcome of resolving a Γ-cycle inside its dynamic plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Resolution {
    /// A Φ-cycle (flow-graph edges) homotopic to the input.
    FlowCycle { edges: Vec<usize>, class: Vec<i64>, depth: usize },
    /// An AB cycle of odd length (Γ-edges) homotopic to the input.
    OddABCycle { edges: Vec<usize>, class: Vec<i64>, depth: usize },
    DepthExceeded { depth: usize },
}

fn gamma_class(an: &Analysis, cycle: &[usize]) -> Result<Vec<i64>> {
    an.model.class_of_chain(&an.gamma.chain_of(cycle))
}

fn is_ab_cycle(an: &Analysis, cycle: &[usize]) -> bool {
    (0..cycle.len()).all(|i| an.turns.ab_successor[cycle[i]] == cycle[(i + 1) % cycle.len()])
}

fn is_branch_cycle(an: &Analysis, cycle: &[usize]) -> bool {
    (0..cycle.len()).all(|i| an.turns.branching_successor[cycle[i]] == cycle[(i + 1) % cycle.len()])
}

/// Whether a closed walk is a proper power of a shorter one.
fn is_proper_power(edges: &[usize]) -> bool {
    let n = edges.len();
    (1..n).any(|p| n.is_multiple_of(p) && (p..n).all(|i| edges[i] == edges[i - p]))
}

/// Shortest primitive closed Φ-walk of the given class with at most `max_len` edges, least
/// in rotation-normalized lexicographic order among those of that length.
fn shortest_closed_walk(an: &Analysis, class: &[i64], max_len: usize) -> Option<Vec<usize>> {
    let phi = an.phi();
    let labels: Vec<Vec<i64>> = phi.edges.iter().map(|e| an.model.project(&e.chain)).collect();
    fn extend(
        phi: &crate::graphs::LabeledDigraph,
        labels: &[Vec<i64>],
        class: &[i64],
        len: usize,
        walk: &mut Vec<usize>,
        sum: &mut Vec<i64>,
    ) -> bool {
        let first = walk[0];
        let at = phi.edges[*walk.last().unwrap()].head;
        if walk.len() == len {
            return at == phi.edges[first].tail && sum.as_slice() == class && !is_proper_power(walk) && {
                // canonical rotation: no rotation is lexicographically smaller
                (1..len).all(|r| walk[r..].iter().chain(&walk[..r]).cmp(walk.iter()) != std::cmp::Ordering::Less)
            };
        }
        for e in phi.out_edges(at).filter(|&e| e >= first) {
            walk.push(e);
            sum.iter_mut().zip(&labels[e]).for_each(|(a, b)| *a += b);
            if extend(phi, labels, class, len, walk, sum) {
                return true;
            }
            sum.iter_mut().zip(&labels[e]).for_each(|(a, b)| *a -= b);
            walk.pop();
        }
        false
    }
    for len in 1..=max_len {
        for first in 0..phi.edges.len() {
            let mut walk = vec![first];
            let mut sum = labels[first].clone();
            if extend(phi, &labels, class, len, &mut walk, &mut sum) {
                return Some(walk);
            }
        }
    }
    None
}

/// A branch curve has no dynamic plane. Its Φ-cycle is the shortest simple Φ-cycle of the
/// same class, or failing that the shortest primitive closed Φ-walk of that class, up to
/// `max_len` edges.
fn branch_flow_cycle(an: &Analysis, cycle: &[usize], class: &[i64], max_len: usize) -> Result<Resolution> {
    debug_assert!(is_branch_cycle(an, cycle));
    let phi = an.phi();
    let mut found: Vec<Vec<usize>> = Vec::new();
    for edges in crate::graphs::simple_cycles(phi, max_len, MAX_PATCH_SECTORS)? {
        if an.model.class_of_chain(&phi.chain_of(&edges))? == class {
            found.push(edges);
        }
    }
    let best = found
        .into_iter()
        .map(|mut e| {
            let m = (0..e.len()).min_by_key(|&i| e[i]).unwrap_or(0);
            e.rotate_left(m);
            e
        })
        .min_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)))
        .or_else(|| shortest_closed_walk(an, class, max_len));
    Ok(match best {
        Some(edges) => Resolution::FlowCycle { depth: edges.len(), edges, class: class.to_vec() },
        None => Resolution::DepthExceeded { depth: max_len },
    })
}

/// Finds a Φ-cycle homotopic to the Γ-cycle, or an odd AB cycle when the quotient of its
/// dynamic plane is a Möbius band of even width.
pub fn resolve_dual_cycle(an: &Analysis, cycle: &[usize], max_depth: usize) -> Result<Resolution> {
    if !an.gamma.is_closed_walk(cycle) {
        return Err(Error::NotACycle);
    }
    let class = gamma_class(an, cycle)?;
    if cycle.len() % 2 == 1 && is_ab_cycle(an, cycle) {
        return Ok(Resolution::OddABCycle {
            edges: cycle.to_vec(),
            class,
            depth: 0,
        });
    }
    if is_branch_cycle(an, cycle) {
        return branch_flow_cycle(an, cycle, &class, max_depth);
    }
    for depth in 1..=max_depth {
        let patch = dual_cycle_patch(an, cycle, depth)?;
        let strip = analyze_strip(an, &patch)?;
        if let Some(c) = strip.phi_cycles.iter().find(|c| c.degree == 1) {
            let found = an.model.class_of_chain(&an.phi().chain_of(&c.edges))?;
            if found != class {
                return Err(Error::Internal(format!(
                    "flow cycle class {found:?} differs from dual cycle class {class:?}"
                )));
            }
            let mut edges = c.edges.clone();
            let m = (0..edges.len()).min_by_key(|&i| edges[i]).unwrap_or(0);
            edges.rotate_left(m);
            return Ok(Resolution::FlowCycle { edges, class, depth });
        }
        if strip.settled() && strip.orientable == Some(false) {
            if let Some(c) = strip.ab_cycles.iter().find(|c| c.degree == 1 && c.edges.len() % 2 == 1) {
                let found = gamma_class(an, &c.edges)?;
                if found != class {
                    return Err(Error::Internal(format!(
                        "AB cycle class {found:?} differs from dual cycle class {class:?}"
                    )));
                }
                let mut edges = c.edges.clone();
                let m = (0..edges.len()).min_by_key(|&i| edges[i]).unwrap_or(0);
                edges.rotate_left(m);
                return Ok(Resolution::OddABCycle { edges, class, depth });
            }
        }
    }
    Ok(Resolution::DepthExceeded { depth: max_depth })
}

/// Width of the dynamic plane of a Γ-cycle with the cross-checks that accompany it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum WidthOutcome {
    Width {
        width: i64,
        ab_strips: i64,
        orientable: bool,
        ab_parity: usize,
        delta_tau: usize,
        depth: usize,
        phi_degrees: Vec<i64>,
        ab_degrees: Vec<i64>,
    },
    DepthExceeded { depth: usize },
}

/// Number of asymptotic classes of flow rays in the dynamic plane of a Γ-cycle, accepted
/// once two consecutive depths agree and both counting routes match.
pub fn strip_width(an: &Analysis, cycle: &[usize], max_depth: usize) -> Result<WidthOutcome> {
    if an.gamma.is_closed_walk(cycle) && is_branch_cycle(an, cycle) {
        return Err(Error::BranchCurve);
    }
    let ab_parity = crate::graphs::ab_parity(&an.vt, &an.turns, cycle)?;
    let mut prev: Option<StripAnalysis> = None;
    for depth in 1..=max_depth {
        let patch = dual_cycle_patch(an, cycle, depth)?;
        let strip = analyze_strip(an, &patch)?;
        if let Some(p) = &prev {
            let degs = |s: &StripAnalysis| {
                (
                    s.phi_cycles.iter().map(|c| c.degree).collect::<Vec<_>>(),
                    s.ab_cycles.iter().map(|c| c.degree).collect::<Vec<_>>(),
                    s.orientable,
                )
            };
            if p.settled() && strip.settled() && degs(p) == degs(&strip) {
                return Ok(WidthOutcome::Width {
                    width: strip.flow_width(),
                    ab_strips: strip.strip_count(),
                    orientable: strip.orientable.expect("settled"),
                    ab_parity,
                    delta_tau: delta_tau(&an.vt),
                    depth,
                    phi_degrees: degs(&strip).0,
                    ab_degrees: degs(&strip).1,
                });
            }
        }
        prev = Some(strip);
    }
    Ok(WidthOutcome::DepthExceeded { depth: max_depth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{infer_veers, parse_taut_isosig};

    fn analysis(sig: &str) -> Analysis {
        Analysis::new(infer_veers(&parse_taut_isosig(sig).unwrap()).unwrap()).unwrap()
    }

    fn branch_cycle(an: &Analysis) -> Vec<usize> {
        let mut seen = vec![0usize];
        loop {
            let next = an.turns.branching_successor[*seen.last().unwrap()];
            if let Some(i) = seen.iter().position(|&e| e == next) {
                return seen[i..].to_vec();
            }
            seen.push(next);
        }
    }

    #[test]
    fn single_sector_patch() {
        let an = analysis("cPcbbbiht_12");
        let p = descending_patch(&an, 0, 1).unwrap();
        assert_eq!(p.sectors.len(), 1);
        assert_eq!(p.vertices.len(), builder::slot_count(&an, 0));
        assert_eq!(p.euler_characteristic(), 1);
        assert!(check_patch(&an, &p).unwrap().all_passed());
    }

    #[test]
    fn levels_grow() {
        let an = analysis("cPcbbbiht_12");
        let p = descending_patch(&an, 0, 4).unwrap();
        let mut per_level = [0usize; 5];
        for s in &p.sectors {
            per_level[s.level] += 1;
        }
        assert_eq!(per_level[1..], [1, 4, 11, 28]);
        assert_eq!(p.euler_characteristic(), 1);
        let report = check_patch(&an, &p).unwrap();
        assert!(report.all_passed(), "{:?}", report.checks);
        assert!(pushdown_check(&an, &p, 2).unwrap().passed);
        assert!(chains(&an, &p).unwrap().iter().all(|c| c.len() < delta_tau(&an.vt)));
        let json = p.to_json();
        assert_eq!(json["sectors"].as_array().unwrap().len(), p.sectors.len());
    }

    #[test]
    fn argument_checks() {
        let an = analysis("cPcbbbiht_12");
        assert!(matches!(descending_patch(&an, 99, 2), Err(Error::IndexOutOfRange(_))));
        assert!(matches!(descending_patch(&an, 0, 0), Err(Error::TooLarge(_))));
        assert!(matches!(descending_patch(&an, 0, DEFAULT_DEPTH_BOUND + 1), Err(Error::TooLarge(_))));
        let open = vec![an.gamma.out_edges(0).next().unwrap()];
        if !an.gamma.is_closed_walk(&open) {
            assert!(matches!(resolve_dual_cycle(&an, &open, 4), Err(Error::NotACycle)));
            assert!(matches!(dual_cycle_patch(&an, &open, 2), Err(Error::NotACycle)));
        }
    }

    #[test]
    fn turn_checks_pass_on_fixtures() {
        for sig in ["cPcbbbiht_12", "dLQacccjsnk_200", "fLAMcaccdeejsnaxk_20010"] {
            let an = analysis(sig);
            assert!(sector_veer_check(&an).passed, "{sig}");
            assert!(last_turn_check(&an).passed, "{sig}");
        }
    }

    #[test]
    fn branch_curves_resolve_by_class_only() {
        let an = analysis("eLMkbcddddedde_2100");
        let cycle = branch_cycle(&an);
        assert!(matches!(strip_width(&an, &cycle, 4), Err(Error::BranchCurve)));
        let class = gamma_class(&an, &cycle).unwrap();
        match resolve_dual_cycle(&an, &cycle, DEFAULT_DEPTH_BOUND).unwrap() {
            Resolution::FlowCycle { edges, class: c, depth } => {
                assert_eq!(c, class);
                assert_eq!(depth, edges.len());
                assert!(an.phi().is_closed_walk(&edges));
                assert_eq!(an.model.class_of_chain(&an.phi().chain_of(&edges)).unwrap(), class);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn proper_powers() {
        assert!(is_proper_power(&[1, 2, 1, 2]));
        assert!(is_proper_power(&[3, 3, 3]));
        assert!(!is_proper_power(&[1, 2, 1]));
        assert!(!is_proper_power(&[4]));
    }

    #[test]
    fn periodic_patch_of_a_short_cycle() {
        let an = analysis("dLQacccjsnk_200");
        let cycles = crate::graphs::simple_cycles(&an.gamma, 4, 1000).unwrap();
        let c = cycles.iter().find(|c| !is_branch_cycle(&an, c)).unwrap();
        let p = dual_cycle_patch(&an, c, 3).unwrap();
        assert!(p.periodic);
        assert_eq!(p.seeds.len(), c.len());
        match strip_width(&an, c, 10).unwrap() {
            WidthOutcome::Width { width, orientable, ab_parity, .. } => {
                assert!(width >= 1 && width as usize <= delta_tau(&an.vt));
                assert_eq!(orientable, ab_parity == 0);
            }
            WidthOutcome::DepthExceeded { depth } => panic!("unsettled at {depth}"),
        }
    }
}
