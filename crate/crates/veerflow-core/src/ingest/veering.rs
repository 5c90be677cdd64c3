use super::raw::{RawTriangulation, Veer};
use crate::error::{Error, Result};
use crate::kernel::{self, EdgeStar};
use crate::perm::{pair_edges, pair_of_edge, EDGE_VERTICES};
use std::collections::VecDeque;

/// A taut ideal triangulation with transverse coorientation and veer labels.
///
/// Edge and face classes are numbered in order of their lexicographically least
/// `(tetrahedron, index)` representative.
#[derive(Clone, Debug)]
pub struct VeeringTriangulation {
    raw: RawTriangulation,
    orientation: Vec<i8>,
    edge_class: Vec<[usize; 6]>,
    edge_reps: Vec<(usize, usize)>,
    face_class: Vec<[usize; 4]>,
    face_reps: Vec<(usize, usize)>,
    top: Vec<usize>,
    bottom: Vec<usize>,
    veer: Vec<Veer>,
    stars: Vec<EdgeStar>,
}

/// Builds the veering structure, failing on any violated invariant.
pub fn infer_veers(raw: &RawTriangulation) -> Result<VeeringTriangulation> {
    let vt = infer_veers_unchecked(raw)?;
    let report = super::validate_veering(&vt);
    if let Some(check) = report.checks.iter().find(|c| !c.passed) {
        return Err(Error::NotVeering(format!(
            "{}: {}",
            check.name,
            check.witness.clone().unwrap_or_default()
        )));
    }
    Ok(vt)
}

/// Builds orientation, classes, coorientation, veers and edge stars, failing only when
/// one of them cannot be defined. Remaining invariants are left to `validate_veering`.
pub fn infer_veers_unchecked(raw: &RawTriangulation) -> Result<VeeringTriangulation> {
    let n = raw.num_tetrahedra();
    let orientation = orient(raw)?;
    let (edge_class, edge_reps) = edge_classes(raw);
    let (face_class, face_reps) = face_classes(raw);

    let mut pi_count = vec![0usize; edge_reps.len()];
    for t in 0..n {
        let (e1, e2) = pair_edges(raw.taut(t));
        pi_count[edge_class[t][e1]] += 1;
        pi_count[edge_class[t][e2]] += 1;
    }
    if let Some(e) = pi_count.iter().position(|&c| c != 2) {
        return Err(Error::NotTaut(format!(
            "edge class {e} carries angle π in {} tetrahedra",
            pi_count[e]
        )));
    }

    let (top, bottom) = coorient(raw)?;

    let mut veer: Vec<Option<Veer>> = vec![None; edge_reps.len()];
    for t in 0..n {
        let d = raw.taut(t);
        let (left, right) = if orientation[t] > 0 {
            ((d + 1) % 3, (d + 2) % 3)
        } else {
            ((d + 2) % 3, (d + 1) % 3)
        };
        for (pair, label) in [(left, Veer::Left), (right, Veer::Right)] {
            let (e1, e2) = pair_edges(pair);
            for e in [e1, e2] {
                let c = edge_class[t][e];
                match veer[c] {
                    Some(v) if v != label => {
                        return Err(Error::NotVeering(format!(
                            "edge class {c} is forced to veer both ways (tetrahedron {t})"
                        )))
                    }
                    _ => veer[c] = Some(label),
                }
            }
        }
    }
    let veer: Vec<Veer> = veer
        .into_iter()
        .enumerate()
        .map(|(c, v)| {
            v.ok_or_else(|| Error::NotVeering(format!("edge class {c} has no equatorial position")))
        })
        .collect::<Result<_>>()?;
    if let Some(declared) = raw.declared_veers() {
        if declared.len() != veer.len() {
            return Err(Error::IndexOutOfRange(format!(
                "{} veers declared for {} edge classes",
                declared.len(),
                veer.len()
            )));
        }
        if let Some(c) = (0..veer.len()).find(|&c| declared[c] != veer[c]) {
            return Err(Error::NotVeering(format!(
                "declared veer of edge class {c} contradicts the taut structure"
            )));
        }
    }

    let mut vt = VeeringTriangulation {
        raw: raw.clone(),
        orientation,
        edge_class,
        edge_reps,
        face_class,
        face_reps,
        top,
        bottom,
        veer,
        stars: Vec::new(),
    };
    vt.stars = kernel::compute_stars(&vt)?;
    Ok(vt)
}

fn orient(raw: &RawTriangulation) -> Result<Vec<i8>> {
    let n = raw.num_tetrahedra();
    let mut sign = vec![0i8; n];
    sign[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        for f in 0..4 {
            let g = raw.gluing(t, f);
            let s = -(g.perm.sign() as i8) * sign[t];
            if sign[g.tet] == 0 {
                sign[g.tet] = s;
                queue.push_back(g.tet);
            } else if sign[g.tet] != s {
                return Err(Error::NotOrientable);
            }
        }
    }
    if sign.contains(&0) {
        return Err(Error::IndexOutOfRange("triangulation is disconnected".into()));
    }
    Ok(sign)
}

fn union_classes<const K: usize>(
    n: usize,
    links: impl Iterator<Item = ((usize, usize), (usize, usize))>,
) -> (Vec<[usize; K]>, Vec<(usize, usize)>) {
    let mut parent: Vec<usize> = (0..n * K).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for ((t1, i1), (t2, i2)) in links {
        let a = find(&mut parent, t1 * K + i1);
        let b = find(&mut parent, t2 * K + i2);
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
    }
    let mut id = vec![usize::MAX; n * K];
    let mut reps = Vec::new();
    let mut classes = vec![[0usize; K]; n];
    for x in 0..n * K {
        let r = find(&mut parent, x);
        if id[r] == usize::MAX {
            id[r] = reps.len();
            reps.push((x / K, x % K));
        }
        classes[x / K][x % K] = id[r];
    }
    (classes, reps)
}

fn edge_classes(raw: &RawTriangulation) -> (Vec<[usize; 6]>, Vec<(usize, usize)>) {
    let n = raw.num_tetrahedra();
    let mut links = Vec::new();
    for t in 0..n {
        for f in 0..4 {
            let g = raw.gluing(t, f);
            for (e, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
                if a != f && b != f {
                    let e2 = crate::perm::edge_between(g.perm.apply(a), g.perm.apply(b));
                    links.push(((t, e), (g.tet, e2)));
                }
            }
        }
    }
    union_classes::<6>(n, links.into_iter())
}

fn face_classes(raw: &RawTriangulation) -> (Vec<[usize; 4]>, Vec<(usize, usize)>) {
    let n = raw.num_tetrahedra();
    let links = (0..n).flat_map(|t| {
        (0..4).map(move |f| {
            let g = raw.gluing(t, f);
            ((t, f), (g.tet, g.perm.apply(f)))
        })
    });
    union_classes::<4>(n, links)
}

/// Chooses top and bottom π-edges so that every face is a top face on exactly one side.
/// Tetrahedron 0 has the π-edge through its vertex 0 at the bottom.
fn coorient(raw: &RawTriangulation) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = raw.num_tetrahedra();
    let mut top: Vec<Option<usize>> = vec![None; n];
    let (e1, e2) = pair_edges(raw.taut(0));
    top[0] = Some(if EDGE_VERTICES[e1].0 == 0 { e2 } else { e1 });
    let mut queue = VecDeque::from([0usize]);
    while let Some(t) = queue.pop_front() {
        let top_t = top[t].expect("assigned before queueing");
        let (a, b) = EDGE_VERTICES[top_t];
        for f in 0..4 {
            let g = raw.gluing(t, f);
            let face_is_top = f != a && f != b;
            let v = g.perm.apply(f);
            let (p1, p2) = pair_edges(raw.taut(g.tet));
            let contains = |e: usize| EDGE_VERTICES[e].0 == v || EDGE_VERTICES[e].1 == v;
            // A top face on one side is a bottom face, i.e. opposite a top-edge vertex, on the other.
            let required = if face_is_top == contains(p1) { p1 } else { p2 };
            debug_assert!(contains(p1) != contains(p2));
            match top[g.tet] {
                None => {
                    top[g.tet] = Some(required);
                    queue.push_back(g.tet);
                }
                Some(x) if x != required => {
                    return Err(Error::NotTaut(format!(
                        "no transverse coorientation (tetrahedron {} face {})",
                        g.tet, v
                    )))
                }
                _ => {}
            }
        }
    }
    let top: Vec<usize> = top.into_iter().map(|x| x.expect("connected")).collect();
    let bottom = top.iter().map(|&e| 5 - e).collect();
    Ok((top, bottom))
}

impl VeeringTriangulation {
    pub fn raw(&self) -> &RawTriangulation {
        &self.raw
    }

    pub fn num_tetrahedra(&self) -> usize {
        self.raw.num_tetrahedra()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_reps.len()
    }

    pub fn num_faces(&self) -> usize {
        self.face_reps.len()
    }

    /// `+1` or `-1` according to the orientation induced from tetrahedron 0.
    pub fn orientation(&self, tet: usize) -> i8 {
        self.orientation[tet]
    }

    pub fn edge_class(&self, tet: usize, edge: usize) -> usize {
        self.edge_class[tet][edge]
    }

    pub fn edge_rep(&self, class: usize) -> (usize, usize) {
        self.edge_reps[class]
    }

    pub fn face_class(&self, tet: usize, face: usize) -> usize {
        self.face_class[tet][face]
    }

    pub fn face_rep(&self, class: usize) -> (usize, usize) {
        self.face_reps[class]
    }

    /// Index in `0..6` of the top π-edge of `tet`.
    pub fn top_edge(&self, tet: usize) -> usize {
        self.top[tet]
    }

    pub fn bottom_edge(&self, tet: usize) -> usize {
        self.bottom[tet]
    }

    pub fn top_class(&self, tet: usize) -> usize {
        self.edge_class[tet][self.top[tet]]
    }

    pub fn bottom_class(&self, tet: usize) -> usize {
        self.edge_class[tet][self.bottom[tet]]
    }

    /// Whether face `face` of `tet` lies on the top of `tet` (it contains the top edge).
    pub fn is_top_face(&self, tet: usize, face: usize) -> bool {
        let (a, b) = EDGE_VERTICES[self.top[tet]];
        face != a && face != b
    }

    /// The two top faces of `tet` in increasing order.
    pub fn top_faces(&self, tet: usize) -> [usize; 2] {
        let (c, d) = EDGE_VERTICES[self.bottom[tet]];
        [c, d]
    }

    pub fn bottom_faces(&self, tet: usize) -> [usize; 2] {
        let (a, b) = EDGE_VERTICES[self.top[tet]];
        [a, b]
    }

    pub fn veer(&self, class: usize) -> Veer {
        self.veer[class]
    }

    pub fn veers(&self) -> &[Veer] {
        &self.veer
    }

    /// Whether tetrahedron edge `edge` carries angle π.
    pub fn is_pi_edge(&self, tet: usize, edge: usize) -> bool {
        pair_of_edge(edge) == self.raw.taut(tet)
    }

    pub fn stars(&self) -> &[EdgeStar] {
        &self.stars
    }

    pub fn star(&self, class: usize) -> &EdgeStar {
        &self.stars[class]
    }

    /// Tetrahedron whose bottom edge is `class` (top vertex of its sector).
    pub fn tet_above(&self, class: usize) -> usize {
        self.stars[class].top_tet
    }

    /// Tetrahedron whose top edge is `class` (bottom vertex of its sector).
    pub fn tet_below(&self, class: usize) -> usize {
        self.stars[class].bottom_tet
    }

    pub fn degree(&self, class: usize) -> usize {
        (0..self.num_tetrahedra())
            .map(|t| (0..6).filter(|&e| self.edge_class[t][e] == class).count())
            .sum()
    }
}
