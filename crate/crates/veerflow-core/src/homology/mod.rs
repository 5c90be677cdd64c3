//! Homology of the dual 2-complex: vertices are tetrahedra, edges are faces (Γ-edges),
//! 2-cells are sectors.

pub mod snf;

use crate::error::{Error, Result};
use crate::graphs::{dual_graph, sectors};
use crate::ingest::VeeringTriangulation;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use snf::{integer_kernel, mat_mul, smith_normal_form, Matrix};
use std::collections::VecDeque;

/// Chain complex data, a basis of H¹ and the projection of 1-cycles onto `Z^b`.
#[derive(Clone, Debug, Serialize)]
pub struct HomologyModel {
    pub num_tetrahedra: usize,
    pub num_faces: usize,
    /// `d1[t][f]`: coefficient of tetrahedron `t` in the boundary of face `f`.
    pub d1: Vec<Vec<i64>>,
    /// `d2[f][s]`: coefficient of face `f` in the boundary of sector `s` (side 0 minus side 1).
    pub d2: Vec<Vec<i64>>,
    pub betti: usize,
    /// Torsion coefficients of H₁.
    pub torsion: Vec<String>,
    /// Faces of the spanning tree of Γ used to normalize cocycles.
    pub tree_faces: Vec<usize>,
    /// Integer cocycles `φ_1..φ_b` forming a basis of H¹, each vanishing on the tree.
    pub basis: Vec<Vec<i64>>,
    /// Integer 1-cycles `z_1..z_b` with `φ_i(z_j) = δ_ij`.
    pub section: Vec<Vec<i64>>,
}

fn to_big(m: &[Vec<i64>]) -> Matrix<BigInt> {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("homology data fits in i64")
}

/// Builds the chain complex, a cocycle basis normalized on a spanning tree, and a section.
pub fn build_homology(vt: &VeeringTriangulation) -> Result<HomologyModel> {
    let gamma = dual_graph(vt);
    let secs = sectors(vt);
    let n = vt.num_tetrahedra();
    let nf = vt.num_faces();
    let ns = secs.len();

    let mut d1 = vec![vec![0i64; nf]; n];
    for (f, e) in gamma.edges.iter().enumerate() {
        d1[e.head][f] += 1;
        d1[e.tail][f] -= 1;
    }
    let mut d2 = vec![vec![0i64; ns]; nf];
    for (s, sec) in secs.iter().enumerate() {
        for &f in &sec.sides[0] {
            d2[f][s] += 1;
        }
        for &f in &sec.sides[1] {
            d2[f][s] -= 1;
        }
    }
    for t in 0..n {
        for s in 0..ns {
            let x: i64 = (0..nf).map(|f| d1[t][f] * d2[f][s]).sum();
            if x != 0 {
                return Err(Error::Internal("boundary of a sector is not a cycle".into()));
            }
        }
    }

    // spanning tree of Γ, ignoring directions; potential[v] = tree path chain root -> v
    let mut potential: Vec<Option<Vec<i64>>> = vec![None; n];
    potential[0] = Some(vec![0; nf]);
    let mut tree_faces = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for (f, e) in gamma.edges.iter().enumerate() {
            let (w, sign) = if e.tail == v {
                (e.head, 1)
            } else if e.head == v {
                (e.tail, -1)
            } else {
                continue;
            };
            if potential[w].is_none() {
                let mut p = potential[v].clone().expect("visited");
                p[f] += sign;
                potential[w] = Some(p);
                tree_faces.push(f);
                queue.push_back(w);
            }
        }
    }
    let potential: Vec<Vec<i64>> = potential
        .into_iter()
        .map(|p| p.ok_or_else(|| Error::Internal("Γ is disconnected".into())))
        .collect::<Result<_>>()?;
    tree_faces.sort();
    let free: Vec<usize> = (0..nf).filter(|f| !tree_faces.contains(f)).collect();

    // cocycle condition on the free faces: one row per sector
    let m: Vec<Vec<i64>> = (0..ns)
        .map(|s| free.iter().map(|&f| d2[f][s]).collect())
        .collect();
    let kernel = integer_kernel(&to_big(&m), ns, free.len());
    let basis: Vec<Vec<i64>> = kernel
        .iter()
        .map(|k| {
            let mut phi = vec![0i64; nf];
            for (i, &f) in free.iter().enumerate() {
                phi[f] = to_i64(&k[i]);
            }
            phi
        })
        .collect();
    let b = basis.len();

    let s2 = smith_normal_form(&to_big(&d2), nf, ns);
    if nf - (n - 1) - s2.rank != b {
        return Err(Error::Internal("betti number mismatch between chain and cochain sides".into()));
    }
    let torsion: Vec<String> = s2
        .diagonal
        .iter()
        .filter(|x| !x.is_zero() && !x.is_one())
        .map(|x| x.to_string())
        .collect();

    // fundamental cycles of the free faces and a section of the projection onto Z^b
    let fundamental: Vec<Vec<i64>> = free
        .iter()
        .map(|&f| {
            let e = &gamma.edges[f];
            let mut c = vec![0i64; nf];
            c[f] += 1;
            for g in 0..nf {
                c[g] += potential[e.tail][g] - potential[e.head][g];
            }
            c
        })
        .collect();
    let mut section = vec![vec![0i64; nf]; b];
    if b > 0 {
        let pt: Matrix<BigInt> = (0..b)
            .map(|i| free.iter().map(|&f| BigInt::from(basis[i][f])).collect())
            .collect();
        let s = smith_normal_form(&pt, b, free.len());
        if s.rank != b || s.diagonal.iter().any(|x| !x.is_one()) {
            return Err(Error::Internal("cycle classes do not span Z^b".into()));
        }
        let vb: Matrix<BigInt> = s.v.iter().map(|row| row[..b].to_vec()).collect();
        let w = mat_mul(&vb, &s.u, b, b);
        for (k, cyc) in fundamental.iter().enumerate() {
            for j in 0..b {
                let c = to_i64(&w[k][j]);
                if c != 0 {
                    for g in 0..nf {
                        section[j][g] += c * cyc[g];
                    }
                }
            }
        }
    }
    let model = HomologyModel {
        num_tetrahedra: n,
        num_faces: nf,
        d1,
        d2,
        betti: b,
        torsion,
        tree_faces,
        basis,
        section,
    };
    for i in 0..b {
        for j in 0..b {
            if dot(&model.basis[i], &model.section[j]) != i64::from(i == j) {
                return Err(Error::Internal("section is not dual to the cocycle basis".into()));
            }
        }
    }
    Ok(model)
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl HomologyModel {
    pub fn is_cycle(&self, chain: &[i64]) -> bool {
        self.d1.iter().all(|row| dot(row, chain) == 0)
    }

    /// Class in `Z^b` of a 1-cycle.
    pub fn class_of_chain(&self, chain: &[i64]) -> Result<Vec<i64>> {
        if chain.len() != self.num_faces {
            return Err(Error::DimensionMismatch(format!(
                "chain of length {} over {} faces",
                chain.len(),
                self.num_faces
            )));
        }
        if !self.is_cycle(chain) {
            return Err(Error::NotACycle);
        }
        Ok(self.project(chain))
    }

    /// Evaluation of the cocycle basis on any chain. On cycles this is the homology class;
    /// on other chains it is the tree-gauged label used by the Perron matrix.
    pub fn project(&self, chain: &[i64]) -> Vec<i64> {
        self.basis.iter().map(|phi| dot(phi, chain)).collect()
    }

    /// Coordinates of a cocycle's cohomology class in the dual basis: `ξ(z_j)`.
    pub fn cocycle_coordinates(&self, cocycle: &Cocycle) -> Vec<i64> {
        self.section.iter().map(|z| pair(cocycle, z)).collect()
    }

    /// Integer cocycle with the given coordinates, built from the basis.
    pub fn cocycle_from_coordinates(&self, coords: &[i64]) -> Cocycle {
        let mut w = vec![0i64; self.num_faces];
        for (phi, &x) in self.basis.iter().zip(coords) {
            for (a, b) in w.iter_mut().zip(phi) {
                *a += x * b;
            }
        }
        Cocycle { weights: w }
    }

    /// Whether face weights satisfy the matching condition across every sector.
    pub fn satisfies_matching(&self, weights: &[i64]) -> bool {
        weights.len() == self.num_faces
            && (0..self.d2.first().map_or(0, |r| r.len()))
                .all(|s| (0..self.num_faces).map(|f| self.d2[f][s] * weights[f]).sum::<i64>() == 0)
    }
}

/// Integer weights on face classes satisfying the matching condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cocycle {
    pub weights: Vec<i64>,
}

impl Cocycle {
    /// Checks length and the matching condition.
    pub fn new(model: &HomologyModel, weights: Vec<i64>) -> Result<Self> {
        if weights.len() != model.num_faces {
            return Err(Error::InvalidCocycle(format!(
                "{} weights for {} faces",
                weights.len(),
                model.num_faces
            )));
        }
        if let Some(s) = (0..model.d2.first().map_or(0, |r| r.len()))
            .find(|&s| (0..model.num_faces).map(|f| model.d2[f][s] * weights[f]).sum::<i64>() != 0)
        {
            return Err(Error::InvalidCocycle(format!("matching condition fails at edge class {s}")));
        }
        Ok(Cocycle { weights })
    }

    pub fn zero(model: &HomologyModel) -> Self {
        Cocycle {
            weights: vec![0; model.num_faces],
        }
    }

    /// Parses a JSON object mapping face ids to integers (missing faces are 0), or an array.
    pub fn from_json(model: &HomologyModel, text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
        let mut w = vec![0i64; model.num_faces];
        match value {
            serde_json::Value::Object(map) => {
                for (k, v) in map {
                    let f: usize = k
                        .trim_start_matches('f')
                        .parse()
                        .map_err(|_| Error::Json(format!("face id `{k}` is not an integer")))?;
                    if f >= model.num_faces {
                        return Err(Error::IndexOutOfRange(format!("face {f} of {}", model.num_faces)));
                    }
                    w[f] = v
                        .as_i64()
                        .ok_or_else(|| Error::Json(format!("weight of face {k} is not an integer")))?;
                }
            }
            serde_json::Value::Array(items) => {
                if items.len() != model.num_faces {
                    return Err(Error::InvalidCocycle(format!(
                        "{} weights for {} faces",
                        items.len(),
                        model.num_faces
                    )));
                }
                for (slot, v) in w.iter_mut().zip(items) {
                    *slot = v.as_i64().ok_or_else(|| Error::Json("weight is not an integer".into()))?;
                }
            }
            _ => return Err(Error::Json("expected an object or array of face weights".into())),
        }
        Cocycle::new(model, w)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0)
            .map(|(f, &w)| (f.to_string(), serde_json::Value::from(w)))
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn scaled(&self, k: i64) -> Cocycle {
        Cocycle {
            weights: self.weights.iter().map(|w| w * k).collect(),
        }
    }

    pub fn add(&self, other: &Cocycle) -> Cocycle {
        Cocycle {
            weights: self.weights.iter().zip(&other.weights).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.weights.iter().all(|&w| w >= 0)
    }
}

/// `Σ_f weight(f) · chain(f)`.
pub fn pair(cocycle: &Cocycle, chain: &[i64]) -> i64 {
    dot(&cocycle.weights, chain)
}
