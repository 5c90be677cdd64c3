//! Parsing of triangulations and inference of their veering structure.

mod isosig;
mod raw;
mod veering;
mod vtg;

pub use isosig::{encode_isosig, encode_taut_isosig, parse_isosig, parse_taut_isosig};
pub use raw::{Gluing, RawTriangulation, Veer};
pub use veering::{infer_veers, infer_veers_unchecked, VeeringTriangulation};
pub use vtg::{parse_native, serialize_native, serialize_raw};

use crate::kernel::delta_tau;
use crate::perm::{pair_edges, pair_of_edge};
use serde::Serialize;

/// Outcome of one invariant check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub witness: Option<String>,
}

/// Diagnostic report over the invariants of a veering triangulation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub delta_tau: usize,
    pub fan_lengths: Vec<(usize, usize)>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub(crate) fn check(name: &'static str, witness: Option<String>) -> Check {
    Check {
        name,
        passed: witness.is_none(),
        witness,
    }
}

/// Re-derives every invariant of `vt` and lists pass/fail with a witness on failure.
pub fn validate_veering(vt: &VeeringTriangulation) -> ValidationReport {
    let n = vt.num_tetrahedra();
    let ne = vt.num_edges();
    let mut pi = vec![0usize; ne];
    let mut tops = vec![0usize; ne];
    let mut bottoms = vec![0usize; ne];
    let mut degree = vec![0usize; ne];
    for t in 0..n {
        for e in 0..6 {
            let c = vt.edge_class(t, e);
            degree[c] += 1;
            if vt.is_pi_edge(t, e) {
                pi[c] += 1;
            }
        }
        tops[vt.top_class(t)] += 1;
        bottoms[vt.bottom_class(t)] += 1;
    }
    let mut checks = Vec::new();
    checks.push(check(
        "angle_sum",
        (0..ne)
            .find(|&c| pi[c] != 2)
            .map(|c| format!("edge class {c} has {} π-angles", pi[c])),
    ));
    checks.push(check(
        "unique_top_and_bottom",
        (0..ne)
            .find(|&c| tops[c] != 1 || bottoms[c] != 1)
            .map(|c| format!("edge class {c} is top of {} and bottom of {}", tops[c], bottoms[c])),
    ));
    let mut face_tops = vec![0usize; vt.num_faces()];
    for t in 0..n {
        for f in vt.top_faces(t) {
            face_tops[vt.face_class(t, f)] += 1;
        }
    }
    checks.push(check(
        "coorientation",
        (0..vt.num_faces())
            .find(|&f| face_tops[f] != 1)
            .map(|f| format!("face {f} is a top face {} times", face_tops[f])),
    ));
    checks.push(check(
        "fans_nonempty",
        vt.stars()
            .iter()
            .find(|s| s.fans[0].is_empty() || s.fans[1].is_empty())
            .map(|s| format!("edge class {} has fan lengths {:?}", s.edge, s.fan_lengths())),
    ));
    checks.push(check(
        "fan_degree",
        vt.stars()
            .iter()
            .find(|s| s.degree() != degree[s.edge])
            .map(|s| format!("edge class {} has degree {} but fans {:?}", s.edge, degree[s.edge], s.fan_lengths())),
    ));
    let mut model = None;
    for t in 0..n {
        let d = vt.raw().taut(t);
        let (left, right) = if vt.orientation(t) > 0 {
            ((d + 1) % 3, (d + 2) % 3)
        } else {
            ((d + 2) % 3, (d + 1) % 3)
        };
        let mut ok = pair_of_edge(vt.top_edge(t)) == d && vt.bottom_edge(t) == 5 - vt.top_edge(t);
        for (pair, want) in [(left, Veer::Left), (right, Veer::Right)] {
            let (e1, e2) = pair_edges(pair);
            ok &= vt.veer(vt.edge_class(t, e1)) == want && vt.veer(vt.edge_class(t, e2)) == want;
        }
        if !ok {
            model = Some(format!("tetrahedron {t} does not match the model veering tetrahedron"));
            break;
        }
    }
    checks.push(check("model_tetrahedron", model));
    ValidationReport {
        checks,
        delta_tau: delta_tau(vt),
        fan_lengths: vt.stars().iter().map(|s| s.fan_lengths()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn census_examples_validate() {
        for sig in ["cPcbbbiht_12", "fLAMcaccdeejsnaxk_20010", "gLALQbcbeeffxxnskaj_011002"] {
            let vt = infer_veers(&parse_taut_isosig(sig).unwrap()).unwrap();
            let report = validate_veering(&vt);
            assert!(report.all_passed(), "{sig}: {:?}", report.checks);
            assert_eq!(report.delta_tau, delta_tau(&vt));
            assert_eq!(report.fan_lengths.len(), vt.num_edges());
        }
    }

    #[test]
    fn isosig_round_trip() {
        for sig in ["cPcbbbdxm_10", "eLMkbcddddedde_2100"] {
            let raw = parse_taut_isosig(sig).unwrap();
            assert_eq!(encode_taut_isosig(&raw), sig);
            assert_eq!(parse_isosig(sig.split('_').next().unwrap()).unwrap(), raw.gluings());
        }
    }

    #[test]
    fn unchecked_inference_matches_checked() {
        let raw = parse_taut_isosig("dLQacccjsnk_200").unwrap();
        let a = infer_veers(&raw).unwrap();
        let b = infer_veers_unchecked(&raw).unwrap();
        assert_eq!(a.veers(), b.veers());
    }
}
