use crate::cli::{Command, GraphEmit};
use crate::input::{load_analysis, load_cocycle, load_raw};
use serde_json::{json, Value};
use std::path::Path;
use veerflow_core::cones::{cone_generators, face_of, in_dual_cone, is_layered, Layeredness};
use veerflow_core::dynamic_planes::{
    chains, check_patch, descending_patch, pushdown_check, resolve_dual_cycle, strip_width,
    DEFAULT_DEPTH_BOUND,
};
use veerflow_core::graphs::{ab_parity, special_cycles, LabeledDigraph, TurnKind};
use veerflow_core::growth::oracle::{cycle_count_oracle, estimate_growth};
use veerflow_core::growth::{
    accumulation_experiment, entropy_scan_ray, entropy_scan_segment, growth_rate, weighted_edges,
    working_edges, EntropyScan, GrowthReport,
};
use veerflow_core::ingest::{encode_taut_isosig, infer_veers_unchecked, validate_veering};
use veerflow_core::kernel::{delta_tau, fan_histogram};
use veerflow_core::restriction::restricted_polynomials;
use veerflow_core::veering_poly::clique_oracle;
use veerflow_core::{Error, Result};

/// Output of one command: a JSON document, or CSV text for scans that ask for it.
pub enum Output {
    Json(Value),
    Text(String),
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Internal(e.to_string()))
}

fn graph_json(g: &LabeledDigraph) -> Value {
    json!({
        "num_vertices": g.num_vertices,
        "anchors": g.anchors,
        "edges": g.edges.iter().enumerate().map(|(i, e)| json!({
            "id": i,
            "tail": e.tail,
            "head": e.head,
            "chain": e.chain.iter().enumerate().filter(|(_, &c)| c != 0)
                .map(|(f, &c)| json!([f, c])).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn growth_json(r: &GrowthReport) -> Value {
    json!({
        "rate": r.rate,
        "entropy": r.entropy(),
        "root": r.root,
        "specialization": r.specialization.to_json(),
        "specialization_text": r.specialization.to_string(),
        "components": r.components,
        "component_rates": r.component_rates,
    })
}

fn scan_csv(scan: &EntropyScan) -> String {
    let mut out = String::from("index,coords,rate,entropy\n");
    for r in &scan.rows {
        let coords: Vec<String> = r.coords.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("{},{},{},{}\n", r.index, coords.join(" "), r.rate, r.entropy));
    }
    out
}

/// Runs one command; relative paths in arguments resolve against `base`.
pub fn execute(cmd: &Command, base: &Path) -> Result<Output> {
    let doc = match cmd {
        Command::Info(i) => {
            let an = load_analysis(&i.file, base)?;
            let vt = &an.vt;
            json!({
                "isosig": encode_taut_isosig(vt.raw()),
                "tetrahedra": vt.num_tetrahedra(),
                "edge_classes": vt.num_edges(),
                "face_classes": vt.num_faces(),
                "delta_tau": delta_tau(vt),
                "fan_histogram": fan_histogram(vt),
                "degrees": (0..vt.num_edges()).map(|c| vt.degree(c)).collect::<Vec<_>>(),
                "veers": vt.veers().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "betti": an.betti(),
            })
        }
        Command::Validate(i) => {
            let raw = load_raw(&i.file, base)?;
            let vt = infer_veers_unchecked(&raw)?;
            let report = validate_veering(&vt);
            json!({ "valid": report.all_passed(), "report": to_value(&report)? })
        }
        Command::Graphs { input, emit } => {
            let an = load_analysis(&input.file, base)?;
            match emit {
                GraphEmit::Gamma => json!({ "gamma": graph_json(&an.gamma) }),
                GraphEmit::Phi => json!({
                    "phi": graph_json(an.phi()),
                    "origins": to_value(&an.flow.origins)?,
                }),
                GraphEmit::Turns => json!({
                    "turns": an.turns.kinds.iter().map(|(&(a, b), k)| json!({
                        "incoming": a,
                        "outgoing": b,
                        "kind": match k { TurnKind::Branching => "branching", TurnKind::AB => "ab" },
                    })).collect::<Vec<_>>(),
                    "sectors": to_value(&an.sectors)?,
                }),
                GraphEmit::Cycles => {
                    let (branch, ab) = special_cycles(&an.vt, &an.turns)?;
                    let with_parity = |cs: &[veerflow_core::graphs::SpecialCycle]| -> Result<Vec<Value>> {
                        cs.iter()
                            .map(|c| {
                                Ok(json!({
                                    "edges": c.edges,
                                    "ab_turns": c.ab_turns,
                                    "parity": ab_parity(&an.vt, &an.turns, &c.edges)?,
                                    "class": an.model.class_of_chain(&an.gamma.chain_of(&c.edges))?,
                                }))
                            })
                            .collect()
                    };
                    json!({ "branch_cycles": with_parity(&branch)?, "ab_cycles": with_parity(&ab)? })
                }
            }
        }
        Command::Poly { input, clique } => {
            let an = load_analysis(&input.file, base)?;
            let v = an.veering_polynomial();
            let mut doc = json!({
                "betti": an.betti(),
                "terms": v.to_json(),
                "text": v.to_string(),
            });
            if *clique {
                let c = clique_oracle(an.phi(), &an.model)?.normalized();
                doc["clique_equal"] = json!(c == v);
            }
            doc
        }
        Command::Cone { input, test } => {
            let an = load_analysis(&input.file, base)?;
            let model = cone_generators(&an)?;
            let layered = match is_layered(&an, &model)? {
                Layeredness::Layered { coords, cocycle } => {
                    json!({ "layered": true, "coords": coords, "cocycle": cocycle.to_json() })
                }
                Layeredness::NotLayered { multipliers } => {
                    json!({ "layered": false, "obstruction": multipliers })
                }
            };
            let mut doc = json!({
                "betti": model.betti,
                "generators": to_value(&model.generators)?,
                "layeredness": layered,
            });
            if let Some(p) = test {
                let c = load_cocycle(&an, p, base)?;
                let t = in_dual_cone(&an, &model, &c)?;
                doc["test"] = to_value(&t)?;
                if let Ok(face) = face_of(&an, &model, &c) {
                    doc["face"] = json!(face);
                }
            }
            doc
        }
        Command::Restrict { input, class } => {
            let an = load_analysis(&input.file, base)?;
            let eta = load_cocycle(&an, class, base)?;
            let r = restricted_polynomials(&an, &eta)?;
            json!({
                "weights": r.restricted.weights,
                "edges": r.restricted.edges,
                "components": r.restricted.components,
                "P_restricted": r.perron_restricted.to_json(),
                "V_deleted": r.deleted.to_json(),
                "component_polynomials": r.component_polys.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
                "product_matches": r.product_matches,
                "equal": r.perron_restricted == r.deleted,
            })
        }
        Command::Growth { input, class, cut, oracle } => {
            let an = load_analysis(&input.file, base)?;
            let xi = load_cocycle(&an, class, base)?;
            let eta = cut.as_ref().map(|p| load_cocycle(&an, p, base)).transpose()?;
            let r = growth_rate(&an, eta.as_ref(), &xi)?;
            let mut doc = growth_json(&r);
            if let Some(l) = oracle {
                let (edges, _) = working_edges(&an, eta.as_ref())?;
                let w = weighted_edges(&an, &edges, &an.coordinates(&xi));
                let counts = cycle_count_oracle(an.phi().num_vertices, &w, *l)?;
                doc["oracle"] = json!({
                    "max_weight": l,
                    "closed_walks": counts.closed_walks.last().map(|c| c.to_string()),
                    "necklaces": counts.necklaces.last().map(|c| c.to_string()),
                    "estimate": estimate_growth(&counts),
                });
            }
            doc
        }
        Command::Scan { input, from, to, samples, cut, csv } => {
            let an = load_analysis(&input.file, base)?;
            let a = an.coordinates(&load_cocycle(&an, from, base)?);
            let eta = cut.as_ref().map(|p| load_cocycle(&an, p, base)).transpose()?;
            let scan = match to {
                Some(t) => {
                    let b = an.coordinates(&load_cocycle(&an, t, base)?);
                    entropy_scan_segment(&an, eta.as_ref(), &a, &b, *samples)?
                }
                None => entropy_scan_ray(&an, eta.as_ref(), &a, *samples)?,
            };
            if *csv {
                return Ok(Output::Text(scan_csv(&scan)));
            }
            to_value(&scan)?
        }
        Command::Accumulate { input, alpha, eta, imax } => {
            let an = load_analysis(&input.file, base)?;
            let a = load_cocycle(&an, alpha, base)?;
            let e = load_cocycle(&an, eta, base)?;
            to_value(&accumulation_experiment(&an, &a, &e, *imax)?)?
        }
        Command::Plane { input, seed, depth, emit, pushdown } => {
            let an = load_analysis(&input.file, base)?;
            if *depth > DEFAULT_DEPTH_BOUND {
                return Err(Error::TooLarge(format!("depth {depth} above {DEFAULT_DEPTH_BOUND}")));
            }
            if *seed >= an.sectors.len() {
                return Err(Error::IndexOutOfRange(format!("seed {seed} of {} edge classes", an.sectors.len())));
            }
            let patch = descending_patch(&an, *seed, *depth)?;
            let report = check_patch(&an, &patch)?;
            let ch = chains(&an, &patch)?;
            let mut doc = json!({
                "seed": seed,
                "depth": depth,
                "delta_tau": delta_tau(&an.vt),
                "report": to_value(&report)?,
                "max_chain_length": ch.iter().map(|c| c.len()).max().unwrap_or(0),
                "chains_uniform_veer": ch.iter().all(|c| c.uniform_veer),
            });
            if *pushdown > 0 {
                doc["pushdown"] = to_value(&pushdown_check(&an, &patch, *pushdown)?)?;
            }
            if let Some(p) = emit {
                let path = base.join(p);
                let text = serde_json::to_string_pretty(&patch.to_json()).map_err(|e| Error::Internal(e.to_string()))?;
                std::fs::write(&path, text + "\n").map_err(|e| Error::Internal(format!("{}: {e}", path.display())))?;
                doc["emitted"] = json!(p.display().to_string());
            }
            doc
        }
        Command::Resolve { input, cycle, depth, width } => {
            let an = load_analysis(&input.file, base)?;
            if *depth > DEFAULT_DEPTH_BOUND {
                return Err(Error::TooLarge(format!("depth {depth} above {DEFAULT_DEPTH_BOUND}")));
            }
            if cycle.iter().any(|&f| f >= an.gamma.edges.len()) {
                return Err(Error::IndexOutOfRange(format!("face id in {cycle:?} of {}", an.gamma.edges.len())));
            }
            let mut doc = json!({
                "cycle": cycle,
                "resolution": to_value(&resolve_dual_cycle(&an, cycle, *depth)?)?,
            });
            if *width {
                doc["width"] = match strip_width(&an, cycle, *depth) {
                    Ok(w) => to_value(&w)?,
                    Err(Error::BranchCurve) => json!({ "kind": "BranchCurve" }),
                    Err(e) => return Err(e),
                };
            }
            doc
        }
        Command::Batch { .. } => return Err(Error::Internal("batch cannot nest".into())),
    };
    Ok(Output::Json(doc))
}
