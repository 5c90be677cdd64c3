#![allow(dead_code)]

use serde_json::Value;
use std::path::PathBuf;
use veerflow_core::homology::Cocycle;
use veerflow_core::ingest::{infer_veers, parse_native};
use veerflow_core::Analysis;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

/// A stored class: coordinates in `Z^b` and a nonnegative face-weight representative of
/// `multiplier · coords`.
pub struct StoredClass {
    pub coords: Vec<i64>,
    pub multiplier: i64,
    pub cocycle: Cocycle,
}

pub struct Fixture {
    pub sig: String,
    pub vtg: String,
    pub an: Analysis,
    pub interior: Vec<StoredClass>,
    pub boundary: Vec<StoredClass>,
}

impl Fixture {
    /// At least three positive classes: the stored ones, padded with multiples of the first.
    pub fn positive_classes(&self) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = self.interior.iter().map(|c| c.coords.clone()).collect();
        if let Some(first) = self.interior.first() {
            let mut k = 2;
            while out.len() < 3 {
                out.push(first.coords.iter().map(|x| k * x).collect());
                k += 1;
            }
        }
        out
    }
}

fn classes(an: &Analysis, v: &Value) -> Vec<StoredClass> {
    v.as_array()
        .expect("class list")
        .iter()
        .map(|c| StoredClass {
            coords: c["coords"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect(),
            multiplier: c["multiplier"].as_i64().unwrap(),
            cocycle: Cocycle::from_json(&an.model, &c["weights"].to_string()).expect("stored cocycle"),
        })
        .collect()
}

pub fn fixture_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_dir())
        .expect("fixture directory")
        .filter_map(|e| {
            let name = e.ok()?.file_name().into_string().ok()?;
            name.strip_suffix(".vtg").map(str::to_string)
        })
        .collect();
    names.sort();
    names
}

pub fn load(sig: &str) -> Fixture {
    let dir = fixture_dir();
    let vtg = std::fs::read_to_string(dir.join(format!("{sig}.vtg"))).expect("vtg fixture");
    let an = Analysis::new(infer_veers(&parse_native(&vtg).expect("parse")).expect("veering")).expect("analysis");
    let meta: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join(format!("{sig}.classes.json"))).expect("classes"))
            .expect("classes json");
    Fixture {
        sig: sig.to_string(),
        interior: classes(&an, &meta["interior"]),
        boundary: classes(&an, &meta["boundary"]),
        vtg,
        an,
    }
}

pub fn all() -> Vec<Fixture> {
    fixture_names().iter().map(|s| load(s)).collect()
}
