use std::path::Path;
use veerflow_core::homology::Cocycle;
use veerflow_core::ingest::{infer_veers, parse_native, parse_taut_isosig};
use veerflow_core::{Analysis, Error, RawTriangulation, Result};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Json(format!("{}: {e}", path.display())))
}

/// Reads a `.vtg` document or a taut isoSig, from a file or given inline.
pub fn load_raw(source: &str, base: &Path) -> Result<RawTriangulation> {
    let path = base.join(source);
    let text = if path.is_file() {
        read(&path)?
    } else if source.ends_with(".vtg") {
        return Err(Error::Json(format!("{}: no such file", path.display())));
    } else {
        source.to_string()
    };
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    if first.starts_with("vtg") {
        parse_native(&text)
    } else {
        parse_taut_isosig(first.split_whitespace().next().unwrap_or(""))
    }
}

pub fn load_analysis(source: &str, base: &Path) -> Result<Analysis> {
    Analysis::new(infer_veers(&load_raw(source, base)?)?)
}

pub fn load_cocycle(an: &Analysis, path: &Path, base: &Path) -> Result<Cocycle> {
    Cocycle::from_json(&an.model, &read(&base.join(path))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_forms() {
        let base = Path::new(".");
        let a = load_raw("cPcbbbiht_12", base).unwrap();
        let text = veerflow_core::ingest::serialize_raw(&a);
        let b = load_raw(&text, base).unwrap();
        assert_eq!(a.gluings(), b.gluings());
        assert_eq!(load_raw("nowhere.vtg", base).unwrap_err().code(), "json");
        assert_eq!(load_raw("", base).unwrap_err().code(), "malformed_signature");
    }
}
