use crate::cli::{Cli, Command};
use crate::commands::{execute, Output};
use crate::{command_name, document, error_document, render};
use clap::Parser;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::path::Path;
use veerflow_core::{Error, Result};

struct Line {
    number: usize,
    words: Vec<String>,
}

fn manifest_lines(text: &str) -> Vec<Line> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let l = l.trim();
            (!l.is_empty() && !l.starts_with('#')).then(|| Line {
                number: i + 1,
                words: l.split_whitespace().map(str::to_string).collect(),
            })
        })
        .collect()
}

/// Result document and status of one manifest line.
fn run_line(line: &Line, base: &Path) -> (String, Value, String) {
    let mut argv = vec!["veerflow".to_string()];
    if line.words.len() >= 2 {
        argv.push(line.words[1].clone());
        argv.push(line.words[0].clone());
        argv.extend(line.words[2..].iter().cloned());
    } else {
        argv.extend(line.words.iter().cloned());
    }
    let cmd = match Cli::try_parse_from(&argv) {
        Ok(c) => c.command,
        Err(e) => {
            let doc = json!({
                "veerflow": crate::VERSION,
                "line": line.number,
                "error": { "code": "usage", "exit": 2, "message": e.to_string().trim() },
            });
            return ("usage".into(), doc, "txt".into());
        }
    };
    let name = command_name(&cmd);
    let result = match &cmd {
        Command::Batch { .. } => Err(Error::Internal("batch cannot nest".into())),
        c => execute(c, base),
    };
    match result {
        Ok(Output::Json(v)) => {
            let mut d = document(name, v);
            d["line"] = json!(line.number);
            ("ok".into(), d, "json".into())
        }
        Ok(Output::Text(t)) => ("ok".into(), Value::String(t), "csv".into()),
        Err(e) => {
            let mut d = error_document(name, &e);
            d["line"] = json!(line.number);
            (e.code().into(), d, "json".into())
        }
    }
}

/// Runs every manifest line concurrently and writes `line-NNNN.json` per line into `out`.
pub fn run(manifest: &Path, out: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(manifest)
        .map_err(|e| Error::Json(format!("{}: {e}", manifest.display())))?;
    let base = manifest.parent().unwrap_or(Path::new("."));
    std::fs::create_dir_all(out).map_err(|e| Error::Internal(format!("{}: {e}", out.display())))?;
    let lines = manifest_lines(&text);
    let results: Vec<(usize, String, String)> = lines
        .par_iter()
        .map(|line| {
            let (status, doc, ext) = run_line(line, base);
            let name = format!("line-{:04}.{}", line.number, if ext == "csv" { "csv" } else { "json" });
            let body = match &doc {
                Value::String(t) => t.clone(),
                d => render(d),
            };
            std::fs::write(out.join(&name), body)
                .map_err(|e| Error::Internal(format!("{name}: {e}")))?;
            Ok((line.number, status, name))
        })
        .collect::<Result<_>>()?;
    Ok(json!({
        "lines": results.len(),
        "results": results.iter().map(|(n, s, f)| json!({ "line": n, "status": s, "file": f })).collect::<Vec<_>>(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_skips_comments_and_blanks() {
        let lines = manifest_lines("# c\n\n  a.vtg info \nb.vtg plane --seed 1\n");
        let got: Vec<(usize, Vec<String>)> = lines.into_iter().map(|l| (l.number, l.words)).collect();
        assert_eq!(got.len(), 2);
        assert_eq!(got[0], (3, vec!["a.vtg".to_string(), "info".to_string()]));
        assert_eq!(got[1].0, 4);
        assert_eq!(got[1].1.len(), 4);
    }
}
