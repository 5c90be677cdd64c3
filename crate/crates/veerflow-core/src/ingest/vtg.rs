//! The native line-oriented text format.
//!
//! ```text
//! vtg 1
//! tetrahedra 2
//! glue 0 f0:(1,0123) f1:(1,1203) f2:(1,1032) f3:(1,3021)
//! glue 1 f0:(0,0123) f1:(0,1320) f2:(0,2013) f3:(0,1032)
//! taut 1 2
//! veers e0:R e1:L
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. The `veers` line is optional
//! and indexed by edge class.

use super::raw::{Gluing, RawTriangulation, Veer};
use super::veering::VeeringTriangulation;
use crate::error::{Error, Result};
use crate::perm::Perm4;

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: line[..s].chars().count() + 1,
        });
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn number(tok: &Token<'_>, line: usize, what: &str) -> Result<usize> {
    tok.text
        .parse::<usize>()
        .map_err(|_| syntax(line, tok.column, format!("expected {what}, found `{}`", tok.text)))
}

fn parse_face_gluing(tok: &Token<'_>, line: usize, face: usize) -> Result<Gluing> {
    let bad = || syntax(line, tok.column, format!("malformed face gluing `{}`", tok.text));
    let (label, rest) = tok.text.split_once(':').ok_or_else(bad)?;
    let label = label.strip_prefix('f').unwrap_or(label);
    if label.parse::<usize>().ok() != Some(face) {
        return Err(syntax(line, tok.column, format!("expected face {face}, found `{label}`")));
    }
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?;
    let (t, p) = inner.split_once(',').ok_or_else(bad)?;
    let tet = t.trim().parse::<usize>().map_err(|_| bad())?;
    let perm = Perm4::parse(p.trim())
        .ok_or_else(|| syntax(line, tok.column, format!("invalid permutation `{}`", p.trim())))?;
    Ok(Gluing { tet, perm })
}

/// Parses a document in the native format.
pub fn parse_native(text: &str) -> Result<RawTriangulation> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        });

    let (ln, header) = lines.next().ok_or_else(|| syntax(1, 1, "empty document"))?;
    let toks = tokens(header);
    if toks.len() != 2 || toks[0].text != "vtg" {
        return Err(syntax(ln, 1, "expected header `vtg 1`"));
    }
    if toks[1].text != "1" {
        return Err(syntax(ln, toks[1].column, format!("unsupported version `{}`", toks[1].text)));
    }

    let (ln, count) = lines
        .next()
        .ok_or_else(|| syntax(ln + 1, 1, "expected `tetrahedra N`"))?;
    let toks = tokens(count);
    if toks.len() != 2 || toks[0].text != "tetrahedra" {
        return Err(syntax(ln, 1, "expected `tetrahedra N`"));
    }
    let n = number(&toks[1], ln, "tetrahedron count")?;
    if n == 0 {
        return Err(syntax(ln, toks[1].column, "tetrahedron count must be positive"));
    }

    let mut gluings: Vec<Option<[Gluing; 4]>> = vec![None; n];
    let mut taut: Option<Vec<u8>> = None;
    let mut veers: Option<Vec<Veer>> = None;
    let mut last_line = ln;
    for (ln, line) in lines {
        last_line = ln;
        let toks = tokens(line);
        match toks[0].text {
            "glue" => {
                if toks.len() != 6 {
                    return Err(syntax(ln, 1, "expected `glue t` followed by four face gluings"));
                }
                let t = number(&toks[1], ln, "tetrahedron index")?;
                if t >= n {
                    return Err(Error::IndexOutOfRange(format!(
                        "line {ln}: tetrahedron {t} of {n}"
                    )));
                }
                if gluings[t].is_some() {
                    return Err(syntax(ln, toks[1].column, format!("tetrahedron {t} glued twice")));
                }
                let mut row = [Gluing {
                    tet: 0,
                    perm: Perm4::IDENTITY,
                }; 4];
                for f in 0..4 {
                    row[f] = parse_face_gluing(&toks[2 + f], ln, f)?;
                }
                gluings[t] = Some(row);
            }
            "taut" => {
                if taut.is_some() {
                    return Err(syntax(ln, 1, "duplicate `taut` line"));
                }
                let mut digits = Vec::new();
                for tok in &toks[1..] {
                    match tok.text {
                        "0" => digits.push(0),
                        "1" => digits.push(1),
                        "2" => digits.push(2),
                        _ => {
                            return Err(syntax(ln, tok.column, format!("taut digit `{}` not in 0..=2", tok.text)))
                        }
                    }
                }
                if digits.len() != n {
                    return Err(Error::DigitCount {
                        expected: n,
                        found: digits.len(),
                    });
                }
                taut = Some(digits);
            }
            "veers" => {
                if veers.is_some() {
                    return Err(syntax(ln, 1, "duplicate `veers` line"));
                }
                let mut list = Vec::new();
                for (i, tok) in toks[1..].iter().enumerate() {
                    let (label, v) = tok
                        .text
                        .split_once(':')
                        .ok_or_else(|| syntax(ln, tok.column, "expected `eK:L` or `eK:R`"))?;
                    let label = label.strip_prefix('e').unwrap_or(label);
                    if label.parse::<usize>().ok() != Some(i) {
                        return Err(syntax(ln, tok.column, format!("expected edge {i}")));
                    }
                    list.push(match v {
                        "L" => Veer::Left,
                        "R" => Veer::Right,
                        _ => return Err(syntax(ln, tok.column, format!("unknown veer `{v}`"))),
                    });
                }
                veers = Some(list);
            }
            other => {
                return Err(syntax(ln, 1, format!("unknown directive `{other}`")));
            }
        }
    }
    let gluings = gluings
        .into_iter()
        .enumerate()
        .map(|(t, g)| g.ok_or_else(|| syntax(last_line, 1, format!("missing gluing of tetrahedron {t}"))))
        .collect::<Result<Vec<_>>>()?;
    let taut = taut.ok_or_else(|| syntax(last_line, 1, "missing `taut` line"))?;
    let raw = RawTriangulation::new(gluings, taut)?;
    Ok(match veers {
        Some(v) => raw.with_declared_veers(v),
        None => raw,
    })
}

fn write_raw(raw: &RawTriangulation, out: &mut String) {
    use std::fmt::Write;
    let n = raw.num_tetrahedra();
    writeln!(out, "vtg 1").unwrap();
    writeln!(out, "tetrahedra {n}").unwrap();
    for t in 0..n {
        write!(out, "glue {t}").unwrap();
        for f in 0..4 {
            let g = raw.gluing(t, f);
            write!(out, " f{f}:({},{})", g.tet, g.perm).unwrap();
        }
        out.push('\n');
    }
    out.push_str("taut");
    for &d in raw.taut_data() {
        write!(out, " {d}").unwrap();
    }
    out.push('\n');
}

/// Serializes a veering triangulation, including its veer line.
pub fn serialize_native(vt: &VeeringTriangulation) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    write_raw(vt.raw(), &mut out);
    out.push_str("veers");
    for (i, v) in vt.veers().iter().enumerate() {
        write!(out, " e{i}:{v}").unwrap();
    }
    out.push('\n');
    out
}

/// Serializes only the combinatorial data.
pub fn serialize_raw(raw: &RawTriangulation) -> String {
    let mut out = String::new();
    write_raw(raw, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{infer_veers, parse_taut_isosig};

    const SAMPLE: &str = "vtg 1
tetrahedra 2
glue 0 f0:(1,0123) f1:(1,1203) f2:(1,1032) f3:(1,3021)
glue 1 f0:(0,0123) f1:(0,1320) f2:(0,2013) f3:(0,1032)
taut 1 2
veers e0:R e1:L
";

    fn code(text: &str) -> &'static str {
        parse_native(text).and_then(|r| infer_veers(&r)).unwrap_err().code()
    }

    #[test]
    fn round_trip() {
        let vt = infer_veers(&parse_native(SAMPLE).unwrap()).unwrap();
        assert_eq!(serialize_native(&vt), SAMPLE);
        let from_sig = infer_veers(&parse_taut_isosig("cPcbbbiht_12").unwrap()).unwrap();
        assert_eq!(serialize_native(&from_sig), SAMPLE);
        assert!(!serialize_raw(vt.raw()).contains("veers"));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let text = format!("# header\n\n{}", SAMPLE.replace("taut", "  # note\ntaut"));
        assert!(parse_native(&text).is_ok());
    }

    #[test]
    fn errors_point_at_the_problem() {
        match parse_native(&SAMPLE.replace("f2:(1,1032) f3", "f2:(1,10x2) f3")) {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (3, 32)),
            other => panic!("{other:?}"),
        }
        assert_eq!(code(""), "syntax");
        assert_eq!(code(&SAMPLE.replace("vtg 1", "vtg 9")), "syntax");
        assert_eq!(code(&SAMPLE.replace("tetrahedra 2", "tetrahedra 0")), "syntax");
        assert_eq!(code(&SAMPLE.replace("glue 1 f0:(0,", "glue 0 f0:(0,")), "syntax");
        assert_eq!(code(&SAMPLE.replace("taut 1 2", "taut 1 3")), "syntax");
        assert_eq!(code(&SAMPLE.replace("taut 1 2", "taut 1 2 0")), "digit_count");
        assert_eq!(code(&SAMPLE.replace("veers e0:R", "veers e0:Q")), "syntax");
        assert_eq!(code(&SAMPLE.replace("veers e0:R e1:L", "veers e0:L e1:L")), "not_veering");
        assert_eq!(code(&SAMPLE.replace("glue 1 f0:(0,0123)", "glue 1 f0:(0,0132)")), "involution");
        assert_eq!(code(&SAMPLE.replace("glue 0 f0:(1,", "glue 0 f0:(5,")), "index_out_of_range");
        assert_eq!(code(&SAMPLE.replace("taut 1 2\n", "")), "syntax");
        assert_eq!(code(&SAMPLE.replace("taut", "angles")), "syntax");
    }
}
