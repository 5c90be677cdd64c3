//! Isomorphism signatures in the census alphabet, with the taut digit suffix.
//!
//! The taut suffix holds one digit per tetrahedron naming its π-pair:
//! `0 = {01|23}`, `1 = {02|13}`, `2 = {03|12}`.

use super::raw::{Gluing, RawTriangulation};
use crate::error::{Error, Result};
use crate::perm::{edge_between, pair_edges, pair_of_edge, Perm4, EDGE_VERTICES};

const ALPHABET: &[u8; 64] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-";

fn sval(c: u8) -> Option<usize> {
    ALPHABET.iter().position(|&a| a == c)
}

fn schar(v: usize) -> char {
    ALPHABET[v] as char
}

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedSignature(msg.into())
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn next(&mut self) -> Result<usize> {
        let c = *self
            .bytes
            .get(self.pos)
            .ok_or_else(|| malformed("signature ends early"))?;
        self.pos += 1;
        sval(c).ok_or_else(|| malformed(format!("invalid character `{}`", c as char)))
    }

    fn read_int(&mut self, chars: usize) -> Result<usize> {
        let mut v = 0usize;
        for i in 0..chars {
            v |= self.next()? << (6 * i);
        }
        Ok(v)
    }
}

/// Decodes a plain isomorphism signature; the taut data is left as all zeros.
pub fn parse_isosig(sig: &str) -> Result<Vec<[Gluing; 4]>> {
    if sig.is_empty() {
        return Err(malformed("empty signature"));
    }
    let mut r = Reader {
        bytes: sig.as_bytes(),
        pos: 0,
    };
    let first = r.next()?;
    let (n, nchars) = if first < 63 {
        (first, 1)
    } else {
        let nchars = r.next()?;
        if nchars == 0 {
            return Err(malformed("zero-width tetrahedron count"));
        }
        (r.read_int(nchars)?, nchars)
    };
    if n == 0 {
        return Err(malformed("signature describes no tetrahedra"));
    }
    let total = 4 * n;
    let mut actions = Vec::new();
    let mut facets = 0;
    let mut joins = 0;
    while facets < total {
        let v = r.next()?;
        for k in 0..3 {
            if facets >= total {
                if (v >> (2 * k)) != 0 {
                    return Err(malformed("trailing facet actions"));
                }
                break;
            }
            let a = (v >> (2 * k)) & 3;
            match a {
                0 => return Err(malformed("signature has boundary faces")),
                1 => facets += 2,
                2 => {
                    facets += 2;
                    joins += 1;
                }
                _ => return Err(malformed("invalid facet action")),
            }
            if facets > total {
                return Err(malformed("facet actions overrun"));
            }
            actions.push(a);
        }
    }
    let mut dests = Vec::with_capacity(joins);
    for _ in 0..joins {
        let d = r.read_int(nchars)?;
        if d >= n {
            return Err(malformed("join destination out of range"));
        }
        dests.push(d);
    }
    let mut perms = Vec::with_capacity(joins);
    for _ in 0..joins {
        let p = Perm4::from_ordered_index(r.next()?).ok_or_else(|| malformed("invalid gluing permutation"))?;
        perms.push(p);
    }
    if r.pos != sig.len() {
        return Err(malformed("trailing characters (disconnected triangulations are not supported)"));
    }

    let mut glue: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; n];
    let mut next_unused = 1;
    let (mut ai, mut ji) = (0, 0);
    for t in 0..n {
        for f in 0..4 {
            if glue[t][f].is_some() {
                continue;
            }
            let a = *actions.get(ai).ok_or_else(|| malformed("too few facet actions"))?;
            ai += 1;
            let (dest, perm) = if a == 1 {
                if next_unused >= n {
                    return Err(malformed("too many new tetrahedra"));
                }
                next_unused += 1;
                (next_unused - 1, Perm4::IDENTITY)
            } else {
                let d = (dests[ji], perms[ji]);
                ji += 1;
                d
            };
            let g = perm.apply(f);
            if (dest == t && g == f) || glue[dest][g].is_some() {
                return Err(malformed("gluing onto an already glued face"));
            }
            glue[t][f] = Some(Gluing { tet: dest, perm });
            glue[dest][g] = Some(Gluing {
                tet: t,
                perm: perm.inverse(),
            });
        }
    }
    if next_unused != n {
        return Err(malformed("signature does not reach every tetrahedron"));
    }
    Ok(glue
        .into_iter()
        .map(|row| row.map(|g| g.expect("all faces glued")))
        .collect())
}

/// Decodes `<isoSig>_<digits>` from the veering census.
pub fn parse_taut_isosig(sig: &str) -> Result<RawTriangulation> {
    let (iso, digits) = sig
        .split_once('_')
        .ok_or_else(|| malformed("missing `_` before the taut digits"))?;
    let gluings = parse_isosig(iso)?;
    let digits = digits.split('_').next().unwrap_or("");
    let mut taut = Vec::with_capacity(digits.len());
    for ch in digits.chars() {
        match ch {
            '0' => taut.push(0),
            '1' => taut.push(1),
            '2' => taut.push(2),
            _ => return Err(malformed(format!("taut digit `{ch}` not in 0..=2"))),
        }
    }
    if taut.len() != gluings.len() {
        return Err(Error::DigitCount {
            expected: gluings.len(),
            found: taut.len(),
        });
    }
    RawTriangulation::new(gluings, taut)
}

/// Labelling produced by a canonical traversal: new index and vertex map per tetrahedron.
struct Traversal {
    sig: String,
    image: Vec<usize>,
    vmap: Vec<Perm4>,
}

fn traverse(gluings: &[[Gluing; 4]], start: usize, start_map: Perm4) -> Traversal {
    let n = gluings.len();
    let none = usize::MAX;
    let mut image = vec![none; n];
    let mut pre = vec![none; n];
    let mut vmap = vec![Perm4::IDENTITY; n];
    image[start] = 0;
    pre[0] = start;
    vmap[start] = start_map;
    let mut next_unused = 1;
    let mut actions = Vec::new();
    let mut dests = Vec::new();
    let mut perms = Vec::new();
    for img in 0..n {
        let src = pre[img];
        for fimg in 0..4 {
            let f = vmap[src].inverse().apply(fimg);
            let g = gluings[src][f];
            let dest = g.tet;
            if image[dest] != none
                && (image[dest] < image[src]
                    || (dest == src && vmap[src].apply(g.perm.apply(f)) < vmap[src].apply(f)))
            {
                continue;
            }
            if image[dest] == none {
                image[dest] = next_unused;
                pre[next_unused] = dest;
                next_unused += 1;
                vmap[dest] = vmap[src].compose(g.perm.inverse());
                actions.push(1usize);
                continue;
            }
            actions.push(2);
            dests.push(image[dest]);
            perms.push(vmap[dest].compose(g.perm).compose(vmap[src].inverse()));
        }
    }
    let mut nchars = 1;
    while n >= 1 << (6 * nchars) {
        nchars += 1;
    }
    let mut sig = String::new();
    if n < 63 {
        sig.push(schar(n));
    } else {
        sig.push(schar(63));
        sig.push(schar(nchars));
        for i in 0..nchars {
            sig.push(schar((n >> (6 * i)) & 63));
        }
    }
    for chunk in actions.chunks(3) {
        let mut v = 0;
        for (k, &a) in chunk.iter().enumerate() {
            v |= a << (2 * k);
        }
        sig.push(schar(v));
    }
    for &d in &dests {
        for i in 0..nchars {
            sig.push(schar((d >> (6 * i)) & 63));
        }
    }
    for p in &perms {
        sig.push(schar(p.ordered_index()));
    }
    Traversal { sig, image, vmap }
}

fn canonical_traversals(gluings: &[[Gluing; 4]]) -> Vec<Traversal> {
    let mut best: Vec<Traversal> = Vec::new();
    for start in 0..gluings.len() {
        for &p in &crate::perm::ORDERED_S4 {
            let tr = traverse(gluings, start, p);
            match best.first().map(|b| tr.sig.cmp(&b.sig)) {
                None => best.push(tr),
                Some(std::cmp::Ordering::Less) => best = vec![tr],
                Some(std::cmp::Ordering::Equal) => best.push(tr),
                Some(std::cmp::Ordering::Greater) => {}
            }
        }
    }
    best
}

/// Canonical isomorphism signature of the underlying triangulation.
pub fn encode_isosig(raw: &RawTriangulation) -> String {
    canonical_traversals(raw.gluings())
        .into_iter()
        .next()
        .expect("at least one tetrahedron")
        .sig
}

/// Canonical taut signature: the triangulation signature followed by the
/// lexicographically least taut digit string over all canonical labellings.
pub fn encode_taut_isosig(raw: &RawTriangulation) -> String {
    let n = raw.num_tetrahedra();
    let trs = canonical_traversals(raw.gluings());
    let mut best: Option<Vec<u8>> = None;
    for tr in &trs {
        let mut digits = vec![0u8; n];
        for t in 0..n {
            let (a, b) = EDGE_VERTICES[pair_edges(raw.taut(t)).0];
            let e = edge_between(tr.vmap[t].apply(a), tr.vmap[t].apply(b));
            digits[tr.image[t]] = pair_of_edge(e) as u8;
        }
        if best.as_ref().is_none_or(|b| digits < *b) {
            best = Some(digits);
        }
    }
    let digits: String = best
        .expect("nonempty")
        .iter()
        .map(|d| char::from(b'0' + d))
        .collect();
    format!("{}_{}", trs[0].sig, digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decodes_worked_example() {
        let g = parse_isosig("cPcbbbiht").unwrap();
        assert_eq!(g.len(), 2);
        let words: Vec<(usize, String)> = g[0].iter().map(|x| (x.tet, x.perm.to_string())).collect();
        assert_eq!(
            words,
            vec![
                (1, "0123".into()),
                (1, "1203".into()),
                (1, "1032".into()),
                (1, "3021".into())
            ]
        );
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_isosig("").is_err());
        assert!(parse_isosig("c*cbbbiht").is_err());
        assert!(parse_isosig("cPcbbbih").is_err());
        assert!(parse_isosig("cPcbbbihtt").is_err());
        assert!(matches!(
            parse_taut_isosig("cPcbbbiht_1"),
            Err(Error::DigitCount { expected: 2, found: 1 })
        ));
        assert!(parse_taut_isosig("cPcbbbiht_13").is_err());
        assert!(parse_taut_isosig("cPcbbbiht").is_err());
    }

    #[test]
    fn round_trips_census_strings() {
        for s in ["cPcbbbiht_12", "cPcbbbdxm_10", "dLQacccjsnk_200", "eLMkbcddddedde_2100"] {
            let raw = parse_taut_isosig(s).unwrap();
            assert_eq!(encode_taut_isosig(&raw), s);
        }
    }
}
