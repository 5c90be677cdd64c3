//! Permutations of the four vertices of a tetrahedron.

use std::fmt;

/// A permutation of `{0, 1, 2, 3}`, stored as its image list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm4([u8; 4]);

/// All 24 permutations in lexicographic order of their image lists.
pub const ORDERED_S4: [Perm4; 24] = {
    let mut out = [Perm4([0, 1, 2, 3]); 24];
    let mut k = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                if a != b && b != c && a != c {
                    let d = 6 - a - b - c;
                    out[k] = Perm4([a, b, c, d]);
                    k += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// Builds a permutation from its images, or `None` if they are not a bijection.
    pub fn new(images: [u8; 4]) -> Option<Self> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return None;
            }
            seen[x as usize] = true;
        }
        Some(Perm4(images))
    }

    /// Swaps two points.
    pub fn transposition(a: usize, b: usize) -> Self {
        let mut img = [0, 1, 2, 3];
        img.swap(a, b);
        Perm4(img)
    }

    #[inline]
    pub fn apply(self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn images(self) -> [u8; 4] {
        self.0
    }

    pub fn inverse(self) -> Self {
        let mut inv = [0u8; 4];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `self.compose(other)` maps `i` to `self(other(i))`.
    pub fn compose(self, other: Perm4) -> Self {
        let mut img = [0u8; 4];
        for (i, slot) in img.iter_mut().enumerate() {
            *slot = self.0[other.0[i] as usize];
        }
        Perm4(img)
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(self) -> i32 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Position of this permutation in [`ORDERED_S4`].
    pub fn ordered_index(self) -> usize {
        ORDERED_S4.iter().position(|&p| p == self).expect("valid permutation")
    }

    pub fn from_ordered_index(i: usize) -> Option<Self> {
        ORDERED_S4.get(i).copied()
    }

    /// Parses a four-character word such as `0132`.
    pub fn parse(word: &str) -> Option<Self> {
        let bytes = word.as_bytes();
        if bytes.len() != 4 {
            return None;
        }
        let mut img = [0u8; 4];
        for (slot, &b) in img.iter_mut().zip(bytes) {
            if !(b'0'..=b'3').contains(&b) {
                return None;
            }
            *slot = b - b'0';
        }
        Perm4::new(img)
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

/// Vertex pairs of the six edges of a tetrahedron, in the standard edge numbering.
pub const EDGE_VERTICES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Edge number joining two distinct vertices.
pub fn edge_between(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGE_VERTICES
        .iter()
        .position(|&e| e == (a, b))
        .expect("distinct vertices")
}

/// The two edges of the opposite-edge pair `d` (`0 = {01|23}`, `1 = {02|13}`, `2 = {03|12}`).
pub fn pair_edges(d: usize) -> (usize, usize) {
    (d, 5 - d)
}

/// Opposite-edge pair containing edge `e`.
pub fn pair_of_edge(e: usize) -> usize {
    e.min(5 - e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_list_is_sorted_and_complete() {
        for w in ORDERED_S4.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert_eq!(ORDERED_S4[8].to_string(), "1203");
        assert_eq!(ORDERED_S4[23].to_string(), "3210");
    }

    #[test]
    fn compose_and_inverse() {
        for &p in &ORDERED_S4 {
            assert_eq!(p.compose(p.inverse()), Perm4::IDENTITY);
            for &q in &ORDERED_S4 {
                assert_eq!(p.compose(q).sign(), p.sign() * q.sign());
            }
        }
    }

    #[test]
    fn edge_numbering() {
        for e in 0..6 {
            let (a, b) = EDGE_VERTICES[e];
            assert_eq!(edge_between(b, a), e);
            let (c, d) = EDGE_VERTICES[5 - e];
            assert_eq!([a, b, c, d].iter().copied().collect::<std::collections::BTreeSet<_>>().len(), 4);
        }
    }
}
