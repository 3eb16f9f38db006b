//! Vertices, edges, and 4-cycles of `K_n` in canonical form, together with
//! the deterministic edge and cycle indexing shared by every other module.
//!
//! Indexing conventions (fixed once, used everywhere):
//! * vertices are labeled `1..=n`,
//! * edges are ranked lexicographically over all `C(n,2)` pairs, 0-based,
//! * 4-cycles are ranked by (4-subset lex rank, canonical-tuple lex rank
//!   within the subset), 0-based; there are exactly `3*C(n,4)` of them.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A vertex of `K_n`, labeled `1..=n`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex(u8);

impl Vertex {
    pub fn new(label: u8) -> Result<Self> {
        if label == 0 {
            return Err(Error::OutOfRange { label, n: u8::MAX });
        }
        Ok(Vertex(label))
    }

    pub fn label(self) -> u8 {
        self.0
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An undirected edge of `K_n`, stored with `u < v`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: u8,
    v: u8,
}

impl Edge {
    pub fn new(a: u8, b: u8) -> Result<Self> {
        if a == 0 || b == 0 || a == b {
            return Err(Error::InvalidInput {
                what: format!("edge ({a},{b}) needs two distinct labels >= 1"),
            });
        }
        Ok(Edge {
            u: a.min(b),
            v: a.max(b),
        })
    }

    pub fn endpoints(self) -> (u8, u8) {
        (self.u, self.v)
    }

    /// Lexicographic rank of this edge among all `C(n,2)` pairs of `{1..n}`,
    /// starting at 0.
    pub fn index(self, n: u8) -> Result<usize> {
        if self.v > n {
            return Err(Error::OutOfRange { label: self.v, n });
        }
        let (u, v, n) = (self.u as usize, self.v as usize, n as usize);
        Ok((u - 1) * n - u * (u - 1) / 2 + (v - u - 1))
    }

    /// Inverse of [`Edge::index`].
    pub fn from_index(index: usize, n: u8) -> Result<Self> {
        let total = pair_count(n);
        if index >= total {
            return Err(Error::InvalidInput {
                what: format!("edge index {index} out of range for n={n}"),
            });
        }
        let mut rest = index;
        for u in 1..n {
            let row = (n - u) as usize;
            if rest < row {
                return Edge::new(u, u + 1 + rest as u8);
            }
            rest -= row;
        }
        unreachable!("index bounds checked above")
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.u, self.v)
    }
}

/// `C(n,2)`.
pub fn pair_count(n: u8) -> usize {
    let n = n as usize;
    if n < 2 {
        return 0;
    }
    n * (n - 1) / 2
}

/// `3 * C(n,4)`: the number of distinct 4-cycles of `K_n`.
pub fn cycle_count(n: u8) -> usize {
    let n = n as usize;
    if n < 4 {
        return 0;
    }
    3 * (n * (n - 1) * (n - 2) * (n - 3) / 24)
}

/// A 4-cycle of `K_n`, stored as the lexicographically least of its eight
/// dihedral representations: the first vertex is the minimum of the four and
/// the second is the smaller of its two cycle-neighbors.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FourCycle {
    v: [u8; 4],
}

impl FourCycle {
    /// Canonicalize the traversal `a-b-c-d-a`. Errors if the vertices are not
    /// four distinct labels.
    pub fn new(a: u8, b: u8, c: u8, d: u8) -> Result<Self> {
        let raw = [a, b, c, d];
        if raw.contains(&0) || a == b || a == c || a == d || b == c || b == d || c == d {
            return Err(Error::InvalidCycle { a, b, c, d });
        }
        Ok(Self::canonical_from(raw))
    }

    pub fn from_array(v: [u8; 4]) -> Result<Self> {
        Self::new(v[0], v[1], v[2], v[3])
    }

    /// Canonical form of a traversal already known to consist of four
    /// distinct nonzero labels.
    pub(crate) fn canonical_from(raw: [u8; 4]) -> Self {
        let mut at = 0;
        for i in 1..4 {
            if raw[i] < raw[at] {
                at = i;
            }
        }
        let next = raw[(at + 1) & 3];
        let prev = raw[(at + 3) & 3];
        let v = if next < prev {
            [raw[at], next, raw[(at + 2) & 3], prev]
        } else {
            [raw[at], prev, raw[(at + 2) & 3], next]
        };
        FourCycle { v }
    }

    /// The canonical traversal order `(a, b, c, d)`.
    pub fn vertices(&self) -> [u8; 4] {
        self.v
    }

    /// The four vertex labels in ascending order.
    pub fn sorted_vertices(&self) -> [u8; 4] {
        let mut s = self.v;
        s.sort_unstable();
        s
    }

    pub fn max_vertex(&self) -> u8 {
        self.v.iter().copied().max().unwrap()
    }

    /// The four edges `{a,b},{b,c},{c,d},{d,a}`.
    pub fn edges(&self) -> [Edge; 4] {
        let v = self.v;
        [
            Edge::new(v[0], v[1]).unwrap(),
            Edge::new(v[1], v[2]).unwrap(),
            Edge::new(v[2], v[3]).unwrap(),
            Edge::new(v[3], v[0]).unwrap(),
        ]
    }

    /// The two diagonal pairs `{a,c}` and `{b,d}` (the non-edges on the
    /// vertex set).
    pub fn diagonals(&self) -> [(u8, u8); 2] {
        let v = self.v;
        [
            (v[0].min(v[2]), v[0].max(v[2])),
            (v[1].min(v[3]), v[1].max(v[3])),
        ]
    }

    pub fn contains_vertex(&self, label: u8) -> bool {
        self.v.contains(&label)
    }

    /// Deterministic index of this cycle among all 4-cycles of `K_n`:
    /// 4-subsets in lex order, the 3 cycles per subset in canonical-tuple
    /// lex order. Inverse of [`FourCycle::from_index`].
    pub fn index(&self, n: u8) -> Result<usize> {
        let m = self.max_vertex();
        if m > n {
            return Err(Error::OutOfRange { label: m, n });
        }
        let s = self.sorted_vertices();
        Ok(3 * subset_rank(&s, n) + self.config_rank())
    }

    /// Which of the three cycles on this 4-subset we are, in canonical-tuple
    /// lex order: 0 if `a` is diagonal to the third-smallest vertex, 1 if to
    /// the largest, 2 if to the second-smallest.
    fn config_rank(&self) -> usize {
        let s = self.sorted_vertices();
        let opp = self.v[2]; // diagonal partner of the minimum vertex
        if opp == s[2] {
            0
        } else if opp == s[3] {
            1
        } else {
            2
        }
    }

    pub fn from_index(index: usize, n: u8) -> Result<Self> {
        if index >= cycle_count(n) {
            return Err(Error::InvalidInput {
                what: format!("cycle index {index} out of range for n={n}"),
            });
        }
        let s = subset_from_rank(index / 3, n);
        let [w, x, y, z] = s;
        let raw = match index % 3 {
            0 => [w, x, y, z],
            1 => [w, x, z, y],
            _ => [w, y, x, z],
        };
        Ok(Self::canonical_from(raw))
    }
}

impl fmt::Debug for FourCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.v[0], self.v[1], self.v[2], self.v[3])
    }
}

impl fmt::Display for FourCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.v[0], self.v[1], self.v[2], self.v[3])
    }
}

// Cycles order by (sorted 4-subset, canonical tuple), which agrees with
// `index` for every n large enough to contain both cycles.
impl Ord for FourCycle {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.sorted_vertices(), self.v).cmp(&(other.sorted_vertices(), other.v))
    }
}

impl PartialOrd for FourCycle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut r = 1usize;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Lex rank (0-based) of the ascending 4-subset `s` of `{1..n}`.
fn subset_rank(s: &[u8; 4], n: u8) -> usize {
    let n = n as usize;
    let mut rank = 0;
    let mut prev = 0usize;
    for (i, &x) in s.iter().enumerate() {
        let x = x as usize;
        for t in prev + 1..x {
            rank += binom(n - t, 3 - i);
        }
        prev = x;
    }
    rank
}

fn subset_from_rank(mut rank: usize, n: u8) -> [u8; 4] {
    let n = n as usize;
    let mut s = [0u8; 4];
    let mut t = 1usize;
    for (i, slot) in s.iter_mut().enumerate() {
        loop {
            let below = binom(n - t, 3 - i);
            if rank < below {
                *slot = t as u8;
                t += 1;
                break;
            }
            rank -= below;
            t += 1;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalize_examples() {
        // rotation + reflection of the same cycle
        let c = FourCycle::new(3, 2, 1, 4).unwrap();
        assert_eq!(c.vertices(), [1, 2, 3, 4]);
        // already canonical
        let c = FourCycle::new(1, 2, 3, 4).unwrap();
        assert_eq!(c.vertices(), [1, 2, 3, 4]);
        // 5 < 6 keeps the printed orientation
        let c = FourCycle::new(1, 5, 3, 6).unwrap();
        assert_eq!(c.vertices(), [1, 5, 3, 6]);
    }

    #[test]
    fn canonicalize_rejects_duplicates() {
        assert!(matches!(
            FourCycle::new(1, 2, 1, 3),
            Err(Error::InvalidCycle { .. })
        ));
        assert!(FourCycle::new(0, 2, 1, 3).is_err());
    }

    #[test]
    fn canonical_constant_over_dihedral_orbit() {
        let base = [2u8, 7, 5, 9];
        let canon = FourCycle::from_array(base).unwrap();
        for r in 0..4 {
            let rot = [base[r], base[(r + 1) % 4], base[(r + 2) % 4], base[(r + 3) % 4]];
            let refl = [rot[0], rot[3], rot[2], rot[1]];
            assert_eq!(FourCycle::from_array(rot).unwrap(), canon);
            assert_eq!(FourCycle::from_array(refl).unwrap(), canon);
        }
        // idempotent
        assert_eq!(FourCycle::from_array(canon.vertices()).unwrap(), canon);
    }

    #[test]
    fn counts() {
        assert_eq!(cycle_count(9), 378);
        assert_eq!(cycle_count(6), 45);
        assert_eq!(pair_count(9), 36);
        assert_eq!(pair_count(6), 15);
    }

    #[test]
    fn edge_index_roundtrip() {
        for n in [5u8, 6, 9, 25] {
            for idx in 0..pair_count(n) {
                let e = Edge::from_index(idx, n).unwrap();
                assert_eq!(e.index(n).unwrap(), idx);
            }
        }
        assert_eq!(Edge::new(1, 2).unwrap().index(9).unwrap(), 0);
        assert_eq!(Edge::new(8, 9).unwrap().index(9).unwrap(), 35);
    }

    #[test]
    fn cycle_index_roundtrip_exhaustive() {
        for n in [6u8, 9] {
            for idx in 0..cycle_count(n) {
                let c = FourCycle::from_index(idx, n).unwrap();
                assert_eq!(c.index(n).unwrap(), idx, "cycle {c:?}");
            }
        }
    }

    #[test]
    fn cycle_order_matches_index_order() {
        let n = 9;
        let all: Vec<FourCycle> = (0..cycle_count(n))
            .map(|i| FourCycle::from_index(i, n).unwrap())
            .collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
    }

    #[test]
    fn out_of_range_vertex() {
        let c = FourCycle::new(1, 2, 3, 7).unwrap();
        assert!(matches!(c.index(6), Err(Error::OutOfRange { label: 7, n: 6 })));
    }

    #[test]
    fn diagonals_of_canonical_cycle() {
        let c = FourCycle::new(1, 5, 3, 6).unwrap();
        assert_eq!(c.diagonals(), [(1, 3), (5, 6)]);
    }
}
