//! Small-graph machinery for trade analysis: union graphs of cycle sets on
//! at most 16 vertices, exhaustive 4-cycle edge partitions, and a canonical
//! key for isomorphism checks.

use crate::error::{Error, Result};
use crate::model::FourCycle;

pub const MAX_VERTS: usize = 16;

/// The union graph of a set of edge-disjoint 4-cycles (or any simple graph
/// on at most 16 vertices). Vertices keep their original labels; internal
/// storage is adjacency bitmasks over local indices.
#[derive(Clone, Copy)]
pub struct UnionGraph {
    n: usize,
    labels: [u8; MAX_VERTS],
    adj: [u16; MAX_VERTS],
    edge_count: usize,
}

impl UnionGraph {
    /// Union of the edges of `cycles`. Errors if two cycles share an edge.
    pub fn from_cycles(cycles: &[FourCycle]) -> Result<Self> {
        let mut edges = Vec::with_capacity(cycles.len() * 4);
        for c in cycles {
            for e in c.edges() {
                edges.push(e.endpoints());
            }
        }
        Self::from_edges(&edges)
    }

    /// Build from an edge list. Errors on a repeated edge.
    pub fn from_edges(edges: &[(u8, u8)]) -> Result<Self> {
        let mut labels: Vec<u8> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() > MAX_VERTS {
            return Err(Error::Unsupported {
                what: format!("union graph on {} vertices (max {MAX_VERTS})", labels.len()),
            });
        }
        let mut g = UnionGraph {
            n: labels.len(),
            labels: [0; MAX_VERTS],
            adj: [0; MAX_VERTS],
            edge_count: 0,
        };
        g.labels[..labels.len()].copy_from_slice(&labels);
        for &(u, v) in edges {
            let i = g.local(u);
            let j = g.local(v);
            if g.adj[i] & (1 << j) != 0 {
                return Err(Error::InvalidTrade {
                    reason: format!("edge {{{u},{v}}} appears in two cycles"),
                });
            }
            g.adj[i] |= 1 << j;
            g.adj[j] |= 1 << i;
            g.edge_count += 1;
        }
        Ok(g)
    }

    fn local(&self, label: u8) -> usize {
        self.labels[..self.n].binary_search(&label).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels[..self.n]
    }

    pub fn degree_of_label(&self, label: u8) -> u32 {
        self.adj[self.local(label)].count_ones()
    }

    /// Degree sequence in ascending order.
    pub fn degree_sequence(&self) -> Vec<u8> {
        let mut d: Vec<u8> = self.adj[..self.n]
            .iter()
            .map(|m| m.count_ones() as u8)
            .collect();
        d.sort_unstable();
        d
    }

    /// Two adjacent vertices of degree 2 (the obstruction to a disjoint
    /// 4-cycle re-decomposition in a bridgeless graph).
    pub fn has_adjacent_degree_2(&self) -> bool {
        let mut deg2 = 0u16;
        for i in 0..self.n {
            if self.adj[i].count_ones() == 2 {
                deg2 |= 1 << i;
            }
        }
        (0..self.n).any(|i| deg2 & (1 << i) != 0 && self.adj[i] & deg2 != 0)
    }

    /// All partitions of the edge set into 4-cycles, each decomposition
    /// sorted, the list sorted lexicographically. Every partition is found
    /// exactly once (branching is always on the least uncovered edge).
    pub fn four_cycle_partitions(&self) -> Vec<Vec<FourCycle>> {
        let mut out = Vec::new();
        if !self.edge_count.is_multiple_of(4) {
            return out;
        }
        let mut adj = self.adj;
        let mut current = Vec::with_capacity(self.edge_count / 4);
        self.partition_rec(&mut adj, self.edge_count, &mut current, &mut out);
        for d in &mut out {
            d.sort_unstable();
        }
        out.sort_unstable();
        out
    }

    fn partition_rec(
        &self,
        adj: &mut [u16; MAX_VERTS],
        remaining: usize,
        current: &mut Vec<FourCycle>,
        out: &mut Vec<Vec<FourCycle>>,
    ) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        // least uncovered edge (u, v), in local-index order
        let (u, v) = match (0..self.n).find_map(|i| {
            let m = adj[i];
            if m >> i != 0 {
                Some((i, i + (m >> i).trailing_zeros() as usize))
            } else {
                None
            }
        }) {
            Some(p) => p,
            None => return,
        };
        // 4-cycles u-v-w-x-u inside the remaining graph; w is v's other
        // neighbor, x is u's, so each cycle arises exactly once.
        let mut ws = adj[v] & !(1 << u);
        while ws != 0 {
            let w = ws.trailing_zeros() as usize;
            ws &= ws - 1;
            let mut xs = adj[u] & adj[w] & !(1 << v);
            while xs != 0 {
                let x = xs.trailing_zeros() as usize;
                xs &= xs - 1;
                let quad = [(u, v), (v, w), (w, x), (x, u)];
                for (a, b) in quad {
                    adj[a] &= !(1 << b);
                    adj[b] &= !(1 << a);
                }
                current.push(FourCycle::canonical_from([
                    self.labels[u],
                    self.labels[v],
                    self.labels[w],
                    self.labels[x],
                ]));
                self.partition_rec(adj, remaining - 4, current, out);
                current.pop();
                for (a, b) in quad {
                    adj[a] |= 1 << b;
                    adj[b] |= 1 << a;
                }
            }
        }
    }

    /// Canonical key deciding isomorphism: minimum upper-triangle adjacency
    /// bitstring over all relabelings that respect degree classes, together
    /// with the vertex count and sorted degree sequence. Suitable for the
    /// small dense graphs of trade analysis only.
    pub fn canonical_key(&self) -> GraphKey {
        assert!(
            self.n * (self.n - 1) / 2 <= 128,
            "canonical_key supports at most 16 vertices"
        );
        // vertices grouped by degree, ascending
        let mut by_degree: Vec<(u8, usize)> = (0..self.n)
            .map(|i| (self.adj[i].count_ones() as u8, i))
            .collect();
        by_degree.sort_unstable();
        let classes: Vec<Vec<usize>> = {
            let mut cs: Vec<Vec<usize>> = Vec::new();
            let mut last: Option<u8> = None;
            for (d, i) in by_degree.iter().copied() {
                if last != Some(d) {
                    cs.push(Vec::new());
                    last = Some(d);
                }
                cs.last_mut().unwrap().push(i);
            }
            cs
        };
        let mut order: Vec<usize> = vec![0; self.n];
        let mut used = [false; MAX_VERTS];
        let mut best: Option<u128> = None;
        self.canon_rec(&classes, 0, 0, &mut order, &mut used, &mut best);
        GraphKey {
            vertex_count: self.n as u8,
            degrees: self.degree_sequence(),
            adjacency: best.unwrap(),
        }
    }

    fn canon_rec(
        &self,
        classes: &[Vec<usize>],
        class_idx: usize,
        pos: usize,
        order: &mut Vec<usize>,
        used: &mut [bool; MAX_VERTS],
        best: &mut Option<u128>,
    ) {
        if class_idx == classes.len() {
            let bits = self.adjacency_bits(order);
            if best.is_none_or(|b| bits < b) {
                *best = Some(bits);
            }
            return;
        }
        let class = &classes[class_idx];
        if class.iter().all(|&v| used[v]) {
            self.canon_rec(classes, class_idx + 1, pos, order, used, best);
            return;
        }
        for &v in class {
            if !used[v] {
                used[v] = true;
                order[pos] = v;
                self.canon_rec(classes, class_idx, pos + 1, order, used, best);
                used[v] = false;
            }
        }
    }

    fn adjacency_bits(&self, order: &[usize]) -> u128 {
        let mut bits = 0u128;
        let mut k = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.adj[order[i]] & (1 << order[j]) != 0 {
                    bits |= 1 << k;
                }
                k += 1;
            }
        }
        bits
    }

    pub fn is_isomorphic(&self, other: &UnionGraph) -> bool {
        self.canonical_key() == other.canonical_key()
    }

    /// All automorphisms, each as a label map: `map[i]` is the image of
    /// `labels()[i]`. Enumerates degree-class-respecting bijections only.
    pub fn automorphisms(&self) -> Vec<Vec<u8>> {
        let mut by_degree: Vec<(u8, usize)> = (0..self.n)
            .map(|i| (self.adj[i].count_ones() as u8, i))
            .collect();
        by_degree.sort_unstable();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let mut last = None;
        for (d, i) in by_degree {
            if last != Some(d) {
                classes.push(Vec::new());
                last = Some(d);
            }
            classes.last_mut().unwrap().push(i);
        }
        let mut out = Vec::new();
        let mut image = vec![usize::MAX; self.n];
        let mut used = [false; MAX_VERTS];
        self.aut_rec(&classes, 0, 0, &mut image, &mut used, &mut out);
        out
    }

    fn aut_rec(
        &self,
        classes: &[Vec<usize>],
        class_idx: usize,
        member_idx: usize,
        image: &mut Vec<usize>,
        used: &mut [bool; MAX_VERTS],
        out: &mut Vec<Vec<u8>>,
    ) {
        if class_idx == classes.len() {
            out.push((0..self.n).map(|i| self.labels[image[i]]).collect());
            return;
        }
        if member_idx == classes[class_idx].len() {
            self.aut_rec(classes, class_idx + 1, 0, image, used, out);
            return;
        }
        let v = classes[class_idx][member_idx];
        for &w in &classes[class_idx] {
            if used[w] {
                continue;
            }
            image[v] = w;
            used[w] = true;
            // edges to already-imaged vertices must map to edges
            let consistent = (0..self.n).all(|u| {
                image[u] == usize::MAX
                    || u == v
                    || ((self.adj[v] & (1 << u) != 0) == (self.adj[w] & (1 << image[u]) != 0))
            });
            if consistent {
                self.aut_rec(classes, class_idx, member_idx + 1, image, used, out);
            }
            used[w] = false;
            image[v] = usize::MAX;
        }
    }
}

/// Isomorphism-invariant key of a small graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphKey {
    pub vertex_count: u8,
    pub degrees: Vec<u8>,
    pub adjacency: u128,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(a: u8, b: u8, c: u8, d: u8) -> FourCycle {
        FourCycle::new(a, b, c, d).unwrap()
    }

    #[test]
    fn double_diamond_union_is_k24_with_three_partitions() {
        let g = UnionGraph::from_cycles(&[cycle(1, 2, 3, 4), cycle(1, 5, 3, 6)]).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 8);
        assert_eq!(g.degree_sequence(), vec![2, 2, 2, 2, 4, 4]);
        let parts = g.four_cycle_partitions();
        assert_eq!(parts.len(), 3);
        // the input itself is among the results
        let input = {
            let mut v = vec![cycle(1, 2, 3, 4), cycle(1, 5, 3, 6)];
            v.sort_unstable();
            v
        };
        assert!(parts.contains(&input));
        // Table 1's other two columns as well
        let t2 = {
            let mut v = vec![cycle(1, 2, 3, 5), cycle(1, 4, 3, 6)];
            v.sort_unstable();
            v
        };
        assert!(parts.contains(&t2));
    }

    #[test]
    fn single_cycle_partitions_once() {
        let g = UnionGraph::from_cycles(&[cycle(2, 5, 7, 9)]).unwrap();
        let parts = g.four_cycle_partitions();
        assert_eq!(parts, vec![vec![cycle(2, 5, 7, 9)]]);
    }

    #[test]
    fn empty_input_has_one_empty_partition() {
        let g = UnionGraph::from_cycles(&[]).unwrap();
        assert_eq!(g.four_cycle_partitions(), vec![Vec::<FourCycle>::new()]);
    }

    #[test]
    fn shared_edge_is_rejected() {
        let r = UnionGraph::from_cycles(&[cycle(1, 2, 3, 4), cycle(1, 2, 5, 6)]);
        assert!(r.is_err());
    }

    #[test]
    fn canonical_key_is_relabeling_invariant() {
        let g1 = UnionGraph::from_cycles(&[cycle(1, 2, 3, 4), cycle(1, 5, 3, 6)]).unwrap();
        // same shape on shifted labels, different diagonal pair
        let g2 = UnionGraph::from_cycles(&[cycle(4, 3, 9, 7), cycle(4, 2, 9, 8)]).unwrap();
        assert!(g1.is_isomorphic(&g2));
        // K_{2,4} vs an 8-edge union of two vertex-disjoint cycles
        let g3 = UnionGraph::from_cycles(&[cycle(1, 2, 3, 4), cycle(5, 6, 7, 8)]).unwrap();
        assert!(!g1.is_isomorphic(&g3));
    }

    #[test]
    fn adjacent_degree_2_detection() {
        // an 8-cycle: every vertex has degree 2 and neighbors of degree 2
        let g = UnionGraph::from_edges(&[
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 6),
            (6, 7),
            (7, 8),
            (8, 1),
        ])
        .unwrap();
        assert!(g.has_adjacent_degree_2());
        let dd = UnionGraph::from_cycles(&[cycle(1, 2, 3, 4), cycle(1, 5, 3, 6)]).unwrap();
        assert!(!dd.has_adjacent_degree_2());
    }
}
