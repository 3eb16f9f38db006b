//! Detection, classification, and extension of 4-cycle trades, plus the
//! degree-equation and graphicality oracles used in their classification.
//!
//! Detection is generic: the union of a 2- or 3-subset of cycles is
//! re-decomposed exhaustively, so no exotic configuration can be missed.
//! The only pruning applied is the adjacent-degree-2 exclusion, which holds
//! for every bridgeless graph (and a union of edge-disjoint cycles is
//! always bridgeless), so it discards no genuine trade.

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use crate::configs::TradeConfig;
use crate::error::{Error, Result};
use crate::graphs::UnionGraph;
use crate::model::{cycle_count, Bitrade, CycleSystem, FourCycle, MuWayTrade};

// ---------------------------------------------------------------------------
// degree equations and graphicality
// ---------------------------------------------------------------------------

/// A solution of the trade-graph degree equations: `x[d]` vertices of even
/// degree `d`, with `sum x = v` and `sum d*x = 8s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeSolution {
    pub volume: usize,
    pub foundation: u8,
    /// Count per even degree 2, 4, ..., including zero counts.
    pub counts: Vec<(u8, u8)>,
}

impl DegreeSolution {
    pub fn count_of(&self, degree: u8) -> u8 {
        self.counts
            .iter()
            .find(|(d, _)| *d == degree)
            .map_or(0, |(_, c)| *c)
    }

    /// The degree sequence in nonincreasing order.
    pub fn degree_sequence(&self) -> Vec<u8> {
        let mut seq = Vec::with_capacity(self.foundation as usize);
        for &(d, c) in self.counts.iter().rev() {
            seq.extend(std::iter::repeat_n(d, c as usize));
        }
        seq
    }
}

/// All nonnegative solutions of the degree equations for volume `s` and
/// foundation `v`, restricted by the adjacent-degree-2 exclusion bound
/// `x_2 <= 2s`. Solutions are ordered by ascending `x_2, x_4, ...`.
pub fn solve_degree_equations(s: usize, v: u8) -> Vec<DegreeSolution> {
    fn rec(
        degrees: &[u8],
        i: usize,
        verts_left: i32,
        degsum_left: i32,
        counts: &mut [u8],
        out: &mut Vec<Vec<u8>>,
    ) {
        if i == degrees.len() {
            if verts_left == 0 && degsum_left == 0 {
                out.push(counts.to_vec());
            }
            return;
        }
        let d = degrees[i] as i32;
        for x in 0..=verts_left {
            if x * d > degsum_left {
                break;
            }
            counts[i] = x as u8;
            rec(degrees, i + 1, verts_left - x, degsum_left - x * d, counts, out);
        }
        counts[i] = 0;
    }

    let degrees: Vec<u8> = (1..)
        .map(|k| 2 * k)
        .take_while(|d| *d <= v.saturating_sub(1))
        .collect();
    let mut counts = vec![0u8; degrees.len()];
    let mut raw = Vec::new();
    rec(&degrees, 0, v as i32, 8 * s as i32, &mut counts, &mut raw);
    raw.into_iter()
        .filter(|sol| sol.first().copied().unwrap_or(0) as usize <= 2 * s)
        .map(|sol| DegreeSolution {
            volume: s,
            foundation: v,
            counts: degrees.iter().copied().zip(sol).collect(),
        })
        .collect()
}

/// Erdos-Gallai test: is the integer sequence the degree sequence of some
/// simple graph? Input in any order.
pub fn is_graphical(seq: &[u8]) -> bool {
    let mut d: Vec<i64> = seq.iter().map(|&x| x as i64).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    let n = d.len() as i64;
    if d.iter().any(|&x| x >= n) {
        return false;
    }
    if d.iter().sum::<i64>() % 2 != 0 {
        return false;
    }
    let mut lhs = 0i64;
    for k in 1..=d.len() {
        lhs += d[k - 1];
        let rhs: i64 =
            (k as i64) * (k as i64 - 1) + d[k..].iter().map(|&x| x.min(k as i64)).sum::<i64>();
        if lhs > rhs {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// re-decomposition and trade detection
// ---------------------------------------------------------------------------

/// All partitions of the union of `cycles` into 4-cycles, in deterministic
/// order; the input itself is always among them. Errors if the input cycles
/// are not pairwise edge-disjoint.
pub fn decompositions_of_union(cycles: &[FourCycle]) -> Result<Vec<Vec<FourCycle>>> {
    Ok(UnionGraph::from_cycles(cycles)?.four_cycle_partitions())
}

/// Partitions of the union sharing no cycle with the input.
fn disjoint_mates(cycles: &[FourCycle]) -> Result<Vec<Vec<FourCycle>>> {
    let mut sorted = cycles.to_vec();
    sorted.sort_unstable();
    Ok(decompositions_of_union(cycles)?
        .into_iter()
        .filter(|d| d.iter().all(|c| sorted.binary_search(c).is_err()))
        .collect())
}

/// Which subset sizes to scan for trades.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TradeVolume {
    Two,
    Three,
    Both,
}

impl TradeVolume {
    fn wants(self, k: usize) -> bool {
        matches!(
            (self, k),
            (TradeVolume::Two, 2) | (TradeVolume::Three, 3) | (TradeVolume::Both, 2 | 3)
        )
    }
}

/// Adjacent-degree-2 filter over a cycle subset, computed from vertex
/// occurrence counts (a vertex in k cycles has union degree 2k) without
/// building the union graph.
#[inline]
fn passes_degree_filter(subset: &[&FourCycle]) -> bool {
    let mut occ = [0u8; 64];
    for c in subset {
        for v in c.vertices() {
            occ[v as usize] += 1;
        }
    }
    for c in subset {
        for e in c.edges() {
            let (u, v) = e.endpoints();
            if occ[u as usize] == 1 && occ[v as usize] == 1 {
                return false;
            }
        }
    }
    true
}

fn trades_of_subset(subset: &[&FourCycle], out: &mut Vec<Bitrade>) {
    if !passes_degree_filter(subset) {
        return;
    }
    let t1: Vec<FourCycle> = subset.iter().map(|c| **c).collect();
    for mate in disjoint_mates(&t1).expect("system cycles are edge-disjoint") {
        out.push(Bitrade::new(t1.clone(), mate).expect("re-decomposition yields a valid bitrade"));
    }
}

/// Every bitrade `(t1, t2)` with `t1` a 2- or 3-subset of the system's
/// cycles and `t2` a disjoint re-decomposition of its union. Deterministic
/// order (sorted by the cycle sequences of both legs).
pub fn find_trades(s: &CycleSystem, volume: TradeVolume) -> Vec<Bitrade> {
    let cycles = s.cycles();
    let m = cycles.len();
    let mut out = Vec::new();
    if volume.wants(2) {
        for i in 0..m {
            for j in i + 1..m {
                trades_of_subset(&[&cycles[i], &cycles[j]], &mut out);
            }
        }
    }
    if volume.wants(3) {
        for i in 0..m {
            for j in i + 1..m {
                for k in j + 1..m {
                    trades_of_subset(&[&cycles[i], &cycles[j], &cycles[k]], &mut out);
                }
            }
        }
    }
    out.sort_by(|a, b| (a.t1(), a.t2()).cmp(&(b.t1(), b.t2())));
    out
}

/// Configuration label of a volume-2/3 bitrade.
pub fn classify_config(t: &Bitrade) -> Result<TradeConfig> {
    if t.volume() > 3 {
        return Err(Error::Unsupported {
            what: format!("classification of volume-{} trades", t.volume()),
        });
    }
    Ok(t.config())
}

// ---------------------------------------------------------------------------
// mu-way extension
// ---------------------------------------------------------------------------

/// Canonical key of a set of decompositions of one union graph, up to any
/// relabeling of the foundation vertices: the lexicographically least
/// flattened representation over all foundation bijections.
fn muway_canonical_key(parts: &[Vec<FourCycle>]) -> Vec<u8> {
    let mut foundation: Vec<u8> = parts
        .iter()
        .flat_map(|p| p.iter().flat_map(|c| c.vertices()))
        .collect();
    foundation.sort_unstable();
    foundation.dedup();
    let f = foundation.len() as u8;
    let mut pos = [0u8; 64];
    for (i, &v) in foundation.iter().enumerate() {
        pos[v as usize] = i as u8 + 1;
    }
    let mut best: Option<Vec<u8>> = None;
    crate::model::for_each_permutation(f, |images| {
        let mut relabeled: Vec<Vec<[u8; 4]>> = parts
            .iter()
            .map(|p| {
                let mut cs: Vec<[u8; 4]> = p
                    .iter()
                    .map(|c| {
                        let m = c.vertices().map(|v| images[pos[v as usize] as usize - 1]);
                        FourCycle::canonical_from(m).vertices()
                    })
                    .collect();
                cs.sort_unstable();
                cs
            })
            .collect();
        relabeled.sort_unstable();
        let flat: Vec<u8> = relabeled.into_iter().flatten().flatten().collect();
        if best.as_ref().is_none_or(|b| flat < *b) {
            best = Some(flat);
        }
    });
    best.unwrap()
}

/// All maximal mu-way extensions of a bitrade (maximal sets of mutually
/// disjoint decompositions of its union graph containing both legs),
/// deduplicated up to isomorphism. Deterministic order.
pub fn extend_muway(t: &Bitrade) -> Result<Vec<MuWayTrade>> {
    let parts = decompositions_of_union(t.t1())?;
    let find = |leg: &[FourCycle]| -> usize {
        let mut sorted = leg.to_vec();
        sorted.sort_unstable();
        parts
            .iter()
            .position(|p| *p == sorted)
            .expect("trade legs decompose their own union")
    };
    let i1 = find(t.t1());
    let i2 = find(t.t2());
    let k = parts.len();
    let disjoint: Vec<Vec<bool>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| i != j && parts[i].iter().all(|c| !parts[j].contains(c)))
                .collect()
        })
        .collect();

    // maximal cliques through {i1, i2}, candidates in ascending order
    fn grow(
        current: &mut Vec<usize>,
        candidates: &[usize],
        disjoint: &[Vec<bool>],
        out: &mut Vec<Vec<usize>>,
    ) {
        let mut extended = false;
        for (pos, &v) in candidates.iter().enumerate() {
            let next: Vec<usize> = candidates[pos + 1..]
                .iter()
                .copied()
                .filter(|&w| disjoint[v][w])
                .collect();
            current.push(v);
            grow(current, &next, disjoint, out);
            current.pop();
            extended = true;
        }
        if !extended {
            // leaf: maximal iff no vertex outside extends the whole clique
            let maximal = (0..disjoint.len())
                .all(|v| current.contains(&v) || current.iter().any(|&u| !disjoint[u][v]));
            if maximal {
                let mut clique = current.clone();
                clique.sort_unstable();
                if !out.contains(&clique) {
                    out.push(clique);
                }
            }
        }
    }

    let base_candidates: Vec<usize> = (0..k)
        .filter(|&v| v != i1 && v != i2 && disjoint[i1][v] && disjoint[i2][v])
        .collect();
    let mut cliques = Vec::new();
    let mut current = vec![i1.min(i2), i1.max(i2)];
    grow(&mut current, &base_candidates, &disjoint, &mut cliques);

    let mut seen: Vec<(Vec<u8>, MuWayTrade)> = Vec::new();
    for clique in cliques {
        let chosen: Vec<Vec<FourCycle>> = clique.iter().map(|&i| parts[i].clone()).collect();
        let key = muway_canonical_key(&chosen);
        if !seen.iter().any(|(existing, _)| *existing == key) {
            seen.push((key, MuWayTrade::new(chosen)?));
        }
    }
    seen.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(seen.into_iter().map(|(_, m)| m).collect())
}

// ---------------------------------------------------------------------------
// exhaustive census of volume-3 trades by foundation
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusEntry {
    pub foundation: u8,
    /// Union graphs (up to isomorphism) realizable by 3 edge-disjoint
    /// 4-cycles on exactly `foundation` vertices that admit a disjoint mate.
    pub classes: usize,
}

/// For each foundation in range, enumerate all union graphs of 3 pairwise
/// edge-disjoint 4-cycles covering exactly that many vertices (one cycle
/// fixed to (1,2,3,4), which loses no isomorphism class), and count the
/// classes admitting a disjoint re-decomposition.
pub fn exhaustive_trade_census(foundations: std::ops::RangeInclusive<u8>) -> Vec<CensusEntry> {
    foundations
        .map(|v| CensusEntry {
            foundation: v,
            classes: census_one(v),
        })
        .collect()
}

fn census_one(v: u8) -> usize {
    assert!((6..=12).contains(&v), "volume-3 census supports 6 <= v <= 12");
    let total = cycle_count(v);
    let cycles: Vec<FourCycle> = (0..total)
        .map(|i| FourCycle::from_index(i, v).unwrap())
        .collect();
    let edge_masks: Vec<u64> = cycles
        .iter()
        .map(|c| {
            c.edges()
                .iter()
                .fold(0u64, |m, e| m | (1 << e.index(v).unwrap()))
        })
        .collect();
    let vert_masks: Vec<u16> = cycles
        .iter()
        .map(|c| c.vertices().iter().fold(0u16, |m, &x| m | (1 << x)))
        .collect();
    let full_verts: u16 = (1..=v).fold(0u16, |m, x| m | (1 << x));

    let c1 = FourCycle::new(1, 2, 3, 4).unwrap();
    let i1 = c1.index(v).unwrap();
    let (m1, v1) = (edge_masks[i1], vert_masks[i1]);

    let mut class_keys: Vec<crate::graphs::GraphKey> = Vec::new();
    for j in 0..total {
        if edge_masks[j] & m1 != 0 {
            continue;
        }
        for k in j + 1..total {
            if edge_masks[k] & (m1 | edge_masks[j]) != 0 {
                continue;
            }
            if v1 | vert_masks[j] | vert_masks[k] != full_verts {
                continue;
            }
            let triple = [&c1, &cycles[j], &cycles[k]];
            if !passes_degree_filter(&triple) {
                continue;
            }
            let t1 = [c1, cycles[j], cycles[k]];
            let parts = decompositions_of_union(&t1).expect("edge-disjoint by masks");
            let has_mate = (0..parts.len()).any(|a| {
                (a + 1..parts.len()).any(|b| parts[a].iter().all(|c| !parts[b].contains(c)))
            });
            if !has_mate {
                continue;
            }
            let key = UnionGraph::from_cycles(&t1).unwrap().canonical_key();
            if !class_keys.contains(&key) {
                class_keys.push(key);
            }
        }
    }
    class_keys.len()
}

// ---------------------------------------------------------------------------
// whole-K9 trade table (backs the move-graph search)
// ---------------------------------------------------------------------------

/// Precomputed mates of every trading 2- and 3-subset of cycles of K_9,
/// built once by the same generic re-decomposition as [`find_trades`].
/// Keys pack ascending cycle indices in base 378.
pub struct TradeTable {
    pairs: HashMap<u32, Vec<[u16; 2]>>,
    triples: HashMap<u32, Vec<[u16; 3]>>,
}

impl TradeTable {
    /// Mates of the pair `{i, j}` (i < j), if it trades.
    pub fn pair_mates(&self, i: u16, j: u16) -> Option<&[[u16; 2]]> {
        self.pairs
            .get(&(i as u32 * 378 + j as u32))
            .map(|v| v.as_slice())
    }

    /// Mates of the triple `{i, j, k}` (i < j < k), if it trades.
    pub fn triple_mates(&self, i: u16, j: u16, k: u16) -> Option<&[[u16; 3]]> {
        self.triples
            .get(&((i as u32 * 378 + j as u32) * 378 + k as u32))
            .map(|v| v.as_slice())
    }

    pub fn trading_pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn trading_triple_count(&self) -> usize {
        self.triples.len()
    }
}

pub fn trade_table9() -> &'static TradeTable {
    static TABLE: OnceLock<TradeTable> = OnceLock::new();
    TABLE.get_or_init(build_trade_table9)
}

fn build_trade_table9() -> TradeTable {
    let n = 9u8;
    let total = cycle_count(n); // 378
    let cycles: Vec<FourCycle> = (0..total)
        .map(|i| FourCycle::from_index(i, n).unwrap())
        .collect();
    let masks: Vec<u64> = cycles
        .iter()
        .map(|c| {
            c.edges()
                .iter()
                .fold(0u64, |m, e| m | (1 << e.index(n).unwrap()))
        })
        .collect();
    let idx = crate::decompose::indexer(n);
    let to_ids = |d: &[FourCycle]| -> Vec<u16> {
        let mut ids: Vec<u16> = d
            .iter()
            .map(|c| idx.index_of(c.vertices()) as u16)
            .collect();
        ids.sort_unstable();
        ids
    };

    let mut pairs = HashMap::new();
    let mut triples = HashMap::new();
    for i in 0..total {
        for j in i + 1..total {
            if masks[i] & masks[j] != 0 {
                continue;
            }
            if passes_degree_filter(&[&cycles[i], &cycles[j]]) {
                let t1 = [cycles[i], cycles[j]];
                let mates: Vec<[u16; 2]> = disjoint_mates(&t1)
                    .unwrap()
                    .iter()
                    .map(|d| {
                        let ids = to_ids(d);
                        [ids[0], ids[1]]
                    })
                    .collect();
                if !mates.is_empty() {
                    pairs.insert(i as u32 * 378 + j as u32, mates);
                }
            }
            let mij = masks[i] | masks[j];
            for k in j + 1..total {
                if masks[k] & mij != 0 {
                    continue;
                }
                if !passes_degree_filter(&[&cycles[i], &cycles[j], &cycles[k]]) {
                    continue;
                }
                let t1 = [cycles[i], cycles[j], cycles[k]];
                let mates: Vec<[u16; 3]> = disjoint_mates(&t1)
                    .unwrap()
                    .iter()
                    .map(|d| {
                        let ids = to_ids(d);
                        [ids[0], ids[1], ids[2]]
                    })
                    .collect();
                if !mates.is_empty() {
                    triples.insert((i as u32 * 378 + j as u32) * 378 + k as u32, mates);
                }
            }
        }
    }
    TradeTable { pairs, triples }
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

/// Bitrade from two table columns.
pub fn bitrade_from_parts(t1: &[FourCycle], t2: &[FourCycle]) -> Result<Bitrade> {
    Bitrade::new(t1.to_vec(), t2.to_vec())
}

/// Breadth-first distance between two decompositions of one union graph
/// under volume-2 (double-diamond) moves applied inside the decomposition.
pub fn dd_move_distance(from: &[FourCycle], to: &[FourCycle]) -> Result<Option<usize>> {
    let norm = |d: &[FourCycle]| {
        let mut v = d.to_vec();
        v.sort_unstable();
        v
    };
    let start = norm(from);
    let goal = norm(to);
    let mut dist: HashMap<Vec<FourCycle>, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    dist.insert(start.clone(), 0);
    queue.push_back(start);
    while let Some(cur) = queue.pop_front() {
        let d = dist[&cur];
        if cur == goal {
            return Ok(Some(d));
        }
        for a in 0..cur.len() {
            for b in a + 1..cur.len() {
                let pair = [cur[a], cur[b]];
                for mate in disjoint_mates(&pair)? {
                    let mut next: Vec<FourCycle> = cur
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != a && *i != b)
                        .map(|(_, c)| *c)
                        .collect();
                    next.extend(mate);
                    next.sort_unstable();
                    if !dist.contains_key(&next) {
                        dist.insert(next.clone(), d + 1);
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Ok(None)
}
