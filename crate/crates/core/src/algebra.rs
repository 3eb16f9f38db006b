//! The pair inclusion matrix M (edges of `K_n` against all candidate
//! 4-cycles), its exact rank and nullity, trade frequency vectors, and the
//! double-diamond kernel-span experiment.
//!
//! Rank is exact: fraction-free (Bareiss) elimination over arbitrary-
//! precision integers, deterministically pivoted. A modular elimination is
//! available as a fast pre-screen and as the certificate spot-check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::model::{cycle_count, pair_count, Bitrade, FourCycle};

/// The 0/1 inclusion matrix of order n: `C(n,2)` edge rows by `3*C(n,4)`
/// cycle columns, stored column-sparse (each column holds its 4 edge rows).
pub struct InclusionMatrix {
    n: u8,
    rows: usize,
    cols: usize,
    col_edges: Vec<[u32; 4]>,
}

/// Deterministic matrix under the global edge and cycle indexing.
pub fn build_matrix(n: u8) -> Result<InclusionMatrix> {
    if n < 4 {
        return Err(Error::TooSmall { n, min: 4 });
    }
    let rows = pair_count(n);
    let cols = cycle_count(n);
    let mut col_edges = Vec::with_capacity(cols);
    for i in 0..cols {
        let c = FourCycle::from_index(i, n)?;
        let e = c.edges();
        col_edges.push([
            e[0].index(n)? as u32,
            e[1].index(n)? as u32,
            e[2].index(n)? as u32,
            e[3].index(n)? as u32,
        ]);
    }
    Ok(InclusionMatrix {
        n,
        rows,
        cols,
        col_edges,
    })
}

impl InclusionMatrix {
    pub fn order(&self) -> u8 {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, edge: usize, cycle: usize) -> bool {
        self.col_edges[cycle].contains(&(edge as u32))
    }

    /// Rows of each column (always 4 edges).
    pub fn column(&self, cycle: usize) -> [u32; 4] {
        self.col_edges[cycle]
    }

    pub fn column_sum(&self, cycle: usize) -> usize {
        let _ = cycle;
        4
    }

    pub fn row_sum(&self, edge: usize) -> usize {
        self.col_edges
            .iter()
            .filter(|c| c.contains(&(edge as u32)))
            .count()
    }

    /// Dense row-major 0/1 copy.
    pub fn dense_rows(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; self.cols]; self.rows];
        for (c, edges) in self.col_edges.iter().enumerate() {
            for &e in edges {
                m[e as usize][c] = 1;
            }
        }
        m
    }
}

/// Exact rank over the rationals by fraction-free elimination with
/// deterministic pivoting (columns left to right, first nonzero row).
pub fn exact_rank(m: &InclusionMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .dense_rows()
        .into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect();
    let rows = m.rows;
    let cols = m.cols;
    let mut rank = 0usize;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot_row) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot_row);
        let pivot = a[rank][col].clone();
        let (pivot_slice, rest) = a.split_at_mut(rank + 1);
        let pivot_row = &pivot_slice[rank];
        for row in rest.iter_mut() {
            let factor = row[col].clone();
            for (x, px) in row[col..].iter_mut().zip(&pivot_row[col..]).skip(1) {
                *x = (&*x * &pivot - &factor * px) / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
    }
    rank
}

/// Rank modulo a prime (used as a pre-screen and for certificate
/// spot-checks). Never exceeds the rational rank.
pub fn modular_rank(m: &InclusionMatrix, p: u64) -> usize {
    let rows: Vec<Vec<u64>> = m
        .dense_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|x| x as u64 % p).collect())
        .collect();
    modular_row_rank(rows, m.cols, p)
}

fn modular_row_rank(mut a: Vec<Vec<u64>>, cols: usize, p: u64) -> usize {
    let rows = a.len();
    let mut rank = 0usize;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot_row) = (rank..rows).find(|&r| !a[r][col].is_multiple_of(p)) else {
            continue;
        };
        a.swap(rank, pivot_row);
        let inv = mod_inverse(a[rank][col], p);
        for x in a[rank][col..].iter_mut() {
            *x = *x * inv % p;
        }
        let (head, tail) = a.split_at_mut(rank);
        let (pivot_slice, tail) = tail.split_at_mut(1);
        let pivot_row = &pivot_slice[0];
        for row in head.iter_mut().chain(tail.iter_mut()) {
            if row[col] != 0 {
                let f = row[col];
                for (x, px) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = (*x + (p - f) * px) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inverse(x: u64, p: u64) -> u64 {
    // p prime: x^(p-2) mod p
    let mut base = x % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Two fixed primes above 2^20 for modular pre-screens.
pub fn screen_primes() -> (u64, u64) {
    fn is_prime(x: u64) -> bool {
        if x < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= x {
            if x.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }
    let mut p1 = (1u64 << 20) + 1;
    while !is_prime(p1) {
        p1 += 2;
    }
    let mut p2 = p1 + 2;
    while !is_prime(p2) {
        p2 += 2;
    }
    (p1, p2)
}

/// `3*C(n,4) - rank`, which the full-rank property makes equal to
/// `3*C(n,4) - C(n,2)`.
pub fn nullity(m: &InclusionMatrix) -> usize {
    m.cols - exact_rank(m)
}

/// The signed frequency vector of a bitrade over the cycle columns: +1 on
/// t1's cycles, -1 on t2's. Kernel membership (M * X = 0) is verified at
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TradeVector {
    n: u8,
    pos: Vec<u32>,
    neg: Vec<u32>,
}

impl TradeVector {
    pub fn order(&self) -> u8 {
        self.n
    }

    pub fn positive_cycles(&self) -> &[u32] {
        &self.pos
    }

    pub fn negative_cycles(&self) -> &[u32] {
        &self.neg
    }

    pub fn support(&self) -> usize {
        self.pos.len() + self.neg.len()
    }

    /// Dense length-`3*C(n,4)` form.
    pub fn dense(&self) -> Vec<i64> {
        let mut v = vec![0i64; cycle_count(self.n)];
        for &i in &self.pos {
            v[i as usize] += 1;
        }
        for &i in &self.neg {
            v[i as usize] -= 1;
        }
        v
    }

    pub fn negated(&self) -> TradeVector {
        TradeVector {
            n: self.n,
            pos: self.neg.clone(),
            neg: self.pos.clone(),
        }
    }
}

/// Build the frequency vector of `t` over the cycles of `K_n`, verifying
/// `M * X = 0` before returning.
pub fn trade_vector(t: &Bitrade, n: u8) -> Result<TradeVector> {
    let mut pos: Vec<u32> = t
        .t1()
        .iter()
        .map(|c| c.index(n).map(|i| i as u32))
        .collect::<Result<_>>()?;
    let mut neg: Vec<u32> = t
        .t2()
        .iter()
        .map(|c| c.index(n).map(|i| i as u32))
        .collect::<Result<_>>()?;
    pos.sort_unstable();
    neg.sort_unstable();
    let v = TradeVector { n, pos, neg };
    verify_in_kernel(&v)?;
    Ok(v)
}

/// `M * X = 0`, checked edge by edge over the sparse support.
pub fn verify_in_kernel(v: &TradeVector) -> Result<()> {
    let mut acc = vec![0i64; pair_count(v.n)];
    for (sign, ids) in [(1i64, &v.pos), (-1i64, &v.neg)] {
        for &i in ids.iter() {
            let c = FourCycle::from_index(i as usize, v.n)?;
            for e in c.edges() {
                acc[e.index(v.n)?] += sign;
            }
        }
    }
    if let Some(bad) = acc.iter().position(|&x| x != 0) {
        return Err(Error::InternalInconsistency {
            what: format!(
                "trade vector leaves edge row {bad} uncancelled (M*X != 0)"
            ),
        });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// double-diamond kernel span
// ---------------------------------------------------------------------------

/// Outcome of the kernel-span experiment for one order. The `spans`
/// verdict is reported, never asserted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DdSpanReport {
    pub n: u8,
    /// K_{2,4} union graphs: one per (degree-4 pair, 4-subset of leaves).
    pub graph_count: usize,
    /// Configurations: one per (graph, pairing of the leaves), 3 per graph.
    pub config_count: usize,
    /// Pairwise difference vectors fed to the rank computation.
    pub vector_count: usize,
    pub generated_rank: usize,
    pub nullity: usize,
    pub spans: bool,
}

/// Every double-diamond decomposition of each K_{2,4} of `K_n`: for hub
/// pair {x,y} and leaves {a,b,c,d}, the pairing {{p,q},{r,s}} gives cycles
/// (x,p,y,q) and (x,r,y,s). Returns (graphs, per-graph decompositions).
fn dd_decompositions(n: u8) -> Vec<[Vec<u32>; 3]> {
    let idx = crate::decompose::indexer(n);
    let mut out = Vec::new();
    let mut leaves = Vec::with_capacity(4);
    for x in 1..=n {
        for y in x + 1..=n {
            // 4-subsets of the remaining labels, ascending
            let rest: Vec<u8> = (1..=n).filter(|&v| v != x && v != y).collect();
            let m = rest.len();
            for a in 0..m {
                for b in a + 1..m {
                    for c in b + 1..m {
                        for d in c + 1..m {
                            leaves.clear();
                            leaves.extend([rest[a], rest[b], rest[c], rest[d]]);
                            let pairings = [
                                ((leaves[0], leaves[1]), (leaves[2], leaves[3])),
                                ((leaves[0], leaves[2]), (leaves[1], leaves[3])),
                                ((leaves[0], leaves[3]), (leaves[1], leaves[2])),
                            ];
                            let decomps = pairings.map(|((p, q), (r, s))| {
                                let c1 = FourCycle::canonical_from([x, p, y, q]);
                                let c2 = FourCycle::canonical_from([x, r, y, s]);
                                let mut ids =
                                    vec![idx.index_of(c1.vertices()), idx.index_of(c2.vertices())];
                                ids.sort_unstable();
                                ids
                            });
                            out.push(decomps);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Sparse signed vector used by the span elimination.
type SparseVec = Vec<(u32, i128)>;

fn diff_vector(a: &[u32], b: &[u32]) -> SparseVec {
    let mut v: Vec<(u32, i128)> = a.iter().map(|&i| (i, 1i128)).collect();
    for &i in b {
        match v.iter_mut().find(|(j, _)| *j == i) {
            Some(slot) => slot.1 -= 1,
            None => v.push((i, -1)),
        }
    }
    v.retain(|&(_, x)| x != 0);
    v.sort_unstable();
    v
}

/// Exact incremental rank of a family of sparse integer vectors, by
/// fraction-free reduction with gcd normalization.
fn exact_span_rank(vectors: &[SparseVec]) -> usize {
    // basis rows keyed by leading index
    let mut basis: Vec<SparseVec> = Vec::new();
    for v in vectors {
        let mut cur = v.clone();
        while let Some(&(lead, lead_coef)) = cur.first() {
            match basis.iter().find(|b| b[0].0 == lead) {
                None => {
                    normalize(&mut cur);
                    basis.push(cur);
                    basis.sort_by_key(|b| b[0].0);
                    break;
                }
                Some(b) => {
                    cur = combine(&cur, lead_coef, b, b[0].1);
                }
            }
        }
    }
    basis.len()
}

/// `row * b_lead - b * row_lead`, sparse, gcd-normalized.
fn combine(row: &SparseVec, row_lead: i128, b: &SparseVec, b_lead: i128) -> SparseVec {
    let mut out: SparseVec = Vec::with_capacity(row.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < b.len() {
        let (idx, val) = if j >= b.len() || (i < row.len() && row[i].0 < b[j].0) {
            let r = (row[i].0, row[i].1.checked_mul(b_lead).expect("span overflow"));
            i += 1;
            r
        } else if i >= row.len() || b[j].0 < row[i].0 {
            let r = (b[j].0, (-b[j].1).checked_mul(row_lead).expect("span overflow"));
            j += 1;
            r
        } else {
            let r = (
                row[i].0,
                row[i]
                    .1
                    .checked_mul(b_lead)
                    .and_then(|x| {
                        b[j].1.checked_mul(row_lead).and_then(|y| x.checked_sub(y))
                    })
                    .expect("span overflow"),
            );
            i += 1;
            j += 1;
            r
        };
        if val != 0 {
            out.push((idx, val));
        }
    }
    normalize(&mut out);
    out
}

fn normalize(v: &mut SparseVec) {
    let mut g: i128 = 0;
    for &(_, x) in v.iter() {
        g = g.gcd(&x);
    }
    if g > 1 {
        for slot in v.iter_mut() {
            slot.1 /= g;
        }
    }
    if let Some(&(_, first)) = v.first() {
        if first < 0 {
            for slot in v.iter_mut() {
                slot.1 = -slot.1;
            }
        }
    }
}

/// Rank of the sparse family modulo p.
fn modular_span_rank(vectors: &[SparseVec], p: u64) -> usize {
    let mut basis: Vec<Vec<(u32, u64)>> = Vec::new();
    for v in vectors {
        let mut cur: Vec<(u32, u64)> = v
            .iter()
            .map(|&(i, x)| (i, x.rem_euclid(p as i128) as u64))
            .filter(|&(_, x)| x != 0)
            .collect();
        while let Some(&(lead, lead_coef)) = cur.first() {
            match basis.iter().find(|b| b[0].0 == lead) {
                None => {
                    basis.push(cur);
                    basis.sort_by_key(|b| b[0].0);
                    break;
                }
                Some(b) => {
                    // cur -= (lead_coef / b_lead) * b, mod p
                    let f = lead_coef * mod_inverse(b[0].1, p) % p;
                    let mut out: Vec<(u32, u64)> = Vec::with_capacity(cur.len() + b.len());
                    let (mut i, mut j) = (0, 0);
                    while i < cur.len() || j < b.len() {
                        let (idx, val) = if j >= b.len() || (i < cur.len() && cur[i].0 < b[j].0) {
                            let r = (cur[i].0, cur[i].1);
                            i += 1;
                            r
                        } else if i >= cur.len() || b[j].0 < cur[i].0 {
                            let r = (b[j].0, (p - f * b[j].1 % p) % p);
                            j += 1;
                            r
                        } else {
                            let r = (cur[i].0, (cur[i].1 + p - f * b[j].1 % p) % p);
                            i += 1;
                            j += 1;
                            r
                        };
                        if val != 0 {
                            out.push((idx, val));
                        }
                    }
                    cur = out;
                }
            }
        }
    }
    basis.len()
}

/// The kernel-span experiment: enumerate every double-diamond
/// configuration of `K_n`, take all pairwise difference vectors of each
/// graph's three decompositions, and compare the exact rank of their span
/// with the nullity of M. The verdict is reported, not asserted.
///
/// Exactness: every difference vector lies in ker M, so the span rank is
/// at most the nullity; when the modular rank already reaches the nullity
/// the exact rank is pinned, otherwise the exact integer elimination runs.
pub fn double_diamond_span(n: u8) -> Result<DdSpanReport> {
    if !(4..=9).contains(&n) {
        return Err(Error::Unsupported {
            what: format!("kernel-span experiment is budgeted for 4 <= n <= 9, got {n}"),
        });
    }
    let m = build_matrix(n)?;
    let graphs = dd_decompositions(n);
    let mut vectors: Vec<SparseVec> = Vec::with_capacity(graphs.len() * 3);
    for g in &graphs {
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let v = diff_vector(&g[a], &g[b]);
            // kernel membership of each difference vector
            let tv = TradeVector {
                n,
                pos: v.iter().filter(|&&(_, x)| x > 0).map(|&(i, _)| i).collect(),
                neg: v.iter().filter(|&&(_, x)| x < 0).map(|&(i, _)| i).collect(),
            };
            verify_in_kernel(&tv)?;
            vectors.push(v);
        }
    }
    let nullity = nullity(&m);
    let (p1, _) = screen_primes();
    let mod_rank = modular_span_rank(&vectors, p1);
    let generated_rank = if mod_rank == nullity {
        nullity // sandwiched: mod rank <= exact rank <= nullity
    } else {
        exact_span_rank(&vectors)
    };
    Ok(DdSpanReport {
        n,
        graph_count: graphs.len(),
        config_count: graphs.len() * 3,
        vector_count: vectors.len(),
        generated_rank,
        nullity,
        spans: generated_rank == nullity,
    })
}
