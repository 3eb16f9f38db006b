//! Connectivity of the 4-CS(9) move graph under volume-2/3 trades: the
//! spanning tree over the eight classes (with erratum detection and
//! substitute-witness search), exhaustive breadth-first closure, and the
//! constructive path engine that joins any two systems by translating and
//! composing a cached family of transposition paths.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::hash::{BuildHasherDefault, Hasher};
use std::sync::OnceLock;

use crate::configs::TradeConfig;
use crate::decompose::{identify, SLabel};
use crate::error::{Error, Result};
use crate::model::{
    Bitrade, CycleSystem, FourCycle, PathStep, Permutation, Relabel, TradePath,
};
use crate::tables;
use crate::trades::{find_trades, trade_table9, TradeVolume};

// ---------------------------------------------------------------------------
// symmetric difference and the spanning tree
// ---------------------------------------------------------------------------

/// If the cycles of `a \ b` and `b \ a` form a valid bitrade, return it
/// (t1 from `a`, t2 from `b`); None for identical systems or a difference
/// that is not a trade.
pub fn system_symmetric_difference(a: &CycleSystem, b: &CycleSystem) -> Option<Bitrade> {
    if a.order() != b.order() {
        return None;
    }
    let t1: Vec<FourCycle> = a.cycles().iter().filter(|c| !b.contains(c)).copied().collect();
    let t2: Vec<FourCycle> = b.cycles().iter().filter(|c| !a.contains(c)).copied().collect();
    Bitrade::new(t1, t2).ok()
}

/// A verified spanning-tree edge between two Table 4 rows.
#[derive(Clone, Debug)]
pub struct TreeEdgeWitness {
    pub i: usize,
    pub j: usize,
    pub bitrade: Bitrade,
    pub config: TradeConfig,
    /// True when this edge replaced a stated edge that failed verification.
    pub substituted: bool,
}

/// A stated tree edge that failed verification, with what was found and
/// the substitute chosen (if any).
#[derive(Clone, Debug)]
pub struct TreeErratum {
    pub stated: (usize, usize),
    pub expected_config: TradeConfig,
    pub found: String,
    pub substitute: Option<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct SpanningTree {
    pub witnesses: Vec<TreeEdgeWitness>,
    pub errata: Vec<TreeErratum>,
}

impl SpanningTree {
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.witnesses.iter().map(|w| (w.i, w.j)).collect()
    }

    fn is_spanning(edges: &[(usize, usize)]) -> bool {
        if edges.len() != 7 {
            return false;
        }
        let mut reach = [false; 9];
        reach[1] = true;
        for _ in 0..8 {
            for &(a, b) in edges {
                if reach[a] || reach[b] {
                    reach[a] = true;
                    reach[b] = true;
                }
            }
        }
        (1..=8).all(|i| reach[i])
    }
}

fn witness_for(i: usize, j: usize) -> Option<(Bitrade, TradeConfig)> {
    let diff = system_symmetric_difference(tables::table4_row(i), tables::table4_row(j))?;
    if diff.volume() != 3 {
        return None;
    }
    let config = diff.config();
    Some((diff, config))
}

/// Verify the stated spanning-tree edges over S1..S8. Any stated edge whose
/// symmetric difference is not a volume-3 bitrade of the stated
/// configuration is reported as an erratum, and a substitute edge with the
/// same configuration that restores a spanning tree is searched for
/// (pairs in lexicographic order).
pub fn verify_spanning_tree() -> SpanningTree {
    let stated = tables::spanning_tree_edges();
    let mut witnesses = Vec::new();
    let mut errata = Vec::new();
    let mut failed: Vec<(usize, usize, TradeConfig)> = Vec::new();

    for (i, j, expected) in stated {
        match witness_for(i, j) {
            Some((bitrade, config)) if config == expected => witnesses.push(TreeEdgeWitness {
                i,
                j,
                bitrade,
                config,
                substituted: false,
            }),
            Some((bitrade, config)) => {
                failed.push((i, j, expected));
                errata.push(TreeErratum {
                    stated: (i, j),
                    expected_config: expected,
                    found: format!(
                        "volume-{} bitrade with config {}",
                        bitrade.volume(),
                        config
                    ),
                    substitute: None,
                });
            }
            None => {
                let diff = system_symmetric_difference(tables::table4_row(i), tables::table4_row(j));
                failed.push((i, j, expected));
                errata.push(TreeErratum {
                    stated: (i, j),
                    expected_config: expected,
                    found: match diff {
                        Some(t) => format!("volume-{} bitrade (not volume 3)", t.volume()),
                        None => "difference is not a bitrade".into(),
                    },
                    substitute: None,
                });
            }
        }
    }

    // substitute search, one failed edge at a time
    for (fi, fj, expected) in failed {
        let mut chosen: Option<(usize, usize, Bitrade)> = None;
        'scan: for a in 1..=8usize {
            for b in a + 1..=8 {
                if witnesses.iter().any(|w| (w.i, w.j) == (a, b)) {
                    continue;
                }
                if let Some((bitrade, config)) = witness_for(a, b) {
                    if config != expected {
                        continue;
                    }
                    let mut edges = witnesses.iter().map(|w| (w.i, w.j)).collect::<Vec<_>>();
                    edges.push((a, b));
                    // the remaining stated edges still to be placed count
                    // toward the 7; only check spanning when complete
                    if edges.len() == 7 && !SpanningTree::is_spanning(&edges) {
                        continue;
                    }
                    chosen = Some((a, b, bitrade));
                    break 'scan;
                }
            }
        }
        if let Some((a, b, bitrade)) = chosen {
            for e in errata.iter_mut() {
                if e.stated == (fi, fj) {
                    e.substitute = Some((a, b));
                }
            }
            witnesses.push(TreeEdgeWitness {
                i: a,
                j: b,
                bitrade,
                config: expected,
                substituted: true,
            });
        }
    }

    SpanningTree { witnesses, errata }
}

/// Cached verified tree (the stated edges with any substitutes applied).
pub fn spanning_tree() -> &'static SpanningTree {
    static TREE: OnceLock<SpanningTree> = OnceLock::new();
    TREE.get_or_init(verify_spanning_tree)
}

// ---------------------------------------------------------------------------
// move-graph neighbors and BFS
// ---------------------------------------------------------------------------

/// All systems one volume-2/3 trade away, deduplicated, sorted by state
/// key. (Generic detection; the breadth-first search below uses the
/// precomputed whole-K9 trade table, which tests pin to agree with this.)
pub fn neighbors(s: &CycleSystem) -> Vec<CycleSystem> {
    let mut keys: Vec<u128> = find_trades(s, TradeVolume::Both)
        .iter()
        .map(|t| s.apply_trade(t.t1(), t.t2()).expect("trade applies").key())
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .map(|k| CycleSystem::from_key(k, s.order()))
        .collect()
}

/// Multiply-fold hasher for u128 state keys.
#[derive(Default)]
pub struct KeyHasher(u64);

impl Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ b as u64).wrapping_mul(0x100_0000_01b3);
        }
    }

    fn write_u128(&mut self, x: u128) {
        let lo = x as u64;
        let hi = (x >> 64) as u64;
        let mut h = lo ^ hi.rotate_left(31);
        h = h.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        h ^= h >> 29;
        self.0 = h.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    }
}

type KeySet = HashSet<u128, BuildHasherDefault<KeyHasher>>;

#[derive(Clone, Copy, Debug)]
pub struct BfsOptions {
    /// State budget; exceeding it yields a partial result flagged
    /// incomplete, never a silent truncation.
    pub max_states: usize,
    /// When the total labeled count is known (from enumeration), the
    /// component count is decided against it.
    pub expected_total: Option<u64>,
    /// Stop as soon as all eight classes have been touched.
    pub stop_on_full_coverage: bool,
}

impl Default for BfsOptions {
    fn default() -> Self {
        BfsOptions {
            max_states: 4_000_000,
            expected_total: None,
            stop_on_full_coverage: false,
        }
    }
}

/// Statistics of the breadth-first closure of one system under volume-2/3
/// trade moves.
#[derive(Clone, Debug)]
pub struct MoveGraphStats {
    pub vertex_count: u64,
    /// 1 when the closure is complete and accounts for every labeled
    /// system (when `expected_total` was supplied); 2 when systems are
    /// known to be missing; 1 with `complete` unset means "one component
    /// explored so far".
    pub component_count: u32,
    pub max_bfs_depth: u32,
    pub class_coverage: BTreeSet<SLabel>,
    pub complete: bool,
}

fn ids_of_key(key: u128, n: u8) -> [u16; 9] {
    debug_assert_eq!(n, 9);
    let mut k = key;
    let mut ids = [0u16; 9];
    for slot in ids.iter_mut().rev() {
        *slot = (k % 378) as u16;
        k /= 378;
    }
    ids
}

fn key_of_ids(ids: &[u16; 9]) -> u128 {
    let mut sorted = *ids;
    sorted.sort_unstable();
    sorted.iter().fold(0u128, |acc, &i| acc * 378 + i as u128)
}

/// Push every key one trade away from `ids` through `f`.
fn for_each_neighbor_key(ids: &[u16; 9], mut f: impl FnMut(u128)) {
    let table = trade_table9();
    for a in 0..9 {
        for b in a + 1..9 {
            if let Some(mates) = table.pair_mates(ids[a], ids[b]) {
                for mate in mates {
                    let mut next = *ids;
                    next[a] = mate[0];
                    next[b] = mate[1];
                    f(key_of_ids(&next));
                }
            }
            for c in b + 1..9 {
                if let Some(mates) = table.triple_mates(ids[a], ids[b], ids[c]) {
                    for mate in mates {
                        let mut next = *ids;
                        next[a] = mate[0];
                        next[b] = mate[1];
                        next[c] = mate[2];
                        f(key_of_ids(&next));
                    }
                }
            }
        }
    }
}

/// Expand frontier keys into (unfiltered) neighbor-key candidates, split
/// over up to [`crate::worker_count`] threads. Candidates concatenate in
/// chunk order, so the result is independent of scheduling.
fn expand_keys(frontier: &[u128]) -> Vec<u128> {
    let workers = crate::worker_count();
    if workers <= 1 || frontier.len() < 2048 {
        let mut out = Vec::with_capacity(frontier.len() * 16);
        for &key in frontier {
            for_each_neighbor_key(&ids_of_key(key, 9), |nk| out.push(nk));
        }
        return out;
    }
    let chunk_size = frontier.len().div_ceil(workers);
    std::thread::scope(|scope| {
        let handles: Vec<_> = frontier
            .chunks(chunk_size)
            .map(|chunk| {
                scope.spawn(move || {
                    let mut out = Vec::with_capacity(chunk.len() * 16);
                    for &key in chunk {
                        for_each_neighbor_key(&ids_of_key(key, 9), |nk| out.push(nk));
                    }
                    out
                })
            })
            .collect();
        let mut all = Vec::new();
        for h in handles {
            all.extend(h.join().expect("frontier worker panicked"));
        }
        all
    })
}

// Frontier slice size per expansion round; bounds candidate memory.
const EXPAND_CHUNK: usize = 65_536;

/// Breadth-first closure of `start` under volume-2/3 trade moves.
pub fn bfs_connectivity(start: &CycleSystem, opts: BfsOptions) -> MoveGraphStats {
    assert_eq!(start.order(), 9, "move-graph search is defined for order 9");
    let start_key = start.key();
    let mut visited: KeySet = HashSet::with_capacity_and_hasher(
        opts.max_states.clamp(1024, 2_000_000),
        BuildHasherDefault::default(),
    );
    visited.insert(start_key);
    let mut frontier: Vec<u128> = vec![start_key];
    let mut coverage: BTreeSet<SLabel> = BTreeSet::new();
    let mut depth = 0u32;
    let mut truncated = false;
    let mut covered_early = false;

    let classify = |key: u128, coverage: &mut BTreeSet<SLabel>| {
        let sys = CycleSystem::from_key(key, 9);
        if let Ok(Some((label, _))) = identify(&sys) {
            coverage.insert(label);
        }
    };
    classify(start_key, &mut coverage);

    'bfs: while !frontier.is_empty() {
        if opts.stop_on_full_coverage && coverage.len() == 8 {
            covered_early = true;
            break;
        }
        let mut next_frontier: Vec<u128> = Vec::new();
        for chunk in frontier.chunks(EXPAND_CHUNK) {
            for nk in expand_keys(chunk) {
                if visited.insert(nk) {
                    if visited.len() > opts.max_states {
                        visited.remove(&nk);
                        truncated = true;
                        break 'bfs;
                    }
                    if coverage.len() < 8 {
                        classify(nk, &mut coverage);
                    }
                    next_frontier.push(nk);
                }
            }
        }
        if !next_frontier.is_empty() {
            depth += 1;
        }
        frontier = next_frontier;
    }

    let complete = !truncated && !covered_early && frontier.is_empty();
    let vertex_count = visited.len() as u64;
    let component_count = match opts.expected_total {
        Some(total) if complete && vertex_count == total => 1,
        Some(_) if complete => 2, // closed component smaller than the space
        _ => 1,
    };
    MoveGraphStats {
        vertex_count,
        component_count,
        max_bfs_depth: depth,
        class_coverage: coverage,
        complete,
    }
}

/// The sorted keys of the full closure of `start` (used to compare the
/// move-graph closure against enumeration). None if the budget is hit.
pub fn bfs_closure_keys(start: &CycleSystem, max_states: usize) -> Option<Vec<u128>> {
    assert_eq!(start.order(), 9);
    let start_key = start.key();
    let mut visited: KeySet =
        HashSet::with_capacity_and_hasher(max_states.min(2_000_000), BuildHasherDefault::default());
    visited.insert(start_key);
    let mut frontier: Vec<u128> = vec![start_key];
    while !frontier.is_empty() {
        let mut next_frontier: Vec<u128> = Vec::new();
        for chunk in frontier.chunks(EXPAND_CHUNK) {
            for nk in expand_keys(chunk) {
                if visited.insert(nk) {
                    if visited.len() > max_states {
                        return None;
                    }
                    next_frontier.push(nk);
                }
            }
        }
        frontier = next_frontier;
    }
    let mut keys: Vec<u128> = visited.into_iter().collect();
    keys.sort_unstable();
    Some(keys)
}

/// Breadth-first path search in the move graph. Returns a validated path
/// or None when `to` is unreachable within the budget.
pub fn bfs_path(from: &CycleSystem, to: &CycleSystem, max_states: usize) -> Result<Option<TradePath>> {
    if from.order() != 9 || to.order() != 9 {
        return Err(Error::InvalidInput {
            what: "path search is defined for order 9".into(),
        });
    }
    let target = to.key();
    let start_key = from.key();
    if start_key == target {
        return Ok(Some(TradePath::empty(from.clone())));
    }
    let mut parent: HashMap<u128, u128, BuildHasherDefault<KeyHasher>> =
        HashMap::with_capacity_and_hasher(max_states.min(2_000_000), BuildHasherDefault::default());
    parent.insert(start_key, start_key);
    let mut queue: VecDeque<u128> = VecDeque::new();
    queue.push_back(start_key);
    let mut found = false;
    'search: while let Some(key) = queue.pop_front() {
        let ids = ids_of_key(key, 9);
        let mut hit = false;
        for_each_neighbor_key(&ids, |nk| {
            if !hit && !parent.contains_key(&nk) && parent.len() < max_states {
                parent.insert(nk, key);
                if nk == target {
                    hit = true;
                    return;
                }
                queue.push_back(nk);
            }
        });
        if hit {
            found = true;
            break 'search;
        }
    }
    if !found {
        return Ok(None);
    }
    // reconstruct key chain, then replay as validated steps
    let mut chain = vec![target];
    let mut k = target;
    while k != start_key {
        k = parent[&k];
        chain.push(k);
    }
    chain.reverse();
    let mut path = TradePath::empty(from.clone());
    for window in chain.windows(2) {
        let cur = CycleSystem::from_key(window[0], 9);
        let nxt = CycleSystem::from_key(window[1], 9);
        let removed: Vec<FourCycle> =
            cur.cycles().iter().filter(|c| !nxt.contains(c)).copied().collect();
        let added: Vec<FourCycle> =
            nxt.cycles().iter().filter(|c| !cur.contains(c)).copied().collect();
        path.push(PathStep { removed, added })?;
    }
    Ok(Some(path))
}

// ---------------------------------------------------------------------------
// constructive path engine
// ---------------------------------------------------------------------------

/// Builds any-to-any trade paths between 4-CS(9) without search: identify
/// both endpoints against the stored rows, hop along the verified spanning
/// tree, and realize the relabeling as a composition of cached
/// transposition paths grown from the displayed two-move seed.
pub struct PathEngine {
    tree_adj: Vec<Vec<usize>>,
    /// transposition_paths[a] : S8 -> S8^(a 9), for a = 1..8
    transposition_paths: Vec<Option<TradePath>>,
    /// S8 = S8^sigma held, so conjugation by sigma is available.
    pub sigma_fixed_point: bool,
}

/// The displayed two-move path from S1 to S1^(7 9).
pub fn seed_path() -> TradePath {
    let s1 = tables::table4_row(1).clone();
    let steps: Vec<PathStep> = tables::seed_moves()
        .into_iter()
        .map(|(removed, added)| PathStep { removed, added })
        .collect();
    TradePath::from_steps(s1, steps).expect("seed moves replay on S1")
}

impl PathEngine {
    pub fn new() -> Result<PathEngine> {
        let tree = spanning_tree();
        let mut tree_adj: Vec<Vec<usize>> = vec![Vec::new(); 9];
        for w in &tree.witnesses {
            tree_adj[w.i].push(w.j);
            tree_adj[w.j].push(w.i);
        }
        for adj in tree_adj.iter_mut() {
            adj.sort_unstable();
        }

        let sigma = tables::sigma9();
        let s8 = tables::table4_row(8);
        let sigma_fixed_point = &s8.relabel(&sigma) == s8;

        let mut engine = PathEngine {
            tree_adj,
            transposition_paths: vec![None; 9],
            sigma_fixed_point,
        };
        if !sigma_fixed_point {
            // erratum: without the fixed point the conjugation scheme
            // collapses; callers fall back to breadth-first search
            return Ok(engine);
        }

        // seed (7 9) transferred from S1 to S8
        let swap = |a: u8, b: u8| Permutation::transposition(9, a, b).unwrap();
        let base = engine.transfer_fixed_path(seed_path(), 1, 8, &swap(7, 9))?;
        if base.end() != &s8.relabel(&swap(7, 9)) {
            return Err(Error::InternalInconsistency {
                what: "transferred seed path misses S8^(7 9)".into(),
            });
        }
        let mut by_pair: HashMap<(u8, u8), TradePath> = HashMap::new();
        by_pair.insert((7, 9), base);

        // conjugate around the 9-cycle sigma: a path for (a b) yields one
        // for (sigma a, sigma b)
        let mut current = (7u8, 9u8);
        for _ in 0..8 {
            let path = by_pair[&current].clone();
            let image = (sigma.apply(current.0), sigma.apply(current.1));
            let image = (image.0.min(image.1), image.0.max(image.1));
            let translated = path.relabel(&sigma);
            debug_assert_eq!(translated.start(), s8);
            by_pair.entry(image).or_insert(translated);
            current = image;
        }

        // star transpositions (a 9) via (a 9) = (a b)(b 9)(a b)
        let mut star: HashMap<u8, TradePath> = HashMap::new();
        star.insert(7, by_pair[&(7, 9)].clone());
        star.insert(4, by_pair[&(4, 9)].clone());
        let derivations: [(u8, u8); 6] =
            [(1, 4), (3, 1), (6, 3), (8, 6), (2, 8), (5, 2)];
        for (a, b) in derivations {
            let pair_key = (a.min(b), a.max(b));
            let p_ab = by_pair
                .get(&pair_key)
                .cloned()
                .ok_or_else(|| Error::InternalInconsistency {
                    what: format!("missing conjugated path for ({a} {b})"),
                })?;
            let p_b9 = star[&b].clone();
            let word = [
                (swap(a, b), p_ab.clone()),
                (swap(b, 9), p_b9),
                (swap(a, b), p_ab),
            ];
            let path = compose_word(s8, &word)?;
            star.insert(a, path);
        }
        for a in 1..=8u8 {
            engine.transposition_paths[a as usize] = Some(star[&a].clone());
        }
        Ok(engine)
    }

    /// Single-hop tree moves from S_i to S_j.
    pub fn tree_path(&self, i: usize, j: usize) -> Result<TradePath> {
        let hops = self.tree_hops(i, j)?;
        let mut path = TradePath::empty(tables::table4_row(i).clone());
        let tree = spanning_tree();
        for win in hops.windows(2) {
            let (u, v) = (win[0], win[1]);
            let w = tree
                .witnesses
                .iter()
                .find(|w| (w.i, w.j) == (u, v) || (w.i, w.j) == (v, u))
                .expect("hops follow tree edges");
            let (removed, added) = if (w.i, w.j) == (u, v) {
                (w.bitrade.t1().to_vec(), w.bitrade.t2().to_vec())
            } else {
                (w.bitrade.t2().to_vec(), w.bitrade.t1().to_vec())
            };
            path.push(PathStep { removed, added })?;
        }
        Ok(path)
    }

    fn tree_hops(&self, i: usize, j: usize) -> Result<Vec<usize>> {
        let mut prev = [0usize; 9];
        let mut seen = [false; 9];
        let mut queue = VecDeque::new();
        seen[i] = true;
        queue.push_back(i);
        while let Some(u) = queue.pop_front() {
            if u == j {
                let mut hops = vec![j];
                let mut x = j;
                while x != i {
                    x = prev[x];
                    hops.push(x);
                }
                hops.reverse();
                return Ok(hops);
            }
            for &v in &self.tree_adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        Err(Error::InternalInconsistency {
            what: format!("spanning tree does not connect S{i} and S{j}"),
        })
    }

    /// Carry a path S_i -> S_i^w over to S_j -> S_j^w: tree(j -> i), the
    /// path itself, then tree(i -> j) translated by w.
    fn transfer_fixed_path(
        &self,
        path: TradePath,
        i: usize,
        j: usize,
        w: &Permutation,
    ) -> Result<TradePath> {
        if path.end() != &path.start().relabel(w) {
            return Err(Error::InternalInconsistency {
                what: "transfer permutation does not carry start to end".into(),
            });
        }
        let mut out = self.tree_path(j, i)?;
        out.extend(&path)?;
        out.extend(&self.tree_path(i, j)?.relabel(w))?;
        Ok(out)
    }

    /// Cached path S8 -> S8^(a 9).
    pub fn transposition_path(&self, a: u8) -> Result<&TradePath> {
        self.transposition_paths
            .get(a as usize)
            .and_then(|p| p.as_ref())
            .ok_or_else(|| Error::Unsupported {
                what: format!("no cached transposition path for ({a} 9)"),
            })
    }

    /// Path S8 -> S8^w for an arbitrary permutation, by decomposing w into
    /// transpositions through 9 and composing the cached paths.
    pub fn permutation_path(&self, w: &Permutation) -> Result<TradePath> {
        let s8 = tables::table4_row(8);
        if w.is_identity() {
            return Ok(TradePath::empty(s8.clone()));
        }
        let word = star_transposition_word(w);
        // defensive re-composition check
        let mut product = Permutation::identity(9);
        for a in &word {
            product = product.then(&Permutation::transposition(9, *a, 9).unwrap());
        }
        if &product != w {
            return Err(Error::InternalInconsistency {
                what: "star transposition decomposition failed".into(),
            });
        }
        let steps: Vec<(Permutation, TradePath)> = word
            .iter()
            .map(|&a| {
                Ok((
                    Permutation::transposition(9, a, 9).unwrap(),
                    self.transposition_path(a)?.clone(),
                ))
            })
            .collect::<Result<_>>()?;
        compose_word(s8, &steps)
    }

    /// A validated path from `a` to `b` built without search.
    pub fn constructive_path(&self, a: &CycleSystem, b: &CycleSystem) -> Result<TradePath> {
        if a.order() != 9 || b.order() != 9 {
            return Err(Error::InvalidInput {
                what: "constructive paths are defined for order 9".into(),
            });
        }
        if !self.sigma_fixed_point {
            return Err(Error::InternalInconsistency {
                what: "conjugation base unavailable (fixed-point erratum); use bfs_path".into(),
            });
        }
        if a == b {
            return Ok(TradePath::empty(a.clone()));
        }
        let (i, sigma) = identify(a)?.ok_or_else(|| Error::InvalidInput {
            what: "start system matches no stored class".into(),
        })?;
        let (j, gamma) = identify(b)?.ok_or_else(|| Error::InvalidInput {
            what: "target system matches no stored class".into(),
        })?;
        let (i, j) = (i.index(), j.index());

        // S_i^sigma -> S_j^sigma along the tree
        let mut path = self.tree_path(i, j)?.relabel(&sigma);
        debug_assert_eq!(path.start(), a);
        // S_j^sigma -> S_j^gamma: realize w = gamma . sigma^{-1} at S_j,
        // then translate by sigma
        let w = gamma.then(&sigma.inverse());
        if !w.is_identity() {
            let core = self.permutation_path(&w)?;
            let mut at_j = self.tree_path(j, 8)?;
            at_j.extend(&core)?;
            at_j.extend(&self.tree_path(8, j)?.relabel(&w))?;
            path.extend(&at_j.relabel(&sigma))?;
        }
        if path.end() != b {
            return Err(Error::InternalInconsistency {
                what: "constructive path missed its target".into(),
            });
        }
        path.validate()?;
        Ok(path)
    }
}

/// Engine built once per process.
pub fn path_engine() -> Result<&'static PathEngine> {
    static ENGINE: OnceLock<Result<PathEngine>> = OnceLock::new();
    ENGINE.get_or_init(PathEngine::new).as_ref().map_err(|e| e.clone())
}

/// Path for the left-to-right word `steps` (apply `steps[0]` first), where
/// each entry is (permutation, path from `base` to `base^perm`):
/// P(Uw) = P(w) then P(U) translated by w.
fn compose_word(base: &CycleSystem, steps: &[(Permutation, TradePath)]) -> Result<TradePath> {
    let mut path = TradePath::empty(base.clone());
    for (perm, step_path) in steps {
        let mut next = step_path.clone();
        next.extend(&path.relabel(perm))?;
        path = next;
    }
    Ok(path)
}

/// Decompose a permutation of {1..9} into a left-to-right word of
/// transpositions (a 9), via its disjoint cycles.
fn star_transposition_word(w: &Permutation) -> Vec<u8> {
    let mut word = Vec::new();
    for cyc in w.cycles() {
        if let Some(pos) = cyc.iter().position(|&x| x == 9) {
            // rotate to start at 9: (9 c2 ... ck) = word [(c2 9) ... (ck 9)]
            let k = cyc.len();
            for t in 1..k {
                word.push(cyc[(pos + t) % k]);
            }
        } else {
            // (c1 ... ck) = word [(c1 9) (c2 9) ... (ck 9) (c1 9)]
            word.extend(cyc.iter().copied());
            word.push(cyc[0]);
        }
    }
    word
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_differences_of_tree_rows() {
        // e16: volume-3 T'
        let d = system_symmetric_difference(tables::table4_row(1), tables::table4_row(6)).unwrap();
        assert_eq!(d.volume(), 3);
        assert_eq!(d.config(), TradeConfig::F7Tprime);
        // e25: volume-3 T''
        let d = system_symmetric_difference(tables::table4_row(2), tables::table4_row(5)).unwrap();
        assert_eq!(d.volume(), 3);
        assert_eq!(d.config(), TradeConfig::F7Tdoubleprime);
        // identical systems: no trade
        assert!(
            system_symmetric_difference(tables::table4_row(1), tables::table4_row(1)).is_none()
        );
        // e27 (as stated) differs in five cycles
        let d = system_symmetric_difference(tables::table4_row(2), tables::table4_row(7)).unwrap();
        assert_eq!(d.volume(), 5);
    }

    #[test]
    fn spanning_tree_verifies_with_e27_erratum() {
        let tree = spanning_tree();
        assert_eq!(tree.witnesses.len(), 7);
        assert!(SpanningTree::is_spanning(&tree.edges()));
        // exactly one erratum: stated (2,7), substituted by (5,7)
        assert_eq!(tree.errata.len(), 1);
        assert_eq!(tree.errata[0].stated, (2, 7));
        assert_eq!(tree.errata[0].substitute, Some((5, 7)));
        // five T' edges and two T'' edges
        let prime = tree
            .witnesses
            .iter()
            .filter(|w| w.config == TradeConfig::F7Tprime)
            .count();
        let dprime = tree
            .witnesses
            .iter()
            .filter(|w| w.config == TradeConfig::F7Tdoubleprime)
            .count();
        assert_eq!((prime, dprime), (5, 2));
        // every witness really carries S_i to S_j
        for w in &tree.witnesses {
            let moved = tables::table4_row(w.i)
                .apply_trade(w.bitrade.t1(), w.bitrade.t2())
                .unwrap();
            assert_eq!(&moved, tables::table4_row(w.j));
        }
    }

    #[test]
    fn neighbors_are_valid_and_symmetric() {
        let s8 = tables::table4_row(8);
        let ns = neighbors(s8);
        assert!(!ns.is_empty());
        // applying the first detected trade yields a valid system
        let t = &find_trades(s8, TradeVolume::Both)[0];
        let moved = s8.apply_trade(t.t1(), t.t2()).unwrap();
        assert!(ns.contains(&moved));
        // reversibility: s in neighbors(t) iff t in neighbors(s)
        for nb in ns.iter().take(4) {
            assert!(neighbors(nb).contains(s8));
        }
    }

    #[test]
    fn neighbors_match_trade_table_expansion() {
        // the table-driven BFS expansion agrees with generic detection
        for label in [1usize, 4, 8] {
            let s = tables::table4_row(label);
            let generic: Vec<u128> = neighbors(s).iter().map(|t| t.key()).collect();
            let mut table_keys = Vec::new();
            let ids_vec = s.indices();
            let mut ids = [0u16; 9];
            for (slot, v) in ids.iter_mut().zip(&ids_vec) {
                *slot = *v as u16;
            }
            for_each_neighbor_key(&ids, |k| table_keys.push(k));
            table_keys.sort_unstable();
            table_keys.dedup();
            assert_eq!(generic, table_keys);
        }
    }

    #[test]
    fn neighbors_equivariance() {
        let s = tables::table4_row(3);
        let sigma = Permutation::from_cycles(9, &[&[2, 4, 9]]).unwrap();
        let direct: Vec<u128> = neighbors(&s.relabel(&sigma)).iter().map(|t| t.key()).collect();
        let mut translated: Vec<u128> = neighbors(s)
            .iter()
            .map(|t| t.relabel(&sigma).key())
            .collect();
        translated.sort_unstable();
        assert_eq!(direct, translated);
    }

    #[test]
    fn budgeted_bfs_flags_incomplete() {
        let stats = bfs_connectivity(
            tables::table4_row(1),
            BfsOptions {
                max_states: 5_000,
                expected_total: None,
                stop_on_full_coverage: false,
            },
        );
        assert!(!stats.complete);
        assert_eq!(stats.vertex_count, 5_000);
    }

    #[test]
    fn seed_path_is_the_displayed_two_moves() {
        let path = seed_path();
        assert_eq!(path.len(), 2);
        let swap79 = Permutation::transposition(9, 7, 9).unwrap();
        assert_eq!(path.end(), &tables::table4_row(1).relabel(&swap79));
        // first move is T''-configured, second is a double-diamond
        let t = Bitrade::new(path.steps()[0].removed.clone(), path.steps()[0].added.clone())
            .unwrap();
        assert_eq!(t.config(), TradeConfig::F7Tdoubleprime);
        let d = Bitrade::new(path.steps()[1].removed.clone(), path.steps()[1].added.clone())
            .unwrap();
        assert_eq!(d.config(), TradeConfig::Dd);
    }

    #[test]
    fn engine_builds_all_star_transpositions() {
        let engine = path_engine().unwrap();
        assert!(engine.sigma_fixed_point);
        let s8 = tables::table4_row(8);
        for a in 1..=8u8 {
            let p = engine.transposition_path(a).unwrap();
            assert_eq!(p.start(), s8);
            let swap = Permutation::transposition(9, a, 9).unwrap();
            assert_eq!(p.end(), &s8.relabel(&swap), "endpoint of ({a} 9)");
            p.validate().unwrap();
        }
    }

    #[test]
    fn constructive_path_s8_to_s8_49() {
        let engine = path_engine().unwrap();
        let s8 = tables::table4_row(8);
        let swap = Permutation::transposition(9, 4, 9).unwrap();
        let target = s8.relabel(&swap);
        let path = engine.constructive_path(s8, &target).unwrap();
        assert_eq!(path.start(), s8);
        assert_eq!(path.end(), &target);
        path.validate().unwrap();
    }

    #[test]
    fn constructive_path_arbitrary_endpoints() {
        let engine = path_engine().unwrap();
        let sigma = Permutation::from_cycles(9, &[&[1, 9, 4, 2], &[3, 7]]).unwrap();
        let gamma = Permutation::from_cycles(9, &[&[2, 6, 5, 9, 8]]).unwrap();
        let a = tables::table4_row(3).relabel(&sigma);
        let b = tables::table4_row(6).relabel(&gamma);
        let path = engine.constructive_path(&a, &b).unwrap();
        assert_eq!(path.start(), &a);
        assert_eq!(path.end(), &b);
        path.validate().unwrap();
        // empty path for identical endpoints
        assert_eq!(engine.constructive_path(&a, &a).unwrap().len(), 0);
    }

    #[test]
    fn path_translation_invariance() {
        let engine = path_engine().unwrap();
        let path = engine.transposition_path(5).unwrap();
        let tau = Permutation::from_cycles(9, &[&[1, 2, 3, 4, 5, 6, 7, 8, 9]]).unwrap();
        let moved = path.relabel(&tau);
        moved.validate().unwrap();
        assert_eq!(moved.start(), &path.start().relabel(&tau));
        assert_eq!(moved.end(), &path.end().relabel(&tau));
    }

    #[test]
    fn bfs_path_agrees_with_constructive_on_reachability() {
        let s1 = tables::table4_row(1).clone();
        let swap79 = Permutation::transposition(9, 7, 9).unwrap();
        let target = s1.relabel(&swap79);
        let p = bfs_path(&s1, &target, 500_000).unwrap().expect("reachable");
        assert_eq!(p.end(), &target);
        assert_eq!(p.len(), 2); // the seed path is optimal here
        let engine = path_engine().unwrap();
        let q = engine.constructive_path(&s1, &target).unwrap();
        assert_eq!(q.end(), &target);
    }
}
