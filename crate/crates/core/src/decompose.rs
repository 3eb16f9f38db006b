//! Construction, enumeration, and isomorphism classification of 4-cycle
//! systems: existence check, exact-cover enumeration over all `3*C(n,4)`
//! candidate cycles, cyclic development of base cycles, minimal-image
//! canonical labeling, and matching against the built-in Table 4 rows.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::model::{
    cycle_count, for_each_permutation, pair_count, CycleSystem, FourCycle, Permutation,
};
use crate::tables;

/// A 4-CS(n) exists iff n = 1 (mod 8).
pub fn admissible(n: u8) -> bool {
    n % 8 == 1
}

// ---------------------------------------------------------------------------
// fast per-order cycle indexing
// ---------------------------------------------------------------------------

/// Precomputed subset-rank tables for one order, so the hot relabeling loops
/// avoid recomputing binomials.
pub(crate) struct Indexer {
    /// `pre[k-1][v] = sum_{t=1..=v} C(n - t, k)` for k = 1, 2, 3.
    pre: [Vec<u32>; 3],
}

impl Indexer {
    pub(crate) fn new(n: u8) -> Self {
        let n = n as i64;
        let binom = |m: i64, k: i64| -> i64 {
            if m < k {
                return 0;
            }
            let mut r = 1i64;
            for i in 0..k {
                r = r * (m - i) / (i + 1);
            }
            r
        };
        let pre = [1i64, 2, 3].map(|k| {
            let mut acc = 0i64;
            let mut v = vec![0u32; n as usize + 1];
            for (t, slot) in v.iter_mut().enumerate().skip(1) {
                acc += binom(n - t as i64, k);
                *slot = acc as u32;
            }
            v
        });
        Indexer { pre }
    }

    /// Global index of the canonical cycle tuple `c`.
    #[inline]
    pub(crate) fn index_of(&self, c: [u8; 4]) -> u32 {
        let mut s = c;
        s.sort_unstable();
        let [p1, p2, p3] = [&self.pre[0], &self.pre[1], &self.pre[2]];
        let rank = p3[s[0] as usize - 1]
            + (p2[s[1] as usize - 1] - p2[s[0] as usize])
            + (p1[s[2] as usize - 1] - p1[s[1] as usize])
            + (s[3] - s[2]) as u32
            - 1;
        // the diagonal partner of the minimum vertex fixes which of the
        // three cycles on this subset we are
        let cfg = if c[2] == s[2] {
            0
        } else if c[2] == s[3] {
            1
        } else {
            2
        };
        3 * rank + cfg
    }
}

pub(crate) fn indexer(n: u8) -> &'static Indexer {
    static CACHE: OnceLock<Vec<OnceLock<Indexer>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| (0..=16).map(|_| OnceLock::new()).collect());
    cache[n as usize].get_or_init(|| Indexer::new(n))
}

// ---------------------------------------------------------------------------
// exact-cover enumeration
// ---------------------------------------------------------------------------

/// Exact-cover instance: columns are the `C(n,2)` edges, rows are all
/// `3*C(n,4)` cycles of `K_n`. Only orders with at most 64 edges (n <= 11)
/// use this fast path; [`first_system_with_forced`] has a wide-mask
/// fallback for larger orders.
struct Cover {
    full: u64,
    cycle_masks: Vec<u64>,
    per_edge: Vec<Vec<u32>>,
}

impl Cover {
    fn new(n: u8) -> Self {
        assert!(pair_count(n) <= 64);
        let total = cycle_count(n);
        let mut cycle_masks = Vec::with_capacity(total);
        let mut per_edge: Vec<Vec<u32>> = vec![Vec::new(); pair_count(n)];
        for i in 0..total {
            let c = FourCycle::from_index(i, n).unwrap();
            let mut mask = 0u64;
            for e in c.edges() {
                let ei = e.index(n).unwrap();
                mask |= 1 << ei;
                per_edge[ei].push(i as u32);
            }
            cycle_masks.push(mask);
        }
        Cover {
            full: if pair_count(n) == 64 {
                u64::MAX
            } else {
                (1u64 << pair_count(n)) - 1
            },
            cycle_masks,
            per_edge,
        }
    }

    /// Depth-first exact cover. Branches on the uncovered edge with the
    /// fewest compatible cycles (ties to the lowest edge index), candidates
    /// in cycle-index order. Calls `f` with the chosen cycle ids of every
    /// solution; `f` returns false to stop the search.
    fn search(
        &self,
        covered: u64,
        chosen: &mut Vec<u32>,
        f: &mut impl FnMut(&[u32]) -> bool,
    ) -> bool {
        if covered == self.full {
            return f(chosen);
        }
        let mut best_edge = usize::MAX;
        let mut best_count = usize::MAX;
        let mut uncovered = !covered & self.full;
        while uncovered != 0 {
            let e = uncovered.trailing_zeros() as usize;
            uncovered &= uncovered - 1;
            let mut count = 0;
            for &c in &self.per_edge[e] {
                if self.cycle_masks[c as usize] & covered == 0 {
                    count += 1;
                    if count >= best_count {
                        break;
                    }
                }
            }
            if count == 0 {
                return true; // dead branch
            }
            if count < best_count {
                best_count = count;
                best_edge = e;
                if count == 1 {
                    break;
                }
            }
        }
        for &c in &self.per_edge[best_edge] {
            let mask = self.cycle_masks[c as usize];
            if mask & covered == 0 {
                chosen.push(c);
                let keep_going = self.search(covered | mask, chosen, f);
                chosen.pop();
                if !keep_going {
                    return false;
                }
            }
        }
        true
    }
}

fn key_from_ids(ids: &[u32], n: u8) -> u128 {
    let base = cycle_count(n) as u128;
    let mut sorted: Vec<u32> = ids.to_vec();
    sorted.sort_unstable();
    sorted.iter().fold(0u128, |acc, &i| acc * base + i as u128)
}

/// Run `f` on the chosen ids of every solution, splitting the search over
/// workers at the choice of the cycle covering edge 0 (every solution has
/// exactly one, so the branches partition the solution space). Workers
/// accumulate separately and merge in branch order, so the outcome is
/// independent of scheduling.
fn enumerate_branched<T: Send>(
    n: u8,
    make: impl Fn() -> T + Sync,
    f: impl Fn(&[u32], &mut T) + Sync,
    merge: impl Fn(Vec<T>) -> T,
) -> T {
    let cover = Cover::new(n);
    if pair_count(n) == 0 {
        // the empty graph has the empty decomposition
        let mut acc = make();
        f(&[], &mut acc);
        return acc;
    }
    let branches: Vec<u32> = cover.per_edge[0].clone();
    let workers = crate::worker_count().min(branches.len().max(1));
    let run_branch = |c: u32, acc: &mut T| {
        let mut chosen = vec![c];
        cover.search(cover.cycle_masks[c as usize], &mut chosen, &mut |ids| {
            f(ids, acc);
            true
        });
    };
    if workers <= 1 {
        let mut acc = make();
        for &c in &branches {
            run_branch(c, &mut acc);
        }
        return acc;
    }
    let chunk = branches.len().div_ceil(workers);
    let parts: Vec<T> = std::thread::scope(|scope| {
        let handles: Vec<_> = branches
            .chunks(chunk)
            .map(|cs| {
                let (make, run_branch) = (&make, &run_branch);
                scope.spawn(move || {
                    let mut acc = make();
                    for &c in cs {
                        run_branch(c, &mut acc);
                    }
                    acc
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("enumeration worker panicked"))
            .collect()
    });
    merge(parts)
}

/// Every labeled 4-CS(n) as a packed state key, sorted ascending (which is
/// the lexicographic order of sorted cycle-index sequences). Empty when no
/// system exists. Supported for n <= 9.
pub fn enumerate_keys(n: u8) -> Vec<u128> {
    assert!((1..=9).contains(&n), "full enumeration is budgeted for n <= 9");
    if !pair_count(n).is_multiple_of(4) {
        return Vec::new();
    }
    let mut keys = enumerate_branched(
        n,
        Vec::new,
        |ids, acc: &mut Vec<u128>| acc.push(key_from_ids(ids, n)),
        |parts| parts.into_iter().flatten().collect(),
    );
    keys.sort_unstable();
    keys
}

/// Number of labeled 4-CS(n), without storing them.
pub fn count_systems(n: u8) -> u64 {
    assert!((1..=9).contains(&n), "full enumeration is budgeted for n <= 9");
    if !pair_count(n).is_multiple_of(4) {
        return 0;
    }
    enumerate_branched(n, || 0u64, |_, acc| *acc += 1, |parts| parts.iter().sum())
}

/// Visit every labeled 4-CS(n) in deterministic (key-sorted) order.
pub fn for_each_system(n: u8, mut f: impl FnMut(&CycleSystem)) {
    for key in enumerate_keys(n) {
        f(&CycleSystem::from_key(key, n));
    }
}

/// The first 4-CS(n) in search order, with `forced` cycles pre-selected.
/// Returns None when the search space is exhausted without a solution.
pub fn first_system_with_forced(n: u8, forced: &[FourCycle]) -> Result<Option<CycleSystem>> {
    if n < 1 || !pair_count(n).is_multiple_of(4) {
        return Ok(None);
    }
    if pair_count(n) > 64 {
        return first_system_wide(n, forced);
    }
    let cover = Cover::new(n);
    let mut covered = 0u64;
    let mut chosen = Vec::new();
    for c in forced {
        let mask = cover.cycle_masks[c.index(n)?];
        if mask & covered != 0 {
            return Err(Error::InvalidInput {
                what: format!("forced cycles overlap at {c:?}"),
            });
        }
        covered |= mask;
        chosen.push(c.index(n)? as u32);
    }
    let mut found = None;
    cover.search(covered, &mut chosen, &mut |ids| {
        let cycles = ids
            .iter()
            .map(|&i| FourCycle::from_index(i as usize, n).unwrap())
            .collect();
        found = Some(CycleSystem::from_cycles_unchecked(n, cycles));
        false
    });
    Ok(found)
}

/// First system in search order, or None for inadmissible n.
pub fn first_system(n: u8) -> Option<CycleSystem> {
    first_system_with_forced(n, &[]).expect("no forced cycles to conflict")
}

/// Wide-mask (n > 11) first-solution search; same branching rule as the
/// fast path.
fn first_system_wide(n: u8, forced: &[FourCycle]) -> Result<Option<CycleSystem>> {
    let edges = pair_count(n);
    let words = edges.div_ceil(64);
    let total = cycle_count(n);
    let mut masks: Vec<Vec<u64>> = vec![vec![0; words]; total];
    let mut per_edge: Vec<Vec<u32>> = vec![Vec::new(); edges];
    for (i, mask) in masks.iter_mut().enumerate() {
        let c = FourCycle::from_index(i, n).unwrap();
        for e in c.edges() {
            let ei = e.index(n).unwrap();
            mask[ei / 64] |= 1 << (ei % 64);
            per_edge[ei].push(i as u32);
        }
    }
    let compatible =
        |mask: &[u64], covered: &[u64]| mask.iter().zip(covered).all(|(m, c)| m & c == 0);
    let mut covered = vec![0u64; words];
    let mut chosen: Vec<u32> = Vec::new();
    for c in forced {
        let i = c.index(n)?;
        if !compatible(&masks[i], &covered) {
            return Err(Error::InvalidInput {
                what: format!("forced cycles overlap at {c:?}"),
            });
        }
        for (w, m) in covered.iter_mut().zip(&masks[i]) {
            *w |= m;
        }
        chosen.push(i as u32);
    }

    struct Wide<'a> {
        edges: usize,
        masks: &'a [Vec<u64>],
        per_edge: &'a [Vec<u32>],
    }

    impl Wide<'_> {
        fn compat(&self, c: usize, covered: &[u64]) -> bool {
            self.masks[c].iter().zip(covered).all(|(m, w)| m & w == 0)
        }

        fn rec(&self, covered: &mut [u64], chosen: &mut Vec<u32>) -> bool {
            let mut best_edge = usize::MAX;
            let mut best_count = usize::MAX;
            for e in 0..self.edges {
                if covered[e / 64] & (1 << (e % 64)) != 0 {
                    continue;
                }
                let mut count = 0;
                for &c in &self.per_edge[e] {
                    if self.compat(c as usize, covered) {
                        count += 1;
                        if count >= best_count {
                            break;
                        }
                    }
                }
                if count == 0 {
                    return false;
                }
                if count < best_count {
                    best_count = count;
                    best_edge = e;
                    if count == 1 {
                        break;
                    }
                }
            }
            if best_edge == usize::MAX {
                return true; // everything covered
            }
            for i in 0..self.per_edge[best_edge].len() {
                let c = self.per_edge[best_edge][i] as usize;
                if !self.compat(c, covered) {
                    continue;
                }
                for (w, m) in covered.iter_mut().zip(&self.masks[c]) {
                    *w ^= m;
                }
                chosen.push(c as u32);
                if self.rec(covered, chosen) {
                    return true;
                }
                chosen.pop();
                for (w, m) in covered.iter_mut().zip(&self.masks[c]) {
                    *w ^= m;
                }
            }
            false
        }
    }

    let wide = Wide {
        edges,
        masks: &masks,
        per_edge: &per_edge,
    };
    Ok(if wide.rec(&mut covered, &mut chosen) {
        let cycles = chosen
            .iter()
            .map(|&i| FourCycle::from_index(i as usize, n).unwrap())
            .collect();
        Some(CycleSystem::from_cycles_unchecked(n, cycles))
    } else {
        None
    })
}

// ---------------------------------------------------------------------------
// cyclic development
// ---------------------------------------------------------------------------

/// Base cycles on labels `0..n-1` (the printed convention) to be developed
/// by the shift `x -> x + 1 (mod n)`.
#[derive(Clone, Debug)]
pub struct CyclicStarter {
    pub order: u8,
    pub base_cycles: Vec<[u8; 4]>,
}

/// Develop each base cycle through all n shifts and validate the result as
/// an edge partition; a collision or gap is reported with the offending
/// edge.
pub fn develop_cyclic(starter: &CyclicStarter) -> Result<CycleSystem> {
    let n = starter.order;
    let mut cycles = Vec::with_capacity(starter.base_cycles.len() * n as usize);
    for base in &starter.base_cycles {
        for x in base {
            if *x >= n {
                return Err(Error::OutOfRange { label: *x, n });
            }
        }
        for t in 0..n as u16 {
            let shifted = base.map(|x| ((x as u16 + t) % n as u16) as u8 + 1);
            cycles.push(FourCycle::from_array(shifted)?);
        }
    }
    CycleSystem::from_cycles(n, cycles)
}

// ---------------------------------------------------------------------------
// canonical labeling and isomorphism
// ---------------------------------------------------------------------------

/// A Table 4 class label S1..S8.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SLabel(u8);

impl SLabel {
    pub fn new(i: usize) -> Option<SLabel> {
        (1..=8).contains(&i).then_some(SLabel(i as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> [SLabel; 8] {
        [1, 2, 3, 4, 5, 6, 7, 8].map(SLabel)
    }

    pub fn system(self) -> &'static CycleSystem {
        tables::table4_row(self.index())
    }
}

impl fmt::Display for SLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.0)
    }
}

impl fmt::Debug for SLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.0)
    }
}

impl FromStr for SLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<SLabel> {
        let t = s.trim();
        t.strip_prefix(['S', 's'])
            .and_then(|rest| rest.parse::<usize>().ok())
            .and_then(SLabel::new)
            .ok_or_else(|| Error::InvalidInput {
                what: format!("expected S1..S8, got {s:?}"),
            })
    }
}

/// The isomorphism class of a system: its minimal relabeling, the Table 4
/// label when the order is 9 and the class matches, and the automorphism
/// count.
#[derive(Clone, Debug)]
pub struct IsoClass {
    pub canonical_system: CycleSystem,
    pub label: Option<SLabel>,
    pub automorphism_count: u64,
}

/// Key machinery shared by the minimal-image and orbit loops: relabel the
/// raw cycle tuples under an image array and pack the sorted index sequence.
pub(crate) struct KeyMachine<'a> {
    idx: &'a Indexer,
    base: u128,
    cycles: Vec<[u8; 4]>,
}

impl KeyMachine<'_> {
    pub(crate) fn new(s: &CycleSystem) -> Self {
        KeyMachine {
            idx: indexer(s.order()),
            base: cycle_count(s.order()) as u128,
            cycles: s.cycles().iter().map(|c| c.vertices()).collect(),
        }
    }

    /// Key of the system relabeled by `images` (`images[i]` = image of i+1).
    #[inline]
    pub(crate) fn key_under(&self, images: &[u8]) -> u128 {
        let mut ids = [0u32; 16];
        let m = self.cycles.len();
        for (slot, c) in ids[..m].iter_mut().zip(&self.cycles) {
            let mapped = [
                images[c[0] as usize - 1],
                images[c[1] as usize - 1],
                images[c[2] as usize - 1],
                images[c[3] as usize - 1],
            ];
            *slot = self
                .idx
                .index_of(FourCycle::canonical_from(mapped).vertices());
        }
        let ids = &mut ids[..m];
        ids.sort_unstable();
        ids.iter()
            .fold(0u128, |acc, &i| acc * self.base + i as u128)
    }
}

/// Exhaustive minimal-image canonical labeling over all n! relabelings
/// (n <= 9). Two systems are isomorphic iff their canonical systems are
/// equal. Automorphisms are counted in the same pass.
pub fn canonical_label(s: &CycleSystem) -> IsoClass {
    let n = s.order();
    assert!(n <= 9, "exhaustive canonical labeling is budgeted for n <= 9");
    let machine = KeyMachine::new(s);
    let self_key = s.key();
    let mut best = u128::MAX;
    let mut aut = 0u64;
    for_each_permutation(n, |images| {
        let k = machine.key_under(images);
        if k < best {
            best = k;
        }
        if k == self_key {
            aut += 1;
        }
    });
    let canonical_system = CycleSystem::from_key(best, n);
    let label = if n == 9 {
        table4_canonical_keys()
            .iter()
            .position(|&k| k == best)
            .map(|i| SLabel((i + 1) as u8))
    } else {
        None
    };
    IsoClass {
        canonical_system,
        label,
        automorphism_count: aut,
    }
}

pub(crate) fn table4_canonical_keys() -> &'static [u128; 8] {
    static KEYS: OnceLock<[u128; 8]> = OnceLock::new();
    KEYS.get_or_init(|| {
        std::array::from_fn(|i| {
            let machine = KeyMachine::new(tables::table4_row(i + 1));
            let mut best = u128::MAX;
            for_each_permutation(9, |images| {
                let k = machine.key_under(images);
                if k < best {
                    best = k;
                }
            });
            best
        })
    })
}

/// Search for a permutation with `src^p = dst`, assigning vertex images in
/// an order that completes source cycles as early as possible and pruning
/// on membership of each completed image cycle in `dst`.
pub fn find_isomorphism(src: &CycleSystem, dst: &CycleSystem) -> Option<Permutation> {
    let n = src.order();
    if dst.order() != n || src.len() != dst.len() || n > 9 {
        return None;
    }
    let idx = indexer(n);
    let mut dst_bits = [0u64; 8];
    for c in dst.cycles() {
        let i = idx.index_of(c.vertices()) as usize;
        dst_bits[i / 64] |= 1 << (i % 64);
    }
    // vertex order: greedily complete cycles early
    let src_cycles: Vec<[u8; 4]> = src.cycles().iter().map(|c| c.vertices()).collect();
    let mut order: Vec<u8> = Vec::with_capacity(n as usize);
    let mut placed = vec![false; n as usize + 1];
    while order.len() < (n as usize) {
        let mut best_v = 0u8;
        let mut best_gain = -1i32;
        for v in 1..=n {
            if placed[v as usize] {
                continue;
            }
            let gain = src_cycles
                .iter()
                .filter(|c| c.contains(&v) && c.iter().all(|&x| x == v || placed[x as usize]))
                .count() as i32;
            if gain > best_gain {
                best_gain = gain;
                best_v = v;
            }
        }
        placed[best_v as usize] = true;
        order.push(best_v);
    }
    let mut completed_at: Vec<Vec<[u8; 4]>> = vec![Vec::new(); n as usize];
    for c in &src_cycles {
        let pos = c
            .iter()
            .map(|&v| order.iter().position(|&o| o == v).unwrap())
            .max()
            .unwrap();
        completed_at[pos].push(*c);
    }

    struct Dfs<'a> {
        n: u8,
        idx: &'a Indexer,
        order: &'a [u8],
        completed_at: &'a [Vec<[u8; 4]>],
        dst_bits: [u64; 8],
        images: Vec<u8>,
        used: Vec<bool>,
    }

    impl Dfs<'_> {
        fn run(&mut self, pos: usize) -> bool {
            if pos == self.n as usize {
                return true;
            }
            let v = self.order[pos] as usize;
            for img in 1..=self.n {
                if self.used[img as usize] {
                    continue;
                }
                self.images[v - 1] = img;
                self.used[img as usize] = true;
                let ok = self.completed_at[pos].iter().all(|c| {
                    let mapped = c.map(|x| self.images[x as usize - 1]);
                    let i =
                        self.idx.index_of(FourCycle::canonical_from(mapped).vertices()) as usize;
                    self.dst_bits[i / 64] & (1 << (i % 64)) != 0
                });
                if ok && self.run(pos + 1) {
                    return true;
                }
                self.used[img as usize] = false;
            }
            self.images[v - 1] = 0;
            false
        }
    }

    let mut dfs = Dfs {
        n,
        idx,
        order: &order,
        completed_at: &completed_at,
        dst_bits,
        images: vec![0; n as usize],
        used: vec![false; n as usize + 1],
    };
    if dfs.run(0) {
        Some(Permutation::from_images(dfs.images).expect("dfs builds a bijection"))
    } else {
        None
    }
}

/// Table 4 label of the class of `s` (order 9), plus a witness relabeling
/// carrying the stored row onto `s`.
pub fn identify(s: &CycleSystem) -> Result<Option<(SLabel, Permutation)>> {
    let rows = tables::table4_checked()?;
    if s.order() != 9 {
        return Ok(None);
    }
    for (i, row) in rows.iter().enumerate() {
        if let Some(p) = find_isomorphism(row, s) {
            return Ok(Some((SLabel((i + 1) as u8), p)));
        }
    }
    Ok(None)
}

/// Which Table 4 row the system is isomorphic to, if any. The stored rows
/// are revalidated first; a transcription failure surfaces as
/// `TableRowInvalid`.
pub fn match_table4(s: &CycleSystem) -> Result<Option<SLabel>> {
    Ok(identify(s)?.map(|(label, _)| label))
}

// ---------------------------------------------------------------------------
// orbits of the Table 4 rows
// ---------------------------------------------------------------------------

/// All keys of relabelings of `s` (its labeled isomorphism class), sorted.
pub fn orbit_keys(s: &CycleSystem) -> Vec<u128> {
    let machine = KeyMachine::new(s);
    let mut keys = Vec::with_capacity(362_880);
    for_each_permutation(s.order(), |images| keys.push(machine.key_under(images)));
    keys.sort_unstable();
    keys.dedup();
    keys
}

/// The eight labeled orbits of the Table 4 rows, with automorphism counts
/// derived by orbit-stabilizer. Built once, on first use (a few seconds).
pub struct ClassOrbits {
    pub keys: [Vec<u128>; 8],
    pub automorphisms: [u64; 8],
}

impl ClassOrbits {
    /// Total labeled system count: the sum of 9!/|Aut(S_i)|.
    pub fn total(&self) -> u64 {
        self.keys.iter().map(|k| k.len() as u64).sum()
    }

    pub fn classify_key(&self, key: u128) -> Option<SLabel> {
        self.keys
            .iter()
            .position(|orbit| orbit.binary_search(&key).is_ok())
            .map(|i| SLabel((i + 1) as u8))
    }
}

pub fn table4_orbits() -> &'static ClassOrbits {
    static ORBITS: OnceLock<ClassOrbits> = OnceLock::new();
    ORBITS.get_or_init(|| {
        const FACT9: u64 = 362_880;
        let keys: [Vec<u128>; 8] = std::array::from_fn(|i| orbit_keys(tables::table4_row(i + 1)));
        let automorphisms = std::array::from_fn(|i| {
            let len = keys[i].len() as u64;
            debug_assert_eq!(FACT9 % len, 0);
            FACT9 / len
        });
        ClassOrbits {
            keys,
            automorphisms,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Relabel;

    #[test]
    fn admissibility() {
        assert!(admissible(9));
        assert!(admissible(25));
        assert!(admissible(49));
        assert!(admissible(1));
        assert!(!admissible(8));
        assert!(!admissible(5));
        assert!(!admissible(12));
    }

    #[test]
    fn indexer_matches_model_indexing() {
        for n in [6u8, 9] {
            let idx = Indexer::new(n);
            for i in 0..cycle_count(n) {
                let c = FourCycle::from_index(i, n).unwrap();
                assert_eq!(idx.index_of(c.vertices()) as usize, i);
            }
        }
    }

    #[test]
    fn no_systems_for_inadmissible_orders() {
        assert_eq!(enumerate_keys(5), Vec::<u128>::new());
        assert_eq!(count_systems(5), 0);
        assert_eq!(count_systems(8), 0);
        assert!(first_system(6).is_none());
    }

    #[test]
    fn first_system_contains_lex_least_cycle() {
        let s = first_system(9).expect("4-CS(9) exists");
        assert!(s.contains(&FourCycle::new(1, 2, 3, 4).unwrap()));
    }

    #[test]
    fn first_system_wide_orders() {
        // wide-mask search for orders whose edge count exceeds one word
        let s = first_system(17).expect("4-CS(17) exists");
        assert_eq!(s.order(), 17);
        assert_eq!(s.len(), pair_count(17) / 4);
        assert!(first_system(12).is_none()); // inadmissible
    }

    #[test]
    fn forced_cycles_appear_in_first_solution() {
        let d1 = [
            FourCycle::new(1, 2, 3, 4).unwrap(),
            FourCycle::new(1, 5, 3, 6).unwrap(),
        ];
        let s = first_system_with_forced(9, &d1).unwrap().unwrap();
        assert!(s.contains(&d1[0]));
        assert!(s.contains(&d1[1]));
    }

    #[test]
    fn develop_cyclic_25() {
        let s = develop_cyclic(&CyclicStarter {
            order: 25,
            base_cycles: tables::starter25(),
        })
        .unwrap();
        assert_eq!(s.len(), 75);
        assert_eq!(s.order(), 25);
    }

    #[test]
    fn develop_cyclic_rejects_bad_starter() {
        let r = develop_cyclic(&CyclicStarter {
            order: 9,
            base_cycles: vec![[0, 1, 2, 3]],
        });
        match r {
            Err(Error::NotADecomposition { count, .. }) => assert!(count > 1),
            other => panic!("expected an edge collision, got {other:?}"),
        }
    }

    #[test]
    fn develop_cyclic_shift_invariance() {
        let s = develop_cyclic(&CyclicStarter {
            order: 25,
            base_cycles: tables::starter25(),
        })
        .unwrap();
        // x -> x + 1 (mod 25) on 1-based labels
        let images: Vec<u8> = (1..=25).map(|x| x % 25 + 1).collect();
        let shift = Permutation::from_images(images).unwrap();
        assert_eq!(s.relabel(&shift), s);
    }

    #[test]
    fn canonical_label_is_relabeling_invariant() {
        let s1 = tables::table4_row(1);
        let base = canonical_label(s1);
        let sigma = Permutation::from_cycles(9, &[&[1, 7, 4], &[2, 9]]).unwrap();
        let moved = canonical_label(&s1.relabel(&sigma));
        assert_eq!(base.canonical_system, moved.canonical_system);
        assert_eq!(base.automorphism_count, moved.automorphism_count);
        assert_eq!(base.label, Some(SLabel(1)));
        assert_eq!(moved.label, Some(SLabel(1)));
    }

    #[test]
    fn automorphism_count_divides_factorial() {
        let cls = canonical_label(tables::table4_row(8));
        assert_eq!(362_880 % cls.automorphism_count, 0);
        // sigma9 is a nontrivial automorphism of S8
        assert!(cls.automorphism_count >= 9);
    }

    #[test]
    fn find_isomorphism_witnesses() {
        let s3 = tables::table4_row(3);
        let sigma = Permutation::from_cycles(9, &[&[3, 8, 2, 6]]).unwrap();
        let moved = s3.relabel(&sigma);
        let witness = find_isomorphism(s3, &moved).expect("isomorphic by construction");
        assert_eq!(s3.relabel(&witness), moved);
        // distinct classes admit no isomorphism
        assert!(find_isomorphism(tables::table4_row(1), tables::table4_row(2)).is_none());
    }

    #[test]
    fn match_table4_on_rows_and_relabelings() {
        for label in SLabel::all() {
            assert_eq!(match_table4(label.system()).unwrap(), Some(label));
        }
        let sigma = Permutation::from_cycles(9, &[&[1, 5, 3], &[7, 9]]).unwrap();
        let moved = tables::table4_row(3).relabel(&sigma);
        assert_eq!(match_table4(&moved).unwrap(), Some(SLabel(3)));
    }

    #[test]
    fn slabel_parsing() {
        assert_eq!("S5".parse::<SLabel>().unwrap(), SLabel(5));
        assert_eq!("s8".parse::<SLabel>().unwrap(), SLabel(8));
        assert!("S9".parse::<SLabel>().is_err());
        assert!("T1".parse::<SLabel>().is_err());
    }
}
