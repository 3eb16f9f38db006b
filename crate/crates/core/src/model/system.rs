//! Edge partitions of `K_n` into 4-cycles.

use std::fmt;

use crate::error::{Error, Result};
use crate::model::cycle::{cycle_count, pair_count, Edge, FourCycle};
use crate::model::perm::{Permutation, Relabel};

/// A 4-cycle system of order `n`: a set of 4-cycles whose edges partition
/// the edges of `K_n`. Cycles are stored sorted by global cycle index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycleSystem {
    order: u8,
    cycles: Vec<FourCycle>,
}

impl CycleSystem {
    /// Validate and build a system. Errors name the first edge that is
    /// covered more than once, or (if the cover is proper but incomplete)
    /// the first missing edge.
    pub fn from_cycles(order: u8, mut cycles: Vec<FourCycle>) -> Result<Self> {
        let mut cover = vec![0usize; pair_count(order)];
        for c in &cycles {
            if c.max_vertex() > order {
                return Err(Error::OutOfRange {
                    label: c.max_vertex(),
                    n: order,
                });
            }
            for e in c.edges() {
                let i = e.index(order)?;
                cover[i] += 1;
                if cover[i] > 1 {
                    let (u, v) = e.endpoints();
                    return Err(Error::NotADecomposition { u, v, count: cover[i] });
                }
            }
        }
        if let Some(i) = cover.iter().position(|&k| k == 0) {
            let (u, v) = Edge::from_index(i, order)?.endpoints();
            return Err(Error::NotADecomposition { u, v, count: 0 });
        }
        cycles.sort_unstable();
        Ok(CycleSystem { order, cycles })
    }

    /// Build without the partition scan; caller guarantees validity.
    pub(crate) fn from_cycles_unchecked(order: u8, mut cycles: Vec<FourCycle>) -> Self {
        cycles.sort_unstable();
        debug_assert!(CycleSystem::from_cycles(order, cycles.clone()).is_ok());
        CycleSystem { order, cycles }
    }

    pub fn order(&self) -> u8 {
        self.order
    }

    pub fn cycles(&self) -> &[FourCycle] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn contains(&self, c: &FourCycle) -> bool {
        self.cycles.binary_search(c).is_ok()
    }

    /// Sorted global cycle indices.
    pub fn indices(&self) -> Vec<u32> {
        self.cycles
            .iter()
            .map(|c| c.index(self.order).unwrap() as u32)
            .collect()
    }

    /// Pack the sorted cycle-index sequence into one integer; the numeric
    /// order of keys equals the lexicographic order of the sequences.
    /// Only supported for n <= 9 (9 base-378 digits fit in a u128).
    pub fn key(&self) -> u128 {
        debug_assert!(self.order <= 9, "state keys are only defined for n <= 9");
        let base = cycle_count(self.order) as u128;
        self.indices()
            .iter()
            .fold(0u128, |acc, &i| acc * base + i as u128)
    }

    /// Inverse of [`CycleSystem::key`] (unvalidated decode; the key is
    /// assumed to come from a valid system).
    pub fn from_key(key: u128, order: u8) -> Self {
        let base = cycle_count(order) as u128;
        let count = pair_count(order) / 4;
        let mut k = key;
        let mut cycles = Vec::with_capacity(count);
        for _ in 0..count {
            cycles.push(FourCycle::from_index((k % base) as usize, order).unwrap());
            k /= base;
        }
        cycles.reverse();
        CycleSystem { order, cycles }
    }

    /// Remove `removed` and insert `added`, revalidating the partition.
    pub fn apply_trade(&self, removed: &[FourCycle], added: &[FourCycle]) -> Result<Self> {
        let mut to_remove = removed.to_vec();
        let mut cycles = Vec::with_capacity(self.cycles.len());
        for c in &self.cycles {
            if let Some(pos) = to_remove.iter().position(|r| r == c) {
                to_remove.swap_remove(pos);
            } else {
                cycles.push(*c);
            }
        }
        if let Some(miss) = to_remove.first() {
            return Err(Error::InvalidTrade {
                reason: format!("cycle {miss:?} not present in the system"),
            });
        }
        cycles.extend_from_slice(added);
        CycleSystem::from_cycles(self.order, cycles)
    }
}

impl Relabel for CycleSystem {
    fn relabel(&self, p: &Permutation) -> Self {
        let cycles: Vec<FourCycle> = self.cycles.iter().map(|c| c.relabel(p)).collect();
        // A bijection on labels preserves the partition property.
        CycleSystem::from_cycles_unchecked(self.order, cycles)
    }
}

impl fmt::Debug for CycleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycleSystem(n={}, [", self.order)?;
        for (i, c) in self.cycles.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            let v = c.vertices();
            write!(f, "{}{}{}{}", v[0], v[1], v[2], v[3])?;
        }
        write!(f, "])")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s1() -> CycleSystem {
        crate::tables::table4()[0].clone()
    }

    #[test]
    fn key_roundtrip() {
        let s = s1();
        let k = s.key();
        assert_eq!(CycleSystem::from_key(k, 9), s);
    }

    #[test]
    fn relabel_preserves_validity() {
        let p = Permutation::from_cycles(9, &[&[7, 9]]).unwrap();
        let s = s1().relabel(&p);
        assert!(CycleSystem::from_cycles(9, s.cycles().to_vec()).is_ok());
        assert_eq!(s.len(), 9);
    }

    #[test]
    fn group_action_on_systems() {
        let p = Permutation::from_cycles(9, &[&[1, 5, 3]]).unwrap();
        let q = Permutation::from_cycles(9, &[&[2, 9], &[4, 6, 7]]).unwrap();
        let s = s1();
        assert_eq!(s.relabel(&p).relabel(&q), s.relabel(&p.then(&q)));
        assert_eq!(s.relabel(&Permutation::identity(9)), s);
    }

    #[test]
    fn duplicate_edge_is_reported() {
        // two cycles sharing edge {1,2}
        let cycles = vec![
            FourCycle::new(1, 2, 3, 4).unwrap(),
            FourCycle::new(1, 2, 5, 6).unwrap(),
        ];
        match CycleSystem::from_cycles(9, cycles) {
            Err(Error::NotADecomposition { u: 1, v: 2, count: 2 }) => {}
            other => panic!("expected duplicate edge {{1,2}}, got {other:?}"),
        }
    }

    #[test]
    fn incomplete_cover_is_reported() {
        let cycles = vec![FourCycle::new(1, 2, 3, 4).unwrap()];
        match CycleSystem::from_cycles(9, cycles) {
            Err(Error::NotADecomposition { count: 0, .. }) => {}
            other => panic!("expected missing edge, got {other:?}"),
        }
    }
}
