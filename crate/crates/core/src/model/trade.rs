//! Bitrades, mu-way trades, and trade paths.

use std::fmt;

use crate::configs::{classify_cycles, TradeConfig};
use crate::error::{Error, Result};
use crate::graphs::UnionGraph;
use crate::model::cycle::FourCycle;
use crate::model::perm::{Permutation, Relabel};
use crate::model::system::CycleSystem;

fn sorted_edge_set(cycles: &[FourCycle]) -> Vec<(u8, u8)> {
    let mut edges: Vec<(u8, u8)> = cycles
        .iter()
        .flat_map(|c| c.edges().map(|e| e.endpoints()))
        .collect();
    edges.sort_unstable();
    edges
}

fn vertex_set(cycles: &[FourCycle]) -> Vec<u8> {
    let mut vs: Vec<u8> = cycles.iter().flat_map(|c| c.vertices()).collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// A 4-cycle bitrade: two disjoint sets of edge-disjoint 4-cycles with the
/// same edge union. Swapping one for the other inside a system yields
/// another system.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitrade {
    t1: Vec<FourCycle>,
    t2: Vec<FourCycle>,
    foundation: u8,
    config: TradeConfig,
}

impl Bitrade {
    pub fn new(mut t1: Vec<FourCycle>, mut t2: Vec<FourCycle>) -> Result<Self> {
        if t1.is_empty() {
            return Err(Error::InvalidTrade {
                reason: "empty trade".into(),
            });
        }
        if t1.len() != t2.len() {
            return Err(Error::InvalidTrade {
                reason: format!("legs have sizes {} and {}", t1.len(), t2.len()),
            });
        }
        t1.sort_unstable();
        t2.sort_unstable();
        // pairwise edge-disjoint within each leg
        UnionGraph::from_cycles(&t1)?;
        UnionGraph::from_cycles(&t2)?;
        if t1.iter().any(|c| t2.binary_search(c).is_ok()) {
            return Err(Error::InvalidTrade {
                reason: "legs share a cycle".into(),
            });
        }
        if sorted_edge_set(&t1) != sorted_edge_set(&t2) {
            return Err(Error::InvalidTrade {
                reason: "legs cover different edge sets".into(),
            });
        }
        let f1 = vertex_set(&t1);
        let f2 = vertex_set(&t2);
        if f1 != f2 {
            return Err(Error::InvalidTrade {
                reason: "legs have different foundations".into(),
            });
        }
        // Volume 2 always classifies as DD. Volume 3 classifies as F6,
        // F7-*, or F8 except for one genuine foundation-8 shape outside
        // the classical taxonomy, which stays OTHER.
        let config = classify_cycles(&t1);
        Ok(Bitrade {
            foundation: f1.len() as u8,
            t1,
            t2,
            config,
        })
    }

    pub fn t1(&self) -> &[FourCycle] {
        &self.t1
    }

    pub fn t2(&self) -> &[FourCycle] {
        &self.t2
    }

    pub fn volume(&self) -> usize {
        self.t1.len()
    }

    pub fn foundation(&self) -> u8 {
        self.foundation
    }

    pub fn config(&self) -> TradeConfig {
        self.config
    }

    /// The trade graph: the union of the edges of either leg.
    pub fn union_graph(&self) -> UnionGraph {
        UnionGraph::from_cycles(&self.t1).expect("validated at construction")
    }

    pub fn reverse(&self) -> Bitrade {
        Bitrade {
            t1: self.t2.clone(),
            t2: self.t1.clone(),
            foundation: self.foundation,
            config: self.config,
        }
    }
}

impl Relabel for Bitrade {
    fn relabel(&self, p: &Permutation) -> Self {
        let map = |cs: &[FourCycle]| {
            let mut v: Vec<FourCycle> = cs.iter().map(|c| c.relabel(p)).collect();
            v.sort_unstable();
            v
        };
        Bitrade {
            t1: map(&self.t1),
            t2: map(&self.t2),
            foundation: self.foundation,
            config: self.config,
        }
    }
}

impl fmt::Debug for Bitrade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Bitrade(vol={} found={} config={} t1={:?} t2={:?})",
            self.volume(),
            self.foundation,
            self.config,
            self.t1,
            self.t2
        )
    }
}

/// A mu-way trade: mu mutually disjoint decompositions of one union graph,
/// pairwise forming bitrades.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuWayTrade {
    parts: Vec<Vec<FourCycle>>,
}

impl MuWayTrade {
    pub fn new(parts: Vec<Vec<FourCycle>>) -> Result<Self> {
        if parts.len() < 2 {
            return Err(Error::InvalidTrade {
                reason: format!("mu-way trade needs mu >= 2, got {}", parts.len()),
            });
        }
        let mut parts: Vec<Vec<FourCycle>> = parts
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p
            })
            .collect();
        parts.sort();
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                Bitrade::new(parts[i].clone(), parts[j].clone())?;
            }
        }
        Ok(MuWayTrade { parts })
    }

    pub fn mu(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[Vec<FourCycle>] {
        &self.parts
    }
}

/// One move of a trade path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathStep {
    pub removed: Vec<FourCycle>,
    pub added: Vec<FourCycle>,
}

impl Relabel for PathStep {
    fn relabel(&self, p: &Permutation) -> Self {
        let map = |cs: &[FourCycle]| {
            let mut v: Vec<FourCycle> = cs.iter().map(|c| c.relabel(p)).collect();
            v.sort_unstable();
            v
        };
        PathStep {
            removed: map(&self.removed),
            added: map(&self.added),
        }
    }
}

/// A sequence of volume-2/3 trade moves applied to a start system, valid at
/// every intermediate stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TradePath {
    start: CycleSystem,
    steps: Vec<PathStep>,
    end: CycleSystem,
}

impl TradePath {
    /// The empty path at `start`.
    pub fn empty(start: CycleSystem) -> Self {
        TradePath {
            end: start.clone(),
            start,
            steps: Vec::new(),
        }
    }

    /// Validate the whole replay: each step is a volume-2/3 bitrade whose
    /// removed leg is present, and every intermediate system is genuine.
    pub fn from_steps(start: CycleSystem, steps: Vec<PathStep>) -> Result<Self> {
        let mut path = TradePath::empty(start);
        for step in steps {
            path.push(step)?;
        }
        Ok(path)
    }

    /// Append one validated move.
    pub fn push(&mut self, step: PathStep) -> Result<()> {
        let trade = Bitrade::new(step.removed.clone(), step.added.clone())?;
        if trade.volume() != 2 && trade.volume() != 3 {
            return Err(Error::InvalidTrade {
                reason: format!("path step has volume {}", trade.volume()),
            });
        }
        self.end = self.end.apply_trade(&step.removed, &step.added)?;
        self.steps.push(step);
        Ok(())
    }

    /// Append a whole path whose start must equal this path's end.
    pub fn extend(&mut self, other: &TradePath) -> Result<()> {
        if other.start != self.end {
            return Err(Error::InvalidInput {
                what: "path concatenation endpoints do not match".into(),
            });
        }
        for step in &other.steps {
            self.push(step.clone())?;
        }
        Ok(())
    }

    pub fn start(&self) -> &CycleSystem {
        &self.start
    }

    pub fn end(&self) -> &CycleSystem {
        &self.end
    }

    pub fn steps(&self) -> &[PathStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Full independent revalidation of the stored replay.
    pub fn validate(&self) -> Result<CycleSystem> {
        let replay = TradePath::from_steps(self.start.clone(), self.steps.clone())?;
        if replay.end != self.end {
            return Err(Error::InternalInconsistency {
                what: "cached path endpoint differs from replay".into(),
            });
        }
        Ok(replay.end)
    }

    /// The reverse walk from `end` back to `start`.
    pub fn reversed(&self) -> TradePath {
        let steps = self
            .steps
            .iter()
            .rev()
            .map(|s| PathStep {
                removed: s.added.clone(),
                added: s.removed.clone(),
            })
            .collect();
        TradePath {
            start: self.end.clone(),
            steps,
            end: self.start.clone(),
        }
    }
}

impl Relabel for TradePath {
    fn relabel(&self, p: &Permutation) -> Self {
        TradePath {
            start: self.start.relabel(p),
            steps: self.steps.iter().map(|s| s.relabel(p)).collect(),
            end: self.end.relabel(p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables;

    #[test]
    fn double_diamond_is_a_valid_bitrade() {
        let t = Bitrade::new(tables::table1()[0].clone(), tables::table1()[1].clone()).unwrap();
        assert_eq!(t.volume(), 2);
        assert_eq!(t.foundation(), 6);
        assert_eq!(t.config(), TradeConfig::Dd);
        let r = t.reverse();
        assert_eq!(r.t1(), t.t2());
    }

    #[test]
    fn legs_sharing_a_cycle_are_rejected() {
        let t1 = tables::table2()[2].clone(); // contains 1526
        let t2 = tables::table2()[3].clone(); // also contains 1526
        assert!(matches!(
            Bitrade::new(t1, t2),
            Err(Error::InvalidTrade { .. })
        ));
    }

    #[test]
    fn different_edge_sets_are_rejected() {
        let t1 = tables::table1()[0].clone();
        let t2 = vec![
            FourCycle::new(1, 2, 3, 5).unwrap(),
            FourCycle::new(1, 4, 3, 7).unwrap(),
        ];
        assert!(Bitrade::new(t1, t2).is_err());
    }

    #[test]
    fn three_way_tables_are_muway_trades() {
        let m = MuWayTrade::new(tables::table1().to_vec()).unwrap();
        assert_eq!(m.mu(), 3);
        let m = MuWayTrade::new(tables::table6().to_vec()).unwrap();
        assert_eq!(m.mu(), 5);
        let t2 = tables::table2();
        assert!(MuWayTrade::new(vec![t2[0].clone(), t2[1].clone(), t2[2].clone()]).is_ok());
        assert!(MuWayTrade::new(vec![t2[0].clone(), t2[1].clone(), t2[3].clone()]).is_ok());
        // T3 and T4 share cycle 1526
        assert!(MuWayTrade::new(vec![t2[2].clone(), t2[3].clone()]).is_err());
    }

    #[test]
    fn seed_path_replays_to_s1_relabeled() {
        use crate::model::Relabel;
        let s1 = tables::table4_row(1).clone();
        let steps: Vec<PathStep> = tables::seed_moves()
            .into_iter()
            .map(|(removed, added)| PathStep { removed, added })
            .collect();
        let path = TradePath::from_steps(s1.clone(), steps).unwrap();
        assert_eq!(path.len(), 2);
        let swap79 = Permutation::transposition(9, 7, 9).unwrap();
        assert_eq!(path.end(), &s1.relabel(&swap79));
        // reverse walks back
        let back = path.reversed();
        assert_eq!(back.validate().unwrap(), s1);
        // translation by any permutation stays valid
        let sigma = tables::sigma9();
        let translated = path.relabel(&sigma);
        translated.validate().unwrap();
        assert_eq!(translated.start(), &s1.relabel(&sigma));
    }

    #[test]
    fn path_rejects_missing_cycle() {
        let s1 = tables::table4_row(1).clone();
        let bogus = PathStep {
            removed: tables::tprime()[0].clone(), // not a subset of S1
            added: tables::tprime()[1].clone(),
        };
        assert!(TradePath::from_steps(s1, vec![bogus]).is_err());
    }
}
