//! Trade configuration labels and the union-graph classifier behind them.
//!
//! A volume-2 trade always lives on K_{2,4}; a volume-3 trade lives on one
//! of five reference graphs: K6 minus a 1-factor (foundation 6), the three
//! foundation-7 graphs of T', T'' and T*, or K_{2,6} (foundation 8). The
//! classifier compares canonical graph keys, so it cannot confuse the two
//! <2,2,4,4,4,4,4> graphs.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::Error;
use crate::graphs::{GraphKey, UnionGraph};
use crate::model::FourCycle;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TradeConfig {
    /// Volume 2 on K_{2,4}.
    Dd,
    /// Volume 3 on K6 minus a perfect matching.
    F6,
    /// Volume 3 on the unique <2,2,2,4,4,4,6> graph.
    F7Tprime,
    /// Volume 3 on the <2,2,4,4,4,4,4> graph whose degree-2 vertices share
    /// a neighbor.
    F7Tdoubleprime,
    /// Volume 3 on the <2,2,4,4,4,4,4> graph whose degree-2 vertices have
    /// disjoint neighborhoods.
    F7Tstar,
    /// Volume 3 on K_{2,6}.
    F8,
    Other,
}

impl fmt::Display for TradeConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TradeConfig::Dd => "DD",
            TradeConfig::F6 => "F6",
            TradeConfig::F7Tprime => "F7-Tprime",
            TradeConfig::F7Tdoubleprime => "F7-Tdoubleprime",
            TradeConfig::F7Tstar => "F7-Tstar",
            TradeConfig::F8 => "F8",
            TradeConfig::Other => "OTHER",
        };
        f.write_str(s)
    }
}

impl FromStr for TradeConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "DD" => TradeConfig::Dd,
            "F6" => TradeConfig::F6,
            "F7-Tprime" => TradeConfig::F7Tprime,
            "F7-Tdoubleprime" => TradeConfig::F7Tdoubleprime,
            "F7-Tstar" => TradeConfig::F7Tstar,
            "F8" => TradeConfig::F8,
            "OTHER" => TradeConfig::Other,
            _ => {
                return Err(Error::InvalidInput {
                    what: format!("unknown trade config {s:?}"),
                })
            }
        })
    }
}

fn reference_keys() -> &'static Vec<(GraphKey, TradeConfig)> {
    static KEYS: OnceLock<Vec<(GraphKey, TradeConfig)>> = OnceLock::new();
    KEYS.get_or_init(|| {
        let refs: [(&[FourCycle], TradeConfig); 6] = [
            (&crate::tables::table1()[0], TradeConfig::Dd),
            (&crate::tables::table2()[0], TradeConfig::F6),
            (&crate::tables::tprime()[0], TradeConfig::F7Tprime),
            (&crate::tables::tdoubleprime()[0], TradeConfig::F7Tdoubleprime),
            (&crate::tables::tstar()[0], TradeConfig::F7Tstar),
            (&crate::tables::table6()[0], TradeConfig::F8),
        ];
        refs.iter()
            .map(|(cycles, cfg)| {
                let g = UnionGraph::from_cycles(cycles).expect("reference cycles edge-disjoint");
                (g.canonical_key(), *cfg)
            })
            .collect()
    })
}

/// Classify the cycle set of one side of a trade by its union graph.
/// Volumes other than 2 and 3 are always `Other`.
pub fn classify_cycles(t1: &[FourCycle]) -> TradeConfig {
    if t1.len() != 2 && t1.len() != 3 {
        return TradeConfig::Other;
    }
    let g = match UnionGraph::from_cycles(t1) {
        Ok(g) => g,
        Err(_) => return TradeConfig::Other,
    };
    let key = g.canonical_key();
    for (ref_key, cfg) in reference_keys() {
        let volume_matches = match cfg {
            TradeConfig::Dd => t1.len() == 2,
            _ => t1.len() == 3,
        };
        if volume_matches && key == *ref_key {
            return *cfg;
        }
    }
    TradeConfig::Other
}
