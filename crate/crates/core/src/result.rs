//! Result types shared by the miners and baselines.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::NodeSet;
use crate::spectral::RobustnessScore;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    GreedyRls,
    GreedyRgs,
    GreedyKrls,
    GreedySeeded,
    GraspRls,
    GraspRgs,
    GraspKrls,
    GraspSeeded,
    Charikar,
    OqcGreedy,
    #[serde(rename = "oqc-ls")]
    OqcLocalSearch,
    BruteForce,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::GreedyRls => "greedy-rls",
            Algorithm::GreedyRgs => "greedy-rgs",
            Algorithm::GreedyKrls => "greedy-krls",
            Algorithm::GreedySeeded => "greedy-seeded",
            Algorithm::GraspRls => "grasp-rls",
            Algorithm::GraspRgs => "grasp-rgs",
            Algorithm::GraspKrls => "grasp-krls",
            Algorithm::GraspSeeded => "grasp-seeded",
            Algorithm::Charikar => "charikar",
            Algorithm::OqcGreedy => "oqc-greedy",
            Algorithm::OqcLocalSearch => "oqc-ls",
            Algorithm::BruteForce => "brute-force",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Robustness of the working set at one size during a peel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub size: usize,
    pub lambda: f64,
    /// True when the value came from a fresh solve rather than an update.
    pub fresh: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubgraphResult {
    pub nodes: NodeSet,
    /// Natural connectivity of the induced subgraph, always recomputed from a
    /// solve on the returned set.
    pub score: RobustnessScore,
    pub algorithm: Algorithm,
    /// Value of the algorithm's own objective (robustness for the miners,
    /// density or edge surplus for the baselines).
    pub objective: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<TracePoint>,
    /// Set when the vertices span more than one connected component because
    /// construction ran out of connected candidates.
    #[serde(default)]
    pub multi_component: bool,
}

/// One of several results, tagged with the round or iteration producing it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankedResult {
    pub round: usize,
    pub result: SubgraphResult,
}

/// Results of a top-k search, best first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopK {
    pub items: Vec<RankedResult>,
    pub requested: usize,
}

impl TopK {
    pub fn fewer_than_requested(&self) -> bool {
        self.items.len() < self.requested
    }

    pub(crate) fn sort(&mut self) {
        self.items.sort_by(|a, b| {
            b.result
                .score
                .value
                .total_cmp(&a.result.score.value)
                .then_with(|| a.round.cmp(&b.round))
        });
    }
}
