use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::dense::Label;
use super::network::Network;
use crate::graph::Diagram;

/// Default open-rank caps.
pub const DEFAULT_RANK_CAP_FLOAT: usize = 28;
pub const DEFAULT_RANK_CAP_EXACT: usize = 24;

/// Pairwise merges in SSA form: leaves are `0..num_leaves`, step `k`
/// produces node `num_leaves + k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContractionPlan {
    pub num_leaves: usize,
    pub steps: Vec<(usize, usize)>,
    pub peak_rank: usize,
    /// Σ 2^|A ∪ B| over steps.
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("rank cap {cap} exceeded: step {step} produces rank {rank}")]
    RankCap { step: usize, rank: usize, cap: usize },
    #[error("leaf {leaf} already has rank {rank} > cap {cap}")]
    LeafRank { leaf: usize, rank: usize, cap: usize },
    #[error("invalid plan: {0}")]
    Invalid(String),
}

impl ContractionPlan {
    /// Checks that every node is consumed once and the plan ends in one node.
    pub fn validate(&self) -> Result<(), PlanError> {
        let total = self.num_leaves + self.steps.len();
        let mut used = vec![false; total];
        for (k, &(a, b)) in self.steps.iter().enumerate() {
            let id = self.num_leaves + k;
            for x in [a, b] {
                if x >= id || used[x] {
                    return Err(PlanError::Invalid(format!("step {k} reuses or forward-references {x}")));
                }
                used[x] = true;
            }
            if a == b {
                return Err(PlanError::Invalid(format!("step {k} merges {a} with itself")));
            }
        }
        let left = used.iter().filter(|u| !**u).count();
        if total > 0 && left != 1 {
            return Err(PlanError::Invalid(format!("{left} nodes left unmerged")));
        }
        Ok(())
    }
}

/// Label bookkeeping shared by the planners.
struct State {
    nodes: BTreeMap<usize, BTreeSet<Label>>,
    owners: BTreeMap<Label, Vec<usize>>,
    next: usize,
    peak: usize,
    cost: f64,
    steps: Vec<(usize, usize)>,
}

impl State {
    fn new(leaves: &[BTreeSet<Label>]) -> State {
        let mut owners: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
        for (i, ls) in leaves.iter().enumerate() {
            for &l in ls {
                owners.entry(l).or_default().push(i);
            }
        }
        State {
            nodes: leaves.iter().cloned().enumerate().collect(),
            owners,
            next: leaves.len(),
            peak: leaves.iter().map(|l| l.len()).max().unwrap_or(0),
            cost: 0.0,
            steps: Vec::new(),
        }
    }

    fn merged(&self, a: usize, b: usize) -> (usize, usize) {
        let (x, y) = (&self.nodes[&a], &self.nodes[&b]);
        let shared = x.intersection(y).count();
        (x.len() + y.len() - 2 * shared, x.len() + y.len() - shared)
    }

    fn merge(&mut self, a: usize, b: usize) -> usize {
        let x = self.nodes.remove(&a).unwrap();
        let y = self.nodes.remove(&b).unwrap();
        let union = x.len() + y.len() - x.intersection(&y).count();
        let res: BTreeSet<Label> = x.symmetric_difference(&y).copied().collect();
        let id = self.next;
        self.next += 1;
        for l in x.union(&y) {
            let o = self.owners.get_mut(l).unwrap();
            o.retain(|&v| v != a && v != b);
            if res.contains(l) {
                o.push(id);
            }
        }
        self.peak = self.peak.max(res.len());
        self.cost += (union as f64).exp2();
        self.nodes.insert(id, res);
        self.steps.push((a, b));
        id
    }

    fn adjacent_pairs(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for o in self.owners.values() {
            if o.len() == 2 {
                out.insert((o[0].min(o[1]), o[0].max(o[1])));
            }
        }
        out
    }

    fn finish(self, num_leaves: usize) -> ContractionPlan {
        ContractionPlan { num_leaves, steps: self.steps, peak_rank: self.peak, cost: self.cost }
    }

    /// Outer products of the remaining components, smallest ranks first.
    fn merge_components(&mut self) {
        while self.nodes.len() > 1 {
            let mut ids: Vec<(usize, usize)> = self.nodes.iter().map(|(i, l)| (l.len(), *i)).collect();
            ids.sort();
            let (a, b) = (ids[0].1, ids[1].1);
            self.merge(a.min(b), a.max(b));
        }
    }
}

fn leaf_sets(net: &Network) -> Vec<BTreeSet<Label>> {
    net.leaves
        .iter()
        .map(|l| {
            let mut s = BTreeSet::new();
            for x in &l.labels {
                if !s.insert(*x) {
                    s.remove(x);
                }
            }
            s
        })
        .collect()
}

fn check_cap(plan: &ContractionPlan, leaves: &[BTreeSet<Label>], cap: usize) -> Result<(), PlanError> {
    for (i, l) in leaves.iter().enumerate() {
        if l.len() > cap {
            return Err(PlanError::LeafRank { leaf: i, rank: l.len(), cap });
        }
    }
    replay_ranks(plan, leaves)
        .into_iter()
        .enumerate()
        .find(|&(_, r)| r > cap)
        .map_or(Ok(()), |(step, rank)| Err(PlanError::RankCap { step, rank, cap }))
}

/// Result rank of every step of a plan.
fn replay_ranks(plan: &ContractionPlan, leaves: &[BTreeSet<Label>]) -> Vec<usize> {
    let mut sets: Vec<Option<BTreeSet<Label>>> = leaves.iter().cloned().map(Some).collect();
    let mut out = Vec::new();
    for &(a, b) in &plan.steps {
        let x = sets[a].take().unwrap_or_default();
        let y = sets[b].take().unwrap_or_default();
        let r: BTreeSet<Label> = x.symmetric_difference(&y).copied().collect();
        out.push(r.len());
        sets.push(Some(r));
    }
    out
}

pub(crate) fn plan_network(net: &Network, rank_cap: usize) -> Result<ContractionPlan, PlanError> {
    let leaves = leaf_sets(net);
    let mut st = State::new(&leaves);
    loop {
        let best = st
            .adjacent_pairs()
            .into_iter()
            .map(|(a, b)| {
                let (rank, union) = st.merged(a, b);
                (rank, union, a, b)
            })
            .min();
        match best {
            Some((_, _, a, b)) => {
                st.merge(a, b);
            }
            None => break,
        }
    }
    st.merge_components();
    let plan = st.finish(leaves.len());
    check_cap(&plan, &leaves, rank_cap)?;
    Ok(plan)
}

pub(crate) fn random_network_plan(net: &Network, seed: u64) -> ContractionPlan {
    let leaves = leaf_sets(net);
    let mut st = State::new(&leaves);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let pairs: Vec<_> = st.adjacent_pairs().into_iter().collect();
        if pairs.is_empty() {
            break;
        }
        let (a, b) = pairs[rng.gen_range(0..pairs.len())];
        st.merge(a, b);
    }
    st.merge_components();
    st.finish(leaves.len())
}

/// Greedy plan: repeatedly merge the adjacent pair with the smallest merged
/// open rank, then the smallest `2^|A ∪ B|`, then the smallest ids.
/// Disconnected components are joined by outer products at the end.
pub fn plan_contraction(d: &Diagram, rank_cap: usize) -> Result<ContractionPlan, PlanError> {
    plan_network(&Network::build(d), rank_cap)
}

/// A uniformly random sequence of adjacent merges, for plan-independence tests.
pub fn random_plan(d: &Diagram, seed: u64) -> ContractionPlan {
    random_network_plan(&Network::build(d), seed)
}

/// Recomputes the peak rank and checks a supplied plan against the cap.
pub(crate) fn check_plan(net: &Network, plan: &ContractionPlan, cap: usize) -> Result<(), PlanError> {
    if plan.num_leaves != net.leaves.len() {
        return Err(PlanError::Invalid(format!(
            "plan has {} leaves, diagram network has {}",
            plan.num_leaves,
            net.leaves.len()
        )));
    }
    plan.validate()?;
    check_cap(plan, &leaf_sets(net), cap)
}

/// Rank cap from `SPINNET_RANK_CAP`, if set and valid.
pub fn rank_cap_from_env() -> Option<usize> {
    std::env::var("SPINNET_RANK_CAP").ok()?.trim().parse().ok()
}
