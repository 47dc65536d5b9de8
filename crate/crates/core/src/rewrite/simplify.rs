use serde::{Deserialize, Serialize};

use super::{apply_rule_scalar, RewriteError, RewriteRule, RuleKind};
use crate::exact::ExactScalar;
use crate::graph::{Diagram, VertexId};

/// `(vertices, H-boxes, edges)`, compared lexicographically. Every accepted
/// simplification step strictly lowers it.
pub fn measure(d: &Diagram) -> (usize, usize, usize) {
    let h = d.vertices().filter(|(_, k)| k.is_hbox()).count();
    (d.num_vertices(), h, d.num_edges())
}

/// Fuse, identity and hh-cancel: none of them can grow a diagram.
pub fn default_ruleset() -> Vec<RewriteRule> {
    [RuleKind::Fuse, RuleKind::Identity, RuleKind::HhCancel].map(RewriteRule::new).to_vec()
}

/// Every shipped rule, shrinking ones first. Meant to be used with
/// lookahead, since some rules only pay off after a follow-up step.
pub fn derivation_ruleset() -> Vec<RewriteRule> {
    [
        RuleKind::Fuse,
        RuleKind::Identity,
        RuleKind::HhCancel,
        RuleKind::Hopf,
        RuleKind::Copy,
        RuleKind::Explode,
        RuleKind::Absorb,
        RuleKind::RemoveWire,
        RuleKind::ZhRelations,
        RuleKind::ColorChange,
        RuleKind::Bialgebra,
        RuleKind::PiCopy,
    ]
    .map(RewriteRule::new)
    .to_vec()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplifyOptions {
    /// Longest rule sequence tried when no single step shrinks the diagram.
    /// 1 gives the plain greedy loop.
    pub lookahead: usize,
    /// Rule applications allowed per search for the next step.
    pub budget: usize,
}

impl Default for SimplifyOptions {
    fn default() -> Self {
        SimplifyOptions { lookahead: 1, budget: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub rule: RuleKind,
    pub site: Vec<VertexId>,
    /// Scalar folded into the diagram by this step.
    pub scalar: ExactScalar,
}

/// Record of a simplification; replaying it on the initial diagram gives
/// the final one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RewriteTrace {
    pub initial_hash: String,
    pub final_hash: String,
    pub steps: Vec<TraceStep>,
}

fn hash_hex(d: &Diagram) -> String {
    format!("{:016x}", d.structural_hash())
}

impl RewriteTrace {
    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Product of the step scalars.
    pub fn total_scalar(&self) -> ExactScalar {
        self.steps.iter().fold(ExactScalar::from_int(1), |acc, s| &acc * &s.scalar)
    }

    pub fn replay(&self, initial: &Diagram) -> Result<Diagram, RewriteError> {
        if hash_hex(initial) != self.initial_hash {
            return Err(RewriteError::ReplayDiverged(0));
        }
        let mut d = initial.clone();
        for (i, step) in self.steps.iter().enumerate() {
            let (g, s) = apply_rule_scalar(&d, &RewriteRule::new(step.rule), &step.site)?;
            if s != step.scalar {
                return Err(RewriteError::ReplayDiverged(i));
            }
            d = g;
        }
        if hash_hex(&d) != self.final_hash {
            return Err(RewriteError::ReplayDiverged(self.steps.len()));
        }
        Ok(d)
    }
}

/// Greedy fixpoint: repeatedly applies the first rule (in `ruleset` order)
/// at its first site (by vertex id) that shrinks the diagram.
pub fn simplify(d: &Diagram, ruleset: &[RewriteRule]) -> (Diagram, RewriteTrace) {
    simplify_with(d, ruleset, &SimplifyOptions::default())
}

pub fn simplify_with(d: &Diagram, ruleset: &[RewriteRule], opts: &SimplifyOptions) -> (Diagram, RewriteTrace) {
    let initial_hash = hash_hex(d);
    let mut cur = d.clone();
    let mut steps = Vec::new();
    'outer: loop {
        let target = measure(&cur);
        for depth in 1..=opts.lookahead.max(1) {
            let mut budget = opts.budget;
            let mut path = Vec::new();
            if let Some(g) = search(&cur, ruleset, target, depth, &mut budget, &mut path) {
                steps.extend(path);
                cur = g;
                continue 'outer;
            }
        }
        break;
    }
    let trace = RewriteTrace { initial_hash, final_hash: hash_hex(&cur), steps };
    (cur, trace)
}

fn search(
    d: &Diagram,
    ruleset: &[RewriteRule],
    target: (usize, usize, usize),
    depth: usize,
    budget: &mut usize,
    path: &mut Vec<TraceStep>,
) -> Option<Diagram> {
    for rule in ruleset {
        for m in rule.find_matches(d) {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            let (g, scalar) = apply_rule_scalar(d, rule, &m.site).expect("found sites apply");
            path.push(TraceStep { rule: rule.kind, site: m.site, scalar });
            if measure(&g) < target {
                return Some(g);
            }
            if depth > 1 {
                if let Some(r) = search(&g, ruleset, target, depth - 1, budget, path) {
                    return Some(r);
                }
            }
            path.pop();
        }
    }
    None
}
