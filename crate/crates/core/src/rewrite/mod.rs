//! Local rewriting of ZXH diagrams. Every rule carries the scalar that makes
//! it an equality of tensors, so rewriting never changes the evaluation.
//!
//! The scalars were derived by exact evaluation of both sides and are kept
//! in closed form here; [`scalar_table`] re-derives them for review.

mod rules;
mod simplify;
mod soundness;


use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::ExactScalar;
use crate::graph::{Diagram, VertexId};

pub use simplify::{
    default_ruleset, derivation_ruleset, measure, simplify, simplify_with, RewriteTrace,
    SimplifyOptions, TraceStep,
};
pub use soundness::{check_rule_soundness, plant, scalar_table, FrozenScalar, SoundnessReport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RewriteError {
    #[error("{rule} does not match at {site:?}")]
    InvalidMatch { rule: RuleKind, site: Vec<VertexId> },
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("rule `{0}` is not implemented")]
    Unsupported(RuleKind),
    #[error("replay diverged at step {0}")]
    ReplayDiverged(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    Fuse,
    Identity,
    HhCancel,
    Hopf,
    Copy,
    PiCopy,
    Bialgebra,
    /// Swaps the colour of a spider and puts Hadamards on all its legs.
    /// Works in both directions.
    ColorChange,
    /// A Z-spider joined to an H-box by several wires keeps only one.
    RemoveWire,
    /// An `X(0)` state on an H-box turns every other leg into a Z unit.
    Explode,
    /// An `X(π)` state on an H-box is absorbed, dropping that leg.
    Absorb,
    /// H-box states as Z states, the Hadamard as a Z-X-Z chain, and
    /// nullary H-boxes as scalars.
    ZhRelations,
    #[cfg(feature = "zh-right-column")]
    HBialgebra,
    #[cfg(feature = "zh-right-column")]
    HFuse,
    #[cfg(feature = "zh-right-column")]
    HCopy,
    #[cfg(feature = "zh-right-column")]
    Multiply,
    #[cfg(feature = "zh-right-column")]
    Average,
    #[cfg(feature = "zh-right-column")]
    Intro,
}

impl RuleKind {
    pub const SHIPPED: [RuleKind; 12] = [
        RuleKind::Fuse,
        RuleKind::Identity,
        RuleKind::HhCancel,
        RuleKind::Hopf,
        RuleKind::Copy,
        RuleKind::PiCopy,
        RuleKind::Bialgebra,
        RuleKind::ColorChange,
        RuleKind::RemoveWire,
        RuleKind::Explode,
        RuleKind::Absorb,
        RuleKind::ZhRelations,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Fuse => "fuse",
            RuleKind::Identity => "identity",
            RuleKind::HhCancel => "hh-cancel",
            RuleKind::Hopf => "hopf",
            RuleKind::Copy => "copy",
            RuleKind::PiCopy => "pi-copy",
            RuleKind::Bialgebra => "bialgebra",
            RuleKind::ColorChange => "color-change",
            RuleKind::RemoveWire => "remove-wire",
            RuleKind::Explode => "explode",
            RuleKind::Absorb => "absorb",
            RuleKind::ZhRelations => "zh-relations",
            #[cfg(feature = "zh-right-column")]
            RuleKind::HBialgebra => "h-bialgebra",
            #[cfg(feature = "zh-right-column")]
            RuleKind::HFuse => "h-fuse",
            #[cfg(feature = "zh-right-column")]
            RuleKind::HCopy => "h-copy",
            #[cfg(feature = "zh-right-column")]
            RuleKind::Multiply => "multiply",
            #[cfg(feature = "zh-right-column")]
            RuleKind::Average => "average",
            #[cfg(feature = "zh-right-column")]
            RuleKind::Intro => "intro",
        }
    }

    fn implemented(self) -> bool {
        RuleKind::SHIPPED.contains(&self)
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleKind {
    type Err = RewriteError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let all = RuleKind::SHIPPED.iter().copied();
        #[cfg(feature = "zh-right-column")]
        let all = all.chain([
            RuleKind::HBialgebra,
            RuleKind::HFuse,
            RuleKind::HCopy,
            RuleKind::Multiply,
            RuleKind::Average,
            RuleKind::Intro,
        ]);
        let mut all = all;
        all.find(|k| k.name() == s).ok_or_else(|| RewriteError::UnknownRule(s.to_string()))
    }
}

impl Serialize for RuleKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for RuleKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A rule together with an extra factor on its scalar. Shipped rules have
/// factor 1; anything else is only useful as a broken rule for testing the
/// soundness checker.
#[derive(Debug, Clone, PartialEq)]
pub struct RewriteRule {
    pub kind: RuleKind,
    factor: ExactScalar,
}

impl RewriteRule {
    pub fn new(kind: RuleKind) -> Self {
        RewriteRule { kind, factor: ExactScalar::one() }
    }

    /// The same rule with its scalar multiplied by `factor`.
    pub fn scaled(mut self, factor: ExactScalar) -> Self {
        self.factor = &self.factor * &factor;
        self
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn find_matches(&self, d: &Diagram) -> Vec<Match> {
        if !self.kind.implemented() {
            return Vec::new();
        }
        rules::find(d, self.kind).into_iter().map(|site| Match { rule: self.kind, site }).collect()
    }

    pub fn matches_at(&self, d: &Diagram, site: &[VertexId]) -> bool {
        self.kind.implemented() && rules::matches_at(d, self.kind, site)
    }
}

impl From<RuleKind> for RewriteRule {
    fn from(k: RuleKind) -> Self {
        RewriteRule::new(k)
    }
}

/// A place where a rule applies.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Match {
    pub rule: RuleKind,
    pub site: Vec<VertexId>,
}

/// Applies `rule` at `site`, folding the rule's scalar into the diagram.
pub fn apply_rule(d: &Diagram, rule: &RewriteRule, site: &[VertexId]) -> Result<Diagram, RewriteError> {
    apply_rule_scalar(d, rule, site).map(|(g, _)| g)
}

/// Like [`apply_rule`], also returning the scalar that was multiplied in.
pub fn apply_rule_scalar(
    d: &Diagram,
    rule: &RewriteRule,
    site: &[VertexId],
) -> Result<(Diagram, ExactScalar), RewriteError> {
    if !rule.kind.implemented() {
        return Err(RewriteError::Unsupported(rule.kind));
    }
    if !rules::matches_at(d, rule.kind, site) {
        return Err(RewriteError::InvalidMatch { rule: rule.kind, site: site.to_vec() });
    }
    let mut g = d.clone();
    let s = &rules::rewrite(&mut g, rule.kind, site) * &rule.factor;
    g.mul_scalar(&s);
    Ok((g, s))
}
