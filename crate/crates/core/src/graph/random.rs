//! Random small diagrams for property tests and soundness trials.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Diagram, Phase, VertexId, VertexKind};
use crate::exact::ExactScalar;

#[derive(Clone, Debug)]
pub struct RandomParams {
    pub max_inputs: usize,
    pub max_outputs: usize,
    pub max_internal: usize,
    pub max_extra_edges: usize,
    /// Allow H-boxes.
    pub hboxes: bool,
    /// Allow phases of ±π/2 (otherwise 0 and π only).
    pub quarter_phases: bool,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            max_inputs: 2,
            max_outputs: 2,
            max_internal: 6,
            max_extra_edges: 6,
            hboxes: true,
            quarter_phases: true,
        }
    }
}

pub fn random_phase<R: Rng>(rng: &mut R, quarter: bool) -> Phase {
    if quarter {
        Phase::frac(rng.gen_range(0..4), 2)
    } else {
        Phase::frac(rng.gen_range(0..2), 1)
    }
}

pub fn random_label<R: Rng>(rng: &mut R) -> ExactScalar {
    match rng.gen_range(0..6) {
        0 | 1 => -ExactScalar::from_int(1),
        2 => ExactScalar::from_int(2),
        3 => ExactScalar::ratio(1, 2),
        4 => ExactScalar::i(),
        _ => ExactScalar::sqrt2(),
    }
}

pub fn random_kind<R: Rng>(rng: &mut R, p: &RandomParams) -> VertexKind {
    let k = rng.gen_range(0..if p.hboxes { 3 } else { 2 });
    match k {
        0 => VertexKind::Z(random_phase(rng, p.quarter_phases)),
        1 => VertexKind::X(random_phase(rng, p.quarter_phases)),
        _ => VertexKind::H(random_label(rng)),
    }
}

/// A connected-ish random diagram with Clifford phases.
pub fn random_diagram<R: Rng>(rng: &mut R, p: &RandomParams) -> Diagram {
    let mut d = Diagram::new();
    let n_in = rng.gen_range(0..=p.max_inputs);
    let n_out = rng.gen_range(0..=p.max_outputs);
    let n_int = rng.gen_range(1..=p.max_internal.max(1));
    let ins: Vec<VertexId> = (0..n_in).map(|_| d.add_input()).collect();
    let outs: Vec<VertexId> = (0..n_out).map(|_| d.add_output()).collect();
    let internal: Vec<VertexId> = (0..n_int).map(|_| { let k = random_kind(rng, p); d.add_vertex(k) }).collect();
    // spanning tree over internal vertices
    for i in 1..internal.len() {
        let j = rng.gen_range(0..i);
        d.add_edge(internal[i], internal[j]);
    }
    for b in ins.iter().chain(&outs) {
        let v = *internal.choose(rng).unwrap();
        d.add_edge(*b, v);
    }
    for _ in 0..rng.gen_range(0..=p.max_extra_edges) {
        let a = *internal.choose(rng).unwrap();
        let b = *internal.choose(rng).unwrap();
        if a != b || rng.gen_bool(0.2) {
            d.add_edge(a, b);
        }
    }
    if rng.gen_bool(0.3) {
        d.set_scalar(random_label(rng));
    }
    d
}
