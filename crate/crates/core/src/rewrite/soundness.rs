use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{apply_rule_scalar, rules, RewriteRule, RuleKind};
use crate::exact::ExactScalar;
use crate::graph::random::{random_diagram, random_label, random_phase, RandomParams};
use crate::graph::{Color, Diagram, Phase, VertexId, VertexKind};
use crate::tensor::eval_exact;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoundnessFailure {
    pub trial: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoundnessReport {
    pub rule: RuleKind,
    pub trials: usize,
    pub failures: Vec<SoundnessFailure>,
}

impl SoundnessReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Host<'a, R: Rng> {
    d: Diagram,
    targets: Vec<VertexId>,
    rng: &'a mut R,
}

impl<R: Rng> Host<'_, R> {
    /// Connects a free leg of `v` to a host vertex or a fresh boundary.
    fn leg(&mut self, v: VertexId) {
        let open = self.d.inputs().len() + self.d.outputs().len();
        if self.targets.is_empty() || (open < 4 && self.rng.gen_bool(0.3)) {
            let b = if self.rng.gen_bool(0.5) { self.d.add_input() } else { self.d.add_output() };
            self.d.add_edge(b, v);
        } else {
            let t = *self.targets.choose(self.rng).unwrap();
            self.d.add_edge(v, t);
        }
    }

    fn legs(&mut self, v: VertexId, lo: usize, hi: usize) {
        for _ in 0..self.rng.gen_range(lo..=hi) {
            self.leg(v);
        }
    }

    fn color(&mut self) -> Color {
        if self.rng.gen_bool(0.5) {
            Color::Z
        } else {
            Color::X
        }
    }

    fn phase(&mut self) -> Phase {
        random_phase(self.rng, true)
    }
}

fn opposite(c: Color) -> Color {
    match c {
        Color::Z => Color::X,
        Color::X => Color::Z,
    }
}

/// A random small diagram with an instance of `kind` planted in it, and the
/// site of that instance.
pub fn plant<R: Rng>(kind: RuleKind, rng: &mut R) -> (Diagram, Vec<VertexId>) {
    let params = RandomParams {
        max_inputs: 1,
        max_outputs: 1,
        max_internal: 4,
        max_extra_edges: 3,
        hboxes: true,
        quarter_phases: true,
    };
    let d = random_diagram(rng, &params);
    let targets = d.vertices().filter(|(_, k)| !k.is_boundary()).map(|(v, _)| v).collect();
    let mut h = Host { d, targets, rng };
    let site = match kind {
        RuleKind::Fuse => {
            let c = h.color();
            let (pu, pv) = (h.phase(), h.phase());
            let u = h.d.add_vertex(VertexKind::spider(c, pu));
            let v = h.d.add_vertex(VertexKind::spider(c, pv));
            let k = h.rng.gen_range(1..=2);
            h.d.add_edges(u, v, k);
            if h.rng.gen_bool(0.2) {
                h.d.add_edge(u, u);
            }
            h.legs(u, 0, 2);
            h.legs(v, 0, 2);
            vec![u, v]
        }
        RuleKind::Identity => {
            let c = h.color();
            let v = h.d.add_vertex(VertexKind::spider(c, Phase::zero()));
            h.legs(v, 2, 2);
            vec![v]
        }
        RuleKind::HhCancel => {
            let a = h.d.add_hadamard();
            let b = h.d.add_hadamard();
            h.d.add_edge(a, b);
            h.leg(a);
            h.leg(b);
            vec![a, b]
        }
        RuleKind::Hopf => {
            let (pz, px) = (h.phase(), h.phase());
            let z = h.d.add_z(pz);
            let x = h.d.add_x(px);
            let k = h.rng.gen_range(2..=3);
            h.d.add_edges(z, x, k);
            h.legs(z, 0, 2);
            h.legs(x, 0, 2);
            vec![z, x]
        }
        RuleKind::Copy => {
            let c = h.color();
            let ps = if h.rng.gen_bool(0.5) { Phase::zero() } else { Phase::pi() };
            let pt = h.phase();
            let s = h.d.add_vertex(VertexKind::spider(c, ps));
            let t = h.d.add_vertex(VertexKind::spider(opposite(c), pt));
            h.d.add_edge(s, t);
            h.legs(t, 0, 3);
            vec![s, t]
        }
        RuleKind::PiCopy => {
            let c = h.color();
            let pt = h.phase();
            let p = h.d.add_vertex(VertexKind::spider(c, Phase::pi()));
            let t = h.d.add_vertex(VertexKind::spider(opposite(c), pt));
            h.d.add_edge(p, t);
            h.leg(p);
            h.legs(t, 0, 3);
            vec![p, t]
        }
        RuleKind::Bialgebra => {
            let z = h.d.add_z(Phase::zero());
            let x = h.d.add_x(Phase::zero());
            h.d.add_edge(z, x);
            h.legs(z, 1, 3);
            h.legs(x, 1, 3);
            vec![z, x]
        }
        RuleKind::ColorChange => {
            let (c, p) = (h.color(), h.phase());
            let v = h.d.add_vertex(VertexKind::spider(c, p));
            h.legs(v, 0, 3);
            vec![v]
        }
        RuleKind::RemoveWire => {
            let p = h.phase();
            let z = h.d.add_z(p);
            let a = random_label(h.rng);
            let b = h.d.add_h(a);
            let k = h.rng.gen_range(2..=3);
            h.d.add_edges(z, b, k);
            h.legs(z, 0, 2);
            h.legs(b, 0, 2);
            vec![z, b]
        }
        RuleKind::Explode | RuleKind::Absorb => {
            let p = if kind == RuleKind::Explode { Phase::zero() } else { Phase::pi() };
            let s = h.d.add_x(p);
            let a = random_label(h.rng);
            let b = h.d.add_h(a);
            h.d.add_edge(s, b);
            h.legs(b, 0, 3);
            vec![s, b]
        }
        RuleKind::ZhRelations => match h.rng.gen_range(0..3) {
            0 => {
                let a = random_label(h.rng);
                vec![h.d.add_h(a)]
            }
            1 => {
                let k = h.rng.gen_range(0..4);
                let v = h.d.add_h(ExactScalar::i_pow(k));
                h.leg(v);
                vec![v]
            }
            _ => {
                let v = h.d.add_hadamard();
                h.legs(v, 2, 2);
                vec![v]
            }
        },
        #[cfg(feature = "zh-right-column")]
        _ => Vec::new(),
    };
    (h.d, site)
}

fn trial(rule: &RewriteRule, seed: u64, index: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ index as u64);
    let (d, site) = plant(rule.kind, &mut rng);
    if !rules::matches_at(&d, rule.kind, &site) {
        return Err(format!("planted site {site:?} does not match"));
    }
    let (g, _) = apply_rule_scalar(&d, rule, &site).map_err(|e| e.to_string())?;
    let before = eval_exact(&d).map_err(|e| e.to_string())?;
    let after = eval_exact(&g).map_err(|e| e.to_string())?;
    if before.exact() != after.exact() {
        return Err(format!("tensor changed at site {site:?}"));
    }
    Ok(())
}

/// Applies `rule` to `trials` random hosts and compares exact evaluations
/// before and after. Trials run in parallel; the report lists them in order.
pub fn check_rule_soundness(rule: &RewriteRule, trials: usize, seed: u64) -> SoundnessReport {
    let failures = (0..trials)
        .into_par_iter()
        .filter_map(|i| trial(rule, seed, i).err().map(|detail| SoundnessFailure { trial: i, detail }))
        .collect();
    SoundnessReport { rule: rule.kind, trials, failures }
}

/// A rule scalar as shipped next to the value re-derived by evaluating both
/// sides of a bare instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrozenScalar {
    pub rule: RuleKind,
    pub case: String,
    pub frozen: ExactScalar,
    pub derived: Option<ExactScalar>,
}

impl FrozenScalar {
    pub fn agrees(&self) -> bool {
        self.derived.as_ref() == Some(&self.frozen)
    }
}

fn open_legs(d: &mut Diagram, v: VertexId, n: usize) {
    for _ in 0..n {
        let b = d.add_output();
        d.add_edge(v, b);
    }
}

/// `r` with `lhs = r·rhs`, if the tensors are proportional.
fn ratio(lhs: &Diagram, rhs: &Diagram) -> Option<ExactScalar> {
    let a = eval_exact(lhs).ok()?;
    let b = eval_exact(rhs).ok()?;
    let (a, b) = (a.exact()?, b.exact()?);
    let k = b.iter().position(|x| !x.is_zero())?;
    let r = a[k].checked_div(&b[k]).ok()?;
    a.iter().zip(b).all(|(x, y)| *x == &r * y).then_some(r)
}

fn derive(kind: RuleKind, case: String, d: Diagram, site: Vec<VertexId>) -> FrozenScalar {
    let (g, frozen) = apply_rule_scalar(&d, &RewriteRule::new(kind), &site).expect("bare instance matches");
    let mut bare = g;
    bare.set_scalar(ExactScalar::one());
    FrozenScalar { rule: kind, case, frozen, derived: ratio(&d, &bare) }
}

/// Every rule scalar over small arities, each re-derived by evaluation.
pub fn scalar_table() -> Vec<FrozenScalar> {
    let mut out = Vec::new();
    let phases = [Phase::zero(), Phase::frac(1, 2), Phase::pi(), Phase::frac(3, 2)];
    for c in [Color::Z, Color::X] {
        for &p in &phases {
            for n in 0..=3 {
                let mut d = Diagram::new();
                let v = d.add_vertex(VertexKind::spider(c, p));
                open_legs(&mut d, v, n);
                if !(n == 0 && p.is_pi()) {
                    // Z(π) with no legs is zero, which fixes no ratio
                    out.push(derive(RuleKind::ColorChange, format!("{c:?}({p}) arity {n}"), d, vec![v]));
                }

                let mut d = Diagram::new();
                let u = d.add_vertex(VertexKind::spider(c, p));
                let w = d.add_vertex(VertexKind::spider(c, Phase::frac(1, 2)));
                d.add_edge(u, w);
                open_legs(&mut d, u, n);
                open_legs(&mut d, w, 1);
                out.push(derive(RuleKind::Fuse, format!("{c:?}({p}) arity {n}"), d, vec![u, w]));

                for bit in [Phase::zero(), Phase::pi()] {
                    let mut d = Diagram::new();
                    let s = d.add_vertex(VertexKind::spider(opposite(c), bit));
                    let t = d.add_vertex(VertexKind::spider(c, p));
                    d.add_edge(s, t);
                    open_legs(&mut d, t, n);
                    out.push(derive(RuleKind::Copy, format!("{bit} state on {c:?}({p}) arity {n}"), d, vec![s, t]));
                }

                let mut d = Diagram::new();
                let q = d.add_vertex(VertexKind::spider(opposite(c), Phase::pi()));
                let t = d.add_vertex(VertexKind::spider(c, p));
                d.add_edge(q, t);
                open_legs(&mut d, q, 1);
                open_legs(&mut d, t, n);
                out.push(derive(RuleKind::PiCopy, format!("through {c:?}({p}) arity {n}"), d, vec![q, t]));
            }
        }
    }
    for c in [Color::Z, Color::X] {
        let mut d = Diagram::new();
        let v = d.add_vertex(VertexKind::spider(c, Phase::zero()));
        open_legs(&mut d, v, 2);
        out.push(derive(RuleKind::Identity, format!("{c:?}"), d, vec![v]));
    }
    let mut d = Diagram::new();
    let (a, b) = (d.add_hadamard(), d.add_hadamard());
    d.add_edge(a, b);
    open_legs(&mut d, a, 1);
    open_legs(&mut d, b, 1);
    out.push(derive(RuleKind::HhCancel, "series".into(), d, vec![a, b]));
    for k in 2..=3 {
        for n in 0..=1 {
            let mut d = Diagram::new();
            let z = d.add_z(Phase::zero());
            let x = d.add_x(Phase::zero());
            d.add_edges(z, x, k);
            open_legs(&mut d, z, n);
            open_legs(&mut d, x, 1);
            out.push(derive(RuleKind::Hopf, format!("{k} wires, arity {n}+{}", 1), d, vec![z, x]));
        }
    }
    for m in 1..=3 {
        for n in 1..=3 {
            let mut d = Diagram::new();
            let z = d.add_z(Phase::zero());
            let x = d.add_x(Phase::zero());
            d.add_edge(z, x);
            open_legs(&mut d, z, m);
            open_legs(&mut d, x, n);
            out.push(derive(RuleKind::Bialgebra, format!("{m} by {n}"), d, vec![z, x]));
        }
    }
    let labels = [-ExactScalar::one(), ExactScalar::from_int(2), ExactScalar::i()];
    for a in &labels {
        for n in 0..=2 {
            let mut d = Diagram::new();
            let z = d.add_z(Phase::zero());
            let h = d.add_h(a.clone());
            d.add_edges(z, h, 2);
            open_legs(&mut d, z, 1);
            open_legs(&mut d, h, n);
            out.push(derive(RuleKind::RemoveWire, format!("label {a}, arity {n}"), d, vec![z, h]));
            for (kind, p) in [(RuleKind::Explode, Phase::zero()), (RuleKind::Absorb, Phase::pi())] {
                let mut d = Diagram::new();
                let s = d.add_x(p);
                let h = d.add_h(a.clone());
                d.add_edge(s, h);
                open_legs(&mut d, h, n);
                out.push(derive(kind, format!("label {a}, arity {n}"), d, vec![s, h]));
            }
        }
        let mut d = Diagram::new();
        let h = d.add_h(a.clone());
        out.push(derive(RuleKind::ZhRelations, format!("nullary {a}"), d, vec![h]));
    }
    for k in 0..4 {
        let mut d = Diagram::new();
        let h = d.add_h(ExactScalar::i_pow(k));
        open_legs(&mut d, h, 1);
        out.push(derive(RuleKind::ZhRelations, format!("unary {}", ExactScalar::i_pow(k)), d, vec![h]));
    }
    let mut d = Diagram::new();
    let h = d.add_hadamard();
    open_legs(&mut d, h, 2);
    out.push(derive(RuleKind::ZhRelations, "Hadamard".into(), d, vec![h]));
    out
}
