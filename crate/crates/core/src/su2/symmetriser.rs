use num_bigint::BigInt;
use num_rational::BigRational;

use super::Su2Error;
use crate::exact::{factorial, ExactScalar, HalfInteger};
use crate::graph::{Diagram, Phase, VertexId};

/// Appends `v` to the open wire ending at `end`.
pub(crate) fn push(d: &mut Diagram, end: &mut VertexId, v: VertexId) {
    d.add_edge(*end, v);
    *end = v;
}

pub(crate) fn push_z_pi(d: &mut Diagram, end: &mut VertexId) {
    let v = d.add_z(Phase::pi());
    push(d, end, v);
}

pub(crate) fn push_x_pi(d: &mut Diagram, end: &mut VertexId) {
    let v = d.add_x(Phase::pi());
    push(d, end, v);
}

fn push_cnot(d: &mut Diagram, ctrl: &mut VertexId, tgt: &mut VertexId) {
    let z = d.add_z(Phase::zero());
    let x = d.add_x(Phase::zero());
    push(d, ctrl, z);
    push(d, tgt, x);
    d.add_edge(z, x);
}

/// Controlled swap of the wires ending at `a` and `b`; `ctrl` is a dangling
/// vertex whose remaining leg becomes the control. Built as
/// CNOT(b→a) · Toffoli(ctrl, a → b) · CNOT(b→a), which evaluates to
/// `(1/√2)·CSWAP` with the control consumed.
pub(crate) fn push_cswap(d: &mut Diagram, ctrl: VertexId, a: &mut VertexId, b: &mut VertexId) {
    push_cnot(d, b, a);
    let zc = d.add_z(Phase::zero());
    d.add_edge(ctrl, zc);
    let za = d.add_z(Phase::zero());
    let xb = d.add_x(Phase::zero());
    push(d, a, za);
    push(d, b, xb);
    let h3 = d.add_hadamard();
    let h = d.add_hadamard();
    d.add_edge(zc, h3);
    d.add_edge(za, h3);
    d.add_edge(h3, h);
    d.add_edge(h, xb);
    push_cnot(d, b, a);
}

fn ceil_log2(n: usize) -> u32 {
    let mut k = 0;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

/// Adds the control state for the last stage of an `n`-wire symmetriser and
/// returns its `n - 1` dangling control ends. The state is proportional to
/// `|0…0⟩` plus every one-hot basis state.
pub(crate) fn push_controls(d: &mut Diagram, n: usize) -> Vec<VertexId> {
    match n {
        0 | 1 => Vec::new(),
        2 => vec![d.add_z(Phase::zero())],
        3 => {
            // one H-box shared by both controls: 2(|00⟩ + |01⟩ + |10⟩)
            let z1 = d.add_z(Phase::zero());
            let z2 = d.add_z(Phase::zero());
            let h = d.add_hadamard();
            let tap = d.add_z(Phase::zero());
            d.add_edge(z1, h);
            d.add_edge(z2, h);
            d.add_edge(h, tap);
            vec![z1, z2]
        }
        _ => {
            let c = n - 1;
            let k = ceil_log2(n);
            let tops: Vec<_> = (0..k).map(|_| d.add_z(Phase::zero())).collect();
            let mut ends = Vec::with_capacity(c);
            for g in 1..(1usize << k) {
                let h = d.add_hadamard();
                for (r, &z) in tops.iter().enumerate() {
                    let x = d.add_x(if g >> r & 1 == 1 { Phase::pi() } else { Phase::zero() });
                    d.add_edge(z, x);
                    d.add_edge(x, h);
                }
                if g <= c {
                    let t = d.add_hadamard();
                    d.add_edge(h, t);
                    ends.push(t);
                } else {
                    let t = d.add_z(Phase::zero());
                    d.add_edge(h, t);
                }
            }
            ends
        }
    }
}

/// Applies the raw symmetriser (no `λ`) to the wires ending at `wires`.
pub(crate) fn push_symmetriser(d: &mut Diagram, wires: &mut [VertexId]) {
    for i in 2..=wires.len() {
        let ctrls = push_controls(d, i);
        let (head, tail) = wires.split_at_mut(i - 1);
        let last = &mut tail[0];
        for (k, c) in ctrls.into_iter().enumerate() {
            push_cswap(d, c, &mut head[k], last);
        }
    }
}

/// Three inputs `[control, a, b]`, two outputs `[a, b]`.
pub fn cswap_gadget() -> Diagram {
    let mut d = Diagram::new();
    let c = d.add_input();
    let mut a = d.add_input();
    let mut b = d.add_input();
    push_cswap(&mut d, c, &mut a, &mut b);
    let (oa, ob) = (d.add_output(), d.add_output());
    d.add_edge(a, oa);
    d.add_edge(b, ob);
    d
}

/// Control state of the `n`-wire symmetriser's last stage: `n - 1` outputs
/// carrying a uniform superposition of `|0…0⟩` and the `n - 1` one-hot
/// states.
pub fn crown(n: usize) -> Result<Diagram, Su2Error> {
    if n < 3 {
        return Err(Su2Error::CrownSize(n));
    }
    let mut d = Diagram::new();
    for e in push_controls(&mut d, n) {
        let o = d.add_output();
        d.add_edge(e, o);
    }
    Ok(d)
}

/// `λ_n` as a diagram scalar.
pub fn lambda_scalar(n: usize) -> ExactScalar {
    if n < 2 {
        return ExactScalar::from_int(1);
    }
    let mut halvings: u32 = if n >= 3 { 1 } else { 0 };
    for i in 4..=n {
        halvings += (1u32 << ceil_log2(i)) - 1;
    }
    let den = BigInt::from(factorial(n as u64)) * BigInt::from(2).pow(halvings);
    ExactScalar::sqrt2_pow((n * (n - 1) / 2) as i64)
        * ExactScalar::from_rational(BigRational::new(BigInt::from(1), den))
}

fn wires_through(n: usize, mut body: impl FnMut(&mut Diagram, &mut [VertexId])) -> Diagram {
    let mut d = Diagram::new();
    let mut ends: Vec<_> = (0..n).map(|_| d.add_input()).collect();
    body(&mut d, &mut ends);
    let outs: Vec<_> = (0..n).map(|_| d.add_output()).collect();
    for (e, o) in ends.into_iter().zip(outs) {
        d.add_edge(e, o);
    }
    d
}

/// The symmetriser circuit without its normalising scalar.
pub fn symmetriser_raw(n: usize) -> Diagram {
    wires_through(n, push_symmetriser)
}

/// Projector onto the symmetric subspace of `n` qubits.
pub fn symmetriser(n: usize) -> Diagram {
    let mut d = symmetriser_raw(n);
    d.set_scalar(lambda_scalar(n));
    d
}

/// Spin-`j` strand: `Z(π)` on each of `2j` wires, then the symmetriser.
pub fn yutsis_link(j: HalfInteger) -> Diagram {
    let n = j.twice() as usize;
    let mut d = wires_through(n, |d, ends| {
        for e in ends.iter_mut() {
            push_z_pi(d, e);
        }
        push_symmetriser(d, ends);
    });
    d.set_scalar(lambda_scalar(n));
    d
}

/// Gluing map `Σ_m (-1)^(j-m) |j,m⟩⟨j,m|` between two spin-`j` legs.
pub fn connector(j: HalfInteger) -> Diagram {
    yutsis_link(j)
}
