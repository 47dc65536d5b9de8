//! Small standard diagrams.

use super::{make_hbox, make_spider, Color, Diagram, Phase};
use crate::exact::ExactScalar;

/// Unnormalised Hadamard `[[1,1],[1,-1]]`.
pub fn hadamard() -> Diagram {
    make_hbox(-ExactScalar::from_int(1), 1, 1)
}

/// `√2|b⟩` as an X-spider state.
pub fn basis_state(bit: bool) -> Diagram {
    make_spider(Color::X, if bit { Phase::pi() } else { Phase::zero() }, 0, 1)
}

/// `|0⟩ + |1⟩` as a Z-spider state.
pub fn plus_state() -> Diagram {
    make_spider(Color::Z, Phase::zero(), 0, 1)
}

/// Z–X pair; evaluates to `(1/√2)·CNOT` with input 0 the control.
pub fn cnot() -> Diagram {
    let mut d = Diagram::new();
    let (ci, ti) = (d.add_input(), d.add_input());
    let (co, to) = (d.add_output(), d.add_output());
    let z = d.add_z(Phase::zero());
    let x = d.add_x(Phase::zero());
    d.add_edge(ci, z);
    d.add_edge(z, co);
    d.add_edge(ti, x);
    d.add_edge(x, to);
    d.add_edge(z, x);
    d
}

/// Z–H–Z; evaluates to `diag(1,1,1,-1)`.
pub fn cz() -> Diagram {
    let mut d = Diagram::new();
    let (ai, bi) = (d.add_input(), d.add_input());
    let (ao, bo) = (d.add_output(), d.add_output());
    let za = d.add_z(Phase::zero());
    let zb = d.add_z(Phase::zero());
    let h = d.add_hadamard();
    d.add_edge(ai, za);
    d.add_edge(za, ao);
    d.add_edge(bi, zb);
    d.add_edge(zb, bo);
    d.add_edge(za, h);
    d.add_edge(h, zb);
    d
}

/// Three Z-spiders on a shared 3-ary H-box, with the target leg passing
/// through a Hadamard into an X-spider; evaluates to `√2·CCNOT`.
pub fn ccnot() -> Diagram {
    let mut d = Diagram::new();
    let ins: Vec<_> = (0..3).map(|_| d.add_input()).collect();
    let outs: Vec<_> = (0..3).map(|_| d.add_output()).collect();
    let z1 = d.add_z(Phase::zero());
    let z2 = d.add_z(Phase::zero());
    let x = d.add_x(Phase::zero());
    let h3 = d.add_hadamard();
    let h = d.add_hadamard();
    for (k, v) in [z1, z2, x].into_iter().enumerate() {
        d.add_edge(ins[k], v);
        d.add_edge(v, outs[k]);
    }
    d.add_edge(z1, h3);
    d.add_edge(z2, h3);
    d.add_edge(h3, h);
    d.add_edge(h, x);
    d
}

/// Label-0 H-box on two wires: all ones except a zero at `|11⟩⟨11|`.
pub fn zero_projector() -> Diagram {
    make_hbox(ExactScalar::from_int(0), 2, 2)
}

/// Two crossing wires.
pub fn swap() -> Diagram {
    let mut d = Diagram::identity(2);
    d.permute_outputs(&[1, 0]).expect("two outputs");
    d
}
