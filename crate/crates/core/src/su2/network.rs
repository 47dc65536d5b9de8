use serde::{Deserialize, Serialize};

use super::symmetriser::{push_symmetriser, push_x_pi, push_z_pi};
use super::{CorrectionFactor, CorrectionKind, Su2Error};
use crate::exact::{ExactScalar, HalfInteger};
use crate::graph::{Diagram, Phase, VertexId};
use crate::oracle::{check_triad, Orientation, ReadingSign, VertexSpec};

/// Number of internal strands between each pair of bundles of a trivalent
/// vertex: `n12 = j1+j2-j3`, `n23 = j2+j3-j1`, `n13 = j1+j3-j2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Strands {
    pub n12: u32,
    pub n23: u32,
    pub n13: u32,
}

impl Strands {
    pub fn new(js: [HalfInteger; 3]) -> Result<Self, Su2Error> {
        check_triad(js[0], js[1], js[2])?;
        let [a, b, c] = js.map(|j| j.twice());
        Ok(Strands { n12: (a + b - c) / 2, n23: (b + c - a) / 2, n13: (a + c - b) / 2 })
    }

    fn between(&self, p: usize, q: usize) -> u32 {
        match (p.min(q), p.max(q)) {
            (0, 1) => self.n12,
            (1, 2) => self.n23,
            _ => self.n13,
        }
    }
}

/// A node slot an edge attaches to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct End {
    pub node: usize,
    pub slot: usize,
}

/// A spin-labelled edge. The arrow runs from `from` to `to`; a missing end
/// is an open leg of the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkEdge {
    pub spin: HalfInteger,
    pub from: Option<End>,
    pub to: Option<End>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeSpec {
    #[serde(default)]
    pub sign: ReadingSign,
}

/// A trivalent spin network. Open legs become diagram boundaries in edge
/// order: legs whose arrow enters the network are inputs, the others are
/// outputs.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub nodes: Vec<NodeSpec>,
    pub edges: Vec<NetworkEdge>,
}

impl NetworkSpec {
    /// For every node, the edge and orientation at each of its slots.
    fn slots(&self) -> Result<Vec<[(usize, Orientation); 3]>, Su2Error> {
        let mut table: Vec<[Option<(usize, Orientation)>; 3]> = vec![[None; 3]; self.nodes.len()];
        for (k, e) in self.edges.iter().enumerate() {
            if e.from.is_none() && e.to.is_none() {
                return Err(Su2Error::Arrow(format!("edge {k} is attached to no node")));
            }
            for (end, o) in [(e.from, Orientation::Outgoing), (e.to, Orientation::Ingoing)] {
                let Some(end) = end else { continue };
                if end.node >= self.nodes.len() || end.slot >= 3 {
                    return Err(Su2Error::Arrow(format!(
                        "edge {k} refers to missing slot {}.{}",
                        end.node, end.slot
                    )));
                }
                let cell = &mut table[end.node][end.slot];
                if let Some((other, _)) = cell {
                    return Err(Su2Error::Arrow(format!(
                        "edges {other} and {k} share slot {}.{}",
                        end.node, end.slot
                    )));
                }
                *cell = Some((k, o));
            }
        }
        table
            .into_iter()
            .enumerate()
            .map(|(v, row)| {
                let mut out = [(0, Orientation::Outgoing); 3];
                for s in 0..3 {
                    out[s] = row[s]
                        .ok_or_else(|| Su2Error::Arrow(format!("slot {v}.{s} has no edge")))?;
                }
                Ok(out)
            })
            .collect()
    }

    /// The 3jm node at `node` as seen from its slots.
    pub fn node_spec(&self, node: usize) -> Result<VertexSpec, Su2Error> {
        let slots = self.slots()?;
        let row = slots.get(node).ok_or_else(|| Su2Error::Arrow(format!("no node {node}")))?;
        let mut spec = VertexSpec::new(
            row.map(|(e, _)| self.edges[e].spin),
            row.map(|(_, o)| o),
        );
        spec.sign = self.nodes[node].sign;
        Ok(spec)
    }

    /// A one-node network whose legs are the open legs of `spec`.
    pub fn single(spec: &VertexSpec) -> Self {
        let edges = (0..3)
            .map(|s| {
                let end = Some(End { node: 0, slot: s });
                match spec.orientations[s] {
                    Orientation::Outgoing => NetworkEdge { spin: spec.spins[s], from: end, to: None },
                    Orientation::Ingoing => NetworkEdge { spin: spec.spins[s], from: None, to: end },
                }
            })
            .collect();
        NetworkSpec { nodes: vec![NodeSpec { sign: spec.sign }], edges }
    }
}

/// Builds the ZXH diagram of a spin network.
///
/// Every node is a set of internal strands, each a cup carrying `X(π)` on
/// the end it leaves and `Z(π)` on the end it enters, read cyclically in the
/// node's reading direction. Every edge carries one symmetriser and one
/// `Z(π)` per wire. Where an arrow enters a node its wires pass `X(π)` and
/// then `Z(π)` on the way in. The correction is one `λ` per edge and one
/// `1/N` per node.
pub fn assemble_network(spec: &NetworkSpec) -> Result<(Diagram, CorrectionFactor), Su2Error> {
    let slots = spec.slots()?;
    let mut d = Diagram::new();
    let mut corr = CorrectionFactor::one();

    // ports[node][slot][position]: the strand vertex a bundle wire lands on
    let mut ports: Vec<[Vec<VertexId>; 3]> = Vec::with_capacity(spec.nodes.len());
    for (v, row) in slots.iter().enumerate() {
        let js = row.map(|(e, _)| spec.edges[e].spin);
        let strands = Strands::new(js).map_err(|e| match e {
            Su2Error::Triad(source) => Su2Error::NodeTriad { node: v, source },
            e => e,
        })?;
        corr.push(CorrectionKind::InvN(js), 1);
        let mut p: [Vec<VertexId>; 3] = js.map(|j| vec![VertexId::MAX; j.twice() as usize]);
        let order = match spec.nodes[v].sign {
            ReadingSign::Clockwise => [0, 1, 2],
            ReadingSign::Anticlockwise => [0, 2, 1],
        };
        for t in 0..3 {
            let (a, b) = (order[t], order[(t + 1) % 3]);
            let la = p[a].len();
            for s in 0..strands.between(a, b) as usize {
                let x = d.add_x(Phase::pi());
                let z = d.add_z(Phase::pi());
                d.add_edge(x, z);
                // a's trailing positions meet b's leading ones, nested
                p[a][la - 1 - s] = x;
                p[b][s] = z;
            }
        }
        ports.push(p);
    }

    for (k, e) in spec.edges.iter().enumerate() {
        let n = e.spin.twice() as usize;
        if n >= 2 {
            corr.push(CorrectionKind::Lambda(n), 1);
        }
        let mut ends: Vec<VertexId> = match e.from {
            Some(f) => ports[f.node][f.slot].clone(),
            None => (0..n).map(|_| d.add_input()).collect(),
        };
        match (e.from, e.to) {
            (Some(_), Some(_)) => {
                push_symmetriser(&mut d, &mut ends);
                ends.iter_mut().for_each(|w| push_x_pi(&mut d, w));
                ends.iter_mut().for_each(|w| push_z_pi(&mut d, w));
            }
            (None, Some(_)) => {
                ends.iter_mut().for_each(|w| push_x_pi(&mut d, w));
                ends.iter_mut().for_each(|w| push_z_pi(&mut d, w));
                push_symmetriser(&mut d, &mut ends);
            }
            (Some(_), None) => {
                push_symmetriser(&mut d, &mut ends);
                ends.iter_mut().for_each(|w| push_z_pi(&mut d, w));
            }
            (None, None) => unreachable!("rejected by slots() for edge {k}"),
        }
        let targets: Vec<VertexId> = match e.to {
            Some(t) => ports[t.node][t.slot].clone(),
            None => (0..n).map(|_| d.add_output()).collect(),
        };
        for (w, t) in ends.into_iter().zip(targets) {
            d.add_edge(w, t);
        }
    }
    Ok((d, corr))
}

/// The 3jm node `spec` with its legs open: ingoing legs are inputs,
/// outgoing legs outputs, each in leg order.
pub fn vertex_3jm(spec: &VertexSpec) -> Result<(Diagram, CorrectionFactor), Su2Error> {
    spec.validate()?;
    assemble_network(&NetworkSpec::single(spec))
}

/// Two-legged spin-½ vertex (a 3jm with a spin-0 third leg).
pub fn cup(o1: Orientation, o2: Orientation) -> (Diagram, CorrectionFactor) {
    let spec = VertexSpec::new(
        [HalfInteger::HALF, HalfInteger::HALF, HalfInteger::ZERO],
        [o1, o2, Orientation::Outgoing],
    );
    vertex_3jm(&spec).expect("admissible")
}

/// Coupling `(j1 j2) j` and `(j j3 j4)` through one internal spin-`j` edge.
pub fn vertex_4jm(
    js: [HalfInteger; 4],
    j: HalfInteger,
    orientations: [Orientation; 4],
) -> Result<(Diagram, CorrectionFactor), Su2Error> {
    let t = js.map(|x| x.twice() as i64);
    let lo = (t[0] - t[1]).abs().max((t[2] - t[3]).abs());
    let hi = (t[0] + t[1]).min(t[2] + t[3]);
    let jt = j.twice() as i64;
    if jt < lo || jt > hi {
        return Err(Su2Error::IntermediateRange {
            j,
            lo: HalfInteger::from_twice(lo as u32),
            hi: HalfInteger::from_twice(hi.max(0) as u32),
        });
    }
    check_triad(js[0], js[1], j)?;
    check_triad(j, js[2], js[3])?;
    let leg = |i: usize, node: usize, slot: usize| {
        let end = Some(End { node, slot });
        match orientations[i] {
            Orientation::Outgoing => NetworkEdge { spin: js[i], from: end, to: None },
            Orientation::Ingoing => NetworkEdge { spin: js[i], from: None, to: end },
        }
    };
    let internal = NetworkEdge {
        spin: j,
        from: Some(End { node: 0, slot: 2 }),
        to: Some(End { node: 1, slot: 0 }),
    };
    let spec = NetworkSpec {
        nodes: vec![NodeSpec::default(); 2],
        edges: vec![leg(0, 0, 0), leg(1, 0, 1), internal, leg(2, 1, 1), leg(3, 1, 2)],
    };
    assemble_network(&spec)
}

fn edge(spin: HalfInteger, from: (usize, usize), to: (usize, usize)) -> NetworkEdge {
    NetworkEdge {
        spin,
        from: Some(End { node: from.0, slot: from.1 }),
        to: Some(End { node: to.0, slot: to.1 }),
    }
}

/// Tetrahedral network of `{j1 j2 j3; j4 j5 j6}` with nodes
/// `(j1 j2 j3)`, `(j1 j5 j6)`, `(j4 j2 j6)`, `(j3 j4 j5)`.
pub fn network_6j(js: [HalfInteger; 6]) -> Result<(Diagram, CorrectionFactor), Su2Error> {
    assemble_network(&spec_6j(js))
}

pub(crate) fn spec_6j(js: [HalfInteger; 6]) -> NetworkSpec {
    let [j1, j2, j3, j4, j5, j6] = js;
    NetworkSpec {
        nodes: vec![NodeSpec::default(); 4],
        edges: vec![
            edge(j1, (1, 0), (0, 0)),
            edge(j2, (2, 1), (0, 1)),
            edge(j3, (3, 0), (0, 2)),
            edge(j4, (2, 0), (3, 1)),
            edge(j5, (3, 2), (1, 1)),
            edge(j6, (1, 2), (2, 2)),
        ],
    }
}

/// Two nodes joined by three edges.
pub fn theta_network(
    j1: HalfInteger,
    j2: HalfInteger,
    j3: HalfInteger,
) -> Result<(Diagram, CorrectionFactor), Su2Error> {
    let spec = NetworkSpec {
        nodes: vec![NodeSpec::default(); 2],
        edges: vec![edge(j1, (0, 0), (1, 0)), edge(j2, (0, 1), (1, 2)), edge(j3, (0, 2), (1, 1))],
    };
    assemble_network(&spec)
}

/// A closed spin-`j` wire: the link closed on itself through a connector.
pub fn loop_network(j: HalfInteger) -> (Diagram, CorrectionFactor) {
    let n = j.twice() as usize;
    let mut d = Diagram::new();
    let starts: Vec<VertexId> = (0..n).map(|_| d.add_z(Phase::zero())).collect();
    let mut ends = starts.clone();
    for _ in 0..2 {
        ends.iter_mut().for_each(|w| push_z_pi(&mut d, w));
        push_symmetriser(&mut d, &mut ends);
    }
    for (e, s) in ends.into_iter().zip(starts) {
        d.add_edge(e, s);
    }
    d.set_scalar(ExactScalar::from_int(1));
    let corr = if n >= 2 {
        CorrectionFactor::one().with(CorrectionKind::Lambda(n), 2)
    } else {
        CorrectionFactor::one()
    };
    (d, corr)
}

/// A 15j network on the twisted five-rung ladder.
///
/// Rails `a0→a1→…→a4` carry `js[0..4]`, rails `b0→…→b4` carry `js[4..8]`,
/// rungs `ai→bi` carry `js[8..13]`, and the twisted closure carries
/// `a4→b0` (`js[13]`) and `b4→a0` (`js[14]`).
pub fn network_15j(js: [HalfInteger; 15]) -> Result<(Diagram, CorrectionFactor), Su2Error> {
    assemble_network(&spec_15j(js))
}

pub(crate) fn spec_15j(js: [HalfInteger; 15]) -> NetworkSpec {
    // a_i is node i, b_i is node 5+i; slot 0 incoming rail, 1 outgoing
    // rail, 2 rung
    let a = |i: usize| i;
    let b = |i: usize| 5 + i;
    let mut edges = Vec::with_capacity(15);
    for i in 0..4 {
        edges.push(edge(js[i], (a(i), 1), (a(i + 1), 0)));
    }
    for i in 0..4 {
        edges.push(edge(js[4 + i], (b(i), 1), (b(i + 1), 0)));
    }
    for i in 0..5 {
        edges.push(edge(js[8 + i], (a(i), 2), (b(i), 2)));
    }
    edges.push(edge(js[13], (a(4), 1), (b(0), 0)));
    edges.push(edge(js[14], (b(4), 1), (a(0), 0)));
    NetworkSpec { nodes: vec![NodeSpec::default(); 10], edges }
}
