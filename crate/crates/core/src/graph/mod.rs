//! ZXH diagrams: Z and X spiders, H-boxes and ordered boundaries joined by
//! an undirected multigraph, with a global scalar.
//!
//! Boundary order is inputs then outputs; qubit 0 is the most significant
//! bit of every row/column index.

mod dot;
pub mod gadgets;
pub mod random;
mod json;
mod phase;

pub use dot::to_dot;
pub use json::{deserialize, serialize, DiagramJson, DIAGRAM_JSON_VERSION};
pub use phase::Phase;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::ExactScalar;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Input,
    Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Color {
    Z,
    X,
}

#[derive(Clone, Debug, PartialEq)]
pub enum VertexKind {
    Z(Phase),
    X(Phase),
    H(ExactScalar),
    Boundary { role: Role, position: usize },
}

impl VertexKind {
    pub fn spider(color: Color, phase: Phase) -> Self {
        match color {
            Color::Z => VertexKind::Z(phase),
            Color::X => VertexKind::X(phase),
        }
    }

    pub fn color(&self) -> Option<Color> {
        match self {
            VertexKind::Z(_) => Some(Color::Z),
            VertexKind::X(_) => Some(Color::X),
            _ => None,
        }
    }

    pub fn phase(&self) -> Option<Phase> {
        match self {
            VertexKind::Z(p) | VertexKind::X(p) => Some(*p),
            _ => None,
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, VertexKind::Boundary { .. })
    }

    pub fn is_hbox(&self) -> bool {
        matches!(self, VertexKind::H(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("arity mismatch: {0} outputs against {1} inputs")]
    ArityMismatch(usize, usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("boundary vertex {0} has degree {1}, expected 1")]
    BoundaryDegree(VertexId, usize),
    #[error("boundary vertex {0} is not listed at position {1}")]
    BoundaryPosition(VertexId, usize),
    #[error("vertex {0} is not a boundary")]
    NotBoundary(VertexId),
    #[error("duplicate boundary entry {0}")]
    DuplicateBoundary(VertexId),
    #[error("schema: {0}")]
    Schema(String),
}

/// An open ZXH multigraph. Self-loops and parallel edges are allowed.
#[derive(Clone, Default)]
pub struct Diagram {
    vertices: BTreeMap<VertexId, VertexKind>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    adj: BTreeMap<VertexId, Vec<EdgeId>>,
    inputs: Vec<VertexId>,
    outputs: Vec<VertexId>,
    scalar: ExactScalar,
    next_vertex: VertexId,
    next_edge: EdgeId,
}

impl Diagram {
    pub fn new() -> Self {
        Diagram { scalar: ExactScalar::one(), ..Default::default() }
    }

    // ---- construction ----

    pub fn add_vertex(&mut self, kind: VertexKind) -> VertexId {
        let id = self.next_vertex;
        self.next_vertex += 1;
        self.vertices.insert(id, kind);
        self.adj.insert(id, Vec::new());
        id
    }

    pub fn add_z(&mut self, phase: Phase) -> VertexId {
        self.add_vertex(VertexKind::Z(phase))
    }

    pub fn add_x(&mut self, phase: Phase) -> VertexId {
        self.add_vertex(VertexKind::X(phase))
    }

    pub fn add_h(&mut self, label: ExactScalar) -> VertexId {
        self.add_vertex(VertexKind::H(label))
    }

    /// H-box with the default label −1.
    pub fn add_hadamard(&mut self) -> VertexId {
        self.add_h(-ExactScalar::one())
    }

    /// Appends an input boundary (unconnected until an edge is added).
    pub fn add_input(&mut self) -> VertexId {
        let pos = self.inputs.len();
        let v = self.add_vertex(VertexKind::Boundary { role: Role::Input, position: pos });
        self.inputs.push(v);
        v
    }

    pub fn add_output(&mut self) -> VertexId {
        let pos = self.outputs.len();
        let v = self.add_vertex(VertexKind::Boundary { role: Role::Output, position: pos });
        self.outputs.push(v);
        v
    }

    /// Panics on unknown endpoints; builders only connect vertices they own.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> EdgeId {
        assert!(self.vertices.contains_key(&a) && self.vertices.contains_key(&b), "add_edge on unknown vertex");
        let id = self.next_edge;
        self.next_edge += 1;
        let key = if a <= b { (a, b) } else { (b, a) };
        self.edges.insert(id, key);
        self.adj.get_mut(&a).unwrap().push(id);
        self.adj.get_mut(&b).unwrap().push(id);
        id
    }

    pub fn add_edges(&mut self, a: VertexId, b: VertexId, k: usize) {
        for _ in 0..k {
            self.add_edge(a, b);
        }
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Result<(VertexId, VertexId), GraphError> {
        let (a, b) = self.edges.remove(&e).ok_or(GraphError::UnknownEdge(e))?;
        for v in [a, b] {
            let list = self.adj.get_mut(&v).unwrap();
            if let Some(i) = list.iter().position(|&x| x == e) {
                list.remove(i);
            }
        }
        Ok((a, b))
    }

    /// Removes a vertex and its edges. Boundaries are also dropped from the
    /// input/output lists and the remaining positions renumbered.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<VertexKind, GraphError> {
        let kind = self.vertices.remove(&v).ok_or(GraphError::UnknownVertex(v))?;
        let incident = self.adj.get(&v).cloned().unwrap_or_default();
        for e in incident {
            if self.edges.contains_key(&e) {
                self.remove_edge(e)?;
            }
        }
        self.adj.remove(&v);
        if kind.is_boundary() {
            self.inputs.retain(|&x| x != v);
            self.outputs.retain(|&x| x != v);
            self.renumber_boundaries();
        }
        Ok(kind)
    }

    pub fn set_kind(&mut self, v: VertexId, kind: VertexKind) -> Result<(), GraphError> {
        let slot = self.vertices.get_mut(&v).ok_or(GraphError::UnknownVertex(v))?;
        *slot = kind;
        Ok(())
    }

    pub fn scalar(&self) -> &ExactScalar {
        &self.scalar
    }

    pub fn set_scalar(&mut self, s: ExactScalar) {
        self.scalar = s;
    }

    pub fn mul_scalar(&mut self, s: &ExactScalar) {
        self.scalar = &self.scalar * s;
    }

    /// Replaces the boundary lists. Every boundary must appear exactly once.
    pub fn set_boundary_order(
        &mut self,
        inputs: Vec<VertexId>,
        outputs: Vec<VertexId>,
    ) -> Result<(), GraphError> {
        let mut seen = std::collections::BTreeSet::new();
        for &v in inputs.iter().chain(&outputs) {
            match self.vertices.get(&v) {
                None => return Err(GraphError::UnknownVertex(v)),
                Some(k) if !k.is_boundary() => return Err(GraphError::NotBoundary(v)),
                _ => {}
            }
            if !seen.insert(v) {
                return Err(GraphError::DuplicateBoundary(v));
            }
        }
        let total = self.vertices.values().filter(|k| k.is_boundary()).count();
        if seen.len() != total {
            return Err(GraphError::Schema("boundary order must list every boundary".into()));
        }
        self.inputs = inputs;
        self.outputs = outputs;
        self.renumber_boundaries();
        Ok(())
    }

    fn renumber_boundaries(&mut self) {
        for (role, list) in [(Role::Input, &self.inputs), (Role::Output, &self.outputs)] {
            for (pos, v) in list.iter().enumerate() {
                self.vertices.insert(*v, VertexKind::Boundary { role, position: pos });
            }
        }
    }

    // ---- queries ----

    pub fn kind(&self, v: VertexId) -> Option<&VertexKind> {
        self.vertices.get(&v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = (VertexId, &VertexKind)> {
        self.vertices.iter().map(|(k, v)| (*k, v))
    }

    pub fn vertex_ids(&self) -> Vec<VertexId> {
        self.vertices.keys().copied().collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Non-boundary vertices.
    pub fn num_internal(&self) -> usize {
        self.vertices.values().filter(|k| !k.is_boundary()).count()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().map(|(e, (a, b))| (*e, *a, *b))
    }

    pub fn edge(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(&e).copied()
    }

    /// Incident edge ids; a self-loop is listed twice.
    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        self.adj.get(&v).map(|x| x.as_slice()).unwrap_or(&[])
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.incident(v).len()
    }

    /// Neighbour across edge `e` from `v`.
    pub fn other_end(&self, e: EdgeId, v: VertexId) -> Option<VertexId> {
        let (a, b) = self.edge(e)?;
        if a == v {
            Some(b)
        } else if b == v {
            Some(a)
        } else {
            None
        }
    }

    /// Neighbours with multiplicity, in incidence order (self-loops appear twice).
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.incident(v).iter().filter_map(|&e| self.other_end(e, v)).collect()
    }

    /// Edges joining `a` and `b` (for `a == b`, each self-loop once).
    pub fn edges_between(&self, a: VertexId, b: VertexId) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self
            .incident(a)
            .iter()
            .copied()
            .filter(|&e| self.other_end(e, a) == Some(b))
            .collect();
        out.dedup();
        out
    }

    pub fn inputs(&self) -> &[VertexId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[VertexId] {
        &self.outputs
    }

    /// Inputs followed by outputs.
    pub fn boundaries(&self) -> Vec<VertexId> {
        self.inputs.iter().chain(&self.outputs).copied().collect()
    }

    pub fn is_clifford(&self) -> bool {
        self.vertices.values().all(|k| k.phase().is_none_or(|p| p.is_clifford()))
    }

    /// Checks the boundary invariants.
    pub fn validate(&self) -> Result<(), GraphError> {
        let mut seen = std::collections::BTreeSet::new();
        for (role, list) in [(Role::Input, &self.inputs), (Role::Output, &self.outputs)] {
            for (pos, &v) in list.iter().enumerate() {
                if !seen.insert(v) {
                    return Err(GraphError::DuplicateBoundary(v));
                }
                match self.vertices.get(&v) {
                    Some(VertexKind::Boundary { role: r, position }) if *r == role && *position == pos => {}
                    Some(VertexKind::Boundary { .. }) => return Err(GraphError::BoundaryPosition(v, pos)),
                    Some(_) => return Err(GraphError::NotBoundary(v)),
                    None => return Err(GraphError::UnknownVertex(v)),
                }
            }
        }
        for (&v, k) in &self.vertices {
            if let VertexKind::Boundary { position, .. } = k {
                if !seen.contains(&v) {
                    return Err(GraphError::BoundaryPosition(v, *position));
                }
                let d = self.degree(v);
                if d != 1 {
                    return Err(GraphError::BoundaryDegree(v, d));
                }
            }
        }
        Ok(())
    }

    /// Copy with vertex ids remapped to `0..n` in current order.
    pub fn compacted(&self) -> Diagram {
        let map: BTreeMap<VertexId, VertexId> =
            self.vertices.keys().enumerate().map(|(i, &v)| (v, i)).collect();
        self.relabeled(|v| map[&v])
    }

    /// Copy with ids transformed by an injective map.
    pub fn relabeled(&self, f: impl Fn(VertexId) -> VertexId) -> Diagram {
        let mut d = Diagram { scalar: self.scalar.clone(), ..Default::default() };
        for (&v, k) in &self.vertices {
            let nv = f(v);
            d.vertices.insert(nv, k.clone());
            d.adj.insert(nv, Vec::new());
            d.next_vertex = d.next_vertex.max(nv + 1);
        }
        for &(a, b) in self.edges.values() {
            d.add_edge(f(a), f(b));
        }
        d.inputs = self.inputs.iter().map(|&v| f(v)).collect();
        d.outputs = self.outputs.iter().map(|&v| f(v)).collect();
        d
    }

    // ---- composition ----

    /// Bare wires: `n` inputs connected straight to `n` outputs.
    pub fn identity(n: usize) -> Diagram {
        let mut d = Diagram::new();
        let ins: Vec<_> = (0..n).map(|_| d.add_input()).collect();
        for i in ins {
            let o = d.add_output();
            d.add_edge(i, o);
        }
        d
    }

    /// The scalar `s` as a diagram with no vertices.
    pub fn scalar_diagram(s: ExactScalar) -> Diagram {
        let mut d = Diagram::new();
        d.scalar = s;
        d
    }

    /// Disjoint union; boundary lists concatenate, scalars multiply.
    pub fn compose_par(&self, g: &Diagram) -> Diagram {
        let off = self.next_vertex;
        let g2 = g.relabeled(|v| v + off);
        let mut d = self.clone();
        for (&v, k) in &g2.vertices {
            d.vertices.insert(v, k.clone());
            d.adj.insert(v, Vec::new());
        }
        d.next_vertex = off + g.next_vertex;
        for &(a, b) in g2.edges.values() {
            d.add_edge(a, b);
        }
        d.inputs.extend(g2.inputs);
        d.outputs.extend(g2.outputs);
        d.scalar = &self.scalar * &g.scalar;
        d.renumber_boundaries();
        d
    }

    /// `g ∘ self`: outputs of `self` are wired to inputs of `g`.
    pub fn compose_seq(&self, g: &Diagram) -> Result<Diagram, GraphError> {
        if self.outputs.len() != g.inputs.len() {
            return Err(GraphError::ArityMismatch(self.outputs.len(), g.inputs.len()));
        }
        let off = self.next_vertex;
        let mut d = self.compose_par(g);
        let g_ins: Vec<_> = g.inputs.iter().map(|&v| v + off).collect();
        let g_outs: Vec<_> = g.outputs.iter().map(|&v| v + off).collect();
        for (o, i) in self.outputs.iter().copied().zip(g_ins) {
            d.join(o, i)?;
        }
        let ins = self.inputs.clone();
        d.set_boundary_order(ins, g_outs)?;
        Ok(d)
    }

    /// Fuses two boundary vertices into a plain wire between their
    /// neighbours. A boundary pair joined to each other closes a loop (×2).
    pub fn join(&mut self, a: VertexId, b: VertexId) -> Result<(), GraphError> {
        for v in [a, b] {
            match self.vertices.get(&v) {
                None => return Err(GraphError::UnknownVertex(v)),
                Some(k) if !k.is_boundary() => return Err(GraphError::NotBoundary(v)),
                _ => {}
            }
            if self.degree(v) != 1 {
                return Err(GraphError::BoundaryDegree(v, self.degree(v)));
            }
        }
        let ea = self.incident(a)[0];
        let na = self.other_end(ea, a).unwrap();
        let eb = self.incident(b)[0];
        let nb = self.other_end(eb, b).unwrap();
        self.remove_vertex(a)?;
        self.remove_vertex(b)?;
        if na == b {
            self.scalar = &self.scalar * &ExactScalar::from_int(2);
        } else {
            self.add_edge(na, nb);
        }
        Ok(())
    }

    /// Swaps the roles of inputs and outputs (tensor transpose).
    pub fn transpose(&self) -> Diagram {
        let mut d = self.clone();
        std::mem::swap(&mut d.inputs, &mut d.outputs);
        d.renumber_boundaries();
        d
    }

    /// Complex conjugate of every generator and of the scalar.
    pub fn conjugate(&self) -> Diagram {
        let mut d = self.clone();
        for k in d.vertices.values_mut() {
            *k = match k.clone() {
                VertexKind::Z(p) => VertexKind::Z(p.neg()),
                VertexKind::X(p) => VertexKind::X(p.neg()),
                VertexKind::H(a) => VertexKind::H(a.conj()),
                b => b,
            };
        }
        d.scalar = d.scalar.conj();
        d
    }

    /// Hermitian adjoint.
    pub fn adjoint(&self) -> Diagram {
        self.conjugate().transpose()
    }

    /// Permutes the outputs: new output `k` is old output `perm[k]`.
    pub fn permute_outputs(&mut self, perm: &[usize]) -> Result<(), GraphError> {
        if perm.len() != self.outputs.len() {
            return Err(GraphError::ArityMismatch(perm.len(), self.outputs.len()));
        }
        let outs = perm.iter().map(|&p| self.outputs[p]).collect();
        let ins = self.inputs.clone();
        self.set_boundary_order(ins, outs)
    }

    /// Permutes the inputs: new input `k` is old input `perm[k]`.
    pub fn permute_inputs(&mut self, perm: &[usize]) -> Result<(), GraphError> {
        if perm.len() != self.inputs.len() {
            return Err(GraphError::ArityMismatch(perm.len(), self.inputs.len()));
        }
        let ins = perm.iter().map(|&p| self.inputs[p]).collect();
        let outs = self.outputs.clone();
        self.set_boundary_order(ins, outs)
    }

    /// Stable structural hash of the serialized form.
    pub fn structural_hash(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        serde_json::to_string(&serialize(self)).unwrap_or_default().hash(&mut h);
        h.finish()
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Diagram (scalar {})", self.scalar)?;
        for (v, k) in &self.vertices {
            writeln!(f, "  {v}: {k:?} -> {:?}", self.neighbors(*v))?;
        }
        write!(f, "  inputs {:?} outputs {:?}", self.inputs, self.outputs)
    }
}

/// Single spider with `n_in` inputs and `n_out` outputs; scalar 1.
pub fn make_spider(color: Color, phase: Phase, n_in: usize, n_out: usize) -> Diagram {
    let mut d = Diagram::new();
    let ins: Vec<_> = (0..n_in).map(|_| d.add_input()).collect();
    let outs: Vec<_> = (0..n_out).map(|_| d.add_output()).collect();
    let s = d.add_vertex(VertexKind::spider(color, phase));
    for b in ins.into_iter().chain(outs) {
        d.add_edge(b, s);
    }
    d
}

/// Single H-box with `n_in` inputs and `n_out` outputs; scalar 1.
pub fn make_hbox(label: ExactScalar, n_in: usize, n_out: usize) -> Diagram {
    let mut d = Diagram::new();
    let ins: Vec<_> = (0..n_in).map(|_| d.add_input()).collect();
    let outs: Vec<_> = (0..n_out).map(|_| d.add_output()).collect();
    let h = d.add_h(label);
    for b in ins.into_iter().chain(outs) {
        d.add_edge(b, h);
    }
    d
}
