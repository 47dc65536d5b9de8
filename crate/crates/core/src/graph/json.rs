use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Diagram, GraphError, Phase, Role, VertexId, VertexKind};
use crate::exact::ExactScalar;

pub const DIAGRAM_JSON_VERSION: u32 = 1;

/// Versioned JSON document for a [`Diagram`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramJson {
    pub version: u32,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<[VertexId; 2]>,
    pub inputs: Vec<VertexId>,
    pub outputs: Vec<VertexId>,
    pub scalar: ExactScalar,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexJson {
    pub id: VertexId,
    /// One of `z`, `x`, `h`, `boundary`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<Phase>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<ExactScalar>,
}

pub fn serialize(d: &Diagram) -> DiagramJson {
    let vertices = d
        .vertices()
        .map(|(id, k)| {
            let (kind, phase, label) = match k {
                VertexKind::Z(p) => ("z", Some(*p), None),
                VertexKind::X(p) => ("x", Some(*p), None),
                VertexKind::H(a) => ("h", None, Some(a.clone())),
                VertexKind::Boundary { .. } => ("boundary", None, None),
            };
            VertexJson { id, kind: kind.to_string(), phase, label }
        })
        .collect();
    DiagramJson {
        version: DIAGRAM_JSON_VERSION,
        vertices,
        edges: d.edges().map(|(_, a, b)| [a, b]).collect(),
        inputs: d.inputs().to_vec(),
        outputs: d.outputs().to_vec(),
        scalar: d.scalar().clone(),
    }
}

fn normalize_phase(p: Phase) -> Result<Phase, GraphError> {
    match p {
        Phase::Frac { den: 0, .. } => Err(GraphError::Schema("phase denominator is zero".into())),
        Phase::Frac { num, den } => Ok(Phase::frac(num, den)),
        Phase::Rad { rad } if !rad.is_finite() => Err(GraphError::Schema("non-finite phase".into())),
        p => Ok(p),
    }
}

/// Rebuilds and validates a diagram. Vertex ids are preserved.
pub fn deserialize(j: &DiagramJson) -> Result<Diagram, GraphError> {
    if j.version != DIAGRAM_JSON_VERSION {
        return Err(GraphError::Schema(format!("unsupported version {}", j.version)));
    }
    let mut role: BTreeMap<VertexId, (Role, usize)> = BTreeMap::new();
    for (r, list) in [(Role::Input, &j.inputs), (Role::Output, &j.outputs)] {
        for (pos, &v) in list.iter().enumerate() {
            if role.insert(v, (r, pos)).is_some() {
                return Err(GraphError::DuplicateBoundary(v));
            }
        }
    }
    let mut kinds: BTreeMap<VertexId, VertexKind> = BTreeMap::new();
    for v in &j.vertices {
        let kind = match (v.kind.as_str(), v.phase, &v.label) {
            ("z", p, None) => VertexKind::Z(normalize_phase(p.unwrap_or_default())?),
            ("x", p, None) => VertexKind::X(normalize_phase(p.unwrap_or_default())?),
            ("h", None, l) => VertexKind::H(l.clone().unwrap_or_else(|| -ExactScalar::from_int(1))),
            ("boundary", None, None) => {
                let (role, position) = *role
                    .get(&v.id)
                    .ok_or_else(|| GraphError::Schema(format!("boundary {} not in inputs/outputs", v.id)))?;
                VertexKind::Boundary { role, position }
            }
            (k, _, _) => return Err(GraphError::Schema(format!("bad vertex {}: kind {k:?} with these fields", v.id))),
        };
        if kinds.insert(v.id, kind).is_some() {
            return Err(GraphError::Schema(format!("duplicate vertex id {}", v.id)));
        }
    }
    for v in role.keys() {
        match kinds.get(v) {
            Some(VertexKind::Boundary { .. }) => {}
            Some(_) => return Err(GraphError::NotBoundary(*v)),
            None => return Err(GraphError::UnknownVertex(*v)),
        }
    }
    let max_id = kinds.keys().next_back().map_or(0, |m| m + 1);
    let mut d = Diagram::new();
    // allocate ids 0..max_id, then drop the ones not present
    let mut placeholders = Vec::new();
    for id in 0..max_id {
        let got = d.add_vertex(kinds.get(&id).cloned().unwrap_or(VertexKind::Z(Phase::zero())));
        debug_assert_eq!(got, id);
        if !kinds.contains_key(&id) {
            placeholders.push(id);
        }
    }
    for &[a, b] in &j.edges {
        for v in [a, b] {
            if !kinds.contains_key(&v) {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        d.add_edge(a, b);
    }
    for id in placeholders {
        d.remove_vertex(id)?;
    }
    d.inputs = j.inputs.clone();
    d.outputs = j.outputs.clone();
    d.set_scalar(j.scalar.clone());
    d.validate()?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gadgets;

    #[test]
    fn round_trip_cnot() {
        let mut d = gadgets::cnot();
        d.mul_scalar(&ExactScalar::sqrt2_pow(-3));
        let j = serialize(&d);
        let text = serde_json::to_string(&j).unwrap();
        let back: DiagramJson = serde_json::from_str(&text).unwrap();
        let e = deserialize(&back).unwrap();
        assert_eq!(serialize(&e), j);
        assert_eq!(e.scalar(), d.scalar());
    }

    #[test]
    fn dangling_edge_rejected() {
        let mut j = serialize(&gadgets::cnot());
        j.edges.push([0, 999]);
        assert_eq!(deserialize(&j).unwrap_err(), GraphError::UnknownVertex(999));
    }

    #[test]
    fn boundary_degree_checked() {
        let mut j = serialize(&gadgets::cnot());
        let b = j.inputs[0];
        j.edges.retain(|e| !e.contains(&b));
        assert!(matches!(deserialize(&j), Err(GraphError::BoundaryDegree(_, 0))));
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = serde_json::to_string(&serialize(&gadgets::cz())).unwrap();
        let bad = text.replacen("\"version\"", "\"colour\":1,\"version\"", 1);
        assert!(serde_json::from_str::<DiagramJson>(&bad).is_err());
        let bad = text.replacen("\"kind\"", "\"size\":2,\"kind\"", 1);
        assert!(serde_json::from_str::<DiagramJson>(&bad).is_err());
    }
}
