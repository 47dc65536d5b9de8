use super::dense::Label;
use crate::graph::{Diagram, VertexId, VertexKind};

pub(crate) enum LeafKind {
    Vertex(VertexKind),
    /// Identity wire standing in for a boundary-to-boundary edge.
    Delta,
}

pub(crate) struct Leaf {
    pub labels: Vec<Label>,
    pub kind: LeafKind,
    #[allow(dead_code)]
    pub vertex: Option<VertexId>,
}

/// Tensor network of a diagram: one leaf per non-boundary vertex, labels
/// are edge ids, and `open` lists the label of each boundary in order.
pub(crate) struct Network {
    pub leaves: Vec<Leaf>,
    pub open: Vec<Label>,
}

impl Network {
    pub fn build(d: &Diagram) -> Network {
        let mut leaves = Vec::new();
        let mut next_label = d.edges().map(|(e, _, _)| e as Label + 1).max().unwrap_or(0);
        for (v, k) in d.vertices() {
            if k.is_boundary() {
                continue;
            }
            let labels = d.incident(v).iter().map(|&e| e as Label).collect();
            leaves.push(Leaf { labels, kind: LeafKind::Vertex(k.clone()), vertex: Some(v) });
        }
        let mut open = Vec::new();
        let mut wired: std::collections::BTreeMap<VertexId, Label> = Default::default();
        for b in d.boundaries() {
            let e = d.incident(b)[0];
            let other = d.other_end(e, b).unwrap();
            let is_wire = d.kind(other).is_some_and(|k| k.is_boundary());
            if !is_wire {
                open.push(e as Label);
            } else if let Some(l) = wired.remove(&b) {
                open.push(l);
            } else {
                let (l1, l2) = (next_label, next_label + 1);
                next_label += 2;
                leaves.push(Leaf { labels: vec![l1, l2], kind: LeafKind::Delta, vertex: None });
                wired.insert(other, l2);
                open.push(l1);
            }
        }
        Network { leaves, open }
    }
}
