use std::fmt::Write;

use super::{Diagram, Role, VertexKind};

/// Graphviz rendering: Z green circles, X red circles, H yellow boxes,
/// inputs ranked left and outputs right.
pub fn to_dot(d: &Diagram) -> String {
    let mut s = String::from("graph zxh {\n  rankdir=LR;\n  node [fontsize=10];\n");
    for (v, k) in d.vertices() {
        let attrs = match k {
            VertexKind::Z(p) => format!("shape=circle, style=filled, fillcolor=\"#ccffcc\", label=\"{}\"", phase_label(p)),
            VertexKind::X(p) => format!("shape=circle, style=filled, fillcolor=\"#ff8888\", label=\"{}\"", phase_label(p)),
            VertexKind::H(a) => {
                let label = if *a == -crate::exact::ExactScalar::from_int(1) { String::new() } else { a.pretty() };
                format!("shape=box, style=filled, fillcolor=\"#ffff66\", width=0.2, height=0.2, label=\"{label}\"")
            }
            VertexKind::Boundary { role, position } => {
                let tag = if *role == Role::Input { "in" } else { "out" };
                format!("shape=plaintext, label=\"{tag}{position}\"")
            }
        };
        let _ = writeln!(s, "  v{v} [{attrs}];");
    }
    for (role, list) in [("min", d.inputs()), ("max", d.outputs())] {
        if !list.is_empty() {
            let names: Vec<String> = list.iter().map(|v| format!("v{v}")).collect();
            let _ = writeln!(s, "  {{ rank={role}; {} }}", names.join("; "));
        }
    }
    for (_, a, b) in d.edges() {
        let _ = writeln!(s, "  v{a} -- v{b};");
    }
    s.push_str("}\n");
    s
}

fn phase_label(p: &super::Phase) -> String {
    if p.is_zero() {
        String::new()
    } else {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gadgets;

    fn looks_like_dot(s: &str) {
        assert!(s.starts_with("graph zxh {") && s.trim_end().ends_with('}'));
        assert_eq!(s.matches('{').count(), s.matches('}').count());
        for line in s.lines().filter(|l| l.contains("--")) {
            assert!(line.trim_end().ends_with(';'));
        }
    }

    #[test]
    fn renders_small_diagrams() {
        for d in [gadgets::cnot(), gadgets::cz(), gadgets::ccnot()] {
            let s = to_dot(&d);
            assert!(s.contains("--"));
            looks_like_dot(&s);
        }
    }
}
