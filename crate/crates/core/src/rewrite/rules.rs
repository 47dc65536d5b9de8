//! Matchers and replacers for each rule. A site is an ordered list of vertex
//! ids; `matches_at` is the single source of truth for validity, and
//! `rewrite` returns the scalar that keeps the evaluation unchanged.

use num_traits::One;

use super::RuleKind;
use crate::exact::ExactScalar;
use crate::graph::{Color, Diagram, EdgeId, Phase, VertexId, VertexKind};

fn spider(d: &Diagram, v: VertexId) -> Option<(Color, Phase)> {
    let k = d.kind(v)?;
    Some((k.color()?, k.phase()?))
}

fn hbox_label(d: &Diagram, v: VertexId) -> Option<ExactScalar> {
    match d.kind(v)? {
        VertexKind::H(a) => Some(a.clone()),
        _ => None,
    }
}

fn is_hadamard(d: &Diagram, v: VertexId) -> bool {
    hbox_label(d, v).is_some_and(|a| a == -ExactScalar::one()) && d.degree(v) == 2 && !has_self_loop(d, v)
}

fn has_self_loop(d: &Diagram, v: VertexId) -> bool {
    d.incident(v).iter().any(|&e| d.edge(e) == Some((v, v)))
}

fn flip(c: Color) -> Color {
    match c {
        Color::Z => Color::X,
        Color::X => Color::Z,
    }
}

/// Edges of `v` not leading to `skip`, with their far ends, in incidence order.
fn legs_except(d: &Diagram, v: VertexId, skip: VertexId) -> Vec<(EdgeId, VertexId)> {
    d.incident(v)
        .iter()
        .filter_map(|&e| d.other_end(e, v).map(|w| (e, w)))
        .filter(|&(_, w)| w != skip)
        .collect()
}

fn other_leg(d: &Diagram, v: VertexId, e: EdgeId) -> VertexId {
    let f = *d.incident(v).iter().find(|&&f| f != e).expect("degree 2");
    d.other_end(f, v).expect("incident edge")
}

/// Unit labels `i^k` that an H-box state can trade for a Z phase.
fn unit_quarter_turns(a: &ExactScalar) -> Option<i64> {
    (0..4).find(|&k| ExactScalar::i_pow(k) == *a)
}

pub(super) fn matches_at(d: &Diagram, kind: RuleKind, site: &[VertexId]) -> bool {
    if site.iter().any(|&v| d.kind(v).is_none()) {
        return false;
    }
    match (kind, site) {
        (RuleKind::Fuse, &[u, v]) => {
            u != v
                && matches!((spider(d, u), spider(d, v)), (Some((a, _)), Some((b, _))) if a == b)
                && !d.edges_between(u, v).is_empty()
        }
        (RuleKind::Identity, &[v]) => {
            spider(d, v).is_some_and(|(_, p)| p.is_zero()) && d.degree(v) == 2 && !has_self_loop(d, v)
        }
        (RuleKind::HhCancel, &[a, b]) => {
            a != b && is_hadamard(d, a) && is_hadamard(d, b) && d.edges_between(a, b).len() == 1
        }
        (RuleKind::Hopf, &[z, x]) => {
            matches!(spider(d, z), Some((Color::Z, _)))
                && matches!(spider(d, x), Some((Color::X, _)))
                && d.edges_between(z, x).len() >= 2
        }
        (RuleKind::Copy, &[s, t]) => match (spider(d, s), spider(d, t)) {
            (Some((cs, ps)), Some((ct, pt))) => {
                cs != ct
                    && d.degree(s) == 1
                    && d.edges_between(s, t).len() == 1
                    && !has_self_loop(d, t)
                    && (ps.is_zero() || (ps.is_pi() && pt.exact_exp().is_some()))
            }
            _ => false,
        },
        (RuleKind::PiCopy, &[p, t]) => match (spider(d, p), spider(d, t)) {
            (Some((cp, pp)), Some((ct, pt))) => {
                cp != ct
                    && pp.is_pi()
                    && d.degree(p) == 2
                    && !has_self_loop(d, p)
                    && d.edges_between(p, t).len() == 1
                    && !has_self_loop(d, t)
                    && pt.exact_exp().is_some()
            }
            _ => false,
        },
        (RuleKind::Bialgebra, &[z, x]) => match (spider(d, z), spider(d, x)) {
            (Some((Color::Z, pz)), Some((Color::X, px))) => {
                pz.is_zero()
                    && px.is_zero()
                    && d.edges_between(z, x).len() == 1
                    && !has_self_loop(d, z)
                    && !has_self_loop(d, x)
                    && d.degree(z) >= 2
                    && d.degree(x) >= 2
            }
            _ => false,
        },
        (RuleKind::ColorChange, &[v]) => spider(d, v).is_some() && !has_self_loop(d, v),
        (RuleKind::RemoveWire, &[z, h]) => {
            matches!(spider(d, z), Some((Color::Z, _)))
                && hbox_label(d, h).is_some()
                && d.edges_between(z, h).len() >= 2
        }
        (RuleKind::Explode, &[s, h]) => {
            matches!(spider(d, s), Some((Color::X, p)) if p.is_zero())
                && d.degree(s) == 1
                && hbox_label(d, h).is_some()
                && d.edges_between(s, h).len() == 1
                && !has_self_loop(d, h)
        }
        (RuleKind::Absorb, &[s, h]) => {
            matches!(spider(d, s), Some((Color::X, p)) if p.is_pi())
                && d.degree(s) == 1
                && hbox_label(d, h).is_some()
                && d.edges_between(s, h).len() == 1
        }
        (RuleKind::ZhRelations, &[v]) => match hbox_label(d, v) {
            Some(a) => match d.degree(v) {
                0 => true,
                1 => unit_quarter_turns(&a).is_some(),
                2 => is_hadamard(d, v),
                _ => false,
            },
            None => false,
        },
        _ => false,
    }
}

/// Candidate sites in a stable order (by vertex id, then neighbour id).
pub(super) fn find(d: &Diagram, kind: RuleKind) -> Vec<Vec<VertexId>> {
    let mut out: Vec<Vec<VertexId>> = Vec::new();
    for v in d.vertex_ids() {
        let single = matches!(kind, RuleKind::Identity | RuleKind::ColorChange | RuleKind::ZhRelations);
        if single {
            if matches_at(d, kind, &[v]) {
                out.push(vec![v]);
            }
            continue;
        }
        let mut nbrs = d.neighbors(v);
        nbrs.sort_unstable();
        nbrs.dedup();
        for w in nbrs {
            let site = vec![v, w];
            let symmetric = matches!(kind, RuleKind::Fuse | RuleKind::HhCancel);
            if symmetric && w < v {
                continue;
            }
            if matches_at(d, kind, &site) {
                out.push(site);
            }
        }
    }
    out
}

/// Performs the rewrite in place and returns the compensating scalar. The
/// site must already satisfy [`matches_at`].
pub(super) fn rewrite(d: &mut Diagram, kind: RuleKind, site: &[VertexId]) -> ExactScalar {
    let one = ExactScalar::one();
    match kind {
        RuleKind::Fuse => {
            let (u, v) = (site[0], site[1]);
            let (c, pu) = spider(d, u).unwrap();
            let (_, pv) = spider(d, v).unwrap();
            for (_, w) in legs_except(d, v, u) {
                if w != v {
                    d.add_edge(u, w);
                }
            }
            d.remove_vertex(v).unwrap();
            // loops left on the fused spider contract to nothing
            let loops: Vec<EdgeId> = d.edges_between(u, u);
            for e in loops {
                d.remove_edge(e).unwrap();
            }
            d.set_kind(u, VertexKind::spider(c, pu.add(pv))).unwrap();
            one
        }
        RuleKind::Identity => {
            let v = site[0];
            let n = d.neighbors(v);
            d.remove_vertex(v).unwrap();
            d.add_edge(n[0], n[1]);
            one
        }
        RuleKind::HhCancel => {
            let (a, b) = (site[0], site[1]);
            let e = d.edges_between(a, b)[0];
            let (wa, wb) = (other_leg(d, a, e), other_leg(d, b, e));
            d.remove_vertex(a).unwrap();
            d.remove_vertex(b).unwrap();
            d.add_edge(wa, wb);
            ExactScalar::from_int(2)
        }
        RuleKind::Hopf => {
            let es = d.edges_between(site[0], site[1]);
            d.remove_edge(es[0]).unwrap();
            d.remove_edge(es[1]).unwrap();
            ExactScalar::ratio(1, 2)
        }
        RuleKind::Copy => {
            let (s, t) = (site[0], site[1]);
            let (c, ps) = spider(d, s).unwrap();
            let (_, pt) = spider(d, t).unwrap();
            let legs = legs_except(d, t, s);
            let n = legs.len() as i64;
            for (_, w) in &legs {
                let q = d.add_vertex(VertexKind::spider(c, ps));
                d.add_edge(q, *w);
            }
            d.remove_vertex(s).unwrap();
            d.remove_vertex(t).unwrap();
            let phase = if ps.is_pi() { pt.exact_exp().unwrap() } else { one };
            &ExactScalar::sqrt2_pow(1 - n) * &phase
        }
        RuleKind::PiCopy => {
            let (p, t) = (site[0], site[1]);
            let (c, _) = spider(d, p).unwrap();
            let (ct, pt) = spider(d, t).unwrap();
            let e_pt = d.edges_between(p, t)[0];
            let w = other_leg(d, p, e_pt);
            let legs = legs_except(d, t, p);
            d.remove_vertex(p).unwrap();
            d.add_edge(t, w);
            for (e, u) in legs {
                d.remove_edge(e).unwrap();
                let q = d.add_vertex(VertexKind::spider(c, Phase::pi()));
                d.add_edge(t, q);
                d.add_edge(q, u);
            }
            d.set_kind(t, VertexKind::spider(ct, pt.neg())).unwrap();
            pt.exact_exp().unwrap()
        }
        RuleKind::Bialgebra => {
            let (z, x) = (site[0], site[1]);
            let a: Vec<VertexId> = legs_except(d, z, x).into_iter().map(|(_, w)| w).collect();
            let b: Vec<VertexId> = legs_except(d, x, z).into_iter().map(|(_, w)| w).collect();
            d.remove_vertex(z).unwrap();
            d.remove_vertex(x).unwrap();
            let xs: Vec<VertexId> = a
                .iter()
                .map(|&w| {
                    let q = d.add_x(Phase::zero());
                    d.add_edge(q, w);
                    q
                })
                .collect();
            for &w in &b {
                let q = d.add_z(Phase::zero());
                d.add_edge(q, w);
                for &xi in &xs {
                    d.add_edge(xi, q);
                }
            }
            let (m, n) = (a.len() as i64, b.len() as i64);
            ExactScalar::sqrt2_pow((m - 1) * (n - 1))
        }
        RuleKind::ColorChange => {
            let v = site[0];
            let (c, p) = spider(d, v).unwrap();
            let legs: Vec<(EdgeId, VertexId)> = legs_except(d, v, v);
            let n = legs.len() as i64;
            for (e, w) in legs {
                d.remove_edge(e).unwrap();
                let h = d.add_hadamard();
                d.add_edge(v, h);
                d.add_edge(h, w);
            }
            d.set_kind(v, VertexKind::spider(flip(c), p)).unwrap();
            ExactScalar::sqrt2_pow(-n)
        }
        RuleKind::RemoveWire => {
            let es = d.edges_between(site[0], site[1]);
            d.remove_edge(*es.last().unwrap()).unwrap();
            one
        }
        RuleKind::Explode => {
            let (s, h) = (site[0], site[1]);
            for (_, w) in legs_except(d, h, s) {
                let q = d.add_z(Phase::zero());
                d.add_edge(q, w);
            }
            d.remove_vertex(s).unwrap();
            d.remove_vertex(h).unwrap();
            ExactScalar::sqrt2()
        }
        RuleKind::Absorb => {
            d.remove_vertex(site[0]).unwrap();
            ExactScalar::sqrt2()
        }
        RuleKind::ZhRelations => {
            let v = site[0];
            let a = hbox_label(d, v).unwrap();
            match d.degree(v) {
                0 => {
                    d.remove_vertex(v).unwrap();
                    a
                }
                1 => {
                    let k = unit_quarter_turns(&a).unwrap();
                    d.set_kind(v, VertexKind::Z(Phase::frac(k, 2))).unwrap();
                    one
                }
                _ => {
                    // Hadamard as a Z-X-Z Euler chain
                    let n = d.neighbors(v);
                    d.remove_vertex(v).unwrap();
                    let z1 = d.add_z(Phase::frac(1, 2));
                    let x = d.add_x(Phase::frac(1, 2));
                    let z2 = d.add_z(Phase::frac(1, 2));
                    d.add_edge(n[0], z1);
                    d.add_edge(z1, x);
                    d.add_edge(x, z2);
                    d.add_edge(z2, n[1]);
                    &one - &ExactScalar::i()
                }
            }
        }
        #[cfg(feature = "zh-right-column")]
        _ => unreachable!("right-column rules have no matcher"),
    }
}
