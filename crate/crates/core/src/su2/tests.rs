use super::*;
use crate::exact::{Matrix, RadicalNumber};
use crate::graph::{Diagram, Phase, VertexId};
use crate::oracle::{
    invariant_theta, symmetric_isometry, w4jm, w6j, yutsis_matrix_3, yutsis_matrix_4, Orientation,
    ReadingSign, VertexSpec, YutsisTensor,
};
use crate::exact::MagneticIndex;
use crate::tensor::{eval_exact, eval_float, eval_scalar, plug_basis_raw, to_matrix};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use Orientation::{Ingoing as I, Outgoing as O};

fn h(s: &str) -> HalfInteger {
    s.parse().unwrap()
}

fn r(s: &str) -> RadicalNumber {
    s.parse().unwrap()
}

fn rmat(scale: &str, rows: &[&[&str]]) -> Matrix<RadicalNumber> {
    let s = r(scale);
    Matrix::from_fn(rows.len(), rows[0].len(), |i, j| &r(rows[i][j]) * &s)
}

fn kron_all(ms: &[Matrix<RadicalNumber>]) -> Matrix<RadicalNumber> {
    ms.iter().fold(Matrix::identity(1), |acc, m| acc.kron(m))
}

fn exact_matrix(d: &Diagram) -> Matrix<ExactScalar> {
    to_matrix(&eval_exact(d).unwrap()).unwrap()
}

fn radical_matrix(d: &Diagram) -> Matrix<RadicalNumber> {
    exact_matrix(d).map(|x| x.to_radical().expect("real"))
}

fn corrected(d: &Diagram, c: &CorrectionFactor) -> Matrix<RadicalNumber> {
    radical_matrix(d).scale(c.value())
}

fn legs_of(spins: &[HalfInteger], os: &[Orientation], want: Orientation) -> Matrix<RadicalNumber> {
    let ps: Vec<_> = (0..spins.len())
        .filter(|&i| os[i] == want)
        .map(|i| symmetric_isometry(spins[i]))
        .collect();
    kron_all(&ps)
}

/// `P_out · M · P_inᵀ` of a corrected diagram matrix.
fn project(m: &Matrix<RadicalNumber>, spins: &[HalfInteger], os: &[Orientation]) -> Matrix<RadicalNumber> {
    legs_of(spins, os, O).matmul(m).matmul(&legs_of(spins, os, I).transpose())
}

fn triads(max_twice: u32) -> Vec<[HalfInteger; 3]> {
    let mut out = Vec::new();
    for a in 0..=max_twice {
        for b in 0..=max_twice {
            for c in 0..=max_twice {
                let js = [a, b, c].map(HalfInteger::from_twice);
                if Strands::new(js).is_ok() {
                    out.push(js);
                }
            }
        }
    }
    out
}

fn permutation_matrix(perm: &[usize]) -> Matrix<ExactScalar> {
    // wire k of the input lands on wire perm[k]; wire 0 is the top bit
    let n = perm.len();
    let dim = 1 << n;
    Matrix::from_fn(dim, dim, |row, col| {
        let mut img = 0;
        for k in 0..n {
            if col >> (n - 1 - k) & 1 == 1 {
                img |= 1 << (n - 1 - perm[k]);
            }
        }
        if img == row {
            ExactScalar::one()
        } else {
            ExactScalar::zero()
        }
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[test]
fn cswap_matches_printed_matrix() {
    let m = exact_matrix(&cswap_gadget());
    let printed = [
        [1, 0, 0, 0, 1, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 1, 0],
        [0, 0, 1, 0, 0, 1, 0, 0],
        [0, 0, 0, 1, 0, 0, 0, 1],
    ];
    let s = ExactScalar::sqrt2_pow(-1);
    let want = Matrix::from_fn(4, 8, |i, j| &ExactScalar::from_int(printed[i][j]) * &s);
    assert_eq!(m, want);
}

#[test]
fn cswap_control_plugs() {
    let d = cswap_gadget();
    let c = d.inputs()[0];
    let (p0, _) = plug_basis_raw(&d, &[(c, false)]).unwrap();
    let (p1, _) = plug_basis_raw(&d, &[(c, true)]).unwrap();
    // the √2 of the plug cancels the gadget's 1/√2
    assert_eq!(exact_matrix(&p0), Matrix::identity(4));
    assert_eq!(exact_matrix(&p1), permutation_matrix(&[1, 0]));
}

fn one_hot_states(outputs: usize) -> Vec<usize> {
    let mut v = vec![0];
    v.extend((0..outputs).map(|k| 1 << k));
    v
}

#[test]
fn crowns_are_uniform_one_hot_superpositions() {
    for n in 3..=6 {
        let d = crown(n).unwrap();
        assert_eq!(d.outputs().len(), n - 1);
        let t = eval_exact(&d).unwrap();
        let amps = t.exact().unwrap();
        let support = one_hot_states(n - 1);
        let lead = amps[0].clone();
        assert!(!lead.is_zero());
        for (idx, a) in amps.iter().enumerate() {
            if support.contains(&idx) {
                assert_eq!(*a, lead, "n={n} idx={idx}");
            } else {
                assert!(a.is_zero(), "n={n} idx={idx}");
            }
        }
        assert_eq!(support.len(), n);
    }
    // the shared-H-box control: 2(|00⟩ + |10⟩ + |01⟩)
    let amps = eval_exact(&crown(3).unwrap()).unwrap().exact().unwrap().to_vec();
    let two = ExactScalar::from_int(2);
    assert_eq!(amps, vec![two.clone(), two.clone(), two, ExactScalar::zero()]);
    assert!(matches!(crown(2), Err(Su2Error::CrownSize(2))));
}

#[test]
fn crown_dead_branch_is_zero() {
    // forcing the all-ones output kills every term
    let d = crown(3).unwrap();
    let plugs: Vec<_> = d.outputs().iter().map(|&o| (o, true)).collect();
    let (p, _) = plug_basis_raw(&d, &plugs).unwrap();
    assert!(eval_scalar(&p).unwrap().is_zero());
}

#[test]
fn lambda_values() {
    assert_eq!(lambda_n(1), RadicalNumber::one());
    assert_eq!(lambda_n(2), r("1/2*sqrt(2)"));
    assert_eq!(lambda_n(3), r("1/6*sqrt(2)"));
    assert_eq!(lambda_n(4), r("1/48"));
    assert_eq!(lambda_n(5), r("1/7680"));
}

#[test]
fn lambda_from_projector_condition() {
    for n in 1..=4 {
        let raw = exact_matrix(&symmetriser_raw(n));
        // rank n+1 projector ⇒ λ = (n+1)/tr(raw)
        let lam = ExactScalar::from_int(n as i64 + 1).checked_div(&raw.trace()).unwrap();
        assert_eq!(lam, lambda_scalar(n), "n={n}");
        let s = raw.scale(&lam);
        assert_eq!(s.matmul(&s), s);
    }
}

#[test]
fn symmetriser_laws() {
    for n in 1..=4 {
        let s = exact_matrix(&symmetriser(n));
        assert_eq!(s.matmul(&s), s, "idempotent n={n}");
        assert_eq!(s.transpose(), s, "symmetric n={n}");
        assert_eq!(s.trace(), ExactScalar::from_int(n as i64 + 1));
        for p in permutations(n) {
            assert_eq!(s.matmul(&permutation_matrix(&p)), s, "n={n} σ={p:?}");
        }
    }
}

#[test]
fn symmetriser_two_is_printed_projector() {
    let s = exact_matrix(&symmetriser(2));
    let half = ExactScalar::ratio(1, 2);
    let one = ExactScalar::one();
    let z = ExactScalar::zero();
    let want = Matrix::from_vec(
        4,
        4,
        vec![
            one.clone(), z.clone(), z.clone(), z.clone(),
            z.clone(), half.clone(), half.clone(), z.clone(),
            z.clone(), half.clone(), half, z.clone(),
            z.clone(), z.clone(), z, one,
        ],
    );
    assert_eq!(s, want);
}

#[test]
fn links() {
    let half = exact_matrix(&yutsis_link(HalfInteger::HALF));
    let z = ExactScalar::zero();
    let one = ExactScalar::one();
    assert_eq!(half, Matrix::from_vec(2, 2, vec![one.clone(), z.clone(), z.clone(), -one.clone()]));
    // |00⟩⟨00| + |11⟩⟨11| − ½(|01⟩+|10⟩)(⟨01|+⟨10|)
    let m = exact_matrix(&yutsis_link(HalfInteger::ONE));
    let mh = ExactScalar::ratio(-1, 2);
    let want = Matrix::from_vec(
        4,
        4,
        vec![
            one.clone(), z.clone(), z.clone(), z.clone(),
            z.clone(), mh.clone(), mh.clone(), z.clone(),
            z.clone(), mh.clone(), mh, z.clone(),
            z.clone(), z.clone(), z, one,
        ],
    );
    assert_eq!(m, want);
}

#[test]
fn connector_fuses_links() {
    for j in ["1/2", "1", "3/2"] {
        let j = h(j);
        let link = yutsis_link(j);
        let long = link.compose_seq(&connector(j)).unwrap().compose_seq(&link).unwrap();
        assert_eq!(exact_matrix(&long), exact_matrix(&link), "j={j}");
    }
}

#[test]
fn loop_closures() {
    for (j, want) in [("0", 1), ("1/2", 2), ("1", 3), ("3/2", 4)] {
        let (d, c) = loop_network(h(j));
        let v = c.apply(&eval_scalar(&d).unwrap()).unwrap();
        assert_eq!(v, RadicalNumber::from_int(want), "j={j}");
    }
}

#[test]
fn binor_norms() {
    assert_eq!(binor_n(h("1/2"), h("1/2"), h("1")).unwrap(), r("sqrt(3)"));
    assert_eq!(binor_n(h("1"), h("1"), h("1")).unwrap(), r("sqrt(3)"));
    assert_eq!(binor_n(h("2"), h("1"), h("1")).unwrap(), r("sqrt(5)"));
    assert_eq!(binor_n(h("1/2"), h("1/2"), h("0")).unwrap(), r("sqrt(2)"));
    assert!(binor_n(h("1/2"), h("1"), h("1")).is_err());
}

#[test]
fn correction_provenance() {
    let spec = VertexSpec::new([h("1/2"), h("1/2"), h("1")], [I, I, O]);
    let (_, c) = vertex_3jm(&spec).unwrap();
    assert_eq!(*c.value(), r("1/6*sqrt(6)"));
    assert_eq!(c.recompute(), *c.value());
    assert!(c.provenance().contains(&(CorrectionKind::Lambda(2), 1)));
    assert!(c.provenance().contains(&(CorrectionKind::InvN([h("1/2"), h("1/2"), h("1")]), 1)));
    let twice = c.mul(&c);
    assert_eq!(*twice.value(), &*c.value() * &*c.value());
    assert!(twice.provenance().contains(&(CorrectionKind::Lambda(2), 2)));
}

#[test]
fn vertices_match_oracle_exactly() {
    let orients = [[O, O, O], [I, I, O], [I, O, I], [O, I, I], [I, I, I], [O, O, I]];
    for js in triads(3) {
        for os in orients {
            for sign in [ReadingSign::Clockwise, ReadingSign::Anticlockwise] {
                let mut spec = VertexSpec::new(js, os);
                spec.sign = sign;
                let (d, c) = vertex_3jm(&spec).unwrap();
                let ours = project(&corrected(&d, &c), &js, &os);
                assert_eq!(ours, yutsis_matrix_3(&spec).unwrap(), "{spec} {sign:?}");
            }
        }
    }
}

#[test]
fn vertex_errors_name_the_condition() {
    let spec = VertexSpec::new([h("1/2"), h("1/2"), h("2")], [O, O, O]);
    match vertex_3jm(&spec) {
        Err(Su2Error::Triad(crate::oracle::OracleError::Triad { failure, .. })) => {
            assert_eq!(failure, crate::oracle::TriadFailure::AboveRange)
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn cups() {
    let s = r("1/2*sqrt(2)");
    let e = |xs: [i64; 4]| Matrix::from_fn(xs.len(), 1, |i, _| &RadicalNumber::from_int(xs[i]) * &s);
    let sq = |xs: [i64; 4]| Matrix::from_fn(2, 2, |i, j| &RadicalNumber::from_int(xs[2 * i + j]) * &s);
    let got = |o1, o2| {
        let (d, c) = cup(o1, o2);
        corrected(&d, &c)
    };
    let neg = |m: &Matrix<RadicalNumber>| m.map(|x| -x.clone());
    // one global sign relative to (1/√2)(|10⟩ − |01⟩) and friends
    let oo = e([0, -1, 1, 0]);
    assert_eq!(got(O, O), neg(&oo));
    assert_eq!(got(I, I), neg(&e([0, 1, -1, 0]).transpose()));
    let io = sq([1, 0, 0, -1]);
    assert_eq!(got(I, O), neg(&io));
    assert_eq!(got(O, I), io);
}

#[test]
fn cup_pairing_choice_is_irrelevant() {
    // reversing every bundle's wire order leaves each vertex tensor unchanged
    for js in triads(4) {
        let spec = VertexSpec::new(js, [O, O, O]);
        let (d, _) = vertex_3jm(&spec).unwrap();
        let m = exact_matrix(&d);
        let mut rev = d.clone();
        let mut perm = Vec::new();
        let mut base = 0;
        for j in js {
            let n = j.twice() as usize;
            perm.extend((0..n).rev().map(|k| base + k));
            base += n;
        }
        rev.permute_outputs(&perm).unwrap();
        assert_eq!(exact_matrix(&rev), m, "{js:?}");
    }
}

#[test]
fn example_1_and_2_matrices() {
    let j = h("1/2");
    let spec = VertexSpec::new([j, j, h("1")], [I, I, O]);
    let (d, c) = vertex_3jm(&spec).unwrap();
    let m = corrected(&d, &c);
    let printed = rmat(
        "1/6*sqrt(3)",
        &[&["-2", "0", "0", "0"], &["0", "1", "1", "0"], &["0", "1", "1", "0"], &["0", "0", "0", "-2"]],
    );
    assert_eq!(m, printed);
    let p = project(&m, &spec.spins, &spec.orientations);
    let want = rmat(
        "1",
        &[
            &["-1/3*sqrt(3)", "0", "0", "0"],
            &["0", "1/6*sqrt(6)", "1/6*sqrt(6)", "0"],
            &["0", "0", "0", "-1/3*sqrt(3)"],
        ],
    );
    assert_eq!(p, want);

    let one = h("1");
    let spec = VertexSpec::new([one; 3], [I, I, O]);
    let (d, c) = vertex_3jm(&spec).unwrap();
    let m = corrected(&d, &c);
    let printed_m = rmat(
        "1/6*sqrt(3)",
        &[
            &["0", "1", "1", "0", "-1", "0", "0", "0", "-1", "0", "0", "0", "0", "0", "0", "0"],
            &["0", "0", "0", "-1", "0", "0", "0", "0", "0", "0", "0", "0", "1", "0", "0", "0"],
            &["0", "0", "0", "-1", "0", "0", "0", "0", "0", "0", "0", "0", "1", "0", "0", "0"],
            &["0", "0", "0", "0", "0", "0", "0", "1", "0", "0", "0", "1", "0", "-1", "-1", "0"],
        ],
    );
    assert_eq!(m, printed_m);
    let s = "1/6*sqrt(6)";
    let ms = "-1/6*sqrt(6)";
    let want = rmat(
        "1",
        &[
            &["0", s, "0", ms, "0", "0", "0", "0", "0"],
            &["0", "0", ms, "0", "0", "0", s, "0", "0"],
            &["0", "0", "0", "0", "0", s, "0", ms, "0"],
        ],
    );
    assert_eq!(project(&m, &spec.spins, &spec.orientations), want);
}

#[test]
fn example_3_plugged_coefficient() {
    let j = h("1/2");
    let spec = VertexSpec::new([j, j, h("1")], [I, I, O]);
    let (d, c) = vertex_3jm(&spec).unwrap();
    let plugs: Vec<(VertexId, bool)> = d.boundaries().into_iter().map(|b| (b, true)).collect();
    let (p, n) = plug_basis_raw(&d, &plugs).unwrap();
    assert_eq!(n, 4);
    let raw = eval_scalar(&p).unwrap();
    assert_eq!(raw, -ExactScalar::sqrt2_pow(5));
    let c = c.with(CorrectionKind::PlugNorm, n as u32);
    assert_eq!(c.apply(&raw).unwrap(), r("-1/3*sqrt(3)"));
}

#[test]
fn example_4_matrices() {
    let j = h("1/2");
    let os = [I, I, O, O];
    let (d, c) = vertex_4jm([j; 4], h("1"), os).unwrap();
    let want = rmat(
        "1/6",
        &[&["2", "0", "0", "0"], &["0", "-1", "-1", "0"], &["0", "-1", "-1", "0"], &["0", "0", "0", "2"]],
    );
    assert_eq!(corrected(&d, &c), want);
    assert_eq!(*c.value(), r("1/6*sqrt(2)"));
    let (d, c) = vertex_4jm([j; 4], h("0"), os).unwrap();
    let want = rmat(
        "1/2",
        &[&["0", "0", "0", "0"], &["0", "-1", "1", "0"], &["0", "1", "-1", "0"], &["0", "0", "0", "0"]],
    );
    assert_eq!(corrected(&d, &c), want);
    assert_eq!(*c.value(), r("1/2"));
}

#[test]
fn four_jm_matches_oracle() {
    let os = [I, I, O, O];
    for (js, j) in [
        (["1/2", "1/2", "1/2", "1/2"], "1"),
        (["1/2", "1/2", "1/2", "1/2"], "0"),
        (["1", "1", "1/2", "1/2"], "1"),
        (["1", "1/2", "1", "1/2"], "1/2"),
        (["1", "1", "1", "1"], "2"),
    ] {
        let js = js.map(h);
        let j = h(j);
        let (d, c) = vertex_4jm(js, j, os).unwrap();
        let got = project(&corrected(&d, &c), &js, &os);
        assert_eq!(got, yutsis_matrix_4(js, j, os).unwrap(), "{js:?} {j}");
    }
    assert!(matches!(
        vertex_4jm([h("1/2"); 4], h("2"), os),
        Err(Su2Error::IntermediateRange { .. })
    ));
}

#[test]
fn example_5_matrix() {
    // rows 0-2 as printed; the printed last row has the opposite sign, which
    // breaks the m → −m symmetry the oracle obeys
    let (d, c) = vertex_4jm([h("1"), h("1"), h("1/2"), h("1/2")], h("1"), [I, I, O, O]).unwrap();
    let printed = rmat(
        "1/6",
        &[
            &["0", "-1", "-1", "0", "1", "0", "0", "0", "1", "0", "0", "0", "0", "0", "0", "0"],
            &["0", "0", "0", "1", "0", "0", "0", "0", "0", "0", "0", "0", "-1", "0", "0", "0"],
            &["0", "0", "0", "1", "0", "0", "0", "0", "0", "0", "0", "0", "-1", "0", "0", "0"],
            &["0", "0", "0", "0", "0", "0", "0", "1", "0", "0", "0", "1", "0", "-1", "-1", "0"],
        ],
    );
    let ours = corrected(&d, &c);
    for row in 0..4 {
        for col in 0..16 {
            let p = printed.get(row, col);
            let want = if row == 3 { -p.clone() } else { p.clone() };
            assert_eq!(*ours.get(row, col), want, "({row}, {col})");
        }
    }
    let js = [h("1"), h("1"), h("1/2"), h("1/2")];
    let os = [I, I, O, O];
    assert_eq!(project(&ours, &js, &os), yutsis_matrix_4(js, h("1"), os).unwrap());
}

/// Plugs `|01⟩ + |10⟩ = √2|1,0⟩` into two boundaries.
fn plug_m0_pair(d: &Diagram, a: VertexId, b: VertexId) -> Diagram {
    let mut out = d.clone();
    let na = out.neighbors(a)[0];
    let nb = out.neighbors(b)[0];
    out.remove_vertex(a).unwrap();
    out.remove_vertex(b).unwrap();
    let z = out.add_z(Phase::zero());
    let x = out.add_x(Phase::pi());
    out.add_edge(na, z);
    out.add_edge(z, x);
    out.add_edge(x, nb);
    out
}

#[test]
fn example_6_coefficient() {
    let js = [h("1"), h("1"), h("1/2"), h("1/2")];
    let (d, c) = vertex_4jm(js, h("1"), [I, I, O, O]).unwrap();
    let ins = d.inputs().to_vec();
    let outs = d.outputs().to_vec();
    // m = (−1, 0, ½, ½); ingoing legs carry −m, so leg 1 is |00⟩, leg 2 is
    // |1,0⟩ and legs 3 and 4 are |0⟩
    let half = plug_m0_pair(&d, ins[2], ins[3]);
    let (p, n) = plug_basis_raw(
        &half,
        &[(ins[0], false), (ins[1], false), (outs[0], false), (outs[1], false)],
    )
    .unwrap();
    let raw = eval_scalar(&p).unwrap();
    // magnitude as printed; the sign follows the oracle
    assert_eq!(raw, -ExactScalar::sqrt2_pow(7));
    let c = c.with(CorrectionKind::PlugNorm, n as u32 + 1);
    assert_eq!(*c.value(), r("1/48"));
    let v = c.apply(&raw).unwrap();
    let ms = ["-1", "0", "1/2", "1/2"].map(|s| s.parse().unwrap());
    assert_eq!(v, w4jm(js, ms, h("1")));
    assert!(v.abs_eq(&r("1/6*sqrt(2)")));
}

#[test]
fn example_7_six_j() {
    let js = ["2", "1", "1", "1", "1", "1"].map(h);
    let (d, c) = network_6j(js).unwrap();
    assert!(d.boundaries().is_empty());
    let raw = eval_scalar(&d).unwrap();
    assert_eq!(raw, ExactScalar::from_int(480) * ExactScalar::sqrt2());
    assert_eq!(c.apply(&raw).unwrap(), r("1/6"));
    assert_eq!(w6j(js), r("1/6"));
}

fn admissible6(s: [HalfInteger; 6]) -> bool {
    let [a, b, c, d, e, f] = s;
    [[a, b, c], [a, f, e], [b, f, d], [c, d, e]].iter().all(|t| Strands::new(*t).is_ok())
}

#[test]
fn six_j_networks_match_oracle() {
    let mut checked = 0;
    let spins: Vec<_> = (0..=2).map(HalfInteger::from_twice).collect();
    for idx in 0..3usize.pow(6) {
        let mut k = idx;
        let s: [HalfInteger; 6] = std::array::from_fn(|_| {
            let v = spins[k % 3];
            k /= 3;
            v
        });
        if !admissible6(s) {
            continue;
        }
        let (d, c) = network_6j(s).unwrap();
        assert_eq!(c.apply(&eval_scalar(&d).unwrap()).unwrap(), w6j(s), "{s:?}");
        checked += 1;
    }
    assert!(checked > 20, "{checked}");
    for extra in [["3/2", "1", "1/2", "1", "1/2", "1"], ["2", "1", "1", "0", "1", "1"], ["3/2", "3/2", "1", "1/2", "1/2", "1"]] {
        let s = extra.map(h);
        assert!(admissible6(s));
        let (d, c) = network_6j(s).unwrap();
        let v = c.apply(&eval_scalar(&d).unwrap()).unwrap();
        assert_eq!(v, w6j(s), "{s:?}");
    }
}

#[test]
fn six_j_errors_name_the_node() {
    let js = ["1/2", "1/2", "1", "1/2", "1/2", "1/2"].map(h);
    match network_6j(js) {
        Err(Su2Error::NodeTriad { node, .. }) => assert!(node < 4),
        other => panic!("{other:?}"),
    }
}

#[test]
fn theta_graphs() {
    for t in [["1/2", "1/2", "1"], ["1", "1", "1"], ["3/2", "1", "1/2"], ["1", "1/2", "1/2"], ["2", "1", "1"]] {
        let [a, b, c] = t.map(h);
        let (d, corr) = theta_network(a, b, c).unwrap();
        let v = corr.apply(&eval_scalar(&d).unwrap()).unwrap();
        assert_eq!(v, invariant_theta(a, b, c).unwrap(), "{t:?}");
    }
}

#[test]
fn single_node_network_is_the_vertex() {
    let spec = VertexSpec::new([h("1"), h("1/2"), h("1/2")], [O, I, O]);
    let (a, ca) = vertex_3jm(&spec).unwrap();
    let (b, cb) = assemble_network(&NetworkSpec::single(&spec)).unwrap();
    assert_eq!(exact_matrix(&a), exact_matrix(&b));
    assert_eq!(ca, cb);
}

#[test]
fn fused_gluing_equals_composition_through_connector() {
    for (js, j) in [(["1/2", "1/2", "1/2", "1/2"], "1"), (["1", "1", "1/2", "1/2"], "1"), (["1", "1/2", "1", "1/2"], "3/2")] {
        let js = js.map(h);
        let j = h(j);
        let (a, ca) = vertex_3jm(&VertexSpec::new([js[0], js[1], j], [I, I, O])).unwrap();
        let (b, cb) = vertex_3jm(&VertexSpec::new([j, js[2], js[3]], [I, O, O])).unwrap();
        let composed = a.compose_seq(&connector(j)).unwrap().compose_seq(&b).unwrap();
        let unfused = corrected(&composed, &ca.mul(&cb));
        let (f, cf) = vertex_4jm(js, j, [I, I, O, O]).unwrap();
        assert_eq!(unfused, corrected(&f, &cf), "{js:?} {j}");
    }
}

#[test]
fn network_spec_errors() {
    let e = |spin: &str, from: Option<(usize, usize)>, to: Option<(usize, usize)>| NetworkEdge {
        spin: h(spin),
        from: from.map(|(node, slot)| End { node, slot }),
        to: to.map(|(node, slot)| End { node, slot }),
    };
    let shared = NetworkSpec {
        nodes: vec![NodeSpec::default()],
        edges: vec![e("1", Some((0, 0)), None), e("1", None, Some((0, 0))), e("1", Some((0, 2)), None)],
    };
    assert!(matches!(assemble_network(&shared), Err(Su2Error::Arrow(_))));
    let floating = NetworkSpec { nodes: vec![], edges: vec![e("1", None, None)] };
    assert!(matches!(assemble_network(&floating), Err(Su2Error::Arrow(_))));
    let missing = NetworkSpec { nodes: vec![NodeSpec::default()], edges: vec![e("1", Some((0, 0)), None)] };
    assert!(matches!(assemble_network(&missing), Err(Su2Error::Arrow(_))));
    let json = serde_json::to_string(&shared).unwrap();
    let back: NetworkSpec = serde_json::from_str(&json).unwrap();
    assert_eq!(back, shared);
}

#[test]
fn fifteen_j_constructor_builds_a_closed_network() {
    let js = [h("1"); 15];
    let (d, c) = network_15j(js).unwrap();
    assert!(d.boundaries().is_empty());
    assert_eq!(c.provenance().len(), 2);
    d.validate().unwrap();
}

fn random_angles(seed: u64, n: usize) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau = std::f64::consts::TAU;
    (0..n).map(|_| (rng.gen_range(0.0..tau), rng.gen_range(0.0..tau), rng.gen_range(0.0..tau))).collect()
}

#[test]
fn su2_invariance_of_vertices() {
    for (js, os) in [(["1/2", "1/2", "1"], [I, I, O]), (["1", "1", "1"], [I, I, O]), (["1", "1/2", "1/2"], [O, O, O])] {
        let spec = VertexSpec::new(js.map(h), os);
        let (d, _) = vertex_3jm(&spec).unwrap();
        let rep = check_su2_invariance(&d, &random_angles(7, 20)).unwrap();
        assert!(rep.passes(1e-9), "{spec}: {}", rep.max_deviation);
        let id = check_su2_invariance(&d, &[(0.0, 0.0, 0.0)]).unwrap();
        assert_eq!(id.max_deviation, 0.0);
    }
    // a non-invariant tensor is caught
    let rep = check_su2_invariance(&crate::graph::gadgets::cnot(), &random_angles(3, 5)).unwrap();
    assert!(!rep.passes(1e-3));
}

#[test]
fn symmetrisers_commute_with_rotations() {
    for n in 1..=4 {
        let rep = check_symmetriser_commutation(n, &random_angles(11 + n as u64, 20)).unwrap();
        assert!(rep.passes(1e-9), "n={n}: {}", rep.max_deviation);
    }
}

#[test]
fn euler_unitary_is_special_unitary() {
    for (a, b, g) in random_angles(5, 10) {
        let u = euler_unitary(a, b, g);
        let d = u.get(0, 0) * u.get(1, 1) - u.get(0, 1) * u.get(1, 0);
        assert!((d - num_complex::Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }
}

#[test]
fn float_and_exact_agree_on_a_network() {
    let (d, _) = network_6j(["1", "1", "1", "1", "1", "1"].map(h)).unwrap();
    let e = eval_scalar(&d).unwrap().to_complex();
    let f = eval_float(&d).unwrap().scalar_complex().unwrap();
    assert!((e - f).norm() < 1e-9);
}

proptest! {
    #[test]
    fn strand_counts_solve_the_bundle_equations(a in 0u32..8, b in 0u32..8, c in 0u32..8) {
        let js = [a, b, c].map(HalfInteger::from_twice);
        match Strands::new(js) {
            Ok(s) => {
                prop_assert_eq!(s.n12 + s.n13, a);
                prop_assert_eq!(s.n12 + s.n23, b);
                prop_assert_eq!(s.n13 + s.n23, c);
            }
            Err(_) => {
                let ok = (a + b + c) % 2 == 0 && c <= a + b && a <= b + c && b <= a + c;
                prop_assert!(!ok);
            }
        }
    }

    #[test]
    fn lambda_matches_trace_normalisation(n in 1usize..5) {
        let raw = exact_matrix(&symmetriser_raw(n));
        prop_assert_eq!(&raw.trace() * &lambda_scalar(n), ExactScalar::from_int(n as i64 + 1));
    }
}

fn plugged_value(d: &Diagram, legs: &[(HalfInteger, Orientation, MagneticIndex)], c: &CorrectionFactor) -> RadicalNumber {
    let (p, pc) = plug_spin_states(d, legs).unwrap();
    c.mul(&pc).apply(&eval_scalar(&p).unwrap()).unwrap()
}

#[test]
fn example_3_through_spin_plugs() {
    let j = h("1/2");
    let spec = VertexSpec::new([j, j, h("1")], [I, I, O]);
    let (d, c) = vertex_3jm(&spec).unwrap();
    // every wire |1⟩: ingoing halves carry m = +1/2, the outgoing leg m = −1
    let ms = ["1/2", "1/2", "-1"].map(|s| s.parse::<MagneticIndex>().unwrap());
    let legs: Vec<_> = (0..3).map(|k| (spec.spins[k], spec.orientations[k], ms[k])).collect();
    assert_eq!(plugged_value(&d, &legs, &c), r("-1/3*sqrt(3)"));
}

#[test]
fn example_6_through_spin_plugs() {
    let js = [h("1"), h("1"), h("1/2"), h("1/2")];
    let os = [I, I, O, O];
    let (d, c) = vertex_4jm(js, h("1"), os).unwrap();
    let ms = ["-1", "0", "1/2", "1/2"].map(|s| s.parse::<MagneticIndex>().unwrap());
    let legs: Vec<_> = (0..4).map(|k| (js[k], os[k], ms[k])).collect();
    let (_, pc) = plug_spin_states(&d, &legs).unwrap();
    assert!(pc.provenance().contains(&(CorrectionKind::PlugNorm, 5)));
    assert_eq!(plugged_value(&d, &legs, &c), w4jm(js, ms, h("1")));
}

#[test]
fn spin_plugs_reproduce_every_vertex_entry() {
    for js in triads(4) {
        for os in [[O, O, O], [I, I, O], [I, O, I]] {
            let spec = VertexSpec::new(js, os);
            let (d, c) = vertex_3jm(&spec).unwrap();
            let oracle = YutsisTensor::vertex(&spec).unwrap();
            let shape: Vec<_> = (0..3).map(|k| (js[k], os[k])).collect();
            let projected = project_to_spins(&corrected_matrix(&d, &c).unwrap(), &shape);
            assert_eq!(projected, yutsis_matrix_3(&spec).unwrap());
            for m1 in js[0].ms() {
                for m2 in js[1].ms() {
                    for m3 in js[2].ms() {
                        let ms = [m1, m2, m3];
                        let legs: Vec<_> = (0..3).map(|k| (js[k], os[k], ms[k])).collect();
                        // oracle position: j − label, with label −m on ingoing legs
                        let pos: Vec<usize> = (0..3)
                            .map(|k| {
                                let l = if os[k] == I { ms[k].neg() } else { ms[k] };
                                ((js[k].twice() as i32 - l.twice()) / 2) as usize
                            })
                            .collect();
                        assert_eq!(plugged_value(&d, &legs, &c), *oracle.at(&pos), "{spec} {ms:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn spin_plugs_check_their_legs() {
    let spec = VertexSpec::new([h("1/2"), h("1/2"), h("1")], [I, I, O]);
    let (d, _) = vertex_3jm(&spec).unwrap();
    let half: MagneticIndex = "1/2".parse().unwrap();
    let short = [(h("1/2"), I, half), (h("1/2"), I, half)];
    assert!(matches!(plug_spin_states(&d, &short), Err(Su2Error::Legs(_))));
    let bad = [(h("1/2"), I, half), (h("1/2"), I, half), (h("1"), O, half)];
    assert!(matches!(plug_spin_states(&d, &bad), Err(Su2Error::Triad(_))));
}
