//! `verify`: cases from a JSON manifest, each built, evaluated, corrected and
//! compared with an expected value or the oracle.

use std::fs;
use std::path::Path;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use spinnet::exact::{ExactScalar, HalfInteger, MagneticIndex, Matrix, RadicalNumber};
use spinnet::graph::Diagram;
use spinnet::oracle::properties::{
    admissible_sextuples, six_j_tetrahedral, three_j_orthogonality, three_j_symmetries,
};
use spinnet::oracle::{
    invariant_loop, invariant_theta, w6j, yutsis_matrix_3, yutsis_matrix_4, Orientation, ReadingSign, VertexSpec,
};
use spinnet::rewrite::{check_rule_soundness, derivation_ruleset, simplify_with, RewriteRule, RuleKind, SimplifyOptions};
use spinnet::su2::{
    check_su2_invariance, check_symmetriser_commutation, corrected_matrix, lambda_n, plug_spin_states,
    project_to_spins, symmetriser_raw, CorrectionFactor,
};
use spinnet::tensor::{self, Mode};

use crate::commands::{evaluate, simplified};
use crate::objects::{parse_orient, Legs, Object};
use crate::Failure;

#[derive(Debug, Clone, Deserialize)]
pub struct Manifest {
    pub cases: Vec<Case>,
}

/// How a computed value is compared with the expected one.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Policy {
    #[default]
    Exact,
    UpToGlobalSign,
    /// Relative tolerance, absolute below magnitude 1.
    Float(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseMode {
    #[default]
    Exact,
    Float,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Case {
    pub id: String,
    /// Where the expected value comes from: a worked example or "oracle".
    pub source: String,
    #[serde(default)]
    pub policy: Policy,
    #[serde(default)]
    pub mode: CaseMode,
    /// Simplify with the default rules before evaluating.
    #[serde(default)]
    pub simplify: bool,
    /// Expected value of the diagram before corrections.
    #[serde(default)]
    pub raw: Option<RadicalNumber>,
    /// A radical, a matrix `{scale, rows}`, or "oracle".
    #[serde(default)]
    pub expected: Value,
    #[serde(flatten)]
    pub check: Check,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind")]
pub enum Check {
    #[serde(rename = "3jm")]
    Vertex3 {
        spins: [HalfInteger; 3],
        #[serde(default = "ooo")]
        orient: String,
        #[serde(default)]
        anticlockwise: bool,
        #[serde(default)]
        ms: Option<Vec<MagneticIndex>>,
    },
    #[serde(rename = "4jm")]
    Vertex4 {
        spins: [HalfInteger; 4],
        j: HalfInteger,
        #[serde(default = "iioo")]
        orient: String,
        #[serde(default)]
        ms: Option<Vec<MagneticIndex>>,
    },
    #[serde(rename = "6j")]
    SixJ { spins: [HalfInteger; 6] },
    #[serde(rename = "invariant")]
    Invariant { invariant: InvariantKind, spins: Vec<HalfInteger> },
    /// The corrected matrix of any object, optionally in spin bases.
    #[serde(rename = "matrix")]
    Matrix {
        build: Object,
        #[serde(default)]
        project: bool,
    },
    /// `λ_n` from its closed form and from the projector condition, plus
    /// the projector laws.
    #[serde(rename = "symmetriser")]
    Symmetriser { n: usize },
    #[serde(rename = "su2-invariance")]
    Su2Invariance {
        #[serde(default)]
        build: Option<Object>,
        /// Commutation of the `n`-wire symmetriser with rotations instead.
        #[serde(default)]
        symmetriser: Option<usize>,
        trials: usize,
        seed: u64,
    },
    #[serde(rename = "rewrite")]
    Rewrite {
        /// Every shipped rule when absent.
        #[serde(default)]
        rules: Option<Vec<RuleKind>>,
        trials: usize,
        seed: u64,
    },
    /// Simplifying the CSWAP gadget with a plugged control.
    #[serde(rename = "cswap")]
    Cswap { control: bool },
    #[serde(rename = "oracle-properties")]
    OracleProperties { max_twice: u32 },
}

fn ooo() -> String {
    "ooo".into()
}

fn iioo() -> String {
    "iioo".into()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InvariantKind {
    Loop,
    Theta,
}

impl Check {
    pub fn kind(&self) -> &'static str {
        match self {
            Check::Vertex3 { .. } => "3jm",
            Check::Vertex4 { .. } => "4jm",
            Check::SixJ { .. } => "6j",
            Check::Invariant { .. } => "invariant",
            Check::Matrix { .. } => "matrix",
            Check::Symmetriser { .. } => "symmetriser",
            Check::Su2Invariance { .. } => "su2-invariance",
            Check::Rewrite { .. } => "rewrite",
            Check::Cswap { .. } => "cswap",
            Check::OracleProperties { .. } => "oracle-properties",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Pass(String),
    Fail(String),
    /// Could not run within the rank cap.
    Resource(String),
}

/// A computed number: exact when evaluated exactly.
#[derive(Debug, Clone)]
enum Num {
    Exact(RadicalNumber),
    Float(f64),
}

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Num::Exact(r) => write!(f, "{r}"),
            Num::Float(x) => write!(f, "{x}"),
        }
    }
}

impl Num {
    fn to_f64(&self) -> f64 {
        match self {
            Num::Exact(r) => r.to_f64(),
            Num::Float(x) => *x,
        }
    }

    fn scale(&self, c: &RadicalNumber) -> Num {
        match self {
            Num::Exact(r) => Num::Exact(r * c),
            Num::Float(x) => Num::Float(x * c.to_f64()),
        }
    }
}

/// Why `got` does not match `want` under `policy`, if it does not.
fn mismatch(policy: Policy, got: &Num, want: &RadicalNumber) -> Option<String> {
    let ok = match (policy, got) {
        (Policy::Float(tol), g) => (g.to_f64() - want.to_f64()).abs() <= tol * want.to_f64().abs().max(1.0),
        (Policy::Exact, Num::Exact(g)) => g == want,
        (Policy::UpToGlobalSign, Num::Exact(g)) => g == want || *g == -want.clone(),
        (_, Num::Float(_)) => return Some("float result under an exact policy".into()),
    };
    if ok {
        None
    } else {
        let dev = (got.to_f64() - want.to_f64()).abs();
        Some(format!("expected {want}, got {got}, deviation {dev:.3e}"))
    }
}

fn matrix_mismatch(policy: Policy, got: &Matrix<RadicalNumber>, want: &Matrix<RadicalNumber>) -> Option<String> {
    if (got.rows(), got.cols()) != (want.rows(), want.cols()) {
        return Some(format!(
            "expected a {}x{} matrix, got {}x{}",
            want.rows(),
            want.cols(),
            got.rows(),
            got.cols()
        ));
    }
    let ok = match policy {
        Policy::Exact => got == want,
        Policy::UpToGlobalSign => got == want || *got == want.map(|x| -x.clone()),
        Policy::Float(tol) => got.data().iter().zip(want.data()).all(|(a, b)| (a.to_f64() - b.to_f64()).abs() <= tol),
    };
    if ok {
        return None;
    }
    let (k, (a, b)) = got
        .data()
        .iter()
        .zip(want.data())
        .enumerate()
        .find(|(_, (a, b))| a != b)
        .expect("some entry differs");
    Some(format!("entry ({}, {}): expected {b}, got {a}", k / want.cols(), k % want.cols()))
}

fn radical(v: &Value) -> Result<RadicalNumber, String> {
    match v {
        Value::String(s) => s.parse().map_err(|e| format!("expected value: {e}")),
        Value::Number(n) => n.to_string().parse().map_err(|e| format!("expected value: {e}")),
        _ => Err(format!("expected value must be a radical string, got {v}")),
    }
}

fn is_oracle(v: &Value) -> bool {
    v.as_str() == Some("oracle")
}

/// `{ "scale": "1/6*sqrt(3)", "rows": [["-2", "0"], ...] }`.
fn expected_matrix(v: &Value) -> Result<Matrix<RadicalNumber>, String> {
    let scale = match v.get("scale") {
        Some(s) => radical(s)?,
        None => RadicalNumber::one(),
    };
    let rows = v.get("rows").and_then(Value::as_array).ok_or("expected matrix needs rows")?;
    let parsed: Vec<Vec<RadicalNumber>> = rows
        .iter()
        .map(|r| r.as_array().ok_or("rows must be arrays".to_string())?.iter().map(radical).collect())
        .collect::<Result<_, String>>()?;
    let cols = parsed.first().map_or(0, Vec::len);
    if parsed.iter().any(|r| r.len() != cols) {
        return Err("ragged expected matrix".into());
    }
    Ok(Matrix::from_fn(parsed.len(), cols, |i, k| &parsed[i][k] * &scale))
}

/// Row and column of a spin-basis matrix for the given magnetic indices.
fn entry_of(legs: &Legs, ms: &[MagneticIndex]) -> (usize, usize) {
    let (mut row, mut col) = (0, 0);
    for (&(j, o), &m) in legs.iter().zip(ms) {
        let label = if o == Orientation::Ingoing { m.neg() } else { m };
        let idx = ((j.twice() as i32 - label.twice()) / 2) as usize;
        let acc = if o == Orientation::Ingoing { &mut col } else { &mut row };
        *acc = *acc * j.dim() as usize + idx;
    }
    (row, col)
}

fn fail<T>(msg: impl Into<String>) -> Result<T, Outcome> {
    Err(Outcome::Fail(msg.into()))
}

fn lift(f: Failure) -> Outcome {
    if f.code == 3 {
        Outcome::Resource(f.msg)
    } else {
        Outcome::Fail(f.msg)
    }
}

fn mode(c: &Case) -> Mode {
    match c.mode {
        CaseMode::Exact => Mode::Exact,
        CaseMode::Float => Mode::Float,
    }
}

fn scalar_value(case: &Case, d: &Diagram) -> Result<Num, Outcome> {
    let d = if case.simplify { simplified(d) } else { d.clone() };
    let ev = evaluate(&d, mode(case), None).map_err(lift)?;
    let t = &ev.tensor;
    if t.rank() != 0 {
        return fail(format!("expected a closed diagram, {} wires are open", t.rank()));
    }
    Ok(match t.scalar_exact() {
        Some(v) => Num::Exact(v.to_radical().ok_or_else(|| Outcome::Fail(format!("value {} is not real", v.pretty())))?),
        None => Num::Float(t.scalar_complex().expect("rank 0").re),
    })
}

/// Raw and corrected value of a closed diagram, checked against `raw` and
/// `want`.
fn check_value(case: &Case, d: &Diagram, c: &CorrectionFactor, want: RadicalNumber) -> Result<String, Outcome> {
    let raw = scalar_value(case, d)?;
    if let Some(r) = &case.raw {
        if let Some(m) = mismatch(case.policy, &raw, r) {
            return fail(format!("raw value: {m}"));
        }
    }
    let got = raw.scale(c.value());
    match mismatch(case.policy, &got, &want) {
        Some(m) => fail(m),
        None => Ok(format!("raw {raw}, corrected {got}")),
    }
}

fn want_value(case: &Case, oracle: impl FnOnce() -> Result<RadicalNumber, String>) -> Result<RadicalNumber, Outcome> {
    if is_oracle(&case.expected) {
        oracle().map_err(Outcome::Fail)
    } else {
        radical(&case.expected).map_err(Outcome::Fail)
    }
}

/// Vertex cases: one plugged coefficient when `ms` is given, else the whole
/// spin-basis matrix.
fn check_vertex(
    case: &Case,
    obj: &Object,
    ms: &Option<Vec<MagneticIndex>>,
    oracle: impl Fn() -> Result<Matrix<RadicalNumber>, String>,
) -> Result<String, Outcome> {
    let b = obj.build().map_err(lift)?;
    let legs = b.sidecar.legs.clone().expect("vertices have legs");
    match ms {
        Some(ms) => {
            if ms.len() != legs.len() {
                return fail(format!("needs {} magnetic indices", legs.len()));
            }
            let spec: Vec<_> = legs.iter().zip(ms).map(|(&(j, o), &m)| (j, o, m)).collect();
            let (p, pc) = plug_spin_states(&b.diagram, &spec).map_err(|e| Outcome::Fail(e.to_string()))?;
            let want = want_value(case, || {
                let (r, c) = entry_of(&legs, ms);
                Ok(oracle()?.get(r, c).clone())
            })?;
            check_value(case, &p, &b.sidecar.correction.mul(&pc), want)
        }
        None => {
            if !is_oracle(&case.expected) {
                return fail("vertex cases without ms compare with the oracle matrix");
            }
            let m = corrected_matrix(&b.diagram, &b.sidecar.correction).map_err(|e| Outcome::Fail(e.to_string()))?;
            let got = project_to_spins(&m, &legs);
            match matrix_mismatch(case.policy, &got, &oracle().map_err(Outcome::Fail)?) {
                Some(e) => fail(e),
                None => Ok(format!("{}x{} spin-basis matrix", got.rows(), got.cols())),
            }
        }
    }
}

fn oracle_for(obj: &Object) -> Result<Matrix<RadicalNumber>, String> {
    match obj {
        Object::Vertex3 { spins, orient, anticlockwise } => {
            let mut spec = VertexSpec::new(*spins, parse_orient(orient).map_err(|f| f.msg)?);
            if *anticlockwise {
                spec.sign = ReadingSign::Anticlockwise;
            }
            yutsis_matrix_3(&spec).map_err(|e| e.to_string())
        }
        Object::Vertex4 { spins, j, orient } => {
            yutsis_matrix_4(*spins, *j, parse_orient(orient).map_err(|f| f.msg)?).map_err(|e| e.to_string())
        }
        _ => Err("the oracle only covers 3jm and 4jm vertices".into()),
    }
}

fn check_matrix(case: &Case, obj: &Object, project: bool) -> Result<String, Outcome> {
    let b = obj.build().map_err(lift)?;
    let mut got = corrected_matrix(&b.diagram, &b.sidecar.correction).map_err(|e| Outcome::Fail(e.to_string()))?;
    if project {
        let legs = b.sidecar.legs.as_ref().ok_or_else(|| Outcome::Fail("object has no spin legs".into()))?;
        got = project_to_spins(&got, legs);
    }
    let want = if is_oracle(&case.expected) {
        oracle_for(obj)
    } else {
        expected_matrix(&case.expected)
    }
    .map_err(Outcome::Fail)?;
    match matrix_mismatch(case.policy, &got, &want) {
        Some(e) => fail(e),
        None => Ok(format!("{}x{} matrix", got.rows(), got.cols())),
    }
}

fn permutation_matrix(perm: &[usize]) -> Matrix<ExactScalar> {
    let n = perm.len();
    let dim = 1 << n;
    let mut m = Matrix::from_fn(dim, dim, |_, _| ExactScalar::zero());
    for x in 0..dim {
        // wire k of the input moves to wire perm[k]; wire 0 is the high bit
        let mut y = 0;
        for (k, &p) in perm.iter().enumerate() {
            if x >> (n - 1 - k) & 1 == 1 {
                y |= 1 << (n - 1 - p);
            }
        }
        m.set(y, x, ExactScalar::one());
    }
    m
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn check_symmetriser_exact(n: usize, want: &RadicalNumber) -> Result<String, Outcome> {
    let m = tensor::to_matrix(&tensor::eval_exact(&symmetriser_raw(n)).map_err(|e| lift(e.into()))?)
        .expect("exact tensor");
    let sq = m.matmul(&m);
    // M² = c·M fixes the normalisation λ = 1/c
    let k = m.data().iter().position(|x| !x.is_zero()).ok_or_else(|| Outcome::Fail("zero diagram".into()))?;
    let c = sq.data()[k].checked_div(&m.data()[k]).expect("nonzero");
    if sq != m.scale(&c) {
        return fail("raw symmetriser squared is not proportional to itself");
    }
    let lam = c.inverse().map_err(|e| Outcome::Fail(e.to_string()))?;
    let lam_r = lam.to_radical().ok_or_else(|| Outcome::Fail(format!("λ = {} is not real", lam.pretty())))?;
    if lam_r != *want {
        return fail(format!("projector condition gives λ = {lam_r}, expected {want}"));
    }
    let s = m.scale(&lam);
    if s.matmul(&s) != s || s.transpose() != s {
        return fail("S is not an orthogonal projector");
    }
    let tr = (0..s.rows()).fold(ExactScalar::zero(), |acc, i| &acc + s.get(i, i));
    if tr != ExactScalar::from_int(n as i64 + 1) {
        return fail(format!("trace {} instead of {}", tr.pretty(), n + 1));
    }
    let perms = if n <= 4 { permutations(n) } else { Vec::new() };
    for p in &perms {
        if s.matmul(&permutation_matrix(p)) != s {
            return fail(format!("S·U_σ ≠ S for σ = {p:?}"));
        }
    }
    Ok(format!("lambda {lam_r} from both routes; projector, symmetric, trace {}, {} permutations", n + 1, perms.len()))
}

fn check_symmetriser_float(n: usize, want: &RadicalNumber, tol: f64) -> Result<String, Outcome> {
    let m = tensor::to_matrix_float(&tensor::eval_float(&symmetriser_raw(n)).map_err(|e| lift(e.into()))?);
    let sq = m.matmul(&m);
    let k = m.data().iter().position(|x| x.norm() > 1e-9).ok_or_else(|| Outcome::Fail("zero diagram".into()))?;
    let c = sq.data()[k] / m.data()[k];
    let lam = 1.0 / c;
    if (lam - want.to_f64()).norm() > tol * want.to_f64() {
        return fail(format!("projector condition gives λ = {lam}, expected {want}"));
    }
    let s = m.scale(&lam);
    let s2 = s.matmul(&s);
    let dev = s2.data().iter().zip(s.data()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let asym = (0..s.rows())
        .flat_map(|i| (0..s.cols()).map(move |j| (i, j)))
        .map(|(i, j)| (s.get(i, j) - s.get(j, i)).norm())
        .fold(0.0, f64::max);
    let tr: f64 = (0..s.rows()).map(|i| s.get(i, i).re).sum();
    if dev > 1e-9 || asym > 1e-9 || (tr - (n as f64 + 1.0)).abs() > 1e-9 {
        return fail(format!("projector deviation {dev:.2e}, asymmetry {asym:.2e}, trace {tr}"));
    }
    Ok(format!("lambda {lam} from the projector condition; projector deviation {dev:.2e}"))
}

fn random_angles(seed: u64, n: usize) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tau = std::f64::consts::TAU;
    (0..n).map(|_| (rng.gen_range(0.0..tau), rng.gen_range(0.0..tau / 2.0), rng.gen_range(0.0..tau))).collect()
}

fn run_check(case: &Case) -> Result<String, Outcome> {
    match &case.check {
        Check::Vertex3 { spins, orient, anticlockwise, ms } => {
            let obj = Object::Vertex3 { spins: *spins, orient: orient.clone(), anticlockwise: *anticlockwise };
            check_vertex(case, &obj, ms, || oracle_for(&obj))
        }
        Check::Vertex4 { spins, j, orient, ms } => {
            let obj = Object::Vertex4 { spins: *spins, j: *j, orient: orient.clone() };
            check_vertex(case, &obj, ms, || oracle_for(&obj))
        }
        Check::SixJ { spins } => {
            let b = Object::SixJ { spins: *spins }.build().map_err(lift)?;
            let want = want_value(case, || Ok(w6j(*spins)))?;
            check_value(case, &b.diagram, &b.sidecar.correction, want)
        }
        Check::Invariant { invariant, spins } => {
            let obj = match (invariant, spins.as_slice()) {
                (InvariantKind::Loop, [j]) => Object::Loop { j: *j },
                (InvariantKind::Theta, [a, b, c]) => Object::Theta { spins: [*a, *b, *c] },
                _ => return fail("loop takes one spin, theta three"),
            };
            let b = obj.build().map_err(lift)?;
            let want = want_value(case, || {
                match spins.as_slice() {
                    [j] => invariant_loop(*j),
                    s => invariant_theta(s[0], s[1], s[2]),
                }
                .map_err(|e| e.to_string())
            })?;
            check_value(case, &b.diagram, &b.sidecar.correction, want)
        }
        Check::Matrix { build, project } => check_matrix(case, build, *project),
        Check::Symmetriser { n } => {
            let want = radical(&case.expected).map_err(Outcome::Fail)?;
            let formula = lambda_n(*n);
            if formula != want {
                return fail(format!("closed form gives λ = {formula}, expected {want}"));
            }
            match (case.mode, case.policy) {
                (CaseMode::Float, Policy::Float(tol)) => check_symmetriser_float(*n, &want, tol),
                (CaseMode::Float, _) => fail("float symmetriser cases need a float policy"),
                (CaseMode::Exact, _) => check_symmetriser_exact(*n, &want),
            }
        }
        Check::Su2Invariance { build, symmetriser, trials, seed } => {
            let Policy::Float(tol) = case.policy else {
                return fail("su2-invariance cases need a float policy");
            };
            let angles = random_angles(*seed, *trials);
            let report = match (build, symmetriser) {
                (Some(obj), None) => {
                    let b = obj.build().map_err(lift)?;
                    check_su2_invariance(&b.diagram, &angles)
                }
                (None, Some(n)) => check_symmetriser_commutation(*n, &angles),
                _ => return fail("give exactly one of build and symmetriser"),
            }
            .map_err(|e| lift(e.into()))?;
            if report.passes(tol) {
                Ok(format!("{} rotations, max deviation {:.2e}", report.trials, report.max_deviation))
            } else {
                fail(format!("max deviation {:.2e} over {} rotations", report.max_deviation, report.trials))
            }
        }
        Check::Rewrite { rules, trials, seed } => {
            let kinds = rules.clone().unwrap_or_else(|| RuleKind::SHIPPED.to_vec());
            let reports: Vec<_> =
                kinds.iter().map(|k| check_rule_soundness(&RewriteRule::new(*k), *trials, *seed)).collect();
            let bad: Vec<String> = reports
                .iter()
                .filter(|r| !r.passes())
                .map(|r| format!("{}: {} of {} trials failed", r.rule, r.failures.len(), r.trials))
                .collect();
            if bad.is_empty() {
                Ok(format!("{} rules x {trials} trials, 0 failures", kinds.len()))
            } else {
                fail(bad.join("; "))
            }
        }
        Check::Cswap { control } => check_cswap(case, *control),
        Check::OracleProperties { max_twice } => {
            let reps = [
                three_j_symmetries(*max_twice),
                three_j_orthogonality(*max_twice),
                six_j_tetrahedral(&admissible_sextuples(*max_twice)),
            ];
            let bad: Vec<String> =
                reps.iter().filter(|r| !r.passes()).map(|r| format!("{}: {:?}", r.name, r.failures)).collect();
            if bad.is_empty() {
                let n: usize = reps.iter().map(|r| r.checked).sum();
                Ok(format!("{n} identities"))
            } else {
                fail(bad.join("; "))
            }
        }
    }
}

fn check_cswap(case: &Case, control: bool) -> Result<String, Outcome> {
    let g = spinnet::su2::cswap_gadget();
    let d = tensor::plug_basis(&g, &[(g.inputs()[0], control)]).map_err(|e| Outcome::Fail(e.to_string()))?;
    let opts = SimplifyOptions { lookahead: 4, ..Default::default() };
    let (s, trace) = simplify_with(&d, &derivation_ruleset(), &opts);
    if s.num_internal() != 0 {
        return fail(format!("{} vertices left after simplification", s.num_internal()));
    }
    let (i, o) = (s.inputs(), s.outputs());
    let wired = |a: usize, b: usize| s.edges_between(i[a], o[b]).len() == 1;
    let shape_ok = if control { wired(0, 1) && wired(1, 0) } else { wired(0, 0) && wired(1, 1) };
    if !shape_ok {
        return fail(if control { "not a swap" } else { "not two identity wires" });
    }
    let want = radical(&case.expected).map_err(Outcome::Fail)?;
    let got = s.scalar().to_radical().ok_or_else(|| Outcome::Fail("complex scalar".into()))?;
    if let Some(m) = mismatch(case.policy, &Num::Exact(got), &want) {
        return fail(format!("scalar: {m}"));
    }
    if trace.replay(&d).map(|r| r.structural_hash()) != Ok(s.structural_hash()) {
        return fail("trace does not replay");
    }
    Ok(format!("{} rewrite steps", trace.steps.len()))
}

pub fn run_case(case: &Case) -> Outcome {
    match run_check(case) {
        Ok(detail) => Outcome::Pass(detail),
        Err(o) => o,
    }
}

pub fn verify(path: &Path, only: Option<&str>) -> Result<(), Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let manifest: Manifest = serde_json::from_str(&text).map_err(|e| Failure::io(path, e))?;
    let cases: Vec<&Case> = manifest
        .cases
        .iter()
        .filter(|c| only.is_none_or(|o| c.id == o || c.check.kind() == o))
        .collect();
    if cases.is_empty() {
        return Err(Failure::usage(format!("no cases match {:?}", only.unwrap_or(""))));
    }
    let outcomes: Vec<Outcome> = cases.par_iter().map(|c| run_case(c)).collect();
    let (mut failed, mut resource) = (0, 0);
    for (c, o) in cases.iter().zip(&outcomes) {
        let (tag, detail) = match o {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Outcome::Resource(d) => {
                resource += 1;
                ("SKIP", d)
            }
        };
        println!("{tag} {} [{}] ({}): {detail}", c.id, c.check.kind(), c.source);
    }
    let passed = cases.len() - failed - resource;
    println!("{passed} passed, {failed} failed, {resource} over the rank cap");
    match (failed, resource) {
        (0, 0) => Ok(()),
        (0, _) => Err(Failure { code: 3, msg: String::new() }),
        _ => Err(Failure::verify("")),
    }
}
