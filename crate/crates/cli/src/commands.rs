use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use spinnet::exact::{ExactScalar, HalfInteger, MagneticIndex, Matrix, RadicalNumber};
use spinnet::graph::{self, Diagram, DiagramJson, VertexId};
use spinnet::oracle::{cg, check_triad, w3jm, w4jm, w6j, SymbolValue};
use spinnet::rewrite::{default_ruleset, simplify_with, RewriteRule, RuleKind, SimplifyOptions};
use spinnet::su2::{plug_spin_states, project_to_spins, CorrectionFactor, CorrectionKind};
use spinnet::tensor::{self, eval_with, EvalOptions, Evaluation, Mode, Tensor};

use crate::objects::{parse_spin, Object, Sidecar};
use crate::{Failure, ModeArg};

fn parse_m(s: &str) -> Result<MagneticIndex, Failure> {
    s.parse().map_err(|e| Failure::usage(format!("magnetic index {s:?}: {e}")))
}

fn parse_all<T>(args: &[String], f: impl Fn(&str) -> Result<T, Failure>) -> Result<Vec<T>, Failure> {
    args.iter().map(|a| f(a)).collect()
}

fn check_ms(js: &[HalfInteger], ms: &[MagneticIndex]) -> Result<(), Failure> {
    for (j, m) in js.iter().zip(ms) {
        if !m.valid_for(*j) {
            return Err(Failure::usage(format!("magnetic index {m} is not valid for spin {j}")));
        }
    }
    Ok(())
}

fn arity(kind: &str, args: &[String], n: usize) -> Result<(), Failure> {
    if args.len() == n {
        Ok(())
    } else {
        Err(Failure::usage(format!("{kind} takes {n} arguments, got {}", args.len())))
    }
}

/// Oracle value of `kind` at `args`, after checking the coupling conditions.
pub fn symbol_value(kind: &str, args: &[String]) -> Result<SymbolValue, Failure> {
    match kind {
        "3jm" => {
            arity(kind, args, 6)?;
            let js = parse_all(&args[..3], parse_spin)?;
            let ms = parse_all(&args[3..], parse_m)?;
            check_triad(js[0], js[1], js[2]).map_err(Failure::domain)?;
            check_ms(&js, &ms)?;
            Ok(w3jm([js[0], js[1], js[2]], [ms[0], ms[1], ms[2]]))
        }
        "4jm" => {
            arity(kind, args, 9)?;
            let js = parse_all(&args[..4], parse_spin)?;
            let ms = parse_all(&args[4..8], parse_m)?;
            let j = parse_spin(&args[8])?;
            check_triad(js[0], js[1], j).map_err(Failure::domain)?;
            check_triad(j, js[2], js[3]).map_err(Failure::domain)?;
            check_ms(&js, &ms)?;
            Ok(w4jm([js[0], js[1], js[2], js[3]], [ms[0], ms[1], ms[2], ms[3]], j))
        }
        "6j" => {
            arity(kind, args, 6)?;
            let s = parse_all(args, parse_spin)?;
            for [a, b, c] in [[0, 1, 2], [0, 4, 5], [3, 1, 5], [3, 4, 2]] {
                check_triad(s[a], s[b], s[c]).map_err(Failure::domain)?;
            }
            Ok(w6j([s[0], s[1], s[2], s[3], s[4], s[5]]))
        }
        "cg" => {
            arity(kind, args, 6)?;
            let (j1, m1) = (parse_spin(&args[0])?, parse_m(&args[1])?);
            let (j2, m2) = (parse_spin(&args[2])?, parse_m(&args[3])?);
            let (j, m) = (parse_spin(&args[4])?, parse_m(&args[5])?);
            check_triad(j1, j2, j).map_err(Failure::domain)?;
            cg(j1, m1, j2, m2, j, m).map_err(Failure::domain)
        }
        _ => Err(Failure::usage(format!("unknown symbol {kind:?}; expected 3jm, 4jm, 6j or cg"))),
    }
}

pub fn symbol(kind: &str, args: &[String]) -> Result<(), Failure> {
    let v = symbol_value(kind, args)?;
    println!("{v}");
    println!("{}", v.to_f64());
    Ok(())
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::io(path, e))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

pub fn write_diagram(path: &Path, d: &Diagram) -> Result<(), Failure> {
    write(path, to_json(&graph::serialize(d)))
}

pub fn read_diagram(path: &Path) -> Result<Diagram, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    let j: DiagramJson = serde_json::from_str(&text).map_err(|e| Failure::io(path, e))?;
    graph::deserialize(&j).map_err(|e| Failure::io(path, e))
}

fn read_sidecar(diagram: &Path) -> Result<Option<Sidecar>, Failure> {
    let p = Sidecar::path_for(diagram);
    if !p.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&p).map_err(|e| Failure::io(&p, e))?;
    serde_json::from_str(&text).map(Some).map_err(|e| Failure::io(&p, e))
}

pub fn build(obj: &Object, out: Option<&Path>, dot: Option<&Path>) -> Result<(), Failure> {
    let b = obj.build()?;
    let d = &b.diagram;
    let summary = format!(
        "{} vertices, {} edges, {} inputs, {} outputs\nscalar: {}\ncorrection: {}",
        d.num_vertices(),
        d.num_edges(),
        d.inputs().len(),
        d.outputs().len(),
        d.scalar().pretty(),
        b.sidecar.correction
    );
    match out {
        Some(p) => {
            write_diagram(p, d)?;
            let side = Sidecar::path_for(p);
            write(&side, to_json(&b.sidecar))?;
            println!("wrote {} and {}", p.display(), side.display());
            println!("{summary}");
        }
        None => {
            print!("{}", to_json(&graph::serialize(d)));
            eprintln!("{summary}");
        }
    }
    if let Some(p) = dot {
        write(p, graph::to_dot(d))?;
    }
    Ok(())
}

pub struct EvalArgs {
    pub file: PathBuf,
    pub mode: ModeArg,
    pub plug: Option<String>,
    pub ms: Option<String>,
    pub rank_cap: Option<usize>,
    pub simplify: bool,
    pub json: Option<PathBuf>,
    pub npy: Option<PathBuf>,
}

pub fn mode_of(m: ModeArg) -> Mode {
    match m {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Float => Mode::Float,
    }
}

/// Basis plugs from a string with one of `0`, `1`, `-` per boundary.
pub fn plug_bits(d: &Diagram, bits: &str) -> Result<(Diagram, usize), Failure> {
    let bounds = d.boundaries();
    if bits.chars().count() != bounds.len() {
        return Err(Failure::usage(format!(
            "--plug needs {} characters (inputs then outputs), got {}",
            bounds.len(),
            bits.chars().count()
        )));
    }
    let mut assign: Vec<(VertexId, bool)> = Vec::new();
    for (b, c) in bounds.into_iter().zip(bits.chars()) {
        match c {
            '0' => assign.push((b, false)),
            '1' => assign.push((b, true)),
            '-' => {}
            _ => return Err(Failure::usage(format!("bad plug character {c:?}"))),
        }
    }
    tensor::plug_basis_raw(d, &assign).map_err(Failure::domain)
}

/// Plugs `|j, m⟩` into every leg listed in the sidecar.
pub fn plug_ms(d: &Diagram, side: &Sidecar, ms: &[MagneticIndex]) -> Result<(Diagram, CorrectionFactor), Failure> {
    let legs = side.legs.as_ref().ok_or_else(|| Failure::usage("this diagram has no spin legs"))?;
    if legs.len() != ms.len() {
        return Err(Failure::usage(format!("expected {} magnetic indices, got {}", legs.len(), ms.len())));
    }
    let spec: Vec<_> = legs.iter().zip(ms).map(|(&(j, o), &m)| (j, o, m)).collect();
    plug_spin_states(d, &spec).map_err(Failure::domain)
}

pub fn simplified(d: &Diagram) -> Diagram {
    simplify_with(d, &default_ruleset(), &SimplifyOptions::default()).0
}

pub fn evaluate(d: &Diagram, mode: Mode, rank_cap: Option<usize>) -> Result<Evaluation, Failure> {
    Ok(eval_with(d, &EvalOptions { mode, rank_cap, plan: None })?)
}

pub fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn print_matrix<T: Clone + num_traits::Zero>(title: &str, m: &Matrix<T>, f: impl Fn(&T) -> String) {
    println!("{title} ({}x{}):", m.rows(), m.cols());
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| f(m.get(r, c))).collect();
        println!("  [{}]", row.join(", "));
    }
}

/// Largest tensor printed entry by entry.
const PRINT_LIMIT: usize = 1 << 10;

fn report(t: &Tensor, corr: Option<&CorrectionFactor>, legs: Option<&crate::objects::Legs>) {
    if t.rank() == 0 {
        match t.scalar_exact() {
            Some(v) => {
                println!("value: {}", v.pretty());
                if let Some(c) = corr {
                    match c.apply(v) {
                        Some(r) => println!("corrected: {r}  ({})", r.to_f64()),
                        None => println!("corrected: {}", fmt_complex(v.to_complex() * c.value().to_f64())),
                    }
                }
            }
            None => {
                let z = t.scalar_complex().expect("rank 0");
                println!("value: {}", fmt_complex(z));
                if let Some(c) = corr {
                    println!("corrected: {}", fmt_complex(z * c.value().to_f64()));
                }
            }
        }
        return;
    }
    println!("open wires: {} inputs, {} outputs", t.num_inputs(), t.num_outputs());
    if 1usize << t.rank() > PRINT_LIMIT {
        println!("tensor too large to print; use --json or --npy");
        return;
    }
    match tensor::to_matrix(t) {
        Some(m) => {
            print_matrix("value", &m, ExactScalar::pretty);
            let Some(c) = corr else { return };
            let Some(real) = m.data().iter().map(ExactScalar::to_radical).collect::<Option<Vec<_>>>() else {
                return;
            };
            let cm: Matrix<RadicalNumber> =
                Matrix::from_vec(m.rows(), m.cols(), real.iter().map(|x| x * c.value()).collect());
            print_matrix("corrected", &cm, ToString::to_string);
            if let Some(legs) = legs.filter(|l| !l.is_empty()) {
                print_matrix("spin basis", &project_to_spins(&cm, legs), ToString::to_string);
            }
        }
        None => print_matrix("value", &tensor::to_matrix_float(t), |z| fmt_complex(*z)),
    }
}

pub fn eval(a: &EvalArgs) -> Result<(), Failure> {
    let mut d = read_diagram(&a.file)?;
    let side = read_sidecar(&a.file)?;
    let mut corr = side.as_ref().map(|s| s.correction.clone());
    let mut fully_open = true;
    match (&a.plug, &a.ms) {
        (Some(_), Some(_)) => return Err(Failure::usage("--plug and --ms are exclusive")),
        (Some(bits), None) => {
            let (g, n) = plug_bits(&d, bits)?;
            if let Some(c) = corr.as_mut() {
                c.push(CorrectionKind::PlugNorm, n as u32);
            }
            fully_open = n == 0;
            d = g;
        }
        (None, Some(list)) => {
            let side = side.as_ref().ok_or_else(|| Failure::usage("--ms needs a correction sidecar"))?;
            let ms = list.split(',').map(|s| parse_m(s.trim())).collect::<Result<Vec<_>, _>>()?;
            let (g, pc) = plug_ms(&d, side, &ms)?;
            corr = Some(side.correction.mul(&pc));
            fully_open = false;
            d = g;
        }
        (None, None) => {}
    }
    if a.simplify {
        d = simplified(&d);
    }
    let ev = evaluate(&d, mode_of(a.mode), a.rank_cap)?;
    let legs = side.as_ref().and_then(|s| s.legs.as_ref()).filter(|_| fully_open);
    report(&ev.tensor, corr.as_ref(), legs);
    println!("plan: peak rank {}, {} steps", ev.plan.peak_rank, ev.plan.steps.len());
    if let Some(p) = &a.json {
        write(p, to_json(&tensor::to_json(&ev.tensor)))?;
    }
    if let Some(p) = &a.npy {
        write(p, tensor::to_npy(&ev.tensor))?;
    }
    Ok(())
}

pub fn parse_rules(list: &str) -> Result<Vec<RewriteRule>, Failure> {
    list.split(',')
        .map(|s| s.trim().parse::<RuleKind>().map(RewriteRule::new).map_err(|e| Failure::usage(e.to_string())))
        .collect()
}

pub fn simplify(file: &Path, rules: Option<&str>, lookahead: usize, out: Option<&Path>) -> Result<(), Failure> {
    let d = read_diagram(file)?;
    let ruleset = match rules {
        Some(r) => parse_rules(r)?,
        None => default_ruleset(),
    };
    let opts = SimplifyOptions { lookahead, ..Default::default() };
    let (g, trace) = simplify_with(&d, &ruleset, &opts);
    print!("{}", to_json(&trace));
    if let Some(p) = out {
        write_diagram(p, &g)?;
        // rewrites keep the value, so the correction carries over
        if let Some(side) = read_sidecar(file)? {
            write(&Sidecar::path_for(p), to_json(&side))?;
        }
    }
    Ok(())
}
