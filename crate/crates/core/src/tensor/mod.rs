//! Evaluation of diagrams to dense tensors by planned pairwise contraction,
//! exactly over Q(i)[√2] or in complex floating point.

mod dense;
mod exact_dense;
mod export;
mod network;
mod plan;
mod ring;

pub use export::{to_json, to_npy, TensorJson};
pub use plan::{
    plan_contraction, random_plan, rank_cap_from_env, ContractionPlan, PlanError, DEFAULT_RANK_CAP_EXACT,
    DEFAULT_RANK_CAP_FLOAT,
};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{ExactScalar, Matrix};
use crate::graph::{make_hbox, make_spider, Color, Diagram, GraphError, Phase, Role, VertexId, VertexKind};
use dense::Dense;
use exact_dense::ExactDense;
use network::{LeafKind, Network};
use ring::Zc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("exact evaluation needs multiples of π/2; vertex {0} has phase {1}")]
    NonClifford(VertexId, Phase),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum TensorData {
    Exact(Vec<ExactScalar>),
    Float(Vec<Complex64>),
}

/// Dense tensor of a diagram, global scalar included. Index order is the
/// diagram's boundary order (inputs, then outputs), first index most
/// significant.
#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    open: Vec<(VertexId, Role)>,
    data: TensorData,
}

impl Tensor {
    pub fn open(&self) -> &[(VertexId, Role)] {
        &self.open
    }

    pub fn rank(&self) -> usize {
        self.open.len()
    }

    pub fn data(&self) -> &TensorData {
        &self.data
    }

    pub fn num_inputs(&self) -> usize {
        self.open.iter().filter(|(_, r)| *r == Role::Input).count()
    }

    pub fn num_outputs(&self) -> usize {
        self.rank() - self.num_inputs()
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.data, TensorData::Exact(_))
    }

    pub fn exact(&self) -> Option<&[ExactScalar]> {
        match &self.data {
            TensorData::Exact(v) => Some(v),
            TensorData::Float(_) => None,
        }
    }

    pub fn to_complex(&self) -> Vec<Complex64> {
        match &self.data {
            TensorData::Exact(v) => v.iter().map(|x| x.to_complex()).collect(),
            TensorData::Float(v) => v.clone(),
        }
    }

    /// The single entry of a boundary-free tensor.
    pub fn scalar_exact(&self) -> Option<&ExactScalar> {
        match (&self.data, self.rank()) {
            (TensorData::Exact(v), 0) => v.first(),
            _ => None,
        }
    }

    pub fn scalar_complex(&self) -> Option<Complex64> {
        if self.rank() == 0 {
            self.to_complex().first().copied()
        } else {
            None
        }
    }

    /// Largest entrywise deviation from another tensor of the same shape.
    pub fn max_deviation(&self, other: &Tensor) -> f64 {
        let (a, b) = (self.to_complex(), other.to_complex());
        if a.len() != b.len() {
            return f64::INFINITY;
        }
        a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }
}

fn matrix_from<T: Clone + Zero>(t: &Tensor, entries: &[T]) -> Matrix<T> {
    let n_in = t.num_inputs();
    let n_out = t.num_outputs();
    Matrix::from_fn(1 << n_out, 1 << n_in, |r, c| entries[(c << n_out) | r].clone())
}

/// Rows are outputs, columns are inputs. Exact tensors only.
pub fn to_matrix(t: &Tensor) -> Option<Matrix<ExactScalar>> {
    t.exact().map(|e| matrix_from(t, e))
}

pub fn to_matrix_float(t: &Tensor) -> Matrix<Complex64> {
    matrix_from(t, &t.to_complex())
}

#[derive(Clone, Debug)]
pub struct EvalOptions {
    pub mode: Mode,
    /// Defaults from the mode, overridden by `SPINNET_RANK_CAP`.
    pub rank_cap: Option<usize>,
    pub plan: Option<ContractionPlan>,
}

impl EvalOptions {
    pub fn new(mode: Mode) -> Self {
        EvalOptions { mode, rank_cap: None, plan: None }
    }

    pub fn effective_cap(&self) -> usize {
        self.rank_cap.or_else(rank_cap_from_env).unwrap_or(match self.mode {
            Mode::Exact => DEFAULT_RANK_CAP_EXACT,
            Mode::Float => DEFAULT_RANK_CAP_FLOAT,
        })
    }
}

/// Result of [`eval_with`].
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub tensor: Tensor,
    pub plan: ContractionPlan,
}

pub fn eval(d: &Diagram, mode: Mode, plan: Option<&ContractionPlan>) -> Result<Tensor, EvalError> {
    let opts = EvalOptions { mode, rank_cap: None, plan: plan.cloned() };
    eval_with(d, &opts).map(|e| e.tensor)
}

pub fn eval_exact(d: &Diagram) -> Result<Tensor, EvalError> {
    eval(d, Mode::Exact, None)
}

pub fn eval_float(d: &Diagram) -> Result<Tensor, EvalError> {
    eval(d, Mode::Float, None)
}

/// Exact value of a closed diagram.
pub fn eval_scalar(d: &Diagram) -> Result<ExactScalar, EvalError> {
    let t = eval_exact(d)?;
    Ok(t.exact().and_then(|v| (t.rank() == 0).then(|| v[0].clone())).unwrap_or_default())
}

pub fn eval_with(d: &Diagram, opts: &EvalOptions) -> Result<Evaluation, EvalError> {
    if opts.mode == Mode::Exact {
        for (v, k) in d.vertices() {
            if let Some(p) = k.phase() {
                if !p.is_clifford() {
                    return Err(EvalError::NonClifford(v, p));
                }
            }
        }
    }
    let net = Network::build(d);
    let cap = opts.effective_cap();
    let plan = match &opts.plan {
        Some(p) => {
            plan::check_plan(&net, p, cap)?;
            p.clone()
        }
        None => plan::plan_network(&net, cap)?,
    };
    let open: Vec<(VertexId, Role)> = d
        .inputs()
        .iter()
        .map(|&v| (v, Role::Input))
        .chain(d.outputs().iter().map(|&v| (v, Role::Output)))
        .collect();
    let data = match opts.mode {
        Mode::Exact => {
            let leaves: Vec<ExactDense> = net.leaves.iter().map(exact_leaf).collect();
            let out = execute(leaves, &plan, |a, b| a.contract(b));
            let entries = match out {
                Some(t) => t.permuted(&net.open).to_scalars(d.scalar()),
                None => vec![d.scalar().clone()],
            };
            TensorData::Exact(entries)
        }
        Mode::Float => {
            let leaves: Vec<Dense<Complex64>> = net.leaves.iter().map(float_leaf).collect();
            let out = execute(leaves, &plan, |a, b| a.contract(b).expect("floats do not overflow"));
            let s = d.scalar().to_complex();
            let entries = match out {
                Some(t) => t.permuted(&net.open).data.into_iter().map(|x| x * s).collect(),
                None => vec![s],
            };
            TensorData::Float(entries)
        }
    };
    Ok(Evaluation { tensor: Tensor { open, data }, plan })
}

fn execute<T>(leaves: Vec<T>, plan: &ContractionPlan, f: impl Fn(&T, &T) -> T) -> Option<T> {
    let mut slots: Vec<Option<T>> = leaves.into_iter().map(Some).collect();
    for &(a, b) in &plan.steps {
        let x = slots[a].take().expect("plan validated");
        let y = slots[b].take().expect("plan validated");
        slots.push(Some(f(&x, &y)));
    }
    slots.into_iter().flatten().last()
}

fn float_leaf(l: &network::Leaf) -> Dense<Complex64> {
    let k = l.labels.len();
    let n = 1usize << k;
    let one = Complex64::new(1.0, 0.0);
    let data = match &l.kind {
        LeafKind::Delta => vec![one, Complex64::zero(), Complex64::zero(), one],
        LeafKind::Vertex(VertexKind::Z(p)) => {
            let mut v = vec![Complex64::zero(); n];
            v[0] += one;
            v[n - 1] += p.exp();
            v
        }
        LeafKind::Vertex(VertexKind::X(p)) => {
            let norm = std::f64::consts::FRAC_1_SQRT_2.powi(k as i32);
            let (even, odd) = ((one + p.exp()) * norm, (one - p.exp()) * norm);
            (0..n).map(|i| if i.count_ones() % 2 == 0 { even } else { odd }).collect()
        }
        LeafKind::Vertex(VertexKind::H(a)) => {
            let mut v = vec![one; n];
            v[n - 1] = a.to_complex();
            v
        }
        LeafKind::Vertex(VertexKind::Boundary { .. }) => unreachable!("boundaries are not leaves"),
    };
    Dense { labels: l.labels.clone(), data }.trace_repeated().expect("floats do not overflow")
}

fn gaussian_int(s: &ExactScalar) -> Zc<i64> {
    // callers only pass units, 1 ± unit, or H labels scaled to integers
    let f = |q: &num_rational::BigRational| q.to_integer().to_i64().expect("small integer entry");
    Zc::new(f(s.re_rat()), f(s.re_sqrt2()), f(s.im_rat()), f(s.im_sqrt2()))
}

fn exact_leaf(l: &network::Leaf) -> ExactDense {
    let k = l.labels.len();
    let n = 1usize << k;
    let (data, scale) = match &l.kind {
        LeafKind::Delta => (vec![Zc::from_i64(1, 0, 0, 0), Zc::from_i64(0, 0, 0, 0), Zc::from_i64(0, 0, 0, 0), Zc::from_i64(1, 0, 0, 0)], ExactScalar::one()),
        LeafKind::Vertex(VertexKind::Z(p)) => {
            let e = p.exact_exp().expect("clifford checked");
            let mut v = vec![Zc::from_i64(0, 0, 0, 0); n];
            if n == 1 {
                v[0] = gaussian_int(&(&ExactScalar::one() + &e));
            } else {
                v[0] = Zc::from_i64(1, 0, 0, 0);
                v[n - 1] = gaussian_int(&e);
            }
            (v, ExactScalar::one())
        }
        LeafKind::Vertex(VertexKind::X(p)) => {
            let e = p.exact_exp().expect("clifford checked");
            let even = gaussian_int(&(&ExactScalar::one() + &e));
            let odd = gaussian_int(&(&ExactScalar::one() - &e));
            let v = (0..n).map(|i| if i.count_ones() % 2 == 0 { even.clone() } else { odd.clone() }).collect();
            (v, ExactScalar::sqrt2_pow(-(k as i64)))
        }
        LeafKind::Vertex(VertexKind::H(a)) => {
            // scale the label to integers by the lcm of its denominators
            let den = [a.re_rat(), a.re_sqrt2(), a.im_rat(), a.im_sqrt2()]
                .iter()
                .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
            let dq = ExactScalar::from_rational(num_rational::BigRational::from_integer(den.clone()));
            let top = &dq * a;
            let int = |x: &num_rational::BigRational| x.to_integer();
            let mut v = vec![Zc::new(den.clone(), BigInt::zero(), BigInt::zero(), BigInt::zero()); n];
            v[n - 1] = Zc::new(int(top.re_rat()), int(top.re_sqrt2()), int(top.im_rat()), int(top.im_sqrt2()));
            let scale = ExactScalar::one().checked_div(&dq).expect("nonzero lcm");
            return ExactDense::from_big(l.labels.clone(), v, scale);
        }
        LeafKind::Vertex(VertexKind::Boundary { .. }) => unreachable!("boundaries are not leaves"),
    };
    ExactDense::new(l.labels.clone(), data, scale)
}

/// Tensor of a single generator with `degree` legs (all as outputs).
pub fn vertex_tensor(v: &VertexKind, degree: usize, mode: Mode) -> Result<Tensor, EvalError> {
    let d = match v {
        VertexKind::Z(p) => make_spider(Color::Z, *p, 0, degree),
        VertexKind::X(p) => make_spider(Color::X, *p, 0, degree),
        VertexKind::H(a) => make_hbox(a.clone(), 0, degree),
        VertexKind::Boundary { .. } => Diagram::identity(degree.min(1)),
    };
    eval(&d, mode, None)
}

/// Replaces each assigned boundary by an X-spider state (`X(0)` for `|0⟩`,
/// `X(π)` for `|1⟩`) without compensating their `√2` norm. Returns the
/// diagram and the number of plugs.
pub fn plug_basis_raw(d: &Diagram, assignments: &[(VertexId, bool)]) -> Result<(Diagram, usize), GraphError> {
    let mut out = d.clone();
    for &(b, bit) in assignments {
        match out.kind(b) {
            Some(k) if k.is_boundary() => {}
            Some(_) => return Err(GraphError::NotBoundary(b)),
            None => return Err(GraphError::UnknownVertex(b)),
        }
        let e = out.incident(b)[0];
        let nb = out.other_end(e, b).unwrap();
        out.remove_vertex(b)?;
        let x = out.add_x(if bit { Phase::pi() } else { Phase::zero() });
        out.add_edge(x, nb);
    }
    Ok((out, assignments.len()))
}

/// Plugs basis states and divides by `√2` per plug, so the result is the
/// basis-indexed amplitude map.
pub fn plug_basis(d: &Diagram, assignments: &[(VertexId, bool)]) -> Result<Diagram, GraphError> {
    let (mut out, n) = plug_basis_raw(d, assignments)?;
    out.mul_scalar(&ExactScalar::sqrt2_pow(-(n as i64)));
    Ok(out)
}
