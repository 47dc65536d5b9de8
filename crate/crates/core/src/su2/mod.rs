//! SU(2) objects as ZXH diagrams: symmetrisers, links, trivalent vertices
//! and whole spin networks, each paired with the scalar that turns the raw
//! diagram into the corresponding Yutsis tensor.

mod invariance;
mod network;
mod plug;
mod symmetriser;

#[cfg(test)]
mod tests;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{factorial, sqrt_rational, ExactScalar, HalfInteger, RadicalNumber};
use crate::graph::GraphError;
use crate::tensor::EvalError;
use crate::oracle::{check_triad, OracleError};

pub use invariance::{
    check_su2_invariance, check_symmetriser_commutation, euler_unitary, InvarianceReport,
};
pub use network::{
    assemble_network, cup, loop_network, network_15j, network_6j, theta_network, vertex_3jm,
    vertex_4jm, End, NetworkEdge, NetworkSpec, NodeSpec, Strands,
};
pub use plug::{corrected_matrix, leg_wires, plug_spin_states, project_to_spins};
pub use symmetriser::{
    crown, cswap_gadget, lambda_scalar, symmetriser, symmetriser_raw, yutsis_link, connector,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Su2Error {
    #[error(transparent)]
    Triad(#[from] OracleError),
    #[error("node {node}: {source}")]
    NodeTriad { node: usize, source: OracleError },
    #[error("crown needs at least 3 wires, got {0}")]
    CrownSize(usize),
    #[error("intermediate spin {j} is outside [{lo}, {hi}]")]
    IntermediateRange { j: HalfInteger, lo: HalfInteger, hi: HalfInteger },
    #[error("arrow mismatch: {0}")]
    Arrow(String),
    #[error("leg mismatch: {0}")]
    Legs(String),
    #[error("diagram value {0} is not real")]
    NotReal(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// `λ_n`, the scalar normalising the `n`-wire symmetriser diagram into a
/// projector.
pub fn lambda_n(n: usize) -> RadicalNumber {
    lambda_scalar(n).to_radical().expect("λ_n is real")
}

/// Norm of the binor trivalent vertex. Its reciprocal corrects the ZXH
/// vertex to the 3jm symbol.
pub fn binor_n(j1: HalfInteger, j2: HalfInteger, j3: HalfInteger) -> Result<RadicalNumber, Su2Error> {
    check_triad(j1, j2, j3)?;
    let (a, b, c) = (j1.twice() as u64, j2.twice() as u64, j3.twice() as u64);
    let s = (a + b + c) / 2;
    let num = factorial(s + 1) * factorial(s - a) * factorial(s - b) * factorial(s - c);
    let den = factorial(a) * factorial(b) * factorial(c);
    Ok(sqrt_rational(&BigRational::new(BigInt::from(num), BigInt::from(den))).expect("positive"))
}

/// One multiplicative ingredient of a [`CorrectionFactor`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorrectionKind {
    /// `λ_n` of an `n`-wire symmetriser.
    Lambda(usize),
    /// `1/N(j1, j2, j3)`.
    InvN([HalfInteger; 3]),
    /// `1/√2` per basis plug.
    PlugNorm,
    /// `√C(n, k)`, turning a plugged basis string into the normalised
    /// weight-`k` symmetric state on `n` wires.
    Binomial(u32, u32),
}

impl CorrectionKind {
    fn value(&self) -> RadicalNumber {
        match self {
            CorrectionKind::Lambda(n) => lambda_n(*n),
            CorrectionKind::InvN([a, b, c]) => {
                binor_n(*a, *b, *c).expect("validated").inverse().expect("nonzero")
            }
            CorrectionKind::PlugNorm => RadicalNumber::term(BigRational::new(1.into(), 2.into()), 2u32),
            CorrectionKind::Binomial(n, k) => plug::sqrt_binomial(*n, *k),
        }
    }
}

impl fmt::Display for CorrectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorrectionKind::Lambda(n) => write!(f, "lambda({n})"),
            CorrectionKind::InvN([a, b, c]) => write!(f, "1/N({a}, {b}, {c})"),
            CorrectionKind::PlugNorm => write!(f, "plug_norm"),
            CorrectionKind::Binomial(n, k) => write!(f, "sqrt(C({n}, {k}))"),
        }
    }
}

/// A scalar that multiplies a raw diagram value, with the list of factors it
/// was built from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrectionFactor {
    value: RadicalNumber,
    provenance: Vec<(CorrectionKind, u32)>,
}

impl Default for CorrectionFactor {
    fn default() -> Self {
        Self::one()
    }
}

impl CorrectionFactor {
    pub fn one() -> Self {
        CorrectionFactor { value: RadicalNumber::one(), provenance: Vec::new() }
    }

    pub fn value(&self) -> &RadicalNumber {
        &self.value
    }

    pub fn provenance(&self) -> &[(CorrectionKind, u32)] {
        &self.provenance
    }

    /// Multiplies in `kind^mult`. Trivial factors (`λ_0`, `λ_1`) are still
    /// recorded so the provenance mirrors the structure.
    pub fn push(&mut self, kind: CorrectionKind, mult: u32) {
        if mult == 0 {
            return;
        }
        self.value = &self.value * &kind.value().pow(mult);
        if let Some(e) = self.provenance.iter_mut().find(|(k, _)| *k == kind) {
            e.1 += mult;
        } else {
            self.provenance.push((kind, mult));
        }
    }

    pub fn with(mut self, kind: CorrectionKind, mult: u32) -> Self {
        self.push(kind, mult);
        self
    }

    pub fn mul(&self, o: &CorrectionFactor) -> CorrectionFactor {
        let mut out = self.clone();
        for (k, m) in &o.provenance {
            out.push(k.clone(), *m);
        }
        out
    }

    /// Recomputes the value from the provenance list.
    pub fn recompute(&self) -> RadicalNumber {
        self.provenance
            .iter()
            .fold(RadicalNumber::one(), |acc, (k, m)| &acc * &k.value().pow(*m))
    }

    /// `raw · self` for a real diagram value.
    pub fn apply(&self, raw: &ExactScalar) -> Option<RadicalNumber> {
        raw.to_radical().map(|r| &r * &self.value)
    }
}

impl fmt::Display for CorrectionFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)?;
        if !self.provenance.is_empty() {
            let parts: Vec<String> = self
                .provenance
                .iter()
                .map(|(k, m)| if *m == 1 { k.to_string() } else { format!("{k}^{m}") })
                .collect();
            write!(f, " = {}", parts.join(" * "))?;
        }
        Ok(())
    }
}
