//! Closed-form SU(2) coupling coefficients.
//!
//! Everything here is computed in exact radical arithmetic, independently of
//! the diagram machinery, so that it can serve as a reference for it.

pub mod properties;
mod symbols;
mod yutsis;


use thiserror::Error;

use crate::exact::{HalfInteger, MagneticIndex};

pub use symbols::{cg, w3jm, w4jm, w6j, SymbolValue};
pub use yutsis::{
    invariant_loop, invariant_theta, symmetric_isometry, yutsis_matrix_3, yutsis_matrix_4,
    Orientation, ReadingSign, VertexSpec, YutsisTensor,
};

/// Which half of the triangle condition failed for a triad.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriadFailure {
    /// `j1 + j2 + j3` is not an integer.
    Parity,
    /// `j3 < |j1 - j2|`.
    BelowRange,
    /// `j3 > j1 + j2`.
    AboveRange,
}

impl std::fmt::Display for TriadFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TriadFailure::Parity => write!(f, "j1 + j2 + j3 is not an integer"),
            TriadFailure::BelowRange => write!(f, "j3 < |j1 - j2|"),
            TriadFailure::AboveRange => write!(f, "j3 > j1 + j2"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("magnetic index {m} is not valid for spin {j}")]
    Malformed { j: HalfInteger, m: MagneticIndex },
    #[error("triad ({j1}, {j2}, {j3}) violates the coupling conditions: {failure}")]
    Triad {
        j1: HalfInteger,
        j2: HalfInteger,
        j3: HalfInteger,
        failure: TriadFailure,
    },
    #[error("gluing needs one outgoing and one ingoing leg of equal spin")]
    Gluing,
    #[error("leg index {0} out of range")]
    Leg(usize),
}

/// Checks `j1 + j2 + j3 ∈ N` and `|j1 - j2| ≤ j3 ≤ j1 + j2`.
pub fn check_triad(j1: HalfInteger, j2: HalfInteger, j3: HalfInteger) -> Result<(), OracleError> {
    let (a, b, c) = (j1.twice() as i64, j2.twice() as i64, j3.twice() as i64);
    let failure = if (a + b + c) % 2 != 0 {
        Some(TriadFailure::Parity)
    } else if c < (a - b).abs() {
        Some(TriadFailure::BelowRange)
    } else if c > a + b {
        Some(TriadFailure::AboveRange)
    } else {
        None
    };
    match failure {
        None => Ok(()),
        Some(failure) => Err(OracleError::Triad { j1, j2, j3, failure }),
    }
}

pub(crate) fn triad_ok(j1: HalfInteger, j2: HalfInteger, j3: HalfInteger) -> bool {
    check_triad(j1, j2, j3).is_ok()
}
