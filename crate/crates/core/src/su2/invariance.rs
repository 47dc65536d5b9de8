use num_complex::Complex64;

use super::symmetriser::symmetriser;
use crate::exact::Matrix;
use crate::graph::Diagram;
use crate::tensor::{eval_float, to_matrix_float, EvalError};

/// `e^{-iαZ/2} e^{-iβX/2} e^{-iγZ/2}`.
pub fn euler_unitary(alpha: f64, beta: f64, gamma: f64) -> Matrix<Complex64> {
    let rz = |t: f64| {
        Matrix::from_vec(
            2,
            2,
            vec![
                Complex64::from_polar(1.0, -t / 2.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::from_polar(1.0, t / 2.0),
            ],
        )
    };
    let (c, s) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    let rx = Matrix::from_vec(
        2,
        2,
        vec![
            Complex64::new(c, 0.0),
            Complex64::new(0.0, -s),
            Complex64::new(0.0, -s),
            Complex64::new(c, 0.0),
        ],
    );
    rz(alpha).matmul(&rx).matmul(&rz(gamma))
}

fn kron_power(u: &Matrix<Complex64>, n: usize) -> Matrix<Complex64> {
    let mut out = Matrix::identity(1);
    for _ in 0..n {
        out = out.kron(u);
    }
    out
}

fn max_dev(a: &Matrix<Complex64>, b: &Matrix<Complex64>) -> f64 {
    a.data().iter().zip(b.data()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub trials: usize,
    pub max_deviation: f64,
}

impl InvarianceReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation < tol
    }
}

/// Applies `U` to every output wire and `XUX` to every input wire of a
/// vertex diagram (inputs are the wires of ingoing legs) and reports how far
/// the tensor moves.
pub fn check_su2_invariance(
    d: &Diagram,
    angles: &[(f64, f64, f64)],
) -> Result<InvarianceReport, EvalError> {
    let m = to_matrix_float(&eval_float(d)?);
    let (n_in, n_out) = (d.inputs().len(), d.outputs().len());
    let x = Matrix::from_vec(
        2,
        2,
        vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    );
    let mut worst: f64 = 0.0;
    for &(a, b, g) in angles {
        let u = euler_unitary(a, b, g);
        let flipped = x.matmul(&u).matmul(&x);
        let moved = kron_power(&u, n_out).matmul(&m).matmul(&kron_power(&flipped, n_in).transpose());
        worst = worst.max(max_dev(&moved, &m));
    }
    Ok(InvarianceReport { trials: angles.len(), max_deviation: worst })
}

/// Largest entry of `U^{⊗n} S - S U^{⊗n}` over the given rotations.
pub fn check_symmetriser_commutation(
    n: usize,
    angles: &[(f64, f64, f64)],
) -> Result<InvarianceReport, EvalError> {
    let s = to_matrix_float(&eval_float(&symmetriser(n))?);
    let mut worst: f64 = 0.0;
    for &(a, b, g) in angles {
        let un = kron_power(&euler_unitary(a, b, g), n);
        worst = worst.max(max_dev(&un.matmul(&s), &s.matmul(&un)));
    }
    Ok(InvarianceReport { trials: angles.len(), max_deviation: worst })
}
