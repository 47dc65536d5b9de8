use num_bigint::BigInt;
use num_rational::BigRational;

use super::{CorrectionFactor, CorrectionKind, Su2Error};
use crate::exact::{factorial, sqrt_rational, HalfInteger, MagneticIndex, Matrix, RadicalNumber};
use crate::graph::{Diagram, Phase, VertexId};
use crate::oracle::{symmetric_isometry, OracleError, Orientation};
use crate::tensor::{eval_exact, plug_basis_raw, to_matrix};

/// `√C(n, k)`.
pub(crate) fn sqrt_binomial(n: u32, k: u32) -> RadicalNumber {
    let (n, k) = (n as u64, k as u64);
    let c = BigRational::new(BigInt::from(factorial(n)), BigInt::from(factorial(k) * factorial(n - k)));
    sqrt_rational(&c).expect("positive")
}

/// Boundary wires of each open leg, given the legs in network order.
pub fn leg_wires(d: &Diagram, legs: &[(HalfInteger, Orientation)]) -> Result<Vec<Vec<VertexId>>, Su2Error> {
    let (mut ins, mut outs) = (d.inputs().iter(), d.outputs().iter());
    let mut out = Vec::with_capacity(legs.len());
    for (k, &(j, o)) in legs.iter().enumerate() {
        let src = match o {
            Orientation::Ingoing => &mut ins,
            Orientation::Outgoing => &mut outs,
        };
        let wires: Vec<VertexId> = src.by_ref().take(j.twice() as usize).copied().collect();
        if wires.len() != j.twice() as usize {
            return Err(Su2Error::Legs(format!("leg {k} needs {} wires", j.twice())));
        }
        out.push(wires);
    }
    if ins.next().is_some() || outs.next().is_some() {
        return Err(Su2Error::Legs("diagram has more wires than the legs".into()));
    }
    Ok(out)
}

/// Replaces two boundaries by the state `|01⟩ + |10⟩`.
fn plug_pair(d: &mut Diagram, a: VertexId, b: VertexId) {
    let na = d.neighbors(a)[0];
    let nb = d.neighbors(b)[0];
    d.remove_vertex(a).unwrap();
    d.remove_vertex(b).unwrap();
    let z = d.add_z(Phase::zero());
    let x = d.add_x(Phase::pi());
    d.add_edge(na, z);
    d.add_edge(z, x);
    d.add_edge(x, nb);
}

/// Closes every open leg with the state `|j, m⟩`, where `m` is the argument
/// of the coupling symbol (an ingoing leg carries `-m` on its wires).
///
/// States with a single basis string are plugged wire by wire, the spin-1
/// `m = 0` state as `|01⟩ + |10⟩`, and any other state through one
/// representative string, which the leg's symmetriser spreads over the
/// rest. The returned factor normalises the plugs.
pub fn plug_spin_states(
    d: &Diagram,
    legs: &[(HalfInteger, Orientation, MagneticIndex)],
) -> Result<(Diagram, CorrectionFactor), Su2Error> {
    let shape: Vec<_> = legs.iter().map(|&(j, o, _)| (j, o)).collect();
    let wires = leg_wires(d, &shape)?;
    let mut g = d.clone();
    let mut corr = CorrectionFactor::one();
    let mut basis = Vec::new();
    for (&(j, o, m), ws) in legs.iter().zip(&wires) {
        if !m.valid_for(j) {
            return Err(OracleError::Malformed { j, m }.into());
        }
        let label = if o == Orientation::Ingoing { m.neg() } else { m };
        let n = j.twice();
        let ones = ((n as i32 - label.twice()) / 2) as u32;
        if n == 2 && ones == 1 {
            plug_pair(&mut g, ws[0], ws[1]);
            corr.push(CorrectionKind::PlugNorm, 1);
            continue;
        }
        for (i, &w) in ws.iter().enumerate() {
            basis.push((w, (i as u32) < ones));
        }
        if ones > 0 && ones < n {
            corr.push(CorrectionKind::Binomial(n, ones), 1);
        }
    }
    let (g, count) = plug_basis_raw(&g, &basis)?;
    corr.push(CorrectionKind::PlugNorm, count as u32);
    Ok((g, corr))
}

/// The exact diagram matrix times the correction.
pub fn corrected_matrix(d: &Diagram, c: &CorrectionFactor) -> Result<Matrix<RadicalNumber>, Su2Error> {
    let m = to_matrix(&eval_exact(d)?).expect("exact tensor");
    let rows = m.rows();
    let cols = m.cols();
    let mut out = Vec::with_capacity(rows * cols);
    for x in m.data() {
        let r = x.to_radical().ok_or_else(|| Su2Error::NotReal(x.pretty()))?;
        out.push(&r * c.value());
    }
    Ok(Matrix::from_vec(rows, cols, out))
}

fn isometries(legs: &[(HalfInteger, Orientation)], want: Orientation) -> Matrix<RadicalNumber> {
    legs.iter()
        .filter(|(_, o)| *o == want)
        .fold(Matrix::identity(1), |acc, (j, _)| acc.kron(&symmetric_isometry(*j)))
}

/// `P_out · M · P_inᵀ`: a wire-basis matrix in the `|j, m⟩` bases of its
/// legs, rows from outgoing legs and columns from ingoing ones.
pub fn project_to_spins(m: &Matrix<RadicalNumber>, legs: &[(HalfInteger, Orientation)]) -> Matrix<RadicalNumber> {
    isometries(legs, Orientation::Outgoing)
        .matmul(m)
        .matmul(&isometries(legs, Orientation::Ingoing).transpose())
}
