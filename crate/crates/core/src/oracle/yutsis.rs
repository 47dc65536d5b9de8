use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::symbols::w3jm;
use super::{check_triad, OracleError};
use crate::exact::{factorial, sqrt_rational, HalfInteger, MagneticIndex, Matrix, RadicalNumber};

/// Direction of a leg relative to its vertex. An ingoing leg negates its
/// magnetic index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Outgoing,
    Ingoing,
}

impl Orientation {
    pub fn flip(self) -> Self {
        match self {
            Orientation::Outgoing => Orientation::Ingoing,
            Orientation::Ingoing => Orientation::Outgoing,
        }
    }

    /// Parses strings such as `"iio"` into one orientation per character.
    pub fn parse_list(s: &str) -> Option<Vec<Orientation>> {
        s.chars()
            .map(|c| match c {
                'o' | 'O' => Some(Orientation::Outgoing),
                'i' | 'I' => Some(Orientation::Ingoing),
                _ => None,
            })
            .collect()
    }
}

/// Reading direction of the three spins around a node. Anticlockwise
/// reading is an odd permutation of the columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReadingSign {
    #[default]
    Clockwise,
    Anticlockwise,
}

/// A trivalent node: three spins, their orientations and the reading sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexSpec {
    pub spins: [HalfInteger; 3],
    pub orientations: [Orientation; 3],
    #[serde(default)]
    pub sign: ReadingSign,
}

impl VertexSpec {
    pub fn new(spins: [HalfInteger; 3], orientations: [Orientation; 3]) -> Self {
        VertexSpec { spins, orientations, sign: ReadingSign::Clockwise }
    }

    pub fn all(spins: [HalfInteger; 3], o: Orientation) -> Self {
        Self::new(spins, [o; 3])
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        check_triad(self.spins[0], self.spins[1], self.spins[2])
    }
}

impl fmt::Display for VertexSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o: String = self
            .orientations
            .iter()
            .map(|o| if *o == Orientation::Ingoing { 'i' } else { 'o' })
            .collect();
        write!(f, "({}, {}, {}) {}", self.spins[0], self.spins[1], self.spins[2], o)
    }
}

impl FromStr for Orientation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "o" | "out" | "outgoing" => Ok(Orientation::Outgoing),
            "i" | "in" | "ingoing" => Ok(Orientation::Ingoing),
            _ => Err(format!("unknown orientation {s:?}")),
        }
    }
}

fn parity(twice: i64) -> bool {
    (twice / 2).rem_euclid(2) == 1
}

/// A Yutsis diagram evaluated as a tensor over magnetic indices.
///
/// Each leg is indexed by `m = j, j-1, …, -j`; leg 0 is the slowest index.
/// The stored value is the diagram's value at the labels shown on the legs,
/// so an ingoing leg labelled `m` has already had its index negated.
#[derive(Debug, Clone, PartialEq)]
pub struct YutsisTensor {
    legs: Vec<(HalfInteger, Orientation)>,
    data: Vec<RadicalNumber>,
}

impl YutsisTensor {
    pub fn scalar(v: RadicalNumber) -> Self {
        YutsisTensor { legs: Vec::new(), data: vec![v] }
    }

    /// The 3jm node of `spec`.
    pub fn vertex(spec: &VertexSpec) -> Result<Self, OracleError> {
        spec.validate()?;
        let legs: Vec<_> = (0..3).map(|i| (spec.spins[i], spec.orientations[i])).collect();
        let odd = spec.sign == ReadingSign::Anticlockwise
            && parity(spec.spins.iter().map(|j| j.twice() as i64).sum());
        let mut t = YutsisTensor::from_fn(legs, |ms| {
            let args: Vec<MagneticIndex> = (0..3)
                .map(|i| match spec.orientations[i] {
                    Orientation::Outgoing => ms[i],
                    Orientation::Ingoing => ms[i].neg(),
                })
                .collect();
            w3jm(spec.spins, [args[0], args[1], args[2]])
        });
        if odd {
            t = t.scale(&RadicalNumber::from_int(-1));
        }
        Ok(t)
    }

    fn from_fn(
        legs: Vec<(HalfInteger, Orientation)>,
        mut f: impl FnMut(&[MagneticIndex]) -> RadicalNumber,
    ) -> Self {
        let size: usize = legs.iter().map(|(j, _)| j.dim() as usize).product();
        let mut data = Vec::with_capacity(size);
        let mut ms = vec![MagneticIndex::default(); legs.len()];
        for idx in 0..size {
            let mut rest = idx;
            for (k, (j, _)) in legs.iter().enumerate().rev() {
                let d = j.dim() as usize;
                let pos = rest % d;
                rest /= d;
                ms[k] = MagneticIndex::from_twice(j.twice() as i32 - 2 * pos as i32);
            }
            data.push(f(&ms));
        }
        YutsisTensor { legs, data }
    }

    pub fn legs(&self) -> &[(HalfInteger, Orientation)] {
        &self.legs
    }

    pub fn data(&self) -> &[RadicalNumber] {
        &self.data
    }

    /// Value at the given leg positions (0 = highest `m`).
    pub fn at(&self, pos: &[usize]) -> &RadicalNumber {
        let mut idx = 0;
        for (k, (j, _)) in self.legs.iter().enumerate() {
            idx = idx * j.dim() as usize + pos[k];
        }
        &self.data[idx]
    }

    pub fn scale(mut self, s: &RadicalNumber) -> Self {
        for v in &mut self.data {
            *v = &*v * s;
        }
        self
    }

    /// The value of a tensor with no legs.
    pub fn value(&self) -> Option<&RadicalNumber> {
        if self.legs.is_empty() {
            self.data.first()
        } else {
            None
        }
    }

    /// Removes a spin-0 leg (the end of a dashed strand).
    pub fn drop_spin0(mut self, leg: usize) -> Result<Self, OracleError> {
        match self.legs.get(leg) {
            Some((j, _)) if j.twice() == 0 => {
                self.legs.remove(leg);
                Ok(self)
            }
            Some(_) => Err(OracleError::Gluing),
            None => Err(OracleError::Leg(leg)),
        }
    }

    /// Glues leg `a` of `self` to leg `b` of `other`: sum over `m` with the
    /// factor `(-1)^(j-m)`, `m` being the label of the outgoing end.
    pub fn glue(&self, a: usize, other: &YutsisTensor, b: usize) -> Result<Self, OracleError> {
        if a >= self.legs.len() {
            return Err(OracleError::Leg(a));
        }
        if b >= other.legs.len() {
            return Err(OracleError::Leg(b));
        }
        // outer product, then contract within
        let mut legs = self.legs.clone();
        legs.extend(other.legs.iter().cloned());
        let n = other.data.len();
        let mut data = Vec::with_capacity(self.data.len() * n);
        for x in &self.data {
            for y in &other.data {
                data.push(if x.is_zero() || y.is_zero() {
                    RadicalNumber::zero()
                } else {
                    x * y
                });
            }
        }
        YutsisTensor { legs, data }.self_glue(a, self.legs.len() + b)
    }

    /// Glues two legs of the same tensor.
    pub fn self_glue(&self, a: usize, b: usize) -> Result<Self, OracleError> {
        let r = self.legs.len();
        if a >= r {
            return Err(OracleError::Leg(a));
        }
        if b >= r || a == b {
            return Err(OracleError::Leg(b));
        }
        let (ja, oa) = self.legs[a];
        let (jb, ob) = self.legs[b];
        if ja != jb || oa == ob {
            return Err(OracleError::Gluing);
        }
        let d = ja.dim() as usize;
        let legs: Vec<_> = (0..r).filter(|&k| k != a && k != b).map(|k| self.legs[k]).collect();
        let dims: Vec<usize> = self.legs.iter().map(|(j, _)| j.dim() as usize).collect();
        let mut strides = vec![1usize; r];
        for k in (0..r.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        let size: usize = legs.iter().map(|(j, _)| j.dim() as usize).product();
        let free: Vec<usize> = (0..r).filter(|&k| k != a && k != b).collect();
        let mut data = Vec::with_capacity(size);
        for idx in 0..size {
            let mut rest = idx;
            let mut base = 0;
            for &k in free.iter().rev() {
                base += (rest % dims[k]) * strides[k];
                rest /= dims[k];
            }
            let mut acc = RadicalNumber::zero();
            for p in 0..d {
                let v = &self.data[base + p * (strides[a] + strides[b])];
                if v.is_zero() {
                    continue;
                }
                // j - m = p for the p-th index
                acc = if p % 2 == 1 { acc - v } else { acc + v };
            }
            data.push(acc);
        }
        Ok(YutsisTensor { legs, data })
    }

    /// Matrix form: rows run over outgoing legs, columns over ingoing legs,
    /// each in leg order with the later leg varying fastest.
    pub fn to_matrix(&self) -> Matrix<RadicalNumber> {
        let outs: Vec<usize> =
            (0..self.legs.len()).filter(|&k| self.legs[k].1 == Orientation::Outgoing).collect();
        let ins: Vec<usize> =
            (0..self.legs.len()).filter(|&k| self.legs[k].1 == Orientation::Ingoing).collect();
        let dim = |ks: &[usize]| -> usize {
            ks.iter().map(|&k| self.legs[k].0.dim() as usize).product()
        };
        let (nr, nc) = (dim(&outs), dim(&ins));
        let split = |mut x: usize, ks: &[usize], pos: &mut [usize]| {
            for &k in ks.iter().rev() {
                let d = self.legs[k].0.dim() as usize;
                pos[k] = x % d;
                x /= d;
            }
        };
        let mut pos = vec![0usize; self.legs.len()];
        Matrix::from_fn(nr, nc, |r, c| {
            split(r, &outs, &mut pos);
            split(c, &ins, &mut pos);
            self.at(&pos).clone()
        })
    }
}

/// Matrix of a 3jm node: outgoing legs index rows, ingoing legs columns.
pub fn yutsis_matrix_3(spec: &VertexSpec) -> Result<Matrix<RadicalNumber>, OracleError> {
    Ok(YutsisTensor::vertex(spec)?.to_matrix())
}

/// Matrix of the 4jm node made of `(j1 j2 j)` glued to `(j j3 j4)` along an
/// internal wire pointing from the first node to the second.
pub fn yutsis_matrix_4(
    js: [HalfInteger; 4],
    j: HalfInteger,
    orientations: [Orientation; 4],
) -> Result<Matrix<RadicalNumber>, OracleError> {
    let a = YutsisTensor::vertex(&VertexSpec::new(
        [js[0], js[1], j],
        [orientations[0], orientations[1], Orientation::Outgoing],
    ))?;
    let b = YutsisTensor::vertex(&VertexSpec::new(
        [j, js[2], js[3]],
        [Orientation::Ingoing, orientations[2], orientations[3]],
    ))?;
    Ok(a.glue(2, &b, 0)?.to_matrix())
}

/// `P_j`: rows `|j, m⟩` for decreasing `m`, columns the `2^{2j}` qubit basis
/// states (qubit 0 most significant).
pub fn symmetric_isometry(j: HalfInteger) -> Matrix<RadicalNumber> {
    let n = j.twice() as usize;
    let nf = factorial(n as u64);
    let coeff: Vec<RadicalNumber> = (0..=n)
        .map(|k| {
            let num = factorial(k as u64) * factorial((n - k) as u64);
            sqrt_rational(&BigRational::new(num.into(), nf.clone().into())).unwrap()
        })
        .collect();
    Matrix::from_fn(n + 1, 1 << n, |k, b| {
        if (b as u64).count_ones() as usize == k {
            coeff[k].clone()
        } else {
            RadicalNumber::zero()
        }
    })
}

/// Trace of a single spin-`j` wire, evaluated by closing the two-legged
/// strand obtained from a node with a spin-0 leg.
pub fn invariant_loop(j: HalfInteger) -> SymbolValueResult {
    let spec = VertexSpec::new(
        [j, j, HalfInteger::ZERO],
        [Orientation::Outgoing, Orientation::Ingoing, Orientation::Outgoing],
    );
    // the dashed strand carries a factor 1/√(2j+1)
    let strand = YutsisTensor::vertex(&spec)?
        .scale(&RadicalNumber::sqrt_int(j.dim() as u64))
        .drop_spin0(2)?;
    let closed = strand.self_glue(0, 1)?;
    Ok(closed.value().cloned().unwrap_or_default())
}

type SymbolValueResult = Result<RadicalNumber, OracleError>;

/// The Θ-graph: an all-outgoing node read `(j1, j2, j3)` glued to an
/// all-ingoing node, which read clockwise in the plane sees `(j1, j3, j2)`.
pub fn invariant_theta(j1: HalfInteger, j2: HalfInteger, j3: HalfInteger) -> SymbolValueResult {
    let a = YutsisTensor::vertex(&VertexSpec::all([j1, j2, j3], Orientation::Outgoing))?;
    let b = YutsisTensor::vertex(&VertexSpec::all([j1, j3, j2], Orientation::Ingoing))?;
    // legs after the first gluing: a.j2, a.j3, b.j3, b.j2
    let t = a.glue(0, &b, 0)?.self_glue(0, 3)?.self_glue(0, 1)?;
    Ok(t.value().cloned().unwrap_or_default())
}
