//! Exact dense tensors: integral Z[i][√2] entries under a common scale,
//! stored at the narrowest integer width that holds them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::dense::{Dense, Label};
use super::ring::{Elem, Int, Zc};
use crate::exact::ExactScalar;

#[derive(Clone, Debug)]
pub(crate) enum ExactData {
    Small(Dense<Zc<i64>>),
    Wide(Dense<Zc<i128>>),
    Big(Dense<Zc<BigInt>>),
}

#[derive(Clone, Debug)]
pub(crate) struct ExactDense {
    pub data: ExactData,
    pub scale: ExactScalar,
}

fn widen_i128(d: &Dense<Zc<i64>>) -> Dense<Zc<i128>> {
    Dense { labels: d.labels.clone(), data: d.data.iter().map(|z| z.widen(|x| *x as i128)).collect() }
}

fn widen_big<I: Int>(d: &Dense<Zc<I>>) -> Dense<Zc<BigInt>> {
    Dense { labels: d.labels.clone(), data: d.data.iter().map(|z| z.to_big()).collect() }
}

/// Divides out the common content and powers of √2, returning the factor removed.
fn normalize<I: Int>(d: &mut Dense<Zc<I>>) -> ExactScalar {
    let mut g = I::zero();
    for z in &d.data {
        g = g.gcd(&z.content());
        if g.is_one() {
            break;
        }
    }
    let mut factor = ExactScalar::one();
    if g.is_zero() {
        return factor;
    }
    if !g.is_one() {
        for z in d.data.iter_mut() {
            *z = z.div_exact(&g);
        }
        factor = ExactScalar::from_rational(BigRational::from_integer(g.to_big()));
    }
    let mut k = 0;
    while d.data.iter().all(|z| z.sqrt2_divisible()) {
        for z in d.data.iter_mut() {
            *z = z.div_sqrt2();
        }
        k += 1;
    }
    if k > 0 {
        factor = &factor * &ExactScalar::sqrt2_pow(k);
    }
    factor
}

impl ExactData {
    fn level(&self) -> u8 {
        match self {
            ExactData::Small(_) => 0,
            ExactData::Wide(_) => 1,
            ExactData::Big(_) => 2,
        }
    }

    fn as_wide(&self) -> Dense<Zc<i128>> {
        match self {
            ExactData::Small(d) => widen_i128(d),
            ExactData::Wide(d) => d.clone(),
            ExactData::Big(_) => unreachable!("narrowing big data"),
        }
    }

    fn as_big(&self) -> Dense<Zc<BigInt>> {
        match self {
            ExactData::Small(d) => widen_big(d),
            ExactData::Wide(d) => widen_big(d),
            ExactData::Big(d) => d.clone(),
        }
    }

    /// Narrowest storage for the given entries.
    fn demoted(self) -> ExactData {
        match self {
            ExactData::Small(_) => self,
            ExactData::Wide(d) => {
                let fits = d.data.iter().all(|z| {
                    [z.a, z.b, z.c, z.d].iter().all(|x| i64::try_from(*x).is_ok())
                });
                if fits {
                    ExactData::Small(Dense {
                        labels: d.labels,
                        data: d.data.iter().map(|z| z.widen(|x| *x as i64)).collect(),
                    })
                } else {
                    ExactData::Wide(d)
                }
            }
            ExactData::Big(d) => {
                if let Some(data) = d.data.iter().map(|z| z.to_i64()).collect::<Option<Vec<_>>>() {
                    ExactData::Small(Dense { labels: d.labels, data })
                } else if let Some(data) = d.data.iter().map(|z| z.to_i128()).collect::<Option<Vec<_>>>() {
                    ExactData::Wide(Dense { labels: d.labels, data })
                } else {
                    ExactData::Big(d)
                }
            }
        }
    }

    fn normalized(mut self) -> (ExactData, ExactScalar) {
        let f = match &mut self {
            ExactData::Small(d) => normalize(d),
            ExactData::Wide(d) => normalize(d),
            ExactData::Big(d) => normalize(d),
        };
        (self.demoted(), f)
    }

    fn permuted(&self, labels: &[Label]) -> ExactData {
        match self {
            ExactData::Small(d) => ExactData::Small(d.permuted(labels)),
            ExactData::Wide(d) => ExactData::Wide(d.permuted(labels)),
            ExactData::Big(d) => ExactData::Big(d.permuted(labels)),
        }
    }

    fn trace_repeated(self) -> ExactData {
        match self {
            ExactData::Small(d) => match d.clone().trace_repeated() {
                Some(t) => ExactData::Small(t),
                None => ExactData::Big(widen_big(&d)).trace_repeated(),
            },
            ExactData::Wide(d) => match d.clone().trace_repeated() {
                Some(t) => ExactData::Wide(t),
                None => ExactData::Big(widen_big(&d)).trace_repeated(),
            },
            ExactData::Big(d) => ExactData::Big(d.trace_repeated().expect("bigint never overflows")),
        }
    }

    pub fn entries_big(&self) -> Vec<Zc<BigInt>> {
        self.as_big().data
    }
}

impl ExactDense {
    pub fn new(labels: Vec<Label>, data: Vec<Zc<i64>>, scale: ExactScalar) -> Self {
        let data = ExactData::Small(Dense { labels, data }).trace_repeated();
        ExactDense { data, scale }
    }

    pub fn from_big(labels: Vec<Label>, data: Vec<Zc<BigInt>>, scale: ExactScalar) -> Self {
        let data = ExactData::Big(Dense { labels, data }).demoted().trace_repeated();
        ExactDense { data, scale }
    }

    pub fn contract(&self, other: &ExactDense) -> ExactDense {
        let mut level = self.data.level().max(other.data.level());
        let data = loop {
            let r = match level {
                0 => match (&self.data, &other.data) {
                    (ExactData::Small(a), ExactData::Small(b)) => a.contract(b).map(ExactData::Small),
                    _ => unreachable!("level 0 with wide operand"),
                },
                1 => self.data.as_wide().contract(&other.data.as_wide()).map(ExactData::Wide),
                _ => Some(ExactData::Big(
                    self.data.as_big().contract(&other.data.as_big()).expect("bigint never overflows"),
                )),
            };
            match r {
                Some(d) => break d,
                None => level += 1,
            }
        };
        let (data, f) = data.normalized();
        ExactDense { data, scale: &(&self.scale * &other.scale) * &f }
    }

    pub fn permuted(&self, labels: &[Label]) -> ExactDense {
        ExactDense { data: self.data.permuted(labels), scale: self.scale.clone() }
    }

    /// Entries as exact scalars with the scale folded in.
    pub fn to_scalars(&self, extra: &ExactScalar) -> Vec<ExactScalar> {
        let s = &self.scale * extra;
        let r2 = ExactScalar::sqrt2();
        self.data
            .entries_big()
            .into_iter()
            .map(|z| {
                if z.is_zero() {
                    return ExactScalar::default();
                }
                let q = |x: &BigInt| ExactScalar::from_rational(BigRational::from_integer(x.clone()));
                let re = &q(&z.a) + &(&q(&z.b) * &r2);
                let im = &q(&z.c) + &(&q(&z.d) * &r2);
                &(&re + &(&im * &ExactScalar::i())) * &s
            })
            .collect()
    }
}
