//! Exact identities the coupling coefficients must satisfy, packaged as
//! reports so they can be run from the command line.

use num_traits::{One, Zero};
use serde::Serialize;

use super::symbols::{w3jm, w6j};
use super::triad_ok;
use crate::exact::{HalfInteger, RadicalNumber};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl PropertyReport {
    fn new(name: &'static str) -> Self {
        PropertyReport { name, checked: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        }
    }

    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

fn spins_upto(max_twice: u32) -> Vec<HalfInteger> {
    (0..=max_twice).map(HalfInteger::from_twice).collect()
}

fn odd_sum(js: &[HalfInteger]) -> bool {
    (js.iter().map(|j| j.twice()).sum::<u32>() / 2) % 2 == 1
}

fn neg_if(odd: bool, v: &RadicalNumber) -> RadicalNumber {
    if odd {
        -v.clone()
    } else {
        v.clone()
    }
}

/// Cyclic invariance, sign `(-1)^(j1+j2+j3)` under odd permutations and
/// under `m → -m`, and the selection rules, for every spin up to
/// `max_twice / 2` and every magnetic index.
pub fn three_j_symmetries(max_twice: u32) -> PropertyReport {
    let mut rep = PropertyReport::new("3j symmetries");
    let js = spins_upto(max_twice);
    for &j1 in &js {
        for &j2 in &js {
            for &j3 in &js {
                let odd = odd_sum(&[j1, j2, j3]);
                for m1 in j1.ms() {
                    for m2 in j2.ms() {
                        for m3 in j3.ms() {
                            let v = w3jm([j1, j2, j3], [m1, m2, m3]);
                            let at = || format!("({j1} {j2} {j3}; {m1} {m2} {m3})");
                            rep.check(w3jm([j2, j3, j1], [m2, m3, m1]) == v, || format!("cyclic {}", at()));
                            rep.check(w3jm([j2, j1, j3], [m2, m1, m3]) == neg_if(odd, &v), || format!("swap 12 {}", at()));
                            rep.check(w3jm([j3, j2, j1], [m3, m2, m1]) == neg_if(odd, &v), || format!("swap 13 {}", at()));
                            rep.check(
                                w3jm([j1, j2, j3], [m1.neg(), m2.neg(), m3.neg()]) == neg_if(odd, &v),
                                || format!("m reversal {}", at()),
                            );
                            if m1.twice() + m2.twice() + m3.twice() != 0 || !triad_ok(j1, j2, j3) {
                                rep.check(v.is_zero(), || format!("selection {}", at()));
                            }
                        }
                    }
                }
            }
        }
    }
    rep
}

/// `(2j3+1) Σ_{m1 m2} (j1 j2 j3; m1 m2 m3)(j1 j2 k3; m1 m2 n3) = δ δ` for
/// spins up to `max_twice / 2`.
pub fn three_j_orthogonality(max_twice: u32) -> PropertyReport {
    let mut rep = PropertyReport::new("3j orthogonality");
    let js = spins_upto(max_twice);
    for &j1 in &js {
        for &j2 in &js {
            for &j3 in &js {
                for &k3 in &js {
                    for m3 in j3.ms() {
                        for n3 in k3.ms() {
                            let mut acc = RadicalNumber::zero();
                            for m1 in j1.ms() {
                                for m2 in j2.ms() {
                                    let a = w3jm([j1, j2, j3], [m1, m2, m3]);
                                    if a.is_zero() {
                                        continue;
                                    }
                                    acc = acc + &a * &w3jm([j1, j2, k3], [m1, m2, n3]);
                                }
                            }
                            acc = &acc * &RadicalNumber::from_int(j3.dim() as i64);
                            let want = if j3 == k3 && m3 == n3 && triad_ok(j1, j2, j3) {
                                RadicalNumber::one()
                            } else {
                                RadicalNumber::zero()
                            };
                            rep.check(acc == want, || format!("{j1} {j2} {j3}/{k3} {m3}/{n3}: {acc}"));
                        }
                    }
                }
            }
        }
    }
    rep
}

pub fn admissible_6j(s: [HalfInteger; 6]) -> bool {
    let [j1, j2, j3, j4, j5, j6] = s;
    triad_ok(j1, j2, j3) && triad_ok(j1, j5, j6) && triad_ok(j4, j2, j6) && triad_ok(j3, j4, j5)
}

/// All admissible sextuples with spins up to `max_twice / 2`.
pub fn admissible_sextuples(max_twice: u32) -> Vec<[HalfInteger; 6]> {
    let js = spins_upto(max_twice);
    let n = js.len();
    (0..n.pow(6))
        .map(|mut x| {
            let mut s = [HalfInteger::ZERO; 6];
            for k in s.iter_mut() {
                *k = js[x % n];
                x /= n;
            }
            s
        })
        .filter(|&s| admissible_6j(s))
        .collect()
}

/// Invariance of `{j1 j2 j3; j4 j5 j6}` under the 24 symmetries of the
/// tetrahedron, checked through a generating set.
pub fn six_j_tetrahedral(cases: &[[HalfInteger; 6]]) -> PropertyReport {
    let mut rep = PropertyReport::new("6j tetrahedral symmetry");
    for &s in cases {
        let [a, b, c, d, e, f] = s;
        let v = w6j(s);
        for t in [
            [b, a, c, e, d, f],
            [a, c, b, d, f, e],
            [c, b, a, f, e, d],
            [b, c, a, e, f, d],
            [d, e, c, a, b, f],
            [a, e, f, d, b, c],
            [d, b, f, a, e, c],
        ] {
            rep.check(w6j(t) == v, || format!("{s:?} vs {t:?}"));
        }
    }
    rep
}
