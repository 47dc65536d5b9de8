use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{triad_ok, OracleError};
use crate::exact::{factorial, sqrt_rational, HalfInteger, MagneticIndex, RadicalNumber};

/// Exact value of a coupling coefficient or invariant.
pub type SymbolValue = RadicalNumber;

/// `n!` for an argument given in doubled units, or `None` when the argument
/// is negative or not an integer.
fn fact2(twice: i64) -> Option<BigUint> {
    if twice < 0 || twice % 2 != 0 {
        None
    } else {
        Some(factorial((twice / 2) as u64))
    }
}

/// `(-1)^(x/2)` for an even doubled exponent.
fn sign2(twice: i64) -> i64 {
    debug_assert!(twice % 2 == 0);
    if (twice / 2).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn check_m(j: HalfInteger, m: MagneticIndex) -> Result<(), OracleError> {
    if m.valid_for(j) {
        Ok(())
    } else {
        Err(OracleError::Malformed { j, m })
    }
}

/// `1/√n` as a radical.
fn inv_sqrt(n: u64) -> RadicalNumber {
    RadicalNumber::term(BigRational::new(BigInt::one(), BigInt::from(n)), n)
}

/// Clebsch-Gordan coefficient `⟨j1 m1; j2 m2 | j m⟩`.
///
/// Zero when `m ≠ m1 + m2` or the triad `(j1, j2, j)` is not admissible.
pub fn cg(
    j1: HalfInteger,
    m1: MagneticIndex,
    j2: HalfInteger,
    m2: MagneticIndex,
    j: HalfInteger,
    m: MagneticIndex,
) -> Result<SymbolValue, OracleError> {
    check_m(j1, m1)?;
    check_m(j2, m2)?;
    check_m(j, m)?;
    if m.twice() != m1.twice() + m2.twice() || !triad_ok(j1, j2, j) {
        return Ok(RadicalNumber::zero());
    }
    let (a, b, c) = (j1.twice() as i64, j2.twice() as i64, j.twice() as i64);
    let (ma, mb, mc) = (m1.twice() as i64, m2.twice() as i64, m.twice() as i64);

    let num = [c + mc, c - mc, -c + a + b, c - a + b, c + a - b];
    let den = [c + a + b + 2, a + ma, a - ma, b + mb, b - mb];
    let mut n = BigUint::one();
    for x in num {
        n *= fact2(x).expect("admissible triad");
    }
    let mut d = BigUint::one();
    for x in den {
        d *= fact2(x).expect("valid magnetic index");
    }
    let pref = sqrt_rational(&BigRational::new(n.into(), d.into())).expect("positive");

    // k runs over every integer where all factorial arguments are >= 0
    let mut sum = BigRational::zero();
    for k in 0..=((c + mc) / 2) {
        let k2 = 2 * k;
        let top = [c + b + ma - k2, a - ma + k2];
        let bot = [c - a + b - k2, c + mc - k2, k2, k2 + a - b - mc];
        if top.iter().chain(bot.iter()).any(|&x| x < 0) {
            continue;
        }
        let mut t = BigUint::one();
        for x in top {
            t *= fact2(x).unwrap();
        }
        let mut u = BigUint::one();
        for x in bot {
            u *= fact2(x).unwrap();
        }
        let s = sign2(k2 + b + mb);
        sum += BigRational::new(BigInt::from(s) * BigInt::from(t), u.into());
    }
    let dim = RadicalNumber::sqrt_int(c as u64 + 1);
    Ok(&(&dim * &pref) * &RadicalNumber::from_rational(sum))
}

type Key3 = [i32; 6];

fn cache3() -> &'static RwLock<HashMap<Key3, RadicalNumber>> {
    static CACHE: OnceLock<RwLock<HashMap<Key3, RadicalNumber>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Wigner 3jm symbol. Zero outside its support, including invalid `m`.
pub fn w3jm(js: [HalfInteger; 3], ms: [MagneticIndex; 3]) -> SymbolValue {
    if (0..3).any(|i| !ms[i].valid_for(js[i])) {
        return RadicalNumber::zero();
    }
    let key = [
        js[0].twice() as i32,
        js[1].twice() as i32,
        js[2].twice() as i32,
        ms[0].twice(),
        ms[1].twice(),
        ms[2].twice(),
    ];
    if let Some(v) = cache3().read().unwrap().get(&key) {
        return v.clone();
    }
    let v = w3jm_uncached(js, ms);
    cache3().write().unwrap().entry(key).or_insert_with(|| v.clone());
    v
}

fn w3jm_uncached(js: [HalfInteger; 3], ms: [MagneticIndex; 3]) -> RadicalNumber {
    if !triad_ok(js[0], js[1], js[2]) {
        return RadicalNumber::zero();
    }
    let c = cg(js[0], ms[0], js[1], ms[1], js[2], ms[2].neg()).expect("validated");
    if c.is_zero() {
        return c;
    }
    let e = js[0].twice() as i64 - js[1].twice() as i64 - ms[2].twice() as i64;
    let v = &c * &inv_sqrt(js[2].dim() as u64);
    if sign2(e) < 0 {
        -v
    } else {
        v
    }
}

/// Wigner 4jm symbol with intermediate spin `j`, coupling `(j1 j2)` and
/// `(j3 j4)`.
pub fn w4jm(js: [HalfInteger; 4], ms: [MagneticIndex; 4], j: HalfInteger) -> SymbolValue {
    let mut acc = RadicalNumber::zero();
    for m in j.ms() {
        let a = w3jm([js[0], js[1], j], [ms[0], ms[1], m]);
        if a.is_zero() {
            continue;
        }
        let b = w3jm([j, js[2], js[3]], [m.neg(), ms[2], ms[3]]);
        if b.is_zero() {
            continue;
        }
        let t = &a * &b;
        let e = j.twice() as i64 - m.twice() as i64;
        acc = if sign2(e) < 0 { acc - t } else { acc + t };
    }
    acc
}

/// The 6j symbol `{j1 j2 j3; j4 j5 j6}` as a sum over all magnetic indices
/// of four 3jm symbols.
pub fn w6j(js: [HalfInteger; 6]) -> SymbolValue {
    let [j1, j2, j3, j4, j5, j6] = js;
    let jsum: i64 = js.iter().map(|j| j.twice() as i64).sum();
    let mut acc = RadicalNumber::zero();
    for m1 in j1.ms() {
        for m2 in j2.ms() {
            for m3 in j3.ms() {
                let a = w3jm([j1, j2, j3], [m1.neg(), m2.neg(), m3.neg()]);
                if a.is_zero() {
                    continue;
                }
                for m4 in j4.ms() {
                    for m5 in j5.ms() {
                        for m6 in j6.ms() {
                            let b = w3jm([j1, j5, j6], [m1, m5.neg(), m6]);
                            if b.is_zero() {
                                continue;
                            }
                            let c = w3jm([j4, j2, j6], [m4, m2, m6.neg()]);
                            if c.is_zero() {
                                continue;
                            }
                            let d = w3jm([j3, j4, j5], [m3, m4.neg(), m5]);
                            if d.is_zero() {
                                continue;
                            }
                            let msum: i64 = [m1, m2, m3, m4, m5, m6]
                                .iter()
                                .map(|m| m.twice() as i64)
                                .sum();
                            let t = &(&a * &b) * &(&c * &d);
                            acc = if sign2(jsum - msum) < 0 { acc - t } else { acc + t };
                        }
                    }
                }
            }
        }
    }
    acc
}
