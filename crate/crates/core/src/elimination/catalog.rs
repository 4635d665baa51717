//! Parameter families with a known abelian difference set.

use serde::{Deserialize, Serialize};

use crate::arith::{factor, isqrt, pow_mod};
use crate::structure::ParamSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `k = v − 1`.
    Trivial,
    /// Hyperplanes of `PG(d, q)`.
    Singer { q: u128, d: u32 },
    /// Quadratic residues of `GF(q)`, `q ≡ 3 (mod 4)`.
    Paley { q: u128 },
    /// `GF(q) × GF(q + 2)` with both prime powers.
    TwinPrimePower { q: u128 },
    /// Menon–Hadamard parameters `(4u², 2u² − u, u² − u)` with `u = 2^a 3^b`.
    Menon { u: u128 },
    /// A single set listed explicitly.
    Sporadic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Construction {
    pub family: Family,
    /// Invariant factors of one group known to contain such a set.
    pub group: Option<Vec<u128>>,
}

impl Construction {
    pub fn trivial() -> Self {
        Construction {
            family: Family::Trivial,
            group: None,
        }
    }
}

/// `(16, 6, 2)` in `Z_2^4`.
const SIXTEEN: [[u128; 4]; 6] = [
    [0, 0, 0, 0],
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [1, 1, 1, 1],
];

/// Biquadratic residues modulo 37.
const THIRTY_SEVEN: [u128; 9] = [1, 7, 9, 10, 12, 16, 26, 33, 34];

/// Look up a construction for normalized parameters (`k <= v/2`).
pub fn known_construction(params: &ParamSet) -> Option<Construction> {
    let (v, k, lambda) = (params.v(), params.k(), params.lambda());
    if params.is_trivial() {
        return Some(Construction::trivial());
    }
    if let Some((q, d)) = singer(params) {
        return Some(Construction {
            family: Family::Singer { q, d },
            group: Some(vec![v]),
        });
    }
    if v % 4 == 3 && k == (v - 1) / 2 && lambda == (v - 3) / 4 {
        let f = factor(v).ok()?;
        if f.is_prime_power() {
            let (p, e) = f.factors()[0];
            return Some(Construction {
                family: Family::Paley { q: v },
                group: Some(vec![p; e as usize]),
            });
        }
    }
    if v % 2 == 1 && k == (v - 1) / 2 && 4 * lambda + 3 == v {
        let r = isqrt(v + 1);
        if r * r == v + 1 && r >= 3 {
            let q = r - 1;
            let pp = |x: u128| factor(x).is_ok_and(|f| f.is_prime_power());
            if pp(q) && pp(q + 2) {
                return Some(Construction {
                    family: Family::TwinPrimePower { q },
                    group: None,
                });
            }
        }
    }
    if v % 4 == 0 {
        let u = isqrt(v / 4);
        if 4 * u * u == v && k == 2 * u * u - u && lambda == u * u - u && u > 1 {
            let mut w = u;
            while w % 2 == 0 {
                w /= 2;
            }
            while w % 3 == 0 {
                w /= 3;
            }
            if w == 1 {
                let group = (u == 2).then(|| vec![2, 2, 2, 2]);
                return Some(Construction {
                    family: Family::Menon { u },
                    group,
                });
            }
        }
    }
    if (v, k, lambda) == (37, 9, 2) {
        return Some(Construction {
            family: Family::Sporadic,
            group: Some(vec![37]),
        });
    }
    None
}

/// `(q, d)` with `v = (q^{d+1} − 1)/(q − 1)`, `k = (q^d − 1)/(q − 1)`,
/// `λ = (q^{d−1} − 1)/(q − 1)` and `q` a prime power.
fn singer(params: &ParamSet) -> Option<(u128, u32)> {
    let f = factor(params.n()).ok()?;
    if !f.is_prime_power() {
        return None;
    }
    let (r, j) = f.factors()[0];
    for i in 1..=j {
        if j % i != 0 {
            continue;
        }
        let q = r.checked_pow(i)?;
        let d = j / i + 1;
        let geo = |m: u32| -> Option<u128> { Some((q.checked_pow(m)? - 1) / (q - 1)) };
        if geo(d + 1) == Some(params.v()) && geo(d) == Some(params.k()) && geo(d - 1) == Some(params.lambda()) {
            return Some((q, d));
        }
    }
    None
}

/// An explicit difference set for a few small catalog entries, as element
/// tuples over the returned invariant factors.
pub fn sample_set(params: &ParamSet) -> Option<(Vec<u128>, Vec<Vec<u128>>)> {
    let (v, k, lambda) = (params.v(), params.k(), params.lambda());
    let cyclic = |xs: &[u128]| Some((vec![v], xs.iter().map(|&x| vec![x]).collect()));
    match (v, k, lambda) {
        (7, 3, 1) => cyclic(&[1, 2, 4]),
        (13, 4, 1) => cyclic(&[0, 1, 3, 9]),
        (21, 5, 1) => cyclic(&[3, 6, 7, 12, 14]),
        (15, 7, 3) => cyclic(&[0, 1, 2, 4, 5, 8, 10]),
        (16, 6, 2) => Some((vec![2, 2, 2, 2], SIXTEEN.iter().map(|x| x.to_vec()).collect())),
        (37, 9, 2) => cyclic(&THIRTY_SEVEN),
        _ => {
            let Some(Construction {
                family: Family::Paley { q },
                ..
            }) = known_construction(params)
            else {
                return None;
            };
            if !crate::arith::is_prime(q) {
                return None;
            }
            let residues: Vec<u128> = (1..q).filter(|&x| pow_mod(x, (q - 1) / 2, q) == 1).collect();
            cyclic(&residues)
        }
    }
}
