//! Integer primitives: problem instances, gcd profiles, 2-adic valuation and
//! exact binomial coefficients.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A modulus together with the weights `k_1, ..., k_t`, each reduced into `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct Instance {
    m: u32,
    weights: Vec<u32>,
}

#[derive(Deserialize)]
struct RawInstance {
    m: i64,
    weights: Vec<i64>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        canonicalize(raw.m, &raw.weights)
    }
}

impl Instance {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Number of weights `t`.
    pub fn arity(&self) -> usize {
        self.weights.len()
    }

    /// The two weights of a binary instance.
    pub fn pair(&self) -> Result<(u32, u32)> {
        match self.weights.as_slice() {
            &[k1, k2] => Ok((k1, k2)),
            other => Err(Error::Arity {
                expected: 2,
                found: other.len(),
            }),
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} k=[", self.m)?;
        for (i, k) in self.weights.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str("]")
    }
}

/// Builds an [`Instance`], reducing every raw weight by the nonnegative
/// remainder modulo `m`.
pub fn canonicalize(m: i64, raw_weights: &[i64]) -> Result<Instance> {
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    let m = u32::try_from(m).map_err(|_| Error::InvalidModulus(m))?;
    if raw_weights.is_empty() {
        return Err(Error::EmptyWeights);
    }
    let weights = raw_weights
        .iter()
        .map(|&k| k.rem_euclid(i64::from(m)) as u32)
        .collect();
    Ok(Instance { m, weights })
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(d1, d2, d3, d)` with `d1 = (k1, m)`, `d2 = (k2, m)`, `d3 = (d1, d2)` and
/// `d = d1 d2 / d3^2`. A weight congruent to zero has `d_i = m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GcdProfile {
    pub d1: u32,
    pub d2: u32,
    pub d3: u32,
    pub d: u32,
}

impl GcdProfile {
    pub fn new(m: u32, k1: u32, k2: u32) -> Self {
        let m64 = u64::from(m);
        let d1 = gcd(u64::from(k1) % m64, m64);
        let d2 = gcd(u64::from(k2) % m64, m64);
        let d3 = gcd(d1, d2);
        // (d1/d3) and (d2/d3) are coprime divisors of m, so their product divides m.
        let d = (d1 / d3) * (d2 / d3);
        assert_eq!(m64 % d, 0, "gcd profile modulus {d} does not divide {m}");
        Self {
            d1: d1 as u32,
            d2: d2 as u32,
            d3: d3 as u32,
            d: d as u32,
        }
    }

    /// `d1 / d3`.
    pub fn d1_reduced(&self) -> u32 {
        self.d1 / self.d3
    }

    /// `d2 / d3`.
    pub fn d2_reduced(&self) -> u32 {
        self.d2 / self.d3
    }
}

pub fn gcd_profile(inst: &Instance) -> Result<GcdProfile> {
    let (k1, k2) = inst.pair()?;
    Ok(GcdProfile::new(inst.m, k1, k2))
}

/// 2-adic valuation, with zero mapped to [`Valuation::Infinite`].
///
/// The derived ordering places every finite value below `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

pub fn v2(k: u64) -> Valuation {
    if k == 0 {
        Valuation::Infinite
    } else {
        Valuation::Finite(k.trailing_zeros())
    }
}

/// Exact `C(n, k)`, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1); split the division through the gcd
        // so the intermediate product stays as small as possible.
        let num = u128::from(n - i);
        let den = u128::from(i + 1);
        let g = gcd128(acc, den);
        let (acc_r, den_r) = (acc / g, den / g);
        let num_r = num / den_r;
        debug_assert_eq!(num % den_r, 0);
        acc = acc_r.checked_mul(num_r)?;
    }
    Some(acc)
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonicalize_examples() {
        assert_eq!(canonicalize(4, &[1, 2]).unwrap().weights(), &[1, 2]);
        assert_eq!(canonicalize(4, &[-3, 6]).unwrap().weights(), &[1, 2]);
        assert_eq!(canonicalize(8, &[8, 1]).unwrap().weights(), &[0, 1]);
    }

    #[test]
    fn canonicalize_rejects_bad_input() {
        assert_eq!(canonicalize(1, &[1]), Err(Error::InvalidModulus(1)));
        assert_eq!(canonicalize(-5, &[1]), Err(Error::InvalidModulus(-5)));
        assert_eq!(canonicalize(4, &[]), Err(Error::EmptyWeights));
    }

    #[test]
    fn gcd_profile_examples() {
        let p = gcd_profile(&canonicalize(12, &[4, 6]).unwrap()).unwrap();
        assert_eq!(
            p,
            GcdProfile {
                d1: 4,
                d2: 6,
                d3: 2,
                d: 6
            }
        );
        let p = gcd_profile(&canonicalize(4, &[1, 2]).unwrap()).unwrap();
        assert_eq!(
            p,
            GcdProfile {
                d1: 1,
                d2: 2,
                d3: 1,
                d: 2
            }
        );
        let p = gcd_profile(&canonicalize(8, &[0, 1]).unwrap()).unwrap();
        assert_eq!(
            p,
            GcdProfile {
                d1: 8,
                d2: 1,
                d3: 1,
                d: 8
            }
        );
    }

    #[test]
    fn gcd_profile_requires_two_weights() {
        let inst = canonicalize(6, &[1, 1, 1]).unwrap();
        assert_eq!(
            gcd_profile(&inst),
            Err(Error::Arity {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn valuation() {
        assert_eq!(v2(12), Valuation::Finite(2));
        assert_eq!(v2(1), Valuation::Finite(0));
        assert_eq!(v2(0), Valuation::Infinite);
        assert!(Valuation::Finite(u32::MAX) < Valuation::Infinite);
    }

    #[test]
    fn binomial_small_values() {
        // Pascal's triangle as the reference.
        let mut row = vec![1u128];
        for n in 0..=70u64 {
            for (k, &c) in row.iter().enumerate() {
                assert_eq!(binomial(n, k as u64), Some(c), "C({n},{k})");
            }
            assert_eq!(binomial(n, n + 1), Some(0));
            let mut next = vec![1u128; row.len() + 1];
            for k in 1..row.len() {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
        }
        assert_eq!(binomial(200, 100), None);
    }

    #[test]
    fn instance_serde_canonicalizes() {
        let inst: Instance = serde_json::from_str(r#"{"m":4,"weights":[-3,6]}"#).unwrap();
        assert_eq!(inst.weights(), &[1, 2]);
        assert!(serde_json::from_str::<Instance>(r#"{"m":1,"weights":[1]}"#).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn canonical_weights_keep_gcd_profile(m in 2i64..500, k1 in -10_000i64..10_000, k2 in -10_000i64..10_000) {
                let inst = canonicalize(m, &[k1, k2]).unwrap();
                let p = gcd_profile(&inst).unwrap();
                let raw_d1 = gcd(k1.unsigned_abs(), m as u64);
                let raw_d2 = gcd(k2.unsigned_abs(), m as u64);
                prop_assert_eq!(u64::from(p.d1), raw_d1);
                prop_assert_eq!(u64::from(p.d2), raw_d2);
                prop_assert_eq!(m as u32 % p.d, 0);
                prop_assert_eq!(p.d1 % p.d3, 0);
                prop_assert_eq!(p.d2 % p.d3, 0);
                prop_assert!(inst.weights().iter().all(|&w| (w as i64) < m));
            }

            #[test]
            fn v2_of_double(k in 1u64..(1 << 40)) {
                match (v2(2 * k), v2(k)) {
                    (Valuation::Finite(a), Valuation::Finite(b)) => prop_assert_eq!(a, b + 1),
                    other => prop_assert!(false, "unexpected {:?}", other),
                }
            }
        }
    }
}
