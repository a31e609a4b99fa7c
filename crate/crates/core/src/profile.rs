//! Representation profiles `n ↦ #{(a_1, ..., a_t) ∈ A^t : k_1 a_1 + ... + k_t a_t ≡ n (mod m)}`.
//!
//! [`rep_naive`] walks every ordered tuple; [`rep_convolution`] pushes the
//! indicator of `A` forward under each weight and convolves the results.
//! Both are exact and must agree entry for entry.

use serde::{Deserialize, Serialize};

use crate::arith::Instance;
use crate::convolution::cyclic_convolve;
use crate::error::{Error, Result};
use crate::set::ResidueSet;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RepProfile {
    pub m: u32,
    pub counts: Vec<u64>,
}

impl RepProfile {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// `counts[j] = #{a ∈ A : k a ≡ j (mod m)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedIndicator {
    pub m: u32,
    pub counts: Vec<u64>,
}

pub fn weighted_indicator(set: &ResidueSet, k: u32) -> WeightedIndicator {
    let m = set.m();
    let mut counts = vec![0u64; m as usize];
    for a in set.iter() {
        counts[(u64::from(k) * u64::from(a) % u64::from(m)) as usize] += 1;
    }
    WeightedIndicator { m, counts }
}

fn check_modulus(set: &ResidueSet, inst: &Instance) -> Result<()> {
    if set.m() != inst.m() {
        return Err(Error::ModulusMismatch {
            set: set.m(),
            instance: inst.m(),
        });
    }
    Ok(())
}

/// Counts ordered tuples directly; costs `O(|A|^t)`.
pub fn rep_naive(set: &ResidueSet, inst: &Instance) -> Result<RepProfile> {
    check_modulus(set, inst)?;
    let m = inst.m() as usize;
    let members: Vec<usize> = set.iter().map(|a| a as usize).collect();
    let mut counts = vec![0u64; m];
    if !members.is_empty() {
        // one multiplication table per weight: row[i] = k * members[i] mod m
        let terms: Vec<Vec<usize>> = inst
            .weights()
            .iter()
            .map(|&k| members.iter().map(|&a| k as usize * a % m).collect())
            .collect();
        accumulate(&terms, 0, 0, m, &mut counts);
    }
    Ok(RepProfile {
        m: inst.m(),
        counts,
    })
}

fn accumulate(terms: &[Vec<usize>], depth: usize, partial: usize, m: usize, counts: &mut [u64]) {
    let row = &terms[depth];
    if depth + 1 == terms.len() {
        for &v in row {
            let n = partial + v;
            counts[if n >= m { n - m } else { n }] += 1;
        }
        return;
    }
    for &v in row {
        let n = partial + v;
        accumulate(terms, depth + 1, if n >= m { n - m } else { n }, m, counts);
    }
}

/// Iterated cyclic convolution of the weighted indicators; `O(t m^2)` or
/// transform-accelerated for large `m`.
pub fn rep_convolution(set: &ResidueSet, inst: &Instance) -> Result<RepProfile> {
    check_modulus(set, inst)?;
    let mut weights = inst.weights().iter();
    let first = weights.next().ok_or(Error::EmptyWeights)?;
    let mut acc = weighted_indicator(set, *first).counts;
    for &k in weights {
        acc = cyclic_convolve(&acc, &weighted_indicator(set, k).counts);
    }
    Ok(RepProfile {
        m: inst.m(),
        counts: acc,
    })
}
