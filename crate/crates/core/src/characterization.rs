//! When does `A ⊆ Z_m` have the same weighted representation profile as its
//! complement?
//!
//! For weights `(k1, k2)` with gcd profile `(d1, d2, d3, d)`, the closed-form
//! candidate is: `|A| = m/2` and `A` uniformly distributed modulo
//! `d = d1 d2 / d3^2`. [`balanced_predicate`] decides that condition in
//! `O(m)`; [`balanced_oracle`] compares the two profiles directly and is the
//! ground truth it is tested against.
//!
//! The closed form is sufficient, and for `m ≤ 11` also necessary, but not
//! beyond: uniformity
//! modulo the coprime factors `d1/d3` and `d2/d3` does not imply uniformity
//! modulo their product. The first counterexample is `m = 12`, `k = (4, 6)`,
//! `A = {0, 1, 2, 3, 7, 8}`, which is balanced but not uniform mod 6.
//! [`balanced_by_factors`] checks the two factors separately and agrees with
//! the oracle; [`count_balanced_exact`] counts the sets it accepts.
//!
//! A balanced set exists iff `2d | m`. [`exists_parity`] restates this in
//! terms of the parities and 2-adic valuations of the weights and is kept as
//! an independently written cross-check of [`exists_divisibility`].

use std::collections::HashMap;

use crate::arith::{binomial, gcd_profile, v2, Instance, Valuation};
use crate::error::{Error, Result};
use crate::profile::rep_naive;
use crate::set::ResidueSet;

/// Every residue class mod `q` holds exactly `|A| / q` members of `A`.
///
/// Returns `false` (not an error) when `q` does not divide `|A|`.
pub fn is_uniform_mod(set: &ResidueSet, q: u32) -> Result<bool> {
    let m = set.m();
    if q == 0 || !m.is_multiple_of(q) {
        return Err(Error::NotDivisor { q, m });
    }
    let size = set.len();
    if !size.is_multiple_of(q as usize) {
        return Ok(false);
    }
    let mut classes = vec![0usize; q as usize];
    for a in set.iter() {
        classes[(a % q) as usize] += 1;
    }
    let per_class = size / q as usize;
    Ok(classes.iter().all(|&c| c == per_class))
}

/// `m` even, `|A| = m/2` and `A` uniform modulo `d1 d2 / d3^2`.
pub fn balanced_predicate(set: &ResidueSet, inst: &Instance) -> Result<bool> {
    check_modulus(set, inst)?;
    let profile = gcd_profile(inst)?;
    let m = inst.m();
    if !m.is_multiple_of(2) || set.len() != (m / 2) as usize {
        return Ok(false);
    }
    is_uniform_mod(set, profile.d)
}

/// `m` even, `|A| = m/2`, and `A` uniform modulo `d1/d3` and modulo `d2/d3`
/// separately.
pub fn balanced_by_factors(set: &ResidueSet, inst: &Instance) -> Result<bool> {
    check_modulus(set, inst)?;
    let profile = gcd_profile(inst)?;
    let m = inst.m();
    if !m.is_multiple_of(2) || set.len() != (m / 2) as usize {
        return Ok(false);
    }
    Ok(is_uniform_mod(set, profile.d1_reduced())? && is_uniform_mod(set, profile.d2_reduced())?)
}

/// Brute force: the representation profiles of `A` and `Z_m \ A` agree everywhere.
pub fn balanced_oracle(set: &ResidueSet, inst: &Instance) -> Result<bool> {
    inst.pair()?;
    Ok(rep_naive(set, inst)? == rep_naive(&set.complement(), inst)?)
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

/// `2 d1 d2 / d3^2` divides `m`.
pub fn exists_divisibility(inst: &Instance) -> Result<bool> {
    let profile = gcd_profile(inst)?;
    Ok(inst.m().is_multiple_of(2 * profile.d))
}

/// `m` even and either the weights share a parity, or they differ and each
/// even weight has 2-adic valuation strictly below that of `m`.
pub fn exists_parity(inst: &Instance) -> Result<bool> {
    let (k1, k2) = inst.pair()?;
    let m = inst.m();
    if !m.is_multiple_of(2) {
        return Ok(false);
    }
    if k1 % 2 == k2 % 2 {
        return Ok(true);
    }
    let vm = v2(u64::from(m));
    let below = |k: u32| k % 2 == 1 || v2(u64::from(k)) < vm;
    debug_assert!(vm != Valuation::Infinite);
    Ok(below(k1) && below(k2))
}

/// The explicit balanced set `⋃_{i=1}^{d} { i + dℓ : ℓ = 1, …, m/(2d) }`, reduced mod `m`.
pub fn canonical_balanced_set(inst: &Instance) -> Result<ResidueSet> {
    if !exists_divisibility(inst)? {
        return Err(Error::NoBalancedSet(inst.to_string()));
    }
    let d = i64::from(gcd_profile(inst)?.d);
    let per_class = i64::from(inst.m()) / (2 * d);
    let members = (1..=d).flat_map(|i| (1..=per_class).map(move |l| i + d * l));
    let set = ResidueSet::from_residues_mod(inst.m(), members)?;
    debug_assert_eq!(set.len(), (inst.m() / 2) as usize);
    Ok(set)
}

/// Number of complement-balanced subsets: `C(m/d, m/(2d))^d` when `2d | m`, else 0.
pub fn count_balanced(inst: &Instance) -> Result<u128> {
    if !exists_divisibility(inst)? {
        return Ok(0);
    }
    let d = u64::from(gcd_profile(inst)?.d);
    let class_size = u64::from(inst.m()) / d;
    let per_class = binomial(class_size, class_size / 2).ok_or(Error::Overflow("binomial"))?;
    (0..d).try_fold(1u128, |acc, _| {
        acc.checked_mul(per_class)
            .ok_or(Error::Overflow("balanced count"))
    })
}

/// Number of sets accepted by [`balanced_by_factors`].
///
/// By CRT the classes mod `d = p q` (`p = d1/d3`, `q = d2/d3`) form a `p × q`
/// grid of cells with `m/d` residues each. A balanced set picks `c_ij` residues
/// from cell `(i, j)` with every row summing to `m/(2p)` and every column to
/// `m/(2q)`; the count is the sum over such tables of `Π C(m/d, c_ij)`.
pub fn count_balanced_exact(inst: &Instance) -> Result<u128> {
    if !exists_divisibility(inst)? {
        return Ok(0);
    }
    let profile = gcd_profile(inst)?;
    let m = u64::from(inst.m());
    let (rows, cols) = (
        u64::from(profile.d1_reduced()),
        u64::from(profile.d2_reduced()),
    );
    let cell = m / (rows * cols);
    let row_sum = m / (2 * rows);
    let col_sum = m / (2 * cols);
    let choose: Vec<u128> = (0..=cell)
        .map(|c| binomial(cell, c).ok_or(Error::Overflow("binomial")))
        .collect::<Result<_>>()?;

    // state: remaining demand per column
    let mut states: HashMap<Vec<u64>, u128> = HashMap::from([(vec![col_sum; cols as usize], 1)]);
    for _ in 0..rows {
        let mut next: HashMap<Vec<u64>, u128> = HashMap::new();
        for (remaining, ways) in &states {
            let mut row = vec![0u64; cols as usize];
            fill_row(
                &remaining[..],
                &mut row,
                0,
                row_sum,
                cell,
                &choose,
                *ways,
                &mut next,
            )?;
        }
        states = next;
    }
    Ok(states.get(&vec![0; cols as usize]).copied().unwrap_or(0))
}

#[allow(clippy::too_many_arguments)]
fn fill_row(
    remaining: &[u64],
    row: &mut [u64],
    col: usize,
    left: u64,
    cell: u64,
    choose: &[u128],
    ways: u128,
    out: &mut HashMap<Vec<u64>, u128>,
) -> Result<()> {
    if col == row.len() {
        if left == 0 {
            let key: Vec<u64> = remaining
                .iter()
                .zip(row.iter())
                .map(|(r, c)| r - c)
                .collect();
            let slot = out.entry(key).or_insert(0);
            *slot = slot
                .checked_add(ways)
                .ok_or(Error::Overflow("balanced count"))?;
        }
        return Ok(());
    }
    let cap = cell.min(remaining[col]).min(left);
    for c in 0..=cap {
        row[col] = c;
        let w = ways
            .checked_mul(choose[c as usize])
            .ok_or(Error::Overflow("balanced count"))?;
        fill_row(remaining, row, col + 1, left - c, cell, choose, w, out)?;
    }
    row[col] = 0;
    Ok(())
}
