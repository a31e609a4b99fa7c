//! Bounded exhaustive searches over subsets of `Z_m`.
//!
//! A subset is encoded as an `m`-bit integer and the search space is the
//! counter range `[0, 2^m)`. Workers scan disjoint contiguous slices of that
//! range and share nothing; their results are concatenated in slice order,
//! so witnesses always come out in ascending bit-pattern order regardless of
//! the worker count.

use std::collections::HashMap;
use std::thread;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd_profile, GcdProfile, Instance};
use crate::characterization::{balanced_by_factors, balanced_oracle, balanced_predicate};
use crate::error::{Error, Result};
use crate::profile::{rep_naive, RepProfile};
use crate::set::ResidueSet;

/// Largest modulus any search will scan, whatever the configured limits say.
pub const HARD_MAX_M: u32 = 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchLimits {
    /// `enumerate_balanced` with the brute-force oracle.
    pub enumerate_oracle: u32,
    /// `enumerate_balanced` with the closed-form predicate.
    pub enumerate_predicate: u32,
    pub pairs: u32,
    pub t_ary: u32,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self {
            enumerate_oracle: 16,
            enumerate_predicate: 24,
            pairs: 8,
            t_ary: 12,
        }
    }
}

impl SearchLimits {
    /// Raises every limit to at least `m` (capped at [`HARD_MAX_M`]).
    pub fn raised_to(self, m: u32) -> Self {
        let m = m.min(HARD_MAX_M);
        Self {
            enumerate_oracle: self.enumerate_oracle.max(m),
            enumerate_predicate: self.enumerate_predicate.max(m),
            pairs: self.pairs.max(m),
            t_ary: self.t_ary.max(m),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub workers: usize,
    /// Witnesses kept in the report; counts stay exact past the cap.
    pub witness_cap: usize,
    pub limits: SearchLimits,
    /// Skip subsets with `|A| != m/2` (profile mass forces `|A| = |B|`).
    pub size_prefilter: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            workers: thread::available_parallelism().map_or(1, |n| n.get()),
            witness_cap: 1_000_000,
            limits: SearchLimits::default(),
            size_prefilter: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Enumerate,
    Pairs,
    TAry,
}

/// How `enumerate_balanced` decides balance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decider {
    Oracle,
    /// The closed form: `|A| = m/2` and uniform modulo `d1 d2 / d3^2`.
    Predicate,
    /// `|A| = m/2` and uniform modulo `d1/d3` and `d2/d3` separately.
    Factors,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Set(ResidueSet),
    Pair(ResidueSet, ResidueSet),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub instance: Instance,
    pub mode: SearchMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decider: Option<Decider>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gcd_profile: Option<GcdProfile>,
    pub witnesses: Vec<Witness>,
    /// Total number found; exact even when `truncated`.
    pub counts: u64,
    pub witness_exists: bool,
    pub truncated: bool,
    pub exhaustive: bool,
    pub elapsed_ms: u64,
}

impl SearchReport {
    /// The report with timing stripped, for byte-level comparisons.
    pub fn without_timing(&self) -> Self {
        Self {
            elapsed_ms: 0,
            ..self.clone()
        }
    }
}

fn check_bound(m: u32, bound: u32) -> Result<()> {
    let bound = bound.min(HARD_MAX_M);
    if m > bound {
        Err(Error::BoundExceeded { m, bound })
    } else {
        Ok(())
    }
}

struct ScanResult {
    kept: Vec<u64>,
    count: u64,
}

/// Scans `[0, space)` with `workers` contiguous slices, keeping at most `cap`
/// accepted values in ascending order.
fn parallel_scan<F>(space: u64, workers: usize, cap: usize, accept: F) -> Result<ScanResult>
where
    F: Fn(u64) -> Result<bool> + Sync,
{
    let workers = workers.clamp(1, space.max(1) as usize) as u64;
    let chunk = space.div_ceil(workers);
    let accept = &accept;
    let parts: Vec<Result<ScanResult>> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = (w * chunk).min(space);
                let hi = ((w + 1) * chunk).min(space);
                scope.spawn(move || {
                    let mut part = ScanResult {
                        kept: Vec::new(),
                        count: 0,
                    };
                    for bits in lo..hi {
                        if accept(bits)? {
                            part.count += 1;
                            if part.kept.len() < cap {
                                part.kept.push(bits);
                            }
                        }
                    }
                    Ok(part)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    });

    let mut merged = ScanResult {
        kept: Vec::new(),
        count: 0,
    };
    for part in parts {
        let part = part?;
        merged.count += part.count;
        let room = cap.saturating_sub(merged.kept.len());
        merged.kept.extend(part.kept.into_iter().take(room));
    }
    Ok(merged)
}

fn half_size(m: u32, bits: u64) -> bool {
    m.is_multiple_of(2) && bits.count_ones() == m / 2
}

fn to_set(m: u32, bits: u64) -> ResidueSet {
    ResidueSet::from_bits(m, u128::from(bits)).expect("counter stays below 2^m")
}

/// All complement-balanced subsets for a binary instance, decided either by
/// brute-force profile comparison or by the closed-form predicate.
pub fn enumerate_balanced(
    inst: &Instance,
    decider: Decider,
    cfg: &SearchConfig,
) -> Result<SearchReport> {
    let start = Instant::now();
    let profile = gcd_profile(inst)?;
    let m = inst.m();
    check_bound(
        m,
        match decider {
            Decider::Oracle => cfg.limits.enumerate_oracle,
            Decider::Predicate | Decider::Factors => cfg.limits.enumerate_predicate,
        },
    )?;
    let prefilter = cfg.size_prefilter;
    let scan = parallel_scan(1u64 << m, cfg.workers, cfg.witness_cap, |bits| {
        if prefilter && !half_size(m, bits) {
            return Ok(false);
        }
        let set = to_set(m, bits);
        match decider {
            Decider::Oracle => balanced_oracle(&set, inst),
            Decider::Predicate => balanced_predicate(&set, inst),
            Decider::Factors => balanced_by_factors(&set, inst),
        }
    })?;
    Ok(report(
        inst,
        SearchMode::Enumerate,
        Some(decider),
        Some(profile),
        scan,
        start,
        |b| Witness::Set(to_set(m, b)),
    ))
}

/// Complement-balanced subsets for `t ≥ 3` weights, decided by comparing the
/// naive `t`-ary profiles of `A` and its complement.
pub fn t_ary_balanced_search(inst: &Instance, cfg: &SearchConfig) -> Result<SearchReport> {
    let start = Instant::now();
    if inst.arity() < 3 {
        return Err(Error::TooFewWeights {
            min: 3,
            found: inst.arity(),
        });
    }
    let m = inst.m();
    check_bound(m, cfg.limits.t_ary)?;
    let prefilter = cfg.size_prefilter;
    let scan = parallel_scan(1u64 << m, cfg.workers, cfg.witness_cap, |bits| {
        if prefilter && !half_size(m, bits) {
            return Ok(false);
        }
        let set = to_set(m, bits);
        Ok(rep_naive(&set, inst)? == rep_naive(&set.complement(), inst)?)
    })?;
    Ok(report(
        inst,
        SearchMode::TAry,
        None,
        None,
        scan,
        start,
        |b| Witness::Set(to_set(m, b)),
    ))
}

fn report(
    inst: &Instance,
    mode: SearchMode,
    decider: Option<Decider>,
    gcd_profile: Option<GcdProfile>,
    scan: ScanResult,
    start: Instant,
    witness: impl Fn(u64) -> Witness,
) -> SearchReport {
    SearchReport {
        instance: inst.clone(),
        mode,
        decider,
        gcd_profile,
        truncated: (scan.kept.len() as u64) < scan.count,
        witnesses: scan.kept.into_iter().map(witness).collect(),
        counts: scan.count,
        witness_exists: scan.count > 0,
        exhaustive: true,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

/// Unordered pairs `{A, B}`, `A ≠ B`, with identical representation profiles.
///
/// Pairs are reported once, as `(A, B)` with `A < B` by bit pattern, in
/// lexicographic order. With `exclude_trivial`, pairs where `B` is the
/// complement of `A` are dropped (equal profiles then mean `A` is balanced).
pub fn pair_search(
    inst: &Instance,
    exclude_trivial: bool,
    cfg: &SearchConfig,
) -> Result<SearchReport> {
    let start = Instant::now();
    let profile = gcd_profile(inst)?;
    let m = inst.m();
    check_bound(m, cfg.limits.pairs)?;
    let space = 1u64 << m;

    // profile of every subset, computed in parallel slices
    let workers = cfg.workers.clamp(1, space as usize) as u64;
    let chunk = space.div_ceil(workers);
    let profiles: Vec<RepProfile> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let lo = (w * chunk).min(space);
                let hi = ((w + 1) * chunk).min(space);
                scope.spawn(move || {
                    (lo..hi)
                        .map(|bits| rep_naive(&to_set(m, bits), inst))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?
    .into_iter()
    .flatten()
    .collect();

    let mut classes: HashMap<&RepProfile, Vec<u64>> = HashMap::new();
    for (bits, p) in profiles.iter().enumerate() {
        classes.entry(p).or_default().push(bits as u64);
    }

    let full = space - 1;
    let mut witnesses = Vec::new();
    let mut count = 0u64;
    for (a, p) in profiles.iter().enumerate() {
        let a = a as u64;
        // classes hold ascending bit patterns
        for &b in classes[p].iter().filter(|&&b| b > a) {
            if exclude_trivial && b == a ^ full {
                continue;
            }
            count += 1;
            if witnesses.len() < cfg.witness_cap {
                witnesses.push(Witness::Pair(to_set(m, a), to_set(m, b)));
            }
        }
    }

    Ok(SearchReport {
        instance: inst.clone(),
        mode: SearchMode::Pairs,
        decider: None,
        gcd_profile: Some(profile),
        truncated: (witnesses.len() as u64) < count,
        witnesses,
        counts: count,
        witness_exists: count > 0,
        exhaustive: true,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}
