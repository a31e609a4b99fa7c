//! Self-checking sweeps: the closed-form characterization against brute
//! force, the existence criteria against each other, the three profile
//! routes against each other, and the exponential-sum identities.
//!
//! Exhaustive parts run for every `m ≤ max_m`; sampled parts draw from a
//! ChaCha stream seeded by the caller.

use std::fmt;
use std::str::FromStr;
use std::thread;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{canonicalize, Instance};
use crate::characterization::{
    balanced_by_factors, balanced_oracle, balanced_predicate, canonical_balanced_set,
    count_balanced, count_balanced_exact, exists_divisibility, exists_parity,
};
use crate::error::{Error, Result};
use crate::profile::{rep_convolution, rep_naive};
use crate::search::{enumerate_balanced, Decider, SearchConfig};
use crate::set::ResidueSet;
use crate::spectral::{
    g_a, lemma4_lhs, lemma4_rhs, profile_difference_spectral_all, rep_spectral_profile,
};

/// Tolerance for floating-point identities with an integer right-hand side.
pub const SPECTRAL_TOL: f64 = 1e-6;
/// Tolerance for exponential-sum quantities that vanish identically.
pub const EXACT_ZERO_TOL: f64 = 1e-9;

/// Exhaustive lemma grids stop here even when `max_m` is larger.
const LEMMA_GRID_MAX_M: u32 = 10;
const SAMPLED_SPECTRAL_MAX_M: u32 = 32;
const SAMPLED_EXACT_MAX_M: u32 = 64;
const EXISTENCE_MAX_M: u32 = 64;
const SAMPLES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    All,
    Theorem,
    Corollary,
    Counting,
    Routes,
    Lemmas,
    Construction,
    Determinism,
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "all" => Scope::All,
            "theorem" => Scope::Theorem,
            "corollary" => Scope::Corollary,
            "counting" => Scope::Counting,
            "routes" => Scope::Routes,
            "lemmas" => Scope::Lemmas,
            "construction" => Scope::Construction,
            "determinism" => Scope::Determinism,
            other => return Err(format!("unknown scope {other:?}")),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub max_m: u32,
    pub scope: Scope,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub first_counterexample: Option<String>,
    pub elapsed_ms: u64,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {:<15} cases={} failures={} ({} ms)",
            self.name, self.cases, self.failures, self.elapsed_ms
        )?;
        if let Some(cex) = &self.first_counterexample {
            write!(f, " first counterexample: {cex}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::passed)
    }
}

/// Running tally for one check.
#[derive(Default)]
struct Tally {
    cases: u64,
    failures: u64,
    first: Option<String>,
}

impl Tally {
    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(describe());
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.cases += other.cases;
        self.failures += other.failures;
        if self.first.is_none() {
            self.first = other.first;
        }
        self
    }

    fn finish(self, name: &str, start: Instant) -> CheckOutcome {
        CheckOutcome {
            name: name.to_string(),
            cases: self.cases,
            failures: self.failures,
            first_counterexample: self.first,
            elapsed_ms: start.elapsed().as_millis() as u64,
        }
    }
}

trait Merge: Default + Send {
    fn merge(self, other: Self) -> Self;
}

impl Merge for Tally {
    fn merge(self, other: Tally) -> Tally {
        Tally::merge(self, other)
    }
}

/// Two tallies accumulated side by side.
#[derive(Default)]
struct Pair(Tally, Tally);

impl Merge for Pair {
    fn merge(self, other: Pair) -> Pair {
        Pair(self.0.merge(other.0), self.1.merge(other.1))
    }
}

/// Splits `jobs` across `workers` threads and merges the tallies in job order.
fn par_tally<J, T, F>(jobs: Vec<J>, workers: usize, run: F) -> Result<T>
where
    J: Send + Sync,
    T: Merge,
    F: Fn(&J) -> Result<T> + Sync,
{
    let workers = workers.clamp(1, jobs.len().max(1));
    let chunk = jobs.len().div_ceil(workers).max(1);
    let run = &run;
    let parts: Vec<Result<T>> = thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .map(|slice| {
                scope.spawn(move || {
                    slice
                        .iter()
                        .try_fold(T::default(), |acc, job| Ok(acc.merge(run(job)?)))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verify worker panicked"))
            .collect()
    });
    parts
        .into_iter()
        .try_fold(T::default(), |acc, part| Ok(acc.merge(part?)))
}

fn binary_instances(max_m: u32) -> Vec<Instance> {
    (2..=max_m)
        .flat_map(|m| {
            (0..m).flat_map(move |k1| {
                (0..m).map(move |k2| {
                    canonicalize(i64::from(m), &[i64::from(k1), i64::from(k2)]).expect("m ≥ 2")
                })
            })
        })
        .collect()
}

fn all_subsets(m: u32) -> impl Iterator<Item = ResidueSet> {
    (0u128..1 << m).map(move |bits| ResidueSet::from_bits(m, bits).expect("bits below 2^m"))
}

fn random_set(rng: &mut ChaCha8Rng, m: u32) -> ResidueSet {
    let bits: u128 = rng.gen::<u128>() & ((1u128 << m) - 1);
    ResidueSet::from_bits(m, bits).expect("masked to m bits")
}

pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.max_m < 2 {
        return Err(Error::InvalidModulus(i64::from(cfg.max_m)));
    }
    let wants = |s: Scope| cfg.scope == Scope::All || cfg.scope == s;
    let mut checks = Vec::new();
    if wants(Scope::Theorem) {
        checks.extend(theorem(cfg)?);
    }
    if wants(Scope::Corollary) {
        checks.push(corollary(cfg)?);
    }
    if wants(Scope::Counting) {
        checks.extend(counting(cfg)?);
    }
    if wants(Scope::Routes) {
        checks.extend(routes(cfg)?);
    }
    if wants(Scope::Lemmas) {
        checks.extend(lemmas(cfg)?);
    }
    if wants(Scope::Construction) {
        checks.push(construction(cfg)?);
    }
    if wants(Scope::Determinism) {
        checks.push(determinism(cfg)?);
    }
    Ok(VerifyReport {
        config: cfg.clone(),
        checks,
    })
}

/// Predicate equals oracle for every instance and every subset; the same
/// sweep also checks the factor-wise criterion.
fn theorem(cfg: &VerifyConfig) -> Result<Vec<CheckOutcome>> {
    let start = Instant::now();
    let tally = par_tally(binary_instances(cfg.max_m), cfg.workers, |inst| {
        let mut t = Tally::default();
        let mut f = Tally::default();
        for set in all_subsets(inst.m()) {
            let predicate = balanced_predicate(&set, inst)?;
            let factors = balanced_by_factors(&set, inst)?;
            let oracle = balanced_oracle(&set, inst)?;
            t.record(predicate == oracle, || {
                format!("{inst} A={{{set}}} predicate={predicate} oracle={oracle}")
            });
            f.record(factors == oracle, || {
                format!("{inst} A={{{set}}} factors={factors} oracle={oracle}")
            });
        }
        Ok(Pair(t, f))
    })?;
    let Pair(t, f) = tally;
    Ok(vec![
        t.finish("theorem", start),
        f.finish("theorem-factors", start),
    ])
}

/// Parity criterion equals divisibility criterion (to m = 64 or `max_m`),
/// and both equal "a balanced set exists" by enumeration up to `max_m`.
fn corollary(cfg: &VerifyConfig) -> Result<CheckOutcome> {
    let start = Instant::now();
    let enum_cfg = SearchConfig {
        workers: 1,
        ..SearchConfig::default()
    };
    let max_m = cfg.max_m.max(EXISTENCE_MAX_M);
    let tally = par_tally(binary_instances(max_m), cfg.workers, |inst| {
        let mut t = Tally::default();
        let div = exists_divisibility(inst)?;
        let par = exists_parity(inst)?;
        t.record(div == par, || {
            format!("{inst} divisibility={div} parity={par}")
        });
        if inst.m() <= cfg.max_m {
            let found = enumerate_balanced(inst, Decider::Oracle, &enum_cfg)?.witness_exists;
            t.record(found == div, || {
                format!("{inst} enumeration={found} divisibility={div}")
            });
        }
        Ok(t)
    })?;
    Ok(tally.finish("corollary", start))
}

fn counting(cfg: &VerifyConfig) -> Result<Vec<CheckOutcome>> {
    let start = Instant::now();
    let enum_cfg = SearchConfig {
        workers: 1,
        ..SearchConfig::default()
    };
    let tally = par_tally(binary_instances(cfg.max_m), cfg.workers, |inst| {
        let mut t = Tally::default();
        let mut e = Tally::default();
        let formula = count_balanced(inst)?;
        let exact = count_balanced_exact(inst)?;
        let found = u128::from(enumerate_balanced(inst, Decider::Oracle, &enum_cfg)?.counts);
        t.record(formula == found, || {
            format!("{inst} formula={formula} enumeration={found}")
        });
        e.record(exact == found, || {
            format!("{inst} exact={exact} enumeration={found}")
        });
        Ok(Pair(t, e))
    })?;
    let Pair(t, e) = tally;
    Ok(vec![
        t.finish("counting", start),
        e.finish("counting-exact", start),
    ])
}

fn routes(cfg: &VerifyConfig) -> Result<Vec<CheckOutcome>> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut exact = Tally::default();
    for _ in 0..SAMPLES {
        let m = rng.gen_range(2..=SAMPLED_EXACT_MAX_M);
        let arity = if m <= 16 { rng.gen_range(2..=3) } else { 2 };
        let weights: Vec<i64> = (0..arity).map(|_| rng.gen_range(-100..100)).collect();
        let inst = canonicalize(i64::from(m), &weights)?;
        let set = random_set(&mut rng, m);
        let naive = rep_naive(&set, &inst)?;
        let conv = rep_convolution(&set, &inst)?;
        exact.record(naive == conv, || format!("{inst} A={{{set}}}"));
    }
    let exact = exact.finish("convolution", start);

    let start = Instant::now();
    let mut spectral = Tally::default();
    for _ in 0..SAMPLES {
        let m = rng.gen_range(2..=SAMPLED_SPECTRAL_MAX_M);
        let inst = canonicalize(
            i64::from(m),
            &[rng.gen_range(0..100), rng.gen_range(0..100)],
        )?;
        let set = random_set(&mut rng, m);
        let naive = rep_naive(&set, &inst)?;
        let approx = rep_spectral_profile(&set, &inst)?;
        let worst = naive
            .counts
            .iter()
            .zip(&approx)
            .map(|(&c, &s)| (c as f64 - s).abs())
            .fold(0.0, f64::max);
        spectral.record(worst < SPECTRAL_TOL, || {
            format!("{inst} A={{{set}}} residual={worst:e}")
        });
    }
    Ok(vec![exact, spectral.finish("spectral", start)])
}

/// Lemma checks for one (set, instance): vanishing of `g_A` off the
/// `m | k_i x` frequencies, vanishing for half-size sets on them, and the
/// inverse transform of `g_A` reproducing the profile difference.
fn lemma_case(set: &ResidueSet, inst: &Instance, t: &mut [Tally; 3], zero_tol: f64) -> Result<()> {
    let (k1, k2) = inst.pair()?;
    let m = u64::from(inst.m());
    for x in 0..m {
        let g = g_a(set, inst, x as i64)?.norm();
        let hit1 = u64::from(k1) * x % m == 0;
        let hit2 = u64::from(k2) * x % m == 0;
        if !hit1 && !hit2 {
            t[0].record(g < zero_tol, || {
                format!("{inst} A={{{set}}} x={x} |g|={g:e}")
            });
        }
        if hit1 && hit2 && 2 * set.len() as u64 == m {
            t[1].record(g < zero_tol, || {
                format!("{inst} A={{{set}}} x={x} |g|={g:e}")
            });
        }
    }
    let diff = profile_difference_spectral_all(set, inst)?;
    let pa = rep_naive(set, inst)?;
    let pb = rep_naive(&set.complement(), inst)?;
    for (n, d) in diff.iter().enumerate() {
        let exact = pa.counts[n] as f64 - pb.counts[n] as f64;
        let residual = (d - exact).norm();
        t[2].record(residual < SPECTRAL_TOL, || {
            format!("{inst} A={{{set}}} n={n} residual={residual:e}")
        });
    }
    Ok(())
}

fn lemma4_case(set: &ResidueSet, k: i64, l: i64, n: i64, t: &mut Tally) {
    let lhs = lemma4_lhs(set, k, l, n);
    let rhs = lemma4_rhs(set, k, l, n);
    let residual = (lhs - rhs as f64).norm();
    t.record(residual < SPECTRAL_TOL, || {
        format!(
            "m={} T={{{set}}} k={k} l={l} n={n} residual={residual:e}",
            set.m()
        )
    });
}

fn lemmas(cfg: &VerifyConfig) -> Result<Vec<CheckOutcome>> {
    let start = Instant::now();
    let grid_max = cfg.max_m.min(LEMMA_GRID_MAX_M);
    let grid = par_tally(binary_instances(grid_max), cfg.workers, |inst| {
        let mut t: [Tally; 3] = Default::default();
        for set in all_subsets(inst.m()) {
            lemma_case(&set, inst, &mut t, EXACT_ZERO_TOL)?;
        }
        let [a, b, c] = t;
        // encode the three tallies into one by tagging failures
        Ok(tagged(a, "g-off-support")
            .merge(tagged(b, "g-half-size"))
            .merge(tagged(c, "difference")))
    })?;
    let lemma4_grid = par_tally((2..=grid_max).collect(), cfg.workers, |&m| {
        let mut t = Tally::default();
        let mi = i64::from(m);
        for set in all_subsets(m) {
            for k in 0..mi {
                for l in 0..mi {
                    for n in 0..mi {
                        lemma4_case(&set, k, l, n, &mut t);
                    }
                }
            }
        }
        Ok(t)
    })?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut sampled: [Tally; 3] = Default::default();
    let mut sampled4 = Tally::default();
    for _ in 0..SAMPLES {
        let m = rng.gen_range(2..=SAMPLED_SPECTRAL_MAX_M);
        let inst = canonicalize(
            i64::from(m),
            &[
                rng.gen_range(0..i64::from(m)),
                rng.gen_range(0..i64::from(m)),
            ],
        )?;
        // bias toward half-size sets so the second identity gets exercised
        let set = if m % 2 == 0 && rng.gen_bool(0.5) {
            half_size_set(&mut rng, m)
        } else {
            random_set(&mut rng, m)
        };
        lemma_case(&set, &inst, &mut sampled, SPECTRAL_TOL)?;
        let mi = i64::from(m);
        lemma4_case(
            &set,
            rng.gen_range(-mi..2 * mi),
            rng.gen_range(-mi..2 * mi),
            rng.gen_range(-mi..2 * mi),
            &mut sampled4,
        );
    }
    let [a, b, c] = sampled;
    let sampled = tagged(a, "g-off-support")
        .merge(tagged(b, "g-half-size"))
        .merge(tagged(c, "difference"));

    Ok(vec![
        grid.finish("lemmas-grid", start),
        lemma4_grid.finish("lemma4-grid", start),
        sampled.merge(sampled4).finish("lemmas-sampled", start),
    ])
}

fn tagged(mut t: Tally, tag: &str) -> Tally {
    t.first = t.first.map(|s| format!("[{tag}] {s}"));
    t
}

fn half_size_set(rng: &mut ChaCha8Rng, m: u32) -> ResidueSet {
    let mut members: Vec<i64> = (0..i64::from(m)).collect();
    for i in (1..members.len()).rev() {
        members.swap(i, rng.gen_range(0..=i));
    }
    members.truncate((m / 2) as usize);
    ResidueSet::from_members(m, members).expect("distinct residues")
}

fn construction(cfg: &VerifyConfig) -> Result<CheckOutcome> {
    let start = Instant::now();
    let max_m = cfg.max_m.max(EXISTENCE_MAX_M);
    let tally = par_tally(binary_instances(max_m), cfg.workers, |inst| {
        let mut t = Tally::default();
        if !exists_divisibility(inst)? {
            return Ok(t);
        }
        let set = canonical_balanced_set(inst)?;
        let ok = balanced_predicate(&set, inst)?;
        t.record(ok, || format!("{inst} A={{{set}}} fails the predicate"));
        if inst.m() <= cfg.max_m {
            let ok = balanced_oracle(&set, inst)?;
            t.record(ok, || format!("{inst} A={{{set}}} fails the oracle"));
        }
        Ok(t)
    })?;
    Ok(tally.finish("construction", start))
}

fn determinism(cfg: &VerifyConfig) -> Result<CheckOutcome> {
    let start = Instant::now();
    let mut targets: Vec<(i64, [i64; 2])> = vec![(12, [4, 6]), (10, [1, 1])];
    targets.retain(|(m, _)| *m <= i64::from(cfg.max_m));
    if targets.is_empty() {
        targets.push((i64::from(cfg.max_m), [1, 1]));
    }
    let mut t = Tally::default();
    for (m, k) in targets {
        let inst = canonicalize(m, &k)?;
        let reports = [1usize, 2, 8]
            .into_iter()
            .map(|workers| {
                let search = SearchConfig {
                    workers,
                    ..SearchConfig::default()
                };
                enumerate_balanced(&inst, Decider::Oracle, &search).map(|r| r.without_timing())
            })
            .collect::<Result<Vec<_>>>()?;
        let same = reports.windows(2).all(|w| w[0] == w[1]);
        t.record(same, || {
            format!("{inst} witness lists differ across worker counts")
        });
    }
    Ok(t.finish("determinism", start))
}
