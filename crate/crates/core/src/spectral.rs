//! Exponential sums over `Z_m` and the Fourier-side view of representation counts.
//!
//! With `S_T(x) = Σ_{t∈T} e(tx/m)` the representation count of `n` is
//! `(1/m) Σ_x S_A(k1 x) S_A(k2 x) e(-nx/m)`. Everything here is `f64`
//! and is checked against the exact integer routes in [`crate::profile`].

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::arith::{gcd, Instance};
use crate::error::Result;
use crate::set::ResidueSet;

/// `e^{2πi r/m}` for a residue already reduced into `[0, m)`.
fn unit_root(r: u64, m: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * r as f64 / m as f64)
}

fn residue(x: i64, m: u32) -> u64 {
    x.rem_euclid(i64::from(m)) as u64
}

/// `S_T(x) = Σ_{t∈T} e^{2πi t x / m}`.
pub fn exp_sum(set: &ResidueSet, x: i64) -> Complex64 {
    let m = u64::from(set.m());
    let x = residue(x, set.m());
    if x == 0 {
        return Complex64::new(set.len() as f64, 0.0);
    }
    set.iter().map(|t| unit_root(u64::from(t) * x % m, m)).sum()
}

/// `S_A(k1 x) S_A(k2 x) - S_B(k1 x) S_B(k2 x)` with `B` the complement of `A`.
pub fn g_a(set: &ResidueSet, inst: &Instance, x: i64) -> Result<Complex64> {
    let (k1, k2) = inst.pair()?;
    let m = inst.m();
    let x1 = (u64::from(k1) * residue(x, m) % u64::from(m)) as i64;
    let x2 = (u64::from(k2) * residue(x, m) % u64::from(m)) as i64;
    let comp = set.complement();
    Ok(exp_sum(set, x1) * exp_sum(set, x2) - exp_sum(&comp, x1) * exp_sum(&comp, x2))
}

/// `(1/m) Σ_{x=0}^{m-1} f(x) e^{-2πi n x / m}` for a caller-supplied spectrum.
fn inverse_coefficient(m: u32, n: i64, f: impl Fn(u64) -> Complex64) -> Complex64 {
    let m64 = u64::from(m);
    let n = residue(n, m);
    let sum: Complex64 = (0..m64)
        .map(|x| f(x) * unit_root((m64 - n * x % m64) % m64, m64))
        .sum();
    sum / m as f64
}

/// Representation count of `n` recovered from the exponential sums (real part).
pub fn rep_spectral(set: &ResidueSet, inst: &Instance, n: i64) -> Result<f64> {
    let (k1, k2) = inst.pair()?;
    let m = u64::from(inst.m());
    let c = inverse_coefficient(inst.m(), n, |x| {
        exp_sum(set, (u64::from(k1) * x % m) as i64) * exp_sum(set, (u64::from(k2) * x % m) as i64)
    });
    Ok(c.re)
}

/// Full length-`m` profile through [`rep_spectral`].
pub fn rep_spectral_profile(set: &ResidueSet, inst: &Instance) -> Result<Vec<f64>> {
    (0..i64::from(inst.m()))
        .map(|n| rep_spectral(set, inst, n))
        .collect()
}

/// `(1/m) Σ_x g_A(x) e^{-2πi n x / m}`, which equals `r(A, n) - r(B, n)`.
pub fn profile_difference_spectral(set: &ResidueSet, inst: &Instance, n: i64) -> Result<Complex64> {
    inst.pair()?;
    let spectrum: Vec<Complex64> = (0..i64::from(inst.m()))
        .map(|x| g_a(set, inst, x))
        .collect::<Result<_>>()?;
    Ok(inverse_coefficient(inst.m(), n, |x| spectrum[x as usize]))
}

/// [`profile_difference_spectral`] for every `n` at once, sharing one spectrum.
pub fn profile_difference_spectral_all(
    set: &ResidueSet,
    inst: &Instance,
) -> Result<Vec<Complex64>> {
    let spectrum: Vec<Complex64> = (0..i64::from(inst.m()))
        .map(|x| g_a(set, inst, x))
        .collect::<Result<_>>()?;
    Ok((0..i64::from(inst.m()))
        .map(|n| inverse_coefficient(inst.m(), n, |x| spectrum[x as usize]))
        .collect())
}

/// `Σ_{0 ≤ x < m, m | kx} S_T(ℓx) e^{-2πi n x / m}`.
pub fn lemma4_lhs(set: &ResidueSet, k: i64, l: i64, n: i64) -> Complex64 {
    let m = set.m();
    let m64 = u64::from(m);
    let k = residue(k, m);
    let l = residue(l, m);
    let n = residue(n, m);
    (0..m64)
        .filter(|x| (k * x).is_multiple_of(m64))
        .map(|x| exp_sum(set, (l * x % m64) as i64) * unit_root((m64 - n * x % m64) % m64, m64))
        .sum()
}

/// `(k, m) · #{t ∈ T : (k, m) | ℓt - n}`.
pub fn lemma4_rhs(set: &ResidueSet, k: i64, l: i64, n: i64) -> i64 {
    let m = set.m();
    let d = gcd(residue(k, m), u64::from(m)) as i64;
    let l = residue(l, m) as i64;
    let n = residue(n, m) as i64;
    let hits = set
        .iter()
        .filter(|&t| (l * i64::from(t) - n).rem_euclid(d) == 0)
        .count() as i64;
    d * hits
}
