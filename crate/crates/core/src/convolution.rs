//! Exact cyclic convolution of nonnegative integer sequences.
//!
//! Two paths: the `O(m^2)` schoolbook sum, and a number-theoretic transform
//! over `Z_p` with `p = 998244353`. The transform computes the linear
//! convolution in a power-of-two ring, then folds it modulo `m`. It is exact
//! only while every folded coefficient stays below `p`; the bound
//! `sum(a) * sum(b) < p` guarantees that, and the transform path refuses
//! inputs that violate it.

/// NTT-friendly prime `119 * 2^23 + 1`.
pub const NTT_PRIME: u64 = 998_244_353;
const PRIMITIVE_ROOT: u64 = 3;
const MAX_LOG_LEN: u32 = 23;

/// Lengths at or above this use the transform path when it is exact.
pub const NTT_THRESHOLD: usize = 48;

/// `c[n] = sum_{i + j ≡ n (mod len)} a[i] b[j]`.
pub fn cyclic_convolve_schoolbook(a: &[u64], b: &[u64]) -> Vec<u64> {
    assert_eq!(a.len(), b.len(), "cyclic convolution needs equal lengths");
    let m = a.len();
    let mut out = vec![0u64; m];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let n = if i + j >= m { i + j - m } else { i + j };
            out[n] += x * y;
        }
    }
    out
}

/// Transform-based cyclic convolution; `None` when the result could exceed
/// the prime (or the padded length exceeds the transform size).
pub fn cyclic_convolve_ntt(a: &[u64], b: &[u64]) -> Option<Vec<u64>> {
    assert_eq!(a.len(), b.len(), "cyclic convolution needs equal lengths");
    let m = a.len();
    if m == 0 {
        return Some(Vec::new());
    }
    let mass = a.iter().sum::<u64>().checked_mul(b.iter().sum::<u64>())?;
    if mass >= NTT_PRIME {
        return None;
    }
    let size = (2 * m - 1).next_power_of_two();
    if size.trailing_zeros() > MAX_LOG_LEN {
        return None;
    }
    let mut fa = vec![0u64; size];
    let mut fb = vec![0u64; size];
    fa[..m].copy_from_slice(a);
    fb[..m].copy_from_slice(b);
    ntt(&mut fa, false);
    ntt(&mut fb, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * y % NTT_PRIME;
    }
    ntt(&mut fa, true);

    let mut out = vec![0u64; m];
    for (i, v) in fa.into_iter().take(2 * m - 1).enumerate() {
        out[i % m] += v;
    }
    Some(out)
}

/// Exact cyclic convolution, picking the transform for long inputs when safe.
pub fn cyclic_convolve(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.len() >= NTT_THRESHOLD {
        if let Some(out) = cyclic_convolve_ntt(a, b) {
            return out;
        }
    }
    cyclic_convolve_schoolbook(a, b)
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1u64;
    base %= NTT_PRIME;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % NTT_PRIME;
        }
        base = base * base % NTT_PRIME;
        exp >>= 1;
    }
    acc
}

/// In-place iterative radix-2 transform; `values.len()` must be a power of two.
fn ntt(values: &mut [u64], inverse: bool) {
    let n = values.len();
    debug_assert!(n.is_power_of_two());

    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            values.swap(i, j);
        }
    }

    let mut len = 2;
    while len <= n {
        let mut w_len = pow_mod(PRIMITIVE_ROOT, (NTT_PRIME - 1) / len as u64);
        if inverse {
            w_len = pow_mod(w_len, NTT_PRIME - 2);
        }
        for start in (0..n).step_by(len) {
            let mut w = 1u64;
            for k in 0..len / 2 {
                let u = values[start + k];
                let v = values[start + k + len / 2] * w % NTT_PRIME;
                values[start + k] = if u + v >= NTT_PRIME {
                    u + v - NTT_PRIME
                } else {
                    u + v
                };
                values[start + k + len / 2] = if u >= v { u - v } else { u + NTT_PRIME - v };
                w = w * w_len % NTT_PRIME;
            }
        }
        len <<= 1;
    }

    if inverse {
        let n_inv = pow_mod(n as u64, NTT_PRIME - 2);
        for x in values.iter_mut() {
            *x = *x * n_inv % NTT_PRIME;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn schoolbook_small() {
        assert_eq!(
            cyclic_convolve_schoolbook(&[1, 1, 0, 0], &[1, 1, 0, 0]),
            vec![1, 2, 1, 0]
        );
        assert_eq!(
            cyclic_convolve_schoolbook(&[0, 0, 1], &[0, 0, 1]),
            vec![0, 1, 0]
        );
        assert_eq!(cyclic_convolve_schoolbook(&[], &[]), Vec::<u64>::new());
    }

    #[test]
    fn ntt_roundtrip() {
        let mut v: Vec<u64> = (0..64).map(|i| i * i % 17).collect();
        let orig = v.clone();
        ntt(&mut v, false);
        ntt(&mut v, true);
        assert_eq!(v, orig);
    }

    #[test]
    fn ntt_refuses_unsafe_mass() {
        let big = vec![40_000u64; 2];
        assert_eq!(cyclic_convolve_ntt(&big, &big), None);
        // the dispatcher still answers exactly
        let big = vec![40_000u64; NTT_THRESHOLD];
        let expected = cyclic_convolve_schoolbook(&big, &big);
        assert_eq!(cyclic_convolve(&big, &big), expected);
    }

    proptest! {
        #[test]
        fn ntt_matches_schoolbook(
            (a, b) in (1usize..130).prop_flat_map(|m| (
                proptest::collection::vec(0u64..200, m),
                proptest::collection::vec(0u64..200, m),
            ))
        ) {
            let expected = cyclic_convolve_schoolbook(&a, &b);
            match cyclic_convolve_ntt(&a, &b) {
                Some(fast) => prop_assert_eq!(fast, expected),
                None => prop_assert!(a.iter().sum::<u64>() * b.iter().sum::<u64>() >= NTT_PRIME),
            }
        }
    }
}
