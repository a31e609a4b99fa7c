use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus a [`ResidueSet`] can hold.
pub const MAX_SET_MODULUS: u32 = 128;

/// A subset of `Z_m`, stored as an `m`-bit pattern (bit `a` set iff `a` is a member).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SetRepr", into = "SetRepr")]
pub struct ResidueSet {
    m: u32,
    bits: u128,
}

#[derive(Serialize, Deserialize)]
struct SetRepr {
    m: u32,
    members: Vec<u32>,
}

impl TryFrom<SetRepr> for ResidueSet {
    type Error = Error;

    fn try_from(repr: SetRepr) -> Result<Self> {
        ResidueSet::from_members(repr.m, repr.members.iter().map(|&a| i64::from(a)))
    }
}

impl From<ResidueSet> for SetRepr {
    fn from(set: ResidueSet) -> Self {
        SetRepr {
            m: set.m,
            members: set.iter().collect(),
        }
    }
}

fn full_mask(m: u32) -> u128 {
    if m == 128 {
        u128::MAX
    } else {
        (1u128 << m) - 1
    }
}

fn check_modulus(m: u32) -> Result<()> {
    if m < 2 {
        Err(Error::InvalidModulus(i64::from(m)))
    } else if m > MAX_SET_MODULUS {
        Err(Error::ModulusTooLarge {
            m,
            max: MAX_SET_MODULUS,
        })
    } else {
        Ok(())
    }
}

impl ResidueSet {
    pub fn empty(m: u32) -> Result<Self> {
        check_modulus(m)?;
        Ok(Self { m, bits: 0 })
    }

    /// All of `Z_m`.
    pub fn full(m: u32) -> Result<Self> {
        check_modulus(m)?;
        Ok(Self {
            m,
            bits: full_mask(m),
        })
    }

    /// Builds a set from residues that must already lie in `[0, m)`. Duplicates are rejected.
    pub fn from_members(m: u32, members: impl IntoIterator<Item = i64>) -> Result<Self> {
        check_modulus(m)?;
        let mut bits = 0u128;
        for a in members {
            if a < 0 || a >= i64::from(m) {
                return Err(Error::ResidueOutOfRange { residue: a, m });
            }
            let bit = 1u128 << a;
            if bits & bit != 0 {
                return Err(Error::DuplicateResidue(a as u32));
            }
            bits |= bit;
        }
        Ok(Self { m, bits })
    }

    /// Builds a set from arbitrary integers, reducing each modulo `m` and
    /// merging repeats.
    pub fn from_residues_mod(m: u32, values: impl IntoIterator<Item = i64>) -> Result<Self> {
        check_modulus(m)?;
        let bits = values
            .into_iter()
            .fold(0u128, |acc, v| acc | 1u128 << v.rem_euclid(i64::from(m)));
        Ok(Self { m, bits })
    }

    pub fn from_bits(m: u32, bits: u128) -> Result<Self> {
        check_modulus(m)?;
        if bits & !full_mask(m) != 0 {
            let residue = 128 - bits.leading_zeros() - 1;
            return Err(Error::ResidueOutOfRange {
                residue: i64::from(residue),
                m,
            });
        }
        Ok(Self { m, bits })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn bits(&self) -> u128 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, a: u32) -> bool {
        a < self.m && self.bits >> a & 1 == 1
    }

    /// `Z_m \ self`.
    pub fn complement(&self) -> Self {
        Self {
            m: self.m,
            bits: !self.bits & full_mask(self.m),
        }
    }

    /// Members in increasing order.
    pub fn iter(&self) -> Members {
        Members { bits: self.bits }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }
}

pub struct Members {
    bits: u128,
}

impl Iterator for Members {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.bits == 0 {
            return None;
        }
        let a = self.bits.trailing_zeros();
        self.bits &= self.bits - 1;
        Some(a)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.bits.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

/// Comma-separated members, e.g. `0,1,5`; the empty set prints as an empty string.
impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}} ⊆ Z_{}", self.m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn membership_and_complement() {
        let a = ResidueSet::from_members(6, [0, 3, 5]).unwrap();
        assert_eq!(a.len(), 3);
        assert!(a.contains(3) && !a.contains(1) && !a.contains(6));
        assert_eq!(a.complement().to_vec(), vec![1, 2, 4]);
        assert_eq!(a.to_string(), "0,3,5");
    }

    #[test]
    fn rejects_out_of_range_and_duplicates() {
        assert_eq!(
            ResidueSet::from_members(4, [0, 9]),
            Err(Error::ResidueOutOfRange { residue: 9, m: 4 })
        );
        assert_eq!(
            ResidueSet::from_members(4, [-1]),
            Err(Error::ResidueOutOfRange { residue: -1, m: 4 })
        );
        assert_eq!(
            ResidueSet::from_members(4, [1, 1]),
            Err(Error::DuplicateResidue(1))
        );
        assert!(ResidueSet::from_bits(4, 0b1_0000).is_err());
        assert!(ResidueSet::empty(129).is_err());
    }

    #[test]
    fn full_modulus_edges() {
        let full = ResidueSet::full(128).unwrap();
        assert_eq!(full.len(), 128);
        assert!(full.complement().is_empty());
        assert_eq!(
            ResidueSet::from_residues_mod(5, [-1, 9, 4])
                .unwrap()
                .to_vec(),
            vec![4]
        );
    }

    #[test]
    fn serde_shape() {
        let a = ResidueSet::from_members(4, [1, 0]).unwrap();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"m":4,"members":[0,1]}"#);
        assert_eq!(serde_json::from_str::<ResidueSet>(&json).unwrap(), a);
        assert!(serde_json::from_str::<ResidueSet>(r#"{"m":4,"members":[7]}"#).is_err());
    }

    proptest! {
        #[test]
        fn complement_partitions(m in 2u32..=128, seed: u128) {
            let a = ResidueSet::from_bits(m, seed & full_mask(m)).unwrap();
            let b = a.complement();
            prop_assert_eq!(a.bits() & b.bits(), 0);
            prop_assert_eq!(a.bits() | b.bits(), full_mask(m));
            prop_assert_eq!(a.len() + b.len(), m as usize);
            prop_assert_eq!(b.complement(), a);
        }
    }
}
