//! Integer scalars the library is generic over.
//!
//! Every modulus, residue, coefficient and divisor is an [`Int`]. Counts and
//! probabilities are always arbitrary precision ([`BigUint`] and
//! [`crate::ExactProb`]) regardless of the scalar, because products such as
//! `∏ φ(n/t_i)` outgrow 64 bits long before the modulus does.
//!
//! Fixed-width scalars carry a [`Int::modulus_limit`]: any modulus at or below
//! it keeps `(n-1)·(n-1) + (n-1)` representable, so reducing after every
//! multiply-add never wraps.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::{BigUint, RandBigInt, ToBigUint};
use num_integer::Integer;
use num_traits::{FromPrimitive, ToPrimitive};
use rand::Rng;

pub trait Int:
    Integer
    + Clone
    + Debug
    + Display
    + Hash
    + FromPrimitive
    + ToPrimitive
    + ToBigUint
    + Send
    + Sync
    + 'static
{
    /// Largest admissible modulus, or `None` when the type is unbounded.
    fn modulus_limit() -> Option<Self>;

    /// Uniform draw from `[0, bound)`. `bound` must be positive.
    fn random_below<R: Rng + ?Sized>(bound: &Self, rng: &mut R) -> Self;

    fn from_biguint(value: &BigUint) -> Option<Self>;

    fn to_big(&self) -> BigUint {
        self.to_biguint()
            .expect("unsigned scalar converts to BigUint")
    }

    fn small(value: u64) -> Self {
        Self::from_u64(value).expect("small constant fits every scalar")
    }
}

macro_rules! impl_fixed {
    ($($ty:ty => $limit:expr),* $(,)?) => {$(
        impl Int for $ty {
            fn modulus_limit() -> Option<Self> {
                Some($limit)
            }

            fn random_below<R: Rng + ?Sized>(bound: &Self, rng: &mut R) -> Self {
                rng.gen_range(0..*bound)
            }

            fn from_biguint(value: &BigUint) -> Option<Self> {
                value.to_string().parse().ok()
            }
        }
    )*};
}

impl_fixed! {
    u32 => u16::MAX as u32,
    u64 => u32::MAX as u64,
    u128 => u64::MAX as u128,
}

impl Int for BigUint {
    fn modulus_limit() -> Option<Self> {
        None
    }

    fn random_below<R: Rng + ?Sized>(bound: &Self, rng: &mut R) -> Self {
        rng.gen_biguint_below(bound)
    }

    fn from_biguint(value: &BigUint) -> Option<Self> {
        Some(value.clone())
    }
}

/// Rejects moduli below 2 or above the scalar's [`Int::modulus_limit`].
pub(crate) fn check_modulus<Z: Int>(n: &Z) -> crate::Result<()> {
    if *n < Z::small(2) {
        return Err(crate::error::domain(format!(
            "modulus must be >= 2, got {n}"
        )));
    }
    if let Some(limit) = Z::modulus_limit() {
        if *n > limit {
            return Err(crate::error::domain(format!(
                "modulus {n} exceeds {limit}, the largest this scalar type supports"
            )));
        }
    }
    Ok(())
}

/// `(a·b) mod n` for reduced operands.
pub(crate) fn mul_mod<Z: Int>(a: &Z, b: &Z, n: &Z) -> Z {
    (a.clone() * b.clone()) % n.clone()
}

/// `(a+b) mod n` for reduced operands.
pub(crate) fn add_mod<Z: Int>(a: &Z, b: &Z, n: &Z) -> Z {
    (a.clone() + b.clone()) % n.clone()
}

/// `(a-b) mod n` for reduced operands.
pub(crate) fn sub_mod<Z: Int>(a: &Z, b: &Z, n: &Z) -> Z {
    if a >= b {
        a.clone() - b.clone()
    } else {
        n.clone() - (b.clone() - a.clone())
    }
}

/// `Σ a_i x_i mod n` with reduction after every step.
pub(crate) fn dot_mod<Z: Int>(a: &[Z], x: &[Z], n: &Z) -> Z {
    a.iter().zip(x).fold(Z::zero(), |acc, (ai, xi)| {
        add_mod(&acc, &mul_mod(ai, xi, n), n)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limits_keep_products_in_range() {
        let n = u64::modulus_limit().unwrap();
        let m = n - 1;
        assert!(m.checked_mul(m).and_then(|p| p.checked_add(m)).is_some());
        let n = u32::modulus_limit().unwrap();
        let m = n - 1;
        assert!(m.checked_mul(m).and_then(|p| p.checked_add(m)).is_some());
        assert!(BigUint::modulus_limit().is_none());
    }

    #[test]
    fn sub_mod_wraps() {
        assert_eq!(sub_mod(&1u64, &3, &7), 5);
        assert_eq!(sub_mod(&3u64, &1, &7), 2);
        assert_eq!(sub_mod(&0u64, &0, &7), 0);
    }

    #[test]
    fn dot_mod_matches_direct() {
        assert_eq!(dot_mod(&[2u64, 5], &[1, 1], &9), 7);
        assert_eq!(dot_mod(&[3u64, 4], &[1, 2], &5), 1);
    }

    #[test]
    fn big_conversions() {
        let v = BigUint::from(1234u32);
        assert_eq!(u64::from_biguint(&v), Some(1234));
        assert_eq!(u32::from_biguint(&(BigUint::from(u64::MAX))), None);
        assert_eq!(7u64.to_big(), BigUint::from(7u32));
    }
}
