//! Number-theory primitives: factorization, totient, gcds, valuations and
//! divisors. Factorization is deterministic trial division, which is all the
//! desk-scale moduli used here ever need.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{domain, Result};
use crate::scalar::Int;

/// Exponent of a prime in an integer. Zero has every prime to infinite order.
///
/// `Finite(_) < Infinite` so comparisons against thresholds never need a
/// sentinel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(r) => Some(r),
            Valuation::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// `p^exp | a` given `self = v_p(a)`.
    pub fn divides(self, exp: u32) -> bool {
        self >= Valuation::Finite(exp)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(r) => write!(f, "{r}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Prime-power decomposition of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization<Z> {
    value: Z,
    factors: Vec<(Z, u32)>,
}

impl<Z: Int> Factorization<Z> {
    pub fn value(&self) -> &Z {
        &self.value
    }

    /// `(prime, exponent)` pairs, primes strictly increasing.
    pub fn factors(&self) -> &[(Z, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &Z> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Exponent of `p` in the value, zero if `p` does not divide it.
    pub fn exponent_of(&self, p: &Z) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, r)| *r)
    }

    pub fn smallest_prime(&self) -> Option<&Z> {
        self.factors.first().map(|(p, _)| p)
    }

    /// `φ(value / t)` for a divisor `t` of the value, read off the factorization.
    pub fn phi_of_quotient(&self, t: &Z) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, (p, r)| {
            let left = match valuation_unchecked(p, t) {
                Valuation::Finite(v) => r.saturating_sub(v),
                Valuation::Infinite => 0,
            };
            if left == 0 {
                acc
            } else {
                let p = p.to_big();
                acc * (&p - 1u32) * p.pow(left - 1)
            }
        })
    }

    /// `φ` of the factored value.
    pub fn phi(&self) -> BigUint {
        self.factors.iter().fold(BigUint::one(), |acc, (p, r)| {
            let p = p.to_big();
            acc * (&p - 1u32) * p.pow(r - 1)
        })
    }
}

/// Prime factorization of `n ≥ 2` by trial division.
pub fn factorize<Z: Int>(n: &Z) -> Result<Factorization<Z>> {
    if *n < Z::small(2) {
        return Err(domain(format!("factorize needs n >= 2, got {n}")));
    }
    Ok(trial_divide(n))
}

fn trial_divide<Z: Int>(n: &Z) -> Factorization<Z> {
    let mut rest = n.clone();
    let mut factors = Vec::new();
    let mut d = Z::small(2);
    while d.clone() * d.clone() <= rest {
        if rest.is_multiple_of(&d) {
            let mut r = 0;
            while rest.is_multiple_of(&d) {
                rest = rest / d.clone();
                r += 1;
            }
            factors.push((d.clone(), r));
        }
        d = if d == Z::small(2) {
            Z::small(3)
        } else {
            d + Z::small(2)
        };
    }
    if rest > Z::one() {
        factors.push((rest, 1));
    }
    Factorization {
        value: n.clone(),
        factors,
    }
}

pub fn is_prime<Z: Int>(n: &Z) -> bool {
    if *n < Z::small(2) {
        return false;
    }
    let f = trial_divide(n);
    f.factors.len() == 1 && f.factors[0].1 == 1
}

/// Euler's totient. `φ(1) = 1`.
pub fn euler_phi<Z: Int>(n: &Z) -> Result<BigUint> {
    if n.is_zero() {
        return Err(domain("euler_phi needs n >= 1"));
    }
    if n.is_one() {
        return Ok(BigUint::one());
    }
    Ok(trial_divide(n).phi())
}

/// gcd of every value together with `n`; the empty list gives `n`.
pub fn gcd_many<Z: Int>(values: &[Z], n: &Z) -> Z {
    values.iter().fold(n.clone(), |g, v| g.gcd(v))
}

/// Largest `r` with `p^r | a`, or [`Valuation::Infinite`] for `a = 0`.
pub fn p_valuation<Z: Int>(p: &Z, a: &Z) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(domain(format!("p_valuation needs a prime, got {p}")));
    }
    Ok(valuation_unchecked(p, a))
}

/// Valuation for a caller that already knows `p` is prime.
pub(crate) fn valuation_unchecked<Z: Int>(p: &Z, a: &Z) -> Valuation {
    if a.is_zero() {
        return Valuation::Infinite;
    }
    let mut a = a.clone();
    let mut r = 0;
    while a.is_multiple_of(p) {
        a = a / p.clone();
        r += 1;
    }
    Valuation::Finite(r)
}

/// Positive divisors of `n ≥ 1` in increasing order.
pub fn divisors<Z: Int>(n: &Z) -> Result<Vec<Z>> {
    if n.is_zero() {
        return Err(domain("divisors needs n >= 1"));
    }
    let mut divs = vec![Z::one()];
    if n.is_one() {
        return Ok(divs);
    }
    for (p, r) in trial_divide(n).factors {
        let mut next = Vec::with_capacity(divs.len() * (r as usize + 1));
        for d in &divs {
            let mut power = d.clone();
            next.push(power.clone());
            for _ in 0..r {
                power = power * p.clone();
                next.push(power.clone());
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}

/// Residues `x ∈ [0, n)` with `gcd(x, n) = t`, in increasing order.
///
/// Built as `t·u` over the units `u` of `Z_{n/t}`, which is a bijection onto
/// the residues of gcd exactly `t`.
pub(crate) fn residues_with_gcd<Z: Int>(n: &Z, t: &Z) -> Vec<Z> {
    let quotient = n.clone() / t.clone();
    let mut out = Vec::new();
    let mut u = Z::zero();
    while u < quotient {
        if u.gcd(&quotient).is_one() {
            out.push(t.clone() * u.clone());
        }
        u = u + Z::one();
    }
    out
}
