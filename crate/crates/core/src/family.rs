//! The dot-product hash families MMH*, RDH and GRDH.
//!
//! All three hash a message `m ∈ Z_n^k` to `m · x mod n`. They differ only in
//! the key domain:
//!
//! * MMH*: `n` prime, `x` anywhere in `Z_n^k`.
//! * RDH: `x` in `(Z_n^*)^k`.
//! * GRDH: `gcd(x_i, n) = t_i` for given divisors `t_i` of `n`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use rand::Rng;

use crate::enumerate::{check_cap, CartesianProduct};
use crate::error::{domain, Result};
use crate::nt::{factorize, is_prime, residues_with_gcd, Factorization};
use crate::scalar::{check_modulus, dot_mod, Int};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    MmhStar,
    Rdh,
    Grdh,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::MmhStar => "MMH*",
            Flavor::Rdh => "RDH",
            Flavor::Grdh => "GRDH",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParams<Z> {
    modulus: Z,
    gcds: Vec<Z>,
    flavor: Flavor,
    factorization: Factorization<Z>,
}

impl<Z: Int> FamilyParams<Z> {
    /// MMH* over the prime `p` with `k` words.
    pub fn mmh_star(p: Z, k: usize) -> Result<Self> {
        if !is_prime(&p) {
            return Err(domain(format!("MMH* needs a prime modulus, got {p}")));
        }
        Self::build(p, vec![Z::one(); k], Flavor::MmhStar)
    }

    /// RDH over `n` with `k` words: keys are unit vectors.
    pub fn rdh(n: Z, k: usize) -> Result<Self> {
        Self::build(n, vec![Z::one(); k], Flavor::Rdh)
    }

    /// GRDH over `n` with key constraints `gcd(x_i, n) = t_i`.
    pub fn grdh(n: Z, t: Vec<Z>) -> Result<Self> {
        Self::build(n, t, Flavor::Grdh)
    }

    fn build(n: Z, t: Vec<Z>, flavor: Flavor) -> Result<Self> {
        check_modulus(&n)?;
        if t.is_empty() {
            return Err(domain("a family needs at least one word (k >= 1)"));
        }
        for ti in &t {
            if ti.is_zero() || !n.is_multiple_of(ti) {
                return Err(domain(format!("constraint {ti} does not divide {n}")));
            }
        }
        let factorization = factorize(&n)?;
        Ok(FamilyParams {
            modulus: n,
            gcds: t,
            flavor,
            factorization,
        })
    }

    pub fn n(&self) -> &Z {
        &self.modulus
    }

    pub fn k(&self) -> usize {
        self.gcds.len()
    }

    /// Key gcd constraints. All ones for MMH* and RDH; MMH* keys ignore them.
    pub fn t(&self) -> &[Z] {
        &self.gcds
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn factorization(&self) -> &Factorization<Z> {
        &self.factorization
    }

    pub fn smallest_prime(&self) -> &Z {
        self.factorization
            .smallest_prime()
            .expect("modulus >= 2 has a prime factor")
    }

    /// Keys restricted to units: RDH, or GRDH with every `t_i = 1`.
    pub fn units_only(&self) -> bool {
        self.flavor != Flavor::MmhStar && self.gcds.iter().all(One::is_one)
    }

    pub fn is_valid_key(&self, x: &[Z]) -> bool {
        x.len() == self.k()
            && x.iter().zip(&self.gcds).all(|(xi, ti)| {
                *xi < self.modulus
                    && (self.flavor == Flavor::MmhStar || xi.gcd(&self.modulus) == *ti)
            })
    }

    /// Values coordinate `i` of a key may take, increasing.
    fn coordinate_domain(&self, i: usize) -> Vec<Z> {
        match self.flavor {
            Flavor::MmhStar => {
                let mut all = Vec::new();
                let mut x = Z::zero();
                while x < self.modulus {
                    all.push(x.clone());
                    x = x + Z::one();
                }
                all
            }
            _ => residues_with_gcd(&self.modulus, &self.gcds[i]),
        }
    }
}

/// A hash key `x`, valid for the family it was built against.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HashKey<Z>(Vec<Z>);

impl<Z: Int> HashKey<Z> {
    pub fn new(params: &FamilyParams<Z>, x: Vec<Z>) -> Result<Self> {
        if !params.is_valid_key(&x) {
            return Err(domain(format!(
                "{x:?} is not a key of {} over n={} with t={:?}",
                params.flavor(),
                params.n(),
                params.t()
            )));
        }
        Ok(HashKey(x))
    }

    pub fn as_slice(&self) -> &[Z] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Z> {
        self.0
    }
}

/// A message `m ∈ Z_n^k`, entries reduced.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Message<Z>(Vec<Z>);

impl<Z: Int> Message<Z> {
    pub fn new(n: &Z, m: Vec<Z>) -> Self {
        Message(m.into_iter().map(|v| v % n.clone()).collect())
    }

    pub fn as_slice(&self) -> &[Z] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Z> {
        self.0
    }
}

/// `m · x mod n`.
pub fn hash<Z: Int>(params: &FamilyParams<Z>, key: &HashKey<Z>, msg: &Message<Z>) -> Result<Z> {
    if !params.is_valid_key(key.as_slice()) {
        return Err(domain("key does not belong to this family"));
    }
    if msg.as_slice().len() != params.k() {
        return Err(domain(format!(
            "message has {} words, family expects {}",
            msg.as_slice().len(),
            params.k()
        )));
    }
    let m: Vec<Z> = msg
        .as_slice()
        .iter()
        .map(|v| v.clone() % params.n().clone())
        .collect();
    Ok(dot_mod(&m, key.as_slice(), params.n()))
}

/// Number of keys: `∏ φ(n/t_i)`, or `p^k` for MMH*.
pub fn key_space_size<Z: Int>(params: &FamilyParams<Z>) -> BigUint {
    match params.flavor {
        Flavor::MmhStar => Pow::pow(&params.n().to_big(), params.k() as u32),
        _ => params
            .t()
            .iter()
            .map(|t| params.factorization.phi_of_quotient(t))
            .product(),
    }
}

/// Uniformly random key.
///
/// GRDH coordinates are drawn as `t_i · u_i` with `u_i` a uniform unit of
/// `Z_{n/t_i}`, by rejection.
pub fn sample_key<Z: Int, R: Rng + ?Sized>(params: &FamilyParams<Z>, rng: &mut R) -> HashKey<Z> {
    let x = params
        .t()
        .iter()
        .map(|t| match params.flavor {
            Flavor::MmhStar => Z::random_below(params.n(), rng),
            _ => {
                let quotient = params.n().clone() / t.clone();
                loop {
                    let u = Z::random_below(&quotient, rng);
                    if u.gcd(&quotient).is_one() {
                        break t.clone() * u;
                    }
                }
            }
        })
        .collect();
    HashKey(x)
}

/// Every key in lexicographic order. Fails when there are more than `cap`.
pub fn enumerate_keys<Z: Int>(params: &FamilyParams<Z>, cap: u64) -> Result<Vec<HashKey<Z>>> {
    check_cap(&key_space_size(params), cap)?;
    let lists = (0..params.k())
        .map(|i| params.coordinate_domain(i))
        .collect();
    Ok(CartesianProduct::new(lists).map(HashKey).collect())
}
