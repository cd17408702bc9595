//! Restricted linear congruences
//!
//! ```text
//! a_1 x_1 + … + a_k x_k ≡ b (mod n),   gcd(x_i, n) = t_i
//! ```
//!
//! The number of solutions has a closed form as a product over the primes of
//! `n`. For each prime `p` with exponent `r` in `n` let the *level* `m` be the
//! least `j ≥ 1` such that some `a_i t_i` is not divisible by `p^j`, and let
//! the *escaping count* `e` be the number of indices with `p^m ∤ a_i t_i`.
//! Then the count is `∏ φ(n/t_i)` times one local factor per prime:
//!
//! | condition                      | local factor                                  |
//! |--------------------------------|-----------------------------------------------|
//! | `m ≤ r`, `p^{m-1} ∤ b`         | no solutions                                  |
//! | `m ≤ r`, `p^m ∣ b`             | `p^{m-r-1} (1 - (-1)^{e-1} / (p-1)^{e-1})`    |
//! | `m ≤ r`, `p^{m-1} ∥ b`         | `p^{m-r-1} (1 - (-1)^e / (p-1)^e)`            |
//! | `m > r`, `p^r ∤ b`             | no solutions                                  |
//! | `m > r`, `p^r ∣ b`             | `1`                                           |
//!
//! [`count_restricted`] evaluates that product in exact rationals and checks
//! that it lands on an integer. [`unsolvable_case`] classifies the zero
//! counts independently, and [`enumerate_solutions`] is the brute-force
//! oracle both are tested against.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::enumerate::{check_cap, CartesianProduct};
use crate::error::{domain, Error, Result};
use crate::nt::{factorize, gcd_many, is_prime, valuation_unchecked, Factorization, Valuation};
use crate::scalar::{check_modulus, dot_mod, Int};

/// One restricted linear congruence, coefficients and target reduced mod `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceInstance<Z> {
    modulus: Z,
    coeffs: Vec<Z>,
    target: Z,
    gcds: Vec<Z>,
    factorization: Factorization<Z>,
}

impl<Z: Int> CongruenceInstance<Z> {
    pub fn new(n: Z, a: Vec<Z>, b: Z, t: Vec<Z>) -> Result<Self> {
        check_modulus(&n)?;
        if a.is_empty() {
            return Err(domain("a congruence needs at least one unknown"));
        }
        if a.len() != t.len() {
            return Err(domain(format!(
                "{} coefficients but {} gcd constraints",
                a.len(),
                t.len()
            )));
        }
        for ti in &t {
            if ti.is_zero() || !n.is_multiple_of(ti) {
                return Err(domain(format!("constraint {ti} does not divide {n}")));
            }
        }
        let coeffs = a.into_iter().map(|ai| ai % n.clone()).collect();
        let target = b % n.clone();
        let factorization = factorize(&n)?;
        Ok(CongruenceInstance {
            modulus: n,
            coeffs,
            target,
            gcds: t,
            factorization,
        })
    }

    /// Instance with every unknown restricted to the units (`t_i = 1`).
    pub fn units(n: Z, a: Vec<Z>, b: Z) -> Result<Self> {
        let t = vec![Z::one(); a.len()];
        Self::new(n, a, b, t)
    }

    pub fn n(&self) -> &Z {
        &self.modulus
    }

    pub fn a(&self) -> &[Z] {
        &self.coeffs
    }

    pub fn b(&self) -> &Z {
        &self.target
    }

    pub fn t(&self) -> &[Z] {
        &self.gcds
    }

    pub fn k(&self) -> usize {
        self.coeffs.len()
    }

    pub fn factorization(&self) -> &Factorization<Z> {
        &self.factorization
    }

    pub fn all_coefficients_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `∏ φ(n/t_i)`, the number of vectors meeting the gcd constraints.
    pub fn constrained_space_size(&self) -> BigUint {
        self.gcds
            .iter()
            .map(|t| self.factorization.phi_of_quotient(t))
            .product()
    }

    /// Local data for every prime of `n`, primes increasing.
    pub fn local_data(&self) -> Vec<PrimeLocalData<Z>> {
        self.factorization
            .factors()
            .iter()
            .map(|(p, r)| local_data_unchecked(p, *r, &self.coeffs, &self.gcds))
            .collect()
    }
}

/// Per-prime parameters of the counting formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeLocalData<Z> {
    pub prime: Z,
    /// Exponent of `prime` in the modulus.
    pub exponent: u32,
    /// Least `j ≥ 1` with some `p^j ∤ a_i t_i`; infinite iff every `a_i t_i = 0`.
    pub level: Valuation,
    /// Number of indices with `p^level ∤ a_i t_i`; zero when the level is infinite.
    pub escaping: u32,
}

impl<Z: Int> PrimeLocalData<Z> {
    /// `level ≤ exponent`, the regime in which the prime contributes a factor.
    pub fn is_active(&self) -> bool {
        self.level <= Valuation::Finite(self.exponent)
    }
}

/// Local data for prime `p` of exponent `r ≥ 1` in the modulus.
pub fn prime_local<Z: Int>(p: &Z, r: u32, a: &[Z], t: &[Z]) -> Result<PrimeLocalData<Z>> {
    if a.is_empty() || a.len() != t.len() {
        return Err(domain(format!(
            "coefficient and constraint vectors must be nonempty and of equal length ({} vs {})",
            a.len(),
            t.len()
        )));
    }
    if r == 0 {
        return Err(domain("prime exponent must be at least 1"));
    }
    if !is_prime(p) {
        return Err(domain(format!("{p} is not prime")));
    }
    Ok(local_data_unchecked(p, r, a, t))
}

fn local_data_unchecked<Z: Int>(p: &Z, r: u32, a: &[Z], t: &[Z]) -> PrimeLocalData<Z> {
    let vals: Vec<Valuation> = a
        .iter()
        .zip(t)
        .map(
            |(ai, ti)| match (valuation_unchecked(p, ai), valuation_unchecked(p, ti)) {
                (Valuation::Finite(x), Valuation::Finite(y)) => Valuation::Finite(x + y),
                _ => Valuation::Infinite,
            },
        )
        .collect();
    let min = vals.iter().copied().min().unwrap_or(Valuation::Infinite);
    let (level, escaping) = match min {
        Valuation::Infinite => (Valuation::Infinite, 0),
        Valuation::Finite(v) => (
            Valuation::Finite(v + 1),
            vals.iter().filter(|&&x| x == min).count() as u32,
        ),
    };
    PrimeLocalData {
        prime: p.clone(),
        exponent: r,
        level,
        escaping,
    }
}

/// The local contribution of one prime to the count.
enum LocalTerm {
    Blocked,
    Factor(BigRational),
}

fn local_term<Z: Int>(data: &PrimeLocalData<Z>, target_val: Valuation) -> LocalTerm {
    let r = data.exponent;
    match data.level {
        Valuation::Finite(m) if m <= r => {
            if !target_val.divides(m - 1) {
                LocalTerm::Blocked
            } else if target_val.divides(m) {
                LocalTerm::Factor(active_factor(&data.prime, m, r, data.escaping - 1))
            } else {
                LocalTerm::Factor(active_factor(&data.prime, m, r, data.escaping))
            }
        }
        _ => {
            if target_val.divides(r) {
                LocalTerm::Factor(BigRational::one())
            } else {
                LocalTerm::Blocked
            }
        }
    }
}

/// `p^{m-r-1} (1 - (-1)^j / (p-1)^j)` for `m ≤ r`.
fn active_factor<Z: Int>(p: &Z, m: u32, r: u32, j: u32) -> BigRational {
    let p = BigInt::from_biguint(Sign::Plus, p.to_big());
    let p_minus_one = &p - 1u32;
    let scale = BigRational::new(BigInt::one(), p.pow(r + 1 - m));
    let sign = if j.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    };
    let ratio = BigRational::new(sign, p_minus_one.pow(j));
    scale * (BigRational::one() - ratio)
}

/// `count / ∏ φ(n/t_i)` for an instance with some nonzero coefficient: the
/// product of local factors, zero when some prime blocks.
pub(crate) fn solution_density<Z: Int>(inst: &CongruenceInstance<Z>) -> BigRational {
    debug_assert!(!inst.all_coefficients_zero());
    density_from_local(&inst.local_data(), inst.b())
}

/// Product of local factors for target `b`, given the per-prime data of a
/// coefficient vector with some nonzero entry.
pub(crate) fn density_from_local<Z: Int>(local: &[PrimeLocalData<Z>], b: &Z) -> BigRational {
    let mut acc = BigRational::one();
    for data in local {
        let target_val = valuation_unchecked(&data.prime, b);
        match local_term(data, target_val) {
            LocalTerm::Blocked => return BigRational::zero(),
            LocalTerm::Factor(f) => acc *= f,
        }
    }
    acc
}

/// Exact number of solutions of a restricted linear congruence.
pub fn count_restricted<Z: Int>(inst: &CongruenceInstance<Z>) -> Result<BigUint> {
    let space = inst.constrained_space_size();
    if inst.all_coefficients_zero() {
        return Ok(if inst.b().is_zero() {
            space
        } else {
            BigUint::zero()
        });
    }
    let total = solution_density(inst) * BigRational::from_integer(BigInt::from(space));
    if !total.is_integer() || total.numer().sign() == Sign::Minus {
        return Err(Error::Internal(format!(
            "solution count {total} is not a nonnegative integer for n={} a={:?} b={} t={:?}",
            inst.n(),
            inst.a(),
            inst.b(),
            inst.t()
        )));
    }
    Ok(total.numer().magnitude().clone())
}

/// The five ways a restricted congruence with a nonzero coefficient can
/// have no solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Case {
    /// `m ≤ r` and `p^{m-1} ∤ b`.
    I,
    /// `m > r` and `p^r ∤ b`.
    II,
    /// `m ≤ r`, `e = 1` and `p^m ∣ b`.
    III,
    /// `p = 2`, `m ≤ r`, `e` odd and `2^m ∣ b`.
    IV,
    /// `p = 2`, `m ≤ r`, `e` even and `2^{m-1} ∥ b`.
    V,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::I => "I",
            Case::II => "II",
            Case::III => "III",
            Case::IV => "IV",
            Case::V => "V",
        })
    }
}

/// A no-solution case together with the prime that triggers it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction<Z> {
    pub case: Case,
    pub prime: Z,
}

/// First obstruction to solvability, primes increasing and cases in order
/// I–V within each prime; `None` iff the congruence has a solution.
pub fn unsolvable_case<Z: Int>(inst: &CongruenceInstance<Z>) -> Result<Option<Obstruction<Z>>> {
    if inst.all_coefficients_zero() {
        return Err(domain(
            "no-solution classification needs a nonzero coefficient",
        ));
    }
    let two = Z::small(2);
    for data in inst.local_data() {
        let vb = valuation_unchecked(&data.prime, inst.b());
        let r = data.exponent;
        let e = data.escaping;
        let m = data
            .level
            .finite()
            .expect("finite level with a nonzero coefficient");
        let active = m <= r;
        let exactly = |j: u32| vb.divides(j) && !vb.divides(j + 1);
        let is_two = data.prime == two;
        let case = if active && !vb.divides(m - 1) {
            Some(Case::I)
        } else if !active && !vb.divides(r) {
            Some(Case::II)
        } else if active && e == 1 && vb.divides(m) {
            Some(Case::III)
        } else if is_two && active && e % 2 == 1 && vb.divides(m) {
            Some(Case::IV)
        } else if is_two && active && e % 2 == 0 && exactly(m - 1) {
            Some(Case::V)
        } else {
            None
        };
        if let Some(case) = case {
            return Ok(Some(Obstruction {
                case,
                prime: data.prime,
            }));
        }
    }
    Ok(None)
}

/// Solutions over all of `Z_n^k`: `ℓ n^{k-1}` when `ℓ = gcd(a_1, …, a_k, n)`
/// divides `b`, else zero.
pub fn count_unrestricted<Z: Int>(n: &Z, a: &[Z], b: &Z) -> Result<BigUint> {
    check_modulus(n)?;
    if a.is_empty() {
        return Err(domain("a congruence needs at least one unknown"));
    }
    let reduced: Vec<Z> = a.iter().map(|ai| ai.clone() % n.clone()).collect();
    let ell = gcd_many(&reduced, n);
    if !(b.clone() % n.clone()).is_multiple_of(&ell) {
        return Ok(BigUint::zero());
    }
    Ok(ell.to_big() * Pow::pow(&n.to_big(), a.len() as u32 - 1))
}

/// Whether `Σ a_i x_i ≡ b (mod n)` has a solution with every `x_i` a unit.
pub fn knapsack_solvable<Z: Int>(n: &Z, a: &[Z], b: &Z) -> Result<bool> {
    let inst = CongruenceInstance::units(n.clone(), a.to_vec(), b.clone())?;
    Ok(unsolvable_case(&inst)?.is_none())
}

/// Residues with the given gcd against `n`, found by scanning all of `Z_n`.
fn scan_residues_with_gcd<Z: Int>(n: &Z, t: &Z) -> Vec<Z> {
    let mut out = Vec::new();
    let mut x = Z::zero();
    while x < *n {
        if x.gcd(n) == *t {
            out.push(x.clone());
        }
        x = x + Z::one();
    }
    out
}

fn scan_guard<Z: Int>(n: &Z, k: usize, cap: u64) -> Result<()> {
    check_cap(&(n.to_big() * k), cap)
}

/// Iterator over the solutions in lexicographic order, by brute force.
///
/// Each coordinate ranges over the residues of `Z_n` with the required gcd;
/// fails when that search space exceeds `cap`.
pub fn solutions<Z: Int>(
    inst: &CongruenceInstance<Z>,
    cap: u64,
) -> Result<impl Iterator<Item = Vec<Z>> + '_> {
    scan_guard(inst.n(), inst.k(), cap)?;
    let lists: Vec<Vec<Z>> = inst
        .t()
        .iter()
        .map(|t| scan_residues_with_gcd(inst.n(), t))
        .collect();
    let walk = CartesianProduct::new(lists);
    check_cap(&walk.len_big(), cap)?;
    Ok(walk.filter(move |x| dot_mod(inst.a(), x, inst.n()) == *inst.b()))
}

/// All solutions in lexicographic order, by brute force.
pub fn enumerate_solutions<Z: Int>(inst: &CongruenceInstance<Z>, cap: u64) -> Result<Vec<Vec<Z>>> {
    Ok(solutions(inst, cap)?.collect())
}

/// All `x ∈ Z_n^k` with `Σ a_i x_i ≡ b (mod n)` and no gcd restriction, by
/// brute force.
pub fn enumerate_unrestricted<Z: Int>(n: &Z, a: &[Z], b: &Z, cap: u64) -> Result<Vec<Vec<Z>>> {
    check_modulus(n)?;
    scan_guard(n, a.len(), cap)?;
    let mut all = Vec::new();
    let mut x = Z::zero();
    while x < *n {
        all.push(x.clone());
        x = x + Z::one();
    }
    let walk = CartesianProduct::new(vec![all; a.len()]);
    check_cap(&walk.len_big(), cap)?;
    let a: Vec<Z> = a.iter().map(|ai| ai.clone() % n.clone()).collect();
    let b = b.clone() % n.clone();
    Ok(walk.filter(|x| dot_mod(&a, x, n) == b).collect())
}
