//! Exact collision and difference probabilities for the dot-product families,
//! maximum-probability search, and almost-(Δ-)universality classification.
//!
//! For a nonzero difference `a = m - m'` and a target `b`, the probability
//! over a uniform key that `Σ a_i x_i ≡ b (mod n)` is the restricted
//! congruence count divided by the key-space size, which is exactly the
//! product of local factors from [`crate::congruence`]. MMH* keys are
//! unrestricted, so its probabilities come from the unrestricted count
//! instead.
//!
//! Summary of the closed forms used by [`classify`], with `p` the smallest
//! prime of `n`:
//!
//! * units-only keys, `n` odd: maximum difference probability `1/(p-1)`,
//!   attained at `a = (n/p, 0, …)`, `b = n/p`; for `k ≥ 2` the maximum
//!   collision probability is also `1/(p-1)`, at `a = (n/p, n/p, 0, …)`.
//! * units-only keys, `n` even: probability one at `a = (n/2, 0, …)`,
//!   `b = n/2`, and for `k ≥ 2` collisions at `a = (n/2, n/2, 0, …)`.
//! * some `t_i > 1`: probability one at `a_i = n/t_i`, all else zero, `b = 0`.
//! * `k = 1` with a unit key: distinct messages never collide.
//! * MMH*: every difference has probability exactly `1/p`.

use num_bigint::BigUint;
use num_traits::{Pow, Zero};

use crate::congruence::{count_unrestricted, density_from_local, CongruenceInstance};
use crate::enumerate::{check_cap, CartesianProduct};
use crate::error::{domain, Error, Result};
use crate::family::{enumerate_keys, key_space_size, FamilyParams, Flavor};
use crate::prob::ExactProb;
use crate::scalar::{dot_mod, Int};

fn reduce_difference<Z: Int>(params: &FamilyParams<Z>, a: &[Z]) -> Result<Vec<Z>> {
    if a.len() != params.k() {
        return Err(domain(format!(
            "difference has {} entries, family has k={}",
            a.len(),
            params.k()
        )));
    }
    let a: Vec<Z> = a.iter().map(|v| v.clone() % params.n().clone()).collect();
    if a.iter().all(Zero::is_zero) {
        return Err(domain("difference vector must be nonzero"));
    }
    Ok(a)
}

/// Probability over a uniform key that `Σ a_i x_i ≡ b (mod n)`, for `a ≠ 0`.
pub fn delta_prob<Z: Int>(params: &FamilyParams<Z>, a: &[Z], b: &Z) -> Result<ExactProb> {
    let a = reduce_difference(params, a)?;
    let b = b.clone() % params.n().clone();
    match params.flavor() {
        Flavor::MmhStar => {
            let count = count_unrestricted(params.n(), &a, &b)?;
            ExactProb::new(count, key_space_size(params))
        }
        _ => {
            let inst = CongruenceInstance::new(params.n().clone(), a, b, params.t().to_vec())?;
            ExactProb::from_rational(density_from_local(&inst.local_data(), inst.b()))
        }
    }
}

/// Probability over a uniform key that two messages differing by `a ≠ 0` collide.
pub fn collision_prob<Z: Int>(params: &FamilyParams<Z>, a: &[Z]) -> Result<ExactProb> {
    delta_prob(params, a, &Z::zero())
}

/// The same probability as [`delta_prob`], counted over the enumerated key
/// space without any closed form. `a` may be zero here.
pub fn brute_force_prob<Z: Int>(
    params: &FamilyParams<Z>,
    a: &[Z],
    b: &Z,
    cap: u64,
) -> Result<ExactProb> {
    if a.len() != params.k() {
        return Err(domain("difference length does not match k"));
    }
    let n = params.n();
    let a: Vec<Z> = a.iter().map(|v| v.clone() % n.clone()).collect();
    let b = b.clone() % n.clone();
    let keys = enumerate_keys(params, cap)?;
    let hits = keys
        .iter()
        .filter(|x| dot_mod(&a, x.as_slice(), n) == b)
        .count();
    ExactProb::new(hits, keys.len())
}

/// A difference vector and target attaining some probability.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Witness<Z> {
    pub a: Vec<Z>,
    pub b: Z,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxProb<Z> {
    pub prob: ExactProb,
    pub witness: Witness<Z>,
}

/// How [`max_delta_prob`] and [`max_collision_prob`] find the maximum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Search {
    /// Scan every `a ≠ 0` (and every `b`), keeping the lexicographically
    /// smallest maximizer. Fails beyond `cap` candidates.
    Exhaustive { cap: u64 },
    /// Closed-form answer with a canonical witness; no enumeration.
    Analytic,
}

fn nonzero_differences<Z: Int>(params: &FamilyParams<Z>) -> impl Iterator<Item = Vec<Z>> {
    let mut residues = Vec::new();
    let mut x = Z::zero();
    while x < *params.n() {
        residues.push(x.clone());
        x = x + Z::one();
    }
    CartesianProduct::new(vec![residues; params.k()]).filter(|a| !a.iter().all(Zero::is_zero))
}

fn residue_count<Z: Int>(params: &FamilyParams<Z>) -> BigUint {
    Pow::pow(&params.n().to_big(), params.k() as u32)
}

/// Maximum over `a ≠ 0` and `b` of [`delta_prob`], with a witness.
pub fn max_delta_prob<Z: Int>(params: &FamilyParams<Z>, search: Search) -> Result<MaxProb<Z>> {
    match search {
        Search::Analytic => Ok(analytic_delta(params)),
        Search::Exhaustive { cap } => {
            check_cap(&(residue_count(params) * params.n().to_big()), cap)?;
            let mut best: Option<MaxProb<Z>> = None;
            for a in nonzero_differences(params) {
                let scorer = DeltaScorer::new(params, &a)?;
                let mut b = Z::zero();
                while b < *params.n() {
                    let prob = scorer.prob(&b)?;
                    if best.as_ref().is_none_or(|cur| prob > cur.prob) {
                        best = Some(MaxProb {
                            prob,
                            witness: Witness {
                                a: a.clone(),
                                b: b.clone(),
                            },
                        });
                    }
                    b = b + Z::one();
                }
            }
            Ok(best.expect("Z_n^k has a nonzero vector for n >= 2"))
        }
    }
}

/// Maximum over `a ≠ 0` of [`collision_prob`], with a witness (`b = 0`).
pub fn max_collision_prob<Z: Int>(params: &FamilyParams<Z>, search: Search) -> Result<MaxProb<Z>> {
    match search {
        Search::Analytic => Ok(analytic_collision(params)),
        Search::Exhaustive { cap } => {
            check_cap(&residue_count(params), cap)?;
            let mut best: Option<MaxProb<Z>> = None;
            for a in nonzero_differences(params) {
                let prob = DeltaScorer::new(params, &a)?.prob(&Z::zero())?;
                if best.as_ref().is_none_or(|cur| prob > cur.prob) {
                    best = Some(MaxProb {
                        prob,
                        witness: Witness { a, b: Z::zero() },
                    });
                }
            }
            Ok(best.expect("Z_n^k has a nonzero vector for n >= 2"))
        }
    }
}

/// Caches the per-prime data of one difference vector across targets.
struct DeltaScorer<'a, Z: Int> {
    params: &'a FamilyParams<Z>,
    a: Vec<Z>,
    local: Vec<crate::congruence::PrimeLocalData<Z>>,
}

impl<'a, Z: Int> DeltaScorer<'a, Z> {
    fn new(params: &'a FamilyParams<Z>, a: &[Z]) -> Result<Self> {
        let inst = CongruenceInstance::new(
            params.n().clone(),
            a.to_vec(),
            Z::zero(),
            params.t().to_vec(),
        )?;
        Ok(DeltaScorer {
            params,
            a: a.to_vec(),
            local: inst.local_data(),
        })
    }

    fn prob(&self, b: &Z) -> Result<ExactProb> {
        match self.params.flavor() {
            Flavor::MmhStar => delta_prob(self.params, &self.a, b),
            _ => ExactProb::from_rational(density_from_local(&self.local, b)),
        }
    }
}

/// `x` at position `i`, zeros elsewhere.
fn unit_vector<Z: Int>(k: usize, i: usize, x: Z) -> Vec<Z> {
    let mut v = vec![Z::zero(); k];
    v[i] = x;
    v
}

fn first_nontrivial_constraint<Z: Int>(params: &FamilyParams<Z>) -> Option<usize> {
    if params.flavor() == Flavor::MmhStar {
        return None;
    }
    params.t().iter().position(|t| !t.is_one())
}

fn one_over_p_minus_one<Z: Int>(p: &Z) -> ExactProb {
    ExactProb::reciprocal(p.to_big() - 1u32).expect("p >= 3 here")
}

fn analytic_delta<Z: Int>(params: &FamilyParams<Z>) -> MaxProb<Z> {
    let n = params.n();
    let k = params.k();
    if params.flavor() == Flavor::MmhStar {
        return MaxProb {
            prob: ExactProb::reciprocal(n.to_big()).expect("prime modulus"),
            witness: Witness {
                a: unit_vector(k, 0, Z::one()),
                b: Z::zero(),
            },
        };
    }
    if let Some(i) = first_nontrivial_constraint(params) {
        return MaxProb {
            prob: ExactProb::one(),
            witness: Witness {
                a: unit_vector(k, i, n.clone() / params.t()[i].clone()),
                b: Z::zero(),
            },
        };
    }
    let p = params.smallest_prime().clone();
    let shift = n.clone() / p.clone();
    let prob = if n.is_even() {
        ExactProb::one()
    } else {
        one_over_p_minus_one(&p)
    };
    MaxProb {
        prob,
        witness: Witness {
            a: unit_vector(k, 0, shift.clone()),
            b: shift,
        },
    }
}

fn analytic_collision<Z: Int>(params: &FamilyParams<Z>) -> MaxProb<Z> {
    let n = params.n();
    let k = params.k();
    if params.flavor() == Flavor::MmhStar {
        return analytic_delta(params);
    }
    if first_nontrivial_constraint(params).is_some() {
        return analytic_delta(params);
    }
    if k == 1 {
        return MaxProb {
            prob: ExactProb::zero(),
            witness: Witness {
                a: vec![Z::one()],
                b: Z::zero(),
            },
        };
    }
    let p = params.smallest_prime().clone();
    let shift = n.clone() / p.clone();
    let mut a = unit_vector(k, 0, shift.clone());
    a[1] = shift;
    let prob = if n.is_even() {
        ExactProb::one()
    } else {
        one_over_p_minus_one(&p)
    };
    MaxProb {
        prob,
        witness: Witness { a, b: Z::zero() },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AuStatus<Z> {
    /// Collision probability at most `eps < 1`, attained at `witness`.
    EpsAu { eps: ExactProb, witness: Witness<Z> },
    /// Some pair of distinct messages always collides.
    NotAu { witness: Witness<Z> },
    /// Distinct messages never collide.
    ZeroCollision,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AduStatus<Z> {
    /// Difference probability at most `eps < 1`, attained at `witness`.
    EpsAdu { eps: ExactProb, witness: Witness<Z> },
    /// Some difference and target occur with probability one.
    NotAdu { witness: Witness<Z> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification<Z> {
    pub au: AuStatus<Z>,
    pub adu: AduStatus<Z>,
}

/// Classify a family from the closed forms alone.
pub fn classify<Z: Int>(params: &FamilyParams<Z>) -> Classification<Z> {
    let au = if params.k() == 1 && params.units_only() {
        AuStatus::ZeroCollision
    } else {
        let MaxProb { prob, witness } = analytic_collision(params);
        if prob.is_one() {
            AuStatus::NotAu { witness }
        } else {
            AuStatus::EpsAu { eps: prob, witness }
        }
    };
    let MaxProb { prob, witness } = analytic_delta(params);
    let adu = if prob.is_one() {
        AduStatus::NotAdu { witness }
    } else {
        AduStatus::EpsAdu { eps: prob, witness }
    };
    Classification { au, adu }
}

/// [`classify`], then confirm every claimed value against exhaustive search
/// and every witness against [`brute_force_prob`].
pub fn classify_verified<Z: Int>(params: &FamilyParams<Z>, cap: u64) -> Result<Classification<Z>> {
    let class = classify(params);
    let exhaustive = Search::Exhaustive { cap };
    let mismatch = |what: &str, claimed: &ExactProb, found: &ExactProb| {
        Error::Internal(format!(
            "{what}: closed form gives {claimed}, enumeration gives {found} for n={} t={:?}",
            params.n(),
            params.t()
        ))
    };
    let check_witness = |what: &str, claimed: &ExactProb, w: &Witness<Z>| -> Result<()> {
        let found = brute_force_prob(params, &w.a, &w.b, cap)?;
        if found != *claimed {
            return Err(mismatch(what, claimed, &found));
        }
        Ok(())
    };

    let max_collision = max_collision_prob(params, exhaustive)?;
    match &class.au {
        AuStatus::ZeroCollision => {
            if !max_collision.prob.is_zero() {
                return Err(mismatch(
                    "collision",
                    &ExactProb::zero(),
                    &max_collision.prob,
                ));
            }
        }
        AuStatus::EpsAu { eps, witness } => {
            if max_collision.prob != *eps {
                return Err(mismatch("collision", eps, &max_collision.prob));
            }
            check_witness("collision witness", eps, witness)?;
        }
        AuStatus::NotAu { witness } => {
            if !max_collision.prob.is_one() {
                return Err(mismatch(
                    "collision",
                    &ExactProb::one(),
                    &max_collision.prob,
                ));
            }
            check_witness("collision witness", &ExactProb::one(), witness)?;
        }
    }

    let max_delta = max_delta_prob(params, exhaustive)?;
    let (claimed, witness) = match &class.adu {
        AduStatus::EpsAdu { eps, witness } => (eps.clone(), witness),
        AduStatus::NotAdu { witness } => (ExactProb::one(), witness),
    };
    if max_delta.prob != claimed {
        return Err(mismatch("difference", &claimed, &max_delta.prob));
    }
    check_witness("difference witness", &claimed, witness)?;
    Ok(class)
}
