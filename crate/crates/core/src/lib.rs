//! Restricted dot-product hashing over `Z_n`.
//!
//! * [`congruence`]: closed-form solution counts for `Σ a_i x_i ≡ b (mod n)`
//!   with `gcd(x_i, n) = t_i`, the no-solution classification, and
//!   brute-force enumeration.
//! * [`family`]: the MMH*, RDH and GRDH families `x ↦ Σ m_i x_i mod n`.
//! * [`universality`]: exact collision and difference probabilities, their
//!   maxima, and ε-AU / ε-AΔU classification.
//! * [`authcode`]: one-time pad plus RDH tag, with exact secrecy, key-hiding
//!   and substitution analyses.
//!
//! Everything is generic over the scalar [`Int`]; the aliases below fix it to
//! `u64` (moduli up to `2^32 - 1`) or [`BigUint`].
//!
//! ```
//! use grdh::{count_restricted, Instance};
//!
//! let inst = Instance::new(9, vec![3, 0], 3, vec![1, 1]).unwrap();
//! assert_eq!(count_restricted(&inst).unwrap(), 18u32.into());
//! ```

pub mod authcode;
pub mod congruence;
pub mod enumerate;
pub mod error;
pub mod family;
pub mod nt;
pub mod prob;
pub mod scalar;
pub mod universality;

pub use num_bigint::BigUint;

pub use authcode::{
    asu_check, best_substitution_success, decrypt, encrypt, enumerate_auth_keys,
    enumerate_ciphertexts, enumerate_mac_keys, enumerate_messages, is_reachable,
    key_hiding_posterior, point_mass_forgery_success, sample_auth_key, secrecy_posterior,
    AsuReport, AuthKey, Ciphertext, Decryption, SchemeParams, Substitution,
};
pub use congruence::{
    count_restricted, count_unrestricted, enumerate_solutions, enumerate_unrestricted,
    knapsack_solvable, prime_local, solutions, unsolvable_case, Case, CongruenceInstance,
    Obstruction, PrimeLocalData,
};
pub use enumerate::{enum_cap_from_env, CartesianProduct, DEFAULT_ENUM_CAP, ENUM_CAP_ENV};
pub use error::{Error, Result};
pub use family::{
    enumerate_keys, hash, key_space_size, sample_key, FamilyParams, Flavor, HashKey, Message,
};
pub use nt::{
    divisors, euler_phi, factorize, gcd_many, is_prime, p_valuation, Factorization, Valuation,
};
pub use prob::ExactProb;
pub use scalar::Int;
pub use universality::{
    brute_force_prob, classify, classify_verified, collision_prob, delta_prob, max_collision_prob,
    max_delta_prob, AduStatus, AuStatus, Classification, MaxProb, Search, Witness,
};

pub type Instance = CongruenceInstance<u64>;
pub type BigInstance = CongruenceInstance<BigUint>;
pub type Family = FamilyParams<u64>;
pub type BigFamily = FamilyParams<BigUint>;
pub type Scheme = SchemeParams<u64>;
pub type Key = AuthKey<u64>;
pub type Tagged = Ciphertext<u64>;
