//! One-time-pad encryption with an RDH tag: the authentication code with
//! secrecy over `Z_n^k`, plus exact enumeration analyses of its secrecy,
//! key hiding and substitution resistance.
//!
//! A key is a pad `x ∈ Z_n^k` and a MAC key `y ∈ (Z_n^*)^k`. A message `m`
//! becomes `c = m + x` with tag `Σ m_i y_i mod n`. Decryption strips the
//! pad and accepts only when the tag recomputes.
//!
//! All analyses assume a uniform message over `Z_n^k` and a uniform key.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Pow;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::enumerate::{check_cap, CartesianProduct};
use crate::error::{domain, Result};
use crate::family::Message;
use crate::nt::{factorize, residues_with_gcd, Factorization};
use crate::prob::ExactProb;
use crate::scalar::{add_mod, check_modulus, dot_mod, sub_mod, Int};

/// Parameters of the scheme: odd `n ≥ 3` and message length `k ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemeParams<Z> {
    modulus: Z,
    k: usize,
    factorization: Factorization<Z>,
}

impl<Z: Int> SchemeParams<Z> {
    pub fn new(n: Z, k: usize) -> Result<Self> {
        check_modulus(&n)?;
        if n.is_even() {
            return Err(domain(format!("the scheme needs an odd modulus, got {n}")));
        }
        if k == 0 {
            return Err(domain("message length k must be at least 1"));
        }
        let factorization = factorize(&n)?;
        Ok(SchemeParams {
            modulus: n,
            k,
            factorization,
        })
    }

    pub fn n(&self) -> &Z {
        &self.modulus
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn p_min(&self) -> &Z {
        self.factorization
            .smallest_prime()
            .expect("n >= 3 has a prime factor")
    }

    /// `1/((p-1)·n^(k-1))`, the secrecy bound on nonzero messages.
    pub fn secrecy_bound(&self) -> ExactProb {
        let den = (self.p_min().to_big() - 1u32) * Pow::pow(&self.n().to_big(), self.k as u32 - 1);
        ExactProb::reciprocal(den).expect("positive denominator")
    }

    /// `1/(p-1)`, the substitution bound.
    pub fn substitution_bound(&self) -> ExactProb {
        ExactProb::reciprocal(self.p_min().to_big() - 1u32).expect("p >= 3")
    }

    /// `1/φ(n)^k`, the posterior of any MAC key after one ciphertext.
    pub fn key_hiding_value(&self) -> ExactProb {
        ExactProb::reciprocal(Pow::pow(&self.factorization.phi(), self.k as u32))
            .expect("positive denominator")
    }

    fn units(&self) -> Vec<Z> {
        residues_with_gcd(&self.modulus, &Z::one())
    }

    fn residues(&self) -> Vec<Z> {
        let mut out = Vec::new();
        let mut v = Z::zero();
        while v < self.modulus {
            out.push(v.clone());
            v = v + Z::one();
        }
        out
    }

    fn check_len(&self, what: &str, len: usize) -> Result<()> {
        if len != self.k {
            return Err(domain(format!(
                "{what} has {len} entries, expected k={}",
                self.k
            )));
        }
        Ok(())
    }

    fn check_reduced(&self, what: &str, v: &[Z]) -> Result<()> {
        self.check_len(what, v.len())?;
        if v.iter().any(|e| *e >= self.modulus) {
            return Err(domain(format!(
                "{what} entries must lie in [0, {})",
                self.modulus
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AuthKey<Z> {
    pub x: Vec<Z>,
    pub y: Vec<Z>,
}

impl<Z: Int> AuthKey<Z> {
    /// Validates that entries are reduced and every `y_i` is a unit.
    pub fn new(params: &SchemeParams<Z>, x: Vec<Z>, y: Vec<Z>) -> Result<Self> {
        let key = AuthKey { x, y };
        key.validate(params)?;
        Ok(key)
    }

    fn validate(&self, params: &SchemeParams<Z>) -> Result<()> {
        params.check_reduced("pad x", &self.x)?;
        params.check_reduced("MAC key y", &self.y)?;
        if let Some(bad) = self.y.iter().find(|v| !v.gcd(params.n()).is_one()) {
            return Err(domain(format!(
                "MAC key entry {bad} is not a unit mod {}",
                params.n()
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Ciphertext<Z> {
    pub c: Vec<Z>,
    pub tag: Z,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decryption<Z> {
    Accept(Message<Z>),
    Reject,
}

pub fn encrypt<Z: Int>(
    params: &SchemeParams<Z>,
    key: &AuthKey<Z>,
    m: &Message<Z>,
) -> Result<Ciphertext<Z>> {
    key.validate(params)?;
    params.check_reduced("message", m.as_slice())?;
    Ok(seal(params.n(), key, m.as_slice()))
}

fn seal<Z: Int>(n: &Z, key: &AuthKey<Z>, m: &[Z]) -> Ciphertext<Z> {
    Ciphertext {
        c: m.iter()
            .zip(&key.x)
            .map(|(mi, xi)| add_mod(mi, xi, n))
            .collect(),
        tag: dot_mod(m, &key.y, n),
    }
}

fn accepts<Z: Int>(n: &Z, key: &AuthKey<Z>, ct: &Ciphertext<Z>) -> bool {
    let m: Vec<Z> =
        ct.c.iter()
            .zip(&key.x)
            .map(|(ci, xi)| sub_mod(ci, xi, n))
            .collect();
    dot_mod(&m, &key.y, n) == ct.tag
}

pub fn decrypt<Z: Int>(
    params: &SchemeParams<Z>,
    key: &AuthKey<Z>,
    ct: &Ciphertext<Z>,
) -> Result<Decryption<Z>> {
    key.validate(params)?;
    params.check_reduced("ciphertext", &ct.c)?;
    if ct.tag >= *params.n() {
        return Err(domain(format!("tag must lie in [0, {})", params.n())));
    }
    let n = params.n();
    let m: Vec<Z> =
        ct.c.iter()
            .zip(&key.x)
            .map(|(ci, xi)| sub_mod(ci, xi, n))
            .collect();
    if dot_mod(&m, &key.y, n) == ct.tag {
        Ok(Decryption::Accept(Message::new(n, m)))
    } else {
        Ok(Decryption::Reject)
    }
}

pub fn sample_auth_key<Z: Int, R: Rng + ?Sized>(
    params: &SchemeParams<Z>,
    rng: &mut R,
) -> AuthKey<Z> {
    let n = params.n();
    let x = (0..params.k).map(|_| Z::random_below(n, rng)).collect();
    let y = (0..params.k)
        .map(|_| loop {
            let v = Z::random_below(n, rng);
            if v.gcd(n).is_one() {
                break v;
            }
        })
        .collect();
    AuthKey { x, y }
}

fn message_count<Z: Int>(params: &SchemeParams<Z>) -> BigUint {
    Pow::pow(&params.n().to_big(), params.k as u32)
}

fn mac_key_count<Z: Int>(params: &SchemeParams<Z>) -> BigUint {
    Pow::pow(&params.factorization.phi(), params.k as u32)
}

pub fn enumerate_messages<Z: Int>(params: &SchemeParams<Z>, cap: u64) -> Result<Vec<Vec<Z>>> {
    check_cap(&message_count(params), cap)?;
    Ok(CartesianProduct::new(vec![params.residues(); params.k]).collect())
}

pub fn enumerate_mac_keys<Z: Int>(params: &SchemeParams<Z>, cap: u64) -> Result<Vec<Vec<Z>>> {
    check_cap(&mac_key_count(params), cap)?;
    Ok(CartesianProduct::new(vec![params.units(); params.k]).collect())
}

pub fn enumerate_auth_keys<Z: Int>(params: &SchemeParams<Z>, cap: u64) -> Result<Vec<AuthKey<Z>>> {
    check_cap(&(message_count(params) * mac_key_count(params)), cap)?;
    let pads = enumerate_messages(params, cap)?;
    let macs = enumerate_mac_keys(params, cap)?;
    Ok(pads
        .iter()
        .flat_map(|x| {
            macs.iter().map(move |y| AuthKey {
                x: x.clone(),
                y: y.clone(),
            })
        })
        .collect())
}

/// Every ciphertext shape `(c, tag)` in lexicographic order.
pub fn enumerate_ciphertexts<Z: Int>(
    params: &SchemeParams<Z>,
    cap: u64,
) -> Result<Vec<Ciphertext<Z>>> {
    check_cap(&(message_count(params) * params.n().to_big()), cap)?;
    let residues = params.residues();
    let mut out = Vec::new();
    for c in CartesianProduct::new(vec![residues.clone(); params.k]) {
        for tag in &residues {
            out.push(Ciphertext {
                c: c.clone(),
                tag: tag.clone(),
            });
        }
    }
    Ok(out)
}

fn check_ciphertext<Z: Int>(params: &SchemeParams<Z>, ct: &Ciphertext<Z>) -> Result<()> {
    params.check_reduced("ciphertext", &ct.c)?;
    if ct.tag >= *params.n() {
        return Err(domain(format!("tag must lie in [0, {})", params.n())));
    }
    Ok(())
}

/// Number of `(m', key)` pairs with `E_key(m') = ct`, split by `m'`.
///
/// For fixed `m'` and `c` the pad is forced to `x = c - m'`, so the scan runs
/// over messages and MAC keys only.
fn joint_by_message<Z: Int>(
    params: &SchemeParams<Z>,
    ct: &Ciphertext<Z>,
    cap: u64,
) -> Result<Vec<(Vec<Z>, u64)>> {
    check_cap(&(message_count(params) * mac_key_count(params)), cap)?;
    let macs = enumerate_mac_keys(params, cap)?;
    let n = params.n();
    Ok(enumerate_messages(params, cap)?
        .into_iter()
        .map(|m| {
            let hits = macs.iter().filter(|y| dot_mod(&m, y, n) == ct.tag).count() as u64;
            (m, hits)
        })
        .collect())
}

/// Whether `ct` occurs with nonzero probability under a uniform message and key.
pub fn is_reachable<Z: Int>(
    params: &SchemeParams<Z>,
    ct: &Ciphertext<Z>,
    cap: u64,
) -> Result<bool> {
    check_ciphertext(params, ct)?;
    Ok(joint_by_message(params, ct, cap)?
        .iter()
        .any(|(_, h)| *h > 0))
}

/// `Pr[m' = m | E_key(m') = ct]` for uniform `m'` and key; zero if `ct` is
/// unreachable.
pub fn secrecy_posterior<Z: Int>(
    params: &SchemeParams<Z>,
    m: &Message<Z>,
    ct: &Ciphertext<Z>,
    cap: u64,
) -> Result<ExactProb> {
    params.check_reduced("message", m.as_slice())?;
    check_ciphertext(params, ct)?;
    let joint = joint_by_message(params, ct, cap)?;
    let total: u64 = joint.iter().map(|(_, h)| h).sum();
    if total == 0 {
        return Ok(ExactProb::zero());
    }
    let hits = joint
        .iter()
        .find(|(mm, _)| mm.as_slice() == m.as_slice())
        .map_or(0, |(_, h)| *h);
    ExactProb::new(hits, total)
}

/// `Pr[y' = y | E_{x‖y'}(m) = ct]` for uniform `x`, `m` and `y'`; zero if
/// `ct` is unreachable.
pub fn key_hiding_posterior<Z: Int>(
    params: &SchemeParams<Z>,
    y: &[Z],
    ct: &Ciphertext<Z>,
    cap: u64,
) -> Result<ExactProb> {
    params.check_reduced("MAC key y", y)?;
    check_ciphertext(params, ct)?;
    check_cap(&(message_count(params) * mac_key_count(params)), cap)?;
    let messages = enumerate_messages(params, cap)?;
    let n = params.n();
    // the pad is again forced by (m, c), so only m varies per MAC key
    let weight = |yy: &[Z]| {
        messages
            .iter()
            .filter(|m| dot_mod(m, yy, n) == ct.tag)
            .count() as u64
    };
    let total: u64 = enumerate_mac_keys(params, cap)?
        .iter()
        .map(|yy| weight(yy))
        .sum();
    if total == 0 {
        return Ok(ExactProb::zero());
    }
    let hits = if y.iter().all(|v| v.gcd(n).is_one()) {
        weight(y)
    } else {
        0
    };
    ExactProb::new(hits, total)
}

/// Optimal substitution attack against the scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution<Z> {
    /// Success probability of the optimal forger.
    pub success: ExactProb,
    /// The forger: observed ciphertext to substitute, lexicographically
    /// smallest among the best choices. Unreachable ciphertexts are absent.
    pub forger: BTreeMap<Ciphertext<Z>, Ciphertext<Z>>,
}

/// Best success of any deterministic forger that sees one ciphertext of a
/// uniform message and must output a different ciphertext that decrypts.
///
/// The optimum is separable: for each observed `ct`, pick the `ct' ≠ ct`
/// accepted by the most keys among those consistent with `ct`.
pub fn best_substitution_success<Z: Int>(
    params: &SchemeParams<Z>,
    cap: u64,
) -> Result<Substitution<Z>> {
    let keys = enumerate_auth_keys(params, cap)?;
    let messages = enumerate_messages(params, cap)?;
    let cts = enumerate_ciphertexts(params, cap)?;
    let work = BigUint::from(keys.len()) * messages.len() + BigUint::from(cts.len()) * cts.len();
    check_cap(&work, cap)?;
    let n = params.n();

    let mut consistent: BTreeMap<Ciphertext<Z>, Vec<&AuthKey<Z>>> = BTreeMap::new();
    for key in &keys {
        for m in &messages {
            consistent.entry(seal(n, key, m)).or_default().push(key);
        }
    }

    let mut wins = 0u64;
    let mut forger = BTreeMap::new();
    for (ct, keys_seen) in &consistent {
        let mut best: Option<(u64, &Ciphertext<Z>)> = None;
        for cand in cts.iter().filter(|c| *c != ct) {
            let score = keys_seen.iter().filter(|k| accepts(n, k, cand)).count() as u64;
            if best.is_none_or(|(s, _)| score > s) {
                best = Some((score, cand));
            }
        }
        let (score, cand) = best.expect("at least two ciphertexts exist");
        wins += score;
        forger.insert(ct.clone(), cand.clone());
    }
    let total = BigUint::from(keys.len()) * messages.len();
    Ok(Substitution {
        success: ExactProb::new(wins, total)?,
        forger,
    })
}

/// Result of a pairwise check on a keyed family `M_k : S → T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsuReport<S, T> {
    /// `max Pr_k[M_k(m') = t' ∧ M_k(m'') = t'']` over `m' ≠ m''`.
    pub max_prob: ExactProb,
    /// `(m', t', m'', t'')` attaining the maximum, first in source order.
    pub witness: (S, T, S, T),
    pub holds: bool,
}

/// Checks the pairwise condition `max Pr_k[M_k(m') = t' ∧ M_k(m'') = t''] ≤ eps`
/// over a uniform key from `keys`.
pub fn asu_check<K, S, T, F>(
    keys: &[K],
    sources: &[S],
    eval: F,
    eps: &ExactProb,
    cap: u64,
) -> Result<AsuReport<S, T>>
where
    S: Clone + PartialEq,
    T: Clone + Ord,
    F: Fn(&K, &S) -> T,
{
    if keys.is_empty() {
        return Err(domain("key set is empty"));
    }
    if sources.len() < 2 {
        return Err(domain("need at least two source states"));
    }
    let pairs = BigUint::from(sources.len()) * sources.len() * keys.len();
    check_cap(&pairs, cap)?;
    let table: Vec<Vec<T>> = sources
        .iter()
        .map(|s| keys.iter().map(|k| eval(k, s)).collect())
        .collect();

    let mut best: Option<(usize, (S, T, S, T))> = None;
    for (i, mi) in sources.iter().enumerate() {
        for (j, mj) in sources.iter().enumerate() {
            if i == j || mi == mj {
                continue;
            }
            let mut joint: BTreeMap<(&T, &T), usize> = BTreeMap::new();
            for (ti, tj) in table[i].iter().zip(&table[j]) {
                *joint.entry((ti, tj)).or_default() += 1;
            }
            for ((ti, tj), count) in joint {
                if best.as_ref().is_none_or(|(c, _)| count > *c) {
                    best = Some((count, (mi.clone(), ti.clone(), mj.clone(), tj.clone())));
                }
            }
        }
    }
    let (count, witness) = best.ok_or_else(|| domain("source states are all equal"))?;
    let max_prob = ExactProb::new(count, keys.len())?;
    let holds = max_prob <= *eps;
    Ok(AsuReport {
        max_prob,
        witness,
        holds,
    })
}

/// Substitution game with every source weight on `m`: a uniform key tags
/// `m`, the forger sees `(m, t)` and wins when it names a different source
/// state whose tag verifies under the same key.
pub fn point_mass_forgery_success<K, S, T, E, F>(
    keys: &[K],
    m: &S,
    eval: E,
    forger: F,
) -> Result<ExactProb>
where
    S: PartialEq,
    T: PartialEq,
    E: Fn(&K, &S) -> T,
    F: Fn(&S, &T) -> (S, T),
{
    if keys.is_empty() {
        return Err(domain("key set is empty"));
    }
    let wins = keys
        .iter()
        .filter(|k| {
            let t = eval(k, m);
            let (m2, t2) = forger(m, &t);
            m2 != *m && eval(k, &m2) == t2
        })
        .count();
    ExactProb::new(wins, keys.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::DEFAULT_ENUM_CAP;
    use num_traits::{One, Zero};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const CAP: u64 = DEFAULT_ENUM_CAP;

    fn p(s: &str) -> ExactProb {
        s.parse().unwrap()
    }

    fn scheme(n: u64, k: usize) -> SchemeParams<u64> {
        SchemeParams::new(n, k).unwrap()
    }

    fn key(params: &SchemeParams<u64>, x: &[u64], y: &[u64]) -> AuthKey<u64> {
        AuthKey::new(params, x.to_vec(), y.to_vec()).unwrap()
    }

    fn msg(n: u64, m: &[u64]) -> Message<u64> {
        Message::new(&n, m.to_vec())
    }

    #[test]
    fn params_reject_even_and_empty() {
        assert!(SchemeParams::new(6u64, 1).is_err());
        assert!(SchemeParams::new(1u64, 1).is_err());
        assert!(SchemeParams::new(9u64, 0).is_err());
        assert_eq!(*scheme(45, 1).p_min(), 3);
    }

    #[test]
    fn key_validation() {
        let s = scheme(9, 2);
        assert!(AuthKey::new(&s, vec![0, 0], vec![3, 1]).is_err());
        assert!(AuthKey::new(&s, vec![9, 0], vec![1, 1]).is_err());
        assert!(AuthKey::new(&s, vec![0], vec![1, 1]).is_err());
    }

    #[test]
    fn encrypt_examples() {
        let s = scheme(3, 1);
        let ct = encrypt(&s, &key(&s, &[1], &[2]), &msg(3, &[2])).unwrap();
        assert_eq!(ct, Ciphertext { c: vec![0], tag: 1 });
        let s = scheme(9, 2);
        let ct = encrypt(&s, &key(&s, &[0, 0], &[1, 1]), &msg(9, &[4, 5])).unwrap();
        assert_eq!(
            ct,
            Ciphertext {
                c: vec![4, 5],
                tag: 0
            }
        );
        let s = scheme(5, 1);
        let ct = encrypt(&s, &key(&s, &[3], &[4]), &msg(5, &[0])).unwrap();
        assert_eq!(ct, Ciphertext { c: vec![3], tag: 0 });
    }

    #[test]
    fn decrypt_examples() {
        let s = scheme(3, 1);
        let k = key(&s, &[1], &[2]);
        let out = decrypt(&s, &k, &Ciphertext { c: vec![0], tag: 1 }).unwrap();
        assert_eq!(out, Decryption::Accept(msg(3, &[2])));
        let out = decrypt(&s, &k, &Ciphertext { c: vec![0], tag: 2 }).unwrap();
        assert_eq!(out, Decryption::Reject);
        assert!(decrypt(&s, &k, &Ciphertext { c: vec![0], tag: 3 }).is_err());
    }

    #[test]
    fn round_trip_and_rejection_exhaustive() {
        for (n, k) in [(3u64, 1usize), (5, 1), (9, 1), (3, 2), (5, 2)] {
            let s = scheme(n, k);
            let cts = enumerate_ciphertexts(&s, CAP).unwrap();
            for key in enumerate_auth_keys(&s, CAP).unwrap() {
                for m in enumerate_messages(&s, CAP).unwrap() {
                    let m = Message::new(&n, m);
                    let ct = encrypt(&s, &key, &m).unwrap();
                    assert_eq!(decrypt(&s, &key, &ct).unwrap(), Decryption::Accept(m));
                }
                if k == 1 {
                    for ct in &cts {
                        let out = decrypt(&s, &key, ct).unwrap();
                        let m = ct.c[0] + n - key.x[0];
                        let valid = (m % n) * key.y[0] % n == ct.tag;
                        assert_eq!(out == Decryption::Reject, !valid);
                    }
                }
            }
        }
    }

    #[test]
    fn sampled_keys_are_valid() {
        let s = scheme(45, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let k = sample_auth_key(&s, &mut rng);
            AuthKey::new(&s, k.x, k.y).unwrap();
        }
    }

    #[test]
    fn secrecy_examples() {
        let s = scheme(3, 1);
        for ct in enumerate_ciphertexts(&s, CAP).unwrap() {
            assert!(is_reachable(&s, &ct, CAP).unwrap());
            let post = secrecy_posterior(&s, &msg(3, &[1]), &ct, CAP).unwrap();
            assert!(post <= p("1/2"));
            let zero = secrecy_posterior(&s, &msg(3, &[0]), &ct, CAP).unwrap();
            if ct.tag != 0 {
                assert!(zero.is_zero());
            }
        }
    }

    #[test]
    fn secrecy_posterior_normalizes() {
        for (n, k) in [(3u64, 1usize), (9, 1), (3, 2)] {
            let s = scheme(n, k);
            let messages = enumerate_messages(&s, CAP).unwrap();
            for ct in enumerate_ciphertexts(&s, CAP).unwrap() {
                let total = messages
                    .iter()
                    .map(|m| {
                        secrecy_posterior(&s, &Message::new(&n, m.clone()), &ct, CAP)
                            .unwrap()
                            .as_rational()
                            .clone()
                    })
                    .fold(num_rational::BigRational::zero(), |a, b| a + b);
                assert!(total.is_one());
            }
        }
    }

    #[test]
    fn secrecy_bound_on_nonzero_messages() {
        for (n, k) in [
            (3u64, 1usize),
            (5, 1),
            (7, 1),
            (9, 1),
            (3, 2),
            (5, 2),
            (9, 2),
        ] {
            let s = scheme(n, k);
            let bound = s.secrecy_bound();
            for ct in enumerate_ciphertexts(&s, CAP)
                .unwrap()
                .into_iter()
                .step_by(7)
            {
                for m in enumerate_messages(&s, CAP).unwrap() {
                    if m.iter().all(|v| *v == 0) {
                        continue;
                    }
                    let post = secrecy_posterior(&s, &Message::new(&n, m), &ct, CAP).unwrap();
                    assert!(post <= bound, "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn key_hiding_examples() {
        for (n, y, expected) in [(3u64, 1u64, "1/2"), (5, 3, "1/4"), (9, 2, "1/6")] {
            let s = scheme(n, 1);
            for ct in enumerate_ciphertexts(&s, CAP).unwrap() {
                assert_eq!(
                    key_hiding_posterior(&s, &[y], &ct, CAP).unwrap(),
                    p(expected)
                );
            }
        }
        let s = scheme(9, 1);
        let ct = Ciphertext { c: vec![0], tag: 0 };
        assert!(key_hiding_posterior(&s, &[3], &ct, CAP).unwrap().is_zero());
    }

    #[test]
    fn key_hiding_is_uniform() {
        for (n, k) in [(3u64, 2usize), (5, 2), (9, 2), (7, 1)] {
            let s = scheme(n, k);
            let expected = s.key_hiding_value();
            let macs = enumerate_mac_keys(&s, CAP).unwrap();
            for ct in enumerate_ciphertexts(&s, CAP)
                .unwrap()
                .into_iter()
                .step_by(5)
            {
                for y in macs.iter().step_by(3) {
                    assert_eq!(key_hiding_posterior(&s, y, &ct, CAP).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(
            best_substitution_success(&scheme(3, 1), CAP)
                .unwrap()
                .success,
            p("1/2")
        );
        assert_eq!(
            best_substitution_success(&scheme(5, 1), CAP)
                .unwrap()
                .success,
            p("1/4")
        );
        assert_eq!(
            best_substitution_success(&scheme(9, 1), CAP)
                .unwrap()
                .success,
            p("1/2")
        );
        let sub = best_substitution_success(&scheme(3, 2), CAP).unwrap();
        assert!(sub.success <= p("1/2"));
        assert_eq!(sub.forger.len(), 27);
        assert!(sub.forger.iter().all(|(a, b)| a != b));
    }

    #[test]
    fn substitution_cap() {
        assert!(best_substitution_success(&scheme(9, 2), 1000).is_err());
    }

    #[test]
    fn asu_examples() {
        let keys = [1u64, 2];
        let report = asu_check(&keys, &[0u64, 1, 2], |y, m| y * m % 3, &p("1/2"), CAP).unwrap();
        assert_eq!(report.max_prob, p("1/2"));
        assert!(report.holds);
        let report = asu_check(&keys, &[1u64, 2], |y, m| y * m % 3, &p("1/2"), CAP).unwrap();
        assert_eq!(report.max_prob, p("1/2"));

        let single = [()];
        let report = asu_check(&single, &[0u8, 1], |_, m| *m, &p("1/2"), CAP).unwrap();
        assert!(report.max_prob.is_one());
        assert!(!report.holds);

        // all four maps {0,1} -> {0,1}
        let maps = [[0u8, 0], [0, 1], [1, 0], [1, 1]];
        let report = asu_check(&maps, &[0usize, 1], |f, m| f[*m], &p("1/4"), CAP).unwrap();
        assert_eq!(report.max_prob, p("1/4"));
        assert!(report.holds);

        assert!(asu_check(&keys, &[1u64], |y, m| y * m, &p("1"), CAP).is_err());
    }

    #[test]
    fn failing_asu_gives_winning_forger() {
        // small families of maps Z_3 -> Z_3 given by key tables
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sources = [0usize, 1, 2];
        for _ in 0..200 {
            let n_keys = rng.gen_range(1..=8);
            let keys: Vec<[u8; 3]> = (0..n_keys)
                .map(|_| {
                    [
                        rng.gen_range(0..3),
                        rng.gen_range(0..3),
                        rng.gen_range(0..3),
                    ]
                })
                .collect();
            let eval = |k: &[u8; 3], m: &usize| k[*m];
            for eps in [p("1/8"), p("1/4"), p("1/3"), p("1/2")] {
                let report = asu_check(&keys, &sources, eval, &eps, CAP).unwrap();
                if report.holds {
                    continue;
                }
                let (m1, t1, m2, t2) = report.witness;
                let forger = |m: &usize, t: &u8| {
                    if (*m, *t) == (m1, t1) {
                        (m2, t2)
                    } else {
                        (*m, *t)
                    }
                };
                let success = point_mass_forgery_success(&keys, &m1, eval, forger).unwrap();
                assert_eq!(success, report.max_prob);
                assert!(success > eps);
            }
        }
    }
}
