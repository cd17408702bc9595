use std::fs;
use std::path::{Path, PathBuf};

use grdh::{
    best_substitution_success, decrypt, encrypt, enum_cap_from_env, enumerate_ciphertexts,
    enumerate_mac_keys, enumerate_messages, is_reachable, key_hiding_posterior, sample_auth_key,
    secrecy_posterior, Decryption, ExactProb, Key, Message, Scheme, Tagged,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::report::{put_prob, show_prob, show_vec, CliResult, Failure, Report};

/// On-disk key: the scheme parameters travel with the key.
#[derive(Debug, Serialize, Deserialize)]
struct KeyFile {
    n: u64,
    k: usize,
    x: Vec<u64>,
    y: Vec<u64>,
}

/// `x-vector:y-vector`, each a comma-separated list.
pub fn parse_key(s: &str) -> Result<(Vec<u64>, Vec<u64>), String> {
    let (x, y) = s
        .split_once(':')
        .ok_or_else(|| format!("key {s:?} is not of the form x1,..,xk:y1,..,yk"))?;
    Ok((parse_list(x)?, parse_list(y)?))
}

fn parse_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|e| format!("bad entry {v:?}: {e}"))
        })
        .collect()
}

pub enum KeySource {
    Inline(Vec<u64>, Vec<u64>),
    File(PathBuf),
}

fn load_key(scheme: &Scheme, source: KeySource) -> CliResult<Key> {
    let (x, y) = match source {
        KeySource::Inline(x, y) => (x, y),
        KeySource::File(path) => {
            let file: KeyFile = serde_json::from_str(&fs::read_to_string(&path)?)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            if (file.n, file.k) != (*scheme.n(), scheme.k()) {
                return Err(Failure::Usage(format!(
                    "key file is for n={} k={}, not n={} k={}",
                    file.n,
                    file.k,
                    scheme.n(),
                    scheme.k()
                )));
            }
            (file.x, file.y)
        }
    };
    Ok(Key::new(scheme, x, y)?)
}

fn scheme_params(scheme: &Scheme) -> Value {
    json!({ "n": scheme.n(), "k": scheme.k(), "p_min": scheme.p_min() })
}

pub fn keygen(n: u64, k: usize, seed: Option<u64>, out: Option<&Path>) -> CliResult<Report> {
    let scheme = Scheme::new(n, k)?;
    let mut rng = match seed {
        Some(s) => ChaCha8Rng::seed_from_u64(s),
        None => ChaCha8Rng::from_entropy(),
    };
    let key = sample_auth_key(&scheme, &mut rng);
    let mut params = scheme_params(&scheme);
    params["seed"] = json!(seed);
    let mut report = Report::new("mac keygen", params);
    let file = KeyFile {
        n,
        k,
        x: key.x.clone(),
        y: key.y.clone(),
    };
    if let Some(path) = out {
        fs::write(path, serde_json::to_string_pretty(&file)? + "\n")?;
        report.line(format!("wrote key to {}", path.display()));
    }
    let inline = format!("{}:{}", join(&key.x), join(&key.y));
    report.line(format!("key {inline}"));
    report
        .results
        .push(json!({ "x": key.x, "y": key.y, "key": inline }));
    Ok(report)
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

pub fn encrypt_cmd(n: u64, k: usize, key: KeySource, m: Vec<u64>) -> CliResult<Report> {
    let scheme = Scheme::new(n, k)?;
    let key = load_key(&scheme, key)?;
    let ct = encrypt(&scheme, &key, &Message::new(&n, m.clone()))?;
    let mut params = scheme_params(&scheme);
    params["m"] = json!(m);
    let mut report = Report::new("mac encrypt", params);
    report.line(format!("c={} tag={}", join(&ct.c), ct.tag));
    report.results.push(json!({ "c": ct.c, "tag": ct.tag }));
    Ok(report)
}

pub fn decrypt_cmd(n: u64, k: usize, key: KeySource, c: Vec<u64>, tag: u64) -> CliResult<Report> {
    let scheme = Scheme::new(n, k)?;
    let key = load_key(&scheme, key)?;
    let mut params = scheme_params(&scheme);
    params["c"] = json!(c);
    params["tag"] = json!(tag);
    let mut report = Report::new("mac decrypt", params);
    match decrypt(&scheme, &key, &Tagged { c, tag })? {
        Decryption::Accept(m) => {
            report.line(format!("ACCEPT m={}", join(m.as_slice())));
            report
                .results
                .push(json!({ "status": "ACCEPT", "m": m.as_slice() }));
        }
        Decryption::Reject => {
            report.line("REJECT");
            report.results.push(json!({ "status": "REJECT" }));
        }
    }
    Ok(report)
}

pub fn analyze(n: u64, k: usize, show_forger: bool, approx: bool) -> CliResult<Report> {
    let scheme = Scheme::new(n, k)?;
    let cap = enum_cap_from_env();
    let mut report = Report::new("mac analyze", scheme_params(&scheme));
    report.oracle_checked = true;

    let cts = enumerate_ciphertexts(&scheme, cap)?;
    let messages = enumerate_messages(&scheme, cap)?;
    let macs = enumerate_mac_keys(&scheme, cap)?;
    let hiding = scheme.key_hiding_value();
    let mut worst_secrecy = ExactProb::zero();
    let mut worst_at: Option<(Vec<u64>, &Tagged)> = None;
    let mut unreachable = 0usize;
    let mut hiding_off = 0usize;
    for ct in &cts {
        if !is_reachable(&scheme, ct, cap)? {
            unreachable += 1;
            continue;
        }
        for m in messages.iter().filter(|m| m.iter().any(|v| *v != 0)) {
            let post = secrecy_posterior(&scheme, &Message::new(&n, m.clone()), ct, cap)?;
            if post > worst_secrecy {
                worst_secrecy = post;
                worst_at = Some((m.clone(), ct));
            }
        }
        for y in &macs {
            if key_hiding_posterior(&scheme, y, ct, cap)? != hiding {
                hiding_off += 1;
            }
        }
    }
    let sub = best_substitution_success(&scheme, cap)?;

    let secrecy_bound = scheme.secrecy_bound();
    let sub_bound = scheme.substitution_bound();
    let mut secrecy = Map::new();
    put_prob(&mut secrecy, "max_posterior", &worst_secrecy, approx);
    put_prob(&mut secrecy, "bound", &secrecy_bound, approx);
    if let Some((m, ct)) = &worst_at {
        secrecy.insert(
            "attained_at".into(),
            json!({ "m": m, "c": ct.c, "tag": ct.tag }),
        );
    }
    let mut key_hiding = Map::new();
    put_prob(&mut key_hiding, "expected", &hiding, approx);
    key_hiding.insert("deviations".into(), json!(hiding_off));
    let mut substitution = Map::new();
    put_prob(&mut substitution, "max_success", &sub.success, approx);
    put_prob(&mut substitution, "bound", &sub_bound, approx);
    if show_forger {
        let map: Vec<Value> = sub
            .forger
            .iter()
            .map(|(from, to)| json!({ "seen": { "c": from.c, "tag": from.tag }, "send": { "c": to.c, "tag": to.tag } }))
            .collect();
        substitution.insert("forger".into(), Value::Array(map));
    }
    report.results.push(json!({
        "ciphertexts": cts.len(),
        "unreachable": unreachable,
        "secrecy": secrecy,
        "key_hiding": key_hiding,
        "substitution": substitution,
    }));

    report.line(format!(
        "secrecy max posterior {} (bound {}) over nonzero messages",
        show_prob(&worst_secrecy, approx),
        show_prob(&secrecy_bound, approx)
    ));
    report.line(format!(
        "key hiding posterior {} on every reachable ciphertext{}",
        show_prob(&hiding, approx),
        if hiding_off == 0 {
            String::new()
        } else {
            format!(" except {hiding_off} cases")
        }
    ));
    report.line(format!(
        "substitution max {} (bound {})",
        show_prob(&sub.success, approx),
        show_prob(&sub_bound, approx)
    ));
    if unreachable > 0 {
        report.line(format!(
            "{unreachable} of {} ciphertexts unreachable",
            cts.len()
        ));
    }
    if show_forger {
        for (from, to) in &sub.forger {
            report.line(format!(
                "forger: c={} tag={} -> c={} tag={}",
                show_vec(&from.c),
                from.tag,
                show_vec(&to.c),
                to.tag
            ));
        }
    }

    if hiding_off > 0 || worst_secrecy > secrecy_bound || sub.success > sub_bound {
        return Err(Failure::Mismatch(format!(
            "security bound violated for n={n} k={k}: {}",
            report.text.join("; ")
        )));
    }
    Ok(report)
}
