use clap::Args;
use grdh::{
    brute_force_prob, classify, classify_verified, count_restricted, count_unrestricted,
    enum_cap_from_env, enumerate_solutions, enumerate_unrestricted, unsolvable_case, AduStatus,
    AuStatus, BigUint, Family, Instance, Witness,
};
use serde_json::{json, Map, Value};

use crate::report::{put_prob, show_prob, show_vec, CliResult, Failure, Report};

#[derive(Args)]
pub struct CountArgs {
    #[arg(short = 'n')]
    pub n: u64,
    /// Coefficients, comma separated
    #[arg(short = 'a', value_delimiter = ',', required = true)]
    pub a: Vec<u64>,
    #[arg(short = 'b', default_value_t = 0)]
    pub b: u64,
    /// gcd constraints, comma separated (default: all 1)
    #[arg(short = 't', value_delimiter = ',')]
    pub t: Option<Vec<u64>>,
    /// Drop the gcd constraints
    #[arg(long)]
    pub unrestricted: bool,
    /// Re-count by enumeration and fail on disagreement
    #[arg(long)]
    pub oracle: bool,
}

pub fn count(args: CountArgs) -> CliResult<Report> {
    let CountArgs {
        n,
        a,
        b,
        t,
        unrestricted,
        oracle,
    } = args;
    if unrestricted && t.is_some() {
        return Err(Failure::Usage("--unrestricted takes no -t list".into()));
    }
    let t = t.unwrap_or_else(|| vec![1; a.len()]);
    let mut report = Report::new(
        "count",
        json!({ "n": n, "a": a, "b": b, "t": if unrestricted { Value::Null } else { json!(t) }, "unrestricted": unrestricted }),
    );
    let cap = enum_cap_from_env();
    let mut result = Map::new();

    let count: BigUint = if unrestricted {
        let c = count_unrestricted(&n, &a, &b)?;
        if oracle {
            let found = enumerate_unrestricted(&n, &a, &b, cap)?.len();
            check_oracle(&c, found)?;
        }
        c
    } else {
        let inst = Instance::new(n, a.clone(), b, t)?;
        let c = count_restricted(&inst)?;
        if !inst.all_coefficients_zero() {
            let case = unsolvable_case(&inst)?;
            let shown = case
                .as_ref()
                .map(|o| format!("{} at p={}", o.case, o.prime));
            if let Some(s) = &shown {
                report.line(format!("no solutions: case {s}"));
            }
            result.insert(
                "unsolvable_case".into(),
                case.map_or(
                    Value::Null,
                    |o| json!({ "case": o.case.to_string(), "prime": o.prime }),
                ),
            );
        }
        if oracle {
            let found = enumerate_solutions(&inst, cap)?.len();
            check_oracle(&c, found)?;
        }
        c
    };
    report.text.insert(0, format!("count {count}"));
    if oracle {
        report.oracle_checked = true;
        report.line("oracle: enumeration agrees");
    }
    result.insert("count".into(), json!(count.to_string()));
    report.results.push(Value::Object(result));
    Ok(report)
}

fn check_oracle(count: &BigUint, found: usize) -> CliResult<()> {
    if *count != BigUint::from(found) {
        return Err(Failure::Mismatch(format!(
            "closed form gives {count}, enumeration finds {found}"
        )));
    }
    Ok(())
}

#[derive(Args)]
pub struct ClassifyArgs {
    #[arg(short = 'n')]
    pub n: u64,
    #[arg(short = 'k')]
    pub k: Option<usize>,
    /// gcd constraints, comma separated; implies GRDH
    #[arg(short = 't', value_delimiter = ',')]
    pub t: Option<Vec<u64>>,
    /// MMH* over the prime n instead of RDH/GRDH
    #[arg(long, conflicts_with = "t")]
    pub mmh_star: bool,
    /// Re-verify every value by exhaustive search
    #[arg(long)]
    pub exhaustive: bool,
}

fn witness_json(w: &Witness<u64>) -> Value {
    json!({ "a": w.a, "b": w.b })
}

fn show_witness(w: &Witness<u64>) -> String {
    format!("a={} b={}", show_vec(&w.a), w.b)
}

pub fn classify_cmd(args: ClassifyArgs, approx: bool) -> CliResult<Report> {
    let ClassifyArgs {
        n,
        k,
        t,
        mmh_star,
        exhaustive,
    } = args;
    let family = match (k, t) {
        _ if mmh_star => Family::mmh_star(n, k.unwrap_or(1))?,
        (Some(k), Some(t)) if t.len() != k => {
            return Err(Failure::Usage(format!(
                "-k {k} but -t has {} entries",
                t.len()
            )))
        }
        (_, Some(t)) => Family::grdh(n, t)?,
        (Some(k), None) => Family::rdh(n, k)?,
        (None, None) => return Err(Failure::Usage("give -k or -t".into())),
    };
    let mut report = Report::new(
        "classify",
        json!({ "n": n, "k": family.k(), "t": family.t(), "family": family.flavor().to_string(), "exhaustive": exhaustive }),
    );
    let cap = enum_cap_from_env();
    let class = if exhaustive {
        report.oracle_checked = true;
        classify_verified(&family, cap)?
    } else {
        classify(&family)
    };

    let verify = |obj: &mut Map<String, Value>, w: &Witness<u64>| -> CliResult<()> {
        if exhaustive {
            let p = brute_force_prob(&family, &w.a, &w.b, cap)?;
            put_prob(obj, "witness_prob", &p, approx);
        }
        Ok(())
    };

    let mut au = Map::new();
    match &class.au {
        AuStatus::ZeroCollision => {
            au.insert("status".into(), json!("ZERO_COLLISION"));
            report.line("AU: ZERO_COLLISION (distinct messages never collide)");
        }
        AuStatus::EpsAu { eps, witness } => {
            au.insert("status".into(), json!("EPS_AU"));
            put_prob(&mut au, "eps", eps, approx);
            au.insert("witness".into(), witness_json(witness));
            verify(&mut au, witness)?;
            report.line(format!(
                "AU: EPS_AU {} witness {}",
                show_prob(eps, approx),
                show_witness(witness)
            ));
        }
        AuStatus::NotAu { witness } => {
            au.insert("status".into(), json!("NOT_AU"));
            au.insert("witness".into(), witness_json(witness));
            verify(&mut au, witness)?;
            report.line(format!(
                "AU: NOT_AU witness {} probability 1",
                show_witness(witness)
            ));
        }
    }
    let mut adu = Map::new();
    match &class.adu {
        AduStatus::EpsAdu { eps, witness } => {
            adu.insert("status".into(), json!("EPS_ADU"));
            put_prob(&mut adu, "eps", eps, approx);
            adu.insert("witness".into(), witness_json(witness));
            verify(&mut adu, witness)?;
            report.line(format!(
                "ADU: EPS_ADU {} witness {}",
                show_prob(eps, approx),
                show_witness(witness)
            ));
        }
        AduStatus::NotAdu { witness } => {
            adu.insert("status".into(), json!("NOT_ADU"));
            adu.insert("witness".into(), witness_json(witness));
            verify(&mut adu, witness)?;
            report.line(format!(
                "ADU: NOT_ADU witness {} probability 1",
                show_witness(witness)
            ));
        }
    }
    if exhaustive {
        report.line("oracle: exhaustive search and witness enumeration agree");
    }
    report.results.push(json!({ "au": au, "adu": adu }));
    Ok(report)
}
