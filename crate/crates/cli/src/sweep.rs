//! Formula-versus-enumeration sweep over a range of moduli.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use grdh::{
    brute_force_prob, count_restricted, delta_prob, divisors, enum_cap_from_env,
    enumerate_solutions, unsolvable_case, BigUint, CartesianProduct, ExactProb, Family, Instance,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::report::{put_prob, CliResult, Failure, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 2)]
    pub n_min: u64,
    #[arg(long, default_value_t = 20)]
    pub n_max: u64,
    #[arg(long, default_value_t = 2)]
    pub k_max: usize,
    /// Random (a, b) per (n, t) configuration
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Skip t-vectors whose key space is larger than this
    #[arg(long, default_value_t = 100_000)]
    pub key_space_max: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(short = 'o')]
    pub out: Option<PathBuf>,
}

struct Record {
    n: u64,
    t: Vec<u64>,
    a: Vec<u64>,
    b: u64,
    count: BigUint,
    oracle_count: usize,
    case: Option<String>,
    formula_prob: Option<ExactProb>,
    oracle_prob: Option<ExactProb>,
    agree: bool,
}

impl Record {
    fn to_json(&self, approx: bool) -> Value {
        let mut obj = Map::new();
        obj.insert("n".into(), json!(self.n));
        obj.insert("k".into(), json!(self.t.len()));
        obj.insert("t".into(), json!(self.t));
        obj.insert("a".into(), json!(self.a));
        obj.insert("b".into(), json!(self.b));
        obj.insert("count".into(), json!(self.count.to_string()));
        obj.insert("oracle_count".into(), json!(self.oracle_count.to_string()));
        obj.insert("unsolvable_case".into(), json!(self.case));
        match (&self.formula_prob, &self.oracle_prob) {
            (Some(f), Some(o)) => {
                put_prob(&mut obj, "delta_prob", f, approx);
                put_prob(&mut obj, "oracle_prob", o, approx);
            }
            _ => {
                obj.insert("delta_prob".into(), Value::Null);
                obj.insert("oracle_prob".into(), Value::Null);
            }
        }
        obj.insert("match".into(), json!(self.agree));
        Value::Object(obj)
    }

    fn csv_header(approx: bool) -> Vec<&'static str> {
        let mut h = vec![
            "n",
            "k",
            "t",
            "a",
            "b",
            "count",
            "oracle_count",
            "unsolvable_case",
            "delta_prob",
        ];
        if approx {
            h.push("delta_prob_approx");
        }
        h.extend(["oracle_prob", "match"]);
        h
    }

    fn csv_row(&self, approx: bool) -> Vec<String> {
        let list = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
        let prob = |p: &Option<ExactProb>| p.as_ref().map(ExactProb::to_string).unwrap_or_default();
        let mut row = vec![
            self.n.to_string(),
            self.t.len().to_string(),
            list(&self.t),
            list(&self.a),
            self.b.to_string(),
            self.count.to_string(),
            self.oracle_count.to_string(),
            self.case.clone().unwrap_or_default(),
            prob(&self.formula_prob),
        ];
        if approx {
            row.push(
                self.formula_prob
                    .as_ref()
                    .map(|p| p.approx().to_string())
                    .unwrap_or_default(),
            );
        }
        row.push(prob(&self.oracle_prob));
        row.push(self.agree.to_string());
        row
    }

    fn describe(&self) -> String {
        format!(
            "n={} t={:?} a={:?} b={}: count {} vs {} enumerated, case {:?}, probability {:?} vs {:?}",
            self.n,
            self.t,
            self.a,
            self.b,
            self.count,
            self.oracle_count,
            self.case,
            self.formula_prob.as_ref().map(ToString::to_string),
            self.oracle_prob.as_ref().map(ToString::to_string)
        )
    }
}

fn check_instance(n: u64, t: &[u64], a: Vec<u64>, b: u64, cap: u64) -> CliResult<Record> {
    let inst = Instance::new(n, a.clone(), b, t.to_vec())?;
    let count = count_restricted(&inst)?;
    let oracle_count = enumerate_solutions(&inst, cap)?.len();
    let mut agree = count == BigUint::from(oracle_count);
    let (mut case, mut formula_prob, mut oracle_prob) = (None, None, None);
    if !inst.all_coefficients_zero() {
        let obstruction = unsolvable_case(&inst)?;
        agree &= obstruction.is_some() == (oracle_count == 0);
        case = obstruction.map(|o| format!("{} at p={}", o.case, o.prime));
        let family = Family::grdh(n, t.to_vec())?;
        let f = delta_prob(&family, &a, &b)?;
        let o = brute_force_prob(&family, &a, &b, cap)?;
        agree &= f == o;
        formula_prob = Some(f);
        oracle_prob = Some(o);
    }
    Ok(Record {
        n,
        t: t.to_vec(),
        a,
        b,
        count,
        oracle_count,
        case,
        formula_prob,
        oracle_prob,
        agree,
    })
}

pub fn sweep(args: SweepArgs, approx: bool, json_stdout: bool) -> CliResult<Report> {
    if args.n_min < 2 || args.n_min > args.n_max {
        return Err(Failure::Usage(format!(
            "need 2 <= n-min <= n-max, got {}..{}",
            args.n_min, args.n_max
        )));
    }
    if args.k_max == 0 || args.samples == 0 {
        return Err(Failure::Usage("k-max and samples must be positive".into()));
    }
    let cap = enum_cap_from_env();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut records = Vec::new();
    for n in args.n_min..=args.n_max {
        let divs = divisors(&n)?;
        for k in 1..=args.k_max {
            for t in CartesianProduct::new(vec![divs.clone(); k]) {
                let probe = Instance::new(n, vec![1; k], 0, t.clone())?;
                if probe.constrained_space_size() > BigUint::from(args.key_space_max) {
                    continue;
                }
                for _ in 0..args.samples {
                    let a: Vec<u64> = (0..k).map(|_| rng.gen_range(0..n)).collect();
                    let b = rng.gen_range(0..n);
                    records.push(check_instance(n, &t, a, b, cap)?);
                }
            }
        }
    }

    let mismatches: Vec<&Record> = records.iter().filter(|r| !r.agree).collect();
    let params = json!({
        "n_min": args.n_min,
        "n_max": args.n_max,
        "k_max": args.k_max,
        "samples": args.samples,
        "seed": args.seed,
        "key_space_max": args.key_space_max,
        "format": format!("{:?}", args.format).to_lowercase(),
    });
    let mut report = Report::new("sweep", params);
    report.oracle_checked = true;
    let summary = json!({ "instances": records.len(), "mismatches": mismatches.len() });

    let full = {
        let mut r = Report::new("sweep", report.params.clone());
        r.oracle_checked = true;
        r.results = records.iter().map(|rec| rec.to_json(approx)).collect();
        r
    };
    match (&args.out, args.format) {
        (Some(path), Format::Json) => {
            let mut f = File::create(path)?;
            serde_json::to_writer_pretty(&mut f, &full)?;
            writeln!(f)?;
            report.results.push(summary);
        }
        (Some(path), Format::Csv) => {
            write_csv(File::create(path)?, &records, approx)?;
            report.results.push(summary);
        }
        (None, Format::Json) => report.results = full.results,
        (None, Format::Csv) => {
            if json_stdout {
                return Err(Failure::Usage("--json with --format csv needs -o".into()));
            }
            write_csv(io::stdout().lock(), &records, approx)?;
            report.stdout_taken = true;
        }
    }
    report.line(format!(
        "{} instances, {} mismatches{}",
        records.len(),
        mismatches.len(),
        args.out
            .as_ref()
            .map(|p| format!(", records written to {}", p.display()))
            .unwrap_or_default()
    ));

    if let Some(first) = mismatches.first() {
        return Err(Failure::Mismatch(format!(
            "{} of {} instances disagree; first: {}",
            mismatches.len(),
            records.len(),
            first.describe()
        )));
    }
    Ok(report)
}

fn write_csv<W: Write>(out: W, records: &[Record], approx: bool) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(Record::csv_header(approx))?;
    for r in records {
        w.write_record(r.csv_row(approx))?;
    }
    w.flush()?;
    Ok(())
}
