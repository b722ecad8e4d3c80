//! Command-line front end.
//!
//! Exit status: 0 success, 2 usage or parameter errors, 3 infeasible input,
//! 4 search cap exceeded, 5 oracle and formula disagree.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::classify;
use crate::error::Error;
use crate::formulas::{family_plus_mincut_with, fhs_mincut_with, OperatingPoint, Scheme};
use crate::ifg::{
    oracle_fhs_mincut_with, run_policy, CyclicPolicy, FamilyPlusPolicy, FhsPolicy, HelperPolicy,
    InfoFlowGraph,
};
use crate::limits::Limits;
use crate::model::{
    build_family_plus_partition, find_optimal_partition, GroupPartition, SystemParams,
};
use crate::scalar::ExactScalar;
use crate::tradeoff::{
    bhs_mbr_point, bhs_msr_point, compare_at_mbr, curve_with, k_sweep_mbr, mbr_point,
    min_alpha_given_beta_with, msr_point, sweep_rows, write_csv, Row,
};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_CAP: i32 = 4;
pub const EXIT_MISMATCH: i32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyKind {
    Fhs,
    FamilyPlus,
    Cyclic,
}

/// Exact storage/bandwidth analysis of regenerating codes under helper selection.
#[derive(Debug, Parser)]
#[command(name = "regen", version)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    /// File size M as an integer or p/q.
    #[arg(long, global = true, default_value = "1", value_parser = nonnegative)]
    pub file_size: ExactScalar,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, clap::Args)]
pub struct Nkd {
    pub n: usize,
    pub k: usize,
    pub d: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Blind-selection optimality, achievability case and known optimal schemes.
    Classify(Nkd),
    /// Corner points of a scheme's tradeoff curve.
    Curve {
        #[arg(value_enum)]
        scheme: Scheme,
        #[command(flatten)]
        nkd: Nkd,
        /// Print decimal `alpha gamma` pairs for plotting.
        #[arg(long)]
        gnuplot: bool,
    },
    /// Minimum-bandwidth point.
    Mbr {
        #[arg(value_enum)]
        scheme: Scheme,
        #[command(flatten)]
        nkd: Nkd,
    },
    /// Minimum-storage point.
    Msr {
        #[arg(value_enum)]
        scheme: Scheme,
        #[command(flatten)]
        nkd: Nkd,
    },
    /// Least storage alpha that protects the file at a given beta.
    MinAlpha {
        #[arg(value_enum)]
        scheme: Scheme,
        #[command(flatten)]
        nkd: Nkd,
        #[arg(long, value_parser = nonnegative)]
        beta: ExactScalar,
    },
    /// Minimum-bandwidth points of all three schemes with exact ratios.
    Compare(Nkd),
    /// Compares the family min-cut formula with the max-flow oracle.
    Verify {
        #[command(flatten)]
        nkd: Nkd,
        #[arg(long, requires = "beta", value_parser = nonnegative)]
        alpha: Option<ExactScalar>,
        #[arg(long, requires = "alpha", value_parser = nonnegative)]
        beta: Option<ExactScalar>,
        /// Rounds of random failures after each ordered round.
        #[arg(long, default_value_t = 0)]
        extra_rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Runs a helper policy through a failure sequence and reports the weakest collector.
    Simulate {
        #[arg(value_enum)]
        policy: PolicyKind,
        #[command(flatten)]
        nkd: Nkd,
        /// Comma-separated node list, or random:SEED.
        #[arg(long)]
        failures: String,
        /// Number of random failures (default 2n).
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value = "1", value_parser = nonnegative)]
        alpha: ExactScalar,
        #[arg(long, default_value = "1", value_parser = nonnegative)]
        beta: ExactScalar,
        /// Include the graph as an edge list.
        #[arg(long)]
        dump: bool,
    },
    /// Canonical family-plus partition and a partition with every group MBR-optimal.
    Partition { n: usize, d: usize },
    /// Minimum-bandwidth points of all three schemes for k = 1..=K.
    Sweep {
        n: usize,
        d: usize,
        #[arg(long)]
        k_max: Option<usize>,
    },
}

fn nonnegative(s: &str) -> Result<ExactScalar, String> {
    let v: ExactScalar = s.parse().map_err(|e: Error| e.to_string())?;
    if v.is_negative() {
        return Err(format!("{s} is negative"));
    }
    Ok(v)
}

/// Failure of a subcommand, carrying its exit status.
struct Fail {
    code: i32,
    message: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InfeasibleBeta { .. } => EXIT_INFEASIBLE,
            Error::SearchSpaceTooLarge { .. } => EXIT_CAP,
            _ => EXIT_USAGE,
        };
        Fail {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let limits = match Limits::from_env() {
        Ok(l) => l,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let (report, code) = match execute(&cli, &limits) {
        Ok(r) => r,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            return f.code;
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, report.as_bytes()),
        None => out.write_all(report.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    code
}

fn params(nkd: &Nkd) -> Result<SystemParams, Fail> {
    Ok(SystemParams::new(nkd.n, nkd.k, nkd.d)?)
}

fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

fn csv(rows: &[Row]) -> Result<String, Fail> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(String::from_utf8(buf).expect("utf-8 csv"))
}

fn point_line(label: &str, pt: &OperatingPoint) -> String {
    format!(
        "{label}: alpha={} beta={} gamma={}\n",
        pt.alpha, pt.beta, pt.gamma
    )
}

fn execute(cli: &Cli, limits: &Limits) -> Result<(String, i32), Fail> {
    let m = cli.file_size;
    let fmt = cli.format;
    let text = match &cli.command {
        Command::Classify(nkd) => {
            let c = classify(&params(nkd)?);
            match fmt {
                Format::Json => json(&c),
                Format::Csv => {
                    let part = c
                        .family_plus_mbr_optimal
                        .as_ref()
                        .map(parts_text)
                        .unwrap_or_default();
                    let cond = c.condition.map(|x| {
                        serde_json::to_value(x)
                            .unwrap()
                            .as_str()
                            .unwrap()
                            .to_string()
                    });
                    let case = serde_json::to_value(c.achievability_case).unwrap();
                    let opt = serde_json::to_value(c.optimality).unwrap();
                    let mut w = csv::Writer::from_writer(Vec::new());
                    let row = [
                        ("n", c.params.n.to_string()),
                        ("k", c.params.k.to_string()),
                        ("d", c.params.d.to_string()),
                        ("bhs_optimal", c.bhs_absolutely_optimal.to_string()),
                        ("condition", cond.unwrap_or_default()),
                        ("case", case.as_str().unwrap().to_string()),
                        ("fhs_optimal", c.fhs_absolutely_optimal.to_string()),
                        ("fhs_mbr_optimal", c.fhs_mbr_optimal.to_string()),
                        ("family_plus_partition", part),
                        ("optimality", opt.as_str().unwrap().to_string()),
                    ];
                    w.write_record(row.iter().map(|r| r.0))
                        .map_err(|e| Error::Parse(e.to_string()))?;
                    w.write_record(row.iter().map(|r| r.1.as_str()))
                        .map_err(|e| Error::Parse(e.to_string()))?;
                    String::from_utf8(w.into_inner().map_err(|e| Error::Parse(e.to_string()))?)
                        .expect("utf-8 csv")
                }
                Format::Plain => {
                    let mut s = String::new();
                    let v = serde_json::to_value(&c).unwrap();
                    for key in [
                        "bhs_optimal",
                        "condition",
                        "helper_selection_strictly_helps",
                        "case",
                        "fhs_optimal",
                        "fhs_mbr_optimal",
                        "family_plus_partition",
                        "corollary3_applies",
                        "optimality",
                    ] {
                        let shown = match &v[key] {
                            serde_json::Value::String(x) => x.clone(),
                            serde_json::Value::Null => "-".into(),
                            serde_json::Value::Object(_) => {
                                parts_text(c.family_plus_mbr_optimal.as_ref().unwrap())
                            }
                            other => other.to_string(),
                        };
                        let _ = writeln!(s, "{key}: {shown}");
                    }
                    s
                }
            }
        }
        Command::Curve {
            scheme,
            nkd,
            gnuplot,
        } => {
            let c = curve_with(*scheme, &params(nkd)?, m, limits)?;
            if *gnuplot {
                c.gnuplot()
            } else {
                match fmt {
                    Format::Json => json(&c),
                    Format::Csv => csv(&c.rows())?,
                    Format::Plain => c
                        .corners
                        .iter()
                        .enumerate()
                        .map(|(i, pt)| point_line(&format!("corner {}", i + 1), pt))
                        .collect(),
                }
            }
        }
        Command::Mbr { scheme, nkd } => {
            let p = params(nkd)?;
            let pt = mbr_point(*scheme, &p, m)?;
            single_point(fmt, &p, *scheme, &pt, &bhs_mbr_point(&p, m))?
        }
        Command::Msr { scheme, nkd } => {
            let p = params(nkd)?;
            let pt = msr_point(*scheme, &p, m, limits)?;
            single_point(fmt, &p, *scheme, &pt, &bhs_msr_point(&p, m))?
        }
        Command::MinAlpha { scheme, nkd, beta } => {
            let p = params(nkd)?;
            let alpha = min_alpha_given_beta_with(*scheme, &p, *beta, m, limits)?;
            let pt = OperatingPoint::new(alpha, *beta, p.d, m);
            match fmt {
                Format::Json => json(&pt),
                Format::Csv => csv(&[Row {
                    k: p.k,
                    scheme: *scheme,
                    alpha,
                    beta: *beta,
                    gamma: pt.gamma,
                    ratio_to_bhs: None,
                }])?,
                Format::Plain => point_line(scheme.name(), &pt),
            }
        }
        Command::Compare(nkd) => {
            let c = compare_at_mbr(&params(nkd)?, m)?;
            match fmt {
                Format::Json => json(&c),
                Format::Csv => csv(&c.rows())?,
                Format::Plain => {
                    let mut s = point_line("bhs", &c.bhs)
                        + &point_line("fhs", &c.fhs)
                        + &point_line("family-plus", &c.family_plus);
                    let _ = writeln!(s, "fhs/bhs: {}", c.fhs_to_bhs);
                    let _ = writeln!(s, "family-plus/bhs: {}", c.family_plus_to_bhs);
                    let _ = writeln!(s, "family-plus/fhs: {}", c.family_plus_to_fhs);
                    s
                }
            }
        }
        Command::Verify {
            nkd,
            alpha,
            beta,
            extra_rounds,
            seed,
        } => {
            let p = params(nkd)?;
            let one = ExactScalar::int(1);
            let points = match (alpha, beta) {
                (Some(a), Some(b)) => vec![(*a, *b)],
                _ => vec![
                    (ExactScalar::int(p.d as i64), one),
                    (one, one),
                    (ExactScalar::int(2), one),
                ],
            };
            let mut rows = Vec::new();
            for (a, b) in points {
                let formula = fhs_mincut_with(&p, a, b, limits)?;
                let oracle = oracle_fhs_mincut_with(&p, a, b, *extra_rounds, *seed, limits)?;
                rows.push(VerifyRow {
                    alpha: a,
                    beta: b,
                    formula,
                    oracle: oracle.value,
                    agree: formula == oracle.value,
                });
            }
            let code = if rows.iter().all(|r| r.agree) {
                0
            } else {
                EXIT_MISMATCH
            };
            let text = match fmt {
                Format::Json => json(&rows),
                Format::Csv => {
                    let mut s = String::from("alpha,beta,formula,oracle,agree\n");
                    for r in &rows {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{}",
                            r.alpha, r.beta, r.formula, r.oracle, r.agree
                        );
                    }
                    s
                }
                Format::Plain => rows
                    .iter()
                    .map(|r| {
                        format!(
                            "alpha={} beta={}: formula {} {} oracle {}\n",
                            r.alpha,
                            r.beta,
                            r.formula,
                            if r.agree { "=" } else { "!=" },
                            r.oracle
                        )
                    })
                    .collect(),
            };
            return Ok((text, code));
        }
        Command::Simulate {
            policy,
            nkd,
            failures,
            count,
            alpha,
            beta,
            dump,
        } => {
            let p = params(nkd)?;
            let seq = failure_list(failures, count.unwrap_or(2 * p.n), p.n)?;
            let (pol, formula): (Box<dyn HelperPolicy>, Option<ExactScalar>) = match policy {
                PolicyKind::Fhs => (
                    Box::new(FhsPolicy::new(p.n, p.d)?),
                    Some(fhs_mincut_with(&p, *alpha, *beta, limits)?),
                ),
                PolicyKind::FamilyPlus => {
                    let part = build_family_plus_partition(p.n, p.d)?;
                    let f = family_plus_mincut_with(&part, p.k, *alpha, *beta, limits)?;
                    (Box::new(FamilyPlusPolicy::new(part)?), Some(f))
                }
                PolicyKind::Cyclic => (Box::new(CyclicPolicy { n: p.n, d: p.d }), None),
            };
            let mut g = InfoFlowGraph::new(p.n, p.d, *alpha, *beta)?;
            run_policy(pol.as_ref(), &mut g, &seq)?;
            let cut = g.min_cut_over_collectors(p.k);
            let report = SimulateReport {
                failures: seq,
                min_cut: cut.value,
                collector: cut.collector,
                formula,
                graph: dump.then(|| g.dump()),
            };
            match fmt {
                Format::Json => json(&report),
                Format::Csv => {
                    let mut s = String::from("failures,min_cut,collector,formula\n");
                    let join = |v: &[usize]| {
                        v.iter()
                            .map(|x| x.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    };
                    let _ = writeln!(
                        s,
                        "{},{},{},{}",
                        join(&report.failures),
                        report.min_cut,
                        join(&report.collector),
                        report.formula.map(|f| f.to_string()).unwrap_or_default()
                    );
                    s
                }
                Format::Plain => {
                    let mut s = String::new();
                    let _ = writeln!(s, "failures: {:?}", report.failures);
                    let _ = writeln!(
                        s,
                        "min cut: {} at collector {:?}",
                        report.min_cut, report.collector
                    );
                    if let Some(f) = report.formula {
                        let _ = writeln!(s, "formula: {f}");
                    }
                    if let Some(d) = &report.graph {
                        s.push_str(d);
                    }
                    s
                }
            }
        }
        Command::Partition { n, d } => {
            let canonical = build_family_plus_partition(*n, *d)?;
            let optimal = find_optimal_partition(*n, *d)?;
            let report = PartitionReport {
                canonical: canonical.parts,
                optimal: optimal.map(|o| o.parts),
            };
            match fmt {
                Format::Json => json(&report),
                Format::Csv => format!(
                    "canonical,optimal\n{},{}\n",
                    join_parts(&report.canonical),
                    report
                        .optimal
                        .as_deref()
                        .map(join_parts)
                        .unwrap_or_default()
                ),
                Format::Plain => format!(
                    "canonical: {}\noptimal: {}\n",
                    join_parts(&report.canonical),
                    report
                        .optimal
                        .as_deref()
                        .map(join_parts)
                        .unwrap_or_else(|| "none".into())
                ),
            }
        }
        Command::Sweep { n, d, k_max } => {
            let k_max = k_max.unwrap_or(n.saturating_sub(1));
            let rows = k_sweep_mbr(*n, *d, m, 1..=k_max)?;
            match fmt {
                Format::Json => json(&rows),
                Format::Csv => csv(&sweep_rows(&rows))?,
                Format::Plain => {
                    let mut s = String::from("k gamma_bhs gamma_fhs gamma_family_plus\n");
                    for r in &rows {
                        let mark = if r.bhs_saturated {
                            " (bhs saturated)"
                        } else {
                            ""
                        };
                        let _ = writeln!(
                            s,
                            "{} {} {} {}{}",
                            r.k, r.bhs.gamma, r.fhs.gamma, r.family_plus.gamma, mark
                        );
                    }
                    s
                }
            }
        }
    };
    Ok((text, 0))
}

fn single_point(
    fmt: Format,
    p: &SystemParams,
    scheme: Scheme,
    pt: &OperatingPoint,
    bhs: &OperatingPoint,
) -> Result<String, Fail> {
    Ok(match fmt {
        Format::Json => json(pt),
        Format::Csv => csv(&[Row {
            k: p.k,
            scheme,
            alpha: pt.alpha,
            beta: pt.beta,
            gamma: pt.gamma,
            ratio_to_bhs: Some(pt.gamma / bhs.gamma),
        }])?,
        Format::Plain => point_line(scheme.name(), pt),
    })
}

fn parts_text(g: &GroupPartition) -> String {
    join_parts(&g.parts)
}

fn join_parts(parts: &[usize]) -> String {
    parts
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("+")
}

fn failure_list(list: &str, count: usize, n: usize) -> Result<Vec<usize>, Fail> {
    let usage = |m: String| Fail {
        code: EXIT_USAGE,
        message: m,
    };
    if let Some(seed) = list.strip_prefix("random:") {
        let seed: u64 = seed
            .parse()
            .map_err(|_| usage(format!("bad seed in {list:?}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok((0..count).map(|_| rng.gen_range(1..=n)).collect());
    }
    list.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| match t.trim().parse::<usize>() {
            Ok(v) if (1..=n).contains(&v) => Ok(v),
            _ => Err(usage(format!("failure {t:?} is not a node in 1..={n}"))),
        })
        .collect()
}

#[derive(Debug, Serialize)]
struct VerifyRow {
    alpha: ExactScalar,
    beta: ExactScalar,
    formula: ExactScalar,
    oracle: ExactScalar,
    agree: bool,
}

#[derive(Debug, Serialize)]
struct SimulateReport {
    failures: Vec<usize>,
    min_cut: ExactScalar,
    collector: Vec<usize>,
    formula: Option<ExactScalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<String>,
}

#[derive(Debug, Serialize)]
struct PartitionReport {
    canonical: Vec<usize>,
    optimal: Option<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("regen").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap() + &String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn exit_codes() {
        assert_eq!(call(&["classify", "5", "5", "2"]).0, EXIT_USAGE);
        assert_eq!(call(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(
            call(&["curve", "fhs", "6", "4", "4", "--file-size", "0.5"]).0,
            EXIT_USAGE
        );
        assert_eq!(call(&["verify", "9", "3", "2"]).0, EXIT_CAP);
        assert_eq!(call(&["--help"]).0, 0);
        assert_eq!(
            call(&["min-alpha", "bhs", "5", "3", "2", "--beta", "1/4"]).0,
            EXIT_INFEASIBLE
        );
        let (code, text) = call(&["min-alpha", "fhs", "5", "3", "2", "--beta", "1/4"]);
        assert_eq!(
            (code, text.as_str()),
            (0, "fhs: alpha=1/2 beta=1/4 gamma=1/2\n")
        );
    }

    #[test]
    fn failure_lists() {
        assert_eq!(failure_list("1, 3,2", 0, 4).ok().unwrap(), vec![1, 3, 2]);
        assert!(failure_list("5", 0, 4).is_err());
        let a = failure_list("random:7", 10, 4).ok().unwrap();
        assert_eq!(a, failure_list("random:7", 10, 4).ok().unwrap());
        assert_eq!(a.len(), 10);
    }
}
