//! Command implementations for the `bruhatkit` binary.
//!
//! [`run`] parses arguments and returns the text to print plus the exit
//! status, so commands can be exercised without spawning a process.
//!
//! Exit codes: 0 success (and `leq` true), 1 `leq` false, 2 usage or limit
//! error, 3 verification failure.

use std::env;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bruhatkit::bruhat::{bruhat_leq, Interval};
use bruhatkit::enumerator::{
    build_order_cache, check_exhaustive_degree, load_cache, save_cache, scan_max_gap, Check,
    CheckReport, OrderCache, Prop410Mode, Verifier,
};
use bruhatkit::extremal::{gap_bound_report, opt_top_count, opt_top_with_provenance};
use bruhatkit::graphs::{atom_graph, coatom_graph, common_partition};
use bruhatkit::{Error, Permutation};

pub const SCHEMA_VERSION: &str = "1";
pub const CACHE_DIR_ENV: &str = "BRUHATKIT_CACHE_DIR";
const DEFAULT_SAMPLE: u64 = 100_000;
/// Largest degree checked exhaustively by `p410` when no sample size is given.
const EXHAUSTIVE_COMPONENTS_MAX: usize = 5;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "bruhatkit",
    version,
    about = "Bruhat intervals of the symmetric group"
)]
pub struct Cli {
    /// Add elapsed milliseconds to JSON documents
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare two permutations in Bruhat order
    Leq { u: String, v: String },
    /// Atoms, coatoms, components and bounds of [u, v]
    Interval {
        u: String,
        v: String,
        #[arg(long, value_enum, default_value_t = DocFormat::Json)]
        format: DocFormat,
    },
    /// Atom or coatom graph of [u, v]
    Graph {
        u: String,
        v: String,
        #[arg(long, value_enum, default_value_t = Side::Atom)]
        side: Side,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
    },
    /// Block permutations with the largest number of lower coatoms
    Maximizers {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = DocFormat::Json)]
        format: DocFormat,
    },
    /// Run verification checks for one degree
    Verify {
        #[arg(long)]
        n: usize,
        /// a | b | p21 | p29 | p410 | corollary | lemma | all
        #[arg(long, default_value = "all")]
        check: String,
        /// Sample this many intervals for p410 instead of scanning all
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        allow_large: bool,
    },
    /// Scan every interval for the largest c(I) - a(I)
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ScanFormat::Json)]
        format: ScanFormat,
        #[arg(long)]
        allow_large: bool,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DocFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScanFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GraphFormat {
    Dot,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Side {
    Atom,
    Coatom,
}

#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn error(e: &Error) -> Self {
        let code = match e {
            Error::ComponentMismatch { .. } | Error::BoundChain { .. } => EXIT_FAILED,
            _ => EXIT_USAGE,
        };
        Outcome {
            code,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            };
        }
    };
    let start = Instant::now();
    match execute(&cli, start) {
        Ok(outcome) => outcome,
        Err(e) => Outcome::error(&e),
    }
}

fn parse_perm(text: &str) -> Result<Permutation, Error> {
    text.parse()
}

fn document(command: &str, payload: Value, timing: Option<Instant>) -> String {
    let mut doc = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "payload": payload,
    });
    if let Some(start) = timing {
        doc["timing"] = json!({ "elapsed_ms": start.elapsed().as_millis() as u64 });
    }
    let mut out = serde_json::to_string_pretty(&doc).expect("json values serialize");
    out.push('\n');
    out
}

fn default_jobs(jobs: Option<usize>) -> usize {
    jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn cache_path(explicit: Option<&Path>, n: usize) -> Option<PathBuf> {
    explicit.map(Path::to_path_buf).or_else(|| {
        env::var_os(CACHE_DIR_ENV).map(|dir| PathBuf::from(dir).join(format!("bruhat-s{n}.cache")))
    })
}

/// Loads the cache at `path` if present, otherwise builds it and writes it there.
fn obtain_cache(n: usize, allow_large: bool, path: Option<&Path>) -> Result<OrderCache, Error> {
    check_exhaustive_degree(n, allow_large)?;
    let Some(path) = cache_path(path, n) else {
        return build_order_cache(n, allow_large);
    };
    if path.exists() {
        return load_cache(&path, n);
    }
    let cache = build_order_cache(n, allow_large)?;
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(bruhatkit::CacheError::from)?;
    }
    save_cache(&cache, &path)?;
    Ok(cache)
}

fn execute(cli: &Cli, start: Instant) -> Result<Outcome, Error> {
    let timing = cli.timing.then_some(start);
    match &cli.command {
        Command::Leq { u, v } => {
            let le = bruhat_leq(&parse_perm(u)?, &parse_perm(v)?)?;
            Ok(Outcome {
                code: if le { EXIT_OK } else { EXIT_FALSE },
                stdout: format!("{le}\n"),
                stderr: String::new(),
            })
        }
        Command::Interval { u, v, format } => {
            let interval = Interval::new(parse_perm(u)?, parse_perm(v)?)?;
            let payload = interval_payload(&interval)?;
            Ok(Outcome::ok(match format {
                DocFormat::Json => document("interval", payload, timing),
                DocFormat::Text => text_lines(&payload),
            }))
        }
        Command::Graph { u, v, side, .. } => {
            let interval = Interval::new(parse_perm(u)?, parse_perm(v)?)?;
            let graph = match side {
                Side::Atom => atom_graph(&interval),
                Side::Coatom => coatom_graph(&interval),
            };
            Ok(Outcome::ok(graph.to_dot()))
        }
        Command::Maximizers { n, format } => {
            let payload = maximizers_payload(*n)?;
            Ok(Outcome::ok(match format {
                DocFormat::Json => document("maximizers", payload, timing),
                DocFormat::Text => {
                    let mut out = String::new();
                    for entry in payload["maximizers"].as_array().unwrap() {
                        let specs: Vec<String> = entry["specs"]
                            .as_array()
                            .unwrap()
                            .iter()
                            .map(|s| format!("m={},t={}", s["m"], s["t"]))
                            .collect();
                        let _ = writeln!(
                            out,
                            "{} {}",
                            entry["permutation"].as_str().unwrap(),
                            specs.join(" ")
                        );
                    }
                    let _ = writeln!(out, "count: {}", payload["count"]);
                    out
                }
            }))
        }
        Command::Verify {
            n,
            check,
            sample,
            seed,
            jobs,
            cache,
            allow_large,
        } => verify(
            *n,
            check,
            *sample,
            *seed,
            default_jobs(*jobs),
            cache.as_deref(),
            *allow_large,
            timing,
        ),
        Command::Scan {
            n,
            jobs,
            cache,
            format,
            allow_large,
        } => {
            let order = obtain_cache(*n, *allow_large, cache.as_deref())?;
            let result = scan_max_gap(&order, default_jobs(*jobs))?;
            Ok(Outcome::ok(match format {
                ScanFormat::Json => document(
                    "scan",
                    serde_json::to_value(&result).expect("scan result serializes"),
                    timing,
                ),
                ScanFormat::Csv => {
                    let mut out = String::from("gap,count\n");
                    for (gap, count) in &result.histogram {
                        let _ = writeln!(out, "{gap},{count}");
                    }
                    out
                }
            }))
        }
    }
}

fn interval_payload(interval: &Interval) -> Result<Value, Error> {
    let report = gap_bound_report(interval)?;
    let partition = common_partition(interval)?;
    Ok(json!({
        "n": interval.degree(),
        "u": interval.bottom(),
        "v": interval.top(),
        "length_u": interval.bottom().length(),
        "length_v": interval.top().length(),
        "atoms": interval.atom_labels().labels,
        "coatoms": interval.coatom_labels().labels,
        "atom_count": report.atom_count,
        "coatom_count": report.coatom_count,
        "gap": report.gap,
        "components": partition,
        "component_sizes": report.component_sizes,
        "coatom_bound": report.coatom_bound,
        "atom_bound": report.atom_bound,
        "singleton_components": report.singletons,
        "f_sum": report.f_sum,
        "f_reduced": report.f_reduced,
        "f_n": report.f_n,
    }))
}

fn text_lines(payload: &Value) -> String {
    let mut out = String::new();
    for (key, value) in payload.as_object().expect("payload is an object") {
        let shown = match value {
            Value::String(s) => s.clone(),
            other => other.to_string(),
        };
        let _ = writeln!(out, "{key}: {shown}");
    }
    out
}

fn maximizers_payload(n: usize) -> Result<Value, Error> {
    let table = opt_top_with_provenance(n)?;
    let entries: Vec<Value> = table
        .iter()
        .map(|(perm, specs)| {
            let specs: Vec<Value> = specs
                .iter()
                .map(|s| json!({ "m": s.m, "t": s.t }))
                .collect();
            json!({ "permutation": perm, "specs": specs })
        })
        .collect();
    Ok(json!({
        "n": n,
        "maximizers": entries,
        "count": table.len(),
        "expected_count": opt_top_count(n),
    }))
}

#[allow(clippy::too_many_arguments)]
fn verify(
    n: usize,
    check: &str,
    sample: Option<u64>,
    seed: u64,
    jobs: usize,
    cache: Option<&Path>,
    allow_large: bool,
    timing: Option<Instant>,
) -> Result<Outcome, Error> {
    if n == 0 {
        return Err(Error::InvalidDegree(0));
    }
    if jobs == 0 {
        return Err(Error::ThreadPool("jobs must be at least 1".into()));
    }
    let (checks, skipped): (Vec<Check>, Vec<Check>) = if check == "all" {
        Check::ALL.into_iter().partition(|c| n >= c.min_degree())
    } else {
        let c: Check = check
            .parse()
            .map_err(|reason| Error::Unsupported { n, reason })?;
        (vec![c], Vec::new())
    };
    for c in &checks {
        c.validate_degree(n, allow_large)?;
    }
    let mode = match sample {
        Some(count) => Prop410Mode::Sample { count, seed },
        None if n <= EXHAUSTIVE_COMPONENTS_MAX => Prop410Mode::Exhaustive,
        None => Prop410Mode::Sample {
            count: DEFAULT_SAMPLE,
            seed,
        },
    };

    let needs_order = checks.iter().any(|c| {
        matches!(
            c,
            Check::TheoremA | Check::TheoremB | Check::Components | Check::Corollary
        )
    });
    let mut verifier = if needs_order {
        Verifier::with_cache(obtain_cache(n, allow_large, cache)?, jobs, allow_large)
    } else {
        Verifier::new(n, jobs, allow_large)
    };
    let mut reports: Vec<CheckReport> = Vec::new();
    for c in checks {
        reports.push(verifier.run(c, mode)?);
    }
    let passed = reports.iter().all(|r| r.passed);
    let skipped: Vec<Value> = skipped
        .into_iter()
        .map(|c| json!({ "check": c, "reason": format!("requires n >= {}", c.min_degree()) }))
        .collect();
    let payload = json!({
        "n": n,
        "passed": passed,
        "checks": reports,
        "skipped": skipped,
    });
    Ok(Outcome {
        code: if passed { EXIT_OK } else { EXIT_FAILED },
        stdout: document("verify", payload, timing),
        stderr: String::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("bruhatkit").chain(args.iter().copied()))
    }

    fn payload(out: &Outcome) -> Value {
        let doc: Value = serde_json::from_str(&out.stdout).unwrap();
        doc["payload"].clone()
    }

    #[test]
    fn leq_exit_codes() {
        let out = run_args(&["leq", "1234", "3412"]);
        assert_eq!((out.code, out.stdout.as_str()), (0, "true\n"));
        assert_eq!(run_args(&["leq", "3412", "3412"]).code, 0);
        let out = run_args(&["leq", "3412", "4231"]);
        assert_eq!((out.code, out.stdout.as_str()), (1, "false\n"));
        assert_eq!(run_args(&["leq", "12", "123"]).code, 2);
        assert_eq!(run_args(&["leq", "1224", "1234"]).code, 2);
        assert_eq!(run_args(&["leq", "1234"]).code, 2);
    }

    #[test]
    fn interval_payloads() {
        let p = payload(&run_args(&["interval", "1234", "3412"]));
        assert_eq!(p["atom_count"], 3);
        assert_eq!(p["coatom_count"], 4);
        assert_eq!(p["gap"], 1);
        assert_eq!(p["components"], json!([[1, 2, 3, 4]]));
        assert_eq!(p["atoms"], json!([[1, 2], [2, 3], [3, 4]]));
        assert_eq!(p["coatoms"], json!([[1, 3], [1, 4], [2, 3], [2, 4]]));
        assert_eq!(
            (p["coatom_bound"].clone(), p["atom_bound"].clone()),
            (json!(4), json!(3))
        );

        let p = payload(&run_args(&["interval", "1234", "1234"]));
        assert_eq!(
            (p["atom_count"].clone(), p["coatom_count"].clone()),
            (json!(0), json!(0))
        );
        assert_eq!(p["components"], json!([[1], [2], [3], [4]]));
        assert_eq!(payload(&run_args(&["interval", "2134", "4231"]))["gap"], 1);

        let out = run_args(&["interval", "4231", "3412"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("not an interval"), "{}", out.stderr);
    }

    #[test]
    fn text_and_json_agree() {
        let json_out = payload(&run_args(&["interval", "1243", "4231"]));
        let text = run_args(&["interval", "1243", "4231", "--format", "text"]).stdout;
        for key in [
            "atom_count",
            "coatom_count",
            "gap",
            "coatom_bound",
            "atom_bound",
        ] {
            assert!(
                text.contains(&format!("{key}: {}\n", json_out[key])),
                "{key}"
            );
        }
    }

    #[test]
    fn graphs() {
        let dot = run_args(&["graph", "1234", "3412", "--side", "coatom"]).stdout;
        for e in [
            "\"1\" -- \"3\"",
            "\"1\" -- \"4\"",
            "\"2\" -- \"3\"",
            "\"2\" -- \"4\"",
        ] {
            assert!(dot.contains(e));
        }
        assert_eq!(dot.matches(" -- ").count(), 4);
        let dot = run_args(&["graph", "1234", "1234", "--side", "atom"]).stdout;
        assert_eq!(dot.matches(" -- ").count(), 0);
        let dot = run_args(&["graph", "1234", "3412"]).stdout;
        assert_eq!(dot.matches(" -- ").count(), 3);
        assert!(dot.contains("\"3\" -- \"4\""));
    }

    #[test]
    fn maximizers() {
        let p = payload(&run_args(&["maximizers", "--n", "4"]));
        assert_eq!(p["count"], 2);
        assert_eq!(p["maximizers"][0]["permutation"], "3412");
        assert_eq!(p["maximizers"][0]["specs"], json!([{ "m": 2, "t": 2 }]));
        assert_eq!(p["maximizers"][1]["permutation"], "4231");
        assert_eq!(p["maximizers"][1]["specs"], json!([{ "m": 2, "t": 1 }]));
        let p = payload(&run_args(&["maximizers", "--n", "2"]));
        assert_eq!(p["maximizers"][0]["permutation"], "21");
        assert_eq!(payload(&run_args(&["maximizers", "--n", "5"]))["count"], 5);
        assert_eq!(run_args(&["maximizers", "--n", "1"]).code, 2);
        let text = run_args(&["maximizers", "--n", "4", "--format", "text"]).stdout;
        assert!(text.contains("4231 m=2,t=1"));
    }

    #[test]
    fn verify_usage_and_results() {
        let out = run_args(&["verify", "--n", "4", "--check", "all", "--jobs", "2"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let p = payload(&out);
        assert_eq!(p["passed"], true);
        assert_eq!(p["checks"].as_array().unwrap().len(), 7);

        let out = run_args(&["verify", "--n", "3", "--check", "b"]);
        assert_eq!(out.code, 2);
        assert!(out.stderr.contains("n >= 4"), "{}", out.stderr);
        assert_eq!(
            run_args(&["verify", "--n", "0", "--check", "lemma"]).code,
            2
        );
        assert_eq!(run_args(&["verify", "--n", "4", "--check", "zzz"]).code, 2);
        assert_eq!(run_args(&["verify", "--n", "8", "--check", "a"]).code, 2);

        let p = payload(&run_args(&["verify", "--n", "3"]));
        let skipped: Vec<_> = p["skipped"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s["check"].clone())
            .collect();
        assert_eq!(skipped, vec![json!("b"), json!("corollary")]);
    }

    #[test]
    fn scan_outputs() {
        let p = payload(&run_args(&["scan", "--n", "4"]));
        assert_eq!(p["max_gap"], 1);
        assert_eq!(p["maximizing_intervals"].as_array().unwrap().len(), 4);
        assert_eq!(payload(&run_args(&["scan", "--n", "2"]))["max_gap"], 0);
        let csv = run_args(&["scan", "--n", "3", "--format", "csv"]).stdout;
        assert!(csv.starts_with("gap,count\n"));
        let one = run_args(&["scan", "--n", "5", "--jobs", "1"]).stdout;
        let four = run_args(&["scan", "--n", "5", "--jobs", "4"]).stdout;
        assert_eq!(one, four);
        let timed = run_args(&["--timing", "scan", "--n", "3"]).stdout;
        assert!(timed.contains("elapsed_ms"));
        assert!(!one.contains("elapsed_ms"));
    }

    #[test]
    fn scan_uses_cache_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("nested").join("s4.cache");
        let path_str = path.to_str().unwrap();
        let first = run_args(&["scan", "--n", "4", "--cache", path_str]);
        assert_eq!(first.code, 0);
        assert!(path.exists());
        let second = run_args(&["scan", "--n", "4", "--cache", path_str]);
        assert_eq!(first.stdout, second.stdout);
        let wrong = run_args(&["scan", "--n", "5", "--cache", path_str]);
        assert_eq!(wrong.code, 2);
        assert!(wrong.stderr.contains("degree"), "{}", wrong.stderr);
    }
}
