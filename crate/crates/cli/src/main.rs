//! `blich`: count lattice points, measure bodies and check lattice point
//! inequalities from body-spec files.
//!
//! Exit codes: 0 success, 1 a proved inequality was violated, 2 usage or
//! input error, 3 some verdict was inconclusive.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use blichfeldt_core::counting::{self, CountMethod};
use blichfeldt_core::harness::{self, reports_to_csv, run_items, CorpusReport};
use blichfeldt_core::witnesses::{self, read_body_spec};
use blichfeldt_core::{
    Body, CheckOptions, CorpusSpec, CountOptions, InequalityId, InequalityReport, Precision, Verdict,
};

const EXIT_VIOLATED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "blich", version, about = "Exact lattice point counts and certified inequality checks")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Serialize)]
struct Global {
    /// Seed for corpus generation; overrides the seed in a corpus spec.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest number of candidate points an enumeration may scan.
    #[arg(long, global = true, env = "BLICH_BUDGET", default_value_t = counting::DEFAULT_BUDGET)]
    budget: u64,
    /// Precision cap for certified comparisons, in bits.
    #[arg(long, global = true, default_value_t = 4096)]
    precision_max_bits: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
    Human,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of lattice points in a body.
    Count {
        #[arg(long)]
        body: PathBuf,
    },
    /// Volume, surface area and, in dimension three, intrinsic volumes.
    Measure {
        #[arg(long)]
        body: PathBuf,
    },
    /// Check inequalities against a body.
    Check {
        /// Inequality id, repeatable; `all` selects every id.
        #[arg(long = "id", required = true)]
        ids: Vec<String>,
        #[arg(long)]
        body: PathBuf,
    },
    /// Boundary-layer audit of a lattice polytope over Z^n.
    Audit {
        #[arg(long)]
        body: PathBuf,
    },
    /// Run a corpus spec against a list of ids.
    Corpus {
        #[arg(long)]
        spec: PathBuf,
        /// Inequality id, repeatable; defaults to every id.
        #[arg(long = "id")]
        ids: Vec<String>,
    },
    /// Emit a body-spec file for a named example.
    Witness {
        #[arg(long, value_enum)]
        family: WitnessFamily,
        #[arg(long)]
        n: usize,
        /// `k` for simplices.
        #[arg(long)]
        k: Option<u64>,
        /// `m` for Reeve simplices.
        #[arg(long)]
        m: Option<u64>,
        /// Translate by half of the first unit vector (simplices) or of
        /// the all-ones vector (Reeve simplices).
        #[arg(long)]
        half_translate: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WitnessFamily {
    #[value(name = "simplex_Sk", alias = "simplex_sk")]
    SimplexSk,
    #[value(name = "reeve_Tm", alias = "reeve_tm")]
    ReeveTm,
}

/// An error that maps to the usage exit code.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

fn input<T>(r: blichfeldt_core::Result<T>, what: &str) -> Result<T> {
    r.map_err(|e| anyhow!(InputError(anyhow!(e).context(what.to_string()))))
}

fn load_body(path: &Path) -> Result<Body> {
    input(read_body_spec(path), "cannot load body spec")
}

fn parse_ids(raw: &[String]) -> Result<Vec<InequalityId>> {
    if raw.is_empty() || raw.iter().any(|s| s.eq_ignore_ascii_case("all")) {
        return Ok(InequalityId::ALL.to_vec());
    }
    raw.iter()
        .flat_map(|s| s.split(','))
        .map(|s| input(s.parse(), "bad --id"))
        .collect()
}

impl Global {
    fn check_options(&self) -> CheckOptions {
        CheckOptions {
            count: CountOptions {
                budget: self.budget,
                ..CountOptions::default()
            },
            precision: Precision {
                max_bits: self.precision_max_bits,
                ..Precision::default()
            },
        }
    }
}

/// Writes to `--out` through a temporary file and rename, or to stdout.
fn emit(global: &Global, text: &str) -> Result<()> {
    match &global.out {
        Some(path) => write_atomic(path, text),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("renaming to {}", path.display()))?;
    Ok(())
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable output") + "\n"
}

fn exit_for(reports: &[&InequalityReport]) -> u8 {
    if reports.iter().any(|r| r.verdict == Verdict::Violated && !r.observational) {
        EXIT_VIOLATED
    } else if reports.iter().any(|r| r.verdict == Verdict::Inconclusive) {
        EXIT_INCONCLUSIVE
    } else {
        0
    }
}

#[derive(Serialize)]
struct CountOutput {
    body: String,
    count: String,
    methods: Vec<CountMethod>,
}

fn run(cli: Cli) -> Result<u8> {
    let g = &cli.global;
    let opts = g.check_options();
    eprintln!("# effective config: {}", serde_json::to_string(g).expect("config serializes"));
    match &cli.command {
        Command::Count { body } => {
            let b = load_body(body)?;
            let c = counting::count(&b, &opts.count)?;
            let out = CountOutput {
                body: b.describe(),
                count: c.count.to_string(),
                methods: c.methods,
            };
            let text = match g.format {
                Format::Json => json(&out),
                Format::Csv => format!("body,count\n\"{}\",{}\n", out.body.replace('"', "\"\""), out.count),
                Format::Human => format!("{}\n", out.count),
            };
            emit(g, &text)?;
            Ok(0)
        }
        Command::Measure { body } => {
            let b = load_body(body)?;
            let m = harness::measure_body(&b, &opts.precision)?;
            let text = match g.format {
                Format::Json => json(&m),
                Format::Csv => {
                    let mut s = String::from("quantity,value,enclosure\n");
                    let mut row = |name: &str, q: &harness::Quantity| {
                        s += &format!("{name},\"{}\",\"{}\"\n", q.exact.clone().unwrap_or_default(), q.enclosure.clone().unwrap_or_default());
                    };
                    row("volume", &m.volume);
                    row("surface_area", &m.surface_area);
                    if let Some(iv) = &m.intrinsic_volumes {
                        for (i, q) in iv.iter().enumerate() {
                            row(&format!("V{i}"), q);
                        }
                    }
                    s
                }
                Format::Human => {
                    let mut s = format!(
                        "{} n={} det={}\nvolume: {}\nsurface area: {}\n",
                        m.kind,
                        m.dim,
                        m.lattice_det,
                        m.volume.display(),
                        m.surface_area.display()
                    );
                    if let Some(iv) = &m.intrinsic_volumes {
                        for (i, q) in iv.iter().enumerate() {
                            s += &format!("V{i}: {}\n", q.display());
                        }
                    }
                    s
                }
            };
            emit(g, &text)?;
            Ok(0)
        }
        Command::Check { ids, body } => {
            let ids = parse_ids(ids)?;
            let b = load_body(body)?;
            let mut reports = Vec::new();
            for id in ids {
                reports.push(harness::check(id, &b, &opts)?);
            }
            let text = match g.format {
                Format::Json => json(&reports),
                Format::Csv => {
                    let rows: Vec<_> = reports.iter().map(|r| (0usize, "", r)).collect();
                    reports_to_csv(&rows)?
                }
                Format::Human => reports.iter().map(|r| r.summary_line() + "\n").collect(),
            };
            emit(g, &text)?;
            Ok(exit_for(&reports.iter().collect::<Vec<_>>()))
        }
        Command::Audit { body } => {
            let b = load_body(body)?;
            let p = b
                .polytope_part()
                .filter(|_| matches!(b.kind(), blichfeldt_core::BodyKind::Polytope(_)))
                .ok_or_else(|| anyhow!(InputError(anyhow!("the audit needs a lattice polytope body"))))?;
            let a = input(harness::boundary_layer_audit(p, &opts.count, &opts.precision), "audit")?;
            let text = match g.format {
                Format::Json => json(&a),
                Format::Csv => {
                    let mut s = String::from("check,passed,detail\n");
                    for c in &a.checks {
                        s += &format!("\"{}\",{},\"{}\"\n", c.name, c.passed, c.detail.replace('"', "\"\""));
                    }
                    s
                }
                Format::Human => {
                    let mut s = format!(
                        "G = {}, #L1 = {}, #L2 = {}, vol = {}\n",
                        a.lattice_points,
                        a.l1.len(),
                        a.l2_count,
                        a.volume
                    );
                    for c in &a.checks {
                        s += &format!("{} {}: {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
                    }
                    s
                }
            };
            emit(g, &text)?;
            Ok(if a.passed() { 0 } else { EXIT_VIOLATED })
        }
        Command::Corpus { spec, ids } => {
            let ids = parse_ids(ids)?;
            let text = fs::read_to_string(spec).with_context(|| format!("reading {}", spec.display()))
                .map_err(|e| anyhow!(InputError(e)))?;
            let mut cs: CorpusSpec = serde_json::from_str(&text)
                .map_err(|e| anyhow!(InputError(anyhow!("{}: line {}, column {}: {e}", spec.display(), e.line(), e.column()))))?;
            if let Some(seed) = g.seed {
                cs.seed = seed;
            }
            let items = input(cs.generate(), "invalid corpus spec")?;
            let mut report: CorpusReport = run_items(&items, &ids, &opts);
            report.spec = Some(cs);
            write_violations(g, &report)?;
            let text = match g.format {
                Format::Json => report.to_json() + "\n",
                Format::Csv => report.to_csv()?,
                Format::Human => corpus_human(&report),
            };
            emit(g, &text)?;
            Ok(exit_for(&report.rows.iter().map(|r| &r.report).collect::<Vec<_>>()))
        }
        Command::Witness { family, n, k, m, half_translate } => {
            let body = match family {
                WitnessFamily::SimplexSk => {
                    let k = k.ok_or_else(|| anyhow!(InputError(anyhow!("--k is required for simplex_Sk"))))?;
                    let p = input(witnesses::simplex_sk(*n, k), "invalid witness")?;
                    if *half_translate {
                        input(witnesses::half_translate(p), "invalid witness")?
                    } else {
                        Body::polytope(p)
                    }
                }
                WitnessFamily::ReeveTm => {
                    let m = m.ok_or_else(|| anyhow!(InputError(anyhow!("--m is required for reeve_Tm"))))?;
                    if *half_translate {
                        input(witnesses::reeve_half_translate(*n, m), "invalid witness")?
                    } else {
                        Body::polytope(input(witnesses::reeve_tm(*n, m), "invalid witness")?)
                    }
                }
            };
            emit(g, &(witnesses::body_to_json(&body) + "\n"))?;
            Ok(0)
        }
    }
}

/// Body specs of violating rows go next to the report file.
fn write_violations(g: &Global, report: &CorpusReport) -> Result<()> {
    let Some(out) = &g.out else { return Ok(()) };
    let violating: Vec<_> = report.rows.iter().filter(|r| r.report.body_spec.is_some()).collect();
    if violating.is_empty() {
        return Ok(());
    }
    let mut dir = out.as_os_str().to_owned();
    dir.push(".violations");
    let dir = PathBuf::from(dir);
    fs::create_dir_all(&dir)?;
    for r in violating {
        let path = dir.join(format!("row-{}-{}.json", r.index, r.report.id));
        write_atomic(&path, r.report.body_spec.as_deref().unwrap_or_default())?;
    }
    Ok(())
}

fn corpus_human(report: &CorpusReport) -> String {
    let mut s = String::new();
    for r in &report.rows {
        if !matches!(r.report.verdict, Verdict::Holds | Verdict::HoldsWithEquality) {
            s += &format!("#{} {}: {}\n", r.index, r.label, r.report.summary_line());
        }
    }
    for sm in &report.summary {
        let counts: Vec<String> = sm
            .verdicts
            .iter()
            .filter(|(_, c)| **c > 0)
            .map(|(v, c)| format!("{v}={c}"))
            .collect();
        s += &format!(
            "{}: {}; ratio min {} max {}\n",
            sm.id,
            counts.join(" "),
            sm.min_ratio.map_or("-".into(), |x| format!("{x:.6}")),
            sm.max_ratio.map_or("-".into(), |x| format!("{x:.6}")),
        );
    }
    s
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            // a count that ran out of budget decides nothing
            let undecided = matches!(
                e.downcast_ref::<blichfeldt_core::Error>(),
                Some(blichfeldt_core::Error::BudgetExceeded { .. } | blichfeldt_core::Error::RetryLimit(_))
            );
            ExitCode::from(if undecided { EXIT_INCONCLUSIVE } else { EXIT_USAGE })
        }
    }
}
