//! Command-line surface: argument parsing, configuration layering
//! (flags > config file > environment > defaults), dispatch into the
//! library, report emission, run-manifest persistence, and the exit-code
//! contract:
//!
//! * 0 — everything checked out;
//! * 1 — a conjecture was falsified (a finding, printed prominently);
//! * 2 — usage error;
//! * 3 — a resource ceiling was hit;
//! * 4 — soundness alarm: a proved statement failed, i.e. a bug here.
//!
//! Progress and diagnostics go to stderr; canonical report bytes go to
//! stdout or `--out`, so pipelines stay clean.

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::enumeration::{davenport, d_star, eta, s_mn};
use crate::group::FiniteAbelianGroup;
use crate::nullstellensatz::cn_pipeline;
use crate::report::{
    render, sha256_hex, write_report, AfkReport, ClassifyReport, CnReport, Render, ReportFormat,
    RunManifest, TaskDigest,
};
use crate::sequence::Sequence;
use crate::theorems::afk::{random_instance, AfkInstance, AfkStrategy, RandomAfkParams};
use crate::theorems::schmid::{generate_schmid, match_schmid, SchmidForm};
use crate::theorems::{
    property_b, sweep_conjecture1, sweep_conjecture10, sweep_conjecture11, sweep_corollary7,
    sweep_theorem12, sweep_theorem3, sweep_theorem4, sweep_theorem5, sweep_theorem8_converse,
    VerificationReport,
};
use crate::{Error, Result, RunConfig, StatementKind};

pub const CEILING_ENV_VAR: &str = "ZEROSUM_CEILING";
const DEFAULT_SEED: u64 = 20177;

#[derive(Parser, Debug)]
#[command(
    name = "zerosum",
    version,
    about = "Exact zero-sum invariants and exhaustive structure checks over finite Abelian groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Worker threads for sharded sweeps (0 = library default).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Node-count ceiling for searches and sweeps.
    #[arg(long, global = true)]
    ceiling: Option<u64>,

    /// Report format: json, csv, or text.
    #[arg(long, global = true)]
    format: Option<String>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Seed for randomized suites.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Optional key=value configuration file; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write a run manifest (command line, config, report hashes) here.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    /// Print progress lines to stderr.
    #[arg(long, global = true)]
    progress: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Davenport constant by exhaustive search, with a maximal
    /// zero-sumfree witness.
    Davenport {
        #[arg(long)]
        group: String,
    },
    /// Exact invariants: `s_mN` (zero-sum of length ≡ 0 mod exp G) or
    /// `eta` (zero-sum of length ≤ ℓ·exp G, needs --ell).
    Invariant {
        which: String,
        #[arg(long)]
        group: String,
        #[arg(long)]
        ell: Option<u64>,
    },
    /// Zero-sum profile and classification predicates for one sequence.
    Classify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        sequence: String,
        /// Davenport constant to check normality against (computed when
        /// omitted).
        #[arg(long)]
        davenport: Option<u64>,
    },
    /// Exhaustive statement sweep: theorem3, theorem5, corollary7,
    /// theorem4, theorem8, theorem12, conj1, conj10, or conj11.
    Sweep {
        statement: String,
        #[arg(long)]
        group: String,
        #[arg(long)]
        i: Option<u64>,
        /// Avoided residues, comma-separated.
        #[arg(long = "A")]
        residues: Option<String>,
        #[arg(long)]
        ell: Option<u64>,
        /// Largest |U| for the long-zero-sum sweep.
        #[arg(long, default_value_t = 2)]
        u_max: usize,
    },
    /// Property B for n by enumeration of minimal zero-sum sequences.
    PropertyB {
        #[arg(long)]
        n: u64,
    },
    /// Generate or match the maximal minimal-zero-sum shapes over
    /// rank-two groups.
    Schmid {
        /// `generate` or `match`.
        action: String,
        #[arg(long)]
        group: String,
        /// `basis` or `generating` (generate only).
        #[arg(long)]
        form: Option<String>,
        #[arg(long)]
        g1: Option<String>,
        #[arg(long)]
        g2: Option<String>,
        /// Repeated-element position for the basis form: 0 or 1.
        #[arg(long)]
        head: Option<usize>,
        #[arg(long)]
        s: Option<u64>,
        /// Multipliers, comma-separated.
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        sequence: Option<String>,
    },
    /// Polynomial-method witness for residue-avoiding zero-sums over an
    /// elementary p-group.
    CnWitness {
        #[arg(long)]
        group: String,
        #[arg(long)]
        sequence: String,
        #[arg(long = "A")]
        residues: Option<String>,
    },
    /// Subset finder for prescribed residue sets modulo prime powers.
    Afk {
        #[arg(long)]
        p: Option<u64>,
        /// Exponents d_1 ≤ … ≤ d_n, comma-separated.
        #[arg(long)]
        d: Option<String>,
        /// Residue sets, `;`-separated, members comma-separated.
        #[arg(long)]
        sets: Option<String>,
        /// Vectors, `;`-separated, coordinates comma-separated.
        #[arg(long)]
        vectors: Option<String>,
        /// `auto`, `plain`, or `mitm`.
        #[arg(long)]
        strategy: Option<String>,
        /// Run a seeded random suite of this many instances instead.
        #[arg(long)]
        suite: Option<u64>,
    },
}

/// Layered configuration resolved from flags, config file, environment.
#[derive(Debug, Clone)]
struct Effective {
    run: RunConfig,
    format: ReportFormat,
    out: Option<PathBuf>,
    manifest: Option<PathBuf>,
    seed: u64,
}

fn parse_config_file(path: &PathBuf) -> Result<Vec<(String, String)>> {
    let body = std::fs::read_to_string(path)?;
    let mut pairs = Vec::new();
    for (lineno, line) in body.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let (k, v) = t.split_once('=').ok_or_else(|| {
            Error::Parse(format!(
                "config line {} is not key=value: {t:?}",
                lineno + 1
            ))
        })?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

fn resolve(cli: &Cli) -> Result<Effective> {
    let mut threads = cli.threads;
    let mut ceiling = cli.ceiling;
    let mut format = cli.format.clone();
    let mut out = cli.out.clone();
    let mut manifest = cli.manifest.clone();
    let mut seed = cli.seed;
    let mut progress = cli.progress;

    if let Some(path) = &cli.config {
        for (k, v) in parse_config_file(path)? {
            match k.as_str() {
                "threads" if threads.is_none() => {
                    threads = Some(v.parse().map_err(|_| bad_config(&k, &v))?)
                }
                "ceiling" if ceiling.is_none() => {
                    ceiling = Some(v.parse().map_err(|_| bad_config(&k, &v))?)
                }
                "format" if format.is_none() => format = Some(v),
                "out" if out.is_none() => out = Some(PathBuf::from(v)),
                "manifest" if manifest.is_none() => manifest = Some(PathBuf::from(v)),
                "seed" if seed.is_none() => {
                    seed = Some(v.parse().map_err(|_| bad_config(&k, &v))?)
                }
                "progress" if !progress => {
                    progress = v.parse().map_err(|_| bad_config(&k, &v))?
                }
                _ => {}
            }
        }
    }
    if ceiling.is_none() {
        if let Ok(v) = std::env::var(CEILING_ENV_VAR) {
            ceiling = Some(v.parse().map_err(|_| {
                Error::Parse(format!("bad {CEILING_ENV_VAR} value {v:?}"))
            })?);
        }
    }

    let mut run = RunConfig {
        threads: threads.unwrap_or(0),
        progress,
        ..Default::default()
    };
    if let Some(c) = ceiling {
        if c == 0 {
            return Err(Error::Parse("the ceiling must be positive".into()));
        }
        run.limits.search_nodes = c;
    }
    let format = match format {
        Some(f) => ReportFormat::from_str(&f)?,
        None => ReportFormat::Text,
    };
    Ok(Effective {
        run,
        format,
        out,
        manifest,
        seed: seed.unwrap_or(DEFAULT_SEED),
    })
}

fn bad_config(key: &str, value: &str) -> Error {
    Error::Parse(format!("bad config value for {key}: {value:?}"))
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad integer {part:?}")))
        })
        .collect()
}

fn parse_i64_list(s: &str) -> Result<Vec<i64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer {part:?}")))
        })
        .collect()
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::Parse(format!("missing required flag --{flag}")))
}

/// Exit code for a library error.
pub fn exit_code_for_error(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit { .. } => 3,
        Error::SoundnessAlarm(_) | Error::InconsistentDavenport { .. } => 4,
        _ => 2,
    }
}

/// Exit code for a finished sweep: verified → 0; a counterexample is a
/// finding for conjectures (1) and a bug for theorems (4).
pub fn exit_code_for_report(report: &VerificationReport) -> i32 {
    if report.is_verified() {
        return 0;
    }
    match report.kind() {
        StatementKind::Theorem => 4,
        StatementKind::Conjecture => 1,
    }
}

struct TaskOutput {
    payload: Box<dyn Render>,
    task: String,
    outcome: String,
    exit: i32,
}

fn sweep_output(report: VerificationReport) -> TaskOutput {
    let exit = exit_code_for_report(&report);
    if exit == 1 {
        eprintln!(
            "CONJECTURE FALSIFIED: {} over {} — {} counterexample(s); see report",
            report.statement.token(),
            report.group,
            report.counterexamples.len()
        );
    } else if exit == 4 {
        eprintln!(
            "SOUNDNESS ALARM: proved statement {} failed over {} — this is a bug in this tool",
            report.statement.token(),
            report.group
        );
    }
    TaskOutput {
        task: format!("sweep {}", report.statement.token()),
        outcome: report.outcome.token().to_string(),
        exit,
        payload: Box::new(report),
    }
}

fn run_command(command: &Command, eff: &Effective) -> Result<TaskOutput> {
    let cfg = &eff.run;
    match command {
        Command::Davenport { group } => {
            let g: FiniteAbelianGroup = group.parse()?;
            let result = davenport(&g, cfg)?;
            eprintln!(
                "D({}) = {} (D* = {}, {} nodes, {} ms)",
                g,
                result.value,
                d_star(&g),
                result.nodes,
                result.millis
            );
            Ok(TaskOutput {
                task: format!("davenport {g}"),
                outcome: result.value.to_string(),
                exit: 0,
                payload: Box::new(result),
            })
        }
        Command::Invariant { which, group, ell } => {
            let g: FiniteAbelianGroup = group.parse()?;
            let result = match which.to_ascii_lowercase().as_str() {
                "s_mn" | "smn" => s_mn(&g, cfg)?,
                "eta" => eta(&g, required(*ell, "ell")?, cfg)?,
                other => {
                    return Err(Error::Parse(format!(
                        "unknown invariant {other:?}; expected s_mN or eta"
                    )))
                }
            };
            Ok(TaskOutput {
                task: format!("invariant {} {g}", result.name),
                outcome: result.value.to_string(),
                exit: 0,
                payload: Box::new(result),
            })
        }
        Command::Classify {
            group,
            sequence,
            davenport: d_flag,
        } => {
            let g: FiniteAbelianGroup = group.parse()?;
            let seq = Sequence::parse(&g, sequence)?;
            let profile = seq.zero_sum_profile_with(&cfg.limits)?;
            let d = match d_flag {
                Some(d) => *d,
                None => davenport(&g, cfg)?.value,
            };
            let normal = if seq.len() >= d {
                Some(seq.is_normal(d)?)
            } else {
                None
            };
            let report = ClassifyReport {
                group: g.to_string(),
                sequence: seq.to_string(),
                length: seq.len(),
                sigma: seq.sigma().to_string(),
                profile_lengths: profile.lengths().iter().copied().collect(),
                zero_sumfree: profile.is_empty(),
                zero_sum: seq.is_zero_sum(),
                minimal_zero_sum: seq.is_minimal_zero_sum()?,
                dispersive: profile.lengths().len() >= 2,
                davenport: d,
                normal,
            };
            Ok(TaskOutput {
                task: format!("classify {seq} over {g}"),
                outcome: "classified".into(),
                exit: 0,
                payload: Box::new(report),
            })
        }
        Command::Sweep {
            statement,
            group,
            i,
            residues,
            ell,
            u_max,
        } => {
            let g: FiniteAbelianGroup = group.parse()?;
            let avoid = match residues {
                Some(r) => parse_u64_list(r)?,
                None => Vec::new(),
            };
            let report = match statement.as_str() {
                "theorem3" => sweep_theorem3(&g, required(*i, "i")?, cfg)?,
                "theorem4" => sweep_theorem4(&g, required(*i, "i")?, cfg)?,
                "theorem5" => sweep_theorem5(&g, required(*i, "i")?, &avoid, cfg)?,
                "corollary7" => sweep_corollary7(&g, required(*i, "i")?, cfg)?,
                "theorem8" => sweep_theorem8_converse(&g, cfg)?,
                "theorem12" => sweep_theorem12(&g, *u_max, cfg)?,
                "conj1" => sweep_conjecture1(&g, required(*i, "i")?, cfg)?,
                "conj10" => sweep_conjecture10(&g, required(*i, "i")?, &avoid, cfg)?,
                "conj11" => {
                    sweep_conjecture11(&g, required(*ell, "ell")?, required(*i, "i")?, cfg)?
                }
                other => {
                    return Err(Error::Parse(format!(
                        "unknown statement {other:?}; expected theorem3, theorem4, theorem5, \
                         corollary7, theorem8, theorem12, conj1, conj10, or conj11"
                    )))
                }
            };
            eprintln!(
                "{}: {} ({} instances, {} nodes, {} ms)",
                report.statement.token(),
                report.outcome.token(),
                report.instances_checked,
                report.nodes,
                report.millis
            );
            Ok(sweep_output(report))
        }
        Command::PropertyB { n } => {
            let report = property_b(*n, cfg)?;
            eprintln!(
                "property-b(n={n}): {} ({} minimal zero-sum sequences)",
                report.outcome.token(),
                report.instances_checked
            );
            Ok(sweep_output(report))
        }
        Command::Schmid {
            action,
            group,
            form,
            g1,
            g2,
            head,
            s,
            x,
            sequence,
        } => {
            let g: FiniteAbelianGroup = group.parse()?;
            match action.as_str() {
                "generate" => {
                    let e1 = g.parse_element(&required(g1.clone(), "g1")?)?;
                    let e2 = g.parse_element(&required(g2.clone(), "g2")?)?;
                    let multipliers = parse_u64_list(&required(x.clone(), "x")?)?;
                    let form_name = required(form.clone(), "form")?;
                    let schmid_form = match form_name.as_str() {
                        "basis" => SchmidForm::Basis {
                            group: g.clone(),
                            elements: [e1, e2],
                            head: head.unwrap_or(0),
                            multipliers,
                        },
                        "generating" => SchmidForm::Generating {
                            group: g.clone(),
                            pair: [e1, e2],
                            s: s.unwrap_or(1),
                            multipliers,
                        },
                        other => {
                            return Err(Error::Parse(format!(
                                "unknown form {other:?}; expected basis or generating"
                            )))
                        }
                    };
                    let seq = generate_schmid(&schmid_form)?;
                    let minimal = seq.is_minimal_zero_sum()?;
                    if !minimal {
                        return Err(Error::SoundnessAlarm(format!(
                            "generated shape {seq} is not a minimal zero-sum sequence"
                        )));
                    }
                    let report = SchmidReport {
                        group: g.to_string(),
                        action: "generate".into(),
                        matched: true,
                        form: Some(form_summary(&schmid_form)),
                        sequence: seq.to_string(),
                        length: seq.len(),
                    };
                    Ok(TaskOutput {
                        task: format!("schmid generate over {g}"),
                        outcome: "generated".into(),
                        exit: 0,
                        payload: Box::new(report),
                    })
                }
                "match" => {
                    let seq = Sequence::parse(&g, &required(sequence.clone(), "sequence")?)?;
                    let found = match_schmid(&seq)?;
                    let report = SchmidReport {
                        group: g.to_string(),
                        action: "match".into(),
                        matched: found.is_some(),
                        form: found.as_ref().map(form_summary),
                        sequence: seq.to_string(),
                        length: seq.len(),
                    };
                    Ok(TaskOutput {
                        task: format!("schmid match over {g}"),
                        outcome: if report.matched { "matched" } else { "no-match" }.into(),
                        exit: 0,
                        payload: Box::new(report),
                    })
                }
                other => Err(Error::Parse(format!(
                    "unknown action {other:?}; expected generate or match"
                ))),
            }
        }
        Command::CnWitness {
            group,
            sequence,
            residues,
        } => {
            let g: FiniteAbelianGroup = group.parse()?;
            let seq = Sequence::parse(&g, sequence)?;
            let avoid = match residues {
                Some(r) => parse_u64_list(r)?,
                None => Vec::new(),
            };
            let outcome = cn_pipeline(&seq, &avoid, &cfg.limits)?;
            let report = CnReport {
                group: g.to_string(),
                sequence: seq.to_string(),
                outcome,
            };
            Ok(TaskOutput {
                task: format!("cn-witness over {g}"),
                outcome: "extracted".into(),
                exit: 0,
                payload: Box::new(report),
            })
        }
        Command::Afk {
            p,
            d,
            sets,
            vectors,
            strategy,
            suite,
        } => {
            let strategy = match strategy.as_deref() {
                None | Some("auto") => AfkStrategy::Auto,
                Some("plain") => AfkStrategy::Plain,
                Some("mitm") => AfkStrategy::MeetInMiddle,
                Some(other) => {
                    return Err(Error::Parse(format!(
                        "unknown strategy {other:?}; expected auto, plain, or mitm"
                    )))
                }
            };
            if let Some(count) = suite {
                return run_afk_suite(*count, eff.seed, strategy, cfg);
            }
            let p = required(*p, "p")?;
            let exponents: Vec<u32> = parse_u64_list(&required(d.clone(), "d")?)?
                .into_iter()
                .map(|x| x as u32)
                .collect();
            let sets: Vec<Vec<i64>> = required(sets.clone(), "sets")?
                .split(';')
                .map(parse_i64_list)
                .collect::<Result<_>>()?;
            let vectors: Vec<Vec<i64>> = required(vectors.clone(), "vectors")?
                .split(';')
                .map(parse_i64_list)
                .collect::<Result<_>>()?;
            let inst = AfkInstance::new(p, exponents, sets, vectors)?;
            let solution = inst.find_subset_with(strategy, &cfg.limits)?;
            let report = AfkReport {
                prime: inst.prime(),
                exponents: inst.exponents().to_vec(),
                vector_count: inst.vector_count(),
                hypothesis_bound: inst.hypothesis_bound(),
                hypothesis_holds: inst.hypothesis_holds(),
                card_readings_differ: inst.card_readings_differ(),
                solution,
            };
            Ok(TaskOutput {
                task: "afk".into(),
                outcome: if report.solution.is_some() {
                    "found"
                } else {
                    "none"
                }
                .into(),
                exit: 0,
                payload: Box::new(report),
            })
        }
    }
}

fn form_summary(form: &SchmidForm) -> serde_json::Value {
    match form {
        SchmidForm::Basis {
            elements,
            head,
            multipliers,
            ..
        } => json!({
            "kind": "basis",
            "e1": elements[0].to_string(),
            "e2": elements[1].to_string(),
            "head": head,
            "multipliers": multipliers,
        }),
        SchmidForm::Generating {
            pair,
            s,
            multipliers,
            ..
        } => json!({
            "kind": "generating",
            "g1": pair[0].to_string(),
            "g2": pair[1].to_string(),
            "s": s,
            "multipliers": multipliers,
        }),
    }
}

/// Seeded random-instance suite: every instance satisfies the hypothesis
/// bound, so every search must succeed.
fn run_afk_suite(
    count: u64,
    seed: u64,
    strategy: AfkStrategy,
    cfg: &RunConfig,
) -> Result<TaskOutput> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let params = RandomAfkParams::default();
    for k in 0..count {
        let inst = random_instance(&mut rng, &params);
        let found = inst.find_subset_with(strategy, &cfg.limits)?;
        if found.is_none() {
            return Err(Error::SoundnessAlarm(format!(
                "suite instance {k} satisfies the hypothesis but produced no subset"
            )));
        }
    }
    let report = AfkSuiteReport {
        instances: count,
        seed,
        all_found: true,
    };
    Ok(TaskOutput {
        task: format!("afk suite of {count}"),
        outcome: "verified".into(),
        exit: 0,
        payload: Box::new(report),
    })
}

struct AfkSuiteReport {
    instances: u64,
    seed: u64,
    all_found: bool,
}

impl Render for AfkSuiteReport {
    fn json(&self) -> serde_json::Value {
        json!({
            "instances": self.instances,
            "seed": self.seed,
            "all_found": self.all_found,
        })
    }

    fn csv(&self) -> String {
        format!(
            "instances,seed,all_found\n{},{},{}\n",
            self.instances, self.seed, self.all_found
        )
    }

    fn text(&self) -> String {
        format!(
            "instances: {}\nseed: {}\nall found: {}\n",
            self.instances, self.seed, self.all_found
        )
    }
}

struct SchmidReport {
    group: String,
    action: String,
    matched: bool,
    form: Option<serde_json::Value>,
    sequence: String,
    length: u64,
}

impl Render for SchmidReport {
    fn json(&self) -> serde_json::Value {
        json!({
            "group": self.group,
            "action": self.action,
            "matched": self.matched,
            "form": self.form,
            "sequence": self.sequence,
            "length": self.length,
        })
    }

    fn csv(&self) -> String {
        let form = self
            .form
            .as_ref()
            .map(|f| f.to_string())
            .unwrap_or_default();
        format!(
            "group,action,matched,sequence,length,form\n{}\n",
            [
                self.group.clone(),
                self.action.clone(),
                self.matched.to_string(),
                self.sequence.clone(),
                self.length.to_string(),
                form,
            ]
            .iter()
            .map(|f| if f.contains(',') {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.clone()
            })
            .collect::<Vec<_>>()
            .join(",")
        )
    }

    fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("action: {} over {}\n", self.action, self.group));
        out.push_str(&format!("sequence: {} (length {})\n", self.sequence, self.length));
        out.push_str(&format!("matched: {}\n", self.matched));
        if let Some(form) = &self.form {
            out.push_str(&format!("form: {form}\n"));
        }
        out
    }
}

fn unix_ms() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis() as u64)
        .unwrap_or(0)
}

fn run(cli: &Cli, argv: &[String]) -> Result<i32> {
    let eff = resolve(cli)?;
    let started = unix_ms();
    let clock = Instant::now();
    let output = run_command(&cli.command, &eff)?;
    let rendered = render(output.payload.as_ref(), eff.format);
    let hash = sha256_hex(rendered.as_bytes());
    match &eff.out {
        Some(path) => {
            write_report(path, &rendered)?;
            eprintln!("report written to {}", path.display());
        }
        None => print!("{rendered}"),
    }
    if let Some(path) = &eff.manifest {
        let manifest = RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command_line: argv.to_vec(),
            config: vec![
                ("threads".into(), json!(eff.run.threads)),
                ("ceiling".into(), json!(eff.run.limits.search_nodes)),
                ("format".into(), json!(eff.format.to_string())),
                ("seed".into(), json!(eff.seed)),
            ],
            started_unix_ms: started,
            finished_unix_ms: unix_ms(),
            tasks: vec![TaskDigest {
                task: output.task.clone(),
                outcome: output.outcome.clone(),
                millis: clock.elapsed().as_millis() as u64,
                report_sha256: hash,
                report_path: eff
                    .out
                    .as_ref()
                    .map(|p| p.display().to_string()),
            }],
        };
        manifest.write(path)?;
    }
    Ok(output.exit)
}

/// Parses and executes a full command line (including the program name)
/// and returns the process exit code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    match run(&cli, &argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for_error(&e)
        }
    }
}
