//! Byte-stable report emission (JSON, CSV, text) and run manifests.
//!
//! Rendered reports must be identical for identical inputs and
//! configuration, across runs and worker counts, so sweep outputs can be
//! diffed and archived. JSON objects serialize with sorted keys and fixed
//! formatting, and the wall-clock field of every payload is pinned to zero
//! in the rendered bytes — real timing goes to the diagnostic stream and
//! the run manifest instead.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::enumeration::InvariantResult;
use crate::nullstellensatz::CnOutcome;
use crate::theorems::{AfkSolution, VerificationReport};
use crate::{Error, Result};

pub const REPORT_SCHEMA_VERSION: u64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "text" => Ok(ReportFormat::Text),
            other => Err(Error::Parse(format!(
                "unknown format {other:?}; expected json, csv, or text"
            ))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
            ReportFormat::Text => "text",
        })
    }
}

/// Anything the CLI can emit.
pub trait Render {
    fn json(&self) -> Value;
    fn csv(&self) -> String;
    fn text(&self) -> String;
}

/// Canonical bytes for a payload in a format. JSON is pretty-printed with
/// sorted keys; every rendering ends in a newline.
pub fn render(payload: &dyn Render, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&payload.json()).expect("valid JSON value");
            s.push('\n');
            s
        }
        ReportFormat::Csv => payload.csv(),
        ReportFormat::Text => payload.text(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| csv_field(f))
        .collect::<Vec<_>>()
        .join(",")
}

fn params_map(params: &[(String, Value)]) -> Value {
    let mut map = Map::new();
    for (k, v) in params {
        map.insert(k.clone(), v.clone());
    }
    Value::Object(map)
}

impl Render for VerificationReport {
    fn json(&self) -> Value {
        json!({
            "statement": self.statement.token(),
            "group": self.group,
            "params": params_map(&self.params),
            "outcome": self.outcome.token(),
            "counterexamples": self.counterexamples.iter().map(|c| json!({
                "sequence": c.sequence,
                "clause": c.clause,
            })).collect::<Vec<_>>(),
            "instances_checked": self.instances_checked,
            "nodes": self.nodes,
            "millis": 0,
            "version": REPORT_SCHEMA_VERSION,
        })
    }

    fn csv(&self) -> String {
        let mut out = String::from("statement,group,outcome,instances_checked,nodes,sequence,clause\n");
        let base = [
            self.statement.token().to_string(),
            self.group.clone(),
            self.outcome.token().to_string(),
            self.instances_checked.to_string(),
            self.nodes.to_string(),
        ];
        if self.counterexamples.is_empty() {
            let mut fields = base.to_vec();
            fields.push(String::new());
            fields.push(String::new());
            out.push_str(&csv_line(&fields));
            out.push('\n');
        } else {
            for c in &self.counterexamples {
                let mut fields = base.to_vec();
                fields.push(c.sequence.clone());
                fields.push(c.clause.clone());
                out.push_str(&csv_line(&fields));
                out.push('\n');
            }
        }
        out
    }

    fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("statement: {}\n", self.statement.token()));
        out.push_str(&format!("group: {}\n", self.group));
        for (k, v) in &self.params {
            out.push_str(&format!("{k}: {v}\n"));
        }
        out.push_str(&format!("outcome: {}\n", self.outcome.token()));
        out.push_str(&format!("instances checked: {}\n", self.instances_checked));
        out.push_str(&format!("nodes: {}\n", self.nodes));
        for c in &self.counterexamples {
            out.push_str(&format!("counterexample: {}  ({})\n", c.sequence, c.clause));
        }
        out
    }
}

impl Render for InvariantResult {
    fn json(&self) -> Value {
        let mut map = Map::new();
        map.insert("invariant".into(), json!(self.name));
        map.insert("group".into(), json!(self.group.to_string()));
        map.insert("value".into(), json!(self.value));
        map.insert(
            "witness".into(),
            match &self.witness {
                Some(w) => json!(w.to_string()),
                None => Value::Null,
            },
        );
        map.insert("nodes".into(), json!(self.nodes));
        map.insert("millis".into(), json!(0));
        if let Some(ell) = self.ell {
            map.insert("ell".into(), json!(ell));
        }
        Value::Object(map)
    }

    fn csv(&self) -> String {
        let mut out = String::from("invariant,group,value,witness,nodes\n");
        out.push_str(&csv_line(&[
            self.name.to_string(),
            self.group.to_string(),
            self.value.to_string(),
            self.witness
                .as_ref()
                .map(|w| w.to_string())
                .unwrap_or_default(),
            self.nodes.to_string(),
        ]));
        out.push('\n');
        out
    }

    fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("invariant: {}\n", self.name));
        out.push_str(&format!("group: {}\n", self.group));
        if let Some(ell) = self.ell {
            out.push_str(&format!("ell: {ell}\n"));
        }
        out.push_str(&format!("value: {}\n", self.value));
        if let Some(w) = &self.witness {
            out.push_str(&format!("extremal witness: {w}\n"));
        }
        out.push_str(&format!("nodes: {}\n", self.nodes));
        out
    }
}

/// Classification of one concrete sequence.
#[derive(Debug, Clone)]
pub struct ClassifyReport {
    pub group: String,
    pub sequence: String,
    pub length: u64,
    pub sigma: String,
    pub profile_lengths: Vec<u64>,
    pub zero_sumfree: bool,
    pub zero_sum: bool,
    pub minimal_zero_sum: bool,
    pub dispersive: bool,
    pub davenport: u64,
    pub normal: Option<bool>,
}

impl Render for ClassifyReport {
    fn json(&self) -> Value {
        json!({
            "group": self.group,
            "sequence": self.sequence,
            "length": self.length,
            "sigma": self.sigma,
            "profile": self.profile_lengths,
            "zero_sumfree": self.zero_sumfree,
            "zero_sum": self.zero_sum,
            "minimal_zero_sum": self.minimal_zero_sum,
            "dispersive": self.dispersive,
            "davenport": self.davenport,
            "normal": self.normal,
        })
    }

    fn csv(&self) -> String {
        let mut out = String::from(
            "group,sequence,length,sigma,profile,zero_sumfree,zero_sum,minimal_zero_sum,dispersive,davenport,normal\n",
        );
        out.push_str(&csv_line(&[
            self.group.clone(),
            self.sequence.clone(),
            self.length.to_string(),
            self.sigma.clone(),
            self.profile_lengths
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            self.zero_sumfree.to_string(),
            self.zero_sum.to_string(),
            self.minimal_zero_sum.to_string(),
            self.dispersive.to_string(),
            self.davenport.to_string(),
            self.normal.map(|b| b.to_string()).unwrap_or_default(),
        ]));
        out.push('\n');
        out
    }

    fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("sequence: {} over {}\n", self.sequence, self.group));
        out.push_str(&format!("length: {}\n", self.length));
        out.push_str(&format!("sigma: {}\n", self.sigma));
        out.push_str(&format!(
            "zero-sum lengths: {{{}}}\n",
            self.profile_lengths
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out.push_str(&format!("zero-sumfree: {}\n", self.zero_sumfree));
        out.push_str(&format!("zero-sum: {}\n", self.zero_sum));
        out.push_str(&format!("minimal zero-sum: {}\n", self.minimal_zero_sum));
        out.push_str(&format!("dispersive: {}\n", self.dispersive));
        out.push_str(&format!("davenport: {}\n", self.davenport));
        if let Some(normal) = self.normal {
            out.push_str(&format!("normal: {normal}\n"));
        }
        out
    }
}

/// Audit record of the polynomial pipeline.
#[derive(Debug, Clone)]
pub struct CnReport {
    pub group: String,
    pub sequence: String,
    pub outcome: CnOutcome,
}

impl Render for CnReport {
    fn json(&self) -> Value {
        json!({
            "p": self.outcome.prime,
            "r": self.outcome.rank,
            "k": self.outcome.k,
            "A": self.outcome.avoid,
            "delta": self.outcome.delta,
            "witness_support": self.outcome.witness_support,
            "extracted_length": self.outcome.extracted.len(),
        })
    }

    fn csv(&self) -> String {
        let mut out = String::from("p,r,k,A,delta,witness_support,extracted_length\n");
        out.push_str(&csv_line(&[
            self.outcome.prime.to_string(),
            self.outcome.rank.to_string(),
            self.outcome.k.to_string(),
            self.outcome
                .avoid
                .iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            self.outcome.delta.to_string(),
            self.outcome
                .witness_support
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            self.outcome.extracted.len().to_string(),
        ]));
        out.push('\n');
        out
    }

    fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("sequence: {} over {}\n", self.sequence, self.group));
        out.push_str(&format!(
            "p = {}, r = {}, k = {}, A = {:?}\n",
            self.outcome.prime, self.outcome.rank, self.outcome.k, self.outcome.avoid
        ));
        out.push_str(&format!("delta: {}\n", self.outcome.delta));
        out.push_str(&format!(
            "witness support (0-based): {:?}\n",
            self.outcome.witness_support
        ));
        out.push_str(&format!(
            "extracted: {} (length {})\n",
            self.outcome.extracted,
            self.outcome.extracted.len()
        ));
        out
    }
}

/// Outcome of a subset search on one instance.
#[derive(Debug, Clone)]
pub struct AfkReport {
    pub prime: u64,
    pub exponents: Vec<u32>,
    pub vector_count: usize,
    pub hypothesis_bound: u64,
    pub hypothesis_holds: bool,
    pub card_readings_differ: bool,
    pub solution: Option<AfkSolution>,
}

impl Render for AfkReport {
    fn json(&self) -> Value {
        json!({
            "p": self.prime,
            "exponents": self.exponents,
            "m": self.vector_count,
            "hypothesis_bound": self.hypothesis_bound,
            "hypothesis_holds": self.hypothesis_holds,
            "card_readings_differ": self.card_readings_differ,
            "indices": self.solution.as_ref().map(|s| s.indices.clone()),
            "residues": self.solution.as_ref().map(|s| s.residues.clone()),
        })
    }

    fn csv(&self) -> String {
        let mut out =
            String::from("p,exponents,m,hypothesis_bound,hypothesis_holds,indices,residues\n");
        out.push_str(&csv_line(&[
            self.prime.to_string(),
            self.exponents
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            self.vector_count.to_string(),
            self.hypothesis_bound.to_string(),
            self.hypothesis_holds.to_string(),
            self.solution
                .as_ref()
                .map(|s| {
                    s.indices
                        .iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .unwrap_or_default(),
            self.solution
                .as_ref()
                .map(|s| {
                    s.residues
                        .iter()
                        .map(|r| r.to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .unwrap_or_default(),
        ]));
        out.push('\n');
        out
    }

    fn text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "p = {}, exponents = {:?}, m = {}\n",
            self.prime, self.exponents, self.vector_count
        ));
        out.push_str(&format!(
            "hypothesis bound: {} ({})\n",
            self.hypothesis_bound,
            if self.hypothesis_holds { "holds" } else { "fails" }
        ));
        if self.card_readings_differ {
            out.push_str("note: card_p and card_{p^d} readings differ for some set\n");
        }
        match &self.solution {
            Some(s) => {
                out.push_str(&format!("indices (0-based): {:?}\n", s.indices));
                out.push_str(&format!("residues: {:?}\n", s.residues));
            }
            None => out.push_str("no subset exists (hypothesis bound not met)\n"),
        }
        out
    }
}

/// Content-addressed entry for the run manifest.
#[derive(Debug, Clone)]
pub struct TaskDigest {
    pub task: String,
    pub outcome: String,
    pub millis: u64,
    pub report_sha256: String,
    pub report_path: Option<String>,
}

/// Execution trail for a batch run: tool version, command line, effective
/// configuration, timestamps, and a content hash per emitted report.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub tool_version: String,
    pub command_line: Vec<String>,
    pub config: Vec<(String, Value)>,
    pub started_unix_ms: u64,
    pub finished_unix_ms: u64,
    pub tasks: Vec<TaskDigest>,
}

impl RunManifest {
    pub fn json(&self) -> Value {
        json!({
            "tool_version": self.tool_version,
            "command_line": self.command_line,
            "config": params_map(&self.config),
            "started_unix_ms": self.started_unix_ms,
            "finished_unix_ms": self.finished_unix_ms,
            "tasks": self.tasks.iter().map(|t| json!({
                "task": t.task,
                "outcome": t.outcome,
                "millis": t.millis,
                "report_sha256": t.report_sha256,
                "report_path": t.report_path,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut s = serde_json::to_string_pretty(&self.json()).expect("valid JSON value");
        s.push('\n');
        fs::write(path, s)?;
        Ok(())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Writes rendered report bytes to a file.
pub fn write_report(path: &Path, rendered: &str) -> Result<()> {
    fs::write(path, rendered)?;
    Ok(())
}
