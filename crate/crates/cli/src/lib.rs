//! Command implementations behind the `nilcomm` binary.
//!
//! Every command produces a single [`Document`]; `--format json` prints it as JSON and text
//! mode renders the same data for humans.

use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use nilcomm_core::deciders::{decide_module, Property, Verdict};
use nilcomm_core::harness::{run_all, HarnessConfig, Status};
use nilcomm_core::limits::{Limits, DEFAULT_DECISION_CAP, DEFAULT_SEED};
use nilcomm_core::nilpotency::nil_set;
use nilcomm_core::{build_module, AlgebraError, FiniteModule, TOOL_VERSION};

#[derive(Debug, Parser)]
#[command(name = "nilcomm", version, about = "Nilpotent elements and semicommutativity of finite modules")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Maximum evaluations an exhaustive decision may perform.
    #[arg(long, global = true, env = "NILCOMM_CAP", default_value_t = DEFAULT_DECISION_CAP)]
    pub cap: u64,
    /// Ignore the decision cap.
    #[arg(long, global = true)]
    pub force: bool,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Include wall-clock timings in the output.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide module properties of a structure expression.
    Classify {
        expr: String,
        /// Comma-separated property names (default: all module properties).
        #[arg(long, value_delimiter = ',')]
        properties: Vec<String>,
    },
    /// List the nilpotent elements of a module with their witnesses.
    Nilset { expr: String },
    /// Run the registered instance checks.
    VerifyPaper {
        /// Comma-separated check ids.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        nmax: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Classify a family of structures and report those matching a pattern.
    Search {
        family: Family,
        /// Inclusive range `a..b`.
        range: String,
        /// Base modulus for the matrix families.
        #[arg(long, default_value_t = 2)]
        base: u64,
        /// Conjunction such as `semicommutative & !nil-semicommutative`.
        #[arg(long)]
        pattern: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `regular(Z(n))`
    Zn,
    /// `regular(T(n, Z(base)))`
    Tn,
    /// `regular(V(n, Z(base)))`
    Vn,
    /// `matmod(n, regular(Z(base)))`
    Matn,
}

impl Family {
    pub fn instance(self, n: u64, base: u64) -> String {
        match self {
            Family::Zn => format!("regular(Z({n}))"),
            Family::Tn => format!("regular(T({n}, Z({base})))"),
            Family::Vn => format!("regular(V({n}, Z({base})))"),
            Family::Matn => format!("matmod({n}, regular(Z({base})))"),
        }
    }
}

/// The single output document of one invocation.
#[derive(Debug, Clone, Serialize)]
pub struct Document {
    pub tool_version: &'static str,
    pub command: &'static str,
    pub descriptor: String,
    pub results: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

/// Rendered output and process exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub output: String,
    pub exit_code: i32,
}

impl GlobalOpts {
    pub fn limits(&self) -> Limits {
        Limits {
            force: self.force,
            seed: self.seed,
            ..Limits::default().with_decision_cap(self.cap)
        }
    }
}

/// Runs a parsed command line inside a thread pool of the requested size.
pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.global.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().context("building the worker pool")?;
    pool.install(|| execute(cli))
}

fn execute(cli: &Cli) -> anyhow::Result<Outcome> {
    let start = Instant::now();
    let g = &cli.global;
    let (mut doc, exit_code) = match &cli.command {
        Command::Classify { expr, properties } => (classify(expr, properties, g)?, 0),
        Command::Nilset { expr } => (nilset(expr, g)?, 0),
        Command::VerifyPaper { only, nmax, samples } => run_suite(only, *nmax, *samples, g)?,
        Command::Search {
            family,
            range,
            base,
            pattern,
        } => (search(*family, range, *base, pattern, g)?, 0),
    };
    if g.timings {
        doc.runtime_ms = Some(start.elapsed().as_millis() as u64);
    }
    let output = match g.format {
        Format::Json => serde_json::to_string_pretty(&doc)? + "\n",
        Format::Text => render_text(&doc),
    };
    Ok(Outcome { output, exit_code })
}

fn document(command: &'static str, descriptor: String, results: Vec<Value>) -> Document {
    Document {
        tool_version: TOOL_VERSION,
        command,
        descriptor,
        results,
        summary: None,
        runtime_ms: None,
    }
}

fn module_for(expr: &str, limits: &Limits) -> anyhow::Result<FiniteModule> {
    build_module(expr, limits).with_context(|| format!("while elaborating {expr}"))
}

pub fn parse_properties(names: &[String]) -> anyhow::Result<Vec<Property>> {
    if names.is_empty() {
        return Ok(Property::MODULE.to_vec());
    }
    names
        .iter()
        .map(|n| {
            Property::from_name(n.trim()).ok_or_else(|| anyhow!("unknown property '{}'", n.trim()))
        })
        .collect()
}

fn classify(expr: &str, properties: &[String], g: &GlobalOpts) -> anyhow::Result<Document> {
    let limits = g.limits();
    let module = module_for(expr, &limits)?;
    let props = parse_properties(properties)?;
    let mut results = Vec::new();
    for p in props {
        let v = decide_module(&module, p, &limits)
            .with_context(|| format!("deciding {p} on {}", module.descriptor()))?;
        results.push(serde_json::to_value(v)?);
    }
    let nil = nil_set(&module, &limits.clone().forced())?;
    let mut doc = document("classify", module.descriptor().to_string(), results);
    doc.summary = Some(json!({ "elements": module.size(), "nil_set_size": nil.len() }));
    Ok(doc)
}

fn nilset(expr: &str, g: &GlobalOpts) -> anyhow::Result<Document> {
    let limits = g.limits();
    let module = module_for(expr, &limits)?;
    let set = nil_set(&module, &limits)?;
    let results = set
        .members
        .iter()
        .map(|m| {
            let w = set.witness(m);
            json!({
                "element": m,
                "rendered": module.render(m),
                "witness": w.map(|w| json!({ "t": w.t, "k": w.k, "rendered": module.ring().render(w.t) })),
            })
        })
        .collect();
    let mut doc = document("nilset", module.descriptor().to_string(), results);
    doc.summary = Some(json!({ "elements": module.size(), "nil_set_size": set.len() }));
    Ok(doc)
}

fn run_suite(only: &[String], nmax: u64, samples: usize, g: &GlobalOpts) -> anyhow::Result<(Document, i32)> {
    let config = HarnessConfig {
        limits: g.limits(),
        samples,
        n_max: nmax,
        only: (!only.is_empty()).then(|| only.to_vec()),
        timings: g.timings,
    };
    let run = run_all(&config)?;
    let results = run
        .reports
        .iter()
        .map(serde_json::to_value)
        .collect::<Result<Vec<_>, _>>()?;
    let mut doc = document("verify-paper", "suite".to_string(), results);
    doc.summary = Some(json!({
        "checks": run.reports.len(),
        "confirmed": run.count(Status::Confirmed),
        "refuted": run.count(Status::Refuted),
        "skipped": run.count(Status::Skipped),
        "error": run.count(Status::Error),
        "exit_code": run.exit_code(),
    }));
    Ok((doc, run.exit_code()))
}

/// `a..b` or `a..=b`, both inclusive.
pub fn parse_range(text: &str) -> anyhow::Result<RangeInclusive<u64>> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| anyhow!("range '{text}' is not of the form a..b"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (u64, u64) = (
        a.trim().parse().with_context(|| format!("range start in '{text}'"))?,
        b.trim().parse().with_context(|| format!("range end in '{text}'"))?,
    );
    if a > b {
        bail!("empty range '{text}'");
    }
    Ok(a..=b)
}

/// Conjunction of possibly negated properties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern(pub Vec<(Property, bool)>);

impl Pattern {
    pub fn parse(text: &str) -> anyhow::Result<Pattern> {
        let terms = text
            .split('&')
            .map(|t| {
                let t = t.trim();
                let (want, name) = match t.strip_prefix('!') {
                    Some(rest) => (false, rest.trim()),
                    None => (true, t),
                };
                let p = Property::from_name(name).ok_or_else(|| anyhow!("unknown property '{name}' in pattern"))?;
                Ok((p, want))
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        Ok(Pattern(terms))
    }

    pub fn matches(&self, verdicts: &[Verdict]) -> bool {
        self.0.iter().all(|(p, want)| {
            verdicts
                .iter()
                .find(|v| v.property == *p)
                .is_some_and(|v| v.holds == Some(*want))
        })
    }
}

fn search(family: Family, range: &str, base: u64, pattern: &str, g: &GlobalOpts) -> anyhow::Result<Document> {
    let limits = g.limits();
    let range = parse_range(range)?;
    let pattern = Pattern::parse(pattern)?;
    let mut props: Vec<Property> = pattern.0.iter().map(|(p, _)| *p).collect();
    props.sort();
    props.dedup();
    let mut results = Vec::new();
    let mut skipped = Vec::new();
    let mut scanned = 0;
    for n in range.clone() {
        let text = family.instance(n, base);
        let module = match build_module(&text, &limits) {
            Ok(m) => m,
            Err(e @ (AlgebraError::SizeLimit { .. } | AlgebraError::InvalidParameter(_))) => {
                skipped.push(json!({ "instance": text, "reason": e.to_string() }));
                continue;
            }
            Err(e) => return Err(e).with_context(|| format!("while elaborating {text}")),
        };
        let verdicts: Result<Vec<Verdict>, _> = props.iter().map(|&p| decide_module(&module, p, &limits)).collect();
        match verdicts {
            Ok(vs) => {
                scanned += 1;
                if pattern.matches(&vs) {
                    results.push(json!({ "descriptor": module.descriptor(), "n": n, "verdicts": vs }));
                }
            }
            Err(e @ AlgebraError::DecisionCap { .. }) => {
                skipped.push(json!({ "instance": text, "reason": e.to_string() }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let descriptor = format!("search {} {}..{} base {base}", family_name(family), range.start(), range.end());
    let mut doc = document("search", descriptor, results);
    doc.summary = Some(json!({
        "pattern": pattern.0.iter().map(|(p, w)| format!("{}{}", if *w { "" } else { "!" }, p)).collect::<Vec<_>>(),
        "scanned": scanned,
        "matches": doc.results.len(),
        "skipped": skipped,
    }));
    Ok(doc)
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Zn => "zn",
        Family::Tn => "tn",
        Family::Vn => "vn",
        Family::Matn => "matn",
    }
}

fn render_text(doc: &Document) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}: {}", doc.tool_version, doc.command, doc.descriptor);
    for r in &doc.results {
        let _ = writeln!(out, "{}", render_result(doc.command, r));
    }
    if let Some(s) = &doc.summary {
        let _ = writeln!(out, "summary: {}", compact(s));
    }
    if let Some(ms) = doc.runtime_ms {
        let _ = writeln!(out, "runtime: {ms} ms");
    }
    out
}

fn compact(v: &Value) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

fn render_result(command: &str, r: &Value) -> String {
    match command {
        "classify" => {
            let mark = match r["holds"].as_bool() {
                Some(true) => "yes",
                Some(false) => "no",
                None => "unknown",
            };
            let mut line = format!("  {:<24} {mark:<4} ({})", r["property"].as_str().unwrap_or(""), r["method"].as_str().unwrap_or(""));
            if let Some(w) = r.get("witness").filter(|w| !w.is_null()) {
                let _ = write!(
                    line,
                    "  witness a={} r={} m={}: {}",
                    w["rendered"]["a"].as_str().unwrap_or(""),
                    w["rendered"]["r"].as_str().unwrap_or(""),
                    w["rendered"]["m"].as_str().unwrap_or(""),
                    w["explanation"].as_str().unwrap_or("")
                );
            }
            line
        }
        "nilset" => {
            let w = &r["witness"];
            if w.is_null() {
                format!("  {}", r["rendered"].as_str().unwrap_or(""))
            } else {
                format!("  {}  (t = {}, k = {})", r["rendered"].as_str().unwrap_or(""), w["rendered"].as_str().unwrap_or(""), w["k"])
            }
        }
        "verify-paper" => format!(
            "  [{:<9}] {:<28} {}",
            r["status"].as_str().unwrap_or(""),
            r["check_id"].as_str().unwrap_or(""),
            r["claim"].as_str().unwrap_or("")
        ),
        _ => format!("  {}", r["descriptor"].as_str().unwrap_or("")),
    }
}
