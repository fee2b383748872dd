//! Command-line front end. `run` parses arguments, executes one command
//! and returns the exit code together with the rendered report.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra_maps::Engine;
use crate::config::Limits;
use crate::diagrams::{
    canonical_form, disjoint_union, parse_diagram, wheel, CanonicalDiagram, SpaceKind, UniTrivalentDiagram, VertexKind,
};
use crate::error::{Error, Result};
use crate::liealg::{lie_by_name, tg_weight, verify_face_ce, verify_wheels_theorem, XSeries};
use crate::rational::{one, parse_rational, to_fraction_string, Rational};
use crate::report::{CheckRecord, Report};
use crate::spaces::{build_quotient, cache_file_name, cache_store, read_header, Combo, SpaceRegistry};
use crate::wheeling::{glue_all_legs, omega_series, verify_wheeling};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "jacobi", version, about = "Jacobi diagram spaces, wheels and wheeling")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Directory for quotient space caches.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Scale of the invariant form, as P/Q.
    #[arg(long, global = true, default_value = "1")]
    form_scale: String,
    /// Largest degree for quotient spaces and the wheeling sweep.
    #[arg(long, global = true)]
    degree_cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimension table of a diagram space.
    Dims {
        #[arg(long)]
        kind: String,
        #[arg(long)]
        max_degree: usize,
    },
    /// Terms of Ω with exact coefficients.
    Omega {
        #[arg(long)]
        max_degree: usize,
    },
    /// Ĉ(C′) for two characters.
    Glue {
        #[arg(long = "c")]
        c: PathBuf,
        #[arg(long = "cprime")]
        cprime: PathBuf,
    },
    /// χ of a combination of characters.
    Chi {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// σ of a combination of interval diagrams.
    Sigma {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        max_degree: usize,
    },
    /// Verification campaigns.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// T_g of a combination of characters.
    Weights {
        #[arg(long)]
        algebra: String,
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Quotient space cache management.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Subcommand)]
enum Verify {
    Wheeling {
        #[arg(long)]
        max_degree: usize,
    },
    Wheels {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        x_degree: usize,
    },
    FaceCe {
        #[arg(long)]
        max_degree: usize,
    },
}

#[derive(Debug, Subcommand)]
enum CacheAction {
    /// Build and store every space up to the degree cap.
    Rebuild {
        #[arg(long)]
        dir: Option<PathBuf>,
        #[arg(long)]
        max_degree: Option<usize>,
    },
    /// List cache files and check their headers.
    Status {
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

/// Outcome of a command: exit code and text for stdout and stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::ResourceLimit { .. } | Error::InsufficientTruncation { .. } => EXIT_RESOURCE,
        Error::InvariantViolation(_) => EXIT_FAIL,
        _ => EXIT_USAGE,
    }
}

pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            return if code == EXIT_PASS {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let format = cli.format;
    match execute(cli, argv.into_iter().skip(1).collect()) {
        Ok(report) => Outcome {
            code: if report.all_pass() { EXIT_PASS } else { EXIT_FAIL },
            stdout: render(&report, format),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit_code_for(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
        Format::Text => report.to_text(),
    }
}

fn limits_for(cli: &Cli) -> Limits {
    let mut limits = Limits::default();
    if let Some(cap) = cli.degree_cap {
        limits.degree_cap = cap;
        limits.wheeling_cap = cap;
    }
    limits
}

fn execute(cli: Cli, command: Vec<String>) -> Result<Report> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Error::InvalidArgument("--threads must be positive".into()));
        }
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let limits = limits_for(&cli);
    let scale = parse_rational(&cli.form_scale)?;
    if num_traits::Zero::is_zero(&scale) {
        return Err(Error::InvalidArgument("--form-scale must be nonzero".into()));
    }
    let mut config = BTreeMap::new();
    config.insert("degree_cap".to_string(), limits.degree_cap.to_string());
    config.insert("wheeling_cap".to_string(), limits.wheeling_cap.to_string());
    config.insert("x_degree_cap".to_string(), limits.x_degree_cap.to_string());
    config.insert("form_scale".to_string(), to_fraction_string(&scale));
    let registry = match &cli.cache_dir {
        Some(dir) => SpaceRegistry::with_cache_dir(limits.clone(), dir),
        None => SpaceRegistry::new(limits.clone()),
    };
    let engine = Engine::with_registry(registry);
    let mut report = Report::new(command, BTreeMap::new());

    match cli.command {
        Command::Dims { kind, max_degree } => {
            let kind = SpaceKind::parse(&kind)?;
            limits.check_degree(max_degree)?;
            let mut rows = Vec::new();
            for m in 0..=max_degree {
                let dim = engine.registry().get(kind, m)?.dimension();
                rows.push(json!({"degree": m, "dimension": dim}));
            }
            report.push(done("dims", &[("kind", kind.name().into()), ("max_degree", max_degree.to_string())]));
            report.data = Some(Value::Array(rows));
        }
        Command::Omega { max_degree } => {
            let omega = omega_series(max_degree, &limits)?;
            report.push(done("omega", &[("max_degree", max_degree.to_string())]));
            report.data = Some(omega_data(&omega.value)?);
        }
        Command::Glue { c, cprime } => {
            let c = read_combo(&c)?;
            let cp = read_combo(&cprime)?;
            c.expect_kind(&[SpaceKind::B, SpaceKind::BPrime])?;
            cp.expect_kind(&[SpaceKind::B, SpaceKind::BPrime])?;
            let mut out = Combo::zero(SpaceKind::BPrime);
            for (d, q) in c.terms() {
                for (dp, qp) in cp.terms() {
                    out.add_scaled(&glue_all_legs(&d.to_diagram(), &dp.to_diagram())?, &(q * qp))?;
                }
            }
            report.push(done("glue", &[("terms", out.len().to_string())]));
            report.data = Some(combo_data(&out));
        }
        Command::Chi { input } => {
            let c = read_combo(&input)?;
            let out = engine.chi(&c)?;
            report.push(done("chi", &[("in", input.display().to_string())]));
            report.data = Some(combo_data(&out));
        }
        Command::Sigma { input, max_degree } => {
            let a = read_combo(&input)?;
            let out = engine.sigma(&a, max_degree)?;
            report.push(done(
                "sigma",
                &[("in", input.display().to_string()), ("max_degree", max_degree.to_string())],
            ));
            report.data = Some(combo_data(&out));
        }
        Command::Verify { what } => match what {
            Verify::Wheeling { max_degree } => {
                report.extend(verify_wheeling(max_degree, &engine)?);
            }
            Verify::Wheels { algebra, x_degree } => {
                let l = lie_by_name(&algebra, &scale, &limits)?;
                config.insert("algebra".into(), l.name.clone());
                report.extend(verify_wheels_theorem(&l, x_degree, &limits)?);
            }
            Verify::FaceCe { max_degree } => {
                let l = lie_by_name("sl2", &scale, &limits)?;
                config.insert("algebra".into(), l.name.clone());
                report.extend(verify_face_ce(&l, max_degree, &limits)?);
            }
        },
        Command::Weights { algebra, input } => {
            let l = lie_by_name(&algebra, &scale, &limits)?;
            config.insert("algebra".into(), l.name.clone());
            let c = read_combo(&input)?;
            let w = tg_weight(&l, &c)?;
            report.push(done("weights", &[("in", input.display().to_string())]));
            report.data = Some(series_data(&w, &l.coordinate_names("X"))?);
        }
        Command::Cache { action } => match action {
            CacheAction::Rebuild { dir, max_degree } => {
                let dir = cache_dir(dir, &cli.cache_dir)?;
                let top = max_degree.unwrap_or(limits.degree_cap);
                limits.check_degree(top)?;
                let mut rows = Vec::new();
                for kind in SpaceKind::ALL {
                    for m in 0..=top {
                        let s = build_quotient(m, kind, &limits)?;
                        let path = cache_store(&s, &dir)?;
                        rows.push(json!({
                            "file": file_name(&path),
                            "dimension": s.dimension(),
                        }));
                    }
                }
                report.push(done("cache rebuild", &[("dir", dir.display().to_string())]));
                report.data = Some(Value::Array(rows));
            }
            CacheAction::Status { dir } => {
                let dir = cache_dir(dir, &cli.cache_dir)?;
                let (rows, records) = cache_status(&dir, &limits)?;
                report.extend(records);
                report.data = Some(Value::Array(rows));
            }
        },
    }
    report.config = config;
    Ok(report)
}

fn done(name: &str, inputs: &[(&str, String)]) -> CheckRecord {
    let mut r = CheckRecord::run(name, inputs, || Ok(Vec::new()));
    r.wall_time_us = 0;
    r
}

fn cache_dir(local: Option<PathBuf>, global: &Option<PathBuf>) -> Result<PathBuf> {
    local
        .or_else(|| global.clone())
        .ok_or_else(|| Error::InvalidArgument("a cache directory is required (--dir)".into()))
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

fn cache_status(dir: &Path, limits: &Limits) -> Result<(Vec<Value>, Vec<CheckRecord>)> {
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for kind in SpaceKind::ALL {
        for m in 0..=limits.degree_cap {
            let name = cache_file_name(m, kind);
            let path = dir.join(&name);
            let text = match fs::read_to_string(&path) {
                Ok(t) => t,
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => continue,
                Err(e) => return Err(e.into()),
            };
            let inputs = [("file", name.clone())];
            let mut header = None;
            records.push(CheckRecord::run(format!("cache {name}"), &inputs, || {
                let h = read_header(&text)?;
                if h.kind != kind || h.degree != m {
                    return Err(Error::CacheIntegrity(format!("{name} holds {} degree {}", h.kind, h.degree)));
                }
                header = Some(h.hash.clone());
                Ok(Vec::new())
            }));
            if let Some(r) = records.last_mut() {
                r.wall_time_us = 0;
            }
            rows.push(json!({
                "file": name,
                "content_hash": header.unwrap_or_default(),
            }));
        }
    }
    Ok((rows, records))
}

/// Reads a combination of diagrams: one or more diagrams in the text
/// format, each starting at its `skeleton:` line and optionally carrying
/// a `coefficient: p/q` line. Interval diagrams give an 𝒜′ combination,
/// skeleton-free ones a ℬ′ combination.
pub fn read_combo(path: &Path) -> Result<Combo> {
    let text = fs::read_to_string(path)?;
    parse_combo(&text)
}

pub fn parse_combo(text: &str) -> Result<Combo> {
    let mut chunks: Vec<(usize, Vec<&str>)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.starts_with("skeleton") || chunks.is_empty() {
            chunks.push((i, Vec::new()));
        }
        chunks.last_mut().expect("chunk").1.push(line);
    }
    let mut out: Option<Combo> = None;
    for (start, lines) in chunks {
        let mut coefficient = one();
        let mut kept = Vec::new();
        for (k, line) in lines.iter().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            match body.strip_prefix("coefficient:") {
                Some(q) => {
                    coefficient = parse_rational(q.trim()).map_err(|_| Error::Parse {
                        line: start + k + 1,
                        message: format!("bad coefficient {:?}", q.trim()),
                    })?;
                    kept.push("");
                }
                None => kept.push(line),
            }
        }
        if kept.iter().all(|l| l.split('#').next().unwrap_or("").trim().is_empty()) {
            continue;
        }
        let d = parse_diagram(&kept.join("\n")).map_err(|e| match e {
            Error::Parse { line, message } => Error::Parse {
                line: line + start,
                message,
            },
            other => other,
        })?;
        let kind = if d.is_chinese() { SpaceKind::BPrime } else { SpaceKind::APrime };
        let c = Combo::from_diagram(&d, kind)?;
        match &mut out {
            None => out = Some(c.scaled(&coefficient)),
            Some(acc) => acc.add_scaled(&c, &coefficient)?,
        }
    }
    out.ok_or_else(|| Error::Parse {
        line: 1,
        message: "no diagrams in input".into(),
    })
}

fn combo_data(c: &Combo) -> Value {
    let terms: Vec<Value> = c
        .terms()
        .map(|(d, q)| {
            json!({
                "diagram": d.bytes(),
                "degree": d.degree(),
                "legs": d.legs(),
                "coefficient": to_fraction_string(q),
            })
        })
        .collect();
    json!({"kind": c.kind().name(), "terms": terms})
}

/// Ω terms. Each term is a union of wheels; `coefficient` is relative to
/// that union with every wheel in its standard orientation, while
/// `diagram_coefficient` multiplies the canonical representative.
fn omega_data(c: &Combo) -> Result<Value> {
    let mut terms = Vec::new();
    for (d, q) in c.terms() {
        let (label, sign) = wheel_label(d)?;
        terms.push(json!({
            "term": label,
            "coefficient": to_fraction_string(&(q * Rational::from_integer(sign.into()))),
            "diagram": d.bytes(),
            "diagram_coefficient": to_fraction_string(q),
            "degree": d.degree(),
        }));
    }
    Ok(json!({"kind": c.kind().name(), "terms": terms}))
}

/// `ω₂ω₄` style label of a union of wheels, with the sign relating the
/// canonical representative to the union of standard wheels.
fn wheel_label(d: &CanonicalDiagram) -> Result<(String, i32)> {
    let g = d.to_diagram();
    let mut sizes: Vec<usize> = g
        .components()
        .iter()
        .map(|comp| comp.iter().filter(|&&v| g.kind(v) == VertexKind::Leg).count())
        .collect();
    if sizes.is_empty() {
        return Ok(("1".into(), 1));
    }
    sizes.sort_unstable();
    let mut union = UniTrivalentDiagram::chinese();
    for &n in &sizes {
        union = disjoint_union(&union, &wheel(n))?;
    }
    let sign = match canonical_form(&union)?.into_parts() {
        Some((sign, canon)) if &canon == d => sign,
        _ => return Err(Error::InvariantViolation(format!("Ω term {d} is not a union of wheels"))),
    };
    Ok((sizes.iter().map(|n| format!("ω{}", subscript(*n))).collect(), sign))
}

fn subscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap_or(0) as usize])
        .collect()
}

fn series_data(w: &XSeries, names: &[String]) -> Result<Value> {
    let terms = w.residual(&XSeries::zero(w.nvars(), w.truncation()), names)?;
    let terms: Vec<Value> = terms
        .into_iter()
        .map(|t| json!({"term": t.term, "coefficient": t.coefficient}))
        .collect();
    Ok(json!({"terms": terms}))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combo_files_with_coefficients() {
        let text = "skeleton: none\nU a: 1\nU b: 2\nE: 1 2\ncoefficient: 3/2\n\nskeleton: none\nU a: x\nU b: y\nE: x y\n";
        let c = parse_combo(text).unwrap();
        assert_eq!(c.len(), 1);
        let (_, q) = c.terms().next().unwrap();
        assert_eq!(to_fraction_string(q), "5/2");
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["jacobi", "bogus"]).code, EXIT_USAGE);
        assert_eq!(run(["jacobi", "dims", "--kind", "Q", "--max-degree", "1"]).code, EXIT_USAGE);
    }
}
