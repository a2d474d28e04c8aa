use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use ncl::code::{format_word, parse_word, BlockedCode, CodeError};
use ncl::constructions::{
    generator_realization, parity_check_realization, product_trellis, trajectory_components, ComponentsError,
    ConstructionError, Span, SpannedGenerator, TrellisKind,
};
use ncl::document::{emit_realization, parse_realization, DocumentError};
use ncl::dot::export_dot;
use ncl::linalg::{LinalgError, PrimeField};
use ncl::oracle::{behavior_matches, check_realizes, Discrepancy, EnumerationBudget, OracleError};
use ncl::realization::{AnalysisReport, Realization};
use ncl::reduction::{minimize_cycle_free, reduce_to_fixpoint, ReductionError, ReductionStep};

#[derive(Parser)]
#[command(name = "ncl", version, about = "Analyze and reduce linear realizations of codes on normal graphs")]
struct Cli {
    /// Machine-readable JSON output, including error payloads.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimensions, observability, controllability and local trim/proper verdicts.
    Analyze { files: Vec<PathBuf> },
    /// Behavior and realized code generators.
    Behavior { file: PathBuf },
    /// Write the dual realization.
    Dual { input: PathBuf, output: PathBuf },
    /// Trim, merge and unobservability reductions until none applies.
    Reduce {
        input: PathBuf,
        output: PathBuf,
        /// Log every reduction step.
        #[arg(long)]
        steps: bool,
    },
    /// Minimal realization on a cycle-free graph.
    Minimize {
        input: PathBuf,
        output: PathBuf,
        #[arg(long)]
        steps: bool,
    },
    /// Build a realization from explicit rows.
    #[command(subcommand)]
    Build(Build),
    /// Connected components of the trajectory graph.
    Components {
        file: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Cross-check against brute-force enumeration.
    Verify {
        file: PathBuf,
        /// Text file with one generator word per line.
        #[arg(long)]
        expect: Option<PathBuf>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Graphviz rendering of the normal graph.
    ExportDot {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Prime field size.
    #[arg(long)]
    field: u32,
    /// Code length.
    #[arg(long)]
    n: usize,
    /// Write the document here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Build {
    /// Generator realization of the row span.
    Generator {
        #[command(flatten)]
        common: Common,
        /// Comma-separated digit strings, or `;`-separated comma lists for p > 10.
        #[arg(long)]
        gens: String,
    },
    /// Parity-check realization of the null space.
    ParityCheck {
        #[command(flatten)]
        common: Common,
        /// Parity-check rows, in the same format as `--gens`.
        #[arg(long)]
        checks: String,
    },
    /// Product trellis from spanned generators.
    Trellis {
        #[command(flatten)]
        common: Common,
        /// Generator rows, in the same format as for `generator`.
        #[arg(long)]
        gens: String,
        /// One `start:end` or `deg` per generator, comma-separated.
        #[arg(long)]
        spans: String,
        /// `tail-biting` or `conventional`.
        #[arg(long, default_value = "tail-biting")]
        kind: String,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Document { path: String, source: DocumentError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Field(#[from] LinalgError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Components(#[from] ComponentsError),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Document { source, .. } => match source {
                DocumentError::Syntax { .. } => "syntax",
                DocumentError::Invalid(_) => "invalid-realization",
                _ => "document",
            },
            CliError::Usage(_) => "usage",
            CliError::Field(_) | CliError::Code(_) => "input",
            CliError::Construction(_) => "construction",
            CliError::Reduction(_) => "reduction",
            CliError::Oracle(_) | CliError::Components(_) => "budget",
        }
    }

    fn payload(&self) -> serde_json::Value {
        let mut v = json!({ "error": { "kind": self.kind(), "message": self.to_string() } });
        if let CliError::Document {
            source: DocumentError::Invalid(errs),
            ..
        } = self
        {
            v["error"]["details"] = serde_json::to_value(errs).expect("plain data");
        }
        v
    }
}

/// Exit status of a successful run: 0 clean, 1 when a checked property failed.
enum Outcome {
    Ok,
    Violation,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(e) => {
            if cli.json {
                println!("{}", e.payload());
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load(path: &Path) -> Result<Realization, CliError> {
    parse_realization(&read(path)?).map_err(|source| CliError::Document {
        path: path.display().to_string(),
        source,
    })
}

fn emit_to(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("plain data"));
}

fn budget(flag: Option<u64>) -> Result<EnumerationBudget, CliError> {
    match flag {
        Some(n) => Ok(EnumerationBudget::new(n)?),
        None => Ok(EnumerationBudget::from_env()),
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Analyze { files } => {
            if files.is_empty() {
                return Err(CliError::Usage("analyze needs at least one FILE".into()));
            }
            let mut reports = Vec::with_capacity(files.len());
            for f in files {
                reports.push((f, load(f)?.analyze()));
            }
            if cli.json {
                if reports.len() == 1 {
                    print_json(&reports[0].1);
                } else {
                    let all: Vec<_> = reports
                        .iter()
                        .map(|(f, r)| json!({ "file": f.display().to_string(), "report": r }))
                        .collect();
                    print_json(&all);
                }
            } else {
                for (f, r) in &reports {
                    if reports.len() > 1 {
                        println!("== {} ==", f.display());
                    }
                    print_report(r);
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Behavior { file } => {
            let r = load(file)?;
            let b = r.behavior();
            let f = r.field();
            let words = |c: &BlockedCode| -> Vec<String> {
                c.generators().row_iter().map(|w| format_word(f, w)).collect()
            };
            let frame: Vec<_> = b
                .code()
                .structure()
                .blocks()
                .iter()
                .map(|blk| json!({ "id": blk.id, "dim": blk.dim }))
                .collect();
            let realized = b.realized_code();
            if cli.json {
                print_json(&json!({
                    "behavior_dim": b.dim(),
                    "frame": frame,
                    "behavior_generators": words(b.code()),
                    "realized_code_dim": realized.dim(),
                    "realized_code_generators": words(&realized),
                }));
            } else {
                let ids: Vec<&str> = b.code().structure().ids().collect();
                println!("behavior dim: {}", b.dim());
                println!("frame: {}", ids.join(" "));
                for w in words(b.code()) {
                    println!("  {w}");
                }
                println!("realized code dim: {}", realized.dim());
                for w in words(&realized) {
                    println!("  {w}");
                }
            }
            Ok(Outcome::Ok)
        }
        Command::Dual { input, output } => {
            let r = load(input)?;
            write(output, &emit_realization(&r.dualize()))?;
            Ok(Outcome::Ok)
        }
        Command::Reduce { input, output, steps } => {
            let r = load(input)?;
            let (out, log) = reduce_to_fixpoint(&r)?;
            write(output, &emit_realization(&out))?;
            report_steps(cli.json, *steps, &r, &out, &log, None);
            Ok(Outcome::Ok)
        }
        Command::Minimize { input, output, steps } => {
            let r = load(input)?;
            let (out, log) = minimize_cycle_free(&r)?;
            write(output, &emit_realization(&out))?;
            report_steps(cli.json, *steps, &r, &out, &log, Some(true));
            Ok(Outcome::Ok)
        }
        Command::Build(b) => {
            let (r, out) = build(b)?;
            emit_to(out, &emit_realization(&r))?;
            Ok(Outcome::Ok)
        }
        Command::Components { file, budget: cap } => {
            let r = load(file)?;
            let rep = trajectory_components(&r, budget(*cap)?)?;
            if cli.json {
                print_json(&rep);
            } else {
                println!("components: {}", rep.components);
                println!("controllability defect: {}", rep.controllability_defect);
                for s in &rep.partition {
                    let classes: Vec<String> = s
                        .classes
                        .iter()
                        .map(|(k, vals)| format!("#{k} {{{}}}", vals.join(", ")))
                        .collect();
                    println!("  {}: {}", s.state, classes.join("  "));
                }
                if let Some(w) = &rep.warning {
                    println!("warning: {w}");
                }
            }
            Ok(match rep.equivalence_holds {
                Some(false) => Outcome::Violation,
                _ => Outcome::Ok,
            })
        }
        Command::Verify {
            file,
            expect,
            budget: cap,
        } => {
            let r = load(file)?;
            let budget = budget(*cap)?;
            let behavior_ok = behavior_matches(&r, budget)?;
            let verdict = match expect {
                Some(path) => Some(check_realizes(&r, &read_code(&r, path)?, budget)?),
                None => None,
            };
            let ok = behavior_ok && verdict.as_ref().is_none_or(|v| v.ok);
            if cli.json {
                print_json(&json!({ "ok": ok, "behavior_matches": behavior_ok, "expected": verdict }));
            } else {
                println!("behavior matches enumeration: {behavior_ok}");
                if let Some(v) = &verdict {
                    match &v.counterexample {
                        None => println!("realizes expected code: true"),
                        Some(ce) => {
                            let side = match ce.side {
                                Discrepancy::RealizedNotExpected => "realized but not expected",
                                Discrepancy::ExpectedNotRealized => "expected but not realized",
                            };
                            println!("realizes expected code: false");
                            println!("counterexample: {} ({side})", format_word(r.field(), &ce.word));
                        }
                    }
                }
            }
            Ok(if ok { Outcome::Ok } else { Outcome::Violation })
        }
        Command::ExportDot { file, output } => {
            let r = load(file)?;
            emit_to(output.as_deref(), &export_dot(&r))?;
            Ok(Outcome::Ok)
        }
    }
}

fn print_report(r: &AnalysisReport) {
    println!("field: GF({})", r.field);
    println!(
        "symbols: {} (total dim {}), states: {} (total dim {}), constraints: {} (sum of dims {})",
        r.symbols.len(),
        r.symbol_dim,
        r.states.len(),
        r.state_dim,
        r.constraints.len(),
        r.constraint_dim_sum
    );
    println!("behavior dim: {}", r.behavior_dim);
    println!("realized code dim: {}", r.realized_code_dim);
    println!("unobservable dim: {}", r.unobservable_dim);
    println!("controllability defect: {}", r.controllability_defect);
    println!("observable: {}", r.observable);
    println!("controllable: {}", r.controllable);
    println!("state-trim: {}", r.state_trim);
    println!("branch-trim: {}", r.branch_trim);
    println!("reduced: {}", r.reduced);
    println!("locally reducible: {}", r.locally_reducible);
    println!("cycle-free: {}", r.cycle_free);
    println!("tail-biting: {}", r.tail_biting);
    match r.minimal {
        Some(m) => println!("minimal: {m}"),
        None => println!("minimal: undecided (graph has cycles)"),
    }
    println!("constraints:");
    for c in &r.constraints {
        let mut notes = Vec::new();
        for s in &c.states {
            if let Some(w) = &s.trim_witness {
                notes.push(format!("not trim at {} (unreached {w})", s.state));
            }
            if let Some(w) = &s.proper_witness {
                notes.push(format!("not proper at {} (codeword {w})", s.state));
            }
        }
        if notes.is_empty() {
            notes.push("trim, proper".into());
        }
        println!("  {} dim {}: {}", c.id, c.dim, notes.join("; "));
    }
}

fn report_steps(
    json_out: bool,
    show: bool,
    before: &Realization,
    after: &Realization,
    steps: &[ReductionStep],
    minimal: Option<bool>,
) {
    if json_out {
        let mut v = json!({
            "state_dims_before": before.state_dims(),
            "state_dims_after": after.state_dims(),
            "observable": after.is_observable(),
            "controllable": after.is_controllable(),
            "minimal": minimal,
        });
        if show {
            v["steps"] = serde_json::to_value(steps).expect("plain data");
        }
        print_json(&v);
        return;
    }
    if show {
        for (i, s) in steps.iter().enumerate() {
            let at = s.constraint.as_deref().map(|c| format!(" at {c}")).unwrap_or_default();
            println!("step {i}: {:?} {}{at}: dim {} -> {}", s.kind, s.state, s.old_dim, s.new_dim);
        }
    }
    println!("state dims: {:?} -> {:?}", before.state_dims(), after.state_dims());
    if minimal == Some(true) {
        println!("minimal: true");
    }
}

fn parse_rows(field: PrimeField, text: &str) -> Result<Vec<Vec<u32>>, CliError> {
    // digit strings separated by commas, or comma lists separated by `;`
    let items: Vec<&str> = if text.contains(';') || field.modulus() > 10 {
        text.split(';').collect()
    } else {
        text.split(',').collect()
    };
    Ok(items
        .into_iter()
        .map(|w| parse_word(field, w))
        .collect::<Result<Vec<_>, _>>()?)
}

fn build(b: &Build) -> Result<(Realization, Option<&Path>), CliError> {
    match b {
        Build::Generator { common, gens } => {
            let f = PrimeField::new(common.field)?;
            let rows = parse_rows(f, gens)?;
            Ok((generator_realization(f, common.n, &rows)?, common.output.as_deref()))
        }
        Build::ParityCheck { common, checks } => {
            let f = PrimeField::new(common.field)?;
            let rows = parse_rows(f, checks)?;
            Ok((parity_check_realization(f, common.n, &rows)?, common.output.as_deref()))
        }
        Build::Trellis {
            common,
            gens,
            spans,
            kind,
        } => {
            let f = PrimeField::new(common.field)?;
            let rows = parse_rows(f, gens)?;
            let spans: Vec<Span> = spans.split(',').map(str::parse).collect::<Result<_, _>>()?;
            if spans.len() != rows.len() {
                return Err(ConstructionError::SpanCount {
                    spans: spans.len(),
                    generators: rows.len(),
                }
                .into());
            }
            let kind: TrellisKind = kind.parse().map_err(CliError::Usage)?;
            let gens: Vec<SpannedGenerator> =
                rows.into_iter().zip(spans).map(|(v, s)| SpannedGenerator::new(v, s)).collect();
            Ok((product_trellis(f, common.n, &gens, kind)?, common.output.as_deref()))
        }
    }
}

/// Reads a code file: one generator word per line, `#` comments and blank
/// lines ignored. Blocks are the realization's symbols.
fn read_code(r: &Realization, path: &Path) -> Result<BlockedCode, CliError> {
    let text = read(path)?;
    let f = r.field();
    let rows = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| parse_word(f, l))
        .collect::<Result<Vec<_>, _>>()?;
    let structure = r.realized_code().structure().clone();
    if let Some(bad) = rows.iter().find(|w| w.len() != structure.total()) {
        return Err(CliError::Usage(format!(
            "{}: word of length {} for {} symbol coordinates",
            path.display(),
            bad.len(),
            structure.total()
        )));
    }
    Ok(BlockedCode::from_generators(f, structure, &rows)?)
}
