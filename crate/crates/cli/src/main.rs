use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use sesq_core::sesquiad::DEFAULT_SPEC_BOUND;

use sesq_cli::build::{self, Workspace};
use sesq_cli::format;
use sesq_cli::tasks::{self, Config};

/// Largest degree searched when checking separability, unless overridden.
const DEFAULT_CAP_SEP: usize = 3;

#[derive(Parser)]
#[command(
    name = "sesq",
    version,
    about = "Sesquiads, their modules, spectra and sheaf cohomology"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a definition file.
    Check { file: PathBuf },
    /// Print a definition file in canonical form.
    Fmt { file: PathBuf },
    /// Run the tasks of a definition file and print a report.
    Run {
        file: PathBuf,
        /// Run only this task.
        #[arg(long)]
        task: Option<String>,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        /// Write the Hasse diagrams of the tasks that have one.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest sesquiad whose congruences are enumerated.
        #[arg(long, env = "SESQ_BOUND_SPEC", default_value_t = DEFAULT_SPEC_BOUND)]
        bound_spec: usize,
        /// Polynomial degree cap for separability.
        #[arg(long, env = "SESQ_CAP_SEP", default_value_t = DEFAULT_CAP_SEP)]
        cap_sep: usize,
        /// Add wall-clock times; the report is then no longer reproducible.
        #[arg(long)]
        timing: bool,
    },
}

enum Failure {
    Usage(String),
    Domain(String),
}

fn parse(path: &Path) -> Result<format::DefinitionFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    format::parse(&text).map_err(|e| Failure::Domain(format!("{}:{e}", path.display())))
}

fn load(path: &Path) -> Result<Workspace, Failure> {
    build::build(&parse(path)?).map_err(|e| Failure::Domain(format!("{}:{e}", path.display())))
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn fmt(path: &Path) -> Result<(), Failure> {
    emit(&format::serialize(&parse(path)?));
    Ok(())
}

fn check(path: &Path) -> Result<(), Failure> {
    let w = load(path)?;
    println!(
        "{}: ok ({} sesquiads, {} spaces, {} modules, {} homs, {} maps, {} sheaves, {} tasks)",
        path.display(),
        w.sesquiads.len(),
        w.spaces.len(),
        w.modules.len(),
        w.homs.len(),
        w.maps.len(),
        w.sheaves.len(),
        w.tasks.len()
    );
    Ok(())
}

/// `path.to.key = value` lines in key order.
fn flatten(prefix: &str, v: &Value, out: &mut String) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let p = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten(&p, x, out);
            }
        }
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) if s.contains('\n') => {
            out.push_str(prefix);
            out.push_str(" =\n");
            for line in s.lines() {
                out.push_str("    ");
                out.push_str(line);
                out.push('\n');
            }
        }
        Value::String(s) => out.push_str(&format!("{prefix} = {s}\n")),
        other => out.push_str(&format!("{prefix} = {other}\n")),
    }
}

fn run(
    path: &Path,
    only: Option<&str>,
    as_json: bool,
    dot: Option<&Path>,
    cfg: Config,
    timing: bool,
) -> Result<bool, Failure> {
    let w = load(path)?;
    let selected: Vec<&build::Task> = match only {
        Some(name) => {
            let t = w
                .tasks
                .iter()
                .find(|t| t.name == name)
                .ok_or_else(|| Failure::Usage(format!("no task named `{name}`")))?;
            vec![t]
        }
        None => w.tasks.iter().collect(),
    };
    let mut ok = true;
    let mut reports = Vec::with_capacity(selected.len());
    let mut graphs = Vec::new();
    for t in selected {
        let start = Instant::now();
        let outcome = tasks::run_task(&w, t, &cfg);
        let mut report = match &outcome {
            Ok(o) => {
                graphs.extend(o.dot.clone());
                tasks::task_report(t, Ok(o))
            }
            Err(e) => {
                ok = false;
                eprintln!(
                    "{}:{}: task `{}` failed: {e}",
                    path.display(),
                    t.pos,
                    t.name
                );
                tasks::task_report(t, Err(e.to_string()))
            }
        };
        if timing {
            report["elapsed_ms"] = json!(start.elapsed().as_millis().to_string());
        }
        reports.push(report);
    }
    let file_name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let report = json!({
        "file": file_name,
        "provenance": tasks::provenance(&cfg),
        "tasks": reports,
    });
    if as_json {
        let mut text = serde_json::to_string_pretty(&report).expect("values serialize");
        text.push('\n');
        emit(&text);
    } else {
        let mut out = String::new();
        flatten("provenance", &report["provenance"], &mut out);
        for t in report["tasks"].as_array().expect("tasks array") {
            out.push_str(&format!(
                "\n[task {}] {} {}\n",
                t["name"].as_str().unwrap_or(""),
                t["op"].as_str().unwrap_or(""),
                args_text(&t["args"])
            ));
            for key in ["result", "error", "decisions", "elapsed_ms"] {
                if let Some(v) = t.get(key) {
                    flatten(key, v, &mut out);
                }
            }
        }
        emit(&out);
    }
    if let Some(p) = dot {
        if graphs.is_empty() {
            eprintln!(
                "no selected task produced a graph; {} not written",
                p.display()
            );
        } else {
            std::fs::write(p, graphs.join("\n"))
                .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
        }
    }
    Ok(ok)
}

fn args_text(v: &Value) -> String {
    v.as_array()
        .map(|a| {
            a.iter()
                .filter_map(Value::as_str)
                .collect::<Vec<_>>()
                .join(" ")
        })
        .unwrap_or_default()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { file } => check(&file).map(|()| true),
        Command::Fmt { file } => fmt(&file).map(|()| true),
        Command::Run {
            file,
            task,
            json,
            dot,
            seed,
            bound_spec,
            cap_sep,
            timing,
        } => {
            let cfg = Config {
                bound_spec,
                cap_sep,
                seed,
            };
            run(&file, task.as_deref(), json, dot.as_deref(), cfg, timing)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Domain(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
