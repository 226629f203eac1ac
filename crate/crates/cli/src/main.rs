//! `origami`: runs `.ori` construction scripts and exports their traces.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use origami_core::invariants::check_trace;
use origami_core::render::{self, DotKind};
use origami_core::script::{self, ScriptError};
use origami_core::ConstructionTrace;

#[derive(Parser)]
#[command(name = "origami", version, about = "Run abstract origami construction scripts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a script and optionally export every step.
    Run {
        file: PathBuf,
        #[arg(long, value_name = "DIR")]
        emit_svg: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        emit_dot: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        emit_json: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        emit_3d: Option<PathBuf>,
        /// Print one line per trace step.
        #[arg(long)]
        trace: bool,
        /// Layer separation for 3D export.
        #[arg(long, default_value_t = 0.05)]
        gap: f64,
    },
    /// Print both relation graphs of step k as DOT.
    Graphs {
        file: PathBuf,
        #[arg(long)]
        step: usize,
    },
    /// Run the invariant suite over a script's trace.
    Check { file: PathBuf },
}

enum Failure {
    Script(String),
    Io(String),
}

fn load(file: &Path) -> Result<ConstructionTrace, Failure> {
    let text = fs::read_to_string(file).map_err(|e| Failure::Io(format!("{}: {e}", file.display())))?;
    script::run_source(&text).map_err(|e| match e {
        ScriptError::Parse(p) => Failure::Script(format!("{}:{}:{}: syntax error: {}", file.display(), p.line, p.col, p.msg)),
        ScriptError::Run(r) => Failure::Script(format!("{}:{}: step {}: {}", file.display(), r.line, r.step, r.msg)),
    })
}

fn write(dir: &Path, name: String, contents: &str) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn script_err(e: impl std::fmt::Display) -> Failure {
    Failure::Script(e.to_string())
}

fn execute(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Run { file, emit_svg, emit_dot, emit_json, emit_3d, trace, gap } => {
            let t = load(&file)?;
            for (i, step) in t.steps().iter().enumerate() {
                let k = i + 1;
                let ao = &step.snapshot;
                if trace {
                    println!("O{k}: {}", step.label);
                }
                if let Some(dir) = &emit_svg {
                    write(dir, format!("step-{k:02}.svg"), &render::to_svg(ao).map_err(script_err)?)?;
                }
                if let Some(dir) = &emit_dot {
                    write(dir, format!("step-{k:02}-adjacency.dot"), &render::to_dot(&ao.adjacency_graph(), DotKind::Adjacency))?;
                    let sup = render::to_dot(&ao.superposition_graph(), DotKind::Superposition);
                    write(dir, format!("step-{k:02}-superposition.dot"), &sup)?;
                }
                if let Some(dir) = &emit_json {
                    write(dir, format!("step-{k:02}.json"), &ao.to_json())?;
                }
                if let Some(dir) = &emit_3d {
                    let pose = render::pose3d(ao, gap).map_err(script_err)?;
                    write(dir, format!("step-{k:02}-3d.json"), &render::export_3d(&pose))?;
                }
            }
            if !trace {
                let faces: Vec<String> = t.last().face_ids().iter().map(|f| f.to_string()).collect();
                println!("{} steps; faces {{{}}}", t.len(), faces.join(","));
            }
            Ok(true)
        }
        Command::Graphs { file, step } => {
            let t = load(&file)?;
            let ao = t
                .snapshot(step)
                .ok_or_else(|| Failure::Script(format!("step {step} out of range 1..={}", t.len())))?;
            print!("{}", render::to_dot(&ao.adjacency_graph(), DotKind::Adjacency));
            print!("{}", render::to_dot(&ao.superposition_graph(), DotKind::Superposition));
            Ok(true)
        }
        Command::Check { file } => {
            let t = load(&file)?;
            let mut all = true;
            for c in check_trace(&t) {
                if c.passed() {
                    println!("PASS {}", c.name);
                } else {
                    all = false;
                    println!("FAIL {}", c.name);
                    for f in &c.failures {
                        println!("  {f}");
                    }
                }
            }
            Ok(all)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Script(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
