//! Command-line front end: verification, construction, cohomology and
//! deformation commands over JSON workspaces of 3-Lie data.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use trilie_cli::commands::{self, CommandOutput};
use trilie_cli::error::{CliError, Result};
use trilie_cli::format::{render_document, Document, FORMAT_VERSION};
use trilie_cli::workspace::Workspace;

#[derive(Parser)]
#[command(name = "trilie", version, about = "Exact verification and construction for twisted operators on 3-Lie algebras")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Input workspace file(s); repeatable.
    #[arg(short = 'f', long = "file", global = true)]
    files: Vec<PathBuf>,
    /// Emit the full machine-readable report as JSON on standard output.
    #[arg(long, global = true)]
    json: bool,
    /// Write constructed objects to this fixture file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run an axiom checker against a named object.
    Verify {
        /// Object kind: lie, 3lie, rep_lie, rep3, cocycle_lie, cocycle3,
        /// twisted, twisted_lie, 3ns, ns, trace, nijenhuis.
        kind: String,
        /// Object name (for `nijenhuis`: the linear map).
        name: String,
        /// Algebra reference for kinds that need one (nijenhuis).
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Build derived structures and optionally write them out.
    Construct {
        #[command(subcommand)]
        what: ConstructCommand,
    },
    /// Cocycle/coboundary/cohomology dimensions of a twisted operator.
    Cohomology {
        #[arg(long)]
        op: String,
        #[arg(long)]
        degree: usize,
        /// Cap on the coefficient dimension of any materialized space.
        #[arg(long, default_value_t = trilie_core::cohomology::DEFAULT_INDEX_CAP)]
        cap: usize,
    },
    /// Order-by-order deformation checks.
    Deform {
        #[command(subcommand)]
        what: DeformCommand,
    },
}

#[derive(Subcommand)]
enum ConstructCommand {
    /// Twisted semidirect product on algebra + module.
    Semidirect {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        rep: String,
        #[arg(long)]
        cocycle: String,
        #[arg(long, default_value = "semidirect")]
        name: String,
    },
    /// Deformed algebra, representation, cocycle and identity operator of a
    /// Nijenhuis operator.
    Nijenhuis {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        map: String,
        #[arg(long, default_value = "nijenhuis")]
        name: String,
    },
    /// Ternary structures induced by a trace form.
    Induce {
        /// One of: 3lie, rep, cocycle, twisted, 3ns, diagram.
        #[arg(long)]
        what: String,
        #[arg(long)]
        trace: Option<String>,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        rep: Option<String>,
        #[arg(long)]
        cocycle: Option<String>,
        #[arg(long)]
        op: Option<String>,
        #[arg(long)]
        ns: Option<String>,
        #[arg(long, default_value = "induced")]
        name: String,
    },
    /// NS structure of a twisted operator (or of a Nijenhuis operator).
    DeriveNs {
        #[arg(long)]
        op: Option<String>,
        /// Use the compatible construction through the inverse operator.
        #[arg(long)]
        compatible: bool,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        map: Option<String>,
        #[arg(long, default_value = "derived")]
        name: String,
    },
    /// Gauge transformation by a T-admissible 1-cocycle.
    Gauge {
        #[arg(long)]
        op: String,
        #[arg(long)]
        cocycle1: String,
        #[arg(long, default_value = "gauged")]
        name: String,
    },
    /// Coboundary shift along an arbitrary 1-cochain.
    Shift {
        #[arg(long)]
        op: String,
        #[arg(long)]
        cochain: String,
        #[arg(long, default_value = "shifted")]
        name: String,
    },
}

#[derive(Subcommand)]
enum DeformCommand {
    /// Check every coefficient equation of a family.
    Check {
        #[arg(long)]
        family: String,
    },
    /// Check a morphism datum between two families, coefficient-wise.
    Equiv {
        #[arg(long)]
        family: String,
        #[arg(long)]
        family2: String,
        /// JSON array of {"args": [i, j], "value": "p/q"} entries.
        #[arg(long)]
        wedge: String,
        /// Names of linear maps for the degree >= 2 components, in order.
        #[arg(long = "phi")]
        phi: Vec<String>,
        #[arg(long = "psi")]
        psi: Vec<String>,
        #[arg(long)]
        truncation: Option<usize>,
    },
}

fn run(cli: &Cli) -> Result<CommandOutput> {
    let ws = Workspace::parse_files(&cli.common.files)?;
    match &cli.command {
        Command::Verify { kind, name, algebra } => {
            commands::verify(&ws, kind, name, algebra.as_deref())
        }
        Command::Construct { what } => match what {
            ConstructCommand::Semidirect { algebra, rep, cocycle, name } => {
                commands::construct_semidirect(&ws, algebra, rep, cocycle, name)
            }
            ConstructCommand::Nijenhuis { algebra, map, name } => {
                commands::construct_nijenhuis(&ws, algebra, map, name)
            }
            ConstructCommand::Induce { what, trace, algebra, rep, cocycle, op, ns, name } => {
                commands::construct_induce(
                    &ws,
                    what,
                    trace.as_deref(),
                    algebra.as_deref(),
                    rep.as_deref(),
                    cocycle.as_deref(),
                    op.as_deref(),
                    ns.as_deref(),
                    name,
                )
            }
            ConstructCommand::DeriveNs { op, compatible, algebra, map, name } => {
                commands::construct_derive_ns(
                    &ws,
                    op.as_deref(),
                    *compatible,
                    algebra.as_deref(),
                    map.as_deref(),
                    name,
                )
            }
            ConstructCommand::Gauge { op, cocycle1, name } => {
                commands::construct_gauge(&ws, op, cocycle1, name)
            }
            ConstructCommand::Shift { op, cochain, name } => {
                commands::construct_shift(&ws, op, cochain, name)
            }
        },
        Command::Cohomology { op, degree, cap } => commands::cohomology(&ws, op, *degree, *cap),
        Command::Deform { what } => match what {
            DeformCommand::Check { family } => commands::deform_check(&ws, family),
            DeformCommand::Equiv { family, family2, wedge, phi, psi, truncation } => {
                commands::deform_equiv(&ws, family, family2, wedge, phi, psi, *truncation)
            }
        },
    }
}

fn print_human(output: &CommandOutput) {
    match output.outcome {
        trilie_core::report::Outcome::Pass => println!("{}: PASS", output.command),
        trilie_core::report::Outcome::Fail => println!("{}: FAIL", output.command),
        trilie_core::report::Outcome::Error => println!("{}: ERROR", output.command),
    }
    if let Some(report) = &output.report {
        println!("  checked {} basis tuples", report.stats.checked);
        if let Some(v) = report.first_violation() {
            println!(
                "  first violation: {} at {:?} residual {:?}",
                v.identity, v.indices, v.residual
            );
        }
    }
    if let Some(coh) = &output.cohomology {
        println!(
            "  degree {}: dim Z = {}, dim B = {}, dim H = {}",
            coh.degree, coh.dim_cocycles, coh.dim_coboundaries, coh.dim_cohomology
        );
        for (i, r) in coh.representatives.iter().enumerate() {
            let terms: Vec<String> = r
                .iter()
                .map(|entry| format!("{} -> ({})", entry.key, entry.value.join(", ")))
                .collect();
            println!("  representative {}: {}", i + 1, terms.join("; "));
        }
    }
    if let Some(orders) = &output.orders {
        for o in orders {
            let tag = match o.outcome {
                trilie_core::report::Outcome::Pass => "pass",
                _ => "FAIL",
            };
            println!("  order {}: {}", o.order, tag);
        }
    }
    for name in &output.objects_written {
        println!("  constructed {name}");
    }
}

fn finish(cli: &Cli, output: CommandOutput) -> Result<i32> {
    if let Some(path) = &cli.common.out {
        if output.docs.is_empty() {
            return Err(CliError::Usage("--out given but the command constructs nothing".into()));
        }
        let doc = Document { format_version: FORMAT_VERSION, objects: output.docs.clone() };
        std::fs::write(path, render_document(&doc))
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    if cli.common.json {
        println!("{}", serde_json::to_string_pretty(&output).expect("report serialization"));
    } else {
        print_human(&output);
    }
    Ok(output.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|output| finish(&cli, output)) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            if cli.common.json {
                let body = serde_json::json!({
                    "outcome": if err.exit_code() == 1 { "fail" } else { "error" },
                    "error": err.to_string(),
                });
                println!("{}", serde_json::to_string_pretty(&body).expect("error serialization"));
            } else {
                eprintln!("{err}");
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
