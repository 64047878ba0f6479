//! `psys`: build a periodic system from attribute and class files,
//! interrogate its dominance structure, export DOT, reconcile against
//! the ground-truth fixtures, and relate two systems.
//!
//! Exit codes: 0 success, 1 input error, 2 reconciliation mismatch.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use psys_core::chem::{self, load_bond_dataset, load_classes, load_ground_truth, reproduce_report};
use psys_core::dot::{dominance_dot, hasse_dot};
use psys_core::hypergraph::Hypergraph;
use psys_core::num::Decimal;
use psys_core::order::{comparability_stats, covers, AttributeTable, ElementId};
use psys_core::system::{
    build_periodic_system, dominance_degree, dominance_diagram, dominance_profile,
    hyperedge_chain_order, relate_systems, within_hyperedge_dominance, PeriodicSystem,
};

#[derive(Parser)]
#[command(
    name = "psys",
    version,
    about = "Periodic systems as ordered hypergraphs",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Attribute CSV (bundled single-covalent-bond data when omitted).
    #[arg(long)]
    attrs: Option<PathBuf>,
    /// Similarity class list (bundled classes when omitted).
    #[arg(long)]
    classes: Option<PathBuf>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DominanceMode {
    /// Dominance degree of one element, as exact fraction and decimal.
    #[arg(long)]
    element: Option<String>,
    /// Within-hyperedge degree of every multi-member hyperedge.
    #[arg(long)]
    within: bool,
    /// Inter-hyperedge dominance profile as CSV.
    #[arg(long)]
    inter: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportKind {
    Hasse,
    Dominance,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Build the system and print a summary.
    Build {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Dominance metrics over the built system.
    Dominance {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        mode: DominanceMode,
        /// Strict dominance threshold in (0, 1] for the profile.
        #[arg(long, default_value = "0.95")]
        threshold: String,
    },
    /// Emit the element order or the dominance diagram as DOT.
    Export {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum)]
        kind: ExportKind,
        #[arg(long, value_enum, default_value = "dot")]
        format: ExportFormat,
        /// Strict dominance threshold in (0, 1] for the diagram.
        #[arg(long, default_value = "0.95")]
        threshold: String,
        /// Output file (standard output when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconcile the built system against the ground-truth fixtures.
    Report {
        #[command(flatten)]
        input: InputArgs,
        /// Directory holding tableS1.txt and within_degrees.txt
        /// (bundled copies when omitted).
        #[arg(long)]
        fixture: Option<PathBuf>,
    },
    /// Strongest relation between two systems.
    Relate {
        attrs1: PathBuf,
        classes1: PathBuf,
        attrs2: PathBuf,
        classes2: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_input(path: Option<&Path>, bundled: &str) -> Result<String, String> {
    match path {
        None => Ok(bundled.to_string()),
        Some(p) => read_file(p),
    }
}

fn load_system(input: &InputArgs) -> Result<(AttributeTable, Hypergraph, PeriodicSystem), String> {
    let attrs = read_input(input.attrs.as_deref(), chem::data::BONDS_CSV)?;
    let classes_text = read_input(input.classes.as_deref(), chem::data::CLASSES_TXT)?;
    let table = load_bond_dataset(&attrs).map_err(|e| e.to_string())?;
    let classes =
        load_classes(&classes_text, table.elements().to_vec()).map_err(|e| e.to_string())?;
    let ps = build_periodic_system(&table, &classes).map_err(|e| e.to_string())?;
    Ok((table, classes, ps))
}

fn parse_threshold(text: &str) -> Result<Decimal, String> {
    let t = Decimal::from_str(text).map_err(|e| format!("threshold {text:?}: {e}"))?;
    if t <= Decimal::ZERO || t > Decimal::ONE {
        return Err(format!("threshold {text} is outside (0, 1]"));
    }
    Ok(t)
}

fn members_label(members: &BTreeSet<ElementId>) -> String {
    let names: Vec<&str> = members.iter().map(|m| m.as_str()).collect();
    format!("{{{}}}", names.join(","))
}

fn joined(members: &[ElementId]) -> String {
    members
        .iter()
        .map(|m| m.as_str())
        .collect::<Vec<_>>()
        .join(",")
}

fn run(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Build { input } => {
            let (table, _, ps) = load_system(&input)?;
            let stats = comparability_stats(ps.order());
            println!(
                "{} elements, {} representatives, {} hyperedges, {}/{} comparable/incomparable pairs",
                table.len(),
                ps.order().len(),
                ps.hypergraph().edges().len(),
                stats.comparable,
                stats.incomparable
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Dominance {
            input,
            mode,
            threshold,
        } => {
            let (_, _, ps) = load_system(&input)?;
            if let Some(name) = mode.element {
                let id = ElementId::new(name).map_err(|e| e.to_string())?;
                let d = dominance_degree(&ps, &id).map_err(|e| e.to_string())?;
                println!("{d} {:.4}", d.as_f64());
            } else if mode.within {
                for edge in ps.hypergraph().edges() {
                    if edge.len() < 2 {
                        continue;
                    }
                    let d = within_hyperedge_dominance(&ps, edge.index())
                        .map_err(|e| e.to_string())?;
                    let members = match hyperedge_chain_order(&ps, edge.index())
                        .map_err(|e| e.to_string())?
                    {
                        Some(chain) => joined(&chain),
                        None => joined(&edge.members().iter().cloned().collect::<Vec<_>>()),
                    };
                    println!("{members} {d} {:.4}", d.as_f64());
                }
            } else {
                let t = parse_threshold(&threshold)?;
                let profile = dominance_profile(&ps, t).map_err(|e| e.to_string())?;
                println!("edge_index,in_degree,out_degree");
                for entry in profile {
                    println!("{},{},{}", entry.index, entry.in_degree, entry.out_degree);
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Export {
            input,
            kind,
            format,
            threshold,
            out,
        } => {
            let ExportFormat::Dot = format;
            let (_, _, ps) = load_system(&input)?;
            let text = match kind {
                ExportKind::Hasse => hasse_dot(&covers(ps.order())),
                ExportKind::Dominance => {
                    let t = parse_threshold(&threshold)?;
                    let diagram = dominance_diagram(&ps, t).map_err(|e| e.to_string())?;
                    dominance_dot(&ps, &diagram)
                }
            };
            match out {
                Some(path) => {
                    fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display()))?
                }
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Report { input, fixture } => {
            let (table, classes, _) = load_system(&input)?;
            let (sets_text, degrees_text) = match fixture {
                None => (
                    chem::data::TABLE_S1_TXT.to_string(),
                    chem::data::WITHIN_DEGREES_TXT.to_string(),
                ),
                Some(dir) => (
                    read_file(&dir.join("tableS1.txt"))?,
                    read_file(&dir.join("within_degrees.txt"))?,
                ),
            };
            let truth = load_ground_truth(&sets_text, &degrees_text).map_err(|e| e.to_string())?;
            let report = reproduce_report(&table, &classes, &truth).map_err(|e| e.to_string())?;

            let s1_ok = report.s1_mismatches.is_empty();
            println!(
                "{}/{} S1 {}",
                report.s1_matches(),
                report.s1_total,
                if s1_ok { "OK" } else { "MISMATCH" }
            );
            for m in &report.s1_mismatches {
                println!(
                    "  {} {}: missing {}, extra {}",
                    m.element,
                    m.kind,
                    members_label(&m.missing),
                    members_label(&m.extra)
                );
            }
            let within_ok = report.within_mismatches.is_empty();
            println!(
                "{}/{} within {}",
                report.within_matches(),
                report.within_total,
                if within_ok { "OK" } else { "MISMATCH" }
            );
            for m in &report.within_mismatches {
                let computed = match m.computed {
                    Some(c) => format!("{c} = {:.2}", c.as_f64()),
                    None => "no such hyperedge".to_string(),
                };
                println!(
                    "  {}: computed {computed}, fixture says {}",
                    members_label(&m.members),
                    m.expected
                );
            }
            if let Some(mean) = report.mean_within {
                println!("mean within degree {mean} = {:.4}", mean.as_f64());
            }
            println!("spearman {:.4}", report.spearman);
            Ok(if report.reconciled() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Relate {
            attrs1,
            classes1,
            attrs2,
            classes2,
        } => {
            let load = |attrs: PathBuf, classes: PathBuf| -> Result<PeriodicSystem, String> {
                let input = InputArgs {
                    attrs: Some(attrs),
                    classes: Some(classes),
                };
                Ok(load_system(&input)?.2)
            };
            let ps1 = load(attrs1, classes1)?;
            let ps2 = load(attrs2, classes2)?;
            println!("{}", relate_systems(&ps1, &ps2));
            Ok(ExitCode::SUCCESS)
        }
    }
}
