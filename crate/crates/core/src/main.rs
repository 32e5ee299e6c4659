use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigUint;

use pqcover::classify::{admissible_pairs, guralnick_candidates};
use pqcover::cover::{rh_genus, BranchingData};
use pqcover::format::parse_tower_file;
use pqcover::perm::{format_cycles, parse_cycles};
use pqcover::pipeline::{builtin_fixtures, render_human, render_machine, verify_file};
use pqcover::search::{search, SearchParams};

/// Monodromy groups of composite covers: verification, genus arithmetic,
/// classification tables, and tower search.
#[derive(Parser)]
#[command(name = "pqcover", version, max_term_width = 100)]
struct Cli {
    /// Print the machine-readable key=value report on stdout.
    #[arg(long, global = true)]
    machine: bool,
    /// Also write the machine-readable report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Element budget for enumeration-heavy commands.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a tower file: run validation, relabeling, containments,
    /// decomposition, classification and genera, and report every check.
    Verify { file: PathBuf },
    /// Genus from the Riemann-Hurwitz relation for a group action with the
    /// given order, quotient genus, and periods.
    Genus {
        order: BigUint,
        gamma: u64,
        periods: Vec<u64>,
    },
    /// List the admissible (q, U) pairs for a given odd prime p.
    Admissible { p: u64 },
    /// Enumerate towers with the given seed element inside the envelope
    /// group for (p, q), printing one classification per tower found.
    Search { p: u64, q: u64, seed: String },
    /// Run all built-in fixtures and compare against their expected values.
    Examples,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

/// Returns the process exit code on success; `Err` means a usage or parse
/// problem (exit 2).
fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Verify { file } => {
            let text = fs::read_to_string(file)
                .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
            let parsed = parse_tower_file(&text).map_err(|e| e.to_string())?;
            let outcome = verify_file(&parsed);
            let machine = render_machine(&outcome);
            if cli.machine {
                print!("{machine}");
            } else {
                print!("{}", render_human(&outcome));
            }
            write_report(cli, &machine)?;
            Ok(exit_for(outcome.passed()))
        }
        Command::Genus {
            order,
            gamma,
            periods,
        } => {
            let data = BranchingData::new(*gamma, periods.clone()).map_err(|e| e.to_string())?;
            match rh_genus(order, &data) {
                Ok(genus) => {
                    if cli.machine {
                        println!("genus={genus}");
                    } else {
                        println!("{genus}");
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    eprintln!("{e}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Admissible { p } => {
            let pairs = admissible_pairs(*p).map_err(|e| e.to_string())?;
            let candidates = guralnick_candidates(*p).map_err(|e| e.to_string())?;
            let mut machine = String::new();
            for id in &candidates {
                machine.push_str(&format!("candidate.{id}={}\n", id.order));
            }
            for (q, id) in &pairs {
                machine.push_str(&format!("admissible.q={q} U={id} order={}\n", id.order));
            }
            if cli.machine {
                print!("{machine}");
            } else {
                println!("simple transitive candidates of degree {p}:");
                for id in &candidates {
                    println!("  {id}  (order {})", id.order);
                }
                if pairs.is_empty() {
                    println!("no admissible (q, U) pairs for p = {p}");
                } else {
                    println!("admissible (q, U) pairs:");
                    for (q, id) in &pairs {
                        println!("  q = {q}: {id}  (order {})", id.order);
                    }
                }
            }
            write_report(cli, &machine)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Search { p, q, seed } => {
            let degree = (p * q) as usize;
            let seed = parse_cycles(seed, degree).map_err(|e| e.to_string())?;
            let params = SearchParams {
                p: *p,
                q: *q,
                seed,
                budget: cli.budget,
            };
            let results = search(&params).map_err(|e| e.to_string())?;
            let mut machine = String::new();
            let mut all_passed = true;
            for (i, tower) in results.iter().enumerate() {
                let (order, rank, image) = &tower.signature;
                machine.push_str(&format!(
                    "tower.{i}.b={}\n",
                    format_cycles(&tower.partner)
                ));
                machine.push_str(&format!(
                    "tower.{i}.n={}\n",
                    tower
                        .n_gens
                        .iter()
                        .map(format_cycles)
                        .collect::<Vec<_>>()
                        .join(";")
                ));
                machine.push_str(&format!("tower.{i}.order={order}\n"));
                machine.push_str(&format!("tower.{i}.s={rank}\n"));
                machine.push_str(&format!("tower.{i}.u={image}\n"));
                if let Some(c) = &tower.outcome.classification {
                    machine.push_str(&format!("tower.{i}.case={}\n", c.case_label()));
                    machine.push_str(&format!("tower.{i}.gz={}\n", c.genus_z));
                }
                machine.push_str(&format!(
                    "tower.{i}.result={}\n",
                    if tower.outcome.passed() { "pass" } else { "fail" }
                ));
                all_passed &= tower.outcome.passed();
                if !cli.machine {
                    println!(
                        "[{}] |G| = {order}, s = {rank}, U = {image}, b = {}",
                        if tower.outcome.passed() { "pass" } else { "FAIL" },
                        format_cycles(&tower.partner)
                    );
                }
            }
            machine.push_str(&format!("towers.found={}\n", results.len()));
            if cli.machine {
                print!("{machine}");
            } else {
                println!("{} towers found", results.len());
            }
            write_report(cli, &machine)?;
            Ok(exit_for(all_passed))
        }
        Command::Examples => {
            let mut machine = String::new();
            let mut all_passed = true;
            for (name, text) in builtin_fixtures() {
                let parsed = parse_tower_file(text)
                    .map_err(|e| format!("fixture {name}: {e}"))?;
                let outcome = verify_file(&parsed);
                let passed = outcome.passed();
                all_passed &= passed;
                machine.push_str(&format!(
                    "example.{name}={}\n",
                    if passed { "pass" } else { "fail" }
                ));
                if !cli.machine {
                    let (order, rank, image, gz) = outcome
                        .classification
                        .as_ref()
                        .zip(outcome.summary.as_ref())
                        .map(|(c, s)| {
                            (
                                s.group_order.to_string(),
                                c.rank.to_string(),
                                c.image.to_string(),
                                c.genus_z.to_string(),
                            )
                        })
                        .unwrap_or_else(|| {
                            ("?".into(), "?".into(), "?".into(), "?".into())
                        });
                    println!(
                        "[{}] {name}: |G| = {order}, s = {rank}, U = {image}, g_Z = {gz}",
                        if passed { "pass" } else { "FAIL" }
                    );
                }
            }
            if cli.machine {
                print!("{machine}");
            }
            write_report(cli, &machine)?;
            Ok(exit_for(all_passed))
        }
    }
}

fn exit_for(passed: bool) -> ExitCode {
    if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn write_report(cli: &Cli, machine: &str) -> Result<(), String> {
    if let Some(path) = &cli.report {
        fs::write(path, machine)
            .map_err(|e| format!("cannot write report {}: {e}", path.display()))?;
    }
    Ok(())
}
