use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use stabzx::flatten::{conjugate, flatten_circuit, flatten_pauli, max_norm_diff, to_csv, MATRIX_TOL};
use stabzx::hamiltonian::{HamiltonianError, SpectralOptions};
use stabzx::rewrite::{propagate_generators_traced, steps_to_json_lines, RewriteStep, Strategy};
use stabzx::*;

/// Largest circuit for which `--check` also compares against dense matrices.
const DENSE_CHECK_WIRES: usize = 4;

#[derive(Parser, Debug)]
#[command(
    name = "stabzx",
    version,
    about = "Heisenberg-picture stabilizer rewriting for Clifford circuits"
)]
struct Cli {
    /// Seed for every random choice (rewrite order, campaigns, test states).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Also write the command's result as JSON to this path.
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Write the rewrite steps as JSON lines to this path.
    #[arg(long, global = true, value_name = "PATH")]
    trace: Option<PathBuf>,
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rewrite `U P U^dag` to its Pauli normal form.
    Propagate {
        circuit: PathBuf,
        #[arg(allow_hyphen_values = true)]
        pauli: String,
        /// Cross-check against the tableau and, for small circuits, dense matrices.
        #[arg(long)]
        check: bool,
        /// Absorb gates in a seeded random order instead of circuit order.
        #[arg(long)]
        random_order: bool,
    },
    /// Print the stabilizer generators of the circuit applied to |0..0>.
    Stabilizers {
        circuit: PathBuf,
        #[arg(long)]
        check: bool,
    },
    /// Print the tableau rows: images of X_1..X_n then Z_1..Z_n.
    Tableau { circuit: PathBuf },
    /// Run a randomized confluence campaign.
    Confluence(ConfluenceArgs),
    /// Telescope the parent Hamiltonian of the circuit output.
    ParentHamiltonian {
        circuit: PathBuf,
        /// Diagonalize and verify kernel, gap and fidelity bounds.
        #[arg(long)]
        check: bool,
    },
    /// Write the dense unitary of a circuit as CSV.
    Flatten {
        circuit: PathBuf,
        #[arg(long, value_name = "PATH")]
        csv: PathBuf,
    },
}

#[derive(Args, Debug)]
struct ConfluenceArgs {
    /// Largest wire count drawn.
    #[arg(long, default_value_t = 8)]
    qubits: usize,
    /// Largest gate count drawn.
    #[arg(long, default_value_t = 40)]
    gates: usize,
    /// Random rewrite orders per instance.
    #[arg(long, default_value_t = 10)]
    orders: usize,
    #[arg(long, default_value_t = 1000)]
    instances: usize,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Directory receiving the failing circuit and traces.
    #[arg(long, value_name = "DIR")]
    artifacts: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Verification(String),
}

type Outcome = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn read_circuit(path: &Path) -> Result<CliffordCircuit, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_circuit(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, body: &str) -> Outcome {
    fs::write(path, body).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn write_json(path: Option<&Path>, value: &serde_json::Value) -> Outcome {
    match path {
        Some(p) => write_file(
            p,
            &format!("{}\n", serde_json::to_string_pretty(value).expect("json value")),
        ),
        None => Ok(()),
    }
}

fn write_trace(path: Option<&Path>, steps: &[RewriteStep]) -> Outcome {
    match path {
        Some(p) => write_file(p, &steps_to_json_lines(steps)),
        None => Ok(()),
    }
}

/// Compares a rewrite result with the tableau and, when small enough, with
/// dense conjugation.
fn check_image(c: &CliffordCircuit, input: &PauliString, got: &PauliString, verbose: bool) -> Outcome {
    let tab = run_circuit(c).image(input).expect("length checked by rewriting");
    if &tab != got {
        return Err(Failure::Verification(format!(
            "oracle mismatch on {input}: rewriting gives {got}, tableau gives {tab}"
        )));
    }
    if c.n_wires() <= DENSE_CHECK_WIRES {
        let u = flatten_circuit(c).expect("small circuit");
        let want = conjugate(&u, &flatten_pauli(input).expect("small string"));
        let diff = max_norm_diff(&flatten_pauli(got).expect("small string"), &want);
        if diff > MATRIX_TOL {
            return Err(Failure::Verification(format!(
                "oracle mismatch on {input}: dense residual {diff:e}"
            )));
        }
        if verbose {
            eprintln!("dense check {input}: residual {diff:e}");
        }
    }
    Ok(())
}

fn propagate(cli: &Cli, circuit: &Path, pauli: &str, check: bool, random_order: bool) -> Outcome {
    let c = read_circuit(circuit)?;
    let p = parse_pauli(pauli).map_err(|e| usage(format!("pauli {pauli:?}: {e}")))?;
    let strategy = if random_order {
        Strategy::RandomOrderSeeded(cli.seed)
    } else {
        Strategy::InOrder
    };
    let trace = normal_form(&c, &p, strategy).map_err(usage)?;
    println!("{}", trace.final_string);
    if cli.verbose {
        eprintln!(
            "{} gates, {} counted rewrites",
            trace.steps.len(),
            trace.counted_rewrites
        );
    }
    write_trace(cli.trace.as_deref(), &trace.steps)?;
    write_json(
        cli.json.as_deref(),
        &json!({
            "input": p.to_string(),
            "output": trace.final_string.to_string(),
            "counted_rewrites": trace.counted_rewrites,
        }),
    )?;
    if check {
        check_image(&c, &p, &trace.final_string, cli.verbose)?;
    }
    Ok(())
}

fn stabilizers(cli: &Cli, circuit: &Path, check: bool) -> Outcome {
    let c = read_circuit(circuit)?;
    let n = c.n_wires();
    let traces = propagate_generators_traced(&c, Strategy::InOrder);
    let gens: Vec<&PauliString> = traces[n..].iter().map(|t| &t.final_string).collect();
    for g in &gens {
        println!("{g}");
    }
    let steps: Vec<RewriteStep> = traces[n..].iter().flat_map(|t| t.steps.iter().cloned()).collect();
    write_trace(cli.trace.as_deref(), &steps)?;
    write_json(
        cli.json.as_deref(),
        &json!({ "n": n, "stabilizers": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>() }),
    )?;
    if check {
        for t in &traces[n..] {
            check_image(&c, t.initial.frame(), &t.final_string, cli.verbose)?;
        }
    }
    Ok(())
}

fn tableau(cli: &Cli, circuit: &Path) -> Outcome {
    let c = read_circuit(circuit)?;
    let t = run_circuit(&c);
    print!("{t}");
    write_json(
        cli.json.as_deref(),
        &json!({ "n": t.n(), "rows": t.rows().iter().map(|r| r.to_string()).collect::<Vec<_>>() }),
    )
}

fn confluence(cli: &Cli, args: &ConfluenceArgs) -> Outcome {
    let spec = TrialSpec {
        n_wires: args.qubits,
        gate_count: args.gates,
        n_orders: args.orders,
        seed: cli.seed,
        instance_count: args.instances,
    };
    match run_campaign(&spec) {
        Ok(report) => {
            let text = report.to_json();
            match &args.report {
                Some(p) => write_file(p, &text)?,
                None => println!("{text}"),
            }
            if let Some(p) = &cli.json {
                write_file(p, &text)?;
            }
            let s = &report.summary;
            eprintln!(
                "{} instances passed; (g/2 + l) n bound held on {:.1}%",
                s.instances,
                100.0 * s.tight_bound_fraction
            );
            Ok(())
        }
        Err(e @ CampaignError::InvalidSpec(_)) => Err(usage(e)),
        Err(e) => {
            if let Some(dir) = &args.artifacts {
                let written = e
                    .write_artifacts(dir)
                    .map_err(|io| usage(format!("{}: {io}", dir.display())))?;
                for p in written {
                    eprintln!("wrote {}", p.display());
                }
            }
            Err(Failure::Verification(e.to_string()))
        }
    }
}

fn parent_ham(cli: &Cli, circuit: &Path, check: bool) -> Outcome {
    let c = read_circuit(circuit)?;
    let h = parent_hamiltonian(&c);
    println!("{h}");
    let mut out = serde_json::to_value(&h).expect("pauli sum json");
    let mut failure = None;
    if check {
        let opts = SpectralOptions {
            seed: cli.seed,
            ..SpectralOptions::default()
        };
        let rep = spectral_check(&h, &c, &opts).map_err(|e| match e {
            HamiltonianError::TooManyWires(_) => usage(format!("--check: {e}")),
            other => usage(other),
        })?;
        println!(
            "min_eig {:.3e} kernel_dim {} gap {} kernel_overlap {} max_eig {}",
            rep.min_eig, rep.kernel_dim, rep.gap, rep.kernel_overlap, rep.max_eig
        );
        if cli.verbose {
            eprintln!("eigenvalues {:?}", rep.eigenvalues);
        }
        if !rep.passed {
            failure = Some(Failure::Verification("spectral check failed".into()));
        }
        out["spectral"] = serde_json::to_value(&rep).expect("report json");
    }
    write_json(cli.json.as_deref(), &out)?;
    failure.map_or(Ok(()), Err)
}

fn flatten(circuit: &Path, csv: &Path) -> Outcome {
    let c = read_circuit(circuit)?;
    let u = flatten_circuit(&c).map_err(usage)?;
    write_file(csv, &to_csv(&u))
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Propagate {
            circuit,
            pauli,
            check,
            random_order,
        } => propagate(cli, circuit, pauli, *check, *random_order),
        Command::Stabilizers { circuit, check } => stabilizers(cli, circuit, *check),
        Command::Tableau { circuit } => tableau(cli, circuit),
        Command::Confluence(args) => confluence(cli, args),
        Command::ParentHamiltonian { circuit, check } => parent_ham(cli, circuit, *check),
        Command::Flatten { circuit, csv } => flatten(circuit, csv),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
