use std::path::PathBuf;
use std::process::ExitCode;

use adslab::{certificate_schema, certify, config_schema, write_artifacts, ExperimentConfig, Kind};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "adslab", version, about = "Numerical certificates for equivariant convex surfaces in AdS and Minkowski space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the kind named in the config file.
    Run(RunArgs),
    Rep(RunArgs),
    Hull(RunArgs),
    Metric(RunArgs),
    Rigidity(RunArgs),
    Jacobian(RunArgs),
    Pogorelov(RunArgs),
    Transversality(RunArgs),
    Gc(RunArgs),
    Suite(RunArgs),
    /// Inputs, outputs and claims of an experiment kind.
    Describe { kind: String },
    /// JSON schema of the config file (`config`) or of certificates (`certificate`).
    Schema { which: String },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "tol-alg")]
    tol_alg: Option<f64>,
    #[arg(long = "tol-fd")]
    tol_fd: Option<f64>,
    /// Write the JSON certificate (with --csv: only the named formats).
    #[arg(long)]
    json: bool,
    /// Write the CSV summary.
    #[arg(long)]
    csv: bool,
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

fn run(kind: Option<Kind>, args: RunArgs) -> ExitCode {
    let mut cfg = match &args.config {
        Some(path) => match ExperimentConfig::load(path) {
            Ok(c) => c,
            Err(e) => return fail(e),
        },
        None => ExperimentConfig::default(),
    };
    if let Some(k) = kind {
        cfg.kind = Some(k);
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = args.out {
        cfg.output.dir = dir;
    }
    if let Some(x) = args.tol_alg {
        cfg.tolerances.algebraic = Some(x);
    }
    if let Some(x) = args.tol_fd {
        cfg.tolerances.finite_difference = Some(x);
    }
    if args.json || args.csv {
        cfg.output.json = args.json;
        cfg.output.csv = args.csv;
    }
    if let Err(e) = cfg.validate() {
        return fail(e);
    }
    let (cert, outcome) = certify(&cfg);
    for v in &cert.verdicts {
        match v.criterion {
            Some(c) => println!("[{c}] {}", v.line()),
            None => println!("{}", v.line()),
        }
    }
    if let Some(e) = &cert.error {
        eprintln!("error: {e}");
    }
    match write_artifacts(&cert, &outcome, &cfg.output.dir) {
        Ok(paths) => paths.iter().for_each(|p| println!("wrote {}", p.display())),
        Err(e) => return fail(e),
    }
    println!("status: {:?}", cert.status);
    ExitCode::from(cert.status.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::Run(a) => run(None, a),
        Command::Rep(a) => run(Some(Kind::Rep), a),
        Command::Hull(a) => run(Some(Kind::Hull), a),
        Command::Metric(a) => run(Some(Kind::Metric), a),
        Command::Rigidity(a) => run(Some(Kind::Rigidity), a),
        Command::Jacobian(a) => run(Some(Kind::Jacobian), a),
        Command::Pogorelov(a) => run(Some(Kind::Pogorelov), a),
        Command::Transversality(a) => run(Some(Kind::Transversality), a),
        Command::Gc(a) => run(Some(Kind::Gc), a),
        Command::Suite(a) => run(Some(Kind::Suite), a),
        Command::Describe { kind } => match Kind::parse(&kind) {
            Some(k) => {
                print!("{}", adslab::describe::describe(k));
                ExitCode::SUCCESS
            }
            None => {
                let names: Vec<&str> = Kind::ALL.iter().map(|k| k.name()).collect();
                fail(format!("unknown experiment kind '{kind}'; expected one of {}", names.join(", ")))
            }
        },
        Command::Schema { which } => match which.as_str() {
            "config" => {
                println!("{}", config_schema());
                ExitCode::SUCCESS
            }
            "certificate" => {
                println!("{}", certificate_schema());
                ExitCode::SUCCESS
            }
            other => fail(format!("unknown schema '{other}'; expected config or certificate")),
        },
    }
}
