//! `graphelliptic` binary: argument parsing and dispatch into
//! [`graphelliptic::cli`]. All report logic lives in the library; this file
//! only reads inputs, prints the report, and maps errors to exit codes.

use clap::{Parser, Subcommand, ValueEnum};
use graphelliptic::cli::{
    self, read_input, CliError, SolveArgs, SolveMode,
};

#[derive(Parser)]
#[command(
    name = "graphelliptic",
    version,
    about = "Discrete elliptic analysis on weighted graph domains",
    long_about = "Spectral constants, hypothesis verification, and multiple classical \
                  solutions of -Delta u = alpha u + lambda f(x, u) with zero boundary data \
                  on weighted finite graphs. File arguments accept '-' for stdin."
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Deflate,
    MountainPass,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a graph document and its domain decomposition.
    Info { graph: String },
    /// First Dirichlet eigenvalue of the domain, with certificate.
    Lambda1 { graph: String },
    /// Constraint-class eigenvalue lambda_{m,p}.
    LambdaMp {
        graph: String,
        /// Order of the constraint class (>= 1).
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        m: u32,
        /// Integrability exponent (> 1).
        #[arg(long)]
        p: f64,
    },
    /// Find classical solutions of the problem document.
    Solve {
        graph: String,
        /// Problem document; optional when --yamabe supplies the problem.
        #[arg(required_unless_present = "yamabe")]
        problem: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Deflate)]
        mode: ModeArg,
        /// Replace f by its positive-part truncation and certify a
        /// nonnegative solution.
        #[arg(long)]
        truncate: bool,
        /// Solve -Delta u = GAMMA u + |u|^(P-2) u for a positive solution.
        #[arg(long, num_args = 2, value_names = ["GAMMA", "P"])]
        yamabe: Option<Vec<f64>>,
        /// Valley ball radius for --mode mountain-pass.
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
    },
    /// Tabulate solution counts across a lambda grid as CSV.
    Sweep {
        graph: String,
        problem: String,
        /// Grid as first:last:count.
        #[arg(long = "lambda-grid")]
        lambda_grid: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
    /// Check the variational hypotheses of a problem document.
    Verify { graph: String, problem: String },
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Info { graph } => cli::cmd_info(&read_input(&graph)?),
        Command::Lambda1 { graph } => cli::cmd_lambda1(&read_input(&graph)?),
        Command::LambdaMp { graph, m, p } => cli::cmd_lambda_mp(&read_input(&graph)?, m, p),
        Command::Solve {
            graph,
            problem,
            seed,
            budget,
            mode,
            truncate,
            yamabe,
            rho,
        } => {
            let graph_json = read_input(&graph)?;
            let problem_json = match &problem {
                Some(p) => read_input(p)?,
                None => String::new(),
            };
            let args = SolveArgs {
                seed,
                budget,
                mode: match mode {
                    ModeArg::Deflate => SolveMode::Deflate,
                    ModeArg::MountainPass => SolveMode::MountainPass,
                },
                truncate,
                yamabe: yamabe.map(|v| (v[0], v[1])),
                rho,
            };
            cli::cmd_solve(&graph_json, &problem_json, &args)
        }
        Command::Sweep {
            graph,
            problem,
            lambda_grid,
            seed,
            budget,
        } => cli::cmd_sweep(
            &read_input(&graph)?,
            &read_input(&problem)?,
            &lambda_grid,
            seed,
            budget,
        ),
        Command::Verify { graph, problem } => {
            cli::cmd_verify(&read_input(&graph)?, &read_input(&problem)?)
        }
    }
}

fn main() {
    let args = Args::parse();
    match run(args.command) {
        Ok(mut out) => {
            if !out.ends_with('\n') {
                out.push('\n');
            }
            print!("{out}");
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
