//! `emtool`: command-line front end for the emachine library.
//!
//! Exit codes: 0 success or a true answer, 1 a false answer, 2 a usage
//! error, 3 a data or validation error.

mod io;

use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use emachine::axioms::{self, EPS_DIST};
use emachine::examples;
use emachine::isomorphism::{are_isomorphic, EPS_ISO};
use emachine::minimize::minimize_unifilar_with;
use emachine::mixed_state::{belief_of_word, estimate_decay, sync_quantities};
use emachine::par;
use emachine::reconstruct::{
    reconstruct_analytic_with, reconstruct_empirical_with, AnalyticOptions, EmpiricalOptions,
    ReconstructedMachine,
};
use emachine::simulate::{empirical_word_probs, sample_path, Start};
use emachine::topology::{fischer_cover, krieger_cover, minimal_dfa, strip_probabilities};

const THREADS_VAR: &str = "EMTOOL_THREADS";

#[derive(Parser)]
#[command(
    name = "emtool",
    version,
    about = "Generator and history epsilon-machines",
    after_help = "Machine files use `-` for standard input/output. \
                  Set EMTOOL_THREADS to cap the worker threads."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that every edge probability is nonnegative, rows sum to one and
    /// every symbol is used. Exits 1 when the file parses but is invalid.
    Validate {
        /// Machine file (`-` for stdin).
        machine: String,
    },
    /// Report irreducibility, unifilarity and probabilistic distinctness.
    /// Exits 1 unless the machine is a generator epsilon-machine.
    Axioms {
        /// Machine file (`-` for stdin).
        machine: String,
        /// Tolerance for comparing future distributions of states.
        #[arg(long, default_value_t = EPS_DIST)]
        eps: f64,
    },
    /// Merge probabilistically equivalent states of a unifilar machine.
    /// The state map `state -> block` goes to `<out>.map`, or to stderr when
    /// `<out>` is `-`.
    Minimize {
        /// Machine file (`-` for stdin).
        input: String,
        /// Output machine file (`-` for stdout).
        out: String,
        /// Tolerance for comparing future distributions of states.
        #[arg(long, default_value_t = EPS_DIST)]
        eps: f64,
    },
    /// Decide whether two unifilar, irreducible machines are the same up to
    /// renaming states. Prints the map or NOT ISOMORPHIC (exit 1).
    Isomorphic {
        /// First machine file.
        a: String,
        /// Second machine file.
        b: String,
        /// Largest allowed difference between matched edge probabilities.
        #[arg(long, default_value_t = EPS_ISO)]
        tol: f64,
    },
    /// Generate a symbol sequence from a machine.
    Sample {
        /// Machine file (`-` for stdin).
        machine: String,
        /// Number of symbols.
        #[arg(long)]
        len: usize,
        /// Random seed.
        #[arg(long)]
        seed: u64,
        /// `stationary`, a state index, or comma-separated probabilities.
        #[arg(long, default_value = "stationary")]
        start: String,
        /// Write all symbols on one line instead of one per line.
        #[arg(long)]
        packed: bool,
        /// Output file.
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Count every word up to a length in a sample file; CSV `word,count,freq`.
    Words {
        /// Sample file (`-` for stdin).
        sample: String,
        /// Longest word counted.
        #[arg(long)]
        max_len: usize,
        /// Output file.
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Observer belief over states after a word, starting from stationarity.
    Belief {
        /// Machine file (`-` for stdin).
        machine: String,
        /// Word as concatenated symbols, or space-separated names; may be empty.
        #[arg(default_value = "")]
        word: String,
    },
    /// Monte Carlo synchronization profile; CSV
    /// `t,mean_Q,frac_exceed,frac_unsynced`.
    SyncProfile {
        /// Machine file (`-` for stdin).
        machine: String,
        /// Number of symbols per chain.
        #[arg(long)]
        horizon: usize,
        /// Number of independent chains.
        #[arg(long)]
        chains: usize,
        /// Random seed.
        #[arg(long)]
        seed: u64,
        /// Threshold base: `frac_exceed` counts chains with `Q_t > alpha^t`.
        #[arg(long, default_value_t = 0.9)]
        alpha: f64,
        /// Output file.
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Build the history epsilon-machine.
    #[command(subcommand)]
    Reconstruct(Reconstruct),
    /// Topological presentations of the support of a machine.
    Topology {
        /// Machine file (`-` for stdin).
        machine: String,
        /// Which presentation to write.
        #[arg(long, value_enum, default_value_t = Emit::Dfa)]
        emit: Emit,
        /// Output file.
        #[arg(short, long, default_value = "-")]
        output: String,
    },
    /// Write a built-in machine: even P, abc P Q, np2 P, np2-min P, sns P Q.
    Example {
        /// even, abc, np2, np2-min or sns.
        name: String,
        /// Parameters, each in (0, 1).
        #[arg(allow_negative_numbers = true)]
        params: Vec<f64>,
        /// Output file.
        #[arg(short, long, default_value = "-")]
        output: String,
    },
}

#[derive(Subcommand)]
enum Reconstruct {
    /// Close the belief states of a known machine under symbol updates.
    Analytic {
        /// Machine file (`-` for stdin).
        machine: String,
        /// Longest word followed from the stationary belief.
        #[arg(long, default_value_t = 256)]
        depth: usize,
        /// Longest probe word (default 2N + 2).
        #[arg(long)]
        lfut: Option<usize>,
        /// Beliefs whose futures agree within this are one class.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Stop after this many classes.
        #[arg(long, default_value_t = 4096)]
        cap: usize,
        /// Zero belief entries below this after each update.
        #[arg(long, default_value_t = 1e-12)]
        snap: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cluster the contexts of a sample by their future distributions.
    Empirical {
        /// Sample file (`-` for stdin).
        sample: String,
        /// Context length.
        #[arg(long, default_value_t = 8)]
        lctx: usize,
        /// Future length.
        #[arg(long, default_value_t = 4)]
        lfut: usize,
        /// Contexts seen fewer times are ignored.
        #[arg(long, default_value_t = 100)]
        min_count: u64,
        /// Significance level of the merge test.
        #[arg(long, default_value_t = 0.01)]
        sig: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Machine file to write.
    #[arg(short, long, default_value = "-")]
    output: String,
    /// Report file; stderr when omitted.
    #[arg(long)]
    report: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Dfa,
    Fischer,
    Krieger,
}

/// A bad argument value found after clap parsing.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

enum Outcome {
    Yes,
    No,
}

fn parse_start(text: &str) -> Result<Start> {
    if text == "stationary" {
        return Ok(Start::Stationary);
    }
    if let Ok(i) = text.parse::<usize>() {
        return Ok(Start::State(i));
    }
    let probs: Option<Vec<f64>> = text
        .split(',')
        .map(|t| emachine::format::parse_probability(t.trim()))
        .collect();
    probs
        .map(Start::Distribution)
        .ok_or_else(|| Usage(format!("bad --start value {text:?}")).into())
}

fn emit_reconstruction(r: &ReconstructedMachine, out: &OutputArgs) -> Result<()> {
    io::write_machine_to(&out.output, &r.machine)?;
    let report = r.to_string();
    match &out.report {
        Some(path) => io::write_text(path, &report),
        None => {
            eprint!("{report}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Validate { machine } => {
            let m = io::load_machine_raw(&machine)?;
            let report = m.validate(emachine::machine::EPS_STOCH);
            if report.accepted() {
                println!(
                    "valid: {} states, {} symbols, {} edges",
                    m.n_states(),
                    m.n_symbols(),
                    m.edges().len()
                );
                Ok(Outcome::Yes)
            } else {
                for v in &report.violations {
                    println!("{v}");
                }
                Ok(Outcome::No)
            }
        }
        Command::Axioms { machine, eps } => {
            let m = io::load_machine(&machine)?;
            let report = axioms::is_generator_em_with(&m, eps);
            print!("{report}");
            Ok(if report.is_generator_em() {
                Outcome::Yes
            } else {
                Outcome::No
            })
        }
        Command::Minimize { input, out, eps } => {
            let m = io::load_machine(&input)?;
            let q = minimize_unifilar_with(&m, eps)?;
            io::write_machine_to(&out, &q.target)?;
            if out == "-" {
                eprint!("{}", q.to_map_text());
            } else {
                io::write_text(&io::sidecar(&out), &q.to_map_text())?;
            }
            Ok(Outcome::Yes)
        }
        Command::Isomorphic { a, b, tol } => {
            if a == "-" && b == "-" {
                bail!(Usage("only one machine can come from stdin".into()));
            }
            let ma = io::load_machine(&a)?;
            let mb = io::load_machine(&b)?;
            match are_isomorphic(&ma, &mb, tol)? {
                Some(iso) => {
                    for (s, t) in iso.mapping.iter().enumerate() {
                        println!("{s} -> {t}");
                    }
                    Ok(Outcome::Yes)
                }
                None => {
                    println!("NOT ISOMORPHIC");
                    Ok(Outcome::No)
                }
            }
        }
        Command::Sample {
            machine,
            len,
            seed,
            start,
            packed,
            output,
        } => {
            let start = parse_start(&start)?;
            let m = io::load_machine(&machine)?;
            let run = sample_path(&m, &start, len, seed)?;
            io::write_text(
                &output,
                &io::format_sample(m.alphabet(), &run.symbols, packed),
            )?;
            Ok(Outcome::Yes)
        }
        Command::Words {
            sample,
            max_len,
            output,
        } => {
            let (alphabet, symbols) = io::load_sample(&sample)?;
            let table = empirical_word_probs(&symbols, alphabet.len(), max_len)?;
            let mut csv = String::from("word,count,freq\n");
            for (w, c) in table.iter() {
                let _ = writeln!(csv, "{},{c},{}", alphabet.format_word(&w), table.freq(&w));
            }
            io::write_text(&output, &csv)?;
            Ok(Outcome::Yes)
        }
        Command::Belief { machine, word } => {
            let m = io::load_machine(&machine)?;
            let w = m
                .alphabet()
                .parse_word(&word)
                .map_err(|e| Usage(e.to_string()))?;
            let in_language = w.is_empty() || m.word_prob_stationary(&w)? > 0.0;
            let phi = belief_of_word(&m, &w)?;
            let sq = sync_quantities(&phi);
            let probs: Vec<String> = phi.phi.iter().map(|p| format!("{p}")).collect();
            println!("belief: {}", probs.join(" "));
            println!("in language: {}", if in_language { "yes" } else { "no" });
            println!("most likely state: {}", sq.best_state);
            println!("P: {}", sq.p_best);
            println!("Q: {}", sq.doubt);
            Ok(Outcome::Yes)
        }
        Command::SyncProfile {
            machine,
            horizon,
            chains,
            seed,
            alpha,
            output,
        } => {
            let m = io::load_machine(&machine)?;
            let est = estimate_decay(&m, horizon, chains, seed, alpha)?;
            let mut csv = String::from("t,mean_Q,frac_exceed,frac_unsynced\n");
            for t in 0..=horizon {
                let _ = writeln!(
                    csv,
                    "{t},{},{},{}",
                    est.mean_doubt[t], est.frac_exceed[t], est.frac_unsynced[t]
                );
            }
            io::write_text(&output, &csv)?;
            match est.alpha_hat() {
                Some(a) => eprintln!("fitted decay factor: {a}"),
                None => eprintln!("fitted decay factor: none (doubt vanishes at once)"),
            }
            Ok(Outcome::Yes)
        }
        Command::Reconstruct(Reconstruct::Analytic {
            machine,
            depth,
            lfut,
            tol,
            cap,
            snap,
            out,
        }) => {
            let m = io::load_machine(&machine)?;
            let opts = AnalyticOptions {
                depth,
                l_fut: lfut,
                tol,
                class_cap: cap,
                snap,
            };
            let r = reconstruct_analytic_with(&m, &opts)?;
            emit_reconstruction(&r, &out)?;
            Ok(Outcome::Yes)
        }
        Command::Reconstruct(Reconstruct::Empirical {
            sample,
            lctx,
            lfut,
            min_count,
            sig,
            out,
        }) => {
            let (alphabet, symbols) = io::load_sample(&sample)?;
            let opts = EmpiricalOptions {
                l_ctx: lctx,
                l_fut: lfut,
                significance: sig,
                min_count,
                ..EmpiricalOptions::default()
            };
            let r = reconstruct_empirical_with(&symbols, &alphabet, &opts)?;
            emit_reconstruction(&r, &out)?;
            Ok(Outcome::Yes)
        }
        Command::Topology {
            machine,
            emit,
            output,
        } => {
            let m = io::load_machine(&machine)?;
            let dfa = minimal_dfa(&strip_probabilities(&m));
            let text = match emit {
                Emit::Dfa => dfa.to_text(),
                Emit::Fischer => fischer_cover(&dfa)?.to_text(),
                Emit::Krieger => krieger_cover(&dfa).to_text(),
            };
            io::write_text(&output, &text)?;
            Ok(Outcome::Yes)
        }
        Command::Example {
            name,
            params,
            output,
        } => {
            if !examples::NAMES.iter().any(|(n, _)| *n == name) {
                let names: Vec<&str> = examples::NAMES.iter().map(|(n, _)| *n).collect();
                bail!(Usage(format!(
                    "unknown example {name:?}; choose one of {}",
                    names.join(", ")
                )));
            }
            let m = examples::by_name(&name, &params)?;
            io::write_machine_to(&output, &m)?;
            Ok(Outcome::Yes)
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| anyhow!(Usage(format!("{THREADS_VAR}={v:?} is not a count"))))?;
        if n == 0 {
            bail!(Usage(format!("{THREADS_VAR} must be at least 1")));
        }
        par::configure_threads(n);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match configure_threads().and_then(|()| run(cli)) {
        Ok(Outcome::Yes) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("emtool: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
