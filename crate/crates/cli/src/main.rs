//! `smk`: check, enumerate, translate and solve from the command line.
//!
//! Exit codes: 0 success or positive verdict, 1 negative verdict, 2 input
//! error, 3 resource cap, 4 external solver failure.

mod commands;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "smk", version, about = "Stable models over finite structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a structure is a stable model of a program.
    Check {
        program: PathBuf,
        structure: PathBuf,
        /// Also print the reduct and the Γ trace.
        #[arg(long)]
        why: bool,
    },
    /// List the stable expansions of a structure.
    Enumerate {
        program: PathBuf,
        structure: PathBuf,
        /// Auxiliary symbols of the program to expand besides the intensional ones.
        #[arg(long, value_delimiter = ',')]
        aux: Vec<String>,
        /// Stop after this many expansions (exit 3).
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        cap: u64,
    },
    /// Run one of the program or sentence translations.
    Translate {
        kind: Kind,
        /// Program (d2n, oc) or sentence (so2dlp-*) file.
        input: Option<PathBuf>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the auxiliary-symbol table next to the output, as `<out>.map`.
        #[arg(long)]
        emit_mapping: bool,
        /// For oc: emit SMT-LIB too (to `<out>.smt2`, or alone on standard output).
        #[arg(long)]
        smt: bool,
        /// For oc with --smt: fix the domain and extensional symbols from a structure file.
        #[arg(long, conflicts_with = "size")]
        structure: Option<PathBuf>,
        /// For oc with --smt: an enumerated domain of this size.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        size: Option<u64>,
        /// For oc with --smt: encode the order in integers instead of a relation.
        #[arg(long)]
        int_order: bool,
        /// For so2dlp-*: bring the sentence into ∀*∃* normal form first.
        #[arg(long)]
        normalize: bool,
    },
    /// Decide stable-model existence through the ordered completion and an SMT solver.
    Solve {
        program: PathBuf,
        structure: PathBuf,
        #[arg(long, env = "SMK_SOLVER")]
        solver: Option<PathBuf>,
        /// Cross-check the verdict by enumeration.
        #[arg(long)]
        verify: bool,
        /// Largest domain for which --verify enumerates.
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        cap: u64,
    },
    /// Randomized differential test of the library against itself.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Kind {
    D2n,
    Oc,
    So2dlpSuc,
    So2dlpFin,
    So2dlpArb,
    Successor,
    Finiteness,
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if let Some(code) = e.downcast_ref::<commands::Exit>() {
        return code.0;
    }
    match e.downcast_ref::<smk_core::Error>() {
        Some(smk_core::Error::ResourceLimit(_)) => 3,
        Some(smk_core::Error::Solver(_)) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Check { program, structure, why } => commands::check(&program, &structure, why),
        Command::Enumerate {
            program,
            structure,
            aux,
            cap,
        } => commands::enumerate(&program, &structure, &aux, cap),
        Command::Translate {
            kind,
            input,
            out,
            emit_mapping,
            smt,
            structure,
            size,
            int_order,
            normalize,
        } => commands::translate(&commands::TranslateArgs {
            kind,
            input,
            out,
            emit_mapping,
            smt,
            structure,
            size: size.map(|n| n as usize),
            int_order,
            normalize,
        }),
        Command::Solve {
            program,
            structure,
            solver,
            verify,
            cap,
        } => commands::solve(&program, &structure, solver.as_deref(), verify, cap as usize),
        Command::Selftest { seed } => selftest::run(seed),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("smk: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
