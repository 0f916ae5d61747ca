//! Convergence sweeps and basis dumps for weighted ball polynomials.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 on runtime errors.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sobolev_ball::bases::{harmonic_basis, lebesgue_basis, sobolev_basis};
use sobolev_ball::experiment::{emit_report, report_csv, run_convergence, ExperimentConfig};
use sobolev_ball::poly::parse_rational;
use sobolev_ball::{Alpha, Error};

#[derive(Parser, Debug)]
#[command(name = "sobolev-ball", version, about = "Projection error sweeps on the unit ball")]
struct Cli {
    /// Ambient dimension (1, 2 or 3).
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Weight exponent as p/q, must exceed -1.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: String,
    /// Largest projection degree.
    #[arg(long, default_value_t = 16)]
    nmax: usize,
    /// exp_x1, exp_x1(c), abs_x1, weight_power(s) or a polynomial in x1..xd.
    #[arg(long, default_value = "exp_x1")]
    function: String,
    /// lebesgue or sobolev.
    #[arg(long, default_value = "sobolev")]
    projector: String,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print a basis instead: d n alpha space, with space one of
    /// V(alpha), V(alpha,1) or H.
    #[arg(long, num_args = 4, value_names = ["D", "N", "ALPHA", "SPACE"], allow_hyphen_values = true)]
    dump_basis: Option<Vec<String>>,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::QuadratureTooCoarse { .. } | Error::InconsistentGradient { .. } | Error::Singular(_) => {
                Failure::Runtime(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn dump_basis(args: &[String]) -> Result<String, Failure> {
    let d: usize = args[0]
        .parse()
        .map_err(|_| Failure::Usage(format!("bad dimension {:?}", args[0])))?;
    let n: usize = args[1]
        .parse()
        .map_err(|_| Failure::Usage(format!("bad degree {:?}", args[1])))?;
    let alpha = Alpha::new(d, parse_rational(&args[2]).map_err(Error::from)?)?;
    let basis = match args[3].as_str() {
        "V(alpha)" | "lebesgue" => (*lebesgue_basis(d, n, &alpha)?).clone(),
        "V(alpha,1)" | "sobolev" => (*sobolev_basis(d, n, &alpha)?).clone(),
        "H" | "harmonic" => harmonic_basis(d, n),
        other => return Err(Failure::Usage(format!("unknown space {other:?}"))),
    };
    let mut text = basis.to_text();
    if let Some(first) = text.lines().next() {
        if args[3] == "H" || args[3] == "harmonic" {
            let header = format!("{first} alpha={}", args[2]);
            text = text.replacen(first, &header, 1);
        }
    }
    Ok(text)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let text = if let Some(args) = &cli.dump_basis {
        dump_basis(args)?
    } else {
        let cfg = ExperimentConfig::new(cli.dim, &cli.alpha, cli.nmax, &cli.function, &cli.projector)?;
        let records = run_convergence(&cfg)?;
        if let Some(path) = &cli.out {
            emit_report(&records, path)?;
            return Ok(());
        }
        report_csv(&records)
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Runtime(e.to_string())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Runtime(e.to_string())),
    }
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
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
