//! `quatcm`: command-line access to the quatcm-core computations.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use quatcm_core::Rational;

use output::Format;

#[derive(Parser)]
#[command(name = "quatcm", version, about = "Quaternion algebras, CM orders and isogeny degree bounds")]
struct Cli {
    /// Output format (json unless stated otherwise per subcommand).
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    output: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.trim().parse::<Rational>().map_err(|e| format!("invalid rational '{s}': {e}"))
}

fn parse_coords(s: &str) -> Result<[Rational; 4], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected 4 comma-separated coordinates, got {}", parts.len()));
    }
    let v = parts.into_iter().map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    Ok(v.try_into().expect("length checked"))
}

/// `(a, b / Q)` given directly, or the algebra of a given discriminant.
#[derive(Args, Clone)]
pub struct AlgebraArgs {
    /// First parameter, i^2 = a.
    #[arg(short = 'a', value_parser = parse_rational, requires = "b", conflicts_with = "disc")]
    a: Option<Rational>,
    /// Second parameter, j^2 = b.
    #[arg(short = 'b', value_parser = parse_rational, requires = "a")]
    b: Option<Rational>,
    /// Discriminant of an indefinite algebra; a presentation is chosen.
    #[arg(long)]
    disc: Option<u64>,
}

#[derive(Subcommand)]
#[command(allow_negative_numbers = true)]
enum Cmd {
    /// Hilbert symbol (a, b)_p; p may be "inf".
    #[command(allow_negative_numbers = true)]
    Hilbert {
        #[arg(short = 'a')]
        a: i64,
        #[arg(short = 'b')]
        b: i64,
        #[arg(short = 'p')]
        p: String,
    },
    /// Ramification set and discriminant of (a, b / Q).
    #[command(allow_negative_numbers = true)]
    Disc {
        #[arg(short = 'a', value_parser = parse_rational)]
        a: Rational,
        #[arg(short = 'b', value_parser = parse_rational)]
        b: Rational,
    },
    /// Whether Q(sqrt(-d)) splits the algebra.
    #[command(allow_negative_numbers = true)]
    Splits {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        d: u64,
    },
    /// Presentations (disc L, theta / Q); with --theta, check a single value.
    #[command(allow_negative_numbers = true)]
    Theta {
        #[arg(long)]
        disc: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        theta: Option<i64>,
    },
    /// Idempotent of D (x) L attached to a trace-zero g.
    #[command(allow_negative_numbers = true)]
    Idempotent {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Coordinates of g in the basis 1, i, j, ij.
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        g: [Rational; 4],
    },
    /// Identities between e, conj(e) and iota(alpha), and the element u.
    #[command(allow_negative_numbers = true)]
    Identities {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        g: [Rational; 4],
    },
    /// Standard and maximal orders.
    #[command(allow_negative_numbers = true)]
    Order {
        #[command(flatten)]
        alg: AlgebraArgs,
    },
    /// Conductor of the embedding given by g, or the optimal embedding criterion.
    #[command(allow_negative_numbers = true)]
    Embed {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long, value_parser = parse_coords, allow_hyphen_values = true)]
        g: Option<[Rational; 4]>,
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        c: Option<u64>,
    },
    /// Reduced forms of discriminant c^2 disc L (or --discriminant).
    #[command(allow_negative_numbers = true)]
    Classgroup {
        #[arg(long, required_unless_present = "discriminant")]
        d: Option<u64>,
        #[arg(long, default_value_t = 1)]
        c: u64,
        #[arg(long, conflicts_with = "d")]
        discriminant: Option<i64>,
    },
    /// Ideal classes of O_{L,c} by multiplicator ring; with --gamma, count A_{D,c}.
    Idealset {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        c: u64,
        #[arg(long, value_delimiter = ',', requires = "disc")]
        gamma: Option<Vec<u64>>,
        #[arg(long)]
        disc: Option<u64>,
    },
    /// Degree bounds for c, d (and m).
    Bounds {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        d: u64,
        #[arg(long)]
        m: Option<u64>,
        #[arg(long, default_value_t = 2)]
        g: u32,
    },
    /// One row per (disc, d, c) over a grid.
    Tabulate {
        #[arg(long, value_delimiter = ',', required = true)]
        disc: Vec<u64>,
        #[arg(long)]
        d_max: u64,
        #[arg(long, default_value_t = 1)]
        c_max: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.cmd, cli.format) {
        Ok(out) => {
            let text = output::render(&out, cli.format.unwrap_or(Format::Json));
            if let Err(e) = output::emit(&text, cli.output.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(commands::Failure::Usage(msg)) => {
            use clap::CommandFactory;
            Cli::command().error(clap::error::ErrorKind::MissingRequiredArgument, msg).exit()
        }
        Err(commands::Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
