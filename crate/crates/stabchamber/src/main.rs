use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use stabchamber::cli::{self, Ctx};
use stabchamber::rat;

/// Exact wall-and-chamber computations for iterated blow-ups of the plane.
#[derive(Parser)]
#[command(name = "stabchamber", version, about)]
struct Args {
    /// Seed echoed into reports (sampling utilities are deterministic).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Wall perturbation size as a rational, e.g. 1/100.
    #[arg(long, global = true, default_value = "1/100")]
    eps: String,

    /// Include wall-clock timing in reports (breaks byte-for-byte
    /// reproducibility between runs).
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a configuration document against the structural rules.
    Validate { config: PathBuf },
    /// List every valid contraction with its generators.
    Contractions { config: PathBuf },
    /// Locate a class among chambers and walls; identifies the moduli
    /// surface of the skyscraper class.
    Locate {
        config: PathBuf,
        /// Class vector: n+1 rationals, H coefficient first.
        #[arg(num_args = 1.., required = true, allow_hyphen_values = true)]
        class: Vec<String>,
    },
    /// Chamber-adjacency graph with per-edge wall witnesses.
    Graph {
        config: PathBuf,
        /// Output format: json or dot.
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Region map of the plane origin + a u + b v, optionally as SVG.
    Slice {
        config: PathBuf,
        /// Origin class, quoted: "0 0".
        origin: String,
        /// First basis vector, quoted: "1 0".
        u: String,
        /// Second basis vector, quoted: "0 1".
        v: String,
        /// Samples per axis.
        #[arg(long, default_value_t = 41)]
        grid: usize,
        /// Half-width of the sampled window, as a rational.
        #[arg(long, default_value = "2")]
        window: String,
        /// Write an SVG rendering to this file.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Support-property quantities at a point of a chamber closure.
    Support {
        config: PathBuf,
        /// Contraction set, e.g. "1,2"; "-" for the identity.
        #[arg(allow_hyphen_values = true)]
        s: String,
        #[arg(num_args = 1.., required = true, allow_hyphen_values = true)]
        class: Vec<String>,
    },
    /// Piecewise-linear path walking the full contraction chain, one wall
    /// crossing per blow-down.
    MmpPath { config: PathBuf },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let eps = match rat::parse(&args.eps) {
        Ok(e) => e,
        Err(msg) => {
            eprintln!("error: --eps: {msg}");
            return ExitCode::from(2);
        }
    };
    let ctx = Ctx {
        seed: args.seed,
        eps,
        timing: args.timing,
    };
    let outcome = match &args.command {
        Command::Validate { config } => cli::cmd_validate(&ctx, config),
        Command::Contractions { config } => cli::cmd_contractions(&ctx, config),
        Command::Locate { config, class } => cli::cmd_locate(&ctx, config, class),
        Command::Graph { config, format } => cli::cmd_graph(&ctx, config, format),
        Command::Slice {
            config,
            origin,
            u,
            v,
            grid,
            window,
            svg,
        } => cli::cmd_slice(&ctx, config, origin, u, v, *grid, window, svg.as_deref()),
        Command::Support { config, s, class } => cli::cmd_support(&ctx, config, s, class),
        Command::MmpPath { config } => cli::cmd_mmp_path(&ctx, config),
    };
    match outcome {
        Ok(result) => {
            print!("{}", result.stdout);
            for (path, contents) in &result.files {
                if let Err(e) = std::fs::write(path, contents) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(result.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
