//! `harnack`: compute, verify and render Harnack curves, amoebas and spines.
//!
//! Exit codes: 0 on success, 1 on invalid input or a failed check, 2 on a
//! numerical failure. Errors are printed to stderr as one JSON object per line.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "harnack", version, about = "Harnack curves, amoebas, tropical spines and their moduli")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Input and output paths; `-` or no `--out` writes to stdout.
#[derive(Args, Debug, Clone)]
pub struct Io {
    /// Input JSON file.
    #[arg(long = "in", value_name = "PATH")]
    pub input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// Raster options. Coordinates are `(log|z|, log|w|)`; the window defaults to
/// the tropical approximation's vertices padded by 6 on every side.
#[derive(Args, Debug, Clone)]
pub struct Raster {
    /// Window `x0,x1,y0,y1` in log coordinates.
    #[arg(long, value_name = "X0,X1,Y0,Y1")]
    pub window: Option<String>,
    /// Pixels per side of the square raster.
    #[arg(long, default_value_t = harnack::amoeba::DEFAULT_RES)]
    pub res: usize,
    /// Phase samples per column over [0, 2π).
    #[arg(long, default_value_t = harnack::amoeba::DEFAULT_PHASES)]
    pub phases: usize,
    /// Relative tolerance of the maximal-area test `|area / (π²·area(Δ)) − 1| ≤ tol`.
    #[arg(long, default_value_t = harnack::amoeba::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Polygon statistics `{m, n, g, area}` from `{"vertices": [[x,y],...]}`.
    ///
    /// m counts vertices, n boundary lattice points, g interior lattice points;
    /// the area is exact, as a rational string.
    Polygon {
        #[command(flatten)]
        io: Io,
    },
    /// Random rational Harnack configuration on a polygon.
    ///
    /// Roots are strictly increasing in the anticlockwise order of the sides,
    /// starting from the lexicographically smallest vertex.
    Sample {
        #[command(flatten)]
        io: Io,
        /// Seed for the root sampler; required.
        #[arg(long)]
        seed: u64,
    },
    /// Tentacle positions `ρ_i = Σ_j (u_j ∧ u_i) log|a_i − a_j|` of a configuration.
    Rho {
        #[command(flatten)]
        io: Io,
    },
    /// Exact Jacobian D of ρ with its rank and floating eigenvalues.
    Jacobian {
        #[command(flatten)]
        io: Io,
    },
    /// Decomposes D into positive multiples of T-matrices and verifies it exactly.
    ///
    /// Accepts a polygon or a configuration; only the normal sequence is used.
    Tdecomp {
        #[command(flatten)]
        io: Io,
    },
    /// Implicit equation of a configuration, with integer coefficients.
    Implicitize {
        #[command(flatten)]
        io: Io,
    },
    /// Amoeba raster (run-length JSON) and the maximal-area test.
    Amoeba {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        raster: Raster,
    },
    /// Spine heights `c_v`, the spine as a plane tropical curve, and its moduli point.
    ///
    /// The spine is the corner locus of `max_v (⟨v, x⟩ + c_v)`.
    Spine {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        raster: Raster,
    },
    /// Regular triangulations of a point set with GKZ vectors (at most 12 points).
    ///
    /// Input is a polygon, whose lattice points are used, or `{"points": [[x,y],...]}`.
    Subdivisions {
        #[command(flatten)]
        io: Io,
    },
    /// Face lattice of the secondary polytope with cell dimensions (at most 12 points).
    Secondary {
        #[command(flatten)]
        io: Io,
    },
    /// Validates a Harnack mesh, or writes an example mesh.
    ///
    /// Validation checks exact coefficient agreement on shared points and runs
    /// the area and component tests on every facet curve.
    Mesh {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        raster: Raster,
        /// Also glue the facet spines into the extended tropical curve.
        #[arg(long)]
        spine: bool,
        /// Write an example mesh instead: `cross-diagonal` (needs --seed) or `cross-star`.
        #[arg(long, value_name = "NAME")]
        example: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Patchworks `f_t = Σ t^{h(v)} a_v x^v` over a sweep of t in (0, 1].
    Patchwork {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        raster: Raster,
        /// Comma-separated values of t.
        #[arg(long = "t-sweep", value_name = "T,...", default_value = "0.1,0.01,0.001")]
        t_sweep: String,
        /// Also compare the spines with the glued facet spines.
        #[arg(long)]
        limit: bool,
    },
    /// Runs a verification suite; exits 1 if any check fails.
    Verify {
        #[command(flatten)]
        io: Io,
        /// `paper` runs every acceptance check; `none` runs only the polygon checks.
        #[arg(long, default_value = "paper")]
        suite: String,
        /// Adds checks on this polygon.
        #[arg(long, value_name = "PATH")]
        polygon: Option<PathBuf>,
        /// Seed for the polygon checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// SVG of an amoeba with its spine and a Newton polygon inset.
    Render {
        /// Polynomial JSON whose amoeba is drawn.
        #[arg(long, value_name = "PATH")]
        amoeba: PathBuf,
        /// Overlay the spine.
        #[arg(long)]
        spine: bool,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
        #[command(flatten)]
        raster: Raster,
    },
}

fn dispatch(cmd: Command) -> Result<bool, CliError> {
    use commands::*;
    match cmd {
        Command::Polygon { io } => polygon(&io),
        Command::Sample { io, seed } => sample(&io, seed),
        Command::Rho { io } => rho(&io),
        Command::Jacobian { io } => jacobian(&io),
        Command::Tdecomp { io } => tdecomp(&io),
        Command::Implicitize { io } => implicitize(&io),
        Command::Amoeba { io, raster } => amoeba(&io, &raster),
        Command::Spine { io, raster } => spine(&io, &raster),
        Command::Subdivisions { io } => subdivisions(&io),
        Command::Secondary { io } => secondary(&io),
        Command::Mesh { io, raster, spine, example, seed } => mesh(&io, &raster, spine, example.as_deref(), seed),
        Command::Patchwork { io, raster, t_sweep, limit } => patchwork(&io, &raster, &t_sweep, limit),
        Command::Verify { io, suite, polygon, seed } => verify(&io, &suite, polygon.as_deref(), seed),
        Command::Render { amoeba, spine, out, raster } => render::render(&amoeba, spine, out.as_deref(), &raster),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let msg = e.kind().to_string();
            let detail = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            eprintln!("{}", json!({ "error": "usage", "message": msg, "detail": detail }));
            return ExitCode::from(1);
        }
    };
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
