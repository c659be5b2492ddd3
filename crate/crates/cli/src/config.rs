use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gapbound_core::moc_pde::FluxSpec;

pub const DEFAULT_ORACLE_GRID: usize = 4096;
pub const DEFAULT_FLOW_GRID: usize = 128;

/// Parsed command line. Every configuration renders to a canonical argument
/// list that parses back to an equal configuration.
#[derive(Debug, Clone, PartialEq, Parser)]
#[command(
    name = "gapbound",
    version,
    about = "Sharp first-eigenvalue bounds and modulus-of-continuity flows for Ric >= (n-1)kappa, diam = D",
    after_help = "Defaults: tol=1e-9, grid=4096 (oracle; flows use 128 cells), flux=heat, cfl=0.4, format=json.\n\
                  Exit codes: 0 success, 1 I/O failure, 2 invalid parameters, 3 non-convergence."
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Sharp eigenvalue mu(n, kappa, D) by shooting.
    Eigen {
        /// Report the limiting value n*kappa at D = pi/sqrt(kappa) instead of solving.
        #[arg(long)]
        sphere_limit: bool,
        /// Also report the Richardson-extrapolated finite-difference value on --grid points.
        #[arg(long)]
        oracle: bool,
    },
    /// Sharp value next to the classical lower bounds.
    Bounds,
    /// Evolve a seeded concave profile under the one-dimensional comparison flow.
    Evolve,
    /// Fit the oscillation decay rate of seeded odd data on the warped model.
    Decay,
    /// Check that the evolving profile is a modulus of continuity for the model flow.
    VerifyMoc,
    /// Ricci curvatures of the warped model metric.
    Ricci {
        /// Warp amplitude [default: min(1, 1/(2 kappa)) for kappa > 0, else 1].
        #[arg(long)]
        a: Option<f64>,
    },
    /// Bounds report over the product of comma-separated --n, --kappa, --diameter lists.
    Sweep,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct Options {
    /// Dimension (comma-separated list for sweep).
    #[arg(long, global = true, value_delimiter = ',')]
    pub n: Vec<u32>,
    /// Lower Ricci bound kappa (comma-separated list for sweep).
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub kappa: Vec<f64>,
    /// Diameter D (comma-separated list for sweep).
    #[arg(long, global = true, value_delimiter = ',')]
    pub diameter: Vec<f64>,
    /// Flux: heat or plap:P[:EPS]; a missing EPS means 1e-8 * osc(initial data) / D.
    #[arg(long, global = true, default_value = "heat", value_parser = parse_flux)]
    pub flux: FluxSpec,
    /// Eigenvalue tolerance.
    #[arg(long, global = true, default_value = "1e-9")]
    pub tol: f64,
    /// Oracle grid points, or cells on [0, D/2] for flows [default: 4096 for the oracle, 128 for flows].
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Final time [default: 6/mu for decay, 1 otherwise].
    #[arg(long = "t-end", global = true)]
    pub t_end: Option<f64>,
    /// Time-step safety factor, in (0, 0.5].
    #[arg(long, global = true, default_value = "0.4")]
    pub cfl: f64,
    /// Number of output times [default: 200 for decay, 20 otherwise].
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Seed for randomised initial data.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

fn parse_flux(s: &str) -> Result<FluxSpec, String> {
    s.parse().map_err(|e: gapbound_core::Error| e.to_string())
}

fn join<T: ToString>(values: &[T]) -> String {
    values
        .iter()
        .map(T::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

impl RunConfig {
    pub fn try_parse_args<I, T>(argv: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        Self::try_parse_from(argv)
    }

    pub fn subcommand_name(&self) -> &'static str {
        match self.command {
            Command::Eigen { .. } => "eigen",
            Command::Bounds => "bounds",
            Command::Evolve => "evolve",
            Command::Decay => "decay",
            Command::VerifyMoc => "verify-moc",
            Command::Ricci { .. } => "ricci",
            Command::Sweep => "sweep",
        }
    }

    /// Canonical argument list, including the program name and every default.
    pub fn canonical_args(&self) -> Vec<String> {
        let o = &self.options;
        let mut args = vec!["gapbound".to_string(), self.subcommand_name().to_string()];
        match self.command {
            Command::Eigen {
                sphere_limit,
                oracle,
            } => {
                if sphere_limit {
                    args.push("--sphere-limit".into());
                }
                if oracle {
                    args.push("--oracle".into());
                }
            }
            Command::Ricci { a: Some(a) } => args.extend(["--a".into(), a.to_string()]),
            _ => {}
        }
        let mut flag = |name: &str, value: String| {
            args.push(format!("--{name}"));
            args.push(value);
        };
        if !o.n.is_empty() {
            flag("n", join(&o.n));
        }
        if !o.kappa.is_empty() {
            flag("kappa", join(&o.kappa));
        }
        if !o.diameter.is_empty() {
            flag("diameter", join(&o.diameter));
        }
        flag("flux", o.flux.to_string());
        flag("tol", o.tol.to_string());
        if let Some(grid) = o.grid {
            flag("grid", grid.to_string());
        }
        if let Some(t_end) = o.t_end {
            flag("t-end", t_end.to_string());
        }
        flag("cfl", o.cfl.to_string());
        if let Some(samples) = o.samples {
            flag("samples", samples.to_string());
        }
        flag("seed", o.seed.to_string());
        if let Some(out) = &o.out {
            flag("out", out.display().to_string());
        }
        flag(
            "format",
            o.format
                .to_possible_value()
                .expect("format value")
                .get_name()
                .to_string(),
        );
        args
    }

    /// The canonical argument list without the program name, space separated.
    pub fn canonical(&self) -> String {
        self.canonical_args()[1..].join(" ")
    }
}
