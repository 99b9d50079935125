use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use num_complex::Complex64;
use surface_beta::cli::{
    cmd_eval, cmd_mobius, cmd_residues, cmd_sweep, cmd_verify, parse_complex, parse_point, CliError, Mode,
    ResidueMethod, RunReport, RunSettings, SurfaceSpec,
};
use surface_beta::surface::SurfacePoint;
use surface_beta::verify::Probes;

#[derive(Parser)]
#[command(name = "surface-beta", version, about = "Beta functions, residues and Moebius energy of surfaces in R^3")]
struct Cli {
    /// Worker threads for outer quadrature; results do not depend on it
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Surface specification file (TOML)
    #[arg(long)]
    surface: PathBuf,
    /// Relative tolerance (overrides the file)
    #[arg(long)]
    tol: Option<f64>,
    /// Fixed outer quadrature level (overrides the file)
    #[arg(long)]
    level: Option<u32>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    Direct,
    Continued,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Closed,
    Numeric,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate B^u(s) at a point or B_M(s) over the surface
    Eval {
        #[command(flatten)]
        common: Common,
        /// Complex exponent, e.g. -3 or -3+0.5i
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Base point u,v[,chart]; omit for the global value
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
    },
    /// Residues at s = -2, -4, -6 at a point
    Residues {
        #[command(flatten)]
        common: Common,
        /// Base point u,v[,chart]
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, value_enum, default_value = "both")]
        method: MethodArg,
    },
    /// Evaluate along a segment in the complex plane and write CSV
    Sweep {
        #[command(flatten)]
        common: Common,
        /// First exponent of the segment
        #[arg(long, allow_hyphen_values = true)]
        from: String,
        /// Last exponent of the segment
        #[arg(long, allow_hyphen_values = true)]
        to: String,
        /// Number of sample points including both ends
        #[arg(long, default_value_t = 16)]
        steps: usize,
        /// Base point u,v[,chart]; omit for the global value
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
    /// Renormalised Moebius energy (finite part of B_M at s = -4)
    Mobius {
        #[command(flatten)]
        common: Common,
    },
    /// Run the acceptance checks
    Verify {
        /// Run only these checks (comma separated)
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
    },
}

fn load(common: &Common) -> Result<(SurfaceSpec, RunSettings), CliError> {
    let spec = SurfaceSpec::from_file(&common.surface)?;
    let settings = RunSettings::resolve(&spec, common.tol, common.level)?;
    Ok((spec, settings))
}

fn point(text: Option<&str>) -> Result<Option<SurfacePoint>, CliError> {
    text.map(parse_point).transpose()
}

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Auto => Mode::Auto,
        ModeArg::Direct => Mode::Direct,
        ModeArg::Continued => Mode::Continued,
    }
}

fn run(cli: Cli, echo: &str) -> Result<RunReport, CliError> {
    match cli.command {
        Command::Eval { common, s, point: p, mode: m } => {
            let (spec, settings) = load(&common)?;
            cmd_eval(&spec, parse_complex(&s)?, point(p.as_deref())?, mode(m), &settings)
        }
        Command::Residues { common, point: p, method } => {
            let (spec, settings) = load(&common)?;
            let method = match method {
                MethodArg::Closed => ResidueMethod::Closed,
                MethodArg::Numeric => ResidueMethod::Numeric,
                MethodArg::Both => ResidueMethod::Both,
            };
            cmd_residues(&spec, parse_point(&p)?, method, &settings)
        }
        Command::Sweep { common, from, to, steps, point: p, mode: m, out } => {
            let (spec, settings) = load(&common)?;
            let (a, b): (Complex64, Complex64) = (parse_complex(&from)?, parse_complex(&to)?);
            cmd_sweep(&spec, a, b, steps, point(p.as_deref())?, mode(m), &settings, &out)
        }
        Command::Mobius { common } => {
            let (spec, settings) = load(&common)?;
            cmd_mobius(&spec, &settings)
        }
        Command::Verify { only } => {
            let (mut report, status) = cmd_verify(&Probes::default(), &only);
            report.command = echo.to_string();
            println!("{report}");
            status.map(|_| RunReport::default())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("error: cannot configure thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    let is_verify = matches!(cli.command, Command::Verify { .. });
    let echo = std::env::args().collect::<Vec<_>>().join(" ");
    match run(cli, &echo) {
        Ok(mut report) => {
            if !is_verify {
                report.command = echo;
                println!("{report}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
