use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use metallic_cli::{
    exit_code, run, run_demo, CheckName, CliError, Overrides, Report, Scenario, EXIT_FAIL,
    EXIT_INPUT, EXIT_PASS,
};
use metallic_core::{family_2d, Family2DSpec, Family2DVariant, Params};

#[derive(Parser)]
#[command(name = "metallic", version, about = "Verify metallic structures J^2 = aJ + bI on a chart")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file.
    Verify {
        scenario: PathBuf,
        #[command(flatten)]
        run: RunOptions,
        /// Accept positive real a, b (exploratory; not restricted to integers).
        #[arg(long)]
        allow_real_params: bool,
    },
    /// Run a built-in demo: r2_example, family2d, clifford, reflection, triple, obata.
    Demo {
        name: String,
        #[command(flatten)]
        run: RunOptions,
    },
    /// Print a member of the two-dimensional metallic matrix family.
    Family {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        /// Upper-left entry (generic-r-s, triangular, diagonal).
        #[arg(long, allow_hyphen_values = true)]
        r: Option<f64>,
        /// Lower-left entry for the generic variants, off-diagonal entry for triangular ones.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        s: f64,
        /// Upper-left entry for generic-s-t.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        #[arg(long, default_value = "generic-r-s")]
        variant: Family2DVariant,
        #[arg(long)]
        allow_real_params: bool,
    },
    /// List the available checks and the fields each needs.
    ListChecks,
}

#[derive(Args)]
struct RunOptions {
    /// Tolerance for every check (replaces scenario tolerances).
    #[arg(long)]
    tol: Option<f64>,
    /// Number of sample points.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    report: Format,
    /// Write the report to a file instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    /// Canonical JSON.
    Structured,
}

impl RunOptions {
    fn overrides(&self, allow_real_params: bool) -> Overrides {
        Overrides {
            tolerance: self.tol,
            samples: self.samples,
            seed: self.seed,
            allow_real_params,
        }
    }

    fn emit(&self, report: &Report) -> Result<(), CliError> {
        let body = match self.report {
            Format::Text => report.text(),
            Format::Structured => report.canonical_json() + "\n",
        };
        match &self.output {
            Some(path) => std::fs::write(path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
            None => {
                print!("{body}");
                Ok(())
            }
        }
    }
}

fn family(
    a: f64,
    b: f64,
    r: Option<f64>,
    s: f64,
    t: Option<f64>,
    variant: Family2DVariant,
    allow_real: bool,
) -> Result<i32, String> {
    let params = Params::from_values(a, b, allow_real).map_err(|e| e.to_string())?;
    let first = match variant {
        Family2DVariant::GenericST => t.ok_or("--t is required for generic-s-t")?,
        _ => r.ok_or("--r is required for this variant")?,
    };
    let j = family_2d(&Family2DSpec {
        params,
        r: first,
        s,
        variant,
    })
    .map_err(|e| e.to_string())?;
    println!("variant {variant}, a = {a}, b = {b}, rho = {:.17}", params.rho());
    for i in 0..2 {
        println!("[{:>24.17e} {:>24.17e}]", j[(i, 0)], j[(i, 1)]);
    }
    let residual = params.metallic_residual(&j);
    println!("|J^2 - aJ - bI|_max = {residual:.3e}");
    println!("|(J - rho I)(J - (a - rho) I)|_max = {:.3e}", params.spectrum_residual(&j));
    Ok(if residual <= 1e-12 * (1.0 + j.amax().powi(2)) {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify {
            scenario,
            run: opts,
            allow_real_params,
        } => Scenario::load(&scenario, &opts.overrides(allow_real_params))
            .and_then(|s| run(&s))
            .and_then(|r| opts.emit(&r).map(|_| exit_code(&r)))
            .unwrap_or_else(|e| {
                eprintln!("error: {e}");
                EXIT_INPUT
            }),
        Command::Demo { name, run: opts } => run_demo(&name, &opts.overrides(false))
            .and_then(|r| opts.emit(&r).map(|_| exit_code(&r)))
            .unwrap_or_else(|e| {
                eprintln!("error: {e}");
                EXIT_INPUT
            }),
        Command::Family {
            a,
            b,
            r,
            s,
            t,
            variant,
            allow_real_params,
        } => family(a, b, r, s, t, variant, allow_real_params).unwrap_or_else(|e| {
            eprintln!("error: {e}");
            EXIT_INPUT
        }),
        Command::ListChecks => {
            for c in CheckName::ALL {
                println!("{:<24} needs: {:<48} {}", c.name(), c.needs(), c.about());
            }
            EXIT_PASS
        }
    };
    ExitCode::from(code as u8)
}
