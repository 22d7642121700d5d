use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spdc::cli::{self, RunConfig};

#[derive(Parser)]
#[command(
    name = "spdc",
    version,
    about = "SPDC biphoton spectra and HOM/MZ coincidence traces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Flat key=value config file (`#` starts a comment).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override any config key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, global = true)]
    length_um: Option<String>,
    #[arg(long, global = true)]
    pump_bw: Option<String>,
    #[arg(long, global = true)]
    omega_p: Option<String>,
    #[arg(long, global = true)]
    gamma: Option<String>,
    /// closed | quadrature | both
    #[arg(long, global = true)]
    method: Option<String>,
    /// rad_ps | si (angular frequencies in s⁻¹)
    #[arg(long, global = true)]
    units: Option<String>,
    /// Crystal file for `match`.
    #[arg(long, global = true)]
    crystal: Option<String>,
    /// Output file; stdout when omitted.
    #[arg(short, long, global = true)]
    output: Option<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// |A(ω_s, ω_i)| on a grid around degeneracy.
    Spectrum,
    /// HOM coincidence trace.
    Hom,
    /// MZ coincidence trace.
    Mz,
    /// Visibility sweep over pump bandwidth or crystal length.
    Visibility,
    /// Solve a crystal file for extended phase matching.
    Match,
    /// Closed form against quadrature on the reference parameter sets.
    Validate,
}

impl Cli {
    fn flags(&self) -> Result<Vec<(String, String)>, spdc::Error> {
        let mut kv = Vec::new();
        for s in &self.set {
            let (k, v) = s.split_once('=').ok_or_else(|| {
                spdc::Error::InvalidInput(format!("--set expects KEY=VALUE, got `{s}`"))
            })?;
            kv.push((k.trim().to_string(), v.trim().to_string()));
        }
        let named = [
            ("theta", &self.theta),
            ("length_um", &self.length_um),
            ("pump_bw", &self.pump_bw),
            ("omega_p", &self.omega_p),
            ("gamma", &self.gamma),
            ("method", &self.method),
            ("units", &self.units),
            ("crystal", &self.crystal),
            ("output", &self.output),
        ];
        kv.extend(
            named
                .into_iter()
                .filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v))),
        );
        Ok(kv)
    }
}

fn run(args: &Cli) -> Result<bool, spdc::Error> {
    let cfg: RunConfig = cli::load_config(args.config.as_deref(), &args.flags()?)?;
    let (text, ok) = match args.command {
        Command::Spectrum => (cli::cmd_spectrum(&cfg)?, true),
        Command::Hom => (cli::cmd_hom(&cfg)?, true),
        Command::Mz => (cli::cmd_mz(&cfg)?, true),
        Command::Visibility => (cli::cmd_visibility(&cfg)?, true),
        Command::Match => (cli::cmd_match(&cfg)?, true),
        Command::Validate => cli::cmd_validate(&cfg)?,
    };
    cli::emit(&cfg, &text)?;
    Ok(ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!(
                "error: closed form and quadrature disagree beyond {:e}",
                cli::VALIDATION_TOL
            );
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code(&e) as u8)
        }
    }
}
