//! `congr`: q-expansions, L-values, Ikeda lift coefficients and congruence certification.

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Float, Integer, Rational};

use congr_core::certify::congruence_primes;
use congr_core::error::Error;
use congr_core::exact::format_factored;
use congr_core::heckechar::{cm_form, ImagQuadField};
use congr_core::ikeda::{lift_coeff, nonvanishing_sweep, LiftContext};
use congr_core::lseries::specfile::{parse_form, SpecFile};
use congr_core::lseries::{
    afe_eval, default_probes, solve_root_number, AlgContext, Calibration, Complex, RootNumber, DEFAULT_DIGITS,
};
use congr_core::qexp::{unique_level_one_form, QExpansion};

use report::Output;

#[derive(Parser)]
#[command(name = "congr", version, about = "Congruence primes for Ikeda lifts")]
struct Cli {
    /// Working precision in decimal digits (at least 60).
    #[arg(long, global = true, env = "CONGR_DIGITS")]
    digits: Option<u32>,
    /// Worker threads; all cores by default.
    #[arg(long, global = true, env = "CONGR_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fourier coefficients of a named eigenform.
    Qexp {
        /// s26, level1:<k> or cm:<disc>:<u>.
        #[arg(long, default_value = "s26")]
        form: String,
        #[arg(long, default_value_t = 6)]
        terms: usize,
        #[arg(long)]
        json: bool,
    },
    /// Theta series of a Hecke character of an imaginary quadratic field.
    Cmform {
        #[arg(long, allow_hyphen_values = true)]
        disc: i64,
        #[arg(long, allow_hyphen_values = true)]
        u: i64,
        #[arg(long, default_value_t = 19)]
        terms: usize,
        #[arg(long)]
        json: bool,
    },
    /// L(s) for an L-function described by a spec file.
    Lvalue {
        #[arg(long)]
        spec: PathBuf,
        /// Real part of s.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Imaginary part of s.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        im: String,
        #[arg(long)]
        json: bool,
    },
    /// Normalized critical values recognized as rationals.
    Lalg {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long)]
        j: i64,
        /// The level-one eigenform f.
        #[arg(long, default_value = "s26")]
        form: String,
        /// The CM form g for convolutions, as cm:<disc>:<u>.
        #[arg(long, default_value = "cm:-3:-6")]
        second_form: String,
        #[arg(long)]
        json: bool,
    },
    /// Fourier coefficients of Ikeda lifts.
    Ikeda(IkedaArgs),
    /// Certifies congruence primes for a configuration.
    Certify {
        #[arg(long, conflicts_with = "preset")]
        config: Option<PathBuf>,
        /// Shipped configuration: sec9.
        #[arg(long)]
        preset: Option<String>,
        /// Writes the JSON report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Sym2,
    Conv,
}

#[derive(Args)]
struct IkedaArgs {
    #[command(subcommand)]
    action: IkedaAction,
    #[arg(long, default_value_t = 5, global = true)]
    n: i64,
    #[arg(long, default_value_t = 13, global = true)]
    k: i64,
    #[arg(long, default_value_t = -3, allow_hyphen_values = true, global = true)]
    disc: i64,
}

#[derive(Subcommand)]
enum IkedaAction {
    /// Normalized lift coefficient at gamma(h) = gamma.
    Coeff {
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long)]
        json: bool,
    },
    /// Smallest inert p with a(p) nonzero mod ell.
    Sweep {
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 100)]
        bound: u64,
        #[arg(long)]
        json: bool,
    },
}

/// Usage errors exit with 2, computation errors with 1.
enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Res<ExitCode> {
    if let Some(d) = cli.digits {
        if d < 60 {
            return Err(Failure::Usage(format!("--digits {d} is below the minimum of 60")));
        }
    }
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let digits = cli.digits.unwrap_or(DEFAULT_DIGITS);
    match cli.command {
        Command::Qexp { form, terms, json } => {
            let f = form_with_terms(&form, terms)?;
            Output::coefficients(&form, &f, terms).emit(json);
        }
        Command::Cmform { disc, u, terms, json } => {
            let field = ImagQuadField::new(disc).map_err(|e| Failure::Usage(e.to_string()))?;
            let g = cm_form(&field, u, terms)?;
            Output::coefficients(&format!("cm:{disc}:{u}"), &g, terms).emit(json);
        }
        Command::Lvalue { spec, s, im, json } => lvalue(&spec, &s, &im, digits, json)?,
        Command::Lalg { which, j, form, second_form, json } => lalg(which, j, &form, &second_form, digits, json)?,
        Command::Ikeda(args) => ikeda(args)?,
        Command::Certify { config, preset, json } => {
            let mut cfg = match (config, preset) {
                (Some(path), None) => config::load_config(&path)?,
                (None, Some(name)) => config::preset(&name)?,
                (None, None) => return Err(Failure::Usage("one of --config or --preset is required".into())),
                (Some(_), Some(_)) => unreachable!(),
            };
            if let Some(d) = cli.digits {
                cfg.precision_digits = d;
                config::validate(&cfg)?;
            }
            let run = congruence_primes(&cfg)?;
            print!("{}", report::certify_text(&run));
            if let Some(path) = json {
                std::fs::write(&path, report::to_json(&run))
                    .map_err(|e| Failure::Compute(Error::Unsupported(format!("{}: {e}", path.display()))))?;
            }
            return Ok(if run.certified().is_empty() { ExitCode::from(1) } else { ExitCode::SUCCESS });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn form_with_terms(name: &str, terms: usize) -> Res<QExpansion> {
    match parse_form(name, terms.max(6)) {
        Ok(f) => Ok(f),
        Err(Error::ConfigInvalid(msg)) => Err(Failure::Usage(msg.join("; "))),
        Err(e) => Err(e.into()),
    }
}

fn parse_float(s: &str, prec: u32, what: &str) -> Res<Float> {
    let parsed = Float::parse(s).map_err(|_| Failure::Usage(format!("{what} = {s:?} is not a number")))?;
    Ok(Float::with_val(prec, parsed))
}

fn lvalue(path: &PathBuf, s: &str, im: &str, digits: u32, json: bool) -> Res<()> {
    if !path.exists() {
        return Err(Failure::Usage(format!("spec file {} not found", path.display())));
    }
    let file = SpecFile::load(path).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut spec = match file.build() {
        Ok(s) => s,
        Err(Error::ConfigInvalid(msg)) => return Err(Failure::Usage(msg.join("; "))),
        Err(e) => return Err(e.into()),
    };
    let prec = (digits as f64 * 3.33) as u32 + 64;
    let point = Complex::new(parse_float(s, prec, "s")?, parse_float(im, prec, "im")?);
    let solved = matches!(spec.root_number, RootNumber::Unknown);
    if solved {
        let eps = solve_root_number(&spec, default_probes(&spec), digits.min(60))?;
        spec.root_number = RootNumber::Known(eps);
    }
    let value = afe_eval(&spec, &point, digits)?;
    Output::lvalue(&spec, &value, solved).emit(json);
    Ok(())
}

fn lalg(which: Which, j: i64, form: &str, second: &str, digits: u32, json: bool) -> Res<()> {
    let f = form_with_terms(form, congr_core::qexp::DEFAULT_TRUNCATION)?;
    let mut ctx = AlgContext::new(&f, digits, Calibration::default())?;
    let v = match which {
        Which::Sym2 => ctx.lalg_sym2(j)?,
        Which::Conv => {
            let g = form_with_terms(second, congr_core::qexp::DEFAULT_TRUNCATION)?;
            let spec = ctx.conv_setup(&g)?;
            ctx.lalg_conv(&spec, &g, j)?
        }
    };
    Output::alg(&v, ctx.den_digits).emit(json);
    Ok(())
}

fn ikeda(args: IkedaArgs) -> Res<()> {
    let ctx = LiftContext::new(args.n, args.k, args.disc).map_err(|e| Failure::Usage(e.to_string()))?;
    if ctx.n % 2 == 0 {
        return Err(Failure::Compute(Error::Unsupported("only odd n is automated".into())));
    }
    match args.action {
        IkedaAction::Coeff { gamma, json } => {
            let g: Integer =
                gamma.parse().map_err(|_| Failure::Usage(format!("gamma = {gamma:?} is not an integer")))?;
            let bound = Integer::from(g.abs_ref())
                .to_usize()
                .filter(|&b| b <= 10_000_000)
                .ok_or_else(|| Failure::Usage(format!("|gamma| = {gamma} is too large")))?;
            let f = unique_level_one_form(ctx.phi_weight(), bound.max(6))?;
            let c = lift_coeff(&g, &ctx, &f)?;
            Output::lift(&ctx, &g, &c).emit(json);
        }
        IkedaAction::Sweep { ell, bound, json } => {
            let f = unique_level_one_form(ctx.phi_weight(), (bound as usize).max(6))?;
            let w = nonvanishing_sweep(&f, ctx.disc, ell, bound)?;
            let a = w.map(|p| f.coeff(p as usize).map(|x| x.numer().clone())).transpose()?;
            Output::sweep(ell, bound, w, a).emit(json);
        }
    }
    Ok(())
}

/// Rational in factored form, or "0".
pub(crate) fn factored(q: &Rational) -> String {
    if *q == 0 {
        "0".into()
    } else {
        format_factored(q)
    }
}
