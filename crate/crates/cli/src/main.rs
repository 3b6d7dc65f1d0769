use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use polymap::classifier::{classify_over_z, diophantine_profile};
use polymap::display::map_source;
use polymap::gallery::run_gallery;
use polymap::inverse::{decide_invertibility, inverse_degree_bound};
use polymap::jacobian::{jacobian_determinant, jacobian_matrix, resultant, SylvesterMatrix};
use polymap::padic::{
    certify_noninjective_zp, hensel_lift_chain, injectivity_over_z_univariate, injectivity_probe_mod_pk,
    rational_noninjectivity_witness, series_hensel_lift, solve_system_mod, zp_surjectivity_criterion, ResidueVector,
    DEFAULT_BUDGET, DEFAULT_WITNESS_RADIUS,
};
use polymap::parser::{parse_map, parse_poly, MapCoefficients, ParsedMap};
use polymap::report::{self, Payload, Report};
use polymap::{Modulus, PolyMap};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error(transparent)]
    Core(#[from] polymap::Error),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Surjectivity, injectivity and invertibility of polynomial maps over ℤ and ℤ_p.
#[derive(Debug, Parser)]
#[command(name = "polymap", version)]
struct CliConfig {
    #[command(subcommand)]
    command: Command,
    /// Map source text, e.g. "vars x; f1 = 2*x".
    #[arg(long, global = true, conflicts_with = "file")]
    map: Option<String>,
    /// File holding the map source; standard input is read when neither --map nor --file is given.
    #[arg(long, global = true)]
    file: Option<PathBuf>,
    #[arg(long, global = true)]
    prime: Option<u64>,
    #[arg(long, global = true)]
    power: Option<u32>,
    #[arg(long, global = true, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    prime_bound: u64,
    /// Truncation order of power series.
    #[arg(long, global = true, default_value_t = 10)]
    order: usize,
    /// Largest number of residue points a single scan may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Starting root mod p for `hensel`, comma separated.
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Right-hand side: comma-separated integers, or a polynomial in t for `series-lift`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    target: Option<String>,
    /// Gallery case name, or "all".
    #[arg(long, global = true)]
    case: Option<String>,
    /// Base root for `series-lift`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    base: Option<String>,
    /// Search radius for `witness-zloc`.
    #[arg(long, global = true, default_value_t = DEFAULT_WITNESS_RADIUS)]
    radius: u32,
    /// First polynomial for `resultant`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    f: Option<String>,
    /// Second polynomial for `resultant`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    g: Option<String>,
    /// Variable of the `resultant` inputs.
    #[arg(long, global = true, default_value = "x")]
    var: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
enum Command {
    /// Global verdict over ℤ plus the table of ℤ_p verdicts for p ≤ --prime-bound.
    Classify,
    /// Decide invertibility and print the inverse.
    Invert,
    /// Finite criterion for surjectivity over ℤ_p.
    SurjectiveZp,
    /// Lift a simple root mod p to mod p^k.
    Hensel,
    /// Solve f(x) ≡ target mod p^k, or profile all primes ≤ --prime-bound.
    SolveMod,
    /// Exhaustive injectivity probe on (ℤ/p^k)^n.
    InjectProbe,
    /// Decide injectivity on ℤ of a univariate polynomial.
    InjectZ,
    /// Search for a non-injectivity witness in ℤ localized at p.
    WitnessZloc,
    /// Sylvester resultant of --f and --g.
    Resultant,
    /// Jacobian matrix and determinant.
    Jacobian,
    /// Power series root of f(p(t)) = target(t).
    SeriesLift,
    /// Run the worked examples.
    Gallery,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Classify => "classify",
            Command::Invert => "invert",
            Command::SurjectiveZp => "surjective-zp",
            Command::Hensel => "hensel",
            Command::SolveMod => "solve-mod",
            Command::InjectProbe => "inject-probe",
            Command::InjectZ => "inject-z",
            Command::WitnessZloc => "witness-zloc",
            Command::Resultant => "resultant",
            Command::Jacobian => "jacobian",
            Command::SeriesLift => "series-lift",
            Command::Gallery => "gallery",
        }
    }
}

struct Input {
    parsed: ParsedMap,
    canonical: String,
}

impl Input {
    fn integer_map(&self) -> CliResult<PolyMap<BigInt>> {
        Ok(self.parsed.integer_map()?)
    }

    fn names(&self) -> &[String] {
        &self.parsed.vars
    }

    fn univariate(&self) -> CliResult<PolyMap<BigInt>> {
        let f = self.integer_map()?;
        if f.dim() != 1 {
            return Err(polymap::Error::NotUnivariate(f.dim()).into());
        }
        Ok(f)
    }
}

fn read_source(cfg: &CliConfig) -> CliResult<String> {
    if let Some(text) = &cfg.map {
        return Ok(text.clone());
    }
    if let Some(path) = &cfg.file {
        return std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source });
    }
    let mut text = String::new();
    io::stdin().read_to_string(&mut text).map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
    Ok(text)
}

fn load_input(cfg: &CliConfig) -> CliResult<Input> {
    let parsed = parse_map(&read_source(cfg)?)?;
    let canonical = match &parsed.coefficients {
        MapCoefficients::Integer(f) => map_source(f, &parsed.vars, parsed.modulus.as_ref()),
        MapCoefficients::Rational(f) => map_source(f, &parsed.vars, parsed.modulus.as_ref()),
    };
    Ok(Input { parsed, canonical })
}

/// `--prime`, falling back to the `mod p^k` header of the input.
fn prime(cfg: &CliConfig, input: &Input) -> CliResult<u64> {
    cfg.prime
        .or(input.parsed.modulus.as_ref().map(Modulus::prime))
        .ok_or_else(|| CliError::Usage("--prime is required".into()))
}

fn power(cfg: &CliConfig, input: &Input, default: u32) -> CliResult<u32> {
    let k = cfg.power.or(input.parsed.modulus.as_ref().map(Modulus::exponent)).unwrap_or(default);
    if k == 0 {
        return Err(CliError::Usage("--power must be positive".into()));
    }
    Ok(k)
}

fn integers(text: &str, what: &str) -> CliResult<Vec<BigInt>> {
    text.split(',')
        .map(|s| {
            s.trim().parse::<BigInt>().map_err(|_| CliError::Usage(format!("{what}: '{}' is not an integer", s.trim())))
        })
        .collect()
}

fn target_vector(cfg: &CliConfig, n: usize) -> CliResult<Vec<BigInt>> {
    let target = match &cfg.target {
        Some(t) => integers(t, "--target")?,
        None => vec![BigInt::zero(); n],
    };
    if target.len() != n {
        return Err(polymap::Error::DimensionMismatch { expected: n, found: target.len() }.into());
    }
    Ok(target)
}

/// Rejects scans over `(ℤ/p^k)^n` larger than the budget before any work starts.
fn check_budget(cfg: &CliConfig, p: u64, k: u32, n: usize) -> CliResult<()> {
    let required = (p as u128).checked_pow(k * n as u32).unwrap_or(u128::MAX);
    if required > cfg.budget as u128 {
        return Err(polymap::Error::BudgetExceeded { required, budget: cfg.budget }.into());
    }
    Ok(())
}

fn dispatch(cfg: &CliConfig) -> CliResult<Vec<Report>> {
    let command = cfg.command;
    if command == Command::Gallery {
        return Ok(run_gallery(cfg.case.as_deref())?);
    }
    let start = Instant::now();
    let (input, payload) = match command {
        Command::Resultant => resultant_command(cfg)?,
        _ => {
            let input = load_input(cfg)?;
            let payload = run_on_map(cfg, &input)?;
            (Some(input.canonical), payload)
        }
    };
    Ok(vec![Report::new(command.name(), input, payload).with_timing(start.elapsed())])
}

fn resultant_command(cfg: &CliConfig) -> CliResult<(Option<String>, Payload)> {
    let vars = [cfg.var.clone()];
    let f_text = cfg.f.as_deref().ok_or_else(|| CliError::Usage("--f is required".into()))?;
    let g_text = cfg.g.as_deref().ok_or_else(|| CliError::Usage("--g is required".into()))?;
    let (f, g) = (parse_poly(f_text, &vars)?, parse_poly(g_text, &vars)?);
    let value: BigRational = resultant(&f, &g)?;
    let size = SylvesterMatrix::new(&f, &g)?.size();
    let input =
        format!("{}; {}", polymap::display::canonical_string(&f, &vars), polymap::display::canonical_string(&g, &vars));
    Ok((Some(input), report::resultant_payload(&value, size)))
}

fn run_on_map(cfg: &CliConfig, input: &Input) -> CliResult<Payload> {
    let names = input.names();
    Ok(match cfg.command {
        Command::Classify => {
            let verdict = classify_over_z(&input.integer_map()?, cfg.prime_bound, cfg.budget);
            report::classify_payload(&verdict, cfg.prime_bound, names)
        }
        Command::Invert => {
            let f = input.integer_map()?;
            let bound = inverse_degree_bound(f.degree(), f.dim());
            report::invertibility_payload(&decide_invertibility(&f), bound, names)
        }
        Command::SurjectiveZp => {
            let f = input.integer_map()?;
            let p = prime(cfg, input)?;
            check_budget(cfg, p, 1, f.dim())?;
            report::surjective_zp_payload(&zp_surjectivity_criterion(&f, p, cfg.budget)?)
        }
        Command::Hensel => {
            let f = input.integer_map()?;
            let (p, k) = (prime(cfg, input)?, power(cfg, input, 1)?);
            let seed_text = cfg.seed.as_deref().ok_or_else(|| CliError::Usage("--seed is required".into()))?;
            let seed = ResidueVector::new(&integers(seed_text, "--seed")?, &Modulus::new(p, 1)?);
            let shifted = f.translate_values(&target_vector(cfg, f.dim())?.iter().map(|t| -t).collect::<Vec<_>>());
            report::hensel_payload(&hensel_lift_chain(&shifted, p, k, &seed)?)
        }
        Command::SolveMod => {
            let f = input.integer_map()?;
            let target = target_vector(cfg, f.dim())?;
            match cfg.prime.or(input.parsed.modulus.as_ref().map(Modulus::prime)) {
                Some(p) => {
                    let k = power(cfg, input, 1)?;
                    check_budget(cfg, p, 1, f.dim())?;
                    let solutions = solve_system_mod(&f, &target, p, k, cfg.budget)?;
                    report::solutions_payload(&Modulus::new(p, k)?.to_string(), &solutions)
                }
                None => {
                    let k = power(cfg, input, 1)?;
                    let profile = diophantine_profile(&f, &target, cfg.prime_bound, k, cfg.budget)?;
                    report::profile_payload(&profile, cfg.prime_bound)
                }
            }
        }
        Command::InjectProbe => {
            let f = input.integer_map()?;
            let (p, k) = (prime(cfg, input)?, power(cfg, input, 1)?);
            check_budget(cfg, p, k, f.dim())?;
            let probe = injectivity_probe_mod_pk(&f, p, k, cfg.budget)?;
            let witness = if f.dim() == 1 { certify_noninjective_zp(&f, p, cfg.budget)? } else { None };
            report::probe_payload(&probe, &Modulus::new(p, k)?.to_string(), witness.as_ref())
        }
        Command::InjectZ => {
            let f = input.univariate()?;
            let poly = &f.components()[0];
            report::integer_injectivity_payload(&injectivity_over_z_univariate(poly, cfg.budget)?, poly)
        }
        Command::WitnessZloc => {
            let f = input.univariate()?;
            let p = prime(cfg, input)?;
            let poly = &f.components()[0];
            let witness = rational_noninjectivity_witness(poly, p, cfg.radius)?;
            let value = witness.as_ref().map(|(a, _)| {
                poly.to_univariate()
                    .expect("univariate")
                    .iter()
                    .rev()
                    .fold(BigRational::zero(), |acc, c| acc * a + BigRational::from_integer(c.clone()))
            });
            report::zloc_witness_payload(p, cfg.radius, witness.as_ref(), value.as_ref())
        }
        Command::Jacobian => match &input.parsed.coefficients {
            MapCoefficients::Integer(f) => {
                report::jacobian_payload(jacobian_matrix(f).rows(), &jacobian_determinant(f), names)
            }
            MapCoefficients::Rational(f) => {
                report::jacobian_payload(jacobian_matrix(f).rows(), &jacobian_determinant(f), names)
            }
        },
        Command::SeriesLift => {
            let f = input.parsed.rational_map();
            if f.dim() != 1 {
                return Err(polymap::Error::NotUnivariate(f.dim()).into());
            }
            let target = parse_poly(cfg.target.as_deref().unwrap_or("t"), &["t".to_string()])?;
            let s: Vec<BigRational> = (0..=cfg.order).map(|j| target.coefficient(&[j as u32])).collect();
            let base = cfg.base.as_deref().map(polymap::parser::parse_rational).transpose()?;
            let lift = series_hensel_lift(&f.components()[0], &s, cfg.order, base.as_ref())?;
            report::series_payload(&lift, cfg.order)
        }
        Command::Resultant | Command::Gallery => unreachable!("handled without a map"),
    })
}

fn render(reports: &[Report], format: Format) -> String {
    match format {
        Format::Json if reports.len() == 1 => reports[0].to_json() + "\n",
        Format::Json => {
            let values: Vec<_> = reports.iter().map(Report::to_value).collect();
            serde_json::to_string_pretty(&values).expect("reports serialize") + "\n"
        }
        Format::Text => reports.iter().map(Report::render_text).collect::<Vec<_>>().join("\n"),
    }
}

fn exit_status(reports: &[Report]) -> u8 {
    let failed_case = reports
        .iter()
        .any(|r| r.verdict_kind() == "GalleryCase" && r.verdict["passed"] != serde_json::Value::Bool(true));
    if failed_case {
        1
    } else if reports.iter().any(Report::is_inconclusive) {
        2
    } else {
        0
    }
}

fn main() -> ExitCode {
    let cfg = CliConfig::parse();
    match dispatch(&cfg) {
        Ok(reports) => {
            let out = render(&reports, cfg.format);
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(exit_status(&reports))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
