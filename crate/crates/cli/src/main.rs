use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use infostore_core::degradability::{is_degradable_set, is_nondegradable_measurement};
use infostore_core::discrimination::{lambda_max, lambda_max_restricted, mu_max};
use infostore_core::doc::{self, EnsembleDoc, MeasurementDoc, SpaceDoc};
use infostore_core::game::{self, optimal_strategy};
use infostore_core::rays::extreme_indecomposable_effects;
use infostore_core::report::{fmt_g9, sweep_csv_long, sweep_csv_summary, sweep_svg};
use infostore_core::storability::{characteristic_numbers, information_storability, is_n};
use infostore_core::{sample, spaces, Error, Settings, StateSpace};

/// Information storability of polytope GPTs.
#[derive(Parser, Debug)]
#[command(name = "infostore", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Feasibility tolerance for residuals and sign constraints.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance_feas: f64,
    /// Tolerance for comparing values from different computations.
    #[arg(long, global = true, default_value_t = 1e-7)]
    tolerance_cmp: f64,
    /// Largest ambient dimension for extreme-ray enumeration.
    #[arg(long, global = true, default_value_t = 8)]
    max_dim: usize,
    /// Largest number of vertex subsets per IS_n computation.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    max_subsets: u64,
    /// Largest ensemble for the exhaustive degradability search.
    #[arg(long, global = true, default_value_t = 10)]
    max_ensemble: usize,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the JSON document of a catalog space (`classical:<d>`, `polygon:<n>`,
    /// `dsum:<a>,<b>`, `ctensor:<space>,<d>`).
    Catalog { name: String },
    /// Information storability, or IS_n with `--n`, followed by the profile.
    Is {
        space: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Encoding power of an ensemble and an optimal measurement.
    Discriminate { space: String, ensemble: PathBuf },
    /// Whether a proper subset of the ensemble keeps its encoding power.
    Degradable { space: String, ensemble: PathBuf },
    /// Whether merging outcomes keeps the decoding power.
    DegradableMeasurement { space: String, measurement: PathBuf },
    /// Optimal strategy of the storability game at penalty `w <= 0`.
    Game {
        space: String,
        #[arg(long, allow_negative_numbers = true)]
        w: f64,
    },
    /// Evaluate the game over a range of penalties. Prints the summary CSV.
    Sweep {
        space: String,
        #[arg(long, allow_negative_numbers = true)]
        w_min: f64,
        #[arg(long, allow_negative_numbers = true)]
        w_max: f64,
        /// Number of evenly spaced penalties, endpoints included.
        #[arg(long)]
        steps: usize,
        /// Write the summary CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the long-form CSV (`w,n,E_w_n`).
        #[arg(long)]
        long: Option<PathBuf>,
        /// Also write an SVG chart.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run a fixed qubit check.
    QubitFixture {
        name: Fixture,
        /// Angle between the two bases, for `bases`.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
        angle: f64,
    },
    /// Seeded spot checks of the decoding-power invariants on random measurements.
    Properties {
        space: String,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Fixture {
    Trine,
    Pentagon,
    Antipodal,
    Bases,
}

#[derive(Debug)]
enum Failure {
    Core(Error),
    Io(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::Input(_)) | Failure::Io(_) => 1,
            Failure::Core(Error::Capacity(_)) => 2,
            Failure::Core(_) | Failure::Check(_) => 3,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Io(m) | Failure::Check(m) => m.clone(),
        }
    }
}

type Outcome = Result<String, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::new()
        .filter_level(log::LevelFilter::Warn)
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn settings(cli: &Cli) -> Result<Settings, Failure> {
    let mut s = Settings::default();
    s.tol.feas = cli.tolerance_feas;
    s.tol.cmp = cli.tolerance_cmp;
    s.caps.max_dim = cli.max_dim;
    s.caps.max_subsets = cli.max_subsets;
    s.caps.max_ensemble = cli.max_ensemble;
    s.validate()?;
    Ok(s)
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// `catalog:<name>` or a path to a space document.
fn load_space(arg: &str, settings: &Settings) -> Result<StateSpace, Failure> {
    if arg.starts_with("catalog:") {
        Ok(spaces::from_catalog_name(arg)?)
    } else {
        Ok(doc::parse_space(&read(Path::new(arg))?, &settings.tol)?)
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = doc::to_json(value);
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Outcome {
    let settings = settings(cli)?;
    match &cli.command {
        Command::Catalog { name } => {
            let space = spaces::from_catalog_name(name)?;
            Ok(json(&SpaceDoc::from_space(&space)))
        }
        Command::Is { space, n } => {
            let s = load_space(space, &settings)?;
            let mut out = String::new();
            if let Some(n) = n {
                let level = is_n(&s, *n, &settings)?;
                out.push_str(&format!("{}\n", fmt_g9(level.value)));
                #[derive(Serialize)]
                struct LevelDoc<'a> {
                    n: usize,
                    is_n: f64,
                    vertices: &'a [usize],
                    measurement: MeasurementDoc,
                }
                out.push_str(&json(&LevelDoc {
                    n: level.n,
                    is_n: level.value,
                    vertices: &level.vertices,
                    measurement: MeasurementDoc::from_measurement(
                        s.name(),
                        &level.witness_measurement,
                    ),
                }));
            } else {
                let is = information_storability(&s, &settings)?;
                out.push_str(&format!("{}\n", fmt_g9(is.value)));
                let profile = characteristic_numbers(&s, &settings)?;
                out.push_str(&json(&profile.to_doc()));
            }
            Ok(out)
        }
        Command::Discriminate { space, ensemble } => {
            let s = load_space(space, &settings)?;
            let x =
                doc::parse::<EnsembleDoc>(&read(ensemble)?)?.into_ensemble(&s, &settings.tol)?;
            let r = mu_max(&s, &x, &settings)?;
            Ok(format!(
                "{}\n{}",
                fmt_g9(r.value),
                json(&MeasurementDoc::from_measurement(
                    s.name(),
                    &r.optimal_measurement
                ))
            ))
        }
        Command::Degradable { space, ensemble } => {
            let s = load_space(space, &settings)?;
            let x =
                doc::parse::<EnsembleDoc>(&read(ensemble)?)?.into_ensemble(&s, &settings.tol)?;
            let v = is_degradable_set(&s, &x, &settings)?;
            let word = if v.degradable {
                "degradable"
            } else {
                "nondegradable"
            };
            Ok(format!("{word}\n{}", json(&v)))
        }
        Command::DegradableMeasurement { space, measurement } => {
            let s = load_space(space, &settings)?;
            let m = doc::parse::<MeasurementDoc>(&read(measurement)?)?
                .into_measurement(&s, &settings.tol)?;
            let v = is_nondegradable_measurement(&s, &m, &settings.tol)?;
            let lam = lambda_max(&s, &m)?;
            let word = if v.nondegradable {
                "nondegradable"
            } else {
                "degradable"
            };
            Ok(format!("{word}\n{}\n{}", fmt_g9(lam.value), json(&v)))
        }
        Command::Game { space, w } => {
            let s = load_space(space, &settings)?;
            let profile = characteristic_numbers(&s, &settings)?;
            let report = optimal_strategy(&profile, *w, &settings.tol)?;
            Ok(format!(
                "{} {}\n{}",
                report.optimal_n,
                fmt_g9(report.expected_reward),
                json(&report)
            ))
        }
        Command::Sweep {
            space,
            w_min,
            w_max,
            steps,
            out,
            long,
            svg,
        } => {
            let s = load_space(space, &settings)?;
            let profile = characteristic_numbers(&s, &settings)?;
            let table = game::sweep(&profile, s.name(), *w_min, *w_max, *steps, &settings.tol)?;
            if let Some(path) = long {
                write(path, &sweep_csv_long(&table))?;
            }
            if let Some(path) = svg {
                write(path, &sweep_svg(&table))?;
            }
            let summary = sweep_csv_summary(&table);
            match out {
                Some(path) => {
                    write(path, &summary)?;
                    Ok(String::new())
                }
                None => Ok(summary),
            }
        }
        Command::QubitFixture { name, angle } => qubit_fixture(*name, *angle, &settings),
        Command::Properties { space, cases } => properties(space, *cases, cli.seed, &settings),
    }
}

fn qubit_fixture(name: Fixture, angle: f64, settings: &Settings) -> Outcome {
    let tol = &settings.tol;
    let (ok, body) = match name {
        Fixture::Trine => {
            let r = spaces::trine_fixture(tol);
            (
                r.povm_valid && (r.success_sum - 2.0).abs() <= tol.cmp,
                json(&r),
            )
        }
        Fixture::Pentagon | Fixture::Antipodal => {
            let states = match name {
                Fixture::Pentagon => spaces::pentagon_bloch(),
                _ => spaces::antipodal_bloch(),
            };
            let r = spaces::verify_symmetric_decodable(&states, tol)?;
            let ok = r.povm_valid && r.decodable_sum.is_some_and(|v| (v - 2.0).abs() <= tol.cmp);
            (ok, json(&r))
        }
        Fixture::Bases => {
            let r = spaces::two_bases_fixture(angle, tol);
            (r.degradable, json(&r))
        }
    };
    if ok {
        Ok(format!("pass\n{body}"))
    } else {
        Err(Failure::Check(format!("fixture check failed\n{body}")))
    }
}

/// Random measurements and ensembles: restricted decoding power never exceeds
/// encoding power, and encoding power never exceeds IS.
fn properties(space: &str, cases: usize, seed: u64, settings: &Settings) -> Outcome {
    let s = load_space(space, settings)?;
    let rays = extreme_indecomposable_effects(&s, settings)?;
    let is = information_storability(&s, settings)?.value;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cmp = settings.tol.cmp;
    let mut violations = 0usize;
    for _ in 0..cases {
        let k = 1 + (rand::Rng::gen_range(&mut rng, 0..s.num_vertices().min(4)));
        let x = sample::ensemble(&mut rng, &s, k, &settings.tol)?;
        let a = sample::measurement(&mut rng, &s, &rays, k, settings)?;
        let mu = mu_max(&s, &x, settings)?.value;
        let lam = lambda_max_restricted(&s, &a, &x)?;
        if lam > mu + cmp || mu > is + cmp {
            violations += 1;
        }
    }
    let out = format!("cases {cases}\nviolations {violations}\n");
    if violations == 0 {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}
