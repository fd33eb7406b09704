use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use mmlip::json;
use mmlip::suites::{self, Suite};
use mmlip_core::gen;
use mmlip_core::maps::{self, AlmostLipschitz};
use mmlip_core::order;
use mmlip_core::prokhorov::prokhorov;
use mmlip_core::rational::{self, Rational};
use mmlip_core::transport;
use mmlip_core::{Error, FiniteMMSpace};

/// Exact Lipschitz order, box metrics and Prokhorov distance on finite mm-spaces.
///
/// Exit codes: 0 computed, 1 order or check negative, 2 input error, 3 size limit.
/// MM_MAX_EXACT_PAIRS overrides the exact-search budget (default 16 pairs).
#[derive(Debug, Parser)]
#[command(name = "mmlip", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a space file and report whether it is canonical.
    Validate { space: PathBuf },
    /// Unilateral box distance □_≻(X, Y).
    Ubox {
        x: PathBuf,
        y: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Box distance □(X, Y).
    Box {
        x: PathBuf,
        y: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Prokhorov distance between the masses of two spaces on the same metric.
    Prokhorov { x: PathBuf, y: PathBuf },
    /// Decide X ≻_ε Y.
    CheckOrder {
        x: PathBuf,
        y: PathBuf,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Ky Fan variant of the unilateral box distance.
    KyBox {
        x: PathBuf,
        y: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Decide the Ky Fan order at ε.
    CheckKy {
        x: PathBuf,
        y: PathBuf,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Glue two couplings into a measure on X × Y × Z.
    Glue {
        sigma: PathBuf,
        tau: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compose two couplings.
    Compose {
        sigma: PathBuf,
        tau: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Replace a space by a net of scale t with projected masses.
    Discretize {
        x: PathBuf,
        #[arg(long)]
        t: String,
        /// Also compute □(X, Ẋ) and check it against t.
        #[arg(long)]
        check_box: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compose f: X → Y and g: Y → Z, both 1-Lipschitz up to an error.
    ComposeMaps {
        x: PathBuf,
        y: PathBuf,
        z: PathBuf,
        f: PathBuf,
        g: PathBuf,
        #[arg(long)]
        s: String,
        /// Error of f; defaults to the least error f achieves.
        #[arg(long)]
        eps1: Option<String>,
        /// Error of g; defaults to the least error g achieves.
        #[arg(long)]
        eps2: Option<String>,
        /// Write the composed map here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Generate instances.
    Gen {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Radius of the remark46 family.
        #[arg(long, default_value = "1/4")]
        r: String,
        /// Diameter bound of random spaces.
        #[arg(long, default_value = "1")]
        diam: String,
        #[arg(long, default_value_t = gen::DEFAULT_MASS_GRANULARITY)]
        granularity: u32,
        /// Scale factor for the scaled family.
        #[arg(long)]
        c: Option<String>,
        /// Input space for the scaled family.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Output file; a directory for remark46.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named verification suite.
    Verify {
        /// Suite name, or "all".
        #[arg(long)]
        suite: String,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Remark46,
    Random,
    Scaled,
    Path,
    Cycle,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Limit(String),
    Negative(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Negative(_) => 1,
            Failure::Input(_) => 2,
            Failure::Limit(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Limit(m) | Failure::Negative(m) => m,
        }
    }
}

fn core_failure(context: &str, err: Error) -> Failure {
    let message = format!("{context}: {err}");
    match err {
        Error::SizeLimitExceeded { .. } => Failure::Limit(message),
        Error::BoundViolated(_) => Failure::Negative(message),
        _ => Failure::Input(message),
    }
}

trait OrFail<T> {
    fn or_fail(self, context: &str) -> Result<T, Failure>;
}

impl<T> OrFail<T> for mmlip_core::Result<T> {
    fn or_fail(self, context: &str) -> Result<T, Failure> {
        self.map_err(|e| core_failure(context, e))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn located(path: &Path, err: json::FormatError) -> Failure {
    Failure::Input(format!("{}: {err}", path.display()))
}

fn load_space(path: &Path) -> Result<FiniteMMSpace, Failure> {
    json::parse_space(&read(path)?).map_err(|e| located(path, e))
}

fn load_canonical(path: &Path) -> Result<FiniteMMSpace, Failure> {
    let space = load_space(path)?;
    space.require_canonical().or_fail(&path.display().to_string())?;
    Ok(space)
}

fn parse_rational(flag: &str, text: &str) -> Result<Rational, Failure> {
    rational::parse(text).map_err(|e| Failure::Input(format!("--{flag}: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("mmlip: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn run(command: Command) -> Result<u8, Failure> {
    let budget = mmlip::budget_from_env().map_err(Failure::Input)?;
    match command {
        Command::Validate { space } => {
            let x = load_space(&space)?;
            let support = x.mass().iter().filter(|m| **m > rational::int(0)).count();
            let state = if x.is_canonical() { "canonical" } else { "not canonical" };
            println!("valid: {} points, support {}, {}", x.len(), support, state);
            Ok(0)
        }
        Command::Ubox { x, y, witness } => {
            let (x, y) = (load_canonical(&x)?, load_canonical(&y)?);
            let (value, w) = order::unilateral_box(&x, &y, &budget).or_fail("ubox")?;
            if let Some(path) = witness {
                write(&path, &json::write_witness(&w))?;
            }
            println!("{}", rational::format(&value));
            Ok(0)
        }
        Command::Box { x, y, witness } => {
            let (x, y) = (load_canonical(&x)?, load_canonical(&y)?);
            let (value, w) = order::box_metric(&x, &y, &budget).or_fail("box")?;
            if let Some(path) = witness {
                write(&path, &json::write_witness(&w))?;
            }
            println!("{}", rational::format(&value));
            Ok(0)
        }
        Command::Prokhorov { x, y } => {
            let (xs, ys) = (load_space(&x)?, load_space(&y)?);
            if xs.distances() != ys.distances() {
                return Err(Failure::Input(format!(
                    "{}: dist must equal the distance matrix of {}",
                    y.display(),
                    x.display()
                )));
            }
            let value = prokhorov(&xs, xs.mass(), ys.mass()).or_fail("prokhorov")?;
            println!("{}", rational::format(&value));
            Ok(0)
        }
        Command::CheckOrder { x, y, eps, witness } => {
            let (x, y) = (load_canonical(&x)?, load_canonical(&y)?);
            let eps = parse_rational("eps", &eps)?;
            match order::check_order(&x, &y, &eps, &budget).or_fail("check-order")? {
                Some(w) => {
                    if let Some(path) = witness {
                        write(&path, &json::write_witness(&w))?;
                    }
                    println!("holds");
                    Ok(0)
                }
                None => {
                    println!("fails");
                    Ok(1)
                }
            }
        }
        Command::KyBox { x, y, witness } => {
            let (x, y) = (load_canonical(&x)?, load_canonical(&y)?);
            let (value, w) = order::ky_unilateral_box(&x, &y, &budget).or_fail("ky-box")?;
            if let Some(path) = witness {
                write(&path, &json::write_ky_witness(&w, &x, &y))?;
            }
            println!("{}", rational::format(&value));
            Ok(0)
        }
        Command::CheckKy { x, y, eps, witness } => {
            let (x, y) = (load_canonical(&x)?, load_canonical(&y)?);
            let eps = parse_rational("eps", &eps)?;
            match order::check_ky_order(&x, &y, &eps, &budget).or_fail("check-ky")? {
                Some(w) => {
                    if let Some(path) = witness {
                        write(&path, &json::write_ky_witness(&w, &x, &y))?;
                    }
                    println!("holds");
                    Ok(0)
                }
                None => {
                    println!("fails");
                    Ok(1)
                }
            }
        }
        Command::Glue { sigma, tau, out } => {
            let s = json::parse_coupling(&read(&sigma)?).map_err(|e| located(&sigma, e))?;
            let t = json::parse_coupling(&read(&tau)?).map_err(|e| located(&tau, e))?;
            let glued = transport::glue(&s, &t).or_fail("glue")?;
            emit(out.as_deref(), &json::write_triple(&glued))?;
            Ok(0)
        }
        Command::Compose { sigma, tau, out } => {
            let s = json::parse_coupling(&read(&sigma)?).map_err(|e| located(&sigma, e))?;
            let t = json::parse_coupling(&read(&tau)?).map_err(|e| located(&tau, e))?;
            let composed = transport::compose(&s, &t).or_fail("compose")?;
            emit(out.as_deref(), &json::write_coupling(&composed))?;
            Ok(0)
        }
        Command::Discretize { x, t, check_box, out } => {
            let x = load_canonical(&x)?;
            let t = parse_rational("t", &t)?;
            let d = maps::discretize(&x, &t).or_fail("discretize")?;
            let boxed = if check_box {
                Some(d.verify_box(&x, &budget).or_fail("discretize")?)
            } else {
                None
            };
            emit(out.as_deref(), &json::write_discretization(&d, boxed.as_ref()))?;
            Ok(0)
        }
        Command::ComposeMaps { x, y, z, f, g, s, eps1, eps2, witness } => {
            let (xs, ys, zs) = (load_canonical(&x)?, load_canonical(&y)?, load_canonical(&z)?);
            let fm = json::parse_map(&read(&f)?, &xs, &ys).map_err(|e| located(&f, e))?;
            let gm = json::parse_map(&read(&g)?, &ys, &zs).map_err(|e| located(&g, e))?;
            let s = parse_rational("s", &s)?;
            let (e1, x0) = error_and_domain(&xs, &ys, &fm, eps1.as_deref(), "eps1")?;
            let (e2, y0) = error_and_domain(&ys, &zs, &gm, eps2.as_deref(), "eps2")?;
            let report = maps::compose_lip_up_to(
                &xs,
                &ys,
                &zs,
                AlmostLipschitz { map: &fm, domain_set: &x0, epsilon: &e1 },
                AlmostLipschitz { map: &gm, domain_set: &y0, epsilon: &e2 },
                &s,
            )
            .or_fail("compose-maps")?;
            if let Some(path) = witness {
                write(&path, &json::write_map(&report.map, &xs, &zs))?;
            }
            print!("{}", json::write_composition(&report, &xs, &zs));
            Ok(0)
        }
        Command::Gen { family, n, seed, r, diam, granularity, c, input, out } => {
            generate(family, n, seed, &r, &diam, granularity, c.as_deref(), input.as_deref(), out.as_deref())
        }
        Command::Verify { suite, trials, seed } => {
            let selected: Vec<Suite> = if suite == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![suite.parse().map_err(|e: String| Failure::Input(format!("--suite: {e}")))?]
            };
            let mut ok = true;
            for suite in selected {
                let report = suites::run(suite, trials.unwrap_or(suite.default_trials()), seed, &budget);
                println!("{report}");
                ok &= report.passed();
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn error_and_domain(
    x: &FiniteMMSpace,
    y: &FiniteMMSpace,
    f: &mmlip_core::PointMap,
    eps: Option<&str>,
    flag: &str,
) -> Result<(Rational, mmlip_core::Subset), Failure> {
    match eps {
        None => maps::ky_error(x, y, f).or_fail(flag),
        Some(text) => {
            let e = parse_rational(flag, text)?;
            let domain = maps::max_domain_set(x, y, f, &e).or_fail(flag)?;
            Ok((e, domain))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn generate(
    family: Family,
    n: usize,
    seed: u64,
    r: &str,
    diam: &str,
    granularity: u32,
    c: Option<&str>,
    input: Option<&Path>,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let space = match family {
        Family::Remark46 => {
            let r = parse_rational("r", r)?;
            let k = u32::try_from(n).map_err(|_| Failure::Input("--n: too large".into()))?;
            let fam = gen::remark46(k, &r).or_fail("--n")?;
            let dir = out.unwrap_or(Path::new("."));
            fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
            for (name, space) in [
                (format!("remark46_X{n}.json"), &fam.x),
                (format!("remark46_Y{n}.json"), &fam.y),
                ("remark46_Xlim.json".to_string(), &fam.x_limit),
                ("remark46_Ylim.json".to_string(), &fam.y_limit),
            ] {
                let path = dir.join(name);
                write(&path, &json::write_space(space))?;
                println!("{}", path.display());
            }
            return Ok(0);
        }
        Family::Random => {
            let diam = parse_rational("diam", diam)?;
            gen::random(seed, n, &diam, granularity).or_fail("gen")?
        }
        Family::Scaled => {
            let path = input.ok_or_else(|| Failure::Input("--input is required for the scaled family".into()))?;
            let c = c.ok_or_else(|| Failure::Input("--c is required for the scaled family".into()))?;
            let c = parse_rational("c", c)?;
            gen::scaled(&load_canonical(path)?, &c).or_fail("--c")?
        }
        Family::Path => gen::path(n).or_fail("--n")?,
        Family::Cycle => gen::cycle(n).or_fail("--n")?,
    };
    emit(out, &json::write_space(&space))?;
    Ok(0)
}
