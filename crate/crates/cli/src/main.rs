mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ffvc_core::analysis::{edge_count, intersection_profile};
use ffvc_core::curves::{make_curve, CanonicalKind, CurveDescriptor, QuadraticSpec};
use ffvc_core::random::{monte_carlo, sample_subset, vc_random_experiment};
use ffvc_core::shatter::{
    construct_shatter3, shatter_search, vc_bounds, Outcome, SearchOutcome, ShatterProblem,
    Strategy, DEFAULT_BUDGET,
};
use ffvc_core::{fourier_spectrum, presets, salem_report, FieldContext, PointSet, SalemParams};
use serde::Serialize;
use serde_json::{json, Value};

use report::{render, Format, Report, Status};

#[derive(Parser, Serialize)]
#[command(name = "ffvc", version, about = "Fourier, Salem and VC-dimension tools over F_p^d")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Serialize, Clone)]
struct ShapeArgs {
    /// Field size (an odd prime); required with --curve.
    #[arg(short = 'p', long = "prime")]
    p: Option<u64>,
    /// Dimension; used with --curve.
    #[arg(short = 'd', long = "dim", default_value_t = 2)]
    d: usize,
    /// Curve descriptor: circle:t, sphere:t, paraboloid, conic:A,B,C,D,E,F,
    /// polygraph:c0,..,cn, sym-parabola.
    #[arg(long)]
    curve: Option<String>,
    /// Point-set file ("p d" header, one point per line).
    #[arg(long = "set")]
    set: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum WitnessDomain {
    /// Centers range over the domain E.
    Domain,
    /// Centers range over all of F_p^d.
    Full,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum StrategyArg {
    Exhaustive,
    Random,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Experiment {
    Hayes,
    Vc,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Preset {
    F11Table,
    #[value(name = "f17-x")]
    #[serde(rename = "f17-x")]
    F17X,
    #[value(name = "f23-x")]
    #[serde(rename = "f23-x")]
    F23X,
    #[value(name = "f29-x")]
    #[serde(rename = "f29-x")]
    F29X,
    ConicCensus,
    WeilSuite,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Check the Salem bound c q^-d (ln q)^gamma |S|^1/2.
    SalemCheck {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long = "const", default_value_t = 2.0)]
        constant: f64,
    },
    /// Largest nontrivial Fourier coefficients.
    Spectrum {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Enumerate a curve.
    Curve {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Also write the points to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify and reduce a plane conic.
    Classify {
        #[arg(short = 'p', long = "prime")]
        p: u64,
        /// Coefficients A,B,C,D,E,F of Ax^2+Bxy+Cy^2+Dx+Ey+F.
        #[arg(long, allow_hyphen_values = true)]
        conic: String,
    },
    /// Distribution of |S n (S - v)| over shifts v != 0.
    IntersectProfile {
        #[command(flatten)]
        shape: ShapeArgs,
    },
    /// Exact edge count of E in the graph x ~ y iff x - y in S.
    EdgeCount {
        #[command(flatten)]
        shape: ShapeArgs,
        /// full, file:<path> or random:<size>.
        #[arg(long, default_value = "full")]
        domain: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
    },
    /// Search for k points shattered by translates of S.
    Shatter {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(short = 'k')]
        k: usize,
        /// full, file:<path> or random:<size>.
        #[arg(long, default_value = "full")]
        domain: String,
        #[arg(long, value_enum, default_value = "domain")]
        witness_domain: WitnessDomain,
        #[arg(long, value_enum, default_value = "exhaustive")]
        strategy: StrategyArg,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Only search witness regions of this tuple, e.g. "0,0;1,2;2,8".
        #[arg(long)]
        points: Option<String>,
    },
    /// Constructive 3-shattering from a cube minus a vertex.
    Construct3 {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value = "full")]
        domain: String,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// VC-dimension bounds by exhaustive search.
    Vc {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value = "full")]
        domain: String,
        #[arg(long, value_enum, default_value = "domain")]
        witness_domain: WitnessDomain,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Random-set trials: Hayes check or shattering by random shapes.
    RandomTrials {
        #[arg(short = 'p', long = "prime")]
        p: u64,
        #[arg(short = 'd', long = "dim", default_value_t = 2)]
        d: usize,
        /// Sample size (default p).
        #[arg(long)]
        size: Option<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.45)]
        beta: f64,
        /// Minimum Hayes pass fraction for PASS.
        #[arg(long, default_value_t = 0.95)]
        min_pass: f64,
        #[arg(long, value_enum, default_value = "hayes")]
        experiment: Experiment,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Reproduce a published configuration or run a check suite.
    Reproduce {
        #[arg(value_enum)]
        preset: Preset,
        #[arg(short = 'p', long = "prime")]
        p: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::SalemCheck { .. } => "salem-check",
            Command::Spectrum { .. } => "spectrum",
            Command::Curve { .. } => "curve",
            Command::Classify { .. } => "classify",
            Command::IntersectProfile { .. } => "intersect-profile",
            Command::EdgeCount { .. } => "edge-count",
            Command::Shatter { .. } => "shatter",
            Command::Construct3 { .. } => "construct3",
            Command::Vc { .. } => "vc",
            Command::RandomTrials { .. } => "random-trials",
            Command::Reproduce { .. } => "reproduce",
        }
    }
}

enum CliError {
    Usage(String),
    Core(ffvc_core::Error),
}

impl From<ffvc_core::Error> for CliError {
    fn from(e: ffvc_core::Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn require_seed(seed: Option<u64>, what: &str) -> CliResult<u64> {
    match seed {
        Some(s) => Ok(s),
        None => usage(format!("--seed is required for {what}")),
    }
}

fn load_set(path: &PathBuf) -> CliResult<PointSet> {
    let text = std::fs::read_to_string(path)
        .or_else(|e| usage(format!("--set: cannot read {}: {e}", path.display())))?;
    PointSet::parse_text(&text).or_else(|e| usage(format!("--set {}: {e}", path.display())))
}

impl ShapeArgs {
    fn load(&self) -> CliResult<PointSet> {
        match (&self.curve, &self.set) {
            (Some(_), Some(_)) => usage("--curve and --set are mutually exclusive"),
            (None, None) => usage("one of --curve or --set is required"),
            (None, Some(path)) => load_set(path),
            (Some(desc), None) => {
                let Some(p) = self.p else {
                    return usage("-p/--prime is required with --curve");
                };
                let ctx = FieldContext::new(p, self.d).or_else(|e| usage(format!("-p/-d: {e}")))?;
                let desc: CurveDescriptor = desc.parse().or_else(|e| usage(format!("--curve: {e}")))?;
                Ok(make_curve(&ctx, &desc).or_else(|e| usage(format!("--curve: {e}")))?.points)
            }
        }
    }
}

fn load_domain(ctx: &FieldContext, spec: &str, seed: Option<u64>) -> CliResult<PointSet> {
    if spec == "full" {
        return Ok(PointSet::full(ctx));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let set = load_set(&PathBuf::from(path))?;
        if set.context() != ctx {
            return usage("--domain: file field does not match the shape's field");
        }
        return Ok(set);
    }
    if let Some(n) = spec.strip_prefix("random:") {
        let size: usize = n
            .parse()
            .or_else(|_| usage(format!("--domain: bad size {n:?}")))?;
        let seed = require_seed(seed, "--domain random:<size>")?;
        return sample_subset(ctx, size, seed).or_else(|e| usage(format!("--domain: {e}")));
    }
    usage(format!("--domain must be full, file:<path> or random:<size>, got {spec:?}"))
}

fn witness_set(domain: &PointSet, w: WitnessDomain) -> PointSet {
    match w {
        WitnessDomain::Domain => domain.clone(),
        WitnessDomain::Full => PointSet::full(domain.context()),
    }
}

fn points_json(set: &PointSet) -> Value {
    json!(set.points().collect::<Vec<_>>())
}

fn parse_tuple(ctx: &FieldContext, text: &str) -> CliResult<Vec<usize>> {
    text.split(';')
        .map(|pt| {
            let coords: Vec<u64> = pt
                .split(',')
                .map(|c| c.trim().parse::<u64>())
                .collect::<Result<_, _>>()
                .or_else(|_| usage(format!("--points: bad point {pt:?}")))?;
            ctx.index(&coords).or_else(|e| usage(format!("--points: {e}")))
        })
        .collect()
}

fn search_report(ctx: &FieldContext, out: &SearchOutcome) -> Report {
    let status = match out.result {
        Outcome::Found(_) => Status::Found,
        Outcome::ExhaustedNo => Status::NotShatterable,
        Outcome::BudgetExhausted | Outcome::NotFound => Status::Inconclusive,
    };
    Report {
        status,
        result: out.to_json(ctx),
    }
}

fn run(cmd: &Command) -> CliResult<Report> {
    match cmd {
        Command::SalemCheck {
            shape,
            gamma,
            constant,
        } => {
            let s = shape.load()?;
            let params = SalemParams::new(*gamma, *constant)
                .or_else(|e| usage(format!("--gamma/--const: {e}")))?;
            let r = salem_report(&s, &params)?;
            Ok(Report {
                status: Status::from_pass(r.pass),
                result: serde_json::to_value(&r).unwrap(),
            })
        }
        Command::Spectrum { shape, top } => {
            let s = shape.load()?;
            let ctx = s.context();
            let spec = fourier_spectrum(&s);
            let mut mags = spec.sorted_nontrivial_magnitudes();
            mags.reverse();
            mags.truncate(*top);
            Ok(Report {
                status: Status::Done,
                result: json!({
                    "size": s.len(),
                    "max_nontrivial": spec.max_nontrivial(),
                    "argmax": spec.argmax_nontrivial().map(|m| ctx.point(m)),
                    "scaled_max": spec.max_nontrivial() * ctx.q().powf((ctx.dim() as f64 + 1.0) / 2.0),
                    "top_magnitudes": mags,
                }),
            })
        }
        Command::Curve { shape, out } => {
            let s = shape.load()?;
            if let Some(path) = out {
                std::fs::write(path, s.to_text())
                    .or_else(|e| usage(format!("--out: cannot write {}: {e}", path.display())))?;
            }
            Ok(Report {
                status: Status::Done,
                result: json!({
                    "p": s.context().p(),
                    "d": s.context().dim(),
                    "size": s.len(),
                    "symmetric": s.is_symmetric(),
                    "points": points_json(&s),
                }),
            })
        }
        Command::Classify { p, conic } => {
            let ctx = FieldContext::new(*p, 2).or_else(|e| usage(format!("-p: {e}")))?;
            let coeffs: Vec<i64> = conic
                .split(',')
                .map(|c| c.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .or_else(|_| usage(format!("--conic: expected six integers, got {conic:?}")))?;
            let Ok(coeffs) = <[i64; 6]>::try_from(coeffs) else {
                return usage(format!("--conic: expected six integers, got {conic:?}"));
            };
            let spec = QuadraticSpec::new(&ctx, coeffs).or_else(|e| usage(format!("--conic: {e}")))?;
            let class = spec.classify();
            let canonical = match spec.reduce() {
                Ok(form) => {
                    let kind = match form.kind {
                        CanonicalKind::Parabola => json!({"kind": "parabola"}),
                        CanonicalKind::Diagonal { a, b, c } => {
                            json!({"kind": "diagonal", "a": a, "b": b, "c": c})
                        }
                    };
                    json!({
                        "form": kind,
                        "linear": form.transform.linear.rows(),
                        "shift": form.transform.shift,
                        "center": form.center,
                    })
                }
                Err(e) => json!({"error": e.to_string()}),
            };
            Ok(Report {
                status: Status::Done,
                result: json!({
                    "coeffs": spec.coeffs(),
                    "det2": spec.det2(),
                    "det3": spec.det3(),
                    "smooth": class.smooth,
                    "degenerate_quadratic_part": class.degenerate_quadratic_part,
                    "points": spec.zero_set().len(),
                    "canonical": canonical,
                }),
            })
        }
        Command::IntersectProfile { shape } => {
            let s = shape.load()?;
            let prof = intersection_profile(&s)?;
            let mut v = serde_json::to_value(&prof).unwrap();
            v["beta"] = json!(prof.beta(s.context().p()));
            Ok(Report {
                status: Status::Done,
                result: v,
            })
        }
        Command::EdgeCount {
            shape,
            domain,
            seed,
            gamma,
        } => {
            let s = shape.load()?;
            let e = load_domain(s.context(), domain, *seed)?;
            let r = edge_count(&e, &s, *gamma)?;
            let mut v = serde_json::to_value(&r).unwrap();
            v["domain_size"] = json!(e.len());
            Ok(Report {
                status: Status::Done,
                result: v,
            })
        }
        Command::Shatter {
            shape,
            k,
            domain,
            witness_domain,
            strategy,
            budget,
            seed,
            points,
        } => {
            let s = shape.load()?;
            let ctx = s.context().clone();
            let e = load_domain(&ctx, domain, *seed)?;
            let w = witness_set(&e, *witness_domain);
            let problem = ShatterProblem::new(&s, &e, &w, *k).or_else(|err| usage(format!("-k: {err}")))?;
            if let Some(text) = points {
                let tuple = parse_tuple(&ctx, text)?;
                if tuple.len() != *k {
                    return usage(format!("--points: expected {k} points, got {}", tuple.len()));
                }
                let found = problem.witnesses_for(&tuple)?;
                let verified = found.as_ref().map(|w| problem.verify(w).unwrap_or(false));
                return Ok(Report {
                    status: if found.is_some() {
                        Status::Found
                    } else {
                        Status::Inconclusive
                    },
                    result: json!({
                        "outcome": if found.is_some() { "found" } else { "tuple_not_shattered" },
                        "witness": found.map(|w| w.to_json(&ctx)),
                        "verified": verified,
                    }),
                });
            }
            let strat = match strategy {
                StrategyArg::Exhaustive => Strategy::Exhaustive { budget: *budget },
                StrategyArg::Random => Strategy::Random {
                    seed: require_seed(*seed, "--strategy random")?,
                    budget: *budget,
                },
            };
            Ok(search_report(&ctx, &shatter_search(&problem, &strat)))
        }
        Command::Construct3 {
            shape,
            domain,
            seed,
        } => {
            let s = shape.load()?;
            let e = load_domain(s.context(), domain, *seed)?;
            let out = construct_shatter3(&s, &e)?;
            Ok(search_report(s.context(), &out))
        }
        Command::Vc {
            shape,
            domain,
            witness_domain,
            k_max,
            budget,
            seed,
        } => {
            let s = shape.load()?;
            let e = load_domain(s.context(), domain, *seed)?;
            let w = witness_set(&e, *witness_domain);
            let b = vc_bounds(&s, &e, &w, *k_max, *budget).map_err(|err| match err {
                ffvc_core::Error::InvalidParameter(m) => CliError::Usage(format!("--k-max: {m}")),
                other => CliError::Core(other),
            })?;
            let mut v = serde_json::to_value(&b).unwrap();
            v["witness"] = json!(b.witness.as_ref().map(|w| w.to_json(s.context())));
            Ok(Report {
                status: Status::Done,
                result: v,
            })
        }
        Command::RandomTrials {
            p,
            d,
            size,
            trials,
            seed,
            epsilon,
            beta,
            min_pass,
            experiment,
            budget,
        } => {
            let seed = require_seed(*seed, "random-trials")?;
            let ctx = FieldContext::new(*p, *d).or_else(|e| usage(format!("-p/-d: {e}")))?;
            match experiment {
                Experiment::Hayes => {
                    let size = size.unwrap_or(*p as usize);
                    let r = monte_carlo(&ctx, size, *trials, seed, *epsilon, *beta)
                        .or_else(|e| usage(format!("--size/--trials: {e}")))?;
                    Ok(Report {
                        status: Status::from_pass(r.evaluated > 0 && r.pass_fraction >= *min_pass),
                        result: serde_json::to_value(&r).unwrap(),
                    })
                }
                Experiment::Vc => {
                    if *d != 2 {
                        return usage("-d: the vc experiment runs in the plane (d = 2)");
                    }
                    let r = vc_random_experiment(*p, *trials, seed, *budget)?;
                    Ok(Report {
                        status: Status::from_pass(r.all_verified),
                        result: serde_json::to_value(&r).unwrap(),
                    })
                }
            }
        }
        Command::Reproduce {
            preset,
            p,
            seed,
            count,
        } => reproduce(*preset, *p, *seed, *count),
    }
}

fn reproduce(preset: Preset, p: Option<u64>, seed: Option<u64>, count: usize) -> CliResult<Report> {
    let tuple = |q: u64| -> CliResult<Report> {
        let (problem, w) = presets::published_tuple_witness(q)?;
        let ctx = problem.context();
        let verified = w.as_ref().is_some_and(|w| problem.verify(w).unwrap_or(false));
        Ok(Report {
            status: Status::from_pass(verified),
            result: json!({
                "p": q,
                "witness": w.map(|w| w.to_json(ctx)),
                "verified": verified,
            }),
        })
    };
    match preset {
        Preset::F11Table => {
            let (problem, w) = presets::f11_table()?;
            let ok = problem.verify(&w)?;
            Ok(Report {
                status: Status::from_pass(ok),
                result: json!({"witness": w.to_json(problem.context()), "verified": ok}),
            })
        }
        Preset::F17X => tuple(17),
        Preset::F23X => tuple(23),
        Preset::F29X => tuple(29),
        Preset::ConicCensus | Preset::WeilSuite => {
            let Some(p) = p else {
                return usage("-p/--prime is required for this preset");
            };
            let seed = require_seed(seed, "this preset")?;
            let bad_p = |e: ffvc_core::Error| CliError::Usage(format!("-p: {e}"));
            if matches!(preset, Preset::ConicCensus) {
                let c = presets::conic_census(p, count, seed).map_err(bad_p)?;
                Ok(Report {
                    status: Status::from_pass(c.counts_ok && c.salem_ok && c.intersections_ok),
                    result: serde_json::to_value(&c).unwrap(),
                })
            } else {
                let w = presets::weil_suite(p, count, seed).map_err(bad_p)?;
                Ok(Report {
                    status: Status::from_pass(w.pass),
                    result: serde_json::to_value(&w).unwrap(),
                })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    match run(&cli.command) {
        Ok(report) => {
            let config = serde_json::to_value(&cli).unwrap();
            let text = render(cli.format, cli.command.name(), config, &report, start.elapsed().as_secs_f64());
            let _ = writeln!(std::io::stdout(), "{}", text.trim_end());
            ExitCode::from(report.status.exit_code())
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
