//! Subcommand dispatch.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crossprod::hullkernel::{decompose_as_intersection, hull, kernel_of_invariant_set, minimality_dichotomy};
use crossprod::reps_ideals::{ideal_inclusion, rep_aperiodic_window, rep_periodic, Behaviour, Lambda};
use crossprod::scalar::fmt_real;
use crossprod::synthesis::{dichotomy_report, drive_to_e};
use crossprod::transform::{ideal_of_torus_set, zeros_nonempty_report, zeros_of_ideal, zi_closure};
use crossprod::verify::{run_suite, SUITES};
use crossprod::{Error, Exact, Float, NumericMode, Period, Scalar, System};

use crate::config::{parse_config, SystemConfig};
use crate::expr::{parse_elem, parse_ideal, parse_lambda, parse_point, parse_set, parse_torus};
use crate::report::{digest, num, obj, Format, Record};
use crate::{CliError, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

/// Used when neither `--tol`, `CROSSPROD_TOL` nor the config sets a tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;
pub const TOL_ENV: &str = "CROSSPROD_TOL";

#[derive(Parser, Debug)]
#[command(name = "crossprod", version, about = "Computations in crossed-product Banach algebras of small dynamical systems")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Common {
    /// System configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// System configuration given inline, e.g. "kind = finite; sigma = [1, 2, 0]".
    #[arg(long, global = true, value_name = "TEXT", conflicts_with = "config")]
    system: Option<String>,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Zero tolerance for floating point mode.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand, Debug, Clone)]
enum Cmd {
    /// Evaluate an element expression.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
    },
    /// Multiply elements, left to right.
    Mul {
        #[arg(long, required = true, allow_hyphen_values = true)]
        elem: Vec<String>,
    },
    /// The adjoint a*.
    Adj {
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
    },
    /// The l1 norm.
    Norm {
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
    },
    /// The conditional expectation onto C(X).
    E0 {
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
    },
    /// The Fourier transform at a point, as a Laurent polynomial or at one circle point.
    Transform {
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
        #[arg(long)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
    },
    /// A representation matrix: pi_{x,lambda} for periodic x, a window of pi_x otherwise.
    Rep {
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
        #[arg(long)]
        point: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 3)]
        window: u64,
    },
    /// Whether an element lies in an ideal.
    Member {
        #[arg(long)]
        ideal: String,
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
    },
    /// Whether the ideal is contained in the other one.
    Inclusion {
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        other: String,
    },
    /// Whether an ideal is well behaved or plain, with a witness for plain ideals.
    Behaviour {
        #[arg(long)]
        ideal: String,
    },
    /// The hull of an ideal, an invariant closed subset of X.
    Hull {
        #[arg(long)]
        ideal: String,
    },
    /// The kernel of an invariant closed set.
    Kernel {
        #[arg(long)]
        set: String,
    },
    /// Write the kernel of an invariant set as an intersection of canonical ideals.
    Decompose {
        #[arg(long)]
        set: String,
    },
    /// The zero set Z(I) in X x T.
    Zeros {
        #[arg(long)]
        ideal: String,
    },
    /// The ideal of a subset of X x T.
    Isynth {
        #[arg(long)]
        torus: String,
    },
    /// The closure I(Z(I)).
    Zi {
        #[arg(long)]
        ideal: String,
    },
    /// Drive an element of an irrational rotation towards its expectation by averaging.
    Avg {
        #[arg(long, allow_hyphen_values = true)]
        elem: String,
        #[arg(long = "epsilon", visible_alias = "eps", default_value_t = 0.05)]
        eps: f64,
        #[arg(long = "max-rounds", visible_alias = "rounds", default_value_t = 16)]
        rounds: usize,
    },
    /// Run the Galois connection laws for one pair: hk, HK or ZI.
    Galois {
        #[arg(long = "instantiation", visible_alias = "pair")]
        pair: String,
        #[arg(long = "samples", visible_alias = "cases")]
        cases: Option<usize>,
    },
    /// Run a named property suite, or all of them.
    Check {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        cases: Option<usize>,
    },
    /// Whether the system is minimal, with the count of well behaved ideals.
    Minimality,
    /// Free or not, with the supporting evidence.
    Report,
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Eval { .. } => "eval",
            Cmd::Mul { .. } => "mul",
            Cmd::Adj { .. } => "adj",
            Cmd::Norm { .. } => "norm",
            Cmd::E0 { .. } => "e0",
            Cmd::Transform { .. } => "transform",
            Cmd::Rep { .. } => "rep",
            Cmd::Member { .. } => "member",
            Cmd::Inclusion { .. } => "inclusion",
            Cmd::Behaviour { .. } => "behaviour",
            Cmd::Hull { .. } => "hull",
            Cmd::Kernel { .. } => "kernel",
            Cmd::Decompose { .. } => "decompose",
            Cmd::Zeros { .. } => "zeros",
            Cmd::Isynth { .. } => "isynth",
            Cmd::Zi { .. } => "zi",
            Cmd::Avg { .. } => "avg",
            Cmd::Galois { .. } => "galois",
            Cmd::Check { .. } => "check",
            Cmd::Minimality => "minimality",
            Cmd::Report => "report",
        }
    }

    /// The query arguments, in a fixed order, for the inputs digest.
    fn args(&self) -> Vec<(&'static str, String)> {
        let o = |v: &Option<String>| v.clone().unwrap_or_default();
        match self {
            Cmd::Eval { elem } | Cmd::Adj { elem } | Cmd::Norm { elem } | Cmd::E0 { elem } => vec![("elem", elem.clone())],
            Cmd::Mul { elem } => elem.iter().map(|e| ("elem", e.clone())).collect(),
            Cmd::Transform { elem, point, lambda } => vec![("elem", elem.clone()), ("point", point.clone()), ("lambda", o(lambda))],
            Cmd::Rep { elem, point, lambda, window } => {
                vec![("elem", elem.clone()), ("point", point.clone()), ("lambda", o(lambda)), ("window", window.to_string())]
            }
            Cmd::Member { ideal, elem } => vec![("ideal", ideal.clone()), ("elem", elem.clone())],
            Cmd::Inclusion { ideal, other } => vec![("ideal", ideal.clone()), ("other", other.clone())],
            Cmd::Behaviour { ideal } | Cmd::Hull { ideal } | Cmd::Zeros { ideal } | Cmd::Zi { ideal } => vec![("ideal", ideal.clone())],
            Cmd::Kernel { set } | Cmd::Decompose { set } => vec![("set", set.clone())],
            Cmd::Isynth { torus } => vec![("torus", torus.clone())],
            Cmd::Avg { elem, eps, rounds } => vec![("elem", elem.clone()), ("eps", fmt_real(*eps)), ("rounds", rounds.to_string())],
            Cmd::Galois { pair, cases } => vec![("pair", pair.clone()), ("cases", cases.map(|c| c.to_string()).unwrap_or_default())],
            Cmd::Check { suite, cases } => vec![("suite", suite.clone()), ("cases", cases.map(|c| c.to_string()).unwrap_or_default())],
            Cmd::Minimality | Cmd::Report => Vec::new(),
        }
    }

    fn needs_system(&self) -> bool {
        !matches!(self, Cmd::Galois { .. } | Cmd::Check { .. })
    }
}

/// Exit code and the text for each output stream.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Ctx {
    sys: Arc<System>,
    tol: f64,
    seed: u64,
}

type Out = Result<(Value, Vec<Value>), CliError>;

fn s<T: ToString>(v: T) -> Value {
    Value::String(v.to_string())
}

fn lambda_scalar<S: Scalar>(l: &Lambda<S>) -> Result<S, CliError> {
    if !l.is_unimodular() {
        return Err(Error::Precondition(format!("{} is not on the unit circle", l.render())).into());
    }
    l.as_scalar()
        .ok_or_else(|| Error::Unsupported(format!("{} has no exact value; use float mode", l.render())).into())
}

fn behaviour_witness<S: Scalar>(b: &Behaviour<S>) -> Vec<Value> {
    match b {
        Behaviour::WellBehaved => Vec::new(),
        Behaviour::BadlyBehaved { f, a } | Behaviour::Plain { f, a } => vec![obj([("a", s(a.render())), ("f", s(f.render()))])],
    }
}

fn exec<S: Scalar>(cmd: &Cmd, cx: &Ctx) -> Out {
    let sys = &cx.sys;
    let elem = |t: &str| parse_elem::<S>(t, sys).map_err(CliError::from);
    let ideal = |t: &str| parse_ideal::<S>(t, sys).map_err(CliError::from);
    Ok(match cmd {
        Cmd::Eval { elem: e } => (s(elem(e)?.render()), Vec::new()),
        Cmd::Mul { elem: es } => {
            if es.len() < 2 {
                return Err(CliError::Usage("mul needs at least two --elem arguments".into()));
            }
            let mut acc = elem(&es[0])?;
            for e in &es[1..] {
                acc = acc.mul(&elem(e)?)?;
            }
            (s(acc.render()), Vec::new())
        }
        Cmd::Adj { elem: e } => (s(elem(e)?.adj().render()), Vec::new()),
        Cmd::Norm { elem: e } => (num(elem(e)?.norm()), Vec::new()),
        Cmd::E0 { elem: e } => (s(elem(e)?.e0().render()), Vec::new()),
        Cmd::Transform { elem: e, point, lambda } => {
            let a = elem(e)?;
            let x = parse_point(point, sys)?;
            match lambda {
                Some(l) => {
                    let l = parse_lambda::<S>(l, sys)?;
                    (s(a.fourier(&x, &lambda_scalar(&l)?)?.render()), Vec::new())
                }
                None => {
                    let cs = a.fourier_coeffs(&x)?;
                    let terms = cs.iter().map(|(n, c)| obj([("n", json!(n)), ("c", s(c.render()))])).collect();
                    (Value::Array(terms), Vec::new())
                }
            }
        }
        Cmd::Rep { elem: e, point, lambda, window } => {
            let a = elem(e)?;
            let x = parse_point(point, sys)?;
            match sys.period(&x)? {
                Period::Periodic(p) => {
                    let l = match lambda {
                        Some(l) => parse_lambda::<S>(l, sys)?,
                        None => Lambda::one(),
                    };
                    let m = rep_periodic(&x, &lambda_scalar(&l)?, &a)?;
                    (s(m.render()), vec![obj([("dim", json!(p)), ("lambda", s(l.render()))])])
                }
                Period::Aperiodic => {
                    if lambda.is_some() {
                        return Err(Error::Precondition(format!("{x} is aperiodic and takes no lambda")).into());
                    }
                    if *window > 64 {
                        return Err(CliError::Usage("--window is at most 64".into()));
                    }
                    let m = rep_aperiodic_window(&x, *window, &a)?;
                    (s(m.render()), vec![obj([("dim", json!(2 * window + 1)), ("window", json!(window))])])
                }
            }
        }
        Cmd::Member { ideal: i, elem: e } => {
            let (i, a) = (ideal(i)?, elem(e)?);
            (json!(i.member(sys, &a, cx.tol)?), Vec::new())
        }
        Cmd::Inclusion { ideal: i, other } => {
            let (i, j) = (ideal(i)?, ideal(other)?);
            (json!(ideal_inclusion(sys, &i, &j)?), Vec::new())
        }
        Cmd::Behaviour { ideal: i } => {
            let b = ideal(i)?.behaviour(sys)?;
            (s(b.name()), behaviour_witness(&b))
        }
        Cmd::Hull { ideal: i } => {
            let h = hull(sys, &ideal(i)?, cx.tol)?;
            (s(&h.set), h.notes.into_iter().map(Value::String).collect())
        }
        Cmd::Kernel { set } => {
            let set = parse_set(set, sys)?;
            (s(kernel_of_invariant_set::<S>(sys, &set)?.render()), Vec::new())
        }
        Cmd::Decompose { set } => {
            let set = parse_set(set, sys)?;
            let parts = decompose_as_intersection::<S>(sys, &set)?;
            (Value::Array(parts.iter().map(|h| s(h.render())).collect()), Vec::new())
        }
        Cmd::Zeros { ideal: i } => {
            let i = ideal(i)?;
            let z = zeros_of_ideal(sys, &i, cx.tol)?;
            let r = zeros_nonempty_report(sys, &i, cx.tol)?;
            let w = match r.witness {
                Some((x, l)) => obj([("point", s(x)), ("lambda", s(l.render()))]),
                None => Value::Null,
            };
            (s(z.render()), vec![obj([("nonempty", json!(r.nonempty)), ("witness", w), ("note", s(r.note))])])
        }
        Cmd::Isynth { torus } => {
            let t = parse_torus::<S>(torus, sys)?;
            (s(ideal_of_torus_set(sys, &t)?.render()), Vec::new())
        }
        Cmd::Zi { ideal: i } => (s(zi_closure(sys, &ideal(i)?, cx.tol)?.render()), Vec::new()),
        Cmd::Avg { elem: e, eps, rounds } => {
            if S::MODE != NumericMode::Float {
                return Err(Error::Unsupported("averaging runs in float mode".into()).into());
            }
            if !(*eps > 0.0) || *rounds > 64 {
                return Err(CliError::Usage("avg needs --epsilon > 0 and --max-rounds <= 64".into()));
            }
            let a = parse_elem::<Float>(e, sys)?;
            let r = drive_to_e(&a, *eps, *rounds)?;
            let outcome = obj([
                ("reached", json!(r.reached)),
                ("residual", num(r.final_residual())),
                ("order", json!(r.final_order())),
                ("resonant", json!(r.resonant)),
            ]);
            let w = r.rounds.iter().map(|x| obj([("round", json!(x.round)), ("order", json!(x.order)), ("residual", num(x.residual))]));
            (outcome, w.collect())
        }
        Cmd::Minimality => {
            let m = minimality_dichotomy(sys);
            let outcome = obj([
                ("minimal", json!(m.minimal)),
                ("well_behaved_ideals", m.well_behaved_count.map_or(Value::Null, |c| s(c))),
                ("reason", s(m.reason)),
            ]);
            let sets = m.invariant_sets.unwrap_or_default();
            let w = if sets.len() <= 64 { sets.iter().map(s).collect() } else { Vec::new() };
            (outcome, w)
        }
        Cmd::Report => {
            let d = dichotomy_report::<S>(sys, cx.seed)?;
            let mut w = Vec::new();
            if let Some((x, i, b)) = &d.witness {
                w.push(obj([("point", s(x)), ("ideal", s(i.render())), ("behaviour", s(b.name()))]));
                w.extend(behaviour_witness(b));
            }
            if let Some(r) = &d.averaging {
                w.push(obj([
                    ("reached", json!(r.reached)),
                    ("residual", num(r.final_residual())),
                    ("order", json!(r.final_order())),
                ]));
            }
            (obj([("free", json!(d.free))]), w)
        }
        Cmd::Galois { .. } | Cmd::Check { .. } => unreachable!("handled without a system"),
    })
}

fn suites(cmd: &Cmd, seed: u64) -> Result<Vec<(Record, bool)>, CliError> {
    let (names, cases): (Vec<String>, _) = match cmd {
        Cmd::Galois { pair, cases } => (vec![format!("galois.{pair}")], *cases),
        Cmd::Check { suite, cases } if suite == "all" => (SUITES.iter().map(|x| x.0.to_string()).collect(), *cases),
        Cmd::Check { suite, cases } => (vec![suite.clone()], *cases),
        _ => unreachable!("only suite commands"),
    };
    let mut out = Vec::new();
    for name in names {
        let r = run_suite(&name, seed, cases)?;
        let rec = Record {
            operation: cmd.name().into(),
            inputs_digest: digest(&[("suite", name.clone()), ("seed", seed.to_string()), ("cases", r.cases.to_string())]),
            outcome: obj([("suite", s(&name)), ("passed", json!(r.passed())), ("cases", json!(r.cases))]),
            witnesses: r.failures.iter().map(s).collect(),
        };
        out.push((rec, r.passed()));
    }
    Ok(out)
}

fn load_config(c: &Common) -> Result<Option<SystemConfig>, CliError> {
    let text = match (&c.config, &c.system) {
        (Some(path), _) => std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        (None, Some(t)) => t.clone(),
        (None, None) => return Ok(None),
    };
    Ok(Some(parse_config(&text)?))
}

/// `--tol`, then the environment, then the config, then [`DEFAULT_TOL`].
fn resolve_tol(flag: Option<f64>, env: Option<String>, cfg: Option<f64>) -> Result<f64, CliError> {
    let env = match env {
        Some(v) => Some(v.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("{TOL_ENV} is not a number: {v}")))?),
        None => None,
    };
    let t = flag.or(env).or(cfg).unwrap_or(DEFAULT_TOL);
    if !(t >= 0.0 && t.is_finite()) {
        return Err(CliError::Usage(format!("tolerance must be a nonnegative number, got {t}")));
    }
    Ok(t)
}

fn records(cli: &Cli) -> Result<(Vec<Record>, bool), CliError> {
    let cmd = &cli.cmd;
    if !cmd.needs_system() {
        let rs = suites(cmd, cli.common.seed)?;
        let ok = rs.iter().all(|r| r.1);
        return Ok((rs.into_iter().map(|r| r.0).collect(), ok));
    }
    let cfg = load_config(&cli.common)?
        .ok_or_else(|| CliError::Usage(format!("{} needs a system: pass --config FILE or --system TEXT", cmd.name())))?;
    let tol = resolve_tol(cli.common.tol, std::env::var(TOL_ENV).ok(), cfg.tolerance)?;
    let cx = Ctx { sys: Arc::new(cfg.system.clone()), tol, seed: cli.common.seed };
    let (outcome, witnesses) = match cfg.mode {
        NumericMode::Exact => exec::<Exact>(cmd, &cx)?,
        NumericMode::Float => exec::<Float>(cmd, &cx)?,
    };
    let mut parts = vec![("operation", cmd.name().to_string()), ("config", cfg.render())];
    parts.extend(cmd.args());
    parts.push(("seed", cli.common.seed.to_string()));
    parts.push(("tol", fmt_real(tol)));
    let rec = Record { operation: cmd.name().into(), inputs_digest: digest(&parts), outcome, witnesses };
    Ok((vec![rec], true))
}

/// Runs one command line (`argv[0]` is the program name).
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let format = match cli.common.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    let (recs, ok) = match records(&cli) {
        Ok(r) => r,
        Err(e) => return Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("{e}\n") },
    };
    let mut text = String::new();
    for r in &recs {
        r.write(format, &mut text);
    }
    let code = if ok { EXIT_OK } else { EXIT_FAILURE };
    match &cli.common.out {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr: String::new() },
            Err(e) => {
                let e = CliError::Io(format!("{}: {e}", path.display()));
                Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("{e}\n") }
            }
        },
        None => Outcome { code, stdout: text, stderr: String::new() },
    }
}
