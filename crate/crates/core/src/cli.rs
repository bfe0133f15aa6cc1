//! Command-line front end. `run` returns the process exit code.

use std::collections::BTreeMap;
use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::approx::{gap_approx, qptas_with, LogBase, QptasOptions, DEFAULT_ANCHOR_BUDGET};
use crate::baseline::{inducibility_gap, solve_maximin, solve_sse, Gap};
use crate::error::{Error, Result};
use crate::exact::{rse_curve_with, solve_exact_with, ExactOptions, RseSolution, DEFAULT_EXACT_CAP};
use crate::game::{evaluate, Game, GameValueReport, MixedStrategy};
use crate::lab::{self, RandomOptions, X3cInstance};
use crate::learning::{self, LearnSolver, NoiseModel, NoisyGameOracle};
use crate::lp::set_lp_dump;
use crate::scalar::{parse_rational_text, Rational, Scalar};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "rsekit", version, about = "Robust Stackelberg equilibrium toolkit")]
pub struct Cli {
    /// Worker threads; 0 uses every core. Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Print every LP to stderr before solving it.
    #[arg(long, global = true)]
    pub lp_dump: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve a game for one delta.
    Solve(SolveArgs),
    /// Sweep u_RSE over a delta grid; CSV output.
    Curve(CurveArgs),
    /// Emit a game: catalog entry, X3C reduction or random instance.
    Gen(GenArgs),
    /// Learn a robust commitment from simulated bandit feedback.
    Learn(LearnArgs),
    /// Recheck a solution emitted by `solve`.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolveMethod {
    Exact,
    Sse,
    Maximin,
    Gap,
    GapApprox,
    Qptas,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Arith {
    Float,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LearnSolverArg {
    Exact,
    Qptas,
    GapApprox,
}

#[derive(Args, Debug, Clone)]
pub struct SolverFlags {
    #[arg(long, value_enum, default_value_t = Arith::Float)]
    pub arith: Arith,
    /// Delta is given in the game's raw follower units.
    #[arg(long)]
    pub delta_raw: bool,
    /// Solve every response-set tuple instead of the pruned search.
    #[arg(long)]
    pub exhaustive: bool,
    /// Largest follower action count for the exact solver.
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    pub cap: usize,
    /// Largest anchor count for the QPTAS.
    #[arg(long, default_value_t = DEFAULT_ANCHOR_BUDGET)]
    pub budget: u64,
    /// Use log base 2 in the QPTAS support size.
    #[arg(long)]
    pub log2: bool,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Game JSON file, or `-` for stdin.
    pub game: PathBuf,
    #[arg(long, value_enum, default_value_t = SolveMethod::Exact)]
    pub method: SolveMethod,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub epsilon: Option<String>,
    #[command(flatten)]
    pub flags: SolverFlags,
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    pub game: PathBuf,
    /// `start:stop:step`, inclusive of stop.
    #[arg(long)]
    pub grid: String,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[command(flatten)]
    pub flags: SolverFlags,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, conflicts_with_all = ["x3c", "random"])]
    pub catalog: Option<String>,
    #[arg(long, requires = "catalog")]
    pub params: Option<String>,
    #[arg(long, conflicts_with = "random", requires_all = ["delta", "eps"])]
    pub x3c: Option<PathBuf>,
    #[arg(long)]
    pub delta: Option<String>,
    #[arg(long)]
    pub eps: Option<String>,
    /// `m,n,seed` or `m,n` together with `--seed`.
    #[arg(long)]
    pub random: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Draw random entries from multiples of 1/GRID.
    #[arg(long)]
    pub grid: Option<u32>,
    /// Resample random games until the inducibility gap exceeds this.
    #[arg(long)]
    pub min_gap: Option<String>,
}

#[derive(Args, Debug)]
pub struct LearnArgs {
    #[arg(long)]
    pub game: PathBuf,
    #[arg(long)]
    pub delta: String,
    #[arg(long)]
    pub epsilon: String,
    #[arg(long)]
    pub iota: String,
    /// `none`, `bernoulli` or `gaussian:SIGMA`.
    #[arg(long, default_value = "bernoulli")]
    pub noise: String,
    /// Number of runs; run `r` uses seed `seed + r`.
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = LearnSolverArg::Exact)]
    pub solver: LearnSolverArg,
    /// QPTAS accuracy when `--solver qptas`.
    #[arg(long, default_value = "0.2")]
    pub qptas_eps: f64,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub game: PathBuf,
    /// Solution JSON produced by `solve`.
    #[arg(long)]
    pub solution: PathBuf,
    #[arg(long, value_enum, default_value_t = Arith::Float)]
    pub arith: Arith,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    run_cli(cli, out, err)
}

pub fn run_cli(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if cli.lp_dump {
        set_lp_dump(true);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    let result = pool.install(|| dispatch(&cli.command));
    match result {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_FAILURE;
            }
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Mismatch(text)) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_FAILURE
        }
        Err(Failure::Solver(e)) if e.is_guard() => {
            let obj = json!({"error": {"kind": e.kind(), "message": e.to_string()}});
            let _ = writeln!(out, "{obj}");
            let _ = writeln!(err, "error: {e}");
            EXIT_GUARD
        }
        Err(Failure::Solver(e)) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::InvalidDelta(_) | Error::InvalidParameter(_) | Error::UnknownCatalog(_) => EXIT_USAGE,
                _ => EXIT_FAILURE,
            }
        }
    }
}

enum Failure {
    Usage(String),
    Solver(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Solver(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

fn dispatch(cmd: &Command) -> CliResult<String> {
    match cmd {
        Command::Solve(a) => match a.flags.arith {
            Arith::Float => solve_cmd::<f64>(a),
            Arith::Exact => solve_cmd::<Rational>(a),
        },
        Command::Curve(a) => match a.flags.arith {
            Arith::Float => curve_cmd::<f64>(a),
            Arith::Exact => curve_cmd::<Rational>(a),
        },
        Command::Gen(a) => gen_cmd(a),
        Command::Learn(a) => learn_cmd(a),
        Command::Verify(a) => match a.arith {
            Arith::Float => verify_cmd::<f64>(a),
            Arith::Exact => verify_cmd::<Rational>(a),
        },
    }
}

fn read_text(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn read_json(path: &PathBuf) -> Result<Value> {
    serde_json::from_str(&read_text(path)?).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn load_game<T: Scalar>(path: &PathBuf) -> Result<Game<T>> {
    Game::from_json(&read_json(path)?)
}

fn parse_scalar<T: Scalar>(text: &str, what: &str) -> CliResult<T> {
    match T::parse_text(text) {
        Some(v) => Ok(v),
        None => usage(format!("cannot parse {what} `{text}`")),
    }
}

fn num<T: Scalar>(v: &T) -> Value {
    let f = v.to_f64();
    json!(if f == 0.0 { 0.0 } else { f })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn report_json<T: Scalar>(rep: &GameValueReport<T>) -> Map<String, Value> {
    let mut o = Map::new();
    o.insert("value".into(), num(&rep.leader_value));
    o.insert("strategy".into(), Value::Array(rep.strategy.probs().iter().map(num).collect()));
    o.insert("response".into(), json!(rep.response));
    o.insert("response_set".into(), json!(rep.response_set.actions()));
    o.insert("follower_value".into(), num(&rep.follower_value));
    o.insert("tie_breaking".into(), json!(rep.tie_breaking.as_str()));
    o
}

fn exact_fields<T: Scalar>(o: &mut Map<String, Value>, rep: &GameValueReport<T>, delta: Option<&T>) {
    if !T::EXACT {
        return;
    }
    let mut e = Map::new();
    if let Some(d) = delta {
        e.insert("delta".into(), json!(d.to_text()));
    }
    e.insert("value".into(), json!(rep.leader_value.to_text()));
    e.insert("strategy".into(), json!(rep.strategy.probs().iter().map(Scalar::to_text).collect::<Vec<_>>()));
    o.insert("exact".into(), Value::Object(e));
}

pub fn solution_json<T: Scalar>(sol: &RseSolution<T>, arith: &str) -> Value {
    let mut o = Map::new();
    o.insert("method".into(), json!(sol.method.as_str()));
    o.insert("arith".into(), json!(arith));
    o.insert("delta".into(), num(&sol.delta));
    o.extend(report_json(&sol.outcome));
    o.insert("lp_count".into(), json!(sol.lp_count));
    if let Some(t) = &sol.trace {
        o.insert(
            "trace".into(),
            json!({
                "set": t.chosen.set.actions(),
                "j_tilde": t.chosen.j_tilde,
                "j": t.chosen.j,
                "lp_value": num(&t.lp_value),
                "repaired_set": t.repaired_set.actions(),
                "repaired_response": t.repaired_response,
            }),
        );
    }
    if let Some(c) = &sol.certificate {
        let mut details: Map<String, Value> = c.details.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        details.insert("lower_bound".into(), num(&c.lower_bound));
        o.insert("certificate".into(), Value::Object(details));
    }
    exact_fields(&mut o, &sol.outcome, Some(&sol.delta));
    Value::Object(o)
}

fn resolve_delta<T: Scalar>(game: &Game<T>, text: Option<&String>, raw: bool) -> CliResult<T> {
    let Some(text) = text else { return usage("--delta is required for this method") };
    let d: T = parse_scalar(text, "delta")?;
    Ok(if raw { game.scale_delta(&d) } else { d })
}

fn solve_cmd<T: Scalar>(a: &SolveArgs) -> CliResult<String> {
    let game: Game<T> = load_game(&a.game)?;
    let arith = T::NAME;
    let exact_opts = ExactOptions { exhaustive: a.flags.exhaustive, cap: a.flags.cap };
    let value = match a.method {
        SolveMethod::Exact => {
            let d = resolve_delta(&game, a.delta.as_ref(), a.flags.delta_raw)?;
            solution_json(&solve_exact_with(&game, &d, exact_opts)?, arith)
        }
        SolveMethod::GapApprox => {
            let d = resolve_delta(&game, a.delta.as_ref(), a.flags.delta_raw)?;
            solution_json(&gap_approx(&game, &d)?, arith)
        }
        SolveMethod::Qptas => {
            let d = resolve_delta(&game, a.delta.as_ref(), a.flags.delta_raw)?;
            let Some(e) = a.epsilon.as_ref() else { return usage("--epsilon is required for qptas") };
            let eps: T = parse_scalar(e, "epsilon")?;
            let opts = QptasOptions {
                log_base: if a.flags.log2 { LogBase::Two } else { LogBase::Natural },
                budget: a.flags.budget,
            };
            solution_json(&qptas_with(&game, &d, &eps, opts)?, arith)
        }
        SolveMethod::Sse | SolveMethod::Maximin => {
            let rep = if a.method == SolveMethod::Sse { solve_sse(&game)? } else { solve_maximin(&game)? };
            let mut o = Map::new();
            o.insert("method".into(), json!(if a.method == SolveMethod::Sse { "sse" } else { "maximin" }));
            o.insert("arith".into(), json!(arith));
            o.extend(report_json(&rep));
            exact_fields(&mut o, &rep, None);
            Value::Object(o)
        }
        SolveMethod::Gap => {
            let gap = inducibility_gap(&game)?;
            let mut o = Map::new();
            o.insert("method".into(), json!("gap"));
            o.insert("arith".into(), json!(arith));
            match &gap {
                Gap::Infinite => o.insert("gap".into(), json!("inf")),
                Gap::Finite(g) => o.insert("gap".into(), num(g)),
            };
            if T::EXACT {
                o.insert("exact".into(), json!({"gap": gap.to_string()}));
            }
            Value::Object(o)
        }
    };
    Ok(pretty(&value))
}

/// Grid points `start, start + step, ..` up to and including `stop`, computed exactly.
pub fn parse_grid(text: &str) -> Result<Vec<Rational>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [a, b, s] = parts.as_slice() else {
        return Err(Error::Parse(format!("grid `{text}` must be start:stop:step")));
    };
    let p = |t: &str| parse_rational_text(t).ok_or_else(|| Error::Parse(format!("bad grid value `{t}`")));
    let (start, stop, step) = (p(a)?, p(b)?, p(s)?);
    if step <= Rational::from_ratio(0, 1) || start > stop {
        return Err(Error::Parse(format!("grid `{text}` needs step > 0 and start <= stop")));
    }
    let mut out = Vec::new();
    let mut v = start;
    while v <= stop {
        out.push(v.clone());
        v += step.clone();
        if out.len() > 100_000 {
            return Err(Error::Parse("grid has more than 100000 points".into()));
        }
    }
    Ok(out)
}

fn curve_cmd<T: Scalar>(a: &CurveArgs) -> CliResult<String> {
    let game: Game<T> = load_game(&a.game)?;
    let grid = parse_grid(&a.grid)?;
    let deltas: Vec<T> = grid
        .iter()
        .map(|d| {
            let v = T::parse_text(&d.to_text()).expect("rational text parses");
            if a.flags.delta_raw {
                game.scale_delta(&v)
            } else {
                v
            }
        })
        .collect();
    let opts = ExactOptions { exhaustive: a.flags.exhaustive, cap: a.flags.cap };
    let curve = rse_curve_with(&game, &deltas, opts)?;
    let gap = match &curve.gap {
        Gap::Infinite => "inf".to_string(),
        Gap::Finite(g) => g.to_f64().to_string(),
    };
    Ok(match a.format {
        OutputFormat::Csv => {
            let mut s = String::from("delta,value,sse,maximin,gap\n");
            for (d, sol) in grid.iter().zip(&curve.solutions) {
                s.push_str(&format!(
                    "{},{},{},{},{}\n",
                    d.to_f64(),
                    sol.value().to_f64(),
                    curve.sse.to_f64(),
                    curve.maximin.to_f64(),
                    gap
                ));
            }
            s
        }
        OutputFormat::Json => {
            let points: Vec<Value> = grid
                .iter()
                .zip(&curve.solutions)
                .map(|(d, sol)| json!({"delta": d.to_f64(), "value": num(sol.value())}))
                .collect();
            pretty(&json!({
                "points": points,
                "sse": num(&curve.sse),
                "maximin": num(&curve.maximin),
                "gap": gap,
            }))
        }
    })
}

fn gen_cmd(a: &GenArgs) -> CliResult<String> {
    let value = if let Some(name) = &a.catalog {
        let params: BTreeMap<String, Rational> = lab::parse_params(a.params.as_deref().unwrap_or(""))?;
        lab::catalog(name, &params)?.game.to_json()
    } else if let Some(path) = &a.x3c {
        let inst = X3cInstance::parse(&read_text(path)?)?;
        let d: Rational = parse_scalar(a.delta.as_deref().unwrap_or(""), "delta")?;
        let e: Rational = parse_scalar(a.eps.as_deref().unwrap_or(""), "eps")?;
        lab::reduction(&inst, &d, &e)?.to_json()
    } else if let Some(text) = &a.random {
        let nums: Vec<u64> = match text.split(',').map(|t| t.trim().parse::<u64>()).collect() {
            Ok(v) => v,
            Err(_) => return usage(format!("bad --random `{text}`")),
        };
        let (m, n, seed) = match (nums.as_slice(), a.seed) {
            ([m, n, s], None) => (*m, *n, *s),
            ([m, n, s], Some(t)) if s == &t => (*m, *n, *s),
            ([_, _, _], Some(_)) => return usage("seed given twice with different values"),
            ([m, n], Some(s)) => (*m, *n, s),
            ([_, _], None) => return usage("random generation needs a seed: --random m,n,seed or --seed"),
            _ => return usage(format!("bad --random `{text}`")),
        };
        match a.grid {
            Some(q) => {
                let min_gap = match &a.min_gap {
                    Some(t) => Some(parse_scalar::<Rational>(t, "min-gap")?),
                    None => None,
                };
                let opts = RandomOptions { grid: Some(q), min_gap, ..Default::default() };
                lab::gen_random::<Rational>(m as usize, n as usize, seed, &opts)?.to_json()
            }
            None => {
                let min_gap = match &a.min_gap {
                    Some(t) => Some(parse_scalar::<f64>(t, "min-gap")?),
                    None => None,
                };
                let opts = RandomOptions { grid: None, min_gap, ..Default::default() };
                lab::gen_random::<f64>(m as usize, n as usize, seed, &opts)?.to_json()
            }
        }
    } else {
        return usage("gen needs one of --catalog, --x3c or --random");
    };
    Ok(pretty(&value))
}

fn learn_cmd(a: &LearnArgs) -> CliResult<String> {
    let Some(base_seed) = a.seed else { return usage("learn needs --seed") };
    let game: Game<f64> = load_game(&a.game)?;
    let delta: f64 = parse_scalar(&a.delta, "delta")?;
    let eps: f64 = parse_scalar(&a.epsilon, "epsilon")?;
    let iota: f64 = parse_scalar(&a.iota, "iota")?;
    if delta.is_nan() || delta <= 0.0 {
        return usage("delta must be positive");
    }
    let noise = NoiseModel::parse(&a.noise)?;
    let solver = match a.solver {
        LearnSolverArg::Exact => LearnSolver::Exact,
        LearnSolverArg::Qptas => LearnSolver::Qptas { eps: a.qptas_eps },
        LearnSolverArg::GapApprox => LearnSolver::GapApprox,
    };
    let mut floor = learning::guarantee_floor(&game, &delta, &eps)?;
    if let LearnSolver::Qptas { eps: q } = solver {
        floor -= q;
    }
    let rows: Vec<String> = (0..a.seeds)
        .into_par_iter()
        .map(|r| -> Result<String> {
            let seed = base_seed.wrapping_add(r);
            let mut oracle = NoisyGameOracle::new(&game, noise, seed);
            let (estimate, t) = learning::sample_estimate(&mut oracle, eps, iota)?;
            let sol = learning::learn_from_estimate(&estimate, &delta, &eps, solver)?;
            let value = evaluate(&game, &sol.outcome.strategy, &delta)?.leader_value;
            let (el, ef) = learning::sup_errors(&game, &estimate);
            let pass = value >= floor - crate::scalar::FEASIBILITY_TOL;
            Ok(format!("{seed},{t},{el},{ef},{value},{floor},{pass}\n"))
        })
        .collect::<Result<_>>()?;
    let mut s = String::from("seed,T,sup_err_l,sup_err_f,value,floor,pass\n");
    s.extend(rows);
    Ok(s)
}

fn verify_cmd<T: Scalar>(a: &VerifyArgs) -> CliResult<String> {
    let game: Game<T> = load_game(&a.game)?;
    let sol = read_json(&a.solution)?;
    let exact = sol.get("exact");
    let pick = |key: &str| -> CliResult<Value> {
        let v = if T::EXACT { exact.and_then(|e| e.get(key)).or_else(|| sol.get(key)) } else { sol.get(key) };
        match v {
            Some(v) => Ok(v.clone()),
            None => usage(format!("solution lacks `{key}`")),
        }
    };
    let as_scalar = |v: &Value| -> CliResult<T> {
        match v {
            Value::String(s) => parse_scalar(s, "number"),
            Value::Number(n) => match n.as_f64().and_then(T::from_f64) {
                Some(x) => Ok(x),
                None => usage(format!("bad number {n}")),
            },
            other => usage(format!("expected a number, got {other}")),
        }
    };
    let probs = match pick("strategy")? {
        Value::Array(items) => items.iter().map(as_scalar).collect::<CliResult<Vec<T>>>()?,
        _ => return usage("`strategy` must be an array"),
    };
    let delta = as_scalar(&pick("delta")?)?;
    let claimed = as_scalar(&pick("value")?)?;
    let claimed_response = sol.get("response").and_then(Value::as_u64);
    let x = MixedStrategy::new(probs)?;
    let rep = evaluate(&game, &x, &delta)?;
    let tol = if T::EXACT { T::zero() } else { T::from_f64(a.tolerance).unwrap_or_else(T::zero) };
    let value_ok = (rep.leader_value.clone() - claimed.clone()).abs_val() <= tol;
    let response_ok = claimed_response.is_none_or(|j| j as usize == rep.response);
    let ok = value_ok && response_ok;
    let text = pretty(&json!({
        "ok": ok,
        "claimed_value": num(&claimed),
        "recomputed_value": num(&rep.leader_value),
        "recomputed_response": rep.response,
        "response_set": rep.response_set.actions(),
    }));
    if ok {
        Ok(text)
    } else {
        Err(Failure::Mismatch(text))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_exact_and_inclusive() {
        let g = parse_grid("0.05:1.5:0.05").unwrap();
        assert_eq!(g.len(), 30);
        assert_eq!(g[29], Rational::from_ratio(3, 2));
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["rsekit", "solve"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["rsekit", "gen", "--random", "2,2"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["rsekit", "--help"], &mut out, &mut err), EXIT_OK);
    }
}
