//! The `bestofn` command line.
//!
//! Every command prints one JSON [`OutputEnvelope`] (or CSV for plot data)
//! to stdout or to `--out`. Exit codes: 0 success, 1 a check failed, 2 usage
//! error, 3 capacity or numerical failure.

pub mod output;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::PathBuf;

use bestofn::exact::{reach_table, MarginDistribution, DEFAULT_EXACT_CAP};
use bestofn::formulas::{
    antiok_exact_prob, antiok_limit_pmf, approx_error_bound, expected_profit_catalan, gamma_race_bound,
    martingale_bounds, negbin_approx_pmf, negbin_tail_bound, CatalanTable,
};
use bestofn::game::play_match_traced;
use bestofn::montecarlo::{block_rng, run, SamplerKind, SimulationPlan, RNG_ALGORITHM};
use bestofn::polya::{density_grid, polya_symmetric_expected_profit, polya_win_probability, DEFAULT_TOL};
use bestofn::stats::tv_to_exact;
use bestofn::verify::{identity_checks, run_suite, Scale, Suite, VerifyOptions};
use bestofn::{exact_distribution, DpOptions, Player, Regime, RegimeKind, Scalar, ScalarMode};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

pub use output::{OutputEnvelope, Provenance};

/// Caps the number of worker threads used by simulations.
pub const THREADS_ENV: &str = "BESTOFN_THREADS";

#[derive(Parser, Debug)]
#[command(name = "bestofn", version, about = "Winner's margin in first-to-n matches")]
pub struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact law of the winner's margin by dynamic programming.
    Exact(ExactArgs),
    /// Closed forms and bounds.
    #[command(subcommand)]
    Formula(FormulaCmd),
    /// Monte Carlo simulation.
    Simulate(SimulateArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// CSV data for plots.
    #[command(subcommand)]
    Plotdata(PlotCmd),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegimeName {
    Constant,
    Polya,
    Antiok,
}

#[derive(Args, Clone, Debug)]
pub struct RegimeArgs {
    #[arg(long, value_enum)]
    pub regime: RegimeName,
    /// Wins needed to take the match.
    #[arg(long)]
    pub n: u32,
    /// Round probability for the constant regime: "num/den" (exact) or a
    /// decimal (float).
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    #[arg(long)]
    pub n1: Option<u32>,
    #[arg(long)]
    pub n2: Option<u32>,
}

impl RegimeArgs {
    pub fn build(&self) -> Result<Regime, CliError> {
        let stray = |flag: &str| CliError::Usage(format!("--{flag} does not apply to --regime {}", self.regime_name()));
        let regime = match self.regime {
            RegimeName::Constant => {
                if self.n1.is_some() || self.n2.is_some() {
                    return Err(stray("n1/--n2"));
                }
                let p = self
                    .p
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("--regime constant needs --p".into()))?;
                Regime::constant(parse_p(p)?, self.n)?
            }
            RegimeName::Polya => {
                if self.p.is_some() {
                    return Err(stray("p"));
                }
                match (self.n1, self.n2) {
                    (Some(a), Some(b)) => Regime::polya(a, b, self.n)?,
                    _ => return Err(CliError::Usage("--regime polya needs --n1 and --n2".into())),
                }
            }
            RegimeName::Antiok => {
                if self.p.is_some() {
                    return Err(stray("p"));
                }
                if self.n1.is_some() || self.n2.is_some() {
                    return Err(stray("n1/--n2"));
                }
                Regime::anti_ok_corral(self.n)?
            }
        };
        Ok(regime)
    }

    fn regime_name(&self) -> &'static str {
        match self.regime {
            RegimeName::Constant => "constant",
            RegimeName::Polya => "polya",
            RegimeName::Antiok => "antiok",
        }
    }

    fn record(&self, params: &mut Map<String, Value>) {
        params.insert("regime".into(), json!(self.regime_name()));
        params.insert("n".into(), json!(self.n));
        if let Some(p) = &self.p {
            params.insert("p".into(), json!(p));
        }
        if let Some(v) = self.n1 {
            params.insert("n1".into(), json!(v));
        }
        if let Some(v) = self.n2 {
            params.insert("n2".into(), json!(v));
        }
    }
}

fn parse_p(s: &str) -> Result<Scalar, CliError> {
    s.parse::<Scalar>()
        .map_err(|e| CliError::Usage(format!("--p: {e}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Float,
}

impl From<ModeArg> for ScalarMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => ScalarMode::Exact,
            ModeArg::Float => ScalarMode::Float,
        }
    }
}

#[derive(Args, Debug)]
pub struct ExactArgs {
    #[command(flatten)]
    pub regime: RegimeArgs,
    /// Arithmetic; defaults to exact when the regime is rational.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Largest n allowed in exact mode.
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    pub max_exact_n: u32,
}

#[derive(Subcommand, Debug)]
pub enum FormulaCmd {
    /// E[Z] for the constant regime through the Catalan series.
    CatalanMean {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Compare with the DP value.
        #[arg(long)]
        check: bool,
    },
    /// Negative binomial approximation of the loser's win count.
    NegbinPmf {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// A single k; all of 0..n when omitted.
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        check: bool,
    },
    /// Exact anti-OK Corral margin law.
    AntiokExact {
        #[arg(long)]
        n: u32,
        /// Margin in 1..=n; all margins when omitted.
        #[arg(long)]
        k: Option<u32>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        check: bool,
    },
    /// Large-n anti-OK Corral margin law, 2^-(k+1).
    AntiokLimit {
        #[arg(long)]
        k: u32,
    },
    /// Limiting Polya win probability of player 1.
    PolyaWinprob {
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        n2: u32,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Compare with the finite-n DP at this target.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 2000)]
        target: u32,
    },
    /// Expected winner's profit for N1 = N2 = n, in all available forms.
    PolyaProfit {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Optional-stopping and concentration bounds.
    Bounds {
        #[arg(long)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        /// Also report the gamma race bound at this rate.
        #[arg(long)]
        lambda: Option<String>,
        /// Also report the negative binomial tail bound at deviation a (m = n).
        #[arg(long)]
        tail_a: Option<f64>,
        /// Fill in DP values and whether each bound holds.
        #[arg(long)]
        check: bool,
    },
    /// Exhaustive identity sweeps up to --max.
    Identities {
        #[arg(long, default_value_t = 30)]
        max: u64,
    },
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub regime: RegimeArgs,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub partitions: u32,
    #[arg(long, default_value = "sequential")]
    pub sampler: String,
    /// Add the TV distance to the exact law.
    #[arg(long)]
    pub compare_exact: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Identities,
    Bounds,
    Oracle,
    Clt,
    Polya,
    Antiok,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Identities => Suite::Identities,
            SuiteArg::Bounds => Suite::Bounds,
            SuiteArg::Oracle => Suite::Oracle,
            SuiteArg::Clt => Suite::Clt,
            SuiteArg::Polya => Suite::Polya,
            SuiteArg::Antiok => Suite::Antiok,
            SuiteArg::All => Suite::All,
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: SuiteArg,
    /// Smaller problem sizes.
    #[arg(long)]
    pub quick: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Corrupt one Catalan number before running (harness self-test).
    #[arg(long, hide = true)]
    pub inject_catalan_fault: bool,
}

#[derive(Subcommand, Debug)]
pub enum PlotCmd {
    /// One simulated trajectory of X_k with the absorbing line 2n - k.
    Path {
        #[command(flatten)]
        regime: RegimeArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Density of the limiting Polya bias on a grid over [-1, 1].
    ZetaDensity {
        #[arg(long)]
        n1: u32,
        #[arg(long)]
        n2: u32,
        #[arg(long, default_value_t = 401)]
        points: usize,
    },
    /// Exact law of (winner, loser wins) as rows.
    MarginPmf {
        #[command(flatten)]
        regime: RegimeArgs,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Probability of visiting each state (a, b).
    Reach {
        #[command(flatten)]
        regime: RegimeArgs,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(bestofn::Error),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use bestofn::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::Capacity { .. } | E::Quadrature { .. } | E::ContractViolation(_)) => 3,
            CliError::Core(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<bestofn::Error> for CliError {
    fn from(e: bestofn::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// A finished command: the document to emit, the exit code, and the names
/// of failed checks.
#[derive(Clone, Debug, PartialEq)]
pub struct Rendered {
    pub body: String,
    pub exit_code: i32,
    pub failures: Vec<String>,
}

impl Rendered {
    fn ok(body: String) -> Self {
        Rendered {
            body,
            exit_code: 0,
            failures: Vec::new(),
        }
    }

    fn checked(body: String, failures: Vec<String>) -> Self {
        Rendered {
            body,
            exit_code: if failures.is_empty() { 0 } else { 1 },
            failures,
        }
    }
}

fn envelope(command: &str, parameters: Map<String, Value>, results: Value, provenance: Provenance) -> String {
    OutputEnvelope {
        command: command.to_string(),
        parameters,
        results,
        provenance,
    }
    .to_json()
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize to JSON")
}

fn mode_for(regime: &Regime, mode: Option<ModeArg>) -> ScalarMode {
    match mode {
        Some(m) => m.into(),
        None if regime.is_rational() => ScalarMode::Exact,
        None => ScalarMode::Float,
    }
}

fn distribution(regime: &Regime, mode: ScalarMode, cap: u32) -> Result<MarginDistribution, CliError> {
    Ok(exact_distribution(regime, &DpOptions { mode, max_exact_n: cap })?)
}

fn pmf_rows(d: &MarginDistribution) -> Vec<Vec<String>> {
    let n = d.n() as i64;
    [Player::Player1, Player::Player2]
        .into_iter()
        .flat_map(|w| {
            d.margin(w).iter().enumerate().map(move |(k, pr)| {
                let name = match w {
                    Player::Player1 => "player1",
                    Player::Player2 => "player2",
                };
                let profit = if w == Player::Player1 { n - k as i64 } else { k as i64 - n };
                vec![name.to_string(), k.to_string(), profit.to_string(), pr.to_string()]
            })
        })
        .collect()
}

const PMF_HEADER: [&str; 4] = ["winner", "opponent_wins", "profit", "probability"];

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Result<Rendered, CliError> {
    match &cli.command {
        Command::Exact(a) => cmd_exact(a),
        Command::Formula(f) => cmd_formula(f),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Plotdata(p) => cmd_plotdata(p),
    }
}

fn cmd_exact(a: &ExactArgs) -> Result<Rendered, CliError> {
    let regime = a.regime.build()?;
    let mode = mode_for(&regime, a.mode);
    let d = distribution(&regime, mode, a.max_exact_n)?;
    let provenance = Provenance::new(None, None);
    if a.format == Format::Csv {
        return Ok(Rendered::ok(output::csv_document("exact", &provenance, &PMF_HEADER, pmf_rows(&d))));
    }
    let mut params = Map::new();
    a.regime.record(&mut params);
    params.insert("mode".into(), json!(mode));
    let mut results = Map::new();
    results.insert("distribution".into(), to_value(&d));
    results.insert(
        "win_probability".into(),
        json!({
            "player1": d.win_probability(Player::Player1),
            "player2": d.win_probability(Player::Player2),
        }),
    );
    results.insert("expectations".into(), to_value(&d.expected_values()));
    if let RegimeKind::Constant(p) = regime.kind() {
        let p = if mode == ScalarMode::Float { Scalar::Float(p.to_f64()) } else { p.clone() };
        results.insert("bounds".into(), to_value(&martingale_bounds(regime.target(), &p, Some(&d))?));
    }
    Ok(Rendered::ok(envelope("exact", params, Value::Object(results), provenance)))
}

/// `a == b` for exact values, relative agreement to 1e-9 otherwise.
fn agrees(a: &Scalar, b: &Scalar) -> bool {
    if a.is_exact() && b.is_exact() {
        return a == b;
    }
    let (x, y) = (a.to_f64(), b.to_f64());
    (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0)
}

fn constant_dp(n: u32, p: &Scalar) -> Result<MarginDistribution, CliError> {
    let regime = Regime::constant(p.clone(), n)?;
    let mode = if p.is_exact() && n <= DEFAULT_EXACT_CAP { ScalarMode::Exact } else { ScalarMode::Float };
    distribution(&regime, mode, DEFAULT_EXACT_CAP)
}

fn cmd_formula(f: &FormulaCmd) -> Result<Rendered, CliError> {
    let mut params = Map::new();
    let mut failures = Vec::new();
    let (name, results) = match f {
        FormulaCmd::CatalanMean { n, p, check } => {
            params.insert("n".into(), json!(n));
            params.insert("p".into(), json!(p));
            let ps = parse_p(p)?;
            let value = expected_profit_catalan(*n, &ps)?;
            let mut r = json!({ "value": value });
            if *check {
                let dp = constant_dp(*n, &ps)?.expected_values().e_z;
                let pass = agrees(&value, &dp);
                if !pass {
                    failures.push("catalan mean equals DP E[Z]".to_string());
                }
                r["check"] = json!({ "dp_value": dp, "pass": pass });
            }
            ("catalan-mean", r)
        }
        FormulaCmd::NegbinPmf { n, p, k, check } => {
            params.insert("n".into(), json!(n));
            params.insert("p".into(), json!(p));
            if let Some(k) = k {
                params.insert("k".into(), json!(k));
            }
            let ps = parse_p(p)?;
            let bound = approx_error_bound(*n, &ps)?;
            let exact = if *check { Some(constant_dp(*n, &ps)?.opponent_wins_pmf()) } else { None };
            let ks: Vec<u64> = match k {
                Some(k) => vec![*k],
                None => (0..*n as u64).collect(),
            };
            let mut rows = Vec::new();
            for k in ks {
                let approx = negbin_approx_pmf(*n, k, &ps)?;
                let mut row = json!({ "k": k, "approx": approx });
                if let Some(w) = &exact {
                    let e = w.get(k as usize).cloned().unwrap_or_else(|| Scalar::zero(ps.mode()));
                    let err = (e.to_f64() - approx.to_f64()).abs();
                    let pass = err <= bound.to_f64() + 1e-12;
                    if !pass {
                        failures.push(format!("negbin error within (4pq)^n at k={k}"));
                    }
                    row["exact"] = to_value(&e);
                    row["error"] = json!(err);
                    row["pass"] = json!(pass);
                }
                rows.push(row);
            }
            ("negbin-pmf", json!({ "error_bound": bound, "rows": rows }))
        }
        FormulaCmd::AntiokExact { n, k, mode, check } => {
            params.insert("n".into(), json!(n));
            if let Some(k) = k {
                params.insert("k".into(), json!(k));
            }
            let mode = mode.map(ScalarMode::from).unwrap_or(if *n <= DEFAULT_EXACT_CAP {
                ScalarMode::Exact
            } else {
                ScalarMode::Float
            });
            params.insert("mode".into(), json!(mode));
            let dp = if *check {
                Some(distribution(&Regime::anti_ok_corral(*n)?, mode, DEFAULT_EXACT_CAP)?)
            } else {
                None
            };
            let ks: Vec<u32> = match k {
                Some(k) => vec![*k],
                None => (1..=*n).collect(),
            };
            let mut rows = Vec::new();
            for k in ks {
                let v = antiok_exact_prob(*n, k, mode)?;
                let mut row = json!({ "k": k, "probability": v });
                if let Some(d) = &dp {
                    let e = &d.p1_margin()[(*n - k) as usize];
                    let pass = agrees(&v, e);
                    if !pass {
                        failures.push(format!("anti-OK closed form equals DP at k={k}"));
                    }
                    row["dp_value"] = to_value(e);
                    row["pass"] = json!(pass);
                }
                rows.push(row);
            }
            ("antiok-exact", json!({ "rows": rows }))
        }
        FormulaCmd::AntiokLimit { k } => {
            params.insert("k".into(), json!(k));
            let v = antiok_limit_pmf(*k)?;
            ("antiok-limit", json!({ "value": v, "value_float": v.to_f64() }))
        }
        FormulaCmd::PolyaWinprob {
            n1,
            n2,
            tol,
            check,
            target,
        } => {
            params.insert("n1".into(), json!(n1));
            params.insert("n2".into(), json!(n2));
            params.insert("tol".into(), json!(tol));
            let q = polya_win_probability(*n1, *n2, *tol)?;
            let mut r = json!({ "win_probability": q.value, "quadrature": q });
            if *check {
                params.insert("target".into(), json!(target));
                let d = distribution(&Regime::polya(*n1, *n2, *target)?, ScalarMode::Float, DEFAULT_EXACT_CAP)?;
                let finite = d.win_probability(Player::Player1).to_f64();
                r["check"] = json!({ "dp_win_probability": finite, "difference": (finite - q.value).abs() });
            }
            ("polya-winprob", r)
        }
        FormulaCmd::PolyaProfit { n, tol } => {
            params.insert("n".into(), json!(n));
            params.insert("tol".into(), json!(tol));
            let sp = polya_symmetric_expected_profit(*n, *tol)?;
            let mut r = to_value(&sp);
            if let Some(ie) = &sp.integral_exact {
                r["exact_forms_agree"] = json!(ie == &sp.closed_form);
            }
            ("polya-profit", r)
        }
        FormulaCmd::Bounds {
            n,
            p,
            lambda,
            tail_a,
            check,
        } => {
            params.insert("n".into(), json!(n));
            params.insert("p".into(), json!(p));
            let ps = parse_p(p)?;
            let dp = if *check { Some(constant_dp(*n, &ps)?) } else { None };
            let reports = martingale_bounds(*n, &ps, dp.as_ref())?;
            for r in &reports {
                if r.satisfied == Some(false) {
                    failures.push(r.bound_name.clone());
                }
            }
            let mut r = json!({ "martingale": reports });
            if let Some(l) = lambda {
                params.insert("lambda".into(), json!(l));
                let ls = l.parse::<Scalar>().map_err(|e| CliError::Usage(format!("--lambda: {e}")))?;
                r["gamma_race_bound"] = to_value(&gamma_race_bound(*n, &ls)?);
            }
            if let Some(a) = tail_a {
                params.insert("tail_a".into(), json!(a));
                r["negbin_tail_bound"] = json!(negbin_tail_bound(*n as u64, *a)?);
            }
            ("bounds", r)
        }
        FormulaCmd::Identities { max } => {
            params.insert("max".into(), json!(max));
            let checks = identity_checks(*max, *max, *max, &VerifyOptions::default())?;
            failures.extend(checks.iter().filter(|c| !c.pass).map(|c| c.check.clone()));
            ("identities", json!({ "pass": failures.is_empty(), "checks": checks }))
        }
    };
    let body = envelope(&format!("formula {name}"), params, results, Provenance::new(None, None));
    Ok(Rendered::checked(body, failures))
}

fn cmd_simulate(a: &SimulateArgs) -> Result<Rendered, CliError> {
    let regime = a.regime.build()?;
    let sampler: SamplerKind = a.sampler.parse().map_err(|e| CliError::Usage(format!("--sampler: {e}")))?;
    let plan = SimulationPlan::new(regime.clone(), a.samples, a.seed)
        .with_sampler(sampler)
        .with_partitions(a.partitions);
    let summary = run(&plan)?;
    let mut params = Map::new();
    a.regime.record(&mut params);
    params.insert("samples".into(), json!(a.samples));
    params.insert("seed".into(), json!(a.seed));
    params.insert("partitions".into(), json!(a.partitions));
    params.insert("sampler".into(), json!(sampler));
    params.insert("compare_exact".into(), json!(a.compare_exact));
    let mut results = Map::new();
    results.insert("summary".into(), to_value(&summary));
    if a.compare_exact {
        let exact = distribution(&regime, ScalarMode::Float, DEFAULT_EXACT_CAP)?;
        let tv = if summary.total == 0 { None } else { Some(tv_to_exact(&summary, &exact)?) };
        results.insert("tv_distance_to_exact".into(), json!(tv));
    }
    let body = envelope(
        "simulate",
        params,
        Value::Object(results),
        Provenance::new(Some(a.seed), Some(RNG_ALGORITHM)),
    );
    Ok(Rendered::ok(body))
}

fn cmd_verify(a: &VerifyArgs) -> Result<Rendered, CliError> {
    let mut opts = VerifyOptions {
        scale: if a.quick { Scale::Quick } else { Scale::Full },
        ..Default::default()
    };
    if let Some(s) = a.seed {
        opts.seed = s;
    }
    if a.inject_catalan_fault {
        let mut v = CatalanTable::new(DEFAULT_EXACT_CAP as usize).values().to_vec();
        v[4] += 1u32;
        opts.catalan = Some(CatalanTable::from_values(v));
    }
    let suite: Suite = a.suite.into();
    let report = run_suite(suite, &opts)?;
    let mut params = Map::new();
    params.insert("suite".into(), json!(suite));
    params.insert("scale".into(), json!(opts.scale));
    params.insert("seed".into(), json!(opts.seed));
    if a.inject_catalan_fault {
        params.insert("inject_catalan_fault".into(), json!(true));
    }
    let failures = report.failures().map(|c| c.check.clone()).collect();
    let body = envelope(
        "verify",
        params,
        to_value(&report),
        Provenance::new(Some(opts.seed), Some(RNG_ALGORITHM)),
    );
    Ok(Rendered::checked(body, failures))
}

fn cmd_plotdata(p: &PlotCmd) -> Result<Rendered, CliError> {
    let body = match p {
        PlotCmd::Path { regime, seed } => {
            let reg = regime.build()?;
            let n = reg.target() as i64;
            let mut rows = Vec::new();
            play_match_traced(&reg, &mut block_rng(*seed, 0), |s| {
                let k = s.round() as i64;
                rows.push(vec![k.to_string(), s.lead().to_string(), (2 * n - k).to_string()]);
            });
            let prov = Provenance::new(Some(*seed), Some(RNG_ALGORITHM));
            output::csv_document("plotdata path", &prov, &["k", "x_k", "line"], rows)
        }
        PlotCmd::ZetaDensity { n1, n2, points } => {
            let rows = density_grid(*n1, *n2, *points)?
                .into_iter()
                .map(|(x, f)| vec![format!("{x:?}"), format!("{f:?}")])
                .collect();
            output::csv_document("plotdata zeta-density", &Provenance::new(None, None), &["x", "density"], rows)
        }
        PlotCmd::MarginPmf { regime, mode } => {
            let reg = regime.build()?;
            let d = distribution(&reg, mode_for(&reg, *mode), DEFAULT_EXACT_CAP)?;
            output::csv_document("plotdata margin-pmf", &Provenance::new(None, None), &PMF_HEADER, pmf_rows(&d))
        }
        PlotCmd::Reach { regime } => {
            let reg = regime.build()?;
            let rows = reach_table(&reg)
                .into_iter()
                .enumerate()
                .flat_map(|(a, row)| {
                    row.into_iter()
                        .enumerate()
                        .map(move |(b, pr)| vec![a.to_string(), b.to_string(), format!("{pr:?}")])
                })
                .collect();
            output::csv_document("plotdata reach", &Provenance::new(None, None), &["a", "b", "probability"], rows)
        }
    };
    Ok(Rendered::ok(body))
}

/// Applies `BESTOFN_THREADS` to the global rayon pool.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("{THREADS_ENV}: {e}")))
}

/// Parses `args`, runs the command and writes its output. Returns the exit
/// code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    let result = configure_threads().and_then(|()| execute(&cli)).and_then(|r| {
        match &cli.out {
            Some(path) => std::fs::write(path, &r.body)?,
            None => stdout.write_all(r.body.as_bytes())?,
        }
        Ok(r)
    });
    match result {
        Ok(r) => {
            for f in &r.failures {
                let _ = writeln!(stderr, "FAILED: {f}");
            }
            r.exit_code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
