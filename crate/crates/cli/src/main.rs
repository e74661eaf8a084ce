//! `fdp`: trade-off curves, composition, subsampling, conversions and the
//! NoisySGD accountant from the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod format;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use fdp_core::accountant::{sgd_report, SgdConfig, REPORT_COLUMNS};
use fdp_core::catalog::{self, StandardLogistic};
use fdp_core::compose::{
    clt_bracket, clt_dp_array, compose_homogeneous_pure, group_privacy_on_grid, tensor_gdp, CltNorms,
};
use fdp_core::curves::grid_from_csv;
use fdp_core::duality::{dual_to_primal, gdp_to_dp, primal_to_dual, symm_envelope, tightest_epsilon};
use fdp_core::functionals::{gdp_to_rdp, moments};
use fdp_core::subsample::{subsample_curve, subsample_eps_delta};
use fdp_core::{FdpError, TradeoffCurve};
use serde_json::{json, Value};

use format::Table;

#[derive(Parser)]
#[command(name = "fdp", version, about = "Privacy accounting with trade-off functions")]
struct Cli {
    /// Number of uniformly spaced α samples in curve output.
    #[arg(long, global = true, env = "FDP_GRID", default_value_t = 1001)]
    grid: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Significant digits for CSV numbers.
    #[arg(long, global = true, env = "FDP_CSV_DIGITS", default_value_t = 10)]
    csv_digits: usize,
    /// Upper end of the ε search when solving for the tightest ε.
    #[arg(long, global = true, env = "FDP_EPS_HI", default_value_t = fdp_core::duality::DEFAULT_EPS_HI)]
    eps_hi: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a curve from the catalog.
    Curve(CurveCmd),
    /// Compose mechanisms.
    Compose(ComposeCmd),
    /// Amplify a symmetric curve by subsampling.
    Subsample(SubsampleCmd),
    /// Convert between trade-off curves, (ε, δ) and Rényi guarantees.
    Convert(ConvertCmd),
    /// NoisySGD (ε, δ) report.
    Sgd(SgdCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Identity,
    Gdp,
    EpsDelta,
    Laplace,
    PointMass,
    Logistic,
}

#[derive(Args)]
struct CurveSource {
    #[arg(long, value_enum, conflicts_with = "curve_file")]
    family: Option<Family>,
    /// μ for gdp, laplace and logistic.
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// A curve in JSON (family or grid form) or an alpha,beta CSV.
    #[arg(long)]
    curve_file: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct CurveCmd {
    #[command(flatten)]
    source: CurveSource,
    /// Print the symbolic curve instead of samples.
    #[arg(long)]
    spec: bool,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
#[command(group(ArgGroup::new("mode").required(true).args(["pure_eps", "gdp", "pairs", "group"])))]
struct ComposeCmd {
    /// n-fold composition of ε-DP, exact via binomials.
    #[arg(long)]
    pure_eps: Option<f64>,
    #[arg(long, requires = "pure_eps")]
    n: Option<usize>,
    /// Berry–Esseen approximation instead of the exact binomial curve.
    #[arg(long, requires = "pure_eps")]
    clt: bool,
    /// Comma-separated GDP parameters to compose exactly.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    gdp: Option<Vec<f64>>,
    /// Comma-separated `eps:delta` guarantees for the CLT.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pairs: Option<Vec<String>>,
    /// Group size, applied to the curve given by the curve options.
    #[arg(long)]
    group: Option<usize>,
    #[command(flatten)]
    source: CurveSource,
    /// Also solve for the tightest ε at this δ.
    #[arg(long)]
    tightest_delta: Option<f64>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SubsampleCmd {
    #[command(flatten)]
    source: CurveSource,
    /// Sampling rate.
    #[arg(long)]
    p: f64,
    /// Closed form for (ε, δ) curves.
    #[arg(long)]
    closed_form: bool,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
#[command(group(ArgGroup::new("mode").required(true).args([
    "gdp_to_dp", "gdp_to_rdp", "tightest_epsilon", "primal_to_dual", "dual_to_primal"
])))]
struct ConvertCmd {
    /// δ(ε) of μ-GDP at each --at-eps value.
    #[arg(long)]
    gdp_to_dp: bool,
    /// Rényi ε of μ-GDP at --order.
    #[arg(long)]
    gdp_to_rdp: bool,
    /// Smallest ε with (ε, --target-delta)-DP for the given curve.
    #[arg(long)]
    tightest_epsilon: bool,
    /// Privacy profile of the given curve on --grid ε values in [0, --eps-max].
    #[arg(long)]
    primal_to_dual: bool,
    /// Curve implied by the --pairs guarantees.
    #[arg(long)]
    dual_to_primal: bool,
    #[command(flatten)]
    source: CurveSource,
    /// ε values for --gdp-to-dp (comma-separated).
    #[arg(long = "at-eps", value_delimiter = ',', num_args = 1..)]
    at_eps: Vec<f64>,
    #[arg(long)]
    order: Option<f64>,
    #[arg(long)]
    target_delta: Option<f64>,
    #[arg(long, default_value_t = 10.0)]
    eps_max: f64,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pairs: Option<Vec<String>>,
}

#[derive(Args)]
struct SgdCmd {
    /// JSON with n, m, T (or epochs), sigma and optionally clip.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "1e-5")]
    deltas: Vec<f64>,
}

enum CliError {
    Usage(String),
    Failed(String),
}

impl From<FdpError> for CliError {
    fn from(e: FdpError) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

struct Output {
    json: Value,
    table: Table,
}

fn need(value: Option<f64>, flag: &str, family: &str) -> CliResult<f64> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required for {family}")))
}

impl CurveSource {
    fn is_given(&self) -> bool {
        self.family.is_some() || self.curve_file.is_some()
    }

    fn build(&self) -> CliResult<TradeoffCurve> {
        if let Some(path) = &self.curve_file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Failed(format!("cannot read {}: {e}", path.display())))?;
            if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
                return Ok(TradeoffCurve::Grid(grid_from_csv(&text)?));
            }
            let value: Value = serde_json::from_str(&text).map_err(FdpError::from)?;
            // accept both a bare curve and a command output wrapping one
            let curve = value.get("curve").unwrap_or(&value);
            return Ok(TradeoffCurve::from_json(curve)?);
        }
        let Some(family) = self.family else {
            return usage("give --family or --curve-file");
        };
        Ok(match family {
            Family::Identity => TradeoffCurve::Identity,
            Family::Gdp => catalog::gdp(need(self.mu, "mu", "gdp")?)?,
            Family::Laplace => catalog::laplace(need(self.mu, "mu", "laplace")?)?,
            Family::Logistic => {
                catalog::location_family(Arc::new(StandardLogistic), need(self.mu, "mu", "logistic")?)?
            }
            Family::EpsDelta => catalog::eps_delta(need(self.eps, "eps", "eps-delta")?, self.delta.unwrap_or(0.0))?,
            Family::PointMass => catalog::point_mass_delta(need(self.delta, "delta", "point-mass")?)?,
        })
    }
}

fn alphas(grid: usize) -> CliResult<Vec<f64>> {
    if grid < 2 {
        return usage(format!("--grid must be at least 2, got {grid}"));
    }
    Ok((0..grid).map(|i| i as f64 / (grid - 1) as f64).collect())
}

fn sampled(curve: &TradeoffCurve, grid: usize) -> CliResult<(Value, Table)> {
    let xs = alphas(grid)?;
    let ys: Vec<f64> = xs.iter().map(|&a| curve.value(a)).collect();
    let mut table = Table::new(vec!["alpha", "beta"]);
    table.rows = xs.iter().zip(&ys).map(|(&a, &b)| vec![a, b]).collect();
    Ok((json!({ "alpha": xs, "beta": ys }), table))
}

fn parse_pairs(raw: &[String]) -> CliResult<Vec<(f64, f64)>> {
    raw.iter()
        .map(|s| {
            let (e, d) = s
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("pair {s:?} is not eps:delta")))?;
            match (e.trim().parse::<f64>(), d.trim().parse::<f64>()) {
                (Ok(e), Ok(d)) => Ok((e, d)),
                _ => usage(format!("pair {s:?} is not numeric")),
            }
        })
        .collect()
}

fn with_tightest(out: Output, curve: &TradeoffCurve, delta: Option<f64>, eps_hi: f64) -> CliResult<Output> {
    let Some(delta) = delta else { return Ok(out) };
    let eps = tightest_epsilon(curve, delta, eps_hi)?;
    let mut json = out.json;
    json["tightest"] = json!({ "delta": delta, "epsilon": eps });
    let mut table = Table::new(vec!["delta", "epsilon"]);
    table.rows.push(vec![delta, eps]);
    Ok(Output { json, table })
}

fn run_curve(cli: &Cli, cmd: &CurveCmd) -> CliResult<Output> {
    let curve = cmd.source.build()?;
    if cmd.spec {
        if cli.format == Format::Csv {
            return usage("--spec output is JSON only");
        }
        return Ok(Output {
            json: curve.to_json(),
            table: Table::new(vec![]),
        });
    }
    let (json, table) = sampled(&curve, cli.grid)?;
    Ok(Output { json, table })
}

fn run_compose(cli: &Cli, cmd: &ComposeCmd) -> CliResult<Output> {
    if let Some(eps) = cmd.pure_eps {
        let n = cmd.n.ok_or_else(|| CliError::Usage("--pure-eps needs --n".into()))?;
        if n == 0 {
            return usage("--n must be at least 1");
        }
        if cmd.clt {
            let stats = moments(&catalog::eps_delta(eps, 0.0)?)?;
            let norms = CltNorms::from_stats(&vec![stats; n])?;
            let est = norms.estimate();
            let xs = alphas(cli.grid)?;
            let mut table = Table::new(vec!["alpha", "lower", "gdp", "upper"]);
            for &a in &xs {
                let (lo, hi) = clt_bracket(est, a);
                table.rows.push(vec![a, lo, catalog::gdp(est.mu)?.value(a), hi]);
            }
            let json = json!({
                "mu": est.mu,
                "gamma": est.gamma,
                "k": norms.k,
                "s": norms.s,
                "bracket": {
                    "alpha": xs,
                    "lower": table.rows.iter().map(|r| r[1]).collect::<Vec<_>>(),
                    "upper": table.rows.iter().map(|r| r[3]).collect::<Vec<_>>(),
                },
            });
            let out = Output { json, table };
            let curve = catalog::gdp(est.mu)?;
            return with_tightest(out, &curve, cmd.tightest_delta, cli.eps_hi);
        }
        let curve = compose_homogeneous_pure(eps, n)?;
        let (samples, table) = sampled(&curve, cli.grid)?;
        let out = Output {
            json: json!({ "curve": samples }),
            table,
        };
        return with_tightest(out, &curve, cmd.tightest_delta, cli.eps_hi);
    }
    if let Some(mus) = &cmd.gdp {
        let mu = tensor_gdp(mus)?;
        let curve = catalog::gdp(mu)?;
        let (samples, table) = sampled(&curve, cli.grid)?;
        let out = Output {
            json: json!({ "mu": mu, "curve": samples }),
            table,
        };
        return with_tightest(out, &curve, cmd.tightest_delta, cli.eps_hi);
    }
    if let Some(raw) = &cmd.pairs {
        let res = clt_dp_array(&parse_pairs(raw)?)?;
        let (samples, table) = sampled(&res.curve, cli.grid)?;
        let out = Output {
            json: json!({
                "mu": res.mu,
                "gamma": res.gamma,
                "delta_total": res.delta_total,
                "curve": samples,
            }),
            table,
        };
        return with_tightest(out, &res.curve, cmd.tightest_delta, cli.eps_hi);
    }
    let k = cmd.group.expect("clap enforces one mode");
    if !cmd.source.is_given() {
        return usage("--group needs a curve (--family or --curve-file)");
    }
    let curve = group_privacy_on_grid(&cmd.source.build()?, k, cli.grid)?;
    let (samples, table) = sampled(&curve, cli.grid)?;
    let out = Output {
        json: json!({ "group": k, "curve": samples }),
        table,
    };
    with_tightest(out, &curve, cmd.tightest_delta, cli.eps_hi)
}

fn run_subsample(cli: &Cli, cmd: &SubsampleCmd) -> CliResult<Output> {
    let curve = if cmd.closed_form {
        if cmd.source.family != Some(Family::EpsDelta) {
            return usage("--closed-form needs --family eps-delta");
        }
        let eps = need(cmd.source.eps, "eps", "eps-delta")?;
        subsample_eps_delta(eps, cmd.source.delta.unwrap_or(0.0), cmd.p)?
    } else {
        subsample_curve(&cmd.source.build()?, cmd.p)?
    };
    let (samples, table) = sampled(&curve, cli.grid)?;
    Ok(Output {
        json: json!({ "p": cmd.p, "curve": samples }),
        table,
    })
}

/// Neighbouring datasets are interchangeable, so an f-DP mechanism is also
/// Symm(f)-DP; asymmetric inputs (sampled grids, say) are replaced by it.
fn symmetric(curve: TradeoffCurve) -> (TradeoffCurve, bool) {
    if curve.is_symmetric() {
        (curve, false)
    } else {
        (symm_envelope(&curve), true)
    }
}

fn run_convert(cli: &Cli, cmd: &ConvertCmd) -> CliResult<Output> {
    if cmd.gdp_to_dp {
        let mu = need(cmd.source.mu, "mu", "--gdp-to-dp")?;
        if cmd.at_eps.is_empty() {
            return usage("--gdp-to-dp needs --at-eps");
        }
        let mut table = Table::new(vec!["mu", "epsilon", "delta"]);
        for &e in &cmd.at_eps {
            table.rows.push(vec![mu, e, gdp_to_dp(mu, e)?]);
        }
        let rows: Vec<Value> = table
            .rows
            .iter()
            .map(|r| json!({ "mu": r[0], "epsilon": r[1], "delta": r[2] }))
            .collect();
        let json = if rows.len() == 1 { rows[0].clone() } else { Value::Array(rows) };
        return Ok(Output { json, table });
    }
    if cmd.gdp_to_rdp {
        let mu = need(cmd.source.mu, "mu", "--gdp-to-rdp")?;
        let order = cmd.order.ok_or_else(|| CliError::Usage("--gdp-to-rdp needs --order".into()))?;
        let r = gdp_to_rdp(mu, order)?;
        let mut table = Table::new(vec!["mu", "order", "renyi_epsilon"]);
        table.rows.push(vec![mu, order, r]);
        return Ok(Output {
            json: json!({ "mu": mu, "order": order, "renyi_epsilon": r }),
            table,
        });
    }
    if cmd.tightest_epsilon {
        let delta = cmd
            .target_delta
            .ok_or_else(|| CliError::Usage("--tightest-epsilon needs --target-delta".into()))?;
        let (curve, symmetrized) = symmetric(cmd.source.build()?);
        let eps = tightest_epsilon(&curve, delta, cli.eps_hi)?;
        let mut table = Table::new(vec!["delta", "epsilon"]);
        table.rows.push(vec![delta, eps]);
        return Ok(Output {
            json: json!({ "delta": delta, "epsilon": eps, "symmetrized": symmetrized }),
            table,
        });
    }
    if cmd.primal_to_dual {
        if !(cmd.eps_max >= 0.0) {
            return usage("--eps-max must be non-negative");
        }
        let profile = primal_to_dual(&symmetric(cmd.source.build()?).0)?;
        let eps: Vec<f64> = alphas(cli.grid)?.into_iter().map(|t| t * cmd.eps_max).collect();
        let profile = profile.sampled(&eps);
        let mut table = Table::new(vec!["epsilon", "delta"]);
        table.rows = profile
            .table()
            .unwrap_or(&[])
            .iter()
            .map(|p| vec![p.epsilon, p.delta])
            .collect();
        return Ok(Output {
            json: profile.to_json(),
            table,
        });
    }
    let raw = cmd
        .pairs
        .as_ref()
        .ok_or_else(|| CliError::Usage("--dual-to-primal needs --pairs".into()))?;
    let curve = dual_to_primal(&parse_pairs(raw)?)?;
    let (json, table) = sampled(&curve, cli.grid)?;
    Ok(Output { json, table })
}

fn run_sgd(cmd: &SgdCmd) -> CliResult<Output> {
    let text = std::fs::read_to_string(&cmd.config)
        .map_err(|e| CliError::Failed(format!("cannot read {}: {e}", cmd.config.display())))?;
    let config = SgdConfig::from_json(&text)?;
    let rows = sgd_report(&config, &cmd.deltas)?;
    let mut table = Table::new(REPORT_COLUMNS.to_vec());
    table.rows = rows.iter().map(|r| r.values().to_vec()).collect();
    Ok(Output {
        json: json!({ "config": config, "report": rows }),
        table,
    })
}

fn run(cli: &Cli) -> CliResult<String> {
    let out = match &cli.command {
        Command::Curve(c) => run_curve(cli, c)?,
        Command::Compose(c) => run_compose(cli, c)?,
        Command::Subsample(c) => run_subsample(cli, c)?,
        Command::Convert(c) => run_convert(cli, c)?,
        Command::Sgd(c) => run_sgd(c)?,
    };
    Ok(match cli.format {
        Format::Json => format::json(&out.json, 17),
        Format::Csv => out.table.csv(cli.csv_digits),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(1..=17).contains(&cli.csv_digits) {
        eprintln!("error: --csv-digits must lie in 1..=17");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok(text) => {
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{text}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => 2,
                CliError::Failed(_) => 1,
            })
        }
    }
}
