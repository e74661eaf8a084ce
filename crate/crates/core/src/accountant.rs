//! Privacy accounting for NoisySGD: `T` steps, each a `(1/σ)`-GDP Gaussian
//! step on a batch of `m` out of `n` records sampled without replacement.

use serde::{Deserialize, Serialize};

use crate::curves::{gdp_value, TradeoffCurve};
use crate::duality::{tightest_epsilon, DEFAULT_EPS_HI};
use crate::error::{domain, FdpError, Result};
use crate::functionals::{chi2_plus, moments_subsampled_gdp, MomentStats};
use crate::compose::BERRY_ESSEEN_CONSTANT;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig")]
pub struct SgdConfig {
    pub n: u64,
    pub m: u64,
    #[serde(rename = "T")]
    pub t: u64,
    pub sigma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub clip: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    n: u64,
    m: u64,
    #[serde(rename = "T", alias = "t", alias = "iterations")]
    t: Option<u64>,
    #[serde(alias = "E")]
    epochs: Option<f64>,
    sigma: f64,
    clip: Option<f64>,
}

impl TryFrom<RawConfig> for SgdConfig {
    type Error = FdpError;

    fn try_from(raw: RawConfig) -> Result<Self> {
        let t = match (raw.t, raw.epochs) {
            (Some(t), None) => t,
            (None, Some(e)) => SgdConfig::iterations_for_epochs(raw.n, raw.m, e)?,
            (Some(_), Some(_)) => return domain("give either T or epochs, not both"),
            (None, None) => return domain("missing T (or epochs)"),
        };
        let mut c = SgdConfig::new(raw.n, raw.m, t, raw.sigma)?;
        if let Some(clip) = raw.clip {
            c = c.with_clip(clip)?;
        }
        Ok(c)
    }
}

impl SgdConfig {
    pub fn new(n: u64, m: u64, t: u64, sigma: f64) -> Result<Self> {
        if n == 0 || m == 0 || m > n {
            return domain(format!("need 1 ≤ m ≤ n, got m = {m}, n = {n}"));
        }
        if t == 0 {
            return domain("T must be at least 1");
        }
        if !(sigma > 0.0) {
            return domain(format!("sigma = {sigma} must be positive"));
        }
        Ok(Self {
            n,
            m,
            t,
            sigma,
            clip: None,
        })
    }

    pub fn with_clip(mut self, clip: f64) -> Result<Self> {
        if !(clip > 0.0 && clip.is_finite()) {
            return domain(format!("clip = {clip} must be positive"));
        }
        self.clip = Some(clip);
        Ok(self)
    }

    /// `T = E·n/m`, rounded to the nearest step.
    pub fn iterations_for_epochs(n: u64, m: u64, epochs: f64) -> Result<u64> {
        if m == 0 || !(epochs > 0.0 && epochs.is_finite()) {
            return domain(format!("cannot convert {epochs} epochs with m = {m}"));
        }
        Ok(((epochs * n as f64 / m as f64).round() as u64).max(1))
    }

    pub fn sampling_rate(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    pub fn step_mu(&self) -> f64 {
        1.0 / self.sigma
    }

    pub fn epochs(&self) -> f64 {
        self.t as f64 * self.sampling_rate()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// `μ = √2·c·√(e^{σ⁻²}Φ(1.5/σ) + 3Φ(−0.5/σ) − 2)` with `c = m√T/n`.
pub fn sgd_asymptotic_mu(config: &SgdConfig) -> f64 {
    let c = config.sampling_rate() * (config.t as f64).sqrt();
    let chi2 = chi2_plus(&TradeoffCurve::Gdp { mu: config.step_mu() }).expect("GDP is symmetric");
    std::f64::consts::SQRT_2 * c * chi2.max(0.0).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SgdCurve {
    /// `max{G_μ̃(α + γ) − γ, 0}`.
    pub curve: TradeoffCurve,
    pub mu_tilde: f64,
    pub gamma: f64,
    pub step_moments: MomentStats,
}

impl SgdCurve {
    /// `min{G_μ̃(α − γ) + γ, 1}`, reported next to the guaranteed curve for diagnostics only.
    pub fn upper(&self, alpha: f64) -> f64 {
        if alpha < self.gamma {
            return 1.0;
        }
        (gdp_value(self.mu_tilde, alpha - self.gamma) + self.gamma).min(1.0)
    }
}

/// `(μ̃, γ)` and the per-step moments, without checking that `γ < 1/2`.
pub fn sgd_clt_parameters(config: &SgdConfig) -> Result<(f64, f64, MomentStats)> {
    let stats = moments_subsampled_gdp(config.sampling_rate(), config.step_mu())?;
    let var = stats.kappa2 - stats.kl * stats.kl;
    if stats == MomentStats::ZERO || !(var > 0.0) {
        return Ok((0.0, 0.0, stats));
    }
    let t = config.t as f64;
    let mu_tilde = 2.0 * t.sqrt() * stats.kl / var.sqrt();
    let gamma = BERRY_ESSEEN_CONSTANT / t.sqrt() * stats.kappa3_bar / var.powf(1.5);
    Ok((mu_tilde, gamma, stats))
}

/// Berry–Esseen curve for `C_p(G_{1/σ})^{⊗T}`.
pub fn sgd_clt_curve(config: &SgdConfig) -> Result<SgdCurve> {
    let (mu_tilde, gamma, stats) = sgd_clt_parameters(config)?;
    if mu_tilde == 0.0 {
        return Ok(SgdCurve {
            curve: TradeoffCurve::Identity,
            mu_tilde,
            gamma,
            step_moments: stats,
        });
    }
    if gamma >= 0.5 {
        return Err(FdpError::CltNotApplicable(format!(
            "γ = {gamma} ≥ 1/2 at T = {}",
            config.t
        )));
    }
    Ok(SgdCurve {
        curve: TradeoffCurve::GdpLowerBracket { mu: mu_tilde, gamma },
        mu_tilde,
        gamma,
        step_moments: stats,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SgdReportRow {
    pub delta: f64,
    /// From the guaranteed curve; `+∞` when `δ` is below its `1 − f(0)` mass.
    pub epsilon: f64,
    pub mu_tilde: f64,
    pub gamma: f64,
    pub mu_asymptotic: f64,
    /// From `G_μ̃` without the Berry–Esseen correction.
    pub epsilon_clt: f64,
    pub epsilon_asymptotic: f64,
}

pub const REPORT_COLUMNS: [&str; 7] = [
    "delta",
    "epsilon",
    "mu_tilde",
    "gamma",
    "mu_asymptotic",
    "epsilon_clt",
    "epsilon_asymptotic",
];

impl SgdReportRow {
    pub fn values(&self) -> [f64; 7] {
        [
            self.delta,
            self.epsilon,
            self.mu_tilde,
            self.gamma,
            self.mu_asymptotic,
            self.epsilon_clt,
            self.epsilon_asymptotic,
        ]
    }
}

fn epsilon_or_inf(curve: &TradeoffCurve, delta: f64) -> Result<f64> {
    match tightest_epsilon(curve, delta, DEFAULT_EPS_HI) {
        Err(FdpError::NoSolution(_)) => Ok(f64::INFINITY),
        other => other,
    }
}

/// `(δ, ε)` pairs for the accountant's curve, one row per requested `δ`.
pub fn sgd_report(config: &SgdConfig, deltas: &[f64]) -> Result<Vec<SgdReportRow>> {
    if let Some(d) = deltas.iter().find(|d| !(**d > 0.0 && **d < 1.0)) {
        return domain(format!("delta = {d} is not in (0, 1)"));
    }
    let clt = sgd_clt_curve(config)?;
    let mu_asymptotic = sgd_asymptotic_mu(config);
    let plain = TradeoffCurve::Gdp { mu: clt.mu_tilde };
    let asymptotic = TradeoffCurve::Gdp { mu: mu_asymptotic };
    deltas
        .iter()
        .map(|&delta| {
            Ok(SgdReportRow {
                delta,
                epsilon: epsilon_or_inf(&clt.curve, delta)?,
                mu_tilde: clt.mu_tilde,
                gamma: clt.gamma,
                mu_asymptotic,
                epsilon_clt: epsilon_or_inf(&plain, delta)?,
                epsilon_asymptotic: epsilon_or_inf(&asymptotic, delta)?,
            })
        })
        .collect()
}
