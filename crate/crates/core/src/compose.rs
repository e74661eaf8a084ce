//! Composition: exact tensor products where they are tractable, central
//! limit approximations with Berry–Esseen brackets otherwise, and group
//! privacy.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::catalog::{binomial_pair, from_discrete_pair, DiscretePair};
use crate::curves::{gdp_value, GridCurve, TradeoffCurve, DEFAULT_GRID_SIZE};
use crate::error::{check_nonnegative, check_probability, domain, FdpError, Result};
use crate::functionals::{moments, MomentStats};

pub const MAX_PRODUCT_SUPPORT: usize = 10_000_000;
pub const MAX_PURE_COMPOSITIONS: usize = 100_000;
pub const BERRY_ESSEEN_CONSTANT: f64 = 0.56;

/// `√(μ₁² + ··· + μ_n²)`.
pub fn tensor_gdp(mus: &[f64]) -> Result<f64> {
    if mus.is_empty() {
        return domain("tensor_gdp needs at least one mechanism");
    }
    let mut acc = 0.0f64;
    for &mu in mus {
        check_nonnegative("mu", mu)?;
        acc = acc.hypot(mu);
    }
    Ok(acc)
}

/// `f ⊗ f_{0,δ}`, which is `(1 − δ)·f(α/(1 − δ))` on `[0, 1 − δ]` and 0 after.
pub fn tensor_scale_delta(curve: &TradeoffCurve, delta: f64) -> Result<TradeoffCurve> {
    check_probability("delta", delta)?;
    if delta == 0.0 {
        return Ok(curve.clone());
    }
    let merge = |d: f64| -(((-d).ln_1p() + (-delta).ln_1p()).exp_m1());
    Ok(match curve {
        TradeoffCurve::Identity => TradeoffCurve::PointMassDelta { delta },
        TradeoffCurve::PointMassDelta { delta: d } => TradeoffCurve::PointMassDelta { delta: merge(*d) },
        TradeoffCurve::EpsDelta { eps, delta: d } => TradeoffCurve::EpsDelta {
            eps: *eps,
            delta: merge(*d),
        },
        TradeoffCurve::DeltaScaled { base, delta: d } => TradeoffCurve::DeltaScaled {
            base: base.clone(),
            delta: merge(*d),
        },
        _ if delta == 1.0 => TradeoffCurve::PointMassDelta { delta: 1.0 },
        TradeoffCurve::Grid(g) => {
            let s = 1.0 - delta;
            let mut pts: Vec<(f64, f64)> = g.points().map(|(a, b)| (a * s, b * s)).collect();
            pts.push((1.0, 0.0));
            TradeoffCurve::Grid(GridCurve::from_points(&pts, true)?)
        }
        _ => TradeoffCurve::DeltaScaled {
            base: Arc::new(curve.clone()),
            delta,
        },
    })
}

/// The product pair `(P × P′, Q × Q′)`, whose trade-off curve is `T(P, Q) ⊗ T(P′, Q′)`.
pub fn tensor_exact_discrete(a: &DiscretePair, b: &DiscretePair) -> Result<DiscretePair> {
    let size = a.support_size().checked_mul(b.support_size());
    match size {
        Some(s) if s <= MAX_PRODUCT_SUPPORT => {}
        _ => {
            return domain(format!(
                "product support {} × {} exceeds {MAX_PRODUCT_SUPPORT}",
                a.support_size(),
                b.support_size()
            ))
        }
    }
    let outer = |x: &[f64], y: &[f64]| -> Vec<f64> { x.iter().flat_map(|u| y.iter().map(move |v| u * v)).collect() };
    DiscretePair::new(outer(a.p(), b.p()), outer(a.q(), b.q()))
}

/// `f_{ε,0}^{⊗n}`, exactly, as the trade-off between two binomials.
pub fn compose_homogeneous_pure(eps: f64, n: usize) -> Result<TradeoffCurve> {
    check_nonnegative("eps", eps)?;
    if n == 0 || n > MAX_PURE_COMPOSITIONS {
        return domain(format!("n = {n} must lie in 1..={MAX_PURE_COMPOSITIONS}"));
    }
    if eps == 0.0 {
        return Ok(TradeoffCurve::Identity);
    }
    Ok(from_discrete_pair(&binomial_pair(n, eps)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CltEstimate {
    pub mu: f64,
    pub gamma: f64,
}

/// The norms behind a [`CltEstimate`]: `K = ‖kl‖₁`, `s = √(‖κ₂‖₁ − ‖kl‖₂²)`
/// and `‖κ̄₃‖₁`.
///
/// The CLT parameter is `2K/s`. It agrees with `s` only asymptotically, so
/// both are kept.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CltNorms {
    pub k: f64,
    pub s: f64,
    pub kappa3_bar: f64,
}

impl CltNorms {
    pub fn from_stats(stats: &[MomentStats]) -> Result<Self> {
        if stats.is_empty() {
            return domain("no moment statistics given");
        }
        if let Some(bad) = stats.iter().find(|s| !s.finite) {
            return Err(FdpError::CltNotApplicable(format!(
                "infinite moments {bad:?}; split off the δ mass first"
            )));
        }
        let k: f64 = stats.iter().map(|s| s.kl).sum();
        let kl_sq: f64 = stats.iter().map(|s| s.kl * s.kl).sum();
        let kappa2: f64 = stats.iter().map(|s| s.kappa2).sum();
        let var = kappa2 - kl_sq;
        if !(var > 0.0) {
            return Err(FdpError::CltNotApplicable(format!(
                "‖κ₂‖₁ − ‖kl‖₂² = {var} is not positive"
            )));
        }
        Ok(Self {
            k,
            s: var.sqrt(),
            kappa3_bar: stats.iter().map(|s| s.kappa3_bar).sum(),
        })
    }

    pub fn estimate(&self) -> CltEstimate {
        CltEstimate {
            mu: 2.0 * self.k / self.s,
            gamma: BERRY_ESSEEN_CONSTANT * self.kappa3_bar / self.s.powi(3),
        }
    }
}

/// `μ = 2‖kl‖₁/√(‖κ₂‖₁ − ‖kl‖₂²)` and `γ = 0.56‖κ̄₃‖₁/(‖κ₂‖₁ − ‖kl‖₂²)^{3/2}`.
pub fn clt_estimate(stats: &[MomentStats]) -> Result<CltEstimate> {
    Ok(CltNorms::from_stats(stats)?.estimate())
}

/// `G_μ` extended by 1 left of 0 and by 0 right of 1.
fn gdp_extended(mu: f64, x: f64) -> f64 {
    if x < 0.0 {
        1.0
    } else if x > 1.0 {
        0.0
    } else {
        gdp_value(mu, x)
    }
}

/// `(G_μ(α + γ) − γ, G_μ(α − γ) + γ)`, clamped to `[0, 1]`.
pub fn clt_bracket(estimate: CltEstimate, alpha: f64) -> (f64, f64) {
    let CltEstimate { mu, gamma } = estimate;
    let lower = (gdp_extended(mu, alpha + gamma) - gamma).clamp(0.0, 1.0);
    let upper = (gdp_extended(mu, alpha - gamma) + gamma).clamp(0.0, 1.0);
    (lower, upper)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CltArray {
    pub curve: TradeoffCurve,
    pub mu: f64,
    pub gamma: f64,
    pub delta_total: f64,
}

/// CLT surrogate for composing `(ε_i, δ_i)` guarantees: split each
/// `f_{ε,δ} = f_{ε,0} ⊗ f_{0,δ}`, send the pure parts through the CLT and
/// collect the δ mass as `1 − Π(1 − δ_i)`.
pub fn clt_dp_array(guarantees: &[(f64, f64)]) -> Result<CltArray> {
    if guarantees.is_empty() {
        return domain("clt_dp_array needs at least one guarantee");
    }
    let mut log_keep = 0.0;
    let mut stats = Vec::new();
    for &(eps, delta) in guarantees {
        check_nonnegative("eps", eps)?;
        check_probability("delta", delta)?;
        log_keep += (-delta).ln_1p();
        if eps > 0.0 {
            stats.push(moments(&TradeoffCurve::EpsDelta { eps, delta: 0.0 })?);
        }
    }
    let delta_total = -log_keep.exp_m1();
    let (mu, gamma) = if stats.is_empty() {
        (0.0, 0.0)
    } else {
        let e = clt_estimate(&stats)?;
        (e.mu, e.gamma)
    };
    let base = if mu == 0.0 {
        TradeoffCurve::Identity
    } else {
        TradeoffCurve::Gdp { mu }
    };
    Ok(CltArray {
        curve: tensor_scale_delta(&base, delta_total)?,
        mu,
        gamma,
        delta_total,
    })
}

/// `1 − (1 − f)^{∘k}`, the guarantee for groups of size `k`.
pub fn group_privacy(curve: &TradeoffCurve, k: usize) -> Result<TradeoffCurve> {
    group_privacy_on_grid(curve, k, DEFAULT_GRID_SIZE)
}

/// [`group_privacy`] with the uniform grid added at every step set to `grid` points.
pub fn group_privacy_on_grid(curve: &TradeoffCurve, k: usize, grid: usize) -> Result<TradeoffCurve> {
    if k == 0 {
        return domain("group size must be at least 1");
    }
    if grid < 2 {
        return domain(format!("grid size {grid} must be at least 2"));
    }
    match curve {
        _ if k == 1 => Ok(curve.clone()),
        TradeoffCurve::Identity => Ok(TradeoffCurve::Identity),
        TradeoffCurve::Gdp { mu } => Ok(TradeoffCurve::Gdp { mu: *mu * k as f64 }),
        _ => {
            let f = curve.to_grid(grid);
            let uniform: Vec<f64> = (0..grid).map(|i| i as f64 / (grid - 1) as f64).collect();
            let mut h = f.clone();
            for _ in 1..k {
                h = f.compose_after(&h, &uniform);
            }
            Ok(TradeoffCurve::Grid(h))
        }
    }
}
