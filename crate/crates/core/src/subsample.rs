//! Privacy amplification by subsampling.

use std::sync::Arc;

use crate::curves::{GridCurve, TradeoffCurve};
use crate::duality::{curve_from_lines, envelope_grid};
use crate::error::{check_nonnegative, check_probability, contract, domain, Result};

fn check_rate(p: f64) -> Result<()> {
    if p.is_nan() {
        return domain("sampling rate is NaN");
    }
    check_probability("p", p)
}

/// `C_p(f)` for a symmetric `f`: `f_p = p·f + (1 − p)·Id` up to the fixed
/// point `x*` of `f`, the slope −1 chord to `f_p(x*)`, then `f_p⁻¹`.
pub fn subsample_curve(curve: &TradeoffCurve, p: f64) -> Result<TradeoffCurve> {
    check_rate(p)?;
    if !curve.is_symmetric() {
        return contract("subsample_curve needs a symmetric curve");
    }
    if p == 0.0 || matches!(curve, TradeoffCurve::Identity) {
        return Ok(TradeoffCurve::Identity);
    }
    if p == 1.0 {
        return Ok(curve.clone());
    }
    let x_star = curve.fixed_point();
    let mix = |a: f64, b: f64| p * b + (1.0 - p) * (1.0 - a);
    let y_bar = mix(x_star, curve.value(x_star));
    if curve.is_piecewise_linear() {
        let g = curve.to_grid(2);
        let pts: Vec<(f64, f64)> = g.points().map(|(a, b)| (a, mix(a, b))).collect();
        let fp = GridCurve::from_points(&pts, true)?;
        return Ok(TradeoffCurve::Grid(envelope_grid(&fp, x_star, y_bar)));
    }
    Ok(TradeoffCurve::Envelope {
        base: Arc::new(TradeoffCurve::Mixture {
            base: Arc::new(curve.clone()),
            weight: p,
        }),
        x_bar: x_star,
        y_bar,
    })
}

/// The closed form `max{f_{ε′,δ′}, 1 − pδ − p·(e^ε − 1)/(e^ε + 1) − α}`
/// with `(ε′, δ′)` from [`classical_subsample`].
///
/// Equal to `subsample_curve(f_{ε,δ}, p)` when `δ = 0`. For `δ > 0` its
/// middle chord lies `p·δ·tanh(ε/2)` below the exact `C_p(f_{ε,δ})`, so it
/// is a valid but slightly weaker guarantee.
pub fn subsample_eps_delta(eps: f64, delta: f64, p: f64) -> Result<TradeoffCurve> {
    let (eps_p, delta_p) = classical_subsample(eps, delta, p)?;
    if p == 0.0 {
        return Ok(TradeoffCurve::Identity);
    }
    if p == 1.0 {
        return Ok(TradeoffCurve::EpsDelta { eps, delta });
    }
    let e = eps_p.exp();
    let chord = 1.0 - p * delta - p * (eps / 2.0).tanh();
    curve_from_lines(vec![
        (-e, 1.0 - delta_p),
        (-1.0 / e, (1.0 - delta_p) / e),
        (-1.0, chord),
    ])
}

/// `(ε′, δ′) = (log(1 − p + p·e^ε), p·δ)`.
pub fn classical_subsample(eps: f64, delta: f64, p: f64) -> Result<(f64, f64)> {
    check_nonnegative("eps", eps)?;
    check_probability("delta", delta)?;
    check_rate(p)?;
    Ok(((p * eps.exp_m1()).ln_1p(), p * delta))
}
