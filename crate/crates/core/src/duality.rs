//! Conversion between trade-off curves and families of `(ε, δ)` guarantees.

use serde::{Deserialize, Serialize};

use crate::curves::{from_grid, GridCurve, TradeoffCurve};
use crate::error::{check_nonnegative, check_probability, contract, domain, FdpError, Result};
use crate::numerics::{bisect_predicate, log_std_normal_cdf, std_normal_cdf};

/// Default upper end of the search in [`tightest_epsilon`].
pub const DEFAULT_EPS_HI: f64 = 50.0;
const EPS_TOL: f64 = 1e-9;

/// The dual description `ε ↦ δ(ε) = 1 + f*(−e^ε)` of a symmetric curve.
#[derive(Debug, Clone, PartialEq)]
pub struct PrivacyProfile {
    curve: TradeoffCurve,
    table: Option<Vec<ProfilePoint>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub epsilon: f64,
    pub delta: f64,
}

impl PrivacyProfile {
    pub fn curve(&self) -> &TradeoffCurve {
        &self.curve
    }

    pub fn delta(&self, eps: f64) -> f64 {
        if let TradeoffCurve::Gdp { mu } = self.curve {
            return gdp_delta(mu, eps);
        }
        let y = -eps.exp();
        if y == f64::NEG_INFINITY {
            return (1.0 - self.curve.at_zero()).clamp(0.0, 1.0);
        }
        (1.0 + self.curve.conjugate(y)).clamp(0.0, 1.0)
    }

    /// Evaluates the profile at the given `ε` values and keeps the table.
    pub fn sampled(mut self, epsilons: &[f64]) -> Self {
        let table = epsilons
            .iter()
            .map(|&e| ProfilePoint {
                epsilon: e,
                delta: self.delta(e),
            })
            .collect();
        self.table = Some(table);
        self
    }

    pub fn table(&self) -> Option<&[ProfilePoint]> {
        self.table.as_deref()
    }

    /// `epsilon,delta` CSV of the sampled table (header only if unsampled).
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["epsilon", "delta"])?;
        for p in self.table.iter().flatten() {
            w.write_record([p.epsilon.to_string(), p.delta.to_string()])?;
        }
        let bytes = w.into_inner().map_err(|e| FdpError::Serialization(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| FdpError::Serialization(e.to_string()))
    }

    /// JSON array of `{"epsilon", "delta"}` objects.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.table.as_deref().unwrap_or(&[])).expect("plain numbers")
    }
}

/// Dual representation of a symmetric curve.
pub fn primal_to_dual(curve: &TradeoffCurve) -> Result<PrivacyProfile> {
    if !curve.is_symmetric() {
        return contract("primal_to_dual needs a symmetric curve; apply symm_envelope first");
    }
    Ok(PrivacyProfile {
        curve: curve.clone(),
        table: None,
    })
}

fn gdp_delta(mu: f64, eps: f64) -> f64 {
    if mu == 0.0 || eps == f64::INFINITY {
        return 0.0;
    }
    if mu == f64::INFINITY {
        return 1.0;
    }
    let a = -eps / mu + mu / 2.0;
    let b = -eps / mu - mu / 2.0;
    // e^ε·Φ(b) overflows naively for large ε
    let second = (eps + log_std_normal_cdf(b)).exp();
    (std_normal_cdf(a) - second).clamp(0.0, 1.0)
}

/// `δ(ε) = Φ(−ε/μ + μ/2) − e^ε·Φ(−ε/μ − μ/2)`, the tight `δ` of `μ`-GDP.
pub fn gdp_to_dp(mu: f64, eps: f64) -> Result<f64> {
    check_nonnegative("mu", mu)?;
    check_nonnegative("eps", eps)?;
    Ok(gdp_delta(mu, eps))
}

fn line_envelope(lines: &mut Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    // upper envelope of y = m·x + c by the convex hull trick, slopes ascending
    lines.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    lines.dedup_by(|later, earlier| {
        if later.0 == earlier.0 {
            earlier.1 = earlier.1.max(later.1);
            true
        } else {
            false
        }
    });
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(lines.len());
    for &l in lines.iter() {
        while hull.len() >= 2 {
            let (l1, l2) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // l2 is hidden when l3 overtakes l1 no later than l2 does
            if (l.1 - l1.1) * (l2.0 - l1.0) >= (l2.1 - l1.1) * (l.0 - l1.0) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(l);
    }
    hull
}

/// `sup_i f_{ε_i, δ_i}`, computed exactly as the upper envelope of the
/// supporting lines of every `f_{ε_i, δ_i}`.
pub fn dual_to_primal(guarantees: &[(f64, f64)]) -> Result<TradeoffCurve> {
    if guarantees.is_empty() {
        return contract("dual_to_primal needs at least one (epsilon, delta) pair");
    }
    let mut lines = Vec::with_capacity(2 * guarantees.len());
    for &(eps, delta) in guarantees {
        check_nonnegative("eps", eps)?;
        if eps.is_infinite() {
            return domain("eps must be finite");
        }
        check_probability("delta", delta)?;
        let e = eps.exp();
        lines.push((-e, 1.0 - delta));
        lines.push((-1.0 / e, (1.0 - delta) / e));
    }
    curve_from_lines(lines)
}

/// The trade-off curve `max{0, sup_i (m_i·α + c_i)}` on `[0, 1]`.
pub(crate) fn curve_from_lines(mut lines: Vec<(f64, f64)>) -> Result<TradeoffCurve> {
    lines.push((0.0, 0.0));
    let hull = line_envelope(&mut lines);
    let eval = |x: f64| lines.iter().map(|(m, c)| m * x + c).fold(0.0, f64::max);
    let mut xs = vec![0.0, 1.0];
    for w in hull.windows(2) {
        let x = (w[0].1 - w[1].1) / (w[1].0 - w[0].0);
        if x > 0.0 && x < 1.0 {
            xs.push(x);
        }
    }
    xs.sort_by(f64::total_cmp);
    let pts: Vec<(f64, f64)> = xs.into_iter().map(|x| (x, eval(x))).collect();
    from_grid(&pts, true)
}

/// `x̄ = inf{x : −1 ∈ ∂f(x)}`.
fn minus_one_subgradient_point(curve: &TradeoffCurve) -> f64 {
    match curve {
        TradeoffCurve::Grid(g) => {
            let a = g.alpha();
            g.segments()
                .position(|(_, s)| s >= -1.0)
                .map(|i| a[i])
                .unwrap_or(1.0)
        }
        _ => bisect_predicate(|x| curve.slope(x) >= -1.0, 0.0, 1.0, 1e-15),
    }
}

/// The symmetric curve `Symm(f)`: `f` up to `x̄`, the slope −1 chord, then
/// `f⁻¹`, when `x̄ ≤ f(x̄)`; `max{f, f⁻¹}` otherwise.
pub fn symm_envelope(curve: &TradeoffCurve) -> TradeoffCurve {
    if curve.is_symmetric() {
        return curve.clone();
    }
    let x_bar = minus_one_subgradient_point(curve);
    let y_bar = curve.value(x_bar);
    if x_bar > y_bar {
        return curve.symmetrize();
    }
    if let TradeoffCurve::Grid(g) = curve {
        return TradeoffCurve::Grid(envelope_grid(g, x_bar, y_bar));
    }
    TradeoffCurve::Envelope {
        base: std::sync::Arc::new(curve.clone()),
        x_bar,
        y_bar,
    }
}

pub(crate) fn envelope_grid(g: &GridCurve, x_bar: f64, y_bar: f64) -> GridCurve {
    let mut left: Vec<(f64, f64)> = g.points().filter(|&(a, _)| a < x_bar).collect();
    left.push((x_bar, y_bar));
    let mirrored: Vec<(f64, f64)> = left.iter().rev().map(|&(a, b)| (b, a)).collect();
    left.extend(mirrored);
    GridCurve::from_points(&left, true).expect("non-empty")
}

/// Smallest `ε ∈ [0, ε_hi]` for which the curve implies `(ε, δ)`-DP.
pub fn tightest_epsilon(curve: &TradeoffCurve, delta: f64, eps_hi: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("delta = {delta} is not in (0, 1)"));
    }
    check_nonnegative("eps_hi", eps_hi)?;
    let profile = primal_to_dual(curve)?;
    if let TradeoffCurve::Gdp { mu } = curve {
        if *mu == 0.0 {
            return Ok(0.0);
        }
    }
    let ok = |e: f64| profile.delta(e) <= delta;
    if ok(0.0) {
        return Ok(0.0);
    }
    if !ok(eps_hi) {
        return Err(FdpError::NoSolution(format!(
            "delta({eps_hi}) = {} still exceeds {delta}",
            profile.delta(eps_hi)
        )));
    }
    Ok(bisect_predicate(ok, 0.0, eps_hi, EPS_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::subsample::subsample_curve;
    use std::sync::Arc;

    #[test]
    fn primal_to_dual_examples() {
        let p = primal_to_dual(&catalog::gdp(1.0).unwrap()).unwrap();
        assert!((p.delta(0.0) - 0.382_924_922_548_026).abs() < 1e-12);
        let p = primal_to_dual(&catalog::eps_delta(2.0, 0.1).unwrap()).unwrap();
        assert!((p.delta(2.0) - 0.1).abs() < 1e-15);
        let p = primal_to_dual(&TradeoffCurve::Identity).unwrap();
        for e in [0.0, 0.5, 3.0] {
            assert_eq!(p.delta(e), 0.0);
        }
        let asym = from_grid(&[(0.0, 1.0), (0.5, 0.0)], true).unwrap();
        assert!(matches!(primal_to_dual(&asym), Err(FdpError::Contract(_))));
    }

    #[test]
    fn gdp_to_dp_examples() {
        assert!((gdp_to_dp(1.0, 0.0).unwrap() - 0.382_924_922_548_026).abs() < 1e-12);
        assert_eq!(gdp_to_dp(1.0, f64::INFINITY).unwrap(), 0.0);
        assert!(gdp_to_dp(1.0, 200.0).unwrap() < 1e-300);
        let v = gdp_to_dp(2.0, 1.0).unwrap();
        // mpmath: Φ(0.5) − e·Φ(−1.5) = 0.50986166005467015
        assert!((v - 0.509_861_660_054_670_2).abs() < 1e-13, "{v}");
        // against the grid conjugate
        let g = TradeoffCurve::Grid(catalog::gdp(2.0).unwrap().to_grid(1001));
        assert!((1.0 + g.conjugate(-1f64.exp()) - v).abs() < 1e-7);
        assert_eq!(gdp_to_dp(0.0, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn gdp_to_dp_matches_generic_conjugate() {
        for mu in [0.3, 1.0, 2.5] {
            let wrapped = TradeoffCurve::DeltaScaled {
                base: Arc::new(TradeoffCurve::Gdp { mu }),
                delta: 0.0,
            };
            let p = primal_to_dual(&wrapped).unwrap();
            for e in [0.0, 0.1, 1.0, 3.0] {
                assert!((p.delta(e) - gdp_to_dp(mu, e).unwrap()).abs() < 1e-10, "{mu} {e}");
            }
        }
    }

    #[test]
    fn dual_to_primal_examples() {
        let f = dual_to_primal(&[(0.0, 0.1)]).unwrap();
        assert!((f.value(0.5) - 0.4).abs() < 1e-15);
        let f = dual_to_primal(&[(1.0, 0.0), (0.0, 0.3)]).unwrap();
        let (a, b) = (catalog::eps_delta(1.0, 0.0).unwrap(), catalog::eps_delta(0.0, 0.3).unwrap());
        for k in 0..=1000 {
            let x = k as f64 / 1000.0;
            assert!((f.value(x) - a.value(x).max(b.value(x))).abs() < 1e-15);
        }
        assert!(dual_to_primal(&[]).is_err());
        let pairs: Vec<(f64, f64)> = (0..200)
            .map(|i| 6.0 * i as f64 / 199.0)
            .map(|e| (e, gdp_to_dp(1.0, e).unwrap()))
            .collect();
        let f = dual_to_primal(&pairs).unwrap();
        assert!(f.sup_distance(&catalog::gdp(1.0).unwrap(), 10001) < 2e-3);
        assert!(f.is_symmetric());
    }

    #[test]
    fn line_envelope_against_brute_force() {
        let mut lines = vec![(-3.0, 1.0), (-1.0, 0.6), (-0.2, 0.25), (-2.0, 0.5), (0.0, 0.0), (-1.0, 0.1)];
        let hull = line_envelope(&mut lines.clone());
        for k in 0..=1000 {
            let x = k as f64 / 1000.0;
            let brute = lines.iter().map(|(m, c)| m * x + c).fold(f64::NEG_INFINITY, f64::max);
            let env = hull.iter().map(|(m, c)| m * x + c).fold(f64::NEG_INFINITY, f64::max);
            assert!((brute - env).abs() < 1e-15);
        }
        assert!(!hull.contains(&(-2.0, 0.5)));
        lines.clear();
    }

    #[test]
    fn symm_envelope_examples() {
        let g = catalog::gdp(1.0).unwrap();
        assert_eq!(symm_envelope(&g), g);

        let base = TradeoffCurve::Mixture {
            base: Arc::new(catalog::gdp(1.8).unwrap()),
            weight: 0.35,
        };
        let s = symm_envelope(&base);
        let c = subsample_curve(&catalog::gdp(1.8).unwrap(), 0.35).unwrap();
        assert!(s.sup_distance(&c, 2001) < 1e-8);

        // (1 − x)²: x̄ = 1/2 and f(x̄) = 1/4 < x̄
        let pts: Vec<(f64, f64)> = (0..=2000).map(|i| i as f64 / 2000.0).map(|x| (x, (1.0 - x) * (1.0 - x))).collect();
        let f = from_grid(&pts, true).unwrap();
        let s = symm_envelope(&f);
        let inv = f.inverse();
        for k in 0..=200 {
            let x = k as f64 / 200.0;
            assert!((s.value(x) - f.value(x).max(inv.value(x))).abs() < 1e-12);
        }
    }

    #[test]
    fn symm_envelope_chord_case_on_grid() {
        // steep then flat, asymmetric: x̄ = 0.1 with f(x̄) = 0.5
        let f = from_grid(&[(0.0, 1.0), (0.1, 0.5), (1.0, 0.0)], true).unwrap();
        let s = symm_envelope(&f);
        assert!((s.value(0.1) - 0.5).abs() < 1e-15);
        assert!((s.value(0.3) - 0.3).abs() < 1e-15);
        assert!(s.sup_distance(&s.inverse(), 1001) < 1e-12);
        assert!(s.validate(10001).is_valid);
    }

    #[test]
    fn tightest_epsilon_examples() {
        let g = catalog::gdp(1.0).unwrap();
        let d = gdp_to_dp(1.0, 2.0).unwrap();
        assert!((tightest_epsilon(&g, d, DEFAULT_EPS_HI).unwrap() - 2.0).abs() < 1e-6);
        assert_eq!(tightest_epsilon(&TradeoffCurve::Identity, 0.5, DEFAULT_EPS_HI).unwrap(), 0.0);
        let f = catalog::eps_delta(1.0, 0.2).unwrap();
        assert!(matches!(tightest_epsilon(&f, 0.1, DEFAULT_EPS_HI), Err(FdpError::NoSolution(_))));
        assert!(tightest_epsilon(&g, 0.0, DEFAULT_EPS_HI).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn profile_is_monotone_and_bounded(mu in 0.05f64..5.0, e1 in 0.0f64..10.0, e2 in 0.0f64..10.0) {
                let p = primal_to_dual(&catalog::gdp(mu).unwrap()).unwrap();
                let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
                prop_assert!(p.delta(hi) <= p.delta(lo) + 1e-15);
                prop_assert!((0.0..=1.0).contains(&p.delta(lo)));
            }

            #[test]
            fn eps_delta_profile_hits_delta(eps in 0.0f64..5.0, delta in 0.0f64..1.0) {
                let p = primal_to_dual(&catalog::eps_delta(eps, delta).unwrap()).unwrap();
                prop_assert!((p.delta(eps) - delta).abs() <= 1e-12);
                prop_assert!(p.delta(40.0) <= 1.0 - catalog::eps_delta(eps, delta).unwrap().at_zero() + 1e-12);
            }

            #[test]
            fn symm_envelope_is_valid_and_symmetric(pts in proptest::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..20)) {
                let f = from_grid(&pts, true).unwrap();
                let s = symm_envelope(&f);
                prop_assert!(s.validate(2001).is_valid);
                prop_assert!(s.sup_distance(&s.inverse(), 2001) <= 1e-8);
            }
        }
    }
}
