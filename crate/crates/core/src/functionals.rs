//! Moment functionals of trade-off curves and the divergences that can be
//! read off a curve.
//!
//! With `L(x) = log|f'(x)|` the moment functionals are `kl = −∫L`,
//! `κ₂ = ∫L²`, `κ₃ = ∫|L|³` and `κ̄₃ = ∫|L + kl|³` over `[0, 1]`.

use serde::{Deserialize, Serialize};

use crate::curves::TradeoffCurve;
use crate::error::{check_nonnegative, check_probability, contract, domain, Result};
use crate::numerics::{integrate, integrate_singular_left, std_normal_cdf, std_normal_pdf, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentStats {
    pub kl: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub kappa3_bar: f64,
    pub finite: bool,
}

impl MomentStats {
    pub const ZERO: MomentStats = MomentStats {
        kl: 0.0,
        kappa2: 0.0,
        kappa3: 0.0,
        kappa3_bar: 0.0,
        finite: true,
    };

    pub const INFINITE: MomentStats = MomentStats {
        kl: f64::INFINITY,
        kappa2: f64::INFINITY,
        kappa3: f64::INFINITY,
        kappa3_bar: f64::INFINITY,
        finite: false,
    };

    fn new(kl: f64, kappa2: f64, kappa3: f64, kappa3_bar: f64) -> Self {
        let finite = [kl, kappa2, kappa3, kappa3_bar].iter().all(|v| v.is_finite());
        Self {
            kl,
            kappa2,
            kappa3,
            kappa3_bar,
            finite,
        }
    }
}

fn quad_tol() -> Tolerance {
    Tolerance::new(1e-13, 1e-11, 4000).expect("valid tolerance")
}

/// `E|t + Y|³` for `Y ~ N(0, 1)`.
fn abs_third_moment_shifted(t: f64) -> f64 {
    (t * t * t + 3.0 * t) * (1.0 - 2.0 * std_normal_cdf(-t)) + 2.0 * (t * t + 2.0) * std_normal_pdf(t)
}

fn gdp_moments(mu: f64) -> MomentStats {
    let kl = 0.5 * mu * mu;
    // L(x) = μY − μ²/2 with Y = Φ⁻¹(1 − x) standard normal
    MomentStats::new(
        kl,
        mu * mu + kl * kl,
        mu.powi(3) * abs_third_moment_shifted(mu / 2.0),
        mu.powi(3) * 2.0 * (2.0 / std::f64::consts::PI).sqrt(),
    )
}

fn eps_moments(eps: f64) -> MomentStats {
    let t = (eps / 2.0).tanh();
    MomentStats::new(eps * t, eps * eps, eps.powi(3), eps.powi(3) * (1.0 - t.powi(4)))
}

/// `log|s|` per segment, with the segment lengths.
fn grid_logslopes(curve: &TradeoffCurve) -> Vec<(f64, f64)> {
    curve
        .to_grid(2)
        .segments()
        .filter(|(len, _)| *len > 0.0)
        .map(|(len, s)| (len, s.abs().ln()))
        .collect()
}

fn grid_moments(curve: &TradeoffCurve) -> MomentStats {
    let segs = grid_logslopes(curve);
    let sum = |g: &dyn Fn(f64) -> f64| segs.iter().map(|&(len, l)| len * g(l)).sum::<f64>();
    let kl = -sum(&|l| l);
    MomentStats::new(
        kl,
        sum(&|l| l * l),
        sum(&|l| l.abs().powi(3)),
        sum(&|l| (l + kl).abs().powi(3)),
    )
}

/// Moment functionals of a symmetric curve.
///
/// Closed forms are used for `f_{ε,0}`, `G_μ` and `C_p(G_μ)`; piecewise
/// linear curves are summed exactly per segment; anything else goes through
/// [`moments_numeric`]. Curves with `f(0) < 1` have divergent moments and
/// return [`MomentStats::INFINITE`].
pub fn moments(curve: &TradeoffCurve) -> Result<MomentStats> {
    if !curve.is_symmetric() {
        return contract("moments need a symmetric curve");
    }
    if curve.at_zero() < 1.0 {
        return Ok(MomentStats::INFINITE);
    }
    match curve {
        TradeoffCurve::Identity => Ok(MomentStats::ZERO),
        TradeoffCurve::Gdp { mu } => Ok(gdp_moments(*mu)),
        TradeoffCurve::EpsDelta { eps, .. } => Ok(eps_moments(*eps)),
        _ => {
            if let Some((p, mu)) = as_subsampled_gdp(curve) {
                return moments_subsampled_gdp(p, mu);
            }
            if curve.is_piecewise_linear() {
                return Ok(grid_moments(curve));
            }
            moments_numeric(curve)
        }
    }
}

/// Recognizes the output of `subsample_curve(G_μ, p)`.
fn as_subsampled_gdp(curve: &TradeoffCurve) -> Option<(f64, f64)> {
    if let TradeoffCurve::Envelope { base, .. } = curve {
        if let TradeoffCurve::Mixture { base, weight } = base.as_ref() {
            if let TradeoffCurve::Gdp { mu } = base.as_ref() {
                return Some((*weight, *mu));
            }
        }
    }
    None
}

/// `∫_a^b g` over consecutive breakpoints, each panel split in half and
/// mapped so that both of its endpoints may carry integrable singularities.
fn integrate_pieces<G: Fn(f64) -> f64>(breaks: &[f64], g: G) -> Result<f64> {
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let m = 0.5 * (a + b);
        total += integrate_singular_left(&g, a, m, quad_tol())?;
        total += integrate_singular_left(|s| g(b - s), 0.0, b - m, quad_tol())?;
    }
    Ok(total)
}

fn breakpoints(curve: &TradeoffCurve, lo: f64, hi: f64) -> Vec<f64> {
    let mut xs = vec![lo, hi];
    xs.extend(curve.kinks().into_iter().filter(|k| *k > lo && *k < hi));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// Moments by quadrature on `[0, x*]`, using the symmetry `f'(f(x)) = 1/f'(x)`
/// to fold the integral over `[x*, 1]` back onto `[0, x*]`.
pub fn moments_numeric(curve: &TradeoffCurve) -> Result<MomentStats> {
    if !curve.is_symmetric() {
        return contract("moments need a symmetric curve");
    }
    if curve.at_zero() < 1.0 {
        return Ok(MomentStats::INFINITE);
    }
    let x_star = curve.fixed_point();
    let xs = breakpoints(curve, 0.0, x_star);
    let at = |x: f64| {
        let s = curve.slope(x).abs();
        (s, s.ln())
    };
    let kl = integrate_pieces(&xs, |x| {
        let (s, l) = at(x);
        (s - 1.0) * l
    })?;
    let kappa2 = integrate_pieces(&xs, |x| {
        let (s, l) = at(x);
        l * l * (1.0 + s)
    })?;
    let kappa3 = integrate_pieces(&xs, |x| {
        let (s, l) = at(x);
        l.abs().powi(3) * (1.0 + s)
    })?;
    let kappa3_bar = integrate_pieces(&xs, |x| {
        let (s, l) = at(x);
        (l + kl).abs().powi(3) + (kl - l).abs().powi(3) * s
    })?;
    Ok(MomentStats::new(kl, kappa2, kappa3, kappa3_bar))
}

/// Moments of `C_p(G_μ)` from integrals in `y = Φ⁻¹(1 − x)` with
/// `Z(y) = log(p·e^{μy − μ²/2} + 1 − p)`.
///
/// The slope −1 chord of `C_p(G_μ)` has `L = 0`, so it only enters `κ̄₃`,
/// as `kl³` times its length `(1 − p)(1 − 2Φ(−μ/2))`.
pub fn moments_subsampled_gdp(p: f64, mu: f64) -> Result<MomentStats> {
    check_probability("p", p)?;
    check_nonnegative("mu", mu)?;
    if p == 0.0 || mu == 0.0 {
        return Ok(MomentStats::ZERO);
    }
    if mu.is_infinite() {
        return Ok(MomentStats::INFINITE);
    }
    let lo = mu / 2.0;
    let hi = lo + 12.0 + lo;
    let z = |y: f64| (p * (mu * y - 0.5 * mu * mu).exp_m1()).ln_1p();
    let shifted = |y: f64| std_normal_pdf(y - mu);
    let pdf = std_normal_pdf;
    let tol = quad_tol();

    let kl = p * integrate(|y| z(y) * (shifted(y) - pdf(y)), lo, hi, tol)?;
    let heavy = |y: f64| p * shifted(y) + (2.0 - p) * pdf(y);
    let kappa2 = integrate(|y| z(y).powi(2) * heavy(y), lo, hi, tol)?;
    let kappa3 = integrate(|y| z(y).powi(3) * heavy(y), lo, hi, tol)?;
    let light = |y: f64| p * shifted(y) + (1.0 - p) * pdf(y);
    let curved = integrate(
        |y| (z(y) - kl).abs().powi(3) * light(y) + (z(y) + kl).abs().powi(3) * pdf(y),
        lo,
        hi,
        tol,
    )?;
    let chord = (1.0 - p) * (1.0 - 2.0 * std_normal_cdf(-mu / 2.0));
    Ok(MomentStats::new(kl, kappa2, kappa3, curved + kl.powi(3) * chord))
}

/// `χ²₊(f) = ∫₀¹ (|f'(x)| − 1)₊² dx`; `+∞` when `f(0) < 1`.
pub fn chi2_plus(curve: &TradeoffCurve) -> Result<f64> {
    if !curve.is_symmetric() {
        return contract("chi2_plus needs a symmetric curve");
    }
    if curve.at_zero() < 1.0 {
        return Ok(f64::INFINITY);
    }
    match curve {
        TradeoffCurve::Identity => Ok(0.0),
        TradeoffCurve::Gdp { mu } => {
            let m = *mu;
            Ok((m * m).exp() * std_normal_cdf(1.5 * m) + 3.0 * std_normal_cdf(-0.5 * m) - 2.0)
        }
        _ if curve.is_piecewise_linear() => Ok(curve
            .to_grid(2)
            .segments()
            .map(|(len, s)| len * (s.abs() - 1.0).max(0.0).powi(2))
            .sum()),
        _ => {
            // |f'| > 1 exactly on [0, x*] for a symmetric curve
            let x_star = curve.fixed_point();
            integrate_pieces(&breakpoints(curve, 0.0, x_star), |x| (curve.slope(x) + 1.0).powi(2))
        }
    }
}

/// `χ²₊` straight from its definition over `[0, 1]`, without using symmetry.
pub fn chi2_plus_numeric(curve: &TradeoffCurve) -> Result<f64> {
    if curve.at_zero() < 1.0 {
        return Ok(f64::INFINITY);
    }
    integrate_pieces(&breakpoints(curve, 0.0, 1.0), |x| (curve.slope(x).abs() - 1.0).max(0.0).powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Divergence {
    TotalVariation,
    KullbackLeibler,
    /// Rényi divergence of the given order `α > 1`.
    Renyi(f64),
}

/// A divergence `D(P‖Q)` shared by every pair `(P, Q)` with `T(P, Q) = f`,
/// from `∫₀^{z_f} F(1/|f'|)·|f'| + F(0)·(1 − f(0)) + τ_F·(1 − z_f)`.
pub fn f_divergence(curve: &TradeoffCurve, which: Divergence) -> Result<f64> {
    if let Divergence::Renyi(order) = which {
        if !(order > 1.0) {
            return domain(format!("Renyi order {order} must exceed 1"));
        }
    }
    let z = curve.first_zero();
    let f0 = curve.at_zero();
    let (integrand, atom, tail): (Box<dyn Fn(f64) -> f64>, f64, f64) = match which {
        Divergence::TotalVariation => (Box::new(|s: f64| 0.5 * (1.0 - s).abs()), 0.5, 0.5),
        Divergence::KullbackLeibler => (Box::new(|s: f64| -s.ln()), 0.0, f64::INFINITY),
        Divergence::Renyi(order) => (Box::new(move |s: f64| s.powf(1.0 - order)), 0.0, f64::INFINITY),
    };
    let boundary = atom * (1.0 - f0) + if z < 1.0 { tail * (1.0 - z) } else { 0.0 };
    if boundary.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let integral = match curve {
        TradeoffCurve::Identity => match which {
            Divergence::Renyi(_) => 1.0,
            _ => 0.0,
        },
        TradeoffCurve::Gdp { mu } => {
            let m = *mu;
            return Ok(match which {
                Divergence::TotalVariation => 1.0 - 2.0 * std_normal_cdf(-m / 2.0),
                Divergence::KullbackLeibler => 0.5 * m * m,
                Divergence::Renyi(order) => 0.5 * m * m * order,
            });
        }
        _ if curve.is_piecewise_linear() => curve
            .to_grid(2)
            .segments()
            .filter(|(len, s)| *len > 0.0 && *s < 0.0)
            .map(|(len, s)| len * integrand(s.abs()))
            .sum(),
        _ => integrate_pieces(&breakpoints(curve, 0.0, z), |x| integrand(curve.slope(x).abs()))?,
    };
    Ok(match which {
        Divergence::Renyi(order) => integral.ln() / (order - 1.0) + boundary,
        _ => integral + boundary,
    })
}

/// `μ`-GDP implies `(α, μ²α/2)`-RDP.
pub fn gdp_to_rdp(mu: f64, order: f64) -> Result<f64> {
    check_nonnegative("mu", mu)?;
    if !(order > 1.0) {
        return domain(format!("Renyi order {order} must exceed 1"));
    }
    Ok(0.5 * mu * mu * order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, DiscretePair};
    use crate::subsample::subsample_curve;
    use std::sync::Arc;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Wrapping hides the closed forms so the generic numeric paths run.
    fn opaque(c: TradeoffCurve) -> TradeoffCurve {
        TradeoffCurve::DeltaScaled {
            base: Arc::new(c),
            delta: 0.0,
        }
    }

    #[test]
    fn moments_examples() {
        let m = moments(&catalog::eps_delta(1.0, 0.0).unwrap()).unwrap();
        let t = 0.5f64.tanh();
        assert!(close(m.kl, 0.462_117_157_260_009_8, 1e-15));
        assert!(close(m.kappa2, 1.0, 1e-15) && close(m.kappa3, 1.0, 1e-15));
        assert!(close(m.kappa3_bar, 1.0 - t.powi(4), 1e-15));
        assert!(close(m.kappa3_bar, 0.954_395_429_244_608, 1e-14));
        assert!(close(moments(&catalog::gdp(1.0).unwrap()).unwrap().kl, 0.5, 1e-15));
        assert_eq!(moments(&TradeoffCurve::Identity).unwrap(), MomentStats::ZERO);
        let inf = moments(&catalog::eps_delta(1.0, 0.01).unwrap()).unwrap();
        assert!(!inf.finite && inf.kl.is_infinite());
        let asym = crate::curves::from_grid(&[(0.0, 1.0), (0.2, 0.0)], true).unwrap();
        assert!(moments(&asym).is_err());
    }

    #[test]
    fn grid_moments_match_eps_closed_forms() {
        for eps in [0.1, 0.5, 1.0, 2.0] {
            let closed = eps_moments(eps);
            let grid = TradeoffCurve::Grid(catalog::eps_delta(eps, 0.0).unwrap().to_grid(2));
            let m = moments(&grid).unwrap();
            assert!(close(m.kl, closed.kl, 1e-12));
            assert!(close(m.kappa2, closed.kappa2, 1e-12));
            assert!(close(m.kappa3, closed.kappa3, 1e-12));
            assert!(close(m.kappa3_bar, closed.kappa3_bar, 1e-12));
        }
    }

    #[test]
    fn gdp_closed_forms_against_quadrature() {
        for mu in [0.3, 1.0, 2.5] {
            let closed = gdp_moments(mu);
            let numeric = moments_numeric(&opaque(catalog::gdp(mu).unwrap())).unwrap();
            assert!(close(closed.kl, numeric.kl, 1e-8), "{mu}: {closed:?} {numeric:?}");
            assert!(close(closed.kappa2, numeric.kappa2, 1e-8));
            assert!(close(closed.kappa3, numeric.kappa3, 1e-8));
            assert!(close(closed.kappa3_bar, numeric.kappa3_bar, 1e-8));
            // E|μY − μ²/2|³ by direct y-space quadrature
            let direct = integrate(|y| (mu * y - mu * mu / 2.0).abs().powi(3) * std_normal_pdf(y), -40.0, 40.0, quad_tol()).unwrap();
            assert!(close(closed.kappa3, direct, 1e-10));
        }
    }

    #[test]
    fn subsampled_gdp_examples() {
        assert_eq!(moments_subsampled_gdp(0.0, 1.3).unwrap(), MomentStats::ZERO);
        assert_eq!(moments_subsampled_gdp(0.4, 0.0).unwrap(), MomentStats::ZERO);
        assert_eq!(moments_subsampled_gdp(1.0, 0.0).unwrap(), MomentStats::ZERO);
        // p = 1 is G_μ itself
        let a = moments_subsampled_gdp(1.0, 1.2).unwrap();
        let b = gdp_moments(1.2);
        assert!(close(a.kl, b.kl, 1e-10) && close(a.kappa2, b.kappa2, 1e-10));
        assert!(close(a.kappa3, b.kappa3, 1e-10) && close(a.kappa3_bar, b.kappa3_bar, 1e-10));
    }

    #[test]
    fn subsampled_gdp_against_x_space_quadrature() {
        for (p, mu) in [(256.0 / 60000.0, 1.0 / 1.3), (0.01, 0.5), (0.1, 1.0), (0.35, 1.8)] {
            let y = moments_subsampled_gdp(p, mu).unwrap();
            let c = subsample_curve(&catalog::gdp(mu).unwrap(), p).unwrap();
            let x = moments_numeric(&c).unwrap();
            let tol = 1e-9 + 1e-7 * y.kappa2;
            assert!(close(y.kl, x.kl, tol), "{p} {mu}: {y:?} vs {x:?}");
            assert!(close(y.kappa2, x.kappa2, tol));
            assert!(close(y.kappa3, x.kappa3, tol));
            assert!(close(y.kappa3_bar, x.kappa3_bar, tol));
        }
    }

    #[test]
    fn chi2_examples() {
        assert_eq!(chi2_plus(&TradeoffCurve::Identity).unwrap(), 0.0);
        let v = chi2_plus(&catalog::gdp(1.0).unwrap()).unwrap();
        let want = 1f64.exp() * std_normal_cdf(1.5) + 3.0 * std_normal_cdf(-0.5) - 2.0;
        assert!(close(v, want, 1e-15));
        assert!(close(v, 1.462_293_643_417_663, 1e-14));
        let e = 1f64.exp();
        let g = TradeoffCurve::Grid(catalog::eps_delta(1.0, 0.0).unwrap().to_grid(2));
        assert!(close(chi2_plus(&g).unwrap(), (e - 1.0).powi(2) / (1.0 + e), 1e-14));
        assert!(close((e - 1.0).powi(2) / (1.0 + e), 0.794_047_513_939_025_7, 1e-15));
        assert!(chi2_plus(&catalog::eps_delta(1.0, 0.1).unwrap()).unwrap().is_infinite());
    }

    #[test]
    fn chi2_two_ways() {
        for mu in [0.5, 1.0, 2.0] {
            let c = opaque(catalog::gdp(mu).unwrap());
            let a = chi2_plus(&c).unwrap();
            let b = chi2_plus_numeric(&c).unwrap();
            let closed = chi2_plus(&catalog::gdp(mu).unwrap()).unwrap();
            assert!(close(a, b, 1e-8) && close(a, closed, 1e-8), "{mu}: {a} {b} {closed}");
        }
    }

    #[test]
    fn divergence_examples() {
        assert_eq!(f_divergence(&TradeoffCurve::Identity, Divergence::TotalVariation).unwrap(), 0.0);
        assert!(close(f_divergence(&catalog::gdp(1.0).unwrap(), Divergence::Renyi(2.0)).unwrap(), 1.0, 1e-15));
        let numeric = f_divergence(&opaque(catalog::gdp(1.0).unwrap()), Divergence::Renyi(2.0)).unwrap();
        assert!(close(numeric, 1.0, 1e-8), "{numeric}");
        let tv = f_divergence(&catalog::eps_delta(1.0, 0.0).unwrap(), Divergence::TotalVariation).unwrap();
        assert!(close(tv, 0.5f64.tanh(), 1e-15));
        assert!(f_divergence(&catalog::gdp(1.0).unwrap(), Divergence::Renyi(1.0)).is_err());
        let d = catalog::eps_delta(1.0, 0.1).unwrap();
        assert!(f_divergence(&d, Divergence::KullbackLeibler).unwrap().is_infinite());
        assert!(f_divergence(&d, Divergence::Renyi(3.0)).unwrap().is_infinite());
        // δ mass shows up in TV
        let tv = f_divergence(&d, Divergence::TotalVariation).unwrap();
        let min_sum = d.kinks().into_iter().chain([0.0, 1.0]).map(|a| a + d.value(a)).fold(f64::INFINITY, f64::min);
        assert!(close(tv, 1.0 - min_sum, 1e-12), "{tv} {min_sum}");
    }

    #[test]
    fn kl_agrees_with_moments() {
        let curves = [
            catalog::laplace(1.3).unwrap(),
            catalog::from_discrete_pair(&catalog::binomial_pair(20, 0.3).unwrap()),
            subsample_curve(&catalog::gdp(1.5).unwrap(), 0.3).unwrap(),
            opaque(catalog::gdp(2.0).unwrap()),
        ];
        for c in curves {
            let a = f_divergence(&c, Divergence::KullbackLeibler).unwrap();
            let b = moments(&c).unwrap().kl;
            assert!(close(a, b, 1e-8), "{c}: {a} vs {b}");
        }
    }

    #[test]
    fn renyi_counterexample() {
        let eps: f64 = 0.1;
        let pair = DiscretePair::randomized_response(eps).unwrap();
        let f = catalog::from_discrete_pair(&pair);
        for order in [1.5, 2.0, 4.0, 8.0, 16.0] {
            let r = f_divergence(&f, Divergence::Renyi(order)).unwrap();
            // direct Rényi divergence of the two Bernoulli laws
            let direct = (pair.p().iter().zip(pair.q()).map(|(p, q)| p.powf(order) * q.powf(1.0 - order)).sum::<f64>()).ln() / (order - 1.0);
            assert!(close(r, direct, 1e-12), "{order}: {r} vs {direct}");
            assert!(r <= order * eps * eps / 2.0);
        }
        let tv = f_divergence(&f, Divergence::TotalVariation).unwrap();
        assert!(close(tv, (eps / 2.0).tanh(), 1e-14));
        assert!(tv > 1.0 - 2.0 * std_normal_cdf(-eps / 2.0));
    }

    #[test]
    fn gdp_to_rdp_examples() {
        assert_eq!(gdp_to_rdp(1.0, 2.0).unwrap(), 1.0);
        assert_eq!(gdp_to_rdp(0.0, 7.0).unwrap(), 0.0);
        assert_eq!(gdp_to_rdp(2.0, 1.5).unwrap(), 3.0);
        assert!(gdp_to_rdp(1.0, 1.0).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn moments_are_consistent(mu in 0.0f64..4.0, eps in 0.0f64..4.0, p in 0.0f64..1.0) {
                for c in [catalog::gdp(mu).unwrap(), catalog::eps_delta(eps, 0.0).unwrap(), subsample_curve(&catalog::gdp(mu).unwrap(), p).unwrap()] {
                    let m = moments(&c).unwrap();
                    prop_assert!(m.finite);
                    prop_assert!(m.kl >= -1e-15);
                    prop_assert!(m.kappa2 - m.kl * m.kl >= -1e-12, "{c}: {m:?}");
                }
            }

            #[test]
            fn tv_is_one_minus_min_error_sum(mu in 0.0f64..4.0, eps in 0.0f64..3.0, delta in 0.0f64..0.5) {
                for c in [catalog::gdp(mu).unwrap(), catalog::eps_delta(eps, delta).unwrap(), catalog::laplace(mu).unwrap()] {
                    let tv = f_divergence(&c, Divergence::TotalVariation).unwrap();
                    let min_sum = (0..=10_000).map(|i| i as f64 / 1e4).map(|a| a + c.value(a)).fold(f64::INFINITY, f64::min);
                    prop_assert!((tv - (1.0 - min_sum)).abs() <= 1e-4, "{c}: {tv} vs {}", 1.0 - min_sum);
                }
            }
        }
    }
}
