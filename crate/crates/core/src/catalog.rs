//! Constructors for the named trade-off families and the exact
//! Neyman–Pearson curve of a finite pair of distributions.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::curves::{from_grid, TradeoffCurve};
use crate::error::{check_nonnegative, check_probability, contract, domain, FdpError, Result};
use crate::numerics::{quantile_unchecked, std_normal_cdf, std_normal_pdf};

/// A continuous distribution on the real line used as the noise of a
/// location family `T(ξ, t + ξ)`.
pub trait LocationCdf: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;
    fn cdf(&self, x: f64) -> f64;
    fn pdf(&self, x: f64) -> f64;
    fn quantile(&self, p: f64) -> f64;

    /// `F⁻¹(1 − α)`, overridable where it can be computed without
    /// cancellation for small `α`.
    fn upper_quantile(&self, alpha: f64) -> f64 {
        self.quantile(1.0 - alpha)
    }

    /// Whether the density is symmetric about zero, making the trade-off
    /// curve its own inverse.
    fn is_symmetric(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct StandardNormal;

impl LocationCdf for StandardNormal {
    fn name(&self) -> &'static str {
        "normal"
    }
    fn cdf(&self, x: f64) -> f64 {
        std_normal_cdf(x)
    }
    fn pdf(&self, x: f64) -> f64 {
        std_normal_pdf(x)
    }
    fn quantile(&self, p: f64) -> f64 {
        quantile_unchecked(p)
    }
    fn upper_quantile(&self, alpha: f64) -> f64 {
        -quantile_unchecked(alpha)
    }
    fn is_symmetric(&self) -> bool {
        true
    }
}

/// Laplace(0, 1).
#[derive(Debug, Clone, Copy, Default)]
pub struct StandardLaplace;

impl LocationCdf for StandardLaplace {
    fn name(&self) -> &'static str {
        "laplace"
    }
    fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.5 * x.exp()
        } else {
            1.0 - 0.5 * (-x).exp()
        }
    }
    fn pdf(&self, x: f64) -> f64 {
        0.5 * (-x.abs()).exp()
    }
    fn quantile(&self, p: f64) -> f64 {
        if p < 0.5 {
            (2.0 * p).ln()
        } else {
            -(2.0 * (1.0 - p)).ln()
        }
    }
    fn upper_quantile(&self, alpha: f64) -> f64 {
        -self.quantile(alpha)
    }
    fn is_symmetric(&self) -> bool {
        true
    }
}

/// Logistic(0, 1).
#[derive(Debug, Clone, Copy, Default)]
pub struct StandardLogistic;

impl LocationCdf for StandardLogistic {
    fn name(&self) -> &'static str {
        "logistic"
    }
    fn cdf(&self, x: f64) -> f64 {
        1.0 / (1.0 + (-x).exp())
    }
    fn pdf(&self, x: f64) -> f64 {
        let e = (-x.abs()).exp();
        e / ((1.0 + e) * (1.0 + e))
    }
    fn quantile(&self, p: f64) -> f64 {
        (p / (1.0 - p)).ln()
    }
    fn upper_quantile(&self, alpha: f64) -> f64 {
        -self.quantile(alpha)
    }
    fn is_symmetric(&self) -> bool {
        true
    }
}

/// Looks up one of the built-in location families by name
/// (`normal`, `laplace`, `logistic`).
pub fn location_cdf_by_name(name: &str) -> Option<Arc<dyn LocationCdf>> {
    match name.to_ascii_lowercase().as_str() {
        "normal" | "gaussian" => Some(Arc::new(StandardNormal)),
        "laplace" => Some(Arc::new(StandardLaplace)),
        "logistic" => Some(Arc::new(StandardLogistic)),
        _ => None,
    }
}

fn check_param(name: &str, x: f64) -> Result<()> {
    check_nonnegative(name, x)?;
    if x.is_infinite() {
        return domain(format!("{name} must be finite"));
    }
    Ok(())
}

/// `G_μ`, the trade-off between `N(0, 1)` and `N(μ, 1)`.
pub fn gdp(mu: f64) -> Result<TradeoffCurve> {
    check_param("mu", mu)?;
    Ok(TradeoffCurve::Gdp { mu })
}

pub fn eps_delta(eps: f64, delta: f64) -> Result<TradeoffCurve> {
    check_param("eps", eps)?;
    check_probability("delta", delta)?;
    Ok(TradeoffCurve::EpsDelta { eps, delta })
}

/// `f_{0,δ}`.
pub fn point_mass_delta(delta: f64) -> Result<TradeoffCurve> {
    check_probability("delta", delta)?;
    Ok(TradeoffCurve::PointMassDelta { delta })
}

/// `T(Lap(0, 1), Lap(μ, 1))`.
pub fn laplace(mu: f64) -> Result<TradeoffCurve> {
    check_param("mu", mu)?;
    Ok(TradeoffCurve::Laplace { mu })
}

/// `α ↦ F(F⁻¹(1 − α) − t)`. Only a trade-off function when the density of
/// `F` is log-concave; that is left to the caller.
pub fn location_family(cdf: Arc<dyn LocationCdf>, shift: f64) -> Result<TradeoffCurve> {
    check_param("shift", shift)?;
    if shift == 0.0 {
        return Ok(TradeoffCurve::Identity);
    }
    Ok(TradeoffCurve::Location { cdf, shift })
}

/// Two probability vectors on a common finite support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPair")]
pub struct DiscretePair {
    p: Vec<f64>,
    q: Vec<f64>,
}

#[derive(Deserialize)]
struct RawPair {
    p: Vec<f64>,
    q: Vec<f64>,
}

impl TryFrom<RawPair> for DiscretePair {
    type Error = FdpError;
    fn try_from(raw: RawPair) -> Result<Self> {
        DiscretePair::new(raw.p, raw.q)
    }
}

const SUM_TOL: f64 = 1e-12;

impl DiscretePair {
    pub fn new(p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        if p.is_empty() || p.len() != q.len() {
            return contract(format!(
                "p and q need the same non-zero length (got {} and {})",
                p.len(),
                q.len()
            ));
        }
        for (name, v) in [("p", &p), ("q", &q)] {
            if let Some(x) = v.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
                return domain(format!("{name} has an invalid entry {x}"));
            }
            let s: f64 = v.iter().sum();
            if (s - 1.0).abs() > SUM_TOL {
                return domain(format!("{name} sums to {s}, not 1"));
            }
        }
        Ok(Self { p, q })
    }

    /// Two-point pair whose trade-off function is `f_{ε,0}`.
    pub fn randomized_response(eps: f64) -> Result<Self> {
        check_param("eps", eps)?;
        let hi = 1.0 / (1.0 + (-eps).exp());
        let lo = 1.0 / (1.0 + eps.exp());
        Self::new(vec![hi, lo], vec![lo, hi])
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn support_size(&self) -> usize {
        self.p.len()
    }

    /// `(Q, P)`; its curve is the inverse of this pair's curve.
    pub fn swapped(&self) -> Self {
        Self {
            p: self.q.clone(),
            q: self.p.clone(),
        }
    }

    /// Pushes both distributions through the same Markov kernel, where
    /// `kernel[i][j]` is the probability of output `j` given input `i`.
    pub fn process(&self, kernel: &[Vec<f64>]) -> Result<Self> {
        if kernel.len() != self.support_size() {
            return contract(format!(
                "kernel has {} rows for a support of size {}",
                kernel.len(),
                self.support_size()
            ));
        }
        let out = kernel.first().map(Vec::len).unwrap_or(0);
        if out == 0 || kernel.iter().any(|r| r.len() != out) {
            return contract("kernel rows must be non-empty and of equal length");
        }
        let push = |v: &[f64]| -> Vec<f64> {
            let mut res = vec![0.0; out];
            for (w, row) in v.iter().zip(kernel) {
                for (r, k) in res.iter_mut().zip(row) {
                    *r += w * k;
                }
            }
            res
        };
        Self::new(push(&self.p), push(&self.q))
    }
}

/// The exact trade-off curve `T(P, Q)` via the Neyman–Pearson lemma:
/// reject in decreasing order of the likelihood ratio `q/p`, randomizing
/// within ties.
pub fn from_discrete_pair(pair: &DiscretePair) -> TradeoffCurve {
    // (log q/p, p, q), with p = 0 < q as +∞ and q = 0 < p as −∞
    let mut atoms: Vec<(f64, f64, f64)> = pair
        .p
        .iter()
        .zip(&pair.q)
        .filter(|(p, q)| **p > 0.0 || **q > 0.0)
        .map(|(&p, &q)| (q.ln() - p.ln(), p, q))
        .collect();
    atoms.sort_by(|a, b| b.0.total_cmp(&a.0));

    let mut merged: Vec<(f64, f64, f64)> = Vec::with_capacity(atoms.len());
    for a in atoms {
        match merged.last_mut() {
            Some(last) if same_ratio(last.0, a.0) => {
                last.1 += a.1;
                last.2 += a.2;
            }
            _ => merged.push(a),
        }
    }

    let mut pts = Vec::with_capacity(merged.len() + 1);
    pts.push((0.0, 1.0));
    let (mut sp, mut sq) = (0.0, 0.0);
    for (_, p, q) in merged {
        sp += p;
        sq += q;
        pts.push((sp, 1.0 - sq));
    }
    // rounding can leave the final cumulative sums a hair off 1
    if let Some(last) = pts.last_mut() {
        *last = (1.0, 0.0);
    }
    from_grid(&pts, true).expect("at least two vertices")
}

fn same_ratio(a: f64, b: f64) -> bool {
    a == b || (a.is_finite() && b.is_finite() && (a - b).abs() <= 1e-12 * a.abs().max(1.0))
}

/// `(B(n, p_ε), B(n, q_ε))` with `p_ε = 1/(1 + e^ε)` and `q_ε = e^ε/(1 + e^ε)`,
/// on the support `{0, …, n}`.
pub fn binomial_pair(n: usize, eps: f64) -> Result<DiscretePair> {
    if n == 0 {
        return domain("n must be at least 1");
    }
    check_param("eps", eps)?;
    let lp = -(eps.exp()).ln_1p(); // ln(1/(1 + e^ε))
    let lq = -((-eps).exp()).ln_1p(); // ln(e^ε/(1 + e^ε))
    let nf = n as f64;
    let ln_n_fact = ln_gamma(nf + 1.0);
    let pmf = |ls: f64, lf: f64| -> Vec<f64> {
        let mut v: Vec<f64> = (0..=n)
            .map(|k| {
                let k = k as f64;
                let ln_choose = ln_n_fact - ln_gamma(k + 1.0) - ln_gamma(nf - k + 1.0);
                (ln_choose + k * ls + (nf - k) * lf).exp()
            })
            .collect();
        // log-gamma rounding grows with n; renormalize so the pair is exact
        let s: f64 = v.iter().sum();
        v.iter_mut().for_each(|x| *x /= s);
        v
    };
    DiscretePair::new(pmf(lp, lq), pmf(lq, lp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gdp_examples() {
        let g0 = gdp(0.0).unwrap();
        assert!((g0.eval(0.3).unwrap() - 0.7).abs() < 1e-15);
        assert!((gdp(1.0).unwrap().eval(0.5).unwrap() - 0.158_655_253_931_457_05).abs() < 1e-14);
        assert!((gdp(6.0).unwrap().fixed_point() - 0.001_349_898_031_630_094_6).abs() < 1e-12);
        assert!(gdp(-1.0).is_err());
    }

    #[test]
    fn eps_delta_examples() {
        assert!((eps_delta(0.0, 0.1).unwrap().eval(0.5).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(eps_delta(1.0, 0.0).unwrap().eval(0.0).unwrap(), 1.0);
        assert!((eps_delta(3.0, 0.1).unwrap().eval(0.0).unwrap() - 0.9).abs() < 1e-15);
        assert!(eps_delta(-1.0, 0.0).is_err());
        assert!(eps_delta(1.0, 1.5).is_err());
    }

    #[test]
    fn laplace_examples() {
        let l = laplace(1.0).unwrap();
        assert!((l.eval(0.5).unwrap() - (-1f64).exp() / 2.0).abs() < 1e-15);
        assert!((l.eval(0.1).unwrap() - (1.0 - std::f64::consts::E * 0.1)).abs() < 1e-15);
        assert!((laplace(0.0).unwrap().eval(0.3).unwrap() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn location_family_examples() {
        for mu in [0.5, 1.0, 2.5] {
            let normal = location_family(Arc::new(StandardNormal), mu).unwrap();
            let lap = location_family(Arc::new(StandardLaplace), mu).unwrap();
            for k in 0..=1000 {
                let x = k as f64 / 1000.0;
                assert!((normal.value(x) - gdp(mu).unwrap().value(x)).abs() < 1e-10);
                assert!((lap.value(x) - laplace(mu).unwrap().value(x)).abs() < 1e-10, "{mu} {x}");
            }
        }
        let id = location_family(Arc::new(StandardLogistic), 0.0).unwrap();
        assert_eq!(id, TradeoffCurve::Identity);
        let logi = location_family(Arc::new(StandardLogistic), 1.5).unwrap();
        assert!(logi.validate(10001).is_valid);
        assert!(logi.is_symmetric());
    }

    #[test]
    fn discrete_pair_examples() {
        let same = DiscretePair::new(vec![0.5, 0.5], vec![0.5, 0.5]).unwrap();
        assert!(from_discrete_pair(&same).sup_distance(&TradeoffCurve::Identity, 1001) < 1e-15);

        let perfect = DiscretePair::new(vec![1.0, 0.0], vec![0.0, 1.0]).unwrap();
        let zero = from_discrete_pair(&perfect);
        for k in 0..=100 {
            assert_eq!(zero.value(k as f64 / 100.0), 0.0);
        }

        let rr = DiscretePair::randomized_response(1.0).unwrap();
        let f = from_discrete_pair(&rr);
        assert!(f.sup_distance(&eps_delta(1.0, 0.0).unwrap(), 10001) < 1e-12);
    }

    #[test]
    fn randomized_response_matches_enumerated_tests() {
        // every randomized test is a convex combination of the four
        // deterministic ones; the lower envelope of their (α, β) points is T(P, Q)
        let e = 1f64.exp();
        let p = [e / (1.0 + e), 1.0 / (1.0 + e)];
        let q = [1.0 / (1.0 + e), e / (1.0 + e)];
        let mut pts = Vec::new();
        for mask in 0..4u32 {
            let rej = |i: usize| (mask >> i) & 1 == 1;
            let a: f64 = (0..2).filter(|&i| rej(i)).map(|i| p[i]).sum();
            let b: f64 = 1.0 - (0..2).filter(|&i| rej(i)).map(|i| q[i]).sum::<f64>();
            pts.push((a, b));
        }
        let oracle = from_grid(&pts, true).unwrap();
        let f = from_discrete_pair(&DiscretePair::randomized_response(1.0).unwrap());
        assert!(f.sup_distance(&oracle, 10001) < 1e-12);
    }

    #[test]
    fn zero_probability_entries() {
        // q-only atom is rejected first: f(0) = 1 − 0.2
        let pair = DiscretePair::new(vec![0.0, 0.5, 0.5, 0.0], vec![0.2, 0.4, 0.4, 0.0]).unwrap();
        let f = from_discrete_pair(&pair);
        assert!((f.value(0.0) - 0.8).abs() < 1e-15);
        // p-only atom sorts last: the curve hits zero before α = 1
        let pair = DiscretePair::new(vec![0.3, 0.7], vec![0.0, 1.0]).unwrap();
        let f = from_discrete_pair(&pair);
        assert!((f.first_zero() - 0.7).abs() < 1e-15);
    }

    #[test]
    fn binomial_examples() {
        let b = binomial_pair(1, 1.0).unwrap();
        let e = 1f64.exp();
        assert!((b.p()[0] - e / (1.0 + e)).abs() < 1e-15);
        assert!((b.p()[1] - 1.0 / (1.0 + e)).abs() < 1e-15);
        assert_eq!(b.q(), &[b.p()[1], b.p()[0]]);
        let b = binomial_pair(2, 0.0).unwrap();
        for (x, w) in b.p().iter().zip([0.25, 0.5, 0.25]) {
            assert!((x - w).abs() < 1e-15);
        }
        let b = binomial_pair(10, 1.0 / 10f64.sqrt()).unwrap();
        assert!((b.p().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((b.q().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let big = binomial_pair(1_000_000, 0.001).unwrap();
        assert!((big.p().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(binomial_pair(0, 1.0).is_err());
    }

    #[test]
    fn binomial_against_direct_product() {
        // n = 12 pmf by repeated convolution of the Bernoulli
        let eps = 0.7;
        let s = 1.0 / (1.0 + f64::exp(eps));
        let mut pmf = vec![1.0];
        for _ in 0..12 {
            let mut next = vec![0.0; pmf.len() + 1];
            for (k, w) in pmf.iter().enumerate() {
                next[k] += w * (1.0 - s);
                next[k + 1] += w * s;
            }
            pmf = next;
        }
        let b = binomial_pair(12, eps).unwrap();
        for (x, y) in b.p().iter().zip(&pmf) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn pair_json() {
        let pair = DiscretePair::new(vec![0.25, 0.75], vec![0.5, 0.5]).unwrap();
        let text = serde_json::to_string(&pair).unwrap();
        assert_eq!(text, r#"{"p":[0.25,0.75],"q":[0.5,0.5]}"#);
        assert_eq!(serde_json::from_str::<DiscretePair>(&text).unwrap(), pair);
        assert!(serde_json::from_str::<DiscretePair>(r#"{"p":[0.3],"q":[1.0]}"#).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn prob_vec(k: usize) -> impl Strategy<Value = Vec<f64>> {
            proptest::collection::vec(0.0f64..1.0, k).prop_map(|v| {
                let s: f64 = v.iter().sum::<f64>() + 1e-9;
                let mut out: Vec<f64> = v.iter().map(|x| (x + 1e-9 / v.len() as f64) / s).collect();
                let err = 1.0 - out.iter().sum::<f64>();
                out[0] += err;
                out
            })
        }

        fn pair() -> impl Strategy<Value = DiscretePair> {
            (2usize..6).prop_flat_map(|k| (prob_vec(k), prob_vec(k))).prop_map(|(p, q)| DiscretePair::new(p, q).unwrap())
        }

        fn kernel(rows: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
            (1usize..5).prop_flat_map(move |cols| proptest::collection::vec(prob_vec(cols), rows))
        }

        proptest! {
            #[test]
            fn swapped_pair_gives_inverse(pair in pair()) {
                let f = from_discrete_pair(&pair);
                let g = from_discrete_pair(&pair.swapped());
                prop_assert!(f.inverse().sup_distance(&g, 2001) <= 1e-9);
            }

            #[test]
            fn post_processing_never_hurts(
                (pair, k) in pair().prop_flat_map(|p| { let n = p.support_size(); (Just(p), kernel(n)) })
            ) {
                let f = from_discrete_pair(&pair);
                let g = from_discrete_pair(&pair.process(&k).unwrap());
                prop_assert!(g.dominates(&f, 2001, 1e-8));
            }

            #[test]
            fn gdp_is_decreasing_in_mu(a in 0.0f64..5.0, b in 0.0f64..5.0) {
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                prop_assert!(gdp(lo).unwrap().dominates(&gdp(hi).unwrap(), 1001, 0.0));
            }

            #[test]
            fn constructors_validate(mu in 0.0f64..8.0, eps in 0.0f64..6.0, delta in 0.0f64..1.0) {
                for c in [gdp(mu).unwrap(), laplace(mu).unwrap(), eps_delta(eps, delta).unwrap(), point_mass_delta(delta).unwrap()] {
                    let r = c.validate(10001);
                    prop_assert!(r.is_valid, "{c}: {:?}", r.violations);
                }
            }
        }
    }
}
