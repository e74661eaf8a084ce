//! Trade-off functions.
//!
//! A [`TradeoffCurve`] is either one of the closed-form families (Gaussian,
//! `(ε, δ)`, Laplace, ...), an operator applied to other curves (mixture with
//! the identity, inverse, pointwise max, symmetric envelope, `δ`-scaling), or a
//! piecewise-linear [`GridCurve`] for anything produced numerically. Every
//! variant can be evaluated, differentiated and inverted; closed forms are used
//! wherever they exist.

mod grid;
mod io;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use grid::GridCurve;
pub use io::{grid_from_csv, grid_to_csv};

use crate::catalog::LocationCdf;
use crate::error::{domain, Result};
use crate::numerics::{bisect_predicate, quantile_unchecked, std_normal_cdf};

/// Breakpoints used when a smooth curve is sampled into a grid.
pub const DEFAULT_GRID_SIZE: usize = 1001;

/// Largest gap between a smooth curve and its chords in [`TradeoffCurve::to_grid`].
pub const CHORD_TOL: f64 = 1e-8;
const MAX_REFINED_POINTS: usize = 1 << 20;

const SYMMETRY_TOL: f64 = 1e-7;
const INVERSE_TOL: f64 = 1e-15;

#[derive(Debug, Clone)]
pub enum TradeoffCurve {
    /// `Id(α) = 1 − α`: perfect privacy.
    Identity,
    /// `G_μ(α) = Φ(Φ⁻¹(1 − α) − μ)`.
    Gdp { mu: f64 },
    /// `f_{ε,δ}(α) = max{0, 1 − δ − e^ε α, e^{−ε}(1 − δ − α)}`.
    EpsDelta { eps: f64, delta: f64 },
    /// `T(Lap(0, 1), Lap(μ, 1))`.
    Laplace { mu: f64 },
    /// `f_{0,δ}(α) = max{0, 1 − δ − α}`.
    PointMassDelta { delta: f64 },
    /// `α ↦ F(F⁻¹(1 − α) − shift)` for a location family with CDF `F`.
    Location { cdf: Arc<dyn LocationCdf>, shift: f64 },
    Grid(GridCurve),
    /// `weight·f + (1 − weight)·Id`.
    Mixture { base: Arc<TradeoffCurve>, weight: f64 },
    /// Left-continuous inverse `α ↦ inf{t : f(t) ≤ α}`.
    Inverse(Arc<TradeoffCurve>),
    Max(Arc<TradeoffCurve>, Arc<TradeoffCurve>),
    /// `f` on `[0, x̄]`, the chord `x̄ + f(x̄) − α` on `[x̄, f(x̄)]`, and `f⁻¹`
    /// afterwards, where `y_bar = f(x̄)`.
    Envelope {
        base: Arc<TradeoffCurve>,
        x_bar: f64,
        y_bar: f64,
    },
    /// `f ⊗ f_{0,δ}(α) = (1 − δ)·f(α / (1 − δ))` on `[0, 1 − δ]`, zero after.
    DeltaScaled { base: Arc<TradeoffCurve>, delta: f64 },
    /// `max{G_μ(α + γ) − γ, 0}` with `G_μ` extended by zero beyond 1.
    GdpLowerBracket { mu: f64, gamma: f64 },
}

impl PartialEq for TradeoffCurve {
    fn eq(&self, other: &Self) -> bool {
        use TradeoffCurve::*;
        match (self, other) {
            (Identity, Identity) => true,
            (Gdp { mu: a }, Gdp { mu: b }) => a == b,
            (EpsDelta { eps: e1, delta: d1 }, EpsDelta { eps: e2, delta: d2 }) => e1 == e2 && d1 == d2,
            (Laplace { mu: a }, Laplace { mu: b }) => a == b,
            (PointMassDelta { delta: a }, PointMassDelta { delta: b }) => a == b,
            (Location { cdf: c1, shift: s1 }, Location { cdf: c2, shift: s2 }) => {
                c1.name() == c2.name() && s1 == s2
            }
            (Grid(a), Grid(b)) => a == b,
            (Mixture { base: b1, weight: w1 }, Mixture { base: b2, weight: w2 }) => b1 == b2 && w1 == w2,
            (Inverse(a), Inverse(b)) => a == b,
            (Max(a1, b1), Max(a2, b2)) => a1 == a2 && b1 == b2,
            (
                Envelope { base: b1, x_bar: x1, y_bar: y1 },
                Envelope { base: b2, x_bar: x2, y_bar: y2 },
            ) => b1 == b2 && x1 == x2 && y1 == y2,
            (DeltaScaled { base: b1, delta: d1 }, DeltaScaled { base: b2, delta: d2 }) => b1 == b2 && d1 == d2,
            (GdpLowerBracket { mu: m1, gamma: g1 }, GdpLowerBracket { mu: m2, gamma: g2 }) => m1 == m2 && g1 == g2,
            _ => false,
        }
    }
}

impl fmt::Display for TradeoffCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TradeoffCurve::*;
        match self {
            Identity => write!(f, "Id"),
            Gdp { mu } => write!(f, "G({mu})"),
            EpsDelta { eps, delta } => write!(f, "f({eps}, {delta})"),
            Laplace { mu } => write!(f, "Lap({mu})"),
            PointMassDelta { delta } => write!(f, "f(0, {delta})"),
            Location { cdf, shift } => write!(f, "T({0}, {shift} + {0})", cdf.name()),
            Grid(g) => write!(f, "Grid[{} points]", g.len()),
            Mixture { base, weight } => write!(f, "{weight}·{base} + (1 − {weight})·Id"),
            Inverse(b) => write!(f, "({b})⁻¹"),
            Max(a, b) => write!(f, "max({a}, {b})"),
            Envelope { base, .. } => write!(f, "Symm({base})"),
            DeltaScaled { base, delta } => write!(f, "{base} ⊗ f(0, {delta})"),
            GdpLowerBracket { mu, gamma } => write!(f, "G({mu})(α + {gamma}) − {gamma}"),
        }
    }
}

/// One failed shape check from [`TradeoffCurve::validate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub property: String,
    pub witness: f64,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub is_valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self {
            is_valid: violations.is_empty(),
            violations,
        }
    }

    pub fn violation(&self, property: &str) -> Option<&Violation> {
        self.violations.iter().find(|v| v.property == property)
    }
}

/// `G_μ(α)` with the convention `G_μ = 1` below 0 and `0` above 1.
pub(crate) fn gdp_value(mu: f64, alpha: f64) -> f64 {
    if alpha <= 0.0 {
        return 1.0;
    }
    if alpha >= 1.0 {
        return 0.0;
    }
    if mu == 0.0 {
        return 1.0 - alpha;
    }
    std_normal_cdf(-quantile_unchecked(alpha) - mu)
}

/// `G_μ'(α) = −exp(μ·Φ⁻¹(1 − α) − μ²/2)`.
pub(crate) fn gdp_slope(mu: f64, alpha: f64) -> f64 {
    if mu == 0.0 {
        return -1.0;
    }
    if alpha <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if alpha >= 1.0 {
        return 0.0;
    }
    let y = -quantile_unchecked(alpha);
    -(mu * y - 0.5 * mu * mu).exp()
}

fn eps_delta_value(eps: f64, delta: f64, alpha: f64) -> f64 {
    let a = 1.0 - delta - eps.exp() * alpha;
    let b = (-eps).exp() * (1.0 - delta - alpha);
    a.max(b).max(0.0)
}

fn eps_delta_kinks(eps: f64, delta: f64) -> [f64; 2] {
    [(1.0 - delta) / (1.0 + eps.exp()), 1.0 - delta]
}

fn laplace_value(mu: f64, alpha: f64) -> f64 {
    let left = (-mu).exp() / 2.0;
    if alpha < left {
        1.0 - mu.exp() * alpha
    } else if alpha <= 0.5 {
        (-mu).exp() / (4.0 * alpha)
    } else {
        (-mu).exp() * (1.0 - alpha)
    }
}

fn laplace_slope(mu: f64, alpha: f64) -> f64 {
    let left = (-mu).exp() / 2.0;
    if alpha < left {
        -mu.exp()
    } else if alpha < 0.5 {
        -(-mu).exp() / (4.0 * alpha * alpha)
    } else {
        -(-mu).exp()
    }
}

/// `inf{t ∈ [0, hi] : f(t) ≤ level}` for a non-increasing `f`.
fn generalized_inverse(f: &TradeoffCurve, level: f64, hi: f64) -> f64 {
    if f.value(0.0) <= level {
        return 0.0;
    }
    bisect_predicate(|t| f.value(t) <= level, 0.0, hi, INVERSE_TOL)
}

impl TradeoffCurve {
    /// `f(α)`; errors when `α ∉ [0, 1]`.
    pub fn eval(&self, alpha: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&alpha) {
            return domain(format!("alpha = {alpha} is not in [0, 1]"));
        }
        Ok(self.value(alpha))
    }

    /// `f(α)` for `α` already known to lie in `[0, 1]` (clamped otherwise).
    pub fn value(&self, alpha: f64) -> f64 {
        use TradeoffCurve::*;
        let alpha = alpha.clamp(0.0, 1.0);
        let v = match self {
            Identity => 1.0 - alpha,
            Gdp { mu } => gdp_value(*mu, alpha),
            EpsDelta { eps, delta } => eps_delta_value(*eps, *delta, alpha),
            Laplace { mu } => laplace_value(*mu, alpha),
            PointMassDelta { delta } => (1.0 - delta - alpha).max(0.0),
            Location { cdf, shift } => {
                if alpha <= 0.0 {
                    1.0
                } else if alpha >= 1.0 {
                    0.0
                } else {
                    cdf.cdf(cdf.upper_quantile(alpha) - shift)
                }
            }
            Grid(g) => g.eval(alpha),
            Mixture { base, weight } => weight * base.value(alpha) + (1.0 - weight) * (1.0 - alpha),
            Inverse(base) => generalized_inverse(base, alpha, 1.0),
            Max(a, b) => a.value(alpha).max(b.value(alpha)),
            Envelope { base, x_bar, y_bar } => {
                if alpha <= *x_bar {
                    base.value(alpha)
                } else if alpha <= *y_bar {
                    x_bar + y_bar - alpha
                } else {
                    generalized_inverse(base, alpha, *x_bar)
                }
            }
            DeltaScaled { base, delta } => {
                let keep = 1.0 - delta;
                if alpha >= keep || keep <= 0.0 {
                    0.0
                } else {
                    keep * base.value(alpha / keep)
                }
            }
            GdpLowerBracket { mu, gamma } => (gdp_value(*mu, alpha + gamma) - gamma).max(0.0),
        };
        v.clamp(0.0, 1.0)
    }

    /// Right derivative `f'(α+)` (left derivative at `α = 1`). Always `≤ 0`.
    pub fn slope(&self, alpha: f64) -> f64 {
        use TradeoffCurve::*;
        let alpha = alpha.clamp(0.0, 1.0);
        match self {
            Identity => -1.0,
            Gdp { mu } => gdp_slope(*mu, alpha),
            EpsDelta { eps, delta } => {
                let [k1, k2] = eps_delta_kinks(*eps, *delta);
                if alpha < k1 {
                    -eps.exp()
                } else if alpha < k2 || (alpha >= 1.0 && *delta == 0.0) {
                    -(-eps).exp()
                } else {
                    0.0
                }
            }
            Laplace { mu } => laplace_slope(*mu, alpha),
            PointMassDelta { delta } => {
                if alpha < 1.0 - delta || (alpha >= 1.0 && *delta == 0.0) {
                    -1.0
                } else {
                    0.0
                }
            }
            Location { cdf, shift } => {
                if alpha <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                if alpha >= 1.0 {
                    return 0.0;
                }
                let u = cdf.upper_quantile(alpha);
                let den = cdf.pdf(u);
                if den <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                -cdf.pdf(u - shift) / den
            }
            Grid(g) => g.slope(alpha),
            Mixture { base, weight } => weight * base.slope(alpha) - (1.0 - weight),
            Inverse(base) => {
                let t = generalized_inverse(base, alpha, 1.0);
                inverse_slope(base.slope(t))
            }
            Max(a, b) => {
                let (va, vb) = (a.value(alpha), b.value(alpha));
                if va > vb {
                    a.slope(alpha)
                } else if vb > va {
                    b.slope(alpha)
                } else {
                    a.slope(alpha).max(b.slope(alpha))
                }
            }
            Envelope { base, x_bar, y_bar } => {
                if alpha < *x_bar {
                    base.slope(alpha)
                } else if alpha < *y_bar {
                    -1.0
                } else {
                    let t = generalized_inverse(base, alpha, *x_bar);
                    inverse_slope(base.slope(t))
                }
            }
            DeltaScaled { base, delta } => {
                let keep = 1.0 - delta;
                if alpha >= keep || keep <= 0.0 {
                    0.0
                } else {
                    base.slope(alpha / keep)
                }
            }
            GdpLowerBracket { mu, gamma } => {
                if self.value(alpha) <= 0.0 || alpha + gamma >= 1.0 {
                    0.0
                } else {
                    gdp_slope(*mu, alpha + gamma)
                }
            }
        }
    }

    /// `f(0)`; below 1 exactly when the curve carries a `δ`-like atom.
    pub fn at_zero(&self) -> f64 {
        self.value(0.0)
    }

    /// `z_f = inf{α : f(α) = 0}`.
    pub fn first_zero(&self) -> f64 {
        use TradeoffCurve::*;
        match self {
            Identity | Gdp { .. } | Laplace { .. } => 1.0,
            EpsDelta { delta, .. } | PointMassDelta { delta } => 1.0 - delta,
            Grid(g) => g.first_zero(),
            Mixture { base, weight } => {
                if *weight < 1.0 {
                    1.0
                } else {
                    base.first_zero()
                }
            }
            Inverse(base) => base.at_zero(),
            Max(a, b) => a.first_zero().max(b.first_zero()),
            DeltaScaled { base, delta } => (1.0 - delta) * base.first_zero(),
            GdpLowerBracket { mu, gamma } => {
                if *gamma <= 0.0 {
                    1.0
                } else {
                    (gdp_value(*mu, *gamma) - gamma).max(0.0)
                }
            }
            Location { .. } | Envelope { .. } => {
                if self.value(1.0 - 1e-15) > 0.0 {
                    1.0
                } else {
                    bisect_predicate(|x| self.value(x) <= 0.0, 0.0, 1.0, INVERSE_TOL)
                }
            }
        }
    }

    /// Points in `(0, 1)` where the curve is known to be non-smooth.
    pub fn kinks(&self) -> Vec<f64> {
        use TradeoffCurve::*;
        let mut out = match self {
            EpsDelta { eps, delta } => eps_delta_kinks(*eps, *delta).to_vec(),
            Laplace { mu } => vec![(-mu).exp() / 2.0, 0.5],
            PointMassDelta { delta } => vec![1.0 - delta],
            Grid(g) => g.alpha().to_vec(),
            Mixture { base, .. } => base.kinks(),
            Inverse(base) => base.kinks().iter().map(|&k| base.value(k)).collect(),
            Max(a, b) => {
                let mut k = a.kinks();
                k.extend(b.kinks());
                k
            }
            Envelope { base, x_bar, y_bar } => {
                let mut k: Vec<f64> = base.kinks().into_iter().filter(|k| k < x_bar).collect();
                let mirrored: Vec<f64> = k.iter().map(|&x| base.value(x)).collect();
                k.extend(mirrored);
                k.push(*x_bar);
                k.push(*y_bar);
                k
            }
            DeltaScaled { base, delta } => {
                let keep = 1.0 - delta;
                let mut k: Vec<f64> = base.kinks().iter().map(|x| x * keep).collect();
                k.push(keep);
                k
            }
            GdpLowerBracket { .. } => vec![self.first_zero()],
            Identity | Gdp { .. } | Location { .. } => Vec::new(),
        };
        out.retain(|x| *x > 0.0 && *x < 1.0);
        out
    }

    /// True when the curve is built only from linear pieces, so sampling at
    /// its kinks reproduces it exactly.
    pub fn is_piecewise_linear(&self) -> bool {
        use TradeoffCurve::*;
        match self {
            Identity | EpsDelta { .. } | PointMassDelta { .. } | Grid(_) => true,
            Mixture { base, .. } | Inverse(base) | DeltaScaled { base, .. } | Envelope { base, .. } => {
                base.is_piecewise_linear()
            }
            Max(a, b) => a.is_piecewise_linear() && b.is_piecewise_linear(),
            Gdp { mu } | Laplace { mu } => *mu == 0.0,
            Location { shift, .. } => *shift == 0.0,
            GdpLowerBracket { mu, .. } => *mu == 0.0,
        }
    }

    /// Sample abscissae: a uniform grid, geometric refinement towards both
    /// ends, and the known kinks.
    pub fn sample_alphas(&self, size: usize) -> Vec<f64> {
        let size = size.max(2);
        let mut xs: Vec<f64> = (0..size).map(|i| i as f64 / (size - 1) as f64).collect();
        if !self.is_piecewise_linear() {
            for k in 0..=60 {
                let t = 10f64.powf(-2.0 - 0.25 * k as f64);
                xs.push(t);
                xs.push(1.0 - t);
            }
        }
        xs.extend(self.kinks());
        xs.retain(|x| (0.0..=1.0).contains(x));
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs
    }

    /// Piecewise-linear version of the curve. Exact for piecewise-linear
    /// inputs. Smooth curves start from [`Self::sample_alphas`] and every
    /// panel is bisected until its chord is within [`CHORD_TOL`] of the curve.
    pub fn to_grid(&self, size: usize) -> GridCurve {
        if let TradeoffCurve::Grid(g) = self {
            return g.clone();
        }
        let xs = self.sample_alphas(size);
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(2 * xs.len());
        let mut stack: Vec<((f64, f64), (f64, f64))> = Vec::new();
        let mut prev: Option<(f64, f64)> = None;
        for x in xs {
            let cur = (x, self.value(x));
            if let Some(p) = prev {
                stack.push((p, cur));
                while let Some((a, b)) = stack.pop() {
                    let mid = 0.5 * (a.0 + b.0);
                    if pts.len() >= MAX_REFINED_POINTS || mid <= a.0 || mid >= b.0 {
                        pts.push(a);
                        continue;
                    }
                    let m = (mid, self.value(mid));
                    // for a convex curve the midpoint gap is at least half the worst gap
                    if 0.5 * (a.1 + b.1) - m.1 > 0.5 * CHORD_TOL {
                        stack.push((m, b));
                        stack.push((a, m));
                    } else {
                        pts.push(a);
                    }
                }
            }
            prev = Some(cur);
        }
        pts.extend(prev);
        GridCurve::from_points(&pts, true).expect("sampled curve is non-empty")
    }

    /// Left-continuous inverse `f⁻¹(α) = inf{t ∈ [0, 1] : f(t) ≤ α}`.
    pub fn inverse(&self) -> TradeoffCurve {
        use TradeoffCurve::*;
        match self {
            Identity | Gdp { .. } | EpsDelta { .. } | Laplace { .. } | PointMassDelta { .. } => self.clone(),
            Envelope { .. } | GdpLowerBracket { .. } => self.clone(),
            Location { cdf, .. } if cdf.is_symmetric() => self.clone(),
            Grid(g) => Grid(g.inverse()),
            Inverse(base) => (**base).clone(),
            Max(a, b) => Max(Arc::new(a.inverse()), Arc::new(b.inverse())),
            DeltaScaled { base, delta } => DeltaScaled {
                base: Arc::new(base.inverse()),
                delta: *delta,
            },
            Location { .. } | Mixture { .. } => Inverse(Arc::new(self.clone())),
        }
    }

    /// Whether `f = f⁻¹`, structurally where possible and numerically otherwise.
    pub fn is_symmetric(&self) -> bool {
        use TradeoffCurve::*;
        match self {
            Identity | Gdp { .. } | EpsDelta { .. } | Laplace { .. } | PointMassDelta { .. } => true,
            Envelope { .. } | GdpLowerBracket { .. } => true,
            Location { cdf, shift } if cdf.is_symmetric() || *shift == 0.0 => true,
            DeltaScaled { base, .. } | Inverse(base) => base.is_symmetric(),
            Mixture { base, weight } if *weight == 0.0 || matches!(**base, Identity) => true,
            Grid(g) => g.sup_distance(&g.inverse()) <= SYMMETRY_TOL,
            _ => {
                let inv = self.inverse();
                (0..=256).all(|k| {
                    let x = k as f64 / 256.0;
                    (self.value(x) - inv.value(x)).abs() <= SYMMETRY_TOL
                })
            }
        }
    }

    /// `max{f, f⁻¹}`, the smallest symmetric curve above `f`.
    pub fn symmetrize(&self) -> TradeoffCurve {
        if self.is_symmetric() {
            return self.clone();
        }
        match self {
            TradeoffCurve::Grid(g) => TradeoffCurve::Grid(g.pointwise_max(&g.inverse())),
            _ => TradeoffCurve::Max(Arc::new(self.clone()), Arc::new(self.inverse())),
        }
    }

    /// Convex conjugate `f*(y) = sup_{x ∈ [0,1]} (y·x − f(x))`.
    pub fn conjugate(&self, y: f64) -> f64 {
        use TradeoffCurve::*;
        match self {
            Grid(g) => g.points().map(|(a, b)| y * a - b).fold(f64::NEG_INFINITY, f64::max),
            Gdp { mu } if *mu > 0.0 => {
                if y >= 0.0 {
                    return y;
                }
                // stationary point: G_μ'(x) = y
                let t = ((-y).ln() + 0.5 * mu * mu) / mu;
                let x = std_normal_cdf(-t);
                let v = y * x - std_normal_cdf(t - mu);
                v.max(-1.0).max(y)
            }
            _ if self.is_piecewise_linear() => self.to_grid(2).points().map(|(a, b)| y * a - b).fold(f64::NEG_INFINITY, f64::max),
            _ => {
                // y·x − f(x) is concave; its maximizer is where f' crosses y
                let x = bisect_predicate(|x| self.slope(x) >= y, 0.0, 1.0, 1e-15);
                let h = |x: f64| y * x - self.value(x);
                h(x).max(h(0.0)).max(h(1.0))
            }
        }
    }

    /// Unique `x*` with `f(x*) = x*`.
    pub fn fixed_point(&self) -> f64 {
        match self {
            TradeoffCurve::Identity => 0.5,
            TradeoffCurve::Gdp { mu } => std_normal_cdf(-mu / 2.0),
            TradeoffCurve::EpsDelta { eps, delta } => (1.0 - delta) / (1.0 + eps.exp()),
            TradeoffCurve::Grid(g) => g.fixed_point(),
            _ => {
                // f(x) − x is strictly decreasing
                let mut lo = 0.0;
                let mut hi = 1.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if hi - lo <= 1e-12 * 0.5 || mid <= lo || mid >= hi {
                        break;
                    }
                    if self.value(mid) > mid {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }

    /// Checks the trade-off shape constraints on a uniform grid: values in
    /// `[0, 1]`, non-increasing, midpoint convexity, and `f(α) ≤ 1 − α`.
    /// Reports the worst witness for each failed property.
    pub fn validate(&self, grid_size: usize) -> ValidationReport {
        const TOL: f64 = 1e-9;
        let n = grid_size.max(3);
        let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let vs: Vec<f64> = xs.iter().map(|&x| self.value_unclamped(x)).collect();
        let mut worst: Vec<(&str, f64, f64)> = Vec::new();
        let mut note = |name: &'static str, x: f64, mag: f64| {
            if mag > TOL {
                match worst.iter_mut().find(|w| w.0 == name) {
                    Some(w) if mag > w.2 => *w = (name, x, mag),
                    Some(_) => {}
                    None => worst.push((name, x, mag)),
                }
            }
        };
        for i in 0..n {
            let v = vs[i];
            if v.is_nan() {
                note("finite", xs[i], f64::INFINITY);
                continue;
            }
            note("range", xs[i], (v - 1.0).max(-v));
            note("bound", xs[i], v - (1.0 - xs[i]));
            if i + 1 < n {
                note("monotone", xs[i + 1], vs[i + 1] - v);
            }
            if i > 0 && i + 1 < n {
                note("convexity", xs[i], v - 0.5 * (vs[i - 1] + vs[i + 1]));
            }
        }
        if let TradeoffCurve::Grid(g) = self {
            let a = g.alpha();
            if a.first() != Some(&0.0) {
                note("grid_start", a.first().copied().unwrap_or(f64::NAN), 1.0);
            }
            if a.last() != Some(&1.0) {
                note("grid_end", a.last().copied().unwrap_or(f64::NAN), 1.0);
            }
            for w in a.windows(2) {
                if !(w[0] < w[1]) {
                    note("grid_order", w[1], 1.0);
                }
            }
            let slopes: Vec<f64> = g.segments().map(|(_, s)| s).collect();
            for (i, s) in slopes.windows(2).enumerate() {
                note("convexity", a[i + 1], (s[0] - s[1]) * (a[i + 2] - a[i]).min(1.0));
            }
            for (x, b) in g.points() {
                note("bound", x, b - (1.0 - x));
            }
        }
        ValidationReport::from_violations(
            worst
                .into_iter()
                .map(|(p, w, m)| Violation {
                    property: p.to_string(),
                    witness: w,
                    magnitude: m,
                })
                .collect(),
        )
    }

    /// Evaluation without the final clamp to `[0, 1]`, so validation sees
    /// out-of-range grid data.
    fn value_unclamped(&self, alpha: f64) -> f64 {
        match self {
            TradeoffCurve::Grid(g) => g.eval(alpha),
            _ => self.value(alpha),
        }
    }

    /// `sup_α |f(α) − g(α)|`; exact for two grids, otherwise sampled at
    /// `size` uniform points plus both curves' kinks.
    pub fn sup_distance(&self, other: &TradeoffCurve, size: usize) -> f64 {
        if let (TradeoffCurve::Grid(a), TradeoffCurve::Grid(b)) = (self, other) {
            return a.sup_distance(b);
        }
        let mut xs: Vec<f64> = (0..size.max(2)).map(|i| i as f64 / (size.max(2) - 1) as f64).collect();
        xs.extend(self.kinks());
        xs.extend(other.kinks());
        xs.iter().map(|&x| (self.value(x) - other.value(x)).abs()).fold(0.0, f64::max)
    }

    /// Pointwise `f ≥ g − tol` on `size` uniform points plus kinks.
    pub fn dominates(&self, other: &TradeoffCurve, size: usize, tol: f64) -> bool {
        let mut xs: Vec<f64> = (0..size.max(2)).map(|i| i as f64 / (size.max(2) - 1) as f64).collect();
        xs.extend(self.kinks());
        xs.extend(other.kinks());
        xs.iter().all(|&x| self.value(x) >= other.value(x) - tol)
    }
}

fn inverse_slope(s: f64) -> f64 {
    if s == 0.0 {
        f64::NEG_INFINITY
    } else if s.is_infinite() {
        0.0
    } else {
        1.0 / s
    }
}

/// Builds a canonical grid curve; see [`GridCurve::from_points`].
pub fn from_grid(points: &[(f64, f64)], enforce: bool) -> Result<TradeoffCurve> {
    GridCurve::from_points(points, enforce).map(TradeoffCurve::Grid)
}
