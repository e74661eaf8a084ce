//! Scalar special functions and the small set of numerical routines the rest
//! of the crate is built on: the standard normal CDF and quantile, adaptive
//! Gauss-Kronrod quadrature, bisection on monotone functions, and the lower
//! convex hull of a polyline.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc_inv;

use crate::error::{contract, domain, FdpError, Result};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_7;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Convergence targets shared by the iterative routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_iter: 200,
        }
    }
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iter: usize) -> Result<Self> {
        let tol = Self {
            abs_tol,
            rel_tol,
            max_iter,
        };
        tol.check()?;
        Ok(tol)
    }

    pub fn absolute(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol: 0.0,
            ..Self::default()
        }
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn check(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol >= 0.0) || self.max_iter < 1 {
            return domain(format!("invalid tolerance {self:?}"));
        }
        Ok(())
    }
}

/// Standard normal CDF, computed from the complementary error function so
/// that both tails keep full relative precision.
pub fn std_normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    0.5 * libm::erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

pub fn std_normal_pdf(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// `ln Φ(x)`, accurate far into the lower tail where `Φ` underflows.
pub fn log_std_normal_cdf(x: f64) -> f64 {
    if x > -30.0 {
        return std_normal_cdf(x).ln();
    }
    if x == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    // Mills-ratio asymptotic series: Φ(x) = φ(x)/|x| * (1 - 1/x² + 3/x⁴ - 15/x⁶ + ...)
    let z = 1.0 / (x * x);
    let series = 1.0 - z * (1.0 - 3.0 * z * (1.0 - 5.0 * z * (1.0 - 7.0 * z)));
    -0.5 * x * x - LN_SQRT_2PI - (-x).ln() + series.ln()
}

/// Inverse of [`std_normal_cdf`]. `p = 0` and `p = 1` map to `∓∞`.
pub fn std_normal_quantile(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return domain(format!("quantile argument {p} is not in [0, 1]"));
    }
    Ok(quantile_unchecked(p))
}

pub(crate) fn quantile_unchecked(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    if p > 0.5 {
        return -quantile_unchecked(1.0 - p);
    }
    let mut x = -std::f64::consts::SQRT_2 * erfc_inv(2.0 * p);
    // one Halley step against the CDF
    let dens = std_normal_pdf(x);
    if dens > 0.0 && x.is_finite() {
        let e = (std_normal_cdf(x) - p) / dens;
        x -= e / (1.0 + 0.5 * x * e);
    }
    x
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * GK_WEIGHTS[7];
    let mut gauss = fc * GAUSS_WEIGHTS[3];
    for j in 0..7 {
        let dx = half * GK_NODES[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += GK_WEIGHTS[j] * pair;
        if j % 2 == 1 {
            gauss += GAUSS_WEIGHTS[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let mut error = ((kronrod - gauss) * half).abs();
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    Panel { a, b, value, error }
}

/// Adaptive 7/15-point Gauss-Kronrod quadrature of `integrand` over `[a, b]`.
///
/// Panels are bisected, worst error first, until the summed error estimate is
/// below `max(abs_tol, rel_tol·|I|)`. Endpoints are never evaluated, so
/// integrable endpoint singularities are fine. Running out of `max_iter`
/// subdivisions yields [`FdpError::NotConverged`] carrying the partial estimate.
pub fn integrate<F: Fn(f64) -> f64>(integrand: F, a: f64, b: f64, tol: Tolerance) -> Result<f64> {
    tol.check()?;
    if !(a.is_finite() && b.is_finite()) {
        return domain(format!("integration bounds [{a}, {b}] must be finite"));
    }
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate(integrand, b, a, tol).map(|v| -v);
    }
    let mut panels = vec![kronrod_panel(&integrand, a, b)];
    let mut splits = 0;
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if err <= tol.abs_tol.max(tol.rel_tol * total.abs()) {
            return Ok(total);
        }
        if splits >= tol.max_iter {
            return Err(FdpError::NotConverged {
                what: "integrate",
                iterations: splits,
                estimate: total,
                error: err,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        let panel = panels.swap_remove(worst);
        let mid = 0.5 * (panel.a + panel.b);
        if mid <= panel.a || mid >= panel.b {
            // cannot split below machine resolution; accept what we have
            panels.push(Panel { error: 0.0, ..panel });
            continue;
        }
        panels.push(kronrod_panel(&integrand, panel.a, mid));
        panels.push(kronrod_panel(&integrand, mid, panel.b));
        splits += 1;
    }
}

/// `∫_a^b g(x) dx` for an integrand that may be singular at `a`, via the
/// substitution `x = a + (b − a)·e^{−u}` truncated at `u = 745`.
pub(crate) fn integrate_singular_left<F: Fn(f64) -> f64>(
    g: F,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<f64> {
    let width = b - a;
    if width <= 0.0 {
        return Ok(0.0);
    }
    integrate(
        |u| {
            let s = (-u).exp();
            let v = g(a + width * s) * width * s;
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        745.0,
        tol,
    )
}

/// Finds `x ∈ [lo, hi]` with `func(x) = target` for a monotone `func`
/// (either direction). Stops once the bracket is narrower than
/// `abs_tol + rel_tol·|x|`.
pub fn bisect_monotone<F: Fn(f64) -> f64>(
    func: F,
    target: f64,
    lo: f64,
    hi: f64,
    tol: Tolerance,
) -> Result<f64> {
    tol.check()?;
    if !(lo <= hi) {
        return domain(format!("empty bracket [{lo}, {hi}]"));
    }
    let f_lo = func(lo);
    let f_hi = func(hi);
    let increasing = f_hi >= f_lo;
    let (min, max) = if increasing { (f_lo, f_hi) } else { (f_hi, f_lo) };
    if !(target >= min && target <= max) {
        return domain(format!(
            "target {target} outside [{min}, {max}] spanned by the bracket [{lo}, {hi}]"
        ));
    }
    if f_lo == target {
        return Ok(lo);
    }
    if f_hi == target {
        return Ok(hi);
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..tol.max_iter.max(64) {
        let mid = 0.5 * (a + b);
        if b - a <= tol.abs_tol + tol.rel_tol * mid.abs() || mid <= a || mid >= b {
            return Ok(mid);
        }
        let v = func(mid);
        if v == target {
            return Ok(mid);
        }
        if (v < target) == increasing {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Smallest `x ∈ [lo, hi]` with `pred(x)` true, for a predicate that is
/// false on a prefix of the interval and true afterwards.
pub(crate) fn bisect_predicate<P: Fn(f64) -> bool>(pred: P, lo: f64, hi: f64, abs_tol: f64) -> f64 {
    if pred(lo) {
        return lo;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if b - a <= abs_tol || mid <= a || mid >= b {
            break;
        }
        if pred(mid) {
            b = mid;
        } else {
            a = mid;
        }
    }
    b
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Vertices of the lower convex envelope of a polyline whose x-coordinates
/// are strictly increasing. Collinear interior points are dropped.
pub fn lower_convex_hull(points: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    if points.len() < 2 {
        return contract("lower_convex_hull needs at least two points");
    }
    if let Some(w) = points.windows(2).find(|w| !(w[0].0 < w[1].0)) {
        return contract(format!(
            "x-coordinates must be strictly increasing (found {} then {})",
            w[0].0, w[1].0
        ));
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(points.len());
    for &p in points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    Ok(hull)
}
