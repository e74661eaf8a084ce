use crate::error::{contract, Result};
use crate::numerics::lower_convex_hull;

/// A piecewise-linear trade-off curve given by its breakpoints.
///
/// Canonical grids start at `α = 0`, end at `α = 1`, have strictly increasing
/// `α`, and (when built with hull enforcement) non-decreasing slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct GridCurve {
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl GridCurve {
    /// Canonicalizes raw `(α, β)` samples: clamps to the unit square, sorts,
    /// merges duplicate `α` (keeping the smallest `β`), and adds the boundary
    /// points `(0, 1)` / `(1, 0)` when the samples do not reach the edges.
    /// With `enforce`, each `β` is also capped at `1 − α` and the lower
    /// convex hull is taken, so the result is always a valid trade-off curve.
    pub fn from_points(points: &[(f64, f64)], enforce: bool) -> Result<Self> {
        if points.is_empty() {
            return contract("from_grid needs at least one point");
        }
        if let Some(p) = points.iter().find(|p| !(p.0.is_finite() && p.1.is_finite())) {
            return contract(format!("non-finite grid point {p:?}"));
        }
        let mut pts: Vec<(f64, f64)> = points
            .iter()
            .map(|&(a, b)| (a.clamp(0.0, 1.0), b.clamp(0.0, 1.0)))
            .collect();
        pts.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        pts.dedup_by(|later, earlier| later.0 == earlier.0);
        if pts[0].0 > 0.0 {
            pts.insert(0, (0.0, 1.0));
        }
        if pts[pts.len() - 1].0 < 1.0 {
            pts.push((1.0, 0.0));
        }
        if enforce {
            for p in pts.iter_mut() {
                p.1 = p.1.min(1.0 - p.0).max(0.0);
            }
            pts = lower_convex_hull(&pts)?;
        }
        let (alpha, beta) = pts.into_iter().unzip();
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.alpha.iter().copied().zip(self.beta.iter().copied())
    }

    /// Index `i` of the segment `[α_i, α_{i+1})` containing `x`
    /// (the last segment for `x = 1`).
    fn segment(&self, x: f64) -> usize {
        let n = self.alpha.len();
        if n < 2 {
            return 0;
        }
        let k = self.alpha.partition_point(|&a| a <= x);
        k.clamp(1, n - 1) - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.alpha.len();
        if n == 1 {
            return self.beta[0];
        }
        let i = self.segment(x);
        let (a0, a1) = (self.alpha[i], self.alpha[i + 1]);
        let (b0, b1) = (self.beta[i], self.beta[i + 1]);
        if x <= a0 {
            return b0;
        }
        if x >= a1 {
            return b1;
        }
        let t = (x - a0) / (a1 - a0);
        b0 + t * (b1 - b0)
    }

    /// Slope of the segment `[α_i, α_{i+1})` containing `x`.
    pub fn slope(&self, x: f64) -> f64 {
        if self.alpha.len() < 2 {
            return 0.0;
        }
        let i = self.segment(x);
        self.segment_slope(i)
    }

    pub(crate) fn segment_slope(&self, i: usize) -> f64 {
        (self.beta[i + 1] - self.beta[i]) / (self.alpha[i + 1] - self.alpha[i])
    }

    /// `(length, slope)` of every segment.
    pub fn segments(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.alpha.len().saturating_sub(1))
            .map(move |i| (self.alpha[i + 1] - self.alpha[i], self.segment_slope(i)))
    }

    pub fn at_zero(&self) -> f64 {
        self.beta[0]
    }

    /// First `α` at which the curve reaches zero.
    pub fn first_zero(&self) -> f64 {
        self.points()
            .find(|&(_, b)| b <= 0.0)
            .map(|(a, _)| a)
            .unwrap_or(1.0)
    }

    /// Exact solution of `f(x) = x` by locating the crossing segment.
    pub fn fixed_point(&self) -> f64 {
        let gap = |i: usize| self.beta[i] - self.alpha[i];
        if gap(0) <= 0.0 {
            return self.alpha[0];
        }
        for i in 0..self.len() - 1 {
            let (g0, g1) = (gap(i), gap(i + 1));
            if g1 <= 0.0 {
                let t = g0 / (g0 - g1);
                return self.alpha[i] + t * (self.alpha[i + 1] - self.alpha[i]);
            }
        }
        self.alpha[self.len() - 1]
    }

    /// Left-continuous inverse, obtained by swapping coordinates.
    pub fn inverse(&self) -> GridCurve {
        let mut swapped: Vec<(f64, f64)> = self.points().map(|(a, b)| (b, a)).collect();
        swapped.reverse();
        if swapped.last().map(|p| p.0 < 1.0).unwrap_or(true) {
            swapped.push((1.0, 0.0));
        }
        Self::from_points(&swapped, true).expect("inverse of a non-empty grid")
    }

    /// Exact pointwise maximum of two piecewise-linear curves.
    pub fn pointwise_max(&self, other: &GridCurve) -> GridCurve {
        let mut xs: Vec<f64> = self.alpha.iter().chain(other.alpha.iter()).copied().collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let mut pts = Vec::with_capacity(2 * xs.len());
        for w in xs.windows(2) {
            let (x0, x1) = (w[0], w[1]);
            let d0 = self.eval(x0) - other.eval(x0);
            let d1 = self.eval(x1) - other.eval(x1);
            pts.push((x0, self.eval(x0).max(other.eval(x0))));
            if d0 * d1 < 0.0 {
                let xc = x0 + (x1 - x0) * d0 / (d0 - d1);
                if xc > x0 && xc < x1 {
                    pts.push((xc, self.eval(xc).max(other.eval(xc))));
                }
            }
        }
        if let Some(&x) = xs.last() {
            pts.push((x, self.eval(x).max(other.eval(x))));
        }
        Self::from_points(&pts, true).expect("non-empty")
    }

    /// Exact `x ↦ self(1 − inner(x))`, the building block of group privacy.
    pub fn compose_after(&self, inner: &GridCurve, extra: &[f64]) -> GridCurve {
        let mut xs: Vec<f64> = inner.alpha.clone();
        xs.extend_from_slice(extra);
        // preimages under x ↦ 1 − inner(x) of this curve's breakpoints
        for &b in &self.alpha {
            let level = 1.0 - b;
            for i in 0..inner.len().saturating_sub(1) {
                let (y0, y1) = (inner.beta[i], inner.beta[i + 1]);
                if (y0 - level) * (y1 - level) < 0.0 {
                    let t = (y0 - level) / (y0 - y1);
                    xs.push(inner.alpha[i] + t * (inner.alpha[i + 1] - inner.alpha[i]));
                }
            }
        }
        xs.retain(|x| (0.0..=1.0).contains(x));
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let pts: Vec<(f64, f64)> = xs.iter().map(|&x| (x, self.eval(1.0 - inner.eval(x)))).collect();
        Self::from_points(&pts, true).expect("non-empty")
    }

    /// Largest absolute difference at breakpoints of either grid; exact for
    /// two piecewise-linear curves.
    pub fn sup_distance(&self, other: &GridCurve) -> f64 {
        self.alpha
            .iter()
            .chain(other.alpha.iter())
            .map(|&x| (self.eval(x) - other.eval(x)).abs())
            .fold(0.0, f64::max)
    }
}
