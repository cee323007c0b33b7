//! Shared numerical kernels: 4th-order finite differences on uniform grids,
//! cumulative Simpson quadrature, and natural cubic spline interpolation.

use nalgebra::Vector3;

use crate::error::{HelixError, Result};

/// Minimum number of samples for the 5-point stencils.
pub const STENCIL_WIDTH: usize = 5;

/// Detect a uniform grid step. Returns `None` if spacing varies by more than
/// 1e-8 relative to the mean step.
pub fn uniform_step(s: &[f64]) -> Option<f64> {
    if s.len() < 2 {
        return None;
    }
    let h = (s[s.len() - 1] - s[0]) / (s.len() - 1) as f64;
    if h <= 0.0 {
        return None;
    }
    for w in s.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-8 * h.abs() {
            return None;
        }
    }
    Some(h)
}

/// First derivative on a uniform grid, 4th order.
///
/// 5-point central stencil in the interior, one-sided 4th-order stencils at
/// the two samples nearest each boundary.
pub fn derivative(values: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = values.len();
    if n < STENCIL_WIDTH {
        return Err(HelixError::InsufficientData(format!(
            "need at least {STENCIL_WIDTH} samples for differentiation, got {n}"
        )));
    }
    let f = values;
    let d = 12.0 * h;
    let mut out = vec![0.0; n];
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / d;
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / d;
    for i in 2..n - 2 {
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / d;
    }
    out[n - 2] =
        (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / d;
    out[n - 1] =
        (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / d;
    Ok(out)
}

/// First derivative by local least-squares quartic fit (a Savitzky–Golay
/// filter) over a sliding window of `2m + 1` samples, `m = half_window`.
///
/// On a symmetric window this matches the 4th-order stencil's truncation
/// order while damping uncorrelated noise by roughly `(2/m)^{3/2}`; use it
/// whenever the data being differentiated already sits several derivative
/// levels above sampled positions. Near the ends the window is shifted, not
/// shrunk, so no sample is extrapolated. With `half_window = 2` this reduces
/// to the plain 5-point scheme of [`derivative`].
pub fn smooth_derivative(values: &[f64], h: f64, half_window: usize) -> Result<Vec<f64>> {
    let n = values.len();
    if n < STENCIL_WIDTH {
        return Err(HelixError::InsufficientData(format!(
            "need at least {STENCIL_WIDTH} samples for differentiation, got {n}"
        )));
    }
    let m = half_window.clamp(2, (n - 1) / 2);
    if m == 2 {
        return derivative(values, h);
    }
    let width = 2 * m + 1;
    // Weight vectors per window shift: shift 0 is the centred window; shifts
    // ±1..±m occur only at the ends, where the window stays full-width but
    // the evaluation point moves off centre.
    let mut weights: Vec<Option<Vec<f64>>> = vec![None; width];
    let mut out = vec![0.0; n];
    for i in 0..n {
        let w0 = i.saturating_sub(m).min(n - width);
        let shift = i as i64 - (w0 + m) as i64; // 0 in the interior
        let slot = (shift + m as i64) as usize;
        if weights[slot].is_none() {
            weights[slot] = Some(slope_weights(width, slot, m as f64));
        }
        let w = weights[slot].as_ref().unwrap();
        let mut acc = 0.0;
        for (j, wj) in w.iter().enumerate() {
            acc += wj * values[w0 + j];
        }
        out[i] = acc / (m as f64 * h);
    }
    Ok(out)
}

/// Least-squares quartic slope weights for a full window of `width` samples,
/// evaluated at sample index `at`, with abscissae scaled by `1/scale`.
fn slope_weights(width: usize, at: usize, scale: f64) -> Vec<f64> {
    use nalgebra::{SMatrix, SVector};
    let us: Vec<f64> = (0..width)
        .map(|j| (j as f64 - at as f64) / scale)
        .collect();
    let mut gram = SMatrix::<f64, 5, 5>::zeros();
    for &u in &us {
        let pow = [1.0, u, u * u, u * u * u, u * u * u * u];
        for p in 0..5 {
            for q in 0..5 {
                gram[(p, q)] += pow[p] * pow[q];
            }
        }
    }
    // Slope at u = 0 is the linear coefficient of the fitted quartic, so the
    // weight on sample j is row j of A·(AᵀA)⁻¹ applied to e₁.
    let col = gram
        .lu()
        .solve(&SVector::<f64, 5>::from_column_slice(&[
            0.0, 1.0, 0.0, 0.0, 0.0,
        ]))
        .expect("Savitzky-Golay normal equations are nonsingular for width ≥ 5");
    us.iter()
        .map(|&u| {
            let pow = [1.0, u, u * u, u * u * u, u * u * u * u];
            (0..5).map(|p| col[p] * pow[p]).sum()
        })
        .collect()
}

/// Componentwise [`smooth_derivative`] for a sequence of 3-vectors.
pub fn smooth_derivative_vec(
    points: &[Vector3<f64>],
    h: f64,
    half_window: usize,
) -> Result<Vec<Vector3<f64>>> {
    let xs = smooth_derivative(&points.iter().map(|p| p.x).collect::<Vec<_>>(), h, half_window)?;
    let ys = smooth_derivative(&points.iter().map(|p| p.y).collect::<Vec<_>>(), h, half_window)?;
    let zs = smooth_derivative(&points.iter().map(|p| p.z).collect::<Vec<_>>(), h, half_window)?;
    Ok(xs
        .into_iter()
        .zip(ys)
        .zip(zs)
        .map(|((x, y), z)| Vector3::new(x, y, z))
        .collect())
}

/// Default half-window for [`smooth_derivative`] on curve-derived data:
/// about 0.01 units of arc length, capped at a quarter of the grid.
pub fn smoothing_half_window(n: usize, h: f64) -> usize {
    let cap = ((n.saturating_sub(1)) / 4).max(3);
    (((0.01 / h).round() as usize).max(3)).min(cap)
}

/// Componentwise [`derivative`] for a sequence of 3-vectors.
pub fn derivative_vec(points: &[Vector3<f64>], h: f64) -> Result<Vec<Vector3<f64>>> {
    let xs = derivative(&points.iter().map(|p| p.x).collect::<Vec<_>>(), h)?;
    let ys = derivative(&points.iter().map(|p| p.y).collect::<Vec<_>>(), h)?;
    let zs = derivative(&points.iter().map(|p| p.z).collect::<Vec<_>>(), h)?;
    Ok(xs
        .into_iter()
        .zip(ys)
        .zip(zs)
        .map(|((x, y), z)| Vector3::new(x, y, z))
        .collect())
}

/// Cumulative integral on a uniform grid by composite Simpson.
///
/// `out[0] = 0`; odd indices use the 3-point half-panel rule so every sample
/// gets a 4th-order value.
pub fn cumulative_integral(values: &[f64], h: f64) -> Result<Vec<f64>> {
    let n = values.len();
    if n < 3 {
        return Err(HelixError::InsufficientData(format!(
            "need at least 3 samples for quadrature, got {n}"
        )));
    }
    let f = values;
    let mut out = vec![0.0; n];
    for i in 1..n {
        if i % 2 == 0 {
            out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
        } else if i + 1 < n {
            out[i] = out[i - 1] + h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
        } else {
            out[i] = out[i - 1] + h / 12.0 * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
        }
    }
    Ok(out)
}

/// Componentwise [`cumulative_integral`].
pub fn cumulative_integral_vec(points: &[Vector3<f64>], h: f64) -> Result<Vec<Vector3<f64>>> {
    let xs = cumulative_integral(&points.iter().map(|p| p.x).collect::<Vec<_>>(), h)?;
    let ys = cumulative_integral(&points.iter().map(|p| p.y).collect::<Vec<_>>(), h)?;
    let zs = cumulative_integral(&points.iter().map(|p| p.z).collect::<Vec<_>>(), h)?;
    Ok(xs
        .into_iter()
        .zip(ys)
        .zip(zs)
        .map(|((x, y), z)| Vector3::new(x, y, z))
        .collect())
}

/// Natural cubic spline through `(x_i, y_i)` with zero second derivative at
/// both ends. Knots may be non-uniform but must be strictly increasing.
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    y2: Vec<f64>,
}

impl CubicSpline {
    pub fn new(xs: &[f64], ys: &[f64]) -> Result<Self> {
        let n = xs.len();
        if n < 3 || ys.len() != n {
            return Err(HelixError::InsufficientData(
                "cubic spline needs at least 3 matched knots".into(),
            ));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(HelixError::MalformedInput(
                "spline knots must be strictly increasing".into(),
            ));
        }
        // Tridiagonal solve for the interior second derivatives.
        let mut y2 = vec![0.0; n];
        let mut u = vec![0.0; n];
        for i in 1..n - 1 {
            let sig = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
            let p = sig * y2[i - 1] + 2.0;
            y2[i] = (sig - 1.0) / p;
            let d = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
                - (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
            u[i] = (6.0 * d / (xs[i + 1] - xs[i - 1]) - sig * u[i - 1]) / p;
        }
        y2[n - 1] = 0.0;
        for i in (0..n - 1).rev() {
            y2[i] = y2[i] * y2[i + 1] + u[i];
        }
        Ok(Self {
            xs: xs.to_vec(),
            ys: ys.to_vec(),
            y2,
        })
    }

    /// Evaluate at `x`. Clamps to the knot range endpoints.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0] + self.slope_at(0) * (x - self.xs[0]);
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1] + self.slope_at(n - 1) * (x - self.xs[n - 1]);
        }
        let i = match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            j => j - 1,
        };
        let i = i.min(n - 2);
        let hstep = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / hstep;
        let b = (x - self.xs[i]) / hstep;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.y2[i] + (b * b * b - b) * self.y2[i + 1]) * hstep * hstep
                / 6.0
    }

    fn slope_at(&self, i: usize) -> f64 {
        let n = self.xs.len();
        let (lo, hi) = if i == 0 { (0, 1) } else { (n - 2, n - 1) };
        let hstep = self.xs[hi] - self.xs[lo];
        (self.ys[hi] - self.ys[lo]) / hstep
            - hstep / 6.0
                * if i == 0 {
                    2.0 * self.y2[lo] + self.y2[hi]
                } else {
                    -(self.y2[lo] + 2.0 * self.y2[hi])
                }
    }
}

/// Three natural cubic splines, one per coordinate.
pub struct Spline3 {
    x: CubicSpline,
    y: CubicSpline,
    z: CubicSpline,
}

impl Spline3 {
    pub fn new(ts: &[f64], points: &[Vector3<f64>]) -> Result<Self> {
        let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.y).collect();
        let zs: Vec<f64> = points.iter().map(|p| p.z).collect();
        Ok(Self {
            x: CubicSpline::new(ts, &xs)?,
            y: CubicSpline::new(ts, &ys)?,
            z: CubicSpline::new(ts, &zs)?,
        })
    }

    pub fn eval(&self, t: f64) -> Vector3<f64> {
        Vector3::new(self.x.eval(t), self.y.eval(t), self.z.eval(t))
    }
}

/// Uniformly spaced grid of `n` values covering `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
        .collect()
}
