//! The alternative moving frame {N, C, W}: scalar curvatures f and g, the
//! Darboux field D = gN + fW, the fixed-axis formula for C-slant helices,
//! and least-squares fixed-axis estimation for sampled direction fields.

use nalgebra::Vector3;

use crate::error::{HelixError, Result};
use crate::frenet::FrenetApparatus;
use crate::num::{
    derivative_vec, smooth_derivative, smooth_derivative_vec, smoothing_half_window, STENCIL_WIDTH,
};

/// Floor on ‖N′‖ relative to its maximum; below it the direction C is
/// numerically undefined and the sample is dropped.
pub const F_MIN_FRACTION: f64 = 1e-8;

/// Per-sample alternative-frame data on a uniform grid.
#[derive(Debug, Clone)]
pub struct AltFrameData {
    pub s: Vec<f64>,
    pub n: Vec<Vector3<f64>>,
    pub c: Vec<Vector3<f64>>,
    pub w_unit: Vec<Vector3<f64>>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
    pub sigma: Vec<f64>,
    /// Darboux field D = gN + fW.
    pub d: Vec<Vector3<f64>>,
    pub coverage: f64,
}

impl AltFrameData {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn step(&self) -> f64 {
        (self.s[self.s.len() - 1] - self.s[0]) / (self.s.len() - 1) as f64
    }

    pub fn fg(&self) -> FgSamples {
        FgSamples {
            s: self.s.clone(),
            f: self.f.clone(),
            g: self.g.clone(),
        }
    }
}

/// The scalar part (f, g) of alternative-frame data, either extracted from a
/// curve or evaluated analytically from a profile family.
#[derive(Debug, Clone)]
pub struct FgSamples {
    pub s: Vec<f64>,
    pub f: Vec<f64>,
    pub g: Vec<f64>,
}

impl FgSamples {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn step(&self) -> f64 {
        (self.s[self.s.len() - 1] - self.s[0]) / (self.s.len() - 1) as f64
    }

    pub fn sigma(&self) -> Vec<f64> {
        self.f.iter().zip(&self.g).map(|(f, g)| g / f).collect()
    }
}

/// (f, g) from tabulated (κ, τ) on a uniform grid: f = √(κ²+τ²), g = σf.
pub fn fg_from_intrinsics(s: &[f64], kappa: &[f64], tau: &[f64]) -> Result<FgSamples> {
    let sigma = crate::frenet::sigma_from_intrinsics(s, kappa, tau)?;
    let f: Vec<f64> = kappa
        .iter()
        .zip(tau)
        .map(|(k, t)| (k * k + t * t).sqrt())
        .collect();
    let g: Vec<f64> = sigma.iter().zip(&f).map(|(si, fi)| si * fi).collect();
    Ok(FgSamples {
        s: s.to_vec(),
        f,
        g,
    })
}

/// A fixed-direction estimate for a sampled unit-vector field.
#[derive(Debug, Clone)]
pub struct AxisEstimate {
    pub u: Vector3<f64>,
    /// Mean of ⟨field_i, u⟩ (the cosine of the cone angle when one exists).
    pub cos_angle_mean: f64,
    /// Standard deviation of ⟨field_i, u⟩.
    pub residual: f64,
}

/// Build the alternative frame from a Frenet apparatus.
///
/// C = N′/‖N′‖, W = N × C, f = ‖N′‖ (= κ√(1+H²)), g = σf. Plane-curve
/// stretches (τ = 0) are fine: C = −T and g = 0 there. Only samples where
/// ‖N′‖ collapses are dropped.
pub fn alt_frame_from_frenet(app: &FrenetApparatus) -> Result<AltFrameData> {
    if app.len() < STENCIL_WIDTH {
        return Err(HelixError::InsufficientData(
            "alternative frame needs at least a stencil width of samples".into(),
        ));
    }
    let h = app.step();
    let np = derivative_vec(&app.n, h)?;
    let f_all: Vec<f64> = np.iter().map(|v| v.norm()).collect();
    let f_max = f_all.iter().cloned().fold(0.0, f64::max);
    let f_min = F_MIN_FRACTION * f_max;

    // Keep the largest contiguous run to preserve grid uniformity.
    let (lo, hi) = longest_true_run(&f_all.iter().map(|&f| f >= f_min && f > 0.0).collect::<Vec<_>>())
        .ok_or_else(|| HelixError::DegenerateCurve {
            reason: "N direction is constant; the alternative frame is undefined".into(),
            kappa_max: f_max,
        })?;
    if hi - lo < STENCIL_WIDTH {
        return Err(HelixError::InsufficientData(
            "too few samples with usable N′ for the alternative frame".into(),
        ));
    }
    // Near the grid ends the derivative windows sit off-centre, which
    // amplifies round-off noise severalfold; drop one smoothing half-window
    // per end when there is room so every retained sample is centred-quality.
    let m_sigma = smoothing_half_window(app.len(), h);
    let trim = m_sigma.max(2);
    let (lo, hi) = if hi - lo > STENCIL_WIDTH + 2 * trim {
        (lo + trim, hi - trim)
    } else if hi - lo > STENCIL_WIDTH + 4 {
        (lo + 2, hi - 2)
    } else {
        (lo, hi)
    };

    // σ = κ²/(κ²+τ²)^{3/2}·(τ/κ)′ with a smoothed derivative: τ/κ already sits
    // three difference levels above the sampled positions, so a plain stencil
    // would amplify its round-off noise past the usable range.
    let hq: Vec<f64> = app.kappa.iter().zip(&app.tau).map(|(k, t)| t / k).collect();
    let hp = smooth_derivative(&hq, h, m_sigma)?;
    let sigma_all: Vec<f64> = (0..app.len())
        .map(|i| {
            let k = app.kappa[i];
            let t = app.tau[i];
            k * k / (k * k + t * t).powf(1.5) * hp[i]
        })
        .collect();
    let coverage = app.coverage * (hi - lo) as f64 / app.len() as f64;

    let s = app.s[lo..hi].to_vec();
    let n = app.n[lo..hi].to_vec();
    let f: Vec<f64> = f_all[lo..hi].to_vec();
    let c: Vec<Vector3<f64>> = np[lo..hi].iter().zip(&f).map(|(v, fi)| v / *fi).collect();
    let w_unit: Vec<Vector3<f64>> = n.iter().zip(&c).map(|(ni, ci)| ni.cross(ci)).collect();
    let sigma: Vec<f64> = sigma_all[lo..hi].to_vec();
    let g: Vec<f64> = sigma.iter().zip(&f).map(|(si, fi)| si * fi).collect();
    let d: Vec<Vector3<f64>> = g
        .iter()
        .zip(&f)
        .zip(n.iter().zip(&w_unit))
        .map(|((gi, fi), (ni, wi))| *gi * ni + *fi * wi)
        .collect();

    Ok(AltFrameData {
        s,
        n,
        c,
        w_unit,
        f,
        g,
        sigma,
        d,
        coverage,
    })
}

fn longest_true_run(flags: &[bool]) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for (i, &f) in flags.iter().enumerate() {
        if f {
            start.get_or_insert(i);
        } else if let Some(s0) = start.take() {
            if best.map_or(true, |(a, b)| i - s0 > b - a) {
                best = Some((s0, i));
            }
        }
    }
    if let Some(s0) = start {
        if best.map_or(true, |(a, b)| flags.len() - s0 > b - a) {
            best = Some((s0, flags.len()));
        }
    }
    best
}

/// Residuals of the frame ODE N′ = fC, C′ = −fN + gW, W′ = −gC.
#[derive(Debug, Clone)]
pub struct AltOdeResiduals {
    pub n_eq_max: f64,
    pub n_eq_mean: f64,
    pub c_eq_max: f64,
    pub c_eq_mean: f64,
    pub w_eq_max: f64,
    pub w_eq_mean: f64,
}

impl AltOdeResiduals {
    pub fn max(&self) -> f64 {
        self.n_eq_max.max(self.c_eq_max).max(self.w_eq_max)
    }
}

/// Check the alternative-frame ODE by numerical differentiation of the
/// sampled frame fields.
pub fn verify_alt_ode(data: &AltFrameData) -> Result<AltOdeResiduals> {
    let h = data.step();
    // The frame fields are bounded with bounded derivatives, so a wide
    // smoothing window suppresses their inherited noise without bias.
    let m = frame_half_window(data.len(), h);
    let np = smooth_derivative_vec(&data.n, h, m)?;
    let cp = smooth_derivative_vec(&data.c, h, m)?;
    let wp = smooth_derivative_vec(&data.w_unit, h, m)?;
    // The first and last half-window use off-centre fits with severalfold
    // noise amplification; judge the ODE on the centred samples.
    let skip = if data.len() > 4 * m { m } else { 0 };
    let mut stats = [(0.0_f64, 0.0_f64); 3];
    for i in skip..data.len() - skip {
        let r = [
            (np[i] - data.f[i] * data.c[i]).norm(),
            (cp[i] + data.f[i] * data.n[i] - data.g[i] * data.w_unit[i]).norm(),
            (wp[i] + data.g[i] * data.c[i]).norm(),
        ];
        for (j, rj) in r.iter().enumerate() {
            stats[j].0 = stats[j].0.max(*rj);
            stats[j].1 += rj;
        }
    }
    let n = (data.len() - 2 * skip) as f64;
    Ok(AltOdeResiduals {
        n_eq_max: stats[0].0,
        n_eq_mean: stats[0].1 / n,
        c_eq_max: stats[1].0,
        c_eq_mean: stats[1].1 / n,
        w_eq_max: stats[2].0,
        w_eq_mean: stats[2].1 / n,
    })
}

/// Half-window for differentiating the sampled frame fields themselves
/// (about 0.04 units of arc length — they are bounded with bounded
/// derivatives, so a wide window is safe).
fn frame_half_window(n: usize, h: f64) -> usize {
    let cap = ((n.saturating_sub(1)) / 4).max(3);
    (((0.04 / h).round() as usize).max(3)).min(cap)
}

/// The Darboux twist f·g′ − g·f′ = f²·(g/f)′ on a uniform grid.
///
/// This is the numerically preferred form of f²σ′: it never differentiates
/// the ratio g/f, which blows up where f → small. `half_window` is the
/// smoothing width passed to [`smooth_derivative`]; use 2 for clean
/// analytically evaluated profiles.
pub fn darboux_twist(fg: &FgSamples, half_window: usize) -> Result<Vec<f64>> {
    let h = fg.step();
    let fp = smooth_derivative(&fg.f, h, half_window)?;
    let gp = smooth_derivative(&fg.g, h, half_window)?;
    Ok((0..fg.len())
        .map(|i| fg.f[i] * gp[i] - fg.g[i] * fp[i])
        .collect())
}

/// Scale-aware zero test for the Darboux twist f²(g/f)′, the degeneracy
/// boundary between slant and C-slant behavior.
pub fn twist_degenerate(twist: f64, f: f64, g: f64) -> bool {
    twist.abs() <= 1e-10 * (f * f + g * g).powf(1.5)
}

/// Sample standard deviation against a tolerance band `tol·(|mean| + 1)`;
/// a σ sequence that passes is a slant helix to working precision.
pub(crate) fn sigma_nearly_constant(sigma: &[f64], tol: f64) -> bool {
    let n = sigma.len() as f64;
    let mean = sigma.iter().sum::<f64>() / n;
    let std = (sigma.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt();
    std <= tol * (mean.abs() + 1.0)
}

/// The per-sample axis of a C-slant helix:
///
/// u = [ g(f²+g²)/(f²(g/f)′) · N + C + (f²+g²)/(f(g/f)′) · W ] · cos φ
///
/// normalized to unit length after evaluation. For a true C-slant helix all
/// returned vectors coincide. Errs with [`HelixError::DegenerateAxis`] when
/// σ is constant (slant helix: the formula divides by σ′ ≈ 0).
pub fn c_slant_axis(data: &AltFrameData, phi: f64) -> Result<Vec<Vector3<f64>>> {
    if sigma_nearly_constant(&data.sigma, 1e-3) {
        return Err(HelixError::DegenerateAxis(
            "σ is constant (slant helix): the C-slant axis formula is undefined".into(),
        ));
    }
    let m = smoothing_half_window(data.len(), data.step());
    let twist = darboux_twist(&data.fg(), m)?;
    let cos_phi = phi.cos();
    let mut out = Vec::with_capacity(data.len());
    for i in 0..data.len() {
        if twist_degenerate(twist[i], data.f[i], data.g[i]) {
            return Err(HelixError::DegenerateAxis(format!(
                "(g/f)' vanishes at s = {} (slant helix there)",
                data.s[i]
            )));
        }
        let f = data.f[i];
        let g = data.g[i];
        let fg2 = f * f + g * g;
        let u_raw = (g * fg2 / twist[i]) * data.n[i]
            + data.c[i]
            + (f * fg2 / twist[i]) * data.w_unit[i];
        let u = u_raw * cos_phi;
        let norm = u.norm();
        if norm == 0.0 {
            return Err(HelixError::DegenerateAxis(format!(
                "axis formula collapsed at s = {}",
                data.s[i]
            )));
        }
        out.push(u / norm);
    }
    Ok(out)
}

/// Fit the direction minimizing the variance of ⟨field_i, u⟩ over unit u:
/// the smallest-eigenvalue eigenvector of the sample covariance, with the
/// mean direction as a fallback for nearly constant fields.
pub fn estimate_fixed_axis(field: &[Vector3<f64>]) -> Result<AxisEstimate> {
    if field.len() < 3 {
        return Err(HelixError::InsufficientData(
            "axis estimation needs at least 3 samples".into(),
        ));
    }
    let n = field.len() as f64;
    let mean: Vector3<f64> = field.iter().sum::<Vector3<f64>>() / n;
    let mut cov = nalgebra::Matrix3::<f64>::zeros();
    for v in field {
        let d = v - mean;
        cov += d * d.transpose();
    }
    cov /= n;

    let spread = cov.trace();
    let u = if spread < 1e-20 {
        // Constant field: the axis is the field itself.
        mean.normalize()
    } else {
        let eig = nalgebra::SymmetricEigen::new(cov);
        let mut idx = 0;
        for i in 1..3 {
            if eig.eigenvalues[i] < eig.eigenvalues[idx] {
                idx = i;
            }
        }
        let u: Vector3<f64> = eig.eigenvectors.column(idx).into();
        u.normalize()
    };
    // Orient so the mean inner product is non-negative.
    let dots: Vec<f64> = field.iter().map(|v| v.dot(&u)).collect();
    let mean_dot = dots.iter().sum::<f64>() / n;
    let (u, mean_dot) = if mean_dot < 0.0 { (-u, -mean_dot) } else { (u, mean_dot) };
    let var = field
        .iter()
        .map(|v| {
            let d = v.dot(&u) - mean_dot;
            d * d
        })
        .sum::<f64>()
        / n;
    Ok(AxisEstimate {
        u,
        cos_angle_mean: mean_dot,
        residual: var.sqrt(),
    })
}
