//! Spherical images of T, N, B with their intrinsic data, the Sabban frame
//! and geodesic curvature of spherical curves, and the ∫Y construction that
//! produces a C-slant helix from any spherical curve.

use nalgebra::Vector3;

use crate::alt_frame::AltFrameData;
use crate::curve::CurveSamples;
use crate::error::{HelixError, Result};
use crate::frenet::FrenetApparatus;
use crate::num::{
    cumulative_integral, cumulative_integral_vec, derivative_vec, linspace, uniform_step, Spline3,
    STENCIL_WIDTH,
};

/// A curve on the unit sphere, parameterized by its own arc length.
#[derive(Debug, Clone)]
pub struct SphericalCurve {
    pub t: Vec<f64>,
    pub gamma: Vec<Vector3<f64>>,
}

impl SphericalCurve {
    pub fn new(t: Vec<f64>, gamma: Vec<Vector3<f64>>) -> Result<Self> {
        if t.len() != gamma.len() || t.len() < 3 {
            return Err(HelixError::MalformedInput(
                "spherical curve needs at least 3 matched samples".into(),
            ));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(HelixError::MalformedInput(
                "spherical-curve parameter must be strictly increasing".into(),
            ));
        }
        for (i, v) in gamma.iter().enumerate() {
            if (v.norm() - 1.0).abs() > 1e-10 {
                return Err(HelixError::MalformedInput(format!(
                    "sample {i} is off the unit sphere (‖γ‖ = {})",
                    v.norm()
                )));
            }
        }
        Ok(Self { t, gamma })
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Resample onto `n` uniform parameter values by cubic splines, then
    /// project back onto the sphere.
    pub fn reparameterize_uniform(&self, n: usize) -> Result<SphericalCurve> {
        if n < STENCIL_WIDTH {
            return Err(HelixError::InvalidArgument(format!(
                "need at least {STENCIL_WIDTH} output samples, got {n}"
            )));
        }
        let spline = Spline3::new(&self.t, &self.gamma)?;
        let t_new = linspace(self.t[0], *self.t.last().unwrap(), n);
        let gamma_new: Vec<Vector3<f64>> = t_new
            .iter()
            .map(|&t| spline.eval(t).normalize())
            .collect();
        SphericalCurve::new(t_new, gamma_new)
    }

    /// Worst deviation of ‖γ′‖ from 1 over the (uniform) grid.
    fn speed_defect(&self, h: f64) -> Result<f64> {
        let gp = derivative_vec(&self.gamma, h)?;
        Ok(gp
            .iter()
            .map(|v| (v.norm() - 1.0).abs())
            .fold(0.0, f64::max))
    }
}

/// Which spherical image an [`IndicatrixIntrinsics`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndicatrixKind {
    Tangent,
    Normal,
    Binormal,
}

/// Arc length and intrinsic curvatures of a spherical image, indexed by the
/// base curve's arc length s.
#[derive(Debug, Clone)]
pub struct IndicatrixIntrinsics {
    pub which: IndicatrixKind,
    /// Base-curve arc length of each sample.
    pub s: Vec<f64>,
    /// Arc length along the indicatrix (cumulative from the first sample).
    pub s_ind: Vec<f64>,
    pub kappa_ind: Vec<f64>,
    pub tau_ind: Vec<f64>,
}

/// The Frenet frame of an indicatrix expressed through the base frame.
#[derive(Debug, Clone)]
pub struct IndicatrixFrames {
    pub t: Vec<Vector3<f64>>,
    pub n: Vec<Vector3<f64>>,
    pub b: Vec<Vector3<f64>>,
}

/// Tangent image: γ = T, s_T = ∫κ ds, κ_T = f/κ, τ_T = g/κ.
///
/// The returned frames are 𝐓 = N, 𝐍 = (κ/f)(−T + H·B), 𝐁 = (κ/f)(H·T + B).
pub fn tangent_indicatrix(
    app: &FrenetApparatus,
    alt: &AltFrameData,
) -> Result<(SphericalCurve, IndicatrixIntrinsics, IndicatrixFrames)> {
    let (idx, h) = align(app, alt)?;
    let kappa: Vec<f64> = idx.iter().map(|&i| app.kappa[i]).collect();
    let s_ind = cumulative_integral(&kappa, h)?;
    let s: Vec<f64> = idx.iter().map(|&i| app.s[i]).collect();
    let gamma: Vec<Vector3<f64>> = idx.iter().map(|&i| app.t[i].normalize()).collect();
    let mut kappa_ind = Vec::with_capacity(idx.len());
    let mut tau_ind = Vec::with_capacity(idx.len());
    let mut frames = IndicatrixFrames {
        t: Vec::with_capacity(idx.len()),
        n: Vec::with_capacity(idx.len()),
        b: Vec::with_capacity(idx.len()),
    };
    for (j, &i) in idx.iter().enumerate() {
        let f = alt.f[j];
        let g = alt.g[j];
        let k = app.kappa[i];
        let hh = app.tau[i] / k;
        kappa_ind.push(f / k);
        tau_ind.push(g / k);
        frames.t.push(app.n[i]);
        frames.n.push(k / f * (-app.t[i] + hh * app.b[i]));
        frames.b.push(k / f * (hh * app.t[i] + app.b[i]));
    }
    let curve = SphericalCurve::new(s_ind.clone(), gamma)?;
    Ok((
        curve,
        IndicatrixIntrinsics {
            which: IndicatrixKind::Tangent,
            s,
            s_ind,
            kappa_ind,
            tau_ind,
        },
        frames,
    ))
}

/// Principal-normal image: γ = N, s_N = ∫f ds, κ_N = √(1+σ²),
/// τ_N = Γ√(1+σ²) with Γ = σ′/(f(1+σ²)^{3/2}).
pub fn normal_indicatrix(
    app: &FrenetApparatus,
    alt: &AltFrameData,
) -> Result<(SphericalCurve, IndicatrixIntrinsics)> {
    let (idx, h) = align(app, alt)?;
    let s_ind = cumulative_integral(&alt.f, h)?;
    let s: Vec<f64> = idx.iter().map(|&i| app.s[i]).collect();
    let gamma: Vec<Vector3<f64>> = alt.n.iter().map(|v| v.normalize()).collect();
    // Γ = σ′/(f(1+σ²)^{3/2}) = (fg′ − gf′)/(f²+g²)^{3/2}: the twist form stays
    // bounded where σ does not and tolerates noisy recovered profiles.
    let m = crate::num::smoothing_half_window(alt.len(), h);
    let twist = crate::alt_frame::darboux_twist(&alt.fg(), m)?;
    let mut kappa_ind = Vec::with_capacity(alt.len());
    let mut tau_ind = Vec::with_capacity(alt.len());
    for i in 0..alt.len() {
        let sg = alt.sigma[i];
        let root = (1.0 + sg * sg).sqrt();
        let fg2 = alt.f[i] * alt.f[i] + alt.g[i] * alt.g[i];
        let big_gamma = twist[i] / fg2.powf(1.5);
        kappa_ind.push(root);
        tau_ind.push(big_gamma * root);
    }
    let curve = SphericalCurve::new(s_ind.clone(), gamma)?;
    Ok((
        curve,
        IndicatrixIntrinsics {
            which: IndicatrixKind::Normal,
            s,
            s_ind,
            kappa_ind,
            tau_ind,
        },
    ))
}

/// One monotone-τ piece of the binormal image: γ = B, s_B = ∫τ ds,
/// κ_B = f/τ, τ_B = −g/τ.
pub fn binormal_indicatrix(
    app: &FrenetApparatus,
    alt: &AltFrameData,
) -> Result<Vec<(SphericalCurve, IndicatrixIntrinsics)>> {
    let (idx, h) = align(app, alt)?;
    let tau: Vec<f64> = idx.iter().map(|&i| app.tau[i]).collect();
    // Two floors: torsion that is numerical noise on the curvature scale
    // (e.g. a plane curve) must not produce pieces at all, and pieces are cut
    // 5% of max |τ| away from the zeros of τ so that κ_B = f/|τ| and its
    // derivatives stay bounded on every retained sample.
    let f_scale = alt.f.iter().cloned().fold(0.0, f64::max);
    let tau_max = tau.iter().map(|t| t.abs()).fold(0.0, f64::max);
    let tau_floor = (0.05 * tau_max).max(1e-6 * f_scale);

    let mut pieces = Vec::new();
    let mut start = None;
    let flush = |range: std::ops::Range<usize>, pieces: &mut Vec<_>| -> Result<()> {
        if range.len() < STENCIL_WIDTH {
            return Ok(());
        }
        // Parameterize by |τ| so s_B increases even on reversed pieces;
        // curvature is orientation-invariant, so take it positive too.
        let tau_abs: Vec<f64> = range.clone().map(|j| tau[j].abs()).collect();
        let s_ind = cumulative_integral(&tau_abs, h)?;
        let s: Vec<f64> = range.clone().map(|j| app.s[idx[j]]).collect();
        let gamma: Vec<Vector3<f64>> = range
            .clone()
            .map(|j| app.b[idx[j]].normalize())
            .collect();
        let kappa_ind: Vec<f64> = range.clone().map(|j| (alt.f[j] / tau[j]).abs()).collect();
        let tau_ind: Vec<f64> = range.clone().map(|j| -alt.g[j] / tau[j]).collect();
        let curve = SphericalCurve::new(s_ind.clone(), gamma)?;
        pieces.push((
            curve,
            IndicatrixIntrinsics {
                which: IndicatrixKind::Binormal,
                s,
                s_ind,
                kappa_ind,
                tau_ind,
            },
        ));
        Ok(())
    };
    let mut current_sign = 0.0;
    for (j, &tj) in tau.iter().enumerate() {
        let sign = if tj.abs() <= tau_floor { 0.0 } else { tj.signum() };
        if sign != 0.0 && (current_sign == 0.0 || sign == current_sign) {
            if start.is_none() {
                start = Some(j);
            }
            current_sign = sign;
        } else {
            if let Some(s0) = start.take() {
                flush(s0..j, &mut pieces)?;
            }
            current_sign = sign;
            if sign != 0.0 {
                start = Some(j);
            }
        }
    }
    if let Some(s0) = start {
        flush(s0..tau.len(), &mut pieces)?;
    }
    if pieces.is_empty() {
        return Err(HelixError::DegenerateCurve {
            reason: "torsion vanishes; the binormal image has no monotone pieces".into(),
            kappa_max: tau.iter().map(|t| t.abs()).fold(0.0, f64::max),
        });
    }
    Ok(pieces)
}

/// σ of an indicatrix treated as a space curve in its own right, via the
/// chain rule d/ds_ind = (ds_ind/ds)⁻¹ d/ds on the base grid:
///
/// σ_ind = κ_ind²/(κ_ind²+τ_ind²)^{3/2} · d(τ_ind/κ_ind)/ds_ind
pub fn indicatrix_sigma(intr: &IndicatrixIntrinsics) -> Result<Vec<f64>> {
    let h = uniform_step(&intr.s).ok_or_else(|| {
        HelixError::MalformedInput("indicatrix σ needs a uniform base grid".into())
    })?;
    // κ²/(κ²+τ²)^{3/2}·(τ/κ)′ = (κτ′ − τκ′)/(κ²+τ²)^{3/2}: differentiate the
    // curvatures themselves, never their ratio, and smooth against the noise
    // these recovered profiles carry.
    let m = crate::num::smoothing_half_window(intr.s.len(), h);
    let rate = crate::num::smooth_derivative(&intr.s_ind, h, m)?;
    let kp = crate::num::smooth_derivative(&intr.kappa_ind, h, m)?;
    let tp = crate::num::smooth_derivative(&intr.tau_ind, h, m)?;
    Ok((0..intr.s.len())
        .map(|i| {
            let k = intr.kappa_ind[i];
            let t = intr.tau_ind[i];
            (k * tp[i] - t * kp[i]) / (k * k + t * t).powf(1.5) / rate[i]
        })
        .collect())
}

/// Index alignment between a Frenet apparatus and the alternative-frame data
/// derived from it (the latter may be a contiguous sub-run).
fn align(app: &FrenetApparatus, alt: &AltFrameData) -> Result<(Vec<usize>, f64)> {
    let h = uniform_step(&alt.s).ok_or_else(|| {
        HelixError::MalformedInput("alternative-frame data must be on a uniform grid".into())
    })?;
    let first = alt.s[0];
    let offset = app
        .s
        .iter()
        .position(|&s| (s - first).abs() < 1e-9 * (1.0 + first.abs()))
        .ok_or_else(|| {
            HelixError::MalformedInput(
                "alternative-frame grid is not a sub-grid of the Frenet grid".into(),
            )
        })?;
    if offset + alt.len() > app.len() {
        return Err(HelixError::MalformedInput(
            "alternative-frame grid extends past the Frenet grid".into(),
        ));
    }
    Ok(((offset..offset + alt.len()).collect(), h))
}

/// Sabban frame {γ, T, Y = γ × T} and geodesic curvature k_g = ⟨T′, Y⟩ of a
/// unit-speed spherical curve on a uniform grid.
#[derive(Debug, Clone)]
pub struct SabbanFrame {
    pub gamma: Vec<Vector3<f64>>,
    pub tangent: Vec<Vector3<f64>>,
    pub y: Vec<Vector3<f64>>,
    pub k_g: Vec<f64>,
}

pub fn sabban_frame(sc: &SphericalCurve) -> Result<SabbanFrame> {
    let h = uniform_step(&sc.t).ok_or_else(|| {
        HelixError::MalformedInput(
            "Sabban frame needs a uniform parameter grid; reparameterize first".into(),
        )
    })?;
    let worst = sc.speed_defect(h)?;
    if worst > 1e-3 {
        return Err(HelixError::ReparameterizeFirst { worst });
    }
    let gp = derivative_vec(&sc.gamma, h)?;
    let tangent: Vec<Vector3<f64>> = gp.iter().map(|v| v.normalize()).collect();
    let y: Vec<Vector3<f64>> = sc
        .gamma
        .iter()
        .zip(&tangent)
        .map(|(g, t)| g.cross(t))
        .collect();
    let tp = derivative_vec(&tangent, h)?;
    let k_g: Vec<f64> = tp.iter().zip(&y).map(|(v, yi)| v.dot(yi)).collect();
    Ok(SabbanFrame {
        gamma: sc.gamma.clone(),
        tangent,
        y,
        k_g,
    })
}

/// β(t) = ∫ Y dt from the curve's start, with β(t₀) at the origin. Since
/// ‖Y‖ = 1 the result is unit-speed up to quadrature error.
pub fn integrate_y(sc: &SphericalCurve) -> Result<CurveSamples> {
    let frame = sabban_frame(sc)?;
    let h = uniform_step(&sc.t).expect("checked by sabban_frame");
    let beta = cumulative_integral_vec(&frame.y, h)?;
    CurveSamples::new(sc.t.iter().map(|t| t - sc.t[0]).collect(), beta)
}

/// A small circle at colatitude `theta0`, unit-speed, `turns` full turns.
pub fn small_circle(theta0: f64, turns: f64, n: usize) -> SphericalCurve {
    let r = theta0.sin();
    let length = turns * 2.0 * std::f64::consts::PI * r;
    let t = linspace(0.0, length, n);
    let gamma = t
        .iter()
        .map(|&ti| {
            let a = ti / r;
            Vector3::new(r * a.cos(), r * a.sin(), theta0.cos())
        })
        .collect();
    SphericalCurve::new(t, gamma).expect("small circle construction is valid")
}
