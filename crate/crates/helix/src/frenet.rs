//! Frenet apparatus: extraction from samples, the σ function (geodesic
//! curvature of the principal-normal image), and fixed-step integration of
//! the Frenet-Serret system from an intrinsic profile.

use nalgebra::{Matrix3, Vector3};

use crate::curve::{CurveSamples, IntrinsicProfile};
use crate::error::{HelixError, Result};
use crate::num::{derivative, derivative_vec, uniform_step, STENCIL_WIDTH};

/// Relative curvature floor: samples with κ < KAPPA_MIN_FRACTION · max κ are
/// dropped (the principal normal direction is numerically meaningless there).
pub const KAPPA_MIN_FRACTION: f64 = 1e-8;

/// Samples dropped from each end after extraction. One-sided difference
/// stencils lose one order of accuracy per differentiation level near the
/// ends of the grid, and the Frenet apparatus stacks three levels
/// (T from p, κ/N from T, τ from N); six samples cover the contaminated
/// band so every retained value comes from centered stencils only.
const BOUNDARY_TRIM: usize = 6;

/// Per-sample Frenet data on a uniform arc-length grid.
#[derive(Debug, Clone)]
pub struct FrenetApparatus {
    pub s: Vec<f64>,
    pub t: Vec<Vector3<f64>>,
    pub n: Vec<Vector3<f64>>,
    pub b: Vec<Vector3<f64>>,
    pub kappa: Vec<f64>,
    pub tau: Vec<f64>,
    /// Fraction of input samples retained after the κ floor.
    pub coverage: f64,
}

impl FrenetApparatus {
    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    /// Grid step (the apparatus always lives on a uniform grid).
    pub fn step(&self) -> f64 {
        (self.s[self.s.len() - 1] - self.s[0]) / (self.s.len() - 1) as f64
    }

    /// Harmonic curvature H = τ/κ per sample.
    pub fn harmonic_curvature(&self) -> Vec<f64> {
        self.kappa
            .iter()
            .zip(&self.tau)
            .map(|(k, t)| t / k)
            .collect()
    }
}

/// σ(s) with the coverage left after guard-banding.
#[derive(Debug, Clone)]
pub struct SigmaProfile {
    pub s: Vec<f64>,
    pub sigma: Vec<f64>,
    pub coverage: f64,
}

/// Extract the Frenet apparatus from a uniformly sampled unit-speed curve.
///
/// T = p′, κ = ‖T′‖, N = T′/κ, B = T × N, τ = ⟨N′, B⟩ with 4th-order
/// finite differences. The largest contiguous run with κ above the floor is
/// retained so the output stays on a uniform grid.
pub fn frenet_from_samples(curve: &CurveSamples) -> Result<FrenetApparatus> {
    if curve.len() < 7 {
        return Err(HelixError::InsufficientData(format!(
            "Frenet extraction needs at least 7 samples, got {}",
            curve.len()
        )));
    }
    let h = uniform_step(&curve.s).ok_or_else(|| {
        HelixError::MalformedInput("Frenet extraction requires a uniform arc-length grid".into())
    })?;

    let t = derivative_vec(&curve.p, h)?;
    let tp = derivative_vec(&t, h)?;
    let kappa: Vec<f64> = tp.iter().map(|v| v.norm()).collect();
    let kappa_max = kappa.iter().cloned().fold(0.0, f64::max);
    // Round-off in the positions shows up in the second derivative at the
    // scale ε·‖p‖/h²; a maximum curvature below that is indistinguishable
    // from a straight line.
    let p_scale = curve.p.iter().map(|v| v.norm()).fold(1.0, f64::max);
    if kappa_max <= 1e-12 * p_scale / (h * h) {
        return Err(HelixError::DegenerateCurve {
            reason: "curvature is below the numerical noise floor (straight line?)".into(),
            kappa_max,
        });
    }
    let kappa_min = KAPPA_MIN_FRACTION * kappa_max;

    let (mut lo, mut hi) = longest_run(&kappa, |&k| k >= kappa_min && k > 0.0).ok_or_else(|| {
        HelixError::DegenerateCurve {
            reason: "curvature below floor everywhere (straight line?)".into(),
            kappa_max,
        }
    })?;
    if hi - lo > 2 * BOUNDARY_TRIM + STENCIL_WIDTH {
        lo += BOUNDARY_TRIM;
        hi -= BOUNDARY_TRIM;
    }
    if hi - lo < STENCIL_WIDTH {
        return Err(HelixError::DegenerateCurve {
            reason: "fewer than a stencil width of samples with usable curvature".into(),
            kappa_max,
        });
    }

    let coverage = (hi - lo) as f64 / curve.len() as f64;
    let s: Vec<f64> = curve.s[lo..hi].to_vec();
    let t: Vec<Vector3<f64>> = t[lo..hi].to_vec();
    let kappa: Vec<f64> = kappa[lo..hi].to_vec();
    let n: Vec<Vector3<f64>> = tp[lo..hi]
        .iter()
        .zip(&kappa)
        .map(|(v, k)| v / *k)
        .collect();
    let b: Vec<Vector3<f64>> = t.iter().zip(&n).map(|(ti, ni)| ti.cross(ni)).collect();
    let np = derivative_vec(&n, h)?;
    let tau: Vec<f64> = np.iter().zip(&b).map(|(v, bi)| v.dot(bi)).collect();

    Ok(FrenetApparatus {
        s,
        t,
        n,
        b,
        kappa,
        tau,
        coverage,
    })
}

fn longest_run<T>(values: &[T], keep: impl Fn(&T) -> bool) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut start = None;
    for (i, v) in values.iter().enumerate() {
        if keep(v) {
            start.get_or_insert(i);
        } else if let Some(s0) = start.take() {
            if best.map_or(true, |(a, b)| i - s0 > b - a) {
                best = Some((s0, i));
            }
        }
    }
    if let Some(s0) = start {
        if best.map_or(true, |(a, b)| values.len() - s0 > b - a) {
            best = Some((s0, values.len()));
        }
    }
    best
}

/// σ from tabulated (κ, τ) on a uniform grid, no frames needed:
/// σ = κ²/(κ²+τ²)^{3/2} · (τ/κ)′.
pub fn sigma_from_intrinsics(s: &[f64], kappa: &[f64], tau: &[f64]) -> Result<Vec<f64>> {
    if s.len() < STENCIL_WIDTH {
        return Err(HelixError::InsufficientData(
            "σ needs at least a stencil width of samples".into(),
        ));
    }
    let h = uniform_step(s).ok_or_else(|| {
        HelixError::MalformedInput("σ computation requires a uniform grid".into())
    })?;
    let ratio: Vec<f64> = kappa.iter().zip(tau).map(|(k, t)| t / k).collect();
    let ratio_prime = derivative(&ratio, h)?;
    Ok(kappa
        .iter()
        .zip(tau)
        .zip(&ratio_prime)
        .map(|((k, t), rp)| k * k / (k * k + t * t).powf(1.5) * rp)
        .collect())
}

/// σ = κ²/(κ²+τ²)^{3/2} · (τ/κ)′, the geodesic curvature of the spherical
/// image of the principal normal.
pub fn sigma_from_apparatus(app: &FrenetApparatus) -> Result<SigmaProfile> {
    let sigma = sigma_from_intrinsics(&app.s, &app.kappa, &app.tau)?;
    Ok(SigmaProfile {
        s: app.s.clone(),
        sigma,
        coverage: app.coverage,
    })
}

/// Nearest orthonormal matrix (polar factor) to `m`, orientation-preserving
/// when `m` is close to a rotation.
fn nearest_orthonormal(m: &Matrix3<f64>) -> Matrix3<f64> {
    let svd = m.svd(true, true);
    let u = svd.u.unwrap();
    let vt = svd.v_t.unwrap();
    u * vt
}

fn frame_matrix(t: &Vector3<f64>, n: &Vector3<f64>, b: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::from_columns(&[*t, *n, *b])
}

fn orthonormality_defect(t: &Vector3<f64>, n: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
    let m = frame_matrix(t, n, b);
    (m.transpose() * m - Matrix3::identity()).norm()
}

/// Integrate p′ = T, T′ = κN, N′ = −κT + τB, B′ = −τN with classical RK4
/// at fixed step, re-orthonormalizing the frame after every step.
///
/// `step` is adjusted to the nearest value dividing the span evenly so the
/// output grid is exactly uniform.
pub fn integrate_frenet(
    profile: &IntrinsicProfile,
    init_pos: Vector3<f64>,
    init_frame: (Vector3<f64>, Vector3<f64>, Vector3<f64>),
    step: f64,
    span: (f64, f64),
) -> Result<(CurveSamples, FrenetApparatus)> {
    if step <= 0.0 {
        return Err(HelixError::InvalidArgument("step must be positive".into()));
    }
    if !(span.0 < span.1) {
        return Err(HelixError::InvalidArgument("empty span".into()));
    }
    if !profile.contains(span.0) || !profile.contains(span.1) {
        return Err(HelixError::OutOfDomain {
            s: if profile.contains(span.0) { span.1 } else { span.0 },
            lo: profile.domain.0,
            hi: profile.domain.1,
        });
    }
    let (t0, n0, b0) = init_frame;
    if orthonormality_defect(&t0, &n0, &b0) > 1e-12 {
        return Err(HelixError::InvalidArgument(
            "initial frame is not orthonormal within 1e-12".into(),
        ));
    }

    let length = span.1 - span.0;
    let n_steps = (length / step).round().max(4.0) as usize;
    let h = length / n_steps as f64;

    let mut s = Vec::with_capacity(n_steps + 1);
    let mut p = Vec::with_capacity(n_steps + 1);
    let mut ts = Vec::with_capacity(n_steps + 1);
    let mut ns = Vec::with_capacity(n_steps + 1);
    let mut bs = Vec::with_capacity(n_steps + 1);
    let mut kappa = Vec::with_capacity(n_steps + 1);
    let mut tau = Vec::with_capacity(n_steps + 1);

    // State: [p, T, N, B] stacked as 12 components.
    let mut state = [init_pos, t0, n0, b0];
    let deriv = |si: f64, y: &[Vector3<f64>; 4]| -> Result<[Vector3<f64>; 4]> {
        // Interior stage points can land a hair outside the closed domain
        // through rounding; clamp them.
        let sc = si.clamp(profile.domain.0, profile.domain.1);
        let (k, t) = profile.eval(sc)?;
        Ok([y[1], k * y[2], -k * y[1] + t * y[3], -t * y[2]])
    };

    for i in 0..=n_steps {
        let si = span.0 + h * i as f64;
        let sc = si.min(span.1);
        let (k, t) = profile.eval(sc.clamp(profile.domain.0, profile.domain.1))?;
        s.push(sc);
        p.push(state[0]);
        ts.push(state[1]);
        ns.push(state[2]);
        bs.push(state[3]);
        kappa.push(k);
        tau.push(t);
        if i == n_steps {
            break;
        }

        let k1 = deriv(si, &state)?;
        let y2 = add_scaled(&state, &k1, h / 2.0);
        let k2 = deriv(si + h / 2.0, &y2)?;
        let y3 = add_scaled(&state, &k2, h / 2.0);
        let k3 = deriv(si + h / 2.0, &y3)?;
        let y4 = add_scaled(&state, &k3, h);
        let k4 = deriv(si + h, &y4)?;
        for j in 0..4 {
            state[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        let m = nearest_orthonormal(&frame_matrix(&state[1], &state[2], &state[3]));
        state[1] = m.column(0).into();
        state[2] = m.column(1).into();
        state[3] = m.column(2).into();
    }

    let curve = CurveSamples::new(s.clone(), p)?;
    let app = FrenetApparatus {
        s,
        t: ts,
        n: ns,
        b: bs,
        kappa,
        tau,
        coverage: 1.0,
    };
    Ok((curve, app))
}

fn add_scaled(y: &[Vector3<f64>; 4], d: &[Vector3<f64>; 4], c: f64) -> [Vector3<f64>; 4] {
    [y[0] + c * d[0], y[1] + c * d[1], y[2] + c * d[2], y[3] + c * d[3]]
}

/// Standard starting frame at the origin.
pub fn standard_frame() -> (Vector3<f64>, Vector3<f64>, Vector3<f64>) {
    (Vector3::x(), Vector3::y(), Vector3::z())
}

/// Convenience: integrate a profile over its (possibly shrunk) span with the
/// standard initial frame at the origin.
pub fn integrate_profile(
    profile: &IntrinsicProfile,
    step: f64,
    span: (f64, f64),
) -> Result<(CurveSamples, FrenetApparatus)> {
    integrate_frenet(profile, Vector3::zeros(), standard_frame(), step, span)
}
