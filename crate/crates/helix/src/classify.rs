//! Thresholded detectors for every curve class: general helix, slant helix,
//! C-slant helix, constant precession, and C-constant precession. Each
//! verdict carries the constancy statistic that justifies it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::alt_frame::{darboux_twist, estimate_fixed_axis, twist_degenerate, AltFrameData, FgSamples};
use crate::error::{HelixError, Result};
use crate::frenet::FrenetApparatus;
use crate::num::{smooth_derivative, smoothing_half_window};

/// Absolute floor added to |mean| so zero-mean constancy is well-defined.
pub const EPS_ABS: f64 = 1e-12;
/// Default tolerance for analytically evaluated profiles.
pub const ANALYTIC_TOL: f64 = 1e-6;
/// Default tolerance after an integrate → differentiate round trip.
pub const NUMERIC_TOL: f64 = 1e-3;

/// How constant a sampled function is.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstancyStat {
    pub mean: f64,
    /// Standard deviation divided by (|mean| + EPS_ABS).
    pub rel_std: f64,
    pub coverage: f64,
}

/// Test a sequence for constancy at a relative tolerance.
pub fn constancy(values: &[f64], tol: f64) -> Result<(bool, ConstancyStat)> {
    constancy_with_coverage(values, tol, 1.0)
}

pub fn constancy_with_coverage(
    values: &[f64],
    tol: f64,
    coverage: f64,
) -> Result<(bool, ConstancyStat)> {
    if values.len() < 3 {
        return Err(HelixError::InsufficientData(
            "constancy test needs at least 3 values".into(),
        ));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(HelixError::MalformedInput(
            "constancy test received non-finite values".into(),
        ));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let rel_std = var.sqrt() / (mean.abs() + EPS_ABS);
    let stat = ConstancyStat {
        mean,
        rel_std,
        coverage,
    };
    Ok((rel_std <= tol, stat))
}

/// Verdict of one detector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub stat: ConstancyStat,
    pub notes: Vec<String>,
}

/// Constancy that also accepts an identically-near-zero sequence, which a
/// relative spread test would reject (the mean is ~0). `tol` doubles as the
/// absolute zero band for these dimensionless quantities.
fn constancy_or_zero(values: &[f64], tol: f64, coverage: f64) -> Result<(bool, ConstancyStat, bool)> {
    let (pass, stat) = constancy_with_coverage(values, tol, coverage)?;
    if pass {
        return Ok((true, stat, false));
    }
    let max_abs = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if max_abs <= tol {
        return Ok((true, stat, true));
    }
    Ok((false, stat, false))
}

/// General helix: H = τ/κ constant (Lancret).
pub fn is_general_helix(app: &FrenetApparatus, tol: f64) -> Result<Verdict> {
    let h = app.harmonic_curvature();
    let (pass, stat, zero) = constancy_or_zero(&h, tol, app.coverage)?;
    let mut notes = Vec::new();
    if pass && (zero || stat.mean.abs() <= tol) {
        notes.push("degenerate (τ=0): plane curve counted as degenerate helix".into());
    }
    Ok(Verdict { pass, stat, notes })
}

/// Slant helix: σ = g/f constant.
pub fn is_slant_helix(fg: &FgSamples, tol: f64) -> Result<Verdict> {
    is_slant_helix_with_coverage(fg, tol, 1.0)
}

pub fn is_slant_helix_with_coverage(fg: &FgSamples, tol: f64, coverage: f64) -> Result<Verdict> {
    let sigma = fg.sigma();
    let (pass, stat, zero) = constancy_or_zero(&sigma, tol, coverage)?;
    let mut notes = Vec::new();
    if pass && (zero || stat.mean.abs() <= tol) {
        notes.push("degenerate (σ=0): general helix".into());
    }
    Ok(Verdict { pass, stat, notes })
}

/// Slant-helix test directly on a σ sequence (used for indicatrix images,
/// whose σ comes through the chain rule rather than an [`FgSamples`]).
pub fn slant_verdict_from_sigma(sigma: &[f64], tol: f64, coverage: f64) -> Result<Verdict> {
    let (pass, stat, zero) = constancy_or_zero(sigma, tol, coverage)?;
    let mut notes = Vec::new();
    if pass && (zero || stat.mean.abs() <= tol) {
        notes.push("degenerate (σ=0): general helix".into());
    }
    Ok(Verdict { pass, stat, notes })
}

/// The criterion sequence (f²+g²)^{3/2}/(f²·(g/f)′).
///
/// Constant exactly for C-slant helices, with value tan φ. Undefined where
/// (g/f)′ vanishes (the curve is a slant helix there). The denominator is
/// evaluated as the Darboux twist f·g′ − g·f′, which stays bounded where the
/// ratio g/f does not; `half_window` is the smoothing width for the f, g
/// derivatives (use [`c_slant_criterion`] for clean analytic profiles).
pub fn c_slant_criterion_smoothed(fg: &FgSamples, half_window: usize) -> Result<Vec<f64>> {
    let twist = darboux_twist(fg, half_window)?;
    let mut out = Vec::with_capacity(fg.len());
    for i in 0..fg.len() {
        if twist_degenerate(twist[i], fg.f[i], fg.g[i]) {
            return Err(HelixError::DegenerateAxis(format!(
                "(g/f)' vanishes at s = {}: slant-helix degenerate",
                fg.s[i]
            )));
        }
        let f = fg.f[i];
        let g = fg.g[i];
        out.push((f * f + g * g).powf(1.5) / twist[i]);
    }
    Ok(out)
}

/// [`c_slant_criterion_smoothed`] with the plain 5-point derivative, for
/// analytically evaluated profiles.
pub fn c_slant_criterion(fg: &FgSamples) -> Result<Vec<f64>> {
    c_slant_criterion_smoothed(fg, 2)
}

/// Combined C-slant verdict: the criterion route and the fixed-axis route on
/// the C field, reported side by side.
#[derive(Debug, Clone, Serialize)]
pub struct CSlantVerdict {
    pub pass: bool,
    /// Constancy of the criterion sequence, absent when degenerate.
    pub criterion: Option<(bool, ConstancyStat)>,
    /// Residual of the best fixed axis for the C field.
    pub axis_residual: f64,
    pub axis_pass: bool,
    pub notes: Vec<String>,
}

/// C-slant helix: the direction C makes a constant angle with a fixed line.
///
/// Passes when the criterion sequence is constant at `tol` or the fixed-axis
/// residual on C is at most `tol`. Both routes are reported.
pub fn is_c_slant_helix(alt: &AltFrameData, tol: f64) -> Result<CSlantVerdict> {
    let mut notes = Vec::new();
    // A constant σ means a slant helix: (g/f)′ ≈ 0 and the criterion route is
    // undefined there no matter how the derivative is taken.
    let slant = is_slant_helix_with_coverage(&alt.fg(), tol, alt.coverage)?;
    let criterion = if slant.pass {
        notes.push("criterion route degenerate: σ is constant (slant helix)".into());
        None
    } else {
        let m = smoothing_half_window(alt.len(), alt.step());
        match c_slant_criterion_smoothed(&alt.fg(), m) {
            Ok(values) => Some(constancy_with_coverage(&values, tol, alt.coverage)?),
            Err(HelixError::DegenerateAxis(msg)) => {
                notes.push(format!("criterion route degenerate: {msg}"));
                None
            }
            Err(e) => return Err(e),
        }
    };
    let axis = estimate_fixed_axis(&alt.c)?;
    let axis_pass = axis.residual <= tol;
    let criterion_pass = criterion.as_ref().map(|(p, _)| *p).unwrap_or(false);
    if criterion.is_none() && axis_pass {
        notes.push("degenerate: C precesses about a fixed axis with (g/f)' = 0".into());
    }
    Ok(CSlantVerdict {
        pass: criterion_pass || axis_pass,
        criterion,
        axis_residual: axis.residual,
        axis_pass,
        notes,
    })
}

/// Constant-precession fit: κ = w sin(μs), τ = w cos(μs).
#[derive(Debug, Clone, Serialize)]
pub struct PrecessionVerdict {
    pub pass: bool,
    /// Constancy of √(κ²+τ²).
    pub amplitude: ConstancyStat,
    pub w: f64,
    pub mu: f64,
    /// RMS residual of the affine phase fit.
    pub phase_rms: f64,
    pub notes: Vec<String>,
}

/// Detect κ = w sin(μs), τ = w cos(μs): constant amplitude plus a phase
/// atan2(κ, τ) that is affine in s.
pub fn is_constant_precession(app: &FrenetApparatus, tol: f64) -> Result<PrecessionVerdict> {
    let amp: Vec<f64> = app
        .kappa
        .iter()
        .zip(&app.tau)
        .map(|(k, t)| (k * k + t * t).sqrt())
        .collect();
    let (amp_pass, amplitude) = constancy_with_coverage(&amp, tol, app.coverage)?;
    let w = amplitude.mean;

    let mut phase: Vec<f64> = app
        .kappa
        .iter()
        .zip(&app.tau)
        .map(|(k, t)| k.atan2(*t))
        .collect();
    unwrap_phase(&mut phase);
    let (mu, phase0) = affine_fit(&app.s, &phase);
    let phase_rms = (phase
        .iter()
        .zip(&app.s)
        .map(|(p, s)| {
            let r = p - (mu * s + phase0);
            r * r
        })
        .sum::<f64>()
        / phase.len() as f64)
        .sqrt();
    let span = app.s[app.len() - 1] - app.s[0];
    let phase_pass = phase_rms <= tol * (1.0 + mu.abs() * span);

    let mut notes = Vec::new();
    if amp_pass && mu.abs() * span <= tol {
        notes.push("degenerate: μ = 0 (circular helix, phase constant)".into());
    }
    Ok(PrecessionVerdict {
        pass: amp_pass && phase_pass,
        amplitude,
        w,
        mu,
        phase_rms,
        notes,
    })
}

fn unwrap_phase(phase: &mut [f64]) {
    use std::f64::consts::PI;
    let mut offset = 0.0;
    for i in 1..phase.len() {
        let raw = phase[i] + offset;
        let prev = phase[i - 1];
        let mut v = raw;
        while v - prev > PI {
            v -= 2.0 * PI;
            offset -= 2.0 * PI;
        }
        while prev - v > PI {
            v += 2.0 * PI;
            offset += 2.0 * PI;
        }
        phase[i] = v;
    }
}

fn affine_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return (0.0, my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// C-constant-precession fit: ‖D‖ = δ constant and (f, g) solving
/// g′ = μf, f′ = −μg for a common μ.
#[derive(Debug, Clone, Serialize)]
pub struct CPrecessionVerdict {
    pub pass: bool,
    /// Constancy of ‖D‖ = √(f²+g²).
    pub delta_stat: ConstancyStat,
    pub c1: f64,
    pub c2: f64,
    pub mu: f64,
    pub delta: f64,
    pub lambda: f64,
    pub cos_phi: f64,
    pub sin_phi: f64,
    /// RMS of (g′ − μf, f′ + μg) relative to δ(1+|μ|).
    pub structure_residual: f64,
    pub notes: Vec<String>,
}

/// Detect the sinusoidal (f, g) family of C-constant precession.
pub fn is_c_constant_precession(
    fg: &FgSamples,
    mu_hint: Option<f64>,
    tol: f64,
) -> Result<CPrecessionVerdict> {
    let h = fg.step();
    let norm: Vec<f64> = fg
        .f
        .iter()
        .zip(&fg.g)
        .map(|(f, g)| (f * f + g * g).sqrt())
        .collect();
    let (delta_pass, delta_stat) = constancy(&norm, tol)?;
    let delta = delta_stat.mean;

    // f and g are bounded with bounded derivatives for every class this fit
    // can accept, so smoothing costs no accuracy and buys noise immunity.
    let m = smoothing_half_window(fg.len(), h);
    let fp = smooth_derivative(&fg.f, h, m)?;
    let gp = smooth_derivative(&fg.g, h, m)?;
    // Least squares for μ in g′ = μf, f′ = −μg.
    let mu = match mu_hint {
        Some(m) => m,
        None => {
            let num: f64 = fg
                .f
                .iter()
                .zip(&gp)
                .map(|(f, gpi)| f * gpi)
                .sum::<f64>()
                - fg.g.iter().zip(&fp).map(|(g, fpi)| g * fpi).sum::<f64>();
            let den: f64 = norm.iter().map(|v| v * v).sum();
            num / den
        }
    };
    let mut resid_sq = 0.0;
    for i in 0..fg.len() {
        let r1 = gp[i] - mu * fg.f[i];
        let r2 = fp[i] + mu * fg.g[i];
        resid_sq += r1 * r1 + r2 * r2;
    }
    let structure_residual =
        (resid_sq / (2.0 * fg.len() as f64)).sqrt() / (delta * (1.0 + mu.abs()) + EPS_ABS);
    let structure_pass = structure_residual <= tol;

    // Amplitude/phase fit for (c1, c2): g = c1 cos μs + c2 sin μs and
    // f = c2 cos μs − c1 sin μs, linear least squares.
    let mut a11 = 0.0;
    let mut a12 = 0.0;
    let mut a22 = 0.0;
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for i in 0..fg.len() {
        let (c, s) = ((mu * fg.s[i]).cos(), (mu * fg.s[i]).sin());
        // Row for g: [c, s]; row for f: [−s, c].
        a11 += c * c + s * s;
        a12 += 0.0; // the two rows are orthogonal in (c1, c2) per sample
        a22 += s * s + c * c;
        b1 += fg.g[i] * c - fg.f[i] * s;
        b2 += fg.g[i] * s + fg.f[i] * c;
    }
    let _ = a12;
    let c1 = b1 / a11;
    let c2 = b2 / a22;

    let lambda = (delta * delta + mu * mu).sqrt();
    let mut notes = Vec::new();
    let span = fg.s[fg.len() - 1] - fg.s[0];
    if mu.abs() * span <= tol {
        notes.push("constant f,g: C precesses uniformly about fixed d = D (μ = 0)".into());
    }
    Ok(CPrecessionVerdict {
        pass: delta_pass && structure_pass,
        delta_stat,
        c1,
        c2,
        mu,
        delta,
        lambda,
        cos_phi: delta / lambda,
        sin_phi: mu / lambda,
        structure_residual,
        notes,
    })
}

/// Residuals of d′ for d = D + sign·μ·C.
#[derive(Debug, Clone, Serialize)]
pub struct DFixedReport {
    pub max_d_prime: f64,
    /// max |g′ − μf|
    pub max_g_residual: f64,
    /// max |f′ + μg|
    pub max_f_residual: f64,
}

/// Differentiate d = D ± μC numerically and report how fixed it is.
pub fn verify_d_fixed(alt: &AltFrameData, mu: f64, sign: f64) -> Result<DFixedReport> {
    let h = alt.step();
    let d: Vec<_> = alt
        .d
        .iter()
        .zip(&alt.c)
        .map(|(di, ci)| di + sign * mu * ci)
        .collect();
    let m = smoothing_half_window(alt.len(), h);
    let dp = crate::num::smooth_derivative_vec(&d, h, m)?;
    let fp = smooth_derivative(&alt.f, h, m)?;
    let gp = smooth_derivative(&alt.g, h, m)?;
    // Judge on centred windows only; the off-centre end fits amplify noise.
    let skip = if alt.len() > 4 * m { m } else { 0 };
    let mut max_d_prime = 0.0_f64;
    let mut max_g_residual = 0.0_f64;
    let mut max_f_residual = 0.0_f64;
    for i in skip..alt.len() - skip {
        max_d_prime = max_d_prime.max(dp[i].norm());
        max_g_residual = max_g_residual.max((gp[i] - mu * alt.f[i]).abs());
        max_f_residual = max_f_residual.max((fp[i] + mu * alt.g[i]).abs());
    }
    Ok(DFixedReport {
        max_d_prime,
        max_g_residual,
        max_f_residual,
    })
}

/// One detector entry of a serialized classification report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectorEntry {
    pub pass: bool,
    pub mean: f64,
    pub rel_std: f64,
    pub coverage: f64,
    pub notes: Vec<String>,
}

/// The full classification report over all detectors.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub detectors: BTreeMap<String, DetectorEntry>,
    pub tolerances: BTreeMap<String, f64>,
}

/// Run every detector on an extracted apparatus + alternative frame.
pub fn classify_all(
    app: &FrenetApparatus,
    alt: &AltFrameData,
    tol: f64,
) -> Result<ClassificationReport> {
    let mut detectors = BTreeMap::new();

    let gh = is_general_helix(app, tol)?;
    detectors.insert(
        "general_helix".to_string(),
        DetectorEntry {
            pass: gh.pass,
            mean: gh.stat.mean,
            rel_std: gh.stat.rel_std,
            coverage: gh.stat.coverage,
            notes: gh.notes,
        },
    );

    let sh = is_slant_helix_with_coverage(&alt.fg(), tol, alt.coverage)?;
    detectors.insert(
        "slant_helix".to_string(),
        DetectorEntry {
            pass: sh.pass,
            mean: sh.stat.mean,
            rel_std: sh.stat.rel_std,
            coverage: sh.stat.coverage,
            notes: sh.notes,
        },
    );

    let cs = is_c_slant_helix(alt, tol)?;
    let (mean, rel_std) = cs
        .criterion
        .as_ref()
        .map(|(_, s)| (s.mean, s.rel_std))
        .unwrap_or((f64::NAN, f64::NAN));
    let mut notes = cs.notes.clone();
    notes.push(format!(
        "axis route: residual {:.3e} ({})",
        cs.axis_residual,
        if cs.axis_pass { "pass" } else { "fail" }
    ));
    detectors.insert(
        "c_slant_helix".to_string(),
        DetectorEntry {
            pass: cs.pass,
            mean: if mean.is_nan() { 0.0 } else { mean },
            rel_std: if rel_std.is_nan() { 0.0 } else { rel_std },
            coverage: alt.coverage,
            notes,
        },
    );

    let cp = is_constant_precession(app, tol)?;
    let mut notes = cp.notes.clone();
    notes.push(format!("fitted w = {:.6}, μ = {:.6}", cp.w, cp.mu));
    detectors.insert(
        "constant_precession".to_string(),
        DetectorEntry {
            pass: cp.pass,
            mean: cp.amplitude.mean,
            rel_std: cp.amplitude.rel_std,
            coverage: cp.amplitude.coverage,
            notes,
        },
    );

    let ccp = is_c_constant_precession(&alt.fg(), None, tol)?;
    let mut notes = ccp.notes.clone();
    notes.push(format!(
        "fitted δ = {:.6}, μ = {:.6}, λ = {:.6}",
        ccp.delta, ccp.mu, ccp.lambda
    ));
    detectors.insert(
        "c_constant_precession".to_string(),
        DetectorEntry {
            pass: ccp.pass,
            mean: ccp.delta,
            rel_std: ccp.delta_stat.rel_std,
            coverage: alt.coverage,
            notes,
        },
    );

    let mut tolerances = BTreeMap::new();
    tolerances.insert("constancy".to_string(), tol);
    tolerances.insert("eps_abs".to_string(), EPS_ABS);
    Ok(ClassificationReport {
        detectors,
        tolerances,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alt_frame::alt_frame_from_frenet;
    use crate::curve::{IntrinsicProfile, ProfileKind};
    use crate::frenet::{frenet_from_samples, integrate_profile};
    use crate::num::linspace;
    use std::f64::consts::PI;

    fn analytic_fg(f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> FgSamples {
        let s = linspace(lo, hi, n);
        FgSamples {
            f: s.iter().map(|&x| f(x)).collect(),
            g: s.iter().map(|&x| g(x)).collect(),
            s,
        }
    }

    fn pipeline(profile: &IntrinsicProfile, step: f64) -> (FrenetApparatus, AltFrameData) {
        let (curve, _) = integrate_profile(profile, step, profile.domain).unwrap();
        let app = frenet_from_samples(&curve).unwrap();
        let alt = alt_frame_from_frenet(&app).unwrap();
        (app, alt)
    }

    /// Alternative frame from the integrated apparatus (no position-recovery
    /// noise); suits the tight d-fixedness tolerances.
    fn alt_clean(profile: &IntrinsicProfile, step: f64) -> AltFrameData {
        let (_, app) = integrate_profile(profile, step, profile.domain).unwrap();
        alt_frame_from_frenet(&app).unwrap()
    }

    #[test]
    fn constancy_basics() {
        let (pass, stat) = constancy(&[2.0, 2.0, 2.0, 2.0], 1e-6).unwrap();
        assert!(pass);
        assert_eq!(stat.rel_std, 0.0);
        let (pass, _) = constancy(&[1.0, 1.1, 0.9], 1e-6).unwrap();
        assert!(!pass);
        assert!(constancy(&[1.0, f64::NAN, 1.0], 1e-6).is_err());
    }

    #[test]
    fn general_helix_detector() {
        let helix = IntrinsicProfile::new(
            ProfileKind::CircularHelix { a: 1.0, b: 1.0 },
            (0.0, 4.0 * PI),
        )
        .unwrap();
        let (app, _) = pipeline(&helix, 2e-3);
        assert!(is_general_helix(&app, NUMERIC_TOL).unwrap().pass);

        let precession = IntrinsicProfile::new(
            ProfileKind::ConstantPrecession { w: 1.0, mu: 0.5 },
            (0.2, 2.0 * PI - 0.2),
        )
        .unwrap();
        let (app, _) = pipeline(&precession, 1e-3);
        assert!(!is_general_helix(&app, NUMERIC_TOL).unwrap().pass);
    }

    #[test]
    fn circle_is_degenerate_helix() {
        let circle = IntrinsicProfile::new(
            ProfileKind::Tabulated {
                records: vec![(0.0, 1.0, 0.0), (2.0 * PI, 1.0, 0.0)],
            },
            (0.0, 2.0 * PI),
        )
        .unwrap();
        let (app, _) = pipeline(&circle, 2e-3);
        let v = is_general_helix(&app, NUMERIC_TOL).unwrap();
        assert!(v.pass);
        assert!(v.notes.iter().any(|n| n.contains("degenerate")));
    }

    #[test]
    fn slant_helix_detector() {
        // Analytic σ ≡ −μ/w for the constant-precession family.
        let fg = analytic_fg(|_| 1.0, |_| -0.5, 0.2, 2.0 * PI - 0.2, 2001);
        let v = is_slant_helix(&fg, ANALYTIC_TOL).unwrap();
        assert!(v.pass);
        assert!((v.stat.mean + 0.5).abs() < 1e-12);

        // σ = tan 2s is not constant.
        let fg = analytic_fg(|s| (2.0 * s).cos(), |s| (2.0 * s).sin(), -PI / 4.0 + 0.1, PI / 4.0 - 0.1, 2001);
        assert!(!is_slant_helix(&fg, ANALYTIC_TOL).unwrap().pass);
    }

    #[test]
    fn criterion_for_special_family() {
        // Oracle: f = cos μs, g = sin μs gives f²(g/f)′ = μ and
        // (f²+g²)^{3/2} = 1, so the criterion is 1/μ.
        let fg = analytic_fg(|s| (2.0 * s).cos(), |s| (2.0 * s).sin(), -PI / 4.0 + 0.1, PI / 4.0 - 0.1, 4001);
        let crit = c_slant_criterion(&fg).unwrap();
        for v in &crit {
            assert!((v - 0.5).abs() < 1e-6, "criterion {v}");
        }
    }

    #[test]
    fn criterion_for_general_family() {
        // (g/f)′ = μ(f²+g²)/f² from g′ = μf, f′ = −μg, so the criterion is
        // √(c1²+c2²)/μ = √2 for (1, 1, 1).
        let f = |s: f64| s.cos() - s.sin();
        let g = |s: f64| s.cos() + s.sin();
        let fg = analytic_fg(f, g, -PI / 4.0 + 0.1, PI / 4.0 - 0.1, 4001);
        let crit = c_slant_criterion(&fg).unwrap();
        let expect = 2.0_f64.sqrt();
        for v in &crit {
            assert!((v - expect).abs() < 1e-6, "criterion {v}");
        }
    }

    #[test]
    fn criterion_degenerate_for_slant_helix() {
        let fg = analytic_fg(|_| 1.0, |_| -0.5, 0.0, 1.0, 1001);
        assert!(matches!(
            c_slant_criterion(&fg),
            Err(HelixError::DegenerateAxis(_))
        ));
    }

    #[test]
    fn c_slant_detector_on_synthesized_curve() {
        let profile = IntrinsicProfile::new(
            ProfileKind::CConstantPrecession {
                c1: 0.0,
                c2: 1.0,
                mu: 2.0,
                theta0: 0.0,
            },
            (-PI / 4.0 + 0.08, PI / 4.0 - 0.08),
        )
        .unwrap();
        let (_, alt) = pipeline(&profile, 5e-4);
        let v = is_c_slant_helix(&alt, NUMERIC_TOL).unwrap();
        assert!(v.pass);
        assert!(v.criterion.as_ref().unwrap().0, "criterion route");
        assert!(v.axis_pass, "axis route, residual {}", v.axis_residual);
    }

    #[test]
    fn c_slant_degenerate_for_circular_helix() {
        let profile = IntrinsicProfile::new(
            ProfileKind::CircularHelix { a: 1.0, b: 1.0 },
            (0.0, 4.0 * PI),
        )
        .unwrap();
        let (_, alt) = pipeline(&profile, 2e-3);
        let v = is_c_slant_helix(&alt, NUMERIC_TOL).unwrap();
        assert!(v.pass);
        assert!(v.criterion.is_none(), "criterion should be degenerate");
        assert!(v.axis_pass);
        assert!(v.notes.iter().any(|n| n.contains("degenerate")));
    }

    #[test]
    fn c_slant_fails_for_generic_curve() {
        let s = linspace(0.0, 6.0, 1201);
        let records: Vec<(f64, f64, f64)> = s
            .iter()
            .map(|&x| (x, 2.0 + x.sin(), (1.3 * x).cos()))
            .collect();
        let profile = IntrinsicProfile::new(ProfileKind::Tabulated { records }, (0.0, 6.0)).unwrap();
        let (_, alt) = pipeline(&profile, 2e-3);
        let v = is_c_slant_helix(&alt, NUMERIC_TOL).unwrap();
        assert!(!v.pass, "generic curve must fail, residual {}", v.axis_residual);
    }

    #[test]
    fn constant_precession_detector() {
        let profile = IntrinsicProfile::new(
            ProfileKind::ConstantPrecession { w: 1.0, mu: 0.5 },
            (0.1, 2.0 * PI - 0.1),
        )
        .unwrap();
        let (s, kappa, tau) = profile.sample(4001).unwrap();
        let app = FrenetApparatus {
            t: vec![nalgebra::Vector3::x(); s.len()],
            n: vec![nalgebra::Vector3::y(); s.len()],
            b: vec![nalgebra::Vector3::z(); s.len()],
            s,
            kappa,
            tau,
            coverage: 1.0,
        };
        let v = is_constant_precession(&app, ANALYTIC_TOL).unwrap();
        assert!(v.pass);
        assert!((v.w - 1.0).abs() < 1e-6, "w {}", v.w);
        assert!((v.mu - 0.5).abs() < 1e-6, "mu {}", v.mu);
    }

    #[test]
    fn circular_helix_is_degenerate_precession() {
        let profile = IntrinsicProfile::new(
            ProfileKind::CircularHelix { a: 1.0, b: 1.0 },
            (0.0, 4.0 * PI),
        )
        .unwrap();
        let (app, _) = pipeline(&profile, 2e-3);
        let v = is_constant_precession(&app, NUMERIC_TOL).unwrap();
        assert!(v.pass);
        assert!(v.notes.iter().any(|n| n.contains("μ = 0")));
    }

    #[test]
    fn c_constant_precession_fails_constant_amplitude() {
        // κ²+τ² = f² = cos²μs is not constant for the C-family.
        let profile = IntrinsicProfile::new(
            ProfileKind::CConstantPrecession {
                c1: 0.0,
                c2: 1.0,
                mu: 2.0,
                theta0: 0.0,
            },
            (-PI / 4.0 + 0.08, PI / 4.0 - 0.08),
        )
        .unwrap();
        let (app, _) = pipeline(&profile, 5e-4);
        assert!(!is_constant_precession(&app, NUMERIC_TOL).unwrap().pass);
    }

    #[test]
    fn c_constant_precession_fit() {
        // Fitted-parameter identities as oracle: δ = 1, μ = 2, λ = √5.
        let fg = analytic_fg(|s| (2.0 * s).cos(), |s| (2.0 * s).sin(), -PI / 4.0 + 0.1, PI / 4.0 - 0.1, 4001);
        let v = is_c_constant_precession(&fg, None, ANALYTIC_TOL).unwrap();
        assert!(v.pass);
        assert!((v.delta - 1.0).abs() < 1e-9, "delta {}", v.delta);
        assert!((v.mu - 2.0).abs() < 1e-6, "mu {}", v.mu);
        assert!((v.lambda - 5.0_f64.sqrt()).abs() < 1e-6);
        assert!((v.cos_phi - 1.0 / 5.0_f64.sqrt()).abs() < 1e-6);
        assert!((v.sin_phi - 2.0 / 5.0_f64.sqrt()).abs() < 1e-6);
        assert!((v.cos_phi * v.cos_phi + v.sin_phi * v.sin_phi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_fg_passes_with_degenerate_mu() {
        let fg = analytic_fg(|_| 1.0, |_| -0.5, 0.0, 5.0, 2001);
        let v = is_c_constant_precession(&fg, None, ANALYTIC_TOL).unwrap();
        assert!(v.pass);
        assert!(v.mu.abs() < 1e-9);
        assert!(v.notes.iter().any(|n| n.contains("constant f,g")));
    }

    #[test]
    fn random_profile_fails_everything() {
        let s = linspace(0.0, 6.0, 2001);
        // Fixed pseudo-random but smooth profile.
        let records: Vec<(f64, f64, f64)> = s
            .iter()
            .map(|&x| {
                (
                    x,
                    1.5 + 0.4 * (1.7 * x).sin() + 0.2 * (0.9 * x + 1.0).cos(),
                    0.6 * (2.3 * x).cos() + 0.3 * (1.1 * x).sin(),
                )
            })
            .collect();
        let profile = IntrinsicProfile::new(ProfileKind::Tabulated { records }, (0.0, 6.0)).unwrap();
        let (app, alt) = pipeline(&profile, 2e-3);
        assert!(!is_general_helix(&app, NUMERIC_TOL).unwrap().pass);
        assert!(!is_slant_helix_with_coverage(&alt.fg(), NUMERIC_TOL, 1.0).unwrap().pass);
        assert!(!is_c_slant_helix(&alt, NUMERIC_TOL).unwrap().pass);
        assert!(!is_constant_precession(&app, NUMERIC_TOL).unwrap().pass);
        assert!(!is_c_constant_precession(&alt.fg(), None, NUMERIC_TOL).unwrap().pass);
    }

    #[test]
    fn d_fixed_residuals() {
        let profile = IntrinsicProfile::new(
            ProfileKind::CConstantPrecession {
                c1: 0.0,
                c2: 1.0,
                mu: 2.0,
                theta0: 0.0,
            },
            (-PI / 4.0 + 0.08, PI / 4.0 - 0.08),
        )
        .unwrap();
        let alt = alt_clean(&profile, 5e-4);
        let good = verify_d_fixed(&alt, 2.0, 1.0).unwrap();
        assert!(good.max_d_prime < 1e-5, "d' {}", good.max_d_prime);
        let bad = verify_d_fixed(&alt, 1.0, 1.0).unwrap();
        assert!(bad.max_d_prime > 0.1, "perturbed d' {}", bad.max_d_prime);
    }

    #[test]
    fn d_fixed_for_circular_helix_mu_zero() {
        let profile = IntrinsicProfile::new(
            ProfileKind::CircularHelix { a: 1.0, b: 1.0 },
            (0.0, 4.0 * PI),
        )
        .unwrap();
        let alt = alt_clean(&profile, 1e-3);
        let r = verify_d_fixed(&alt, 0.0, 1.0).unwrap();
        assert!(r.max_d_prime < 1e-6, "d' {}", r.max_d_prime);
    }

    #[test]
    fn scale_invariance_of_verdicts() {
        // Scaling the curve by λ scales κ, τ, f, g by 1/λ and leaves σ and
        // all verdicts unchanged.
        let profile = IntrinsicProfile::new(
            ProfileKind::CConstantPrecession {
                c1: 0.0,
                c2: 1.0,
                mu: 2.0,
                theta0: 0.0,
            },
            (-PI / 4.0 + 0.08, PI / 4.0 - 0.08),
        )
        .unwrap();
        let (curve, _) = integrate_profile(&profile, 5e-4, profile.domain).unwrap();
        let scale = 3.7;
        let scaled = crate::curve::CurveSamples::new(
            curve.s.iter().map(|s| s * scale).collect(),
            curve.p.iter().map(|p| p * scale).collect(),
        )
        .unwrap();
        let app1 = frenet_from_samples(&curve).unwrap();
        let app2 = frenet_from_samples(&scaled).unwrap();
        for i in 0..app1.len().min(app2.len()) {
            assert!((app1.kappa[i] - scale * app2.kappa[i]).abs() < 1e-8);
        }
        let alt1 = alt_frame_from_frenet(&app1).unwrap();
        let alt2 = alt_frame_from_frenet(&app2).unwrap();
        let v1 = is_c_slant_helix(&alt1, NUMERIC_TOL).unwrap();
        let v2 = is_c_slant_helix(&alt2, NUMERIC_TOL).unwrap();
        assert_eq!(v1.pass, v2.pass);
        let s1 = is_slant_helix_with_coverage(&alt1.fg(), NUMERIC_TOL, 1.0).unwrap();
        let s2 = is_slant_helix_with_coverage(&alt2.fg(), NUMERIC_TOL, 1.0).unwrap();
        assert_eq!(s1.pass, s2.pass);
        // The two grids have different steps, so their σ noise differs; the
        // means agree to the noise floor, not to round-off.
        assert!((s1.stat.mean - s2.stat.mean).abs() < 1e-4);
    }
}
