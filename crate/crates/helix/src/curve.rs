//! Core curve data types: arc-length-sampled curves and intrinsic
//! (curvature/torsion) profiles, with validation and resampling.

use nalgebra::Vector3;

use crate::error::{HelixError, Result};
use crate::num::{linspace, Spline3};

/// Default relative tolerance for the unit-speed check on numerical input.
pub const DEFAULT_SPEED_TOL: f64 = 1e-3;

/// An arc-length-parameterized polyline in 3-space.
#[derive(Debug, Clone)]
pub struct CurveSamples {
    pub s: Vec<f64>,
    pub p: Vec<Vector3<f64>>,
}

impl CurveSamples {
    /// Build a curve, checking the structural invariants (matched lengths,
    /// at least 5 samples, strictly increasing arc length).
    pub fn new(s: Vec<f64>, p: Vec<Vector3<f64>>) -> Result<Self> {
        if s.len() != p.len() {
            return Err(HelixError::MalformedInput(format!(
                "{} arc-length values but {} positions",
                s.len(),
                p.len()
            )));
        }
        if s.len() < 5 {
            return Err(HelixError::MalformedInput(format!(
                "need at least 5 samples, got {}",
                s.len()
            )));
        }
        if s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(HelixError::MalformedInput(
                "arc length must be strictly increasing".into(),
            ));
        }
        Ok(Self { s, p })
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }
}

/// Outcome of the per-segment unit-speed check.
#[derive(Debug, Clone)]
pub struct SpeedReport {
    pub pass: bool,
    /// Worst relative deviation of chord length from arc-length increment.
    pub worst_deviation: f64,
    /// Index of the segment (between samples i and i+1) with that deviation.
    pub worst_segment: usize,
}

/// Check `|‖p_{i+1} − p_i‖ − Δs| ≤ speed_tol · Δs` on every segment.
pub fn validate_unit_speed(curve: &CurveSamples, speed_tol: f64) -> Result<SpeedReport> {
    if curve.len() < 2 {
        return Err(HelixError::MalformedInput(
            "unit-speed check needs at least 2 samples".into(),
        ));
    }
    let mut worst = 0.0;
    let mut worst_segment = 0;
    for i in 0..curve.len() - 1 {
        let ds = curve.s[i + 1] - curve.s[i];
        let chord = (curve.p[i + 1] - curve.p[i]).norm();
        let dev = (chord - ds).abs() / ds;
        if dev > worst {
            worst = dev;
            worst_segment = i;
        }
    }
    Ok(SpeedReport {
        pass: worst <= speed_tol,
        worst_deviation: worst,
        worst_segment,
    })
}

/// Resample a curve at `n` uniformly spaced arc-length values over its span.
///
/// Positions come from a natural cubic spline per coordinate; the endpoints
/// are preserved exactly.
pub fn resample_arclength(curve: &CurveSamples, n: usize) -> Result<CurveSamples> {
    if n < 5 {
        return Err(HelixError::InvalidArgument(format!(
            "resample count must be at least 5, got {n}"
        )));
    }
    let spline = Spline3::new(&curve.s, &curve.p)?;
    let s_new = linspace(curve.s[0], *curve.s.last().unwrap(), n);
    let mut p_new: Vec<Vector3<f64>> = s_new.iter().map(|&s| spline.eval(s)).collect();
    p_new[0] = curve.p[0];
    *p_new.last_mut().unwrap() = *curve.p.last().unwrap();
    CurveSamples::new(s_new, p_new)
}

/// An intrinsic (natural-equation) description of a curve: κ(s), τ(s).
#[derive(Debug, Clone)]
pub enum ProfileKind {
    /// Piecewise-linear interpolation of tabulated (s, κ, τ) records.
    Tabulated { records: Vec<(f64, f64, f64)> },
    /// Constant κ = a/(a²+b²), τ = b/(a²+b²) of the helix
    /// (a cos(s/c), a sin(s/c), b s/c) with c = √(a²+b²).
    CircularHelix { a: f64, b: f64 },
    /// κ = w sin(μs), τ = w cos(μs).
    ConstantPrecession { w: f64, mu: f64 },
    /// The family with f = c2 cos(μs) − c1 sin(μs), g = c1 cos(μs) + c2 sin(μs)
    /// converted to (κ, τ) through κ = f cos θ, τ = f sin θ, θ′ = g, θ(0) = θ0.
    CConstantPrecession { c1: f64, c2: f64, mu: f64, theta0: f64 },
}

#[derive(Debug, Clone)]
pub struct IntrinsicProfile {
    pub kind: ProfileKind,
    /// Closed interval [lo, hi] on which the profile may be evaluated.
    pub domain: (f64, f64),
}

impl IntrinsicProfile {
    pub fn new(kind: ProfileKind, domain: (f64, f64)) -> Result<Self> {
        if !(domain.0 < domain.1) {
            return Err(HelixError::InvalidArgument(format!(
                "empty profile domain [{}, {}]",
                domain.0, domain.1
            )));
        }
        match &kind {
            ProfileKind::Tabulated { records } => {
                if records.len() < 2 {
                    return Err(HelixError::InvalidArgument(
                        "tabulated profile needs at least 2 records".into(),
                    ));
                }
                if records.windows(2).any(|w| w[1].0 <= w[0].0) {
                    return Err(HelixError::MalformedInput(
                        "tabulated profile s values must be strictly increasing".into(),
                    ));
                }
            }
            ProfileKind::CircularHelix { a, .. } => {
                if *a <= 0.0 {
                    return Err(HelixError::InvalidArgument(
                        "circular helix needs a > 0 (κ > 0)".into(),
                    ));
                }
            }
            ProfileKind::ConstantPrecession { w, .. } => {
                if *w <= 0.0 {
                    return Err(HelixError::InvalidArgument(
                        "constant precession needs w > 0".into(),
                    ));
                }
            }
            ProfileKind::CConstantPrecession { c1, c2, mu, .. } => {
                if *mu == 0.0 {
                    return Err(HelixError::InvalidArgument(
                        "C-constant precession needs mu != 0".into(),
                    ));
                }
                if *c1 == 0.0 && *c2 == 0.0 {
                    return Err(HelixError::InvalidArgument(
                        "C-constant precession needs (c1, c2) != (0, 0)".into(),
                    ));
                }
            }
        }
        Ok(Self { kind, domain })
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.domain.0 && s <= self.domain.1
    }

    /// Evaluate (κ, τ) at `s`. Closed forms for the named families, linear
    /// interpolation for tabulated data.
    pub fn eval(&self, s: f64) -> Result<(f64, f64)> {
        if !self.contains(s) {
            return Err(HelixError::OutOfDomain {
                s,
                lo: self.domain.0,
                hi: self.domain.1,
            });
        }
        Ok(match &self.kind {
            ProfileKind::Tabulated { records } => {
                let i = match records.partition_point(|r| r.0 <= s) {
                    0 => 0,
                    j => (j - 1).min(records.len() - 2),
                };
                let (s0, k0, t0) = records[i];
                let (s1, k1, t1) = records[i + 1];
                let w = ((s - s0) / (s1 - s0)).clamp(0.0, 1.0);
                (k0 + w * (k1 - k0), t0 + w * (t1 - t0))
            }
            ProfileKind::CircularHelix { a, b } => {
                let c2 = a * a + b * b;
                (a / c2, b / c2)
            }
            ProfileKind::ConstantPrecession { w, mu } => {
                ((mu * s).sin() * w, (mu * s).cos() * w)
            }
            ProfileKind::CConstantPrecession { c1, c2, mu, theta0 } => {
                let f = c2 * (mu * s).cos() - c1 * (mu * s).sin();
                let theta = theta0 + c1 / mu * (mu * s).sin() - c2 / mu * ((mu * s).cos() - 1.0);
                (f * theta.cos(), f * theta.sin())
            }
        })
    }

    /// Sample (s, κ, τ) at `n` uniform arc-length values over the domain.
    pub fn sample(&self, n: usize) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let s = linspace(self.domain.0, self.domain.1, n);
        let mut kappa = Vec::with_capacity(n);
        let mut tau = Vec::with_capacity(n);
        for &si in &s {
            let (k, t) = self.eval(si)?;
            kappa.push(k);
            tau.push(t);
        }
        Ok((s, kappa, tau))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    pub fn circle_samples(n: usize, rate: f64) -> CurveSamples {
        let s: Vec<f64> = (0..n).map(|i| rate * 2.0 * PI * i as f64 / (n - 1) as f64).collect();
        let p: Vec<Vector3<f64>> = (0..n)
            .map(|i| {
                let a = 2.0 * PI * i as f64 / (n - 1) as f64;
                Vector3::new(a.cos(), a.sin(), 0.0)
            })
            .collect();
        CurveSamples::new(s, p).unwrap()
    }

    #[test]
    fn unit_circle_is_unit_speed() {
        let c = circle_samples(1000, 1.0);
        let r = validate_unit_speed(&c, DEFAULT_SPEED_TOL).unwrap();
        assert!(r.pass);
        assert!(r.worst_deviation < 1e-5, "worst {}", r.worst_deviation);
    }

    #[test]
    fn doubled_arclength_fails_unit_speed() {
        let c = circle_samples(1000, 2.0);
        let r = validate_unit_speed(&c, DEFAULT_SPEED_TOL).unwrap();
        assert!(!r.pass);
        assert!((r.worst_deviation - 0.5).abs() < 1e-3, "worst {}", r.worst_deviation);
    }

    #[test]
    fn helix_with_s_equals_t_fails() {
        // Oracle: the speed of (cos t, sin t, t) is √2, so claiming s = t
        // overstates by a factor 1/√2; the relative deviation is √2 − 1.
        let n = 500;
        let s: Vec<f64> = (0..n).map(|i| i as f64 * 0.01).collect();
        let p: Vec<Vector3<f64>> = s
            .iter()
            .map(|&t| Vector3::new(t.cos(), t.sin(), t))
            .collect();
        let c = CurveSamples::new(s, p).unwrap();
        let r = validate_unit_speed(&c, DEFAULT_SPEED_TOL).unwrap();
        assert!(!r.pass);
        assert!((r.worst_deviation - (2.0_f64.sqrt() - 1.0)).abs() < 1e-4);
    }

    #[test]
    fn resample_straight_segment() {
        let s: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let p: Vec<Vector3<f64>> = s.iter().map(|&t| Vector3::new(t, 0.0, 0.0)).collect();
        let c = CurveSamples::new(s, p).unwrap();
        let r = resample_arclength(&c, 5).unwrap();
        assert_eq!(r.len(), 5);
        for (i, pt) in r.p.iter().enumerate() {
            assert!((pt.x - 2.25 * i as f64).abs() < 1e-12);
            assert!(pt.y.abs() < 1e-12 && pt.z.abs() < 1e-12);
        }
    }

    #[test]
    fn resample_circle_accuracy() {
        let c = circle_samples(1000, 1.0);
        let r = resample_arclength(&c, 500).unwrap();
        let mut worst = 0.0_f64;
        for (s, pt) in r.s.iter().zip(&r.p) {
            let exact = Vector3::new(s.cos(), s.sin(), 0.0);
            worst = worst.max((pt - exact).norm());
        }
        assert!(worst < 1e-6, "worst {worst}");
    }

    #[test]
    fn resample_rejects_small_n() {
        let c = circle_samples(100, 1.0);
        assert!(matches!(
            resample_arclength(&c, 4),
            Err(HelixError::InvalidArgument(_))
        ));
    }

    #[test]
    fn resample_idempotent_on_uniform_input() {
        let c = circle_samples(400, 1.0);
        let once = resample_arclength(&c, 400).unwrap();
        let twice = resample_arclength(&once, 400).unwrap();
        for (a, b) in once.p.iter().zip(&twice.p) {
            assert!((a - b).norm() <= 1e-12);
        }
    }

    #[test]
    fn eval_constant_precession() {
        let p = IntrinsicProfile::new(
            ProfileKind::ConstantPrecession { w: 1.0, mu: 0.5 },
            (0.1, 2.0 * PI - 0.1),
        )
        .unwrap();
        let (k, t) = p.eval(PI).unwrap();
        assert!((k - 1.0).abs() < 1e-15);
        assert!(t.abs() < 1e-15);
    }

    #[test]
    fn eval_circular_helix() {
        let p = IntrinsicProfile::new(ProfileKind::CircularHelix { a: 1.0, b: 0.0 }, (0.0, 10.0))
            .unwrap();
        assert_eq!(p.eval(3.0).unwrap(), (1.0, 0.0));
        // Oracle: κ = a/(a²+b²), τ = b/(a²+b²).
        let p = IntrinsicProfile::new(ProfileKind::CircularHelix { a: 3.0, b: 4.0 }, (0.0, 10.0))
            .unwrap();
        let (k, t) = p.eval(1.0).unwrap();
        assert!((k - 3.0 / 25.0).abs() < 1e-15);
        assert!((t - 4.0 / 25.0).abs() < 1e-15);
    }

    #[test]
    fn eval_outside_domain_errors() {
        let p = IntrinsicProfile::new(ProfileKind::CircularHelix { a: 1.0, b: 1.0 }, (0.0, 1.0))
            .unwrap();
        assert!(matches!(p.eval(2.0), Err(HelixError::OutOfDomain { .. })));
    }

    #[test]
    fn tabulated_exact_at_knots() {
        let records = vec![(0.0, 1.0, 0.5), (1.0, 2.0, 0.25), (2.0, 1.5, 0.0)];
        let p = IntrinsicProfile::new(ProfileKind::Tabulated { records: records.clone() }, (0.0, 2.0))
            .unwrap();
        for (s, k, t) in records {
            let (ke, te) = p.eval(s).unwrap();
            assert_eq!((ke, te), (k, t));
        }
    }
}
