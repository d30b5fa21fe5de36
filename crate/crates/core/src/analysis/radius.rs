use crate::error::AnalysisError;
use crate::integrators::{integrate_with, IntegrateOptions, Method, Trajectory};
use crate::models::{vdp_system, VdpParams};
use crate::system::State;

/// Radius of the weakly nonlinear Van der Pol limit cycle.
pub const EXACT_RADIUS: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusStats {
    pub mean_radius: f64,
    /// Time span of the samples that were averaged.
    pub window: (f64, f64),
    pub n_samples: usize,
}

/// Mean of `√(x₁² + x₂²)` over the samples left after dropping the leading
/// `discard_fraction` of them.
pub fn average_radius(
    traj: &Trajectory,
    discard_fraction: f64,
) -> Result<RadiusStats, AnalysisError> {
    if let Some(at) = traj.diverged_at {
        return Err(AnalysisError::Diverged(at));
    }
    if !(0.0..1.0).contains(&discard_fraction) {
        return Err(AnalysisError::BadDiscard(discard_fraction));
    }
    let start = (discard_fraction * traj.len() as f64).floor() as usize;
    let n = traj.len().saturating_sub(start);
    if n == 0 {
        return Err(AnalysisError::NoSamples);
    }
    let sum: f64 = traj.samples().skip(start).map(|x| x[0].hypot(x[1])).sum();
    Ok(RadiusStats {
        mean_radius: sum / n as f64,
        window: (traj.time(start), traj.time(traj.len() - 1)),
        n_samples: n,
    })
}

/// Settings for [`radius_error_curve`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusCurveConfig {
    pub horizon: f64,
    pub discard_fraction: f64,
    pub initial: [f64; 2],
}

impl Default for RadiusCurveConfig {
    fn default() -> Self {
        Self {
            horizon: 400.0,
            discard_fraction: 0.5,
            initial: [1.0, 0.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusErrorPoint {
    pub h: f64,
    /// `None` when the run diverged.
    pub mean_radius: Option<f64>,
}

impl RadiusErrorPoint {
    /// `|mean_radius − 2|`.
    pub fn error(&self) -> Option<f64> {
        self.mean_radius.map(|r| (r - EXACT_RADIUS).abs())
    }
}

/// Average-radius error of a method on the Van der Pol oscillator for each
/// step size. `method` builds the integrator for the given system.
pub fn radius_error_curve<F>(
    method: F,
    epsilon: f64,
    h_list: &[f64],
    cfg: &RadiusCurveConfig,
) -> Vec<RadiusErrorPoint>
where
    F: Fn(&crate::models::VanDerPol) -> Method,
{
    let sys = vdp_system(VdpParams::new(epsilon));
    let m = method(&sys);
    let s0 = State::new(0.0, cfg.initial.to_vec());
    h_list
        .iter()
        .map(|&h| {
            let mean_radius = integrate_with(&sys, &m, &s0, cfg.horizon, h, IntegrateOptions::default())
                .ok()
                .and_then(|traj| average_radius(&traj, cfg.discard_fraction).ok())
                .map(|s| s.mean_radius);
            RadiusErrorPoint { h, mean_radius }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle(radius: f64, phase: f64, n: usize) -> Trajectory {
        let samples: Vec<Vec<f64>> = (0..n)
            .map(|k| {
                let th = phase + k as f64 * 0.37;
                vec![radius * th.cos(), radius * th.sin()]
            })
            .collect();
        Trajectory::from_samples(0.0, 0.1, &samples)
    }

    #[test]
    fn circle_radius() {
        let stats = average_radius(&circle(2.0, 0.0, 1000), 0.5).unwrap();
        assert!((stats.mean_radius - 2.0).abs() < 1e-14);
        assert_eq!(stats.n_samples, 500);
        assert_eq!(stats.window, (50.0, 99.9));
    }

    #[test]
    fn rotation_invariance() {
        let samples: Vec<Vec<f64>> = (0..300)
            .map(|k| {
                let k = k as f64;
                vec![1.0 + (0.3 * k).sin(), 2.0 * (0.11 * k).cos()]
            })
            .collect();
        let base = average_radius(&Trajectory::from_samples(0.0, 1.0, &samples), 0.2).unwrap();
        for angle in [0.3f64, 1.7, -2.2] {
            let (c, s) = (angle.cos(), angle.sin());
            let rotated: Vec<Vec<f64>> = samples
                .iter()
                .map(|x| vec![c * x[0] - s * x[1], s * x[0] + c * x[1]])
                .collect();
            let r = average_radius(&Trajectory::from_samples(0.0, 1.0, &rotated), 0.2).unwrap();
            assert!((r.mean_radius - base.mean_radius).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let t = circle(1.0, 0.0, 10);
        assert_eq!(average_radius(&t, 1.0), Err(AnalysisError::BadDiscard(1.0)));
        let mut d = t.clone();
        d.diverged_at = Some(3);
        assert_eq!(average_radius(&d, 0.5), Err(AnalysisError::Diverged(3)));
    }

    #[test]
    fn euler_error_grows_with_step() {
        let cfg = RadiusCurveConfig::default();
        let pts = radius_error_curve(Method::euler, 0.05, &[0.005, 0.01, 0.02, 0.04], &cfg);
        let errs: Vec<f64> = pts.iter().map(|p| p.error().unwrap()).collect();
        assert!(errs.windows(2).all(|w| w[0] < w[1]), "{errs:?}");
    }
}
