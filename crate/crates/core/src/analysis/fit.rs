use crate::error::AnalysisError;

/// Least-squares line through `(ln h, ln err)`; returns `(slope, intercept)`.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> Result<(f64, f64), AnalysisError> {
    if points.len() < 3 {
        return Err(AnalysisError::TooFewPoints(points.len()));
    }
    if let Some(&(h, err)) = points.iter().find(|(h, e)| !(*h > 0.0 && *e > 0.0)) {
        return Err(AnalysisError::NonPositive { h, err });
    }
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), (h, e)| (sx + h.ln(), sy + e.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (sxy, sxx) = points.iter().fold((0.0, 0.0), |(sxy, sxx), (h, e)| {
        let dx = h.ln() - mx;
        (sxy + dx * (e.ln() - my), sxx + dx * dx)
    });
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

#[cfg(test)]
mod tests {
    use super::*;

    const HS: [f64; 4] = [0.4, 0.2, 0.1, 0.05];

    #[test]
    fn exact_power_laws() {
        let pts: Vec<_> = HS.iter().map(|&h| (h, h)).collect();
        let (s, c) = fit_loglog_slope(&pts).unwrap();
        assert!((s - 1.0).abs() < 1e-12 && c.abs() < 1e-12);
        let pts: Vec<_> = HS.iter().map(|&h| (h, h * h)).collect();
        assert!((fit_loglog_slope(&pts).unwrap().0 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cubic_with_prefactor() {
        let eps = 0.05;
        let pts: Vec<_> = HS.iter().map(|&h| (h, 0.25 * h.powi(3) / eps)).collect();
        let (s, c) = fit_loglog_slope(&pts).unwrap();
        assert!((s - 3.0).abs() < 1e-12);
        assert!((c - (0.25f64 / eps).ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            fit_loglog_slope(&[(0.1, 1.0), (0.2, 2.0)]),
            Err(AnalysisError::TooFewPoints(2))
        );
        assert!(matches!(
            fit_loglog_slope(&[(0.1, 1.0), (0.2, 0.0), (0.3, 1.0)]),
            Err(AnalysisError::NonPositive { .. })
        ));
    }
}
