// Log-log slope of the limit-cycle radius error against the step size.

use condlin::analysis::{fit_loglog_slope, radius_error_curve, RadiusCurveConfig};
use condlin::experiment::MethodId;

fn main() {
    let steps = [0.05, 0.1, 0.2, 0.4];
    let cfg = RadiusCurveConfig::default();
    for m in MethodId::COMPARED {
        let curve = radius_error_curve(|sys| m.build(sys).unwrap(), 0.05, &steps, &cfg);
        let points: Vec<(f64, f64)> = curve
            .iter()
            .filter_map(|p| p.error().map(|e| (p.h, e)))
            .collect();
        match fit_loglog_slope(&points) {
            Ok((slope, _)) => println!("{m:<18} slope {slope:6.3}  ({} points)", points.len()),
            Err(e) => println!("{m:<18} {e}"),
        }
    }
}
