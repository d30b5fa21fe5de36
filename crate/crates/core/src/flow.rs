//! Scalar exact and approximate exponentials.
//!
//! A conditionally linear component `ẋ = a x + b` (with `a`, `b` frozen) has
//! the time-`h` flow
//!
//! ```text
//! x(t + h) = r(h a) x(t) + phi1(h a) h b,     phi1(z) = (r(z) - 1) / z
//! ```
//!
//! where `r = exp` for the exact flow, or the stability function of a
//! Runge–Kutta method for an approximate one. [`FlowKind`] selects `r`.

use std::fmt;
use std::sync::Arc;

use crate::error::FlowError;

/// Below this magnitude a custom `phi1` switches from the difference
/// quotient to its first-order Taylor expansion.
const CUSTOM_SERIES_CUTOFF: f64 = 1e-6;

/// Relative error exponential, `(exp(z) - 1) / z` with `exprel(0) = 1`.
///
/// Overflows to `+inf` for large positive `z`.
pub fn exprel(z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        z.exp_m1() / z
    }
}

/// Stability map of a one-step method on the scalar test equation.
#[derive(Clone)]
pub enum FlowKind {
    /// `r(z) = exp(z)`, the exact flow.
    Exact,
    /// `r(z) = 1 + z`.
    ForwardEuler,
    /// `r(z) = 1 / (1 - z)`.
    BackwardEuler,
    /// A user-supplied approximate exponential. It should satisfy
    /// `r(0) = 1` and `r'(0) = 1`.
    Custom(CustomMap),
}

/// Shared handle to a custom stability function.
#[derive(Clone)]
pub struct CustomMap {
    name: Arc<str>,
    r: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl CustomMap {
    pub fn new(name: impl Into<Arc<str>>, r: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            r: Arc::new(r),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, z: f64) -> f64 {
        (self.r)(z)
    }
}

impl fmt::Debug for CustomMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("CustomMap").field(&self.name).finish()
    }
}

impl fmt::Debug for FlowKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowKind::Exact => f.write_str("Exact"),
            FlowKind::ForwardEuler => f.write_str("ForwardEuler"),
            FlowKind::BackwardEuler => f.write_str("BackwardEuler"),
            FlowKind::Custom(map) => write!(f, "Custom({})", map.name()),
        }
    }
}

/// Structural equality. Two `Custom` kinds compare equal only when they
/// share the same underlying closure.
impl PartialEq for FlowKind {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (FlowKind::Exact, FlowKind::Exact)
            | (FlowKind::ForwardEuler, FlowKind::ForwardEuler)
            | (FlowKind::BackwardEuler, FlowKind::BackwardEuler) => true,
            (FlowKind::Custom(a), FlowKind::Custom(b)) => Arc::ptr_eq(&a.r, &b.r),
            _ => false,
        }
    }
}

impl FlowKind {
    pub fn custom(name: &str, r: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        FlowKind::Custom(CustomMap::new(name, r))
    }

    /// `r(z)`.
    pub fn stability(&self, z: f64) -> Result<f64, FlowError> {
        match self {
            FlowKind::Exact => Ok(z.exp()),
            FlowKind::ForwardEuler => Ok(1.0 + z),
            FlowKind::BackwardEuler => {
                check_pole(z)?;
                Ok(1.0 / (1.0 - z))
            }
            FlowKind::Custom(map) => Ok(map.eval(z)),
        }
    }

    /// `(r(z) - 1) / z`, continuous through `z = 0`.
    pub fn phi1(&self, z: f64) -> Result<f64, FlowError> {
        match self {
            FlowKind::Exact => Ok(exprel(z)),
            FlowKind::ForwardEuler => Ok(1.0),
            FlowKind::BackwardEuler => {
                check_pole(z)?;
                Ok(1.0 / (1.0 - z))
            }
            FlowKind::Custom(map) => {
                if z.abs() < CUSTOM_SERIES_CUTOFF {
                    // r(z) = 1 + z + c z^2 + O(z^3); estimate c from r(±δ).
                    let d = CUSTOM_SERIES_CUTOFF;
                    let c = (map.eval(d) + map.eval(-d) - 2.0) / (2.0 * d * d);
                    Ok(1.0 + c * z)
                } else {
                    Ok((map.eval(z) - 1.0) / z)
                }
            }
        }
    }

    /// The adjoint method's stability function, `r*(z) = 1 / r(-z)`.
    pub fn adjoint(&self) -> FlowKind {
        match self {
            FlowKind::Exact => FlowKind::Exact,
            FlowKind::ForwardEuler => FlowKind::BackwardEuler,
            FlowKind::BackwardEuler => FlowKind::ForwardEuler,
            FlowKind::Custom(map) => {
                let inner = map.clone();
                let name = format!("adjoint({})", map.name());
                FlowKind::custom(&name, move |z| 1.0 / inner.eval(-z))
            }
        }
    }

    /// Applies the scalar affine flow `x ↦ r(h a) x + phi1(h a) h b`.
    pub fn apply(&self, x: f64, a: f64, b: f64, h: f64) -> Result<f64, FlowError> {
        let z = h * a;
        Ok(self.stability(z)? * x + self.phi1(z)? * (h * b))
    }
}

fn check_pole(z: f64) -> Result<(), FlowError> {
    if z == 1.0 {
        Err(FlowError::Pole { z })
    } else {
        Ok(())
    }
}

/// Free-function form of [`FlowKind::stability`].
pub fn stability(kind: &FlowKind, z: f64) -> Result<f64, FlowError> {
    kind.stability(z)
}

/// Free-function form of [`FlowKind::phi1`].
pub fn phi1(kind: &FlowKind, z: f64) -> Result<f64, FlowError> {
    kind.phi1(z)
}

/// Free-function form of [`FlowKind::adjoint`].
pub fn adjoint(kind: &FlowKind) -> FlowKind {
    kind.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exprel_values() {
        assert_eq!(exprel(0.0), 1.0);
        // (e - 1), series-summed in double-double by the test oracle.
        assert!((exprel(1.0) - 1.718281828459045).abs() <= 4.0 * f64::EPSILON);
        // (1 - e^-20) / 20 from mpmath at 50 digits.
        let expected = 0.049_999_999_896_942_32;
        assert!(((exprel(-20.0) - expected) / expected).abs() < 1e-15);
        assert_eq!(exprel(800.0), f64::INFINITY);
    }

    #[test]
    fn stability_values() {
        assert_eq!(FlowKind::ForwardEuler.stability(-2.0).unwrap(), -1.0);
        assert_eq!(FlowKind::BackwardEuler.stability(-1.0).unwrap(), 0.5);
        assert_eq!(FlowKind::Exact.stability(0.0).unwrap(), 1.0);
        assert!(matches!(
            FlowKind::BackwardEuler.stability(1.0),
            Err(FlowError::Pole { .. })
        ));
    }

    #[test]
    fn phi1_values() {
        assert_eq!(FlowKind::ForwardEuler.phi1(-3.0).unwrap(), 1.0);
        assert_eq!(FlowKind::Exact.phi1(0.0).unwrap(), 1.0);
        assert_eq!(FlowKind::BackwardEuler.phi1(-1.0).unwrap(), 0.5);
        assert!(FlowKind::BackwardEuler.phi1(1.0).is_err());
    }

    #[test]
    fn adjoint_pairs() {
        assert_eq!(FlowKind::ForwardEuler.adjoint(), FlowKind::BackwardEuler);
        assert_eq!(FlowKind::BackwardEuler.adjoint(), FlowKind::ForwardEuler);
        assert_eq!(FlowKind::Exact.adjoint(), FlowKind::Exact);
        assert_eq!(
            FlowKind::BackwardEuler.adjoint().adjoint(),
            FlowKind::BackwardEuler
        );
    }

    #[test]
    fn custom_trapezoid() {
        // Trapezoid rule: r(z) = (1 + z/2) / (1 - z/2), its own adjoint.
        let trap = FlowKind::custom("trapezoid", |z| (1.0 + 0.5 * z) / (1.0 - 0.5 * z));
        let adj = trap.adjoint();
        for &z in &[-3.0, -0.5, -1e-9, 0.0, 1e-9, 0.4] {
            let r = trap.stability(z).unwrap();
            let rs = adj.stability(z).unwrap();
            assert!((r - rs).abs() <= 4.0 * f64::EPSILON * r.abs());
        }
        // phi1 of the trapezoid rule is 1 / (1 - z/2); check the series branch.
        for &z in &[0.0, 1e-8, -5e-7, 0.3, -2.0] {
            let expected = 1.0 / (1.0 - 0.5 * z);
            assert!((trap.phi1(z).unwrap() - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn custom_near_zero_is_continuous() {
        let fe = FlowKind::custom("euler", |z| 1.0 + z);
        assert!((fe.phi1(0.0).unwrap() - 1.0).abs() < 1e-9);
        assert!((fe.phi1(2e-6).unwrap() - 1.0).abs() < 1e-9);
        let ex = FlowKind::custom("exp", f64::exp);
        for &z in &[0.0, 5e-7, -9e-7, 1.1e-6] {
            assert!((ex.phi1(z).unwrap() - exprel(z)).abs() < 1e-9);
        }
    }
}
