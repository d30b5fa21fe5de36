use crate::error::ModelError;
use crate::system::{CondLinSystem, Coeffs, Label};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VdpParams {
    pub epsilon: f64,
}

impl VdpParams {
    pub fn new(epsilon: f64) -> Self {
        Self { epsilon }
    }
}

/// Van der Pol oscillator `ẋ₁ = x₂`, `ẋ₂ = ε(1 − x₁²)x₂ − x₁`.
///
/// Groups are `{x₁}, {x₂}`, so compositions update `x₂` first.
#[derive(Debug, Clone)]
pub struct VanDerPol {
    params: VdpParams,
    groups: Vec<Vec<usize>>,
    labels: Vec<Label>,
}

impl VanDerPol {
    pub fn new(params: VdpParams) -> Self {
        Self {
            params,
            groups: vec![vec![0], vec![1]],
            labels: vec![Label::new("x1", ""), Label::new("x2", "")],
        }
    }

    pub fn epsilon(&self) -> f64 {
        self.params.epsilon
    }
}

pub fn vdp_system(p: VdpParams) -> VanDerPol {
    VanDerPol::new(p)
}

impl CondLinSystem for VanDerPol {
    fn dim(&self) -> usize {
        2
    }

    fn coeffs(&self, _t: f64, x: &[f64], i: usize) -> Coeffs {
        match i {
            0 => Coeffs::new(0.0, x[1]),
            1 => Coeffs::new(self.params.epsilon * (1.0 - x[0] * x[0]), -x[0]),
            _ => panic!("Van der Pol has 2 components, asked for {i}"),
        }
    }

    fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    fn labels(&self) -> &[Label] {
        &self.labels
    }

    fn model_id(&self) -> String {
        "vdp".into()
    }

    /// `1e-5` in the stiff regime (`|ε| > 1`), `1e-4` otherwise.
    fn reference_step(&self) -> f64 {
        if self.params.epsilon.abs() > 1.0 {
            1e-5
        } else {
            1e-4
        }
    }
}

/// Liénard coordinates `(x₁, x₁ − x₁³/3 − x₂/ε)`.
pub fn lienard(x: &[f64], epsilon: f64) -> Result<(f64, f64), ModelError> {
    if epsilon == 0.0 {
        return Err(ModelError::ZeroEpsilon);
    }
    let x1 = x[0];
    Ok((x1, x1 - x1 * x1 * x1 / 3.0 - x[1] / epsilon))
}

/// Action-angle coordinates of a planar point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionAngle {
    pub action: f64,
    /// `None` at the origin.
    pub angle: Option<f64>,
}

impl ActionAngle {
    /// `√(2a)`.
    pub fn radius(&self) -> f64 {
        (2.0 * self.action).sqrt()
    }
}

/// `a = (x₁² + x₂²)/2`, `θ = atan2(x₂, x₁)`.
pub fn action_angle(x1: f64, x2: f64) -> ActionAngle {
    let action = 0.5 * (x1 * x1 + x2 * x2);
    let angle = if x1 == 0.0 && x2 == 0.0 {
        None
    } else {
        Some(x2.atan2(x1))
    };
    ActionAngle { action, angle }
}
