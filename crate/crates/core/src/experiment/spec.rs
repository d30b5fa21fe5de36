use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::ids::{ExperimentId, MethodId, ModelId};
use crate::error::ExperimentError;
use crate::models::{hh_rest_state, CurrentProtocol, HhParams};

/// Injected current `i_on` on `[t_on, t_off)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSpec {
    pub i_on: f64,
    pub t_on: f64,
    pub t_off: f64,
}

impl Default for ProtocolSpec {
    fn default() -> Self {
        Self {
            i_on: 10.0,
            t_on: 50.0,
            t_off: 150.0,
        }
    }
}

impl ProtocolSpec {
    pub fn to_protocol(self) -> Result<CurrentProtocol, ExperimentError> {
        Ok(CurrentProtocol::new(self.i_on, self.t_on, self.t_off)?)
    }
}

/// Everything needed to reproduce one experiment. Serialized verbatim into
/// the run manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub experiment: ExperimentId,
    /// Only consulted by `integrate`; the other experiments fix their model.
    pub model: ModelId,
    pub methods: Vec<MethodId>,
    pub steps: Vec<f64>,
    /// Van der Pol parameter.
    pub epsilon: f64,
    pub protocol: ProtocolSpec,
    /// Current amplitudes swept by `hh-reduced`.
    pub currents: Vec<f64>,
    /// `None` selects the experiment default, see [`ExperimentSpec::horizon`].
    pub t_end: Option<f64>,
    /// Initial state; for `hh-reduced` the full `(V, n, m, h)` state whose
    /// `m` is dropped.
    pub initial: Vec<f64>,
    /// Also run the reference integrator.
    pub reference: bool,
    pub write_trajectories: bool,
    pub out_dir: PathBuf,
}

impl ExperimentSpec {
    /// Default settings for `experiment`, writing into `out_dir`.
    pub fn new(experiment: ExperimentId, out_dir: impl Into<PathBuf>) -> Self {
        use ExperimentId::*;
        let model = match experiment {
            Hh | HhReduced => ModelId::Hh,
            _ => ModelId::Vdp,
        };
        let (methods, steps): (Vec<MethodId>, Vec<f64>) = match experiment {
            VdpNonstiff => (MethodId::COMPARED.to_vec(), vec![0.05, 0.2, 0.5]),
            VdpStiff => (MethodId::COMPARED.to_vec(), vec![0.001, 0.005, 0.01]),
            VdpConvergence => (
                MethodId::COMPARED.to_vec(),
                vec![0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.4],
            ),
            VdpJumps => (MethodId::COMPARED.to_vec(), vec![1e-4, 1e-3, 1e-2]),
            Hh => (MethodId::COMPARED.to_vec(), vec![0.1, 0.4, 0.8]),
            HhReduced => (vec![MethodId::ExpEuler], vec![0.01]),
            Integrate => (vec![MethodId::Strang], vec![0.01]),
        };
        let epsilon = match experiment {
            VdpStiff | VdpJumps => 50.0,
            _ => 0.05,
        };
        let mut spec = Self {
            experiment,
            model,
            methods,
            steps,
            epsilon,
            protocol: ProtocolSpec::default(),
            currents: vec![10.0, 6.0, 5.0],
            t_end: None,
            initial: Vec::new(),
            reference: !matches!(experiment, VdpConvergence | Integrate),
            write_trajectories: !matches!(experiment, VdpConvergence | VdpJumps),
            out_dir: out_dir.into(),
        };
        spec.initial = spec.default_initial();
        spec
    }

    /// Switches the model of an `integrate` spec, resetting the initial
    /// state to that model's default.
    pub fn with_model(mut self, model: ModelId) -> Self {
        self.model = model;
        self.initial = self.default_initial();
        self
    }

    fn default_initial(&self) -> Vec<f64> {
        match self.model {
            ModelId::Vdp => vec![1.0, 0.0],
            ModelId::Hh => hh_rest_state(&HhParams::default()).x,
        }
    }

    /// Whether the Van der Pol runs are in the relaxation regime.
    pub fn is_stiff(&self) -> bool {
        self.epsilon.abs() > 1.0
    }

    /// End time: `t_end` if set, otherwise 200 for Hodgkin–Huxley, 40 for
    /// stiff and 400 for non-stiff Van der Pol. For `vdp-jumps` this is the
    /// starting horizon, which is doubled until enough events are seen.
    pub fn horizon(&self) -> f64 {
        self.t_end.unwrap_or(match self.model {
            ModelId::Hh => 200.0,
            ModelId::Vdp if self.is_stiff() => 40.0,
            ModelId::Vdp => 400.0,
        })
    }

    /// Checks the settings before anything is run or written.
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let invalid = |msg: String| Err(ExperimentError::Invalid(msg));
        if self.methods.is_empty() && !self.reference {
            return invalid("no methods selected".into());
        }
        if let Some(&h) = self.steps.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
            return invalid(format!("step size must be positive and finite, got {h}"));
        }
        if !self.methods.is_empty() && self.steps.is_empty() {
            return invalid("no step sizes selected".into());
        }
        let t_end = self.horizon();
        if !(t_end > 0.0 && t_end.is_finite()) {
            return invalid(format!("end time must be positive and finite, got {t_end}"));
        }
        if !self.epsilon.is_finite() {
            return invalid(format!("epsilon must be finite, got {}", self.epsilon));
        }
        let dim = match self.model {
            ModelId::Vdp => 2,
            ModelId::Hh => 4,
        };
        if self.initial.len() != dim {
            return invalid(format!(
                "initial state needs {dim} components, got {}",
                self.initial.len()
            ));
        }
        if self.model == ModelId::Hh {
            self.protocol.to_protocol()?;
        }
        let expected_model = match self.experiment {
            ExperimentId::Hh | ExperimentId::HhReduced => Some(ModelId::Hh),
            ExperimentId::Integrate => None,
            _ => Some(ModelId::Vdp),
        };
        if let Some(m) = expected_model.filter(|m| *m != self.model) {
            return invalid(format!("{} runs the {m} model, not {}", self.experiment, self.model));
        }
        match self.experiment {
            ExperimentId::HhReduced => {
                if let Some(m) = self.methods.iter().find(|m| m.reduced_variant().is_none()) {
                    return Err(ExperimentError::Incompatible {
                        method: m.to_string(),
                        experiment: self.experiment.to_string(),
                    });
                }
                if self.currents.is_empty() {
                    return invalid("no currents selected".into());
                }
            }
            ExperimentId::VdpJumps | ExperimentId::VdpStiff if self.epsilon == 0.0 => {
                return invalid("Liénard coordinates need a nonzero epsilon".into());
            }
            ExperimentId::Integrate if self.methods.len() != 1 || self.steps.len() != 1 => {
                return invalid("integrate takes exactly one method and one step size".into());
            }
            _ => {}
        }
        Ok(())
    }
}
