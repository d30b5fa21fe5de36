use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ExperimentError;
use crate::flow::FlowKind;
use crate::integrators::Method;
use crate::models::ReducedVariant;
use crate::system::CondLinSystem;

macro_rules! id_enum {
    ($(#[$meta:meta])* $name:ident, $kind:literal, { $($variant:ident => $id:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $id)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $id),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.pad(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = ExperimentError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                $name::ALL
                    .iter()
                    .copied()
                    .find(|v| v.as_str() == s)
                    .ok_or_else(|| ExperimentError::UnknownId {
                        kind: $kind,
                        id: s.to_owned(),
                    })
            }
        }
    };
}

id_enum!(
    ExperimentId, "experiment", {
        VdpNonstiff => "vdp-nonstiff",
        VdpStiff => "vdp-stiff",
        VdpConvergence => "vdp-convergence",
        VdpJumps => "vdp-jumps",
        Hh => "hh",
        HhReduced => "hh-reduced",
        Integrate => "integrate",
    }
);

id_enum!(
    MethodId, "method", {
        Euler => "euler",
        ExpEuler => "exp-euler",
        SiEuler => "si-euler",
        ExpMidpoint => "exp-midpoint",
        LieTrotter => "lie-trotter",
        SymplecticEuler => "symplectic-euler",
        Strang => "strang",
        StormerVerlet => "stormer-verlet",
        Hybrid => "hybrid",
    }
);

id_enum!(
    ModelId, "model", {
        Vdp => "vdp",
        Hh => "hh",
    }
);

impl MethodId {
    /// The eight methods compared throughout the Van der Pol and
    /// Hodgkin–Huxley experiments.
    pub const COMPARED: [MethodId; 8] = [
        MethodId::Euler,
        MethodId::ExpEuler,
        MethodId::SiEuler,
        MethodId::ExpMidpoint,
        MethodId::LieTrotter,
        MethodId::SymplecticEuler,
        MethodId::Strang,
        MethodId::StormerVerlet,
    ];

    /// Builds the integrator for `sys`.
    ///
    /// `hybrid` composes each group symmetrically with exact flows inside
    /// its own block and combines the blocks Euler-type.
    pub fn build<S: CondLinSystem + ?Sized>(self, sys: &S) -> Result<Method, ExperimentError> {
        Ok(match self {
            MethodId::Euler => Method::euler(sys),
            MethodId::ExpEuler => Method::exp_euler(sys),
            MethodId::SiEuler => Method::si_euler(sys),
            MethodId::ExpMidpoint => Method::exp_midpoint(sys),
            MethodId::LieTrotter => Method::lie_trotter(sys),
            MethodId::SymplecticEuler => Method::symplectic_euler(sys),
            MethodId::Strang => Method::strang(sys),
            MethodId::StormerVerlet => Method::stormer_verlet(sys),
            MethodId::Hybrid => {
                let n = sys.groups().len();
                let blocks = (0..n).map(|g| vec![g]).collect();
                Method::hybrid(sys, blocks, true, &vec![FlowKind::Exact; n])?
            }
        })
    }

    /// The matching integrator for the reduced sodium model, if any.
    pub fn reduced_variant(self) -> Option<ReducedVariant> {
        self.as_str().parse().ok()
    }
}
