//! One-step methods assembled from component and group flows.
//!
//! Composition methods follow the written order `Φ⁽¹⁾ ∘ ⋯ ∘ Φ⁽ᵈ⁾`: the
//! rightmost group in `order` acts first, so for Van der Pol (`order = [x₁,
//! x₂]`) the x₂ update happens before x₁, and for Hodgkin–Huxley the gating
//! variables move before the voltage.

use crate::error::{MethodError, StepError};
use crate::flow::FlowKind;
use crate::system::{advance_members, is_partition, CondLinSystem, State};

/// How the flows of a [`Method`] are combined within a step.
#[derive(Debug, Clone, PartialEq)]
pub enum Scheme {
    /// Every component advanced in parallel from the incoming state.
    EulerType,
    /// Exponential Euler half step to a midpoint, then a full exact step from
    /// the start using midpoint coefficients.
    ExponentialMidpoint,
    /// `Φ_h^(order[0]) ∘ ⋯ ∘ Φ_h^(order[k-1])`.
    NonSymmetric { order: Vec<usize> },
    /// `Φ*_{h/2}^(order[k-1]) ∘ ⋯ ∘ Φ*_{h/2}^(order[0]) ∘ Φ_{h/2}^(order[0]) ∘ ⋯ ∘ Φ_{h/2}^(order[k-1])`.
    Symmetric { order: Vec<usize> },
    /// Euler-type across blocks, composition within each block. Each block
    /// lists group indices in written order.
    Hybrid {
        blocks: Vec<Vec<usize>>,
        symmetric: bool,
    },
}

/// A fully specified one-step integrator for a particular system shape.
#[derive(Debug, Clone)]
pub struct Method {
    id: String,
    scheme: Scheme,
    kinds: Vec<FlowKind>,
    adjoints: Vec<FlowKind>,
    all: Vec<usize>,
}

impl PartialEq for Method {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id && self.scheme == other.scheme && self.kinds == other.kinds
    }
}

fn per_group_to_component<S: CondLinSystem + ?Sized>(
    sys: &S,
    group_kinds: &[FlowKind],
) -> Result<Vec<FlowKind>, MethodError> {
    let groups = sys.groups();
    if group_kinds.len() != groups.len() {
        return Err(MethodError::KindCount {
            expected: groups.len(),
            got: group_kinds.len(),
        });
    }
    let mut kinds = vec![FlowKind::Exact; sys.dim()];
    for (g, kind) in groups.iter().zip(group_kinds) {
        for &i in g {
            kinds[i] = kind.clone();
        }
    }
    Ok(kinds)
}

fn is_permutation(order: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    order.len() == n
        && order.iter().all(|&g| {
            g < n && !std::mem::replace(&mut seen[g], true)
        })
}

impl Method {
    fn build(id: &str, scheme: Scheme, kinds: Vec<FlowKind>) -> Self {
        let adjoints = kinds.iter().map(FlowKind::adjoint).collect();
        let all = (0..kinds.len()).collect();
        Self {
            id: id.to_owned(),
            scheme,
            kinds,
            adjoints,
            all,
        }
    }

    /// Euler-type method with one flow kind per component.
    pub fn euler_type<S: CondLinSystem + ?Sized>(
        sys: &S,
        kinds: Vec<FlowKind>,
    ) -> Result<Self, MethodError> {
        if kinds.len() != sys.dim() {
            return Err(MethodError::KindCount {
                expected: sys.dim(),
                got: kinds.len(),
            });
        }
        Ok(Self::build("euler-type", Scheme::EulerType, kinds))
    }

    pub fn euler<S: CondLinSystem + ?Sized>(sys: &S) -> Self {
        Self::build("euler", Scheme::EulerType, vec![FlowKind::ForwardEuler; sys.dim()])
    }

    pub fn exp_euler<S: CondLinSystem + ?Sized>(sys: &S) -> Self {
        Self::build("exp-euler", Scheme::EulerType, vec![FlowKind::Exact; sys.dim()])
    }

    pub fn si_euler<S: CondLinSystem + ?Sized>(sys: &S) -> Self {
        Self::build("si-euler", Scheme::EulerType, vec![FlowKind::BackwardEuler; sys.dim()])
    }

    pub fn exp_midpoint<S: CondLinSystem + ?Sized>(sys: &S) -> Self {
        Self::build("exp-midpoint", Scheme::ExponentialMidpoint, vec![FlowKind::Exact; sys.dim()])
    }

    /// Non-symmetric composition over `order` (group indices, written
    /// order) with one flow kind per group.
    pub fn non_symmetric<S: CondLinSystem + ?Sized>(
        sys: &S,
        order: Vec<usize>,
        group_kinds: &[FlowKind],
    ) -> Result<Self, MethodError> {
        let kinds = per_group_to_component(sys, group_kinds)?;
        if !is_permutation(&order, sys.groups().len()) {
            return Err(MethodError::NotAPermutation {
                groups: sys.groups().len(),
            });
        }
        Ok(Self::build("non-symmetric", Scheme::NonSymmetric { order }, kinds))
    }

    pub fn symmetric<S: CondLinSystem + ?Sized>(
        sys: &S,
        order: Vec<usize>,
        group_kinds: &[FlowKind],
    ) -> Result<Self, MethodError> {
        let kinds = per_group_to_component(sys, group_kinds)?;
        if !is_permutation(&order, sys.groups().len()) {
            return Err(MethodError::NotAPermutation {
                groups: sys.groups().len(),
            });
        }
        Ok(Self::build("symmetric", Scheme::Symmetric { order }, kinds))
    }

    fn default_order<S: CondLinSystem + ?Sized>(sys: &S) -> Vec<usize> {
        (0..sys.groups().len()).collect()
    }

    /// Non-symmetric splitting with exact flows.
    pub fn lie_trotter<S: CondLinSystem + ?Sized>(sys: &S) -> Self {
        let kinds = vec![FlowKind::Exact; sys.dim()];
        Self::build(
            "lie-trotter",
            Scheme::NonSymmetric {
                order: Self::default_order(sys),
            },
            kinds,
        )
    }

    /// Symmetric splitting with exact flows.
    pub fn strang<S: CondLinSystem + ?Sized>(sys: &S) -> Self {
        let kinds = vec![FlowKind::Exact; sys.dim()];
        Self::build(
            "strang",
            Scheme::Symmetric {
                order: Self::default_order(sys),
            },
            kinds,
        )
    }

    fn euler_backward_kinds<S: CondLinSystem + ?Sized>(sys: &S) -> Vec<FlowKind> {
        let group_kinds: Vec<FlowKind> = (0..sys.groups().len())
            .map(|g| {
                if g == 0 {
                    FlowKind::ForwardEuler
                } else {
                    FlowKind::BackwardEuler
                }
            })
            .collect();
        per_group_to_component(sys, &group_kinds).expect("one kind per group")
    }

    /// Non-symmetric composition with forward Euler on the first group and
    /// backward Euler on the rest.
    pub fn symplectic_euler<S: CondLinSystem + ?Sized>(sys: &S) -> Self {
        Self::build(
            "symplectic-euler",
            Scheme::NonSymmetric {
                order: Self::default_order(sys),
            },
            Self::euler_backward_kinds(sys),
        )
    }

    /// Symmetric counterpart of [`symplectic_euler`](Self::symplectic_euler).
    pub fn stormer_verlet<S: CondLinSystem + ?Sized>(sys: &S) -> Self {
        Self::build(
            "stormer-verlet",
            Scheme::Symmetric {
                order: Self::default_order(sys),
            },
            Self::euler_backward_kinds(sys),
        )
    }

    /// Partitioned method: `blocks` split the group indices, each block is
    /// composed internally (symmetrically if `symmetric`), and blocks are
    /// combined Euler-type.
    pub fn hybrid<S: CondLinSystem + ?Sized>(
        sys: &S,
        blocks: Vec<Vec<usize>>,
        symmetric: bool,
        group_kinds: &[FlowKind],
    ) -> Result<Self, MethodError> {
        let kinds = per_group_to_component(sys, group_kinds)?;
        if !is_partition(&blocks, sys.groups().len()) {
            return Err(MethodError::BadPartition);
        }
        Ok(Self::build("hybrid", Scheme::Hybrid { blocks, symmetric }, kinds))
    }

    /// Renames the method; the id ends up in trajectories and output files.
    pub fn with_id(mut self, id: &str) -> Self {
        self.id = id.to_owned();
        self
    }

    /// The non-symmetric composition whose step at `h` inverts this one's
    /// step at `-h`: reversed group order with adjoint flow kinds.
    ///
    /// Returns `None` for schemes other than [`Scheme::NonSymmetric`].
    pub fn adjoint_composition(&self) -> Option<Self> {
        match &self.scheme {
            Scheme::NonSymmetric { order } => {
                let order = order.iter().rev().copied().collect();
                Some(Self::build(
                    &format!("{}*", self.id),
                    Scheme::NonSymmetric { order },
                    self.adjoints.clone(),
                ))
            }
            _ => None,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    /// Flow kind per component.
    pub fn kinds(&self) -> &[FlowKind] {
        &self.kinds
    }

    pub fn is_symmetric(&self) -> bool {
        match &self.scheme {
            Scheme::Symmetric { .. } => true,
            Scheme::Hybrid { symmetric, .. } => *symmetric,
            _ => false,
        }
    }

    /// Checks that the method was built for a system of this shape.
    pub fn validate<S: CondLinSystem + ?Sized>(&self, sys: &S) -> Result<(), MethodError> {
        if self.kinds.len() != sys.dim() {
            return Err(MethodError::KindCount {
                expected: sys.dim(),
                got: self.kinds.len(),
            });
        }
        let n = sys.groups().len();
        match &self.scheme {
            Scheme::EulerType | Scheme::ExponentialMidpoint => Ok(()),
            Scheme::NonSymmetric { order } | Scheme::Symmetric { order } => {
                if is_permutation(order, n) {
                    Ok(())
                } else {
                    Err(MethodError::NotAPermutation { groups: n })
                }
            }
            Scheme::Hybrid { blocks, .. } => {
                if is_partition(blocks, n) {
                    Ok(())
                } else {
                    Err(MethodError::BadPartition)
                }
            }
        }
    }

    /// Advances `x` (at time `t`) by one step of size `h`, in place.
    pub fn step_in_place<S: CondLinSystem + ?Sized>(
        &self,
        sys: &S,
        t: f64,
        x: &mut [f64],
        h: f64,
        scratch: &mut Vec<f64>,
    ) -> Result<(), StepError> {
        match &self.scheme {
            Scheme::EulerType => advance_members(sys, &self.all, t, x, h, |i| &self.kinds[i]),
            Scheme::ExponentialMidpoint => {
                exp_midpoint_in_place(sys, &self.all, t, x, h, scratch)
            }
            Scheme::NonSymmetric { order } => self.non_symmetric_pass(sys, order, t, x, h),
            Scheme::Symmetric { order } => self.symmetric_pass(sys, order, t, x, h),
            Scheme::Hybrid { blocks, symmetric } => {
                scratch.clear();
                scratch.extend_from_slice(x);
                let start: &[f64] = scratch;
                let mut work = vec![0.0; x.len()];
                for block in blocks {
                    work.copy_from_slice(start);
                    if *symmetric {
                        self.symmetric_pass(sys, block, t, &mut work, h)?;
                    } else {
                        self.non_symmetric_pass(sys, block, t, &mut work, h)?;
                    }
                    for &g in block {
                        for &i in &sys.groups()[g] {
                            x[i] = work[i];
                        }
                    }
                }
                Ok(())
            }
        }
    }

    fn non_symmetric_pass<S: CondLinSystem + ?Sized>(
        &self,
        sys: &S,
        order: &[usize],
        t: f64,
        x: &mut [f64],
        h: f64,
    ) -> Result<(), StepError> {
        let groups = sys.groups();
        for &g in order.iter().rev() {
            advance_members(sys, &groups[g], t, x, h, |i| &self.kinds[i])?;
        }
        Ok(())
    }

    fn symmetric_pass<S: CondLinSystem + ?Sized>(
        &self,
        sys: &S,
        order: &[usize],
        t: f64,
        x: &mut [f64],
        h: f64,
    ) -> Result<(), StepError> {
        let groups = sys.groups();
        let half = 0.5 * h;
        for &g in order.iter().rev() {
            advance_members(sys, &groups[g], t, x, half, |i| &self.kinds[i])?;
        }
        let t_mid = t + half;
        for &g in order {
            advance_members(sys, &groups[g], t_mid, x, half, |i| &self.adjoints[i])?;
        }
        Ok(())
    }

    /// One step from `s`; the result carries time `s.t + h`.
    pub fn step<S: CondLinSystem + ?Sized>(
        &self,
        sys: &S,
        s: &State,
        h: f64,
    ) -> Result<State, StepError> {
        let mut x = s.x.clone();
        let mut scratch = Vec::new();
        self.step_in_place(sys, s.t, &mut x, h, &mut scratch)?;
        Ok(State::new(s.t + h, x))
    }
}

/// Exponential Euler half step to the midpoint, then a full exact step from
/// `x` with coefficients frozen at the midpoint.
fn exp_midpoint_in_place<S: CondLinSystem + ?Sized>(
    sys: &S,
    all: &[usize],
    t: f64,
    x: &mut [f64],
    h: f64,
    scratch: &mut Vec<f64>,
) -> Result<(), StepError> {
    let exact = FlowKind::Exact;
    scratch.clear();
    scratch.extend_from_slice(x);
    advance_members(sys, all, t, scratch, 0.5 * h, |_| &exact)?;
    let mid: &[f64] = scratch;
    for &i in all {
        let c = sys.coeffs(t + 0.5 * h, mid, i);
        if !c.is_finite() {
            return Err(StepError::NonFinite { component: i });
        }
        let next = exact
            .apply(x[i], c.a, c.b, h)
            .map_err(|source| StepError::Flow {
                component: i,
                source,
            })?;
        if !next.is_finite() {
            return Err(StepError::NonFinite { component: i });
        }
        x[i] = next;
    }
    Ok(())
}

fn expect_scheme(m: &Method, ok: bool, name: &str) {
    assert!(ok, "{name} called with a {:?} method", m.scheme());
}

/// Euler-type step: every component advanced from `s` in parallel.
pub fn euler_type_step<S: CondLinSystem + ?Sized>(
    sys: &S,
    m: &Method,
    s: &State,
    h: f64,
) -> Result<State, StepError> {
    expect_scheme(m, matches!(m.scheme, Scheme::EulerType), "euler_type_step");
    m.step(sys, s, h)
}

/// Exponential midpoint step.
pub fn exp_midpoint_step<S: CondLinSystem + ?Sized>(
    sys: &S,
    s: &State,
    h: f64,
) -> Result<State, StepError> {
    let mut x = s.x.clone();
    let mut scratch = Vec::new();
    let all: Vec<usize> = (0..x.len()).collect();
    exp_midpoint_in_place(sys, &all, s.t, &mut x, h, &mut scratch)?;
    Ok(State::new(s.t + h, x))
}

pub fn nonsym_composition_step<S: CondLinSystem + ?Sized>(
    sys: &S,
    m: &Method,
    s: &State,
    h: f64,
) -> Result<State, StepError> {
    expect_scheme(
        m,
        matches!(m.scheme, Scheme::NonSymmetric { .. }),
        "nonsym_composition_step",
    );
    m.step(sys, s, h)
}

pub fn sym_composition_step<S: CondLinSystem + ?Sized>(
    sys: &S,
    m: &Method,
    s: &State,
    h: f64,
) -> Result<State, StepError> {
    expect_scheme(
        m,
        matches!(m.scheme, Scheme::Symmetric { .. }),
        "sym_composition_step",
    );
    m.step(sys, s, h)
}

pub fn hybrid_step<S: CondLinSystem + ?Sized>(
    sys: &S,
    m: &Method,
    s: &State,
    h: f64,
) -> Result<State, StepError> {
    expect_scheme(m, matches!(m.scheme, Scheme::Hybrid { .. }), "hybrid_step");
    m.step(sys, s, h)
}
