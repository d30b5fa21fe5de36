//! Conditionally linear systems `ẋᵢ = aᵢ(t, x) xᵢ + bᵢ(t, x)`, where `aᵢ`
//! and `bᵢ` do not depend on `xᵢ`, and the single-component flows every
//! integrator in this crate is assembled from.

use std::fmt;
use std::sync::Arc;

use crate::error::StepError;
use crate::flow::FlowKind;

/// Coefficients `(a, b)` of one component's frozen linear ODE `ẋ = a x + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coeffs {
    pub a: f64,
    pub b: f64,
}

impl Coeffs {
    pub const fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }
}

/// Name and unit of one state component. Documentation only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    pub name: String,
    pub unit: String,
}

impl Label {
    pub fn new(name: &str, unit: &str) -> Self {
        Self {
            name: name.to_owned(),
            unit: unit.to_owned(),
        }
    }
}

/// A system state at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub t: f64,
    pub x: Vec<f64>,
}

impl State {
    pub fn new(t: f64, x: Vec<f64>) -> Self {
        Self { t, x }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.iter().all(|v| v.is_finite())
    }
}

/// A conditionally linear vector field.
///
/// Implementors promise that `coeffs(t, x, i)` ignores `x[i]`, and that
/// [`groups`](Self::groups) partitions `0..dim` into sets of components whose
/// single-component flows commute when everything outside the set is frozen.
/// Neither property is checked while stepping; see
/// [`check_conditional_linearity`] and [`check_group_commutation`].
pub trait CondLinSystem: Send + Sync {
    fn dim(&self) -> usize;

    /// `(aᵢ, bᵢ)` evaluated at `(t, x)`.
    fn coeffs(&self, t: f64, x: &[f64], i: usize) -> Coeffs;

    /// Ordered partition of the components into commuting groups.
    fn groups(&self) -> &[Vec<usize>];

    fn labels(&self) -> &[Label];

    /// Short identifier used in trajectories and output files.
    fn model_id(&self) -> String;

    /// Step size used by [`reference_integrate`](crate::integrators::reference_integrate).
    fn reference_step(&self) -> f64 {
        1e-4
    }

    /// Coefficients for several components at the same point. Override when
    /// members share expensive subexpressions.
    fn coeffs_many(&self, t: f64, x: &[f64], members: &[usize], out: &mut [Coeffs]) {
        for (slot, &i) in out.iter_mut().zip(members) {
            *slot = self.coeffs(t, x, i);
        }
    }
}

impl<S: CondLinSystem + ?Sized> CondLinSystem for &S {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn coeffs(&self, t: f64, x: &[f64], i: usize) -> Coeffs {
        (**self).coeffs(t, x, i)
    }
    fn groups(&self) -> &[Vec<usize>] {
        (**self).groups()
    }
    fn labels(&self) -> &[Label] {
        (**self).labels()
    }
    fn model_id(&self) -> String {
        (**self).model_id()
    }
    fn reference_step(&self) -> f64 {
        (**self).reference_step()
    }
    fn coeffs_many(&self, t: f64, x: &[f64], members: &[usize], out: &mut [Coeffs]) {
        (**self).coeffs_many(t, x, members, out)
    }
}

type CoeffFn = dyn Fn(f64, &[f64], usize) -> Coeffs + Send + Sync;

/// A system defined by a coefficient closure.
#[derive(Clone)]
pub struct FnSystem {
    id: String,
    dim: usize,
    coeffs: Arc<CoeffFn>,
    groups: Vec<Vec<usize>>,
    labels: Vec<Label>,
    reference_step: f64,
}

impl FnSystem {
    /// Builds a system with singleton groups `{0}, {1}, ...` and labels
    /// `x0, x1, ...`.
    pub fn new(
        id: &str,
        dim: usize,
        coeffs: impl Fn(f64, &[f64], usize) -> Coeffs + Send + Sync + 'static,
    ) -> Self {
        assert!(dim > 0, "system dimension must be positive");
        Self {
            id: id.to_owned(),
            dim,
            coeffs: Arc::new(coeffs),
            groups: (0..dim).map(|i| vec![i]).collect(),
            labels: (0..dim).map(|i| Label::new(&format!("x{i}"), "")).collect(),
            reference_step: 1e-4,
        }
    }

    /// Replaces the group partition.
    ///
    /// # Panics
    ///
    /// If `groups` is not a partition of `0..dim`.
    pub fn with_groups(mut self, groups: Vec<Vec<usize>>) -> Self {
        assert!(
            is_partition(&groups, self.dim),
            "groups must partition 0..{}",
            self.dim
        );
        self.groups = groups;
        self
    }

    pub fn with_labels(mut self, labels: Vec<Label>) -> Self {
        assert_eq!(labels.len(), self.dim, "one label per component");
        self.labels = labels;
        self
    }

    pub fn with_reference_step(mut self, h: f64) -> Self {
        self.reference_step = h;
        self
    }
}

impl fmt::Debug for FnSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnSystem")
            .field("id", &self.id)
            .field("dim", &self.dim)
            .field("groups", &self.groups)
            .finish_non_exhaustive()
    }
}

impl CondLinSystem for FnSystem {
    fn dim(&self) -> usize {
        self.dim
    }
    fn coeffs(&self, t: f64, x: &[f64], i: usize) -> Coeffs {
        (self.coeffs)(t, x, i)
    }
    fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }
    fn labels(&self) -> &[Label] {
        &self.labels
    }
    fn model_id(&self) -> String {
        self.id.clone()
    }
    fn reference_step(&self) -> f64 {
        self.reference_step
    }
}

pub(crate) fn is_partition(groups: &[Vec<usize>], dim: usize) -> bool {
    let mut seen = vec![false; dim];
    for &i in groups.iter().flatten() {
        if i >= dim || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    seen.into_iter().all(|s| s) && groups.iter().all(|g| !g.is_empty())
}

/// Advances the `members` of `x` in place by `h`, evaluating all their
/// coefficients at `(t, x)` before any member moves. `kind_of` maps a
/// component index to its flow kind.
pub(crate) fn advance_members<'k, S, K>(
    sys: &S,
    members: &[usize],
    t: f64,
    x: &mut [f64],
    h: f64,
    kind_of: K,
) -> Result<(), StepError>
where
    S: CondLinSystem + ?Sized,
    K: Fn(usize) -> &'k FlowKind,
{
    const INLINE: usize = 8;
    let mut inline = [Coeffs::new(0.0, 0.0); INLINE];
    let mut heap;
    let coeffs: &mut [Coeffs] = if members.len() <= INLINE {
        &mut inline[..members.len()]
    } else {
        heap = vec![Coeffs::new(0.0, 0.0); members.len()];
        &mut heap
    };
    sys.coeffs_many(t, x, members, coeffs);
    for (&i, c) in members.iter().zip(coeffs.iter()) {
        if !c.is_finite() {
            return Err(StepError::NonFinite { component: i });
        }
        let next = kind_of(i)
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

/// Time-`h` flow of component `i` alone, with every other component frozen.
///
/// Coefficients are evaluated at `(s.t, s.x)`. The returned state keeps
/// `s.t`; advancing time is the caller's business.
pub fn component_flow<S: CondLinSystem + ?Sized>(
    sys: &S,
    i: usize,
    s: &State,
    h: f64,
    kind: &FlowKind,
) -> Result<State, StepError> {
    let mut out = s.clone();
    advance_members(sys, &[i], s.t, &mut out.x, h, |_| kind)?;
    Ok(out)
}

/// Time-`h` flow of every member of group `group`, with `kinds[k]` applied
/// to the `k`-th member. Coefficients are taken from the incoming state, so
/// the result does not depend on member order.
pub fn group_flow<S: CondLinSystem + ?Sized>(
    sys: &S,
    group: usize,
    s: &State,
    h: f64,
    kinds: &[FlowKind],
) -> Result<State, StepError> {
    let groups = sys.groups();
    let members = groups.get(group).ok_or(StepError::UnknownGroup {
        group,
        groups: groups.len(),
    })?;
    assert_eq!(
        kinds.len(),
        members.len(),
        "one flow kind per group member"
    );
    let mut out = s.clone();
    advance_members(sys, members, s.t, &mut out.x, h, |i| {
        let k = members.iter().position(|&m| m == i).unwrap();
        &kinds[k]
    })?;
    Ok(out)
}

/// Checks numerically that `(aᵢ, bᵢ)` ignore `xᵢ`.
///
/// For every sample and component, `xᵢ` is perturbed by ±10% and by ±1;
/// returns `false` if any coefficient moves by more than `tol`.
pub fn check_conditional_linearity<S: CondLinSystem + ?Sized>(
    sys: &S,
    samples: &[State],
    tol: f64,
) -> bool {
    assert!(!samples.is_empty(), "need at least one sample state");
    samples.iter().all(|s| {
        (0..sys.dim()).all(|i| {
            let base = sys.coeffs(s.t, &s.x, i);
            let xi = s.x[i];
            [1.1 * xi, 0.9 * xi, xi + 1.0, xi - 1.0].iter().all(|&p| {
                let mut y = s.x.clone();
                y[i] = p;
                let c = sys.coeffs(s.t, &y, i);
                (c.a - base.a).abs() <= tol && (c.b - base.b).abs() <= tol
            })
        })
    })
}

/// Checks numerically that, for every group, applying any two member flows
/// in either order gives the same state (within `tol`, absolute) at each
/// sample and step size.
pub fn check_group_commutation<S: CondLinSystem + ?Sized>(
    sys: &S,
    samples: &[State],
    steps: &[f64],
    tol: f64,
) -> bool {
    let kind = FlowKind::Exact;
    let pairwise = |s: &State, h: f64, i: usize, j: usize| -> Option<bool> {
        let ij = component_flow(sys, j, &component_flow(sys, i, s, h, &kind).ok()?, h, &kind).ok()?;
        let ji = component_flow(sys, i, &component_flow(sys, j, s, h, &kind).ok()?, h, &kind).ok()?;
        Some(ij.x.iter().zip(&ji.x).all(|(a, b)| (a - b).abs() <= tol))
    };
    sys.groups().iter().all(|g| {
        samples.iter().all(|s| {
            steps.iter().all(|&h| {
                g.iter().enumerate().all(|(k, &i)| {
                    g[k + 1..]
                        .iter()
                        .all(|&j| pairwise(s, h, i, j).unwrap_or(false))
                })
            })
        })
    })
}
