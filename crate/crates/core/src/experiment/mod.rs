//! Experiment runner behind the `condlin` binary: integrates the built-in
//! models over method and step-size sweeps and writes CSV tables plus a JSON
//! manifest.
//!
//! Every run is deterministic, so rerunning a spec reproduces its tables
//! byte for byte.

mod ids;
mod output;
mod spec;

use std::path::{Path, PathBuf};

pub use ids::{ExperimentId, MethodId, ModelId};
pub use output::{write_trajectory_csv, Manifest, RunRecord};
pub use spec::{ExperimentSpec, ProtocolSpec};

use crate::analysis::{
    average_radius, count_spikes, fit_loglog_slope, jump_returns, JumpReturns, SpikeOptions,
    EXACT_RADIUS,
};
use crate::error::{AnalysisError, ExperimentError};
use crate::integrators::{
    grid_step, integrate_with, reference_integrate_with, step_count, IntegrateOptions, Trajectory,
};
use crate::models::{
    hh_system, reduced_integrate, vdp_system, voltage_envelope, CurrentProtocol, HhParams,
    VdpParams,
};
use crate::system::{CondLinSystem, State};
use output::{ensure_dir, num, opt_num, step_tag, Table};

/// Fraction of a Van der Pol run ignored when averaging the radius.
pub const RADIUS_DISCARD_FRACTION: f64 = 0.5;
/// Reference trajectories are written every this many time units.
pub const REFERENCE_OUTPUT_SPACING: f64 = 0.01;
/// `vdp-jumps` doubles its horizon until at least this many jump events
/// are detected.
pub const MIN_JUMP_EVENTS: usize = 6;
const MAX_HORIZON_DOUBLINGS: u32 = 7;
/// Jump detection runs keep at most this many samples per trajectory.
const MAX_JUMP_SAMPLES: usize = 2_000_000;

/// Files produced by [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub experiment: ExperimentId,
    pub manifest: PathBuf,
    pub tables: Vec<PathBuf>,
    pub trajectories: Vec<PathBuf>,
}

struct Ctx<'a> {
    spec: &'a ExperimentSpec,
    runs: Vec<RunRecord>,
    tables: Vec<String>,
}

impl Ctx<'_> {
    fn dir(&self) -> &Path {
        &self.spec.out_dir
    }

    /// Records a finished integration and writes its trajectory if asked to.
    fn record(
        &mut self,
        traj: &Trajectory,
        t_end: f64,
        initial: &[f64],
        i_on: Option<f64>,
        tag: &str,
    ) -> Result<(), ExperimentError> {
        let trajectory = if self.spec.write_trajectories {
            let name = format!(
                "{}_{}{}_{}.csv",
                self.spec.experiment,
                tag,
                traj.method_id,
                step_tag(traj.step)
            );
            write_trajectory_csv(traj, &self.dir().join(&name))?;
            Some(name)
        } else {
            None
        };
        let epsilon = (traj.model_id == "vdp").then_some(self.spec.epsilon);
        self.runs.push(RunRecord {
            model: traj.model_id.clone(),
            method: traj.method_id.clone(),
            h: traj.step,
            t_end,
            initial: initial.to_vec(),
            epsilon,
            i_on,
            stride: traj.stride,
            n_steps: traj.n_steps,
            diverged_at: traj.diverged_at,
            trajectory,
        });
        Ok(())
    }

    fn table(&mut self, name: &str, table: &Table) -> Result<(), ExperimentError> {
        table.write(&self.dir().join(name))?;
        self.tables.push(name.to_owned());
        Ok(())
    }

    fn summary_name(&self) -> String {
        format!("{}.csv", self.spec.experiment)
    }
}

fn reference_stride(h: f64) -> usize {
    ((REFERENCE_OUTPUT_SPACING / h).round() as usize).max(1)
}

/// Strang at the system's reference step, recorded every
/// [`REFERENCE_OUTPUT_SPACING`].
fn reference_run<S: CondLinSystem + ?Sized>(
    sys: &S,
    s0: &State,
    t_end: f64,
) -> Result<Trajectory, ExperimentError> {
    let h = grid_step(s0.t, t_end, sys.reference_step());
    let opts = IntegrateOptions {
        stride: reference_stride(h),
        ..Default::default()
    };
    Ok(reference_integrate_with(sys, s0, t_end, h, opts)?)
}

/// Runs one experiment and writes its tables, trajectories and manifest
/// into `spec.out_dir`, creating the directory if needed.
///
/// Diverged integrations are reported in the tables, not as errors.
pub fn run(spec: &ExperimentSpec) -> Result<RunReport, ExperimentError> {
    spec.validate()?;
    ensure_dir(&spec.out_dir)?;
    let mut ctx = Ctx {
        spec,
        runs: Vec::new(),
        tables: Vec::new(),
    };
    match spec.experiment {
        ExperimentId::VdpNonstiff | ExperimentId::VdpConvergence => vdp_radius(&mut ctx)?,
        ExperimentId::VdpStiff => vdp_stiff(&mut ctx)?,
        ExperimentId::VdpJumps => vdp_jumps(&mut ctx)?,
        ExperimentId::Hh => hh(&mut ctx)?,
        ExperimentId::HhReduced => hh_reduced(&mut ctx)?,
        ExperimentId::Integrate => integrate_one(&mut ctx)?,
    }
    let manifest = Manifest {
        library_version: env!("CARGO_PKG_VERSION").to_owned(),
        spec: spec.clone(),
        horizon: spec.horizon(),
        runs: ctx.runs,
        tables: ctx.tables,
    };
    let manifest_path = spec.out_dir.join(format!("{}.manifest.json", spec.experiment));
    manifest.write(&manifest_path)?;
    Ok(RunReport {
        experiment: spec.experiment,
        manifest: manifest_path,
        tables: manifest.tables.iter().map(|t| spec.out_dir.join(t)).collect(),
        trajectories: manifest
            .runs
            .iter()
            .filter_map(|r| r.trajectory.as_ref().map(|t| spec.out_dir.join(t)))
            .collect(),
    })
}

fn vdp_setup(spec: &ExperimentSpec) -> (crate::models::VanDerPol, State) {
    (
        vdp_system(VdpParams::new(spec.epsilon)),
        State::new(0.0, spec.initial.clone()),
    )
}

/// `method,h,mean_radius,radius_error`, plus fitted slopes for the
/// convergence study.
fn vdp_radius(ctx: &mut Ctx) -> Result<(), ExperimentError> {
    let spec = ctx.spec;
    let (sys, s0) = vdp_setup(spec);
    let t_end = spec.horizon();
    let mut table = Table::new(&["method", "h", "mean_radius", "radius_error"]);
    let row = |traj: &Trajectory| {
        let mean = average_radius(traj, RADIUS_DISCARD_FRACTION)
            .ok()
            .map(|s| s.mean_radius);
        vec![
            traj.method_id.clone(),
            num(traj.step),
            opt_num(mean),
            opt_num(mean.map(|r| (r - EXACT_RADIUS).abs())),
        ]
    };
    let mut slopes = Table::new(&["method", "slope", "intercept", "n_points"]);
    if spec.reference {
        let traj = reference_run(&sys, &s0, t_end)?;
        table.push(row(&traj));
        ctx.record(&traj, t_end, &s0.x, None, "")?;
    }
    for &m in &spec.methods {
        let method = m.build(&sys)?;
        let mut points = Vec::new();
        for &h in &spec.steps {
            let traj = integrate_with(&sys, &method, &s0, t_end, h, IntegrateOptions::default())?;
            let r = row(&traj);
            if let Ok(err) = r[3].parse::<f64>() {
                points.push((h, err));
            }
            table.push(r);
            ctx.record(&traj, t_end, &s0.x, None, "")?;
        }
        let fit = fit_loglog_slope(&points).ok();
        slopes.push(vec![
            m.to_string(),
            opt_num(fit.map(|f| f.0)),
            opt_num(fit.map(|f| f.1)),
            points.len().to_string(),
        ]);
    }
    let name = ctx.summary_name();
    ctx.table(&name, &table)?;
    if spec.experiment == ExperimentId::VdpConvergence {
        ctx.table("vdp-convergence_slopes.csv", &slopes)?;
    }
    Ok(())
}

/// `method,h,stable,n_steps`; the trajectories are the point.
fn vdp_stiff(ctx: &mut Ctx) -> Result<(), ExperimentError> {
    let spec = ctx.spec;
    let (sys, s0) = vdp_setup(spec);
    let t_end = spec.horizon();
    let mut table = Table::new(&["method", "h", "stable", "n_steps"]);
    let mut runs = Vec::new();
    if spec.reference {
        runs.push(reference_run(&sys, &s0, t_end)?);
    }
    for &m in &spec.methods {
        let method = m.build(&sys)?;
        for &h in &spec.steps {
            runs.push(integrate_with(&sys, &method, &s0, t_end, h, IntegrateOptions::default())?);
        }
    }
    for traj in &runs {
        table.push(vec![
            traj.method_id.clone(),
            num(traj.step),
            (!traj.is_diverged()).to_string(),
            traj.n_steps.to_string(),
        ]);
        ctx.record(traj, t_end, &s0.x, None, "")?;
    }
    let name = ctx.summary_name();
    ctx.table(&name, &table)
}

/// Integrates with `run(t_end, stride)` on a horizon that starts at
/// `t_start` and doubles until [`MIN_JUMP_EVENTS`] jumps are found, the run
/// diverges, or the doubling budget is spent.
fn jump_search<F>(
    t_start: f64,
    h: f64,
    epsilon: f64,
    mut run: F,
) -> Result<(Trajectory, f64, Result<JumpReturns, AnalysisError>), ExperimentError>
where
    F: FnMut(f64, usize) -> Result<Trajectory, ExperimentError>,
{
    let mut t_end = t_start;
    for doubling in 0.. {
        let stride = step_count(0.0, t_end, h).div_ceil(MAX_JUMP_SAMPLES).max(1);
        let traj = run(t_end, stride)?;
        let jumps = jump_returns(&traj, epsilon);
        let enough = jumps.as_ref().is_ok_and(|j| j.len() >= MIN_JUMP_EVENTS);
        if enough || traj.is_diverged() || doubling == MAX_HORIZON_DOUBLINGS {
            return Ok((traj, t_end, jumps));
        }
        t_end *= 2.0;
    }
    unreachable!()
}

/// `method,h,mean_abs_y1,mean_abs_y2,n_events`.
fn vdp_jumps(ctx: &mut Ctx) -> Result<(), ExperimentError> {
    let spec = ctx.spec;
    let (sys, s0) = vdp_setup(spec);
    let t_start = spec.horizon();
    let mut table = Table::new(&["method", "h", "mean_abs_y1", "mean_abs_y2", "n_events"]);
    let mut push = |ctx: &mut Ctx, traj: Trajectory, t_end: f64, jumps: Result<JumpReturns, _>| {
        let j = jumps.ok();
        table.push(vec![
            traj.method_id.clone(),
            num(traj.step),
            opt_num(j.as_ref().map(|j| j.mean_abs_y1)),
            opt_num(j.as_ref().map(|j| j.mean_abs_y2)),
            j.as_ref().map_or(0, JumpReturns::len).to_string(),
        ]);
        ctx.record(&traj, t_end, &s0.x, None, "")
    };
    if spec.reference {
        let h_ref = sys.reference_step();
        let (traj, t_end, jumps) = jump_search(t_start, h_ref, spec.epsilon, |t_end, stride| {
            let h = grid_step(0.0, t_end, h_ref);
            let opts = IntegrateOptions {
                stride,
                ..Default::default()
            };
            Ok(reference_integrate_with(&sys, &s0, t_end, h, opts)?)
        })?;
        push(ctx, traj, t_end, jumps)?;
    }
    for &m in &spec.methods {
        let method = m.build(&sys)?;
        for &h in &spec.steps {
            let (traj, t_end, jumps) = jump_search(t_start, h, spec.epsilon, |t_end, stride| {
                let opts = IntegrateOptions {
                    stride,
                    ..Default::default()
                };
                Ok(integrate_with(&sys, &method, &s0, t_end, h, opts)?)
            })?;
            push(ctx, traj, t_end, jumps)?;
        }
    }
    let name = ctx.summary_name();
    ctx.table(&name, &table)
}

/// Stable means no divergence and a voltage that never left the interval
/// the exact solution is confined to.
fn hh_stable(traj: &Trajectory, p: &HhParams, proto: &CurrentProtocol, v0: f64) -> bool {
    let (lo, hi) = voltage_envelope(p, proto, v0);
    !traj.is_diverged() && traj.component(0).all(|v| (lo..=hi).contains(&v))
}

/// Spike columns; counts are left empty only for diverged runs.
fn spike_cells(traj: &Trajectory, stable: bool) -> [String; 3] {
    let train = count_spikes(traj, &SpikeOptions::default()).ok();
    [
        train.as_ref().map(|s| s.count().to_string()).unwrap_or_default(),
        opt_num(train.as_ref().and_then(|s| s.mean_amplitude())),
        stable.to_string(),
    ]
}

/// `method,h,spike_count,mean_amplitude,stable`.
fn hh(ctx: &mut Ctx) -> Result<(), ExperimentError> {
    let spec = ctx.spec;
    let p = HhParams::default();
    let proto = spec.protocol.to_protocol()?;
    let sys = hh_system(p, proto);
    let s0 = State::new(0.0, spec.initial.clone());
    let t_end = spec.horizon();
    let mut runs = Vec::new();
    if spec.reference {
        runs.push(reference_run(&sys, &s0, t_end)?);
    }
    for &m in &spec.methods {
        let method = m.build(&sys)?;
        for &h in &spec.steps {
            runs.push(integrate_with(&sys, &method, &s0, t_end, h, IntegrateOptions::default())?);
        }
    }
    let mut table = Table::new(&["method", "h", "spike_count", "mean_amplitude", "stable"]);
    for traj in &runs {
        let stable = hh_stable(traj, &p, &proto, s0.x[0]);
        let mut row = vec![traj.method_id.clone(), num(traj.step)];
        row.extend(spike_cells(traj, stable));
        table.push(row);
        ctx.record(traj, t_end, &s0.x, Some(proto.i_on), "")?;
    }
    let name = ctx.summary_name();
    ctx.table(&name, &table)
}

/// `model,i_on,method,h,spike_count,mean_amplitude,stable` for the full
/// model (reference integrator) and the `m = m∞(V)` reduction.
fn hh_reduced(ctx: &mut Ctx) -> Result<(), ExperimentError> {
    let spec = ctx.spec;
    let p = HhParams::default();
    let t_end = spec.horizon();
    let full0 = State::new(0.0, spec.initial.clone());
    let reduced0 = State::new(0.0, vec![full0.x[0], full0.x[1], full0.x[3]]);
    let mut table = Table::new(&[
        "model",
        "i_on",
        "method",
        "h",
        "spike_count",
        "mean_amplitude",
        "stable",
    ]);
    for &i_on in &spec.currents {
        let proto = ProtocolSpec { i_on, ..spec.protocol }.to_protocol()?;
        let tag = format!("i{}_", num(i_on));
        let mut runs: Vec<(Trajectory, &State)> = Vec::new();
        if spec.reference {
            runs.push((reference_run(&hh_system(p, proto), &full0, t_end)?, &full0));
        }
        for &m in &spec.methods {
            let variant = m.reduced_variant().expect("validated");
            for &h in &spec.steps {
                let opts = IntegrateOptions::default();
                let traj = reduced_integrate(&p, &proto, &reduced0, t_end, h, variant, opts)?;
                runs.push((traj, &reduced0));
            }
        }
        for (traj, s0) in &runs {
            let stable = hh_stable(traj, &p, &proto, s0.x[0]);
            let mut row = vec![
                traj.model_id.clone(),
                num(i_on),
                traj.method_id.clone(),
                num(traj.step),
            ];
            row.extend(spike_cells(traj, stable));
            table.push(row);
            let tag = format!("{}_{tag}", traj.model_id);
            ctx.record(traj, t_end, &s0.x, Some(i_on), &tag)?;
        }
    }
    let name = ctx.summary_name();
    ctx.table(&name, &table)
}

/// A single run: `method,h,stable,n_steps,diverged_at`.
fn integrate_one(ctx: &mut Ctx) -> Result<(), ExperimentError> {
    let spec = ctx.spec;
    let (m, h) = (spec.methods[0], spec.steps[0]);
    let t_end = spec.horizon();
    let s0 = State::new(0.0, spec.initial.clone());
    let (traj, stable, i_on) = match spec.model {
        ModelId::Vdp => {
            let sys = vdp_system(VdpParams::new(spec.epsilon));
            let traj = integrate_with(&sys, &m.build(&sys)?, &s0, t_end, h, Default::default())?;
            let stable = !traj.is_diverged();
            (traj, stable, None)
        }
        ModelId::Hh => {
            let p = HhParams::default();
            let proto = spec.protocol.to_protocol()?;
            let sys = hh_system(p, proto);
            let traj = integrate_with(&sys, &m.build(&sys)?, &s0, t_end, h, Default::default())?;
            let stable = hh_stable(&traj, &p, &proto, s0.x[0]);
            (traj, stable, Some(proto.i_on))
        }
    };
    let mut table = Table::new(&["method", "h", "stable", "n_steps", "diverged_at"]);
    table.push(vec![
        traj.method_id.clone(),
        num(h),
        stable.to_string(),
        traj.n_steps.to_string(),
        traj.diverged_at.map(|d| d.to_string()).unwrap_or_default(),
    ]);
    ctx.record(&traj, t_end, &s0.x, i_on, "")?;
    let name = ctx.summary_name();
    ctx.table(&name, &table)
}

/// The specs behind every figure and table, grouped by output
/// subdirectory.
pub fn reproduction_matrix(out_dir: &Path) -> Vec<(String, Vec<ExperimentSpec>)> {
    use ExperimentId::*;
    let spec = |dir: &str, e: ExperimentId, edit: &dyn Fn(&mut ExperimentSpec)| {
        let mut s = ExperimentSpec::new(e, out_dir.join(dir));
        edit(&mut s);
        s
    };
    let entry = |dir: &str, specs: Vec<ExperimentSpec>| (dir.to_owned(), specs);
    vec![
        entry(
            "fig1_vdp_reference",
            vec![
                spec("fig1_vdp_reference", VdpNonstiff, &|s| {
                    s.methods.clear();
                    s.initial = vec![0.1, 0.0];
                }),
                spec("fig1_vdp_reference", VdpStiff, &|s| {
                    s.methods.clear();
                    s.t_end = Some(400.0);
                }),
            ],
        ),
        entry(
            "fig2_vdp_nonstiff",
            vec![spec("fig2_vdp_nonstiff", VdpNonstiff, &|s| s.reference = false)],
        ),
        entry(
            "fig3_vdp_convergence",
            vec![spec("fig3_vdp_convergence", VdpConvergence, &|_| {})],
        ),
        entry(
            "fig4_vdp_stiff_phase",
            vec![spec("fig4_vdp_stiff_phase", VdpStiff, &|s| {
                s.t_end = Some(200.0);
                s.steps = vec![0.002, 0.005, 0.01];
                s.reference = false;
            })],
        ),
        entry(
            "fig5_vdp_stiff_time",
            vec![spec("fig5_vdp_stiff_time", VdpStiff, &|s| {
                s.t_end = Some(400.0);
                s.steps = vec![0.005, 0.01];
                s.reference = false;
            })],
        ),
        entry(
            "table1_vdp_jumps",
            vec![spec("table1_vdp_jumps", VdpJumps, &|_| {})],
        ),
        entry(
            "fig6_hh_reference",
            vec![spec("fig6_hh_reference", Hh, &|s| s.methods.clear())],
        ),
        entry(
            "fig7_hh_phase",
            vec![spec("fig7_hh_phase", Hh, &|s| s.reference = false)],
        ),
        entry(
            "fig8_hh_time",
            vec![spec("fig8_hh_time", Hh, &|s| s.reference = false)],
        ),
        entry(
            "fig9_hh_spike",
            vec![spec("fig9_hh_spike", Hh, &|s| {
                s.t_end = Some(80.0);
                s.reference = false;
            })],
        ),
        entry(
            "fig10_hh_reduced",
            vec![spec("fig10_hh_reduced", HhReduced, &|_| {})],
        ),
    ]
}

/// Runs the whole [`reproduction_matrix`] under `out_dir`, one thread per
/// subdirectory. Failures are collected; the others still run.
pub fn run_all(out_dir: &Path) -> Result<Vec<RunReport>, ExperimentError> {
    ensure_dir(out_dir)?;
    let matrix = reproduction_matrix(out_dir);
    let results: Vec<(String, Result<Vec<RunReport>, ExperimentError>)> =
        std::thread::scope(|scope| {
            let handles: Vec<_> = matrix
                .iter()
                .map(|(dir, specs)| {
                    (dir, scope.spawn(move || specs.iter().map(run).collect()))
                })
                .collect();
            handles
                .into_iter()
                .map(|(dir, h)| (dir.clone(), h.join().expect("experiment thread panicked")))
                .collect()
        });
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for (dir, res) in results {
        match res {
            Ok(r) => reports.extend(r),
            Err(e) => failures.push(format!("{dir}: {e}")),
        }
    }
    if failures.is_empty() {
        Ok(reports)
    } else {
        Err(ExperimentError::Failed(failures))
    }
}
