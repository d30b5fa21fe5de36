//! Command-line front end for the experiment runner.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser};
use condlin::experiment::{run, run_all, ExperimentId, ExperimentSpec, MethodId, ModelId};

#[derive(Debug, Parser)]
#[command(name = "condlin", version, about = "Run integrator experiments and write CSV tables")]
struct Cli {
    /// Experiment to run.
    #[arg(value_name = "EXPERIMENT", conflicts_with = "experiment")]
    positional: Option<ExperimentId>,

    /// Experiment to run: vdp-nonstiff, vdp-stiff, vdp-convergence,
    /// vdp-jumps, hh, hh-reduced or integrate.
    #[arg(long)]
    experiment: Option<ExperimentId>,

    /// Run every figure and table experiment into subdirectories of --out.
    #[arg(long, conflicts_with_all = ["experiment", "positional"])]
    all: bool,

    /// Method ids, comma separated.
    #[arg(long, value_delimiter = ',')]
    method: Vec<MethodId>,

    /// Step sizes, comma separated.
    #[arg(long = "h", value_delimiter = ',', allow_negative_numbers = true)]
    h: Vec<f64>,

    /// Van der Pol parameter.
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,

    /// Model for `integrate`.
    #[arg(long)]
    model: Option<ModelId>,

    /// Injected current while the stimulus is on [default: 10]. For
    /// hh-reduced this replaces the 10/6/5 sweep.
    #[arg(long, allow_negative_numbers = true)]
    i_on: Option<f64>,

    #[arg(long, default_value_t = 50.0, allow_negative_numbers = true)]
    t_on: f64,

    #[arg(long, default_value_t = 150.0, allow_negative_numbers = true)]
    t_off: f64,

    /// End time; defaults to 200 for Hodgkin–Huxley, 400 for non-stiff and
    /// 40 for stiff Van der Pol.
    #[arg(long, allow_negative_numbers = true)]
    t_end: Option<f64>,

    /// Output directory.
    #[arg(long, env = "CONDLIN_OUT", default_value = "condlin-out")]
    out: PathBuf,

    /// Write trajectory CSVs (default depends on the experiment).
    #[arg(long, action = ArgAction::SetTrue, overrides_with = "no_traj")]
    traj: bool,

    #[arg(long, action = ArgAction::SetTrue, overrides_with = "traj")]
    no_traj: bool,
}

impl Cli {
    fn spec(&self, experiment: ExperimentId) -> ExperimentSpec {
        let mut spec = ExperimentSpec::new(experiment, &self.out);
        if let Some(model) = self.model {
            spec = spec.with_model(model);
        }
        if !self.method.is_empty() {
            spec.methods = self.method.clone();
        }
        if !self.h.is_empty() {
            spec.steps = self.h.clone();
        }
        if let Some(eps) = self.epsilon {
            spec.epsilon = eps;
        }
        if let Some(i_on) = self.i_on {
            spec.protocol.i_on = i_on;
            spec.currents = vec![i_on];
        }
        spec.protocol.t_on = self.t_on;
        spec.protocol.t_off = self.t_off;
        spec.t_end = self.t_end;
        if self.traj {
            spec.write_trajectories = true;
        } else if self.no_traj {
            spec.write_trajectories = false;
        }
        spec
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if cli.all {
        return match run_all(&cli.out) {
            Ok(reports) => {
                for r in reports {
                    println!("{}", r.manifest.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(2)
            }
        };
    }
    let Some(experiment) = cli.experiment.or(cli.positional) else {
        eprintln!("error: name an experiment (or pass --all); see --help");
        return ExitCode::from(1);
    };
    let spec = cli.spec(experiment);
    if let Err(e) = spec.validate() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(&spec) {
        Ok(report) => {
            for t in &report.tables {
                println!("{}", t.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
