use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::spec::ExperimentSpec;
use crate::error::ExperimentError;
use crate::integrators::Trajectory;

/// Shortest decimal that parses back to the same `f64`.
pub(crate) fn num(x: f64) -> String {
    format!("{x}")
}

pub(crate) fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> ExperimentError + '_ {
    move |source| ExperimentError::Io {
        path: path.to_owned(),
        source,
    }
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<(), ExperimentError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

/// A CSV table built in memory and written in one go.
pub(crate) struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: &Path) -> Result<(), ExperimentError> {
        let mut w = BufWriter::new(File::create(path).map_err(io_err(path))?);
        let mut go = || -> std::io::Result<()> {
            writeln!(w, "{}", self.header.join(","))?;
            for row in &self.rows {
                writeln!(w, "{}", row.join(","))?;
            }
            w.flush()
        };
        go().map_err(io_err(path))
    }
}

/// Writes `t,<labels...>` followed by one row per recorded sample.
pub fn write_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<(), ExperimentError> {
    let mut w = BufWriter::new(File::create(path).map_err(io_err(path))?);
    let mut go = || -> std::io::Result<()> {
        write!(w, "t")?;
        for l in traj.labels.iter().take(traj.dim) {
            write!(w, ",{l}")?;
        }
        for i in traj.labels.len()..traj.dim {
            write!(w, ",x{i}")?;
        }
        writeln!(w)?;
        for (t, x) in traj.iter() {
            write!(w, "{t}")?;
            for v in x {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        w.flush()
    };
    go().map_err(io_err(path))
}

/// One integration performed by an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub model: String,
    pub method: String,
    pub h: f64,
    pub t_end: f64,
    pub initial: Vec<f64>,
    /// Only for the Van der Pol model.
    pub epsilon: Option<f64>,
    /// Only for Hodgkin–Huxley runs.
    pub i_on: Option<f64>,
    /// Steps between recorded samples.
    pub stride: usize,
    pub n_steps: usize,
    pub diverged_at: Option<usize>,
    /// File name relative to the output directory.
    pub trajectory: Option<String>,
}

/// Provenance written next to the tables of every experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub library_version: String,
    pub spec: ExperimentSpec,
    /// The resolved default horizon.
    pub horizon: f64,
    pub runs: Vec<RunRecord>,
    /// Table files relative to the output directory.
    pub tables: Vec<String>,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Self, ExperimentError> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub(crate) fn write(&self, path: &Path) -> Result<(), ExperimentError> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text).map_err(io_err(path))
    }
}

/// File name fragment for a step size, e.g. `h0.01`.
pub(crate) fn step_tag(h: f64) -> String {
    format!("h{}", num(h))
}
