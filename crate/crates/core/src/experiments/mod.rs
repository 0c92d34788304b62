//! Parameter sweeps over [`RunSpec`] templates.
//!
//! A [`SweepSpec`] is a base spec plus a list of axes; the grid is their
//! cartesian product with the first axis outermost. Each grid point gets its
//! own master seed derived from the sweep seed and the point index, so rows
//! are reproducible independently of how many workers evaluate them.

mod config;
mod csv;
mod presets;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

pub use config::{apply_overrides, parse_config, ConfigOverrides};
pub use csv::{format_g6, write_csv, CSV_HEADER};
pub use presets::{figure_preset, PRESETS};

use crate::adversary::AdversaryKind;
use crate::engine::{convergence_rate, RateEstimate, RunSpec, DEFAULT_RUNS};
use crate::error::{Error, Result};
use crate::rng::{Purpose, StreamTree};
use crate::topology::TopologyKind;

/// A sweepable parameter, named by its dotted path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    P0,
    Side,
    N,
    K,
    Rounds,
    AdversaryFraction,
    AdversaryKind,
    TopologyKind,
}

impl Param {
    pub const ALL: [Param; 8] = [
        Param::P0,
        Param::Side,
        Param::N,
        Param::K,
        Param::Rounds,
        Param::AdversaryFraction,
        Param::AdversaryKind,
        Param::TopologyKind,
    ];

    pub fn path(self) -> &'static str {
        match self {
            Param::P0 => "p0",
            Param::Side => "topology.side",
            Param::N => "topology.n",
            Param::K => "topology.k",
            Param::Rounds => "protocol.rounds",
            Param::AdversaryFraction => "adversary.fraction",
            Param::AdversaryKind => "adversary.kind",
            Param::TopologyKind => "topology.kind",
        }
    }

    /// Parses one axis value for this parameter.
    pub fn parse_value(self, s: &str) -> Result<Value> {
        let s = s.trim();
        let bad = |what: &str| Error::InvalidParameter(format!("{}: `{s}` is not {what}", self.path()));
        match self {
            Param::P0 | Param::AdversaryFraction => s.parse().map(Value::Real).map_err(|_| bad("a number")),
            Param::Side | Param::N | Param::K | Param::Rounds => {
                s.parse().map(Value::Count).map_err(|_| bad("a non-negative integer"))
            }
            Param::AdversaryKind => s.parse().map(Value::Adversary),
            Param::TopologyKind => s.parse().map(Value::Topology),
        }
    }

    /// Writes `value` into `spec`.
    pub fn apply(self, spec: &mut RunSpec, value: &Value) -> Result<()> {
        let mismatch = || Error::InvalidParameter(format!("value {value} does not fit {}", self.path()));
        match (self, *value) {
            (Param::P0, Value::Real(v)) => spec.p0 = v,
            (Param::AdversaryFraction, Value::Real(v)) => spec.adversary.fraction = v,
            (Param::Side, Value::Count(v)) => {
                spec.topology.side = Some(v);
                // Watts-Strogatz sizes follow the side so one axis covers all kinds
                if spec.topology.kind == TopologyKind::WattsStrogatz {
                    spec.topology.n = None;
                }
            }
            (Param::N, Value::Count(v)) => spec.topology.n = Some(v),
            (Param::K, Value::Count(v)) => spec.topology.k = v,
            (Param::Rounds, Value::Count(v)) => spec.protocol.set_rounds(v),
            (Param::AdversaryKind, Value::Adversary(kind)) => spec.adversary.kind = kind,
            (Param::TopologyKind, Value::Topology(kind)) => spec.topology.kind = kind,
            _ => return Err(mismatch()),
        }
        Ok(())
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.path())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Param::ALL.into_iter().find(|p| p.path() == s).ok_or_else(|| {
            let valid: Vec<_> = Param::ALL.iter().map(|p| p.path()).collect();
            Error::InvalidParameter(format!("unknown sweep axis `{s}` (expected one of {})", valid.join(", ")))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Value {
    Real(f64),
    Count(usize),
    Adversary(AdversaryKind),
    Topology(TopologyKind),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Real(v) => write!(f, "{v}"),
            Value::Count(v) => write!(f, "{v}"),
            Value::Adversary(k) => write!(f, "{k}"),
            Value::Topology(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub values: Vec<Value>,
}

impl Axis {
    pub fn new(param: Param, values: Vec<Value>) -> Self {
        Self { param, values }
    }

    pub fn reals(param: Param, values: impl IntoIterator<Item = f64>) -> Self {
        Self::new(param, values.into_iter().map(Value::Real).collect())
    }

    pub fn counts(param: Param, values: impl IntoIterator<Item = usize>) -> Self {
        Self::new(param, values.into_iter().map(Value::Count).collect())
    }
}

/// The default p0 grid: 0.00, 0.05, ..., 1.00.
pub fn p0_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 20.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub name: String,
    pub base: RunSpec,
    pub axes: Vec<Axis>,
    pub runs_per_point: usize,
    pub master_seed: u64,
}

impl SweepSpec {
    pub fn new(name: impl Into<String>, base: RunSpec, axes: Vec<Axis>) -> Self {
        Self { name: name.into(), base, axes, runs_per_point: DEFAULT_RUNS, master_seed: 0 }
    }

    /// Number of grid points.
    pub fn point_count(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    /// Resolved specs in enumeration order (last axis varies fastest).
    pub fn points(&self) -> Result<Vec<RunSpec>> {
        let mut points = vec![self.base.clone()];
        for axis in &self.axes {
            let mut expanded = Vec::with_capacity(points.len() * axis.values.len());
            for point in &points {
                for value in &axis.values {
                    let mut p = point.clone();
                    axis.param.apply(&mut p, value)?;
                    expanded.push(p);
                }
            }
            points = expanded;
        }
        Ok(points)
    }

    /// Checks the axes and every resolved point.
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() {
            return Err(Error::InvalidParameter(format!("sweep `{}` has no axes", self.name)));
        }
        if let Some(axis) = self.axes.iter().find(|a| a.values.is_empty()) {
            return Err(Error::InvalidParameter(format!("axis {} has no values", axis.param)));
        }
        if self.runs_per_point == 0 {
            return Err(Error::InvalidParameter("runs must be >= 1".into()));
        }
        for (index, point) in self.points()?.iter().enumerate() {
            point.validate().map_err(|e| wrap_point(index, point, e))?;
        }
        Ok(())
    }
}

/// Master seed of grid point `index`.
pub fn point_seed(master_seed: u64, index: usize) -> u64 {
    StreamTree::new(master_seed).seed(Purpose::PointSeed, &[index as u64])
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub spec: RunSpec,
    pub estimate: RateEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub name: String,
    pub rows: Vec<SweepRow>,
}

fn describe(spec: &RunSpec) -> String {
    let t = &spec.topology;
    format!(
        "{} on {} n={} p0={} adversary={}:{}",
        spec.protocol.name(),
        t.kind,
        t.node_count().map_or_else(|| "?".into(), |n| n.to_string()),
        spec.p0,
        spec.adversary.kind,
        spec.adversary.fraction
    )
}

fn wrap_point(index: usize, spec: &RunSpec, source: Error) -> Error {
    Error::Point { index, params: describe(spec), source: Box::new(source) }
}

/// Evaluates every grid point on a pool of `workers` threads (0 means one
/// per available core). Output is identical for any worker count.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<SweepResult> {
    spec.validate()?;
    let points = spec.points()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
    let rows = pool.install(|| {
        points
            .into_par_iter()
            .enumerate()
            .map(|(index, point)| {
                let estimate = convergence_rate(&point, spec.runs_per_point, point_seed(spec.master_seed, index))
                    .map_err(|e| wrap_point(index, &point, e))?;
                Ok(SweepRow { spec: point, estimate })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(SweepResult { name: spec.name.clone(), rows })
}
