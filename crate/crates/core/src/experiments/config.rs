//! Flat `key = value` sweep files.
//!
//! ```text
//! # FPC on a torus with a third of the nodes Cautious
//! name = torus-cautious
//! protocol = fpc
//! topology = torus
//! side = 15
//! adversary_kind = cautious
//! adversary_fraction = 0.333333
//! runs = 100
//! seed = 7
//! sweep.p0 = 0:1:0.05
//! sweep.topology.side = 7, 15, 32
//! ```
//!
//! Scalar keys mirror the CSV columns. `sweep.<axis>` takes a comma list or
//! an inclusive `start:stop:step` range. Later lines win; `protocol` and
//! `topology` are applied before everything else regardless of position.

use std::str::FromStr;

use super::{Axis, Param, SweepSpec, Value};
use crate::adversary::AdversaryKind;
use crate::cc::CcParams;
use crate::engine::{ConsensusScope, Protocol, RunSpec};
use crate::error::{Error, Result};
use crate::fpc::FpcParams;
use crate::topology::{TopologyKind, TopologySpec};

/// `key = value` settings applied on top of a file or preset, in order.
pub type ConfigOverrides = [(String, String)];

struct Setting<'a> {
    /// 1-based source line; 0 for overrides.
    line: usize,
    key: &'a str,
    value: &'a str,
}

fn fail(line: usize, message: String) -> Error {
    if line == 0 {
        Error::InvalidParameter(message)
    } else {
        Error::Config { line, message }
    }
}

fn parse_num<T: FromStr>(s: &Setting) -> Result<T> {
    s.value.parse().map_err(|_| fail(s.line, format!("{}: cannot parse `{}`", s.key, s.value)))
}

fn parse_with<T: FromStr<Err = Error>>(s: &Setting) -> Result<T> {
    s.value.parse().map_err(|e: Error| fail(s.line, e.to_string()))
}

fn default_base() -> RunSpec {
    RunSpec::new(TopologySpec::torus(15), Protocol::Fpc(FpcParams::default()), 0.5)
}

/// Parses a sweep file. Base defaults: FPC on a side-15 torus, p0 = 0.5,
/// no adversaries, 100 runs, seed 0.
pub fn parse_config(text: &str) -> Result<SweepSpec> {
    let mut settings = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) =
            line.split_once('=').ok_or_else(|| fail(i + 1, format!("expected `key = value`, got `{line}`")))?;
        settings.push(Setting { line: i + 1, key: key.trim(), value: value.trim() });
    }
    let mut spec = SweepSpec::new("custom", default_base(), Vec::new());
    apply(&mut spec, &settings)?;
    Ok(spec)
}

/// Applies `key = value` overrides (same keys as the file format).
pub fn apply_overrides(spec: &mut SweepSpec, overrides: &ConfigOverrides) -> Result<()> {
    let settings: Vec<Setting> =
        overrides.iter().map(|(k, v)| Setting { line: 0, key: k.trim(), value: v.trim() }).collect();
    apply(spec, &settings)
}

fn priority(key: &str) -> u8 {
    match key {
        "protocol" => 0,
        "topology" => 1,
        _ => 2,
    }
}

fn apply(spec: &mut SweepSpec, settings: &[Setting]) -> Result<()> {
    let mut ordered: Vec<&Setting> = settings.iter().collect();
    ordered.sort_by_key(|s| priority(s.key));
    for s in ordered {
        apply_one(spec, s)?;
    }
    Ok(())
}

fn fpc_params<'a>(spec: &'a mut RunSpec, s: &Setting) -> Result<&'a mut FpcParams> {
    match &mut spec.protocol {
        Protocol::Fpc(p) => Ok(p),
        Protocol::Cc(_) => Err(fail(s.line, format!("{} only applies to protocol = fpc", s.key))),
    }
}

fn apply_one(spec: &mut SweepSpec, s: &Setting) -> Result<()> {
    if let Some(path) = s.key.strip_prefix("sweep.") {
        let param: Param = path.parse().map_err(|e: Error| fail(s.line, e.to_string()))?;
        let values = parse_axis_values(param, s.value).map_err(|e| fail(s.line, e.to_string()))?;
        match spec.axes.iter_mut().find(|a| a.param == param) {
            Some(axis) => axis.values = values,
            None => spec.axes.push(Axis::new(param, values)),
        }
        return Ok(());
    }
    let base = &mut spec.base;
    match s.key {
        "name" => spec.name = s.value.to_string(),
        "runs" => spec.runs_per_point = parse_num(s)?,
        "seed" => spec.master_seed = parse_num(s)?,
        "protocol" => {
            let rounds = base.protocol.rounds();
            base.protocol = match s.value {
                "fpc" => match &base.protocol {
                    Protocol::Fpc(p) => Protocol::Fpc(p.clone()),
                    Protocol::Cc(_) => Protocol::Fpc(FpcParams { rounds, ..FpcParams::default() }),
                },
                "cc" => Protocol::Cc(CcParams { rounds }),
                other => return Err(fail(s.line, format!("unknown protocol `{other}` (fpc, cc)"))),
            };
        }
        "topology" => base.topology.kind = parse_with::<TopologyKind>(s)?,
        "side" => base.topology.side = Some(parse_num(s)?),
        "n" => base.topology.n = Some(parse_num(s)?),
        "k" => base.topology.k = parse_num(s)?,
        "p_rewire" => base.topology.p_rewire = parse_num(s)?,
        "rounds" => base.protocol.set_rounds(parse_num(s)?),
        "walk_distance" => fpc_params(base, s)?.walk_distance = parse_num(s)?,
        "query_count" => fpc_params(base, s)?.query_count = parse_num(s)?,
        "tau" => fpc_params(base, s)?.tau = parse_num(s)?,
        "beta" => fpc_params(base, s)?.beta = parse_num(s)?,
        "dead_end_walk" => {
            let v = parse_with(s)?;
            fpc_params(base, s)?.dead_end = v;
        }
        "adversary_kind" => base.adversary.kind = parse_with::<AdversaryKind>(s)?,
        "adversary_fraction" => base.adversary.fraction = parse_num(s)?,
        "p_lying" => base.adversary.p_lying = parse_num(s)?,
        "p_silence" => base.adversary.p_silence = parse_num(s)?,
        "p0" => base.p0 = parse_num(s)?,
        "consensus_scope" => base.consensus_scope = parse_with::<ConsensusScope>(s)?,
        other => return Err(fail(s.line, format!("unknown key `{other}`"))),
    }
    Ok(())
}

/// `a, b, c` or inclusive `start:stop:step` (numeric axes only).
pub(crate) fn parse_axis_values(param: Param, text: &str) -> Result<Vec<Value>> {
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    if parts.len() == 3 {
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidParameter(format!("bad range `{text}`")))?;
        let (start, stop, step) = (nums[0], nums[1], nums[2]);
        if step.is_nan() || step <= 0.0 || stop < start {
            return Err(Error::InvalidParameter(format!("bad range `{text}`: need step > 0 and stop >= start")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        return (0..count)
            .map(|i| {
                let v = ((start + i as f64 * step) * 1e12).round() / 1e12;
                param.parse_value(&v.to_string())
            })
            .collect();
    }
    let values: Vec<Value> = text
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| param.parse_value(v))
        .collect::<Result<_>>()?;
    if values.is_empty() {
        return Err(Error::InvalidParameter(format!("{param}: empty value list")));
    }
    Ok(values)
}
