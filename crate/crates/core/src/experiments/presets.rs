//! Named sweep presets, one per figure id.
//!
//! Fixed-size figures use N = 225 (side 15). Watts-Strogatz defaults to
//! K = 10, P = 1; its size follows `topology.side` where sizes are swept.

use super::{p0_grid, Axis, Param, SweepSpec, Value};
use crate::adversary::{AdversaryKind, AdversarySpec};
use crate::cc::CcParams;
use crate::engine::{Protocol, RunSpec};
use crate::error::{Error, Result};
use crate::fpc::FpcParams;
use crate::topology::{TopologyKind, TopologySpec};

/// `(id, description)` of every preset.
pub const PRESETS: [(&str, &str); 16] = [
    ("fig3-grid", "FPC, grid, sizes 49..1024, no adversaries"),
    ("fig3-torus", "FPC, torus, sizes 49..1024, no adversaries"),
    ("fig3-ws", "FPC, Watts-Strogatz, sizes 49..1024, no adversaries"),
    ("fig4", "FPC, Watts-Strogatz N=225, K in {4,10,20}"),
    ("fig5", "FPC, N=225, rounds M in {10..50}, three topologies"),
    ("fig6", "FPC, 33% Cautious, sizes 49..1024, three topologies"),
    ("fig7", "FPC, N=225, Cautious fractions 10..50%, three topologies"),
    ("fig8", "FPC, 33% Semi-Cautious, sizes 49..1024, three topologies"),
    ("fig9", "FPC, N=225, Semi-Cautious fractions 10..50%, three topologies"),
    ("fig10", "CC, sizes 49..1024, no adversaries, three topologies"),
    ("fig11", "CC, Watts-Strogatz N=225, K in {4,10,20}"),
    ("fig12", "CC, 33% Cautious, sizes 49..1024, three topologies"),
    ("fig13", "CC, Watts-Strogatz N=225, K in {4,10,20}, 33% Cautious"),
    ("fig14", "CC, N=225, Cautious fractions 10..50%, three topologies"),
    ("fig15", "CC, 33% Semi-Cautious, sizes 49..1024, three topologies"),
    ("fig16", "CC, Watts-Strogatz N=225, K in {4,10,20}, 33% Semi-Cautious"),
];

const SIDES: [usize; 5] = [7, 10, 15, 22, 32];
const DEGREES: [usize; 3] = [4, 10, 20];
const FRACTIONS: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];
const ROUNDS: [usize; 5] = [10, 20, 30, 40, 50];
const THIRD: f64 = 1.0 / 3.0;

fn kinds() -> Axis {
    Axis::new(
        Param::TopologyKind,
        [TopologyKind::Grid2D, TopologyKind::Torus, TopologyKind::WattsStrogatz].map(Value::Topology).to_vec(),
    )
}

fn p0() -> Axis {
    Axis::reals(Param::P0, p0_grid())
}

fn base(protocol: Protocol, kind: TopologyKind, adversary: AdversarySpec) -> RunSpec {
    let topology = TopologySpec { kind, side: Some(15), n: None, k: 10, p_rewire: 1.0 };
    RunSpec::new(topology, protocol, 0.5).with_adversary(adversary)
}

/// The sweep behind figure `id`; see [`PRESETS`].
pub fn figure_preset(id: &str) -> Result<SweepSpec> {
    let fpc = || Protocol::Fpc(FpcParams::default());
    let cc = || Protocol::Cc(CcParams::default());
    let none = AdversarySpec::none;
    let third = |kind| AdversarySpec::new(kind, THIRD);
    let share = |kind| AdversarySpec::new(kind, 0.0);
    let ws = TopologyKind::WattsStrogatz;
    let tor = TopologyKind::Torus;

    let sizes = || vec![kinds(), Axis::counts(Param::Side, SIDES), p0()];
    let degrees = || vec![Axis::counts(Param::K, DEGREES), p0()];
    let fractions = || vec![kinds(), Axis::reals(Param::AdversaryFraction, FRACTIONS), p0()];
    let single = || vec![Axis::counts(Param::Side, SIDES), p0()];

    let (b, axes) = match id {
        "fig3-grid" => (base(fpc(), TopologyKind::Grid2D, none()), single()),
        "fig3-torus" => (base(fpc(), tor, none()), single()),
        "fig3-ws" => (base(fpc(), ws, none()), single()),
        "fig4" => (base(fpc(), ws, none()), degrees()),
        "fig5" => (base(fpc(), tor, none()), vec![kinds(), Axis::counts(Param::Rounds, ROUNDS), p0()]),
        "fig6" => (base(fpc(), tor, third(AdversaryKind::Cautious)), sizes()),
        "fig7" => (base(fpc(), tor, share(AdversaryKind::Cautious)), fractions()),
        "fig8" => (base(fpc(), tor, third(AdversaryKind::SemiCautious)), sizes()),
        "fig9" => (base(fpc(), tor, share(AdversaryKind::SemiCautious)), fractions()),
        "fig10" => (base(cc(), tor, none()), sizes()),
        "fig11" => (base(cc(), ws, none()), degrees()),
        "fig12" => (base(cc(), tor, third(AdversaryKind::Cautious)), sizes()),
        "fig13" => (base(cc(), ws, third(AdversaryKind::Cautious)), degrees()),
        "fig14" => (base(cc(), tor, share(AdversaryKind::Cautious)), fractions()),
        "fig15" => (base(cc(), tor, third(AdversaryKind::SemiCautious)), sizes()),
        "fig16" => (base(cc(), ws, third(AdversaryKind::SemiCautious)), degrees()),
        other => {
            return Err(Error::UnknownPreset { id: other.to_string(), valid: PRESETS.iter().map(|p| p.0).collect() })
        }
    };
    Ok(SweepSpec::new(id, b, axes))
}
