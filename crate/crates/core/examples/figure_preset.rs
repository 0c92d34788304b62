//! Runs a figure preset at a reduced run count and prints one line per curve.
//!
//! `cargo run --release --example figure_preset -- fig11 20`

use consensus_sim::experiments::PRESETS;
use consensus_sim::{figure_preset, run_sweep, TopologyKind};

fn main() -> consensus_sim::Result<()> {
    let mut args = std::env::args().skip(1);
    let id = args.next().unwrap_or_else(|| "fig11".into());
    let runs = args.next().and_then(|s| s.parse().ok()).unwrap_or(10);
    let description = PRESETS.iter().find(|(p, _)| *p == id).map_or("", |(_, d)| *d);
    let mut spec = figure_preset(&id)?;
    spec.runs_per_point = runs;
    println!("{id}: {description} ({} points, {runs} runs each)", spec.point_count());

    let result = run_sweep(&spec, 0)?;
    // rows come out with p0 innermost, so each chunk of 21 is one curve
    for curve in result.rows.chunks(21) {
        let s = &curve[0].spec;
        let k = match s.topology.kind {
            TopologyKind::WattsStrogatz => format!(" k={}", s.topology.k),
            _ => String::new(),
        };
        let label = format!(
            "{} {} n={}{k} {} {:.0}% M={}",
            s.protocol.name(),
            s.topology.kind.as_str(),
            s.topology.node_count().unwrap_or(0),
            s.adversary.kind.as_str(),
            s.adversary.fraction * 100.0,
            s.protocol.rounds()
        );
        let rates: String = curve.iter().map(|r| format!("{:>4.0}", r.estimate.rate * 100.0)).collect();
        println!("{label:<46}{rates}");
    }
    Ok(())
}
