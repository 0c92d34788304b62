//! Convergence rate against p0 with 95% intervals.
//!
//! `cargo run --release --example convergence_rate -- cc torus 15`

use consensus_sim::experiments::p0_grid;
use consensus_sim::{convergence_rate, CcParams, FpcParams, Protocol, RunSpec, TopologySpec};

fn main() -> consensus_sim::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let protocol = match args.first().map(String::as_str) {
        Some("cc") => Protocol::Cc(CcParams::default()),
        _ => Protocol::Fpc(FpcParams::default()),
    };
    let side: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(10);
    let topology = match args.get(1).map(String::as_str) {
        Some("grid") => TopologySpec::grid(side),
        Some("ws") => TopologySpec::watts_strogatz(side * side, 10, 1.0),
        _ => TopologySpec::torus(side),
    };
    println!("{} on {} with {} nodes", protocol.name(), topology.kind.as_str(), side * side);
    for p0 in p0_grid() {
        let est = convergence_rate(&RunSpec::new(topology.clone(), protocol.clone(), p0), 50, 2)?;
        let bar = "#".repeat((est.rate * 40.0).round() as usize);
        println!("  p0 {p0:.2}  {:.2} ± {:.2}  {bar}", est.rate, est.ci95);
    }
    Ok(())
}
