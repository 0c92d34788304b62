//! One FPC run, round by round.

use consensus_sim::engine::run_traced;
use consensus_sim::{FpcParams, Opinion, Protocol, RunSpec, TopologySpec};

fn main() -> consensus_sim::Result<()> {
    let params = FpcParams { rounds: 20, ..FpcParams::default() };
    for topology in [TopologySpec::torus(15), TopologySpec::grid(15)] {
        let spec = RunSpec::new(topology.clone(), Protocol::Fpc(params.clone()), 0.45).with_seed(9);
        let trace = run_traced(&spec)?;
        println!("{} p0=0.45", topology.kind.as_str());
        for (r, ops) in trace.opinions.iter().enumerate() {
            let zeros = ops.iter().filter(|o| **o == Opinion::Zero).count();
            let bar = "#".repeat(zeros * 50 / ops.len());
            println!("  round {r:>2} zeros {zeros:>3} {bar}");
        }
        println!("  converged: {}\n", trace.result.converged);
    }
    Ok(())
}
