//! Cellular Consensus with Berserk nodes: who ends up blacklisted, and by whom.

use consensus_sim::engine::run_traced;
use consensus_sim::{AdversaryKind, AdversarySpec, CcParams, Protocol, RunSpec, TopologySpec};

fn main() -> consensus_sim::Result<()> {
    let spec = RunSpec::new(TopologySpec::torus(8), Protocol::Cc(CcParams { rounds: 15 }), 0.5)
        .with_adversary(AdversarySpec::new(AdversaryKind::Berserk, 0.1))
        .with_seed(4);
    let trace = run_traced(&spec)?;
    let state = trace.cc_state.as_ref().expect("cc run");
    let berserk: Vec<usize> = (0..trace.roles.len()).filter(|&v| trace.roles[v] == AdversaryKind::Berserk).collect();
    println!("berserk nodes: {berserk:?}");
    for &b in &berserk {
        let observers: Vec<usize> = (0..state.blacklists.len()).filter(|&v| state.blacklists[v].contains(b)).collect();
        println!("  {b:>2} neighbors {:?}, blacklisted by {observers:?}", trace.graph.neighbors(b));
    }
    let honest_hits =
        state.blacklists.iter().flat_map(|list| list.iter()).filter(|&v| trace.roles[v].is_honest()).count();
    println!("blacklist events {}, honest nodes blacklisted {honest_hits}", state.blacklist_events);
    println!("converged: {}", trace.result.converged);
    Ok(())
}
