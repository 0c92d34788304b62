//! Same network, same p0, every adversary kind at 10% and 33%.

use consensus_sim::{
    convergence_rate, AdversaryKind, AdversarySpec, CcParams, FpcParams, Protocol, RunSpec, TopologySpec,
};

fn main() -> consensus_sim::Result<()> {
    let runs = 40;
    for protocol in [Protocol::Fpc(FpcParams::default()), Protocol::Cc(CcParams::default())] {
        println!("{} on a 225-node Watts-Strogatz graph, p0 = 0.5", protocol.name());
        let base = RunSpec::new(TopologySpec::watts_strogatz(225, 10, 1.0), protocol, 0.5);
        println!("  {:<14} {}", "honest", convergence_rate(&base, runs, 1)?);
        for kind in [AdversaryKind::Cautious, AdversaryKind::SemiCautious, AdversaryKind::Berserk] {
            for fraction in [0.1, 1.0 / 3.0] {
                let spec = base.clone().with_adversary(AdversarySpec::new(kind, fraction));
                println!("  {:<14} {:>3.0}%  {}", kind.as_str(), fraction * 100.0, convergence_rate(&spec, runs, 1)?);
            }
        }
    }
    Ok(())
}
