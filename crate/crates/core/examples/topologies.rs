//! Builds each topology and prints its basic shape.

use consensus_sim::rng::StreamTree;
use consensus_sim::TopologySpec;

fn main() -> consensus_sim::Result<()> {
    let streams = StreamTree::new(7);
    for spec in [
        TopologySpec::grid(15),
        TopologySpec::torus(15),
        TopologySpec::watts_strogatz(225, 4, 1.0),
        TopologySpec::watts_strogatz(225, 10, 1.0),
        TopologySpec::watts_strogatz(225, 10, 0.1),
    ] {
        let g = spec.build(&streams)?;
        let eccentricity = g.bfs_distances(0).into_iter().max().unwrap_or(0);
        println!(
            "{:<15} n={:<4} edges={:<5} connected={} eccentricity(0)={eccentricity}",
            spec.kind.as_str(),
            g.node_count(),
            g.edge_count(),
            g.is_connected(),
        );
        let hist: Vec<String> = g.degree_histogram().iter().map(|(d, c)| format!("{d}:{c}")).collect();
        println!("    degrees {}", hist.join(" "));
    }
    Ok(())
}
