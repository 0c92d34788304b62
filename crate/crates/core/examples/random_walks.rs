//! Where do FPC's random-walk queries land? Histogram of hop distance
//! between origin and endpoint.

use consensus_sim::fpc::random_walk_traced;
use consensus_sim::rng::{SimRng, StreamTree};
use consensus_sim::{DeadEndWalk, TopologySpec};

fn main() -> consensus_sim::Result<()> {
    let walks = 5000;
    let distance = 4;
    let mut rng = SimRng::from_key(3);
    for spec in [TopologySpec::grid(15), TopologySpec::torus(15), TopologySpec::watts_strogatz(225, 10, 1.0)] {
        let g = spec.build(&StreamTree::new(3))?;
        let mut by_hops = vec![0usize; distance + 1];
        let mut short = 0;
        for _ in 0..walks {
            let origin = rng.below(g.node_count());
            let (end, token) = random_walk_traced(&g, origin, distance, DeadEndWalk::StopAndQuery, &mut rng);
            if token.remaining > 0 {
                short += 1;
            }
            if let Some(end) = end {
                by_hops[g.bfs_distances(origin)[end]] += 1;
            }
        }
        println!("{:<15} stopped early: {short}", spec.kind.as_str());
        for (hops, count) in by_hops.iter().enumerate().skip(1) {
            println!("    {hops} hops away: {:5.1}%", 100.0 * *count as f64 / walks as f64);
        }
    }

    let g = TopologySpec::grid(5).build(&StreamTree::new(0))?;
    let (_, token) = random_walk_traced(&g, 12, distance, DeadEndWalk::StopAndQuery, &mut rng);
    println!("sample trajectory on a 5x5 grid: {:?}", token.visited);
    Ok(())
}
