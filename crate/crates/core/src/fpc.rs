//! Fast Probabilistic Consensus over a local-knowledge network.
//!
//! Nodes do not know the whole network, so each of the `Q` queries per round
//! is routed by a self-avoiding random walk of at most `D` hops; the node
//! where the walk stops is the one queried. There is no common random
//! threshold sequence: every node draws its own `U_t` each round.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::opinion::Opinion;
use crate::rng::{Purpose, SimRng, StreamTree};
use crate::topology::Graph;

/// What to do with a walk that runs out of unvisited neighbors before
/// spending its hop budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DeadEndWalk {
    /// Query the node where the walk got stuck.
    #[default]
    StopAndQuery,
    /// Drop the walk; no query is sent.
    Abort,
}

impl DeadEndWalk {
    pub fn as_str(self) -> &'static str {
        match self {
            DeadEndWalk::StopAndQuery => "stop_and_query",
            DeadEndWalk::Abort => "abort",
        }
    }
}

impl FromStr for DeadEndWalk {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stop_and_query" | "stop-and-query" => Ok(DeadEndWalk::StopAndQuery),
            "abort" => Ok(DeadEndWalk::Abort),
            other => Err(Error::InvalidParameter(format!("unknown dead_end_walk `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FpcParams {
    pub walk_distance: usize,
    pub query_count: usize,
    /// Threshold used in the first round.
    pub tau: f64,
    /// Later thresholds are uniform on `[beta, 1 - beta]`.
    pub beta: f64,
    pub rounds: usize,
    pub dead_end: DeadEndWalk,
}

impl Default for FpcParams {
    fn default() -> Self {
        Self {
            walk_distance: 4,
            query_count: 10,
            tau: 0.5,
            beta: 0.25,
            rounds: 30,
            dead_end: DeadEndWalk::StopAndQuery,
        }
    }
}

impl FpcParams {
    pub fn validate(&self) -> Result<()> {
        if self.walk_distance == 0 {
            return Err(Error::InvalidParameter("walk_distance must be >= 1".into()));
        }
        if self.query_count == 0 {
            return Err(Error::InvalidParameter("query_count must be >= 1".into()));
        }
        if self.rounds == 0 {
            return Err(Error::InvalidParameter("rounds must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.tau) {
            return Err(Error::InvalidParameter(format!("tau = {} outside [0, 1]", self.tau)));
        }
        if !(0.0..0.5).contains(&self.beta) {
            return Err(Error::InvalidParameter(format!("beta = {} outside [0, 0.5)", self.beta)));
        }
        Ok(())
    }
}

/// Message carried along a random walk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkToken {
    /// Originator first, then every hop in order.
    pub visited: Vec<usize>,
    pub remaining: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryOutcome {
    pub responder: usize,
    /// `None` when the responder stayed silent.
    pub response: Option<Opinion>,
}

/// Decides what a queried node answers.
pub trait QueryOracle {
    /// `query` indexes the querier's walks within the round.
    fn respond(&self, responder: usize, querier: usize, query: usize, true_opinion: Opinion) -> Option<Opinion>;
}

/// Threshold for `round_index`: `tau` in the first round, otherwise a fresh
/// uniform draw on `[beta, 1 - beta]`.
pub fn fpc_threshold(round_index: usize, params: &FpcParams, rng: &mut SimRng) -> f64 {
    if round_index == 0 {
        params.tau
    } else {
        params.beta + (1.0 - 2.0 * params.beta) * rng.next_f64()
    }
}

/// Opinion update from the mean of received opinions.
pub fn fpc_decide(mean: f64, threshold: f64, previous: Opinion, is_first_round: bool) -> Opinion {
    if is_first_round {
        return Opinion::from_bit(mean > threshold);
    }
    if mean > threshold {
        Opinion::One
    } else if mean < threshold {
        Opinion::Zero
    } else {
        previous
    }
}

fn walk_into(
    graph: &Graph,
    origin: usize,
    distance: usize,
    policy: DeadEndWalk,
    rng: &mut SimRng,
    visited: &mut Vec<usize>,
) -> Option<usize> {
    visited.clear();
    visited.push(origin);
    let mut current = origin;
    let mut remaining = distance;
    while remaining > 0 {
        let neighbors = graph.neighbors(current);
        let open = neighbors.iter().filter(|v| !visited.contains(v)).count();
        if open == 0 {
            if current == origin {
                return None;
            }
            return match policy {
                DeadEndWalk::StopAndQuery => Some(current),
                DeadEndWalk::Abort => None,
            };
        }
        let pick = rng.below(open);
        current = *neighbors.iter().filter(|v| !visited.contains(v)).nth(pick).expect("pick < open");
        visited.push(current);
        remaining -= 1;
    }
    Some(current)
}

/// Self-avoiding random walk of at most `distance` hops from `origin`.
/// Returns the node to query, or `None` when `origin` is isolated.
pub fn random_walk(graph: &Graph, origin: usize, distance: usize, rng: &mut SimRng) -> Option<usize> {
    let mut visited = Vec::with_capacity(distance + 1);
    walk_into(graph, origin, distance, DeadEndWalk::StopAndQuery, rng, &mut visited)
}

/// Like [`random_walk`] but also returns the final token, whose `visited`
/// list is the full trajectory.
pub fn random_walk_traced(
    graph: &Graph,
    origin: usize,
    distance: usize,
    policy: DeadEndWalk,
    rng: &mut SimRng,
) -> (Option<usize>, WalkToken) {
    let mut visited = Vec::with_capacity(distance + 1);
    let endpoint = walk_into(graph, origin, distance, policy, rng, &mut visited);
    let remaining = distance - (visited.len() - 1);
    (endpoint, WalkToken { visited, remaining })
}

/// Sends `Q` walks from `node` and collects the answers.
pub fn fpc_queries<O: QueryOracle + ?Sized>(
    graph: &Graph,
    snapshot: &[Opinion],
    params: &FpcParams,
    round_index: usize,
    node: usize,
    oracle: &O,
    streams: &StreamTree,
) -> Vec<QueryOutcome> {
    let mut rng = streams.stream(Purpose::Walks, &[round_index as u64, node as u64]);
    let mut visited = Vec::with_capacity(params.walk_distance + 1);
    (0..params.query_count)
        .filter_map(|q| {
            walk_into(graph, node, params.walk_distance, params.dead_end, &mut rng, &mut visited).map(|responder| {
                QueryOutcome { responder, response: oracle.respond(responder, node, q, snapshot[responder]) }
            })
        })
        .collect()
}

/// New opinion of one node, computed from the pre-round `snapshot`.
pub fn fpc_node_update<O: QueryOracle + ?Sized>(
    graph: &Graph,
    snapshot: &[Opinion],
    params: &FpcParams,
    round_index: usize,
    node: usize,
    oracle: &O,
    streams: &StreamTree,
) -> Opinion {
    let previous = snapshot[node];
    let mut rng = streams.stream(Purpose::Walks, &[round_index as u64, node as u64]);
    let mut visited = Vec::with_capacity(params.walk_distance + 1);
    let mut received = 0usize;
    let mut ones = 0usize;
    for q in 0..params.query_count {
        let Some(responder) = walk_into(graph, node, params.walk_distance, params.dead_end, &mut rng, &mut visited)
        else {
            continue;
        };
        match oracle.respond(responder, node, q, snapshot[responder]) {
            Some(Opinion::One) => {
                received += 1;
                ones += 1;
            }
            Some(Opinion::Zero) => received += 1,
            Some(Opinion::Undecided) | None => {}
        }
    }
    if received == 0 {
        return previous;
    }
    let mean = ones as f64 / received as f64;
    let threshold =
        fpc_threshold(round_index, params, &mut streams.stream(Purpose::Threshold, &[round_index as u64, node as u64]));
    fpc_decide(mean, threshold, previous, round_index == 0)
}

/// One synchronous round: every node updates from the same snapshot.
pub fn fpc_round<O: QueryOracle + ?Sized>(
    graph: &Graph,
    opinions: &[Opinion],
    params: &FpcParams,
    round_index: usize,
    oracle: &O,
    streams: &StreamTree,
) -> Vec<Opinion> {
    (0..graph.node_count())
        .map(|node| fpc_node_update(graph, opinions, params, round_index, node, oracle, streams))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::NoAdversaries;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    fn triangle() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn first_threshold_is_tau() {
        let p = FpcParams::default();
        assert_eq!(fpc_threshold(0, &p, &mut SimRng::from_key(1)), 0.5);
    }

    #[test]
    fn later_thresholds_stay_in_band() {
        let p = FpcParams::default();
        let mut rng = SimRng::from_key(2);
        for _ in 0..10_000 {
            let t = fpc_threshold(3, &p, &mut rng);
            assert!((0.25..=0.75).contains(&t));
        }
        let p0 = FpcParams { beta: 0.0, ..FpcParams::default() };
        for _ in 0..10_000 {
            let t = fpc_threshold(3, &p0, &mut rng);
            assert!((0.0..=1.0).contains(&t));
        }
    }

    #[test]
    fn decide_rules() {
        assert_eq!(fpc_decide(0.7, 0.5, Opinion::Zero, true), Opinion::One);
        assert_eq!(fpc_decide(0.5, 0.5, Opinion::One, false), Opinion::One);
        assert_eq!(fpc_decide(0.5, 0.5, Opinion::Zero, false), Opinion::Zero);
        assert_eq!(fpc_decide(0.5, 0.5, Opinion::One, true), Opinion::Zero);
        assert_eq!(fpc_decide(0.2, 0.5, Opinion::One, false), Opinion::Zero);
    }

    #[test]
    fn path_walk_is_forced() {
        let g = path3();
        for seed in 0..50 {
            assert_eq!(random_walk(&g, 0, 2, &mut SimRng::from_key(seed)), Some(2));
        }
    }

    #[test]
    fn triangle_walk_dead_ends_at_far_vertex() {
        let g = triangle();
        let mut seen = [false; 3];
        for seed in 0..200 {
            let (end, token) = random_walk_traced(&g, 0, 3, DeadEndWalk::StopAndQuery, &mut SimRng::from_key(seed));
            let end = end.unwrap();
            assert_ne!(end, 0);
            assert_eq!(token.visited.len(), 3);
            assert_eq!(*token.visited.last().unwrap(), end);
            assert_eq!(token.remaining, 1);
            seen[end] = true;
        }
        assert_eq!(seen, [false, true, true]);
    }

    #[test]
    fn abort_policy_drops_dead_ends() {
        let g = triangle();
        for seed in 0..50 {
            assert_eq!(random_walk_traced(&g, 0, 3, DeadEndWalk::Abort, &mut SimRng::from_key(seed)).0, None);
            assert!(random_walk_traced(&g, 0, 2, DeadEndWalk::Abort, &mut SimRng::from_key(seed)).0.is_some());
        }
    }

    #[test]
    fn isolated_origin_has_no_walk() {
        let g = Graph::from_edges(3, &[(1, 2)]).unwrap();
        assert_eq!(random_walk(&g, 0, 4, &mut SimRng::from_key(0)), None);
    }

    #[test]
    fn unanimity_is_kept() {
        let g = crate::topology::build_torus(5).unwrap();
        let p = FpcParams::default();
        let streams = StreamTree::new(3);
        for o in [Opinion::Zero, Opinion::One] {
            let mut ops = vec![o; 25];
            for r in 0..10 {
                ops = fpc_round(&g, &ops, &p, r, &NoAdversaries, &streams);
                assert!(ops.iter().all(|x| *x == o));
            }
        }
    }

    #[test]
    fn lone_node_keeps_opinion() {
        let g = Graph::from_edges(1, &[]).unwrap();
        let p = FpcParams::default();
        for o in [Opinion::Zero, Opinion::One] {
            let out = fpc_round(&g, &[o], &p, 4, &NoAdversaries, &StreamTree::new(0));
            assert_eq!(out, vec![o]);
        }
    }

    #[test]
    fn silent_responders_keep_opinion() {
        struct Mute;
        impl QueryOracle for Mute {
            fn respond(&self, _: usize, _: usize, _: usize, _: Opinion) -> Option<Opinion> {
                None
            }
        }
        let g = crate::topology::build_torus(3).unwrap();
        let ops: Vec<Opinion> = (0..9).map(|i| Opinion::from_bit(i % 2 == 0)).collect();
        let out = fpc_round(&g, &ops, &FpcParams::default(), 2, &Mute, &StreamTree::new(0));
        assert_eq!(out, ops);
    }

    #[test]
    fn queries_match_update_path() {
        let g = crate::topology::build_torus(4).unwrap();
        let p = FpcParams::default();
        let ops: Vec<Opinion> = (0..16).map(|i| Opinion::from_bit(i % 3 == 0)).collect();
        let streams = StreamTree::new(17);
        let outcomes = fpc_queries(&g, &ops, &p, 5, 6, &NoAdversaries, &streams);
        assert_eq!(outcomes.len(), p.query_count);
        for o in &outcomes {
            assert_ne!(o.responder, 6);
            assert_eq!(o.response, Some(ops[o.responder]));
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(FpcParams { beta: 0.5, ..FpcParams::default() }.validate().is_err());
        assert!(FpcParams { walk_distance: 0, ..FpcParams::default() }.validate().is_err());
        assert!(FpcParams::default().validate().is_ok());
    }
}
