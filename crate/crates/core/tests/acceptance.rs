//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use consensus_sim::adversary::AdversaryOracle;
use consensus_sim::cc::{cc_majority, cc_round, CcState};
use consensus_sim::engine::{assign_initial_opinions, run_traced};
use consensus_sim::experiments::{p0_grid, run_sweep, write_csv, Axis, Param, SweepSpec};
use consensus_sim::fpc::random_walk_traced;
use consensus_sim::rng::{Purpose, SimRng, StreamTree};
use consensus_sim::topology::Graph;
use consensus_sim::{
    AdversaryKind, AdversarySpec, CcParams, DeadEndWalk, FpcParams, Opinion, Protocol, RunSpec, TopologySpec,
};

type Check = Box<dyn FnOnce(&mut Curves) -> (bool, String)>;

const RUNS: usize = 100;
const MASTER_SEED: u64 = 20_240_601;

struct Curves(HashMap<String, Vec<f64>>);

impl Curves {
    /// Rates over the given p0 values, memoised by `label`.
    fn at(&mut self, label: &str, base: &RunSpec, p0s: &[f64]) -> Vec<f64> {
        let key = format!("{label}@{p0s:?}");
        if let Some(c) = self.0.get(&key) {
            return c.clone();
        }
        let mut spec = SweepSpec::new(label, base.clone(), vec![Axis::reals(Param::P0, p0s.iter().copied())]);
        spec.runs_per_point = RUNS;
        spec.master_seed = MASTER_SEED;
        let rates: Vec<f64> = run_sweep(&spec, 0).unwrap().rows.iter().map(|r| r.estimate.rate).collect();
        self.0.insert(key, rates.clone());
        rates
    }

    fn full(&mut self, label: &str, base: &RunSpec) -> Vec<f64> {
        self.at(label, base, &p0_grid())
    }
}

fn fpc() -> Protocol {
    Protocol::Fpc(FpcParams::default())
}

fn cc() -> Protocol {
    Protocol::Cc(CcParams::default())
}

fn fpc_rounds(m: usize) -> Protocol {
    Protocol::Fpc(FpcParams { rounds: m, ..FpcParams::default() })
}

/// The three topologies at N = 225.
fn n225() -> [(&'static str, TopologySpec); 3] {
    [
        ("grid", TopologySpec::grid(15)),
        ("torus", TopologySpec::torus(15)),
        ("ws", TopologySpec::watts_strogatz(225, 10, 1.0)),
    ]
}

fn with(kind: AdversaryKind, fraction: f64, topology: TopologySpec, protocol: Protocol) -> RunSpec {
    RunSpec::new(topology, protocol, 0.5).with_adversary(AdversarySpec::new(kind, fraction))
}

fn honest(topology: TopologySpec, protocol: Protocol) -> RunSpec {
    RunSpec::new(topology, protocol, 0.5)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn fmt(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.2}")).collect();
    format!("[{}]", parts.join(" "))
}

fn p0_in(lo: f64, hi: f64) -> Vec<f64> {
    p0_grid().into_iter().filter(|p| *p >= lo - 1e-9 && *p <= hi + 1e-9).collect()
}

fn c1_unanimity(c: &mut Curves) -> (bool, String) {
    let mut worst = 1.0f64;
    for protocol in [fpc(), cc()] {
        for topology in [TopologySpec::grid(7), TopologySpec::torus(7), TopologySpec::watts_strogatz(49, 10, 1.0)] {
            let label = format!("c1-{}-{}", protocol.name(), topology.kind.as_str());
            for r in c.at(&label, &honest(topology, protocol.clone()), &[0.0, 1.0]) {
                worst = worst.min(r);
            }
        }
    }
    (worst == 1.0, format!("minimum rate {worst:.2} over 12 cells"))
}

fn c2_fpc_torus(c: &mut Curves) -> (bool, String) {
    let rates = c.full("fpc-torus7", &honest(TopologySpec::torus(7), fpc()));
    let min = rates.iter().copied().fold(1.0, f64::min);
    (min >= 0.95, format!("min {min:.2} {}", fmt(&rates)))
}

fn c3_grid_size(c: &mut Curves) -> (bool, String) {
    let p0s = p0_in(0.35, 0.75);
    let small = mean(&c.at("fpc-grid7", &honest(TopologySpec::grid(7), fpc()), &p0s));
    let large = mean(&c.at("fpc-grid32", &honest(TopologySpec::grid(32), fpc()), &p0s));
    (small - large >= 0.10, format!("side 7 mean {small:.3}, side 32 mean {large:.3}, gap {:.3}", small - large))
}

fn c4_ws_scaling(c: &mut Curves) -> (bool, String) {
    let mut mins = Vec::new();
    for n in [49, 225, 1024] {
        let rates = c.full(&format!("fpc-ws{n}"), &honest(TopologySpec::watts_strogatz(n, 10, 1.0), fpc()));
        mins.push(rates.iter().copied().fold(1.0, f64::min));
    }
    (mins.iter().all(|m| *m >= 0.90), format!("per-n minimum {}", fmt(&mins)))
}

fn c5_cautious_collapse(c: &mut Curves) -> (bool, String) {
    let mut maxes = Vec::new();
    for (name, topology) in n225() {
        let rates =
            c.full(&format!("fpc-cautious33-{name}"), &with(AdversaryKind::Cautious, 1.0 / 3.0, topology, fpc()));
        maxes.push(rates.iter().copied().fold(0.0, f64::max));
    }
    (maxes.iter().all(|m| *m <= 0.10), format!("per-topology maximum (grid torus ws) {}", fmt(&maxes)))
}

fn c6_cautious_ordering(c: &mut Curves) -> (bool, String) {
    let mut at_half = Vec::new();
    for (name, topology) in n225() {
        at_half.push(
            c.at(&format!("fpc-cautious10-{name}"), &with(AdversaryKind::Cautious, 0.1, topology, fpc()), &[0.5])[0],
        );
    }
    let (grid, torus, ws) = (at_half[0], at_half[1], at_half[2]);
    let ok = ws - grid >= 0.20 && ws - torus >= 0.20 && ws >= 0.60;
    (ok, format!("p0=0.5: grid {grid:.2}, torus {torus:.2}, ws {ws:.2}"))
}

fn c7_semi_cautious(c: &mut Curves) -> (bool, String) {
    let mut diffs = Vec::new();
    for (name, topology) in n225() {
        let base = c.full(&format!("fpc-honest-{name}"), &honest(topology.clone(), fpc()));
        let semi =
            c.full(&format!("fpc-semi33-{name}"), &with(AdversaryKind::SemiCautious, 1.0 / 3.0, topology, fpc()));
        diffs.push(max_abs_diff(&base, &semi));
    }
    (diffs.iter().all(|d| *d <= 0.15), format!("max |diff| per topology {}", fmt(&diffs)))
}

fn c8_berserk_vs_cautious(c: &mut Curves) -> (bool, String) {
    let (mut worst, mut worst_mean) = (0.0f64, 0.0f64);
    for (name, topology) in n225() {
        let cautious = c.full(
            &format!("fpc-cautious33-{name}"),
            &with(AdversaryKind::Cautious, 1.0 / 3.0, topology.clone(), fpc()),
        );
        let berserk =
            c.full(&format!("fpc-berserk33-{name}"), &with(AdversaryKind::Berserk, 1.0 / 3.0, topology, fpc()));
        worst = worst.max(max_abs_diff(&cautious, &berserk));
        worst_mean = worst_mean.max((mean(&cautious) - mean(&berserk)).abs());
    }
    (worst <= 0.10 && worst_mean <= 0.05, format!("max per-point diff {worst:.2}, max mean diff {worst_mean:.3}"))
}

fn c9_rounds(c: &mut Curves) -> (bool, String) {
    let mut diffs = Vec::new();
    for (name, topology) in n225() {
        let m20 = c.full(&format!("fpc-m20-{name}"), &honest(topology.clone(), fpc_rounds(20)));
        let m50 = c.full(&format!("fpc-m50-{name}"), &honest(topology, fpc_rounds(50)));
        diffs.push(max_abs_diff(&m20, &m50));
    }
    (diffs.iter().all(|d| *d <= 0.10), format!("max |diff| per topology {}", fmt(&diffs)))
}

fn c10_cc_midrange(c: &mut Curves) -> (bool, String) {
    let p0s = p0_in(0.3, 0.8);
    let mut maxes = Vec::new();
    for (name, topology) in [("grid", TopologySpec::grid(15)), ("torus", TopologySpec::torus(15))] {
        let rates = c.at(&format!("cc-honest-{name}"), &honest(topology, cc()), &p0s);
        maxes.push(rates.iter().copied().fold(0.0, f64::max));
    }
    (maxes.iter().all(|m| *m <= 0.60), format!("max over p0 in [0.3, 0.8] (grid torus) {}", fmt(&maxes)))
}

fn c11_cc_degree(c: &mut Curves) -> (bool, String) {
    let means: Vec<f64> = [4, 10, 20]
        .iter()
        .map(|&k| mean(&c.full(&format!("cc-ws-k{k}"), &honest(TopologySpec::watts_strogatz(225, k, 1.0), cc()))))
        .collect();
    let ok = means.windows(2).all(|w| w[1] >= w[0]) && means[2] - means[0] >= 0.10;
    (ok, format!("mean rate for K = 4, 10, 20: {}", fmt(&means)))
}

fn c12_cc_resilience(c: &mut Curves) -> (bool, String) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, topology) in n225() {
        let f = mean(&c.full(
            &format!("fpc-cautious33-{name}"),
            &with(AdversaryKind::Cautious, 1.0 / 3.0, topology.clone(), fpc()),
        ));
        let k =
            mean(&c.full(&format!("cc-cautious33-{name}"), &with(AdversaryKind::Cautious, 1.0 / 3.0, topology, cc())));
        ok &= k > f;
        parts.push(format!("{name} cc {k:.3} vs fpc {f:.3}"));
    }
    (ok, parts.join(", "))
}

fn c13_majority() -> (bool, String) {
    let all = [Opinion::Zero, Opinion::One, Opinion::Undecided];
    let mut checked = 0;
    let mut ok = true;
    for len in 0..=6u32 {
        for code in 0..3usize.pow(len) {
            let votes: Vec<Opinion> = (0..len).map(|i| all[code / 3usize.pow(i) % 3]).collect();
            let zeros = votes.iter().filter(|o| **o == Opinion::Zero).count();
            let ones = votes.iter().filter(|o| **o == Opinion::One).count();
            let want = match zeros.cmp(&ones) {
                std::cmp::Ordering::Greater => Opinion::Zero,
                std::cmp::Ordering::Less => Opinion::One,
                std::cmp::Ordering::Equal => Opinion::Undecided,
            };
            ok &= cc_majority(votes.iter().copied()) == want;
            checked += 1;
        }
    }
    (ok, format!("{checked} multisets"))
}

fn c14_walks() -> (bool, String) {
    let d = FpcParams::default().walk_distance;
    let graphs = [
        TopologySpec::grid(15).build(&StreamTree::new(1)).unwrap(),
        TopologySpec::torus(15).build(&StreamTree::new(1)).unwrap(),
        TopologySpec::watts_strogatz(225, 10, 1.0).build(&StreamTree::new(1)).unwrap(),
    ];
    let mut bad = 0;
    let mut rng = SimRng::from_key(MASTER_SEED);
    for g in &graphs {
        for _ in 0..1000 {
            let origin = rng.below(g.node_count());
            let (end, token) = random_walk_traced(g, origin, d, DeadEndWalk::StopAndQuery, &mut rng);
            let hops = token.visited.len() - 1;
            let mut seen = token.visited.clone();
            seen.sort_unstable();
            seen.dedup();
            let legal = end.is_some_and(|e| e != origin && Some(&e) == token.visited.last())
                && seen.len() == token.visited.len()
                && hops <= d
                && token.visited.windows(2).all(|w| g.has_edge(w[0], w[1]));
            bad += usize::from(!legal);
        }
    }
    (bad == 0, format!("{bad} illegal of 3000 walks"))
}

fn c15_determinism() -> (bool, String) {
    let mut spec = consensus_sim::figure_preset("fig7").unwrap();
    spec.runs_per_point = 4;
    spec.master_seed = MASTER_SEED;
    let csv = |workers| {
        let mut out = Vec::new();
        write_csv(&run_sweep(&spec, workers).unwrap(), &mut out).unwrap();
        out
    };
    let (one, eight) = (csv(1), csv(8));
    (one == eight, format!("{} bytes, {} points", one.len(), spec.point_count()))
}

fn c16_blacklisting() -> (bool, String) {
    let mut cautious_hits = 0;
    for seed in 0..100 {
        let spec = with(AdversaryKind::Cautious, 1.0 / 3.0, TopologySpec::torus(15), cc()).with_seed(seed);
        let trace = run_traced(&spec).unwrap();
        let state = trace.cc_state.unwrap();
        for list in &state.blacklists {
            cautious_hits += list.iter().filter(|&v| trace.roles[v] == AdversaryKind::Cautious).count();
        }
    }

    // node 0 is Berserk; 1 and 2 are its honest neighbors; 3 is their shared neighbor
    let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
    let roles = [AdversaryKind::Berserk, AdversaryKind::Honest, AdversaryKind::Honest, AdversaryKind::Honest];
    let spec = AdversarySpec { p_lying: 1.0, ..AdversarySpec::new(AdversaryKind::Berserk, 0.25) };
    let mut caught = 0;
    for seed in 0..100u64 {
        let streams = StreamTree::new(seed);
        let mut ops = assign_initial_opinions(4, 0.5, &mut streams.stream(Purpose::InitialOpinions, &[]));
        let mut state = CcState::new(4);
        for r in 1..=3 {
            let oracle = AdversaryOracle::new(&roles, &spec, streams, (r - 1) as u32);
            ops = cc_round(&g, &ops, &mut state, r, &oracle);
        }
        caught += usize::from(state.blacklists[3].contains(0));
    }
    (
        cautious_hits == 0 && caught == 100,
        format!("Cautious blacklistings {cautious_hits} over 100 runs; Berserk caught in {caught}/100 diamonds"),
    )
}

fn main() -> ExitCode {
    let mut curves = Curves(HashMap::new());
    let criteria: Vec<(&str, Check)> = vec![
        ("unanimity baseline", Box::new(c1_unanimity)),
        ("FPC torus without adversaries", Box::new(c2_fpc_torus)),
        ("FPC grid size degradation", Box::new(c3_grid_size)),
        ("FPC Watts-Strogatz scalability", Box::new(c4_ws_scaling)),
        ("FPC 33% Cautious collapse", Box::new(c5_cautious_collapse)),
        ("FPC 10% Cautious ordering", Box::new(c6_cautious_ordering)),
        ("FPC Semi-Cautious harmlessness", Box::new(c7_semi_cautious)),
        ("Berserk matches Cautious", Box::new(c8_berserk_vs_cautious)),
        ("rounds saturation", Box::new(c9_rounds)),
        ("CC mid-range suppression", Box::new(c10_cc_midrange)),
        ("CC degree dependence", Box::new(c11_cc_degree)),
        ("CC Cautious resilience", Box::new(c12_cc_resilience)),
        ("majority oracle", Box::new(|_| c13_majority())),
        ("walk legality", Box::new(|_| c14_walks())),
        ("sweep determinism", Box::new(|_| c15_determinism())),
        ("Cautious consistency and Berserk detectability", Box::new(|_| c16_blacklisting())),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let t0 = Instant::now();
        let (ok, detail) = check(&mut curves);
        failed += usize::from(!ok);
        println!(
            "{} {:>2} {name}: {detail} ({:.0}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            t0.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of 16 criteria passed", 16 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
