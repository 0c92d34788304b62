//! Run scheduler: build the network, place adversaries, draw initial
//! opinions, execute a fixed number of rounds and check for consensus.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::adversary::{place_adversaries, AdversaryKind, AdversaryOracle, AdversarySpec};
use crate::cc::{cc_round, CcParams, CcState};
use crate::error::{Error, Result};
use crate::fpc::{fpc_round, FpcParams};
use crate::opinion::Opinion;
use crate::rng::{Purpose, SimRng, StreamTree};
use crate::topology::{Graph, TopologySpec};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Default number of runs per parameter point.
pub const DEFAULT_RUNS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub enum Protocol {
    Fpc(FpcParams),
    Cc(CcParams),
}

impl Protocol {
    pub fn name(&self) -> &'static str {
        match self {
            Protocol::Fpc(_) => "fpc",
            Protocol::Cc(_) => "cc",
        }
    }

    pub fn rounds(&self) -> usize {
        match self {
            Protocol::Fpc(p) => p.rounds,
            Protocol::Cc(p) => p.rounds,
        }
    }

    pub fn set_rounds(&mut self, rounds: usize) {
        match self {
            Protocol::Fpc(p) => p.rounds = rounds,
            Protocol::Cc(p) => p.rounds = rounds,
        }
    }

    fn stream_label(&self) -> u64 {
        match self {
            Protocol::Fpc(_) => 0xF9C,
            Protocol::Cc(_) => 0xCC,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Protocol::Fpc(p) => p.validate(),
            Protocol::Cc(p) => p.validate(),
        }
    }
}

/// Which nodes the consensus predicate quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ConsensusScope {
    #[default]
    Honest,
    All,
}

impl ConsensusScope {
    pub fn as_str(self) -> &'static str {
        match self {
            ConsensusScope::Honest => "honest",
            ConsensusScope::All => "all",
        }
    }
}

impl FromStr for ConsensusScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "honest" => Ok(ConsensusScope::Honest),
            "all" => Ok(ConsensusScope::All),
            other => Err(Error::InvalidParameter(format!("unknown consensus_scope `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub topology: TopologySpec,
    pub protocol: Protocol,
    /// Probability that a node starts with opinion 0.
    pub p0: f64,
    pub adversary: AdversarySpec,
    pub seed: u64,
    pub consensus_scope: ConsensusScope,
}

impl RunSpec {
    pub fn new(topology: TopologySpec, protocol: Protocol, p0: f64) -> Self {
        Self {
            topology,
            protocol,
            p0,
            adversary: AdversarySpec::none(),
            seed: 0,
            consensus_scope: ConsensusScope::Honest,
        }
    }

    pub fn with_adversary(mut self, adversary: AdversarySpec) -> Self {
        self.adversary = adversary;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.topology.validate()?;
        self.protocol.validate()?;
        self.adversary.validate()?;
        if !(0.0..=1.0).contains(&self.p0) {
            return Err(Error::InvalidParameter(format!("p0 = {} outside [0, 1]", self.p0)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OpinionHistogram {
    pub zero: usize,
    pub one: usize,
    pub undecided: usize,
}

impl OpinionHistogram {
    pub fn total(&self) -> usize {
        self.zero + self.one + self.undecided
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub converged: bool,
    /// Opinion counts over the nodes in the consensus scope.
    pub final_opinion_histogram: OpinionHistogram,
    pub rounds_executed: usize,
    /// Total `(observer, subject)` blacklist insertions; always 0 for FPC.
    pub blacklist_events: usize,
}

/// Everything a run produced, for callers that want more than the verdict.
#[derive(Debug, Clone)]
pub struct RunTrace {
    pub graph: Graph,
    pub roles: Vec<AdversaryKind>,
    /// Opinions after each round; entry 0 is the initial assignment.
    pub opinions: Vec<Vec<Opinion>>,
    pub cc_state: Option<CcState>,
    pub result: RunResult,
}

/// Independent Bernoulli(p0) draw per node: `true` means opinion 0.
pub fn assign_initial_opinions(n: usize, p0: f64, rng: &mut SimRng) -> Vec<Opinion> {
    (0..n).map(|_| if rng.bernoulli(p0) { Opinion::Zero } else { Opinion::One }).collect()
}

/// Consensus verdict: every node in scope holds the same binary opinion.
pub fn evaluate_consensus(
    opinions: &[Opinion],
    roles: &[AdversaryKind],
    scope: ConsensusScope,
) -> (bool, OpinionHistogram) {
    let mut hist = OpinionHistogram::default();
    for (o, kind) in opinions.iter().zip(roles) {
        if scope == ConsensusScope::Honest && !kind.is_honest() {
            continue;
        }
        match o {
            Opinion::Zero => hist.zero += 1,
            Opinion::One => hist.one += 1,
            Opinion::Undecided => hist.undecided += 1,
        }
    }
    let total = hist.total();
    let converged = hist.undecided == 0 && ((hist.zero == total) != (hist.one == total));
    (converged, hist)
}

fn run_inner(spec: &RunSpec, keep_history: bool) -> Result<RunTrace> {
    spec.validate()?;
    let streams = StreamTree::new(spec.seed).subtree(spec.protocol.stream_label());
    let graph = spec.topology.build(&streams)?;
    let n = graph.node_count();
    let roles = place_adversaries(n, &spec.adversary, &mut streams.stream(Purpose::Placement, &[]));
    let mut opinions = assign_initial_opinions(n, spec.p0, &mut streams.stream(Purpose::InitialOpinions, &[]));
    let mut history = Vec::new();
    if keep_history {
        history.push(opinions.clone());
    }
    let rounds = spec.protocol.rounds();
    let mut cc_state = None;
    let mut blacklist_events = 0;
    match &spec.protocol {
        Protocol::Fpc(params) => {
            for round in 0..rounds {
                let oracle = AdversaryOracle::new(&roles, &spec.adversary, streams, round as u32);
                opinions = fpc_round(&graph, &opinions, params, round, &oracle, &streams);
                if keep_history {
                    history.push(opinions.clone());
                }
            }
        }
        Protocol::Cc(_) => {
            let mut state = CcState::new(n);
            for round in 1..=rounds {
                let oracle = AdversaryOracle::new(&roles, &spec.adversary, streams, (round - 1) as u32);
                opinions = cc_round(&graph, &opinions, &mut state, round, &oracle);
                if keep_history {
                    history.push(opinions.clone());
                }
            }
            blacklist_events = state.blacklist_events;
            cc_state = Some(state);
        }
    }
    let (converged, final_opinion_histogram) = evaluate_consensus(&opinions, &roles, spec.consensus_scope);
    if !keep_history {
        history.push(opinions);
    }
    Ok(RunTrace {
        graph,
        roles,
        opinions: history,
        cc_state,
        result: RunResult { converged, final_opinion_histogram, rounds_executed: rounds, blacklist_events },
    })
}

/// Executes one run of exactly `rounds` rounds (no early stop).
pub fn run(spec: &RunSpec) -> Result<RunResult> {
    run_inner(spec, false).map(|t| t.result)
}

/// Like [`run`] but keeps the graph, roles and per-round opinions.
pub fn run_traced(spec: &RunSpec) -> Result<RunTrace> {
    run_inner(spec, true)
}

/// Converged fraction with a Wilson 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEstimate {
    pub runs: usize,
    pub converged: usize,
    pub rate: f64,
    /// Half-width of the Wilson score interval.
    pub ci95: f64,
}

impl RateEstimate {
    pub fn from_counts(converged: usize, runs: usize) -> Self {
        let rate = if runs == 0 { 0.0 } else { converged as f64 / runs as f64 };
        Self { runs, converged, rate, ci95: wilson_half_width(converged, runs) }
    }
}

/// Half-width of the 95% Wilson score interval for `k` successes in `n` trials.
pub fn wilson_half_width(k: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    let p = k as f64 / n;
    let z2 = Z95 * Z95;
    Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n)
}

/// Seed of run `index` below `master_seed`.
pub fn run_seed(master_seed: u64, index: usize) -> u64 {
    StreamTree::new(master_seed).seed(Purpose::RunSeed, &[index as u64])
}

/// Runs `run_count` independent seeds of `template` (its own seed is
/// ignored) on the current rayon pool. The result does not depend on the
/// pool size.
pub fn convergence_rate(template: &RunSpec, run_count: usize, master_seed: u64) -> Result<RateEstimate> {
    if run_count == 0 {
        return Err(Error::InvalidParameter("run_count must be >= 1".into()));
    }
    template.validate()?;
    let outcomes: Vec<bool> = (0..run_count)
        .into_par_iter()
        .map(|i| {
            let spec = RunSpec { seed: run_seed(master_seed, i), ..template.clone() };
            run(&spec).map(|r| r.converged)
        })
        .collect::<Result<_>>()?;
    Ok(RateEstimate::from_counts(outcomes.iter().filter(|c| **c).count(), run_count))
}

impl fmt::Display for RateEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} = {:.3} ± {:.3}", self.converged, self.runs, self.rate, self.ci95)
    }
}
