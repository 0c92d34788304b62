//! Byzantine behaviors applied at the emission boundary.
//!
//! Adversarial nodes keep an internal opinion that evolves by the honest
//! rules. Only what they *send* is corrupted: query responses in FPC and
//! heartbeats in CC.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;

use crate::cc::{EmissionOracle, Heartbeat};
use crate::error::{Error, Result};
use crate::fpc::QueryOracle;
use crate::opinion::Opinion;
use crate::rng::{Purpose, SimRng, StreamTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdversaryKind {
    Honest,
    /// Lies with probability `p_lying` per round, identically to every querier.
    Cautious,
    /// Never lies; ignores each query with probability `p_silence`.
    SemiCautious,
    /// Lies with probability `p_lying` independently per query.
    Berserk,
}

impl AdversaryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            AdversaryKind::Honest => "honest",
            AdversaryKind::Cautious => "cautious",
            AdversaryKind::SemiCautious => "semi-cautious",
            AdversaryKind::Berserk => "berserk",
        }
    }

    pub fn is_honest(self) -> bool {
        self == AdversaryKind::Honest
    }
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AdversaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "honest" | "none" => Ok(AdversaryKind::Honest),
            "cautious" => Ok(AdversaryKind::Cautious),
            "semi-cautious" | "semicautious" => Ok(AdversaryKind::SemiCautious),
            "berserk" => Ok(AdversaryKind::Berserk),
            other => Err(Error::InvalidParameter(format!("unknown adversary kind `{other}`"))),
        }
    }
}

/// Adversary mix of one experiment: a single non-honest kind on a fraction
/// of the nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversarySpec {
    pub kind: AdversaryKind,
    pub fraction: f64,
    pub p_lying: f64,
    pub p_silence: f64,
}

impl Default for AdversarySpec {
    fn default() -> Self {
        Self::none()
    }
}

impl AdversarySpec {
    pub fn none() -> Self {
        Self { kind: AdversaryKind::Honest, fraction: 0.0, p_lying: 0.5, p_silence: 0.5 }
    }

    pub fn new(kind: AdversaryKind, fraction: f64) -> Self {
        Self { kind, fraction, ..Self::none() }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in
            [("adversary_fraction", self.fraction), ("p_lying", self.p_lying), ("p_silence", self.p_silence)]
        {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidParameter(format!("{name} = {v} outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// `round(fraction * n)` with halves rounded up; zero for honest specs.
    pub fn adversary_count(&self, n: usize) -> usize {
        if self.kind.is_honest() {
            return 0;
        }
        ((self.fraction * n as f64 + 0.5).floor() as usize).min(n)
    }
}

/// Assigns the adversary kind to exactly `adversary_count(n)` nodes chosen
/// uniformly without replacement.
pub fn place_adversaries(node_count: usize, spec: &AdversarySpec, rng: &mut SimRng) -> Vec<AdversaryKind> {
    let mut roles = vec![AdversaryKind::Honest; node_count];
    let count = spec.adversary_count(node_count);
    if count > 0 {
        for i in index::sample(rng, node_count, count) {
            roles[i] = spec.kind;
        }
    }
    roles
}

/// The once-per-round coin. For Cautious it decides whether this round is a
/// lying round, for Semi-Cautious in CC whether the heartbeat is withheld.
pub fn round_coin(kind: AdversaryKind, spec: &AdversarySpec, rng: &mut SimRng) -> bool {
    match kind {
        AdversaryKind::Cautious => rng.bernoulli(spec.p_lying),
        AdversaryKind::SemiCautious => rng.bernoulli(spec.p_silence),
        AdversaryKind::Honest | AdversaryKind::Berserk => false,
    }
}

/// Answer to a single FPC query. `None` is silence.
pub fn respond_to_query(
    kind: AdversaryKind,
    true_opinion: Opinion,
    spec: &AdversarySpec,
    lying_round: bool,
    query_rng: &mut SimRng,
) -> Option<Opinion> {
    match kind {
        AdversaryKind::Honest => Some(true_opinion),
        AdversaryKind::Cautious => Some(if lying_round { true_opinion.flipped() } else { true_opinion }),
        AdversaryKind::SemiCautious => (!query_rng.bernoulli(spec.p_silence)).then_some(true_opinion),
        AdversaryKind::Berserk => {
            Some(if query_rng.bernoulli(spec.p_lying) { true_opinion.flipped() } else { true_opinion })
        }
    }
}

/// What a node actually sends to each of its `degree` neighbors, given the
/// heartbeat an honest node in its position would send. Relayed claims are
/// never altered; only `own_opinion` can be a lie.
pub fn emit_heartbeat(
    kind: AdversaryKind,
    honest: &Heartbeat,
    spec: &AdversarySpec,
    round_coin: bool,
    degree: usize,
    neighbor_rng: &mut SimRng,
) -> Vec<Option<Heartbeat>> {
    let with_opinion = |o: Opinion| Heartbeat { own_opinion: o, ..honest.clone() };
    match kind {
        AdversaryKind::Honest => vec![Some(honest.clone()); degree],
        AdversaryKind::Cautious => {
            let hb = if round_coin { with_opinion(honest.own_opinion.flipped()) } else { honest.clone() };
            vec![Some(hb); degree]
        }
        AdversaryKind::SemiCautious => {
            if round_coin {
                vec![None; degree]
            } else {
                vec![Some(honest.clone()); degree]
            }
        }
        AdversaryKind::Berserk => (0..degree)
            .map(|_| {
                Some(if neighbor_rng.bernoulli(spec.p_lying) {
                    with_opinion(honest.own_opinion.flipped())
                } else {
                    honest.clone()
                })
            })
            .collect(),
    }
}

/// Oracle for a network with no adversaries.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoAdversaries;

impl QueryOracle for NoAdversaries {
    fn respond(&self, _responder: usize, _querier: usize, _query: usize, true_opinion: Opinion) -> Option<Opinion> {
        Some(true_opinion)
    }
}

impl EmissionOracle for NoAdversaries {
    fn emit(&self, _node: usize, honest: &Heartbeat, degree: usize) -> Vec<Option<Heartbeat>> {
        vec![Some(honest.clone()); degree]
    }
}

/// Round-bound oracle wrapping every node's role. Round coins are drawn up
/// front; per-query and per-neighbor draws come from streams keyed by the
/// exchange itself, so evaluation order never matters.
#[derive(Debug, Clone)]
pub struct AdversaryOracle<'a> {
    roles: &'a [AdversaryKind],
    spec: &'a AdversarySpec,
    streams: StreamTree,
    round: u32,
    coins: Vec<bool>,
}

impl<'a> AdversaryOracle<'a> {
    pub fn new(roles: &'a [AdversaryKind], spec: &'a AdversarySpec, streams: StreamTree, round: u32) -> Self {
        let coins = roles
            .iter()
            .enumerate()
            .map(|(node, &kind)| {
                if kind.is_honest() {
                    false
                } else {
                    round_coin(kind, spec, &mut streams.stream(Purpose::RoundCoin, &[round as u64, node as u64]))
                }
            })
            .collect();
        Self { roles, spec, streams, round, coins }
    }

    pub fn roles(&self) -> &[AdversaryKind] {
        self.roles
    }

    pub fn round_coin(&self, node: usize) -> bool {
        self.coins[node]
    }
}

impl QueryOracle for AdversaryOracle<'_> {
    fn respond(&self, responder: usize, querier: usize, query: usize, true_opinion: Opinion) -> Option<Opinion> {
        let kind = self.roles[responder];
        match kind {
            AdversaryKind::Honest => Some(true_opinion),
            AdversaryKind::Cautious => {
                respond_to_query(kind, true_opinion, self.spec, self.coins[responder], &mut SimRng::from_key(0))
            }
            AdversaryKind::SemiCautious | AdversaryKind::Berserk => {
                let mut rng = self.streams.stream(
                    Purpose::QueryResponse,
                    &[self.round as u64, responder as u64, querier as u64, query as u64],
                );
                respond_to_query(kind, true_opinion, self.spec, false, &mut rng)
            }
        }
    }
}

impl EmissionOracle for AdversaryOracle<'_> {
    fn emit(&self, node: usize, honest: &Heartbeat, degree: usize) -> Vec<Option<Heartbeat>> {
        let kind = self.roles[node];
        if kind.is_honest() {
            return vec![Some(honest.clone()); degree];
        }
        let mut rng = self.streams.stream(Purpose::HeartbeatLie, &[self.round as u64, node as u64]);
        emit_heartbeat(kind, honest, self.spec, self.coins[node], degree, &mut rng)
    }
}
