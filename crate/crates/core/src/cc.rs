//! Cellular Consensus: neighborhood majority with equivocation detection.
//!
//! Each round every node broadcasts a heartbeat with its current opinion and
//! the opinions it received from its neighbors in the previous round. Claims
//! are treated as signed: a relay cannot alter what the subject said, so two
//! different opinions attributed to the same `(subject, round)` prove that the
//! subject equivocated, and the observer blacklists it for good.
//!
//! Round numbering: `cc_round(r)` computes the opinions of round `r` from
//! heartbeats stamped `r - 1`, which carry opinions of round `r - 1` and
//! relayed claims about round `r - 2`.

use std::collections::BTreeSet;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::opinion::Opinion;
use crate::topology::Graph;

#[derive(Debug, Clone, PartialEq)]
pub struct CcParams {
    pub rounds: usize,
}

impl Default for CcParams {
    fn default() -> Self {
        Self { rounds: 30 }
    }
}

impl CcParams {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidParameter("rounds must be >= 1".into()));
        }
        Ok(())
    }
}

/// "`subject` held `opinion` at `round`", as relayed by `attester`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OpinionClaim {
    pub subject: usize,
    pub round: u32,
    pub opinion: Opinion,
    pub attester: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Heartbeat {
    pub sender: usize,
    pub round: u32,
    pub own_opinion: Opinion,
    /// Shared, since the same relay goes to every neighbor.
    pub prior_claims: Arc<[OpinionClaim]>,
}

impl Heartbeat {
    /// The sender's own statement as a claim about itself.
    pub fn self_claim(&self) -> OpinionClaim {
        OpinionClaim { subject: self.sender, round: self.round, opinion: self.own_opinion, attester: self.sender }
    }
}

/// Nodes a single observer has excluded. Only ever grows.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlacklistSet(BTreeSet<usize>);

impl BlacklistSet {
    pub fn contains(&self, node: usize) -> bool {
        self.0.contains(&node)
    }

    pub fn insert(&mut self, node: usize) -> bool {
        self.0.insert(node)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

/// Accepted claims of one observer, keyed by `(subject, round)`.
#[derive(Debug, Clone, Default)]
pub struct ClaimStore(FxHashMap<(usize, u32), Opinion>);

impl ClaimStore {
    pub fn get(&self, subject: usize, round: u32) -> Option<Opinion> {
        self.0.get(&(subject, round)).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn forget_subject(&mut self, subject: usize) {
        self.0.retain(|(s, _), _| *s != subject);
    }

    /// Drops claims about rounds older than `round`.
    pub fn prune_before(&mut self, round: u32) {
        self.0.retain(|(_, r), _| *r >= round);
    }
}

/// Tri-state majority. `Undecided` entries abstain; a tie, or no binary
/// vote at all, gives `Undecided`.
pub fn cc_majority<I: IntoIterator<Item = Opinion>>(opinions: I) -> Opinion {
    let (mut zeros, mut ones) = (0usize, 0usize);
    for o in opinions {
        match o {
            Opinion::Zero => zeros += 1,
            Opinion::One => ones += 1,
            Opinion::Undecided => {}
        }
    }
    match zeros.cmp(&ones) {
        std::cmp::Ordering::Greater => Opinion::Zero,
        std::cmp::Ordering::Less => Opinion::One,
        std::cmp::Ordering::Equal => Opinion::Undecided,
    }
}

/// Honest heartbeat for `node`: its current opinion plus a faithful relay of
/// what each non-blacklisted neighbor said last round.
pub fn build_heartbeat(
    node: usize,
    round: u32,
    own_opinion: Opinion,
    previous_round: &[(usize, Opinion)],
    blacklist: &BlacklistSet,
) -> Heartbeat {
    let prior_claims: Arc<[OpinionClaim]> = if round == 0 {
        Arc::from([])
    } else {
        previous_round
            .iter()
            .filter(|(subject, _)| !blacklist.contains(*subject))
            .map(|&(subject, opinion)| OpinionClaim { subject, round: round - 1, opinion, attester: node })
            .collect()
    };
    Heartbeat { sender: node, round, own_opinion, prior_claims }
}

/// Checks every claim in `incoming` against `store`. A subject with two
/// different opinions for the same round is blacklisted; returns the subjects
/// newly blacklisted by this call, in detection order.
pub fn detect_and_blacklist(
    node: usize,
    incoming: &[&Heartbeat],
    store: &mut ClaimStore,
    blacklist: &mut BlacklistSet,
) -> Vec<usize> {
    let mut newly = Vec::new();
    for hb in incoming {
        if blacklist.contains(hb.sender) {
            continue;
        }
        let claims = std::iter::once(hb.self_claim()).chain(hb.prior_claims.iter().copied());
        for claim in claims {
            if claim.subject == node || blacklist.contains(claim.subject) {
                continue;
            }
            match store.get(claim.subject, claim.round) {
                Some(seen) if seen != claim.opinion => {
                    blacklist.insert(claim.subject);
                    store.forget_subject(claim.subject);
                    newly.push(claim.subject);
                }
                Some(_) => {}
                None => {
                    store.0.insert((claim.subject, claim.round), claim.opinion);
                }
            }
        }
    }
    newly
}

/// Decides what each node actually transmits. The returned vector is aligned
/// with `graph.neighbors(node)`; `None` means that neighbor receives nothing.
pub trait EmissionOracle {
    fn emit(&self, node: usize, honest: &Heartbeat, degree: usize) -> Vec<Option<Heartbeat>>;
}

/// Per-node protocol memory carried between rounds.
///
/// `received[i]` doubles as node `i`'s claim memory: the only claims that can
/// be checked next round are relays about the round those opinions belong to.
#[derive(Debug, Clone)]
pub struct CcState {
    pub blacklists: Vec<BlacklistSet>,
    /// `(sender, own_opinion)` pairs each node accepted in the last round.
    pub received: Vec<Vec<(usize, Opinion)>>,
    pub blacklist_events: usize,
}

impl CcState {
    pub fn new(node_count: usize) -> Self {
        Self {
            blacklists: vec![BlacklistSet::default(); node_count],
            received: vec![Vec::new(); node_count],
            blacklist_events: 0,
        }
    }
}

/// Epoch-stamped claim table indexed by subject, reset in O(1) per observer.
struct ClaimTable {
    epoch: u32,
    previous: Vec<(u32, Opinion)>,
    current: Vec<(u32, Opinion)>,
}

impl ClaimTable {
    fn new(n: usize) -> Self {
        Self { epoch: 0, previous: vec![(0, Opinion::Undecided); n], current: vec![(0, Opinion::Undecided); n] }
    }

    fn reset(&mut self) {
        self.epoch += 1;
    }

    /// Records a claim, or returns `true` if it contradicts an earlier one.
    fn conflicts(&mut self, slot_current: bool, subject: usize, opinion: Opinion) -> bool {
        let table = if slot_current { &mut self.current } else { &mut self.previous };
        let entry = &mut table[subject];
        if entry.0 == self.epoch {
            entry.1 != opinion
        } else {
            *entry = (self.epoch, opinion);
            false
        }
    }
}

/// One synchronous round producing the opinions of `round_index` (>= 1).
///
/// Detection matches [`detect_and_blacklist`] over a store holding the
/// previous round's accepted self-claims. Claims about any round other than
/// the heartbeat's own round or the one before it are ignored.
pub fn cc_round<O: EmissionOracle + ?Sized>(
    graph: &Graph,
    opinions: &[Opinion],
    state: &mut CcState,
    round_index: usize,
    oracle: &O,
) -> Vec<Opinion> {
    assert!(round_index >= 1, "round 0 opinions come from initialization");
    let n = graph.node_count();
    let stamp = (round_index - 1) as u32;
    let relayed = stamp.checked_sub(1);

    let emissions: Vec<Vec<Option<Heartbeat>>> = (0..n)
        .map(|node| {
            let honest = build_heartbeat(node, stamp, opinions[node], &state.received[node], &state.blacklists[node]);
            oracle.emit(node, &honest, graph.degree(node))
        })
        .collect();

    let mut table = ClaimTable::new(n);
    let mut next = Vec::with_capacity(n);
    let mut received_next = Vec::with_capacity(n);
    let mut incoming: Vec<&Heartbeat> = Vec::new();
    for node in 0..n {
        incoming.clear();
        for &sender in graph.neighbors(node) {
            let slot = graph.neighbor_slot(sender, node).expect("symmetric adjacency");
            if let Some(hb) = &emissions[sender][slot] {
                incoming.push(hb);
            }
        }
        let blacklist = &mut state.blacklists[node];

        table.reset();
        if relayed.is_some() {
            for &(subject, opinion) in &state.received[node] {
                table.conflicts(false, subject, opinion);
            }
        }
        for hb in &incoming {
            if blacklist.contains(hb.sender) {
                continue;
            }
            let claims = std::iter::once(hb.self_claim()).chain(hb.prior_claims.iter().copied());
            for claim in claims {
                if claim.subject == node || blacklist.contains(claim.subject) {
                    continue;
                }
                let slot_current = if claim.round == stamp {
                    true
                } else if Some(claim.round) == relayed {
                    false
                } else {
                    continue;
                };
                if table.conflicts(slot_current, claim.subject, claim.opinion) {
                    blacklist.insert(claim.subject);
                    state.blacklist_events += 1;
                }
            }
        }

        let usable: Vec<(usize, Opinion)> =
            incoming.iter().filter(|hb| !blacklist.contains(hb.sender)).map(|hb| (hb.sender, hb.own_opinion)).collect();
        next.push(if usable.is_empty() { opinions[node] } else { cc_majority(usable.iter().map(|&(_, o)| o)) });
        received_next.push(usable);
    }
    state.received = received_next;
    next
}
