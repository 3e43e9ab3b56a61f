//! Slot-assignment mechanism: greedy local maxima claim the best available
//! slot; payments are the rate-weighted telescoping sums over the per-slot
//! critical thresholds.

use std::collections::{HashMap, HashSet};

use num_traits::Zero;

use crate::coloring::{color_graph, ColorAssignment};
use crate::error::{Error, Result};
use crate::graph::{beats, BidVector, NodeId, Objective, TieKey, WeightedGraph};
use crate::myerson::{Label, Mechanism};
use crate::sim::{
    self, enum_bits, Control, ExecutionModel, FieldEnc, NodeCtx, NodeProgram, Outbox, Payload,
    RoundTrace,
};
use crate::Rat;

/// Slot rates, best slot first, padded with zeros to exactly Δ+1 entries.
/// Bids live on the grid `{0..=bid_cap}`; true weights are positive.
#[derive(Clone, Debug, PartialEq)]
pub struct RateSchedule {
    rates: Vec<Rat>,
    bid_cap: u32,
}

impl RateSchedule {
    pub fn for_graph(g: &WeightedGraph, raw: &[Rat]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::InvalidInput(
                "rate schedule must be non-empty".into(),
            ));
        }
        for (i, rate) in raw.iter().enumerate() {
            if *rate < Rat::zero() {
                return Err(Error::InvalidInput(format!("rate {i} is negative")));
            }
            if i > 0 && raw[i - 1] < *rate {
                return Err(Error::InvalidInput(format!(
                    "rates must be non-increasing, rate {i} exceeds its predecessor"
                )));
            }
        }
        let slots = g.max_degree() + 1;
        let mut rates: Vec<Rat> = raw.iter().copied().take(slots).collect();
        rates.resize(slots, Rat::zero());
        Ok(Self {
            rates,
            bid_cap: g.weight_bound(),
        })
    }

    pub fn slots(&self) -> usize {
        self.rates.len()
    }

    pub fn bid_cap(&self) -> u32 {
        self.bid_cap
    }

    /// Rate of a 1-based slot index; out-of-range slots rate zero.
    pub fn rate(&self, slot: u32) -> Rat {
        if slot == 0 || slot as usize > self.rates.len() {
            Rat::zero()
        } else {
            self.rates[slot as usize - 1]
        }
    }

    pub fn rate_sum(&self) -> Rat {
        self.rates.iter().copied().sum()
    }

    pub fn best_rate(&self) -> Rat {
        self.rates.first().copied().unwrap_or_else(Rat::zero)
    }
}

#[derive(Clone)]
enum SlotMsg {
    Share { bid: u32, color: u32 },
    Assigned { slot: u32 },
}

impl Payload for SlotMsg {
    fn bit_len(&self, enc: &FieldEnc) -> u64 {
        let tag = enum_bits(2);
        match self {
            SlotMsg::Share { .. } => tag + enc.value_bits + enc.id_bits,
            SlotMsg::Assigned { .. } => tag + enc.id_bits,
        }
    }
}

struct SlotState {
    round: u64,
    key: TieKey,
    active_neighbors: HashMap<NodeId, TieKey>,
    used_slots: HashSet<u32>,
}

struct SlotProgram<'a> {
    bids: &'a BidVector,
    colors: &'a [u32],
    slots: u32,
}

impl NodeProgram for SlotProgram<'_> {
    type State = SlotState;
    type Msg = SlotMsg;
    type Output = u32;

    fn init(&self, ctx: &NodeCtx) -> Self::State {
        SlotState {
            round: 0,
            key: TieKey::new(self.bids.get(ctx.id), self.colors[ctx.id]),
            active_neighbors: HashMap::new(),
            used_slots: HashSet::new(),
        }
    }

    fn round(
        &self,
        ctx: &NodeCtx,
        state: &mut Self::State,
        inbox: &[(NodeId, Self::Msg)],
        out: &mut Outbox<Self::Msg>,
    ) -> Result<Control<Self::Output>> {
        state.round += 1;
        for (from, msg) in inbox {
            match msg {
                SlotMsg::Share { bid, color } => {
                    state
                        .active_neighbors
                        .insert(*from, TieKey::new(*bid, *color));
                }
                SlotMsg::Assigned { slot } => {
                    state.active_neighbors.remove(from);
                    state.used_slots.insert(*slot);
                }
            }
        }
        if state.round == 1 {
            out.broadcast(
                ctx.neighbors,
                SlotMsg::Share {
                    bid: state.key.value,
                    color: state.key.color,
                },
            );
            return Ok(Control::Continue);
        }
        let mut local_max = true;
        for key in state.active_neighbors.values() {
            if !beats(state.key, *key, Objective::Max)? {
                local_max = false;
                break;
            }
        }
        if local_max {
            let slot = (1..=self.slots)
                .find(|s| !state.used_slots.contains(s))
                .ok_or_else(|| Error::Internal("no free slot in the palette".into()))?;
            for &u in state.active_neighbors.keys() {
                out.send(u, SlotMsg::Assigned { slot });
            }
            return Ok(Control::Halt(slot));
        }
        Ok(Control::Continue)
    }
}

/// Greedy slot assignment: every node receives a slot in `1..=Δ+1`, adjacent
/// nodes receive distinct slots, and a local maximum takes the lowest slot
/// not announced by an already-assigned neighbor.
pub fn slot_allocate(
    g: &WeightedGraph,
    bids: &BidVector,
    coloring: &ColorAssignment,
    rates: &RateSchedule,
    model: &ExecutionModel,
) -> Result<(Vec<u32>, RoundTrace)> {
    bids.validate_for(g)?;
    let program = SlotProgram {
        bids,
        colors: &coloring.colors,
        slots: rates.slots() as u32,
    };
    sim::run(&program, g, model, sim::default_round_cap(g))
}

/// Per-slot critical thresholds of one node: `(slot, rate, bid)` breakpoints
/// with strictly improving rates and strictly increasing bids.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdTable {
    pub entries: Vec<ThresholdEntry>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdEntry {
    pub slot: u32,
    pub rate: Rat,
    pub bid: u32,
}

/// Scans every probe bid through the allocation and records the first bid
/// achieving each strictly better rate. A rate drop along the scan is a
/// monotonicity violation.
pub fn slot_thresholds(
    g: &WeightedGraph,
    bids: &BidVector,
    coloring: &ColorAssignment,
    rates: &RateSchedule,
    v: NodeId,
    model: &ExecutionModel,
) -> Result<ThresholdTable> {
    let mut entries: Vec<ThresholdEntry> = Vec::new();
    for x in 0..=rates.bid_cap() {
        let (labels, _) = slot_allocate(g, &bids.with_bid(v, x), coloring, rates, model)?;
        let slot = labels[v];
        let rate = rates.rate(slot);
        match entries.last() {
            None => entries.push(ThresholdEntry { slot, rate, bid: x }),
            Some(last) => {
                if rate < last.rate {
                    return Err(Error::MonotonicityViolation {
                        node: v,
                        selected_bid: last.bid,
                        unselected_bid: x,
                    });
                }
                if rate > last.rate {
                    entries.push(ThresholdEntry { slot, rate, bid: x });
                }
            }
        }
    }
    Ok(ThresholdTable { entries })
}

/// Myerson payment for the assigned slot: the telescoping sum
/// `-(sum of (rate_k - rate_{k-1}) * bid_k)` over the table entries up to the
/// assigned slot's rate, with rate_0 = 0.
pub fn slot_payment(
    table: &ThresholdTable,
    assigned_slot: u32,
    rates: &RateSchedule,
) -> Result<Rat> {
    let target = rates.rate(assigned_slot);
    let position = table
        .entries
        .iter()
        .position(|e| e.rate == target)
        .ok_or_else(|| {
            Error::Internal(format!(
                "assigned slot {assigned_slot} absent from threshold table"
            ))
        })?;
    let mut payment = Rat::zero();
    let mut prev_rate = Rat::zero();
    for entry in &table.entries[..=position] {
        payment -= (entry.rate - prev_rate) * Rat::from_integer(entry.bid as i64);
        prev_rate = entry.rate;
    }
    Ok(payment)
}

/// Brute-force ratio check against the exact optimum over all proper slot
/// assignments: asserts `opt <= rate_1 * (Δ+1) / (sum of rates) * alg`.
pub fn slot_verify_ratio(
    g: &WeightedGraph,
    assignment: &[u32],
    rates: &RateSchedule,
) -> Result<(Rat, Rat)> {
    let weights: Vec<Rat> = g
        .weights()
        .iter()
        .map(|&w| Rat::from_integer(w as i64))
        .collect();
    let opt = crate::oracle::opt_slot(g, &weights, rates)?;
    let alg: Rat = (0..g.node_count())
        .map(|v| rates.rate(assignment[v]) * weights[v])
        .sum();
    let rate_sum = rates.rate_sum();
    if rate_sum.is_zero() {
        return Ok((opt, Rat::from_integer(1)));
    }
    let factor = rates.best_rate() * Rat::from_integer(rates.slots() as i64) / rate_sum;
    if opt > factor * alg {
        return Err(Error::Internal(format!(
            "approximation bound violated: opt {opt} > {factor} * alg {alg}"
        )));
    }
    let ratio = if alg.is_zero() {
        Rat::from_integer(1)
    } else {
        opt / alg
    };
    Ok((opt, ratio))
}

/// The slot-assignment mechanism with multi-threshold payments.
pub struct SlotMechanism {
    coloring: ColorAssignment,
    coloring_trace: RoundTrace,
    rates: RateSchedule,
}

impl SlotMechanism {
    pub fn new(g: &WeightedGraph, model: &ExecutionModel, raw_rates: &[Rat]) -> Result<Self> {
        let (coloring, coloring_trace) = color_graph(g, model)?;
        let rates = RateSchedule::for_graph(g, raw_rates)?;
        Ok(Self {
            coloring,
            coloring_trace,
            rates,
        })
    }

    pub fn rates(&self) -> &RateSchedule {
        &self.rates
    }

    pub fn coloring(&self) -> &ColorAssignment {
        &self.coloring
    }

    pub fn thresholds(
        &self,
        g: &WeightedGraph,
        bids: &BidVector,
        v: NodeId,
        model: &ExecutionModel,
    ) -> Result<ThresholdTable> {
        slot_thresholds(g, bids, &self.coloring, &self.rates, v, model)
    }
}

impl Mechanism for SlotMechanism {
    fn name(&self) -> &'static str {
        "slot"
    }

    fn objective(&self) -> Objective {
        Objective::Max
    }

    fn allocate(
        &self,
        g: &WeightedGraph,
        bids: &BidVector,
        model: &ExecutionModel,
    ) -> Result<(Vec<Label>, RoundTrace)> {
        slot_allocate(g, bids, &self.coloring, &self.rates, model)
    }

    fn selected(&self, label: Label) -> bool {
        label >= 1
    }

    fn quality(&self, label: Label) -> Rat {
        self.rates.rate(label)
    }

    fn utility(&self, _: &WeightedGraph, labels: &[Label], v: NodeId, true_weight: Rat) -> Rat {
        self.rates.rate(labels[v]) * true_weight
    }

    fn payments(
        &self,
        g: &WeightedGraph,
        bids: &BidVector,
        labels: &[Label],
        model: &ExecutionModel,
    ) -> Result<(Vec<Rat>, RoundTrace)> {
        let mut payments = Vec::with_capacity(g.node_count());
        for (v, &label) in labels.iter().enumerate() {
            let table = slot_thresholds(g, bids, &self.coloring, &self.rates, v, model)?;
            payments.push(slot_payment(&table, label, &self.rates)?);
        }
        Ok((payments, RoundTrace::default()))
    }

    fn coloring_trace(&self) -> RoundTrace {
        self.coloring_trace
    }
}
