//! Greedy minimum-weight dominating set mechanism: repeatedly select 2-hop
//! local minima of ineffectiveness (bid divided by newly-coverable nodes),
//! with ties broken by a square-graph coloring. Includes the non-adaptive
//! variant that joins nodes by global value class, used as an equivalence
//! oracle.
//!
//! One selection step takes four communication rounds here — key exchange,
//! minimum relay, join announcements, and coverage announcements — because a
//! node's ineffectiveness must reflect its neighbors' coverage before the next
//! key exchange.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_traits::Zero;

use crate::coloring::{color_two_hop, ColorAssignment};
use crate::error::{Error, Result};
use crate::graph::{BidVector, NodeId, Objective, WeightedGraph};
use crate::myerson::{critical_prices_all, Label, Mechanism};
use crate::sim::{
    self, enum_bits, Control, ExecutionModel, FieldEnc, NodeCtx, NodeProgram, Outbox, Payload,
    RoundTrace,
};
use crate::Rat;

/// Ineffectiveness key: `bid / den` compared by cross-multiplication, ties to
/// the smaller square-graph color.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IneffKey {
    pub bid: u32,
    pub den: u32,
    pub color: u32,
}

impl IneffKey {
    /// Ascending order is selection priority: smaller ineffectiveness first,
    /// then smaller color.
    pub fn cmp_value(&self, other: &IneffKey) -> Ordering {
        let left = self.bid as u64 * other.den as u64;
        let right = other.bid as u64 * self.den as u64;
        left.cmp(&right).then(self.color.cmp(&other.color))
    }

    pub fn same_value(&self, other: &IneffKey) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

#[derive(Clone)]
enum MwdsMsg {
    Key(IneffKey),
    Min(IneffKey),
    Join,
    Covered,
}

impl Payload for MwdsMsg {
    fn bit_len(&self, enc: &FieldEnc) -> u64 {
        let tag = enum_bits(4);
        match self {
            MwdsMsg::Key(_) | MwdsMsg::Min(_) => tag + enc.value_bits + 2 * enc.id_bits,
            MwdsMsg::Join | MwdsMsg::Covered => tag,
        }
    }
}

struct MwdsState {
    round: u64,
    bid: u32,
    color: u32,
    covered_self: bool,
    announced_cover: bool,
    covered_nbr: HashMap<NodeId, bool>,
    step_keys: HashMap<NodeId, IneffKey>,
}

impl MwdsState {
    fn uncovered_count(&self) -> u32 {
        let own = u32::from(!self.covered_self);
        own + self.covered_nbr.values().filter(|&&c| !c).count() as u32
    }
}

struct MwdsProgram<'a> {
    bids: &'a BidVector,
    colors: &'a [u32],
}

impl NodeProgram for MwdsProgram<'_> {
    type State = MwdsState;
    type Msg = MwdsMsg;
    type Output = (bool, Option<u32>);

    fn init(&self, ctx: &NodeCtx) -> Self::State {
        MwdsState {
            round: 0,
            bid: self.bids.get(ctx.id),
            color: self.colors[ctx.id],
            covered_self: false,
            announced_cover: false,
            covered_nbr: ctx.neighbors.iter().map(|&u| (u, false)).collect(),
            step_keys: HashMap::new(),
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
        let r = state.round;
        let step = ((r - 1) / 4 + 1) as u32;
        match r % 4 {
            1 => {
                // Key round: fold in coverage announcements, then share the
                // current ineffectiveness (inactive nodes stop here).
                for (from, msg) in inbox {
                    if matches!(msg, MwdsMsg::Covered) {
                        state.covered_nbr.insert(*from, true);
                    }
                }
                let den = state.uncovered_count();
                if den == 0 {
                    return Ok(Control::Halt((false, None)));
                }
                state.step_keys.clear();
                out.broadcast(
                    ctx.neighbors,
                    MwdsMsg::Key(IneffKey {
                        bid: state.bid,
                        den,
                        color: state.color,
                    }),
                );
                Ok(Control::Continue)
            }
            2 => {
                // Minimum relay round.
                for (from, msg) in inbox {
                    if let MwdsMsg::Key(key) = msg {
                        state.step_keys.insert(*from, *key);
                    }
                }
                let own = IneffKey {
                    bid: state.bid,
                    den: state.uncovered_count(),
                    color: state.color,
                };
                let mut min = own;
                for key in state.step_keys.values() {
                    if key.cmp_value(&min) == Ordering::Less {
                        min = *key;
                    }
                }
                out.broadcast(ctx.neighbors, MwdsMsg::Min(min));
                Ok(Control::Continue)
            }
            3 => {
                // Join round: a node receiving its own value from every
                // relaying neighbor is the 2-hop local minimum.
                let own = IneffKey {
                    bid: state.bid,
                    den: state.uncovered_count(),
                    color: state.color,
                };
                let mut is_min = state
                    .step_keys
                    .values()
                    .all(|key| own.cmp_value(key) == Ordering::Less);
                for (_, msg) in inbox {
                    if let MwdsMsg::Min(min) = msg {
                        if !min.same_value(&own) {
                            is_min = false;
                        }
                    }
                }
                if is_min {
                    out.broadcast(ctx.neighbors, MwdsMsg::Join);
                    return Ok(Control::Halt((true, Some(step))));
                }
                Ok(Control::Continue)
            }
            _ => {
                // Coverage round: neighbors of fresh joiners mark themselves
                // covered and say so exactly once.
                let mut saw_join = false;
                for (from, msg) in inbox {
                    if matches!(msg, MwdsMsg::Join) {
                        state.covered_nbr.insert(*from, true);
                        saw_join = true;
                    }
                }
                if saw_join && !state.covered_self {
                    state.covered_self = true;
                }
                if state.covered_self && !state.announced_cover {
                    state.announced_cover = true;
                    out.broadcast(ctx.neighbors, MwdsMsg::Covered);
                }
                Ok(Control::Continue)
            }
        }
    }
}

/// Runs the adaptive greedy selection. Returns dominating-set membership and,
/// for members, the step at which they joined.
pub fn mwds_allocate(
    g: &WeightedGraph,
    bids: &BidVector,
    two_hop_coloring: &ColorAssignment,
    model: &ExecutionModel,
) -> Result<(Vec<bool>, Vec<Option<u32>>, RoundTrace)> {
    bids.validate_for(g)?;
    let program = MwdsProgram {
        bids,
        colors: &two_hop_coloring.colors,
    };
    let (outputs, trace) = sim::run(&program, g, model, sim::default_round_cap(g).max(4096))?;
    let mut in_d = vec![false; g.node_count()];
    let mut steps = vec![None; g.node_count()];
    for (v, (d, step)) in outputs.into_iter().enumerate() {
        in_d[v] = d;
        steps[v] = step;
    }
    Ok((in_d, steps, trace))
}

/// Non-adaptive variant: iterate the global value classes of (ineffectiveness,
/// color) in ascending order; at each class, every active node whose current
/// key matches joins. Produces the same set as the adaptive algorithm.
pub fn mwds_allocate_nonadaptive(
    g: &WeightedGraph,
    bids: &BidVector,
    two_hop_coloring: &ColorAssignment,
) -> Result<Vec<bool>> {
    bids.validate_for(g)?;
    let n = g.node_count();
    let delta = g.max_degree() as u32;
    let mut classes: Vec<IneffKey> = Vec::new();
    for bid in 0..=g.weight_bound() {
        for den in 1..=(delta + 1) {
            for color in 0..two_hop_coloring.palette_size {
                classes.push(IneffKey { bid, den, color });
            }
        }
    }
    classes.sort_by(IneffKey::cmp_value);
    classes.dedup_by(|a, b| a.same_value(b));

    let mut covered = vec![false; n];
    let mut in_d = vec![false; n];
    let uncovered_count = |covered: &[bool], v: NodeId| -> u32 {
        let own = u32::from(!covered[v]);
        own + g.neighbors(v).iter().filter(|&&u| !covered[u]).count() as u32
    };
    for class in &classes {
        let joiners: Vec<NodeId> = (0..n)
            .filter(|&v| !in_d[v])
            .filter(|&v| {
                let den = uncovered_count(&covered, v);
                den >= 1
                    && class.same_value(&IneffKey {
                        bid: bids.get(v),
                        den,
                        color: two_hop_coloring.colors[v],
                    })
            })
            .collect();
        for v in joiners {
            in_d[v] = true;
            covered[v] = true;
            for &u in g.neighbors(v) {
                covered[u] = true;
            }
        }
    }
    Ok(in_d)
}

/// Minimisation critical prices for dominating-set members via generic local
/// re-simulation.
pub fn mwds_prices(
    mech: &MwdsMechanism,
    g: &WeightedGraph,
    bids: &BidVector,
    in_d: &[bool],
    model: &ExecutionModel,
) -> Result<Vec<Option<u32>>> {
    let labels: Vec<Label> = in_d.iter().map(|&d| u32::from(d)).collect();
    critical_prices_all(mech, g, bids, &labels, model)
}

/// Exact harmonic number `H_k`.
pub fn harmonic(k: u32) -> Rat {
    (1..=k as i64).map(|i| Rat::new(1, i)).sum()
}

/// Brute-force ratio check: asserts `w(D) <= H_{Δ+1} * opt`.
pub fn mwds_verify_ratio(g: &WeightedGraph, in_d: &[bool]) -> Result<(Rat, Rat)> {
    let weights: Vec<Rat> = g
        .weights()
        .iter()
        .map(|&w| Rat::from_integer(w as i64))
        .collect();
    let opt = crate::oracle::opt_mwds(g, &weights)?;
    let alg: Rat = (0..g.node_count())
        .filter(|&v| in_d[v])
        .map(|v| weights[v])
        .sum();
    let bound = harmonic(g.max_degree() as u32 + 1);
    if alg > bound * opt {
        return Err(Error::Internal(format!(
            "approximation bound violated: alg {alg} > H * opt {opt}"
        )));
    }
    let ratio = if opt.is_zero() {
        Rat::from_integer(1)
    } else {
        alg / opt
    };
    Ok((opt, ratio))
}

/// The greedy dominating-set mechanism.
pub struct MwdsMechanism {
    coloring: ColorAssignment,
    coloring_trace: RoundTrace,
}

impl MwdsMechanism {
    pub fn new(g: &WeightedGraph, model: &ExecutionModel) -> Result<Self> {
        let (coloring, coloring_trace) = color_two_hop(g, model)?;
        Ok(Self {
            coloring,
            coloring_trace,
        })
    }

    pub fn coloring(&self) -> &ColorAssignment {
        &self.coloring
    }

    pub fn outcome(
        &self,
        g: &WeightedGraph,
        bids: &BidVector,
        model: &ExecutionModel,
    ) -> Result<(Vec<bool>, Vec<Option<u32>>, RoundTrace)> {
        mwds_allocate(g, bids, &self.coloring, model)
    }
}

impl Mechanism for MwdsMechanism {
    fn name(&self) -> &'static str {
        "mwds"
    }

    fn objective(&self) -> Objective {
        Objective::Min
    }

    fn allocate(
        &self,
        g: &WeightedGraph,
        bids: &BidVector,
        model: &ExecutionModel,
    ) -> Result<(Vec<Label>, RoundTrace)> {
        let (in_d, _, trace) = mwds_allocate(g, bids, &self.coloring, model)?;
        Ok((in_d.into_iter().map(u32::from).collect(), trace))
    }

    fn selected(&self, label: Label) -> bool {
        label == 1
    }

    fn quality(&self, label: Label) -> Rat {
        Rat::from_integer(label as i64)
    }

    fn utility(&self, _: &WeightedGraph, labels: &[Label], v: NodeId, true_weight: Rat) -> Rat {
        if labels[v] == 1 {
            -true_weight
        } else {
            Rat::zero()
        }
    }

    fn coloring_trace(&self) -> RoundTrace {
        self.coloring_trace
    }
}
