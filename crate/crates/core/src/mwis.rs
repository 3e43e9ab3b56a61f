//! Greedy maximum-weight independent set mechanism: repeated selection of
//! local maxima under the color tie-break order, plus the small-message
//! critical-price protocol that runs in the CONGEST model.

use std::collections::HashMap;

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

/// Which side wins a value tie. `LargerColorWins` exists only so the mutation
/// tests can plant a variant with the comparison flipped everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum TiePolicy {
    SmallerColorWins,
    LargerColorWins,
}

pub(crate) fn policy_beats(a: TieKey, b: TieKey, policy: TiePolicy) -> Result<bool> {
    match policy {
        TiePolicy::SmallerColorWins => beats(a, b, Objective::Max),
        TiePolicy::LargerColorWins => {
            if a.color == b.color {
                return Err(Error::ContractViolation(format!(
                    "tie comparison on equal colors {}",
                    a.color
                )));
            }
            Ok(a.value > b.value || (a.value == b.value && a.color > b.color))
        }
    }
}

#[derive(Clone)]
enum AllocMsg {
    Share { bid: u32, color: u32 },
    Joining,
    Eliminated,
}

impl Payload for AllocMsg {
    fn bit_len(&self, enc: &FieldEnc) -> u64 {
        let tag = enum_bits(3);
        match self {
            AllocMsg::Share { .. } => tag + enc.value_bits + enc.id_bits,
            AllocMsg::Joining | AllocMsg::Eliminated => tag,
        }
    }
}

struct AllocState {
    round: u64,
    key: TieKey,
    active_neighbors: HashMap<NodeId, TieKey>,
    eliminated: bool,
}

struct AllocProgram<'a> {
    bids: &'a BidVector,
    colors: &'a [u32],
    policy: TiePolicy,
}

impl NodeProgram for AllocProgram<'_> {
    type State = AllocState;
    type Msg = AllocMsg;
    type Output = bool;

    fn init(&self, ctx: &NodeCtx) -> Self::State {
        AllocState {
            round: 0,
            key: TieKey::new(self.bids.get(ctx.id), self.colors[ctx.id]),
            active_neighbors: HashMap::new(),
            eliminated: false,
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
                AllocMsg::Share { bid, color } => {
                    state
                        .active_neighbors
                        .insert(*from, TieKey::new(*bid, *color));
                }
                AllocMsg::Joining => {
                    state.active_neighbors.remove(from);
                    state.eliminated = true;
                }
                AllocMsg::Eliminated => {
                    state.active_neighbors.remove(from);
                }
            }
        }
        if state.round == 1 {
            out.broadcast(
                ctx.neighbors,
                AllocMsg::Share {
                    bid: state.key.value,
                    color: state.key.color,
                },
            );
            return Ok(Control::Continue);
        }
        if state.eliminated {
            // Announce the elimination once and stop.
            for &u in state.active_neighbors.keys() {
                out.send(u, AllocMsg::Eliminated);
            }
            return Ok(Control::Halt(false));
        }
        if state.round % 2 == 0 {
            let mut local_max = true;
            for key in state.active_neighbors.values() {
                if !policy_beats(state.key, *key, self.policy)? {
                    local_max = false;
                    break;
                }
            }
            if local_max {
                for &u in state.active_neighbors.keys() {
                    out.send(u, AllocMsg::Joining);
                }
                return Ok(Control::Halt(true));
            }
        }
        Ok(Control::Continue)
    }
}

/// Runs the greedy selection of local maxima. Returns the independent set as
/// a membership vector; it is independent and maximal in `g`.
pub fn mwis_allocate(
    g: &WeightedGraph,
    bids: &BidVector,
    coloring: &ColorAssignment,
    model: &ExecutionModel,
) -> Result<(Vec<bool>, RoundTrace)> {
    mwis_allocate_with(g, bids, coloring, model, TiePolicy::SmallerColorWins)
}

pub(crate) fn mwis_allocate_with(
    g: &WeightedGraph,
    bids: &BidVector,
    coloring: &ColorAssignment,
    model: &ExecutionModel,
    policy: TiePolicy,
) -> Result<(Vec<bool>, RoundTrace)> {
    bids.validate_for(g)?;
    let program = AllocProgram {
        bids,
        colors: &coloring.colors,
        policy,
    };
    sim::run(&program, g, model, sim::default_round_cap(g))
}

#[derive(Clone)]
enum PriceMsg {
    Share { bid: u32, color: u32, in_set: bool },
    Answer { blocked: bool },
}

impl Payload for PriceMsg {
    fn bit_len(&self, enc: &FieldEnc) -> u64 {
        let tag = enum_bits(2);
        match self {
            PriceMsg::Share { .. } => tag + enc.value_bits + enc.id_bits + 1,
            PriceMsg::Answer { .. } => tag + 1,
        }
    }
}

struct PriceState {
    round: u64,
    key: TieKey,
    in_set: bool,
    neighbors: HashMap<NodeId, (TieKey, bool)>,
    answers: HashMap<NodeId, bool>,
}

struct PriceProgram<'a> {
    bids: &'a BidVector,
    colors: &'a [u32],
    in_set: &'a [bool],
    policy: TiePolicy,
    use_blocking: bool,
}

impl NodeProgram for PriceProgram<'_> {
    type State = PriceState;
    type Msg = PriceMsg;
    type Output = Option<u32>;

    fn init(&self, ctx: &NodeCtx) -> Self::State {
        PriceState {
            round: 0,
            key: TieKey::new(self.bids.get(ctx.id), self.colors[ctx.id]),
            in_set: self.in_set[ctx.id],
            neighbors: HashMap::new(),
            answers: HashMap::new(),
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
                PriceMsg::Share { bid, color, in_set } => {
                    state
                        .neighbors
                        .insert(*from, (TieKey::new(*bid, *color), *in_set));
                }
                PriceMsg::Answer { blocked } => {
                    state.answers.insert(*from, *blocked);
                }
            }
        }
        match state.round {
            1 => {
                out.broadcast(
                    ctx.neighbors,
                    PriceMsg::Share {
                        bid: state.key.value,
                        color: state.key.color,
                        in_set: state.in_set,
                    },
                );
                Ok(Control::Continue)
            }
            2 => {
                // Answer every selected neighbor whether a blocking neighbor
                // exists once the asking node is excluded.
                for (&v, &(_, v_in_set)) in &state.neighbors {
                    if !v_in_set {
                        continue;
                    }
                    let mut blocked = false;
                    for (&x, &(x_key, x_in_set)) in &state.neighbors {
                        if x == v || !x_in_set {
                            continue;
                        }
                        if policy_beats(x_key, state.key, self.policy)? {
                            blocked = true;
                            break;
                        }
                    }
                    out.send(v, PriceMsg::Answer { blocked });
                }
                if state.in_set {
                    Ok(Control::Continue)
                } else {
                    Ok(Control::Halt(None))
                }
            }
            _ => {
                // Smaller neighbors in descending tie order; the first without
                // a blocking neighbor sets the price.
                let mut candidates: Vec<(NodeId, TieKey)> = Vec::new();
                for (&u, &(key, _)) in &state.neighbors {
                    if policy_beats(state.key, key, self.policy)? {
                        candidates.push((u, key));
                    }
                }
                candidates.sort_by(|a, b| {
                    b.1.value
                        .cmp(&a.1.value)
                        .then(a.1.color.cmp(&b.1.color))
                        .then(a.0.cmp(&b.0))
                });
                let mut price = 0;
                for (u, key) in candidates {
                    let blocked = self.use_blocking && *state.answers.get(&u).unwrap_or(&false);
                    if blocked {
                        continue;
                    }
                    price = if state.key.color < key.color {
                        key.value
                    } else {
                        key.value + 1
                    };
                    break;
                }
                Ok(Control::Halt(Some(price)))
            }
        }
    }
}

/// Critical prices for the members of `in_set` via the constant-round
/// blocking-neighbor protocol; every message fits the CONGEST budget.
pub fn mwis_prices_congest(
    g: &WeightedGraph,
    bids: &BidVector,
    coloring: &ColorAssignment,
    in_set: &[bool],
    model: &ExecutionModel,
) -> Result<(Vec<Option<u32>>, RoundTrace)> {
    mwis_prices_congest_with(
        g,
        bids,
        coloring,
        in_set,
        model,
        TiePolicy::SmallerColorWins,
        true,
    )
}

pub(crate) fn mwis_prices_congest_with(
    g: &WeightedGraph,
    bids: &BidVector,
    coloring: &ColorAssignment,
    in_set: &[bool],
    model: &ExecutionModel,
    policy: TiePolicy,
    use_blocking: bool,
) -> Result<(Vec<Option<u32>>, RoundTrace)> {
    let program = PriceProgram {
        bids,
        colors: &coloring.colors,
        in_set,
        policy,
        use_blocking,
    };
    sim::run(&program, g, model, sim::default_round_cap(g))
}

/// Brute-force ratio check: exhaustive optimum against the greedy weight.
/// Asserts the degree bound `opt <= max(Δ,1) * w(I)`.
pub fn mwis_verify_ratio(g: &WeightedGraph, in_set: &[bool]) -> Result<(u64, Rat)> {
    let weights: Vec<Rat> = g
        .weights()
        .iter()
        .map(|&w| Rat::from_integer(w as i64))
        .collect();
    let opt = crate::oracle::opt_mwis(g, &weights)?;
    let alg: Rat = (0..g.node_count())
        .filter(|&v| in_set[v])
        .map(|v| weights[v])
        .sum();
    let delta = Rat::from_integer(g.max_degree().max(1) as i64);
    if opt > delta * alg {
        return Err(Error::Internal(format!(
            "approximation bound violated: opt {opt} > {delta} * alg {alg}"
        )));
    }
    let ratio = if alg.is_zero() {
        Rat::from_integer(1)
    } else {
        opt / alg
    };
    Ok((opt.to_integer() as u64, ratio))
}

/// Directed dependency edges `(u, v)` for every adjacent pair with
/// `key(u) < key(v)` in the tie order. Test support for locality checks.
pub fn dependency_edges(
    g: &WeightedGraph,
    bids: &BidVector,
    coloring: &ColorAssignment,
) -> Result<Vec<(NodeId, NodeId)>> {
    let mut out = Vec::new();
    for &(u, v) in g.edges() {
        let ku = TieKey::new(bids.get(u), coloring.colors[u]);
        let kv = TieKey::new(bids.get(v), coloring.colors[v]);
        if beats(kv, ku, Objective::Max)? {
            out.push((u, v));
        } else {
            out.push((v, u));
        }
    }
    Ok(out)
}

/// Nodes reachable from `v` along dependency edges (successors transitively).
/// A node's membership in the greedy set depends only on this set.
pub fn dependency_reachable(
    g: &WeightedGraph,
    bids: &BidVector,
    coloring: &ColorAssignment,
    v: NodeId,
) -> Result<Vec<NodeId>> {
    let edges = dependency_edges(g, bids, coloring)?;
    let mut succ: Vec<Vec<NodeId>> = vec![Vec::new(); g.node_count()];
    for (a, b) in edges {
        succ[a].push(b);
    }
    let mut seen = vec![false; g.node_count()];
    let mut stack = vec![v];
    seen[v] = true;
    while let Some(x) = stack.pop() {
        for &y in &succ[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    Ok((0..g.node_count()).filter(|&x| seen[x]).collect())
}

/// The greedy independent-set mechanism with CONGEST price protocol payments.
pub struct MwisMechanism {
    coloring: ColorAssignment,
    coloring_trace: RoundTrace,
    pub(crate) policy: TiePolicy,
    pub(crate) use_blocking: bool,
}

impl MwisMechanism {
    pub fn new(g: &WeightedGraph, model: &ExecutionModel) -> Result<Self> {
        let (coloring, coloring_trace) = color_graph(g, model)?;
        Ok(Self {
            coloring,
            coloring_trace,
            policy: TiePolicy::SmallerColorWins,
            use_blocking: true,
        })
    }

    pub fn coloring(&self) -> &ColorAssignment {
        &self.coloring
    }

    /// Allocation plus protocol prices in one call.
    pub fn allocate_with_prices(
        &self,
        g: &WeightedGraph,
        bids: &BidVector,
        model: &ExecutionModel,
    ) -> Result<(Vec<bool>, Vec<Option<u32>>, RoundTrace)> {
        let (in_set, alloc_trace) =
            mwis_allocate_with(g, bids, &self.coloring, model, self.policy)?;
        let (prices, price_trace) = mwis_prices_congest_with(
            g,
            bids,
            &self.coloring,
            &in_set,
            model,
            self.policy,
            self.use_blocking,
        )?;
        Ok((in_set, prices, alloc_trace.then(&price_trace)))
    }
}

impl Mechanism for MwisMechanism {
    fn name(&self) -> &'static str {
        "mwis"
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
        let (in_set, trace) = mwis_allocate_with(g, bids, &self.coloring, model, self.policy)?;
        Ok((in_set.into_iter().map(u32::from).collect(), trace))
    }

    fn selected(&self, label: Label) -> bool {
        label == 1
    }

    fn quality(&self, label: Label) -> Rat {
        Rat::from_integer(label as i64)
    }

    fn utility(&self, g: &WeightedGraph, labels: &[Label], v: NodeId, true_weight: Rat) -> Rat {
        // Utility accrues only for independent activation: selected with no
        // selected neighbor. Broken allocations score zero here.
        if labels[v] != 1 {
            return Rat::zero();
        }
        if g.neighbors(v).iter().any(|&u| labels[u] == 1) {
            return Rat::zero();
        }
        true_weight
    }

    fn payments(
        &self,
        g: &WeightedGraph,
        bids: &BidVector,
        labels: &[Label],
        model: &ExecutionModel,
    ) -> Result<(Vec<Rat>, RoundTrace)> {
        let in_set: Vec<bool> = labels.iter().map(|&l| l == 1).collect();
        let (prices, trace) = mwis_prices_congest_with(
            g,
            bids,
            &self.coloring,
            &in_set,
            model,
            self.policy,
            self.use_blocking,
        )?;
        let payments = prices
            .iter()
            .zip(&in_set)
            .map(|(price, &sel)| {
                if sel {
                    let p = price.expect("selected nodes get a protocol price");
                    -Rat::from_integer(p as i64)
                } else {
                    Rat::zero()
                }
            })
            .collect();
        Ok((payments, trace))
    }

    fn coloring_trace(&self) -> RoundTrace {
        self.coloring_trace
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::myerson::{critical_price_scan, run_mechanism};
    use crate::sim::ExecutionModel::Local;

    fn coloring(colors: Vec<u32>) -> ColorAssignment {
        let palette = colors.iter().max().unwrap() + 1;
        ColorAssignment {
            colors,
            palette_size: palette,
        }
    }

    fn path3(w: [u32; 3], bound: u32) -> (WeightedGraph, BidVector) {
        let g = WeightedGraph::new(3, vec![(0, 1), (1, 2)], w.to_vec(), bound).unwrap();
        let b = BidVector::from_weights(&g);
        (g, b)
    }

    #[test]
    fn picks_the_heavy_middle() {
        let (g, b) = path3([1, 5, 1], 5);
        let phi = coloring(vec![0, 1, 0]);
        let (in_set, _) = mwis_allocate(&g, &b, &phi, &Local).unwrap();
        assert_eq!(in_set, vec![false, true, false]);
    }

    #[test]
    fn picks_both_endpoints() {
        let (g, b) = path3([4, 1, 4], 4);
        let phi = coloring(vec![0, 1, 0]);
        let (in_set, _) = mwis_allocate(&g, &b, &phi, &Local).unwrap();
        assert_eq!(in_set, vec![true, false, true]);
    }

    #[test]
    fn equal_weights_go_to_smaller_color() {
        let g = WeightedGraph::new(2, vec![(0, 1)], vec![3, 3], 3).unwrap();
        let b = BidVector::from_weights(&g);
        let (in_set, _) = mwis_allocate(&g, &b, &coloring(vec![0, 1]), &Local).unwrap();
        assert_eq!(in_set, vec![true, false]);
        let (in_set, _) = mwis_allocate(&g, &b, &coloring(vec![1, 0]), &Local).unwrap();
        assert_eq!(in_set, vec![false, true]);
    }

    #[test]
    fn output_is_independent_and_maximal() {
        let g = WeightedGraph::new(
            5,
            vec![(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)],
            vec![3, 1, 4, 1, 5],
            5,
        )
        .unwrap();
        let b = BidVector::from_weights(&g);
        let (phi, _) = color_graph(&g, &Local).unwrap();
        let (in_set, _) = mwis_allocate(&g, &b, &phi, &Local).unwrap();
        for &(u, v) in g.edges() {
            assert!(!(in_set[u] && in_set[v]), "edge ({u},{v}) inside the set");
        }
        for v in 0..g.node_count() {
            if !in_set[v] {
                assert!(
                    g.neighbors(v).iter().any(|&u| in_set[u]),
                    "node {v} could be added"
                );
            }
        }
    }

    #[test]
    fn isolated_node_pays_zero() {
        let g = WeightedGraph::new(1, vec![], vec![7], 7).unwrap();
        let b = BidVector::from_weights(&g);
        let phi = coloring(vec![0]);
        let (in_set, _) = mwis_allocate(&g, &b, &phi, &Local).unwrap();
        let (prices, _) = mwis_prices_congest(&g, &b, &phi, &in_set, &Local).unwrap();
        assert_eq!(prices[0], Some(0));
    }

    #[test]
    fn edge_price_follows_color_branch() {
        let g = WeightedGraph::new(2, vec![(0, 1)], vec![5, 3], 5).unwrap();
        let b = BidVector::from_weights(&g);
        // Winner has the smaller color: pays the loser's bid.
        let phi = coloring(vec![0, 1]);
        let (in_set, _) = mwis_allocate(&g, &b, &phi, &Local).unwrap();
        assert_eq!(in_set, vec![true, false]);
        let (prices, _) = mwis_prices_congest(&g, &b, &phi, &in_set, &Local).unwrap();
        assert_eq!(prices[0], Some(3));
        // Winner has the larger color: must strictly exceed, pays bid + 1.
        let phi = coloring(vec![1, 0]);
        let (in_set, _) = mwis_allocate(&g, &b, &phi, &Local).unwrap();
        let (prices, _) = mwis_prices_congest(&g, &b, &phi, &in_set, &Local).unwrap();
        assert_eq!(prices[0], Some(4));
    }

    #[test]
    fn blocking_neighbor_zeroes_the_price() {
        // Path 0-1-2 with weights (4,3,5): both endpoints join, and node 2's
        // lower neighbor is blocked by node 0, so node 2 is always selected.
        let g = WeightedGraph::new(3, vec![(0, 1), (1, 2)], vec![4, 3, 5], 5).unwrap();
        let b = BidVector::from_weights(&g);
        let phi = coloring(vec![0, 1, 0]);
        let (in_set, _) = mwis_allocate(&g, &b, &phi, &Local).unwrap();
        assert_eq!(in_set, vec![true, false, true]);
        let (prices, _) = mwis_prices_congest(&g, &b, &phi, &in_set, &Local).unwrap();
        assert_eq!(prices[2], Some(0));
        // Node 1 is blocked for node 0 as well: node 2 eliminates it no
        // matter what node 0 bids.
        assert_eq!(prices[0], Some(0));
    }

    #[test]
    fn protocol_matches_rescan_oracle() {
        let graphs = crate::oracle::random_graphs(12, 8, 4, 4, 99);
        for g in &graphs {
            let mech = MwisMechanism::new(g, &Local).unwrap();
            let bids = BidVector::from_weights(g);
            let (in_set, prices, _) = mech.allocate_with_prices(g, &bids, &Local).unwrap();
            for v in 0..g.node_count() {
                if !in_set[v] {
                    continue;
                }
                let oracle = critical_price_scan(&mech, g, &bids, v, &Local).unwrap();
                assert_eq!(prices[v], oracle, "node {v} on {}", g.to_text());
            }
        }
    }

    #[test]
    fn allocation_and_prices_fit_congest_budget() {
        let model = ExecutionModel::Congest { constant: 8 };
        let graphs = crate::oracle::random_graphs(8, 10, 4, 6, 5);
        for g in &graphs {
            let mech = MwisMechanism::new(g, &Local).unwrap();
            let bids = BidVector::from_weights(g);
            let (_, _, trace) = mech.allocate_with_prices(g, &bids, &model).unwrap();
            assert!(sim::assert_congest(&trace, g.node_count(), 8).is_ok());
        }
    }

    #[test]
    fn round_bound_regression() {
        for g in crate::oracle::random_graphs(15, 10, 4, 6, 17) {
            let mech = MwisMechanism::new(&g, &Local).unwrap();
            let bids = BidVector::from_weights(&g);
            let (_, _, trace) = mech.allocate_with_prices(&g, &bids, &Local).unwrap();
            let bound = 2 * (g.max_degree() as u64 + 1) * (g.weight_bound() as u64 + 1) + 8;
            assert!(
                trace.rounds <= bound,
                "rounds {} over {bound}",
                trace.rounds
            );
        }
    }

    #[test]
    fn membership_depends_only_on_reachable_nodes() {
        let graphs = crate::oracle::random_graphs(10, 7, 4, 3, 31);
        for g in &graphs {
            let (phi, _) = color_graph(g, &Local).unwrap();
            let bids = BidVector::from_weights(g);
            let (base, _) = mwis_allocate(g, &bids, &phi, &Local).unwrap();
            for v in 0..g.node_count() {
                let reach = dependency_reachable(g, &bids, &phi, v).unwrap();
                // Lower every unreachable node's bid and re-run. Downward
                // moves keep the unreachable region unreachable; raising a
                // bid could pull the node into the dependency cone.
                let mut mutated = bids.clone();
                for u in 0..g.node_count() {
                    if !reach.contains(&u) {
                        mutated.0[u] = mutated.0[u].saturating_sub(1);
                    }
                }
                let (out, _) = mwis_allocate(g, &mutated, &phi, &Local).unwrap();
                assert_eq!(out[v], base[v], "node {v} changed with unreachable bids");
            }
        }
    }

    #[test]
    fn dependency_graph_is_acyclic() {
        for g in crate::oracle::random_graphs(10, 7, 4, 3, 77) {
            let (phi, _) = color_graph(&g, &Local).unwrap();
            let bids = BidVector::from_weights(&g);
            let edges = dependency_edges(&g, &bids, &phi).unwrap();
            let mut indeg = vec![0usize; g.node_count()];
            let mut succ: Vec<Vec<NodeId>> = vec![Vec::new(); g.node_count()];
            for &(a, b) in &edges {
                succ[a].push(b);
                indeg[b] += 1;
            }
            let mut queue: Vec<NodeId> = (0..g.node_count()).filter(|&v| indeg[v] == 0).collect();
            let mut seen = 0;
            while let Some(v) = queue.pop() {
                seen += 1;
                for &u in &succ[v] {
                    indeg[u] -= 1;
                    if indeg[u] == 0 {
                        queue.push(u);
                    }
                }
            }
            assert_eq!(seen, g.node_count(), "cycle in dependency graph");
        }
    }

    #[test]
    fn ratio_examples() {
        let (g, _) = path3([1, 5, 1], 5);
        let (opt, ratio) = mwis_verify_ratio(&g, &[false, true, false]).unwrap();
        assert_eq!(opt, 5);
        assert_eq!(ratio, Rat::from_integer(1));

        // Star with a heavy-ish center: greedy takes the center.
        let star =
            WeightedGraph::new(4, vec![(0, 1), (0, 2), (0, 3)], vec![2, 1, 1, 1], 2).unwrap();
        let (opt, ratio) = mwis_verify_ratio(&star, &[true, false, false, false]).unwrap();
        assert_eq!(opt, 3);
        assert_eq!(ratio, Rat::new(3, 2));

        let single = WeightedGraph::new(1, vec![], vec![4], 4).unwrap();
        let (opt, ratio) = mwis_verify_ratio(&single, &[true]).unwrap();
        assert_eq!(opt, 4);
        assert_eq!(ratio, Rat::from_integer(1));
    }

    #[test]
    fn run_mechanism_on_isolated_node() {
        let g = WeightedGraph::new(1, vec![], vec![7], 7).unwrap();
        let mech = MwisMechanism::new(&g, &Local).unwrap();
        let res = run_mechanism(&mech, &g, &BidVector::from_weights(&g), &Local).unwrap();
        assert_eq!(res.allocation, vec![1]);
        assert_eq!(res.payments, vec![Rat::zero()]);
        assert_eq!(res.objective_value, Rat::from_integer(7));
    }

    #[test]
    fn utility_is_zero_without_independence() {
        let g = WeightedGraph::new(2, vec![(0, 1)], vec![5, 3], 5).unwrap();
        let mech = MwisMechanism::new(&g, &Local).unwrap();
        // Hand-built broken allocation: both endpoints selected.
        let labels = vec![1, 1];
        assert_eq!(
            mech.utility(&g, &labels, 0, Rat::from_integer(5)),
            Rat::zero()
        );
    }
}
