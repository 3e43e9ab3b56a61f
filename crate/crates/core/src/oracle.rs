//! Brute-force ground truth and exhaustive property sweeps: exact optima on
//! small instances, monotonicity and truthfulness checkers, and the
//! deterministic instance corpus they run on.

use std::collections::HashMap;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{BidVector, Objective, WeightedGraph};
use crate::mwds::{harmonic, mwds_allocate_nonadaptive, MwdsMechanism};
use crate::mwis::MwisMechanism;
use crate::mwvc::MwvcMechanism;
use crate::myerson::{
    critical_price, critical_price_scan, discretize, DiscretizationConfig, Label, Mechanism,
};
use crate::sim::{assert_congest, ExecutionModel};
use crate::slot::{RateSchedule, SlotMechanism};
use crate::Rat;

const LOCAL: ExecutionModel = ExecutionModel::Local;

// ---------------------------------------------------------------------------
// Exact optima
// ---------------------------------------------------------------------------

const SUBSET_CAP: usize = 20;

fn subset_cap(g: &WeightedGraph) -> Result<()> {
    if g.node_count() > SUBSET_CAP {
        return Err(Error::BruteForceCap(format!(
            "{} nodes exceeds the subset enumeration cap {SUBSET_CAP}",
            g.node_count()
        )));
    }
    Ok(())
}

fn is_independent(g: &WeightedGraph, mask: u32) -> bool {
    g.edges()
        .iter()
        .all(|&(u, v)| mask & (1 << u) == 0 || mask & (1 << v) == 0)
}

fn is_cover(g: &WeightedGraph, mask: u32) -> bool {
    g.edges()
        .iter()
        .all(|&(u, v)| mask & (1 << u) != 0 || mask & (1 << v) != 0)
}

fn is_dominating(g: &WeightedGraph, mask: u32) -> bool {
    (0..g.node_count())
        .all(|v| mask & (1 << v) != 0 || g.neighbors(v).iter().any(|&u| mask & (1 << u) != 0))
}

fn mask_weight(w: &[Rat], mask: u32) -> Rat {
    w.iter()
        .enumerate()
        .filter(|(v, _)| mask & (1 << v) != 0)
        .map(|(_, weight)| *weight)
        .sum()
}

/// Maximum weight over independent sets, by subset enumeration.
pub fn opt_mwis(g: &WeightedGraph, w: &[Rat]) -> Result<Rat> {
    subset_cap(g)?;
    let mut best = Rat::zero();
    for mask in 0..(1u32 << g.node_count()) {
        if is_independent(g, mask) {
            best = best.max(mask_weight(w, mask));
        }
    }
    Ok(best)
}

/// Minimum weight over vertex covers, by subset enumeration.
pub fn opt_mwvc(g: &WeightedGraph, w: &[Rat]) -> Result<Rat> {
    subset_cap(g)?;
    let mut best: Option<Rat> = None;
    for mask in 0..(1u32 << g.node_count()) {
        if is_cover(g, mask) {
            let weight = mask_weight(w, mask);
            best = Some(match best {
                None => weight,
                Some(b) => b.min(weight),
            });
        }
    }
    best.ok_or_else(|| Error::Internal("no vertex cover found".into()))
}

/// Minimum weight over dominating sets, by subset enumeration.
pub fn opt_mwds(g: &WeightedGraph, w: &[Rat]) -> Result<Rat> {
    subset_cap(g)?;
    let mut best: Option<Rat> = None;
    for mask in 0..(1u32 << g.node_count()) {
        if is_dominating(g, mask) {
            let weight = mask_weight(w, mask);
            best = Some(match best {
                None => weight,
                Some(b) => b.min(weight),
            });
        }
    }
    best.ok_or_else(|| Error::Internal("no dominating set found".into()))
}

/// Second route for the optima: recursive include/exclude branching. Used to
/// cross-check the subset enumeration.
pub fn opt_mwis_branch(g: &WeightedGraph, w: &[Rat]) -> Result<Rat> {
    subset_cap(g)?;
    fn rec(g: &WeightedGraph, w: &[Rat], v: usize, picked: &mut Vec<bool>, acc: Rat) -> Rat {
        if v == g.node_count() {
            return acc;
        }
        let skip = rec(g, w, v + 1, picked, acc);
        if g.neighbors(v).iter().all(|&u| u >= v || !picked[u]) {
            picked[v] = true;
            let take = rec(g, w, v + 1, picked, acc + w[v]);
            picked[v] = false;
            return skip.max(take);
        }
        skip
    }
    Ok(rec(g, w, 0, &mut vec![false; g.node_count()], Rat::zero()))
}

/// Vertex-cover optimum through complementation: the complement of a cover is
/// an independent set, so `opt_cover = w(V) - opt_independent`.
pub fn opt_mwvc_dual(g: &WeightedGraph, w: &[Rat]) -> Result<Rat> {
    let total: Rat = w.iter().copied().sum();
    Ok(total - opt_mwis_branch(g, w)?)
}

pub fn opt_mwds_branch(g: &WeightedGraph, w: &[Rat]) -> Result<Rat> {
    subset_cap(g)?;
    fn rec(
        g: &WeightedGraph,
        w: &[Rat],
        v: usize,
        picked: &mut Vec<bool>,
        acc: Rat,
        best: &mut Option<Rat>,
    ) {
        if let Some(b) = best {
            if acc >= *b {
                return;
            }
        }
        if v == g.node_count() {
            let dominated =
                (0..g.node_count()).all(|x| picked[x] || g.neighbors(x).iter().any(|&u| picked[u]));
            if dominated {
                *best = Some(match best {
                    None => acc,
                    Some(b) => (*b).min(acc),
                });
            }
            return;
        }
        picked[v] = true;
        rec(g, w, v + 1, picked, acc + w[v], best);
        picked[v] = false;
        rec(g, w, v + 1, picked, acc, best);
    }
    let mut best = None;
    rec(
        g,
        w,
        0,
        &mut vec![false; g.node_count()],
        Rat::zero(),
        &mut best,
    );
    best.ok_or_else(|| Error::Internal("no dominating set found".into()))
}

/// Maximum of `sum rate(slot(v)) * w(v)` over proper slot assignments, by
/// exhaustive assignment search with value pruning.
pub fn opt_slot(g: &WeightedGraph, w: &[Rat], rates: &RateSchedule) -> Result<Rat> {
    let n = g.node_count();
    if n > 12 {
        return Err(Error::BruteForceCap(format!(
            "{n} nodes exceeds the slot assignment enumeration cap 12"
        )));
    }
    struct Search<'a> {
        g: &'a WeightedGraph,
        w: &'a [Rat],
        rates: &'a RateSchedule,
        slots: u32,
        best_rate: Rat,
    }
    impl Search<'_> {
        fn rec(&self, v: usize, assignment: &mut Vec<u32>, acc: Rat, best: &mut Rat) {
            if v == self.g.node_count() {
                if acc > *best {
                    *best = acc;
                }
                return;
            }
            // Upper bound: every remaining node at the best rate.
            let remaining: Rat = (v..self.g.node_count())
                .map(|x| self.best_rate * self.w[x])
                .sum();
            if acc + remaining <= *best {
                return;
            }
            for slot in 1..=self.slots {
                let conflict = self
                    .g
                    .neighbors(v)
                    .iter()
                    .any(|&u| u < v && assignment[u] == slot);
                if conflict {
                    continue;
                }
                assignment[v] = slot;
                self.rec(
                    v + 1,
                    assignment,
                    acc + self.rates.rate(slot) * self.w[v],
                    best,
                );
                assignment[v] = 0;
            }
        }
    }
    let search = Search {
        g,
        w,
        rates,
        slots: rates.slots() as u32,
        best_rate: rates.best_rate(),
    };
    let mut best = Rat::zero() - Rat::from_integer(1);
    search.rec(0, &mut vec![0; n], Rat::zero(), &mut best);
    Ok(best)
}

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                count += 1;
                stack.push(u);
            }
        }
    }
    count == n
}

/// All labeled connected graphs on exactly `n` nodes, with seeded weights.
pub fn connected_graphs(n: usize, weight_bound: u32, seed: u64) -> Vec<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64) << 32);
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))
        .collect();
    let mut out = Vec::new();
    for mask in 0..(1u64 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        if !connected(n, &edges) {
            continue;
        }
        let weights = (0..n).map(|_| rng.gen_range(0..=weight_bound)).collect();
        out.push(WeightedGraph::new(n, edges, weights, weight_bound).expect("valid corpus graph"));
    }
    out
}

/// All labeled connected graphs with at most `n_max` nodes.
pub fn connected_graphs_upto(n_max: usize, weight_bound: u32, seed: u64) -> Vec<WeightedGraph> {
    (1..=n_max)
        .flat_map(|n| connected_graphs(n, weight_bound, seed))
        .collect()
}

/// Seeded random graphs with bounded degree. Generation is deterministic in
/// the seed and every instance passes validation.
pub fn random_graphs(
    count: usize,
    n_max: usize,
    delta_max: usize,
    weight_bound: u32,
    seed: u64,
) -> Vec<WeightedGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let n = rng.gen_range(2..=n_max.max(2));
        let mut degree = vec![0usize; n];
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if degree[u] >= delta_max || degree[v] >= delta_max {
                    continue;
                }
                if rng.gen_bool(2.0 / n as f64) {
                    degree[u] += 1;
                    degree[v] += 1;
                    edges.push((u, v));
                }
            }
        }
        let weights = (0..n).map(|_| rng.gen_range(0..=weight_bound)).collect();
        let g = WeightedGraph::new(n, edges, weights, weight_bound).expect("valid random graph");
        debug_assert!(g.validate().is_ok());
        out.push(g);
    }
    out
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

/// One property violation, with enough context to replay it: write the
/// `graph` field to a file and run the `replay` command line.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub suite: String,
    pub mechanism: String,
    pub graph: String,
    pub bids: Vec<u32>,
    pub node: Option<usize>,
    pub detail: String,
    pub replay: String,
}

fn replay_line(mechanism: &str, bids: &[u32]) -> String {
    let csv: Vec<String> = bids.iter().map(u32::to_string).collect();
    format!(
        "mechnet run --mechanism {mechanism} --graph graph.txt --bids {}",
        csv.join(",")
    )
}

/// One measured approximation ratio; the approx suite emits a row per
/// instance and mechanism.
#[derive(Clone, Debug, Serialize)]
pub struct RatioRow {
    pub instance: usize,
    pub nodes: usize,
    pub mechanism: String,
    pub ratio: String,
    pub bound: String,
}

/// Outcome of one sweep: number of checks performed and the violations found.
/// The approx suite additionally fills the per-instance ratio table.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SweepReport {
    pub checked: u64,
    pub violations: Vec<Violation>,
    pub ratios: Vec<RatioRow>,
}

impl SweepReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: SweepReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
        self.ratios.extend(other.ratios);
    }

    /// JSON lines: one record per violation plus a trailing summary record.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for v in &self.violations {
            out.push_str(&serde_json::to_string(v).expect("violation serializes"));
            out.push('\n');
        }
        out.push_str(
            &serde_json::json!({
                "summary": true,
                "checked": self.checked,
                "violations": self.violations.len(),
            })
            .to_string(),
        );
        out.push('\n');
        out
    }
}

// ---------------------------------------------------------------------------
// Sweep machinery
// ---------------------------------------------------------------------------

pub type MechFactory<'a> = dyn Fn(&WeightedGraph) -> Result<Box<dyn Mechanism>> + Sync + 'a;

/// Builders for the four production mechanisms.
pub enum MechKind {
    Mwis,
    Mwvc,
    Mwds,
    Slot(Vec<Rat>),
}

impl MechKind {
    pub fn name(&self) -> &'static str {
        match self {
            MechKind::Mwis => "mwis",
            MechKind::Mwvc => "mwvc",
            MechKind::Mwds => "mwds",
            MechKind::Slot(_) => "slot",
        }
    }

    pub fn build(&self, g: &WeightedGraph) -> Result<Box<dyn Mechanism>> {
        Ok(match self {
            MechKind::Mwis => Box::new(MwisMechanism::new(g, &LOCAL)?),
            MechKind::Mwvc => Box::new(MwvcMechanism::new(g, &LOCAL)?),
            MechKind::Mwds => Box::new(MwdsMechanism::new(g, &LOCAL)?),
            MechKind::Slot(rates) => Box::new(SlotMechanism::new(g, &LOCAL, rates)?),
        })
    }

    /// The smallest admissible true weight: slot agents value rates with a
    /// positive factor, binary problems allow zero weights.
    pub fn truth_floor(&self) -> u32 {
        match self {
            MechKind::Slot(_) => 1,
            _ => 0,
        }
    }
}

fn for_each_bid_vector(n: usize, w: u32, mut f: impl FnMut(&[u32]) -> Result<()>) -> Result<()> {
    let mut bids = vec![0u32; n];
    loop {
        f(&bids)?;
        let mut i = 0;
        loop {
            if i == n {
                return Ok(());
            }
            if bids[i] < w {
                bids[i] += 1;
                break;
            }
            bids[i] = 0;
            i += 1;
        }
    }
}

type MechTable = HashMap<Vec<u32>, (Vec<Label>, Vec<Rat>)>;

fn label_table(mech: &dyn Mechanism, g: &WeightedGraph) -> Result<HashMap<Vec<u32>, Vec<Label>>> {
    let mut table = HashMap::new();
    for_each_bid_vector(g.node_count(), g.weight_bound(), |bids| {
        let (labels, _) = mech.allocate(g, &BidVector(bids.to_vec()), &LOCAL)?;
        table.insert(bids.to_vec(), labels);
        Ok(())
    })?;
    Ok(table)
}

fn result_table(mech: &dyn Mechanism, g: &WeightedGraph) -> Result<MechTable> {
    let mut table = HashMap::new();
    for_each_bid_vector(g.node_count(), g.weight_bound(), |bids| {
        let bv = BidVector(bids.to_vec());
        let (labels, _) = mech.allocate(g, &bv, &LOCAL)?;
        let (payments, _) = mech.payments(g, &bv, &labels, &LOCAL)?;
        table.insert(bids.to_vec(), (labels, payments));
        Ok(())
    })?;
    Ok(table)
}

/// Exhaustive monotonicity sweep: for every instance, node, and context of
/// other bids, the allocation quality must be a monotone step function of the
/// node's own bid (non-decreasing for maximisation, non-increasing for
/// minimisation).
pub fn check_monotone(
    name: &str,
    build: &MechFactory,
    graphs: &[WeightedGraph],
) -> Result<SweepReport> {
    let per_graph: Vec<SweepReport> = graphs
        .par_iter()
        .map(|g| -> Result<SweepReport> {
            let mech = build(g)?;
            let table = label_table(mech.as_ref(), g)?;
            let mut report = SweepReport::default();
            let w = g.weight_bound();
            for v in 0..g.node_count() {
                for_each_bid_vector(g.node_count(), w, |bids| {
                    if bids[v] != 0 {
                        return Ok(());
                    }
                    let mut probe = bids.to_vec();
                    let mut prev: Option<(u32, Rat)> = None;
                    for x in 0..=w {
                        probe[v] = x;
                        let labels = &table[&probe];
                        let quality = mech.quality(labels[v]);
                        report.checked += 1;
                        if let Some((px, pq)) = prev {
                            let broken = match mech.objective() {
                                Objective::Max => quality < pq,
                                Objective::Min => quality > pq,
                            };
                            if broken {
                                report.violations.push(Violation {
                                    suite: "monotone".into(),
                                    mechanism: name.into(),
                                    graph: g.to_text(),
                                    bids: probe.clone(),
                                    node: Some(v),
                                    detail: format!(
                                        "quality dropped from {pq} at bid {px} to {quality} at bid {x}"
                                    ),
                                    replay: replay_line(name, &probe),
                                });
                            }
                        }
                        prev = Some((x, quality));
                    }
                    Ok(())
                })?;
            }
            Ok(report)
        })
        .collect::<Result<_>>()?;
    let mut total = SweepReport::default();
    for r in per_graph {
        total.merge(r);
    }
    Ok(total)
}

/// Exhaustive truthfulness sweep: every bid vector is a truth profile, and no
/// unilateral deviation may improve total utility. Individual rationality of
/// the truthful bid is checked alongside, all in exact arithmetic.
pub fn check_truthful(
    name: &str,
    build: &MechFactory,
    graphs: &[WeightedGraph],
    truth_floor: u32,
) -> Result<SweepReport> {
    let per_graph: Vec<SweepReport> = graphs
        .par_iter()
        .map(|g| -> Result<SweepReport> {
            let mech = build(g)?;
            let table = result_table(mech.as_ref(), g)?;
            let mut report = SweepReport::default();
            let w = g.weight_bound();
            for_each_bid_vector(g.node_count(), w, |truth| {
                if truth.iter().any(|&b| b < truth_floor) {
                    return Ok(());
                }
                let (labels_t, payments_t) = &table[truth];
                for v in 0..g.node_count() {
                    let true_weight = Rat::from_integer(truth[v] as i64);
                    let u_truth =
                        mech.utility(g, labels_t, v, true_weight) + payments_t[v];
                    report.checked += 1;
                    if u_truth.is_negative() {
                        report.violations.push(Violation {
                            suite: "truthful".into(),
                            mechanism: name.into(),
                            graph: g.to_text(),
                            bids: truth.to_vec(),
                            node: Some(v),
                            detail: format!(
                                "individual rationality broken: truthful utility {u_truth}"
                            ),
                            replay: replay_line(name, truth),
                        });
                    }
                    let mut deviation = truth.to_vec();
                    for x in 0..=w {
                        if x == truth[v] {
                            continue;
                        }
                        deviation[v] = x;
                        let (labels_d, payments_d) = &table[&deviation];
                        let u_dev =
                            mech.utility(g, labels_d, v, true_weight) + payments_d[v];
                        report.checked += 1;
                        if u_dev > u_truth {
                            report.violations.push(Violation {
                                suite: "truthful".into(),
                                mechanism: name.into(),
                                graph: g.to_text(),
                                bids: truth.to_vec(),
                                node: Some(v),
                                detail: format!(
                                    "bidding {x} instead of {} raises utility from {u_truth} to {u_dev}",
                                    truth[v]
                                ),
                                replay: replay_line(name, truth),
                            });
                        }
                    }
                    deviation[v] = truth[v];
                }
                Ok(())
            })?;
            Ok(report)
        })
        .collect::<Result<_>>()?;
    let mut total = SweepReport::default();
    for r in per_graph {
        total.merge(r);
    }
    Ok(total)
}

/// Price-protocol correctness: the CONGEST blocking-neighbor prices must equal
/// the LOCAL re-simulation critical prices exactly, for every selected node.
/// The binary search and the linear scan must also agree.
pub fn check_prices_mwis(
    graphs: &[WeightedGraph],
    bid_draws: usize,
    seed: u64,
) -> Result<SweepReport> {
    let per_graph: Vec<SweepReport> = graphs
        .par_iter()
        .enumerate()
        .map(|(idx, g)| -> Result<SweepReport> {
            let mut report = SweepReport::default();
            let mech = MwisMechanism::new(g, &LOCAL)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ idx as u64);
            let mut bid_sets = vec![BidVector::from_weights(g)];
            for _ in 0..bid_draws {
                let bids = (0..g.node_count())
                    .map(|_| rng.gen_range(0..=g.weight_bound()))
                    .collect();
                bid_sets.push(BidVector(bids));
            }
            for bids in &bid_sets {
                let (in_set, prices, _) = mech.allocate_with_prices(g, bids, &LOCAL)?;
                for v in 0..g.node_count() {
                    if !in_set[v] {
                        continue;
                    }
                    report.checked += 1;
                    let scan = critical_price_scan(&mech, g, bids, v, &LOCAL)?;
                    let binary = critical_price(&mech, g, bids, v, &LOCAL)?;
                    if scan != binary {
                        report.violations.push(Violation {
                            suite: "prices".into(),
                            mechanism: "mwis".into(),
                            graph: g.to_text(),
                            bids: bids.0.clone(),
                            node: Some(v),
                            detail: format!(
                                "scan price {scan:?} != binary-search price {binary:?}"
                            ),
                            replay: replay_line("mwis", &bids.0),
                        });
                    }
                    if prices[v] != scan {
                        report.violations.push(Violation {
                            suite: "prices".into(),
                            mechanism: "mwis".into(),
                            graph: g.to_text(),
                            bids: bids.0.clone(),
                            node: Some(v),
                            detail: format!(
                                "protocol price {:?} != re-simulation price {scan:?}",
                                prices[v]
                            ),
                            replay: replay_line("mwis", &bids.0),
                        });
                    }
                }
            }
            Ok(report)
        })
        .collect::<Result<_>>()?;
    let mut total = SweepReport::default();
    for r in per_graph {
        total.merge(r);
    }
    Ok(total)
}

/// Frozen CONGEST budget constant for the independent-set mechanism.
pub const MWIS_CONGEST_CONSTANT: u64 = 8;

/// CONGEST compliance of the allocation and price phases under the frozen
/// budget constant.
pub fn check_congest_mwis(graphs: &[WeightedGraph]) -> Result<SweepReport> {
    let model = ExecutionModel::Congest {
        constant: MWIS_CONGEST_CONSTANT,
    };
    let mut report = SweepReport::default();
    for g in graphs {
        let mech = MwisMechanism::new(g, &LOCAL)?;
        let bids = BidVector::from_weights(g);
        report.checked += 1;
        match mech.allocate_with_prices(g, &bids, &model) {
            Ok((_, _, trace)) => {
                if let Err(detail) = assert_congest(&trace, g.node_count(), MWIS_CONGEST_CONSTANT) {
                    report.violations.push(Violation {
                        suite: "congest".into(),
                        mechanism: "mwis".into(),
                        graph: g.to_text(),
                        bids: bids.0.clone(),
                        node: None,
                        detail,
                        replay: replay_line("mwis", &bids.0),
                    });
                }
            }
            Err(err) => report.violations.push(Violation {
                suite: "congest".into(),
                mechanism: "mwis".into(),
                graph: g.to_text(),
                bids: bids.0.clone(),
                node: None,
                detail: err.to_string(),
                replay: replay_line("mwis", &bids.0),
            }),
        }
    }
    Ok(report)
}

/// Rate schedules used by the approximation suite.
pub fn default_rate_schedules() -> Vec<Vec<Rat>> {
    vec![
        vec![
            Rat::from_integer(8),
            Rat::from_integer(4),
            Rat::from_integer(2),
            Rat::from_integer(1),
        ],
        vec![
            Rat::from_integer(3),
            Rat::from_integer(3),
            Rat::from_integer(3),
        ],
        vec![Rat::from_integer(10), Rat::new(5, 2), Rat::zero()],
    ]
}

/// Approximation bounds against brute force, exact rationals: degree bound for
/// independent set, factor two for vertex cover, harmonic bound for dominating
/// set, and the rate-profile bound for slot assignment.
pub fn check_approx(graphs: &[WeightedGraph]) -> Result<SweepReport> {
    let schedules = default_rate_schedules();
    let per_graph: Vec<SweepReport> = graphs
        .par_iter()
        .enumerate()
        .map(|(instance, g)| -> Result<SweepReport> {
            let mut report = SweepReport::default();
            let bids = BidVector::from_weights(g);
            let weights: Vec<Rat> = g
                .weights()
                .iter()
                .map(|&w| Rat::from_integer(w as i64))
                .collect();

            // Bound check: `worse` must not exceed `bound * better`; record
            // the measured worse/better ratio either way.
            let mut certify = |mech: &str, worse: Rat, bound: Rat, better: Rat| {
                let ratio = if better.is_zero() {
                    Rat::from_integer(1)
                } else {
                    worse / better
                };
                report.ratios.push(RatioRow {
                    instance,
                    nodes: g.node_count(),
                    mechanism: mech.into(),
                    ratio: crate::myerson::rat_string(&ratio),
                    bound: crate::myerson::rat_string(&bound),
                });
                report.checked += 1;
                if worse > bound * better {
                    report.violations.push(Violation {
                        suite: "approx".into(),
                        mechanism: mech.into(),
                        graph: g.to_text(),
                        bids: bids.0.clone(),
                        node: None,
                        detail: format!("ratio {ratio} exceeds bound {bound}"),
                        replay: replay_line(mech, &bids.0),
                    });
                }
            };

            let selected_weight = |labels: &[Label]| -> Rat {
                (0..g.node_count())
                    .filter(|&v| labels[v] == 1)
                    .map(|v| weights[v])
                    .sum()
            };

            let mwis = MwisMechanism::new(g, &LOCAL)?;
            let (labels, _) = mwis.allocate(g, &bids, &LOCAL)?;
            let alg = selected_weight(&labels);
            let opt = opt_mwis(g, &weights)?;
            let delta = Rat::from_integer(g.max_degree().max(1) as i64);
            certify("mwis", opt, delta, alg);

            let mwvc = MwvcMechanism::new(g, &LOCAL)?;
            let (labels, _) = mwvc.allocate(g, &bids, &LOCAL)?;
            let alg = selected_weight(&labels);
            let opt = opt_mwvc(g, &weights)?;
            certify("mwvc", alg, Rat::from_integer(2), opt);

            let mwds = MwdsMechanism::new(g, &LOCAL)?;
            let (labels, _) = mwds.allocate(g, &bids, &LOCAL)?;
            let alg = selected_weight(&labels);
            let opt = opt_mwds(g, &weights)?;
            certify("mwds", alg, harmonic(g.max_degree() as u32 + 1), opt);

            for raw in &schedules {
                let slot = SlotMechanism::new(g, &LOCAL, raw)?;
                let (labels, _) = slot.allocate(g, &bids, &LOCAL)?;
                let alg: Rat = (0..g.node_count())
                    .map(|v| slot.rates().rate(labels[v]) * weights[v])
                    .sum();
                let opt = opt_slot(g, &weights, slot.rates())?;
                let rate_sum = slot.rates().rate_sum();
                if rate_sum.is_zero() {
                    continue;
                }
                let factor = slot.rates().best_rate()
                    * Rat::from_integer(slot.rates().slots() as i64)
                    / rate_sum;
                certify("slot", opt, factor, alg);
            }
            Ok(report)
        })
        .collect::<Result<_>>()?;
    let mut total = SweepReport::default();
    for r in per_graph {
        total.merge(r);
    }
    Ok(total)
}

/// Frozen round-bound constants: (a, b) with the bound `a * base + b`.
pub const MWIS_ROUND_BOUND: (u64, u64) = (2, 8);
pub const MWVC_ROUND_BOUND: (u64, u64) = (2, 2);
pub const MWDS_ROUND_BOUND: (u64, u64) = (5, 16);

/// Round-count regressions with frozen constants, including the vertex-cover
/// weight-independence check.
pub fn check_rounds(graphs: &[WeightedGraph], seed: u64) -> Result<SweepReport> {
    let per_graph: Vec<SweepReport> = graphs
        .par_iter()
        .enumerate()
        .map(|(idx, g)| -> Result<SweepReport> {
            let mut report = SweepReport::default();
            let bids = BidVector::from_weights(g);
            let d1 = g.max_degree() as u64 + 1;
            let w1 = g.weight_bound() as u64 + 1;
            let mut push = |mech: &str, detail: String| {
                report.violations.push(Violation {
                    suite: "rounds".into(),
                    mechanism: mech.into(),
                    graph: g.to_text(),
                    bids: bids.0.clone(),
                    node: None,
                    detail,
                    replay: replay_line(mech, &bids.0),
                });
            };

            let mwis = MwisMechanism::new(g, &LOCAL)?;
            let (_, _, trace) = mwis.allocate_with_prices(g, &bids, &LOCAL)?;
            let bound = MWIS_ROUND_BOUND.0 * d1 * w1 + MWIS_ROUND_BOUND.1;
            report.checked += 1;
            if trace.rounds > bound {
                push(
                    "mwis",
                    format!("rounds {} over bound {bound}", trace.rounds),
                );
            }

            let mwvc = MwvcMechanism::new(g, &LOCAL)?;
            let (_, trace) = mwvc.allocate(g, &bids, &LOCAL)?;
            let bound = MWVC_ROUND_BOUND.0 * g.max_degree() as u64 + MWVC_ROUND_BOUND.1;
            report.checked += 1;
            if trace.rounds > bound {
                push(
                    "mwvc",
                    format!("rounds {} over bound {bound}", trace.rounds),
                );
            }
            // Weight independence: rounds must not move across reweightings.
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ idx as u64);
            for _ in 0..2 {
                let weights: Vec<u32> = (0..g.node_count())
                    .map(|_| rng.gen_range(0..=g.weight_bound()))
                    .collect();
                let reweighted = g.with_weights(weights, g.weight_bound())?;
                let (_, other) =
                    mwvc.allocate(&reweighted, &BidVector::from_weights(&reweighted), &LOCAL)?;
                report.checked += 1;
                if other.rounds != trace.rounds {
                    push(
                        "mwvc",
                        format!(
                            "rounds moved with weights: {} vs {}",
                            trace.rounds, other.rounds
                        ),
                    );
                }
            }

            let mwds = MwdsMechanism::new(g, &LOCAL)?;
            let (_, trace) = mwds.allocate(g, &bids, &LOCAL)?;
            let bound = MWDS_ROUND_BOUND.0 * d1 * d1 * d1 * w1 + MWDS_ROUND_BOUND.1;
            report.checked += 1;
            if trace.rounds > bound {
                push(
                    "mwds",
                    format!("rounds {} over bound {bound}", trace.rounds),
                );
            }
            Ok(report)
        })
        .collect::<Result<_>>()?;
    let mut total = SweepReport::default();
    for r in per_graph {
        total.merge(r);
    }
    Ok(total)
}

/// Adaptive versus non-adaptive dominating-set equivalence: exact set
/// equality, including full bid sweeps on the small graphs.
pub fn check_equivalence(graphs: &[WeightedGraph], full_sweep_max_n: usize) -> Result<SweepReport> {
    let per_graph: Vec<SweepReport> = graphs
        .par_iter()
        .map(|g| -> Result<SweepReport> {
            let mut report = SweepReport::default();
            let mech = MwdsMechanism::new(g, &LOCAL)?;
            let coloring = mech.coloring().clone();
            let mut run_one = |bids: &BidVector| -> Result<()> {
                let (adaptive, _, _) = crate::mwds::mwds_allocate(g, bids, &coloring, &LOCAL)?;
                let nonadaptive = mwds_allocate_nonadaptive(g, bids, &coloring)?;
                report.checked += 1;
                if adaptive != nonadaptive {
                    report.violations.push(Violation {
                        suite: "equivalence".into(),
                        mechanism: "mwds".into(),
                        graph: g.to_text(),
                        bids: bids.0.clone(),
                        node: None,
                        detail: format!("adaptive {adaptive:?} != non-adaptive {nonadaptive:?}"),
                        replay: replay_line("mwds", &bids.0),
                    });
                }
                Ok(())
            };
            if g.node_count() <= full_sweep_max_n {
                for_each_bid_vector(g.node_count(), g.weight_bound(), |bids| {
                    run_one(&BidVector(bids.to_vec()))
                })?;
            } else {
                run_one(&BidVector::from_weights(g))?;
            }
            Ok(report)
        })
        .collect::<Result<_>>()?;
    let mut total = SweepReport::default();
    for r in per_graph {
        total.merge(r);
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Discretized pipeline
// ---------------------------------------------------------------------------

fn sample_rational(rng: &mut ChaCha8Rng, lo: Rat, hi: Rat) -> Rat {
    let den = [7i64, 8, 9, 16][rng.gen_range(0..4)];
    let lo_num = (lo * Rat::from_integer(den)).ceil().to_integer();
    let hi_num = (hi * Rat::from_integer(den)).floor().to_integer();
    Rat::new(rng.gen_range(lo_num..=hi_num), den)
}

/// Builds the grid instance for discretized execution: same structure, grid
/// indices as weights, grid step count as the weight bound.
fn grid_instance(g: &WeightedGraph, grid_bids: &BidVector, steps: u32) -> Result<WeightedGraph> {
    g.with_weights(grid_bids.0.clone(), steps)
}

/// Truthfulness and quality of the discretized pipeline: real-valued true
/// weights are rounded onto the epsilon grid (down for maximisation, up for
/// minimisation), the integer mechanism runs on grid indices, and utilities
/// are evaluated against the real weights with payments scaled back by
/// epsilon. Quality is checked against the degradation bound
/// `alpha / (1 - epsilon)` using weights at least one, where the bound holds.
pub fn check_discretization(
    graphs: &[WeightedGraph],
    epsilons: &[Rat],
    samples_per_graph: usize,
    seed: u64,
) -> Result<SweepReport> {
    let kinds = [MechKind::Mwis, MechKind::Mwvc, MechKind::Mwds];
    let per_graph: Vec<SweepReport> = graphs
        .par_iter()
        .enumerate()
        .map(|(idx, g)| -> Result<SweepReport> {
            let mut report = SweepReport::default();
            let w_cap = Rat::from_integer(g.weight_bound().max(1) as i64);
            for kind in &kinds {
                for epsilon in epsilons {
                    let cfg = DiscretizationConfig::new(*epsilon, w_cap)?;
                    let steps = cfg.grid_steps();
                    let mut rng = ChaCha8Rng::seed_from_u64(
                        seed ^ (idx as u64) << 8 ^ (steps as u64) << 32,
                    );
                    for sample in 0..samples_per_graph {
                        // Quality samples need weights >= 1 for the bound.
                        let lo = if sample % 2 == 0 { Rat::zero() } else { Rat::from_integer(1) };
                        let reals: Vec<Rat> = (0..g.node_count())
                            .map(|_| sample_rational(&mut rng, lo, w_cap))
                            .collect();
                        let mech_probe = kind.build(g)?;
                        let objective = mech_probe.objective();
                        drop(mech_probe);
                        let grid_bids = discretize(&reals, &cfg, objective)?;
                        let grid_graph = grid_instance(g, &grid_bids, steps)?;
                        let mech = kind.build(&grid_graph)?;
                        let mut memo: MechTable = HashMap::new();
                        let eval = |bids: &BidVector,
                                        memo: &mut MechTable|
                         -> Result<(Vec<Label>, Vec<Rat>)> {
                            if let Some(hit) = memo.get(&bids.0) {
                                return Ok(hit.clone());
                            }
                            let (labels, _) = mech.allocate(&grid_graph, bids, &LOCAL)?;
                            let (payments, _) =
                                mech.payments(&grid_graph, bids, &labels, &LOCAL)?;
                            memo.insert(bids.0.clone(), (labels.clone(), payments.clone()));
                            Ok((labels, payments))
                        };
                        let (labels_t, payments_t) = eval(&grid_bids, &mut memo)?;
                        for v in 0..g.node_count() {
                            let u_truth = mech.utility(&grid_graph, &labels_t, v, reals[v])
                                + payments_t[v] * *epsilon;
                            report.checked += 1;
                            if u_truth.is_negative() {
                                report.violations.push(Violation {
                                    suite: "discretization".into(),
                                    mechanism: kind.name().into(),
                                    graph: g.to_text(),
                                    bids: grid_bids.0.clone(),
                                    node: Some(v),
                                    detail: format!(
                                        "individual rationality broken at epsilon {epsilon}: {u_truth}"
                                    ),
                                    replay: replay_line(kind.name(), &grid_bids.0),
                                });
                            }
                            for x in 0..=steps {
                                if x == grid_bids.get(v) {
                                    continue;
                                }
                                let (labels_d, payments_d) =
                                    eval(&grid_bids.with_bid(v, x), &mut memo)?;
                                let u_dev = mech.utility(&grid_graph, &labels_d, v, reals[v])
                                    + payments_d[v] * *epsilon;
                                report.checked += 1;
                                if u_dev > u_truth {
                                    report.violations.push(Violation {
                                        suite: "discretization".into(),
                                        mechanism: kind.name().into(),
                                        graph: g.to_text(),
                                        bids: grid_bids.0.clone(),
                                        node: Some(v),
                                        detail: format!(
                                            "grid deviation to {x} at epsilon {epsilon} raises utility from {u_truth} to {u_dev}"
                                        ),
                                        replay: replay_line(kind.name(), &grid_bids.0),
                                    });
                                }
                            }
                        }
                        // Quality degradation bound on the weights-at-least-one samples.
                        if lo >= Rat::from_integer(1) && *epsilon < Rat::from_integer(1) {
                            let alg_real: Rat = (0..g.node_count())
                                .filter(|&v| mech.selected(labels_t[v]))
                                .map(|v| reals[v])
                                .sum();
                            let one_minus = Rat::from_integer(1) - *epsilon;
                            report.checked += 1;
                            match kind {
                                MechKind::Mwis => {
                                    let opt = opt_mwis(g, &reals)?;
                                    let alpha = Rat::from_integer(g.max_degree().max(1) as i64);
                                    if opt * one_minus > alpha * alg_real {
                                        report.violations.push(Violation {
                                            suite: "discretization".into(),
                                            mechanism: "mwis".into(),
                                            graph: g.to_text(),
                                            bids: grid_bids.0.clone(),
                                            node: None,
                                            detail: format!(
                                                "quality bound broken at epsilon {epsilon}: opt {opt}, alg {alg_real}"
                                            ),
                                            replay: replay_line("mwis", &grid_bids.0),
                                        });
                                    }
                                }
                                MechKind::Mwvc | MechKind::Mwds => {
                                    let (opt, alpha) = if matches!(kind, MechKind::Mwvc) {
                                        (opt_mwvc(g, &reals)?, Rat::from_integer(2))
                                    } else {
                                        (opt_mwds(g, &reals)?, harmonic(g.max_degree() as u32 + 1))
                                    };
                                    if alg_real * one_minus > alpha * opt {
                                        report.violations.push(Violation {
                                            suite: "discretization".into(),
                                            mechanism: kind.name().into(),
                                            graph: g.to_text(),
                                            bids: grid_bids.0.clone(),
                                            node: None,
                                            detail: format!(
                                                "quality bound broken at epsilon {epsilon}: alg {alg_real}, opt {opt}"
                                            ),
                                            replay: replay_line(kind.name(), &grid_bids.0),
                                        });
                                    }
                                }
                                MechKind::Slot(_) => unreachable!("slot is not discretized"),
                            }
                        }
                    }
                }
            }
            Ok(report)
        })
        .collect::<Result<_>>()?;
    let mut total = SweepReport::default();
    for r in per_graph {
        total.merge(r);
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Suite plumbing
// ---------------------------------------------------------------------------

/// Named verification suites exposed by the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Truthful,
    Monotone,
    Prices,
    Approx,
    Rounds,
    Equivalence,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        Some(match name {
            "truthful" => Suite::Truthful,
            "monotone" => Suite::Monotone,
            "prices" => Suite::Prices,
            "approx" => Suite::Approx,
            "rounds" => Suite::Rounds,
            "equivalence" => Suite::Equivalence,
            _ => return None,
        })
    }
}

/// Corpus and sweep sizes for the verification suites.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Exhaustive sweeps run on all connected graphs up to this size.
    pub sweep_max_n: usize,
    /// Weight bound of the exhaustive sweep corpus.
    pub sweep_weight_bound: u32,
    /// Random-graph corpus parameters (count, max n, max degree, weight bound).
    pub random: (usize, usize, usize, u32),
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            sweep_max_n: 4,
            sweep_weight_bound: 3,
            random: (100, 10, 4, 6),
        }
    }
}

impl SuiteConfig {
    pub fn sweep_corpus(&self) -> Vec<WeightedGraph> {
        connected_graphs_upto(self.sweep_max_n, self.sweep_weight_bound, self.seed)
    }

    pub fn full_corpus(&self) -> Vec<WeightedGraph> {
        let mut graphs = connected_graphs_upto(5, self.sweep_weight_bound, self.seed);
        let (count, n, d, w) = self.random;
        graphs.extend(random_graphs(count, n, d, w, self.seed));
        graphs
    }

    fn standard_kinds(&self) -> Vec<MechKind> {
        vec![
            MechKind::Mwis,
            MechKind::Mwvc,
            MechKind::Mwds,
            MechKind::Slot(vec![
                Rat::from_integer(8),
                Rat::from_integer(4),
                Rat::from_integer(2),
                Rat::from_integer(1),
            ]),
        ]
    }
}

/// Runs one named suite with the given configuration.
pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SweepReport> {
    let mut total = SweepReport::default();
    match suite {
        Suite::Truthful => {
            let graphs = cfg.sweep_corpus();
            for kind in cfg.standard_kinds() {
                let report =
                    check_truthful(kind.name(), &|g| kind.build(g), &graphs, kind.truth_floor())?;
                total.merge(report);
            }
            let eps = [Rat::from_integer(1), Rat::new(1, 2), Rat::new(1, 4)];
            total.merge(check_discretization(&graphs, &eps, 2, cfg.seed)?);
        }
        Suite::Monotone => {
            let graphs = cfg.sweep_corpus();
            for kind in cfg.standard_kinds() {
                total.merge(check_monotone(kind.name(), &|g| kind.build(g), &graphs)?);
            }
        }
        Suite::Prices => {
            let graphs = cfg.full_corpus();
            total.merge(check_prices_mwis(&graphs, 2, cfg.seed)?);
            total.merge(check_congest_mwis(&graphs)?);
        }
        Suite::Approx => {
            total.merge(check_approx(&cfg.full_corpus())?);
        }
        Suite::Rounds => {
            total.merge(check_rounds(&cfg.full_corpus(), cfg.seed)?);
        }
        Suite::Equivalence => {
            total.merge(check_equivalence(&cfg.full_corpus(), cfg.sweep_max_n)?);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rats(ws: &[i64]) -> Vec<Rat> {
        ws.iter().map(|&w| Rat::from_integer(w)).collect()
    }

    #[test]
    fn opt_mwis_examples() {
        let path = WeightedGraph::new(3, vec![(0, 1), (1, 2)], vec![1, 5, 1], 5).unwrap();
        assert_eq!(
            opt_mwis(&path, &rats(&[1, 5, 1])).unwrap(),
            Rat::from_integer(5)
        );
        let empty = WeightedGraph::new(3, vec![], vec![1, 2, 3], 3).unwrap();
        assert_eq!(
            opt_mwis(&empty, &rats(&[1, 2, 3])).unwrap(),
            Rat::from_integer(6)
        );
        let edge = WeightedGraph::new(2, vec![(0, 1)], vec![5, 3], 5).unwrap();
        assert_eq!(
            opt_mwis(&edge, &rats(&[5, 3])).unwrap(),
            Rat::from_integer(5)
        );
    }

    #[test]
    fn opt_mwvc_examples() {
        let edge = WeightedGraph::new(2, vec![(0, 1)], vec![5, 3], 5).unwrap();
        assert_eq!(
            opt_mwvc(&edge, &rats(&[5, 3])).unwrap(),
            Rat::from_integer(3)
        );
        let path = WeightedGraph::new(3, vec![(0, 1), (1, 2)], vec![1, 1, 1], 1).unwrap();
        assert_eq!(
            opt_mwvc(&path, &rats(&[1, 1, 1])).unwrap(),
            Rat::from_integer(1)
        );
        let triangle =
            WeightedGraph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![1, 1, 1], 1).unwrap();
        assert_eq!(
            opt_mwvc(&triangle, &rats(&[1, 1, 1])).unwrap(),
            Rat::from_integer(2)
        );
    }

    #[test]
    fn opt_mwds_examples() {
        let star = WeightedGraph::new(
            5,
            vec![(0, 1), (0, 2), (0, 3), (0, 4)],
            vec![1, 9, 9, 9, 9],
            9,
        )
        .unwrap();
        assert_eq!(
            opt_mwds(&star, &rats(&[1, 9, 9, 9, 9])).unwrap(),
            Rat::from_integer(1)
        );
        let single = WeightedGraph::new(1, vec![], vec![7], 7).unwrap();
        assert_eq!(
            opt_mwds(&single, &rats(&[7])).unwrap(),
            Rat::from_integer(7)
        );
        let cycle =
            WeightedGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (0, 3)], vec![1; 4], 1).unwrap();
        assert_eq!(
            opt_mwds(&cycle, &rats(&[1, 1, 1, 1])).unwrap(),
            Rat::from_integer(2)
        );
    }

    #[test]
    fn opt_slot_examples() {
        let single = WeightedGraph::new(1, vec![], vec![5], 5).unwrap();
        let rates = RateSchedule::for_graph(&single, &rats(&[10])).unwrap();
        assert_eq!(
            opt_slot(&single, &rats(&[5]), &rates).unwrap(),
            Rat::from_integer(50)
        );

        let edge = WeightedGraph::new(2, vec![(0, 1)], vec![5, 3], 5).unwrap();
        let rates = RateSchedule::for_graph(&edge, &rats(&[10, 4])).unwrap();
        assert_eq!(
            opt_slot(&edge, &rats(&[5, 3]), &rates).unwrap(),
            Rat::from_integer(62)
        );

        let triangle =
            WeightedGraph::new(3, vec![(0, 1), (1, 2), (0, 2)], vec![3, 2, 1], 3).unwrap();
        let rates = RateSchedule::for_graph(&triangle, &rats(&[5, 2, 1])).unwrap();
        assert_eq!(
            opt_slot(&triangle, &rats(&[3, 2, 1]), &rates).unwrap(),
            Rat::from_integer(20)
        );
    }

    #[test]
    fn optima_agree_across_routes() {
        for g in random_graphs(15, 8, 4, 4, 5) {
            let w: Vec<Rat> = g
                .weights()
                .iter()
                .map(|&x| Rat::from_integer(x as i64))
                .collect();
            assert_eq!(opt_mwis(&g, &w).unwrap(), opt_mwis_branch(&g, &w).unwrap());
            assert_eq!(opt_mwvc(&g, &w).unwrap(), opt_mwvc_dual(&g, &w).unwrap());
            assert_eq!(opt_mwds(&g, &w).unwrap(), opt_mwds_branch(&g, &w).unwrap());
        }
    }

    #[test]
    fn corpus_counts_and_determinism() {
        assert_eq!(connected_graphs(1, 3, 1).len(), 1);
        assert_eq!(connected_graphs(2, 3, 1).len(), 1);
        assert_eq!(connected_graphs(3, 3, 1).len(), 4);
        assert_eq!(connected_graphs(4, 3, 1).len(), 38);
        let a = random_graphs(10, 10, 4, 6, 42);
        let b = random_graphs(10, 10, 4, 6, 42);
        assert_eq!(a, b);
        for g in &a {
            assert!(g.validate().is_ok());
            assert!(g.max_degree() <= 4);
        }
    }

    #[test]
    fn brute_force_cap_is_enforced() {
        let edges = (0..20).map(|i| (i, i + 1)).collect();
        let g = WeightedGraph::new(21, edges, vec![1; 21], 1).unwrap();
        let w = vec![Rat::from_integer(1); 21];
        assert!(matches!(opt_mwis(&g, &w), Err(Error::BruteForceCap(_))));
    }

    #[test]
    fn report_json_lines_shape() {
        let mut report = SweepReport {
            checked: 3,
            ..Default::default()
        };
        report.violations.push(Violation {
            suite: "truthful".into(),
            mechanism: "mwis".into(),
            graph: "1 0 3\n0 2\n".into(),
            bids: vec![2],
            node: Some(0),
            detail: "example".into(),
            replay: replay_line("mwis", &[2]),
        });
        let rendered = report.to_json_lines();
        let lines: Vec<&str> = rendered.trim_end().lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].contains("\"suite\":\"truthful\""));
        assert!(lines[1].contains("\"summary\":true"));
    }
}
