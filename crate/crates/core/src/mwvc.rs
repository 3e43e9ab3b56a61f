//! Local-ratio 2-approximate minimum-weight vertex cover mechanism: process
//! line-graph color classes, charge each edge the minimum endpoint residual,
//! and select the nodes whose residual hits zero.

use std::collections::HashMap;

use num_traits::Zero;

use crate::coloring::{color_line_graph, ColorAssignment};
use crate::error::{Error, Result};
use crate::graph::{BidVector, EdgeId, NodeId, Objective, WeightedGraph};
use crate::myerson::{critical_prices_all, Label, Mechanism};
use crate::sim::{
    self, Control, ExecutionModel, FieldEnc, NodeCtx, NodeProgram, Outbox, Payload, RoundTrace,
};
use crate::Rat;

/// Cover membership, final residuals, and per-edge charges of one run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MwvcOutcome {
    pub cover: Vec<bool>,
    pub residuals: Vec<u32>,
    pub charges: Vec<u32>,
}

#[derive(Clone)]
struct VcMsg {
    residual: u32,
    in_cover: bool,
}

impl Payload for VcMsg {
    fn bit_len(&self, enc: &FieldEnc) -> u64 {
        enc.value_bits + 1
    }
}

struct VcState {
    round: u64,
    residual: u32,
    in_cover: bool,
    charges: Vec<(EdgeId, u32)>,
}

struct VcProgram<'a> {
    bids: &'a BidVector,
    /// Per node: map from line-graph color class to (neighbor, edge id).
    schedule: Vec<HashMap<u64, (NodeId, EdgeId)>>,
    palette: u64,
}

impl NodeProgram for VcProgram<'_> {
    type State = VcState;
    type Msg = VcMsg;
    type Output = (bool, u32, Vec<(EdgeId, u32)>);

    fn init(&self, ctx: &NodeCtx) -> Self::State {
        VcState {
            round: 0,
            residual: self.bids.get(ctx.id),
            in_cover: false,
            charges: Vec::new(),
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
        let slots = &self.schedule[ctx.id];
        if ctx.neighbors.is_empty() {
            return Ok(Control::Halt((false, state.residual, Vec::new())));
        }
        // The inbox carries the exchange for class r-2: a single partner at
        // most, since incident edges all have distinct classes.
        if r >= 2 {
            let class = r - 2;
            if let Some(&(partner, edge)) = slots.get(&class) {
                if let Some((_, msg)) = inbox.iter().find(|(from, _)| *from == partner) {
                    if !state.in_cover && !msg.in_cover {
                        let m = state.residual.min(msg.residual);
                        state.residual -= m;
                        state.charges.push((edge, m));
                        if state.residual == 0 {
                            state.in_cover = true;
                        }
                    } else {
                        state.charges.push((edge, 0));
                    }
                } else {
                    return Err(Error::Internal(format!(
                        "node {} missed the class {class} exchange",
                        ctx.id
                    )));
                }
            }
        }
        if r == self.palette + 1 {
            return Ok(Control::Halt((
                state.in_cover,
                state.residual,
                state.charges.clone(),
            )));
        }
        // Send the exchange for class r-1.
        if let Some(&(partner, _)) = slots.get(&(r - 1)) {
            out.send(
                partner,
                VcMsg {
                    residual: state.residual,
                    in_cover: state.in_cover,
                },
            );
        }
        Ok(Control::Continue)
    }
}

/// Runs the local-ratio cover. One color class is handled per communication
/// round, so the round count depends only on the palette, never on weights.
pub fn mwvc_allocate(
    g: &WeightedGraph,
    bids: &BidVector,
    edge_coloring: &ColorAssignment,
    model: &ExecutionModel,
) -> Result<(MwvcOutcome, RoundTrace)> {
    bids.validate_for(g)?;
    if g.edge_count() == 0 {
        return Ok((
            MwvcOutcome {
                cover: vec![false; g.node_count()],
                residuals: bids.0.clone(),
                charges: Vec::new(),
            },
            RoundTrace {
                rounds: 1,
                ..Default::default()
            },
        ));
    }
    if edge_coloring.colors.len() != g.edge_count() {
        return Err(Error::InvalidInput(format!(
            "edge coloring has {} entries for {} edges",
            edge_coloring.colors.len(),
            g.edge_count()
        )));
    }
    let mut schedule: Vec<HashMap<u64, (NodeId, EdgeId)>> = vec![HashMap::new(); g.node_count()];
    for (edge, &(u, v)) in g.edges().iter().enumerate() {
        let class = edge_coloring.colors[edge] as u64;
        if schedule[u].insert(class, (v, edge)).is_some()
            || schedule[v].insert(class, (u, edge)).is_some()
        {
            return Err(Error::ContractViolation(format!(
                "edge coloring assigns class {class} twice at an endpoint of edge {edge}"
            )));
        }
    }
    let program = VcProgram {
        bids,
        schedule,
        palette: edge_coloring.palette_size as u64,
    };
    let (outputs, trace) = sim::run(&program, g, model, sim::default_round_cap(g).max(512))?;

    let mut cover = vec![false; g.node_count()];
    let mut residuals = vec![0; g.node_count()];
    let mut charges = vec![0; g.edge_count()];
    let mut seen = vec![false; g.edge_count()];
    for (v, (in_cover, residual, node_charges)) in outputs.into_iter().enumerate() {
        cover[v] = in_cover;
        residuals[v] = residual;
        for (edge, m) in node_charges {
            if seen[edge] {
                if charges[edge] != m {
                    return Err(Error::Internal(format!(
                        "endpoints disagree on the charge of edge {edge}"
                    )));
                }
            } else {
                seen[edge] = true;
                charges[edge] = m;
            }
        }
    }
    Ok((
        MwvcOutcome {
            cover,
            residuals,
            charges,
        },
        trace,
    ))
}

/// Sequential reference: classes ascending, edges within a class in the given
/// order. Same-class edges are vertex-disjoint, so any in-class order must
/// produce the same result.
#[cfg(test)]
fn sequential_local_ratio(
    g: &WeightedGraph,
    bids: &BidVector,
    edge_coloring: &ColorAssignment,
    in_class_order: &[EdgeId],
) -> MwvcOutcome {
    let mut t: Vec<u32> = bids.0.clone();
    let mut cover = vec![false; g.node_count()];
    let mut charges = vec![0; g.edge_count()];
    for class in 0..edge_coloring.palette_size {
        for &e in in_class_order {
            if edge_coloring.colors[e] != class {
                continue;
            }
            let (u, v) = g.edges()[e];
            if cover[u] || cover[v] {
                continue;
            }
            let m = t[u].min(t[v]);
            t[u] -= m;
            t[v] -= m;
            charges[e] = m;
            if t[u] == 0 {
                cover[u] = true;
            }
            if t[v] == 0 {
                cover[v] = true;
            }
        }
    }
    MwvcOutcome {
        cover,
        residuals: t,
        charges,
    }
}

/// Minimisation critical prices for cover members, computed by generic
/// re-simulation in the LOCAL model.
pub fn mwvc_prices(
    mech: &MwvcMechanism,
    g: &WeightedGraph,
    bids: &BidVector,
    cover: &[bool],
    model: &ExecutionModel,
) -> Result<Vec<Option<u32>>> {
    let labels: Vec<Label> = cover.iter().map(|&c| u32::from(c)).collect();
    critical_prices_all(mech, g, bids, &labels, model)
}

/// The local-ratio vertex-cover mechanism.
pub struct MwvcMechanism {
    edge_coloring: Option<ColorAssignment>,
    coloring_trace: RoundTrace,
}

impl MwvcMechanism {
    pub fn new(g: &WeightedGraph, model: &ExecutionModel) -> Result<Self> {
        if g.edge_count() == 0 {
            return Ok(Self {
                edge_coloring: None,
                coloring_trace: RoundTrace::default(),
            });
        }
        let (edge_coloring, coloring_trace) = color_line_graph(g, model)?;
        Ok(Self {
            edge_coloring: Some(edge_coloring),
            coloring_trace,
        })
    }

    pub fn edge_coloring(&self) -> Option<&ColorAssignment> {
        self.edge_coloring.as_ref()
    }

    pub fn outcome(
        &self,
        g: &WeightedGraph,
        bids: &BidVector,
        model: &ExecutionModel,
    ) -> Result<(MwvcOutcome, RoundTrace)> {
        match &self.edge_coloring {
            Some(coloring) => mwvc_allocate(g, bids, coloring, model),
            None => mwvc_allocate(
                g,
                bids,
                &ColorAssignment {
                    colors: Vec::new(),
                    palette_size: 0,
                },
                model,
            ),
        }
    }
}

impl Mechanism for MwvcMechanism {
    fn name(&self) -> &'static str {
        "mwvc"
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
        let (outcome, trace) = self.outcome(g, bids, model)?;
        Ok((outcome.cover.into_iter().map(u32::from).collect(), trace))
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
