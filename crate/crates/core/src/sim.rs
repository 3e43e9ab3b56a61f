//! Deterministic synchronous message-passing execution of node programs in
//! the LOCAL and CONGEST models, with round and message-size accounting.
//!
//! A message sent in round `r` is delivered in the inbox of round `r + 1`.
//! Halted nodes are never invoked again and their outgoing queues stay empty;
//! messages addressed to them are dropped but still counted in the trace.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedGraph};

/// `ceil(log2(domain))` — the fixed field width for a value from a domain of
/// the given size. A domain of one value needs zero bits.
pub fn bits_for(domain: u64) -> u64 {
    if domain <= 1 {
        0
    } else {
        64 - (domain - 1).leading_zeros() as u64
    }
}

/// Tag width for an enum with the given number of variants.
pub fn enum_bits(variants: u64) -> u64 {
    bits_for(variants)
}

/// Iterated ceiling logarithm; the `log* n` term of the round bounds.
pub fn log_star(mut n: u64) -> u64 {
    let mut count = 0;
    while n > 1 {
        n = bits_for(n);
        count += 1;
    }
    count
}

/// Fixed field widths used to serialize message payloads for bit accounting:
/// node ids and colors take `ceil(log2 n)` bits, bids and values
/// `ceil(log2(W+1))` bits.
#[derive(Clone, Copy, Debug)]
pub struct FieldEnc {
    pub id_bits: u64,
    pub value_bits: u64,
}

impl FieldEnc {
    pub fn for_graph(g: &WeightedGraph) -> Self {
        Self {
            id_bits: bits_for(g.node_count() as u64),
            value_bits: bits_for(g.weight_bound() as u64 + 1),
        }
    }
}

/// A message payload with a deterministic serialized size.
pub trait Payload: Clone {
    fn bit_len(&self, enc: &FieldEnc) -> u64;
}

/// Execution model: LOCAL imposes no message-size limit, CONGEST enforces
/// `constant * ceil(log2(max(n,2)))` bits per message.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecutionModel {
    Local,
    Congest { constant: u64 },
}

impl ExecutionModel {
    pub fn bit_budget(&self, n: usize) -> Option<u64> {
        match self {
            ExecutionModel::Local => None,
            ExecutionModel::Congest { constant } => Some(constant * bits_for(n.max(2) as u64)),
        }
    }
}

/// Round and message accounting for one execution.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RoundTrace {
    pub rounds: u64,
    pub messages_total: u64,
    pub max_message_bits: u64,
}

impl RoundTrace {
    /// Accounting for two phases executed back to back.
    pub fn then(&self, next: &RoundTrace) -> RoundTrace {
        RoundTrace {
            rounds: self.rounds + next.rounds,
            messages_total: self.messages_total + next.messages_total,
            max_message_bits: self.max_message_bits.max(next.max_message_bits),
        }
    }

    /// Trace with rounds and messages scaled by a simulation overhead factor.
    pub fn scaled(&self, factor: u64) -> RoundTrace {
        RoundTrace {
            rounds: self.rounds * factor,
            messages_total: self.messages_total * factor,
            max_message_bits: self.max_message_bits,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("trace serializes")
    }
}

/// Checks a finished trace against the CONGEST budget `c * ceil(log2(max(n,2)))`.
pub fn assert_congest(trace: &RoundTrace, n: usize, c: u64) -> std::result::Result<(), String> {
    let budget = c * bits_for(n.max(2) as u64);
    if trace.max_message_bits <= budget {
        Ok(())
    } else {
        Err(format!(
            "max message size {} bits exceeds budget {} (c={c}, n={n})",
            trace.max_message_bits, budget
        ))
    }
}

/// Static per-node context handed to programs.
pub struct NodeCtx<'a> {
    pub id: NodeId,
    pub neighbors: &'a [NodeId],
    pub node_count: usize,
}

/// What a node does at the end of a round.
pub enum Control<O> {
    Continue,
    Halt(O),
}

/// Per-neighbor messages produced by one handler invocation.
pub struct Outbox<M> {
    entries: Vec<(NodeId, M)>,
}

impl<M> Outbox<M> {
    fn new() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    pub fn send(&mut self, to: NodeId, msg: M) {
        self.entries.push((to, msg));
    }

    pub fn broadcast(&mut self, neighbors: &[NodeId], msg: M)
    where
        M: Clone,
    {
        for &u in neighbors {
            self.entries.push((u, msg.clone()));
        }
    }
}

/// A distributed node program: a state initializer plus a pure round handler
/// mapping (state, inbox) to (new state, outbox, optional halt-with-output).
pub trait NodeProgram {
    type State;
    type Msg: Payload;
    type Output: Clone;

    fn init(&self, ctx: &NodeCtx) -> Self::State;

    fn round(
        &self,
        ctx: &NodeCtx,
        state: &mut Self::State,
        inbox: &[(NodeId, Self::Msg)],
        out: &mut Outbox<Self::Msg>,
    ) -> Result<Control<Self::Output>>;
}

/// Events observable by tests through [`run_observed`].
#[derive(Clone, Copy, Debug)]
pub enum RunEvent {
    MessageSent {
        round: u64,
        from: NodeId,
        to: NodeId,
        bits: u64,
    },
    Halted {
        round: u64,
        node: NodeId,
    },
}

/// Runs `program` on `g` until every node halts, enforcing the model's
/// message budget and the round cap.
pub fn run<P: NodeProgram>(
    program: &P,
    g: &WeightedGraph,
    model: &ExecutionModel,
    max_rounds: u64,
) -> Result<(Vec<P::Output>, RoundTrace)> {
    run_observed(program, g, model, max_rounds, |_| {})
}

/// [`run`] with an event observer; used by tests to check synchrony and halt
/// discipline.
pub fn run_observed<P: NodeProgram, F: FnMut(RunEvent)>(
    program: &P,
    g: &WeightedGraph,
    model: &ExecutionModel,
    max_rounds: u64,
    mut observer: F,
) -> Result<(Vec<P::Output>, RoundTrace)> {
    let n = g.node_count();
    let enc = FieldEnc::for_graph(g);
    let budget = model.bit_budget(n);

    let mut states: Vec<P::State> = (0..n)
        .map(|v| {
            program.init(&NodeCtx {
                id: v,
                neighbors: g.neighbors(v),
                node_count: n,
            })
        })
        .collect();
    let mut outputs: Vec<Option<P::Output>> = vec![None; n];
    let mut halted = vec![false; n];
    let mut inboxes: Vec<Vec<(NodeId, P::Msg)>> = vec![Vec::new(); n];
    let mut trace = RoundTrace::default();

    for round in 1..=max_rounds {
        let mut next: Vec<Vec<(NodeId, P::Msg)>> = vec![Vec::new(); n];
        for v in 0..n {
            if halted[v] {
                continue;
            }
            let ctx = NodeCtx {
                id: v,
                neighbors: g.neighbors(v),
                node_count: n,
            };
            let mut out = Outbox::new();
            let control = program.round(&ctx, &mut states[v], &inboxes[v], &mut out)?;
            for (to, msg) in out.entries {
                if !g.neighbors(v).contains(&to) {
                    return Err(Error::Internal(format!(
                        "node {v} sent a message to non-neighbor {to} in round {round}"
                    )));
                }
                let bits = msg.bit_len(&enc);
                trace.messages_total += 1;
                trace.max_message_bits = trace.max_message_bits.max(bits);
                observer(RunEvent::MessageSent {
                    round,
                    from: v,
                    to,
                    bits,
                });
                if let Some(b) = budget {
                    if bits > b {
                        return Err(Error::CongestionViolation {
                            round,
                            sender: v,
                            bits,
                            budget: b,
                        });
                    }
                }
                if !halted[to] {
                    next[to].push((v, msg));
                }
            }
            if let Control::Halt(output) = control {
                outputs[v] = Some(output);
                halted[v] = true;
                observer(RunEvent::Halted { round, node: v });
            }
        }
        inboxes = next;
        if halted.iter().all(|&h| h) {
            trace.rounds = round;
            let outputs = outputs
                .into_iter()
                .map(|o| o.expect("halted with output"))
                .collect();
            return Ok((outputs, trace));
        }
    }
    Err(Error::NonTermination { cap: max_rounds })
}

/// Default round cap, comfortably above every mechanism's bound.
pub fn default_round_cap(g: &WeightedGraph) -> u64 {
    let d = g.max_degree() as u64;
    let w = g.weight_bound() as u64;
    let n = g.node_count() as u64;
    16 * (d * d * d * (w + 1) + 64 * log_star(n) + 64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> WeightedGraph {
        let edges = (0..n - 1).map(|i| (i, i + 1)).collect();
        WeightedGraph::new(n, edges, (0..n as u32).collect(), n as u32).unwrap()
    }

    #[derive(Clone)]
    struct IdMsg(u64);
    impl Payload for IdMsg {
        fn bit_len(&self, enc: &FieldEnc) -> u64 {
            enc.id_bits
        }
    }

    /// Halts immediately, outputting the node's weight.
    struct HaltNow<'a>(&'a WeightedGraph);
    impl NodeProgram for HaltNow<'_> {
        type State = ();
        type Msg = IdMsg;
        type Output = u32;
        fn init(&self, _: &NodeCtx) -> Self::State {}
        fn round(
            &self,
            ctx: &NodeCtx,
            _: &mut Self::State,
            _: &[(NodeId, Self::Msg)],
            _: &mut Outbox<Self::Msg>,
        ) -> Result<Control<Self::Output>> {
            Ok(Control::Halt(self.0.weight(ctx.id)))
        }
    }

    /// Floods the maximum id seen for `k` message rounds.
    struct FloodMax {
        k: u64,
    }
    impl NodeProgram for FloodMax {
        type State = (u64, u64); // (rounds done, max seen)
        type Msg = IdMsg;
        type Output = u64;
        fn init(&self, ctx: &NodeCtx) -> Self::State {
            (0, ctx.id as u64)
        }
        fn round(
            &self,
            ctx: &NodeCtx,
            state: &mut Self::State,
            inbox: &[(NodeId, Self::Msg)],
            out: &mut Outbox<Self::Msg>,
        ) -> Result<Control<Self::Output>> {
            for (_, msg) in inbox {
                state.1 = state.1.max(msg.0);
            }
            if state.0 == self.k {
                return Ok(Control::Halt(state.1));
            }
            state.0 += 1;
            out.broadcast(ctx.neighbors, IdMsg(state.1));
            Ok(Control::Continue)
        }
    }

    #[test]
    fn halt_now_runs_one_round() {
        let g = path(3);
        let (outputs, trace) = run(&HaltNow(&g), &g, &ExecutionModel::Local, 10).unwrap();
        assert_eq!(outputs, g.weights().to_vec());
        assert_eq!(trace.rounds, 1);
        assert_eq!(trace.messages_total, 0);
    }

    #[test]
    fn flood_two_hops_on_path() {
        let g = path(3);
        let (outputs, trace) = run(&FloodMax { k: 2 }, &g, &ExecutionModel::Local, 10).unwrap();
        assert_eq!(outputs, vec![2, 2, 2]);
        assert_eq!(trace.rounds, 3);
    }

    #[test]
    fn congest_budget_is_enforced() {
        #[derive(Clone)]
        struct Fat;
        impl Payload for Fat {
            fn bit_len(&self, _: &FieldEnc) -> u64 {
                9
            }
        }
        struct SendFat;
        impl NodeProgram for SendFat {
            type State = ();
            type Msg = Fat;
            type Output = ();
            fn init(&self, _: &NodeCtx) -> Self::State {}
            fn round(
                &self,
                ctx: &NodeCtx,
                _: &mut Self::State,
                _: &[(NodeId, Self::Msg)],
                out: &mut Outbox<Self::Msg>,
            ) -> Result<Control<Self::Output>> {
                out.broadcast(ctx.neighbors, Fat);
                Ok(Control::Halt(()))
            }
        }
        let g = path(2);
        // Budget 8 bits, payload 9 bits.
        let err = run(&SendFat, &g, &ExecutionModel::Congest { constant: 8 }, 10).unwrap_err();
        match err {
            Error::CongestionViolation { round, bits, .. } => {
                assert_eq!(round, 1);
                assert_eq!(bits, 9);
            }
            other => panic!("expected congestion violation, got {other}"),
        }
    }

    #[test]
    fn assert_congest_arithmetic() {
        let ok = RoundTrace {
            rounds: 1,
            messages_total: 1,
            max_message_bits: 10,
        };
        assert!(assert_congest(&ok, 16, 4).is_ok());
        let over = RoundTrace {
            rounds: 1,
            messages_total: 1,
            max_message_bits: 17,
        };
        assert!(assert_congest(&over, 16, 4).is_err());
        let silent = RoundTrace::default();
        assert!(assert_congest(&silent, 1, 1).is_ok());
    }

    #[test]
    fn round_cap_exceeded_is_reported() {
        struct Forever;
        impl NodeProgram for Forever {
            type State = ();
            type Msg = IdMsg;
            type Output = ();
            fn init(&self, _: &NodeCtx) -> Self::State {}
            fn round(
                &self,
                _: &NodeCtx,
                _: &mut Self::State,
                _: &[(NodeId, Self::Msg)],
                _: &mut Outbox<Self::Msg>,
            ) -> Result<Control<Self::Output>> {
                Ok(Control::Continue)
            }
        }
        assert!(matches!(
            run(&Forever, &path(2), &ExecutionModel::Local, 5),
            Err(Error::NonTermination { cap: 5 })
        ));
    }

    #[test]
    fn runs_are_deterministic() {
        let g = path(5);
        let a = run(&FloodMax { k: 3 }, &g, &ExecutionModel::Local, 20).unwrap();
        let b = run(&FloodMax { k: 3 }, &g, &ExecutionModel::Local, 20).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn messages_arrive_exactly_one_round_later() {
        // Node 0 sends once in round 1; node 1 records the round it first
        // sees any message.
        struct Probe;
        impl NodeProgram for Probe {
            type State = u64;
            type Msg = IdMsg;
            type Output = u64;
            fn init(&self, _: &NodeCtx) -> Self::State {
                0
            }
            fn round(
                &self,
                ctx: &NodeCtx,
                round: &mut Self::State,
                inbox: &[(NodeId, Self::Msg)],
                out: &mut Outbox<Self::Msg>,
            ) -> Result<Control<Self::Output>> {
                *round += 1;
                if ctx.id == 0 {
                    if *round == 1 {
                        out.broadcast(ctx.neighbors, IdMsg(7));
                        return Ok(Control::Continue);
                    }
                    return Ok(Control::Halt(0));
                }
                if !inbox.is_empty() {
                    return Ok(Control::Halt(*round));
                }
                Ok(Control::Continue)
            }
        }
        let g = path(2);
        let (outputs, _) = run(&Probe, &g, &ExecutionModel::Local, 10).unwrap();
        assert_eq!(outputs[1], 2);
    }

    #[test]
    fn halted_nodes_never_send_again() {
        let g = path(4);
        let mut halted_at = [u64::MAX; 4];
        let mut late_send = false;
        run_observed(
            &FloodMax { k: 2 },
            &g,
            &ExecutionModel::Local,
            20,
            |ev| match ev {
                RunEvent::Halted { round, node } => halted_at[node] = round,
                RunEvent::MessageSent { round, from, .. } => {
                    if round > halted_at[from] {
                        late_send = true;
                    }
                }
            },
        )
        .unwrap();
        assert!(!late_send);
    }

    #[test]
    fn trace_json_shape() {
        let t = RoundTrace {
            rounds: 3,
            messages_total: 8,
            max_message_bits: 6,
        };
        assert_eq!(
            t.to_json(),
            r#"{"rounds":3,"messages_total":8,"max_message_bits":6}"#
        );
    }
}
