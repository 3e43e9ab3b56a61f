//! Intentionally faulty mechanism variants. The verification suites must
//! flag each of these; they exist to prove the sweeps are not vacuous.

use num_traits::Zero;

use crate::error::Result;
use crate::graph::{BidVector, NodeId, Objective, WeightedGraph};
use crate::mwis::{MwisMechanism, TiePolicy};
use crate::myerson::{Label, Mechanism};
use crate::sim::{ExecutionModel, RoundTrace};
use crate::Rat;

/// Pays each selected node its own bid instead of the critical price.
pub struct FirstPriceMwis {
    inner: MwisMechanism,
}

impl FirstPriceMwis {
    pub fn new(g: &WeightedGraph, model: &ExecutionModel) -> Result<Self> {
        Ok(Self {
            inner: MwisMechanism::new(g, model)?,
        })
    }
}

impl Mechanism for FirstPriceMwis {
    fn name(&self) -> &'static str {
        "mwis-first-price"
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
        self.inner.allocate(g, bids, model)
    }

    fn selected(&self, label: Label) -> bool {
        self.inner.selected(label)
    }

    fn quality(&self, label: Label) -> Rat {
        self.inner.quality(label)
    }

    fn utility(&self, g: &WeightedGraph, labels: &[Label], v: NodeId, true_weight: Rat) -> Rat {
        self.inner.utility(g, labels, v, true_weight)
    }

    fn payments(
        &self,
        _: &WeightedGraph,
        bids: &BidVector,
        labels: &[Label],
        _: &ExecutionModel,
    ) -> Result<(Vec<Rat>, RoundTrace)> {
        let payments = labels
            .iter()
            .enumerate()
            .map(|(v, &l)| {
                if l == 1 {
                    -Rat::from_integer(bids.get(v) as i64)
                } else {
                    Rat::zero()
                }
            })
            .collect();
        Ok((payments, RoundTrace::default()))
    }

    fn coloring_trace(&self) -> RoundTrace {
        self.inner.coloring_trace()
    }
}

/// Breaks ties toward the larger color in every comparison of the allocation
/// and the price protocol, while the protocol's price formula keeps its
/// original color branch. The selection rule stays monotone, but the charged
/// prices are wrong wherever a tie decides.
pub fn reversed_tie_mwis(g: &WeightedGraph, model: &ExecutionModel) -> Result<MwisMechanism> {
    let mut mech = MwisMechanism::new(g, model)?;
    mech.policy = TiePolicy::LargerColorWins;
    Ok(mech)
}

/// Skips the blocking-neighbor check in the price protocol: the price always
/// comes from the highest smaller neighbor, blocked or not.
pub fn skip_blocking_mwis(g: &WeightedGraph, model: &ExecutionModel) -> Result<MwisMechanism> {
    let mut mech = MwisMechanism::new(g, model)?;
    mech.use_blocking = false;
    Ok(mech)
}

/// Runs the greedy selection on inverted bids, so raising a bid can evict the
/// node from the set. This is the non-monotone mutant the monotonicity sweep
/// must catch.
pub struct InvertedGreedyMwis {
    inner: MwisMechanism,
}

impl InvertedGreedyMwis {
    pub fn new(g: &WeightedGraph, model: &ExecutionModel) -> Result<Self> {
        Ok(Self {
            inner: MwisMechanism::new(g, model)?,
        })
    }
}

impl Mechanism for InvertedGreedyMwis {
    fn name(&self) -> &'static str {
        "mwis-inverted"
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
        let inverted = BidVector(bids.0.iter().map(|&b| g.weight_bound() - b).collect());
        self.inner.allocate(g, &inverted, model)
    }

    fn selected(&self, label: Label) -> bool {
        label == 1
    }

    fn quality(&self, label: Label) -> Rat {
        Rat::from_integer(label as i64)
    }

    fn utility(&self, g: &WeightedGraph, labels: &[Label], v: NodeId, true_weight: Rat) -> Rat {
        self.inner.utility(g, labels, v, true_weight)
    }

    fn payments(
        &self,
        g: &WeightedGraph,
        _: &BidVector,
        _: &[Label],
        _: &ExecutionModel,
    ) -> Result<(Vec<Rat>, RoundTrace)> {
        Ok((vec![Rat::zero(); g.node_count()], RoundTrace::default()))
    }

    fn coloring_trace(&self) -> RoundTrace {
        self.inner.coloring_trace()
    }
}
