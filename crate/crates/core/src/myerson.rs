//! The generic mechanism layer: critical-price computation by re-simulation,
//! payment assembly, utility accounting, and discretization of real-valued
//! bids onto the integer grid.
//!
//! All utilities and payments use exact rational arithmetic so the
//! truthfulness checks carry zero tolerance.

use num_traits::{Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::graph::{BidVector, NodeId, WeightedGraph};
use crate::sim::{ExecutionModel, RoundTrace};
use crate::Rat;

pub use crate::graph::Objective;

/// Per-node allocation label: 0/1 for binary problems, the slot index
/// (1-based) for slot assignment.
pub type Label = u32;

/// A mechanism: a monotone allocation rule executed on the simulator plus the
/// payment rule that makes it truthful. Implementations precompute their
/// tie-breaking coloring for one graph at construction time.
pub trait Mechanism: Sync {
    fn name(&self) -> &'static str;

    fn objective(&self) -> Objective;

    /// Runs the allocation on the given bids. The trace covers the allocation
    /// phase only; the coloring is accounted separately.
    fn allocate(
        &self,
        g: &WeightedGraph,
        bids: &BidVector,
        model: &ExecutionModel,
    ) -> Result<(Vec<Label>, RoundTrace)>;

    fn selected(&self, label: Label) -> bool;

    /// Allocation quality as a rational: the selection indicator for binary
    /// problems, the slot rate for slot assignment. Monotonicity is defined
    /// over this quantity.
    fn quality(&self, label: Label) -> Rat;

    /// `u_v(o)` given the node's true weight, in grid units.
    fn utility(&self, g: &WeightedGraph, labels: &[Label], v: NodeId, true_weight: Rat) -> Rat;

    /// Payments in grid units (negative for maximisation problems). The
    /// returned trace covers a dedicated distributed price protocol when the
    /// mechanism has one, and is empty for generic local re-simulation.
    fn payments(
        &self,
        g: &WeightedGraph,
        bids: &BidVector,
        labels: &[Label],
        model: &ExecutionModel,
    ) -> Result<(Vec<Rat>, RoundTrace)> {
        let prices = critical_prices_all(self, g, bids, labels, model)?;
        let payments = payments_from_prices(self.objective(), labels, self, &prices)?;
        Ok((payments, RoundTrace::default()))
    }

    /// Trace of the tie-break coloring computed at construction.
    fn coloring_trace(&self) -> RoundTrace;
}

/// The critical price of `v`: the smallest grid bid at which `v` is selected
/// for maximisation problems (largest for minimisation), or `None` when the
/// selection status never flips. Binary search over the grid, valid by
/// monotonicity; a locally detected step-function violation is an error.
pub fn critical_price<M: Mechanism + ?Sized>(
    mech: &M,
    g: &WeightedGraph,
    bids: &BidVector,
    v: NodeId,
    model: &ExecutionModel,
) -> Result<Option<u32>> {
    let w = g.weight_bound();
    let sel = |x: u32| -> Result<bool> {
        let (labels, _) = mech.allocate(g, &bids.with_bid(v, x), model)?;
        Ok(mech.selected(labels[v]))
    };
    match mech.objective() {
        Objective::Max => {
            if !sel(w)? {
                return Ok(None);
            }
            let (mut lo, mut hi) = (0u32, w);
            while lo < hi {
                let mid = lo + (hi - lo) / 2;
                if sel(mid)? {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            if lo > 0 && sel(lo - 1)? {
                return Err(Error::MonotonicityViolation {
                    node: v,
                    selected_bid: lo - 1,
                    unselected_bid: lo,
                });
            }
            Ok(Some(lo))
        }
        Objective::Min => {
            if !sel(0)? {
                return Ok(None);
            }
            let (mut lo, mut hi) = (0u32, w);
            while lo < hi {
                let mid = lo + (hi - lo).div_ceil(2);
                if sel(mid)? {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            if lo < w && sel(lo + 1)? {
                return Err(Error::MonotonicityViolation {
                    node: v,
                    selected_bid: lo + 1,
                    unselected_bid: lo,
                });
            }
            Ok(Some(lo))
        }
    }
}

/// Linear-scan critical price. Slower than the binary search but detects any
/// non-threshold selection pattern; the two must agree on monotone rules.
pub fn critical_price_scan<M: Mechanism + ?Sized>(
    mech: &M,
    g: &WeightedGraph,
    bids: &BidVector,
    v: NodeId,
    model: &ExecutionModel,
) -> Result<Option<u32>> {
    let w = g.weight_bound();
    let mut pattern = Vec::with_capacity(w as usize + 1);
    for x in 0..=w {
        let (labels, _) = mech.allocate(g, &bids.with_bid(v, x), model)?;
        pattern.push(mech.selected(labels[v]));
    }
    let check = |pattern: &[bool]| -> Result<Option<u32>> {
        // Selected entries must form a contiguous suffix.
        let first = pattern.iter().position(|&s| s);
        match first {
            None => Ok(None),
            Some(i) => {
                for (j, &s) in pattern.iter().enumerate().skip(i) {
                    if !s {
                        return Err(Error::MonotonicityViolation {
                            node: v,
                            selected_bid: i as u32,
                            unselected_bid: j as u32,
                        });
                    }
                }
                Ok(Some(i as u32))
            }
        }
    };
    match mech.objective() {
        Objective::Max => check(&pattern),
        Objective::Min => {
            let reversed: Vec<bool> = pattern.iter().rev().copied().collect();
            Ok(check(&reversed)?.map(|i| w - i))
        }
    }
}

/// Critical prices for every selected node, `None` entries elsewhere.
pub fn critical_prices_all<M: Mechanism + ?Sized>(
    mech: &M,
    g: &WeightedGraph,
    bids: &BidVector,
    labels: &[Label],
    model: &ExecutionModel,
) -> Result<Vec<Option<u32>>> {
    (0..g.node_count())
        .map(|v| {
            if mech.selected(labels[v]) {
                critical_price(mech, g, bids, v, model)
            } else {
                Ok(None)
            }
        })
        .collect()
}

/// Myerson payments from critical prices: `-b*` for selected nodes under
/// maximisation, `+b*` under minimisation, zero otherwise.
pub fn payments_from_prices<M: Mechanism + ?Sized>(
    objective: Objective,
    labels: &[Label],
    mech: &M,
    prices: &[Option<u32>],
) -> Result<Vec<Rat>> {
    labels
        .iter()
        .zip(prices)
        .enumerate()
        .map(|(v, (&label, price))| {
            if !mech.selected(label) {
                return Ok(Rat::zero());
            }
            let p = price.ok_or_else(|| {
                Error::Internal(format!("selected node {v} has no critical price"))
            })?;
            let p = Rat::from_integer(p as i64);
            Ok(match objective {
                Objective::Max => -p,
                Objective::Min => p,
            })
        })
        .collect()
}

/// Total utility `U_v = u_v(o) + p(v)`.
pub fn total_utility<M: Mechanism + ?Sized>(
    mech: &M,
    g: &WeightedGraph,
    labels: &[Label],
    v: NodeId,
    true_weight: Rat,
    payment: Rat,
) -> Rat {
    mech.utility(g, labels, v, true_weight) + payment
}

/// Discretization step `epsilon` with `K = weight_cap / epsilon` an integer;
/// the grid is `{0, eps, 2*eps, ..., K*eps}`.
#[derive(Clone, Debug)]
pub struct DiscretizationConfig {
    pub epsilon: Rat,
    pub weight_cap: Rat,
}

impl DiscretizationConfig {
    pub fn new(epsilon: Rat, weight_cap: Rat) -> Result<Self> {
        if !epsilon.is_positive() {
            return Err(Error::InvalidInput("epsilon must be positive".into()));
        }
        let k = weight_cap / epsilon;
        if !k.is_integer() || k < Rat::from_integer(1) {
            return Err(Error::InvalidInput(format!(
                "weight cap {weight_cap} must be a positive integer multiple of epsilon {epsilon}"
            )));
        }
        Ok(Self {
            epsilon,
            weight_cap,
        })
    }

    /// Number of grid steps; grid indices run `0..=k`.
    pub fn grid_steps(&self) -> u32 {
        (self.weight_cap / self.epsilon).to_integer() as u32
    }

    pub fn grid_value(&self, index: u32) -> Rat {
        self.epsilon * Rat::from_integer(index as i64)
    }
}

/// Rounds real-valued bids onto the grid: down for maximisation, up for
/// minimisation. Returns grid indices in `{0..=K}`.
pub fn discretize(
    real_bids: &[Rat],
    cfg: &DiscretizationConfig,
    objective: Objective,
) -> Result<BidVector> {
    let mut out = Vec::with_capacity(real_bids.len());
    for (v, &b) in real_bids.iter().enumerate() {
        if b.is_negative() || b > cfg.weight_cap {
            return Err(Error::InvalidInput(format!(
                "bid {b} of node {v} outside [0, {}]",
                cfg.weight_cap
            )));
        }
        let steps = b / cfg.epsilon;
        let index = match objective {
            Objective::Max => steps.floor().to_integer(),
            Objective::Min => steps.ceil().to_integer(),
        };
        out.push(index as u32);
    }
    Ok(BidVector(out))
}

/// Allocation, payments, objective value, and execution trace of one
/// mechanism run.
#[derive(Clone, Debug, PartialEq)]
pub struct MechanismResult {
    pub mechanism: String,
    pub allocation: Vec<Label>,
    pub payments: Vec<Rat>,
    pub objective_value: Rat,
    pub trace: RoundTrace,
}

pub fn rat_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl MechanismResult {
    pub fn to_json(&self) -> String {
        let value = json!({
            "mechanism": self.mechanism,
            "allocation": self.allocation,
            "payments": self.payments.iter().map(rat_string).collect::<Vec<_>>(),
            "objective_value": rat_string(&self.objective_value),
            "rounds": self.trace.rounds,
            "messages_total": self.trace.messages_total,
            "max_message_bits": self.trace.max_message_bits,
        });
        value.to_string()
    }
}

/// Runs the allocation once, computes payments for the selected nodes, and
/// assembles the result. The objective value takes the bids as true weights.
pub fn run_mechanism<M: Mechanism + ?Sized>(
    mech: &M,
    g: &WeightedGraph,
    bids: &BidVector,
    model: &ExecutionModel,
) -> Result<MechanismResult> {
    bids.validate_for(g)?;
    let (labels, alloc_trace) = mech.allocate(g, bids, model)?;
    let (payments, price_trace) = mech.payments(g, bids, &labels, model)?;
    let objective_value = (0..g.node_count())
        .map(|v| mech.utility(g, &labels, v, Rat::from_integer(bids.get(v) as i64)))
        .sum();
    Ok(MechanismResult {
        mechanism: mech.name().to_string(),
        allocation: labels,
        payments,
        objective_value,
        trace: mech.coloring_trace().then(&alloc_trace).then(&price_trace),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn discretize_rounds_down_for_max() {
        let cfg = DiscretizationConfig::new(rat(1, 2), rat(2, 1)).unwrap();
        let bids = vec![rat(13, 10)];
        let out = discretize(&bids, &cfg, Objective::Max).unwrap();
        assert_eq!(out.0, vec![2]); // grid value 1.0
    }

    #[test]
    fn discretize_rounds_up_for_min() {
        let cfg = DiscretizationConfig::new(rat(1, 2), rat(2, 1)).unwrap();
        let bids = vec![rat(13, 10)];
        let out = discretize(&bids, &cfg, Objective::Min).unwrap();
        assert_eq!(out.0, vec![3]); // grid value 1.5
    }

    #[test]
    fn discretize_keeps_grid_points() {
        let cfg = DiscretizationConfig::new(rat(1, 2), rat(2, 1)).unwrap();
        let bids = vec![rat(3, 2)];
        for obj in [Objective::Max, Objective::Min] {
            let out = discretize(&bids, &cfg, obj).unwrap();
            assert_eq!(out.0, vec![3]);
        }
    }

    #[test]
    fn discretize_rejects_out_of_range() {
        let cfg = DiscretizationConfig::new(rat(1, 2), rat(2, 1)).unwrap();
        assert!(discretize(&[rat(5, 2)], &cfg, Objective::Max).is_err());
        assert!(discretize(&[rat(-1, 2)], &cfg, Objective::Max).is_err());
    }

    #[test]
    fn grid_requires_integer_step_count() {
        assert!(DiscretizationConfig::new(rat(1, 3), rat(1, 2)).is_err());
        assert!(DiscretizationConfig::new(rat(1, 4), rat(3, 1)).is_ok());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rat_string(&rat(-5, 1)), "-5");
        assert_eq!(rat_string(&rat(3, 4)), "3/4");
    }

    proptest::proptest! {
        #[test]
        fn discretize_brackets_the_value(num in 0i64..=64, den in 1i64..=9, k in 1u32..=16) {
            // Grid step 1/k over the cap 4; bids are arbitrary rationals in range.
            let cfg = DiscretizationConfig::new(Rat::new(1, k as i64), rat(4, 1)).unwrap();
            let bid = rat(num, 16 * den); // in [0, 4]
            let down = discretize(&[bid], &cfg, Objective::Max).unwrap().get(0);
            let up = discretize(&[bid], &cfg, Objective::Min).unwrap().get(0);
            let down_val = cfg.grid_value(down);
            let up_val = cfg.grid_value(up);
            proptest::prop_assert!(down_val <= bid && bid <= up_val);
            proptest::prop_assert!(up_val - down_val <= cfg.epsilon);
            proptest::prop_assert!(down <= cfg.grid_steps() && up <= cfg.grid_steps());
            // Grid points are fixed in both directions.
            if down_val == bid || up_val == bid {
                proptest::prop_assert_eq!(down, up);
            }
        }
    }
}
