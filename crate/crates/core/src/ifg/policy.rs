//! Helper selection policies driven by the failure history.

use crate::error::Result;
use crate::model::{FamilyStructure, GroupPartition};

use super::InfoFlowGraph;

/// Chooses the helpers of a newcomer from the failure history.
///
/// The last entry of `history` is the node being repaired. The answer must
/// hold `d` distinct storage indices other than that node.
pub trait HelperPolicy {
    fn helpers(&self, history: &[usize]) -> Vec<usize>;
}

/// Each node always uses the same helper set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationaryPolicy {
    pub helper_sets: Vec<Vec<usize>>,
}

impl HelperPolicy for StationaryPolicy {
    fn helpers(&self, history: &[usize]) -> Vec<usize> {
        self.helper_sets[history[history.len() - 1] - 1].clone()
    }
}

/// Family helper selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FhsPolicy {
    pub families: FamilyStructure,
}

impl FhsPolicy {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        Ok(FhsPolicy {
            families: FamilyStructure::new(n, d)?,
        })
    }
}

impl HelperPolicy for FhsPolicy {
    fn helpers(&self, history: &[usize]) -> Vec<usize> {
        self.families.helpers(history[history.len() - 1]).to_vec()
    }
}

/// Family helper selection applied inside each group of a partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyPlusPolicy {
    pub partition: GroupPartition,
    helper_sets: Vec<Vec<usize>>,
}

impl FamilyPlusPolicy {
    pub fn new(partition: GroupPartition) -> Result<Self> {
        let mut helper_sets = Vec::with_capacity(partition.n());
        for range in partition.ranges() {
            let offset = range.start() - 1;
            let fs = FamilyStructure::new(range.end() - offset, partition.d)?;
            for local in 1..=fs.n {
                helper_sets.push(fs.helpers(local).iter().map(|h| h + offset).collect());
            }
        }
        Ok(FamilyPlusPolicy {
            partition,
            helper_sets,
        })
    }

    pub fn helper_sets(&self) -> &[Vec<usize>] {
        &self.helper_sets
    }
}

impl HelperPolicy for FamilyPlusPolicy {
    fn helpers(&self, history: &[usize]) -> Vec<usize> {
        self.helper_sets[history[history.len() - 1] - 1].clone()
    }
}

/// The `d` nodes following the failed one, cyclically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicPolicy {
    pub n: usize,
    pub d: usize,
}

impl HelperPolicy for CyclicPolicy {
    fn helpers(&self, history: &[usize]) -> Vec<usize> {
        let f = history[history.len() - 1];
        (1..=self.d).map(|j| (f - 1 + j) % self.n + 1).collect()
    }
}

/// Wraps a closure as a policy.
pub struct FnPolicy<F: Fn(&[usize]) -> Vec<usize>>(pub F);

impl<F: Fn(&[usize]) -> Vec<usize>> HelperPolicy for FnPolicy<F> {
    fn helpers(&self, history: &[usize]) -> Vec<usize> {
        (self.0)(history)
    }
}

/// Applies a failure sequence to `g`, asking `policy` for every repair.
pub fn run_policy(
    policy: &dyn HelperPolicy,
    g: &mut InfoFlowGraph,
    failures: &[usize],
) -> Result<()> {
    for &f in failures {
        let mut history = g.history().to_vec();
        history.push(f);
        let helpers = policy.helpers(&history);
        g.fail_and_repair(f, &helpers)?;
    }
    Ok(())
}
