//! Information flow graphs.
//!
//! Each stored copy of a node (an incarnation) is a pair of vertices joined
//! by an edge of capacity `α`. The source feeds the initial incarnations over
//! infinite edges; a newcomer receives `β` from each helper's output vertex.
//! A data collector reading `k` active nodes is modeled by merging their
//! output vertices into a super-sink.

mod maxflow;
mod oracle;
mod policy;
mod sets;

use std::fmt::Write as _;

use serde::Serialize;

pub use maxflow::{FlowCertificate, FlowNetwork};
pub use oracle::{
    dhs_game_value, explore_graphs, fhs_failure_orders, oracle_bhs_adversarial, oracle_fhs_mincut,
    oracle_fhs_mincut_with, oracle_policy_mincut, ExploreReport, OracleReport,
};
pub use policy::{
    run_policy, CyclicPolicy, FamilyPlusPolicy, FhsPolicy, FnPolicy, HelperPolicy, StationaryPolicy,
};
pub use sets::{
    converse_adversary, find_m2_set, find_m2_set_within, find_m_set, find_m_set_within,
    ConverseCondition, Witness,
};

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

/// One stored copy of a node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Incarnation {
    /// Storage index in `1..=n`.
    pub node: usize,
    /// `0` for the initial copy, incremented on every repair of the node.
    pub generation: usize,
    /// Incarnation ids the newcomer downloaded from; empty for initial copies.
    pub helpers: Vec<usize>,
    /// Position in the repair chronology; `None` for initial copies.
    pub repair_index: Option<usize>,
}

/// Vertices of the flow network built from a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vertex {
    Source,
    In(usize),
    Out(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfoFlowGraph {
    pub n: usize,
    pub d: usize,
    pub alpha: ExactScalar,
    pub beta: ExactScalar,
    incarnations: Vec<Incarnation>,
    active: Vec<usize>,
    chronology: Vec<usize>,
    history: Vec<usize>,
}

/// The cheapest data collector of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CollectorCut {
    pub value: ExactScalar,
    /// Storage indices read by the collector.
    pub collector: Vec<usize>,
}

impl InfoFlowGraph {
    /// A fresh graph with `n` initial incarnations.
    pub fn new(n: usize, d: usize, alpha: ExactScalar, beta: ExactScalar) -> Result<Self> {
        if n < 2 || d < 1 || d > n - 1 {
            return Err(Error::ConstraintViolation(format!(
                "1 ≤ d ≤ n−1 with n ≥ 2 (got n={n}, d={d})"
            )));
        }
        if alpha.is_negative() || beta.is_negative() {
            return Err(Error::ConstraintViolation(
                "capacities must be nonnegative".into(),
            ));
        }
        let incarnations = (1..=n)
            .map(|node| Incarnation {
                node,
                generation: 0,
                helpers: Vec::new(),
                repair_index: None,
            })
            .collect();
        Ok(InfoFlowGraph {
            n,
            d,
            alpha,
            beta,
            incarnations,
            active: (0..n).collect(),
            chronology: Vec::new(),
            history: Vec::new(),
        })
    }

    pub fn incarnations(&self) -> &[Incarnation] {
        &self.incarnations
    }

    pub fn incarnation(&self, id: usize) -> &Incarnation {
        &self.incarnations[id]
    }

    /// Current incarnation of a storage index.
    pub fn active(&self, node: usize) -> usize {
        self.active[node - 1]
    }

    pub fn active_incarnations(&self) -> &[usize] {
        &self.active
    }

    /// Newcomer incarnations in repair order.
    pub fn chronology(&self) -> &[usize] {
        &self.chronology
    }

    /// Failed storage indices in order.
    pub fn history(&self) -> &[usize] {
        &self.history
    }

    pub fn vertex_count(&self) -> usize {
        1 + 2 * self.incarnations.len()
    }

    pub fn is_repaired(&self, id: usize) -> bool {
        self.incarnations[id].repair_index.is_some()
    }

    /// Whether `younger` downloaded from `older`.
    pub fn connected(&self, older: usize, younger: usize) -> bool {
        self.incarnations[younger].helpers.contains(&older)
    }

    /// Every storage index has been repaired at least once.
    pub fn fully_repaired(&self) -> bool {
        self.active.iter().all(|&id| self.is_repaired(id))
    }

    /// Replaces `node` by a newcomer downloading `β` from each helper.
    pub fn fail_and_repair(&mut self, node: usize, helpers: &[usize]) -> Result<usize> {
        if node == 0 || node > self.n {
            return Err(Error::InvalidHelperSet(format!(
                "failed node {node} outside 1..={}",
                self.n
            )));
        }
        let mut sorted = helpers.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.d || helpers.len() != self.d {
            return Err(Error::InvalidHelperSet(format!(
                "need {} distinct helpers, got {helpers:?}",
                self.d
            )));
        }
        if let Some(&bad) = sorted.iter().find(|&&h| h == 0 || h > self.n || h == node) {
            return Err(Error::InvalidHelperSet(format!(
                "helper {bad} is the failed node or not an active node"
            )));
        }
        let id = self.incarnations.len();
        let helper_ids = sorted.iter().map(|&h| self.active[h - 1]).collect();
        let generation = self.incarnations[self.active[node - 1]].generation + 1;
        self.incarnations.push(Incarnation {
            node,
            generation,
            helpers: helper_ids,
            repair_index: Some(self.chronology.len()),
        });
        self.active[node - 1] = id;
        self.chronology.push(id);
        self.history.push(node);
        Ok(id)
    }

    /// All edges as `(from, to, capacity)`.
    pub fn edges(&self) -> Vec<(Vertex, Vertex, ExactScalar)> {
        let mut out = Vec::new();
        for (id, inc) in self.incarnations.iter().enumerate() {
            if inc.repair_index.is_none() {
                out.push((Vertex::Source, Vertex::In(id), ExactScalar::INF));
            }
            for &h in &inc.helpers {
                out.push((Vertex::Out(h), Vertex::In(id), self.beta));
            }
            out.push((Vertex::In(id), Vertex::Out(id), self.alpha));
        }
        out
    }

    fn vertex_index(v: Vertex) -> usize {
        match v {
            Vertex::Source => 0,
            Vertex::In(id) => 1 + 2 * id,
            Vertex::Out(id) => 2 + 2 * id,
        }
    }

    pub fn vertex_name(&self, v: Vertex) -> String {
        match v {
            Vertex::Source => "s".to_string(),
            Vertex::In(id) => format!(
                "in:{}:{}",
                self.incarnations[id].node, self.incarnations[id].generation
            ),
            Vertex::Out(id) => format!(
                "out:{}:{}",
                self.incarnations[id].node, self.incarnations[id].generation
            ),
        }
    }

    /// Exact max-flow from the source to a collector reading the given storage indices.
    pub fn collector_flow(&self, nodes: &[usize]) -> FlowCertificate {
        let mut net = FlowNetwork::new(self.vertex_count());
        for (u, v, cap) in self.edges() {
            net.add_edge(Self::vertex_index(u), Self::vertex_index(v), cap);
        }
        let sink = net.add_vertex();
        for &node in nodes {
            net.add_edge(
                Self::vertex_index(Vertex::Out(self.active[node - 1])),
                sink,
                ExactScalar::INF,
            );
        }
        net.max_flow(0, sink)
    }

    pub fn collector_cut(&self, nodes: &[usize]) -> ExactScalar {
        self.collector_flow(nodes).value
    }

    /// Minimum over all `C(n, k)` collectors of the exact max-flow.
    pub fn min_cut_over_collectors(&self, k: usize) -> CollectorCut {
        assert!(
            k >= 1 && k <= self.n,
            "collector size {k} outside 1..={}",
            self.n
        );
        let mut best: Option<CollectorCut> = None;
        let mut subset: Vec<usize> = (1..=k).collect();
        loop {
            let value = self.collector_cut(&subset);
            if best.as_ref().is_none_or(|b| value < b.value) {
                best = Some(CollectorCut {
                    value,
                    collector: subset.clone(),
                });
            }
            if !next_subset(&mut subset, self.n) {
                break;
            }
        }
        best.expect("at least one collector")
    }

    /// Edge list with one `u v cap` line per edge.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (u, v, cap) in self.edges() {
            let _ = writeln!(s, "{} {} {}", self.vertex_name(u), self.vertex_name(v), cap);
        }
        s
    }
}

/// Advances a sorted `k`-subset of `1..=n` to the next one in lexicographic order.
pub(crate) fn next_subset(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    for i in (0..k).rev() {
        if subset[i] < n - (k - 1 - i) {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::FamilyStructure;
    use crate::perms::rfip;

    fn int(v: i64) -> ExactScalar {
        ExactScalar::int(v)
    }

    #[test]
    fn fresh_graph_shape() {
        let g = InfoFlowGraph::new(4, 2, int(1), int(1)).unwrap();
        assert_eq!(g.vertex_count(), 9);
        let edges = g.edges();
        assert_eq!(edges.iter().filter(|e| e.2.is_infinite()).count(), 4);
        assert_eq!(edges.len(), 8);
        assert_eq!(
            InfoFlowGraph::new(6, 2, int(1), int(1))
                .unwrap()
                .vertex_count(),
            13
        );
        assert_eq!(
            InfoFlowGraph::new(2, 1, int(1), int(1))
                .unwrap()
                .vertex_count(),
            5
        );
        for k in 1..=4 {
            assert_eq!(g.min_cut_over_collectors(k).value, int(k as i64));
        }
    }

    #[test]
    fn repair_bookkeeping() {
        let mut g = InfoFlowGraph::new(4, 2, int(1), int(1)).unwrap();
        let id = g.fail_and_repair(1, &[2, 3]).unwrap();
        assert_eq!(g.incarnation(id).helpers.len(), 2);
        assert_eq!(g.active(1), id);
        g.fail_and_repair(1, &[3, 4]).unwrap();
        assert_eq!(g.chronology().len(), 2);
        assert_eq!(g.incarnation(g.active(1)).generation, 2);
        assert!(matches!(
            g.fail_and_repair(2, &[2, 3]),
            Err(Error::InvalidHelperSet(_))
        ));
        assert!(matches!(
            g.fail_and_repair(2, &[3]),
            Err(Error::InvalidHelperSet(_))
        ));
        assert!(matches!(
            g.fail_and_repair(2, &[3, 9]),
            Err(Error::InvalidHelperSet(_))
        ));
        assert!(g.dump().lines().any(|l| l == "out:3:0 in:1:2 1"));
        assert!(g.dump().starts_with("s in:1:0 inf\n"));
    }

    fn repair_in_rfip_order(
        n: usize,
        d: usize,
        alpha: ExactScalar,
        beta: ExactScalar,
    ) -> InfoFlowGraph {
        let fs = FamilyStructure::new(n, d).unwrap();
        let pi = rfip(n, d).unwrap();
        let mut used = vec![false; n + 1];
        let mut g = InfoFlowGraph::new(n, d, alpha, beta).unwrap();
        for &label in &pi.entries {
            let node = (1..=n)
                .find(|&i| !used[i] && fs.family_index[i - 1] == label)
                .unwrap();
            used[node] = true;
            g.fail_and_repair(node, fs.helpers(node)).unwrap();
        }
        g
    }

    #[test]
    fn family_repair_rounds() {
        let g = repair_in_rfip_order(4, 2, int(1), int(1));
        assert_eq!(g.min_cut_over_collectors(3).value, int(2));
        let g = repair_in_rfip_order(5, 2, int(2), int(1));
        assert_eq!(g.min_cut_over_collectors(3).value, int(4));
    }

    #[test]
    fn subsets_enumerate_in_order() {
        let mut s = vec![1, 2];
        let mut all = vec![s.clone()];
        while next_subset(&mut s, 4) {
            all.push(s.clone());
        }
        assert_eq!(all.len(), 6);
        assert_eq!(all.last().unwrap(), &vec![3, 4]);
    }
}
