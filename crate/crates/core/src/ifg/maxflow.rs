//! Edmonds–Karp max-flow over exact rationals with infinite capacities.
//!
//! Infinite edges are given a finite stand-in capacity exceeding the sum of
//! all finite capacities, so any flow that reaches it certifies that every
//! cut crosses an infinite edge.

use std::collections::VecDeque;

use num_traits::{One, Zero};

use crate::scalar::{ExactScalar, Q};

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: Q,
    flow: Q,
}

/// A directed network; arcs are stored in forward/backward pairs.
#[derive(Debug, Clone, Default)]
pub struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc>,
    original: Vec<ExactScalar>,
}

/// Flow value together with the minimum cut that certifies it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowCertificate {
    pub value: ExactScalar,
    /// Vertices reachable from the source in the final residual network.
    pub source_side: Vec<bool>,
    /// Total original capacity of the arcs leaving `source_side`.
    pub cut_value: ExactScalar,
}

impl FlowNetwork {
    pub fn new(vertices: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); vertices],
            arcs: Vec::new(),
            original: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, cap: ExactScalar) {
        assert!(!cap.is_negative(), "negative capacity");
        self.adj[u].push(self.arcs.len());
        self.arcs.push(Arc {
            to: v,
            cap: Q::zero(),
            flow: Q::zero(),
        });
        self.original.push(cap);
        self.adj[v].push(self.arcs.len());
        self.arcs.push(Arc {
            to: u,
            cap: Q::zero(),
            flow: Q::zero(),
        });
        self.original.push(ExactScalar::zero());
    }

    /// Maximum `s → t` flow and a matching minimum cut.
    pub fn max_flow(&mut self, s: usize, t: usize) -> FlowCertificate {
        let finite_total: Q = self.original.iter().filter_map(|c| c.finite()).sum();
        let big = finite_total + Q::one();
        for (arc, cap) in self.arcs.iter_mut().zip(&self.original) {
            arc.cap = cap.finite().unwrap_or(big);
            arc.flow = Q::zero();
        }
        let mut total = Q::zero();
        while let Some(path) = self.augmenting_path(s, t) {
            let push = path
                .iter()
                .map(|&a| self.arcs[a].cap - self.arcs[a].flow)
                .min()
                .expect("nonempty path");
            for &a in &path {
                self.arcs[a].flow += push;
                self.arcs[a ^ 1].flow -= push;
            }
            total += push;
        }
        let source_side = self.residual_reach(s);
        let cut_value: ExactScalar = self
            .arcs
            .iter()
            .enumerate()
            .filter(|(i, a)| source_side[self.arcs[i ^ 1].to] && !source_side[a.to])
            .map(|(i, _)| self.original[i])
            .sum();
        let value = if total >= big {
            ExactScalar::INF
        } else {
            ExactScalar::Finite(total)
        };
        assert_eq!(
            value, cut_value,
            "max-flow value differs from its residual cut"
        );
        FlowCertificate {
            value,
            source_side,
            cut_value,
        }
    }

    fn augmenting_path(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let mut via: Vec<Option<usize>> = vec![None; self.adj.len()];
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let arc = &self.arcs[a];
                if !seen[arc.to] && arc.flow < arc.cap {
                    seen[arc.to] = true;
                    via[arc.to] = Some(a);
                    if arc.to == t {
                        let mut path = Vec::new();
                        let mut v = t;
                        while let Some(a) = via[v] {
                            path.push(a);
                            v = self.arcs[a ^ 1].to;
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(arc.to);
                }
            }
        }
        None
    }

    fn residual_reach(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let arc = &self.arcs[a];
                if !seen[arc.to] && arc.flow < arc.cap {
                    seen[arc.to] = true;
                    stack.push(arc.to);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_diamond() {
        let mut g = FlowNetwork::new(4);
        g.add_edge(0, 1, ExactScalar::ratio(1, 3));
        g.add_edge(0, 2, ExactScalar::ratio(1, 2));
        g.add_edge(1, 3, ExactScalar::INF);
        g.add_edge(2, 3, ExactScalar::ratio(1, 7));
        g.add_edge(1, 2, ExactScalar::int(1));
        let c = g.max_flow(0, 3);
        assert_eq!(c.value, ExactScalar::ratio(1, 3) + ExactScalar::ratio(1, 7));
        assert_eq!(c.value, c.cut_value);
    }

    #[test]
    fn all_infinite_path() {
        let mut g = FlowNetwork::new(3);
        g.add_edge(0, 1, ExactScalar::INF);
        g.add_edge(1, 2, ExactScalar::INF);
        g.add_edge(0, 2, ExactScalar::int(4));
        assert!(g.max_flow(0, 2).value.is_infinite());
    }

    #[test]
    fn disconnected_sink() {
        let mut g = FlowNetwork::new(3);
        g.add_edge(0, 1, ExactScalar::int(2));
        assert_eq!(g.max_flow(0, 2).value, ExactScalar::zero());
    }
}
