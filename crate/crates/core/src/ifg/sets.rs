//! Chronologically connected node sets and the converse adversary.
//!
//! An m-set is a group of `m` repaired active incarnations in which every
//! younger member downloaded from every older member. A data collector
//! placed on such a set sees at most the blind-selection cut, which is how
//! an adversary defeats any helper policy when helper choice cannot help.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::scalar::ExactScalar;

use super::policy::{run_policy, HelperPolicy};
use super::InfoFlowGraph;

/// Repaired active incarnations in chronological order.
fn repaired_active(g: &InfoFlowGraph, within: Option<&[usize]>) -> Vec<usize> {
    let mut ids: Vec<usize> = g
        .active_incarnations()
        .iter()
        .copied()
        .filter(|&id| g.is_repaired(id))
        .filter(|&id| within.is_none_or(|w| w.contains(&g.incarnation(id).node)))
        .collect();
    ids.sort_by_key(|&id| g.incarnation(id).repair_index);
    ids
}

/// Backtracking search for `m` chronologically ordered incarnations where each
/// later one is connected from each earlier one, except possibly the first pair.
fn connected_chain(
    g: &InfoFlowGraph,
    pool: &[usize],
    m: usize,
    exempt_first_pair: bool,
) -> Option<Vec<usize>> {
    fn extend(
        g: &InfoFlowGraph,
        pool: &[usize],
        from: usize,
        m: usize,
        exempt: bool,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == m {
            return true;
        }
        for idx in from..pool.len() {
            let cand = pool[idx];
            let ok = chosen.iter().enumerate().all(|(pos, &older)| {
                (exempt && pos == 0 && chosen.len() == 1) || g.connected(older, cand)
            });
            if ok {
                chosen.push(cand);
                if extend(g, pool, idx + 1, m, exempt, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    if m == 0 {
        return Some(Vec::new());
    }
    let mut chosen = Vec::with_capacity(m);
    extend(g, pool, 0, m, exempt_first_pair, &mut chosen).then_some(chosen)
}

/// An m-set among the active incarnations, as incarnation ids oldest first.
pub fn find_m_set(g: &InfoFlowGraph, m: usize) -> Option<Vec<usize>> {
    connected_chain(g, &repaired_active(g, None), m, false)
}

/// [`find_m_set`] restricted to the given storage indices.
pub fn find_m_set_within(g: &InfoFlowGraph, nodes: &[usize], m: usize) -> Option<Vec<usize>> {
    connected_chain(g, &repaired_active(g, Some(nodes)), m, false)
}

/// An (m,2)-set: like an m-set, but the two oldest members need not be connected.
pub fn find_m2_set(g: &InfoFlowGraph, m: usize) -> Option<Vec<usize>> {
    connected_chain(g, &repaired_active(g, None), m, true)
}

/// [`find_m2_set`] restricted to the given storage indices.
pub fn find_m2_set_within(g: &InfoFlowGraph, nodes: &[usize], m: usize) -> Option<Vec<usize>> {
    connected_chain(g, &repaired_active(g, Some(nodes)), m, true)
}

/// Which blind-selection optimality condition the adversary exploits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConverseCondition {
    /// `d = 1`, `k = 3` and `n` odd.
    #[serde(rename = "i")]
    OddTriple,
    /// `k ≤ ⌈n/(n−d)⌉`.
    #[serde(rename = "ii")]
    SmallK,
}

/// A graph produced against a policy together with a cheap collector.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub condition: ConverseCondition,
    pub failures: Vec<usize>,
    /// Storage indices read by the collector.
    pub collector: Vec<usize>,
    pub cut: ExactScalar,
    #[serde(skip)]
    pub graph: InfoFlowGraph,
}

/// Drives `policy` into a graph containing a collector whose cut does not
/// exceed the blind-selection min-cut.
pub fn converse_adversary(
    policy: &dyn HelperPolicy,
    p: &SystemParams,
    alpha: ExactScalar,
    beta: ExactScalar,
    seed: u64,
) -> Result<Witness> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = InfoFlowGraph::new(p.n, p.d, alpha, beta)?;
    let mut round: Vec<usize> = (1..=p.n).collect();
    round.shuffle(&mut rng);
    if p.k <= p.family_count() {
        run_policy(policy, &mut g, &round)?;
        let m = p.family_count();
        let set = find_m_set(&g, m).ok_or_else(|| {
            Error::PreconditionViolation(format!(
                "no {m}-set after a full repair round; the policy is inconsistent"
            ))
        })?;
        let collector: Vec<usize> = set[..p.k]
            .iter()
            .map(|&id| g.incarnation(id).node)
            .collect();
        let cut = g.collector_cut(&collector);
        return Ok(Witness {
            condition: ConverseCondition::SmallK,
            failures: g.history().to_vec(),
            collector,
            cut,
            graph: g,
        });
    }
    if p.d == 1 && p.k == 3 && p.n % 2 == 1 {
        run_policy(policy, &mut g, &round)?;
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        loop {
            let mut untouched: Vec<usize> = (1..=p.n)
                .filter(|v| !pairs.iter().any(|&(x, y)| x == *v || y == *v))
                .collect();
            untouched.shuffle(&mut rng);
            let w = untouched[0];
            run_policy(policy, &mut g, &[w])?;
            let h = g.incarnation(g.active(w)).helpers[0];
            let h = g.incarnation(h).node;
            if let Some(&(x, y)) = pairs.iter().find(|&&(x, y)| x == h || y == h) {
                let collector = vec![x, y, w];
                let cut = g.collector_cut(&collector);
                return Ok(Witness {
                    condition: ConverseCondition::OddTriple,
                    failures: g.history().to_vec(),
                    collector,
                    cut,
                    graph: g,
                });
            }
            pairs.push((h, w));
        }
    }
    Err(Error::PreconditionViolation(format!(
        "(n,k,d)=({},{},{}) satisfies neither d=1,k=3,n odd nor k ≤ ⌈n/(n−d)⌉",
        p.n, p.k, p.d
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::bhs_mincut;
    use crate::ifg::{CyclicPolicy, FhsPolicy};

    fn int(v: i64) -> ExactScalar {
        ExactScalar::int(v)
    }

    #[test]
    fn m_sets_after_a_family_round() {
        let p = SystemParams::new(6, 3, 4).unwrap();
        let policy = FhsPolicy::new(6, 4).unwrap();
        let mut g = InfoFlowGraph::new(6, 4, ExactScalar::INF, int(1)).unwrap();
        run_policy(&policy, &mut g, &[1, 2, 3, 4, 5, 6]).unwrap();
        let set = find_m_set(&g, 3).unwrap();
        let nodes: Vec<usize> = set.iter().map(|&id| g.incarnation(id).node).collect();
        assert!(g.collector_cut(&nodes) <= bhs_mincut(&p, ExactScalar::INF, int(1)));
        assert_eq!(find_m_set(&g, 1).unwrap().len(), 1);
    }

    #[test]
    fn m2_sets() {
        let policy = FhsPolicy::new(4, 2).unwrap();
        let mut g = InfoFlowGraph::new(4, 2, int(1), int(1)).unwrap();
        run_policy(&policy, &mut g, &[1, 3, 2, 4]).unwrap();
        assert!(find_m2_set(&g, 3).is_some());
        assert!(find_m2_set(&g, 2).is_some());
        let policy = FhsPolicy::new(6, 4).unwrap();
        let mut g = InfoFlowGraph::new(6, 4, int(1), int(1)).unwrap();
        run_policy(&policy, &mut g, &[1, 3, 5, 2, 4, 6]).unwrap();
        assert!(find_m2_set(&g, 4).is_some());
    }

    #[test]
    fn adversary_examples() {
        let inf = ExactScalar::INF;
        let p = SystemParams::new(6, 3, 4).unwrap();
        let w = converse_adversary(&FhsPolicy::new(6, 4).unwrap(), &p, inf, int(1), 3).unwrap();
        assert_eq!(w.condition, ConverseCondition::SmallK);
        assert!(w.cut <= int(9));
        let p = SystemParams::new(7, 3, 1).unwrap();
        let w = converse_adversary(&CyclicPolicy { n: 7, d: 1 }, &p, inf, int(1), 5).unwrap();
        assert_eq!(w.condition, ConverseCondition::OddTriple);
        assert!(w.cut <= int(1));
        let p = SystemParams::new(6, 4, 4).unwrap();
        assert!(matches!(
            converse_adversary(&FhsPolicy::new(6, 4).unwrap(), &p, inf, int(1), 0),
            Err(Error::PreconditionViolation(_))
        ));
    }
}
