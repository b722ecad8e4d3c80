//! Brute-force min-cut oracles built on explicit graphs and exact max-flow.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::model::{FamilyStructure, SystemParams};
use crate::scalar::ExactScalar;

use super::policy::HelperPolicy;
use super::{next_subset, InfoFlowGraph};

/// Outcome of an oracle search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub value: ExactScalar,
    /// Graphs whose collectors were evaluated.
    pub graphs_checked: u64,
    /// Failure sequence of a graph attaining `value`.
    pub witness_failures: Vec<usize>,
    /// Collector attaining `value` in that graph.
    pub witness_collector: Vec<usize>,
}

/// One node order per distinct family index sequence of `fs`.
///
/// Interchangeable complete families are taken in order of first use, and
/// within a label nodes fail in increasing index order.
pub fn fhs_failure_orders(fs: &FamilyStructure) -> Vec<Vec<usize>> {
    let symmetric = if fs.has_incomplete_family() {
        fs.c - 1
    } else {
        fs.c
    };
    let mut labels: Vec<i64> = fs.family_index.clone();
    labels.sort_unstable();
    labels.dedup();
    let pools: Vec<Vec<usize>> = labels
        .iter()
        .map(|&l| {
            (1..=fs.n)
                .filter(|&i| fs.family_index[i - 1] == l)
                .collect()
        })
        .collect();
    let mut used = vec![0usize; labels.len()];
    let mut order = Vec::with_capacity(fs.n);
    let mut out = Vec::new();
    orders_from(
        &labels,
        &pools,
        symmetric as i64,
        &mut used,
        &mut order,
        &mut out,
    );
    out
}

fn orders_from(
    labels: &[i64],
    pools: &[Vec<usize>],
    symmetric: i64,
    used: &mut [usize],
    order: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if used.iter().zip(pools).all(|(u, p)| *u == p.len()) {
        out.push(order.clone());
        return;
    }
    for li in 0..labels.len() {
        if used[li] == pools[li].len() {
            continue;
        }
        let l = labels[li];
        if (1..=symmetric).contains(&l) && used[li] == 0 {
            // a fresh interchangeable family may only open after all smaller ones
            let earlier_closed = labels
                .iter()
                .zip(used.iter())
                .any(|(&m, &u)| (1..l).contains(&m) && u == 0);
            if earlier_closed {
                continue;
            }
        }
        order.push(pools[li][used[li]]);
        used[li] += 1;
        orders_from(labels, pools, symmetric, used, order, out);
        used[li] -= 1;
        order.pop();
    }
}

/// Minimum collector cut over single rounds of family repairs in every failure order.
pub fn oracle_fhs_mincut(
    p: &SystemParams,
    alpha: ExactScalar,
    beta: ExactScalar,
    extra_rounds: usize,
) -> Result<ExactScalar> {
    Ok(oracle_fhs_mincut_with(p, alpha, beta, extra_rounds, 0, &Limits::default())?.value)
}

/// [`oracle_fhs_mincut`] with a seed for the extra random rounds and explicit limits.
///
/// After the single round each graph is driven through `extra_rounds · n`
/// further failures of uniformly random nodes, evaluating after every one.
pub fn oracle_fhs_mincut_with(
    p: &SystemParams,
    alpha: ExactScalar,
    beta: ExactScalar,
    extra_rounds: usize,
    seed: u64,
    limits: &Limits,
) -> Result<OracleReport> {
    if p.n > limits.max_oracle_n {
        return Err(Error::SearchSpaceTooLarge {
            what: format!("failure orders of n={} nodes", p.n),
            cap: limits.max_oracle_n as u64,
        });
    }
    let fs = FamilyStructure::new(p.n, p.d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<OracleReport> = None;
    let mut checked = 0u64;
    let mut consider = |g: &InfoFlowGraph, best: &mut Option<OracleReport>| {
        let cut = g.min_cut_over_collectors(p.k);
        checked += 1;
        if best.as_ref().is_none_or(|b| cut.value < b.value) {
            *best = Some(OracleReport {
                value: cut.value,
                graphs_checked: 0,
                witness_failures: g.history().to_vec(),
                witness_collector: cut.collector,
            });
        }
    };
    for order in fhs_failure_orders(&fs) {
        let mut g = InfoFlowGraph::new(p.n, p.d, alpha, beta)?;
        for &node in &order {
            g.fail_and_repair(node, fs.helpers(node))?;
        }
        consider(&g, &mut best);
        for _ in 0..extra_rounds * p.n {
            let node = rng.gen_range(1..=p.n);
            g.fail_and_repair(node, fs.helpers(node))?;
            consider(&g, &mut best);
        }
    }
    let mut report = best.expect("at least one failure order");
    report.graphs_checked = checked;
    Ok(report)
}

/// Minimum collector cut over every failure sequence of length at most `budget` under `policy`.
///
/// This bounds the policy's true minimum from above; it is exact only once
/// the reachable graphs are exhausted.
pub fn oracle_policy_mincut(
    policy: &dyn HelperPolicy,
    p: &SystemParams,
    alpha: ExactScalar,
    beta: ExactScalar,
    budget: usize,
    limits: &Limits,
) -> Result<OracleReport> {
    let size = (0..=budget as u32).try_fold(0u64, |acc, j| {
        (p.n as u64).checked_pow(j).and_then(|v| acc.checked_add(v))
    });
    if size.is_none_or(|s| s > limits.max_vectors) {
        return Err(Error::SearchSpaceTooLarge {
            what: format!("{}-ary failure tree of depth {budget}", p.n),
            cap: limits.max_vectors,
        });
    }
    let g = InfoFlowGraph::new(p.n, p.d, alpha, beta)?;
    let mut best: Option<OracleReport> = None;
    let mut checked = 0;
    policy_search(policy, p, g, budget, &mut best, &mut checked)?;
    let mut report = best.expect("root graph evaluated");
    report.graphs_checked = checked;
    Ok(report)
}

fn policy_search(
    policy: &dyn HelperPolicy,
    p: &SystemParams,
    g: InfoFlowGraph,
    left: usize,
    best: &mut Option<OracleReport>,
    checked: &mut u64,
) -> Result<()> {
    let cut = g.min_cut_over_collectors(p.k);
    *checked += 1;
    if best.as_ref().is_none_or(|b| cut.value < b.value) {
        *best = Some(OracleReport {
            value: cut.value,
            graphs_checked: 0,
            witness_failures: g.history().to_vec(),
            witness_collector: cut.collector,
        });
    }
    if left == 0 {
        return Ok(());
    }
    for node in 1..=p.n {
        let mut history = g.history().to_vec();
        history.push(node);
        let helpers = policy.helpers(&history);
        let mut next = g.clone();
        next.fail_and_repair(node, &helpers)?;
        policy_search(policy, p, next, left - 1, best, checked)?;
    }
    Ok(())
}

/// Size of an exhaustive graph exploration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExploreReport {
    /// Distinct graphs up to relabeling that were visited.
    pub states: u64,
}

type StateKey = (Vec<(bool, Vec<u16>)>, Vec<(bool, Vec<u16>)>);

/// Isomorphism-invariant summary of the part of `g` that can still matter.
///
/// Only ancestors of active incarnations are kept. Newcomers keep their
/// chronological order; initial incarnations are interchangeable and are
/// described by the newcomers they fed.
fn state_key(g: &InfoFlowGraph) -> StateKey {
    let incs = g.incarnations();
    let mut keep = vec![false; incs.len()];
    let mut active = vec![false; incs.len()];
    let mut stack: Vec<usize> = g.active_incarnations().to_vec();
    for &id in &stack {
        active[id] = true;
    }
    while let Some(id) = stack.pop() {
        if !keep[id] {
            keep[id] = true;
            stack.extend(&incs[id].helpers);
        }
    }
    let mut label = vec![u16::MAX; incs.len()];
    let kept_newcomers: Vec<usize> = g
        .chronology()
        .iter()
        .copied()
        .filter(|&id| keep[id])
        .collect();
    for (l, &id) in kept_newcomers.iter().enumerate() {
        label[id] = l as u16;
    }
    let mut fed: Vec<Vec<u16>> = vec![Vec::new(); incs.len()];
    let newcomers = kept_newcomers
        .iter()
        .map(|&id| {
            let mut from: Vec<u16> = Vec::new();
            for &h in &incs[id].helpers {
                if incs[h].repair_index.is_some() {
                    from.push(label[h]);
                } else {
                    fed[h].push(label[id]);
                }
            }
            from.sort_unstable();
            (active[id], from)
        })
        .collect();
    let mut initial: Vec<(bool, Vec<u16>)> = (0..incs.len())
        .filter(|&id| keep[id] && incs[id].repair_index.is_none())
        .map(|id| (active[id], std::mem::take(&mut fed[id])))
        .collect();
    initial.sort_unstable();
    (newcomers, initial)
}

/// Visits every graph reachable with at most `depth` failures under every
/// possible helper choice, once per isomorphism class.
pub fn explore_graphs(
    p: &SystemParams,
    alpha: ExactScalar,
    beta: ExactScalar,
    depth: usize,
    limits: &Limits,
    visit: &mut dyn FnMut(&InfoFlowGraph),
) -> Result<ExploreReport> {
    let g = InfoFlowGraph::new(p.n, p.d, alpha, beta)?;
    let mut seen: HashMap<StateKey, usize> = HashMap::new();
    explore_from(g, depth, limits, &mut seen, visit)?;
    Ok(ExploreReport {
        states: seen.len() as u64,
    })
}

fn explore_from(
    g: InfoFlowGraph,
    left: usize,
    limits: &Limits,
    seen: &mut HashMap<StateKey, usize>,
    visit: &mut dyn FnMut(&InfoFlowGraph),
) -> Result<()> {
    let key = state_key(&g);
    match seen.get(&key) {
        Some(&done) if done >= left => return Ok(()),
        Some(_) => {}
        None => {
            if seen.len() as u64 >= limits.max_vectors {
                return Err(Error::SearchSpaceTooLarge {
                    what: "explored graph states".into(),
                    cap: limits.max_vectors,
                });
            }
            visit(&g);
        }
    }
    seen.insert(key, left);
    if left == 0 {
        return Ok(());
    }
    let mut children: HashMap<StateKey, InfoFlowGraph> = HashMap::new();
    for node in 1..=g.n {
        let others: Vec<usize> = (1..=g.n).filter(|&h| h != node).collect();
        let mut pick: Vec<usize> = (1..=g.d).collect();
        loop {
            let helpers: Vec<usize> = pick.iter().map(|&i| others[i - 1]).collect();
            let mut next = g.clone();
            next.fail_and_repair(node, &helpers)?;
            children.entry(state_key(&next)).or_insert(next);
            if !next_subset(&mut pick, others.len()) {
                break;
            }
        }
    }
    let mut children: Vec<(StateKey, InfoFlowGraph)> = children.into_iter().collect();
    children.sort_by(|a, b| a.0.cmp(&b.0));
    for (_, child) in children {
        explore_from(child, left - 1, limits, seen, visit)?;
    }
    Ok(())
}

/// Blind selection realized as an adversary choosing every failure and helper set.
///
/// Returns the minimum collector cut over all graphs reachable within `depth` failures.
pub fn oracle_bhs_adversarial(
    p: &SystemParams,
    alpha: ExactScalar,
    beta: ExactScalar,
    depth: usize,
    limits: &Limits,
) -> Result<OracleReport> {
    let mut best: Option<OracleReport> = None;
    let report = explore_graphs(p, alpha, beta, depth, limits, &mut |g| {
        let cut = g.min_cut_over_collectors(p.k);
        if best.as_ref().is_none_or(|b| cut.value < b.value) {
            best = Some(OracleReport {
                value: cut.value,
                graphs_checked: 0,
                witness_failures: g.history().to_vec(),
                witness_collector: cut.collector,
            });
        }
    })?;
    let mut out = best.expect("root graph visited");
    out.graphs_checked = report.states;
    Ok(out)
}

/// Best min-cut any dynamic helper policy can guarantee against an adversary
/// choosing up to `depth` failures.
///
/// The policy picks every helper set to maximize and the adversary picks
/// every failure to minimize the smallest collector cut seen so far. Because
/// the search stops at `depth`, the result bounds the true value from above.
pub fn dhs_game_value(
    p: &SystemParams,
    alpha: ExactScalar,
    beta: ExactScalar,
    depth: usize,
    limits: &Limits,
) -> Result<OracleReport> {
    let g = InfoFlowGraph::new(p.n, p.d, alpha, beta)?;
    let mut memo: HashMap<(StateKey, usize), ExactScalar> = HashMap::new();
    let value = game(&g, p.k, depth, limits, &mut memo)?;
    Ok(OracleReport {
        value,
        graphs_checked: memo.len() as u64,
        witness_failures: Vec::new(),
        witness_collector: Vec::new(),
    })
}

fn game(
    g: &InfoFlowGraph,
    k: usize,
    left: usize,
    limits: &Limits,
    memo: &mut HashMap<(StateKey, usize), ExactScalar>,
) -> Result<ExactScalar> {
    let key = (state_key(g), left);
    if let Some(v) = memo.get(&key) {
        return Ok(*v);
    }
    if memo.len() as u64 >= limits.max_vectors {
        return Err(Error::SearchSpaceTooLarge {
            what: "game states".into(),
            cap: limits.max_vectors,
        });
    }
    let mut value = g.min_cut_over_collectors(k).value;
    if left > 0 {
        for node in 1..=g.n {
            let others: Vec<usize> = (1..=g.n).filter(|&h| h != node).collect();
            let mut pick: Vec<usize> = (1..=g.d).collect();
            let mut reply: Option<ExactScalar> = None;
            loop {
                let helpers: Vec<usize> = pick.iter().map(|&i| others[i - 1]).collect();
                let mut next = g.clone();
                next.fail_and_repair(node, &helpers)?;
                let v = game(&next, k, left - 1, limits, memo)?;
                reply = Some(reply.map_or(v, |r| r.max(v)));
                // the adversary already has something at least as good
                if v >= value || !next_subset(&mut pick, others.len()) {
                    break;
                }
            }
            value = value.min(reply.expect("at least one helper set"));
        }
    }
    memo.insert(key, value);
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulas::fhs_mincut;
    use crate::ifg::FhsPolicy;

    fn int(v: i64) -> ExactScalar {
        ExactScalar::int(v)
    }

    #[test]
    fn failure_orders_cover_family_sequences() {
        let fs = FamilyStructure::new(6, 4).unwrap();
        // 6!/(2!2!2!) sequences, 3! relabelings of the families
        assert_eq!(fhs_failure_orders(&fs).len(), 90 / 6);
        let fs = FamilyStructure::new(5, 2).unwrap();
        assert_eq!(fhs_failure_orders(&fs).len(), 30);
    }

    #[test]
    fn fhs_oracle_examples() {
        let p = SystemParams::new(4, 3, 2).unwrap();
        assert_eq!(oracle_fhs_mincut(&p, int(2), int(1), 0).unwrap(), int(4));
        let p = SystemParams::new(5, 3, 2).unwrap();
        assert_eq!(oracle_fhs_mincut(&p, int(1), int(1), 0).unwrap(), int(2));
        let p = SystemParams::new(6, 4, 4).unwrap();
        assert_eq!(oracle_fhs_mincut(&p, int(4), int(1), 0).unwrap(), int(11));
        let big = SystemParams::new(9, 3, 4).unwrap();
        assert!(matches!(
            oracle_fhs_mincut(&big, int(1), int(1), 0),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn extra_rounds_never_go_below_the_formula() {
        let p = SystemParams::new(5, 3, 2).unwrap();
        let r = oracle_fhs_mincut_with(&p, int(3), int(1), 2, 7, &Limits::default()).unwrap();
        assert_eq!(r.value, fhs_mincut(&p, int(3), int(1)).unwrap());
    }

    #[test]
    fn policy_oracle() {
        let p = SystemParams::new(4, 3, 2).unwrap();
        let fhs = FhsPolicy::new(4, 2).unwrap();
        let l = Limits::default();
        assert_eq!(
            oracle_policy_mincut(&fhs, &p, int(5), int(1), 0, &l)
                .unwrap()
                .value,
            int(15)
        );
        let r = oracle_policy_mincut(&fhs, &p, int(2), int(1), 4, &l).unwrap();
        assert!(r.value >= fhs_mincut(&p, int(2), int(1)).unwrap());
    }

    #[test]
    fn game_value_matches_family_cut() {
        let p = SystemParams::new(4, 3, 2).unwrap();
        let r = dhs_game_value(&p, int(1), int(1), 4, &Limits::default()).unwrap();
        assert!(r.value >= int(2));
    }

    #[test]
    fn adversary_small() {
        let p = SystemParams::new(4, 2, 2).unwrap();
        let r =
            oracle_bhs_adversarial(&p, ExactScalar::INF, int(1), 4, &Limits::default()).unwrap();
        assert_eq!(r.value, int(3));
    }
}
