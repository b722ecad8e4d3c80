//! Family index permutations, node vectors and the counting functions built on them.
//!
//! A family index permutation lists the family labels of the nodes in the
//! order they fail. `y_i` counts how many earlier failures the `i`-th
//! newcomer can draw on; `z_i` does the same for an arbitrary node vector
//! under arbitrary helper sets.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::model::FamilyStructure;
use crate::scalar::ExactScalar;

/// A reordering of the family index vector of some `(n, d)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct FamilyIndexPermutation {
    pub entries: Vec<i64>,
}

impl FamilyIndexPermutation {
    /// Checks that `entries` is a permutation of the family index vector of `fs`.
    pub fn new(entries: Vec<i64>, fs: &FamilyStructure) -> Result<Self> {
        let mut a = entries.clone();
        let mut b = fs.family_index.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return Err(Error::InvalidPermutation(format!(
                "{entries:?} is not a permutation of {:?}",
                fs.family_index
            )));
        }
        Ok(FamilyIndexPermutation { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// A vector of node indices in `1..=n`, repeats allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct NodeVector {
    pub entries: Vec<usize>,
}

impl NodeVector {
    pub fn new(entries: Vec<usize>, n: usize) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&r| r == 0 || r > n) {
            return Err(Error::ConstraintViolation(format!(
                "node {bad} outside 1..={n}"
            )));
        }
        Ok(NodeVector { entries })
    }

    pub fn is_distinct(&self) -> bool {
        let set: BTreeSet<_> = self.entries.iter().collect();
        set.len() == self.entries.len()
    }
}

/// `y_i` for every position of a family index sequence.
///
/// A `0` entry counts earlier positive entries; a nonzero entry counts earlier
/// entries whose absolute value differs from its own.
pub fn y_vector(pi: &[i64]) -> Vec<usize> {
    (0..pi.len())
        .map(|i| {
            let v = pi[i];
            pi[..i]
                .iter()
                .filter(|&&u| if v == 0 { u > 0 } else { u.abs() != v.abs() })
                .count()
        })
        .collect()
}

/// `z_i(r)`: the number of distinct earlier entries of `r` lying in `D_{r_i}`.
pub fn z_vector(r: &[usize], helper_sets: &[Vec<usize>]) -> Vec<usize> {
    (0..r.len())
        .map(|i| {
            let earlier: BTreeSet<usize> = r[..i].iter().copied().collect();
            helper_sets[r[i] - 1]
                .iter()
                .filter(|a| earlier.contains(a))
                .count()
        })
        .collect()
}

/// The rotating family index permutation.
///
/// The family index vector is written column by column into a table with
/// `n - d` rows and read back row by row.
pub fn rfip(n: usize, d: usize) -> Result<FamilyIndexPermutation> {
    let fs = FamilyStructure::new(n, d)?;
    Ok(rfip_of(&fs))
}

pub fn rfip_of(fs: &FamilyStructure) -> FamilyIndexPermutation {
    let rows = fs.family_size();
    let cols = fs.n.div_ceil(rows);
    let mut entries = Vec::with_capacity(fs.n);
    for row in 0..rows {
        for col in 0..cols {
            if let Some(&v) = fs.family_index.get(col * rows + row) {
                entries.push(v);
            }
        }
    }
    FamilyIndexPermutation { entries }
}

/// `Σ_{i=1..k} (i - 1 - y_i)`.
pub fn y_offset(pi: &FamilyIndexPermutation, k: usize) -> usize {
    y_vector(&pi.entries[..k])
        .iter()
        .enumerate()
        .map(|(i, y)| i - y)
        .sum()
}

/// Additive path costs for the prefix minimization.
pub trait PathCost: Clone + Ord {
    fn zero() -> Self;
    fn plus(&self, other: &Self) -> Self;
}

impl PathCost for ExactScalar {
    fn zero() -> Self {
        ExactScalar::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        *self + *other
    }
}

impl PathCost for i64 {
    fn zero() -> Self {
        0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

impl<A: PathCost, B: PathCost> PathCost for (A, B) {
    fn zero() -> Self {
        (A::zero(), B::zero())
    }
    fn plus(&self, other: &Self) -> Self {
        (self.0.plus(&other.0), self.1.plus(&other.1))
    }
}

/// Label classes of a family index vector, up to relabeling of the
/// interchangeable complete families.
///
/// A prefix of a permutation is summarized by how many entries of each class
/// it has used. The counts of the interchangeable families are kept sorted,
/// which merges prefixes that differ only by a relabeling.
#[derive(Debug, Clone, Copy)]
struct LabelClasses {
    family_size: usize,
    /// Number of interchangeable complete families.
    symmetric: usize,
    /// `n mod (n - d)`; when nonzero family `c` splits into signs and family `0` exists.
    remainder: usize,
}

/// Next label to append to a prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Label {
    /// One of the interchangeable families, identified by its slot in the sorted counts.
    Symmetric(usize),
    PositiveLast,
    NegativeLast,
    Zero,
}

impl LabelClasses {
    fn new(n: usize, d: usize) -> Self {
        let family_size = n - d;
        let c = n / family_size;
        let remainder = n % family_size;
        let symmetric = if remainder == 0 { c } else { c - 1 };
        LabelClasses {
            family_size,
            symmetric,
            remainder,
        }
    }

    /// Initial state: all counts zero. Layout `[sym.., pos_c, neg_c, zero]`, the last
    /// three present only when the remainder is nonzero.
    fn start(&self) -> Vec<u16> {
        vec![0; self.symmetric + if self.remainder == 0 { 0 } else { 3 }]
    }

    /// Every label that can be appended, with the resulting `y` and next state.
    fn moves(&self, state: &[u16]) -> Vec<(Label, usize, Vec<u16>)> {
        let s = self.symmetric;
        let placed: usize = state.iter().map(|&c| c as usize).sum();
        let mut out = Vec::new();
        let mut last_seen: Option<u16> = None;
        for slot in 0..s {
            let v = state[slot];
            if last_seen == Some(v) || v as usize >= self.family_size {
                last_seen = Some(v);
                continue;
            }
            last_seen = Some(v);
            let mut next = state.to_vec();
            next[slot] += 1;
            next[..s].sort_unstable_by(|a, b| b.cmp(a));
            out.push((Label::Symmetric(slot), placed - v as usize, next));
        }
        if self.remainder != 0 {
            let (pc, nc, zc) = (
                state[s] as usize,
                state[s + 1] as usize,
                state[s + 2] as usize,
            );
            let last_family = pc + nc;
            if pc < self.remainder {
                let mut next = state.to_vec();
                next[s] += 1;
                out.push((Label::PositiveLast, placed - last_family, next));
            }
            if nc < self.family_size - self.remainder {
                let mut next = state.to_vec();
                next[s + 1] += 1;
                out.push((Label::NegativeLast, placed - last_family, next));
            }
            if zc < self.remainder {
                let positives = state[..s].iter().map(|&c| c as usize).sum::<usize>() + pc;
                let mut next = state.to_vec();
                next[s + 2] += 1;
                out.push((Label::Zero, positives, next));
            }
        }
        out
    }
}

/// Minimum of `Σ_{i=1..k} cost(y_i(π))` over all family index permutations `π` of `(n, d)`.
///
/// `cost` is indexed by `y` and must cover `0..=d`. The minimization is a
/// shortest path over prefix label counts, so its size is polynomial in `n`
/// for a fixed number of families.
pub fn min_prefix_cost<C: PathCost>(
    n: usize,
    k: usize,
    d: usize,
    cost: &[C],
    limits: &Limits,
) -> Result<C> {
    if k > n {
        return Err(Error::ConstraintViolation(format!("k={k} exceeds n={n}")));
    }
    let classes = LabelClasses::new(n, d);
    let mut memo: HashMap<Vec<u16>, C> = HashMap::new();
    best_from(&classes, &classes.start(), k, cost, &mut memo, limits)
}

fn best_from<C: PathCost>(
    classes: &LabelClasses,
    state: &[u16],
    left: usize,
    cost: &[C],
    memo: &mut HashMap<Vec<u16>, C>,
    limits: &Limits,
) -> Result<C> {
    if left == 0 {
        return Ok(C::zero());
    }
    if let Some(v) = memo.get(state) {
        return Ok(v.clone());
    }
    let mut best: Option<C> = None;
    for (_, y, next) in classes.moves(state) {
        let v = cost[y].plus(&best_from(classes, &next, left - 1, cost, memo, limits)?);
        if best.as_ref().is_none_or(|b| v < *b) {
            best = Some(v);
        }
    }
    let best = best.expect("a permutation prefix can always be extended while k ≤ n");
    if memo.len() as u64 >= limits.max_profiles {
        return Err(Error::SearchSpaceTooLarge {
            what: "permutation prefix states".into(),
            cap: limits.max_profiles,
        });
    }
    memo.insert(state.to_vec(), best.clone());
    Ok(best)
}

/// All distinct `(y_1, …, y_k)` prefixes over the family index permutations of `(n, d)`.
pub fn enumerate_y_profiles(
    n: usize,
    k: usize,
    d: usize,
    limits: &Limits,
) -> Result<BTreeSet<Vec<usize>>> {
    if k > n {
        return Err(Error::ConstraintViolation(format!("k={k} exceeds n={n}")));
    }
    FamilyStructure::new(n, d)?;
    let classes = LabelClasses::new(n, d);
    let mut out = BTreeSet::new();
    let mut visited = 0u64;
    let mut prefix = Vec::with_capacity(k);
    profiles_from(
        &classes,
        &classes.start(),
        k,
        &mut prefix,
        &mut out,
        &mut visited,
        limits,
    )?;
    Ok(out)
}

fn profiles_from(
    classes: &LabelClasses,
    state: &[u16],
    left: usize,
    prefix: &mut Vec<usize>,
    out: &mut BTreeSet<Vec<usize>>,
    visited: &mut u64,
    limits: &Limits,
) -> Result<()> {
    *visited += 1;
    if *visited > limits.max_profiles || out.len() as u64 > limits.max_profiles {
        return Err(Error::SearchSpaceTooLarge {
            what: "y-profile enumeration".into(),
            cap: limits.max_profiles,
        });
    }
    if left == 0 {
        out.insert(prefix.clone());
        return Ok(());
    }
    for (_, y, next) in classes.moves(state) {
        prefix.push(y);
        profiles_from(classes, &next, left - 1, prefix, out, visited, limits)?;
        prefix.pop();
    }
    Ok(())
}

/// Steps of the repair procedure that turns a node vector into one with distinct entries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModifyStep {
    /// Replace a repeat by an unused node of the same family.
    SameFamily,
    /// Move a complete-family repeat to the family's last slot and replace it by an unused complete-family node.
    CompleteSwap,
    /// Move an incomplete-family repeat to the family's last slot and replace it by a node of the last complete family.
    IncompleteToComplete,
    /// Move a complete-family repeat to the family's last slot and replace it by an unused incomplete-family node.
    CompleteToIncomplete,
}

/// Resolves the free choices of [`modify_with`].
///
/// Pairs are 1-based positions `(i, j)` with `i < j`; both methods return an
/// index into the offered slice.
pub trait ModifyChooser {
    fn pick_pair(&mut self, step: ModifyStep, pairs: &[(usize, usize)]) -> usize;
    fn pick_gamma(&mut self, step: ModifyStep, gammas: &[usize]) -> usize;
}

/// Always takes the first (smallest) option.
#[derive(Debug, Clone, Copy, Default)]
pub struct SmallestChoice;

impl ModifyChooser for SmallestChoice {
    fn pick_pair(&mut self, _: ModifyStep, _: &[(usize, usize)]) -> usize {
        0
    }
    fn pick_gamma(&mut self, _: ModifyStep, _: &[usize]) -> usize {
        0
    }
}

/// Replays a fixed sequence of choices; falls back to the smallest option once
/// a scripted value is not on offer.
#[derive(Debug, Clone, Default)]
pub struct ScriptedChoice {
    pub pairs: VecDeque<(usize, usize)>,
    pub gammas: VecDeque<usize>,
}

impl ScriptedChoice {
    pub fn new(pairs: &[(usize, usize)], gammas: &[usize]) -> Self {
        ScriptedChoice {
            pairs: pairs.iter().copied().collect(),
            gammas: gammas.iter().copied().collect(),
        }
    }
}

impl ModifyChooser for ScriptedChoice {
    fn pick_pair(&mut self, _: ModifyStep, pairs: &[(usize, usize)]) -> usize {
        match self
            .pairs
            .front()
            .and_then(|want| pairs.iter().position(|p| p == want))
        {
            Some(i) => {
                self.pairs.pop_front();
                i
            }
            None => 0,
        }
    }
    fn pick_gamma(&mut self, _: ModifyStep, gammas: &[usize]) -> usize {
        match self
            .gammas
            .front()
            .and_then(|want| gammas.iter().position(|g| g == want))
        {
            Some(i) => {
                self.gammas.pop_front();
                i
            }
            None => 0,
        }
    }
}

/// One mutation performed by [`modify_with`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModifyIteration {
    pub step: ModifyStep,
    pub before: Vec<usize>,
    pub after: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModifyRun {
    pub output: Vec<usize>,
    pub iterations: Vec<ModifyIteration>,
}

/// Weighted count of repeated position pairs: 1 per complete-family pair, 2 per incomplete-family pair.
pub fn modify_potential(r: &[usize], fs: &FamilyStructure) -> usize {
    repeated_pairs(r)
        .iter()
        .map(|&(i, _)| if fs.is_complete(r[i - 1]) { 1 } else { 2 })
        .sum()
}

fn repeated_pairs(r: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            if r[i] == r[j] {
                out.push((i + 1, j + 1));
            }
        }
    }
    out
}

/// Turns `r` into a vector of distinct nodes whose `z` values dominate those of `r`,
/// resolving free choices by smallest value.
pub fn modify(r: &NodeVector, fs: &FamilyStructure) -> NodeVector {
    NodeVector {
        entries: modify_with(&r.entries, fs, &mut SmallestChoice).output,
    }
}

/// [`modify`] with injected choices, returning every intermediate vector.
pub fn modify_with(
    r: &[usize],
    fs: &FamilyStructure,
    chooser: &mut dyn ModifyChooser,
) -> ModifyRun {
    let mut cur = r.to_vec();
    let mut iterations = Vec::new();
    loop {
        let before = cur.clone();
        let step = if step_same_family(&mut cur, fs, chooser) {
            ModifyStep::SameFamily
        } else if step_complete_swap(&mut cur, fs, chooser) {
            ModifyStep::CompleteSwap
        } else {
            let pairs = repeated_pairs(&cur);
            if pairs.is_empty() {
                break;
            }
            let complete = pairs
                .iter()
                .filter(|&&(i, _)| fs.is_complete(cur[i - 1]))
                .count();
            if complete == 0 {
                step_swap_and_replace(
                    &mut cur,
                    fs,
                    chooser,
                    ModifyStep::IncompleteToComplete,
                    &pairs,
                );
                ModifyStep::IncompleteToComplete
            } else if complete == pairs.len() {
                step_swap_and_replace(
                    &mut cur,
                    fs,
                    chooser,
                    ModifyStep::CompleteToIncomplete,
                    &pairs,
                );
                ModifyStep::CompleteToIncomplete
            } else {
                unreachable!("complete and incomplete repeats cannot coexist once no unused replacement remains: {cur:?}")
            }
        };
        iterations.push(ModifyIteration {
            step,
            before,
            after: cur.clone(),
        });
    }
    ModifyRun {
        output: cur,
        iterations,
    }
}

fn unused(r: &[usize], candidates: impl IntoIterator<Item = usize>) -> Vec<usize> {
    candidates.into_iter().filter(|g| !r.contains(g)).collect()
}

fn step_same_family(
    r: &mut [usize],
    fs: &FamilyStructure,
    chooser: &mut dyn ModifyChooser,
) -> bool {
    let pairs: Vec<(usize, usize)> = repeated_pairs(r)
        .into_iter()
        .filter(|&(i, _)| !unused(r, fs.members(fs.family_of(r[i - 1]))).is_empty())
        .collect();
    if pairs.is_empty() {
        return false;
    }
    let (i, j) = pairs[chooser.pick_pair(ModifyStep::SameFamily, &pairs)];
    let gammas = unused(r, fs.members(fs.family_of(r[i - 1])));
    r[j - 1] = gammas[chooser.pick_gamma(ModifyStep::SameFamily, &gammas)];
    true
}

fn step_complete_swap(
    r: &mut [usize],
    fs: &FamilyStructure,
    chooser: &mut dyn ModifyChooser,
) -> bool {
    let pairs: Vec<(usize, usize)> = repeated_pairs(r)
        .into_iter()
        .filter(|&(i, _)| fs.is_complete(r[i - 1]))
        .collect();
    let complete_nodes = (1..=fs.n).filter(|&g| fs.is_complete(g));
    if pairs.is_empty() || unused(r, complete_nodes).is_empty() {
        return false;
    }
    step_swap_and_replace(r, fs, chooser, ModifyStep::CompleteSwap, &pairs);
    true
}

/// Swaps the last occurrence of the repeated node with the last entry of its
/// family, then overwrites that last family slot with a replacement node.
fn step_swap_and_replace(
    r: &mut [usize],
    fs: &FamilyStructure,
    chooser: &mut dyn ModifyChooser,
    step: ModifyStep,
    pairs: &[(usize, usize)],
) {
    let (i, _) = pairs[chooser.pick_pair(step, pairs)];
    let h = r[i - 1];
    let q = fs.family_of(h);
    let j1 = r.iter().rposition(|&x| x == h).expect("h occurs");
    let j2 = r
        .iter()
        .rposition(|&x| fs.family_of(x) == q)
        .expect("family occurs");
    r.swap(j1, j2);
    let gammas: Vec<usize> = match step {
        ModifyStep::CompleteSwap => unused(r, (1..=fs.n).filter(|&g| fs.is_complete(g))),
        ModifyStep::IncompleteToComplete => fs.members(fs.c),
        ModifyStep::CompleteToIncomplete => unused(r, fs.members(0)),
        ModifyStep::SameFamily => unreachable!(),
    };
    assert!(
        !gammas.is_empty(),
        "no replacement node available for {step:?} on {r:?}"
    );
    r[j2] = gammas[chooser.pick_gamma(step, &gammas)];
}

/// Family-count test for permutations that minimize `Σ_{i=1..k} (d - y_i)`.
///
/// `l_j` counts the first `k` entries with absolute value `j`. Without an
/// incomplete family all `l_j` must be within one of each other. With one,
/// either `l_0 = n mod (n - d)` and the complete families are balanced and at
/// least `l_0`, or all of `l_0..l_c` are balanced; in both cases the last `0`
/// among the first `k` entries must precede the first negative entry.
pub fn check_mbr_minimizer(pi: &FamilyIndexPermutation, k: usize) -> bool {
    let e = &pi.entries;
    let c = e
        .iter()
        .map(|v| v.unsigned_abs() as usize)
        .max()
        .unwrap_or(0);
    let remainder = e.iter().filter(|&&v| v == 0).count();
    let mut l = vec![0usize; c + 1];
    for v in &e[..k] {
        l[v.unsigned_abs() as usize] += 1;
    }
    let balanced = |ls: &[usize]| match (ls.iter().min(), ls.iter().max()) {
        (Some(lo), Some(hi)) => hi - lo <= 1,
        _ => true,
    };
    if remainder == 0 {
        return balanced(&l[1..]);
    }
    let last_zero = e[..k].iter().rposition(|&v| v == 0).map_or(0, |p| p + 1);
    let first_negative = e[..k].iter().position(|&v| v < 0).map_or(k + 1, |p| p + 1);
    if last_zero >= first_negative {
        return false;
    }
    let saturated = l[0] == remainder && balanced(&l[1..]) && l[1..].iter().all(|&x| x >= l[0]);
    saturated || balanced(&l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build_family_structure;

    #[test]
    fn y_examples() {
        let y = y_vector(&[1, 2, -2, 1, 0, 0, 1, 2]);
        assert_eq!(y[5], 3);
        assert_eq!(y[7], 5);
        assert_eq!(y_vector(&[1, 1])[1], 0);
        assert_eq!(y_vector(&[1, 2, 3, 1, 2, 3]), vec![0, 1, 2, 2, 3, 4]);
    }

    #[test]
    fn z_examples() {
        let mut sets = vec![vec![]; 6];
        sets[2] = vec![1, 4];
        assert_eq!(z_vector(&[1, 2, 1, 3], &sets)[3], 1);
        let fs = build_family_structure(8, 5).unwrap();
        assert_eq!(z_vector(&[1, 4, 7], &fs.helper_sets), vec![0, 1, 2]);
    }

    #[test]
    fn rfip_examples() {
        assert_eq!(rfip(8, 5).unwrap().entries, vec![1, 2, 0, 1, 2, 0, 1, -2]);
        assert_eq!(rfip(20, 10).unwrap().entries, [1, 2].repeat(10));
        let mut want = [1, 0].repeat(10);
        want.extend(std::iter::repeat_n(-1, 40));
        assert_eq!(rfip(60, 10).unwrap().entries, want);
    }

    #[test]
    fn y_offset_examples() {
        assert_eq!(y_offset(&rfip(6, 4).unwrap(), 4), 1);
        let fs = build_family_structure(6, 4).unwrap();
        let pi = FamilyIndexPermutation::new(vec![1, 1, 2, 2, 3, 3], &fs).unwrap();
        assert_eq!(y_offset(&pi, 4), 2);
        assert_eq!(y_offset(&pi, 1), 0);
    }

    #[test]
    fn permutation_validation() {
        let fs = build_family_structure(5, 2).unwrap();
        assert!(FamilyIndexPermutation::new(vec![0, 1, -1, 1, 0], &fs).is_ok());
        assert!(FamilyIndexPermutation::new(vec![0, 1, 1, 1, 0], &fs).is_err());
    }

    #[test]
    fn profile_examples() {
        let l = Limits::default();
        let p = enumerate_y_profiles(4, 3, 2, &l).unwrap();
        assert!(p.contains(&vec![0, 1, 1]) && p.contains(&vec![0, 0, 2]));
        assert_eq!(
            enumerate_y_profiles(7, 1, 3, &l).unwrap(),
            BTreeSet::from([vec![0]])
        );
        let p = enumerate_y_profiles(6, 4, 4, &l).unwrap();
        assert!(p.contains(&vec![0, 1, 2, 2]) && p.contains(&vec![0, 0, 2, 3]));
        assert!(!p.contains(&vec![0, 1, 2, 3]));
    }

    #[test]
    fn profile_cap_is_enforced() {
        let tiny = Limits {
            max_profiles: 3,
            ..Limits::default()
        };
        assert!(matches!(
            enumerate_y_profiles(6, 4, 4, &tiny),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
        assert!(matches!(
            min_prefix_cost(
                12,
                11,
                9,
                &[0i64, 1, 2, 3, 4, 5, 6, 7, 8, 9],
                &Limits {
                    max_profiles: 2,
                    ..Limits::default()
                }
            ),
            Err(Error::SearchSpaceTooLarge { .. })
        ));
    }

    #[test]
    fn modify_worked_example() {
        let fs = build_family_structure(8, 5).unwrap();
        let mut script = ScriptedChoice::new(&[(3, 4), (7, 8), (2, 3), (6, 7)], &[3, 8, 5, 6]);
        let run = modify_with(&[1, 2, 2, 2, 4, 7, 7, 7], &fs, &mut script);
        assert_eq!(run.output, vec![1, 2, 3, 5, 4, 7, 8, 6]);
        let steps: Vec<_> = run.iterations.iter().map(|it| it.step).collect();
        assert_eq!(
            steps,
            vec![
                ModifyStep::SameFamily,
                ModifyStep::SameFamily,
                ModifyStep::CompleteSwap,
                ModifyStep::IncompleteToComplete
            ]
        );
        assert_eq!(run.iterations[1].after, vec![1, 2, 2, 3, 4, 7, 7, 8]);
        assert_eq!(run.iterations[2].after, vec![1, 2, 3, 5, 4, 7, 7, 8]);
    }

    #[test]
    fn modify_smallest_choices() {
        let fs = build_family_structure(8, 5).unwrap();
        let out = modify(&NodeVector::new(vec![7, 7], 8).unwrap(), &fs);
        assert_eq!(out.entries, vec![7, 8]);
        let same = modify(&NodeVector::new(vec![3, 1, 8], 8).unwrap(), &fs);
        assert_eq!(same.entries, vec![3, 1, 8]);
        let out = modify(
            &NodeVector::new(vec![1, 2, 2, 2, 4, 7, 7, 7], 8).unwrap(),
            &fs,
        );
        assert!(out.is_distinct());
    }

    #[test]
    fn minimizer_examples() {
        assert!(check_mbr_minimizer(&rfip(6, 4).unwrap(), 4));
        let fs = build_family_structure(6, 4).unwrap();
        let pi = FamilyIndexPermutation::new(vec![1, 1, 2, 2, 3, 3], &fs).unwrap();
        assert!(!check_mbr_minimizer(&pi, 4));
        assert!(check_mbr_minimizer(&rfip(8, 5).unwrap(), 5));
    }
}
