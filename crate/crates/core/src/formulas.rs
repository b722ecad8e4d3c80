//! Closed-form and exactly minimized min-cut values and operating points.
//!
//! Every evaluator has the shape `Σ min(u_i β, α)` for some list of
//! integer weights `u_i`, minimized over whatever freedom the scheme leaves
//! to the failure pattern.

use num_traits::Zero;
use serde::Serialize;

use crate::envelope::{self, summand_tangent, Line, Side};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::model::{build_family_plus_partition, FamilyStructure, GroupPartition, SystemParams};
use crate::perms::{enumerate_y_profiles, min_prefix_cost, rfip_of, y_vector, PathCost};
use crate::scalar::{ExactScalar, Q};

/// A storage/bandwidth pair together with the file size it protects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OperatingPoint {
    pub alpha: ExactScalar,
    pub beta: ExactScalar,
    /// Total repair bandwidth `d·β`.
    pub gamma: ExactScalar,
    pub file_size: ExactScalar,
}

impl OperatingPoint {
    pub fn new(alpha: ExactScalar, beta: ExactScalar, d: usize, file_size: ExactScalar) -> Self {
        OperatingPoint {
            alpha,
            beta,
            gamma: beta.times(d as i64),
            file_size,
        }
    }
}

/// Helper selection schemes with an exact min-cut expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Blind helper selection.
    Bhs,
    /// Family helper selection.
    Fhs,
    /// Family helper selection run separately on groups of `2d` nodes.
    FamilyPlus,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Bhs => "bhs",
            Scheme::Fhs => "fhs",
            Scheme::FamilyPlus => "family-plus",
        }
    }
}

/// `min(u β, α)` for each `u` in `0..=d`.
fn summand_table(d: usize, alpha: ExactScalar, beta: ExactScalar) -> Vec<ExactScalar> {
    (0..=d)
        .rev()
        .map(|u| beta.times(u as i64).min(alpha))
        .collect()
}

/// Blind selection: `Σ_{i=0}^{k-1} min((d-i)^+ β, α)`.
pub fn bhs_mincut(p: &SystemParams, alpha: ExactScalar, beta: ExactScalar) -> ExactScalar {
    (0..p.k)
        .map(|i| beta.times(p.d.saturating_sub(i) as i64).min(alpha))
        .sum()
}

/// Family selection: `min_π Σ_{i=1}^{k} min((d - y_i(π)) β, α)`.
pub fn fhs_mincut(p: &SystemParams, alpha: ExactScalar, beta: ExactScalar) -> Result<ExactScalar> {
    fhs_mincut_with(p, alpha, beta, &Limits::default())
}

pub fn fhs_mincut_with(
    p: &SystemParams,
    alpha: ExactScalar,
    beta: ExactScalar,
    limits: &Limits,
) -> Result<ExactScalar> {
    min_prefix_cost(p.n, p.k, p.d, &summand_table(p.d, alpha, beta), limits)
}

/// [`fhs_mincut`] evaluated by listing every distinct y-profile.
pub fn fhs_mincut_by_profiles(
    p: &SystemParams,
    alpha: ExactScalar,
    beta: ExactScalar,
    limits: &Limits,
) -> Result<ExactScalar> {
    let table = summand_table(p.d, alpha, beta);
    let profiles = enumerate_y_profiles(p.n, p.k, p.d, limits)?;
    Ok(profiles
        .iter()
        .map(|ys| ys.iter().map(|&y| table[y]).sum())
        .min()
        .expect("at least one profile"))
}

/// Stationary lower bound: `min_{r ∈ [n]^k} Σ min((d - z_i(r)) β, α)`.
///
/// All helper sets must have the same size `d`. Repeated entries in `r` are allowed.
pub fn shs_lower_bound(
    helper_sets: &[Vec<usize>],
    k: usize,
    alpha: ExactScalar,
    beta: ExactScalar,
    limits: &Limits,
) -> Result<ExactScalar> {
    let n = helper_sets.len();
    let d = helper_sets.first().map_or(0, |s| s.len());
    for (i, s) in helper_sets.iter().enumerate() {
        if s.len() != d || s.contains(&(i + 1)) || s.iter().any(|&h| h == 0 || h > n) {
            return Err(Error::InvalidHelperSet(format!(
                "D_{} = {s:?} with n={n}, d={d}",
                i + 1
            )));
        }
    }
    let size = (n as u64).checked_pow(k as u32);
    if size.is_none_or(|s| s > limits.max_vectors) {
        return Err(Error::SearchSpaceTooLarge {
            what: format!("{n}^{k} node vectors"),
            cap: limits.max_vectors,
        });
    }
    let table = summand_table(d, alpha, beta);
    let mut best = ExactScalar::INF;
    let mut seen = vec![0u32; n + 1];
    let mut r = Vec::with_capacity(k);
    shs_search(
        helper_sets,
        k,
        &table,
        &mut r,
        &mut seen,
        ExactScalar::zero(),
        &mut best,
    );
    Ok(best)
}

fn shs_search(
    sets: &[Vec<usize>],
    k: usize,
    table: &[ExactScalar],
    r: &mut Vec<usize>,
    seen: &mut [u32],
    acc: ExactScalar,
    best: &mut ExactScalar,
) {
    if r.len() == k {
        *best = (*best).min(acc);
        return;
    }
    for node in 1..=sets.len() {
        let z = sets[node - 1].iter().filter(|&&a| seen[a] > 0).count();
        r.push(node);
        seen[node] += 1;
        shs_search(sets, k, table, r, seen, acc + table[z], best);
        seen[node] -= 1;
        r.pop();
    }
}

/// `Σ_{i=1}^{k} (d - y_i)` along the rotating family index permutation.
pub fn fhs_mbr_sum(p: &SystemParams) -> Result<usize> {
    let fs = FamilyStructure::new(p.n, p.d)?;
    let pi = rfip_of(&fs);
    Ok(y_vector(&pi.entries[..p.k]).iter().map(|y| p.d - y).sum())
}

/// Minimum-bandwidth point of the family scheme: `α = γ = dβ`.
pub fn fhs_mbr_point(p: &SystemParams, file_size: ExactScalar) -> Result<OperatingPoint> {
    let beta = file_size / ExactScalar::int(fhs_mbr_sum(p)? as i64);
    Ok(OperatingPoint::new(
        beta.times(p.d as i64),
        beta,
        p.d,
        file_size,
    ))
}

/// Minimum-storage point of the family scheme.
///
/// `α = M / min(d, k)`. With `d ≥ k` the bandwidth is `M / (k (d - k + 1))`;
/// otherwise it is found exactly as the first breakpoint of the tradeoff curve.
pub fn fhs_msr_point(p: &SystemParams, file_size: ExactScalar) -> Result<OperatingPoint> {
    fhs_msr_point_with(p, file_size, &Limits::default())
}

pub fn fhs_msr_point_with(
    p: &SystemParams,
    file_size: ExactScalar,
    limits: &Limits,
) -> Result<OperatingPoint> {
    if p.d >= p.k {
        let alpha = file_size / ExactScalar::int(p.k as i64);
        let beta = file_size / ExactScalar::int((p.k * (p.d - p.k + 1)) as i64);
        return Ok(OperatingPoint::new(alpha, beta, p.d, file_size));
    }
    let corners = corner_points(Scheme::Fhs, p, file_size, limits)?;
    Ok(corners[0])
}

/// Family-plus min-cut: the cheapest split `k = Σ k_b` over the groups, each
/// group contributing its own family min-cut.
pub fn family_plus_mincut(
    parts: &GroupPartition,
    k: usize,
    alpha: ExactScalar,
    beta: ExactScalar,
) -> Result<ExactScalar> {
    family_plus_mincut_with(parts, k, alpha, beta, &Limits::default())
}

pub fn family_plus_mincut_with(
    parts: &GroupPartition,
    k: usize,
    alpha: ExactScalar,
    beta: ExactScalar,
    limits: &Limits,
) -> Result<ExactScalar> {
    grouped_min(parts, k, &summand_table(parts.d, alpha, beta), limits)
}

/// Minimizes `Σ_b min_prefix_cost(n_b, k_b, d)` over allocations with a knapsack over the groups.
fn grouped_min<C: PathCost>(
    parts: &GroupPartition,
    k: usize,
    table: &[C],
    limits: &Limits,
) -> Result<C> {
    if k > parts.n() {
        return Err(Error::ConstraintViolation(format!(
            "k={k} exceeds the {} grouped nodes",
            parts.n()
        )));
    }
    for &nb in &parts.parts {
        if nb <= parts.d {
            return Err(Error::ConstraintViolation(format!(
                "group of {nb} nodes cannot supply d={} helpers",
                parts.d
            )));
        }
    }
    // best[j] = cheapest way to place j collector nodes in the groups seen so far
    let mut best: Vec<Option<C>> = vec![None; k + 1];
    best[0] = Some(C::zero());
    let mut cache: Vec<(usize, Vec<C>)> = Vec::new();
    for &nb in &parts.parts {
        let per_group = match cache.iter().find(|(size, _)| *size == nb) {
            Some((_, v)) => v.clone(),
            None => {
                let v = (0..=nb.min(k))
                    .map(|kb| min_prefix_cost(nb, kb, parts.d, table, limits))
                    .collect::<Result<Vec<C>>>()?;
                cache.push((nb, v.clone()));
                v
            }
        };
        let mut next: Vec<Option<C>> = vec![None; k + 1];
        for (j, b) in best.iter().enumerate() {
            let Some(b) = b else { continue };
            for (kb, cost) in per_group.iter().enumerate() {
                if j + kb > k {
                    break;
                }
                let v = b.plus(cost);
                if next[j + kb].as_ref().is_none_or(|x| v < *x) {
                    next[j + kb] = Some(v);
                }
            }
        }
        best = next;
    }
    Ok(best[k].clone().expect("k fits in the groups"))
}

/// Minimum-bandwidth point of the family-plus scheme on the canonical partition.
///
/// Regular groups of `2d` nodes contribute `d²` per `2d` collector nodes and
/// `d - i + ⌊i/2⌋` for the `i`-th node of a partial group; the remaining group,
/// when present, is filled first.
pub fn family_plus_mbr_point(
    n: usize,
    k: usize,
    d: usize,
    file_size: ExactScalar,
) -> Result<OperatingPoint> {
    let p = SystemParams::new(n, k, d)?;
    if n < 2 * d {
        return fhs_mbr_point(&p, file_size);
    }
    let sum = family_plus_mbr_sum(&p);
    let beta = file_size / ExactScalar::int(sum as i64);
    Ok(OperatingPoint::new(
        beta.times(d as i64),
        beta,
        d,
        file_size,
    ))
}

/// Coefficient of `β` in the family-plus min-cut at `α = dβ`, for `n ≥ 2d`.
pub fn family_plus_mbr_sum(p: &SystemParams) -> usize {
    let (k, d) = (p.k, p.d);
    let partial = |len: usize| -> usize { (0..len).map(|i| d + i / 2 - i).sum() };
    let rem = p.n % (2 * d);
    let (head, n_l) = if rem != 0 {
        (partial(k.min(2 * d - 1)), 2 * d + rem)
    } else {
        (0, 0)
    };
    let rest = k.saturating_sub(n_l);
    head + d * d * (rest / (2 * d)) + partial(rest % (2 * d))
}

/// Low-`k` shape: `Σ_{i=2}^{k-1} min((d-i)β, α) + 2 min(dβ, α)`,
/// valid when `d ≥ 2` and `k = ⌈n/(n-d)⌉ + 1`.
pub fn corollary_low_b(
    p: &SystemParams,
    alpha: ExactScalar,
    beta: ExactScalar,
) -> Result<ExactScalar> {
    if p.d < 2 || p.k != p.family_count() + 1 {
        return Err(Error::PreconditionViolation(format!(
            "needs d ≥ 2 and k = ⌈n/(n−d)⌉+1 = {}, got (n,k,d)=({},{},{})",
            p.family_count() + 1,
            p.n,
            p.k,
            p.d
        )));
    }
    let middle: ExactScalar = (2..p.k)
        .map(|i| beta.times(p.d.saturating_sub(i) as i64).min(alpha))
        .sum();
    Ok(middle + beta.times(p.d as i64).min(alpha).times(2))
}

/// `nα/2`, the family min-cut at `α = dβ` when `k = n - 1` and `(n - d) | n`.
pub fn prop13_mbr_value(p: &SystemParams, alpha: ExactScalar) -> Result<ExactScalar> {
    if p.k != p.n - 1 || !p.n.is_multiple_of(p.n - p.d) {
        return Err(Error::PreconditionViolation(format!(
            "needs k = n−1 and n mod (n−d) = 0, got (n,k,d)=({},{},{})",
            p.n, p.k, p.d
        )));
    }
    Ok(alpha.times(p.n as i64) / ExactScalar::int(2))
}

/// Scheme min-cut at arbitrary `(α, β)`.
pub fn scheme_mincut(
    scheme: Scheme,
    p: &SystemParams,
    alpha: ExactScalar,
    beta: ExactScalar,
    limits: &Limits,
) -> Result<ExactScalar> {
    match scheme {
        Scheme::Bhs => Ok(bhs_mincut(p, alpha, beta)),
        Scheme::Fhs => fhs_mincut_with(p, alpha, beta, limits),
        Scheme::FamilyPlus => family_plus_mincut_with(
            &build_family_plus_partition(p.n, p.d)?,
            p.k,
            alpha,
            beta,
            limits,
        ),
    }
}

/// One-sided tangent of `h(t) = mincut(α = t, β = 1)`.
pub(crate) fn unit_tangent(
    scheme: Scheme,
    p: &SystemParams,
    t: Q,
    side: Side,
    limits: &Limits,
) -> Result<Line> {
    // Ties on value are broken towards the piece that stays lowest on the requested side.
    let key = |u: i64| -> (ExactScalar, i64) {
        let (v, s) = summand_tangent(u, t, side);
        (
            ExactScalar::Finite(v),
            if side == Side::Right { s } else { -s },
        )
    };
    let table: Vec<(ExactScalar, i64)> = (0..=p.d as i64).rev().map(key).collect();
    let (value, k) = match scheme {
        Scheme::Bhs => (0..p.k)
            .map(|i| key(p.d.saturating_sub(i) as i64))
            .fold(<(ExactScalar, i64)>::zero(), |a, b| a.plus(&b)),
        Scheme::Fhs => min_prefix_cost(p.n, p.k, p.d, &table, limits)?,
        Scheme::FamilyPlus => {
            grouped_min(&build_family_plus_partition(p.n, p.d)?, p.k, &table, limits)?
        }
    };
    let slope = if side == Side::Right { k } else { -k };
    Ok(Line::through(
        t,
        value.finite().expect("finite tangent"),
        slope,
    ))
}

/// Corner points of the feasible `(α, β)` region from the minimum-storage end
/// to the minimum-bandwidth end.
pub(crate) fn corner_points(
    scheme: Scheme,
    p: &SystemParams,
    file_size: ExactScalar,
    limits: &Limits,
) -> Result<Vec<OperatingPoint>> {
    let hi = Q::from_integer(p.d as i128);
    let mut tangent = |t: Q, side: Side| unit_tangent(scheme, p, t, side, limits);
    let ts = envelope::breakpoints(&mut tangent, hi)?;
    ts.into_iter()
        .map(|t| {
            let h = unit_tangent(scheme, p, t, Side::Right, limits)?.at(t);
            let beta = file_size / ExactScalar::Finite(h);
            let alpha = beta * ExactScalar::Finite(t);
            Ok(OperatingPoint::new(alpha, beta, p.d, file_size))
        })
        .collect()
}

/// Least `t ≥ 0` with `h(t) ≥ target`, or `None` if `h` never gets there.
pub(crate) fn invert_unit(
    scheme: Scheme,
    p: &SystemParams,
    target: Q,
    limits: &Limits,
) -> Result<Option<Q>> {
    if target <= Q::zero() {
        return Ok(Some(Q::zero()));
    }
    let hi = Q::from_integer(p.d as i128);
    let mut tangent = |t: Q, side: Side| unit_tangent(scheme, p, t, side, limits);
    let ts = envelope::breakpoints(&mut tangent, hi)?;
    let mut prev = (Q::zero(), Q::zero());
    for t in ts {
        let h = unit_tangent(scheme, p, t, Side::Right, limits)?.at(t);
        if h >= target {
            let (t0, h0) = prev;
            return Ok(Some(t0 + (t - t0) * (target - h0) / (h - h0)));
        }
        prev = (t, h);
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, k: usize, d: usize) -> SystemParams {
        SystemParams::new(n, k, d).unwrap()
    }
    fn int(v: i64) -> ExactScalar {
        ExactScalar::int(v)
    }
    fn frac(p: i64, q: i64) -> ExactScalar {
        ExactScalar::ratio(p, q)
    }

    #[test]
    fn bhs_examples() {
        assert_eq!(
            bhs_mincut(&params(20, 10, 10), ExactScalar::INF, int(1)),
            int(55)
        );
        assert_eq!(bhs_mincut(&params(6, 4, 4), int(3), int(0)), int(0));
        assert_eq!(bhs_mincut(&params(5, 3, 2), int(1), int(1)), int(2));
    }

    #[test]
    fn fhs_examples() {
        let p = params(5, 3, 2);
        for (a, b) in [(1, 1), (3, 1), (1, 4), (5, 2)] {
            let want = int(b).times(2).min(int(a)).times(2);
            assert_eq!(fhs_mincut(&p, int(a), int(b)).unwrap(), want);
        }
        assert_eq!(
            fhs_mincut(&params(4, 3, 2), int(1), int(1)).unwrap(),
            int(2)
        );
        assert_eq!(
            fhs_mincut(&params(6, 4, 4), int(4), int(1)).unwrap(),
            int(11)
        );
    }

    #[test]
    fn shs_examples() {
        let l = Limits::default();
        let fs = FamilyStructure::new(4, 2).unwrap();
        assert_eq!(
            shs_lower_bound(&fs.helper_sets, 3, int(2), int(1), &l).unwrap(),
            int(4)
        );
        assert_eq!(
            shs_lower_bound(&fs.helper_sets, 1, int(5), int(1), &l).unwrap(),
            int(2)
        );
        let degenerate = vec![vec![2, 3], vec![1, 3], vec![1, 2], vec![1, 2]];
        assert_eq!(
            shs_lower_bound(&degenerate, 3, ExactScalar::INF, int(1), &l).unwrap(),
            int(3)
        );
        let bad = vec![vec![1, 2], vec![1, 3], vec![1, 2], vec![1, 2]];
        assert!(matches!(
            shs_lower_bound(&bad, 3, int(1), int(1), &l),
            Err(Error::InvalidHelperSet(_))
        ));
    }

    #[test]
    fn mbr_points() {
        let one = int(1);
        assert_eq!(fhs_mbr_sum(&params(20, 10, 10)).unwrap(), 75);
        assert_eq!(
            fhs_mbr_point(&params(20, 10, 10), one).unwrap().gamma,
            frac(2, 15)
        );
        let pt = fhs_mbr_point(&params(6, 4, 4), one).unwrap();
        assert_eq!((pt.alpha, pt.gamma), (frac(4, 11), frac(4, 11)));
        let pt = fhs_mbr_point(&params(5, 3, 2), one).unwrap();
        assert_eq!((pt.alpha, pt.gamma), (frac(1, 2), frac(1, 2)));
    }

    #[test]
    fn msr_points() {
        let one = int(1);
        let pt = fhs_msr_point(&params(10, 7, 9), one).unwrap();
        assert_eq!((pt.alpha, pt.beta), (frac(1, 7), frac(1, 21)));
        let pt = fhs_msr_point(&params(5, 3, 2), one).unwrap();
        assert_eq!((pt.alpha, pt.beta), (frac(1, 2), frac(1, 4)));
        let pt = fhs_msr_point(&params(7, 1, 3), int(2)).unwrap();
        assert_eq!((pt.alpha, pt.beta), (int(2), frac(2, 3)));
    }

    #[test]
    fn family_plus_examples() {
        let single = GroupPartition {
            parts: vec![7],
            d: 3,
        };
        let p = params(7, 4, 3);
        assert_eq!(
            family_plus_mincut(&single, 4, int(2), int(1)).unwrap(),
            fhs_mincut(&p, int(2), int(1)).unwrap()
        );
        for n in [4, 8] {
            let parts = build_family_plus_partition(n, 1).unwrap();
            for (a, b) in [(1, 1), (1, 3), (5, 2)] {
                let v = family_plus_mincut(&parts, 3, int(a), int(b)).unwrap();
                assert!(v >= int(b).min(int(a)).times(2));
            }
        }
        // a single 4-node group with d = 1 can hold all three collector nodes
        let wide = GroupPartition {
            parts: vec![4, 4],
            d: 1,
        };
        assert_eq!(
            family_plus_mincut(&wide, 3, int(1), int(1)).unwrap(),
            int(1)
        );
        let three = GroupPartition {
            parts: vec![20, 20, 20],
            d: 10,
        };
        assert_eq!(
            family_plus_mincut(&three, 40, int(10), int(1)).unwrap(),
            int(200)
        );
    }

    #[test]
    fn family_plus_mbr_examples() {
        assert_eq!(
            family_plus_mbr_point(60, 40, 10, int(1)).unwrap().gamma,
            frac(1, 20)
        );
        assert_eq!(
            family_plus_mbr_point(5, 3, 3, int(1)).unwrap(),
            fhs_mbr_point(&params(5, 3, 3), int(1)).unwrap()
        );
        let pt = family_plus_mbr_point(9, 8, 2, int(1)).unwrap();
        assert_eq!(pt.beta, frac(1, 8));
        let parts = build_family_plus_partition(9, 2).unwrap();
        assert_eq!(
            family_plus_mincut(&parts, 8, int(2), int(1)).unwrap(),
            int(8)
        );
    }

    #[test]
    fn low_k_shape() {
        let p = params(6, 4, 4);
        assert_eq!(corollary_low_b(&p, int(4), int(1)).unwrap(), int(11));
        assert_eq!(
            corollary_low_b(&params(4, 3, 2), int(1), int(1)).unwrap(),
            int(2)
        );
        assert!(matches!(
            corollary_low_b(&params(6, 3, 4), int(1), int(1)),
            Err(Error::PreconditionViolation(_))
        ));
    }

    #[test]
    fn k_equals_n_minus_one_shape() {
        assert_eq!(prop13_mbr_value(&params(6, 5, 3), int(3)).unwrap(), int(9));
        assert_eq!(
            fhs_mincut(&params(6, 5, 3), int(3), int(1)).unwrap(),
            int(9)
        );
        assert_eq!(prop13_mbr_value(&params(4, 3, 2), int(2)).unwrap(), int(4));
        assert_eq!(prop13_mbr_value(&params(2, 1, 1), int(1)).unwrap(), int(1));
        assert!(prop13_mbr_value(&params(5, 4, 2), int(2)).is_err());
    }
}
