//! Whether helper selection can beat blind selection for given `(n, k, d)`,
//! and which optimality guarantees are known.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ifg::ConverseCondition;
use crate::model::{find_optimal_partition, GroupPartition, SystemParams};
use crate::scalar::ExactScalar;

/// Which family of parameters shows that helper selection strictly helps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AchievabilityCase {
    /// `d ≥ 2` and `k > ⌈n/(n−d)⌉`.
    A,
    /// `d = 1`, `k > 2` and `n` even.
    B,
    /// `d = 1`, `k > 3` and `n` odd.
    C,
    None,
}

/// Strongest optimality statement available for a parameter triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum KnownOptimum {
    /// Blind selection is already as good as any dynamic scheme.
    Bhs,
    /// The family scheme is absolutely optimal.
    Fhs,
    /// The family scheme is optimal at the minimum-bandwidth point.
    FhsMbr,
    /// Family-plus on a suitable partition is optimal at the minimum-bandwidth point.
    FamilyPlusMbr,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub params: SystemParams,
    #[serde(rename = "bhs_optimal")]
    pub bhs_absolutely_optimal: bool,
    pub condition: Option<ConverseCondition>,
    pub helper_selection_strictly_helps: bool,
    #[serde(rename = "case")]
    pub achievability_case: AchievabilityCase,
    #[serde(rename = "fhs_optimal")]
    pub fhs_absolutely_optimal: bool,
    pub fhs_mbr_optimal: bool,
    #[serde(rename = "family_plus_partition")]
    pub family_plus_mbr_optimal: Option<GroupPartition>,
    pub corollary3_applies: bool,
    pub optimality: KnownOptimum,
}

/// The blind-selection condition that holds for `p`, if any.
pub fn converse_condition(p: &SystemParams) -> Option<ConverseCondition> {
    if p.d == 1 && p.k == 3 && p.n % 2 == 1 {
        Some(ConverseCondition::OddTriple)
    } else if p.k <= p.family_count() {
        Some(ConverseCondition::SmallK)
    } else {
        None
    }
}

pub fn classify(p: &SystemParams) -> Classification {
    let condition = converse_condition(p);
    let achievability_case = if p.d >= 2 && p.k > p.family_count() {
        AchievabilityCase::A
    } else if p.d == 1 && p.k > 2 && p.n.is_multiple_of(2) {
        AchievabilityCase::B
    } else if p.d == 1 && p.k > 3 && p.n % 2 == 1 {
        AchievabilityCase::C
    } else {
        AchievabilityCase::None
    };
    let fhs_absolutely_optimal = p.d.is_multiple_of(2) && p.n == p.d + 2 && p.k == p.n / 2 + 1;
    let last = p.k == p.n - 1;
    let fhs_mbr_optimal = last && p.n.is_multiple_of(p.n - p.d);
    let family_plus_mbr_optimal = if last {
        find_optimal_partition(p.n, p.d).ok().flatten()
    } else {
        None
    };
    let optimality = if condition.is_some() {
        KnownOptimum::Bhs
    } else if fhs_absolutely_optimal {
        KnownOptimum::Fhs
    } else if fhs_mbr_optimal {
        KnownOptimum::FhsMbr
    } else if family_plus_mbr_optimal.is_some() {
        KnownOptimum::FamilyPlusMbr
    } else {
        KnownOptimum::Unknown
    };
    Classification {
        params: *p,
        bhs_absolutely_optimal: condition.is_some(),
        condition,
        helper_selection_strictly_helps: condition.is_none(),
        achievability_case,
        fhs_absolutely_optimal,
        fhs_mbr_optimal,
        family_plus_mbr_optimal,
        corollary3_applies: (p.n, p.k, p.d) == (4, 3, 2),
        optimality,
    }
}

/// `ndβ/2`, the largest min-cut any dynamic scheme reaches at `α = dβ` when `k = n − 1`.
pub fn mbr_upper_bound_k_nm1(p: &SystemParams, beta: ExactScalar) -> Result<ExactScalar> {
    if p.k != p.n - 1 {
        return Err(Error::PreconditionViolation(format!(
            "needs k = n−1, got (n,k,d)=({},{},{})",
            p.n, p.k, p.d
        )));
    }
    Ok(beta.times((p.n * p.d) as i64) / ExactScalar::int(2))
}
