//! System parameters, family structures and group partitions.
//!
//! Nodes are numbered from 1. A family structure splits the `n` nodes into
//! complete families of `n - d` nodes plus an optional incomplete family
//! holding the `n mod (n - d)` leftovers. Newcomers in a complete family ask
//! every node outside their own family for help; newcomers in the incomplete
//! family ask nodes `1..=d`.

use std::collections::BTreeSet;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A validated `(n, k, d)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SystemParams {
    pub n: usize,
    pub k: usize,
    pub d: usize,
}

impl SystemParams {
    pub fn new(n: usize, k: usize, d: usize) -> Result<Self> {
        validate_params(n as i64, k as i64, d as i64)
    }

    /// `⌈n / (n - d)⌉`, the number of families including an incomplete one.
    pub fn family_count(&self) -> usize {
        self.n.div_ceil(self.n - self.d)
    }
}

/// Checks `2 ≤ n`, `1 ≤ k ≤ n-1` and `1 ≤ d ≤ n-1`.
pub fn validate_params(n: i64, k: i64, d: i64) -> Result<SystemParams> {
    if n < 2 {
        return Err(Error::ConstraintViolation(format!("2 ≤ n (got n={n})")));
    }
    if k < 1 || k > n - 1 {
        return Err(Error::ConstraintViolation(format!(
            "1 ≤ k ≤ n−1 (got k={k}, n={n})"
        )));
    }
    if d < 1 || d > n - 1 {
        return Err(Error::ConstraintViolation(format!(
            "1 ≤ d ≤ n−1 (got d={d}, n={n})"
        )));
    }
    Ok(SystemParams {
        n: n as usize,
        k: k as usize,
        d: d as usize,
    })
}

fn validate_nd(n: usize, d: usize) -> Result<()> {
    if n < 2 || d < 1 || d > n - 1 {
        return Err(Error::ConstraintViolation(format!(
            "1 ≤ d ≤ n−1 with n ≥ 2 (got n={n}, d={d})"
        )));
    }
    Ok(())
}

/// Family labels and helper sets for one `(n, d)` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyStructure {
    pub n: usize,
    pub d: usize,
    /// Index of the last complete family, `⌊n / (n - d)⌋`.
    pub c: usize,
    /// Signed family label per node; `family_index[i - 1]` belongs to node `i`.
    pub family_index: Vec<i64>,
    /// Sorted helper set per node; `helper_sets[i - 1]` is `D_i`.
    pub helper_sets: Vec<Vec<usize>>,
}

impl FamilyStructure {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        build_family_structure(n, d)
    }

    /// Family size `n - d`.
    pub fn family_size(&self) -> usize {
        self.n - self.d
    }

    /// Size of the incomplete family, `n mod (n - d)`.
    pub fn remainder(&self) -> usize {
        self.n % (self.n - self.d)
    }

    pub fn has_incomplete_family(&self) -> bool {
        self.remainder() != 0
    }

    /// Unsigned family of a node: `1..=c` for complete families, `0` otherwise.
    pub fn family_of(&self, node: usize) -> usize {
        self.family_index[node - 1].unsigned_abs() as usize
    }

    pub fn is_complete(&self, node: usize) -> bool {
        self.family_of(node) != 0
    }

    /// Nodes of family `f` in increasing order.
    pub fn members(&self, f: usize) -> Vec<usize> {
        (1..=self.n).filter(|&i| self.family_of(i) == f).collect()
    }

    pub fn helpers(&self, node: usize) -> &[usize] {
        &self.helper_sets[node - 1]
    }
}

/// Builds the family index vector and the helper sets for `(n, d)`.
pub fn build_family_structure(n: usize, d: usize) -> Result<FamilyStructure> {
    validate_nd(n, d)?;
    let size = n - d;
    let c = n / size;
    let r = n % size;
    let mut family_index: Vec<i64> = Vec::with_capacity(n);
    for j in 1..c {
        family_index.extend(std::iter::repeat_n(j as i64, size));
    }
    family_index.extend(std::iter::repeat_n(c as i64, if r == 0 { size } else { r }));
    if r != 0 {
        family_index.extend(std::iter::repeat_n(-(c as i64), size - r));
        family_index.extend(std::iter::repeat_n(0, r));
    }
    debug_assert_eq!(family_index.len(), n);

    let helper_sets = (0..n)
        .map(|i| {
            let f = family_index[i].abs();
            if f == 0 {
                (1..=d).collect()
            } else {
                (0..n)
                    .filter(|&j| family_index[j].abs() != f)
                    .map(|j| j + 1)
                    .collect()
            }
        })
        .collect();
    Ok(FamilyStructure {
        n,
        d,
        c,
        family_index,
        helper_sets,
    })
}

impl Serialize for FamilyStructure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Helpers<'a>(&'a [Vec<usize>]);
        impl Serialize for Helpers<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (i, set) in self.0.iter().enumerate() {
                    m.serialize_entry(&(i + 1).to_string(), set)?;
                }
                m.end()
            }
        }
        let mut st = s.serialize_struct("FamilyStructure", 4)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("family_index", &self.family_index)?;
        st.serialize_field("helper_sets", &Helpers(&self.helper_sets))?;
        st.end()
    }
}

/// Disjoint node groups, each running its own family scheme with the shared `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GroupPartition {
    pub parts: Vec<usize>,
    pub d: usize,
}

impl GroupPartition {
    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// Node ranges of each group, 1-based and contiguous.
    pub fn ranges(&self) -> Vec<std::ops::RangeInclusive<usize>> {
        let mut start = 1;
        self.parts
            .iter()
            .map(|&p| {
                let r = start..=start + p - 1;
                start += p;
                r
            })
            .collect()
    }
}

/// Groups of `2d` nodes with one larger remaining group absorbing `n mod 2d`.
///
/// Returns the single group `[n]` when `n < 2d`.
pub fn build_family_plus_partition(n: usize, d: usize) -> Result<GroupPartition> {
    validate_nd(n, d)?;
    let g = 2 * d;
    let q = n / g;
    let rem = n % g;
    let parts = if q == 0 {
        vec![n]
    } else if rem == 0 {
        vec![g; q]
    } else {
        let mut v = vec![g; q - 1];
        v.push(g + rem);
        v
    };
    Ok(GroupPartition { parts, d })
}

/// Finds a partition of `n` whose every part `n_b` satisfies `n_b mod (n_b - d) = 0`.
///
/// Part sizes are drawn from `{d + m : m | d}`. Among partitions with the
/// fewest parts, the one whose descending part list is lexicographically
/// largest is returned.
pub fn find_optimal_partition(n: usize, d: usize) -> Result<Option<GroupPartition>> {
    validate_nd(n, d)?;
    let sizes: BTreeSet<usize> = (1..=d)
        .filter(|m| d.is_multiple_of(*m))
        .map(|m| d + m)
        .filter(|&s| s <= n)
        .collect();
    // fewest[s] = minimum number of parts summing to s
    let mut fewest: Vec<Option<usize>> = vec![None; n + 1];
    fewest[0] = Some(0);
    for s in 1..=n {
        fewest[s] = sizes
            .iter()
            .filter(|&&p| p <= s)
            .filter_map(|&p| fewest[s - p].map(|c| c + 1))
            .min();
    }
    let Some(mut count) = fewest[n] else {
        return Ok(None);
    };
    let mut parts = Vec::with_capacity(count);
    let mut left = n;
    while left > 0 {
        let p = sizes
            .iter()
            .rev()
            .copied()
            .find(|&p| p <= left && fewest[left - p] == Some(count - 1))
            .expect("reachable remainder");
        parts.push(p);
        left -= p;
        count -= 1;
    }
    Ok(Some(GroupPartition { parts, d }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(validate_params(6, 4, 4).is_ok());
        assert!(validate_params(2, 1, 1).is_ok());
        let e = validate_params(5, 5, 2).unwrap_err();
        assert!(matches!(e, Error::ConstraintViolation(ref m) if m.contains("k ≤ n−1")));
        assert!(validate_params(1, 1, 1).is_err());
        assert!(validate_params(5, 2, 5).is_err());
        assert!(validate_params(5, 0, 2).is_err());
    }

    #[test]
    fn family_structure_8_5() {
        let fs = build_family_structure(8, 5).unwrap();
        assert_eq!(fs.family_index, vec![1, 1, 1, 2, 2, -2, 0, 0]);
        assert_eq!(fs.helpers(4), &[1, 2, 3, 7, 8]);
        assert_eq!(fs.helpers(7), &[1, 2, 3, 4, 5]);
        assert_eq!(fs.c, 2);
    }

    #[test]
    fn family_structure_without_incomplete_family() {
        let fs = build_family_structure(6, 4).unwrap();
        assert_eq!(fs.family_index, vec![1, 1, 2, 2, 3, 3]);
        assert!(!fs.has_incomplete_family());
    }

    #[test]
    fn family_structure_5_2() {
        let fs = build_family_structure(5, 2).unwrap();
        assert_eq!(fs.family_index, vec![1, 1, -1, 0, 0]);
        assert_eq!(fs.helpers(4), &[1, 2]);
        assert_eq!(fs.helpers(5), &[1, 2]);
        assert_eq!(fs.helpers(1), &[4, 5]);
    }

    #[test]
    fn family_structure_json() {
        let fs = build_family_structure(3, 1).unwrap();
        let v = serde_json::to_value(&fs).unwrap();
        assert_eq!(v["family_index"], serde_json::json!([1, -1, 0]));
        assert_eq!(v["helper_sets"]["3"], serde_json::json!([1]));
    }

    #[test]
    fn family_plus_partitions() {
        assert_eq!(build_family_plus_partition(8, 2).unwrap().parts, vec![4, 4]);
        assert_eq!(build_family_plus_partition(9, 2).unwrap().parts, vec![4, 5]);
        assert_eq!(
            build_family_plus_partition(60, 10).unwrap().parts,
            vec![20, 20, 20]
        );
        assert_eq!(build_family_plus_partition(5, 3).unwrap().parts, vec![5]);
        assert_eq!(
            build_family_plus_partition(11, 2).unwrap().parts,
            vec![4, 7]
        );
    }

    #[test]
    fn optimal_partitions() {
        assert_eq!(
            find_optimal_partition(19, 4).unwrap().unwrap().parts,
            vec![8, 6, 5]
        );
        assert_eq!(
            find_optimal_partition(6, 3).unwrap().unwrap().parts,
            vec![6]
        );
        assert_eq!(find_optimal_partition(7, 4).unwrap(), None);
    }
}
