//! Exact storage/bandwidth tradeoff curves, scheme comparison and k-sweeps.

use std::io::Write;
use std::ops::RangeInclusive;

use num_traits::Zero;
use serde::Serialize;

use crate::envelope::Side;
use crate::error::{Error, Result};
use crate::formulas::{
    corner_points, family_plus_mbr_point, fhs_mbr_point, fhs_msr_point_with, invert_unit,
    unit_tangent, OperatingPoint, Scheme,
};
use crate::limits::Limits;
use crate::model::SystemParams;
use crate::scalar::{ExactScalar, Q};

/// Corner points of a scheme's feasible region.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TradeoffCurve {
    pub scheme: Scheme,
    pub params: SystemParams,
    pub file_size: ExactScalar,
    /// From the minimum-storage end to the minimum-bandwidth end.
    pub corners: Vec<OperatingPoint>,
}

pub fn curve(scheme: Scheme, p: &SystemParams, file_size: ExactScalar) -> Result<TradeoffCurve> {
    curve_with(scheme, p, file_size, &Limits::default())
}

pub fn curve_with(
    scheme: Scheme,
    p: &SystemParams,
    file_size: ExactScalar,
    limits: &Limits,
) -> Result<TradeoffCurve> {
    Ok(TradeoffCurve {
        scheme,
        params: *p,
        file_size,
        corners: corner_points(scheme, p, file_size, limits)?,
    })
}

/// Blind-selection minimum-bandwidth point: `β = M / Σ_{i<k} (d−i)^+`.
pub fn bhs_mbr_point(p: &SystemParams, file_size: ExactScalar) -> OperatingPoint {
    let sum: usize = (0..p.k).map(|i| p.d.saturating_sub(i)).sum();
    let beta = file_size / ExactScalar::int(sum as i64);
    OperatingPoint::new(beta.times(p.d as i64), beta, p.d, file_size)
}

/// Blind-selection minimum-storage point: `α = M / min(d,k)` with the
/// smallest `β` keeping every contributing summand at `α`.
pub fn bhs_msr_point(p: &SystemParams, file_size: ExactScalar) -> OperatingPoint {
    let m = p.k.min(p.d);
    let alpha = file_size / ExactScalar::int(m as i64);
    let beta = alpha / ExactScalar::int((p.d - m + 1) as i64);
    OperatingPoint::new(alpha, beta, p.d, file_size)
}

/// Minimum-bandwidth point of any scheme, from its closed form.
pub fn mbr_point(
    scheme: Scheme,
    p: &SystemParams,
    file_size: ExactScalar,
) -> Result<OperatingPoint> {
    match scheme {
        Scheme::Bhs => Ok(bhs_mbr_point(p, file_size)),
        Scheme::Fhs => fhs_mbr_point(p, file_size),
        Scheme::FamilyPlus => family_plus_mbr_point(p.n, p.k, p.d, file_size),
    }
}

/// Minimum-storage point of any scheme. Family-plus has no closed form and
/// uses the first corner of its curve.
pub fn msr_point(
    scheme: Scheme,
    p: &SystemParams,
    file_size: ExactScalar,
    limits: &Limits,
) -> Result<OperatingPoint> {
    match scheme {
        Scheme::Bhs => Ok(bhs_msr_point(p, file_size)),
        Scheme::Fhs => fhs_msr_point_with(p, file_size, limits),
        Scheme::FamilyPlus => Ok(corner_points(scheme, p, file_size, limits)?[0]),
    }
}

pub fn min_alpha_given_beta(
    scheme: Scheme,
    p: &SystemParams,
    beta: ExactScalar,
    file_size: ExactScalar,
) -> Result<ExactScalar> {
    min_alpha_given_beta_with(scheme, p, beta, file_size, &Limits::default())
}

/// Least `α` with `mincut(α, β) ≥ M`.
///
/// For finite `β > 0` the min-cut equals `β·h(α/β)` with `h` the unit curve,
/// so the answer is `β` times the least `t` with `h(t) ≥ M/β`.
pub fn min_alpha_given_beta_with(
    scheme: Scheme,
    p: &SystemParams,
    beta: ExactScalar,
    file_size: ExactScalar,
    limits: &Limits,
) -> Result<ExactScalar> {
    let infeasible = || Error::InfeasibleBeta {
        beta: beta.to_string(),
    };
    if file_size.is_zero() {
        return Ok(ExactScalar::zero());
    }
    let m = file_size.finite().ok_or_else(infeasible)?;
    match beta {
        ExactScalar::Infinite => {
            // every summand with a positive weight is just α
            let slope = unit_tangent(scheme, p, Q::zero(), Side::Right, limits)?.slope;
            if slope == 0 {
                return Err(infeasible());
            }
            Ok(ExactScalar::Finite(m / Q::from_integer(slope as i128)))
        }
        ExactScalar::Finite(b) if b > Q::zero() => {
            let t = invert_unit(scheme, p, m / b, limits)?.ok_or_else(infeasible)?;
            Ok(ExactScalar::Finite(t * b))
        }
        ExactScalar::Finite(_) => Err(infeasible()),
    }
}

/// Minimum-bandwidth points of the three schemes side by side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MbrComparison {
    pub params: SystemParams,
    pub bhs: OperatingPoint,
    pub fhs: OperatingPoint,
    pub family_plus: OperatingPoint,
    /// `γ_fhs / γ_bhs`.
    pub fhs_to_bhs: ExactScalar,
    /// `γ_family_plus / γ_bhs`.
    pub family_plus_to_bhs: ExactScalar,
    /// `γ_family_plus / γ_fhs`.
    pub family_plus_to_fhs: ExactScalar,
}

pub fn compare_at_mbr(p: &SystemParams, file_size: ExactScalar) -> Result<MbrComparison> {
    let bhs = bhs_mbr_point(p, file_size);
    let fhs = fhs_mbr_point(p, file_size)?;
    let family_plus = family_plus_mbr_point(p.n, p.k, p.d, file_size)?;
    Ok(MbrComparison {
        params: *p,
        bhs,
        fhs,
        family_plus,
        fhs_to_bhs: fhs.gamma / bhs.gamma,
        family_plus_to_bhs: family_plus.gamma / bhs.gamma,
        family_plus_to_fhs: family_plus.gamma / fhs.gamma,
    })
}

/// One `k` of a minimum-bandwidth sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub k: usize,
    pub bhs: OperatingPoint,
    pub fhs: OperatingPoint,
    pub family_plus: OperatingPoint,
    /// Blind selection cannot improve past `k = d`.
    pub bhs_saturated: bool,
}

pub fn k_sweep_mbr(
    n: usize,
    d: usize,
    file_size: ExactScalar,
    ks: RangeInclusive<usize>,
) -> Result<Vec<SweepRow>> {
    ks.map(|k| {
        let p = SystemParams::new(n, k, d)?;
        Ok(SweepRow {
            k,
            bhs: bhs_mbr_point(&p, file_size),
            fhs: fhs_mbr_point(&p, file_size)?,
            family_plus: family_plus_mbr_point(n, k, d, file_size)?,
            bhs_saturated: k > d,
        })
    })
    .collect()
}

/// A flat record for CSV output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub k: usize,
    pub scheme: Scheme,
    pub alpha: ExactScalar,
    pub beta: ExactScalar,
    pub gamma: ExactScalar,
    /// `γ / γ_bhs` at the same `k`, when a blind reference exists.
    pub ratio_to_bhs: Option<ExactScalar>,
}

impl Row {
    fn of(
        k: usize,
        scheme: Scheme,
        pt: &OperatingPoint,
        reference: Option<&OperatingPoint>,
    ) -> Self {
        Row {
            k,
            scheme,
            alpha: pt.alpha,
            beta: pt.beta,
            gamma: pt.gamma,
            ratio_to_bhs: reference.map(|r| pt.gamma / r.gamma),
        }
    }
}

impl TradeoffCurve {
    pub fn rows(&self) -> Vec<Row> {
        self.corners
            .iter()
            .map(|c| Row::of(self.params.k, self.scheme, c, None))
            .collect()
    }

    /// Two whitespace-separated decimal columns, `alpha gamma`, one corner per line.
    pub fn gnuplot(&self) -> String {
        self.corners
            .iter()
            .map(|c| format!("{:.12} {:.12}\n", c.alpha.to_f64(), c.gamma.to_f64()))
            .collect()
    }
}

impl MbrComparison {
    pub fn rows(&self) -> Vec<Row> {
        let k = self.params.k;
        vec![
            Row::of(k, Scheme::Bhs, &self.bhs, Some(&self.bhs)),
            Row::of(k, Scheme::Fhs, &self.fhs, Some(&self.bhs)),
            Row::of(k, Scheme::FamilyPlus, &self.family_plus, Some(&self.bhs)),
        ]
    }
}

pub fn sweep_rows(rows: &[SweepRow]) -> Vec<Row> {
    rows.iter()
        .flat_map(|r| {
            [
                Row::of(r.k, Scheme::Bhs, &r.bhs, Some(&r.bhs)),
                Row::of(r.k, Scheme::Fhs, &r.fhs, Some(&r.bhs)),
                Row::of(r.k, Scheme::FamilyPlus, &r.family_plus, Some(&r.bhs)),
            ]
        })
        .collect()
}

/// Writes rows as CSV with header `k,scheme,alpha,beta,gamma,ratio_to_bhs`.
pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "scheme", "alpha", "beta", "gamma", "ratio_to_bhs"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.k.to_string(),
            r.scheme.name().to_string(),
            r.alpha.to_string(),
            r.beta.to_string(),
            r.gamma.to_string(),
            r.ratio_to_bhs.map(|x| x.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}
