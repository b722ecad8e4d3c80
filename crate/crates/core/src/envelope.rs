//! Breakpoints of concave piecewise-linear functions known only through tangent queries.
//!
//! Every min-cut expression here has the form `β·h(α/β)` where `h` is a
//! minimum of finitely many concave piecewise-linear functions of
//! `t = α/β`. A tangent query returns the linear piece active immediately to
//! one side of `t`. Intersecting the pieces at the two ends of an interval and
//! probing the intersection either confirms a single breakpoint or reveals
//! a new piece, so the recursion visits each piece a bounded number of times.

use num_traits::Zero;

use crate::error::Result;
use crate::scalar::Q;

/// Which one-sided piece a tangent query returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `value(t) = slope·t + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Line {
    pub slope: i64,
    pub intercept: Q,
}

impl Line {
    pub fn at(&self, t: Q) -> Q {
        Q::from_integer(self.slope as i128) * t + self.intercept
    }

    /// Builds the line through `(t, value)` with the given slope.
    pub fn through(t: Q, value: Q, slope: i64) -> Self {
        Line {
            slope,
            intercept: value - Q::from_integer(slope as i128) * t,
        }
    }
}

/// Contribution of one summand `min(u, t)` to the tangent at `t`, as `(value, slope)`.
pub fn summand_tangent(u: i64, t: Q, side: Side) -> (Q, i64) {
    let uq = Q::from_integer(u as i128);
    let value = if uq < t { uq } else { t };
    let rising = match side {
        Side::Right => uq > t,
        Side::Left => uq >= t,
    };
    (value, rising as i64)
}

/// Breakpoints of `h` in `(0, hi]`, increasing.
///
/// `h` must be concave, nondecreasing, and constant for `t ≥ hi`.
pub fn breakpoints(tangent: &mut dyn FnMut(Q, Side) -> Result<Line>, hi: Q) -> Result<Vec<Q>> {
    let mut out = Vec::new();
    let left_end = tangent(Q::zero(), Side::Right)?;
    let right_end = tangent(hi, Side::Left)?;
    search(tangent, Q::zero(), hi, left_end, right_end, &mut out)?;
    if right_end != tangent(hi, Side::Right)? {
        out.push(hi);
    }
    Ok(out)
}

fn search(
    tangent: &mut dyn FnMut(Q, Side) -> Result<Line>,
    lo: Q,
    hi: Q,
    l: Line,
    r: Line,
    out: &mut Vec<Q>,
) -> Result<()> {
    if l == r {
        return Ok(());
    }
    assert!(
        l.slope > r.slope,
        "tangents {l:?} and {r:?} violate concavity on [{lo}, {hi}]"
    );
    let t = (r.intercept - l.intercept) / Q::from_integer((l.slope - r.slope) as i128);
    assert!(
        lo < t && t < hi,
        "tangent intersection {t} outside ({lo}, {hi})"
    );
    let lt = tangent(t, Side::Left)?;
    let rt = tangent(t, Side::Right)?;
    if lt == l && rt == r {
        out.push(t);
        return Ok(());
    }
    search(tangent, lo, t, l, lt, out)?;
    if lt != rt {
        out.push(t);
    }
    search(tangent, t, hi, rt, r, out)
}
