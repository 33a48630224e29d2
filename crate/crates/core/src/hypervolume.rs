//! Exact hypervolume and hypervolume contributions.
//!
//! The recursion slices along the last objective: with points sorted by that
//! objective, each point adds a slab whose cross-section is its exclusive
//! (m−1)-dimensional hypervolume against the points before it. Exclusive volumes
//! are computed WFG-style as box volume minus the hypervolume of the limit set.
//! Two dimensions use a sweep line; one dimension is a single interval.
//!
//! All comparisons inside the recursion are exact; no tolerance is applied.

use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::Rng;

use crate::error::{Error, Result};
use crate::math;
use crate::objective::{dominates_unchecked, strictly_below, weakly_dominates, ReferencePoint, SolutionSet};
use crate::par;

/// Lebesgue measure of the region dominated by `set` and bounded by `reference`.
///
/// Every member must strictly dominate `reference` in every coordinate. Members
/// dominated by other members are discarded before the recursion.
pub fn hypervolume(set: &SolutionSet, reference: &ReferencePoint) -> Result<f64> {
    reference.check_dominated_by(set)?;
    let dim = set.dim();
    let pts = nondominated_rows(set.as_flat(), dim);
    Ok(hv_rows(pts, dim, reference.coords()))
}

/// Hypervolume contribution of `s` to `set`.
///
/// When `s` is a member (exact coordinate equality) this is
/// `HV(S) − HV(S \ {s})`; otherwise it is `HV(S ∪ {s}) − HV(S)`. Both reduce to the
/// exclusive volume of `s` against the other points, which is what is computed.
pub fn hvc_exact(s: &[f64], set: &SolutionSet, reference: &ReferencePoint) -> Result<f64> {
    reference.check_dominated_by(set)?;
    if s.len() != set.dim() {
        return Err(Error::DimensionMismatch { expected: set.dim(), found: s.len() });
    }
    if !strictly_below(s, reference.coords()) {
        return Err(Error::NotDominatingReference { index: set.len() });
    }
    Ok(exclusive_volume(s, set.iter().filter(|q| *q != s), reference.coords()))
}

/// Contribution of every member, aligned with the set order.
pub fn hvc_all(set: &SolutionSet, reference: &ReferencePoint) -> Result<Vec<f64>> {
    reference.check_dominated_by(set)?;
    let r = reference.coords();
    Ok(par::map_range(set.len(), |i| {
        let s = set.point(i);
        exclusive_volume(s, set.iter().filter(|q| *q != s), r)
    }))
}

fn exclusive_volume<'a>(s: &[f64], others: impl Iterator<Item = &'a [f64]>, r: &[f64]) -> f64 {
    let dim = s.len();
    let mut limit = Vec::new();
    for q in others {
        if weakly_dominates(q, s) {
            return 0.0;
        }
        limit.extend(q.iter().zip(s).map(|(a, b)| a.max(*b)));
    }
    let limit = if dim > 2 { nondominated_rows(&limit, dim) } else { limit };
    let excl = box_volume(s, r) - hv_rows(limit, dim, r);
    excl.max(0.0)
}

#[inline]
fn box_volume(p: &[f64], r: &[f64]) -> f64 {
    p.iter().zip(r).map(|(a, b)| b - a).product()
}

/// Rows not weakly dominated by an earlier kept row or dominated by any row.
fn nondominated_rows(flat: &[f64], dim: usize) -> Vec<f64> {
    let rows: Vec<&[f64]> = flat.chunks_exact(dim).collect();
    let mut out = Vec::with_capacity(flat.len());
    'outer: for (i, p) in rows.iter().enumerate() {
        for (j, q) in rows.iter().enumerate() {
            if i == j {
                continue;
            }
            if dominates_unchecked(q, p) || (j < i && q == p) {
                continue 'outer;
            }
        }
        out.extend_from_slice(p);
    }
    out
}

/// Hypervolume of the rows in `flat` using their first `dim` coordinates. Dominated
/// rows are allowed; they only cost time.
fn hv_rows(flat: Vec<f64>, dim: usize, r: &[f64]) -> f64 {
    let n = flat.len() / dim;
    if n == 0 {
        return 0.0;
    }
    if dim == 1 {
        let best = flat.iter().copied().fold(f64::INFINITY, f64::min);
        return r[0] - best;
    }
    if n == 1 {
        return box_volume(&flat, &r[..dim]);
    }
    if dim == 2 {
        return hv2(&flat, r);
    }

    let sorted = sort_rows_by(&flat, dim, dim - 1);
    let last = dim - 1;
    let mut volume = 0.0;
    for i in 0..n {
        let p = &sorted[i * dim..(i + 1) * dim];
        let head = &p[..last];
        let mut limit = Vec::with_capacity(i * last);
        let mut covered = false;
        for q in sorted[..i * dim].chunks_exact(dim) {
            let q = &q[..last];
            if weakly_dominates(q, head) {
                covered = true;
                break;
            }
            limit.extend(q.iter().zip(head).map(|(a, b)| a.max(*b)));
        }
        if covered {
            continue;
        }
        let limit = if last > 2 { nondominated_rows(&limit, last) } else { limit };
        let excl = box_volume(head, &r[..last]) - hv_rows(limit, last, r);
        volume += (r[last] - p[last]) * excl;
    }
    volume
}

fn sort_rows_by(flat: &[f64], dim: usize, key: usize) -> Vec<f64> {
    let rows: Vec<&[f64]> = flat.chunks_exact(dim).collect();
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| lex_from(rows[a], rows[b], key));
    let mut out = Vec::with_capacity(flat.len());
    for i in order {
        out.extend_from_slice(rows[i]);
    }
    out
}

/// Compares on coordinate `key` first, then the remaining coordinates in order.
fn lex_from(a: &[f64], b: &[f64], key: usize) -> Ordering {
    a[key]
        .total_cmp(&b[key])
        .then_with(|| a.iter().zip(b).fold(Ordering::Equal, |acc, (x, y)| acc.then(x.total_cmp(y))))
}

/// Sweep line over points sorted by the first objective.
fn hv2(flat: &[f64], r: &[f64]) -> f64 {
    let sorted = sort_rows_by(flat, 2, 0);
    let mut volume = 0.0;
    let mut ceiling = r[1];
    for p in sorted.chunks_exact(2) {
        if p[1] < ceiling {
            volume += (r[0] - p[0]) * (ceiling - p[1]);
            ceiling = p[1];
        }
    }
    volume
}

/// Monte-Carlo hypervolume estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
}

/// Uniform sampling of the box `[ideal(S), r]`; a sample counts when some member
/// weakly dominates it. Intended as an independent oracle for tests.
pub fn mc_hypervolume<R: Rng + ?Sized>(
    set: &SolutionSet,
    reference: &ReferencePoint,
    samples: usize,
    rng: &mut R,
) -> Result<McEstimate> {
    if samples < 1000 {
        return Err(Error::contract("Monte-Carlo estimation needs at least 1000 samples"));
    }
    reference.check_dominated_by(set)?;
    if set.is_empty() {
        return Ok(McEstimate { estimate: 0.0, stderr: 0.0 });
    }
    let lo = set.ideal();
    let r = reference.coords();
    let volume = box_volume(&lo, r);
    let mut x = alloc::vec![0.0; set.dim()];
    let mut hits = 0u64;
    for _ in 0..samples {
        for ((xj, l), h) in x.iter_mut().zip(&lo).zip(r) {
            let u: f64 = rng.random();
            *xj = l + u * (h - l);
        }
        if set.iter().any(|s| weakly_dominates(s, &x)) {
            hits += 1;
        }
    }
    let frac = hits as f64 / samples as f64;
    Ok(McEstimate {
        estimate: volume * frac,
        stderr: volume * math::sqrt(frac * (1.0 - frac) / samples as f64),
    })
}
