//! The line-based R2-HVC hypervolume-contribution approximator.
//!
//! For a candidate `s`, every direction `λ` defines a line segment starting at `s`
//! that ends where it leaves the exclusive region of `s`: either at the box of the
//! reference point ([`g_mtch`]) or at the dominated region of another solution
//! ([`g_star_2tch`]). The approximation is the mean of the segment lengths raised
//! to the power `m`.
//!
//! Zero direction components follow the limit `λ_j → 0⁺`: inside [`g_star_2tch`],
//! `t/0` is `+∞` for `t > 0` and `−∞` for `t ≤ 0`; inside [`g_mtch`], `t/0 = +∞`.

use alloc::vec::Vec;

use crate::directions::DirectionSet;
use crate::error::{Error, Result};
use crate::math;
use crate::objective::{strictly_below, ReferencePoint, SolutionSet};
use crate::par;

/// `max_j (other_j − s_j) / λ_j` (minimization).
#[inline]
pub fn g_star_2tch(other: &[f64], lambda: &[f64], s: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for ((o, l), x) in other.iter().zip(lambda).zip(s) {
        let t = o - x;
        let v = if *l == 0.0 {
            if t > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        } else {
            t / l
        };
        if v > best {
            best = v;
        }
    }
    best
}

/// `max_j (s_j − other_j) / λ_j`, the maximization form of [`g_star_2tch`].
#[cfg_attr(not(test), allow(dead_code))]
#[inline]
pub(crate) fn g_star_2tch_max(other: &[f64], lambda: &[f64], s: &[f64]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for ((o, l), x) in other.iter().zip(lambda).zip(s) {
        let t = x - o;
        let v = if *l == 0.0 {
            if t > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            }
        } else {
            t / l
        };
        if v > best {
            best = v;
        }
    }
    best
}

/// `min_j |s_j − r_j| / λ_j`.
#[inline]
pub fn g_mtch(reference: &[f64], lambda: &[f64], s: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for ((r, l), x) in reference.iter().zip(lambda).zip(s) {
        if *l == 0.0 {
            continue;
        }
        let v = math::abs(x - r) / l;
        if v < best {
            best = v;
        }
    }
    best
}

/// Segment length along `lambda` from `s`, truncated by `others` and the reference box.
#[inline]
fn segment_length<'a>(
    s: &[f64],
    others: impl Iterator<Item = &'a [f64]>,
    lambda: &[f64],
    reference: &[f64],
) -> f64 {
    let mut len = g_mtch(reference, lambda, s);
    for q in others {
        let g = g_star_2tch(q, lambda, s);
        if g < len {
            len = g;
        }
    }
    len
}

fn check_inputs(set: &SolutionSet, dirs: &DirectionSet, reference: &ReferencePoint) -> Result<()> {
    if dirs.is_empty() {
        return Err(Error::contract("direction set is empty"));
    }
    if dirs.dim() != set.dim() {
        return Err(Error::DimensionMismatch { expected: set.dim(), found: dirs.dim() });
    }
    if reference.dim() != set.dim() {
        return Err(Error::DimensionMismatch { expected: set.dim(), found: reference.dim() });
    }
    Ok(())
}

/// R2-HVC value of `s` against `set` (members equal to `s` are excluded).
///
/// `s` must strictly dominate the reference point and must not be dominated by a
/// member of `set`; the value is undefined in that case.
pub fn r2hvc(s: &[f64], set: &SolutionSet, dirs: &DirectionSet, reference: &ReferencePoint) -> Result<f64> {
    check_inputs(set, dirs, reference)?;
    if s.len() != set.dim() {
        return Err(Error::DimensionMismatch { expected: set.dim(), found: s.len() });
    }
    if !strictly_below(s, reference.coords()) {
        return Err(Error::NotDominatingReference { index: set.len() });
    }
    let m = s.len();
    let r = reference.coords();
    let mut total = 0.0;
    for lambda in dirs.iter() {
        let len = segment_length(s, set.iter().filter(|q| *q != s), lambda, r);
        total += math::powi(len, m);
    }
    Ok(total / dirs.len() as f64)
}

/// R2-HVC of every member of `set` against the rest of the set.
pub fn r2hvc_all(set: &SolutionSet, dirs: &DirectionSet, reference: &ReferencePoint) -> Result<Vec<f64>> {
    let lm = LengthMatrix::build(set, dirs, reference)?;
    Ok(lm.values())
}

/// One cached direction column.
#[derive(Debug, Clone, PartialEq)]
struct Column {
    lambda: Vec<f64>,
    lengths: Vec<f64>,
    powers: Vec<f64>,
}

/// Per-(solution, direction) segment lengths for a fixed solution set and
/// reference point, with their `m`-th powers and per-solution sums.
///
/// Row sums are always the left-to-right sum of the powers in column order; a
/// dropped column triggers a full recomputation so they never drift.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthMatrix {
    set: SolutionSet,
    reference: Vec<f64>,
    columns: Vec<Column>,
    row_sums: Vec<f64>,
}

impl LengthMatrix {
    /// Builds the cache for every direction in `dirs`. Cost `O(N²·K·m)`.
    pub fn build(set: &SolutionSet, dirs: &DirectionSet, reference: &ReferencePoint) -> Result<Self> {
        check_inputs(set, dirs, reference)?;
        reference.check_dominated_by(set)?;
        let mut lm = LengthMatrix {
            set: set.clone(),
            reference: reference.coords().to_vec(),
            columns: Vec::with_capacity(dirs.len() + 1),
            row_sums: alloc::vec![0.0; set.len()],
        };
        for lambda in dirs.iter() {
            lm.push_column(lambda);
        }
        Ok(lm)
    }

    fn compute_column(&self, lambda: &[f64]) -> Column {
        let set = &self.set;
        let m = set.dim();
        let r = &self.reference;
        let lengths = par::map_range(set.len(), |i| {
            let others = set.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q);
            segment_length(set.point(i), others, lambda, r)
        });
        let powers = lengths.iter().map(|&l| math::powi(l, m)).collect();
        Column { lambda: lambda.to_vec(), lengths, powers }
    }

    fn push_column(&mut self, lambda: &[f64]) {
        let column = self.compute_column(lambda);
        for (s, c) in self.row_sums.iter_mut().zip(&column.powers) {
            *s += c;
        }
        self.columns.push(column);
    }

    /// Appends one direction column and adds its powers to the row sums. Cost `O(N²·m)`.
    pub fn append_direction(&mut self, lambda: &[f64]) -> Result<()> {
        if lambda.len() != self.set.dim() {
            return Err(Error::DimensionMismatch { expected: self.set.dim(), found: lambda.len() });
        }
        self.push_column(lambda);
        Ok(())
    }

    /// Removes column `k`; row sums are recomputed from the remaining columns.
    pub fn drop_direction(&mut self, k: usize) -> Result<Vec<f64>> {
        if k >= self.columns.len() {
            return Err(Error::Index { index: k, len: self.columns.len() });
        }
        let removed = self.columns.remove(k);
        self.recompute_row_sums();
        Ok(removed.lambda)
    }

    fn recompute_row_sums(&mut self) {
        for (i, s) in self.row_sums.iter_mut().enumerate() {
            *s = self.columns.iter().fold(0.0, |acc, c| acc + c.powers[i]);
        }
    }

    /// Number of solutions `N`.
    pub fn rows(&self) -> usize {
        self.set.len()
    }

    /// Number of directions `K`.
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn length(&self, i: usize, k: usize) -> f64 {
        self.columns[k].lengths[i]
    }

    pub fn power(&self, i: usize, k: usize) -> f64 {
        self.columns[k].powers[i]
    }

    pub fn row_sums(&self) -> &[f64] {
        &self.row_sums
    }

    pub fn direction(&self, k: usize) -> &[f64] {
        &self.columns[k].lambda
    }

    pub fn set(&self) -> &SolutionSet {
        &self.set
    }

    /// Current directions as a flat row-major buffer.
    pub fn directions_flat(&self) -> Vec<f64> {
        self.columns.iter().flat_map(|c| c.lambda.iter().copied()).collect()
    }

    /// R2-HVC of every solution with all current directions.
    pub fn values(&self) -> Vec<f64> {
        let k = self.cols() as f64;
        self.row_sums.iter().map(|s| s / k).collect()
    }

    /// R2-HVC of every solution with column `k` left out: `(row_sum − c[·][k]) / (K − 1)`.
    pub fn leave_one_out_values(&self, k: usize) -> Result<Vec<f64>> {
        let mut out = alloc::vec![0.0; self.rows()];
        self.leave_one_out_into(k, &mut out)?;
        Ok(out)
    }

    /// Buffer-reusing form of [`LengthMatrix::leave_one_out_values`].
    pub fn leave_one_out_into(&self, k: usize, out: &mut [f64]) -> Result<()> {
        let cols = self.cols();
        if k >= cols {
            return Err(Error::Index { index: k, len: cols });
        }
        if cols < 2 {
            return Err(Error::contract("leave-one-out needs at least two directions"));
        }
        let denom = (cols - 1) as f64;
        let powers = &self.columns[k].powers;
        for ((o, s), c) in out.iter_mut().zip(&self.row_sums).zip(powers) {
            *o = (s - c) / denom;
        }
        Ok(())
    }
}
