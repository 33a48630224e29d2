//! Objective-space geometry: points, Pareto dominance, solution sets, reference
//! points and random samplers for triangular and inverted-triangular fronts.
//!
//! Every public set is in minimization orientation.

use alloc::format;
use alloc::vec::Vec;
use core::slice::ChunksExact;

use rand::Rng;

use crate::error::{Error, Result};
use crate::math;

/// Distinctness threshold (max-norm) used by the front samplers.
pub const DISTINCT_TOLERANCE: f64 = 1e-12;

/// A point in an m-dimensional objective space (m ≥ 2, all coordinates finite).
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectivePoint(Vec<f64>);

impl ObjectivePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_coords(&coords)?;
        Ok(ObjectivePoint(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for ObjectivePoint {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

fn check_coords(coords: &[f64]) -> Result<()> {
    if coords.len() < 2 {
        return Err(Error::contract(format!(
            "objective vectors need at least 2 coordinates, got {}",
            coords.len()
        )));
    }
    if let Some(j) = coords.iter().position(|c| !c.is_finite()) {
        return Err(Error::contract(format!("coordinate {j} is not finite")));
    }
    Ok(())
}

/// True iff `a` Pareto-dominates `b` (minimization).
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    Ok(dominates_unchecked(a, b))
}

#[inline]
pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// `a_j <= b_j` for every coordinate.
#[inline]
pub(crate) fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// An ordered collection of distinct objective vectors sharing one dimension.
///
/// Coordinates are stored row-major in one buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet {
    dim: usize,
    coords: Vec<f64>,
}

impl SolutionSet {
    /// Builds a set, checking dimensions, finiteness and that no two points are identical.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map(Vec::len).unwrap_or(0);
        let mut coords = Vec::with_capacity(dim * points.len());
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(dim, coords)
    }

    /// Like [`SolutionSet::new`] but also rejects sets with a dominated member.
    pub fn new_validated(points: Vec<Vec<f64>>) -> Result<Self> {
        let set = Self::new(points)?;
        if !set.is_nondominated() {
            return Err(Error::contract("solution set contains a dominated point"));
        }
        Ok(set)
    }

    /// Builds a set from a row-major coordinate buffer.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::contract(format!(
                "objective vectors need at least 2 coordinates, got {dim}"
            )));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::contract("coordinate buffer is not a whole number of points"));
        }
        if let Some(j) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::contract(format!("point {} has a non-finite coordinate", j / dim)));
        }
        let set = SolutionSet { dim, coords };
        for i in 0..set.len() {
            for j in 0..i {
                if set.point(i) == set.point(j) {
                    return Err(Error::contract(format!("points {j} and {i} are identical")));
                }
            }
        }
        Ok(set)
    }

    /// An empty set of the given dimension.
    pub fn empty(dim: usize) -> Self {
        SolutionSet { dim, coords: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim.max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.coords
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    /// Index of the first point equal (coordinate-wise, exactly) to `p`.
    pub fn position(&self, p: &[f64]) -> Option<usize> {
        self.iter().position(|q| q == p)
    }

    /// The subset at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> SolutionSet {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        SolutionSet { dim: self.dim, coords }
    }

    /// No ordered pair of members where one dominates the other.
    pub fn is_nondominated(&self) -> bool {
        validate_nondominated(self)
    }

    /// Componentwise maximum.
    pub fn nadir(&self) -> Vec<f64> {
        let mut out = alloc::vec![f64::NEG_INFINITY; self.dim];
        for p in self.iter() {
            for (o, x) in out.iter_mut().zip(p) {
                *o = o.max(*x);
            }
        }
        out
    }

    /// Componentwise minimum.
    pub fn ideal(&self) -> Vec<f64> {
        let mut out = alloc::vec![f64::INFINITY; self.dim];
        for p in self.iter() {
            for (o, x) in out.iter_mut().zip(p) {
                *o = o.min(*x);
            }
        }
        out
    }

    pub(crate) fn push_unchecked(&mut self, p: &[f64]) {
        debug_assert_eq!(p.len(), self.dim);
        self.coords.extend_from_slice(p);
    }
}

/// True iff no member of `set` dominates another.
pub fn validate_nondominated(set: &SolutionSet) -> bool {
    let n = set.len();
    for i in 0..n {
        for j in 0..n {
            if i != j && dominates_unchecked(set.point(i), set.point(j)) {
                return false;
            }
        }
    }
    true
}

/// A reference point for hypervolume computations.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePoint(Vec<f64>);

impl ReferencePoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_coords(&coords)?;
        Ok(ReferencePoint(coords))
    }

    /// `factor` times the nadir point of `set`.
    pub fn from_factor(set: &SolutionSet, factor: f64) -> Result<Self> {
        if !factor.is_finite() || factor <= 1.0 {
            return Err(Error::contract(format!("reference factor must exceed 1, got {factor}")));
        }
        if set.is_empty() {
            return Err(Error::contract("cannot derive a reference point from an empty set"));
        }
        let nadir = set.nadir();
        if let Some(j) = nadir.iter().position(|&x| x <= 0.0) {
            return Err(Error::contract(format!(
                "nadir coordinate {j} is not positive; factor scaling is undefined"
            )));
        }
        Ok(ReferencePoint(nadir.into_iter().map(|x| factor * x).collect()))
    }

    /// `(value, ..., value)` in `dim` dimensions.
    pub fn uniform(dim: usize, value: f64) -> Result<Self> {
        Self::new(alloc::vec![value; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// Errors unless every member of `set` strictly dominates this point in every coordinate.
    pub fn check_dominated_by(&self, set: &SolutionSet) -> Result<()> {
        if set.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: set.dim(), found: self.dim() });
        }
        for (index, p) in set.iter().enumerate() {
            if !strictly_below(p, &self.0) {
                return Err(Error::NotDominatingReference { index });
            }
        }
        Ok(())
    }
}

impl AsRef<[f64]> for ReferencePoint {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

#[inline]
pub(crate) fn strictly_below(p: &[f64], r: &[f64]) -> bool {
    p.iter().zip(r).all(|(x, y)| x < y)
}

/// Shape of a synthetic Pareto front inside `[0,1]^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FrontShape {
    /// `Σ f_i^p = 1`, `f_i ≥ 0`.
    Triangular,
    /// `Σ (1 − f_i)^p = 1`, `0 ≤ f_i ≤ 1`.
    Inverted,
}

impl FrontShape {
    pub fn name(self) -> &'static str {
        match self {
            FrontShape::Triangular => "triangular",
            FrontShape::Inverted => "inverted",
        }
    }
}

/// A front shape with curvature `p ∈ [0.5, 2]` in `m ≥ 2` dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontSpec {
    shape: FrontShape,
    p: f64,
    dim: usize,
}

impl FrontSpec {
    pub const MIN_CURVATURE: f64 = 0.5;
    pub const MAX_CURVATURE: f64 = 2.0;

    pub fn new(shape: FrontShape, p: f64, dim: usize) -> Result<Self> {
        if !(Self::MIN_CURVATURE..=Self::MAX_CURVATURE).contains(&p) {
            return Err(Error::contract(format!("curvature p must lie in [0.5, 2], got {p}")));
        }
        if dim < 2 {
            return Err(Error::contract(format!("front dimension must be at least 2, got {dim}")));
        }
        Ok(FrontSpec { shape, p, dim })
    }

    pub fn shape(&self) -> FrontShape {
        self.shape
    }

    pub fn curvature(&self) -> f64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Residual of the defining equation at `f` (zero on the front).
    pub fn residual(&self, f: &[f64]) -> f64 {
        let s: f64 = match self.shape {
            FrontShape::Triangular => f.iter().map(|&x| math::powf(x, self.p)).sum(),
            FrontShape::Inverted => f.iter().map(|&x| math::powf(1.0 - x, self.p)).sum(),
        };
        s - 1.0
    }

    /// Maps a simplex weight vector onto the front.
    pub fn project(&self, w: &[f64]) -> Vec<f64> {
        let scale = math::powf(w.iter().map(|&x| math::powf(x, self.p)).sum::<f64>(), 1.0 / self.p);
        match self.shape {
            FrontShape::Triangular => w.iter().map(|&x| x / scale).collect(),
            FrontShape::Inverted => w.iter().map(|&x| 1.0 - x / scale).collect(),
        }
    }
}

/// Weight vector on the unit simplex built from `m − 1` uniforms in `[0, 1)` by the
/// JAS recursion; the last component closes the simplex.
pub fn simplex_weight<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    let mut w = Vec::with_capacity(dim);
    let mut rest = 1.0;
    for k in 1..dim {
        let mu: f64 = rng.random();
        let wk = rest * (1.0 - math::powf(mu, 1.0 / (dim - k) as f64));
        w.push(wk);
        rest -= wk;
    }
    w.push(rest);
    w
}

/// Samples `n` distinct, mutually non-dominated points on the front described by `spec`.
pub fn sample_front<R: Rng + ?Sized>(spec: &FrontSpec, n: usize, rng: &mut R) -> Result<SolutionSet> {
    if n < 2 {
        return Err(Error::contract(format!("need at least 2 points, got {n}")));
    }
    let dim = spec.dim();
    let mut set = SolutionSet { dim, coords: Vec::with_capacity(n * dim) };
    let budget = n.saturating_mul(100);
    let mut attempts = 0usize;
    while set.len() < n {
        if attempts >= budget {
            return Err(Error::Sampling(format!(
                "only {} distinct points after {attempts} attempts",
                set.len()
            )));
        }
        attempts += 1;
        let w = simplex_weight(dim, rng);
        let f = spec.project(&w);
        if f.iter().any(|x| !x.is_finite()) {
            continue;
        }
        let clash = set.iter().any(|q| {
            let close = q.iter().zip(&f).all(|(a, b)| math::abs(a - b) < DISTINCT_TOLERANCE);
            close || dominates_unchecked(q, &f) || dominates_unchecked(&f, q)
        });
        if !clash {
            set.push_unchecked(&f);
        }
    }
    Ok(set)
}
