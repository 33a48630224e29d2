//! Direction vector sets: unit-norm, non-negative vectors that orient the line
//! segments of the R2-HVC approximator.
//!
//! Generators: [`gen_das`] (simplex lattice), [`gen_unv`] (uniform on the sphere),
//! [`gen_jas`] (probabilistic simplex filling), [`gen_mss`] (maximally sparse
//! selection; MSS-D and MSS-U via [`gen_mss_d`] / [`gen_mss_u`]) and
//! [`gen_kmeans_u`].

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::math;
use crate::objective::simplex_weight;
use crate::par;

/// Unit-norm tolerance for direction vectors.
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// Default pool size for sampling-based generators: `100·n`, capped at `10^5`.
pub fn default_pool(n: usize) -> usize {
    n.saturating_mul(100).min(100_000)
}

/// A unit-norm vector with non-negative components.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionVector(Vec<f64>);

impl DirectionVector {
    /// Accepts `lambda` as is if it already satisfies the invariants.
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        check_direction(&lambda)?;
        Ok(DirectionVector(lambda))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for DirectionVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

fn check_direction(lambda: &[f64]) -> Result<()> {
    if lambda.is_empty() {
        return Err(Error::contract("direction vector is empty"));
    }
    if lambda.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::contract("direction components must be finite and non-negative"));
    }
    let norm = math::norm(lambda);
    if math::abs(norm - 1.0) > UNIT_TOLERANCE {
        return Err(Error::contract(format!("direction vector has norm {norm}, expected 1")));
    }
    Ok(())
}

/// `w / ‖w‖₂` for a non-zero, non-negative weight vector.
pub fn weight_to_direction(w: &[f64]) -> Result<DirectionVector> {
    if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(Error::contract("weights must be finite and non-negative"));
    }
    let norm = math::norm(w);
    if norm == 0.0 {
        return Err(Error::contract("cannot normalize the zero vector"));
    }
    Ok(DirectionVector(w.iter().map(|x| x / norm).collect()))
}

/// Where a direction set came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub generator: String,
    pub params: Vec<(String, u64)>,
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(generator: &str) -> Self {
        Provenance { generator: generator.to_string(), params: Vec::new(), seed: None }
    }

    pub fn with_param(mut self, key: &str, value: u64) -> Self {
        self.params.push((key.to_string(), value));
        self
    }

    pub fn param(&self, key: &str) -> Option<u64> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }
}

/// An ordered, non-empty list of direction vectors of equal dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionSet {
    dim: usize,
    data: Vec<f64>,
    provenance: Provenance,
}

impl DirectionSet {
    /// Validates every vector (unit norm within [`UNIT_TOLERANCE`], non-negative).
    pub fn new(vectors: Vec<Vec<f64>>, provenance: Provenance) -> Result<Self> {
        let dim = vectors.first().map(Vec::len).ok_or_else(|| Error::contract("direction set is empty"))?;
        let mut data = Vec::with_capacity(dim * vectors.len());
        for v in &vectors {
            if v.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
            }
            check_direction(v)?;
            data.extend_from_slice(v);
        }
        Ok(DirectionSet { dim, data, provenance })
    }

    pub(crate) fn from_flat_unchecked(dim: usize, data: Vec<f64>, provenance: Provenance) -> Self {
        debug_assert!(dim > 0 && !data.is_empty() && data.len().is_multiple_of(dim));
        DirectionSet { dim, data, provenance }
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, k: usize) -> &[f64] {
        &self.data[k * self.dim..(k + 1) * self.dim]
    }

    pub fn iter(&self) -> core::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn set_provenance(&mut self, provenance: Provenance) {
        self.provenance = provenance;
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.provenance.seed = seed;
        self
    }

    /// Smallest Euclidean distance between two members (infinite for one member).
    pub fn min_pairwise_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.len() {
            for j in 0..i {
                best = best.min(math::sq_dist(self.get(i), self.get(j)));
            }
        }
        math::sqrt(best)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::contract(format!("direction dimension must be at least 2, got {dim}")));
    }
    Ok(())
}

fn check_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::contract("direction set size must be at least 1"));
    }
    Ok(())
}

/// Number of lattice weight vectors `C(H+m−1, m−1)`.
pub fn das_count(dim: usize, h: usize) -> Result<usize> {
    h.checked_add(dim - 1)
        .and_then(|top| math::binomial(top, dim - 1))
        .ok_or_else(|| Error::size(format!("lattice size for m={dim}, H={h} overflows")))
}

/// Das and Dennis simplex lattice: every `w` with `Σ w = 1`, `w_i ∈ {0, 1/H, …, 1}`,
/// normalized to unit length, in lexicographic order of the integer numerators.
pub fn gen_das(dim: usize, h: usize) -> Result<DirectionSet> {
    check_dim(dim)?;
    if h == 0 {
        return Err(Error::contract("lattice resolution H must be positive"));
    }
    let count = das_count(dim, h)?;
    let total = count
        .checked_mul(dim)
        .ok_or_else(|| Error::size(format!("lattice of {count} vectors overflows")))?;
    let mut data = Vec::new();
    data.try_reserve_exact(total)
        .map_err(|_| Error::size(format!("cannot allocate {count} lattice vectors")))?;

    let mut numerators = alloc::vec![0usize; dim];
    numerators[dim - 1] = h;
    let mut w = alloc::vec![0.0; dim];
    loop {
        for (wj, &a) in w.iter_mut().zip(&numerators) {
            *wj = a as f64;
        }
        let norm = math::norm(&w);
        data.extend(w.iter().map(|x| x / norm));
        if !next_composition(&mut numerators) {
            break;
        }
    }
    debug_assert_eq!(data.len(), total);
    Ok(DirectionSet::from_flat_unchecked(
        dim,
        data,
        Provenance::new("das").with_param("H", h as u64),
    ))
}

/// Advances to the lexicographically next composition of the same total.
fn next_composition(a: &mut [usize]) -> bool {
    let m = a.len();
    // Rightmost position before the last that can be incremented by borrowing from the tail.
    let tail: usize = a[m - 1];
    if tail > 0 {
        a[m - 2] += 1;
        a[m - 1] -= 1;
        return true;
    }
    // Tail is zero: find the rightmost i < m-1 with a[i] > 0 and a predecessor to bump.
    let mut i = m - 2;
    loop {
        if a[i] > 0 {
            if i == 0 {
                return false;
            }
            let moved = a[i];
            a[i] = 0;
            a[i - 1] += 1;
            a[m - 1] = moved - 1;
            return true;
        }
        if i == 0 {
            return false;
        }
        i -= 1;
    }
}

fn unv_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R, out: &mut Vec<f64>) {
    let start = out.len();
    loop {
        out.truncate(start);
        for _ in 0..dim {
            let x: f64 = rng.sample(StandardNormal);
            out.push(math::abs(x));
        }
        let norm = math::norm(&out[start..]);
        if norm > 0.0 && norm.is_finite() {
            for x in &mut out[start..] {
                *x /= norm;
            }
            return;
        }
    }
}

/// A single UNV direction: `|x| / ‖x‖₂` with `x ~ N(0, I_m)`.
pub fn unv_direction<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DirectionVector {
    let mut v = Vec::with_capacity(dim);
    unv_vector(dim, rng, &mut v);
    DirectionVector(v)
}

/// `n` directions sampled uniformly on the non-negative part of the unit sphere.
pub fn gen_unv<R: Rng + ?Sized>(dim: usize, n: usize, rng: &mut R) -> Result<DirectionSet> {
    check_dim(dim)?;
    check_count(n)?;
    let mut data = Vec::with_capacity(dim * n);
    for _ in 0..n {
        unv_vector(dim, rng, &mut data);
    }
    Ok(DirectionSet::from_flat_unchecked(
        dim,
        data,
        Provenance::new("unv").with_param("n", n as u64),
    ))
}

/// `n` JAS weight vectors, each normalized to unit length.
pub fn gen_jas<R: Rng + ?Sized>(dim: usize, n: usize, rng: &mut R) -> Result<DirectionSet> {
    check_dim(dim)?;
    check_count(n)?;
    let mut data = Vec::with_capacity(dim * n);
    for _ in 0..n {
        let w = simplex_weight(dim, rng);
        data.extend(weight_to_direction(&w)?.0);
    }
    Ok(DirectionSet::from_flat_unchecked(
        dim,
        data,
        Provenance::new("jas").with_param("n", n as u64),
    ))
}

/// Maximally sparse selection from `base`.
///
/// The output starts with the `m` axis vectors and then repeatedly appends the
/// base vector with the largest Euclidean distance to the selected set. Ties go
/// to the lowest base index.
pub fn gen_mss(base: &DirectionSet, n: usize) -> Result<DirectionSet> {
    let dim = base.dim();
    if n < dim {
        return Err(Error::size(format!("MSS needs n ≥ m = {dim}, got {n}")));
    }
    let mut selected: Vec<f64> = Vec::with_capacity(n * dim);
    for j in 0..dim {
        let mut axis = alloc::vec![0.0; dim];
        axis[j] = 1.0;
        selected.extend(axis);
    }

    // Deduplicated candidates that are not axes.
    let mut pool: Vec<&[f64]> = Vec::with_capacity(base.len());
    for v in base.iter() {
        let is_axis = selected.chunks_exact(dim).any(|a| a == v);
        if !is_axis && !pool.contains(&v) {
            pool.push(v);
        }
    }
    if pool.len() + dim < n {
        return Err(Error::size(format!(
            "base offers {} distinct vectors, MSS needs {n}",
            pool.len() + dim
        )));
    }

    let mut nearest: Vec<f64> = pool
        .iter()
        .map(|v| {
            selected
                .chunks_exact(dim)
                .map(|a| math::sq_dist(v, a))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mut taken = alloc::vec![false; pool.len()];
    while selected.len() < n * dim {
        let mut best: Option<usize> = None;
        for (i, d) in nearest.iter().enumerate() {
            if taken[i] {
                continue;
            }
            if best.is_none_or(|b| *d > nearest[b]) {
                best = Some(i);
            }
        }
        let pick = best.expect("pool size checked above");
        taken[pick] = true;
        let v = pool[pick];
        selected.extend_from_slice(v);
        for (i, q) in pool.iter().enumerate() {
            if !taken[i] {
                nearest[i] = nearest[i].min(math::sq_dist(q, v));
            }
        }
    }

    let mut provenance = base.provenance().clone();
    provenance.generator = format!("mss({})", provenance.generator);
    provenance.params.push(("n".to_string(), n as u64));
    Ok(DirectionSet::from_flat_unchecked(dim, selected, provenance))
}

/// Smallest `H` whose lattice holds at least `target` vectors.
pub fn das_resolution_for(dim: usize, target: usize) -> Result<usize> {
    check_dim(dim)?;
    let mut h = 1;
    while das_count(dim, h)? < target {
        h += 1;
    }
    Ok(h)
}

/// MSS over a DAS lattice with at least `pool` vectors.
pub fn gen_mss_d(dim: usize, n: usize, pool: usize) -> Result<DirectionSet> {
    let h = das_resolution_for(dim, pool.max(n))?;
    let base = gen_das(dim, h)?;
    let mut out = gen_mss(&base, n)?;
    out.set_provenance(
        Provenance::new("mss-d")
            .with_param("n", n as u64)
            .with_param("H", h as u64),
    );
    Ok(out)
}

/// MSS over `pool` UNV samples.
pub fn gen_mss_u<R: Rng + ?Sized>(dim: usize, n: usize, pool: usize, rng: &mut R) -> Result<DirectionSet> {
    check_count(n)?;
    let base = gen_unv(dim, pool.max(1), rng)?;
    let mut out = gen_mss(&base, n)?;
    out.set_provenance(
        Provenance::new("mss-u")
            .with_param("n", n as u64)
            .with_param("pool", pool as u64),
    );
    Ok(out)
}

/// k-means settings used by [`gen_kmeans_u`].
pub const KMEANS_MAX_ITERATIONS: usize = 300;
pub const KMEANS_TOLERANCE: f64 = 1e-10;

/// Samples `pool` UNV vectors, clusters them into `n` groups and returns the pool
/// member closest to each centroid.
pub fn gen_kmeans_u<R: Rng + ?Sized>(dim: usize, n: usize, pool: usize, rng: &mut R) -> Result<DirectionSet> {
    check_dim(dim)?;
    check_count(n)?;
    if pool < n.saturating_mul(10) {
        return Err(Error::size(format!("k-means pool must hold at least 10·n = {} vectors", 10 * n)));
    }
    let points = gen_unv(dim, pool, rng)?;
    let centroids = kmeans(points.as_flat(), dim, n, rng);
    let picks = nearest_distinct(points.as_flat(), dim, &centroids);
    let mut data = Vec::with_capacity(n * dim);
    for i in picks {
        data.extend_from_slice(points.get(i));
    }
    Ok(DirectionSet::from_flat_unchecked(
        dim,
        data,
        Provenance::new("kmeans-u")
            .with_param("n", n as u64)
            .with_param("pool", pool as u64),
    ))
}

fn nearest_centroid(p: &[f64], centroids: &[f64], dim: usize) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.chunks_exact(dim).enumerate() {
        let d = math::sq_dist(p, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// Lloyd's algorithm with k-means++ seeding. Returns `k` centroids, row-major.
pub(crate) fn kmeans<R: Rng + ?Sized>(points: &[f64], dim: usize, k: usize, rng: &mut R) -> Vec<f64> {
    let n = points.len() / dim;
    let row = |i: usize| &points[i * dim..(i + 1) * dim];

    // k-means++ seeding.
    let mut centroids = Vec::with_capacity(k * dim);
    centroids.extend_from_slice(row(rng.random_range(0..n)));
    let mut dist: Vec<f64> = (0..n).map(|i| math::sq_dist(row(i), &centroids[..dim])).collect();
    while centroids.len() < k * dim {
        let total: f64 = dist.iter().sum();
        let next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = n - 1;
            for (i, d) in dist.iter().enumerate() {
                acc += d;
                if acc > target && *d > 0.0 {
                    pick = i;
                    break;
                }
            }
            pick
        } else {
            rng.random_range(0..n)
        };
        let start = centroids.len();
        centroids.extend_from_slice(row(next));
        for (i, d) in dist.iter_mut().enumerate() {
            *d = d.min(math::sq_dist(row(i), &centroids[start..]));
        }
    }

    let mut assignment = alloc::vec![0usize; n];
    for _ in 0..KMEANS_MAX_ITERATIONS {
        let nearest = par::map_range(n, |i| nearest_centroid(row(i), &centroids, dim));
        for (a, (c, _)) in assignment.iter_mut().zip(&nearest) {
            *a = *c;
        }

        let mut sums = alloc::vec![0.0; k * dim];
        let mut counts = alloc::vec![0usize; k];
        for (i, &c) in assignment.iter().enumerate() {
            counts[c] += 1;
            for (s, x) in sums[c * dim..(c + 1) * dim].iter_mut().zip(row(i)) {
                *s += x;
            }
        }

        let mut updated = Vec::with_capacity(k * dim);
        let mut reseeded: Vec<usize> = Vec::new();
        for c in 0..k {
            if counts[c] == 0 {
                // Farthest point from its own centroid, not already used for a re-seed.
                let far = (0..n)
                    .filter(|i| !reseeded.contains(i))
                    .max_by(|&a, &b| nearest[a].1.total_cmp(&nearest[b].1).then(b.cmp(&a)))
                    .unwrap_or(0);
                reseeded.push(far);
                updated.extend_from_slice(row(far));
            } else {
                let cnt = counts[c] as f64;
                updated.extend(sums[c * dim..(c + 1) * dim].iter().map(|s| s / cnt));
            }
        }
        let shift = updated
            .chunks_exact(dim)
            .zip(centroids.chunks_exact(dim))
            .map(|(a, b)| math::sqrt(math::sq_dist(a, b)))
            .fold(0.0, f64::max);
        centroids = updated;
        if shift < KMEANS_TOLERANCE {
            break;
        }
    }
    centroids
}

/// For each centroid in order, the nearest point not taken by an earlier centroid.
fn nearest_distinct(points: &[f64], dim: usize, centroids: &[f64]) -> Vec<usize> {
    let n = points.len() / dim;
    let mut taken = alloc::vec![false; n];
    let mut out = Vec::with_capacity(centroids.len() / dim);
    for centroid in centroids.chunks_exact(dim) {
        let mut best: Option<(usize, f64)> = None;
        for (i, p) in points.chunks_exact(dim).enumerate() {
            if taken[i] {
                continue;
            }
            let d = math::sq_dist(p, centroid);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((i, d));
            }
        }
        let (i, _) = best.expect("pool larger than the number of centroids");
        taken[i] = true;
        out.push(i);
    }
    out
}
