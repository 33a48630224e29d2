//! Learning direction sets: the Pearson objective over a training corpus and the
//! steady-state loop that improves a direction set one replacement at a time.
//!
//! Each iteration appends one UNV direction, evaluates the corpus-averaged
//! objective with every column left out in turn (through the [`LengthMatrix`]
//! caches), and drops the column whose removal scores best. Leaving out the
//! just-appended column restores the previous set, so the objective never
//! decreases.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::directions::{gen_unv, unv_direction, DirectionSet, Provenance};
use crate::error::{Error, Result};
use crate::hypervolume::{hvc_all, hvc_exact};
use crate::math;
use crate::objective::{sample_front, FrontShape, FrontSpec, ReferencePoint, SolutionSet};
use crate::par;
use crate::r2hvc::{r2hvc, LengthMatrix};

/// Relative tolerance for cached contributions checked against exact recomputation.
pub const CONTRIBUTION_TOLERANCE: f64 = 1e-9;

/// Reference point coordinate used for generated corpora (1.2 × the unit nadir).
pub const CORPUS_REFERENCE: f64 = 1.2;

/// A fixed first column for repeated Pearson correlations.
#[derive(Debug, Clone)]
pub struct PearsonTarget {
    centered: Vec<f64>,
    sum_sq: f64,
}

impl PearsonTarget {
    pub fn new(x: &[f64]) -> Self {
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        let centered: Vec<f64> = x.iter().map(|v| v - mean).collect();
        let sum_sq = centered.iter().map(|v| v * v).sum();
        PearsonTarget { centered, sum_sq }
    }

    pub fn len(&self) -> usize {
        self.centered.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centered.is_empty()
    }

    /// Sample correlation with `y`; zero when either column has no variance.
    pub fn correlate(&self, y: &[f64]) -> f64 {
        debug_assert_eq!(y.len(), self.centered.len());
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        let mut cross = 0.0;
        let mut sum_sq = 0.0;
        for (xc, v) in self.centered.iter().zip(y) {
            let yc = v - mean;
            cross += xc * yc;
            sum_sq += yc * yc;
        }
        if self.sum_sq == 0.0 || sum_sq == 0.0 {
            return 0.0;
        }
        (cross / (math::sqrt(self.sum_sq) * math::sqrt(sum_sq))).clamp(-1.0, 1.0)
    }
}

/// Pearson correlation between exact and approximated contributions.
pub fn pearson_q(hvc: &[f64], approx: &[f64]) -> Result<f64> {
    if hvc.len() != approx.len() {
        return Err(Error::DimensionMismatch { expected: hvc.len(), found: approx.len() });
    }
    if hvc.len() < 2 {
        return Err(Error::contract("correlation needs at least two samples"));
    }
    Ok(PearsonTarget::new(hvc).correlate(approx))
}

/// A solution set with its exact contributions cached.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    solutions: SolutionSet,
    hvc: Vec<f64>,
    reference: ReferencePoint,
}

impl TrainingSet {
    /// Computes the exact contributions.
    pub fn new(solutions: SolutionSet, reference: ReferencePoint) -> Result<Self> {
        let hvc = hvc_all(&solutions, &reference)?;
        Ok(TrainingSet { solutions, hvc, reference })
    }

    /// Adopts precomputed contributions after structural checks. Use
    /// [`TrainingSet::verify_contributions`] to compare against exact values.
    pub fn with_contributions(solutions: SolutionSet, reference: ReferencePoint, hvc: Vec<f64>) -> Result<Self> {
        reference.check_dominated_by(&solutions)?;
        if hvc.len() != solutions.len() {
            return Err(Error::size(format!(
                "{} contributions for {} solutions",
                hvc.len(),
                solutions.len()
            )));
        }
        if let Some(i) = hvc.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::contract(format!("contribution {i} is negative or not finite")));
        }
        Ok(TrainingSet { solutions, hvc, reference })
    }

    /// Recomputes the contributions at `indices` and compares them within
    /// [`CONTRIBUTION_TOLERANCE`] (relative).
    pub fn verify_contributions(&self, indices: impl IntoIterator<Item = usize>) -> Result<()> {
        for i in indices {
            if i >= self.len() {
                return Err(Error::Index { index: i, len: self.len() });
            }
            let exact = hvc_exact(self.solutions.point(i), &self.solutions, &self.reference)?;
            let cached = self.hvc[i];
            if !close_relative(exact, cached, CONTRIBUTION_TOLERANCE) {
                return Err(Error::contract(format!(
                    "cached contribution {i} is {cached}, exact value is {exact}"
                )));
            }
        }
        Ok(())
    }

    pub fn solutions(&self) -> &SolutionSet {
        &self.solutions
    }

    pub fn contributions(&self) -> &[f64] {
        &self.hvc
    }

    pub fn reference(&self) -> &ReferencePoint {
        &self.reference
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }
}

fn close_relative(a: f64, b: f64, tol: f64) -> bool {
    a == b || math::abs(a - b) <= tol * math::abs(a).max(math::abs(b))
}

/// Generation record of one corpus set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SetEntry {
    pub shape: FrontShape,
    pub p: f64,
    pub seed: u64,
}

/// Parameters needed to regenerate a corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusManifest {
    pub dim: usize,
    pub points_per_set: usize,
    pub seed: Option<u64>,
    pub reference: Vec<f64>,
    pub entries: Vec<SetEntry>,
}

/// A list of training sets sharing a dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingCorpus {
    sets: Vec<TrainingSet>,
    manifest: CorpusManifest,
}

impl TrainingCorpus {
    pub fn new(sets: Vec<TrainingSet>, manifest: CorpusManifest) -> Result<Self> {
        let first = sets.first().ok_or_else(|| Error::contract("corpus has no sets"))?;
        let dim = first.solutions.dim();
        for s in &sets {
            if s.solutions.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: s.solutions.dim() });
            }
            if s.len() < 2 {
                return Err(Error::contract("every training set needs at least two solutions"));
            }
        }
        if manifest.dim != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: manifest.dim });
        }
        Ok(TrainingCorpus { sets, manifest })
    }

    pub fn sets(&self) -> &[TrainingSet] {
        &self.sets
    }

    pub fn manifest(&self) -> &CorpusManifest {
        &self.manifest
    }

    pub fn dim(&self) -> usize {
        self.manifest.dim
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

const POINT_STREAM: u64 = 1;

/// Seed of set `index` in a corpus generated from `seed`.
pub fn set_seed(seed: u64, index: usize) -> u64 {
    seed ^ index as u64
}

/// Samples one corpus set from its record.
pub fn generate_set(entry: &SetEntry, dim: usize, points: usize) -> Result<TrainingSet> {
    let spec = FrontSpec::new(entry.shape, entry.p, dim)?;
    let mut rng = ChaCha8Rng::seed_from_u64(entry.seed);
    rng.set_stream(POINT_STREAM);
    let solutions = sample_front(&spec, points, &mut rng)?;
    TrainingSet::new(solutions, ReferencePoint::uniform(dim, CORPUS_REFERENCE)?)
}

/// `⌈L/2⌉` triangular and `⌊L/2⌋` inverted sets of `N` points, each with its own
/// curvature `p ~ U[0.5, 2]` and reference point `(1.2, …, 1.2)`.
///
/// Set `i` uses a ChaCha8 generator seeded with `seed ^ i`: stream 0 draws `p`,
/// stream 1 draws the points.
pub fn generate_corpus(dim: usize, sets: usize, points: usize, seed: u64) -> Result<TrainingCorpus> {
    if sets == 0 {
        return Err(Error::contract("corpus needs at least one set"));
    }
    if points < 2 {
        return Err(Error::contract("corpus sets need at least two points"));
    }
    if dim < 2 {
        return Err(Error::contract("corpus dimension must be at least 2"));
    }
    let triangular = sets.div_ceil(2);
    let entries: Vec<SetEntry> = (0..sets)
        .map(|i| {
            let seed = set_seed(seed, i);
            let shape = if i < triangular { FrontShape::Triangular } else { FrontShape::Inverted };
            let p = ChaCha8Rng::seed_from_u64(seed)
                .random_range(FrontSpec::MIN_CURVATURE..=FrontSpec::MAX_CURVATURE);
            SetEntry { shape, p, seed }
        })
        .collect();
    let built = par::map_range(sets, |i| generate_set(&entries[i], dim, points));
    let sets = built.into_iter().collect::<Result<Vec<_>>>()?;
    let manifest = CorpusManifest {
        dim,
        points_per_set: points,
        seed: Some(seed),
        reference: alloc::vec![CORPUS_REFERENCE; dim],
        entries,
    };
    TrainingCorpus::new(sets, manifest)
}

/// Mean correlation over the corpus with R2-HVC values computed from scratch.
pub fn q_of_directions(dirs: &DirectionSet, corpus: &TrainingCorpus) -> Result<f64> {
    let per_set = par::map_range(corpus.len(), |i| {
        let set = &corpus.sets[i];
        let approx = set
            .solutions
            .iter()
            .map(|s| r2hvc(s, &set.solutions, dirs, &set.reference))
            .collect::<Result<Vec<f64>>>()?;
        pearson_q(&set.hvc, &approx)
    });
    let mut total = 0.0;
    for q in per_set {
        total += q?;
    }
    Ok(total / corpus.len() as f64)
}

/// Output of [`lta_train`].
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingResult {
    pub learned: DirectionSet,
    /// `(iteration, Q)` with one entry before the first iteration and one after each.
    pub q_history: Vec<(usize, f64)>,
    pub n: usize,
    pub max_iterations: usize,
}

impl TrainingResult {
    pub fn initial_q(&self) -> f64 {
        self.q_history[0].1
    }

    pub fn final_q(&self) -> f64 {
        self.q_history[self.q_history.len() - 1].1
    }
}

struct SetState {
    matrix: LengthMatrix,
    target: PearsonTarget,
    buffer: Vec<f64>,
}

impl SetState {
    fn q_current(&self) -> f64 {
        self.target.correlate(&self.matrix.values())
    }

    /// Appends `lambda` and scores every previous column left out.
    fn score_candidates(&mut self, lambda: &[f64]) -> Vec<f64> {
        self.matrix
            .append_direction(lambda)
            .expect("direction dimension matches the corpus");
        let old = self.matrix.cols() - 1;
        let mut scores = Vec::with_capacity(old);
        for k in 0..old {
            self.matrix
                .leave_one_out_into(k, &mut self.buffer)
                .expect("at least two columns after append");
            scores.push(self.target.correlate(&self.buffer));
        }
        scores
    }
}

/// Learns `n` directions for `corpus` with `max_iterations` replacement steps.
///
/// The initial set and every candidate are UNV samples drawn from `rng` in call
/// order. Removal ties go to the lowest column index.
pub fn lta_train<R: Rng + ?Sized>(
    corpus: &TrainingCorpus,
    n: usize,
    max_iterations: usize,
    rng: &mut R,
) -> Result<TrainingResult> {
    if n < 2 {
        return Err(Error::contract("direction set size must be at least 2"));
    }
    let dim = corpus.dim();
    let initial = gen_unv(dim, n, rng)?;

    let mut states = corpus
        .sets
        .iter()
        .map(|set| {
            Ok(SetState {
                matrix: LengthMatrix::build(&set.solutions, &initial, &set.reference)?,
                target: PearsonTarget::new(&set.hvc),
                buffer: alloc::vec![0.0; set.len()],
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let sets = states.len() as f64;
    let mut q = states.iter().map(SetState::q_current).sum::<f64>() / sets;
    let mut history = Vec::with_capacity(max_iterations + 1);
    history.push((0, q));

    for iteration in 1..=max_iterations {
        let lambda = unv_direction(dim, rng);
        let lambda = lambda.components();
        let scores = par::map_mut(&mut states, |state| state.score_candidates(lambda));

        // Column n is the new direction; leaving it out gives back the current set.
        let mut best = n;
        let mut best_q = q;
        for k in 0..n {
            let mean = scores.iter().map(|s| s[k]).sum::<f64>() / sets;
            if mean > best_q || (mean == best_q && k < best) {
                best = k;
                best_q = mean;
            }
        }

        for state in &mut states {
            state.matrix.drop_direction(best).expect("column index in range");
        }
        q = best_q;
        history.push((iteration, q));
    }

    let provenance = Provenance::new("lta")
        .with_param("n", n as u64)
        .with_param("maxIteration", max_iterations as u64)
        .with_param("L", corpus.len() as u64);
    let learned = DirectionSet::from_flat_unchecked(dim, states[0].matrix.directions_flat(), provenance);
    Ok(TrainingResult { learned, q_history: history, n, max_iterations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn pearson_examples() {
        assert!((pearson_q(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson_q(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(pearson_q(&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0]).unwrap(), 0.0);
    }

    #[test]
    fn pearson_rejects_bad_lengths() {
        assert!(matches!(pearson_q(&[1.0, 2.0], &[1.0]), Err(Error::DimensionMismatch { .. })));
        assert!(pearson_q(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn corpus_halves_by_shape() {
        let corpus = generate_corpus(3, 4, 10, 9).unwrap();
        let shapes: Vec<_> = corpus.manifest().entries.iter().map(|e| e.shape).collect();
        assert_eq!(
            shapes,
            vec![FrontShape::Triangular, FrontShape::Triangular, FrontShape::Inverted, FrontShape::Inverted]
        );
        let mut ps: Vec<f64> = corpus.manifest().entries.iter().map(|e| e.p).collect();
        assert!(ps.iter().all(|p| (0.5..=2.0).contains(p)));
        ps.sort_by(f64::total_cmp);
        ps.dedup();
        assert_eq!(ps.len(), 4);
        for set in corpus.sets() {
            assert_eq!(set.len(), 10);
            assert!(set.contributions().iter().all(|v| *v > 0.0));
        }
    }

    #[test]
    fn corpus_replays_from_manifest() {
        let corpus = generate_corpus(3, 3, 12, 21).unwrap();
        let manifest = corpus.manifest();
        for (entry, set) in manifest.entries.iter().zip(corpus.sets()) {
            let again = generate_set(entry, manifest.dim, manifest.points_per_set).unwrap();
            assert_eq!(&again, set);
        }
    }

    #[test]
    fn cached_contributions_are_checked() {
        let corpus = generate_corpus(3, 1, 8, 2).unwrap();
        let set = &corpus.sets()[0];
        set.verify_contributions(0..set.len()).unwrap();
        let mut bad = set.contributions().to_vec();
        bad[3] *= 1.001;
        let tampered =
            TrainingSet::with_contributions(set.solutions().clone(), set.reference().clone(), bad).unwrap();
        assert!(tampered.verify_contributions([3]).is_err());
        assert!(TrainingSet::with_contributions(
            set.solutions().clone(),
            set.reference().clone(),
            vec![0.1; 3]
        )
        .is_err());
    }

    #[test]
    fn zero_iterations_returns_the_initial_set() {
        let corpus = generate_corpus(3, 2, 10, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let result = lta_train(&corpus, 6, 0, &mut rng).unwrap();
        let initial = gen_unv(3, 6, &mut ChaCha8Rng::seed_from_u64(17)).unwrap();
        assert_eq!(result.learned.as_flat(), initial.as_flat());
        assert_eq!(result.q_history.len(), 1);
    }

    #[test]
    fn training_rejects_tiny_sets() {
        let corpus = generate_corpus(3, 2, 10, 4).unwrap();
        assert!(lta_train(&corpus, 1, 5, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }
}
