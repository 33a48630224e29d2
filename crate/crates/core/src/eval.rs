//! Evaluation of direction sets: correct identification rate (CIR), greedy
//! approximated hypervolume subset selection (GAHSS), the Wilcoxon rank-sum test
//! and rank aggregation over methods.

use alloc::format;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::directions::DirectionSet;
use crate::error::{Error, Result};
use crate::hypervolume::{hvc_all, hypervolume};
use crate::math;
use crate::objective::{sample_front, FrontShape, FrontSpec, ReferencePoint, SolutionSet};
use crate::par;
use crate::r2hvc::{g_mtch, g_star_2tch, LengthMatrix};

/// Exact contributions within this many ulps of the minimum count as tied.
pub const TIE_ULPS: f64 = 4.0;

/// One solution set with its reference point.
#[derive(Debug, Clone, PartialEq)]
pub struct TestInstance {
    pub set: SolutionSet,
    pub reference: ReferencePoint,
}

/// Something that scores every member of a set by its (approximate) contribution.
pub trait ContributionEstimator {
    fn estimate(&self, set: &SolutionSet, reference: &ReferencePoint) -> Result<Vec<f64>>;
}

/// R2-HVC with a given direction set.
#[derive(Debug, Clone, Copy)]
pub struct R2HvcEstimator<'a>(pub &'a DirectionSet);

impl ContributionEstimator for R2HvcEstimator<'_> {
    fn estimate(&self, set: &SolutionSet, reference: &ReferencePoint) -> Result<Vec<f64>> {
        Ok(LengthMatrix::build(set, self.0, reference)?.values())
    }
}

/// Exact contributions; CIR with this estimator is 1 by construction.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactEstimator;

impl ContributionEstimator for ExactEstimator {
    fn estimate(&self, set: &SolutionSet, reference: &ReferencePoint) -> Result<Vec<f64>> {
        hvc_all(set, reference)
    }
}

/// The six standard fronts: linear, concave and convex shapes, triangular and inverted.
pub const STANDARD_FRONTS: [(&str, FrontShape, f64); 6] = [
    ("linear-triangular", FrontShape::Triangular, 1.0),
    ("concave-triangular", FrontShape::Triangular, 2.0),
    ("convex-triangular", FrontShape::Triangular, 0.5),
    ("linear-inverted", FrontShape::Inverted, 1.0),
    ("convex-inverted", FrontShape::Inverted, 2.0),
    ("concave-inverted", FrontShape::Inverted, 0.5),
];

/// Looks up a front of [`STANDARD_FRONTS`] by name.
pub fn standard_front(name: &str, dim: usize) -> Result<FrontSpec> {
    let (_, shape, p) = STANDARD_FRONTS
        .iter()
        .find(|(n, _, _)| *n == name)
        .ok_or_else(|| Error::contract(format!("unknown front '{name}'")))?;
    FrontSpec::new(*shape, *p, dim)
}

/// `sets` solution sets of `points` points on `front`, reference `(1.2, …, 1.2)`.
/// Set `i` is sampled from ChaCha8 seeded with `seed ^ i`.
pub fn front_suite(front: &FrontSpec, sets: usize, points: usize, seed: u64) -> Result<Vec<TestInstance>> {
    let reference = ReferencePoint::uniform(front.dim(), 1.2)?;
    par::map_range(sets, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ i as u64);
        Ok(TestInstance { set: sample_front(front, points, &mut rng)?, reference: reference.clone() })
    })
    .into_iter()
    .collect()
}

/// Test instances with their exact contributions precomputed.
#[derive(Debug, Clone)]
pub struct CirSuite {
    instances: Vec<TestInstance>,
    exact: Vec<Vec<f64>>,
}

/// Outcome of a CIR evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct CirReport {
    /// Per instance: was the least contributor identified?
    pub correct: Vec<bool>,
    /// `correct / M`.
    pub rate: f64,
}

impl CirSuite {
    pub fn new(instances: Vec<TestInstance>) -> Result<Self> {
        if instances.is_empty() {
            return Err(Error::contract("CIR needs at least one test set"));
        }
        let exact = par::map_range(instances.len(), |i| hvc_all(&instances[i].set, &instances[i].reference))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(CirSuite { instances, exact })
    }

    pub fn instances(&self) -> &[TestInstance] {
        &self.instances
    }

    pub fn exact(&self, i: usize) -> &[f64] {
        &self.exact[i]
    }

    pub fn evaluate<E: ContributionEstimator + Sync>(&self, estimator: &E) -> Result<CirReport> {
        let correct = par::map_range(self.instances.len(), |i| {
            let inst = &self.instances[i];
            let approx = estimator.estimate(&inst.set, &inst.reference)?;
            Ok(identifies_least(&self.exact[i], &approx))
        })
        .into_iter()
        .collect::<Result<Vec<bool>>>()?;
        let hits = correct.iter().filter(|c| **c).count();
        Ok(CirReport { rate: hits as f64 / correct.len() as f64, correct })
    }
}

/// True when the lowest-index minimum of `approx` lies in the tie-set of minima of `exact`.
pub fn identifies_least(exact: &[f64], approx: &[f64]) -> bool {
    let Some(pick) = argmin(approx) else { return false };
    let least = exact.iter().copied().fold(f64::INFINITY, f64::min);
    exact[pick] - least <= TIE_ULPS * f64::EPSILON * math::abs(least)
}

fn argmin(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if best.is_none_or(|b| *v < values[b]) {
            best = Some(i);
        }
    }
    best
}

/// CIR of the R2-HVC indicator with `dirs` over `tests`.
pub fn cir(dirs: &DirectionSet, tests: Vec<TestInstance>) -> Result<CirReport> {
    CirSuite::new(tests)?.evaluate(&R2HvcEstimator(dirs))
}

/// Outcome of a greedy subset selection.
#[derive(Debug, Clone, PartialEq)]
pub struct GahssReport {
    /// Candidate indices in selection order.
    pub selected: Vec<usize>,
    /// Exact hypervolume of the selected subset.
    pub hypervolume: f64,
}

struct Candidate {
    index: usize,
    minima: Vec<f64>,
}

/// Incremental state of the greedy selection.
///
/// Each candidate keeps, per direction, the running minimum of the reference
/// segment length and the truncations by every selected member. Adding a member
/// updates all candidates in `O(C·n·m)`.
pub struct Gahss<'a> {
    candidates: &'a SolutionSet,
    dirs: &'a DirectionSet,
    reference: &'a ReferencePoint,
    state: Vec<Candidate>,
    taken: Vec<bool>,
    selected: Vec<usize>,
}

impl<'a> Gahss<'a> {
    pub fn new(candidates: &'a SolutionSet, dirs: &'a DirectionSet, reference: &'a ReferencePoint) -> Result<Self> {
        if dirs.dim() != candidates.dim() {
            return Err(Error::DimensionMismatch { expected: candidates.dim(), found: dirs.dim() });
        }
        reference.check_dominated_by(candidates)?;
        let r = reference.coords();
        let state = par::map_range(candidates.len(), |i| {
            let s = candidates.point(i);
            Candidate { index: i, minima: dirs.iter().map(|l| g_mtch(r, l, s)).collect() }
        });
        Ok(Gahss {
            candidates,
            dirs,
            reference,
            state,
            taken: alloc::vec![false; candidates.len()],
            selected: Vec::new(),
        })
    }

    /// Approximated contribution of candidate `i` to the current subset.
    pub fn score(&self, i: usize) -> f64 {
        let m = self.candidates.dim();
        let total: f64 = self.state[i].minima.iter().map(|&l| math::powi(l, m)).sum();
        total / self.dirs.len() as f64
    }

    /// Scores of all candidates not yet selected, as `(index, score)`.
    pub fn scores(&self) -> Vec<(usize, f64)> {
        (0..self.state.len())
            .filter(|i| !self.taken[*i])
            .map(|i| (i, self.score(i)))
            .collect()
    }

    /// Adds the best remaining candidate (lowest index on ties) and returns it.
    pub fn step(&mut self) -> Option<usize> {
        let scores = par::map_range(self.state.len(), |i| if self.taken[i] { None } else { Some(self.score(i)) });
        let mut best: Option<(usize, f64)> = None;
        for (i, s) in scores.into_iter().enumerate() {
            if let Some(s) = s {
                if best.is_none_or(|(_, b)| s > b) {
                    best = Some((i, s));
                }
            }
        }
        let (pick, _) = best?;
        self.taken[pick] = true;
        self.selected.push(pick);

        let member = self.candidates.point(pick);
        let candidates = self.candidates;
        let dirs = self.dirs;
        let taken = &self.taken;
        par::map_mut(&mut self.state, |c| {
            if taken[c.index] {
                return;
            }
            let s = candidates.point(c.index);
            for (min, lambda) in c.minima.iter_mut().zip(dirs.iter()) {
                let g = g_star_2tch(member, lambda, s);
                if g < *min {
                    *min = g;
                }
            }
        });
        Some(pick)
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn reference(&self) -> &ReferencePoint {
        self.reference
    }
}

/// Greedily selects `k` candidates by approximated contribution and reports the
/// exact hypervolume of the result.
pub fn gahss(
    candidates: &SolutionSet,
    k: usize,
    dirs: &DirectionSet,
    reference: &ReferencePoint,
) -> Result<GahssReport> {
    if k > candidates.len() {
        return Err(Error::size(format!(
            "cannot select {k} of {} candidates",
            candidates.len()
        )));
    }
    let mut state = Gahss::new(candidates, dirs, reference)?;
    for _ in 0..k {
        state.step();
    }
    let selected = state.selected.clone();
    let hv = hypervolume(&candidates.select(&selected), reference)?;
    Ok(GahssReport { selected, hypervolume: hv })
}

/// Result of a two-sided rank-sum test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankSumTest {
    /// Sum of the ranks of the first sample.
    pub statistic: f64,
    pub p_value: f64,
}

/// Average ranks (1-based) of `values`, ascending; ties share the mean rank.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut ranks = alloc::vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j + 1) as f64 / 2.0;
        for &o in &order[i..j] {
            ranks[o] = rank;
        }
        i = j;
    }
    ranks
}

/// Two-sided Wilcoxon rank-sum test, normal approximation with tie and
/// continuity correction.
pub fn wilcoxon_rank_sum(x: &[f64], y: &[f64]) -> Result<RankSumTest> {
    if x.len() < 5 || y.len() < 5 {
        return Err(Error::contract("rank-sum test needs at least 5 observations per sample"));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::contract("rank-sum test needs finite observations"));
    }
    let pooled: Vec<f64> = x.iter().chain(y).copied().collect();
    let ranks = midranks(&pooled);
    let n1 = x.len() as f64;
    let n2 = y.len() as f64;
    let n = n1 + n2;
    let statistic: f64 = ranks[..x.len()].iter().sum();

    let mut sorted = pooled.clone();
    sorted.sort_by(f64::total_cmp);
    let mut ties = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        ties += t * t * t - t;
        i = j;
    }

    let mean = n1 * (n + 1.0) / 2.0;
    let variance = n1 * n2 / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if variance <= 0.0 {
        return Ok(RankSumTest { statistic, p_value: 1.0 });
    }
    let diff = statistic - mean;
    let corrected = if diff > 0.0 {
        (diff - 0.5).max(0.0)
    } else if diff < 0.0 {
        (diff + 0.5).min(0.0)
    } else {
        0.0
    };
    let z = corrected / math::sqrt(variance);
    let p_value = libm::erfc(math::abs(z) / core::f64::consts::SQRT_2).min(1.0);
    Ok(RankSumTest { statistic, p_value })
}

/// Per-instance ranks (1 = best, ties share the mean rank) and average rank per method.
#[derive(Debug, Clone, PartialEq)]
pub struct RankTable {
    /// `ranks[method][instance]`.
    pub ranks: Vec<Vec<f64>>,
    pub average: Vec<f64>,
}

/// Ranks methods on every instance; `scores[method][instance]`.
pub fn rank_methods(scores: &[Vec<f64>], higher_is_better: bool) -> Result<RankTable> {
    let methods = scores.len();
    if methods == 0 {
        return Err(Error::contract("no methods to rank"));
    }
    let instances = scores[0].len();
    if let Some(bad) = scores.iter().find(|s| s.len() != instances) {
        return Err(Error::DimensionMismatch { expected: instances, found: bad.len() });
    }
    let mut ranks = alloc::vec![alloc::vec![0.0; instances]; methods];
    for inst in 0..instances {
        let column: Vec<f64> = scores
            .iter()
            .map(|s| if higher_is_better { -s[inst] } else { s[inst] })
            .collect();
        for (method, r) in midranks(&column).into_iter().enumerate() {
            ranks[method][inst] = r;
        }
    }
    let average = ranks
        .iter()
        .map(|r| if instances == 0 { 0.0 } else { r.iter().sum::<f64>() / instances as f64 })
        .collect();
    Ok(RankTable { ranks, average })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::directions::Provenance;
    use alloc::vec;

    fn set(rows: &[&[f64]]) -> SolutionSet {
        SolutionSet::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn ranks_examples() {
        let t = rank_methods(&[vec![3.0], vec![1.0], vec![2.0]], true).unwrap();
        assert_eq!(t.ranks, vec![vec![1.0], vec![3.0], vec![2.0]]);
        let t = rank_methods(&[vec![5.0], vec![5.0], vec![1.0]], true).unwrap();
        assert_eq!(t.ranks, vec![vec![1.5], vec![1.5], vec![3.0]]);
        let t = rank_methods(&[vec![0.7]], true).unwrap();
        assert_eq!(t.ranks, vec![vec![1.0]]);
        assert_eq!(t.average, vec![1.0]);
        let t = rank_methods(&[vec![1.0, 2.0], vec![2.0, 2.0]], false).unwrap();
        assert_eq!(t.average, vec![1.25, 1.75]);
        assert!(rank_methods(&[vec![1.0], vec![1.0, 2.0]], true).is_err());
    }

    #[test]
    fn midranks_share_ties() {
        assert_eq!(midranks(&[2.0, 1.0, 2.0, 3.0]), vec![2.5, 1.0, 2.5, 4.0]);
    }

    #[test]
    fn rank_sum_identical_samples() {
        let x = [0.1, 0.4, 0.2, 0.9, 0.5, 0.3];
        let t = wilcoxon_rank_sum(&x, &x).unwrap();
        assert!(t.p_value > 0.99);
        let same = [1.0; 6];
        assert_eq!(wilcoxon_rank_sum(&same, &same).unwrap().p_value, 1.0);
        assert!(wilcoxon_rank_sum(&x[..4], &x).is_err());
    }

    #[test]
    fn rank_sum_disjoint_ranges() {
        let x: Vec<f64> = (0..20).map(|i| i as f64 / 20.0).collect();
        let y: Vec<f64> = (0..20).map(|i| 10.0 + i as f64 / 20.0).collect();
        let t = wilcoxon_rank_sum(&x, &y).unwrap();
        assert!(t.p_value < 0.001);
        assert_eq!(t.statistic, 210.0);
    }

    #[test]
    fn least_contributor_tie_rule() {
        assert!(identifies_least(&[0.2, 0.1, 0.1], &[0.5, 0.9, 0.1]));
        assert!(identifies_least(&[0.2, 0.1, 0.1], &[0.5, 0.1, 0.3]));
        assert!(!identifies_least(&[0.2, 0.1, 0.3], &[0.1, 0.9, 0.3]));
    }

    #[test]
    fn gahss_size_error() {
        let c = set(&[&[0.2, 0.8], &[0.8, 0.2]]);
        let d = DirectionSet::new(vec![vec![0.6, 0.8]], Provenance::new("t")).unwrap();
        let r = ReferencePoint::new(vec![1.0, 1.0]).unwrap();
        assert!(matches!(gahss(&c, 3, &d, &r), Err(Error::Size(_))));
    }

    #[test]
    fn gahss_selects_everything_when_k_is_full() {
        let c = set(&[&[0.2, 0.8], &[0.5, 0.5], &[0.8, 0.2]]);
        let d = DirectionSet::new(vec![vec![0.6, 0.8], vec![0.8, 0.6]], Provenance::new("t")).unwrap();
        let r = ReferencePoint::new(vec![1.0, 1.0]).unwrap();
        let rep = gahss(&c, 3, &d, &r).unwrap();
        let mut sorted = rep.selected.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2]);
        assert!((rep.hypervolume - hypervolume(&c, &r).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn standard_front_lookup() {
        let f = standard_front("convex-inverted", 3).unwrap();
        assert_eq!(f.shape(), FrontShape::Inverted);
        assert_eq!(f.curvature(), 2.0);
        assert!(standard_front("wavy", 3).is_err());
    }
}
