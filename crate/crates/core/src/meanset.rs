//! Sample weight, mean-sets, and the direct-descent heuristic.
//!
//! The sample weight of a point v against a sample g_1..g_n is the exact
//! rational (1/n) * sum d(v, g_i)^2. Mean-sets are its argmin sets: computed
//! exhaustively over a candidate set by [`brute_force_mean_set`], or located
//! by the local search [`direct_descent`], which walks to a point none of
//! whose neighbors has strictly smaller weight.
//!
//! Everything is generic over a [`DescentSpace`] so the same code drives
//! platform groups and the explicit finite graphs used as oracles.

use crate::group::GroupContext;
use crate::word::Word;
use crate::{Error, Result};
use rand::Rng;
use std::time::Instant;

/// Exact rational weight `sum_sq / n`; ordered by cross-multiplication so
/// ties are decided exactly, never through floats.
#[derive(Clone, Copy, Debug)]
pub struct Weight {
    sum_sq: u64,
    n: u64,
}

impl Weight {
    pub fn new(sum_sq: u64, n: u64) -> Self {
        assert!(n > 0, "weight denominator must be positive");
        Weight { sum_sq, n }
    }

    pub fn sum_sq(self) -> u64 {
        self.sum_sq
    }

    pub fn sample_size(self) -> u64 {
        self.n
    }

    pub fn as_f64(self) -> f64 {
        self.sum_sq as f64 / self.n as f64
    }
}

impl PartialEq for Weight {
    fn eq(&self, other: &Self) -> bool {
        (self.sum_sq as u128) * (other.n as u128) == (other.sum_sq as u128) * (self.n as u128)
    }
}

impl Eq for Weight {}

impl PartialOrd for Weight {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Weight {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        ((self.sum_sq as u128) * (other.n as u128)).cmp(&((other.sum_sq as u128) * (self.n as u128)))
    }
}

/// Multiset of sample points (responses, vertices, ...); never empty.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet<P> {
    points: Vec<P>,
}

impl<P> SampleSet<P> {
    pub fn new(points: Vec<P>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySample);
        }
        Ok(SampleSet { points })
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl SampleSet<Word> {
    /// Sample of words checked against a group context.
    pub fn for_group(ctx: &GroupContext, points: Vec<Word>) -> Result<Self> {
        for p in &points {
            ctx.check_word(p)?;
        }
        SampleSet::new(points)
    }

    /// Replace every point by a short representative of the same element.
    pub fn shortened(&self, ctx: &GroupContext) -> Result<Self> {
        let points = self
            .points
            .iter()
            .map(|p| ctx.shorten(p))
            .collect::<Result<Vec<_>>>()?;
        SampleSet::new(points)
    }
}

/// Deterministic work budget shared by the heavy loops, charged once per
/// distance evaluation. An optional wall-clock deadline backs it up; the
/// budget is the primary limit because it is reproducible across runs.
#[derive(Clone, Debug)]
pub struct WorkMeter {
    evals_left: u64,
    charges: u64,
    deadline: Option<Instant>,
}

impl WorkMeter {
    pub fn unlimited() -> Self {
        WorkMeter {
            evals_left: u64::MAX,
            charges: 0,
            deadline: None,
        }
    }

    pub fn with_budget(evals: u64) -> Self {
        WorkMeter {
            evals_left: evals,
            charges: 0,
            deadline: None,
        }
    }

    pub fn with_deadline(mut self, deadline: Instant) -> Self {
        self.deadline = Some(deadline);
        self
    }

    /// Distance evaluations consumed so far.
    pub fn charges(&self) -> u64 {
        self.charges
    }

    fn charge(&mut self) -> Result<()> {
        if self.evals_left == 0 {
            return Err(Error::WorkBudget);
        }
        self.evals_left -= 1;
        self.charges += 1;
        if let Some(deadline) = self.deadline {
            // amortize the clock read
            if self.charges % 512 == 0 && Instant::now() >= deadline {
                return Err(Error::WorkBudget);
            }
        }
        Ok(())
    }
}

/// A space direct descent can walk: points, an integer distance, and a
/// deterministic neighbor order (which doubles as the tie-break order).
pub trait DescentSpace {
    type Point: Clone + PartialEq + std::fmt::Debug;

    fn distance(&self, a: &Self::Point, b: &Self::Point) -> Result<u64>;

    /// Neighbors of `p` in tie-break order.
    fn neighbors(&self, p: &Self::Point) -> Result<Vec<Self::Point>>;

    /// Size proxy used by the default step cap.
    fn point_size(&self, p: &Self::Point) -> u64;

    /// Post-process an accepted point (e.g. shorten its representative).
    fn settle(&self, p: Self::Point) -> Result<Self::Point> {
        Ok(p)
    }
}

impl DescentSpace for GroupContext {
    type Point = Word;

    fn distance(&self, a: &Word, b: &Word) -> Result<u64> {
        GroupContext::distance(self, a, b)
    }

    fn neighbors(&self, p: &Word) -> Result<Vec<Word>> {
        self.descent_directions()
            .iter()
            .map(|dir| self.descent_step(p, dir))
            .collect()
    }

    fn point_size(&self, p: &Word) -> u64 {
        p.len() as u64
    }

    fn settle(&self, p: Word) -> Result<Word> {
        if self.settle_points() {
            self.shorten(&p)
        } else {
            Ok(p.free_reduce())
        }
    }
}

/// Sampling weight M_n(v) = (1/n) * sum of squared distances from v to the
/// sample points.
pub fn sample_weight<S: DescentSpace + ?Sized>(
    space: &S,
    v: &S::Point,
    sample: &SampleSet<S::Point>,
) -> Result<Weight> {
    let mut sum = 0u64;
    for g in sample.points() {
        let d = space.distance(v, g)?;
        sum += d * d;
    }
    Ok(Weight::new(sum, sample.len() as u64))
}

/// Numerator of the sample weight, abandoning early once it reaches `cap`
/// (the caller only cares about sums strictly below the cap).
fn weight_sum_capped<S: DescentSpace + ?Sized>(
    space: &S,
    v: &S::Point,
    sample: &SampleSet<S::Point>,
    cap: u64,
    meter: &mut WorkMeter,
) -> Result<Option<u64>> {
    let mut sum = 0u64;
    for g in sample.points() {
        meter.charge()?;
        let d = space.distance(v, g)?;
        sum += d * d;
        if sum >= cap {
            return Ok(None);
        }
    }
    Ok(Some(sum))
}

#[derive(Clone, Debug)]
pub struct MeanSetResult<P> {
    /// Argmin points in candidate order.
    pub minimizers: Vec<P>,
    pub minimal_weight: Weight,
    /// Weight evaluations performed (diagnostics).
    pub evaluations: u64,
}

/// Exhaustive argmin of the sample weight over an explicit candidate list.
pub fn brute_force_mean_set<S: DescentSpace + ?Sized>(
    space: &S,
    sample: &SampleSet<S::Point>,
    candidates: &[S::Point],
) -> Result<MeanSetResult<S::Point>> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let mut best_sum = u64::MAX;
    let mut minimizers: Vec<S::Point> = Vec::new();
    for cand in candidates {
        let mut sum = 0u64;
        let mut over = false;
        for g in sample.points() {
            let d = space.distance(cand, g)?;
            sum += d * d;
            if sum > best_sum {
                // cannot join the argmin set; equality must finish the loop
                over = true;
                break;
            }
        }
        if over {
            continue;
        }
        if sum < best_sum {
            best_sum = sum;
            minimizers.clear();
        }
        minimizers.push(cand.clone());
    }
    Ok(MeanSetResult {
        minimizers,
        minimal_weight: Weight::new(best_sum, sample.len() as u64),
        evaluations: candidates.len() as u64,
    })
}

#[derive(Clone, Debug, Default)]
pub struct DescentParams {
    /// Cap on accepted steps; `None` uses 10 * (average sample length + n).
    pub max_steps: Option<u64>,
    /// Record the weight numerator after every accepted step.
    pub trace: bool,
}

#[derive(Clone, Debug)]
pub struct DescentOutcome<P> {
    pub point: P,
    pub weight: Weight,
    /// Accepted (strictly improving) steps.
    pub steps: u64,
    /// Weight evaluations, counting early-abandoned ones.
    pub evaluations: u64,
    /// Weight numerators after each accepted step (when requested).
    pub trace: Vec<u64>,
}

/// First sample point attaining the minimal sample weight — the default
/// descent start.
pub fn min_weight_start<S: DescentSpace + ?Sized>(
    space: &S,
    sample: &SampleSet<S::Point>,
) -> Result<S::Point> {
    let mut best: Option<(usize, u64)> = None;
    for (i, v) in sample.points().iter().enumerate() {
        let w = sample_weight(space, v, sample)?;
        if best.map_or(true, |(_, b)| w.sum_sq() < b) {
            best = Some((i, w.sum_sq()));
        }
    }
    let (idx, _) = best.expect("sample is nonempty");
    Ok(sample.points()[idx].clone())
}

/// Uniformly random sample point — the alternative start policy.
pub fn random_start<S: DescentSpace + ?Sized>(
    sample: &SampleSet<S::Point>,
    rng: &mut impl Rng,
) -> S::Point {
    sample.points()[rng.random_range(0..sample.len())].clone()
}

/// Direct descent: from `start`, repeatedly move to the first neighbor (in
/// tie-break order) of strictly minimal weight below the current point's,
/// stopping at a local minimum or after the step cap.
pub fn direct_descent<S: DescentSpace + ?Sized>(
    space: &S,
    sample: &SampleSet<S::Point>,
    start: S::Point,
    params: &DescentParams,
    meter: &mut WorkMeter,
) -> Result<DescentOutcome<S::Point>> {
    let n = sample.len() as u64;
    let max_steps = params.max_steps.unwrap_or_else(|| {
        let total: u64 = sample.points().iter().map(|p| space.point_size(p)).sum();
        10 * (total / n + n)
    });

    let mut current = space.settle(start)?;
    let mut cur_sum = sample_weight(space, &current, sample)?.sum_sq();
    let mut evaluations = 1u64;
    let mut steps = 0u64;
    let mut trace = Vec::new();
    if params.trace {
        trace.push(cur_sum);
    }

    while steps < max_steps {
        let mut best: Option<(S::Point, u64)> = None;
        for nb in space.neighbors(&current)? {
            let cap = best.as_ref().map_or(cur_sum, |(_, s)| *s);
            evaluations += 1;
            if let Some(sum) = weight_sum_capped(space, &nb, sample, cap, meter)? {
                // sum < cap <= cur_sum: strict improvement; ties keep the
                // earlier (smaller-index) direction
                best = Some((nb, sum));
            }
        }
        match best {
            Some((point, sum)) => {
                current = space.settle(point)?;
                cur_sum = sum;
                steps += 1;
                if params.trace {
                    trace.push(sum);
                }
            }
            None => break,
        }
    }

    Ok(DescentOutcome {
        point: current,
        weight: Weight::new(cur_sum, n),
        steps,
        evaluations,
        trace,
    })
}

// ---------------------------------------------------------------------------
// Finite graphs (oracle test beds)
// ---------------------------------------------------------------------------

/// Explicit undirected connected graph with precomputed all-pairs distances.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteGraph {
    adjacency: Vec<Vec<usize>>,
    dist: Vec<Vec<u32>>,
}

impl FiniteGraph {
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Graph("graph needs at least one vertex".into()));
        }
        let mut adjacency = vec![Vec::new(); vertex_count];
        for &(a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::Graph(format!(
                    "edge ({a},{b}) outside 0..{vertex_count}"
                )));
            }
            if a == b {
                return Err(Error::Graph(format!("self loop at {a}")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let graph = FiniteGraph {
            adjacency,
            dist: Vec::new(),
        };
        let mut dist = Vec::with_capacity(vertex_count);
        for v in 0..vertex_count {
            let row = graph.bfs_distances(v)?;
            dist.push(row);
        }
        Ok(FiniteGraph { dist, ..graph })
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn adjacency(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// BFS distance vector from `source`; errors if some vertex is
    /// unreachable (the graph must be connected).
    pub fn bfs_distances(&self, source: usize) -> Result<Vec<u32>> {
        let n = self.adjacency.len();
        let mut dist = vec![u32::MAX; n];
        let mut queue = std::collections::VecDeque::new();
        dist[source] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            for &u in &self.adjacency[v] {
                if dist[u] == u32::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        if dist.iter().any(|&d| d == u32::MAX) {
            return Err(Error::Graph("graph is not connected".into()));
        }
        Ok(dist)
    }

    /// Path graph 0-1-...-(n-1).
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        FiniteGraph::new(n, &edges)
    }

    /// Uniform random labeled tree via Prüfer sequence decoding.
    /// Edge list (a < b), sorted; handy for reports and reconstruction.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (a, nbrs) in self.adjacency.iter().enumerate() {
            for &b in nbrs {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn random_tree(vertex_count: usize, rng: &mut impl Rng) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::Graph("tree needs at least one vertex".into()));
        }
        if vertex_count == 1 {
            return FiniteGraph::new(1, &[]);
        }
        if vertex_count == 2 {
            return FiniteGraph::new(2, &[(0, 1)]);
        }
        let seq: Vec<usize> = (0..vertex_count - 2)
            .map(|_| rng.random_range(0..vertex_count))
            .collect();
        let mut degree = vec![1u32; vertex_count];
        for &v in &seq {
            degree[v] += 1;
        }
        let mut leaves = std::collections::BinaryHeap::new();
        for (v, &d) in degree.iter().enumerate() {
            if d == 1 {
                leaves.push(std::cmp::Reverse(v));
            }
        }
        let mut edges = Vec::with_capacity(vertex_count - 1);
        for &v in &seq {
            let std::cmp::Reverse(leaf) = leaves.pop().expect("prüfer decode invariant");
            edges.push((leaf, v));
            degree[v] -= 1;
            if degree[v] == 1 {
                leaves.push(std::cmp::Reverse(v));
            }
        }
        let std::cmp::Reverse(a) = leaves.pop().expect("two leaves remain");
        let std::cmp::Reverse(b) = leaves.pop().expect("two leaves remain");
        edges.push((a, b));
        FiniteGraph::new(vertex_count, &edges)
    }
}

impl DescentSpace for FiniteGraph {
    type Point = usize;

    fn distance(&self, a: &usize, b: &usize) -> Result<u64> {
        Ok(self.dist[*a][*b] as u64)
    }

    fn neighbors(&self, p: &usize) -> Result<Vec<usize>> {
        Ok(self.adjacency[*p].clone())
    }

    fn point_size(&self, _p: &usize) -> u64 {
        self.adjacency.len() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use crate::word::Alphabet;

    fn z_ctx() -> GroupContext {
        GroupContext::free_abelian(1).unwrap()
    }

    /// Word for the integer k in the rank-1 abelian context.
    fn z_word(k: i64) -> Word {
        let alphabet = Alphabet::new(1).unwrap();
        let letter = if k >= 0 { 1 } else { -1 };
        Word::new(alphabet, vec![letter; k.unsigned_abs() as usize]).unwrap()
    }

    fn z_sample(ks: &[i64]) -> SampleSet<Word> {
        SampleSet::new(ks.iter().map(|&k| z_word(k)).collect()).unwrap()
    }

    #[test]
    fn weight_examples() {
        let ctx = z_ctx();
        let sample = z_sample(&[0, 0, 3]);
        let w = sample_weight(&ctx, &z_word(1), &sample).unwrap();
        assert_eq!((w.sum_sq(), w.sample_size()), (6, 3)); // value 2
        assert_eq!(w, Weight::new(2, 1));

        let single = z_sample(&[0]);
        assert_eq!(
            sample_weight(&ctx, &z_word(0), &single).unwrap(),
            Weight::new(0, 1)
        );

        let f2 = GroupContext::free(2).unwrap();
        let sample = SampleSet::new(vec![
            Word::parse(f2.alphabet(), "1").unwrap(),
            Word::parse(f2.alphabet(), "-1").unwrap(),
            Word::parse(f2.alphabet(), "2").unwrap(),
        ])
        .unwrap();
        let w = sample_weight(&f2, &f2.identity(), &sample).unwrap();
        assert_eq!(w, Weight::new(1, 1)); // (1+1+1)/3 = 1
    }

    #[test]
    fn weight_ordering_is_exact() {
        // 1/3 < 2/5 < 1/2 without float round-off
        assert!(Weight::new(1, 3) < Weight::new(2, 5));
        assert!(Weight::new(2, 5) < Weight::new(1, 2));
        assert_eq!(Weight::new(2, 6), Weight::new(1, 3));
        assert_eq!(Weight::new(4, 2).as_f64(), 2.0);
    }

    #[test]
    fn brute_force_examples() {
        let ctx = z_ctx();
        let sample = z_sample(&[0, 0, 3]);
        let candidates: Vec<Word> = (-5..=8).map(z_word).collect();
        let result = brute_force_mean_set(&ctx, &sample, &candidates).unwrap();
        assert_eq!(result.minimizers, vec![z_word(1)]);
        assert_eq!(result.minimal_weight, Weight::new(6, 3));
        assert_eq!(result.evaluations, 14);

        // tie case
        let sample = z_sample(&[0, 1]);
        let result = brute_force_mean_set(&ctx, &sample, &candidates).unwrap();
        assert_eq!(result.minimizers, vec![z_word(0), z_word(1)]);
        assert_eq!(result.minimal_weight, Weight::new(1, 2));
    }

    #[test]
    fn brute_force_free_group_example() {
        let f2 = GroupContext::free(2).unwrap();
        let sample = SampleSet::new(vec![
            Word::parse(f2.alphabet(), "1").unwrap(),
            Word::parse(f2.alphabet(), "-1").unwrap(),
            Word::parse(f2.alphabet(), "2").unwrap(),
        ])
        .unwrap();
        let candidates = crate::group::ball(&f2, &f2.identity(), 3).unwrap();
        let result = brute_force_mean_set(&f2, &sample, &candidates).unwrap();
        assert_eq!(result.minimizers, vec![f2.identity()]);
    }

    #[test]
    fn brute_force_rejects_empty_candidates() {
        let ctx = z_ctx();
        let sample = z_sample(&[0]);
        assert!(matches!(
            brute_force_mean_set(&ctx, &sample, &[]),
            Err(Error::EmptyCandidates)
        ));
    }

    #[test]
    fn descent_z_example() {
        let ctx = z_ctx();
        let sample = z_sample(&[0, 0, 3]);
        let mut meter = WorkMeter::unlimited();
        let out = direct_descent(
            &ctx,
            &sample,
            z_word(10),
            &DescentParams {
                trace: true,
                ..Default::default()
            },
            &mut meter,
        )
        .unwrap();
        assert_eq!(out.point, z_word(1));
        assert_eq!(out.steps, 9);
        assert_eq!(out.weight, Weight::new(6, 3));
        // strictly decreasing trajectory
        assert!(out.trace.windows(2).all(|p| p[1] < p[0]));
    }

    #[test]
    fn descent_constant_sample_stays_put() {
        let ctx = GroupContext::free(2).unwrap();
        let g = Word::parse(ctx.alphabet(), "1,2,-1").unwrap();
        let sample = SampleSet::new(vec![g.clone(), g.clone(), g.clone()]).unwrap();
        let mut meter = WorkMeter::unlimited();
        let out = direct_descent(
            &ctx,
            &sample,
            g.clone(),
            &DescentParams::default(),
            &mut meter,
        )
        .unwrap();
        assert!(ctx.equal(&out.point, &g).unwrap());
        assert_eq!(out.steps, 0);
        assert_eq!(out.weight, Weight::new(0, 3));
    }

    #[test]
    fn descent_respects_step_cap() {
        let ctx = z_ctx();
        let sample = z_sample(&[0, 0, 3]);
        let mut meter = WorkMeter::unlimited();
        let out = direct_descent(
            &ctx,
            &sample,
            z_word(10),
            &DescentParams {
                max_steps: Some(3),
                trace: false,
            },
            &mut meter,
        )
        .unwrap();
        assert_eq!(out.steps, 3);
        assert_eq!(out.point, z_word(7));
    }

    #[test]
    fn descent_work_budget_trips() {
        let ctx = z_ctx();
        let sample = z_sample(&[0, 0, 3]);
        let mut meter = WorkMeter::with_budget(5);
        let err = direct_descent(
            &ctx,
            &sample,
            z_word(10),
            &DescentParams::default(),
            &mut meter,
        )
        .unwrap_err();
        assert!(matches!(err, Error::WorkBudget));
    }

    #[test]
    fn min_weight_start_picks_first_minimum() {
        let ctx = z_ctx();
        // both 0 and 1 attain the minimal weight; the first in sample order wins
        let sample = z_sample(&[1, 0]);
        assert_eq!(min_weight_start(&ctx, &sample).unwrap(), z_word(1));
        let sample = z_sample(&[0, 1]);
        assert_eq!(min_weight_start(&ctx, &sample).unwrap(), z_word(0));
    }

    #[test]
    fn graph_distance_examples() {
        let path = FiniteGraph::path(3).unwrap();
        assert_eq!(path.bfs_distances(0).unwrap(), vec![0, 1, 2]);
        let single = FiniteGraph::new(1, &[]).unwrap();
        assert_eq!(single.bfs_distances(0).unwrap(), vec![0]);
        // star K_{1,3} with center 0
        let star = FiniteGraph::new(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(star.bfs_distances(0).unwrap(), vec![0, 1, 1, 1]);
        assert_eq!(star.bfs_distances(1).unwrap(), vec![1, 0, 2, 2]);
    }

    #[test]
    fn graph_validation() {
        assert!(FiniteGraph::new(0, &[]).is_err());
        // disconnected
        assert!(FiniteGraph::new(3, &[(0, 1)]).is_err());
        // out of range
        assert!(FiniteGraph::new(2, &[(0, 2)]).is_err());
        // self loop
        assert!(FiniteGraph::new(2, &[(1, 1)]).is_err());
    }

    #[test]
    fn random_trees_are_trees() {
        let mut rng = rng::stream(21, "tree", &[]);
        assert_eq!(
            FiniteGraph::random_tree(1, &mut rng).unwrap().vertex_count(),
            1
        );
        let two = FiniteGraph::random_tree(2, &mut rng).unwrap();
        assert_eq!(two.adjacency(0), &[1]);
        for _ in 0..20 {
            let n = rng.random_range(3..=40);
            let tree = FiniteGraph::random_tree(n, &mut rng).unwrap();
            let edge_count: usize = (0..n).map(|v| tree.adjacency(v).len()).sum::<usize>() / 2;
            assert_eq!(edge_count, n - 1); // connected (validated) + n-1 edges = tree
        }
    }

    #[test]
    fn tree_descent_matches_brute_force() {
        let mut rng = rng::stream(22, "tree-descent", &[]);
        for trial in 0..30 {
            let n = rng.random_range(2..=25);
            let tree = FiniteGraph::random_tree(n, &mut rng).unwrap();
            let sample_size = rng.random_range(1..=8);
            let sample = SampleSet::new(
                (0..sample_size)
                    .map(|_| rng.random_range(0..n))
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            let vertices: Vec<usize> = (0..n).collect();
            let exact = brute_force_mean_set(&tree, &sample, &vertices).unwrap();
            for start in 0..n {
                let mut meter = WorkMeter::unlimited();
                let out = direct_descent(
                    &tree,
                    &sample,
                    start,
                    &DescentParams::default(),
                    &mut meter,
                )
                .unwrap();
                assert!(
                    exact.minimizers.contains(&out.point),
                    "trial {trial}: descent from {start} hit {} outside {:?}",
                    out.point,
                    exact.minimizers
                );
            }
        }
    }

    #[test]
    fn shift_invariance_of_weight_and_mean_set() {
        let mut rng = rng::stream(23, "shift", &[]);
        for ctx in [
            GroupContext::free(2).unwrap(),
            GroupContext::free_abelian(2).unwrap(),
            GroupContext::braid(4).unwrap(),
        ] {
            for _ in 0..10 {
                let s = ctx.random_uniform_word(6, &mut rng);
                let sample = SampleSet::new(
                    (0..5)
                        .map(|_| ctx.random_uniform_word(8, &mut rng))
                        .collect::<Vec<_>>(),
                )
                .unwrap();
                let candidates: Vec<Word> = (0..6)
                    .map(|_| ctx.random_uniform_word(4, &mut rng))
                    .collect();
                let shifted_sample = SampleSet::new(
                    sample
                        .points()
                        .iter()
                        .map(|g| s.concat(g).unwrap())
                        .collect::<Vec<_>>(),
                )
                .unwrap();
                let shifted_candidates: Vec<Word> = candidates
                    .iter()
                    .map(|c| s.concat(c).unwrap())
                    .collect();

                for (c, sc) in candidates.iter().zip(&shifted_candidates) {
                    let w = sample_weight(&ctx, c, &sample).unwrap();
                    let sw = sample_weight(&ctx, sc, &shifted_sample).unwrap();
                    assert_eq!((w.sum_sq(), w.sample_size()), (sw.sum_sq(), sw.sample_size()));
                }

                let base = brute_force_mean_set(&ctx, &sample, &candidates).unwrap();
                let shifted =
                    brute_force_mean_set(&ctx, &shifted_sample, &shifted_candidates).unwrap();
                let idx = |r: &MeanSetResult<Word>, cands: &[Word]| -> Vec<usize> {
                    r.minimizers
                        .iter()
                        .map(|m| cands.iter().position(|c| c == m).unwrap())
                        .collect()
                };
                assert_eq!(idx(&base, &candidates), idx(&shifted, &shifted_candidates));
                assert_eq!(base.minimal_weight, shifted.minimal_weight);
            }
        }
    }

    #[test]
    fn slln_mismatch_decay_on_z() {
        // frequency of MS_n != {0} for uniform mu on {-2..2} must drop from
        // n=10 to n=100
        let ctx = z_ctx();
        let candidates: Vec<Word> = (-6..=6).map(z_word).collect();
        let mismatch = |n: usize, tag: &str| {
            let mut count = 0u32;
            for trial in 0..500u64 {
                let mut rng = rng::stream(24, tag, &[trial]);
                let sample = SampleSet::new(
                    (0..n)
                        .map(|_| z_word(rng.random_range(-2..=2)))
                        .collect::<Vec<_>>(),
                )
                .unwrap();
                let ms = brute_force_mean_set(&ctx, &sample, &candidates).unwrap();
                if ms.minimizers != vec![z_word(0)] {
                    count += 1;
                }
            }
            count
        };
        let at_10 = mismatch(10, "slln-10");
        let at_100 = mismatch(100, "slln-100");
        assert!(
            at_100 < at_10,
            "mismatch frequency should decay: n=10 -> {at_10}, n=100 -> {at_100}"
        );
    }
}
