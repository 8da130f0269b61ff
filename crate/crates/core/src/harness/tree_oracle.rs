//! Batch verification that direct descent lands in the brute-force mean-set
//! on random trees — the case with a termination guarantee.

use crate::meanset::{
    brute_force_mean_set, direct_descent, DescentParams, FiniteGraph, SampleSet, WorkMeter,
};
use crate::rng;
use crate::{Error, Result};
use rand::Rng;
use serde::Serialize;

/// A failed check, reported verbatim for debugging.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeCounterexample {
    pub tree_index: u32,
    pub sample_index: u32,
    pub edges: Vec<(usize, usize)>,
    pub sample: Vec<usize>,
    pub start: usize,
    pub reached: usize,
    pub minimizers: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TreeOracleReport {
    pub trees: u32,
    pub samples_per_tree: u32,
    pub max_vertices: usize,
    /// Descents executed (every vertex of every tree serves as a start).
    pub checks: u64,
    pub counterexamples: Vec<TreeCounterexample>,
}

impl TreeOracleReport {
    pub fn pass(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// For each random tree and random sample, run direct descent from every
/// vertex and require the endpoint to lie in the brute-force mean-set.
pub fn tree_oracle_batch(
    trees: u32,
    max_vertices: usize,
    samples_per_tree: u32,
    seed: u64,
) -> Result<TreeOracleReport> {
    if trees == 0 || max_vertices == 0 || samples_per_tree == 0 {
        return Err(Error::Config("tree oracle counts must be positive".into()));
    }
    let mut report = TreeOracleReport {
        trees,
        samples_per_tree,
        max_vertices,
        checks: 0,
        counterexamples: Vec::new(),
    };
    for tree_index in 0..trees {
        let mut rng = rng::stream(seed, "tree", &[tree_index as u64]);
        let vertices = rng.random_range(1..=max_vertices);
        let graph = FiniteGraph::random_tree(vertices, &mut rng)?;
        let edges = graph.edges();
        let all: Vec<usize> = (0..vertices).collect();
        for sample_index in 0..samples_per_tree {
            let size = rng.random_range(1..=15);
            let points: Vec<usize> = (0..size).map(|_| rng.random_range(0..vertices)).collect();
            let sample = SampleSet::new(points.clone())?;
            let exact = brute_force_mean_set(&graph, &sample, &all)?;
            for &start in &all {
                report.checks += 1;
                let outcome = direct_descent(
                    &graph,
                    &sample,
                    start,
                    &DescentParams::default(),
                    &mut WorkMeter::unlimited(),
                )?;
                if !exact.minimizers.contains(&outcome.point) {
                    report.counterexamples.push(TreeCounterexample {
                        tree_index,
                        sample_index,
                        edges: edges.clone(),
                        sample: points.clone(),
                        start,
                        reached: outcome.point,
                        minimizers: exact.minimizers.clone(),
                    });
                }
            }
        }
    }
    Ok(report)
}
