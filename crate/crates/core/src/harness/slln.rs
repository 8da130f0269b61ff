//! SLLN decay experiments: how often does the sample mean-set escape the
//! theoretical one as the sample grows?

use crate::group::GroupContext;
use crate::meanset::{brute_force_mean_set, FiniteGraph, SampleSet};
use crate::rng;
use crate::word::Word;
use crate::{Error, Result};
use rand::Rng;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SllnRow {
    pub n: u32,
    pub trials: u32,
    /// Trials where MS_n was not contained in the theoretical mean-set.
    pub mismatches: u32,
}

impl SllnRow {
    pub fn frequency(&self) -> f64 {
        self.mismatches as f64 / self.trials as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SllnReport {
    pub platform: String,
    /// Human-readable members of the exact mean-set.
    pub mean_set: Vec<String>,
    /// True when the exact mean-set has several points and the caller asked
    /// to proceed anyway; rows then report containment frequency.
    pub multi_vertex: bool,
    pub rows: Vec<SllnRow>,
}

/// Uniform distribution on the integers lo..=hi (point mass when lo = hi),
/// embedded in the rank-1 free-abelian context. The exact mean-set is the
/// brute-force mean-set of the support taken with equal multiplicities.
pub fn slln_z(
    lo: i64,
    hi: i64,
    n_list: &[u32],
    trials: u32,
    seed: u64,
    allow_multi: bool,
) -> Result<SllnReport> {
    if lo > hi {
        return Err(Error::Config(format!("empty support: {lo}..{hi}")));
    }
    if trials == 0 || n_list.is_empty() {
        return Err(Error::Config("need trials > 0 and a nonempty n list".into()));
    }
    let ctx = GroupContext::free_abelian(1)?;
    let to_word = |v: i64| -> Result<Word> {
        let letter = if v >= 0 { 1 } else { -1 };
        Word::new(ctx.alphabet(), vec![letter; v.unsigned_abs() as usize])
    };
    let to_int = |w: &Word| -> i64 { w.letters().iter().map(|&x| x as i64).sum() };

    // exact mean-set of the uniform measure = brute force over one copy of
    // each support point; candidates one beyond the hull on each side
    let support: Vec<Word> = (lo..=hi).map(to_word).collect::<Result<_>>()?;
    let exact_sample = SampleSet::new(support)?;
    let candidates: Vec<Word> = (lo - 1..=hi + 1).map(to_word).collect::<Result<_>>()?;
    let exact = brute_force_mean_set(&ctx, &exact_sample, &candidates)?;
    let mean_set: Vec<i64> = exact.minimizers.iter().map(|w| to_int(w)).collect();
    if mean_set.len() > 1 && !allow_multi {
        return Err(Error::Config(format!(
            "mean-set {mean_set:?} is not a singleton; pass allow-multi to report containment"
        )));
    }

    let mut rows = Vec::new();
    for &n in n_list {
        if n == 0 {
            return Err(Error::Config("sample size 0 in n list".into()));
        }
        let mut mismatches = 0;
        for trial in 0..trials {
            let mut rng = rng::stream(seed, "slln-z", &[n as u64, trial as u64]);
            let draws: Vec<i64> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
            let sample =
                SampleSet::new(draws.iter().map(|&v| to_word(v)).collect::<Result<_>>()?)?;
            // the empirical weight is convex on Z, so the argmin set lies in
            // the sample hull
            let (min, max) = (
                *draws.iter().min().expect("nonempty"),
                *draws.iter().max().expect("nonempty"),
            );
            let cands: Vec<Word> = (min..=max).map(to_word).collect::<Result<_>>()?;
            let ms = brute_force_mean_set(&ctx, &sample, &cands)?;
            let contained = ms
                .minimizers
                .iter()
                .all(|w| mean_set.contains(&to_int(w)));
            if !contained {
                mismatches += 1;
            }
        }
        rows.push(SllnRow {
            n,
            trials,
            mismatches,
        });
    }
    Ok(SllnReport {
        platform: format!("Z uniform on {lo}..{hi}"),
        mean_set: mean_set.iter().map(|v| v.to_string()).collect(),
        multi_vertex: mean_set.len() > 1,
        rows,
    })
}

/// Uniform vertex measure on a path graph with the given vertex count.
pub fn slln_path(
    vertices: usize,
    n_list: &[u32],
    trials: u32,
    seed: u64,
    allow_multi: bool,
) -> Result<SllnReport> {
    if vertices == 0 {
        return Err(Error::Config("path graph needs vertices".into()));
    }
    if trials == 0 || n_list.is_empty() {
        return Err(Error::Config("need trials > 0 and a nonempty n list".into()));
    }
    let graph = FiniteGraph::path(vertices)?;
    let all: Vec<usize> = (0..vertices).collect();
    let exact = brute_force_mean_set(&graph, &SampleSet::new(all.clone())?, &all)?;
    if exact.minimizers.len() > 1 && !allow_multi {
        return Err(Error::Config(format!(
            "mean-set {:?} is not a singleton; pass allow-multi to report containment",
            exact.minimizers
        )));
    }

    let mut rows = Vec::new();
    for &n in n_list {
        if n == 0 {
            return Err(Error::Config("sample size 0 in n list".into()));
        }
        let mut mismatches = 0;
        for trial in 0..trials {
            let mut rng = rng::stream(seed, "slln-path", &[n as u64, trial as u64]);
            let draws: Vec<usize> = (0..n).map(|_| rng.random_range(0..vertices)).collect();
            let ms = brute_force_mean_set(&graph, &SampleSet::new(draws)?, &all)?;
            let contained = ms
                .minimizers
                .iter()
                .all(|v| exact.minimizers.contains(v));
            if !contained {
                mismatches += 1;
            }
        }
        rows.push(SllnRow {
            n,
            trials,
            mismatches,
        });
    }
    Ok(SllnReport {
        platform: format!("path graph on {vertices} vertices, uniform"),
        mean_set: exact.minimizers.iter().map(|v| v.to_string()).collect(),
        multi_vertex: exact.minimizers.len() > 1,
        rows,
    })
}

pub fn render_slln_csv(report: &SllnReport, seed: u64) -> String {
    let mut out = String::from("n,trials,mismatches,frequency,seed\n");
    for row in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.n,
            row.trials,
            row.mismatches,
            row.frequency(),
            seed
        ));
    }
    out
}
