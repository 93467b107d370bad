//! Coefficient search for large-girth QPP codes.
//!
//! Stage 0 fixes `f2` to the radical of `N` and sweeps every valid `f1` in the
//! canonical range. Each later stage multiplies the `f2` values that reached
//! the previous stage's best girth by one more prime. Escalation stops once a
//! stage fails to raise the best girth (or after `patience` such stages).

use std::collections::BTreeSet;
use std::path::Path;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::gf2::{rank_gf2, SparseBitMatrix};
use crate::qpp::{factorize, is_permutation_poly, min_f2, Qpp};
use crate::tanner::{automorphism_params, girth, CodeProfile, Girth, GirthMode, TannerGraph, DEFAULT_GIRTH_CAP};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub girth_target: usize,
    /// Primes not dividing `N` that may also be multiplied into `f2`.
    pub extra_primes: Vec<u64>,
    /// Non-improving escalations tolerated before stopping.
    pub patience: usize,
    /// Upper limit on the number of stages, stage 0 included.
    pub max_stages: usize,
    /// At most this many `f2` values per stage (smallest first).
    pub max_f2_per_stage: usize,
    /// Longest cycle searched for by the girth BFS.
    pub girth_cap: usize,
    /// Candidates kept in the report.
    pub keep: usize,
    /// Leading candidates whose rank is computed.
    pub finalists: usize,
    /// `f1` values evaluated between checkpoints.
    pub chunk: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            girth_target: 8,
            extra_primes: vec![],
            patience: 0,
            max_stages: 4,
            max_f2_per_stage: 8,
            girth_cap: DEFAULT_GIRTH_CAP,
            keep: 50,
            finalists: 5,
            chunk: 256,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub f1: u64,
    pub f2: u64,
    pub girth: Girth,
    /// Cycle-closing edges at the girth length; fewer is better.
    pub shortest_cycles: u64,
    pub beta: u64,
    pub rank: Option<usize>,
}

impl Candidate {
    fn sort_key(&self) -> (std::cmp::Reverse<Girth>, u64, u64, u64) {
        (std::cmp::Reverse(self.girth), self.shortest_cycles, self.f2, self.f1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageSummary {
    pub f2_values: Vec<u64>,
    pub best_girth: Option<Girth>,
    pub evaluated: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub profile: CodeProfile,
    pub girth_target: usize,
    /// Candidates reaching the target, best first.
    pub candidates: Vec<Candidate>,
    pub stages: Vec<StageSummary>,
    /// Valid `(f1, f2)` pairs whose girth was computed.
    pub examined: usize,
    /// Valid `f1` values outside the canonical range, skipped as isomorphic.
    pub skipped: usize,
}

/// Resumable search state, written after every chunk when a checkpoint path is given.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    profile: CodeProfile,
    config: SearchConfig,
    stage: usize,
    stage_f2: Vec<u64>,
    f2_index: usize,
    next_f1: u64,
    stage_results: Vec<Candidate>,
    kept: Vec<Candidate>,
    stages: Vec<StageSummary>,
    tried_f2: BTreeSet<u64>,
    best: Option<Girth>,
    misses: usize,
    examined: usize,
    skipped: usize,
    done: bool,
}

/// Exclusive bound of the canonical `f1` range: `f1` and `f1 + g` give
/// isomorphic graphs for `g = gcd(2 alpha f2, N)`, since multiples of
/// `2 alpha f2` modulo `N` are exactly the multiples of `g`.
pub fn f1_period(profile: &CodeProfile, f2: u64) -> u64 {
    let n = profile.edges as u64;
    (2 * profile.alpha() as u64 * f2).gcd(&n)
}

/// Girth and tie metric of one polynomial; `None` if `(f1, f2)` is not a permutation.
pub fn evaluate(profile: &CodeProfile, f1: u64, f2: u64, cap: usize) -> Result<Option<Candidate>> {
    let n = profile.edges as u64;
    if !is_permutation_poly(n, f1, f2)? {
        return Ok(None);
    }
    let qpp = Qpp::new(n, f1, f2)?;
    let beta = automorphism_params(&qpp, profile)?.beta;
    let graph = TannerGraph::build(*profile, qpp)?;
    let report = girth(&graph, GirthMode::Pruned, cap)?;
    Ok(Some(Candidate { f1, f2, girth: report.girth, shortest_cycles: report.shortest_cycles, beta, rank: None }))
}

fn next_stage(profile: &CodeProfile, cfg: &SearchConfig, frontier: &[u64], tried: &BTreeSet<u64>) -> Result<Vec<u64>> {
    let n = profile.edges as u64;
    let mut primes: Vec<u64> = factorize(n)?.primes().collect();
    primes.extend(cfg.extra_primes.iter().copied().filter(|&p| p > 1));
    primes.sort_unstable();
    primes.dedup();
    let mut out = BTreeSet::new();
    for &f2 in frontier {
        for &p in &primes {
            let g = f2 * p;
            if g < n && !tried.contains(&g) {
                out.insert(g);
            }
        }
    }
    Ok(out.into_iter().take(cfg.max_f2_per_stage).collect())
}

fn save(path: Option<&Path>, state: &Checkpoint) -> Result<()> {
    if let Some(p) = path {
        let tmp = p.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_vec_pretty(state)?)?;
        std::fs::rename(tmp, p)?;
    }
    Ok(())
}

/// Runs the search from scratch.
pub fn search_codes(profile: &CodeProfile, cfg: &SearchConfig) -> Result<SearchReport> {
    search_with_checkpoint(profile, cfg, None)
}

/// Runs the search, resuming from `checkpoint` if it exists and matches the
/// profile and configuration, and keeping it up to date otherwise.
pub fn search_with_checkpoint(profile: &CodeProfile, cfg: &SearchConfig, checkpoint: Option<&Path>) -> Result<SearchReport> {
    profile.validate()?;
    if cfg.max_stages == 0 || cfg.chunk == 0 || cfg.max_f2_per_stage == 0 {
        return invalid("stage count, chunk size and stage width must be positive");
    }
    let n = profile.edges as u64;
    let mut st = match checkpoint.filter(|p| p.exists()) {
        Some(p) => {
            let st: Checkpoint = serde_json::from_slice(&std::fs::read(p)?)?;
            if st.profile != *profile || st.config != *cfg {
                return invalid(format!("checkpoint {} was written for a different search", p.display()));
            }
            st
        }
        None => {
            let f2 = min_f2(n)?;
            Checkpoint {
                profile: *profile,
                config: cfg.clone(),
                stage: 0,
                stage_f2: vec![f2],
                f2_index: 0,
                next_f1: 1,
                stage_results: vec![],
                kept: vec![],
                stages: vec![],
                tried_f2: BTreeSet::from([f2]),
                best: None,
                misses: 0,
                examined: 0,
                skipped: 0,
                done: false,
            }
        }
    };

    while !st.done {
        while st.f2_index < st.stage_f2.len() {
            let f2 = st.stage_f2[st.f2_index];
            let period = f1_period(profile, f2).min(n);
            if st.next_f1 == 1 {
                st.skipped += (period..n).filter(|&f1| is_permutation_poly(n, f1, f2).unwrap_or(false)).count();
            }
            while st.next_f1 < period {
                let end = (st.next_f1 + cfg.chunk as u64).min(period);
                let found: Vec<Option<Candidate>> = (st.next_f1..end)
                    .into_par_iter()
                    .map(|f1| evaluate(profile, f1, f2, cfg.girth_cap))
                    .collect::<Result<_>>()?;
                for c in found.into_iter().flatten() {
                    st.examined += 1;
                    st.stage_results.push(c);
                }
                st.next_f1 = end;
                save(checkpoint, &st)?;
            }
            st.f2_index += 1;
            st.next_f1 = 1;
        }

        let stage_best = st.stage_results.iter().map(|c| c.girth).max();
        let f2_values = st.stage_f2.clone();
        st.stages.push(StageSummary { f2_values, best_girth: stage_best, evaluated: st.stage_results.len() });
        let mut frontier: Vec<u64> = st.stage_results.iter().filter(|c| Some(c.girth) == stage_best).map(|c| c.f2).collect();
        frontier.sort_unstable();
        frontier.dedup();
        st.kept.extend(st.stage_results.drain(..).filter(|c| c.girth.reaches(cfg.girth_target)));
        st.kept.sort_by_key(Candidate::sort_key);
        st.kept.truncate(cfg.keep);

        let improved = stage_best > st.best;
        if st.stage > 0 && !improved {
            st.misses += 1;
        }
        st.best = st.best.max(stage_best);
        let next = next_stage(profile, cfg, &frontier, &st.tried_f2)?;
        if st.misses > cfg.patience || st.stage + 1 >= cfg.max_stages || next.is_empty() {
            st.done = true;
        } else {
            st.stage += 1;
            st.tried_f2.extend(next.iter().copied());
            st.stage_f2 = next;
            st.f2_index = 0;
            st.next_f1 = 1;
        }
        save(checkpoint, &st)?;
    }

    let mut candidates = st.kept.clone();
    let finals = cfg.finalists.min(candidates.len());
    let ranks: Vec<usize> = candidates[..finals]
        .par_iter()
        .map(|c| -> Result<usize> {
            let g = TannerGraph::build(*profile, Qpp::new(n, c.f1, c.f2)?)?;
            Ok(rank_gf2(&SparseBitMatrix::from_graph(&g)?))
        })
        .collect::<Result<_>>()?;
    for (c, r) in candidates.iter_mut().zip(ranks) {
        c.rank = Some(r);
    }
    Ok(SearchReport {
        profile: *profile,
        girth_target: cfg.girth_target,
        candidates,
        stages: st.stages,
        examined: st.examined,
        skipped: st.skipped,
    })
}
