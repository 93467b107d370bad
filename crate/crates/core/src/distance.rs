//! Upper bounds on the minimum distance.
//!
//! Two independent routes:
//! - a permanent bound on the circulant weight matrix `A` (`k x m`): for every
//!   column set `S` with `|S| = k + 1`, `psi(S)` is the sum over the `k`-subsets
//!   `S'` of `S` of `perm(A[:, S'])`; the smallest nonzero `psi(S)` bounds `d_min`.
//!   Column sets whose submatrix has an all-zero row can be refined by dropping
//!   that row and recursing;
//! - a nearest-nonzero-codeword search that pins one or two positions to 1 and
//!   lets belief propagation find a nearby codeword.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoder::BpDecoder;
use crate::error::{invalid, Error, Result};
use crate::gf2::{SparseBitMatrix, WeightMatrix};

/// Largest matrix handled by [`permanent`].
pub const MAX_PERMANENT_DIM: usize = 24;

/// Permanent of a square matrix by Ryser's formula with Gray-code updates.
pub fn permanent(m: &[Vec<u64>]) -> Result<u64> {
    let k = m.len();
    if m.iter().any(|row| row.len() != k) {
        return invalid("permanent needs a square matrix");
    }
    if k > MAX_PERMANENT_DIM {
        return Err(Error::BudgetExceeded(format!("permanent of a {k}x{k} matrix")));
    }
    if k == 0 {
        return Ok(1);
    }
    let mut sums = vec![0i128; k];
    let mut total: i128 = 0;
    let mut gray: u64 = 0;
    for step in 1u64..(1u64 << k) {
        let j = step.trailing_zeros() as usize;
        gray ^= 1 << j;
        let add = gray >> j & 1 == 1;
        for (s, row) in sums.iter_mut().zip(m) {
            if add {
                *s += row[j] as i128;
            } else {
                *s -= row[j] as i128;
            }
        }
        let prod: i128 = sums.iter().product();
        if gray.count_ones() % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    if k % 2 == 1 {
        total = -total;
    }
    Ok(total as u64)
}

fn submatrix(a: &WeightMatrix, cols: &[usize]) -> Vec<Vec<u64>> {
    (0..a.rows()).map(|i| cols.iter().map(|&j| a.get(i, j) as u64).collect()).collect()
}

/// `psi(S)`: sum of the permanents of `A` restricted to each `(|S|-1)`-subset of `S`.
pub fn psi(a: &WeightMatrix, s: &[usize]) -> Result<u64> {
    if s.len() != a.rows() + 1 {
        return invalid(format!("|S| = {} but A has {} rows; need rows + 1", s.len(), a.rows()));
    }
    if s.iter().any(|&j| j >= a.cols()) {
        return invalid("column index out of range");
    }
    let mut total = 0;
    for skip in 0..s.len() {
        let cols: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &j)| j).collect();
        total += permanent(&submatrix(a, &cols))?;
    }
    Ok(total)
}

/// `psi(S)` computed as the permanent of `A[:, S]` with an all-ones row appended,
/// expanded row by row over the set of used columns. Fast when `A` is sparse.
fn psi_sparse(a: &WeightMatrix, s: &[usize]) -> u64 {
    let mut rows: Vec<Vec<(u32, u64)>> = (0..a.rows())
        .map(|i| {
            s.iter()
                .enumerate()
                .filter_map(|(b, &j)| {
                    let w = a.get(i, j) as u64;
                    (w > 0).then_some((b as u32, w))
                })
                .collect()
        })
        .collect();
    if rows.iter().any(Vec::is_empty) {
        return 0;
    }
    rows.sort_by_key(Vec::len);
    let mut states: HashMap<u64, u64> = HashMap::from([(0u64, 1u64)]);
    for row in &rows {
        let mut next = HashMap::with_capacity(states.len() * row.len());
        for (&mask, &count) in &states {
            for &(b, w) in row {
                if mask >> b & 1 == 0 {
                    *next.entry(mask | 1 << b).or_insert(0) += count * w;
                }
            }
        }
        if next.is_empty() {
            return 0;
        }
        states = next;
    }
    // The appended all-ones row takes whichever column is left.
    states.values().sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubBound {
    /// Column set of the parent matrix with `psi = 0`.
    pub columns: Vec<usize>,
    /// Rows of the parent that were all zero on `columns`.
    pub removed_rows: Vec<usize>,
    pub bound: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundResult {
    /// `None` when every column set has `psi = 0`.
    pub bound: Option<u64>,
    /// Minimizing column set (0-based, increasing). Lexicographically smallest on ties.
    pub columns: Vec<usize>,
    /// Whether the recursive refinement lowered the bound.
    pub improved: bool,
    /// Number of column sets with `psi = 0`.
    pub zero_sets: u64,
    /// One entry per refined zero set (recursive bound only).
    pub refinements: Vec<SubBound>,
}

/// Enumerates the column sets of size `rows + 1` that cover every row.
fn for_each_covering_set(a: &WeightMatrix, first: usize, mut visit: impl FnMut(&[usize])) {
    let k = a.rows() + 1;
    let m = a.cols();
    let last_nz: Vec<Option<usize>> = (0..a.rows()).map(|i| (0..m).rev().find(|&j| a.get(i, j) > 0)).collect();
    let mut chosen = vec![first];
    let mut cover: Vec<u32> = (0..a.rows()).map(|i| (a.get(i, first) > 0) as u32).collect();

    fn rec(
        a: &WeightMatrix,
        k: usize,
        last_nz: &[Option<usize>],
        chosen: &mut Vec<usize>,
        cover: &mut [u32],
        next: usize,
        visit: &mut dyn FnMut(&[usize]),
    ) {
        let m = a.cols();
        // Every uncovered row needs a nonzero at or after `next`.
        for (i, &c) in cover.iter().enumerate() {
            if c == 0 && last_nz[i].is_none_or(|l| l < next) {
                return;
            }
        }
        if chosen.len() == k {
            visit(chosen);
            return;
        }
        if m - next < k - chosen.len() {
            return;
        }
        for j in next..m {
            if m - j < k - chosen.len() {
                break;
            }
            chosen.push(j);
            for (i, c) in cover.iter_mut().enumerate() {
                *c += (a.get(i, j) > 0) as u32;
            }
            rec(a, k, last_nz, chosen, cover, j + 1, visit);
            for (i, c) in cover.iter_mut().enumerate() {
                *c -= (a.get(i, j) > 0) as u32;
            }
            chosen.pop();
        }
    }
    rec(a, k, &last_nz, &mut chosen, &mut cover, first + 1, &mut visit);
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Minimum of `psi(S)` over column sets `S` of size `rows + 1` with `psi(S) != 0`.
pub fn dmin_upper_bound(a: &WeightMatrix) -> Result<BoundResult> {
    let k = a.rows() + 1;
    if a.rows() == 0 || a.cols() < k {
        return invalid(format!("need at least rows + 1 columns, got {}x{}", a.rows(), a.cols()));
    }
    let best = AtomicU64::new(u64::MAX);
    let per_first: Vec<(Option<(u64, Vec<usize>)>, u64)> = (0..=a.cols() - k)
        .into_par_iter()
        .map(|first| {
            let mut local: Option<(u64, Vec<usize>)> = None;
            let mut nonzero = 0u64;
            for_each_covering_set(a, first, |s| {
                let p = psi_sparse(a, s);
                if p == 0 {
                    return;
                }
                nonzero += 1;
                best.fetch_min(p, Ordering::Relaxed);
                if local.as_ref().is_none_or(|(b, _)| p < *b) {
                    local = Some((p, s.to_vec()));
                }
            });
            (local, nonzero)
        })
        .collect();
    let nonzero: u64 = per_first.iter().map(|x| x.1).sum();
    // Firsts are in increasing order and each local minimum is the first hit,
    // so a strict comparison keeps the lexicographically smallest set.
    let winner = per_first.into_iter().filter_map(|x| x.0).fold(None::<(u64, Vec<usize>)>, |acc, cand| match acc {
        Some(ref b) if b.0 <= cand.0 => acc,
        _ => Some(cand),
    });
    let zero_sets = binomial(a.cols(), k) - nonzero;
    Ok(match winner {
        Some((bound, columns)) => BoundResult { bound: Some(bound), columns, improved: false, zero_sets, refinements: vec![] },
        None => BoundResult { bound: None, columns: vec![], improved: false, zero_sets, refinements: vec![] },
    })
}

/// [`dmin_upper_bound`], then for each column set whose submatrix has all-zero
/// rows, drop those rows and apply the bound again (recursively) to the
/// smaller matrix. The result is the minimum over all of these.
pub fn dmin_recursive(a: &WeightMatrix) -> Result<BoundResult> {
    let mut memo = HashMap::new();
    recursive_inner(a, &mut memo, true)
}

fn recursive_inner(
    a: &WeightMatrix,
    memo: &mut HashMap<Vec<Vec<u32>>, Option<u64>>,
    top: bool,
) -> Result<BoundResult> {
    let mut base = dmin_upper_bound(a)?;
    let k = a.rows() + 1;
    let mut best = base.bound;
    let mut best_cols = base.columns.clone();
    let mut improved = false;
    let mut refinements = Vec::new();

    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        let sub = a.select_cols(&combo);
        let zero = sub.zero_rows();
        if !zero.is_empty() && zero.len() < a.rows() {
            let reduced = sub.without_rows(&zero);
            let key = reduced.to_rows();
            let bound = match memo.get(&key) {
                Some(&b) => b,
                None => {
                    let b = recursive_inner(&reduced, memo, false)?.bound;
                    memo.insert(key, b);
                    b
                }
            };
            if let Some(b) = bound {
                if best.is_none_or(|x| b < x) {
                    best = Some(b);
                    best_cols = combo.clone();
                    improved = true;
                }
            }
            if top {
                refinements.push(SubBound { columns: combo.clone(), removed_rows: zero, bound });
            }
        }
        if !next_combination(&mut combo, a.cols()) {
            break;
        }
    }
    base.bound = best;
    base.columns = best_cols;
    base.improved = improved;
    base.refinements = refinements;
    Ok(base)
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NncsMode {
    /// Pin one position.
    Single,
    /// Pin two positions ("two position bit reverse").
    Pair,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NncsConfig {
    /// LLR magnitude pushing a pinned position towards 1.
    pub bias: f64,
    /// Reliability of the remaining positions, tried in order for every pin.
    pub zero_llrs: Vec<f64>,
    /// Relative random spread applied to the unpinned LLRs (0 disables).
    pub jitter: f64,
    pub mode: NncsMode,
    pub max_iters: usize,
    /// Maximum number of decoder runs.
    pub budget: usize,
    pub seed: u64,
    /// Automorphism shift: positions `i` and `i + shift` are equivalent, so
    /// only `0..shift` are used as the first pinned position.
    pub class_shift: Option<usize>,
    /// Complete non-converged decodes by re-encoding on the most reliable
    /// information set containing the pinned positions.
    pub reencode: bool,
}

impl Default for NncsConfig {
    fn default() -> Self {
        NncsConfig {
            bias: 2.0,
            zero_llrs: vec![1.0],
            jitter: 0.0,
            mode: NncsMode::Pair,
            max_iters: 20,
            budget: 10_000,
            seed: 0,
            class_shift: None,
            reencode: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NncsHit {
    pub pinned: Vec<usize>,
    pub weight: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NncsResult {
    /// Lowest codeword weight found; `None` means no upper bound was obtained.
    pub best_weight: Option<usize>,
    /// Support of that codeword.
    pub codeword: Vec<usize>,
    pub decodes: usize,
    /// Every nonzero codeword hit, in trial order.
    pub log: Vec<NncsHit>,
}

fn trials(n: usize, cfg: &NncsConfig) -> Vec<(Vec<usize>, usize)> {
    let reps = cfg.class_shift.filter(|&s| s > 0 && n % s == 0).unwrap_or(n);
    let levels = cfg.zero_llrs.len().max(1);
    let mut out = Vec::new();
    match cfg.mode {
        NncsMode::Single => {
            for level in 0..levels {
                for i in 0..reps {
                    out.push((vec![i], level));
                }
            }
        }
        NncsMode::Pair => {
            for level in 0..levels {
                for i in 0..reps {
                    for j in i + 1..n {
                        out.push((vec![i, j], level));
                    }
                }
            }
        }
    }
    out.truncate(cfg.budget);
    out
}

/// Nearest-nonzero-codeword search. Every reported word is checked against `h`.
pub fn nncs_search(h: &SparseBitMatrix, cfg: &NncsConfig) -> Result<NncsResult> {
    if cfg.budget == 0 || cfg.max_iters == 0 {
        return invalid("budget and iteration cap must be positive");
    }
    if cfg.zero_llrs.iter().any(|&z| !(z.is_finite() && z > 0.0)) || !(cfg.bias.is_finite() && cfg.bias > 0.0) {
        return invalid("bias and zero LLRs must be finite and positive");
    }
    let n = h.cols();
    let list = trials(n, cfg);
    let zero_llrs = if cfg.zero_llrs.is_empty() { vec![1.0] } else { cfg.zero_llrs.clone() };

    let dense = cfg.reencode.then(|| h.to_dense());

    let found: Vec<Option<Vec<usize>>> = list
        .par_iter()
        .enumerate()
        .map_init(
            || (BpDecoder::new(h), vec![0.0; n], Vec::with_capacity(n)),
            |(dec, llrs, order), (t, (pins, level))| {
                let z = zero_llrs[*level];
                if cfg.jitter > 0.0 {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    rng.set_stream(t as u64);
                    llrs.iter_mut().for_each(|x| *x = z * (1.0 + cfg.jitter * rng.random_range(-1.0..1.0)));
                } else {
                    llrs.iter_mut().for_each(|x| *x = z);
                }
                for &p in pins {
                    llrs[p] = -cfg.bias;
                }
                let r = dec.decode(llrs, cfg.max_iters);
                let mut word = r.word;
                if !(r.converged && word.contains(&1)) {
                    let dense = dense.as_ref()?;
                    let post = dec.posteriors();
                    for &p in pins {
                        word[p] = 1;
                    }
                    order.clear();
                    order.extend((0..n).filter(|v| !pins.contains(v)));
                    order.sort_by(|&a: &usize, &b: &usize| post[a].abs().total_cmp(&post[b].abs()).then(a.cmp(&b)));
                    order.extend_from_slice(pins);
                    word = dense.osd_reencode(order, &word);
                }
                let support: Vec<usize> = (0..n).filter(|&v| word[v] == 1).collect();
                (!support.is_empty()).then_some(support)
            },
        )
        .collect();

    let mut result = NncsResult { best_weight: None, codeword: vec![], decodes: list.len(), log: vec![] };
    for ((pins, _), hit) in list.iter().zip(found) {
        let Some(support) = hit else { continue };
        let mut word = vec![0u8; n];
        support.iter().for_each(|&v| word[v] = 1);
        if !h.is_codeword(&word) {
            return Err(Error::InvalidArgument("search produced a word outside the code".into()));
        }
        let w = support.len();
        result.log.push(NncsHit { pinned: pins.clone(), weight: w });
        if result.best_weight.is_none_or(|b| w < b) {
            result.best_weight = Some(w);
            result.codeword = support;
        }
    }
    Ok(result)
}
