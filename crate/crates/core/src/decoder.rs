//! Sum-product belief propagation in the LLR domain, flooding schedule.
//!
//! Positive LLR means bit 0. Messages are clamped to `±LLR_MAX` so that the
//! tanh-product never has to invert an exact `±1`.

use crate::gf2::SparseBitMatrix;

/// Message clamp.
pub const LLR_MAX: f64 = 38.0;

#[derive(Clone, Debug, PartialEq)]
pub struct DecodeResult {
    /// Hard decisions, one byte per bit (0 or 1).
    pub word: Vec<u8>,
    /// True iff the syndrome of `word` is zero.
    pub converged: bool,
    pub iterations: usize,
    pub syndrome_weight: usize,
    /// Syndrome weight after each iteration, when tracing is on.
    pub trace: Option<Vec<usize>>,
}

/// Decoder state for one parity-check matrix. Not shared between threads;
/// create one per worker.
#[derive(Clone, Debug)]
pub struct BpDecoder {
    n: usize,
    /// Check-major edge layout: edges of check `c` are `check_ptr[c]..check_ptr[c+1]`.
    check_ptr: Vec<usize>,
    edge_var: Vec<u32>,
    /// Edges of variable `v` are `var_edges[var_ptr[v]..var_ptr[v+1]]`.
    var_ptr: Vec<usize>,
    var_edges: Vec<u32>,
    v2c: Vec<f64>,
    c2v: Vec<f64>,
    scratch: Vec<f64>,
    posterior: Vec<f64>,
    record_trace: bool,
}

impl BpDecoder {
    pub fn new(h: &SparseBitMatrix) -> Self {
        let n = h.cols();
        let mut check_ptr = Vec::with_capacity(h.rows() + 1);
        let mut edge_var = Vec::with_capacity(h.nnz());
        check_ptr.push(0);
        for c in 0..h.rows() {
            edge_var.extend_from_slice(h.row(c));
            check_ptr.push(edge_var.len());
        }
        let mut var_ptr = vec![0usize; n + 1];
        for &v in &edge_var {
            var_ptr[v as usize + 1] += 1;
        }
        for v in 0..n {
            var_ptr[v + 1] += var_ptr[v];
        }
        let mut fill = var_ptr.clone();
        let mut var_edges = vec![0u32; edge_var.len()];
        for (e, &v) in edge_var.iter().enumerate() {
            var_edges[fill[v as usize]] = e as u32;
            fill[v as usize] += 1;
        }
        let max_deg = check_ptr.windows(2).map(|w| w[1] - w[0]).max().unwrap_or(0);
        let edges = edge_var.len();
        BpDecoder {
            n,
            check_ptr,
            edge_var,
            var_ptr,
            var_edges,
            v2c: vec![0.0; edges],
            c2v: vec![0.0; edges],
            scratch: vec![0.0; 2 * max_deg + 2],
            posterior: vec![0.0; n],
            record_trace: false,
        }
    }

    pub fn with_trace(mut self, on: bool) -> Self {
        self.record_trace = on;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Posterior LLRs after the last iteration of the last decode.
    pub fn posteriors(&self) -> &[f64] {
        &self.posterior
    }

    pub fn decode(&mut self, llrs: &[f64], max_iters: usize) -> DecodeResult {
        assert_eq!(llrs.len(), self.n, "LLR vector length must equal code length");
        assert!(llrs.iter().all(|x| x.is_finite()), "channel LLRs must be finite");
        assert!(max_iters >= 1, "at least one iteration is required");

        for (e, &v) in self.edge_var.iter().enumerate() {
            self.v2c[e] = llrs[v as usize].clamp(-LLR_MAX, LLR_MAX);
        }
        let mut word = vec![0u8; self.n];
        let mut trace = self.record_trace.then(Vec::new);
        let mut syndrome = usize::MAX;
        let mut iterations = 0;

        for it in 1..=max_iters {
            iterations = it;
            self.check_update();
            self.variable_update(llrs, &mut word);
            syndrome = self.syndrome_weight(&word);
            if let Some(t) = trace.as_mut() {
                t.push(syndrome);
            }
            if syndrome == 0 {
                break;
            }
        }
        DecodeResult { word, converged: syndrome == 0, iterations, syndrome_weight: syndrome, trace }
    }

    fn check_update(&mut self) {
        let rows = self.check_ptr.len() - 1;
        for c in 0..rows {
            let (lo, hi) = (self.check_ptr[c], self.check_ptr[c + 1]);
            let d = hi - lo;
            if d == 0 {
                continue;
            }
            // scratch[0..d] holds tanh(m/2), scratch[d..2d+1] suffix products.
            let (t, suffix) = self.scratch.split_at_mut(d);
            for k in 0..d {
                t[k] = tanh_half(self.v2c[lo + k]);
            }
            suffix[d] = 1.0;
            for k in (0..d).rev() {
                suffix[k] = suffix[k + 1] * t[k];
            }
            let mut prefix = 1.0;
            for k in 0..d {
                let p = prefix * suffix[k + 1];
                self.c2v[lo + k] = two_atanh(p).clamp(-LLR_MAX, LLR_MAX);
                prefix *= t[k];
            }
        }
    }

    fn variable_update(&mut self, llrs: &[f64], word: &mut [u8]) {
        for v in 0..self.n {
            let edges = &self.var_edges[self.var_ptr[v]..self.var_ptr[v + 1]];
            let total = llrs[v] + edges.iter().map(|&e| self.c2v[e as usize]).sum::<f64>();
            word[v] = (total < 0.0) as u8;
            self.posterior[v] = total;
            for &e in edges {
                let e = e as usize;
                self.v2c[e] = (total - self.c2v[e]).clamp(-LLR_MAX, LLR_MAX);
            }
        }
    }

    fn syndrome_weight(&self, word: &[u8]) -> usize {
        self.check_ptr
            .windows(2)
            .filter(|w| self.edge_var[w[0]..w[1]].iter().fold(0u8, |a, &v| a ^ word[v as usize]) != 0)
            .count()
    }
}

/// `tanh(x / 2)` via one `exp`. Absolute error stays near machine epsilon,
/// which is all the product needs.
#[inline]
fn tanh_half(x: f64) -> f64 {
    (1.0 - 2.0 / (x.abs().exp() + 1.0)).copysign(x)
}

/// `2 atanh(p)` via one `ln`.
#[inline]
fn two_atanh(p: f64) -> f64 {
    let a = p.abs();
    ((1.0 + a) / (1.0 - a)).ln().copysign(p)
}

/// One-shot decode; builds a fresh decoder.
pub fn bp_decode(h: &SparseBitMatrix, llrs: &[f64], max_iters: usize) -> DecodeResult {
    BpDecoder::new(h).decode(llrs, max_iters)
}

/// Hamming weight of `H * word`.
pub fn syndrome_weight(h: &SparseBitMatrix, word: &[u8]) -> usize {
    h.syndrome_weight(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpp::Qpp;
    use crate::tanner::{CodeProfile, TannerGraph};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn hamming() -> SparseBitMatrix {
        SparseBitMatrix::from_rows(
            3,
            7,
            vec![vec![0, 1, 2, 4], vec![0, 1, 3, 5], vec![0, 2, 3, 6]],
        )
        .unwrap()
    }

    fn code_one() -> SparseBitMatrix {
        let profile = CodeProfile::new(3, 6, 504, 252, 1512).unwrap();
        let g = TannerGraph::build(profile, Qpp::new(1512, 5, 210).unwrap()).unwrap();
        SparseBitMatrix::from_graph(&g).unwrap()
    }

    #[test]
    fn noiseless_converges_at_once() {
        let h = code_one();
        let r = bp_decode(&h, &vec![20.0; 504], 80);
        assert!(r.converged);
        assert_eq!(r.iterations, 1);
        assert!(r.word.iter().all(|&b| b == 0));
    }

    #[test]
    fn zero_llrs_terminate() {
        let h = hamming();
        let mut dec = BpDecoder::new(&h).with_trace(true);
        let r = dec.decode(&[0.0; 7], 25);
        // All-zero hard decision is a codeword, so this converges immediately.
        assert!(r.converged);
        let h = code_one();
        let r = bp_decode(&h, &vec![0.0; 504], 10);
        assert!(r.iterations <= 10);
    }

    #[test]
    fn corrects_single_error_in_hamming() {
        let h = hamming();
        for pos in 0..7 {
            let mut llrs = [4.0; 7];
            llrs[pos] = -1.0;
            let r = bp_decode(&h, &llrs, 20);
            assert!(r.converged);
            assert_eq!(r.word, vec![0; 7], "flip at {pos}");
        }
    }

    #[test]
    fn converged_means_zero_syndrome() {
        let h = code_one();
        let mut dec = BpDecoder::new(&h);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let llrs: Vec<f64> = (0..504).map(|_| rng.random_range(-1.0..4.0)).collect();
            let r = dec.decode(&llrs, 30);
            assert_eq!(r.converged, h.syndrome_weight(&r.word) == 0);
            assert_eq!(r.syndrome_weight, h.syndrome_weight(&r.word));
        }
    }

    #[test]
    fn sign_flip_gives_complementary_decisions() {
        // Every row of code I has even weight, so the all-ones word is a codeword.
        let h = code_one();
        let mut dec = BpDecoder::new(&h);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let llrs: Vec<f64> = (0..504).map(|_| rng.random_range(-2.0..5.0)).collect();
            let neg: Vec<f64> = llrs.iter().map(|x| -x).collect();
            let a = dec.decode(&llrs, 40);
            let b = dec.decode(&neg, 40);
            assert_eq!(a.converged, b.converged);
            assert_eq!(a.iterations, b.iterations);
            assert!(a.word.iter().zip(&b.word).all(|(x, y)| x ^ y == 1));
        }
    }

    #[test]
    fn large_llrs_stay_finite() {
        let h = code_one();
        let mut llrs = vec![50.0; 504];
        llrs[3] = -50.0;
        llrs[100] = -50.0;
        let mut dec = BpDecoder::new(&h);
        let r = dec.decode(&llrs, 20);
        assert!(dec.c2v.iter().chain(&dec.v2c).all(|x| x.is_finite()));
        assert_eq!(r.converged, h.syndrome_weight(&r.word) == 0);
    }

    #[test]
    fn trace_records_each_iteration() {
        let h = code_one();
        let mut llrs = vec![2.0; 504];
        llrs[0] = -1.0;
        let r = BpDecoder::new(&h).with_trace(true).decode(&llrs, 10);
        assert_eq!(r.trace.unwrap().len(), r.iterations);
    }
}
