//! GF(2) matrices: the sparse parity-check matrix, bit-packed rank, and the
//! quasi-cyclic rearrangement into circulant blocks.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::tanner::{automorphism_params, TannerGraph};

/// Sparse binary matrix stored row-wise, column indices strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBitMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<u32>,
}

impl SparseBitMatrix {
    /// Builds a matrix from per-row column lists. Lists are sorted; duplicate or
    /// out-of-range indices are rejected.
    pub fn from_rows(rows: usize, cols: usize, lists: Vec<Vec<usize>>) -> Result<Self> {
        if lists.len() != rows {
            return invalid(format!("expected {rows} rows, got {}", lists.len()));
        }
        let mut row_ptr = Vec::with_capacity(rows + 1);
        let mut col_idx = Vec::new();
        row_ptr.push(0);
        for (i, mut list) in lists.into_iter().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return invalid(format!("row {i} has a repeated column index"));
            }
            if list.last().is_some_and(|&c| c >= cols) {
                return invalid(format!("row {i} has a column index out of range"));
            }
            col_idx.extend(list.into_iter().map(|c| c as u32));
            row_ptr.push(col_idx.len());
        }
        Ok(SparseBitMatrix { rows, cols, row_ptr, col_idx })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseBitMatrix { rows, cols, row_ptr: vec![0; rows + 1], col_idx: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        SparseBitMatrix { rows: n, cols: n, row_ptr: (0..=n).collect(), col_idx: (0..n as u32).collect() }
    }

    /// Biadjacency matrix of a Tanner graph: rows are checks, columns variables.
    pub fn from_graph(graph: &TannerGraph) -> Result<Self> {
        if graph.has_parallel_edges() {
            return Err(Error::RejectedInput(format!(
                "graph has {} parallel edge pair(s); H would not match the graph",
                graph.parallel_edges().len()
            )));
        }
        let p = graph.profile();
        let lists = (0..p.r).map(|c| graph.check_vars(c).collect()).collect();
        Self::from_rows(p.r, p.n, lists)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.col_idx.len()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.row(i).binary_search(&(j as u32)).is_ok()
    }

    pub fn row_weights(&self) -> Vec<usize> {
        self.row_ptr.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn col_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.cols];
        for &c in &self.col_idx {
            w[c as usize] += 1;
        }
        w
    }

    /// Per-column row lists, rows increasing.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cols];
        for i in 0..self.rows {
            for &c in self.row(i) {
                out[c as usize].push(i);
            }
        }
        out
    }

    /// `H * word` over GF(2), `word[j] != 0` meaning bit one.
    pub fn syndrome(&self, word: &[u8]) -> Vec<u8> {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(0u8, |acc, &c| acc ^ (word[c as usize] & 1)))
            .collect()
    }

    pub fn syndrome_weight(&self, word: &[u8]) -> usize {
        (0..self.rows)
            .filter(|&i| self.row(i).iter().fold(0u8, |acc, &c| acc ^ (word[c as usize] & 1)) != 0)
            .count()
    }

    pub fn is_codeword(&self, word: &[u8]) -> bool {
        self.syndrome_weight(word) == 0
    }

    pub fn to_dense(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for &c in self.row(i) {
                m.set(i, c as usize);
            }
        }
        m
    }

    /// Applies row and column permutations: new row `i` is old row `row_perm[i]`,
    /// new column `j` is old column `col_perm[j]`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self> {
        if !is_permutation(row_perm, self.rows) || !is_permutation(col_perm, self.cols) {
            return invalid("not a permutation of the matrix dimensions");
        }
        let mut new_col = vec![0usize; self.cols];
        for (j, &old) in col_perm.iter().enumerate() {
            new_col[old] = j;
        }
        let lists = row_perm
            .iter()
            .map(|&old| self.row(old).iter().map(|&c| new_col[c as usize]).collect())
            .collect();
        Self::from_rows(self.rows, self.cols, lists)
    }
}

fn is_permutation(p: &[usize], len: usize) -> bool {
    if p.len() != len {
        return false;
    }
    let mut seen = vec![false; len];
    p.iter().all(|&x| x < len && !std::mem::replace(&mut seen[x], true))
}

/// Dense bit-packed matrix, 64 columns per word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        BitMatrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] |= 1 << (j % 64);
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    /// Rank over GF(2) by Gaussian elimination on a private copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let w = m.words;
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let (word, bit) = (col / 64, 1u64 << (col % 64));
            let Some(pivot) = (rank..m.rows).find(|&i| m.data[i * w + word] & bit != 0) else {
                continue;
            };
            if pivot != rank {
                for k in 0..w {
                    m.data.swap(pivot * w + k, rank * w + k);
                }
            }
            let (head, tail) = m.data.split_at_mut((rank + 1) * w);
            let prow = &head[rank * w..];
            for row in tail.chunks_exact_mut(w) {
                if row[word] & bit != 0 {
                    // Columns left of `word` are already clear in the pivot row.
                    for k in word..w {
                        row[k] ^= prow[k];
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row_words(i).iter().all(|&x| x == 0)
    }

    /// Ordered-statistics re-encoding. Pivots are taken greedily along
    /// `order` (least reliable first); the remaining columns form an
    /// information set and keep their value from `hard`. Returns the unique
    /// codeword of the null space agreeing with `hard` there.
    pub fn osd_reencode(&self, order: &[usize], hard: &[u8]) -> Vec<u8> {
        assert_eq!(hard.len(), self.cols, "hard decision length must equal column count");
        let mut m = self.clone();
        let w = m.words;
        let mut pivots = Vec::with_capacity(m.rows);
        for &col in order {
            let rank = pivots.len();
            if rank == m.rows {
                break;
            }
            let (word, bit) = (col / 64, 1u64 << (col % 64));
            let Some(p) = (rank..m.rows).find(|&i| m.data[i * w + word] & bit != 0) else {
                continue;
            };
            if p != rank {
                for k in 0..w {
                    m.data.swap(p * w + k, rank * w + k);
                }
            }
            let prow: Vec<u64> = m.row_words(rank).to_vec();
            for (i, row) in m.data.chunks_exact_mut(w).enumerate() {
                if i != rank && row[word] & bit != 0 {
                    row.iter_mut().zip(&prow).for_each(|(a, b)| *a ^= b);
                }
            }
            pivots.push(col);
        }
        let mut x = hard.to_vec();
        for &c in &pivots {
            x[c] = 0;
        }
        let mut packed = vec![0u64; w];
        for (j, &b) in x.iter().enumerate() {
            if b != 0 {
                packed[j / 64] |= 1 << (j % 64);
            }
        }
        for (r, &c) in pivots.iter().enumerate() {
            let ones: u32 = m.row_words(r).iter().zip(&packed).map(|(a, b)| (a & b).count_ones()).sum();
            x[c] = (ones & 1) as u8;
        }
        x
    }
}

/// Rank of `h` over GF(2).
pub fn rank_gf2(h: &SparseBitMatrix) -> usize {
    h.to_dense().rank()
}

/// Ordering used to expose the circulant structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QcLayout {
    /// Number of column residue classes.
    pub beta: usize,
    /// Number of row residue classes.
    pub gamma: usize,
    /// Step between consecutive rows inside a row class. Use the automorphism's
    /// check shift for circulant blocks; `gamma` gives the plain residue order.
    pub row_step: usize,
}

/// A rearranged matrix together with the permutations that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcForm {
    pub matrix: SparseBitMatrix,
    /// New row `i` is old row `row_perm[i]`.
    pub row_perm: Vec<usize>,
    /// New column `j` is old column `col_perm[j]`.
    pub col_perm: Vec<usize>,
    pub layout: QcLayout,
}

impl QcForm {
    /// Undoes the rearrangement.
    pub fn restore(&self) -> Result<SparseBitMatrix> {
        let mut inv_r = vec![0; self.row_perm.len()];
        for (i, &o) in self.row_perm.iter().enumerate() {
            inv_r[o] = i;
        }
        let mut inv_c = vec![0; self.col_perm.len()];
        for (j, &o) in self.col_perm.iter().enumerate() {
            inv_c[o] = j;
        }
        self.matrix.permute(&inv_r, &inv_c)
    }
}

/// Groups columns by residue mod `beta` (class `j` lists `j, j+beta, ...`) and
/// rows by residue mod `gamma` (class `i` lists `i, i+step, i+2 step, ...`).
pub fn qc_rearrange(h: &SparseBitMatrix, layout: QcLayout) -> Result<QcForm> {
    let QcLayout { beta, gamma, row_step } = layout;
    if beta == 0 || gamma == 0 || h.cols() % beta != 0 || h.rows() % gamma != 0 {
        return invalid(format!(
            "beta={beta} must divide n={} and gamma={gamma} must divide r={}",
            h.cols(),
            h.rows()
        ));
    }
    let (n, r) = (h.cols(), h.rows());
    let col_perm: Vec<usize> = (0..beta).flat_map(|j| (0..n / beta).map(move |b| j + b * beta)).collect();
    let row_perm: Vec<usize> = (0..gamma)
        .flat_map(|i| (0..r / gamma).map(move |a| (i + a * (row_step % r.max(1))) % r))
        .collect();
    if !is_permutation(&row_perm, r) {
        return invalid(format!("row step {row_step} does not cycle through each residue class mod {gamma}"));
    }
    let matrix = h.permute(&row_perm, &col_perm)?;
    Ok(QcForm { matrix, row_perm, col_perm, layout })
}

/// A grid of square circulant blocks, each stored as its first row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CirculantDecomposition {
    pub grid_rows: usize,
    pub grid_cols: usize,
    pub block_size: usize,
    /// `first_rows[i][j]` lists the set positions of block `(i, j)`'s first row.
    pub first_rows: Vec<Vec<Vec<usize>>>,
}

/// Splits `h` into `block_size x block_size` blocks and checks each one is
/// circulant, row `a` being row 0 cyclically shifted right by `a`.
pub fn decompose_circulant(h: &SparseBitMatrix, block_rows: usize, block_cols: usize) -> Result<CirculantDecomposition> {
    if block_rows != block_cols {
        return invalid(format!("blocks must be square, got {block_rows}x{block_cols}"));
    }
    let size = block_rows;
    if size == 0 || h.rows() % size != 0 || h.cols() % size != 0 {
        return invalid(format!("block size {size} does not tile a {}x{} matrix", h.rows(), h.cols()));
    }
    let (gr, gc) = (h.rows() / size, h.cols() / size);
    let mut first_rows = vec![vec![Vec::new(); gc]; gr];
    let mut buckets = vec![Vec::new(); gc];
    for bi in 0..gr {
        for a in 0..size {
            buckets.iter_mut().for_each(Vec::clear);
            for &c in h.row(bi * size + a) {
                let c = c as usize;
                buckets[c / size].push(c % size);
            }
            for (bj, local) in buckets.iter_mut().enumerate() {
                if a == 0 {
                    first_rows[bi][bj] = local.clone();
                    continue;
                }
                // Undo the shift and compare with row 0.
                for x in local.iter_mut() {
                    *x = (*x + size - a) % size;
                }
                local.sort_unstable();
                if *local != first_rows[bi][bj] {
                    return Err(Error::NotCirculant { block_row: bi, block_col: bj });
                }
            }
        }
    }
    Ok(CirculantDecomposition { grid_rows: gr, grid_cols: gc, block_size: size, first_rows })
}

/// Output of the full quasi-cyclic pipeline on a QPP graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QcAnalysis {
    pub form: QcForm,
    pub blocks: CirculantDecomposition,
    pub weights: WeightMatrix,
}

/// Rearranges the graph's H with its automorphism shifts, verifies every
/// `n/beta` block is circulant and collects the weight matrix.
pub fn qc_analysis(graph: &TannerGraph) -> Result<QcAnalysis> {
    let p = automorphism_params(graph.qpp(), graph.profile())?;
    let h = SparseBitMatrix::from_graph(graph)?;
    let layout = QcLayout { beta: p.beta as usize, gamma: p.gamma as usize, row_step: p.delta as usize };
    let form = qc_rearrange(&h, layout)?;
    let size = h.cols() / layout.beta;
    let blocks = decompose_circulant(&form.matrix, size, size)?;
    let weights = weight_matrix(&blocks);
    Ok(QcAnalysis { form, blocks, weights })
}

/// Row weights of the circulant blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl WeightMatrix {
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return invalid("weight matrix rows differ in length");
        }
        Ok(WeightMatrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(<[u32]>::to_vec).collect()
    }

    pub fn row_sums(&self) -> Vec<u32> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j)).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u32> {
        (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j)).sum()).collect()
    }

    /// Columns `cols` of this matrix, in the given order.
    pub fn select_cols(&self, cols: &[usize]) -> WeightMatrix {
        let data = (0..self.rows).flat_map(|i| cols.iter().map(move |&j| self.get(i, j))).collect();
        WeightMatrix { rows: self.rows, cols: cols.len(), data }
    }

    /// Rows not listed in `drop`.
    pub fn without_rows(&self, drop: &[usize]) -> WeightMatrix {
        let keep: Vec<usize> = (0..self.rows).filter(|i| !drop.contains(i)).collect();
        let data = keep.iter().flat_map(|&i| (0..self.cols).map(move |j| self.get(i, j))).collect();
        WeightMatrix { rows: keep.len(), cols: self.cols, data }
    }

    pub fn zero_rows(&self) -> Vec<usize> {
        (0..self.rows).filter(|&i| (0..self.cols).all(|j| self.get(i, j) == 0)).collect()
    }
}

pub fn weight_matrix(dec: &CirculantDecomposition) -> WeightMatrix {
    let rows = dec
        .first_rows
        .iter()
        .map(|row| row.iter().map(|b| b.len() as u32).collect())
        .collect();
    WeightMatrix::from_rows(rows).expect("grid rows have equal length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qpp::Qpp;
    use crate::tanner::{automorphism_params, CodeProfile};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn code_two() -> TannerGraph {
        let profile = CodeProfile::new(3, 6, 1008, 504, 3024).unwrap();
        TannerGraph::build(profile, Qpp::new(3024, 29, 42).unwrap()).unwrap()
    }

    fn naive_rank(mut m: Vec<Vec<u8>>) -> usize {
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            if let Some(p) = (rank..m.len()).find(|&i| m[i][c] == 1) {
                m.swap(rank, p);
                for i in 0..m.len() {
                    if i != rank && m[i][c] == 1 {
                        for k in 0..cols {
                            m[i][k] ^= m[rank][k];
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn identity_and_zero_rank() {
        assert_eq!(rank_gf2(&SparseBitMatrix::identity(130)), 130);
        assert_eq!(rank_gf2(&SparseBitMatrix::zeros(20, 70)), 0);
    }

    #[test]
    fn rank_matches_dense_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let density = rng.random_range(0.05..0.6);
            let dense: Vec<Vec<u8>> = (0..20)
                .map(|_| (0..40).map(|_| rng.random_bool(density) as u8).collect())
                .collect();
            let lists = dense
                .iter()
                .map(|r| r.iter().enumerate().filter(|x| *x.1 == 1).map(|x| x.0).collect())
                .collect();
            let h = SparseBitMatrix::from_rows(20, 40, lists).unwrap();
            assert_eq!(rank_gf2(&h), naive_rank(dense));
        }
    }

    #[test]
    fn parity_check_of_identity_graph() {
        let profile = CodeProfile::new(1, 1, 12, 12, 12).unwrap();
        let g = TannerGraph::build(profile, Qpp::new(12, 1, 0).unwrap()).unwrap();
        assert_eq!(SparseBitMatrix::from_graph(&g).unwrap(), SparseBitMatrix::identity(12));
    }

    #[test]
    fn parallel_edges_are_rejected() {
        let profile = CodeProfile::new(4, 4, 1, 1, 4).unwrap();
        let g = TannerGraph::build(profile, Qpp::new(4, 1, 0).unwrap()).unwrap();
        assert!(matches!(SparseBitMatrix::from_graph(&g), Err(Error::RejectedInput(_))));
    }

    #[test]
    fn code_two_full_rank_and_regular() {
        let h = SparseBitMatrix::from_graph(&code_two()).unwrap();
        assert_eq!((h.rows(), h.cols()), (504, 1008));
        assert!(h.col_weights().iter().all(|&w| w == 3));
        assert!(h.row_weights().iter().all(|&w| w == 6));
        assert_eq!(rank_gf2(&h), 504);
    }

    #[test]
    fn trivial_layout_is_identity() {
        let h = SparseBitMatrix::from_graph(&code_two()).unwrap();
        let qc = qc_rearrange(&h, QcLayout { beta: 1, gamma: 1, row_step: 1 }).unwrap();
        assert_eq!(qc.matrix, h);
    }

    #[test]
    fn bad_layout_is_rejected() {
        let h = SparseBitMatrix::from_graph(&code_two()).unwrap();
        assert!(qc_rearrange(&h, QcLayout { beta: 5, gamma: 6, row_step: 6 }).is_err());
        // A step that does not generate each class.
        assert!(qc_rearrange(&h, QcLayout { beta: 12, gamma: 6, row_step: 12 }).is_err());
    }

    #[test]
    fn code_two_circulant_form() {
        let g = code_two();
        let p = automorphism_params(g.qpp(), g.profile()).unwrap();
        let h = SparseBitMatrix::from_graph(&g).unwrap();
        let layout = QcLayout { beta: p.beta as usize, gamma: p.gamma as usize, row_step: p.delta as usize };
        let qc = qc_rearrange(&h, layout).unwrap();
        assert_eq!(qc.restore().unwrap(), h);
        let dec = decompose_circulant(&qc.matrix, 84, 84).unwrap();
        assert_eq!((dec.grid_rows, dec.grid_cols), (6, 12));
        let a = weight_matrix(&dec);
        assert!(a.row_sums().iter().all(|&s| s == 6));
        assert!(a.col_sums().iter().all(|&s| s == 3));
        assert_eq!(a.to_rows()[0], vec![1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 1, 2]);
    }

    #[test]
    fn plain_residue_rows_are_not_circulant() {
        let g = code_two();
        let p = automorphism_params(g.qpp(), g.profile()).unwrap();
        let h = SparseBitMatrix::from_graph(&g).unwrap();
        let layout = QcLayout { beta: p.beta as usize, gamma: p.gamma as usize, row_step: p.gamma as usize };
        let qc = qc_rearrange(&h, layout).unwrap();
        assert!(matches!(decompose_circulant(&qc.matrix, 84, 84), Err(Error::NotCirculant { .. })));
    }

    #[test]
    fn zero_matrix_decomposes_to_zero_weights() {
        let dec = decompose_circulant(&SparseBitMatrix::zeros(12, 24), 4, 4).unwrap();
        let a = weight_matrix(&dec);
        assert_eq!((a.rows(), a.cols()), (3, 6));
        assert!(a.row_sums().iter().all(|&s| s == 0));
    }

    #[test]
    fn syndrome_of_single_bit_is_column_weight() {
        let h = SparseBitMatrix::from_graph(&code_two()).unwrap();
        let mut w = vec![0u8; 1008];
        w[17] = 1;
        assert_eq!(h.syndrome_weight(&w), 3);
        assert_eq!(h.syndrome_weight(&vec![0u8; 1008]), 0);
    }

    #[test]
    fn from_rows_validation() {
        assert!(SparseBitMatrix::from_rows(1, 3, vec![vec![0, 0]]).is_err());
        assert!(SparseBitMatrix::from_rows(1, 3, vec![vec![3]]).is_err());
        assert!(SparseBitMatrix::from_rows(2, 3, vec![vec![0]]).is_err());
        let m = SparseBitMatrix::from_rows(1, 3, vec![vec![2, 0]]).unwrap();
        assert_eq!(m.row(0), &[0, 2]);
    }
}
