//! Tanner graphs induced by a QPP, their girth, and their symmetries.
//!
//! Edge `i` has left-label `i` and right-label `f(i)`. Variable node `v` owns the
//! left-labels `v*lambda .. v*lambda + lambda`, check node `c` owns the right-labels
//! `c*rho .. c*rho + rho`. So edge `i` joins variable `i / lambda` to check
//! `f(i) / rho`.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::qpp::Qpp;

/// Degree and size parameters of a `(lambda, rho)`-regular code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeProfile {
    pub lambda: usize,
    pub rho: usize,
    pub n: usize,
    pub r: usize,
    #[serde(rename = "N")]
    pub edges: usize,
}

impl CodeProfile {
    pub fn new(lambda: usize, rho: usize, n: usize, r: usize, edges: usize) -> Result<Self> {
        let p = CodeProfile { lambda, rho, n, r, edges };
        p.validate()?;
        Ok(p)
    }

    /// Profile with `edges` edges; `n` and `r` follow from the degrees.
    pub fn from_edges(lambda: usize, rho: usize, edges: usize) -> Result<Self> {
        if lambda == 0 || rho == 0 {
            return invalid("degrees must be positive");
        }
        Self::new(lambda, rho, edges / lambda, edges / rho, edges)
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambda < 1 || self.rho < 1 {
            return invalid(format!("degrees must be positive (lambda={}, rho={})", self.lambda, self.rho));
        }
        if self.n * self.lambda != self.edges || self.r * self.rho != self.edges {
            return invalid(format!(
                "inconsistent profile: n*lambda = {}, r*rho = {}, N = {}",
                self.n * self.lambda,
                self.r * self.rho,
                self.edges
            ));
        }
        Ok(())
    }

    /// `lcm(lambda, rho)`.
    pub fn alpha(&self) -> usize {
        self.lambda.lcm(&self.rho)
    }
}

/// Node of the bipartite graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Var(usize),
    Check(usize),
}

/// The bipartite multigraph generated by a QPP.
#[derive(Clone, Debug)]
pub struct TannerGraph {
    profile: CodeProfile,
    qpp: Qpp,
    /// `right[i] = f(i)`.
    right: Vec<u32>,
    /// `left[j] = g(j)`, the edge whose right-label is `j`.
    left: Vec<u32>,
    /// Pairs of distinct edges joining the same variable/check pair.
    parallel: Vec<(usize, usize)>,
}

impl TannerGraph {
    pub fn build(profile: CodeProfile, qpp: Qpp) -> Result<Self> {
        profile.validate()?;
        if qpp.modulus() as usize != profile.edges {
            return invalid(format!(
                "polynomial modulus {} does not match edge count {}",
                qpp.modulus(),
                profile.edges
            ));
        }
        let right = qpp.table();
        let mut left = vec![0u32; right.len()];
        for (i, &j) in right.iter().enumerate() {
            left[j as usize] = i as u32;
        }
        let mut parallel = Vec::new();
        let (lam, rho) = (profile.lambda, profile.rho);
        for v in 0..profile.n {
            let base = v * lam;
            for a in 0..lam {
                for b in a + 1..lam {
                    if right[base + a] as usize / rho == right[base + b] as usize / rho {
                        parallel.push((base + a, base + b));
                    }
                }
            }
        }
        Ok(TannerGraph { profile, qpp, right, left, parallel })
    }

    pub fn profile(&self) -> &CodeProfile {
        &self.profile
    }

    pub fn qpp(&self) -> &Qpp {
        &self.qpp
    }

    pub fn parallel_edges(&self) -> &[(usize, usize)] {
        &self.parallel
    }

    pub fn has_parallel_edges(&self) -> bool {
        !self.parallel.is_empty()
    }

    /// Check node at the far end of edge `e`.
    #[inline]
    pub fn edge_check(&self, e: usize) -> usize {
        self.right[e] as usize / self.profile.rho
    }

    /// Variable node at the near end of edge `e`.
    #[inline]
    pub fn edge_var(&self, e: usize) -> usize {
        e / self.profile.lambda
    }

    /// Check neighbours of variable `v`, one per incident edge.
    pub fn var_checks(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let lam = self.profile.lambda;
        (v * lam..(v + 1) * lam).map(move |e| self.edge_check(e))
    }

    /// Variable neighbours of check `c`, one per incident edge.
    pub fn check_vars(&self, c: usize) -> impl Iterator<Item = usize> + '_ {
        let rho = self.profile.rho;
        self.left[c * rho..(c + 1) * rho]
            .iter()
            .map(move |&e| e as usize / self.profile.lambda)
    }

    /// Edge ids incident to check `c`.
    pub fn check_edges(&self, c: usize) -> &[u32] {
        let rho = self.profile.rho;
        &self.left[c * rho..(c + 1) * rho]
    }

    /// All `(check, variable)` pairs, one per edge, in edge order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.profile.edges).map(move |e| (self.edge_check(e), self.edge_var(e)))
    }

    /// Whether `v -> v + var_shift`, `c -> c + check_shift` maps the edge
    /// multiset onto itself.
    pub fn is_automorphism(&self, var_shift: usize, check_shift: usize) -> bool {
        let CodeProfile { n, r, .. } = self.profile;
        let mut a = Vec::with_capacity(self.profile.lambda);
        let mut b = Vec::with_capacity(self.profile.lambda);
        (0..n).all(|v| {
            a.clear();
            b.clear();
            a.extend(self.var_checks(v).map(|c| (c + check_shift) % r));
            b.extend(self.var_checks((v + var_shift) % n));
            a.sort_unstable();
            b.sort_unstable();
            a == b
        })
    }
}

/// Automorphism parameters of a QPP graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismParams {
    /// `gcd(2 f2, N)`.
    pub u: u64,
    /// `lcm(N/u, lambda) / lambda`.
    pub t: u64,
    /// Variable-node shift of the automorphism.
    pub beta: u64,
    /// `beta * lambda / rho`, the size of the check-node classes.
    pub gamma: u64,
    /// Check-node shift that accompanies a variable shift of `beta`, i.e.
    /// `f(beta * lambda) / rho mod r`. Always a multiple of `gamma`.
    pub delta: u64,
}

/// Computes `u`, `t`, `beta`, `gamma` and the check shift `delta`.
///
/// `beta = m t` for the smallest `m >= 1` with `rho | f(m t lambda)`. Shifting
/// every variable by `m t` moves edge labels by `m t lambda`, a multiple of
/// `N/u`, which moves right-labels by the constant `f(m t lambda)`.
pub fn automorphism_params(f: &Qpp, profile: &CodeProfile) -> Result<AutomorphismParams> {
    let n_edges = f.modulus();
    if n_edges as usize != profile.edges {
        return invalid("polynomial modulus does not match profile");
    }
    let lam = profile.lambda as u64;
    let rho = profile.rho as u64;
    let u = (2 * f.f2()).gcd(&n_edges);
    let t = (n_edges / u).lcm(&lam) / lam;
    let limit = n_edges / (t * lam);
    let m = (1..=limit)
        .find(|m| f.eval(m * t * lam) % rho == 0)
        .ok_or_else(|| Error::InvalidArgument(format!("no automorphism shift found up to m = {limit}")))?;
    let beta = m * t;
    if (beta * lam) % rho != 0 {
        return invalid(format!("beta*lambda = {} is not divisible by rho", beta * lam));
    }
    let gamma = beta * lam / rho;
    let delta = (f.eval(beta * lam) / rho) % profile.r as u64;
    Ok(AutomorphismParams { u, t, beta, gamma, delta })
}

/// Exclusive upper bound `2 f2 lcm(lambda, rho)` of the canonical `f1` range.
pub fn canonical_f1_range(f2: u64, lambda: usize, rho: usize) -> u64 {
    2 * f2 * lambda.lcm(&rho) as u64
}

/// `offset + f1 x + f2 x^2 (mod N)`; only used to exercise the constant-shift isomorphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftedQpp {
    pub offset: u64,
    pub poly: Qpp,
}

impl ShiftedQpp {
    pub fn eval(&self, x: u64) -> u64 {
        (self.offset + self.poly.eval(x)) % self.poly.modulus()
    }
}

/// The two polynomials known to generate graphs isomorphic to `f`'s:
/// `m rho + f(x)` and `(f1 + 2 m alpha f2) x + f2 x^2`.
pub fn isomorphic_images(f: &Qpp, profile: &CodeProfile, m: u64) -> Result<(ShiftedQpp, Qpp)> {
    let n = f.modulus();
    let rho = profile.rho as u64;
    let alpha = profile.alpha() as u64;
    let shifted = ShiftedQpp { offset: (m % n) * rho % n, poly: *f };
    let f1 = (f.f1() + 2 * (m % n) * alpha % n * f.f2()) % n;
    Ok((shifted, Qpp::new(n, f1, f.f2())?))
}

/// Variable and check shifts relating the graph of `f` to that of its
/// `f1 + 2 m alpha f2` image: edge `(v, c)` of the image corresponds to edge
/// `(v + var_shift, c + check_shift)` of the original.
pub fn f1_shift_relabeling(f: &Qpp, profile: &CodeProfile, m: u64) -> (usize, usize) {
    let n = f.modulus();
    let alpha = profile.alpha() as u64;
    let shift = (m % n) * alpha % n;
    // f(x + m alpha) - f'(x) = alpha m f1 + alpha^2 m^2 f2, a multiple of rho.
    let constant = f.eval(shift);
    let var_shift = (shift / profile.lambda as u64) as usize % profile.n;
    let check_shift = (constant / profile.rho as u64) as usize % profile.r;
    (var_shift, check_shift)
}

/// Girth (or local girth) of a graph, with the search cap made explicit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Girth {
    /// Shortest cycle has this length.
    Finite(usize),
    /// No cycle up to the cap; the shortest one is at least this long.
    AtLeast(usize),
    /// No cycle at all.
    Acyclic,
}

impl Girth {
    fn key(&self) -> (usize, u8) {
        match *self {
            Girth::AtLeast(g) => (g, 0),
            Girth::Finite(g) => (g, 1),
            Girth::Acyclic => (usize::MAX, 2),
        }
    }

    pub fn value(&self) -> Option<usize> {
        match *self {
            Girth::Finite(g) => Some(g),
            _ => None,
        }
    }

    /// True when the girth is known to be at least `target`.
    pub fn reaches(&self, target: usize) -> bool {
        match *self {
            Girth::Finite(g) | Girth::AtLeast(g) => g >= target,
            Girth::Acyclic => true,
        }
    }
}

impl Ord for Girth {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Girth {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Girth::Finite(g) => write!(f, "{g}"),
            Girth::AtLeast(g) => write!(f, ">={g}"),
            Girth::Acyclic => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Girth {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad girth {s:?}"));
        match s {
            "inf" => Ok(Girth::Acyclic),
            _ => match s.strip_prefix(">=") {
                Some(g) => g.parse().map(Girth::AtLeast).map_err(|_| bad()),
                None => s.parse().map(Girth::Finite).map_err(|_| bad()),
            },
        }
    }
}

impl Serialize for Girth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Girth {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GirthMode {
    /// BFS only from one variable node per automorphism class.
    Pruned,
    /// BFS from every variable node.
    Exhaustive,
}

/// Default longest cycle searched for.
pub const DEFAULT_GIRTH_CAP: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GirthReport {
    pub girth: Girth,
    /// Cycle-closing edges of length `girth` seen across the BFS roots.
    pub shortest_cycles: u64,
    pub roots: usize,
}

/// Shortest cycle through `node`, searching cycles up to `cap` long.
pub fn local_girth(graph: &TannerGraph, node: Node, cap: usize) -> Girth {
    let mut bfs = Bfs::new(graph);
    bfs.run(graph, node, cap).0
}

/// Graph girth. Pruned mode roots the BFS at `v_0 .. v_{beta-1}` only.
pub fn girth(graph: &TannerGraph, mode: GirthMode, cap: usize) -> Result<GirthReport> {
    if graph.has_parallel_edges() {
        return Ok(GirthReport { girth: Girth::Finite(2), shortest_cycles: graph.parallel.len() as u64, roots: 0 });
    }
    let roots = match mode {
        GirthMode::Exhaustive => graph.profile.n,
        GirthMode::Pruned => automorphism_params(&graph.qpp, &graph.profile)?.beta as usize,
    };
    let locals: Vec<(Girth, u64)> = (0..roots)
        .into_par_iter()
        .map_init(|| Bfs::new(graph), |bfs, v| bfs.run(graph, Node::Var(v), cap))
        .collect();
    let best = locals.iter().map(|l| l.0).min().unwrap_or(Girth::Acyclic);
    let count = locals.iter().filter(|l| l.0 == best).map(|l| l.1).sum();
    Ok(GirthReport { girth: best, shortest_cycles: count, roots })
}

const NONE: u32 = u32::MAX;

/// Reusable BFS buffers. Node ids: variables `0..n`, checks `n..n+r`.
struct Bfs {
    stamp: Vec<u32>,
    cur: u32,
    dist: Vec<u32>,
    branch: Vec<u32>,
    parent_edge: Vec<u32>,
    frontier: Vec<u32>,
    next: Vec<u32>,
}

impl Bfs {
    fn new(graph: &TannerGraph) -> Self {
        let total = graph.profile.n + graph.profile.r;
        Bfs {
            stamp: vec![0; total],
            cur: 0,
            dist: vec![0; total],
            branch: vec![NONE; total],
            parent_edge: vec![NONE; total],
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }

    /// Returns the shortest cycle through `root` and the number of
    /// cycle-closing edges at that length.
    fn run(&mut self, g: &TannerGraph, root: Node, cap: usize) -> (Girth, u64) {
        let n = g.profile.n;
        self.cur = self.cur.wrapping_add(1);
        if self.cur == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.cur = 1;
        }
        let root_id = match root {
            Node::Var(v) => v,
            Node::Check(c) => n + c,
        } as u32;
        self.visit(root_id, 0, NONE, NONE);
        self.frontier.clear();
        self.frontier.push(root_id);

        let mut depth = 0usize;
        while !self.frontier.is_empty() {
            if 2 * depth + 2 > cap {
                return (Girth::AtLeast(cap + 2 - cap % 2), 0);
            }
            let mut found = 0u64;
            self.next.clear();
            let frontier = std::mem::take(&mut self.frontier);
            for &x in &frontier {
                let xi = x as usize;
                let from_branch = self.branch[xi];
                let skip = self.parent_edge[xi];
                if xi < n {
                    let lam = g.profile.lambda;
                    for e in xi * lam..(xi + 1) * lam {
                        let y = (n + g.edge_check(e)) as u32;
                        found += self.relax(x, y, e as u32, skip, from_branch, root_id, depth);
                    }
                } else {
                    for &e in g.check_edges(xi - n) {
                        let y = g.edge_var(e as usize) as u32;
                        found += self.relax(x, y, e, skip, from_branch, root_id, depth);
                    }
                }
            }
            self.frontier = frontier;
            if found > 0 {
                return (Girth::Finite(2 * depth + 2), found);
            }
            std::mem::swap(&mut self.frontier, &mut self.next);
            depth += 1;
        }
        (Girth::Acyclic, 0)
    }

    #[inline]
    fn visit(&mut self, id: u32, dist: u32, branch: u32, parent_edge: u32) {
        let i = id as usize;
        self.stamp[i] = self.cur;
        self.dist[i] = dist;
        self.branch[i] = branch;
        self.parent_edge[i] = parent_edge;
    }

    #[allow(clippy::too_many_arguments)]
    #[inline]
    fn relax(&mut self, x: u32, y: u32, e: u32, skip: u32, from_branch: u32, root: u32, depth: usize) -> u64 {
        if e == skip {
            return 0;
        }
        let yi = y as usize;
        if self.stamp[yi] != self.cur {
            let branch = if x == root { y } else { from_branch };
            self.visit(y, depth as u32 + 1, branch, e);
            self.next.push(y);
            0
        } else if self.dist[yi] == depth as u32 + 1 && self.branch[yi] != from_branch {
            1
        } else {
            0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(lambda: usize, rho: usize, edges: u64, f1: u64, f2: u64) -> TannerGraph {
        let profile = CodeProfile::from_edges(lambda, rho, edges as usize).unwrap();
        TannerGraph::build(profile, Qpp::new(edges, f1, f2).unwrap()).unwrap()
    }

    #[test]
    fn profile_validation() {
        assert!(CodeProfile::new(3, 6, 504, 252, 1512).is_ok());
        assert!(CodeProfile::new(3, 6, 504, 250, 1512).is_err());
        assert!(CodeProfile::from_edges(0, 6, 12).is_err());
    }

    #[test]
    fn size_mismatch_is_rejected() {
        let profile = CodeProfile::from_edges(3, 6, 1512).unwrap();
        let f = Qpp::new(3024, 29, 42).unwrap();
        assert!(matches!(TannerGraph::build(profile, f), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn single_node_pair_is_all_parallel() {
        let g = code(8, 8, 8, 1, 0);
        assert_eq!(g.profile().n, 1);
        assert_eq!(g.profile().r, 1);
        assert_eq!(g.parallel_edges().len(), 28);
        assert_eq!(girth(&g, GirthMode::Exhaustive, 16).unwrap().girth, Girth::Finite(2));
        assert_eq!(local_girth(&g, Node::Var(0), 16), Girth::Finite(2));
    }

    #[test]
    fn edge_zero_hits_check_zero() {
        let g = code(3, 6, 3024, 29, 42);
        assert_eq!(g.edge_var(0), 0);
        assert_eq!(g.edge_check(0), 0);
    }

    #[test]
    fn regular_degrees() {
        let g = code(3, 6, 3024, 29, 42);
        let mut check_deg = vec![0; g.profile().r];
        for (c, _) in g.edges() {
            check_deg[c] += 1;
        }
        assert!(check_deg.iter().all(|&d| d == 6));
        assert!((0..g.profile().n).all(|v| g.var_checks(v).count() == 3));
        assert!((0..g.profile().r).all(|c| g.check_vars(c).count() == 6));
    }

    #[test]
    fn code_one_params_and_girth() {
        let g = code(3, 6, 1512, 5, 210);
        let p = automorphism_params(g.qpp(), g.profile()).unwrap();
        assert_eq!((p.u, p.t, p.beta, p.gamma), (84, 6, 6, 3));
        assert_eq!(girth(&g, GirthMode::Pruned, 16).unwrap().girth, Girth::Finite(8));
        assert_eq!(girth(&g, GirthMode::Exhaustive, 16).unwrap().girth, Girth::Finite(8));
    }

    #[test]
    fn code_two_params() {
        let g = code(3, 6, 3024, 29, 42);
        let p = automorphism_params(g.qpp(), g.profile()).unwrap();
        assert_eq!((p.u, p.t, p.beta, p.gamma), (84, 12, 12, 6));
        assert_eq!(p.delta % p.gamma, 0);
        assert!(g.is_automorphism(p.beta as usize, p.delta as usize));
    }

    #[test]
    fn constant_difference_over_period() {
        let f = Qpp::new(3024, 29, 42).unwrap();
        let u = (2 * f.f2()).gcd(&f.modulus());
        let period = f.modulus() / u;
        for x in 0..f.modulus() {
            let d = (f.eval(x + period) + f.modulus() - f.eval(x)) % f.modulus();
            assert_eq!(d, f.eval(period));
        }
    }

    /// Hexagon: 3 variables, 3 checks, each variable on two checks.
    #[test]
    fn six_cycle_local_girth() {
        // lambda = rho = 2, N = 6: f(x) = x + 3x^2? Use a brute choice whose graph is one 6-cycle.
        let profile = CodeProfile::from_edges(2, 2, 6).unwrap();
        let mut hit = false;
        for f1 in 1..6 {
            for f2 in 0..6 {
                let Ok(f) = Qpp::new(6, f1, f2) else { continue };
                let g = TannerGraph::build(profile, f).unwrap();
                if g.has_parallel_edges() {
                    continue;
                }
                // Three variables of degree two with no parallel edge form a single 6-cycle.
                hit = true;
                for v in 0..3 {
                    assert_eq!(local_girth(&g, Node::Var(v), 16), Girth::Finite(6));
                    assert_eq!(local_girth(&g, Node::Check(v), 16), Girth::Finite(6));
                }
            }
        }
        assert!(hit);
    }

    #[test]
    fn tree_has_no_cycle() {
        // One variable of degree 3 on three distinct checks of degree 1: a star.
        let profile = CodeProfile::new(3, 1, 1, 3, 3).unwrap();
        let g = TannerGraph::build(profile, Qpp::new(3, 1, 0).unwrap()).unwrap();
        assert_eq!(local_girth(&g, Node::Var(0), 16), Girth::Acyclic);
        assert_eq!(local_girth(&g, Node::Check(1), 16), Girth::Acyclic);
    }

    #[test]
    fn cap_reports_lower_bound() {
        let g = code(3, 6, 1512, 5, 210);
        assert_eq!(local_girth(&g, Node::Var(0), 6), Girth::AtLeast(8));
        assert_eq!(girth(&g, GirthMode::Pruned, 6).unwrap().girth, Girth::AtLeast(8));
    }

    #[test]
    fn local_girth_matches_exhaustive_minimum() {
        let g = code(3, 6, 3024, 29, 42);
        let local = local_girth(&g, Node::Var(0), 16);
        let all = girth(&g, GirthMode::Exhaustive, 16).unwrap().girth;
        assert!(local >= all);
        assert_eq!(girth(&g, GirthMode::Pruned, 16).unwrap().girth, all);
    }

    #[test]
    fn canonical_range_examples() {
        assert_eq!(canonical_f1_range(42, 3, 6), 504);
        assert_eq!(canonical_f1_range(1, 1, 1), 2);
        assert_eq!(canonical_f1_range(210, 3, 6), 2520);
    }

    #[test]
    fn f1_shift_image_is_isomorphic() {
        let g = code(3, 6, 3024, 29, 42);
        let (shifted, image) = isomorphic_images(g.qpp(), g.profile(), 1).unwrap();
        assert_eq!(image.f1(), 533);
        assert_eq!(shifted.offset, 6);
        let h = TannerGraph::build(*g.profile(), image).unwrap();
        assert_eq!(girth(&h, GirthMode::Exhaustive, 16).unwrap().girth, Girth::Finite(8));

        let (vs, cs) = f1_shift_relabeling(g.qpp(), g.profile(), 1);
        let (n, r) = (g.profile().n, g.profile().r);
        let mut a: Vec<_> = h.edges().map(|(c, v)| ((c + cs) % r, (v + vs) % n)).collect();
        let mut b: Vec<_> = g.edges().collect();
        a.sort_unstable();
        b.sort_unstable();
        assert_eq!(a, b);

        let (_, same) = isomorphic_images(g.qpp(), g.profile(), 0).unwrap();
        assert_eq!(same, *g.qpp());
    }

    #[test]
    fn constant_shift_image_moves_checks() {
        let g = code(3, 6, 1512, 5, 210);
        let (shifted, _) = isomorphic_images(g.qpp(), g.profile(), 5).unwrap();
        for e in 0..1512u64 {
            let c = shifted.eval(e) as usize / 6;
            assert_eq!(c, (g.edge_check(e as usize) + 5) % g.profile().r);
        }
    }

    #[test]
    fn girth_text_round_trip() {
        for g in [Girth::Finite(8), Girth::AtLeast(18), Girth::Acyclic] {
            let json = serde_json::to_string(&g).unwrap();
            assert_eq!(serde_json::from_str::<Girth>(&json).unwrap(), g);
        }
        assert!("8x".parse::<Girth>().is_err());
        assert!(Girth::AtLeast(18) > Girth::Finite(16));
        assert!(Girth::Finite(18) > Girth::AtLeast(18));
    }
}
