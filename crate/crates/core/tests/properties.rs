use proptest::prelude::*;

use qpp_ldpc::alist::{from_alist, to_alist};
use qpp_ldpc::decoder::BpDecoder;
use qpp_ldpc::distance::{dmin_upper_bound, nncs_search, permanent, NncsConfig, NncsMode};
use qpp_ldpc::gf2::{qc_analysis, SparseBitMatrix, WeightMatrix};
use qpp_ldpc::qpp::{is_permutation_poly, min_f2, Qpp};
use qpp_ldpc::search::f1_period;
use qpp_ldpc::tanner::{automorphism_params, girth, CodeProfile, GirthMode, TannerGraph};

/// A random valid `(profile, f)` with small `N`.
fn code() -> impl Strategy<Value = (CodeProfile, Qpp)> {
    (prop::sample::select(vec![(2usize, 4usize), (3, 6), (2, 6), (4, 8), (3, 4)]), 4usize..40, 1u64..6, 0u64..4096)
        .prop_filter_map("not a permutation", |((lam, rho), mult, k, f1_seed)| {
            let base = lam * rho / num_integer::gcd(lam, rho);
            let n_edges = (base * mult) as u64;
            let f2 = (min_f2(n_edges).ok()? * k) % n_edges;
            let f1 = f1_seed % n_edges;
            if !is_permutation_poly(n_edges, f1, f2).ok()? {
                return None;
            }
            let profile = CodeProfile::from_edges(lam, rho, n_edges as usize).ok()?;
            Some((profile, Qpp::new(n_edges, f1, f2).ok()?))
        })
}

fn sparse_matrix() -> impl Strategy<Value = SparseBitMatrix> {
    (1usize..12, 1usize..20).prop_flat_map(|(r, n)| {
        prop::collection::vec(prop::collection::btree_set(0..n, 0..=n.min(6)), r)
            .prop_map(move |rows| SparseBitMatrix::from_rows(r, n, rows.into_iter().map(|s| s.into_iter().collect()).collect()).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_is_regular((profile, f) in code()) {
        let g = TannerGraph::build(profile, f).unwrap();
        let mut check_deg = vec![0usize; profile.r];
        for (c, _) in g.edges() {
            check_deg[c] += 1;
        }
        prop_assert!(check_deg.iter().all(|&d| d == profile.rho));
        for v in 0..profile.n {
            prop_assert_eq!(g.var_checks(v).count(), profile.lambda);
        }
    }

    #[test]
    fn beta_delta_shift_is_an_automorphism((profile, f) in code()) {
        let g = TannerGraph::build(profile, f).unwrap();
        let p = automorphism_params(&f, &profile).unwrap();
        prop_assert!(g.is_automorphism(p.beta as usize, p.delta as usize));
        prop_assert_eq!(profile.n as u64 % p.beta, 0);
        prop_assert_eq!(p.delta % p.gamma, 0);
    }

    #[test]
    fn pruned_girth_equals_exhaustive((profile, f) in code()) {
        let g = TannerGraph::build(profile, f).unwrap();
        let a = girth(&g, GirthMode::Pruned, 12).unwrap();
        let b = girth(&g, GirthMode::Exhaustive, 12).unwrap();
        prop_assert_eq!(a.girth, b.girth);
    }

    #[test]
    fn f1_period_shift_preserves_girth((profile, f) in code(), m in 1u64..5) {
        let n = f.modulus();
        let shifted = Qpp::new(n, (f.f1() + m * f1_period(&profile, f.f2())) % n, f.f2()).unwrap();
        let a = girth(&TannerGraph::build(profile, f).unwrap(), GirthMode::Exhaustive, 12).unwrap();
        let b = girth(&TannerGraph::build(profile, shifted).unwrap(), GirthMode::Exhaustive, 12).unwrap();
        prop_assert_eq!(a.girth, b.girth);
    }

    #[test]
    fn qc_form_has_regular_weights((profile, f) in code()) {
        let g = TannerGraph::build(profile, f).unwrap();
        prop_assume!(!g.has_parallel_edges());
        let qc = qc_analysis(&g).unwrap();
        prop_assert_eq!(qc.form.restore().unwrap(), SparseBitMatrix::from_graph(&g).unwrap());
        prop_assert!(qc.weights.row_sums().iter().all(|&s| s as usize == profile.rho));
        prop_assert!(qc.weights.col_sums().iter().all(|&s| s as usize == profile.lambda));
    }

    #[test]
    fn converged_iff_zero_syndrome(h in sparse_matrix(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let llrs: Vec<f64> = (0..h.cols()).map(|_| rng.random_range(-3.0..3.0)).collect();
        let r = BpDecoder::new(&h).decode(&llrs, 15);
        prop_assert_eq!(r.converged, h.is_codeword(&r.word));
        prop_assert_eq!(r.syndrome_weight, h.syndrome_weight(&r.word));
    }

    #[test]
    fn alist_round_trip(h in sparse_matrix()) {
        let text = to_alist(&h);
        prop_assert_eq!(from_alist(&text).unwrap(), h);
    }

    #[test]
    fn permanent_ignores_row_and_column_order(
        m in (1usize..6).prop_flat_map(|d| prop::collection::vec(prop::collection::vec(0u64..3, d), d)),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let d = m.len();
        let mut rows: Vec<usize> = (0..d).collect();
        let mut cols: Vec<usize> = (0..d).collect();
        rows.shuffle(&mut rng);
        cols.shuffle(&mut rng);
        let p: Vec<Vec<u64>> = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j]).collect()).collect();
        let t: Vec<Vec<u64>> = (0..d).map(|j| (0..d).map(|i| m[i][j]).collect()).collect();
        let base = permanent(&m).unwrap();
        prop_assert_eq!(permanent(&p).unwrap(), base);
        prop_assert_eq!(permanent(&t).unwrap(), base);
    }

    #[test]
    fn bound_is_positive_when_defined(rows in (2usize..4).prop_flat_map(|r| prop::collection::vec(prop::collection::vec(0u32..3, r + 2), r))) {
        let a = WeightMatrix::from_rows(rows).unwrap();
        let b = dmin_upper_bound(&a).unwrap();
        match b.bound {
            Some(v) => {
                prop_assert!(v > 0);
                prop_assert_eq!(b.columns.len(), a.rows() + 1);
            }
            None => prop_assert_eq!(b.zero_sets as usize, binomial(a.cols(), a.rows() + 1)),
        }
    }

    #[test]
    fn nncs_reports_only_codewords(h in sparse_matrix(), seed in any::<u64>()) {
        let cfg = NncsConfig { mode: NncsMode::Single, budget: 50, jitter: 0.3, seed, ..Default::default() };
        let r = nncs_search(&h, &cfg).unwrap();
        if let Some(w) = r.best_weight {
            let mut word = vec![0u8; h.cols()];
            r.codeword.iter().for_each(|&i| word[i] = 1);
            prop_assert!(h.is_codeword(&word));
            prop_assert_eq!(w, r.codeword.len());
            prop_assert!(w > 0);
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
