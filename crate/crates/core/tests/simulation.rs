use qpp_ldpc::gf2::SparseBitMatrix;
use qpp_ldpc::montecarlo::{simulate, SimConfig};
use qpp_ldpc::qpp::Qpp;
use qpp_ldpc::tanner::{CodeProfile, TannerGraph};

#[test]
fn noiseless_limit_has_no_frame_errors() {
    let p = CodeProfile::new(3, 6, 504, 252, 1512).unwrap();
    let h = SparseBitMatrix::from_graph(&TannerGraph::build(p, Qpp::new(1512, 5, 210).unwrap()).unwrap()).unwrap();
    let cfg = SimConfig { ebno_db: vec![20.0], max_frames: 10_000, max_iters: 80, ..Default::default() };
    let s = simulate(&h, 252, &cfg, None).unwrap();
    assert_eq!(s.points[0].frames, 10_000);
    assert_eq!(s.points[0].frame_errors, 0);
    assert_eq!(s.points[0].bit_errors, 0);
}

#[test]
fn undetected_errors_bound_the_distance_of_a_weak_code() {
    // Two parity checks on six bits; the lightest nonzero codewords have weight 2.
    let h = SparseBitMatrix::from_rows(2, 6, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
    let cfg = SimConfig { ebno_db: vec![0.0], max_frames: 5000, stop_errors: 500, max_iters: 10, seed: 5, ..Default::default() };
    let s = simulate(&h, 4, &cfg, None).unwrap();
    let p = &s.points[0];
    assert!(p.undetected > 0);
    assert_eq!(p.undetected as usize, p.undetected_weights.len());
    assert!(p.undetected_weights.iter().all(|&(_, w)| w >= 2 && w % 2 == 0));
    assert_eq!(s.dmin_upper_bound(), Some(2));
    let log = s.near_codeword_log();
    assert_eq!(log.as_array().unwrap().len() as u64, p.detected);
}
