//! BPSK over AWGN, all-zero codeword, sum-product decoding.
//!
//! Each frame draws its noise from a ChaCha stream selected by the frame
//! index, and frames are merged in index order. Results therefore depend only
//! on the configuration and seed, not on the number of worker threads.

use std::io::Write;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoder::{BpDecoder, DecodeResult};
use crate::error::{invalid, Result};
use crate::gf2::SparseBitMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub ebno_db: Vec<f64>,
    pub max_frames: u64,
    /// Stop a point once this many frame errors have been seen.
    pub stop_errors: u64,
    pub max_iters: usize,
    pub seed: u64,
    /// Frames decoded between stop-rule checks. Part of the reproducibility
    /// contract only through the stop rule, which is applied frame by frame.
    pub batch: usize,
    /// Worker threads; 0 uses the global rayon pool.
    pub workers: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { ebno_db: vec![], max_frames: 1_000_000, stop_errors: 50, max_iters: 200, seed: 0, batch: 512, workers: 0 }
    }
}

/// Outcome of one all-zero transmission.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameOutcome {
    Success,
    /// Decoder stopped with a nonzero syndrome: word weight `w`, syndrome weight `s`.
    Detected { w: usize, s: usize },
    /// Decoder converged to a nonzero codeword of weight `w`.
    Undetected { w: usize },
}

pub fn classify_frame(r: &DecodeResult) -> FrameOutcome {
    let w = r.word.iter().filter(|&&b| b != 0).count();
    if r.syndrome_weight > 0 {
        FrameOutcome::Detected { w, s: r.syndrome_weight }
    } else if w == 0 {
        FrameOutcome::Success
    } else {
        FrameOutcome::Undetected { w }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearCodeword {
    pub frame_index: u64,
    pub w: usize,
    pub s: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointStats {
    pub ebno_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub detected: u64,
    pub undetected: u64,
    /// `(w, s)` of every detected error.
    pub near_codewords: Vec<NearCodeword>,
    /// `(frame_index, weight)` of every undetected error.
    pub undetected_weights: Vec<(u64, usize)>,
    pub elapsed_secs: f64,
    pub partial: bool,
}

impl PointStats {
    /// Bit error rate over all `n` code bits.
    pub fn ber(&self, n: usize) -> f64 {
        if self.frames == 0 {
            return 0.0;
        }
        self.bit_errors as f64 / (self.frames as f64 * n as f64)
    }

    pub fn fer(&self) -> f64 {
        if self.frames == 0 {
            return 0.0;
        }
        self.frame_errors as f64 / self.frames as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimStats {
    pub n: usize,
    pub k: usize,
    pub points: Vec<PointStats>,
    pub partial: bool,
}

impl SimStats {
    /// Lightest undetected error seen, which is a codeword and so bounds `d_min`.
    pub fn dmin_upper_bound(&self) -> Option<usize> {
        self.points.iter().flat_map(|p| p.undetected_weights.iter().map(|x| x.1)).min()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        #[derive(Serialize)]
        struct Row {
            ebno_db: f64,
            frames: u64,
            bit_errors: u64,
            frame_errors: u64,
            detected: u64,
            undetected: u64,
            ber: f64,
            fer: f64,
        }
        let mut w = csv::Writer::from_writer(out);
        for p in &self.points {
            w.serialize(Row {
                ebno_db: p.ebno_db,
                frames: p.frames,
                bit_errors: p.bit_errors,
                frame_errors: p.frame_errors,
                detected: p.detected,
                undetected: p.undetected,
                ber: p.ber(self.n),
                fer: p.fer(),
            })
            .map_err(|e| std::io::Error::other(e.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Near-codeword log as a JSON list of `{ebno_db, frame_index, w, s}`.
    pub fn near_codeword_log(&self) -> serde_json::Value {
        let entries: Vec<_> = self
            .points
            .iter()
            .flat_map(|p| {
                p.near_codewords.iter().map(move |nc| {
                    serde_json::json!({ "ebno_db": p.ebno_db, "frame_index": nc.frame_index, "w": nc.w, "s": nc.s })
                })
            })
            .collect();
        serde_json::Value::Array(entries)
    }
}

/// Noise standard deviation for unit-energy BPSK at rate `rate`.
pub fn noise_sigma(ebno_db: f64, rate: f64) -> f64 {
    (1.0 / (2.0 * rate * 10f64.powf(ebno_db / 10.0))).sqrt()
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Noise generator for one frame of one SNR point.
pub fn frame_rng(master: u64, point: usize, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(master ^ splitmix(point as u64)));
    rng.set_stream(frame);
    rng
}

/// Runs every SNR point of `cfg` on the code `h` with dimension `k`.
///
/// When `stop` is raised the current batch is finished and the stats are
/// returned flagged `partial`.
pub fn simulate(h: &SparseBitMatrix, k: usize, cfg: &SimConfig, stop: Option<&AtomicBool>) -> Result<SimStats> {
    if cfg.workers == 0 {
        return simulate_inner(h, k, cfg, stop);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| crate::Error::InvalidArgument(e.to_string()))?;
    pool.install(|| simulate_inner(h, k, cfg, stop))
}

fn simulate_inner(h: &SparseBitMatrix, k: usize, cfg: &SimConfig, stop: Option<&AtomicBool>) -> Result<SimStats> {
    let n = h.cols();
    if n == 0 || k == 0 || k > n {
        return invalid(format!("need 0 < k <= n, got k={k} n={n}"));
    }
    if cfg.max_iters == 0 || cfg.batch == 0 || cfg.stop_errors == 0 {
        return invalid("iterations, batch size and stop count must be positive");
    }
    let rate = k as f64 / n as f64;
    let mut stats = SimStats { n, k, points: Vec::new(), partial: false };

    for (pi, &ebno) in cfg.ebno_db.iter().enumerate() {
        let sigma = noise_sigma(ebno, rate);
        let start = Instant::now();
        let mut p = PointStats {
            ebno_db: ebno,
            frames: 0,
            bit_errors: 0,
            frame_errors: 0,
            detected: 0,
            undetected: 0,
            near_codewords: vec![],
            undetected_weights: vec![],
            elapsed_secs: 0.0,
            partial: false,
        };
        let mut next = 0u64;
        'point: while p.frames < cfg.max_frames && p.frame_errors < cfg.stop_errors {
            if stop.is_some_and(|s| s.load(Ordering::Relaxed)) {
                p.partial = true;
                stats.partial = true;
                break;
            }
            let end = (next + cfg.batch as u64).min(cfg.max_frames);
            let outcomes: Vec<(FrameOutcome, usize)> = (next..end)
                .into_par_iter()
                .map_init(
                    || (BpDecoder::new(h), vec![0.0f64; n]),
                    |(dec, llrs), frame| {
                        let mut rng = frame_rng(cfg.seed, pi, frame);
                        let scale = 2.0 / (sigma * sigma);
                        for l in llrs.iter_mut() {
                            let noise: f64 = StandardNormal.sample(&mut rng);
                            *l = scale * (1.0 + sigma * noise);
                        }
                        let r = dec.decode(llrs, cfg.max_iters);
                        let bits = r.word.iter().filter(|&&b| b != 0).count();
                        (classify_frame(&r), bits)
                    },
                )
                .collect();
            for (off, (outcome, bits)) in outcomes.into_iter().enumerate() {
                let frame = next + off as u64;
                p.frames += 1;
                p.bit_errors += bits as u64;
                match outcome {
                    FrameOutcome::Success => {}
                    FrameOutcome::Detected { w, s } => {
                        p.frame_errors += 1;
                        p.detected += 1;
                        p.near_codewords.push(NearCodeword { frame_index: frame, w, s });
                    }
                    FrameOutcome::Undetected { w } => {
                        p.frame_errors += 1;
                        p.undetected += 1;
                        p.undetected_weights.push((frame, w));
                    }
                }
                if p.frame_errors >= cfg.stop_errors {
                    break 'point;
                }
            }
            next = end;
        }
        p.elapsed_secs = start.elapsed().as_secs_f64();
        stats.points.push(p);
        if stats.partial {
            break;
        }
    }
    Ok(stats)
}
