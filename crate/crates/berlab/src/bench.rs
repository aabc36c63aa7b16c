//! Decode-only throughput.
//!
//! The LLR block is generated once and kept in memory, so the timed region
//! covers `framed_decode` alone. Each (case, workers) cell runs on its own
//! rayon pool, discards the warm-up runs and reports the median of the rest.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use viterbi::channel::{awgn_with, modulate_bpsk, sigma_from_ebn0};
use viterbi::codec::encode;
use viterbi::decoder::framed_decode;
use viterbi::{CodeSpec, FrameConfig, LlrBlock, TracebackStart, Trellis};

use crate::Error;

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub spec: CodeSpec,
    pub stages: usize,
    /// Channel quality of the synthetic input. Decode time barely depends on it.
    pub ebn0_db: f64,
    pub seed: u64,
    pub warmup: usize,
    pub reps: usize,
}

impl BenchConfig {
    pub fn new(spec: CodeSpec, stages: usize) -> Self {
        Self {
            spec,
            stages,
            ebn0_db: 4.0,
            seed: 0,
            warmup: 1,
            reps: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub frame: FrameConfig,
    pub workers: usize,
    pub stages: usize,
    /// Median wall-clock seconds of the timed runs.
    pub seconds: f64,
    pub mbps: f64,
    /// Against the same case on one worker.
    pub speedup_vs_single: f64,
    /// Against the same frame with a single traceback per frame, same
    /// worker count, when that case was also measured.
    pub speedup_vs_serial_tb: Option<f64>,
}

/// Synthetic noisy block for benchmarking: random bits through the code and an
/// AWGN channel at `cfg.ebn0_db`.
pub fn bench_input(cfg: &BenchConfig) -> Result<LlrBlock, Error> {
    let trellis = Trellis::new(cfg.spec.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let bits: Vec<u8> = (0..cfg.stages)
        .map(|_| rng.random::<bool>() as u8)
        .collect();
    let sigma = sigma_from_ebn0(cfg.ebn0_db, 1.0 / cfg.spec.outputs() as f64)?;
    let rx = awgn_with(&modulate_bpsk(&encode(&bits, &trellis)), sigma, &mut rng);
    Ok(LlrBlock::new(rx, cfg.spec.outputs())?)
}

/// Times every case at every worker count. One worker is always measured so
/// that speedups have a baseline.
pub fn run_throughput_bench(
    cfg: &BenchConfig,
    cases: &[FrameConfig],
    workers: &[usize],
) -> Result<Vec<BenchRow>, Error> {
    let llr = bench_input(cfg)?;
    let trellis = Trellis::new(cfg.spec.clone());
    let mut counts: Vec<usize> = workers.iter().copied().filter(|&w| w > 0).collect();
    counts.push(1);
    counts.sort_unstable();
    counts.dedup();

    let mut rows = Vec::new();
    for &w in &counts {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        for case in cases {
            let seconds =
                pool.install(|| time_decode(&llr, &trellis, case, cfg.warmup, cfg.reps))?;
            rows.push(BenchRow {
                frame: *case,
                workers: w,
                stages: cfg.stages,
                seconds,
                mbps: cfg.stages as f64 / seconds / 1e6,
                speedup_vs_single: 1.0,
                speedup_vs_serial_tb: None,
            });
        }
    }

    let snapshot = rows.clone();
    for row in &mut rows {
        let single = snapshot
            .iter()
            .find(|r| r.workers == 1 && r.frame == row.frame);
        if let Some(s) = single {
            row.speedup_vs_single = row.mbps / s.mbps;
        }
        if row.frame.f0 > 0 {
            let serial_tb = snapshot.iter().find(|r| {
                r.workers == row.workers
                    && r.frame.f0 == 0
                    && (r.frame.f, r.frame.v1, r.frame.v2)
                        == (row.frame.f, row.frame.v1, row.frame.v2)
                    && r.frame.traceback_start == TracebackStart::StoredMax
            });
            row.speedup_vs_serial_tb = serial_tb.map(|s| row.mbps / s.mbps);
        }
    }
    Ok(rows)
}

/// Median seconds of `reps` decodes after `warmup` untimed ones.
pub fn time_decode(
    llr: &LlrBlock,
    trellis: &Trellis,
    frame: &FrameConfig,
    warmup: usize,
    reps: usize,
) -> Result<f64, Error> {
    for _ in 0..warmup {
        framed_decode(llr, trellis, frame)?;
    }
    let mut times = Vec::with_capacity(reps.max(1));
    for _ in 0..reps.max(1) {
        let t0 = Instant::now();
        let out = framed_decode(llr, trellis, frame)?;
        times.push(t0.elapsed().as_secs_f64());
        std::hint::black_box(out);
    }
    times.sort_by(f64::total_cmp);
    Ok(times[times.len() / 2])
}
