//! Frame-tiled decoding with optional parallel traceback.

use rayon::prelude::*;

use crate::channel::LlrBlock;
use crate::decoder::acs::{AcsTables, PathMetricLane, SurvivorMatrix};
use crate::decoder::metrics::stage_metrics_into;
use crate::decoder::{DecodeOutput, DecodeStats, FrameConfig, TracebackStart};
use crate::trellis::Trellis;
use crate::Error;

/// Stage ranges of one frame, in stream coordinates.
///
/// The forward pass covers `start..end`; only `emit_start..emit_end` is
/// written to the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameLayout {
    pub index: usize,
    pub start: usize,
    pub emit_start: usize,
    pub emit_end: usize,
    pub end: usize,
}

/// One independent traceback inside a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Subframe {
    pub emit_start: usize,
    pub emit_end: usize,
    /// Stage the traceback starts from (inclusive).
    pub trace_from: usize,
}

impl FrameLayout {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }

    /// Traceback segments of this frame. `f0 == 0` gives a single segment
    /// traced from the last processed stage. Otherwise each subframe of `f0`
    /// bits is traced from `v2` stages past its right edge, clipped to the
    /// frame window.
    pub fn subframes(&self, f0: usize, v2: usize) -> Vec<Subframe> {
        if f0 == 0 {
            return vec![Subframe {
                emit_start: self.emit_start,
                emit_end: self.emit_end,
                trace_from: self.end - 1,
            }];
        }
        (self.emit_start..self.emit_end)
            .step_by(f0)
            .map(|emit_start| {
                let emit_end = (emit_start + f0).min(self.emit_end);
                Subframe {
                    emit_start,
                    emit_end,
                    trace_from: (emit_end + v2).min(self.end) - 1,
                }
            })
            .collect()
    }
}

/// Traces every subframe of a frame back through its survivors.
///
/// `survivors` covers the frame window, local stage 0 being `frame.start`.
/// `starts[k]` is the state subframe `k` starts from. `out` receives the
/// frame's `emit_start..emit_end` bits; bits decoded in each subframe's right
/// overlap are dropped.
pub fn parallel_traceback(
    survivors: &SurvivorMatrix,
    trellis: &Trellis,
    frame: &FrameLayout,
    subframes: &[Subframe],
    starts: &[usize],
    out: &mut [u8],
) {
    debug_assert_eq!(out.len(), frame.emit_end - frame.emit_start);
    debug_assert_eq!(subframes.len(), starts.len());
    for (sub, &start) in subframes.iter().zip(starts) {
        let mut state = start;
        for t in (sub.emit_start..=sub.trace_from).rev() {
            if t < sub.emit_end {
                out[t - frame.emit_start] = trellis.branch_input(state);
            }
            state = survivors.predecessor(t - frame.start, state);
        }
    }
}

/// Decodes `llr` frame by frame on the current rayon pool.
///
/// Frames share only read-only inputs and write disjoint output slices, so
/// the result does not depend on scheduling.
pub fn framed_decode(
    llr: &LlrBlock,
    trellis: &Trellis,
    cfg: &FrameConfig,
) -> Result<DecodeOutput, Error> {
    cfg.validate(llr.puncture_period())?;
    if llr.is_empty() {
        return Err(Error::EmptyInput);
    }
    if llr.outputs() != trellis.outputs() {
        return Err(Error::LengthMismatch(format!(
            "block has {} values per stage, code emits {}",
            llr.outputs(),
            trellis.outputs()
        )));
    }
    let n = llr.stages();
    let tables = AcsTables::new(trellis);
    let mut bits = vec![0u8; n];
    let stats = bits
        .par_chunks_mut(cfg.f)
        .enumerate()
        .map_init(
            || FrameScratch::new(trellis, &tables),
            |scratch, (m, out)| {
                let frame = cfg.frame(m, n);
                scratch.decode(llr, trellis, &tables, cfg, &frame, out)
            },
        )
        .reduce(DecodeStats::default, |a, b| a + b);
    Ok(DecodeOutput { bits, stats })
}

struct FrameScratch {
    lane: PathMetricLane,
    survivors: SurvivorMatrix,
    half: Vec<f64>,
    full: Vec<f64>,
    starts: Vec<usize>,
}

impl FrameScratch {
    fn new(trellis: &Trellis, tables: &AcsTables) -> Self {
        Self {
            lane: PathMetricLane::new(trellis.num_states()),
            survivors: SurvivorMatrix::default(),
            half: vec![0.0; tables.half_len()],
            full: vec![0.0; 2 * tables.half_len()],
            starts: Vec::new(),
        }
    }

    fn decode(
        &mut self,
        llr: &LlrBlock,
        trellis: &Trellis,
        tables: &AcsTables,
        cfg: &FrameConfig,
        frame: &FrameLayout,
        out: &mut [u8],
    ) -> DecodeStats {
        let num_states = trellis.num_states();
        let subframes = frame.subframes(cfg.f0, cfg.v2);
        self.starts.clear();
        self.starts.resize(subframes.len(), 0);
        self.lane.reset();
        self.survivors.reset(num_states, frame.len());

        // subframe start stages are non-decreasing
        let mut next_boundary = 0;
        for t in frame.start..frame.end {
            stage_metrics_into(llr.stage(t), &mut self.half);
            tables.expand(&self.half, &mut self.full);
            self.lane.step(
                tables,
                &self.full,
                self.survivors.column_mut(t - frame.start),
            );
            while next_boundary < subframes.len() && subframes[next_boundary].trace_from == t {
                self.starts[next_boundary] = self.lane.best_state();
                next_boundary += 1;
            }
        }
        // the final stage's metrics are always at hand, so only interior
        // boundaries fall back to a random start
        if let TracebackStart::Random { seed } = cfg.traceback_start {
            for (k, (s, sub)) in self.starts.iter_mut().zip(&subframes).enumerate() {
                if sub.trace_from + 1 < frame.end {
                    *s = random_state(seed, frame.index, k, num_states);
                }
            }
        }

        parallel_traceback(
            &self.survivors,
            trellis,
            frame,
            &subframes,
            &self.starts,
            out,
        );

        DecodeStats {
            frames: 1,
            stages: frame.len() as u64,
            traceback_starts: subframes.len() as u64,
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Start state for subframe `sub` of frame `frame`, a pure function of its inputs.
fn random_state(seed: u64, frame: usize, sub: usize, num_states: usize) -> usize {
    let h = splitmix64(splitmix64(splitmix64(seed) ^ frame as u64) ^ sub as u64);
    (h % num_states as u64) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::modulate_bpsk;
    use crate::codec::encode;
    use crate::decoder::serial_decode;
    use crate::trellis::CodeSpec;

    fn block(bits: &[u8], t: &Trellis, noise: f64) -> LlrBlock {
        let soft: Vec<f64> = modulate_bpsk(&encode(bits, t))
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                s + noise * ((splitmix64(i as u64 ^ 0xabcd) >> 40) as f64 / 16777216.0 - 0.5)
            })
            .collect();
        LlrBlock::new(soft, t.outputs()).unwrap()
    }

    fn bits(n: usize) -> Vec<u8> {
        (0..n as u64).map(|i| (splitmix64(i) & 1) as u8).collect()
    }

    #[test]
    fn subframe_layout() {
        let frame = FrameLayout {
            index: 1,
            start: 80,
            emit_start: 100,
            emit_end: 200,
            end: 230,
        };
        let subs = frame.subframes(32, 30);
        assert_eq!(subs.len(), 4);
        assert_eq!(
            (subs[0].emit_start, subs[0].emit_end, subs[0].trace_from),
            (100, 132, 161)
        );
        assert_eq!(
            (subs[2].emit_start, subs[2].emit_end, subs[2].trace_from),
            (164, 196, 225)
        );
        assert_eq!(
            (subs[3].emit_start, subs[3].emit_end, subs[3].trace_from),
            (196, 200, 229)
        );
        assert_eq!(frame.subframes(0, 30), frame.subframes(100, 30));
    }

    #[test]
    fn single_frame_equals_serial() {
        let t = Trellis::new(CodeSpec::k7_171_133());
        let llr = block(&bits(500), &t, 3.0);
        let serial = serial_decode(&llr, &t).unwrap();
        let framed = framed_decode(&llr, &t, &FrameConfig::unframed(500)).unwrap();
        assert_eq!(framed.bits, serial.bits);
        assert_eq!(framed.stats.frames, 1);
    }

    #[test]
    fn full_subframe_equals_frame_traceback() {
        let t = Trellis::new(CodeSpec::k7_171_133());
        let llr = block(&bits(2000), &t, 3.2);
        for start in [
            TracebackStart::StoredMax,
            TracebackStart::Random { seed: 9 },
        ] {
            let base = FrameConfig::new(64, 20, 20).with_start(start);
            let a = framed_decode(&llr, &t, &base).unwrap();
            let b = framed_decode(&llr, &t, &base.with_subframes(64)).unwrap();
            assert_eq!(a.bits, b.bits);
        }
    }

    #[test]
    fn noiseless_any_layout() {
        let t = Trellis::new(CodeSpec::k7_171_133());
        let x = bits(1000);
        let llr = block(&x, &t, 0.0);
        for cfg in [
            FrameConfig::new(32, 20, 20),
            FrameConfig::new(256, 20, 20).with_subframes(32),
            FrameConfig::new(100, 30, 45).with_subframes(7),
            FrameConfig::new(64, 14, 14)
                .with_subframes(16)
                .with_start(TracebackStart::Random { seed: 1 }),
        ] {
            assert_eq!(framed_decode(&llr, &t, &cfg).unwrap().bits, x, "{cfg:?}");
        }
    }

    #[test]
    fn stats_count_work() {
        let t = Trellis::new(CodeSpec::from_octal(3, "7,5").unwrap());
        let llr = block(&bits(100), &t, 0.0);
        let out = framed_decode(&llr, &t, &FrameConfig::new(10, 4, 6).with_subframes(5)).unwrap();
        assert_eq!(out.stats.frames, 10);
        // interior frames process 20 stages, first 16, last 14
        assert_eq!(out.stats.stages, 16 + 8 * 20 + 14);
        assert_eq!(out.stats.traceback_starts, 20);
    }

    #[test]
    fn rejects_bad_input() {
        let t = Trellis::new(CodeSpec::k7_171_133());
        let empty = LlrBlock::new(vec![], 2).unwrap();
        assert!(matches!(
            framed_decode(&empty, &t, &FrameConfig::new(8, 0, 0)),
            Err(Error::EmptyInput)
        ));
        let llr = block(&bits(10), &t, 0.0);
        assert!(framed_decode(&llr, &t, &FrameConfig::new(8, 0, 0).with_subframes(9)).is_err());
        let three = LlrBlock::new(vec![1.0; 30], 3).unwrap();
        assert!(framed_decode(&three, &t, &FrameConfig::new(8, 0, 0)).is_err());
    }

    #[test]
    fn random_state_is_deterministic_and_spread() {
        let mut seen = [false; 64];
        for k in 0..1000 {
            let s = random_state(5, 3, k, 64);
            assert_eq!(s, random_state(5, 3, k, 64));
            seen[s] = true;
        }
        assert!(seen.iter().all(|&x| x));
    }
}
