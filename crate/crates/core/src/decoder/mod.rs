//! Viterbi decoders.
//!
//! [`serial_decode`] runs the textbook forward pass over the whole stream and
//! traces back once. [`framed_decode`] tiles the stream into frames of `f`
//! decoded bits, each processed independently over a window extended by `v1`
//! stages on the left and `v2` on the right. Within a frame the forward pass
//! and traceback run back to back, so survivor storage is bounded by the frame
//! window. With `f0 > 0` the traceback of a frame is itself split into
//! subframes of `f0` bits that are traced independently.

mod acs;
mod depuncture;
mod framed;
mod metrics;
mod serial;

pub use acs::{acs_stage, PathMetricLane, SurvivorMatrix};
pub use depuncture::depuncture;
pub use framed::{framed_decode, parallel_traceback, FrameLayout, Subframe};
pub use metrics::{branch_metric, metric_from_half, stage_metrics, stage_metrics_into};
pub use serial::serial_decode;

use crate::Error;

/// Where each traceback starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TracebackStart {
    /// The best state recorded during the forward pass at the start stage.
    #[default]
    StoredMax,
    /// A uniformly drawn state, reproducible from the seed. Tracebacks that
    /// start at the last stage of a frame still use the best final state.
    Random { seed: u64 },
}

/// Frame tiling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameConfig {
    /// Decoded bits per frame.
    pub f: usize,
    /// Left overlap in stages.
    pub v1: usize,
    /// Right overlap in stages, also the overlap of each traceback subframe.
    pub v2: usize,
    /// Subframe length for parallel traceback; `0` traces each frame once.
    pub f0: usize,
    pub traceback_start: TracebackStart,
}

impl FrameConfig {
    pub fn new(f: usize, v1: usize, v2: usize) -> Self {
        Self {
            f,
            v1,
            v2,
            f0: 0,
            traceback_start: TracebackStart::StoredMax,
        }
    }

    /// A single frame with no overlap covering `n` stages.
    pub fn unframed(n: usize) -> Self {
        Self::new(n.max(1), 0, 0)
    }

    pub fn with_subframes(mut self, f0: usize) -> Self {
        self.f0 = f0;
        self
    }

    pub fn with_start(mut self, start: TracebackStart) -> Self {
        self.traceback_start = start;
        self
    }

    /// Checks the parameters against a puncturing period (`1` when unpunctured).
    pub fn validate(&self, period: usize) -> Result<(), Error> {
        if self.f == 0 {
            return Err(Error::InvalidFrameConfig("f must be at least 1".into()));
        }
        if self.f0 > self.f {
            return Err(Error::InvalidFrameConfig(format!(
                "subframe length f0 = {} exceeds frame length f = {}",
                self.f0, self.f
            )));
        }
        if period > 1 {
            for (name, v) in [("f", self.f), ("v1", self.v1), ("v2", self.v2)] {
                if v % period != 0 {
                    return Err(Error::InvalidFrameConfig(format!(
                        "{name} = {v} is not a multiple of the puncturing period {period}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of frames covering `n` stages.
    pub fn num_frames(&self, n: usize) -> usize {
        n.div_ceil(self.f)
    }

    /// Layout of frame `m` in a stream of `n` stages.
    pub fn frame(&self, m: usize, n: usize) -> FrameLayout {
        let emit_start = m * self.f;
        let emit_end = (emit_start + self.f).min(n);
        FrameLayout {
            index: m,
            start: emit_start.saturating_sub(self.v1),
            emit_start,
            emit_end,
            end: (emit_end + self.v2).min(n),
        }
    }

    pub fn frames(&self, n: usize) -> impl Iterator<Item = FrameLayout> + '_ {
        (0..self.num_frames(n)).map(move |m| self.frame(m, n))
    }
}

/// Counters gathered while decoding.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecodeStats {
    pub frames: u64,
    /// ACS stages executed, overlaps included.
    pub stages: u64,
    pub traceback_starts: u64,
}

impl std::ops::Add for DecodeStats {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            frames: self.frames + o.frames,
            stages: self.stages + o.stages,
            traceback_starts: self.traceback_starts + o.traceback_starts,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutput {
    pub bits: Vec<u8>,
    pub stats: DecodeStats,
}
