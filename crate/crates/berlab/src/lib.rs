//! BER and throughput harness for the `viterbi` decoders.
//!
//! [`run_ber_sweep`] simulates the whole link for a range of Eb/N0 values and
//! counts decoded bit errors, [`ebn0_gap`] compares two resulting curves at a
//! target BER and [`run_throughput_bench`] times decoding alone. Curves are
//! written and read back as CSV by [`report`].
//!
//! Gaps are always taken against the unframed serial decoder run with the same
//! seed and bit budget, so both curves see identical bits and noise.

pub mod bench;
pub mod gap;
pub mod report;
pub mod sweep;

pub use bench::{run_throughput_bench, BenchConfig, BenchRow};
pub use gap::{ebn0_gap, Crossing, GapReport, DEFAULT_TARGET_BER};
pub use report::{emit_csv, BerCurve, CurveMeta};
pub use sweep::{run_ber_sweep, BerPoint, Decision, DecoderMode, SweepConfig};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Decoder(#[from] viterbi::Error),
    #[error("{0}")]
    Config(String),
    #[error("no bracket: {0}")]
    NoBracket(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Parses `start:step:stop` (inclusive) or a single value into Eb/N0 points.
pub fn parse_ebn0_range(text: &str) -> Result<Vec<f64>, Error> {
    let bad = || Error::Parse(format!("expected a:s:b or a single value, got {text:?}"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x] if x.is_finite() => Ok(vec![x]),
        [a, s, b] if a.is_finite() && b.is_finite() && s > 0.0 && b >= a => {
            // integer stepping keeps 0.1-style steps from drifting
            let n = ((b - a) / s + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| a + i as f64 * s).collect())
        }
        _ => Err(bad()),
    }
}
