//! Receiver-side inverse of puncturing.

use crate::channel::LlrBlock;
use crate::codec::PuncturePattern;
use crate::Error;

/// Re-inserts `0.0` at every punctured position.
///
/// The stage count is recovered from the received length; a length that no
/// whole number of stages produces is rejected.
pub fn depuncture(received: &[f64], pattern: &PuncturePattern) -> Result<LlrBlock, Error> {
    let b = pattern.outputs();
    if pattern.is_identity() {
        return LlrBlock::new(received.to_vec(), b);
    }
    let stages = stages_for(received.len(), pattern)?;
    let mut values = Vec::with_capacity(stages * b);
    let mut src = received.iter();
    for t in 0..stages {
        for idx in 0..b {
            if pattern.keeps(t, idx) {
                values.push(*src.next().expect("length checked"));
            } else {
                values.push(0.0);
            }
        }
    }
    Ok(LlrBlock::new(values, b)?.with_puncture_period(pattern.period()))
}

fn stages_for(len: usize, pattern: &PuncturePattern) -> Result<usize, Error> {
    let kept = pattern.kept_per_period();
    let mut stages = len / kept * pattern.period();
    let mut remaining = len % kept;
    let mut col = 0;
    while remaining > 0 {
        let here = (0..pattern.outputs())
            .filter(|&idx| pattern.keeps(col, idx))
            .count();
        if here > remaining {
            return Err(Error::LengthMismatch(format!(
                "{len} received values do not match puncturing pattern {pattern}"
            )));
        }
        remaining -= here;
        stages += 1;
        col += 1;
    }
    Ok(stages)
}
