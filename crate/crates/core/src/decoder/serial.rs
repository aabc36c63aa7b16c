//! Whole-stream reference decoder.
//!
//! One forward pass over all stages with branch metrics evaluated on the fly,
//! then a single traceback from the best final state. Every other decoder in
//! this crate is checked against it.

use crate::channel::LlrBlock;
use crate::decoder::acs::{argmax_lowest, SurvivorMatrix};
use crate::decoder::metrics::branch_metric;
use crate::decoder::{DecodeOutput, DecodeStats};
use crate::trellis::Trellis;
use crate::Error;

pub fn serial_decode(llr: &LlrBlock, trellis: &Trellis) -> Result<DecodeOutput, Error> {
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
    let states = trellis.num_states();

    let mut sigma = vec![0.0f64; states];
    let mut next = vec![0.0f64; states];
    let mut pi = SurvivorMatrix::new(states, n);
    for t in 0..n {
        let l = llr.stage(t);
        let column = pi.column_mut(t);
        for j in 0..states {
            let [i1, i2] = trellis.prev(j);
            let u = trellis.branch_input(j);
            let s1 = sigma[i1] + branch_metric(trellis.branch_output(i1, u), l);
            let s2 = sigma[i2] + branch_metric(trellis.branch_output(i2, u), l);
            let keep_first = s1 > s2;
            next[j] = if keep_first { s1 } else { s2 };
            column[j / 64] |= (!keep_first as u64) << (j % 64);
        }
        std::mem::swap(&mut sigma, &mut next);
    }

    let mut state = argmax_lowest(&sigma);
    let mut bits = vec![0u8; n];
    for t in (0..n).rev() {
        bits[t] = trellis.branch_input(state);
        state = pi.predecessor(t, state);
    }

    Ok(DecodeOutput {
        bits,
        stats: DecodeStats {
            frames: 1,
            stages: n as u64,
            traceback_starts: 1,
        },
    })
}
