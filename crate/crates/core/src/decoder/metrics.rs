//! Branch metrics.
//!
//! A branch metric is the correlation between a branch output and the received
//! soft values of one stage. Only `2^B` distinct values exist per stage, and
//! complementary outputs have negated metrics, so `2^(B-1)` values describe a
//! whole stage.

/// Correlation of branch output `bo` with the stage's soft values.
///
/// Output bit `b = 0` is the most significant bit of `bo`.
#[inline]
pub fn branch_metric(bo: u8, llr_t: &[f64]) -> f64 {
    let b = llr_t.len();
    llr_t.iter().enumerate().fold(0.0, |acc, (idx, &l)| {
        if (bo >> (b - 1 - idx)) & 1 == 1 {
            acc - l
        } else {
            acc + l
        }
    })
}

/// Metrics for `bo` in `0..2^(B-1)`, i.e. the outputs whose first bit is 0.
pub fn stage_metrics(llr_t: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; 1 << (llr_t.len() - 1)];
    stage_metrics_into(llr_t, &mut out);
    out
}

/// Buffer form of [`stage_metrics`].
#[inline]
pub fn stage_metrics_into(llr_t: &[f64], out: &mut [f64]) {
    debug_assert_eq!(out.len(), 1 << (llr_t.len() - 1));
    for (bo, m) in out.iter_mut().enumerate() {
        *m = branch_metric(bo as u8, llr_t);
    }
}

/// Metric of any `bo` reconstructed from the half table.
#[inline]
pub fn metric_from_half(half: &[f64], bo: u8) -> f64 {
    let n = half.len();
    let bo = bo as usize;
    if bo < n {
        half[bo]
    } else {
        -half[bo ^ (2 * n - 1)]
    }
}

/// Expands the half table into all `2^B` metrics.
#[inline]
pub(crate) fn expand_half(half: &[f64], full: &mut [f64]) {
    let n = half.len();
    let (lo, hi) = full.split_at_mut(n);
    lo.copy_from_slice(half);
    // hi[k] is bo = n + k, whose complement is n - 1 - k
    for (k, m) in hi.iter_mut().enumerate() {
        *m = -half[n - 1 - k];
    }
}
