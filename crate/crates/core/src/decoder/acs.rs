//! Add-compare-select and survivor storage.

use crate::decoder::metrics::{expand_half, metric_from_half};
use crate::trellis::Trellis;

/// Path metrics of the previous and current stage.
///
/// Only one previous stage is ever needed, so the lane is a swapped pair of
/// `2^(K-1)` arrays.
#[derive(Debug, Clone)]
pub struct PathMetricLane {
    prev: Vec<f64>,
    cur: Vec<f64>,
}

impl PathMetricLane {
    pub fn new(num_states: usize) -> Self {
        Self {
            prev: vec![0.0; num_states],
            cur: vec![0.0; num_states],
        }
    }

    /// Zeroes every metric.
    pub fn reset(&mut self) {
        self.prev.fill(0.0);
        self.cur.fill(0.0);
    }

    /// Metrics after the most recent [`step`](Self::step).
    pub fn metrics(&self) -> &[f64] {
        &self.prev
    }

    /// Lowest-indexed state holding the largest metric.
    pub fn best_state(&self) -> usize {
        argmax_lowest(&self.prev)
    }

    /// One ACS stage. `full` holds all `2^B` branch metrics of the stage and
    /// `column` receives one decision bit per state (set when `i''` wins).
    #[inline]
    pub(crate) fn step(&mut self, tables: &AcsTables, full: &[f64], column: &mut [u64]) {
        let prev = &self.prev[..];
        let mask = prev.len() - 1;
        // branch-free select; decisions are packed 64 states per word
        for (w, (cur, bo)) in self
            .cur
            .chunks_mut(64)
            .zip(tables.bo.chunks(64))
            .enumerate()
        {
            let mut word = 0u64;
            let base = w * 64;
            for (k, (cur, bo)) in cur.iter_mut().zip(bo).enumerate() {
                let i = ((base + k) << 1) & mask;
                let a = prev[i] + full[bo[0] as usize];
                let b = prev[i | 1] + full[bo[1] as usize];
                let keep_a = a > b;
                *cur = if keep_a { a } else { b };
                word |= (!keep_a as u64) << k;
            }
            column[w] = word;
        }
        std::mem::swap(&mut self.prev, &mut self.cur);
    }
}

/// Lowest index of the maximum; NaNs never win.
pub(crate) fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (j, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = j;
        }
    }
    best
}

/// Per-trellis branch output lookups for the ACS kernel.
#[derive(Debug, Clone)]
pub(crate) struct AcsTables {
    bo: Vec<[u8; 2]>,
    half_len: usize,
}

impl AcsTables {
    pub(crate) fn new(trellis: &Trellis) -> Self {
        Self {
            bo: (0..trellis.num_states())
                .map(|j| trellis.prev_outputs(j))
                .collect(),
            half_len: 1 << (trellis.outputs() - 1),
        }
    }

    pub(crate) fn half_len(&self) -> usize {
        self.half_len
    }

    pub(crate) fn expand(&self, half: &[f64], full: &mut [f64]) {
        expand_half(half, full);
    }
}

/// Winning predecessor of every state at every stage of a window.
///
/// Stored as one decision bit per state and stage: bit clear selects the first
/// predecessor `i'`, bit set selects `i''`.
#[derive(Debug, Clone, Default)]
pub struct SurvivorMatrix {
    words: usize,
    stages: usize,
    state_mask: usize,
    data: Vec<u64>,
}

impl SurvivorMatrix {
    pub fn new(num_states: usize, stages: usize) -> Self {
        let mut s = Self::default();
        s.reset(num_states, stages);
        s
    }

    /// Resizes for a new window, keeping the allocation.
    pub fn reset(&mut self, num_states: usize, stages: usize) {
        self.words = num_states.div_ceil(64);
        self.stages = stages;
        self.state_mask = num_states - 1;
        self.data.clear();
        self.data.resize(self.words * stages, 0);
    }

    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn num_states(&self) -> usize {
        self.state_mask + 1
    }

    #[inline]
    pub(crate) fn column_mut(&mut self, t: usize) -> &mut [u64] {
        &mut self.data[t * self.words..(t + 1) * self.words]
    }

    #[inline]
    pub fn decision(&self, t: usize, state: usize) -> bool {
        (self.data[t * self.words + (state >> 6)] >> (state & 63)) & 1 == 1
    }

    /// Survivor predecessor of `state` at local stage `t`.
    #[inline]
    pub fn predecessor(&self, t: usize, state: usize) -> usize {
        ((state << 1) & self.state_mask) | self.decision(t, state) as usize
    }
}

/// One ACS stage from `prev` metrics and the stage's half metric table.
///
/// Returns the new metrics and the selected predecessor of every state. Ties
/// select the second predecessor `i''`.
pub fn acs_stage(prev: &[f64], half_metrics: &[f64], trellis: &Trellis) -> (Vec<f64>, Vec<usize>) {
    let n = trellis.num_states();
    assert_eq!(prev.len(), n);
    let mut cur = Vec::with_capacity(n);
    let mut pi = Vec::with_capacity(n);
    for j in 0..n {
        let [i1, i2] = trellis.prev(j);
        let [bo1, bo2] = trellis.prev_outputs(j);
        let a = prev[i1] + metric_from_half(half_metrics, bo1);
        let b = prev[i2] + metric_from_half(half_metrics, bo2);
        if a > b {
            cur.push(a);
            pi.push(i1);
        } else {
            cur.push(b);
            pi.push(i2);
        }
    }
    (cur, pi)
}
