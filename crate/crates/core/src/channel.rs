//! BPSK over AWGN and soft-value handling.
//!
//! Soft values follow the convention that a positive value favours a `0` bit.
//! Gaussian samples come from `rand_distr::StandardNormal` (ziggurat method)
//! driven by a `ChaCha8Rng`, so a given seed yields the same noise on every
//! platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::Error;

/// Received soft values, `B` per stage, laid out stage by stage.
#[derive(Debug, Clone, PartialEq)]
pub struct LlrBlock {
    values: Vec<f64>,
    outputs: usize,
    period: usize,
}

impl LlrBlock {
    /// Wraps `values` as a block of `values.len() / outputs` stages.
    pub fn new(values: Vec<f64>, outputs: usize) -> Result<Self, Error> {
        if outputs == 0 || !values.len().is_multiple_of(outputs) {
            return Err(Error::LengthMismatch(format!(
                "{} soft values do not split into stages of {outputs}",
                values.len()
            )));
        }
        Ok(Self {
            values,
            outputs,
            period: 1,
        })
    }

    /// Marks the block as depunctured with a mask of the given period.
    pub(crate) fn with_puncture_period(mut self, period: usize) -> Self {
        self.period = period;
        self
    }

    /// Stage count `N`.
    pub fn stages(&self) -> usize {
        self.values.len() / self.outputs
    }

    /// `B`, the number of soft values per stage.
    pub fn outputs(&self) -> usize {
        self.outputs
    }

    /// Period of the puncturing mask this block was rebuilt with, `1` if none.
    pub fn puncture_period(&self) -> usize {
        self.period
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn stage(&self, t: usize) -> &[f64] {
        &self.values[t * self.outputs..(t + 1) * self.outputs]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Every value multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * c).collect(),
            ..*self
        }
    }
}

/// Maps bit 0 to `+1.0` and bit 1 to `-1.0`.
pub fn modulate_bpsk(bits: &[u8]) -> Vec<f64> {
    bits.iter()
        .map(|&b| if b & 1 == 0 { 1.0 } else { -1.0 })
        .collect()
}

/// Noise standard deviation for unit-energy BPSK at the given Eb/N0 and code rate.
pub fn sigma_from_ebn0(ebn0_db: f64, rate: f64) -> Result<f64, Error> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidRate(rate));
    }
    let ebn0 = 10f64.powf(ebn0_db / 10.0);
    Ok((1.0 / (2.0 * rate * ebn0)).sqrt())
}

/// Adds seeded white Gaussian noise of standard deviation `sigma`.
pub fn awgn(symbols: &[f64], sigma: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    awgn_with(symbols, sigma, &mut rng)
}

/// Like [`awgn`] but draws from a caller-owned generator.
pub fn awgn_with<R: Rng + ?Sized>(symbols: &[f64], sigma: f64, rng: &mut R) -> Vec<f64> {
    if sigma == 0.0 {
        return symbols.to_vec();
    }
    symbols
        .iter()
        .map(|&s| {
            let n: f64 = rng.sample(StandardNormal);
            s + sigma * n
        })
        .collect()
}

/// Replaces every value by its sign, mapping zero to `+1`.
pub fn hard_quantize(llr: &LlrBlock) -> LlrBlock {
    let mut out = llr.clone();
    hard_quantize_in_place(&mut out.values);
    out
}

/// Slice form of [`hard_quantize`], for channel outputs before depuncturing.
pub fn hard_quantize_in_place(values: &mut [f64]) {
    for v in values {
        *v = if *v >= 0.0 { 1.0 } else { -1.0 };
    }
}
