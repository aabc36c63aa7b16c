//! End-to-end BER measurement.
//!
//! Each Eb/N0 point is simulated as a number of independent blocks. A block
//! draws random bits, encodes and punctures them, sends them through BPSK over
//! AWGN, depunctures and decodes. The generator of a block is seeded from the
//! sweep seed, the Eb/N0 value and the block index only, so two sweeps with the
//! same seed see the same bits and the same noise whatever decoder they run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use viterbi::channel::{awgn_with, hard_quantize_in_place, modulate_bpsk, sigma_from_ebn0};
use viterbi::codec::{encode, puncture};
use viterbi::decoder::{depuncture, framed_decode, serial_decode};
use viterbi::{CodeSpec, FrameConfig, PuncturePattern, TracebackStart, Trellis};

use crate::Error;

/// Stages per simulated block. Divisible by every puncturing period up to 6.
pub const DEFAULT_BLOCK_LEN: usize = 61_440;

/// Errors a point needs before its BER counts as measured.
pub const MIN_ERRORS: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecoderMode {
    /// Whole-block decoding with a single traceback.
    Serial,
    Framed(FrameConfig),
}

impl DecoderMode {
    pub fn label(&self) -> &'static str {
        match self {
            DecoderMode::Serial => "serial",
            DecoderMode::Framed(cfg) if cfg.f0 == 0 => "framed",
            DecoderMode::Framed(FrameConfig {
                traceback_start: TracebackStart::Random { .. },
                ..
            }) => "random-start",
            DecoderMode::Framed(_) => "parallel",
        }
    }

    pub fn frame_config(&self) -> Option<&FrameConfig> {
        match self {
            DecoderMode::Serial => None,
            DecoderMode::Framed(cfg) => Some(cfg),
        }
    }
}

/// Soft values straight from the channel, or their signs only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Decision {
    #[default]
    Soft,
    Hard,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub spec: CodeSpec,
    pub pattern: PuncturePattern,
    pub mode: DecoderMode,
    pub decision: Decision,
    pub ebn0_db: Vec<f64>,
    /// Requested information bits per point.
    pub bits: u64,
    /// When set, each point runs at least `MIN_ERRORS / target_ber` bits.
    pub target_ber: Option<f64>,
    pub block_len: usize,
    pub seed: u64,
    /// Replaces the Eb/N0-derived noise level.
    pub sigma: Option<f64>,
}

impl SweepConfig {
    pub fn new(spec: CodeSpec, mode: DecoderMode) -> Self {
        let b = spec.outputs();
        Self {
            spec,
            pattern: PuncturePattern::identity(b),
            mode,
            decision: Decision::Soft,
            ebn0_db: Vec::new(),
            bits: 1_000_000,
            target_ber: None,
            block_len: DEFAULT_BLOCK_LEN,
            seed: 0,
            sigma: None,
        }
    }

    /// Bits simulated per point, rounded up to whole blocks.
    pub fn bits_per_point(&self) -> u64 {
        let mut n = self.bits;
        if let Some(t) = self.target_ber {
            n = n.max((MIN_ERRORS as f64 / t).ceil() as u64);
        }
        n.div_ceil(self.block_len as u64) * self.block_len as u64
    }

    pub fn mode_label(&self) -> String {
        match self.decision {
            Decision::Soft => self.mode.label().to_string(),
            Decision::Hard => format!("{}-hard", self.mode.label()),
        }
    }
}

/// Measured bit error rate at one Eb/N0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BerPoint {
    pub ebn0_db: f64,
    pub bits_tested: u64,
    pub bit_errors: u64,
    pub ber: f64,
}

impl BerPoint {
    pub fn new(ebn0_db: f64, bits_tested: u64, bit_errors: u64) -> Self {
        Self {
            ebn0_db,
            bits_tested,
            bit_errors,
            ber: if bits_tested == 0 {
                0.0
            } else {
                bit_errors as f64 / bits_tested as f64
            },
        }
    }

    /// Enough errors were observed for the rate to be trusted.
    pub fn is_valid(&self) -> bool {
        self.bit_errors >= MIN_ERRORS
    }
}

/// Runs the sweep, one [`BerPoint`] per Eb/N0 value in the given order.
pub fn run_ber_sweep(cfg: &SweepConfig) -> Result<Vec<BerPoint>, Error> {
    cfg.pattern.check_outputs(cfg.spec.outputs())?;
    if cfg.block_len == 0 || !cfg.block_len.is_multiple_of(cfg.pattern.period()) {
        return Err(Error::Config(format!(
            "block length {} must be a positive multiple of the puncturing period {}",
            cfg.block_len,
            cfg.pattern.period()
        )));
    }
    if let DecoderMode::Framed(fc) = &cfg.mode {
        let period = if cfg.pattern.is_identity() {
            1
        } else {
            cfg.pattern.period()
        };
        fc.validate(period)?;
    }
    let trellis = Trellis::new(cfg.spec.clone());
    let bits = cfg.bits_per_point();
    let blocks = bits / cfg.block_len as u64;

    cfg.ebn0_db
        .iter()
        .map(|&ebn0| {
            let sigma = match cfg.sigma {
                Some(s) => s,
                None => sigma_from_ebn0(ebn0, cfg.pattern.code_rate())?,
            };
            let errors = (0..blocks)
                .into_par_iter()
                .map(|blk| run_block(cfg, &trellis, ebn0, sigma, blk))
                .try_reduce(|| 0, |a, b| Ok(a + b))?;
            Ok(BerPoint::new(ebn0, bits, errors))
        })
        .collect()
}

fn block_seed(seed: u64, ebn0_db: f64, block: u64) -> u64 {
    let key = (ebn0_db * 1000.0).round() as i64 as u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: u64 = rng.random();
    a ^ key.wrapping_mul(0x9e37_79b9_7f4a_7c15)
        ^ block.wrapping_mul(0xd1b5_4a32_d192_ed03).rotate_left(17)
}

fn run_block(
    cfg: &SweepConfig,
    trellis: &Trellis,
    ebn0_db: f64,
    sigma: f64,
    block: u64,
) -> Result<u64, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(block_seed(cfg.seed, ebn0_db, block));
    let bits: Vec<u8> = (0..cfg.block_len)
        .map(|_| rng.random::<bool>() as u8)
        .collect();
    let tx = modulate_bpsk(&puncture(&encode(&bits, trellis), &cfg.pattern));
    let mut rx = awgn_with(&tx, sigma, &mut rng);
    if cfg.decision == Decision::Hard {
        hard_quantize_in_place(&mut rx);
    }
    let llr = depuncture(&rx, &cfg.pattern)?;
    let decoded = match &cfg.mode {
        DecoderMode::Serial => serial_decode(&llr, trellis)?,
        DecoderMode::Framed(fc) => framed_decode(&llr, trellis, fc)?,
    };
    Ok(decoded
        .bits
        .iter()
        .zip(&bits)
        .filter(|(a, b)| a != b)
        .count() as u64)
}
