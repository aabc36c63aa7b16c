//! Soft-decision Viterbi decoding of feed-forward convolutional codes.
//!
//! The crate covers the whole link used to exercise a decoder: building the
//! encoder state machine ([`trellis`]), encoding and puncturing ([`codec`]),
//! BPSK over AWGN ([`channel`]) and the decoders themselves ([`decoder`]).
//!
//! ```
//! use viterbi::{channel, codec, decoder, CodeSpec, FrameConfig, Trellis};
//!
//! let trellis = Trellis::new(CodeSpec::k7_171_133());
//! let bits = vec![1, 0, 1, 1, 0, 0, 1, 0];
//! let soft = channel::modulate_bpsk(&codec::encode(&bits, &trellis));
//! let llr = channel::LlrBlock::new(soft, 2).unwrap();
//! let out = decoder::framed_decode(&llr, &trellis, &FrameConfig::new(4, 2, 4)).unwrap();
//! assert_eq!(out.bits, bits);
//! ```

pub mod channel;
pub mod codec;
pub mod decoder;
pub mod trellis;

pub use channel::LlrBlock;
pub use codec::PuncturePattern;
pub use decoder::{DecodeOutput, DecodeStats, FrameConfig, TracebackStart};
pub use trellis::{CodeSpec, Trellis};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("invalid puncturing pattern: {0}")]
    InvalidPattern(String),
    #[error("invalid frame configuration: {0}")]
    InvalidFrameConfig(String),
    #[error("code rate must be in (0, 1], got {0}")]
    InvalidRate(f64),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("empty input")]
    EmptyInput,
}
