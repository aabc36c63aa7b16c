//! Encoder finite state machine.
//!
//! A state holds the previous `K-1` input bits with the most recent one in the
//! most significant position, so a transition shifts the state right and
//! inserts the new input bit at the top. Generator polynomials are `K`-bit tap
//! masks whose most significant bit multiplies the current input bit, which is
//! the usual octal convention (`171`, `133` for the `K = 7` code).
//!
//! Branch outputs are packed as `B`-bit integers with output bit `b = 0` in the
//! most significant position, so `"10"` (first output set) is the value `2`.

use crate::Error;

/// Largest supported constraint length.
pub const MAX_CONSTRAINT_LENGTH: u32 = 16;
/// Largest supported number of outputs per input bit.
pub const MAX_OUTPUTS: usize = 8;

/// Definition of a `(B, 1, K)` feed-forward convolutional code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeSpec {
    k: u32,
    polys: Vec<u32>,
}

impl CodeSpec {
    /// Builds a code from its constraint length and generator polynomials.
    pub fn new(k: u32, polys: Vec<u32>) -> Result<Self, Error> {
        if k < 2 {
            return Err(Error::InvalidCode(format!("constraint length {k} < 2")));
        }
        if k > MAX_CONSTRAINT_LENGTH {
            return Err(Error::InvalidCode(format!(
                "constraint length {k} exceeds {MAX_CONSTRAINT_LENGTH}"
            )));
        }
        if polys.len() < 2 {
            return Err(Error::InvalidCode(format!(
                "need at least 2 generator polynomials, got {}",
                polys.len()
            )));
        }
        if polys.len() > MAX_OUTPUTS {
            return Err(Error::InvalidCode(format!(
                "at most {MAX_OUTPUTS} generator polynomials supported, got {}",
                polys.len()
            )));
        }
        for &p in &polys {
            if p == 0 {
                return Err(Error::InvalidCode("zero generator polynomial".into()));
            }
            if p >> k != 0 {
                return Err(Error::InvalidCode(format!(
                    "polynomial {p:o} (octal) is wider than K = {k} bits"
                )));
            }
        }
        Ok(Self { k, polys })
    }

    /// Parses comma separated octal polynomials such as `"171,133"`.
    pub fn from_octal(k: u32, polys: &str) -> Result<Self, Error> {
        Self::new(k, parse_octal_polys(polys)?)
    }

    /// The standard `K = 7` rate-1/2 code with polynomials 171 and 133 (octal).
    pub fn k7_171_133() -> Self {
        Self::new(7, vec![0o171, 0o133]).expect("standard code is valid")
    }

    pub fn constraint_length(&self) -> u32 {
        self.k
    }

    /// Encoded bits per input bit (`B`).
    pub fn outputs(&self) -> usize {
        self.polys.len()
    }

    pub fn polys(&self) -> &[u32] {
        &self.polys
    }

    pub fn num_states(&self) -> usize {
        1 << (self.k - 1)
    }

    /// Polynomials rendered as comma separated octal.
    pub fn polys_octal(&self) -> String {
        self.polys
            .iter()
            .map(|p| format!("{p:o}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Parses `"171,133"` into `[0o171, 0o133]`.
pub fn parse_octal_polys(text: &str) -> Result<Vec<u32>, Error> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            u32::from_str_radix(s, 8)
                .map_err(|_| Error::InvalidCode(format!("`{s}` is not an octal polynomial")))
        })
        .collect()
}

/// Precomputed encoder FSM.
///
/// Every state has two successors (input 0 and 1) and two predecessors. The
/// predecessors of state `j` are listed as `(i', i'')` with `i' < i''`.
#[derive(Debug, Clone)]
pub struct Trellis {
    spec: CodeSpec,
    num_states: usize,
    next: Vec<[u32; 2]>,
    output: Vec<[u8; 2]>,
    prev: Vec<[u32; 2]>,
    // branch output of the edge prev[j][c] -> j
    prev_output: Vec<[u8; 2]>,
}

impl Trellis {
    pub fn new(spec: CodeSpec) -> Self {
        let k = spec.k;
        let b = spec.outputs();
        let num_states = spec.num_states();
        let state_mask = (num_states - 1) as u32;

        let mut next = Vec::with_capacity(num_states);
        let mut output = Vec::with_capacity(num_states);
        for i in 0..num_states as u32 {
            let mut nx = [0u32; 2];
            let mut out = [0u8; 2];
            for u in 0..2u32 {
                nx[u as usize] = (u << (k - 2)) | (i >> 1);
                let register = (u << (k - 1)) | i;
                let mut bo = 0u8;
                for (idx, &poly) in spec.polys.iter().enumerate() {
                    let bit = ((poly & register).count_ones() & 1) as u8;
                    bo |= bit << (b - 1 - idx);
                }
                out[u as usize] = bo;
            }
            next.push(nx);
            output.push(out);
        }

        let mut prev = Vec::with_capacity(num_states);
        let mut prev_output = Vec::with_capacity(num_states);
        for j in 0..num_states as u32 {
            let base = (j << 1) & state_mask;
            let u = (j >> (k - 2)) as usize;
            let p = [base, base | 1];
            prev.push(p);
            prev_output.push([output[p[0] as usize][u], output[p[1] as usize][u]]);
        }

        Self {
            spec,
            num_states,
            next,
            output,
            prev,
            prev_output,
        }
    }

    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    /// `B`, the number of encoded bits per stage.
    pub fn outputs(&self) -> usize {
        self.spec.outputs()
    }

    /// Successor of `state` under input `input`.
    #[inline]
    pub fn next(&self, state: usize, input: u8) -> usize {
        self.next[state][input as usize] as usize
    }

    /// Branch output (BO) of the edge leaving `state` under `input`.
    #[inline]
    pub fn branch_output(&self, state: usize, input: u8) -> u8 {
        self.output[state][input as usize]
    }

    /// Branch input (BI) of the edge `from -> to`, which is the top bit of `to`.
    #[inline]
    pub fn branch_input(&self, to: usize) -> u8 {
        (to >> (self.spec.k - 2)) as u8 & 1
    }

    /// The two predecessors `(i', i'')` of `state`.
    #[inline]
    pub fn prev(&self, state: usize) -> [usize; 2] {
        let p = self.prev[state];
        [p[0] as usize, p[1] as usize]
    }

    /// Branch outputs of the edges `i' -> state` and `i'' -> state`.
    #[inline]
    pub fn prev_outputs(&self, state: usize) -> [u8; 2] {
        self.prev_output[state]
    }

    /// Mask with the low `B` bits set.
    pub fn output_mask(&self) -> u8 {
        ((1u16 << self.outputs()) - 1) as u8
    }

    /// True when the two branches out of every state carry complementary outputs.
    pub fn has_complementary_branches(&self) -> bool {
        let mask = self.output_mask();
        self.output.iter().all(|o| o[0] ^ o[1] == mask)
    }
}
