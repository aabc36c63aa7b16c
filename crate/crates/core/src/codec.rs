//! Convolutional encoding and puncturing.

use std::fmt;
use std::str::FromStr;

use crate::trellis::Trellis;
use crate::Error;

/// Encodes `bits` starting from the all-zero state, `B` output bits per input.
///
/// No tail is appended; the final encoder state is whatever the input leaves.
pub fn encode(bits: &[u8], trellis: &Trellis) -> Vec<u8> {
    let b = trellis.outputs();
    let mut out = Vec::with_capacity(bits.len() * b);
    let mut state = 0usize;
    for &bit in bits {
        let u = bit & 1;
        let bo = trellis.branch_output(state, u);
        for idx in 0..b {
            out.push((bo >> (b - 1 - idx)) & 1);
        }
        state = trellis.next(state, u);
    }
    out
}

/// A puncturing mask of `B` rows by `period` columns.
///
/// Column `t % period` applies to the `B` coded bits of stage `t`. A `1` keeps
/// the coded bit, a `0` drops it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuncturePattern {
    name: String,
    rows: Vec<Vec<bool>>,
}

impl PuncturePattern {
    pub fn new(name: impl Into<String>, rows: Vec<Vec<bool>>) -> Result<Self, Error> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidPattern("empty mask".into()));
        }
        let period = rows[0].len();
        if rows.iter().any(|r| r.len() != period) {
            return Err(Error::InvalidPattern("mask rows differ in length".into()));
        }
        for col in 0..period {
            if !rows.iter().any(|r| r[col]) {
                return Err(Error::InvalidPattern(format!(
                    "column {col} drops every coded bit of its stage"
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            rows,
        })
    }

    /// No puncturing, `B` rows of a single `1`.
    pub fn identity(b: usize) -> Self {
        Self {
            name: "r12".into(),
            rows: vec![vec![true]; b],
        }
    }

    /// Rate 2/3 from a rate-1/2 mother code: `[[1,1],[1,0]]`.
    pub fn rate_2_3() -> Self {
        Self::new("r23", vec![vec![true, true], vec![true, false]]).unwrap()
    }

    /// Rate 3/4 from a rate-1/2 mother code: `[[1,1,0],[1,0,1]]`.
    pub fn rate_3_4() -> Self {
        Self::new(
            "r34",
            vec![vec![true, true, false], vec![true, false, true]],
        )
        .unwrap()
    }

    /// Resolves `"r12"`, `"r23"`, `"r34"` or an explicit mask such as `"11;10"`.
    ///
    /// `b` is only used for `"r12"`; named patterns other than the identity
    /// are rate-1/2 masks.
    pub fn parse(text: &str, b: usize) -> Result<Self, Error> {
        match text.trim() {
            "r12" => Ok(Self::identity(b)),
            "r23" => Ok(Self::rate_2_3()),
            "r34" => Ok(Self::rate_3_4()),
            mask => {
                let rows = mask
                    .split(';')
                    .map(|row| {
                        row.trim()
                            .chars()
                            .map(|c| match c {
                                '1' => Ok(true),
                                '0' => Ok(false),
                                other => Err(Error::InvalidPattern(format!(
                                    "unexpected `{other}` in mask `{mask}`"
                                ))),
                            })
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Self::new(mask, rows)
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of rows, which must equal the code's `B`.
    pub fn outputs(&self) -> usize {
        self.rows.len()
    }

    /// Number of stages covered by one copy of the mask.
    pub fn period(&self) -> usize {
        self.rows[0].len()
    }

    #[inline]
    pub fn keeps(&self, stage: usize, output: usize) -> bool {
        self.rows[output][stage % self.period()]
    }

    /// Kept bits in one full mask.
    pub fn kept_per_period(&self) -> usize {
        self.rows.iter().flatten().filter(|&&k| k).count()
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().flatten().all(|&k| k)
    }

    /// Information bits per transmitted bit after puncturing.
    pub fn code_rate(&self) -> f64 {
        self.period() as f64 / self.kept_per_period() as f64
    }

    /// Transmitted length for `stages` encoder stages.
    pub fn punctured_len(&self, stages: usize) -> usize {
        let full = stages / self.period();
        let tail: usize = (0..stages % self.period())
            .map(|col| self.rows.iter().filter(|r| r[col]).count())
            .sum();
        full * self.kept_per_period() + tail
    }

    pub fn check_outputs(&self, b: usize) -> Result<(), Error> {
        if self.outputs() != b {
            return Err(Error::InvalidPattern(format!(
                "mask has {} rows but the code emits {b} bits per stage",
                self.outputs()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for PuncturePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl FromStr for PuncturePattern {
    type Err = Error;

    /// Parses with `B = 2` for the identity pattern.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s, 2)
    }
}

/// Removes the coded bits at mask-0 positions, keeping order.
///
/// `coded` is laid out stage by stage, `B` values per stage. Works on hard
/// bits as well as soft values.
pub fn puncture<T: Copy>(coded: &[T], pattern: &PuncturePattern) -> Vec<T> {
    let b = pattern.outputs();
    debug_assert_eq!(coded.len() % b, 0);
    if pattern.is_identity() {
        return coded.to_vec();
    }
    let mut out = Vec::with_capacity(pattern.punctured_len(coded.len() / b));
    for (stage, chunk) in coded.chunks(b).enumerate() {
        for (idx, &v) in chunk.iter().enumerate() {
            if pattern.keeps(stage, idx) {
                out.push(v);
            }
        }
    }
    out
}
