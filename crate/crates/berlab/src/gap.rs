//! Horizontal distance between two BER curves.

use crate::sweep::BerPoint;
use crate::Error;

/// Target BER used when none is given.
pub const DEFAULT_TARGET_BER: f64 = 1e-4;

/// Where one curve crosses the target, with the two points it was
/// interpolated between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub ebn0_db: f64,
    pub lower: BerPoint,
    pub upper: BerPoint,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    /// Measured minus reference Eb/N0 at `target_ber`.
    pub gap_db: f64,
    pub target_ber: f64,
    pub measured: Crossing,
    pub reference: Crossing,
}

/// Eb/N0 at which `points` reaches `target_ber`.
///
/// Only valid points take part. They are sorted by Eb/N0 and the first
/// consecutive pair with `ber[i] >= target >= ber[i+1]` is interpolated
/// linearly in Eb/N0 and logarithmically in BER.
pub fn crossing(points: &[BerPoint], target_ber: f64) -> Result<Crossing, Error> {
    if !(target_ber > 0.0 && target_ber < 1.0) {
        return Err(Error::Config(format!(
            "target BER {target_ber} is not in (0, 1)"
        )));
    }
    let mut valid: Vec<BerPoint> = points.iter().copied().filter(BerPoint::is_valid).collect();
    valid.sort_by(|a, b| a.ebn0_db.total_cmp(&b.ebn0_db));
    for w in valid.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.ber >= target_ber && target_ber >= b.ber {
            let ebn0_db = if a.ber == b.ber {
                a.ebn0_db
            } else {
                let frac = (a.ber.ln() - target_ber.ln()) / (a.ber.ln() - b.ber.ln());
                a.ebn0_db + frac * (b.ebn0_db - a.ebn0_db)
            };
            return Ok(Crossing {
                ebn0_db,
                lower: a,
                upper: b,
            });
        }
    }
    let span = match (valid.first(), valid.last()) {
        (Some(lo), Some(hi)) => format!("valid BER spans {:.3e}..{:.3e}", lo.ber, hi.ber),
        _ => "no valid points".to_string(),
    };
    Err(Error::NoBracket(format!(
        "target BER {target_ber:.3e} not bracketed, {span}"
    )))
}

/// Gap of `measured` against `reference` at `target_ber`.
pub fn ebn0_gap(
    measured: &[BerPoint],
    reference: &[BerPoint],
    target_ber: f64,
) -> Result<GapReport, Error> {
    let m = crossing(measured, target_ber)?;
    let r = crossing(reference, target_ber)?;
    Ok(GapReport {
        gap_db: m.ebn0_db - r.ebn0_db,
        target_ber,
        measured: m,
        reference: r,
    })
}
