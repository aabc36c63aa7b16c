//! CSV emission and loading of BER curves.

use std::io::{Read, Write};
use std::path::Path;

use crate::sweep::{BerPoint, DecoderMode, SweepConfig};
use crate::Error;

pub const CSV_HEADER: [&str; 14] = [
    "mode", "k", "polys", "rate", "f", "v1", "v2", "f0", "ebn0_db", "bits", "errors", "ber",
    "valid", "seed",
];

/// Everything that identifies a curve apart from its points.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveMeta {
    pub mode: String,
    pub k: u32,
    /// Octal generators separated by `/`.
    pub polys: String,
    /// Puncturing pattern name.
    pub rate: String,
    pub f: usize,
    pub v1: usize,
    pub v2: usize,
    pub f0: usize,
    pub seed: u64,
}

impl CurveMeta {
    pub fn from_sweep(cfg: &SweepConfig) -> Self {
        let (f, v1, v2, f0) = match cfg.mode {
            DecoderMode::Serial => (0, 0, 0, 0),
            DecoderMode::Framed(fc) => (fc.f, fc.v1, fc.v2, fc.f0),
        };
        Self {
            mode: cfg.mode_label(),
            k: cfg.spec.constraint_length(),
            polys: cfg.spec.polys_octal().replace(',', "/"),
            rate: cfg.pattern.name().to_string(),
            f,
            v1,
            v2,
            f0,
            seed: cfg.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerCurve {
    pub meta: CurveMeta,
    pub points: Vec<BerPoint>,
}

/// Writes every point of every curve to `path`, see [`write_csv`].
pub fn emit_csv(curves: &[BerCurve], path: impl AsRef<Path>) -> Result<(), Error> {
    let file = std::fs::File::create(path.as_ref())?;
    write_csv(curves, std::io::BufWriter::new(file))
}

/// Header plus one row per point. Rows are ordered by Eb/N0, then by curve
/// metadata, so the output does not depend on the order curves were run in.
pub fn write_csv<W: Write>(curves: &[BerCurve], out: W) -> Result<(), Error> {
    let mut rows: Vec<(&CurveMeta, &BerPoint)> = curves
        .iter()
        .flat_map(|c| c.points.iter().map(move |p| (&c.meta, p)))
        .collect();
    rows.sort_by(|a, b| {
        a.1.ebn0_db
            .total_cmp(&b.1.ebn0_db)
            .then_with(|| a.0.cmp(b.0))
    });

    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for (m, p) in rows {
        w.write_record([
            m.mode.clone(),
            m.k.to_string(),
            m.polys.clone(),
            m.rate.clone(),
            m.f.to_string(),
            m.v1.to_string(),
            m.v2.to_string(),
            m.f0.to_string(),
            format!("{:.6}", p.ebn0_db),
            p.bits_tested.to_string(),
            p.bit_errors.to_string(),
            format!("{:.6e}", p.ber),
            p.is_valid().to_string(),
            m.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv_file(path: impl AsRef<Path>) -> Result<Vec<BerCurve>, Error> {
    read_csv(std::fs::File::open(path.as_ref())?)
}

/// Groups rows back into curves, in order of first appearance.
pub fn read_csv<R: Read>(input: R) -> Result<Vec<BerCurve>, Error> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse(format!(
            "unexpected CSV header: {}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut curves: Vec<BerCurve> = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or_default();
        let num = |i: usize| -> Result<u64, Error> {
            field(i).parse().map_err(|_| {
                Error::Parse(format!(
                    "row {}: bad {} {:?}",
                    line + 1,
                    CSV_HEADER[i],
                    field(i)
                ))
            })
        };
        let ebn0_db: f64 = field(8)
            .parse()
            .map_err(|_| Error::Parse(format!("row {}: bad ebn0_db {:?}", line + 1, field(8))))?;
        let meta = CurveMeta {
            mode: field(0).to_string(),
            k: num(1)? as u32,
            polys: field(2).to_string(),
            rate: field(3).to_string(),
            f: num(4)? as usize,
            v1: num(5)? as usize,
            v2: num(6)? as usize,
            f0: num(7)? as usize,
            seed: num(13)?,
        };
        let point = BerPoint::new(ebn0_db, num(9)?, num(10)?);
        match curves.iter_mut().find(|c| c.meta == meta) {
            Some(c) => c.points.push(point),
            None => curves.push(BerCurve {
                meta,
                points: vec![point],
            }),
        }
    }
    Ok(curves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use viterbi::{CodeSpec, FrameConfig};

    fn curve(mode: DecoderMode, pts: &[(f64, u64)]) -> BerCurve {
        let mut cfg = SweepConfig::new(CodeSpec::k7_171_133(), mode);
        cfg.seed = 7;
        BerCurve {
            meta: CurveMeta::from_sweep(&cfg),
            points: pts
                .iter()
                .map(|&(x, e)| BerPoint::new(x, 1_000_000, e))
                .collect(),
        }
    }

    fn to_string(curves: &[BerCurve]) -> String {
        let mut buf = Vec::new();
        write_csv(curves, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn empty_is_header_only() {
        assert_eq!(
            to_string(&[]),
            "mode,k,polys,rate,f,v1,v2,f0,ebn0_db,bits,errors,ber,valid,seed\n"
        );
    }

    #[test]
    fn one_point_two_lines() {
        let s = to_string(&[curve(DecoderMode::Serial, &[(4.0, 123)])]);
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[1],
            "serial,7,171/133,r12,0,0,0,0,4.000000,1000000,123,1.230000e-4,true,7"
        );
    }

    #[test]
    fn rows_sorted_and_round_trip() {
        let framed = curve(
            DecoderMode::Framed(FrameConfig::new(32, 20, 10)),
            &[(3.0, 900), (2.0, 5000)],
        );
        let serial = curve(DecoderMode::Serial, &[(2.0, 4000), (3.0, 50)]);
        let s = to_string(&[serial.clone(), framed.clone()]);
        assert_eq!(s, to_string(&[framed.clone(), serial.clone()]));
        let ebn0: Vec<&str> = s
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(8).unwrap())
            .collect();
        assert_eq!(ebn0, ["2.000000", "2.000000", "3.000000", "3.000000"]);

        let back = read_csv(s.as_bytes()).unwrap();
        assert_eq!(back.len(), 2);
        let f = back.iter().find(|c| c.meta == framed.meta).unwrap();
        assert_eq!(
            f.points.iter().map(|p| p.bit_errors).collect::<Vec<_>>(),
            [5000, 900]
        );
        assert!(!back.iter().find(|c| c.meta == serial.meta).unwrap().points[1].is_valid());
    }

    #[test]
    fn rejects_foreign_csv() {
        assert!(read_csv("a,b\n1,2\n".as_bytes()).is_err());
        let bad = "mode,k,polys,rate,f,v1,v2,f0,ebn0_db,bits,errors,ber,valid,seed\nserial,x,1/2,r12,0,0,0,0,1,1,1,1,true,0\n";
        assert!(read_csv(bad.as_bytes()).is_err());
    }

    #[test]
    fn unwritable_path() {
        let dir = tempfile::tempdir().unwrap();
        assert!(emit_csv(&[], dir.path().join("missing/dir/out.csv")).is_err());
        let ok = dir.path().join("out.csv");
        emit_csv(&[], &ok).unwrap();
        assert!(std::fs::read_to_string(ok).unwrap().starts_with("mode,"));
    }
}
