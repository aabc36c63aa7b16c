use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use berlab::bench::{run_throughput_bench, BenchConfig};
use berlab::report::{read_csv_file, write_csv, BerCurve, CurveMeta};
use berlab::{
    ebn0_gap, parse_ebn0_range, run_ber_sweep, Decision, DecoderMode, Error, SweepConfig,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use viterbi::decoder::{depuncture, framed_decode, serial_decode};
use viterbi::{CodeSpec, FrameConfig, PuncturePattern, TracebackStart, Trellis};

#[derive(Parser)]
#[command(
    name = "berlab",
    version,
    about = "Viterbi decoder BER sweeps and throughput benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate BER over a range of Eb/N0 values and write CSV.
    Ber(BerArgs),
    /// Eb/N0 gap between two curves at a target BER.
    Gap(GapArgs),
    /// Decode-only throughput over a matrix of frame configurations.
    Bench(BenchArgs),
    /// Decode a text file of LLR values into bits.
    Decode(DecodeArgs),
}

#[derive(Args)]
struct CodeArgs {
    /// Constraint length.
    #[arg(long, default_value_t = 7)]
    k: u32,
    /// Comma separated octal generators.
    #[arg(long, default_value = "171,133")]
    polys: String,
    /// Puncturing: r12, r23, r34 or a mask such as "11;10".
    #[arg(long, default_value = "r12")]
    rate: String,
}

impl CodeArgs {
    fn build(&self) -> Result<(CodeSpec, PuncturePattern), Error> {
        let spec = CodeSpec::from_octal(self.k, &self.polys)?;
        let pattern = PuncturePattern::parse(&self.rate, spec.outputs())?;
        Ok((spec, pattern))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Tb {
    /// One traceback per frame.
    Serial,
    /// Subframes of f0 bits, each started from the best stored state.
    Parallel,
    /// Subframes of f0 bits started from random states.
    RandomStart,
}

#[derive(Args)]
struct FrameArgs {
    /// Frame length. Without it the whole block is decoded at once.
    #[arg(long)]
    f: Option<usize>,
    #[arg(long, default_value_t = 20)]
    v1: usize,
    #[arg(long, default_value_t = 20)]
    v2: usize,
    #[arg(long, default_value_t = 32)]
    f0: usize,
    #[arg(long, value_enum, default_value_t = Tb::Serial)]
    tb: Tb,
}

impl FrameArgs {
    fn mode(&self, seed: u64) -> DecoderMode {
        let Some(f) = self.f else {
            return DecoderMode::Serial;
        };
        let fc = FrameConfig::new(f, self.v1, self.v2);
        DecoderMode::Framed(match self.tb {
            Tb::Serial => fc,
            Tb::Parallel => fc.with_subframes(self.f0),
            Tb::RandomStart => fc
                .with_subframes(self.f0)
                .with_start(TracebackStart::Random { seed }),
        })
    }
}

#[derive(Args)]
struct BerArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    frame: FrameArgs,
    /// Eb/N0 in dB, "start:step:stop" or a single value.
    #[arg(long)]
    ebn0: String,
    /// Information bits per point.
    #[arg(long, default_value_t = 1_000_000)]
    bits: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Raise the bit budget so this BER yields at least 100 errors.
    #[arg(long)]
    target_ber: Option<f64>,
    /// Fixed noise standard deviation instead of the Eb/N0-derived one.
    #[arg(long)]
    sigma: Option<f64>,
    /// Decode the signs of the channel output only.
    #[arg(long)]
    hard: bool,
    /// Also run the unframed serial reference under the same seed.
    #[arg(long)]
    reference: bool,
    /// Output CSV, stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GapArgs {
    /// CSV holding the measured curve.
    measured: PathBuf,
    /// CSV holding the reference curve.
    reference: PathBuf,
    #[arg(long, default_value_t = berlab::DEFAULT_TARGET_BER)]
    target_ber: f64,
    /// Pick a curve by mode when a file holds several.
    #[arg(long)]
    measured_mode: Option<String>,
    #[arg(long, default_value = "serial")]
    reference_mode: String,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 7)]
    k: u32,
    #[arg(long, default_value = "171,133")]
    polys: String,
    #[arg(long, value_delimiter = ',', default_value = "32")]
    f: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "20")]
    v1: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,40")]
    v2: Vec<usize>,
    /// Subframe lengths, 0 for one traceback per frame.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    f0: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    workers: Vec<usize>,
    /// Stages per decode.
    #[arg(long, default_value_t = 10_000_000)]
    bits: usize,
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    frame: FrameArgs,
    /// Whitespace separated LLR values, punctured positions omitted.
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Error> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn ber(a: BerArgs) -> Result<(), Error> {
    let (spec, pattern) = a.code.build()?;
    let mut cfg = SweepConfig::new(spec, a.frame.mode(a.seed));
    cfg.pattern = pattern;
    cfg.decision = if a.hard {
        Decision::Hard
    } else {
        Decision::Soft
    };
    cfg.ebn0_db = parse_ebn0_range(&a.ebn0)?;
    cfg.bits = a.bits;
    cfg.target_ber = a.target_ber;
    cfg.seed = a.seed;
    cfg.sigma = a.sigma;

    let mut curves = vec![BerCurve {
        meta: CurveMeta::from_sweep(&cfg),
        points: run_ber_sweep(&cfg)?,
    }];
    if a.reference && cfg.mode != DecoderMode::Serial {
        let mut r = cfg.clone();
        r.mode = DecoderMode::Serial;
        curves.push(BerCurve {
            meta: CurveMeta::from_sweep(&r),
            points: run_ber_sweep(&r)?,
        });
    }
    write_csv(&curves, output(&a.out)?)
}

fn pick(path: &PathBuf, mode: Option<&str>) -> Result<BerCurve, Error> {
    let curves = read_csv_file(path)?;
    let mut hits: Vec<BerCurve> = curves
        .into_iter()
        .filter(|c| mode.is_none_or(|m| c.meta.mode == m))
        .collect();
    match hits.len() {
        1 => Ok(hits.remove(0)),
        0 => Err(Error::Config(format!(
            "{}: no matching curve",
            path.display()
        ))),
        n => Err(Error::Config(format!(
            "{}: {n} curves, select one with the mode option",
            path.display()
        ))),
    }
}

fn gap(a: GapArgs) -> Result<(), Error> {
    let m = pick(&a.measured, a.measured_mode.as_deref())?;
    let r = pick(&a.reference, Some(&a.reference_mode))?;
    let g = ebn0_gap(&m.points, &r.points, a.target_ber)?;
    println!("target_ber  {:.3e}", g.target_ber);
    println!(
        "measured    {} f={} v1={} v2={} f0={}: {:.4} dB (between {:.3} and {:.3} dB)",
        m.meta.mode,
        m.meta.f,
        m.meta.v1,
        m.meta.v2,
        m.meta.f0,
        g.measured.ebn0_db,
        g.measured.lower.ebn0_db,
        g.measured.upper.ebn0_db
    );
    println!(
        "reference   {}: {:.4} dB (between {:.3} and {:.3} dB)",
        r.meta.mode, g.reference.ebn0_db, g.reference.lower.ebn0_db, g.reference.upper.ebn0_db
    );
    println!("gap_db      {:.4}", g.gap_db);
    Ok(())
}

fn bench(a: BenchArgs) -> Result<(), Error> {
    let spec = CodeSpec::from_octal(a.k, &a.polys)?;
    let mut cfg = BenchConfig::new(spec, a.bits);
    cfg.reps = a.reps;
    cfg.seed = a.seed;
    let mut cases = Vec::new();
    for &f in &a.f {
        for &v1 in &a.v1 {
            for &v2 in &a.v2 {
                for &f0 in &a.f0 {
                    cases.push(FrameConfig::new(f, v1, v2).with_subframes(f0));
                }
            }
        }
    }
    let rows = run_throughput_bench(&cfg, &cases, &a.workers)?;
    let mut w = csv::Writer::from_writer(output(&a.out)?);
    w.write_record([
        "f",
        "v1",
        "v2",
        "f0",
        "workers",
        "stages",
        "seconds",
        "mbps",
        "speedup_single",
        "speedup_serial_tb",
    ])?;
    for r in rows {
        w.write_record([
            r.frame.f.to_string(),
            r.frame.v1.to_string(),
            r.frame.v2.to_string(),
            r.frame.f0.to_string(),
            r.workers.to_string(),
            r.stages.to_string(),
            format!("{:.6e}", r.seconds),
            format!("{:.6e}", r.mbps),
            format!("{:.6}", r.speedup_vs_single),
            r.speedup_vs_serial_tb
                .map(|s| format!("{s:.6}"))
                .unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

fn decode(a: DecodeArgs) -> Result<(), Error> {
    let (spec, pattern) = a.code.build()?;
    let text = std::fs::read_to_string(&a.input)?;
    let values: Vec<f64> = text
        .split_whitespace()
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Parse(format!("not a number: {s:?}")))
        })
        .collect::<Result<_, _>>()?;
    let llr = depuncture(&values, &pattern)?;
    let trellis = Trellis::new(spec);
    let out = match a.frame.mode(a.seed) {
        DecoderMode::Serial => serial_decode(&llr, &trellis)?,
        DecoderMode::Framed(fc) => framed_decode(&llr, &trellis, &fc)?,
    };
    let mut w = output(&a.out)?;
    let s: String = out
        .bits
        .iter()
        .map(|&b| if b == 1 { '1' } else { '0' })
        .collect();
    writeln!(w, "{s}")?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Ber(a) => ber(a),
        Cmd::Gap(a) => gap(a),
        Cmd::Bench(a) => bench(a),
        Cmd::Decode(a) => decode(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("berlab: {e}");
            ExitCode::FAILURE
        }
    }
}
