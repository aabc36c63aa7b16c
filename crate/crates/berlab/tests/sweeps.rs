//! Statistical checks of simulated BER curves.

use berlab::{run_ber_sweep, BerPoint, Decision, DecoderMode, SweepConfig};
use statrs::function::erf::erfc;
use viterbi::{CodeSpec, FrameConfig};

fn run(mode: DecoderMode, ebn0: &[f64], bits: u64, seed: u64) -> Vec<BerPoint> {
    let mut cfg = SweepConfig::new(CodeSpec::k7_171_133(), mode);
    cfg.ebn0_db = ebn0.to_vec();
    cfg.bits = bits;
    cfg.seed = seed;
    run_ber_sweep(&cfg).unwrap()
}

fn q(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Soft-decision union bound on the bit error rate of the rate 1/2, K = 7
/// (171, 133) code from its published information-weight spectrum.
fn union_bound(ebn0_db: f64) -> f64 {
    const SPECTRUM: [(f64, f64); 8] = [
        (10.0, 36.0),
        (12.0, 211.0),
        (14.0, 1404.0),
        (16.0, 11633.0),
        (18.0, 77433.0),
        (20.0, 502690.0),
        (22.0, 3322763.0),
        (24.0, 21292910.0),
    ];
    let e = 10f64.powf(ebn0_db / 10.0);
    SPECTRUM
        .iter()
        .map(|&(d, b)| b * q((2.0 * d * 0.5 * e).sqrt()))
        .sum()
}

#[test]
fn q_function_values() {
    assert!((q(0.0) - 0.5).abs() < 1e-7);
    assert!((q(1.0) - 0.158_655_25).abs() < 1e-7);
    assert!((q(3.0) / 1.349_898e-3 - 1.0).abs() < 1e-5);
    assert!((q(5.0) / 2.866_516e-7 - 1.0).abs() < 1e-5);
}

#[test]
fn k7_soft_decision_matches_textbook_curve() {
    let pts = run(DecoderMode::Serial, &[3.0, 3.5, 4.0], 3_000_000, 21);
    for p in &pts {
        let ub = union_bound(p.ebn0_db);
        let dfree_term = 36.0 * q((10.0 * 10f64.powf(p.ebn0_db / 10.0)).sqrt());
        assert!(p.ber <= 1.5 * ub, "{p:?} above bound {ub:.3e}");
        assert!(
            p.ber >= 0.3 * dfree_term,
            "{p:?} far below d_free term {dfree_term:.3e}"
        );
    }
    // order of magnitude around 1e-4 at 4 dB
    let at4 = pts[2].ber;
    assert!((1e-5..=1e-3).contains(&at4), "{at4:.3e}");
}

#[test]
fn ber_does_not_grow_with_v2() {
    let pts: Vec<BerPoint> = [10, 20, 30, 40]
        .iter()
        .map(|&v2| {
            run(
                DecoderMode::Framed(FrameConfig::new(32, 40, v2)),
                &[3.0],
                2_000_000,
                4,
            )[0]
        })
        .collect();
    for w in pts.windows(2) {
        // three standard deviations of the larger count
        let slack = 3.0 * (w[1].bit_errors as f64).sqrt();
        assert!(
            w[1].bit_errors as f64 <= w[0].bit_errors as f64 + slack,
            "{:?}",
            pts.iter().map(|p| p.bit_errors).collect::<Vec<_>>()
        );
    }
    assert!(pts[0].bit_errors > 2 * pts[3].bit_errors);
}

#[test]
fn hard_decision_is_worse() {
    let soft = run(DecoderMode::Serial, &[3.0, 4.0], 500_000, 8);
    let mut cfg = SweepConfig::new(CodeSpec::k7_171_133(), DecoderMode::Serial);
    cfg.ebn0_db = vec![3.0, 4.0];
    cfg.bits = 500_000;
    cfg.seed = 8;
    cfg.decision = Decision::Hard;
    let hard = run_ber_sweep(&cfg).unwrap();
    for (s, h) in soft.iter().zip(&hard) {
        assert!(h.bit_errors > 3 * s.bit_errors, "{s:?} {h:?}");
    }
}
