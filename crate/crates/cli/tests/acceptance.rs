//! Acceptance suite: one PASS/FAIL line per criterion, in order.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use e2rc::decode::DEFAULT_MAX_ITERS;
use e2rc::dist::fixtures;
use e2rc::encode::{
    encode_back_substitution, encode_by_erasure, encode_sliding_window, window_coefficients,
};
use e2rc::peg::{audit_4cycles, variable_edge_fractions};
use e2rc::puncture::{max_rate, puncture_count, rate_f64, Rate};
use e2rc::{
    build_h2, classify_sr, compute_profile, peel_erasures, puncture_schedule, run_ber_sweep,
    BitMatrix, ConstructParams, DegreeDistribution, E2rcCode, EncodePlan, Regime, SimConfig,
    SimRecord, SrLevel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LADDER: [f64; 5] = [0.5, 0.6, 0.7, 0.8, 0.9];

const H2_M8: [[u8; 8]; 8] = [
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0],
    [1, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 1, 0, 1, 0],
    [0, 0, 0, 1, 0, 1, 1, 1],
];

const H2_M7: [[u8; 7]; 7] = [
    [1, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0],
    [1, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 1, 0, 0],
    [0, 0, 1, 1, 0, 1, 0],
    [0, 0, 0, 0, 1, 1, 1],
];

/// Criterion outcome: `Ok(detail)` or `Err(reason)`.
type Check = Result<String, String>;

/// Name, runtime budget and body of one criterion.
type Criterion = (&'static str, Duration, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($fmt)+));
        }
    };
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_bits(rng: &mut ChaCha8Rng, n: usize) -> Vec<bool> {
    (0..n).map(|_| rng.random()).collect()
}

fn full_code(m: usize, k: usize) -> E2rcCode {
    E2rcCode::construct(&ConstructParams::new(m, k, 1).with_nv2(m - 1)).expect("construction")
}

fn rate_half_code() -> E2rcCode {
    E2rcCode::construct(&ConstructParams::new(600, 600, 1).with_distribution(fixtures::rate_half()))
        .expect("construction")
}

fn rate_0_4_code() -> E2rcCode {
    E2rcCode::construct(&ConstructParams::new(1200, 800, 1).with_distribution(fixtures::rate_0_4()))
        .expect("construction")
}

fn cli(args: &[&str]) -> i32 {
    let argv = std::iter::once("e2rc").chain(args.iter().copied());
    e2rc_cli::run_with(argv, &mut std::io::sink(), &mut std::io::sink())
}

fn criterion_1() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (m, k, expected) in [
        ("8", "4", BitMatrix::from_dense(&H2_M8).unwrap()),
        ("7", "3", BitMatrix::from_dense(&H2_M7).unwrap()),
    ] {
        let prefix = dir.path().join(format!("m{m}"));
        let p = prefix.to_str().unwrap();
        let status = cli(&["construct", "--M", m, "--K", k, "--seed", "1", "--out", p]);
        ensure!(status == 0, "construct --M {m} exited {status}");
        let code = E2rcCode::load(Path::new(p)).map_err(|e| e.to_string())?;
        ensure!(
            code.h2() == expected,
            "M={m}: parity part differs from the fixture"
        );
    }
    Ok("M=8 and M=7 parity parts bit-exact".into())
}

fn criterion_2() -> Check {
    for m in 2..=4096usize {
        let p = compute_profile(m, m - 1, 0).map_err(|e| e.to_string())?;
        let d = p.depth();
        let ceil_log2 = (usize::BITS - (m - 1).leading_zeros()) as usize;
        ensure!(d == ceil_log2, "M={m}: d={d}, expected {ceil_log2}");
        ensure!(p.partial_sum(d) == m - 1, "M={m}: S_d={}", p.partial_sum(d));
        ensure!(
            (1..=d).all(|k| p.gamma(k) >= 1),
            "M={m}: some gamma is zero"
        );
        ensure!(p.gamma(d) == 1, "M={m}: gamma(d)={}", p.gamma(d));
    }
    Ok("4095 profiles".into())
}

fn criterion_3() -> Check {
    let mut r = rng(3);
    let mut sizes = BTreeSet::new();
    while sizes.len() < 50 {
        let x: f64 = r.random_range(1f64.ln()..4096f64.ln());
        sizes.insert((x.exp().round() as usize).clamp(2, 4096));
    }
    for &m in &sizes {
        let p = compute_profile(m, m - 1, 0).map_err(|e| e.to_string())?;
        let report = e2rc::verify::verify_h2(&build_h2(&p), &p);
        ensure!(report.all_passed(), "M={m}:\n{report}");
    }
    Ok(format!(
        "50 sizes from {} to {}",
        sizes.first().unwrap(),
        sizes.last().unwrap()
    ))
}

fn criterion_4() -> Check {
    const MESSAGES: usize = 1000;
    let mut total = 0;
    for (label, code) in [
        ("M=7", full_code(7, 3)),
        ("M=8", full_code(8, 4)),
        ("M=600", rate_half_code()),
        ("M=1200 low-rate", rate_0_4_code()),
    ] {
        let mut r = rng(4);
        let h2 = code.h2();
        let plan = EncodePlan::build(&h2).map_err(|e| format!("{label}: {e}"))?;
        let full = code.profile().regime() == Regime::Full;
        for _ in 0..MESSAGES {
            let m = random_bits(&mut r, code.k());
            let s = code.syndrome_target(&m).map_err(|e| e.to_string())?;
            let p = plan.encode(&s).map_err(|e| e.to_string())?;
            if full {
                let back = encode_back_substitution(&h2, &s).map_err(|e| e.to_string())?;
                let window =
                    encode_sliding_window(code.profile(), &s).map_err(|e| e.to_string())?;
                let (erasure, _) =
                    encode_by_erasure(code.h(), code.profile(), &m).map_err(|e| e.to_string())?;
                ensure!(
                    back == p && window == p && erasure == p,
                    "{label}: encoders disagree"
                );
            }
            let c: Vec<bool> = m.iter().copied().chain(p).collect();
            ensure!(code.h().is_codeword(&c), "{label}: H c != 0");
            total += 1;
        }
    }
    Ok(format!("{total} messages over 4 codes"))
}

fn criterion_5() -> Check {
    let p = compute_profile(7, 6, 0).unwrap();
    let u = |x: i64| x >= 0;
    for t in 0..7usize {
        let ti = t as i64;
        let expected = vec![u(ti - 3) && !u(ti - 6), u(ti - 5), u(ti - 6)];
        let g = window_coefficients(&p, t).map_err(|e| e.to_string())?.g;
        ensure!(g == expected, "t={t}: {g:?} != {expected:?}");
    }
    Ok("g0, g1, g2 at t = 0..6".into())
}

fn criterion_6() -> Check {
    let mut failures = Vec::new();
    let mut detail = Vec::new();
    for code in [
        full_code(7, 3),
        full_code(8, 4),
        full_code(64, 64),
        rate_half_code(),
    ] {
        let p = code.profile();
        let d = p.depth();
        let schedule = puncture_schedule(p);
        let levels = classify_sr(code.h(), &schedule.order);
        let mut mismatched = Vec::new();
        for &c in &schedule.order {
            let (k, j) = p.block_of_h2_column(c - p.k()).expect("scheduled column");
            if levels[c] == SrLevel::Unrecoverable {
                failures.push(format!("M={}: column ({k},{j}) unrecoverable", p.m()));
            } else if levels[c] != SrLevel::Step(k) {
                mismatched.push(format!("({k},{j}) at {:?}", levels[c]));
            }
        }
        if !mismatched.is_empty() {
            failures.push(format!(
                "M={}: {} level mismatch(es): {}",
                p.m(),
                mismatched.len(),
                mismatched.join(", ")
            ));
        }

        let mut r = rng(6);
        let m = random_bits(&mut r, code.k());
        let c = code.encode(&m).map_err(|e| e.to_string())?;
        let known: Vec<Option<bool>> = c
            .iter()
            .enumerate()
            .map(|(i, &b)| (i < code.k()).then_some(b))
            .collect();
        let out = peel_erasures(code.h(), &known).map_err(|e| e.to_string())?;
        if !out.is_complete() || out.iterations > d + 1 {
            failures.push(format!(
                "M={}: peeling took {} iterations, complete={}",
                p.m(),
                out.iterations,
                out.is_complete()
            ));
        }
        let parity_levels = classify_sr(code.h(), &(code.k()..code.n()).collect::<Vec<_>>());
        let disagree = (code.k()..code.n())
            .filter(|&v| out.recovered_at[v] != parity_levels[v].step())
            .count();
        if disagree > 0 {
            failures.push(format!(
                "M={}: {disagree} peeling steps differ from levels",
                p.m()
            ));
        }
        detail.push(format!("M={} peeled in {}", p.m(), out.iterations));
    }
    if failures.is_empty() {
        Ok(detail.join(", "))
    } else {
        Err(failures.join("; "))
    }
}

/// Levels from the step-by-step definition on a dense matrix.
fn definitional_levels(
    dense: &[Vec<u8>],
    cols: usize,
    punctured: &BTreeSet<usize>,
) -> Vec<SrLevel> {
    let mut level: Vec<Option<usize>> = (0..cols)
        .map(|c| (!punctured.contains(&c)).then_some(0))
        .collect();
    let mut k = 1;
    loop {
        let known = level.clone();
        let mut changed = false;
        for v in (0..cols).filter(|&v| known[v].is_none()) {
            if dense.iter().any(|row| {
                row[v] == 1 && (0..cols).all(|u| u == v || row[u] == 0 || known[u].is_some())
            }) {
                level[v] = Some(k);
                changed = true;
            }
        }
        if !changed {
            break;
        }
        k += 1;
    }
    level
        .into_iter()
        .map(|l| l.map_or(SrLevel::Unrecoverable, SrLevel::Step))
        .collect()
}

fn criterion_7() -> Check {
    let mut r = rng(7);
    for g in 0..200 {
        let rows = r.random_range(1..=10);
        let cols = r.random_range(1..=12);
        let dense: Vec<Vec<u8>> = (0..rows)
            .map(|_| (0..cols).map(|_| u8::from(r.random_bool(0.3))).collect())
            .collect();
        let h = BitMatrix::from_dense(&dense).unwrap();
        let punctured: BTreeSet<usize> = (0..cols).filter(|_| r.random_bool(0.5)).collect();
        let list: Vec<usize> = punctured.iter().copied().collect();
        ensure!(
            classify_sr(&h, &list) == definitional_levels(&dense, cols, &punctured),
            "graph {g} disagrees"
        );
    }
    Ok("200 random graphs".into())
}

fn criterion_8() -> Check {
    let count = puncture_count(1200, 0.5, 0.6).map_err(|e| e.to_string())?;
    ensure!(count == 200, "puncture_count(1200, 0.5, 0.6) = {count}");
    let low = compute_profile(1200, 1061, 800).unwrap();
    let rh = max_rate(&low);
    ensure!(rh == Rate::new(800, 939), "max rate {rh}");
    ensure!(
        (rate_f64(rh) - 0.85).abs() <= 0.003,
        "max rate {} not within 0.003 of 0.85",
        rate_f64(rh)
    );
    let schedule = puncture_schedule(&compute_profile(600, 599, 600).unwrap());
    let mut previous = BTreeSet::new();
    for rate in LADDER {
        let set: BTreeSet<usize> = schedule
            .apply(rate)
            .map_err(|e| e.to_string())?
            .columns
            .into_iter()
            .collect();
        ensure!(
            previous.is_subset(&set),
            "rate {rate} does not contain the previous set"
        );
        previous = set;
    }
    Ok(format!("R_H = {rh}, ladder nested"))
}

fn criterion_9() -> Check {
    let code = rate_half_code();
    let d = code.profile().depth();
    let mut rates = LADDER.to_vec();
    rates.push(rate_f64(puncture_schedule(code.profile()).max_rate));
    let cfg = SimConfig {
        rates,
        ebn0_db: vec![f64::INFINITY],
        min_frame_errors: 1,
        max_frames: 100,
        seed: 9,
        max_iters: DEFAULT_MAX_ITERS,
    };
    let records = run_ber_sweep::<f64>(&code, &cfg).map_err(|e| e.to_string())?;
    for rec in &records {
        ensure!(
            rec.frames == 100,
            "rate {}: {} frames",
            rec.rate,
            rec.frames
        );
        ensure!(
            rec.ber == 0.0 && rec.fer == 0.0,
            "rate {}: ber {} fer {}",
            rec.rate,
            rec.ber,
            rec.fer
        );
        ensure!(
            rec.max_iterations <= d + 1,
            "rate {}: {} iterations",
            rec.rate,
            rec.max_iterations
        );
    }
    let worst = records.iter().map(|r| r.max_iterations).max().unwrap_or(0);
    Ok(format!(
        "{} rates error-free, at most {worst} iterations (d+1 = {})",
        records.len(),
        d + 1
    ))
}

const BER_TARGET: f64 = 1e-3;
const SNR_STEP_DB: f64 = 0.25;
const LOW_CONFIDENCE_ERRORS: u64 = 10;

fn point(code: &E2rcCode, rate: f64, ebn0: f64) -> Result<SimRecord, String> {
    let cfg = SimConfig {
        rates: vec![rate],
        ebn0_db: vec![ebn0],
        min_frame_errors: 100,
        max_frames: 200_000,
        seed: 10,
        max_iters: DEFAULT_MAX_ITERS,
    };
    run_ber_sweep::<f64>(code, &cfg)
        .map_err(|e| e.to_string())?
        .pop()
        .ok_or("no record".into())
}

/// Eb/N0 at which BER crosses the target, by log-linear interpolation, plus
/// every point simulated in ascending Eb/N0.
fn crossing(code: &E2rcCode, rate: f64, start: f64) -> Result<(f64, Vec<SimRecord>), String> {
    let mut points = vec![point(code, rate, start)?];
    while points[0].ber < BER_TARGET {
        let below = points[0].ebn0_db - SNR_STEP_DB;
        points.insert(0, point(code, rate, below)?);
    }
    while points.last().unwrap().ber >= BER_TARGET {
        let next = points.last().unwrap().ebn0_db + SNR_STEP_DB;
        ensure!(next < 12.0, "rate {rate}: no crossing below 12 dB");
        points.push(point(code, rate, next)?);
    }
    let i = points.iter().position(|p| p.ber < BER_TARGET).unwrap();
    let (a, b) = (&points[i - 1], &points[i]);
    let x = if b.ber > 0.0 {
        let t = (a.ber.log10() - BER_TARGET.log10()) / (a.ber.log10() - b.ber.log10());
        a.ebn0_db + t * (b.ebn0_db - a.ebn0_db)
    } else {
        b.ebn0_db
    };
    Ok((x, points))
}

fn criterion_10() -> Check {
    let code = rate_half_code();
    let mut crossings = Vec::new();
    let mut lines = Vec::new();
    let mut start = 0.0;
    for rate in LADDER {
        let (x, points) = crossing(&code, rate, start)?;
        let inversions: Vec<(f64, f64)> = points
            .windows(2)
            .filter(|w| w[1].ber > w[0].ber)
            .map(|w| (w[0].ebn0_db, w[1].ebn0_db))
            .collect();
        let tolerated = inversions.len() <= 1
            && points.windows(2).filter(|w| w[1].ber > w[0].ber).all(|w| {
                w[0].frame_errors < LOW_CONFIDENCE_ERRORS
                    && w[1].frame_errors < LOW_CONFIDENCE_ERRORS
            });
        ensure!(
            inversions.is_empty() || tolerated,
            "rate {rate}: BER rises between {inversions:?}"
        );
        let curve: Vec<String> = points
            .iter()
            .map(|p| format!("{:.2}dB:{:.2e}", p.ebn0_db, p.ber))
            .collect();
        lines.push(format!(
            "      rate {:.3}: crossing {x:.3} dB [{}]",
            points[0].rate,
            curve.join(" ")
        ));
        crossings.push(x);
        start = (x / SNR_STEP_DB).floor() * SNR_STEP_DB;
    }
    for line in &lines {
        println!("{line}");
    }
    ensure!(
        crossings.windows(2).all(|w| w[1] > w[0]),
        "crossings not strictly increasing: {crossings:?}"
    );
    let shown: Vec<String> = crossings.iter().map(|x| format!("{x:.2}")).collect();
    Ok(format!("BER 1e-3 at [{}] dB", shown.join(", ")))
}

fn lambda_within(h: &BitMatrix, dist: &DegreeDistribution, k: usize) -> Result<(), String> {
    let realized = variable_edge_fractions(h);
    let degrees: BTreeSet<usize> = realized
        .keys()
        .chain(dist.variable().keys())
        .copied()
        .collect();
    for d in degrees {
        let got = realized.get(&d).copied().unwrap_or(0.0);
        ensure!(
            (got - dist.lambda(d)).abs() <= 1.0 / k as f64,
            "degree {d}: realized {got:.5} vs target {:.5}",
            dist.lambda(d)
        );
    }
    Ok(())
}

fn criterion_11() -> Check {
    let half = rate_half_code();
    let low = rate_0_4_code();
    for code in [
        &full_code(7, 3),
        &full_code(8, 4),
        &full_code(64, 64),
        &half,
        &low,
    ] {
        let cycles = audit_4cycles(code.h());
        ensure!(
            cycles.is_empty(),
            "M={}: {} 4-cycles",
            code.profile().m(),
            cycles.len()
        );
    }
    lambda_within(half.h(), &fixtures::rate_half(), half.k())?;
    lambda_within(low.h(), &fixtures::rate_0_4(), low.k())?;
    Ok("no 4-cycles on 5 codes, λ within 1/K on both reference codes".into())
}

fn main() {
    let criteria: [Criterion; 11] = [
        (
            "bit-exact parity fixtures",
            Duration::from_secs(1),
            criterion_1,
        ),
        (
            "profile sweep M in [2, 4096]",
            Duration::from_secs(5),
            criterion_2,
        ),
        (
            "structure audit on 50 sizes",
            Duration::from_secs(30),
            criterion_3,
        ),
        (
            "encoder cross-equivalence",
            Duration::from_secs(60),
            criterion_4,
        ),
        (
            "sliding-window taps for M=7",
            Duration::from_secs(1),
            criterion_5,
        ),
        (
            "k-SR exactness under full puncturing",
            Duration::from_secs(30),
            criterion_6,
        ),
        (
            "classifier vs definition oracle",
            Duration::from_secs(30),
            criterion_7,
        ),
        ("puncture arithmetic", Duration::from_secs(1), criterion_8),
        (
            "error-free channel at every rate",
            Duration::from_secs(60),
            criterion_9,
        ),
        (
            "BER trend across the rate ladder",
            Duration::from_secs(30 * 60),
            criterion_10,
        ),
        ("PEG hygiene", Duration::from_secs(60), criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > budget => Err(format!("took {elapsed:.1?}, budget {budget:?}")),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(e) => ("FAIL", e),
        };
        println!(
            "{tag} criterion {:>2} ({name}) [{elapsed:.2?}]: {detail}",
            i + 1
        );
        failed += usize::from(outcome.is_err());
    }
    println!("{} of 11 criteria passed", 11 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
