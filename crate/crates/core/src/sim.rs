//! Monte Carlo BER/FER sweeps over a rate ladder and an Eb/N0 grid.
//!
//! Frame `f` of grid point `g` draws its message and noise from a ChaCha8
//! stream keyed by `(seed, g, f)`, and tallies are folded in frame order, so
//! results do not depend on the number of worker threads.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{awgn_transmit, expand_received, noise_variance};
use crate::code::E2rcCode;
use crate::construct::Regime;
use crate::decode::{BpDecoder, LlrFrame, DEFAULT_MAX_ITERS};
use crate::encode::{encode_back_substitution, EncodePlan};
use crate::error::{Error, Result};
use crate::matrix::BitMatrix;
use crate::puncture::{puncture_schedule, rate_f64};
use crate::scalar::Real;

pub const DEFAULT_MIN_FRAME_ERRORS: u64 = 100;
pub const DEFAULT_MAX_FRAMES: u64 = 10_000_000;
const BATCH: u64 = 256;

pub const CSV_HEADER: &str = "rate,ebn0_db,frames,bit_errors,frame_errors,ber,fer,mean_iterations";

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub rates: Vec<f64>,
    /// Eb/N0 points in dB; `f64::INFINITY` means a noiseless channel.
    pub ebn0_db: Vec<f64>,
    pub min_frame_errors: u64,
    pub max_frames: u64,
    pub seed: u64,
    pub max_iters: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            rates: Vec::new(),
            ebn0_db: Vec::new(),
            min_frame_errors: DEFAULT_MIN_FRAME_ERRORS,
            max_frames: DEFAULT_MAX_FRAMES,
            seed: 0,
            max_iters: DEFAULT_MAX_ITERS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimRecord {
    /// Realized rate after puncturing.
    pub rate: f64,
    pub ebn0_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub mean_iterations: f64,
    /// Largest decoder iteration count seen at this point.
    pub max_iterations: usize,
}

/// Parity encoder chosen once per code.
enum Encoder {
    Triangular(BitMatrix),
    Plan(EncodePlan),
}

impl Encoder {
    fn new(code: &E2rcCode) -> Result<Self> {
        let h2 = code.h2();
        Ok(match code.profile().regime() {
            Regime::Full => Encoder::Triangular(h2),
            Regime::LowRate => Encoder::Plan(EncodePlan::build(&h2)?),
        })
    }

    fn parity(&self, s: &[bool]) -> Result<Vec<bool>> {
        match self {
            Encoder::Triangular(h2) => encode_back_substitution(h2, s),
            Encoder::Plan(plan) => plan.encode(s),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    bit_errors: u64,
    frame_error: bool,
    iterations: usize,
}

struct Point<'a> {
    code: &'a E2rcCode,
    encoder: &'a Encoder,
    decoder: &'a BpDecoder<'a>,
    punctured: &'a [bool],
    variance: f64,
    seed: u64,
    grid: u64,
    max_iters: usize,
}

impl Point<'_> {
    fn frame<T: Real>(&self, index: u64) -> Result<Tally> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((self.grid << 32) | index);
        let k = self.code.k();
        let m: Vec<bool> = (0..k).map(|_| rng.random()).collect();
        let s = self.code.syndrome_target(&m)?;
        let codeword: Vec<bool> = m.iter().copied().chain(self.encoder.parity(&s)?).collect();
        let frame = if self.variance > 0.0 {
            let y: Vec<T> =
                awgn_transmit(&codeword, self.punctured, T::of(self.variance), &mut rng);
            let y = expand_received(&y, self.punctured)?;
            let scale = T::of(2.0 / self.variance);
            LlrFrame::new(
                y.into_iter().map(|v| v * scale).collect(),
                self.punctured.to_vec(),
            )?
        } else {
            LlrFrame::<T>::noiseless(&codeword, self.punctured.to_vec())?
        };
        let result = self.decoder.decode(&frame, self.max_iters)?;
        let bit_errors = result.hard_bits[..k]
            .iter()
            .zip(&m)
            .filter(|(a, b)| a != b)
            .count() as u64;
        Ok(Tally {
            bit_errors,
            frame_error: bit_errors > 0,
            iterations: result.iterations_used,
        })
    }
}

/// Runs every `(rate, Eb/N0)` point of `cfg` on `code`, rates outermost.
pub fn run_ber_sweep<T: Real>(code: &E2rcCode, cfg: &SimConfig) -> Result<Vec<SimRecord>> {
    if cfg.min_frame_errors == 0 || cfg.max_frames == 0 || cfg.max_iters == 0 {
        return Err(Error::Config(
            "min frame errors, max frames and max iterations must be positive".into(),
        ));
    }
    let schedule = puncture_schedule(code.profile());
    let punctured_sets = cfg
        .rates
        .iter()
        .map(|&r| schedule.apply(r))
        .collect::<Result<Vec<_>>>()?;
    if cfg.rates.is_empty() || cfg.ebn0_db.is_empty() {
        return Ok(Vec::new());
    }
    let encoder = Encoder::new(code)?;
    let decoder = BpDecoder::new(code.h());
    let mut records = Vec::new();
    for (ri, punctured) in punctured_sets.iter().enumerate() {
        let mask = punctured.mask(code.n());
        let rate = rate_f64(punctured.realized_rate);
        for (ei, &ebn0) in cfg.ebn0_db.iter().enumerate() {
            let point = Point {
                code,
                encoder: &encoder,
                decoder: &decoder,
                punctured: &mask,
                variance: noise_variance(ebn0, rate)?,
                seed: cfg.seed,
                grid: (ri * cfg.ebn0_db.len() + ei) as u64,
                max_iters: cfg.max_iters,
            };
            records.push(run_point::<T>(&point, rate, ebn0, cfg)?);
        }
    }
    Ok(records)
}

fn run_point<T: Real>(
    point: &Point<'_>,
    rate: f64,
    ebn0: f64,
    cfg: &SimConfig,
) -> Result<SimRecord> {
    let (mut frames, mut bit_errors, mut frame_errors, mut iterations, mut max_iterations) =
        (0u64, 0u64, 0u64, 0u64, 0usize);
    'outer: while frames < cfg.max_frames && frame_errors < cfg.min_frame_errors {
        let end = (frames + BATCH).min(cfg.max_frames);
        let tallies = (frames..end)
            .into_par_iter()
            .map(|f| point.frame::<T>(f))
            .collect::<Result<Vec<_>>>()?;
        for t in tallies {
            frames += 1;
            bit_errors += t.bit_errors;
            frame_errors += u64::from(t.frame_error);
            iterations += t.iterations as u64;
            max_iterations = max_iterations.max(t.iterations);
            if frame_errors >= cfg.min_frame_errors {
                break 'outer;
            }
        }
    }
    let k = point.code.k() as f64;
    Ok(SimRecord {
        rate,
        ebn0_db: ebn0,
        frames,
        bit_errors,
        frame_errors,
        ber: bit_errors as f64 / (frames as f64 * k),
        fer: frame_errors as f64 / frames as f64,
        mean_iterations: iterations as f64 / frames as f64,
        max_iterations,
    })
}

pub fn to_csv(records: &[SimRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{:.6},{},{},{},{},{:.6e},{:.6e},{:.4}",
            r.rate,
            r.ebn0_db,
            r.frames,
            r.bit_errors,
            r.frame_errors,
            r.ber,
            r.fer,
            r.mean_iterations
        )
        .unwrap();
    }
    out
}
