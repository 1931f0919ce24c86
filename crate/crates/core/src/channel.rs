//! BPSK over AWGN.

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `σ² = 1 / (2 R 10^{Eb/N0 / 10})`, with `Eb` per information bit at the
/// transmitted rate `rate`. Infinite `ebn0_db` gives 0 (noiseless).
pub fn noise_variance(ebn0_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::RateOutOfRange {
            rate,
            min: 0.0,
            max: 1.0,
        });
    }
    if ebn0_db.is_nan() {
        return Err(Error::Config("Eb/N0 is NaN".into()));
    }
    Ok(1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0)))
}

/// Channel outputs for the transmitted positions of `codeword`, in order,
/// skipping punctured ones. `σ² = 0` transmits noiselessly.
pub fn awgn_transmit<T: Real, R: Rng + ?Sized>(
    codeword: &[bool],
    punctured: &[bool],
    noise_variance: T,
    rng: &mut R,
) -> Vec<T> {
    let sigma = noise_variance.max(T::zero()).sqrt();
    codeword
        .iter()
        .zip(punctured)
        .filter(|(_, &p)| !p)
        .map(|(&b, _)| {
            let x = if b { -T::one() } else { T::one() };
            if sigma > T::zero() {
                x + sigma * T::draw_normal(rng)
            } else {
                x
            }
        })
        .collect()
}

/// Spreads transmitted values back over the codeword, with 0 at punctured
/// positions.
pub fn expand_received<T: Real>(transmitted: &[T], punctured: &[bool]) -> Result<Vec<T>> {
    let mut it = transmitted.iter();
    let out: Vec<T> = punctured
        .iter()
        .map(|&p| {
            if p {
                Some(T::zero())
            } else {
                it.next().copied()
            }
        })
        .collect::<Option<_>>()
        .ok_or(Error::LengthMismatch {
            expected: punctured.iter().filter(|&&p| !p).count(),
            actual: transmitted.len(),
        })?;
    if it.next().is_some() {
        return Err(Error::LengthMismatch {
            expected: punctured.iter().filter(|&&p| !p).count(),
            actual: transmitted.len(),
        });
    }
    Ok(out)
}
