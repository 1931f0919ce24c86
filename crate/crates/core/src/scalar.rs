//! Floating point abstraction used by the soft-decision parts of the crate
//! (channel model, LLR arithmetic, belief propagation, rate arithmetic).
//!
//! Everything combinatorial (matrices, construction, encoders, puncture
//! schedules) is scalar-free; only code that touches real numbers is generic.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};
use rand_distr::{Distribution, StandardNormal};

pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossless-enough conversion from an `f64` constant.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant representable")
    }

    fn draw_normal<R: rand::Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Real for f32 {
    fn draw_normal<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Real for f64 {
    fn draw_normal<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}
