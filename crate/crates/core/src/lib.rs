pub mod alist;
pub mod channel;
pub mod code;
pub mod construct;
pub mod decode;
pub mod dist;
pub mod encode;
mod error;
mod gf2;
pub mod io;
pub mod matrix;
pub mod peg;
pub mod puncture;
mod scalar;
pub mod sim;
pub mod verify;

pub use code::{ConstructParams, E2rcCode};
pub use construct::{build_h2, compute_profile, ksr_column, E2rcProfile, Regime};
pub use decode::{bp_decode, peel_erasures, BpDecoder, DecodeResult, LlrFrame};
pub use dist::DegreeDistribution;
pub use encode::EncodePlan;
pub use error::{Error, Result};
pub use matrix::BitMatrix;
pub use puncture::{classify_sr, puncture_schedule, PunctureSchedule, Rate, SrLevel};
pub use scalar::Real;
pub use sim::{run_ber_sweep, SimConfig, SimRecord};

pub type LlrFrame32 = LlrFrame<f32>;
pub type LlrFrame64 = LlrFrame<f64>;
