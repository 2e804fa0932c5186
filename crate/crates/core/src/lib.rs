//! Calculus of slope-capped complexity profiles and everything built on it:
//! exact interval colorings, greedy partition procedures, evaluation of the
//! projection / distance / pinned-dimension bounds those partitions certify,
//! exhaustive adversarial verification of the bounds over profile space,
//! the planar geometry identities behind the distance arguments, and an
//! empirical box-counting harness for pinned distance sets of self-similar
//! fractals.

pub mod bounds;
pub mod color;
pub mod error;
pub mod fractal;
pub mod geometry;
pub mod interval;
pub mod partition;
pub mod profile;
pub mod rational;
pub mod search;

pub use color::{classify, ColorSet};
pub use error::{Error, Result};
pub use interval::Interval;
pub use profile::ComplexityProfile;
pub use rational::Rat;
