//! Crossed-product Banach algebras `l1(X, sigma)` of small dynamical systems.

pub mod algebra;
pub mod cyclotomic;
pub mod dynsys;
pub mod error;
pub mod funcspace;
pub mod galois;
pub mod hullkernel;
pub mod poly;
pub mod reps_ideals;
pub mod sample;
pub mod transform;
pub mod verify;
pub mod scalar;
pub mod synthesis;

pub use dynsys::{ClosedSet, Period, Point, System, Theta};
pub use error::{Error, Result};
pub use scalar::{Exact, Float, NumericMode, Scalar, C64};
