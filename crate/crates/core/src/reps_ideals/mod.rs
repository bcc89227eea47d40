//! Canonical representations and the ideal families `P_x`, `P_{x,λ}`, `Q_x`.

pub(crate) mod ideals;
mod lambda;
mod reps;

pub use ideals::{
    ideal_inclusion, quotient_restrict, separating_check, Behaviour, IdealHandle, Separation, Subsystem,
};
pub use lambda::Lambda;
pub use reps::{rep_aperiodic_window, rep_periodic, RepMatrix, Window};
