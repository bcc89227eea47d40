//! Averaging over characters on rotations, which pushes an element towards `E(a)`
//! exactly when no frequency resonates with the rotation angle.

use std::sync::Arc;

use crate::algebra::AlgebraElement;
use crate::dynsys::{Point, System, Theta};
use crate::error::{unsupported, Result};
use crate::funcspace::FunctionValue;
use crate::reps_ideals::{Behaviour, IdealHandle, Lambda};
use crate::sample::Sampler;
use crate::scalar::{unit_from_turns, Float, Scalar, C64};

/// Largest averaging order used by `drive_to_e`.
pub const MAX_ORDER: u64 = 4096;
/// Damping above this counts as a stalled (resonant) frequency.
pub const RESONANCE_FLOOR: f64 = 1.0 - 1e-9;

fn theta_of(sys: &System) -> Result<Theta> {
    match sys {
        System::Rotation { theta, .. } => Ok(*theta),
        _ => unsupported(format!("character averaging needs a rotation, not a {} system", sys.kind())),
    }
}

/// `(1/M) sum_{m<M} z^m a z^{-m}`.
pub fn char_average(a: &AlgebraElement<Float>, m: u64) -> Result<AlgebraElement<Float>> {
    let sys = a.system().clone();
    theta_of(&sys)?;
    let mut acc = AlgebraElement::zero(&sys);
    for j in 0..m as i64 {
        let zj = AlgebraElement::function(&sys, FunctionValue::monomial(&sys, j)?)?;
        let zmj = AlgebraElement::function(&sys, FunctionValue::monomial(&sys, -j)?)?;
        acc = acc.add(&zj.mul(a)?.mul(&zmj)?)?;
    }
    Ok(acc.scale(&Float::from_ratio(1, m as i64)))
}

/// `D_M(nθ) = (1/M) sum_{m<M} e^{2πi nθ m}`, in closed form.
pub fn dirichlet_mean(theta: &Theta, n: i64, m: u64) -> C64 {
    let t = theta.frac_mul(n);
    let w = unit_from_turns(t);
    if (w - C64::new(1.0, 0.0)).norm() < 1e-15 {
        return C64::new(1.0, 0.0);
    }
    let wm = unit_from_turns(theta.frac_mul(n.saturating_mul(m as i64)));
    (C64::new(1.0, 0.0) - wm) / (C64::new(m as f64, 0.0) * (C64::new(1.0, 0.0) - w))
}

#[derive(Clone, Debug, PartialEq)]
pub struct AveragingRound {
    pub round: usize,
    pub order: u64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AveragingReport {
    pub rounds: Vec<AveragingRound>,
    /// Per frequency, the accumulated damping `prod |D_M(nθ)|`.
    pub damping: Vec<(i64, f64)>,
    pub reached: bool,
    /// Nonzero frequencies whose damping stayed at 1.
    pub resonant: Vec<i64>,
}

impl AveragingReport {
    pub fn final_residual(&self) -> f64 {
        self.rounds.last().map_or(0.0, |r| r.residual)
    }

    pub fn final_order(&self) -> u64 {
        self.rounds.last().map_or(1, |r| r.order)
    }
}

/// Composes `char_average` with orders `2, 4, 8, ...` until `‖a' - E(a)‖ <= epsilon`,
/// `max_rounds` rounds have run, or the order would exceed `MAX_ORDER`.
pub fn drive_to_e(a: &AlgebraElement<Float>, epsilon: f64, max_rounds: usize) -> Result<AveragingReport> {
    let theta = theta_of(a.system())?;
    let target = a.e0_elem();
    let mut cur = a.clone();
    let mut residual = cur.sub(&target)?.norm();
    let mut rounds = vec![AveragingRound { round: 0, order: 1, residual }];
    let support: Vec<i64> = a.support().collect();
    let mut damping: Vec<(i64, f64)> = support.iter().map(|n| (*n, 1.0)).collect();
    let mut order = 1u64;
    while residual > epsilon && rounds.len() <= max_rounds && order * 2 <= MAX_ORDER {
        order *= 2;
        cur = char_average(&cur, order)?;
        for (n, d) in damping.iter_mut() {
            *d *= dirichlet_mean(&theta, *n, order).norm();
        }
        residual = cur.sub(&target)?.norm();
        rounds.push(AveragingRound { round: rounds.len(), order, residual });
    }
    let resonant = damping.iter().filter(|(n, d)| *n != 0 && *d >= RESONANCE_FLOOR).map(|(n, _)| *n).collect();
    Ok(AveragingReport { reached: residual <= epsilon, rounds, damping, resonant })
}

/// Frequencies `n` (with `|n| <= radius`, `n != 0`) for which `nθ` is an integer.
pub fn predicted_resonances(theta: &Theta, radius: i64) -> Vec<i64> {
    (-radius..=radius).filter(|n| *n != 0 && theta.frac_mul(*n) == 0.0).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DichotomyReport<S> {
    pub free: bool,
    /// For non-free systems: a periodic point, the ideal `P_{x,1}` and its escape witness.
    pub witness: Option<(Point, IdealHandle<S>, Behaviour<S>)>,
    /// For free rotations: averaging evidence on a sampled element.
    pub averaging: Option<AveragingReport>,
}

pub fn dichotomy_report<S: Scalar>(sys: &Arc<System>, seed: u64) -> Result<DichotomyReport<S>> {
    let free = sys.is_free();
    if !free {
        let x = sys.a_periodic_point().expect("a system that is not free has a periodic point");
        let ideal = IdealHandle::PxLambda(x.clone(), Lambda::one());
        let b = ideal.behaviour(sys)?;
        return Ok(DichotomyReport { free, witness: Some((x, ideal, b)), averaging: None });
    }
    let averaging = match **sys {
        System::Rotation { .. } => {
            let mut s = Sampler::new(seed);
            let mut coeffs = Vec::new();
            for n in -3..=3 {
                coeffs.push((n, s.unit_wiener()));
            }
            let a = AlgebraElement::from_coeffs(sys, coeffs)?;
            Some(drive_to_e(&a, 0.05, 16)?)
        }
        _ => None,
    };
    Ok(DichotomyReport { free, witness: None, averaging })
}
