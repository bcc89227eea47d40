//! Hull and kernel between closed ideals and invariant closed subsets of `X`.

use std::sync::Arc;

use crate::algebra::AlgebraElement;
use crate::dynsys::{ClosedSet, Point, System};
use crate::error::{Error, Result};
use crate::funcspace::FunctionValue;
use crate::reps_ideals::ideals::kernel_as_canonical;
use crate::reps_ideals::{ideal_inclusion, Behaviour, IdealHandle};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct HullResult {
    pub set: ClosedSet,
    /// How the set was obtained.
    pub notes: Vec<String>,
}

/// `H(I) = {x : a_n(x) = 0 for all a ∈ I and n}`.
pub fn hull<S: Scalar>(sys: &System, ideal: &IdealHandle<S>, tol: f64) -> Result<HullResult> {
    ideal.validate(sys)?;
    let mut notes = Vec::new();
    let set = hull_inner(sys, ideal, tol, &mut notes)?;
    Ok(HullResult { set, notes })
}

fn hull_inner<S: Scalar>(sys: &System, ideal: &IdealHandle<S>, tol: f64, notes: &mut Vec<String>) -> Result<ClosedSet> {
    Ok(match ideal {
        IdealHandle::Px(x) => {
            notes.push(format!("orbit closure of {x}"));
            sys.orbit_closure(x)?
        }
        IdealHandle::Qx(x) => {
            notes.push(format!("orbit of {x}"));
            ClosedSet::from_points(sys, &sys.orbit(x)?)?
        }
        IdealHandle::PxLambda(x, l) => {
            notes.push(format!("E(Pxl({x}, {l})) is dense"));
            ClosedSet::empty(sys)
        }
        IdealHandle::Kernel(s) => {
            notes.push("closed invariant set".into());
            s.clone()
        }
        IdealHandle::Intersection(v) => {
            let mut acc = ClosedSet::empty(sys);
            for i in v {
                acc = acc.union(&hull_inner(sys, i, tol, notes)?)?;
            }
            acc
        }
        IdealHandle::Generated(gens) => {
            let mut acc = ClosedSet::whole(sys);
            for (gi, g) in gens.iter().enumerate() {
                for (n, f) in g.coeffs() {
                    acc = acc.intersection(&f.zero_set(sys, tol)?)?;
                    notes.push(format!("zero set of coefficient {n} of generator {gi}"));
                }
            }
            notes.push("largest invariant subset".into());
            acc.largest_invariant_subset(sys)?
        }
    })
}

pub fn kernel_of_invariant_set<S: Scalar>(sys: &System, s: &ClosedSet) -> Result<IdealHandle<S>> {
    let k = IdealHandle::Kernel(s.clone());
    k.validate(sys)?;
    Ok(k)
}

pub fn kernel_member<S: Scalar>(sys: &System, s: &ClosedSet, a: &AlgebraElement<S>, tol: f64) -> Result<bool> {
    for f in a.coeffs().values() {
        if !f.vanishes_on(sys, s, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Zeroes every coefficient on `s`; idempotent, and `a - project(a)` is supported on `s`.
pub fn kernel_project<S: Scalar>(sys: &System, s: &ClosedSet, a: &AlgebraElement<S>) -> Result<AlgebraElement<S>> {
    AlgebraElement::from_coeffs(
        a.system(),
        a.coeffs().iter().map(|(n, f)| f.kill_on(sys, s).map(|g| (*n, g))).collect::<Result<Vec<_>>>()?,
    )
}

/// `H(K(S))`, computed from the coefficient functions of `K(S)`.
///
/// On finite systems `K(S)` is spanned by `1_y δ^n` for `y ∉ S`, so the hull is
/// the common zero set of those indicators.
pub fn hull_kernel_compose(sys: &System, s: &ClosedSet) -> Result<ClosedSet> {
    if !s.is_invariant(sys)? {
        return Err(Error::NotInvariant);
    }
    match sys {
        System::Finite { sigma } => {
            let mut acc = ClosedSet::whole(sys);
            for y in 0..sigma.len() {
                let p = Point::Finite(y);
                if !s.contains(&p) {
                    let f = FunctionValue::<crate::scalar::Float>::indicator(sys, &p)?;
                    acc = acc.intersection(&f.zero_set(sys, 0.0)?)?;
                }
            }
            acc.largest_invariant_subset(sys)
        }
        _ => Ok(hull::<crate::scalar::Float>(sys, &IdealHandle::Kernel(s.clone()), 0.0)?.set),
    }
}

/// `K(H(I))`, the smallest well-behaved closed ideal containing `I`.
pub fn kernel_hull_compose<S: Scalar>(sys: &System, ideal: &IdealHandle<S>, tol: f64) -> Result<IdealHandle<S>> {
    Ok(IdealHandle::Kernel(hull(sys, ideal, tol)?.set))
}

/// Whether `K(H(I)) = I`.
pub fn kh_fixed<S: Scalar>(sys: &System, ideal: &IdealHandle<S>, tol: f64) -> Result<bool> {
    let kh = kernel_hull_compose(sys, ideal, tol)?;
    Ok(ideal_inclusion(sys, ideal, &kh)? && ideal_inclusion(sys, &kh, ideal)?)
}

/// `K(S)` as an intersection of `Q_x` (periodic orbits) and `P_x` (aperiodic orbit closures).
pub fn decompose_as_intersection<S: Scalar>(sys: &System, s: &ClosedSet) -> Result<Vec<IdealHandle<S>>> {
    kernel_as_canonical(sys, s)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinimalityReport {
    pub minimal: bool,
    /// Number of invariant closed sets, equal to the number of well-behaved closed ideals.
    pub well_behaved_count: Option<u128>,
    pub invariant_sets: Option<Vec<ClosedSet>>,
    pub reason: String,
}

pub fn minimality_dichotomy(sys: &System) -> MinimalityReport {
    let sets = ClosedSet::enumerate_invariant(sys);
    let count = sys.invariant_set_count();
    let (minimal, reason) = match (sys, count) {
        (System::Rotation { irrational: true, .. }, _) => (true, "every orbit of an irrational rotation is dense".to_string()),
        (System::Rotation { .. }, _) => (sys.is_minimal(), "a rational rotation has finite orbits".to_string()),
        (_, Some(c)) => (c == 2, format!("{c} invariant closed sets")),
        (_, None) => (sys.is_minimal(), "too many invariant sets to list".to_string()),
    };
    MinimalityReport { minimal, well_behaved_count: count, invariant_sets: sets, reason }
}

/// Checks whether `I` is invariant under the dual action at `λ` on a given element of `I`,
/// returning a failing element when one is found among `probes`.
pub fn dual_action_witness<S: Scalar>(
    sys: &Arc<System>,
    ideal: &IdealHandle<S>,
    probes: &[AlgebraElement<S>],
    lambdas: &[S],
    tol: f64,
) -> Result<Option<(AlgebraElement<S>, S)>> {
    let mut candidates = probes.to_vec();
    if let Ok(Behaviour::BadlyBehaved { a, .. } | Behaviour::Plain { a, .. }) = ideal.behaviour(sys) {
        candidates.push(a);
    }
    for a in &candidates {
        if !ideal.member(sys, a, tol)? {
            continue;
        }
        for l in lambdas {
            if !ideal.member(sys, &a.dual_action(l), tol)? {
                return Ok(Some((a.clone(), l.clone())));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;
    use std::collections::BTreeSet;

    fn fin(v: &[usize]) -> ClosedSet {
        ClosedSet::Finite(v.iter().copied().collect::<BTreeSet<_>>())
    }

    #[test]
    fn generated_hull_examples() {
        let sys = Arc::new(System::finite(vec![1, 0, 2]).unwrap());
        let gen = |v: [i64; 3]| {
            let f = FunctionValue::Finite(v.iter().map(|c| Exact::from_i64(*c)).collect());
            IdealHandle::Generated(vec![AlgebraElement::function(&sys, f).unwrap()])
        };
        assert_eq!(hull(&sys, &gen([0, 0, 5]), 0.0).unwrap().set, fin(&[0, 1]));
        assert_eq!(hull(&sys, &gen([0, 5, 0]), 0.0).unwrap().set, fin(&[2]));
        assert_eq!(hull(&sys, &gen([5, 0, 0]), 0.0).unwrap().set, fin(&[2]));
    }

    #[test]
    fn minimality_counts() {
        let r = minimality_dichotomy(&System::cycle(3));
        assert!(r.minimal);
        assert_eq!(r.well_behaved_count, Some(2));
        let r = minimality_dichotomy(&System::finite(vec![1, 0, 2]).unwrap());
        assert!(!r.minimal);
        assert_eq!(r.well_behaved_count, Some(4));
        assert!(minimality_dichotomy(&System::golden_rotation()).minimal);
        assert!(!minimality_dichotomy(&System::Shift).minimal);
    }

    #[test]
    fn shift_decomposition() {
        let sys = System::Shift;
        let d = decompose_as_intersection::<Exact>(&sys, &ClosedSet::whole(&sys)).unwrap();
        assert_eq!(d, vec![IdealHandle::Px(Point::Int(0))]);
        let inf = ClosedSet::from_points(&sys, &[Point::Inf]).unwrap();
        assert_eq!(decompose_as_intersection::<Exact>(&sys, &inf).unwrap(), vec![IdealHandle::Qx(Point::Inf)]);
    }
}
