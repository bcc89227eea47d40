//! Zero sets in `X × T` of ideals, and the ideals they determine.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::AlgebraElement;
use crate::dynsys::{ClosedSet, OrbitPiece, Period, Point, System};
use crate::error::{unsupported, Result};
use crate::funcspace::FunctionValue;
use crate::poly;
use crate::reps_ideals::ideals::continuum_point;
use crate::reps_ideals::{IdealHandle, Lambda};
use crate::scalar::{turns_of, Exact, Scalar, C64};

/// Largest root-of-unity order tried when recognising exact roots.
pub const SNAP_MAX_ORDER: u64 = 360;
/// Largest denominator tried when recognising Gaussian rational roots.
pub const SNAP_MAX_DEN: i64 = 10_000;
/// Relative tolerance for accepting a numeric root of one condition as a root of another.
pub const ROOT_VERIFY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub enum LambdaSet<S> {
    Full,
    /// Finitely many points of the circle.
    Roots(Vec<Lambda<S>>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum TorusEntry<S> {
    /// For periodic `rep`: `O(rep) × Λ`. For aperiodic `rep` (always full): `closure O(rep) × T`.
    Orbit { rep: Point, lambdas: LambdaSet<S> },
    /// `S × T` for an invariant closed `S`.
    Set(ClosedSet),
}

/// A `σ × id`-invariant closed subset of `X × T`, stored orbitwise.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusSubset<S> {
    pub entries: Vec<TorusEntry<S>>,
}

fn in_set<S: Scalar>(set: &[Lambda<S>], mu: &Lambda<S>) -> bool {
    set.iter().any(|l| l.same(mu))
}

impl<S: Scalar> TorusSubset<S> {
    pub fn empty() -> Self {
        TorusSubset { entries: Vec::new() }
    }

    pub fn whole(sys: &System) -> Self {
        TorusSubset { entries: vec![TorusEntry::Set(ClosedSet::whole(sys))] }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.iter().all(|e| match e {
            TorusEntry::Orbit { lambdas: LambdaSet::Roots(r), .. } => r.is_empty(),
            TorusEntry::Orbit { .. } => false,
            TorusEntry::Set(s) => s.is_empty(),
        })
    }

    /// The points `x` with `{x} × T` inside the set.
    pub fn full_part(&self, sys: &System) -> Result<ClosedSet> {
        let mut acc = ClosedSet::empty(sys);
        for e in &self.entries {
            let s = match e {
                TorusEntry::Set(s) => s.clone(),
                TorusEntry::Orbit { rep, lambdas: LambdaSet::Full } => match sys.period(rep)? {
                    Period::Aperiodic => sys.orbit_closure(rep)?,
                    Period::Periodic(_) => ClosedSet::from_points(sys, &sys.orbit(rep)?)?,
                },
                _ => continue,
            };
            acc = acc.union(&s)?;
        }
        Ok(acc)
    }

    /// The finitely many `μ` recorded over the orbit of the periodic point `x`.
    fn roots_over(&self, sys: &System, x: &Point) -> Result<Vec<Lambda<S>>> {
        let mut out = Vec::new();
        for e in &self.entries {
            if let TorusEntry::Orbit { rep, lambdas: LambdaSet::Roots(r) } = e {
                if sys.period(rep)? != Period::Aperiodic && sys.same_orbit(rep, x)? {
                    out.extend(r.iter().cloned());
                }
            }
        }
        Ok(out)
    }

    pub fn contains(&self, sys: &System, x: &Point, mu: &Lambda<S>) -> Result<bool> {
        if self.full_part(sys)?.contains(x) {
            return Ok(true);
        }
        if sys.period(x)? == Period::Aperiodic {
            return Ok(false);
        }
        Ok(in_set(&self.roots_over(sys, x)?, mu))
    }

    pub fn subset(&self, sys: &System, other: &Self) -> Result<bool> {
        let full = other.full_part(sys)?;
        for e in &self.entries {
            let ok = match e {
                TorusEntry::Set(s) => s.subset(&full)?,
                TorusEntry::Orbit { rep, lambdas } => match (sys.period(rep)?, lambdas) {
                    (Period::Aperiodic, _) => sys.orbit_closure(rep)?.subset(&full)?,
                    (_, LambdaSet::Full) => ClosedSet::from_points(sys, &sys.orbit(rep)?)?.subset(&full)?,
                    (_, LambdaSet::Roots(r)) => {
                        full.contains(rep) || {
                            let theirs = other.roots_over(sys, rep)?;
                            r.iter().all(|mu| in_set(&theirs, mu))
                        }
                    }
                },
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn set_eq(&self, sys: &System, other: &Self) -> Result<bool> {
        Ok(self.subset(sys, other)? && other.subset(sys, self)?)
    }

    /// Some point of the set, if any.
    pub fn witness(&self, sys: &System) -> Result<Option<(Point, Lambda<S>)>> {
        for e in &self.entries {
            match e {
                TorusEntry::Orbit { rep, lambdas: LambdaSet::Full } => return Ok(Some((rep.clone(), Lambda::one()))),
                TorusEntry::Orbit { rep, lambdas: LambdaSet::Roots(r) } => {
                    if let Some(mu) = r.first() {
                        return Ok(Some((rep.clone(), mu.clone())));
                    }
                }
                TorusEntry::Set(s) => {
                    if let Some(piece) = s.orbit_pieces(sys)?.into_iter().next() {
                        let x = match piece {
                            OrbitPiece::Orbit(x) => x,
                            OrbitPiece::Continuum(c) => continuum_point(&c)?,
                        };
                        return Ok(Some((x, Lambda::one())));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn render(&self) -> String {
        if self.entries.is_empty() {
            return "{}".into();
        }
        self.entries.iter().map(TorusEntry::render).collect::<Vec<_>>().join(" u ")
    }
}

impl<S: Scalar> TorusEntry<S> {
    pub fn render(&self) -> String {
        match self {
            TorusEntry::Orbit { rep, lambdas: LambdaSet::Full } => format!("orbit({rep}) x T"),
            TorusEntry::Orbit { rep, lambdas: LambdaSet::Roots(r) } => format!(
                "orbit({rep}) x {{{}}}",
                r.iter().map(Lambda::render).collect::<Vec<_>>().join(", ")
            ),
            TorusEntry::Set(s) => format!("{s} x T"),
        }
    }
}

impl<S: Scalar> fmt::Display for TorusSubset<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// `Z(I) = {(x, μ) : F(a)(x, μ) = 0 for all a ∈ I}`.
pub fn zeros_of_ideal<S: Scalar>(sys: &System, ideal: &IdealHandle<S>, tol: f64) -> Result<TorusSubset<S>> {
    ideal.validate(sys)?;
    let mut entries = Vec::new();
    collect_zeros(sys, ideal, tol, &mut entries)?;
    Ok(TorusSubset { entries })
}

fn collect_zeros<S: Scalar>(sys: &System, ideal: &IdealHandle<S>, tol: f64, out: &mut Vec<TorusEntry<S>>) -> Result<()> {
    match ideal {
        IdealHandle::Px(x) | IdealHandle::Qx(x) => out.push(TorusEntry::Orbit { rep: x.clone(), lambdas: LambdaSet::Full }),
        IdealHandle::PxLambda(x, l) => {
            let p = sys.period(x)?.get().expect("validated");
            out.push(TorusEntry::Orbit { rep: x.clone(), lambdas: LambdaSet::Roots(l.pth_roots(p)) });
        }
        IdealHandle::Kernel(s) => {
            if !s.is_empty() {
                out.push(TorusEntry::Set(s.clone()));
            }
        }
        // primitive ideals are prime, so the zero set of an intersection is the union
        IdealHandle::Intersection(v) => {
            for i in v {
                collect_zeros(sys, i, tol, out)?;
            }
        }
        IdealHandle::Generated(gens) => {
            if matches!(sys, System::Rotation { .. })
                || matches!(sys, System::Union(parts) if parts.iter().any(|p| matches!(p, System::Rotation { .. })))
            {
                return unsupported("zero sets of generated ideals on a rotation");
            }
            for piece in ClosedSet::whole(sys).orbit_pieces(sys)? {
                let OrbitPiece::Orbit(x) = piece else {
                    return unsupported("zero sets over a continuum of orbits");
                };
                match sys.period(&x)? {
                    Period::Aperiodic => {
                        let px = IdealHandle::<S>::Px(x.clone());
                        let mut all = true;
                        for g in gens {
                            all &= px.member(sys, g, tol)?;
                        }
                        if all {
                            out.push(TorusEntry::Orbit { rep: x, lambdas: LambdaSet::Full });
                        }
                    }
                    Period::Periodic(p) => {
                        let mut conds = Vec::new();
                        for g in gens {
                            conds.extend(IdealHandle::lambda_conditions(sys, &x, g)?);
                        }
                        match common_unit_roots(&conds, tol)? {
                            LambdaSet::Full => out.push(TorusEntry::Orbit { rep: x, lambdas: LambdaSet::Full }),
                            LambdaSet::Roots(ls) => {
                                if !ls.is_empty() {
                                    let mut mus: Vec<Lambda<S>> = Vec::new();
                                    for l in ls {
                                        for mu in l.pth_roots(p) {
                                            if !in_set(&mus, &mu) {
                                                mus.push(mu);
                                            }
                                        }
                                    }
                                    out.push(TorusEntry::Orbit { rep: x, lambdas: LambdaSet::Roots(mus) });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Dense coefficient vectors after clearing negative powers; zero conditions are dropped.
fn dense<T: Clone>(cond: &[(i64, T)], zero: T) -> Option<Vec<T>> {
    let lo = cond.iter().map(|(n, _)| *n).min()?;
    let hi = cond.iter().map(|(n, _)| *n).max()?;
    let mut v = vec![zero; (hi - lo + 1) as usize];
    for (n, c) in cond {
        v[(n - lo) as usize] = c.clone();
    }
    Some(v)
}

/// The common zeros on the unit circle of the Laurent polynomials `conds`.
pub fn common_unit_roots<S: Scalar>(conds: &[Vec<(i64, S)>], tol: f64) -> Result<LambdaSet<S>> {
    let nonzero: Vec<&Vec<(i64, S)>> =
        conds.iter().filter(|c| c.iter().any(|(_, v)| !v.is_negligible(tol))).collect();
    if nonzero.is_empty() {
        return Ok(LambdaSet::Full);
    }
    if S::MODE == crate::scalar::NumericMode::Exact {
        exact_common_roots(&nonzero).map(LambdaSet::Roots)
    } else {
        Ok(LambdaSet::Roots(float_common_roots(&nonzero, tol)))
    }
}

fn float_common_roots<S: Scalar>(conds: &[&Vec<(i64, S)>], tol: f64) -> Vec<Lambda<S>> {
    let polys: Vec<Vec<C64>> = conds
        .iter()
        .filter_map(|c| dense(&c.iter().map(|(n, v)| (*n, v.to_c64())).collect::<Vec<_>>(), C64::zero()))
        .collect();
    let base = polys.iter().min_by_key(|p| p.len()).expect("nonempty");
    let mut out = Vec::new();
    for z in poly::unit_circle_roots(base) {
        let ok = polys.iter().all(|p| {
            let mass: f64 = p.iter().map(|c| c.norm()).sum();
            poly::eval(p, z).norm() <= ROOT_VERIFY_TOL.max(tol) * (1.0 + mass)
        });
        if ok {
            out.push(Lambda::Numeric(z));
        }
    }
    out
}

fn exact_common_roots<S: Scalar>(conds: &[&Vec<(i64, S)>]) -> Result<Vec<Lambda<S>>> {
    let mut g: Vec<Exact> = Vec::new();
    for c in conds {
        let e: Vec<(i64, Exact)> = c.iter().map(|(n, v)| (*n, v.as_exact().expect("exact mode"))).collect();
        if let Some(p) = dense(&e, Exact::zero()) {
            g = if g.is_empty() { poly::gcd_exact(&p, &p) } else { poly::gcd_exact(&g, &p) };
        }
    }
    if g.len() <= 1 {
        return Ok(Vec::new());
    }
    let sf = poly::squarefree_exact(&g);
    let approx: Vec<C64> = sf.iter().map(Scalar::to_c64).collect();
    let mut out = Vec::new();
    for z in poly::unit_circle_roots(&approx) {
        out.push(snap_root::<S>(&sf, z));
    }
    Ok(out)
}

/// Identifies a numeric root of the exact polynomial `p` as a root of unity or a
/// Gaussian rational when that can be verified exactly.
fn snap_root<S: Scalar>(p: &[Exact], z: C64) -> Lambda<S> {
    let t = turns_of(z);
    let coeffs: Vec<(i64, Exact)> = p.iter().cloned().enumerate().map(|(i, c)| (i as i64, c)).collect();
    for m in 1..=SNAP_MAX_ORDER {
        let k = (t * m as f64).round() as i64;
        if (t * m as f64 - k as f64).abs() <= 1e-6 * m as f64
            && crate::cyclotomic::laurent_vanishes_at_root(&coeffs, k.rem_euclid(m as i64), m)
        {
            return Lambda::root(k, m);
        }
    }
    if let (Some(re), Some(im)) = (small_rational(z.re), small_rational(z.im)) {
        let w = Exact::new(re.clone(), im.clone());
        if poly::eval_exact(p, &w).is_zero() && (w.norm_sqr() - BigRational::from_integer(1.into())).is_zero() {
            if let Some(s) = S::from_big_ratio(re, im) {
                return Lambda::Value(s);
            }
        }
    }
    Lambda::Numeric(z)
}

/// The best rational approximation of `x` with denominator at most `SNAP_MAX_DEN`,
/// if it is within `1e-9`.
fn small_rational(x: f64) -> Option<BigRational> {
    // continued fraction convergents
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    for _ in 0..40 {
        let a = r.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a.checked_mul(h1)?.checked_add(h0)?, a.checked_mul(k1)?.checked_add(k0)?);
        if k2.abs() > SNAP_MAX_DEN {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if (x - h1 as f64 / k1 as f64).abs() <= 1e-12 {
            break;
        }
        let frac = r - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 || (x - h1 as f64 / k1 as f64).abs() > 1e-9 {
        return None;
    }
    Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

/// The ideal `I(S)`: `P_x` for aperiodic orbits, `P_{x,μ^p}` for recorded `μ`
/// over periodic orbits, `Q_x` for full periodic fibres and `K(S)` for set entries.
pub fn ideal_of_torus_set<S: Scalar>(sys: &System, t: &TorusSubset<S>) -> Result<IdealHandle<S>> {
    let mut parts: Vec<IdealHandle<S>> = Vec::new();
    for e in &t.entries {
        match e {
            TorusEntry::Set(s) => parts.push(IdealHandle::Kernel(s.clone())),
            TorusEntry::Orbit { rep, lambdas } => match (sys.period(rep)?, lambdas) {
                (Period::Aperiodic, _) => parts.push(IdealHandle::Px(rep.clone())),
                (Period::Periodic(_), LambdaSet::Full) => parts.push(IdealHandle::Qx(rep.clone())),
                (Period::Periodic(p), LambdaSet::Roots(r)) => {
                    let mut seen: Vec<Lambda<S>> = Vec::new();
                    for mu in r {
                        let l = mu.pow(p as i64);
                        if !in_set(&seen, &l) {
                            seen.push(l.clone());
                            parts.push(IdealHandle::PxLambda(rep.clone(), l));
                        }
                    }
                }
            },
        }
    }
    Ok(match parts.len() {
        0 => IdealHandle::whole(sys),
        1 => parts.pop().unwrap(),
        _ => IdealHandle::Intersection(parts),
    })
}

/// `F(a)` vanishes on `t`.
pub fn tilde_member<S: Scalar>(sys: &System, t: &TorusSubset<S>, a: &AlgebraElement<S>, tol: f64) -> Result<bool> {
    let full = t.full_part(sys)?;
    for f in a.coeffs().values() {
        if !f.vanishes_on(sys, &full, tol)? {
            return Ok(false);
        }
    }
    for e in &t.entries {
        if let TorusEntry::Orbit { rep, lambdas: LambdaSet::Roots(r) } = e {
            for xp in sys.orbit(rep)? {
                let coeffs: Vec<(i64, S)> = a.coeffs().iter().map(|(n, f)| (*n, f.eval_unchecked(&xp))).collect();
                for mu in r {
                    if !mu.laurent_vanishes(&coeffs, tol) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// `a ∈ I(S)`: `a f ∈ Ĩ(S)` for `f` running over the constant function and
/// bumps at the points of the periodic orbits carrying finitely many `μ`.
pub fn ideal_member_via_s<S: Scalar>(sys: &Arc<System>, t: &TorusSubset<S>, a: &AlgebraElement<S>, tol: f64) -> Result<bool> {
    let mut fs = vec![FunctionValue::one(sys)];
    for e in &t.entries {
        if let TorusEntry::Orbit { rep, lambdas: LambdaSet::Roots(_) } = e {
            let orbit = sys.orbit(rep)?;
            for (i, y) in orbit.iter().enumerate() {
                let others: Vec<Point> = orbit.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, q)| q.clone()).collect();
                fs.push(FunctionValue::bump(sys, y, &ClosedSet::from_points(sys, &others)?)?);
            }
        }
    }
    for f in fs {
        let af = a.mul(&AlgebraElement::function(sys, f)?)?;
        if !tilde_member(sys, t, &af, tol)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `I(Z(I))`, the smallest intersection of primitive ideals containing `I`.
pub fn zi_closure<S: Scalar>(sys: &System, ideal: &IdealHandle<S>, tol: f64) -> Result<IdealHandle<S>> {
    ideal_of_torus_set(sys, &zeros_of_ideal(sys, ideal, tol)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZerosReport<S> {
    pub nonempty: bool,
    pub witness: Option<(Point, Lambda<S>)>,
    pub note: String,
}

pub fn zeros_nonempty_report<S: Scalar>(sys: &System, ideal: &IdealHandle<S>, tol: f64) -> Result<ZerosReport<S>> {
    let z = zeros_of_ideal(sys, ideal, tol)?;
    let witness = z.witness(sys)?;
    let note = if witness.is_some() {
        "Z(I) is nonempty, so the closure of I in the C*-crossed product is proper".to_string()
    } else {
        "every orbit condition has no common root on the circle: Z(I) is empty, so I is dense in the C*-crossed product"
            .to_string()
    };
    Ok(ZerosReport { nonempty: witness.is_some(), witness, note })
}

/// Compares `Z(I)` with `Z(I*)` for a generated ideal.
pub fn adjoint_zeros_equal<S: Scalar>(sys: &System, ideal: &IdealHandle<S>, tol: f64) -> Result<bool> {
    let IdealHandle::Generated(gens) = ideal else {
        return unsupported("adjoint comparison expects a generated ideal");
    };
    let star = IdealHandle::Generated(gens.iter().map(AlgebraElement::adj).collect());
    zeros_of_ideal(sys, ideal, tol)?.set_eq(sys, &zeros_of_ideal(sys, &star, tol)?)
}
