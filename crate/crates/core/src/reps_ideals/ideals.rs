use std::sync::Arc;

use super::lambda::Lambda;
use crate::algebra::AlgebraElement;
use crate::cyclotomic::cyclotomic_poly;
use crate::dynsys::{CircleSet, ClosedSet, OrbitPiece, Period, Point, System};
use crate::error::{unsupported, Error, Result};
use crate::funcspace::FunctionValue;
use crate::scalar::Scalar;

/// A closed ideal of the crossed product, described structurally.
#[derive(Clone, Debug, PartialEq)]
pub enum IdealHandle<S> {
    /// Kernel of `π_x`, `x` aperiodic.
    Px(Point),
    /// Kernel of `π_{x,λ}`, `x` periodic.
    PxLambda(Point, Lambda<S>),
    /// `∩_λ P_{x,λ}`, `x` periodic.
    Qx(Point),
    /// `{a : every a_n vanishes on S}`, `S` invariant and closed.
    Kernel(ClosedSet),
    Intersection(Vec<IdealHandle<S>>),
    /// The closed ideal generated by the listed elements.
    Generated(Vec<AlgebraElement<S>>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Behaviour<S> {
    WellBehaved,
    /// `a ∈ I` with `E(a) = f ∉ I`; `E(I)` is all of `C(X)`.
    BadlyBehaved { f: FunctionValue<S>, a: AlgebraElement<S> },
    /// `a ∈ I` with `E(a) = f ∉ I`, while `E(I)` is a proper ideal.
    Plain { f: FunctionValue<S>, a: AlgebraElement<S> },
}

impl<S> Behaviour<S> {
    pub fn name(&self) -> &'static str {
        match self {
            Behaviour::WellBehaved => "well-behaved",
            Behaviour::BadlyBehaved { .. } => "badly-behaved",
            Behaviour::Plain { .. } => "plain",
        }
    }
}

fn periodic(sys: &System, x: &Point) -> Result<u64> {
    match sys.period(x)? {
        Period::Periodic(p) => Ok(p),
        Period::Aperiodic => Err(Error::Precondition(format!("{x} is aperiodic"))),
    }
}

fn aperiodic(sys: &System, x: &Point) -> Result<()> {
    match sys.period(x)? {
        Period::Aperiodic => Ok(()),
        Period::Periodic(_) => Err(Error::Precondition(format!("{x} is periodic"))),
    }
}

/// The orbit of a periodic point as a closed set.
pub(crate) fn orbit_set(sys: &System, x: &Point) -> Result<ClosedSet> {
    ClosedSet::from_points(sys, &sys.orbit(x)?)
}

/// `sum_i q_i f δ^{ip}` with `q(λ) = 0` and `q(0) = 1`; it lies in `P_{x,λ}`
/// for every `x` of period `p`, and `E` of it is `f`.
pub(crate) fn escape_element<S: Scalar>(
    sys: &Arc<System>,
    f: &FunctionValue<S>,
    lambda: &Lambda<S>,
    p: u64,
) -> Result<AlgebraElement<S>> {
    let q: Vec<S> = match lambda {
        Lambda::Root { k: _, m } => {
            let phi = cyclotomic_poly(*m);
            let c0 = S::from_i64(phi[0]);
            phi.iter().map(|c| S::from_i64(*c) / c0.clone()).collect()
        }
        Lambda::Branch { base, p: pb, .. } if S::from_c64(lambda.to_c64()).is_none() => {
            // 1 - t^{pb} / base
            let mut q = vec![S::zero(); *pb as usize + 1];
            q[0] = S::one();
            q[*pb as usize] = -base.inverse().expect("unimodular");
            q
        }
        _ => {
            let l = lambda
                .as_scalar()
                .ok_or_else(|| Error::Unsupported(format!("λ = {lambda} has no exact value in this mode")))?;
            vec![S::one(), -l.inverse().expect("unimodular")]
        }
    };
    AlgebraElement::from_coeffs(
        sys,
        q.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as i64 * p as i64, f.scale(c))),
    )
}

impl<S: Scalar> IdealHandle<S> {
    /// The whole algebra, as `K(∅)`.
    pub fn whole(sys: &System) -> Self {
        IdealHandle::Kernel(ClosedSet::empty(sys))
    }

    /// The zero ideal, as `K(X)`.
    pub fn zero(sys: &System) -> Self {
        IdealHandle::Kernel(ClosedSet::whole(sys))
    }

    pub fn validate(&self, sys: &System) -> Result<()> {
        match self {
            IdealHandle::Px(x) => aperiodic(sys, x),
            IdealHandle::PxLambda(x, l) => {
                periodic(sys, x)?;
                if l.is_unimodular() {
                    Ok(())
                } else {
                    Err(Error::Precondition(format!("|λ| != 1 for λ = {l}")))
                }
            }
            IdealHandle::Qx(x) => periodic(sys, x).map(|_| ()),
            IdealHandle::Kernel(s) => {
                if s.is_invariant(sys)? {
                    Ok(())
                } else {
                    Err(Error::NotInvariant)
                }
            }
            IdealHandle::Intersection(v) => v.iter().try_for_each(|i| i.validate(sys)),
            IdealHandle::Generated(gens) => {
                for g in gens {
                    if **g.system() != *sys {
                        return Err(Error::Mismatch("generator on another system".into()));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn is_canonical(&self) -> bool {
        matches!(self, IdealHandle::Px(_) | IdealHandle::PxLambda(..) | IdealHandle::Qx(_))
    }

    /// For well-behaved handles, the set `S` with `I = K(S)`.
    pub fn kernel_set(&self, sys: &System) -> Result<Option<ClosedSet>> {
        Ok(match self {
            IdealHandle::Px(x) => Some(sys.orbit_closure(x)?),
            IdealHandle::Qx(x) => Some(orbit_set(sys, x)?),
            IdealHandle::Kernel(s) => Some(s.clone()),
            IdealHandle::Intersection(v) => {
                let mut acc = ClosedSet::empty(sys);
                for i in v {
                    match i.kernel_set(sys)? {
                        Some(s) => acc = acc.union(&s)?,
                        None => return Ok(None),
                    }
                }
                Some(acc)
            }
            _ => None,
        })
    }

    /// The conditions `sum_l λ^l a_{lp+j}(x') = 0`, one coefficient list per `(j, x')`.
    pub(crate) fn lambda_conditions(sys: &System, x: &Point, a: &AlgebraElement<S>) -> Result<Vec<Vec<(i64, S)>>> {
        let p = periodic(sys, x)? as i64;
        let orbit = sys.orbit(x)?;
        let mut out = Vec::with_capacity((p as usize) * orbit.len());
        for xp in &orbit {
            for j in 0..p {
                let coeffs: Vec<(i64, S)> = a
                    .coeffs()
                    .iter()
                    .filter(|(n, _)| n.rem_euclid(p) == j)
                    .map(|(n, f)| ((n - j).div_euclid(p), f.eval_unchecked(xp)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect();
                out.push(coeffs);
            }
        }
        Ok(out)
    }

    pub fn member(&self, sys: &System, a: &AlgebraElement<S>, tol: f64) -> Result<bool> {
        if **a.system() != *sys {
            return Err(Error::Mismatch("element on another system".into()));
        }
        let vanish_on = |s: &ClosedSet| -> Result<bool> {
            for f in a.coeffs().values() {
                if !f.vanishes_on(sys, s, tol)? {
                    return Ok(false);
                }
            }
            Ok(true)
        };
        match self {
            IdealHandle::Px(x) => {
                aperiodic(sys, x)?;
                vanish_on(&sys.orbit_closure(x)?)
            }
            IdealHandle::Qx(x) => {
                periodic(sys, x)?;
                vanish_on(&orbit_set(sys, x)?)
            }
            IdealHandle::PxLambda(x, l) => {
                for cond in Self::lambda_conditions(sys, x, a)? {
                    if !l.laurent_vanishes(&cond, tol) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            IdealHandle::Kernel(s) => {
                s.validate(sys)?;
                vanish_on(s)
            }
            IdealHandle::Intersection(v) => {
                for i in v {
                    if !i.member(sys, a, tol)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            IdealHandle::Generated(_) => {
                unsupported("membership in a finitely generated ideal; use hull, zeros or the zi closure instead")
            }
        }
    }

    pub fn behaviour(&self, sys: &Arc<System>) -> Result<Behaviour<S>> {
        self.validate(sys)?;
        match self {
            IdealHandle::Px(_) | IdealHandle::Qx(_) | IdealHandle::Kernel(_) => Ok(Behaviour::WellBehaved),
            IdealHandle::PxLambda(x, l) => {
                let p = periodic(sys, x)?;
                let f = FunctionValue::one(sys);
                let a = escape_element(sys, &f, l, p)?;
                Ok(Behaviour::BadlyBehaved { f, a })
            }
            IdealHandle::Intersection(v) => {
                if v.iter().all(|i| i.kernel_set(sys).is_ok_and(|s| s.is_some())) {
                    return Ok(Behaviour::WellBehaved);
                }
                let (x1, x2, l) = match v.as_slice() {
                    [IdealHandle::Px(x1), IdealHandle::PxLambda(x2, l)]
                    | [IdealHandle::PxLambda(x2, l), IdealHandle::Px(x1)] => (x1, x2, l),
                    [single] => return single.behaviour(sys),
                    _ => return unsupported("behaviour of this intersection shape"),
                };
                let closure = sys.orbit_closure(x1)?;
                if closure.contains(x2) {
                    // then P_{x1} ⊆ P_{x2,λ}, and the intersection is P_{x1}
                    return Ok(Behaviour::WellBehaved);
                }
                let p = periodic(sys, x2)?;
                let f = FunctionValue::bump(sys, x2, &closure)?;
                let a = escape_element(sys, &f, l, p)?;
                Ok(Behaviour::Plain { f, a })
            }
            IdealHandle::Generated(_) => unsupported("behaviour of a finitely generated ideal"),
        }
    }

    pub fn render(&self) -> String {
        match self {
            IdealHandle::Px(x) => format!("Px({x})"),
            IdealHandle::PxLambda(x, l) => format!("Pxl({x}, {})", l.render()),
            IdealHandle::Qx(x) => format!("Qx({x})"),
            IdealHandle::Kernel(s) => format!("K({s})"),
            IdealHandle::Intersection(v) => {
                format!("meet({})", v.iter().map(Self::render).collect::<Vec<_>>().join(", "))
            }
            IdealHandle::Generated(g) => {
                format!("gen({})", g.iter().map(AlgebraElement::render).collect::<Vec<_>>().join(", "))
            }
        }
    }
}

/// Rewrites `K(S)` as the intersection of `P_x` / `Q_x` over the orbits of `S`.
pub(crate) fn kernel_as_canonical<S: Scalar>(sys: &System, s: &ClosedSet) -> Result<Vec<IdealHandle<S>>> {
    let pieces = s.orbit_pieces(sys)?;
    let mut closures = Vec::new();
    for piece in &pieces {
        if let OrbitPiece::Orbit(y) = piece {
            if sys.period(y)? == Period::Aperiodic {
                closures.push(sys.orbit_closure(y)?);
            }
        }
    }
    let mut out = Vec::new();
    for piece in pieces {
        match piece {
            OrbitPiece::Orbit(x) => match sys.period(&x)? {
                // a periodic orbit in the closure of an aperiodic one adds nothing
                Period::Periodic(_) if closures.iter().any(|c| c.contains(&x)) => {}
                Period::Periodic(_) => out.push(IdealHandle::Qx(x)),
                Period::Aperiodic => out.push(IdealHandle::Px(x)),
            },
            OrbitPiece::Continuum(set) => {
                // a whole irrational rotation is the closure of any of its orbits
                out.push(IdealHandle::Px(continuum_point(&set)?));
            }
        }
    }
    Ok(out)
}

pub(crate) fn continuum_point(set: &ClosedSet) -> Result<Point> {
    match set {
        ClosedSet::Circle(CircleSet::Whole) => Ok(Point::Turn(0.0)),
        ClosedSet::Union(parts) => {
            for (c, s) in parts.iter().enumerate() {
                if !s.is_empty() {
                    return Ok(Point::In(c, Box::new(continuum_point(s)?)));
                }
            }
            Err(Error::Precondition("empty continuum".into()))
        }
        _ => Err(Error::Precondition("not a continuum".into())),
    }
}

/// Decides `I ⊆ J` from orbit data.
///
/// Well-behaved handles are compared through their kernel sets
/// (`K(S) ⊆ K(T) ⇔ S ⊇ T`), `K(S) ⊆ P_{x,λ} ⇔ S ⊇ O(x)`, a badly behaved
/// `P_{x,λ}` lies in a well-behaved ideal only when that ideal is everything,
/// and `P_{x1,λ1} ⊆ P_{x2,λ2}` iff the orbits and the λ agree. Intersections
/// on the left use primeness of the primitive ideals.
pub fn ideal_inclusion<S: Scalar>(sys: &System, i: &IdealHandle<S>, j: &IdealHandle<S>) -> Result<bool> {
    i.validate(sys)?;
    j.validate(sys)?;
    match j {
        IdealHandle::Intersection(v) => {
            for jj in v {
                if !ideal_inclusion(sys, i, jj)? {
                    return Ok(false);
                }
            }
            return Ok(true);
        }
        IdealHandle::Kernel(t) => {
            if let Some(s) = i.kernel_set(sys)? {
                return t.subset(&s);
            }
            let parts = kernel_as_canonical::<S>(sys, t)?;
            return ideal_inclusion(sys, i, &IdealHandle::Intersection(parts));
        }
        IdealHandle::Generated(_) => return unsupported("inclusion into a finitely generated ideal"),
        _ => {}
    }
    if let IdealHandle::Generated(gens) = i {
        for g in gens {
            if !j.member(sys, g, 0.0)? {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    // j is canonical from here on
    if let Some(s) = i.kernel_set(sys)? {
        return match j {
            IdealHandle::Px(x) => sys.orbit_closure(x)?.subset(&s),
            IdealHandle::Qx(x) | IdealHandle::PxLambda(x, _) => orbit_set(sys, x)?.subset(&s),
            _ => unreachable!(),
        };
    }
    match (i, j) {
        (IdealHandle::Intersection(v), IdealHandle::Qx(x)) => {
            // Q_x = ∩_λ P_{x,λ}: finitely many P_{y,μ} cannot cover every λ,
            // so some well-behaved member must already lie in Q_x.
            let o = orbit_set(sys, x)?;
            for m in v {
                if let Some(s) = m.kernel_set(sys)? {
                    if o.subset(&s)? {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
        (IdealHandle::Intersection(v), _) => {
            for m in v {
                if ideal_inclusion(sys, m, j)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        (IdealHandle::PxLambda(x1, l1), IdealHandle::PxLambda(x2, l2)) => Ok(sys.same_orbit(x1, x2)? && l1.same(l2)),
        (IdealHandle::PxLambda(..), _) => Ok(false),
        _ => unreachable!("remaining left sides are well behaved"),
    }
}

/// Result of searching for a representation that does not kill `a`.
#[derive(Clone, Debug, PartialEq)]
pub enum Separation<S> {
    Zero,
    /// `a_n(x) = value != 0`; `lambda` names a `π_{x,λ}` with nonzero image
    /// when one was found in the sample. Otherwise the state `b -> E(b)(x)`
    /// applied to `a δ^{-n}` is nonzero.
    Witness { point: Point, n: i64, value: S, lambda: Option<Lambda<S>> },
}

pub(crate) fn probe_points<S: Scalar>(sys: &System, a: &AlgebraElement<S>) -> Vec<Point> {
    match sys {
        System::Finite { sigma } => (0..sigma.len()).map(Point::Finite).collect(),
        System::Shift => {
            let mut keys: Vec<i64> = Vec::new();
            for f in a.coeffs().values() {
                if let FunctionValue::Shift { exceptions, .. } = f {
                    keys.extend(exceptions.keys());
                }
            }
            keys.sort_unstable();
            keys.dedup();
            let generic = keys.last().map_or(0, |k| k + 1);
            let mut pts = vec![Point::Inf];
            pts.extend(keys.into_iter().map(Point::Int));
            pts.push(Point::Int(generic));
            pts
        }
        System::Rotation { .. } => (0..64).map(|i| Point::Turn(i as f64 / 64.0 + 0.003)).collect(),
        System::Union(parts) => {
            let mut out = Vec::new();
            for (c, p) in parts.iter().enumerate() {
                let sub = component_element(a, c, p);
                out.extend(probe_points(p, &sub).into_iter().map(|x| Point::In(c, Box::new(x))));
            }
            out
        }
    }
}

fn component_element<S: Scalar>(a: &AlgebraElement<S>, c: usize, part: &System) -> AlgebraElement<S> {
    let sys = Arc::new(part.clone());
    let coeffs = a.coeffs().iter().filter_map(|(n, f)| match f {
        FunctionValue::Union(v) => Some((*n, v[c].clone())),
        _ => None,
    });
    AlgebraElement::from_coeffs(&sys, coeffs).unwrap_or_else(|_| AlgebraElement::zero(&sys))
}

pub fn separating_check<S: Scalar>(
    sys: &System,
    a: &AlgebraElement<S>,
    lambdas: &[Lambda<S>],
    tol: f64,
) -> Result<Separation<S>> {
    if a.is_zero(tol) {
        return Ok(Separation::Zero);
    }
    for x in probe_points(sys, a) {
        for (n, f) in a.coeffs() {
            let value = f.eval_unchecked(&x);
            if value.is_negligible(tol) {
                continue;
            }
            let lambda = match sys.period(&x)? {
                Period::Periodic(_) => {
                    let mut found = None;
                    for l in lambdas {
                        if !IdealHandle::PxLambda(x.clone(), l.clone()).member(sys, a, tol)? {
                            found = Some(l.clone());
                            break;
                        }
                    }
                    found
                }
                Period::Aperiodic => None,
            };
            return Ok(Separation::Witness { point: x, n: *n, value, lambda });
        }
    }
    // Nonzero but invisible at the probes: only possible for rotation coefficients.
    Err(Error::Unsupported("no probe point detects this element".into()))
}

/// The restriction of the system to an invariant closed subset.
#[derive(Clone, Debug)]
pub struct Subsystem {
    pub system: Arc<System>,
    embed: Embed,
}

#[derive(Clone, Debug)]
enum Embed {
    Same,
    /// Subsystem point `i` is the listed point of the parent.
    Points(Vec<Point>),
    /// Kept components of a union, in order.
    Parts(Vec<(usize, Embed)>),
}

fn finite_subsystem(sys: &System, pts: Vec<Point>) -> Result<(System, Embed)> {
    let mut sigma = Vec::with_capacity(pts.len());
    for p in &pts {
        let q = sys.apply_sigma(p, 1)?;
        let idx = pts
            .iter()
            .position(|r| sys.same_point(r, &q))
            .ok_or(Error::NotInvariant)?;
        sigma.push(idx);
    }
    Ok((System::finite(sigma)?, Embed::Points(pts)))
}

fn build_subsystem(sys: &System, s: &ClosedSet) -> Result<Option<(System, Embed)>> {
    if s.is_empty() {
        return Ok(None);
    }
    Ok(Some(match (sys, s) {
        (System::Finite { sigma }, ClosedSet::Finite(set)) => {
            if set.len() == sigma.len() {
                (sys.clone(), Embed::Same)
            } else {
                finite_subsystem(sys, set.iter().map(|i| Point::Finite(*i)).collect())?
            }
        }
        (System::Shift, ClosedSet::Shift(set)) => {
            if set.cofinite {
                (System::Shift, Embed::Same)
            } else {
                finite_subsystem(sys, vec![Point::Inf])?
            }
        }
        (System::Rotation { .. }, ClosedSet::Circle(CircleSet::Whole)) => (sys.clone(), Embed::Same),
        (System::Rotation { .. }, ClosedSet::Circle(CircleSet::Points(ps))) => {
            finite_subsystem(sys, ps.iter().map(|t| Point::Turn(*t)).collect())?
        }
        (System::Union(parts), ClosedSet::Union(sets)) => {
            let mut kept = Vec::new();
            let mut systems = Vec::new();
            for (c, (p, set)) in parts.iter().zip(sets).enumerate() {
                if let Some((sub, emb)) = build_subsystem(p, set)? {
                    systems.push(sub);
                    kept.push((c, emb));
                }
            }
            (System::union(systems)?, Embed::Parts(kept))
        }
        _ => return Err(Error::Mismatch("closed set does not fit the system".into())),
    }))
}

fn restrict_fn<S: Scalar>(embed: &Embed, f: &FunctionValue<S>) -> FunctionValue<S> {
    match embed {
        Embed::Same => f.clone(),
        Embed::Points(pts) => FunctionValue::Finite(pts.iter().map(|p| f.eval_unchecked(p)).collect()),
        Embed::Parts(kept) => match f {
            FunctionValue::Union(v) => FunctionValue::Union(kept.iter().map(|(c, e)| restrict_fn(e, &v[*c])).collect()),
            _ => unreachable!("union functions on union systems"),
        },
    }
}

impl Subsystem {
    pub fn new(sys: &System, s: &ClosedSet) -> Result<Subsystem> {
        if !s.is_invariant(sys)? {
            return Err(Error::NotInvariant);
        }
        let (system, embed) = build_subsystem(sys, s)?
            .ok_or_else(|| Error::Precondition("the empty set carries no subsystem".into()))?;
        Ok(Subsystem { system: Arc::new(system), embed })
    }

    pub fn restrict<S: Scalar>(&self, a: &AlgebraElement<S>) -> Result<AlgebraElement<S>> {
        AlgebraElement::from_coeffs(&self.system, a.coeffs().iter().map(|(n, f)| (*n, restrict_fn(&self.embed, f))))
    }
}

/// The image of `a` in `l1(Σ)/K(S) ≅ l1(Σ_S)`.
pub fn quotient_restrict<S: Scalar>(
    sys: &System,
    a: &AlgebraElement<S>,
    s: &ClosedSet,
) -> Result<(Arc<System>, AlgebraElement<S>)> {
    let sub = Subsystem::new(sys, s)?;
    let r = sub.restrict(a)?;
    Ok((sub.system, r))
}
