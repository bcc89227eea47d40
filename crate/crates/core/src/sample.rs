//! Seeded random elements and random members of ideals.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::AlgebraElement;
use crate::dynsys::{CircleSet, ClosedSet, Point, System};
use crate::error::{unsupported, Result};
use crate::funcspace::FunctionValue;
use crate::reps_ideals::ideals::escape_element;
use crate::reps_ideals::{IdealHandle, Lambda};
use crate::scalar::{unit_from_turns, Scalar, C64};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A small Gaussian rational `(a + bi)/d`, `|a|, |b| <= 3`, `d ∈ {1, 2}`.
    pub fn scalar<S: Scalar>(&mut self) -> S {
        let d = self.rng.gen_range(1..=2);
        let re = S::from_ratio(self.rng.gen_range(-3..=3), d);
        if self.rng.gen_bool(0.5) {
            re
        } else {
            re + S::imag_unit() * S::from_ratio(self.rng.gen_range(-3..=3), d)
        }
    }

    fn sparse_scalar<S: Scalar>(&mut self) -> S {
        if self.rng.gen_bool(0.25) {
            S::zero()
        } else {
            self.scalar()
        }
    }

    pub fn function<S: Scalar>(&mut self, sys: &System) -> FunctionValue<S> {
        match sys {
            System::Finite { sigma } => FunctionValue::Finite((0..sigma.len()).map(|_| self.sparse_scalar()).collect()),
            System::Shift => {
                let inf = self.sparse_scalar();
                let count = self.rng.gen_range(0..=3);
                let exceptions = (0..count).map(|_| (self.rng.gen_range(-3..=3), self.sparse_scalar())).collect();
                FunctionValue::Shift { inf, exceptions }.normalized()
            }
            System::Rotation { .. } => {
                FunctionValue::Trig((-2..=2).map(|k| (k, self.sparse_scalar())).collect()).normalized()
            }
            System::Union(parts) => FunctionValue::Union(parts.iter().map(|p| self.function(p)).collect()),
        }
    }

    /// A trigonometric polynomial with frequencies in `[-2, 2]` and Wiener norm 1.
    pub fn unit_wiener(&mut self) -> FunctionValue<C64> {
        let mut m: BTreeMap<i64, C64> = BTreeMap::new();
        for k in -2..=2 {
            if self.rng.gen_bool(0.6) {
                m.insert(k, C64::new(self.rng.gen_range(-1.0..1.0), self.rng.gen_range(-1.0..1.0)));
            }
        }
        if m.is_empty() {
            m.insert(0, C64::new(1.0, 0.0));
        }
        let total: f64 = m.values().map(|c| c.norm()).sum();
        FunctionValue::Trig(m.into_iter().map(|(k, c)| (k, c / total)).collect())
    }

    /// A random element with support in `[-radius, radius]`.
    pub fn element<S: Scalar>(&mut self, sys: &Arc<System>, radius: i64) -> AlgebraElement<S> {
        let mut coeffs = Vec::new();
        for n in -radius..=radius {
            if self.rng.gen_bool(0.6) {
                coeffs.push((n, self.function(sys)));
            }
        }
        AlgebraElement::from_coeffs(sys, coeffs).expect("sampled functions fit the system")
    }

    /// A point on the unit circle: a root of unity of order at most 12 or a random angle.
    pub fn lambda<S: Scalar>(&mut self) -> Lambda<S> {
        if S::MODE == crate::scalar::NumericMode::Exact || self.rng.gen_bool(0.5) {
            let m = self.rng.gen_range(1..=12);
            Lambda::root(self.rng.gen_range(0..m as i64), m)
        } else {
            Lambda::Numeric(unit_from_turns(self.rng.gen_range(0.0..1.0)))
        }
    }

    /// A random element of `I`.
    pub fn member<S: Scalar>(&mut self, sys: &Arc<System>, ideal: &IdealHandle<S>, radius: i64) -> Result<AlgebraElement<S>> {
        if let Some(s) = ideal.kernel_set(sys)? {
            let a = self.element::<S>(sys, radius);
            return AlgebraElement::from_coeffs(
                sys,
                a.coeffs().iter().map(|(n, f)| annihilate(sys, f, &s).map(|g| (*n, g))).collect::<Result<Vec<_>>>()?,
            );
        }
        match ideal {
            IdealHandle::PxLambda(x, l) => {
                let p = sys.period(x)?.get().expect("validated") as i64;
                match l.as_scalar() {
                    Some(lv) => {
                        // fix the λ-sums through the l = 0 coefficient, one orbit point at a time
                        let a = self.element::<S>(sys, radius);
                        let orbit = sys.orbit(x)?;
                        let mut coeffs = a.coeffs().clone();
                        for (idx, xp) in orbit.iter().enumerate() {
                            let others = ClosedSet::from_points(
                                sys,
                                &orbit.iter().enumerate().filter(|(i, _)| *i != idx).map(|(_, q)| q.clone()).collect::<Vec<_>>(),
                            )?;
                            let b = FunctionValue::<S>::bump(sys, xp, &others)?;
                            for j in 0..p {
                                let mut r = S::zero();
                                for (n, f) in &coeffs {
                                    if n.rem_euclid(p) == j {
                                        let e = (n - j).div_euclid(p);
                                        r = r + f.eval_unchecked(xp) * Scalar::powi(&lv, e).expect("unimodular");
                                    }
                                }
                                if !r.is_zero() {
                                    let c = coeffs.entry(j).or_insert_with(|| FunctionValue::zero(sys));
                                    *c = c.sub(&b.scale(&r))?;
                                }
                            }
                        }
                        AlgebraElement::from_coeffs(sys, coeffs)
                    }
                    None => {
                        let e = escape_element(sys, &FunctionValue::one(sys), l, p as u64)?;
                        let u = self.element::<S>(sys, 1);
                        let v = self.element::<S>(sys, 1);
                        let q = self.member(sys, &IdealHandle::Qx(x.clone()), radius)?;
                        u.mul(&e)?.mul(&v)?.add(&q)
                    }
                }
            }
            IdealHandle::Intersection(v) => {
                if let Some(a) = self.solved_member(sys, v, radius)? {
                    return Ok(a);
                }
                let mut acc = AlgebraElement::one(sys);
                for m in v {
                    acc = acc.mul(&self.member(sys, m, 1)?)?;
                }
                Ok(acc)
            }
            IdealHandle::Generated(gens) => {
                let mut acc = AlgebraElement::zero(sys);
                for g in gens {
                    let u = self.element::<S>(sys, 1);
                    let v = self.element::<S>(sys, 1);
                    acc = acc.add(&u.mul(g)?.mul(&v)?)?;
                }
                Ok(acc)
            }
            _ => unreachable!("well-behaved handles have kernel sets"),
        }
    }
}

impl Sampler {
    /// A member of an intersection of kernel-type ideals and `P_{x,λ}` with
    /// concrete `λ`: a random element, annihilated on the kernel set, with its
    /// λ-polynomials at the constrained points replaced through bumps.
    /// Products of members would vanish wherever any factor does.
    fn solved_member<S: Scalar>(
        &mut self,
        sys: &Arc<System>,
        parts: &[IdealHandle<S>],
        radius: i64,
    ) -> Result<Option<AlgebraElement<S>>> {
        let mut leaves = Vec::new();
        flatten(parts, &mut leaves);
        let mut kernel = ClosedSet::empty(sys);
        // (orbit, p, distinct λ)
        let mut groups: Vec<(Vec<Point>, i64, Vec<S>)> = Vec::new();
        for leaf in leaves {
            if let Some(k) = leaf.kernel_set(sys)? {
                kernel = kernel.union(&k)?;
                continue;
            }
            let IdealHandle::PxLambda(x, l) = leaf else {
                return Ok(None);
            };
            let Some(lv) = l.as_scalar() else {
                return Ok(None);
            };
            match groups.iter_mut().find(|g| g.0.contains(x)) {
                Some(g) => {
                    if !g.2.iter().any(|m| m.approx_eq(&lv, 1e-12)) {
                        g.2.push(lv);
                    }
                }
                None => {
                    let p = sys.period(x)?.get().expect("validated") as i64;
                    groups.push((sys.orbit(x)?, p, vec![lv]));
                }
            }
        }
        groups.retain(|g| !g.0.iter().all(|y| kernel.contains(y)));
        let constrained: Vec<Point> = groups.iter().flat_map(|g| g.0.iter().cloned()).collect();

        let a = self.element::<S>(sys, radius);
        let mut coeffs: BTreeMap<i64, FunctionValue<S>> = BTreeMap::new();
        for (n, f) in a.coeffs() {
            coeffs.insert(*n, annihilate(sys, f, &kernel)?);
        }
        for (orbit, p, lambdas) in &groups {
            for xp in orbit {
                let others: Vec<Point> = constrained.iter().filter(|y| *y != xp).cloned().collect();
                let avoid = ClosedSet::from_points(sys, &others)?.union(&kernel)?;
                let b = FunctionValue::<S>::bump(sys, xp, &avoid)?;
                // the λ-polynomial at (xp, j) becomes prod (λ - λ_i) times a random nonzero linear factor
                let vanish = lambdas.iter().fold(vec![S::one()], |acc, lv| poly_mul(&acc, &[-lv.clone(), S::one()]));
                for j in 0..*p {
                    let mut r = [self.scalar::<S>(), self.scalar::<S>()];
                    if r.iter().all(|c| c.is_zero()) {
                        r[0] = S::one();
                    }
                    let target = poly_mul(&vanish, &r);
                    let mut indices: Vec<i64> = coeffs.keys().copied().filter(|n| n.rem_euclid(*p) == j).collect();
                    indices.extend((0..target.len() as i64).map(|l| l * p + j));
                    indices.sort_unstable();
                    indices.dedup();
                    for n in indices {
                        let l = (n - j).div_euclid(*p);
                        let want = if (0..target.len() as i64).contains(&l) { target[l as usize].clone() } else { S::zero() };
                        let e = coeffs.entry(n).or_insert_with(|| FunctionValue::zero(sys));
                        let have = e.eval_unchecked(xp);
                        if want != have {
                            *e = e.add(&b.scale(&(want - have)))?;
                        }
                    }
                }
            }
        }
        AlgebraElement::from_coeffs(sys, coeffs).map(Some)
    }
}

fn flatten<'a, S: Scalar>(parts: &'a [IdealHandle<S>], out: &mut Vec<&'a IdealHandle<S>>) {
    for p in parts {
        match p {
            IdealHandle::Intersection(v) => flatten(v, out),
            other => out.push(other),
        }
    }
}

fn poly_mul<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut out = vec![S::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// A function that vanishes on `s` and agrees with `f` away from it when possible.
pub(crate) fn annihilate<S: Scalar>(sys: &System, f: &FunctionValue<S>, s: &ClosedSet) -> Result<FunctionValue<S>> {
    match (sys, f, s) {
        (System::Rotation { .. }, FunctionValue::Trig(_), ClosedSet::Circle(CircleSet::Points(ps))) if !ps.is_empty() => {
            let mut g = f.clone();
            for t in ps {
                let w = S::from_c64(unit_from_turns(*t));
                let Some(w) = w else {
                    return unsupported("circle points need float mode");
                };
                let lin = FunctionValue::Trig([(1, S::one()), (0, -w)].into_iter().collect()).normalized();
                g = g.mul(&lin)?;
            }
            Ok(g)
        }
        (System::Union(parts), FunctionValue::Union(fs), ClosedSet::Union(sets)) => Ok(FunctionValue::Union(
            parts.iter().zip(fs).zip(sets).map(|((p, f), s)| annihilate(p, f, s)).collect::<Result<_>>()?,
        )),
        _ => f.kill_on(sys, s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::Point;
    use crate::scalar::{Exact, Float};

    #[test]
    fn samples_are_members() {
        let sys = Arc::new(System::union(vec![System::Shift, System::cycle(3)]).unwrap());
        let mut s = Sampler::new(7);
        let x2 = Point::In(1, Box::new(Point::Finite(0)));
        let ideals: Vec<IdealHandle<Exact>> = vec![
            IdealHandle::Px(Point::In(0, Box::new(Point::Int(0)))),
            IdealHandle::Qx(x2.clone()),
            IdealHandle::PxLambda(x2.clone(), Lambda::root(1, 3)),
            IdealHandle::PxLambda(x2.clone(), Lambda::root(1, 4)),
            IdealHandle::PxLambda(x2.clone(), Lambda::one()),
        ];
        for i in &ideals {
            for _ in 0..10 {
                let a = s.member(&sys, i, 3).unwrap();
                assert!(i.member(&sys, &a, 0.0).unwrap(), "{}", i.render());
            }
        }
    }

    fn generic_meet<S: Scalar>(lambdas: [Lambda<S>; 3], other: Lambda<S>, tol: f64) {
        // several λ at the same orbit, next to conditions elsewhere
        let sys = Arc::new(System::union(vec![System::Shift, System::finite(vec![1, 0, 3, 4, 2]).unwrap()]).unwrap());
        let inf = Point::In(0, Box::new(Point::Inf));
        let x0 = Point::In(1, Box::new(Point::Finite(0)));
        let [l1, l2, l3] = lambdas;
        let meet = IdealHandle::<S>::Intersection(vec![
            IdealHandle::PxLambda(inf.clone(), l1),
            IdealHandle::PxLambda(inf.clone(), l2),
            IdealHandle::PxLambda(x0, l3),
            IdealHandle::Qx(Point::In(1, Box::new(Point::Finite(2)))),
        ]);
        let other = IdealHandle::<S>::PxLambda(inf, other);
        let mut s = Sampler::new(11);
        for _ in 0..20 {
            let a = s.member(&sys, &meet, 2).unwrap();
            assert!(meet.member(&sys, &a, tol).unwrap(), "{}", a.render());
            assert!(!other.member(&sys, &a, tol).unwrap(), "{}", a.render());
        }
    }

    #[test]
    fn intersection_members_are_generic() {
        generic_meet::<Float>([Lambda::root(1, 8), Lambda::root(3, 5), Lambda::root(1, 2)], Lambda::root(1, 3), 1e-9);
        generic_meet::<Exact>([Lambda::one(), Lambda::root(1, 2), Lambda::root(1, 4)], Lambda::root(3, 4), 0.0);
    }

    #[test]
    fn rational_rotation_orbit_member() {
        let sys = Arc::new(System::rotation(crate::dynsys::Theta::Surd { p: 1, q: 0, r: 1, d: 4 }, false).unwrap());
        let mut s = Sampler::new(3);
        let i = IdealHandle::<Float>::Qx(Point::Turn(0.1));
        for _ in 0..5 {
            let a = s.member(&sys, &i, 2).unwrap();
            assert!(i.member(&sys, &a, 1e-9).unwrap());
        }
    }
}
