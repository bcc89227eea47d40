//! Concrete models of `C(X)`.
//!
//! Finite systems carry a value per point. On the shift a continuous function
//! is its value at infinity plus finitely many exceptional integer values.
//! On the circle only trigonometric polynomials are modelled, normed by the
//! Wiener norm `sum |c_k|`, which dominates the sup norm.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::dynsys::{CircleSet, ClosedSet, Point, ShiftSet, System};
use crate::error::{mismatch, unsupported, Error, Result};
use crate::poly;
use crate::scalar::{turns_of, unit_from_turns, Scalar, C64};

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionValue<S> {
    Finite(Vec<S>),
    Shift { inf: S, exceptions: BTreeMap<i64, S> },
    /// Fourier coefficients; the value at `e^{2 pi i t}` is `sum c_k e^{2 pi i k t}`.
    Trig(BTreeMap<i64, S>),
    Union(Vec<FunctionValue<S>>),
}

fn zip_maps<S: Scalar>(
    a: &BTreeMap<i64, S>,
    b: &BTreeMap<i64, S>,
    da: &S,
    db: &S,
    op: impl Fn(&S, &S) -> S,
) -> BTreeMap<i64, S> {
    a.keys()
        .chain(b.keys())
        .map(|k| {
            let x = a.get(k).unwrap_or(da);
            let y = b.get(k).unwrap_or(db);
            (*k, op(x, y))
        })
        .collect()
}

impl<S: Scalar> FunctionValue<S> {
    pub fn zero(sys: &System) -> Self {
        Self::constant(sys, S::zero())
    }

    pub fn one(sys: &System) -> Self {
        Self::constant(sys, S::one())
    }

    pub fn constant(sys: &System, c: S) -> Self {
        match sys {
            System::Finite { sigma } => FunctionValue::Finite(vec![c; sigma.len()]),
            System::Shift => FunctionValue::Shift { inf: c, exceptions: BTreeMap::new() },
            System::Rotation { .. } => {
                let mut m = BTreeMap::new();
                m.insert(0, c);
                FunctionValue::Trig(m).normalized()
            }
            System::Union(parts) => FunctionValue::Union(parts.iter().map(|p| Self::constant(p, c.clone())).collect()),
        }
    }

    /// The trigonometric monomial `z^k` on a rotation (or the rotation components of a union).
    pub fn monomial(sys: &System, k: i64) -> Result<Self> {
        match sys {
            System::Rotation { .. } => Ok(FunctionValue::Trig([(k, S::one())].into())),
            _ => unsupported(format!("no character z^k on a {} system", sys.kind())),
        }
    }

    /// Indicator of a single point, when continuous.
    pub fn indicator(sys: &System, x: &Point) -> Result<Self> {
        sys.check_point(x)?;
        match (sys, x) {
            (System::Finite { sigma }, Point::Finite(i)) => {
                let mut v = vec![S::zero(); sigma.len()];
                v[*i] = S::one();
                Ok(FunctionValue::Finite(v))
            }
            (System::Shift, Point::Int(n)) => Ok(FunctionValue::Shift {
                inf: S::zero(),
                exceptions: [(*n, S::one())].into(),
            }),
            (System::Union(parts), Point::In(c, p)) => {
                let mut v: Vec<Self> = parts.iter().map(Self::zero).collect();
                v[*c] = Self::indicator(&parts[*c], p)?;
                Ok(FunctionValue::Union(v))
            }
            _ => unsupported(format!("the indicator of {x} is not continuous")),
        }
    }

    /// A continuous `f` with `f(x) = 1` and `f = 0` on `avoid`.
    pub fn bump(sys: &System, x: &Point, avoid: &ClosedSet) -> Result<Self> {
        sys.check_point(x)?;
        avoid.validate(sys)?;
        if avoid.contains(x) {
            return Err(Error::Precondition(format!("{x} lies in the set to avoid")));
        }
        match (sys, x, avoid) {
            (System::Finite { .. }, _, _) | (System::Shift, Point::Int(_), _) => Self::indicator(sys, x),
            (System::Shift, Point::Inf, ClosedSet::Shift(s)) => Ok(FunctionValue::Shift {
                inf: S::one(),
                exceptions: s.ints.iter().map(|n| (*n, S::zero())).collect(),
            }),
            (System::Rotation { .. }, Point::Turn(t), ClosedSet::Circle(CircleSet::Points(ps))) => {
                // prod_i (z - w_i), normalized at x
                let mut f: BTreeMap<i64, C64> = [(0, C64::new(1.0, 0.0))].into();
                for w in ps {
                    let w = unit_from_turns(*w);
                    let mut g = BTreeMap::new();
                    for (k, c) in &f {
                        *g.entry(k + 1).or_insert(C64::new(0.0, 0.0)) += c;
                        *g.entry(*k).or_insert(C64::new(0.0, 0.0)) -= c * w;
                    }
                    f = g;
                }
                let z = unit_from_turns(*t);
                let val: C64 = f.iter().map(|(k, c)| c * z.powi(*k as i32)).sum();
                f.into_iter()
                    .map(|(k, c)| S::from_c64(c / val).map(|s| (k, s)))
                    .collect::<Option<BTreeMap<_, _>>>()
                    .map(|m| FunctionValue::Trig(m).normalized())
                    .ok_or_else(|| Error::Unsupported("rotation functions need float mode".into()))
            }
            (System::Union(parts), Point::In(c, p), ClosedSet::Union(sets)) => {
                let mut v: Vec<Self> = parts.iter().map(Self::zero).collect();
                v[*c] = Self::bump(&parts[*c], p, &sets[*c])?;
                Ok(FunctionValue::Union(v))
            }
            _ => unsupported("no bump function for this configuration"),
        }
    }

    /// Drops exceptional shift values equal to the value at infinity and zero Fourier coefficients.
    pub fn normalized(self) -> Self {
        match self {
            FunctionValue::Shift { inf, exceptions } => {
                let exceptions = exceptions.into_iter().filter(|(_, v)| *v != inf).collect();
                FunctionValue::Shift { inf, exceptions }
            }
            FunctionValue::Trig(m) => FunctionValue::Trig(m.into_iter().filter(|(_, v)| !v.is_zero()).collect()),
            FunctionValue::Union(v) => FunctionValue::Union(v.into_iter().map(Self::normalized).collect()),
            f => f,
        }
    }

    pub fn fits(&self, sys: &System) -> bool {
        match (self, sys) {
            (FunctionValue::Finite(v), System::Finite { sigma }) => v.len() == sigma.len(),
            (FunctionValue::Shift { .. }, System::Shift) => true,
            (FunctionValue::Trig(_), System::Rotation { .. }) => true,
            (FunctionValue::Union(v), System::Union(parts)) => {
                v.len() == parts.len() && v.iter().zip(parts).all(|(f, p)| f.fits(p))
            }
            _ => false,
        }
    }

    pub fn check(&self, sys: &System) -> Result<()> {
        if self.fits(sys) {
            Ok(())
        } else {
            mismatch(format!("function does not fit a {} system", sys.kind()))
        }
    }

    fn zip(&self, other: &Self, op: &dyn Fn(&S, &S) -> S, conv: bool) -> Result<Self> {
        Ok(match (self, other) {
            (FunctionValue::Finite(a), FunctionValue::Finite(b)) if a.len() == b.len() => {
                FunctionValue::Finite(a.iter().zip(b).map(|(x, y)| op(x, y)).collect())
            }
            (FunctionValue::Shift { inf: ia, exceptions: ea }, FunctionValue::Shift { inf: ib, exceptions: eb }) => {
                FunctionValue::Shift { inf: op(ia, ib), exceptions: zip_maps(ea, eb, ia, ib, op) }.normalized()
            }
            (FunctionValue::Trig(a), FunctionValue::Trig(b)) => {
                if conv {
                    let mut out: BTreeMap<i64, S> = BTreeMap::new();
                    for (j, x) in a {
                        for (k, y) in b {
                            let e = out.entry(j + k).or_insert_with(S::zero);
                            *e = e.clone() + op(x, y);
                        }
                    }
                    FunctionValue::Trig(out).normalized()
                } else {
                    let z = S::zero();
                    FunctionValue::Trig(zip_maps(a, b, &z, &z, op)).normalized()
                }
            }
            (FunctionValue::Union(a), FunctionValue::Union(b)) if a.len() == b.len() => FunctionValue::Union(
                a.iter().zip(b).map(|(x, y)| x.zip(y, op, conv)).collect::<Result<_>>()?,
            ),
            _ => return mismatch("functions on different systems"),
        })
    }

    fn map(&self, op: &dyn Fn(&S) -> S) -> Self {
        match self {
            FunctionValue::Finite(v) => FunctionValue::Finite(v.iter().map(op).collect()),
            FunctionValue::Shift { inf, exceptions } => FunctionValue::Shift {
                inf: op(inf),
                exceptions: exceptions.iter().map(|(k, v)| (*k, op(v))).collect(),
            }
            .normalized(),
            FunctionValue::Trig(m) => FunctionValue::Trig(m.iter().map(|(k, v)| (*k, op(v))).collect()).normalized(),
            FunctionValue::Union(v) => FunctionValue::Union(v.iter().map(|f| f.map(op)).collect()),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, &|x, y| x.clone() + y.clone(), false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, &|x, y| x.clone() - y.clone(), false)
    }

    /// Pointwise product; Fourier convolution on the circle.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, &|x, y| x.clone() * y.clone(), true)
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(&|x| c.clone() * x.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(&|x| -x.clone())
    }

    /// Pointwise complex conjugate.
    pub fn conj(&self) -> Self {
        match self {
            FunctionValue::Trig(m) => FunctionValue::Trig(m.iter().map(|(k, v)| (-k, v.conj())).collect()),
            FunctionValue::Union(v) => FunctionValue::Union(v.iter().map(Self::conj).collect()),
            _ => self.map(&|x| x.conj()),
        }
    }

    /// `f ∘ sigma^k`.
    pub fn compose_sigma(&self, sys: &System, k: i64) -> Result<Self> {
        self.check(sys)?;
        if k == 0 {
            return Ok(self.clone());
        }
        Ok(match (self, sys) {
            (FunctionValue::Finite(v), System::Finite { .. }) => FunctionValue::Finite(
                (0..v.len())
                    .map(|i| match sys.apply_unchecked(&Point::Finite(i), k) {
                        Point::Finite(j) => v[j].clone(),
                        _ => unreachable!(),
                    })
                    .collect(),
            ),
            (FunctionValue::Shift { inf, exceptions }, System::Shift) => FunctionValue::Shift {
                inf: inf.clone(),
                exceptions: exceptions.iter().map(|(n, v)| (n - k, v.clone())).collect(),
            },
            (FunctionValue::Trig(m), System::Rotation { theta, .. }) => {
                let mut out = BTreeMap::new();
                for (j, c) in m {
                    let phase = S::from_c64(unit_from_turns(theta.frac_mul(j * k)))
                        .ok_or_else(|| Error::Unsupported("rotation phases need float mode".into()))?;
                    out.insert(*j, c.clone() * phase);
                }
                FunctionValue::Trig(out)
            }
            (FunctionValue::Union(v), System::Union(parts)) => FunctionValue::Union(
                v.iter().zip(parts).map(|(f, p)| f.compose_sigma(p, k)).collect::<Result<_>>()?,
            ),
            _ => unreachable!("checked"),
        })
    }

    pub fn eval(&self, sys: &System, x: &Point) -> Result<S> {
        self.check(sys)?;
        sys.check_point(x)?;
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: &Point) -> S {
        match (self, x) {
            (FunctionValue::Finite(v), Point::Finite(i)) => v[*i].clone(),
            (FunctionValue::Shift { inf, exceptions }, Point::Int(n)) => exceptions.get(n).unwrap_or(inf).clone(),
            (FunctionValue::Shift { inf, .. }, Point::Inf) => inf.clone(),
            (FunctionValue::Trig(m), Point::Turn(t)) => {
                let mut acc = S::zero();
                for (k, c) in m {
                    let phase = unit_from_turns((*k as f64 * t).rem_euclid(1.0));
                    // Exact mode never reaches here with nonconstant coefficients.
                    let ph = S::from_c64(phase).unwrap_or_else(|| if *k == 0 { S::one() } else { S::zero() });
                    acc = acc + c.clone() * ph;
                }
                acc
            }
            (FunctionValue::Union(v), Point::In(c, p)) => v[*c].eval_unchecked(p),
            _ => unreachable!("checked"),
        }
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        match self {
            FunctionValue::Finite(v) => v.iter().all(|x| x.is_negligible(tol)),
            FunctionValue::Shift { inf, exceptions } => {
                inf.is_negligible(tol) && exceptions.values().all(|x| x.is_negligible(tol))
            }
            FunctionValue::Trig(m) => m.values().all(|x| x.is_negligible(tol)),
            FunctionValue::Union(v) => v.iter().all(|f| f.is_zero(tol)),
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).map(|d| d.is_zero(tol)).unwrap_or(false)
    }

    /// The coefficient norm: exact sup on finite and shift models, Wiener norm on the circle.
    pub fn algnorm(&self) -> f64 {
        match self {
            FunctionValue::Finite(v) => v.iter().map(S::abs).fold(0.0, f64::max),
            FunctionValue::Shift { inf, exceptions } => exceptions.values().map(S::abs).fold(inf.abs(), f64::max),
            FunctionValue::Trig(m) => m.values().map(S::abs).sum(),
            FunctionValue::Union(v) => v.iter().map(Self::algnorm).fold(0.0, f64::max),
        }
    }

    /// Lower and upper bounds for the sup norm.
    ///
    /// On the circle the lower bound is the maximum over `grid` equispaced
    /// points (default `8 * max|k| + 16`) and the upper bound the Wiener norm.
    pub fn supnorm_bounds(&self, grid: Option<usize>) -> (f64, f64) {
        match self {
            FunctionValue::Trig(m) => {
                let maxf = m.keys().map(|k| k.unsigned_abs() as usize).max().unwrap_or(0);
                let g = grid.unwrap_or(8 * maxf + 16).max(1);
                let coeffs: Vec<(i64, C64)> = m.iter().map(|(k, c)| (*k, c.to_c64())).collect();
                let lower = (0..g)
                    .map(|i| {
                        let t = i as f64 / g as f64;
                        coeffs
                            .iter()
                            .map(|(k, c)| c * unit_from_turns((*k as f64 * t).rem_euclid(1.0)))
                            .sum::<C64>()
                            .norm()
                    })
                    .fold(0.0, f64::max);
                (lower, self.algnorm())
            }
            FunctionValue::Union(v) => v
                .iter()
                .map(|f| f.supnorm_bounds(grid))
                .fold((0.0, 0.0), |(l, u), (a, b)| (f64::max(l, a), f64::max(u, b))),
            _ => {
                let s = self.algnorm();
                (s, s)
            }
        }
    }

    /// Common zeros, as a closed set.
    pub fn zero_set(&self, sys: &System, tol: f64) -> Result<ClosedSet> {
        self.check(sys)?;
        Ok(match (self, sys) {
            (FunctionValue::Finite(v), _) => {
                ClosedSet::Finite((0..v.len()).filter(|i| v[*i].is_negligible(tol)).collect())
            }
            (FunctionValue::Shift { inf, exceptions }, _) => {
                if inf.is_negligible(tol) {
                    ClosedSet::Shift(ShiftSet::all_but(
                        exceptions.iter().filter(|(_, v)| !v.is_negligible(tol)).map(|(k, _)| *k),
                    ))
                } else {
                    ClosedSet::Shift(ShiftSet::finite(
                        exceptions.iter().filter(|(_, v)| v.is_negligible(tol)).map(|(k, _)| *k),
                        false,
                    ))
                }
            }
            (FunctionValue::Trig(m), _) => {
                if m.values().all(|c| c.is_negligible(tol)) {
                    ClosedSet::Circle(CircleSet::Whole)
                } else {
                    let lo = *m.keys().next().unwrap();
                    let hi = *m.keys().next_back().unwrap();
                    let mut coeffs = vec![C64::new(0.0, 0.0); (hi - lo + 1) as usize];
                    for (k, c) in m {
                        coeffs[(k - lo) as usize] = c.to_c64();
                    }
                    ClosedSet::Circle(CircleSet::points(
                        poly::unit_circle_roots(&coeffs).into_iter().map(turns_of),
                    ))
                }
            }
            (FunctionValue::Union(v), System::Union(parts)) => {
                ClosedSet::Union(v.iter().zip(parts).map(|(f, p)| f.zero_set(p, tol)).collect::<Result<_>>()?)
            }
            _ => unreachable!("checked"),
        })
    }

    /// Whether `f` vanishes on the closed set `s`.
    pub fn vanishes_on(&self, sys: &System, s: &ClosedSet, tol: f64) -> Result<bool> {
        self.check(sys)?;
        s.validate(sys)?;
        Ok(match (self, s) {
            (FunctionValue::Finite(v), ClosedSet::Finite(set)) => set.iter().all(|i| v[*i].is_negligible(tol)),
            (FunctionValue::Shift { inf, exceptions }, ClosedSet::Shift(set)) => {
                if set.cofinite {
                    inf.is_negligible(tol)
                        && exceptions.iter().all(|(k, v)| !set.contains_int(*k) || v.is_negligible(tol))
                } else {
                    (!set.inf || inf.is_negligible(tol))
                        && set.ints.iter().all(|n| exceptions.get(n).unwrap_or(inf).is_negligible(tol))
                }
            }
            (FunctionValue::Trig(m), ClosedSet::Circle(CircleSet::Whole)) => m.values().all(|c| c.is_negligible(tol)),
            (FunctionValue::Trig(_), ClosedSet::Circle(CircleSet::Points(ps))) => {
                ps.iter().all(|t| self.eval_unchecked(&Point::Turn(*t)).is_negligible(tol))
            }
            (FunctionValue::Union(v), ClosedSet::Union(sets)) => {
                let System::Union(parts) = sys else { unreachable!() };
                for ((f, set), p) in v.iter().zip(sets).zip(parts) {
                    if !f.vanishes_on(p, set, tol)? {
                        return Ok(false);
                    }
                }
                true
            }
            _ => unreachable!("checked"),
        })
    }

    /// A projection of `C(X)` onto the functions vanishing on `s`.
    ///
    /// Finite model: zero the entries on `s`. Shift: subtract the value at
    /// infinity when `s` contains it, then zero the integers of `s`. Circle:
    /// only `s` empty or whole.
    pub fn kill_on(&self, sys: &System, s: &ClosedSet) -> Result<Self> {
        self.check(sys)?;
        s.validate(sys)?;
        Ok(match (self, s) {
            (FunctionValue::Finite(v), ClosedSet::Finite(set)) => FunctionValue::Finite(
                v.iter()
                    .enumerate()
                    .map(|(i, x)| if set.contains(&i) { S::zero() } else { x.clone() })
                    .collect(),
            ),
            (FunctionValue::Shift { inf, exceptions }, ClosedSet::Shift(set)) => {
                if set.cofinite {
                    FunctionValue::Shift {
                        inf: S::zero(),
                        exceptions: set.ints.iter().map(|n| (*n, exceptions.get(n).unwrap_or(inf).clone())).collect(),
                    }
                    .normalized()
                } else {
                    let base = if set.inf { inf.clone() } else { S::zero() };
                    let mut ex: BTreeMap<i64, S> =
                        exceptions.iter().map(|(n, v)| (*n, v.clone() - base.clone())).collect();
                    for n in &set.ints {
                        ex.insert(*n, S::zero());
                    }
                    FunctionValue::Shift { inf: inf.clone() - base, exceptions: ex }.normalized()
                }
            }
            (FunctionValue::Trig(_), ClosedSet::Circle(c)) => match c {
                CircleSet::Whole => FunctionValue::Trig(BTreeMap::new()),
                CircleSet::Points(ps) if ps.is_empty() => self.clone(),
                CircleSet::Points(_) => return unsupported("projection onto k(S) for finite S on the circle"),
            },
            (FunctionValue::Union(v), ClosedSet::Union(sets)) => {
                let System::Union(parts) = sys else { unreachable!() };
                FunctionValue::Union(
                    v.iter().zip(sets).zip(parts).map(|((f, set), p)| f.kill_on(p, set)).collect::<Result<_>>()?,
                )
            }
            _ => unreachable!("checked"),
        })
    }

    /// Literal syntax accepted by the element parser.
    pub fn render(&self) -> String {
        let mut out = String::new();
        match self {
            FunctionValue::Finite(v) => {
                out.push_str("f{");
                let nz: Vec<usize> = (0..v.len()).filter(|i| !v[*i].is_zero()).collect();
                let shown = if nz.is_empty() { vec![0] } else { nz };
                for (j, i) in shown.iter().enumerate() {
                    if j > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{i}:{}", v[*i].render());
                }
                out.push('}');
            }
            FunctionValue::Shift { inf, exceptions } => {
                let _ = write!(out, "sh{{inf:{}", inf.render());
                for (k, v) in exceptions {
                    let _ = write!(out, ",{k}:{}", v.render());
                }
                out.push('}');
            }
            FunctionValue::Trig(m) => {
                out.push_str("tp{");
                if m.is_empty() {
                    out.push_str("0:0");
                }
                for (j, (k, v)) in m.iter().enumerate() {
                    if j > 0 {
                        out.push(',');
                    }
                    let _ = write!(out, "{k}:{}", v.render());
                }
                out.push('}');
            }
            FunctionValue::Union(v) => {
                out.push_str("u{");
                for (j, f) in v.iter().enumerate() {
                    if j > 0 {
                        out.push_str("; ");
                    }
                    out.push_str(&f.render());
                }
                out.push('}');
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::Theta;
    use crate::scalar::{Exact, Float};
    use num_traits::One;

    fn e(n: i64) -> Exact {
        Exact::from_i64(n)
    }

    #[test]
    fn finite_pointwise() {
        let f = FunctionValue::Finite(vec![e(1), e(2)]);
        let g = FunctionValue::Finite(vec![e(3), e(4)]);
        assert_eq!(f.mul(&g).unwrap(), FunctionValue::Finite(vec![e(3), e(8)]));
    }

    #[test]
    fn trig_conjugate() {
        let f: FunctionValue<Float> = FunctionValue::Trig([(1, Float::one())].into());
        assert_eq!(f.conj(), FunctionValue::Trig([(-1, Float::one())].into()));
    }

    #[test]
    fn shift_idempotent() {
        let f = FunctionValue::Shift { inf: e(1), exceptions: [(0, e(0))].into() };
        assert_eq!(f.mul(&f).unwrap(), f);
    }

    #[test]
    fn compose_on_cycle() {
        let s = System::cycle(3);
        let f = FunctionValue::Finite(vec![e(10), e(20), e(30)]);
        assert_eq!(f.compose_sigma(&s, 1).unwrap(), FunctionValue::Finite(vec![e(20), e(30), e(10)]));
    }

    #[test]
    fn compose_on_rotation() {
        let s = System::golden_rotation();
        let f: FunctionValue<Float> = FunctionValue::Trig([(1, Float::one())].into());
        let g = f.compose_sigma(&s, 1).unwrap();
        let FunctionValue::Trig(m) = g else { panic!() };
        let want = unit_from_turns(Theta::GOLDEN.value());
        assert!((m[&1] - want).norm() < 1e-15);
    }

    #[test]
    fn sup_bounds() {
        let f = FunctionValue::Finite(vec![Float::new(1.0, 0.0), Float::new(-2.0, 0.0), Float::new(0.0, 3.0)]);
        assert_eq!(f.supnorm_bounds(None), (3.0, 3.0));
        let g: FunctionValue<Float> = FunctionValue::Trig([(1, Float::one()), (-1, Float::one())].into());
        let (lo, hi) = g.supnorm_bounds(Some(64));
        assert_eq!(hi, 2.0);
        assert!(lo >= 1.99);
    }

    #[test]
    fn zero_sets() {
        let s = System::cycle(3);
        let f = FunctionValue::Finite(vec![e(0), e(1), e(0)]);
        assert_eq!(f.zero_set(&s, 0.0).unwrap(), ClosedSet::Finite([0, 2].into()));
        let r = System::golden_rotation();
        let g: FunctionValue<Float> = FunctionValue::Trig([(0, -Float::one()), (2, Float::one())].into());
        let z = g.zero_set(&r, 1e-9).unwrap();
        assert_eq!(z, ClosedSet::Circle(CircleSet::points([0.0, 0.5])));
    }

    #[test]
    fn shift_kill_is_projection() {
        let s = System::Shift;
        let f = FunctionValue::Shift { inf: e(2), exceptions: [(0, e(5)), (3, e(1))].into() };
        let set = ClosedSet::Shift(ShiftSet::finite([3], true));
        let g = f.kill_on(&s, &set).unwrap();
        assert!(g.vanishes_on(&s, &set, 0.0).unwrap());
        assert_eq!(g.kill_on(&s, &set).unwrap(), g);
        assert_eq!(g.eval(&s, &Point::Int(0)).unwrap(), e(3));
    }

    #[test]
    fn bump_at_infinity_avoids_finite_set() {
        let s = System::Shift;
        let avoid = ClosedSet::Shift(ShiftSet::finite([1, 2], false));
        let f: FunctionValue<Exact> = FunctionValue::bump(&s, &Point::Inf, &avoid).unwrap();
        assert!(f.vanishes_on(&s, &avoid, 0.0).unwrap());
        assert_eq!(f.eval(&s, &Point::Inf).unwrap(), e(1));
    }
}
