//! Compact dynamical systems at desk scale.
//!
//! Four models are supported: a permutation of a finite set, the shift
//! `n -> n+1` on the one-point compactification `Z ∪ {∞}`, a rotation of the
//! circle, and disjoint unions of these. Rotation points are stored in turns.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Two rotation points closer than this (in turns) are the same point.
pub const TURN_TOL: f64 = 1e-9;

/// How far `same_orbit` searches for a connecting power on an irrational rotation.
pub const ORBIT_SEARCH: i64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Theta {
    /// `(p + q*sqrt(r)) / d`
    Surd { p: i64, q: i64, r: i64, d: i64 },
    Decimal(f64),
}

impl Theta {
    /// `(sqrt(5) - 1) / 2`
    pub const GOLDEN: Theta = Theta::Surd { p: -1, q: 1, r: 5, d: 2 };

    pub fn value(&self) -> f64 {
        match *self {
            Theta::Surd { p, q, r, d } => (p as f64 + q as f64 * (r as f64).sqrt()) / d as f64,
            Theta::Decimal(t) => t,
        }
    }

    /// Reduced `(num, den)` with `0 <= num < den` when the angle is structurally rational.
    pub fn rational(&self) -> Option<(i64, i64)> {
        match *self {
            Theta::Surd { p, q, r, d } => {
                let num = if q == 0 {
                    p
                } else {
                    let s = (r as u64).isqrt() as i64;
                    if s * s != r {
                        return None;
                    }
                    p + q * s
                };
                let (mut num, mut den) = (num, d);
                if den < 0 {
                    num = -num;
                    den = -den;
                }
                let g = num.gcd(&den).max(1);
                let (num, den) = (num / g, den / g);
                Some((num.rem_euclid(den), den))
            }
            Theta::Decimal(_) => None,
        }
    }

    /// Fractional part of `n * theta`, in `[0, 1)`.
    ///
    /// Surds are evaluated as `m + (N - m^2)/(sqrt(N) + m)` with `m = isqrt(N)`,
    /// which keeps full double precision for large `n`.
    pub fn frac_mul(&self, n: i64) -> f64 {
        if n == 0 {
            return 0.0;
        }
        let out = match *self {
            Theta::Surd { p, q, r, d } => {
                if let Some((a, b)) = self.rational() {
                    return (n as i128 * a as i128).rem_euclid(b as i128) as f64 / b as f64;
                }
                let nq = n as i128 * q as i128;
                let big = (nq * nq)
                    .checked_mul(r as i128)
                    .filter(|v| *v < (1i128 << 100));
                match big {
                    Some(big) => {
                        let big = big as u128;
                        let m = big.isqrt();
                        let rho = (big - m * m) as f64 / ((big as f64).sqrt() + m as f64);
                        let s = nq.signum();
                        let mut a = n as i128 * p as i128 + s * m as i128;
                        let mut sign = s as f64;
                        let mut dd = d as i128;
                        if dd < 0 {
                            a = -a;
                            sign = -sign;
                            dd = -dd;
                        }
                        let rem = a.rem_euclid(dd);
                        ((rem as f64 + sign * rho) / dd as f64).rem_euclid(1.0)
                    }
                    None => (n as f64 * self.value()).rem_euclid(1.0),
                }
            }
            Theta::Decimal(t) => (n as f64 * t).rem_euclid(1.0),
        };
        if out >= 1.0 {
            0.0
        } else {
            out
        }
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theta::Surd { p, q, r, d } => write!(f, "surd({p},{q},{r},{d})"),
            Theta::Decimal(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum System {
    Finite { sigma: Vec<usize> },
    Shift,
    Rotation { theta: Theta, irrational: bool },
    Union(Vec<System>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    Finite(usize),
    Int(i64),
    Inf,
    /// A point of the circle, in turns.
    Turn(f64),
    /// A point of the given component of a disjoint union.
    In(usize, Box<Point>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Period {
    Periodic(u64),
    Aperiodic,
}

impl Period {
    pub fn get(self) -> Option<u64> {
        match self {
            Period::Periodic(p) => Some(p),
            Period::Aperiodic => None,
        }
    }
}

impl fmt::Display for Period {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Period::Periodic(p) => write!(f, "{p}"),
            Period::Aperiodic => write!(f, "aperiodic"),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(i) => write!(f, "x{i}"),
            Point::Int(n) => write!(f, "s{n}"),
            Point::Inf => write!(f, "inf"),
            Point::Turn(t) => write!(f, "r{}", crate::scalar::fmt_real(*t)),
            Point::In(c, p) => write!(f, "c{c}.{p}"),
        }
    }
}

pub(crate) fn turn_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

fn norm_turn(t: f64) -> f64 {
    let r = t.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

impl System {
    pub fn finite(sigma: Vec<usize>) -> Result<System> {
        let sys = System::Finite { sigma };
        sys.validate()?;
        Ok(sys)
    }

    pub fn cycle(n: usize) -> System {
        System::Finite { sigma: (0..n).map(|i| (i + 1) % n).collect() }
    }

    pub fn rotation(theta: Theta, irrational: bool) -> Result<System> {
        let sys = System::Rotation { theta, irrational };
        sys.validate()?;
        Ok(sys)
    }

    pub fn golden_rotation() -> System {
        System::Rotation { theta: Theta::GOLDEN, irrational: true }
    }

    pub fn union(parts: Vec<System>) -> Result<System> {
        let sys = System::Union(parts);
        sys.validate()?;
        Ok(sys)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            System::Finite { sigma } => {
                if sigma.is_empty() {
                    return Err(Error::InvalidSystem("finite system needs at least one point".into()));
                }
                let mut seen = vec![false; sigma.len()];
                for &s in sigma {
                    if s >= sigma.len() || seen[s] {
                        return Err(Error::InvalidSystem(format!("sigma {sigma:?} is not a permutation")));
                    }
                    seen[s] = true;
                }
                Ok(())
            }
            System::Shift => Ok(()),
            System::Rotation { theta, irrational } => {
                if let Theta::Surd { d, r, .. } = theta {
                    if *d == 0 || *r < 0 {
                        return Err(Error::InvalidSystem(format!("malformed surd {theta}")));
                    }
                }
                let t = theta.value();
                if !(t > 0.0 && t < 1.0) {
                    return Err(Error::InvalidSystem(format!("theta {t} outside (0,1)")));
                }
                match (theta.rational(), irrational, theta) {
                    (Some(_), true, _) => Err(Error::InvalidSystem(format!(
                        "theta {theta} is rational but declared irrational"
                    ))),
                    (None, false, Theta::Decimal(_)) => Err(Error::InvalidSystem(
                        "a decimal theta must be declared irrational".into(),
                    )),
                    (None, false, Theta::Surd { .. }) => Err(Error::InvalidSystem(format!(
                        "theta {theta} is irrational but not declared so"
                    ))),
                    _ => Ok(()),
                }
            }
            System::Union(parts) => {
                if parts.is_empty() {
                    return Err(Error::InvalidSystem("empty disjoint union".into()));
                }
                parts.iter().try_for_each(System::validate)
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            System::Finite { .. } => "finite",
            System::Shift => "shift",
            System::Rotation { .. } => "rotation",
            System::Union(_) => "union",
        }
    }

    pub fn components(&self) -> &[System] {
        match self {
            System::Union(parts) => parts,
            _ => std::slice::from_ref(self),
        }
    }

    pub fn check_point(&self, x: &Point) -> Result<()> {
        let bad = || Err(Error::InvalidPoint(format!("{x} is not a point of a {} system", self.kind())));
        match (self, x) {
            (System::Finite { sigma }, Point::Finite(i)) if *i < sigma.len() => Ok(()),
            (System::Shift, Point::Int(_) | Point::Inf) => Ok(()),
            (System::Rotation { .. }, Point::Turn(t)) if t.is_finite() => Ok(()),
            (System::Union(parts), Point::In(c, p)) if *c < parts.len() => parts[*c].check_point(p),
            _ => bad(),
        }
    }

    /// `sigma^k(x)`.
    pub fn apply_sigma(&self, x: &Point, k: i64) -> Result<Point> {
        self.check_point(x)?;
        Ok(self.apply_unchecked(x, k))
    }

    pub(crate) fn apply_unchecked(&self, x: &Point, k: i64) -> Point {
        match (self, x) {
            (System::Finite { sigma }, Point::Finite(i)) => Point::Finite(finite_power(sigma, *i, k)),
            (System::Shift, Point::Int(n)) => Point::Int(n + k),
            (System::Shift, Point::Inf) => Point::Inf,
            (System::Rotation { theta, .. }, Point::Turn(t)) => Point::Turn(norm_turn(t + theta.frac_mul(k))),
            (System::Union(parts), Point::In(c, p)) => Point::In(*c, Box::new(parts[*c].apply_unchecked(p, k))),
            _ => unreachable!("point checked against system"),
        }
    }

    pub fn period(&self, x: &Point) -> Result<Period> {
        self.check_point(x)?;
        Ok(match (self, x) {
            (System::Finite { sigma }, Point::Finite(i)) => {
                let mut p = 1;
                let mut j = sigma[*i];
                while j != *i {
                    j = sigma[j];
                    p += 1;
                }
                Period::Periodic(p)
            }
            (System::Shift, Point::Int(_)) => Period::Aperiodic,
            (System::Shift, Point::Inf) => Period::Periodic(1),
            (System::Rotation { theta, irrational }, Point::Turn(_)) => match (irrational, theta.rational()) {
                (false, Some((_, den))) => Period::Periodic(den as u64),
                _ => Period::Aperiodic,
            },
            (System::Union(parts), Point::In(c, p)) => parts[*c].period(p)?,
            _ => unreachable!(),
        })
    }

    /// The points `x, sigma(x), ..., sigma^{p-1}(x)` of a periodic orbit.
    pub fn orbit(&self, x: &Point) -> Result<Vec<Point>> {
        match self.period(x)? {
            Period::Periodic(p) => Ok((0..p as i64).map(|j| self.apply_unchecked(x, j)).collect()),
            Period::Aperiodic => Err(Error::Precondition(format!("{x} is aperiodic"))),
        }
    }

    /// A canonical point of the orbit of `x`, when one exists.
    ///
    /// Irrational rotations have no canonical choice and return `x` itself.
    pub fn orbit_rep(&self, x: &Point) -> Result<Point> {
        self.check_point(x)?;
        Ok(match (self, x) {
            (System::Finite { sigma }, Point::Finite(i)) => {
                let mut best = *i;
                let mut j = sigma[*i];
                while j != *i {
                    best = best.min(j);
                    j = sigma[j];
                }
                Point::Finite(best)
            }
            (System::Shift, Point::Int(_)) => Point::Int(0),
            (System::Shift, Point::Inf) => Point::Inf,
            (System::Rotation { theta, irrational }, Point::Turn(t)) => match (irrational, theta.rational()) {
                (false, Some((_, den))) => {
                    let scaled = norm_turn(t * den as f64);
                    let scaled = if scaled > 1.0 - TURN_TOL * den as f64 { 0.0 } else { scaled };
                    Point::Turn(scaled / den as f64)
                }
                _ => Point::Turn(norm_turn(*t)),
            },
            (System::Union(parts), Point::In(c, p)) => Point::In(*c, Box::new(parts[*c].orbit_rep(p)?)),
            _ => unreachable!(),
        })
    }

    pub fn same_point(&self, x: &Point, y: &Point) -> bool {
        match (x, y) {
            (Point::Turn(a), Point::Turn(b)) => turn_dist(*a, *b) <= TURN_TOL,
            (Point::In(c, p), Point::In(d, q)) => {
                c == d && self.components().get(*c).is_some_and(|s| s.same_point(p, q))
            }
            _ => x == y,
        }
    }

    pub fn same_orbit(&self, x: &Point, y: &Point) -> Result<bool> {
        self.check_point(x)?;
        self.check_point(y)?;
        Ok(match (self, x, y) {
            (System::Rotation { theta, irrational: true }, Point::Turn(a), Point::Turn(b)) => {
                (-ORBIT_SEARCH..=ORBIT_SEARCH).any(|k| turn_dist(a + theta.frac_mul(k), *b) <= TURN_TOL)
            }
            (System::Union(parts), Point::In(c, p), Point::In(d, q)) => c == d && parts[*c].same_orbit(p, q)?,
            _ => self.same_point(&self.orbit_rep(x)?, &self.orbit_rep(y)?),
        })
    }

    pub fn orbit_closure(&self, x: &Point) -> Result<ClosedSet> {
        self.check_point(x)?;
        Ok(match (self, x) {
            (System::Finite { .. }, _) => ClosedSet::Finite(
                self.orbit(x)?.into_iter().map(|p| match p {
                    Point::Finite(i) => i,
                    _ => unreachable!(),
                }).collect(),
            ),
            (System::Shift, Point::Int(_)) => ClosedSet::whole(self),
            (System::Shift, Point::Inf) => ClosedSet::Shift(ShiftSet::finite([], true)),
            (System::Rotation { .. }, Point::Turn(_)) => match self.period(x)? {
                Period::Aperiodic => ClosedSet::Circle(CircleSet::Whole),
                Period::Periodic(_) => ClosedSet::from_points(self, &self.orbit(x)?)?,
            },
            (System::Union(parts), Point::In(c, p)) => {
                let mut sets: Vec<ClosedSet> = parts.iter().map(ClosedSet::empty).collect();
                sets[*c] = parts[*c].orbit_closure(p)?;
                ClosedSet::Union(sets)
            }
            _ => unreachable!(),
        })
    }

    pub fn is_free(&self) -> bool {
        match self {
            System::Finite { .. } | System::Shift => false,
            System::Rotation { irrational, .. } => *irrational,
            System::Union(parts) => parts.iter().all(System::is_free),
        }
    }

    pub fn is_minimal(&self) -> bool {
        match self {
            System::Finite { sigma } => self
                .period(&Point::Finite(0))
                .map(|p| p == Period::Periodic(sigma.len() as u64))
                .unwrap_or(false),
            System::Shift => false,
            System::Rotation { theta, irrational } => *irrational || theta.rational().is_some_and(|(_, d)| d == 1),
            System::Union(parts) => parts.len() == 1 && parts[0].is_minimal(),
        }
    }

    /// Number of invariant closed subsets, when finite.
    pub fn invariant_set_count(&self) -> Option<u128> {
        match self {
            System::Finite { .. } => {
                let cycles = self.cycles().len() as u32;
                1u128.checked_shl(cycles)
            }
            System::Shift => Some(3),
            System::Rotation { irrational: true, .. } => Some(2),
            System::Rotation { .. } => None,
            System::Union(parts) => parts
                .iter()
                .map(System::invariant_set_count)
                .try_fold(1u128, |acc, c| acc.checked_mul(c?)),
        }
    }

    /// Cycles of a finite system, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        match self {
            System::Finite { sigma } => {
                let mut seen = vec![false; sigma.len()];
                let mut out = Vec::new();
                for start in 0..sigma.len() {
                    if seen[start] {
                        continue;
                    }
                    let mut cyc = vec![start];
                    seen[start] = true;
                    let mut j = sigma[start];
                    while j != start {
                        seen[j] = true;
                        cyc.push(j);
                        j = sigma[j];
                    }
                    out.push(cyc);
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// Some periodic point, preferring the first component that has one.
    pub fn a_periodic_point(&self) -> Option<Point> {
        match self {
            System::Finite { .. } => Some(Point::Finite(0)),
            System::Shift => Some(Point::Inf),
            System::Rotation { irrational: false, .. } => Some(Point::Turn(0.0)),
            System::Rotation { .. } => None,
            System::Union(parts) => parts
                .iter()
                .enumerate()
                .find_map(|(c, s)| s.a_periodic_point().map(|p| Point::In(c, Box::new(p)))),
        }
    }

    /// Some aperiodic point, if the system has one.
    pub fn an_aperiodic_point(&self) -> Option<Point> {
        match self {
            System::Finite { .. } => None,
            System::Shift => Some(Point::Int(0)),
            System::Rotation { irrational: true, .. } => Some(Point::Turn(0.0)),
            System::Rotation { .. } => None,
            System::Union(parts) => parts
                .iter()
                .enumerate()
                .find_map(|(c, s)| s.an_aperiodic_point().map(|p| Point::In(c, Box::new(p)))),
        }
    }
}

fn finite_power(sigma: &[usize], i: usize, k: i64) -> usize {
    let mut orbit = vec![i];
    let mut j = sigma[i];
    while j != i {
        orbit.push(j);
        j = sigma[j];
    }
    orbit[k.rem_euclid(orbit.len() as i64) as usize]
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            System::Finite { sigma } => {
                write!(f, "finite(sigma=[")?;
                for (i, s) in sigma.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, "])")
            }
            System::Shift => write!(f, "shift"),
            System::Rotation { theta, irrational } => write!(f, "rotation(theta={theta}, irrational={irrational})"),
            System::Union(parts) => {
                write!(f, "union(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A closed subset of `Z ∪ {∞}`.
///
/// Either a finite set of integers (plus possibly `∞`), or `∞` together with
/// all integers outside `ints`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftSet {
    pub ints: BTreeSet<i64>,
    pub cofinite: bool,
    pub inf: bool,
}

impl ShiftSet {
    pub fn finite(ints: impl IntoIterator<Item = i64>, inf: bool) -> ShiftSet {
        ShiftSet { ints: ints.into_iter().collect(), cofinite: false, inf }
    }

    pub fn all_but(excluded: impl IntoIterator<Item = i64>) -> ShiftSet {
        ShiftSet { ints: excluded.into_iter().collect(), cofinite: true, inf: true }
    }

    pub fn contains_int(&self, n: i64) -> bool {
        self.cofinite != self.ints.contains(&n)
    }

    fn union(&self, o: &ShiftSet) -> ShiftSet {
        match (self.cofinite, o.cofinite) {
            (false, false) => ShiftSet::finite(self.ints.union(&o.ints).copied(), self.inf || o.inf),
            (true, false) => ShiftSet::all_but(self.ints.difference(&o.ints).copied()),
            (false, true) => ShiftSet::all_but(o.ints.difference(&self.ints).copied()),
            (true, true) => ShiftSet::all_but(self.ints.intersection(&o.ints).copied()),
        }
    }

    fn intersection(&self, o: &ShiftSet) -> ShiftSet {
        let inf = self.inf && o.inf;
        match (self.cofinite, o.cofinite) {
            (false, false) => ShiftSet::finite(self.ints.intersection(&o.ints).copied(), inf),
            (true, false) => ShiftSet::finite(o.ints.difference(&self.ints).copied(), inf),
            (false, true) => ShiftSet::finite(self.ints.difference(&o.ints).copied(), inf),
            (true, true) => ShiftSet::all_but(self.ints.union(&o.ints).copied()),
        }
    }

    fn subset(&self, o: &ShiftSet) -> bool {
        if self.inf && !o.inf {
            return false;
        }
        match (self.cofinite, o.cofinite) {
            (false, false) => self.ints.is_subset(&o.ints),
            (false, true) => self.ints.is_disjoint(&o.ints),
            (true, false) => false,
            (true, true) => o.ints.is_subset(&self.ints),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CircleSet {
    Whole,
    /// Finitely many points, in turns.
    Points(Vec<f64>),
}

impl CircleSet {
    pub fn points(ts: impl IntoIterator<Item = f64>) -> CircleSet {
        let mut out: Vec<f64> = Vec::new();
        for t in ts {
            let t = norm_turn(t);
            if !out.iter().any(|u| turn_dist(*u, t) <= TURN_TOL) {
                out.push(t);
            }
        }
        out.sort_by(f64::total_cmp);
        CircleSet::Points(out)
    }

    fn contains(&self, t: f64) -> bool {
        match self {
            CircleSet::Whole => true,
            CircleSet::Points(ps) => ps.iter().any(|u| turn_dist(*u, t) <= TURN_TOL),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ClosedSet {
    Finite(BTreeSet<usize>),
    Shift(ShiftSet),
    Circle(CircleSet),
    Union(Vec<ClosedSet>),
}

/// An orbit inside an invariant set: either a single orbit given by a point,
/// or (irrational rotations) a whole component that is not split into orbits.
#[derive(Clone, Debug, PartialEq)]
pub enum OrbitPiece {
    Orbit(Point),
    Continuum(ClosedSet),
}

impl ClosedSet {
    pub fn empty(sys: &System) -> ClosedSet {
        match sys {
            System::Finite { .. } => ClosedSet::Finite(BTreeSet::new()),
            System::Shift => ClosedSet::Shift(ShiftSet::finite([], false)),
            System::Rotation { .. } => ClosedSet::Circle(CircleSet::Points(Vec::new())),
            System::Union(parts) => ClosedSet::Union(parts.iter().map(ClosedSet::empty).collect()),
        }
    }

    pub fn whole(sys: &System) -> ClosedSet {
        match sys {
            System::Finite { sigma } => ClosedSet::Finite((0..sigma.len()).collect()),
            System::Shift => ClosedSet::Shift(ShiftSet::all_but([])),
            System::Rotation { .. } => ClosedSet::Circle(CircleSet::Whole),
            System::Union(parts) => ClosedSet::Union(parts.iter().map(ClosedSet::whole).collect()),
        }
    }

    /// The (closed) set of finitely many points.
    pub fn from_points(sys: &System, pts: &[Point]) -> Result<ClosedSet> {
        let mut out = ClosedSet::empty(sys);
        for p in pts {
            sys.check_point(p)?;
            out.insert(p);
        }
        Ok(out)
    }

    fn insert(&mut self, p: &Point) {
        match (self, p) {
            (ClosedSet::Finite(s), Point::Finite(i)) => {
                s.insert(*i);
            }
            (ClosedSet::Shift(s), Point::Inf) => s.inf = true,
            (ClosedSet::Shift(s), Point::Int(n)) => {
                if s.cofinite {
                    s.ints.remove(n);
                } else {
                    s.ints.insert(*n);
                }
            }
            (ClosedSet::Circle(CircleSet::Points(ps)), Point::Turn(t)) => {
                let merged = CircleSet::points(ps.iter().copied().chain([*t]));
                *ps = match merged {
                    CircleSet::Points(v) => v,
                    CircleSet::Whole => unreachable!(),
                };
            }
            (ClosedSet::Circle(CircleSet::Whole), _) => {}
            (ClosedSet::Union(parts), Point::In(c, q)) => parts[*c].insert(q),
            _ => {}
        }
    }

    pub fn validate(&self, sys: &System) -> Result<()> {
        let bad = || Err(Error::Mismatch(format!("closed set does not fit a {} system", sys.kind())));
        match (self, sys) {
            (ClosedSet::Finite(s), System::Finite { sigma }) => {
                if s.iter().all(|i| *i < sigma.len()) {
                    Ok(())
                } else {
                    bad()
                }
            }
            (ClosedSet::Shift(s), System::Shift) => {
                if s.cofinite && !s.inf {
                    Err(Error::Precondition("a cofinite shift set must contain infinity".into()))
                } else {
                    Ok(())
                }
            }
            (ClosedSet::Circle(_), System::Rotation { .. }) => Ok(()),
            (ClosedSet::Union(sets), System::Union(parts)) if sets.len() == parts.len() => {
                sets.iter().zip(parts).try_for_each(|(s, p)| s.validate(p))
            }
            _ => bad(),
        }
    }

    pub fn contains(&self, x: &Point) -> bool {
        match (self, x) {
            (ClosedSet::Finite(s), Point::Finite(i)) => s.contains(i),
            (ClosedSet::Shift(s), Point::Int(n)) => s.contains_int(*n),
            (ClosedSet::Shift(s), Point::Inf) => s.inf,
            (ClosedSet::Circle(c), Point::Turn(t)) => c.contains(*t),
            (ClosedSet::Union(sets), Point::In(c, p)) => sets.get(*c).is_some_and(|s| s.contains(p)),
            _ => false,
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            ClosedSet::Finite(s) => s.is_empty(),
            ClosedSet::Shift(s) => !s.cofinite && !s.inf && s.ints.is_empty(),
            ClosedSet::Circle(CircleSet::Whole) => false,
            ClosedSet::Circle(CircleSet::Points(ps)) => ps.is_empty(),
            ClosedSet::Union(sets) => sets.iter().all(ClosedSet::is_empty),
        }
    }

    pub fn subset(&self, other: &ClosedSet) -> Result<bool> {
        Ok(match (self, other) {
            (ClosedSet::Finite(a), ClosedSet::Finite(b)) => a.is_subset(b),
            (ClosedSet::Shift(a), ClosedSet::Shift(b)) => a.subset(b),
            (ClosedSet::Circle(a), ClosedSet::Circle(b)) => match (a, b) {
                (_, CircleSet::Whole) => true,
                (CircleSet::Whole, CircleSet::Points(_)) => false,
                (CircleSet::Points(ps), CircleSet::Points(_)) => ps.iter().all(|t| b.contains(*t)),
            },
            (ClosedSet::Union(a), ClosedSet::Union(b)) if a.len() == b.len() => {
                for (s, t) in a.iter().zip(b) {
                    if !s.subset(t)? {
                        return Ok(false);
                    }
                }
                true
            }
            _ => return Err(Error::Mismatch("closed sets of different shapes".into())),
        })
    }

    pub fn set_eq(&self, other: &ClosedSet) -> Result<bool> {
        Ok(self.subset(other)? && other.subset(self)?)
    }

    pub fn union(&self, other: &ClosedSet) -> Result<ClosedSet> {
        Ok(match (self, other) {
            (ClosedSet::Finite(a), ClosedSet::Finite(b)) => ClosedSet::Finite(a.union(b).copied().collect()),
            (ClosedSet::Shift(a), ClosedSet::Shift(b)) => ClosedSet::Shift(a.union(b)),
            (ClosedSet::Circle(a), ClosedSet::Circle(b)) => ClosedSet::Circle(match (a, b) {
                (CircleSet::Whole, _) | (_, CircleSet::Whole) => CircleSet::Whole,
                (CircleSet::Points(p), CircleSet::Points(q)) => CircleSet::points(p.iter().chain(q).copied()),
            }),
            (ClosedSet::Union(a), ClosedSet::Union(b)) if a.len() == b.len() => {
                ClosedSet::Union(a.iter().zip(b).map(|(s, t)| s.union(t)).collect::<Result<_>>()?)
            }
            _ => return Err(Error::Mismatch("closed sets of different shapes".into())),
        })
    }

    pub fn intersection(&self, other: &ClosedSet) -> Result<ClosedSet> {
        Ok(match (self, other) {
            (ClosedSet::Finite(a), ClosedSet::Finite(b)) => ClosedSet::Finite(a.intersection(b).copied().collect()),
            (ClosedSet::Shift(a), ClosedSet::Shift(b)) => ClosedSet::Shift(a.intersection(b)),
            (ClosedSet::Circle(a), ClosedSet::Circle(b)) => ClosedSet::Circle(match (a, b) {
                (CircleSet::Whole, c) | (c, CircleSet::Whole) => c.clone(),
                (CircleSet::Points(p), q @ CircleSet::Points(_)) => {
                    CircleSet::points(p.iter().copied().filter(|t| q.contains(*t)))
                }
            }),
            (ClosedSet::Union(a), ClosedSet::Union(b)) if a.len() == b.len() => {
                ClosedSet::Union(a.iter().zip(b).map(|(s, t)| s.intersection(t)).collect::<Result<_>>()?)
            }
            _ => return Err(Error::Mismatch("closed sets of different shapes".into())),
        })
    }

    /// `{x in S : the whole orbit of x lies in S}`.
    pub fn largest_invariant_subset(&self, sys: &System) -> Result<ClosedSet> {
        self.validate(sys)?;
        Ok(match (self, sys) {
            (ClosedSet::Finite(s), System::Finite { .. }) => ClosedSet::Finite(
                sys.cycles()
                    .into_iter()
                    .filter(|c| c.iter().all(|i| s.contains(i)))
                    .flatten()
                    .collect(),
            ),
            (ClosedSet::Shift(s), System::Shift) => {
                if s.cofinite && s.ints.is_empty() {
                    self.clone()
                } else {
                    ClosedSet::Shift(ShiftSet::finite([], s.inf))
                }
            }
            (ClosedSet::Circle(c), System::Rotation { .. }) => match c {
                CircleSet::Whole => self.clone(),
                CircleSet::Points(ps) => {
                    let mut keep = Vec::new();
                    for &t in ps {
                        if let Period::Periodic(_) = sys.period(&Point::Turn(t))? {
                            if sys.orbit(&Point::Turn(t))?.iter().all(|q| self.contains(q)) {
                                keep.push(t);
                            }
                        }
                    }
                    ClosedSet::Circle(CircleSet::points(keep))
                }
            },
            (ClosedSet::Union(sets), System::Union(parts)) => ClosedSet::Union(
                sets.iter().zip(parts).map(|(s, p)| s.largest_invariant_subset(p)).collect::<Result<_>>()?,
            ),
            _ => unreachable!("validated"),
        })
    }

    pub fn is_invariant(&self, sys: &System) -> Result<bool> {
        self.set_eq(&self.largest_invariant_subset(sys)?)
    }

    /// Splits an invariant set into orbits.
    pub fn orbit_pieces(&self, sys: &System) -> Result<Vec<OrbitPiece>> {
        if !self.is_invariant(sys)? {
            return Err(Error::NotInvariant);
        }
        let mut out = Vec::new();
        match (self, sys) {
            (ClosedSet::Finite(s), System::Finite { .. }) => {
                for c in sys.cycles() {
                    if s.contains(&c[0]) {
                        out.push(OrbitPiece::Orbit(Point::Finite(c[0])));
                    }
                }
            }
            (ClosedSet::Shift(s), System::Shift) => {
                if s.cofinite {
                    out.push(OrbitPiece::Orbit(Point::Int(0)));
                }
                if s.inf {
                    out.push(OrbitPiece::Orbit(Point::Inf));
                }
            }
            (ClosedSet::Circle(c), System::Rotation { irrational, .. }) => match c {
                CircleSet::Whole if *irrational => out.push(OrbitPiece::Continuum(self.clone())),
                CircleSet::Whole => {
                    return Err(Error::Unsupported(
                        "a rational rotation has uncountably many orbits".into(),
                    ))
                }
                CircleSet::Points(ps) => {
                    let mut reps: Vec<Point> = Vec::new();
                    for &t in ps {
                        let r = sys.orbit_rep(&Point::Turn(t))?;
                        if !reps.iter().any(|q| sys.same_point(q, &r)) {
                            reps.push(r);
                        }
                    }
                    out.extend(reps.into_iter().map(OrbitPiece::Orbit));
                }
            },
            (ClosedSet::Union(sets), System::Union(parts)) => {
                for (c, (s, p)) in sets.iter().zip(parts).enumerate() {
                    for piece in s.orbit_pieces(p)? {
                        out.push(match piece {
                            OrbitPiece::Orbit(x) => OrbitPiece::Orbit(Point::In(c, Box::new(x))),
                            OrbitPiece::Continuum(set) => {
                                let mut sets: Vec<ClosedSet> = parts.iter().map(ClosedSet::empty).collect();
                                sets[c] = set;
                                OrbitPiece::Continuum(ClosedSet::Union(sets))
                            }
                        });
                    }
                }
            }
            _ => unreachable!("validated"),
        }
        Ok(out)
    }

    /// All invariant closed sets of a finite system, by subsets of cycles.
    pub fn enumerate_invariant(sys: &System) -> Option<Vec<ClosedSet>> {
        match sys {
            System::Finite { .. } => {
                let cycles = sys.cycles();
                if cycles.len() > 20 {
                    return None;
                }
                Some(
                    (0u32..(1 << cycles.len()))
                        .map(|mask| {
                            ClosedSet::Finite(
                                cycles
                                    .iter()
                                    .enumerate()
                                    .filter(|(i, _)| mask >> i & 1 == 1)
                                    .flat_map(|(_, c)| c.iter().copied())
                                    .collect(),
                            )
                        })
                        .collect(),
                )
            }
            System::Shift => Some(vec![
                ClosedSet::empty(sys),
                ClosedSet::Shift(ShiftSet::finite([], true)),
                ClosedSet::whole(sys),
            ]),
            System::Rotation { irrational: true, .. } => Some(vec![ClosedSet::empty(sys), ClosedSet::whole(sys)]),
            System::Rotation { .. } => None,
            System::Union(parts) => {
                let mut acc: Vec<Vec<ClosedSet>> = vec![Vec::new()];
                for p in parts {
                    let opts = ClosedSet::enumerate_invariant(p)?;
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            opts.iter().map(move |o| {
                                let mut v = prefix.clone();
                                v.push(o.clone());
                                v
                            })
                        })
                        .collect();
                }
                Some(acc.into_iter().map(ClosedSet::Union).collect())
            }
        }
    }
}

impl fmt::Display for ClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: impl Iterator<Item = T>) -> fmt::Result {
            write!(f, "{{")?;
            for (i, it) in items.enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{it}")?;
            }
            write!(f, "}}")
        }
        match self {
            ClosedSet::Finite(s) => list(f, s.iter().map(|i| Point::Finite(*i))),
            ClosedSet::Shift(s) if s.cofinite => {
                if s.ints.is_empty() {
                    write!(f, "all")
                } else {
                    write!(f, "all\\")?;
                    list(f, s.ints.iter().map(|n| Point::Int(*n)))
                }
            }
            ClosedSet::Shift(s) => list(
                f,
                s.ints.iter().map(|n| Point::Int(*n)).chain(s.inf.then_some(Point::Inf)),
            ),
            ClosedSet::Circle(CircleSet::Whole) => write!(f, "all"),
            ClosedSet::Circle(CircleSet::Points(ps)) => list(f, ps.iter().map(|t| Point::Turn(*t))),
            ClosedSet::Union(sets) => {
                write!(f, "u[")?;
                for (i, s) in sets.iter().enumerate() {
                    if i > 0 {
                        write!(f, "; ")?;
                    }
                    write!(f, "{s}")?;
                }
                write!(f, "]")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair_and_fixed() -> System {
        System::finite(vec![1, 0, 2]).unwrap()
    }

    #[test]
    fn finite_cycle_arithmetic() {
        let s = System::cycle(3);
        assert_eq!(s.apply_sigma(&Point::Finite(0), 2).unwrap(), Point::Finite(2));
        assert_eq!(s.apply_sigma(&Point::Finite(0), -1).unwrap(), Point::Finite(2));
        assert_eq!(s.period(&Point::Finite(1)).unwrap(), Period::Periodic(3));
    }

    #[test]
    fn shift_points() {
        let s = System::Shift;
        assert_eq!(s.apply_sigma(&Point::Inf, 5).unwrap(), Point::Inf);
        assert_eq!(s.period(&Point::Int(0)).unwrap(), Period::Aperiodic);
        assert_eq!(s.period(&Point::Inf).unwrap(), Period::Periodic(1));
        assert_eq!(s.orbit_closure(&Point::Int(7)).unwrap(), ClosedSet::whole(&s));
    }

    #[test]
    fn golden_phase_precision() {
        let th = Theta::GOLDEN;
        let v = (5f64.sqrt() - 1.0) / 2.0;
        assert!((th.frac_mul(1) - v).abs() < 1e-15);
        // frac(10^6 * theta) via high-precision reference 618033.98874989484820...
        assert!((th.frac_mul(1_000_000) - 0.988749894848).abs() < 1e-10);
        assert!((th.frac_mul(-1) - (1.0 - v)).abs() < 1e-15);
    }

    #[test]
    fn rational_rotation() {
        let s = System::rotation(Theta::Surd { p: 1, q: 0, r: 0, d: 3 }, false).unwrap();
        assert_eq!(s.period(&Point::Turn(0.1)).unwrap(), Period::Periodic(3));
        assert!(s.same_orbit(&Point::Turn(0.1), &Point::Turn(0.1 + 2.0 / 3.0)).unwrap());
        assert!(!s.same_orbit(&Point::Turn(0.1), &Point::Turn(0.2)).unwrap());
        assert!(System::rotation(Theta::Surd { p: 1, q: 0, r: 0, d: 3 }, true).is_err());
        assert!(System::rotation(Theta::Decimal(0.3), false).is_err());
    }

    #[test]
    fn largest_invariant_examples() {
        let s = pair_and_fixed();
        let set = ClosedSet::Finite([0, 2].into());
        assert_eq!(set.largest_invariant_subset(&s).unwrap(), ClosedSet::Finite([2].into()));
        let sh = ClosedSet::Shift(ShiftSet::finite(0..=5, true));
        assert_eq!(
            sh.largest_invariant_subset(&System::Shift).unwrap(),
            ClosedSet::Shift(ShiftSet::finite([], true))
        );
    }

    #[test]
    fn freeness_and_minimality() {
        let r = System::golden_rotation();
        assert!(r.is_free() && r.is_minimal());
        let c = System::cycle(3);
        assert!(!c.is_free() && c.is_minimal());
        assert!(!System::Shift.is_free() && !System::Shift.is_minimal());
        assert_eq!(pair_and_fixed().invariant_set_count(), Some(4));
        assert_eq!(ClosedSet::enumerate_invariant(&pair_and_fixed()).unwrap().len(), 4);
    }

    #[test]
    fn shift_set_algebra() {
        let a = ShiftSet::all_but([1, 2]);
        let b = ShiftSet::finite([2, 3], false);
        let u = a.union(&b);
        assert_eq!(u, ShiftSet::all_but([1]));
        let i = a.intersection(&b);
        assert_eq!(i, ShiftSet::finite([3], false));
        assert!(b.subset(&ShiftSet::all_but([1])));
        assert!(!b.subset(&a));
    }

    #[test]
    fn orbit_pieces_of_union() {
        let u = System::union(vec![System::Shift, System::cycle(3)]).unwrap();
        let pieces = ClosedSet::whole(&u).orbit_pieces(&u).unwrap();
        assert_eq!(pieces.len(), 3);
    }
}
