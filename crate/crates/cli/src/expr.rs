//! Element expressions and the literals built on them: points, circle points,
//! closed sets, ideal handles and subsets of `X × T`.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := '-' factor | atom ('^' sint)?
//! atom    := scalar | funcLit | 'd' | 'adj' '(' expr ')' | 'E' '(' expr ')' | '(' expr ')'
//! funcLit := 'f{' key ':' cscalar (',' key ':' cscalar)* '}'        finite systems
//!          | 'sh{' skey ':' cscalar (',' skey ':' cscalar)* '}'     the shift, skey := 'inf' | int
//!          | 'tp{' int ':' cscalar (',' int ':' cscalar)* '}'       rotations
//!          | 'u{' part (';' part)* '}'                              unions, one part per component
//! ```

use std::collections::BTreeMap;
use std::marker::PhantomData;
use std::sync::Arc;

use crossprod::algebra::AlgebraElement;
use crossprod::dynsys::ShiftSet;
use crossprod::funcspace::FunctionValue;
use crossprod::reps_ideals::{IdealHandle, Lambda};
use crossprod::transform::{LambdaSet, TorusEntry, TorusSubset};
use crossprod::{ClosedSet, Period, Point, Scalar, System};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::cursor::{Cursor, PResult, ParseError};

/// Largest support radius an expression may build up.
pub const MAX_RADIUS: u64 = 1024;
/// Bound on shift positions, so that moving them along orbits cannot overflow.
pub const MAX_SHIFT_INDEX: i64 = 1_000_000_000_000;
pub const MAX_FREQUENCY: i64 = 1_000_000;
/// Bound on `m` in `root(k/m)` and `p` in `branch(b,p,j)`.
pub const MAX_ROOT_ORDER: i64 = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind<S> {
    Scalar(S),
    Func(FunctionValue<S>),
    Delta,
    Adj(Box<Expr<S>>),
    E(Box<Expr<S>>),
    Neg(Box<Expr<S>>),
    Add(Box<Expr<S>>, Box<Expr<S>>),
    Sub(Box<Expr<S>>, Box<Expr<S>>),
    Mul(Box<Expr<S>>, Box<Expr<S>>),
    Pow(Box<Expr<S>>, i64),
}

/// A syntax tree node with the character offset it starts at.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr<S> {
    pub kind: ExprKind<S>,
    pub pos: usize,
}

pub struct Parser<'a, S> {
    pub cur: Cursor<'a>,
    sys: Arc<System>,
    _s: PhantomData<S>,
}

fn node<S>(kind: ExprKind<S>, pos: usize) -> Expr<S> {
    Expr { kind, pos }
}

/// Pointwise inverse, when the function vanishes nowhere.
fn invert_fn<S: Scalar>(f: &FunctionValue<S>) -> Option<FunctionValue<S>> {
    Some(match f {
        FunctionValue::Finite(v) => FunctionValue::Finite(v.iter().map(|c| c.inverse()).collect::<Option<_>>()?),
        FunctionValue::Shift { inf, exceptions } => FunctionValue::Shift {
            inf: inf.inverse()?,
            exceptions: exceptions.iter().map(|(k, c)| c.inverse().map(|i| (*k, i))).collect::<Option<_>>()?,
        },
        FunctionValue::Trig(m) => {
            let mut it = m.iter().filter(|(_, c)| !c.is_zero());
            let (k, c) = it.next()?;
            if it.next().is_some() {
                return None;
            }
            FunctionValue::Trig([(-*k, c.inverse()?)].into())
        }
        FunctionValue::Union(v) => FunctionValue::Union(v.iter().map(invert_fn).collect::<Option<_>>()?),
    })
}

impl<'a, S: Scalar> Parser<'a, S> {
    pub fn new(text: &'a str, sys: &Arc<System>) -> Self {
        Parser { cur: Cursor::new(text), sys: sys.clone(), _s: PhantomData }
    }

    fn finish(&mut self) -> PResult<()> {
        if self.cur.at_end() {
            Ok(())
        } else {
            self.cur.expect_note("end of input");
            Err(self.cur.syntax_error())
        }
    }

    fn here(&mut self) -> usize {
        self.cur.ws();
        self.cur.pos
    }

    // ---- numbers and scalars ----

    /// `int`, `int/int` or a decimal with optional exponent, without sign.
    fn unsigned_number(&mut self) -> Option<BigRational> {
        self.cur.ws();
        let start = self.cur.pos;
        let Some(int) = self.cur.digits() else {
            self.cur.expect_note("number");
            return None;
        };
        let mut value = BigRational::from_integer(int.parse::<BigInt>().expect("digits"));
        if self.cur.peek() == Some('/') && self.cur.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.cur.bump();
            let den: BigInt = self.cur.digits().expect("checked").parse().expect("digits");
            if den.is_zero() {
                self.cur.pos = start;
                return None;
            }
            return Some(value / BigRational::from_integer(den));
        }
        if self.cur.peek() == Some('.') && self.cur.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.cur.bump();
            let frac = self.cur.digits().expect("checked");
            let scale = BigInt::from(10).pow(frac.len() as u32);
            value += BigRational::new(frac.parse::<BigInt>().expect("digits"), scale);
        }
        if matches!(self.cur.peek(), Some('e' | 'E')) {
            let save = self.cur.pos;
            self.cur.bump();
            let neg = match self.cur.peek() {
                Some('-') => {
                    self.cur.bump();
                    true
                }
                Some('+') => {
                    self.cur.bump();
                    false
                }
                _ => false,
            };
            match self.cur.digits().and_then(|d| d.parse::<u32>().ok()).filter(|e| *e <= 400) {
                Some(e) => {
                    let p = BigRational::from_integer(BigInt::from(10).pow(e));
                    value = if neg { value / p } else { value * p };
                }
                None => self.cur.pos = save,
            }
        }
        Some(value)
    }

    fn to_scalar(&self, re: BigRational, im: BigRational, pos: usize) -> PResult<S> {
        S::from_big_ratio(re, im).ok_or_else(|| self.cur.error_at(pos, "number out of range"))
    }

    /// A real or imaginary literal: `num`, `num i` or `i`. Returns `(value, imaginary)`.
    fn real_or_imag(&mut self) -> PResult<(BigRational, bool)> {
        self.cur.ws();
        if let Some(v) = self.unsigned_number() {
            if self.cur.peek() == Some('i') && !self.cur.peek_at(1).is_some_and(|c| c.is_alphanumeric()) {
                self.cur.bump();
                return Ok((v, true));
            }
            return Ok((v, false));
        }
        if self.cur.eat_str("i") {
            return Ok((BigRational::one(), true));
        }
        Err(self.cur.syntax_error())
    }

    /// A complex literal such as `2`, `-1/2+3i`, `0.25i` or `-i`.
    pub fn cscalar(&mut self) -> PResult<S> {
        let pos = self.here();
        let (mut re, mut im) = (BigRational::zero(), BigRational::zero());
        let mut sign = BigRational::one();
        if self.cur.eat('-') {
            sign = -sign;
        } else {
            self.cur.eat('+');
        }
        loop {
            let (v, imag) = self.real_or_imag()?;
            if imag {
                im += sign.clone() * v;
            } else {
                re += sign.clone() * v;
            }
            self.cur.ws();
            let next_is_part = matches!(self.cur.peek(), Some('+' | '-'))
                && self.cur.peek_at(1).is_some_and(|c| c.is_ascii_digit() || c == 'i');
            if !next_is_part {
                break;
            }
            sign = if self.cur.bump() == Some('-') { -BigRational::one() } else { BigRational::one() };
        }
        self.to_scalar(re, im, pos)
    }

    fn sint(&mut self) -> PResult<i64> {
        let pos = self.here();
        let neg = self.cur.eat('-');
        if !neg {
            self.cur.eat('+');
        }
        let Some(d) = self.cur.digits() else {
            self.cur.expect_note("integer");
            return Err(self.cur.syntax_error());
        };
        let v: i64 = d.parse().map_err(|_| self.cur.error_at(pos, "integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    // ---- points ----

    /// `x3`, `s-2`, `inf`, `r0.25` or `c1.x0`, without validation.
    fn raw_point(&mut self) -> PResult<Point> {
        self.cur.ws();
        if self.cur.eat_str("inf") {
            return Ok(Point::Inf);
        }
        let pos = self.cur.pos;
        let tag = self.cur.peek();
        let bad = |p: &mut Self| {
            p.cur.expect_note("point");
            Err(p.cur.syntax_error())
        };
        match tag {
            Some('x') => {
                self.cur.bump();
                match self.cur.digits() {
                    Some(d) => d.parse().map(Point::Finite).map_err(|_| self.cur.error_at(pos, "index out of range")),
                    None => bad(self),
                }
            }
            Some('s') if self.cur.peek_at(1).is_some_and(|c| c == '-' || c.is_ascii_digit()) => {
                self.cur.bump();
                let neg = self.cur.peek() == Some('-');
                if neg {
                    self.cur.bump();
                }
                match self.cur.digits() {
                    Some(d) => {
                        let v: i64 = d.parse().map_err(|_| self.cur.error_at(pos, "integer out of range"))?;
                        if v > MAX_SHIFT_INDEX {
                            return Err(self.cur.error_at(pos, "shift position out of range"));
                        }
                        Ok(Point::Int(if neg { -v } else { v }))
                    }
                    None => bad(self),
                }
            }
            Some('r') if self.cur.peek_at(1).is_some_and(|c| c.is_ascii_digit()) => {
                self.cur.bump();
                let v = self.unsigned_number().expect("digit follows");
                let t = num_traits::ToPrimitive::to_f64(&v).unwrap_or(f64::NAN);
                if !t.is_finite() {
                    return Err(self.cur.error_at(pos, "turn out of range"));
                }
                Ok(Point::Turn(t.rem_euclid(1.0)))
            }
            Some('c') if self.cur.peek_at(1).is_some_and(|c| c.is_ascii_digit()) => {
                self.cur.bump();
                let c: usize = self.cur.digits().expect("digit follows").parse().map_err(|_| self.cur.error_at(pos, "component out of range"))?;
                if self.cur.peek() != Some('.') {
                    self.cur.expect_note("'.'");
                    return Err(self.cur.syntax_error());
                }
                self.cur.bump();
                if self.cur.peek().is_some_and(char::is_whitespace) {
                    return bad(self);
                }
                let inner = self.raw_point()?;
                Ok(Point::In(c, Box::new(inner)))
            }
            _ => bad(self),
        }
    }

    pub fn point(&mut self) -> PResult<Point> {
        let pos = self.here();
        let p = self.raw_point()?;
        self.sys.check_point(&p).map_err(|e| self.cur.error_at(pos, e.to_string()))?;
        Ok(p)
    }

    // ---- function literals ----

    fn func_lit(&mut self, sys: &System) -> PResult<Option<FunctionValue<S>>> {
        let pos = self.here();
        let mismatch = |p: &Self, lit: &str, want: &str| {
            Err(p.cur.error_at(pos, format!("{lit} literal needs a {want} system, not a {} system", sys.kind())))
        };
        if self.cur.eat_str("f{") {
            let System::Finite { sigma } = sys else {
                return mismatch(self, "f{..}", "finite");
            };
            let mut v = vec![S::zero(); sigma.len()];
            let mut seen = vec![false; sigma.len()];
            loop {
                let kpos = self.here();
                let idx = if self.cur.peek() == Some('x') {
                    match self.raw_point()? {
                        Point::Finite(i) => i,
                        _ => unreachable!("x-points are finite"),
                    }
                } else {
                    match self.cur.digits() {
                        Some(d) => d.parse().map_err(|_| self.cur.error_at(kpos, "index out of range"))?,
                        None => {
                            self.cur.expect_note("point");
                            return Err(self.cur.syntax_error());
                        }
                    }
                };
                if idx >= v.len() {
                    return Err(self.cur.error_at(kpos, format!("point {idx} outside a system of {} points", v.len())));
                }
                if seen[idx] {
                    return Err(self.cur.error_at(kpos, format!("point {idx} given twice")));
                }
                seen[idx] = true;
                self.cur.expect(':')?;
                v[idx] = self.cscalar()?;
                if self.cur.eat('}') {
                    break;
                }
                self.cur.expect(',')?;
            }
            return Ok(Some(FunctionValue::Finite(v)));
        }
        if self.cur.eat_str("sh{") {
            if !matches!(sys, System::Shift) {
                return mismatch(self, "sh{..}", "shift");
            }
            let mut inf = None;
            let mut exceptions = BTreeMap::new();
            loop {
                let kpos = self.here();
                if self.cur.eat_str("inf") {
                    if inf.is_some() {
                        return Err(self.cur.error_at(kpos, "value at inf given twice"));
                    }
                    self.cur.expect(':')?;
                    inf = Some(self.cscalar()?);
                } else {
                    if self.cur.peek() == Some('s') {
                        self.cur.bump();
                    }
                    let k = self.sint()?;
                    if k.abs() > MAX_SHIFT_INDEX {
                        return Err(self.cur.error_at(kpos, "shift position out of range"));
                    }
                    self.cur.expect(':')?;
                    let c = self.cscalar()?;
                    if exceptions.insert(k, c).is_some() {
                        return Err(self.cur.error_at(kpos, format!("value at {k} given twice")));
                    }
                }
                if self.cur.eat('}') {
                    break;
                }
                self.cur.expect(',')?;
            }
            return Ok(Some(FunctionValue::Shift { inf: inf.unwrap_or_else(S::zero), exceptions }.normalized()));
        }
        if self.cur.eat_str("tp{") {
            if !matches!(sys, System::Rotation { .. }) {
                return mismatch(self, "tp{..}", "rotation");
            }
            let mut m = BTreeMap::new();
            loop {
                let kpos = self.here();
                let k = self.sint()?;
                if k.abs() > MAX_FREQUENCY {
                    return Err(self.cur.error_at(kpos, "frequency out of range"));
                }
                self.cur.expect(':')?;
                let c = self.cscalar()?;
                if m.insert(k, c).is_some() {
                    return Err(self.cur.error_at(kpos, format!("frequency {k} given twice")));
                }
                if self.cur.eat('}') {
                    break;
                }
                self.cur.expect(',')?;
            }
            return Ok(Some(FunctionValue::Trig(m).normalized()));
        }
        if self.cur.eat_str("u{") {
            let System::Union(parts) = sys else {
                return mismatch(self, "u{..}", "union");
            };
            let mut out = Vec::with_capacity(parts.len());
            loop {
                let ppos = self.here();
                let Some(part) = parts.get(out.len()) else {
                    return Err(self.cur.error_at(ppos, format!("the union has only {} components", parts.len())));
                };
                let f = match self.func_lit(part)? {
                    Some(f) => f,
                    None => FunctionValue::constant(part, self.cscalar()?),
                };
                out.push(f);
                if self.cur.eat('}') {
                    break;
                }
                self.cur.expect(';')?;
            }
            if out.len() != parts.len() {
                return Err(self.cur.error_at(pos, format!("u{{..}} needs {} components, got {}", parts.len(), out.len())));
            }
            return Ok(Some(FunctionValue::Union(out)));
        }
        Ok(None)
    }

    // ---- expressions ----

    pub fn expr(&mut self) -> PResult<Expr<S>> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.here();
            if self.cur.eat('+') {
                let rhs = self.term()?;
                lhs = node(ExprKind::Add(Box::new(lhs), Box::new(rhs)), pos);
            } else if self.cur.eat('-') {
                let rhs = self.term()?;
                lhs = node(ExprKind::Sub(Box::new(lhs), Box::new(rhs)), pos);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> PResult<Expr<S>> {
        let mut lhs = self.factor()?;
        loop {
            let pos = self.here();
            if !self.cur.eat('*') {
                return Ok(lhs);
            }
            let rhs = self.factor()?;
            lhs = node(ExprKind::Mul(Box::new(lhs), Box::new(rhs)), pos);
        }
    }

    fn factor(&mut self) -> PResult<Expr<S>> {
        let pos = self.here();
        if self.cur.eat('-') {
            let inner = self.factor()?;
            return Ok(node(ExprKind::Neg(Box::new(inner)), pos));
        }
        let base = self.atom()?;
        let ppos = self.here();
        if self.cur.eat('^') {
            let e = self.sint()?;
            return Ok(node(ExprKind::Pow(Box::new(base), e), ppos));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr<S>> {
        let pos = self.here();
        if self.cur.eat_str("adj") {
            self.cur.expect('(')?;
            let inner = self.expr()?;
            self.cur.expect(')')?;
            return Ok(node(ExprKind::Adj(Box::new(inner)), pos));
        }
        if self.cur.eat_str("E") {
            self.cur.expect('(')?;
            let inner = self.expr()?;
            self.cur.expect(')')?;
            return Ok(node(ExprKind::E(Box::new(inner)), pos));
        }
        if self.cur.eat('(') {
            let inner = self.expr()?;
            self.cur.expect(')')?;
            return Ok(inner);
        }
        let sys = self.sys.clone();
        if let Some(f) = self.func_lit(&sys)? {
            return Ok(node(ExprKind::Func(f), pos));
        }
        if self.cur.eat_str("d") {
            return Ok(node(ExprKind::Delta, pos));
        }
        let (v, imag) = self.real_or_imag()?;
        let s = if imag { self.to_scalar(BigRational::zero(), v, pos)? } else { self.to_scalar(v, BigRational::zero(), pos)? };
        Ok(node(ExprKind::Scalar(s), pos))
    }

    pub fn eval(&self, e: &Expr<S>) -> PResult<AlgebraElement<S>> {
        let sys = &self.sys;
        let err = |r: crossprod::Error| self.cur.error_at(e.pos, r.to_string());
        Ok(match &e.kind {
            ExprKind::Scalar(c) => AlgebraElement::function(sys, FunctionValue::constant(sys, c.clone())).map_err(err)?,
            ExprKind::Func(f) => AlgebraElement::function(sys, f.clone()).map_err(err)?,
            ExprKind::Delta => {
                crossprod::algebra::check_mode::<S>(sys).map_err(err)?;
                AlgebraElement::delta(sys, 1)
            }
            ExprKind::Adj(a) => self.eval(a)?.adj(),
            ExprKind::E(a) => self.eval(a)?.e0_elem(),
            ExprKind::Neg(a) => self.eval(a)?.neg(),
            ExprKind::Add(a, b) => self.eval(a)?.add(&self.eval(b)?).map_err(err)?,
            ExprKind::Sub(a, b) => self.eval(a)?.sub(&self.eval(b)?).map_err(err)?,
            ExprKind::Mul(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.check_radius(a.radius() + b.radius(), e.pos)?;
                a.mul(&b).map_err(err)?
            }
            ExprKind::Pow(a, k) => {
                let base = self.eval(a)?;
                if k.unsigned_abs() > 64 {
                    return Err(self.cur.error_at(e.pos, "exponent larger than 64"));
                }
                self.check_radius(base.radius().saturating_mul(k.unsigned_abs()), e.pos)?;
                let base = if *k < 0 { self.invert(&base, e.pos)? } else { base };
                base.pow(k.unsigned_abs() as u32).map_err(err)?
            }
        })
    }

    fn check_radius(&self, r: u64, pos: usize) -> PResult<()> {
        if r > MAX_RADIUS {
            return Err(self.cur.error_at(pos, format!("result would have support radius above {MAX_RADIUS}")));
        }
        Ok(())
    }

    /// Inverse of `f δ^n` with `f` invertible: `(1/f ∘ σ^n) δ^{-n}`.
    fn invert(&self, a: &AlgebraElement<S>, pos: usize) -> PResult<AlgebraElement<S>> {
        let fail = || self.cur.error_at(pos, "negative powers need an invertible monomial f*d^n");
        let mut it = a.coeffs().iter();
        let (Some((n, f)), None) = (it.next(), it.next()) else {
            return Err(fail());
        };
        let inv = invert_fn(f).ok_or_else(fail)?;
        let g = inv.compose_sigma(&self.sys, *n).map_err(|e| self.cur.error_at(pos, e.to_string()))?;
        AlgebraElement::monomial(&self.sys, g, -n).map_err(|e| self.cur.error_at(pos, e.to_string()))
    }

    // ---- circle points, sets, ideals, torus subsets ----

    pub fn lambda(&mut self) -> PResult<Lambda<S>> {
        let pos = self.here();
        if self.cur.eat_str("root") {
            self.cur.expect('(')?;
            let k = self.sint()?;
            self.cur.expect('/')?;
            let m = self.sint()?;
            self.cur.expect(')')?;
            if m <= 0 || m > MAX_ROOT_ORDER {
                return Err(self.cur.error_at(pos, format!("root(k/m) needs 0 < m <= {MAX_ROOT_ORDER}")));
            }
            return Ok(Lambda::root(k, m as u64));
        }
        if self.cur.eat_str("branch") {
            self.cur.expect('(')?;
            let base = self.cscalar()?;
            self.cur.expect(',')?;
            let p = self.sint()?;
            self.cur.expect(',')?;
            let j = self.sint()?;
            self.cur.expect(')')?;
            if p <= 0 || p > MAX_ROOT_ORDER || j < 0 || j >= p {
                return Err(self.cur.error_at(pos, "branch(base, p, j) needs 0 <= j < p"));
            }
            return Ok(Lambda::Branch { base, p: p as u64, j: j as u64 });
        }
        Ok(Lambda::Value(self.cscalar()?))
    }

    fn point_list(&mut self) -> PResult<Vec<(Point, usize)>> {
        let mut pts = Vec::new();
        if self.cur.eat('}') {
            return Ok(pts);
        }
        loop {
            let pos = self.here();
            pts.push((self.raw_point()?, pos));
            if self.cur.eat('}') {
                return Ok(pts);
            }
            self.cur.expect(',')?;
        }
    }

    fn set_in(&mut self, sys: &System) -> PResult<ClosedSet> {
        let pos = self.here();
        if self.cur.eat_str("empty") {
            return Ok(ClosedSet::empty(sys));
        }
        if self.cur.eat_str("all") {
            if !self.cur.eat('\\') {
                return Ok(ClosedSet::whole(sys));
            }
            self.cur.expect('{')?;
            let pts = self.point_list()?;
            if !matches!(sys, System::Shift) {
                return Err(self.cur.error_at(pos, "all\\{..} is only available on the shift"));
            }
            let mut ints = Vec::new();
            for (p, ppos) in pts {
                match p {
                    Point::Int(n) => ints.push(n),
                    _ => return Err(self.cur.error_at(ppos, "only integers can be removed from the shift")),
                }
            }
            return Ok(ClosedSet::Shift(ShiftSet::all_but(ints)));
        }
        if self.cur.eat_str("u[") {
            let System::Union(parts) = sys else {
                return Err(self.cur.error_at(pos, format!("u[..] needs a union system, not a {} system", sys.kind())));
            };
            let mut sets = Vec::new();
            loop {
                let spos = self.here();
                let Some(part) = parts.get(sets.len()) else {
                    return Err(self.cur.error_at(spos, format!("the union has only {} components", parts.len())));
                };
                sets.push(self.set_in(part)?);
                if self.cur.eat(']') {
                    break;
                }
                self.cur.expect(';')?;
            }
            if sets.len() != parts.len() {
                return Err(self.cur.error_at(pos, format!("u[..] needs {} components, got {}", parts.len(), sets.len())));
            }
            return Ok(ClosedSet::Union(sets));
        }
        self.cur.expect('{')?;
        let pts = self.point_list()?;
        for (p, ppos) in &pts {
            sys.check_point(p).map_err(|e| self.cur.error_at(*ppos, e.to_string()))?;
        }
        let pts: Vec<Point> = pts.into_iter().map(|p| p.0).collect();
        ClosedSet::from_points(sys, &pts).map_err(|e| self.cur.error_at(pos, e.to_string()))
    }

    pub fn set(&mut self) -> PResult<ClosedSet> {
        let sys = self.sys.clone();
        self.set_in(&sys)
    }

    pub fn ideal(&mut self) -> PResult<IdealHandle<S>> {
        let pos = self.here();
        let h = if self.cur.eat_str("Pxl") {
            self.cur.expect('(')?;
            let x = self.point()?;
            self.cur.expect(',')?;
            let l = self.lambda()?;
            self.cur.expect(')')?;
            IdealHandle::PxLambda(x, l)
        } else if self.cur.eat_str("Px") {
            self.cur.expect('(')?;
            let x = self.point()?;
            self.cur.expect(')')?;
            IdealHandle::Px(x)
        } else if self.cur.eat_str("Qx") {
            self.cur.expect('(')?;
            let x = self.point()?;
            self.cur.expect(')')?;
            IdealHandle::Qx(x)
        } else if self.cur.eat_str("K") {
            self.cur.expect('(')?;
            let s = self.set()?;
            self.cur.expect(')')?;
            IdealHandle::Kernel(s)
        } else if self.cur.eat_str("meet") {
            self.cur.expect('(')?;
            let mut v = vec![self.ideal()?];
            while self.cur.eat(',') {
                v.push(self.ideal()?);
            }
            self.cur.expect(')')?;
            IdealHandle::Intersection(v)
        } else if self.cur.eat_str("gen") {
            self.cur.expect('(')?;
            let mut v = Vec::new();
            loop {
                let e = self.expr()?;
                v.push(self.eval(&e)?);
                if !self.cur.eat(',') {
                    break;
                }
            }
            self.cur.expect(')')?;
            IdealHandle::Generated(v)
        } else if self.cur.eat_str("whole") {
            IdealHandle::whole(&self.sys)
        } else if self.cur.eat_str("zero") {
            IdealHandle::zero(&self.sys)
        } else {
            return Err(self.cur.syntax_error());
        };
        h.validate(&self.sys).map_err(|e| self.cur.error_at(pos, e.to_string()))?;
        Ok(h)
    }

    fn torus_entry(&mut self) -> PResult<TorusEntry<S>> {
        let pos = self.here();
        if self.cur.eat_str("orbit") {
            self.cur.expect('(')?;
            let rep = self.point()?;
            self.cur.expect(')')?;
            self.cur.expect('x')?;
            let lambdas = if self.cur.eat_str("T") {
                LambdaSet::Full
            } else {
                self.cur.expect('{')?;
                let mut v = Vec::new();
                if !self.cur.eat('}') {
                    loop {
                        v.push(self.lambda()?);
                        if self.cur.eat('}') {
                            break;
                        }
                        self.cur.expect(',')?;
                    }
                }
                LambdaSet::Roots(v)
            };
            let period = self.sys.period(&rep).map_err(|e| self.cur.error_at(pos, e.to_string()))?;
            if period == Period::Aperiodic && lambdas != LambdaSet::Full {
                return Err(self.cur.error_at(pos, "an aperiodic orbit carries the whole circle"));
            }
            return Ok(TorusEntry::Orbit { rep, lambdas });
        }
        let s = self.set()?;
        if !s.is_invariant(&self.sys).map_err(|e| self.cur.error_at(pos, e.to_string()))? {
            return Err(self.cur.error_at(pos, "set is not sigma-invariant"));
        }
        self.cur.expect('x')?;
        if !self.cur.eat_str("T") {
            return Err(self.cur.syntax_error());
        }
        Ok(TorusEntry::Set(s))
    }

    pub fn torus(&mut self) -> PResult<TorusSubset<S>> {
        if self.cur.looking_at("{}") {
            let save = self.cur.pos;
            self.cur.pos += 2;
            if self.cur.at_end() {
                return Ok(TorusSubset::empty());
            }
            self.cur.pos = save;
        }
        if self.cur.eat_str("empty") {
            return Ok(TorusSubset::empty());
        }
        let mut entries = vec![self.torus_entry()?];
        while self.cur.eat_str("u") {
            entries.push(self.torus_entry()?);
        }
        Ok(TorusSubset { entries })
    }
}

macro_rules! entry_point {
    ($(#[$m:meta])* $name:ident, $ret:ty, $method:ident) => {
        $(#[$m])*
        pub fn $name<S: Scalar>(text: &str, sys: &Arc<System>) -> PResult<$ret> {
            let mut p = Parser::<S>::new(text, sys);
            let v = p.$method()?;
            p.finish()?;
            Ok(v)
        }
    };
}

entry_point!(parse_lambda, Lambda<S>, lambda);
entry_point!(parse_ideal, IdealHandle<S>, ideal);
entry_point!(parse_torus, TorusSubset<S>, torus);

pub fn parse_point(text: &str, sys: &Arc<System>) -> PResult<Point> {
    let mut p = Parser::<crossprod::Float>::new(text, sys);
    let v = p.point()?;
    p.finish()?;
    Ok(v)
}

pub fn parse_set(text: &str, sys: &Arc<System>) -> PResult<ClosedSet> {
    let mut p = Parser::<crossprod::Float>::new(text, sys);
    let v = p.set()?;
    p.finish()?;
    Ok(v)
}

pub fn parse_expr<S: Scalar>(text: &str, sys: &Arc<System>) -> PResult<Expr<S>> {
    let mut p = Parser::<S>::new(text, sys);
    let v = p.expr()?;
    p.finish()?;
    Ok(v)
}

pub fn parse_elem<S: Scalar>(text: &str, sys: &Arc<System>) -> PResult<AlgebraElement<S>> {
    let mut p = Parser::<S>::new(text, sys);
    let e = p.expr()?;
    p.finish()?;
    p.eval(&e)
}

impl From<&ParseError> for ParseError {
    fn from(e: &ParseError) -> Self {
        e.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crossprod::{Exact, Float};

    fn cyc3() -> Arc<System> {
        Arc::new(System::cycle(3))
    }

    #[test]
    fn conjugation_by_delta() {
        let s = cyc3();
        let a = parse_elem::<Exact>("d * f{0:1,1:0,2:0} * d^-1", &s).unwrap();
        // f ∘ σ^{-1} is the indicator of σ(0) = 1
        let want = AlgebraElement::function(&s, FunctionValue::indicator(&s, &Point::Finite(1)).unwrap()).unwrap();
        assert_eq!(a, want);
    }

    #[test]
    fn adjoint_of_delta() {
        let s = cyc3();
        assert_eq!(parse_elem::<Exact>("adj(d)", &s).unwrap(), AlgebraElement::delta(&s, -1));
    }

    #[test]
    fn trig_square_matches_product() {
        let s = Arc::new(System::golden_rotation());
        let a = parse_elem::<Float>("(tp{1:1} + tp{-1:1})^2", &s).unwrap();
        let b = parse_elem::<Float>("tp{1:1,-1:1}", &s).unwrap();
        assert!(a.approx_eq(&b.mul(&b).unwrap(), 1e-12));
        assert!(a.approx_eq(&parse_elem::<Float>("tp{2:1,0:2,-2:1}", &s).unwrap(), 1e-12));
    }

    #[test]
    fn complex_literals() {
        let s = cyc3();
        let a = parse_elem::<Exact>("f{x0: 1/2-3i, 2: -i}", &s).unwrap();
        assert_eq!(a.render(), "f{0:1/2-3i,2:-1i}");
        assert_eq!(parse_elem::<Exact>(&a.render(), &s).unwrap(), a);
        let b = parse_elem::<Exact>("0.25e1 + 2i", &s).unwrap();
        assert_eq!(b.render(), "f{0:5/2+2i,1:5/2+2i,2:5/2+2i}");
    }

    #[test]
    fn mode_and_arity_diagnostics() {
        let s = cyc3();
        let e = parse_elem::<Exact>("1 + sh{inf:1}", &s).unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
        assert!(e.message.contains("shift"), "{e}");
        let e = parse_elem::<Exact>("d * (1 +", &s).unwrap_err();
        assert_eq!(e.col, 9);
        assert!(e.expected.iter().any(|x| x == "number"), "{e:?}");
        assert!(parse_elem::<Exact>("f{0:1, 5:2}", &s).is_err());
        assert!(parse_elem::<Exact>("(1 + d)^-1", &s).is_err());
    }

    #[test]
    fn union_literals_and_sets() {
        let s = Arc::new(System::union(vec![System::Shift, System::cycle(3)]).unwrap());
        let a = parse_elem::<Exact>("u{sh{inf:1, -2:3}; f{1:2}} * d", &s).unwrap();
        assert_eq!(parse_elem::<Exact>(&a.render(), &s).unwrap(), a);
        let set = parse_set("u[all\\{s1, s2}; {x0, x1, x2}]", &s).unwrap();
        assert_eq!(parse_set(&set.to_string(), &s).unwrap(), set);
        assert_eq!(parse_point("c1.x2", &s).unwrap(), Point::In(1, Box::new(Point::Finite(2))));
        let i = parse_ideal::<Exact>("meet(Px(c0.s0), Pxl(c1.x0, root(1/3)))", &s).unwrap();
        assert_eq!(parse_ideal::<Exact>(&i.render(), &s).unwrap(), i);
        let t = parse_torus::<Exact>("orbit(c1.x0) x {root(1/3), 1} u u[{inf}; {}] x T", &s).unwrap();
        assert_eq!(parse_torus::<Exact>(&t.render(), &s).unwrap(), t);
    }
}
