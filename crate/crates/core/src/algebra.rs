//! Finitely supported elements `a = sum a_n δ^n` of the crossed product.
//!
//! Multiplication is the twisted convolution
//! `(ab)_n = sum_k a_k · (b_{n-k} ∘ σ^{-k})` and the involution is
//! `(a*)_n = conj(a_{-n} ∘ σ^{-n})`, so that `δ f δ^{-1} = f ∘ σ^{-1}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops;
use std::sync::Arc;

use num_rational::BigRational;

use crate::cyclotomic;
use crate::dynsys::{Point, System};
use crate::error::{mismatch, unsupported, Result};
use crate::funcspace::FunctionValue;
use crate::scalar::{NumericMode, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement<S> {
    sys: Arc<System>,
    coeffs: BTreeMap<i64, FunctionValue<S>>,
}

fn has_rotation(sys: &System) -> bool {
    match sys {
        System::Rotation { .. } => true,
        System::Union(parts) => parts.iter().any(has_rotation),
        _ => false,
    }
}

/// Exact arithmetic is only available when no component is a rotation.
pub fn check_mode<S: Scalar>(sys: &System) -> Result<()> {
    if S::MODE == NumericMode::Exact && has_rotation(sys) {
        unsupported("exact mode is not available on rotation systems")
    } else {
        Ok(())
    }
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn zero(sys: &Arc<System>) -> Self {
        AlgebraElement { sys: sys.clone(), coeffs: BTreeMap::new() }
    }

    /// The unit `χ_0`.
    pub fn one(sys: &Arc<System>) -> Self {
        Self::monomial(sys, FunctionValue::one(sys), 0).expect("constant fits")
    }

    pub fn delta(sys: &Arc<System>, n: i64) -> Self {
        Self::monomial(sys, FunctionValue::one(sys), n).expect("constant fits")
    }

    pub fn scalar(sys: &Arc<System>, c: S) -> Self {
        Self::monomial(sys, FunctionValue::constant(sys, c), 0).expect("constant fits")
    }

    pub fn function(sys: &Arc<System>, f: FunctionValue<S>) -> Result<Self> {
        Self::monomial(sys, f, 0)
    }

    /// `f δ^n`.
    pub fn monomial(sys: &Arc<System>, f: FunctionValue<S>, n: i64) -> Result<Self> {
        Self::from_coeffs(sys, [(n, f)])
    }

    pub fn from_coeffs(sys: &Arc<System>, coeffs: impl IntoIterator<Item = (i64, FunctionValue<S>)>) -> Result<Self> {
        check_mode::<S>(sys)?;
        let mut out = Self::zero(sys);
        for (n, f) in coeffs {
            f.check(sys)?;
            out.accumulate(n, f)?;
        }
        Ok(out)
    }

    fn accumulate(&mut self, n: i64, f: FunctionValue<S>) -> Result<()> {
        let sum = match self.coeffs.remove(&n) {
            Some(g) => g.add(&f)?,
            None => f.normalized(),
        };
        if !sum.is_zero(0.0) {
            self.coeffs.insert(n, sum);
        }
        Ok(())
    }

    pub fn system(&self) -> &Arc<System> {
        &self.sys
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, FunctionValue<S>> {
        &self.coeffs
    }

    pub fn coeff(&self, n: i64) -> FunctionValue<S> {
        self.coeffs.get(&n).cloned().unwrap_or_else(|| FunctionValue::zero(&self.sys))
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.coeffs.keys().copied()
    }

    /// `max |n|` over the support, 0 for the zero element.
    pub fn radius(&self) -> u64 {
        self.coeffs.keys().map(|n| n.unsigned_abs()).max().unwrap_or(0)
    }

    fn same_system(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.sys, &other.sys) || self.sys == other.sys {
            Ok(())
        } else {
            mismatch("elements live on different systems")
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_system(other)?;
        let mut out = self.clone();
        for (n, f) in &other.coeffs {
            out.accumulate(*n, f.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|_, f| f.neg())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map_coeffs(|_, f| f.scale(c))
    }

    fn map_coeffs(&self, op: impl Fn(i64, &FunctionValue<S>) -> FunctionValue<S>) -> Self {
        let mut out = Self::zero(&self.sys);
        for (n, f) in &self.coeffs {
            let g = op(*n, f);
            if !g.is_zero(0.0) {
                out.coeffs.insert(*n, g);
            }
        }
        out
    }

    /// Twisted convolution.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_system(other)?;
        let mut out = Self::zero(&self.sys);
        for (k, ak) in &self.coeffs {
            for (m, bm) in &other.coeffs {
                let shifted = bm.compose_sigma(&self.sys, -k)?;
                out.accumulate(k + m, ak.mul(&shifted)?)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(&self.sys);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The involution `a*`.
    pub fn adj(&self) -> Self {
        let mut out = Self::zero(&self.sys);
        for (m, am) in &self.coeffs {
            let f = am.compose_sigma(&self.sys, *m).expect("coefficient fits").conj();
            out.coeffs.insert(-m, f);
        }
        out
    }

    /// `sum_n ||a_n||`.
    pub fn norm(&self) -> f64 {
        self.coeffs.values().map(FunctionValue::algnorm).sum()
    }

    /// The conditional expectation `E(a) = a_0`.
    pub fn e0(&self) -> FunctionValue<S> {
        self.coeff(0)
    }

    /// `E(a)` as an element of the algebra.
    pub fn e0_elem(&self) -> Self {
        Self::function(&self.sys, self.e0()).expect("coefficient fits")
    }

    /// `α_λ(a)`: multiplies `a_n` by `λ^n`.
    pub fn dual_action(&self, lambda: &S) -> Self {
        self.map_coeffs(|n, f| f.scale(&lambda.powi(n).expect("unimodular lambda is invertible")))
    }

    /// Average of `α_λ(a)` over the `m`-th roots of unity.
    ///
    /// Float mode sums the rotated copies directly. Exact mode evaluates each
    /// coefficient's root sum `sum_j ζ^{jn}` in the cyclotomic field.
    pub fn dual_average(&self, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(crate::Error::Precondition("averaging order must be positive".into()));
        }
        match S::MODE {
            NumericMode::Float => {
                let mut acc = Self::zero(&self.sys);
                for j in 0..m {
                    let w = S::root_of_unity(j as i64, m).expect("float roots exist");
                    acc = acc.add(&self.dual_action(&w))?;
                }
                Ok(acc.scale(&S::from_ratio(1, m as i64)))
            }
            NumericMode::Exact => {
                let inv_m = BigRational::new(1.into(), (m as i64).into());
                Ok(self.map_coeffs(|n, f| {
                    let s = cyclotomic::root_power_sum(n, m) * inv_m.clone();
                    let c = S::from_big_ratio(s, BigRational::from_integer(0.into())).expect("exact");
                    f.scale(&c)
                }))
            }
        }
    }

    /// `𝔉(a)(x, λ) = sum_n λ^n a_n(x)`.
    pub fn fourier(&self, x: &Point, lambda: &S) -> Result<S> {
        self.sys.check_point(x)?;
        let mut acc = S::zero();
        for (n, f) in &self.coeffs {
            acc = acc + lambda.powi(*n).expect("unimodular lambda is invertible") * f.eval_unchecked(x);
        }
        Ok(acc)
    }

    /// The Laurent coefficients `(n, a_n(x))` of `λ -> 𝔉(a)(x, λ)`.
    pub fn fourier_coeffs(&self, x: &Point) -> Result<Vec<(i64, S)>> {
        self.sys.check_point(x)?;
        Ok(self.coeffs.iter().map(|(n, f)| (*n, f.eval_unchecked(x))).collect())
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.values().all(|f| f.is_zero(tol))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sub(other).map(|d| d.is_zero(tol)).unwrap_or(false)
    }

    /// Parseable expression for this element.
    pub fn render(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (n, f)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            out.push_str(&f.render());
            match n {
                0 => {}
                1 => out.push_str("*d"),
                _ => {
                    let _ = write!(out, "*d^{n}");
                }
            }
        }
        out
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl<S: Scalar> ops::$tr<&AlgebraElement<S>> for &AlgebraElement<S> {
            type Output = AlgebraElement<S>;
            fn $m(self, rhs: &AlgebraElement<S>) -> AlgebraElement<S> {
                self.$inner(rhs).expect("operands on the same system")
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl<S: Scalar> ops::Neg for &AlgebraElement<S> {
    type Output = AlgebraElement<S>;
    fn neg(self) -> AlgebraElement<S> {
        AlgebraElement::neg(self)
    }
}
