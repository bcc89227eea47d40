//! Numeric modes for coefficients.
//!
//! Every computation runs in exactly one mode: exact Gaussian rationals
//! (`Complex<BigRational>`) or double-precision complex floats. The mode is
//! a type parameter, so mixing modes inside one element is a type error.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::cyclotomic;

pub type C64 = Complex<f64>;
pub type Exact = Complex<BigRational>;
pub type Float = Complex<f64>;

/// Default absolute tolerance for zero tests in floating mode.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NumericMode {
    Exact,
    Float,
}

impl NumericMode {
    pub fn name(self) -> &'static str {
        match self {
            NumericMode::Exact => "exact",
            NumericMode::Float => "float",
        }
    }
}

pub trait Scalar: Num + Clone + Debug + Send + Sync + Neg<Output = Self> + 'static {
    const MODE: NumericMode;

    fn from_i64(n: i64) -> Self;
    /// The real number `num/den`.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_big_ratio(re: BigRational, im: BigRational) -> Option<Self>;
    fn imag_unit() -> Self;
    fn conj(&self) -> Self;
    fn to_c64(&self) -> C64;
    /// `None` when the value is not representable in this mode.
    fn from_c64(z: C64) -> Option<Self>;
    /// The value itself in exact mode.
    fn as_exact(&self) -> Option<Exact>;
    /// `|z|^2` as a (real) scalar.
    fn modulus_sqr(&self) -> Self;
    /// Exact zero test in exact mode, `|z| <= tol` in floating mode.
    fn is_negligible(&self, tol: f64) -> bool;
    /// `e^{2 pi i k / m}` if representable.
    fn root_of_unity(k: i64, m: u64) -> Option<Self>;
    /// Decides `sum_l c_l zeta^l = 0` for `zeta = e^{2 pi i k/m}`.
    fn laurent_vanishes_at_root(coeffs: &[(i64, Self)], k: i64, m: u64, tol: f64) -> bool;
    fn render(&self) -> String;

    fn abs(&self) -> f64 {
        self.to_c64().norm()
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.clone() - other.clone()).is_negligible(tol)
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }

    fn powi(&self, k: i64) -> Option<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one();
        let mut b = base;
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b.clone();
            }
            b = b.clone() * b;
            e >>= 1;
        }
        Some(acc)
    }
}

/// `4k/m mod 4` when `e^{2 pi i k/m}` is a power of `i`.
fn quarter_turns(k: i64, m: u64) -> Option<i64> {
    let m = m as i64;
    let num = 4 * k;
    if num.rem_euclid(m) == 0 {
        Some((num / m).rem_euclid(4))
    } else {
        None
    }
}

impl Scalar for Exact {
    const MODE: NumericMode = NumericMode::Exact;

    fn from_i64(n: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    fn from_big_ratio(re: BigRational, im: BigRational) -> Option<Self> {
        Some(Complex::new(re, im))
    }

    fn imag_unit() -> Self {
        Complex::new(BigRational::zero(), BigRational::one())
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_c64(&self) -> C64 {
        Complex::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn from_c64(_z: C64) -> Option<Self> {
        None
    }

    fn as_exact(&self) -> Option<Exact> {
        Some(self.clone())
    }

    fn modulus_sqr(&self) -> Self {
        Complex::new(self.norm_sqr(), BigRational::zero())
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn root_of_unity(k: i64, m: u64) -> Option<Self> {
        let q = quarter_turns(k, m)?;
        Some(match q {
            0 => Self::one(),
            1 => Self::imag_unit(),
            2 => -Self::one(),
            _ => -Self::imag_unit(),
        })
    }

    fn laurent_vanishes_at_root(coeffs: &[(i64, Self)], k: i64, m: u64, _tol: f64) -> bool {
        cyclotomic::laurent_vanishes_at_root(coeffs, k, m)
    }

    fn render(&self) -> String {
        render_exact(self)
    }
}

impl Scalar for Float {
    const MODE: NumericMode = NumericMode::Float;

    fn from_i64(n: i64) -> Self {
        Complex::new(n as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(num as f64 / den as f64, 0.0)
    }

    fn from_big_ratio(re: BigRational, im: BigRational) -> Option<Self> {
        Some(Complex::new(re.to_f64()?, im.to_f64()?))
    }

    fn imag_unit() -> Self {
        Complex::new(0.0, 1.0)
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn from_c64(z: C64) -> Option<Self> {
        Some(z)
    }

    fn as_exact(&self) -> Option<Exact> {
        None
    }

    fn modulus_sqr(&self) -> Self {
        Complex::new(self.norm_sqr(), 0.0)
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.norm() <= tol
    }

    fn root_of_unity(k: i64, m: u64) -> Option<Self> {
        if let Some(q) = quarter_turns(k, m) {
            return Some(quarter_unit(q));
        }
        let r = k.rem_euclid(m as i64) as f64 / m as f64;
        Some(Complex::from_polar(1.0, std::f64::consts::TAU * r))
    }

    fn laurent_vanishes_at_root(coeffs: &[(i64, Self)], k: i64, m: u64, tol: f64) -> bool {
        let sum: C64 = coeffs
            .iter()
            .map(|(l, c)| {
                let e = (k as i128 * *l as i128).rem_euclid(m as i128) as i64;
                c * Self::root_of_unity(e, m).unwrap()
            })
            .sum();
        sum.norm() <= tol
    }

    fn render(&self) -> String {
        render_c64(*self)
    }
}

fn quarter_unit(q: i64) -> C64 {
    match q.rem_euclid(4) {
        0 => Complex::new(1.0, 0.0),
        1 => Complex::new(0.0, 1.0),
        2 => Complex::new(-1.0, 0.0),
        _ => Complex::new(0.0, -1.0),
    }
}

/// `e^{2 pi i t}` with `t` in turns.
pub fn unit_from_turns(t: f64) -> C64 {
    let r = t.rem_euclid(1.0);
    let q = r * 4.0;
    if q == q.round() {
        return quarter_unit(q as i64);
    }
    Complex::from_polar(1.0, std::f64::consts::TAU * r)
}

/// Angle of a unit complex number in turns, in `[0, 1)`.
pub fn turns_of(z: C64) -> f64 {
    let t = z.arg() / std::f64::consts::TAU;
    let t = t.rem_euclid(1.0);
    if t >= 1.0 {
        0.0
    } else {
        t
    }
}

/// Formats a real number with 12 significant digits, trimming zeros.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 || x.abs() < 1e-300 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.11e}", x);
    let (mant, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{:.*}", decimals, x);
        trim_zeros(&fixed)
    } else {
        format!("{}e{}", trim_zeros(mant), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" {
            "0".to_string()
        } else {
            t.to_string()
        }
    } else {
        s.to_string()
    }
}

pub fn render_c64(z: C64) -> String {
    // Suppress negative zero and round-off below printing precision.
    let clean = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
    let (re, im) = (clean(z.re), clean(z.im));
    match (re == 0.0, im == 0.0) {
        (_, true) => fmt_real(re),
        (true, false) => format!("{}i", fmt_real(im)),
        (false, false) => {
            let sign = if im < 0.0 { '-' } else { '+' };
            format!("{}{}{}i", fmt_real(re), sign, fmt_real(im.abs()))
        }
    }
}

fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn render_exact(z: &Exact) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => render_rational(&z.re),
        (true, false) => format!("{}i", render_rational(&z.im)),
        (false, false) => {
            let sign = if z.im.is_negative() { '-' } else { '+' };
            format!("{}{}{}i", render_rational(&z.re), sign, render_rational(&z.im.abs()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_real(1.0), "1");
        assert_eq!(fmt_real(-2.5), "-2.5");
        assert_eq!(fmt_real(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_real(123456.789), "123456.789");
        assert_eq!(fmt_real(1.5e-12), "1.5e-12");
        assert_eq!(fmt_real(0.618033988749895), "0.61803398875");
    }

    #[test]
    fn exact_rendering() {
        let z = Exact::new(BigRational::new(1.into(), 2.into()), BigRational::from_integer((-3).into()));
        assert_eq!(z.render(), "1/2-3i");
        assert_eq!(Exact::imag_unit().render(), "1i");
    }

    #[test]
    fn exact_roots_of_unity_only_for_quarter_turns() {
        assert_eq!(Exact::root_of_unity(1, 4), Some(Exact::imag_unit()));
        assert_eq!(Exact::root_of_unity(3, 6), Some(-Exact::one()));
        assert!(Exact::root_of_unity(1, 3).is_none());
    }

    #[test]
    fn powi_negative() {
        let z = Float::new(0.0, 2.0);
        let w = Scalar::powi(&z, -2).unwrap();
        assert!((w - Float::new(-0.25, 0.0)).norm() < 1e-15);
    }
}
