use std::fmt;

use num_integer::Integer;

use crate::scalar::{render_c64, unit_from_turns, Scalar, C64};

/// A point of the unit circle.
///
/// Roots of unity and branches of roots are kept symbolic so that exact mode
/// can still decide vanishing of Laurent polynomials at them.
#[derive(Clone, Debug, PartialEq)]
pub enum Lambda<S> {
    Value(S),
    /// `e^{2 pi i k/m}` with `0 <= k < m` and `gcd(k, m) = 1`.
    Root { k: i64, m: u64 },
    /// The `j`-th `p`-th root `exp(i (arg(base) + 2 pi j) / p)` of a unimodular `base`.
    Branch { base: S, p: u64, j: u64 },
    Numeric(C64),
}

/// Tolerance for comparing and testing numerically represented circle points.
pub const NUMERIC_TOL: f64 = 1e-9;

impl<S: Scalar> Lambda<S> {
    pub fn root(k: i64, m: u64) -> Self {
        let m_i = m as i64;
        let k = k.rem_euclid(m_i);
        let g = k.gcd(&m_i).max(1);
        Lambda::Root { k: k / g, m: (m_i / g) as u64 }
    }

    pub fn one() -> Self {
        Lambda::Value(S::one())
    }

    pub fn to_c64(&self) -> C64 {
        match self {
            Lambda::Value(s) => s.to_c64(),
            Lambda::Root { k, m } => unit_from_turns(*k as f64 / *m as f64),
            Lambda::Branch { base, p, j } => {
                let b = base.to_c64();
                let t = (crate::scalar::turns_of(b) + *j as f64) / *p as f64;
                unit_from_turns(t)
            }
            Lambda::Numeric(z) => *z,
        }
    }

    /// The value as a scalar of the current mode, if representable.
    pub fn as_scalar(&self) -> Option<S> {
        match self {
            Lambda::Value(s) => Some(s.clone()),
            Lambda::Root { k, m } => S::root_of_unity(*k, *m),
            Lambda::Branch { base, p: 1, .. } => Some(base.clone()),
            _ => S::from_c64(self.to_c64()),
        }
    }

    pub fn is_unimodular(&self) -> bool {
        match self {
            Lambda::Value(s) => {
                let one = S::one();
                s.modulus_sqr().approx_eq(&one, NUMERIC_TOL)
            }
            Lambda::Root { .. } => true,
            Lambda::Branch { base, .. } => base.modulus_sqr().approx_eq(&S::one(), NUMERIC_TOL),
            Lambda::Numeric(z) => (z.norm() - 1.0).abs() <= NUMERIC_TOL,
        }
    }

    pub fn pow(&self, n: i64) -> Self {
        match self {
            Lambda::Value(s) => Lambda::Value(s.powi(n).expect("unimodular")),
            Lambda::Root { k, m } => Self::root(
                ((*k as i128 * n as i128).rem_euclid(*m as i128)) as i64,
                *m,
            ),
            Lambda::Branch { base, p, .. } if n.rem_euclid(*p as i64) == 0 => {
                Lambda::Value(base.powi(n / *p as i64).expect("unimodular"))
            }
            _ => {
                let z = self.to_c64();
                Lambda::Numeric(z.powi(n as i32))
            }
        }
    }

    /// The `p` solutions of `μ^p = λ`.
    pub fn pth_roots(&self, p: u64) -> Vec<Self> {
        if p == 1 {
            return vec![self.clone()];
        }
        match self {
            Lambda::Root { k, m } => (0..p as i64).map(|j| Self::root(k + j * *m as i64, m * p)).collect(),
            Lambda::Value(s) => {
                if let Some(root) = exact_quarter_root(s) {
                    return Lambda::<S>::root(root.0, root.1).pth_roots(p);
                }
                (0..p).map(|j| Lambda::Branch { base: s.clone(), p, j }).collect()
            }
            _ => {
                let t = crate::scalar::turns_of(self.to_c64());
                (0..p).map(|j| Lambda::Numeric(unit_from_turns((t + j as f64) / p as f64))).collect()
            }
        }
    }

    /// Decides `sum_n c_n λ^n = 0`.
    ///
    /// Exact whenever λ is a root of unity or a value (or branch raised to a
    /// multiple of its order); otherwise numeric with a tolerance relative to
    /// the coefficient mass.
    pub fn laurent_vanishes(&self, coeffs: &[(i64, S)], tol: f64) -> bool {
        if coeffs.is_empty() {
            return true;
        }
        match self {
            Lambda::Value(s) => coeffs
                .iter()
                .fold(S::zero(), |acc, (n, c)| acc + c.clone() * s.powi(*n).expect("unimodular"))
                .is_negligible(tol),
            Lambda::Root { k, m } => S::laurent_vanishes_at_root(coeffs, *k, *m, tol),
            Lambda::Branch { base, p, .. } if coeffs.iter().all(|(n, _)| n.rem_euclid(*p as i64) == 0) => {
                coeffs
                    .iter()
                    .fold(S::zero(), |acc, (n, c)| acc + c.clone() * base.powi(n / *p as i64).expect("unimodular"))
                    .is_negligible(tol)
            }
            _ => {
                let z = self.to_c64();
                let mass: f64 = coeffs.iter().map(|(_, c)| c.abs()).sum();
                let v: C64 = coeffs.iter().map(|(n, c)| c.to_c64() * z.powi(*n as i32)).sum();
                v.norm() <= tol.max(NUMERIC_TOL) * (1.0 + mass)
            }
        }
    }

    /// Equality of circle points; exact when both sides are symbolic.
    pub fn same(&self, other: &Self) -> bool {
        match (self, other) {
            (Lambda::Value(a), Lambda::Value(b)) => a.approx_eq(b, NUMERIC_TOL),
            (Lambda::Root { k, m }, Lambda::Root { k: k2, m: m2 }) => k == k2 && m == m2,
            _ => (self.to_c64() - other.to_c64()).norm() <= 1e-8,
        }
    }

    pub fn render(&self) -> String {
        match self {
            Lambda::Value(s) => s.render(),
            Lambda::Root { k, m } => format!("root({k}/{m})"),
            Lambda::Branch { base, p, j } => format!("branch({},{p},{j})", base.render()),
            Lambda::Numeric(z) => render_c64(*z),
        }
    }
}

/// `Some((k, m))` when `s` is one of `1, i, -1, -i`.
fn exact_quarter_root<S: Scalar>(s: &S) -> Option<(i64, u64)> {
    (0..4).find(|k| S::root_of_unity(*k, 4).is_some_and(|r| r == *s)).map(|k| (k, 4))
}

impl<S: Scalar> fmt::Display for Lambda<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    #[test]
    fn roots_normalize() {
        assert_eq!(Lambda::<Exact>::root(2, 6), Lambda::Root { k: 1, m: 3 });
        assert_eq!(Lambda::<Exact>::root(-1, 4), Lambda::Root { k: 3, m: 4 });
    }

    #[test]
    fn pth_roots_power_back() {
        let l = Lambda::<Exact>::root(1, 4);
        for mu in l.pth_roots(3) {
            assert_eq!(mu.pow(3), l);
        }
        let v = Lambda::Value(Exact::new(
            num_rational::BigRational::new(3.into(), 5.into()),
            num_rational::BigRational::new(4.into(), 5.into()),
        ));
        let roots = v.pth_roots(2);
        assert_eq!(roots.len(), 2);
        for mu in &roots {
            assert!(mu.pow(2).same(&v));
            assert!((mu.to_c64() * mu.to_c64() - v.to_c64()).norm() < 1e-12);
        }
    }

    #[test]
    fn one_pth_roots_are_roots_of_unity() {
        let roots = Lambda::<Exact>::one().pth_roots(3);
        assert_eq!(roots, vec![Lambda::root(0, 3), Lambda::root(1, 3), Lambda::root(2, 3)]);
    }
}
