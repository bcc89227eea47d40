//! Univariate polynomials: numeric roots and exact gcds over `Q(i)`.
//!
//! Coefficients are stored lowest degree first.

use num_traits::{One, Zero};

use crate::scalar::{Exact, C64};

/// A root this close to the unit circle is treated as lying on it.
pub const UNIT_TOL: f64 = 1e-6;

pub fn eval(coeffs: &[C64], z: C64) -> C64 {
    coeffs.iter().rev().fold(C64::zero(), |acc, c| acc * z + c)
}

fn trim_c64(coeffs: &[C64]) -> &[C64] {
    let mut n = coeffs.len();
    while n > 0 && coeffs[n - 1] == C64::zero() {
        n -= 1;
    }
    &coeffs[..n]
}

/// All complex roots, with multiplicity, of a nonzero polynomial.
///
/// Aberth–Ehrlich iteration followed by a few Newton steps per root.
pub fn roots(coeffs: &[C64]) -> Vec<C64> {
    let c = trim_c64(coeffs);
    if c.len() <= 1 {
        return Vec::new();
    }
    let low = c.iter().take_while(|z| **z == C64::zero()).count();
    let mut out = vec![C64::zero(); low];
    let c = &c[low..];
    let n = c.len() - 1;
    if n == 0 {
        return out;
    }
    if n == 1 {
        out.push(-c[0] / c[1]);
        return out;
    }
    let lead = c[n];
    let monic: Vec<C64> = c.iter().map(|z| z / lead).collect();
    let deriv: Vec<C64> = (1..=n).map(|k| monic[k] * k as f64).collect();
    // Cauchy-type radius for the starting circle.
    let radius = monic[..n]
        .iter()
        .enumerate()
        .map(|(k, a)| a.norm().powf(1.0 / (n - k) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius, std::f64::consts::TAU * (k as f64 + 0.4) / n as f64))
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let p = eval(&monic, z[i]);
            if p == C64::zero() {
                continue;
            }
            let dp = eval(&deriv, z[i]);
            let ratio = p / dp;
            let repulsion: C64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d == C64::zero() {
                        C64::zero()
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = C64::one() - ratio * repulsion;
            let step = if denom.norm() < 1e-300 { ratio } else { ratio / denom };
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let dp = eval(&deriv, *zi);
            if dp.norm() < 1e-12 {
                break;
            }
            let step = eval(&monic, *zi) / dp;
            if !step.is_finite() || step.norm() > 1e-6 {
                break;
            }
            *zi -= step;
        }
    }
    out.extend(z);
    out
}

/// Distinct roots on the unit circle, projected onto it.
pub fn unit_circle_roots(coeffs: &[C64]) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::new();
    for r in roots(coeffs) {
        if (r.norm() - 1.0).abs() <= UNIT_TOL {
            let u = r / r.norm();
            if !out.iter().any(|w| (w - u).norm() <= UNIT_TOL) {
                out.push(u);
            }
        }
    }
    out.sort_by(|a, b| crate::scalar::turns_of(*a).total_cmp(&crate::scalar::turns_of(*b)));
    out
}

fn trim_exact(mut c: Vec<Exact>) -> Vec<Exact> {
    while c.last().is_some_and(|z| z.is_zero()) {
        c.pop();
    }
    c
}

fn make_monic(c: Vec<Exact>) -> Vec<Exact> {
    let c = trim_exact(c);
    match c.last().cloned() {
        None => c,
        Some(lead) => c.into_iter().map(|z| z / lead.clone()).collect(),
    }
}

/// Remainder of `a` modulo nonzero `b`.
fn rem_exact(a: &[Exact], b: &[Exact]) -> Vec<Exact> {
    let mut r = trim_exact(a.to_vec());
    let b = trim_exact(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db {
        let dr = r.len() - 1;
        let q = r[dr].clone() / lead.clone();
        for (j, bj) in b.iter().enumerate() {
            let t = q.clone() * bj.clone();
            r[dr - db + j] = r[dr - db + j].clone() - t;
        }
        r = trim_exact(r);
    }
    r
}

/// Quotient of `a` by `b`, assuming exact divisibility.
pub fn div_exact(a: &[Exact], b: &[Exact]) -> Vec<Exact> {
    let mut r = trim_exact(a.to_vec());
    let b = trim_exact(b.to_vec());
    let db = b.len() - 1;
    if r.len() <= db {
        return vec![Exact::zero()];
    }
    let mut q = vec![Exact::zero(); r.len() - db];
    let lead = b[db].clone();
    for i in (0..q.len()).rev() {
        let c = r[i + db].clone() / lead.clone();
        for (j, bj) in b.iter().enumerate() {
            let t = c.clone() * bj.clone();
            r[i + j] = r[i + j].clone() - t;
        }
        q[i] = c;
    }
    q
}

/// Monic gcd; the zero polynomial is represented by an empty vector.
pub fn gcd_exact(a: &[Exact], b: &[Exact]) -> Vec<Exact> {
    let mut a = trim_exact(a.to_vec());
    let mut b = trim_exact(b.to_vec());
    while !b.is_empty() {
        let r = rem_exact(&a, &b);
        a = b;
        b = r;
    }
    make_monic(a)
}

pub fn derivative_exact(a: &[Exact]) -> Vec<Exact> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.clone() * <Exact as crate::scalar::Scalar>::from_i64(k as i64))
        .collect()
}

/// The square-free part `a / gcd(a, a')`, monic.
pub fn squarefree_exact(a: &[Exact]) -> Vec<Exact> {
    let a = make_monic(a.to_vec());
    if a.len() <= 2 {
        return a;
    }
    let g = gcd_exact(&a, &derivative_exact(&a));
    make_monic(div_exact(&a, &g))
}

pub fn eval_exact(coeffs: &[Exact], z: &Exact) -> Exact {
    coeffs.iter().rev().fold(Exact::zero(), |acc, c| acc * z.clone() + c.clone())
}
