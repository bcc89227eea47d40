//! Exact vanishing tests at roots of unity.
//!
//! A Gaussian-rational Laurent polynomial `sum_l c_l x^l` vanishes at
//! `zeta = e^{2 pi i k/m}` iff, writing everything in `Q(zeta_M)` with
//! `M = lcm(m, 4)` (so that `i = zeta_M^{M/4}`), the resulting polynomial in
//! `zeta_M` is divisible by the cyclotomic polynomial `Phi_M`.

use std::collections::HashMap;
use std::sync::Mutex;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Exact;

static CACHE: Mutex<Option<HashMap<u64, Vec<i64>>>> = Mutex::new(None);

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(n: u64) -> Vec<i64> {
    assert!(n >= 1);
    if let Some(p) = CACHE.lock().unwrap().as_ref().and_then(|c| c.get(&n)) {
        return p.clone();
    }
    // x^n - 1 divided by every Phi_d with d | n, d < n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_div(&num, &cyclotomic_poly(d));
        }
    }
    CACHE
        .lock()
        .unwrap()
        .get_or_insert_with(HashMap::new)
        .insert(n, num.clone());
    num
}

/// Division by a monic integer polynomial; the remainder must be zero.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    if rem.len() <= dd {
        return vec![0];
    }
    let mut q = vec![0i64; rem.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd];
        q[i] = c;
        if c != 0 {
            for (j, dj) in den.iter().enumerate() {
                rem[i + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

pub fn laurent_vanishes_at_root(coeffs: &[(i64, Exact)], k: i64, m: u64) -> bool {
    assert!(m >= 1);
    let big_m = m.lcm(&4);
    let scale = (big_m / m) as i128;
    let quarter = (big_m / 4) as i128;
    let mi = big_m as i128;
    let mut poly = vec![BigRational::zero(); big_m as usize];
    for (l, c) in coeffs {
        let e = (k as i128 * *l as i128 * scale).rem_euclid(mi);
        if !c.re.is_zero() {
            poly[e as usize] += &c.re;
        }
        if !c.im.is_zero() {
            poly[((e + quarter).rem_euclid(mi)) as usize] += &c.im;
        }
    }
    reduce(poly, big_m).iter().all(Zero::is_zero)
}

/// Reduces a polynomial in `zeta_n` modulo `Phi_n`, giving the coordinates
/// of the element of `Q(zeta_n)` in the power basis `1, zeta, ..., zeta^{phi(n)-1}`.
pub fn reduce(mut poly: Vec<BigRational>, n: u64) -> Vec<BigRational> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    if poly.len() < deg {
        poly.resize(deg, BigRational::zero());
    }
    for top in (deg..poly.len()).rev() {
        let c = std::mem::take(&mut poly[top]);
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi.iter().enumerate().take(deg) {
            if *pj != 0 {
                poly[top - deg + j] -= &c * BigRational::from_integer((*pj).into());
            }
        }
    }
    poly.truncate(deg);
    poly
}

/// `sum_{j<m} zeta_m^{j n}`, computed in `Q(zeta_m)`; it is always rational.
pub fn root_power_sum(n: i64, m: u64) -> BigRational {
    let mut poly = vec![BigRational::zero(); m as usize];
    for j in 0..m as i128 {
        let e = (j * n as i128).rem_euclid(m as i128) as usize;
        poly[e] += BigRational::one();
    }
    let red = reduce(poly, m);
    debug_assert!(red.iter().skip(1).all(Zero::is_zero));
    red.into_iter().next().unwrap_or_else(BigRational::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn power_sums_of_roots() {
        assert_eq!(root_power_sum(0, 5), BigRational::from_integer(5.into()));
        assert_eq!(root_power_sum(3, 5), BigRational::zero());
        assert_eq!(root_power_sum(6, 3), BigRational::from_integer(3.into()));
        assert_eq!(root_power_sum(-2, 8), BigRational::zero());
    }

    #[test]
    fn geometric_sum_vanishes_at_nontrivial_roots() {
        let ones: Vec<(i64, Exact)> = (0..5).map(|l| (l, Exact::from_i64(1))).collect();
        assert!(!laurent_vanishes_at_root(&ones, 0, 5));
        for k in 1..5 {
            assert!(laurent_vanishes_at_root(&ones, k, 5));
        }
    }

    #[test]
    fn gaussian_coefficients() {
        // x - i vanishes at i = e^{2 pi i/4}, but not at -i.
        let p = vec![(1, Exact::from_i64(1)), (0, -Exact::imag_unit())];
        assert!(laurent_vanishes_at_root(&p, 1, 4));
        assert!(!laurent_vanishes_at_root(&p, 3, 4));
        // x^3 - 1 vanishes at the primitive cube roots; checked via Q(zeta_12).
        let q = vec![(3, Exact::from_i64(1)), (0, Exact::from_i64(-1))];
        assert!(laurent_vanishes_at_root(&q, 1, 3));
        assert!(laurent_vanishes_at_root(&q, 2, 3));
        // Negative exponents: x^-1 - x^2 vanishes at cube roots.
        let r = vec![(-1, Exact::from_i64(1)), (2, Exact::from_i64(-1))];
        assert!(laurent_vanishes_at_root(&r, 1, 3));
        assert!(!laurent_vanishes_at_root(&r, 1, 5));
    }
}
