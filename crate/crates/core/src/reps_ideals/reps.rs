use std::fmt::Write as _;

use crate::algebra::AlgebraElement;
use crate::dynsys::{Period, Point};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Window metadata of a truncated aperiodic representation: basis `e_{-radius..=radius}`,
/// products are exact on indices with `|k| <= band`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub radius: u64,
    pub band: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RepMatrix<S> {
    pub dim: usize,
    /// Row-major entries.
    pub data: Vec<S>,
    pub window: Option<Window>,
}

impl<S: Scalar> RepMatrix<S> {
    pub fn zeros(dim: usize) -> Self {
        RepMatrix { dim, data: vec![S::zero(); dim * dim], window: None }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = S::one();
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.dim + c]
    }

    fn add_at(&mut self, r: usize, c: usize, v: S) {
        let e = &mut self.data[r * self.dim + c];
        *e = e.clone() + v;
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, a.clone() * b.clone());
                    }
                }
            }
        }
        out.window = self.window;
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.get(i, j).conj();
            }
        }
        out.window = self.window;
        out
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.data.iter().all(|x| x.is_negligible(tol))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && self.data.iter().zip(&other.data).all(|(a, b)| a.approx_eq(b, tol))
    }

    /// Entrywise comparison restricted to the central band (window basis indices `|k| <= band`).
    pub fn band_eq(&self, other: &Self, band: u64, tol: f64) -> bool {
        let Some(w) = self.window else {
            return self.approx_eq(other, tol);
        };
        let lo = (w.radius - band.min(w.radius)) as usize;
        let hi = (w.radius + band.min(w.radius)) as usize;
        (lo..=hi).all(|r| (lo..=hi).all(|c| self.get(r, c).approx_eq(other.get(r, c), tol)))
    }

    pub fn render(&self) -> String {
        let mut out = String::from("[");
        for r in 0..self.dim {
            if r > 0 {
                out.push_str("; ");
            }
            for c in 0..self.dim {
                if c > 0 {
                    out.push_str(", ");
                }
                let _ = write!(out, "{}", self.get(r, c).render());
            }
        }
        out.push(']');
        out
    }
}

/// `π_{x,λ}(a) = sum_n diag(a_n(σ^j x)) D^n`, where `D` has ones on the
/// subdiagonal and `λ` in the top right corner.
pub fn rep_periodic<S: Scalar>(x: &Point, lambda: &S, a: &AlgebraElement<S>) -> Result<RepMatrix<S>> {
    let sys = a.system();
    let p = match sys.period(x)? {
        Period::Periodic(p) => p as usize,
        Period::Aperiodic => return Err(Error::Precondition(format!("{x} is aperiodic"))),
    };
    let orbit = sys.orbit(x)?;
    let mut m = RepMatrix::zeros(p);
    for (n, f) in a.coeffs() {
        for k in 0..p {
            // D^n e_k = λ^{floor((k+n)/p)} e_{(k+n) mod p}
            let t = k as i64 + n;
            let row = t.rem_euclid(p as i64) as usize;
            let wraps = t.div_euclid(p as i64);
            let scale = lambda.powi(wraps).ok_or_else(|| Error::Precondition("λ must be nonzero".into()))?;
            m.add_at(row, k, f.eval_unchecked(&orbit[row]) * scale);
        }
    }
    Ok(m)
}

/// The truncation of `π_x(a)` to the basis `e_{-w..=w}`, with entry
/// `(r, c) = a_{r-c}(σ^r x)`.
pub fn rep_aperiodic_window<S: Scalar>(x: &Point, w: u64, a: &AlgebraElement<S>) -> Result<RepMatrix<S>> {
    let sys = a.system();
    if sys.period(x)? != Period::Aperiodic {
        return Err(Error::Precondition(format!("{x} is periodic")));
    }
    let radius = a.radius();
    if w < radius {
        return Err(Error::Precondition(format!("window {w} is smaller than the support radius {radius}")));
    }
    let dim = 2 * w as usize + 1;
    let mut m = RepMatrix::zeros(dim);
    let wi = w as i64;
    for r in -wi..=wi {
        let xr = sys.apply_unchecked(x, r);
        for (n, f) in a.coeffs() {
            let c = r - n;
            if c.abs() <= wi {
                m.add_at((r + wi) as usize, (c + wi) as usize, f.eval_unchecked(&xr));
            }
        }
    }
    m.window = Some(Window { radius: w, band: w - radius });
    Ok(m)
}
