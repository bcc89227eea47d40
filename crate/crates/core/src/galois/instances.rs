//! The three pairs the library ships: `(h, k)` on `C(X)` for finite `X`, hull and
//! kernel on the crossed product, and zeros / synthesized ideals.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use super::GaloisPair;
use crate::algebra::AlgebraElement;
use crate::dynsys::{ClosedSet, Point, System};
use crate::error::Result;
use crate::hullkernel::hull;
use crate::reps_ideals::{IdealHandle, Lambda};
use crate::sample::Sampler;
use crate::scalar::{unit_from_turns, Exact, Float, NumericMode, Scalar};
use crate::transform::{ideal_of_torus_set, zeros_of_ideal, LambdaSet, TorusEntry, TorusSubset};

/// Elements drawn from `I` when testing `I ⊆ J`.
pub const INCLUSION_SAMPLES: usize = 12;
/// Support radius of those elements.
pub const INCLUSION_RADIUS: i64 = 2;
/// Tolerance of membership tests in floating mode.
pub const FLOAT_TOL: f64 = 1e-8;

fn rank(rows: &[Vec<Exact>]) -> usize {
    let mut m: Vec<Vec<Exact>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|i| !m[*i][c].is_zero()) else { continue };
        m.swap(r, piv);
        let inv = Scalar::inverse(&m[r][c]).expect("nonzero pivot");
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone() * inv.clone();
                for j in c..cols {
                    let t = f.clone() * m[r][j].clone();
                    m[i][j] = m[i][j].clone() - t;
                }
            }
        }
        r += 1;
    }
    r
}

/// `h` and `k` between subspaces of `C(X) = C^n` and subsets of `X`.
pub struct ClassicalHK {
    pub n: usize,
}

pub type Subspace = Vec<Vec<Exact>>;

impl GaloisPair for ClassicalHK {
    type A = Subspace;
    type B = BTreeSet<usize>;

    fn name(&self) -> String {
        format!("(h, k) on C(X), |X| = {}", self.n)
    }
    fn alpha(&self, a: &Subspace) -> Result<BTreeSet<usize>> {
        Ok((0..self.n).filter(|x| a.iter().all(|f| f[*x].is_zero())).collect())
    }
    fn beta(&self, b: &BTreeSet<usize>) -> Result<Subspace> {
        Ok((0..self.n)
            .filter(|y| !b.contains(y))
            .map(|y| (0..self.n).map(|i| Exact::from_i64((i == y) as i64)).collect())
            .collect())
    }
    fn prec_a(&self, x: &Subspace, y: &Subspace) -> Result<bool> {
        let mut both = y.clone();
        both.extend(x.iter().cloned());
        Ok(rank(&both) == rank(y))
    }
    fn prec_b(&self, x: &BTreeSet<usize>, y: &BTreeSet<usize>) -> Result<bool> {
        Ok(x.is_subset(y))
    }
    fn show_a(&self, a: &Subspace) -> String {
        format!(
            "span[{}]",
            a.iter()
                .map(|f| format!("({})", f.iter().map(Scalar::render).collect::<Vec<_>>().join(",")))
                .collect::<Vec<_>>()
                .join(" ")
        )
    }
    fn show_b(&self, b: &BTreeSet<usize>) -> String {
        format!("{b:?}")
    }
}

pub fn classical_samples(seed: u64, n_points: usize, count: usize) -> (ClassicalHK, Vec<Subspace>, Vec<BTreeSet<usize>>) {
    let mut s = Sampler::new(seed);
    let mut as_ = Vec::with_capacity(count);
    let mut bs = Vec::with_capacity(count);
    for _ in 0..count {
        let dim = s.rng().gen_range(0..=3);
        let support: BTreeSet<usize> = (0..n_points).filter(|_| s.rng().gen_bool(0.6)).collect();
        let sub: Subspace = (0..dim)
            .map(|_| {
                (0..n_points)
                    .map(|i| if support.contains(&i) { s.scalar::<Exact>() } else { Exact::zero() })
                    .collect()
            })
            .collect();
        as_.push(sub);
        bs.push((0..n_points).filter(|_| s.rng().gen_bool(0.5)).collect());
    }
    (ClassicalHK { n: n_points }, as_, bs)
}

/// Inclusion of ideals decided by drawing members of the smaller one.
struct SampledInclusion<S> {
    sys: Arc<System>,
    tol: f64,
    sampler: RefCell<Sampler>,
    members: RefCell<HashMap<String, Vec<AlgebraElement<S>>>>,
    verdicts: RefCell<HashMap<(String, String), bool>>,
}

impl<S: Scalar> SampledInclusion<S> {
    fn new(sys: Arc<System>, seed: u64, tol: f64) -> Self {
        SampledInclusion {
            sys,
            tol,
            sampler: RefCell::new(Sampler::new(seed)),
            members: RefCell::new(HashMap::new()),
            verdicts: RefCell::new(HashMap::new()),
        }
    }

    fn included(&self, i: &IdealHandle<S>, j: &IdealHandle<S>) -> Result<bool> {
        let key = (i.render(), j.render());
        if let Some(v) = self.verdicts.borrow().get(&key) {
            return Ok(*v);
        }
        if !self.members.borrow().contains_key(&key.0) {
            let mut s = self.sampler.borrow_mut();
            let els = (0..INCLUSION_SAMPLES)
                .map(|_| s.member(&self.sys, i, INCLUSION_RADIUS))
                .collect::<Result<Vec<_>>>()?;
            self.members.borrow_mut().insert(key.0.clone(), els);
        }
        let mut ok = true;
        for a in &self.members.borrow()[&key.0] {
            if !j.member(&self.sys, a, self.tol)? {
                ok = false;
                break;
            }
        }
        self.verdicts.borrow_mut().insert(key, ok);
        Ok(ok)
    }
}

/// Hull and kernel between closed ideals and invariant closed subsets of `X`.
pub struct HullKernel<S> {
    inc: SampledInclusion<S>,
}

impl<S: Scalar> HullKernel<S> {
    pub fn new(sys: Arc<System>, seed: u64) -> Self {
        let tol = if S::MODE == NumericMode::Exact { 0.0 } else { FLOAT_TOL };
        HullKernel { inc: SampledInclusion::new(sys, seed, tol) }
    }

    pub fn system(&self) -> &Arc<System> {
        &self.inc.sys
    }
}

impl<S: Scalar> GaloisPair for HullKernel<S> {
    type A = IdealHandle<S>;
    type B = ClosedSet;

    fn name(&self) -> String {
        "(H, K) on closed ideals".into()
    }
    fn alpha(&self, a: &IdealHandle<S>) -> Result<ClosedSet> {
        Ok(hull(&self.inc.sys, a, self.inc.tol)?.set)
    }
    fn beta(&self, b: &ClosedSet) -> Result<IdealHandle<S>> {
        Ok(IdealHandle::Kernel(b.clone()))
    }
    fn prec_a(&self, x: &IdealHandle<S>, y: &IdealHandle<S>) -> Result<bool> {
        self.inc.included(x, y)
    }
    fn prec_b(&self, x: &ClosedSet, y: &ClosedSet) -> Result<bool> {
        x.subset(y)
    }
    fn show_a(&self, a: &IdealHandle<S>) -> String {
        a.render()
    }
    fn show_b(&self, b: &ClosedSet) -> String {
        b.to_string()
    }
}

/// Zero sets in `X × T` and the ideals they determine.
pub struct ZerosIdeals {
    inc: SampledInclusion<Float>,
}

impl ZerosIdeals {
    pub fn new(sys: Arc<System>, seed: u64) -> Self {
        ZerosIdeals { inc: SampledInclusion::new(sys, seed, FLOAT_TOL) }
    }

    pub fn system(&self) -> &Arc<System> {
        &self.inc.sys
    }
}

impl GaloisPair for ZerosIdeals {
    type A = IdealHandle<Float>;
    type B = TorusSubset<Float>;

    fn name(&self) -> String {
        "(Z, I) on closed ideals".into()
    }
    fn alpha(&self, a: &IdealHandle<Float>) -> Result<TorusSubset<Float>> {
        zeros_of_ideal(&self.inc.sys, a, FLOAT_TOL)
    }
    fn beta(&self, b: &TorusSubset<Float>) -> Result<IdealHandle<Float>> {
        ideal_of_torus_set(&self.inc.sys, b)
    }
    fn prec_a(&self, x: &IdealHandle<Float>, y: &IdealHandle<Float>) -> Result<bool> {
        self.inc.included(x, y)
    }
    fn prec_b(&self, x: &TorusSubset<Float>, y: &TorusSubset<Float>) -> Result<bool> {
        x.subset(&self.inc.sys, y)
    }
    fn show_a(&self, a: &IdealHandle<Float>) -> String {
        a.render()
    }
    fn show_b(&self, b: &TorusSubset<Float>) -> String {
        b.render()
    }
}

/// The shift compactified at infinity, next to a 2-cycle and a 3-cycle.
pub fn sample_system() -> Arc<System> {
    Arc::new(System::union(vec![System::Shift, System::finite(vec![1, 0, 3, 4, 2]).expect("permutation")]).expect("nonempty"))
}

fn canonical_handles<S: Scalar>(sys: &System) -> Vec<IdealHandle<S>> {
    let sh = |p: Point| Point::In(0, Box::new(p));
    let fin = |i: usize| Point::In(1, Box::new(Point::Finite(i)));
    let mut out = vec![
        IdealHandle::Px(sh(Point::Int(0))),
        IdealHandle::Qx(sh(Point::Inf)),
        IdealHandle::Qx(fin(0)),
        IdealHandle::Qx(fin(2)),
        IdealHandle::PxLambda(sh(Point::Inf), Lambda::one()),
        IdealHandle::PxLambda(sh(Point::Inf), Lambda::root(1, 2)),
        IdealHandle::PxLambda(fin(0), Lambda::one()),
        IdealHandle::PxLambda(fin(0), Lambda::root(1, 4)),
        IdealHandle::PxLambda(fin(1), Lambda::root(1, 3)),
        IdealHandle::PxLambda(fin(2), Lambda::one()),
        IdealHandle::PxLambda(fin(3), Lambda::root(1, 3)),
        IdealHandle::PxLambda(fin(2), Lambda::root(2, 5)),
    ];
    if S::MODE == NumericMode::Float {
        out.push(IdealHandle::PxLambda(fin(0), Lambda::Numeric(unit_from_turns(0.3))));
        out.push(IdealHandle::PxLambda(sh(Point::Inf), Lambda::Numeric(unit_from_turns(0.71))));
    }
    for s in ClosedSet::enumerate_invariant(sys).expect("enumerable") {
        out.push(IdealHandle::Kernel(s));
    }
    out
}

/// Canonical handles, kernels of every invariant set, then random pairwise intersections.
pub fn ideal_samples<S: Scalar>(sys: &System, seed: u64, count: usize) -> Vec<IdealHandle<S>> {
    let base = canonical_handles::<S>(sys);
    let mut s = Sampler::new(seed);
    let mut out: Vec<IdealHandle<S>> = base.iter().take(count).cloned().collect();
    while out.len() < count {
        let a = base.choose(s.rng()).expect("nonempty").clone();
        let b = base.choose(s.rng()).expect("nonempty").clone();
        out.push(IdealHandle::Intersection(vec![a, b]));
    }
    out
}

pub fn torus_samples(sys: &System, seed: u64, count: usize) -> Result<Vec<TorusSubset<Float>>> {
    let mut s = Sampler::new(seed);
    let sets = ClosedSet::enumerate_invariant(sys).expect("enumerable");
    let reps = [
        Point::In(0, Box::new(Point::Inf)),
        Point::In(1, Box::new(Point::Finite(0))),
        Point::In(1, Box::new(Point::Finite(2))),
    ];
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut entries = Vec::new();
        for rep in &reps {
            match s.rng().gen_range(0..4) {
                0 => {}
                1 => entries.push(TorusEntry::Orbit { rep: rep.clone(), lambdas: LambdaSet::Full }),
                _ => {
                    let k = s.rng().gen_range(1..=2);
                    let roots = (0..k).map(|_| s.lambda::<Float>()).collect();
                    entries.push(TorusEntry::Orbit { rep: rep.clone(), lambdas: LambdaSet::Roots(roots) });
                }
            }
        }
        if s.rng().gen_bool(0.3) {
            entries.push(TorusEntry::Set(sets.choose(s.rng()).expect("nonempty").clone()));
        }
        out.push(TorusSubset { entries });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::{check_all, Swapped};
    use super::*;

    #[test]
    fn rank_of_dependent_rows() {
        let r = |v: &[i64]| v.iter().map(|c| Exact::from_i64(*c)).collect::<Vec<_>>();
        assert_eq!(rank(&[r(&[1, 2, 0]), r(&[2, 4, 0]), r(&[0, 0, 1])]), 2);
    }

    #[test]
    fn classical_laws_hold_both_ways() {
        let (p, a, b) = classical_samples(5, 5, 30);
        for rep in check_all(&p, &a, &b).unwrap() {
            assert!(rep.passed(), "{rep:?}");
        }
        let q = Swapped(ClassicalHK { n: 5 });
        for rep in check_all(&q, &b, &a).unwrap() {
            assert!(rep.passed(), "{rep:?}");
        }
    }
}
