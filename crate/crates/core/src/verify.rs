//! Named property suites, runnable from the command line and from tests.
//!
//! Each suite draws its cases from a seeded sampler and records at most a few
//! failing witnesses. `cases` scales the main loop of a suite.

use std::sync::Arc;

use crate::algebra::AlgebraElement;
use crate::dynsys::{ClosedSet, Period, Point, System, Theta};
use crate::error::Result;
use crate::funcspace::FunctionValue;
use crate::galois::instances::{classical_samples, ideal_samples, sample_system, torus_samples, HullKernel, ZerosIdeals};
use crate::galois::{check_all, LawReport, Swapped};
use crate::hullkernel::{
    decompose_as_intersection, hull_kernel_compose, kernel_hull_compose, kernel_member, kernel_project, kh_fixed,
};
use crate::reps_ideals::{ideal_inclusion, rep_periodic, Behaviour, IdealHandle, Lambda};
use crate::sample::Sampler;
use crate::scalar::{unit_from_turns, Exact, Float, NumericMode, Scalar, C64};
use crate::synthesis::{dirichlet_mean, drive_to_e, predicted_resonances};
use crate::transform::{adjoint_zeros_equal, ideal_of_torus_set, zeros_of_ideal, LambdaSet, TorusEntry, TorusSubset};

/// Coefficientwise tolerance of the float-mode suites.
pub const FLOAT_TOL: f64 = 1e-9;
/// Tolerance of float root verification in the zero-set suites.
pub const ZERO_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport { name: name.into(), cases: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 8 {
            self.failures.push(witness());
        }
    }

    fn absorb(&mut self, r: LawReport) {
        self.cases += r.checked;
        for f in r.failures {
            if self.failures.len() < 8 {
                self.failures.push(format!("{}: {f}", r.law));
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Suite names with their default case counts.
pub const SUITES: &[(&str, usize)] = &[
    ("algebra.axioms", 60),
    ("algebra.expectation", 40),
    ("algebra.dual", 40),
    ("reps.periodic", 20),
    ("reps.qx", 40),
    ("reps.inclusion", 12),
    ("reps.plain", 8),
    ("hullkernel.laws", 40),
    ("transform.laws", 10),
    ("galois.hk", 30),
    ("galois.HK", 30),
    ("galois.ZI", 30),
    ("synthesis.averaging", 10),
];

pub fn default_cases(name: &str) -> Option<usize> {
    SUITES.iter().find(|(n, _)| *n == name).map(|(_, c)| *c)
}

pub fn run_suite(name: &str, seed: u64, cases: Option<usize>) -> Result<SuiteReport> {
    let Some(default) = default_cases(name) else {
        return crate::error::unsupported(format!("unknown suite {name}"));
    };
    let n = cases.unwrap_or(default);
    match name {
        "algebra.axioms" => algebra_axioms(seed, n),
        "algebra.expectation" => algebra_expectation(seed, n),
        "algebra.dual" => algebra_dual(seed, n),
        "reps.periodic" => reps_periodic(seed, n),
        "reps.qx" => reps_qx(seed, n),
        "reps.inclusion" => reps_inclusion(seed, n),
        "reps.plain" => reps_plain(n),
        "hullkernel.laws" => hullkernel_laws(seed, n),
        "transform.laws" => transform_laws(seed, n),
        "galois.hk" => galois_classical(seed, n),
        "galois.HK" => galois_hull_kernel(seed, n),
        "galois.ZI" => galois_zeros_ideals(seed, n),
        "synthesis.averaging" => synthesis_averaging(seed, n),
        _ => unreachable!("listed above"),
    }
}

fn tol_of<S: Scalar>() -> f64 {
    match S::MODE {
        NumericMode::Exact => 0.0,
        NumericMode::Float => FLOAT_TOL,
    }
}

fn gauss(re: (i64, i64), im: (i64, i64)) -> Exact {
    Exact::from_ratio(re.0, re.1) + Exact::imag_unit() * Exact::from_ratio(im.0, im.1)
}

/// Eight exact points of the circle: the fourth roots of unity and Gaussian
/// rationals from Pythagorean triples.
pub fn exact_unit_lambdas() -> Vec<Exact> {
    vec![
        Exact::from_i64(1),
        Exact::from_i64(-1),
        Exact::imag_unit(),
        -Exact::imag_unit(),
        gauss((3, 5), (4, 5)),
        gauss((5, 13), (12, 13)),
        gauss((-8, 17), (15, 17)),
        gauss((3, 5), (-4, 5)),
    ]
}

/// Orbits of periods 1, 2, 3 and 5.
pub fn periods_1235() -> Arc<System> {
    Arc::new(System::finite(vec![0, 2, 1, 4, 5, 3, 7, 8, 9, 10, 6]).expect("permutation"))
}

/// A 2-cycle and a 3-cycle.
pub fn two_three() -> Arc<System> {
    Arc::new(System::finite(vec![1, 0, 3, 4, 2]).expect("permutation"))
}

pub fn shift() -> Arc<System> {
    Arc::new(System::Shift)
}

pub fn shift_and_cycle() -> Arc<System> {
    Arc::new(System::union(vec![System::Shift, System::cycle(3)]).expect("nonempty"))
}

fn ring_laws<S: Scalar>(r: &mut SuiteReport, sys: &Arc<System>, s: &mut Sampler, cases: usize) -> Result<()> {
    let tol = tol_of::<S>();
    let one = AlgebraElement::<S>::one(sys);
    for _ in 0..cases {
        let a = s.element::<S>(sys, 4);
        let b = s.element::<S>(sys, 4);
        let c = s.element::<S>(sys, 4);
        let ab = a.mul(&b)?;
        let lhs = ab.mul(&c)?;
        let rhs = a.mul(&b.mul(&c)?)?;
        r.check(lhs.approx_eq(&rhs, tol), || format!("{sys}: (ab)c != a(bc) for a = {}", a.render()));
        let d1 = a.mul(&b.add(&c)?)?;
        let d2 = ab.add(&a.mul(&c)?)?;
        r.check(d1.approx_eq(&d2, tol), || format!("{sys}: a(b+c) != ab+ac for a = {}", a.render()));
        let d3 = a.add(&b)?.mul(&c)?;
        let d4 = a.mul(&c)?.add(&b.mul(&c)?)?;
        r.check(d3.approx_eq(&d4, tol), || format!("{sys}: (a+b)c != ac+bc for a = {}", a.render()));
        r.check(
            a.mul(&one)?.approx_eq(&a, tol) && one.mul(&a)?.approx_eq(&a, tol),
            || format!("{sys}: unit fails on {}", a.render()),
        );
        r.check(ab.adj().approx_eq(&b.adj().mul(&a.adj())?, tol), || {
            format!("{sys}: (ab)* != b*a* for a = {}", a.render())
        });
        r.check(a.adj().adj().approx_eq(&a, tol), || format!("{sys}: a** != a for {}", a.render()));
        let bound = a.norm() * b.norm();
        r.check(ab.norm() <= bound * (1.0 + 1e-12) + FLOAT_TOL, || {
            format!("{sys}: ||ab|| = {} > ||a|| ||b|| = {bound}", ab.norm())
        });
        r.check((a.adj().norm() - a.norm()).abs() <= 1e-12 * (1.0 + a.norm()), || {
            format!("{sys}: ||a*|| != ||a|| for {}", a.render())
        });
    }
    Ok(())
}

/// Associativity, distributivity, unit, involution and norm laws.
pub fn algebra_axioms(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("algebra.axioms");
    let mut s = Sampler::new(seed);
    for sys in [two_three(), shift(), shift_and_cycle()] {
        ring_laws::<Exact>(&mut r, &sys, &mut s, cases)?;
    }
    ring_laws::<Float>(&mut r, &two_three(), &mut s, cases)?;
    ring_laws::<Float>(&mut r, &Arc::new(System::golden_rotation()), &mut s, cases)?;
    Ok(r)
}

fn expectation_laws<S: Scalar>(r: &mut SuiteReport, sys: &Arc<System>, s: &mut Sampler, cases: usize) -> Result<()> {
    let tol = tol_of::<S>();
    let d = AlgebraElement::<S>::delta(sys, 1);
    let dinv = AlgebraElement::<S>::delta(sys, -1);
    for _ in 0..cases {
        let a = s.element::<S>(sys, 3);
        let f = s.function::<S>(sys);
        let g = s.function::<S>(sys);
        let fa = AlgebraElement::function(sys, f.clone())?;
        let ga = AlgebraElement::function(sys, g.clone())?;
        let lhs = fa.mul(&a)?.mul(&ga)?.e0();
        let rhs = f.mul(&g)?.mul(&a.e0())?;
        r.check(lhs.approx_eq(&rhs, tol), || format!("{sys}: E(fag) != fgE(a) for {}", a.render()));

        let conj = d.mul(&a)?.mul(&dinv)?.e0();
        r.check(conj.approx_eq(&a.e0().compose_sigma(sys, -1)?, tol), || {
            format!("{sys}: E(d a d^-1) != E(a) o sigma^-1 for {}", a.render())
        });

        let mut sum = FunctionValue::zero(sys);
        for (n, an) in a.coeffs() {
            let t = an.compose_sigma(sys, *n)?;
            sum = sum.add(&t.conj().mul(&t)?)?;
        }
        r.check(a.adj().mul(&a)?.e0().approx_eq(&sum, tol), || {
            format!("{sys}: E(a*a) != sum |a_n o sigma^n|^2 for {}", a.render())
        });

        r.check(a.e0().algnorm() <= a.norm() * (1.0 + 1e-12) + FLOAT_TOL, || {
            format!("{sys}: ||E(a)|| > ||a|| for {}", a.render())
        });

        let bb = a.adj().mul(&a)?.e0();
        r.check(!bb.is_zero(tol) || a.is_zero(tol), || {
            format!("{sys}: E(b*b) = 0 for nonzero b = {}", a.render())
        });
    }
    Ok(())
}

/// Bimodule property, covariance, positivity and faithfulness of `E`.
pub fn algebra_expectation(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("algebra.expectation");
    let mut s = Sampler::new(seed);
    for sys in [periods_1235(), shift(), shift_and_cycle()] {
        expectation_laws::<Exact>(&mut r, &sys, &mut s, cases)?;
    }
    expectation_laws::<Float>(&mut r, &Arc::new(System::golden_rotation()), &mut s, cases)?;
    Ok(r)
}

fn dual_laws<S: Scalar>(r: &mut SuiteReport, sys: &Arc<System>, s: &mut Sampler, lambdas: &[S], cases: usize) -> Result<()> {
    let tol = tol_of::<S>();
    for i in 0..cases {
        let radius = (i % 5) as i64;
        let a = s.element::<S>(sys, radius);
        let b = s.element::<S>(sys, 2);
        let m = 2 * a.radius() + 1 + (i as u64 % 3);
        let avg = a.dual_average(m)?;
        r.check(avg.approx_eq(&a.e0_elem(), tol), || {
            format!("{sys}: dual average of order {m} differs from E(a) for {}", a.render())
        });
        for l in lambdas {
            let lhs = a.mul(&b)?.dual_action(l);
            let rhs = a.dual_action(l).mul(&b.dual_action(l))?;
            r.check(lhs.approx_eq(&rhs, tol), || format!("{sys}: dual action not multiplicative at {}", l.render()));
            r.check(a.adj().dual_action(l).approx_eq(&a.dual_action(l).adj(), tol), || {
                format!("{sys}: dual action does not commute with * at {}", l.render())
            });
        }
    }
    Ok(())
}

/// `dual_average(a, M) = E(a)` for `M > 2 radius`, and each `α_λ` is a *-automorphism.
pub fn algebra_dual(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("algebra.dual");
    let mut s = Sampler::new(seed);
    let ex = exact_unit_lambdas();
    for sys in [two_three(), shift(), shift_and_cycle()] {
        dual_laws::<Exact>(&mut r, &sys, &mut s, &ex[2..5], cases)?;
    }
    let fl: Vec<Float> = [0.1, 0.37, 0.5].iter().map(|t| unit_from_turns(*t)).collect();
    dual_laws::<Float>(&mut r, &Arc::new(System::golden_rotation()), &mut s, &fl, cases)?;
    Ok(r)
}

/// `a ∈ P_{x,λ}` iff `π_{x,λ}(a) = 0`, and `π_{x,λ}` is a *-homomorphism.
///
/// `cases` elements per `(x, λ)`, half of them drawn from the ideal.
pub fn reps_periodic(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("reps.periodic");
    let sys = periods_1235();
    let mut s = Sampler::new(seed);
    let reps = [0usize, 1, 3, 6];
    for x in reps.iter().map(|i| Point::Finite(*i)) {
        for l in exact_unit_lambdas() {
            let ideal = IdealHandle::PxLambda(x.clone(), Lambda::Value(l.clone()));
            for i in 0..cases {
                let a = if i % 2 == 0 { s.element::<Exact>(&sys, 4) } else { s.member(&sys, &ideal, 4)? };
                let member = ideal.member(&sys, &a, 0.0)?;
                let killed = rep_periodic(&x, &l, &a)?.is_zero(0.0);
                r.check(member == killed, || {
                    format!("x = {x}, λ = {}: member {member}, rep zero {killed}, a = {}", l.render(), a.render())
                });
                if i % 4 == 0 {
                    let b = s.element::<Exact>(&sys, 2);
                    let lhs = rep_periodic(&x, &l, &a.mul(&b)?)?;
                    let rhs = rep_periodic(&x, &l, &a)?.matmul(&rep_periodic(&x, &l, &b)?);
                    r.check(lhs.approx_eq(&rhs, 0.0), || format!("x = {x}: rep not multiplicative"));
                    let adj = rep_periodic(&x, &l, &a.adj())?;
                    r.check(adj.approx_eq(&rep_periodic(&x, &l, &a)?.dagger(), 0.0), || {
                        format!("x = {x}: rep(a*) != rep(a)^*")
                    });
                }
            }
        }
    }
    Ok(r)
}

/// `a ∈ Q_x` iff `a ∈ P_{x,λ}` for every `(2N+1)`-th root of unity `λ`,
/// `N` the support radius of `a`.
pub fn reps_qx(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("reps.qx");
    let sys = periods_1235();
    let mut s = Sampler::new(seed);
    let n = 3i64;
    let m = (2 * n + 1) as u64;
    for x in [0usize, 1, 3, 6].map(Point::Finite) {
        let q = IdealHandle::<Exact>::Qx(x.clone());
        for i in 0..cases {
            let a = match i % 3 {
                0 => s.element::<Exact>(&sys, n),
                1 => s.member(&sys, &q, n)?,
                _ => {
                    let l = exact_unit_lambdas()[s.rng_range(0, 8) as usize].clone();
                    s.member(&sys, &IdealHandle::PxLambda(x.clone(), Lambda::Value(l)), n)?
                }
            };
            let in_q = q.member(&sys, &a, 0.0)?;
            let mut all = true;
            for k in 0..m as i64 {
                if !IdealHandle::PxLambda(x.clone(), Lambda::root(k, m)).member(&sys, &a, 0.0)? {
                    all = false;
                    break;
                }
            }
            r.check(in_q == all, || format!("x = {x}: Q_x member {in_q}, all P_x,λ {all}, a = {}", a.render()));
        }
    }
    Ok(r)
}

impl Sampler {
    fn rng_range(&mut self, lo: i64, hi: i64) -> i64 {
        use rand::Rng;
        self.rng().gen_range(lo..hi)
    }
}

/// The primitive ideals and the `Q_x` of a system, for the inclusion table.
pub fn inclusion_handles<S: Scalar>(sys: &System) -> Vec<IdealHandle<S>> {
    let mut out = Vec::new();
    let lambdas = || [Lambda::one(), Lambda::root(1, 2), Lambda::root(1, 3)];
    let visit = |x: Point, out: &mut Vec<IdealHandle<S>>| match sys.period(&x).expect("valid point") {
        Period::Aperiodic => out.push(IdealHandle::Px(x)),
        Period::Periodic(_) => {
            out.push(IdealHandle::Qx(x.clone()));
            out.extend(lambdas().into_iter().map(|l| IdealHandle::PxLambda(x.clone(), l)));
        }
    };
    let points = |s: &System| -> Vec<Point> {
        match s {
            System::Finite { .. } => s.cycles().iter().map(|c| Point::Finite(c[0])).collect(),
            System::Shift => vec![Point::Int(0), Point::Int(3), Point::Inf],
            _ => Vec::new(),
        }
    };
    match sys {
        System::Union(parts) => {
            for (c, p) in parts.iter().enumerate() {
                for x in points(p) {
                    visit(Point::In(c, Box::new(x)), &mut out);
                }
            }
        }
        _ => {
            for x in points(sys) {
                visit(x, &mut out);
            }
        }
    }
    out
}

/// The inclusion predicate from orbit data against sampled membership,
/// with `cases` members drawn from each left-hand ideal.
pub fn reps_inclusion(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("reps.inclusion");
    let fin = two_three();
    let sh = shift();
    let both = Arc::new(System::union(vec![(*fin).clone(), System::Shift])?);
    let mut s = Sampler::new(seed);
    for sys in [fin, sh, both] {
        let hs = inclusion_handles::<Exact>(&sys);
        for i in &hs {
            let members = (0..cases).map(|_| s.member(&sys, i, 2)).collect::<Result<Vec<_>>>()?;
            for j in &hs {
                let predicted = ideal_inclusion(&sys, i, j)?;
                let mut sampled = true;
                for a in &members {
                    if !j.member(&sys, a, 0.0)? {
                        sampled = false;
                        break;
                    }
                }
                r.check(predicted == sampled, || {
                    format!("{sys}: {} ⊆ {}: predicted {predicted}, sampled {sampled}", i.render(), j.render())
                });
            }
        }
    }
    Ok(r)
}

/// The plain-ideal witness `a = f - (f/λ) δ^p` in `P_{x1} ∩ P_{x2,λ}`.
pub fn reps_plain(cases: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("reps.plain");
    let sys = shift_and_cycle();
    let x1 = Point::In(0, Box::new(Point::Int(0)));
    let ex = exact_unit_lambdas();
    for (i, l) in ex.iter().cycle().take(cases.max(1)).enumerate() {
        let x2 = Point::In(1, Box::new(Point::Finite(i % 3)));
        let pl = IdealHandle::PxLambda(x2.clone(), Lambda::Value(l.clone()));
        let ideal = IdealHandle::Intersection(vec![IdealHandle::Px(x1.clone()), pl.clone()]);
        match ideal.behaviour(&sys)? {
            Behaviour::Plain { f, a } => {
                let p = 3;
                let want = AlgebraElement::function(&sys, f.clone())?
                    .sub(&AlgebraElement::monomial(&sys, f.scale(&l.inverse().expect("unimodular")), p)?)?;
                r.check(a.approx_eq(&want, 0.0), || format!("witness is not f - (f/λ)d^3 at λ = {}", l.render()));
                r.check(ideal.member(&sys, &a, 0.0)?, || format!("witness not in the ideal at λ = {}", l.render()));
                r.check(!pl.member(&sys, &a.e0_elem(), 0.0)?, || format!("E(a) in P_x2,λ at λ = {}", l.render()));
                r.check(f.vanishes_on(&sys, &sys.orbit_closure(&x1)?, 0.0)?, || "E(a) does not vanish on the closure".into());
            }
            other => r.check(false, || format!("expected a plain ideal, got {}", other.name())),
        }
    }
    Ok(r)
}

/// Cycle types of permutations of at most `n` points, one permutation each.
pub fn cycle_type_systems(n: usize) -> Vec<System> {
    fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for k in (1..=max.min(n)).rev() {
            for mut rest in partitions(n - k, k) {
                rest.insert(0, k);
                out.push(rest);
            }
        }
        out
    }
    let mut out = Vec::new();
    for m in 1..=n {
        for parts in partitions(m, m) {
            let mut sigma = Vec::with_capacity(m);
            let mut start = 0;
            for len in parts {
                for j in 0..len {
                    sigma.push(start + (j + 1) % len);
                }
                start += len;
            }
            out.push(System::finite(sigma).expect("permutation"));
        }
    }
    out
}

/// `HK(S) = S`, `KH(I) ⊇ I` with equality iff `I` is well behaved, and the
/// canonical decomposition of `K(S)`.
pub fn hullkernel_laws(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("hullkernel.laws");
    for sys in cycle_type_systems(6) {
        for set in ClosedSet::enumerate_invariant(&sys).expect("finite") {
            let back = hull_kernel_compose(&sys, &set)?;
            r.check(back == set, || format!("{sys}: HK({set}) = {back}"));
        }
    }
    let mut s = Sampler::new(seed);
    for sys in [two_three(), shift(), shift_and_cycle()] {
        let mut handles = inclusion_handles::<Exact>(&sys);
        handles.push(IdealHandle::Intersection(vec![handles[0].clone(), handles[handles.len() - 1].clone()]));
        for i in &handles {
            let kh = kernel_hull_compose(&sys, i, 0.0)?;
            r.check(ideal_inclusion(&sys, i, &kh)?, || format!("{sys}: {} not inside KH", i.render()));
            for _ in 0..3 {
                let a = s.member(&sys, i, 2)?;
                r.check(kh.member(&sys, &a, 0.0)?, || format!("{sys}: member of {} outside KH", i.render()));
            }
            let fixed = kh_fixed(&sys, i, 0.0)?;
            let wb = matches!(i.behaviour(&sys), Ok(Behaviour::WellBehaved));
            r.check(fixed == wb, || format!("{sys}: {}: KH-fixed {fixed}, well behaved {wb}", i.render()));
        }
        for set in ClosedSet::enumerate_invariant(&sys).unwrap_or_default() {
            let parts = decompose_as_intersection::<Exact>(&sys, &set)?;
            let meet = IdealHandle::Intersection(parts);
            let k = IdealHandle::Kernel(set.clone());
            for i in 0..cases {
                let a = if i % 2 == 0 { s.element::<Exact>(&sys, 2) } else { s.member(&sys, &k, 2)? };
                let via_parts = meet.member(&sys, &a, 0.0)?;
                let direct = kernel_member(&sys, &set, &a, 0.0)?;
                r.check(via_parts == direct, || format!("{sys}: decomposition of K({set}) disagrees on {}", a.render()));
                let pr = kernel_project(&sys, &set, &a)?;
                r.check(k.member(&sys, &pr, 0.0)? && kernel_project(&sys, &set, &pr)? == pr, || {
                    format!("{sys}: projection onto K({set}) fails on {}", a.render())
                });
            }
        }
    }
    Ok(r)
}

/// Whether `π_{x,λ}(a) = 0`, through the matrix of the representation (float mode).
pub fn rep_kills(x: &Point, lambda: C64, a: &AlgebraElement<Float>, tol: f64) -> Result<bool> {
    Ok(rep_periodic(x, &lambda, a)?.is_zero(tol))
}

/// Zero sets of the canonical ideals, the `ZIZ` and `IZI` laws, recovery of
/// `gen(1 - d^p)` and symmetry of zero sets under the involution.
pub fn transform_laws(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("transform.laws");
    let sys = periods_1235();
    for x in [0usize, 1, 3, 6].map(Point::Finite) {
        let p = sys.period(&x)?.get().expect("periodic");
        for l in [Lambda::<Exact>::one(), Lambda::root(1, 4), Lambda::root(2, 5), Lambda::root(5, 12)] {
            let z = zeros_of_ideal(&sys, &IdealHandle::PxLambda(x.clone(), l.clone()), 0.0)?;
            let m = match l {
                Lambda::Root { m, .. } => m,
                _ => 1,
            };
            let order = m * p;
            for y in sys.orbit(&x)?.into_iter().chain([Point::Finite((x_index(&x) + 1) % 11)]) {
                let on_orbit = sys.same_orbit(&x, &y)?;
                for k in 0..order as i64 {
                    let mu = Lambda::<Exact>::root(k, order);
                    let want = on_orbit && mu.pow(p as i64).same(&l);
                    r.check(z.contains(&sys, &y, &mu)? == want, || {
                        format!("Z(Pxl({x}, {})) at ({y}, {}) should be {want}", l.render(), mu.render())
                    });
                }
            }
        }
        let zq = zeros_of_ideal::<Exact>(&sys, &IdealHandle::Qx(x.clone()), 0.0)?;
        let want = TorusSubset { entries: vec![TorusEntry::Orbit { rep: x.clone(), lambdas: LambdaSet::Full }] };
        r.check(zq.set_eq(&sys, &want)?, || format!("Z(Qx({x})) = {zq}"));
    }

    let usys = sample_system();
    for i in ideal_samples::<Float>(&usys, seed, 24) {
        let z = zeros_of_ideal(&usys, &i, ZERO_TOL)?;
        let iz = ideal_of_torus_set(&usys, &z)?;
        let ziz = zeros_of_ideal(&usys, &iz, ZERO_TOL)?;
        r.check(ziz.set_eq(&usys, &z)?, || format!("ZIZ != Z on {}", i.render()));
        let izi = ideal_of_torus_set(&usys, &ziz)?;
        let same = ideal_inclusion(&usys, &izi, &iz)? && ideal_inclusion(&usys, &iz, &izi)?;
        r.check(same, || format!("IZI != I on {}", iz.render()));
    }

    // gen(1 - d^p): zeros against the matrix oracle on a grid of 360 roots.
    let fsys = periods_1235();
    let mut s = Sampler::new(seed);
    for p in [1i64, 2, 3, 5, 6] {
        let g = AlgebraElement::<Float>::one(&fsys).sub(&AlgebraElement::delta(&fsys, p))?;
        let ideal = IdealHandle::Generated(vec![g.clone()]);
        let z = zeros_of_ideal(&fsys, &ideal, ZERO_TOL)?;
        let mut zero_points = Vec::new();
        for x in (0..11).map(Point::Finite) {
            let q = fsys.period(&x)?.get().expect("finite") as i32;
            for k in 0..360 {
                let mu = unit_from_turns(k as f64 / 360.0);
                let oracle = rep_kills(&x, mu.powi(q), &g, ZERO_TOL)?;
                let got = z.contains(&fsys, &x, &Lambda::Numeric(mu))?;
                r.check(oracle == got, || format!("Z(gen(1-d^{p})) at ({x}, {k}/360): oracle {oracle}, got {got}"));
                if oracle {
                    zero_points.push((x.clone(), mu.powi(q)));
                }
            }
        }
        let iz = ideal_of_torus_set(&fsys, &z)?;
        r.check(iz.member(&fsys, &g, ZERO_TOL)?, || format!("1 - d^{p} outside IZ"));
        for i in 0..cases {
            let a = if i % 2 == 0 { s.element::<Float>(&fsys, 3) } else { s.member(&fsys, &iz, 3)? };
            let mut oracle = true;
            for (x, l) in &zero_points {
                if !rep_kills(x, *l, &a, ZERO_TOL)? {
                    oracle = false;
                    break;
                }
            }
            let got = iz.member(&fsys, &a, ZERO_TOL)?;
            r.check(oracle == got, || format!("IZ(gen(1-d^{p})) membership: oracle {oracle}, got {got}"));
        }
    }

    for i in 0..cases {
        let ideal = random_generated(&fsys, &mut s, i)?;
        r.check(adjoint_zeros_equal(&fsys, &ideal, ZERO_TOL)?, || format!("Z(I) != Z(I*) on {}", ideal.render()));
    }
    Ok(r)
}

fn x_index(x: &Point) -> usize {
    match x {
        Point::Finite(i) => *i,
        _ => 0,
    }
}

/// A generated ideal whose generators vanish at a few points of the 64-root grid.
pub fn random_generated(sys: &Arc<System>, s: &mut Sampler, i: usize) -> Result<IdealHandle<Float>> {
    let cycles = sys.cycles();
    let mut gens = Vec::new();
    for j in 0..1 + i % 2 {
        let c = &cycles[(i + j) % cycles.len()];
        let l = Lambda::root(s.rng_range(0, 64), 64);
        let m = s.member(sys, &IdealHandle::PxLambda(Point::Finite(c[0]), l), 2)?;
        gens.push(m);
    }
    Ok(IdealHandle::Generated(gens))
}

pub fn galois_classical(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("galois.hk");
    let (pair, a, b) = classical_samples(seed, 5, cases);
    for rep in check_all(&pair, &a, &b)? {
        r.absorb(rep);
    }
    let sw = Swapped(pair);
    for rep in check_all(&sw, &b, &a)? {
        r.absorb(rep);
    }
    Ok(r)
}

pub fn galois_hull_kernel(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("galois.HK");
    let sys = sample_system();
    let a = ideal_samples::<Exact>(&sys, seed.wrapping_add(1), cases);
    let b = ClosedSet::enumerate_invariant(&sys).expect("enumerable");
    for rep in check_all(&HullKernel::<Exact>::new(sys.clone(), seed), &a, &b)? {
        r.absorb(rep);
    }
    for rep in check_all(&Swapped(HullKernel::<Exact>::new(sys.clone(), seed)), &b, &a)? {
        r.absorb(rep);
    }
    Ok(r)
}

pub fn galois_zeros_ideals(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("galois.ZI");
    let sys = sample_system();
    let a = ideal_samples::<Float>(&sys, seed.wrapping_add(1), cases);
    let b = torus_samples(&sys, seed.wrapping_add(2), cases)?;
    for rep in check_all(&ZerosIdeals::new(sys.clone(), seed), &a, &b)? {
        r.absorb(rep);
    }
    for rep in check_all(&Swapped(ZerosIdeals::new(sys.clone(), seed)), &b, &a)? {
        r.absorb(rep);
    }
    Ok(r)
}

/// A random element with support in `[-3, 3]` and unit-Wiener coefficients.
pub fn unit_wiener_element(sys: &Arc<System>, s: &mut Sampler) -> Result<AlgebraElement<Float>> {
    AlgebraElement::from_coeffs(sys, (-3..=3).map(|n| (n, s.unit_wiener())).collect::<Vec<_>>())
}

/// Averaging drives `a` to `E(a)` on the golden rotation, with every residual
/// equal to the Dirichlet-mean prediction; `θ = 1/3` stalls at multiples of 3.
pub fn synthesis_averaging(seed: u64, cases: usize) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("synthesis.averaging");
    let sys = Arc::new(System::golden_rotation());
    let theta = Theta::GOLDEN;
    let mut s = Sampler::new(seed);
    for _ in 0..cases {
        let a = unit_wiener_element(&sys, &mut s)?;
        let rep = drive_to_e(&a, 0.05, 16)?;
        r.check(rep.reached && rep.final_order() <= 4096, || {
            format!("residual {} at order {}", rep.final_residual(), rep.final_order())
        });
        let mut damp: Vec<(i64, f64)> = a.support().map(|n| (n, 1.0)).collect();
        for round in rep.rounds.iter().skip(1) {
            let mut predicted = 0.0;
            for (n, d) in damp.iter_mut() {
                *d *= dirichlet_mean(&theta, *n, round.order).norm();
                if *n != 0 {
                    predicted += a.coeff(*n).algnorm() * *d;
                }
            }
            r.check((round.residual - predicted).abs() <= 1e-9, || {
                format!("round {}: residual {} but the Dirichlet means predict {predicted}", round.round, round.residual)
            });
        }
    }
    let third = Theta::Surd { p: 1, q: 0, r: 1, d: 3 };
    let rsys = Arc::new(System::rotation(third, false)?);
    for _ in 0..cases {
        let a = unit_wiener_element(&rsys, &mut s)?;
        let rep = drive_to_e(&a, 0.05, 16)?;
        let predicted: Vec<i64> = predicted_resonances(&third, 3).into_iter().filter(|n| !a.coeff(*n).is_zero(0.0)).collect();
        r.check(!rep.reached && rep.resonant == predicted, || {
            format!("θ = 1/3: reached {}, resonant {:?}, predicted {predicted:?}", rep.reached, rep.resonant)
        });
    }
    Ok(r)
}
