//! Acceptance suite: one pass/fail line per criterion, exit status 1 if any fails.
//!
//! Library suites are run at full size, and each criterion is also checked
//! against an oracle written here from first principles (dense twisted
//! convolution, explicit representation matrices, orbit bookkeeping).

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crossprod::algebra::AlgebraElement;
use crossprod::funcspace::FunctionValue;
use crossprod::galois::instances::{classical_samples, ideal_samples, sample_system, torus_samples, HullKernel, ZerosIdeals};
use crossprod::galois::{check_assumption, Swapped};
use crossprod::hullkernel::{decompose_as_intersection, hull, kernel_hull_compose, kh_fixed};
use crossprod::reps_ideals::{ideal_inclusion, Behaviour, IdealHandle, Lambda};
use crossprod::sample::Sampler;
use crossprod::scalar::unit_from_turns;
use crossprod::synthesis::drive_to_e;
use crossprod::transform::{adjoint_zeros_equal, ideal_of_torus_set, zeros_of_ideal, LambdaSet, TorusEntry, TorusSubset};
use crossprod::verify::{
    exact_unit_lambdas, inclusion_handles, periods_1235, random_generated, run_suite, shift, shift_and_cycle, two_three,
    unit_wiener_element,
};
use crossprod::{ClosedSet, Exact, Float, Point, Scalar, System, Theta, C64};
use num_traits::Zero;

const SEED: u64 = 1;

// tolerances and budgets
const FLOAT_TOL: f64 = 1e-9;
const ZERO_TOL: f64 = 1e-8;
const AXIOMS_BUDGET: Duration = Duration::from_secs(10);
const AVERAGING_BUDGET: Duration = Duration::from_secs(5);
const AVERAGING_EPS: f64 = 0.05;
const AVERAGING_MAX_ORDER: u64 = 4096;
const RESIDUAL_REL_TOL: f64 = 1e-9;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn suite(name: &str, cases: usize) -> Result<usize, String> {
    let r = run_suite(name, SEED, Some(cases)).map_err(|e| format!("{name}: {e}"))?;
    ensure(r.passed(), || format!("{name}: {}", r.failures.join("; ")))?;
    Ok(r.cases)
}

// ---------- oracles on finite systems ----------

/// `σ^k(x)` by walking the permutation.
fn sigma_pow(sigma: &[usize], x: usize, k: i64) -> usize {
    let mut inv = vec![0; sigma.len()];
    for (i, s) in sigma.iter().enumerate() {
        inv[*s] = i;
    }
    let step = if k >= 0 { sigma } else { &inv[..] };
    (0..k.unsigned_abs()).fold(x, |y, _| step[y])
}

fn sigma_of(sys: &System) -> &[usize] {
    match sys {
        System::Finite { sigma } => sigma,
        _ => panic!("finite system expected"),
    }
}

type Table<S> = BTreeMap<i64, Vec<S>>;

fn table<S: Scalar>(a: &AlgebraElement<S>) -> Table<S> {
    a.coeffs()
        .iter()
        .map(|(n, f)| match f {
            FunctionValue::Finite(v) => (*n, v.clone()),
            _ => panic!("finite coefficients expected"),
        })
        .filter(|(_, v)| v.iter().any(|c| !c.is_zero()))
        .collect()
}

/// `(ab)_n(x) = Σ_k a_k(x) b_{n-k}(σ^{-k} x)`.
fn oracle_mul<S: Scalar>(sigma: &[usize], a: &Table<S>, b: &Table<S>) -> Table<S> {
    let mut out: Table<S> = BTreeMap::new();
    for (k, ak) in a {
        for (m, bm) in b {
            let row = out.entry(k + m).or_insert_with(|| vec![S::zero(); sigma.len()]);
            for x in 0..sigma.len() {
                row[x] = row[x].clone() + ak[x].clone() * bm[sigma_pow(sigma, x, -k)].clone();
            }
        }
    }
    out.retain(|_, v| v.iter().any(|c| !c.is_zero()));
    out
}

/// `(a*)_{-m}(x) = conj(a_m(σ^m x))`, from `(f d^m)* = d^{-m} conj(f)`.
fn oracle_adj<S: Scalar>(sigma: &[usize], a: &Table<S>) -> Table<S> {
    a.iter().map(|(m, am)| (-m, (0..sigma.len()).map(|x| am[sigma_pow(sigma, x, *m)].conj()).collect())).collect()
}

fn oracle_norm<S: Scalar>(a: &Table<S>) -> f64 {
    a.values().map(|v| v.iter().map(|c| c.abs()).fold(0.0, f64::max)).sum()
}

/// The induced representation at a periodic point: on the orbit basis
/// `e_j <-> σ^j x`, `f` acts diagonally and `δ e_j = e_{j+1}`, `δ e_{p-1} = λ e_0`.
fn oracle_rep<S: Scalar>(sigma: &[usize], x: usize, lambda: &S, a: &Table<S>) -> Vec<Vec<S>> {
    let mut orbit = vec![x];
    while sigma[*orbit.last().unwrap()] != x {
        orbit.push(sigma[*orbit.last().unwrap()]);
    }
    let p = orbit.len() as i64;
    let mut m = vec![vec![S::zero(); p as usize]; p as usize];
    for (n, an) in a {
        for c in 0..p {
            let t = c + n;
            let (r, q) = (t.rem_euclid(p) as usize, t.div_euclid(p));
            let w = lambda.powi(q).expect("unimodular");
            m[r][c as usize] = m[r][c as usize].clone() + an[orbit[r]].clone() * w;
        }
    }
    m
}

/// The representation sitting over the torus point `(x, μ)`: `λ = μ^p`, `p` the period of `x`.
fn torus_rep(sigma: &[usize], x: usize, mu: &Float, a: &Table<Float>) -> Vec<Vec<Float>> {
    let p = (1..=sigma.len()).find(|k| sigma_pow(sigma, x, *k as i64) == x).unwrap();
    oracle_rep(sigma, x, &mu.powu(p as u32), a)
}

fn matrix_zero<S: Scalar>(m: &[Vec<S>], tol: f64) -> bool {
    m.iter().flatten().all(|c| c.is_negligible(tol))
}

// ---------- 1. algebra axioms ----------

/// Trig coefficients of `a_n`, on a rotation.
fn trig_table(a: &AlgebraElement<Float>) -> BTreeMap<i64, BTreeMap<i64, C64>> {
    a.coeffs()
        .iter()
        .map(|(n, f)| match f {
            FunctionValue::Trig(m) => (*n, m.clone()),
            _ => panic!("rotation coefficients expected"),
        })
        .collect()
}

/// Twisted product on the rotation `t -> t + θ`: `b ∘ σ^{-k}` multiplies the
/// `j`-th Fourier coefficient by `e^{-2πi j k θ}`.
fn oracle_mul_rotation(theta: f64, a: &AlgebraElement<Float>, b: &AlgebraElement<Float>) -> BTreeMap<i64, BTreeMap<i64, C64>> {
    let mut out: BTreeMap<i64, BTreeMap<i64, C64>> = BTreeMap::new();
    for (k, ak) in trig_table(a) {
        for (m, bm) in trig_table(b) {
            let row = out.entry(k + m).or_default();
            for (i, ci) in &ak {
                for (j, cj) in &bm {
                    let twist = unit_from_turns(-((*j as f64) * (k as f64) * theta).rem_euclid(1.0));
                    *row.entry(i + j).or_insert(C64::zero()) += ci * cj * twist;
                }
            }
        }
    }
    out
}

fn criterion_1() -> Check {
    // three elements per case: 167 cases give 501 elements per system model
    let start = Instant::now();
    let cases = suite("algebra.axioms", 167)?;
    let elapsed = start.elapsed();
    ensure(elapsed < AXIOMS_BUDGET, || format!("suite took {elapsed:?}"))?;

    let mut s = Sampler::new(SEED + 100);
    let sys = two_three();
    let sigma = sigma_of(&sys).to_vec();
    for _ in 0..500 {
        let a = s.element::<Exact>(&sys, 4);
        let b = s.element::<Exact>(&sys, 4);
        let (ta, tb) = (table(&a), table(&b));
        ensure(table(&a.mul(&b).unwrap()) == oracle_mul(&sigma, &ta, &tb), || format!("product of {} and {}", a.render(), b.render()))?;
        ensure(table(&a.adj()) == oracle_adj(&sigma, &ta), || format!("adjoint of {}", a.render()))?;
        ensure((a.norm() - oracle_norm(&ta)).abs() <= 1e-12 * (1.0 + a.norm()), || format!("norm of {}", a.render()))?;
    }
    let rot = Arc::new(System::golden_rotation());
    let theta = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let a = s.element::<Float>(&rot, 4);
        let b = s.element::<Float>(&rot, 4);
        let got = trig_table(&a.mul(&b).unwrap());
        let want = oracle_mul_rotation(theta, &a, &b);
        for n in got.keys().chain(want.keys()) {
            let (g, w) = (got.get(n).cloned().unwrap_or_default(), want.get(n).cloned().unwrap_or_default());
            for j in g.keys().chain(w.keys()) {
                let d = g.get(j).copied().unwrap_or_default() - w.get(j).copied().unwrap_or_default();
                ensure(d.norm() <= FLOAT_TOL, || format!("rotation product coefficient ({n}, {j}) off by {}", d.norm()))?;
            }
        }
    }
    Ok(format!("{cases} law checks in {elapsed:.2?}, 700 products against the convolution oracle"))
}

// ---------- 2. conditional expectation ----------

fn criterion_2() -> Check {
    let cases = suite("algebra.expectation", 200)?;
    let sys = periods_1235();
    let sigma = sigma_of(&sys).to_vec();
    let mut s = Sampler::new(SEED + 200);
    for _ in 0..200 {
        let a = s.element::<Exact>(&sys, 3);
        let ta = table(&a);
        // E(a*a)(x) = Σ_n |a_n(σ^n x)|^2
        let want: Vec<Exact> =
            (0..sigma.len()).map(|x| ta.iter().fold(Exact::zero(), |acc, (n, an)| acc + an[sigma_pow(&sigma, x, *n)].modulus_sqr())).collect();
        let prod = oracle_mul(&sigma, &oracle_adj(&sigma, &ta), &ta);
        let oracle = prod.get(&0).cloned().unwrap_or_else(|| vec![Exact::zero(); sigma.len()]);
        ensure(oracle == want, || format!("oracle E(a*a) for {}", a.render()))?;
        let lib = a.adj().mul(&a).unwrap().e0();
        ensure(lib == FunctionValue::Finite(want.clone()), || format!("E(a*a) for {}", a.render()))?;
        ensure(want.iter().all(|c| c.is_zero()) == ta.is_empty(), || format!("faithfulness at {}", a.render()))?;
    }
    Ok(format!("{cases} law checks, 200 oracle cases of E(a*a)"))
}

// ---------- 3. representations and P_{x,λ} ----------

fn criterion_3() -> Check {
    let cases = suite("reps.periodic", 100)?;
    let sys = periods_1235();
    let sigma = sigma_of(&sys).to_vec();
    let mut s = Sampler::new(SEED + 300);
    let (mut inside, mut total) = (0, 0);
    for x in [0usize, 1, 3, 6] {
        for l in exact_unit_lambdas() {
            let ideal = IdealHandle::PxLambda(Point::Finite(x), Lambda::Value(l.clone()));
            for i in 0..100 {
                let a = if i % 2 == 0 { s.element::<Exact>(&sys, 4) } else { s.member(&sys, &ideal, 4).unwrap() };
                let killed = matrix_zero(&oracle_rep(&sigma, x, &l, &table(&a)), 0.0);
                let member = ideal.member(&sys, &a, 0.0).map_err(|e| e.to_string())?;
                ensure(member == killed, || format!("x{x}, λ = {}: member {member}, oracle {killed}", l.render()))?;
                inside += killed as usize;
                total += 1;
            }
        }
    }
    ensure(inside > 0 && inside < total, || format!("degenerate sample: {inside} of {total} in the ideal"))?;
    Ok(format!("{cases} suite checks, {total} oracle comparisons ({inside} members)"))
}

// ---------- 4. Q_x ----------

fn criterion_4() -> Check {
    let cases = suite("reps.qx", 200)?;
    let sys = periods_1235();
    let sigma = sigma_of(&sys).to_vec();
    let mut s = Sampler::new(SEED + 400);
    let mut members = 0;
    for x in [0usize, 1, 3, 6] {
        let mut orbit = vec![x];
        while sigma[*orbit.last().unwrap()] != x {
            orbit.push(sigma[*orbit.last().unwrap()]);
        }
        let q = IdealHandle::<Exact>::Qx(Point::Finite(x));
        for i in 0..200 {
            let a = s.element::<Exact>(&sys, 3);
            // zero the coefficients on the orbit, sometimes leaving one value behind
            let mut coeffs: Vec<(i64, FunctionValue<Exact>)> = Vec::new();
            let spared = (i % 3 == 2).then(|| (i as i64 % 7 - 3, orbit[i % orbit.len()]));
            for (n, an) in table(&a) {
                let mut v = an.clone();
                if i % 3 != 0 {
                    for y in &orbit {
                        if spared != Some((n, *y)) {
                            v[*y] = Exact::zero();
                        }
                    }
                }
                coeffs.push((n, FunctionValue::Finite(v)));
            }
            let a = AlgebraElement::from_coeffs(&sys, coeffs).unwrap();
            let oracle = table(&a).values().all(|v| orbit.iter().all(|y| v[*y].is_zero()));
            let got = q.member(&sys, &a, 0.0).map_err(|e| e.to_string())?;
            ensure(got == oracle, || format!("Q_x{x} member {got}, oracle {oracle} for {}", a.render()))?;
            members += oracle as usize;
        }
    }
    Ok(format!("{cases} suite checks, 800 oracle comparisons ({members} members)"))
}

// ---------- 5. inclusion table ----------

/// Orbits are named by a representative; the closure of an orbit is a set of names.
fn orbit_name(sys: &System, x: &Point) -> String {
    match (sys, x) {
        (System::Finite { sigma }, Point::Finite(i)) => {
            let mut orbit = vec![*i];
            while sigma[*orbit.last().unwrap()] != *i {
                orbit.push(sigma[*orbit.last().unwrap()]);
            }
            format!("x{}", orbit.iter().min().unwrap())
        }
        (System::Shift, Point::Int(_)) => "Z".into(),
        (System::Shift, Point::Inf) => "inf".into(),
        (System::Union(parts), Point::In(c, p)) => format!("c{c}.{}", orbit_name(&parts[*c], p)),
        _ => panic!("unexpected point"),
    }
}

fn closure_names(sys: &System, x: &Point) -> BTreeSet<String> {
    match (sys, x) {
        (System::Shift, Point::Int(_)) => ["Z".to_string(), "inf".to_string()].into(),
        (System::Union(parts), Point::In(c, p)) => closure_names(&parts[*c], p).into_iter().map(|n| format!("c{c}.{n}")).collect(),
        _ => [orbit_name(sys, x)].into(),
    }
}

fn table_predicate(sys: &System, i: &IdealHandle<Exact>, j: &IdealHandle<Exact>) -> bool {
    use IdealHandle::*;
    let same = |x: &Point, y: &Point| orbit_name(sys, x) == orbit_name(sys, y);
    let holds_orbit = |x: &Point, y: &Point| closure_names(sys, x).contains(&orbit_name(sys, y));
    match (i, j) {
        (Px(x), Px(y)) => closure_names(sys, y).is_subset(&closure_names(sys, x)),
        (Px(x), PxLambda(y, _)) | (Px(x), Qx(y)) => holds_orbit(x, y),
        (PxLambda(..), Px(_)) | (PxLambda(..), Qx(_)) | (Qx(_), Px(_)) => false,
        (PxLambda(x, l), PxLambda(y, m)) => same(x, y) && (l.to_c64() - m.to_c64()).norm() < 1e-12,
        (Qx(x), PxLambda(y, _)) | (Qx(x), Qx(y)) => same(x, y),
        _ => panic!("only primitive ideals and Q_x in the table"),
    }
}

fn kind(i: &IdealHandle<Exact>) -> &'static str {
    match i {
        IdealHandle::Px(_) => "Px",
        IdealHandle::PxLambda(..) => "Pxl",
        IdealHandle::Qx(_) => "Qx",
        _ => "other",
    }
}

fn criterion_5() -> Check {
    let cases = suite("reps.inclusion", 100)?;
    let both = Arc::new(System::union(vec![(*two_three()).clone(), System::Shift]).unwrap());
    let mut s = Sampler::new(SEED + 500);
    let mut pairs = 0;
    let mut kinds = BTreeSet::new();
    for sys in [two_three(), shift(), both] {
        let hs = inclusion_handles::<Exact>(&sys);
        for i in &hs {
            let members: Vec<_> = (0..100).map(|_| s.member(&sys, i, 2).unwrap()).collect();
            for j in &hs {
                let want = table_predicate(&sys, i, j);
                let got = ideal_inclusion(&sys, i, j).map_err(|e| e.to_string())?;
                ensure(got == want, || format!("{sys}: {} ⊆ {}: predicate {got}, table {want}", i.render(), j.render()))?;
                let mut sampled = true;
                for a in &members {
                    sampled &= j.member(&sys, a, 0.0).map_err(|e| e.to_string())?;
                }
                ensure(sampled == want, || format!("{sys}: {} ⊆ {}: sampled {sampled}, table {want}", i.render(), j.render()))?;
                kinds.insert((kind(i), kind(j), want));
                pairs += 1;
            }
        }
    }
    Ok(format!("{cases} suite checks, {pairs} pairs x 100 members, {} (kind, kind, verdict) classes, 0 discrepancies", kinds.len()))
}

// ---------- 6. plain-ideal witness ----------

fn criterion_6() -> Check {
    suite("reps.plain", 8)?;
    let sys = shift_and_cycle();
    let x1 = Point::In(0, Box::new(Point::Int(0)));
    let cycle = [1usize, 2, 0];
    for (i, l) in exact_unit_lambdas().into_iter().enumerate() {
        let x2i = i % 3;
        let x2 = Point::In(1, Box::new(Point::Finite(x2i)));
        let pl = IdealHandle::PxLambda(x2.clone(), Lambda::Value(l.clone()));
        let ideal = IdealHandle::Intersection(vec![IdealHandle::Px(x1.clone()), pl.clone()]);
        let Ok(Behaviour::Plain { f, a }) = ideal.behaviour(&sys) else {
            return Err(format!("no plain witness at λ = {}", l.render()));
        };
        let want = AlgebraElement::function(&sys, f.clone())
            .unwrap()
            .sub(&AlgebraElement::monomial(&sys, f.scale(&l.inverse().unwrap()), 3).unwrap())
            .unwrap();
        ensure(a == want, || format!("a != f - (f/λ)d^3 at λ = {}", l.render()))?;
        // P_{x1}: every coefficient vanishes on the closure of the orbit of x1, the whole shift part
        let shift_zero = a.coeffs().values().all(|c| match c {
            FunctionValue::Union(parts) => parts[0].is_zero(0.0),
            _ => false,
        });
        let cyc = |b: &AlgebraElement<Exact>| -> Table<Exact> {
            b.coeffs()
                .iter()
                .map(|(n, c)| match c {
                    FunctionValue::Union(parts) => match &parts[1] {
                        FunctionValue::Finite(v) => (*n, v.clone()),
                        _ => panic!("cycle component"),
                    },
                    _ => panic!("union coefficient"),
                })
                .collect()
        };
        let kills_a = matrix_zero(&oracle_rep(&cycle, x2i, &l, &cyc(&a)), 0.0);
        let kills_e = matrix_zero(&oracle_rep(&cycle, x2i, &l, &cyc(&a.e0_elem())), 0.0);
        ensure(shift_zero && kills_a, || format!("oracle: a outside the intersection at λ = {}", l.render()))?;
        ensure(!kills_e, || format!("oracle: E(a) inside P_x2,λ at λ = {}", l.render()))?;
        ensure(ideal.member(&sys, &a, 0.0).unwrap() && !pl.member(&sys, &a.e0_elem(), 0.0).unwrap(), || {
            format!("library membership at λ = {}", l.render())
        })?;
    }
    Ok("8 values of λ, exact".into())
}

// ---------- 7. hull and kernel ----------

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn invariant_subsets(sigma: &[usize]) -> Vec<BTreeSet<usize>> {
    (0u32..1 << sigma.len())
        .map(|mask| (0..sigma.len()).filter(|i| mask >> i & 1 == 1).collect::<BTreeSet<usize>>())
        .filter(|s| s.iter().all(|x| s.contains(&sigma[*x])))
        .collect()
}

fn criterion_7() -> Check {
    let cases = suite("hullkernel.laws", 200)?;
    let (mut systems, mut sets) = (0, 0);
    for n in 1..=6 {
        for sigma in permutations(n) {
            let sys = System::finite(sigma.clone()).unwrap();
            for s in invariant_subsets(&sigma) {
                let set = ClosedSet::Finite(s);
                let h = hull::<Exact>(&sys, &IdealHandle::Kernel(set.clone()), 0.0).map_err(|e| e.to_string())?;
                ensure(h.set == set, || format!("{sys}: HK({set}) = {}", h.set))?;
                sets += 1;
            }
            systems += 1;
        }
    }

    let mut handles_checked = 0;
    for sys in [two_three(), periods_1235()] {
        let sigma = sigma_of(&sys).to_vec();
        let mut handles = inclusion_handles::<Exact>(&sys);
        handles.extend(invariant_subsets(&sigma).into_iter().map(|s| IdealHandle::Kernel(ClosedSet::Finite(s))));
        for i in &handles {
            let kh = kernel_hull_compose(&sys, i, 0.0).map_err(|e| e.to_string())?;
            ensure(ideal_inclusion(&sys, i, &kh).unwrap(), || format!("{} not inside KH", i.render()))?;
            let fixed = kh_fixed(&sys, i, 0.0).unwrap();
            let wb = matches!(i.behaviour(&sys), Ok(Behaviour::WellBehaved));
            ensure(fixed == wb, || format!("{}: KH-fixed {fixed}, well behaved {wb}", i.render()))?;
            handles_checked += 1;
        }
        let mut s = Sampler::new(SEED + 700);
        for set in invariant_subsets(&sigma) {
            let cs = ClosedSet::Finite(set.clone());
            let meet = IdealHandle::Intersection(decompose_as_intersection::<Exact>(&sys, &cs).unwrap());
            for i in 0..200 {
                let a = s.element::<Exact>(&sys, 2);
                let a = if i % 2 == 0 {
                    a
                } else {
                    let coeffs = table(&a).into_iter().map(|(n, mut v)| {
                        for x in &set {
                            if i % 4 != 3 || *x != *set.iter().next().unwrap() || n != 0 {
                                v[*x] = Exact::zero();
                            }
                        }
                        (n, FunctionValue::Finite(v))
                    });
                    AlgebraElement::from_coeffs(&sys, coeffs.collect::<Vec<_>>()).unwrap()
                };
                let oracle = table(&a).values().all(|v| set.iter().all(|x| v[*x].is_zero()));
                let got = meet.member(&sys, &a, 0.0).map_err(|e| e.to_string())?;
                ensure(got == oracle, || format!("{sys}: decomposition of K({cs}) says {got}, oracle {oracle}"))?;
            }
        }
    }
    Ok(format!("{cases} suite checks, HK = id on {sets} sets of {systems} permutations, {handles_checked} handles"))
}

// ---------- 8. zeros and ideals ----------

fn criterion_8() -> Check {
    let cases = suite("transform.laws", 50)?;
    let sys = periods_1235();
    let sigma = sigma_of(&sys).to_vec();
    let period = |x: usize| (1..=sigma.len()).find(|k| sigma_pow(&sigma, x, *k as i64) == x).unwrap() as u64;

    // Z(P_{x,λ}) = orbit × {μ : μ^p = λ}
    for x in [0usize, 1, 3, 6] {
        let p = period(x);
        let gauss = exact_unit_lambdas()[4].clone();
        let mut lambdas: Vec<Lambda<Exact>> = [(0, 1), (1, 4), (2, 5), (5, 12)].iter().map(|(k, m)| Lambda::root(*k, *m)).collect();
        lambdas.push(Lambda::Value(gauss.clone()));
        for l in lambdas {
            let roots: Vec<Lambda<Exact>> = match &l {
                Lambda::Root { k, m } => (0..p as i64).map(|j| Lambda::root(k + j * *m as i64, p * m)).collect(),
                Lambda::Value(b) => (0..p).map(|j| Lambda::Branch { base: b.clone(), p, j }).collect(),
                _ => unreachable!(),
            };
            for mu in &roots {
                let d = mu.to_c64().powi(p as i32) - l.to_c64();
                ensure(d.norm() < 1e-12, || format!("oracle root {} is not a p-th root", mu.render()))?;
            }
            let want = TorusSubset { entries: vec![TorusEntry::Orbit { rep: Point::Finite(x), lambdas: LambdaSet::Roots(roots) }] };
            let z = zeros_of_ideal(&sys, &IdealHandle::PxLambda(Point::Finite(x), l.clone()), 0.0).map_err(|e| e.to_string())?;
            ensure(z.set_eq(&sys, &want).unwrap(), || format!("Z(Pxl(x{x}, {})) = {z}", l.render()))?;
        }
        let zq = zeros_of_ideal::<Exact>(&sys, &IdealHandle::Qx(Point::Finite(x)), 0.0).unwrap();
        let want = TorusSubset { entries: vec![TorusEntry::Orbit { rep: Point::Finite(x), lambdas: LambdaSet::Full }] };
        ensure(zq.set_eq(&sys, &want).unwrap(), || format!("Z(Qx(x{x})) = {zq}"))?;
    }

    // ZIZ = Z and IZI = I on canonical handles
    let mut handles = inclusion_handles::<Exact>(&sys);
    handles.extend(invariant_subsets(&sigma).into_iter().map(|s| IdealHandle::Kernel(ClosedSet::Finite(s))));
    for i in &handles {
        let z = zeros_of_ideal(&sys, i, 0.0).unwrap();
        let iz = ideal_of_torus_set(&sys, &z).unwrap();
        let ziz = zeros_of_ideal(&sys, &iz, 0.0).unwrap();
        ensure(ziz.set_eq(&sys, &z).unwrap(), || format!("ZIZ != Z at {}", i.render()))?;
        let izi = ideal_of_torus_set(&sys, &ziz).unwrap();
        ensure(ideal_inclusion(&sys, &izi, &iz).unwrap() && ideal_inclusion(&sys, &iz, &izi).unwrap(), || {
            format!("IZI != I at {}", iz.render())
        })?;
    }

    // gen(1 - d^p) against the matrix oracle on 360 roots
    let mut s = Sampler::new(SEED + 800);
    let cycles = [0usize, 1, 3, 6];
    for p in 1..=6i64 {
        let g = AlgebraElement::<Float>::one(&sys).sub(&AlgebraElement::delta(&sys, p)).unwrap();
        let ideal = IdealHandle::Generated(vec![g.clone()]);
        let z = zeros_of_ideal(&sys, &ideal, ZERO_TOL).unwrap();
        let mut zeros = Vec::new();
        for x in cycles {
            for k in 0..360 {
                let mu = unit_from_turns(k as f64 / 360.0);
                let oracle = matrix_zero(&torus_rep(&sigma, x, &mu, &table(&g)), ZERO_TOL);
                let got = z.contains(&sys, &Point::Finite(x), &Lambda::Numeric(mu)).unwrap();
                ensure(oracle == got, || format!("Z(gen(1-d^{p})) at (x{x}, {k}/360): oracle {oracle}, got {got}"))?;
                if oracle {
                    zeros.push((x, mu));
                }
            }
        }
        let iz = ideal_of_torus_set(&sys, &z).unwrap();
        for i in 0..100 {
            let a = match i % 3 {
                0 => s.element::<Float>(&sys, 3),
                1 => s.element::<Float>(&sys, 1).mul(&g).unwrap().mul(&s.element::<Float>(&sys, 1)).unwrap(),
                _ => s.member(&sys, &iz, 3).unwrap(),
            };
            let ta = table(&a);
            let oracle = zeros.iter().all(|(x, mu)| matrix_zero(&torus_rep(&sigma, *x, mu, &ta), ZERO_TOL));
            let got = iz.member(&sys, &a, ZERO_TOL).unwrap();
            ensure(oracle == got, || format!("I(Z(gen(1-d^{p}))) membership: oracle {oracle}, got {got}"))?;
        }
    }

    // Z(I) = Z(I*) for generated ideals, on the grid of 64 roots
    let mut nonempty = 0;
    for i in 0..50 {
        let ideal = random_generated(&sys, &mut s, i).unwrap();
        let IdealHandle::Generated(gens) = &ideal else { unreachable!() };
        let z = zeros_of_ideal(&sys, &ideal, ZERO_TOL).unwrap();
        let grid = |gs: &[AlgebraElement<Float>]| -> BTreeSet<(usize, usize)> {
            let mut out = BTreeSet::new();
            for x in cycles {
                for k in 0..64 {
                    let mu = unit_from_turns(k as f64 / 64.0);
                    if gs.iter().all(|g| matrix_zero(&torus_rep(&sigma, x, &mu, &table(g)), ZERO_TOL)) {
                        out.insert((x, k));
                    }
                }
            }
            out
        };
        let star: Vec<_> = gens.iter().map(|g| g.adj()).collect();
        let (gi, gs) = (grid(gens), grid(&star));
        ensure(gi == gs, || format!("grid zeros of I and I* differ for {}", ideal.render()))?;
        for x in cycles {
            for k in 0..64 {
                let got = z.contains(&sys, &Point::Finite(x), &Lambda::Numeric(unit_from_turns(k as f64 / 64.0))).unwrap();
                ensure(got == gi.contains(&(x, k)), || format!("Z({}) at (x{x}, {k}/64)", ideal.render()))?;
            }
        }
        ensure(adjoint_zeros_equal(&sys, &ideal, ZERO_TOL).unwrap(), || format!("Z(I) != Z(I*) for {}", ideal.render()))?;
        nonempty += !gi.is_empty() as usize;
    }
    ensure(nonempty > 0, || "every sampled generated ideal had empty zeros".into())?;
    Ok(format!("{cases} suite checks, 6 x 1440 grid points, 50 generated ideals ({nonempty} with zeros)"))
}

// ---------- 9. Galois connection laws ----------

fn criterion_9() -> Check {
    let mut total = 0;
    for name in ["galois.hk", "galois.HK", "galois.ZI"] {
        total += suite(name, 100)?;
    }
    let assumption = |r: crossprod::Result<crossprod::galois::LawReport>| -> Result<usize, String> {
        let r = r.map_err(|e| e.to_string())?;
        ensure(r.passed(), || r.failures.join("; "))?;
        Ok(r.checked)
    };
    let (pair, a, b) = classical_samples(SEED, 5, 100);
    total += assumption(check_assumption(&pair, &a, &b))?;
    total += assumption(check_assumption(&Swapped(pair), &b, &a))?;
    let sys = sample_system();
    let ia = ideal_samples::<Exact>(&sys, SEED, 100);
    let sets = ClosedSet::enumerate_invariant(&sys).unwrap();
    total += assumption(check_assumption(&HullKernel::<Exact>::new(sys.clone(), SEED), &ia, &sets))?;
    let fa = ideal_samples::<Float>(&sys, SEED, 100);
    let ts = torus_samples(&sys, SEED, 100).map_err(|e| e.to_string())?;
    total += assumption(check_assumption(&ZerosIdeals::new(sys.clone(), SEED), &fa, &ts))?;
    Ok(format!("{total} checks over the three pairs, assumption included"))
}

// ---------- 10. averaging ----------

/// `(1/M) Σ_{j<M} e^{2πi j x}` summed term by term.
fn dirichlet_brute(x: f64, m: u64) -> C64 {
    (0..m).map(|j| unit_from_turns((j as f64 * x).rem_euclid(1.0))).sum::<C64>() / m as f64
}

fn criterion_10() -> Check {
    let start = Instant::now();
    let sys = Arc::new(System::golden_rotation());
    let theta = (5f64.sqrt() - 1.0) / 2.0;
    let mut s = Sampler::new(SEED + 1000);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let a = unit_wiener_element(&sys, &mut s).unwrap();
        let rep = drive_to_e(&a, AVERAGING_EPS, 16).unwrap();
        ensure(rep.reached && rep.final_order() <= AVERAGING_MAX_ORDER, || {
            format!("residual {} at order {}", rep.final_residual(), rep.final_order())
        })?;
        let mut damp: BTreeMap<i64, f64> = a.support().map(|n| (n, 1.0)).collect();
        for round in rep.rounds.iter().skip(1) {
            let mut predicted = 0.0;
            for (n, d) in damp.iter_mut() {
                let brute = dirichlet_brute(*n as f64 * theta, round.order);
                // closed form (1 - w^M) / (M (1 - w)), w = e^{2πi nθ}
                let w = unit_from_turns((*n as f64 * theta).rem_euclid(1.0));
                let closed = if *n == 0 { C64::new(1.0, 0.0) } else { (C64::new(1.0, 0.0) - w.powu(round.order as u32)) / ((C64::new(1.0, 0.0) - w) * round.order as f64) };
                ensure((brute - closed).norm() < 1e-9, || format!("Dirichlet mean at n = {n}, M = {}", round.order))?;
                *d *= brute.norm();
                if *n != 0 {
                    predicted += a.coeff(*n).algnorm() * *d;
                }
            }
            let err = (round.residual - predicted).abs() / predicted.max(1e-300);
            worst = worst.max(err);
            ensure(err <= RESIDUAL_REL_TOL || (round.residual - predicted).abs() <= 1e-12, || {
                format!("round {}: residual {} but predicted {predicted}", round.round, round.residual)
            })?;
        }
    }
    let third = Arc::new(System::rotation(Theta::Surd { p: 1, q: 0, r: 1, d: 3 }, false).unwrap());
    let a = unit_wiener_element(&third, &mut s).unwrap();
    let rep = drive_to_e(&a, AVERAGING_EPS, 16).unwrap();
    let resonant: Vec<i64> = a.support().filter(|n| *n != 0 && n % 3 == 0).collect();
    let floor: f64 = resonant.iter().map(|n| a.coeff(*n).algnorm()).sum();
    ensure(!rep.reached && rep.resonant == resonant, || format!("θ = 1/3: reached {}, resonant {:?}", rep.reached, rep.resonant))?;
    ensure(rep.final_residual() >= floor * (1.0 - 1e-9), || format!("θ = 1/3 residual {} below the resonant floor {floor}", rep.final_residual()))?;
    let elapsed = start.elapsed();
    ensure(elapsed < AVERAGING_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("10 elements reached {AVERAGING_EPS}, worst relative residual error {worst:.1e}, θ = 1/3 stalls at {resonant:?}, {elapsed:.2?}"))
}

// ---------- 11. dual action ----------

fn criterion_11() -> Check {
    let cases = suite("algebra.dual", 200)?;
    let mut s = Sampler::new(SEED + 1100);
    let mut controls = 0;
    for (idx, sys) in [two_three(), shift(), shift_and_cycle()].into_iter().enumerate() {
        for i in 0..200 {
            let r = (i % 5) as i64;
            let a = s.element::<Exact>(&sys, r);
            let m = 2 * a.radius() + 1 + (i as u64 % 4);
            ensure(a.dual_average(m).unwrap() == a.e0_elem(), || format!("{sys}: order {m} on {}", a.render()))?;
            // at order M = radius the top coefficient survives
            let rad = a.radius();
            if rad > 0 && !a.coeff(rad as i64).is_zero(0.0) {
                ensure(a.dual_average(rad).unwrap() != a.e0_elem(), || format!("{sys}: order {rad} already equals E(a)"))?;
                controls += 1;
            }
            if idx == 0 {
                // the same average with numeric roots of unity
                let f = s.element::<Float>(&sys, r);
                let m = 2 * f.radius() + 1 + (i as u64 % 4);
                let mut acc = AlgebraElement::<Float>::zero(&sys);
                for k in 0..m {
                    acc = acc.add(&f.dual_action(&unit_from_turns(k as f64 / m as f64))).unwrap();
                }
                let acc = acc.scale(&Float::new(1.0 / m as f64, 0.0));
                ensure(acc.approx_eq(&f.e0_elem(), FLOAT_TOL), || format!("numeric average of order {m}"))?;
            }
        }
    }
    Ok(format!("{cases} suite checks, 600 exact cases, {controls} controls at M = radius"))
}

// ---------- 12. command line ----------

fn criterion_12() -> Check {
    let mismatched = common::golden_mismatches(false);
    ensure(mismatched.is_empty(), || format!("golden mismatch: {}", mismatched.join("\n")))?;
    let accepted = common::fuzz_parsers(common::FUZZ_INPUTS, SEED);
    Ok(format!("{} golden reports byte-exact, {} fuzz inputs without a crash ({accepted} accepted)", common::MATRIX.len(), common::FUZZ_INPUTS))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("algebra axioms", criterion_1),
        ("conditional expectation", criterion_2),
        ("representations and P_x,λ membership", criterion_3),
        ("Q_x as an intersection over roots of unity", criterion_4),
        ("inclusion table", criterion_5),
        ("plain-ideal witness", criterion_6),
        ("hull-kernel laws", criterion_7),
        ("zero sets and ideals", criterion_8),
        ("Galois connection laws", criterion_9),
        ("averaging to the expectation", criterion_10),
        ("dual action average", criterion_11),
        ("command line goldens and fuzzing", criterion_12),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("[{:02}] PASS {name}: {detail} ({t:.2?})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[{:02}] FAIL {name}: {detail} ({t:.2?})", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
