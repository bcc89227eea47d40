//! Order-reversing map pairs `α: A -> B`, `β: B -> A` with `βα` and `αβ`
//! extensive, and checks of the laws such pairs satisfy.
//!
//! Nothing beyond antisymmetry is assumed of the relations; equality is
//! `x ≺ y` and `y ≺ x`.

use crate::error::Result;

pub mod instances;

pub trait GaloisPair {
    type A: Clone;
    type B: Clone;

    fn name(&self) -> String;
    fn alpha(&self, a: &Self::A) -> Result<Self::B>;
    fn beta(&self, b: &Self::B) -> Result<Self::A>;
    /// `x ≺ y` in `A`.
    fn prec_a(&self, x: &Self::A, y: &Self::A) -> Result<bool>;
    /// `x ≺ y` in `B`.
    fn prec_b(&self, x: &Self::B, y: &Self::B) -> Result<bool>;
    fn show_a(&self, a: &Self::A) -> String;
    fn show_b(&self, b: &Self::B) -> String;

    fn eq_a(&self, x: &Self::A, y: &Self::A) -> Result<bool> {
        Ok(self.prec_a(x, y)? && self.prec_a(y, x)?)
    }

    fn eq_b(&self, x: &Self::B, y: &Self::B) -> Result<bool> {
        Ok(self.prec_b(x, y)? && self.prec_b(y, x)?)
    }
}

/// The same pair read in the other direction.
pub struct Swapped<P>(pub P);

impl<P: GaloisPair> GaloisPair for Swapped<P> {
    type A = P::B;
    type B = P::A;

    fn name(&self) -> String {
        format!("{} (swapped)", self.0.name())
    }
    fn alpha(&self, a: &P::B) -> Result<P::A> {
        self.0.beta(a)
    }
    fn beta(&self, b: &P::A) -> Result<P::B> {
        self.0.alpha(b)
    }
    fn prec_a(&self, x: &P::B, y: &P::B) -> Result<bool> {
        self.0.prec_b(x, y)
    }
    fn prec_b(&self, x: &P::A, y: &P::A) -> Result<bool> {
        self.0.prec_a(x, y)
    }
    fn show_a(&self, a: &P::B) -> String {
        self.0.show_b(a)
    }
    fn show_b(&self, b: &P::A) -> String {
        self.0.show_a(b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LawReport {
    pub law: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl LawReport {
    fn new(law: &str) -> Self {
        LawReport { law: law.into(), checked: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.failures.len() < 5 {
            self.failures.push(witness());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `a ≺ βα(a)`, `b ≺ αβ(b)`, and both maps reverse the order on comparable sample pairs.
pub fn check_assumption<P: GaloisPair>(p: &P, as_: &[P::A], bs: &[P::B]) -> Result<LawReport> {
    let mut r = LawReport::new("assumption");
    for a in as_ {
        let ba = p.beta(&p.alpha(a)?)?;
        r.record(p.prec_a(a, &ba)?, || format!("βα not extensive at {}", p.show_a(a)));
    }
    for b in bs {
        let ab = p.alpha(&p.beta(b)?)?;
        r.record(p.prec_b(b, &ab)?, || format!("αβ not extensive at {}", p.show_b(b)));
    }
    for x in as_ {
        for y in as_ {
            if p.prec_a(x, y)? {
                let ok = p.prec_b(&p.alpha(y)?, &p.alpha(x)?)?;
                r.record(ok, || format!("α not order reversing on {} ≺ {}", p.show_a(x), p.show_a(y)));
            }
        }
    }
    for x in bs {
        for y in bs {
            if p.prec_b(x, y)? {
                let ok = p.prec_a(&p.beta(y)?, &p.beta(x)?)?;
                r.record(ok, || format!("β not order reversing on {} ≺ {}", p.show_b(x), p.show_b(y)));
            }
        }
    }
    Ok(r)
}

/// `αβα = α` and `βαβ = β`.
pub fn check_three_maps<P: GaloisPair>(p: &P, as_: &[P::A], bs: &[P::B]) -> Result<LawReport> {
    let mut r = LawReport::new("three maps");
    for a in as_ {
        let al = p.alpha(a)?;
        let aba = p.alpha(&p.beta(&al)?)?;
        r.record(p.eq_b(&aba, &al)?, || format!("αβα != α at {}", p.show_a(a)));
    }
    for b in bs {
        let be = p.beta(b)?;
        let bab = p.beta(&p.alpha(&be)?)?;
        r.record(p.eq_a(&bab, &be)?, || format!("βαβ != β at {}", p.show_b(b)));
    }
    Ok(r)
}

/// `(βα)² = βα`, images are fixed points, and a fixed point is the only fixed
/// point with its image.
pub fn check_fixed_point_laws<P: GaloisPair>(p: &P, as_: &[P::A], bs: &[P::B]) -> Result<Vec<LawReport>> {
    let mut idem = LawReport::new("idempotence and images");
    let mut single = LawReport::new("singleton preimage");
    let fixed = fixed_candidates(p, as_, bs)?;
    for a in as_ {
        let ba = p.beta(&p.alpha(a)?)?;
        let baba = p.beta(&p.alpha(&ba)?)?;
        idem.record(p.eq_a(&baba, &ba)?, || format!("(βα)² != βα at {}", p.show_a(a)));
    }
    for b in bs {
        let be = p.beta(b)?;
        let fixed_b = p.beta(&p.alpha(&be)?)?;
        idem.record(p.eq_a(&fixed_b, &be)?, || format!("β({}) is not fixed by βα", p.show_b(b)));
        let ab = p.alpha(&p.beta(b)?)?;
        let abab = p.alpha(&p.beta(&ab)?)?;
        idem.record(p.eq_b(&abab, &ab)?, || format!("(αβ)² != αβ at {}", p.show_b(b)));
    }
    for a in as_ {
        let al = p.alpha(a)?;
        let ba = p.beta(&al)?;
        for c in &fixed {
            if p.eq_b(&p.alpha(c)?, &al)? {
                single.record(p.eq_a(c, &ba)?, || {
                    format!("{} is fixed with the image of {} but differs from βα", p.show_a(c), p.show_a(a))
                });
            }
        }
    }
    Ok(vec![idem, single])
}

fn fixed_candidates<P: GaloisPair>(p: &P, as_: &[P::A], bs: &[P::B]) -> Result<Vec<P::A>> {
    let mut out = Vec::with_capacity(as_.len() + bs.len());
    for a in as_ {
        out.push(p.beta(&p.alpha(a)?)?);
    }
    for b in bs {
        out.push(p.beta(b)?);
    }
    Ok(out)
}

/// `βα(a)` is the least fixed point above `a` among `candidates` (all of which are fixed).
pub fn check_min_max<P: GaloisPair>(p: &P, a: &P::A, candidates: &[P::A]) -> Result<LawReport> {
    let mut r = LawReport::new("least fixed point above");
    let ba = p.beta(&p.alpha(a)?)?;
    r.record(p.prec_a(a, &ba)?, || format!("{} is not below its closure", p.show_a(a)));
    for c in candidates {
        if p.prec_a(a, c)? {
            r.record(p.prec_a(&ba, c)?, || {
                format!("closure of {} is not below the fixed point {}", p.show_a(a), p.show_a(c))
            });
        }
    }
    Ok(r)
}

/// For a fixed `a`: `a' ≺ a` iff `α(a) ≺ α(a')`, over `others`.
pub fn check_order_reflection<P: GaloisPair>(p: &P, a: &P::A, others: &[P::A]) -> Result<LawReport> {
    let mut r = LawReport::new("order reflection");
    let al = p.alpha(a)?;
    for o in others {
        let lhs = p.prec_a(o, a)?;
        let rhs = p.prec_b(&al, &p.alpha(o)?)?;
        r.record(lhs == rhs, || {
            format!("{} ≺ {} is {lhs} but the images compare {rhs}", p.show_a(o), p.show_a(a))
        });
    }
    Ok(r)
}

/// Every law, over all samples: reflection is checked at the fixed points `βα(a)`.
pub fn check_all<P: GaloisPair>(p: &P, as_: &[P::A], bs: &[P::B]) -> Result<Vec<LawReport>> {
    let mut out = vec![check_assumption(p, as_, bs)?, check_three_maps(p, as_, bs)?];
    out.extend(check_fixed_point_laws(p, as_, bs)?);
    let fixed = fixed_candidates(p, as_, bs)?;
    let mut minr = LawReport::new("least fixed point above");
    let mut refl = LawReport::new("order reflection");
    for a in as_ {
        let m = check_min_max(p, a, &fixed)?;
        minr.checked += m.checked;
        minr.failures.extend(m.failures.into_iter().take(5usize.saturating_sub(minr.failures.len())));
        let ba = p.beta(&p.alpha(a)?)?;
        let o = check_order_reflection(p, &ba, as_)?;
        refl.checked += o.checked;
        refl.failures.extend(o.failures.into_iter().take(5usize.saturating_sub(refl.failures.len())));
    }
    out.push(minr);
    out.push(refl);
    Ok(out)
}
