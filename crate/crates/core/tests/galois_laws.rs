use crossprod::galois::instances::{ideal_samples, sample_system, torus_samples, HullKernel, ZerosIdeals};
use crossprod::galois::{check_all, Swapped};
use crossprod::{ClosedSet, Exact, Float};

#[test]
fn hull_kernel_laws() {
    let sys = sample_system();
    let pair = HullKernel::<Exact>::new(sys.clone(), 1);
    let a = ideal_samples::<Exact>(&sys, 2, 40);
    let b = ClosedSet::enumerate_invariant(&sys).unwrap();
    for r in check_all(&pair, &a, &b).unwrap() {
        assert!(r.passed(), "{r:?}");
    }
    let sw = Swapped(HullKernel::<Exact>::new(sys.clone(), 1));
    for r in check_all(&sw, &b, &a).unwrap() {
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn zeros_ideal_laws() {
    let sys = sample_system();
    let pair = ZerosIdeals::new(sys.clone(), 1);
    let a = ideal_samples::<Float>(&sys, 2, 40);
    let b = torus_samples(&sys, 3, 20).unwrap();
    for r in check_all(&pair, &a, &b).unwrap() {
        assert!(r.passed(), "{r:?}");
    }
}
