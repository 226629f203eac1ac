//! Workloads shared by the benchmarks.

use origami_core::{fold, AbstractOrigami, FoldSpec, Point, Ray};

/// Folds the unit square in half `n` times, alternating vertical and
/// horizontal creases, so layer count doubles each step.
pub fn halvings(n: usize) -> AbstractOrigami {
    let mut ao = AbstractOrigami::init_square(["A", "B", "C", "D"], None).expect("unit square");
    let (mut w, mut h) = (1.0, 1.0);
    for i in 0..n {
        let ray = if i % 2 == 0 {
            w /= 2.0;
            Ray::new(Point::new(w, 0.0), Point::new(w, 1.0))
        } else {
            h /= 2.0;
            Ray::new(Point::new(1.0, h), Point::new(0.0, h))
        };
        ao = fold(&ao, &FoldSpec::valley(ray.expect("distinct points"))).expect("halving fold");
    }
    ao
}
