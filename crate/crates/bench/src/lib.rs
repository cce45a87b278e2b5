//! Deterministic inputs shared by the kernel benchmarks.

use std::f64::consts::TAU;

use setbm::ConvexSet;

/// A convex polygon with `n` vertices on an ellipse with semi-axes `(a, b)`,
/// rotated by `phase` and centered at `center`.
pub fn ellipse_polygon(n: usize, a: f64, b: f64, phase: f64, center: [f64; 2]) -> ConvexSet {
    let pts = (0..n)
        .map(|k| {
            let t = TAU * k as f64 / n as f64;
            let (x, y) = (a * t.cos(), b * t.sin());
            let (s, c) = phase.sin_cos();
            vec![center[0] + c * x - s * y, center[1] + s * x + c * y]
        })
        .collect();
    ConvexSet::polytope(pts).expect("ellipse vertices are finite")
}

/// A pair of polygons with `n` vertices each where the second fits inside
/// the first, so the difference exists.
pub fn nested_pair(n: usize) -> (ConvexSet, ConvexSet) {
    (ellipse_polygon(n, 3.0, 2.0, 0.3, [0.5, -0.25]), ellipse_polygon(n, 1.0, 0.5, 0.3, [0.0, 0.0]))
}

/// A pair of polygons with `n` vertices each in general position.
pub fn crossing_pair(n: usize) -> (ConvexSet, ConvexSet) {
    (ellipse_polygon(n, 2.0, 1.0, 0.0, [0.0, 0.0]), ellipse_polygon(n, 1.5, 1.25, 1.1, [0.4, 0.2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_keep_every_vertex() {
        for n in [3, 16, 64] {
            let (a, b) = crossing_pair(n);
            assert_eq!(a.as_vertices().unwrap().len(), n);
            assert_eq!(b.as_vertices().unwrap().len(), n);
        }
        let (a, b) = nested_pair(32);
        assert!(b.is_subset_of(&a).unwrap());
    }
}
