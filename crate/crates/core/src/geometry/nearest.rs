//! Minimum-norm point of the convex hull of a finite point set (Wolfe's
//! algorithm). Terminates in finitely many steps and works in any dimension,
//! which is all the exact excess computation needs.

use crate::linalg::{dot, solve, sub};

const REL_TOL: f64 = 1e-13;

/// Returns the point of conv(`points`) closest to the origin.
pub fn min_norm_point(points: &[Vec<f64>]) -> Vec<f64> {
    assert!(!points.is_empty(), "min_norm_point on empty set");
    if points.len() == 1 {
        return points[0].clone();
    }
    let scale2 = points.iter().map(|p| dot(p, p)).fold(0.0_f64, f64::max).max(f64::MIN_POSITIVE);
    let start =
        (0..points.len()).min_by(|&a, &b| dot(&points[a], &points[a]).total_cmp(&dot(&points[b], &points[b]))).unwrap();

    let mut active = vec![start];
    let mut weights = vec![1.0];
    let mut x = points[start].clone();

    for _ in 0..(50 * points.len() + 100) {
        if dot(&x, &x) <= REL_TOL * REL_TOL * scale2 {
            return x;
        }
        let j = (0..points.len()).min_by(|&a, &b| dot(&x, &points[a]).total_cmp(&dot(&x, &points[b]))).unwrap();
        if dot(&x, &x) - dot(&x, &points[j]) <= REL_TOL * scale2 || active.contains(&j) {
            return x;
        }
        active.push(j);
        weights.push(0.0);

        loop {
            let Some(alpha) = affine_minimizer(points, &active) else {
                // Affinely dependent corral: drop the newest point and stop.
                active.pop();
                weights.pop();
                return combine(points, &active, &weights);
            };
            if alpha.iter().all(|&a| a > REL_TOL) {
                weights = alpha;
                x = combine(points, &active, &weights);
                break;
            }
            let mut theta = 1.0_f64;
            for (w, a) in weights.iter().zip(&alpha) {
                if *a <= REL_TOL && w - a > 0.0 {
                    theta = theta.min(w / (w - a));
                }
            }
            for (w, a) in weights.iter_mut().zip(&alpha) {
                *w = theta * a + (1.0 - theta) * *w;
            }
            let mut k = 0;
            let mut removed = false;
            while k < active.len() {
                if weights[k] <= REL_TOL {
                    active.remove(k);
                    weights.remove(k);
                    removed = true;
                } else {
                    k += 1;
                }
            }
            if !removed {
                // Guard against a stalled step: drop the smallest weight.
                let kmin = (0..weights.len()).min_by(|&a, &b| weights[a].total_cmp(&weights[b])).unwrap();
                active.remove(kmin);
                weights.remove(kmin);
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            x = combine(points, &active, &weights);
            if active.len() == 1 {
                break;
            }
        }
    }
    x
}

fn combine(points: &[Vec<f64>], active: &[usize], weights: &[f64]) -> Vec<f64> {
    let d = points[0].len();
    let mut x = vec![0.0; d];
    for (&i, &w) in active.iter().zip(weights) {
        for (xk, pk) in x.iter_mut().zip(&points[i]) {
            *xk += w * pk;
        }
    }
    x
}

/// Weights of the minimum-norm point of the affine hull of the active points.
fn affine_minimizer(points: &[Vec<f64>], active: &[usize]) -> Option<Vec<f64>> {
    let k = active.len();
    if k == 1 {
        return Some(vec![1.0]);
    }
    let p0 = &points[active[0]];
    let q: Vec<Vec<f64>> = active[1..].iter().map(|&i| sub(&points[i], p0)).collect();
    let n = k - 1;
    let mut gram = vec![0.0; n * n];
    let mut rhs = vec![0.0; n];
    let mut diag_max = 0.0_f64;
    for a in 0..n {
        for b in 0..n {
            gram[a * n + b] = dot(&q[a], &q[b]);
        }
        diag_max = diag_max.max(gram[a * n + a]);
        rhs[a] = -dot(&q[a], p0);
    }
    let beta = solve(gram, rhs, 1e-14 * diag_max.max(f64::MIN_POSITIVE))?;
    let mut alpha = Vec::with_capacity(k);
    alpha.push(1.0 - beta.iter().sum::<f64>());
    alpha.extend(beta);
    Some(alpha)
}

/// Euclidean distance from `p` to conv(`vertices`).
pub fn distance_to_hull(p: &[f64], vertices: &[Vec<f64>]) -> f64 {
    let shifted: Vec<Vec<f64>> = vertices.iter().map(|v| sub(v, p)).collect();
    let x = min_norm_point(&shifted);
    dot(&x, &x).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_inside_triangle() {
        let pts = vec![vec![-1.0, -1.0], vec![2.0, -1.0], vec![-1.0, 2.0]];
        let x = min_norm_point(&pts);
        assert!(dot(&x, &x).sqrt() < 1e-12);
    }

    #[test]
    fn nearest_on_edge() {
        let pts = vec![vec![1.0, -1.0], vec![1.0, 1.0], vec![3.0, 0.0]];
        let x = min_norm_point(&pts);
        assert!((x[0] - 1.0).abs() < 1e-12 && x[1].abs() < 1e-12);
    }

    #[test]
    fn nearest_vertex_3d() {
        let pts = vec![vec![1.0, 1.0, 1.0], vec![2.0, 1.0, 1.0], vec![1.0, 2.0, 1.0], vec![1.0, 1.0, 2.0]];
        let x = min_norm_point(&pts);
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12 && (x[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distance_to_square() {
        let sq = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        assert!((distance_to_hull(&[2.0, 2.0], &sq) - 2f64.sqrt()).abs() < 1e-12);
        assert!((distance_to_hull(&[0.5, 3.0], &sq) - 2.0).abs() < 1e-12);
        assert!(distance_to_hull(&[0.3, 0.4], &sq) < 1e-12);
    }

    #[test]
    fn matches_brute_force_segment_search() {
        // Oracle: dense sampling of convex combinations of a triangle.
        let tri = vec![vec![0.5, 0.2], vec![2.0, 1.0], vec![0.7, 1.8]];
        let p = [-0.4, -0.9];
        let mut best = f64::INFINITY;
        let n = 400;
        for i in 0..=n {
            for j in 0..=(n - i) {
                let a = i as f64 / n as f64;
                let b = j as f64 / n as f64;
                let c = 1.0 - a - b;
                let q = [a * tri[0][0] + b * tri[1][0] + c * tri[2][0], a * tri[0][1] + b * tri[1][1] + c * tri[2][1]];
                best = best.min(((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt());
            }
        }
        let d = distance_to_hull(&p, &tri);
        assert!(d <= best + 1e-12);
        assert!(best - d < 1e-4);
    }
}
