//! Extreme points, halfspace descriptions and vertex enumeration for point
//! sets in dimensions 1 to 3.

use super::nearest::distance_to_hull;
use crate::linalg::{cross, dot, lex_cmp, norm, scale, solve, sub};

/// `normal . x <= offset` with a unit `normal`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

pub(crate) fn coord_scale(points: &[Vec<f64>]) -> f64 {
    points.iter().flat_map(|p| p.iter()).fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn dedup_sorted(mut pts: Vec<Vec<f64>>, eps: f64) -> Vec<Vec<f64>> {
    pts.sort_by(|a, b| lex_cmp(a, b));
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(pts.len());
    for p in pts {
        if !out.iter().any(|q| crate::linalg::dist(q, &p) <= eps) {
            out.push(p);
        }
    }
    out
}

/// Extreme points of conv(`points`), sorted lexicographically.
pub fn extreme_points(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let d = points[0].len();
    let eps = 1e-12 * (1.0 + coord_scale(points));
    match d {
        1 => {
            let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            if hi - lo <= eps {
                vec![vec![lo]]
            } else {
                vec![vec![lo], vec![hi]]
            }
        }
        2 => {
            let mut hull = convex_polygon(points);
            hull.sort_by(|a, b| lex_cmp(a, b));
            hull
        }
        _ => {
            let mut pts = dedup_sorted(points.to_vec(), eps);
            let tol = 1e-10 * (1.0 + coord_scale(&pts));
            let mut i = 0;
            while i < pts.len() && pts.len() > 1 {
                let p = pts[i].clone();
                let others: Vec<Vec<f64>> =
                    pts.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, q)| q.clone()).collect();
                if distance_to_hull(&p, &others) <= tol {
                    pts.remove(i);
                } else {
                    i += 1;
                }
            }
            pts
        }
    }
}

fn cross2(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Convex polygon vertices in counter-clockwise order (monotone chain).
/// Collinear boundary points are dropped; degenerate inputs return one or
/// two points.
pub fn convex_polygon(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let scale = coord_scale(points);
    let eps = 1e-12 * (1.0 + scale);
    let pts = dedup_sorted(points.to_vec(), eps);
    if pts.len() <= 2 {
        return pts;
    }
    let area_eps = 1e-12 * (1.0 + scale * scale);
    let mut lower: Vec<Vec<f64>> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross2(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= area_eps {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<f64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross2(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= area_eps {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && crate::linalg::dist(&lower[0], &lower[1]) <= eps {
        lower.truncate(1);
    }
    lower
}

/// Greedy orthonormal frame of the affine hull: (origin, basis).
fn affine_frame(points: &[Vec<f64>], eps: f64) -> (Vec<f64>, Vec<Vec<f64>>) {
    let origin = points[0].clone();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let d = origin.len();
    while basis.len() < d {
        let mut best: Option<(f64, Vec<f64>)> = None;
        for p in points {
            let mut r = sub(p, &origin);
            for b in &basis {
                let c = dot(&r, b);
                r = sub(&r, &scale(c, b));
            }
            let n = norm(&r);
            if best.as_ref().is_none_or(|(bn, _)| n > *bn) {
                best = Some((n, r));
            }
        }
        match best {
            Some((n, r)) if n > eps => basis.push(scale(1.0 / n, &r)),
            _ => break,
        }
    }
    (origin, basis)
}

fn complete_basis(basis: &[Vec<f64>], d: usize) -> Vec<Vec<f64>> {
    let mut out = basis.to_vec();
    for k in 0..d {
        if out.len() == d {
            break;
        }
        let mut r = vec![0.0; d];
        r[k] = 1.0;
        for b in &out {
            let c = dot(&r, b);
            r = sub(&r, &scale(c, b));
        }
        let n = norm(&r);
        if n > 1e-6 {
            out.push(scale(1.0 / n, &r));
        }
    }
    out[basis.len()..].to_vec()
}

fn support_of(points: &[Vec<f64>], n: &[f64]) -> f64 {
    points.iter().map(|p| dot(p, n)).fold(f64::NEG_INFINITY, f64::max)
}

fn push_unique(out: &mut Vec<Halfspace>, normal: Vec<f64>, points: &[Vec<f64>]) {
    if out.iter().any(|h| crate::linalg::dist(&h.normal, &normal) < 1e-9) {
        return;
    }
    let offset = support_of(points, &normal);
    out.push(Halfspace { normal, offset });
}

/// Halfspace description of conv(`points`). Lower-dimensional hulls are
/// described with pairs of opposite halfspaces.
pub fn halfspaces(points: &[Vec<f64>]) -> Vec<Halfspace> {
    let d = points[0].len();
    let scale_pts = coord_scale(points);
    let eps = 1e-10 * (1.0 + scale_pts);
    let verts = extreme_points(points);
    let mut out = Vec::new();
    let (_, basis) = affine_frame(&verts, eps);
    let rank = basis.len();
    if rank < d {
        for n in complete_basis(&basis, d) {
            push_unique(&mut out, n.clone(), &verts);
            push_unique(&mut out, scale(-1.0, &n), &verts);
        }
    }
    match rank {
        0 => {}
        1 => {
            push_unique(&mut out, basis[0].clone(), &verts);
            push_unique(&mut out, scale(-1.0, &basis[0]), &verts);
        }
        2 => {
            // Hull inside a plane (d = 2 full, or d = 3 flat).
            let origin = &verts[0];
            let coords: Vec<Vec<f64>> = verts
                .iter()
                .map(|p| {
                    let r = sub(p, origin);
                    vec![dot(&r, &basis[0]), dot(&r, &basis[1])]
                })
                .collect();
            let poly = convex_polygon(&coords);
            for k in 0..poly.len() {
                let a = &poly[k];
                let b = &poly[(k + 1) % poly.len()];
                let e = [b[0] - a[0], b[1] - a[1]];
                let len = (e[0] * e[0] + e[1] * e[1]).sqrt();
                let mut n2 = [e[1] / len, -e[0] / len];
                // The frame may reverse orientation; point away from the polygon.
                let c = &poly[(k + 2) % poly.len()];
                if n2[0] * (c[0] - a[0]) + n2[1] * (c[1] - a[1]) > 0.0 {
                    n2 = [-n2[0], -n2[1]];
                }
                let n: Vec<f64> = (0..d).map(|i| n2[0] * basis[0][i] + n2[1] * basis[1][i]).collect();
                let nn = norm(&n);
                push_unique(&mut out, scale(1.0 / nn, &n), &verts);
            }
        }
        _ => {
            // Full-dimensional in R^3: enumerate supporting planes through
            // vertex triples.
            let n_v = verts.len();
            for i in 0..n_v {
                for j in i + 1..n_v {
                    for k in j + 1..n_v {
                        let c = cross(&sub(&verts[j], &verts[i]), &sub(&verts[k], &verts[i]));
                        let cn = norm(&c);
                        if cn <= eps * (1.0 + scale_pts) {
                            continue;
                        }
                        let n: Vec<f64> = c.iter().map(|x| x / cn).collect();
                        let h = dot(&n, &verts[i]);
                        let (lo, hi) = verts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                            let v = dot(&n, p);
                            (lo.min(v), hi.max(v))
                        });
                        if hi <= h + eps {
                            push_unique(&mut out, n, &verts);
                        } else if lo >= h - eps {
                            push_unique(&mut out, scale(-1.0, &n), &verts);
                        }
                    }
                }
            }
        }
    }
    out
}

/// Vertices of `{x : n_i . x <= h_i}` for d in {2, 3}, or `None` if empty.
pub fn enumerate_vertices(hs: &[Halfspace], d: usize, eps: f64) -> Option<Vec<Vec<f64>>> {
    let mut found: Vec<Vec<f64>> = Vec::new();
    let feasible = |x: &[f64]| hs.iter().all(|h| dot(&h.normal, x) <= h.offset + eps);
    let mut consider = |idx: &[usize]| {
        let mut m = Vec::with_capacity(d * d);
        let mut rhs = Vec::with_capacity(d);
        for &i in idx {
            m.extend_from_slice(&hs[i].normal);
            rhs.push(hs[i].offset);
        }
        if let Some(x) = solve(m, rhs, 1e-9) {
            if feasible(&x) {
                found.push(x);
            }
        }
    };
    let n = hs.len();
    match d {
        1 => {
            for i in 0..n {
                consider(&[i]);
            }
        }
        2 => {
            for i in 0..n {
                for j in i + 1..n {
                    consider(&[i, j]);
                }
            }
        }
        3 => {
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        consider(&[i, j, k]);
                    }
                }
            }
        }
        _ => return None,
    }
    if found.is_empty() {
        None
    } else {
        Some(extreme_points(&found))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[&[f64]]) -> Vec<Vec<f64>> {
        v.iter().map(|p| p.to_vec()).collect()
    }

    #[test]
    fn polygon_drops_interior_and_collinear() {
        let p = pts(&[&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0], &[2.0, 2.0], &[0.0, 2.0], &[1.0, 1.0]]);
        let hull = convex_polygon(&p);
        assert_eq!(hull.len(), 4);
        assert_eq!(extreme_points(&p), pts(&[&[0.0, 0.0], &[0.0, 2.0], &[2.0, 0.0], &[2.0, 2.0]]));
    }

    #[test]
    fn cube_extreme_points_3d() {
        let mut p = Vec::new();
        for x in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for z in [0.0, 1.0] {
                    p.push(vec![x, y, z]);
                }
            }
        }
        p.push(vec![0.5, 0.5, 0.5]);
        p.push(vec![0.5, 0.0, 0.0]);
        p.push(vec![0.0, 0.0, 0.0]);
        let e = extreme_points(&p);
        assert_eq!(e.len(), 8);
        assert_eq!(halfspaces(&p).len(), 6);
    }

    #[test]
    fn segment_halfspaces_2d() {
        let p = pts(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let hs = halfspaces(&p);
        assert_eq!(hs.len(), 4);
        let v = enumerate_vertices(&hs, 2, 1e-9).unwrap();
        assert_eq!(v, p);
    }

    #[test]
    fn flat_triangle_in_3d() {
        let p = pts(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 1.0], &[0.0, 1.0, 1.0]]);
        let hs = halfspaces(&p);
        assert_eq!(hs.len(), 5);
        let v = enumerate_vertices(&hs, 3, 1e-9).unwrap();
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn empty_intersection() {
        let hs = vec![
            Halfspace { normal: vec![1.0, 0.0], offset: -1.0 },
            Halfspace { normal: vec![-1.0, 0.0], offset: -1.0 },
            Halfspace { normal: vec![0.0, 1.0], offset: 1.0 },
            Halfspace { normal: vec![0.0, -1.0], offset: 1.0 },
        ];
        assert!(enumerate_vertices(&hs, 2, 1e-9).is_none());
    }
}
