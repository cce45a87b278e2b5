use serde::{Deserialize, Serialize};

use super::hull::{self, Halfspace};
use super::nearest::distance_to_hull;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{add, dist, dot, norm, scale};

/// A unit vector of the dual sphere. In R^1 the only directions are -1 and +1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Direction(Vec<f64>);

impl Direction {
    pub const NORM_TOL: f64 = 1e-12;

    /// Wraps a vector that is already unit length.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() || components.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidDirection(format!("{components:?}")));
        }
        let n = norm(&components);
        if (n - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::InvalidDirection(format!("norm {n} is not 1")));
        }
        Ok(Self(components))
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(components: Vec<f64>) -> Result<Self> {
        let n = norm(&components);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidDirection(format!("cannot normalize {components:?}")));
        }
        Self::new(components.into_iter().map(|x| x / n).collect())
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn opposite(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }
}

/// A nonempty compact convex subset of R^d.
///
/// Polytopes are stored in canonical form: extreme points only, sorted
/// lexicographically. Construct values through the checked constructors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexSet {
    Interval { lo: f64, hi: f64 },
    Ball { center: Vec<f64>, radius: f64 },
    Polytope { vertices: Vec<Vec<f64>> },
}

impl ConvexSet {
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::InvalidSet(format!("interval [{lo}, {hi}] needs lo <= hi")));
        }
        // `+ 0.0` maps -0 to 0 so equal sets serialize identically.
        Ok(Self::Interval { lo: lo + 0.0, hi: hi + 0.0 })
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if center.is_empty() {
            return Err(Error::InvalidSet("ball center has no coordinates".into()));
        }
        if center.iter().any(|x| !x.is_finite()) || !radius.is_finite() || radius < 0.0 {
            return Err(Error::InvalidSet(format!("ball({center:?}, {radius}) needs finite data and radius >= 0")));
        }
        Ok(Self::Ball { center: center.into_iter().map(|x| x + 0.0).collect(), radius: radius + 0.0 })
    }

    /// Closed unit ball of R^d.
    pub fn unit_ball(dim: usize) -> Self {
        if dim == 1 {
            Self::Interval { lo: -1.0, hi: 1.0 }
        } else {
            Self::Ball { center: vec![0.0; dim], radius: 1.0 }
        }
    }

    /// Convex hull of the given points, canonicalized.
    pub fn polytope(points: Vec<Vec<f64>>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidSet("polytope needs at least one vertex".into()));
        };
        let d = first.len();
        if d == 0 {
            return Err(Error::InvalidSet("polytope vertices have no coordinates".into()));
        }
        if d > 3 {
            return Err(Error::UnsupportedDimension(d));
        }
        for p in &points {
            check_dim(d, p.len())?;
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidSet(format!("non-finite vertex {p:?}")));
            }
        }
        let points: Vec<Vec<f64>> = points.into_iter().map(|p| p.into_iter().map(|x| x + 0.0).collect()).collect();
        Ok(Self::Polytope { vertices: hull::extreme_points(&points) })
    }

    /// The singleton {p}. Uses the interval form in R^1.
    pub fn point(p: Vec<f64>) -> Result<Self> {
        if p.len() == 1 {
            Self::interval(p[0], p[0])
        } else {
            Self::polytope(vec![p])
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Self::Interval { .. } => 1,
            Self::Ball { center, .. } => center.len(),
            Self::Polytope { vertices } => vertices[0].len(),
        }
    }

    pub(crate) fn kind(&self) -> &'static str {
        match self {
            Self::Interval { .. } => "interval",
            Self::Ball { .. } => "ball",
            Self::Polytope { .. } => "polytope",
        }
    }

    /// Vertex list when the set is a polytope in disguise: intervals,
    /// zero-radius balls, and any ball in R^1.
    pub fn as_vertices(&self) -> Option<Vec<Vec<f64>>> {
        match self {
            Self::Interval { lo, hi } => Some(if lo == hi { vec![vec![*lo]] } else { vec![vec![*lo], vec![*hi]] }),
            Self::Ball { center, radius } if *radius == 0.0 => Some(vec![center.clone()]),
            Self::Ball { center, radius } if center.len() == 1 => {
                Some(vec![vec![center[0] - radius], vec![center[0] + radius]])
            }
            Self::Ball { .. } => None,
            Self::Polytope { vertices } => Some(vertices.clone()),
        }
    }

    /// Endpoints when the set lives in R^1.
    pub fn as_interval(&self) -> Option<(f64, f64)> {
        if self.dimension() != 1 {
            return None;
        }
        match self {
            Self::Interval { lo, hi } => Some((*lo, *hi)),
            Self::Ball { center, radius } => Some((center[0] - radius, center[0] + radius)),
            Self::Polytope { vertices } => {
                let lo = vertices.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
                let hi = vertices.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
                Some((lo, hi))
            }
        }
    }

    /// The point, if this set is a singleton.
    pub fn as_singleton(&self) -> Option<Vec<f64>> {
        match self {
            Self::Interval { lo, hi } if lo == hi => Some(vec![*lo]),
            Self::Ball { center, radius } if *radius == 0.0 => Some(center.clone()),
            Self::Polytope { vertices } if vertices.len() == 1 => Some(vertices[0].clone()),
            _ => None,
        }
    }

    /// Support function at an arbitrary vector (positively homogeneous
    /// extension of the support on unit directions).
    pub fn support_at(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dimension(), x.len())?;
        Ok(match self {
            Self::Interval { lo, hi } => (x[0] * lo).max(x[0] * hi),
            Self::Ball { center, radius } => dot(center, x) + radius * norm(x),
            Self::Polytope { vertices } => vertices.iter().map(|v| dot(v, x)).fold(f64::NEG_INFINITY, f64::max),
        })
    }

    /// s(u, A) = sup { <u, a> : a in A }.
    pub fn support(&self, u: &Direction) -> Result<f64> {
        check_dim(self.dimension(), u.dimension())?;
        Ok(match self {
            // |u| = 1, so the radius enters unscaled.
            Self::Ball { center, radius } => dot(center, u.components()) + radius,
            _ => self.support_at(u.components())?,
        })
    }

    /// Largest Euclidean norm of a point of the set.
    pub fn max_norm(&self) -> f64 {
        match self {
            Self::Interval { lo, hi } => lo.abs().max(hi.abs()),
            Self::Ball { center, radius } => norm(center) + radius,
            Self::Polytope { vertices } => vertices.iter().map(|v| norm(v)).fold(0.0, f64::max),
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Self::Interval { lo, hi } => hi - lo,
            Self::Ball { radius, .. } => 2.0 * radius,
            Self::Polytope { vertices } => {
                let mut d = 0.0_f64;
                for (i, a) in vertices.iter().enumerate() {
                    for b in &vertices[i + 1..] {
                        d = d.max(dist(a, b));
                    }
                }
                d
            }
        }
    }

    /// Translate by `v`.
    pub fn translate(&self, v: &[f64]) -> Result<Self> {
        check_dim(self.dimension(), v.len())?;
        Ok(match self {
            Self::Interval { lo, hi } => Self::Interval { lo: lo + v[0], hi: hi + v[0] },
            Self::Ball { center, radius } => Self::Ball { center: add(center, v), radius: *radius },
            Self::Polytope { vertices } => Self::polytope(vertices.iter().map(|p| add(p, v)).collect())?,
        })
    }

    /// Halfspace description (polytope-convertible sets only).
    pub(crate) fn halfspaces(&self) -> Option<Vec<Halfspace>> {
        self.as_vertices().map(|v| hull::halfspaces(&v))
    }

    /// Hausdorff-based approximate equality with the scale-relative
    /// tolerance `1e-9 * (1 + max diameter)`.
    pub fn approx_eq(&self, other: &Self) -> Result<bool> {
        let tol = 1e-9 * (1.0 + self.diameter().max(other.diameter()));
        Ok(hausdorff(self, other)? <= tol)
    }

    /// Exact containment test `self ⊆ outer`.
    pub fn is_subset_of(&self, outer: &Self) -> Result<bool> {
        check_dim(outer.dimension(), self.dimension())?;
        if let (Some((a, b)), Some((c, d))) = (self.as_interval(), outer.as_interval()) {
            return Ok(c <= a && b <= d);
        }
        if let (Self::Ball { center: c1, radius: r1 }, Self::Ball { center: c2, radius: r2 }) = (self, outer) {
            return Ok(dist(c1, c2) + r1 <= *r2);
        }
        let tol = 1e-12 * (1.0 + self.max_norm().max(outer.max_norm()));
        Ok(excess(self, outer)? <= tol)
    }
}

/// Minkowski sum A + B.
pub fn minkowski_sum(a: &ConvexSet, b: &ConvexSet) -> Result<ConvexSet> {
    check_dim(a.dimension(), b.dimension())?;
    if a.dimension() == 1 {
        let (a1, a2) = a.as_interval().unwrap();
        let (b1, b2) = b.as_interval().unwrap();
        return ConvexSet::interval(a1 + b1, a2 + b2);
    }
    if let (ConvexSet::Ball { center: c1, radius: r1 }, ConvexSet::Ball { center: c2, radius: r2 }) = (a, b) {
        return ConvexSet::ball(add(c1, c2), r1 + r2);
    }
    if let Some(p) = b.as_singleton() {
        return a.translate(&p);
    }
    if let Some(p) = a.as_singleton() {
        return b.translate(&p);
    }
    match (a.as_vertices(), b.as_vertices()) {
        (Some(va), Some(vb)) => {
            let mut sums = Vec::with_capacity(va.len() * vb.len());
            for p in &va {
                for q in &vb {
                    sums.push(add(p, q));
                }
            }
            ConvexSet::polytope(sums)
        }
        _ => Err(Error::UnsupportedRepresentationPair { op: "minkowski_sum", left: a.kind(), right: b.kind() }),
    }
}

/// λA. Negative λ reflects through the origin.
pub fn scalar_mul(lambda: f64, a: &ConvexSet) -> ConvexSet {
    match a {
        ConvexSet::Interval { lo, hi } => {
            let (x, y) = (lambda * lo, lambda * hi);
            ConvexSet::Interval { lo: x.min(y), hi: x.max(y) }
        }
        ConvexSet::Ball { center, radius } => ConvexSet::Ball {
            center: scale(lambda, center).into_iter().map(|x| x + 0.0).collect(),
            radius: lambda.abs() * radius,
        },
        ConvexSet::Polytope { vertices } => {
            let pts: Vec<Vec<f64>> = vertices.iter().map(|v| v.iter().map(|x| lambda * x + 0.0).collect()).collect();
            ConvexSet::Polytope { vertices: hull::extreme_points(&pts) }
        }
    }
}

/// co(A ∪ B).
pub fn convex_hull_union(a: &ConvexSet, b: &ConvexSet) -> Result<ConvexSet> {
    check_dim(a.dimension(), b.dimension())?;
    if a.dimension() == 1 {
        let (a1, a2) = a.as_interval().unwrap();
        let (b1, b2) = b.as_interval().unwrap();
        return ConvexSet::interval(a1.min(b1), a2.max(b2));
    }
    if let (ConvexSet::Ball { center: c1, radius: r1 }, ConvexSet::Ball { center: c2, radius: r2 }) = (a, b) {
        let gap = dist(c1, c2);
        if gap + r2 <= *r1 {
            return Ok(a.clone());
        }
        if gap + r1 <= *r2 {
            return Ok(b.clone());
        }
    }
    match (a.as_vertices(), b.as_vertices()) {
        (Some(mut va), Some(vb)) => {
            va.extend(vb);
            ConvexSet::polytope(va)
        }
        _ => Err(Error::UnsupportedRepresentationPair { op: "convex_hull_union", left: a.kind(), right: b.kind() }),
    }
}

/// Distance from a point to the set.
pub fn point_distance(p: &[f64], set: &ConvexSet) -> Result<f64> {
    check_dim(set.dimension(), p.len())?;
    Ok(match set {
        ConvexSet::Interval { lo, hi } => (lo - p[0]).max(p[0] - hi).max(0.0),
        ConvexSet::Ball { center, radius } => (dist(p, center) - radius).max(0.0),
        ConvexSet::Polytope { vertices } => {
            if vertices.len() == 1 {
                dist(p, &vertices[0])
            } else {
                distance_to_hull(p, vertices)
            }
        }
    })
}

/// Distance from an interior point to the boundary along facet normals;
/// zero for flat sets and for points outside.
fn depth(p: &[f64], set: &ConvexSet) -> f64 {
    match set {
        ConvexSet::Ball { center, radius } => (radius - dist(p, center)).max(0.0),
        _ => set
            .halfspaces()
            .unwrap_or_default()
            .iter()
            .map(|h| h.offset - dot(&h.normal, p))
            .fold(f64::INFINITY, f64::min)
            .max(0.0),
    }
}

/// Excess e(A, B) = sup_{a ∈ A} d(a, B).
pub fn excess(a: &ConvexSet, b: &ConvexSet) -> Result<f64> {
    check_dim(a.dimension(), b.dimension())?;
    if let (Some((a1, a2)), Some((b1, b2))) = (a.as_interval(), b.as_interval()) {
        return Ok((b1 - a1).max(a2 - b2).max(0.0));
    }
    if let Some(va) = a.as_vertices() {
        // Distance to a convex set is convex, so the sup sits at a vertex.
        let mut e = 0.0_f64;
        for v in &va {
            e = e.max(point_distance(v, b)?);
        }
        return Ok(e);
    }
    let ConvexSet::Ball { center, radius } = a else { unreachable!() };
    // Interior centers have positive depth; the nearest-point residual is
    // not exactly zero there, so branch on depth.
    let inner = depth(center, b);
    if inner > 0.0 {
        Ok((radius - inner).max(0.0))
    } else {
        Ok(point_distance(center, b)? + radius)
    }
}

/// Hausdorff distance max(e(A,B), e(B,A)).
pub fn hausdorff(a: &ConvexSet, b: &ConvexSet) -> Result<f64> {
    Ok(excess(a, b)?.max(excess(b, a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn iv(lo: f64, hi: f64) -> ConvexSet {
        ConvexSet::interval(lo, hi).unwrap()
    }

    fn poly(v: &[[f64; 2]]) -> ConvexSet {
        ConvexSet::polytope(v.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    fn dirs(m: usize) -> Vec<Direction> {
        (0..m)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
                Direction::normalized(vec![t.cos(), t.sin()]).unwrap()
            })
            .collect()
    }

    #[test]
    fn constructors_validate() {
        assert!(ConvexSet::interval(2.0, 1.0).is_err());
        assert!(ConvexSet::ball(vec![0.0], -1.0).is_err());
        assert!(ConvexSet::polytope(vec![]).is_err());
        assert!(matches!(ConvexSet::polytope(vec![vec![0.0; 4]]), Err(Error::UnsupportedDimension(4))));
        assert!(Direction::new(vec![1.0, 1.0]).is_err());
        assert!(Direction::normalized(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn minkowski_examples() {
        assert_eq!(minkowski_sum(&iv(0.0, 1.0), &iv(2.0, 5.0)).unwrap(), iv(2.0, 6.0));
        let b1 = ConvexSet::ball(vec![0.0, 0.0], 1.0).unwrap();
        let b0 = ConvexSet::ball(vec![0.0, 0.0], 0.0).unwrap();
        assert_eq!(minkowski_sum(&b1, &b0).unwrap(), b1);
        assert_eq!(minkowski_sum(&iv(0.0, 1.0), &iv(0.0, 2.0)).unwrap().dimension(), 1);
    }

    #[test]
    fn square_plus_diagonal_is_hexagon() {
        let square = poly(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]);
        let seg = poly(&[[0.0, 0.0], [1.0, 1.0]]);
        let sum = minkowski_sum(&square, &seg).unwrap();
        // Oracle: every pairwise vertex sum, hulled independently.
        let oracle = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 1.0], [2.0, 1.0], [1.0, 2.0], [2.0, 2.0]];
        let ConvexSet::Polytope { vertices } = &sum else { panic!() };
        assert_eq!(vertices.len(), 6);
        for u in dirs(64) {
            let expect = oracle.iter().map(|p| dot(p, u.components())).fold(f64::NEG_INFINITY, f64::max);
            assert_abs_diff_eq!(sum.support(&u).unwrap(), expect, epsilon = 1e-12);
        }
    }

    #[test]
    fn mixed_ball_polytope_sum_rejected() {
        let b = ConvexSet::ball(vec![0.0, 0.0], 1.0).unwrap();
        let p = poly(&[[0.0, 0.0], [1.0, 0.0]]);
        assert!(matches!(minkowski_sum(&b, &p), Err(Error::UnsupportedRepresentationPair { .. })));
        assert!(matches!(minkowski_sum(&b, &iv(0.0, 1.0)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn scalar_mul_examples() {
        assert_eq!(scalar_mul(2.0, &iv(1.0, 3.0)), iv(2.0, 6.0));
        assert_eq!(scalar_mul(-1.0, &iv(1.0, 3.0)), iv(-3.0, -1.0));
        let b = ConvexSet::ball(vec![1.0, 2.0], 3.0).unwrap();
        assert_eq!(scalar_mul(0.0, &b), ConvexSet::ball(vec![0.0, 0.0], 0.0).unwrap());
    }

    #[test]
    fn support_examples() {
        let plus = Direction::new(vec![1.0]).unwrap();
        assert_eq!(iv(-1.0, 1.0).support(&plus).unwrap(), 1.0);
        let b = ConvexSet::ball(vec![1.0, 0.0], 2.0).unwrap();
        assert_eq!(b.support(&Direction::new(vec![0.0, 1.0]).unwrap()).unwrap(), 2.0);
        let tri = poly(&[[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]]);
        let u = Direction::normalized(vec![1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(tri.support(&u).unwrap(), 2f64.sqrt(), epsilon = 1e-15);
        assert!(matches!(tri.support(&plus), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn excess_and_hausdorff_examples() {
        assert_eq!(excess(&iv(0.0, 3.0), &iv(0.0, 1.0)).unwrap(), 2.0);
        assert_eq!(excess(&iv(0.0, 1.0), &iv(0.0, 3.0)).unwrap(), 0.0);
        let b2 = ConvexSet::ball(vec![0.0, 0.0], 2.0).unwrap();
        let b1 = ConvexSet::ball(vec![0.0, 0.0], 1.0).unwrap();
        assert_eq!(excess(&b2, &b1).unwrap(), 1.0);
        assert_eq!(excess(&b1, &b2).unwrap(), 0.0);
        assert_eq!(hausdorff(&iv(0.0, 1.0), &iv(0.0, 3.0)).unwrap(), 2.0);
        let sq = poly(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]);
        assert_eq!(hausdorff(&sq, &sq).unwrap(), 0.0);
        let shifted = sq.translate(&[1.0, 0.0]).unwrap();
        assert_abs_diff_eq!(hausdorff(&sq, &shifted).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn ball_polytope_excess() {
        let sq = poly(&[[-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0], [1.0, 1.0]]);
        let small = ConvexSet::ball(vec![0.0, 0.0], 0.5).unwrap();
        let big = ConvexSet::ball(vec![0.0, 0.0], 2.0).unwrap();
        let far = ConvexSet::ball(vec![4.0, 0.0], 1.0).unwrap();
        assert_eq!(excess(&small, &sq).unwrap(), 0.0);
        assert_abs_diff_eq!(excess(&big, &sq).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(excess(&far, &sq).unwrap(), 4.0, epsilon = 1e-12);
        // Corner of the square is sqrt(2) from the center.
        assert_abs_diff_eq!(excess(&sq, &small).unwrap(), 2f64.sqrt() - 0.5, epsilon = 1e-12);
    }

    #[test]
    fn ball_polytope_excess_matches_support_oracle() {
        // e(A,B) = max(0, sup_u s(u,A) - s(u,B)) evaluated on a fine circle.
        // The sampled max is a lower bound short by at most L * spacing, where
        // L bounds the Lipschitz constant of u -> s(u,A) - s(u,B).
        let tri = poly(&[[0.0, 0.0], [3.0, 0.5], [1.0, 2.5]]);
        let n = 20_000;
        let spacing = 2.0 * std::f64::consts::PI / n as f64;
        for (c, r) in [([1.2, 0.9], 0.4), ([1.2, 0.9], 1.5), ([-2.0, 1.0], 0.7)] {
            let ball = ConvexSet::ball(c.to_vec(), r).unwrap();
            let oracle =
                dirs(n).iter().map(|u| ball.support(u).unwrap() - tri.support(u).unwrap()).fold(0.0_f64, f64::max);
            let lipschitz = ball.max_norm() + tri.max_norm();
            let e = excess(&ball, &tri).unwrap();
            assert!(oracle <= e + 1e-12, "{oracle} > {e}");
            assert!(e - oracle <= lipschitz * spacing, "{e} vs {oracle}");
        }
    }

    #[test]
    fn hull_union_examples() {
        assert_eq!(convex_hull_union(&iv(0.0, 1.0), &iv(2.0, 5.0)).unwrap(), iv(0.0, 5.0));
        let a = iv(1.0, 2.0);
        assert_eq!(convex_hull_union(&a, &a).unwrap(), a);
        let seg = poly(&[[0.0, 0.0], [1.0, 0.0]]);
        let pt = ConvexSet::point(vec![0.0, 1.0]).unwrap();
        assert_eq!(convex_hull_union(&seg, &pt).unwrap(), poly(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]));
    }

    #[test]
    fn containment() {
        assert!(iv(1.0, 2.0).is_subset_of(&iv(0.0, 3.0)).unwrap());
        assert!(!iv(1.0, 4.0).is_subset_of(&iv(0.0, 3.0)).unwrap());
        let b = ConvexSet::ball(vec![0.0, 0.0], 1.0).unwrap();
        let sq = poly(&[[-1.0, -1.0], [1.0, -1.0], [-1.0, 1.0], [1.0, 1.0]]);
        assert!(b.is_subset_of(&sq).unwrap());
        assert!(!sq.is_subset_of(&b).unwrap());
    }
}
