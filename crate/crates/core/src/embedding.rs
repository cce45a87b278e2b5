//! Support vectors over a finite direction grid.
//!
//! A `DirectionGrid` stands in for the compact space `K` (the sampled dual
//! unit sphere), and `embed` sends a convex set to the vector of its support
//! values on that grid. The image space is closed under addition, real
//! scaling, pointwise max and pointwise product, with `unit` (the embedded
//! unit ball, all ones) as multiplicative identity. Reading one grid
//! component is an evaluation functional.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{ConvexSet, Direction};
use crate::linalg::{dist, dot, norm};

pub const DEFAULT_CIRCLE_SIZE: usize = 256;
pub const DEFAULT_SPHERE_SIZE: usize = 512;
/// Default absolute tolerance of the sampled subadditivity test.
pub const SUPPORT_LIKE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Line,
    Circle,
    Other,
}

/// A finite, symmetric set of unit directions.
#[derive(Debug, Clone)]
pub struct DirectionGrid {
    dim: usize,
    directions: Vec<Direction>,
    antipode: Vec<usize>,
    layout: Layout,
}

impl PartialEq for DirectionGrid {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.directions == other.directions
    }
}

impl DirectionGrid {
    /// The dual sphere of R^1: exactly {-1, +1}.
    pub fn line() -> Arc<Self> {
        Arc::new(Self {
            dim: 1,
            directions: vec![Direction::new(vec![-1.0]).unwrap(), Direction::new(vec![1.0]).unwrap()],
            antipode: vec![1, 0],
            layout: Layout::Line,
        })
    }

    /// `m` equally spaced directions on the unit circle, `m` a multiple of 4.
    /// Quarter turns of the grid map it onto itself exactly.
    pub fn circle(m: usize) -> Result<Arc<Self>> {
        if m < 4 || !m.is_multiple_of(4) {
            return Err(Error::InvalidGrid(format!("circle grid size {m} must be a positive multiple of 4")));
        }
        let q = m / 4;
        let mut first = Vec::with_capacity(q);
        for k in 0..q {
            let t = 2.0 * PI * k as f64 / m as f64;
            let (s, c) = t.sin_cos();
            let n = (c * c + s * s).sqrt();
            first.push([c / n, s / n]);
        }
        let mut raw = Vec::with_capacity(m);
        for turn in 0..4 {
            for &[x, y] in &first {
                raw.push(match turn {
                    0 => [x, y],
                    1 => [-y, x],
                    2 => [-x, -y],
                    _ => [y, -x],
                });
            }
        }
        let directions = raw.into_iter().map(|p| Direction::new(p.to_vec())).collect::<Result<Vec<_>>>()?;
        let antipode = (0..m).map(|k| (k + m / 2) % m).collect();
        Ok(Arc::new(Self { dim: 2, directions, antipode, layout: Layout::Circle }))
    }

    /// Symmetrized Fibonacci sphere: `m / 2` points on the open upper
    /// hemisphere and their negatives.
    pub fn sphere(m: usize) -> Result<Arc<Self>> {
        if m < 2 || !m.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("sphere grid size {m} must be even and positive")));
        }
        let half = m / 2;
        let golden = PI * (3.0 - 5f64.sqrt());
        let mut upper = Vec::with_capacity(half);
        for i in 0..half {
            let z = 1.0 - (i as f64 + 0.5) / half as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            upper.push(Direction::normalized(vec![r * phi.cos(), r * phi.sin(), z])?);
        }
        let mut directions = upper.clone();
        directions.extend(upper.iter().map(Direction::opposite));
        let antipode = (0..m).map(|k| (k + half) % m).collect();
        Ok(Arc::new(Self { dim: 3, directions, antipode, layout: Layout::Other }))
    }

    /// Default grid for a dimension: {-1,+1}, 256-circle, or 512-sphere.
    pub fn for_dimension(dim: usize) -> Result<Arc<Self>> {
        match dim {
            1 => Ok(Self::line()),
            2 => Self::circle(DEFAULT_CIRCLE_SIZE),
            3 => Self::sphere(DEFAULT_SPHERE_SIZE),
            d => Err(Error::InvalidGrid(format!("no default grid for dimension {d}"))),
        }
    }

    /// Grid of dimension `dim` with `m` directions (`m` ignored for d = 1).
    pub fn with_size(dim: usize, m: usize) -> Result<Arc<Self>> {
        match dim {
            1 => Ok(Self::line()),
            2 => Self::circle(m),
            3 => Self::sphere(m),
            d => Err(Error::InvalidGrid(format!("unsupported grid dimension {d}"))),
        }
    }

    /// A caller-supplied grid. Directions must be distinct and closed under
    /// negation; in R^1 they must be exactly `[-1, +1]`.
    pub fn custom(directions: Vec<Direction>) -> Result<Arc<Self>> {
        let Some(first) = directions.first() else {
            return Err(Error::InvalidGrid("empty grid".into()));
        };
        let dim = first.dimension();
        for u in &directions {
            check_dim(dim, u.dimension())?;
        }
        if dim == 1 {
            if directions.len() == 2 && directions[0].components() == [-1.0] && directions[1].components() == [1.0] {
                return Ok(Self::line());
            }
            return Err(Error::InvalidGrid("the R^1 grid must be [-1, +1]".into()));
        }
        if directions.len() < 2 {
            return Err(Error::InvalidGrid("grid needs at least two directions".into()));
        }
        let mut antipode = Vec::with_capacity(directions.len());
        for (i, u) in directions.iter().enumerate() {
            if directions[..i].iter().any(|v| dist(u.components(), v.components()) < 1e-12) {
                return Err(Error::InvalidGrid(format!("duplicate direction {:?}", u.components())));
            }
            let neg = u.opposite();
            match directions.iter().position(|v| dist(neg.components(), v.components()) < 1e-12) {
                Some(j) => antipode.push(j),
                None => return Err(Error::InvalidGrid(format!("missing antipode of {:?}", u.components()))),
            }
        }
        Ok(Arc::new(Self { dim, directions, antipode, layout: Layout::Other }))
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn direction(&self, k: usize) -> &Direction {
        &self.directions[k]
    }

    /// Index of `-u_k`.
    pub fn antipode(&self, k: usize) -> usize {
        self.antipode[k]
    }

    /// Largest distance from a unit vector to its nearest grid direction,
    /// for the regular layouts; an upper estimate for custom grids.
    pub fn resolution(&self) -> f64 {
        match self.layout {
            Layout::Line => 0.0,
            Layout::Circle => 2.0 * (PI / (2.0 * self.len() as f64)).sin(),
            Layout::Other => {
                // Twice the mean nearest-neighbour spacing on the sphere.
                2.0 * (4.0 * PI / self.len() as f64).sqrt()
            }
        }
    }

    /// Index of the grid direction closest to the unit vector `x`.
    pub fn nearest(&self, x: &[f64]) -> usize {
        match self.layout {
            Layout::Line => usize::from(x[0] >= 0.0),
            Layout::Circle => {
                let m = self.len() as f64;
                let t = x[1].atan2(x[0]).rem_euclid(2.0 * PI);
                let k = (t * m / (2.0 * PI)).round() as usize % self.len();
                // Rounding can land one step off near cell borders.
                let prev = (k + self.len() - 1) % self.len();
                let next = (k + 1) % self.len();
                [k, prev, next]
                    .into_iter()
                    .max_by(|&a, &b| {
                        dot(x, self.directions[a].components()).total_cmp(&dot(x, self.directions[b].components()))
                    })
                    .unwrap()
            }
            Layout::Other => (0..self.len())
                .max_by(|&a, &b| {
                    dot(x, self.directions[a].components()).total_cmp(&dot(x, self.directions[b].components()))
                })
                .unwrap(),
        }
    }
}

/// Evaluation functional: reads grid component `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Evaluation(usize);

impl Evaluation {
    pub fn new(index: usize, grid: &DirectionGrid) -> Result<Self> {
        if index < grid.len() {
            Ok(Self(index))
        } else {
            Err(Error::InvalidEvaluation { index, m: grid.len() })
        }
    }

    pub fn index(self) -> usize {
        self.0
    }
}

/// An element of the grid-sampled function space.
#[derive(Debug, Clone)]
pub struct EmbeddedElement {
    grid: Arc<DirectionGrid>,
    values: Vec<f64>,
}

impl PartialEq for EmbeddedElement {
    fn eq(&self, other: &Self) -> bool {
        same_grid(&self.grid, &other.grid) && self.values == other.values
    }
}

fn same_grid(a: &Arc<DirectionGrid>, b: &Arc<DirectionGrid>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl EmbeddedElement {
    pub fn from_values(grid: Arc<DirectionGrid>, values: Vec<f64>) -> Result<Self> {
        check_dim(grid.len(), values.len())?;
        Ok(Self { grid, values })
    }

    pub fn zero(grid: &Arc<DirectionGrid>) -> Self {
        Self { grid: grid.clone(), values: vec![0.0; grid.len()] }
    }

    /// The unit `e`: embedding of the closed unit ball, identically one.
    pub fn unit(grid: &Arc<DirectionGrid>) -> Self {
        Self { grid: grid.clone(), values: vec![1.0; grid.len()] }
    }

    pub fn grid(&self) -> &Arc<DirectionGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn evaluate(&self, f: Evaluation) -> f64 {
        self.values[f.index()]
    }

    fn check(&self, other: &Self) -> Result<()> {
        if same_grid(&self.grid, &other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.check(other)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| op(a, b)).collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|x| s * x).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|x| -x).collect() }
    }

    /// Pointwise maximum (lattice join).
    pub fn lattice_max(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, f64::max)
    }

    /// Pointwise product (the f-algebra multiplication).
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Sup-norm distance.
    pub fn sup_distance(&self, other: &Self) -> Result<f64> {
        self.check(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    /// Componentwise order `self <= other`.
    pub fn le(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.values.iter().zip(&other.values).all(|(a, b)| a <= b))
    }

    /// Largest amount by which the positively homogeneous extension
    /// `H(x) = |x| u(x/|x|)` fails subadditivity on sampled pairs, after
    /// allowing for the snap of `(a+b)/|a+b|` to its nearest grid direction.
    /// Antipodal pairs test `0 = H(0) <= u(a) + u(-a)`.
    pub fn subadditivity_violation(&self) -> f64 {
        let grid = &*self.grid;
        let m = grid.len();
        let lipschitz = 2.0 * self.values.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
        let mut worst = f64::NEG_INFINITY;
        for i in 0..m {
            let a = grid.direction(i).components();
            for j in i..m {
                let lhs_bound = self.values[i] + self.values[j];
                if j == grid.antipode(i) {
                    worst = worst.max(-lhs_bound);
                    continue;
                }
                let b = grid.direction(j).components();
                let sum: Vec<f64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let len = norm(&sum);
                if len <= 1e-12 {
                    continue;
                }
                let exact: Vec<f64> = sum.iter().map(|x| x / len).collect();
                let k = grid.nearest(&exact);
                let snap = dist(&exact, grid.direction(k).components());
                let h = len * self.values[k];
                worst = worst.max(h - lhs_bound - lipschitz * len * snap);
            }
        }
        worst
    }

    /// Whether this vector is consistent with being a support function:
    /// sampled subadditivity within `tol` plus quantization slack.
    pub fn is_support_like(&self, tol: f64) -> bool {
        self.subadditivity_violation() <= tol
    }
}

impl Serialize for EmbeddedElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("EmbeddedElement", 4)?;
        s.serialize_field("dimension", &self.grid.dimension())?;
        s.serialize_field("m", &self.grid.len())?;
        s.serialize_field("directions", &self.grid.directions)?;
        s.serialize_field("values", &self.values)?;
        s.end()
    }
}

/// j(A): support values of `a` on every grid direction.
pub fn embed(a: &ConvexSet, grid: &Arc<DirectionGrid>) -> Result<EmbeddedElement> {
    check_dim(grid.dimension(), a.dimension())?;
    let values = grid.directions().iter().map(|u| a.support(u)).collect::<Result<Vec<_>>>()?;
    Ok(EmbeddedElement { grid: grid.clone(), values })
}

/// Embedding of the scaled indicator `r 1_B`: `r j(B)`, which for negative
/// `r` is `-|r| j(B)`.
pub fn scaled_embed(r: f64, b: &ConvexSet, grid: &Arc<DirectionGrid>) -> Result<EmbeddedElement> {
    let base = embed(b, grid)?;
    Ok(if r >= 0.0 { base.scale(r) } else { base.scale(r.abs()).neg() })
}
