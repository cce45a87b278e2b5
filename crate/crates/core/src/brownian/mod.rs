//! The set-valued Brownian motion `B_t = W_t e` on the embedded space and
//! the statistical batteries that check its characterizations.
//!
//! Each path is a scalar Brownian path `W` times the shared unit element
//! `e`. Evaluating at grid index `k` reads `W_t e[k] = W_t`, so every
//! evaluation functional sees the same standard scalar Brownian motion.

mod characterize;
mod variation;

use std::sync::Arc;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::embedding::{scaled_embed, DirectionGrid, EmbeddedElement, Evaluation};
use crate::error::{Error, Result};
use crate::geometry::ConvexSet;
use crate::rng::{map_chunks, stream_rng, StreamRng};

pub use characterize::{
    bochner_integrability_test, covariance_test, increments_test, martingale_sq_test, mgf_test, mgf_theoretical,
    mgf_unhalved_variant, mgf_variant_test, riesz_moment_test, theoretical_covariance, wiener_covariance_test,
    CovarianceReport, TestFunction,
};
pub use variation::{
    compensator_test, ito_convergence_test, ito_integral, ito_martingale_test, quadratic_variation,
    qv_convergence_test, CompensatorReport, Integrand,
};

/// Minimum paths for the moment batteries.
pub const MIN_PATHS: usize = 1000;
/// Minimum paths for the fourth-moment conditions.
pub const MIN_PATHS_RIESZ: usize = 10_000;

const PATH_CHUNK: usize = 1024;

/// Strictly increasing times starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::EmptyTimeGrid);
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidTimeGrid(format!("first time must be 0, got {}", times[0])));
        }
        if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidTimeGrid(format!("times must be finite and strictly increasing: {times:?}")));
        }
        Ok(Self { times })
    }

    /// `0` followed by the given positive times.
    pub fn from_positive(times: &[f64]) -> Result<Self> {
        let mut all = Vec::with_capacity(times.len() + 1);
        all.push(0.0);
        all.extend_from_slice(times);
        Self::new(all)
    }

    /// `n_steps` equal steps on `[0, horizon]`.
    pub fn uniform(n_steps: usize, horizon: f64) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::EmptyTimeGrid);
        }
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidTimeGrid(format!("horizon must be positive, got {horizon}")));
        }
        let mut times: Vec<f64> = (0..=n_steps).map(|i| i as f64 * horizon / n_steps as f64).collect();
        times[n_steps] = horizon;
        Self::new(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn horizon(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    pub fn steps(&self) -> impl Iterator<Item = f64> + '_ {
        self.times.windows(2).map(|w| w[1] - w[0])
    }

    /// Largest step.
    pub fn mesh(&self) -> f64 {
        self.steps().fold(0.0, f64::max)
    }

    /// `sum of squared steps`; the variance of the realized quadratic
    /// variation of a Brownian path is twice this.
    pub fn sum_sq_steps(&self) -> f64 {
        self.steps().map(|h| h * h).sum()
    }

    /// Index of time `t`, matched to within `1e-12 (1 + horizon)`.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let tol = 1e-12 * (1.0 + self.horizon());
        let k = self.times.partition_point(|&s| s < t - tol);
        (k < self.times.len() && (self.times[k] - t).abs() <= tol).then_some(k)
    }
}

/// Sampled trajectories of `B_t = W_t e`, stored as the scalar `W`.
#[derive(Debug, Clone)]
pub struct PathSet {
    timegrid: TimeGrid,
    shape: EmbeddedElement,
    scalars: Vec<f64>,
    n_paths: usize,
}

impl PathSet {
    pub fn n_paths(&self) -> usize {
        self.n_paths
    }

    pub fn timegrid(&self) -> &TimeGrid {
        &self.timegrid
    }

    pub fn grid(&self) -> &Arc<DirectionGrid> {
        self.shape.grid()
    }

    /// The unit element `e` spanning every path value.
    pub fn shape(&self) -> &EmbeddedElement {
        &self.shape
    }

    pub fn path(&self, index: usize) -> ProcessPath<'_> {
        assert!(index < self.n_paths, "path index out of range");
        ProcessPath { set: self, index }
    }

    pub fn paths(&self) -> impl Iterator<Item = ProcessPath<'_>> {
        (0..self.n_paths).map(move |index| ProcessPath { set: self, index })
    }

    /// `f(B_t)` for every path at time index `t_idx`.
    pub fn column(&self, t_idx: usize, f: Evaluation) -> Vec<f64> {
        let w = self.shape.evaluate(f);
        let n_t = self.timegrid.len();
        (0..self.n_paths).map(|p| self.scalars[p * n_t + t_idx] * w).collect()
    }

    pub(crate) fn check_evaluation(&self, f: Evaluation) -> Result<()> {
        Evaluation::new(f.index(), self.grid()).map(|_| ())
    }

    pub(crate) fn require(&self, required: usize) -> Result<()> {
        if self.n_paths < required {
            Err(Error::TooFewPaths { required, available: self.n_paths })
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_time_index(&self, idx: usize) -> Result<()> {
        if idx < self.timegrid.len() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("time index {idx} out of range for {} times", self.timegrid.len())))
        }
    }
}

/// One sampled trajectory.
#[derive(Debug, Clone, Copy)]
pub struct ProcessPath<'a> {
    set: &'a PathSet,
    index: usize,
}

impl<'a> ProcessPath<'a> {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn timegrid(&self) -> &'a TimeGrid {
        &self.set.timegrid
    }

    /// Scalar driver `W(t_i)` at every time.
    pub fn scalars(&self) -> &'a [f64] {
        let n_t = self.set.timegrid.len();
        &self.set.scalars[self.index * n_t..(self.index + 1) * n_t]
    }

    /// `B(t_i)` as an element of the embedded space.
    pub fn value(&self, t_idx: usize) -> EmbeddedElement {
        self.set.shape.scale(self.scalars()[t_idx])
    }

    pub fn evaluate(&self, t_idx: usize, f: Evaluation) -> f64 {
        self.scalars()[t_idx] * self.set.shape.evaluate(f)
    }

    /// `f(B(t_i))` for every time.
    pub fn projected(&self, f: Evaluation) -> Vec<f64> {
        let w = self.set.shape.evaluate(f);
        self.scalars().iter().map(|x| x * w).collect()
    }
}

/// Fills `out` with one standard Brownian path on `steps` (W_0 = 0).
fn brownian_path(rng: &mut StreamRng, steps: &[f64], out: &mut [f64]) {
    out[0] = 0.0;
    for (i, h) in steps.iter().enumerate() {
        let z: f64 = rng.sample(StandardNormal);
        out[i + 1] = out[i] + h.sqrt() * z;
    }
}

/// Runs `visit` on the scalar driver of each path and returns per-chunk
/// accumulators in order. Path `i` draws from stream `i` of `seed`, so it is
/// identical to path `i` of [`simulate_bm`] with the same arguments.
pub(crate) fn fold_paths<T: Send>(
    timegrid: &TimeGrid,
    n_paths: usize,
    seed: u64,
    init: impl Fn() -> T + Sync,
    visit: impl Fn(&mut T, &[f64]) + Sync,
) -> Vec<T> {
    let steps: Vec<f64> = timegrid.steps().collect();
    let base = stream_rng(seed, 0);
    map_chunks(n_paths, PATH_CHUNK, |_, range| {
        let mut acc = init();
        let mut buf = vec![0.0; timegrid.len()];
        for p in range {
            let mut rng = base.clone();
            rng.set_stream(p as u64);
            brownian_path(&mut rng, &steps, &mut buf);
            visit(&mut acc, &buf);
        }
        acc
    })
}

/// Simulates `n_paths` trajectories of `B_t = W_t e`, where `e` is the
/// embedded unit ball on `grid`.
pub fn simulate_bm(timegrid: &TimeGrid, grid: &Arc<DirectionGrid>, n_paths: usize, seed: u64) -> Result<PathSet> {
    if n_paths == 0 {
        return Err(Error::InvalidArgument("n_paths must be at least 1".into()));
    }
    let shape = scaled_embed(1.0, &ConvexSet::unit_ball(grid.dimension()), grid)?;
    let chunks = fold_paths(timegrid, n_paths, seed, Vec::new, |v: &mut Vec<f64>, w| v.extend_from_slice(w));
    let scalars: Vec<f64> = chunks.into_iter().flatten().collect();
    Ok(PathSet { timegrid: timegrid.clone(), shape, scalars, n_paths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::RunningMoments;

    #[test]
    fn time_grid_validation() {
        assert_eq!(TimeGrid::new(vec![]), Err(Error::EmptyTimeGrid));
        assert_eq!(TimeGrid::new(vec![0.0]), Err(Error::EmptyTimeGrid));
        assert!(TimeGrid::new(vec![0.5, 1.0]).is_err());
        assert!(TimeGrid::new(vec![0.0, 1.0, 1.0]).is_err());
        let g = TimeGrid::uniform(10, 2.0).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g.horizon(), 2.0);
        assert!((g.mesh() - 0.2).abs() < 1e-15);
        assert_eq!(g.index_of(0.6), Some(3));
        assert_eq!(g.index_of(0.61), None);
        assert_eq!(TimeGrid::from_positive(&[1.0, 2.0, 3.0]).unwrap().times(), &[0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn paths_start_at_zero_and_are_reproducible() {
        let tg = TimeGrid::uniform(20, 1.0).unwrap();
        let grid = DirectionGrid::circle(8).unwrap();
        let a = simulate_bm(&tg, &grid, 50, 42).unwrap();
        let b = simulate_bm(&tg, &grid, 50, 42).unwrap();
        let c = simulate_bm(&tg, &grid, 50, 43).unwrap();
        assert_eq!(a.scalars, b.scalars);
        assert_ne!(a.scalars, c.scalars);
        for p in a.paths() {
            assert_eq!(p.value(0), EmbeddedElement::zero(&grid));
        }
        assert!(matches!(simulate_bm(&tg, &grid, 0, 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn path_prefix_is_independent_of_path_count() {
        let tg = TimeGrid::uniform(5, 1.0).unwrap();
        let grid = DirectionGrid::line();
        let small = simulate_bm(&tg, &grid, 3, 7).unwrap();
        let large = simulate_bm(&tg, &grid, 3000, 7).unwrap();
        for i in 0..3 {
            assert_eq!(small.path(i).scalars(), large.path(i).scalars());
        }
    }

    #[test]
    fn every_evaluation_sees_the_same_scalar_path() {
        let tg = TimeGrid::from_positive(&[0.5, 1.0]).unwrap();
        let grid = DirectionGrid::circle(16).unwrap();
        let paths = simulate_bm(&tg, &grid, 10, 1).unwrap();
        for p in paths.paths() {
            let reference = p.projected(Evaluation::new(0, &grid).unwrap());
            assert_eq!(reference, p.scalars());
            for k in 1..grid.len() {
                assert_eq!(p.projected(Evaluation::new(k, &grid).unwrap()), reference);
            }
        }
    }

    #[test]
    fn variance_at_one() {
        let tg = TimeGrid::from_positive(&[1.0]).unwrap();
        let grid = DirectionGrid::line();
        let n = 100_000;
        let paths = simulate_bm(&tg, &grid, n, 2024).unwrap();
        let f = Evaluation::new(1, &grid).unwrap();
        let acc: RunningMoments = paths.column(1, f).into_iter().map(|x| x * x).collect();
        // Var of the sample second moment of N(0,1) is 2/n.
        assert!((acc.mean() - 1.0).abs() <= 3.0 * (2.0 / n as f64).sqrt());
    }
}
