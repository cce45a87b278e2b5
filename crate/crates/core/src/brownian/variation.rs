//! Quadratic variation and left-point stochastic integrals along sampled
//! paths, with streaming convergence checks over refining partitions.

use std::sync::Arc;

use serde::Serialize;

use super::{fold_paths, PathSet, ProcessPath, TimeGrid, MIN_PATHS};
use crate::embedding::{DirectionGrid, EmbeddedElement, Evaluation, SUPPORT_LIKE_TOL};
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::stats::{MomentReport, RunningMoments};

/// `sum_j (f(B_{t_{j+1}}) - f(B_{t_j}))^2` over `partition`, whose times
/// must all lie on the path's time grid.
pub fn quadratic_variation(path: &ProcessPath<'_>, f: Evaluation, partition: &TimeGrid) -> Result<f64> {
    let tg = path.timegrid();
    let idx = partition
        .times()
        .iter()
        .map(|&t| tg.index_of(t).ok_or(Error::PartitionOutOfRange(t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(idx.windows(2).map(|w| (path.evaluate(w[1], f) - path.evaluate(w[0], f)).powi(2)).sum())
}

/// Integrand values `g_j` on the steps `[t_j, t_{j+1})` together with the
/// last time index each value depends on.
#[derive(Debug, Clone, PartialEq)]
pub struct Integrand {
    values: Vec<f64>,
    depends_on: Vec<usize>,
}

impl Integrand {
    /// Values assumed known at the left end of each step.
    pub fn adapted(values: Vec<f64>) -> Self {
        let depends_on = (0..values.len()).collect();
        Self { values, depends_on }
    }

    /// Values with explicit dependency indices; checked when integrated.
    pub fn with_dependencies(values: Vec<f64>, depends_on: Vec<usize>) -> Result<Self> {
        if values.len() != depends_on.len() {
            return Err(Error::DimensionMismatch { expected: values.len(), found: depends_on.len() });
        }
        Ok(Self { values, depends_on })
    }

    /// `g_j = h(f(B_{t_0}), ..., f(B_{t_j}))`; adapted by construction.
    pub fn from_history(path: &ProcessPath<'_>, f: Evaluation, h: impl Fn(&[f64]) -> f64) -> Self {
        let x = path.projected(f);
        Self::adapted((1..x.len()).map(|j| h(&x[..j])).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Left-point sum `sum_j g_j (f(B_{t_{j+1}}) - f(B_{t_j}))`.
pub fn ito_integral(path: &ProcessPath<'_>, integrand: &Integrand, f: Evaluation) -> Result<f64> {
    let steps = path.timegrid().len() - 1;
    if integrand.values.len() != steps {
        return Err(Error::DimensionMismatch { expected: steps, found: integrand.values.len() });
    }
    if let Some((step, &depends_on)) = integrand.depends_on.iter().enumerate().find(|(j, &d)| d > *j) {
        return Err(Error::NonAdaptedIntegrand { step, depends_on });
    }
    let x = path.projected(f);
    Ok(integrand.values.iter().zip(x.windows(2)).map(|(g, w)| g * (w[1] - w[0])).sum())
}

/// Streams `n_paths` paths on each partition and reports the L2 error
/// `sqrt(E (error)^2)` against `sqrt(2 sum dt^2)`. The standard error comes
/// from the delta method on the mean of the squared error.
fn l2_convergence(
    label: &str,
    partitions: &[TimeGrid],
    n_paths: usize,
    seed: u64,
    error: impl Fn(&[f64], &TimeGrid) -> f64 + Sync,
) -> Result<Vec<MomentReport>> {
    if n_paths < MIN_PATHS {
        return Err(Error::TooFewPaths { required: MIN_PATHS, available: n_paths });
    }
    partitions
        .iter()
        .enumerate()
        .map(|(q, tg)| {
            let chunks = fold_paths(tg, n_paths, derive_seed(seed, q as u64), RunningMoments::new, |acc, w| {
                acc.push(error(w, tg).powi(2))
            });
            let mut acc = RunningMoments::new();
            chunks.iter().for_each(|c| acc.merge(c));
            let rms = acc.mean().sqrt();
            let stderr = if rms > 0.0 { acc.stderr() / (2.0 * rms) } else { 0.0 };
            Ok(MomentReport::new(
                format!("{label} L2 error, mesh {:.3e}", tg.mesh()),
                rms,
                (2.0 * tg.sum_sq_steps()).sqrt(),
                stderr,
            ))
        })
        .collect()
}

/// L2 distance of the realized quadratic variation from the horizon `T`
/// along each partition.
pub fn qv_convergence_test(
    partitions: &[TimeGrid],
    grid: &Arc<DirectionGrid>,
    n_paths: usize,
    f: Evaluation,
    seed: u64,
) -> Result<Vec<MomentReport>> {
    let unit = EmbeddedElement::unit(grid).evaluate(Evaluation::new(f.index(), grid)?);
    l2_convergence("quadratic variation", partitions, n_paths, seed, |w, tg| {
        let qv: f64 = w.windows(2).map(|d| (unit * (d[1] - d[0])).powi(2)).sum();
        qv - tg.horizon() * unit * unit
    })
}

/// L2 distance of the left-point sum for `int 2 f(B) df(B)` from its closed
/// form `f(B_T)^2 - T` along each partition.
pub fn ito_convergence_test(
    partitions: &[TimeGrid],
    grid: &Arc<DirectionGrid>,
    n_paths: usize,
    f: Evaluation,
    seed: u64,
) -> Result<Vec<MomentReport>> {
    let unit = EmbeddedElement::unit(grid).evaluate(Evaluation::new(f.index(), grid)?);
    l2_convergence("stochastic integral", partitions, n_paths, seed, |w, tg| {
        let sum: f64 = w.windows(2).map(|d| 2.0 * unit * d[0] * unit * (d[1] - d[0])).sum();
        let last = unit * w[w.len() - 1];
        sum - (last * last - tg.horizon() * unit * unit)
    })
}

fn running_integral(x: &[f64], upto: usize) -> f64 {
    x[..=upto].windows(2).map(|d| 2.0 * d[0] * (d[1] - d[0])).sum()
}

/// `E[(I_{t2} - I_{t1}) g(f(B_{t1}))] = 0` for `I = int 2 f(B) df(B)`.
pub fn ito_martingale_test(paths: &PathSet, f: Evaluation, t1_idx: usize, t2_idx: usize) -> Result<Vec<MomentReport>> {
    paths.require(MIN_PATHS)?;
    paths.check_evaluation(f)?;
    paths.check_time_index(t2_idx)?;
    if t1_idx > t2_idx {
        return Err(Error::InvalidArgument(format!("need t1 <= t2, got indices {t1_idx} > {t2_idx}")));
    }
    let rows: Vec<(f64, f64)> = paths
        .paths()
        .map(|p| {
            let x = p.projected(f);
            (running_integral(&x, t2_idx) - running_integral(&x, t1_idx), x[t1_idx])
        })
        .collect();
    Ok(super::TestFunction::default_battery()
        .iter()
        .map(|g| {
            let acc: RunningMoments = rows.iter().map(|(d, x)| d * g.apply(*x)).collect();
            MomentReport::from_moments(format!("integral martingale, g={}", g.name()), &acc, 0.0)
        })
        .collect())
}

/// The compensator `B_t^2 - int 2 B dB` along each path: its mean against
/// `t`, and how many of the per-path elements pass the support-function
/// test.
#[derive(Debug, Clone, Serialize)]
pub struct CompensatorReport {
    pub moment: MomentReport,
    pub support_like: usize,
    pub n_paths: usize,
}

pub fn compensator_test(paths: &PathSet, t_idx: usize) -> Result<CompensatorReport> {
    paths.require(MIN_PATHS)?;
    paths.check_time_index(t_idx)?;
    let t = paths.timegrid().times()[t_idx];
    // Each path gives c (e e) for a scalar c. The subadditivity violation is
    // positively homogeneous, so it is computed once per sign.
    let ee = paths.shape().product(paths.shape())?;
    let (up, down) = (ee.subadditivity_violation(), ee.neg().subadditivity_violation());
    let mut acc = RunningMoments::new();
    let mut support_like = 0;
    for p in paths.paths() {
        let w = p.scalars();
        let c = w[t_idx] * w[t_idx] - running_integral(w, t_idx);
        acc.push(c);
        if (if c >= 0.0 { c * up } else { -c * down }) <= SUPPORT_LIKE_TOL {
            support_like += 1;
        }
    }
    Ok(CompensatorReport {
        moment: MomentReport::from_moments("compensator", &acc, t),
        support_like,
        n_paths: paths.n_paths(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brownian::simulate_bm;

    fn paths(n_steps: usize, n: usize, seed: u64) -> (PathSet, Evaluation) {
        let grid = DirectionGrid::circle(8).unwrap();
        let tg = TimeGrid::uniform(n_steps, 1.0).unwrap();
        let p = simulate_bm(&tg, &grid, n, seed).unwrap();
        (p, Evaluation::new(5, &grid).unwrap())
    }

    #[test]
    fn qv_on_a_coarsening_partition() {
        let (ps, f) = paths(8, 1, 1);
        let path = ps.path(0);
        let x = path.projected(f);
        let coarse = TimeGrid::uniform(2, 1.0).unwrap();
        let expected = (x[4] - x[0]).powi(2) + (x[8] - x[4]).powi(2);
        assert_eq!(quadratic_variation(&path, f, &coarse).unwrap(), expected);
        let off = TimeGrid::uniform(3, 1.0).unwrap();
        assert!(matches!(quadratic_variation(&path, f, &off), Err(Error::PartitionOutOfRange(_))));
    }

    #[test]
    fn left_point_sum_matches_algebraic_identity() {
        // sum 2 x_j (x_{j+1} - x_j) = x_n^2 - sum (x_{j+1} - x_j)^2 exactly in exact arithmetic.
        let (ps, f) = paths(64, 3, 9);
        for p in ps.paths() {
            let g = Integrand::from_history(&p, f, |h| 2.0 * h[h.len() - 1]);
            let i = ito_integral(&p, &g, f).unwrap();
            let x = p.projected(f);
            let qv = quadratic_variation(&p, f, p.timegrid()).unwrap();
            assert!((i - (x[64] * x[64] - qv)).abs() < 1e-12);
        }
    }

    #[test]
    fn anticipating_integrand_is_rejected() {
        let (ps, f) = paths(4, 1, 2);
        let g = Integrand::with_dependencies(vec![1.0; 4], vec![0, 2, 2, 3]).unwrap();
        assert_eq!(ito_integral(&ps.path(0), &g, f), Err(Error::NonAdaptedIntegrand { step: 1, depends_on: 2 }));
        assert!(ito_integral(&ps.path(0), &Integrand::adapted(vec![1.0; 3]), f).is_err());
    }

    #[test]
    fn l2_errors_track_the_mesh() {
        let grid = DirectionGrid::line();
        let f = Evaluation::new(0, &grid).unwrap();
        let parts: Vec<TimeGrid> = [8, 32].iter().map(|&n| TimeGrid::uniform(n, 1.0).unwrap()).collect();
        for r in qv_convergence_test(&parts, &grid, 4000, f, 5).unwrap() {
            assert!(r.within(4.5), "{r:?}");
        }
        for r in ito_convergence_test(&parts, &grid, 4000, f, 6).unwrap() {
            assert!(r.within(4.5), "{r:?}");
        }
    }

    #[test]
    fn integral_is_a_martingale_and_compensator_is_support_like() {
        let (ps, f) = paths(16, 5000, 4);
        for r in ito_martingale_test(&ps, f, 8, 16).unwrap() {
            assert!(r.within(4.5), "{r:?}");
        }
        let c = compensator_test(&ps, 16).unwrap();
        assert_eq!(c.support_like, c.n_paths);
        assert!(c.moment.within(4.5), "{:?}", c.moment);
    }
}
