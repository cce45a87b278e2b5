//! Monte Carlo checks of the distributional and martingale
//! characterizations of `f(B_t)` for an evaluation functional `f`.

use serde::Serialize;

use super::{PathSet, TimeGrid, MIN_PATHS, MIN_PATHS_RIESZ};
use crate::embedding::Evaluation;
use crate::error::{Error, Result};
use crate::stats::{MomentReport, RunningMoments};

/// Bounded-growth test functions `g` applied to `f(B_s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunction {
    One,
    Identity,
    Sign,
    ClippedSquare,
}

impl TestFunction {
    pub fn default_battery() -> [TestFunction; 4] {
        [Self::One, Self::Identity, Self::Sign, Self::ClippedSquare]
    }

    pub fn apply(self, x: f64) -> f64 {
        match self {
            Self::One => 1.0,
            Self::Identity => x,
            Self::Sign => {
                if x > 0.0 {
                    1.0
                } else if x < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            Self::ClippedSquare => (x * x).min(10.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::One => "1",
            Self::Identity => "x",
            Self::Sign => "sign(x)",
            Self::ClippedSquare => "min(x^2,10)",
        }
    }
}

fn moments<I: IntoIterator<Item = f64>>(xs: I) -> RunningMoments {
    xs.into_iter().collect()
}

fn check_pair(paths: &PathSet, s_idx: usize, t_idx: usize) -> Result<()> {
    paths.check_time_index(s_idx)?;
    paths.check_time_index(t_idx)?;
    if s_idx > t_idx {
        return Err(Error::InvalidArgument(format!("need s <= t, got indices {s_idx} > {t_idx}")));
    }
    Ok(())
}

/// Mean, variance and excess kurtosis of each increment, and the
/// correlation of every pair of distinct increments.
pub fn increments_test(paths: &PathSet, f: Evaluation) -> Result<Vec<MomentReport>> {
    paths.require(MIN_PATHS)?;
    paths.check_evaluation(f)?;
    let n = paths.n_paths();
    let steps: Vec<f64> = paths.timegrid().steps().collect();
    let incs: Vec<Vec<f64>> = (0..steps.len())
        .map(|i| {
            let (a, b) = (paths.column(i, f), paths.column(i + 1, f));
            b.iter().zip(&a).map(|(y, x)| y - x).collect()
        })
        .collect();
    let mut out = Vec::new();
    for (i, (d, &h)) in incs.iter().zip(&steps).enumerate() {
        out.push(MomentReport::from_moments(format!("increment[{i}] mean"), &moments(d.iter().copied()), 0.0));
        out.push(MomentReport::from_moments(format!("increment[{i}] variance"), &moments(d.iter().map(|x| x * x)), h));
        let mean = d.iter().sum::<f64>() / n as f64;
        let m2 = d.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        let m4 = d.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n as f64;
        out.push(MomentReport::new(
            format!("increment[{i}] excess kurtosis"),
            m4 / (m2 * m2) - 3.0,
            0.0,
            (24.0 / n as f64).sqrt(),
        ));
    }
    for i in 0..incs.len() {
        for j in i + 1..incs.len() {
            let norm = (steps[i] * steps[j]).sqrt();
            let acc = moments(incs[i].iter().zip(&incs[j]).map(|(a, b)| a * b / norm));
            out.push(MomentReport::from_moments(format!("increment[{i},{j}] correlation"), &acc, 0.0));
        }
    }
    Ok(out)
}

/// `min(t_i, t_j)` over the positive times of `timegrid`.
pub fn theoretical_covariance(timegrid: &TimeGrid) -> Vec<Vec<f64>> {
    let t = &timegrid.times()[1..];
    t.iter().map(|&a| t.iter().map(|&b| a.min(b)).collect()).collect()
}

/// Empirical covariance of `(f(B_{t_1}), ..., f(B_{t_m}))` against
/// `min(t_i, t_j)`.
#[derive(Debug, Clone, Serialize)]
pub struct CovarianceReport {
    pub times: Vec<f64>,
    pub theoretical: Vec<Vec<f64>>,
    pub empirical: Vec<Vec<f64>>,
    pub stderr: Vec<Vec<f64>>,
    pub entries: Vec<MomentReport>,
}

impl CovarianceReport {
    pub fn max_abs_z(&self) -> f64 {
        self.entries.iter().map(|r| r.z_score.abs()).fold(0.0, f64::max)
    }
}

pub fn covariance_test(paths: &PathSet, f: Evaluation) -> Result<CovarianceReport> {
    paths.require(MIN_PATHS)?;
    paths.check_evaluation(f)?;
    let tg = paths.timegrid();
    let m = tg.len() - 1;
    let cols: Vec<Vec<f64>> = (1..=m).map(|k| paths.column(k, f)).collect();
    let centered: Vec<Vec<f64>> = cols
        .iter()
        .map(|c| {
            let mean = c.iter().sum::<f64>() / c.len() as f64;
            c.iter().map(|x| x - mean).collect()
        })
        .collect();
    let theoretical = theoretical_covariance(tg);
    let n = paths.n_paths() as f64;
    let mut empirical = vec![vec![0.0; m]; m];
    let mut stderr = vec![vec![0.0; m]; m];
    let mut entries = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let acc = moments(centered[i].iter().zip(&centered[j]).map(|(a, b)| a * b));
            empirical[i][j] = acc.mean() * n / (n - 1.0);
            stderr[i][j] = acc.stderr();
            if j >= i {
                entries.push(MomentReport::new(
                    format!("cov[{i},{j}]"),
                    empirical[i][j],
                    theoretical[i][j],
                    stderr[i][j],
                ));
            }
        }
    }
    Ok(CovarianceReport { times: tg.times()[1..].to_vec(), theoretical, empirical, stderr, entries })
}

fn tail_sums(u: &[f64]) -> Vec<f64> {
    let mut s = vec![0.0; u.len()];
    let mut acc = 0.0;
    for i in (0..u.len()).rev() {
        acc += u[i];
        s[i] = acc;
    }
    s
}

fn check_u(timegrid: &TimeGrid, u: &[f64]) -> Result<()> {
    if u.len() != timegrid.len() - 1 {
        return Err(Error::DimensionMismatch { expected: timegrid.len() - 1, found: u.len() });
    }
    Ok(())
}

/// `prod_i exp(0.5 (u_i + ... + u_m)^2 (t_i - t_{i-1}))`, the joint
/// moment generating function of `(W_{t_1}, ..., W_{t_m})`.
pub fn mgf_theoretical(timegrid: &TimeGrid, u: &[f64]) -> Result<f64> {
    check_u(timegrid, u)?;
    let s = tail_sums(u);
    Ok(s.iter().zip(timegrid.steps()).map(|(si, h)| 0.5 * si * si * h).sum::<f64>().exp())
}

/// The same product with the factor `1/2` dropped on the first interval.
/// Inconsistent with the covariance `min(t_i, t_j)`; kept so that a run can
/// show it is rejected.
pub fn mgf_unhalved_variant(timegrid: &TimeGrid, u: &[f64]) -> Result<f64> {
    check_u(timegrid, u)?;
    let s = tail_sums(u);
    let exponent: f64 = s
        .iter()
        .zip(timegrid.steps())
        .enumerate()
        .map(|(i, (si, h))| if i == 0 { si * si * h } else { 0.5 * si * si * h })
        .sum();
    Ok(exponent.exp())
}

fn mgf_empirical(paths: &PathSet, f: Evaluation, u: &[f64]) -> RunningMoments {
    let m = u.len();
    let cols: Vec<Vec<f64>> = (1..=m).map(|k| paths.column(k, f)).collect();
    moments((0..paths.n_paths()).map(|p| (0..m).map(|k| u[k] * cols[k][p]).sum::<f64>().exp()))
}

/// Empirical `E exp(sum_k u_k f(B_{t_k}))` against [`mgf_theoretical`].
/// Fails with `UnstableMoment` when the standard error exceeds a quarter of
/// the theoretical value. The exact standard error
/// `sqrt((phi(2u) - phi(u)^2) / n)` is used alongside the sample one, which
/// underestimates badly when the tail is heavy.
pub fn mgf_test(paths: &PathSet, f: Evaluation, u: &[f64]) -> Result<MomentReport> {
    paths.require(MIN_PATHS)?;
    paths.check_evaluation(f)?;
    let theoretical = mgf_theoretical(paths.timegrid(), u)?;
    let doubled: Vec<f64> = u.iter().map(|x| 2.0 * x).collect();
    let exact_se = ((mgf_theoretical(paths.timegrid(), &doubled)? - theoretical * theoretical).max(0.0)
        / paths.n_paths() as f64)
        .sqrt();
    let acc = mgf_empirical(paths, f, u);
    let stderr = acc.stderr().max(exact_se);
    if stderr > 0.25 * theoretical {
        return Err(Error::UnstableMoment { stderr, theoretical });
    }
    Ok(MomentReport::from_moments("mgf", &acc, theoretical))
}

/// Empirical mgf against [`mgf_unhalved_variant`].
pub fn mgf_variant_test(paths: &PathSet, f: Evaluation, u: &[f64]) -> Result<MomentReport> {
    paths.require(MIN_PATHS)?;
    paths.check_evaluation(f)?;
    let theoretical = mgf_unhalved_variant(paths.timegrid(), u)?;
    let acc = mgf_empirical(paths, f, u);
    Ok(MomentReport::from_moments("mgf (unhalved variant)", &acc, theoretical))
}

/// `E[(f(B_t)^2 - f(B_s)^2 - (t - s)) g(f(B_s))] = 0` for each `g`.
pub fn martingale_sq_test(
    paths: &PathSet,
    f: Evaluation,
    s_idx: usize,
    t_idx: usize,
    test_fns: &[TestFunction],
) -> Result<Vec<MomentReport>> {
    paths.require(MIN_PATHS)?;
    paths.check_evaluation(f)?;
    check_pair(paths, s_idx, t_idx)?;
    let times = paths.timegrid().times();
    let dt = times[t_idx] - times[s_idx];
    let (xs, xt) = (paths.column(s_idx, f), paths.column(t_idx, f));
    Ok(test_fns
        .iter()
        .map(|g| {
            let acc = moments(xs.iter().zip(&xt).map(|(&a, &b)| (b * b - a * a - dt) * g.apply(a)));
            MomentReport::from_moments(format!("martingale square, g={}", g.name()), &acc, 0.0)
        })
        .collect())
}

/// `E[2 f(B_t) f(B_s)] = 2 min(s, t)`.
pub fn wiener_covariance_test(paths: &PathSet, f: Evaluation, s_idx: usize, t_idx: usize) -> Result<MomentReport> {
    paths.require(MIN_PATHS)?;
    paths.check_evaluation(f)?;
    check_pair(paths, s_idx, t_idx)?;
    let s = paths.timegrid().times()[s_idx];
    let (xs, xt) = (paths.column(s_idx, f), paths.column(t_idx, f));
    let acc = moments(xs.iter().zip(&xt).map(|(a, b)| 2.0 * a * b));
    Ok(MomentReport::from_moments("2 cross moment", &acc, 2.0 * s))
}

/// First, second and fourth moments of `f(B_t) - f(B_s)` against
/// `0`, `(t-s)` and `3 (t-s)^2`, and orthogonality of the increment to each
/// `g(f(B_s))`.
pub fn riesz_moment_test(paths: &PathSet, f: Evaluation, s_idx: usize, t_idx: usize) -> Result<Vec<MomentReport>> {
    paths.require(MIN_PATHS_RIESZ)?;
    paths.check_evaluation(f)?;
    check_pair(paths, s_idx, t_idx)?;
    let times = paths.timegrid().times();
    let dt = times[t_idx] - times[s_idx];
    let unit = paths.shape().evaluate(f);
    let (xs, xt) = (paths.column(s_idx, f), paths.column(t_idx, f));
    let d: Vec<f64> = xt.iter().zip(&xs).map(|(b, a)| b - a).collect();
    let mut out = vec![
        MomentReport::from_moments("increment first moment", &moments(d.iter().copied()), 0.0),
        MomentReport::from_moments("increment second moment", &moments(d.iter().map(|x| x * x)), dt * unit * unit),
        MomentReport::from_moments(
            "increment fourth moment",
            &moments(d.iter().map(|x| x.powi(4))),
            3.0 * dt * dt * unit.powi(4),
        ),
    ];
    for g in TestFunction::default_battery() {
        let acc = moments(d.iter().zip(&xs).map(|(x, &a)| x * g.apply(a)));
        out.push(MomentReport::from_moments(format!("increment orthogonality, g={}", g.name()), &acc, 0.0));
    }
    Ok(out)
}

/// `E ||B_t||` and `E ||B_t||^2` in the sup norm against `sqrt(2t/pi)` and
/// `t` times the matching powers of `||e||`.
pub fn bochner_integrability_test(paths: &PathSet, t_idx: usize) -> Result<Vec<MomentReport>> {
    paths.require(MIN_PATHS)?;
    paths.check_time_index(t_idx)?;
    let t = paths.timegrid().times()[t_idx];
    let norm_e = paths.shape().values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let norms: Vec<f64> = paths.paths().map(|p| p.scalars()[t_idx].abs() * norm_e).collect();
    Ok(vec![
        MomentReport::from_moments(
            "expected sup norm",
            &moments(norms.iter().copied()),
            (2.0 * t / std::f64::consts::PI).sqrt() * norm_e,
        ),
        MomentReport::from_moments(
            "expected squared sup norm",
            &moments(norms.iter().map(|x| x * x)),
            t * norm_e * norm_e,
        ),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brownian::simulate_bm;
    use crate::embedding::DirectionGrid;

    fn setup(times: &[f64], n: usize, seed: u64) -> (PathSet, Evaluation) {
        let grid = DirectionGrid::circle(8).unwrap();
        let tg = TimeGrid::from_positive(times).unwrap();
        let paths = simulate_bm(&tg, &grid, n, seed).unwrap();
        let f = Evaluation::new(3, &grid).unwrap();
        (paths, f)
    }

    #[test]
    fn mgf_closed_forms() {
        let tg = TimeGrid::from_positive(&[1.0, 2.0]).unwrap();
        let u = [0.5, 0.5];
        // Var(0.5 W_1 + 0.5 W_2) = 0.25 + 0.25 * 2 + 2 * 0.25 * 1 = 1.25.
        assert!((mgf_theoretical(&tg, &u).unwrap() - 0.625f64.exp()).abs() < 1e-14);
        assert!((mgf_unhalved_variant(&tg, &u).unwrap() - 1.125f64.exp()).abs() < 1e-14);
        assert!(mgf_theoretical(&tg, &[1.0]).is_err());
    }

    #[test]
    fn covariance_oracle() {
        let tg = TimeGrid::from_positive(&[0.5, 1.0, 3.0]).unwrap();
        let v = theoretical_covariance(&tg);
        assert_eq!(v, vec![vec![0.5, 0.5, 0.5], vec![0.5, 1.0, 1.0], vec![0.5, 1.0, 3.0]]);
    }

    #[test]
    fn batteries_pass_on_simulated_paths() {
        let (paths, f) = setup(&[0.25, 0.5, 1.0], 20_000, 11);
        for r in increments_test(&paths, f).unwrap() {
            assert!(r.within(4.5), "{r:?}");
        }
        assert!(covariance_test(&paths, f).unwrap().max_abs_z() <= 4.5);
        assert!(mgf_test(&paths, f, &[0.3, -0.2, 0.4]).unwrap().within(4.5));
        for r in martingale_sq_test(&paths, f, 1, 3, &TestFunction::default_battery()).unwrap() {
            assert!(r.within(4.5), "{r:?}");
        }
        assert!(wiener_covariance_test(&paths, f, 1, 3).unwrap().within(4.5));
        for r in riesz_moment_test(&paths, f, 1, 2).unwrap() {
            assert!(r.within(4.5), "{r:?}");
        }
        for r in bochner_integrability_test(&paths, 3).unwrap() {
            assert!(r.within(4.5), "{r:?}");
        }
    }

    #[test]
    fn equal_times_give_exact_zero() {
        let (paths, f) = setup(&[1.0], 1000, 3);
        for r in martingale_sq_test(&paths, f, 1, 1, &TestFunction::default_battery()).unwrap() {
            assert_eq!(r.empirical, 0.0);
            assert_eq!(r.z_score, 0.0);
        }
        assert!(martingale_sq_test(&paths, f, 1, 0, &[TestFunction::One]).is_err());
    }

    #[test]
    fn path_count_guards() {
        let (paths, f) = setup(&[1.0], 999, 3);
        assert_eq!(increments_test(&paths, f), Err(Error::TooFewPaths { required: 1000, available: 999 }));
        let (paths, f) = setup(&[1.0], 5000, 3);
        assert!(matches!(riesz_moment_test(&paths, f, 0, 1), Err(Error::TooFewPaths { .. })));
    }

    #[test]
    fn heavy_mgf_is_flagged_unstable() {
        let (paths, f) = setup(&[1.0], 1000, 5);
        assert!(matches!(mgf_test(&paths, f, &[6.0]), Err(Error::UnstableMoment { .. })));
    }
}
