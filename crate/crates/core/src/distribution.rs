//! Set-valued random variables and their distribution functions
//! `F(Y) = P(Γ ⊆ Y)`, estimated by Monte Carlo, together with the
//! embedded form `P(j(Γ) <= j(Y))` and the exponential-pair interval model
//! with its closed form.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::embedding::{embed, DirectionGrid};
use crate::error::{check_dim, Error, Result};
use crate::geometry::{excess, ConvexSet};
use crate::rng::{map_chunks, open_unit, stream_rng, StreamRng, CHUNK};

type Sampler = dyn Fn(&mut StreamRng) -> ConvexSet + Send + Sync;

/// A seeded sampler of convex sets. Draw `i` of seed `s` depends only on
/// `(s, i / CHUNK)` and the draws before it in its chunk.
#[derive(Clone)]
pub struct SetRandomVariable {
    dim: usize,
    sampler: Arc<Sampler>,
}

impl fmt::Debug for SetRandomVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetRandomVariable").field("dim", &self.dim).finish_non_exhaustive()
    }
}

impl SetRandomVariable {
    pub fn new(dim: usize, sampler: impl Fn(&mut StreamRng) -> ConvexSet + Send + Sync + 'static) -> Self {
        Self { dim, sampler: Arc::new(sampler) }
    }

    /// The degenerate variable that always returns `set`.
    pub fn constant(set: ConvexSet) -> Self {
        Self::new(set.dimension(), move |_| set.clone())
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn draw(&self, rng: &mut StreamRng) -> ConvexSet {
        (self.sampler)(rng)
    }

    /// Runs `visit` on every draw of chunk `c` and folds the chunk results.
    fn fold_draws<T: Send>(
        &self,
        n: usize,
        seed: u64,
        init: impl Fn() -> T + Sync,
        visit: impl Fn(&mut T, ConvexSet) + Sync,
    ) -> Vec<T> {
        map_chunks(n, CHUNK, |c, range| {
            let mut rng = stream_rng(seed, c as u64);
            let mut acc = init();
            for _ in range {
                visit(&mut acc, self.draw(&mut rng));
            }
            acc
        })
    }

    /// The first `n` draws for `seed`, in order.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<ConvexSet> {
        self.fold_draws(n, seed, Vec::new, |v, s| v.push(s)).into_iter().flatten().collect()
    }
}

/// Monte Carlo estimate of a probability with its 95% Wald half-width
/// `1.96 sqrt(p(1-p)/n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistributionEstimate {
    pub value: f64,
    pub half_width: f64,
    pub n_samples: usize,
}

impl DistributionEstimate {
    pub fn from_hits(hits: usize, n: usize) -> Self {
        let p = hits as f64 / n as f64;
        Self { value: p, half_width: 1.96 * (p * (1.0 - p) / n as f64).sqrt(), n_samples: n }
    }

    /// `|value - target| <= half_width`.
    pub fn covers(&self, target: f64) -> bool {
        (self.value - target).abs() <= self.half_width
    }
}

/// `F_Γ(Y) = P(Γ ⊆ Y)` from `n` seeded draws.
pub fn distribution_function(
    g: &SetRandomVariable,
    y: &ConvexSet,
    n: usize,
    seed: u64,
) -> Result<DistributionEstimate> {
    if n == 0 {
        return Err(Error::NSamplesZero);
    }
    check_dim(g.dimension(), y.dimension())?;
    let counts = g.fold_draws(
        n,
        seed,
        || Ok(0usize),
        |acc: &mut Result<usize>, s| {
            if let Ok(k) = acc {
                match s.is_subset_of(y) {
                    Ok(true) => *k += 1,
                    Ok(false) => {}
                    Err(e) => *acc = Err(e),
                }
            }
        },
    );
    let mut hits = 0;
    for c in counts {
        hits += c?;
    }
    Ok(DistributionEstimate::from_hits(hits, n))
}

/// Event-by-event comparison of `Γ ⊆ Y` and `j(Γ) <= j(Y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddedDistributionReport {
    pub n_samples: usize,
    pub geometric: DistributionEstimate,
    pub embedded: DistributionEstimate,
    /// Draws where exactly one of the two events holds.
    pub disagreements: usize,
    /// Disagreements not explained by grid resolution.
    pub violations: usize,
}

/// Checks `Γ ⊆ Y ⟺ j(Γ) <= j(Y)` draw by draw. In R^1 the two events must
/// coincide; on coarser grids `j(Γ) <= j(Y)` is only necessary, and a
/// disagreement counts as a violation when the excess of `Γ` over `Y` is
/// larger than the grid can hide.
pub fn embedded_distribution_check(
    g: &SetRandomVariable,
    y: &ConvexSet,
    grid: &Arc<DirectionGrid>,
    n: usize,
    seed: u64,
) -> Result<EmbeddedDistributionReport> {
    if n == 0 {
        return Err(Error::NSamplesZero);
    }
    check_dim(g.dimension(), y.dimension())?;
    check_dim(grid.dimension(), y.dimension())?;
    let jy = embed(y, grid)?;
    #[derive(Default)]
    struct Tally {
        geo: usize,
        emb: usize,
        disagree: usize,
        violations: usize,
    }
    let parts = g.fold_draws(
        n,
        seed,
        || Ok(Tally::default()),
        |acc: &mut Result<Tally>, s| {
            let Ok(t) = acc else { return };
            let step = || -> Result<(bool, bool, f64)> {
                let inside = s.is_subset_of(y)?;
                let below = embed(&s, grid)?.le(&jy)?;
                let gap = if inside != below { excess(&s, y)? } else { 0.0 };
                Ok((inside, below, gap))
            };
            match step() {
                Ok((inside, below, gap)) => {
                    t.geo += usize::from(inside);
                    t.emb += usize::from(below);
                    if inside != below {
                        t.disagree += 1;
                        let slack = grid.resolution() * (s.max_norm() + y.max_norm()) + 1e-12;
                        if inside || gap > slack {
                            t.violations += 1;
                        }
                    }
                }
                Err(e) => *acc = Err(e),
            }
        },
    );
    let mut total = Tally::default();
    for p in parts {
        let p = p?;
        total.geo += p.geo;
        total.emb += p.emb;
        total.disagree += p.disagree;
        total.violations += p.violations;
    }
    if y.dimension() == 1 && total.disagree > 0 {
        return Err(Error::EquivalenceViolation { count: total.disagree });
    }
    Ok(EmbeddedDistributionReport {
        n_samples: n,
        geometric: DistributionEstimate::from_hits(total.geo, n),
        embedded: DistributionEstimate::from_hits(total.emb, n),
        disagreements: total.disagree,
        violations: total.violations,
    })
}

/// Exponential variate with rate `lambda` by inversion, `-ln(U) / lambda`.
pub fn exponential(rng: &mut StreamRng, lambda: f64) -> f64 {
    -open_unit(rng).ln() / lambda
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveLambda(lambda))
    }
}

/// The random interval `[X1, X1 + Z]` with `X1, Z` independent
/// exponentials of rate `lambda`.
pub fn exponential_pair_variable(lambda: f64) -> Result<SetRandomVariable> {
    check_lambda(lambda)?;
    Ok(SetRandomVariable::new(1, move |rng| {
        let x1 = exponential(rng, lambda);
        let z = exponential(rng, lambda);
        ConvexSet::Interval { lo: x1, hi: x1 + z }
    }))
}

/// Closed form `P(y1 <= X1 <= X1 + Z <= y2)
///   = e^{-λ y1} - e^{-λ y2} + λ (y1 - y2) e^{-λ y2}` for `0 <= y1 <= y2`.
/// `y2 = +inf` gives the limit `e^{-λ y1}`.
pub fn exponential_pair_analytic_f(lambda: f64, y1: f64, y2: f64) -> Result<f64> {
    check_lambda(lambda)?;
    if !(y1 >= 0.0 && y1 <= y2) || y1.is_infinite() {
        return Err(Error::InvalidRange(format!("need 0 <= y1 <= y2, got y1 = {y1}, y2 = {y2}")));
    }
    if y2.is_infinite() {
        return Ok((-lambda * y1).exp());
    }
    let e2 = (-lambda * y2).exp();
    Ok((-lambda * y1).exp() - e2 + lambda * (y1 - y2) * e2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::RunningMoments;

    fn iv(lo: f64, hi: f64) -> ConvexSet {
        ConvexSet::interval(lo, hi).unwrap()
    }

    #[test]
    fn constant_variables() {
        let zero = SetRandomVariable::constant(iv(0.0, 0.0));
        let est = distribution_function(&zero, &iv(-1.0, 1.0), 100, 1).unwrap();
        assert_eq!(est.value, 1.0);
        assert_eq!(est.half_width, 0.0);
        let wide = SetRandomVariable::constant(iv(0.0, 3.0));
        assert_eq!(distribution_function(&wide, &iv(0.0, 1.0), 100, 1).unwrap().value, 0.0);
        assert_eq!(distribution_function(&wide, &iv(0.0, 1.0), 0, 1), Err(Error::NSamplesZero));
        let ball = ConvexSet::unit_ball(2);
        assert!(matches!(distribution_function(&wide, &ball, 10, 1), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn analytic_formula_values() {
        assert_eq!(exponential_pair_analytic_f(1.0, 0.0, f64::INFINITY).unwrap(), 1.0);
        assert_eq!(exponential_pair_analytic_f(2.0, 0.7, 0.7).unwrap(), 0.0);
        let v = exponential_pair_analytic_f(1.0, 0.0, 1.0).unwrap();
        assert!((v - (1.0 - 2.0 * (-1f64).exp())).abs() < 1e-15);
        assert!((v - 0.264_241_117_657_115_4).abs() < 1e-15);
        assert!(matches!(exponential_pair_analytic_f(1.0, 2.0, 1.0), Err(Error::InvalidRange(_))));
        assert!(matches!(exponential_pair_analytic_f(1.0, -0.1, 1.0), Err(Error::InvalidRange(_))));
        assert!(matches!(exponential_pair_analytic_f(0.0, 0.0, 1.0), Err(Error::NonPositiveLambda(_))));
    }

    /// Independent route: midpoint quadrature of
    /// `∫_{y1}^{y2} (1 - e^{-λ(y2-x)}) λ e^{-λx} dx`.
    fn quadrature(lambda: f64, y1: f64, y2: f64) -> f64 {
        let n = 200_000;
        let h = (y2 - y1) / n as f64;
        (0..n)
            .map(|i| {
                let x = y1 + (i as f64 + 0.5) * h;
                (1.0 - (-lambda * (y2 - x)).exp()) * lambda * (-lambda * x).exp() * h
            })
            .sum()
    }

    #[test]
    fn analytic_matches_quadrature() {
        for (l, y1, y2) in [(1.0, 0.0, 1.0), (0.5, 0.3, 4.0), (2.0, 0.1, 0.9), (1.3, 1.0, 1.5)] {
            let exact = exponential_pair_analytic_f(l, y1, y2).unwrap();
            assert!((exact - quadrature(l, y1, y2)).abs() < 1e-9, "{l} {y1} {y2}");
        }
    }

    #[test]
    fn exponential_pair_draws() {
        assert!(matches!(exponential_pair_variable(-1.0), Err(Error::NonPositiveLambda(_))));
        let lambda = 2.0;
        let g = exponential_pair_variable(lambda).unwrap();
        let draws = g.sample(50_000, 9);
        assert_eq!(draws, g.sample(50_000, 9));
        let mut lo = RunningMoments::new();
        let mut width = RunningMoments::new();
        for d in &draws {
            let (a, b) = d.as_interval().unwrap();
            assert!(0.0 <= a && a <= b);
            lo.push(a);
            width.push(b - a);
        }
        // Exp(λ) has mean and standard deviation 1/λ.
        let se = (1.0 / lambda) / (draws.len() as f64).sqrt();
        assert!((lo.mean() - 1.0 / lambda).abs() < 3.0 * se);
        assert!((width.mean() - 1.0 / lambda).abs() < 3.0 * se);
    }

    #[test]
    fn embedded_events_agree_on_the_line() {
        let g = exponential_pair_variable(1.0).unwrap();
        let y = iv(0.2, 2.5);
        let rep = embedded_distribution_check(&g, &y, &DirectionGrid::line(), 20_000, 3).unwrap();
        assert_eq!(rep.disagreements, 0);
        assert_eq!(rep.geometric, rep.embedded);
        let direct = distribution_function(&g, &y, 20_000, 3).unwrap();
        assert_eq!(direct, rep.geometric);
    }

    #[test]
    fn embedded_order_is_necessary_in_the_plane() {
        let g = SetRandomVariable::new(2, |rng| {
            let x = exponential(rng, 2.0);
            let y = exponential(rng, 2.0);
            ConvexSet::Polytope { vertices: vec![vec![0.0, 0.0], vec![x, y]] }
        });
        let y = ConvexSet::ball(vec![0.3, 0.3], 0.8).unwrap();
        let grid = DirectionGrid::circle(64).unwrap();
        let rep = embedded_distribution_check(&g, &y, &grid, 10_000, 5).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.embedded.value >= rep.geometric.value);
    }

    #[test]
    fn nested_targets_are_monotone() {
        let g = exponential_pair_variable(1.0).unwrap();
        let small = distribution_function(&g, &iv(0.5, 1.5), 20_000, 11).unwrap();
        let big = distribution_function(&g, &iv(0.25, 3.0), 20_000, 11).unwrap();
        assert!(small.value <= big.value);
    }
}
