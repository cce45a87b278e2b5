use std::fmt::Write;

use setbm::rng::derive_seed;
use setbm::{distribution_function, exponential_pair_analytic_f, exponential_pair_variable, ConvexSet};

use crate::error::CliError;
use crate::output::{emit, fmt_f64};
use crate::{load_settings, positive, DistfnArgs};

pub(crate) fn run(args: &DistfnArgs) -> Result<bool, CliError> {
    let s = load_settings(&args.common, &["seed", "lambda", "n_samples", "y_max", "y_steps"])?;
    let seed: u64 = s.require("seed", args.seed)?;
    let lambda = s.get_or("lambda", args.lambda, 1.0)?;
    let g = exponential_pair_variable(lambda)?;
    let n = positive("n_samples", s.get_or("n_samples", args.n_samples, 100_000)?)?;
    let y_max = s.get_or("y_max", args.y_max, 4.0 / lambda)?;
    if !(y_max.is_finite() && y_max > 0.0) {
        return Err(CliError::Config(format!("y_max must be positive, got {y_max}")));
    }
    let steps = positive("y_steps", s.get_or("y_steps", args.y_steps, 8)?)?;
    let ys: Vec<f64> = (0..=steps).map(|k| k as f64 * y_max / steps as f64).collect();

    let mut out = String::from("y1,y2,mc_estimate,half_width,analytic,abs_err\n");
    let (mut rows, mut covered) = (0u64, 0usize);
    for (i, &y1) in ys.iter().enumerate() {
        for &y2 in &ys[i..] {
            let est = distribution_function(&g, &ConvexSet::interval(y1, y2)?, n, derive_seed(seed, rows))?;
            let exact = exponential_pair_analytic_f(lambda, y1, y2)?;
            let err = (est.value - exact).abs();
            covered += usize::from(err <= est.half_width);
            writeln!(
                out,
                "{},{},{},{},{},{}",
                fmt_f64(y1),
                fmt_f64(y2),
                fmt_f64(est.value),
                fmt_f64(est.half_width),
                fmt_f64(exact),
                fmt_f64(err)
            )
            .unwrap();
            rows += 1;
        }
    }
    emit(args.common.output.as_deref(), &out)?;
    eprintln!("setbm distfn: {covered}/{rows} rows within the 95% half-width");
    Ok(true)
}
