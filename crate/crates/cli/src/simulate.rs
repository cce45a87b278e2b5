use std::fmt::Write;

use serde::Serialize;
use setbm::simulate_bm;

use crate::error::CliError;
use crate::output::{emit, fmt_f64, to_json, Format, SCHEMA_VERSION};
use crate::{load_settings, PathSetup, SimulateArgs, PATH_KEYS};

#[derive(Serialize)]
struct Params {
    seed: u64,
    n_paths: usize,
    dim: usize,
    grid_size: usize,
    times: Vec<f64>,
}

#[derive(Serialize)]
struct Document {
    schema_version: u32,
    command: &'static str,
    params: Params,
    /// Scalar driver `W(t_i)` per path.
    paths: Vec<Vec<f64>>,
    /// `W(t_i) e` per path and time, present with `full`.
    #[serde(skip_serializing_if = "Option::is_none")]
    embedded: Option<Vec<Vec<Vec<f64>>>>,
}

pub(crate) fn run(args: &SimulateArgs) -> Result<bool, CliError> {
    let mut keys = PATH_KEYS.to_vec();
    keys.extend(["full", "format"]);
    let s = load_settings(&args.common, &keys)?;
    let setup = PathSetup::resolve(&args.paths, &s, 10, &[1.0])?;
    let full = s.get_or("full", args.full.then_some(true), false)?;
    let format = s.get_or("format", args.format, Format::Csv)?;
    let paths = simulate_bm(&setup.timegrid, &setup.grid, setup.n_paths, setup.seed)?;
    let times = setup.timegrid.times();

    let content = match format {
        Format::Csv => {
            let mut out = String::from("path,time,w");
            if full {
                for k in 0..setup.grid.len() {
                    write!(out, ",b_{k}").unwrap();
                }
            }
            out.push('\n');
            for p in paths.paths() {
                for (i, (&t, &w)) in times.iter().zip(p.scalars()).enumerate() {
                    write!(out, "{},{},{}", p.index(), fmt_f64(t), fmt_f64(w)).unwrap();
                    if full {
                        for v in p.value(i).values() {
                            write!(out, ",{}", fmt_f64(*v)).unwrap();
                        }
                    }
                    out.push('\n');
                }
            }
            out
        }
        Format::Json => to_json(&Document {
            schema_version: SCHEMA_VERSION,
            command: "simulate",
            params: Params {
                seed: setup.seed,
                n_paths: setup.n_paths,
                dim: setup.grid.dimension(),
                grid_size: setup.grid.len(),
                times: times.to_vec(),
            },
            paths: paths.paths().map(|p| p.scalars().to_vec()).collect(),
            embedded: full.then(|| {
                paths.paths().map(|p| (0..times.len()).map(|i| p.value(i).values().to_vec()).collect()).collect()
            }),
        }),
    };
    emit(args.common.output.as_deref(), &content)?;
    Ok(true)
}
