use serde::Serialize;
use setbm::hukuhara::IdentityReport;
use setbm::{check_gh_identities, gh_diff, ConvexSet, DirectionGrid, GhCase};

use crate::error::CliError;
use crate::output::{emit, to_json, SCHEMA_VERSION};
use crate::setspec::parse_set;
use crate::{load_settings, GhdiffArgs};

#[derive(Serialize)]
struct Params {
    a: ConvexSet,
    b: ConvexSet,
    grid_size: usize,
}

#[derive(Serialize)]
struct Residuals {
    reconstruction: Option<f64>,
    s1_support_like: bool,
    s2_support_like: bool,
}

#[derive(Serialize)]
struct Document {
    schema_version: u32,
    command: &'static str,
    params: Params,
    case: GhCase,
    value: Option<ConvexSet>,
    residuals: Residuals,
    identities_report: IdentityReport,
}

pub(crate) fn run(args: &GhdiffArgs) -> Result<bool, CliError> {
    let s = load_settings(&args.common, &["a", "b", "grid_size"])?;
    let a = parse_set(&s.require::<String>("a", args.a.clone())?)?;
    let b = parse_set(&s.require::<String>("b", args.b.clone())?)?;
    if a.dimension() != b.dimension() {
        return Err(CliError::Config(format!("sets have dimensions {} and {}", a.dimension(), b.dimension())));
    }
    let grid = match s.get("grid_size", args.grid_size)? {
        Some(m) => DirectionGrid::with_size(a.dimension(), m)?,
        None => DirectionGrid::for_dimension(a.dimension())?,
    };
    let result = gh_diff(&a, &b, &grid)?;
    let identities = check_gh_identities(&a, &b, &grid)?;
    let doc = Document {
        schema_version: SCHEMA_VERSION,
        command: "ghdiff",
        params: Params { a, b, grid_size: grid.len() },
        case: result.case,
        value: result.value,
        residuals: Residuals {
            reconstruction: result.residual,
            s1_support_like: result.s1_support_like,
            s2_support_like: result.s2_support_like,
        },
        identities_report: identities,
    };
    emit(args.common.output.as_deref(), &to_json(&doc))?;
    Ok(true)
}
