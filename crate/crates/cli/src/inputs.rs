//! JSON inputs and the defaults used when none is given.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use osculate::curves::PlaneCurve;
use osculate::moebius::CircleDiffeo;
use osculate::taylor::SmoothFunction;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

pub type Fallible<T> = std::result::Result<T, Box<dyn std::error::Error>>;

/// `{"function": {...}, "interval": [a, b], "degree": n}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionSpec {
    pub function: SmoothFunction,
    pub interval: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Fallible<T> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?)
}

pub fn load_curve(path: &Path) -> Fallible<PlaneCurve> {
    let c: PlaneCurve = read_json(path)?;
    Ok(c.validated()?)
}

pub fn load_function(path: &Path) -> Fallible<FunctionSpec> {
    read_json(path)
}

pub fn load_diffeo(path: &Path) -> Fallible<CircleDiffeo> {
    let f: CircleDiffeo = read_json(path)?;
    f.validate()?;
    Ok(f)
}

pub fn default_spiral(span: f64) -> PlaneCurve {
    PlaneCurve::log_spiral(0.2, 0.0, span).expect("valid spiral")
}

pub const TAIT_KNESER_SPAN: f64 = 3.0 * PI;
pub const CONIC_SPAN: f64 = TAU;

pub fn default_taylor(degree: usize) -> FunctionSpec {
    FunctionSpec {
        function: SmoothFunction::monomial(degree + 1),
        interval: [-1.0, 1.0],
        degree: Some(degree),
    }
}

pub fn default_moebius() -> FunctionSpec {
    FunctionSpec {
        function: SmoothFunction::Tan,
        interval: [0.1, 1.4],
        degree: None,
    }
}

pub fn default_gaussian() -> FunctionSpec {
    FunctionSpec {
        function: SmoothFunction::Gaussian,
        interval: [-6.0, 6.0],
        degree: None,
    }
}
