use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{
    approximate_piecewise_constant, DiscreteRadial, GalambosRadial, HarmonicRadial, SharedMeasure,
};
use crate::error::{Error, Result};

const KNOWN_TYPES: [&str; 4] = ["galambos", "harmonic", "discrete", "approx"];

/// JSON description of a radial measure.
///
/// ```json
/// {"type":"galambos","theta":1.0,"dim":2}
/// {"type":"harmonic","theta":0.5}
/// {"type":"discrete","atoms":[2,1],"weights":[3,5]}
/// {"type":"approx","of":{"type":"galambos","theta":2,"dim":2},
///  "grid":{"lo":1e-4,"hi":1e2,"points":1000,"spacing":"log"}}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureSpec {
    Galambos {
        theta: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dim: Option<usize>,
    },
    Harmonic {
        theta: f64,
    },
    Discrete {
        atoms: Vec<f64>,
        weights: Vec<f64>,
    },
    Approx {
        of: Box<MeasureSpec>,
        grid: GridSpec,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridSpacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
    #[serde(default = "default_spacing")]
    pub spacing: GridSpacing,
}

fn default_spacing() -> GridSpacing {
    GridSpacing::Log
}

impl GridSpec {
    /// Grid points from `hi` down to `lo`.
    pub fn points(&self) -> Result<Vec<f64>> {
        if !(self.lo > 0.0 && self.lo < self.hi && self.hi.is_finite()) {
            return Err(Error::config("grid", "need 0 < lo < hi < inf"));
        }
        if self.points < 2 {
            return Err(Error::config("grid.points", "need at least 2 points"));
        }
        let last = (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|i| {
                let s = i as f64 / last;
                match self.spacing {
                    GridSpacing::Log => (self.hi.ln() + s * (self.lo.ln() - self.hi.ln())).exp(),
                    GridSpacing::Linear => self.hi + s * (self.lo - self.hi),
                }
            })
            .collect())
    }
}

impl MeasureSpec {
    /// Parses the JSON form, reporting unknown measure types by key.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::config("measure", e.to_string()))?;
        Self::from_value(value)
    }

    pub fn from_value(value: Value) -> Result<Self> {
        check_types(&value, "measure")?;
        serde_json::from_value(value).map_err(|e| Error::config("measure", e.to_string()))
    }

    /// Dimension fixed by the measure itself, if any.
    pub fn dim(&self) -> Option<usize> {
        match self {
            MeasureSpec::Galambos { dim, .. } => *dim,
            MeasureSpec::Approx { of, .. } => of.dim(),
            _ => None,
        }
    }

    /// Builds the measure; `dim` is the sampling dimension when known.
    pub fn build(&self, dim: Option<usize>) -> Result<SharedMeasure> {
        Ok(match self {
            MeasureSpec::Galambos { theta, dim: own } => {
                let d = match (own, dim) {
                    (Some(a), Some(b)) if *a != b => {
                        return Err(Error::config(
                            "dim",
                            format!("galambos measure has dim {a} but {b} was requested"),
                        ))
                    }
                    (Some(a), _) => *a,
                    (None, Some(b)) => b,
                    (None, None) => {
                        return Err(Error::config("dim", "galambos measure needs a dimension"))
                    }
                };
                Arc::new(GalambosRadial::new(*theta, d).map_err(|e| Error::config("theta", e.to_string()))?)
            }
            MeasureSpec::Harmonic { theta } => Arc::new(
                HarmonicRadial::new(*theta).map_err(|e| Error::config("theta", e.to_string()))?,
            ),
            MeasureSpec::Discrete { atoms, weights } => Arc::new(
                DiscreteRadial::new(atoms.clone(), weights.clone())
                    .map_err(|e| Error::config("atoms", e.to_string()))?,
            ),
            MeasureSpec::Approx { of, grid } => {
                let source = of.build(dim)?;
                let points = grid.points()?;
                Arc::new(approximate_piecewise_constant(source.as_ref(), &points)?)
            }
        })
    }
}

fn check_types(value: &Value, path: &str) -> Result<()> {
    let obj = value
        .as_object()
        .ok_or_else(|| Error::config(path, "expected a JSON object"))?;
    let key = format!("{path}.type");
    match obj.get("type") {
        None => return Err(Error::config(key, "missing measure type")),
        Some(Value::String(t)) if KNOWN_TYPES.contains(&t.as_str()) => {}
        Some(other) => {
            return Err(Error::config(
                key,
                format!("unknown measure type {other}, expected one of {KNOWN_TYPES:?}"),
            ))
        }
    }
    if let Some(inner) = obj.get("of") {
        check_types(inner, &format!("{path}.of"))?;
    }
    Ok(())
}
