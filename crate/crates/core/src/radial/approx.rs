use super::{DiscreteRadial, RadialMeasure};
use crate::error::{Error, Result};

/// Replaces `ν` by atoms at the grid points `t_1 > … > t_m`.
///
/// The atom at `t_j` carries `S(t_j) - S(t_{j-1})` (with `S(t_0) = 0`), i.e. the
/// mass of the cell `(t_j, t_{j-1}]` is pushed onto its left edge. The result
/// satisfies `S̃(t) = S(t_j)` on `[t_{j+1}, t_j)` and `S̃(t) = S(t_m)` below
/// the grid; mass under `t_m` is dropped, so the approximation has finite
/// total mass `S(t_m)`.
pub fn approximate_piecewise_constant(
    measure: &dyn RadialMeasure,
    grid: &[f64],
) -> Result<DiscreteRadial> {
    if let Some(d) = measure.as_any().downcast_ref::<DiscreteRadial>() {
        return Ok(d.clone());
    }
    if grid.is_empty() {
        return Err(Error::Argument("approximation grid is empty".into()));
    }
    if grid.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::Argument("grid points must be positive and finite".into()));
    }
    if grid.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Argument("grid must be strictly decreasing".into()));
    }
    let mut weights = Vec::with_capacity(grid.len());
    let mut previous = 0.0;
    for &t in grid {
        let s = measure.survival(t)?;
        weights.push((s - previous).max(0.0));
        previous = s;
    }
    DiscreteRadial::new(grid.to_vec(), weights)
}

/// `sup |S̃(t) - S(t)|` over the probe points.
pub fn sup_error_on(
    approx: &dyn RadialMeasure,
    exact: &dyn RadialMeasure,
    probes: &[f64],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &t in probes {
        worst = worst.max((approx.survival(t)? - exact.survival(t)?).abs());
    }
    Ok(worst)
}
