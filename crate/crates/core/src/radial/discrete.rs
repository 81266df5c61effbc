use std::any::Any;

use super::{check_inverse_arg, check_survival_arg, RadialMeasure};
use crate::error::{Error, Result};

/// `ν = Σ_k b_k δ_{a_k}` with finitely many atoms `a_1 > a_2 > … > 0`.
///
/// `S` is a right-continuous step function and `S^{-1}` only takes atom
/// values: `S^{-1}(y) = a_k` on `[b_1 + … + b_{k-1}, b_1 + … + b_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteRadial {
    atoms: Vec<f64>,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
}

impl DiscreteRadial {
    pub fn new(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Argument("discrete measure needs at least one atom".into()));
        }
        if atoms.len() != weights.len() {
            return Err(Error::Argument(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        if let Some(a) = atoms.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(Error::Argument(format!("atom {a} is not a positive finite number")));
        }
        if atoms.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Argument("atoms must be strictly decreasing".into()));
        }
        if let Some(b) = weights.iter().find(|b| !(b.is_finite() && **b >= 0.0)) {
            return Err(Error::Argument(format!("weight {b} is not a non-negative finite number")));
        }
        let cumulative: Vec<f64> = weights
            .iter()
            .scan(0.0, |acc, &b| {
                *acc += b;
                Some(*acc)
            })
            .collect();
        if cumulative[cumulative.len() - 1] <= 0.0 {
            return Err(Error::Argument("total mass must be positive".into()));
        }
        Ok(Self {
            atoms,
            weights,
            cumulative,
        })
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of atoms strictly above `t`.
    fn count_above(&self, t: f64) -> usize {
        self.atoms.partition_point(|&a| a > t)
    }
}

impl RadialMeasure for DiscreteRadial {
    fn survival(&self, t: f64) -> Result<f64> {
        check_survival_arg(t)?;
        Ok(match self.count_above(t) {
            0 => 0.0,
            j => self.cumulative[j - 1],
        })
    }

    fn pseudo_inverse(&self, y: f64) -> Result<f64> {
        check_inverse_arg(y, self.total_mass())?;
        let k = self.cumulative.partition_point(|&c| c <= y);
        Ok(self.atoms.get(k).copied().unwrap_or(0.0))
    }

    fn total_mass(&self) -> f64 {
        self.cumulative[self.cumulative.len() - 1]
    }

    fn exponent(&self, t: f64, dim: usize) -> Option<f64> {
        let power = dim as i32 - 1;
        let n = self.count_above(t);
        Some(
            self.atoms[..n]
                .iter()
                .zip(&self.weights)
                .map(|(&a, &b)| b * (1.0 - t / a).powi(power))
                .sum(),
        )
    }

    fn support_sup(&self) -> f64 {
        self.atoms
            .iter()
            .zip(&self.weights)
            .find(|(_, &b)| b > 0.0)
            .map_or(0.0, |(&a, _)| a)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
