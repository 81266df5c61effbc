use std::any::Any;

use statrs::function::gamma::ln_gamma;

use super::{check_inverse_arg, check_survival_arg, RadialMeasure};
use crate::error::{Error, Result};

/// `c_θ = (Γ(d) Γ(1/θ) / (Γ(d + 1/θ) θ))^{-θ}`, evaluated through log-Gamma.
pub fn galambos_constant(theta: f64, dim: usize) -> Result<f64> {
    if !(theta > 0.0 && theta.is_finite()) {
        return Err(Error::Argument(format!("theta must be positive, got {theta}")));
    }
    if dim < 2 {
        return Err(Error::Argument(format!("dimension must be at least 2, got {dim}")));
    }
    let d = dim as f64;
    let inv = 1.0 / theta;
    let log_ratio = ln_gamma(d) + ln_gamma(inv) - ln_gamma(d + inv) - theta.ln();
    Ok((-theta * log_ratio).exp())
}

/// Power-law radial measure `ν(dx) = Γ(d+1/θ)/(Γ(d)Γ(1/θ)) x^{-1/θ-1} dx`.
///
/// Generates the `d`-dimensional Galambos copula. In closed form
/// `S^{-1}(y) = c_θ y^{-θ}`, `S(t) = (t / c_θ)^{-1/θ}` and `Λ(t) = t^{-1/θ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GalambosRadial {
    theta: f64,
    dim: usize,
    constant: f64,
}

impl GalambosRadial {
    pub fn new(theta: f64, dim: usize) -> Result<Self> {
        let constant = galambos_constant(theta, dim)?;
        Ok(Self {
            theta,
            dim,
            constant,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    fn check_dim(&self, dim: usize) -> bool {
        dim == self.dim
    }
}

impl RadialMeasure for GalambosRadial {
    fn survival(&self, t: f64) -> Result<f64> {
        check_survival_arg(t)?;
        Ok((t / self.constant).powf(-1.0 / self.theta))
    }

    fn pseudo_inverse(&self, y: f64) -> Result<f64> {
        check_inverse_arg(y, f64::INFINITY)?;
        Ok(self.constant * y.powf(-self.theta))
    }

    fn total_mass(&self) -> f64 {
        f64::INFINITY
    }

    fn density(&self, x: f64) -> Option<f64> {
        if !(x > 0.0) {
            return Some(0.0);
        }
        // -S'(x) = S(x) / (θ x)
        Some((x / self.constant).powf(-1.0 / self.theta) / (self.theta * x))
    }

    fn exponent(&self, t: f64, dim: usize) -> Option<f64> {
        self.check_dim(dim).then(|| t.powf(-1.0 / self.theta))
    }

    fn exponent_derivative(&self, t: f64, order: usize, dim: usize) -> Option<f64> {
        if !self.check_dim(dim) {
            return None;
        }
        let a = 1.0 / self.theta;
        let coeff: f64 = (0..order).map(|j| -a - j as f64).product();
        Some(coeff * t.powf(-a - order as f64))
    }

    fn exponent_inverse(&self, level: f64, dim: usize) -> Option<f64> {
        self.check_dim(dim).then(|| level.powf(-self.theta))
    }

    fn dim_hint(&self) -> Option<usize> {
        Some(self.dim)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
