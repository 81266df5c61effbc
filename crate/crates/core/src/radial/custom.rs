use std::any::Any;
use std::fmt;

use super::{check_inverse_arg, check_survival_arg, invert_survival, RadialMeasure, BISECTION_TOL};
use crate::error::Result;

type Func = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// A measure given only by its survival function and, optionally, its density.
///
/// The pseudo-inverse is found by bisection and the generator falls back to
/// quadrature of the density.
pub struct CustomRadial {
    name: String,
    survival: Func,
    density: Option<Func>,
    total_mass: f64,
}

impl CustomRadial {
    pub fn new(
        name: impl Into<String>,
        total_mass: f64,
        survival: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            survival: Box::new(survival),
            density: None,
            total_mass,
        }
    }

    pub fn with_density(mut self, density: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.density = Some(Box::new(density));
        self
    }
}

impl fmt::Debug for CustomRadial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomRadial")
            .field("name", &self.name)
            .field("total_mass", &self.total_mass)
            .field("has_density", &self.density.is_some())
            .finish()
    }
}

impl RadialMeasure for CustomRadial {
    fn survival(&self, t: f64) -> Result<f64> {
        check_survival_arg(t)?;
        if t == f64::INFINITY {
            return Ok(0.0);
        }
        Ok((self.survival)(t))
    }

    fn pseudo_inverse(&self, y: f64) -> Result<f64> {
        check_inverse_arg(y, self.total_mass)?;
        invert_survival(&*self.survival, y, (1e-3, 1e3), BISECTION_TOL)
    }

    fn total_mass(&self) -> f64 {
        self.total_mass
    }

    fn density(&self, x: f64) -> Option<f64> {
        self.density.as_ref().map(|f| f(x))
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
