//! Decreasing enumeration of a Poisson random measure on `(0, ∞]`.
//!
//! With `T_k = ε_1 + … + ε_k` the jump times of a unit-rate Poisson process,
//! `R_k = S^{-1}(T_k)` lists the points of a Poisson random measure with mean
//! measure `ν` in decreasing order. For finite `ν` the list ends once `T_k`
//! passes the total mass.

use rand::Rng;

use crate::error::Result;
use crate::radial::RadialMeasure;

/// Unit exponential by inversion of `1 - u`, `u ∈ [0, 1)`.
pub fn exponential_draw<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    exponential_from_uniform(rng.random::<f64>())
}

pub fn exponential_from_uniform(u: f64) -> f64 {
    -(-u).ln_1p()
}

pub struct PointStream<'a, R: Rng + ?Sized> {
    measure: &'a dyn RadialMeasure,
    rng: &'a mut R,
    time: f64,
    emitted: usize,
    exhausted: bool,
}

impl<'a, R: Rng + ?Sized> PointStream<'a, R> {
    pub fn new(measure: &'a dyn RadialMeasure, rng: &'a mut R) -> Self {
        Self {
            measure,
            rng,
            time: 0.0,
            emitted: 0,
            exhausted: false,
        }
    }

    /// Next point, or `None` once a finite measure has run out of points.
    pub fn next_point(&mut self) -> Result<Option<f64>> {
        if self.exhausted {
            return Ok(None);
        }
        self.time += exponential_draw(self.rng);
        if self.time > self.measure.total_mass() {
            self.exhausted = true;
            return Ok(None);
        }
        let r = self.measure.pseudo_inverse(self.time)?;
        self.emitted += 1;
        Ok(Some(r))
    }

    pub fn cumulative_time(&self) -> f64 {
        self.time
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// Access to the underlying generator, e.g. to draw the simplex vector
    /// that goes with a point.
    pub fn rng(&mut self) -> &mut R {
        self.rng
    }
}
