//! Distribution functions used as ground truth for the sampler.
//!
//! The copula is `C_F(u) = Π_{|A| odd} F(Σ_{k∈A} F^{-1}(u_k)) / Π_{|A| even} F(…)`
//! over the non-empty subsets `A`. Since `log F = -Λ` this is evaluated as
//! `log C = Σ_{A≠∅} (-1)^{|A|} Λ(Σ_{k∈A} x_k)` with `x_k = F^{-1}(u_k)`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::radial::RadialMeasure;
use crate::simplex::SimplexLaw;

/// Largest number of free coordinates enumerated exactly (`2^20 - 1` subsets).
pub const MAX_EXACT_DIM: usize = 20;

#[derive(Debug, Clone)]
pub struct CopulaSpec {
    generator: Generator,
}

impl CopulaSpec {
    pub fn new(generator: Generator) -> Self {
        Self { generator }
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    pub fn dim(&self) -> usize {
        self.generator.dim()
    }

    pub fn copula_cdf(&self, u: &[f64]) -> Result<f64> {
        if u.len() != self.dim() {
            return Err(Error::Argument(format!(
                "point has {} coordinates, copula has dimension {}",
                u.len(),
                self.dim()
            )));
        }
        if let Some(bad) = u.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::Domain {
                what: "copula_cdf",
                value: *bad,
            });
        }
        if u.contains(&0.0) {
            return Ok(0.0);
        }
        let free: Vec<f64> = u.iter().copied().filter(|&x| x < 1.0).collect();
        match free.len() {
            0 => return Ok(1.0),
            1 => return Ok(free[0]),
            m if m > MAX_EXACT_DIM => {
                return Err(Error::Capacity {
                    dim: m,
                    max: MAX_EXACT_DIM,
                })
            }
            _ => {}
        }
        let x = free
            .iter()
            .map(|&v| self.generator.generator_f_inverse(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.log_cdf_from_quantiles(&x)?.exp())
    }

    /// `Σ_{A≠∅} (-1)^{|A|} Λ(Σ_{k∈A} x_k)`, subsets visited in Gray-code order.
    fn log_cdf_from_quantiles(&self, x: &[f64]) -> Result<f64> {
        let m = x.len();
        let count = 1usize << m;
        let mut terms = Vec::with_capacity(count - 1);
        let mut partial = 0.0;
        let mut gray = 0usize;
        for i in 1..count {
            let bit = i.trailing_zeros() as usize;
            gray ^= 1 << bit;
            if gray & (1 << bit) != 0 {
                partial += x[bit];
            } else {
                partial -= x[bit];
            }
            // re-anchor on singletons so round-off cannot accumulate
            if gray.is_power_of_two() {
                partial = x[gray.trailing_zeros() as usize];
            }
            let lambda = self.generator.exponent_lambda(partial.max(0.0))?;
            let sign = if gray.count_ones().is_multiple_of(2) { 1.0 } else { -1.0 };
            terms.push(sign * lambda);
        }
        Ok(pairwise_sum(&terms))
    }
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Monte Carlo value of `P(Y <= y) = exp(-E[S(min_i y_i / Q_i)])`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxIdEstimate {
    pub estimate: f64,
    /// Delta-method standard error of `estimate`.
    pub std_error: f64,
    /// Set when `S` overflowed for some draw; the estimate is then 0.
    pub overflow: bool,
}

pub fn maxid_cdf_monte_carlo<R: Rng + ?Sized>(
    measure: &dyn RadialMeasure,
    law: &SimplexLaw,
    y: &[f64],
    n_mc: usize,
    rng: &mut R,
) -> Result<MaxIdEstimate> {
    if n_mc == 0 {
        return Err(Error::Argument("n_mc must be at least 1".into()));
    }
    if let Some(bad) = y.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::Domain {
            what: "maxid_cdf_monte_carlo",
            value: *bad,
        });
    }
    let sampler = law.sampler(y.len())?;
    let mut q = vec![0.0; y.len()];
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_mc {
        sampler.sample_into(rng, &mut q);
        let arg = y
            .iter()
            .zip(&q)
            .map(|(yi, qi)| yi / qi)
            .fold(f64::INFINITY, f64::min);
        let s = measure.survival(arg)?;
        if !s.is_finite() {
            return Ok(MaxIdEstimate {
                estimate: 0.0,
                std_error: 0.0,
                overflow: true,
            });
        }
        sum += s;
        sum_sq += s * s;
    }
    let n = n_mc as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0).max(1.0)).max(0.0);
    let estimate = (-mean).exp();
    Ok(MaxIdEstimate {
        estimate,
        std_error: estimate * (var / n).sqrt(),
        overflow: false,
    })
}
