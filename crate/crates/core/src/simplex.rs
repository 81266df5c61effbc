//! Laws on the unit simplex `{q >= 0 : q_1 + … + q_d = 1}`.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::points::exponential_draw;

/// `{"simplex":"uniform"}` or `{"simplex":"dirichlet","alpha":[…]}`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "simplex", rename_all = "lowercase", deny_unknown_fields)]
pub enum SimplexLaw {
    #[default]
    Uniform,
    Dirichlet {
        alpha: Vec<f64>,
    },
}

impl SimplexLaw {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::config("simplex", e.to_string()))
    }

    pub fn is_uniform(&self) -> bool {
        match self {
            SimplexLaw::Uniform => true,
            SimplexLaw::Dirichlet { alpha } => alpha.iter().all(|&a| a == 1.0),
        }
    }

    /// Validates the law against `dim` and prepares per-component samplers.
    pub fn sampler(&self, dim: usize) -> Result<SimplexSampler> {
        if dim < 2 {
            return Err(Error::Argument(format!("simplex dimension must be at least 2, got {dim}")));
        }
        match self {
            SimplexLaw::Uniform => Ok(SimplexSampler {
                dim,
                gammas: None,
            }),
            SimplexLaw::Dirichlet { alpha } => {
                if alpha.len() != dim {
                    return Err(Error::Argument(format!(
                        "dirichlet has {} parameters but dimension is {dim}",
                        alpha.len()
                    )));
                }
                let gammas = alpha
                    .iter()
                    .map(|&a| {
                        if !(a > 0.0 && a.is_finite()) {
                            return Err(Error::Argument(format!(
                                "dirichlet parameter {a} is not positive"
                            )));
                        }
                        Gamma::new(a, 1.0).map_err(|e| Error::Argument(e.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(SimplexSampler {
                    dim,
                    gammas: Some(gammas),
                })
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimplexSampler {
    dim: usize,
    gammas: Option<Vec<Gamma<f64>>>,
}

impl SimplexSampler {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Fills `out` with one draw: independent Gamma (exponential in the
    /// uniform case) variables divided by their sum.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dim);
        match &self.gammas {
            None => out.iter_mut().for_each(|q| *q = exponential_draw(rng)),
            Some(g) => out.iter_mut().zip(g).for_each(|(q, g)| *q = g.sample(rng)),
        }
        let total: f64 = out.iter().sum();
        out.iter_mut().for_each(|q| *q /= total);
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut q = vec![0.0; self.dim];
        self.sample_into(rng, &mut q);
        q
    }
}

pub fn sample_uniform_simplex<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Vec<f64>> {
    Ok(SimplexLaw::Uniform.sampler(dim)?.sample(rng))
}

pub fn sample_dirichlet<R: Rng + ?Sized>(alpha: &[f64], rng: &mut R) -> Result<Vec<f64>> {
    let law = SimplexLaw::Dirichlet {
        alpha: alpha.to_vec(),
    };
    Ok(law.sampler(alpha.len())?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use crate::stats::{ks_two_sample, mean_and_se};

    #[test]
    fn normalization() {
        let mut rng = substream(1, 0);
        for d in [2, 3, 7, 20] {
            for _ in 0..1000 {
                let q = sample_uniform_simplex(d, &mut rng).unwrap();
                assert!(q.iter().all(|&x| (0.0..=1.0).contains(&x)));
                assert!((q.iter().sum::<f64>() - 1.0).abs() <= 1e-14);
            }
        }
        let q = sample_dirichlet(&[0.3, 2.0, 5.5], &mut rng).unwrap();
        assert!((q.iter().sum::<f64>() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn uniform_component_means() {
        let n = 100_000;
        for d in [2, 3, 5] {
            let mut rng = substream(2, d as u64);
            let s = SimplexLaw::Uniform.sampler(d).unwrap();
            let draws: Vec<Vec<f64>> = (0..n).map(|_| s.sample(&mut rng)).collect();
            for i in 0..d {
                let col: Vec<f64> = draws.iter().map(|q| q[i]).collect();
                let (m, se) = mean_and_se(&col);
                assert!((m - 1.0 / d as f64).abs() < 3.0 * se, "d={d} i={i} {m}");
            }
        }
    }

    #[test]
    fn bivariate_margin_is_uniform() {
        let n = 100_000;
        let mut rng = substream(3, 0);
        let above = (0..n)
            .filter(|_| sample_uniform_simplex(2, &mut rng).unwrap()[0] > 0.5)
            .count() as f64
            / n as f64;
        let sigma = (0.25 / n as f64).sqrt();
        assert!((above - 0.5).abs() < 3.0 * sigma, "{above}");
    }

    #[test]
    fn dirichlet_ones_matches_uniform() {
        let n = 20_000;
        let mut r1 = substream(4, 0);
        let mut r2 = substream(4, 1);
        let a: Vec<f64> = (0..n).map(|_| sample_uniform_simplex(3, &mut r1).unwrap()[0]).collect();
        let b: Vec<f64> = (0..n)
            .map(|_| sample_dirichlet(&[1.0, 1.0, 1.0], &mut r2).unwrap()[0])
            .collect();
        let (_, p) = ks_two_sample(&a, &b);
        assert!(p > 0.01, "{p}");
        assert!(SimplexLaw::Dirichlet { alpha: vec![1.0; 3] }.is_uniform());
    }

    #[test]
    fn dirichlet_means() {
        let alpha = [0.5, 2.0, 3.5];
        let total: f64 = alpha.iter().sum();
        let n = 100_000;
        let mut rng = substream(6, 0);
        let draws: Vec<Vec<f64>> = (0..n).map(|_| sample_dirichlet(&alpha, &mut rng).unwrap()).collect();
        for (i, a) in alpha.iter().enumerate() {
            let col: Vec<f64> = draws.iter().map(|q| q[i]).collect();
            let (m, se) = mean_and_se(&col);
            assert!((m - a / total).abs() < 3.0 * se, "i={i} {m}");
        }
    }

    #[test]
    fn symmetric_dirichlet_is_symmetric() {
        let n = 50_000;
        let mut rng = substream(7, 0);
        let q1: Vec<f64> = (0..n).map(|_| sample_dirichlet(&[2.0, 2.0], &mut rng).unwrap()[0]).collect();
        let (first, second) = q1.split_at(n / 2);
        let mirrored: Vec<f64> = second.iter().map(|x| 1.0 - x).collect();
        let (_, p) = ks_two_sample(first, &mirrored);
        assert!(p > 0.01, "{p}");
    }

    #[test]
    fn parameter_errors() {
        let mut rng = substream(0, 0);
        assert!(sample_dirichlet(&[1.0, 0.0], &mut rng).is_err());
        assert!(sample_dirichlet(&[1.0, -2.0], &mut rng).is_err());
        assert!(sample_uniform_simplex(1, &mut rng).is_err());
        assert!(SimplexLaw::Dirichlet { alpha: vec![1.0; 2] }.sampler(3).is_err());
    }

    #[test]
    fn json_forms() {
        assert_eq!(SimplexLaw::from_json(r#"{"simplex":"uniform"}"#).unwrap(), SimplexLaw::Uniform);
        assert_eq!(
            SimplexLaw::from_json(r#"{"simplex":"dirichlet","alpha":[1,2]}"#).unwrap(),
            SimplexLaw::Dirichlet { alpha: vec![1.0, 2.0] }
        );
        assert!(SimplexLaw::from_json(r#"{"simplex":"beta"}"#).is_err());
    }
}
