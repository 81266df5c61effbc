use std::any::Any;

use super::{check_inverse_arg, check_survival_arg, RadialMeasure};
use crate::error::{Error, Result};

/// Beyond this many atoms `1/k` is no longer resolved exactly in `f64`.
const EXACT_COUNT_LIMIT: f64 = 1e15;

/// Direct summation of `Λ` up to this many atoms, Faulhaber beyond.
const DIRECT_SUM_LIMIT: u64 = 256;

/// Bernoulli numbers `B_0 … B_24` with `B_1 = +1/2`.
const BERNOULLI: [f64; 25] = [
    1.0,
    0.5,
    1.0 / 6.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    1.0 / 42.0,
    0.0,
    -1.0 / 30.0,
    0.0,
    5.0 / 66.0,
    0.0,
    -691.0 / 2730.0,
    0.0,
    7.0 / 6.0,
    0.0,
    -3617.0 / 510.0,
    0.0,
    43867.0 / 798.0,
    0.0,
    -174611.0 / 330.0,
    0.0,
    854513.0 / 138.0,
    0.0,
    -236364091.0 / 2730.0,
];

/// `ν = θ Σ_{k>=1} δ_{1/k}`.
///
/// `S(t) = θ · #{k : 1/k > t}`, the right-continuous version of `θ⌊1/t⌋`,
/// and `S^{-1}(y) = 1 / (⌊y/θ⌋ + 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicRadial {
    theta: f64,
}

impl HarmonicRadial {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta.is_finite()) {
            return Err(Error::Argument(format!("theta must be positive, got {theta}")));
        }
        Ok(Self { theta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `#{k >= 1 : fl(1/k) > x}`.
    pub fn count_above(x: f64) -> u64 {
        if x >= 1.0 {
            return 0;
        }
        let r = 1.0 / x;
        if r > EXACT_COUNT_LIMIT {
            return r as u64;
        }
        let mut n = r.ceil() as u64 - 1;
        while n > 0 && 1.0 / (n as f64) <= x {
            n -= 1;
        }
        while 1.0 / ((n + 1) as f64) > x {
            n += 1;
        }
        n
    }

    /// `Λ(t) = θ Σ_{k : 1/k > t} (1 - k t)^{d-1}` summed term by term.
    pub fn exponent_by_sum(&self, t: f64, dim: usize) -> f64 {
        let n = Self::count_above(t);
        let power = dim as i32 - 1;
        let sum: f64 = (1..=n)
            .map(|k| (1.0 - k as f64 * t).max(0.0).powi(power))
            .sum();
        self.theta * sum
    }

    /// Bivariate closed form `θ n (1 - t (n + 1) / 2)` with `n = ⌊1/t⌋`.
    pub fn exponent_bivariate(&self, t: f64) -> f64 {
        let n = Self::count_above(t) as f64;
        self.theta * n * (1.0 - t * (n + 1.0) / 2.0)
    }

    /// Power-sum expansion `Σ_j C(m,j) (-t)^j Σ_{k<=n} k^j`, with the inner
    /// power sums by Faulhaber's formula scaled by `(n t)^j` to stay finite.
    fn exponent_by_power_sums(&self, t: f64, dim: usize, n: u64) -> f64 {
        let m = dim - 1;
        let nf = n as f64;
        let nt = nf * t;
        let mut total = 0.0;
        let mut binom_m = 1.0; // C(m, j)
        for j in 0..=m {
            // t^j S_j(n) = (n t)^j n / (j+1) Σ_i C(j+1, i) B_i n^{-i}
            let mut inner = 0.0;
            let mut binom_j1 = 1.0; // C(j+1, i)
            let mut n_pow = 1.0;
            for (i, b) in BERNOULLI.iter().enumerate().take(j + 1) {
                inner += binom_j1 * b * n_pow;
                binom_j1 *= (j + 1 - i) as f64 / (i + 1) as f64;
                n_pow /= nf;
            }
            let term = nt.powi(j as i32) * nf / (j + 1) as f64 * inner;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            total += sign * binom_m * term;
            binom_m *= (m - j) as f64 / (j + 1) as f64;
        }
        self.theta * total.max(0.0)
    }
}

impl RadialMeasure for HarmonicRadial {
    fn survival(&self, t: f64) -> Result<f64> {
        check_survival_arg(t)?;
        Ok(self.theta * Self::count_above(t) as f64)
    }

    fn pseudo_inverse(&self, y: f64) -> Result<f64> {
        check_inverse_arg(y, f64::INFINITY)?;
        let q = y / self.theta;
        if q > EXACT_COUNT_LIMIT {
            return Ok(1.0 / (q.floor() + 1.0));
        }
        // smallest k with θ k > y
        let mut k = q.floor() as u64 + 1;
        while k > 1 && self.theta * ((k - 1) as f64) > y {
            k -= 1;
        }
        while self.theta * (k as f64) <= y {
            k += 1;
        }
        Ok(1.0 / k as f64)
    }

    fn total_mass(&self) -> f64 {
        f64::INFINITY
    }

    fn exponent(&self, t: f64, dim: usize) -> Option<f64> {
        if t >= 1.0 {
            return Some(0.0);
        }
        if dim == 2 {
            return Some(self.exponent_bivariate(t));
        }
        let n = Self::count_above(t);
        if n <= DIRECT_SUM_LIMIT || dim > BERNOULLI.len() {
            Some(self.exponent_by_sum(t, dim))
        } else {
            Some(self.exponent_by_power_sums(t, dim, n))
        }
    }

    fn support_sup(&self) -> f64 {
        1.0
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::DiscreteRadial;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn survival_example() {
        let h = HarmonicRadial::new(1.0).unwrap();
        assert_eq!(h.survival(0.4).unwrap(), 2.0);
        // Right limit of θ⌊1/u⌋ as u ↓ 0.4 is ⌊2.49…⌋ = 2.
        let u: f64 = 0.4 + 1e-9;
        assert_eq!((1.0 / u).floor(), 2.0);
        // At reciprocal integers the floor alone would be left-continuous.
        assert_eq!(h.survival(0.5).unwrap(), 1.0);
        assert_eq!(h.survival(1.0).unwrap(), 0.0);
        assert_eq!(h.survival(1.0 / 3.0).unwrap(), 2.0);
    }

    #[test]
    fn pseudo_inverse_example() {
        let h = HarmonicRadial::new(0.5).unwrap();
        assert_eq!(h.pseudo_inverse(0.7).unwrap(), 0.5);
        assert_eq!(h.pseudo_inverse(0.0).unwrap(), 1.0);
        // Lattice points map to the next atom.
        assert_eq!(h.pseudo_inverse(0.5).unwrap(), 0.5);
        assert_eq!(h.pseudo_inverse(1.0).unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn pseudo_inverse_matches_inf_definition_by_scan() {
        let h = HarmonicRadial::new(0.5).unwrap();
        for y in [0.1, 0.7, 1.3, 2.2] {
            // inf{x > 0 : S(x) <= y} on a fine grid
            let grid: Vec<f64> = (1..200_000).map(|i| i as f64 * 1e-5).collect();
            let scanned = grid
                .iter()
                .copied()
                .find(|&x| h.survival(x).unwrap() <= y)
                .unwrap();
            let exact = h.pseudo_inverse(y).unwrap();
            assert!((scanned - exact).abs() < 1.5e-5, "y={y} {scanned} vs {exact}");
        }
    }

    #[test]
    fn agrees_with_truncated_generic_discrete() {
        let theta = 0.25;
        let h = HarmonicRadial::new(theta).unwrap();
        let atoms: Vec<f64> = (1..=1000).map(|k| 1.0 / k as f64).collect();
        let d = DiscreteRadial::new(atoms, vec![theta; 1000]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5000 {
            // truncation binds below the 1000th atom
            let t = rng.random_range(1.0 / 999.0..2.0);
            assert_eq!(h.survival(t).unwrap(), d.survival(t).unwrap(), "t={t}");
            let y = rng.random_range(0.0..theta * 999.0);
            assert_eq!(h.pseudo_inverse(y).unwrap(), d.pseudo_inverse(y).unwrap(), "y={y}");
            for dim in [2, 3, 5] {
                let a = h.exponent(t, dim).unwrap();
                let b = d.exponent(t, dim).unwrap();
                assert!((a - b).abs() <= 1e-12 * b.max(1.0), "t={t} d={dim}");
            }
        }
    }

    #[test]
    fn bivariate_closed_form_equals_sum() {
        let h = HarmonicRadial::new(0.8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let t: f64 = rng.random_range(1e-6..1.0);
            let sum = h.exponent_by_sum(t, 2);
            let closed = h.exponent_bivariate(t);
            assert!((sum - closed).abs() <= 1e-13 * sum.max(1.0), "t={t} {sum} {closed}");
        }
    }

    #[test]
    fn exponent_example() {
        let h = HarmonicRadial::new(1.0).unwrap();
        assert!((h.exponent(0.4, 2).unwrap() - 0.8).abs() < 1e-15);
        assert!((h.exponent_by_sum(0.4, 2) - 0.8).abs() < 1e-15);
        assert_eq!(h.exponent(1.5, 3).unwrap(), 0.0);
    }

    #[test]
    fn power_sum_path_matches_direct_sum() {
        let h = HarmonicRadial::new(1.0).unwrap();
        for dim in [3, 4, 6, 10] {
            for t in [1e-3, 3.3e-4, 1.7e-5] {
                let n = HarmonicRadial::count_above(t);
                let direct = h.exponent_by_sum(t, dim);
                let fast = h.exponent_by_power_sums(t, dim, n);
                assert!((direct - fast).abs() < 1e-11 * direct, "d={dim} t={t}");
            }
        }
    }

    #[test]
    fn count_above_at_reciprocals() {
        for k in 1..10_000u64 {
            let x = 1.0 / k as f64;
            assert_eq!(HarmonicRadial::count_above(x), k - 1);
        }
    }
}
