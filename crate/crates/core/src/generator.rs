//! The generator `F = exp(-Λ)` of a reciprocal Archimedean copula.
//!
//! `Λ(t) = ∫_t^∞ (1 - t/x)^{d-1} ν(dx)` is taken from a closed form on the
//! measure when it has one, otherwise from tanh-sinh quadrature against the
//! density after substituting `x = t / (1 - s)`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::radial::{invert_survival, SharedMeasure, BISECTION_TOL};

const QUAD_REL_TOL: f64 = 1e-10;
/// Order of accuracy of the finite-difference stencils.
const FD_ACCURACY: usize = 4;
const QUAD_MAX_LEVELS: usize = 14;
/// At `|u| = 6` the nodes reach `1 - s ≈ 1e-275`, past any visible
/// contribution of an integrable endpoint singularity.
const QUAD_U_MAX: f64 = 6.0;

/// How `Λ^{(k)}` is obtained for the Williamson reconstruction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeScheme {
    Analytic,
    /// Central differences, one-sided from the right for the top order.
    FiniteDifference,
}

#[derive(Debug, Clone)]
pub struct Generator {
    measure: SharedMeasure,
    dim: usize,
    bracket: (f64, f64),
}

impl Generator {
    pub fn new(measure: SharedMeasure, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Argument(format!("dimension must be at least 2, got {dim}")));
        }
        if let Some(own) = measure.dim_hint() {
            if own != dim {
                return Err(Error::Argument(format!(
                    "measure is normalized for dimension {own}, generator requested for {dim}"
                )));
            }
        }
        if measure.exponent(1.0, dim).is_none() && measure.density(1.0).is_none() {
            return Err(Error::Unsupported(
                "measure has neither a closed-form exponent nor a density".into(),
            ));
        }
        let sup = measure.support_sup();
        let hi = if sup.is_finite() { sup } else { 1.0 };
        Ok(Self {
            measure,
            dim,
            bracket: (hi * 1e-3, hi),
        })
    }

    pub fn measure(&self) -> &SharedMeasure {
        &self.measure
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Λ(t)` for `t >= 0`; `Λ(0) = ν((0, ∞])`.
    pub fn exponent_lambda(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain {
                what: "exponent_lambda",
                value: t,
            });
        }
        if t == 0.0 {
            return Ok(self.measure.total_mass());
        }
        if t >= self.measure.support_sup() {
            return Ok(0.0);
        }
        if let Some(v) = self.measure.exponent(t, self.dim) {
            return Ok(v);
        }
        self.exponent_by_quadrature(t)
    }

    fn exponent_by_quadrature(&self, t: f64) -> Result<f64> {
        let density = |x: f64| self.measure.density(x).unwrap_or(0.0);
        let power = self.dim as i32 - 1;
        // x = t / (1 - s): dx = t / (1 - s)^2 ds and 1 - t/x = s
        let integrand = |s: f64, one_minus_s: f64| {
            if one_minus_s <= 0.0 {
                return 0.0;
            }
            let x = t / one_minus_s;
            let v = s.powi(power) * density(x) * t / (one_minus_s * one_minus_s);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        };
        tanh_sinh_unit(integrand, QUAD_REL_TOL)
    }

    /// `F(t) = exp(-Λ(t))`.
    pub fn generator_f(&self, t: f64) -> Result<f64> {
        Ok((-self.exponent_lambda(t)?).exp())
    }

    /// `F^{-1}(u) = inf{t >= 0 : F(t) >= u}`.
    pub fn generator_f_inverse(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::Domain {
                what: "generator_f_inverse",
                value: u,
            });
        }
        if u == 0.0 {
            return Ok(0.0);
        }
        if u == 1.0 {
            return Ok(self.measure.support_sup());
        }
        let level = -u.ln();
        if level >= self.measure.total_mass() {
            return Ok(0.0);
        }
        if let Some(t) = self.measure.exponent_inverse(level, self.dim) {
            return Ok(t);
        }
        let lambda = |t: f64| self.exponent_lambda(t).unwrap_or(f64::NAN);
        let t = invert_survival(lambda, level, self.bracket, BISECTION_TOL)?;
        if t.is_nan() {
            return Err(Error::Numeric {
                message: format!("F^-1({u}) did not converge"),
                residual: f64::NAN,
            });
        }
        Ok(t)
    }

    /// `k`-th derivative of `Λ` at `t`; the top order is a right derivative
    /// when differenced numerically.
    pub fn exponent_derivative(
        &self,
        t: f64,
        order: usize,
        scheme: DerivativeScheme,
    ) -> Result<f64> {
        if order == 0 {
            return self.exponent_lambda(t);
        }
        match scheme {
            DerivativeScheme::Analytic => self
                .measure
                .exponent_derivative(t, order, self.dim)
                .ok_or_else(|| Error::Unsupported("no analytic derivative of the exponent".into())),
            DerivativeScheme::FiniteDifference => {
                let one_sided = order == self.dim - 1;
                let h = t * fd_relative_step(order);
                if !(h.is_normal() && t.is_normal()) || t + h == t {
                    return Err(Error::Numeric {
                        message: format!("finite-difference step underflow at t = {t}"),
                        residual: h,
                    });
                }
                let offsets: Vec<f64> = if one_sided {
                    (0..=order + FD_ACCURACY - 1).map(|j| j as f64).collect()
                } else {
                    let half = order.div_ceil(2) + FD_ACCURACY / 2 - 1;
                    (-(half as i64)..=half as i64).map(|j| j as f64).collect()
                };
                let weights = fornberg_weights(&offsets, order);
                let mut acc = 0.0;
                for (w, o) in weights.iter().zip(&offsets) {
                    if *w != 0.0 {
                        acc += w * self.exponent_lambda(t + o * h)?;
                    }
                }
                let value = acc / h.powi(order as i32);
                if !value.is_finite() {
                    return Err(Error::Numeric {
                        message: format!("finite difference of order {order} overflowed at t = {t}"),
                        residual: value,
                    });
                }
                Ok(value)
            }
        }
    }

    /// Recovers `S(t)` from `Λ` by inverting the Williamson transform:
    /// `S(t) = Σ_{k<d-1} (-1)^k Λ^{(k)}(t) t^k / k! + (-1)^{d-1} Λ_+^{(d-1)}(t) t^{d-1} / (d-1)!`.
    pub fn williamson_survival_from_lambda(&self, t: f64, scheme: DerivativeScheme) -> Result<f64> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain {
                what: "williamson_survival_from_lambda",
                value: t,
            });
        }
        let mut sum = 0.0;
        let mut t_pow = 1.0;
        let mut factorial = 1.0;
        for k in 0..self.dim {
            if k > 0 {
                t_pow *= t;
                factorial *= k as f64;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * self.exponent_derivative(t, k, scheme)? * t_pow / factorial;
        }
        Ok(sum)
    }
}

/// Relative step `h / t` for a `k`-th difference quotient; rounding error
/// grows like `ε / h^k`, so higher orders take wider steps.
/// Balances the `h^4` truncation error against `ε / h^order` rounding.
fn fd_relative_step(order: usize) -> f64 {
    f64::EPSILON.powf(1.0 / (order + FD_ACCURACY) as f64)
}

/// Finite-difference weights for the `order`-th derivative at 0 on the given
/// nodes (Fornberg's recursion).
fn fornberg_weights(nodes: &[f64], order: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; order + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0];
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i];
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// Tanh-sinh quadrature of `f(s, 1 - s)` over `[0, 1]`, halving the step until
/// successive levels agree to `rel_tol`.
fn tanh_sinh_unit<F>(f: F, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    // node at u: s = 1 / (1 + e^{-2v}), 1 - s = 1 / (1 + e^{2v}), v = π/2 sinh u
    let eval = |u: f64| -> f64 {
        let v = FRAC_PI_2 * u.sinh();
        let s = 1.0 / (1.0 + (-2.0 * v).exp());
        let one_minus_s = 1.0 / (1.0 + (2.0 * v).exp());
        let cosh_v = v.cosh();
        let w = 0.5 * FRAC_PI_2 * u.cosh() / (cosh_v * cosh_v);
        if w == 0.0 || !w.is_finite() {
            return 0.0;
        }
        w * f(s, one_minus_s)
    };
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= QUAD_U_MAX {
        let u = k as f64 * h;
        sum += eval(u) + eval(-u);
        k += 1;
    }
    let mut estimate = sum * h;
    for _ in 0..QUAD_MAX_LEVELS {
        h *= 0.5;
        // only the new odd nodes
        let mut k = 1;
        while k as f64 * h <= QUAD_U_MAX {
            let u = k as f64 * h;
            sum += eval(u) + eval(-u);
            k += 2;
        }
        let next = sum * h;
        let residual = (next - estimate).abs();
        estimate = next;
        if residual <= rel_tol * next.abs() || next == 0.0 {
            return Ok(next);
        }
    }
    Err(Error::Numeric {
        message: "tanh-sinh quadrature did not converge".into(),
        residual: estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{CustomRadial, DiscreteRadial, GalambosRadial, HarmonicRadial};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn galambos(theta: f64, d: usize) -> Generator {
        Generator::new(Arc::new(GalambosRadial::new(theta, d).unwrap()), d).unwrap()
    }

    /// Galambos measure exposed only through its survival function and
    /// density, so the generator must integrate and bisect.
    fn galambos_generic(theta: f64, d: usize) -> Generator {
        let g = GalambosRadial::new(theta, d).unwrap();
        let g2 = g.clone();
        let m = CustomRadial::new("galambos-generic", f64::INFINITY, move |t| {
            crate::radial::RadialMeasure::survival(&g, t).unwrap()
        })
        .with_density(move |x| crate::radial::RadialMeasure::density(&g2, x).unwrap());
        Generator::new(Arc::new(m), d).unwrap()
    }

    #[test]
    fn fornberg_reproduces_textbook_stencils() {
        let w = fornberg_weights(&[-1.0, 0.0, 1.0], 1);
        assert_eq!(w, vec![-0.5, 0.0, 0.5]);
        let w = fornberg_weights(&[-1.0, 0.0, 1.0], 2);
        assert_eq!(w, vec![1.0, -2.0, 1.0]);
        let w = fornberg_weights(&[0.0, 1.0, 2.0], 1);
        assert_eq!(w, vec![-1.5, 2.0, -0.5]);
        let w = fornberg_weights(&[0.0, 1.0, 2.0, 3.0], 2);
        assert_eq!(w, vec![2.0, -5.0, 4.0, -1.0]);
    }

    #[test]
    fn exponent_examples() {
        let h = Generator::new(Arc::new(HarmonicRadial::new(1.0).unwrap()), 2).unwrap();
        assert!((h.exponent_lambda(0.4).unwrap() - 0.8).abs() < 1e-15);
        assert!(rel(h.generator_f(0.4).unwrap(), (-0.8f64).exp()) < 1e-15);
        let g = galambos(1.0, 2);
        assert!(rel(g.exponent_lambda(1.0).unwrap(), 1.0) < 1e-15);
        assert_eq!(g.exponent_lambda(f64::INFINITY).unwrap(), 0.0);
        assert_eq!(g.generator_f(f64::INFINITY).unwrap(), 1.0);
        assert_eq!(g.exponent_lambda(0.0).unwrap(), f64::INFINITY);
        assert_eq!(g.generator_f(0.0).unwrap(), 0.0);
        assert!(g.exponent_lambda(-1.0).is_err());
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for (theta, d) in [(1.0, 2), (2.0, 2), (0.5, 3), (1.5, 4)] {
            let closed = galambos(theta, d);
            let generic = galambos_generic(theta, d);
            for t in [0.01, 0.3, 1.0, 4.0, 100.0] {
                let a = generic.exponent_lambda(t).unwrap();
                let b = closed.exponent_lambda(t).unwrap();
                assert!(rel(a, b) < 1e-9, "θ={theta} d={d} t={t}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn galambos_exponent_is_one_over_t_by_quadrature() {
        // Λ(t) = ∫_t^∞ (1 - t/x) 2 x^{-2} dx = 1/t
        let g = galambos_generic(1.0, 2);
        for t in [0.2, 1.0, 3.0] {
            assert!(rel(g.exponent_lambda(t).unwrap(), 1.0 / t) < 1e-9);
        }
    }

    #[test]
    fn inverse_round_trips() {
        let gens = [
            galambos(1.0, 2),
            galambos(0.5, 3),
            galambos_generic(2.0, 2),
            Generator::new(Arc::new(HarmonicRadial::new(0.5).unwrap()), 2).unwrap(),
            Generator::new(Arc::new(HarmonicRadial::new(0.025).unwrap()), 3).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for g in &gens {
            for _ in 0..200 {
                let u: f64 = rng.random_range(1e-6..1.0);
                let t = g.generator_f_inverse(u).unwrap();
                assert!((g.generator_f(t).unwrap() - u).abs() < 1e-9, "{g:?} u={u}");
            }
            assert_eq!(g.generator_f_inverse(0.0).unwrap(), 0.0);
        }
        assert_eq!(gens[0].generator_f_inverse(1.0).unwrap(), f64::INFINITY);
        assert_eq!(gens[3].generator_f_inverse(1.0).unwrap(), 1.0);
        assert!(gens[0].generator_f_inverse(1.5).is_err());
    }

    #[test]
    fn harmonic_inverse_example() {
        let g = Generator::new(Arc::new(HarmonicRadial::new(1.0).unwrap()), 2).unwrap();
        let t = g.generator_f_inverse((-0.8f64).exp()).unwrap();
        assert!((t - 0.4).abs() < 1e-10, "{t}");
    }

    #[test]
    fn inverse_of_f_is_below_argument() {
        let g = galambos_generic(1.3, 2);
        for t in [0.05, 0.5, 2.0, 9.0] {
            let back = g.generator_f_inverse(g.generator_f(t).unwrap()).unwrap();
            assert!(back <= t + 1e-12 && rel(back, t) < 1e-9, "t={t} back={back}");
        }
    }

    #[test]
    fn finite_measure_inverse_hits_zero_below_atom_mass() {
        let d = DiscreteRadial::new(vec![1.0], vec![2.0]).unwrap();
        let g = Generator::new(Arc::new(d), 2).unwrap();
        // F(0) = exp(-2)
        assert_eq!(g.generator_f_inverse(0.1).unwrap(), 0.0);
        let t = g.generator_f_inverse(0.5).unwrap();
        assert!((g.generator_f(t).unwrap() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn monotone_on_random_grids() {
        let gens = [
            galambos(2.0, 3),
            Generator::new(Arc::new(HarmonicRadial::new(0.5).unwrap()), 2).unwrap(),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for g in &gens {
            let mut ts: Vec<f64> = (0..300).map(|_| rng.random_range(1e-3..5.0)).collect();
            ts.sort_by(f64::total_cmp);
            let lam: Vec<f64> = ts.iter().map(|&t| g.exponent_lambda(t).unwrap()).collect();
            assert!(lam.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn exponent_is_convex_in_three_dimensions() {
        // d = 3: Λ' non-decreasing where Λ is smooth
        let g = galambos_generic(0.8, 3);
        let ts: Vec<f64> = (1..60).map(|i| 0.05 * i as f64).collect();
        let d1: Vec<f64> = ts
            .iter()
            .map(|&t| g.exponent_derivative(t, 1, DerivativeScheme::FiniteDifference).unwrap())
            .collect();
        assert!(d1.windows(2).all(|w| w[0] <= w[1]));
        for &t in &ts {
            let d2 = g.exponent_derivative(t, 2, DerivativeScheme::FiniteDifference).unwrap();
            assert!(d2 >= 0.0);
        }
    }

    #[test]
    fn williamson_bivariate_galambos_analytic() {
        // Λ = 1/t, S = Λ - tΛ' = 1/t + 1/t = 2/t
        let g = galambos(1.0, 2);
        for t in [0.5, 1.0, 2.0] {
            let s = g
                .williamson_survival_from_lambda(t, DerivativeScheme::Analytic)
                .unwrap();
            assert!(rel(s, 2.0 / t) < 1e-14);
        }
    }

    #[test]
    fn williamson_matches_survival_by_finite_differences() {
        for (theta, d) in [(1.0, 2), (1.0, 3), (0.5, 3), (2.0, 2), (1.5, 4)] {
            let g = galambos(theta, d);
            for t in [0.5, 1.0, 2.0] {
                let s = g
                    .williamson_survival_from_lambda(t, DerivativeScheme::FiniteDifference)
                    .unwrap();
                let exact = g.measure().survival(t).unwrap();
                assert!(rel(s, exact) < 1e-6, "θ={theta} d={d} t={t}: {s} vs {exact}");
            }
        }
    }

    #[test]
    fn williamson_discrete_beyond_atoms_and_between_jumps() {
        let m = DiscreteRadial::new(vec![2.0, 1.0], vec![3.0, 5.0]).unwrap();
        let g = Generator::new(Arc::new(m.clone()), 3).unwrap();
        let s = g
            .williamson_survival_from_lambda(2.5, DerivativeScheme::FiniteDifference)
            .unwrap();
        assert_eq!(s, 0.0);
        // continuity points between and below the atoms
        for t in [0.4, 1.5] {
            let s = g
                .williamson_survival_from_lambda(t, DerivativeScheme::FiniteDifference)
                .unwrap();
            let exact = crate::radial::RadialMeasure::survival(&m, t).unwrap();
            assert!((s - exact).abs() < 1e-5 * exact.max(1.0), "t={t} {s} {exact}");
        }
    }

    #[test]
    fn rejects_mismatched_dimension() {
        let m = Arc::new(GalambosRadial::new(1.0, 3).unwrap());
        assert!(Generator::new(m, 2).is_err());
        let m = Arc::new(HarmonicRadial::new(1.0).unwrap());
        assert!(Generator::new(m, 1).is_err());
        let bare = Arc::new(CustomRadial::new("bare", f64::INFINITY, |t| 1.0 / t));
        assert!(matches!(Generator::new(bare, 2), Err(Error::Unsupported(_))));
    }

    #[test]
    fn step_underflow_is_reported() {
        let g = galambos(1.0, 2);
        let err = g
            .exponent_derivative(1e-320, 1, DerivativeScheme::FiniteDifference)
            .unwrap_err();
        assert!(matches!(err, Error::Numeric { .. }));
    }
}
