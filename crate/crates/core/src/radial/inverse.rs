//! Bisection for `inf{x > 0 : S(x) <= y}` when no closed form exists.

use crate::error::{Error, Result};

pub const BISECTION_TOL: f64 = 1e-12;
pub const BISECTION_MAX_ITER: usize = 200;
pub const BISECTION_MAX_EXPANSIONS: usize = 40;

/// Bisects a non-increasing right-continuous `survival` for the level `y`.
///
/// Keeps `S(lo) > y >= S(hi)` and returns the upper end, so at a jump the
/// result converges to the jump location from the right, which is the
/// infimum in the definition of the pseudo-inverse.
pub fn numeric_pseudo_inverse<F>(survival: F, y: f64, bracket: (f64, f64), tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && lo < hi) {
        return Err(Error::Argument(format!("invalid bracket [{lo}, {hi}]")));
    }
    let s_lo = survival(lo);
    let s_hi = survival(hi);
    if !(s_hi <= y && y < s_lo) {
        return Err(Error::Bracket {
            level: y,
            lo,
            hi,
            s_lo,
            s_hi,
        });
    }
    for _ in 0..BISECTION_MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if survival(mid) <= y {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// [`numeric_pseudo_inverse`] with geometric bracket expansion (x10 per side).
///
/// Returns `+∞` for `y = 0` when `S` stays positive on every expanded bracket.
pub fn invert_survival<F>(survival: F, y: f64, bracket: (f64, f64), tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = bracket;
    for _ in 0..=BISECTION_MAX_EXPANSIONS {
        match numeric_pseudo_inverse(&survival, y, (lo, hi), tol) {
            Err(Error::Bracket { s_lo, s_hi, .. }) => {
                if s_hi > y {
                    hi *= 10.0;
                }
                if s_lo <= y {
                    lo /= 10.0;
                }
            }
            other => return other,
        }
    }
    if y == 0.0 && survival(hi) > 0.0 {
        return Ok(f64::INFINITY);
    }
    let (s_lo, s_hi) = (survival(lo), survival(hi));
    Err(Error::Bracket {
        level: y,
        lo,
        hi,
        s_lo,
        s_hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{HarmonicRadial, RadialMeasure};

    #[test]
    fn closed_form_inverse() {
        let x = numeric_pseudo_inverse(|t| 2.0 / t, 4.0, (1e-6, 1e6), 1e-12).unwrap();
        assert!((x - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn step_function_converges_to_jump_from_the_right() {
        let h = HarmonicRadial::new(1.0).unwrap();
        let s = |t: f64| h.survival(t).unwrap();
        let x = numeric_pseudo_inverse(s, 1.5, (1e-6, 1e6), 1e-12).unwrap();
        let closed = h.pseudo_inverse(1.5).unwrap();
        assert_eq!(closed, 0.5);
        assert!(x >= 0.5 && x - 0.5 <= 1e-12, "{x}");
    }

    #[test]
    fn out_of_bracket_is_an_expansion_request() {
        let lo = 1e-3;
        let s = |t: f64| 2.0 / t;
        let err = numeric_pseudo_inverse(s, s(lo) * 2.0, (lo, 1e3), 1e-12).unwrap_err();
        assert!(matches!(err, Error::Bracket { .. }));
        let err = numeric_pseudo_inverse(s, 1e-9, (lo, 1e3), 1e-12).unwrap_err();
        assert!(matches!(err, Error::Bracket { .. }));
    }

    #[test]
    fn expansion_recovers() {
        let s = |t: f64| 2.0 / t;
        let x = invert_survival(s, 1e-7, (0.1, 10.0), 1e-12).unwrap();
        assert!((x - 2e7).abs() / 2e7 < 1e-12);
        let x = invert_survival(s, 1e5, (0.1, 10.0), 1e-15).unwrap();
        assert!((x - 2e-5).abs() / 2e-5 < 1e-9);
        assert_eq!(invert_survival(s, 0.0, (0.1, 10.0), 1e-12).unwrap(), f64::INFINITY);
    }

    #[test]
    fn invalid_bracket() {
        assert!(matches!(
            numeric_pseudo_inverse(|t| 1.0 / t, 1.0, (2.0, 1.0), 1e-12),
            Err(Error::Argument(_))
        ));
    }
}
