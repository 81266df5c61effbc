//! Decimal rendering of sample values.

/// Shortest decimal that parses back to the same `f64`; positional notation
/// for moderate magnitudes and exponent notation otherwise.
pub fn round_trip(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// `x` with 12 significant digits, trailing zeros removed.
pub fn significant12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let a = x.abs();
    if (1e-5..1e16).contains(&a) {
        let magnitude = a.log10().floor() as i32;
        let decimals = (11 - magnitude).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}"))
    } else {
        let s = format!("{x:.11e}");
        let (mantissa, exponent) = s.split_once('e').expect("exponent notation");
        format!("{}e{exponent}", trim_fraction(mantissa))
    }
}

fn trim_fraction(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
