//! Fixed-precision number formatting for reports and CSV output.

/// Formats `x` with `digits` significant digits in positional notation,
/// e.g. `fmt_sig(0.35355339, 6) == "0.353553"`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let mut exp = x.abs().log10().floor() as i32;
    let decimals = |exp: i32| (digits as i32 - 1 - exp).max(0) as usize;
    let mut s = format!("{:.*}", decimals(exp), x);
    // Rounding can carry into a new leading digit (0.9999999 → 1.000000).
    let rounded: f64 = s.parse().unwrap_or(x);
    if rounded != 0.0 && rounded.abs().log10().floor() as i32 > exp {
        exp += 1;
        s = format!("{:.*}", decimals(exp), x);
    }
    s
}
