//! Number formatting shared by every table and export: fixed decimal places
//! for ratios, plain integers for counts.

use num_bigint::{BigInt, Sign};
use num_rational::{BigRational, Ratio};
use num_traits::{Signed, Zero};

/// Rendering of a statistic that is not defined on the input.
pub const UNDEFINED: &str = "Undefined";

/// Default number of decimal places for ratios.
pub const DEFAULT_PLACES: usize = 4;

/// `x` with `places` decimals; negative zero prints as zero.
pub fn fmt_ratio(x: f64, places: usize) -> String {
    let s = format!("{x:.places$}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Exact decimal rounding of a rational, half away from zero.
pub fn fmt_rational(r: &BigRational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let numer = r.numer().abs() * &scale * 2u32 + r.denom();
    let scaled: BigInt = numer / (r.denom() * 2u32);
    let negative = r.is_negative() && !scaled.is_zero();
    let digits = scaled.to_str_radix(10);
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = digits.split_at(digits.len() - places);
    let sign = if negative { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

pub fn to_big(r: &Ratio<u64>) -> BigRational {
    BigRational::new(
        BigInt::from_biguint(Sign::Plus, (*r.numer()).into()),
        BigInt::from_biguint(Sign::Plus, (*r.denom()).into()),
    )
}

pub fn fmt_opt_ratio(r: Option<&Ratio<u64>>, places: usize) -> String {
    r.map_or_else(|| UNDEFINED.to_string(), |r| fmt_rational(&to_big(r), places))
}
