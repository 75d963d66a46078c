//! Exact rational numbers and their textual forms.
//!
//! Everything in the engine except [`max_entropy`](crate::credal::CredalSet::max_entropy)
//! runs on exact rationals, so results of the linear programs are
//! bit-reproducible. Decimals in input text are parsed exactly
//! (`0.87` becomes `87/100`), never through floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number, always kept in canonical reduced form.
pub type Fraction = BigRational;

/// Shorthand for `num/den` as a [`Fraction`].
pub fn frac(num: i64, den: i64) -> Fraction {
    Fraction::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer-valued [`Fraction`].
pub fn int(n: i64) -> Fraction {
    Fraction::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid number `{text}`: {reason}")]
pub struct NumberParseError {
    pub text: String,
    pub reason: String,
}

/// Parses a number written as an integer (`3`, `-10`), a ratio (`27/31`)
/// or a decimal (`0.87`, `-.5`). Decimals are converted exactly.
pub fn parse_fraction(text: &str) -> Result<Fraction, NumberParseError> {
    let err = |reason: &str| NumberParseError {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let s = text.trim();
    if s.is_empty() {
        return Err(err("empty"));
    }
    let (negative, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    if digits.is_empty() {
        return Err(err("sign without digits"));
    }

    let value = if let Some((num, den)) = digits.split_once('/') {
        let num: BigInt = num
            .parse()
            .map_err(|_| err("numerator is not an integer"))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| err("denominator is not an integer"))?;
        if den.is_zero() {
            return Err(err("denominator is zero"));
        }
        if den.is_negative() {
            return Err(err("denominator must be positive"));
        }
        Fraction::new(num, den)
    } else if let Some((whole, fract)) = digits.split_once('.') {
        if fract.is_empty() {
            return Err(err("missing digits after decimal point"));
        }
        if !fract.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("decimal part is not numeric"));
        }
        let whole_val: BigInt = if whole.is_empty() {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| err("integer part is not numeric"))?
        };
        let fract_val: BigInt = fract.parse().expect("digits checked");
        let scale = BigInt::from(10u32).pow(fract.len() as u32);
        Fraction::new(whole_val * &scale + fract_val, scale)
    } else {
        let n: BigInt = digits.parse().map_err(|_| err("not a number"))?;
        Fraction::from_integer(n)
    };

    Ok(if negative { -value } else { value })
}

/// Renders a fraction as `a/b`, or just `a` when the denominator is one.
pub fn render_fraction(f: &Fraction) -> String {
    if f.denom().is_one() {
        f.numer().to_string()
    } else {
        format!("{}/{}", f.numer(), f.denom())
    }
}

/// Fixed-point decimal rendering with `places` digits, rounded half away
/// from zero. `decimal_string(27/31, 6)` is `"0.870968"`.
pub fn decimal_string(f: &Fraction, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let scaled = (f.abs() * Fraction::from_integer(scale.clone())).trunc();
    let remainder = f.abs() * Fraction::from_integer(scale.clone()) - &scaled;
    let mut units = scaled.to_integer();
    if remainder * int(2) >= int(1) {
        units += 1;
    }
    let whole = &units / &scale;
    let fract = &units % &scale;
    let sign = if f.is_negative() && !units.is_zero() {
        "-"
    } else {
        ""
    };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{fract:0places$}")
    }
}

/// Combined exact + decimal rendering, e.g. `27/31 (0.870968)`.
pub fn render_with_decimal(f: &Fraction) -> String {
    format!("{} ({})", render_fraction(f), decimal_string(f, 6))
}

/// Lossy conversion for entropy computations and reporting.
pub fn to_f64(f: &Fraction) -> f64 {
    f.to_f64().unwrap_or(f64::NAN)
}
