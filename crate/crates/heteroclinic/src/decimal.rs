//! Decimal text form for interval endpoints.
//!
//! Certificates store endpoints as decimal strings, not hex floats, so they
//! stay readable and toolchain-neutral. Printing is directed: a lower
//! endpoint is printed at or below its f64 value, an upper endpoint at or
//! above, so the written interval always contains the computed one. With 18
//! significant digits the printed value also sits within a half-ulp of the
//! original, so a round-to-nearest parse recovers the exact f64 and a rerun
//! of the checker reproduces the producer bit for bit.
//!
//! Parsing accepts decimal literals (optionally with exponent) and exact
//! rational literals like `44/100`; conversion to f64 goes through exact
//! big-rational comparison, never through the platform's rounding.

use crate::interval::{Interval, IntervalError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

/// Greatest-18-digit-decimal at or below `x`.
pub fn format_f64_down(x: f64) -> String {
    format_directed(x, false)
}

/// Least-18-digit-decimal at or above `x`.
pub fn format_f64_up(x: f64) -> String {
    format_directed(x, true)
}

fn format_directed(x: f64, up: bool) -> String {
    assert!(!x.is_nan(), "cannot format NaN endpoint");
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let r = BigRational::from_float(x).unwrap();
    let e10 = decimal_exponent(&r.abs());
    // scale so the integer part carries 18 significant digits
    let scaled = mul_pow10(&r, 17 - e10);
    let k = if up {
        scaled.ceil().to_integer()
    } else {
        scaled.floor().to_integer()
    };
    render_sci(&k, e10)
}

fn render_sci(k: &BigInt, e10: i64) -> String {
    let neg = k.is_negative();
    let digits = k.abs().to_string();
    // ceil can carry into a 19th digit; the exponent absorbs it
    let exp = e10 + (digits.len() as i64 - 18);
    let (head, tail) = digits.split_at(1);
    format!("{}{}.{}e{}", if neg { "-" } else { "" }, head, tail, exp)
}

/// e with 10^e <= a < 10^(e+1), for a > 0, by exact comparison.
fn decimal_exponent(a: &BigRational) -> i64 {
    let mut e = a.to_f64().unwrap_or(1.0).abs().log10().floor() as i64;
    while pow10_rat(e).cmp(a) == Ordering::Greater {
        e -= 1;
    }
    while pow10_rat(e + 1).cmp(a) != Ordering::Greater {
        e += 1;
    }
    e
}

fn pow10_rat(e: i64) -> BigRational {
    mul_pow10(&BigRational::from_integer(BigInt::from(1)), e)
}

fn mul_pow10(r: &BigRational, e: i64) -> BigRational {
    let p = BigInt::from(10u32).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        r * BigRational::from_integer(p)
    } else {
        r / BigRational::from_integer(p)
    }
}

/// Parse to the greatest f64 at or below the exact value.
pub fn parse_f64_down(s: &str) -> Result<f64, IntervalError> {
    if let Some(v) = parse_special(s) {
        return Ok(v);
    }
    Ok(rat_to_f64_floor(&parse_rational(s)?))
}

/// Parse to the least f64 at or above the exact value.
pub fn parse_f64_up(s: &str) -> Result<f64, IntervalError> {
    if let Some(v) = parse_special(s) {
        return Ok(v);
    }
    Ok(rat_to_f64_ceil(&parse_rational(s)?))
}

/// Tightest interval containing the exact value of the literal.
pub fn parse_interval_exact(s: &str) -> Result<Interval, IntervalError> {
    if let Some(v) = parse_special(s) {
        return Ok(Interval::point(v));
    }
    let r = parse_rational(s)?;
    Ok(Interval::new(rat_to_f64_floor(&r), rat_to_f64_ceil(&r)))
}

fn parse_special(s: &str) -> Option<f64> {
    match s.trim() {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => None,
    }
}

/// Exact value of a decimal or `p/q` literal.
pub fn parse_rational(s: &str) -> Result<BigRational, IntervalError> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = parse_decimal(num.trim())?;
        let d = parse_decimal(den.trim())?;
        if d.is_zero() {
            return Err(IntervalError::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(n / d);
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<BigRational, IntervalError> {
    let bad = || IntervalError::Parse(format!("bad numeric literal {s:?}"));
    let mut rest = s;
    let mut neg = false;
    if let Some(r) = rest.strip_prefix('-') {
        neg = true;
        rest = r;
    } else if let Some(r) = rest.strip_prefix('+') {
        rest = r;
    }
    let (mantissa, exp_str) = match rest.find(['e', 'E']) {
        Some(i) => (&rest[..i], Some(&rest[i + 1..])),
        None => (rest, None),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(digits.parse::<BigInt>().map_err(|_| bad())?);
    let mut exp: i64 = -(frac_part.len() as i64);
    if let Some(es) = exp_str {
        let e: i64 = es.parse().map_err(|_| bad())?;
        if e.abs() > 5000 {
            return Err(IntervalError::Parse(format!("exponent out of range in {s:?}")));
        }
        exp += e;
    }
    value = mul_pow10(&value, exp);
    if neg {
        value = -value;
    }
    Ok(value)
}

fn cmp_f64_rat(x: f64, r: &BigRational) -> Ordering {
    BigRational::from_float(x).unwrap().cmp(r)
}

/// Greatest f64 <= r (may be -inf if r is below -MAX).
fn rat_to_f64_floor(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if r.is_negative() {
        return -rat_to_f64_ceil(&(-r));
    }
    if cmp_f64_rat(f64::MAX, r) != Ordering::Greater {
        return f64::MAX;
    }
    // nonnegative finite f64 bit patterns are value-ordered; binary search the
    // largest one at or below r
    let mut lo: u64 = 0;
    let mut hi: u64 = f64::MAX.to_bits();
    while lo < hi {
        let mid = lo + (hi - lo + 1) / 2;
        if cmp_f64_rat(f64::from_bits(mid), r) != Ordering::Greater {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    f64::from_bits(lo)
}

/// Least f64 >= r (may be +inf if r is above MAX).
fn rat_to_f64_ceil(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if r.is_negative() {
        return -rat_to_f64_floor(&(-r));
    }
    let fl = rat_to_f64_floor(r);
    if cmp_f64_rat(fl, r) == Ordering::Equal {
        fl
    } else if fl == f64::MAX {
        f64::INFINITY
    } else {
        fl.next_up()
    }
}
