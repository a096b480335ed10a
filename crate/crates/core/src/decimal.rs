//! Exact decimal literal handling.
//!
//! A literal such as `0.1` is converted to the nearest binary double and then
//! compared exactly (with big integers) against the decimal value, so that the
//! resulting enclosure is one ulp wide when the literal is not representable
//! and a thin interval when it is.

use std::cmp::Ordering;

use num_bigint::BigInt;

/// A parsed decimal literal `mantissa * 10^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Decimal {
    mantissa: BigInt,
    exponent: i64,
}

fn parse_decimal(text: &str) -> Option<Decimal> {
    let (negative, body) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (significand, exp_part) = match body.find(['e', 'E']) {
        Some(pos) => (&body[..pos], Some(&body[pos + 1..])),
        None => (body, None),
    };
    let (int_part, frac_part) = match significand.find('.') {
        Some(pos) => (&significand[..pos], &significand[pos + 1..]),
        None => (significand, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut exponent: i64 = match exp_part {
        Some(e) if !e.is_empty() => e.parse().ok()?,
        Some(_) => return None,
        None => 0,
    };
    exponent = exponent.checked_sub(frac_part.len() as i64)?;
    let digits = format!("{int_part}{frac_part}");
    let mut mantissa: BigInt = digits.parse().ok()?;
    if negative {
        mantissa = -mantissa;
    }
    Some(Decimal { mantissa, exponent })
}

/// Exact decomposition of a finite double as `m * 2^e`.
fn binary_parts(x: f64) -> (BigInt, i64) {
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { -1 } else { 1 };
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if raw_exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), raw_exp - 1075)
    };
    (BigInt::from(m) * sign, e)
}

/// Compares the decimal value with a finite double, exactly.
fn compare(dec: &Decimal, x: f64) -> Ordering {
    let (m, e) = binary_parts(x);
    let mut lhs = dec.mantissa.clone();
    let mut rhs = m;
    if dec.exponent >= 0 {
        lhs *= BigInt::from(10).pow(dec.exponent as u32);
    } else {
        rhs *= BigInt::from(10).pow((-dec.exponent) as u32);
    }
    if e >= 0 {
        rhs <<= e as usize;
    } else {
        lhs <<= (-e) as usize;
    }
    lhs.cmp(&rhs)
}

/// Returns `(lo, hi)` doubles enclosing the real value of `text`, or `None`
/// when the text is not a decimal literal or its value is outside the finite
/// range.
pub(crate) fn enclose(text: &str) -> Option<(f64, f64)> {
    let dec = parse_decimal(text.trim())?;
    let zero = BigInt::from(0);
    let digits = dec.mantissa.magnitude().to_string().len() as i64;
    // Decimal magnitude of the literal; keeps the big-integer comparison
    // away from absurd exponents.
    let magnitude = dec.exponent + digits;
    if dec.mantissa != zero && magnitude > 310 {
        return None;
    }
    let nearest: f64 = text.trim().parse().ok()?;
    if !nearest.is_finite() {
        return None;
    }
    if dec.mantissa != zero && magnitude < -330 {
        let tiny = f64::from_bits(1);
        return Some(if dec.mantissa.sign() == num_bigint::Sign::Minus {
            (-tiny, 0.0)
        } else {
            (0.0, tiny)
        });
    }
    let nearest = nearest + 0.0;
    let range = match compare(&dec, nearest) {
        Ordering::Equal => (nearest, nearest),
        Ordering::Less => (nearest.next_down(), nearest),
        Ordering::Greater => (nearest, nearest.next_up()),
    };
    if range.0.is_finite() && range.1.is_finite() {
        Some(range)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn representable_literals_are_thin() {
        assert_eq!(enclose("1"), Some((1.0, 1.0)));
        assert_eq!(enclose("-2.5"), Some((-2.5, -2.5)));
        assert_eq!(enclose("0.25e1"), Some((2.5, 2.5)));
        assert_eq!(enclose("-0"), Some((0.0, 0.0)));
    }

    #[test]
    fn one_tenth_is_one_ulp_wide() {
        let (lo, hi) = enclose("0.1").unwrap();
        assert!(lo < hi);
        assert_eq!(lo.next_up(), hi);
        // 0.1f64 is above the real 0.1
        assert_eq!(hi, 0.1);
    }

    #[test]
    fn one_millionth() {
        let (lo, hi) = enclose("1e-6").unwrap();
        assert!(lo <= 1e-6 && 1e-6 <= hi);
        assert_eq!(lo.next_up(), hi);
    }

    #[test]
    fn rejects_garbage_and_overflow() {
        assert_eq!(enclose(""), None);
        assert_eq!(enclose("."), None);
        assert_eq!(enclose("1e"), None);
        assert_eq!(enclose("abc"), None);
        assert_eq!(enclose("1e400"), None);
        assert_eq!(enclose("inf"), None);
    }

    #[test]
    fn long_mantissa_with_negative_exponent_is_not_tiny() {
        let text = format!("1{}e-900", "0".repeat(900));
        assert_eq!(enclose(&text), Some((1.0, 1.0)));
        let (lo, hi) = enclose("1e-400").unwrap();
        assert!(lo == 0.0 && hi > 0.0);
    }
}
