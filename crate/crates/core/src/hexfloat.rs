//! Lossless hexadecimal rendering of doubles (`-0x1.999999999999ap-4`).
//!
//! Normal numbers print as `0x1.<fraction>p<exp>`, subnormals as
//! `0x0.<fraction>p-1022` and zero as `0x0p+0`. Trailing zero hex digits of
//! the fraction are dropped. Parsing accepts exactly these shapes, so every
//! accepted string denotes one double bit pattern.

use std::fmt::Write;

const FRAC_BITS: u32 = 52;
const FRAC_MASK: u64 = (1 << FRAC_BITS) - 1;

pub fn format(x: f64) -> String {
    assert!(x.is_finite(), "hexfloat::format({x})");
    let bits = x.to_bits();
    let mut out = String::new();
    if bits >> 63 == 1 && x != 0.0 {
        out.push('-');
    }
    let raw_exp = ((bits >> FRAC_BITS) & 0x7ff) as i32;
    let frac = bits & FRAC_MASK;
    if raw_exp == 0 && frac == 0 {
        out.push_str("0x0p+0");
        return out;
    }
    let (lead, exp) = if raw_exp == 0 { (0, -1022) } else { (1, raw_exp - 1023) };
    let _ = write!(out, "0x{lead}");
    if frac != 0 {
        let digits = format!("{frac:013x}");
        let _ = write!(out, ".{}", digits.trim_end_matches('0'));
    }
    let _ = write!(out, "p{exp:+}");
    out
}

pub fn parse(text: &str) -> Option<f64> {
    let (negative, rest) = match text.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, text),
    };
    let rest = rest.strip_prefix("0x")?;
    let (mantissa, exp) = rest.split_once('p')?;
    let (lead, frac) = match mantissa.split_once('.') {
        Some((l, f)) if !f.is_empty() => (l, f),
        Some(_) => return None,
        None => (mantissa, ""),
    };
    if frac.len() > 13 || !frac.bytes().all(|b| b.is_ascii_hexdigit()) {
        return None;
    }
    if !exp.starts_with(['+', '-']) {
        return None;
    }
    let exp: i32 = exp.parse().ok()?;
    let frac_bits = if frac.is_empty() {
        0
    } else {
        u64::from_str_radix(frac, 16).ok()? << (4 * (13 - frac.len()))
    };
    let bits = match lead {
        "1" if (-1022..=1023).contains(&exp) => (((exp + 1023) as u64) << FRAC_BITS) | frac_bits,
        "0" if frac_bits == 0 && exp == 0 => 0,
        "0" if frac_bits != 0 && exp == -1022 => frac_bits,
        _ => return None,
    };
    let x = f64::from_bits(bits);
    Some(if negative { -x } else { x })
}
