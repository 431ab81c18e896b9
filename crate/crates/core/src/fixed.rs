//! Integer helpers shared by the fixed-point value types.

/// Divides `numerator` by a positive `denominator`, rounding ties to even.
pub(crate) fn div_round_half_even(numerator: i128, denominator: i128) -> i128 {
    debug_assert!(denominator > 0);
    let quotient = numerator.div_euclid(denominator);
    let remainder = numerator.rem_euclid(denominator);
    let twice = remainder * 2;
    if twice > denominator || (twice == denominator && quotient % 2 != 0) {
        quotient + 1
    } else {
        quotient
    }
}

/// Parses an optionally signed decimal literal into an integer scaled by
/// `10^scale`. Returns `None` when the text is malformed, carries more than
/// `scale` fractional digits, or overflows.
pub(crate) fn parse_scaled(text: &str, scale: u32) -> Option<ParsedDecimal> {
    let (negative, body) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit()) || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if body.ends_with('.') || body.starts_with('.') {
        return None;
    }
    if frac_part.len() > scale as usize {
        return Some(ParsedDecimal::TooPrecise);
    }
    let mut value: i128 = 0;
    for b in int_part.bytes().chain(frac_part.bytes()) {
        value = value.checked_mul(10)?.checked_add(i128::from(b - b'0'))?;
    }
    value = value.checked_mul(10i128.checked_pow(scale - frac_part.len() as u32)?)?;
    Some(ParsedDecimal::Value(if negative { -value } else { value }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ParsedDecimal {
    Value(i128),
    TooPrecise,
}

/// Renders `value / 10^scale` with exactly `digits` fractional digits
/// (`digits <= scale`, the dropped digits must be zero) or, when `digits` is
/// `None`, with trailing zeros trimmed.
pub(crate) fn render_scaled(value: i128, scale: u32, digits: Option<u32>) -> String {
    let unit = 10i128.pow(scale);
    let sign = if value < 0 { "-" } else { "" };
    let magnitude = value.unsigned_abs();
    let int_part = magnitude / unit as u128;
    let frac = magnitude % unit as u128;
    let mut frac_text = format!("{:0width$}", frac, width = scale as usize);
    match digits {
        Some(d) => frac_text.truncate(d as usize),
        None => {
            while frac_text.ends_with('0') {
                frac_text.pop();
            }
        }
    }
    if frac_text.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_text}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_even_ties() {
        assert_eq!(div_round_half_even(5, 10), 0);
        assert_eq!(div_round_half_even(15, 10), 2);
        assert_eq!(div_round_half_even(25, 10), 2);
        assert_eq!(div_round_half_even(-5, 10), 0);
        assert_eq!(div_round_half_even(-15, 10), -2);
        assert_eq!(div_round_half_even(-16, 10), -2);
        assert_eq!(div_round_half_even(14, 10), 1);
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in ["", "-", ".", "1.", ".5", "1e3", "1.2.3", "12a", "--1", " 1"] {
            assert_eq!(parse_scaled(bad, 2), None, "{bad:?}");
        }
        assert_eq!(parse_scaled("1.234", 2), Some(ParsedDecimal::TooPrecise));
        assert_eq!(parse_scaled("-1.5", 2), Some(ParsedDecimal::Value(-150)));
    }
}
