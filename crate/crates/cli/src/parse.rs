//! Parsers for the numeric flags. Scales are kept exact: `1.5` becomes 9/4
//! squared and `sqrt(2)` becomes 2 squared.

use evotopo_core::persistence::{parse_squared, squared_from_decimal};
use evotopo_core::{IterationInterval, Squared};

use crate::UsageError;

/// An ε value, returned squared. Accepts decimals (`2.5`) and `sqrt(X)` where
/// `X` is an integer, a fraction `a/b` or a decimal.
pub fn parse_eps_sq(s: &str) -> Result<Squared, UsageError> {
    let t = s.trim();
    let v = match t.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
        Some(inner) => parse_rational(inner).ok(),
        None => squared_from_decimal(t),
    };
    v.ok_or_else(|| {
        UsageError(format!(
            "invalid scale '{s}'; use a decimal like 2.5 or sqrt(2)"
        ))
    })
}

/// `LO:HI`, both ε values; returned squared.
pub fn parse_window(s: &str) -> Result<(Squared, Squared), UsageError> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| UsageError(format!("window must look like LO:HI, got '{s}'")))?;
    let (lo, hi) = (parse_eps_sq(a)?, parse_eps_sq(b)?);
    if lo >= hi {
        return Err(UsageError(format!("window '{s}' is empty")));
    }
    Ok((lo, hi))
}

/// A non-negative rational written as `a/b`, an integer or a decimal.
pub fn parse_rational(s: &str) -> Result<Squared, UsageError> {
    let t = s.trim();
    let err = || UsageError(format!("invalid number '{s}'"));
    if t.contains('/') || !t.contains('.') {
        return parse_squared(t).ok_or_else(err);
    }
    let (int, frac) = t.split_once('.').ok_or_else(err)?;
    if frac.is_empty()
        || frac.len() > 9
        || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(err());
    }
    let num = format!("{int}{frac}").parse::<u64>().map_err(|_| err())?;
    Ok(Squared::new(num, 10u64.pow(frac.len() as u32)))
}

pub fn parse_interval(s: &str) -> Result<IterationInterval, UsageError> {
    s.parse::<IterationInterval>()
        .map_err(|e| UsageError(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scales() {
        assert_eq!(parse_eps_sq("2.5").unwrap(), Squared::new(25, 4));
        assert_eq!(parse_eps_sq("sqrt(2)").unwrap(), Squared::from_integer(2));
        assert_eq!(parse_eps_sq("sqrt(1/2)").unwrap(), Squared::new(1, 2));
        assert_eq!(parse_eps_sq("sqrt(4.5)").unwrap(), Squared::new(9, 2));
        assert!(parse_eps_sq("-1").is_err());
        assert!(parse_eps_sq("sqrt(x)").is_err());
    }

    #[test]
    fn windows_and_rationals() {
        assert_eq!(
            parse_window("sqrt(2):2").unwrap(),
            (Squared::from_integer(2), Squared::from_integer(4))
        );
        assert!(parse_window("2:1").is_err());
        assert!(parse_window("2").is_err());
        assert_eq!(parse_rational("1/2").unwrap(), Squared::new(1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), Squared::new(1, 4));
        assert_eq!(parse_rational("3").unwrap(), Squared::from_integer(3));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_interval("5:2").is_err());
    }
}
