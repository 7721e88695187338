//! Exact rational scalars. Everything that feeds a chamber decision is a
//! `Rat`; floating point appears only at the reporting/plotting surface.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

pub type Rat = BigRational;

/// `n` as an exact rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rat {
    Rat::from_integer(BigInt::from(0))
}

pub fn one() -> Rat {
    Rat::from_integer(BigInt::from(1))
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Lossless rendering: `3/2`, `-7`, `0`.
pub fn display(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `3/2`, `-7`, `+1/3`. Whitespace is not tolerated inside a literal.
pub fn parse(s: &str) -> Result<Rat, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty rational literal".to_string());
    }
    let bad = |_| format!("cannot parse {t:?} as a rational");
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().map_err(bad)?;
            let d: BigInt = d.parse().map_err(bad)?;
            if d == BigInt::from(0) {
                return Err(format!("zero denominator in {t:?}"));
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(t.parse().map_err(bad)?)),
    }
}

/// True iff `r` is a half-integer (denominator divides 2).
pub fn is_half_integral(r: &Rat) -> bool {
    (r * int(2)).is_integer()
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_roundtrip() {
        for s in ["3/2", "-7", "0", "22/7", "-1/100"] {
            let r = parse(s).unwrap();
            assert_eq!(display(&r), s);
        }
        assert!(parse("").is_err());
        assert!(parse("a/b").is_err());
        assert!(parse("1/0").is_err());
    }

    #[test]
    fn half_integral() {
        assert!(is_half_integral(&frac(-1, 2)));
        assert!(is_half_integral(&int(4)));
        assert!(!is_half_integral(&frac(1, 3)));
    }
}
