//! Small helpers for exact rational bookkeeping shared by the bound
//! calculator, the instability analyzer, and report serialization.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub fn rat_i(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text form: `a` when the denominator is 1, else `a/b` with b > 0.
pub fn rat_str(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `a` or `a/b`.
pub fn rat_parse(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().ok()?;
        let den: BigInt = d.trim().parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(BigRational::new(num, den))
    } else {
        let num: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(num))
    }
}

pub fn is_integer(r: &BigRational) -> bool {
    r.denom().is_one()
}

pub fn is_odd_integer(r: &BigRational) -> bool {
    is_integer(r) && r.numer().is_odd()
}

pub fn floor_i64(r: &BigRational) -> i64 {
    r.floor()
        .to_integer()
        .to_i64()
        .expect("rational floor out of i64 range")
}

pub fn ceil_i64(r: &BigRational) -> i64 {
    r.ceil()
        .to_integer()
        .to_i64()
        .expect("rational ceil out of i64 range")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_forms() {
        assert_eq!(rat_str(&rat(30, 1)), "30");
        assert_eq!(rat_str(&rat(175, 4)), "175/4");
        assert_eq!(rat_str(&rat(-3, 6)), "-1/2");
        assert_eq!(rat_parse("175/4").unwrap(), rat(175, 4));
        assert_eq!(rat_parse("-7").unwrap(), rat_i(-7));
        assert!(rat_parse("1/0").is_none());
    }

    #[test]
    fn integrality_and_rounding() {
        assert!(is_odd_integer(&rat_i(7)));
        assert!(!is_odd_integer(&rat_i(4)));
        assert!(!is_odd_integer(&rat(7, 2)));
        assert_eq!(floor_i64(&rat(7, 2)), 3);
        assert_eq!(ceil_i64(&rat(7, 2)), 4);
        assert_eq!(ceil_i64(&rat_i(4)), 4);
    }
}
