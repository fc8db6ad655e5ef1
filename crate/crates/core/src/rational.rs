//! Exact rational arithmetic helpers.
//!
//! Every flow value, LP coefficient and bound in this crate is an exact
//! [`Rational`]. The textual form used in JSON is `"p/q"`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

/// `"p/q"` with `q >= 1`; integers are written `"p/1"`.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn floor_i64(r: &Rational) -> i64 {
    r.numer().div_floor(r.denom()).to_i64().expect("value fits in i64")
}

pub fn is_integral(r: &Rational) -> bool {
    r.denom().is_one()
}

/// True when `2r` is an integer.
pub fn is_half_integral(r: &Rational) -> bool {
    (r * int(2)).denom().is_one()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn is_nonneg(r: &Rational) -> bool {
    !r.is_negative()
}

pub fn sum<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> Rational {
    it.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_and_parse() {
        assert_eq!(format(&ratio(6, 8)), "3/4");
        assert_eq!(format(&int(2)), "2/1");
        assert_eq!(parse("3/4"), Some(ratio(3, 4)));
        assert_eq!(parse("5"), Some(int(5)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }

    #[test]
    fn floors() {
        assert_eq!(floor_i64(&ratio(7, 2)), 3);
        assert_eq!(floor_i64(&ratio(-1, 2)), -1);
        assert!(is_half_integral(&ratio(5, 2)));
        assert!(!is_half_integral(&ratio(1, 3)));
    }
}
