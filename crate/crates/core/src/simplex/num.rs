//! Exact rational with an `i64` fast path, promoted to a big rational on
//! overflow. Used only inside the tableau.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone)]
pub(crate) enum Num {
    /// Numerator and positive denominator in lowest terms.
    Small(i64, i64),
    Big(Box<Rational>),
}

fn gcd64(mut a: u64, mut b: u64) -> u64 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    if let (Ok(x), Ok(y)) = (u64::try_from(a), u64::try_from(b)) {
        return gcd64(x, y) as i128;
    }
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn make(n: i128, d: i128) -> Num {
    debug_assert!(d != 0);
    let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
    if n == 0 {
        return Num::Small(0, 1);
    }
    if d != 1 {
        let g = gcd(n, d);
        if g != 1 {
            n /= g;
            d /= g;
        }
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(a), Ok(b)) => Num::Small(a, b),
        _ => Num::Big(Box::new(Rational::new(BigInt::from(n), BigInt::from(d)))),
    }
}

fn demote(r: Rational) -> Num {
    match (r.numer().to_i64(), r.denom().to_i64()) {
        (Some(a), Some(b)) => Num::Small(a, b),
        _ => Num::Big(Box::new(r)),
    }
}

impl Num {
    pub fn zero() -> Num {
        Num::Small(0, 1)
    }

    pub fn one() -> Num {
        Num::Small(1, 1)
    }

    pub fn from_rational(r: &Rational) -> Num {
        demote(r.clone())
    }

    pub fn to_rational(&self) -> Rational {
        match self {
            Num::Small(a, b) => Rational::new(BigInt::from(*a), BigInt::from(*b)),
            Num::Big(r) => (**r).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Num::Small(a, _) => *a == 0,
            Num::Big(r) => r.is_zero(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Num::Small(a, _) => *a > 0,
            Num::Big(r) => r.is_positive(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Num::Small(a, _) => *a < 0,
            Num::Big(r) => r.is_negative(),
        }
    }

    pub fn add(&self, o: &Num) -> Num {
        match (self, o) {
            (Num::Small(a, 1), Num::Small(c, 1)) => match a.checked_add(*c) {
                Some(x) => Num::Small(x, 1),
                None => make(*a as i128 + *c as i128, 1),
            },
            (Num::Small(a, b), Num::Small(c, d)) => {
                if b == d {
                    make(*a as i128 + *c as i128, *b as i128)
                } else {
                    make(*a as i128 * *d as i128 + *c as i128 * *b as i128, *b as i128 * *d as i128)
                }
            }
            _ => demote(self.to_rational() + o.to_rational()),
        }
    }

    pub fn sub(&self, o: &Num) -> Num {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Num {
        match self {
            Num::Small(a, b) if *a != i64::MIN => Num::Small(-a, *b),
            _ => demote(-self.to_rational()),
        }
    }

    pub fn mul(&self, o: &Num) -> Num {
        match (self, o) {
            (Num::Small(a, 1), Num::Small(c, 1)) => match a.checked_mul(*c) {
                Some(x) => Num::Small(x, 1),
                None => make(*a as i128 * *c as i128, 1),
            },
            (Num::Small(a, b), Num::Small(c, d)) => {
                if *a == 0 || *c == 0 {
                    return Num::zero();
                }
                let g1 = gcd(*a as i128, *d as i128);
                let g2 = gcd(*c as i128, *b as i128);
                let n = (*a as i128 / g1) * (*c as i128 / g2);
                let m = (*b as i128 / g2) * (*d as i128 / g1);
                match (i64::try_from(n), i64::try_from(m)) {
                    (Ok(x), Ok(y)) => Num::Small(x, y),
                    _ => Num::Big(Box::new(Rational::new(BigInt::from(n), BigInt::from(m)))),
                }
            }
            _ => demote(self.to_rational() * o.to_rational()),
        }
    }

    pub fn recip(&self) -> Num {
        match self {
            Num::Small(a, b) => make(*b as i128, *a as i128),
            Num::Big(r) => demote(r.recip()),
        }
    }

    pub fn div(&self, o: &Num) -> Num {
        self.mul(&o.recip())
    }

    pub fn cmp(&self, o: &Num) -> Ordering {
        match (self, o) {
            (Num::Small(a, b), Num::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_rational().cmp(&o.to_rational()),
        }
    }
}

impl PartialEq for Num {
    fn eq(&self, o: &Num) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
