//! Exact rational scalars and the few conversions the rest of the crate needs.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number used for every stored coordinate.
pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// `2^-n` as an exact rational.
pub fn pow2_neg(n: u32) -> Q {
    Q::new(BigInt::one(), BigInt::one() << n as usize)
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Square root of a non-negative rational, as a float approximation.
pub fn sqrt_f64(x: &Q) -> f64 {
    to_f64(x).max(0.0).sqrt()
}

/// Returns `Some(r)` when `x = r^2` for a non-negative rational `r`.
pub fn exact_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &(&n * &n) == x.numer() && &(&d * &d) == x.denom() {
        Some(Q::new(n, d))
    } else {
        None
    }
}

/// Largest `k / 2^bits` (k a non-negative integer) whose square is at most `x`.
///
/// Used to turn an exact squared length into a rational lower bound for the
/// length itself.
pub fn floor_sqrt_dyadic(x: &Q, bits: u32) -> Q {
    if !x.is_positive() {
        return zero();
    }
    let scale = BigInt::one() << bits as usize;
    // floor(sqrt(x) * 2^bits) = floor(sqrt(x * 4^bits))
    let scaled = x * Q::from_integer(&scale * &scale);
    let floor = scaled.floor().to_integer();
    let mut k = floor.sqrt();
    // integer sqrt of the floor is the floor of the real sqrt
    while Q::from_integer(&k * &k) > scaled {
        k -= 1;
    }
    Q::new(k, scale)
}

/// Smallest `k / 2^bits` whose square is at least `x`.
pub fn ceil_sqrt_dyadic(x: &Q, bits: u32) -> Q {
    let lo = floor_sqrt_dyadic(x, bits);
    if &(&lo * &lo) == x {
        lo
    } else {
        lo + Q::new(BigInt::one(), BigInt::one() << bits as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as a rational number")]
pub struct ParseRationalError(pub String);

/// Parses `3`, `-3/4`, or a finite decimal such as `0.125`.
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let s = s.trim();
    let err = || ParseRationalError(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(err());
        }
        let neg = int.starts_with('-');
        let int_part = if int.is_empty() || int == "-" { BigInt::zero() } else { BigInt::from_str(int).map_err(|_| err())? };
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let frac_num = BigInt::from_str(frac).map_err(|_| err())?;
        let mut v = Q::from_integer(int_part.abs()) + Q::new(frac_num, den);
        if neg {
            v = -v;
        }
        return Ok(v);
    }
    BigInt::from_str(s).map(Q::from_integer).map_err(|_| err())
}

/// Canonical text form: `n` for integers, `n/d` otherwise.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn fmt_vec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_q).collect();
    format!("({})", parts.join(","))
}

/// A length stored exactly by its square.
///
/// Euclidean and product-space distances are generally irrational, so every
/// predicate compares squares; [`Length::approx`] is only for reports.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Length {
    pub squared: Q,
}

impl Length {
    pub fn from_squared(squared: Q) -> Self {
        debug_assert!(!squared.is_negative());
        Length { squared }
    }

    pub fn from_rational(r: &Q) -> Self {
        Length { squared: r * r }
    }

    pub fn is_zero(&self) -> bool {
        self.squared.is_zero()
    }

    /// The exact value when the square is a perfect rational square.
    pub fn exact(&self) -> Option<Q> {
        exact_sqrt(&self.squared)
    }

    pub fn approx(&self) -> f64 {
        sqrt_f64(&self.squared)
    }
}

impl PartialOrd for Length {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Length {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.squared.cmp(&other.squared)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3").unwrap(), qi(3));
        assert_eq!(parse_q("-3/4").unwrap(), q(-3, 4));
        assert_eq!(parse_q("0.125").unwrap(), q(1, 8));
        assert_eq!(parse_q("-1.5").unwrap(), q(-3, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
    }

    #[test]
    fn dyadic_sqrt_bounds() {
        let two = qi(2);
        let lo = floor_sqrt_dyadic(&two, 10);
        let hi = ceil_sqrt_dyadic(&two, 10);
        assert!(&lo * &lo <= two);
        assert!(&hi * &hi >= two);
        assert_eq!(&hi - &lo, pow2_neg(10));
        assert_eq!(floor_sqrt_dyadic(&q(1, 4), 4), q(1, 2));
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(Length::from_squared(qi(25)).exact(), Some(qi(5)));
        assert_eq!(Length::from_squared(q(9, 16)).exact(), Some(q(3, 4)));
        assert_eq!(Length::from_squared(qi(2)).exact(), None);
    }
}
