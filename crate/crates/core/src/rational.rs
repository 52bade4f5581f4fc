//! Exact scalars.
//!
//! Every quantity in this crate is an arbitrary-precision rational. They are
//! rendered as `"p/q"` strings (integers as `"p"`) whenever they leave the
//! process.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serializer;

use crate::error::{Error, Result};

/// The scalar type used throughout.
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

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let bad = || Error::ParseRational(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Q::from_integer(n))
        }
    }
}

pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

/// Returns the value as `i64` when it is an integer in range.
pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

pub fn is_integer(x: &Q) -> bool {
    x.is_integer()
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

pub fn pow(x: &Q, n: u32) -> Q {
    let mut acc = one();
    for _ in 0..n {
        acc *= x;
    }
    acc
}

/// `serde` helpers for rational fields.
pub mod ser {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn q<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn vec<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(xs.len()))?;
        for x in xs {
            seq.serialize_element(&fmt_q(x))?;
        }
        seq.end()
    }

    pub fn matrix<S: Serializer>(rows: &[Vec<Q>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(fmt_q).collect()).collect();
        serde::Serialize::serialize(&strs, s)
    }

    pub fn opt<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&fmt_q(x)),
            None => s.serialize_none(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("-22/5").unwrap(), q(-22, 5));
        assert_eq!(parse_q("4/2").unwrap(), qi(2));
        assert_eq!(parse_q(" 7 ").unwrap(), qi(7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert_eq!(fmt_q(&q(14, 5)), "14/5");
        assert_eq!(fmt_q(&qi(-3)), "-3");
    }
}
