//! Serde adapters for exact numbers: integers become JSON numbers when they
//! fit in `i64` and decimal strings otherwise; rationals are `"p/q"` strings.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

fn to_repr(x: &BigInt) -> IntRepr {
    match x.to_i64() {
        Some(v) => IntRepr::Small(v),
        None => IntRepr::Big(x.to_string()),
    }
}

fn from_repr<E: serde::de::Error>(r: IntRepr) -> Result<BigInt, E> {
    match r {
        IntRepr::Small(v) => Ok(BigInt::from(v)),
        IntRepr::Big(s) => BigInt::from_str(&s).map_err(|_| E::custom(format!("invalid integer {s:?}"))),
    }
}

pub mod int_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<IntRepr>> = m.iter().map(|r| r.iter().map(to_repr).collect()).collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let rows = Vec::<Vec<IntRepr>>::deserialize(d)?;
        rows.into_iter().map(|r| r.into_iter().map(from_repr).collect()).collect()
    }
}

pub mod int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_repr).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<IntRepr>::deserialize(d)?.into_iter().map(from_repr).collect()
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| D::Error::custom(format!("invalid rational {s:?}")))
    }
}

/// Parses `"p"` or `"p/q"` with a nonzero denominator.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        None => BigInt::from_str(s).ok().map(BigRational::from_integer),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).ok()?;
            let q = BigInt::from_str(q.trim()).ok()?;
            if q == BigInt::from(0) {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Wrap {
        #[serde(with = "int_matrix")]
        m: Vec<Vec<BigInt>>,
        #[serde(with = "rational")]
        q: BigRational,
    }

    #[test]
    fn round_trip() {
        let big = BigInt::from(i64::MAX) * 10;
        let w = Wrap {
            m: vec![vec![BigInt::from(-3), big]],
            q: BigRational::new(BigInt::from(-3), BigInt::from(6)),
        };
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"m":[[-3,"92233720368547758070"]],"q":"-1/2"}"#);
        assert_eq!(serde_json::from_str::<Wrap>(&s).unwrap(), w);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational(" 7 "), Some(BigRational::from_integer(7.into())));
        assert_eq!(parse_rational("4/-6"), Some(BigRational::new((-2).into(), 3.into())));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("0.5"), None);
    }
}
