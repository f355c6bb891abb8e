//! Serde adapters that keep big integers readable in JSON: a plain number
//! when the value fits in `i64`, a decimal string otherwise.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawInt {
    Small(i64),
    Text(String),
}

fn to_raw(x: &BigInt) -> RawInt {
    match x.to_i64() {
        Some(v) => RawInt::Small(v),
        None => RawInt::Text(x.to_string()),
    }
}

fn from_raw<E: serde::de::Error>(raw: RawInt) -> Result<BigInt, E> {
    match raw {
        RawInt::Small(v) => Ok(BigInt::from(v)),
        RawInt::Text(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| E::custom(format!("not an integer: {s:?}"))),
    }
}

pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        to_raw(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        from_raw(RawInt::deserialize(d)?)
    }
}

pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        xs.iter().map(to_raw).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<RawInt>::deserialize(d)?
            .into_iter()
            .map(from_raw)
            .collect()
    }
}

/// Rationals as `[numerator, denominator]`.
pub mod rational {
    use super::*;
    use num_traits::Zero;

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        [to_raw(x.numer()), to_raw(x.denom())].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let [n, den] = <[RawInt; 2]>::deserialize(d)?;
        let n = from_raw::<D::Error>(n)?;
        let den = from_raw::<D::Error>(den)?;
        if den.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(n, den))
    }
}

/// Rationals as a string: `"3"` or `"-5/2"`.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        if x.is_integer() {
            to_raw(x.numer()).serialize(s)
        } else {
            s.serialize_str(&format!("{}/{}", x.numer(), x.denom()))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        match RawInt::deserialize(d)? {
            RawInt::Small(v) => Ok(BigRational::from_integer(v.into())),
            RawInt::Text(s) => s
                .trim()
                .parse::<BigRational>()
                .map_err(|_| serde::de::Error::custom(format!("not a rational: {s:?}"))),
        }
    }
}
