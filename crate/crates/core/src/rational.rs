//! Exact rationals and polygon vertices, with the `"num/den"` text form used
//! in every JSON and CSV output.

use std::fmt;

use num_rational::Ratio;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

pub type Rational = Ratio<i64>;

/// `"3"` for integers, `"2/7"` otherwise.
pub fn format_ratio(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_ratio(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            (d != 0).then(|| Rational::new(n, d))
        }
        None => s.parse().ok().map(Rational::from_integer),
    }
}

/// A rational that serializes as a JSON integer when it is one, and as a
/// `"num/den"` string otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact(pub Rational);

impl Serialize for Exact {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if *self.0.denom() == 1 {
            s.serialize_i64(*self.0.numer())
        } else {
            s.serialize_str(&format_ratio(&self.0))
        }
    }
}

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(Exact(Rational::from_integer(i))),
            Raw::Text(t) => parse_ratio(&t).map(Exact).ok_or_else(|| de::Error::custom(format!("bad rational {t:?}"))),
        }
    }
}

/// A break point of a Newton polygon. Serialized as `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub x: u32,
    pub y: Rational,
}

impl Vertex {
    pub fn new(x: u32, y: Rational) -> Self {
        Vertex { x, y }
    }

    pub fn integral(x: u32, y: i64) -> Self {
        Vertex { x, y: Rational::from_integer(y) }
    }

    /// Slope of the segment from the origin.
    pub fn slope(&self) -> Rational {
        self.y / i64::from(self.x)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, format_ratio(&self.y))
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&self.x)?;
        t.serialize_element(&Exact(self.y))?;
        t.end()
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let (x, y) = <(u32, Exact)>::deserialize(d)?;
        Ok(Vertex { x, y: y.0 })
    }
}
