//! Layout units.
//!
//! One layout unit (lu) is one CSS pixel at the reference viewport. Values
//! serialize as the shortest decimal that round-trips, with integral values
//! written without a fractional part (`124`, not `124.0`).

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A length in layout units.
#[derive(Debug, Clone, Copy, Default, PartialEq, PartialOrd)]
pub struct Lu(pub f64);

impl Lu {
    pub const ZERO: Lu = Lu(0.0);

    #[must_use]
    pub const fn new(v: f64) -> Self {
        Lu(v)
    }

    #[must_use]
    pub const fn get(self) -> f64 {
        self.0
    }

    #[must_use]
    pub fn max(self, other: Lu) -> Lu {
        Lu(self.0.max(other.0))
    }

    #[must_use]
    pub fn min(self, other: Lu) -> Lu {
        Lu(self.0.min(other.0))
    }

    /// Total order for sorting; layout values are never NaN.
    #[must_use]
    pub fn total_cmp(&self, other: &Lu) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl From<f64> for Lu {
    fn from(v: f64) -> Self {
        Lu(v)
    }
}

impl Add for Lu {
    type Output = Lu;
    fn add(self, rhs: Lu) -> Lu {
        Lu(self.0 + rhs.0)
    }
}

impl AddAssign for Lu {
    fn add_assign(&mut self, rhs: Lu) {
        self.0 += rhs.0;
    }
}

impl Sub for Lu {
    type Output = Lu;
    fn sub(self, rhs: Lu) -> Lu {
        Lu(self.0 - rhs.0)
    }
}

impl Mul<f64> for Lu {
    type Output = Lu;
    fn mul(self, rhs: f64) -> Lu {
        Lu(self.0 * rhs)
    }
}

impl Div<f64> for Lu {
    type Output = Lu;
    fn div(self, rhs: f64) -> Lu {
        Lu(self.0 / rhs)
    }
}

impl Sum for Lu {
    fn sum<I: Iterator<Item = Lu>>(iter: I) -> Lu {
        iter.fold(Lu::ZERO, Add::add)
    }
}

impl fmt::Display for Lu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if is_integral(self.0) {
            write!(f, "{}", self.0 as i64)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

fn is_integral(v: f64) -> bool {
    v.is_finite() && v.fract() == 0.0 && v.abs() < 9.0e15
}

/// Serializes a float as an integer when it has no fractional part.
pub(crate) fn serialize_minimal<S: Serializer>(v: f64, s: S) -> Result<S::Ok, S::Error> {
    if is_integral(v) {
        // -0.0 collapses to 0 here.
        s.serialize_i64(v as i64)
    } else {
        s.serialize_f64(v)
    }
}

impl Serialize for Lu {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize_minimal(self.0, s)
    }
}

impl<'de> Deserialize<'de> for Lu {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(Lu)
    }
}
