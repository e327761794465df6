//! Extended reals: finite non-negative-ish values plus an explicit `+inf`.
//!
//! The ratio objective uses `J(empty) = +inf` and `x / 0 = +inf` as load-bearing
//! conventions, so infinity is a dedicated variant rather than a sentinel
//! float. Comparisons put `+inf` above every finite value.

use std::cmp::Ordering;
use std::fmt;

/// A real number or positive infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
}

impl ExtReal {
    /// Division with the `x / 0 = +inf` convention for `x > 0`; `0 / 0` is 0.
    pub fn ratio(num: f64, den: f64) -> ExtReal {
        if den > 0.0 {
            ExtReal::Finite(num / den)
        } else if num == 0.0 {
            ExtReal::Finite(0.0)
        } else {
            ExtReal::PosInf
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtReal::PosInf)
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(x) => Some(x),
            ExtReal::PosInf => None,
        }
    }

    /// Clamp negatives to zero; infinity stays infinite.
    pub fn clamp_non_negative(self) -> ExtReal {
        match self {
            ExtReal::Finite(x) => ExtReal::Finite(x.max(0.0)),
            ExtReal::PosInf => ExtReal::PosInf,
        }
    }

    /// Total-order comparison. Finite payloads must not be NaN; none of the
    /// objective evaluations produce NaN on validated inputs.
    pub fn total_cmp(self, other: ExtReal) -> Ordering {
        match (self, other) {
            (ExtReal::PosInf, ExtReal::PosInf) => Ordering::Equal,
            (ExtReal::PosInf, ExtReal::Finite(_)) => Ordering::Greater,
            (ExtReal::Finite(_), ExtReal::PosInf) => Ordering::Less,
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.total_cmp(&b),
        }
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if self.total_cmp(other) == Ordering::Greater {
            other
        } else {
            self
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.total_cmp(*other))
    }
}

impl From<f64> for ExtReal {
    fn from(x: f64) -> Self {
        if x.is_infinite() && x > 0.0 {
            ExtReal::PosInf
        } else {
            ExtReal::Finite(x)
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(x) => write!(f, "{x}"),
            ExtReal::PosInf => write!(f, "inf"),
        }
    }
}
