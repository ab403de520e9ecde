use std::fmt;

use num_traits::{Float, FromPrimitive};

/// Scalar type for all vector and matrix arithmetic: `f32` or `f64`.
///
/// `Display` on these types prints the shortest decimal string that parses
/// back to the identical bit pattern, which is what the on-disk formats rely
/// on for exact round-trips. `parse_decimal` is the matching inverse.
pub trait Scalar:
    Float + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Parses the decimal form produced by `Display`.
    fn parse_decimal(text: &str) -> Option<Self>;

    /// Converts an observation count. Counts in this crate stay far below
    /// 2^53, so the conversion is exact for `f64` targets.
    fn from_count(count: u64) -> Self {
        FromPrimitive::from_u64(count).expect("count representable in scalar type")
    }

    fn from_index(index: usize) -> Self {
        FromPrimitive::from_usize(index).expect("index representable in scalar type")
    }
}

impl Scalar for f32 {
    fn parse_decimal(text: &str) -> Option<Self> {
        text.parse().ok()
    }
}

impl Scalar for f64 {
    fn parse_decimal(text: &str) -> Option<Self> {
        text.parse().ok()
    }
}
