//! Numeric abstraction for capacities and flow values.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_traits::{PrimInt, Signed};

/// Exact signed integer type used for capacities, flows and excesses.
///
/// Flows are antisymmetric, so the type must be signed. Only exact
/// (integral) types are admitted: the algorithms compare values for exact
/// equality and rely on integrality of maximum flows.
pub trait Scalar:
    PrimInt + Signed + Sum + Debug + Display + FromStr + Default + Send + Sync + 'static
{
    /// Converts a count into the scalar type. Panics if it does not fit.
    fn from_count(n: usize) -> Self {
        Self::from(n).expect("count does not fit in scalar type")
    }
}

impl<T> Scalar for T where
    T: PrimInt + Signed + Sum + Debug + Display + FromStr + Default + Send + Sync + 'static
{
}
