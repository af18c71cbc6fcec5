//! Floating-point scalar abstraction for the numerical modules.

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// Real scalar used by every numeric routine.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Machine epsilon, as a value of this type.
    const EPS: f64;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    fn from_ratio(num: &num_bigint::BigInt, den: &num_bigint::BigInt) -> Self {
        let r = num_rational::BigRational::new(num.clone(), den.clone());
        Self::lit(r.to_f64().unwrap_or(f64::NAN))
    }
}

macro_rules! impl_real {
    ($f:ty) => {
        impl Real for $f {
            const EPS: f64 = <$f>::EPSILON as f64;
        }
    };
}

impl_real!(f32);
impl_real!(f64);

/// Convert an exact rational to the scalar type, rounding once.
pub fn rat<R: Real>(q: &num_rational::BigRational) -> R {
    R::from_ratio(q.numer(), q.denom())
}
