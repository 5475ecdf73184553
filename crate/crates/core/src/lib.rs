pub mod arith;
pub mod catalog;
pub mod error;
pub mod frobenius;
pub mod guess;
pub mod optheta;
pub mod period;
pub mod qexp;
pub mod transform;

pub use arith::{Integer, PointValue, Polynomial, PowerSeries, QuadraticNumber, Rational};
pub use error::{Error, Result};
pub use optheta::{DOperator, RiemannSymbol, SingularPoint, ThetaOperator};
