//! Two-exponential approximation of the Gaussian tail function.

use libm::exp;

use crate::{Error, Result};

/// `Q(x) ~= (1/12) e^{-x^2/2} + (1/4) e^{-2 x^2/3}` for `x >= 0`.
///
/// The approximation is only meaningful on the tail; negative arguments are
/// rejected rather than extrapolated.
pub fn q_func_approx(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::DomainError("tail approximation requires x >= 0"));
    }
    let x2 = x * x;
    Ok(exp(-x2 / 2.0) / 12.0 + exp(-2.0 * x2 / 3.0) / 4.0)
}
