use crate::error::{Error, Result};

/// `x log₂ x` with the convention `0 · log₂ 0 = 0`.
pub(crate) fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Checks `x ∈ [0, 1]` with slack and returns the value clamped into the range.
pub(crate) fn check_unit_interval(x: f64, what: &'static str, slack: f64) -> Result<f64> {
    if x.is_nan() || x < -slack || x > 1.0 + slack {
        Err(Error::domain(what, x, "[0, 1]"))
    } else {
        Ok(x.clamp(0.0, 1.0))
    }
}
