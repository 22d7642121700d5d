use crate::{Error, Result};

/// Central-difference estimate of the `order`-th derivative of `f` at `x`
/// with step `h`. Truncation error is O(h²) for orders 1 through 3.
pub fn derivative<F>(f: F, x: f64, order: u8, h: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(h > 0.0) {
        return Err(Error::InvalidInput(format!(
            "step must be positive, got {h}"
        )));
    }
    let d = match order {
        1 => (f(x + h) - f(x - h)) / (2.0 * h),
        2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
        3 => {
            (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h * h * h)
        }
        _ => {
            return Err(Error::InvalidInput(format!(
                "derivative order must be 1, 2 or 3, got {order}"
            )))
        }
    };
    Ok(d)
}
