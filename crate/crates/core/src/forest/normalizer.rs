//! Path-length normalization and the depth-to-score map.

use crate::error::{EifError, Result};
use crate::scalar::Scalar;

/// Euler-Mascheroni constant, to the ten decimals used by the harmonic estimate.
pub const EULER_GAMMA: f64 = 0.5772156649;

/// `ln(i) + γ`, the usual estimate of the `i`-th harmonic number.
pub fn harmonic_estimate<T: Scalar>(i: usize) -> Result<T> {
    if i == 0 {
        return Err(EifError::invalid("harmonic estimate needs i >= 1"));
    }
    Ok(T::from_count(i).ln() + T::lit(EULER_GAMMA))
}

/// Average depth of an unsuccessful binary-search-tree lookup among `n` keys.
///
/// `c(0) = c(1) = 0` and `c(2) = 1` exactly; from `n = 3` on the harmonic number
/// is replaced by its logarithmic estimate.
pub fn c_factor<T: Scalar>(n: usize) -> T {
    match n {
        0 | 1 => T::zero(),
        2 => T::one(),
        _ => {
            let n_t = T::from_count(n);
            let m = T::from_count(n - 1);
            let h = m.ln() + T::lit(EULER_GAMMA);
            T::lit(2.0) * h - T::lit(2.0) * m / n_t
        }
    }
}

/// `ceil(log2(psi))`, computed on integers.
pub fn height_limit(psi: usize) -> usize {
    if psi <= 1 {
        0
    } else {
        psi.next_power_of_two().trailing_zeros() as usize
    }
}

/// `2^(-depth / normalizer)`.
#[inline]
pub fn score_from_depth<T: Scalar>(expected_depth: T, normalizer: T) -> T {
    T::lit(2.0).powf(-expected_depth / normalizer)
}
