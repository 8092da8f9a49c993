use crate::dataset::Dataset;
use crate::error::{EifError, Result};
use crate::rng::{sample_indices, RngStream};
use crate::scalar::Scalar;

/// A split `(x - p) · n <= 0` (left) versus `> 0` (right).
#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane<T> {
    pub normal: Vec<T>,
    pub intercept: Vec<T>,
}

impl<T: Scalar> Hyperplane<T> {
    pub fn new(normal: Vec<T>, intercept: Vec<T>) -> Result<Self> {
        if normal.is_empty() || normal.len() != intercept.len() {
            return Err(EifError::invalid(format!(
                "normal ({}) and intercept ({}) must have equal nonzero length",
                normal.len(),
                intercept.len()
            )));
        }
        if normal.iter().all(|v| v.is_zero()) {
            return Err(EifError::invalid("normal vector is zero"));
        }
        crate::dataset::check_finite(&normal)?;
        crate::dataset::check_finite(&intercept)?;
        Ok(Self { normal, intercept })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    /// `(x - p) · n`, accumulated in coordinate order.
    #[inline]
    pub fn side(&self, x: &[T]) -> T {
        let mut acc = T::zero();
        for ((&xd, &pd), &nd) in x.iter().zip(&self.intercept).zip(&self.normal) {
            acc = acc + (xd - pd) * nd;
        }
        acc
    }

    #[inline]
    pub fn goes_left(&self, x: &[T]) -> bool {
        self.side(x) <= T::zero()
    }

    pub fn nonzero_count(&self) -> usize {
        self.normal.iter().filter(|v| !v.is_zero()).count()
    }
}

/// Routing test for one point; ties (`(x - p) · n == 0`) go left.
pub fn branch_left<T: Scalar>(x: &[T], h: &Hyperplane<T>) -> Result<bool> {
    if x.len() != h.dim() {
        return Err(EifError::DimensionMismatch {
            expected: h.dim(),
            found: x.len(),
        });
    }
    Ok(h.goes_left(x))
}

/// Random split for a node whose points span `[lo, hi]` per coordinate.
///
/// Draw order: `N` Gaussian normal coordinates, `N` uniform intercept
/// coordinates, then the `N - 1 - extension_level` coordinates to zero. Any
/// surviving coordinate that came out exactly zero is redrawn.
pub(crate) fn sample_split<T: Scalar>(
    lo: &[T],
    hi: &[T],
    extension_level: usize,
    rng: &mut RngStream,
) -> Hyperplane<T> {
    let dim = lo.len();
    debug_assert!(extension_level < dim);
    let mut normal: Vec<T> = (0..dim).map(|_| T::lit(rng.standard_normal())).collect();
    let intercept: Vec<T> = lo
        .iter()
        .zip(hi)
        .map(|(&l, &h)| {
            let v = rng
                .uniform(l.to_f64_lossless(), h.to_f64_lossless())
                .expect("node bounds are ordered");
            T::lit(v)
        })
        .collect();

    let n_zero = dim - 1 - extension_level;
    let mut keep = vec![true; dim];
    if n_zero > 0 {
        for d in sample_indices(rng, dim, n_zero).expect("n_zero < dim") {
            normal[d] = T::zero();
            keep[d] = false;
        }
    }
    for d in 0..dim {
        while keep[d] && normal[d].is_zero() {
            normal[d] = T::lit(rng.standard_normal());
        }
    }
    Hyperplane { normal, intercept }
}

/// Samples a split hyperplane for the points in `node_data`.
pub fn sample_hyperplane<T: Scalar>(
    node_data: &Dataset<T>,
    extension_level: usize,
    rng: &mut RngStream,
) -> Result<Hyperplane<T>> {
    if node_data.len() < 2 {
        return Err(EifError::invalid("a split needs at least two points"));
    }
    check_extension_level(extension_level, node_data.dim())?;
    let (lo, hi) = node_data.bounds().expect("non-empty");
    Ok(sample_split(&lo, &hi, extension_level, rng))
}

pub(crate) fn check_extension_level(extension_level: usize, dim: usize) -> Result<()> {
    if extension_level >= dim {
        return Err(EifError::invalid(format!(
            "extension level {extension_level} out of range [0, {}]",
            dim - 1
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::make_rng;

    fn plane(n: &[f64], p: &[f64]) -> Hyperplane<f64> {
        Hyperplane::new(n.to_vec(), p.to_vec()).unwrap()
    }

    #[test]
    fn branching_test() {
        let h = plane(&[1.0, 0.0], &[0.0, 0.0]);
        assert!(branch_left(&[0.0, 0.0], &h).unwrap());
        assert!(!branch_left(&[3.0, 5.0], &h).unwrap());
        let flipped = plane(&[-1.0, 0.0], &[0.0, 0.0]);
        assert!(branch_left(&[3.0, 5.0], &flipped).unwrap());
        assert!(matches!(
            branch_left(&[1.0], &h),
            Err(EifError::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn point_on_plane_goes_left() {
        let h = plane(&[0.3, -1.7, 2.2], &[1.0, 2.0, 3.0]);
        assert!(branch_left(&[1.0, 2.0, 3.0], &h).unwrap());
    }

    #[test]
    fn rejects_zero_normal() {
        assert!(Hyperplane::new(vec![0.0, 0.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn nonzero_count_follows_extension_level() {
        let mut rng = make_rng(3);
        let data = Dataset::from_rows(4, [[0.0, 1.0, 2.0, 3.0], [4.0, -1.0, 0.5, 9.0]]).unwrap();
        for ext in 0..4 {
            for _ in 0..200 {
                let h = sample_hyperplane(&data, ext, &mut rng).unwrap();
                assert_eq!(h.nonzero_count(), ext + 1);
            }
        }
        assert!(sample_hyperplane(&data, 4, &mut rng).is_err());
    }

    #[test]
    fn intercept_within_node_range() {
        let mut rng = make_rng(4);
        let data = Dataset::from_rows(3, [[0.0, 7.0, -2.0], [1.0, 7.0, 5.0], [0.5, 7.0, 1.0]]).unwrap();
        for _ in 0..500 {
            let h = sample_hyperplane(&data, 2, &mut rng).unwrap();
            assert!((0.0..=1.0).contains(&h.intercept[0]));
            assert_eq!(h.intercept[1], 7.0);
            assert!((-2.0..=5.0).contains(&h.intercept[2]));
        }
    }

    #[test]
    fn needs_two_points() {
        let mut rng = make_rng(4);
        let one = Dataset::from_rows(2, [[0.0, 0.0]]).unwrap();
        assert!(sample_hyperplane(&one, 1, &mut rng).is_err());
    }
}
