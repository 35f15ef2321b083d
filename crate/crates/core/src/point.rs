//! Plane points and the point-at-infinity sentinel.
//!
//! All geometry in this crate lives on the Riemann sphere, but computations
//! stay in finite coordinates. A single sentinel value stands for the point
//! at infinity; only the Cayley transform and cluster-set collectors may
//! produce it.

use num_complex::Complex64;

/// A point of the plane (or the infinity sentinel).
pub type Point = Complex64;

/// The distinguished sentinel for the point at infinity.
pub const POINT_AT_INFINITY: Point = Complex64::new(f64::INFINITY, f64::INFINITY);

/// True iff `z` is the infinity sentinel (any non-finite component counts).
#[inline]
pub fn is_infinite_point(z: Point) -> bool {
    !z.re.is_finite() || !z.im.is_finite()
}

/// True iff both components are finite.
#[inline]
pub fn is_finite_point(z: Point) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Chordal (spherical) distance on the Riemann sphere.
///
/// `2|p-q| / sqrt((1+|p|^2)(1+|q|^2))`, extended continuously to the
/// infinity sentinel. Bounded by 2; used for cluster diameters on
/// unbounded targets.
pub fn chordal_distance(p: Point, q: Point) -> f64 {
    match (is_infinite_point(p), is_infinite_point(q)) {
        (true, true) => 0.0,
        (true, false) => 2.0 / (1.0 + q.norm_sqr()).sqrt(),
        (false, true) => 2.0 / (1.0 + p.norm_sqr()).sqrt(),
        (false, false) => {
            2.0 * (p - q).norm() / ((1.0 + p.norm_sqr()) * (1.0 + q.norm_sqr())).sqrt()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentinel_is_detected() {
        assert!(is_infinite_point(POINT_AT_INFINITY));
        assert!(!is_infinite_point(Point::new(1.0, -2.0)));
        assert!(is_finite_point(Point::new(0.0, 0.0)));
    }

    #[test]
    fn chordal_matches_euclidean_near_origin() {
        let p = Point::new(1e-3, 0.0);
        let q = Point::new(0.0, 1e-3);
        let d = chordal_distance(p, q);
        let eu = 2.0 * (p - q).norm(); // factor 2 from the normalization
        assert!((d - eu).abs() < 1e-8);
    }

    #[test]
    fn chordal_to_infinity_shrinks() {
        let near = chordal_distance(Point::new(10.0, 0.0), POINT_AT_INFINITY);
        let far = chordal_distance(Point::new(1000.0, 0.0), POINT_AT_INFINITY);
        assert!(far < near);
        assert_eq!(chordal_distance(POINT_AT_INFINITY, POINT_AT_INFINITY), 0.0);
    }
}
