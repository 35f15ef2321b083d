//! Closed-form hyperbolic geometry of the model domains: unit disk, right
//! half-plane and horizontal strips.
//!
//! The metric is normalized to constant curvature -4, i.e. the disk density
//! is `1/(1-|z|^2)` and the half-plane density is `1/(2 Re w)`. All distance
//! formulas below carry the resulting 1/2 factors.

use crate::error::{Error, Result};
use crate::point::{is_finite_point, Point, POINT_AT_INFINITY};

/// Relative tolerance for "lies on the unit circle" checks.
pub const UNIT_CIRCLE_TOL: f64 = 1e-12;

#[inline]
fn check_in_disk(z: Point) -> Result<()> {
    if is_finite_point(z) && z.norm_sqr() < 1.0 {
        Ok(())
    } else {
        Err(Error::PointOutsideDomain(z.re, z.im))
    }
}

#[inline]
fn check_on_circle(sigma: Point) -> Result<()> {
    if is_finite_point(sigma) && (sigma.norm() - 1.0).abs() <= UNIT_CIRCLE_TOL {
        Ok(())
    } else {
        Err(Error::BasePointNotOnCircle(sigma.re, sigma.im))
    }
}

/// Hyperbolic density of the unit disk at `z`: `1/(1-|z|^2)`.
pub fn disk_density(z: Point) -> Result<f64> {
    check_in_disk(z)?;
    Ok(1.0 / (1.0 - z.norm_sqr()))
}

/// Hyperbolic density of the right half-plane at `w`: `1/(2 Re w)`.
pub fn halfplane_density(w: Point) -> Result<f64> {
    if !is_finite_point(w) || w.re <= 0.0 {
        return Err(Error::PointOutsideDomain(w.re, w.im));
    }
    Ok(1.0 / (2.0 * w.re))
}

/// Hyperbolic density of the horizontal strip `{a < Im z < a'}` at `z`.
///
/// Pushforward of the half-plane density under the exponential:
/// `(pi / (2(a'-a))) / sin(pi (Im z - a)/(a'-a))`.
pub fn strip_density(z: Point, a: f64, a_prime: f64) -> Result<f64> {
    if !(a < a_prime) {
        return Err(Error::InvalidInterval(a, a_prime));
    }
    if !is_finite_point(z) || z.im <= a || z.im >= a_prime {
        return Err(Error::PointOutsideDomain(z.re, z.im));
    }
    let width = a_prime - a;
    let phase = std::f64::consts::PI * (z.im - a) / width;
    Ok(std::f64::consts::PI / (2.0 * width) / phase.sin())
}

/// Hyperbolic distance in the unit disk.
///
/// Equals `arctanh(|z-w| / |1 - conj(z) w|)`; computed in the
/// logarithmic form
/// `ln[(|1-conj(z)w| + |z-w|) / sqrt((1-|z|^2)(1-|w|^2))]`,
/// which stays accurate when the Moebius quotient is close to 1.
pub fn disk_distance(z: Point, w: Point) -> Result<f64> {
    check_in_disk(z)?;
    check_in_disk(w)?;
    let num = (Point::new(1.0, 0.0) - z.conj() * w).norm() + (z - w).norm();
    let den = ((1.0 - z.norm_sqr()) * (1.0 - w.norm_sqr())).sqrt();
    Ok((num / den).ln())
}

/// Hyperbolic distance in the right half-plane.
///
/// Equals the disk distance of the Cayley preimages,
/// `arctanh(|w1-w2| / |w1 + conj(w2)|)`; computed in the stable
/// logarithmic form using `|w1+conj(w2)|^2 - |w1-w2|^2 = 4 Re w1 Re w2`.
pub fn halfplane_distance(w1: Point, w2: Point) -> Result<f64> {
    for w in [w1, w2] {
        if !is_finite_point(w) || w.re <= 0.0 {
            return Err(Error::PointOutsideDomain(w.re, w.im));
        }
    }
    let num = (w1 + w2.conj()).norm() + (w1 - w2).norm();
    let den = 2.0 * (w1.re * w2.re).sqrt();
    Ok((num / den).ln())
}

/// Hyperbolic distance in the horizontal strip `{a < Im z < a'}`.
///
/// Conjugates through `z -> exp(pi (z - ia)/(a'-a))` onto the upper
/// half-plane (then rotates onto the right half-plane). A cross-validation
/// aid for corridor estimates; exact for the strip model.
pub fn strip_distance(z1: Point, z2: Point, a: f64, a_prime: f64) -> Result<f64> {
    if !(a < a_prime) {
        return Err(Error::InvalidInterval(a, a_prime));
    }
    for z in [z1, z2] {
        if !is_finite_point(z) || z.im <= a || z.im >= a_prime {
            return Err(Error::PointOutsideDomain(z.re, z.im));
        }
    }
    let width = a_prime - a;
    let lift = |z: Point| -> Point {
        // strip -> upper half-plane -> right half-plane (multiply by -i)
        let u = (std::f64::consts::PI * Point::new(z.re, z.im - a) / width).exp();
        Point::new(u.im, -u.re)
    };
    // For large Re z the exponential overflows; shift both points by the
    // common real part first (horizontal translation is a strip isometry).
    let shift = 0.5 * (z1.re + z2.re);
    let s1 = Point::new(z1.re - shift, z1.im);
    let s2 = Point::new(z2.re - shift, z2.im);
    let w1 = lift(s1);
    let w2 = lift(s2);
    halfplane_distance(w1, w2)
}

/// A disk horocycle `E(sigma, R)`: the sublevel set
/// `{ z : |sigma - z|^2 / (1 - |z|^2) < R }`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horocycle {
    base: Point,
    radius_param: f64,
}

impl Horocycle {
    /// Builds a horocycle with base point on the unit circle and `R > 0`.
    pub fn new(base: Point, radius_param: f64) -> Result<Self> {
        check_on_circle(base)?;
        if !(radius_param > 0.0) || !radius_param.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "horocycle radius parameter must be positive and finite, got {radius_param}"
            )));
        }
        Ok(Self { base, radius_param })
    }

    pub fn base(&self) -> Point {
        self.base
    }

    pub fn radius_param(&self) -> f64 {
        self.radius_param
    }

    /// The defining quotient `|sigma - z|^2 / (1 - |z|^2)` at `z`.
    pub fn quotient(&self, z: Point) -> Result<f64> {
        check_in_disk(z)?;
        Ok((self.base - z).norm_sqr() / (1.0 - z.norm_sqr()))
    }
}

/// Euclidean form of a horocycle: a disc with center `sigma/(1+R)` and
/// radius `R/(1+R)`, internally tangent to the unit circle at `sigma`.
pub fn horocycle_euclidean(h: &Horocycle) -> (Point, f64) {
    let denom = 1.0 + h.radius_param;
    (h.base / denom, h.radius_param / denom)
}

/// Strict membership test per the defining quotient.
pub fn horocycle_contains(h: &Horocycle, z: Point) -> Result<bool> {
    Ok(h.quotient(z)? < h.radius_param)
}

/// Busemann function of the disk at base point `sigma`, normalized at 0:
/// `lim_{w->sigma} [k(z,w) - k(0,w)] = (1/2) ln(|sigma-z|^2 / (1-|z|^2))`.
pub fn busemann_disk(sigma: Point, z: Point) -> Result<f64> {
    check_on_circle(sigma)?;
    check_in_disk(z)?;
    Ok(0.5 * ((sigma - z).norm_sqr() / (1.0 - z.norm_sqr())).ln())
}

/// A Busemann sublevel description: the horosphere of level `M` along the
/// geodesic ray from `ray_base` toward `boundary_base`.
///
/// When `ray_base` is the origin this is the horocycle with `R = e^{2M}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BusemannLevel {
    pub ray_base: Point,
    pub boundary_base: Point,
    pub level: f64,
}

impl BusemannLevel {
    pub fn new(ray_base: Point, boundary_base: Point, level: f64) -> Result<Self> {
        check_in_disk(ray_base)?;
        check_on_circle(boundary_base)?;
        if !level.is_finite() {
            return Err(Error::InvalidParameter(format!("level must be finite, got {level}")));
        }
        Ok(Self { ray_base, boundary_base, level })
    }

    /// The equivalent horocycle when the ray starts at the origin.
    pub fn to_horocycle(&self) -> Result<Horocycle> {
        if self.ray_base.norm() > UNIT_CIRCLE_TOL {
            return Err(Error::InvalidParameter(
                "horocycle form requires the ray to start at the origin".into(),
            ));
        }
        Horocycle::new(self.boundary_base, (2.0 * self.level).exp())
    }
}

/// Cayley transform based at `sigma`: `z -> (sigma + z)/(sigma - z)`.
///
/// Maps the unit disk onto the right half-plane and `sigma` to the
/// infinity sentinel. Errors with `SingularPoint` when `z == sigma`
/// exactly; near-pole evaluations that overflow also return the sentinel.
pub fn cayley(sigma: Point, z: Point) -> Result<Point> {
    check_on_circle(sigma)?;
    let denom = sigma - z;
    if denom == Point::new(0.0, 0.0) {
        return Err(Error::SingularPoint);
    }
    let w = (sigma + z) / denom;
    if is_finite_point(w) {
        Ok(w)
    } else {
        Ok(POINT_AT_INFINITY)
    }
}

/// Inverse Cayley transform based at `sigma`: `w -> sigma (w - 1)/(w + 1)`.
pub fn cayley_inverse(sigma: Point, w: Point) -> Result<Point> {
    check_on_circle(sigma)?;
    if is_infinite_point_arg(w) {
        return Ok(sigma);
    }
    let denom = w + Point::new(1.0, 0.0);
    if denom == Point::new(0.0, 0.0) {
        return Err(Error::SingularPoint);
    }
    Ok(sigma * (w - Point::new(1.0, 0.0)) / denom)
}

#[inline]
fn is_infinite_point_arg(w: Point) -> bool {
    crate::point::is_infinite_point(w)
}

/// The unique point of the geodesic from `z` to `w` at parameter `t` in
/// `[0,1]` (hyperbolic-linear interpolation). Used to trace geodesics.
pub fn disk_geodesic_point(z: Point, w: Point, t: f64) -> Result<Point> {
    check_in_disk(z)?;
    check_in_disk(w)?;
    // Pull w by the automorphism sending z to 0, walk the radius, push back.
    let one = Point::new(1.0, 0.0);
    let c = (w - z) / (one - z.conj() * w);
    let r = c.norm();
    if r == 0.0 {
        return Ok(z);
    }
    // constant-speed in the hyperbolic metric: radius arctanh-interpolated
    let rt = (t * r.atanh()).tanh();
    let u = c / r * rt;
    Ok((u + z) / (one + z.conj() * u))
}
