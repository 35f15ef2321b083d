//! Elementary conformal stages for the boundary-unzipping construction.
//!
//! The running model is the upper half-plane H. A fit composes:
//!
//! 1. a first map `z -> sqrt((p1 - z)/(z - p0))` opening the segment
//!    `[p0, p1]` onto the full real line,
//! 2. one slit stage per boundary sample, removing the hyperbolic geodesic
//!    from 0 to the sample's current image `a` via
//!    `w -> S sqrt(1 + (b/S)^2)` with `S(w) = w/(1 - w/c)`,
//!    `c = |a|^2/Re a`, `b = |a|^2/Im a` (both real),
//! 3. a closing stage `w -> sign * (w/(1 - w/t0))^2` absorbing the final
//!    geodesic from 0 back to the first point's track `t0`,
//! 4. the Moebius map `w -> (w - beta)/(w - conj(beta))` onto the disk.
//!
//! All stage parameters are real except `beta`, so every slit stage
//! commutes with complex conjugation; symmetric targets stay symmetric
//! stage by stage.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{Point, POINT_AT_INFINITY};

/// Branch of the square root with the cut along `[0, +inf)`, mapping the
/// cut plane onto the (closed) upper half-plane.
pub(crate) fn sqrt_cut_positive(s: Point) -> Point {
    let r = s.norm().sqrt();
    let mut th = s.arg();
    if th < 0.0 {
        th += 2.0 * std::f64::consts::PI;
    }
    Point::from_polar(r, 0.5 * th)
}

/// One geodesic-slit stage; parameters are real by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlitStage {
    /// Second real foot of the geodesic circle; `None` encodes infinity
    /// (vertical slit, `S = id`).
    pub c: Option<f64>,
    /// Height of the straightened slit.
    pub b: f64,
}

impl SlitStage {
    /// Builds the stage removing the geodesic from 0 to `a` in H.
    pub(crate) fn from_tip(a: Point) -> Result<Self> {
        if !(a.im > 0.0) || !crate::point::is_finite_point(a) {
            return Err(Error::FitDiverged(format!(
                "sample image ({:e}, {:e}) left the upper half-plane",
                a.re, a.im
            )));
        }
        let n2 = a.norm_sqr();
        let c = if a.re.abs() * 1e15 <= a.norm() {
            None
        } else {
            Some(n2 / a.re)
        };
        Ok(Self { c, b: n2 / a.im })
    }

    #[inline]
    fn moebius(&self, w: Point) -> Point {
        match self.c {
            Some(c) => w / (Point::new(1.0, 0.0) - w / c),
            None => w,
        }
    }

    #[inline]
    fn moebius_inv(&self, s: Point) -> Point {
        match self.c {
            Some(c) => s / (Point::new(1.0, 0.0) + s / c),
            None => s,
        }
    }

    /// `H minus geodesic -> H`; the tip goes to 0.
    pub(crate) fn forward(&self, w: Point) -> Point {
        let s = self.moebius(w);
        let sn = s.norm();
        if sn <= self.b * 1e-150 {
            // at the slit base; sign is ambiguous there
            return Point::new(self.b, 0.0);
        }
        let q = self.b / s;
        s * (Point::new(1.0, 0.0) + q * q).sqrt()
    }

    /// `H -> H minus geodesic`; 0 goes to the tip.
    pub(crate) fn inverse(&self, z: Point) -> Point {
        let zn = z.norm();
        if zn <= self.b * 1e-150 {
            // the old slit tip
            return self.moebius_inv(Point::new(0.0, self.b));
        }
        let q = self.b / z;
        let v = z * (Point::new(1.0, 0.0) - q * q).sqrt();
        self.moebius_inv(v)
    }

    /// Image of a real boundary position under the stage. Callers resolve
    /// the frontier split themselves; a stray frontier maps to `+b`.
    pub(crate) fn track_real(&self, t: RealTrack) -> RealTrack {
        let s = match (t, self.c) {
            (RealTrack::AtFrontier, _) => return RealTrack::Finite(self.b),
            (RealTrack::Infinite, Some(c)) => -c,
            (RealTrack::Infinite, None) => return RealTrack::Infinite,
            (RealTrack::Finite(x), Some(c)) => {
                let den = 1.0 - x / c;
                if den == 0.0 {
                    return RealTrack::Infinite;
                }
                x / den
            }
            (RealTrack::Finite(x), None) => x,
        };
        RealTrack::Finite(s.signum() * s.hypot(self.b))
    }
}

/// Real boundary coordinate, projectively.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum RealTrack {
    /// exactly at the unzipping frontier (the previous stage tip)
    AtFrontier,
    Finite(f64),
    Infinite,
}

/// First map: opens the segment `[p0, p1]` onto the real line; `p1 -> 0`,
/// `p0 -> infinity`, everything else into H.
pub(crate) fn first_forward(p0: Point, p1: Point, z: Point) -> Point {
    sqrt_cut_positive((p1 - z) / (z - p0))
}

pub(crate) fn first_inverse(p0: Point, p1: Point, w: Point) -> Point {
    let m = w * w;
    let den = Point::new(1.0, 0.0) + m;
    if den.norm_sqr() < 1e-280 {
        return POINT_AT_INFINITY;
    }
    (p1 + m * p0) / den
}

/// Closing stage: folds the quadrant cut by the geodesic `0 -> t0` onto H.
pub(crate) fn closing_forward(t0: f64, sign: f64, w: Point) -> Point {
    let q = w / (Point::new(1.0, 0.0) - w / t0);
    sign * q * q
}

pub(crate) fn closing_inverse(t0: f64, sign: f64, z: Point) -> Point {
    let v = if sign > 0.0 { z.sqrt() } else { -((-z).sqrt()) };
    v / (Point::new(1.0, 0.0) + v / t0)
}

/// Final Moebius onto the disk: `beta -> 0`, real axis to the circle.
pub(crate) fn disk_forward(beta: Point, rotation: Point, w: Point) -> Point {
    if crate::point::is_infinite_point(w) {
        return rotation;
    }
    rotation * (w - beta) / (w - beta.conj())
}

pub(crate) fn disk_inverse(beta: Point, rotation: Point, z: Point) -> Point {
    let zz = z / rotation;
    (beta - zz * beta.conj()) / (Point::new(1.0, 0.0) - zz)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    #[test]
    fn sqrt_cut_branch() {
        // positive reals stay positive
        let s = sqrt_cut_positive(pt(4.0, 0.0));
        assert!((s - pt(2.0, 0.0)).norm() < 1e-15);
        // negative reals go to the positive imaginary axis
        let s = sqrt_cut_positive(pt(-4.0, 0.0));
        assert!((s - pt(0.0, 2.0)).norm() < 1e-15);
        // generic points land in the upper half-plane
        for w in [pt(1.0, 1.0), pt(-3.0, 0.2), pt(0.5, -2.0), pt(-1.0, -1.0)] {
            let s = sqrt_cut_positive(w);
            assert!(s.im >= 0.0, "{w} -> {s}");
            assert!((s * s - w).norm() < 1e-12 * w.norm().max(1.0));
        }
    }

    #[test]
    fn slit_stage_roundtrip() {
        for a in [pt(0.5, 1.0), pt(-2.0, 0.3), pt(0.0, 2.0), pt(1e-3, 5.0)] {
            let st = SlitStage::from_tip(a).unwrap();
            assert!((st.forward(a)).norm() < 1e-12 * a.norm(), "tip to 0");
            for w in [pt(0.3, 0.7), pt(-1.5, 2.0), pt(4.0, 0.01), pt(-0.2, 0.05)] {
                let z = st.forward(w);
                assert!(z.im > 0.0, "stage image {z} of {w} (tip {a})");
                let back = st.inverse(z);
                assert!((back - w).norm() < 1e-9 * w.norm().max(1.0), "{w} -> {z} -> {back}");
            }
            // tip recovery
            let tip = st.inverse(pt(0.0, 0.0));
            assert!((tip - a).norm() < 1e-9 * a.norm().max(1.0), "tip {a} vs {tip}");
        }
    }

    #[test]
    fn slit_stage_real_axis_signs() {
        let st = SlitStage::from_tip(pt(0.7, 1.1)).unwrap();
        // real positive inputs below the pole keep their sign and exceed b
        if let RealTrack::Finite(y) = st.track_real(RealTrack::Finite(0.2)) {
            assert!(y > st.b);
        } else {
            panic!("finite expected");
        }
        if let RealTrack::Finite(y) = st.track_real(RealTrack::Finite(-3.0)) {
            assert!(y < -st.b);
        } else {
            panic!("finite expected");
        }
        // infinity lands at -c's image
        match st.track_real(RealTrack::Infinite) {
            RealTrack::Finite(y) => assert!(y.is_finite()),
            _ => panic!("c is finite here"),
        }
    }

    #[test]
    fn closing_roundtrip() {
        for (t0, sign) in [(2.5, 1.0), (2.5, -1.0), (-1.7, 1.0), (-1.7, -1.0)] {
            for z in [pt(0.3, 0.9), pt(-2.0, 0.4), pt(1.0, 3.0)] {
                let w = closing_inverse(t0, sign, z);
                let back = closing_forward(t0, sign, w);
                assert!((back - z).norm() < 1e-10 * z.norm().max(1.0), "{z} -> {w} -> {back}");
            }
        }
    }

    #[test]
    fn disk_stage_roundtrip() {
        let beta = pt(0.4, 1.3);
        let rot = Point::from_polar(1.0, 0.0);
        for w in [pt(0.0, 0.5), pt(2.0, 0.1), pt(-1.0, 2.0)] {
            let z = disk_forward(beta, rot, w);
            assert!(z.norm() < 1.0);
            let back = disk_inverse(beta, rot, z);
            assert!((back - w).norm() < 1e-12 * w.norm().max(1.0));
        }
        assert!(disk_forward(beta, rot, beta).norm() < 1e-15);
        // real axis to unit circle
        for x in [-5.0, -0.3, 0.0, 1.7] {
            let z = disk_forward(beta, rot, pt(x, 0.0));
            assert!((z.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn first_map_roundtrip() {
        let p0 = pt(1.0, 0.0);
        let p1 = pt(1.0, 0.25);
        for z in [pt(0.0, 0.0), pt(-0.5, 0.5), pt(0.3, -0.8)] {
            let w = first_forward(p0, p1, z);
            assert!(w.im > 0.0, "{z} -> {w}");
            let back = first_inverse(p0, p1, w);
            assert!((back - z).norm() < 1e-12);
        }
        // p1 lands at 0
        assert!(first_forward(p0, p1, p1).norm() < 1e-12);
    }
}
