//! Numerical Riemann maps onto truncated slit domains.
//!
//! [`ConformalMap::fit`] unzips the boundary sample by sample (see
//! [`zipper`]): walls in Jordan order, slits by their spine with a
//! re-basing shift after each tip. The map is normalized so 0 goes to the
//! interior anchor and the first boundary sample (on the positive real
//! axis for symmetric targets) pulls back to 1. For targets symmetric
//! about the real axis with a real anchor the evaluation is symmetrized
//! exactly, and the inverse is a Newton solve seeded by the reversed stage
//! chain, so the round trip holds to 1e-9 regardless of the fit error.

pub mod boundary;
mod zipper;

use serde::{Deserialize, Serialize};

use crate::domain::{DomainSpec, Polyline, SlitDomain};
use crate::error::{Error, Result};
use crate::hyperbolic::{disk_distance, horocycle_euclidean, Horocycle};
use crate::point::{is_finite_point, Point};

use boundary::Role;
use zipper::{RealTrack, SlitStage};

/// Inner radius used when probing boundary behavior.
const PROBE_RADIUS: f64 = 1.0 - 1e-8;
/// Inverse residual target (relative to 1 + |w|).
const INVERSE_TOL: f64 = 1e-11;
/// Residual above which the inverse is declared failed.
const INVERSE_FAIL: f64 = 1e-8;

/// One composed stage of the fitted map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    /// Geodesic-slit unzipping stage.
    Slit(SlitStage),
    /// Re-basing translation `w -> w - shift` after a slit tip.
    Shift(f64),
}

impl Stage {
    #[inline]
    fn forward(&self, w: Point) -> Point {
        match *self {
            Stage::Slit(st) => st.forward(w),
            Stage::Shift(x) => w - x,
        }
    }

    #[inline]
    fn inverse(&self, z: Point) -> Point {
        match *self {
            Stage::Slit(st) => st.inverse(z),
            Stage::Shift(x) => z + x,
        }
    }

    fn track_real(&self, t: RealTrack) -> RealTrack {
        match (*self, t) {
            (Stage::Slit(st), t) => st.track_real(t),
            (Stage::Shift(x), RealTrack::Finite(v)) => RealTrack::Finite(v - x),
            (Stage::Shift(x), RealTrack::AtFrontier) => RealTrack::Finite(-x),
            (Stage::Shift(_), RealTrack::Infinite) => RealTrack::Infinite,
        }
    }
}

/// A boundary sample with its preimage angle on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryNode {
    pub theta: f64,
    pub point: Point,
}

/// Serialized form: stages, normalization and the boundary table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConformalMapData {
    pub target: DomainSpec,
    pub stages: Vec<Stage>,
    pub normalization: Normalization,
    pub boundary_nodes: Vec<BoundaryNode>,
    pub accuracy: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Normalization {
    pub first: [Point; 2],
    pub closing_t0: f64,
    pub closing_sign: f64,
    pub beta: Point,
    pub rotation: Point,
    pub anchor: Point,
    pub symmetric: bool,
}

/// A fitted numerical Riemann map from the unit disk onto a truncated slit
/// domain.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ConformalMapData", into = "ConformalMapData")]
pub struct ConformalMap {
    data: ConformalMapData,
    target: SlitDomain,
}

impl TryFrom<ConformalMapData> for ConformalMap {
    type Error = Error;
    fn try_from(data: ConformalMapData) -> Result<Self> {
        let target = data.target.build()?;
        Ok(Self { data, target })
    }
}

impl From<ConformalMap> for ConformalMapData {
    fn from(m: ConformalMap) -> Self {
        m.data
    }
}

impl ConformalMap {
    /// Fits a map onto `d` through roughly `boundary_samples` boundary
    /// points, normalized so `forward(0) = anchor`.
    pub fn fit(d: &SlitDomain, boundary_samples: usize, anchor: Point) -> Result<Self> {
        if boundary_samples < 16 {
            return Err(Error::InvalidParameter(format!(
                "need at least 16 boundary samples, got {boundary_samples}"
            )));
        }
        if !d.contains(anchor) {
            return Err(Error::PointOutsideDomain(anchor.re, anchor.im));
        }
        let path = boundary::trace(d, boundary_samples)?;
        let samples = &path.samples;
        let m = samples.len();
        let p0 = samples[0].point;
        let p1 = samples[1].point;
        if samples[0].role != Role::Wall || samples[1].role != Role::Wall {
            return Err(Error::NonJordanBoundary("traversal must start on a wall".into()));
        }

        // first map: images of the remaining samples and the anchor
        let mut imgs: Vec<Point> =
            samples[2..].iter().map(|s| zipper::first_forward(p0, p1, s.point)).collect();
        let mut anchor_img = zipper::first_forward(p0, p1, anchor);

        // real-axis positions of already-unzipped samples; index-aligned
        // with `samples`
        let mut track: Vec<RealTrack> = Vec::with_capacity(m);
        track.push(RealTrack::Infinite); // p0
        track.push(RealTrack::AtFrontier); // p1 sits at 0
        let mut stages: Vec<Stage> = Vec::with_capacity(m);
        let mut base_below: Option<RealTrack> = None;

        // Samples whose image arrives flatter than this against the real
        // axis are already on the pretend boundary to within their height;
        // unzipping them would remove a huge bogus bulge, so the frontier
        // is re-based at them instead.
        const FLATNESS: f64 = match () { _ => 0.05 };  // overridden in debug
        let flatness: f64 = std::env::var("HOROKIT_FLAT").ok().and_then(|s| s.parse().ok()).unwrap_or(FLATNESS);

        let mut apply_shift = |shift: f64,
                               k: usize,
                               imgs: &mut [Point],
                               anchor_img: &mut Point,
                               track: &mut Vec<RealTrack>,
                               base_below: &mut Option<RealTrack>,
                               stages: &mut Vec<Stage>| {
            let stage = Stage::Shift(shift);
            for img in imgs.iter_mut().skip(k + 1) {
                *img = stage.forward(*img);
            }
            *anchor_img = stage.forward(*anchor_img);
            for t in track.iter_mut() {
                *t = match *t {
                    RealTrack::AtFrontier => RealTrack::Finite(-shift),
                    other => stage.track_real(other),
                };
            }
            *base_below = base_below.map(|t| stage.track_real(t));
            stages.push(stage);
        };

        for k in 0..imgs.len() {
            let tip_index = k + 2;
            let a = imgs[k];
            if !is_finite_point(a) {
                return Err(Error::FitDiverged(format!(
                    "sample {tip_index} image degenerated at ({:e}, {:e})",
                    a.re, a.im
                )));
            }
            if let Ok(widx) = std::env::var("HOROKIT_WATCH") {
                let widx: usize = widx.parse().unwrap();
                if widx > k && widx < imgs.len() {
                    eprintln!(
                        "after stage {:3} [{:?} ({:+.4},{:+.4})]: watch img = ({:+.6e}, {:+.6e})",
                        k as isize - 1, samples[tip_index].role,
                        samples[tip_index].point.re, samples[tip_index].point.im,
                        imgs[widx].re, imgs[widx].im
                    );
                }
            }
            let mut split_happened = false;
            if a.im > flatness * a.norm() {
                // ordinary unzipping stage
                let st = match SlitStage::from_tip(a) {
                    Ok(st) => st,
                    Err(e) => {
                        if std::env::var("HOROKIT_DEBUG_SKIP").is_ok() {
                            for j in k.saturating_sub(6)..=k {
                                eprintln!(
                                    "  img[{j}] {:?} ({:+.4},{:+.4}) -> ({:+.3e},{:+.3e})",
                                    samples[j + 2].role,
                                    samples[j + 2].point.re, samples[j + 2].point.im,
                                    imgs[j].re, imgs[j].im
                                );
                            }
                        }
                        return Err(e);
                    }
                };
                let stage = Stage::Slit(st);
                for img in imgs.iter_mut().skip(k + 1) {
                    *img = st.forward(*img);
                }
                anchor_img = st.forward(anchor_img);
                // update boundary tracks in traversal order: the sample at
                // the frontier splits, continuing its predecessor's side
                for j in 0..track.len() {
                    track[j] = match track[j] {
                        RealTrack::AtFrontier => {
                            let sign = match track[j - 1] {
                                RealTrack::Finite(x) => x.signum(),
                                _ => 1.0,
                            };
                            RealTrack::Finite(sign * st.b)
                        }
                        t => stage.track_real(t),
                    };
                }
                base_below = base_below.map(|t| stage.track_real(t));
                stages.push(stage);
                split_happened = true;
            } else {
                // hugging sample: project it onto the axis and re-base
                if std::env::var("HOROKIT_DEBUG_SKIP").is_ok() {
                    eprintln!(
                        "skip {:?} ({:+.6},{:+.6}) |a|={:3.2e} flat={:+.2e}",
                        samples[tip_index].role, samples[tip_index].point.re,
                        samples[tip_index].point.im, a.norm(), a.im / a.norm()
                    );
                }
                apply_shift(
                    a.re,
                    k,
                    &mut imgs,
                    &mut anchor_img,
                    &mut track,
                    &mut base_below,
                    &mut stages,
                );
            }
            track.push(RealTrack::AtFrontier);

            // a slit base just split: record its far-side copy
            if split_happened && samples[tip_index - 1].role == Role::SpineStart {
                if let RealTrack::Finite(x) = track[tip_index - 1] {
                    base_below = Some(RealTrack::Finite(-x));
                }
            }
            // after a tip, re-base the frontier on the far side of the base
            if samples[tip_index].role == Role::SpineTip {
                let Some(RealTrack::Finite(shift)) = base_below.take() else {
                    return Err(Error::FitDiverged(format!(
                        "slit ending at sample {tip_index} lost its base track"
                    )));
                };
                apply_shift(
                    shift,
                    k,
                    &mut imgs,
                    &mut anchor_img,
                    &mut track,
                    &mut base_below,
                    &mut stages,
                );
            }
        }

        let t0 = match track[0] {
            RealTrack::Finite(x) if x.is_finite() && x != 0.0 => x,
            _ => {
                return Err(Error::FitDiverged(
                    "first sample's boundary track degenerated".into(),
                ));
            }
        };
        if !(anchor_img.im > 0.0) {
            return Err(Error::FitDiverged("anchor image left the upper half-plane".into()));
        }
        let q = anchor_img / (Point::new(1.0, 0.0) - anchor_img / t0);
        let closing_sign = if q.re >= 0.0 { 1.0 } else { -1.0 };
        let beta = zipper::closing_forward(t0, closing_sign, anchor_img);
        if !(beta.im > 0.0) {
            return Err(Error::FitDiverged("anchor image left the upper half-plane".into()));
        }

        let symmetric = d.is_symmetric() && anchor.im == 0.0;
        let mut map = ConformalMap {
            data: ConformalMapData {
                target: DomainSpec::describe(d),
                stages,
                normalization: Normalization {
                    first: [p0, p1],
                    closing_t0: t0,
                    closing_sign,
                    beta,
                    rotation: Point::new(1.0, 0.0),
                    anchor,
                    symmetric,
                },
                boundary_nodes: Vec::new(),
                accuracy: f64::NAN,
            },
            target: d.clone(),
        };

        let origin_image = map.forward(Point::new(0.0, 0.0))?;
        if (origin_image - anchor).norm() > 1e-9 {
            return Err(Error::FitDiverged(format!(
                "anchor normalization failed: forward(0) off by {:e}",
                (origin_image - anchor).norm()
            )));
        }

        map.data.boundary_nodes = map.build_boundary_nodes(&path, d)?;
        map.data.accuracy = map.boundary_sweep_accuracy(&path);
        Ok(map)
    }

    fn norm(&self) -> &Normalization {
        &self.data.normalization
    }

    /// Raw stage-chain evaluation, disk to target.
    fn raw_forward(&self, z: Point) -> Point {
        let n = self.norm();
        let mut w = zipper::disk_inverse(n.beta, n.rotation, z);
        w = zipper::closing_inverse(n.closing_t0, n.closing_sign, w);
        for st in self.data.stages.iter().rev() {
            w = st.inverse(w);
        }
        zipper::first_inverse(n.first[0], n.first[1], w)
    }

    /// Raw stage-chain evaluation, target to disk.
    fn raw_inverse(&self, w: Point) -> Point {
        let n = self.norm();
        let mut u = zipper::first_forward(n.first[0], n.first[1], w);
        for st in &self.data.stages {
            u = st.forward(u);
        }
        u = zipper::closing_forward(n.closing_t0, n.closing_sign, u);
        zipper::disk_forward(n.beta, n.rotation, u)
    }

    /// Image of a disk point in the target domain.
    ///
    /// For symmetric targets the evaluation is the symmetrized average
    /// `(raw(z) + conj(raw(conj z)))/2`, so `forward(conj z)` equals
    /// `conj(forward(z))` exactly.
    pub fn forward(&self, z: Point) -> Result<Point> {
        if !is_finite_point(z) || z.norm_sqr() >= 1.0 {
            return Err(Error::PointOutsideDomain(z.re, z.im));
        }
        Ok(self.forward_unchecked(z))
    }

    fn forward_unchecked(&self, z: Point) -> Point {
        if self.norm().symmetric {
            let a = self.raw_forward(z);
            let b = self.raw_forward(z.conj()).conj();
            0.5 * (a + b)
        } else {
            self.raw_forward(z)
        }
    }

    /// Preimage of a target point, Newton-refined so that
    /// `forward(inverse(w)) = w` within 1e-8.
    pub fn inverse(&self, w: Point) -> Result<Point> {
        if !self.target.contains(w) {
            return Err(Error::PointOutsideDomain(w.re, w.im));
        }
        let mut z = self.raw_inverse(w);
        if !is_finite_point(z) || z.norm_sqr() >= 1.0 {
            // clamp a marginal seed back into the disk
            if is_finite_point(z) && z.norm() < 1.0 + 1e-6 {
                z *= (1.0 - 1e-12) / z.norm();
            } else {
                return Err(Error::InversionDiverged(w.re, w.im));
            }
        }
        let scale = 1.0 + w.norm();
        for _ in 0..40 {
            let f = self.forward_unchecked(z);
            let r = f - w;
            if r.norm() <= INVERSE_TOL * scale {
                return Ok(z);
            }
            let h = 1e-7 * (1.0 - z.norm()).max(1e-6);
            let zp = z + Point::new(h, 0.0);
            let zm = z - Point::new(h, 0.0);
            let deriv = (self.forward_unchecked(zp) - self.forward_unchecked(zm))
                / Point::new(2.0 * h, 0.0);
            if deriv.norm_sqr() == 0.0 || !is_finite_point(deriv) {
                break;
            }
            let mut step = r / deriv;
            let mut tries = 0;
            while (z - step).norm() >= 1.0 && tries < 40 {
                step *= 0.5;
                tries += 1;
            }
            z -= step;
            if z.norm() >= 1.0 {
                z *= (1.0 - 1e-14) / z.norm();
            }
        }
        let resid = (self.forward_unchecked(z) - w).norm();
        if resid <= INVERSE_FAIL * scale {
            Ok(z)
        } else {
            Err(Error::InversionDiverged(w.re, w.im))
        }
    }

    pub fn target(&self) -> &SlitDomain {
        &self.target
    }

    pub fn anchor(&self) -> Point {
        self.norm().anchor
    }

    /// Held-out boundary error from the fitting sweep (domain units).
    pub fn accuracy(&self) -> f64 {
        self.data.accuracy
    }

    pub fn boundary_nodes(&self) -> &[BoundaryNode] {
        &self.data.boundary_nodes
    }

    /// The boundary node whose sample point is closest to `p`.
    pub fn node_nearest(&self, p: Point) -> BoundaryNode {
        *self
            .data
            .boundary_nodes
            .iter()
            .min_by(|a, b| (a.point - p).norm().partial_cmp(&(b.point - p).norm()).unwrap())
            .expect("boundary table is nonempty")
    }

    /// Polyline through `forward(t * sigma)` for the given radial samples.
    pub fn geodesic_ray(&self, sigma: Point, t_samples: &[f64]) -> Result<Polyline> {
        if (sigma.norm() - 1.0).abs() > crate::hyperbolic::UNIT_CIRCLE_TOL {
            return Err(Error::BasePointNotOnCircle(sigma.re, sigma.im));
        }
        let mut verts = Vec::with_capacity(t_samples.len());
        for &t in t_samples {
            if !(0.0..1.0).contains(&t) {
                return Err(Error::InvalidParameter(format!(
                    "ray samples live in [0, 1), got {t}"
                )));
            }
            verts.push(self.forward(sigma * t)?);
        }
        Polyline::new(verts)
    }

    /// Hyperbolic distance in the target: the disk distance of preimages.
    pub fn hyperbolic_distance(&self, w1: Point, w2: Point) -> Result<f64> {
        disk_distance(self.inverse(w1)?, self.inverse(w2)?)
    }

    /// Image polyline of the horocycle boundary, cut off where the circle
    /// hugs the unit circle closer than 1e-6.
    pub fn pushforward_horocycle(&self, h: &Horocycle, samples: usize) -> Result<Polyline> {
        let (c0, rho) = horocycle_euclidean(h);
        let psi0 = (h.base() - c0).arg();
        let mut verts = Vec::new();
        for k in 1..samples {
            let psi = psi0 + 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            let z = c0 + Point::from_polar(rho, psi);
            if z.norm() > 1.0 - 1e-6 {
                continue;
            }
            verts.push(self.forward(z)?);
        }
        if verts.len() < 2 {
            return Err(Error::InvalidParameter(
                "horocycle sampling produced too few interior points".into(),
            ));
        }
        Polyline::new(verts)
    }

    /// Builds the boundary correspondence table from interior probes.
    fn build_boundary_nodes(
        &self,
        path: &boundary::BoundaryPath,
        d: &SlitDomain,
    ) -> Result<Vec<BoundaryNode>> {
        let mut nodes = Vec::with_capacity(path.probes.len());
        for (i, pr) in path.probes.iter().enumerate() {
            let mut t = pr.cap.max(1e-12);
            let mut probe = None;
            for _ in 0..60 {
                let q = pr.point + pr.dir * t;
                if d.contains(q) {
                    probe = Some(q);
                    break;
                }
                t *= 0.5;
            }
            let Some(q) = probe else {
                return Err(Error::FitDiverged(format!("no interior probe for sample {i}")));
            };
            let z = self.raw_inverse(q);
            if !is_finite_point(z) {
                return Err(Error::FitDiverged(format!(
                    "boundary probe {i} has no disk preimage"
                )));
            }
            nodes.push(BoundaryNode { theta: z.arg(), point: pr.point });
        }
        Ok(nodes)
    }

    /// Max distance from a dense near-boundary sweep to the boundary.
    fn boundary_sweep_accuracy(&self, path: &boundary::BoundaryPath) -> f64 {
        let probes = 4 * path.samples.len();
        let mut worst: f64 = 0.0;
        for k in 0..probes {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / probes as f64;
            let z = Point::from_polar(PROBE_RADIUS, theta);
            let w = self.forward_unchecked(z);
            if !is_finite_point(w) {
                return f64::INFINITY;
            }
            worst = worst.max(path.distance_to(w));
        }
        worst
    }
}

impl crate::dynamics::PlanarMap for ConformalMap {
    fn forward_point(&self, z: Point) -> Result<Point> {
        self.forward(z)
    }
    fn inverse_point(&self, w: Point) -> Result<Point> {
        self.inverse(w)
    }
}

/// Serializes the map (stages, normalization, boundary table) as JSON.
/// Reload reproduces evaluations bit-exactly.
pub fn to_json(m: &ConformalMap) -> String {
    serde_json::to_string_pretty(m).expect("conformal map serializes")
}

pub fn from_json(text: &str) -> Result<ConformalMap> {
    serde_json::from_str(text).map_err(|e| Error::Format(format!("conformal map: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Base;

    fn pt(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    fn square() -> SlitDomain {
        SlitDomain::with_slits(Base::Square, vec![]).unwrap()
    }

    #[test]
    fn square_fit_normalization_and_roundtrip() {
        let d = square();
        let map = ConformalMap::fit(&d, 128, pt(0.0, 0.0)).unwrap();
        assert!((map.forward(pt(0.0, 0.0)).unwrap()).norm() < 1e-9);
        assert!(map.accuracy() < 1e-2, "square accuracy {}", map.accuracy());

        // round trip on a grid of interior points
        let mut worst: f64 = 0.0;
        for i in 0..10 {
            for j in 0..10 {
                let w = pt(-0.85 + 0.19 * i as f64, -0.85 + 0.19 * j as f64);
                let z = map.inverse(w).unwrap();
                assert!(z.norm() < 1.0);
                let back = map.forward(z).unwrap();
                worst = worst.max((back - w).norm());
            }
        }
        assert!(worst < 1e-8, "roundtrip {worst}");
    }

    #[test]
    fn square_corner_preimages_form_a_square() {
        let d = square();
        let map = ConformalMap::fit(&d, 128, pt(0.0, 0.0)).unwrap();
        let mut angles: Vec<f64> = [pt(1.0, 1.0), pt(-1.0, 1.0), pt(-1.0, -1.0), pt(1.0, -1.0)]
            .iter()
            .map(|&c| map.node_nearest(c).theta)
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // by symmetry the gaps are all pi/2, anchored at pi/4
        for (k, th) in angles.iter().enumerate() {
            let expect = -0.75 * std::f64::consts::PI + k as f64 * std::f64::consts::FRAC_PI_2;
            assert!((th - expect).abs() < 2e-2, "corner angle {th} vs {expect}");
        }
    }

    #[test]
    fn square_symmetry_is_exact() {
        let d = square();
        let map = ConformalMap::fit(&d, 64, pt(0.3, 0.0)).unwrap();
        for z in [pt(0.3, 0.4), pt(-0.6, 0.2), pt(0.1, -0.8)] {
            let a = map.forward(z).unwrap();
            let b = map.forward(z.conj()).unwrap();
            assert!((a - b.conj()).norm() < 1e-14, "symmetry {a} vs {b}");
        }
        // real anchor keeps the real diameter on the real axis
        let r = map.forward(pt(0.5, 0.0)).unwrap();
        assert!(r.im.abs() < 1e-14);
    }

    #[test]
    fn comb_fit_basics() {
        let d = SlitDomain::comb_default(Some(2));
        let map = ConformalMap::fit(&d, 256, pt(0.5, 0.0)).unwrap();
        assert!((map.forward(pt(0.0, 0.0)).unwrap() - pt(0.5, 0.0)).norm() < 1e-9);
        assert!(map.accuracy() < 1e-2, "comb accuracy {}", map.accuracy());
        // forward stays in the domain on a compact grid
        for i in 0..12 {
            for j in 0..12 {
                let z = pt(-0.66 + 0.12 * i as f64, -0.66 + 0.12 * j as f64);
                if z.norm() > 0.7 {
                    continue;
                }
                let w = map.forward(z).unwrap();
                assert!(d.contains(w), "forward({z}) = {w} escaped");
            }
        }
    }

    #[test]
    fn comb_inverse_roundtrip() {
        let d = SlitDomain::comb_default(Some(2));
        let map = ConformalMap::fit(&d, 256, pt(0.5, 0.0)).unwrap();
        let mut state = 0x12345678u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut count = 0;
        let mut worst: f64 = 0.0;
        while count < 200 {
            let w = pt(2.0 * next() - 1.0, 2.0 * next() - 1.0);
            if !d.contains(w) || d.dist_to_boundary(w).unwrap() < 5e-3 {
                continue;
            }
            count += 1;
            let z = map.inverse(w).unwrap();
            worst = worst.max((map.forward(z).unwrap() - w).norm());
        }
        assert!(worst < 1e-8, "roundtrip {worst}");
    }

    #[test]
    fn boundary_nodes_are_ccw() {
        let d = SlitDomain::comb_default(Some(2));
        let map = ConformalMap::fit(&d, 256, pt(0.5, 0.0)).unwrap();
        let nodes = map.boundary_nodes();
        // winding of theta along the table: one full positive turn
        let mut total = 0.0;
        for k in 0..nodes.len() {
            let a = nodes[k].theta;
            let b = nodes[(k + 1) % nodes.len()].theta;
            let mut d = b - a;
            while d > std::f64::consts::PI {
                d -= 2.0 * std::f64::consts::PI;
            }
            while d < -std::f64::consts::PI {
                d += 2.0 * std::f64::consts::PI;
            }
            total += d;
        }
        assert!((total - 2.0 * std::f64::consts::PI).abs() < 1e-6, "winding {total}");
    }

    #[test]
    fn accuracy_improves_with_samples() {
        let d = SlitDomain::comb_default(Some(2));
        let a128 = ConformalMap::fit(&d, 128, pt(0.5, 0.0)).unwrap().accuracy();
        let a256 = ConformalMap::fit(&d, 256, pt(0.5, 0.0)).unwrap().accuracy();
        let a512 = ConformalMap::fit(&d, 512, pt(0.5, 0.0)).unwrap().accuracy();
        assert!(a128 > a256 && a256 > a512, "accuracies {a128} {a256} {a512}");
    }

    #[test]
    fn serialization_roundtrip_is_bit_exact() {
        let d = SlitDomain::comb_default(Some(2));
        let map = ConformalMap::fit(&d, 128, pt(0.5, 0.0)).unwrap();
        let text = to_json(&map);
        let back = from_json(&text).unwrap();
        for z in [pt(0.0, 0.0), pt(0.3, 0.2), pt(-0.7, 0.1)] {
            let a = map.forward(z).unwrap();
            let b = back.forward(z).unwrap();
            assert_eq!(a, b, "bit-exact reload failed at {z}");
        }
        assert_eq!(map.accuracy(), back.accuracy());
    }

    #[test]
    fn fit_rejects_bad_input() {
        let d = square();
        assert!(matches!(
            ConformalMap::fit(&d, 8, pt(0.0, 0.0)),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            ConformalMap::fit(&d, 64, pt(2.0, 0.0)),
            Err(Error::PointOutsideDomain(_, _))
        ));
        let comb_inf = SlitDomain::comb_default(None);
        assert!(matches!(
            ConformalMap::fit(&comb_inf, 64, pt(0.5, 0.0)),
            Err(Error::NonJordanBoundary(_))
        ));
    }

    #[test]
    fn geodesic_ray_and_horocycle_pushforward() {
        let d = square();
        let map = ConformalMap::fit(&d, 128, pt(0.0, 0.0)).unwrap();
        let ts: Vec<f64> = (0..20).map(|k| k as f64 / 20.0).collect();
        let ray = map.geodesic_ray(pt(1.0, 0.0), &ts).unwrap();
        // starts at the anchor, stays real (symmetric target, real anchor)
        assert!(ray.vertices()[0].norm() < 1e-9);
        for v in ray.vertices() {
            assert!(v.im.abs() < 1e-12, "ray wandered off the real axis: {v}");
        }

        let h = Horocycle::new(pt(1.0, 0.0), 1.0).unwrap();
        let poly = map.pushforward_horocycle(&h, 400).unwrap();
        assert!(poly.vertices().len() > 300);
        // symmetric image: mirrored vertices present
        for &v in poly.vertices().iter().take(40) {
            let mirrored = v.conj();
            let hit = poly.vertices().iter().any(|&u| (u - mirrored).norm() < 1e-9);
            assert!(hit, "no mirror vertex for {v}");
        }
    }
}

/// Stage-by-stage fit trace for debugging; prints tip geometry per stage.
#[doc(hidden)]
pub fn debug_fit_trace(d: &SlitDomain, budget: usize, upto: usize) {
    let path = boundary::trace(d, budget).unwrap();
    let samples = &path.samples;
    let p0 = samples[0].point;
    let p1 = samples[1].point;
    let mut imgs: Vec<Point> =
        samples[2..].iter().map(|s| zipper::first_forward(p0, p1, s.point)).collect();
    let mut track: Vec<RealTrack> = vec![RealTrack::Infinite, RealTrack::AtFrontier];
    let mut base_below: Option<RealTrack> = None;
    for k in 0..imgs.len().min(upto) {
        let t = k + 2;
        let a = imgs[k];
        println!(
            "stage {k:3} {:?} ({:+.6},{:+.6}) |a|={:9.3e} Im/|a|={:+9.2e}",
            samples[t].role, samples[t].point.re, samples[t].point.im, a.norm(), a.im / a.norm()
        );
        let st = match SlitStage::from_tip(a) {
            Ok(st) => st,
            Err(e) => {
                println!("  DIVERGED: {e}");
                break;
            }
        };
        let stage = Stage::Slit(st);
        for img in imgs.iter_mut().skip(k + 1) {
            *img = st.forward(*img);
        }
        for j in 0..track.len() {
            track[j] = match track[j] {
                RealTrack::AtFrontier => {
                    let sign = match track[j - 1] {
                        RealTrack::Finite(x) => x.signum(),
                        _ => 1.0,
                    };
                    RealTrack::Finite(sign * st.b)
                }
                tt => stage.track_real(tt),
            };
        }
        base_below = base_below.map(|tt| stage.track_real(tt));
        track.push(RealTrack::AtFrontier);
        if samples[t - 1].role == Role::SpineStart {
            if let RealTrack::Finite(x) = track[t - 1] {
                base_below = Some(RealTrack::Finite(-x));
            }
        }
        if samples[t].role == Role::SpineTip {
            let Some(RealTrack::Finite(shift)) = base_below.take() else {
                println!("  LOST BASE TRACK");
                break;
            };
            println!("  shift by {shift:+9.3e}");
            let stage = Stage::Shift(shift);
            for img in imgs.iter_mut().skip(k + 1) {
                *img = stage.forward(*img);
            }
            for tt in track.iter_mut() {
                *tt = match *tt {
                    RealTrack::AtFrontier => RealTrack::Finite(-shift),
                    other => stage.track_real(other),
                };
            }
        }
    }
}

/// Prints the worst near-boundary sweep probes (debug aid).
#[doc(hidden)]
pub fn debug_worst_probes(m: &ConformalMap, budget: usize, top: usize) {
    let path = boundary::trace(&m.target, budget).unwrap();
    let probes = 4 * path.samples.len();
    let mut errs: Vec<(f64, f64, Point)> = Vec::new();
    for k in 0..probes {
        let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / probes as f64;
        let z = Point::from_polar(PROBE_RADIUS, theta);
        let w = m.forward_unchecked(z);
        errs.push((path.distance_to(w), theta, w));
    }
    errs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    for (e, th, w) in errs.iter().take(top) {
        println!("err {e:9.3e} at theta {th:+.4} -> image ({:+.4}, {:+.4})", w.re, w.im);
    }
}
