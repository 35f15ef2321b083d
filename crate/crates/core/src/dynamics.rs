//! Holomorphic self-maps of the model domains and their iteration.
//!
//! Moebius self-maps are stored in normalized matrix form: disk maps as
//! `z -> (a z + b)/(conj(b) z + conj(a))` with `|a|^2 - |b|^2 = 1`, right
//! half-plane maps as `w -> (alpha w - i beta)/(i gamma w + delta)` with
//! real coefficients and `alpha delta - beta gamma = 1` (the conjugate of
//! the classical real upper-half-plane form under `u -> -i u`). The trace
//! `alpha + delta` (resp. `2 Re a`) classifies the map.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{disk_distance, halfplane_distance, Horocycle};
use crate::point::{is_infinite_point, Point, POINT_AT_INFINITY};

/// Tolerance for the parabolic trace test `| |tr| - 2 | <= PARABOLIC_TOL`.
pub const PARABOLIC_TOL: f64 = 1e-10;
/// Normalization tolerance for automorphism coefficients.
const NORM_TOL: f64 = 1e-12;
/// Allowed overshoot before an iterate counts as leaving the model domain.
const SELF_MAP_SLACK: f64 = 1e-12;
/// Default iteration budget for boundary-point detection.
pub const DW_BUDGET: usize = 100_000;

/// Which model domain a self-map acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Disk,
    HalfPlane,
}

impl Model {
    pub fn contains(&self, z: Point) -> bool {
        match self {
            Model::Disk => z.norm_sqr() < 1.0,
            Model::HalfPlane => z.re > 0.0,
        }
    }

    /// How far outside the model domain `z` lies (0 when inside).
    pub fn excess(&self, z: Point) -> f64 {
        match self {
            Model::Disk => (z.norm() - 1.0).max(0.0),
            Model::HalfPlane => (-z.re).max(0.0),
        }
    }

    pub fn distance(&self, z: Point, w: Point) -> Result<f64> {
        match self {
            Model::Disk => disk_distance(z, w),
            Model::HalfPlane => halfplane_distance(z, w),
        }
    }
}

/// A black-box holomorphic self-map of a model domain.
pub trait SelfMap {
    fn model(&self) -> Model;
    fn apply(&self, z: Point) -> Point;
}

/// A conformal identification of the disk with a planar domain, as far as
/// orbit transport needs it. Implemented by the conformal module's Riemann
/// map; test doubles implement it directly.
pub trait PlanarMap {
    fn forward_point(&self, z: Point) -> Result<Point>;
    fn inverse_point(&self, w: Point) -> Result<Point>;
}

// ---------------------------------------------------------------------------
// Moebius self-maps
// ---------------------------------------------------------------------------

/// A normalized Moebius self-map of the disk or the right half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MobiusSelfMap {
    /// `z -> (a z + b)/(conj(b) z + conj(a))`, `|a|^2 - |b|^2 = 1`.
    Disk { a: Point, b: Point },
    /// `w -> (alpha w - i beta)/(i gamma w + delta)`, real coefficients,
    /// `alpha*delta - beta*gamma = 1`.
    HalfPlane { alpha: f64, beta: f64, gamma: f64, delta: f64 },
}

/// Classification of a Moebius self-map by its normalized trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapClass {
    Identity,
    /// Interior fixed point (rotation-like).
    Elliptic { interior_fixed: Point },
    /// One boundary fixed point with derivative 1.
    Parabolic { boundary_fixed: Point },
    /// Two boundary fixed points; `multiplier > 1` is the dilation factor,
    /// so the divergence rate is `ln(multiplier)/2`.
    HyperbolicAutomorphism { attracting: Point, repelling: Point, multiplier: f64 },
}

impl MobiusSelfMap {
    pub fn disk(a: Point, b: Point) -> Result<Self> {
        let det = a.norm_sqr() - b.norm_sqr();
        if (det - 1.0).abs() > NORM_TOL {
            return Err(Error::NotAnAutomorphism(format!(
                "|a|^2 - |b|^2 = {det}, expected 1"
            )));
        }
        Ok(MobiusSelfMap::Disk { a, b })
    }

    pub fn halfplane(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let det = alpha * delta - beta * gamma;
        if (det - 1.0).abs() > NORM_TOL {
            return Err(Error::NotAnAutomorphism(format!(
                "alpha*delta - beta*gamma = {det}, expected 1"
            )));
        }
        Ok(MobiusSelfMap::HalfPlane { alpha, beta, gamma, delta })
    }

    /// Vertical translation `w -> w + i c` of the right half-plane
    /// (parabolic, fixing infinity) for `c != 0`.
    pub fn halfplane_translation(c: f64) -> Self {
        MobiusSelfMap::HalfPlane { alpha: 1.0, beta: -c, gamma: 0.0, delta: 1.0 }
    }

    /// Dilation `w -> lambda w` of the right half-plane (hyperbolic for
    /// `lambda != 1`, fixing 0 and infinity).
    pub fn halfplane_dilation(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::NotAnAutomorphism(format!(
                "dilation factor must be positive, got {lambda}"
            )));
        }
        let s = lambda.sqrt();
        Ok(MobiusSelfMap::HalfPlane { alpha: s, beta: 0.0, gamma: 0.0, delta: 1.0 / s })
    }

    /// Disk rotation `z -> e^{i theta} z`.
    pub fn disk_rotation(theta: f64) -> Self {
        MobiusSelfMap::Disk { a: Point::from_polar(1.0, theta / 2.0), b: Point::new(0.0, 0.0) }
    }

    /// Parabolic disk automorphism fixing `sigma`, conjugate to the
    /// half-plane translation `w -> w + i c`.
    pub fn parabolic_disk(sigma: Point, c: f64) -> Result<Self> {
        if (sigma.norm() - 1.0).abs() > NORM_TOL {
            return Err(Error::BasePointNotOnCircle(sigma.re, sigma.im));
        }
        let i = Point::new(0.0, 1.0);
        let a = Point::new(1.0, 0.0) - i * c / 2.0;
        let b = i * c * sigma / 2.0;
        MobiusSelfMap::disk(a, b)
    }

    /// Hyperbolic disk automorphism with attracting fixed point `sigma`,
    /// repelling `-sigma`, and dilation factor `lambda > 1`.
    pub fn hyperbolic_disk(sigma: Point, lambda: f64) -> Result<Self> {
        if (sigma.norm() - 1.0).abs() > NORM_TOL {
            return Err(Error::BasePointNotOnCircle(sigma.re, sigma.im));
        }
        if !(lambda > 1.0) {
            return Err(Error::NotAnAutomorphism(format!(
                "dilation factor must exceed 1, got {lambda}"
            )));
        }
        let s = lambda.sqrt();
        let a = Point::new((s + 1.0 / s) / 2.0, 0.0);
        let b = sigma * ((s - 1.0 / s) / 2.0);
        MobiusSelfMap::disk(a, b)
    }

    pub fn model_tag(&self) -> Model {
        match self {
            MobiusSelfMap::Disk { .. } => Model::Disk,
            MobiusSelfMap::HalfPlane { .. } => Model::HalfPlane,
        }
    }

    pub fn eval(&self, z: Point) -> Point {
        match *self {
            MobiusSelfMap::Disk { a, b } => (a * z + b) / (b.conj() * z + a.conj()),
            MobiusSelfMap::HalfPlane { alpha, beta, gamma, delta } => {
                let i = Point::new(0.0, 1.0);
                if is_infinite_point(z) {
                    if gamma == 0.0 {
                        return POINT_AT_INFINITY;
                    }
                    return Point::new(alpha, 0.0) / (i * gamma);
                }
                let den = i * gamma * z + delta;
                if den.norm_sqr() == 0.0 {
                    return POINT_AT_INFINITY;
                }
                (alpha * z - i * beta) / den
            }
        }
    }

    /// Derivative of the map at `z`.
    pub fn derivative(&self, z: Point) -> Point {
        match *self {
            MobiusSelfMap::Disk { a, b } => {
                let den = b.conj() * z + a.conj();
                Point::new(1.0, 0.0) / (den * den)
            }
            MobiusSelfMap::HalfPlane { gamma, delta, .. } => {
                let den = Point::new(0.0, gamma) * z + delta;
                Point::new(1.0, 0.0) / (den * den)
            }
        }
    }

    /// Normalized trace; real by the normalization.
    pub fn trace(&self) -> f64 {
        match *self {
            MobiusSelfMap::Disk { a, .. } => 2.0 * a.re,
            MobiusSelfMap::HalfPlane { alpha, delta, .. } => alpha + delta,
        }
    }

    /// Trace classification with boundary fixed points where they exist.
    pub fn classify(&self) -> MapClass {
        let t = self.trace();
        if self.is_identity() {
            return MapClass::Identity;
        }
        if (t.abs() - 2.0).abs() <= PARABOLIC_TOL {
            MapClass::Parabolic { boundary_fixed: self.parabolic_fixed_point() }
        } else if t.abs() < 2.0 {
            MapClass::Elliptic { interior_fixed: self.elliptic_fixed_point() }
        } else {
            let (att, rep, lambda) = self.hyperbolic_fixed_points();
            MapClass::HyperbolicAutomorphism { attracting: att, repelling: rep, multiplier: lambda }
        }
    }

    fn is_identity(&self) -> bool {
        match *self {
            MobiusSelfMap::Disk { a, b } => b.norm() == 0.0 && a.im == 0.0,
            MobiusSelfMap::HalfPlane { alpha, beta, gamma, delta } => {
                beta == 0.0 && gamma == 0.0 && alpha == delta
            }
        }
    }

    /// Fixed points on the Riemann sphere, solving the fixed-point
    /// quadratic of the normalized matrix.
    pub fn fixed_points(&self) -> Vec<Point> {
        match *self {
            MobiusSelfMap::Disk { a, b } => {
                // conj(b) z^2 + (conj(a) - a) z - b = 0
                solve_mobius_fixed(b.conj(), a.conj() - a, -b)
            }
            MobiusSelfMap::HalfPlane { alpha, beta, gamma, delta } => {
                // i gamma w^2 + (delta - alpha) w + i beta = 0
                let i = Point::new(0.0, 1.0);
                solve_mobius_fixed(i * gamma, Point::new(delta - alpha, 0.0), i * beta)
            }
        }
    }

    fn parabolic_fixed_point(&self) -> Point {
        let fps = self.fixed_points();
        fps.into_iter().next().unwrap_or(POINT_AT_INFINITY)
    }

    fn elliptic_fixed_point(&self) -> Point {
        let model = self.model_tag();
        self.fixed_points()
            .into_iter()
            .find(|&z| !is_infinite_point(z) && model.contains(z))
            .unwrap_or(POINT_AT_INFINITY)
    }

    fn hyperbolic_fixed_points(&self) -> (Point, Point, f64) {
        let t = self.trace().abs();
        let mu = (t + (t * t - 4.0).sqrt()) / 2.0;
        let lambda = mu * mu;
        let fps = self.fixed_points();
        debug_assert_eq!(fps.len(), 2);
        let (p, q) = (fps[0], fps[1]);
        // attracting fixed point has |derivative| < 1
        let dp = if is_infinite_point(p) {
            let dq = self.derivative(q).norm();
            1.0 / dq
        } else {
            self.derivative(p).norm()
        };
        if dp < 1.0 {
            (p, q, lambda)
        } else {
            (q, p, lambda)
        }
    }
}

/// Roots of `c2 z^2 + c1 z + c0 = 0` on the Riemann sphere, degenerate
/// leading coefficients included.
fn solve_mobius_fixed(c2: Point, c1: Point, c0: Point) -> Vec<Point> {
    let zero = Point::new(0.0, 0.0);
    if c2 == zero {
        if c1 == zero {
            return vec![POINT_AT_INFINITY];
        }
        // linear: one finite root plus infinity
        return vec![-c0 / c1, POINT_AT_INFINITY];
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    let sq = disc.sqrt();
    // Citardauq on the small root for stability
    let q = -0.5 * (c1 + if (c1.conj() * sq).re >= 0.0 { sq } else { -sq });
    if q == zero {
        let r = -c1 / c2;
        return if r == zero { vec![zero] } else { vec![zero, r] };
    }
    let r1 = q / c2;
    let r2 = c0 / q;
    if (r1 - r2).norm() <= 1e-9 * (r1.norm() + r2.norm()).max(1.0) {
        vec![r1]
    } else {
        vec![r1, r2]
    }
}

impl SelfMap for MobiusSelfMap {
    fn model(&self) -> Model {
        self.model_tag()
    }
    fn apply(&self, z: Point) -> Point {
        self.eval(z)
    }
}

/// A finite Blaschke product `z -> e^{i theta} prod (z - a_k)/(1 - conj(a_k) z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    rotation: f64,
    zeros: Vec<Point>,
}

impl BlaschkeProduct {
    pub fn new(rotation: f64, zeros: Vec<Point>) -> Result<Self> {
        for (i, a) in zeros.iter().enumerate() {
            if a.norm_sqr() >= 1.0 {
                return Err(Error::InvalidParameter(format!(
                    "Blaschke zero {i} = ({}, {}) must lie inside the disk",
                    a.re, a.im
                )));
            }
        }
        Ok(Self { rotation, zeros })
    }

    pub fn zeros(&self) -> &[Point] {
        &self.zeros
    }
}

impl SelfMap for BlaschkeProduct {
    fn model(&self) -> Model {
        Model::Disk
    }
    fn apply(&self, z: Point) -> Point {
        let mut w = Point::from_polar(1.0, self.rotation);
        for a in &self.zeros {
            w *= (z - a) / (Point::new(1.0, 0.0) - a.conj() * z);
        }
        w
    }
}

/// Wraps an arbitrary evaluator as a self-map handle.
pub struct FnSelfMap<F: Fn(Point) -> Point> {
    model: Model,
    f: F,
}

impl<F: Fn(Point) -> Point> FnSelfMap<F> {
    pub fn new(model: Model, f: F) -> Self {
        Self { model, f }
    }
}

impl<F: Fn(Point) -> Point> SelfMap for FnSelfMap<F> {
    fn model(&self) -> Model {
        self.model
    }
    fn apply(&self, z: Point) -> Point {
        (self.f)(z)
    }
}

// ---------------------------------------------------------------------------
// orbits
// ---------------------------------------------------------------------------

/// A computed orbit with hyperbolic step sizes.
#[derive(Debug, Clone)]
pub struct OrbitRecord {
    pub start: Point,
    /// `points[k]` is the k-th iterate; `points[0] = start`.
    pub points: Vec<Point>,
    /// `step_distances[k] = k(points[k], points[k+1])`; non-increasing by
    /// the Schwarz-Pick lemma.
    pub step_distances: Vec<f64>,
    /// Classification hint when the map is a known automorphism.
    pub hint: Option<MapClass>,
}

/// Iterates `m` from `z0` for `n` steps, recording hyperbolic step sizes.
///
/// Iterates that leave the model domain by more than 1e-12 abort with
/// `SelfMapViolation`; marginal overshoot is pulled back for the distance
/// computation only.
pub fn iterate(m: &dyn SelfMap, z0: Point, n: usize) -> Result<OrbitRecord> {
    let model = m.model();
    if !model.contains(z0) {
        return Err(Error::PointOutsideDomain(z0.re, z0.im));
    }
    let mut points = Vec::with_capacity(n + 1);
    let mut steps = Vec::with_capacity(n);
    points.push(z0);
    let mut z = z0;
    for k in 1..=n {
        let mut w = m.apply(z);
        let excess = model.excess(w);
        if excess > SELF_MAP_SLACK || !crate::point::is_finite_point(w) {
            return Err(Error::SelfMapViolation(k, excess));
        }
        if excess > 0.0 {
            // pull marginal overshoot back inside
            w = match model {
                Model::Disk => w * (1.0 - 1e-15) / w.norm(),
                Model::HalfPlane => Point::new(f64::MIN_POSITIVE, w.im),
            };
        }
        steps.push(model.distance(z, w)?);
        points.push(w);
        z = w;
    }
    Ok(OrbitRecord { start: z0, points, step_distances: steps, hint: None })
}

/// Outcome of Denjoy-Wolff point detection.
#[derive(Debug, Clone, PartialEq)]
pub enum DenjoyWolff {
    /// All probe orbits converge to this boundary point.
    Boundary { tau: Point, iterations: usize },
    /// The orbits stay in a compact subset: no boundary point exists; the
    /// estimate locates the interior fixed point (Cesaro mean of the tail).
    InteriorFixed { estimate: Point },
}

/// Options for [`denjoy_wolff_point`].
#[derive(Debug, Clone)]
pub struct DwOptions {
    pub budget: usize,
    /// Agreement tolerance between probe starts. Parabolic boundary
    /// convergence is O(1/n), so 1e-4 is the honest default at the 1e5
    /// budget; geometric classes settle far below it.
    pub tolerance: f64,
    pub starts: Vec<Point>,
}

impl Default for DwOptions {
    fn default() -> Self {
        Self {
            budget: DW_BUDGET,
            tolerance: 1e-4,
            starts: vec![Point::new(0.0, 0.0), Point::new(0.0, 0.3), Point::new(-0.5, 0.0)],
        }
    }
}

/// Locates the Denjoy-Wolff point of a fixed-point-free self-map of the
/// disk by iterating independent starts, or reports an interior fixed
/// point when the orbits do not escape.
pub fn denjoy_wolff_point(m: &dyn SelfMap, opts: &DwOptions) -> Result<DenjoyWolff> {
    match m.model() {
        Model::Disk => denjoy_wolff_disk(m, opts),
        Model::HalfPlane => {
            // conjugate through the Cayley transform based at 1
            let sigma = Point::new(1.0, 0.0);
            let wrapped = FnSelfMap::new(Model::Disk, |z: Point| {
                let w = crate::hyperbolic::cayley(sigma, z).unwrap_or(POINT_AT_INFINITY);
                let fw = m.apply(w);
                crate::hyperbolic::cayley_inverse(sigma, fw).unwrap_or(sigma)
            });
            let starts = opts
                .starts
                .iter()
                .map(|&w| {
                    crate::hyperbolic::cayley_inverse(sigma, w).unwrap_or(Point::new(0.0, 0.0))
                })
                .collect();
            let disk_opts = DwOptions { starts, ..opts.clone() };
            match denjoy_wolff_disk(&wrapped, &disk_opts)? {
                DenjoyWolff::Boundary { tau, iterations } => {
                    let mapped = if (tau - sigma).norm() < 1e-9 {
                        POINT_AT_INFINITY
                    } else {
                        crate::hyperbolic::cayley(sigma, tau)?
                    };
                    Ok(DenjoyWolff::Boundary { tau: mapped, iterations })
                }
                DenjoyWolff::InteriorFixed { estimate } => Ok(DenjoyWolff::InteriorFixed {
                    estimate: crate::hyperbolic::cayley(sigma, estimate)?,
                }),
            }
        }
    }
}

fn denjoy_wolff_disk(m: &dyn SelfMap, opts: &DwOptions) -> Result<DenjoyWolff> {
    let mut finals = Vec::new();
    let mut used = 0usize;
    let mut interior_tail: Option<Point> = None;
    for &start in &opts.starts {
        if !Model::Disk.contains(start) {
            return Err(Error::PointOutsideDomain(start.re, start.im));
        }
        let mut z = start;
        let mut tail_sum = Point::new(0.0, 0.0);
        let mut tail_count = 0usize;
        let tail_window = (opts.budget / 10).max(100);
        let mut k = 0usize;
        while k < opts.budget {
            let w = m.apply(z);
            let excess = Model::Disk.excess(w);
            if excess > SELF_MAP_SLACK || !crate::point::is_finite_point(w) {
                return Err(Error::SelfMapViolation(k + 1, excess));
            }
            let step = (w - z).norm();
            z = w;
            k += 1;
            if opts.budget - k < tail_window {
                tail_sum += z;
                tail_count += 1;
            }
            if step < 1e-15 || z.norm() > 1.0 - 1e-13 {
                break;
            }
        }
        used = used.max(k);
        if z.norm() < 0.9 {
            // orbit stayed well inside: interior dynamics
            let est = if tail_count > 0 { tail_sum / tail_count as f64 } else { z };
            interior_tail = Some(est);
            continue;
        }
        finals.push(z / z.norm());
    }
    if let Some(est) = interior_tail {
        return Ok(DenjoyWolff::InteriorFixed { estimate: est });
    }
    for i in 0..finals.len() {
        for j in (i + 1)..finals.len() {
            if (finals[i] - finals[j]).norm() > opts.tolerance {
                return Err(Error::ConvergenceFailure(opts.budget));
            }
        }
    }
    let mut tau = finals.iter().fold(Point::new(0.0, 0.0), |acc, &t| acc + t);
    if tau.norm() == 0.0 {
        return Err(Error::ConvergenceFailure(opts.budget));
    }
    tau /= tau.norm();
    Ok(DenjoyWolff::Boundary { tau, iterations: used })
}

/// Divergence-rate estimate `k(m^n(z0), z0)/n` with a Cauchy-style
/// stabilization diagnostic (difference against the half-length estimate).
#[derive(Debug, Clone, Copy)]
pub struct DivergenceEstimate {
    pub rate: f64,
    pub diagnostic: f64,
    pub steps: usize,
}

pub fn divergence_rate(m: &dyn SelfMap, z0: Point, n: usize) -> Result<DivergenceEstimate> {
    let model = m.model();
    if !model.contains(z0) {
        return Err(Error::PointOutsideDomain(z0.re, z0.im));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("divergence rate needs n >= 1".into()));
    }
    let half = n / 2;
    let mut z = z0;
    let mut at_half = z0;
    for k in 1..=n {
        let w = m.apply(z);
        let excess = model.excess(w);
        if excess > SELF_MAP_SLACK || !crate::point::is_finite_point(w) {
            return Err(Error::SelfMapViolation(k, excess));
        }
        z = w;
        if k == half {
            at_half = z;
        }
    }
    let rate = model.distance(z, z0)? / n as f64;
    let diagnostic = if half > 0 {
        (rate - model.distance(at_half, z0)? / half as f64).abs()
    } else {
        f64::NAN
    };
    Ok(DivergenceEstimate { rate, diagnostic, steps: n })
}

// ---------------------------------------------------------------------------
// horocycle invariance
// ---------------------------------------------------------------------------

/// Report of a horocycle-invariance sweep.
#[derive(Debug, Clone)]
pub struct JuliaReport {
    pub samples_checked: usize,
    pub violations: usize,
    /// Max over samples of `quotient(m(z)) - quotient(z)`; non-positive when
    /// `tau` really is the Denjoy-Wolff point.
    pub max_quotient_increase: f64,
    pub radii: Vec<f64>,
}

/// Samples each horocycle `E(tau, R)` deterministically and verifies
/// `m(E(tau,R))` stays inside it. A wrongly declared `tau` produces
/// violations instead of an error.
pub fn julia_invariance_check(
    m: &dyn SelfMap,
    tau: Point,
    r_list: &[f64],
    samples: usize,
) -> Result<JuliaReport> {
    if m.model() != Model::Disk {
        return Err(Error::InvalidParameter(
            "horocycle invariance checks run on disk-model maps".into(),
        ));
    }
    let mut report = JuliaReport {
        samples_checked: 0,
        violations: 0,
        max_quotient_increase: f64::NEG_INFINITY,
        radii: r_list.to_vec(),
    };
    for &r in r_list {
        let h = Horocycle::new(tau, r)?;
        let (center, rho) = crate::hyperbolic::horocycle_euclidean(&h);
        // concentric deterministic rings inside the Euclidean disc
        let rings = ((samples as f64).sqrt() * 0.5).ceil().max(1.0) as usize;
        let per_ring = samples.div_ceil(rings);
        for i in 0..rings {
            let rad = rho * 0.995 * ((i as f64 + 0.5) / rings as f64);
            for j in 0..per_ring {
                let th = 2.0 * std::f64::consts::PI * j as f64 / per_ring as f64;
                let z = center + Point::from_polar(rad, th);
                if z.norm_sqr() >= 1.0 {
                    continue;
                }
                let q_before = h.quotient(z)?;
                if q_before >= r {
                    continue; // ring sample drifted out of the horocycle
                }
                let w = m.apply(z);
                report.samples_checked += 1;
                if !Model::Disk.contains(w) {
                    report.violations += 1;
                    continue;
                }
                let q_after = h.quotient(w)?;
                if !(q_after < r) {
                    report.violations += 1;
                }
                report.max_quotient_increase =
                    report.max_quotient_increase.max(q_after - q_before);
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// conjugated orbits in a planar domain
// ---------------------------------------------------------------------------

/// Orbit of `forward . phi . inverse` in the target of a Riemann map, with
/// Euclidean cluster diagnostics for the orbit tail.
#[derive(Debug, Clone)]
pub struct ConjugatedOrbit {
    pub points: Vec<Point>,
    /// Chordal diameter of the last fifth of the orbit.
    pub tail_diameter: f64,
    pub tail_len: usize,
}

pub fn conjugated_orbit(
    map: &impl PlanarMap,
    phi: &dyn SelfMap,
    w0: Point,
    n: usize,
) -> Result<ConjugatedOrbit> {
    if phi.model() != Model::Disk {
        return Err(Error::InvalidParameter(
            "conjugated orbits take a disk-model self-map".into(),
        ));
    }
    let mut points = Vec::with_capacity(n + 1);
    points.push(w0);
    let mut z = map.inverse_point(w0)?;
    for _ in 0..n {
        z = phi.apply(z);
        let excess = Model::Disk.excess(z);
        if excess > SELF_MAP_SLACK {
            return Err(Error::SelfMapViolation(points.len(), excess));
        }
        points.push(map.forward_point(z)?);
    }
    let tail_len = (points.len() / 5).max(2).min(points.len());
    let tail = &points[points.len() - tail_len..];
    let mut diam: f64 = 0.0;
    for (i, p) in tail.iter().enumerate() {
        for q in &tail[i + 1..] {
            diam = diam.max(crate::point::chordal_distance(*p, *q));
        }
    }
    Ok(ConjugatedOrbit { points, tail_diameter: diam, tail_len })
}

// ---------------------------------------------------------------------------
// file format
// ---------------------------------------------------------------------------

/// JSON self-map description; field names are the wire contract.
///
/// `kind = "mobius"`: disk coefficients `[re a, im a, re b, im b]`,
/// half-plane coefficients `[alpha, beta, gamma, delta]`.
/// `kind = "blaschke"` (disk only): `[theta, re a_1, im a_1, ...]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SelfMapSpec {
    pub model: Model,
    pub kind: String,
    pub coeffs: Vec<f64>,
}

impl SelfMapSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("self-map spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("self-map spec serializes")
    }

    pub fn build(&self) -> Result<Box<dyn SelfMap>> {
        match (self.kind.as_str(), self.model) {
            ("mobius", Model::Disk) => {
                if self.coeffs.len() != 4 {
                    return Err(Error::Format(
                        "disk mobius coeffs are [re a, im a, re b, im b]".into(),
                    ));
                }
                let a = Point::new(self.coeffs[0], self.coeffs[1]);
                let b = Point::new(self.coeffs[2], self.coeffs[3]);
                Ok(Box::new(MobiusSelfMap::disk(a, b)?))
            }
            ("mobius", Model::HalfPlane) => {
                if self.coeffs.len() != 4 {
                    return Err(Error::Format(
                        "half-plane mobius coeffs are [alpha, beta, gamma, delta]".into(),
                    ));
                }
                Ok(Box::new(MobiusSelfMap::halfplane(
                    self.coeffs[0],
                    self.coeffs[1],
                    self.coeffs[2],
                    self.coeffs[3],
                )?))
            }
            ("blaschke", Model::Disk) => {
                if self.coeffs.is_empty() || self.coeffs.len() % 2 == 0 {
                    return Err(Error::Format(
                        "blaschke coeffs are [theta, re a1, im a1, ...]".into(),
                    ));
                }
                let theta = self.coeffs[0];
                let zeros =
                    self.coeffs[1..].chunks(2).map(|c| Point::new(c[0], c[1])).collect();
                Ok(Box::new(BlaschkeProduct::new(theta, zeros)?))
            }
            (kind, _) => Err(Error::Format(format!(
                "unsupported self-map kind \"{kind}\" for this model"
            ))),
        }
    }
}
