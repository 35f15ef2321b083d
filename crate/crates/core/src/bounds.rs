//! Certified bounds on hyperbolic lengths and distances in slit domains.
//!
//! Everything here rests on the two-sided comparison between the hyperbolic
//! density of a simply connected domain and the reciprocal boundary
//! distance: `1/(4 dist) <= kappa <= 1/dist`. Integrating the right-hand
//! side along a curve gives a certified upper bound for its hyperbolic
//! length; a quarter of the same integral bounds it from below. The
//! quadrature itself is certified by Richardson doubling with a safety
//! factor of 2 on the observed error, so the returned [`BoundPair`] is
//! honest without interval arithmetic.

use crate::domain::{Polyline, SlitDomain};
use crate::error::{Error, Result};
use crate::point::Point;

/// Gauss-Legendre 4-point nodes and weights on [-1, 1].
const GL4_NODES: [f64; 4] =
    [-0.861136311594053, -0.339981043584856, 0.339981043584856, 0.861136311594053];
const GL4_WEIGHTS: [f64; 4] =
    [0.347854845137454, 0.652145154862546, 0.652145154862546, 0.347854845137454];

/// Relative tolerance requested from the adaptive quadrature.
const QUAD_REL_TOL: f64 = 1e-9;
const QUAD_MAX_DOUBLINGS: usize = 22;

/// A certified interval bracketing a hyperbolic length or distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundPair {
    pub lower: f64,
    pub upper: f64,
}

impl BoundPair {
    pub fn contains(&self, v: f64) -> bool {
        self.lower <= v && v <= self.upper
    }
}

/// A domain with a Euclidean distance-to-boundary oracle.
///
/// The slit domains implement it exactly; the unit disk and the right
/// half-plane are provided so model-domain identities can be cross-checked
/// without a rectangle approximation.
pub trait QuasiDomain {
    fn contains_point(&self, z: Point) -> bool;
    /// Distance to the boundary; callers only invoke it on interior points.
    fn boundary_distance(&self, z: Point) -> f64;
    /// Whether the closed segment stays inside the domain.
    fn segment_inside(&self, p: Point, q: Point) -> bool;
}

/// The unit disk with `dist(z) = 1 - |z|`.
pub struct UnitDisk;

impl QuasiDomain for UnitDisk {
    fn contains_point(&self, z: Point) -> bool {
        z.norm_sqr() < 1.0
    }
    fn boundary_distance(&self, z: Point) -> f64 {
        1.0 - z.norm()
    }
    fn segment_inside(&self, p: Point, q: Point) -> bool {
        // convex
        self.contains_point(p) && self.contains_point(q)
    }
}

/// The right half-plane with `dist(w) = Re w`.
pub struct RightHalfPlane;

impl QuasiDomain for RightHalfPlane {
    fn contains_point(&self, z: Point) -> bool {
        z.re > 0.0
    }
    fn boundary_distance(&self, z: Point) -> f64 {
        z.re
    }
    fn segment_inside(&self, p: Point, q: Point) -> bool {
        self.contains_point(p) && self.contains_point(q)
    }
}

impl QuasiDomain for SlitDomain {
    fn contains_point(&self, z: Point) -> bool {
        self.contains(z)
    }
    fn boundary_distance(&self, z: Point) -> f64 {
        self.dist_to_boundary(z).unwrap_or(0.0)
    }
    fn segment_inside(&self, p: Point, q: Point) -> bool {
        self.segment_in_domain(p, q)
    }
}

/// Composite Gauss-Legendre 4 of `1/dist` along the segment `p -> q`.
fn segment_quasihyp(d: &impl QuasiDomain, p: Point, q: Point, panels: usize) -> f64 {
    let dir = q - p;
    let len = dir.norm();
    let mut total = 0.0;
    for k in 0..panels {
        let a = k as f64 / panels as f64;
        let b = (k + 1) as f64 / panels as f64;
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for (x, w) in GL4_NODES.iter().zip(GL4_WEIGHTS.iter()) {
            let t = mid + half * x;
            let z = p + dir * t;
            total += w * half * len / d.boundary_distance(z);
        }
    }
    total
}

/// Adaptive certified quadrature of `1/dist` along one segment.
///
/// Returns `(value, error_bound)` where the error bound is twice the last
/// Richardson increment.
fn segment_quasihyp_certified(
    d: &impl QuasiDomain,
    p: Point,
    q: Point,
    panels0: usize,
) -> Result<(f64, f64)> {
    let mut panels = panels0.max(1);
    let mut prev = segment_quasihyp(d, p, q, panels);
    for _ in 0..QUAD_MAX_DOUBLINGS {
        panels *= 2;
        let cur = segment_quasihyp(d, p, q, panels);
        let err = (cur - prev).abs();
        if err <= QUAD_REL_TOL * cur.abs().max(1e-300) {
            return Ok((cur, 2.0 * err));
        }
        prev = cur;
    }
    Err(Error::QuadratureNonconvergence(prev.abs(), QUAD_MAX_DOUBLINGS))
}

/// Certified bounds for the hyperbolic length of a polyline.
///
/// `lower = (Q - e)/4`, `upper = Q + e` where `Q` integrates `1/dist` along
/// the curve and `e` is the certified quadrature error. When the polyline
/// is a hyperbolic geodesic the pair also brackets the hyperbolic distance
/// between its endpoints.
pub fn curve_length_bounds(
    d: &impl QuasiDomain,
    c: &Polyline,
    panels: usize,
) -> Result<BoundPair> {
    let verts = c.vertices();
    if verts.len() == 1 {
        if !d.contains_point(verts[0]) {
            return Err(Error::CurveExitsDomain(0));
        }
        return Ok(BoundPair { lower: 0.0, upper: 0.0 });
    }
    for (i, w) in verts.windows(2).enumerate() {
        if !d.segment_inside(w[0], w[1]) {
            return Err(Error::CurveExitsDomain(i));
        }
    }
    let mut q = 0.0;
    let mut err = 0.0;
    for w in verts.windows(2) {
        let (v, e) = segment_quasihyp_certified(d, w[0], w[1], panels)?;
        q += v;
        err += e;
    }
    Ok(BoundPair { lower: ((q - err) / 4.0).max(0.0), upper: q + err })
}

// ---------------------------------------------------------------------------
// grid shortest-path upper bound
// ---------------------------------------------------------------------------

/// Resolution descriptor for the shortest-path search.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    /// Optional search window `[x0, x1, y0, y1]`; derived from the base and
    /// the query points when absent.
    pub window: Option<[f64; 4]>,
}

impl GridSpec {
    pub fn new(nx: usize, ny: usize) -> Self {
        Self { nx, ny, window: None }
    }

    pub fn with_window(mut self, window: [f64; 4]) -> Self {
        self.window = Some(window);
        self
    }

    /// Doubled resolution over the same window. Interval counts double, so
    /// the refined node set contains the coarse one and every coarse route
    /// stays available.
    pub fn refined(&self) -> Self {
        Self { nx: 2 * (self.nx - 1) + 1, ny: 2 * (self.ny - 1) + 1, window: self.window }
    }
}

fn default_window(d: &SlitDomain, z: Point, w: Point) -> [f64; 4] {
    use crate::domain::Base;
    match d.base() {
        Base::Square => [-1.0, 1.0, -1.0, 1.0],
        Base::Rect { x0, x1, y0, y1 } => [x0, x1, y0, y1],
        Base::HalfPlane => {
            let pad = (z - w).norm().max(1.0);
            let x_hi = z.re.max(w.re) + pad;
            let x_lo = (z.re.min(w.re) / 4.0).max(x_hi * 1e-6);
            let y_lo = z.im.min(w.im) - pad;
            let y_hi = z.im.max(w.im) + pad;
            [x_lo, x_hi, y_lo, y_hi]
        }
    }
}

#[derive(PartialEq)]
struct HeapState {
    cost: f64,
    node: usize,
}

impl Eq for HeapState {}

impl Ord for HeapState {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.cost.total_cmp(&self.cost) // min-heap
    }
}

impl PartialOrd for HeapState {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Certified upper bound for `k(z, w)` from an 8-connected grid search.
///
/// Every grid edge that stays inside the domain is weighted by the
/// quasihyperbolic integral along it, so any path is an upper bound after
/// the winning polyline is re-integrated with certified quadrature. The
/// straight segment `z -> w` is always considered as a candidate route, and
/// the result is monotone (weakly decreasing) under grid refinement.
pub fn distance_upper(d: &SlitDomain, z: Point, w: Point, grid: &GridSpec) -> Result<f64> {
    if !d.contains(z) {
        return Err(Error::PointOutsideDomain(z.re, z.im));
    }
    if !d.contains(w) {
        return Err(Error::PointOutsideDomain(w.re, w.im));
    }
    if z == w {
        return Ok(0.0);
    }
    let direct = if d.segment_in_domain(z, w) {
        let seg = Polyline::segment(z, w)?;
        Some(curve_length_bounds(d, &seg, 2)?.upper)
    } else {
        None
    };

    let grid_route = grid_route_upper(d, z, w, grid)?;
    match (direct, grid_route) {
        (Some(a), Some(b)) => Ok(a.min(b)),
        (Some(a), None) => Ok(a),
        (None, Some(b)) => Ok(b),
        (None, None) => Err(Error::PointsDisconnectedAtResolution),
    }
}

fn grid_route_upper(d: &SlitDomain, z: Point, w: Point, grid: &GridSpec) -> Result<Option<f64>> {
    if grid.nx < 2 || grid.ny < 2 {
        return Err(Error::InvalidParameter("grid needs at least 2x2 nodes".into()));
    }
    let [x0, x1, y0, y1] = grid.window.unwrap_or_else(|| default_window(d, z, w));
    let nx = grid.nx;
    let ny = grid.ny;
    let hx = (x1 - x0) / (nx - 1) as f64;
    let hy = (y1 - y0) / (ny - 1) as f64;
    let node_pt = |i: usize| -> Point {
        let ix = i % nx;
        let iy = i / nx;
        Point::new(x0 + hx * ix as f64, y0 + hy * iy as f64)
    };
    let n_nodes = nx * ny;
    let mut inside = vec![false; n_nodes];
    for (i, flag) in inside.iter_mut().enumerate() {
        *flag = d.contains(node_pt(i));
    }

    // Endpoint attachment: every in-domain node within a fixed fraction of
    // the window size whose straight connector stays inside is admissible.
    // The radius does not shrink under refinement, so refined candidate
    // sets contain the coarse ones and the bound is monotone.
    let attach_radius = 0.1 * (x1 - x0).max(y1 - y0);
    let attach = |p: Point| -> Vec<(usize, f64)> {
        let ix0 = (((p.re - x0) / hx).round() as isize).clamp(0, nx as isize - 1);
        let iy0 = (((p.im - y0) / hy).round() as isize).clamp(0, ny as isize - 1);
        let rx = (attach_radius / hx).ceil() as isize;
        let ry = (attach_radius / hy).ceil() as isize;
        let mut out = Vec::new();
        for dy in -ry..=ry {
            for dx in -rx..=rx {
                let ix = ix0 + dx;
                let iy = iy0 + dy;
                if ix < 0 || iy < 0 || ix >= nx as isize || iy >= ny as isize {
                    continue;
                }
                let idx = iy as usize * nx + ix as usize;
                if !inside[idx] {
                    continue;
                }
                let q = node_pt(idx);
                if (q - p).norm() > attach_radius && !(dx.abs() <= 1 && dy.abs() <= 1) {
                    continue;
                }
                if !d.segment_in_domain(p, q) {
                    continue;
                }
                out.push((idx, segment_quasihyp(d, p, q, 2)));
            }
        }
        out
    };

    let starts = attach(z);
    let goals = attach(w);
    if starts.is_empty() || goals.is_empty() {
        return Ok(None);
    }

    // Dijkstra over the 8-connected in-domain grid, multi-source
    let offsets: [(isize, isize); 8] =
        [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1)];
    let mut cost = vec![f64::INFINITY; n_nodes];
    let mut prev = vec![usize::MAX; n_nodes];
    let mut heap = std::collections::BinaryHeap::new();
    for &(s, c0) in &starts {
        if c0 < cost[s] {
            cost[s] = c0;
            heap.push(HeapState { cost: c0, node: s });
        }
    }
    while let Some(HeapState { cost: c, node }) = heap.pop() {
        if c > cost[node] {
            continue;
        }
        let ix = (node % nx) as isize;
        let iy = (node / nx) as isize;
        let p = node_pt(node);
        for (dx, dy) in offsets {
            let jx = ix + dx;
            let jy = iy + dy;
            if jx < 0 || jy < 0 || jx >= nx as isize || jy >= ny as isize {
                continue;
            }
            let j = jy as usize * nx + jx as usize;
            if !inside[j] {
                continue;
            }
            let q = node_pt(j);
            if !d.segment_in_domain(p, q) {
                continue;
            }
            let edge = segment_quasihyp(d, p, q, 1);
            let nc = c + edge;
            if nc < cost[j] {
                cost[j] = nc;
                prev[j] = node;
                heap.push(HeapState { cost: nc, node: j });
            }
        }
    }
    let mut best: Option<(f64, usize)> = None;
    for &(g, cg) in &goals {
        if cost[g].is_finite() {
            let total = cost[g] + cg;
            if best.map_or(true, |(bt, _)| total < bt) {
                best = Some((total, g));
            }
        }
    }
    let Some((_, goal)) = best else {
        return Ok(None);
    };

    // reconstruct, attach the snap connectors, and re-integrate certified
    let start_set: std::collections::HashSet<usize> = starts.iter().map(|&(s, _)| s).collect();
    let mut nodes = vec![goal];
    let mut cur = goal;
    while prev[cur] != usize::MAX {
        cur = prev[cur];
        nodes.push(cur);
    }
    if !start_set.contains(&cur) {
        return Ok(None);
    }
    nodes.reverse();
    let mut verts: Vec<Point> = Vec::with_capacity(nodes.len() + 2);
    verts.push(z);
    for i in nodes {
        let p = node_pt(i);
        if *verts.last().unwrap() != p {
            verts.push(p);
        }
    }
    if *verts.last().unwrap() != w {
        verts.push(w);
    }
    if verts.len() == 1 {
        return Ok(Some(0.0));
    }
    let path = Polyline::new(verts)?;
    Ok(Some(curve_length_bounds(d, &path, 2)?.upper))
}

// ---------------------------------------------------------------------------
// corridor lower bounds
// ---------------------------------------------------------------------------

/// A caller-guaranteed fiber bound for corridor crossings: for every
/// `t` in the corridor interval, any admissible curve crossing the vertical
/// line `Re z = t` does so at a point with `dist(z, boundary) <= fiber(t)`.
#[derive(Debug, Clone, Copy)]
pub enum FiberBound {
    /// Constant clearance, e.g. a comb strip of half-width `eps_n`.
    Constant(f64),
    /// `t -> sqrt((t - anchor)^2 + height^2)`: distance to a slit tip at
    /// `(anchor, height)`, the slit half-plane gap geometry.
    TipDistance { anchor: f64, height: f64 },
}

impl FiberBound {
    /// Comb strip between teeth `n` and `n+1`: constant `eps_n`.
    pub fn comb_strip(rule: crate::domain::SeqRule, n: u64) -> Self {
        FiberBound::Constant(rule.half_gap(n))
    }

    /// Slit half-plane gap fiber anchored at slit `j`'s tip.
    pub fn petersen_tip(j: u64) -> Self {
        FiberBound::TipDistance {
            anchor: crate::domain::petersen_abscissa(j),
            height: crate::domain::petersen_gap(j),
        }
    }
}

/// Corridor lower bound: `(1/4) * integral of dt / fiber(t)` over `[x0, x1]`.
///
/// Valid as a lower bound for `k(z, w)` whenever every admissible curve
/// from `z` to `w` crosses each vertical line of the corridor at clearance
/// at most `fiber(t)` - the caller owns that guarantee. The two built-in
/// fibers integrate in closed form.
pub fn corridor_lower_bound(x0: f64, x1: f64, fiber: FiberBound) -> Result<f64> {
    if !(x0 < x1) || !x0.is_finite() || !x1.is_finite() {
        return Err(Error::InvalidInterval(x0, x1));
    }
    match fiber {
        FiberBound::Constant(eps) => {
            if !(eps > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "fiber clearance must be positive, got {eps}"
                )));
            }
            Ok((x1 - x0) / (4.0 * eps))
        }
        FiberBound::TipDistance { anchor, height } => {
            if !(height > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "tip height must be positive, got {height}"
                )));
            }
            // integral of dt/sqrt((t-a)^2 + y^2) = asinh((t-a)/y)
            let f = |t: f64| ((t - anchor) / height).asinh();
            Ok(0.25 * (f(x1) - f(x0)))
        }
    }
}

/// Upper bound for escaping a slit channel sideways and reaching the point
/// `r0 + i Im q` on the right: `h/(eps - |theta|) + asinh(r0/(eps - |theta|))`.
///
/// `q` sits at `Re q = -h` inside a channel of half-width `eps`, displaced
/// `theta` from the channel midline; the bound integrates `1/dist` along the
/// horizontal exit path, whose clearance is `eps - |theta|` inside the
/// channel and grows like the tip distance outside.
pub fn slit_channel_exit_upper(h: f64, epsilon: f64, theta: f64, r0: f64) -> Result<f64> {
    if !(epsilon > 0.0) || !(h >= 0.0) || !(r0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need eps > 0, h >= 0, r0 > 0; got eps={epsilon}, h={h}, r0={r0}"
        )));
    }
    let clearance = epsilon - theta.abs();
    if clearance <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "|theta| = {} must be below eps = {epsilon}",
            theta.abs()
        )));
    }
    Ok(h / clearance + (r0 / clearance).asinh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{petersen_gap, petersen_half_gap, SeqRule, SlitDomain};
    use crate::hyperbolic::{disk_distance, disk_geodesic_point};

    fn pt(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    #[test]
    fn radial_segment_bounds_in_disk() {
        let seg = Polyline::segment(pt(0.0, 0.0), pt(0.9, 0.0)).unwrap();
        let b = curve_length_bounds(&UnitDisk, &seg, 4).unwrap();
        let q = 10f64.ln(); // integral of dt/(1-t) over [0, 0.9]
        assert!((b.upper - q).abs() < 1e-7, "upper {} vs {q}", b.upper);
        assert!((b.lower - q / 4.0).abs() < 1e-7);
        // true distance lies inside
        let k = 0.9f64.atanh();
        assert!(b.contains(k));
    }

    #[test]
    fn degenerate_polyline_is_zero() {
        let p = Polyline::new(vec![pt(0.1, 0.2)]).unwrap();
        let b = curve_length_bounds(&UnitDisk, &p, 1).unwrap();
        assert_eq!(b.lower, 0.0);
        assert_eq!(b.upper, 0.0);
    }

    #[test]
    fn factor_four_law() {
        let seg = Polyline::segment(pt(-0.3, 0.4), pt(0.5, -0.2)).unwrap();
        let b = curve_length_bounds(&UnitDisk, &seg, 4).unwrap();
        let ratio = b.upper / b.lower;
        assert!((ratio - 4.0).abs() < 1e-6, "ratio {ratio}");
    }

    #[test]
    fn sandwich_on_random_disk_pairs() {
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let z = pt(1.8 * next() - 0.9, 1.8 * next() - 0.9);
            let w = pt(1.8 * next() - 0.9, 1.8 * next() - 0.9);
            if z.norm_sqr() >= 0.9 || w.norm_sqr() >= 0.9 || (z - w).norm() < 1e-3 {
                continue;
            }
            // polyline along the true geodesic
            let verts: Vec<Point> = (0..=32)
                .map(|i| disk_geodesic_point(z, w, i as f64 / 32.0).unwrap())
                .collect();
            let poly = Polyline::new(verts).unwrap();
            let b = curve_length_bounds(&UnitDisk, &poly, 2).unwrap();
            let k = disk_distance(z, w).unwrap();
            assert!(b.contains(k), "k={k} not in [{}, {}]", b.lower, b.upper);
        }
    }

    #[test]
    fn halfplane_sandwich() {
        let seg = Polyline::segment(pt(1.0, 0.0), pt(4.0, 0.0)).unwrap();
        let b = curve_length_bounds(&RightHalfPlane, &seg, 4).unwrap();
        let k = crate::hyperbolic::halfplane_distance(pt(1.0, 0.0), pt(4.0, 0.0)).unwrap();
        // the positive axis is the geodesic here
        assert!(b.contains(k));
        assert!((b.upper - 4.0f64.ln()).abs() < 1e-7);
    }

    #[test]
    fn curve_exit_is_detected() {
        let d = SlitDomain::comb_default(None);
        let bad = Polyline::new(vec![pt(-0.5, 0.2), pt(-0.5, 0.3)]).unwrap();
        assert!(matches!(
            curve_length_bounds(&d, &bad, 2),
            Err(Error::CurveExitsDomain(0))
        ));
    }

    #[test]
    fn distance_upper_examples() {
        let d = SlitDomain::comb_default(Some(4));
        let z = pt(0.5, 0.0);
        let w = pt(0.25, 0.0);
        let up = distance_upper(&d, z, w, &GridSpec::new(81, 81)).unwrap();
        assert!(up.is_finite() && up > 0.0);
        // exceeds a quarter of the straight-segment quasihyperbolic integral
        let seg = Polyline::segment(z, w).unwrap();
        let b = curve_length_bounds(&d, &seg, 2).unwrap();
        assert!(up >= b.lower, "{up} < {}", b.lower);
        assert!(up <= b.upper + 1e-9, "{up} > {}", b.upper);

        assert_eq!(distance_upper(&d, z, z, &GridSpec::new(41, 41)).unwrap(), 0.0);

        let p = SlitDomain::petersen(Some(3)).unwrap();
        let up = distance_upper(&p, pt(1.0, 0.0), pt(2.0, 0.0), &GridSpec::new(61, 61)).unwrap();
        let seg = Polyline::segment(pt(1.0, 0.0), pt(2.0, 0.0)).unwrap();
        let segb = curve_length_bounds(&p, &seg, 2).unwrap();
        assert!(up <= segb.upper + 1e-9);
    }

    #[test]
    fn distance_upper_monotone_under_refinement() {
        let d = SlitDomain::comb_default(Some(3));
        let pairs = [
            (pt(0.5, 0.0), pt(-0.5, 0.3)),
            (pt(0.2, -0.6), pt(-0.3, 0.7)),
            (pt(0.8, 0.1), pt(0.1, 0.8)),
            (pt(-0.5, 0.05), pt(0.5, -0.5)),
            (pt(0.9, 0.9), pt(-0.9, 0.95)),
        ];
        for (z, w) in pairs {
            let g0 = GridSpec::new(41, 41);
            let g1 = g0.refined();
            let g2 = g1.refined();
            let u0 = distance_upper(&d, z, w, &g0).unwrap();
            let u1 = distance_upper(&d, z, w, &g1).unwrap();
            let u2 = distance_upper(&d, z, w, &g2).unwrap();
            let slack = 1e-9;
            assert!(u1 <= u0 * (1.0 + slack) + slack, "{u1} > {u0}");
            assert!(u2 <= u1 * (1.0 + slack) + slack, "{u2} > {u1}");
        }
    }

    #[test]
    fn grid_routes_around_slits() {
        // points on opposite sides of the a_1 tooth, left half of the square
        let d = SlitDomain::comb_default(Some(4));
        let z = pt(-0.5, 0.4);
        let w = pt(-0.5, 0.6);
        let up = distance_upper(&d, z, w, &GridSpec::new(81, 81)).unwrap();
        assert!(up.is_finite());
        // must route around the tooth tip at (0, 1/2): compare with the
        // 3-leg detour bound
        let detour = Polyline::new(vec![z, pt(0.3, 0.4), pt(0.3, 0.6), w]).unwrap();
        let det = curve_length_bounds(&d, &detour, 2).unwrap();
        assert!(up <= det.upper + 1e-9);
        assert!(up > 0.1);
    }

    #[test]
    fn corridor_values() {
        // comb strip: constant fiber eps_5 = 2^-7, interval [-0.5, -0.02]
        let rule = SeqRule::default();
        let lb = corridor_lower_bound(-0.5, -0.02, FiberBound::comb_strip(rule, 5)).unwrap();
        assert!((lb - 15.36).abs() < 1e-12, "comb corridor {lb}");

        // slit half-plane, j = 2, interval [x_2 - eps_2, x_2], fiber anchored
        // at the tip of slit 2
        let j = 2u64;
        let x2 = crate::domain::petersen_abscissa(j);
        let e2 = petersen_half_gap(j);
        let lb = corridor_lower_bound(x2 - e2, x2, FiberBound::petersen_tip(j)).unwrap();
        // quadrature value asinh(eps_2/y_2)/4; the classical simplification
        // 0.25*ln(2 eps_2/y_2) = (3^2 - ln 2)/4 is a hair below it
        let y2 = petersen_gap(j);
        let expect = (e2 / y2).asinh() / 4.0;
        assert!((lb - expect).abs() < 1e-12, "{lb} vs {expect}");
        assert!((lb - 2.076713220089992).abs() < 1e-12);
        let simplified = (9.0 - 2f64.ln()) / 4.0;
        assert!(lb >= simplified && lb - simplified < 1e-7);

        // j = 2 forward gap: [x_3, c_2] anchored at slit 3's tip
        let c2 = crate::domain::petersen_midpoint(j);
        let x3 = crate::domain::petersen_abscissa(j + 1);
        let lb = corridor_lower_bound(x3, c2, FiberBound::petersen_tip(j + 1)).unwrap();
        assert!((lb - 6.75).abs() < 1e-9, "forward gap {lb}");
    }

    #[test]
    fn corridor_errors() {
        assert!(matches!(
            corridor_lower_bound(1.0, 0.0, FiberBound::Constant(0.1)),
            Err(Error::InvalidInterval(_, _))
        ));
        assert!(corridor_lower_bound(0.0, 1.0, FiberBound::Constant(0.0)).is_err());
    }

    #[test]
    fn channel_exit_values() {
        let v = slit_channel_exit_upper(0.05, 0.1, 0.0, 1.0).unwrap();
        assert!((v - (0.5 + 10f64.asinh())).abs() < 1e-12);
        assert!((v - 3.49822295029797).abs() < 1e-12);
        // same thing through the log form of asinh
        assert!((v - (0.5 + (10.0 + 101f64.sqrt()).ln())).abs() < 1e-12);

        // h = 0, r0 = eps - |theta|: asinh(1)
        let v = slit_channel_exit_upper(0.0, 0.1, 0.04, 0.06).unwrap();
        assert!((v - 1f64.asinh()).abs() < 1e-12);
        assert!((v - 0.881373587019543).abs() < 1e-12);

        // pole at |theta| = eps
        assert!(slit_channel_exit_upper(0.05, 0.1, 0.1, 1.0).is_err());
        assert!(slit_channel_exit_upper(0.05, 0.1, -0.2, 1.0).is_err());
    }
}
