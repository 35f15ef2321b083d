//! Boundary sampling for the fit.
//!
//! Walls are sampled along the counterclockwise Jordan loop. Slits are
//! sampled by their spine: base, interior points graded geometrically
//! (ratio 1/2) toward the tip, then the tip itself. Each spine point is
//! fed to the unzipper once; the slit stage opens both sides of the slit
//! at the same time, and a re-basing shift after the tip stage returns the
//! frontier to the far-side copy of the base. This keeps zero-thickness
//! slits exact, with no artificial thickening.
//!
//! The traversal starts on the positive real axis and is mirror-symmetric
//! for symmetric targets, so symmetric fits stay symmetric sample by
//! sample.

use crate::domain::{Base, Family, SlitDomain};
use crate::error::{Error, Result};
use crate::point::Point;

/// The fitting window for half-plane targets: the map is fit on the domain
/// clipped to `[0, CLIP_X] x [-CLIP_Y, CLIP_Y]`, a far-field proxy that
/// leaves the slit and gap region untouched.
pub const CLIP_X: f64 = 3.0;
pub const CLIP_Y: f64 = 2.0;

/// How a sample participates in the unzipping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Wall,
    /// Slit base; lies on a wall. The next samples walk the spine.
    SpineStart,
    Spine,
    /// Slit end; triggers the re-basing shift.
    SpineTip,
}

#[derive(Debug, Clone, Copy)]
pub struct Sample {
    pub point: Point,
    pub role: Role,
}

/// An interior probe used to build the boundary correspondence table.
#[derive(Debug, Clone, Copy)]
pub struct Probe {
    pub point: Point,
    /// Unit direction into the domain.
    pub dir: Point,
    /// Largest sensible probe offset.
    pub cap: f64,
}

#[derive(Debug, Clone)]
pub struct BoundaryPath {
    /// Unzip order; `samples[0]` sits on the positive real axis.
    pub samples: Vec<Sample>,
    /// Correspondence probes in boundary-traversal order; spine interiors
    /// appear twice (once per side).
    pub probes: Vec<Probe>,
    /// Closed polyline (walls plus out-and-back spines) for distance
    /// queries.
    poly: Vec<Point>,
}

impl BoundaryPath {
    /// Euclidean distance from `p` to the boundary polyline.
    pub fn distance_to(&self, p: Point) -> f64 {
        let v = &self.poly;
        let n = v.len();
        let mut best = f64::INFINITY;
        for i in 0..n {
            let a = v[i];
            let b = v[(i + 1) % n];
            let ab = b - a;
            let len2 = ab.norm_sqr();
            let t = if len2 == 0.0 {
                0.0
            } else {
                (((p - a).re * ab.re + (p - a).im * ab.im) / len2).clamp(0.0, 1.0)
            };
            best = best.min((p - (a + ab * t)).norm());
        }
        best
    }
}

struct PathBuilder {
    samples: Vec<Sample>,
    probes: Vec<Probe>,
    poly: Vec<Point>,
}

impl PathBuilder {
    fn new() -> Self {
        Self { samples: Vec::new(), probes: Vec::new(), poly: Vec::new() }
    }

    fn push_sample(&mut self, point: Point, role: Role) {
        if self.samples.last().is_some_and(|s| s.point == point) {
            return;
        }
        self.samples.push(Sample { point, role });
        self.poly.push(point);
    }

    /// Wall corner (also the junction points of wall pieces).
    fn corner(&mut self, p: Point, dir: Point, cap: f64) {
        self.push_sample(p, Role::Wall);
        self.probes.push(Probe { point: p, dir, cap });
    }

    /// Interior wall samples from `from` to `to` (endpoints excluded),
    /// cosine-clustered toward both ends.
    fn wall(&mut self, from: Point, to: Point, n: usize, cap: f64) {
        let len = (to - from).norm();
        if len == 0.0 {
            return;
        }
        let dir = (to - from) / len;
        let normal = Point::new(-dir.im, dir.re);
        for i in 1..=n {
            let x = len * 0.5 * (1.0 - (std::f64::consts::PI * i as f64 / (n + 1) as f64).cos());
            let p = from + dir * x;
            self.push_sample(p, Role::Wall);
            self.probes.push(Probe { point: p, dir: normal, cap });
        }
    }

    /// A full slit: base on the wall, spine graded toward the tip, tip.
    ///
    /// `side` is the unit normal of the outgoing side (the side met first
    /// along the counterclockwise traversal).
    fn slit(&mut self, base: Point, tip: Point, n: usize, min_step: f64, side: Point, cap: f64) {
        let len = (tip - base).norm();
        let dir = (tip - base) / len;
        self.push_sample(base, Role::SpineStart);
        let mut xs: Vec<f64> = (1..=n)
            .map(|i| len * 0.5 * (1.0 - (std::f64::consts::PI * i as f64 / (n + 1) as f64).cos()))
            .collect();
        // geometric cascade toward the tip
        let mut d = 0.5 * len;
        for _ in 0..60 {
            d *= 0.5;
            if d < min_step {
                break;
            }
            xs.push(len - d);
        }
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let sep = (min_step * 0.25).max(len * 1e-12);
        let mut kept: Vec<f64> = Vec::with_capacity(xs.len());
        for x in xs {
            if x <= sep || x >= len - sep {
                continue;
            }
            if kept.last().map_or(true, |&l| x - l >= sep) {
                kept.push(x);
            }
        }
        let spine: Vec<Point> = kept.iter().map(|&x| base + dir * x).collect();
        for &p in &spine {
            self.push_sample(p, Role::Spine);
        }
        self.push_sample(tip, Role::SpineTip);
        // probes: outgoing side, the tip, then the far side in reverse
        let probe_cap = |x: f64| cap.min(0.2 * (len - x).max(min_step));
        for (&p, &x) in spine.iter().zip(kept.iter()) {
            self.probes.push(Probe { point: p, dir: side, cap: probe_cap(x) });
        }
        self.probes.push(Probe { point: tip, dir, cap: cap.min(0.1 * len) });
        for (&p, &x) in spine.iter().zip(kept.iter()).rev() {
            self.probes.push(Probe { point: p, dir: -side, cap: probe_cap(x) });
        }
        // the return side of the polyline
        for &p in spine.iter().rev() {
            self.poly.push(p);
        }
        self.poly.push(base);
    }
}

/// Traces the boundary of `d` with roughly `budget` samples.
pub fn trace(d: &SlitDomain, budget: usize) -> Result<BoundaryPath> {
    if !d.extra_slits().is_empty() {
        return Err(Error::NonJordanBoundary(
            "boundary tracing supports the built-in families and plain boxes only".into(),
        ));
    }
    if budget < 16 {
        return Err(Error::InvalidParameter("need at least 16 boundary samples".into()));
    }
    match (d.family(), d.truncation()) {
        (Some(Family::Comb { rule }), Some(n)) => comb_path(rule, n, budget),
        (Some(Family::Petersen), Some(n)) => {
            if n > 3 {
                return Err(Error::TruncationUnderflow(format!(
                    "harmonic measures beyond slit 3 underflow f64; requested truncation {n}"
                )));
            }
            petersen_path(n, budget)
        }
        (Some(_), None) => Err(Error::NonJordanBoundary(
            "an untruncated family has no Jordan boundary; set a truncation".into(),
        )),
        (None, _) => box_path(d.base(), budget),
    }
}

fn box_path(base: Base, budget: usize) -> Result<BoundaryPath> {
    let [x0, x1, y0, y1] = match base {
        Base::Square => [-1.0, 1.0, -1.0, 1.0],
        Base::Rect { x0, x1, y0, y1 } => [x0, x1, y0, y1],
        Base::HalfPlane => [0.0, CLIP_X, -CLIP_Y, CLIP_Y],
    };
    let mid = Point::new(x1, 0.5 * (y0 + y1));
    let w = x1 - x0;
    let h = y1 - y0;
    let per = 2.0 * (w + h);
    let mut b = PathBuilder::new();
    let count_for = |len: f64| ((budget as f64 - 4.0) * len / per).round().max(1.0) as usize;
    let p = Point::new;
    let cap = 0.1 * w.min(h);
    b.corner(mid, p(-1.0, 0.0), cap);
    b.wall(mid, p(x1, y1), count_for(h / 2.0), cap);
    b.corner(p(x1, y1), p(-1.0, -1.0) / 2f64.sqrt(), cap);
    b.wall(p(x1, y1), p(x0, y1), count_for(w), cap);
    b.corner(p(x0, y1), p(1.0, -1.0) / 2f64.sqrt(), cap);
    b.wall(p(x0, y1), p(x0, y0), count_for(h), cap);
    b.corner(p(x0, y0), p(1.0, 1.0) / 2f64.sqrt(), cap);
    b.wall(p(x0, y0), p(x1, y0), count_for(w), cap);
    b.corner(p(x1, y0), p(-1.0, 1.0) / 2f64.sqrt(), cap);
    b.wall(p(x1, y0), mid, count_for(h / 2.0), cap);
    finish(b)
}

fn comb_path(rule: crate::domain::SeqRule, truncation: u64, budget: usize) -> Result<BoundaryPath> {
    let teeth: Vec<f64> = (1..=truncation + 1).map(|j| rule.eval(j)).collect();
    let n_slits = teeth.len() + 1; // teeth plus the zero-ordinate ray
    // clearance of slit j to its neighbors (and of the walls between them)
    let gap_above = |j: usize| if j == 0 { 1.0 - teeth[0] } else { teeth[j - 1] - teeth[j] };
    let gap_below = |j: usize| if j + 1 < teeth.len() { teeth[j] - teeth[j + 1] } else { teeth[j] };

    // budget split: the slit spines carry most of the geometry
    let corners = 8 + 2 * (2 * n_slits);
    let interior = budget.saturating_sub(corners);
    let spine_share = (interior as f64 * 0.72 / (2 * n_slits - 1) as f64).max(4.0) as usize;
    let wall_share = (interior as f64 * 0.28).max(8.0);
    let box_n = (wall_share * 0.12) as usize + 1;
    let left_n = ((wall_share * 0.4 / (2 * n_slits) as f64) as usize).max(1);

    let p = Point::new;
    let mut b = PathBuilder::new();
    let cap = 0.1;
    b.corner(p(1.0, 0.0), p(-1.0, 0.0), cap);
    b.wall(p(1.0, 0.0), p(1.0, 1.0), box_n, cap);
    b.corner(p(1.0, 1.0), p(-1.0, -1.0) / 2f64.sqrt(), cap);
    b.wall(p(1.0, 1.0), p(-1.0, 1.0), 2 * box_n, cap);
    b.corner(p(-1.0, 1.0), p(1.0, -1.0) / 2f64.sqrt(), cap);

    let mut cursor = 1.0;
    let mut tooth = |b: &mut PathBuilder, cursor: &mut f64, y: f64, clearance: f64, side: f64| {
        b.wall(p(-1.0, *cursor), p(-1.0, y), left_n, 0.25 * clearance);
        let min_step = 2f64.powi(-16);
        b.slit(p(-1.0, y), p(0.0, y), spine_share, min_step, p(0.0, side), 0.25 * clearance);
        *cursor = y;
    };
    for (j, &a) in teeth.iter().enumerate() {
        tooth(&mut b, &mut cursor, a, gap_above(j).min(gap_below(j)), 1.0);
    }
    tooth(&mut b, &mut cursor, 0.0, *teeth.last().unwrap(), 1.0);
    for (j, &a) in teeth.iter().enumerate().rev() {
        tooth(&mut b, &mut cursor, -a, gap_above(j).min(gap_below(j)), 1.0);
    }
    b.wall(p(-1.0, cursor), p(-1.0, -1.0), left_n, cap);
    b.corner(p(-1.0, -1.0), p(1.0, 1.0) / 2f64.sqrt(), cap);
    b.wall(p(-1.0, -1.0), p(1.0, -1.0), 2 * box_n, cap);
    b.corner(p(1.0, -1.0), p(-1.0, 1.0) / 2f64.sqrt(), cap);
    b.wall(p(1.0, -1.0), p(1.0, 0.0), box_n, cap);
    finish(b)
}

fn petersen_path(truncation: u64, budget: usize) -> Result<BoundaryPath> {
    let xs: Vec<f64> = (0..=truncation).map(crate::domain::petersen_abscissa).collect();
    let ys: Vec<f64> = (0..=truncation).map(crate::domain::petersen_gap).collect();
    let n_slits = xs.len();

    let corners = 8 + 2 * (2 * n_slits);
    let interior = budget.saturating_sub(corners);
    let spine_share = (interior as f64 * 0.7 / (2 * n_slits) as f64).max(6.0) as usize;
    let wall_n = ((interior as f64 * 0.3) / (2 * n_slits + 5) as f64).max(2.0) as usize;

    let p = Point::new;
    let mut b = PathBuilder::new();
    let cap = 0.2;
    b.corner(p(CLIP_X, 0.0), p(-1.0, 0.0), cap);
    b.wall(p(CLIP_X, 0.0), p(CLIP_X, CLIP_Y), wall_n, cap);
    b.corner(p(CLIP_X, CLIP_Y), p(-1.0, -1.0) / 2f64.sqrt(), cap);
    let mut cursor = CLIP_X;
    for n in 0..n_slits {
        let clearance = 0.25 * crate::domain::petersen_half_gap(n as u64);
        b.wall(p(cursor, CLIP_Y), p(xs[n], CLIP_Y), wall_n, clearance);
        // spine runs from the top edge down to the gap endpoint
        let min_step = (0.5 * ys[n]).max(1e-300);
        b.slit(p(xs[n], CLIP_Y), p(xs[n], ys[n]), spine_share, min_step, p(-1.0, 0.0), clearance);
        cursor = xs[n];
    }
    b.wall(p(cursor, CLIP_Y), p(0.0, CLIP_Y), wall_n, cap);
    b.corner(p(0.0, CLIP_Y), p(1.0, -1.0) / 2f64.sqrt(), cap);
    b.wall(p(0.0, CLIP_Y), p(0.0, -CLIP_Y), 3 * wall_n, cap);
    b.corner(p(0.0, -CLIP_Y), p(1.0, 1.0) / 2f64.sqrt(), cap);
    let mut cursor = 0.0;
    for n in (0..n_slits).rev() {
        let clearance = 0.25 * crate::domain::petersen_half_gap(n as u64);
        b.wall(p(cursor, -CLIP_Y), p(xs[n], -CLIP_Y), wall_n, clearance);
        let min_step = (0.5 * ys[n]).max(1e-300);
        b.slit(p(xs[n], -CLIP_Y), p(xs[n], -ys[n]), spine_share, min_step, p(-1.0, 0.0), clearance);
        cursor = xs[n];
    }
    b.wall(p(cursor, -CLIP_Y), p(CLIP_X, -CLIP_Y), wall_n, cap);
    b.corner(p(CLIP_X, -CLIP_Y), p(-1.0, 1.0) / 2f64.sqrt(), cap);
    b.wall(p(CLIP_X, -CLIP_Y), p(CLIP_X, 0.0), wall_n, cap);
    finish(b)
}

fn finish(b: PathBuilder) -> Result<BoundaryPath> {
    let mut samples = b.samples;
    if samples.len() < 8 {
        return Err(Error::NonJordanBoundary("too few boundary samples".into()));
    }
    if samples.first().map(|s| s.point) == samples.last().map(|s| s.point) {
        samples.pop();
    }
    Ok(BoundaryPath { samples, probes: b.probes, poly: b.poly })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::SlitDomain;

    #[test]
    fn square_path_budgeted() {
        let d = SlitDomain::with_slits(Base::Square, vec![]).unwrap();
        let path = trace(&d, 128).unwrap();
        let n = path.samples.len();
        assert!((100..=160).contains(&n), "sample count {n}");
        assert_eq!(path.samples[0].point, Point::new(1.0, 0.0));
        assert!(path.samples.iter().all(|s| s.role == Role::Wall));
    }

    #[test]
    fn comb_path_has_spines_and_tips() {
        let d = SlitDomain::comb_default(Some(2));
        let path = trace(&d, 256).unwrap();
        // teeth at +-{1/2, 1/4, 1/8} plus the zero ray: 7 slits
        let tips: Vec<Point> =
            path.samples.iter().filter(|s| s.role == Role::SpineTip).map(|s| s.point).collect();
        assert_eq!(tips.len(), 7);
        for a in [0.5, 0.25, 0.125, 0.0, -0.125, -0.25, -0.5] {
            assert!(
                tips.iter().any(|t| (t - Point::new(0.0, a)).norm() < 1e-15),
                "missing tip at ordinate {a}"
            );
        }
        // every spine start is followed by spine samples ending in a tip
        let mut in_spine = false;
        for s in &path.samples {
            match s.role {
                Role::SpineStart => {
                    assert!(!in_spine);
                    in_spine = true;
                }
                Role::Spine => assert!(in_spine),
                Role::SpineTip => {
                    assert!(in_spine);
                    in_spine = false;
                }
                Role::Wall => assert!(!in_spine),
            }
        }
        // mirror symmetry of the sample set
        for s in &path.samples {
            let mirrored = Point::new(s.point.re, -s.point.im);
            assert!(
                path.samples.iter().any(|u| (u.point - mirrored).norm() < 1e-13),
                "no mirror sample for {}",
                s.point
            );
        }
    }

    #[test]
    fn comb_budget_is_respected() {
        let d = SlitDomain::comb_default(Some(4));
        for budget in [128usize, 256, 512] {
            let n = trace(&d, budget).unwrap().samples.len();
            assert!(
                n as f64 >= budget as f64 * 0.7 && n as f64 <= budget as f64 * 1.35,
                "budget {budget} gave {n}"
            );
        }
    }

    #[test]
    fn probes_point_into_domain() {
        let d = SlitDomain::comb_default(Some(3));
        let path = trace(&d, 300).unwrap();
        let mut ok = 0;
        for pr in &path.probes {
            let mut t = pr.cap.max(1e-12);
            let mut hit = false;
            for _ in 0..50 {
                if d.contains(pr.point + pr.dir * t) {
                    hit = true;
                    break;
                }
                t *= 0.5;
            }
            if hit {
                ok += 1;
            }
        }
        assert_eq!(ok, path.probes.len(), "{ok}/{} probes landed inside", path.probes.len());
    }

    #[test]
    fn petersen_path_small_truncations_only() {
        let d = SlitDomain::petersen(Some(2)).unwrap();
        let path = trace(&d, 300).unwrap();
        assert!(path.samples.iter().filter(|s| s.role == Role::SpineTip).count() == 6);
        assert!(trace(&SlitDomain::petersen(Some(5)).unwrap(), 200).is_err());
    }

    #[test]
    fn untruncated_family_is_rejected() {
        let d = SlitDomain::comb_default(None);
        assert!(matches!(trace(&d, 200), Err(Error::NonJordanBoundary(_))));
    }
}
