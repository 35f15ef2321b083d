//! Exact slit-domain geometry.
//!
//! A [`SlitDomain`] is an open base region (box or right half-plane) minus a
//! family of closed rectilinear slits. Two built-in infinite families are
//! supported in closed form:
//!
//! - the *comb*: the square `(-1,1)^2` minus the horizontal left ray `L_0`
//!   and the teeth `L_{+-a_n}` for a decreasing sequence `a_n -> 0`;
//! - the *slit half-plane* (`petersen` in the file format): the right
//!   half-plane minus the vertical ray pairs `{Re z = 2^-n, |Im z| >= y_n}`
//!   with `y_n = 2^-n e^{-3^n}`.
//!
//! Containment and Euclidean distance-to-boundary are exact even for the
//! infinite families: the slit ordinates/abscissae are monotone, so the
//! nearest indices to a query coordinate are located by a closed-form
//! inverse plus a neighbor sweep, never by materializing the family.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{is_finite_point, Point};

/// Hard cap on family indices probed by the closed-form oracles.
const INDEX_CAP: u64 = 4096;

/// Closed-form descriptor of a strictly decreasing positive sequence
/// `a_1 > a_2 > ... -> 0` of comb tooth ordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SeqRule {
    /// `a_n = ratio^n`, `ratio` in (0,1). The default is `ratio = 1/2`.
    Geometric { ratio: f64 },
    /// `a_n = (n+1)^(-exponent)`, `exponent > 0`.
    Power { exponent: f64 },
}

impl Default for SeqRule {
    fn default() -> Self {
        SeqRule::Geometric { ratio: 0.5 }
    }
}

impl SeqRule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SeqRule::Geometric { ratio } => {
                if !(ratio > 0.0 && ratio < 1.0) {
                    return Err(Error::InvalidSequence(format!(
                        "geometric ratio must lie in (0,1), got {ratio}"
                    )));
                }
            }
            SeqRule::Power { exponent } => {
                if !(exponent > 0.0) || !exponent.is_finite() {
                    return Err(Error::InvalidSequence(format!(
                        "power exponent must be positive, got {exponent}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `a_n` for `n >= 1`.
    pub fn eval(&self, n: u64) -> f64 {
        match *self {
            SeqRule::Geometric { ratio } => ratio.powf(n as f64),
            SeqRule::Power { exponent } => ((n + 1) as f64).powf(-exponent),
        }
    }

    /// Half-gap between consecutive teeth: `eps_n = (a_n - a_{n+1})/2`.
    pub fn half_gap(&self, n: u64) -> f64 {
        0.5 * (self.eval(n) - self.eval(n + 1))
    }

    /// Smallest `n >= 1` with `a_n <= t`, clamped to `INDEX_CAP`.
    fn first_index_at_or_below(&self, t: f64) -> u64 {
        if !(t > 0.0) {
            return INDEX_CAP;
        }
        let guess = match *self {
            SeqRule::Geometric { ratio } => (t.ln() / ratio.ln()).ceil(),
            SeqRule::Power { exponent } => (t.powf(-1.0 / exponent) - 1.0).ceil(),
        };
        let mut n = if guess.is_finite() && guess > 1.0 {
            (guess as u64).min(INDEX_CAP)
        } else {
            1
        };
        // guard against rounding in the closed-form inverse
        while n > 1 && self.eval(n - 1) <= t {
            n -= 1;
        }
        while n < INDEX_CAP && self.eval(n) > t {
            n += 1;
        }
        n
    }
}

/// Base region of a slit domain. All bases are convex and open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Base {
    /// The open square `(-1,1) x (-1,1)`.
    Square,
    /// The open right half-plane `{ Re z > 0 }`.
    HalfPlane,
    /// An open axis-aligned rectangle `(x0,x1) x (y0,y1)`.
    Rect { x0: f64, x1: f64, y0: f64, y1: f64 },
}

impl Base {
    pub fn contains(&self, z: Point) -> bool {
        if !is_finite_point(z) {
            return false;
        }
        match *self {
            Base::Square => z.re > -1.0 && z.re < 1.0 && z.im > -1.0 && z.im < 1.0,
            Base::HalfPlane => z.re > 0.0,
            Base::Rect { x0, x1, y0, y1 } => z.re > x0 && z.re < x1 && z.im > y0 && z.im < y1,
        }
    }

    pub fn boundary_distance(&self, z: Point) -> f64 {
        match *self {
            Base::Square => (1.0 - z.re).min(z.re + 1.0).min(1.0 - z.im).min(z.im + 1.0),
            Base::HalfPlane => z.re,
            Base::Rect { x0, x1, y0, y1 } => {
                (x1 - z.re).min(z.re - x0).min(y1 - z.im).min(z.im - y0)
            }
        }
    }
}

/// A closed rectilinear slit: a horizontal or vertical segment, possibly
/// unbounded on one side (a ray).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Slit {
    /// `{ (x, y) : x in [x0, x1] }` at height `y`.
    Horizontal { y: f64, x0: f64, x1: f64 },
    /// `{ (x, y) : y in [y0, y1] }` at abscissa `x`.
    Vertical { x: f64, y0: f64, y1: f64 },
}

impl Slit {
    pub fn distance(&self, z: Point) -> f64 {
        match *self {
            Slit::Horizontal { y, x0, x1 } => {
                let cx = z.re.clamp(x0, x1);
                (z.re - cx).hypot(z.im - y)
            }
            Slit::Vertical { x, y0, y1 } => {
                let cy = z.im.clamp(y0, y1);
                (z.im - cy).hypot(z.re - x)
            }
        }
    }

    pub fn contains(&self, z: Point) -> bool {
        match *self {
            Slit::Horizontal { y, x0, x1 } => z.im == y && z.re >= x0 && z.re <= x1,
            Slit::Vertical { x, y0, y1 } => z.re == x && z.im >= y0 && z.im <= y1,
        }
    }

    /// Does the closed segment `p -> q` meet this slit?
    pub fn blocks_segment(&self, p: Point, q: Point) -> bool {
        match *self {
            Slit::Horizontal { y, x0, x1 } => {
                let dy = q.im - p.im;
                if dy == 0.0 {
                    p.im == y && p.re.min(q.re) <= x1 && p.re.max(q.re) >= x0
                } else {
                    let t = (y - p.im) / dy;
                    if !(0.0..=1.0).contains(&t) {
                        return false;
                    }
                    let xc = p.re + t * (q.re - p.re);
                    (x0..=x1).contains(&xc)
                }
            }
            Slit::Vertical { x, y0, y1 } => {
                let dx = q.re - p.re;
                if dx == 0.0 {
                    p.re == x && p.im.min(q.im) <= y1 && p.im.max(q.im) >= y0
                } else {
                    let t = (x - p.re) / dx;
                    if !(0.0..=1.0).contains(&t) {
                        return false;
                    }
                    let yc = p.im + t * (q.im - p.im);
                    (y0..=y1).contains(&yc)
                }
            }
        }
    }
}

/// Built-in infinite slit families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    /// Square comb: `L_0` plus teeth `L_{+-a_n}` on `{Re z <= 0}`.
    /// Materialized tooth `k >= 0` has ordinate `rule.eval(k+1)`.
    Comb { rule: SeqRule },
    /// Right half-plane minus `{Re z = 2^-n, |Im z| >= 2^-n e^{-3^n}}`,
    /// slit index `n >= 0`.
    Petersen,
}

/// `x_n = 2^-n` for the half-plane family.
pub fn petersen_abscissa(n: u64) -> f64 {
    2f64.powi(-(n as i32))
}

/// `ln y_n = -n ln 2 - 3^n`; kept in log space so reports can run far past
/// the underflow index.
pub fn petersen_log_gap(n: u64) -> f64 {
    -(n as f64) * std::f64::consts::LN_2 - 3f64.powi(n as i32)
}

/// `y_n = 2^-n e^{-3^n}` (underflows to 0 for n >= 7, which is the correct
/// limiting slit: a full vertical line).
pub fn petersen_gap(n: u64) -> f64 {
    petersen_log_gap(n).exp()
}

/// Gap midpoints `c_n = 3 / 2^{n+2}` between `x_{n+1}` and `x_n`.
pub fn petersen_midpoint(n: u64) -> f64 {
    3.0 * 2f64.powi(-(n as i32) - 2)
}

/// Half-gaps `eps_n = 1 / 2^{n+2}` of the half-plane family.
pub fn petersen_half_gap(n: u64) -> f64 {
    2f64.powi(-(n as i32) - 2)
}

/// A simply connected open set: base minus closed slits.
#[derive(Debug, Clone, PartialEq)]
pub struct SlitDomain {
    base: Base,
    family: Option<Family>,
    /// `Some(n)` materializes family slits with index `<= n`; `None` keeps
    /// the whole infinite family.
    truncation: Option<u64>,
    extra_slits: Vec<Slit>,
}

impl SlitDomain {
    /// The comb domain: square minus `L_0` and teeth `L_{+-a_n}`.
    ///
    /// `truncation = Some(n)` keeps tooth indices `0..=n` (tooth `k` at
    /// ordinate `a_{k+1}`), so `Some(0)` leaves exactly `L_0` and the pair
    /// at `+-a_1`. `None` keeps the infinite family.
    pub fn comb(rule: SeqRule, truncation: Option<u64>) -> Result<Self> {
        rule.validate()?;
        if rule.eval(1) >= 1.0 {
            return Err(Error::InvalidSequence(format!(
                "first tooth ordinate a_1 = {} must be below the square edge",
                rule.eval(1)
            )));
        }
        Ok(Self {
            base: Base::Square,
            family: Some(Family::Comb { rule }),
            truncation,
            extra_slits: Vec::new(),
        })
    }

    /// The comb with the default rule `a_n = 2^-n`.
    pub fn comb_default(truncation: Option<u64>) -> Self {
        Self::comb(SeqRule::default(), truncation).expect("default rule is valid")
    }

    /// The slit half-plane. Materialized truncations are capped at index 5:
    /// `y_6 = 2^-6 e^{-729}` is already below the normal f64 range.
    pub fn petersen(truncation: Option<u64>) -> Result<Self> {
        if let Some(n) = truncation {
            if n > 5 {
                return Err(Error::TruncationUnderflow(format!(
                    "slit half-gap y_{n} = exp({:.1}) underflows f64; materialized \
                     truncations are limited to n <= 5",
                    petersen_log_gap(n)
                )));
            }
        }
        Ok(Self {
            base: Base::HalfPlane,
            family: Some(Family::Petersen),
            truncation,
            extra_slits: Vec::new(),
        })
    }

    /// A bare base with user slits and no family.
    ///
    /// Each slit must lie in the closure of the base and be attached -
    /// directly or through other slits - to the base boundary, which keeps
    /// the complement connected and the domain simply connected.
    pub fn with_slits(base: Base, slits: Vec<Slit>) -> Result<Self> {
        let d = Self { base, family: None, truncation: None, extra_slits: slits };
        d.check_user_slits()?;
        Ok(d)
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    pub fn truncation(&self) -> Option<u64> {
        self.truncation
    }

    pub fn extra_slits(&self) -> &[Slit] {
        &self.extra_slits
    }

    /// Replaces the truncation (used by the CLI `--truncation` flag).
    pub fn with_truncation(mut self, truncation: Option<u64>) -> Result<Self> {
        if matches!(self.family, Some(Family::Petersen)) {
            if let Some(n) = truncation {
                if n > 5 {
                    return Err(Error::TruncationUnderflow(format!(
                        "materialized truncation {n} exceeds the f64 floor (n <= 5)"
                    )));
                }
            }
        }
        self.truncation = truncation;
        Ok(self)
    }

    /// True iff the domain is symmetric under conjugation.
    pub fn is_symmetric(&self) -> bool {
        let base_ok = match self.base {
            Base::Square | Base::HalfPlane => true,
            Base::Rect { y0, y1, .. } => y0 == -y1,
        };
        let slits_ok = self.extra_slits.iter().all(|s| {
            self.extra_slits.iter().any(|t| match (*s, *t) {
                (Slit::Horizontal { y, x0, x1 }, Slit::Horizontal { y: ty, x0: tx0, x1: tx1 }) => {
                    ty == -y && tx0 == x0 && tx1 == x1
                }
                (Slit::Vertical { x, y0, y1 }, Slit::Vertical { x: tx, y0: ty0, y1: ty1 }) => {
                    tx == x && ty0 == -y1 && ty1 == -y0
                }
                _ => false,
            })
        });
        base_ok && slits_ok
    }

    fn comb_rule(&self) -> Option<SeqRule> {
        match self.family {
            Some(Family::Comb { rule }) => Some(rule),
            _ => None,
        }
    }

    /// Largest materialized family index, or `INDEX_CAP` when infinite.
    fn index_cap(&self) -> u64 {
        match (self.family, self.truncation) {
            (Some(Family::Comb { .. }), Some(n)) => (n + 1).min(INDEX_CAP), // tooth k -> a_{k+1}
            (Some(Family::Petersen), Some(n)) => n.min(INDEX_CAP),
            _ => INDEX_CAP,
        }
    }

    /// Strict open containment: inside the base and on no closed slit.
    pub fn contains(&self, z: Point) -> bool {
        if !self.base.contains(z) {
            return false;
        }
        match self.family {
            Some(Family::Comb { rule }) => {
                if z.im == 0.0 && z.re <= 0.0 {
                    return false; // on L_0
                }
                let ay = z.im.abs();
                if z.re <= 0.0 && ay > 0.0 {
                    let cap = self.index_cap();
                    let lo = rule.first_index_at_or_below(ay);
                    for n in lo.saturating_sub(3)..=(lo + 3).min(cap) {
                        if n >= 1 && rule.eval(n) == ay {
                            return false;
                        }
                    }
                }
            }
            Some(Family::Petersen) => {
                let cap = self.index_cap();
                // only x = 2^-n exactly can be on a slit line
                let l = -z.re.log2();
                if l >= -0.5 && l.fract().abs() < 0.5 {
                    let n = l.round();
                    if n >= 0.0 && (n as u64) <= cap && petersen_abscissa(n as u64) == z.re {
                        let n = n as u64;
                        if z.im.abs() >= petersen_gap(n) {
                            return false;
                        }
                    }
                }
            }
            None => {}
        }
        !self.extra_slits.iter().any(|s| s.contains(z))
    }

    /// Exact Euclidean distance to the full boundary (base edges, all
    /// materialized slits, and the infinite family when untruncated).
    pub fn dist_to_boundary(&self, z: Point) -> Result<f64> {
        if !self.contains(z) {
            return Err(Error::PointOutsideDomain(z.re, z.im));
        }
        let mut d = self.base.boundary_distance(z);
        match self.family {
            Some(Family::Comb { rule }) => {
                let cap = self.index_cap();
                // L_0 = [-1,0] x {0}
                d = d.min(Slit::Horizontal { y: 0.0, x0: -1.0, x1: 0.0 }.distance(z));
                // teeth on the side of z (the far side never beats L_0)
                let ay = z.im.abs();
                let lo = rule.first_index_at_or_below(ay);
                for n in lo.saturating_sub(3)..=(lo + 3).min(cap) {
                    if n < 1 {
                        continue;
                    }
                    let a = rule.eval(n);
                    let tooth = Slit::Horizontal { y: a, x0: -1.0, x1: 0.0 };
                    d = d.min(tooth.distance(Point::new(z.re, ay)));
                }
                // deepest materialized tooth when the window missed it
                // (query far above all teeth is covered by lo itself)
                if cap < INDEX_CAP {
                    let a = rule.eval(cap);
                    let tooth = Slit::Horizontal { y: a, x0: -1.0, x1: 0.0 };
                    d = d.min(tooth.distance(Point::new(z.re, ay)));
                }
            }
            Some(Family::Petersen) => {
                let cap = self.index_cap();
                let n0 = if z.re >= 1.0 {
                    0
                } else {
                    (-z.re.log2()).floor().max(0.0) as u64
                };
                let lo = n0.saturating_sub(3);
                let hi = (n0 + 3).min(cap);
                for n in lo..=hi {
                    d = d.min(self.petersen_slit_distance(n, z));
                }
                if cap < INDEX_CAP {
                    d = d.min(self.petersen_slit_distance(cap, z));
                }
            }
            None => {}
        }
        for s in &self.extra_slits {
            d = d.min(s.distance(z));
        }
        Ok(d)
    }

    fn petersen_slit_distance(&self, n: u64, z: Point) -> f64 {
        let x = petersen_abscissa(n);
        let y = petersen_gap(n);
        let ay = z.im.abs();
        if ay >= y {
            (z.re - x).abs()
        } else {
            (z.re - x).hypot(y - ay)
        }
    }

    /// Does the closed segment `p -> q` stay inside the domain?
    ///
    /// Both endpoints must be inside; the bases are convex so only slit
    /// crossings are checked, in closed form for the infinite families.
    pub fn segment_in_domain(&self, p: Point, q: Point) -> bool {
        if !self.contains(p) || !self.contains(q) {
            return false;
        }
        match self.family {
            Some(Family::Comb { rule }) => {
                if self.comb_family_blocks(rule, p, q) {
                    return false;
                }
            }
            Some(Family::Petersen) => {
                if self.petersen_family_blocks(p, q) {
                    return false;
                }
            }
            None => {}
        }
        !self.extra_slits.iter().any(|s| s.blocks_segment(p, q))
    }

    fn comb_family_blocks(&self, rule: SeqRule, p: Point, q: Point) -> bool {
        let cap = self.index_cap();
        let dy = q.im - p.im;
        if dy == 0.0 {
            // Constant height: only the slit at exactly that height matters,
            // and the endpoints are already known to avoid it; a horizontal
            // segment at slit height with interior endpoints lies entirely
            // beyond the tooth tips.
            return false;
        }
        // Levels a hit by the segment: a = p.im + t*dy, t in [0,1]; the
        // crossing abscissa x(a) is affine in a. Blocked iff x(a) <= 0.
        let (ylo, yhi) = (p.im.min(q.im), p.im.max(q.im));
        let dx = q.re - p.re;
        let x_at = |a: f64| p.re + (a - p.im) / dy * dx;
        // solve x(a) <= 0 for a within [ylo, yhi]
        let blocked_window = |lo: f64, hi: f64| -> (f64, f64) {
            // x is affine on [lo,hi]; return sub-interval where x <= 0
            let xl = x_at(lo);
            let xh = x_at(hi);
            match (xl <= 0.0, xh <= 0.0) {
                (true, true) => (lo, hi),
                (false, false) => (1.0, 0.0), // empty
                (true, false) => {
                    let t = xl / (xl - xh); // root of affine function
                    (lo, lo + t * (hi - lo))
                }
                (false, true) => {
                    let t = xl / (xl - xh);
                    (lo + t * (hi - lo), hi)
                }
            }
        };
        let (blo, bhi) = blocked_window(ylo, yhi);
        if blo > bhi {
            return false;
        }
        // L_0 at level 0
        if blo <= 0.0 && 0.0 <= bhi {
            return true;
        }
        // teeth at +-a_n: check positive then mirrored window
        for (wlo, whi) in [(blo.max(0.0), bhi), (-bhi, (-blo).min(0.0))] {
            let (wlo, whi) = (wlo.max(0.0), whi);
            if wlo > whi || whi <= 0.0 {
                continue;
            }
            let n = rule.first_index_at_or_below(whi);
            for m in n.saturating_sub(2)..=(n + 2).min(cap) {
                if m >= 1 {
                    let a = rule.eval(m);
                    if a >= wlo && a <= whi {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn petersen_family_blocks(&self, p: Point, q: Point) -> bool {
        let cap = self.index_cap();
        let dx = q.re - p.re;
        if dx == 0.0 {
            // vertical segment: endpoints inside on abscissa x; if x is a
            // slit line both endpoints sit in the open gap, so the segment
            // does too
            return false;
        }
        let (xlo, xhi) = (p.re.min(q.re), p.re.max(q.re));
        let n_lo = if xhi >= 1.0 { 0 } else { (-xhi.log2()).ceil().max(0.0) as u64 };
        let mut n = n_lo;
        while n <= cap {
            let x = petersen_abscissa(n);
            if x < xlo {
                break;
            }
            if x <= xhi {
                let t = (x - p.re) / dx;
                if (0.0..=1.0).contains(&t) {
                    let yc = p.im + t * (q.im - p.im);
                    if yc.abs() >= petersen_gap(n) {
                        return true;
                    }
                }
            }
            n += 1;
        }
        false
    }

    /// Materializes family slits with index up to `max_index` (plus the
    /// extra slits). Used by brute-force cross-checks and boundary tracing.
    pub fn materialized_slits(&self, max_index: u64) -> Vec<Slit> {
        let mut out = Vec::new();
        let cap = self.index_cap().min(max_index);
        match self.family {
            Some(Family::Comb { rule }) => {
                out.push(Slit::Horizontal { y: 0.0, x0: -1.0, x1: 0.0 });
                for k in 0..=cap {
                    let a = rule.eval(k + 1);
                    out.push(Slit::Horizontal { y: a, x0: -1.0, x1: 0.0 });
                    out.push(Slit::Horizontal { y: -a, x0: -1.0, x1: 0.0 });
                }
            }
            Some(Family::Petersen) => {
                for n in 0..=cap {
                    let x = petersen_abscissa(n);
                    let y = petersen_gap(n);
                    out.push(Slit::Vertical { x, y0: y, y1: f64::INFINITY });
                    out.push(Slit::Vertical { x, y0: f64::NEG_INFINITY, y1: -y });
                }
            }
            None => {}
        }
        out.extend_from_slice(&self.extra_slits);
        out
    }

    fn check_user_slits(&self) -> Result<()> {
        let near = |a: f64, b: f64| (a - b).abs() < 1e-12;
        let on_base_boundary = |z: Point| -> bool {
            match self.base {
                Base::Square => {
                    near(z.re.abs(), 1.0) || near(z.im.abs(), 1.0)
                }
                Base::HalfPlane => near(z.re, 0.0) || !is_finite_point(z),
                Base::Rect { x0, x1, y0, y1 } => {
                    near(z.re, x0) || near(z.re, x1) || near(z.im, y0) || near(z.im, y1)
                }
            }
        };
        let endpoints = |s: &Slit| -> [Point; 2] {
            match *s {
                Slit::Horizontal { y, x0, x1 } => [Point::new(x0, y), Point::new(x1, y)],
                Slit::Vertical { x, y0, y1 } => [Point::new(x, y0), Point::new(x, y1)],
            }
        };
        // closure check
        for s in &self.extra_slits {
            for e in endpoints(s) {
                let inside_closure = match self.base {
                    Base::Square => e.re >= -1.0 && e.re <= 1.0 && e.im >= -1.0 && e.im <= 1.0,
                    Base::HalfPlane => e.re >= 0.0 || !is_finite_point(e),
                    Base::Rect { x0, x1, y0, y1 } => {
                        e.re >= x0 && e.re <= x1 && e.im >= y0 && e.im <= y1
                    }
                };
                if !inside_closure {
                    return Err(Error::InvalidParameter(format!(
                        "slit endpoint ({}, {}) leaves the base closure",
                        e.re, e.im
                    )));
                }
            }
        }
        // attachment check: mark slits touching the base boundary, then
        // propagate through slit-slit contact
        let n = self.extra_slits.len();
        let mut attached = vec![false; n];
        for (i, s) in self.extra_slits.iter().enumerate() {
            attached[i] = endpoints(s).iter().any(|&e| on_base_boundary(e));
        }
        let touches = |a: &Slit, b: &Slit| -> bool {
            endpoints(a).iter().any(|&e| b.distance(e) < 1e-12)
                || endpoints(b).iter().any(|&e| a.distance(e) < 1e-12)
        };
        let mut changed = true;
        while changed {
            changed = false;
            for i in 0..n {
                if attached[i] {
                    continue;
                }
                if (0..n).any(|j| j != i && attached[j] && touches(&self.extra_slits[i], &self.extra_slits[j])) {
                    attached[i] = true;
                    changed = true;
                }
            }
        }
        if let Some(i) = attached.iter().position(|a| !a) {
            return Err(Error::InvalidParameter(format!(
                "slit {i} is not attached to the boundary; the complement would be disconnected"
            )));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// polylines
// ---------------------------------------------------------------------------

/// An ordered chain of points; consecutive vertices are distinct.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    vertices: Vec<Point>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidParameter("polyline needs at least one vertex".into()));
        }
        for (i, w) in vertices.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::InvalidParameter(format!(
                    "polyline vertices {i} and {} coincide",
                    i + 1
                )));
            }
        }
        Ok(Self { vertices })
    }

    /// Builds the polyline and verifies every closed segment stays inside
    /// `d` (exact rectilinear check plus a distance-oracle sweep).
    pub fn checked_in_domain(vertices: Vec<Point>, d: &SlitDomain) -> Result<Self> {
        let p = Self::new(vertices)?;
        for (i, w) in p.vertices.windows(2).enumerate() {
            if !d.segment_in_domain(w[0], w[1]) {
                return Err(Error::CurveExitsDomain(i));
            }
            for k in 1..8 {
                let t = k as f64 / 8.0;
                let z = w[0] + (w[1] - w[0]) * t;
                if d.dist_to_boundary(z).is_err() {
                    return Err(Error::CurveExitsDomain(i));
                }
            }
        }
        if p.vertices.len() == 1 && !d.contains(p.vertices[0]) {
            return Err(Error::CurveExitsDomain(0));
        }
        Ok(p)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn segment(from: Point, to: Point) -> Result<Self> {
        Self::new(vec![from, to])
    }

    /// Total Euclidean length.
    pub fn euclidean_length(&self) -> f64 {
        self.vertices.windows(2).map(|w| (w[1] - w[0]).norm()).sum()
    }
}

// ---------------------------------------------------------------------------
// file format
// ---------------------------------------------------------------------------

/// JSON domain description; field names are the wire contract.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DomainSpec {
    pub base: BaseSpec,
    pub family: Option<String>,
    #[serde(default)]
    pub params: ParamsSpec,
    pub truncation: Option<u64>,
    #[serde(default)]
    pub extra_slits: Vec<[f64; 4]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BaseSpec {
    Named(String),
    Rect { rect: [f64; 4] },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct ParamsSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
}

impl DomainSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(format!("domain spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("domain spec serializes")
    }

    pub fn build(&self) -> Result<SlitDomain> {
        let base = match &self.base {
            BaseSpec::Named(s) if s == "square" => Base::Square,
            BaseSpec::Named(s) if s == "halfplane" => Base::HalfPlane,
            BaseSpec::Named(s) => {
                return Err(Error::Format(format!("unknown base \"{s}\"")));
            }
            BaseSpec::Rect { rect } => {
                let [x0, x1, y0, y1] = *rect;
                if !(x0 < x1 && y0 < y1) {
                    return Err(Error::Format("degenerate rect base".into()));
                }
                Base::Rect { x0, x1, y0, y1 }
            }
        };
        let extra: Vec<Slit> = self
            .extra_slits
            .iter()
            .map(|&[x0, y0, x1, y1]| {
                if y0 == y1 {
                    Ok(Slit::Horizontal { y: y0, x0: x0.min(x1), x1: x0.max(x1) })
                } else if x0 == x1 {
                    Ok(Slit::Vertical { x: x0, y0: y0.min(y1), y1: y0.max(y1) })
                } else {
                    Err(Error::Format(format!(
                        "slit [{x0},{y0},{x1},{y1}] is not axis-aligned"
                    )))
                }
            })
            .collect::<Result<_>>()?;

        match self.family.as_deref() {
            Some("comb") => {
                if base != Base::Square {
                    return Err(Error::Format("comb family requires the square base".into()));
                }
                let rule = match self.params.rule.as_deref() {
                    None | Some("geometric") => SeqRule::Geometric {
                        ratio: self.params.ratio.unwrap_or(0.5),
                    },
                    Some("power") => SeqRule::Power {
                        exponent: self.params.exponent.ok_or_else(|| {
                            Error::Format("power rule requires \"exponent\"".into())
                        })?,
                    },
                    Some(other) => {
                        return Err(Error::Format(format!("unknown sequence rule \"{other}\"")));
                    }
                };
                let mut d = SlitDomain::comb(rule, self.truncation)?;
                d.extra_slits = extra;
                Ok(d)
            }
            Some("petersen") => {
                if base != Base::HalfPlane {
                    return Err(Error::Format(
                        "petersen family requires the halfplane base".into(),
                    ));
                }
                let mut d = SlitDomain::petersen(self.truncation)?;
                d.extra_slits = extra;
                Ok(d)
            }
            Some(other) => Err(Error::Format(format!("unknown family \"{other}\""))),
            None => SlitDomain::with_slits(base, extra),
        }
    }

    pub fn describe(d: &SlitDomain) -> Self {
        let base = match d.base {
            Base::Square => BaseSpec::Named("square".into()),
            Base::HalfPlane => BaseSpec::Named("halfplane".into()),
            Base::Rect { x0, x1, y0, y1 } => BaseSpec::Rect { rect: [x0, x1, y0, y1] },
        };
        let (family, params) = match d.family {
            Some(Family::Comb { rule }) => {
                let params = match rule {
                    SeqRule::Geometric { ratio } => ParamsSpec {
                        rule: Some("geometric".into()),
                        ratio: Some(ratio),
                        exponent: None,
                    },
                    SeqRule::Power { exponent } => ParamsSpec {
                        rule: Some("power".into()),
                        ratio: None,
                        exponent: Some(exponent),
                    },
                };
                (Some("comb".into()), params)
            }
            Some(Family::Petersen) => (Some("petersen".into()), ParamsSpec::default()),
            None => (None, ParamsSpec::default()),
        };
        let extra_slits = d
            .extra_slits
            .iter()
            .map(|s| match *s {
                Slit::Horizontal { y, x0, x1 } => [x0, y, x1, y],
                Slit::Vertical { x, y0, y1 } => [x, y0, x, y1],
            })
            .collect();
        DomainSpec { base, family, params, truncation: d.truncation, extra_slits }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(re: f64, im: f64) -> Point {
        Point::new(re, im)
    }

    #[test]
    fn default_comb_tooth_ordinates() {
        let rule = SeqRule::default();
        assert_eq!(rule.eval(1), 0.5);
        assert_eq!(rule.eval(2), 0.25);
        assert_eq!(rule.eval(3), 0.125);
        // eps_n = (a_n - a_{n+1})/2 = 2^-(n+2)
        assert_eq!(rule.half_gap(3), 0.03125);
    }

    #[test]
    fn comb_truncation_semantics() {
        // truncation 0 leaves L_0 and the pair at a_1 = 1/2 only
        let d = SlitDomain::comb_default(Some(0));
        assert!(!d.contains(pt(-0.5, 0.0))); // on L_0
        assert!(!d.contains(pt(-0.5, 0.5))); // on the a_1 tooth
        assert!(d.contains(pt(-0.5, 0.25))); // a_2 tooth not materialized
        let d_full = SlitDomain::comb_default(None);
        assert!(!d_full.contains(pt(-0.5, 0.25)));
    }

    #[test]
    fn invalid_sequences_rejected() {
        assert!(SlitDomain::comb(SeqRule::Geometric { ratio: 1.5 }, None).is_err());
        assert!(SlitDomain::comb(SeqRule::Geometric { ratio: 0.0 }, None).is_err());
        assert!(SlitDomain::comb(SeqRule::Power { exponent: -1.0 }, None).is_err());
    }

    #[test]
    fn petersen_parameters() {
        assert_eq!(petersen_abscissa(3), 0.125);
        let y3 = petersen_gap(3);
        assert!((y3 - (-27.0f64).exp() / 8.0).abs() < 1e-25, "y3 = {y3}");
        assert!((y3 - 2.349411020673854e-13).abs() < 1e-26);
        assert_eq!(petersen_midpoint(3), 0.09375);
        assert_eq!(petersen_half_gap(3), 0.03125);
        assert!(SlitDomain::petersen(Some(6)).is_err());
        assert!(SlitDomain::petersen(Some(5)).is_ok());
        assert!(SlitDomain::petersen(None).is_ok());
    }

    #[test]
    fn comb_containment_examples() {
        let d = SlitDomain::comb_default(None);
        assert!(!d.contains(pt(-0.5, 0.0)));
        assert!(d.contains(pt(0.5, 0.0)));
        assert!(!d.contains(pt(1.5, 0.0)));
        assert!(!d.contains(pt(-0.25, 0.125))); // on a_3 tooth
        assert!(d.contains(pt(0.25, 0.125))); // right of the teeth
    }

    #[test]
    fn petersen_containment_examples() {
        let d = SlitDomain::petersen(None).unwrap();
        let y2 = petersen_gap(2);
        assert!(!d.contains(pt(0.25, 2.0 * y2)));
        assert!(d.contains(pt(0.25, 0.5 * y2)));
        assert!(d.contains(pt(0.3, 100.0)));
        assert!(!d.contains(pt(-0.1, 0.0)));
    }

    #[test]
    fn comb_distance_examples() {
        let d = SlitDomain::comb_default(None);
        assert!((d.dist_to_boundary(pt(0.5, 0.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!((d.dist_to_boundary(pt(-0.5, 0.375)).unwrap() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn petersen_distance_example() {
        let d = SlitDomain::petersen(None).unwrap();
        let z = pt(petersen_midpoint(3), 1.0);
        assert!((d.dist_to_boundary(z).unwrap() - 0.03125).abs() < 1e-15);
    }

    #[test]
    fn closed_form_distance_matches_brute_force() {
        let comb = SlitDomain::comb_default(None);
        let pet = SlitDomain::petersen(None).unwrap();
        let comb_slits = comb.materialized_slits(40);
        let pet_slits = pet.materialized_slits(40);

        let mut state = 0x853c49e6748fea9bu64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        let mut tested = 0;
        while tested < 10_000 {
            let z = pt(2.0 * next() - 1.0, 2.0 * next() - 1.0);
            if comb.contains(z) {
                let fast = comb.dist_to_boundary(z).unwrap();
                let brute = comb_slits
                    .iter()
                    .map(|s| s.distance(z))
                    .fold(comb.base().boundary_distance(z), f64::min);
                assert!(
                    (fast - brute).abs() <= 1e-14 * brute.max(1e-300),
                    "comb at {z}: {fast} vs {brute}"
                );
                tested += 1;
            }
            let w = pt(2.0 * next(), 4.0 * next() - 2.0);
            if pet.contains(w) {
                let fast = pet.dist_to_boundary(w).unwrap();
                let brute = pet_slits
                    .iter()
                    .map(|s| s.distance(w))
                    .fold(w.re, f64::min);
                assert!(
                    (fast - brute).abs() <= 1e-14 * brute.max(1e-300),
                    "petersen at {w}: {fast} vs {brute}"
                );
            }
        }
    }

    #[test]
    fn distance_monotone_under_truncation() {
        let d2 = SlitDomain::comb_default(Some(2));
        let d3 = SlitDomain::comb_default(Some(3));
        let dinf = SlitDomain::comb_default(None);
        for z in [pt(-0.5, 0.05), pt(0.3, 0.01), pt(-0.9, 0.2), pt(0.1, -0.07)] {
            let a = d2.dist_to_boundary(z).unwrap();
            let b = d3.dist_to_boundary(z).unwrap();
            let c = dinf.dist_to_boundary(z).unwrap();
            assert!(a >= b && b >= c, "at {z}: {a} {b} {c}");
        }
    }

    #[test]
    fn distance_ball_contains_no_boundary_point() {
        let d = SlitDomain::comb_default(None);
        for z in [pt(-0.5, 0.3), pt(0.2, -0.4), pt(-0.8, 0.6), pt(0.7, 0.01)] {
            let r = d.dist_to_boundary(z).unwrap();
            for k in 0..64 {
                let th = 2.0 * std::f64::consts::PI * k as f64 / 64.0;
                let w = z + pt(0.999 * r * th.cos(), 0.999 * r * th.sin());
                assert!(d.contains(w), "boundary inside ball at {w}");
            }
        }
    }

    #[test]
    fn distance_vanishes_approaching_slit() {
        let d = SlitDomain::comb_default(None);
        let mut prev = f64::INFINITY;
        for k in 1..=10 {
            let z = pt(-0.5, 0.25 + 2f64.powi(-(k + 3)));
            let dist = d.dist_to_boundary(z).unwrap();
            assert!(dist < prev);
            assert!((dist - 2f64.powi(-(k + 3))).abs() < 1e-15);
            prev = dist;
        }
    }

    #[test]
    fn segment_checks_against_infinite_family() {
        let d = SlitDomain::comb_default(None);
        // crosses the a_2 tooth
        assert!(!d.segment_in_domain(pt(-0.5, 0.2), pt(-0.5, 0.3)));
        // stays right of all teeth
        assert!(d.segment_in_domain(pt(0.5, 0.2), pt(0.5, -0.3)));
        // crosses L_0 on the left
        assert!(!d.segment_in_domain(pt(-0.5, 0.1), pt(-0.5, -0.1)));
        // crosses the level of a tooth but only at positive abscissa
        assert!(d.segment_in_domain(pt(0.3, 0.2), pt(0.3, 0.3)));
        // diagonal crossing a deep tooth
        assert!(!d.segment_in_domain(pt(-0.2, 0.010), pt(-0.1, 0.020))); // a_6 = 0.015625

        let p = SlitDomain::petersen(None).unwrap();
        assert!(!p.segment_in_domain(pt(0.3, 1.0), pt(0.2, 1.0))); // crosses x_2 ray
        assert!(p.segment_in_domain(pt(1.5, 0.0), pt(2.0, 0.0)));
        assert!(p.segment_in_domain(pt(0.3, 1e-6), pt(0.2, -1e-6))); // through the x_2 gap
    }

    #[test]
    fn polyline_validation() {
        let d = SlitDomain::comb_default(None);
        assert!(Polyline::checked_in_domain(vec![pt(0.5, 0.0), pt(0.5, 0.5)], &d).is_ok());
        assert!(matches!(
            Polyline::checked_in_domain(vec![pt(-0.5, 0.2), pt(-0.5, 0.3)], &d),
            Err(Error::CurveExitsDomain(0))
        ));
        assert!(Polyline::new(vec![pt(0.0, 0.0), pt(0.0, 0.0)]).is_err());
    }

    #[test]
    fn user_slits_attachment() {
        // attached to the square side: fine
        let ok = SlitDomain::with_slits(
            Base::Square,
            vec![Slit::Horizontal { y: 0.3, x0: -1.0, x1: 0.0 }],
        );
        assert!(ok.is_ok());
        // floating slit: complement disconnected
        let bad = SlitDomain::with_slits(
            Base::Square,
            vec![Slit::Horizontal { y: 0.3, x0: -0.5, x1: 0.0 }],
        );
        assert!(bad.is_err());
        // chain attachment through another slit
        let chain = SlitDomain::with_slits(
            Base::Square,
            vec![
                Slit::Horizontal { y: 0.3, x0: -1.0, x1: 0.0 },
                Slit::Vertical { x: 0.0, y0: 0.3, y1: 0.6 },
            ],
        );
        assert!(chain.is_ok());
    }

    #[test]
    fn domain_spec_roundtrip() {
        let text = r#"{
            "base": "square",
            "family": "comb",
            "params": {"rule": "geometric", "ratio": 0.5},
            "truncation": 4,
            "extra_slits": []
        }"#;
        let spec = DomainSpec::from_json(text).unwrap();
        let d = spec.build().unwrap();
        assert_eq!(d.truncation(), Some(4));
        let spec2 = DomainSpec::describe(&d);
        let d2 = spec2.build().unwrap();
        assert_eq!(d, d2);

        let rect = r#"{"base": {"rect": [0.0, 2.0, -1.0, 1.0]}, "family": null,
                       "truncation": null, "extra_slits": [[0.0, 0.5, 1.0, 0.5]]}"#;
        let d3 = DomainSpec::from_json(rect).unwrap().build().unwrap();
        assert!(d3.contains(pt(1.5, 0.0)));
        assert!(!d3.contains(pt(0.5, 0.5)));
    }

    #[test]
    fn symmetry_detection() {
        assert!(SlitDomain::comb_default(Some(3)).is_symmetric());
        assert!(SlitDomain::petersen(Some(2)).unwrap().is_symmetric());
        let asym = SlitDomain::with_slits(
            Base::Square,
            vec![Slit::Horizontal { y: 0.3, x0: -1.0, x1: 0.0 }],
        )
        .unwrap();
        assert!(!asym.is_symmetric());
    }
}
