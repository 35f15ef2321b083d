//! Hyperbolic geometry, certified metric bounds, numerical conformal
//! mapping and holomorphic iteration on planar slit domains.
//!
//! The crate is organized around a handful of cooperating modules:
//!
//! - [`hyperbolic`]: closed forms for the model domains (disk, right
//!   half-plane, strip) at curvature -4: densities, distances,
//!   horocycles, Busemann functions, Cayley transform.
//! - [`domain`]: exact slit-domain descriptions (a box or half-plane
//!   minus rectilinear slits, including two built-in infinite families)
//!   with closed-form containment and distance-to-boundary oracles.
//! - [`bounds`]: certified two-sided bounds on hyperbolic lengths and
//!   distances from the quasihyperbolic sandwich, corridor lower bounds
//!   and a grid shortest-path upper bound.
//! - [`conformal`]: a zipper-style numerical Riemann map from the unit
//!   disk onto truncated slit domains with forward/inverse evaluation,
//!   boundary correspondence and horocycle pushforward.
//! - [`dynamics`]: holomorphic self-maps of disk/half-plane, orbits,
//!   Denjoy-Wolff point detection, divergence rates, horocycle
//!   invariance checks.
//! - [`cluster`]: unrestricted / non-tangential / horospheric cluster
//!   sets of a mapped boundary point, H-limit testing, horosphere
//!   boundary contact sets.
//! - [`reports`]: the two inequality-certificate reports for the comb
//!   and slit half-plane constructions, shared by the CLI.

pub mod bounds;
pub mod cluster;
pub mod conformal;
pub mod domain;
pub mod dynamics;
pub mod error;
pub mod hyperbolic;
pub mod point;
pub mod reports;

pub use error::{Error, Result};
pub use point::{chordal_distance, is_finite_point, is_infinite_point, Point, POINT_AT_INFINITY};
