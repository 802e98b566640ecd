//! Points of the closed unit ball, the Euclidean and hyperbolic metrics on it,
//! and reflections in spheres.
//!
//! Everything here works in the Poincaré ball model of hyperbolic n-space:
//! the open unit ball carries the hyperbolic metric and the unit sphere is the
//! sphere at infinity. Boundary points are ordinary [`Point`] values whose
//! norm is one (within [`TOL_NORM`]); Euclidean operations accept them, the
//! hyperbolic distance rejects them.

use std::f64::consts::LN_2;
use std::fmt;

use nalgebra::DVector;

use crate::error::{Error, Result};

/// Dense real vector; used for points, sphere centers and probe vectors.
pub type Vector = DVector<f64>;

/// Norm tolerance separating interior from boundary points.
pub const TOL_NORM: f64 = 1e-9;
/// Minimal distance from a sphere center for a reflection to be evaluated.
pub const TOL_CENTER: f64 = 1e-12;
/// Residual tolerance for `|c|^2 = 1 + r^2`.
pub const TOL_ORTHOGONAL: f64 = 1e-9;

/// Above this argument arcosh switches to its logarithmic form.
const ARCOSH_LOG_THRESHOLD: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    Interior,
    Boundary,
}

/// A point of the closed unit ball `B^n`, `n >= 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vector,
}

impl Point {
    pub fn new(coords: Vector) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DimensionTooSmall(coords.len()));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = coords.norm();
        if norm > 1.0 + TOL_NORM {
            return Err(Error::OutsideBall { norm });
        }
        Ok(Self { coords })
    }

    pub fn from_slice(coords: &[f64]) -> Result<Self> {
        Self::new(Vector::from_column_slice(coords))
    }

    /// The origin `O`.
    pub fn origin(dim: usize) -> Self {
        Self {
            coords: Vector::zeros(dim),
        }
    }

    /// Radial projection of a nonzero vector onto the unit sphere.
    pub fn boundary_direction(v: &Vector) -> Result<Self> {
        let norm = v.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::NonFinite);
        }
        Self::new(v / norm)
    }

    /// Builds a point from a vector that may sit marginally outside the
    /// ball after floating-point evaluation: boundary-close vectors are
    /// renormalized to unit norm.
    pub(crate) fn snap(v: Vector) -> Result<Self> {
        let norm = v.norm();
        if (norm - 1.0).abs() <= TOL_NORM {
            Self::new(v / norm)
        } else {
            Self::new(v)
        }
    }

    pub fn coords(&self) -> &Vector {
        &self.coords
    }

    pub fn into_coords(self) -> Vector {
        self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    pub fn kind(&self) -> PointKind {
        if self.norm() < 1.0 - TOL_NORM {
            PointKind::Interior
        } else {
            PointKind::Boundary
        }
    }

    pub fn is_interior(&self) -> bool {
        self.kind() == PointKind::Interior
    }

    pub fn is_boundary(&self) -> bool {
        self.kind() == PointKind::Boundary
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub fn euclidean_distance(x: &Point, y: &Point) -> Result<f64> {
    check_dims(x.dim(), y.dim())?;
    Ok((x.coords() - y.coords()).norm())
}

/// `arcosh(1 + delta)` for `delta >= 0`, accurate for small and huge `delta`.
pub(crate) fn arcosh_1p(delta: f64) -> f64 {
    if 1.0 + delta > ARCOSH_LOG_THRESHOLD {
        // arcosh z = ln(2z) - O(z^-2), with z = 1 + delta
        LN_2 + delta.ln() + (1.0 / delta).ln_1p()
    } else {
        (delta + (delta * (delta + 2.0)).sqrt()).ln_1p()
    }
}

/// Hyperbolic distance between raw vectors of norm < 1. Returns `+inf` when
/// either argument reaches the unit sphere. No tolerance classification.
pub(crate) fn hyperbolic_distance_raw(x: &Vector, y: &Vector) -> f64 {
    let dx = 1.0 - x.norm_squared();
    let dy = 1.0 - y.norm_squared();
    if dx <= 0.0 || dy <= 0.0 {
        return f64::INFINITY;
    }
    let d2 = (x - y).norm_squared();
    if d2 == 0.0 {
        return 0.0;
    }
    let delta = 2.0 * d2 / (dx * dy);
    if delta.is_finite() && 1.0 + delta <= ARCOSH_LOG_THRESHOLD {
        arcosh_1p(delta)
    } else {
        // log form; never forms the (possibly overflowing) quotient
        let log_delta = LN_2 + d2.ln() - dx.ln() - dy.ln();
        LN_2 + log_delta + (-log_delta).exp().ln_1p()
    }
}

/// `d_H(x, y) = arcosh(1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2)))`.
pub fn hyperbolic_distance(x: &Point, y: &Point) -> Result<f64> {
    check_dims(x.dim(), y.dim())?;
    for p in [x, y] {
        if !p.is_interior() {
            return Err(Error::InfiniteDistance { norm: p.norm() });
        }
    }
    Ok(hyperbolic_distance_raw(x.coords(), y.coords()))
}

/// Hyperbolic distance from `O` to an interior point of Euclidean norm `t`.
pub fn radial_distance(t: f64) -> f64 {
    ((1.0 + t) / (1.0 - t)).ln()
}

/// The sphere `S(c, r)` in `R^n`, viewed also as the closed Euclidean disk it
/// bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct InversionSphere {
    center: Vector,
    radius: f64,
    boundary_orthogonal: bool,
}

impl InversionSphere {
    pub fn new(center: Vector, radius: f64) -> Result<Self> {
        if center.len() < 2 {
            return Err(Error::DimensionTooSmall(center.len()));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidRadius(radius));
        }
        Ok(Self {
            center,
            radius,
            boundary_orthogonal: false,
        })
    }

    /// The sphere with the given center orthogonal to the unit sphere:
    /// radius `sqrt(|c|^2 - 1)`.
    pub fn boundary_orthogonal(center: Vector) -> Result<Self> {
        let norm_sq = center.norm_squared();
        if !(norm_sq > 1.0) {
            return Err(Error::NoOrthogonalSphere {
                norm: norm_sq.sqrt(),
            });
        }
        let mut s = Self::new(center, (norm_sq - 1.0).sqrt())?;
        s.boundary_orthogonal = true;
        Ok(s)
    }

    /// Flags the sphere as boundary-orthogonal after checking the residual.
    pub fn certify_orthogonal(mut self) -> Result<Self> {
        let residual = self.orthogonality_residual();
        if residual > TOL_ORTHOGONAL {
            return Err(Error::NotBoundaryOrthogonal { residual });
        }
        self.boundary_orthogonal = true;
        Ok(self)
    }

    /// Sphere with the given center and `r^2` supplied directly; used by the
    /// canonicalization where `r^2` is known more accurately than `|c|^2 - 1`.
    pub(crate) fn orthogonal_unchecked(center: Vector, radius: f64) -> Self {
        Self {
            center,
            radius,
            boundary_orthogonal: true,
        }
    }

    pub fn center(&self) -> &Vector {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn is_boundary_orthogonal(&self) -> bool {
        self.boundary_orthogonal
    }

    pub fn orthogonality_residual(&self) -> f64 {
        (self.center.norm_squared() - 1.0 - self.radius * self.radius).abs()
    }

    /// `i(x) = c + (r / |x - c|)^2 (x - c)`.
    pub fn reflect(&self, x: &Vector) -> Result<Vector> {
        check_dims(self.dim(), x.len())?;
        let d = x - &self.center;
        let d2 = d.norm_squared();
        if d2.sqrt() <= TOL_CENTER {
            return Err(Error::SphereCenterSingularity);
        }
        Ok(&self.center + d * (self.radius * self.radius / d2))
    }

    /// `d_E(i(x), i(y)) / d_E(x, y) = r^2 / (|x - c| |y - c|)`.
    pub fn distance_ratio(&self, x: &Vector, y: &Vector) -> Result<f64> {
        check_dims(self.dim(), x.len())?;
        check_dims(self.dim(), y.len())?;
        let dx = (x - &self.center).norm();
        let dy = (y - &self.center).norm();
        if dx <= TOL_CENTER || dy <= TOL_CENTER {
            return Err(Error::SphereCenterSingularity);
        }
        if x == y {
            return Err(Error::UndefinedRatio);
        }
        Ok(self.radius * self.radius / (dx * dy))
    }

    /// Signed Euclidean gap `|x - c| - r` (negative inside the disk).
    pub fn gap(&self, x: &Vector) -> f64 {
        (x - &self.center).norm() - self.radius
    }

    /// Closed-disk membership with an absolute slack.
    pub fn contains(&self, x: &Vector, slack: f64) -> bool {
        self.gap(x) <= slack
    }

    /// Smallest norm attained on the closed disk, `|c| - r`.
    pub fn min_norm(&self) -> f64 {
        self.center.norm() - self.radius
    }

    /// Hyperbolic distance from an interior vector to the half-space cut out
    /// by this (boundary-orthogonal) disk; zero inside.
    ///
    /// `sinh d = (|x - c|^2 - r^2) / (r (1 - |x|^2))`.
    pub fn hyperbolic_distance_to(&self, x: &Vector) -> f64 {
        let power = (x - &self.center).norm_squared() - self.radius * self.radius;
        if power <= 0.0 {
            return 0.0;
        }
        let depth = 1.0 - x.norm_squared();
        if depth <= 0.0 {
            return f64::INFINITY;
        }
        (power / (self.radius * depth)).asinh()
    }

    /// Image of this sphere under the reflection in `mirror`. Returns `None`
    /// when the mirror's center lies inside or on this disk, in which case
    /// the image of the disk is unbounded.
    pub fn reflected_in(&self, mirror: &InversionSphere) -> Option<InversionSphere> {
        let d = &self.center - &mirror.center;
        let power = d.norm_squared() - self.radius * self.radius;
        if !(power > 0.0) {
            return None;
        }
        let k = mirror.radius * mirror.radius / power;
        Some(Self {
            center: &mirror.center + d * k,
            radius: k * self.radius,
            boundary_orthogonal: self.boundary_orthogonal && mirror.boundary_orthogonal,
        })
    }

    pub(crate) fn transformed(&self, rotation: &nalgebra::DMatrix<f64>) -> InversionSphere {
        Self {
            center: rotation * &self.center,
            radius: self.radius,
            boundary_orthogonal: self.boundary_orthogonal,
        }
    }
}

/// Spec-level alias: `reflect_in_sphere(S, x)`.
pub fn reflect_in_sphere(sphere: &InversionSphere, x: &Vector) -> Result<Vector> {
    sphere.reflect(x)
}

pub fn reflection_distance_ratio(sphere: &InversionSphere, x: &Vector, y: &Vector) -> Result<f64> {
    sphere.distance_ratio(x, y)
}

pub fn make_boundary_orthogonal_sphere(center: Vector) -> Result<InversionSphere> {
    InversionSphere::boundary_orthogonal(center)
}
