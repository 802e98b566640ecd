//! Möbius isometries of the ball in canonical form `γ = A ∘ i`, where `A` is
//! orthogonal and `i` is the reflection in the isometric sphere of `γ`
//! (absent exactly when `γ` fixes the origin).
//!
//! Composition stays in canonical form: `A2 i2 A1 i1 = (A2 A1) ∘ i_T ∘ i1`
//! with `T = A1ᵀ S2`, and the pair of reflections `i_T ∘ i1` is rewritten in
//! closed form. Reading the isometric sphere off `γ⁻¹(O)` in coordinates would
//! lose all precision once `γ⁻¹(O)` sits within machine epsilon of the
//! sphere at infinity; the closed form carries `1 - |γ⁻¹(O)|^2` as a product
//! instead, so deep words keep full relative precision in `r_γ`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::{check_dims, InversionSphere, Point, Vector, TOL_ORTHOGONAL};
use crate::word::Word;

/// `|γ⁻¹(O)|` at or below this is treated as "γ fixes O".
pub const TOL_FIXES_ORIGIN: f64 = 1e-9;
/// Max-entry residual allowed in `AᵀA - I`.
pub const TOL_ROTATION: f64 = 1e-9;

pub fn orthogonality_residual(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    (m.transpose() * m - DMatrix::<f64>::identity(n, n)).amax()
}

#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    Reflect(InversionSphere),
    Orthogonal(DMatrix<f64>),
}

/// Factors listed in application order: the first factor acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorList {
    dim: usize,
    factors: Vec<Factor>,
}

impl FactorList {
    /// The empty list, designating the identity.
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            factors: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn push(&mut self, factor: Factor) -> &mut Self {
        self.factors.push(factor);
        self
    }

    pub fn reflect(mut self, sphere: InversionSphere) -> Self {
        self.factors.push(Factor::Reflect(sphere));
        self
    }

    pub fn orthogonal(mut self, m: DMatrix<f64>) -> Self {
        self.factors.push(Factor::Orthogonal(m));
        self
    }

    pub fn extend(&mut self, other: &FactorList) {
        self.factors.extend(other.factors.iter().cloned());
    }

    fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::DimensionTooSmall(self.dim));
        }
        for f in &self.factors {
            match f {
                Factor::Reflect(s) => {
                    check_dims(self.dim, s.dim())?;
                    let residual = s.orthogonality_residual();
                    if residual > TOL_ORTHOGONAL {
                        return Err(Error::NotBoundaryOrthogonal { residual });
                    }
                }
                Factor::Orthogonal(m) => {
                    check_dims(self.dim, m.nrows())?;
                    check_dims(self.dim, m.ncols())?;
                    let residual = orthogonality_residual(m);
                    if residual > TOL_ROTATION {
                        return Err(Error::NotOrthogonalMatrix { residual });
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies the composite map.
    pub fn forward(&self, x: &Vector) -> Result<Vector> {
        let mut y = x.clone();
        for f in &self.factors {
            y = match f {
                Factor::Reflect(s) => s.reflect(&y)?,
                Factor::Orthogonal(m) => m * y,
            };
        }
        Ok(y)
    }

    /// Applies the inverse of the composite map.
    pub fn backward(&self, x: &Vector) -> Result<Vector> {
        let mut y = x.clone();
        for f in self.factors.iter().rev() {
            y = match f {
                Factor::Reflect(s) => s.reflect(&y)?,
                Factor::Orthogonal(m) => m.tr_mul(&y),
            };
        }
        Ok(y)
    }
}

/// A Möbius isometry of `B^n` stored as `A ∘ i` plus the word that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    rotation: DMatrix<f64>,
    inversion: Option<InversionSphere>,
    word: Word,
}

impl Isometry {
    pub fn identity(dim: usize) -> Self {
        Self {
            rotation: DMatrix::identity(dim, dim),
            inversion: None,
            word: Word::empty(),
        }
    }

    /// Canonicalizes a composition of reflections and orthogonal maps.
    pub fn from_factors(factors: &FactorList) -> Result<Self> {
        factors.validate()?;
        let n = factors.dim();
        let mut acc = Self::identity(n);
        for f in factors.factors() {
            let step = match f {
                Factor::Reflect(s) => Self {
                    rotation: DMatrix::identity(n, n),
                    inversion: Some(s.clone()),
                    word: Word::empty(),
                },
                Factor::Orthogonal(m) => Self {
                    rotation: m.clone(),
                    inversion: None,
                    word: Word::empty(),
                },
            };
            acc = step.compose_canonical(&acc)?;
        }
        Ok(acc)
    }

    /// `self ∘ other` without touching words:
    /// `A2 i2 A1 i1 = (A2 A1) ∘ i_T ∘ i1` with `T = A1ᵀ S2`.
    fn compose_canonical(&self, other: &Isometry) -> Result<Isometry> {
        let outer = &self.rotation * &other.rotation;
        let t = self
            .inversion
            .as_ref()
            .map(|s2| s2.transformed(&other.rotation.transpose()));
        let (rotation, inversion) = match (t, &other.inversion) {
            (None, s1) => (outer, s1.clone()),
            (Some(t), None) => (outer, Some(t)),
            (Some(t), Some(s1)) => {
                let (b, s) = compose_reflections(&t, s1)?;
                (outer * b, s)
            }
        };
        Ok(Self {
            rotation,
            inversion,
            word: Word::empty(),
        })
    }

    pub fn with_word(mut self, word: Word) -> Self {
        self.word = word;
        self
    }

    /// `[i, A]` in application order.
    pub fn factors(&self) -> FactorList {
        let mut fl = FactorList::new(self.dim());
        if let Some(s) = &self.inversion {
            fl.push(Factor::Reflect(s.clone()));
        }
        fl.push(Factor::Orthogonal(self.rotation.clone()));
        fl
    }

    pub fn dim(&self) -> usize {
        self.rotation.nrows()
    }

    pub fn rotation(&self) -> &DMatrix<f64> {
        &self.rotation
    }

    pub fn inversion(&self) -> Option<&InversionSphere> {
        self.inversion.as_ref()
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn fixes_origin(&self) -> bool {
        self.inversion.is_none()
    }

    /// `γ(x) = A i(x)` on a raw vector.
    pub fn apply_vector(&self, x: &Vector) -> Result<Vector> {
        check_dims(self.dim(), x.len())?;
        Ok(match &self.inversion {
            Some(s) => &self.rotation * s.reflect(x)?,
            None => &self.rotation * x,
        })
    }

    /// `γ⁻¹(x) = i(Aᵀ x)`.
    pub fn apply_inverse_vector(&self, x: &Vector) -> Result<Vector> {
        check_dims(self.dim(), x.len())?;
        let y = self.rotation.tr_mul(x);
        match &self.inversion {
            Some(s) => s.reflect(&y),
            None => Ok(y),
        }
    }

    /// Applies the isometry to a point of the closed ball; boundary images are
    /// renormalized to unit norm.
    pub fn apply(&self, x: &Point) -> Result<Point> {
        Point::snap(self.apply_vector(x.coords())?)
    }

    /// `self ∘ other`; the word is the reduced concatenation.
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.compose_canonical(other)?.with_word(self.word.concat(&other.word)))
    }

    /// `(A ∘ i_S)⁻¹ = Aᵀ ∘ i_{A S}`, exact in canonical form.
    pub fn inverse(&self) -> Isometry {
        let rotation = self.rotation.transpose();
        let inversion = self.inversion.as_ref().map(|s| s.transformed(&self.rotation));
        Self {
            rotation,
            inversion,
            word: self.word.inverse(),
        }
    }

    /// The sphere `S(c_γ, r_γ)` of the inversion part.
    pub fn isometric_sphere(&self) -> Result<&InversionSphere> {
        self.inversion.as_ref().ok_or(Error::NoIsometricSphere)
    }

    /// `r_γ`, or `None` for elements fixing the origin.
    pub fn isometric_radius(&self) -> Option<f64> {
        self.inversion.as_ref().map(InversionSphere::radius)
    }

    /// Image of a boundary-orthogonal sphere (as a disk) under the isometry.
    /// `None` when the image disk is unbounded.
    pub fn map_sphere(&self, s: &InversionSphere) -> Option<InversionSphere> {
        let reflected = match &self.inversion {
            Some(inv) => s.reflected_in(inv)?,
            None => s.clone(),
        };
        Some(reflected.transformed(&self.rotation))
    }

    /// Max residual of `AᵀA - I`.
    pub fn rotation_residual(&self) -> f64 {
        orthogonality_residual(&self.rotation)
    }
}

/// Householder reflection `I - 2 u uᵀ` for a unit vector `u`.
fn householder(u: &Vector) -> DMatrix<f64> {
    let n = u.len();
    DMatrix::identity(n, n) - 2.0 * u * u.transpose()
}

/// Canonical form `B ∘ i_{S'}` of `i_T ∘ i_S`.
///
/// With `p = i_T(O)` and `q = i_S(p) = (i_T i_S)⁻¹(O)`, the depth
/// `1 - |q|^2 = r_S^2 (1 - |p|^2) / |p - c_S|^2` is evaluated in product form,
/// so tiny isometric spheres keep full relative precision. `B` is the
/// derivative at `O` of `i_T ∘ i_S ∘ i_{S'}`, a product of three Householder
/// reflections (the conformal factors multiply to one).
fn compose_reflections(t: &InversionSphere, s: &InversionSphere) -> Result<(DMatrix<f64>, Option<InversionSphere>)> {
    let ct = t.center();
    let cs = s.center();
    let ct2 = ct.norm_squared();
    let p = ct / ct2;
    let depth_p = t.radius() * t.radius() / ct2;
    let u = &p - cs;
    let u2 = u.norm_squared();
    if u2 == 0.0 {
        return Err(Error::SphereCenterSingularity);
    }
    let rs2 = s.radius() * s.radius();
    let q = cs + &u * (rs2 / u2);
    let q_norm = q.norm();
    let h_t = householder(&(ct / ct2.sqrt()));
    let h_u = householder(&(&u / u2.sqrt()));
    if q_norm <= TOL_FIXES_ORIGIN {
        // i_T ∘ i_S fixes O (up to rounding): its derivative there.
        let cs_norm = cs.norm();
        let w = cs / (cs_norm * cs_norm) - ct;
        let h_w = householder(&(&w / w.norm()));
        return Ok((h_w * householder(&(cs / cs_norm)), None));
    }
    let depth_q = rs2 * depth_p / u2;
    let q2 = if depth_q > 0.5 { q_norm * q_norm } else { 1.0 - depth_q };
    let r = (depth_q / q2).sqrt();
    let dir = &q / q_norm;
    let b = h_t * h_u * householder(&dir);
    let sphere = InversionSphere::orthogonal_unchecked(dir * (1.0 + r * r).sqrt(), r);
    Ok((b, Some(sphere)))
}

/// `d_E(O, γO) = 1 / sqrt(1 + r_γ^2)`.
pub fn orbit_norm_from_radius(r: f64) -> f64 {
    1.0 / (1.0 + r * r).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn v(c: &[f64]) -> Vector {
        Vector::from_column_slice(c)
    }

    fn sphere(c: &[f64]) -> InversionSphere {
        InversionSphere::boundary_orthogonal(v(c)).unwrap()
    }

    fn g1() -> Isometry {
        let fl = FactorList::new(2)
            .reflect(sphere(&[1.2, 0.0]))
            .reflect(sphere(&[-1.2, 0.0]));
        Isometry::from_factors(&fl).unwrap()
    }

    fn rotation(theta: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()])
    }

    #[test]
    fn identity_examples() {
        let id = Isometry::identity(2);
        let x = Point::from_slice(&[0.3, 0.4]).unwrap();
        assert_eq!(id.apply(&x).unwrap(), x);
        assert!(id.inversion().is_none());
        assert_eq!(id.rotation(), &DMatrix::<f64>::identity(2, 2));
        let g = g1();
        let c = id.compose(&g).unwrap();
        let y = c.apply(&x).unwrap();
        assert_abs_diff_eq!((y.coords() - g.apply(&x).unwrap().coords()).norm(), 0.0, epsilon = 1e-9);
        assert_eq!(id.inverse(), id);
    }

    #[test]
    fn g1_canonical_form() {
        let g = g1();
        let img = g.apply(&Point::origin(2)).unwrap();
        // two chained reflections: (5/6, 0) then through S((-1.2,0), r)
        assert_abs_diff_eq!(img.coords()[0], -0.983606557377049, epsilon = 1e-12);
        assert_abs_diff_eq!(img.coords()[1], 0.0, epsilon = 1e-15);
        let s = g.isometric_sphere().unwrap();
        assert_abs_diff_eq!(s.center()[0], 1.0 / 0.983606557377049, epsilon = 1e-12);
        assert_abs_diff_eq!(s.center()[0], 1.01666, epsilon = 1e-5);
        assert_abs_diff_eq!(s.radius(), 11.0 / 60.0, epsilon = 1e-14);
        assert!(s.orthogonality_residual() < 1e-12);
        assert!(g.rotation_residual() < 1e-12);
        let back = g.inverse().apply(&Point::origin(2)).unwrap();
        assert_abs_diff_eq!(back.coords()[0], 0.983606557377049, epsilon = 1e-12);
    }

    #[test]
    fn rotation_only() {
        let fl = FactorList::new(2).orthogonal(rotation(std::f64::consts::FRAC_PI_2));
        let r = Isometry::from_factors(&fl).unwrap();
        assert!(r.fixes_origin());
        assert!(matches!(r.isometric_sphere(), Err(Error::NoIsometricSphere)));
        let y = r.apply(&Point::from_slice(&[0.5, 0.0]).unwrap()).unwrap();
        assert_abs_diff_eq!(y.coords()[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y.coords()[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn single_reflection_is_involution() {
        let s = sphere(&[0.3, -1.4]);
        let r = Isometry::from_factors(&FactorList::new(2).reflect(s.clone())).unwrap();
        let sq = r.compose(&r).unwrap();
        assert!(sq.fixes_origin());
        assert!((sq.rotation() - DMatrix::<f64>::identity(2, 2)).amax() < 1e-9);
        let twice = Isometry::from_factors(&FactorList::new(2).reflect(s.clone()).reflect(s.clone())).unwrap();
        assert!(twice.fixes_origin());
        // a lone reflection is its own canonical sphere with A = I
        assert_abs_diff_eq!((r.isometric_sphere().unwrap().center() - s.center()).norm(), 0.0, epsilon = 1e-12);
        assert!((r.rotation() - DMatrix::<f64>::identity(2, 2)).amax() < 1e-12);
    }

    #[test]
    fn from_factors_rejects_bad_input() {
        let bad = InversionSphere::new(v(&[1.2, 0.0]), 0.5).unwrap();
        assert!(matches!(
            Isometry::from_factors(&FactorList::new(2).reflect(bad)),
            Err(Error::NotBoundaryOrthogonal { .. })
        ));
        let shear = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(
            Isometry::from_factors(&FactorList::new(2).orthogonal(shear)),
            Err(Error::NotOrthogonalMatrix { .. })
        ));
        assert!(matches!(
            Isometry::from_factors(&FactorList::new(2).reflect(sphere(&[0.0, 0.0, 2.0]))),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn compose_matches_pointwise() {
        let g = g1();
        let gg = g.compose(&g).unwrap();
        let o = Point::origin(2);
        let direct = g.apply(&g.apply(&o).unwrap()).unwrap();
        assert_abs_diff_eq!((gg.apply(&o).unwrap().coords() - direct.coords()).norm(), 0.0, epsilon = 1e-9);
        let id = g.compose(&g.inverse()).unwrap();
        assert!(id.fixes_origin());
        assert!(id.word().is_empty());
        assert!((id.rotation() - DMatrix::<f64>::identity(2, 2)).amax() < 1e-9);
    }

    #[test]
    fn recanonicalization_is_stable() {
        let g = g1().compose(&Isometry::from_factors(&FactorList::new(2).orthogonal(rotation(0.7))).unwrap()).unwrap();
        let again = Isometry::from_factors(&g.factors()).unwrap();
        assert!((again.rotation() - g.rotation()).amax() < 1e-9);
        let (a, b) = (again.isometric_sphere().unwrap(), g.isometric_sphere().unwrap());
        assert!((a.center() - b.center()).norm() < 1e-9);
        assert!((a.radius() - b.radius()).abs() < 1e-9);
    }

    #[test]
    fn orbit_norm_examples() {
        assert_abs_diff_eq!(orbit_norm_from_radius(0.5), 2.0 / 5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(orbit_norm_from_radius(0.5), 0.89443, epsilon = 1e-5);
        assert!(1.0 - orbit_norm_from_radius(1e-9) < 1e-15);
        let r = g1().isometric_radius().unwrap();
        assert_abs_diff_eq!(orbit_norm_from_radius(r), g1().apply(&Point::origin(2)).unwrap().norm(), epsilon = 1e-12);
    }

    #[test]
    fn three_dimensional_rotation_part() {
        let c = v(&[0.0, 1.3, 0.4]);
        let s = InversionSphere::boundary_orthogonal(c).unwrap();
        let t = InversionSphere::boundary_orthogonal(v(&[-1.1, 0.2, 0.9])).unwrap();
        let fl = FactorList::new(3).reflect(s).reflect(t);
        let g = Isometry::from_factors(&fl).unwrap();
        assert!(g.rotation_residual() < 1e-12);
        let x = v(&[0.1, -0.4, 0.3]);
        assert!((g.apply_vector(&x).unwrap() - fl.forward(&x).unwrap()).norm() < 1e-12);
        assert!((g.apply_inverse_vector(&g.apply_vector(&x).unwrap()).unwrap() - x).norm() < 1e-12);
    }
}
