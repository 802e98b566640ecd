//! Certified isometric collars at points of the domain of discontinuity.
//!
//! For a boundary point `a` outside every pairing disk, the pipeline builds a
//! Euclidean ball `U = B(a, ρ)` on which the projection to the quotient
//! manifold preserves distances:
//!
//! 1. `r_pi`: distance from `a` to the nearest pairing disk. Every nontrivial
//!    element maps `B(a, r_pi)` into a pairing disk, so the ball is precisely
//!    invariant.
//! 2. `sup r_γ` over nontrivial elements, from enumeration plus a tail bound
//!    through `r^2 = 1/|γ⁻¹O|^2 - 1`.
//! 3. `C' = max(1, sup r^2 / δ^2)` bounds `d_E(γx, γb) / d_E(x, b)` on the
//!    working ball `B(a, ρ₀)`, `ρ₀ = r_pi / 4`, where `δ` is the clearance
//!    of the working ball from every isometric-sphere center.
//! 4. `C = 2C'` gives `C (1 - |x|^2) >= 1 - |γx|^2` on `U`.
//! 5. `ρ = min(ρ₀, r_pi / 4C)` gives `d_E(x, γy) >= C d_E(x, y)` on `U`.
//!
//! Since `C >= 1` we have `C^2 >= C`, so step 5 also yields
//! `d_E(x, γy)^2 >= C d_E(x, y)^2`. Together with step 4 this gives
//! `cosh d_H(x, γy) >= cosh d_H(x, y)` for all `γ != 1`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::geometry::{
    check_dims, hyperbolic_distance, hyperbolic_distance_raw, radial_distance, Point, Vector,
    TOL_NORM,
};
use crate::group::{
    deepest_cover, disk_label, DiskCover, ElementTable, SchottkyGroup,
};
use crate::word::Word;

pub const DEFAULT_LEVEL: usize = 6;
/// Minimal clearance of `a` from the pairing disks.
pub const CERTIFY_MARGIN: f64 = 1e-9;
/// `ρ₀ = WORKING_FRACTION · r_pi`.
pub const WORKING_FRACTION: f64 = 0.25;
/// How far `sup_isometric_radius` may raise the level to dominate the tail.
pub const MAX_EXTRA_LEVELS: usize = 6;
/// Agreement required between the quotient distance and `d_H` on a collar.
pub const VERIFY_TOL: f64 = 1e-12;

fn require_boundary(group: &SchottkyGroup, a: &Point) -> Result<()> {
    check_dims(group.dim(), a.dim())?;
    if !a.is_boundary() {
        return Err(Error::NotCertifiable(format!(
            "{a} is not on the unit sphere (norm {})",
            a.norm()
        )));
    }
    Ok(())
}

/// Euclidean radius `r` with `B(a, r) ∩ γB(a, r) = ∅` for every `γ != 1`.
pub fn precisely_invariant_radius(group: &SchottkyGroup, a: &Point) -> Result<f64> {
    require_boundary(group, a)?;
    let (disk, gap) = group
        .pairing_disks()
        .iter()
        .enumerate()
        .map(|(i, d)| (i, d.gap(a.coords())))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("validated groups have at least one pair");
    if gap <= CERTIFY_MARGIN {
        return Err(Error::NotCertifiable(format!(
            "{a} lies inside or on pairing disk {} (gap {gap:e})",
            disk_label(disk)
        )));
    }
    Ok(gap)
}

/// `r / 4C`: on `B(a, r/4C)`, `d_E(x, γy) >= C d_E(x, y)` for `γ != 1`.
pub fn shrink_radius_for_constant(r: f64, c: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::NonPositiveRadius(r));
    }
    if !(c >= 1.0) {
        return Err(Error::ConstantBelowOne(c));
    }
    Ok(r / (4.0 * c))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupRadius {
    pub value: f64,
    pub attained: Word,
    /// Enumeration depth actually used.
    pub level: usize,
    /// Bound on `r_γ` for every word longer than `level`.
    pub tail_radius: f64,
    pub tail_cover_level: usize,
    pub certified: bool,
}

/// `sup_{γ != 1} r_γ`, certified when the tail bound is dominated by the
/// enumerated maximum.
pub fn sup_isometric_radius(group: &SchottkyGroup, level: usize) -> Result<SupRadius> {
    if level == 0 {
        return Err(Error::LevelTooSmall { level, min: 1 });
    }
    let mut best: Option<SupRadius> = None;
    for l in level..=level + MAX_EXTRA_LEVELS {
        let table = match ElementTable::build(group, l) {
            Ok(t) => t,
            Err(Error::EnumerationTooLarge { .. }) if best.is_some() => break,
            Err(e) => return Err(e),
        };
        let (value, attained) = table
            .nontrivial()
            .iter()
            .filter_map(|g| g.isometric_radius().map(|r| (r, g.word())))
            .fold((f64::NEG_INFINITY, None), |acc, (r, w)| {
                if r > acc.0 {
                    (r, Some(w))
                } else {
                    acc
                }
            });
        let cover = deepest_cover(group, l + 1)?;
        let m = cover.min_norm();
        let tail_radius = ((1.0 - m * m) / (m * m)).sqrt();
        let result = SupRadius {
            value,
            attained: attained.cloned().unwrap_or_default(),
            level: l,
            tail_radius,
            tail_cover_level: cover.level,
            certified: tail_radius <= value,
        };
        if result.certified {
            return Ok(result);
        }
        best = Some(result);
    }
    Ok(best.expect("loop runs at least once"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzBound {
    pub constant: f64,
    pub delta: f64,
    pub sup: SupRadius,
    /// Clearance from the enumerated isometric-sphere centers.
    pub center_clearance: f64,
    /// Clearance from the tail cover.
    pub cover_clearance: f64,
    pub cover_level: usize,
}

/// `C' >= 1` with `d_E(γx, γb) <= C' d_E(x, b)` for all `x, b` in the closed
/// ball `B̄(a, ρ)` and all `γ`.
pub fn lipschitz_constant(
    group: &SchottkyGroup,
    a: &Point,
    rho: f64,
    level: usize,
) -> Result<LipschitzBound> {
    require_boundary(group, a)?;
    if !(rho > 0.0) {
        return Err(Error::NonPositiveRadius(rho));
    }
    if group.pairing_gap(a.coords()) - rho <= CERTIFY_MARGIN {
        return Err(Error::NotCertifiable(format!(
            "ball of radius {rho} around {a} meets a pairing disk"
        )));
    }
    let sup = sup_isometric_radius(group, level)?;
    if !sup.certified {
        return Err(Error::NotCertifiable(format!(
            "sup of isometric radii not certified (max {:.6e}, tail {:.6e})",
            sup.value, sup.tail_radius
        )));
    }
    let table = ElementTable::build(group, level)?;
    let center_clearance = table
        .nontrivial()
        .iter()
        .filter_map(|g| g.inversion())
        .map(|s| (a.coords() - s.center()).norm() - rho)
        .fold(f64::INFINITY, f64::min);
    // centers of longer words are unit-sphere inverses of tail orbit points
    // and lie in the same (inversion-invariant) cover disks
    let cover = deepest_cover(group, level + 1)?;
    let cover_clearance = cover.gap(a.coords()) - rho;
    let delta = center_clearance.min(cover_clearance);
    if !(delta > 0.0) {
        return Err(Error::NotCertifiable(format!(
            "ball of radius {rho} around {a} touches the isometric-sphere centers (delta {delta:e})"
        )));
    }
    let constant = (sup.value * sup.value / (delta * delta)).max(1.0);
    Ok(LipschitzBound {
        constant,
        delta,
        sup,
        center_clearance,
        cover_clearance,
        cover_level: cover.level,
    })
}

/// `C = 2C'`.
pub fn good_constant(c_lip: f64) -> Result<f64> {
    if !(c_lip >= 1.0) {
        return Err(Error::ConstantBelowOne(c_lip));
    }
    Ok(2.0 * c_lip)
}

/// Largest distance from `a` to the radial projection `x/|x|` of a point
/// `x ∈ B(a, ρ)`, for `|a| = 1`: `sqrt(2 - 2 sqrt(1 - ρ^2))`.
pub fn radial_spread(rho: f64) -> f64 {
    let rho = rho.min(1.0);
    (2.0 - 2.0 * (1.0 - rho * rho).sqrt()).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedNeighborhood {
    pub center: Point,
    pub rho: f64,
    /// `ρ₀`, the ball on which the Lipschitz bound was certified.
    pub rho_working: f64,
    pub r_pi: f64,
    pub sup_radius: f64,
    pub sup_word: Word,
    pub sup_tail_radius: f64,
    pub c_lip: f64,
    pub c_good: f64,
    pub delta: f64,
    pub truncation_level: usize,
    pub notes: Vec<String>,
}

impl fmt::Display for CertifiedNeighborhood {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "certified isometric collar")?;
        writeln!(f, "  center a          = {}", self.center)?;
        writeln!(f, "  rho               = {:.6}", self.rho)?;
        writeln!(f, "  rho_working       = {:.6}", self.rho_working)?;
        writeln!(f, "  r_pi              = {:.6}", self.r_pi)?;
        writeln!(f, "  sup r_gamma       = {:.6} (attained at {})", self.sup_radius, self.sup_word)?;
        writeln!(f, "  tail r bound      = {:.6e}", self.sup_tail_radius)?;
        writeln!(f, "  delta             = {:.6}", self.delta)?;
        writeln!(f, "  C' (Lipschitz)    = {:.6}", self.c_lip)?;
        writeln!(f, "  C  (= 2C')        = {:.6}", self.c_good)?;
        writeln!(f, "  truncation level  = {}", self.truncation_level)?;
        writeln!(f, "  provenance:")?;
        for n in &self.notes {
            writeln!(f, "    - {n}")?;
        }
        Ok(())
    }
}

/// Runs the whole chain at `a`.
pub fn certified_neighborhood(
    group: &SchottkyGroup,
    a: &Point,
    level: usize,
) -> Result<CertifiedNeighborhood> {
    let r_pi = precisely_invariant_radius(group, a)?;
    let rho_working = WORKING_FRACTION * r_pi;
    let lip = lipschitz_constant(group, a, rho_working, level)?;
    let c_good = good_constant(lip.constant)?;
    let rho = rho_working.min(shrink_radius_for_constant(r_pi, c_good)?);
    let spread = radial_spread(rho);
    if spread > rho_working {
        return Err(Error::NotCertifiable(format!(
            "radial projections of B(a, {rho}) leave the Lipschitz ball"
        )));
    }
    let notes = vec![
        "group: validated Schottky group; certificates are issued for Schottky groups only".to_string(),
        format!("r_pi: Euclidean distance from a to the nearest pairing disk; ping-pong maps B(a, r_pi) into the pairing disks"),
        format!(
            "sup r_gamma: enumeration to word length {}, tail r <= {:.3e} from the level-{} disk cover",
            lip.sup.level, lip.sup.tail_radius, lip.sup.tail_cover_level
        ),
        format!(
            "C': delta = min(center clearance {:.6}, level-{} cover clearance {:.6}) on B(a, rho_working)",
            lip.center_clearance, lip.cover_level, lip.cover_clearance
        ),
        format!("radial projection of U stays within {spread:.6} <= rho_working of a"),
        "rho = min(rho_working, r_pi / 4C); C >= 1 gives C^2 >= C for the squared inequality".to_string(),
    ];
    Ok(CertifiedNeighborhood {
        center: a.clone(),
        rho,
        rho_working,
        r_pi,
        sup_radius: lip.sup.value,
        sup_word: lip.sup.attained.clone(),
        sup_tail_radius: lip.sup.tail_radius,
        c_lip: lip.constant,
        c_good,
        delta: lip.delta,
        truncation_level: level,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuotientDistanceResult {
    pub value: f64,
    pub minimizer: Word,
    pub certified: bool,
    /// Lower bound on `d_H(x, γy)` over every word longer than the level.
    pub tail_bound: f64,
}

/// `d(p(x), p(y)) = inf_γ d_H(x, γy)`, truncated at a word length, with a
/// certified bound on the unexplored tail.
#[derive(Debug, Clone)]
pub struct QuotientMetric {
    group: SchottkyGroup,
    level: usize,
    table: ElementTable,
    tail_cover: DiskCover,
}

impl QuotientMetric {
    pub fn new(group: &SchottkyGroup, level: usize) -> Result<Self> {
        Self::new_with(group, level, Strategy::default())
    }

    pub fn new_with(group: &SchottkyGroup, level: usize, strategy: Strategy) -> Result<Self> {
        let table = ElementTable::build_with(group, level, strategy)?;
        let tail_cover = deepest_cover(group, level + 1)?;
        Ok(Self {
            group: group.clone(),
            level,
            table,
            tail_cover,
        })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn tail_cover_level(&self) -> usize {
        self.tail_cover.level
    }

    pub fn table(&self) -> &ElementTable {
        &self.table
    }

    pub fn distance(&self, x: &Point, y: &Point) -> Result<QuotientDistanceResult> {
        for p in [x, y] {
            check_dims(self.group.dim(), p.dim())?;
            if !p.is_interior() {
                return Err(Error::InfiniteDistance { norm: p.norm() });
            }
        }
        let (xv, yv) = (x.coords(), y.coords());
        let mut value = f64::INFINITY;
        let mut minimizer = 0;
        for (i, g) in self.table.elements().iter().enumerate() {
            let d = hyperbolic_distance_raw(xv, &g.apply_vector(yv)?);
            if d < value {
                value = d;
                minimizer = i;
            }
        }
        let tail_bound = self.tail_bound(xv, yv);
        Ok(QuotientDistanceResult {
            value,
            minimizer: self.table.elements()[minimizer].word().clone(),
            certified: tail_bound >= value,
            tail_bound,
        })
    }

    /// Lower bound on `d_H(x, γy)` for every `γ` longer than the level.
    ///
    /// Two bounds, the larger wins:
    /// - reverse triangle inequality through `O`: `γO` lies in the tail
    ///   cover, so `d_H(x, γy) >= d_H(O, γO) - d_H(O, x) - d_H(O, y)`;
    /// - half-space separation: if `y` is outside every pairing disk then
    ///   `γy` lies in a tail-cover disk `D` at hyperbolic depth at least
    ///   `d_H(y, pairing disks)` below `∂D`, so for `x ∉ D`,
    ///   `d_H(x, γy) >= d_H(x, D) + d_H(y, pairing disks)`. Symmetrically
    ///   with `x` and `y` swapped via `γ⁻¹`.
    fn tail_bound(&self, x: &Vector, y: &Vector) -> f64 {
        let origin = Vector::zeros(x.len());
        let triangle = radial_distance(self.tail_cover.min_norm())
            - hyperbolic_distance_raw(&origin, x)
            - hyperbolic_distance_raw(&origin, y);
        triangle
            .max(self.separation_bound(x, y))
            .max(self.separation_bound(y, x))
    }

    fn separation_bound(&self, x: &Vector, y: &Vector) -> f64 {
        if !self.group.outside_pairing_disks(y) {
            return f64::NEG_INFINITY;
        }
        if self.tail_cover.contains(x, 0.0) {
            return 0.0;
        }
        let depth_y = self
            .group
            .pairing_disks()
            .iter()
            .map(|d| d.hyperbolic_distance_to(y))
            .fold(f64::INFINITY, f64::min);
        self.tail_cover.hyperbolic_distance_to(x) + depth_y
    }
}

pub fn quotient_distance(
    group: &SchottkyGroup,
    x: &Point,
    y: &Point,
    level: usize,
) -> Result<QuotientDistanceResult> {
    QuotientMetric::new(group, level)?.distance(x, y)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairOutcome {
    pub index: usize,
    pub x: Point,
    pub y: Point,
    pub hyperbolic: f64,
    pub quotient: QuotientDistanceResult,
}

impl PairOutcome {
    pub fn passed(&self) -> bool {
        self.quotient.certified
            && self.quotient.minimizer.is_empty()
            && (self.quotient.value - self.hyperbolic).abs() <= VERIFY_TOL
    }

    /// `d_H(x, y) - d(p(x), p(y))`, positive when the projection shortens.
    pub fn deficit(&self) -> f64 {
        self.hyperbolic - self.quotient.value
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub samples: usize,
    pub failures: Vec<PairOutcome>,
    pub max_deficit: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "verified {} pairs: {} failures, max d_H - d_quotient = {:.3e}",
            self.samples,
            self.failures.len(),
            self.max_deficit
        )?;
        for o in self.failures.iter().take(10) {
            writeln!(
                f,
                "  #{}: x = {}, y = {}, d_H = {:.12}, quotient = {:.12} via {} (certified: {})",
                o.index, o.x, o.y, o.hyperbolic, o.quotient.value, o.quotient.minimizer, o.quotient.certified
            )?;
        }
        Ok(())
    }
}

/// Draws `samples` interior pairs uniformly from `B(center, radius) ∩ B^n`.
pub fn sample_pairs(center: &Vector, radius: f64, samples: usize, seed: u64) -> Result<Vec<(Point, Point)>> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Sampling(format!("degenerate radius {radius}")));
    }
    let n = center.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let budget = 10_000 + 10_000 * samples;
    let mut attempts = 0;
    let mut draw = |rng: &mut ChaCha8Rng| -> Result<Point> {
        loop {
            attempts += 1;
            if attempts > budget {
                return Err(Error::Sampling(format!(
                    "no interior points found in B({:?}, {radius})",
                    center.as_slice()
                )));
            }
            let u = Vector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
            if u.norm_squared() >= 1.0 {
                continue;
            }
            let p = center + u * radius;
            if p.norm() < 1.0 - TOL_NORM {
                return Point::new(p);
            }
        }
    };
    (0..samples)
        .map(|_| Ok((draw(&mut rng)?, draw(&mut rng)?)))
        .collect()
}

/// Checks `d(p(x), p(y)) = d_H(x, y)` on sampled pairs from an arbitrary ball.
pub fn verify_isometry_on_ball(
    metric: &QuotientMetric,
    center: &Vector,
    radius: f64,
    samples: usize,
    seed: u64,
    strategy: Strategy,
) -> Result<VerificationReport> {
    if samples == 0 {
        return Ok(VerificationReport {
            samples: 0,
            failures: Vec::new(),
            max_deficit: f64::NEG_INFINITY,
        });
    }
    let pairs = sample_pairs(center, radius, samples, seed)?;
    let outcomes = exec::map_range(strategy, pairs.len(), |i| -> Result<PairOutcome> {
        let (x, y) = &pairs[i];
        Ok(PairOutcome {
            index: i,
            x: x.clone(),
            y: y.clone(),
            hyperbolic: hyperbolic_distance(x, y)?,
            quotient: metric.distance(x, y)?,
        })
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let max_deficit = outcomes
        .iter()
        .map(PairOutcome::deficit)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(VerificationReport {
        samples,
        failures: outcomes.into_iter().filter(|o| !o.passed()).collect(),
        max_deficit,
    })
}

pub fn verify_isometry_on(
    group: &SchottkyGroup,
    nbhd: &CertifiedNeighborhood,
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    verify_isometry_on_with(group, nbhd, samples, seed, Strategy::default())
}

pub fn verify_isometry_on_with(
    group: &SchottkyGroup,
    nbhd: &CertifiedNeighborhood,
    samples: usize,
    seed: u64,
    strategy: Strategy,
) -> Result<VerificationReport> {
    if samples == 0 {
        return Ok(VerificationReport {
            samples: 0,
            failures: Vec::new(),
            max_deficit: f64::NEG_INFINITY,
        });
    }
    let metric = QuotientMetric::new_with(group, nbhd.truncation_level, strategy)?;
    verify_isometry_on_ball(&metric, nbhd.center.coords(), nbhd.rho, samples, seed, strategy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{four_disk_reference, single_pair_reference};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn diag() -> Point {
        Point::from_slice(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap()
    }

    #[test]
    fn invariant_radius_examples() {
        let g = four_disk_reference();
        let r = precisely_invariant_radius(&g, &diag()).unwrap();
        let expected = ((1.2 - FRAC_1_SQRT_2).powi(2) + 0.5).sqrt() - 0.44f64.sqrt();
        assert_abs_diff_eq!(r, expected, epsilon = 1e-14);
        assert_abs_diff_eq!(r, 0.19863, epsilon = 1e-4);
        let inside = Point::from_slice(&[1.0, 0.0]).unwrap();
        assert!(matches!(
            precisely_invariant_radius(&g, &inside),
            Err(Error::NotCertifiable(_))
        ));
        assert!(precisely_invariant_radius(&g, &Point::origin(2)).is_err());
    }

    #[test]
    fn shrink_examples() {
        assert_abs_diff_eq!(shrink_radius_for_constant(0.19863, 1.0).unwrap(), 0.0496575, epsilon = 1e-12);
        assert_abs_diff_eq!(shrink_radius_for_constant(0.19863, 3.04234).unwrap(), 0.01632, epsilon = 1e-5);
        assert!(matches!(shrink_radius_for_constant(0.2, 0.5), Err(Error::ConstantBelowOne(_))));
        assert!(shrink_radius_for_constant(0.0, 2.0).is_err());
    }

    #[test]
    fn sup_radius_reference() {
        let g = four_disk_reference();
        let s = sup_isometric_radius(&g, 6).unwrap();
        assert!(s.certified);
        assert_eq!(s.level, 6);
        assert_abs_diff_eq!(s.value, ((1.0 / 0.983606557377049f64.powi(2)) - 1.0).sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(s.value, 11.0 / 60.0, epsilon = 1e-14);
        assert_eq!(s.attained.to_string(), "g1");
        assert!(s.tail_radius < s.value);
    }

    #[test]
    fn sup_radius_cyclic_powers() {
        let g = single_pair_reference();
        let s = sup_isometric_radius(&g, 8).unwrap();
        assert!(s.certified);
        let table = ElementTable::build(&g, 8).unwrap();
        let r1 = table.level(1)[0].isometric_radius().unwrap();
        assert_abs_diff_eq!(s.value, r1, epsilon = 1e-15);
        for k in 2..=8 {
            for e in table.level(k) {
                assert!(e.isometric_radius().unwrap() < r1);
            }
        }
    }

    #[test]
    fn lipschitz_reference() {
        let g = four_disk_reference();
        let lip = lipschitz_constant(&g, &diag(), 0.05, 6).unwrap();
        assert!(lip.delta >= 0.14863);
        assert!(lip.constant <= 1.52117);
        assert!(lip.constant >= 1.0);
        assert!(matches!(
            lipschitz_constant(&g, &diag(), 0.5, 6),
            Err(Error::NotCertifiable(_))
        ));
    }

    #[test]
    fn good_constant_examples() {
        assert_abs_diff_eq!(good_constant(1.52117).unwrap(), 3.04234, epsilon = 1e-12);
        assert_eq!(good_constant(1.0).unwrap(), 2.0);
        assert!(good_constant(0.9).is_err());
    }

    #[test]
    fn neighborhood_reference() {
        let g = four_disk_reference();
        let n = certified_neighborhood(&g, &diag(), 6).unwrap();
        assert!(n.rho > 0.0);
        assert!(n.rho >= 0.01632);
        assert_eq!(n.c_good, 2.0 * n.c_lip);
        assert!(n.c_good >= 1.0);
        assert!(n.rho * 4.0 * n.c_good <= n.r_pi * (1.0 + 1e-15));
        assert!(radial_spread(n.rho) <= n.rho_working);
        assert!(g.pairing_gap(n.center.coords()) > n.rho);
    }

    #[test]
    fn neighborhood_grows_with_gap() {
        let g = four_disk_reference();
        let near = Point::boundary_direction(&Vector::from_column_slice(&[1.0, 0.8])).unwrap();
        let n_diag = certified_neighborhood(&g, &diag(), 6).unwrap();
        let n_near = certified_neighborhood(&g, &near, 6).unwrap();
        assert!(n_diag.r_pi > n_near.r_pi);
        assert!(n_diag.rho > n_near.rho);
    }

    #[test]
    fn neighborhood_cyclic() {
        let g = single_pair_reference();
        let a = Point::from_slice(&[0.0, 1.0]).unwrap();
        let n = certified_neighborhood(&g, &a, 6).unwrap();
        assert_abs_diff_eq!(n.r_pi, (1.44f64 + 1.0).sqrt() - 0.44f64.sqrt(), epsilon = 1e-14);
        assert!(n.rho > 0.0);
    }

    #[test]
    fn quotient_examples() {
        let g = four_disk_reference();
        let metric = QuotientMetric::new(&g, 6).unwrap();
        let x = Point::from_slice(&[0.1, 0.0]).unwrap();
        let y = Point::from_slice(&[0.2, 0.0]).unwrap();
        let same = metric.distance(&x, &x).unwrap();
        assert_eq!(same.value, 0.0);
        assert!(same.minimizer.is_empty());
        assert!(same.certified);

        let r = metric.distance(&x, &y).unwrap();
        assert_abs_diff_eq!(r.value, (1.2f64 / 0.8).ln() - (1.1f64 / 0.9).ln(), epsilon = 1e-14);
        assert!(r.minimizer.is_empty());
        assert!(r.certified);

        let o = Point::origin(2);
        let g1o = crate::group::element_of(&g, &"g1".parse().unwrap())
            .unwrap()
            .apply(&o)
            .unwrap();
        let r = metric.distance(&o, &g1o).unwrap();
        assert!(r.value < 1e-9);
        assert_eq!(r.minimizer.to_string(), "g1^-1");
        assert!(r.certified);
        assert!(metric.distance(&o, &Point::from_slice(&[0.0, 1.0]).unwrap()).is_err());
    }

    #[test]
    fn verify_empty_and_degenerate() {
        let g = four_disk_reference();
        let n = certified_neighborhood(&g, &diag(), 6).unwrap();
        assert_eq!(verify_isometry_on(&g, &n, 0, 0).unwrap().samples, 0);
        assert!(sample_pairs(n.center.coords(), 0.0, 5, 0).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_in_region() {
        let c = diag().into_coords();
        let a = sample_pairs(&c, 0.02, 50, 7).unwrap();
        let b = sample_pairs(&c, 0.02, 50, 7).unwrap();
        assert_eq!(a, b);
        for (x, y) in &a {
            for p in [x, y] {
                assert!((p.coords() - &c).norm() < 0.02);
                assert!(p.is_interior());
            }
        }
    }
}
