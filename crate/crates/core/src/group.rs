//! Schottky groups: validation, enumeration of reduced words and group
//! elements, orbits of a base point, nested disk covers and limit-set samples.
//!
//! Generator `i` is `reflect(D_i') ∘ reflect(D_i)`. It maps the exterior of
//! `D_i` into `D_i'`, and its inverse maps the exterior of `D_i'` into `D_i`.
//! Each letter therefore has a *source* disk and a *target* disk. For a
//! reduced word `s1 ... sk`, every point outside all pairing disks lands in
//! the target disk of `s1` (ping-pong).

use std::fmt;

use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::geometry::{check_dims, InversionSphere, Point, Vector, TOL_ORTHOGONAL};
use crate::isometry::{FactorList, Isometry};
use crate::word::{reduced_word_count, Letter, Word};

/// Required clearance between distinct pairing disks.
pub const DISK_MARGIN: f64 = 1e-9;
/// Cover disks smaller than this are below the resolution of unit-scale
/// coordinates; building such a cover is refused.
pub const COVER_RADIUS_FLOOR: f64 = 1e-13;
/// Absolute slack for containment checks on orbit points and nested disks.
pub const CONTAINMENT_SLACK: f64 = 1e-12;

pub const MAX_WORDS_ENV: &str = "BALLCOLLAR_MAX_WORDS";
pub const DEFAULT_MAX_WORDS: u128 = 200_000;

/// Enumeration cap from `BALLCOLLAR_MAX_WORDS` (default 200000).
pub fn max_words() -> u128 {
    std::env::var(MAX_WORDS_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_WORDS)
}

fn check_cap(words: u128) -> Result<()> {
    let cap = max_words();
    if words > cap {
        Err(Error::EnumerationTooLarge { words, cap })
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ValidationFailure {
    Dimension { disk: usize, found: usize },
    NotOrthogonal { disk: usize, residual: f64 },
    Overlap { first: usize, second: usize, gap: f64 },
    ContainsOrigin { disk: usize },
    NoPairs,
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Dimension { disk, found } => {
                write!(f, "disk {} has dimension {found}", disk_label(*disk))
            }
            Self::NotOrthogonal { disk, residual } => write!(
                f,
                "disk {} is not orthogonal to the unit sphere (residual {residual:e})",
                disk_label(*disk)
            ),
            Self::Overlap { first, second, gap } => write!(
                f,
                "disks {} and {} overlap or touch (gap {gap:.6}, need >= {DISK_MARGIN:e})",
                disk_label(*first),
                disk_label(*second)
            ),
            Self::ContainsOrigin { disk } => {
                write!(f, "disk {} contains the origin", disk_label(*disk))
            }
            Self::NoPairs => write!(f, "no generator pairs"),
        }
    }
}

/// `D1`, `D1'`, `D2`, ... for disk indices `0, 1, 2, ...`.
pub fn disk_label(disk: usize) -> String {
    format!("D{}{}", disk / 2 + 1, if disk % 2 == 1 { "'" } else { "" })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub min_gap: f64,
    pub failures: Vec<ValidationFailure>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            writeln!(f, "valid Schottky group")?;
        } else {
            writeln!(f, "INVALID Schottky group")?;
        }
        if self.min_gap.is_finite() {
            writeln!(f, "min inter-disk gap: {:.6}", self.min_gap)?;
        }
        for fail in &self.failures {
            writeln!(f, "  - {fail}")?;
        }
        Ok(())
    }
}

/// Checks the ping-pong hypotheses on `2g` spheres listed as
/// `[D1, D1', D2, D2', ...]`.
pub fn validate_schottky(dim: usize, disks: &[InversionSphere]) -> ValidationReport {
    let mut failures = Vec::new();
    if disks.is_empty() {
        failures.push(ValidationFailure::NoPairs);
    }
    for (i, d) in disks.iter().enumerate() {
        if d.dim() != dim {
            failures.push(ValidationFailure::Dimension { disk: i, found: d.dim() });
            continue;
        }
        let residual = d.orthogonality_residual();
        if residual > TOL_ORTHOGONAL {
            failures.push(ValidationFailure::NotOrthogonal { disk: i, residual });
        }
        if d.contains(&Vector::zeros(dim), 0.0) {
            failures.push(ValidationFailure::ContainsOrigin { disk: i });
        }
    }
    let mut min_gap = f64::INFINITY;
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            if disks[i].dim() != dim || disks[j].dim() != dim {
                continue;
            }
            let gap = (disks[i].center() - disks[j].center()).norm()
                - disks[i].radius()
                - disks[j].radius();
            min_gap = min_gap.min(gap);
            if gap < DISK_MARGIN {
                failures.push(ValidationFailure::Overlap { first: i, second: j, gap });
            }
        }
    }
    ValidationReport { min_gap, failures }
}

/// A validated Schottky group acting on `B^n`.
#[derive(Debug, Clone)]
pub struct SchottkyGroup {
    dim: usize,
    disks: Vec<InversionSphere>,
    /// Indexed by [`Letter::index`].
    letters: Vec<Isometry>,
}

impl SchottkyGroup {
    /// `pairs[i] = (D_i, D_i')`.
    pub fn new(dim: usize, pairs: Vec<(InversionSphere, InversionSphere)>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        let disks: Vec<InversionSphere> = pairs.into_iter().flat_map(|(a, b)| [a, b]).collect();
        let report = validate_schottky(dim, &disks);
        if !report.is_valid() {
            return Err(Error::InvalidGroup(Box::new(report)));
        }
        let disks = disks
            .into_iter()
            .map(InversionSphere::certify_orthogonal)
            .collect::<Result<Vec<_>>>()?;
        let mut letters = Vec::with_capacity(disks.len());
        for (i, pair) in disks.chunks(2).enumerate() {
            let fl = FactorList::new(dim).reflect(pair[0].clone()).reflect(pair[1].clone());
            let g = Isometry::from_factors(&fl)?.with_word(Word::letter(Letter::new(i, false)));
            letters.push(g.clone());
            letters.push(g.inverse());
        }
        Ok(Self { dim, disks, letters })
    }

    /// Builds a group from pairing-sphere centers alone; radii follow from
    /// orthogonality.
    pub fn from_centers(dim: usize, centers: &[(Vec<f64>, Vec<f64>)]) -> Result<Self> {
        let mut pairs = Vec::with_capacity(centers.len());
        for (a, b) in centers {
            pairs.push((
                InversionSphere::boundary_orthogonal(Vector::from_column_slice(a))?,
                InversionSphere::boundary_orthogonal(Vector::from_column_slice(b))?,
            ));
        }
        Self::new(dim, pairs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator_count(&self) -> usize {
        self.disks.len() / 2
    }

    /// `[D1, D1', D2, D2', ...]`.
    pub fn pairing_disks(&self) -> &[InversionSphere] {
        &self.disks
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + Clone {
        Letter::all(self.generator_count())
    }

    pub fn letter_isometry(&self, l: Letter) -> &Isometry {
        &self.letters[l.index()]
    }

    /// Disk that the letter maps the exterior of its source disk into.
    pub fn target_disk(&self, l: Letter) -> &InversionSphere {
        &self.disks[l.index() ^ 1]
    }

    pub fn source_disk(&self, l: Letter) -> &InversionSphere {
        &self.disks[l.index()]
    }

    /// True when `x` lies outside every closed pairing disk.
    pub fn outside_pairing_disks(&self, x: &Vector) -> bool {
        self.disks.iter().all(|d| d.gap(x) > 0.0)
    }

    /// Smallest Euclidean gap from `x` to the pairing disks.
    pub fn pairing_gap(&self, x: &Vector) -> f64 {
        self.disks.iter().map(|d| d.gap(x)).fold(f64::INFINITY, f64::min)
    }

    /// The subgroup generated by a single pair, as its own Schottky group.
    pub fn cyclic_subgroup(&self, generator: usize) -> Result<Self> {
        if generator >= self.generator_count() {
            return Err(Error::GeneratorOutOfRange {
                index: generator + 1,
                generators: self.generator_count(),
            });
        }
        Self::new(
            self.dim,
            vec![(
                self.disks[2 * generator].clone(),
                self.disks[2 * generator + 1].clone(),
            )],
        )
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        if let Some(m) = w.max_generator() {
            if m >= self.generator_count() {
                return Err(Error::GeneratorOutOfRange {
                    index: m + 1,
                    generators: self.generator_count(),
                });
            }
        }
        Ok(())
    }
}

/// Four-disk reference group in the plane: pairing spheres centered at
/// `(±1.2, 0)` and `(0, ±1.2)` with orthogonal radius `sqrt(0.44)`.
pub fn four_disk_reference() -> SchottkyGroup {
    SchottkyGroup::from_centers(
        2,
        &[
            (vec![1.2, 0.0], vec![-1.2, 0.0]),
            (vec![0.0, 1.2], vec![0.0, -1.2]),
        ],
    )
    .expect("reference group is a valid Schottky group")
}

/// Cyclic group generated by the first generator of [`four_disk_reference`].
pub fn single_pair_reference() -> SchottkyGroup {
    SchottkyGroup::from_centers(2, &[(vec![1.2, 0.0], vec![-1.2, 0.0])])
        .expect("reference group is a valid Schottky group")
}

/// All reduced words of length `<= max_len`, by length, lexicographic within
/// a length.
pub fn reduced_words(generators: usize, max_len: usize) -> impl Iterator<Item = Word> {
    let mut layer = vec![Word::empty()];
    let mut len = 0;
    std::iter::from_fn(move || {
        if layer.is_empty() || len > max_len {
            return None;
        }
        let current = std::mem::take(&mut layer);
        if len < max_len {
            layer = current
                .iter()
                .flat_map(|w| Letter::all(generators).filter_map(move |l| w.extended(l)))
                .collect();
        }
        len += 1;
        Some(current)
    })
    .flatten()
}

pub fn element_of(group: &SchottkyGroup, w: &Word) -> Result<Isometry> {
    group.check_word(w)?;
    let mut acc = Isometry::identity(group.dim());
    for &l in w.letters() {
        acc = acc.compose(group.letter_isometry(l))?;
    }
    Ok(acc.with_word(w.clone()))
}

/// Every group element with word length `<= max_len`, in enumeration order.
#[derive(Debug, Clone)]
pub struct ElementTable {
    max_len: usize,
    elements: Vec<Isometry>,
    /// `level_start[k]` is the index of the first word of length `k`.
    level_start: Vec<usize>,
}

impl ElementTable {
    pub fn build(group: &SchottkyGroup, max_len: usize) -> Result<Self> {
        Self::build_with(group, max_len, Strategy::default())
    }

    pub fn build_with(group: &SchottkyGroup, max_len: usize, strategy: Strategy) -> Result<Self> {
        check_cap(reduced_word_count(group.generator_count(), max_len))?;
        let mut elements = vec![Isometry::identity(group.dim())];
        let mut level_start = vec![0, 1];
        for _ in 0..max_len {
            let parents = &elements[level_start[level_start.len() - 2]..];
            let children: Vec<Vec<Isometry>> = exec::try_map(strategy, parents, |p| {
                group
                    .letters()
                    .filter_map(|l| p.word().extended(l).map(|w| (l, w)))
                    .map(|(l, w)| Ok(p.compose(group.letter_isometry(l))?.with_word(w)))
                    .collect::<Result<Vec<_>>>()
            })?;
            elements.extend(children.into_iter().flatten());
            level_start.push(elements.len());
        }
        Ok(Self {
            max_len,
            elements,
            level_start,
        })
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn elements(&self) -> &[Isometry] {
        &self.elements
    }

    /// Elements whose word has length exactly `len`.
    pub fn level(&self, len: usize) -> &[Isometry] {
        if len > self.max_len {
            return &[];
        }
        &self.elements[self.level_start[len]..self.level_start[len + 1]]
    }

    /// Elements other than the identity.
    pub fn nontrivial(&self) -> &[Isometry] {
        &self.elements[1..]
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitEntry {
    pub word: Word,
    pub point: Point,
    pub isometric_radius: Option<f64>,
}

pub fn orbit(group: &SchottkyGroup, max_len: usize, base: &Point) -> Result<Vec<OrbitEntry>> {
    orbit_with(group, max_len, base, Strategy::default())
}

pub fn orbit_with(
    group: &SchottkyGroup,
    max_len: usize,
    base: &Point,
    strategy: Strategy,
) -> Result<Vec<OrbitEntry>> {
    check_dims(group.dim(), base.dim())?;
    if !base.is_interior() {
        return Err(Error::InfiniteDistance { norm: base.norm() });
    }
    let table = ElementTable::build_with(group, max_len, strategy)?;
    exec::try_map(strategy, table.elements(), |g| {
        Ok(OrbitEntry {
            word: g.word().clone(),
            point: g.apply(base)?,
            isometric_radius: g.isometric_radius(),
        })
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverDisk {
    /// `w·s`: the disk is `w(target(s))`.
    pub word: Word,
    pub sphere: InversionSphere,
}

/// The level-`k` disks: images of the target disks under every reduced prefix
/// of length `k - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskCover {
    pub level: usize,
    pub disks: Vec<CoverDisk>,
    pub max_radius: f64,
}

impl DiskCover {
    /// Smallest norm on the cover, `min (|c| - r)`.
    pub fn min_norm(&self) -> f64 {
        self.disks
            .iter()
            .map(|d| d.sphere.min_norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains(&self, x: &Vector, slack: f64) -> bool {
        self.disks.iter().any(|d| d.sphere.contains(x, slack))
    }

    /// Smallest Euclidean gap from `x` to the cover.
    pub fn gap(&self, x: &Vector) -> f64 {
        self.disks
            .iter()
            .map(|d| d.sphere.gap(x))
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest hyperbolic distance from an interior vector to the cover
    /// (zero inside a disk).
    pub fn hyperbolic_distance_to(&self, x: &Vector) -> f64 {
        self.disks
            .iter()
            .map(|d| d.sphere.hyperbolic_distance_to(x))
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn disk_cover(group: &SchottkyGroup, level: usize) -> Result<DiskCover> {
    disk_cover_with(group, level, Strategy::default())
}

pub fn disk_cover_with(group: &SchottkyGroup, level: usize, strategy: Strategy) -> Result<DiskCover> {
    if level == 0 {
        return Err(Error::LevelTooSmall { level, min: 1 });
    }
    let g = group.generator_count() as u128;
    let count = (2 * g).saturating_mul((2 * g - 1).saturating_pow(level as u32 - 1));
    check_cap(count)?;
    let table = ElementTable::build_with(group, level - 1, strategy)?;
    let per_prefix: Vec<Vec<CoverDisk>> = exec::try_map(strategy, table.level(level - 1), |p| {
        group
            .letters()
            .filter_map(|l| p.word().extended(l).map(|w| (l, w)))
            .map(|(l, word)| {
                let sphere = p
                    .map_sphere(group.target_disk(l))
                    .ok_or(Error::CoverDegenerate { level })?;
                if sphere.radius() < COVER_RADIUS_FLOOR {
                    return Err(Error::CoverTooDeep {
                        level,
                        radius: sphere.radius(),
                    });
                }
                Ok(CoverDisk { word, sphere })
            })
            .collect()
    })?;
    let disks: Vec<CoverDisk> = per_prefix.into_iter().flatten().collect();
    let max_radius = disks.iter().map(|d| d.sphere.radius()).fold(0.0, f64::max);
    Ok(DiskCover {
        level,
        disks,
        max_radius,
    })
}

/// The deepest cover at level `<= level` that can be built (at least level
/// 1). Deeper disks are nested in shallower ones, so any such cover still
/// contains every orbit and limit point of word length `>= level`.
pub fn deepest_cover(group: &SchottkyGroup, level: usize) -> Result<DiskCover> {
    let mut k = level.max(1);
    loop {
        match disk_cover(group, k) {
            Err(Error::CoverTooDeep { .. } | Error::EnumerationTooLarge { .. }) if k > 1 => k -= 1,
            other => return other,
        }
    }
}

/// Lower bound on `|γ(O)|` and `|γ⁻¹(O)|` for every `γ` of word length `>= k`.
pub fn min_tail_orbit_norm(group: &SchottkyGroup, level: usize) -> Result<f64> {
    Ok(disk_cover(group, level)?.min_norm())
}

/// One boundary point per level-`k` disk: its center projected radially.
pub fn limit_set_sample(group: &SchottkyGroup, level: usize) -> Result<Vec<Point>> {
    disk_cover(group, level)?
        .disks
        .iter()
        .map(|d| Point::boundary_direction(d.sphere.center()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use crate::geometry::{hyperbolic_distance_raw, radial_distance};

    #[test]
    fn reference_group_is_valid() {
        let g = four_disk_reference();
        let report = validate_schottky(2, g.pairing_disks());
        assert!(report.is_valid());
        let expected = 1.2 * 2f64.sqrt() - 2.0 * 0.44f64.sqrt();
        assert_abs_diff_eq!(report.min_gap, expected, epsilon = 1e-14);
        assert_abs_diff_eq!(report.min_gap, 0.370406, epsilon = 1e-6);
    }

    #[test]
    fn overlapping_disks_rejected() {
        let err = SchottkyGroup::from_centers(
            2,
            &[
                (vec![2.0, 0.0], vec![-2.0, 0.0]),
                (vec![0.0, 2.0], vec![0.0, -2.0]),
            ],
        )
        .unwrap_err();
        match err {
            Error::InvalidGroup(report) => {
                assert!(report
                    .failures
                    .iter()
                    .any(|f| matches!(f, ValidationFailure::Overlap { .. })));
                assert!(report.min_gap < 0.0);
                assert_abs_diff_eq!(report.min_gap, 2.0 * 2f64.sqrt() - 2.0 * 3f64.sqrt(), epsilon = 1e-12);
            }
            e => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn non_orthogonal_disk_reported() {
        let a = InversionSphere::new(Vector::from_column_slice(&[1.2, 0.0]), 0.5).unwrap();
        let b = InversionSphere::boundary_orthogonal(Vector::from_column_slice(&[-1.2, 0.0])).unwrap();
        let report = validate_schottky(2, &[a, b]);
        assert!(!report.is_valid());
        assert!(matches!(report.failures[0], ValidationFailure::NotOrthogonal { disk: 0, .. }));
        assert!(report.to_string().contains("D1 is not orthogonal"));
    }

    #[test]
    fn cyclic_group_is_valid() {
        let g = single_pair_reference();
        assert_eq!(g.generator_count(), 1);
        assert_eq!(reduced_words(1, 4).count(), 9);
    }

    #[test]
    fn word_enumeration_counts_and_order() {
        assert_eq!(reduced_words(2, 0).collect::<Vec<_>>(), vec![Word::empty()]);
        let w2: Vec<Word> = reduced_words(2, 2).collect();
        assert_eq!(w2.len(), 17);
        assert_eq!(w2[1].to_string(), "g1");
        assert_eq!(w2[2].to_string(), "g1^-1");
        assert_eq!(w2[5].to_string(), "g1 g1");
        assert_eq!(reduced_words(2, 8).count(), 13121);
        let mut sorted = w2[5..].to_vec();
        sorted.sort();
        assert_eq!(sorted, w2[5..].to_vec());
    }

    #[test]
    fn element_table_matches_word_enumeration() {
        let g = four_disk_reference();
        let table = ElementTable::build(&g, 4).unwrap();
        let words: Vec<Word> = reduced_words(2, 4).collect();
        assert_eq!(table.len(), words.len());
        for (e, w) in table.elements().iter().zip(&words) {
            assert_eq!(e.word(), w);
        }
        assert_eq!(table.level(2).len(), 12);
        assert!(table.level(5).is_empty());
    }

    #[test]
    fn element_of_examples() {
        let g = four_disk_reference();
        assert!(element_of(&g, &Word::empty()).unwrap().fixes_origin());
        let g1 = element_of(&g, &"g1".parse().unwrap()).unwrap();
        let img = g1.apply(&Point::origin(2)).unwrap();
        assert_abs_diff_eq!(img.coords()[0], -0.98361, epsilon = 1e-5);
        assert!("g1 g1^-1".parse::<Word>().is_err());
        assert!(matches!(
            element_of(&g, &"g3".parse().unwrap()),
            Err(Error::GeneratorOutOfRange { .. })
        ));
    }

    #[test]
    fn table_agrees_with_element_of() {
        let g = four_disk_reference();
        let table = ElementTable::build(&g, 3).unwrap();
        let x = Vector::from_column_slice(&[0.2, -0.1]);
        for e in table.elements() {
            let direct = element_of(&g, e.word()).unwrap();
            let d = (direct.apply_vector(&x).unwrap() - e.apply_vector(&x).unwrap()).norm();
            assert!(d < 1e-12, "{}: {d}", e.word());
        }
    }

    #[test]
    fn orbit_examples() {
        let g = four_disk_reference();
        let o = Point::origin(2);
        let level0 = orbit(&g, 0, &o).unwrap();
        assert_eq!(level0.len(), 1);
        assert_eq!(level0[0].point, o);
        let level1 = orbit(&g, 1, &o).unwrap();
        assert_eq!(level1.len(), 5);
        for e in &level1[1..] {
            assert_abs_diff_eq!(e.point.norm(), 0.983606557377049, epsilon = 1e-12);
            assert!(e.point.is_interior());
        }
        assert!(orbit(&g, 1, &Point::from_slice(&[1.0, 0.0]).unwrap()).is_err());
    }

    #[test]
    fn ping_pong_nesting() {
        let g = four_disk_reference();
        for e in orbit(&g, 6, &Point::origin(2)).unwrap().iter().skip(1) {
            let target = g.target_disk(e.word.first().unwrap());
            assert!(target.gap(e.point.coords()) <= 0.0, "{}", e.word);
        }
    }

    #[test]
    fn faithful_orbit() {
        // Distinct orbit points of O are at least min_{γ≠1} d(O, γO) apart.
        // Deep orbit points crowd the boundary in Euclidean terms, so compare
        // hyperbolic distances.
        let g = four_disk_reference();
        let pts: Vec<Vector> = orbit(&g, 5, &Point::origin(2))
            .unwrap()
            .into_iter()
            .map(|e| e.point.into_coords())
            .collect();
        let expected = radial_distance(1.2 - 0.44f64.sqrt());
        let mut min = f64::INFINITY;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                min = min.min(hyperbolic_distance_raw(&pts[i], &pts[j]));
            }
        }
        assert!(min >= expected - 1e-6, "closest orbit pair {min} < {expected}");
    }

    #[test]
    fn cover_examples() {
        let g = four_disk_reference();
        let c1 = disk_cover(&g, 1).unwrap();
        assert_eq!(c1.disks.len(), 4);
        for (d, p) in c1.disks.iter().zip([1usize, 0, 3, 2]) {
            assert_eq!(&d.sphere, &g.pairing_disks()[p]);
        }
        assert_abs_diff_eq!(c1.max_radius, 0.44f64.sqrt(), epsilon = 1e-15);
        let c2 = disk_cover(&g, 2).unwrap();
        assert_eq!(c2.disks.len(), 12);
        assert!(c2.max_radius < c1.max_radius);
        for d in &c2.disks {
            let parent = g.target_disk(d.word.first().unwrap());
            assert!(parent.gap(d.sphere.center()) + d.sphere.radius() < 0.0);
        }
        assert_eq!(disk_cover(&g, 3).unwrap().disks.len(), 36);
        assert!(matches!(disk_cover(&g, 0), Err(Error::LevelTooSmall { .. })));
    }

    #[test]
    fn cover_nesting_and_orthogonality() {
        let g = four_disk_reference();
        let mut prev = disk_cover(&g, 1).unwrap();
        for k in 2..=6 {
            let cover = disk_cover(&g, k).unwrap();
            assert!(cover.max_radius < prev.max_radius);
            for d in &cover.disks {
                assert!(d.sphere.orthogonality_residual() < 1e-9);
                let prefix = Word::from_letters(d.word.letters()[..k - 1].to_vec()).unwrap();
                let parents: Vec<&CoverDisk> = prev
                    .disks
                    .iter()
                    .filter(|p| p.sphere.gap(d.sphere.center()) + d.sphere.radius() <= CONTAINMENT_SLACK)
                    .collect();
                assert_eq!(parents.len(), 1, "{}", d.word);
                assert_eq!(parents[0].word, prefix);
            }
            prev = cover;
        }
    }

    #[test]
    fn cover_invariant_under_unit_sphere_inversion() {
        let g = four_disk_reference();
        let unit = InversionSphere::new(Vector::zeros(2), 1.0).unwrap();
        for k in 1..=6 {
            for d in disk_cover(&g, k).unwrap().disks {
                let img = d.sphere.reflected_in(&unit).unwrap();
                assert!((img.center() - d.sphere.center()).norm() <= 1e-9);
                assert!((img.radius() - d.sphere.radius()).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn tail_norm_examples() {
        let g = four_disk_reference();
        assert_abs_diff_eq!(min_tail_orbit_norm(&g, 1).unwrap(), 1.2 - 0.44f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(min_tail_orbit_norm(&g, 1).unwrap(), 0.53668, epsilon = 1e-5);
        let mut prev = 0.0;
        for k in 1..=7 {
            let m = min_tail_orbit_norm(&g, k).unwrap();
            assert!(m >= prev);
            prev = m;
        }
    }

    #[test]
    fn tail_norm_brute_force() {
        let g = four_disk_reference();
        let table = ElementTable::build(&g, 5).unwrap();
        let o = Vector::zeros(2);
        for k in 1..=5 {
            let bound = min_tail_orbit_norm(&g, k).unwrap();
            let brute = table
                .level(k)
                .iter()
                .flat_map(|e| [e.apply_vector(&o).unwrap().norm(), e.apply_inverse_vector(&o).unwrap().norm()])
                .fold(f64::INFINITY, f64::min);
            assert!(brute >= bound, "k={k}: {brute} < {bound}");
        }
    }

    #[test]
    fn too_deep_cover_refused() {
        let g = four_disk_reference();
        assert!(disk_cover(&g, 7).is_ok());
        assert!(matches!(disk_cover(&g, 8), Err(Error::CoverTooDeep { level: 8, .. })));
        assert_eq!(deepest_cover(&g, 9).unwrap().level, 7);
    }

    #[test]
    fn limit_set_examples() {
        let g = four_disk_reference();
        let s1 = limit_set_sample(&g, 1).unwrap();
        assert_eq!(s1.len(), 4);
        let expected = [[-1.0, 0.0], [1.0, 0.0], [0.0, -1.0], [0.0, 1.0]];
        for (p, e) in s1.iter().zip(expected) {
            assert!((p.coords() - Vector::from_column_slice(&e)).norm() < 1e-15);
        }
        for k in 1..=4 {
            let cover = disk_cover(&g, k).unwrap();
            let next = limit_set_sample(&g, k + 1).unwrap();
            for p in &next {
                assert!((p.norm() - 1.0).abs() <= 1e-12);
                assert!(cover.gap(p.coords()) <= cover.max_radius);
            }
        }
    }

    #[test]
    fn strategies_agree() {
        let g = four_disk_reference();
        let a = orbit_with(&g, 5, &Point::origin(2), Strategy::Sequential).unwrap();
        let b = orbit_with(&g, 5, &Point::origin(2), Strategy::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
