use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use ballcollar::certify::{lipschitz_constant, WORKING_FRACTION};
use ballcollar::group::{disk_cover, orbit, ElementTable};
use ballcollar::{
    certified_neighborhood, good_constant, precisely_invariant_radius, sup_isometric_radius, verify_isometry_on,
    Point, QuotientMetric, SchottkyGroup, Vector,
};

use crate::scene::{self, Scene};
use crate::spec::{parse_spec, GroupSpecFile};

/// What a command concluded; mapped to the process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Valid group, issued certificate, certified distance, artifact written.
    Positive,
    /// Invalid group, refused certificate, uncertified distance.
    Negative,
}

pub fn load_spec(path: &Path) -> Result<GroupSpecFile> {
    let parsed = parse_spec(path)?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok(parsed.spec)
}

pub fn load_group(path: &Path) -> Result<SchottkyGroup> {
    let spec = load_spec(path)?;
    spec.group().with_context(|| format!("spec {}", path.display()))
}

pub fn parse_coords(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .with_context(|| format!("cannot parse coordinate {t:?} in {text:?}"))
        })
        .collect()
}

fn check_dim(group: &SchottkyGroup, coords: &[f64], flag: &str) -> Result<()> {
    if coords.len() != group.dim() {
        bail!("{flag} has {} coordinates, group dimension is {}", coords.len(), group.dim());
    }
    Ok(())
}

/// Boundary point from `--point`; radially normalized so that rounded input
/// such as `0.70711,0.70711` names the intended point of the unit sphere.
pub fn boundary_point(group: &SchottkyGroup, text: &str) -> Result<Point> {
    let coords = parse_coords(text)?;
    check_dim(group, &coords, "--point")?;
    let v = Vector::from_column_slice(&coords);
    let norm = v.norm();
    if (norm - 1.0).abs() > 1e-3 {
        bail!("--point must lie on the unit sphere (|a| = {norm})");
    }
    Ok(Point::boundary_direction(&v)?)
}

pub fn interior_point(group: &SchottkyGroup, text: &str, flag: &str) -> Result<Point> {
    let coords = parse_coords(text)?;
    check_dim(group, &coords, flag)?;
    let p = Point::from_slice(&coords)?;
    if !p.is_interior() {
        bail!("{flag} must be an interior point (|x| = {})", p.norm());
    }
    Ok(p)
}

/// Output sink: a file when a path is given, stdout otherwise.
fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(io::BufWriter::new(
            fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn validate(spec_path: &Path) -> Result<Outcome> {
    let spec = load_spec(spec_path)?;
    let report = spec.validate();
    println!(
        "{} sphere pairs in dimension {}: {}",
        spec.pairs.len(),
        spec.dimension,
        (0..spec.pairs.len()).map(|i| spec.label(i)).collect::<Vec<_>>().join(", ")
    );
    print!("{report}");
    Ok(if report.is_valid() {
        Outcome::Positive
    } else {
        Outcome::Negative
    })
}

pub fn orbit_csv(spec_path: &Path, max_len: usize, base: Option<&str>, out: Option<&Path>) -> Result<Outcome> {
    let group = load_group(spec_path)?;
    let base = match base {
        Some(b) => interior_point(&group, b, "--base")?,
        None => Point::origin(group.dim()),
    };
    let entries = orbit(&group, max_len, &base)?;
    let mut w = csv::Writer::from_writer(sink(out)?);
    let mut header = vec!["word".to_string()];
    header.extend((1..=group.dim()).map(|i| format!("x{i}")));
    header.extend(["orbit_norm".to_string(), "isometric_radius".to_string()]);
    w.write_record(&header)?;
    for e in &entries {
        let mut row = vec![e.word.to_string()];
        row.extend(e.point.coords().iter().map(|c| c.to_string()));
        row.push(e.point.norm().to_string());
        row.push(e.isometric_radius.map(|r| r.to_string()).unwrap_or_default());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(Outcome::Positive)
}

pub fn limitset_csv(spec_path: &Path, level: usize, out: Option<&Path>) -> Result<Outcome> {
    let group = load_group(spec_path)?;
    let cover = disk_cover(&group, level)?;
    let mut w = csv::Writer::from_writer(sink(out)?);
    let mut header = vec!["kind".to_string(), "word".to_string()];
    header.extend((1..=group.dim()).map(|i| format!("x{i}")));
    header.push("radius".to_string());
    w.write_record(&header)?;
    for d in &cover.disks {
        let mut row = vec!["disk".to_string(), d.word.to_string()];
        row.extend(d.sphere.center().iter().map(|c| c.to_string()));
        row.push(d.sphere.radius().to_string());
        w.write_record(&row)?;
    }
    for d in &cover.disks {
        let p = Point::boundary_direction(d.sphere.center())?;
        let mut row = vec!["sample".to_string(), d.word.to_string()];
        row.extend(p.coords().iter().map(|c| c.to_string()));
        row.push(String::new());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(Outcome::Positive)
}

pub fn constants(spec_path: &Path, point: &str, level: usize) -> Result<Outcome> {
    let group = load_group(spec_path)?;
    let a = boundary_point(&group, point)?;
    println!("a = {a}, level L = {level}");
    let r_pi = match precisely_invariant_radius(&group, &a) {
        Ok(r) => r,
        Err(e) => {
            println!("r_pi: refused ({e})");
            return Ok(Outcome::Negative);
        }
    };
    println!("r_pi       = {r_pi:.6}  [distance from a to the nearest pairing disk; ping-pong]");
    let sup = sup_isometric_radius(&group, level)?;
    println!(
        "sup r      = {:.6}  [max over words of length <= {} (attained at {}); tail r <= {:.3e} from the level-{} cover; certified: {}]",
        sup.value, sup.level, sup.attained, sup.tail_radius, sup.tail_cover_level, sup.certified
    );
    let rho0 = WORKING_FRACTION * r_pi;
    let lip = match lipschitz_constant(&group, &a, rho0, level) {
        Ok(l) => l,
        Err(e) => {
            println!("C'         : refused ({e})");
            return Ok(Outcome::Negative);
        }
    };
    println!(
        "C'         = {:.6}  [max(1, sup r^2 / delta^2) on B(a, {rho0:.6}); delta = {:.6} = min(center clearance {:.6}, level-{} cover clearance {:.6})]",
        lip.constant, lip.delta, lip.center_clearance, lip.cover_level, lip.cover_clearance
    );
    println!("C          = {:.6}  [2C']", good_constant(lip.constant)?);
    Ok(Outcome::Positive)
}

pub struct CertifyArgs<'a> {
    pub spec: &'a Path,
    pub point: &'a str,
    pub level: usize,
    pub out: Option<&'a Path>,
    pub verify: Option<usize>,
    pub seed: u64,
}

pub fn certify(args: CertifyArgs<'_>) -> Result<Outcome> {
    let group = load_group(args.spec)?;
    let a = boundary_point(&group, args.point)?;
    let nbhd = match certified_neighborhood(&group, &a, args.level) {
        Ok(n) => n,
        Err(e) => {
            eprintln!("certificate refused: {e}");
            return Ok(Outcome::Negative);
        }
    };
    let mut report = nbhd.to_string();
    if let Some(n) = args.verify {
        let v = verify_isometry_on(&group, &nbhd, n, args.seed)?;
        report.push_str(&format!("verification (seed {}):\n{v}", args.seed));
    }
    print!("{report}");
    if let Some(out) = args.out {
        fs::write(out, &report).with_context(|| format!("cannot write {}", out.display()))?;
    }
    Ok(Outcome::Positive)
}

pub fn dist(spec_path: &Path, x: &str, y: &str, level: usize) -> Result<Outcome> {
    let group = load_group(spec_path)?;
    let x = interior_point(&group, x, "--x")?;
    let y = interior_point(&group, y, "--y")?;
    let metric = QuotientMetric::new(&group, level)?;
    let r = metric.distance(&x, &y)?;
    println!("value      = {:.12}", r.value);
    println!("minimizer  = {}", r.minimizer);
    println!("certified  = {}", r.certified);
    println!("tail_bound = {:.12}", r.tail_bound);
    Ok(if r.certified {
        Outcome::Positive
    } else {
        Outcome::Negative
    })
}

#[derive(Debug, Clone, Default)]
pub struct RenderLayers {
    pub no_disks: bool,
    pub orbit: Option<usize>,
    pub isometric: Option<usize>,
    pub cover: Option<usize>,
    pub collar: Option<String>,
    pub level: usize,
}

pub fn render(spec_path: &Path, out: &Path, layers: &RenderLayers) -> Result<Outcome> {
    let group = load_group(spec_path)?;
    scene::require_planar(&group)?;
    let mut s = Scene::new();
    if !layers.no_disks {
        s.push(scene::pairing_layer(&group));
    }
    if let Some(k) = layers.cover {
        for level in 1..=k {
            s.push(scene::cover_layer(&disk_cover(&group, level)?));
        }
    }
    if let Some(l) = layers.isometric {
        let table = ElementTable::build(&group, l)?;
        let spheres: Vec<_> = table.nontrivial().iter().filter_map(|e| e.inversion().cloned()).collect();
        s.push(scene::isometric_layer(&spheres));
    }
    if let Some(l) = layers.orbit {
        s.push(scene::orbit_layer(&orbit(&group, l, &Point::origin(2))?));
    }
    if let Some(p) = &layers.collar {
        let a = boundary_point(&group, p)?;
        let n = match certified_neighborhood(&group, &a, layers.level) {
            Ok(n) => n,
            Err(e) => {
                eprintln!("certificate refused: {e}");
                return Ok(Outcome::Negative);
            }
        };
        s.push(scene::collar_layer(&n));
    }
    scene::render_svg(&s, out)?;
    Ok(Outcome::Positive)
}
