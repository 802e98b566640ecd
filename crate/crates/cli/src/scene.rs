//! Planar scenes and their SVG rendering.
//!
//! The unit circle is always drawn and maps to a fixed circle in an 800×800
//! viewport; the y axis points up. Layers render in insertion order and
//! shapes in their given order, with every number printed to 6 decimals, so
//! identical scenes give byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use ballcollar::group::{DiskCover, OrbitEntry};
use ballcollar::{CertifiedNeighborhood, InversionSphere, SchottkyGroup};
use thiserror::Error;

pub const VIEWPORT: f64 = 800.0;
/// Viewport radius of the unit circle.
pub const UNIT_RADIUS: f64 = 380.0;
const DOT_RADIUS: f64 = 1.5;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("rendering supports dimension 2 only (group has dimension {0})")]
    UnsupportedDimension(usize),
    #[error("non-finite coordinate in layer {0}")]
    NonFinite(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Circle { cx: f64, cy: f64, r: f64 },
    Dot { cx: f64, cy: f64 },
    /// Arc of the unit circle between two angles (radians, counterclockwise).
    BoundaryArc { from: f64, to: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub name: String,
    pub stroke: &'static str,
    pub fill: &'static str,
    pub stroke_width: f64,
    pub shapes: Vec<Shape>,
}

/// Layers drawn on top of the unit circle.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scene {
    pub layers: Vec<Layer>,
}

impl Scene {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, layer: Layer) {
        self.layers.push(layer);
    }

    fn check_finite(&self) -> Result<(), SceneError> {
        for layer in &self.layers {
            let finite = layer.shapes.iter().all(|s| match *s {
                Shape::Circle { cx, cy, r } => cx.is_finite() && cy.is_finite() && r.is_finite(),
                Shape::Dot { cx, cy } => cx.is_finite() && cy.is_finite(),
                Shape::BoundaryArc { from, to } => from.is_finite() && to.is_finite(),
            });
            if !finite {
                return Err(SceneError::NonFinite(layer.name.clone()));
            }
        }
        Ok(())
    }
}

pub fn require_planar(group: &SchottkyGroup) -> Result<(), SceneError> {
    if group.dim() != 2 {
        return Err(SceneError::UnsupportedDimension(group.dim()));
    }
    Ok(())
}

fn sphere_circle(s: &InversionSphere) -> Shape {
    Shape::Circle {
        cx: s.center()[0],
        cy: s.center()[1],
        r: s.radius(),
    }
}

pub fn pairing_layer(group: &SchottkyGroup) -> Layer {
    Layer {
        name: "pairing-disks".into(),
        stroke: "#1f4e9e",
        fill: "#1f4e9e22",
        stroke_width: 1.5,
        shapes: group.pairing_disks().iter().map(sphere_circle).collect(),
    }
}

pub fn orbit_layer(orbit: &[OrbitEntry]) -> Layer {
    Layer {
        name: "orbit".into(),
        stroke: "none",
        fill: "#b22222",
        stroke_width: 0.0,
        shapes: orbit
            .iter()
            .map(|e| Shape::Dot {
                cx: e.point.coords()[0],
                cy: e.point.coords()[1],
            })
            .collect(),
    }
}

pub fn isometric_layer(spheres: &[InversionSphere]) -> Layer {
    Layer {
        name: "isometric-circles".into(),
        stroke: "#2e8b57",
        fill: "none",
        stroke_width: 0.75,
        shapes: spheres.iter().map(sphere_circle).collect(),
    }
}

pub fn cover_layer(cover: &DiskCover) -> Layer {
    Layer {
        name: format!("cover-level-{}", cover.level),
        stroke: "#555555",
        fill: "none",
        stroke_width: 0.5,
        shapes: cover.disks.iter().map(|d| sphere_circle(&d.sphere)).collect(),
    }
}

/// `U = B(a, ρ)` together with its trace `U ∩ S^1`.
pub fn collar_layer(n: &CertifiedNeighborhood) -> Layer {
    let a = n.center.coords();
    let theta = a[1].atan2(a[0]);
    let half = 2.0 * (n.rho / 2.0).min(1.0).asin();
    Layer {
        name: "collar".into(),
        stroke: "#d2691e",
        fill: "#d2691e33",
        stroke_width: 1.5,
        shapes: vec![
            Shape::Circle {
                cx: a[0],
                cy: a[1],
                r: n.rho,
            },
            Shape::BoundaryArc {
                from: theta - half,
                to: theta + half,
            },
        ],
    }
}

fn to_view(x: f64, y: f64) -> (f64, f64) {
    let c = VIEWPORT / 2.0;
    (c + UNIT_RADIUS * x, c - UNIT_RADIUS * y)
}

pub fn svg_string(scene: &Scene) -> Result<String, SceneError> {
    scene.check_finite()?;
    let mut out = String::new();
    let c = VIEWPORT / 2.0;
    // writing into a String cannot fail
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{v:.0}" height="{v:.0}" viewBox="0 0 {v:.0} {v:.0}">"#,
        v = VIEWPORT
    );
    let _ = writeln!(out, r#"  <rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"  <circle id="unit-circle" cx="{c:.6}" cy="{c:.6}" r="{UNIT_RADIUS:.6}" fill="none" stroke="black" stroke-width="1.000000"/>"#
    );
    for layer in &scene.layers {
        let _ = writeln!(
            out,
            r#"  <g id="{}" stroke="{}" fill="{}" stroke-width="{:.6}">"#,
            layer.name, layer.stroke, layer.fill, layer.stroke_width
        );
        for shape in &layer.shapes {
            match *shape {
                Shape::Circle { cx, cy, r } => {
                    let (x, y) = to_view(cx, cy);
                    let _ = writeln!(out, r#"    <circle cx="{x:.6}" cy="{y:.6}" r="{:.6}"/>"#, UNIT_RADIUS * r);
                }
                Shape::Dot { cx, cy } => {
                    let (x, y) = to_view(cx, cy);
                    let _ = writeln!(out, r#"    <circle cx="{x:.6}" cy="{y:.6}" r="{DOT_RADIUS:.6}"/>"#);
                }
                Shape::BoundaryArc { from, to } => {
                    let (x0, y0) = to_view(from.cos(), from.sin());
                    let (x1, y1) = to_view(to.cos(), to.sin());
                    let large = u8::from(to - from > std::f64::consts::PI);
                    // counterclockwise in the plane is clockwise on screen (sweep 0)
                    let _ = writeln!(
                        out,
                        r#"    <path d="M {x0:.6} {y0:.6} A {r:.6} {r:.6} 0 {large} 0 {x1:.6} {y1:.6}" fill="none" stroke-width="4.000000"/>"#,
                        r = UNIT_RADIUS
                    );
                }
            }
        }
        let _ = writeln!(out, "  </g>");
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

#[derive(Debug, Error)]
pub enum RenderError {
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
}

pub fn render_svg(scene: &Scene, path: &Path) -> Result<(), RenderError> {
    let svg = svg_string(scene)?;
    fs::write(path, svg).map_err(|source| RenderError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ballcollar::group::four_disk_reference;
    use ballcollar::disk_cover;

    #[test]
    fn empty_scene_has_unit_circle_only() {
        let svg = svg_string(&Scene::new()).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1);
        assert!(svg.contains(r#"r="380.000000""#));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn cover_levels_one_to_three() {
        let g = four_disk_reference();
        let mut scene = Scene::new();
        for k in 1..=3 {
            scene.push(cover_layer(&disk_cover(&g, k).unwrap()));
        }
        let svg = svg_string(&scene).unwrap();
        assert_eq!(svg.matches("<circle").count(), 1 + 4 + 12 + 36);
        assert_eq!(svg, svg_string(&scene).unwrap());
    }

    #[test]
    fn non_finite_rejected() {
        let mut scene = Scene::new();
        scene.push(Layer {
            name: "bad".into(),
            stroke: "black",
            fill: "none",
            stroke_width: 1.0,
            shapes: vec![Shape::Dot { cx: f64::NAN, cy: 0.0 }],
        });
        assert!(matches!(svg_string(&scene), Err(SceneError::NonFinite(_))));
    }
}
