//! SVG rendering of spiral yin-yang symbols.
//!
//! Follows the MetaPost generator: a spiral sampled at `r = 0, δ, 2δ, …, 1`
//! with polar angle `180·turn·r²` degrees, its rotated copies, the bounding
//! circle, and each region closed by a rim arc between consecutive spiral
//! ends. The symbol is rotated by `(1/2 − turn)·180 + rotate` degrees, after
//! a mirror in the vertical axis when `clockwise` is off.
//!
//! Paths pass through the samples with Catmull-Rom splines converted to
//! cubic Béziers. Coordinates are written with six decimals so that output
//! is byte-stable.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const PX_PER_CM: f64 = 96.0 / 2.54;
const PX_PER_BP: f64 = 96.0 / 72.0;

type Point = (f64, f64);

/// Parameters of the generator. Lengths are in CSS pixels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderConfig {
    pub turn: f64,
    pub radius_px: f64,
    pub rotate_deg: f64,
    pub clockwise: bool,
    pub parts: u32,
    pub dark: [f64; 3],
    pub stroke_width_px: f64,
    /// Sampling step in `r`; `None` uses 1/16, or `1/(16·turn)` past two turns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interpol: Option<f64>,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig {
            turn: 1.0,
            radius_px: 2.0 * PX_PER_CM,
            rotate_deg: 0.0,
            clockwise: true,
            parts: 2,
            dark: [0.5, 0.5, 0.5],
            stroke_width_px: PX_PER_BP,
            interpol: None,
        }
    }
}

impl RenderConfig {
    pub fn interpol(&self) -> f64 {
        self.interpol.unwrap_or_else(|| default_interpol(self.turn))
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("turn", self.turn),
            ("radius_px", self.radius_px),
            ("stroke_width_px", self.stroke_width_px),
            ("interpol", self.interpol()),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must be positive and finite".into(),
                });
            }
        }
        if !self.rotate_deg.is_finite() {
            return Err(Error::InvalidParameter {
                name: "rotate_deg",
                value: self.rotate_deg,
                reason: "must be finite".into(),
            });
        }
        if self.parts < 2 {
            return Err(Error::InvalidParameter {
                name: "parts",
                value: self.parts as f64,
                reason: "need at least 2 parts".into(),
            });
        }
        if let Some(&c) = self.dark.iter().find(|c| !(0.0..=1.0).contains(*c)) {
            return Err(Error::InvalidParameter {
                name: "dark",
                value: c,
                reason: "color channels lie in [0, 1]".into(),
            });
        }
        Ok(())
    }

    /// Rotation applied to the whole symbol, in degrees.
    pub fn placement_angle(&self) -> f64 {
        (0.5 - self.turn) * 180.0 + self.rotate_deg
    }

    /// Distance from the canvas edge to the disk center.
    pub fn center_px(&self) -> f64 {
        self.radius_px + PX_PER_CM
    }

    /// Maps a point of the unit disk to SVG pixel coordinates.
    pub fn place(&self, (x, y): Point) -> Point {
        let x = if self.clockwise { x } else { -x };
        let (x, y) = rotate_deg(
            (x * self.radius_px, y * self.radius_px),
            self.placement_angle(),
        );
        let c = self.center_px();
        (c + x, c - y)
    }
}

pub fn default_interpol(turn: f64) -> f64 {
    if turn > 2.0 {
        1.0 / (16.0 * turn)
    } else {
        1.0 / 16.0
    }
}

fn rotate_deg((x, y): Point, deg: f64) -> Point {
    let (s, c) = deg.to_radians().sin_cos();
    (c * x - s * y, s * x + c * y)
}

/// Samples of the unit spiral: the origin, `(r, 0)` rotated by `180·turn·r²`
/// degrees for `r = 0, interpol, …` up to and including 1, and the closing
/// point `(1, 0)` rotated by `180·turn` degrees.
pub fn spiral_points(turn: f64, interpol: f64) -> Vec<Point> {
    let steps = (1.0 / interpol - 1e-9).ceil() as usize;
    let mut points = Vec::with_capacity(steps + 3);
    points.push((0.0, 0.0));
    for i in 0..=steps {
        let r = (i as f64 * interpol).min(1.0);
        points.push(rotate_deg((r, 0.0), 180.0 * r * r * turn));
    }
    points.push(rotate_deg((1.0, 0.0), 180.0 * turn));
    points
}

/// Spiral copies `j = 0..parts`, rotated by `360·j/parts` degrees and placed
/// on the canvas.
pub fn placed_branches(config: &RenderConfig) -> Vec<Vec<Point>> {
    let base = spiral_points(config.turn, config.interpol());
    (0..config.parts)
        .map(|j| {
            let angle = 360.0 * j as f64 / config.parts as f64;
            base.iter()
                .map(|&p| config.place(rotate_deg(p, angle)))
                .collect()
        })
        .collect()
}

/// Cubic segment `[start, control, control, end]`.
type Cubic = [Point; 4];

fn distinct(a: Point, b: Point) -> bool {
    a.0 != b.0 || a.1 != b.1
}

/// Catmull-Rom spline through `points`. Neighbors are taken among distinct
/// points, and a repeated sample gives a zero-length segment.
fn catmull_rom(points: &[Point]) -> Vec<Cubic> {
    let n = points.len();
    let prev = |i: usize| {
        (0..i)
            .rev()
            .map(|j| points[j])
            .find(|&q| distinct(q, points[i]))
            .unwrap_or(points[i])
    };
    let next = |i: usize| {
        (i + 1..n)
            .map(|j| points[j])
            .find(|&q| distinct(q, points[i]))
            .unwrap_or(points[i])
    };
    (0..n.saturating_sub(1))
        .map(|i| {
            let (p, q) = (points[i], points[i + 1]);
            if !distinct(p, q) {
                return [p, p, q, q];
            }
            let (a, b) = (prev(i), next(i));
            let (c, d) = (prev(i + 1), next(i + 1));
            let c1 = (p.0 + (b.0 - a.0) / 6.0, p.1 + (b.1 - a.1) / 6.0);
            let c2 = (q.0 - (d.0 - c.0) / 6.0, q.1 - (d.1 - c.1) / 6.0);
            [p, c1, c2, q]
        })
        .collect()
}

fn reversed(segments: &[Cubic]) -> Vec<Cubic> {
    segments
        .iter()
        .rev()
        .map(|&[a, b, c, d]| [d, c, b, a])
        .collect()
}

/// Fixed six-decimal formatting without negative zero.
fn num(x: f64) -> String {
    let r = (x * 1e6).round() / 1e6;
    format!("{:.6}", if r == 0.0 { 0.0 } else { r })
}

fn pt(p: Point) -> String {
    format!("{},{}", num(p.0), num(p.1))
}

fn push_cubics(d: &mut String, segments: &[Cubic]) {
    for [_, c1, c2, e] in segments {
        let _ = write!(d, " C {} {} {}", pt(*c1), pt(*c2), pt(*e));
    }
}

fn hex_color(rgb: [f64; 3]) -> String {
    let byte = |c: f64| (c.clamp(0.0, 1.0) * 255.0).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        byte(rgb[0]),
        byte(rgb[1]),
        byte(rgb[2])
    )
}

/// One drawable element.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Path {
        class: &'static str,
        d: String,
        fill: String,
        stroke: Option<(String, f64)>,
    },
    Circle {
        class: &'static str,
        center: Point,
        r: f64,
        stroke: String,
        stroke_width: f64,
    },
}

/// An SVG 1.1 document.
#[derive(Debug, Clone, PartialEq)]
pub struct SvgDocument {
    pub width: f64,
    pub height: f64,
    /// JSON of the configuration, embedded as metadata.
    pub metadata: String,
    pub elements: Vec<Element>,
}

impl SvgDocument {
    pub fn paths<'a>(&'a self, class: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.elements.iter().filter_map(move |e| match e {
            Element::Path { class: c, d, .. } if *c == class => Some(d.as_str()),
            _ => None,
        })
    }
}

impl fmt::Display for SvgDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (w, h) = (num(self.width), num(self.height));
        writeln!(f, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
        writeln!(
            f,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
        )?;
        writeln!(f, "<metadata>{}</metadata>", self.metadata)?;
        for e in &self.elements {
            match e {
                Element::Path {
                    class,
                    d,
                    fill,
                    stroke,
                } => {
                    write!(f, r#"<path class="{class}" d="{d}" fill="{fill}""#)?;
                    match stroke {
                        Some((color, width)) => {
                            write!(f, r#" stroke="{color}" stroke-width="{}""#, num(*width))?
                        }
                        None => write!(f, r#" stroke="none""#)?,
                    }
                    writeln!(f, "/>")?;
                }
                Element::Circle {
                    class,
                    center,
                    r,
                    stroke,
                    stroke_width,
                } => writeln!(
                    f,
                    r#"<circle class="{class}" cx="{}" cy="{}" r="{}" fill="none" stroke="{stroke}" stroke-width="{}"/>"#,
                    num(center.0),
                    num(center.1),
                    num(*r),
                    num(*stroke_width)
                )?,
            }
        }
        writeln!(f, "</svg>")
    }
}

/// Fill of region `i` of `parts`: the dark color blended towards white.
fn shade(config: &RenderConfig, i: u32) -> String {
    let t = i as f64 / (config.parts - 1) as f64;
    hex_color(config.dark.map(|c| c + (1.0 - c) * t))
}

/// Renders the symbol. Region 0 lies between spiral copy `parts − 1` and copy
/// 0 and takes the dark color; further regions are progressively lighter, so
/// two parts give dark and white.
pub fn render(config: &RenderConfig) -> Result<SvgDocument> {
    config.validate()?;
    let k = config.parts;
    let branches = placed_branches(config);
    let splines: Vec<Vec<Cubic>> = branches.iter().map(|b| catmull_rom(b)).collect();
    let sweep = if config.clockwise { 1 } else { 0 };
    let r = num(config.radius_px);

    let mut elements = Vec::new();
    for j in 0..k as usize {
        let back = (j + k as usize - 1) % k as usize;
        let rim_end = *branches[back].last().expect("non-empty spiral");
        let mut d = format!("M {}", pt(branches[j][0]));
        push_cubics(&mut d, &splines[j]);
        let _ = write!(d, " A {r} {r} 0 0 {sweep} {}", pt(rim_end));
        push_cubics(&mut d, &reversed(&splines[back]));
        d.push_str(" Z");
        elements.push(Element::Path {
            class: "region",
            d,
            fill: shade(config, j as u32),
            stroke: None,
        });
    }
    let spiral_width = 0.5 * config.stroke_width_px;
    for (branch, spline) in branches.iter().zip(&splines) {
        let mut d = format!("M {}", pt(branch[0]));
        push_cubics(&mut d, spline);
        elements.push(Element::Path {
            class: "spiral",
            d,
            fill: "none".into(),
            stroke: Some(("#000000".into(), spiral_width)),
        });
    }
    let c = config.center_px();
    elements.push(Element::Circle {
        class: "outline",
        center: (c, c),
        r: config.radius_px,
        stroke: "#000000".into(),
        stroke_width: config.stroke_width_px,
    });

    let mut embedded = config.clone();
    embedded.interpol = Some(config.interpol());
    Ok(SvgDocument {
        width: 2.0 * c,
        height: 2.0 * c,
        metadata: serde_json::to_string(&embedded)?,
        elements,
    })
}

/// Renders with `parts` spiral copies at `360·i/parts` degrees.
pub fn render_kpartite(config: &RenderConfig, parts: u32) -> Result<SvgDocument> {
    render(&RenderConfig {
        parts,
        ..config.clone()
    })
}

/// A named configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub config: RenderConfig,
}

pub fn presets() -> Vec<Preset> {
    let with = |turn: f64, radius_cm: f64, rotate: f64| RenderConfig {
        turn,
        radius_px: radius_cm * PX_PER_CM,
        rotate_deg: rotate,
        ..RenderConfig::default()
    };
    vec![
        Preset {
            name: "classic",
            description:
                "one-turn Fermat spiral, the generator defaults: turn=1; radius=2cm; rotate=0",
            config: with(1.0, 2.0, 0.0),
        },
        Preset {
            name: "britannica",
            description: "close to the encyclopedia drawing: turn=2/9",
            config: with(2.0 / 9.0, 2.0, 0.0),
        },
        Preset {
            name: "chosun",
            description: "Chosun dynasty flag: turn=.6; radius=.75cm; rotate=-8",
            config: with(0.6, 0.75, -8.0),
        },
        Preset {
            name: "korea1882",
            description: "earliest Korean flag: turn=1.5; radius=1.465cm; rotate=-60",
            config: with(1.5, 1.465, -60.0),
        },
    ]
}

pub fn preset(name: &str) -> Result<RenderConfig> {
    presets()
        .into_iter()
        .find(|p| p.name == name)
        .map(|p| p.config)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

/// The four phases of the evolution figure as `(label, turn)`.
pub const EVOLUTION: [(&str, f64); 4] = [("a", 2.0 / 9.0), ("b", 0.5), ("c", 1.0), ("d", 2.0)];
